//! Batch command line: JSON in, JSON or CSV out.
//!
//! Exit codes: 0 success, 1 selftest failure, 2 parse or schema error,
//! 3 domain error, 4 resource ceiling.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use eka_core::blowup::{blowup_charts, saturate_monomial_chart, verify_cover};
use eka_core::cech::{cech_report, rank_growth, OracleConfig};
use eka_core::eval::evaluate;
use eka_core::functors::{additivity_obstruction, equivalence_check, functor_mod_p, rees_pieces, ReesMode, SearchLimits};
use eka_core::series::monomial_ideal_member;
use eka_core::{CoeffElement, Error, ExpMode, RestrictedSeries, Result, RingDescriptor, RingKind};
use serde_json::{json, Value};

use crate::formats::{self, doc_type};
use crate::selftest::{self, SelftestConfig};

#[derive(Parser, Debug)]
#[command(name = "eka", version, about = "Arithmetic in eka towers, restricted series, blow-up charts and cohomology tables")]
pub struct Cli {
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ReesArg {
    Classical,
    Eka,
}

/// Documents are file paths or inline JSON.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a ring descriptor.
    Ring {
        #[arg(long, default_value = "char0-eka")]
        kind: String,
        #[arg(long, default_value_t = 0)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        depth: u32,
        #[arg(long, default_value_t = 1)]
        precision: u32,
        #[arg(long)]
        laurent: bool,
    },
    /// Sum of two elements or two series.
    Add {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Product of two elements or two series.
    Mul {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Evaluate a series along root towers, one per variable.
    Eval {
        #[arg(long)]
        series: String,
        #[arg(long, required = true)]
        tower: Vec<String>,
    },
    /// Substitute X -> X^(1/d^i).
    Shift {
        #[arg(long)]
        series: String,
        #[arg(long)]
        by: u32,
    },
    /// Valuation of an element, Gauss valuation of a series.
    Val {
        #[arg(long)]
        doc: String,
    },
    /// Membership of a monomial in a monomial ideal.
    Member {
        /// JSON array of exponent vectors.
        #[arg(long)]
        gens: String,
        /// JSON exponent vector.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 2)]
        base: u64,
        #[arg(long)]
        rational: bool,
    },
    /// Reduce an element, a series or a tower mod p.
    Modp {
        #[arg(long)]
        doc: String,
    },
    /// Reduction on the enumerated monomial-tower family.
    Equivalence {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        depth: u32,
        #[arg(long, default_value_t = 1)]
        bound: u32,
        #[arg(long)]
        max_nodes: Option<u64>,
        #[arg(long)]
        max_towers: Option<u64>,
    },
    /// Search for g with g^d = 1 + X over F_p.
    Obstruction {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long, default_value_t = 6)]
        bound: u32,
        #[arg(long, default_value_t = 5_000_000)]
        max_candidates: u64,
    },
    /// Graded pieces of the Rees algebra of (p).
    Rees {
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value = "eka")]
        mode: ReesArg,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[arg(long)]
        root_depth: Option<u32>,
    },
    /// Chart atlas of the blow-up of an algebra along generators.
    Blowup {
        #[arg(long)]
        algebra: String,
        #[arg(long, required = true)]
        gens: Vec<String>,
        #[arg(long)]
        saturate: bool,
        /// Saturation universe bound in units of the finest exponent step.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Ranks of H^i(P^n, O(m)) at a level.
    Cohomology {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: String,
        /// Residue characteristic; the exponent base in dyadic mode.
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// K in dyadic mode, the denominator bound B in rational mode.
        #[arg(long)]
        level: u32,
        #[arg(long)]
        rational: bool,
        #[arg(long)]
        basis: bool,
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The nonvanishing rank across a range of levels.
    Growth {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[arg(long)]
        rational: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the acceptance grid.
    Selftest {
        #[arg(long)]
        config: Option<String>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::Resource(_) => 4,
        _ => 3,
    }
}

/// Inline JSON if it looks like JSON, otherwise a path.
pub fn load_doc(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return formats::from_text(arg);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?;
    formats::from_text(&text)
}

enum Operand {
    Elem(CoeffElement),
    Series(RestrictedSeries),
}

fn operand(v: &Value) -> Result<Operand> {
    match doc_type(v) {
        Some("element") => Ok(Operand::Elem(formats::element_from_json(v)?)),
        Some("series") => Ok(Operand::Series(formats::series_from_json(v)?)),
        _ => Err(Error::Parse("expected an element or series document".into())),
    }
}

fn binary(a: &str, b: &str, add: bool) -> Result<Value> {
    match (operand(&load_doc(a)?)?, operand(&load_doc(b)?)?) {
        (Operand::Elem(x), Operand::Elem(y)) => {
            Ok(formats::element_to_json(&if add { x.add(&y)? } else { x.mul(&y)? }))
        }
        (Operand::Series(f), Operand::Series(g)) => {
            Ok(formats::series_to_json(&if add { f.add(&g)? } else { f.mul(&g)? }))
        }
        _ => Err(Error::ContextMismatch("cannot combine an element with a series".into())),
    }
}

/// Output of one command: text plus its exit status.
pub struct Output {
    pub text: String,
    pub status: i32,
    pub diagnostics: Vec<String>,
}

fn json_out(v: Value) -> Output {
    Output { text: formats::to_text(&v), status: 0, diagnostics: Vec::new() }
}

fn exp_mode(rational: bool, base: u64) -> Result<ExpMode> {
    if rational {
        Ok(ExpMode::Rational)
    } else {
        ExpMode::dyadic(base)
    }
}

pub fn dispatch(cmd: &Command) -> Result<Output> {
    Ok(match cmd {
        Command::Ring { kind, p, d, depth, precision, laurent } => {
            let kind = RingKind::from_name(kind)?;
            json_out(formats::ring_doc(&RingDescriptor::new(kind, *p, *d, *depth, *precision, *laurent)?))
        }
        Command::Add { a, b } => json_out(binary(a, b, true)?),
        Command::Mul { a, b } => json_out(binary(a, b, false)?),
        Command::Eval { series, tower } => {
            let f = formats::series_from_json(&load_doc(series)?)?;
            let towers =
                tower.iter().map(|t| formats::tower_from_json(&load_doc(t)?)).collect::<Result<Vec<_>>>()?;
            json_out(formats::element_to_json(&evaluate(&f, &towers)?))
        }
        Command::Shift { series, by } => {
            let f = formats::series_from_json(&load_doc(series)?)?;
            json_out(formats::series_to_json(&f.root_shift(*by)?))
        }
        Command::Val { doc } => {
            let v = match operand(&load_doc(doc)?)? {
                Operand::Elem(x) => x.val(),
                Operand::Series(f) => f.gauss_val(),
            };
            json_out(json!({ "type": "valuation", "value": formats::valuation_to_json(&v) }))
        }
        Command::Member { gens, target, base, rational } => {
            let mode = exp_mode(*rational, *base)?;
            let gens_v = formats::from_text(gens)?;
            let list = gens_v.as_array().ok_or_else(|| Error::Parse("gens must be an array".into()))?;
            let gens = list.iter().map(|g| formats::mexp_from_json(mode, g)).collect::<Result<Vec<_>>>()?;
            let t = formats::mexp_from_json(mode, &formats::from_text(target)?)?;
            json_out(json!({ "type": "membership", "member": monomial_ideal_member(&gens, &t)? }))
        }
        Command::Modp { doc } => {
            let v = load_doc(doc)?;
            match doc_type(&v) {
                Some("tower") => {
                    let t = formats::tower_from_json(&v)?;
                    json_out(formats::tower_to_json(&t.map(CoeffElement::mod_p)?))
                }
                _ => match operand(&v)? {
                    Operand::Elem(x) => json_out(formats::element_to_json(&x.mod_p()?)),
                    Operand::Series(f) => json_out(formats::series_to_json(&functor_mod_p(&f)?)),
                },
            }
        }
        Command::Equivalence { p, d, depth, bound, max_nodes, max_towers } => {
            let mut limits = SearchLimits::default();
            limits.max_nodes = max_nodes.unwrap_or(limits.max_nodes);
            limits.max_towers = max_towers.unwrap_or(limits.max_towers);
            json_out(formats::equivalence_to_json(&equivalence_check(*p, *d, *depth, *bound, limits)?))
        }
        Command::Obstruction { p, d, depth, bound, max_candidates } => {
            json_out(formats::obstruction_to_json(&additivity_obstruction(*p, *d, *depth, *bound, *max_candidates)?))
        }
        Command::Rees { ring, mode, n_max, root_depth } => {
            let r = formats::ring_from_json(&load_doc(ring)?)?;
            let mode = match mode {
                ReesArg::Classical => ReesMode::Classical,
                ReesArg::Eka => ReesMode::Eka,
            };
            json_out(formats::rees_to_json(&rees_pieces(r, mode, *n_max, root_depth.unwrap_or(r.depth()))?))
        }
        Command::Blowup { algebra, gens, saturate, bound } => {
            let a = formats::algebra_from_json(&load_doc(algebra)?)?;
            let gens = gens
                .iter()
                .map(|g| {
                    let v = load_doc(g)?;
                    if doc_type(&v) == Some("series") {
                        formats::series_from_json(&v)
                    } else {
                        formats::series_from_body(a.ctx(), &v)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let mut charts = blowup_charts(&a, &gens)?;
            let mut diagnostics = Vec::new();
            if *saturate {
                charts = charts.iter().map(|c| saturate_monomial_chart(c, *bound)).collect::<Result<_>>()?;
                for c in &charts {
                    if c.status == eka_core::blowup::SaturationStatus::SaturationUnsupported {
                        diagnostics.push(format!("chart {}: saturation unsupported for non-monomial data", c.index));
                    }
                }
            }
            let cover = verify_cover(&charts)?;
            let mut out = json_out(formats::atlas_to_json(&charts, Some(&cover)));
            out.diagnostics = diagnostics;
            out
        }
        Command::Cohomology { n, m, p, level, rational, basis, oracle, format } => {
            let mode = exp_mode(*rational, *p)?;
            let m = formats::twist_from_str(mode, m)?;
            let cfg = OracleConfig::default();
            let field = if *rational { 0 } else { *p };
            let r = cech_report(*n, &m, *level, field, *basis, oracle.then_some(&cfg))?;
            match format {
                Format::Json => json_out(formats::cech_to_json(&r)),
                Format::Csv => Output { text: formats::cech_to_csv(&[r])?, status: 0, diagnostics: Vec::new() },
            }
        }
        Command::Growth { n, m, p, from, to, rational, format } => {
            let mode = exp_mode(*rational, *p)?;
            let m = formats::twist_from_str(mode, m)?;
            let g = rank_growth(*n, &m, *from..=*to)?;
            match format {
                Format::Json => json_out(formats::growth_to_json(&g)),
                Format::Csv => Output { text: formats::growth_to_csv(&g)?, status: 0, diagnostics: Vec::new() },
            }
        }
        Command::Selftest { config } => {
            let cfg = match config {
                Some(c) => SelftestConfig::from_json(&load_doc(c)?)?,
                None => SelftestConfig::default(),
            };
            let report = selftest::run(&cfg);
            let mut text = String::new();
            for o in &report.outcomes {
                text.push_str(&o.line());
                text.push('\n');
            }
            let diagnostics = report.warnings.iter().map(|w| format!("warning: {w}")).collect();
            Output { text, status: if report.passed() { 0 } else { 1 }, diagnostics }
        }
    })
}

/// Parses `args`, runs the command, writes to `out` / `err`, returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(o) => {
            for d in &o.diagnostics {
                let _ = writeln!(err, "{d}");
            }
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &o.text).map_err(|e| e.to_string()),
                None => out.write_all(o.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return 2;
            }
            o.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
