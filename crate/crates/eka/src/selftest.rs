//! The acceptance grid: ten criteria, one PASS/FAIL line each.

use std::time::{Duration, Instant};

use eka_core::blowup::{
    blowup_charts, chart_monomial_member, chart_relations_vanish, embed, fi_injective, saturate_monomial_chart,
    verify_cover, AlgebraPresentation, SaturationStatus,
};
use eka_core::cech::{cech_report, rank_growth, OracleConfig, TwistDegree};
use eka_core::functors::{
    additivity_obstruction, equivalence_check, functor_mod_p, morphism_reduce, rees_pieces, EvalMorphism, ReesMode,
    SearchLimits,
};
use eka_core::series::monomial_ideal_member;
use eka_core::{
    CoeffElement, Error, ExpMode, Exponent, MultiExponent, RestrictedSeries, Result, RingContext, RingDescriptor,
    RootTower, Valuation,
};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::formats;

/// `(p, d, K, M)` grid points for the ring laws.
pub const LAW_GRID: [(u64, u64, u32, u32); 3] = [(2, 3, 1, 4), (3, 2, 2, 3), (5, 5, 1, 4)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestConfig {
    pub criteria: Vec<u8>,
    pub ring_law_trials: usize,
    pub eval_trials: usize,
    pub seed: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { criteria: (1..=10).collect(), ring_law_trials: 1000, eval_trials: 500, seed: 20_240_601 }
    }
}

impl SelftestConfig {
    /// Missing keys take their defaults; `"criteria": []` is an empty grid.
    pub fn from_json(v: &Value) -> Result<Self> {
        let mut cfg = SelftestConfig::default();
        let num = |key: &str| -> Result<Option<u64>> {
            match v.get(key) {
                None => Ok(None),
                Some(x) => x.as_u64().map(Some).ok_or_else(|| Error::Parse(format!("{key} must be an integer"))),
            }
        };
        if let Some(list) = v.get("criteria") {
            let list = list.as_array().ok_or_else(|| Error::Parse("criteria must be an array".into()))?;
            cfg.criteria = list
                .iter()
                .map(|x| match x.as_u64() {
                    Some(n @ 1..=10) => Ok(n as u8),
                    _ => Err(Error::Parse(format!("unknown criterion {x}"))),
                })
                .collect::<Result<_>>()?;
        }
        if let Some(n) = num("ring_law_trials")? {
            cfg.ring_law_trials = n as usize;
        }
        if let Some(n) = num("eval_trials")? {
            cfg.eval_trials = n as usize;
        }
        if let Some(n) = num("seed")? {
            cfg.seed = n;
        }
        Ok(cfg)
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl Outcome {
    pub fn line(&self) -> String {
        let time = match self.limit {
            Some(l) => format!("{:.2}s, limit {}s", self.elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.2}s", self.elapsed.as_secs_f64()),
        };
        format!("{} [{:>2}] {}: {} ({time})", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub outcomes: Vec<Outcome>,
    pub warnings: Vec<String>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

pub fn run(cfg: &SelftestConfig) -> SelftestReport {
    let mut warnings = Vec::new();
    if cfg.criteria.is_empty() {
        warnings.push("empty criteria grid: nothing checked, passing vacuously".to_string());
    }
    let outcomes = cfg.criteria.iter().map(|&id| run_one(id, cfg)).collect();
    SelftestReport { outcomes, warnings }
}

pub fn run_one(id: u8, cfg: &SelftestConfig) -> Outcome {
    let (name, limit): (&'static str, Option<u64>) = match id {
        1 => ("cohomology closed forms vs boundary-matrix oracle", Some(60)),
        2 => ("middle cohomology vanishes", None),
        3 => ("rank growth in the level", None),
        4 => ("ring laws and valuation multiplicativity", Some(120)),
        5 => ("mod-p reduction on monomial towers", None),
        6 => ("additivity obstruction search", None),
        7 => ("non-finitely-generated kernel witness", None),
        8 => ("blow-up atlas and saturation", Some(10)),
        9 => ("mod-p reduction commutes with evaluation", None),
        10 => ("serialization round-trip and determinism", None),
        _ => ("unknown criterion", None),
    };
    let start = Instant::now();
    let result = match id {
        1 => criterion_cohomology_oracle(),
        2 => criterion_middle_vanishing(),
        3 => criterion_growth(),
        4 => criterion_ring_laws(cfg.ring_law_trials, cfg.seed),
        5 => criterion_equivalence(),
        6 => criterion_obstruction(),
        7 => criterion_kernel_witness(),
        8 => criterion_blowup(),
        9 => criterion_eval_compat(cfg.eval_trials, cfg.seed),
        10 => criterion_serialization(cfg.seed),
        _ => Err(Error::InvalidParameter(format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let limit = limit.map(Duration::from_secs);
    let (mut passed, detail) = match result {
        Ok((ok, detail)) => (ok, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(l) = limit {
        passed &= elapsed < l;
    }
    Outcome { id, name, passed, detail, elapsed, limit }
}

type Check = Result<(bool, String)>;

fn choose(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as u64
}

/// `(n, p, K, m·p^K)` over the criterion-1 grid.
fn cohomology_grid() -> impl Iterator<Item = (u32, u64, u32, i64)> {
    [1u32, 2].into_iter().flat_map(|n| {
        [2u64, 3].into_iter().flat_map(move |p| (0u32..=1).flat_map(move |k| (-6i64..=6).map(move |j| (n, p, k, j))))
    })
}

fn twist(p: u64, k: u32, j: i64) -> Result<TwistDegree> {
    TwistDegree::new(ExpMode::Dyadic { base: p }, BigRational::new(BigInt::from(j), BigInt::from(p.pow(k))))
}

fn criterion_cohomology_oracle() -> Check {
    let (mut points, mut mismatches, mut classical_bad) = (0, 0, 0);
    let cfg = OracleConfig::default();
    for (n, p, k, j) in cohomology_grid() {
        let r = cech_report(n, &twist(p, k, j)?, k, p, false, Some(&cfg))?;
        points += 1;
        if r.oracle_ranks.as_ref() != Some(&r.ranks) {
            mismatches += 1;
        }
        if k == 0 {
            let h0 = if j >= 0 { choose(j + n as i64, n as i64) } else { 0 };
            let hn = if j < 0 { choose(-j - 1, n as i64) } else { 0 };
            if r.ranks[0] != h0 || r.ranks[n as usize] != hn {
                classical_bad += 1;
            }
        }
    }
    Ok((
        mismatches == 0 && classical_bad == 0,
        format!("{points} grid points, {mismatches} oracle mismatches, {classical_bad} classical mismatches"),
    ))
}

fn criterion_middle_vanishing() -> Check {
    let (mut checked, mut failures) = (0, 0);
    for (n, p, k, j) in cohomology_grid() {
        let r = cech_report(n, &twist(p, k, j)?, k, p, false, Some(&OracleConfig::default()))?;
        let oracle = r.oracle_ranks.clone().unwrap_or_default();
        for i in 1..n as usize {
            checked += 1;
            if r.ranks[i] != 0 || oracle.get(i) != Some(&0) {
                failures += 1;
            }
        }
    }
    Ok((failures == 0 && checked > 0, format!("{checked} middle groups, {failures} nonzero")))
}

fn criterion_growth() -> Check {
    let m = TwistDegree::integer(ExpMode::Dyadic { base: 2 }, 2);
    let g = rank_growth(1, &m, 0..=3)?;
    let ranks: Vec<u64> = g.rows.iter().map(|r| r.1).collect();
    let closed: Vec<u64> = (0..=3).map(|k| 2 * 2u64.pow(k) + 1).collect();
    let ok = ranks == [3, 5, 9, 17] && ranks == closed && g.strictly_increasing;
    Ok((ok, format!("ranks {ranks:?}, closed form {closed:?}")))
}

// ---- ring laws

/// Failure counts of one law run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LawTally {
    pub trials: usize,
    pub associativity: usize,
    pub commutativity: usize,
    pub distributivity: usize,
    pub valuation: usize,
}

impl LawTally {
    pub fn failures(&self) -> usize {
        self.associativity + self.commutativity + self.distributivity + self.valuation
    }
    fn absorb(&mut self, o: LawTally) {
        self.trials += o.trials;
        self.associativity += o.associativity;
        self.commutativity += o.commutativity;
        self.distributivity += o.distributivity;
        self.valuation += o.valuation;
    }
}

pub type MulFn<'a> = &'a dyn Fn(&CoeffElement, &CoeffElement) -> Result<CoeffElement>;

pub fn random_element(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> CoeffElement {
    let m = ring.precision() as usize;
    if rng.random_bool(0.05) {
        return CoeffElement::zero(ring);
    }
    let digits: Vec<u32> = (0..m).map(|_| rng.random_range(0..ring.p() as u32)).collect();
    let off = rng.random_range(0..m as i64);
    CoeffElement::from_digits(ring, off, &digits).expect("offset in range")
}

/// What `v(ab)` must be: the sum, or zero past the absolute window.
fn expected_product_val(ring: &RingDescriptor, a: Valuation, b: Valuation) -> Valuation {
    let sum = a.checked_add(&b);
    if ring.laurent() {
        return sum;
    }
    let cap = Valuation::Finite(Ratio::new(ring.precision() as i64, ring.ramification() as i64));
    if sum >= cap {
        Valuation::Infinite
    } else {
        sum
    }
}

/// Ring laws for coefficient elements under the given product.
pub fn coeff_laws(ring: RingDescriptor, trials: usize, seed: u64, mul: MulFn) -> Result<LawTally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = LawTally { trials, ..LawTally::default() };
    for _ in 0..trials {
        let (a, b, c) = (random_element(&mut rng, ring), random_element(&mut rng, ring), random_element(&mut rng, ring));
        let ab = mul(&a, &b)?;
        if mul(&ab, &c)? != mul(&a, &mul(&b, &c)?)? || a.add(&b)?.add(&c)? != a.add(&b.add(&c)?)? {
            t.associativity += 1;
        }
        if ab != mul(&b, &a)? || a.add(&b)? != b.add(&a)? {
            t.commutativity += 1;
        }
        if mul(&a, &b.add(&c)?)? != mul(&a, &b)?.add(&mul(&a, &c)?)? {
            t.distributivity += 1;
        }
        if ab.val() != expected_product_val(&ring, a.val(), b.val()) {
            t.valuation += 1;
        }
    }
    Ok(t)
}

pub fn random_series(rng: &mut ChaCha8Rng, ctx: &RingContext) -> Result<RestrictedSeries> {
    let base = ctx.mode().base().unwrap_or(2);
    let nterms = rng.random_range(0..4);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let entries = (0..ctx.nvars())
            .map(|_| Exponent::dyadic(rng.random_range(0..6u64), rng.random_range(0..2), base))
            .collect::<Result<Vec<_>>>()?;
        terms.push((MultiExponent::new(ctx.mode(), entries)?, random_element(rng, *ctx.coeff())));
    }
    RestrictedSeries::from_terms(ctx.clone(), terms)
}

pub fn series_laws(ctx: &RingContext, trials: usize, seed: u64) -> Result<LawTally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = LawTally { trials, ..LawTally::default() };
    let ring = *ctx.coeff();
    for _ in 0..trials {
        let f = random_series(&mut rng, ctx)?;
        let g = random_series(&mut rng, ctx)?;
        let h = random_series(&mut rng, ctx)?;
        let fg = f.mul(&g)?;
        if fg.mul(&h)? != f.mul(&g.mul(&h)?)? || f.add(&g)?.add(&h)? != f.add(&g.add(&h)?)? {
            t.associativity += 1;
        }
        if fg != g.mul(&f)? || f.add(&g)? != g.add(&f)? {
            t.commutativity += 1;
        }
        if f.mul(&g.add(&h)?)? != fg.add(&f.mul(&h)?)? {
            t.distributivity += 1;
        }
        if fg.gauss_val() != expected_product_val(&ring, f.gauss_val(), g.gauss_val()) {
            t.valuation += 1;
        }
    }
    Ok(t)
}

fn criterion_ring_laws(trials: usize, seed: u64) -> Check {
    let mut total = LawTally::default();
    let mut points = 0;
    let honest: MulFn = &|a, b| a.mul(b);
    for (i, &(p, d, k, m)) in LAW_GRID.iter().enumerate() {
        let seed = seed.wrapping_add(i as u64 * 7919);
        let r = RingDescriptor::char0(p, d, k, m)?;
        let residue = RingDescriptor::charp(p, d, k)?;
        for ring in [r, residue] {
            total.absorb(coeff_laws(ring, trials, seed, honest)?);
            let ctx = RingContext::standard(ring, &["X", "Y"])?;
            total.absorb(series_laws(&ctx, trials, seed ^ 0x5eed)?);
            points += 1;
        }
    }
    let ok = total.failures() == 0 && trials >= 1000;
    Ok((
        ok,
        format!(
            "{points} rings x {trials} triples (coefficient and series), failures: assoc {} comm {} distrib {} val {}",
            total.associativity, total.commutativity, total.distributivity, total.valuation
        ),
    ))
}

// ---- functors

fn criterion_equivalence() -> Check {
    let limits = SearchLimits::default();
    let mut bad = Vec::new();
    let mut towers = 0u64;
    for p in [3u64, 5] {
        for d in [2u64, 4] {
            for k in 0..=2 {
                for n in 1..=2 {
                    let r = equivalence_check(p, d, k, n, limits)?;
                    towers += r.family_size;
                    if !(r.coprime && r.passed() && r.injective && r.surjective && r.anomalies == 0) {
                        bad.push(format!("({p},{d},K={k},N={n})"));
                    }
                }
            }
        }
    }
    let mut witnesses = 0;
    for (p, d, n) in [(2u64, 2u64, 1u32), (2, 2, 2), (3, 3, 1), (3, 3, 2)] {
        let r = equivalence_check(p, d, 0, n, limits)?;
        let sound = r.witnesses.iter().all(|w| {
            w.first != w.second
                && w.first.iter().map(CoeffElement::mod_p).collect::<Result<Vec<_>>>().ok().as_ref() == Some(&w.reduced)
                && w.second.iter().map(CoeffElement::mod_p).collect::<Result<Vec<_>>>().ok().as_ref() == Some(&w.reduced)
        });
        if r.coprime || r.witnesses.is_empty() || !sound || r.anomalies != 0 {
            bad.push(format!("no sound collision for ({p},{d},N={n})"));
        }
        witnesses += r.witnesses.len();
    }
    Ok((
        bad.is_empty(),
        format!("24 coprime grid points ({towers} towers), {witnesses} collision witnesses, failures {bad:?}"),
    ))
}

fn criterion_obstruction() -> Check {
    let none = additivity_obstruction(3, 2, 2, 6, 5_000_000)?;
    let mut ok = none.solutions.is_empty();
    let mut detail = format!("(3,2): {} candidates, {} solutions", none.candidates, none.solutions.len());
    for (p, d) in [(2u64, 2u64), (3, 3)] {
        let r = additivity_obstruction(p, d, 2, 6, 5_000_000)?;
        let mut frobenius = false;
        for g in &r.solutions {
            let ctx = g.ctx();
            let target = RestrictedSeries::one(ctx.clone())
                .add(&RestrictedSeries::var_pow(ctx.clone(), 0, Exponent::integer(ctx.mode(), 1u32))?)?;
            // equality up to the recorded level
            ok &= g.pow(d)?.sub(&target)?.is_zero();
            let root = Exponent::dyadic(1u32, 1, d)?;
            let expect =
                RestrictedSeries::one(ctx.clone()).add(&RestrictedSeries::var_pow(ctx.clone(), 0, root)?)?;
            frobenius |= g.sub(&expect)?.is_zero();
        }
        ok &= frobenius;
        detail.push_str(&format!("; ({p},{d}): {} solutions, frobenius {frobenius}", r.solutions.len()));
    }
    Ok((ok, detail))
}

fn criterion_kernel_witness() -> Check {
    let mode = ExpMode::Dyadic { base: 2 };
    let t = |num: u64, k: u32| -> Result<MultiExponent> { MultiExponent::new(mode, vec![Exponent::dyadic(num, k, 2)?]) };
    let mut ok = true;
    for k in 0..=4u32 {
        let gens = (0..=k).map(|i| t(1, i)).collect::<Result<Vec<_>>>()?;
        let probe = t(1, k + 1)?;
        // one variable: membership is having a generator below the probe
        let oracle = gens.iter().any(|g| g.entries()[0].value() <= probe.entries()[0].value());
        let got = monomial_ideal_member(&gens, &probe)?;
        ok &= !got && got == oracle;
    }
    ok &= monomial_ideal_member(&[t(1, 1)?], &t(1, 0)?)?;
    Ok((ok, "T^(1/2^(K+1)) outside (T, ..., T^(1/2^K)) for K = 0..4; T in (T^(1/2))".into()))
}

fn criterion_blowup() -> Check {
    let ring = RingDescriptor::char0(3, 2, 1, 4)?;
    let ctx = RingContext::standard(ring, &["x", "y"])?;
    let one = Exponent::integer(ctx.mode(), 1u32);
    let x = RestrictedSeries::var_pow(ctx.clone(), 0, one.clone())?;
    let y = RestrictedSeries::var_pow(ctx.clone(), 1, one)?;
    let mut notes = Vec::new();

    let plane = AlgebraPresentation::new(ctx.clone(), vec![], "R<x,y>")?;
    let charts = blowup_charts(&plane, &[x.clone(), y.clone()])?;
    let mut ok = charts.len() == 2;
    for (c, (fi, fj)) in charts.iter().zip([(&x, &y), (&y, &x)]) {
        let xi = RestrictedSeries::var_pow(c.ctx.clone(), 2, Exponent::integer(c.ctx.mode(), 1u32))?;
        let expect = embed(fi, &c.ctx)?.mul(&xi)?.sub(&embed(fj, &c.ctx)?)?;
        ok &= c.relations == [expect] && chart_relations_vanish(c)?;
        let s = saturate_monomial_chart(c, None)?;
        ok &= s.status == SaturationStatus::SaturatedMonomial && s.witnesses.is_empty() && fi_injective(&s)?;
    }
    let cover = verify_cover(&charts)?;
    ok &= cover.supported && cover.chart_principal.iter().all(|&b| b);
    notes.push(format!("plane: {} charts, principal {:?}", charts.len(), cover.chart_principal));

    let cross = AlgebraPresentation::new(ctx.clone(), vec![x.mul(&y)?], "R<x,y>/(xy)")?;
    let charts = blowup_charts(&cross, &[x.clone(), y.clone()])?;
    let s = saturate_monomial_chart(&charts[0], None)?;
    ok &= !s.witnesses.is_empty() && fi_injective(&s)?;
    for w in &s.witnesses {
        let (g, _) = w.element.as_monomial().ok_or_else(|| Error::Unsupported("witness is not a monomial".into()))?;
        let mut shifted = g.clone();
        let step = MultiExponent::unit(s.ctx.mode(), s.ctx.nvars(), 0, Exponent::integer(s.ctx.mode(), 1u32))?;
        for _ in 0..w.power {
            shifted = shifted.checked_add(&step)?;
        }
        ok &= !chart_monomial_member(&s, g, false)? && chart_monomial_member(&s, &shifted, false)?;
    }
    let listed: Vec<String> = s.witnesses.iter().map(|w| format!("{} (k={})", w.element, w.power)).collect();
    notes.push(format!("xy chart 0 torsion: {}", listed.join(", ")));
    Ok((ok, notes.join("; ")))
}

fn criterion_eval_compat(trials: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xe7a1);
    let configs = [((3u64, 2u64, 1u32, 4u32), (3u32, 16u32)), ((2, 3, 1, 3), (2, 9))];
    let (mut failures, mut done) = (0usize, 0usize);
    for (i, &((p, d, k, m), (tk, tm))) in configs.iter().enumerate() {
        let src = RingDescriptor::char0(p, d, k, m)?;
        let tgt = RingDescriptor::char0(p, d, tk, tm)?;
        let ctx = RingContext::new(src, vec!["X".into()], ExpMode::Dyadic { base: d })?;
        let share = trials / configs.len() + usize::from(i < trials % configs.len());
        for _ in 0..share {
            let f = random_series(&mut rng, &ctx)?;
            let depth = tk - k;
            let digits: Vec<u32> = (0..tm).map(|_| rng.random_range(0..p as u32)).collect();
            let top = CoeffElement::from_digits(tgt, rng.random_range(0..3), &digits)?;
            let m = EvalMorphism::new(ctx.clone(), RootTower::from_top(d, top, depth)?)?;
            let lhs = m.apply(&f)?.mod_p()?;
            let rhs = morphism_reduce(&m)?.apply(&functor_mod_p(&f)?)?;
            if lhs != rhs {
                failures += 1;
            }
            done += 1;
        }
    }
    Ok((failures == 0 && done >= 500.min(trials) && trials >= 500, format!("{done} random (f, T), {failures} failures")))
}

// ---- serialization

/// Emits one document of every kind, deterministically from `seed`.
pub fn sample_documents(seed: u64) -> Result<Vec<(String, Value)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    for &(p, d, k, m) in &LAW_GRID {
        let r = RingDescriptor::char0(p, d, k, m)?;
        docs.push(("ring".into(), formats::ring_doc(&r)));
        for ring in [r, r.with_laurent()?, RingDescriptor::charp(p, d, k)?, RingDescriptor::fp(p)?] {
            docs.push(("element".into(), formats::element_to_json(&random_element(&mut rng, ring))));
            let ctx = RingContext::standard(ring, &["X", "Y"])?;
            docs.push(("series".into(), formats::series_to_json(&random_series(&mut rng, &ctx)?.root_shift(1)?)));
        }
    }
    let q = CoeffElement::from_rational(BigRational::new(BigInt::from(-7), BigInt::from(12)));
    docs.push(("element".into(), formats::element_to_json(&q)));
    let ctxq = RingContext::new(RingDescriptor::rationals(), vec!["T".into()], ExpMode::Rational)?;
    let tq = RestrictedSeries::var_pow(ctxq.clone(), 0, Exponent::rational(2u32, 3u32)?)?.scale(&q)?;
    docs.push(("series".into(), formats::series_to_json(&tq)));

    let tgt = RingDescriptor::char0(3, 2, 3, 9)?;
    docs.push(("tower".into(), formats::tower_to_json(&RootTower::from_top(2, CoeffElement::pi_pow(tgt, 1)?, 2)?)));

    let ring = RingDescriptor::char0(3, 2, 1, 4)?;
    let ctx = RingContext::standard(ring, &["x", "y"])?;
    let one = Exponent::integer(ctx.mode(), 1u32);
    let x = RestrictedSeries::var_pow(ctx.clone(), 0, one.clone())?;
    let y = RestrictedSeries::var_pow(ctx.clone(), 1, one)?;
    let a = AlgebraPresentation::new(ctx, vec![x.mul(&y)?], "R<x,y>/(xy)")?;
    docs.push(("algebra".into(), formats::algebra_to_json(&a)));
    let charts = blowup_charts(&a, &[x, y])?;
    let sat = charts.iter().map(|c| saturate_monomial_chart(c, None)).collect::<Result<Vec<_>>>()?;
    let cover = verify_cover(&sat)?;
    docs.push(("atlas".into(), formats::atlas_to_json(&sat, Some(&cover))));

    docs.push(("report".into(), formats::equivalence_to_json(&equivalence_check(3, 3, 0, 1, SearchLimits::default())?)));
    docs.push(("report".into(), formats::obstruction_to_json(&additivity_obstruction(2, 2, 1, 3, 10_000)?)));
    docs.push(("report".into(), formats::rees_to_json(&rees_pieces(ring, ReesMode::Eka, 2, 1)?)));
    let m = TwistDegree::new(ExpMode::Dyadic { base: 2 }, BigRational::new(BigInt::from(3), BigInt::from(2)))?;
    let report = cech_report(2, &m, 1, 2, true, Some(&OracleConfig::default()))?;
    docs.push(("report".into(), formats::cech_to_json(&report)));
    docs.push(("report".into(), formats::growth_to_json(&rank_growth(1, &m, 1..=3)?)));
    Ok(docs)
}

/// Re-parses `text` through the typed reader for `kind` and prints it again.
pub fn reparse(kind: &str, text: &str) -> Result<String> {
    let v = formats::from_text(text)?;
    let again = match kind {
        "ring" => formats::ring_doc(&formats::ring_from_json(&v)?),
        "element" => formats::element_to_json(&formats::element_from_json(&v)?),
        "series" => formats::series_to_json(&formats::series_from_json(&v)?),
        "tower" => formats::tower_to_json(&formats::tower_from_json(&v)?),
        "algebra" => formats::algebra_to_json(&formats::algebra_from_json(&v)?),
        "atlas" => {
            let charts = formats::atlas_from_json(&v)?;
            let cover = verify_cover(&charts)?;
            formats::atlas_to_json(&charts, v.get("cover").map(|_| &cover))
        }
        _ => v,
    };
    Ok(formats::to_text(&again))
}

fn criterion_serialization(seed: u64) -> Check {
    let first = sample_documents(seed)?;
    let second = sample_documents(seed)?;
    let (mut bad_round, mut bad_det) = (0, 0);
    for ((kind, a), (_, b)) in first.iter().zip(&second) {
        let text = formats::to_text(a);
        if text != formats::to_text(b) {
            bad_det += 1;
        }
        if reparse(kind, &text)? != text {
            bad_round += 1;
        }
    }
    let m = TwistDegree::integer(ExpMode::Dyadic { base: 3 }, -2);
    let reports = (0..=1).map(|k| cech_report(1, &m, k, 3, false, Some(&OracleConfig::default()))).collect::<Result<Vec<_>>>()?;
    let csv = formats::cech_to_csv(&reports)?;
    let rows = formats::csv_records(&csv)?;
    let csv_ok = rows.len() == 1 + 2 * 2 && csv == formats::cech_to_csv(&reports)?;
    Ok((
        bad_round == 0 && bad_det == 0 && csv_ok && first.len() == second.len(),
        format!("{} documents, {bad_round} round-trip failures, {bad_det} nondeterministic, csv ok {csv_ok}", first.len()),
    ))
}
