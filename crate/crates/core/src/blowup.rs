//! Charts of the admissible blow-up along `(f_0, …, f_r)`:
//! `C_i = A<ξ_j : j ≠ i> / (f_i ξ_j − f_j)`, then killing `f_i`-torsion,
//! which is only attempted for monomial data.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::coeff::{checked_pow, CoeffElement};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, MultiExponent};
use crate::series::{RestrictedSeries, RingContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    ctx: RingContext,
    relations: Vec<RestrictedSeries>,
    label: String,
}

impl AlgebraPresentation {
    pub fn new(ctx: RingContext, relations: Vec<RestrictedSeries>, label: impl Into<String>) -> Result<Self> {
        if let Some(r) = relations.iter().find(|r| r.ctx() != &ctx) {
            return Err(Error::ContextMismatch(alloc::format!("relation over {} in {ctx}", r.ctx())));
        }
        Ok(AlgebraPresentation { ctx, relations, label: label.into() })
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }
    pub fn relations(&self) -> &[RestrictedSeries] {
        &self.relations
    }
    pub fn label(&self) -> &str {
        &self.label
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaturationStatus {
    Raw,
    SaturatedMonomial,
    SaturationUnsupported,
}

impl SaturationStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SaturationStatus::Raw => "raw",
            SaturationStatus::SaturatedMonomial => "saturated-monomial",
            SaturationStatus::SaturationUnsupported => "saturation-unsupported",
        }
    }
}

/// A monomial `g` with `f_i^power · g` in the raw chart ideal while `g` is not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionWitness {
    pub element: RestrictedSeries,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartPresentation {
    pub index: usize,
    pub ctx: RingContext,
    /// Ambient relations, then `f_i ξ_j − f_j` in increasing `j`, then any
    /// torsion killed by saturation.
    pub relations: Vec<RestrictedSeries>,
    /// The generators `f_0..f_r`, embedded in the chart ring.
    pub generators: Vec<RestrictedSeries>,
    /// `(j, variable index of ξ_j)`.
    pub xi: Vec<(usize, usize)>,
    pub status: SaturationStatus,
    pub witnesses: Vec<TorsionWitness>,
    /// Universe bound (in units of the finest exponent step) used by saturation.
    pub saturation_bound: Option<u64>,
}

pub fn xi_name(i: usize, j: usize) -> String {
    alloc::format!("xi{i}_{j}")
}

/// Extends `f` by zero exponents for the variables appended in `ctx`.
pub fn embed(f: &RestrictedSeries, ctx: &RingContext) -> Result<RestrictedSeries> {
    let extra = ctx
        .nvars()
        .checked_sub(f.ctx().nvars())
        .ok_or_else(|| Error::ShapeMismatch { expected: ctx.nvars(), got: f.ctx().nvars() })?;
    if ctx.vars()[..f.ctx().nvars()] != *f.ctx().vars() || ctx.coeff() != f.ctx().coeff() {
        return Err(Error::ContextMismatch(alloc::format!("{} does not extend {}", ctx, f.ctx())));
    }
    let terms = f.terms().map(|(e, c)| (e.extended(extra), c.clone()));
    Ok(RestrictedSeries::from_terms(ctx.clone(), terms)?.with_level(f.level()))
}

pub fn blowup_charts(a: &AlgebraPresentation, gens: &[RestrictedSeries]) -> Result<Vec<ChartPresentation>> {
    if gens.is_empty() {
        return Err(Error::InvalidParameter("blow-up needs at least one generator".into()));
    }
    if let Some(g) = gens.iter().find(|g| g.ctx() != a.ctx()) {
        return Err(Error::ContextMismatch(alloc::format!("generator over {} in {}", g.ctx(), a.ctx())));
    }
    if gens.iter().any(RestrictedSeries::is_zero) {
        return Err(Error::InvalidParameter("generators must be nonzero".into()));
    }
    let n = a.ctx().nvars();
    let mut charts = Vec::with_capacity(gens.len());
    for i in 0..gens.len() {
        let others: Vec<usize> = (0..gens.len()).filter(|&j| j != i).collect();
        let names: Vec<String> = others.iter().map(|&j| xi_name(i, j)).collect();
        let ctx = a.ctx().extended(&names)?;
        let embedded: Vec<RestrictedSeries> = gens.iter().map(|g| embed(g, &ctx)).collect::<Result<_>>()?;
        let mut relations: Vec<RestrictedSeries> =
            a.relations().iter().map(|r| embed(r, &ctx)).collect::<Result<_>>()?;
        let mut xi = Vec::new();
        for (k, &j) in others.iter().enumerate() {
            let var = n + k;
            let x = RestrictedSeries::var_pow(ctx.clone(), var, Exponent::integer(ctx.mode(), 1u32))?;
            relations.push(embedded[i].mul(&x)?.sub(&embedded[j])?);
            xi.push((j, var));
        }
        charts.push(ChartPresentation {
            index: i,
            ctx,
            relations,
            generators: embedded,
            xi,
            status: SaturationStatus::Raw,
            witnesses: Vec::new(),
            saturation_bound: None,
        });
    }
    Ok(charts)
}

/// `(exponent, unit coefficient)` of a unit-times-monomial series.
fn unit_monomial(f: &RestrictedSeries) -> Option<(&MultiExponent, &CoeffElement)> {
    f.as_monomial().filter(|(_, c)| c.is_unit())
}

/// Exponent vector in units of `1/base^level`.
fn to_units(e: &MultiExponent, step: u64) -> Option<Vec<u64>> {
    e.entries()
        .iter()
        .map(|x| {
            let v = x.value() * BigRational::from_integer(BigInt::from(step));
            if v.is_integer() {
                v.to_integer().to_u64()
            } else {
                None
            }
        })
        .collect()
}

fn divides(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn add_v(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Data of a monomial chart on a bounded universe of monomials.
struct MonomialChart {
    universe: Vec<Vec<u64>>,
    index: BTreeMap<Vec<u64>, usize>,
    classes: UnionFind,
    fi: Vec<u64>,
}

impl MonomialChart {
    fn build(nvars: usize, bound: u64, moves: &[(Vec<u64>, Vec<u64>)], fi: Vec<u64>, cap: usize) -> Result<Self> {
        let mut universe = Vec::new();
        let mut cur = vec![0u64; nvars];
        enumerate_monomials(&mut cur, 0, bound, &mut universe, cap)?;
        universe.sort_by(|a, b| a.iter().sum::<u64>().cmp(&b.iter().sum::<u64>()).then_with(|| b.cmp(a)));
        let index: BTreeMap<Vec<u64>, usize> = universe.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut classes = UnionFind((0..universe.len()).collect());
        for (w, &wi) in &index {
            for (lhs, rhs) in moves {
                if divides(lhs, w) {
                    let rest: Vec<u64> = w.iter().zip(lhs).map(|(x, y)| x - y).collect();
                    if let Some(&vi) = index.get(&add_v(&rest, rhs)) {
                        classes.union(wi, vi);
                    }
                }
            }
        }
        Ok(MonomialChart { universe, index, classes, fi })
    }

    /// Closure of `seeds` under multiples and the congruence.
    fn ideal_closure(&mut self, member: &mut [bool]) {
        let n = self.universe.len();
        loop {
            let mut changed = false;
            let mut root_in: BTreeSet<usize> = BTreeSet::new();
            for (i, &m) in member.iter().enumerate() {
                if m {
                    root_in.insert(self.classes.find(i));
                }
            }
            for i in 0..n {
                if member[i] {
                    continue;
                }
                let by_class = root_in.contains(&self.classes.find(i));
                let by_divisor = !by_class && (0..n).any(|j| member[j] && divides(&self.universe[j], &self.universe[i]));
                if by_class || by_divisor {
                    member[i] = true;
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Smallest `k >= 1` with `f_i^k · u` inside the universe and in `set`.
    fn torsion_power(&self, u: usize, set: &[bool]) -> Option<u32> {
        if self.fi.iter().all(|&a| a == 0) {
            return set[u].then_some(1);
        }
        let mut w = self.universe[u].clone();
        for k in 1.. {
            w = add_v(&w, &self.fi);
            match self.index.get(&w) {
                Some(&wi) if set[wi] => return Some(k),
                Some(_) => continue,
                None => return None,
            }
        }
        None
    }
}

fn enumerate_monomials(cur: &mut Vec<u64>, var: usize, left: u64, out: &mut Vec<Vec<u64>>, cap: usize) -> Result<()> {
    if var == cur.len() {
        if out.len() >= cap {
            return Err(Error::Resource(alloc::format!("saturation universe exceeds {cap} monomials")));
        }
        out.push(cur.clone());
        return Ok(());
    }
    for a in 0..=left {
        cur[var] = a;
        enumerate_monomials(cur, var + 1, left - a, out, cap)?;
    }
    cur[var] = 0;
    Ok(())
}

/// Largest monomial universe explored by [`saturate_monomial_chart`].
pub const SATURATION_CAP: usize = 200_000;

/// Kills `f_i`-torsion among monomials of total degree `<= bound` units of
/// the finest exponent step (default `4·base^L`, i.e. degree 4).
pub fn saturate_monomial_chart(c: &ChartPresentation, bound: Option<u64>) -> Result<ChartPresentation> {
    let mut out = c.clone();
    let n_ambient = c.relations.len() - c.xi.len();
    let ambient = &c.relations[..n_ambient];
    let gens_ok = c.generators.iter().all(|g| unit_monomial(g).is_some());
    let rels_ok = ambient.iter().all(|r| unit_monomial(r).is_some());
    if !gens_ok || !rels_ok {
        out.status = SaturationStatus::SaturationUnsupported;
        return Ok(out);
    }
    let level = c.generators.iter().chain(ambient).map(RestrictedSeries::level).max().unwrap_or(0);
    let step = match c.ctx.mode().base() {
        Some(b) => checked_pow(b, level).ok_or_else(|| Error::Resource("level too large".into()))?,
        None => {
            // rational exponents: the common denominator of all inputs
            let mut den = 1u64;
            for f in c.generators.iter().chain(ambient) {
                for (e, _) in f.terms() {
                    for x in e.entries() {
                        let d = x.denominator().to_u64().ok_or_else(|| Error::Resource("denominator".into()))?;
                        den = num_integer::lcm(den, d);
                    }
                }
            }
            den
        }
    };
    let bound = bound.unwrap_or(4 * step);
    let units = |f: &RestrictedSeries| -> Result<Vec<u64>> {
        let (e, _) = unit_monomial(f).expect("checked above");
        to_units(e, step).ok_or_else(|| Error::Unsupported("exponent off the chart lattice".into()))
    };
    let m: Vec<Vec<u64>> = c.generators.iter().map(units).collect::<Result<_>>()?;
    let relations: Vec<Vec<u64>> = ambient.iter().map(units).collect::<Result<_>>()?;
    let moves: Vec<(Vec<u64>, Vec<u64>)> = c
        .xi
        .iter()
        .map(|&(j, var)| {
            let mut lhs = m[c.index].clone();
            lhs[var] += step;
            (lhs, m[j].clone())
        })
        .collect();

    let mut chart = MonomialChart::build(c.ctx.nvars(), bound, &moves, m[c.index].clone(), SATURATION_CAP)?;
    let size = chart.universe.len();
    let mut raw: Vec<bool> = (0..size).map(|i| relations.iter().any(|r| divides(r, &chart.universe[i]))).collect();
    chart.ideal_closure(&mut raw);

    let mut sat = raw.clone();
    loop {
        let mut changed = false;
        for u in 0..size {
            if !sat[u] && chart.torsion_power(u, &sat).is_some() {
                sat[u] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        chart.ideal_closure(&mut sat);
    }

    // Minimal new elements under divisibility, with their power over the raw ideal.
    let mut witnesses = Vec::new();
    for u in 0..size {
        if !sat[u] || raw[u] {
            continue;
        }
        let minimal = (0..size).all(|v| v == u || !sat[v] || !divides(&chart.universe[v], &chart.universe[u]));
        if !minimal {
            continue;
        }
        let Some(power) = chart.torsion_power(u, &raw) else { continue };
        let entries = chart.universe[u]
            .iter()
            .map(|&a| Exponent::from_ratio(c.ctx.mode(), &BigRational::new(BigInt::from(a), BigInt::from(step))))
            .collect::<Result<Vec<_>>>()?;
        let e = MultiExponent::new(c.ctx.mode(), entries)?;
        let g = RestrictedSeries::monomial(c.ctx.clone(), e, CoeffElement::one(*c.ctx.coeff()))?;
        witnesses.push(TorsionWitness { element: g, power });
    }
    witnesses.sort_by(|a, b| a.element.as_monomial().map(|m| m.0).cmp(&b.element.as_monomial().map(|m| m.0)));
    for w in &witnesses {
        out.relations.push(w.element.clone());
    }
    out.witnesses = witnesses;
    out.status = SaturationStatus::SaturatedMonomial;
    out.saturation_bound = Some(bound);
    Ok(out)
}

/// Membership of a monomial in the ideal of a monomial chart, at the same
/// universe bound as the saturation. `include_witnesses` selects the
/// saturated ideal instead of the raw one.
pub fn chart_monomial_member(c: &ChartPresentation, g: &MultiExponent, include_witnesses: bool) -> Result<bool> {
    let bound = c.saturation_bound.ok_or_else(|| Error::InvalidParameter("chart was not saturated".into()))?;
    let n_ambient = c.relations.len() - c.xi.len() - c.witnesses.len();
    let level = c.generators.iter().map(RestrictedSeries::level).max().unwrap_or(0).max(
        c.relations[..n_ambient].iter().map(RestrictedSeries::level).max().unwrap_or(0),
    );
    let step = checked_pow(c.ctx.mode().base().unwrap_or(1), level).unwrap_or(1);
    let units = |f: &RestrictedSeries| -> Result<Vec<u64>> {
        let (e, _) = unit_monomial(f).ok_or_else(|| Error::Unsupported("non-monomial data".into()))?;
        to_units(e, step).ok_or_else(|| Error::Unsupported("exponent off the chart lattice".into()))
    };
    let m: Vec<Vec<u64>> = c.generators.iter().map(units).collect::<Result<_>>()?;
    let mut relations: Vec<Vec<u64>> = c.relations[..n_ambient].iter().map(units).collect::<Result<_>>()?;
    if include_witnesses {
        for w in &c.witnesses {
            relations.push(units(&w.element)?);
        }
    }
    let moves: Vec<(Vec<u64>, Vec<u64>)> = c
        .xi
        .iter()
        .map(|&(j, var)| {
            let mut lhs = m[c.index].clone();
            lhs[var] += step;
            (lhs, m[j].clone())
        })
        .collect();
    let mut chart = MonomialChart::build(c.ctx.nvars(), bound, &moves, m[c.index].clone(), SATURATION_CAP)?;
    let target = to_units(g, step).ok_or_else(|| Error::Unsupported("exponent off the chart lattice".into()))?;
    let Some(&ti) = chart.index.get(&target) else {
        return Err(Error::InvalidParameter("monomial outside the saturation universe".into()));
    };
    let mut member: Vec<bool> =
        (0..chart.universe.len()).map(|i| relations.iter().any(|r| divides(r, &chart.universe[i]))).collect();
    chart.ideal_closure(&mut member);
    Ok(member[ti])
}

/// Whether multiplication by `f_i` is injective on the monomial basis of
/// the saturated chart inside its universe.
pub fn fi_injective(c: &ChartPresentation) -> Result<bool> {
    ensure_saturated(c)?;
    let bound = c.saturation_bound.expect("saturated");
    let n_ambient = c.relations.len() - c.xi.len() - c.witnesses.len();
    let level = c.generators.iter().chain(&c.relations[..n_ambient]).map(RestrictedSeries::level).max().unwrap_or(0);
    let step = checked_pow(c.ctx.mode().base().unwrap_or(1), level).unwrap_or(1);
    let units = |f: &RestrictedSeries| -> Vec<u64> { to_units(unit_monomial(f).expect("monomial").0, step).expect("lattice") };
    let m: Vec<Vec<u64>> = c.generators.iter().map(units).collect();
    let mut relations: Vec<Vec<u64>> = c.relations[..n_ambient].iter().map(units).collect();
    relations.extend(c.witnesses.iter().map(|w| units(&w.element)));
    let moves: Vec<(Vec<u64>, Vec<u64>)> = c
        .xi
        .iter()
        .map(|&(j, var)| {
            let mut lhs = m[c.index].clone();
            lhs[var] += step;
            (lhs, m[j].clone())
        })
        .collect();
    let mut chart = MonomialChart::build(c.ctx.nvars(), bound, &moves, m[c.index].clone(), SATURATION_CAP)?;
    let size = chart.universe.len();
    let mut member: Vec<bool> = (0..size).map(|i| relations.iter().any(|r| divides(r, &chart.universe[i]))).collect();
    chart.ideal_closure(&mut member);
    // classes of f_i·u for u outside the ideal must be distinct and outside it
    let mut image: BTreeMap<usize, usize> = BTreeMap::new();
    for u in 0..size {
        if member[u] {
            continue;
        }
        let w = add_v(&chart.universe[u], &chart.fi);
        let Some(&wi) = chart.index.get(&w) else { continue };
        if member[wi] {
            return Ok(false);
        }
        let (ru, rw) = (chart.classes.find(u), chart.classes.find(wi));
        match image.get(&rw) {
            Some(&prev) if prev != ru => return Ok(false),
            _ => {
                image.insert(rw, ru);
            }
        }
    }
    Ok(true)
}

fn ensure_saturated(c: &ChartPresentation) -> Result<()> {
    match c.status {
        SaturationStatus::SaturatedMonomial => Ok(()),
        _ => Err(Error::InvalidParameter(alloc::format!("chart {} is {}", c.index, c.status.name()))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    /// False when some generator is not a unit times a monomial.
    pub supported: bool,
    /// Some generator is a unit of the coefficient ring (times `X^0`).
    pub unit_ideal: bool,
    /// Per chart `i`: every `f_j - f_i ξ_j` is among the chart relations.
    pub chart_principal: Vec<bool>,
}

pub fn verify_cover(charts: &[ChartPresentation]) -> Result<CoverReport> {
    let Some(first) = charts.first() else {
        return Err(Error::InvalidParameter("empty atlas".into()));
    };
    let supported = first.generators.iter().all(|g| unit_monomial(g).is_some());
    let unit_ideal = supported && first.generators.iter().any(|g| unit_monomial(g).is_some_and(|(e, _)| e.is_zero()));
    let mut chart_principal = Vec::new();
    for c in charts {
        let mut ok = true;
        for &(j, var) in &c.xi {
            let x = RestrictedSeries::var_pow(c.ctx.clone(), var, Exponent::integer(c.ctx.mode(), 1u32))?;
            let rel = c.generators[c.index].mul(&x)?.sub(&c.generators[j])?;
            ok &= c.relations.iter().any(|r| *r == rel || *r == rel.neg());
        }
        chart_principal.push(ok);
    }
    Ok(CoverReport { supported, unit_ideal, chart_principal })
}

/// Laurent monomials `x^α`, `α` signed, over laurent coefficients.
type LaurentPoly = BTreeMap<Vec<BigRational>, CoeffElement>;

/// Substitutes `ξ_j ↦ f_j / f_i` (with `f_i` a unit monomial) into each new
/// chart relation over `R[1/π]` with Laurent monomials, returning whether all
/// of them vanish.
pub fn chart_relations_vanish(c: &ChartPresentation) -> Result<bool> {
    let (fe, fc) = unit_monomial(&c.generators[c.index])
        .ok_or_else(|| Error::Unsupported("f_i must be a unit monomial".into()))?;
    let lift = |x: &CoeffElement| x.to_laurent();
    let fi_inv_c = lift(fc)?.invert()?;
    let to_poly = |f: &RestrictedSeries| -> Result<LaurentPoly> {
        let mut out = LaurentPoly::new();
        for (e, x) in f.terms() {
            out.insert(e.entries().iter().map(Exponent::value).collect(), lift(x)?);
        }
        Ok(out)
    };
    let mul = |a: &LaurentPoly, b: &LaurentPoly| -> Result<LaurentPoly> {
        let mut out = LaurentPoly::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<BigRational> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let v = ca.mul(cb)?;
                let s = match out.remove(&e) {
                    Some(old) => old.add(&v)?,
                    None => v,
                };
                if !s.is_zero() {
                    out.insert(e, s);
                }
            }
        }
        Ok(out)
    };
    let fi_inv: LaurentPoly =
        [(fe.entries().iter().map(|x| -x.value()).collect::<Vec<_>>(), fi_inv_c)].into_iter().collect();
    // ξ_j image as a Laurent polynomial
    let images: BTreeMap<usize, LaurentPoly> = c
        .xi
        .iter()
        .map(|&(j, var)| Ok((var, mul(&to_poly(&c.generators[j])?, &fi_inv)?)))
        .collect::<Result<_>>()?;
    let n_ambient = c.relations.len() - c.xi.len() - c.witnesses.len();
    for rel in &c.relations[n_ambient..n_ambient + c.xi.len()] {
        let mut total = LaurentPoly::new();
        for (e, x) in rel.terms() {
            let mut term: LaurentPoly = LaurentPoly::new();
            let mut base_exp: Vec<BigRational> = e.entries().iter().map(Exponent::value).collect();
            for &(_, var) in &c.xi {
                base_exp[var] = BigRational::zero();
            }
            term.insert(base_exp, lift(x)?);
            for &(_, var) in &c.xi {
                let k = e.entries()[var].numerator_u64().filter(|_| e.entries()[var].is_integer());
                let k = k.ok_or_else(|| Error::Unsupported("fractional power of a chart variable".into()))?;
                for _ in 0..k {
                    term = mul(&term, &images[&var])?;
                }
            }
            for (te, tc) in term {
                let s = match total.remove(&te) {
                    Some(old) => old.add(&tc)?,
                    None => tc,
                };
                if !s.is_zero() {
                    total.insert(te, s);
                }
            }
        }
        if !total.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::RingDescriptor;

    fn setup() -> (RingContext, RestrictedSeries, RestrictedSeries) {
        let r = RingDescriptor::char0(3, 2, 1, 4).unwrap();
        let ctx = RingContext::standard(r, &["x", "y"]).unwrap();
        let one = Exponent::integer(ctx.mode(), 1u32);
        let x = RestrictedSeries::var_pow(ctx.clone(), 0, one.clone()).unwrap();
        let y = RestrictedSeries::var_pow(ctx.clone(), 1, one).unwrap();
        (ctx, x, y)
    }

    fn exps(ctx: &RingContext, v: &[u64]) -> MultiExponent {
        MultiExponent::new(ctx.mode(), v.iter().map(|&a| Exponent::integer(ctx.mode(), a)).collect()).unwrap()
    }

    #[test]
    fn plane_charts() {
        let (ctx, x, y) = setup();
        let a = AlgebraPresentation::new(ctx.clone(), vec![], "R<x,y>").unwrap();
        let charts = blowup_charts(&a, &[x.clone(), y.clone()]).unwrap();
        assert_eq!(charts.len(), 2);
        assert_eq!(charts[0].ctx.vars(), ["x", "y", "xi0_1"]);
        let c0 = &charts[0];
        let xi = RestrictedSeries::var_pow(c0.ctx.clone(), 2, Exponent::integer(ctx.mode(), 1u32)).unwrap();
        let expected = embed(&x, &c0.ctx).unwrap().mul(&xi).unwrap().sub(&embed(&y, &c0.ctx).unwrap()).unwrap();
        assert_eq!(c0.relations, vec![expected]);
        assert_eq!(charts[1].relations.len(), 1);
        let report = verify_cover(&charts).unwrap();
        assert!(!report.unit_ideal && report.chart_principal.iter().all(|&b| b));
        for c in &charts {
            assert!(chart_relations_vanish(c).unwrap());
            let s = saturate_monomial_chart(c, None).unwrap();
            assert_eq!(s.status, SaturationStatus::SaturatedMonomial);
            assert!(s.witnesses.is_empty());
            assert_eq!(s.relations, c.relations);
            assert!(fi_injective(&s).unwrap());
        }
    }

    #[test]
    fn principal_and_unit_cases() {
        let (ctx, x, _) = setup();
        let a = AlgebraPresentation::new(ctx.clone(), vec![], "R<x,y>").unwrap();
        let charts = blowup_charts(&a, std::slice::from_ref(&x)).unwrap();
        assert_eq!(charts.len(), 1);
        assert_eq!(charts[0].ctx.nvars(), 2);
        assert!(charts[0].relations.is_empty());

        let one = RestrictedSeries::one(ctx.clone());
        let charts = blowup_charts(&a, &[one.clone(), x.clone()]).unwrap();
        assert_eq!(charts[0].relations.len(), 1);
        assert!(verify_cover(&charts).unwrap().unit_ideal);
        let s = saturate_monomial_chart(&charts[0], None).unwrap();
        assert!(s.witnesses.is_empty());

        let r = *ctx.coeff();
        let pi = RestrictedSeries::constant(ctx.clone(), CoeffElement::uniformizer(r).unwrap()).unwrap();
        let charts = blowup_charts(&a, std::slice::from_ref(&pi)).unwrap();
        assert!(!verify_cover(&charts).unwrap().unit_ideal);
        let lctx = ctx.with_coeff(r.with_laurent().unwrap());
        let lpi = RestrictedSeries::constant(lctx.clone(), CoeffElement::uniformizer(*lctx.coeff()).unwrap()).unwrap();
        let la = AlgebraPresentation::new(lctx, vec![], "K<x,y>").unwrap();
        assert!(verify_cover(&blowup_charts(&la, &[lpi]).unwrap()).unwrap().unit_ideal);
    }

    #[test]
    fn cross_torsion() {
        let (ctx, x, y) = setup();
        let xy = x.mul(&y).unwrap();
        let a = AlgebraPresentation::new(ctx.clone(), vec![xy], "R<x,y>/(xy)").unwrap();
        let charts = blowup_charts(&a, &[x.clone(), y.clone()]).unwrap();
        let s = saturate_monomial_chart(&charts[0], None).unwrap();
        let c = &s.ctx;
        let got: Vec<(MultiExponent, u32)> =
            s.witnesses.iter().map(|w| (w.element.as_monomial().unwrap().0.clone(), w.power)).collect();
        assert_eq!(got, vec![(exps(c, &[0, 0, 1]), 2), (exps(c, &[0, 1, 0]), 1)]);
        for w in &s.witnesses {
            let (g, _) = w.element.as_monomial().unwrap();
            assert!(!chart_monomial_member(&s, g, false).unwrap());
            let mut xk = g.clone();
            for _ in 0..w.power {
                xk = xk.checked_add(&exps(c, &[1, 0, 0])).unwrap();
            }
            assert!(chart_monomial_member(&s, &xk, false).unwrap());
        }
        assert!(fi_injective(&s).unwrap());
        assert_eq!(charts[0].status, SaturationStatus::Raw);
    }

    #[test]
    fn non_monomial_is_unsupported() {
        let (ctx, x, y) = setup();
        let a = AlgebraPresentation::new(ctx.clone(), vec![], "R<x,y>").unwrap();
        let charts = blowup_charts(&a, &[x.add(&y).unwrap(), y]).unwrap();
        let s = saturate_monomial_chart(&charts[0], None).unwrap();
        assert_eq!(s.status, SaturationStatus::SaturationUnsupported);
        assert!(!verify_cover(&charts).unwrap().supported);
        assert!(blowup_charts(&a, &[]).is_err());
    }
}
