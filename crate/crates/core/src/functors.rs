//! Functorial layer: tower extension, reduction mod `p` of series and of
//! evaluation morphisms, the finite equivalence check, the additivity
//! obstruction, rig extension and Rees pieces.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::{checked_pow, CoeffElement, RingDescriptor, RingKind, Valuation};
use crate::error::{Error, Result};
use crate::eval::RootTower;
use crate::exponent::{ExpMode, Exponent, MultiExponent};
use crate::series::{RestrictedSeries, RingContext};

/// Attaches the next `d`-th root: depth `K+1`, same valuation thresholds.
/// With `d = 1` the tower is constant and the context is returned unchanged.
pub fn eka_extend(ctx: &RingContext) -> Result<RingContext> {
    let coeff = ctx.coeff();
    if !coeff.kind().is_eka() {
        return Err(Error::InvalidParameter(alloc::format!("{} has no eka tower", coeff.kind().name())));
    }
    if coeff.d() == 1 {
        return Ok(ctx.clone());
    }
    Ok(ctx.with_coeff(coeff.deepened(coeff.depth() + 1)?))
}

/// Coefficientwise reduction mod `p`.
pub fn functor_mod_p(f: &RestrictedSeries) -> Result<RestrictedSeries> {
    let coeff = f.ctx().coeff();
    if coeff.laurent() {
        return Err(Error::Unsupported("reduction mod p needs integral coefficients".into()));
    }
    let target = f.ctx().with_coeff(coeff.residue()?);
    f.map_coeffs(target, CoeffElement::mod_p)
}

/// Evaluation `X^{1/d^i} ↦ b_i` from a one-variable series ring.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalMorphism {
    source: RingContext,
    tower: RootTower<CoeffElement>,
}

impl EvalMorphism {
    pub fn new(source: RingContext, tower: RootTower<CoeffElement>) -> Result<Self> {
        if source.nvars() != 1 {
            return Err(Error::ShapeMismatch { expected: 1, got: source.nvars() });
        }
        if !source.coeff().kind().is_eka() {
            return Err(Error::InvalidParameter("morphisms are defined over eka coefficients".into()));
        }
        if source.mode().base() != Some(tower.base()) {
            return Err(Error::ModeMismatch(alloc::format!("tower base {} in {}", tower.base(), source.mode())));
        }
        Ok(EvalMorphism { source, tower })
    }

    pub fn source(&self) -> &RingContext {
        &self.source
    }

    pub fn tower(&self) -> &RootTower<CoeffElement> {
        &self.tower
    }

    pub fn apply(&self, f: &RestrictedSeries) -> Result<CoeffElement> {
        if f.ctx() != &self.source {
            return Err(Error::ContextMismatch(alloc::format!("{} vs {}", f.ctx(), self.source)));
        }
        crate::eval::evaluate(f, core::slice::from_ref(&self.tower))
    }
}

/// Reduces source ring and tower entries mod `p`.
pub fn morphism_reduce(m: &EvalMorphism) -> Result<EvalMorphism> {
    let source = m.source.with_coeff(m.source.coeff().residue()?);
    let tower = m.tower.map(CoeffElement::mod_p)?;
    EvalMorphism::new(source, tower)
}

/// Section of [`morphism_reduce`]: lift the top root digitwise into `target`
/// and take powers downwards, which keeps the tower compatible.
pub fn morphism_lift(m: &EvalMorphism, source: RingContext, target: RingDescriptor) -> Result<EvalMorphism> {
    if source.coeff().residue()? != *m.source.coeff() {
        return Err(Error::RingMismatch(alloc::format!("{} does not reduce to {}", source.coeff(), m.source.coeff())));
    }
    let top = m.tower.entries().last().expect("nonempty tower").lift_residue(target)?;
    let tower = RootTower::from_top(m.tower.base(), top, m.tower.depth())?;
    EvalMorphism::new(source, tower)
}

/// Caps on exhaustive enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: u64,
    pub max_towers: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 5_000_000, max_towers: 200_000 }
    }
}

struct Budget {
    nodes: u64,
    limit: u64,
    exhausted: bool,
}

impl Budget {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            self.exhausted = true;
        }
        !self.exhausted
    }
}

/// All units `x` of the (integral char-0 or residue) ring with `x^d = u`,
/// found digit by digit: `x^d mod π^{t+1}` only depends on `x mod π^{t+1}`.
fn unit_roots(u: &CoeffElement, d: u64, budget: &mut Budget) -> Vec<CoeffElement> {
    let ring = *u.ring();
    let width = ring.precision() as usize;
    let p = ring.p() as u32;
    let mut partial: Vec<Vec<u32>> = vec![Vec::new()];
    for t in 0..width {
        let mut next = Vec::new();
        for xs in &partial {
            for a in 0..p {
                if t == 0 && a == 0 {
                    continue;
                }
                if !budget.tick() {
                    return Vec::new();
                }
                let mut ys = xs.clone();
                ys.push(a);
                let x = CoeffElement::from_digits(ring, 0, &ys).expect("digits in range");
                let diff = x.pow(d).sub(u).expect("same ring");
                if diff.is_zero() || diff.offset() > t as i64 {
                    next.push(ys);
                }
            }
        }
        partial = next;
    }
    partial.into_iter().map(|xs| CoeffElement::from_digits(ring, 0, &xs).expect("digits in range")).collect()
}

/// Chains `u_0 = c, u_1, …, u_len` of units with `u_{i+1}^d = u_i`.
fn unit_chains(c: &CoeffElement, d: u64, len: u32, budget: &mut Budget) -> Vec<Vec<CoeffElement>> {
    let mut chains = vec![vec![c.clone()]];
    for _ in 0..len {
        let mut next = Vec::new();
        for chain in &chains {
            for r in unit_roots(chain.last().expect("nonempty"), d, budget) {
                let mut ext = chain.clone();
                ext.push(r);
                next.push(ext);
            }
            if budget.exhausted {
                return Vec::new();
            }
        }
        chains = next;
    }
    chains
}

type TowerKey = Vec<(i64, Vec<u32>)>;

fn tower_key(entries: &[CoeffElement]) -> TowerKey {
    entries.iter().map(|e| (e.offset(), e.digits())).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollisionWitness {
    pub first: Vec<CoeffElement>,
    pub second: Vec<CoeffElement>,
    pub reduced: Vec<CoeffElement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub p: u64,
    pub d: u64,
    pub depth: u32,
    pub bound: u32,
    /// Number of roots `b_1..b_L` attached above `b_0`.
    pub tower_length: u32,
    pub target: RingDescriptor,
    /// `p ∤ d`; when false a collision is expected.
    pub coprime: bool,
    /// Units `c` without a chain of `d`-th roots in the residue field.
    pub excluded_units: Vec<u64>,
    pub family_size: u64,
    pub reduced_family_size: u64,
    pub image_size: u64,
    pub injective: bool,
    pub surjective: bool,
    /// Image towers outside the reduced family (always expected empty).
    pub anomalies: u64,
    pub witnesses: Vec<CollisionWitness>,
    pub truncated: bool,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        if self.truncated || self.anomalies > 0 {
            return false;
        }
        if self.coprime {
            self.injective && self.surjective
        } else {
            !self.witnesses.is_empty()
        }
    }
}

/// Reduction on the family of towers over `b_0 = c·p^e`, `c ∈ {1..p-1}`,
/// `e = j/d^K` with `0 <= j < N·d^K`, plus the zero tower.
///
/// Roots are `b_i = u_i π^{k_i}` in `Z_p[p^{1/d^{K+L}}] mod π^{D+1}`,
/// `D = d^{K+L}`, with `(u_i)` a chain of unit `d`-th roots and
/// `k_i = j·d^{L-i}`. `L` is the least length with `d^L >= N`, so the top
/// root always has valuation below 1 and survives reduction. The extra digit
/// above `D` is what separates `u` from `u(1 + p)` when `p | d`.
pub fn equivalence_check(p: u64, d: u64, depth: u32, bound: u32, limits: SearchLimits) -> Result<EquivalenceReport> {
    if d < 2 {
        return Err(Error::InvalidParameter("root index d must be >= 2".into()));
    }
    if bound < 1 {
        return Err(Error::InvalidParameter("bound N must be >= 1".into()));
    }
    let mut len = 1u32;
    while checked_pow(d, len).ok_or_else(|| Error::Resource("tower too long".into()))? < bound as u64 {
        len += 1;
    }
    let ram = checked_pow(d, depth + len).ok_or_else(|| Error::Resource("ramification too large".into()))?;
    if ram >= crate::coeff::MAX_PRECISION as u64 {
        return Err(Error::Resource(alloc::format!("d^(K+L) = {ram} exceeds the precision ceiling")));
    }
    let target = RingDescriptor::char0(p, d, depth + len, ram as u32 + 1)?;
    let residue = target.residue()?;
    let dk = checked_pow(d, depth).expect("smaller than ram");
    let mut budget = Budget { nodes: 0, limit: limits.max_nodes, exhausted: false };

    let mut report = EquivalenceReport {
        p,
        d,
        depth,
        bound,
        tower_length: len,
        target,
        coprime: !d.is_multiple_of(p),
        excluded_units: Vec::new(),
        family_size: 0,
        reduced_family_size: 0,
        image_size: 0,
        injective: true,
        surjective: true,
        anomalies: 0,
        witnesses: Vec::new(),
        truncated: false,
    };

    let zero_tower = |ring: RingDescriptor| vec![CoeffElement::zero(ring); len as usize + 1];
    let mut source: BTreeMap<TowerKey, Vec<CoeffElement>> = BTreeMap::new();
    let mut reduced_family: BTreeSet<TowerKey> = BTreeSet::new();
    source.insert(tower_key(&zero_tower(target)), zero_tower(target));
    reduced_family.insert(tower_key(&zero_tower(residue)));

    let powers: Vec<u64> = (0..=len).map(|i| checked_pow(d, len - i).expect("bounded")).collect();
    for c in 1..p {
        let chains = unit_chains(&CoeffElement::from_int(target, c as i64), d, len, &mut budget);
        let red_chains = unit_chains(&CoeffElement::from_int(residue, c as i64), d, len, &mut budget);
        if budget.exhausted {
            report.truncated = true;
            break;
        }
        if chains.is_empty() || red_chains.is_empty() {
            report.excluded_units.push(c);
            continue;
        }
        let monomial = |chain: &Vec<CoeffElement>, ring: RingDescriptor, j: u64| -> Result<Vec<CoeffElement>> {
            chain.iter().zip(&powers).map(|(u, r)| u.mul(&CoeffElement::pi_pow(ring, (j * r) as i64)?)).collect()
        };
        for j in 0..bound as u64 * dk {
            for chain in &chains {
                let entries = monomial(chain, target, j)?;
                source.insert(tower_key(&entries), entries);
            }
            for chain in &red_chains {
                reduced_family.insert(tower_key(&monomial(chain, residue, j)?));
            }
            if source.len() as u64 + reduced_family.len() as u64 > limits.max_towers {
                report.truncated = true;
                break;
            }
        }
        if report.truncated {
            break;
        }
    }

    let mut image: BTreeMap<TowerKey, Vec<CoeffElement>> = BTreeMap::new();
    for tower in source.values() {
        let reduced: Vec<CoeffElement> = tower.iter().map(CoeffElement::mod_p).collect::<Result<_>>()?;
        let key = tower_key(&reduced);
        if !reduced_family.contains(&key) {
            report.anomalies += 1;
        }
        match image.get(&key) {
            Some(other) => {
                report.injective = false;
                if report.witnesses.len() < 4 {
                    report.witnesses.push(CollisionWitness { first: other.clone(), second: tower.clone(), reduced });
                }
            }
            None => {
                image.insert(key, tower.clone());
            }
        }
    }
    report.surjective = reduced_family.iter().all(|k| image.contains_key(k));
    report.family_size = source.len() as u64;
    report.reduced_family_size = reduced_family.len() as u64;
    report.image_size = image.len() as u64;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    pub p: u64,
    pub d: u64,
    pub depth: u32,
    pub support_bound: u32,
    pub candidates: u64,
    /// Every `g` with `g^d = 1 + X` found, in enumeration order.
    pub solutions: Vec<RestrictedSeries>,
}

/// Exhaustive search for `g ∈ F_p[X^{1/d^∞}]` with `g^d = 1 + X`, support of
/// size at most `support_bound` inside `(1/d^K) Z ∩ [0, 1]`.
pub fn additivity_obstruction(p: u64, d: u64, depth: u32, support_bound: u32, max_candidates: u64) -> Result<ObstructionReport> {
    if d < 2 {
        return Err(Error::InvalidParameter("root index d must be >= 2".into()));
    }
    let ring = RingDescriptor::fp(p)?;
    let mode = ExpMode::dyadic(d)?;
    let ctx = RingContext::new(ring, vec!["X".into()], mode)?;
    let dk = checked_pow(d, depth).ok_or_else(|| Error::Resource("depth too large".into()))?;
    let grid: Vec<MultiExponent> = (0..=dk)
        .map(|j| MultiExponent::new(mode, vec![Exponent::dyadic(j, depth, d)?]))
        .collect::<Result<_>>()?;
    let n = grid.len() as u64;
    let k_max = (support_bound as u64).min(n);

    // Σ_k C(n, k)·(p-1)^k, checked against the ceiling before searching.
    let mut total = 0u64;
    let mut binom = 1u64;
    for k in 0..=k_max {
        if k > 0 {
            binom = binom.saturating_mul(n - k + 1) / k;
        }
        let term = binom.saturating_mul((p - 1).saturating_pow(k as u32));
        total = total.saturating_add(term);
    }
    if total > max_candidates {
        return Err(Error::Resource(alloc::format!("{total} candidates exceed the ceiling {max_candidates}")));
    }

    let one_plus_x = RestrictedSeries::one(ctx.clone())
        .add(&RestrictedSeries::var_pow(ctx.clone(), 0, Exponent::integer(mode, 1u32))?)?;
    let mut report = ObstructionReport { p, d, depth, support_bound, candidates: 0, solutions: Vec::new() };
    // The exponent monoid is torsion-free, so the extreme terms of g^d are
    // the d-th powers of those of g: the support must run from 0 to 1/d with
    // both end coefficients d-th roots of 1.
    let top = if depth >= 1 { Some((dk / d) as usize) } else { None };
    let root_of_one = |c: u32| {
        let mut acc = 1u64;
        for _ in 0..d {
            acc = acc * c as u64 % p;
        }
        acc == 1
    };
    for k in 1..=k_max as usize {
        let mut support: Vec<usize> = (0..k).collect();
        loop {
            let mut coeffs = vec![1u32; k];
            loop {
                report.candidates += 1;
                let ends_ok = support[0] == 0
                    && top == Some(support[k - 1])
                    && root_of_one(coeffs[0])
                    && root_of_one(coeffs[k - 1]);
                if !ends_ok {
                    if !next_digits(&mut coeffs, p as u32) {
                        break;
                    }
                    continue;
                }
                let terms = support
                    .iter()
                    .zip(&coeffs)
                    .map(|(&s, &c)| (grid[s].clone(), CoeffElement::from_int(ring, c as i64)));
                let g = RestrictedSeries::from_terms(ctx.clone(), terms)?;
                if g.pow(d)? == one_plus_x.clone().with_level(g.level()) {
                    report.solutions.push(g);
                }
                if !next_digits(&mut coeffs, p as u32) {
                    break;
                }
            }
            if !next_subset(&mut support, grid.len()) {
                break;
            }
        }
    }
    Ok(report)
}

/// Counts through `{1..p-1}^k`.
fn next_digits(xs: &mut [u32], p: u32) -> bool {
    for x in xs.iter_mut() {
        if *x + 1 < p {
            *x += 1;
            return true;
        }
        *x = 1;
    }
    false
}

/// Next `k`-subset of `0..n` in lexicographic order.
fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The same series over `R[1/π]`.
pub fn rig_extend(f: &RestrictedSeries) -> Result<RestrictedSeries> {
    let coeff = f.ctx().coeff();
    if coeff.kind() != RingKind::Char0Eka {
        return Err(Error::InvalidParameter("rig extension needs char-0 eka coefficients".into()));
    }
    if coeff.laurent() {
        return Ok(f.clone());
    }
    let target = f.ctx().with_coeff(coeff.with_laurent()?);
    f.map_coeffs(target, CoeffElement::to_laurent)
}

/// `f / s` over laurent coefficients.
pub fn div_scalar(f: &RestrictedSeries, s: &CoeffElement) -> Result<RestrictedSeries> {
    if !f.ctx().coeff().laurent() {
        return Err(Error::InvalidParameter("scalar division needs laurent coefficients; apply rig_extend".into()));
    }
    f.scale(&s.invert()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReesMode {
    Classical,
    Eka,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedPiece {
    pub index: Exponent,
    /// `a^index` with `a = p`; zero in the residue ring for integer indices.
    pub generator: CoeffElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReesReport {
    pub mode: ReesMode,
    pub ring: RingDescriptor,
    pub pieces: Vec<GradedPiece>,
    /// `generator(n)·a = generator(n+1)` for every integer `n < n_max`.
    pub a_stable: bool,
}

/// Graded pieces `a^n R` of the Rees algebra of `a = p`; the eka mode adds
/// `a^{1/d^n} R` for `n = 1..=root_depth`, where `a^{1/d^n} = π^{d^{K-n}}`.
pub fn rees_pieces(ring: RingDescriptor, mode: ReesMode, n_max: u32, root_depth: u32) -> Result<ReesReport> {
    if !ring.kind().is_eka() {
        return Err(Error::InvalidParameter("Rees pieces need eka coefficients".into()));
    }
    let base = ring.d().max(2);
    let a_power = |k: u64| -> Result<CoeffElement> {
        match ring.kind() {
            RingKind::Char0Eka => CoeffElement::pi_pow(ring, k as i64),
            // `p = s^{d^K} = 0`
            _ => Ok(if k >= ring.precision() as u64 { CoeffElement::zero(ring) } else { CoeffElement::pi_pow(ring, k as i64)? }),
        }
    };
    let ram = ring.ramification();
    let mut pieces = Vec::new();
    for n in 0..=n_max as u64 {
        let k = ram.checked_mul(n).ok_or_else(|| Error::Resource("index too large".into()))?;
        pieces.push(GradedPiece { index: Exponent::dyadic(n, 0, base)?, generator: a_power(k)? });
    }
    if mode == ReesMode::Eka {
        if root_depth > ring.depth() {
            return Err(Error::InvalidParameter(alloc::format!(
                "root depth {root_depth} exceeds the ring depth {}",
                ring.depth()
            )));
        }
        if ring.d() < 2 {
            return Err(Error::InvalidParameter("eka pieces need d >= 2".into()));
        }
        for n in 1..=root_depth {
            let k = checked_pow(ring.d(), ring.depth() - n).expect("below ramification");
            pieces.push(GradedPiece { index: Exponent::dyadic(1u32, n, base)?, generator: a_power(k)? });
        }
    }
    pieces.sort_by(|a, b| a.index.cmp(&b.index));
    let a = a_power(ram)?;
    let integer: Vec<&GradedPiece> = pieces.iter().filter(|g| g.index.is_integer()).collect();
    let a_stable = integer.windows(2).all(|w| w[0].generator.mul(&a).map(|x| x == w[1].generator).unwrap_or(false));
    Ok(ReesReport { mode, ring, pieces, a_stable })
}

/// Integer valuation thresholds `val >= n` preserved by the embedding.
pub fn thresholds_preserved(a: &CoeffElement, new_depth: u32) -> Result<bool> {
    let b = a.promote(new_depth)?;
    Ok((0..=4).all(|n| (a.val() >= Valuation::finite(n, 1)) == (b.val() >= Valuation::finite(n, 1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x_minus(ctx: &RingContext, c: CoeffElement) -> RestrictedSeries {
        let x = RestrictedSeries::var_pow(ctx.clone(), 0, Exponent::integer(ctx.mode(), 1u32)).unwrap();
        x.sub(&RestrictedSeries::constant(ctx.clone(), c).unwrap()).unwrap()
    }

    #[test]
    fn extend_examples() {
        let r = RingDescriptor::char0(3, 2, 1, 4).unwrap();
        let ctx = RingContext::standard(r, &["X"]).unwrap();
        let up = eka_extend(&ctx).unwrap();
        assert_eq!(up.coeff().depth(), 2);
        let pi_old = CoeffElement::uniformizer(r).unwrap().promote(2).unwrap();
        let pi_new = CoeffElement::uniformizer(*up.coeff()).unwrap();
        assert_eq!(pi_old, pi_new.pow(2));
        let one = RingContext::standard(RingDescriptor::char0(5, 1, 0, 3).unwrap(), &["X"]).unwrap();
        assert_eq!(eka_extend(&one).unwrap(), one);
        let fp = RingContext::standard(RingDescriptor::fp(5).unwrap(), &["X"]).unwrap();
        assert!(eka_extend(&fp).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let digits: Vec<u32> = (0..4).map(|_| rng.random_range(0..3)).collect();
            let a = CoeffElement::from_digits(r, rng.random_range(0..4), &digits).unwrap();
            assert!(thresholds_preserved(&a, 2).unwrap());
        }
    }

    #[test]
    fn mod_p_series_examples() {
        let r = RingDescriptor::char0(3, 2, 1, 4).unwrap();
        let ctx = RingContext::standard(r, &["X"]).unwrap();
        let f = x_minus(&ctx, CoeffElement::from_int(r, 3));
        let rctx = ctx.with_coeff(r.residue().unwrap());
        let x = RestrictedSeries::var_pow(rctx.clone(), 0, Exponent::integer(rctx.mode(), 1u32)).unwrap();
        assert_eq!(functor_mod_p(&f).unwrap(), x);
        let g = x_minus(&ctx, CoeffElement::uniformizer(r).unwrap());
        let s = CoeffElement::uniformizer(*rctx.coeff()).unwrap();
        assert_eq!(functor_mod_p(&g).unwrap(), x_minus(&rctx, s));
        let lau = rig_extend(&f).unwrap();
        assert!(functor_mod_p(&lau).is_err());
    }

    #[test]
    fn morphism_examples() {
        let src = RingDescriptor::char0(3, 2, 0, 4).unwrap();
        let tgt = RingDescriptor::char0(3, 2, 2, 8).unwrap();
        let ctx = RingContext::new(src, vec!["X".into()], ExpMode::Dyadic { base: 2 }).unwrap();
        let zero = RootTower::new(2, vec![CoeffElement::zero(tgt); 3]).unwrap();
        let m0 = EvalMorphism::new(ctx.clone(), zero).unwrap();
        let r0 = morphism_reduce(&m0).unwrap();
        assert!(r0.tower().entries().iter().all(CoeffElement::is_zero));

        let tower = RootTower::from_top(2, CoeffElement::uniformizer(tgt).unwrap(), 2).unwrap();
        let m = EvalMorphism::new(ctx.clone(), tower).unwrap();
        let red = morphism_reduce(&m).unwrap();
        let e = red.tower().entries();
        assert!(e[0].is_zero());
        assert_eq!(e[2], CoeffElement::uniformizer(tgt.residue().unwrap()).unwrap());

        let lifted = morphism_lift(&red, ctx.clone(), tgt).unwrap();
        assert_eq!(morphism_reduce(&lifted).unwrap(), red);
    }

    #[test]
    fn reduction_commutes_with_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let src = RingDescriptor::char0(3, 2, 1, 4).unwrap();
        let tgt = RingDescriptor::char0(3, 2, 3, 16).unwrap();
        let ctx = RingContext::new(src, vec!["X".into()], ExpMode::Dyadic { base: 2 }).unwrap();
        for _ in 0..100 {
            let terms: Vec<_> = (0..3)
                .map(|_| {
                    let e = MultiExponent::new(ctx.mode(), vec![Exponent::dyadic(rng.random_range(0..6u64), rng.random_range(0..3), 2).unwrap()]).unwrap();
                    let digits: Vec<u32> = (0..4).map(|_| rng.random_range(0..3)).collect();
                    (e, CoeffElement::from_digits(src, 0, &digits).unwrap())
                })
                .collect();
            let f = RestrictedSeries::from_terms(ctx.clone(), terms).unwrap();
            let digits: Vec<u32> = (0..16).map(|_| rng.random_range(0..3)).collect();
            let top = CoeffElement::from_digits(tgt, rng.random_range(0..4), &digits).unwrap();
            let m = EvalMorphism::new(ctx.clone(), RootTower::from_top(2, top, 2).unwrap()).unwrap();
            let lhs = m.apply(&f).unwrap().mod_p().unwrap();
            let rm = morphism_reduce(&m).unwrap();
            let rhs = rm.apply(&functor_mod_p(&f).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn equivalence_bijective_when_coprime() {
        let r = equivalence_check(3, 2, 2, 1, SearchLimits::default()).unwrap();
        assert!(r.coprime && r.injective && r.surjective && r.anomalies == 0, "{r:?}");
        // c = 2 is not a square mod 3
        assert_eq!(r.excluded_units, vec![2]);
        // zero tower plus one tower per exponent j/4, j < 4, and per square root of 1 at the top
        assert_eq!(r.family_size, 1 + 4 * 2);
        assert!(r.passed());
    }

    #[test]
    fn distinct_fractional_exponents_stay_distinct() {
        let t = RingDescriptor::char0(3, 2, 3, 9).unwrap();
        let a = RootTower::from_top(2, CoeffElement::pi_pow(t, 2).unwrap(), 1).unwrap();
        let b = RootTower::from_top(2, CoeffElement::pi_pow(t, 1).unwrap(), 1).unwrap();
        // b_0 = p^{1/2} and p^{1/4}
        assert_eq!(a.entries()[0].val(), Valuation::finite(1, 2));
        assert_eq!(b.entries()[0].val(), Valuation::finite(1, 4));
        let ra: Vec<_> = a.entries().iter().map(|x| x.mod_p().unwrap()).collect();
        let rb: Vec<_> = b.entries().iter().map(|x| x.mod_p().unwrap()).collect();
        assert_ne!(ra, rb);
        assert!(ra.iter().chain(&rb).all(|x| !x.is_zero()));
    }

    #[test]
    fn equivalence_collides_when_p_divides_d() {
        for (p, d) in [(2, 2), (3, 3)] {
            let r = equivalence_check(p, d, 0, 1, SearchLimits::default()).unwrap();
            assert!(!r.coprime && !r.injective && !r.witnesses.is_empty(), "{r:?}");
            let w = &r.witnesses[0];
            assert_ne!(w.first, w.second);
            let rf: Vec<_> = w.first.iter().map(|x| x.mod_p().unwrap()).collect();
            assert_eq!(rf, w.reduced);
        }
    }

    #[test]
    fn obstruction_examples() {
        let r = additivity_obstruction(3, 2, 2, 6, 1_000_000).unwrap();
        assert!(r.solutions.is_empty());
        assert_eq!(r.candidates, 3u64.pow(5) - 1);
        for p in [2u64, 3] {
            let r = additivity_obstruction(p, p, 1, 3, 1_000_000).unwrap();
            assert_eq!(r.solutions.len(), 1);
            let ctx = r.solutions[0].ctx().clone();
            let expected = RestrictedSeries::one(ctx.clone())
                .add(&RestrictedSeries::var_pow(ctx.clone(), 0, Exponent::dyadic(1u32, 1, p).unwrap()).unwrap())
                .unwrap();
            assert_eq!(r.solutions[0], expected);
        }
        assert!(matches!(additivity_obstruction(3, 2, 6, 6, 1000), Err(Error::Resource(_))));
    }

    #[test]
    fn obstruction_pruning_matches_dense_search() {
        for (p, d, k) in [(2u64, 2u64, 2u32), (3, 2, 2), (3, 3, 1), (2, 4, 1), (2, 3, 1)] {
            let dk = d.pow(k);
            let n = dk as usize + 1;
            let r = additivity_obstruction(p, d, k, n as u32, 1_000_000).unwrap();
            let ctx = RingContext::new(RingDescriptor::fp(p).unwrap(), vec!["X".into()], ExpMode::Dyadic { base: d }).unwrap();
            let target = RestrictedSeries::one(ctx.clone())
                .add(&RestrictedSeries::var_pow(ctx.clone(), 0, Exponent::integer(ctx.mode(), 1u32)).unwrap())
                .unwrap();
            // every coefficient vector on the grid, no pruning
            let mut dense = Vec::new();
            for code in 0..p.pow(n as u32) {
                let mut c = code;
                let terms: Vec<_> = (0..n)
                    .map(|j| {
                        let digit = c % p;
                        c /= p;
                        let e = MultiExponent::new(ctx.mode(), vec![Exponent::dyadic(j as u64, k, d).unwrap()]).unwrap();
                        (e, CoeffElement::from_int(*ctx.coeff(), digit as i64))
                    })
                    .collect();
                let g = RestrictedSeries::from_terms(ctx.clone(), terms).unwrap();
                if g.pow(d).unwrap().sub(&target).unwrap().is_zero() {
                    dense.push(g);
                }
            }
            assert_eq!(r.solutions.len(), dense.len(), "({p},{d},{k})");
            for g in &dense {
                assert!(r.solutions.iter().any(|s| s.sub(g).unwrap().is_zero()), "({p},{d},{k}) misses {g}");
            }
        }
    }

    #[test]
    fn rig_examples() {
        let r = RingDescriptor::char0(3, 2, 1, 4).unwrap();
        let ctx = RingContext::standard(r, &["X"]).unwrap();
        let x = RestrictedSeries::var_pow(ctx.clone(), 0, Exponent::integer(ctx.mode(), 1u32)).unwrap();
        let px = x.scale(&CoeffElement::from_int(r, 3)).unwrap();
        let lpx = rig_extend(&px).unwrap();
        let lp = CoeffElement::from_int(*lpx.ctx().coeff(), 3);
        assert_eq!(div_scalar(&lpx, &lp).unwrap(), rig_extend(&x).unwrap());
        let pi = CoeffElement::uniformizer(*lpx.ctx().coeff()).unwrap();
        let v = match (div_scalar(&lpx, &pi).unwrap().gauss_val(), lpx.gauss_val()) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a - b,
            _ => unreachable!(),
        };
        assert_eq!(v, num_rational::Ratio::new(-1, 2));
        assert!(div_scalar(&px, &CoeffElement::from_int(r, 1)).is_err());
    }

    #[test]
    fn rees_examples() {
        let r = RingDescriptor::char0(3, 2, 2, 12).unwrap();
        let c = rees_pieces(r, ReesMode::Classical, 3, 0).unwrap();
        let idx: Vec<String> = c.pieces.iter().map(|g| alloc::format!("{}", g.index)).collect();
        assert_eq!(idx, ["0/2^0", "1/2^0", "2/2^0", "3/2^0"]);
        for (n, g) in c.pieces.iter().enumerate() {
            assert_eq!(g.generator, CoeffElement::from_int(r, 3i64.pow(n as u32)));
        }
        assert!(c.a_stable);
        let e = rees_pieces(r, ReesMode::Eka, 3, 2).unwrap();
        let idx: Vec<String> = e.pieces.iter().map(|g| alloc::format!("{}", g.index)).collect();
        assert_eq!(idx, ["0/2^0", "1/2^2", "1/2^1", "1/2^0", "2/2^0", "3/2^0"]);
        assert_eq!(e.pieces[2].generator, CoeffElement::pi_pow(r, 2).unwrap());
        assert!(e.a_stable);
        assert!(rees_pieces(r, ReesMode::Eka, 3, 3).is_err());
        let rp = rees_pieces(r.residue().unwrap(), ReesMode::Eka, 2, 2).unwrap();
        assert!(rp.pieces.iter().filter(|g| g.index.is_integer() && !g.index.is_zero()).all(|g| g.generator.is_zero()));
        assert!(rp.pieces.iter().filter(|g| !g.index.is_integer()).all(|g| !g.generator.is_zero()));
    }

    use alloc::string::String;
}
