//! Sparse restricted power series with fractional exponents.
//!
//! A true restricted series has coefficients tending to zero; modulo the
//! precision window only finitely many survive, so a series is a finite map
//! from multi-exponents to nonzero coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::coeff::{CoeffElement, RingDescriptor, RingKind, Valuation};
use crate::error::{Error, Result};
use crate::exponent::{ExpMode, Exponent, MultiExponent};

/// Coefficient ring, variable names and exponent mode of a series ring.
///
/// In dyadic mode the exponent base is usually `p`; it may also be the root
/// index `d` of the coefficient tower, which is what evaluation towers use.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    coeff: RingDescriptor,
    vars: Vec<String>,
    mode: ExpMode,
}

impl RingContext {
    pub fn new(coeff: RingDescriptor, vars: Vec<String>, mode: ExpMode) -> Result<Self> {
        if let ExpMode::Dyadic { base } = mode {
            ExpMode::dyadic(base)?;
        }
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::InvalidParameter("empty variable name".into()));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidParameter(alloc::format!("duplicate variable {v:?}")));
            }
        }
        Ok(RingContext { coeff, vars, mode })
    }

    /// Dyadic context with exponent base `p`.
    pub fn standard(coeff: RingDescriptor, vars: &[&str]) -> Result<Self> {
        let base = if coeff.p() >= 2 { coeff.p() } else { 2 };
        Self::new(coeff, vars.iter().map(|s| String::from(*s)).collect(), ExpMode::Dyadic { base })
    }

    pub fn coeff(&self) -> &RingDescriptor {
        &self.coeff
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn mode(&self) -> ExpMode {
        self.mode
    }

    pub fn with_coeff(&self, coeff: RingDescriptor) -> Self {
        RingContext { coeff, ..self.clone() }
    }

    /// Appends variables (blow-up charts).
    pub fn extended(&self, names: &[String]) -> Result<Self> {
        let mut vars = self.vars.clone();
        vars.extend(names.iter().cloned());
        Self::new(self.coeff, vars, self.mode)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn check_exp(&self, e: &MultiExponent) -> Result<()> {
        if e.mode() != self.mode {
            return Err(Error::ModeMismatch(alloc::format!("{} in a {} ring", e.mode(), self.mode)));
        }
        if e.len() != self.nvars() {
            return Err(Error::ShapeMismatch { expected: self.nvars(), got: e.len() });
        }
        Ok(())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch(alloc::format!("{self} vs {other}")));
        }
        Ok(())
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<{}>_{}", self.coeff, self.vars.join(","), self.mode)
    }
}

/// A finite-support series; terms iterate in [`crate::exponent::mexp_cmp`] order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RestrictedSeries {
    ctx: RingContext,
    level: u32,
    terms: BTreeMap<MultiExponent, CoeffElement>,
}

impl RestrictedSeries {
    pub fn zero(ctx: RingContext) -> Self {
        RestrictedSeries { ctx, level: 0, terms: BTreeMap::new() }
    }

    pub fn one(ctx: RingContext) -> Self {
        let c = CoeffElement::one(*ctx.coeff());
        Self::constant(ctx, c).expect("coefficient from the context ring")
    }

    pub fn constant(ctx: RingContext, c: CoeffElement) -> Result<Self> {
        let e = MultiExponent::zero(ctx.mode(), ctx.nvars());
        Self::monomial(ctx, e, c)
    }

    pub fn monomial(ctx: RingContext, e: MultiExponent, c: CoeffElement) -> Result<Self> {
        Self::from_terms(ctx, [(e, c)])
    }

    /// The variable `var` raised to `e`, coefficient 1.
    pub fn var_pow(ctx: RingContext, var: usize, e: Exponent) -> Result<Self> {
        if var >= ctx.nvars() {
            return Err(Error::ShapeMismatch { expected: ctx.nvars(), got: var + 1 });
        }
        let m = MultiExponent::unit(ctx.mode(), ctx.nvars(), var, e)?;
        let one = CoeffElement::one(*ctx.coeff());
        Self::monomial(ctx, m, one)
    }

    /// Sums the given terms; duplicates are combined and zeros dropped.
    pub fn from_terms(
        ctx: RingContext,
        terms: impl IntoIterator<Item = (MultiExponent, CoeffElement)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ctx);
        for (e, c) in terms {
            out.ctx.check_exp(&e)?;
            if c.ring() != out.ctx.coeff() {
                return Err(Error::RingMismatch(alloc::format!("{} in {}", c.ring(), out.ctx.coeff())));
            }
            out.add_term(e, c)?;
        }
        out.level = out.exponent_level();
        Ok(out)
    }

    fn add_term(&mut self, e: MultiExponent, c: CoeffElement) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = old.add(&c)?;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    /// Level bound `L`: never below the largest exponent scale present.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Raises the level bound; a lower value is ignored.
    pub fn with_level(mut self, level: u32) -> Self {
        self.level = self.level.max(level);
        self
    }

    fn exponent_level(&self) -> u32 {
        self.terms.keys().map(MultiExponent::scale).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiExponent, &CoeffElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_of(&self, e: &MultiExponent) -> CoeffElement {
        self.terms.get(e).cloned().unwrap_or_else(|| CoeffElement::zero(*self.ctx.coeff()))
    }

    /// `Some((e, c))` when the series is a single term.
    pub fn as_monomial(&self) -> Option<(&MultiExponent, &CoeffElement)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ctx.check_same(&other.ctx)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone())?;
        }
        out.level = self.level.max(other.level);
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect();
        RestrictedSeries { ctx: self.ctx.clone(), level: self.level, terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ctx.check_same(&other.ctx)?;
        let mut out = Self::zero(self.ctx.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.checked_add(e2)?, c1.mul(c2)?)?;
            }
        }
        out.level = self.level.max(other.level);
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::one(self.ctx.clone()).with_level(self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &CoeffElement) -> Result<Self> {
        let mut out = Self::zero(self.ctx.clone());
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.mul(c)?)?;
        }
        out.level = self.level;
        Ok(out)
    }

    /// Applies `f` to every coefficient, landing in `ctx`.
    pub fn map_coeffs(
        &self,
        ctx: RingContext,
        mut f: impl FnMut(&CoeffElement) -> Result<CoeffElement>,
    ) -> Result<Self> {
        if ctx.nvars() != self.ctx.nvars() || ctx.mode() != self.ctx.mode() {
            return Err(Error::ContextMismatch(alloc::format!("{} vs {ctx}", self.ctx)));
        }
        let mut out = Self::zero(ctx);
        for (e, c) in &self.terms {
            let y = f(c)?;
            if y.ring() != out.ctx.coeff() {
                return Err(Error::RingMismatch(alloc::format!("{} in {}", y.ring(), out.ctx.coeff())));
            }
            out.add_term(e.clone(), y)?;
        }
        out.level = self.level;
        Ok(out)
    }

    /// Minimum coefficient valuation; `Infinite` for the zero series.
    pub fn gauss_val(&self) -> Valuation {
        self.terms.values().map(CoeffElement::val).min().unwrap_or(Valuation::Infinite)
    }

    /// Drops every term whose coefficient has valuation `>= cutoff`.
    pub fn truncate_by_val(&self, cutoff: Valuation) -> Self {
        let terms = self.terms.iter().filter(|(_, c)| c.val() < cutoff).map(|(e, c)| (e.clone(), c.clone())).collect();
        RestrictedSeries { ctx: self.ctx.clone(), level: self.level, terms }
    }

    /// The substitution `X_j -> X_j^{1/base^i}` in every variable.
    pub fn root_shift(&self, i: u32) -> Result<Self> {
        if self.ctx.mode() == ExpMode::Rational {
            return Err(Error::ModeMismatch("root shift needs dyadic exponents".into()));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(e.scale_root(i)?, c.clone());
        }
        Ok(RestrictedSeries { ctx: self.ctx.clone(), level: self.level + i, terms })
    }

    pub fn promote_coeffs(&self, new_depth: u32) -> Result<Self> {
        let ring = self.ctx.coeff().deepened(new_depth)?;
        self.map_coeffs(self.ctx.with_coeff(ring), |c| c.promote(new_depth))
    }
}

impl fmt::Display for RestrictedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (v, x) in self.ctx.vars().iter().zip(e.entries()) {
                if !x.is_zero() {
                    write!(f, "*{v}^{x}")?;
                }
            }
        }
        Ok(())
    }
}

/// Whether `t` is divisible by some generator in the exponent lattice.
pub fn monomial_ideal_member(gens: &[MultiExponent], t: &MultiExponent) -> Result<bool> {
    if gens.is_empty() {
        return Err(Error::InvalidParameter("empty generator list".into()));
    }
    for g in gens {
        if g.divides(t)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Smallest level `i` such that every generator lives in the subring with
/// exponents in `(1/base^i) N` and coefficients of valuation in `(1/d^i) Z`.
pub fn finite_presentation_at_level(gens: &[RestrictedSeries]) -> u32 {
    gens.iter()
        .flat_map(|g| g.terms().map(|(e, c)| e.scale().max(c.offset_scale())))
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinLevel {
    pub shift: u32,
    /// Degree of `f(X^{1/base^i})` in `Y = X^{1/base^{L+i}}`.
    pub degree: u64,
    pub eisenstein: bool,
}

/// Sufficient irreducibility check of `f(X^{1/base^i})` for `i = 0..=i_max`:
/// as a polynomial in the finest root of `X`, the leading coefficient is a
/// unit, the others have positive valuation, and the constant term has
/// valuation exactly `1/d^K` (the valuation of `π`).
pub fn eisenstein_at_pi(f: &RestrictedSeries, i_max: u32) -> Result<Vec<EisensteinLevel>> {
    let ctx = f.ctx();
    if ctx.nvars() != 1 {
        return Err(Error::ShapeMismatch { expected: 1, got: ctx.nvars() });
    }
    let ring = ctx.coeff();
    if ring.laurent() {
        return Err(Error::Unsupported("eisenstein check needs integral coefficients".into()));
    }
    let mut out = Vec::new();
    for i in 0..=i_max {
        let g = f.root_shift(i)?;
        let level = g.level();
        // Integer exponents in Y = X^{1/base^level}.
        let mut poly: Vec<(u64, &CoeffElement)> = Vec::new();
        for (e, c) in g.terms() {
            let x = &e.entries()[0];
            let scale = x.scale().unwrap_or(0);
            let factor = crate::coeff::checked_pow(ctx.mode().base().unwrap_or(1), level - scale)
                .ok_or_else(|| Error::Resource("degree overflow".into()))?;
            let num = x.numerator_u64().ok_or_else(|| Error::Resource("degree overflow".into()))?;
            poly.push((num * factor, c));
        }
        let degree = poly.iter().map(|(n, _)| *n).max().unwrap_or(0);
        let pi_val = match ring.kind() {
            RingKind::Char0Eka | RingKind::CharpEka => Some(Valuation::finite(1, ring.ramification() as i64)),
            _ => None,
        };
        let zero = Valuation::finite(0, 1);
        let eisenstein = degree >= 1
            && pi_val.is_some()
            && poly.iter().all(|(n, c)| {
                if *n == degree {
                    c.val() == zero
                } else {
                    c.val() > zero
                }
            })
            && poly.iter().any(|(n, c)| *n == 0 && Some(c.val()) == pi_val);
        out.push(EisensteinLevel { shift: i, degree, eisenstein });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u64, d: u64, k: u32, m: u32) -> RingDescriptor {
        RingDescriptor::char0(p, d, k, m).unwrap()
    }

    fn e(num: u64, k: u32, base: u64) -> Exponent {
        Exponent::dyadic(num, k, base).unwrap()
    }

    fn mono(ctx: &RingContext, exps: &[(u64, u32)], c: CoeffElement) -> RestrictedSeries {
        let base = ctx.mode().base().unwrap();
        let m = MultiExponent::new(ctx.mode(), exps.iter().map(|&(n, k)| e(n, k, base)).collect()).unwrap();
        RestrictedSeries::monomial(ctx.clone(), m, c).unwrap()
    }

    fn random_coeff(rng: &mut ChaCha8Rng, r: RingDescriptor) -> CoeffElement {
        let m = r.precision() as usize;
        let digits: Vec<u32> = (0..m).map(|_| rng.random_range(0..r.p() as u32)).collect();
        CoeffElement::from_digits(r, rng.random_range(0..2), &digits).unwrap()
    }

    fn random_series(rng: &mut ChaCha8Rng, ctx: &RingContext, terms: usize) -> RestrictedSeries {
        let base = ctx.mode().base().unwrap();
        let mut out = RestrictedSeries::zero(ctx.clone());
        for _ in 0..terms {
            let exps: Vec<(u64, u32)> =
                (0..ctx.nvars()).map(|_| (rng.random_range(0..4), rng.random_range(0..3))).collect();
            let t = mono(ctx, &exps, random_coeff(rng, *ctx.coeff()));
            out = out.add(&t).unwrap();
        }
        let _ = base;
        out
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(3, 2, 1, 4);
        let ctx = RingContext::new(r, vec!["X".into(), "Y".into()], ExpMode::Dyadic { base: 2 }).unwrap();
        let one = CoeffElement::one(r);
        let x = mono(&ctx, &[(1, 1), (0, 0)], one.clone());
        let y = mono(&ctx, &[(0, 0), (1, 1)], one.clone());
        let prod = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        let expected = mono(&ctx, &[(1, 0), (0, 0)], one.clone()).sub(&mono(&ctx, &[(0, 0), (1, 0)], one)).unwrap();
        assert_eq!(prod.terms().collect::<Vec<_>>(), expected.terms().collect::<Vec<_>>());
        assert_eq!(prod.level(), 1);
    }

    #[test]
    fn freshman_dream_in_char_two() {
        let r = RingDescriptor::charp(2, 2, 1).unwrap();
        let ctx = RingContext::standard(r, &["X", "Y"]).unwrap();
        let one = CoeffElement::one(r);
        let s = mono(&ctx, &[(1, 1), (0, 0)], one.clone()).add(&mono(&ctx, &[(0, 0), (1, 1)], one.clone())).unwrap();
        let sq = s.mul(&s).unwrap();
        let expected = mono(&ctx, &[(1, 0), (0, 0)], one.clone()).add(&mono(&ctx, &[(0, 0), (1, 0)], one)).unwrap();
        assert_eq!(sq, expected.with_level(1));
    }

    #[test]
    fn gauss_val_examples() {
        let r = ring(3, 2, 1, 4);
        let ctx = RingContext::standard(r, &["X"]).unwrap();
        let f = mono(&ctx, &[(1, 0)], CoeffElement::from_int(r, 3))
            .add(&mono(&ctx, &[(1, 1)], CoeffElement::uniformizer(r).unwrap()))
            .unwrap();
        assert_eq!(f.gauss_val(), Valuation::finite(1, 2));
        assert_eq!(RestrictedSeries::zero(ctx).gauss_val(), Valuation::Infinite);
    }

    #[test]
    fn root_shift_examples() {
        let r = ring(2, 2, 1, 4);
        let ctx = RingContext::standard(r, &["X"]).unwrap();
        let p = CoeffElement::from_int(r, 2);
        let f = mono(&ctx, &[(1, 0)], CoeffElement::one(r)).sub(&RestrictedSeries::constant(ctx.clone(), p.clone()).unwrap()).unwrap();
        let g = f.root_shift(1).unwrap();
        let expected = mono(&ctx, &[(1, 1)], CoeffElement::one(r)).sub(&RestrictedSeries::constant(ctx.clone(), p).unwrap()).unwrap();
        assert_eq!(g, expected);
        assert_eq!(f.root_shift(1).unwrap().root_shift(1).unwrap(), f.root_shift(2).unwrap());
        let q = RingContext::new(r, vec!["X".into()], ExpMode::Rational).unwrap();
        assert!(RestrictedSeries::one(q).root_shift(1).is_err());
    }

    #[test]
    fn membership_examples() {
        let m = ExpMode::Dyadic { base: 2 };
        let t = |n: u64, k: u32| MultiExponent::new(m, vec![e(n, k, 2)]).unwrap();
        assert!(monomial_ideal_member(&[t(1, 1)], &t(1, 0)).unwrap());
        for k in 0..=4u32 {
            let gens: Vec<_> = (0..=k).map(|j| t(1, j)).collect();
            assert!(!monomial_ideal_member(&gens, &t(1, k + 1)).unwrap());
        }
        assert!(monomial_ideal_member(&[t(3, 2)], &t(3, 2)).unwrap());
        let two = MultiExponent::zero(m, 2);
        assert!(monomial_ideal_member(&[t(1, 0)], &two).is_err());
    }

    /// Brute force: search cofactors with entries `a/2^k`, `a < 2^k·6`.
    fn member_brute(gens: &[MultiExponent], t: &MultiExponent, k: u32) -> bool {
        let m = t.mode();
        let n = t.len();
        let range = (6u64 << k) as usize;
        let total = range.pow(n as u32);
        for g in gens {
            for idx in 0..total {
                let mut rest = idx;
                let entries: Vec<Exponent> = (0..n)
                    .map(|_| {
                        let a = (rest % range) as u64;
                        rest /= range;
                        e(a, k, 2)
                    })
                    .collect();
                let h = MultiExponent::new(m, entries).unwrap();
                if g.checked_add(&h).unwrap() == *t {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn membership_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = ExpMode::Dyadic { base: 2 };
        let rand_exp = |rng: &mut ChaCha8Rng| {
            MultiExponent::new(m, (0..2).map(|_| e(rng.random_range(0..6), rng.random_range(0..3), 2)).collect())
                .unwrap()
        };
        for _ in 0..60 {
            let gens: Vec<_> = (0..rng.random_range(1..4)).map(|_| rand_exp(&mut rng)).collect();
            let t = rand_exp(&mut rng);
            assert_eq!(monomial_ideal_member(&gens, &t).unwrap(), member_brute(&gens, &t, 2), "{t}");
        }
    }

    #[test]
    fn presentation_level_examples() {
        let r = ring(2, 2, 1, 4);
        let ctx = RingContext::standard(r, &["T"]).unwrap();
        let a = mono(&ctx, &[(1, 2)], CoeffElement::one(r));
        let b = mono(&ctx, &[(1, 0)], CoeffElement::uniformizer(r).unwrap());
        assert_eq!(finite_presentation_at_level(&[a, b.clone()]), 2);
        assert_eq!(finite_presentation_at_level(&[mono(&ctx, &[(1, 0)], CoeffElement::one(r))]), 0);
        // coefficient valuation 1/2 sets level 1 on its own
        assert_eq!(finite_presentation_at_level(&[b]), 1);
    }

    #[test]
    fn presentation_level_under_shift_and_promote() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = ring(2, 2, 1, 4);
        let ctx = RingContext::standard(r, &["T", "U"]).unwrap();
        for _ in 0..100 {
            let gens: Vec<_> = (0..3).map(|_| random_series(&mut rng, &ctx, 3)).collect();
            let exps_level = gens.iter().flat_map(|g| g.terms().map(|(e, _)| e.scale())).max().unwrap_or(0);
            let coeff_level =
                gens.iter().flat_map(|g| g.terms().map(|(_, c)| c.offset_scale())).max().unwrap_or(0);
            let base = finite_presentation_at_level(&gens);
            assert_eq!(base, exps_level.max(coeff_level));
            for j in 0..3 {
                let shifted: Vec<_> = gens.iter().map(|g| g.root_shift(j).unwrap()).collect();
                let nonconstant = gens.iter().any(|g| g.terms().any(|(e, _)| !e.is_zero()));
                let exp_after = if nonconstant { exps_level + j } else { 0 };
                assert_eq!(finite_presentation_at_level(&shifted), exp_after.max(coeff_level));
                let promoted: Vec<_> = gens.iter().map(|g| g.promote_coeffs(1 + j).unwrap()).collect();
                assert_eq!(finite_presentation_at_level(&promoted), base);
            }
        }
    }

    #[test]
    fn eisenstein_examples() {
        let r0 = ring(2, 2, 0, 4);
        let ctx = RingContext::standard(r0, &["X"]).unwrap();
        let f = mono(&ctx, &[(1, 0)], CoeffElement::one(r0))
            .sub(&RestrictedSeries::constant(ctx.clone(), CoeffElement::from_int(r0, 2)).unwrap())
            .unwrap();
        assert!(eisenstein_at_pi(&f, 3).unwrap().iter().all(|l| l.eisenstein));

        let r1 = ring(3, 2, 1, 4);
        let ctx = RingContext::standard(r1, &["X"]).unwrap();
        let x2 = mono(&ctx, &[(2, 0)], CoeffElement::one(r1));
        let pi = RestrictedSeries::constant(ctx.clone(), CoeffElement::uniformizer(r1).unwrap()).unwrap();
        let f = x2.sub(&pi).unwrap();
        assert!(eisenstein_at_pi(&f, 2).unwrap().iter().all(|l| l.eisenstein));
        let g = x2.sub(&RestrictedSeries::one(ctx.clone())).unwrap();
        assert!(eisenstein_at_pi(&g, 2).unwrap().iter().all(|l| !l.eisenstein));
        // X - p at depth 1: the constant term is p = π², not π
        let h = mono(&ctx, &[(1, 0)], CoeffElement::one(r1))
            .sub(&RestrictedSeries::constant(ctx.clone(), CoeffElement::from_int(r1, 3)).unwrap())
            .unwrap();
        assert!(!eisenstein_at_pi(&h, 0).unwrap()[0].eisenstein);
    }

    #[test]
    fn series_ring_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (p, d, k, m) in [(2u64, 3u64, 1u32, 4u32), (3, 2, 2, 3), (5, 5, 1, 4)] {
            let ctx = RingContext::standard(ring(p, d, k, m), &["X", "Y"]).unwrap();
            for _ in 0..100 {
                let f = random_series(&mut rng, &ctx, 3);
                let g = random_series(&mut rng, &ctx, 3);
                let h = random_series(&mut rng, &ctx, 2);
                assert_eq!(f.mul(&g.add(&h).unwrap()).unwrap(), f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap());
                assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
                assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
                let shifted = f.mul(&g).unwrap().root_shift(1).unwrap();
                assert_eq!(shifted, f.root_shift(1).unwrap().mul(&g.root_shift(1).unwrap()).unwrap());
            }
        }
    }
}
