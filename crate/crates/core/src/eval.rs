//! Evaluation homomorphisms `X^{1/d^i} ↦ b_i` along compatible root towers.

use alloc::vec::Vec;

use crate::coeff::{CoeffElement, RingDescriptor};
use crate::error::{Error, Result};
use crate::exponent::ExpMode;
use crate::series::RestrictedSeries;

/// A commutative ring receiving coefficients through a structure map.
pub trait Algebra: Clone + PartialEq + Sized {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    /// Image of a coefficient under the structure map into this ring.
    fn from_coeff(&self, c: &CoeffElement) -> Result<Self>;
    fn is_zero_elem(&self) -> bool;

    fn pow_u64(&self, mut e: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// Canonical map of `c` into `target`: the tower embedding followed by
/// truncation to the target window. Widening the window is refused since it
/// would not be a ring map.
pub fn coerce(c: &CoeffElement, target: &RingDescriptor) -> Result<CoeffElement> {
    let src = c.ring();
    if src == target {
        return Ok(c.clone());
    }
    if src.kind() != target.kind() || src.p() != target.p() || !src.kind().is_eka() {
        return Err(Error::RingMismatch(alloc::format!("no structure map {src} -> {target}")));
    }
    if src.d() != target.d() || src.laurent() != target.laurent() {
        return Err(Error::RingMismatch(alloc::format!("no structure map {src} -> {target}")));
    }
    let up = c.promote(target.depth())?;
    if up.ring() == target {
        return Ok(up);
    }
    if target.precision() > up.ring().precision() {
        return Err(Error::InvalidParameter(alloc::format!(
            "target window {} exceeds the source window {}",
            target.precision(),
            up.ring().precision()
        )));
    }
    if up.is_zero() {
        return Ok(CoeffElement::zero(*target));
    }
    CoeffElement::from_digits(*target, up.offset(), &up.digits())
}

impl Algebra for CoeffElement {
    fn zero_like(&self) -> Self {
        CoeffElement::zero(*self.ring())
    }
    fn one_like(&self) -> Self {
        CoeffElement::one(*self.ring())
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn from_coeff(&self, c: &CoeffElement) -> Result<Self> {
        coerce(c, self.ring())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Algebra for RestrictedSeries {
    fn zero_like(&self) -> Self {
        RestrictedSeries::zero(self.ctx().clone())
    }
    fn one_like(&self) -> Self {
        RestrictedSeries::one(self.ctx().clone())
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn from_coeff(&self, c: &CoeffElement) -> Result<Self> {
        let c = coerce(c, self.ctx().coeff())?;
        RestrictedSeries::constant(self.ctx().clone(), c)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

/// `b_0, b_1, …, b_L` with `b_{i+1}^base = b_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootTower<T> {
    base: u64,
    entries: Vec<T>,
}

impl<T: Algebra> RootTower<T> {
    pub fn new(base: u64, entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("root tower needs at least b_0".into()));
        }
        ExpMode::dyadic(base)?;
        for i in 0..entries.len() - 1 {
            if entries[i + 1].pow_u64(base)? != entries[i] {
                return Err(Error::TowerInvalid { stage: i });
            }
        }
        Ok(RootTower { base, entries })
    }

    /// The tower `b, b^{base^{L-1}}, …` read downwards from its top entry.
    pub fn from_top(base: u64, top: T, depth: u32) -> Result<Self> {
        let mut entries = alloc::vec![top];
        for _ in 0..depth {
            let next = entries.last().expect("nonempty").pow_u64(base)?;
            entries.push(next);
        }
        entries.reverse();
        Self::new(base, entries)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Index of the deepest root available.
    pub fn depth(&self) -> u32 {
        (self.entries.len() - 1) as u32
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn map<U: Algebra>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<RootTower<U>> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        RootTower::new(self.base, entries)
    }
}

/// Substitutes `X_j^{m/base^k} ↦ b_{j,k}^m` and sums, mapping coefficients
/// through [`Algebra::from_coeff`].
pub fn evaluate<T: Algebra>(f: &RestrictedSeries, towers: &[RootTower<T>]) -> Result<T> {
    let ctx = f.ctx();
    if towers.len() != ctx.nvars() {
        return Err(Error::ShapeMismatch { expected: ctx.nvars(), got: towers.len() });
    }
    let Some(base) = ctx.mode().base() else {
        return Err(Error::ModeMismatch("evaluation along root towers needs dyadic exponents".into()));
    };
    let Some(first) = towers.first() else {
        // no variables: the structure map on the constant term
        return Err(Error::InvalidParameter("evaluation needs at least one variable".into()));
    };
    for t in towers {
        if t.base() != base {
            return Err(Error::ModeMismatch(alloc::format!("tower base {} vs exponent base {base}", t.base())));
        }
        if t.depth() < f.level() {
            return Err(Error::TowerTooShallow { needed: f.level(), available: t.depth() });
        }
    }
    let mut acc = first.entries()[0].zero_like();
    for (e, c) in f.terms() {
        let mut term = acc.from_coeff(c)?;
        for (x, tower) in e.entries().iter().zip(towers) {
            if x.is_zero() {
                continue;
            }
            let k = x.scale().unwrap_or(0);
            let m = x.numerator_u64().ok_or_else(|| Error::Resource("exponent numerator too large".into()))?;
            term = term.try_mul(&tower.entries()[k as usize].pow_u64(m)?)?;
        }
        acc = acc.try_add(&term)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{Exponent, MultiExponent};
    use crate::series::RingContext;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x_pow(ctx: &RingContext, n: u64, k: u32) -> RestrictedSeries {
        RestrictedSeries::var_pow(ctx.clone(), 0, Exponent::dyadic(n, k, 2).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let src = RingDescriptor::char0(3, 2, 0, 4).unwrap();
        let tgt = RingDescriptor::char0(3, 2, 2, 16).unwrap();
        let ctx = RingContext::new(src, vec!["X".into()], ExpMode::Dyadic { base: 2 }).unwrap();
        let pi = CoeffElement::uniformizer(tgt).unwrap();
        let tower = RootTower::from_top(2, pi.clone(), 2).unwrap();
        assert_eq!(tower.entries()[0], CoeffElement::from_int(tgt, 3));
        assert_eq!(evaluate(&x_pow(&ctx, 1, 0), std::slice::from_ref(&tower)).unwrap(), CoeffElement::from_int(tgt, 3));
        let f = x_pow(&ctx, 1, 1).add(&RestrictedSeries::one(ctx.clone())).unwrap();
        let v = evaluate(&f, std::slice::from_ref(&tower)).unwrap();
        assert_eq!(v, tower.entries()[1].add(&CoeffElement::one(tgt)).unwrap());
        assert_eq!(v, CoeffElement::pi_pow(tgt, 2).unwrap().add(&CoeffElement::one(tgt)).unwrap());
    }

    #[test]
    fn tower_errors() {
        let r = RingDescriptor::char0(3, 2, 1, 4).unwrap();
        let pi = CoeffElement::uniformizer(r).unwrap();
        let three = CoeffElement::from_int(r, 3);
        assert!(RootTower::new(2, vec![three.clone(), pi.clone()]).is_ok());
        assert_eq!(
            RootTower::new(2, vec![three.clone(), pi.clone(), pi.clone()]),
            Err(Error::TowerInvalid { stage: 1 })
        );
        let ctx = RingContext::new(r, vec!["X".into()], ExpMode::Dyadic { base: 2 }).unwrap();
        let tower = RootTower::new(2, vec![three, pi]).unwrap();
        assert_eq!(
            evaluate(&x_pow(&ctx, 1, 2), &[tower]),
            Err(Error::TowerTooShallow { needed: 2, available: 1 })
        );
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let src = RingDescriptor::char0(3, 2, 1, 6).unwrap();
        let tgt = RingDescriptor::char0(3, 2, 3, 24).unwrap();
        let ctx = RingContext::new(src, vec!["X".into(), "Y".into()], ExpMode::Dyadic { base: 2 }).unwrap();
        let rand_series = |rng: &mut ChaCha8Rng| {
            let terms: Vec<_> = (0..3)
                .map(|_| {
                    let e = MultiExponent::new(
                        ctx.mode(),
                        (0..2).map(|_| Exponent::dyadic(rng.random_range(0..5u64), rng.random_range(0..3), 2).unwrap()).collect(),
                    )
                    .unwrap();
                    let digits: Vec<u32> = (0..6).map(|_| rng.random_range(0..3)).collect();
                    (e, CoeffElement::from_digits(src, 0, &digits).unwrap())
                })
                .collect();
            RestrictedSeries::from_terms(ctx.clone(), terms).unwrap().with_level(2)
        };
        for _ in 0..50 {
            let towers: Vec<_> = (0..2)
                .map(|_| {
                    let digits: Vec<u32> = (0..24).map(|_| rng.random_range(0..3)).collect();
                    let top = CoeffElement::from_digits(tgt, rng.random_range(0..3), &digits).unwrap();
                    RootTower::from_top(2, top, 2).unwrap()
                })
                .collect();
            let f = rand_series(&mut rng);
            let g = rand_series(&mut rng);
            let ef = evaluate(&f, &towers).unwrap();
            let eg = evaluate(&g, &towers).unwrap();
            assert_eq!(evaluate(&f.add(&g).unwrap(), &towers).unwrap(), ef.add(&eg).unwrap());
            assert_eq!(evaluate(&f.mul(&g).unwrap(), &towers).unwrap(), ef.mul(&eg).unwrap());
        }
    }
}
