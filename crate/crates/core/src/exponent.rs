//! Exponents in `Z[1/b]_{>=0}` and `Q_{>=0}`, and the multi-exponents that
//! index monomials of a series ring.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// How exponent denominators are restricted.
///
/// `Dyadic { base }` admits denominators `base^k` (the `Z[1/p]` lattice; the
/// base need not be prime). `Rational` admits every positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExpMode {
    Dyadic { base: u64 },
    Rational,
}

impl ExpMode {
    pub fn dyadic(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidParameter(alloc::format!(
                "exponent base must be >= 2, got {base}"
            )));
        }
        Ok(ExpMode::Dyadic { base })
    }

    pub fn base(&self) -> Option<u64> {
        match self {
            ExpMode::Dyadic { base } => Some(*base),
            ExpMode::Rational => None,
        }
    }
}

impl fmt::Display for ExpMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpMode::Dyadic { base } => write!(f, "dyadic({base})"),
            ExpMode::Rational => f.write_str("rational"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Dyadic { base: u64, num: BigUint, scale: u32 },
    Rational { num: BigUint, den: BigUint },
}

/// A non-negative exponent in normalized form.
///
/// Dyadic exponents `num / base^scale` satisfy: `scale == 0` or
/// `base ∤ num`, and zero is stored as `(0, 0)`. Rational exponents are
/// reduced with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(Repr);

fn big_pow(base: u64, k: u32) -> BigUint {
    Pow::pow(BigUint::from(base), k)
}

impl Exponent {
    /// Canonical representative of `num / base^scale`.
    pub fn dyadic(num: impl Into<BigUint>, scale: u32, base: u64) -> Result<Self> {
        ExpMode::dyadic(base)?;
        let mut num = num.into();
        let mut scale = scale;
        let b = BigUint::from(base);
        if num.is_zero() {
            scale = 0;
        }
        while scale > 0 {
            let (q, r) = num.div_rem(&b);
            if !r.is_zero() {
                break;
            }
            num = q;
            scale -= 1;
        }
        Ok(Exponent(Repr::Dyadic { base, num, scale }))
    }

    pub fn rational(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        let g = num.gcd(&den);
        if num.is_zero() {
            return Ok(Exponent(Repr::Rational { num, den: BigUint::one() }));
        }
        Ok(Exponent(Repr::Rational { num: &num / &g, den: &den / &g }))
    }

    pub fn zero(mode: ExpMode) -> Self {
        Self::integer(mode, 0u32)
    }

    pub fn integer(mode: ExpMode, n: impl Into<BigUint>) -> Self {
        match mode {
            ExpMode::Dyadic { base } => Exponent(Repr::Dyadic { base, num: n.into(), scale: 0 }),
            ExpMode::Rational => Exponent(Repr::Rational { num: n.into(), den: BigUint::one() }),
        }
    }

    /// Builds an exponent from a non-negative rational, checking that its
    /// denominator is admissible in `mode`.
    pub fn from_ratio(mode: ExpMode, value: &BigRational) -> Result<Self> {
        let num = value
            .numer()
            .to_biguint()
            .ok_or_else(|| Error::InvalidParameter("negative exponent".into()))?;
        let den = value.denom().to_biguint().expect("reduced denominator is positive");
        match mode {
            ExpMode::Rational => Self::rational(num, den),
            ExpMode::Dyadic { base } => {
                let scale = power_of(&den, base).ok_or_else(|| {
                    Error::ModeMismatch(alloc::format!("denominator {den} is not a power of {base}"))
                })?;
                Self::dyadic(num, scale, base)
            }
        }
    }

    pub fn mode(&self) -> ExpMode {
        match &self.0 {
            Repr::Dyadic { base, .. } => ExpMode::Dyadic { base: *base },
            Repr::Rational { .. } => ExpMode::Rational,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        match &self.0 {
            Repr::Dyadic { num, .. } | Repr::Rational { num, .. } => num,
        }
    }

    /// `k` in `num / base^k`; `None` in rational mode.
    pub fn scale(&self) -> Option<u32> {
        match &self.0 {
            Repr::Dyadic { scale, .. } => Some(*scale),
            Repr::Rational { .. } => None,
        }
    }

    pub fn denominator(&self) -> BigUint {
        match &self.0 {
            Repr::Dyadic { base, scale, .. } => big_pow(*base, *scale),
            Repr::Rational { den, .. } => den.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator().is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.denominator().is_one()
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numerator().clone()), BigInt::from(self.denominator()))
    }

    fn check_mode(&self, other: &Self) -> Result<()> {
        if self.mode() != other.mode() {
            return Err(Error::ModeMismatch(alloc::format!("{} vs {}", self.mode(), other.mode())));
        }
        Ok(())
    }

    /// Numerators of `self` and `other` brought to a common denominator.
    fn aligned(&self, other: &Self) -> (BigUint, BigUint, Aligned) {
        match (&self.0, &other.0) {
            (
                Repr::Dyadic { base, num: a, scale: ka },
                Repr::Dyadic { num: b, scale: kb, .. },
            ) => {
                let k = (*ka).max(*kb);
                (
                    a * big_pow(*base, k - ka),
                    b * big_pow(*base, k - kb),
                    Aligned::Scale(*base, k),
                )
            }
            (Repr::Rational { num: a, den: da }, Repr::Rational { num: b, den: db }) => {
                let l = da.lcm(db);
                (a * (&l / da), b * (&l / db), Aligned::Den(l))
            }
            _ => unreachable!("mode checked by caller"),
        }
    }

    fn rebuild(num: BigUint, at: Aligned) -> Self {
        match at {
            Aligned::Scale(base, k) => Self::dyadic(num, k, base).expect("base already validated"),
            Aligned::Den(den) => Self::rational(num, den).expect("nonzero denominator"),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_mode(other)?;
        let (a, b, at) = self.aligned(other);
        Ok(Self::rebuild(a + b, at))
    }

    /// `self - other` when it stays non-negative.
    pub fn checked_sub(&self, other: &Self) -> Result<Option<Self>> {
        self.check_mode(other)?;
        let (a, b, at) = self.aligned(other);
        if a < b {
            return Ok(None);
        }
        Ok(Some(Self::rebuild(a - b, at)))
    }

    pub fn mul_int(&self, n: u64) -> Self {
        match &self.0 {
            Repr::Dyadic { base, num, scale } => {
                Self::dyadic(num * BigUint::from(n), *scale, *base).expect("valid base")
            }
            Repr::Rational { num, den } => {
                Self::rational(num * BigUint::from(n), den.clone()).expect("nonzero denominator")
            }
        }
    }

    /// Divides by `base^i`: the substitution `X -> X^{1/base^i}` on one exponent.
    pub fn scale_root(&self, i: u32) -> Result<Self> {
        match &self.0 {
            Repr::Dyadic { base, num, scale } => {
                if num.is_zero() {
                    return Ok(self.clone());
                }
                Self::dyadic(num.clone(), scale + i, *base)
            }
            Repr::Rational { .. } => Err(Error::ModeMismatch(
                "root substitution is only defined levelwise (dyadic mode)".into(),
            )),
        }
    }

    /// Value comparison within one mode.
    pub fn cmp_value(&self, other: &Self) -> Result<Ordering> {
        self.check_mode(other)?;
        let (a, b, _) = self.aligned(other);
        Ok(a.cmp(&b))
    }

    /// Numerator as `u64`, for use as a power.
    pub fn numerator_u64(&self) -> Option<u64> {
        self.numerator().to_u64()
    }
}

enum Aligned {
    Scale(u64, u32),
    Den(BigUint),
}

/// `Some(k)` when `n == base^k`.
pub(crate) fn power_of(n: &BigUint, base: u64) -> Option<u32> {
    let b = BigUint::from(base);
    let mut n = n.clone();
    let mut k = 0u32;
    while !n.is_one() {
        let (q, r) = n.div_rem(&b);
        if !r.is_zero() || n.is_zero() {
            return None;
        }
        n = q;
        k += 1;
    }
    Some(k)
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exponents of different modes are ordered by mode first, so that maps keyed
/// by exponents stay well defined; within a mode this is the value order.
impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.mode().cmp(&other.mode()) {
            Ordering::Equal => self.cmp_value(other).expect("same mode"),
            o => o,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Dyadic { base, num, scale } => write!(f, "{num}/{base}^{scale}"),
            Repr::Rational { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

/// Parses `num/base^k` (dyadic) or `a/b` (rational).
impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(alloc::format!("malformed exponent {s:?}"));
        let (num, rest) = s.split_once('/').ok_or_else(bad)?;
        let num = BigUint::from_str(num.trim()).map_err(|_| bad())?;
        if let Some((base, k)) = rest.split_once('^') {
            let base = u64::from_str(base.trim()).map_err(|_| bad())?;
            let k = u32::from_str(k.trim()).map_err(|_| bad())?;
            Self::dyadic(num, k, base)
        } else {
            let den = BigUint::from_str(rest.trim()).map_err(|_| bad())?;
            Self::rational(num, den)
        }
    }
}

/// One exponent per variable of the ambient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiExponent {
    mode: ExpMode,
    entries: Vec<Exponent>,
}

impl MultiExponent {
    pub fn new(mode: ExpMode, entries: Vec<Exponent>) -> Result<Self> {
        if let Some(e) = entries.iter().find(|e| e.mode() != mode) {
            return Err(Error::ModeMismatch(alloc::format!("entry in {} inside {mode}", e.mode())));
        }
        Ok(MultiExponent { mode, entries })
    }

    pub fn zero(mode: ExpMode, nvars: usize) -> Self {
        MultiExponent { mode, entries: (0..nvars).map(|_| Exponent::zero(mode)).collect() }
    }

    /// The exponent of the single variable `var`, raised to `e`.
    pub fn unit(mode: ExpMode, nvars: usize, var: usize, e: Exponent) -> Result<Self> {
        let mut m = Self::zero(mode, nvars);
        if e.mode() != mode {
            return Err(Error::ModeMismatch(alloc::format!("{} vs {mode}", e.mode())));
        }
        m.entries[var] = e;
        Ok(m)
    }

    pub fn mode(&self) -> ExpMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Exponent] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Exponent::is_zero)
    }

    pub fn degree(&self) -> Exponent {
        self.entries
            .iter()
            .fold(Exponent::zero(self.mode), |acc, e| acc.checked_add(e).expect("same mode"))
    }

    /// Largest scale among the entries (0 in rational mode).
    pub fn scale(&self) -> u32 {
        self.entries.iter().filter_map(Exponent::scale).max().unwrap_or(0)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch(alloc::format!("{} vs {}", self.mode, other.mode)));
        }
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch { expected: self.len(), got: other.len() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiExponent { mode: self.mode, entries })
    }

    /// Entrywise `self - other`, or `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &Self) -> Result<Option<Self>> {
        self.check_shape(other)?;
        let mut entries = Vec::with_capacity(self.len());
        for (a, b) in self.entries.iter().zip(&other.entries) {
            match a.checked_sub(b)? {
                Some(e) => entries.push(e),
                None => return Ok(None),
            }
        }
        Ok(Some(MultiExponent { mode: self.mode, entries }))
    }

    /// Monomial divisibility: `other = self + (something >= 0)`.
    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.checked_sub(self)?.is_some())
    }

    pub fn mul_int(&self, n: u64) -> Self {
        MultiExponent { mode: self.mode, entries: self.entries.iter().map(|e| e.mul_int(n)).collect() }
    }

    pub fn scale_root(&self, i: u32) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.scale_root(i)).collect::<Result<Vec<_>>>()?;
        Ok(MultiExponent { mode: self.mode, entries })
    }

    /// Appends `extra` zero entries (new variables).
    pub fn extended(&self, extra: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.extend((0..extra).map(|_| Exponent::zero(self.mode)));
        MultiExponent { mode: self.mode, entries }
    }

    pub fn with_entry(&self, var: usize, e: Exponent) -> Result<Self> {
        if e.mode() != self.mode {
            return Err(Error::ModeMismatch(alloc::format!("{} vs {}", e.mode(), self.mode)));
        }
        let mut out = self.clone();
        out.entries[var] = e;
        Ok(out)
    }
}

/// Degree first, then lexicographic on entry values with the first variable
/// most significant.
pub fn mexp_cmp(a: &MultiExponent, b: &MultiExponent) -> Result<Ordering> {
    a.check_shape(b)?;
    let by_degree = a.degree().cmp_value(&b.degree())?;
    if by_degree != Ordering::Equal {
        return Ok(by_degree);
    }
    for (x, y) in a.entries.iter().zip(&b.entries) {
        let o = x.cmp_value(y)?;
        if o != Ordering::Equal {
            return Ok(o);
        }
    }
    Ok(Ordering::Equal)
}

impl PartialOrd for MultiExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mode
            .cmp(&other.mode)
            .then(self.len().cmp(&other.len()))
            .then_with(|| mexp_cmp(self, other).expect("shape checked"))
    }
}

impl fmt::Display for MultiExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Debug-friendly rendering of a rational as `a/b` (or `a` when integral).
pub(crate) fn ratio_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}
