//! Finite-precision coefficient rings.
//!
//! * `Char0Eka`: `Z_p[π]` with `π = p^{1/d^K}`, stored as base-`p` digit
//!   vectors in powers of `π`. Carries obey `π^{d^K} = p`, so a carry `q` out
//!   of position `t` lands at position `t + d^K`. Integral rings work modulo
//!   `π^M` (absolute precision, an honest finite ring); the Laurent variant
//!   `R[1/π]` keeps `M` significant digits above a signed offset.
//! * `CharpEka`: the residue avatar `F_p[s]/(s^{d^K})` with `π ↦ s`.
//! * `ExactFp`, `ExactQ`: exact prime field and the rationals.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest `d^K` accepted by [`RingDescriptor::new`].
pub const MAX_RAMIFICATION: u64 = 1 << 12;
/// Largest precision `M` accepted by [`RingDescriptor::new`].
pub const MAX_PRECISION: u32 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    Char0Eka,
    CharpEka,
    ExactFp,
    ExactQ,
}

impl RingKind {
    pub fn name(&self) -> &'static str {
        match self {
            RingKind::Char0Eka => "char0-eka",
            RingKind::CharpEka => "charp-eka",
            RingKind::ExactFp => "exact-field-Fp",
            RingKind::ExactQ => "exact-field-Q",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "char0-eka" => RingKind::Char0Eka,
            "charp-eka" => RingKind::CharpEka,
            "exact-field-Fp" => RingKind::ExactFp,
            "exact-field-Q" => RingKind::ExactQ,
            _ => return Err(Error::Parse(alloc::format!("unknown ring kind {s:?}"))),
        })
    }

    pub fn is_eka(&self) -> bool {
        matches!(self, RingKind::Char0Eka | RingKind::CharpEka)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Parameters of one coefficient ring.
///
/// Unused fields are normalized so that equal rings compare equal: the
/// residue ring stores `precision = d^K`, exact fields store `d = 1`,
/// `depth = 0`, `precision = 1`, and `Q` stores `p = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    kind: RingKind,
    p: u64,
    d: u64,
    depth: u32,
    precision: u32,
    laurent: bool,
}

impl RingDescriptor {
    pub fn new(kind: RingKind, p: u64, d: u64, depth: u32, precision: u32, laurent: bool) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidParameter(m));
        if kind != RingKind::ExactQ && !is_prime(p) {
            return invalid(alloc::format!("p = {p} is not prime"));
        }
        match kind {
            RingKind::Char0Eka | RingKind::CharpEka => {
                if d < 1 {
                    return invalid("root index d must be >= 1".into());
                }
                let ram = checked_pow(d, depth).filter(|r| *r <= MAX_RAMIFICATION);
                let Some(ram) = ram else {
                    return invalid(alloc::format!("d^K = {d}^{depth} exceeds {MAX_RAMIFICATION}"));
                };
                if kind == RingKind::CharpEka {
                    if laurent {
                        return invalid("laurent coefficients are not available in characteristic p".into());
                    }
                    return Ok(RingDescriptor { kind, p, d, depth, precision: ram as u32, laurent });
                }
                if !(1..=MAX_PRECISION).contains(&precision) {
                    return invalid(alloc::format!("precision M = {precision} outside 1..={MAX_PRECISION}"));
                }
                Ok(RingDescriptor { kind, p, d, depth, precision, laurent })
            }
            RingKind::ExactFp | RingKind::ExactQ => {
                if laurent {
                    return invalid("exact fields take no laurent flag".into());
                }
                let p = if kind == RingKind::ExactQ { 0 } else { p };
                Ok(RingDescriptor { kind, p, d: 1, depth: 0, precision: 1, laurent: false })
            }
        }
    }

    pub fn char0(p: u64, d: u64, depth: u32, precision: u32) -> Result<Self> {
        Self::new(RingKind::Char0Eka, p, d, depth, precision, false)
    }

    pub fn charp(p: u64, d: u64, depth: u32) -> Result<Self> {
        Self::new(RingKind::CharpEka, p, d, depth, 0, false)
    }

    pub fn fp(p: u64) -> Result<Self> {
        Self::new(RingKind::ExactFp, p, 1, 0, 1, false)
    }

    pub fn rationals() -> Self {
        Self::new(RingKind::ExactQ, 0, 1, 0, 1, false).expect("always valid")
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn d(&self) -> u64 {
        self.d
    }
    pub fn depth(&self) -> u32 {
        self.depth
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn laurent(&self) -> bool {
        self.laurent
    }

    /// `d^K`: the number of `π` steps making up one `p`.
    pub fn ramification(&self) -> u64 {
        checked_pow(self.d, self.depth).expect("validated at construction")
    }

    /// The same ring with negative `π`-powers admitted.
    pub fn with_laurent(&self) -> Result<Self> {
        Self::new(self.kind, self.p, self.d, self.depth, self.precision, true)
    }

    pub fn integral(&self) -> Self {
        RingDescriptor { laurent: false, ..*self }
    }

    /// The residue ring `F_p[s]/(s^{d^K})` at the same depth.
    pub fn residue(&self) -> Result<Self> {
        match self.kind {
            RingKind::Char0Eka => Self::charp(self.p, self.d, self.depth),
            _ => Err(Error::InvalidParameter(alloc::format!("{} has no residue tower", self.kind.name()))),
        }
    }

    /// Depth `K'` ring with the precision window scaled so that valuation
    /// thresholds are unchanged.
    pub fn deepened(&self, new_depth: u32) -> Result<Self> {
        if !self.kind.is_eka() {
            return Err(Error::InvalidParameter("only eka rings form towers".into()));
        }
        if new_depth < self.depth {
            return Err(Error::InvalidParameter(alloc::format!(
                "cannot promote from depth {} to {new_depth}",
                self.depth
            )));
        }
        let r = checked_pow(self.d, new_depth - self.depth)
            .ok_or_else(|| Error::InvalidParameter("depth too large".into()))?;
        let precision = (self.precision as u64)
            .checked_mul(r)
            .filter(|m| *m <= MAX_PRECISION as u64)
            .ok_or_else(|| Error::InvalidParameter("precision window too large".into()))?;
        Self::new(self.kind, self.p, self.d, new_depth, precision as u32, self.laurent)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(Error::RingMismatch(alloc::format!("{self} vs {other}")));
        }
        Ok(())
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Char0Eka => write!(
                f,
                "Z_{}[{}^(1/{}^{})] mod pi^{}{}",
                self.p,
                self.p,
                self.d,
                self.depth,
                self.precision,
                if self.laurent { " (laurent)" } else { "" }
            ),
            RingKind::CharpEka => write!(f, "F_{}[s]/(s^{})", self.p, self.precision),
            RingKind::ExactFp => write!(f, "F_{}", self.p),
            RingKind::ExactQ => f.write_str("Q"),
        }
    }
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Valuation in units where `val(p) = 1`; `Infinite` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Ratio<i64>),
    Infinite,
}

impl Valuation {
    pub fn finite(num: i64, den: i64) -> Self {
        Valuation::Finite(Ratio::new(num, den))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn checked_add(&self, other: &Self) -> Self {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Valuation::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// `π^offset · Σ digits[t] π^t`. Integral rings hold `M - offset`
    /// digits, Laurent rings exactly `M`; zero is `offset 0`, no digits.
    Adic { offset: i64, digits: Vec<u32> },
    /// Coefficients of `1, s, …, s^{d^K - 1}`.
    Nil(Vec<u32>),
    Fp(u32),
    Q(BigRational),
}

/// One element of a coefficient ring, always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffElement {
    ring: RingDescriptor,
    repr: Repr,
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Carry-normalizes `arr` (positions `lo..lo+arr.len()`) with `π^stride = p`
/// and returns the canonical `(offset, digits)` pair trimmed of leading zeros;
/// `None` if everything vanished in the window.
fn carry(arr: &mut [i64], p: u64, stride: usize) -> Option<usize> {
    let p = p as i64;
    let n = arr.len();
    for t in 0..n {
        let v = arr[t];
        let r = v.rem_euclid(p);
        let q = (v - r) / p;
        arr[t] = r;
        if q != 0 && t + stride < n {
            arr[t + stride] += q;
        }
    }
    arr.iter().position(|&x| x != 0)
}

impl CoeffElement {
    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn zero(ring: RingDescriptor) -> Self {
        let repr = match ring.kind {
            RingKind::Char0Eka => Repr::Adic { offset: 0, digits: Vec::new() },
            RingKind::CharpEka => Repr::Nil(vec![0; ring.precision as usize]),
            RingKind::ExactFp => Repr::Fp(0),
            RingKind::ExactQ => Repr::Q(BigRational::zero()),
        };
        CoeffElement { ring, repr }
    }

    pub fn one(ring: RingDescriptor) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: RingDescriptor, n: i64) -> Self {
        match ring.kind {
            RingKind::Char0Eka => {
                if n == 0 {
                    return Self::zero(ring);
                }
                let p = ring.p as i64;
                let mut unit = n;
                let mut v = 0i64;
                while unit % p == 0 {
                    unit /= p;
                    v += 1;
                }
                let offset = v * ring.ramification() as i64;
                Self::from_window(ring, offset, vec![unit])
            }
            RingKind::CharpEka => {
                let mut c = vec![0u32; ring.precision as usize];
                c[0] = n.rem_euclid(ring.p as i64) as u32;
                CoeffElement { ring, repr: Repr::Nil(c) }
            }
            RingKind::ExactFp => CoeffElement { ring, repr: Repr::Fp(n.rem_euclid(ring.p as i64) as u32) },
            RingKind::ExactQ => CoeffElement { ring, repr: Repr::Q(BigRational::from_integer(n.into())) },
        }
    }

    pub fn from_rational(value: BigRational) -> Self {
        CoeffElement { ring: RingDescriptor::rationals(), repr: Repr::Q(value) }
    }

    /// `π^k` (or `s^k` in the residue ring).
    pub fn pi_pow(ring: RingDescriptor, k: i64) -> Result<Self> {
        match ring.kind {
            RingKind::Char0Eka => {
                if k < 0 && !ring.laurent {
                    return Err(Error::NonUnit);
                }
                Ok(Self::from_window(ring, k, vec![1]))
            }
            RingKind::CharpEka => {
                if k < 0 {
                    return Err(Error::NonUnit);
                }
                Self::from_digits(ring, k, &[1])
            }
            _ => Err(Error::InvalidParameter(alloc::format!("{} has no uniformizer", ring.kind.name()))),
        }
    }

    pub fn uniformizer(ring: RingDescriptor) -> Result<Self> {
        Self::pi_pow(ring, 1)
    }

    /// Canonical element `π^offset · Σ digits[t] π^t` (digits may be any
    /// values; they are reduced). For exact fields, `digits[0]` is the value.
    pub fn from_digits(ring: RingDescriptor, offset: i64, digits: &[u32]) -> Result<Self> {
        match ring.kind {
            RingKind::Char0Eka => {
                if offset < 0 && !ring.laurent {
                    return Err(Error::InvalidParameter("negative offset in an integral ring".into()));
                }
                Ok(Self::from_window(ring, offset, digits.iter().map(|&x| x as i64).collect()))
            }
            RingKind::CharpEka => {
                if offset < 0 {
                    return Err(Error::InvalidParameter("negative offset in the residue ring".into()));
                }
                let n = ring.precision as usize;
                let mut c = vec![0u32; n];
                for (t, &x) in digits.iter().enumerate() {
                    let pos = offset as usize + t;
                    if pos < n {
                        c[pos] = (x as u64 % ring.p) as u32;
                    }
                }
                Ok(CoeffElement { ring, repr: Repr::Nil(c) })
            }
            RingKind::ExactFp => Ok(Self::from_int(ring, digits.first().copied().unwrap_or(0) as i64)),
            RingKind::ExactQ => Ok(Self::from_int(ring, digits.first().copied().unwrap_or(0) as i64)),
        }
    }

    /// Builds a char-0 element from arbitrary integer digits placed at
    /// positions `offset..`.
    fn from_window(ring: RingDescriptor, offset: i64, vals: Vec<i64>) -> Self {
        let m = ring.precision as i64;
        let stride = ring.ramification() as usize;
        if ring.laurent {
            // Normalize with headroom past the window, then keep M digits
            // from the leading one.
            let mut arr = vals;
            arr.resize(arr.len().max(1) + 2 * stride + m as usize, 0);
            let Some(lead) = carry(&mut arr, ring.p, stride) else {
                return Self::zero(ring);
            };
            let mut digits: Vec<u32> = arr[lead..].iter().map(|&x| x as u32).collect();
            digits.resize(m as usize, 0);
            return CoeffElement { ring, repr: Repr::Adic { offset: offset + lead as i64, digits } };
        }
        if offset >= m {
            return Self::zero(ring);
        }
        let width = (m - offset) as usize;
        let mut arr = vals;
        arr.resize(width.max(arr.len()), 0);
        arr.truncate(width);
        let Some(lead) = carry(&mut arr, ring.p, stride) else {
            return Self::zero(ring);
        };
        let digits = arr[lead..].iter().map(|&x| x as u32).collect();
        CoeffElement { ring, repr: Repr::Adic { offset: offset + lead as i64, digits } }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Adic { digits, .. } => digits.is_empty(),
            Repr::Nil(c) => c.iter().all(|&x| x == 0),
            Repr::Fp(x) => *x == 0,
            Repr::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.ring)
    }

    /// Lowest `π` (or `s`) power present; 0 for zero and for exact fields.
    pub fn offset(&self) -> i64 {
        match &self.repr {
            Repr::Adic { offset, .. } => *offset,
            Repr::Nil(c) => c.iter().position(|&x| x != 0).unwrap_or(0) as i64,
            _ => 0,
        }
    }

    /// Digits from the offset upwards. Exact fields yield their value as a
    /// single digit (`Q` yields nothing; see [`Self::as_rational`]).
    pub fn digits(&self) -> Vec<u32> {
        match &self.repr {
            Repr::Adic { digits, .. } => digits.clone(),
            Repr::Nil(c) => match c.iter().position(|&x| x != 0) {
                Some(lo) => c[lo..].to_vec(),
                None => Vec::new(),
            },
            Repr::Fp(x) => {
                if *x == 0 {
                    Vec::new()
                } else {
                    vec![*x]
                }
            }
            Repr::Q(_) => Vec::new(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Q(q) => Some(q),
            _ => None,
        }
    }

    /// Coefficient of `π^t` (absolute position).
    pub fn digit_at(&self, t: i64) -> u32 {
        match &self.repr {
            Repr::Adic { offset, digits } => {
                let i = t - offset;
                if i < 0 {
                    0
                } else {
                    digits.get(i as usize).copied().unwrap_or(0)
                }
            }
            Repr::Nil(c) => {
                if t < 0 {
                    0
                } else {
                    c.get(t as usize).copied().unwrap_or(0)
                }
            }
            Repr::Fp(x) => {
                if t == 0 {
                    *x
                } else {
                    0
                }
            }
            Repr::Q(_) => 0,
        }
    }

    pub fn val(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        match &self.repr {
            Repr::Adic { .. } | Repr::Nil(_) => {
                Valuation::finite(self.offset(), self.ring.ramification() as i64)
            }
            _ => Valuation::finite(0, 1),
        }
    }

    pub fn is_unit(&self) -> bool {
        match &self.repr {
            Repr::Adic { offset, digits } => !digits.is_empty() && (*offset == 0 || self.ring.laurent),
            Repr::Nil(c) => c[0] != 0,
            Repr::Fp(x) => *x != 0,
            Repr::Q(q) => !q.is_zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_flagged(other).map(|(v, _)| v)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_flagged(other).map(|(v, _)| v)
    }

    /// Sum plus an underflow flag: set when two nonzero summands produce
    /// something indistinguishable from zero at the working precision.
    pub fn add_flagged(&self, other: &Self) -> Result<(Self, bool)> {
        self.ring.check_same(&other.ring)?;
        let ring = self.ring;
        let out = match (&self.repr, &other.repr) {
            (Repr::Adic { offset: a_off, digits: a }, Repr::Adic { offset: b_off, digits: b }) => {
                if a.is_empty() {
                    return Ok((other.clone(), false));
                }
                if b.is_empty() {
                    return Ok((self.clone(), false));
                }
                let lo = (*a_off).min(*b_off);
                let width = if ring.laurent { ring.precision as usize } else { (ring.precision as i64 - lo) as usize };
                let mut arr = vec![0i64; width];
                for (off, ds) in [(*a_off, a), (*b_off, b)] {
                    let shift = (off - lo) as usize;
                    for (t, &x) in ds.iter().enumerate() {
                        if shift + t < width {
                            arr[shift + t] += x as i64;
                        }
                    }
                }
                Self::from_adic_window(ring, lo, arr)
            }
            (Repr::Nil(a), Repr::Nil(b)) => {
                let p = ring.p as u32;
                Repr::Nil(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            (Repr::Fp(a), Repr::Fp(b)) => Repr::Fp(((*a as u64 + *b as u64) % ring.p) as u32),
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a + b),
            _ => unreachable!("repr follows ring kind"),
        };
        let out = CoeffElement { ring, repr: out };
        let underflow = out.is_zero() && !self.is_zero() && !other.is_zero() && *self != other.neg();
        Ok((out, underflow))
    }

    /// Canonical repr of a window that starts at absolute position `lo`.
    fn from_adic_window(ring: RingDescriptor, lo: i64, mut arr: Vec<i64>) -> Repr {
        let stride = ring.ramification() as usize;
        match carry(&mut arr, ring.p, stride) {
            None => Repr::Adic { offset: 0, digits: Vec::new() },
            Some(lead) => {
                let mut digits: Vec<u32> = arr[lead..].iter().map(|&x| x as u32).collect();
                if ring.laurent {
                    digits.resize(ring.precision as usize, 0);
                }
                Repr::Adic { offset: lo + lead as i64, digits }
            }
        }
    }

    pub fn neg(&self) -> Self {
        let ring = self.ring;
        let repr = match &self.repr {
            Repr::Adic { offset, digits } => {
                if digits.is_empty() {
                    return self.clone();
                }
                let arr: Vec<i64> = digits.iter().map(|&x| -(x as i64)).collect();
                Self::from_adic_window(ring, *offset, arr)
            }
            Repr::Nil(c) => {
                let p = ring.p as u32;
                Repr::Nil(c.iter().map(|&x| (p - x) % p).collect())
            }
            Repr::Fp(x) => Repr::Fp(((ring.p - *x as u64) % ring.p) as u32),
            Repr::Q(q) => Repr::Q(-q),
        };
        CoeffElement { ring, repr }
    }

    /// Product plus an underflow flag (two nonzero factors whose product is
    /// zero at the working precision).
    pub fn mul_flagged(&self, other: &Self) -> Result<(Self, bool)> {
        self.ring.check_same(&other.ring)?;
        let ring = self.ring;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Adic { offset: a_off, digits: a }, Repr::Adic { offset: b_off, digits: b }) => {
                if a.is_empty() || b.is_empty() {
                    return Ok((Self::zero(ring), false));
                }
                let lo = a_off + b_off;
                let width = if ring.laurent {
                    ring.precision as i64
                } else {
                    ring.precision as i64 - lo
                };
                if width <= 0 {
                    return Ok((Self::zero(ring), true));
                }
                let width = width as usize;
                let mut arr = vec![0i64; width];
                for (i, &x) in a.iter().enumerate().take(width) {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate().take(width - i) {
                        arr[i + j] += x as i64 * y as i64;
                    }
                }
                Self::from_adic_window(ring, lo, arr)
            }
            (Repr::Nil(a), Repr::Nil(b)) => {
                let n = a.len();
                let p = ring.p;
                let mut c = vec![0u64; n];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for j in 0..n - i {
                        c[i + j] = (c[i + j] + x as u64 * b[j] as u64) % p;
                    }
                }
                Repr::Nil(c.into_iter().map(|x| x as u32).collect())
            }
            (Repr::Fp(a), Repr::Fp(b)) => Repr::Fp((*a as u64 * *b as u64 % ring.p) as u32),
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a * b),
            _ => unreachable!("repr follows ring kind"),
        };
        let out = CoeffElement { ring, repr };
        let underflow = out.is_zero() && !self.is_zero() && !other.is_zero();
        Ok((out, underflow))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let ring = self.ring;
        match &self.repr {
            Repr::Adic { offset, digits } => {
                if *offset != 0 && !ring.laurent {
                    return Err(Error::NonUnit);
                }
                // Invert the unit part inside the integral ring of the same
                // precision, then negate the offset.
                let int_ring = ring.integral();
                let unit = CoeffElement { ring: int_ring, repr: Repr::Adic { offset: 0, digits: digits.clone() } };
                let inv = unit.newton_inverse(mod_inv(digits[0] as u64, ring.p))?;
                let digits = match inv.repr {
                    Repr::Adic { digits, .. } => digits,
                    _ => unreachable!(),
                };
                Ok(CoeffElement { ring, repr: Repr::Adic { offset: -offset, digits } })
            }
            Repr::Nil(c) => {
                if c[0] == 0 {
                    return Err(Error::NonUnit);
                }
                let p = ring.p;
                let inv0 = mod_inv(c[0] as u64, p);
                let n = c.len();
                let mut b = vec![0u64; n];
                b[0] = inv0;
                for k in 1..n {
                    let mut s = 0u64;
                    for i in 1..=k {
                        s = (s + c[i] as u64 * b[k - i]) % p;
                    }
                    b[k] = (p - s) % p * inv0 % p;
                }
                Ok(CoeffElement { ring, repr: Repr::Nil(b.into_iter().map(|x| x as u32).collect()) })
            }
            Repr::Fp(x) => Ok(CoeffElement { ring, repr: Repr::Fp(mod_inv(*x as u64, ring.p) as u32) }),
            Repr::Q(q) => Ok(CoeffElement { ring, repr: Repr::Q(q.recip()) }),
        }
    }

    /// Newton iteration `x ← x(2 − a x)` from a residue inverse `x0`; each
    /// step at least doubles the number of correct π-digits.
    fn newton_inverse(&self, x0: u64) -> Result<Self> {
        let ring = self.ring;
        let one = Self::one(ring);
        let two = Self::from_int(ring, 2);
        let mut x = Self::from_int(ring, x0 as i64);
        for _ in 0..64 {
            let ax = self.mul(&x)?;
            if ax == one {
                return Ok(x);
            }
            x = x.mul(&two.sub(&ax)?)?;
        }
        Err(Error::NonUnit)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.invert()?)
    }

    /// Image under the tower embedding into depth `new_depth`:
    /// `π_K = π_{K'}^{d^{K'-K}}`, valuation preserved, precision window scaled.
    pub fn promote(&self, new_depth: u32) -> Result<Self> {
        let ring = self.ring.deepened(new_depth)?;
        let r = (ring.ramification() / self.ring.ramification()) as usize;
        let repr = match &self.repr {
            Repr::Adic { offset, digits } => {
                if digits.is_empty() {
                    return Ok(Self::zero(ring));
                }
                let len = if ring.laurent {
                    ring.precision as usize
                } else {
                    (ring.precision as i64 - offset * r as i64) as usize
                };
                let mut out = vec![0u32; len];
                for (t, &x) in digits.iter().enumerate() {
                    if t * r < len {
                        out[t * r] = x;
                    }
                }
                Repr::Adic { offset: offset * r as i64, digits: out }
            }
            Repr::Nil(c) => {
                let mut out = vec![0u32; ring.precision as usize];
                for (t, &x) in c.iter().enumerate() {
                    out[t * r] = x;
                }
                Repr::Nil(out)
            }
            _ => unreachable!("deepened rejects exact fields"),
        };
        Ok(CoeffElement { ring, repr })
    }

    /// Reduction mod `p` into `F_p[s]/(s^{d^K})`, sending `π ↦ s`.
    ///
    /// Needs the digits below position `d^K` to be known, i.e. a precision
    /// window of at least `d^K` above zero.
    pub fn mod_p(&self) -> Result<Self> {
        let target = self.ring.residue()?;
        let Repr::Adic { offset, digits } = &self.repr else { unreachable!() };
        if digits.is_empty() {
            return Ok(Self::zero(target));
        }
        if *offset < 0 {
            return Err(Error::InvalidParameter("negative valuation has no reduction mod p".into()));
        }
        let n = target.precision as i64;
        let known = if self.ring.laurent { offset + self.ring.precision as i64 } else { self.ring.precision as i64 };
        if *offset < n && known < n {
            return Err(Error::InvalidParameter(alloc::format!(
                "precision window {known} is below the residue ring size {n}"
            )));
        }
        Self::from_digits(target, *offset, digits)
    }

    /// Section of [`Self::mod_p`]: lift residue digits `s^t ↦ π^t` into `target`.
    pub fn lift_residue(&self, target: RingDescriptor) -> Result<Self> {
        if self.ring.kind != RingKind::CharpEka || target.residue()? != self.ring {
            return Err(Error::RingMismatch(alloc::format!("cannot lift {} into {target}", self.ring)));
        }
        Self::from_digits(target, self.offset(), &self.digits())
    }

    /// Moves an integral element into the Laurent variant of its ring.
    pub fn to_laurent(&self) -> Result<Self> {
        let ring = self.ring.with_laurent()?;
        match &self.repr {
            Repr::Adic { offset, digits } => {
                if digits.is_empty() {
                    return Ok(Self::zero(ring));
                }
                let mut d = digits.clone();
                d.resize(ring.precision as usize, 0);
                d.truncate(ring.precision as usize);
                Ok(CoeffElement { ring, repr: Repr::Adic { offset: *offset, digits: d } })
            }
            _ => Err(Error::InvalidParameter("only char-0 eka rings have a laurent variant".into())),
        }
    }

    /// Smallest level `i` with the valuation in `(1/d^i) Z`.
    pub fn offset_scale(&self) -> u32 {
        match self.val() {
            Valuation::Infinite => 0,
            Valuation::Finite(v) => {
                let mut den = *v.denom();
                let d = self.ring.d as i64;
                let mut k = 0;
                while den > 1 && d > 1 && den % d == 0 {
                    den /= d;
                    k += 1;
                }
                k
            }
        }
    }
}

impl fmt::Display for CoeffElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Fp(x) => write!(f, "{x}"),
            Repr::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            _ => {
                if self.is_zero() {
                    return f.write_str("0");
                }
                let sym = if self.ring.kind == RingKind::CharpEka { "s" } else { "pi" };
                let mut first = true;
                let off = self.offset();
                for (t, &x) in self.digits().iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    if !first {
                        f.write_str(" + ")?;
                    }
                    first = false;
                    let e = off + t as i64;
                    match (x, e) {
                        (_, 0) => write!(f, "{x}")?,
                        (1, _) => write!(f, "{sym}^{e}")?,
                        _ => write!(f, "{x}*{sym}^{e}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Converts a valuation to an exact rational (for exact fields and tests).
pub fn valuation_ratio(v: &Valuation) -> Option<BigRational> {
    match v {
        Valuation::Finite(r) => Some(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))),
        Valuation::Infinite => None,
    }
}

/// `Q` element to small-integer digits when it is an integer in range.
pub fn rational_as_i64(q: &BigRational) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    let n = q.numer();
    if n.is_negative() && n.abs() > BigInt::from(i64::MAX) {
        return None;
    }
    n.to_i64()
}
