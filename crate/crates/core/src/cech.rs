//! Cohomology of `O(m)` on projective space with fractional exponents.
//!
//! At level `q` (`q = p^K` in dyadic mode, `q = B` in rational mode, where
//! the lattice is `(1/B) Z`) the Čech complex of the standard cover splits
//! into one small complex per monomial `x^α`, `α ∈ (1/q) Z^{n+1}` with
//! `Σ α = m`. Its cohomology is decided by `neg(α) = {i : α_i < 0}`: empty
//! gives `H^0`, everything gives `H^n`, anything else is acyclic.
//!
//! [`cech_report`] can also build the boundary matrices explicitly on a box
//! of monomials large enough to hold every contributing `α`, and rank them.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::coeff::checked_pow;
use crate::error::{Error, Result};
use crate::exponent::ExpMode;
use crate::linalg::{rank_mod_p, rank_rational, SparseRow};

/// A signed degree in `Z[1/base]` (dyadic) or `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistDegree {
    mode: ExpMode,
    value: BigRational,
}

impl TwistDegree {
    pub fn new(mode: ExpMode, value: BigRational) -> Result<Self> {
        if let ExpMode::Dyadic { base } = mode {
            let den = value.denom().to_biguint().expect("positive denominator");
            if crate::exponent::power_of(&den, base).is_none() {
                return Err(Error::ModeMismatch(alloc::format!("denominator {den} is not a power of {base}")));
            }
        }
        Ok(TwistDegree { mode, value })
    }

    pub fn integer(mode: ExpMode, m: i64) -> Self {
        TwistDegree { mode, value: BigRational::from_integer(m.into()) }
    }

    pub fn mode(&self) -> ExpMode {
        self.mode
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn neg(&self) -> Self {
        TwistDegree { mode: self.mode, value: -self.value.clone() }
    }

    /// `m` in units of `1/q`, when it lies on that lattice.
    pub fn in_units(&self, q: u64) -> Result<i64> {
        let scaled = &self.value * BigRational::from_integer(BigInt::from(q));
        if !scaled.is_integer() {
            return Err(Error::InvalidParameter(alloc::format!(
                "twist {} is not on the level lattice (1/{q}) Z",
                crate::exponent::ratio_string(&self.value)
            )));
        }
        scaled.to_integer().to_i64().ok_or_else(|| Error::Resource("twist too large".into()))
    }
}

impl core::fmt::Display for TwistDegree {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&crate::exponent::ratio_string(&self.value))
    }
}

/// Tensor product of line bundles: degrees add.
pub fn twist_add(a: &TwistDegree, b: &TwistDegree) -> Result<TwistDegree> {
    if a.mode != b.mode {
        return Err(Error::ModeMismatch(alloc::format!("{} vs {}", a.mode, b.mode)));
    }
    Ok(TwistDegree { mode: a.mode, value: &a.value + &b.value })
}

/// Denominator of the level lattice: `base^K` or `B`.
pub fn level_denominator(mode: ExpMode, level: u32) -> Result<u64> {
    match mode {
        ExpMode::Dyadic { base } => checked_pow(base, level).ok_or_else(|| Error::Resource("level too large".into())),
        ExpMode::Rational => {
            if level == 0 {
                return Err(Error::InvalidParameter("denominator bound B must be >= 1".into()));
            }
            Ok(level as u64)
        }
    }
}

pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `dim H^0(P^n, O(m))` at the level: `C(mq + n, n)`, zero for `m < 0`.
pub fn h0_rank(n: u32, m: &TwistDegree, level: u32) -> Result<u64> {
    let q = level_denominator(m.mode(), level)?;
    let mq = m.in_units(q)?;
    Ok(if mq < 0 { 0 } else { binomial(mq + n as i64, n as i64) })
}

/// `dim H^n(P^n, O(-m))` at the level for `m > 0`: `C(mq - 1, n)`, zero when
/// `mq <= n`.
pub fn hn_rank(n: u32, m: &TwistDegree, level: u32) -> Result<u64> {
    if !m.value().is_positive() {
        return Err(Error::InvalidParameter("hn_rank takes the positive m of O(-m)".into()));
    }
    let q = level_denominator(m.mode(), level)?;
    let mq = m.in_units(q)?;
    Ok(binomial(mq - 1, n as i64))
}

/// Compositions of `total` into `parts` integers from `lo..=hi`.
fn compositions(parts: usize, total: i64, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(parts: usize, rest: i64, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == parts - 1 {
            if lo <= rest && rest <= hi {
                cur.push(rest);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let left = (parts - cur.len() - 1) as i64;
        for a in lo..=hi {
            let r = rest - a;
            if r < left * lo || r > left * hi {
                continue;
            }
            cur.push(a);
            rec(parts, r, lo, hi, cur, out);
            cur.pop();
        }
    }
    if parts > 0 {
        rec(parts, total, lo, hi, &mut cur, &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Ceiling on the number of cochain basis vectors in any degree.
    pub max_dimension: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_dimension: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechReport {
    pub n: u32,
    pub m: TwistDegree,
    pub level: u32,
    /// Ranks of `H^0..H^n`, from the monomial classification.
    pub ranks: Vec<u64>,
    /// Exponent vectors (in units of `1/q`) spanning `H^0` and `H^n`.
    pub h0_basis: Option<Vec<Vec<i64>>>,
    pub hn_basis: Option<Vec<Vec<i64>>>,
    /// Ranks from the explicit boundary matrices.
    pub oracle_ranks: Option<Vec<u64>>,
    pub oracle_verified: Option<bool>,
}

/// Ranks of `H^i(P^n, O(m))` at the level, optionally checked against ranks
/// of the boundary matrices.
pub fn cech_report(
    n: u32,
    m: &TwistDegree,
    level: u32,
    field_p: u64,
    with_basis: bool,
    oracle: Option<&OracleConfig>,
) -> Result<CechReport> {
    let q = level_denominator(m.mode(), level)?;
    let mq = m.in_units(q)?;
    let parts = n as usize + 1;

    // Classification by the sign pattern; contributing α lie in a box.
    let mut ranks = vec![0u64; parts];
    // for n = 0 both branches land in degree 0: a point has one section
    let mut h0 = Vec::new();
    let mut hn = Vec::new();
    let bound = mq.abs() + n as i64 + 1;
    for alpha in compositions(parts, mq, -bound, bound) {
        let neg = alpha.iter().filter(|&&a| a < 0).count();
        if neg == 0 {
            ranks[0] += 1;
            h0.push(alpha);
        } else if neg == parts {
            ranks[n as usize] += 1;
            hn.push(alpha);
        }
    }

    let oracle_ranks = match oracle {
        Some(cfg) => Some(oracle_ranks(n, mq, bound, m.mode(), field_p, cfg)?),
        None => None,
    };
    let oracle_verified = oracle_ranks.as_ref().map(|o| *o == ranks);
    Ok(CechReport {
        n,
        m: m.clone(),
        level,
        ranks,
        h0_basis: with_basis.then_some(h0),
        hn_basis: with_basis.then_some(hn),
        oracle_ranks,
        oracle_verified,
    })
}

/// Explicit Čech complex on `{α : Σ α = mq, |α_i| <= w}`: degree `k` has a
/// basis vector for each `(S, α)` with `|S| = k+1` and `α_i >= 0` off `S`.
fn oracle_ranks(n: u32, mq: i64, w: i64, mode: ExpMode, field_p: u64, cfg: &OracleConfig) -> Result<Vec<u64>> {
    let parts = n as usize + 1;
    let monomials = compositions(parts, mq, -w, w);
    let subsets_of = |k: usize| -> Vec<u32> { (1u32..1 << parts).filter(|s| s.count_ones() as usize == k + 1).collect() };

    let basis: Vec<Vec<(u32, usize)>> = (0..parts)
        .map(|k| {
            let mut b = Vec::new();
            for s in subsets_of(k) {
                for (ai, a) in monomials.iter().enumerate() {
                    if (0..parts).all(|i| s & (1 << i) != 0 || a[i] >= 0) {
                        b.push((s, ai));
                    }
                }
            }
            b
        })
        .collect();
    if let Some(big) = basis.iter().map(Vec::len).max().filter(|&l| l > cfg.max_dimension) {
        return Err(Error::Resource(alloc::format!(
            "cochain dimension {big} exceeds the ceiling {}",
            cfg.max_dimension
        )));
    }

    // d^k : C^k -> C^{k+1}, rows indexed by the source basis.
    let mut rank_d = vec![0usize; parts];
    for k in 0..parts - 1 {
        let mut sorted = basis[k + 1].clone();
        sorted.sort_unstable();
        let lookup = |s: u32, ai: usize| sorted.binary_search(&(s, ai)).expect("target basis element");
        let mut rows: Vec<SparseRow<i64>> = Vec::with_capacity(basis[k].len());
        for &(s, ai) in &basis[k] {
            let mut row: SparseRow<i64> = Vec::new();
            for j in 0..parts {
                if s & (1 << j) != 0 {
                    continue;
                }
                let pos = (s & ((1 << j) - 1)).count_ones();
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                row.push((lookup(s | (1 << j), ai), sign));
            }
            row.sort_unstable();
            rows.push(row);
        }
        rank_d[k] = match mode {
            ExpMode::Dyadic { .. } => rank_mod_p(&rows, field_p),
            ExpMode::Rational => rank_rational(&rows),
        };
    }
    Ok((0..parts)
        .map(|k| {
            let before = if k == 0 { 0 } else { rank_d[k - 1] };
            (basis[k].len() - rank_d[k] - before) as u64
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthTable {
    pub n: u32,
    pub m: TwistDegree,
    /// `(K, rank)` of `H^0` for `m >= 0`, of `H^n` for `m < 0`.
    pub rows: Vec<(u32, u64)>,
    pub strictly_increasing: bool,
}

/// Ranks across levels; the fractional analogue of infinite rank is that
/// these grow without bound.
pub fn rank_growth(n: u32, m: &TwistDegree, levels: core::ops::RangeInclusive<u32>) -> Result<GrowthTable> {
    if m.mode() == ExpMode::Rational {
        return Err(Error::ModeMismatch("rank growth runs over dyadic levels".into()));
    }
    let mut rows = Vec::new();
    for k in levels {
        let r = if m.value().is_negative() { hn_rank(n, &m.neg(), k)? } else { h0_rank(n, m, k)? };
        rows.push((k, r));
    }
    let strictly_increasing = rows.windows(2).all(|w| w[1].1 > w[0].1);
    Ok(GrowthTable { n, m: m.clone(), rows, strictly_increasing })
}
