//! Sparse exact rank over `F_p` and `Q`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// A sparse row: `(column, value)` sorted by column, no zeros.
pub type SparseRow<T> = Vec<(usize, T)>;

trait Scalar: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
}

#[derive(Clone, Copy)]
struct Fp(u64, u64);

impl Scalar for Fp {
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(self.0 * o.0 % self.1, self.1)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp((self.0 + self.1 - o.0) % self.1, self.1)
    }
    fn inv(&self) -> Self {
        let (mut r, mut b, mut e) = (1u64, self.0, self.1 - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.1;
            }
            b = b * b % self.1;
            e >>= 1;
        }
        Fp(r, self.1)
    }
}

impl Scalar for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// `a - c·b` for sparse rows.
fn axpy<T: Scalar>(a: &[(usize, T)], c: &T, b: &[(usize, T)]) -> SparseRow<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = b[j].1.mul(c);
            let zero = v.sub(&v);
            out.push((b[j].0, zero.sub(&v)));
            j += 1;
        } else {
            let v = a[i].1.sub(&b[j].1.mul(c));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn rank_generic<T: Scalar>(rows: impl IntoIterator<Item = SparseRow<T>>) -> usize {
    let mut pivots: BTreeMap<usize, SparseRow<T>> = BTreeMap::new();
    for mut row in rows {
        row.retain(|(_, v)| !v.is_zero());
        loop {
            let Some((lead, lv)) = row.first().cloned() else { break };
            match pivots.get(&lead) {
                Some(piv) => row = axpy(&row, &lv, piv),
                None => {
                    let inv = lv.inv();
                    let normalized = row.iter().map(|(c, v)| (*c, v.mul(&inv))).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Rank over `F_p` of a matrix given by sparse integer rows.
pub fn rank_mod_p(rows: &[SparseRow<i64>], p: u64) -> usize {
    rank_generic(rows.iter().map(|r| {
        r.iter().map(|&(c, v)| (c, Fp(v.rem_euclid(p as i64) as u64, p))).collect::<Vec<_>>()
    }))
}

/// Rank over `Q` of a matrix given by sparse integer rows.
pub fn rank_rational(rows: &[SparseRow<i64>]) -> usize {
    rank_generic(rows.iter().map(|r| {
        r.iter().map(|&(c, v)| (c, BigRational::from_integer(BigInt::from(v)))).collect::<Vec<_>>()
    }))
}

/// Dense helper for tests and small inputs.
pub fn sparse_from_dense(rows: &[Vec<i64>]) -> Vec<SparseRow<i64>> {
    rows.iter()
        .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, v)| (c, *v)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Dense fraction-free elimination over Q as an independent rank oracle.
    fn dense_rank(mut m: Vec<Vec<i128>>) -> usize {
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, piv);
            for r in 0..rows {
                if r != rank && m[r][c] != 0 {
                    let (a, b) = (m[rank][c], m[r][c]);
                    for k in 0..cols {
                        m[r][k] = m[r][k] * a - m[rank][k] * b;
                    }
                    let g = m[r].iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
                    if g > 1 {
                        m[r].iter_mut().for_each(|x| *x /= g);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_examples() {
        let m = sparse_from_dense(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(rank_rational(&m), 1);
        assert_eq!(rank_mod_p(&m, 3), 1);
        let m = sparse_from_dense(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(rank_rational(&m), 2);
        assert_eq!(rank_mod_p(&m, 2), 1);
        assert_eq!(rank_rational(&[]), 0);
    }

    #[test]
    fn matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let (r, c) = (rng.random_range(1..7), rng.random_range(1..7));
            let dense: Vec<Vec<i64>> =
                (0..r).map(|_| (0..c).map(|_| if rng.random_bool(0.5) { 0 } else { rng.random_range(-2..3) }).collect()).collect();
            let expect = dense_rank(dense.iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect());
            assert_eq!(rank_rational(&sparse_from_dense(&dense)), expect);
        }
    }
}
