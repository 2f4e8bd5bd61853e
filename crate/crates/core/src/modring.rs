//! Exact arithmetic on `Z_n`: reflexive reduction, the unit group and the
//! divisibility gate for theta moduli.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported graph order. Products of two residues stay below 2^40.
pub const MAX_ORDER: u64 = 1 << 20;

/// Graph order `n`, with `3 <= n <= MAX_ORDER`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::OrderTooSmall(n));
        }
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge { n, max: MAX_ORDER });
        }
        Ok(Self(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `floor(n / 2)`, the largest reduced jump.
    #[inline]
    pub fn half(self) -> u64 {
        self.0 / 2
    }

    /// Residue of `v` in `[0, n)`.
    #[inline]
    pub fn residue(self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }

    /// Reflexive residue: `v mod n` folded into `[0, n/2]`.
    #[inline]
    pub fn reflect(self, v: i64) -> u64 {
        self.fold(self.residue(v))
    }

    /// Folds a residue already in `[0, n)` into `[0, n/2]`.
    #[inline]
    pub fn fold(self, r: u64) -> u64 {
        debug_assert!(r < self.0);
        if 2 * r > self.0 {
            self.0 - r
        } else {
            r
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a % self.0) * (b % self.0) % self.0
    }

    #[inline]
    pub fn is_unit(self, x: u64) -> bool {
        x.gcd(&self.0) == 1
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;

    fn try_from(n: u64) -> Result<Self> {
        Self::new(n)
    }
}

impl From<Modulus> for u64 {
    fn from(n: Modulus) -> u64 {
        n.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Reflexive modular reduction of a multiset of integers.
///
/// Each value is reduced mod `n`; residues above `n/2` are replaced by
/// `n - residue`. The result is sorted and duplicate-free. A `0` in the output
/// marks a self-loop jump and is left for the caller to reject.
pub fn reflexive_reduce<I>(n: Modulus, values: I) -> Vec<u64>
where
    I: IntoIterator<Item = i64>,
{
    let mut out: Vec<u64> = values.into_iter().map(|v| n.reflect(v)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// The multiplicative group of units of `Z_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroup {
    n: Modulus,
    units: Vec<u64>,
}

impl UnitGroup {
    pub fn modulus(&self) -> Modulus {
        self.n
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.units.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.units.iter().copied()
    }
}

pub fn units(n: Modulus) -> UnitGroup {
    let units = (1..n.get()).filter(|&x| n.is_unit(x)).collect();
    UnitGroup { n, units }
}

/// Every `m > 1` with `m^3 | n` that divides `gcd(n, r)` for some jump `r`.
pub fn valid_type2_moduli(n: Modulus, jumps: &[u64]) -> Vec<u64> {
    let n_val = n.get();
    (2..)
        .take_while(|m: &u64| m * m * m <= n_val)
        .filter(|&m| n_val.is_multiple_of(m * m * m))
        .filter(|&m| jumps.iter().any(|&r| r.gcd(&n_val) % m == 0))
        .collect()
}

/// `m > 1` and `m^3 | n`, without reference to any jump set.
pub fn is_theta_modulus(n: Modulus, m: u64) -> bool {
    m > 1 && m.checked_pow(3).is_some_and(|c| n.get().is_multiple_of(c))
}

/// Trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    (2..)
        .take_while(|d| d * d <= p)
        .all(|d| !p.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(
            reflexive_reduce(md(32), [9, 2, 23, 25, 30, 7]),
            vec![2, 7, 9]
        );
        assert_eq!(reflexive_reduce(md(32), [16]), vec![16]);
        assert_eq!(reflexive_reduce(md(27), [26, 24, 19]), vec![1, 3, 8]);
    }

    #[test]
    fn reduce_reports_self_loops_and_negatives() {
        assert_eq!(reflexive_reduce(md(10), [0, 10, -3]), vec![0, 3]);
        assert_eq!(reflexive_reduce(md(7), [-1, 6, 8]), vec![1]);
    }

    #[test]
    fn unit_examples() {
        let u32_ = units(md(32));
        assert_eq!(u32_.as_slice(), (1..32).step_by(2).collect::<Vec<_>>());
        assert_eq!(units(md(27)).len(), 18);
        assert_eq!(units(md(24)).as_slice(), &[1, 5, 7, 11, 13, 17, 19, 23]);
    }

    #[test]
    fn type2_moduli_examples() {
        assert_eq!(valid_type2_moduli(md(32), &[1, 2, 15]), vec![2]);
        assert!(valid_type2_moduli(md(32), &[1, 3, 15]).is_empty());
        assert_eq!(valid_type2_moduli(md(27), &[1, 3, 8, 10]), vec![3]);
        // 2^3 | 64 and 4^3 | 64, but only jumps divisible by 4 admit m = 4.
        assert_eq!(valid_type2_moduli(md(64), &[2, 5]), vec![2]);
        assert_eq!(valid_type2_moduli(md(64), &[4, 5]), vec![2, 4]);
    }

    #[test]
    fn modulus_bounds() {
        assert!(matches!(Modulus::new(2), Err(Error::OrderTooSmall(2))));
        assert!(Modulus::new(MAX_ORDER).is_ok());
        assert!(matches!(
            Modulus::new(MAX_ORDER + 1),
            Err(Error::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn theta_modulus_gate() {
        assert!(is_theta_modulus(md(32), 2));
        assert!(!is_theta_modulus(md(9), 3));
        assert!(!is_theta_modulus(md(32), 1));
        assert!(!is_theta_modulus(md(32), 4));
    }
}
