//! Connection sets, their edge sets, and the closed-form circulant spectrum.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{reflexive_reduce, Modulus};
use crate::scalar::Real;

/// A circulant graph `C_n(R)` identified by its reduced jump set
/// `R ⊆ [1, floor(n/2)]`, sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConnectionSet {
    n: Modulus,
    jumps: Vec<u64>,
}

impl ConnectionSet {
    /// Builds a set from jumps already in `[1, floor(n/2)]`. Order and
    /// repeats in the input are ignored.
    pub fn new<I>(n: Modulus, jumps: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        let mut jumps: Vec<u64> = jumps.into_iter().collect();
        for &jump in &jumps {
            if jump == 0 {
                return Err(Error::SelfLoop {
                    jump: 0,
                    n: n.get(),
                });
            }
            if jump > n.half() {
                return Err(Error::JumpOutOfRange {
                    jump,
                    n: n.get(),
                    half: n.half(),
                });
            }
        }
        jumps.sort_unstable();
        jumps.dedup();
        Ok(Self { n, jumps })
    }

    /// Reflexively reduces arbitrary integers, rejecting any that land on 0.
    pub fn from_values<I>(n: Modulus, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        let values: Vec<i64> = values.into_iter().collect();
        if let Some(&jump) = values.iter().find(|&&v| n.residue(v) == 0) {
            return Err(Error::SelfLoop { jump, n: n.get() });
        }
        Ok(Self {
            n,
            jumps: reflexive_reduce(n, values),
        })
    }

    /// Parses the comma-separated jump syntax, e.g. `"1,2,15"`.
    pub fn parse(n: Modulus, text: &str) -> Result<Self> {
        Self::from_values(n, parse_jump_list(text)?)
    }

    pub(crate) fn from_sorted_unchecked(n: Modulus, jumps: Vec<u64>) -> Self {
        debug_assert!(jumps.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(jumps.iter().all(|&j| j >= 1 && j <= n.half()));
        Self { n, jumps }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.n
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.n.get()
    }

    #[inline]
    pub fn jumps(&self) -> &[u64] {
        &self.jumps
    }

    pub fn len(&self) -> usize {
        self.jumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jumps.is_empty()
    }

    pub fn contains(&self, jump: u64) -> bool {
        self.jumps.binary_search(&jump).is_ok()
    }

    /// `true` when `n` is even and `n/2` is a jump (it contributes a perfect matching).
    pub fn has_half_jump(&self) -> bool {
        self.n.get().is_multiple_of(2) && self.contains(self.n.half())
    }

    pub fn with_jumps<I>(&self, extra: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        Self::new(self.n, self.jumps.iter().copied().chain(extra))
    }

    pub fn degree(&self) -> u64 {
        let full = self.jumps.len() as u64;
        if self.has_half_jump() {
            2 * (full - 1) + 1
        } else {
            2 * full
        }
    }

    pub fn edge_count(&self) -> usize {
        (self.n.get() * self.degree() / 2) as usize
    }

    /// Explicit edge list `{x, x + r mod n}`.
    pub fn realize(&self) -> EdgeSet {
        let n = self.n.get();
        let mut edges = Vec::with_capacity(self.edge_count());
        for x in 0..n {
            for &r in &self.jumps {
                edges.push(((x + r) % n, x));
            }
        }
        EdgeSet::from_pairs(
            n as usize,
            edges.into_iter().map(|(a, b)| (a as usize, b as usize)),
        )
        .expect("circulant edges are in range and loop-free")
    }

    /// Eigenvalues `sum_r 2 cos(2 pi j r / n)` (with `(-1)^j` for the half
    /// jump), sorted ascending.
    pub fn spectrum<T: Real>(&self) -> Vec<T> {
        let n = self.n.get();
        let tau_over_n = T::TAU() / T::of_u64(n);
        let two = T::one() + T::one();
        let mut values: Vec<T> = (0..n)
            .map(|j| {
                self.jumps.iter().fold(T::zero(), |acc, &r| {
                    if 2 * r == n {
                        if j % 2 == 0 {
                            acc + T::one()
                        } else {
                            acc - T::one()
                        }
                    } else {
                        let k = (j * r) % n;
                        acc + two * (tau_over_n * T::of_u64(k)).cos()
                    }
                })
            })
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).expect("spectrum has no NaN"));
        values
    }

    /// `k . C_n(R) = C_{kn}(kR)`.
    pub fn scale(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroScale);
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let big = Modulus::new(self.n.get() * k)?;
        Self::from_values(big, self.jumps.iter().map(|&r| (r * k) as i64))
    }
}

impl fmt::Display for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{}({})", self.n, JumpList(&self.jumps))
    }
}

/// Displays a jump slice in the `1,2,15` syntax.
pub struct JumpList<'a>(pub &'a [u64]);

impl fmt::Display for JumpList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Parses `"a,b,c"` into raw integers. Whitespace around items is ignored.
pub fn parse_jump_list(text: &str) -> Result<Vec<i64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| {
            let item = item.trim();
            i64::from_str(item).map_err(|_| Error::Parse(format!("bad jump {item:?} in {text:?}")))
        })
        .collect()
}

/// Undirected simple graph on `0..n` as a sorted list of pairs `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl EdgeSet {
    /// Normalizes, sorts and deduplicates. Rejects self-pairs and
    /// out-of-range vertices.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::Parse(format!("self-pair on vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::Parse(format!("edge ({a}, {b}) outside 0..{n}")));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Image of the edge set under a vertex permutation.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::VertexCountMismatch(perm.len(), self.n));
        }
        Self::from_pairs(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cs(n: u64, jumps: &[u64]) -> ConnectionSet {
        ConnectionSet::new(Modulus::new(n).unwrap(), jumps.iter().copied()).unwrap()
    }

    #[test]
    fn realize_examples() {
        let e = cs(4, &[2]).realize();
        assert_eq!(e.edges(), &[(0, 2), (1, 3)]);
        assert_eq!(cs(5, &[1]).realize().len(), 5);
        let big = cs(32, &[1, 2, 15]).realize();
        assert_eq!(big.len(), 96);
        assert!(big.degrees().iter().all(|&d| d == 6));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(cs(32, &[1, 2, 15]).degree(), 6);
        assert_eq!(cs(32, &[7, 9, 16]).degree(), 5);
        assert_eq!(cs(4, &[2]).degree(), 1);
    }

    #[test]
    fn five_cycle_spectrum() {
        let eig: Vec<f64> = cs(5, &[1]).spectrum();
        let a = 2.0 * (2.0 * std::f64::consts::PI / 5.0).cos();
        let b = 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos();
        let expected = [b, b, a, a, 2.0];
        for (x, y) in eig.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn cospectral_and_not() {
        let a: Vec<f64> = cs(32, &[1, 2, 15]).spectrum();
        let b: Vec<f64> = cs(32, &[2, 7, 9]).spectrum();
        let c: Vec<f64> = cs(32, &[1, 2, 3]).spectrum();
        assert!(crate::scalar::spectra_match(&a, &b));
        let gap = a
            .iter()
            .zip(&c)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(gap > 1e-3, "largest gap {gap}");
    }

    #[test]
    fn single_precision_spectrum_agrees() {
        let a: Vec<f32> = cs(32, &[1, 2, 15]).spectrum();
        let b: Vec<f32> = cs(32, &[2, 7, 9]).spectrum();
        assert!(crate::scalar::spectra_match(&a, &b));
        assert!((a[31] - 6.0).abs() < 1e-5);
    }

    #[test]
    fn scale_examples() {
        let c = cs(32, &[1, 2, 15]);
        assert_eq!(c.scale(1).unwrap(), c);
        assert_eq!(c.scale(2).unwrap(), cs(64, &[2, 4, 30]));
        assert_eq!(
            cs(27, &[3, 4, 5, 13]).scale(2).unwrap(),
            cs(54, &[6, 8, 10, 26])
        );
        assert!(matches!(c.scale(0), Err(Error::ZeroScale)));
    }

    #[test]
    fn parse_and_validate() {
        let n = Modulus::new(32).unwrap();
        assert_eq!(
            ConnectionSet::parse(n, "15, 2,1").unwrap(),
            cs(32, &[1, 2, 15])
        );
        assert_eq!(
            ConnectionSet::parse(n, "9,2,23,25,30,7").unwrap(),
            cs(32, &[2, 7, 9])
        );
        assert!(matches!(
            ConnectionSet::parse(n, "1,32"),
            Err(Error::SelfLoop { .. })
        ));
        assert!(matches!(
            ConnectionSet::parse(n, "1,x"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            ConnectionSet::new(n, [17]),
            Err(Error::JumpOutOfRange { .. })
        ));
        assert!(matches!(
            ConnectionSet::new(n, [0]),
            Err(Error::SelfLoop { .. })
        ));
    }

    #[test]
    fn display_uses_jump_syntax() {
        assert_eq!(cs(32, &[1, 2, 15]).to_string(), "C_32(1,2,15)");
    }

    fn arb_set() -> impl Strategy<Value = ConnectionSet> {
        (3u64..40).prop_flat_map(|n| {
            proptest::collection::btree_set(1..=n / 2, 1..=(n / 2) as usize)
                .prop_map(move |s| cs(n, &s.into_iter().collect::<Vec<_>>()))
        })
    }

    proptest! {
        #[test]
        fn realize_is_rotation_invariant(c in arb_set()) {
            let n = c.order() as usize;
            let e = c.realize();
            let rot: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
            prop_assert_eq!(e.permute(&rot).unwrap(), e.clone());
            prop_assert_eq!(e.len(), c.edge_count());
            prop_assert_eq!(c.degree() as usize * n, 2 * e.len());
        }

        #[test]
        fn spectrum_trace_and_top(c in arb_set()) {
            let eig: Vec<f64> = c.spectrum();
            let trace: f64 = eig.iter().sum();
            prop_assert!(trace.abs() < 1e-9);
            prop_assert!((eig[eig.len() - 1] - c.degree() as f64).abs() < 1e-9);
        }

        #[test]
        fn scale_composes(c in arb_set(), a in 1u64..4, b in 1u64..4) {
            let lhs = c.scale(a).unwrap().scale(b).unwrap();
            prop_assert_eq!(lhs, c.scale(a * b).unwrap());
        }
    }
}
