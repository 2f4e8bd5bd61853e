//! The vertex map `theta_{n,m,t}: v_x -> v_{x + j t m}` with `j = x mod m`.
//!
//! Each residue class mod `m` is rotated by its own multiple of `t m`. The
//! image of a circulant graph is circulant only for particular `t`; this
//! module computes images, detects circularity and extracts the image jump set.

use serde::{Deserialize, Serialize};

use crate::circulant::{ConnectionSet, EdgeSet};
use crate::error::{Error, Result};
use crate::modring::{is_theta_modulus, reflexive_reduce, Modulus};

/// `(n, m, t)` with `m > 1`, `m^3 | n` and `0 <= t <= n/m - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaParams {
    n: Modulus,
    m: u64,
    t: u64,
}

impl ThetaParams {
    pub fn new(n: Modulus, m: u64, t: u64) -> Result<Self> {
        if !is_theta_modulus(n, m) {
            return Err(Error::InvalidThetaModulus { n: n.get(), m });
        }
        let max = n.get() / m - 1;
        if t > max {
            return Err(Error::ShiftOutOfRange { t, max });
        }
        Ok(Self { n, m, t })
    }

    pub fn modulus(&self) -> Modulus {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// Largest admissible shift, `n/m - 1`.
    pub fn max_shift(&self) -> u64 {
        self.n.get() / self.m - 1
    }

    /// Parameters of the inverse map: `theta_{n,m,t}^{-1} = theta_{n,m,n/m - t}`.
    pub fn inverse(&self) -> Self {
        let t = if self.t == 0 {
            0
        } else {
            self.n.get() / self.m - self.t
        };
        Self { t, ..*self }
    }

    #[inline]
    pub fn vertex_map(&self, x: u64) -> u64 {
        let n = self.n.get();
        let j = x % self.m;
        (x + j * self.t * self.m) % n
    }

    pub fn permutation(&self) -> Vec<usize> {
        (0..self.n.get())
            .map(|x| self.vertex_map(x) as usize)
            .collect()
    }
}

/// `theta` applied to a circulant graph, with the circulant form of the
/// image when it has one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaImage {
    pub params: ThetaParams,
    pub source: ConnectionSet,
    pub image_edges: EdgeSet,
    pub circulant_result: Option<ConnectionSet>,
}

impl ThetaImage {
    pub fn is_circulant(&self) -> bool {
        self.circulant_result.is_some()
    }
}

pub fn apply(params: ThetaParams, c: &ConnectionSet) -> Result<ThetaImage> {
    if params.n != c.modulus() {
        return Err(Error::OrderMismatch {
            left: params.n.get(),
            right: c.order(),
        });
    }
    let perm = params.permutation();
    let mut seen = vec![false; perm.len()];
    for &v in &perm {
        assert!(
            !std::mem::replace(&mut seen[v], true),
            "theta is not injective for {params:?}"
        );
    }
    let source_edges = c.realize();
    let image_edges = source_edges.permute(&perm)?;
    assert_eq!(image_edges.len(), source_edges.len());
    let circulant_result = detect_circulant(&image_edges);
    Ok(ThetaImage {
        params,
        source: c.clone(),
        image_edges,
        circulant_result,
    })
}

/// Reads the candidate jump set off vertex 0's neighborhood and accepts it
/// only if the candidate circulant reproduces `edges` exactly.
pub fn detect_circulant(edges: &EdgeSet) -> Option<ConnectionSet> {
    let n = Modulus::new(edges.vertex_count() as u64).ok()?;
    let diffs = edges.neighbors(0).into_iter().map(|v| v as i64);
    let candidate = reflexive_reduce(n, diffs);
    if candidate.first() == Some(&0) {
        return None;
    }
    let candidate = ConnectionSet::new(n, candidate).ok()?;
    (candidate.realize() == *edges).then_some(candidate)
}

/// Image jump set read from vertex 0: `s + (s mod m) t m` over `s ∈ R ∪ (n - R)`.
///
/// This is the neighborhood of `theta(v_0) = v_0` in the image and says
/// nothing about the other vertices.
pub fn jump_shortcut(params: ThetaParams, c: &ConnectionSet) -> Vec<u64> {
    let n = c.order();
    let values = c
        .jumps()
        .iter()
        .flat_map(|&r| [r, n - r])
        .map(|s| params.vertex_map(s) as i64);
    reflexive_reduce(params.n, values)
}

/// Allocation-light circularity test used by the enumerator.
///
/// Takes the vertex-0 candidate and checks every image edge against it.
/// Because `theta` is a bijection the image has exactly `|E(C)|` distinct
/// edges, so containment plus equal edge counts is equality.
pub fn image_circulant(params: ThetaParams, c: &ConnectionSet) -> Option<ConnectionSet> {
    debug_assert_eq!(params.n, c.modulus());
    let n = params.n;
    let candidate = jump_shortcut(params, c);
    if candidate.first() == Some(&0) {
        return None;
    }
    let candidate = ConnectionSet::from_sorted_unchecked(n, candidate);
    if candidate.edge_count() != c.edge_count() {
        return None;
    }
    let mut member = vec![false; n.half() as usize + 1];
    for &s in candidate.jumps() {
        member[s as usize] = true;
    }
    let n_val = n.get();
    for x in 0..n_val {
        let a = params.vertex_map(x);
        for &r in c.jumps() {
            let b = params.vertex_map((x + r) % n_val);
            let d = n.fold((b + n_val - a) % n_val);
            if !member[d as usize] {
                return None;
            }
        }
    }
    Some(candidate)
}
