//! Independent ground truth: explicit permutation checks, a backtracking
//! isomorphism search for small graphs, and invariant fingerprints.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circulant::{ConnectionSet, EdgeSet};
use crate::classify::{classify_pair, MIN_TYPE2_SIZE};
use crate::error::{Error, Result};
use crate::modring::{is_theta_modulus, Modulus};
use crate::scalar::{spectra_match, Real};

/// Default vertex bound for [`brute_force_isomorphic`].
pub const DEFAULT_ORACLE_BOUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoWitness {
    pub mapping: Vec<usize>,
    pub verified: bool,
}

/// `true` iff `perm` is a bijection of `0..n` carrying `a` onto `b` exactly.
pub fn verify_permutation(a: &EdgeSet, b: &EdgeSet, perm: &[usize]) -> bool {
    let n = a.vertex_count();
    if b.vertex_count() != n || perm.len() != n || a.len() != b.len() {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    a.edges().iter().all(|&(x, y)| b.contains(perm[x], perm[y]))
}

/// Dense adjacency as bit rows.
struct Adjacency {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Adjacency {
    fn new(e: &EdgeSet) -> Self {
        let n = e.vertex_count();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for &(a, b) in e.edges() {
            bits[a * words + b / 64] |= 1 << (b % 64);
            bits[b * words + a / 64] |= 1 << (a % 64);
        }
        Self { n, words, bits }
    }

    #[inline]
    fn has(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    fn common(&self, a: usize, b: usize) -> u32 {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x & y).count_ones())
            .sum()
    }

    fn degree(&self, a: usize) -> u32 {
        self.row(a).iter().map(|x| x.count_ones()).sum()
    }

    /// Triangles through each vertex.
    fn triangles(&self) -> Vec<u64> {
        (0..self.n)
            .map(|v| {
                let mut count = 0u64;
                for u in 0..self.n {
                    if self.has(v, u) {
                        count += u64::from(self.common(v, u));
                    }
                }
                count / 2
            })
            .collect()
    }
}

pub fn brute_force_isomorphic(a: &EdgeSet, b: &EdgeSet) -> Result<Option<IsoWitness>> {
    brute_force_isomorphic_with_bound(a, b, DEFAULT_ORACLE_BOUND)
}

/// Backtracking search for a vertex bijection mapping `a` onto `b`.
///
/// Vertices of `a` are placed in a fixed greedy order (most already-placed
/// neighbors first, ties by index); images are tried in increasing order and
/// must agree with every placed vertex on adjacency and on the number of
/// common neighbors.
pub fn brute_force_isomorphic_with_bound(
    a: &EdgeSet,
    b: &EdgeSet,
    bound: usize,
) -> Result<Option<IsoWitness>> {
    let n = a.vertex_count();
    if b.vertex_count() != n {
        return Err(Error::VertexCountMismatch(n, b.vertex_count()));
    }
    if n > bound {
        return Err(Error::OracleBound { n, bound });
    }
    if a.len() != b.len() {
        return Ok(None);
    }
    let (adj_a, adj_b) = (Adjacency::new(a), Adjacency::new(b));
    let mut deg_a: Vec<u32> = (0..n).map(|v| adj_a.degree(v)).collect();
    let mut deg_b: Vec<u32> = (0..n).map(|v| adj_b.degree(v)).collect();
    let (da, db) = (deg_a.clone(), deg_b.clone());
    deg_a.sort_unstable();
    deg_b.sort_unstable();
    if deg_a != deg_b {
        return Ok(None);
    }

    let order = search_order(&adj_a);
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let found = extend(0, &order, &adj_a, &adj_b, &da, &db, &mut mapping, &mut used);
    if !found {
        return Ok(None);
    }
    let verified = verify_permutation(a, b, &mapping);
    debug_assert!(verified);
    Ok(Some(IsoWitness { mapping, verified }))
}

fn search_order(adj: &Adjacency) -> Vec<usize> {
    let n = adj.n;
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (links[v], std::cmp::Reverse(v)))
            .expect("unplaced vertex remains");
        placed[next] = true;
        order.push(next);
        for (v, l) in links.iter_mut().enumerate() {
            if adj.has(next, v) {
                *l += 1;
            }
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    adj_a: &Adjacency,
    adj_b: &Adjacency,
    deg_a: &[u32],
    deg_b: &[u32],
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&u) = order.get(depth) else {
        return true;
    };
    for v in 0..adj_b.n {
        if used[v] || deg_a[u] != deg_b[v] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&w| {
            let image = mapping[w];
            adj_a.has(u, w) == adj_b.has(v, image) && adj_a.common(u, w) == adj_b.common(v, image)
        });
        if !consistent {
            continue;
        }
        mapping[u] = v;
        used[v] = true;
        if extend(depth + 1, order, adj_a, adj_b, deg_a, deg_b, mapping, used) {
            return true;
        }
        used[v] = false;
        mapping[u] = usize::MAX;
    }
    false
}

/// Invariants that must agree between isomorphic graphs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fingerprint<T> {
    pub n: u64,
    pub degree: u64,
    /// Sorted spectrum rounded to the scalar's spectral tolerance.
    pub spectrum: Vec<T>,
    /// Sorted per-vertex triangle counts.
    pub triangles: Vec<u64>,
}

impl<T: Real> PartialEq for Fingerprint<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.degree == other.degree
            && self.triangles == other.triangles
            && spectra_match(&self.spectrum, &other.spectrum)
    }
}

pub fn fingerprint<T: Real>(c: &ConnectionSet) -> Fingerprint<T> {
    let tol = T::spectral_tolerance();
    let spectrum = c
        .spectrum::<T>()
        .into_iter()
        .map(|x| (x / tol).round() * tol)
        .collect();
    let mut triangles = Adjacency::new(&c.realize()).triangles();
    triangles.sort_unstable();
    Fingerprint {
        n: c.order(),
        degree: c.degree(),
        spectrum,
        triangles,
    }
}

/// Outcome of comparing the Type-1/Type-2 verdicts against the oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub n: u64,
    pub m: u64,
    pub sets_checked: usize,
    /// Unordered pairs declared Type-1 or Type-2.
    pub claimed_pairs: usize,
    /// Claimed pairs the oracle found isomorphic.
    pub confirmed_pairs: usize,
    /// Claimed isomorphic but refuted by the oracle. Must be empty.
    pub refutations: Vec<(Vec<u64>, Vec<u64>)>,
    /// Oracle-isomorphic pairs neither mechanism explains.
    pub missed: Vec<(Vec<u64>, Vec<u64>)>,
}

/// Compares the two mechanisms with brute-force ground truth over every
/// pair of connection sets of order `n` with at least three jumps.
pub fn cross_validate(n: Modulus, m: u64) -> Result<CrossValidation> {
    if !is_theta_modulus(n, m) {
        return Err(Error::InvalidThetaModulus { n: n.get(), m });
    }
    let size = n.get() as usize;
    if size > DEFAULT_ORACLE_BOUND {
        return Err(Error::OracleBound {
            n: size,
            bound: DEFAULT_ORACLE_BOUND,
        });
    }
    let half = n.half();
    let sets: Vec<ConnectionSet> = (1u64..1 << half)
        .filter(|mask| mask.count_ones() as usize >= MIN_TYPE2_SIZE)
        .map(|mask| ConnectionSet::new(n, (1..=half).filter(|r| mask >> (r - 1) & 1 == 1)))
        .collect::<Result<_>>()?;

    // Oracle classes: fingerprint buckets refined by brute force.
    let mut buckets: BTreeMap<(u64, Vec<u64>, Vec<i64>), Vec<usize>> = BTreeMap::new();
    for (i, c) in sets.iter().enumerate() {
        let fp = fingerprint::<f64>(c);
        let key: Vec<i64> = fp
            .spectrum
            .iter()
            .map(|x| (x * 1e6).round() as i64)
            .collect();
        buckets
            .entry((fp.degree, fp.triangles, key))
            .or_default()
            .push(i);
    }
    let mut class_of = vec![usize::MAX; sets.len()];
    let mut next_class = 0;
    for members in buckets.values() {
        let mut reps: Vec<(usize, EdgeSet)> = Vec::new();
        for &i in members {
            let edges = sets[i].realize();
            let mut hit = None;
            for (class, rep) in &reps {
                if brute_force_isomorphic(rep, &edges)?.is_some() {
                    hit = Some(*class);
                    break;
                }
            }
            class_of[i] = match hit {
                Some(c) => c,
                None => {
                    reps.push((next_class, edges));
                    next_class += 1;
                    next_class - 1
                }
            };
        }
    }

    let index_pairs: Vec<(usize, usize)> = (0..sets.len())
        .flat_map(|i| (i + 1..sets.len()).map(move |j| (i, j)))
        .collect();
    let verdicts: Vec<(usize, usize, bool)> = index_pairs
        .par_iter()
        .map(|&(i, j)| Ok((i, j, classify_pair(&sets[i], &sets[j])?.is_isomorphic())))
        .collect::<Result<_>>()?;

    let mut report = CrossValidation {
        n: n.get(),
        m,
        sets_checked: sets.len(),
        ..Default::default()
    };
    for (i, j, claimed) in verdicts {
        let same = class_of[i] == class_of[j];
        let pair = || (sets[i].jumps().to_vec(), sets[j].jumps().to_vec());
        match (claimed, same) {
            (true, true) => {
                report.claimed_pairs += 1;
                report.confirmed_pairs += 1;
            }
            (true, false) => {
                report.claimed_pairs += 1;
                report.refutations.push(pair());
            }
            (false, true) => report.missed.push(pair()),
            (false, false) => {}
        }
    }
    Ok(report)
}
