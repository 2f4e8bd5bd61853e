//! Exhaustive Type-2 discovery for a fixed `(n, m)` and the parametric
//! `np^3` families of Type-2 isomorphic triples (and larger `p`-tuples).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adam::{multiply_unchecked, orbit, type1_witness};
use crate::circulant::ConnectionSet;
use crate::classify::{classify_pair, PairClassification};
use crate::error::{Error, Result};
use crate::modring::{is_prime, is_theta_modulus, units, Modulus};
use crate::oracle::verify_permutation;
use crate::scalar::spectra_match;
use crate::theta::{apply, image_circulant, ThetaParams};

/// Which Type-2 pairs a report counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationScope {
    /// Pairs reachable from the smallest Type-2 pairs by adding common
    /// multiples of `m` to both sides (`R ∪ mT`, `S ∪ mT`).
    #[default]
    SeedClosure,
    /// Every Type-2 pair found by the subset scan.
    Exhaustive,
}

impl FromStr for EnumerationScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seed-closure" => Ok(Self::SeedClosure),
            "exhaustive" | "all" => Ok(Self::Exhaustive),
            other => Err(Error::Parse(format!("unknown scope {other:?}"))),
        }
    }
}

impl fmt::Display for EnumerationScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SeedClosure => "seed-closure",
            Self::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub min_size: usize,
    pub scope: EnumerationScope,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            min_size: 3,
            scope: EnumerationScope::SeedClosure,
            workers: None,
        }
    }
}

/// Unordered Type-2 pair stored with `r < s` lexicographically; `t` is the
/// smallest shift with `theta_{n,m,t}(C_n(r)) = C_n(s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Type2Pair {
    pub r: Vec<u64>,
    pub s: Vec<u64>,
    pub m: u64,
    pub t: u64,
}

/// Connection sets that are mutually Type-2 isomorphic w.r.t. the run's `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IsoClass {
    pub members: Vec<Vec<u64>>,
}

impl IsoClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, jumps: &[u64]) -> bool {
        self.members.iter().any(|m| m == jumps)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanStats {
    pub sets_scanned: u64,
    pub theta_applications: u64,
    pub circulant_hits: u64,
    /// Type-2 pairs over the whole scan, before the scope filter.
    pub exhaustive_pair_count: usize,
    /// Jump-set size of the smallest Type-2 pairs.
    pub seed_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub n: u64,
    pub m: u64,
    pub scope: EnumerationScope,
    pub min_size: usize,
    pub pair_count: usize,
    pub pairs: Vec<Type2Pair>,
    pub classes: Vec<IsoClass>,
    pub scan_stats: ScanStats,
}

impl EnumerationReport {
    pub fn class_sizes(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.classes {
            *out.entry(c.len()).or_insert(0) += 1;
        }
        out
    }

    /// Re-derives every reported pair independently.
    pub fn audit(&self) -> Result<Audit> {
        let n = Modulus::new(self.n)?;
        let mut audit = Audit {
            pairs_checked: self.pairs.len(),
            ..Default::default()
        };
        for pair in &self.pairs {
            let r = ConnectionSet::new(n, pair.r.iter().copied())?;
            let s = ConnectionSet::new(n, pair.s.iter().copied())?;
            let params = ThetaParams::new(n, pair.m, pair.t)?;
            if !verify_permutation(&r.realize(), &s.realize(), &params.permutation()) {
                audit.permutation_failures.push(pair.clone());
            }
            let unit_hit = units(n).iter().any(|x| multiply_unchecked(&r, x) == s)
                || units(n).iter().any(|x| multiply_unchecked(&s, x) == r);
            if unit_hit {
                audit.orbit_failures.push(pair.clone());
            }
            if !matches!(classify_pair(&r, &s)?, PairClassification::Type2 { .. }) {
                audit.reclassification_failures.push(pair.clone());
            }
            if !spectra_match(&r.spectrum::<f64>(), &s.spectrum::<f64>()) {
                audit.spectral_failures.push(pair.clone());
            }
        }
        Ok(audit)
    }
}

/// Failures found by [`EnumerationReport::audit`]; all lists empty means sound.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub pairs_checked: usize,
    pub permutation_failures: Vec<Type2Pair>,
    pub orbit_failures: Vec<Type2Pair>,
    pub reclassification_failures: Vec<Type2Pair>,
    pub spectral_failures: Vec<Type2Pair>,
}

impl Audit {
    pub fn is_clean(&self) -> bool {
        self.permutation_failures.is_empty()
            && self.orbit_failures.is_empty()
            && self.reclassification_failures.is_empty()
            && self.spectral_failures.is_empty()
    }
}

fn mask_to_jumps(mask: u64) -> Vec<u64> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

fn jumps_to_mask(jumps: &[u64]) -> u64 {
    jumps.iter().fold(0, |acc, &r| acc | 1 << (r - 1))
}

#[derive(Default)]
struct Partial {
    stats: ScanStats,
    /// (r, s) -> smallest t mapping r onto s.
    found: BTreeMap<(Vec<u64>, Vec<u64>), u64>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.stats.sets_scanned += other.stats.sets_scanned;
        self.stats.theta_applications += other.stats.theta_applications;
        self.stats.circulant_hits += other.stats.circulant_hits;
        for (k, t) in other.found {
            self.found
                .entry(k)
                .and_modify(|e| *e = (*e).min(t))
                .or_insert(t);
        }
        self
    }
}

fn scan_range(n: Modulus, m: u64, min_size: usize, lo: u64, hi: u64) -> Result<Partial> {
    let half = n.half();
    let multiples = (1..=half)
        .filter(|r| r % m == 0)
        .fold(0u64, |acc, r| acc | 1 << (r - 1));
    let shifts: Vec<ThetaParams> = (1..n.get() / m)
        .map(|t| ThetaParams::new(n, m, t))
        .collect::<Result<_>>()?;
    let unit_list = units(n);
    let mut part = Partial::default();
    for mask in lo..hi {
        if (mask.count_ones() as usize) < min_size || mask & multiples == 0 {
            continue;
        }
        part.stats.sets_scanned += 1;
        let c = ConnectionSet::from_sorted_unchecked(n, mask_to_jumps(mask));
        let mut adam: Option<BTreeSet<u64>> = None;
        for params in &shifts {
            part.stats.theta_applications += 1;
            let Some(s) = image_circulant(*params, &c) else {
                continue;
            };
            part.stats.circulant_hits += 1;
            if s == c {
                continue;
            }
            let orbit_masks = adam.get_or_insert_with(|| {
                unit_list
                    .iter()
                    .map(|x| jumps_to_mask(multiply_unchecked(&c, x).jumps()))
                    .collect()
            });
            let s_mask = jumps_to_mask(s.jumps());
            if orbit_masks.contains(&s_mask) {
                continue;
            }
            let (key, t) = if c.jumps() < s.jumps() {
                ((c.jumps().to_vec(), s.jumps().to_vec()), params.t())
            } else {
                (
                    (s.jumps().to_vec(), c.jumps().to_vec()),
                    params.inverse().t(),
                )
            };
            part.found
                .entry(key)
                .and_modify(|e| *e = (*e).min(t))
                .or_insert(t);
        }
    }
    Ok(part)
}

fn core_of(jumps: &[u64], m: u64) -> Vec<u64> {
    jumps.iter().copied().filter(|r| r % m != 0).collect()
}

/// Jumps not divisible by `m`, as an unordered pair.
fn core_pair(r: &[u64], s: &[u64], m: u64) -> (Vec<u64>, Vec<u64>) {
    let (a, b) = (core_of(r, m), core_of(s, m));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Scans every `R ⊆ [1, floor(n/2)]` with `|R| >= min_size` and a jump
/// divisible by `m`, applying `theta_{n,m,t}` for `t in 1..n/m`.
pub fn enumerate(n: Modulus, m: u64, options: &EnumerationOptions) -> Result<EnumerationReport> {
    if !is_theta_modulus(n, m) {
        return Err(Error::InvalidThetaModulus { n: n.get(), m });
    }
    let half = n.half();
    if half > 63 {
        return Err(Error::ScanTooLarge(n.get()));
    }
    let total = 1u64 << half;
    let chunk = (total / 256).max(1);
    let ranges: Vec<(u64, u64)> = (0..total)
        .step_by(chunk as usize)
        .map(|lo| (lo, (lo + chunk).min(total)))
        .collect();
    let min_size = options.min_size;
    let run = || -> Result<Partial> {
        ranges
            .par_iter()
            .map(|&(lo, hi)| scan_range(n, m, min_size, lo, hi))
            .try_reduce(Partial::default, |a, b| Ok(a.merge(b)))
    };
    let partial = match options.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Parse(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };

    let mut stats = partial.stats;
    stats.exhaustive_pair_count = partial.found.len();
    stats.seed_size = partial.found.keys().map(|(r, _)| r.len()).min();

    let seeds: Option<BTreeSet<(Vec<u64>, Vec<u64>)>> = match options.scope {
        EnumerationScope::Exhaustive => None,
        EnumerationScope::SeedClosure => Some(
            partial
                .found
                .keys()
                .filter(|(r, _)| Some(r.len()) == stats.seed_size)
                .map(|(r, s)| core_pair(r, s, m))
                .collect(),
        ),
    };
    let pairs: Vec<Type2Pair> = partial
        .found
        .into_iter()
        .filter(|((r, s), _)| {
            seeds
                .as_ref()
                .is_none_or(|seeds| seeds.contains(&core_pair(r, s, m)))
        })
        .map(|((r, s), t)| Type2Pair { r, s, m, t })
        .collect();
    let classes = build_classes(&pairs);

    Ok(EnumerationReport {
        n: n.get(),
        m,
        scope: options.scope,
        min_size,
        pair_count: pairs.len(),
        pairs,
        classes,
        scan_stats: stats,
    })
}

/// Connected components of the pair graph.
fn build_classes(pairs: &[Type2Pair]) -> Vec<IsoClass> {
    let mut index: BTreeMap<&[u64], usize> = BTreeMap::new();
    for p in pairs {
        for set in [&p.r, &p.s] {
            let next = index.len();
            index.entry(set.as_slice()).or_insert(next);
        }
    }
    let mut parent: Vec<usize> = (0..index.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in pairs {
        let (a, b) = (index[p.r.as_slice()], index[p.s.as_slice()]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vec<u64>>> = BTreeMap::new();
    for (set, &i) in &index {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(set.to_vec());
    }
    let mut classes: Vec<IsoClass> = groups
        .into_values()
        .map(|mut members| {
            members.sort();
            IsoClass { members }
        })
        .collect();
    classes.sort();
    classes
}

/// Parameters `(p, n, x, y)` of an order-`np^3` family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub p: u64,
    pub n: u64,
    pub x: u64,
    pub y: u64,
}

impl FamilyParams {
    pub fn new(p: u64, n: u64, x: u64, y: u64) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidFamily(format!("p = {p} is not an odd prime")));
        }
        if n == 0 {
            return Err(Error::InvalidFamily("n must be positive".into()));
        }
        if x == 0 || x >= p {
            return Err(Error::InvalidFamily(format!(
                "x = {x} outside [1, {}]",
                p - 1
            )));
        }
        if y > n * p - 1 {
            return Err(Error::InvalidFamily(format!(
                "y = {y} outside [0, {}]",
                n * p - 1
            )));
        }
        let offset = x + y * p;
        if offset > n * p * p - 1 {
            return Err(Error::InvalidFamily(format!(
                "x + yp = {offset} outside [1, {}]",
                n * p * p - 1
            )));
        }
        Modulus::new(n * p * p * p)?;
        Ok(Self { p, n, x, y })
    }

    pub fn order(&self) -> u64 {
        self.n * self.p.pow(3)
    }

    /// `d_i = (i - 1) x p n + x + y p`, for `i` in `1..=p`.
    pub fn d(&self, i: u64) -> u64 {
        (i - 1) * self.x * self.p * self.n + self.x + self.y * self.p
    }

    /// The listed multiset for member `i` before reduction:
    /// `p, d, k n p^2 ± d (k = 1..p-1), n p^3 - d, n p^3 - p`.
    pub fn raw_values(&self, i: u64) -> Vec<i64> {
        let d = self.d(i) as i64;
        let block = (self.n * self.p * self.p) as i64;
        let order = self.order() as i64;
        let mut values = vec![self.p as i64, d];
        for k in 1..self.p as i64 {
            values.push(k * block - d);
            values.push(k * block + d);
        }
        values.push(order - d);
        values.push(order - self.p as i64);
        values
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} n={} x={} y={}", self.p, self.n, self.x, self.y)
    }
}

/// The `p` connection sets of order `np^3`, indexed `1..=p`.
pub fn family_generate(fp: &FamilyParams) -> Result<Vec<ConnectionSet>> {
    let order = Modulus::new(fp.order())?;
    (1..=fp.p)
        .map(|i| ConnectionSet::from_values(order, fp.raw_values(i)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyWitness {
    pub i: u64,
    pub j: u64,
    pub t: u64,
    pub image: Option<ConnectionSet>,
    pub expected: ConnectionSet,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyVerification {
    pub params: FamilyParams,
    pub sets: Vec<ConnectionSet>,
    pub table: Vec<FamilyWitness>,
    /// No two members are related by a unit multiple.
    pub type1_free: bool,
    pub holds: bool,
}

/// Checks `theta_{np^3, p, jn}(R_i) = R_{i+j}` (indices mod `p`) for all
/// `i, j` in `1..=p`, and that no pair of members is Type-1 related.
pub fn family_verify(fp: &FamilyParams) -> Result<FamilyVerification> {
    let sets = family_generate(fp)?;
    let order = Modulus::new(fp.order())?;
    let p = fp.p as usize;
    let mut table = Vec::with_capacity(p * p);
    for i in 1..=fp.p {
        for j in 1..=fp.p {
            let t = j * fp.n;
            let params = ThetaParams::new(order, fp.p, t)?;
            let image = apply(params, &sets[(i - 1) as usize])?.circulant_result;
            let expected = sets[((i + j - 1) % fp.p) as usize].clone();
            let holds = image.as_ref() == Some(&expected);
            table.push(FamilyWitness {
                i,
                j,
                t,
                image,
                expected,
                holds,
            });
        }
    }
    let mut type1_free = true;
    for a in 0..p {
        for b in a + 1..p {
            if sets[a] == sets[b] || type1_witness(&sets[a], &sets[b])?.is_some() {
                type1_free = false;
            }
        }
    }
    debug_assert!(sets.iter().all(|s| orbit(s).contains(s)));
    let holds = type1_free && table.iter().all(|w| w.holds);
    Ok(FamilyVerification {
        params: *fp,
        sets,
        table,
        type1_free,
        holds,
    })
}
