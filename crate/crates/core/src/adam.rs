//! Adam (Type-1) isomorphism: multiplying a jump set by a unit of `Z_n`.

use std::collections::BTreeMap;

use crate::circulant::ConnectionSet;
use crate::error::{Error, Result};
use crate::modring::{reflexive_reduce, units};

/// `C_n(xR)` for a unit `x`.
pub fn multiply(c: &ConnectionSet, x: u64) -> Result<ConnectionSet> {
    let n = c.modulus();
    let x = x % n.get();
    if !n.is_unit(x) {
        return Err(Error::NotAUnit { x, n: n.get() });
    }
    Ok(multiply_unchecked(c, x))
}

pub(crate) fn multiply_unchecked(c: &ConnectionSet, x: u64) -> ConnectionSet {
    let n = c.modulus();
    let jumps = reflexive_reduce(n, c.jumps().iter().map(|&r| n.mul(x, r) as i64));
    debug_assert_eq!(jumps.len(), c.len());
    ConnectionSet::from_sorted_unchecked(n, jumps)
}

/// The orbit `Ad_n(C_n(R))` with the smallest unit producing each member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdamOrbit {
    base: ConnectionSet,
    witness: BTreeMap<ConnectionSet, u64>,
}

impl AdamOrbit {
    pub fn base(&self) -> &ConnectionSet {
        &self.base
    }

    /// Members in sorted order.
    pub fn members(&self) -> impl Iterator<Item = &ConnectionSet> {
        self.witness.keys()
    }

    pub fn len(&self) -> usize {
        self.witness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witness.is_empty()
    }

    pub fn contains(&self, c: &ConnectionSet) -> bool {
        self.witness.contains_key(c)
    }

    pub fn witness(&self, c: &ConnectionSet) -> Option<u64> {
        self.witness.get(c).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ConnectionSet, u64)> {
        self.witness.iter().map(|(c, &x)| (c, x))
    }
}

pub fn orbit(c: &ConnectionSet) -> AdamOrbit {
    let mut witness = BTreeMap::new();
    for x in units(c.modulus()).iter() {
        witness.entry(multiply_unchecked(c, x)).or_insert(x);
    }
    AdamOrbit {
        base: c.clone(),
        witness,
    }
}

/// Smallest unit `x` with `C_n(xA) = C_n(B)`, if any.
pub fn type1_witness(a: &ConnectionSet, b: &ConnectionSet) -> Result<Option<u64>> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    if a.len() != b.len() {
        return Ok(None);
    }
    Ok(units(a.modulus())
        .iter()
        .find(|&x| multiply_unchecked(a, x) == *b))
}

/// The vertex permutation `v -> x v mod n` realizing a Type-1 isomorphism.
pub fn unit_permutation(n: u64, x: u64) -> Vec<usize> {
    (0..n).map(|v| (v * (x % n) % n) as usize).collect()
}
