//! Circulant graph isomorphism toolkit.
//!
//! Connection sets `C_n(R)` are compared after reflexive reduction mod `n`.
//! Two isomorphism mechanisms are implemented: unit multiplication of the
//! jump set (Adam / Type-1) and the class-dependent rotation `theta_{n,m,t}`
//! (Type-2 w.r.t. `m`). An exhaustive enumerator finds every Type-2 pair at
//! desk-scale orders, and a brute-force oracle provides ground truth for
//! small graphs.
//!
//! Spectral quantities are generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the usual `f64` choice.

pub mod adam;
pub mod circulant;
pub mod classify;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod modring;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod theta;

pub use adam::{multiply, orbit, type1_witness, AdamOrbit};
pub use circulant::{ConnectionSet, EdgeSet};
pub use classify::{classify_pair, extend_pair, type2_partners, PairClassification, Type2Partner};
pub use enumerate::{
    enumerate, family_generate, family_verify, EnumerationOptions, EnumerationReport,
    EnumerationScope, FamilyParams, FamilyVerification, IsoClass, Type2Pair,
};
pub use error::{Error, Result};
pub use modring::{reflexive_reduce, units, valid_type2_moduli, Modulus, UnitGroup};
pub use oracle::{brute_force_isomorphic, cross_validate, fingerprint, IsoWitness};
pub use scalar::Real;
pub use theta::{apply, detect_circulant, jump_shortcut, ThetaImage, ThetaParams};

/// Sorted circulant spectrum in double precision.
pub type Spectrum = Vec<f64>;
/// Sorted circulant spectrum in single precision.
pub type Spectrum32 = Vec<f32>;
/// Isomorphism-invariant fingerprint with an `f64` spectrum.
pub type Fingerprint = oracle::Fingerprint<f64>;
/// Isomorphism-invariant fingerprint with an `f32` spectrum.
pub type Fingerprint32 = oracle::Fingerprint<f32>;
