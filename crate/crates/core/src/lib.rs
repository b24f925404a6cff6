//! Symbolic Chow-motive calculus for fibrations and blow-ups.
//!
//! Correspondences are words in named generators with exact coefficients in
//! `Q(n)`; relations are length-reducing rewrite rules. On top of that sit
//! matrices of correspondences between formal sums of twisted motives,
//! explicit inverses of unitriangular matrices, the fibration and blow-up
//! decompositions, a Poincaré-polynomial shadow and a small rule engine for
//! consequences about niveau and the standard conjectures.

pub mod blowup;
pub mod corr;
pub mod error;
pub mod fibration;
pub mod inference;
pub mod motive;
pub mod realization;
pub mod scalar;
pub mod status;

pub use corr::{Atom, AtomId, GenId, Generator, Presentation, RewriteRule, Strategy, Term, Word};
pub use error::{Error, Result};
pub use motive::{MotiveMorphism, MotiveObject, Summand};
pub use scalar::{Poly, Scalar};
pub use status::{IdentityCheck, Status};

/// Seed for sampled checks when `MOTIVEKIT_SEED` is unset.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// `MOTIVEKIT_SEED` if it parses as a `u64`, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("MOTIVEKIT_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}
