//! Intersection lattices of K3 surfaces, effectivity obstructions, moduli
//! dimension counts and the quartic surface pipeline.

mod effective;
mod lattice;
mod moduli;
mod quartic;

pub use effective::{
    check_certificate, curve_candidates, not_effective_cert, Candidate, EffectivityCert, EffectivityOutcome,
    EffectivityRule,
};
pub use lattice::{gram_of, genus, pair, self_int, GramLattice, GramReport, LatticeClass, LatticeDocument};
pub use moduli::{expected_dim, expected_dim_on, pullback_chern, rigid_rank2_classes, CoverKind, CoverSpec, PulledBackChern};
pub use quartic::{basepoint_check, quartic_h0, quartic_region_run, QuotientRing};

use thiserror::Error;

use crate::cohom::CohomError;
use crate::monad::MonadError;
use crate::poly::PolyError;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("classes live on different lattices: {0} and {1}")]
    LatticeMismatch(String, String),
    #[error("genus needs an even self-intersection, got {0}")]
    OddSquare(i64),
    #[error("bad Gram matrix: {0}")]
    BadGram(String),
    #[error("expected {expected} coordinates, got {got}")]
    BadCoordinates { expected: usize, got: usize },
    #[error("only hyperplane twists are computed directly; got l = {0}")]
    UnsupportedTwist(i64),
    #[error("the bundle map degenerates on the surface at {0}")]
    BasepointFailure(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Monad(#[from] MonadError),
    #[error(transparent)]
    Cohom(#[from] CohomError),
}
