//! Slopes, twist regions and stability certificates via vanishing of
//! sections of twisted exterior powers.

mod certificate;
mod certify;
mod transfer;

pub use certificate::{
    verify, CoreCheck, CoverageAudit, EffectivityCheck, Propagation, RegionReport, StabilityCertificate, StratumRule,
    Subject, TailRule, Verdict, VerifyReport,
};
pub use certify::{certify, CertifyOptions, CoreMode};
pub use transfer::{pullback_degree, pullback_transfer, TransferRule, TransferredStatement};

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohom::CohomError;
use crate::k3lat::{pair, GramLattice, LatticeClass, LatticeDocument, LatticeError};
use crate::monad::{ChernData, MonadError};
use crate::poly::{Ambient, AmbientKind, MultiDegree};

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("slope of a rank-zero sheaf")]
    ZeroRank,
    #[error("polarization is not ample: {0}")]
    NotAmple(String),
    #[error("exterior power {s} out of range 1..={max}")]
    BadExterior { s: i64, max: i64 },
    #[error("monad fails validation: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Cohom(#[from] CohomError),
    #[error(transparent)]
    Monad(#[from] MonadError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// An ample class: a twist on `P^n` / `P^1 x P^1`, or a lattice class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolarizationDocument", into = "PolarizationDocument")]
pub enum Polarization {
    Ambient { kind: AmbientKind, class: MultiDegree },
    Lattice { class: LatticeClass },
}

/// Serialized polarization. Ambient polarizations omit the lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<AmbientKindDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeDocument>,
    pub class: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AmbientKindDoc {
    Projective { dim: usize },
    ProductProjective { dims: [usize; 2] },
}

impl TryFrom<PolarizationDocument> for Polarization {
    type Error = StabilityError;
    fn try_from(d: PolarizationDocument) -> Result<Self, StabilityError> {
        match (d.ambient, d.lattice) {
            (Some(a), None) => {
                let kind = match a {
                    AmbientKindDoc::Projective { dim } => AmbientKind::Projective(dim),
                    AmbientKindDoc::ProductProjective { dims } => AmbientKind::ProductProjective(dims[0], dims[1]),
                };
                if d.class.is_empty() || d.class.len() > 2 {
                    return Err(StabilityError::NotAmple(format!("class {:?}", d.class)));
                }
                Polarization::on_ambient(kind, MultiDegree::from_slice(&d.class))
            }
            (None, Some(l)) => {
                let lat = Arc::new(GramLattice::try_from(l)?);
                Polarization::on_lattice(LatticeClass::new(&lat, d.class)?)
            }
            _ => Err(StabilityError::NotAmple("give exactly one of `ambient` and `lattice`".into())),
        }
    }
}

impl From<Polarization> for PolarizationDocument {
    fn from(p: Polarization) -> Self {
        match p {
            Polarization::Ambient { kind, class } => PolarizationDocument {
                ambient: Some(match kind {
                    AmbientKind::Projective(dim) => AmbientKindDoc::Projective { dim },
                    AmbientKind::ProductProjective(a, b) => AmbientKindDoc::ProductProjective { dims: [a, b] },
                }),
                lattice: None,
                class: class.as_slice().to_vec(),
            },
            Polarization::Lattice { class } => PolarizationDocument {
                ambient: None,
                lattice: Some(class.lattice().to_document()),
                class: class.coords().to_vec(),
            },
        }
    }
}

impl Polarization {
    /// Ample twist: every component positive.
    pub fn on_ambient(kind: AmbientKind, class: MultiDegree) -> Result<Self, StabilityError> {
        let arity = match kind {
            AmbientKind::Projective(_) => 1,
            AmbientKind::ProductProjective(..) => 2,
        };
        if class.arity() != arity || class.as_slice().iter().any(|&c| c <= 0) {
            return Err(StabilityError::NotAmple(format!("O{class} on {kind:?}")));
        }
        Ok(Polarization::Ambient { kind, class })
    }

    pub fn for_ambient(ambient: &Ambient, class: MultiDegree) -> Result<Self, StabilityError> {
        Self::on_ambient(ambient.kind(), class)
    }

    /// `O(1)` or `O(1,1)`.
    pub fn standard(ambient: &Ambient) -> Self {
        let class = MultiDegree::from_slice(&vec![1; ambient.arity()]);
        Self::for_ambient(ambient, class).expect("ample")
    }

    /// Only positivity of `H^2` is checked for lattice classes.
    pub fn on_lattice(class: LatticeClass) -> Result<Self, StabilityError> {
        let sq = pair(&class, &class)?;
        if sq <= 0 {
            return Err(StabilityError::NotAmple(format!("{class} has square {sq}")));
        }
        Ok(Polarization::Lattice { class })
    }

    pub fn self_intersection(&self) -> i64 {
        match self {
            Polarization::Ambient { class, .. } => self.degree(class),
            Polarization::Lattice { class } => pair(class, class).expect("same lattice"),
        }
    }

    /// `deg_H` of a divisor class in the polarization's coordinates.
    pub fn degree(&self, d: &MultiDegree) -> i64 {
        let c = d.as_slice();
        match self {
            Polarization::Ambient { kind: AmbientKind::Projective(_), class } => c[0] * class[0],
            Polarization::Ambient { class, .. } => c[0] * class[1] + c[1] * class[0],
            Polarization::Lattice { class } => {
                let lat = class.lattice();
                lat.form(c, class.coords())
            }
        }
    }

    /// The same polarization multiplied by `m > 0`.
    pub fn scaled(&self, m: i64) -> Self {
        assert!(m > 0);
        match self {
            Polarization::Ambient { kind, class } => Polarization::Ambient { kind: *kind, class: class.scale(m) },
            Polarization::Lattice { class } => Polarization::Lattice { class: class.scale(m) },
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Polarization::Ambient { class, .. } => class.arity(),
            Polarization::Lattice { class } => class.coords().len(),
        }
    }
}

pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `μ(E) = deg_H(c1) / rank`.
pub fn slope(c: &ChernData, h: &Polarization) -> Result<BigRational, StabilityError> {
    if c.rank == 0 {
        return Err(StabilityError::ZeroRank);
    }
    Ok(rational(h.degree(&c.c1), c.rank))
}

/// Twists `L` with `deg_H(L) <= -s·μ(E)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRegion {
    pub s: i64,
    /// `-s·μ` as an exact fraction.
    pub bound: String,
    /// `⌊-s·μ⌋`; degrees are integers.
    pub degree_bound: i64,
}

impl TwistRegion {
    pub fn contains(&self, h: &Polarization, twist: &MultiDegree) -> bool {
        h.degree(twist) <= self.degree_bound
    }
}

pub fn twist_region(c: &ChernData, s: i64, h: &Polarization) -> Result<TwistRegion, StabilityError> {
    if s < 1 || s > c.rank - 1 {
        return Err(StabilityError::BadExterior { s, max: c.rank - 1 });
    }
    let mu = slope(c, h)?;
    let bound = -mu * BigInt::from(s);
    Ok(TwistRegion { s, bound: bound.to_string(), degree_bound: bound.floor().to_integer().try_into().expect("small") })
}

/// `⌊a / b⌋` for `b > 0`.
pub(crate) fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}
