use serde::{Deserialize, Serialize};

use super::{certify, CertifyOptions, Polarization, StabilityError};
use crate::cohom::{CohomResult, CohomValue, TailSpec};
use crate::k3lat::{quartic_region_run, Candidate, EffectivityOutcome, EffectivityRule};
use crate::monad::{ChernData, MonadDocument, SurfaceDocument};
use crate::poly::MultiDegree;

/// Everything needed to recompute a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Subject {
    Monad { monad: MonadDocument, polarization: Polarization, options: CertifyOptions },
    Quartic { surface: SurfaceDocument, monad: MonadDocument, polarization: Polarization },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionReport {
    pub s: i64,
    /// `-s·μ` as a fraction.
    pub bound: String,
    pub degree_bound: i64,
    /// Largest component value handed to the tail along each axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bounds: Option<[i64; 2]>,
    pub core: Vec<MultiDegree>,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreCheck {
    pub s: i64,
    pub twist: MultiDegree,
    pub result: CohomResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailRule {
    pub spec: TailSpec,
    pub covers: String,
    pub result: CohomResult,
}

/// Vanishing at `from` implies vanishing at every smaller twist: multiplying
/// by a nonzero section of the difference is injective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Propagation {
    pub s: i64,
    pub from: MultiDegree,
    pub to: String,
    /// Covered twists, when finitely many; empty with `unbounded` for a half-line.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<MultiDegree>,
    #[serde(default)]
    pub unbounded: bool,
}

impl Propagation {
    pub fn covers(&self, twist: &MultiDegree) -> bool {
        twist.le(&self.from) && (self.unbounded || self.points.contains(twist))
    }
}

/// An effectivity rule applied to a whole family of divisor classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRule {
    pub s: i64,
    pub description: String,
    /// Range of `D·H` covered, inclusive; `None` below means unbounded.
    pub min_degree: Option<i64>,
    pub max_degree: i64,
    pub rule: EffectivityRule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Candidate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectivityCheck {
    pub twist: MultiDegree,
    pub class: Vec<i64>,
    pub outcome: EffectivityOutcome,
}

/// Which rule justifies each region point inside a finite window.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageAudit {
    pub s: i64,
    pub window: String,
    pub points: usize,
    pub by_core: usize,
    pub by_propagation: usize,
    pub by_tail: usize,
    pub by_stratum: usize,
    pub uncovered: Vec<MultiDegree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    /// The sufficient criterion could not be completed. Not a claim of instability.
    Inconclusive {
        reason: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twist: Option<MultiDegree>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        value: Option<CohomValue>,
    },
}

impl Verdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, Verdict::Stable)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    pub bundle: String,
    pub chern: ChernData,
    pub real: bool,
    pub slope: String,
    pub regions: Vec<RegionReport>,
    pub core_checks: Vec<CoreCheck>,
    pub tail_rules: Vec<TailRule>,
    pub monotone_propagations: Vec<Propagation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strata: Vec<StratumRule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub effectivity_checks: Vec<EffectivityCheck>,
    pub coverage: Vec<CoverageAudit>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    pub subject: Subject,
}

impl StabilityCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn summary(&self) -> String {
        let mut out = format!("bundle: {}\nrank: {}, c1: {}, c2: {}\nslope: {}\n", self.bundle, self.chern.rank, self.chern.c1, self.chern.c2, self.slope);
        for r in &self.regions {
            out += &format!("s={}: {}\n", r.s, r.description);
        }
        for c in &self.core_checks {
            out += &format!("  core s={} at {}: h0 = {} ({:?})\n", c.s, c.twist, c.result.value, c.result.method);
        }
        for t in &self.tail_rules {
            out += &format!("  tail s={}: {}\n", t.spec.s, t.covers);
        }
        for p in &self.monotone_propagations {
            out += &format!("  propagation s={} from {}: {}\n", p.s, p.from, p.to);
        }
        for st in &self.strata {
            out += &format!("  stratum: {}\n", st.description);
        }
        for a in &self.coverage {
            out += &format!(
                "  coverage s={} over {}: {} points ({} core, {} propagated, {} tail, {} stratum), {} uncovered\n",
                a.s, a.window, a.points, a.by_core, a.by_propagation, a.by_tail, a.by_stratum, a.uncovered.len()
            );
        }
        out += &match &self.verdict {
            Verdict::Stable => "verdict: stable\n".to_string(),
            Verdict::Inconclusive { reason, .. } => format!("verdict: inconclusive ({reason})\n"),
        };
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub mismatches: Vec<String>,
}

/// Recompute a certificate from its recorded subject and compare every field.
pub fn verify(cert: &StabilityCertificate) -> Result<VerifyReport, StabilityError> {
    let fresh = match &cert.subject {
        Subject::Monad { monad, polarization, options } => certify(&monad.build()?, polarization, options)?,
        Subject::Quartic { surface, monad, polarization } => quartic_region_run(surface, monad, polarization)?,
    };
    let mut mismatches = Vec::new();
    macro_rules! cmp {
        ($($f:ident),*) => {$(
            if fresh.$f != cert.$f {
                mismatches.push(stringify!($f).to_string());
            }
        )*};
    }
    cmp!(bundle, chern, real, slope, regions, core_checks, tail_rules, monotone_propagations, strata, effectivity_checks, coverage, verdict);
    for c in &cert.core_checks {
        if c.result.witness.matrices.iter().any(|w| !w.audit()) {
            mismatches.push(format!("core check at {} has an inconsistent rank witness", c.twist));
        }
    }
    Ok(VerifyReport { ok: mismatches.is_empty(), mismatches })
}
