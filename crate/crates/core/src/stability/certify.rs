use std::thread;

use serde::{Deserialize, Serialize};

use super::certificate::{CoreCheck, CoverageAudit, Propagation, RegionReport, StabilityCertificate, Subject, TailRule, Verdict};
use super::{floor_div, slope, twist_region, Polarization, StabilityError};
use crate::cohom::{h0_bundle, tail_vanish, CohomError, CohomResult, TailSpec};
use crate::monad::{chern_monad, validate, MonadComplex, MonadDocument, MonadKind};
use crate::poly::{AmbientKind, MultiDegree};

/// How many twists of the finite core are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreMode {
    /// Every core twist.
    #[default]
    Full,
    /// Only the maximal core twists; the rest by monotone propagation.
    Maximal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CertifyOptions {
    pub core_mode: CoreMode,
    /// Fix the core floor at `bound - margin` instead of searching for the
    /// first vanishing fiber.
    pub margin: Option<i64>,
    pub fiber_point: (i64, i64),
    /// Half-width of the coverage audit window beyond the core.
    pub audit_window: i64,
    /// Workers for the core checks. Does not affect the result.
    #[serde(skip)]
    pub threads: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { core_mode: CoreMode::Full, margin: None, fiber_point: (0, 1), audit_window: 6, threads: 1 }
    }
}

/// How far below `-1` the tail search looks for a vanishing fiber.
const TAIL_SEARCH_DEPTH: i64 = 64;

struct Phase {
    region: RegionReport,
    checks: Vec<CoreCheck>,
    tails: Vec<TailRule>,
    props: Vec<Propagation>,
    audit: CoverageAudit,
    failure: Option<Verdict>,
}

/// Certify stability by vanishing of `h^0(Λ^s E ⊗ L)` on the twist region
/// of each `s`, or return an inconclusive certificate.
pub fn certify(m: &MonadComplex, h: &Polarization, opts: &CertifyOptions) -> Result<StabilityCertificate, StabilityError> {
    let report = validate(m);
    if !report.passes() {
        return Err(StabilityError::Invalid(report.summary()));
    }
    let kind = m.ambient().kind();
    match (kind, h) {
        (AmbientKind::Projective(_), Polarization::Ambient { kind: k, .. })
        | (AmbientKind::ProductProjective(1, 1), Polarization::Ambient { kind: k, .. })
            if *k == kind => {}
        _ => {
            return Err(StabilityError::Unsupported(format!(
                "certification on {} with polarization {h:?}",
                m.ambient()
            )))
        }
    }
    let chern = chern_monad(m)?;
    let mu = slope(&chern, h)?;
    let mut phases = Vec::new();
    for s in 1..chern.rank {
        if m.kind() == MonadKind::Homology && s > 1 {
            return Err(StabilityError::Unsupported(format!("exterior power {s} of a homology monad")));
        }
        let region = twist_region(&chern, s, h)?;
        let phase = match kind {
            AmbientKind::Projective(_) => projective_phase(m, s, region.degree_bound, &region.bound, h, opts)?,
            _ => product_phase(m, s, region.degree_bound, &region.bound, h, opts)?,
        };
        phases.push(phase);
    }
    let mut verdict = Verdict::Stable;
    for p in &phases {
        if let Some(f) = &p.failure {
            verdict = f.clone();
            break;
        }
        if !p.audit.uncovered.is_empty() {
            verdict = Verdict::Inconclusive {
                reason: format!("{} region twists lack a justification", p.audit.uncovered.len()),
                twist: p.audit.uncovered.first().copied(),
                value: None,
            };
            break;
        }
    }
    let mut notes = vec![
        "only slope stability is certified; slope stable bundles are also Gieseker stable".to_string(),
        "a nonzero h0 means the sufficient criterion does not apply, not that the bundle is unstable".to_string(),
    ];
    if let Some(ExactnessNote(n)) = exactness_note(&report.surjectivity_b) {
        notes.push(n);
    }
    let bundle = m.name.clone().unwrap_or_else(|| "E".into());
    let mut cert = StabilityCertificate {
        bundle,
        chern,
        real: m.is_real(),
        slope: mu.to_string(),
        regions: Vec::new(),
        core_checks: Vec::new(),
        tail_rules: Vec::new(),
        monotone_propagations: Vec::new(),
        strata: Vec::new(),
        effectivity_checks: Vec::new(),
        coverage: Vec::new(),
        verdict,
        notes,
        subject: Subject::Monad { monad: MonadDocument::of(m), polarization: h.clone(), options: opts.clone() },
    };
    for p in phases {
        cert.regions.push(p.region);
        cert.core_checks.extend(p.checks);
        cert.tail_rules.extend(p.tails);
        cert.monotone_propagations.extend(p.props);
        cert.coverage.push(p.audit);
    }
    Ok(cert)
}

struct ExactnessNote(String);

fn exactness_note(s: &crate::monad::ExactnessStatus) -> Option<ExactnessNote> {
    match s {
        crate::monad::ExactnessStatus::ProvedByRandomizedRank { trials } => Some(ExactnessNote(format!(
            "surjectivity of b rests on full rank at {trials} random points, not on a proof"
        ))),
        _ => None,
    }
}

/// Compute `h^0` at each twist, in parallel, preserving order.
fn run_checks(m: &MonadComplex, s: i64, twists: &[MultiDegree], threads: usize) -> Result<Vec<CoreCheck>, CohomError> {
    let one = |t: &MultiDegree| h0_bundle(m, s as usize, t, true);
    let results: Vec<Result<CohomResult, CohomError>> = if threads <= 1 || twists.len() <= 1 {
        twists.iter().map(one).collect()
    } else {
        let chunk = twists.len().div_ceil(threads);
        thread::scope(|scope| {
            let handles: Vec<_> =
                twists.chunks(chunk).map(|part| scope.spawn(move || part.iter().map(one).collect::<Vec<_>>())).collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    twists
        .iter()
        .zip(results)
        .map(|(t, r)| r.map(|result| CoreCheck { s, twist: *t, result }))
        .collect()
}

fn first_failure(checks: &[CoreCheck]) -> Option<Verdict> {
    checks.iter().find(|c| !c.result.vanishes()).map(|c| Verdict::Inconclusive {
        reason: format!("h0 of the twist by {} for s = {} is {}, not 0", c.twist, c.s, c.result.value),
        twist: Some(c.twist),
        value: Some(c.result.value),
    })
}

fn projective_phase(
    m: &MonadComplex,
    s: i64,
    beta: i64,
    bound: &str,
    h: &Polarization,
    opts: &CertifyOptions,
) -> Result<Phase, StabilityError> {
    let hdeg = h.degree(&MultiDegree::new1(1));
    let kmax = floor_div(beta, hdeg);
    let top = MultiDegree::new1(kmax);
    let checks = run_checks(m, s, &[top], 1)?;
    let failure = first_failure(&checks);
    let props = vec![Propagation {
        s,
        from: top,
        to: format!("every k <= {kmax}"),
        points: Vec::new(),
        unbounded: true,
    }];
    let lo = kmax - opts.audit_window;
    let mut audit = CoverageAudit { s, window: format!("k in [{lo}, {}]", kmax + opts.audit_window), ..Default::default() };
    for k in lo..=kmax + opts.audit_window {
        let t = MultiDegree::new1(k);
        if h.degree(&t) > beta {
            continue;
        }
        audit.points += 1;
        if k == kmax {
            audit.by_core += 1;
        } else if props[0].covers(&t) {
            audit.by_propagation += 1;
        } else {
            audit.uncovered.push(t);
        }
    }
    let region = RegionReport {
        s,
        bound: bound.to_string(),
        degree_bound: beta,
        tail_bounds: None,
        core: vec![top],
        description: format!("deg <= {bound}: k <= {kmax}"),
    };
    Ok(Phase { region, checks, tails: Vec::new(), props, audit, failure })
}

fn product_phase(
    m: &MonadComplex,
    s: i64,
    beta: i64,
    bound: &str,
    h: &Polarization,
    opts: &CertifyOptions,
) -> Result<Phase, StabilityError> {
    // deg(k,l) = k·wk + l·wl
    let wk = h.degree(&MultiDegree::new2(1, 0));
    let wl = h.degree(&MultiDegree::new2(0, 1));
    let mut tails = Vec::new();
    let mut tail_bounds = [0i64; 2];
    for surviving in 0..2usize {
        let fixed_axis = 2 - surviving;
        let candidates: Vec<i64> = match opts.margin {
            Some(mg) => vec![beta - mg - 1],
            None => (1..=TAIL_SEARCH_DEPTH).map(|d| -d).collect(),
        };
        let mut found = None;
        let mut last_err = None;
        for t in candidates {
            let spec = TailSpec { s: s as usize, fixed_axis, free_axis_bound: t, point: opts.fiber_point };
            match tail_vanish(m, &spec) {
                Ok(result) => {
                    found = Some((spec, result));
                    break;
                }
                Err(e @ (CohomError::FiberNotVanishing { .. } | CohomError::NoTerminalBound(_))) => last_err = Some(e),
                Err(e) => return Err(e.into()),
            }
        }
        match found {
            Some((spec, result)) => {
                tail_bounds[surviving] = spec.free_axis_bound;
                let name = if surviving == 0 { "k" } else { "l" };
                let covers = format!("{name} <= {} (any other component)", spec.free_axis_bound);
                tails.push(TailRule { spec, covers, result });
            }
            None => {
                let region = RegionReport {
                    s,
                    bound: bound.to_string(),
                    degree_bound: beta,
                    tail_bounds: None,
                    core: Vec::new(),
                    description: format!("deg <= {bound}"),
                };
                let reason = format!(
                    "no fiber descent tail along axis {fixed_axis}: {}",
                    last_err.map(|e| e.to_string()).unwrap_or_default()
                );
                return Ok(Phase {
                    region,
                    checks: Vec::new(),
                    tails,
                    props: Vec::new(),
                    audit: CoverageAudit { s, ..Default::default() },
                    failure: Some(Verdict::Inconclusive { reason, twist: None, value: None }),
                });
            }
        }
    }
    let (k0, l0) = (tail_bounds[0] + 1, tail_bounds[1] + 1);
    let in_core = |k: i64, l: i64| k >= k0 && l >= l0 && k * wk + l * wl <= beta;
    let mut core = Vec::new();
    if l0 * wl <= beta - k0 * wk {
        for k in k0..=floor_div(beta - l0 * wl, wk) {
            for l in l0..=floor_div(beta - k * wk, wl) {
                core.push(MultiDegree::new2(k, l));
            }
        }
    }
    let evaluated: Vec<MultiDegree> = match opts.core_mode {
        CoreMode::Full => core.clone(),
        CoreMode::Maximal => core.iter().copied().filter(|t| !in_core(t[0] + 1, t[1]) && !in_core(t[0], t[1] + 1)).collect(),
    };
    let checks = run_checks(m, s, &evaluated, opts.threads.max(1))?;
    let failure = first_failure(&checks);
    let mut props = Vec::new();
    if opts.core_mode == CoreMode::Maximal && failure.is_none() {
        let mut assigned: Vec<MultiDegree> = evaluated.clone();
        for c in &checks {
            let points: Vec<MultiDegree> =
                core.iter().copied().filter(|p| p.le(&c.twist) && !assigned.contains(p)).collect();
            assigned.extend(points.iter().copied());
            if !points.is_empty() {
                props.push(Propagation {
                    s,
                    from: c.twist,
                    to: format!("{} core twists below {}", points.len(), c.twist),
                    points,
                    unbounded: false,
                });
            }
        }
    }
    let w = opts.audit_window;
    let (kmax, lmax) = (floor_div(beta - l0 * wl, wk).max(k0), floor_div(beta - k0 * wk, wl).max(l0));
    let (klo, khi, llo, lhi) = (tail_bounds[0] - w, kmax + w, tail_bounds[1] - w, lmax + w);
    let mut audit =
        CoverageAudit { s, window: format!("k in [{klo}, {khi}], l in [{llo}, {lhi}]"), ..Default::default() };
    let computed_zero = |t: &MultiDegree| checks.iter().any(|c| c.twist == *t && c.result.vanishes());
    for k in klo..=khi {
        for l in llo..=lhi {
            let t = MultiDegree::new2(k, l);
            if k * wk + l * wl > beta {
                continue;
            }
            audit.points += 1;
            if computed_zero(&t) {
                audit.by_core += 1;
            } else if props.iter().any(|p| p.covers(&t)) {
                audit.by_propagation += 1;
            } else if tails.iter().any(|r| r.spec.covers(&t)) {
                audit.by_tail += 1;
            } else {
                audit.uncovered.push(t);
            }
        }
    }
    if failure.is_some() {
        // the failing twist is reported by the verdict; coverage is moot
        audit.uncovered.clear();
    }
    let description = format!(
        "deg <= {bound}: core of {} twists with k >= {k0}, l >= {l0}; tails k <= {} and l <= {}",
        core.len(),
        tail_bounds[0],
        tail_bounds[1]
    );
    let region = RegionReport { s, bound: bound.to_string(), degree_bound: beta, tail_bounds: Some(tail_bounds), core, description };
    Ok(Phase { region, checks, tails, props, audit, failure })
}
