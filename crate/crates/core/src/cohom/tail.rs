use serde::{Deserialize, Serialize};

use super::{exterior_map, h0_bundle, CohomError, CohomResult, CohomValue, Method, Witness};
use crate::monad::{MonadComplex, MonadKind};
use crate::poly::MultiDegree;

/// Parameters of one fiber-descent tail.
///
/// `fixed_axis` (1 or 2) is the variable group set to `point`; the fiber is
/// the surviving `P^1`. The tail covers every twist whose surviving component
/// is at most `free_axis_bound`, whatever the fixed component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailSpec {
    pub s: usize,
    pub fixed_axis: usize,
    pub free_axis_bound: i64,
    pub point: (i64, i64),
}

impl TailSpec {
    /// Index (0-based) of the twist component bounded by this tail.
    pub fn surviving_index(&self) -> usize {
        2 - self.fixed_axis
    }

    pub fn covers(&self, twist: &MultiDegree) -> bool {
        twist[self.surviving_index()] <= self.free_axis_bound
    }
}

/// Certify `h^0(Λ^s F ⊗ O(k,l)) = 0` on a tail of the twist plane.
///
/// Let `D` be the fiber divisor where group `fixed_axis` equals `point`. If
/// `h^0(Λ^s F|_D ⊗ O(t)) = 0` at `t = free_axis_bound` then also for all
/// smaller `t` (on `P^1`, twisting down injects sections). For such `t`,
/// `0 -> G(-D) -> G -> G|_D -> 0` shows `h^0` does not change when the fixed
/// component drops by one, and at a terminal fixed component the ambient
/// bundle `Λ^s B` (plus `H^1(A)` for homology monads) has no sections.
pub fn tail_vanish(m: &MonadComplex, spec: &TailSpec) -> Result<CohomResult, CohomError> {
    let TailSpec { s, fixed_axis, free_axis_bound: t0, point } = *spec;
    if m.kind() == MonadKind::Homology && s != 1 {
        return Err(CohomError::UnsupportedOperation(format!("exterior power {s} of a homology monad")));
    }
    let fiber = m.restrict_to_fiber(fixed_axis, point)?;
    let on_fiber = h0_bundle(&fiber, s, &MultiDegree::new1(t0), true)?;
    if !on_fiber.vanishes() {
        return Err(CohomError::FiberNotVanishing { point, value: on_fiber.value.to_string() });
    }
    let fx = fixed_axis - 1;
    let surv = spec.surviving_index();
    let ambient_twists: Vec<MultiDegree> = if s == 1 || m.c.rank() != 1 {
        if s != 1 {
            return Err(CohomError::UnsupportedCokernelRank(m.c.rank()));
        }
        m.b.twists.clone()
    } else {
        exterior_map(m, s)?.0
    };
    let Some(max_fixed) = ambient_twists.iter().map(|t| t[fx]).max() else {
        return Err(CohomError::NoTerminalBound("bundle has rank zero".into()));
    };
    let mut terminal = -max_fixed - 1;
    if m.kind() == MonadKind::Homology {
        for a in &m.a.twists {
            if a[surv] + t0 >= 0 {
                return Err(CohomError::NoTerminalBound(format!(
                    "h1(A) does not vanish along the tail: A twist {a} with surviving bound {t0}"
                )));
            }
            terminal = terminal.min(-a[fx] - 1);
        }
    }
    let mut witness = Witness { matrices: on_fiber.witness.matrices, ..Witness::default() };
    witness.dims.push(("fiber h0".into(), on_fiber.value.hi()));
    witness.dims.push(("terminal fixed component".into(), terminal));
    witness.notes.push(format!(
        "fiber where group {fixed_axis} = [{}:{}]: h0(Λ^{s} F|fiber ⊗ O({t0})) = 0; h0 is unchanged as component {} \
         decreases and vanishes once it is ≤ {terminal}",
        point.0,
        point.1,
        fx + 1
    ));
    Ok(CohomResult { value: CohomValue::Exact(0), method: Method::FiberDescent, witness })
}
