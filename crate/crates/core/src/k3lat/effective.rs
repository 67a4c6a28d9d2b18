use serde::{Deserialize, Serialize};

use super::{pair, self_int, LatticeClass, LatticeError};

/// A class that could carry an irreducible curve: positive degree and
/// self-intersection at least `-2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub coords: Vec<i64>,
    pub degree: i64,
    pub square: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectivityRule {
    /// `D != 0` and `D.H <= 0`.
    NonPositiveDegree,
    /// No multiset of candidate curve classes sums to `D`.
    NoCurveDecomposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectivityCert {
    pub class: Vec<i64>,
    pub rule: EffectivityRule,
    pub degree: i64,
    /// Every candidate of degree `1..=D.H` (rule iii only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Candidate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum EffectivityOutcome {
    NotEffective(EffectivityCert),
    /// `D = 0`: the structure sheaf, which has a section. Not a curve class.
    TrivialClass { note: String },
    Unknown { reason: String },
}

impl EffectivityOutcome {
    pub fn certificate(&self) -> Option<&EffectivityCert> {
        match self {
            EffectivityOutcome::NotEffective(c) => Some(c),
            _ => None,
        }
    }
}

/// Try to prove that no effective divisor has class `d`, with `h` ample.
///
/// Only a certificate is ever a claim; every other outcome says nothing.
pub fn not_effective_cert(d: &LatticeClass, h: &LatticeClass) -> Result<EffectivityOutcome, LatticeError> {
    let deg = pair(d, h)?;
    if d.is_zero() {
        return Ok(EffectivityOutcome::TrivialClass {
            note: "D = 0 is the class of O_X; it has a section and is not a curve class".into(),
        });
    }
    if self_int(h) <= 0 {
        return Ok(EffectivityOutcome::Unknown { reason: format!("H^2 = {} is not positive", self_int(h)) });
    }
    if deg <= 0 {
        return Ok(EffectivityOutcome::NotEffective(EffectivityCert {
            class: d.coords().to_vec(),
            rule: EffectivityRule::NonPositiveDegree,
            degree: deg,
            candidates: Vec::new(),
        }));
    }
    if d.lattice().rank() != 2 {
        return Ok(EffectivityOutcome::Unknown { reason: "curve enumeration needs a rank-two lattice".into() });
    }
    let mut candidates = Vec::new();
    for k in 1..=deg {
        match curve_candidates(h, k) {
            Some(mut c) => candidates.append(&mut c),
            None => {
                return Ok(EffectivityOutcome::Unknown {
                    reason: format!("infinitely many classes of degree {k} with square >= -2"),
                })
            }
        }
    }
    if let Some(parts) = decompose(d.coords(), deg, &candidates) {
        let shown: Vec<String> = parts.iter().map(|c| format!("{:?}", c.coords)).collect();
        return Ok(EffectivityOutcome::Unknown { reason: format!("D splits as a sum of candidates {}", shown.join(" + ")) });
    }
    Ok(EffectivityOutcome::NotEffective(EffectivityCert {
        class: d.coords().to_vec(),
        rule: EffectivityRule::NoCurveDecomposition,
        degree: deg,
        candidates,
    }))
}

/// Recheck a certificate against the lattice.
pub fn check_certificate(cert: &EffectivityCert, h: &LatticeClass) -> Result<bool, LatticeError> {
    let d = LatticeClass::new(h.lattice(), cert.class.clone())?;
    let fresh = not_effective_cert(&d, h)?;
    Ok(fresh.certificate() == Some(cert))
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// All classes `K` of a rank-two lattice with `K.H = degree` and `K^2 >= -2`,
/// or `None` when that set is infinite (the complement of `H` is not
/// negative definite).
pub fn curve_candidates(h: &LatticeClass, degree: i64) -> Option<Vec<Candidate>> {
    let lat = h.lattice();
    assert_eq!(lat.rank(), 2, "rank-two lattice");
    let form = |a: [i128; 2], b: [i128; 2]| -> i128 {
        let g = lat.gram();
        (0..2).map(|i| (0..2).map(|j| a[i] * g[i][j] as i128 * b[j]).sum::<i128>()).sum()
    };
    let hc = [h.coords()[0] as i128, h.coords()[1] as i128];
    let u = [form([1, 0], hc), form([0, 1], hc)];
    let (g, x, y) = ext_gcd(u[0], u[1]);
    if g == 0 {
        return None;
    }
    let d = degree as i128;
    if d % g != 0 {
        return Some(Vec::new());
    }
    let k0 = [x * (d / g), y * (d / g)];
    let v = [u[1] / g, -u[0] / g];
    let a = form(v, v);
    if a >= 0 {
        return None;
    }
    let b = form(k0, v);
    let c = form(k0, k0);
    // a t^2 + 2 b t + c >= -2
    let disc = b * b - a * (c + 2);
    let mut out = Vec::new();
    if disc < 0 {
        return Some(out);
    }
    let (af, bf, sq) = (a as f64, b as f64, (disc as f64).sqrt());
    let r1 = (-bf + sq) / af;
    let r2 = (-bf - sq) / af;
    let lo = r1.min(r2).floor() as i128 - 2;
    let hi = r1.max(r2).ceil() as i128 + 2;
    for t in lo..=hi {
        let k = [k0[0] + t * v[0], k0[1] + t * v[1]];
        let square = form(k, k);
        if square >= -2 {
            out.push(Candidate { coords: vec![k[0] as i64, k[1] as i64], degree, square: square as i64 });
        }
    }
    out.sort_by(|p, q| p.coords.cmp(&q.coords));
    Some(out)
}

/// A multiset of candidates summing to `target` with degrees summing to
/// `degree`, if one exists.
fn decompose<'a>(target: &[i64], degree: i64, candidates: &'a [Candidate]) -> Option<Vec<&'a Candidate>> {
    fn rec<'a>(
        rest: &mut Vec<i64>,
        deg: i64,
        from: usize,
        cands: &'a [Candidate],
        used: &mut Vec<&'a Candidate>,
    ) -> bool {
        if deg == 0 {
            return rest.iter().all(|&c| c == 0);
        }
        for (i, c) in cands.iter().enumerate().skip(from) {
            if c.degree > deg {
                continue;
            }
            for (r, x) in rest.iter_mut().zip(&c.coords) {
                *r -= x;
            }
            used.push(c);
            if rec(rest, deg - c.degree, i, cands, used) {
                return true;
            }
            used.pop();
            for (r, x) in rest.iter_mut().zip(&c.coords) {
                *r += x;
            }
        }
        false
    }
    let mut rest = target.to_vec();
    let mut used = Vec::new();
    rec(&mut rest, degree, 0, candidates, &mut used).then_some(used)
}
