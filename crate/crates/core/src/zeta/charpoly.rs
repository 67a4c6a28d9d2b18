use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rpoly::{self, RPoly};
use super::{big, ZetaError};

/// Geometric second Betti number of a K3 surface.
const B2: usize = 22;

/// One fully determined candidate for the transcendental factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharpolyCandidate {
    pub sign: i8,
    /// Value chosen for an otherwise free middle coefficient.
    #[serde(with = "big::opt", default, skip_serializing_if = "Option::is_none")]
    pub middle: Option<BigInt>,
    /// `Π (T - α)`, leading coefficient first.
    #[serde(with = "big::vec")]
    pub coefficients: Vec<BigInt>,
    /// `(k, m)`: `Φ_k^m` divides the polynomial with roots `α/q`.
    pub cyclotomic: Vec<(u64, u32)>,
    pub roots_of_unity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub sign: i8,
    #[serde(with = "big::opt", default, skip_serializing_if = "Option::is_none")]
    pub middle: Option<BigInt>,
    pub reason: String,
}

/// A sign whose middle coefficient the counts leave free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeFamily {
    pub sign: i8,
    /// Index `j` of the free elementary symmetric function `e_j`.
    pub free_index: usize,
    /// Middle values at which some cyclotomic polynomial divides; every
    /// other value has no root of unity at all.
    #[serde(with = "big::vec")]
    pub special_values: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaProfile {
    pub p: u64,
    pub counts: Vec<u64>,
    pub traces: Vec<i64>,
    pub k_alg: usize,
    pub degree: usize,
    /// Power sums of the remaining eigenvalues.
    pub power_sums: Vec<i64>,
    /// `e_0..e_m` from Newton's identities.
    #[serde(with = "big::vec")]
    pub elementary: Vec<BigInt>,
    pub candidates: Vec<CharpolyCandidate>,
    pub families: Vec<FreeFamily>,
    pub eliminated: Vec<Elimination>,
}

fn q_pow(p: u64, i: usize) -> BigInt {
    num_traits::pow(BigInt::from(p), i)
}

fn rat(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

/// `e_0..e_m` from power sums `s_1..s_m`: `k e_k = Σ (-1)^{i-1} e_{k-i} s_i`.
pub fn newton_elementary(s: &[BigInt]) -> Result<Vec<BigInt>, ZetaError> {
    let mut e = vec![BigInt::one()];
    for k in 1..=s.len() {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if !(&acc % BigInt::from(k)).is_zero() {
            return Err(ZetaError::NoConsistentCandidate(format!("e_{k} = {acc}/{k} is not an integer")));
        }
        e.push(acc / BigInt::from(k));
    }
    Ok(e)
}

/// Power sums `s_1..s_n` of the roots of a polynomial with elementary symmetric functions `e`.
pub fn power_sums(e: &[BigInt], n: usize) -> Vec<BigInt> {
    let d = e.len() - 1;
    let get = |i: usize| if i <= d { e[i].clone() } else { BigInt::zero() };
    let mut s: Vec<BigInt> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..k {
            let term = get(i) * &s[k - i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let last = get(k) * BigInt::from(k);
        if k % 2 == 1 {
            acc += last;
        } else {
            acc -= last;
        }
        s.push(acc);
    }
    s
}

/// `Π (T - α/q)` from the `e_j` of the `α`, constant term first.
fn normalized(e: &[BigInt], q: u64) -> RPoly {
    let d = e.len() - 1;
    let mut out = vec![BigRational::zero(); d + 1];
    for (j, ej) in e.iter().enumerate() {
        let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        out[d - j] = BigRational::new(sign * ej, q_pow(q, j));
    }
    rpoly::trim(out)
}

/// Monic polynomial `Π (T - α)`, leading coefficient first.
fn coefficients(e: &[BigInt]) -> Vec<BigInt> {
    e.iter().enumerate().map(|(j, c)| if j % 2 == 0 { c.clone() } else { -c }).collect()
}

/// Number of roots `α` (with multiplicity) for which `α/q` is a root of unity.
pub fn root_of_unity_count(poly_const_first: &[BigInt], q: u64) -> (usize, Vec<(u64, u32)>) {
    // substitute T -> qT
    let scaled: RPoly = poly_const_first.iter().enumerate().map(|(i, c)| rat(c * q_pow(q, i))).collect();
    let scaled = rpoly::trim(scaled);
    let d = rpoly::degree(&scaled).unwrap_or(0) as u64;
    let f = rpoly::cyclotomic_factors(&scaled, d);
    let n = f.iter().map(|&(k, m)| rpoly::totient(k) as usize * m as usize).sum();
    (n, f)
}

/// Every root of a real polynomial on the unit circle.
pub fn roots_on_unit_circle(a: &RPoly) -> bool {
    let one = BigRational::one();
    let mut r = rpoly::trim(a.clone());
    for lin in [vec![-one.clone(), one.clone()], vec![one.clone(), one.clone()]] {
        loop {
            let (qt, rem) = rpoly::divrem(&r, &lin);
            if !rem.is_empty() || r.len() < 2 {
                break;
            }
            r = qt;
        }
    }
    let Some(deg) = rpoly::degree(&r) else { return true };
    if deg == 0 {
        return true;
    }
    if deg % 2 == 1 {
        return false;
    }
    let h = deg / 2;
    if (0..=deg).any(|i| r[i] != r[deg - i]) {
        return false;
    }
    // R(T)/T^h = r_h + Σ r_{h+i} (T^i + T^-i), and T^i + T^-i = D_i(T + 1/T)
    let mut d_prev: RPoly = vec![BigRational::from_integer(2.into())];
    let mut d_cur: RPoly = vec![BigRational::zero(), one.clone()];
    let mut s: RPoly = vec![r[h].clone()];
    for i in 1..=h {
        let term = rpoly::scale(&d_cur, &r[h + i]);
        s = rpoly::sub(&s, &rpoly::scale(&term, &-one.clone()));
        let next = rpoly::sub(&rpoly::mul(&vec![BigRational::zero(), one.clone()], &d_cur), &d_prev);
        d_prev = d_cur;
        d_cur = next;
    }
    let two = BigRational::from_integer(2.into());
    rpoly::all_roots_real_in(&s, &-two.clone(), &two)
}

/// Build the candidate for fully known `e`, or the reason it is impossible.
fn evaluate(e: &[BigInt], q: u64, sign: i8, middle: Option<BigInt>) -> Result<CharpolyCandidate, Elimination> {
    let d = e.len() - 1;
    let fail = |reason: String| Elimination { sign, middle: middle.clone(), reason };
    for (k, s) in power_sums(e, d).iter().enumerate() {
        let bound = q_pow(q, k + 1) * BigInt::from(d);
        if s.abs() > bound {
            return Err(fail(format!("implied trace of Frobenius^{} is {s}, beyond the Weil bound {bound}", k + 1)));
        }
    }
    let r = normalized(e, q);
    if !roots_on_unit_circle(&r) {
        return Err(fail("some eigenvalue has absolute value other than q".into()));
    }
    let cyclotomic = rpoly::cyclotomic_factors(&r, d as u64);
    let roots_of_unity = cyclotomic.iter().map(|&(k, m)| rpoly::totient(k) as usize * m as usize).sum();
    Ok(CharpolyCandidate { sign, middle, coefficients: coefficients(e), cyclotomic, roots_of_unity })
}

/// Reconstruct the Frobenius characteristic polynomial on the complement of
/// `k_alg` known algebraic classes from point counts `N_1..N_m` of a K3
/// surface over `F_p`.
pub fn assemble_charpoly(counts: &[u64], p: u64, k_alg: usize) -> Result<ZetaProfile, ZetaError> {
    if k_alg > 4 {
        return Err(ZetaError::Unsupported(format!("k_alg = {k_alg} exceeds 4")));
    }
    if counts.is_empty() {
        return Err(ZetaError::InsufficientCounts(0));
    }
    let d = B2 - k_alg;
    let m = counts.len().min(d);
    let mut traces = Vec::new();
    let mut sums = Vec::new();
    for (i, &n) in counts.iter().enumerate() {
        let qi = q_pow(p, i + 1);
        let t = BigInt::from(n) - BigInt::one() - &qi * &qi;
        if t.abs() > &qi * BigInt::from(B2) {
            return Err(ZetaError::NoConsistentCandidate(format!("trace {t} at n = {} violates the Weil bound", i + 1)));
        }
        sums.push(&t - &qi * BigInt::from(k_alg));
        traces.push(t);
    }
    let to_i64 = |v: &BigInt| i64::try_from(v).map_err(|_| ZetaError::TooLarge(v.to_string()));
    let traces_i: Vec<i64> = traces.iter().map(to_i64).collect::<Result<_, _>>()?;
    let sums_i: Vec<i64> = sums.iter().map(to_i64).collect::<Result<_, _>>()?;
    let e_known = newton_elementary(&sums[..m])?;

    let mut profile = ZetaProfile {
        p,
        counts: counts.to_vec(),
        traces: traces_i,
        k_alg,
        degree: d,
        power_sums: sums_i,
        elementary: e_known.clone(),
        candidates: Vec::new(),
        families: Vec::new(),
        eliminated: Vec::new(),
    };
    'sign: for sign in [1i8, -1] {
        let mut e: Vec<Option<BigInt>> = vec![None; d + 1];
        for (j, v) in e_known.iter().enumerate() {
            e[j] = Some(v.clone());
        }
        // e_{d-j} = sign · q^{d-2j} · e_j
        let last = BigInt::from(sign) * q_pow(p, d);
        if let Some(known) = &e[d] {
            if *known != last {
                profile.eliminated.push(Elimination { sign, middle: None, reason: "e_d disagrees with the functional equation".into() });
                continue;
            }
        }
        e[d] = Some(last);
        for j in 0..=m {
            let mirror = d - j;
            let value = {
                let base = BigRational::from_integer(BigInt::from(sign) * &e_known[j]);
                let exp = d as i64 - 2 * j as i64;
                let factor = BigRational::from_integer(q_pow(p, exp.unsigned_abs() as usize));
                if exp >= 0 {
                    base * factor
                } else {
                    base / factor
                }
            };
            if !value.is_integer() {
                profile.eliminated.push(Elimination { sign, middle: None, reason: format!("e_{mirror} would not be an integer") });
                continue 'sign;
            }
            let value = value.to_integer();
            match &e[mirror] {
                Some(v) if *v != value => {
                    profile.eliminated.push(Elimination {
                        sign,
                        middle: None,
                        reason: format!("e_{mirror} = {v} from the counts, {value} from the functional equation"),
                    });
                    continue 'sign;
                }
                _ => e[mirror] = Some(value),
            }
        }
        let unknown: Vec<usize> = (0..=d).filter(|&j| e[j].is_none()).collect();
        match unknown.as_slice() {
            [] => match evaluate(&e.iter().map(|v| v.clone().unwrap()).collect::<Vec<_>>(), p, sign, None) {
                Ok(c) => profile.candidates.push(c),
                Err(el) => profile.eliminated.push(el),
            },
            [mid] if 2 * mid == d && sign == -1 => {
                e[*mid] = Some(BigInt::zero());
                match evaluate(&e.iter().map(|v| v.clone().unwrap()).collect::<Vec<_>>(), p, sign, None) {
                    Ok(c) => profile.candidates.push(c),
                    Err(el) => profile.eliminated.push(el),
                }
            }
            [mid] if 2 * mid == d => {
                let mid = *mid;
                let specials = special_middle_values(&e, mid, p);
                for c in &specials {
                    e[mid] = Some(c.clone());
                    match evaluate(&e.iter().map(|v| v.clone().unwrap()).collect::<Vec<_>>(), p, sign, Some(c.clone())) {
                        Ok(cand) => profile.candidates.push(cand),
                        Err(el) => profile.eliminated.push(el),
                    }
                }
                profile.families.push(FreeFamily { sign, free_index: mid, special_values: specials });
            }
            _ => return Err(ZetaError::InsufficientCounts(counts.len())),
        }
    }
    if profile.candidates.is_empty() && profile.families.is_empty() {
        return Err(ZetaError::NoConsistentCandidate("both signs of the functional equation are inconsistent".into()));
    }
    Ok(profile)
}

/// Integer values of the free `e_mid` at which some `Φ_k` divides `Π (T - α/q)`.
fn special_middle_values(e: &[Option<BigInt>], mid: usize, p: u64) -> Vec<BigInt> {
    let d = e.len() - 1;
    let base: Vec<BigInt> = e.iter().enumerate().map(|(j, v)| if j == mid { BigInt::zero() } else { v.clone().unwrap() }).collect();
    let r0 = normalized(&base, p);
    let mut unit = vec![BigInt::zero(); d + 1];
    unit[mid] = BigInt::one();
    unit[0] = BigInt::zero();
    // the middle term alone: (-1)^mid q^-mid T^{d-mid}
    let mut b = vec![BigRational::zero(); d + 1];
    let sign = if mid % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    b[d - mid] = BigRational::new(sign, q_pow(p, mid));
    let mut out = BTreeSet::new();
    let mut k = 1u64;
    while k <= 2 * (d as u64) * (d as u64) + 2 {
        if rpoly::totient(k) <= d as u64 {
            let phi = rpoly::cyclotomic(k);
            let (_, rem0) = rpoly::divrem(&r0, &phi);
            let (_, remb) = rpoly::divrem(&b, &phi);
            if let Some(i) = remb.iter().position(|c| !c.is_zero()) {
                let c = -rem0.get(i).cloned().unwrap_or_else(BigRational::zero) / &remb[i];
                let check = rpoly::sub(&rem0, &rpoly::scale(&remb, &-c.clone()));
                if check.is_empty() && c.is_integer() {
                    out.insert(c.to_integer());
                }
            }
        }
        k += 1;
    }
    out.into_iter().collect()
}

/// Upper bound for the geometric Picard number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankBound {
    pub bound: usize,
    pub k_alg: usize,
    pub worst: Option<CharpolyCandidate>,
    pub notes: Vec<String>,
}

pub fn rank_upper_bound(profile: &ZetaProfile) -> Result<RankBound, ZetaError> {
    if profile.candidates.is_empty() && profile.families.is_empty() {
        return Err(ZetaError::NoCandidate);
    }
    let worst = profile.candidates.iter().max_by_key(|c| c.roots_of_unity).cloned();
    let extra = worst.as_ref().map_or(0, |c| c.roots_of_unity);
    let mut notes = Vec::new();
    for f in &profile.families {
        notes.push(format!(
            "sign {:+}: e_{} is not determined by the counts; values outside {} special ones give no roots of unity",
            f.sign,
            f.free_index,
            f.special_values.len()
        ));
    }
    Ok(RankBound { bound: profile.k_alg + extra, k_alg: profile.k_alg, worst, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn newton_small_cases() {
        assert_eq!(newton_elementary(&ints(&[2, 2])).unwrap(), ints(&[1, 2, 1]));
        let q = 3i64;
        let s: Vec<BigInt> = (1..=20).map(|i| BigInt::from(20) * num_traits::pow(BigInt::from(q), i)).collect();
        let e = newton_elementary(&s).unwrap();
        for (j, ej) in e.iter().enumerate() {
            let binom = (0..j).fold(BigInt::one(), |acc, i| acc * BigInt::from(20 - i) / BigInt::from(i + 1));
            assert_eq!(*ej, binom * num_traits::pow(BigInt::from(q), j));
        }
        assert_eq!(power_sums(&e, 20), s);
        assert!(newton_elementary(&ints(&[1, 0])).is_err());
    }

    #[test]
    fn unit_circle_and_roots_of_unity() {
        let q = 5u64;
        // (T - q)(T + q)
        let (n, _) = root_of_unity_count(&ints(&[-25, 0, 1]), q);
        assert_eq!(n, 2);
        // T^2 - qT + q^2
        let (n, f) = root_of_unity_count(&ints(&[25, -5, 1]), q);
        assert_eq!((n, f), (2, vec![(6, 1)]));
        let r = |v: &[i64]| -> RPoly { v.iter().map(|&x| BigRational::from_integer(x.into())).collect() };
        assert!(roots_on_unit_circle(&r(&[1, -1, 1])));
        assert!(roots_on_unit_circle(&r(&[-1, 0, 1])));
        assert!(!roots_on_unit_circle(&r(&[4, 0, 1])));
        // 2T^2 - T + 2 has roots of modulus 1
        assert!(roots_on_unit_circle(&r(&[2, -1, 2])));
        assert!(!roots_on_unit_circle(&r(&[2, -5, 2])));
    }

    #[test]
    fn synthetic_profile_with_known_roots() {
        // 18 eigenvalues q and the pairs ±iq twice: every one is q times a root of unity
        let p = 3u64;
        let counts: Vec<u64> = (1..=9u32)
            .map(|n| {
                let qn = p.pow(n) as i64;
                let pair = [0, -2 * qn, 0, 2 * qn][(n as usize - 1) % 4];
                (1 + qn * qn + 18 * qn + 2 * pair) as u64
            })
            .collect();
        let prof = assemble_charpoly(&counts, p, 2).unwrap();
        assert!(prof.candidates.iter().any(|c| c.roots_of_unity == 20));
        assert_eq!(rank_upper_bound(&prof).unwrap().bound, 22);
        let json = serde_json::to_string(&prof).unwrap();
        assert_eq!(serde_json::from_str::<ZetaProfile>(&json).unwrap(), prof);
    }

    #[test]
    fn inconsistent_counts_are_rejected() {
        assert!(matches!(assemble_charpoly(&[1, 2, 3], 3, 2), Err(ZetaError::NoConsistentCandidate(_))));
        assert!(matches!(assemble_charpoly(&[14, 98], 3, 2), Err(ZetaError::InsufficientCounts(2))));
        assert!(matches!(assemble_charpoly(&[], 3, 2), Err(ZetaError::InsufficientCounts(0))));
    }
}
