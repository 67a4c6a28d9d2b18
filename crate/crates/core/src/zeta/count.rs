use std::thread;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::field::{Fq, FqField};
use super::ZetaError;
use crate::poly::{AmbientKind, RationalPolynomial};

/// `f` reduced into a field: per term, the field coefficient and exponents.
struct Reduced {
    terms: Vec<(Fq, [u32; 4])>,
    dy: u32,
}

fn reduce(f: &RationalPolynomial, field: &FqField) -> Result<Reduced, ZetaError> {
    if f.ambient().kind() != AmbientKind::ProductProjective(1, 1) {
        return Err(ZetaError::Unsupported("point counts need a curve in P^1 x P^1".into()));
    }
    let Some(d) = f.homogeneous_degree() else {
        return Err(ZetaError::Unsupported("branch equation must be bihomogeneous".into()));
    };
    if d[0] % 2 != 0 || d[1] % 2 != 0 {
        return Err(ZetaError::Unsupported(format!("branch bidegree {d} must be even in both factors")));
    }
    let p = BigInt::from(field.p());
    let mut terms = Vec::new();
    for (e, c) in f.terms() {
        if !c.is_integer() {
            return Err(ZetaError::CoefficientReduction(c.to_string()));
        }
        let r = ((c.numer() % &p) + &p) % &p;
        if r.is_zero() {
            continue;
        }
        let r = r.to_i64().expect("reduced");
        terms.push((field.from_int(r), [e[0], e[1], e[2], e[3]]));
    }
    Ok(Reduced { terms, dy: d[1] as u32 })
}

/// Representatives of `P^1(F_q)`: `[1:t]` for every `t`, then `[0:1]`.
fn p1_points(field: &FqField) -> Vec<(Fq, Fq)> {
    let mut pts: Vec<(Fq, Fq)> = field.elements().map(|t| (field.one(), t)).collect();
    pts.push((field.zero(), field.one()));
    pts
}

/// Points of `w^2 = f(x, y)` over `F_{p^n}`: each base point contributes
/// `1 + χ(f(P))`.
pub fn count_points(f: &RationalPolynomial, p: u64, n: u32, threads: usize) -> Result<u64, ZetaError> {
    let field = FqField::new(p, n)?;
    count_points_in(f, &field, threads)
}

pub fn count_points_in(f: &RationalPolynomial, field: &FqField, threads: usize) -> Result<u64, ZetaError> {
    if field.p() == 2 {
        return Err(ZetaError::EvenCharacteristic);
    }
    let red = reduce(f, field)?;
    let xs = p1_points(field);
    let ts: Vec<Fq> = field.elements().collect();
    let fiber = |x: &(Fq, Fq)| -> u64 {
        // coefficients of y0^(dy-k) y1^k
        let mut c = vec![field.zero(); red.dy as usize + 1];
        for (coef, e) in &red.terms {
            let v = field.mul(*coef, field.mul(field.pow(x.0, e[0] as u64), field.pow(x.1, e[1] as u64)));
            c[e[3] as usize] = field.add(c[e[3] as usize], v);
        }
        let contrib = |v: Fq| (1 + field.quad_char_odd(v) as i64) as u64;
        // y = [0:1]
        let mut total = contrib(c[red.dy as usize]);
        for &t in &ts {
            let mut v = c[red.dy as usize];
            for k in (0..red.dy as usize).rev() {
                v = field.add(field.mul(v, t), c[k]);
            }
            total += contrib(v);
        }
        total
    };
    let threads = threads.max(1).min(xs.len());
    if threads == 1 {
        return Ok(xs.iter().map(fiber).sum());
    }
    let chunk = xs.len().div_ceil(threads);
    let total = thread::scope(|s| {
        let handles: Vec<_> = xs.chunks(chunk).map(|part| s.spawn(|| part.iter().map(fiber).sum::<u64>())).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).sum()
    });
    Ok(total)
}

/// Direct evaluation at every base point with exact integers mod `p`. Prime fields only.
pub fn count_points_naive(f: &RationalPolynomial, p: u64) -> u64 {
    let pts: Vec<(i64, i64)> = (0..p as i64).map(|t| (1, t)).chain(std::iter::once((0, 1))).collect();
    let pb = BigInt::from(p);
    let mut total = 0;
    for x in &pts {
        for y in &pts {
            let point: Vec<num_rational::BigRational> =
                [x.0, x.1, y.0, y.1].iter().map(|&v| num_rational::BigRational::from_integer(v.into())).collect();
            let v = f.eval(&point).to_integer();
            let v = ((v % &pb) + &pb) % &pb;
            let v = v.to_u64().unwrap();
            total += if v == 0 {
                1
            } else if (1..p).any(|s| s * s % p == v) {
                2
            } else {
                0
            };
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Ambient};

    fn amb() -> Ambient {
        Ambient::with_variables(AmbientKind::ProductProjective(1, 1), &["x0", "x1", "y0", "y1"]).unwrap()
    }

    #[test]
    fn single_monomial() {
        let a = amb();
        let f = parse_poly("x0^4*y0^4", &a).unwrap();
        assert_eq!(count_points(&f, 3, 1, 1).unwrap(), 25);
        assert_eq!(count_points_naive(&f, 3), 25);
    }

    #[test]
    fn agrees_with_naive_and_bounded() {
        let a = amb();
        let f = parse_poly("x0^4*y1^4 + 2*x0*x1^3*y0^2*y1^2 - x1^4*y0^4 + x0^2*x1^2*y0*y1^3", &a).unwrap();
        for p in [3u64, 5, 7] {
            let n1 = count_points(&f, p, 1, 3).unwrap();
            assert_eq!(n1, count_points_naive(&f, p));
            assert!(n1 <= 2 * (p + 1) * (p + 1));
            let n2 = count_points(&f, p, 2, 2).unwrap();
            assert!(n2 <= 2 * (p * p + 1) * (p * p + 1));
        }
    }

    #[test]
    fn rejects_bad_input() {
        let a = amb();
        let f = parse_poly("x0^4*y0^4", &a).unwrap();
        assert!(matches!(count_points(&f, 2, 1, 1), Err(ZetaError::EvenCharacteristic)));
        let half = f.scale(&num_rational::BigRational::new(1.into(), 2.into()));
        assert!(matches!(count_points(&half, 3, 1, 1), Err(ZetaError::CoefficientReduction(_))));
    }
}
