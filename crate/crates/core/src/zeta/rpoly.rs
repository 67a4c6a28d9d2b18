//! Dense univariate polynomials over the rationals, constant term first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type RPoly = Vec<BigRational>;

pub fn trim(mut a: RPoly) -> RPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

pub fn from_ints(c: &[BigInt]) -> RPoly {
    trim(c.iter().map(|x| BigRational::from_integer(x.clone())).collect())
}

pub fn degree(a: &RPoly) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn mul(a: &RPoly, b: &RPoly) -> RPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn sub(a: &RPoly, b: &RPoly) -> RPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_else(BigRational::zero) - b.get(i).cloned().unwrap_or_else(BigRational::zero))
            .collect(),
    )
}

pub fn scale(a: &RPoly, c: &BigRational) -> RPoly {
    trim(a.iter().map(|x| x * c).collect())
}

/// Quotient and remainder by a nonzero divisor.
pub fn divrem(a: &RPoly, b: &RPoly) -> (RPoly, RPoly) {
    let b = trim(b.clone());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, x) in b.iter().enumerate() {
            let d = &c * x;
            r[shift + i] -= d;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

pub fn derivative(a: &RPoly) -> RPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

pub fn monic(a: &RPoly) -> RPoly {
    match a.last() {
        Some(l) => scale(a, &l.recip()),
        None => Vec::new(),
    }
}

pub fn gcd(a: &RPoly, b: &RPoly) -> RPoly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

pub fn eval(a: &RPoly, x: &BigRational) -> BigRational {
    a.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Integer multiple with coprime coefficients and positive leading term.
pub fn primitive(a: &RPoly) -> Vec<BigInt> {
    let l = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = a.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    ints.iter().map(|c| c / &g * &sign).collect()
}

/// Sign changes of a Sturm chain at `x`, zeros skipped.
fn variations(chain: &[RPoly], x: &BigRational) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sturm_chain(a: &RPoly) -> Vec<RPoly> {
    let mut chain = vec![a.clone(), derivative(a)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let (_, r) = divrem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(scale(&r, &-BigRational::one()));
    }
    chain
}

/// True when every complex root of `a` is real and lies in `[lo, hi]`.
pub fn all_roots_real_in(a: &RPoly, lo: &BigRational, hi: &BigRational) -> bool {
    let a = trim(a.clone());
    if a.len() <= 1 {
        return true;
    }
    let sqfree = divrem(&a, &gcd(&a, &derivative(&a))).0;
    let mut s = sqfree;
    for end in [lo, hi] {
        if eval(&s, end).is_zero() {
            s = divrem(&s, &vec![-end.clone(), BigRational::one()]).0;
        }
    }
    let d = degree(&s).unwrap_or(0);
    if d == 0 {
        return true;
    }
    let chain = sturm_chain(&s);
    variations(&chain, lo) - variations(&chain, hi) == d
}

fn mobius(mut n: u64) -> i8 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

/// `Φ_k = Π_{d | k} (T^d - 1)^{μ(k/d)}`.
pub fn cyclotomic(k: u64) -> RPoly {
    let binomial = |d: u64| {
        let mut v = vec![BigRational::zero(); d as usize + 1];
        v[0] = -BigRational::one();
        v[d as usize] = BigRational::one();
        v
    };
    let mut num: RPoly = vec![BigRational::one()];
    let mut den: RPoly = vec![BigRational::one()];
    for d in (1..=k).filter(|d| k % d == 0) {
        match mobius(k / d) {
            1 => num = mul(&num, &binomial(d)),
            -1 => den = mul(&den, &binomial(d)),
            _ => {}
        }
    }
    divrem(&num, &den).0
}

pub fn totient(k: u64) -> u64 {
    (1..=k).filter(|&i| i.gcd(&k) == 1).count() as u64
}

/// Multiplicity of every cyclotomic factor of `a` with `φ(k) <= max_degree`.
pub fn cyclotomic_factors(a: &RPoly, max_degree: u64) -> Vec<(u64, u32)> {
    let mut rest = trim(a.clone());
    let mut out = Vec::new();
    let mut k = 1;
    // φ(k) >= sqrt(k/2), so k beyond 2·max^2 cannot qualify
    while k <= 2 * max_degree * max_degree + 2 {
        if totient(k) <= max_degree {
            let phi = cyclotomic(k);
            let mut mult = 0;
            loop {
                if rest.len() < phi.len() {
                    break;
                }
                let (q, r) = divrem(&rest, &phi);
                if !r.is_empty() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((k, mult));
            }
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn p(c: &[i64]) -> RPoly {
        trim(c.iter().map(|&v| r(v)).collect())
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(totient(66), 20);
        let f = mul(&mul(&cyclotomic(6), &cyclotomic(6)), &p(&[3, 0, 1]));
        assert_eq!(cyclotomic_factors(&f, 20), vec![(6, 2)]);
    }

    #[test]
    fn sturm_interval() {
        // (u-1)(u+1)^2 u
        let a = mul(&mul(&p(&[-1, 1]), &mul(&p(&[1, 1]), &p(&[1, 1]))), &p(&[0, 1]));
        assert!(all_roots_real_in(&a, &r(-2), &r(2)));
        assert!(!all_roots_real_in(&a, &r(0), &r(2)));
        assert!(all_roots_real_in(&p(&[-4, 0, 1]), &r(-2), &r(2)));
        assert!(!all_roots_real_in(&p(&[1, 0, 1]), &r(-2), &r(2)));
        assert!(!all_roots_real_in(&p(&[-9, 0, 1]), &r(-2), &r(2)));
    }
}
