//! Monomial bases of graded pieces, and Laurent-monomial bases of higher
//! line-bundle cohomology on products of projective spaces.

use super::{Ambient, Exponents, MultiDegree};

/// All exponent vectors of `nvars` variables with total degree `d`,
/// in descending lexicographic order (`x0^d` first).
pub(crate) fn group_monomials(nvars: usize, d: i64) -> Vec<Vec<u32>> {
    if d < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, d as u32, &mut cur, &mut out);
    out
}

/// Monomials of multidegree `d`, graded-lexicographic per variable group with
/// the first group varying slowest. Empty when any component is negative.
pub fn monomial_basis(ambient: &Ambient, d: &MultiDegree) -> Vec<Exponents> {
    assert_eq!(d.arity(), ambient.arity(), "multidegree arity does not match ambient");
    if d.any_negative() {
        return Vec::new();
    }
    let pieces: Vec<Vec<Vec<u32>>> = (0..ambient.arity())
        .map(|g| group_monomials(ambient.group_range(g).len(), d[g]))
        .collect();
    let mut out: Vec<Exponents> = vec![Vec::new()];
    for piece in &pieces {
        let mut next = Vec::with_capacity(out.len() * piece.len());
        for prefix in &out {
            for m in piece {
                let mut e = prefix.clone();
                e.extend_from_slice(m);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

/// Laurent monomials of one factor `P^n` spanning `H^n(O(d))`: all exponents
/// at most −1 and summing to `d`.
fn group_top_laurent(nvars: usize, d: i64) -> Vec<Vec<i64>> {
    // substitute e_i = -1 - f_i with f_i >= 0, sum f_i = -d - nvars
    let shifted = -d - nvars as i64;
    group_monomials(nvars, shifted)
        .into_iter()
        .map(|f| f.into_iter().map(|v| -1 - i64::from(v)).collect())
        .collect()
}

/// Whether factor `g` of a Laurent monomial sits in its top-cohomology pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum FactorPattern {
    Sections,
    Top,
}

/// Laurent-monomial basis of `H^i(O(d))`.
///
/// Each factor contributes either its sections (non-negative exponents) or
/// its top cohomology (all exponents negative); a choice contributes to
/// `H^i` when the dimensions of the "top" factors sum to `i`. Multiplication
/// by a polynomial acts by multiplying Laurent monomials and discarding those
/// that leave their pattern.
pub fn cohomology_basis(ambient: &Ambient, d: &MultiDegree, i: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for patterns in patterns_for(ambient, i) {
        out.extend(basis_for_pattern(ambient, d, &patterns));
    }
    out
}

pub(crate) fn patterns_for(ambient: &Ambient, i: usize) -> Vec<Vec<FactorPattern>> {
    let dims = ambient.factor_dims();
    let mut out = Vec::new();
    for mask in 0u32..(1 << dims.len()) {
        let pats: Vec<FactorPattern> = (0..dims.len())
            .map(|g| if mask & (1 << g) != 0 { FactorPattern::Top } else { FactorPattern::Sections })
            .collect();
        let deg: usize = dims.iter().zip(&pats).filter(|(_, p)| **p == FactorPattern::Top).map(|(n, _)| n).sum();
        if deg == i {
            out.push(pats);
        }
    }
    out
}

pub(crate) fn basis_for_pattern(ambient: &Ambient, d: &MultiDegree, pats: &[FactorPattern]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for (g, pat) in pats.iter().enumerate() {
        let n = ambient.group_range(g).len();
        let piece: Vec<Vec<i64>> = match pat {
            FactorPattern::Sections => group_monomials(n, d[g])
                .into_iter()
                .map(|m| m.into_iter().map(i64::from).collect())
                .collect(),
            FactorPattern::Top => group_top_laurent(n, d[g]),
        };
        let mut next = Vec::with_capacity(out.len() * piece.len());
        for prefix in &out {
            for m in &piece {
                let mut e = prefix.clone();
                e.extend_from_slice(m);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

/// Whether a Laurent monomial lies in the given pattern.
pub(crate) fn in_pattern(ambient: &Ambient, e: &[i64], pats: &[FactorPattern]) -> bool {
    pats.iter().enumerate().all(|(g, p)| {
        let r = ambient.group_range(g);
        match p {
            FactorPattern::Sections => e[r].iter().all(|&v| v >= 0),
            FactorPattern::Top => e[r].iter().all(|&v| v <= -1),
        }
    })
}
