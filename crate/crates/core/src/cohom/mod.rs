//! Exact `h^0` of twisted line-bundle sums, kernel monads, their exterior
//! powers and homology monads, plus the fiber-descent tail rule.

mod tail;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monad::{MonadComplex, MonadError, MonadKind};
use crate::poly::{
    cohomology_section_matrix, section_matrix, Ambient, AmbientKind, ExactMatrix, MultiDegree, PolyError, PolyMatrix,
    RationalPolynomial,
};

pub use tail::{tail_vanish, TailSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomError {
    #[error("cohomological degree {i} out of range for {ambient}")]
    IndexOutOfRange { i: usize, ambient: String },
    #[error("expected a {0:?} monad")]
    WrongKind(MonadKind),
    #[error("exterior powers need a rank-one cokernel, got rank {0}")]
    UnsupportedCokernelRank(usize),
    #[error("exterior power {s} out of range 1..={max}")]
    ExteriorOutOfRange { s: usize, max: usize },
    #[error("unsupported: {0}")]
    UnsupportedOperation(String),
    #[error("fiber h0 at [{}:{}] is {value}, not 0", point.0, point.1)]
    FiberNotVanishing { point: (i64, i64), value: String },
    #[error("no terminal twist: {0}")]
    NoTerminalBound(String),
    #[error(transparent)]
    Monad(#[from] MonadError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// An exact dimension or a bracket `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CohomValue {
    Exact(i64),
    Interval(i64, i64),
}

impl CohomValue {
    pub fn lo(&self) -> i64 {
        match *self {
            CohomValue::Exact(v) | CohomValue::Interval(v, _) => v,
        }
    }

    pub fn hi(&self) -> i64 {
        match *self {
            CohomValue::Exact(v) | CohomValue::Interval(_, v) => v,
        }
    }

    pub fn exact(&self) -> Option<i64> {
        match *self {
            CohomValue::Exact(v) => Some(v),
            CohomValue::Interval(lo, hi) if lo == hi => Some(lo),
            CohomValue::Interval(..) => None,
        }
    }

    fn bracket(lo: i64, hi: i64) -> Self {
        if lo == hi {
            CohomValue::Exact(lo)
        } else {
            CohomValue::Interval(lo, hi)
        }
    }
}

impl std::fmt::Display for CohomValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CohomValue::Exact(v) => write!(f, "{v}"),
            CohomValue::Interval(lo, hi) => write!(f, "[{lo},{hi}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm,
    SectionKernel,
    ExteriorKernel,
    HomologyBound,
    FiberDescent,
}

/// Shape and rank of one matrix used in a computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixWitness {
    pub label: String,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub nullity: usize,
}

impl MatrixWitness {
    pub(crate) fn of(label: impl Into<String>, m: &ExactMatrix) -> Self {
        let rank = m.rank();
        MatrixWitness { label: label.into(), rows: m.rows(), cols: m.cols(), rank, nullity: m.cols() - rank }
    }

    /// `cols = rank + nullity`.
    pub fn audit(&self) -> bool {
        self.cols == self.rank + self.nullity && self.rank <= self.rows
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<MatrixWitness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dims: Vec<(String, i64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomResult {
    pub value: CohomValue,
    pub method: Method,
    pub witness: Witness,
}

impl CohomResult {
    /// True when the computation shows `h^0 = 0`.
    pub fn vanishes(&self) -> bool {
        self.value.hi() == 0
    }
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

fn h_projective(n: usize, d: i64, i: usize) -> i64 {
    let n_i = n as i64;
    if i == 0 {
        if d >= 0 {
            binom(n_i + d, n_i)
        } else {
            0
        }
    } else if i == n {
        h_projective(n, -d - n_i - 1, 0)
    } else {
        0
    }
}

/// `h^i(O(d))` on `P^n` or a product of two projective spaces.
pub fn h_line(ambient: &Ambient, d: &MultiDegree, i: usize) -> Result<i64, CohomError> {
    if i > ambient.dim() {
        return Err(CohomError::IndexOutOfRange { i, ambient: ambient.to_string() });
    }
    Ok(match ambient.kind() {
        AmbientKind::Projective(n) => h_projective(n, d[0], i),
        AmbientKind::ProductProjective(n1, n2) => (0..=i.min(n1))
            .filter(|p| i - p <= n2)
            .map(|p| h_projective(n1, d[0], p) * h_projective(n2, d[1], i - p))
            .sum(),
    })
}

fn h_sum(ambient: &Ambient, twists: &[MultiDegree], l: &MultiDegree, i: usize) -> Result<i64, CohomError> {
    twists.iter().map(|t| h_line(ambient, &(*t + *l), i)).sum()
}

/// `h^0(K ⊗ L)` for a kernel monad, as the nullity of `H^0(B⊗L) -> H^0(C⊗L)`.
pub fn h0_kernel(m: &MonadComplex, l: &MultiDegree) -> Result<CohomResult, CohomError> {
    if m.kind() != MonadKind::Kernel {
        return Err(CohomError::WrongKind(MonadKind::Kernel));
    }
    let s = section_matrix(&m.map_b, &m.b.twists, &m.c.twists, l)?;
    let w = MatrixWitness::of(format!("H0(b) at {l}"), &s);
    Ok(CohomResult {
        value: CohomValue::Exact(w.nullity as i64),
        method: Method::SectionKernel,
        witness: Witness { matrices: vec![w], ..Witness::default() },
    })
}

/// Index subsets of size `s` of `0..n`, in lexicographic order.
pub(crate) fn subsets(n: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < s - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, s, &mut Vec::new(), &mut out);
    out
}

/// Twists of `Λ^s B` (sums over `s`-subsets) and of `Λ^{s-1}B ⊗ C`, and the
/// polynomial matrix of `ψ_s(e_I) = Σ_r (-1)^r b_{i_r} e_{I∖i_r}`.
pub fn exterior_map(m: &MonadComplex, s: usize) -> Result<(Vec<MultiDegree>, Vec<MultiDegree>, PolyMatrix), CohomError> {
    if m.c.rank() != 1 {
        return Err(CohomError::UnsupportedCokernelRank(m.c.rank()));
    }
    let n = m.b.rank();
    if s == 0 || s >= n {
        return Err(CohomError::ExteriorOutOfRange { s, max: n.saturating_sub(1) });
    }
    let amb = m.ambient();
    let twist_of = |set: &[usize]| set.iter().fold(amb.zero_degree(), |acc, &i| acc + m.b.twists[i]);
    let cols = subsets(n, s);
    let rows = subsets(n, s - 1);
    let src: Vec<MultiDegree> = cols.iter().map(|c| twist_of(c)).collect();
    let tgt: Vec<MultiDegree> = rows.iter().map(|r| twist_of(r) + m.c.twists[0]).collect();
    let row_of: std::collections::HashMap<&[usize], usize> =
        rows.iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();
    let mut psi = PolyMatrix::zeros(amb, rows.len(), cols.len());
    for (j, set) in cols.iter().enumerate() {
        for r in 0..s {
            let entry = m.map_b.get(0, set[r]);
            if entry.is_zero() {
                continue;
            }
            let mut rest = set.clone();
            rest.remove(r);
            let i = row_of[rest.as_slice()];
            let signed: RationalPolynomial = if r % 2 == 0 { entry.clone() } else { entry.neg() };
            psi.set(i, j, signed);
        }
    }
    Ok((src, tgt, psi))
}

/// `h^0(Λ^s K ⊗ L)` for a kernel monad with rank-one cokernel.
pub fn h0_exterior(m: &MonadComplex, s: usize, l: &MultiDegree) -> Result<CohomResult, CohomError> {
    if m.kind() != MonadKind::Kernel {
        return Err(CohomError::WrongKind(MonadKind::Kernel));
    }
    let (src, tgt, psi) = exterior_map(m, s)?;
    let mat = section_matrix(&psi, &src, &tgt, l)?;
    let w = MatrixWitness::of(format!("H0(psi_{s}) at {l}"), &mat);
    Ok(CohomResult {
        value: CohomValue::Exact(w.nullity as i64),
        method: Method::ExteriorKernel,
        witness: Witness { matrices: vec![w], ..Witness::default() },
    })
}

/// Bracket for `h^0(E ⊗ L)` of a homology monad:
/// `h0(K⊗L) - h0(A⊗L) ≤ h0(E⊗L) ≤ h0(K⊗L) - h0(A⊗L) + h1(A⊗L)`.
pub fn h0_homology(m: &MonadComplex, l: &MultiDegree) -> Result<CohomResult, CohomError> {
    homology_bound(m, l, false)
}

/// As [`h0_homology`], with the upper bound sharpened to
/// `h0(K⊗L) - h0(A⊗L) + dim ker(H^1(A⊗L) -> H^1(B⊗L))`.
///
/// `H^1(A⊗L) -> H^1(B⊗L)` factors through `H^1(K⊗L)`, so its kernel contains
/// the image of the connecting map `H^0(E⊗L) -> H^1(A⊗L)`.
pub fn h0_homology_refined(m: &MonadComplex, l: &MultiDegree) -> Result<CohomResult, CohomError> {
    homology_bound(m, l, true)
}

fn homology_bound(m: &MonadComplex, l: &MultiDegree, refine: bool) -> Result<CohomResult, CohomError> {
    if m.kind() != MonadKind::Homology {
        return Err(CohomError::WrongKind(MonadKind::Homology));
    }
    let amb = m.ambient();
    let k = h0_kernel(&m.kernel_part(), l)?;
    let h0k = k.value.lo();
    let h0a = h_sum(amb, &m.a.twists, l, 0)?;
    let h1a = h_sum(amb, &m.a.twists, l, 1)?;
    let mut witness = k.witness;
    witness.dims.push(("h0(K⊗L)".into(), h0k));
    witness.dims.push(("h0(A⊗L)".into(), h0a));
    witness.dims.push(("h1(A⊗L)".into(), h1a));
    let lo = h0k - h0a;
    let mut slack = h1a;
    if refine && h1a > 0 && amb.dim() >= 1 {
        let map_a = m.map_a.as_ref().expect("homology monad has map_a");
        let h1 = cohomology_section_matrix(map_a, &m.a.twists, &m.b.twists, l, 1)?;
        let w = MatrixWitness::of(format!("H1(a) at {l}"), &h1);
        slack = w.nullity as i64;
        witness.matrices.push(w);
    }
    Ok(CohomResult { value: CohomValue::bracket(lo, lo + slack), method: Method::HomologyBound, witness })
}

/// `h^0(Λ^s F ⊗ L)` for the bundle of a monad, dispatching on its kind.
/// Homology monads support only `s = 1`.
pub fn h0_bundle(m: &MonadComplex, s: usize, l: &MultiDegree, refine: bool) -> Result<CohomResult, CohomError> {
    match m.kind() {
        MonadKind::Kernel if s == 1 => h0_kernel(m, l),
        MonadKind::Kernel => h0_exterior(m, s, l),
        MonadKind::Homology if s == 1 => homology_bound(m, l, refine),
        MonadKind::Homology => Err(CohomError::UnsupportedOperation(format!(
            "exterior power {s} of a homology monad"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_bundles() {
        let q = Ambient::product(1, 1);
        assert_eq!(h_line(&q, &MultiDegree::new2(2, 3), 0).unwrap(), 12);
        assert_eq!(h_line(&q, &MultiDegree::new2(-2, 0), 1).unwrap(), 1);
        assert_eq!(h_line(&q, &MultiDegree::new2(-3, -2), 2).unwrap(), 2);
        let p2 = Ambient::projective(2);
        for k in -8..8 {
            assert_eq!(h_line(&p2, &MultiDegree::new1(k), 1).unwrap(), 0);
        }
        assert_eq!(h_line(&p2, &MultiDegree::new1(-3), 2).unwrap(), 1);
        assert!(matches!(h_line(&p2, &MultiDegree::new1(0), 3), Err(CohomError::IndexOutOfRange { .. })));
    }

    #[test]
    fn subsets_are_lex() {
        assert_eq!(subsets(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn serre_duality_on_products() {
        let q = Ambient::product(1, 1);
        for a in -5..5 {
            for b in -5..5 {
                let d = MultiDegree::new2(a, b);
                let dual = MultiDegree::new2(-2 - a, -2 - b);
                for i in 0..=2 {
                    assert_eq!(h_line(&q, &d, i).unwrap(), h_line(&q, &dual, 2 - i).unwrap());
                }
            }
        }
    }

    fn load(text: &str) -> MonadComplex {
        crate::monad::MonadDocument::from_json(text).unwrap().build().unwrap()
    }

    #[test]
    fn rank3_exterior_table() {
        let k = load(include_str!("../../data/k_rank3.monad"));
        let expected = [
            [0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 2],
            [0, 0, 0, 4, 8, 12],
            [0, 0, 1, 8, 15, 22],
            [0, 0, 2, 12, 22, 32],
        ];
        for (kk, row) in expected.iter().enumerate() {
            for (ll, &v) in row.iter().enumerate() {
                let r = h0_exterior(&k, 2, &MultiDegree::new2(kk as i64, ll as i64)).unwrap();
                assert_eq!(r.value, CohomValue::Exact(v), "at ({kk},{ll})");
                assert!(r.witness.matrices.iter().all(MatrixWitness::audit));
            }
        }
        for (a, b) in [(2, 0), (1, 1), (0, 1), (1, 0), (0, 0), (0, 2)] {
            assert!(h0_kernel(&k, &MultiDegree::new2(a, b)).unwrap().vanishes());
        }
        assert_eq!(h0_exterior(&k, 1, &MultiDegree::new2(1, 1)).unwrap().value, CohomValue::Exact(0));
    }

    #[test]
    fn euler_sections() {
        let e = load(include_str!("../../data/euler.monad"));
        assert_eq!(h0_kernel(&e, &MultiDegree::new1(2)).unwrap().value, CohomValue::Exact(3));
        assert_eq!(h0_kernel(&e, &MultiDegree::new1(1)).unwrap().value, CohomValue::Exact(0));
    }

    #[test]
    fn homology_brackets() {
        let e = load(include_str!("../../data/e_homology.monad"));
        for l in [MultiDegree::new2(-1, 0), MultiDegree::new2(0, -1), MultiDegree::new2(-1, -1)] {
            assert_eq!(h0_homology(&e, &l).unwrap().value, CohomValue::Exact(0));
        }
        let l = MultiDegree::new2(-2, 0);
        assert_eq!(h0_homology(&e, &l).unwrap().value, CohomValue::Interval(0, 1));
        assert_eq!(h0_homology_refined(&e, &l).unwrap().value, CohomValue::Exact(0));
    }

    #[test]
    fn tails() {
        let k = load(include_str!("../../data/k_rank3.monad"));
        let spec = TailSpec { s: 1, fixed_axis: 2, free_axis_bound: -1, point: (0, 1) };
        assert_eq!(tail_vanish(&k, &spec).unwrap().method, Method::FiberDescent);
        let spec = TailSpec { s: 2, fixed_axis: 2, free_axis_bound: -1, point: (0, 1) };
        assert!(tail_vanish(&k, &spec).unwrap().vanishes());
        let spec = TailSpec { s: 2, fixed_axis: 2, free_axis_bound: 2, point: (0, 1) };
        assert!(matches!(tail_vanish(&k, &spec), Err(CohomError::FiberNotVanishing { .. })));
        let e = load(include_str!("../../data/e_homology.monad"));
        let spec = TailSpec { s: 1, fixed_axis: 1, free_axis_bound: -2, point: (0, 1) };
        assert!(tail_vanish(&e, &spec).unwrap().vanishes());
        let n2 = load(include_str!("../../data/k_n2.monad"));
        let spec = TailSpec { s: 2, fixed_axis: 2, free_axis_bound: -1, point: (0, 1) };
        assert!(tail_vanish(&n2, &spec).unwrap().vanishes());
    }
}
