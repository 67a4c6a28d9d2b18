use std::collections::HashMap;

use super::basis::{basis_for_pattern, in_pattern, patterns_for};
use super::{monomial_basis, Ambient, ExactMatrix, MultiDegree, PolyError, RationalPolynomial};

/// Matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    ambient: Ambient,
    rows: usize,
    cols: usize,
    entries: Vec<RationalPolynomial>,
}

impl PolyMatrix {
    pub fn new(ambient: &Ambient, rows: usize, cols: usize, entries: Vec<RationalPolynomial>) -> Result<Self, PolyError> {
        if entries.iter().any(|e| e.ambient() != ambient) {
            return Err(PolyError::AmbientMismatch("matrix entry on a different ambient".into()));
        }
        if entries.len() != rows * cols {
            return Err(PolyError::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(PolyMatrix { ambient: ambient.clone(), rows, cols, entries })
    }

    pub fn zeros(ambient: &Ambient, rows: usize, cols: usize) -> Self {
        PolyMatrix { ambient: ambient.clone(), rows, cols, entries: vec![RationalPolynomial::zero(ambient); rows * cols] }
    }

    pub fn from_rows(ambient: &Ambient, rows: Vec<Vec<RationalPolynomial>>) -> Result<Self, PolyError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(PolyError::Shape("ragged polynomial matrix".into()));
        }
        Self::new(ambient, r, c, rows.into_iter().flatten().collect())
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalPolynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: RationalPolynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[RationalPolynomial] {
        &self.entries
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        if self.cols != other.rows {
            return Err(PolyError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ambient != other.ambient {
            return Err(PolyError::AmbientMismatch(format!("{} vs {}", self.ambient, other.ambient)));
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RationalPolynomial::zero(&self.ambient);
                for k in 0..self.cols {
                    acc = acc.try_add(&self.get(i, k).try_mul(other.get(k, j))?)?;
                }
                out.push(acc);
            }
        }
        Ok(PolyMatrix { ambient: self.ambient.clone(), rows: self.rows, cols: other.cols, entries: out })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RationalPolynomial::is_zero)
    }

    /// Checks that entry `(i,j)` is zero or homogeneous of degree `target_i - source_j`.
    pub fn check_homogeneous(&self, source: &[MultiDegree], target: &[MultiDegree]) -> Result<(), PolyError> {
        if self.cols != source.len() || self.rows != target.len() {
            return Err(PolyError::Shape(format!(
                "map is {}x{} but twists give {}x{}",
                self.rows,
                self.cols,
                target.len(),
                source.len()
            )));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let expected = target[i] - source[j];
                if !e.is_zero() && !e.is_homogeneous_of(&expected) {
                    return Err(PolyError::Homogeneity { row: i, col: j, expected, entry: e.to_string() });
                }
            }
        }
        Ok(())
    }
}

/// Matrix of `H^0(⊕ O(source_j) ⊗ L) → H^0(⊕ O(target_i) ⊗ L)` in monomial bases.
pub fn section_matrix(
    map: &PolyMatrix,
    source: &[MultiDegree],
    target: &[MultiDegree],
    l: &MultiDegree,
) -> Result<ExactMatrix, PolyError> {
    map.check_homogeneous(source, target)?;
    let ambient = &map.ambient;
    let src: Vec<_> = source.iter().map(|d| monomial_basis(ambient, &(*d + *l))).collect();
    let tgt: Vec<_> = target.iter().map(|d| monomial_basis(ambient, &(*d + *l))).collect();
    let ncols: usize = src.iter().map(Vec::len).sum();
    let nrows: usize = tgt.iter().map(Vec::len).sum();
    let mut out = ExactMatrix::zeros(nrows, ncols);
    let mut row_index: Vec<HashMap<&[u32], usize>> = Vec::with_capacity(tgt.len());
    let mut off = 0;
    for block in &tgt {
        row_index.push(block.iter().enumerate().map(|(k, e)| (e.as_slice(), off + k)).collect());
        off += block.len();
    }
    let mut col = 0;
    for (j, block) in src.iter().enumerate() {
        for mono in block {
            for (i, idx) in row_index.iter().enumerate() {
                for (e, c) in map.get(i, j).terms() {
                    let prod: Vec<u32> = e.iter().zip(mono).map(|(a, b)| a + b).collect();
                    let r = idx[prod.as_slice()];
                    let v = out.get(r, col) + c;
                    out.set(r, col, v);
                }
            }
            col += 1;
        }
    }
    Ok(out)
}

/// Matrix of the induced map on `H^i` of line-bundle sums, in Laurent-monomial
/// bases (see [`super::cohomology_basis`]).
pub fn cohomology_section_matrix(
    map: &PolyMatrix,
    source: &[MultiDegree],
    target: &[MultiDegree],
    l: &MultiDegree,
    i: usize,
) -> Result<ExactMatrix, PolyError> {
    map.check_homogeneous(source, target)?;
    let ambient = &map.ambient;
    let pats = patterns_for(ambient, i);
    let basis = |d: &MultiDegree| -> Vec<(usize, Vec<i64>)> {
        pats.iter()
            .enumerate()
            .flat_map(|(pi, p)| basis_for_pattern(ambient, &(*d + *l), p).into_iter().map(move |e| (pi, e)))
            .collect()
    };
    let src: Vec<_> = source.iter().map(basis).collect();
    let tgt: Vec<_> = target.iter().map(basis).collect();
    let ncols: usize = src.iter().map(Vec::len).sum();
    let nrows: usize = tgt.iter().map(Vec::len).sum();
    let mut out = ExactMatrix::zeros(nrows, ncols);
    let mut row_index: Vec<HashMap<Vec<i64>, usize>> = Vec::with_capacity(tgt.len());
    let mut off = 0;
    for block in &tgt {
        row_index.push(block.iter().enumerate().map(|(k, (_, e))| (e.clone(), off + k)).collect());
        off += block.len();
    }
    let mut col = 0;
    for (j, block) in src.iter().enumerate() {
        for (pi, mono) in block {
            for (r_blk, idx) in row_index.iter().enumerate() {
                for (e, c) in map.get(r_blk, j).terms() {
                    let prod: Vec<i64> = e.iter().zip(mono).map(|(a, b)| i64::from(*a) + b).collect();
                    if !in_pattern(ambient, &prod, &pats[*pi]) {
                        continue;
                    }
                    let r = idx[&prod];
                    let v = out.get(r, col) + c;
                    out.set(r, col, v);
                }
            }
            col += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn row(a: &Ambient, items: &[&str]) -> PolyMatrix {
        PolyMatrix::from_rows(a, vec![items.iter().map(|s| parse_poly(s, a).unwrap()).collect()]).unwrap()
    }

    #[test]
    fn euler_map_on_constants() {
        let a = Ambient::with_variables(crate::poly::AmbientKind::Projective(2), &["x", "y", "z"]).unwrap();
        let m = row(&a, &["x", "y", "z"]);
        let src = vec![MultiDegree::new1(0); 3];
        let tgt = vec![MultiDegree::new1(1)];
        let s = section_matrix(&m, &src, &tgt, &MultiDegree::new1(0)).unwrap();
        assert_eq!((s.rows(), s.cols(), s.rank()), (3, 3, 3));
        let s = section_matrix(&m, &src, &tgt, &MultiDegree::new1(-1)).unwrap();
        assert_eq!((s.rows(), s.cols()), (1, 0));
    }

    #[test]
    fn euler_map_with_empty_source() {
        let a = Ambient::projective(2);
        let m = row(&a, &["x0", "x1", "x2"]);
        let src = vec![MultiDegree::new1(0); 3];
        let tgt = vec![MultiDegree::new1(1)];
        let s = section_matrix(&m, &src, &tgt, &MultiDegree::new1(-1)).unwrap();
        assert_eq!(s.cols(), 0);
    }

    #[test]
    fn rank3_kernel_at_one_one() {
        let a = Ambient::with_variables(crate::poly::AmbientKind::ProductProjective(1, 1), &["x1", "x2", "y1", "y2"])
            .unwrap();
        let m = row(&a, &["x1*y1", "x1*y2", "x2*y1", "x2*y2"]);
        let src = vec![MultiDegree::new2(-1, -1); 4];
        let tgt = vec![MultiDegree::new2(0, 0)];
        let s = section_matrix(&m, &src, &tgt, &MultiDegree::new2(1, 1)).unwrap();
        assert_eq!((s.rows(), s.cols()), (4, 4));
        let s = section_matrix(&m, &src, &tgt, &MultiDegree::new2(2, 2)).unwrap();
        assert_eq!((s.rows(), s.cols()), (9, 16));
        assert_eq!(s.kernel_dim(), 16 - 9);
    }

    #[test]
    fn homogeneity_error_names_entry() {
        let a = Ambient::projective(2);
        let m = row(&a, &["x0", "x1^2", "x2"]);
        let err = section_matrix(&m, &[MultiDegree::new1(0); 3], &[MultiDegree::new1(1)], &MultiDegree::new1(0));
        assert!(matches!(err, Err(PolyError::Homogeneity { row: 0, col: 1, .. })));
    }

    #[test]
    fn h1_of_multiplication_on_p1() {
        // x0: H^1(O(-3)) -> H^1(O(-2)) is surjective onto a 1-dim space
        let a = Ambient::projective(1);
        let m = row(&a, &["x0"]);
        let s =
            cohomology_section_matrix(&m, &[MultiDegree::new1(-1)], &[MultiDegree::new1(0)], &MultiDegree::new1(-2), 1)
                .unwrap();
        assert_eq!((s.rows(), s.cols(), s.rank()), (1, 2, 1));
    }
}
