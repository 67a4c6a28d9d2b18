use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::LatticeError;
use crate::poly::ExactMatrix;

/// A lattice given by basis names and a symmetric nondegenerate Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeDocument", into = "LatticeDocument")]
pub struct GramLattice {
    name: String,
    basis: Vec<String>,
    gram: Vec<Vec<i64>>,
}

/// Serialized form of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub name: String,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
}

impl TryFrom<LatticeDocument> for GramLattice {
    type Error = LatticeError;
    fn try_from(d: LatticeDocument) -> Result<Self, LatticeError> {
        GramLattice::new(d.name, d.basis, d.gram)
    }
}

impl From<GramLattice> for LatticeDocument {
    fn from(l: GramLattice) -> Self {
        LatticeDocument { name: l.name, basis: l.basis, gram: l.gram }
    }
}

impl GramLattice {
    pub fn new(name: impl Into<String>, basis: Vec<String>, gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = basis.len();
        if n == 0 || gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::BadGram(format!("expected a {n}x{n} matrix")));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::BadGram(format!("not symmetric at ({i},{j})")));
                }
            }
        }
        let l = GramLattice { name: name.into(), basis, gram };
        if l.determinant().is_zero() {
            return Err(LatticeError::BadGram("degenerate form".into()));
        }
        Ok(l)
    }

    /// `[a b c]`: the rank-two form `[[a, b], [b, c]]`.
    pub fn binary(name: &str, basis: [&str; 2], a: i64, b: i64, c: i64) -> Result<Self, LatticeError> {
        GramLattice::new(name, basis.iter().map(|s| s.to_string()).collect(), vec![vec![a, b], vec![b, c]])
    }

    pub fn hyperbolic() -> Self {
        Self::binary("U", ["E1", "E2"], 0, 1, 0).expect("valid")
    }

    pub fn hyperbolic_scaled(m: i64) -> Self {
        Self::binary(&format!("U({m})"), ["E1", "E2"], 0, m, 0).expect("valid")
    }

    /// `<n>` with generator `H`.
    pub fn rank_one(n: i64) -> Self {
        GramLattice::new(format!("<{n}>"), vec!["H".into()], vec![vec![n]]).expect("nonzero")
    }

    /// Picard lattice of the quartic with a degree-5 genus-2 curve.
    pub fn quartic_452() -> Self {
        Self::binary("[4 5 2]", ["H", "C"], 4, 5, 2).expect("valid")
    }

    /// `E8(-1)`: the negative of the E8 Cartan matrix.
    pub fn e8_negative() -> Self {
        let mut g = vec![vec![0i64; 8]; 8];
        for i in 0..8 {
            g[i][i] = -2;
        }
        // Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 attached to 4.
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        for (a, b) in edges {
            g[a][b] = 1;
            g[b][a] = 1;
        }
        GramLattice::new("E8(-1)", (1..=8).map(|i| format!("a{i}")).collect(), g).expect("unimodular")
    }

    /// `U^3 + E8(-1)^2`, the second cohomology of a K3 surface.
    pub fn k3() -> Self {
        let u = Self::hyperbolic();
        let e8 = Self::e8_negative();
        let mut parts = vec![u.clone(), u.clone(), u, e8.clone(), e8];
        let first = parts.remove(0);
        let sum = parts.into_iter().fold(first, |acc, p| acc.direct_sum(&p));
        GramLattice { name: "K3".into(), ..sum }
    }

    /// Catalogue lookup by name.
    pub fn named(name: &str) -> Option<Self> {
        Some(match name {
            "U" => Self::hyperbolic(),
            "U(2)" => Self::hyperbolic_scaled(2),
            "<2>" => Self::rank_one(2),
            "<-2>" => Self::rank_one(-2),
            "[4 5 2]" => Self::quartic_452(),
            "E8(-1)" => Self::e8_negative(),
            "K3" => Self::k3(),
            _ => return None,
        })
    }

    pub fn catalogue() -> Vec<Self> {
        ["U", "U(2)", "<2>", "<-2>", "[4 5 2]", "E8(-1)", "K3"].iter().filter_map(|n| Self::named(n)).collect()
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let (n, m) = (self.rank(), other.rank());
        let mut gram = vec![vec![0; n + m]; n + m];
        for i in 0..n {
            gram[i][..n].copy_from_slice(&self.gram[i]);
        }
        for i in 0..m {
            gram[n + i][n..].copy_from_slice(&other.gram[i]);
        }
        let offset = n;
        let basis = self
            .basis
            .iter()
            .cloned()
            .chain(other.basis.iter().enumerate().map(|(i, b)| {
                if self.basis.contains(b) {
                    format!("{b}'{}", offset + i)
                } else {
                    b.clone()
                }
            }))
            .collect();
        GramLattice { name: format!("{} + {}", self.name, other.name), basis, gram }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub fn determinant(&self) -> BigInt {
        int_det(&self.gram)
    }

    pub fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0i64;
        for i in 0..self.rank() {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank() {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    pub fn to_document(&self) -> LatticeDocument {
        self.clone().into()
    }
}

pub(crate) fn int_det(rows: &[Vec<i64>]) -> BigInt {
    if rows.is_empty() {
        return BigInt::one();
    }
    let m = ExactMatrix::from_i64(rows);
    m.determinant().to_integer()
}

/// An element of a lattice, in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeClass {
    lattice: Arc<GramLattice>,
    coords: Vec<i64>,
}

impl LatticeClass {
    pub fn new(lattice: &Arc<GramLattice>, coords: Vec<i64>) -> Result<Self, LatticeError> {
        if coords.len() != lattice.rank() {
            return Err(LatticeError::BadCoordinates { expected: lattice.rank(), got: coords.len() });
        }
        Ok(LatticeClass { lattice: Arc::clone(lattice), coords })
    }

    /// The `i`-th basis vector.
    pub fn basis_vector(lattice: &Arc<GramLattice>, i: usize) -> Self {
        let mut coords = vec![0; lattice.rank()];
        coords[i] = 1;
        LatticeClass { lattice: Arc::clone(lattice), coords }
    }

    pub fn by_name(lattice: &Arc<GramLattice>, name: &str) -> Option<Self> {
        lattice.basis().iter().position(|b| b == name).map(|i| Self::basis_vector(lattice, i))
    }

    pub fn lattice(&self) -> &Arc<GramLattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_same(&self, other: &LatticeClass) -> Result<(), LatticeError> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice {
            Ok(())
        } else {
            Err(LatticeError::LatticeMismatch(self.lattice.name().into(), other.lattice.name().into()))
        }
    }

    pub fn try_add(&self, other: &LatticeClass) -> Result<LatticeClass, LatticeError> {
        self.check_same(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(LatticeClass { lattice: Arc::clone(&self.lattice), coords })
    }

    pub fn scale(&self, k: i64) -> LatticeClass {
        LatticeClass { lattice: Arc::clone(&self.lattice), coords: self.coords.iter().map(|c| c * k).collect() }
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.coords.iter().zip(self.lattice.basis()) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let abs = c.abs();
            if abs == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{abs}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn pair(a: &LatticeClass, b: &LatticeClass) -> Result<i64, LatticeError> {
    a.check_same(b)?;
    Ok(a.lattice.form(&a.coords, &b.coords))
}

pub fn self_int(d: &LatticeClass) -> i64 {
    d.lattice.form(&d.coords, &d.coords)
}

/// Arithmetic genus by adjunction on a K3 surface: `D^2 = 2g - 2`.
pub fn genus(d: &LatticeClass) -> Result<i64, LatticeError> {
    let sq = self_int(d);
    if sq % 2 != 0 {
        return Err(LatticeError::OddSquare(sq));
    }
    Ok(sq / 2 + 1)
}

/// A Gram matrix of named classes, possibly degenerate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramReport {
    pub names: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    #[serde(serialize_with = "as_string")]
    pub det: BigInt,
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl GramReport {
    /// Build from pairings known only as numbers.
    pub fn from_pairings(names: Vec<String>, matrix: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = names.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(LatticeError::BadGram(format!("expected a {n}x{n} matrix")));
        }
        if (0..n).any(|i| (0..i).any(|j| matrix[i][j] != matrix[j][i])) {
            return Err(LatticeError::BadGram("not symmetric".into()));
        }
        let det = int_det(&matrix);
        Ok(GramReport { names, matrix, det })
    }

    /// A primitive integer vector `c` with `Σ c_i D_i` orthogonal to every
    /// `D_j`, when the kernel is one-dimensional.
    pub fn relation(&self) -> Option<Vec<i64>> {
        let m = ExactMatrix::from_i64(&self.matrix);
        let ker = m.kernel_basis();
        if ker.len() != 1 {
            return None;
        }
        primitive(&ker[0])
    }

    /// Express the last class in terms of the others, numerically: the
    /// coefficients `r_i` with `D_last ≡ Σ r_i D_i`. Requires the relation to
    /// involve the last class and the other classes to be independent.
    pub fn solve_last(&self) -> Option<Vec<BigRational>> {
        let rel = self.relation()?;
        let n = rel.len();
        let last = rel[n - 1];
        if last == 0 {
            return None;
        }
        let head: Vec<Vec<i64>> = self.matrix[..n - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
        if int_det(&head).is_zero() {
            return None;
        }
        Some(rel[..n - 1].iter().map(|&c| BigRational::new(BigInt::from(-c), BigInt::from(last))).collect())
    }
}

fn primitive(v: &[BigRational]) -> Option<Vec<i64>> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    // normalise so the last nonzero entry is negative: D_last appears as -D_last
    let lead = ints.iter().rev().find(|x| !x.is_zero())?;
    let sign = if lead.is_positive() { -BigInt::one() } else { BigInt::one() };
    ints.iter().map(|x| i64::try_from(x / &g * &sign).ok()).collect()
}

pub fn gram_of(classes: &[LatticeClass]) -> Result<GramReport, LatticeError> {
    for c in classes.iter().skip(1) {
        classes[0].check_same(c)?;
    }
    let matrix: Vec<Vec<i64>> =
        classes.iter().map(|a| classes.iter().map(|b| a.lattice.form(&a.coords, &b.coords)).collect()).collect();
    let names = classes.iter().map(|c| c.to_string()).collect();
    let det = int_det(&matrix);
    Ok(GramReport { names, matrix, det })
}
