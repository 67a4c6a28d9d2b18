//! Monad complexes `A -> B -> C` of split bundles, their validation, Chern
//! classes and fiber restrictions.

mod chern;
mod doc;
mod validate;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::poly::{Ambient, AmbientKind, MultiDegree, PolyError, PolyMatrix, RationalPolynomial};

pub use chern::{chern_free, chern_monad, ChernData};
pub use doc::{AmbientSpec, MonadDocument, SurfaceDocument};
pub use validate::{validate, ExactnessStatus, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonadError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("invalid fiber point {0}:{1}")]
    InvalidPoint(i64, i64),
    #[error("document error: {0}")]
    Document(String),
}

/// `⊕ O(d_i)` on an ambient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeSheaf {
    pub ambient: Ambient,
    pub twists: Vec<MultiDegree>,
}

impl FreeSheaf {
    pub fn new(ambient: &Ambient, twists: Vec<MultiDegree>) -> Self {
        FreeSheaf { ambient: ambient.clone(), twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn direct_sum(&self, other: &FreeSheaf) -> FreeSheaf {
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        FreeSheaf { ambient: self.ambient.clone(), twists }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum MonadKind {
    Kernel,
    Homology,
}

/// Imaginary parts of the map entries, for complexes over the Gaussian
/// rationals. Only [`MonadComplex::is_real`] looks at them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImaginaryParts {
    pub map_a: Option<PolyMatrix>,
    pub map_b: PolyMatrix,
}

/// `0 -> A -a-> B -b-> C -> 0`, exact at `A` and `C`.
///
/// `map_b` has `rank C` rows and `rank B` columns; `map_a` has `rank B` rows
/// and `rank A` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadComplex {
    pub name: Option<String>,
    pub a: FreeSheaf,
    pub b: FreeSheaf,
    pub c: FreeSheaf,
    pub map_a: Option<PolyMatrix>,
    pub map_b: PolyMatrix,
    pub imaginary: Option<ImaginaryParts>,
}

impl MonadComplex {
    pub fn kernel(b: FreeSheaf, c: FreeSheaf, map_b: PolyMatrix) -> Result<Self, MonadError> {
        let a = FreeSheaf::new(&b.ambient, Vec::new());
        Self::build(a, b, c, None, map_b)
    }

    pub fn homology(a: FreeSheaf, b: FreeSheaf, c: FreeSheaf, map_a: PolyMatrix, map_b: PolyMatrix) -> Result<Self, MonadError> {
        Self::build(a, b, c, Some(map_a), map_b)
    }

    fn build(
        a: FreeSheaf,
        b: FreeSheaf,
        c: FreeSheaf,
        map_a: Option<PolyMatrix>,
        map_b: PolyMatrix,
    ) -> Result<Self, MonadError> {
        let amb = &b.ambient;
        if a.ambient != *amb || c.ambient != *amb || map_b.ambient() != amb {
            return Err(MonadError::Validation("A, B, C and the maps must share one ambient".into()));
        }
        if map_b.rows() != c.rank() || map_b.cols() != b.rank() {
            return Err(MonadError::Validation(format!(
                "map_b is {}x{}, expected {}x{}",
                map_b.rows(),
                map_b.cols(),
                c.rank(),
                b.rank()
            )));
        }
        match &map_a {
            Some(m) => {
                if m.ambient() != amb {
                    return Err(MonadError::Validation("map_a lives on another ambient".into()));
                }
                if m.rows() != b.rank() || m.cols() != a.rank() {
                    return Err(MonadError::Validation(format!(
                        "map_a is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        b.rank(),
                        a.rank()
                    )));
                }
            }
            None if a.rank() > 0 => return Err(MonadError::Validation("A has positive rank but map_a is absent".into())),
            None => {}
        }
        let map_a = if a.rank() == 0 { None } else { map_a };
        Ok(MonadComplex { name: None, a, b, c, map_a, map_b, imaginary: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_imaginary_parts(mut self, parts: ImaginaryParts) -> Self {
        self.imaginary = Some(parts);
        self
    }

    pub fn ambient(&self) -> &Ambient {
        &self.b.ambient
    }

    pub fn kind(&self) -> MonadKind {
        if self.a.rank() == 0 {
            MonadKind::Kernel
        } else {
            MonadKind::Homology
        }
    }

    /// Rank of the bundle `ker b / im a`.
    pub fn rank(&self) -> i64 {
        self.b.rank() as i64 - self.c.rank() as i64 - self.a.rank() as i64
    }

    /// The kernel monad `ker b` underlying a homology monad.
    pub fn kernel_part(&self) -> MonadComplex {
        MonadComplex {
            name: self.name.clone(),
            a: FreeSheaf::new(self.ambient(), Vec::new()),
            b: self.b.clone(),
            c: self.c.clone(),
            map_a: None,
            map_b: self.map_b.clone(),
            imaginary: None,
        }
    }

    /// True iff every coefficient is real. Coefficients parsed from text are
    /// rational, so only complexes carrying nonzero imaginary parts fail.
    pub fn is_real(&self) -> bool {
        match &self.imaginary {
            None => true,
            Some(im) => im.map_b.is_zero() && im.map_a.as_ref().is_none_or(PolyMatrix::is_zero),
        }
    }

    /// Restrict to the fiber where variable group `axis` (1 or 2) is fixed at
    /// the point `[p0:p1]`. The result lives on the surviving `P^1`.
    pub fn restrict_to_fiber(&self, axis: usize, point: (i64, i64)) -> Result<MonadComplex, MonadError> {
        if point == (0, 0) {
            return Err(MonadError::InvalidPoint(0, 0));
        }
        if !(1..=2).contains(&axis) {
            return Err(MonadError::Validation(format!("axis must be 1 or 2, got {axis}")));
        }
        let amb = self.ambient();
        if amb.kind() != AmbientKind::ProductProjective(1, 1) {
            return Err(MonadError::Poly(PolyError::AmbientMismatch(format!(
                "fiber restriction needs P1 x P1, got {amb}"
            ))));
        }
        let fiber = amb.fiber_ambient(axis)?;
        let fixed = amb.group_range(axis - 1);
        let keep = 2 - axis;
        let mut asg = BTreeMap::new();
        for (var, val) in amb.variables()[fixed].iter().zip([point.0, point.1]) {
            asg.insert(var.clone(), RationalPolynomial::from_int(&fiber, val));
        }
        let restrict_sheaf =
            |f: &FreeSheaf| FreeSheaf::new(&fiber, f.twists.iter().map(|t| MultiDegree::new1(t[keep])).collect());
        let restrict_map = |m: &PolyMatrix| -> Result<PolyMatrix, MonadError> {
            let entries = m
                .entries()
                .iter()
                .map(|p| p.substitute(&fiber, &asg))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PolyMatrix::new(&fiber, m.rows(), m.cols(), entries)?)
        };
        let a = restrict_sheaf(&self.a);
        let b = restrict_sheaf(&self.b);
        let c = restrict_sheaf(&self.c);
        let map_b = restrict_map(&self.map_b)?;
        map_b.check_homogeneous(&b.twists, &c.twists)?;
        let map_a = match &self.map_a {
            Some(m) => {
                let r = restrict_map(m)?;
                r.check_homogeneous(&a.twists, &b.twists)?;
                Some(r)
            }
            None => None,
        };
        let mut out = Self::build(a, b, c, map_a, map_b)?;
        out.name = self.name.as_ref().map(|n| format!("{n}|fiber(axis {axis}, [{}:{}])", point.0, point.1));
        Ok(out)
    }

    /// Apply a permutation to the summands of `B`, permuting the columns of
    /// `map_b` and rows of `map_a` to match. `perm[i]` is the old index of the
    /// new `i`-th summand.
    pub fn permute_middle(&self, perm: &[usize]) -> MonadComplex {
        let mut out = self.clone();
        out.b.twists = perm.iter().map(|&i| self.b.twists[i]).collect();
        for r in 0..self.map_b.rows() {
            for (new, &old) in perm.iter().enumerate() {
                out.map_b.set(r, new, self.map_b.get(r, old).clone());
            }
        }
        if let (Some(src), Some(dst)) = (&self.map_a, out.map_a.as_mut()) {
            for (new, &old) in perm.iter().enumerate() {
                for c in 0..src.cols() {
                    dst.set(new, c, src.get(old, c).clone());
                }
            }
        }
        out
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn rank3_k() -> MonadComplex {
        let amb =
            Ambient::with_variables(AmbientKind::ProductProjective(1, 1), &["x1", "x2", "y1", "y2"]).unwrap();
        let row: Vec<_> = ["x1*y1", "x1*y2", "x2*y1", "x2*y2"].iter().map(|s| parse_poly(s, &amb).unwrap()).collect();
        MonadComplex::kernel(
            FreeSheaf::new(&amb, vec![MultiDegree::new2(-1, -1); 4]),
            FreeSheaf::new(&amb, vec![MultiDegree::new2(0, 0)]),
            PolyMatrix::from_rows(&amb, vec![row]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn fiber_of_rank3_kernel() {
        let k = rank3_k();
        let f = k.restrict_to_fiber(2, (0, 1)).unwrap();
        let shown: Vec<String> = f.map_b.entries().iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["0", "x1", "0", "x2"]);
        assert_eq!(f.b.twists, vec![MultiDegree::new1(-1); 4]);
        assert!(matches!(k.restrict_to_fiber(2, (0, 0)), Err(MonadError::InvalidPoint(0, 0))));
    }

    #[test]
    fn fiber_needs_product() {
        let amb = Ambient::projective(2);
        let row: Vec<_> = ["x0", "x1", "x2"].iter().map(|s| parse_poly(s, &amb).unwrap()).collect();
        let m = MonadComplex::kernel(
            FreeSheaf::new(&amb, vec![MultiDegree::new1(-1); 3]),
            FreeSheaf::new(&amb, vec![MultiDegree::new1(0)]),
            PolyMatrix::from_rows(&amb, vec![row]).unwrap(),
        )
        .unwrap();
        assert!(m.restrict_to_fiber(1, (0, 1)).is_err());
        assert!(m.is_real());
    }

    #[test]
    fn imaginary_marker_is_not_real() {
        let k = rank3_k();
        let amb = k.ambient().clone();
        let mut im = PolyMatrix::zeros(&amb, 1, 4);
        assert!(k.clone().with_imaginary_parts(ImaginaryParts { map_a: None, map_b: im.clone() }).is_real());
        im.set(0, 2, parse_poly("x2*y1", &amb).unwrap());
        assert!(!k.with_imaginary_parts(ImaginaryParts { map_a: None, map_b: im }).is_real());
    }

    #[test]
    fn shape_is_checked() {
        let k = rank3_k();
        let err = MonadComplex::kernel(k.b.clone(), FreeSheaf::new(k.ambient(), vec![]), k.map_b.clone());
        assert!(err.is_err());
    }
}
