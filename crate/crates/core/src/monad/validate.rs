use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{MonadComplex, MonadKind};
use crate::poly::{Ambient, ExactMatrix, PolyMatrix};

const RANDOM_TRIALS: usize = 24;
const RANDOM_SEED: u64 = 0x006b_336d_6f6e_6164;

/// How exactness at one end of the monad was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum ExactnessStatus {
    /// Rank-one monomial map whose entries have no common zero, decided
    /// combinatorially. A proof.
    ProvedByMonomialCover,
    /// Full rank at `trials` seeded random points. Evidence, not a proof.
    ProvedByRandomizedRank { trials: usize },
    /// The map drops rank at this point (homogeneous coordinates).
    RefutedAt { point: Vec<String> },
    Unknown,
}

impl ExactnessStatus {
    pub fn is_proved(&self) -> bool {
        matches!(self, ExactnessStatus::ProvedByMonomialCover)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, ExactnessStatus::RefutedAt { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub homogeneity: Result<(), String>,
    /// `None` for kernel monads.
    pub composite_zero: Option<bool>,
    pub surjectivity_b: ExactnessStatus,
    /// `None` for kernel monads.
    pub injectivity_a: Option<ExactnessStatus>,
}

impl ValidationReport {
    /// Homogeneous and `b∘a = 0`.
    pub fn structurally_sound(&self) -> bool {
        self.homogeneity.is_ok() && self.composite_zero != Some(false)
    }

    /// Structurally sound and neither end refuted.
    pub fn passes(&self) -> bool {
        self.structurally_sound()
            && !self.surjectivity_b.is_refuted()
            && !self.injectivity_a.as_ref().is_some_and(ExactnessStatus::is_refuted)
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if let Err(e) = &self.homogeneity {
            parts.push(format!("homogeneity: {e}"));
        }
        if self.composite_zero == Some(false) {
            parts.push("b∘a is not zero".to_string());
        }
        if self.surjectivity_b.is_refuted() {
            parts.push(format!("b not surjective: {:?}", self.surjectivity_b));
        }
        if let Some(s) = self.injectivity_a.as_ref().filter(|s| s.is_refuted()) {
            parts.push(format!("a not injective: {s:?}"));
        }
        if parts.is_empty() {
            "ok".into()
        } else {
            parts.join("; ")
        }
    }
}

pub fn validate(m: &MonadComplex) -> ValidationReport {
    let mut homogeneity = m.map_b.check_homogeneous(&m.b.twists, &m.c.twists).map_err(|e| e.to_string());
    if homogeneity.is_ok() {
        if let Some(a) = &m.map_a {
            homogeneity = a.check_homogeneous(&m.a.twists, &m.b.twists).map_err(|e| format!("map_a: {e}"));
        }
    }
    let composite_zero = m.map_a.as_ref().map(|a| match m.map_b.try_mul(a) {
        Ok(p) => p.is_zero(),
        Err(_) => false,
    });
    let surjectivity_b = if homogeneity.is_ok() { pointwise_full_rank(&m.map_b, m.c.rank()) } else { ExactnessStatus::Unknown };
    let injectivity_a = match (m.kind(), &m.map_a) {
        (MonadKind::Homology, Some(a)) if homogeneity.is_ok() => Some(pointwise_full_rank(a, m.a.rank())),
        (MonadKind::Homology, _) => Some(ExactnessStatus::Unknown),
        (MonadKind::Kernel, _) => None,
    };
    ValidationReport { homogeneity, composite_zero, surjectivity_b, injectivity_a }
}

/// Decide whether the bundle map has rank `target_rank` at every point.
fn pointwise_full_rank(map: &PolyMatrix, target_rank: usize) -> ExactnessStatus {
    if target_rank == 0 {
        return ExactnessStatus::ProvedByMonomialCover;
    }
    let single_line = (map.rows() == 1 && target_rank == 1) || (map.cols() == 1 && target_rank == 1);
    if single_line && map.entries().iter().all(|p| p.is_zero() || p.is_monomial()) {
        return monomial_cover(map);
    }
    randomized_rank(map, target_rank)
}

/// A rank-one monomial map drops rank exactly at common zeros of its entries.
/// Such a zero exists iff one exists at a coordinate point (one nonzero
/// variable per group), since shrinking the support of a point only adds
/// zeros of monomials.
fn monomial_cover(map: &PolyMatrix) -> ExactnessStatus {
    let amb = map.ambient();
    let supports: Vec<Vec<usize>> = map
        .entries()
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let (e, _) = p.terms().next().expect("nonzero monomial");
            e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i).collect()
        })
        .collect();
    for choice in coordinate_points(amb) {
        let kills_all = supports.iter().all(|s| s.iter().any(|v| !choice.contains(v)));
        if kills_all {
            let point = (0..amb.num_vars())
                .map(|v| if choice.contains(&v) { "1".to_string() } else { "0".to_string() })
                .collect();
            return ExactnessStatus::RefutedAt { point };
        }
    }
    ExactnessStatus::ProvedByMonomialCover
}

fn coordinate_points(amb: &Ambient) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for g in 0..amb.arity() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                amb.group_range(g).map(move |v| {
                    let mut c = prefix.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }
    out
}

fn randomized_rank(map: &PolyMatrix, target_rank: usize) -> ExactnessStatus {
    let amb = map.ambient();
    let mut rng = StdRng::seed_from_u64(RANDOM_SEED);
    for _ in 0..RANDOM_TRIALS {
        let point: Vec<BigRational> = loop {
            let p: Vec<i64> = (0..amb.num_vars()).map(|_| rng.gen_range(-1000..=1000)).collect();
            let groups_ok = (0..amb.arity()).all(|g| amb.group_range(g).any(|v| p[v] != 0));
            if groups_ok {
                break p.into_iter().map(|v| BigRational::from_integer(BigInt::from(v))).collect();
            }
        };
        let rows: Vec<Vec<BigRational>> = (0..map.rows())
            .map(|i| (0..map.cols()).map(|j| map.get(i, j).eval(&point)).collect())
            .collect();
        let m = ExactMatrix::from_rows(rows);
        if m.rows() == 0 || m.rank() < target_rank {
            // a random point where the rank drops is a concrete refutation
            let point = point.iter().map(ToString::to_string).collect();
            return ExactnessStatus::RefutedAt { point };
        }
    }
    ExactnessStatus::ProvedByRandomizedRank { trials: RANDOM_TRIALS }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::FreeSheaf;
    use crate::poly::{parse_poly, AmbientKind, MultiDegree};

    fn p2() -> Ambient {
        Ambient::with_variables(AmbientKind::Projective(2), &["x", "y", "z"]).unwrap()
    }

    fn row(a: &Ambient, items: &[&str]) -> PolyMatrix {
        PolyMatrix::from_rows(a, vec![items.iter().map(|s| parse_poly(s, a).unwrap()).collect()]).unwrap()
    }

    #[test]
    fn euler_is_covered() {
        let a = p2();
        let m = MonadComplex::kernel(
            FreeSheaf::new(&a, vec![MultiDegree::new1(-1); 3]),
            FreeSheaf::new(&a, vec![MultiDegree::new1(0)]),
            row(&a, &["x", "y", "z"]),
        )
        .unwrap();
        let r = validate(&m);
        assert_eq!(r.surjectivity_b, ExactnessStatus::ProvedByMonomialCover);
        assert!(r.passes());
    }

    #[test]
    fn missing_variable_is_refuted() {
        let a = p2();
        let m = MonadComplex::kernel(
            FreeSheaf::new(&a, vec![MultiDegree::new1(-1); 2]),
            FreeSheaf::new(&a, vec![MultiDegree::new1(0)]),
            row(&a, &["x", "y"]),
        )
        .unwrap();
        let r = validate(&m);
        assert_eq!(r.surjectivity_b, ExactnessStatus::RefutedAt { point: vec!["0".into(), "0".into(), "1".into()] });
    }

    #[test]
    fn product_cover() {
        let a = Ambient::with_variables(AmbientKind::ProductProjective(1, 1), &["x1", "x2", "y1", "y2"]).unwrap();
        let m = MonadComplex::kernel(
            FreeSheaf::new(&a, vec![MultiDegree::new2(-1, -1); 4]),
            FreeSheaf::new(&a, vec![MultiDegree::new2(0, 0)]),
            row(&a, &["x1*y1", "x1*y2", "x2*y1", "x2*y2"]),
        )
        .unwrap();
        assert_eq!(validate(&m).surjectivity_b, ExactnessStatus::ProvedByMonomialCover);
        // x1*y1, x2*y2 vanish together at ([1:0],[0:1])
        let m = MonadComplex::kernel(
            FreeSheaf::new(&a, vec![MultiDegree::new2(-1, -1); 2]),
            FreeSheaf::new(&a, vec![MultiDegree::new2(0, 0)]),
            row(&a, &["x1*y1", "x2*y2"]),
        )
        .unwrap();
        assert!(validate(&m).surjectivity_b.is_refuted());
    }

    #[test]
    fn composite_failure() {
        let a = p2();
        let bsheaf = FreeSheaf::new(&a, vec![MultiDegree::new1(0)]);
        let asheaf = FreeSheaf::new(&a, vec![MultiDegree::new1(-1)]);
        let csheaf = FreeSheaf::new(&a, vec![MultiDegree::new1(0)]);
        let map_a = PolyMatrix::from_rows(&a, vec![vec![parse_poly("x", &a).unwrap()]]).unwrap();
        let map_b = PolyMatrix::from_rows(&a, vec![vec![parse_poly("1", &a).unwrap()]]).unwrap();
        let m = MonadComplex::homology(asheaf, bsheaf, csheaf, map_a, map_b).unwrap();
        let r = validate(&m);
        assert_eq!(r.composite_zero, Some(false));
        assert!(!r.structurally_sound());
    }

    #[test]
    fn non_monomial_target_uses_random_points() {
        let a = p2();
        let m = MonadComplex::kernel(
            FreeSheaf::new(&a, vec![MultiDegree::new1(-1); 3]),
            FreeSheaf::new(&a, vec![MultiDegree::new1(0)]),
            row(&a, &["x + y", "y - z", "z"]),
        )
        .unwrap();
        assert_eq!(validate(&m).surjectivity_b, ExactnessStatus::ProvedByRandomizedRank { trials: RANDOM_TRIALS });
    }
}
