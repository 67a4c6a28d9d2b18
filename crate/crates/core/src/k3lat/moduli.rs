use serde::{Deserialize, Serialize};

use crate::monad::ChernData;
use crate::poly::{Ambient, AmbientKind, MultiDegree};

/// `χ(O_X)` of a K3 surface.
const CHI_K3: i64 = 2;

/// Expected dimension of the moduli of rank `r` sheaves on a K3 surface:
/// `2 r c2 - (r-1) c1^2 - (r^2-1) χ(O_X)`.
pub fn expected_dim(r: i64, c1_sq: i64, c2: i64) -> i64 {
    expected_dim_on(r, c1_sq, c2, CHI_K3)
}

/// The same count on a surface with holomorphic Euler characteristic `chi`.
pub fn expected_dim_on(r: i64, c1_sq: i64, c2: i64, chi: i64) -> i64 {
    assert!(r >= 1, "rank must be positive");
    2 * r * c2 - (r - 1) * c1_sq - (r * r - 1) * chi
}

/// The `k`-th rigid rank-two class on a double plane: `(x, y)` with
/// `c1 = x·π*O(1)`, `c2 = y` and `expected_dim(2, 2x^2, y) = 0`.
pub fn rigid_rank2_classes(k: i64) -> (i64, i64) {
    let x = 2 * k + 1;
    let y = 2 + 2 * k + 2 * k * k;
    debug_assert_eq!(expected_dim(2, 2 * x * x, y), 0);
    (x, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverKind {
    /// Double cover of `P^2` branched along a sextic.
    DoublePlane,
    /// Double cover of `P^1 x P^1` branched along a `(4,4)` curve.
    DoubleQuadric,
    /// A quartic in `P^3`; not a cover.
    Quartic,
}

/// A K3 surface presented over a base, with the catalogued Picard facts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub kind: CoverKind,
    pub description: String,
    /// `π*: Pic(base) -> Pic(X)` is an isomorphism.
    pub pic_isomorphism: bool,
    pub branch_nonempty: bool,
}

impl CoverSpec {
    /// Generic double plane, `Pic X = <2>`.
    pub fn double_plane() -> Self {
        CoverSpec {
            kind: CoverKind::DoublePlane,
            description: "double cover of P^2 branched along a smooth sextic; Pic X = <2>".into(),
            pic_isomorphism: true,
            branch_nonempty: true,
        }
    }

    /// The double quadric with Picard lattice `U(2)` spanned by the pulled back rulings.
    pub fn double_quadric() -> Self {
        CoverSpec {
            kind: CoverKind::DoubleQuadric,
            description: "double cover of P^1 x P^1 branched along a (4,4) curve; Pic X = U(2)".into(),
            pic_isomorphism: true,
            branch_nonempty: true,
        }
    }

    pub fn quartic() -> Self {
        CoverSpec {
            kind: CoverKind::Quartic,
            description: "quartic surface in P^3; no covering map".into(),
            pic_isomorphism: false,
            branch_nonempty: false,
        }
    }

    pub fn is_double_cover(&self) -> bool {
        self.kind != CoverKind::Quartic
    }

    pub fn base_kind(&self) -> Option<AmbientKind> {
        match self.kind {
            CoverKind::DoublePlane => Some(AmbientKind::Projective(2)),
            CoverKind::DoubleQuadric => Some(AmbientKind::ProductProjective(1, 1)),
            CoverKind::Quartic => None,
        }
    }

    pub fn named(name: &str) -> Option<Self> {
        match name {
            "double_plane" => Some(Self::double_plane()),
            "double_quadric" => Some(Self::double_quadric()),
            "quartic" => Some(Self::quartic()),
            _ => None,
        }
    }
}

/// Chern data of `π*E` on a double cover, with `c1` kept as a base class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PulledBackChern {
    pub rank: i64,
    /// `c1(π*E) = π*(c1_base)`.
    pub c1_base: MultiDegree,
    pub c1_squared: i64,
    pub c2: i64,
    pub base_c2: i64,
}

pub fn pullback_chern(c: &ChernData, base: &Ambient, cover: &CoverSpec) -> Option<PulledBackChern> {
    if !cover.is_double_cover() || cover.base_kind() != Some(base.kind()) {
        return None;
    }
    let sq = base.intersect(&c.c1, &c.c1).ok()?;
    Some(PulledBackChern { rank: c.rank, c1_base: c.c1, c1_squared: 2 * sq, c2: 2 * c.c2, base_c2: c.c2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_dimensions() {
        assert_eq!(expected_dim(3, 64, 24), 0);
        assert_eq!(expected_dim(2, 2 * 9, 6), 0);
        assert_eq!(expected_dim(1, 7, 5), 10);
        // rank 2 on P1 x P1 with c1 = (1,1): 4 c2 - 5
        assert_eq!(expected_dim_on(2, 2, 2, 1), 3);
        for x in -5..=5i64 {
            for y in -20..=20 {
                assert_eq!(expected_dim(2, 2 * x * x, y), 4 * y - 2 * x * x - 6);
            }
        }
    }

    #[test]
    fn rigid_family() {
        assert_eq!(rigid_rank2_classes(0), (1, 2));
        assert_eq!(rigid_rank2_classes(-2), (-3, 6));
        for x in -99..=99i64 {
            for y in -10..=20000 {
                let rigid = expected_dim(2, 2 * x * x, y) == 0;
                let on_family = x % 2 != 0 && rigid_rank2_classes((x - 1).div_euclid(2)) == (x, y);
                assert_eq!(rigid, on_family, "({x},{y})");
            }
        }
    }

    #[test]
    fn doubling() {
        let p11 = Ambient::product(1, 1);
        let k = ChernData { rank: 3, c1: MultiDegree::new2(-4, -4), c2: 12 };
        let pb = pullback_chern(&k, &p11, &CoverSpec::double_quadric()).unwrap();
        assert_eq!((pb.c2, pb.c1_squared), (24, 64));
        let p2 = Ambient::projective(2);
        let t = ChernData { rank: 2, c1: MultiDegree::new1(-3), c2: 3 };
        let pb = pullback_chern(&t, &p2, &CoverSpec::double_plane()).unwrap();
        assert_eq!((pb.c1_base, pb.c2, pb.c1_squared), (MultiDegree::new1(-3), 6, 18));
        assert!(pullback_chern(&t, &p2, &CoverSpec::double_quadric()).is_none());
        assert!(pullback_chern(&t, &p2, &CoverSpec::quartic()).is_none());
        for s in 1..6 {
            let ks = ChernData { rank: 2, c1: MultiDegree::new1(-s), c2: s * s };
            assert_eq!(pullback_chern(&ks, &p2, &CoverSpec::double_plane()).unwrap().c2, 2 * s * s);
        }
    }
}
