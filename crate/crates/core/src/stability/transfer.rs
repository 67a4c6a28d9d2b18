use serde::{Deserialize, Serialize};

use super::certificate::{StabilityCertificate, Subject};
use super::StabilityError;
use crate::k3lat::{pullback_chern, CoverKind, CoverSpec, PulledBackChern};
use crate::poly::AmbientKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferRule {
    /// Rank two on `P^2`, pulled back along a double cover with nonempty branch locus.
    RankTwoDoublePlane,
    /// The vanishing certificate transfers when `π*` is an isomorphism on Picard groups.
    PicardIsomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferredStatement {
    pub statement: String,
    pub rule: TransferRule,
    pub cover: CoverSpec,
    pub chern: PulledBackChern,
    /// `deg_{π*H}(π*L)` for the boundary degree of each region.
    pub doubled_degree_bounds: Vec<i64>,
    pub polarization_square: i64,
}

/// `deg_{π*H}(π*L) = 2 deg_H(L)` on a double cover.
pub fn pullback_degree(l_degree: i64) -> i64 {
    2 * l_degree
}

/// Transfer a stable verdict to the pullback on a double cover.
pub fn pullback_transfer(cert: &StabilityCertificate, cover: &CoverSpec) -> Result<TransferredStatement, StabilityError> {
    let na = |why: &str| Err(StabilityError::NotApplicable(why.to_string()));
    if !cert.verdict.is_stable() {
        return na("the certificate is not stable");
    }
    if cover.kind == CoverKind::Quartic {
        return na("a quartic surface is not a double cover");
    }
    let Subject::Monad { monad, polarization, .. } = &cert.subject else {
        return na("the certificate does not live on a projective base");
    };
    let base = monad.build()?.ambient().clone();
    if cover.base_kind() != Some(base.kind()) {
        return na("the cover's base differs from the bundle's ambient");
    }
    let rule = if cert.chern.rank == 2 && base.kind() == AmbientKind::Projective(2) && cover.branch_nonempty {
        TransferRule::RankTwoDoublePlane
    } else if cover.pic_isomorphism {
        TransferRule::PicardIsomorphism
    } else {
        return na("need rank two on P^2 or a Picard isomorphism");
    };
    let chern = pullback_chern(&cert.chern, &base, cover)
        .ok_or_else(|| StabilityError::NotApplicable("Chern data does not pull back".into()))?;
    Ok(TransferredStatement {
        statement: format!("π*{} is slope stable with respect to π*H", cert.bundle),
        rule,
        cover: cover.clone(),
        chern,
        doubled_degree_bounds: cert.regions.iter().map(|r| pullback_degree(r.degree_bound)).collect(),
        polarization_square: 2 * polarization.self_intersection(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::MonadDocument;
    use crate::stability::{certify, CertifyOptions, Polarization, Verdict};

    fn cert(name: &str) -> StabilityCertificate {
        let path = format!("{}/data/{name}.monad", env!("CARGO_MANIFEST_DIR"));
        let m = MonadDocument::from_json(&std::fs::read_to_string(path).unwrap()).unwrap().build().unwrap();
        certify(&m, &Polarization::standard(m.ambient()), &CertifyOptions::default()).unwrap()
    }

    #[test]
    fn routes() {
        let t = cert("euler");
        let s = pullback_transfer(&t, &CoverSpec::double_plane()).unwrap();
        assert_eq!(s.rule, TransferRule::RankTwoDoublePlane);
        assert_eq!((s.chern.c2, s.chern.c1_squared), (6, 18));
        assert!(pullback_transfer(&t, &CoverSpec::double_quadric()).is_err());
        assert!(pullback_transfer(&t, &CoverSpec::quartic()).is_err());

        let k = cert("k_rank3");
        let s = pullback_transfer(&k, &CoverSpec::double_quadric()).unwrap();
        assert_eq!(s.rule, TransferRule::PicardIsomorphism);
        assert_eq!(s.chern.c2, 24);
        assert_eq!(s.polarization_square, 4);

        let mut bad = k.clone();
        bad.verdict = Verdict::Inconclusive { reason: "x".into(), twist: None, value: None };
        assert!(matches!(pullback_transfer(&bad, &CoverSpec::double_quadric()), Err(StabilityError::NotApplicable(_))));
    }

    #[test]
    fn degrees_double() {
        assert_eq!(pullback_degree(1), 2);
        assert_eq!(pullback_degree(0), 0);
        assert_eq!(pullback_degree(-4), -8);
    }
}
