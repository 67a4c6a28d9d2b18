use serde::{Deserialize, Serialize};

use super::{FreeSheaf, MonadComplex, MonadError, MonadKind};
use crate::poly::{Ambient, MultiDegree};

/// Rank and Chern classes of a bundle on a surface (or `P^n`, where `c2` is
/// the coefficient of `H^2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernData {
    pub rank: i64,
    pub c1: MultiDegree,
    pub c2: i64,
}

impl ChernData {
    pub fn dual(&self) -> ChernData {
        ChernData { rank: self.rank, c1: -self.c1, c2: self.c2 }
    }

    /// Chern data of `E ⊕ F`, truncated at degree two.
    pub fn whitney_sum(&self, other: &ChernData, ambient: &Ambient) -> Result<ChernData, MonadError> {
        Ok(ChernData {
            rank: self.rank + other.rank,
            c1: self.c1 + other.c1,
            c2: self.c2 + other.c2 + ambient.intersect(&self.c1, &other.c1)?,
        })
    }

    /// Solve `c(total) = c(sub) · c(self)` for the quotient `self`.
    pub fn quotient(total: &ChernData, sub: &ChernData, ambient: &Ambient) -> Result<ChernData, MonadError> {
        let c1 = total.c1 - sub.c1;
        let c2 = total.c2 - sub.c2 - ambient.intersect(&sub.c1, &c1)?;
        Ok(ChernData { rank: total.rank - sub.rank, c1, c2 })
    }

    /// Solve `c(total) = c(self) · c(quot)` for the subbundle `self`.
    pub fn kernel(total: &ChernData, quot: &ChernData, ambient: &Ambient) -> Result<ChernData, MonadError> {
        Self::quotient(total, quot, ambient)
    }

    /// `c1^2` against the ambient intersection form.
    pub fn c1_squared(&self, ambient: &Ambient) -> Result<i64, MonadError> {
        Ok(ambient.intersect(&self.c1, &self.c1)?)
    }
}

/// Chern data of a split bundle: `c1 = Σ d_i`, `c2 = Σ_{i<j} d_i · d_j`.
pub fn chern_free(f: &FreeSheaf) -> Result<ChernData, MonadError> {
    let amb = &f.ambient;
    let mut c1 = amb.zero_degree();
    let mut c2 = 0i64;
    for (i, d) in f.twists.iter().enumerate() {
        for e in &f.twists[..i] {
            c2 += amb.intersect(d, e)?;
        }
        c1 = c1 + *d;
    }
    Ok(ChernData { rank: f.rank() as i64, c1, c2 })
}

/// Chern data of `ker b` (kernel monads) or `ker b / im a` (homology monads).
pub fn chern_monad(m: &MonadComplex) -> Result<ChernData, MonadError> {
    let report = super::validate(m);
    if !report.structurally_sound() {
        return Err(MonadError::Validation(report.summary()));
    }
    let amb = m.ambient();
    let k = ChernData::kernel(&chern_free(&m.b)?, &chern_free(&m.c)?, amb)?;
    match m.kind() {
        MonadKind::Kernel => Ok(k),
        MonadKind::Homology => ChernData::quotient(&k, &chern_free(&m.a)?, amb),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_sheaves() {
        let q = Ambient::product(1, 1);
        let c = chern_free(&FreeSheaf::new(&q, vec![MultiDegree::new2(-1, -1); 4])).unwrap();
        assert_eq!((c.c1, c.c2), (MultiDegree::new2(-4, -4), 12));
        let p2 = Ambient::projective(2);
        let c = chern_free(&FreeSheaf::new(&p2, vec![MultiDegree::new1(-1); 3])).unwrap();
        assert_eq!((c.c1, c.c2), (MultiDegree::new1(-3), 3));
        let b = vec![
            MultiDegree::new2(-2, 0),
            MultiDegree::new2(-2, 0),
            MultiDegree::new2(0, -2),
            MultiDegree::new2(0, -2),
        ];
        let c = chern_free(&FreeSheaf::new(&q, b)).unwrap();
        assert_eq!((c.c1, c.c2), (MultiDegree::new2(-4, -4), 16));
    }

    #[test]
    fn whitney_matches_direct_sum() {
        let q = Ambient::product(1, 1);
        let f = FreeSheaf::new(&q, vec![MultiDegree::new2(1, -3), MultiDegree::new2(0, 2)]);
        let g = FreeSheaf::new(&q, vec![MultiDegree::new2(-1, 4)]);
        let lhs = chern_free(&f.direct_sum(&g)).unwrap();
        let rhs = chern_free(&f).unwrap().whitney_sum(&chern_free(&g).unwrap(), &q).unwrap();
        assert_eq!(lhs, rhs);
    }
}
