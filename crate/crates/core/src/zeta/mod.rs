//! Point counts of double covers of `P^1 x P^1` over finite fields and the
//! Picard number bounds they imply.

mod charpoly;
mod count;
mod field;
pub mod rpoly;

pub use charpoly::{
    assemble_charpoly, newton_elementary, power_sums, rank_upper_bound, root_of_unity_count, roots_on_unit_circle,
    CharpolyCandidate, Elimination, FreeFamily, RankBound, ZetaProfile,
};
pub use count::{count_points, count_points_in, count_points_naive};
pub use field::{Fq, FqField, TABLE_LIMIT};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("coefficient {0} does not reduce to the prime field")]
    CoefficientReduction(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0} point counts do not determine the characteristic polynomial")]
    InsufficientCounts(usize),
    #[error("no consistent characteristic polynomial: {0}")]
    NoConsistentCandidate(String),
    #[error("profile has no candidate polynomial")]
    NoCandidate,
}

/// Serde helpers writing big integers as decimal strings.
pub(crate) mod big {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    fn parse<E: Error>(s: &str) -> Result<BigInt, E> {
        s.parse().map_err(|_| E::custom(format!("not an integer: {s}")))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(ToString::to_string))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Vec::<String>::deserialize(d)?.iter().map(|s| parse(s)).collect()
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(b) => s.serialize_some(&b.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
            Option::<String>::deserialize(d)?.map(|s| parse(&s)).transpose()
        }
    }
}
