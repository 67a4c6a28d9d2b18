#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use k3monad::monad::{MonadComplex, MonadDocument, SurfaceDocument};

pub fn data(name: &str) -> String {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn monad(name: &str) -> MonadComplex {
    MonadDocument::from_json(&data(name)).unwrap().build().unwrap()
}

pub fn surface(name: &str) -> SurfaceDocument {
    SurfaceDocument::from_json(&data(name)).unwrap()
}

/// Rank by plain Gaussian elimination with the first nonzero pivot.
pub fn oracle_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = BigRational::one() / m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone() * &inv;
                for k in c..ncols {
                    let v = m[rank][k].clone() * &f;
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
