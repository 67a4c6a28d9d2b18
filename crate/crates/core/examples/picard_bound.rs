//! Count points on the double cover of P^1 x P^1 branched along `data/b44.poly`
//! and bound its geometric Picard number.
//!
//! `cargo run --release --example picard_bound -- [max_n] [threads]`

use std::time::Instant;

use k3monad::monad::SurfaceDocument;
use k3monad::zeta::{assemble_charpoly, count_points, rank_upper_bound};

fn main() {
    let mut args = std::env::args().skip(1);
    let max_n: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(9);
    let threads: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);
    let doc = SurfaceDocument::from_json(include_str!("../data/b44.poly")).expect("surface document");
    let (_, f) = doc.build().expect("branch curve");
    let p = 3;
    let mut counts = Vec::new();
    for n in 1..=max_n {
        let start = Instant::now();
        let c = count_points(&f, p, n, threads).expect("count");
        let q = (p as i128).pow(n);
        println!("n={n:2} N={c:12} t={:8} ({:.2?})", c as i128 - 1 - q * q, start.elapsed());
        counts.push(c);
    }
    let profile = assemble_charpoly(&counts, p, 2).expect("characteristic polynomial");
    for c in &profile.candidates {
        println!("sign {:+} middle {:?}: {} eigenvalues q·ζ", c.sign, c.middle.as_ref().map(ToString::to_string), c.roots_of_unity);
    }
    for e in &profile.eliminated {
        println!("eliminated sign {:+}: {}", e.sign, e.reason);
    }
    let bound = rank_upper_bound(&profile).expect("bound");
    println!("rho <= {}", bound.bound);
    for n in &bound.notes {
        println!("  {n}");
    }
}
