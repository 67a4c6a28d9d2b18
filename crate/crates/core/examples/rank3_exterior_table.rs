//! Sections of `Λ^2 K(k, l)` for `0 <= k, l <= 5`, rows printed from
//! `k = 5` down. Pass `n2` to use the monad `(x1^2, x2^2, y1^2, y2^2)`.

use k3monad::cohom::h0_bundle;
use k3monad::monad::MonadDocument;
use k3monad::poly::MultiDegree;

fn main() {
    let text = match std::env::args().nth(1).as_deref() {
        Some("n2") => include_str!("../data/k_n2.monad"),
        _ => include_str!("../data/k_rank3.monad"),
    };
    let m = MonadDocument::from_json(text).unwrap().build().unwrap();
    println!("{}", m.name.as_deref().unwrap_or("K"));
    for k in (0..=5).rev() {
        let row: Vec<String> = (0..=5)
            .map(|l| h0_bundle(&m, 2, &MultiDegree::new2(k, l), true).unwrap().value.to_string())
            .map(|v| format!("{v:>4}"))
            .collect();
        println!("k={k} {}", row.join(""));
    }
}
