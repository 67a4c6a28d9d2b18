//! The family `K_s = ker(O^3 -> O(s))` on P^2 given by `(x^s, y^s, z^s)`.
//! For each `s` the dual has `c1 = s`, `c2 = s^2`, and pulls back to a
//! double plane with `c2 = 2 s^2`.

use k3monad::k3lat::{pullback_chern, CoverSpec};
use k3monad::monad::{chern_monad, MonadDocument};
use k3monad::stability::{certify, CertifyOptions, Polarization};

fn monad(s: i64) -> MonadDocument {
    let text = format!(
        r#"{{
            "name": "K_{s}",
            "ambient": {{"type": "projective", "dim": 2, "variables": ["x", "y", "z"]}},
            "middle": [[0], [0], [0]],
            "target": [[{s}]],
            "map_b": [["x^{s}", "y^{s}", "z^{s}"]]
        }}"#
    );
    MonadDocument::from_json(&text).unwrap()
}

fn main() {
    for s in 1..=4 {
        let m = monad(s).build().unwrap();
        let dual = chern_monad(&m).unwrap().dual();
        let cert = certify(&m, &Polarization::standard(m.ambient()), &CertifyOptions::default()).unwrap();
        let cover = pullback_chern(&dual, m.ambient(), &CoverSpec::double_plane()).unwrap();
        println!(
            "s={s}: dual c1 {}, c2 {}; stable: {}; on the double plane c2 = {}",
            dual.c1,
            dual.c2,
            cert.verdict.is_stable(),
            cover.c2
        );
    }
}
