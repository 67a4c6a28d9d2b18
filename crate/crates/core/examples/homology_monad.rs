//! A rank-two homology monad `O -> O(1,0)^2 + O(0,1)^2 -> O(1,1)` on
//! P^1 x P^1: the three core twists, fiber tails over `x = [0:1]`, and the
//! expected dimension of its pullback to a K3 double cover.

use k3monad::cohom::h0_bundle;
use k3monad::k3lat::{expected_dim, expected_dim_on, pullback_chern, CoverSpec};
use k3monad::monad::{chern_monad, MonadDocument};
use k3monad::poly::MultiDegree;
use k3monad::stability::{certify, CertifyOptions, Polarization};

fn main() {
    let m = MonadDocument::from_json(include_str!("../data/e_homology.monad")).unwrap().build().unwrap();
    for (k, l) in [(-1, 0), (0, -1), (-1, -1)] {
        let r = h0_bundle(&m, 1, &MultiDegree::new2(k, l), true).unwrap();
        println!("h0(E({k},{l})) = {}", r.value);
    }
    let opts = CertifyOptions { fiber_point: (0, 1), ..CertifyOptions::default() };
    let cert = certify(&m, &Polarization::standard(m.ambient()), &opts).unwrap();
    print!("{}", cert.summary());

    let c = chern_monad(&m).unwrap();
    let c1_sq = c.c1_squared(m.ambient()).unwrap();
    println!("rank {}, c1 {}, c2 {}; moduli dimension on P1 x P1: {}", c.rank, c.c1, c.c2, expected_dim_on(c.rank, c1_sq, c.c2, 1));
    let p = pullback_chern(&c, m.ambient(), &CoverSpec::double_quadric()).unwrap();
    println!("cover: c1^2 = {}, c2 = {}, expected dimension {}", p.c1_squared, p.c2, expected_dim(p.rank, p.c1_squared, p.c2));
}
