//! The cotangent bundle of P^2 as the kernel of the Euler map
//! `O(-1)^3 -> O`, its Chern data, a stability certificate, and the
//! pulled back data on a double plane.

use k3monad::k3lat::{pullback_chern, CoverSpec};
use k3monad::monad::{chern_monad, MonadDocument};
use k3monad::stability::{certify, pullback_transfer, CertifyOptions, Polarization};

fn main() {
    let doc = MonadDocument::from_json(include_str!("../data/euler.monad")).unwrap();
    let m = doc.build().unwrap();
    let c = chern_monad(&m).unwrap();
    println!("rank {}, c1 {}, c2 {}", c.rank, c.c1, c.c2);

    let h = Polarization::standard(m.ambient());
    let cert = certify(&m, &h, &CertifyOptions::default()).unwrap();
    print!("{}", cert.summary());

    let cover = CoverSpec::double_plane();
    let pulled = pullback_chern(&c, m.ambient(), &cover).unwrap();
    println!("on the double plane: c1 = pullback of O{}, c1^2 = {}, c2 = {}", pulled.c1_base, pulled.c1_squared, pulled.c2);
    let t = pullback_transfer(&cert, &cover).unwrap();
    println!("{}", t.statement);
}
