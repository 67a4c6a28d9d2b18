//! Stability of `K = ker(O(-1)^3 -> O)` given by `(x, y, w)` on a quartic
//! surface with Picard lattice `[4 5 2]`.

use std::sync::Arc;

use k3monad::k3lat::{basepoint_check, GramLattice, LatticeClass};
use k3monad::monad::{MonadDocument, SurfaceDocument};
use k3monad::stability::{verify, Polarization};

fn main() {
    let surface = SurfaceDocument::from_json(include_str!("../data/quartic.poly")).unwrap();
    let monad = MonadDocument::from_json(include_str!("../data/quartic_k.monad")).unwrap();
    let (_, f) = surface.build().unwrap();
    let m = monad.build().unwrap();
    match basepoint_check(&f, &m.map_b).unwrap() {
        Some(p) => println!("map degenerates only at {p:?}, where f does not vanish"),
        None => println!("map has no base points"),
    }

    let lat = Arc::new(GramLattice::quartic_452());
    let h = Polarization::on_lattice(LatticeClass::by_name(&lat, "H").unwrap()).unwrap();
    let cert = k3monad::k3lat::quartic_region_run(&surface, &monad, &h).unwrap();
    print!("{}", cert.summary());
    for e in cert.effectivity_checks.iter().take(5) {
        println!("  {} -> {:?}: {:?}", e.twist, e.class, e.outcome);
    }
    println!("replay: {:?}", verify(&cert).unwrap());
}
