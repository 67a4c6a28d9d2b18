//! Intersection numbers on `U(2)` and `[4 5 2]`.

use std::sync::Arc;

use k3monad::k3lat::{genus, gram_of, not_effective_cert, pair, GramLattice, LatticeClass};

fn main() {
    let u2 = Arc::new(GramLattice::hyperbolic_scaled(2));
    let e1 = LatticeClass::basis_vector(&u2, 0);
    let e2 = LatticeClass::basis_vector(&u2, 1);
    let r = e1.scale(2).try_add(&e2.scale(2)).unwrap();
    let g = gram_of(&[e1.clone(), e2.clone(), r.clone()]).unwrap();
    println!("Gram(E1, E2, R) = {:?}, det {}", g.matrix, g.det);
    let solved: Vec<String> = g.solve_last().unwrap().iter().map(ToString::to_string).collect();
    println!("relation {:?}, R = {}E1 + {}E2", g.relation().unwrap(), solved[0], solved[1]);
    println!("genus(R) = {}, genus(E1) = {}", genus(&r).unwrap(), genus(&e1).unwrap());

    let q = Arc::new(GramLattice::quartic_452());
    let h = LatticeClass::by_name(&q, "H").unwrap();
    let c = LatticeClass::by_name(&q, "C").unwrap();
    println!("H^2 = {}, C^2 = {}, C.H = {}, genus(C) = {}", pair(&h, &h).unwrap(), pair(&c, &c).unwrap(), pair(&c, &h).unwrap(), genus(&c).unwrap());
    for coords in [vec![-1, 0], vec![-2, 2], vec![1, 1]] {
        let d = LatticeClass::new(&q, coords).unwrap();
        println!("{d}: {:?}", not_effective_cert(&d, &h).unwrap());
    }
}
