//! Parse polynomials, list monomial bases and compute a section matrix.

use k3monad::poly::{monomial_basis, parse_poly, section_matrix, Ambient, AmbientKind, MultiDegree, PolyMatrix};

fn main() {
    let amb = Ambient::with_variables(AmbientKind::ProductProjective(1, 1), &["x1", "x2", "y1", "y2"]).unwrap();
    let f = parse_poly("(x1 + 2*x2)^2*y1 - 3*x1*x2*y2", &amb).unwrap();
    println!("f = {f}, bidegree {:?}", f.homogeneous_degree());

    let d = MultiDegree::new2(2, 1);
    let basis = monomial_basis(&amb, &d);
    println!("{} monomials of bidegree {d}", basis.len());

    let row: Vec<_> = ["x1*y1", "x1*y2", "x2*y1", "x2*y2"].iter().map(|s| parse_poly(s, &amb).unwrap()).collect();
    let map = PolyMatrix::from_rows(&amb, vec![row]).unwrap();
    let source = vec![MultiDegree::new2(-1, -1); 4];
    let target = vec![MultiDegree::new2(0, 0)];
    for (k, l) in [(1, 1), (2, 1), (2, 2)] {
        let s = section_matrix(&map, &source, &target, &MultiDegree::new2(k, l)).unwrap();
        println!("twist ({k},{l}): {}x{} matrix, rank {}, h0(K({k},{l})) = {}", s.rows(), s.cols(), s.rank(), s.kernel_dim());
    }
}
