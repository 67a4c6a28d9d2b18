use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;

use super::{curve_candidates, not_effective_cert, pair, self_int, EffectivityRule, LatticeClass, LatticeError};
use crate::monad::{ChernData, MonadDocument, MonadKind, SurfaceDocument};
use crate::stability::{
    slope, twist_region, CoreCheck, CoverageAudit, EffectivityCheck, Polarization, RegionReport, StabilityCertificate,
    StabilityError, StratumRule, Subject, Verdict,
};
use crate::cohom::{CohomResult, CohomValue, MatrixWitness, Method, Witness};
use crate::poly::{monomial_basis, Ambient, AmbientKind, ExactMatrix, Exponents, MultiDegree, PolyMatrix, RationalPolynomial};

/// `k[x_0..x_n]/(f)` with normal forms relative to the lex-leading monomial of `f`.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    ambient: Ambient,
    degree: i64,
    lead: Exponents,
    /// `lead ≡ Σ c·m` modulo `f`.
    rewrite: Vec<(Exponents, BigRational)>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl QuotientRing {
    pub fn new(f: &RationalPolynomial) -> Result<Self, LatticeError> {
        let ambient = f.ambient().clone();
        if !matches!(ambient.kind(), AmbientKind::Projective(_)) {
            return Err(LatticeError::Unsupported("hypersurface rings need a projective space".into()));
        }
        let degree = match f.homogeneous_degree() {
            Some(d) if d[0] > 0 => d[0],
            _ => return Err(LatticeError::Unsupported("equation must be homogeneous of positive degree".into())),
        };
        let (lead, lc) = f.terms().last().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
        let rewrite = f.terms().filter(|(e, _)| **e != lead).map(|(e, c)| (e.clone(), -c / &lc)).collect();
        Ok(QuotientRing { ambient, degree, lead, rewrite })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn leading_monomial(&self) -> &[u32] {
        &self.lead
    }

    /// Monomials of degree `d` not divisible by the leading monomial; a basis
    /// of the degree-`d` piece.
    pub fn standard_monomials(&self, d: i64) -> Vec<Exponents> {
        monomial_basis(&self.ambient, &MultiDegree::new1(d)).into_iter().filter(|m| !divides(&self.lead, m)).collect()
    }

    pub fn hilbert_function(&self, d: i64) -> usize {
        self.standard_monomials(d).len()
    }

    /// Unique representative in the span of standard monomials.
    pub fn normal_form(&self, p: &RationalPolynomial) -> BTreeMap<Exponents, BigRational> {
        let mut work: BTreeMap<Exponents, BigRational> = p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        let mut out = BTreeMap::new();
        // every rewrite term is lex-smaller than `lead`, so the largest
        // remaining term strictly decreases
        while let Some((e, c)) = work.pop_last() {
            if !divides(&self.lead, &e) {
                out.insert(e, c);
                continue;
            }
            let q: Vec<u32> = e.iter().zip(&self.lead).map(|(a, b)| a - b).collect();
            for (m, r) in &self.rewrite {
                let key: Exponents = m.iter().zip(&q).map(|(a, b)| a + b).collect();
                let v = work.entry(key.clone()).or_insert_with(BigRational::zero);
                *v += &c * r;
                if v.is_zero() {
                    work.remove(&key);
                }
            }
        }
        out
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }
}

/// `h^0` of `ker(⊕ O_X(source_j) -> ⊕ O_X(target_i)) ⊗ O_X(k)` on the
/// hypersurface, with `l` the multiple of a second divisor class (only `0`
/// is supported).
///
/// Uses left exactness of global sections and `H^0(O_X(d)) = (R/f)_d`.
pub fn quartic_h0(
    ring: &QuotientRing,
    map: &PolyMatrix,
    source: &[MultiDegree],
    target: &[MultiDegree],
    k: i64,
    l: i64,
) -> Result<CohomResult, LatticeError> {
    if l != 0 {
        return Err(LatticeError::UnsupportedTwist(l));
    }
    if map.ambient() != ring.ambient() {
        return Err(LatticeError::Unsupported("map and equation live on different ambients".into()));
    }
    map.check_homogeneous(source, target)?;
    let cols: Vec<(usize, Exponents)> = source
        .iter()
        .enumerate()
        .flat_map(|(j, d)| ring.standard_monomials(d[0] + k).into_iter().map(move |m| (j, m)))
        .collect();
    let mut row_index: HashMap<(usize, Exponents), usize> = HashMap::new();
    for (i, d) in target.iter().enumerate() {
        for m in ring.standard_monomials(d[0] + k) {
            let n = row_index.len();
            row_index.insert((i, m), n);
        }
    }
    let mut mat = ExactMatrix::zeros(row_index.len(), cols.len());
    for (c, (j, mono)) in cols.iter().enumerate() {
        for i in 0..target.len() {
            let entry = map.get(i, *j);
            if entry.is_zero() {
                continue;
            }
            for (e, v) in ring.normal_form(&entry.mul_monomial(mono)) {
                let r = row_index[&(i, e)];
                let cur = mat.get(r, c).clone();
                mat.set(r, c, cur + v);
            }
        }
    }
    let w = MatrixWitness::of(format!("quotient ring map at twist {k}"), &mat);
    let value = w.nullity as i64;
    Ok(CohomResult {
        value: CohomValue::Exact(value),
        method: Method::SectionKernel,
        witness: Witness { matrices: vec![w], ..Witness::default() },
    })
}

/// Check that a linear rank-one map `⊕ O(-1) -> O` has no zero on the
/// hypersurface `f = 0`, so its kernel is locally free there. Returns the
/// common zero of the entries when there is exactly one (and `f` is nonzero
/// there).
pub fn basepoint_check(f: &RationalPolynomial, map: &PolyMatrix) -> Result<Option<Vec<BigRational>>, LatticeError> {
    let amb = f.ambient();
    if map.rows() != 1 {
        return Err(LatticeError::Unsupported("base point check needs a single-row map".into()));
    }
    let n = amb.num_vars();
    let mut rows = Vec::new();
    for j in 0..map.cols() {
        let p = map.get(0, j);
        if p.is_zero() {
            continue;
        }
        if p.homogeneous_degree() != Some(MultiDegree::new1(1)) {
            return Err(LatticeError::Unsupported(format!("entry {p} is not a linear form")));
        }
        let row: Vec<BigRational> = (0..n)
            .map(|v| {
                let mut e = vec![0u32; n];
                e[v] = 1;
                p.coefficient(&e)
            })
            .collect();
        rows.push(row);
    }
    let m = if rows.is_empty() { ExactMatrix::zeros(0, n) } else { ExactMatrix::from_rows(rows) };
    let kernel = m.kernel_basis();
    match kernel.len() {
        0 => Ok(None),
        1 => {
            let point = kernel.into_iter().next().expect("one vector");
            if f.eval(&point).is_zero() {
                Err(LatticeError::BasepointFailure(render_point(&point)))
            } else {
                Ok(Some(point))
            }
        }
        _ => Err(LatticeError::BasepointFailure(format!(
            "a linear space of dimension {} (it meets every surface)",
            kernel.len() - 1
        ))),
    }
}

/// Slope stability of a rank-two kernel bundle `ker(⊕ O(b_i) -> O(c))` on a
/// hypersurface whose Picard lattice has the hyperplane class as first basis
/// vector. Twists `kH + lC` enter through `h^0(O_X((b_i + k)H + lC))`.
pub fn quartic_region_run(
    surface: &SurfaceDocument,
    monad: &MonadDocument,
    polarization: &Polarization,
) -> Result<StabilityCertificate, StabilityError> {
    let (amb, f) = surface.build()?;
    let m = monad.build()?;
    if m.ambient() != &amb {
        return Err(StabilityError::Unsupported("bundle and surface live on different ambients".into()));
    }
    if m.kind() != MonadKind::Kernel || m.c.rank() != 1 {
        return Err(StabilityError::Unsupported("need a kernel monad with a line bundle target".into()));
    }
    let Polarization::Lattice { class: h } = polarization else {
        return Err(StabilityError::Unsupported("the polarization must be a lattice class".into()));
    };
    let lat = h.lattice().clone();
    if lat.rank() != 2 || h.coords() != [1, 0] {
        return Err(StabilityError::Unsupported("the hyperplane class must be the first of two basis vectors".into()));
    }
    basepoint_check(&f, &m.map_b)?;
    let ring = QuotientRing::new(&f)?;
    let h2 = self_int(h);
    let b: Vec<i64> = m.b.twists.iter().map(|t| t[0]).collect();
    let c = m.c.twists[0][0];
    let rank = b.len() as i64 - 1;
    if rank != 2 {
        return Err(StabilityError::Unsupported(format!("rank {rank}; only rank two is handled")));
    }
    let c1 = b.iter().sum::<i64>() - c;
    let e2: i64 = (0..b.len()).flat_map(|i| (i + 1..b.len()).map(move |j| (i, j))).map(|(i, j)| b[i] * b[j]).sum();
    let chern = ChernData { rank, c1: MultiDegree::new2(c1, 0), c2: h2 * (e2 - c * c1) };
    let mu = slope(&chern, polarization)?;
    let region = twist_region(&chern, 1, polarization)?;
    let beta = region.degree_bound;
    let deg = |k: i64, l: i64| polarization.degree(&MultiDegree::new2(k, l));
    let mut distinct_b = b.clone();
    distinct_b.sort();
    distinct_b.dedup();

    // twists where some D_i is trivial need a direct computation
    let core: Vec<MultiDegree> =
        distinct_b.iter().map(|bi| MultiDegree::new2(-bi, 0)).filter(|t| deg(t[0], t[1]) <= beta).collect();
    let mut core_checks = Vec::new();
    for t in &core {
        let result = quartic_h0(&ring, &m.map_b, &m.b.twists, &m.c.twists, t[0], t[1])?;
        core_checks.push(CoreCheck { s: 1, twist: *t, result });
    }

    let dmax = beta + distinct_b.last().copied().unwrap_or(0) * h2;
    let mut strata = vec![StratumRule {
        s: 1,
        description: "D != 0 with D.H <= 0: not effective since H is ample".into(),
        min_degree: None,
        max_degree: 0,
        rule: EffectivityRule::NonPositiveDegree,
        candidates: Vec::new(),
    }];
    let mut stratum_failure = None;
    if dmax >= 1 {
        let mut cands = Vec::new();
        for d in 1..=dmax {
            match curve_candidates(h, d) {
                Some(mut list) => cands.append(&mut list),
                None => stratum_failure = Some(format!("infinitely many curve candidates of degree {d}")),
            }
        }
        if stratum_failure.is_none() && cands.is_empty() {
            strata.push(StratumRule {
                s: 1,
                description: format!(
                    "1 <= D.H <= {dmax}: no class of degree 1..={dmax} has square >= -2, so no curve of that degree exists"
                ),
                min_degree: Some(1),
                max_degree: dmax,
                rule: EffectivityRule::NoCurveDecomposition,
                candidates: Vec::new(),
            });
        } else if stratum_failure.is_none() {
            stratum_failure = Some(format!("{} curve candidates of degree at most {dmax}", cands.len()));
        }
    }
    let stratum_covers = |d: &LatticeClass| -> bool {
        let dh = pair(d, h).expect("same lattice");
        strata.iter().any(|s| dh <= s.max_degree && s.min_degree.is_none_or(|lo| dh >= lo)) && !d.is_zero()
    };

    // finite window, checked point by point
    let (klo, llo, lhi) = (-3i64, -3i64, 3i64);
    let mut checks = Vec::new();
    let mut audit = CoverageAudit { s: 1, ..Default::default() };
    let mut khi_all = klo;
    for l in llo..=lhi {
        let khi = (beta - l * deg(0, 1)).div_euclid(deg(1, 0));
        khi_all = khi_all.max(khi);
        for k in klo..=khi {
            let t = MultiDegree::new2(k, l);
            audit.points += 1;
            if core.contains(&t) {
                let ok = core_checks.iter().any(|c| c.twist == t && c.result.vanishes());
                if ok {
                    audit.by_core += 1;
                } else {
                    audit.uncovered.push(t);
                }
                continue;
            }
            let mut all_ok = true;
            let mut by_stratum = true;
            for bi in &distinct_b {
                let d = LatticeClass::new(&lat, vec![bi + k, l])?;
                let outcome = not_effective_cert(&d, h)?;
                all_ok &= outcome.certificate().is_some();
                by_stratum &= stratum_covers(&d);
                checks.push(EffectivityCheck { twist: t, class: d.coords().to_vec(), outcome });
            }
            if all_ok && by_stratum {
                audit.by_stratum += 1;
            } else {
                audit.uncovered.push(t);
            }
        }
    }
    audit.window = format!("k in [{klo}, {khi_all}], l in [{llo}, {lhi}]");

    let verdict = if let Some(c) = core_checks.iter().find(|c| !c.result.vanishes()) {
        Verdict::Inconclusive {
            reason: format!("h0 at {} is {}", c.twist, c.result.value),
            twist: Some(c.twist),
            value: Some(c.result.value),
        }
    } else if let Some(reason) = stratum_failure {
        Verdict::Inconclusive { reason, twist: None, value: None }
    } else if let Some(t) = audit.uncovered.first() {
        Verdict::Inconclusive { reason: "a window twist has no effectivity certificate".into(), twist: Some(*t), value: None }
    } else {
        Verdict::Stable
    };
    let names = lat.basis();
    let (wk, wl) = (deg(1, 0), deg(0, 1));
    let regions = vec![RegionReport {
        s: 1,
        bound: region.bound.clone(),
        degree_bound: beta,
        tail_bounds: None,
        core: core.clone(),
        description: format!("L = k{} + l{} with {wk}k + {wl}l <= {}", names[0], names[1], region.bound),
    }];
    Ok(StabilityCertificate {
        bundle: m.name.clone().unwrap_or_else(|| "K".into()),
        chern,
        real: m.is_real(),
        slope: mu.to_string(),
        regions,
        core_checks,
        tail_rules: Vec::new(),
        monotone_propagations: Vec::new(),
        strata,
        effectivity_checks: checks,
        coverage: vec![audit],
        verdict,
        notes: vec![
            "twists by the second basis class are handled only through effectivity of divisor classes".into(),
            "only slope stability is certified".into(),
        ],
        subject: Subject::Quartic { surface: surface.clone(), monad: monad.clone(), polarization: polarization.clone() },
    })
}

fn render_point(p: &[BigRational]) -> String {
    format!("[{}]", p.iter().map(ToString::to_string).collect::<Vec<_>>().join(":"))
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::poly::parse_poly;

    const F_X: &str = "-x*(x+z-w)*(x*w - y*z) + z*(x+z)*(x*y - z^2) + (x*y + w^2)*(y^2 - z*w)";

    fn p3() -> Ambient {
        Ambient::with_variables(AmbientKind::Projective(3), &["x", "y", "z", "w"]).unwrap()
    }

    fn binom(n: i64, k: i64) -> i64 {
        if n < k || k < 0 {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn kernel_map(a: &Ambient) -> PolyMatrix {
        PolyMatrix::from_rows(a, vec![["x", "y", "w"].iter().map(|s| parse_poly(s, a).unwrap()).collect()]).unwrap()
    }

    #[test]
    fn hilbert_function_of_quartic() {
        let a = p3();
        let ring = QuotientRing::new(&parse_poly(F_X, &a).unwrap()).unwrap();
        for d in 0..=12 {
            assert_eq!(ring.hilbert_function(d) as i64, binom(d + 3, 3) - binom(d - 1, 3), "d = {d}");
        }
        assert_eq!(ring.hilbert_function(1), 4);
        assert_eq!(ring.hilbert_function(4), 34);
    }

    #[test]
    fn normal_form_kills_multiples_of_f() {
        let a = p3();
        let f = parse_poly(F_X, &a).unwrap();
        let ring = QuotientRing::new(&f).unwrap();
        let g = parse_poly("x*y - 3*z^2 + w*x", &a).unwrap();
        assert!(ring.normal_form(&f.try_mul(&g).unwrap()).is_empty());
        let h = parse_poly("y^4 + 2*x*z*w^2", &a).unwrap();
        let lhs = ring.normal_form(&h.try_add(&f.try_mul(&parse_poly("7", &a).unwrap()).unwrap()).unwrap());
        assert_eq!(lhs, ring.normal_form(&h));
    }

    #[test]
    fn sections_of_the_quartic_bundle() {
        let a = p3();
        let map = kernel_map(&a);
        let src = vec![MultiDegree::new1(-1); 3];
        let tgt = vec![MultiDegree::new1(0)];
        for eq in [F_X, "x^4 + y^4 + z^4 + w^4"] {
            let ring = QuotientRing::new(&parse_poly(eq, &a).unwrap()).unwrap();
            assert_eq!(quartic_h0(&ring, &map, &src, &tgt, 1, 0).unwrap().value, CohomValue::Exact(0));
            assert_eq!(quartic_h0(&ring, &map, &src, &tgt, 0, 0).unwrap().value, CohomValue::Exact(0));
            // three Koszul relations among x, y, w at twist 2
            assert_eq!(quartic_h0(&ring, &map, &src, &tgt, 2, 0).unwrap().value, CohomValue::Exact(3));
            assert!(matches!(quartic_h0(&ring, &map, &src, &tgt, 1, 1), Err(LatticeError::UnsupportedTwist(1))));
        }
    }

    fn data(name: &str) -> String {
        std::fs::read_to_string(format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    fn quartic_inputs() -> (SurfaceDocument, MonadDocument, Polarization) {
        let surface = SurfaceDocument::from_json(&data("quartic.poly")).unwrap();
        let monad = MonadDocument::from_json(&data("quartic_k.monad")).unwrap();
        let lat = std::sync::Arc::new(serde_json::from_str::<super::super::GramLattice>(&data("lattice_452.json")).unwrap());
        let h = Polarization::on_lattice(LatticeClass::new(&lat, vec![1, 0]).unwrap()).unwrap();
        (surface, monad, h)
    }

    #[test]
    fn quartic_region_is_stable() {
        let (surface, monad, h) = quartic_inputs();
        let cert = quartic_region_run(&surface, &monad, &h).unwrap();
        assert_eq!(cert.verdict, Verdict::Stable, "{}", cert.summary());
        assert_eq!(cert.slope, "-6");
        assert_eq!(cert.chern.c2, 12);
        assert_eq!(cert.regions[0].core, vec![MultiDegree::new2(1, 0)]);
        let twists: Vec<MultiDegree> = cert.effectivity_checks.iter().map(|c| c.twist).collect();
        assert!(twists.contains(&MultiDegree::new2(0, 0)));
        assert!(twists.contains(&MultiDegree::new2(-1, 2)));
        assert!(cert.coverage[0].uncovered.is_empty());
        assert!(crate::stability::verify(&cert).unwrap().ok);

        let fermat = SurfaceDocument { equation: "x^4 + y^4 + z^4 + w^4".into(), ..surface };
        assert_eq!(quartic_region_run(&fermat, &monad, &h).unwrap().verdict, Verdict::Stable);
    }

    #[test]
    fn base_points() {
        let a = p3();
        let map = kernel_map(&a);
        let f = parse_poly(F_X, &a).unwrap();
        let p = basepoint_check(&f, &map).unwrap().unwrap();
        assert_eq!(render_point(&p), "[0:0:1:0]");
        assert_eq!(f.eval(&p), -BigRational::one());
        let bad = parse_poly("x^4 + y^4 + x*z^3 + w^4", &a).unwrap();
        assert!(matches!(basepoint_check(&bad, &map), Err(LatticeError::BasepointFailure(_))));
        let two = PolyMatrix::from_rows(&a, vec![vec![parse_poly("x", &a).unwrap(), parse_poly("y", &a).unwrap()]]).unwrap();
        assert!(matches!(basepoint_check(&f, &two), Err(LatticeError::BasepointFailure(_))));
    }
}
