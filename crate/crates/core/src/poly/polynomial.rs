use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Ambient, MultiDegree, PolyError};

/// Exponent vector, one entry per ambient variable.
pub type Exponents = Vec<u32>;

/// Multivariate polynomial with exact rational coefficients on a fixed ambient.
///
/// Zero coefficients are never stored, so the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    ambient: Ambient,
    terms: BTreeMap<Exponents, BigRational>,
}

impl RationalPolynomial {
    pub fn zero(ambient: &Ambient) -> Self {
        RationalPolynomial { ambient: ambient.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ambient: &Ambient, c: BigRational) -> Self {
        Self::monomial(ambient, vec![0; ambient.num_vars()], c)
    }

    pub fn from_int(ambient: &Ambient, c: i64) -> Self {
        Self::constant(ambient, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(ambient: &Ambient, idx: usize) -> Self {
        let mut e = vec![0; ambient.num_vars()];
        e[idx] = 1;
        Self::monomial(ambient, e, BigRational::one())
    }

    pub fn monomial(ambient: &Ambient, exps: Exponents, c: BigRational) -> Self {
        assert_eq!(exps.len(), ambient.num_vars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        RationalPolynomial { ambient: ambient.clone(), terms }
    }

    pub fn from_terms<I>(ambient: &Ambient, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigRational)>,
    {
        let mut p = Self::zero(ambient);
        for (e, c) in terms {
            assert_eq!(e.len(), ambient.num_vars());
            p.add_term(e, c);
        }
        p
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// A single nonzero term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn add_term(&mut self, exps: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Multidegree when every term shares it; `None` for zero or mixed polynomials.
    pub fn homogeneous_degree(&self) -> Option<MultiDegree> {
        let mut it = self.terms.keys().map(|e| self.ambient.degree_of(e));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, d: &MultiDegree) -> bool {
        self.terms.keys().all(|e| self.ambient.degree_of(e) == *d)
    }

    fn check_ambient(&self, other: &Self) -> Result<(), PolyError> {
        if self.ambient != other.ambient {
            return Err(PolyError::AmbientMismatch(format!("{} vs {}", self.ambient, other.ambient)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ambient(other)?;
        let mut out = Self::zero(&self.ambient);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ambient);
        }
        RationalPolynomial {
            ambient: self.ambient.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Multiply by a monomial with coefficient one.
    pub fn mul_monomial(&self, exps: &[u32]) -> Self {
        RationalPolynomial {
            ambient: self.ambient.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::from_int(&self.ambient, 1);
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same ambient");
        }
        acc
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Substitute variables by name.
    ///
    /// Every variable of `self` must either be assigned a value (a polynomial
    /// on `target`) or exist by name in `target`.
    pub fn substitute(
        &self,
        target: &Ambient,
        assignment: &BTreeMap<String, RationalPolynomial>,
    ) -> Result<Self, PolyError> {
        let mut images = Vec::with_capacity(self.ambient.num_vars());
        for name in self.ambient.variables() {
            if let Some(v) = assignment.get(name) {
                if v.ambient != *target {
                    return Err(PolyError::AmbientMismatch(format!(
                        "value for `{name}` lives on {}, expected {target}",
                        v.ambient
                    )));
                }
                images.push(v.clone());
            } else if let Some(idx) = target.var_index(name) {
                images.push(Self::var(target, idx));
            } else {
                return Err(PolyError::AmbientMismatch(format!(
                    "variable `{name}` is neither assigned nor present in {target}"
                )));
            }
        }
        for name in assignment.keys() {
            if self.ambient.var_index(name).is_none() {
                return Err(PolyError::UnknownVariable { name: name.clone(), offset: 0 });
            }
        }
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = term.try_mul(&img.pow(k))?;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Evaluate at a rational point (one value per variable).
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.ambient.num_vars());
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Lowest common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, names: &[String], e: &[u32]) -> fmt::Result {
    let mut first = true;
    for (name, &k) in names.iter().zip(e) {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{k}")?;
        }
    }
    Ok(())
}

/// Canonical printing: terms in descending lexicographic exponent order,
/// explicit `*` between factors.
impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let constant = e.iter().all(|&k| k == 0);
            if constant {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, self.ambient.variables(), e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let a = Ambient::product(1, 1);
        let p = parse_poly("x0*y0 + x1*y1", &a).unwrap();
        let r = parse_poly("x0*y0 - x1*y1", &a).unwrap();
        let s = p.try_add(&r).unwrap();
        assert_eq!(s.to_string(), "2*x0*y0");
        assert!(p.try_sub(&p).unwrap().is_zero());
        let sq = p.try_mul(&p).unwrap();
        assert_eq!(sq.homogeneous_degree(), Some(MultiDegree::new2(2, 2)));
        assert_eq!(sq.num_terms(), 3);
    }

    #[test]
    fn substitution_examples() {
        let a = Ambient::product(1, 1);
        let p1 = Ambient::projective(1);
        let fiber = Ambient::with_variables(crate::poly::AmbientKind::Projective(1), &["x0", "x1"]).unwrap();
        assert_eq!(p1, fiber);
        let mut asg = BTreeMap::new();
        asg.insert("y0".to_string(), RationalPolynomial::from_int(&p1, 0));
        asg.insert("y1".to_string(), RationalPolynomial::from_int(&p1, 1));
        let f = parse_poly("x1*y1", &a).unwrap();
        assert_eq!(f.substitute(&p1, &asg).unwrap().to_string(), "x1");
        let g = parse_poly("x1*y0", &a).unwrap();
        assert!(g.substitute(&p1, &asg).unwrap().is_zero());

        let mut asg2 = BTreeMap::new();
        asg2.insert("y0".to_string(), RationalPolynomial::from_int(&p1, 1));
        asg2.insert("y1".to_string(), RationalPolynomial::from_int(&p1, 2));
        let h = parse_poly("x0^4*y0^3*y1", &a).unwrap();
        assert_eq!(h.substitute(&p1, &asg2).unwrap().to_string(), "2*x0^4");
    }

    #[test]
    fn substitution_ambient_mismatch() {
        let a = Ambient::product(1, 1);
        let p2 = Ambient::projective(2);
        let f = parse_poly("x1*y1", &a).unwrap();
        let mut asg = BTreeMap::new();
        asg.insert("y0".to_string(), RationalPolynomial::from_int(&Ambient::projective(1), 0));
        assert!(matches!(f.substitute(&p2, &asg), Err(PolyError::AmbientMismatch(_))));
        // y1 not assigned and not present in the target
        let mut asg = BTreeMap::new();
        asg.insert("y0".to_string(), RationalPolynomial::from_int(&Ambient::projective(1), 0));
        assert!(f.substitute(&Ambient::projective(1), &asg).is_err());
    }

    #[test]
    fn eval_and_render() {
        let a = Ambient::projective(2);
        let p = parse_poly("3*x0^2 - x1*x2 + 5", &a).unwrap();
        assert_eq!(p.to_string(), "3*x0^2 - x1*x2 + 5");
        assert_eq!(p.eval(&[q(1), q(2), q(3)]), q(2));
        let half = p.scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(half.denominator_lcm(), BigInt::from(2));
        assert!(!half.has_integer_coefficients());
    }
}
