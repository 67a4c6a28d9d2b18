use std::fmt;

use serde::{Deserialize, Serialize};

use super::{MultiDegree, PolyError};

/// Shape of the ambient toric variety.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AmbientKind {
    /// `P^n`
    Projective(usize),
    /// `P^n1 x P^n2`
    ProductProjective(usize, usize),
}

/// A projective space or a product of two, with named homogeneous coordinates.
///
/// Variables are ordered group by group; every variable of group `g` has the
/// standard basis vector `e_g` as its multidegree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ambient {
    kind: AmbientKind,
    vars: Vec<String>,
}

fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

impl Ambient {
    /// `P^n` with coordinates `x0..xn`.
    pub fn projective(n: usize) -> Self {
        let vars = (0..=n).map(|i| format!("x{i}")).collect();
        Ambient { kind: AmbientKind::Projective(n), vars }
    }

    /// `P^n1 x P^n2` with coordinates `x0..x_n1, y0..y_n2`.
    pub fn product(n1: usize, n2: usize) -> Self {
        let vars = (0..=n1)
            .map(|i| format!("x{i}"))
            .chain((0..=n2).map(|i| format!("y{i}")))
            .collect();
        Ambient { kind: AmbientKind::ProductProjective(n1, n2), vars }
    }

    pub fn with_variables<S: AsRef<str>>(kind: AmbientKind, names: &[S]) -> Result<Self, PolyError> {
        let expected = match kind {
            AmbientKind::Projective(n) => n + 1,
            AmbientKind::ProductProjective(a, b) => a + b + 2,
        };
        if names.len() != expected {
            return Err(PolyError::BadAmbient(format!(
                "expected {expected} variable names, got {}",
                names.len()
            )));
        }
        let vars: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_ident(v) {
                return Err(PolyError::BadAmbient(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::BadAmbient(format!("duplicate variable name `{v}`")));
            }
        }
        Ok(Ambient { kind, vars })
    }

    pub fn kind(&self) -> AmbientKind {
        self.kind
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Grading arity: 1 for `P^n`, 2 for products.
    pub fn arity(&self) -> usize {
        match self.kind {
            AmbientKind::Projective(_) => 1,
            AmbientKind::ProductProjective(..) => 2,
        }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            AmbientKind::Projective(n) => n,
            AmbientKind::ProductProjective(a, b) => a + b,
        }
    }

    /// Dimensions of the projective factors.
    pub fn factor_dims(&self) -> Vec<usize> {
        match self.kind {
            AmbientKind::Projective(n) => vec![n],
            AmbientKind::ProductProjective(a, b) => vec![a, b],
        }
    }

    /// Index range of the variables of group `g`.
    pub fn group_range(&self, g: usize) -> std::ops::Range<usize> {
        match (self.kind, g) {
            (AmbientKind::Projective(n), 0) => 0..n + 1,
            (AmbientKind::ProductProjective(a, _), 0) => 0..a + 1,
            (AmbientKind::ProductProjective(a, b), 1) => a + 1..a + b + 2,
            _ => panic!("group index {g} out of range for {self}"),
        }
    }

    pub fn group_of(&self, var: usize) -> usize {
        match self.kind {
            AmbientKind::Projective(_) => 0,
            AmbientKind::ProductProjective(a, _) => usize::from(var > a),
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Multidegree of a monomial given by its exponent vector.
    pub fn degree_of(&self, exps: &[u32]) -> MultiDegree {
        let mut comps = [0i64; 2];
        for (i, &e) in exps.iter().enumerate() {
            comps[self.group_of(i)] += i64::from(e);
        }
        MultiDegree::from_slice(&comps[..self.arity()])
    }

    pub fn zero_degree(&self) -> MultiDegree {
        MultiDegree::zero(self.arity())
    }

    /// Intersection product of two divisor classes (`P^n`: ordinary product,
    /// `P^1 x P^1`: `(a,b).(c,d) = ad + bc`).
    pub fn intersect(&self, a: &MultiDegree, b: &MultiDegree) -> Result<i64, PolyError> {
        match self.kind {
            AmbientKind::Projective(_) => Ok(a[0] * b[0]),
            AmbientKind::ProductProjective(1, 1) => Ok(a[0] * b[1] + a[1] * b[0]),
            _ => Err(PolyError::BadAmbient(format!(
                "no integer intersection form of divisors on {self}"
            ))),
        }
    }

    /// `P^1 x P^1`: the factor `P^1` that survives when the group `axis`
    /// (1-based) is fixed at a point.
    pub(crate) fn fiber_ambient(&self, axis: usize) -> Result<Ambient, PolyError> {
        if self.kind != AmbientKind::ProductProjective(1, 1) {
            return Err(PolyError::AmbientMismatch(format!(
                "fiber restriction needs P1 x P1, got {self}"
            )));
        }
        let keep = if axis == 1 { self.group_range(1) } else { self.group_range(0) };
        Ambient::with_variables(AmbientKind::Projective(1), &self.vars[keep])
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AmbientKind::Projective(n) => write!(f, "P{n}")?,
            AmbientKind::ProductProjective(a, b) => write!(f, "P{a}xP{b}")?,
        }
        write!(f, "[{}]", self.vars.join(","))
    }
}
