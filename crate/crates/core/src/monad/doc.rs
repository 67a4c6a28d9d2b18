use serde::{Deserialize, Serialize};

use super::{FreeSheaf, MonadComplex, MonadError};
use crate::poly::{parse_poly, Ambient, AmbientKind, MultiDegree, PolyMatrix, RationalPolynomial};

/// Ambient description inside documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum AmbientSpec {
    Projective {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        variables: Option<Vec<String>>,
    },
    ProductProjective {
        dims: [usize; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        variables: Option<Vec<String>>,
    },
}

impl AmbientSpec {
    pub fn build(&self) -> Result<Ambient, MonadError> {
        let (kind, vars) = match self {
            AmbientSpec::Projective { dim, variables } => (AmbientKind::Projective(*dim), variables),
            AmbientSpec::ProductProjective { dims, variables } => {
                (AmbientKind::ProductProjective(dims[0], dims[1]), variables)
            }
        };
        match vars {
            Some(v) => Ok(Ambient::with_variables(kind, v)?),
            None => Ok(match kind {
                AmbientKind::Projective(n) => Ambient::projective(n),
                AmbientKind::ProductProjective(a, b) => Ambient::product(a, b),
            }),
        }
    }

    pub fn of(ambient: &Ambient) -> AmbientSpec {
        let default = match ambient.kind() {
            AmbientKind::Projective(n) => Ambient::projective(n),
            AmbientKind::ProductProjective(a, b) => Ambient::product(a, b),
        };
        let variables = (default.variables() != ambient.variables()).then(|| ambient.variables().to_vec());
        match ambient.kind() {
            AmbientKind::Projective(dim) => AmbientSpec::Projective { dim, variables },
            AmbientKind::ProductProjective(a, b) => AmbientSpec::ProductProjective { dims: [a, b], variables },
        }
    }
}

/// On-disk form of a monad. Absent `source`/`map_a` means a kernel monad.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonadDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ambient: AmbientSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub source: Vec<MultiDegree>,
    pub middle: Vec<MultiDegree>,
    pub target: Vec<MultiDegree>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_a: Option<Vec<Vec<String>>>,
    pub map_b: Vec<Vec<String>>,
}

impl MonadDocument {
    pub fn from_json(text: &str) -> Result<Self, MonadError> {
        serde_json::from_str(text).map_err(|e| MonadError::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn build(&self) -> Result<MonadComplex, MonadError> {
        let amb = self.ambient.build()?;
        let arity = amb.arity();
        for t in self.source.iter().chain(&self.middle).chain(&self.target) {
            if t.arity() != arity {
                return Err(MonadError::Document(format!("twist {t} does not match the ambient grading")));
            }
        }
        let parse_matrix = |rows: &[Vec<String>], label: &str| -> Result<PolyMatrix, MonadError> {
            let parsed = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    r.iter()
                        .enumerate()
                        .map(|(j, s)| {
                            parse_poly(s, &amb).map_err(|e| MonadError::Document(format!("{label}[{i}][{j}]: {e}")))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            PolyMatrix::from_rows(&amb, parsed).map_err(|e| MonadError::Document(format!("{label}: {e}")))
        };
        let b = FreeSheaf::new(&amb, self.middle.clone());
        let c = FreeSheaf::new(&amb, self.target.clone());
        let map_b = if self.map_b.is_empty() {
            PolyMatrix::zeros(&amb, 0, b.rank())
        } else {
            parse_matrix(&self.map_b, "map_b")?
        };
        let m = match (&self.map_a, self.source.is_empty()) {
            (None, true) => MonadComplex::kernel(b, c, map_b)?,
            (Some(rows), false) => {
                let a = FreeSheaf::new(&amb, self.source.clone());
                let map_a = parse_matrix(rows, "map_a")?;
                MonadComplex::homology(a, b, c, map_a, map_b)?
            }
            (Some(_), true) => return Err(MonadError::Document("map_a given without source".into())),
            (None, false) => return Err(MonadError::Document("source given without map_a".into())),
        };
        Ok(match &self.name {
            Some(n) => m.with_name(n.clone()),
            None => m,
        })
    }

    pub fn of(m: &MonadComplex) -> MonadDocument {
        let render = |p: &PolyMatrix| -> Vec<Vec<String>> {
            (0..p.rows()).map(|i| (0..p.cols()).map(|j| p.get(i, j).to_string()).collect()).collect()
        };
        MonadDocument {
            name: m.name.clone(),
            ambient: AmbientSpec::of(m.ambient()),
            source: m.a.twists.clone(),
            middle: m.b.twists.clone(),
            target: m.c.twists.clone(),
            map_a: m.map_a.as_ref().map(render),
            map_b: render(&m.map_b),
        }
    }
}

/// A hypersurface: ambient plus one homogeneous equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ambient: AmbientSpec,
    pub equation: String,
}

impl SurfaceDocument {
    pub fn from_json(text: &str) -> Result<Self, MonadError> {
        serde_json::from_str(text).map_err(|e| MonadError::Document(e.to_string()))
    }

    pub fn build(&self) -> Result<(Ambient, RationalPolynomial), MonadError> {
        let amb = self.ambient.build()?;
        let f = parse_poly(&self.equation, &amb).map_err(|e| MonadError::Document(format!("equation: {e}")))?;
        Ok((amb, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: &str = r#"{
        "name": "E",
        "ambient": {"type": "product_projective", "dims": [1, 1], "variables": ["x1", "x2", "y1", "y2"]},
        "source": [[0, 0]],
        "middle": [[1, 0], [1, 0], [0, 1], [0, 1]],
        "target": [[1, 1]],
        "map_a": [["x1"], ["x2"], ["y1"], ["y2"]],
        "map_b": [["y1", "y2", "-x1", "-x2"]]
    }"#;

    #[test]
    fn homology_document_round_trip() {
        let doc = MonadDocument::from_json(E).unwrap();
        let m = doc.build().unwrap();
        assert_eq!(m.kind(), super::super::MonadKind::Homology);
        assert_eq!(m.rank(), 2);
        let again = MonadDocument::of(&m);
        assert_eq!(again, doc);
        assert_eq!(MonadDocument::from_json(&again.to_json()).unwrap().build().unwrap(), m);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = E.replace("\"name\"", "\"nmae\"");
        assert!(MonadDocument::from_json(&bad).is_err());
    }

    #[test]
    fn bad_polynomial_is_located() {
        let bad = E.replace("\"-x2\"", "\"-x2y1\"");
        let err = MonadDocument::from_json(&bad).unwrap().build().unwrap_err();
        assert!(err.to_string().contains("map_b[0][3]"), "{err}");
    }
}
