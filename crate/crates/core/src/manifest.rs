//! The JSON manifest format `acbm-manifest/1`.

use std::fmt;

use num_traits::Zero;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::catalog::ExampleManifest;
use crate::error::{GeometryError, ManifestError};
use crate::expr::Expression;
use crate::lie::LieAlgebra;
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::structure::{AcbmManifold, AlmostContactStructure};
use crate::tensor::{endo_apply, Covector, FrameTensor, Variance, Vector};
use crate::transform::TransformTriple;

pub const MANIFEST_SCHEMA: &str = "acbm-manifest/1";

/// A rational written as `"p/q"`, a decimal string or a JSON integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct QVisitor;

        impl Visitor<'_> for QVisitor {
            type Value = Q;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                parse_rational(v).map(Q).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Q, E> {
                Err(E::custom(format!(
                    "floating-point literal {v} is not allowed; write it as a string"
                )))
            }
        }

        d.deserialize_any(QVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Q,
}

/// Action of the structure on the coordinate fields `∂_i`, with the frame
/// given by `E_a = Σ_i frame[i][a] ∂_i` (identity when omitted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Chart {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<Vec<Q>>>,
    pub phi: Vec<Vec<Q>>,
    pub xi: Vec<Q>,
    pub eta: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<Q>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Functions {
    pub u: String,
    pub v: String,
    pub w: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    #[serde(default)]
    pub structure_constants: Vec<Bracket>,
    pub metric: Vec<Vec<Q>>,
    pub phi: Vec<Vec<Q>>,
    pub xi: Vec<Q>,
    pub eta: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<Chart>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<Functions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Q>,
}

/// A manifest turned into engine types.
#[derive(Debug, Clone)]
pub struct LoadedManifest {
    pub name: Option<String>,
    pub manifold: AcbmManifold<Rational>,
    pub functions: Option<TransformTriple>,
    pub sigma: Option<Rational>,
}

fn field_err(field: &str, message: impl Into<String>) -> ManifestError {
    ManifestError::field(field, message)
}

fn vector(field: &str, v: &[Q], d: usize) -> Result<Vec<Rational>, ManifestError> {
    if v.len() != d {
        return Err(field_err(
            field,
            format!("expected {d} entries, found {}", v.len()),
        ));
    }
    Ok(v.iter().map(|q| q.0.clone()).collect())
}

fn matrix(
    field: &str,
    rows: &[Vec<Q>],
    d: usize,
    slots: [Variance; 2],
) -> Result<FrameTensor<Rational>, ManifestError> {
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(field_err(field, format!("expected a {d}x{d} matrix")));
    }
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|q| q.0.clone()).collect())
        .collect();
    FrameTensor::from_rows(slots, rows).map_err(|e| field_err(field, e.to_string()))
}

fn rows_of(t: &FrameTensor<Rational>) -> Vec<Vec<Q>> {
    t.rows()
        .into_iter()
        .map(|r| r.into_iter().map(Q).collect())
        .collect()
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self, ManifestError> {
        let m: Manifest = serde_json::from_str(text)?;
        if m.schema != MANIFEST_SCHEMA {
            return Err(ManifestError::Schema(m.schema));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialises")
    }

    pub fn load(&self) -> Result<LoadedManifest, ManifestError> {
        use Variance::{Co, Contra};
        let d = self.dim;
        if d.is_multiple_of(2) {
            return Err(GeometryError::EvenDimension(d).into());
        }
        for (n, b) in self.structure_constants.iter().enumerate() {
            if b.i >= d || b.j >= d || b.k >= d {
                return Err(field_err(
                    &format!("structure_constants[{n}]"),
                    format!("index out of range for dimension {d}"),
                ));
            }
        }
        let alg = LieAlgebra::from_brackets(
            d,
            self.structure_constants
                .iter()
                .map(|b| (b.i, b.j, b.k, b.c.0.clone())),
        )?;
        let g = matrix("metric", &self.metric, d, [Co, Co])?;
        let phi = matrix("phi", &self.phi, d, [Contra, Co])?;
        let xi = Vector(vector("xi", &self.xi, d)?);
        let eta = Covector(vector("eta", &self.eta, d)?);
        let structure = AlmostContactStructure::new(phi, xi, eta, g).map_err(|e| match e {
            GeometryError::Tensor(t) => field_err("metric", t.to_string()),
            other => other.into(),
        })?;
        let manifold = AcbmManifold::new(alg, structure)?;

        let functions = match &self.functions {
            None => None,
            Some(f) => {
                let chart = self
                    .chart
                    .as_ref()
                    .ok_or_else(|| field_err("chart", "required when functions are given"))?;
                let p = check_chart(chart, &manifold.structure)?;
                let parse = |name: &str, text: &str| {
                    Expression::parse(text, d).map_err(|source| ManifestError::Expr {
                        name: name.to_string(),
                        source,
                    })
                };
                let mut tt =
                    TransformTriple::new(parse("u", &f.u)?, parse("v", &f.v)?, parse("w", &f.w)?);
                if let Some(p) = p {
                    tt = tt.with_chart(p.to_f64());
                }
                Some(tt)
            }
        };
        if functions.is_none() {
            if let Some(chart) = &self.chart {
                check_chart(chart, &manifold.structure)?;
            }
        }
        Ok(LoadedManifest {
            name: self.name.clone(),
            manifold,
            functions,
            sigma: self.sigma.as_ref().map(|q| q.0.clone()),
        })
    }

    /// Manifest for a built-in example, including its chart and functions.
    pub fn from_example(ex: &ExampleManifest) -> Self {
        let m = &ex.manifold;
        Manifest::from_manifold(Some(ex.name.to_string()), m)
            .with_chart_and_functions(ex.functions.as_ref().map(functions_of))
    }

    pub fn from_manifold(name: Option<String>, m: &AcbmManifold<Rational>) -> Self {
        let d = m.dim();
        let mut structure_constants = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    let c = m.alg.constant(k, i, j);
                    if !c.is_zero() {
                        structure_constants.push(Bracket {
                            i,
                            j,
                            k,
                            c: Q(c.clone()),
                        });
                    }
                }
            }
        }
        let s = &m.structure;
        Manifest {
            schema: MANIFEST_SCHEMA.to_string(),
            name,
            dim: d,
            structure_constants,
            metric: rows_of(&s.metric.g),
            phi: rows_of(&s.phi),
            xi: qs(&s.xi.0),
            eta: qs(&s.eta.0),
            chart: None,
            functions: None,
            sigma: None,
        }
    }

    /// Adds the identity chart and the given functions.
    pub fn with_chart_and_functions(mut self, f: Option<Functions>) -> Self {
        self.chart = Some(Chart {
            frame: None,
            phi: self.phi.clone(),
            xi: self.xi.clone(),
            eta: self.eta.clone(),
            metric: Some(self.metric.clone()),
        });
        self.functions = f;
        self
    }
}

pub fn functions_of(f: &TransformTriple) -> Functions {
    Functions {
        u: f.u.root().to_string(),
        v: f.v.root().to_string(),
        w: f.w.root().to_string(),
    }
}

/// Checks the chart data against the frame data; returns `P` unless it is the
/// identity.
fn check_chart(
    chart: &Chart,
    s: &AlmostContactStructure<Rational>,
) -> Result<Option<FrameTensor<Rational>>, ManifestError> {
    use Variance::{Co, Contra};
    let d = s.dim();
    let p = match &chart.frame {
        Some(rows) => Some(matrix("chart.frame", rows, d, [Contra, Co])?),
        None => None,
    };
    let id = FrameTensor::identity_endomorphism(d);
    let pm = p.as_ref().unwrap_or(&id);
    let col = |m: usize| Vector((0..d).map(|i| pm.get(&[i, m]).clone()).collect::<Vec<_>>());
    let cols: Vec<_> = (0..d).map(col).collect();

    let phi_c = matrix("chart.phi", &chart.phi, d, [Contra, Co])?;
    // φ_chart P = P φ_frame, column by column.
    for a in 0..d {
        let lhs = endo_apply(&phi_c, &cols[a]);
        let rhs = endo_apply(pm, &endo_apply(&s.phi, &Vector::basis(d, a)));
        if lhs != rhs {
            return Err(field_err(
                "chart.phi",
                format!("does not match phi transported through the frame at column {a}"),
            ));
        }
    }
    let xi_c = Vector(vector("chart.xi", &chart.xi, d)?);
    if xi_c != endo_apply(pm, &s.xi) {
        return Err(field_err(
            "chart.xi",
            "does not match xi transported through the frame",
        ));
    }
    let eta_c = Covector(vector("chart.eta", &chart.eta, d)?);
    if eta_c.compose(pm) != s.eta {
        return Err(field_err(
            "chart.eta",
            "does not match eta transported through the frame",
        ));
    }
    if let Some(rows) = &chart.metric {
        let gc = matrix("chart.metric", rows, d, [Co, Co])?;
        for a in 0..d {
            for b in 0..d {
                let v = crate::tensor::eval_covariant(&gc, &[&cols[a], &cols[b]]);
                if &v != s.metric.g.get(&[a, b]) {
                    return Err(field_err(
                        "chart.metric",
                        format!("does not match the frame metric at ({a}, {b})"),
                    ));
                }
            }
        }
    }
    Ok(p.filter(|p| *p != id))
}
