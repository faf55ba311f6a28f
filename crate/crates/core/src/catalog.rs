//! Built-in examples: the five-dimensional Sasaki-like Lie group
//! `ℝ ⋉ ℝ⁴`, its transformation functions, and a flat abelian companion.

use serde::Serialize;

use crate::error::GeometryError;
use crate::lie::LieAlgebra;
use crate::scalar::{rat, Rational};
use crate::structure::{AcbmManifold, AlmostContactStructure};
use crate::tensor::{Covector, FrameTensor, Variance, Vector};
use crate::transform::TransformTriple;

pub const EXAMPLE_NAMES: [&str; 2] = ["sasaki5", "abelian5"];

pub const U_EXAMPLE: &str = "1/2*ln((x1^2 + x3^2)*(x2^2 + x4^2))";
pub const V_EXAMPLE: &str = "arctan((x1*x4 + x2*x3)/(x3*x4 - x1*x2)) + x0";
pub const W_EXAMPLE: &str = "x0";

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Published,
    HandDerived,
    Structural,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Published => "published",
            Provenance::HandDerived => "hand-derived",
            Provenance::Structural => "structural",
        }
    }
}

/// Reference values for an example. Tests compare against these; the engine
/// never reads them.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedValues {
    /// Independent non-zero components `R_{ijkl}`; all others follow from
    /// the symmetries or vanish.
    pub curvature: Vec<([usize; 4], Rational)>,
    pub curvature_provenance: Provenance,
    /// `ρ = ρ_ξξ η⊗η`.
    pub ricci_xi_xi: Rational,
    pub tau: Rational,
    pub tau_star: Rational,
    pub scalars_provenance: Provenance,
    /// `θ = θ_η η`.
    pub theta_eta: Rational,
    pub lee_provenance: Provenance,
    /// `τ̄ = coefficient · e^{−2w}`.
    pub tau_bar_coefficient: Option<Rational>,
}

#[derive(Debug, Clone)]
pub struct ExampleManifest {
    pub name: &'static str,
    pub manifold: AcbmManifold<Rational>,
    pub functions: Option<TransformTriple>,
    pub expected: ExpectedValues,
}

fn r(n: i64) -> Rational {
    rat(n, 1)
}

/// `g = diag(1,1,1,−1,−1)`, `ξ = E₀`, `φE₁ = E₃`, `φE₂ = E₄`.
pub fn standard_structure() -> AlmostContactStructure<Rational> {
    let mut phi = FrameTensor::zeros(5, vec![Variance::Contra, Variance::Co]);
    phi.set(&[3, 1], r(1));
    phi.set(&[4, 2], r(1));
    phi.set(&[1, 3], r(-1));
    phi.set(&[2, 4], r(-1));
    let g = FrameTensor::from_fn(5, vec![Variance::Co, Variance::Co], |i| {
        match (i[0] == i[1], i[0]) {
            (false, _) => r(0),
            (true, 0..=2) => r(1),
            (true, _) => r(-1),
        }
    });
    AlmostContactStructure::new(phi, Vector::basis(5, 0), Covector(Vector::basis(5, 0).0), g)
        .expect("standard structure is well formed")
}

/// Structure constants of the four commutators with `E₀`.
pub fn sasaki5_algebra(
    lambda: &Rational,
    mu: &Rational,
) -> Result<LieAlgebra<Rational>, GeometryError> {
    let (l, m) = (lambda.clone(), mu.clone());
    let one = r(1);
    let entries = vec![
        (0, 1, 2, l.clone()),
        (0, 1, 3, one.clone()),
        (0, 1, 4, m.clone()),
        (0, 2, 1, -l.clone()),
        (0, 2, 3, -m.clone()),
        (0, 2, 4, one.clone()),
        (0, 3, 1, -one.clone()),
        (0, 3, 2, -m.clone()),
        (0, 3, 4, l.clone()),
        (0, 4, 1, m),
        (0, 4, 2, -one),
        (0, 4, 3, -l),
    ];
    LieAlgebra::from_brackets(5, entries.into_iter().filter(|e| e.3 != r(0)))
}

pub fn example_functions() -> TransformTriple {
    TransformTriple::parse(U_EXAMPLE, V_EXAMPLE, W_EXAMPLE, 5).expect("built-in expressions parse")
}

pub fn example_sasaki5(lambda: &Rational, mu: &Rational) -> ExampleManifest {
    let alg = sasaki5_algebra(lambda, mu).expect("commutators are antisymmetric");
    let manifold = AcbmManifold::new(alg, standard_structure()).expect("dimensions agree");
    let curvature = [
        ([0, 1, 1, 0], 1),
        ([0, 2, 2, 0], 1),
        ([0, 3, 3, 0], -1),
        ([0, 4, 4, 0], -1),
        ([1, 2, 3, 4], 1),
        ([1, 4, 3, 2], 1),
        ([2, 3, 4, 1], 1),
        ([3, 4, 1, 2], 1),
        ([1, 3, 3, 1], 1),
        ([2, 4, 4, 2], 1),
    ]
    .into_iter()
    .map(|(i, v)| (i, r(v)))
    .collect();
    ExampleManifest {
        name: "sasaki5",
        manifold,
        functions: Some(example_functions()),
        expected: ExpectedValues {
            curvature,
            curvature_provenance: Provenance::Published,
            ricci_xi_xi: r(4),
            tau: r(4),
            tau_star: r(0),
            scalars_provenance: Provenance::Published,
            theta_eta: r(-4),
            lee_provenance: Provenance::Published,
            tau_bar_coefficient: Some(r(4)),
        },
    }
}

/// Abelian group with the same structure tensors; `F = 0`.
pub fn example_abelian_f0() -> ExampleManifest {
    let manifold =
        AcbmManifold::new(LieAlgebra::abelian(5), standard_structure()).expect("dimensions agree");
    let functions =
        TransformTriple::parse("x1", "x2", "x0", 5).expect("built-in expressions parse");
    ExampleManifest {
        name: "abelian5",
        manifold,
        functions: Some(functions),
        expected: ExpectedValues {
            curvature: Vec::new(),
            curvature_provenance: Provenance::Structural,
            ricci_xi_xi: r(0),
            tau: r(0),
            tau_star: r(0),
            scalars_provenance: Provenance::Structural,
            theta_eta: r(0),
            lee_provenance: Provenance::Structural,
            tau_bar_coefficient: None,
        },
    }
}

/// Looks up a built-in example by name.
pub fn example_by_name(name: &str, lambda: &Rational, mu: &Rational) -> Option<ExampleManifest> {
    match name {
        "sasaki5" => Some(example_sasaki5(lambda, mu)),
        "abelian5" | "abelian" => Some(example_abelian_f0()),
        _ => None,
    }
}
