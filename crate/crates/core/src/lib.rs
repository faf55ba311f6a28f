//! Exact tensor calculus for left-invariant almost contact B-metric
//! structures on Lie groups, contact conformal transformations of them, and
//! pointwise verification of Yamabe solitons.

pub mod catalog;
pub mod commands;
pub mod error;
pub mod expr;
pub mod lie;
pub mod manifest;
pub mod report;
pub mod scalar;
pub mod structure;
pub mod tensor;
pub mod transform;

pub use catalog::{
    example_abelian_f0, example_functions, example_sasaki5, ExampleManifest, Provenance,
};
pub use error::{CommandError, ExprError, GeometryError, ManifestError, TensorError};
pub use expr::{Expression, Number, Point};
pub use lie::{koszul_connection, Connection, CurvatureData, LieAlgebra};
pub use manifest::{LoadedManifest, Manifest};
pub use report::{Check, Report, Status};
pub use scalar::{Rational, Scalar};
pub use structure::{AcbmManifold, AlmostContactStructure, LeeForms};
pub use tensor::{Covector, FrameTensor, MetricPair, Variance, Vector};
pub use transform::{
    Branch, SolitonKind, SolitonVerdict, SourceGeometry, TransformJet, TransformTriple,
};
