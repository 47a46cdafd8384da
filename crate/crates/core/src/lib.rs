//! Analytic spread of binomial edge ideals `J_G`.
//!
//! The value is computed from the generic rank of the Jacobian of the edge
//! binomials `x_i y_j - x_j y_i`, or from closed formulas for the graph
//! classes that have one. Closed graphs also get a Newton polyhedron route.

pub mod algebra;
pub mod graph;
pub mod lp;
pub mod matrix;
pub mod newton;
pub mod poly;
pub mod scalar;
pub mod spread;
pub mod suites;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use algebra::{build_system, generic_rank, greedy_transcendence_base, FieldConfig, FieldMode, RankCertificate};
pub use graph::{parse_graph, Graph, GraphError, GraphFormat};
pub use newton::{closed_spread_via_newton, NewtonError};
pub use spread::{analytic_spread, Method, Policy, SpreadError, SpreadResult};

pub type Error = SpreadError;
pub type Rational = BigRational;
pub type RationalMatrix = matrix::Matrix<BigRational>;
pub type PrimeMatrix = matrix::Matrix<scalar::Fp>;
pub type IntMatrix = matrix::Matrix<BigInt>;
pub type PolyMatrix = matrix::Matrix<poly::MPoly>;
