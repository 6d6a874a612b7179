//! Hyperkähler ALE spaces as finite-dimensional hyperkähler quotients.
//!
//! The crate builds the finite subgroups of SU(2), their McKay data, the flat
//! quaternionic module of invariant matrix pairs and its moment maps, then
//! solves the moment-map equations and samples the quotient metric. The
//! `bridge` module checks that equivariant sections over the three-sphere
//! reproduce the same hyperkähler structure and moment maps.
//!
//! Matrix pairs, gauge-algebra elements and moment values are all expressed
//! in the isotypic frame of the regular representation (see [`mckay`]), where
//! the representation is block diagonal.

pub mod bridge;
pub mod cache;
pub mod config;
pub mod dynkin;
pub mod error;
pub mod flat;
pub mod group;
pub mod linalg;
pub mod mckay;
pub mod moment;
pub mod par;
pub mod pipeline;
pub mod report;
pub mod roots;
pub mod solver;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use flat::{FlatModule, GaugeAlgebra, InvariantBasis, MatrixPair};
pub use group::{build_group, verify_group, Family, FiniteSubgroup, GroupLabel};
pub use mckay::{mckay_data, McKayData, RegularRep};
pub use moment::{is_good_zeta, moment, zeta_to_cartan, MomentValue, Zeta};
pub use solver::{solve_moment, SolveOptions, SolveResult};
