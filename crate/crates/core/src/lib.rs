pub mod calibration;
pub mod error;
pub mod hecke;
pub mod io;
pub mod linalg;
pub mod relations;
pub mod roots;
pub mod scalar;
pub mod skew;
pub mod suite;
pub mod torus;
pub mod weyl;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/scalars.md")]
    pub struct Scalars;
    #[doc = include_str!("../../../book/src/roots-and-weyl.md")]
    pub struct RootsAndWeyl;
    #[doc = include_str!("../../../book/src/weights-and-graph.md")]
    pub struct WeightsAndGraph;
    #[doc = include_str!("../../../book/src/hecke-algebra.md")]
    pub struct HeckeAlgebra;
    #[doc = include_str!("../../../book/src/skew-modules.md")]
    pub struct SkewModules;
    #[doc = include_str!("../../../book/src/tau-operators.md")]
    pub struct TauOperators;
    #[doc = include_str!("../../../book/src/serialization.md")]
    pub struct Serialization;
    #[doc = include_str!("../../../book/src/sweeps.md")]
    pub struct Sweeps;
}
