//! Exact analysis of finite subsets of an n-fold Cartesian product.
//!
//! A finite set `S` of points is *good* when every function on `S` splits as
//! `u_1(x_1) + ... + u_n(x_n)`. Over a finite set this is a rank statement
//! about the 0/1 incidence matrix pairing points with the coordinate values
//! they use, so every decision here is made by exact rational elimination.
//!
//! Modules:
//!
//! * [`model`]: coordinate labels, points, point sets and the incidence system.
//! * [`linalg`]: exact rational matrices (rref, kernel, solve, inverse).
//! * [`analysis`]: goodness, fullness, boundary sets and additive decomposition.
//! * [`components`]: full subsets, full/related components and geodesics.
//! * [`family`]: the three-dimensional family `D_n`, `A_n`, `F_n`, `M_n` and its
//!   verification suite.
//! * [`io`]: the JSON document formats shared by the CLI and the web demo.

pub mod analysis;
pub mod components;
pub mod family;
pub mod io;
pub mod linalg;
pub mod model;

pub use analysis::{
    analyze_goodness, decompose, find_boundary, is_boundary, is_full, AnalysisError,
    BoundarySet, Decomposition, DependenceCertificate, GoodnessReport,
};
pub use components::{
    enumerate_full_subsets, full_components, geodesic, related_components, ComponentsError,
    GeodesicResult, Partition, DEFAULT_ENUMERATION_CAP,
};
pub use linalg::{Matrix, Rational};
pub use model::{build_incidence, CoordinateLabel, IncidenceSystem, ModelError, Point, PointSet};
