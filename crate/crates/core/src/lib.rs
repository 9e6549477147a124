//! Finite-dimensional modular theory and quantum information geometry.
//!
//! The crate works in the standard form of the full `n×n` matrix algebra in a
//! faithful state ρ and provides:
//!
//! * [`matfun`]: spectral functions of Hermitian matrices, the Fréchet
//!   derivative of `exp`, density matrices.
//! * [`standard_form`]: the GNS space with `Ω = vec(ρ^{1/2})`, modular
//!   operator and conjugation, modular flow and the KMS boundary relation,
//!   the cones `V^α`, Radon-Nikodym elements, tangent splitting.
//! * [`divergence`]: relative modular operator, Araki and Umegaki relative
//!   entropy.
//! * [`arcs`]: exponential arcs, their potential and Legendre dual.
//! * [`km_metric`]: the Kubo-Mori metric, computed several ways.
//! * [`submanifold`]: dually flat exponential families with θ/η coordinates.
//! * [`verify`]: the seeded property suite behind `modman verify`.
//! * [`io`], [`cli`]: JSON/CSV formats and the `modman` command line.

pub mod arcs;
pub mod cli;
pub mod divergence;
pub mod error;
pub mod io;
pub mod km_metric;
pub mod matfun;
pub mod quadrature;
pub mod random;
pub mod standard_form;
pub mod submanifold;
pub mod verify;

pub use arcs::ExponentialArc;
pub use divergence::RelativeModularOperator;
pub use error::{Error, Result};
pub use km_metric::MetricContext;
pub use matfun::{CMatrix, DensityMatrix, HermitianMatrix, SpectralDecomposition};
pub use standard_form::{ConeVector, GnsSpace, TangentFunctional};
pub use submanifold::{EtaPoint, SubmanifoldModel, ThetaPoint};
