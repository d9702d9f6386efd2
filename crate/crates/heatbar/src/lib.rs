//! Transient heat conduction in a bar made of two materials.
//!
//! The bar occupies `[0, L]` with an interface at `x = l`: one material on
//! `(0, l)`, another on `(l, L)`, in perfect thermal contact. The left end
//! is held at a source temperature `F`, the right end loses heat to the
//! surroundings through a film with coefficient `h`, and the bar starts at
//! the ambient temperature `Ta`. Temperature and heat flux are continuous
//! across the interface.
//!
//! Three independent solution routes are provided and cross-checked:
//!
//! * [`SteadySolution`]: the closed-form piecewise-linear equilibrium,
//! * [`AnalyticSolution`]: a Fourier series over the eigenmodes of the
//!   two-material Sturm-Liouville problem, whose eigenvalues come from a
//!   transcendental matching condition solved in [`eigen`],
//! * [`fdm`]: an explicit forward-time, centered-space march with a
//!   conservative closure at the interface node.
//!
//! [`validate`] measures how closely the routes agree and renders the
//! result as a deterministic plain-text report.
//!
//! All solvers are generic over the floating-point type through the
//! [`Real`] trait; `f64` is the intended default and `f32` works where a
//! rough, fast pass is enough. `*64` aliases are exported for the common
//! case.
//!
//! ```
//! use heatbar::{builtin, BarProblem, SteadySolution};
//!
//! // iron feeding into lead, source at 100 C, ambient 25 C
//! let bar: BarProblem<f64> = BarProblem::new(
//!     1.0, 0.3,
//!     builtin("Fe").unwrap(), builtin("Pb").unwrap(),
//!     10.0, 100.0, 25.0,
//! )?;
//! let steady = SteadySolution::solve(&bar);
//! let mid = steady.eval(0.5)?;
//! assert!(mid > 25.0 && mid < 100.0);
//! # Ok::<(), heatbar::Error>(())
//! ```

pub mod eigen;
pub mod error;
pub mod fdm;
pub mod materials;
pub mod problem;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod steady;
pub mod validate;

pub use eigen::{find_eigenvalues, verify_mode, Eigenmode, ModeCheck};
pub use error::{Error, Result};
pub use fdm::{check_stability, run, FdmRun, FdmState, GridSpec, StabilityCheck};
pub use materials::{builtin, builtin_materials, Material};
pub use problem::BarProblem;
pub use scalar::Real;
pub use series::{
    coefficient_closed_form, coefficient_left_segment_ratio, coefficient_quadrature,
    AnalyticSolution, CoefficientMethod,
};
pub use steady::{interface_temperature_half, right_end_temperature_half, SteadySolution};
pub use validate::{
    audit_eigen, coefficient_table, compare_profiles, relation_constants, steady_consistency,
    time_to_fraction, ComparisonReport, ProfileComparison, RelationConstants, SteadyConsistency,
};

/// Double-precision aliases for the generic building blocks.
pub type Material64 = Material<f64>;
pub type BarProblem64 = BarProblem<f64>;
pub type SteadySolution64 = SteadySolution<f64>;
pub type Eigenmode64 = Eigenmode<f64>;
pub type AnalyticSolution64 = AnalyticSolution<f64>;
pub type GridSpec64 = GridSpec<f64>;
pub type FdmState64 = FdmState<f64>;
pub type ComparisonReport64 = ComparisonReport<f64>;
