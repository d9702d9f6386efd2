/// Any way a solver in this crate can refuse to produce a number.
///
/// Diagnostic payloads are carried as `f64` regardless of the scalar type the
/// computation ran in, so the enum stays non-generic and cheap to thread
/// through call sites.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("bar length must be positive and finite, got L = {0}")]
    InvalidLength(f64),

    #[error("interface must lie strictly inside the bar: l = {interface}, L = {length}")]
    InterfaceOutOfRange { interface: f64, length: f64 },

    #[error("film coefficient must be positive and finite, got h = {0}")]
    InvalidFilmCoefficient(f64),

    #[error("source temperature must exceed ambient: F = {source_temperature}, Ta = {ambient}")]
    SourceNotAboveAmbient {
        source_temperature: f64,
        ambient: f64,
    },

    #[error("material `{name}`: conductivity must be positive and finite, got k = {value}")]
    InvalidConductivity { name: String, value: f64 },

    #[error("material `{name}`: diffusivity must be positive and finite, got alpha^2 = {value}")]
    InvalidDiffusivity { name: String, value: f64 },

    #[error("position x = {x} is outside the bar [0, {length}]")]
    PositionOutOfDomain { x: f64, length: f64 },

    #[error("time must be finite and non-negative, got t = {0}")]
    InvalidTime(f64),

    #[error("half-bar shortcut requires l = L/2, got l = {interface}, L = {length}")]
    InterfaceNotAtMidpoint { interface: f64, length: f64 },

    #[error("x = {x} is within {tol:e} of the branch discontinuity at {jump}")]
    AtBranchJump { x: f64, jump: f64, tol: f64 },

    #[error("eigenvalue relation is singular at x = {x}: |{what}| = {magnitude:e}")]
    SingularEigenRelation {
        x: f64,
        what: &'static str,
        magnitude: f64,
    },

    #[error(
        "eigenvalue search exhausted: found {found} of {requested} roots below x = {bound} \
         even after extending the bound once"
    )]
    EigenSearchExhausted {
        found: usize,
        requested: usize,
        bound: f64,
    },

    #[error("mode count must be at least 1")]
    ZeroModeCount,

    #[error("quadrature failed to converge on [{a}, {b}]: error estimate {estimate:e}")]
    QuadratureDidNotConverge { a: f64, b: f64, estimate: f64 },

    #[error("degenerate coefficient denominator for mode {index}: |den| = {magnitude:e}")]
    DegenerateDenominator { index: usize, magnitude: f64 },

    #[error("grid of {nodes} nodes with dx = {dx} does not tile the bar of length {length}")]
    GridDoesNotTile { nodes: usize, dx: f64, length: f64 },

    #[error("interface l = {interface} does not map to an interior grid node (dx = {dx})")]
    InterfaceNotInteriorNode { interface: f64, dx: f64 },

    #[error(
        "explicit scheme unstable: max diffusivity {max_diffusivity:e} >= dx^2/(2 dt) = {threshold:e}"
    )]
    UnstableGrid {
        max_diffusivity: f64,
        threshold: f64,
    },

    #[error("step size must be positive and finite, got {name} = {value}")]
    InvalidStep { name: &'static str, value: f64 },

    #[error("solution diverged at step {step} (t = {time} s): |U| exceeded {limit}")]
    Diverged { step: u64, time: f64, limit: f64 },

    #[error("probe position {0} is outside the bar")]
    ProbeOutOfDomain(f64),

    #[error("comparison times must be >= {min} s, got t = {got}")]
    ComparisonTimeTooSmall { min: f64, got: f64 },

    #[error("fraction must lie strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),

    #[error(
        "probe at x = {x} did not reach the {fraction} fraction of its steady value within {t_cap} s"
    )]
    TargetNotReached { x: f64, fraction: f64, t_cap: f64 },
}

/// Shorthand used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;
