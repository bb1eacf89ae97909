use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("radius {rho} outside the domain rho > 0")]
    Domain { rho: f64 },

    #[error("energy {epsilon} lies below the potential minimum {minimum}")]
    BelowPotentialMinimum { epsilon: f64, minimum: f64 },

    #[error("no potential well for this configuration")]
    NoWell,

    #[error("no potential barrier for this configuration")]
    NoBarrier,

    #[error("state at energy {epsilon} is not quasi-bound (no barrier above it)")]
    NotQuasiBound { epsilon: f64 },

    #[error("potential has no inner turning point at energy {epsilon}; the action diverges at the origin")]
    NoInnerTurningPoint { epsilon: f64 },

    #[error("integrand negative inside ({a}, {b}); endpoints do not bracket a classically allowed region")]
    Bracketing { a: f64, b: f64 },

    #[error("orbit integration failed at t = {time}: relative energy drift {drift:e}")]
    EnergyDrift { time: f64, drift: f64 },

    #[error("phase integration step rejected too often at z = {z}")]
    StepRejected { z: f64 },

    #[error(
        "phase tail did not converge: extrapolated limits differ by {difference}; increase z_max"
    )]
    TailNotConverged { difference: f64 },

    #[error("resonance fit residual {residual} rad exceeds tolerance")]
    FitResidual { residual: f64 },

    #[error("resonance at {epsilon} is too narrow to resolve in double precision")]
    UnresolvableWidth { epsilon: f64 },

    #[error(
        "lifetime too long for this grid: survival never reaches 1/2 and fitted rate is {rate:e}"
    )]
    LifetimeTooLong { rate: f64 },

    #[error("requested state index {index} but only {available} states are available")]
    StateIndex { index: usize, available: usize },

    #[error("bisection failed: no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },
}
