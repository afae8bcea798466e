use thiserror::Error;

/// Errors produced by the potential constructors and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A family parameter violates its admissibility constraint.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Evaluation point lies outside the potential's domain.
    #[error("domain error: x = {x} outside [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    /// Requested energy exceeds the potential's range (finite-interval case).
    #[error("energy {energy} beyond potential range (sup V = {sup_v})")]
    Range { energy: f64, sup_v: f64 },

    /// A quadrature or limit failed to converge to the requested tolerance.
    #[error("numerical error: {context} (achieved error estimate {achieved:e})")]
    Numerical { context: String, achieved: f64 },

    /// The integrand hits the |S| = 1 singularity inside the integration range.
    #[error("singular integrand: |S(X)| reaches 1 near X = {x}")]
    SingularIntegrand { x: f64 },

    /// Root bracketing failed for a quantisation or eigenvalue search.
    #[error("solver error at level n = {n}: {reason}")]
    Solver { n: usize, reason: String },

    /// A prescribed I2(E) admits no shear function with |S| < 1.
    #[error("inadmissible I2: {reason} at v = {v}")]
    InadmissibleI2 { reason: String, v: f64 },

    /// Cesaro mean of S did not converge; asymptotic frequencies undefined.
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
