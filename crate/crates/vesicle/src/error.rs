//! Error types shared across the toolkit.

use thiserror::Error;

/// Errors produced by enumeration, series evaluation, and phase analysis.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A size or order argument fell outside its supported range.
    #[error("{what} = {value} out of range (max {max})")]
    OutOfBounds {
        what: &'static str,
        value: i64,
        max: i64,
    },

    /// A parameter violated a domain requirement (e.g. a non-positive fugacity).
    #[error("domain error: {0}")]
    Domain(String),

    /// A walk-pair configuration violated the non-crossing invariant.
    #[error("invariant violation: bottom path rises above top path at step {step}")]
    CrossingPaths { step: usize },

    /// A floating-point range was exhausted; `advice` names the way out.
    #[error("overflow in {context}; {advice}")]
    Overflow {
        context: &'static str,
        advice: &'static str,
    },

    /// A q-Pochhammer factor in a series denominator vanished.
    #[error("singular denominator: (qy;q)_n factor vanished at n = {index}")]
    SingularDenominator { index: usize },

    /// A series failed the two-consecutive-small-terms test within the term budget.
    #[error("series did not converge within {max_terms} terms (treated as divergence)")]
    NotConverged { max_terms: usize },

    /// Floating-point cancellation destroyed the requested accuracy.
    #[error("catastrophic cancellation: max term / result ~ 1e{lost_digits}; use a stable route")]
    CancellationLoss { lost_digits: i32 },

    /// H(x,y,q) is (numerically) zero: the point sits at or beyond a singularity of S.
    #[error("near-singularity: H(x,y,q) = {h_value:e}, point at or beyond the radius of convergence")]
    NearSingularity { h_value: f64 },

    /// The necklace denominator 1 - c[x+y+S] was not positive.
    #[error("beyond pole: necklace denominator = {denominator:e} <= 0")]
    BeyondPole { denominator: f64 },

    /// Negative radicand in the q = 1 closed form.
    #[error("branch cut: radicand = {radicand:e} < 0 in the q = 1 closed form")]
    BranchCut { radicand: f64 },

    /// A continued-fraction level produced a (near-)zero denominator.
    #[error("singular convergent at continued-fraction level {level}")]
    SingularConvergent { level: usize },

    /// The simple-pole formula was requested below its validity threshold.
    #[error("pole formula invalid: c = {c} below c_s = {c_s}")]
    PoleFormulaInvalid { c: f64, c_s: f64 },

    /// The area density has no finite limit at this point.
    #[error("area density undefined at c = {c}, s = {s}, q = {q}")]
    UndefinedDensity { c: f64, s: f64, q: f64 },

    /// The pole-location bisection could not bracket a root.
    #[error("no pole found for c = {c}, s = {s}, q = {q}: {detail}")]
    NoPoleFound {
        c: f64,
        s: f64,
        q: f64,
        detail: String,
    },

    /// A scaling fit received unusable data (non-positive means, short grids, ...).
    #[error("fit domain error: {0}")]
    FitDomain(String),

    /// Airy-function argument outside the Maclaurin evaluation domain.
    #[error("Airy argument z = {z} outside |z| <= {max}")]
    AiryDomain { z: f64, max: f64 },

    /// The Airy asymptote was evaluated at or past the first zero of Ai.
    #[error("Airy asymptote pole: Ai({z}) = {ai:e} at or past its first zero")]
    AiryPole { z: f64, ai: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that indicate invalid input rather than an analytic obstruction.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::OutOfBounds { .. } | Error::Domain(_) | Error::CrossingPaths { .. }
        )
    }
}
