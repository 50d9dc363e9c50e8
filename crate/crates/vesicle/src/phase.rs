//! Dominant singularity of the generating function, phase structure,
//! densities of contacts and area, and the critical scaling laws.
//!
//! At q = 1 everything is in closed form: a square-root branch point at
//! t_r(s) rules the unbound phase, a simple pole t_p(c,s) the bound phase,
//! and the two meet at c = c_s(s). For q < 1 the pole is located by
//! inverting the continued-fraction representation of c(t_p, s, q) with
//! bisection on its (numerically re-verified) monotonicity. For q > 1 the
//! radius of convergence collapses to zero.

use serde::{Deserialize, Serialize};

use crate::airy::{airy, AIRY_MAX_ABS_Z};
use crate::error::{Error, Result};
use crate::qseries::{cfrac_tail, converge_depth, Q_ONE_WINDOW};
use crate::scaling::{loglog_fit, ScalingFit};

pub use crate::airy::{find_ai_prime_first_zero, AiryValue, AIRY_AI_PRIME_FIRST_ZERO};

/// Singularity type of the generating function at t_c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularityKind {
    SquareRootBranch,
    SimplePole,
}

impl std::fmt::Display for SingularityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularityKind::SquareRootBranch => write!(f, "square_root_branch"),
            SingularityKind::SimplePole => write!(f, "simple_pole"),
        }
    }
}

/// Phase label of a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Unbound,
    Bound,
    Critical,
    Deflated,
    Inflated,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Phase::Unbound => "unbound",
            Phase::Bound => "bound",
            Phase::Critical => "critical",
            Phase::Deflated => "deflated",
            Phase::Inflated => "inflated",
        };
        write!(f, "{name}")
    }
}

/// Location, type, and phase of the dominant singularity.
///
/// `kind` is None only in the inflated phase, where t_c = 0 is not a
/// singularity of any type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularityResult {
    pub t_c: f64,
    pub kind: Option<SingularityKind>,
    pub phase: Phase,
}

/// Densities per unit length; `area` is None where the limit is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Densities {
    pub contacts: f64,
    pub area: Option<f64>,
}

/// Absolute tolerance of the c = c_s tie for the "critical" label.
pub const CRITICAL_TIE_TOL: f64 = 1e-12;

/// Absolute tolerance of the pole bisection in t.
pub const T_P_BISECTION_TOL: f64 = 1e-13;

/// Square-root branch point t_r(s) = s/(1+s)^2 of the q = 1 solution.
pub fn t_r(s: f64) -> f64 {
    s / ((1.0 + s) * (1.0 + s))
}

/// Binding threshold c_s(s) = (s+1)^2/(s^2+s+1).
pub fn c_s(s: f64) -> f64 {
    (s + 1.0) * (s + 1.0) / (s * s + s + 1.0)
}

/// Simple pole t_p(c,s) of the q = 1 solution; only valid for c >= c_s(s).
pub fn t_p_q1(c: f64, s: f64) -> Result<f64> {
    let cs = c_s(s);
    if c < cs - CRITICAL_TIE_TOL {
        return Err(Error::PoleFormulaInvalid { c, c_s: cs });
    }
    let s2 = s * s;
    let one_plus = 1.0 + s2;
    let one_minus = 1.0 - s2;
    let radicand = ((one_plus * one_plus * c) - one_minus * one_minus) * (c - 1.0);
    let root = radicand.max(0.0).sqrt();
    Ok(((1.0 - c) * one_plus + root) / (2.0 * c * s))
}

/// Dominant singularity at q = 1: branch point below c_s, pole above,
/// their common value exactly at the transition.
pub fn t_c_q1(c: f64, s: f64) -> SingularityResult {
    let cs = c_s(s);
    if (c - cs).abs() <= CRITICAL_TIE_TOL {
        SingularityResult {
            t_c: t_r(s),
            kind: Some(SingularityKind::SquareRootBranch),
            phase: Phase::Critical,
        }
    } else if c < cs {
        SingularityResult {
            t_c: t_r(s),
            kind: Some(SingularityKind::SquareRootBranch),
            phase: Phase::Unbound,
        }
    } else {
        SingularityResult {
            t_c: t_p_q1(c, s).expect("c > c_s here"),
            kind: Some(SingularityKind::SimplePole),
            phase: Phase::Bound,
        }
    }
}

/// The binding fugacity at which the pole sits at t_p, from the
/// continued-fraction representation, at a fixed truncation depth.
pub fn c_of_tp(t_p: f64, s: f64, q: f64, depth: usize) -> Result<f64> {
    if !(t_p > 0.0) || !(s > 0.0) || !(q > 0.0) {
        return Err(Error::Domain(format!(
            "c_of_tp needs positive arguments (t_p = {t_p}, s = {s}, q = {q})"
        )));
    }
    let x = t_p / s;
    let y = t_p * s;
    let tail = cfrac_tail(x, y, q, depth)?;
    Ok(1.0 / (x + tail))
}

/// c_of_tp with the truncation depth doubled to convergence.
pub fn c_of_tp_auto(t_p: f64, s: f64, q: f64) -> Result<f64> {
    converge_depth(|d| c_of_tp(t_p, s, q, d), 1e-14)
}

/// Locate the dominant simple pole for q < 1 by bisection on the monotone
/// map t -> c_of_tp(t,s,q). Handles q >= 1 by routing: the q = 1 window uses
/// the closed forms, q > 1 short-circuits to t_c = 0 (inflated).
pub fn t_p_general(c: f64, s: f64, q: f64) -> Result<SingularityResult> {
    if !(c > 0.0) || !(s > 0.0) || !(q > 0.0) {
        return Err(Error::Domain(format!(
            "t_p_general needs positive parameters (c = {c}, s = {s}, q = {q})"
        )));
    }
    if q > 1.0 {
        return Ok(SingularityResult {
            t_c: 0.0,
            kind: None,
            phase: Phase::Inflated,
        });
    }
    if q >= 1.0 - Q_ONE_WINDOW {
        // closed forms; the continued fraction has no convergence guarantee
        // at q = 1 and buys nothing 1e-8 away from it
        let mut r = t_c_q1(c, s);
        if q < 1.0 {
            r.phase = Phase::Deflated;
            r.kind = Some(SingularityKind::SimplePole);
        }
        return Ok(r);
    }

    let eval = |t: f64| c_of_tp_auto(t, s, q);

    // The pole moves away from the origin as q drops, so the q = 1 location
    // is a strict lower bound for the bracket.
    let mut lo = t_c_q1(c, s).t_c;
    match eval(lo) {
        Ok(v) if v > c => {}
        Ok(_) | Err(_) => lo = 1e-12, // fall back to a conservative bracket
    }
    if eval(lo).map(|v| v <= c).unwrap_or(true) {
        return Err(Error::NoPoleFound {
            c,
            s,
            q,
            detail: "no valid lower bracket: c_of_tp(lo) <= c".into(),
        });
    }

    // Grow the upper bracket by doubling increments. Gentle growth matters:
    // past its radius the truncated fraction returns non-monotone garbage,
    // so overshooting far beyond the pole must be avoided; the window
    // between the pole and the breakdown shrinks like the critical cusp.
    let mut step = (lo * 1e-6).max(1e-9);
    let mut hi;
    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 600 {
            return Err(Error::NoPoleFound {
                c,
                s,
                q,
                detail: format!("bracket growth failed near t = {lo}"),
            });
        }
        hi = lo + step;
        match eval(hi) {
            Ok(v) if v > c => {
                lo = hi;
                step *= 2.0;
            }
            Ok(v) => {
                // candidate bracket; reject it when the midpoint value breaks
                // monotonicity (a symptom of evaluating past the radius)
                match eval(0.5 * (lo + hi)) {
                    Ok(vm) if vm >= v => break,
                    _ => {
                        step *= 0.5;
                        if step < 1e-15 {
                            return Err(Error::NoPoleFound {
                                c,
                                s,
                                q,
                                detail: format!("monotonicity check failed at t = {hi}, c_of_tp = {v}"),
                            });
                        }
                    }
                }
            }
            Err(_) => {
                step *= 0.5;
                if step < 1e-15 {
                    return Err(Error::NoPoleFound {
                        c,
                        s,
                        q,
                        detail: format!("fraction breakdown adjacent to t = {lo}"),
                    });
                }
            }
        }
    }

    while hi - lo > T_P_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        match eval(mid) {
            Ok(v) if v > c => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => hi = mid,
        }
    }
    let root = 0.5 * (lo + hi);
    // residual backstop against a spurious crossing of a garbage branch
    let v_root = eval(root)?;
    if (v_root - c).abs() > 1e-6 * c {
        return Err(Error::NoPoleFound {
            c,
            s,
            q,
            detail: format!("residual check failed: c_of_tp({root}) = {v_root}"),
        });
    }
    Ok(SingularityResult {
        t_c: root,
        kind: Some(SingularityKind::SimplePole),
        phase: Phase::Deflated,
    })
}

/// Density of contacts at q = 1 (closed form); zero through the unbound
/// phase, growing linearly past c_s.
pub fn density_contacts_q1(c: f64, s: f64) -> f64 {
    let cs = c_s(s);
    if c <= cs {
        return 0.0;
    }
    let s2 = s * s;
    let one_plus = 1.0 + s2;
    let one_minus = 1.0 - s2;
    let radicand = ((one_plus * one_plus * c) - one_minus * one_minus) * (c - 1.0);
    (c - 2.0) / (2.0 * (c - 1.0)) + c * one_plus / (2.0 * radicand.sqrt())
}

/// Density of area at q = 1, s = 1 (closed form); undefined at and below
/// c = 4/3 where the mean area grows faster than n.
pub fn density_area_q1_s1(c: f64) -> Result<f64> {
    if c <= 4.0 / 3.0 {
        return Err(Error::UndefinedDensity { c, s: 1.0, q: 1.0 });
    }
    Ok((2.0 * (c - 1.0) + (c * (c - 1.0)).sqrt()) / (3.0 * c - 4.0))
}

/// t_c as a function of the point, for differentiation.
fn t_c_value(c: f64, s: f64, q: f64) -> Result<f64> {
    if (q - 1.0).abs() <= Q_ONE_WINDOW && q <= 1.0 {
        Ok(t_c_q1(c, s).t_c)
    } else {
        Ok(t_p_general(c, s, q)?.t_c)
    }
}

/// Central log-log derivative with one Richardson step.
fn dlog_dlog_central<F>(f: F, x0: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let d = |hh: f64| -> Result<f64> {
        let fp = f(x0 * hh.exp())?.ln();
        let fm = f(x0 * (-hh).exp())?.ln();
        Ok((fp - fm) / (2.0 * hh))
    };
    let d1 = d(h)?;
    let d2 = d(0.5 * h)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// One-sided (backward) log-log derivative at the right edge of the domain,
/// second order, with one Richardson step.
fn dlog_dlog_one_sided<F>(f: F, x0: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let d = |hh: f64| -> Result<f64> {
        let f0 = f(x0)?.ln();
        let f1 = f(x0 * (-hh).exp())?.ln();
        let f2 = f(x0 * (-2.0 * hh).exp())?.ln();
        Ok((3.0 * f0 - 4.0 * f1 + f2) / (2.0 * hh))
    };
    let d1 = d(h)?;
    let d2 = d(0.5 * h)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Finite-difference step in log-parameter space.
const FD_LOG_STEP: f64 = 1e-4;

/// Densities by finite differences of log t_c, with no closed-form shortcut.
/// M = -d log t_c / d log c; A = -d log t_c / d log q.
pub fn densities_fd(c: f64, s: f64, q: f64) -> Result<Densities> {
    let contacts = -dlog_dlog_central(|cc| t_c_value(cc, s, q), c, FD_LOG_STEP)?;
    let area = if (q - 1.0).abs() <= Q_ONE_WINDOW {
        // q = 1 is the edge of the domain: backward differences only
        -dlog_dlog_one_sided(|qq| t_c_value(c, s, qq), q.min(1.0), FD_LOG_STEP)?
    } else {
        // keep the stencil strictly below q = 1
        let h = FD_LOG_STEP.min(0.25 * (1.0 - q));
        -dlog_dlog_central(|qq| t_c_value(c, s, qq), q, h)?
    };
    Ok(Densities {
        contacts: contacts.max(0.0),
        area: Some(area),
    })
}

/// Densities of contacts and area, through closed forms where they exist and
/// finite differences of the pole location elsewhere.
pub fn densities_general(c: f64, s: f64, q: f64) -> Result<Densities> {
    if q > 1.0 {
        // inflated: <m> ~ n^0 gives zero density, <a> ~ n^2 has no density
        return Ok(Densities {
            contacts: 0.0,
            area: None,
        });
    }
    if (q - 1.0).abs() <= Q_ONE_WINDOW {
        let cs = c_s(s);
        let contacts = density_contacts_q1(c, s);
        let area = if c <= cs + CRITICAL_TIE_TOL {
            None // undefined through the unbound phase and at the transition
        } else if (s - 1.0).abs() < 1e-14 {
            Some(density_area_q1_s1(c)?)
        } else {
            densities_fd(c, s, 1.0)?.area
        };
        return Ok(Densities { contacts, area });
    }
    densities_fd(c, s, q)
}

/// Asymptotic staircase value S ~ 1/4 + 4^{-2/3} eps^{1/3} Ai'(z)/Ai(z) with
/// z = 4^{1/3} (1 - 4t) eps^{-2/3}, valid as eps = 1 - q -> 0 at fixed z.
pub fn s_airy_asymptotic(t: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 0.05) {
        return Err(Error::Domain(format!(
            "epsilon = {epsilon} outside (0, 0.05]"
        )));
    }
    let z = 4f64.powf(1.0 / 3.0) * (1.0 - 4.0 * t) * epsilon.powf(-2.0 / 3.0);
    if z.abs() > AIRY_MAX_ABS_Z {
        return Err(Error::AiryDomain {
            z,
            max: AIRY_MAX_ABS_Z,
        });
    }
    let v = airy(z)?;
    if v.ai <= 0.0 {
        return Err(Error::AiryPole { z, ai: v.ai });
    }
    Ok(0.25 + 4f64.powf(-2.0 / 3.0) * epsilon.powf(1.0 / 3.0) * v.ai_prime / v.ai)
}

fn validate_epsilons(epsilons: &[f64], max: f64, min_count: usize) -> Result<()> {
    if epsilons.len() < min_count {
        return Err(Error::FitDomain(format!(
            "need at least {min_count} epsilon values, got {}",
            epsilons.len()
        )));
    }
    if epsilons.iter().any(|&e| !(e > 0.0 && e <= max)) {
        return Err(Error::FitDomain(format!(
            "epsilon values must lie in (0, {max}]"
        )));
    }
    Ok(())
}

/// Fit of t_p(4/3, 1, 1-eps) - 1/4 against eps on log-log axes.
/// The exact law has exponent 2/3 and amplitude -a'_1 4^{-4/3} ~ 0.160450.
pub fn scaling_tp_at_cs(epsilons: &[f64]) -> Result<ScalingFit> {
    scaling_tp_cusp(4.0 / 3.0, epsilons)
}

/// Same fit at arbitrary c (the c < c_s cusp carries a different amplitude).
pub fn scaling_tp_cusp(c: f64, epsilons: &[f64]) -> Result<ScalingFit> {
    validate_epsilons(epsilons, 1e-2, 5)?;
    let mut ys = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let tp = t_p_general(c, 1.0, 1.0 - eps)?.t_c;
        let y = tp - 0.25;
        if y <= 0.0 {
            return Err(Error::FitDomain(format!(
                "t_p - 1/4 = {y} not positive at eps = {eps}"
            )));
        }
        ys.push(y);
    }
    loglog_fit(epsilons, &ys)
}

/// Which crossover law to verify around (c, q) = (c_s, 1) at s = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverSide {
    /// M(4/3, 1, 1-eps) ~ [3/(-a'_1 4^{2/3})] eps^{1/3}
    MOfQ,
    /// A(4/3, 1, 1-eps) ~ [-a'_1 2^{1/3}/3] eps^{-1/3}
    AOfQ,
    /// M(4/3 + d, 1, 1) ~ (27/8) d
    MOfC,
    /// A(4/3 + d, 1, 1) ~ (4/9) / d
    AOfC,
}

/// Verify one of the four crossover power laws; `deltas` are the eps or
/// c - c_s offsets, inside each law's validity window.
pub fn scaling_crossover(deltas: &[f64], side: CrossoverSide) -> Result<ScalingFit> {
    validate_epsilons(deltas, 1e-2, 5)?;
    let mut ys = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let y = match side {
            CrossoverSide::MOfQ => densities_fd(4.0 / 3.0, 1.0, 1.0 - d)?.contacts,
            CrossoverSide::AOfQ => densities_fd(4.0 / 3.0, 1.0, 1.0 - d)?
                .area
                .expect("area defined for q < 1"),
            CrossoverSide::MOfC => density_contacts_q1(4.0 / 3.0 + d, 1.0),
            CrossoverSide::AOfC => density_area_q1_s1(4.0 / 3.0 + d)?,
        };
        if y <= 0.0 {
            return Err(Error::FitDomain(format!(
                "observable {y} not positive at delta = {d}"
            )));
        }
        ys.push(y);
    }
    loglog_fit(deltas, &ys)
}

/// Phase classification with the dominant singularity and its type.
pub fn classify(c: f64, s: f64, q: f64) -> Result<SingularityResult> {
    if !(c > 0.0) || !(s > 0.0) || !(q > 0.0) {
        return Err(Error::Domain(format!(
            "classify needs positive parameters (c = {c}, s = {s}, q = {q})"
        )));
    }
    if q > 1.0 {
        return Ok(SingularityResult {
            t_c: 0.0,
            kind: None,
            phase: Phase::Inflated,
        });
    }
    if (q - 1.0).abs() <= CRITICAL_TIE_TOL {
        return Ok(t_c_q1(c, s));
    }
    t_p_general(c, s, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn t_r_values_and_symmetry() {
        assert!((t_r(1.0) - 0.25).abs() < 1e-16);
        assert!((t_r(2.0) - 2.0 / 9.0).abs() < 1e-16);
        assert!((t_r(2.0) - t_r(0.5)).abs() < 1e-16);
        assert!(t_r(1e-9) < 1e-8);
    }

    #[test]
    fn c_s_values_and_maximum() {
        assert!((c_s(1.0) - 4.0 / 3.0).abs() < 1e-15);
        assert!((c_s(1e-8) - 1.0).abs() < 1e-7);
        assert!((c_s(1e8) - 1.0).abs() < 1e-7);
        assert!((c_s(1.0 / 16.0) - 289.0 / 273.0).abs() < 1e-15);
        // interior maximum at s = 1
        for s in [0.25, 0.5, 0.9, 1.1, 2.0, 4.0] {
            assert!(c_s(s) < c_s(1.0));
        }
    }

    #[test]
    fn t_p_q1_reference_values() {
        assert!((t_p_q1(2.0, 1.0).unwrap() - (SQRT2 - 1.0) / 2.0).abs() < 1e-15);
        // c -> infinity squeezes the pole to zero
        assert!(t_p_q1(1e9, 1.0).unwrap() < 1e-4);
        assert!(matches!(
            t_p_q1(1.0, 1.0),
            Err(Error::PoleFormulaInvalid { .. })
        ));
    }

    #[test]
    fn t_p_meets_t_r_at_the_transition() {
        for s in [1.0 / 16.0, 0.25, 1.0, 4.0, 16.0] {
            let tp = t_p_q1(c_s(s), s).unwrap();
            assert!(
                (tp - t_r(s)).abs() < 1e-12,
                "s = {s}: t_p = {tp}, t_r = {}",
                t_r(s)
            );
        }
    }

    #[test]
    fn t_c_q1_classification() {
        let unbound = t_c_q1(1.0, 1.0);
        assert_eq!(unbound.phase, Phase::Unbound);
        assert_eq!(unbound.kind, Some(SingularityKind::SquareRootBranch));
        assert!((unbound.t_c - 0.25).abs() < 1e-15);

        let bound = t_c_q1(2.0, 1.0);
        assert_eq!(bound.phase, Phase::Bound);
        assert_eq!(bound.kind, Some(SingularityKind::SimplePole));
        assert!((bound.t_c - 0.20710678118654752).abs() < 1e-15);

        let critical = t_c_q1(4.0 / 3.0, 1.0);
        assert_eq!(critical.phase, Phase::Critical);
        assert!((critical.t_c - 0.25).abs() < 1e-15);
    }

    #[test]
    fn pole_identity_at_t_p() {
        // sqrt(((s-1)^2 t - s)((s+1)^2 t - s)) = t s^2 + s + t - 2s/c, both
        // sides non-negative, and 1/F vanishes.
        for (c, s) in [(2.0, 1.0), (1.8, 0.5), (3.0, 4.0)] {
            let t = t_p_q1(c, s).unwrap();
            let lhs_sq = ((s - 1.0) * (s - 1.0) * t - s) * ((s + 1.0) * (s + 1.0) * t - s);
            assert!(lhs_sq >= -1e-14);
            let rhs = t * s * s + s + t - 2.0 * s / c;
            assert!(rhs >= 0.0);
            assert!((lhs_sq.max(0.0).sqrt() - rhs).abs() < 1e-12);
            // necklace denominator via the q=1 closed form
            let (x, y) = (t / s, t * s);
            let r = (x * x - 2.0 * x * y + y * y - 2.0 * x - 2.0 * y + 1.0).sqrt();
            let denom = 1.0 - 0.5 * c * (x + y + 1.0 - r);
            assert!(denom.abs() < 1e-10, "denominator {denom} at c={c}, s={s}");
        }
    }

    #[test]
    fn c_of_tp_recovers_q1_pole() {
        let tp = t_p_q1(2.0, 1.0).unwrap();
        let c = c_of_tp_auto(tp, 1.0, 1.0 - 1e-7).unwrap();
        assert!((c - 2.0).abs() < 1e-5, "c = {c}");
    }

    #[test]
    fn c_of_tp_is_monotone_decreasing() {
        let mut prev = f64::INFINITY;
        for k in 1..=12 {
            let t = 0.02 * k as f64;
            let c = c_of_tp_auto(t, 1.0, 0.5).unwrap();
            assert!(c < prev, "c_of_tp not decreasing at t = {t}");
            prev = c;
        }
    }

    #[test]
    fn t_p_general_reference_point() {
        // frozen from an independent high-precision evaluation
        let r = t_p_general(4.0 / 3.0, 1.0, 0.99).unwrap();
        assert_eq!(r.phase, Phase::Deflated);
        assert!((r.t_c - 0.2569039174854683).abs() < 1e-9, "t_p = {}", r.t_c);
        // within 5% of the Airy asymptote
        let asym = 0.25 + 0.1604498388079499 * 0.01f64.powf(2.0 / 3.0);
        assert!(((r.t_c - 0.25) / (asym - 0.25) - 1.0).abs() < 0.05);
    }

    #[test]
    fn t_p_general_routing() {
        let inflated = t_p_general(1.0, 1.0, 1.5).unwrap();
        assert_eq!(inflated.phase, Phase::Inflated);
        assert_eq!(inflated.t_c, 0.0);
        assert_eq!(inflated.kind, None);

        // q = 1 window routes to closed forms
        let window = t_p_general(2.0, 1.0, 1.0 - 1e-9).unwrap();
        assert_eq!(window.phase, Phase::Deflated);
        assert!((window.t_c - t_p_q1(2.0, 1.0).unwrap()).abs() < 1e-14);

        // far bound phase: strongly bound walks keep a small positive pole
        let deep = t_p_general(50.0, 1.0, 0.5).unwrap();
        assert!(deep.t_c > 0.0 && deep.t_c < 0.1);
    }

    #[test]
    fn t_p_general_limit_consistency() {
        for (c, s) in [(2.0, 1.0), (1.6, 0.5)] {
            let q1 = t_c_q1(c, s).t_c;
            let near = t_p_general(c, s, 1.0 - 1e-8).unwrap().t_c;
            assert!((near - q1).abs() < 1e-6);
            // a genuinely root-found point converges too
            let found = t_p_general(c, s, 1.0 - 1e-6).unwrap().t_c;
            assert!((found - q1).abs() < 1e-4, "{found} vs {q1}");
            assert!(found > q1);
        }
    }

    #[test]
    fn t_p_general_monotone_in_c_and_q() {
        let t1 = t_p_general(1.0, 1.0, 0.8).unwrap().t_c;
        let t2 = t_p_general(1.5, 1.0, 0.8).unwrap().t_c;
        let t3 = t_p_general(1.0, 1.0, 0.6).unwrap().t_c;
        assert!(t2 < t1, "decreasing in c");
        assert!(t3 > t1, "increasing as q drops");
    }

    #[test]
    fn s_inversion_invariance() {
        for (c, s, q) in [(1.2, 2.0, 0.8), (2.0, 4.0, 0.5), (0.7, 16.0, 0.9)] {
            let a = t_p_general(c, s, q).unwrap().t_c;
            let b = t_p_general(c, 1.0 / s, q).unwrap().t_c;
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        for (c, s) in [(1.1, 2.0), (2.0, 0.25)] {
            assert!((t_c_q1(c, s).t_c - t_c_q1(c, 1.0 / s).t_c).abs() < 1e-15);
        }
    }

    #[test]
    fn contact_density_q1() {
        assert_eq!(density_contacts_q1(1.0, 1.0), 0.0);
        assert!((density_contacts_q1(2.0, 1.0) - SQRT2 / 2.0).abs() < 1e-15);
        // linear onset with slope 27/8 at s = 1
        let d = 1e-7;
        let slope = density_contacts_q1(4.0 / 3.0 + d, 1.0) / d;
        assert!((slope - 3.375).abs() < 1e-4, "slope {slope}");
    }

    #[test]
    fn area_density_q1() {
        assert!((density_area_q1_s1(2.0).unwrap() - (2.0 + SQRT2) / 2.0).abs() < 1e-15);
        assert!(matches!(
            density_area_q1_s1(4.0 / 3.0),
            Err(Error::UndefinedDensity { .. })
        ));
        // divergence amplitude 4/9 at the transition
        let d = 1e-8;
        let a = density_area_q1_s1(4.0 / 3.0 + d).unwrap();
        assert!((a * d - 4.0 / 9.0).abs() < 1e-6, "a*d = {}", a * d);
        // bounded limit at strong binding
        assert!((density_area_q1_s1(1e8).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn densities_general_q1_branches() {
        let unbound = densities_general(1.0, 1.0, 1.0).unwrap();
        assert_eq!(unbound.contacts, 0.0);
        assert_eq!(unbound.area, None);

        let bound = densities_general(2.0, 1.0, 1.0).unwrap();
        assert!((bound.contacts - SQRT2 / 2.0).abs() < 1e-15);
        assert!((bound.area.unwrap() - (2.0 + SQRT2) / 2.0).abs() < 1e-15);

        let inflated = densities_general(1.0, 1.0, 1.2).unwrap();
        assert_eq!(inflated.contacts, 0.0);
        assert_eq!(inflated.area, None);
    }

    #[test]
    fn densities_fd_match_closed_forms() {
        let fd = densities_fd(2.0, 1.0, 1.0).unwrap();
        assert!(
            (fd.contacts - SQRT2 / 2.0).abs() < 1e-6,
            "M_fd = {}",
            fd.contacts
        );
        assert!(
            (fd.area.unwrap() - (2.0 + SQRT2) / 2.0).abs() < 1e-6,
            "A_fd = {:?}",
            fd.area
        );
    }

    #[test]
    fn densities_near_crossover() {
        // A(4/3,1,1-eps) ~ 0.42787 eps^{-1/3}, M ~ 1.16859 eps^{1/3}
        let eps = 1e-3;
        let d = densities_general(4.0 / 3.0, 1.0, 1.0 - eps).unwrap();
        let a_pred = 0.4278662368211998 * eps.powf(-1.0 / 3.0);
        let m_pred = 1.1685895192729217 * eps.powf(1.0 / 3.0);
        assert!((d.area.unwrap() / a_pred - 1.0).abs() < 0.05, "{d:?}");
        assert!((d.contacts / m_pred - 1.0).abs() < 0.05, "{d:?}");
    }

    #[test]
    fn airy_asymptote_at_scaling_variable_zero() {
        let eps = 1e-4;
        let v = s_airy_asymptotic(0.25, eps).unwrap();
        let expect = 0.25
            + 4f64.powf(-2.0 / 3.0) * eps.powf(1.0 / 3.0) * (-0.2588194037928068)
                / 0.3550280538878172;
        assert!((v - expect).abs() < 1e-14);
    }

    #[test]
    fn airy_asymptote_converges_to_s() {
        // fixed scaling variable z = 4^{1/3}(1-4t) eps^{-2/3} = 1
        use crate::qseries::{s_eval, TruncationPolicy, XYPoint};
        let z = 1.0f64;
        let mut prev_err = f64::INFINITY;
        for eps in [1e-3f64, 1e-4] {
            let t = 0.25 * (1.0 - z * eps.powf(2.0 / 3.0) / 4f64.powf(1.0 / 3.0));
            let asym = s_airy_asymptotic(t, eps).unwrap();
            let exact = s_eval(
                &XYPoint::new(t, t, 1.0 - eps),
                &TruncationPolicy::default(),
            )
            .unwrap();
            let err = ((asym - exact) / exact).abs();
            assert!(err < prev_err, "deviation must shrink: {err} vs {prev_err}");
            prev_err = err;
        }
    }

    #[test]
    fn airy_asymptote_pole_guard() {
        // far negative z crosses the first zero of Ai
        let eps = 1e-3f64;
        // z = -3 => Ai(z) < 0 region (first zero at -2.338)
        let t = 0.25 * (1.0 + 3.0 * eps.powf(2.0 / 3.0) / 4f64.powf(1.0 / 3.0));
        assert!(matches!(
            s_airy_asymptotic(t, eps),
            Err(Error::AiryPole { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let inflated = classify(1.0, 1.0, 1.1).unwrap();
        assert_eq!(inflated.phase, Phase::Inflated);
        assert_eq!(inflated.t_c, 0.0);

        let unbound = classify(1.0, 1.0, 1.0).unwrap();
        assert_eq!(unbound.phase, Phase::Unbound);
        assert!((unbound.t_c - 0.25).abs() < 1e-15);

        let deflated = classify(1.0, 1.0, 0.9).unwrap();
        assert_eq!(deflated.phase, Phase::Deflated);
        assert!(deflated.t_c > 0.25);

        assert!(classify(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn epsilon_validation() {
        assert!(scaling_tp_at_cs(&[1e-3, 1e-4]).is_err());
        assert!(scaling_tp_at_cs(&[0.5, 0.1, 0.01, 0.001, 0.0001]).is_err());
    }
}
