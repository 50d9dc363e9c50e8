//! Generating functions of the model.
//!
//! Numeric evaluation of the q-Bessel-type series H, the staircase-polygon
//! function S, the vesicle function F (necklace form, q = 1 closed form, and
//! continued fraction) and G = F after the (x, y) substitution, plus the
//! exact expansion of G in powers of the length fugacity t.
//!
//! Evaluation routes:
//! * q = 1 (to within 1e-8): closed forms from the quadratic for S.
//! * q < 1: H-series term recurrences; when the alternating sum sheds too
//!   many digits (q near 1), the backward continued-fraction recurrence takes
//!   over. Both routes agree to 1e-12 on their overlap, which is under test.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::LaurentPoly3;

/// Closed forms take over inside this distance from q = 1.
pub const Q_ONE_WINDOW: f64 = 1e-8;

/// Digits of cancellation in the H sum beyond which the series route is refused.
const H_CANCELLATION_RATIO: f64 = 1e10;

/// A parameter point (c, s, q) with an optional length fugacity t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub c: f64,
    pub s: f64,
    pub q: f64,
    pub t: Option<f64>,
}

impl ModelPoint {
    pub fn new(c: f64, s: f64, q: f64) -> Self {
        ModelPoint { c, s, q, t: None }
    }

    pub fn with_t(c: f64, s: f64, q: f64, t: f64) -> Self {
        ModelPoint {
            c,
            s,
            q,
            t: Some(t),
        }
    }

    pub fn require_positive(&self) -> Result<()> {
        for (name, v) in [("c", self.c), ("s", self.s), ("q", self.q)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "fugacity {name} = {v} must be positive and finite"
                )));
            }
        }
        if let Some(t) = self.t {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(Error::Domain(format!("t = {t} must be >= 0 and finite")));
            }
        }
        Ok(())
    }
}

/// The natural variables of F: x = t/s, y = t s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XYPoint {
    pub x: f64,
    pub y: f64,
    pub q: f64,
}

impl XYPoint {
    pub fn new(x: f64, y: f64, q: f64) -> Self {
        XYPoint { x, y, q }
    }

    /// Substitute x = t/s, y = t s; requires t on the point.
    pub fn from_model(point: &ModelPoint) -> Result<Self> {
        point.require_positive()?;
        let t = point
            .t
            .ok_or_else(|| Error::Domain("this operation needs a t value".into()))?;
        Ok(XYPoint {
            x: t / point.s,
            y: t * point.s,
            q: point.q,
        })
    }
}

/// Series truncation control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Stop once two consecutive terms are below this magnitude.
    pub abs_tol: f64,
    /// Give up (as divergence) past this many terms.
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            abs_tol: 1e-16,
            max_terms: 10_000,
        }
    }
}

/// (t; q)_n = prod_{k=0}^{n-1} (1 - t q^k); empty product = 1.
pub fn q_pochhammer(t: f64, q: f64, n: usize) -> f64 {
    let mut prod = 1.0;
    let mut qk = 1.0;
    for _ in 0..n {
        prod *= 1.0 - t * qk;
        qk *= q;
    }
    prod
}

struct HSum {
    value: f64,
    max_term: f64,
}

/// H(x,y,q) = sum_n (-qx)^n q^C(n,2) / ((q;q)_n (qy;q)_n), with the running
/// term built from its predecessor by one multiply/divide.
fn h_sum(x: f64, y: f64, q: f64, policy: &TruncationPolicy) -> Result<HSum> {
    if q >= 1.0 {
        return Err(Error::Domain(format!(
            "H-series needs q < 1 (got q = {q}); use the q = 1 closed form or \
             the continued fraction instead"
        )));
    }
    if !(q > 0.0) {
        return Err(Error::Domain(format!("q = {q} must be positive")));
    }

    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut max_term = 1.0f64;
    let mut qn = 1.0; // q^n
    let mut qn1 = q; // q^{n+1}
    let mut small_streak = 0;

    for n in 0..policy.max_terms {
        let denom_q = 1.0 - qn1;
        let denom_y = 1.0 - y * qn1;
        if denom_y.abs() < 1e-14 {
            return Err(Error::SingularDenominator { index: n + 1 });
        }
        term *= (-q * x) * qn / (denom_q * denom_y);
        sum += term;
        max_term = max_term.max(term.abs());
        qn = qn1;
        qn1 *= q;

        if term.abs() < policy.abs_tol {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(HSum {
                    value: sum,
                    max_term,
                });
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::NotConverged {
        max_terms: policy.max_terms,
    })
}

/// The q-Bessel-type series H(x,y,q).
pub fn h_series(xy: &XYPoint, policy: &TruncationPolicy) -> Result<f64> {
    let h = h_sum(xy.x, xy.y, xy.q, policy)?;
    if h.max_term > H_CANCELLATION_RATIO * h.value.abs().max(1e-300) && h.max_term > 1e6 {
        return Err(Error::CancellationLoss {
            lost_digits: (h.max_term / h.value.abs().max(1e-300)).log10() as i32,
        });
    }
    Ok(h.value)
}

/// Staircase-polygon generating function from the H ratio:
/// S(x,y,q) = y [H(qx,y,q)/H(x,y,q) - 1].
pub fn s_explicit(xy: &XYPoint, policy: &TruncationPolicy) -> Result<f64> {
    let h_num = h_sum(xy.q * xy.x, xy.y, xy.q, policy)?;
    let h_den = h_sum(xy.x, xy.y, xy.q, policy)?;
    let worst = h_num.max_term.max(h_den.max_term);
    if worst > H_CANCELLATION_RATIO * h_den.value.abs().max(1e-300) && worst > 1e6 {
        return Err(Error::CancellationLoss {
            lost_digits: (worst / h_den.value.abs().max(1e-300)).log10() as i32,
        });
    }
    if h_den.value.abs() < 1e-10 * h_den.max_term.max(1.0) {
        return Err(Error::NearSingularity {
            h_value: h_den.value,
        });
    }
    Ok(xy.y * (h_num.value / h_den.value - 1.0))
}

/// S(x,y,1) from the quadratic the functional equation reduces to at q = 1,
/// on the branch with S(0,0,1) = 0.
pub fn s_q1(x: f64, y: f64) -> Result<f64> {
    let radicand = (1.0 - x - y) * (1.0 - x - y) - 4.0 * x * y;
    if radicand < 0.0 {
        return Err(Error::BranchCut { radicand });
    }
    Ok(0.5 * (1.0 - x - y - radicand.sqrt()))
}

/// Backward evaluation of the staircase tail y + S(x,y,q) at a fixed depth,
/// tail seeded with 0.
pub(crate) fn cfrac_tail(x: f64, y: f64, q: f64, depth: usize) -> Result<f64> {
    let mut tail = 0.0f64;
    let mut level = depth;
    let mut qk = q.powi(depth as i32);
    let mut since_resync = 0usize;
    while level >= 1 {
        let denom = 1.0 + y - qk * x - tail;
        if denom.abs() < 1e-250 {
            return Err(Error::SingularConvergent { level });
        }
        tail = y / denom;
        level -= 1;
        // keep q^k exact enough over very deep recursions
        since_resync += 1;
        if since_resync == 512 {
            qk = q.powi(level as i32);
            since_resync = 0;
        } else {
            qk /= q;
        }
    }
    Ok(tail)
}

/// Depth-doubling driver: converged when two successive depths agree to `tol`.
pub(crate) fn converge_depth<F>(mut eval: F, tol: f64) -> Result<f64>
where
    F: FnMut(usize) -> Result<f64>,
{
    const MAX_DEPTH: usize = 1 << 23;
    let mut depth = 64usize;
    let mut prev = eval(depth)?;
    while depth < MAX_DEPTH {
        depth *= 2;
        let cur = eval(depth)?;
        if (cur - prev).abs() <= tol * (1.0 + cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NotConverged {
        max_terms: MAX_DEPTH,
    })
}

/// S with automatic route selection: closed form at q = 1, H ratio for q < 1,
/// continued fraction when the H sum loses too many digits near q = 1.
pub fn s_eval(xy: &XYPoint, policy: &TruncationPolicy) -> Result<f64> {
    if xy.q > 1.0 + Q_ONE_WINDOW {
        return Err(Error::Domain(format!(
            "S diverges for q = {} > 1 at positive x, y",
            xy.q
        )));
    }
    if (xy.q - 1.0).abs() <= Q_ONE_WINDOW {
        return s_q1(xy.x, xy.y);
    }
    match s_explicit(xy, policy) {
        Err(Error::CancellationLoss { .. }) | Err(Error::NotConverged { .. }) => {
            let (x, y, q) = (xy.x, xy.y, xy.q);
            let tail = converge_depth(|d| cfrac_tail(x, y, q, d), 1e-14)?;
            Ok(tail - y)
        }
        other => other,
    }
}

/// |S(x,y,q) - [qx + S(qx,y,q)][y + S(x,y,q)]|.
pub fn functional_equation_residual(xy: &XYPoint, policy: &TruncationPolicy) -> Result<f64> {
    let s = s_explicit(xy, policy)?;
    let s_shift = s_explicit(&XYPoint::new(xy.q * xy.x, xy.y, xy.q), policy)?;
    Ok((s - (xy.q * xy.x + s_shift) * (xy.y + s)).abs())
}

/// Necklace form F = 1/(1 - c[x + y + S]).
pub fn f_necklace(c: f64, xy: &XYPoint, policy: &TruncationPolicy) -> Result<f64> {
    let s = s_eval(xy, policy)?;
    let denominator = 1.0 - c * (xy.x + xy.y + s);
    if denominator <= 0.0 {
        return Err(Error::BeyondPole { denominator });
    }
    Ok(1.0 / denominator)
}

/// q = 1 closed form F(c,x,y,1) = 1/(1 - c/2 [x + y + 1 - sqrt(...)]).
pub fn f_closed_q1(c: f64, x: f64, y: f64) -> Result<f64> {
    let radicand = x * x - 2.0 * x * y + y * y - 2.0 * x - 2.0 * y + 1.0;
    if radicand < 0.0 {
        return Err(Error::BranchCut { radicand });
    }
    let denominator = 1.0 - 0.5 * c * (x + y + 1.0 - radicand.sqrt());
    if denominator <= 0.0 {
        return Err(Error::BeyondPole { denominator });
    }
    Ok(1.0 / denominator)
}

/// Continued-fraction form at a fixed truncation depth, evaluated bottom-up
/// with the tail initialized to 0.
pub fn f_cfrac(c: f64, xy: &XYPoint, depth: usize) -> Result<f64> {
    if depth == 0 {
        return Err(Error::Domain("continued-fraction depth must be >= 1".into()));
    }
    let tail = cfrac_tail(xy.x, xy.y, xy.q, depth)?;
    let denominator = 1.0 - c * xy.x - c * tail;
    if denominator <= 1e-250 {
        return Err(Error::SingularConvergent { level: 0 });
    }
    Ok(1.0 / denominator)
}

/// Continued-fraction form with depth doubled until successive values agree
/// to 1e-14.
pub fn f_cfrac_auto(c: f64, xy: &XYPoint) -> Result<f64> {
    converge_depth(|d| f_cfrac(c, xy, d), 1e-14)
}

/// G(c,s,q,t) = F(c, t/s, ts, q), routed by q.
pub fn g_eval(point: &ModelPoint, policy: &TruncationPolicy) -> Result<f64> {
    let xy = XYPoint::from_model(point)?;
    if point.q > 1.0 + Q_ONE_WINDOW {
        return Err(Error::Domain(format!(
            "q = {} > 1: the generating function has zero radius of convergence",
            point.q
        )));
    }
    if point.q >= 1.0 - Q_ONE_WINDOW {
        if (point.q - 1.0).abs() < f64::EPSILON {
            return f_closed_q1(point.c, xy.x, xy.y);
        }
        // warning zone just below q = 1: the continued fraction is the
        // stable route
        return f_cfrac_auto(point.c, &xy);
    }
    match f_necklace(point.c, &xy, policy) {
        Err(Error::CancellationLoss { .. }) | Err(Error::NotConverged { .. }) => {
            f_cfrac_auto(point.c, &xy)
        }
        other => other,
    }
}

// ---------------------------------------------------------------------------
// Exact series expansion in t
// ---------------------------------------------------------------------------

/// Exact coefficients Z_n(c,s,q) of G as a power series in t.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesInT {
    pub coefficients: Vec<LaurentPoly3>,
}

impl SeriesInT {
    pub fn order(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coefficients.iter().map(|p| p.to_json()).collect())
    }
}

pub const MAX_SERIES_ORDER: usize = 24;

/// Polynomial in (c, x, y, q) truncated by total degree in (x, y);
/// key = [c exp, x exp, y exp, q exp], big-integer coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
struct GradedPoly {
    terms: BTreeMap<[u16; 4], BigInt>,
}

impl GradedPoly {
    fn zero() -> Self {
        Self::default()
    }

    fn one() -> Self {
        let mut p = Self::default();
        p.terms.insert([0, 0, 0, 0], BigInt::from(1));
        p
    }

    fn monomial(key: [u16; 4]) -> Self {
        let mut p = Self::default();
        p.terms.insert(key, BigInt::from(1));
        p
    }

    fn add_term(&mut self, key: [u16; 4], coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add(&self, other: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v);
        }
        out
    }

    /// Product truncated to total (x, y) degree <= max_deg.
    fn mul_trunc(&self, other: &GradedPoly, max_deg: u16) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (ka, va) in &self.terms {
            if ka[1] + ka[2] > max_deg {
                continue;
            }
            for (kb, vb) in &other.terms {
                let dx = ka[1] + kb[1];
                let dy = ka[2] + kb[2];
                if dx + dy > max_deg {
                    continue;
                }
                let key = [ka[0] + kb[0], dx, dy, ka[3] + kb[3]];
                let prod = va * vb;
                out.add_term(key, &prod);
            }
        }
        out
    }

    /// Substitute x -> qx: every monomial picks up q^(x exponent).
    fn shift_x_by_q(&self) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (k, v) in &self.terms {
            out.add_term([k[0], k[1], k[2], k[3] + k[1]], v);
        }
        out
    }

    /// Multiply by c.
    fn times_c(&self) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (k, v) in &self.terms {
            out.add_term([k[0] + 1, k[1], k[2], k[3]], v);
        }
        out
    }
}

/// The staircase generating function S as an exact polynomial, truncated to
/// total (x,y) degree <= order, by iterating the functional equation
/// S <- [qx + S(qx,y,q)] [y + S(x,y,q)] to its (finite) fixpoint.
fn staircase_series(order: u16) -> GradedPoly {
    let qx = GradedPoly::monomial([0, 1, 0, 1]);
    let y = GradedPoly::monomial([0, 0, 1, 0]);
    let mut s = GradedPoly::zero();
    loop {
        let left = qx.add(&s.shift_x_by_q());
        let right = y.add(&s);
        let next = left.mul_trunc(&right, order);
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Exact expansion G = sum_n t^n Z_n(c,s,q) up to the given order, via the
/// necklace formula applied to the truncated staircase series.
pub fn series_in_t(order: usize) -> Result<SeriesInT> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::OutOfBounds {
            what: "series order",
            value: order as i64,
            max: MAX_SERIES_ORDER as i64,
        });
    }
    let deg = order as u16;
    let s = staircase_series(deg);
    let x = GradedPoly::monomial([0, 1, 0, 0]);
    let y = GradedPoly::monomial([0, 0, 1, 0]);
    // w = c (x + y + S); F = 1/(1 - w) = fixpoint of F <- 1 + w F
    let w = x.add(&y).add(&s).times_c();
    let one = GradedPoly::one();
    let mut f = one.clone();
    loop {
        let next = one.add(&w.mul_trunc(&f, deg));
        if next == f {
            break;
        }
        f = next;
    }

    // Z_n collects monomials with x^i y^j, i + j = n, as c^m s^(j-i) q^a.
    let mut coefficients = vec![LaurentPoly3::new(); order + 1];
    for (k, v) in &f.terms {
        let (m, i, j, a) = (k[0], k[1], k[2], k[3]);
        let n = (i + j) as usize;
        if n <= order {
            coefficients[n].add_term((m as u32, j as i32 - i as i32, a as u32), v.clone());
        }
    }
    Ok(SeriesInT { coefficients })
}
