//! Airy function Ai and its derivative on |z| <= 12.
//!
//! Maclaurin construction: the Taylor coefficients of any solution of
//! w'' = z w obey a_{n+3} = a_n / ((n+3)(n+2)); Ai is picked out by the
//! reference constants Ai(0) = 3^{-2/3}/Gamma(2/3) and
//! Ai'(0) = -3^{-1/3}/Gamma(1/3). The sum cancels heavily away from the
//! origin (worst on the exponentially small z > 0 side), so terms are
//! carried in double-double precision, which holds 12 digits up to z = 8.
//! Past that the scaled asymptotic series takes over; its optimally
//! truncated error is below 1e-13 relative there. The scaling windows this
//! crate needs map to |z| <~ 3, where the Maclaurin sum is essentially
//! exact.

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Domain bound of the evaluation.
pub const AIRY_MAX_ABS_Z: f64 = 12.0;

/// Right edge of the Maclaurin route; beyond it cancellation would eat
/// through even double-double precision.
const MACLAURIN_MAX_Z: f64 = 8.0;

/// First zero of Ai'(z).
pub const AIRY_AI_PRIME_FIRST_ZERO: f64 = -1.018792971647471;

/// First zero of Ai(z).
pub const AIRY_AI_FIRST_ZERO: f64 = -2.338107410459767;

// Ai(0) and Ai'(0) in double-double precision.
const AI0: (f64, f64) = (0.3550280538878172, 2.05233632436212e-17);
const AIP0: (f64, f64) = (-0.2588194037928068, 2.522243111610832e-17);

/// Ai and Ai' at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub z: f64,
    pub ai: f64,
    pub ai_prime: f64,
}

/// Evaluate Ai(z) and Ai'(z).
pub fn airy(z: f64) -> Result<AiryValue> {
    if !z.is_finite() || z.abs() > AIRY_MAX_ABS_Z {
        return Err(Error::AiryDomain {
            z,
            max: AIRY_MAX_ABS_Z,
        });
    }
    if z == 0.0 {
        return Ok(AiryValue {
            z,
            ai: AI0.0 + AI0.1,
            ai_prime: AIP0.0 + AIP0.1,
        });
    }
    if z > MACLAURIN_MAX_Z {
        return Ok(airy_asymptotic_positive(z));
    }

    let zd = Dd::from_f64(z);
    let z3 = zd.mul(zd).mul(zd);

    // Terms t_n = a_n z^n for the two strands n = 3k and n = 3k+1
    // (the n = 3k+2 strand vanishes: a_2 = 0).
    let mut t0 = Dd::from_parts(AI0.0, AI0.1); // n = 0
    let mut t1 = Dd::from_parts(AIP0.0, AIP0.1).mul(zd); // n = 1
    let mut n0 = 0u32;
    let mut n1 = 1u32;

    let mut sum = t0.add(t1); // Ai
    let mut dsum = t1; // z * Ai' accumulates n * t_n
    let mut small_streak = 0;

    for _ in 0..400 {
        t0 = t0.mul(z3).div_f64(((n0 + 3) * (n0 + 2)) as f64);
        t1 = t1.mul(z3).div_f64(((n1 + 3) * (n1 + 2)) as f64);
        n0 += 3;
        n1 += 3;
        sum = sum.add(t0).add(t1);
        dsum = dsum.add(t0.mul_f64(n0 as f64)).add(t1.mul_f64(n1 as f64));

        if t0.abs_hi().max(t1.abs_hi()) < 1e-40 {
            small_streak += 1;
            if small_streak >= 2 {
                break;
            }
        } else {
            small_streak = 0;
        }
    }

    Ok(AiryValue {
        z,
        ai: sum.to_f64(),
        ai_prime: dsum.div_f64(z).to_f64(),
    })
}

/// Scaled asymptotic expansion for large positive z:
/// Ai ~ e^{-zeta}/(2 sqrt(pi) z^{1/4}) sum (-1)^k u_k zeta^{-k},
/// Ai' ~ -z^{1/4} e^{-zeta}/(2 sqrt(pi)) sum (-1)^k v_k zeta^{-k},
/// zeta = (2/3) z^{3/2}, v_k = (6k+1)/(1-6k) u_k. Truncated at the smallest
/// term; at z >= 8 that sits below 1e-13 relative.
fn airy_asymptotic_positive(z: f64) -> AiryValue {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let mut u_term = 1.0f64;
    let mut sum_u = 1.0f64;
    let mut sum_v = 1.0f64;
    let mut prev_abs = f64::INFINITY;
    for k in 1u32..40 {
        let kf = k as f64;
        let ratio = (6.0 * kf - 1.0) * (6.0 * kf - 3.0) * (6.0 * kf - 5.0)
            / (216.0 * kf * (2.0 * kf - 1.0));
        u_term *= -ratio / zeta;
        if u_term.abs() >= prev_abs {
            break; // asymptotic series started diverging
        }
        prev_abs = u_term.abs();
        sum_u += u_term;
        sum_v += u_term * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf);
        if u_term.abs() < 1e-17 {
            break;
        }
    }
    let prefactor = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let z4 = z.powf(0.25);
    AiryValue {
        z,
        ai: prefactor / z4 * sum_u,
        ai_prime: -prefactor * z4 * sum_v,
    }
}

/// Locate the first zero of Ai'(z) by bisection; the seed bracket comes from
/// the sign change of Ai' between -1.5 and -0.5.
pub fn find_ai_prime_first_zero() -> Result<f64> {
    let (mut lo, mut hi) = (-1.5f64, -0.5f64);
    let f = |z: f64| airy(z).map(|v| v.ai_prime);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    debug_assert!(flo > 0.0 && fhi < 0.0);
    let _ = (flo, fhi);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values (15+ significant digits), straddling both routes.
    const REF: &[(f64, f64, f64)] = &[
        (2.0, 0.03492413042327438, -0.05309038443365363),
        (-1.0, 0.5355608832923521, -0.010160567116645205),
        (-5.0, 0.35076100902411433, 0.32719281855444315),
        (-12.0, -0.06655517505437313, 1.0231104533679707),
        (7.5, 1.9172560675134309e-7, -5.312713959720545e-7),
        (8.5, 1.0997009755195506e-8, -3.237725440447602e-8),
        (10.0, 1.1047532552898686e-10, -3.5206336767389237e-10),
        (12.0, 1.3931846888753607e-13, -4.854736554985309e-13),
    ];

    #[test]
    fn reference_constants_at_zero() {
        let v = airy(0.0).unwrap();
        assert!((v.ai - 0.3550280538878172).abs() < 1e-12 * v.ai.abs());
        assert!((v.ai_prime + 0.2588194037928068).abs() < 1e-12 * v.ai_prime.abs());
    }

    #[test]
    fn twelve_digits_across_the_domain() {
        for &(z, ai, aip) in REF {
            let v = airy(z).unwrap();
            assert!(
                (v.ai - ai).abs() <= 1e-12 * ai.abs(),
                "Ai({z}): got {}, want {ai}",
                v.ai
            );
            assert!(
                (v.ai_prime - aip).abs() <= 1e-12 * aip.abs(),
                "Ai'({z}): got {}, want {aip}",
                v.ai_prime
            );
        }
    }

    #[test]
    fn domain_limit_is_enforced() {
        assert!(matches!(airy(12.5), Err(Error::AiryDomain { .. })));
        assert!(matches!(airy(-100.0), Err(Error::AiryDomain { .. })));
        assert!(airy(f64::NAN).is_err());
    }

    #[test]
    fn first_zero_of_ai_prime() {
        let z = find_ai_prime_first_zero().unwrap();
        assert!((z - AIRY_AI_PRIME_FIRST_ZERO).abs() < 1e-13);
        assert!(airy(z).unwrap().ai_prime.abs() < 1e-13);
        // Ai has a positive local max there
        assert!((airy(z).unwrap().ai - 0.5356566560156999).abs() < 1e-12);
    }

    #[test]
    fn ai_positive_right_of_its_first_zero() {
        let mut z = AIRY_AI_FIRST_ZERO + 1e-6;
        while z <= 12.0 {
            assert!(airy(z).unwrap().ai > 0.0, "Ai({z}) <= 0");
            z += 0.37;
        }
    }
}
