//! Minimal double-double arithmetic (~31 significant digits).
//!
//! Used where a single f64 cannot absorb the cancellation of an alternating
//! Maclaurin sum, mainly the Airy series at the far end of its domain.
//! Only the operations that series evaluation needs are implemented.

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Construct from a >32-digit decimal split into two f64 parts.
    #[inline]
    pub fn from_parts(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        let e = e + self.lo * x;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, x: f64) -> Dd {
        let q0 = self.hi / x;
        let (p, e) = two_prod(q0, x);
        let r = (self.hi - p) - e + self.lo;
        let q1 = r / x;
        let (hi, lo) = quick_two_sum(q0, q1);
        Dd { hi, lo }
    }

    #[inline]
    pub fn abs_hi(self) -> f64 {
        self.hi.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_keeps_low_bits() {
        let a = Dd::from_f64(1.0);
        let tiny = Dd::from_f64(1e-25);
        let s = a.add(tiny);
        assert_eq!(s.hi, 1.0);
        assert_eq!(s.lo, 1e-25);
    }

    #[test]
    fn mul_is_exact_for_representable_products() {
        let a = Dd::from_f64(3.0);
        let b = Dd::from_f64(1.0 / 3.0);
        let p = a.mul(b);
        // 3 * fl(1/3) differs from 1 by ~1e-17; dd captures it in lo
        assert!((p.to_f64() - 1.0).abs() < 1e-16);
        assert!(p.lo != 0.0 || p.hi == 1.0);
    }

    #[test]
    fn div_round_trips() {
        let a = Dd::from_f64(1.0).div_f64(7.0);
        let b = a.mul_f64(7.0);
        assert!((b.to_f64() - 1.0).abs() < 1e-30);
    }
}
