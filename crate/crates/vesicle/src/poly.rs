//! Exact partition-function polynomials.
//!
//! `LaurentPoly3` carries Z_n(c,s,q): polynomial in the contact fugacity c
//! and the area fugacity q, Laurent in the pull fugacity s, with big-integer
//! coefficients (every coefficient is a count of configurations).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Monomial key: (exponent of c, exponent of s, exponent of q).
/// Only the s exponent may be negative.
pub type Exponents = (u32, i32, u32);

/// Exact polynomial in c, q and Laurent polynomial in s.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly3 {
    terms: BTreeMap<Exponents, BigInt>,
}

/// One serialized monomial of the canonical JSON form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTerm {
    pub c: u32,
    pub s: i32,
    pub q: u32,
    /// Decimal string; coefficients can exceed u64.
    pub coeff: String,
}

impl LaurentPoly3 {
    pub fn new() -> Self {
        Self::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        let mut p = Self::new();
        p.add_term((0, 0, 0), BigInt::from(1));
        p
    }

    /// Add `coeff` to the monomial c^{ec} s^{es} q^{eq}; drops zero entries.
    pub fn add_term(&mut self, key: Exponents, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Increment the count of one configuration with the given statistics.
    pub fn tally(&mut self, contacts: u32, displacement: i32, area: u32) {
        self.add_term((contacts, displacement, area), BigInt::from(1));
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: Exponents) -> BigInt {
        self.terms.get(&key).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Iterate terms in canonical (c, s, q) order.
    pub fn iter(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    /// Sum of all coefficients = value at c = s = q = 1 = number of configurations.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// All coefficients strictly positive (they are configuration counts).
    pub fn all_positive(&self) -> bool {
        self.terms.values().all(|v| v.is_positive())
    }

    /// Total coefficient of c^{ec} q^{eq} summed over all s exponents.
    pub fn coeff_cq_marginal(&self, ec: u32, eq: u32) -> BigInt {
        self.terms
            .iter()
            .filter(|((c, _, q), _)| *c == ec && *q == eq)
            .map(|(_, v)| v)
            .sum()
    }

    /// The polynomial with s replaced by 1/s.
    pub fn invert_s(&self) -> Self {
        let mut out = Self::new();
        for (&(c, s, q), coeff) in &self.terms {
            out.add_term((c, -s, q), coeff.clone());
        }
        out
    }

    /// Numeric evaluation. Coefficients are converted through f64; exact for
    /// the coefficient sizes that occur at n <= 16.
    pub fn eval_f64(&self, c: f64, s: f64, q: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(ec, es, eq), coeff)| {
                coeff.to_f64().unwrap_or(f64::INFINITY)
                    * c.powi(ec as i32)
                    * s.powi(es)
                    * q.powi(eq as i32)
            })
            .sum()
    }

    /// Canonical JSON form: list of {c,s,q,coeff} sorted lexicographically
    /// by (c, s, q), coefficients as decimal strings.
    pub fn to_terms(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .map(|(&(c, s, q), coeff)| PolyTerm {
                c,
                s,
                q,
                coeff: coeff.to_string(),
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_terms()).expect("poly serialization cannot fail")
    }

    pub fn from_terms(terms: &[PolyTerm]) -> Option<Self> {
        let mut p = Self::new();
        for t in terms {
            p.add_term((t.c, t.s, t.q), t.coeff.parse().ok()?);
        }
        Some(p)
    }
}

impl fmt::Display for LaurentPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(c, s, q), coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", coeff)?;
            if c != 0 {
                write!(f, "*c^{}", c)?;
            }
            if s != 0 {
                write!(f, "*s^{}", s)?;
            }
            if q != 0 {
                write!(f, "*q^{}", q)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_and_coeff() {
        let mut p = LaurentPoly3::new();
        p.tally(2, -2, 0);
        p.tally(2, -2, 0);
        p.tally(1, 0, 1);
        assert_eq!(p.coeff((2, -2, 0)), BigInt::from(2));
        assert_eq!(p.coeff((1, 0, 1)), BigInt::from(1));
        assert_eq!(p.coefficient_sum(), BigInt::from(3));
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut p = LaurentPoly3::new();
        p.add_term((1, 1, 1), BigInt::from(5));
        p.add_term((1, 1, 1), BigInt::from(-5));
        assert!(p.is_zero());
    }

    #[test]
    fn json_is_sorted_and_round_trips() {
        let mut p = LaurentPoly3::new();
        p.tally(2, 2, 0);
        p.tally(1, 0, 1);
        p.tally(2, -2, 0);
        let terms = p.to_terms();
        let keys: Vec<_> = terms.iter().map(|t| (t.c, t.s, t.q)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(LaurentPoly3::from_terms(&terms).unwrap(), p);
    }

    #[test]
    fn eval_matches_hand_value() {
        // c^2(s^-2 + 2 + s^2) + c q at c=2, s=2, q=0.5
        let mut p = LaurentPoly3::new();
        p.add_term((2, -2, 0), BigInt::from(1));
        p.add_term((2, 0, 0), BigInt::from(2));
        p.add_term((2, 2, 0), BigInt::from(1));
        p.add_term((1, 0, 1), BigInt::from(1));
        let v = p.eval_f64(2.0, 2.0, 0.5);
        assert!((v - (4.0 * (0.25 + 2.0 + 4.0) + 2.0 * 0.5)).abs() < 1e-12);
    }
}
