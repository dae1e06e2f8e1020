//! Closed-form rainbow numbers.
//!
//! Each function checks the hypotheses of the result it evaluates and returns
//! [`Error::NotCovered`] outside them; nothing here falls back to search.

use std::fmt;

use crate::coloring::Coloring;
use crate::constructions::{product_coloring, singleton_zero_coloring, symmetric_interval_coloring, two_power_coloring};
use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::modring::{factorize, is_unit, Modulus};

/// Where a rainbow number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    ConventionZ2,
    PropZ3,
    ThmZpDichotomy,
    ThmEqualCoefficients,
    ThmTwoPower,
    ThmZnProduct,
    BruteForce,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ConventionZ2 => "Convention-Z2",
            Provenance::PropZ3 => "Prop-Z3",
            Provenance::ThmZpDichotomy => "Thm-Zp-dichotomy",
            Provenance::ThmEqualCoefficients => "Thm-equal-coefficients",
            Provenance::ThmTwoPower => "Thm-two-power",
            Provenance::ThmZnProduct => "Thm-Zn-product",
            Provenance::BruteForce => "BruteForce",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rainbow number with its source. `witness`, when present, is a rainbow-free exact
/// `(value - 1)`-coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbResult {
    pub value: u64,
    pub provenance: Provenance,
    pub witness: Option<Coloring>,
}

impl RbResult {
    fn new(eq: &Equation, value: u64, provenance: Provenance, witness: Option<Coloring>) -> Result<Self> {
        let n = eq.modulus().get();
        if !(3..=n + 1).contains(&value) {
            return Err(Error::Inconsistency(format!("rainbow number {value} outside [3, {}]", n + 1)));
        }
        if let Some(w) = &witness {
            if w.num_colors() as u64 != value - 1 || !w.find_rainbow(eq)?.is_rainbow_free() {
                return Err(Error::Inconsistency(format!(
                    "witness for {eq} is not a rainbow-free exact {}-coloring",
                    value - 1
                )));
            }
        }
        Ok(RbResult { value, provenance, witness })
    }
}

/// Carry a witness for `eq(.., 0)` over to `eq(.., b)`: `x -> x - b a^{-1}` maps solutions of
/// the latter onto the former, so color `x` as the b = 0 witness colors `x - b a^{-1}`.
fn transport_witness(eq: &Equation, zero_witness: Coloring) -> Result<Coloring> {
    if eq.rhs() == 0 {
        return Ok(zero_witness);
    }
    let (_, offset) = eq.normalize_b_to_zero()?;
    let n = eq.modulus();
    Ok(zero_witness.translate(n.neg(offset)))
}

/// Rainbow numbers over Z_3, every equation.
pub fn rb_z3(eq: &Equation) -> Result<RbResult> {
    if eq.modulus().get() != 3 {
        return Err(Error::NotApplicable(format!("{eq} is not over Z_3")));
    }
    let [a1, a2, a3] = eq.coeffs();
    let some_equal = a1 == a2 || a2 == a3 || a1 == a3;
    let some_distinct = !eq.all_coefficients_equal();
    let b = eq.rhs();
    let value = if (b == 0 && some_equal) || (b != 0 && some_distinct) { 3 } else { 4 };
    let witness = (value == 4).then(|| Coloring::from_colors(eq.modulus(), vec![0, 1, 2])).transpose()?;
    RbResult::new(eq, value, Provenance::PropZ3, witness)
}

/// Rainbow numbers over Z_p, p prime.
pub fn rb_zp(eq: &Equation) -> Result<RbResult> {
    let p = eq.modulus().get();
    if !factorize(eq.modulus()).is_prime() {
        return Err(Error::NotCovered(format!("{p} is not prime")));
    }
    match p {
        2 => {
            let w = Coloring::from_colors(eq.modulus(), vec![0, 1])?;
            RbResult::new(eq, 3, Provenance::ConventionZ2, Some(w))
        }
        3 => rb_z3(eq),
        _ => {
            if !eq.has_unit_coefficients() {
                return Err(Error::NotCovered(format!("{eq}: a coefficient is 0 mod {p}")));
            }
            if eq.all_coefficients_equal() {
                let w = transport_witness(eq, symmetric_interval_coloring(p)?)?;
                return RbResult::new(eq, 4, Provenance::ThmEqualCoefficients, Some(w));
            }
            let value = if eq.cor8_always_rainbow()? { 3 } else { 4 };
            RbResult::new(eq, value, Provenance::ThmZpDichotomy, None)
        }
    }
}

/// Rainbow numbers over Z_{2^alpha} for odd coefficients.
pub fn rb_two_power(eq: &Equation) -> Result<RbResult> {
    let n = eq.modulus().get();
    if !n.is_power_of_two() {
        return Err(Error::NotCovered(format!("{n} is not a power of 2")));
    }
    if eq.coeffs().iter().any(|a| a % 2 == 0) {
        return Err(Error::NotCovered(format!("{eq}: even coefficient")));
    }
    let alpha = n.trailing_zeros();
    let w = transport_witness(eq, two_power_coloring(alpha)?)?;
    RbResult::new(eq, alpha as u64 + 2, Provenance::ThmTwoPower, Some(w))
}

/// Which hypothesis of the product formula admits `eq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductCondition {
    /// `b != 0` and `a1 + a2 + a3` a unit mod n.
    NonzeroRhsUnitSum,
    /// `b = 0` and `3` does not divide `n`.
    ZeroRhsCoprimeToThree,
    /// `b = 0`, `3 | n`, and `a1 + a2 + a3` nonzero mod 3.
    ZeroRhsUnitSumModThree,
}

/// Check the product formula's hypotheses in order: unit coefficients, then the three
/// alternatives. The error names the hypothesis that failed.
pub fn product_condition(eq: &Equation) -> Result<ProductCondition> {
    let n = eq.modulus();
    if !eq.has_unit_coefficients() {
        return Err(Error::NotCovered(format!("{eq}: a1*a2*a3 is not a unit mod {n}")));
    }
    let sum = eq.a_sum();
    if eq.rhs() != 0 {
        if is_unit(sum, n) {
            return Ok(ProductCondition::NonzeroRhsUnitSum);
        }
        return Err(Error::NotCovered(format!(
            "{eq}: condition 1 fails, b != 0 but a1+a2+a3 = {sum} is not a unit mod {n}"
        )));
    }
    if n.get() % 3 != 0 {
        return Ok(ProductCondition::ZeroRhsCoprimeToThree);
    }
    if sum % 3 != 0 {
        return Ok(ProductCondition::ZeroRhsUnitSumModThree);
    }
    Err(Error::NotCovered(format!(
        "{eq}: condition 3 fails, 3 | {n} and a1+a2+a3 = {sum} is divisible by 3"
    )))
}

/// `2 + sum_k alpha_k (rb(Z_{p_k}) - 2)` with the per-prime values taken for the b = 0
/// normalization of `eq` (or `eq` itself when b = 0). No applicability check beyond what
/// the per-prime values need.
pub fn prime_power_sum(eq: &Equation) -> Result<u64> {
    let eq0 = if eq.rhs() == 0 { *eq } else { eq.normalize_b_to_zero()?.0 };
    let mut total = 2;
    for &(p, alpha) in factorize(eq.modulus()).pairs() {
        let per_prime = rb_zp(&eq0.reduce_mod(Modulus::new(p)?)?)?;
        total += alpha as u64 * (per_prime.value - 2);
    }
    Ok(total)
}

/// Rainbow numbers over Z_n via the prime-power product formula.
///
/// Primes go straight to [`rb_zp`] and powers of two to [`rb_two_power`]; every other
/// modulus needs the formula's hypotheses (see [`product_condition`]).
pub fn rb_zn(eq: &Equation) -> Result<RbResult> {
    let n = eq.modulus();
    let f = factorize(n);
    if f.is_prime() {
        return rb_zp(eq);
    }
    if n.get().is_power_of_two() {
        return rb_two_power(eq);
    }
    product_condition(eq)?;
    let value = prime_power_sum(eq)?;
    let eq0 = eq.with_rhs(0);
    let witness = match product_witness(&eq0)? {
        Some(w) => Some(transport_witness(eq, w)?),
        None => None,
    };
    RbResult::new(eq, value, Provenance::ThmZnProduct, witness)
}

/// Fold the prime factors of n (with multiplicity) into a product coloring, one prime at a
/// time. `None` when some prime lacks a known singleton-zero coloring.
fn product_witness(eq0: &Equation) -> Result<Option<Coloring>> {
    let coeffs = eq0.coeffs().map(|a| a as i64);
    let primes: Vec<u64> = factorize(eq0.modulus())
        .pairs()
        .iter()
        .flat_map(|&(p, alpha)| std::iter::repeat_n(p, alpha as usize))
        .collect();
    let mut acc: Option<Coloring> = None;
    for p in primes {
        let eq_p = eq0.reduce_mod(Modulus::new(p)?)?;
        let r_p = rb_zp(&eq_p)?.value as u32 - 1;
        let Some(c_p) = singleton_zero_coloring(&eq_p, r_p)? else {
            return Ok(None);
        };
        acc = Some(match acc {
            None => c_p,
            Some(c_t) => product_coloring(p, c_t.modulus().get(), &c_p, &c_t, coeffs)?,
        });
    }
    Ok(acc)
}
