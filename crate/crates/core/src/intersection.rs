//! Polarized intersection theory: intersection numbers of integral 2-forms
//! against the principal polarization, degrees, the ♮-operator and the forms
//! q_r, numerically and as symbolic polynomial expansions.
//!
//! Numeric intersection numbers run on a dedicated integer wedge kernel
//! (i128 accumulators, checked); the symbolic expansion reuses the generic
//! [`Multivector`] algebra over [`PolyScalar`]. The two routes are independent
//! and cross-checked in tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use thiserror::Error;

use crate::exterior::{eta_sign, index_pairs, Blade, Multivector, TwoForm};
use crate::scalars::{PolyScalar, Rational, SymbolTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntersectionError {
    #[error("expected {expected} two-forms, got {actual}")]
    WrongFormCount { expected: usize, actual: usize },
    #[error("dimension mismatch: context has n = {0}, form has n = {1}")]
    DimensionMismatch(usize, usize),
    #[error("exponent r = {r} out of range {min}..={max}")]
    RankRange { r: usize, min: usize, max: usize },
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Coefficient of the sorted top blade dx₁∧⋯∧dx₂ₙ in the wedge of the given
/// integer 2-forms, by folding one form at a time into a sparse blade map.
fn top_blade_coefficient(n: usize, forms: &[&TwoForm]) -> i128 {
    let two_n = 2 * n;
    let pairs = index_pairs(n);
    let mut state: BTreeMap<u64, i128> = BTreeMap::new();
    state.insert(0, 1);
    for form in forms {
        let mut next: BTreeMap<u64, i128> = BTreeMap::new();
        for (&mask, &acc) in &state {
            for (&(i, j), &a) in pairs.iter().zip(form.coeffs()) {
                if a == 0 {
                    continue;
                }
                let bi = 1u64 << (i - 1);
                let bj = 1u64 << (j - 1);
                if mask & (bi | bj) != 0 {
                    continue;
                }
                // sign of moving dx_i then dx_j past the existing blade
                let above_i = (mask >> i).count_ones();
                let above_j = (mask >> j).count_ones();
                let sign = if (above_i + above_j) % 2 == 0 { 1i128 } else { -1i128 };
                let term = acc
                    .checked_mul(a as i128)
                    .and_then(|t| t.checked_mul(sign))
                    .expect("intersection coefficient overflow");
                let slot = next.entry(mask | bi | bj).or_insert(0);
                *slot = slot.checked_add(term).expect("intersection coefficient overflow");
            }
        }
        state = next;
    }
    let full = if two_n == 64 { u64::MAX } else { (1u64 << two_n) - 1 };
    state.get(&full).copied().unwrap_or(0)
}

/// Dimension n together with the principal polarization class θ and its top
/// self-intersection (Θⁿ) = n!, asserted at construction by direct wedge
/// computation.
#[derive(Debug, Clone)]
pub struct PolarizedContext {
    n: usize,
    theta: TwoForm,
    theta_top: i64,
}

impl PolarizedContext {
    /// Standard principally polarized context in dimension n.
    pub fn standard(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        let theta = TwoForm::theta(n);
        let forms: Vec<&TwoForm> = (0..n).map(|_| &theta).collect();
        let top = (-1i128).pow(n as u32)
            * eta_sign(n) as i128
            * top_blade_coefficient(n, &forms);
        let expected = factorial(n) as i128;
        assert_eq!(top, expected, "(theta^n) must equal n!");
        PolarizedContext { n, theta, theta_top: expected as i64 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> &TwoForm {
        &self.theta
    }

    /// (Θⁿ) = n!.
    pub fn theta_top(&self) -> i64 {
        self.theta_top
    }

    fn check_form(&self, w: &TwoForm) -> Result<(), IntersectionError> {
        if w.n() != self.n {
            return Err(IntersectionError::DimensionMismatch(self.n, w.n()));
        }
        Ok(())
    }

    /// Intersection number (L₁⋯Lₙ) of n integral 2-forms:
    /// (−1)ⁿ times the η-coefficient of their wedge.
    pub fn intersection_number(&self, forms: &[&TwoForm]) -> Result<i128, IntersectionError> {
        if forms.len() != self.n {
            return Err(IntersectionError::WrongFormCount {
                expected: self.n,
                actual: forms.len(),
            });
        }
        for f in forms {
            self.check_form(f)?;
        }
        let coeff = top_blade_coefficient(self.n, forms);
        Ok((-1i128).pow(self.n as u32) * eta_sign(self.n) as i128 * coeff)
    }

    /// (wʳ·Θⁿ⁻ʳ) for 0 ≤ r ≤ n.
    pub fn mixed_power(&self, w: &TwoForm, r: usize) -> Result<i128, IntersectionError> {
        if r > self.n {
            return Err(IntersectionError::RankRange { r, min: 0, max: self.n });
        }
        self.check_form(w)?;
        let mut forms: Vec<&TwoForm> = Vec::with_capacity(self.n);
        for _ in 0..r {
            forms.push(w);
        }
        for _ in r..self.n {
            forms.push(&self.theta);
        }
        self.intersection_number(&forms)
    }

    /// deg w = (w·Θⁿ⁻¹), by the closed form −(n−1)!·Σᵢ a_{i,i+n}.
    pub fn degree(&self, w: &TwoForm) -> i64 {
        assert_eq!(w.n(), self.n, "dimension mismatch");
        let trace: i64 = (1..=self.n).map(|i| w.coeff(i, i + self.n)).sum();
        -factorial(self.n - 1) * trace
    }

    /// The ♮-operator (Θⁿ)·w − (deg w)·θ; the result always has degree 0.
    pub fn natural_sharp(&self, w: &TwoForm) -> TwoForm {
        let d = self.degree(w);
        w.scaled(self.theta_top).add_scaled(&self.theta, -d)
    }

    /// q_r(w) = −((w♮)ʳ·Θⁿ⁻ʳ) / ((r−1)(Θⁿ)) for 2 ≤ r ≤ n; exact rational,
    /// invariant under w ↦ w + m·θ.
    pub fn q_form(&self, w: &TwoForm, r: usize) -> Result<Rational, IntersectionError> {
        if r < 2 || r > self.n {
            return Err(IntersectionError::RankRange { r, min: 2, max: self.n });
        }
        let sharp = self.natural_sharp(w);
        let num = self.mixed_power(&sharp, r)?;
        let den = (r as i128 - 1) * self.theta_top as i128;
        Ok(Rational::new(BigInt::from(-num), BigInt::from(den)))
    }

    /// Numeric effectivity and ampleness indicators:
    /// all (wⁱ·Θⁿ⁻ⁱ) ≥ 0 for 1 ≤ i ≤ n, resp. all > 0.
    pub fn effectivity_indicator(&self, w: &TwoForm) -> (bool, bool) {
        let mut effective = true;
        let mut ample = true;
        for i in 1..=self.n {
            let v = self.mixed_power(w, i).expect("i in range");
            effective &= v >= 0;
            ample &= v > 0;
        }
        (effective, ample)
    }
}

/// Symbol names for the generic coefficients a_ij, in lexicographic pair
/// order; these are the variables of [`q_symbolic`].
pub fn coefficient_symbols(n: usize) -> Arc<SymbolTable> {
    let pairs = index_pairs(n);
    let names: Vec<String> = pairs
        .iter()
        .map(|&(i, j)| {
            if 2 * n <= 9 {
                format!("a{i}{j}")
            } else {
                format!("a{i}_{j}")
            }
        })
        .collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    SymbolTable::free(&refs)
}

/// q_r of a 2-form with symbolic polynomial coefficients, as a polynomial in
/// those symbols; the same defining formula as [`PolarizedContext::q_form`],
/// run through the generic exterior algebra.
pub fn q_of_symbolic_form(omega: &Multivector, r: usize) -> Result<PolyScalar, IntersectionError> {
    let n = omega.n();
    if r < 2 || r > n {
        return Err(IntersectionError::RankRange { r, min: 2, max: n });
    }
    let table = omega.table();
    let theta = TwoForm::theta(n).as_multivector(table);

    // deg(omega) = -(n-1)! * sum of the diagonal coefficients a_{i,i+n}
    let mut trace = PolyScalar::zero(table);
    for i in 1..=n {
        trace = &trace + &omega.coefficient(Blade::pair(i, i + n));
    }
    let deg = trace.scale(&Rational::from_integer(BigInt::from(-factorial(n - 1))));

    // omega_sharp = n! * omega - deg * theta
    let sharp = omega
        .scale(&PolyScalar::from_int(table, factorial(n)))
        .add(&theta.scale(&deg.neg()))
        .expect("degree-2 terms");

    let mut top = sharp.power(r);
    for _ in r..n {
        top = top.wedge(&theta).expect("same dimension");
    }
    let eta_coeff = top.eta_coefficient().expect("top degree");
    let sign = (-1i64).pow(n as u32);
    let scale = Rational::new(
        BigInt::from(-sign),
        BigInt::from((r as i64 - 1) * factorial(n)),
    );
    Ok(eta_coeff.scale(&scale))
}

/// The polynomial expansion of q_r over the generic coefficients a_ij,
/// 2 ≤ r ≤ n.
pub fn q_symbolic(n: usize, r: usize) -> Result<PolyScalar, IntersectionError> {
    if n < 1 {
        return Err(IntersectionError::RankRange { r, min: 2, max: n });
    }
    let table = coefficient_symbols(n);
    let pairs = index_pairs(n);
    let omega = Multivector::from_terms(
        n,
        &table,
        pairs
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| (Blade::pair(i, j), PolyScalar::symbol(&table, k))),
    )
    .expect("all terms are 2-blades");
    q_of_symbolic_form(&omega, r)
}

/// Evaluate a symbolic q-form at integer coefficients (one value per a_ij,
/// lexicographic pair order).
pub fn evaluate_symbolic(q: &PolyScalar, coeffs: &[i64]) -> Rational {
    let values: Vec<Rational> = coeffs
        .iter()
        .map(|&c| Rational::from_integer(BigInt::from(c)))
        .collect();
    q.evaluate(&values)
}
