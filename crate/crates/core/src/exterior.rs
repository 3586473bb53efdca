//! Exterior algebra over [`PolyScalar`] on the 2n real coordinate generators
//! dx₁,…,dx₂ₙ.
//!
//! Blades are kept in one canonical order everywhere: strictly increasing
//! index sets, encoded as bitmasks. The interleaved reference top form
//! η = dx₁∧dx_{n+1}∧⋯∧dxₙ∧dx_{2n} is handled only inside
//! [`Multivector::eta_coefficient`], through an explicitly counted
//! permutation sign, so no other code ever sees a non-sorted blade.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::scalars::{PolyScalar, SymbolTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("dimension mismatch: n = {0} vs n = {1}")]
    DimensionMismatch(usize, usize),
    #[error("multivector is not homogeneous: degrees {0} and {1}")]
    MixedDegree(usize, usize),
    #[error("eta coefficient requires degree 2n = {expected}, got {actual}")]
    NotTopDegree { expected: usize, actual: usize },
    #[error("blade index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("blade indices must be strictly increasing")]
    NotIncreasing,
    #[error("expected {expected} coefficients for a two-form in dimension {n}, got {actual}")]
    WrongCoefficientCount { n: usize, expected: usize, actual: usize },
}

/// A basis blade dx_{i₁}∧⋯∧dx_{i_k} with i₁ < ⋯ < i_k, stored as a bitmask
/// (bit j−1 set ⇔ index j present). Supports up to 64 generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(u64);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Blade from strictly increasing 1-based indices.
    pub fn from_indices(indices: &[usize], two_n: usize) -> Result<Self, ExteriorError> {
        let mut mask = 0u64;
        let mut prev = 0usize;
        for &i in indices {
            if i < 1 || i > two_n {
                return Err(ExteriorError::IndexOutOfRange(i, two_n));
            }
            if i <= prev {
                return Err(ExteriorError::NotIncreasing);
            }
            prev = i;
            mask |= 1 << (i - 1);
        }
        Ok(Blade(mask))
    }

    pub fn single(i: usize) -> Self {
        Blade(1 << (i - 1))
    }

    pub fn pair(i: usize, j: usize) -> Self {
        debug_assert!(i < j);
        Blade((1 << (i - 1)) | (1 << (j - 1)))
    }

    pub fn full(two_n: usize) -> Self {
        Blade(if two_n == 64 { u64::MAX } else { (1 << two_n) - 1 })
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// Merge with a disjoint blade; `None` if an index repeats. The sign is
    /// the parity of the permutation that sorts the concatenation.
    pub fn merge(self, other: Blade) -> Option<(Blade, i8)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // For each index of `other`, count how many indices of `self` are
        // larger: each such pair is one transposition.
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            let pos = bit.trailing_zeros();
            swaps += (self.0 >> (pos + 1)).count_ones();
            rest ^= bit;
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((Blade(self.0 | other.0), sign))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.indices().iter().map(|i| format!("dx{i}")).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// Sign of the permutation (1, n+1, 2, n+2, …, n, 2n) that writes the
/// reference top form η in terms of the sorted top blade, computed by
/// inversion counting.
pub fn eta_sign(n: usize) -> i8 {
    let mut seq = Vec::with_capacity(2 * n);
    for i in 1..=n {
        seq.push(i);
        seq.push(i + n);
    }
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of unordered pairs {i, j} with 1 ≤ i < j ≤ 2n.
pub fn ambient_rank(n: usize) -> usize {
    let m = 2 * n;
    m * (m - 1) / 2
}

/// The pairs (i, j), 1 ≤ i < j ≤ 2n, in lexicographic order.
pub fn index_pairs(n: usize) -> Vec<(usize, usize)> {
    let m = 2 * n;
    let mut out = Vec::with_capacity(ambient_rank(n));
    for i in 1..=m {
        for j in i + 1..=m {
            out.push((i, j));
        }
    }
    out
}

/// Position of the pair (i, j) in the lexicographic pair order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= 2 * n);
    let m = 2 * n;
    // pairs starting with 1..i-1, then offset within row i
    (i - 1) * m - i * (i - 1) / 2 + (j - i - 1)
}

/// Homogeneous element of the exterior algebra with [`PolyScalar`]
/// coefficients. The zero element is degree-agnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multivector {
    n: usize,
    table: Arc<SymbolTable>,
    terms: BTreeMap<Blade, PolyScalar>,
}

impl Multivector {
    pub fn zero(n: usize, table: &Arc<SymbolTable>) -> Self {
        Multivector { n, table: Arc::clone(table), terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, value: PolyScalar) -> Self {
        let table = Arc::clone(value.table());
        let mut mv = Self::zero(n, &table);
        if !value.is_zero() {
            mv.terms.insert(Blade::SCALAR, value);
        }
        mv
    }

    /// From (blade, coefficient) pairs; rejects mixed degrees.
    pub fn from_terms<I>(
        n: usize,
        table: &Arc<SymbolTable>,
        terms: I,
    ) -> Result<Self, ExteriorError>
    where
        I: IntoIterator<Item = (Blade, PolyScalar)>,
    {
        let mut mv = Self::zero(n, table);
        for (b, c) in terms {
            mv.accumulate(b, c)?;
        }
        Ok(mv)
    }

    fn accumulate(&mut self, blade: Blade, coeff: PolyScalar) -> Result<(), ExteriorError> {
        if coeff.is_zero() {
            return Ok(());
        }
        if let Some(d) = self.degree() {
            if d != blade.degree() {
                return Err(ExteriorError::MixedDegree(d, blade.degree()));
            }
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().checked_add(&coeff).expect("same table");
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all stored blades; `None` when zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|b| b.degree())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &PolyScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, blade: Blade) -> PolyScalar {
        self.terms.get(&blade).cloned().unwrap_or_else(|| PolyScalar::zero(&self.table))
    }

    /// Sum of two multivectors of equal degree (or either zero).
    pub fn add(&self, other: &Multivector) -> Result<Multivector, ExteriorError> {
        if self.n != other.n {
            return Err(ExteriorError::DimensionMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.accumulate(*b, c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &PolyScalar) -> Multivector {
        let mut out = Self::zero(self.n, &self.table);
        if c.is_zero() {
            return out;
        }
        for (b, v) in &self.terms {
            let prod = v.checked_mul(c).expect("same table");
            if !prod.is_zero() {
                out.terms.insert(*b, prod);
            }
        }
        out
    }

    /// Graded-anticommutative wedge product. A total degree beyond 2n gives
    /// the zero multivector (every blade repeats an index).
    pub fn wedge(&self, other: &Multivector) -> Result<Multivector, ExteriorError> {
        if self.n != other.n {
            return Err(ExteriorError::DimensionMismatch(self.n, other.n));
        }
        let mut out = Self::zero(self.n, &self.table);
        for (bu, cu) in &self.terms {
            for (bv, cv) in &other.terms {
                if let Some((blade, sign)) = bu.merge(*bv) {
                    let mut c = cu.checked_mul(cv).expect("same table");
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.accumulate(blade, c)?;
                }
            }
        }
        Ok(out)
    }

    /// r-fold wedge power; `power(w, 0)` is the unit scalar.
    pub fn power(&self, r: usize) -> Multivector {
        let mut acc = Multivector::scalar(self.n, PolyScalar::one(&self.table));
        for _ in 0..r {
            acc = acc.wedge(self).expect("same dimension");
        }
        acc
    }

    /// Coefficient c with `self = c·η`, where η is the interleaved reference
    /// top form. Requires degree 2n (the zero multivector passes and gives 0).
    pub fn eta_coefficient(&self) -> Result<PolyScalar, ExteriorError> {
        let two_n = 2 * self.n;
        if let Some(d) = self.degree() {
            if d != two_n {
                return Err(ExteriorError::NotTopDegree { expected: two_n, actual: d });
            }
        }
        let sorted_coeff = self.coefficient(Blade::full(two_n));
        Ok(if eta_sign(self.n) < 0 { sorted_coeff.neg() } else { sorted_coeff })
    }
}

/// Integral 2-form Σ_{i<j} a_ij dx_i∧dx_j: a class in H²(A,ℤ). Coefficients
/// are stored in the lexicographic pair order of [`index_pairs`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoForm {
    n: usize,
    coeffs: Vec<i64>,
}

impl TwoForm {
    pub fn zero(n: usize) -> Self {
        TwoForm { n, coeffs: vec![0; ambient_rank(n)] }
    }

    /// The principal polarization class −Σ dx_i∧dx_{i+n}.
    pub fn theta(n: usize) -> Self {
        let mut f = Self::zero(n);
        for i in 1..=n {
            f.coeffs[pair_index(n, i, i + n)] = -1;
        }
        f
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<i64>) -> Result<Self, ExteriorError> {
        let expected = ambient_rank(n);
        if coeffs.len() != expected {
            return Err(ExteriorError::WrongCoefficientCount {
                n,
                expected,
                actual: coeffs.len(),
            });
        }
        Ok(TwoForm { n, coeffs })
    }

    /// Build from explicit (i, j, a_ij) entries, all other coefficients zero.
    pub fn from_pairs(n: usize, entries: &[(usize, usize, i64)]) -> Result<Self, ExteriorError> {
        let mut f = Self::zero(n);
        for &(i, j, a) in entries {
            if i < 1 || j > 2 * n {
                return Err(ExteriorError::IndexOutOfRange(j, 2 * n));
            }
            if i >= j {
                return Err(ExteriorError::NotIncreasing);
            }
            f.coeffs[pair_index(n, i, j)] = a;
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, i: usize, j: usize) -> i64 {
        self.coeffs[pair_index(self.n, i, j)]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// self + m·other, exact.
    pub fn add_scaled(&self, other: &TwoForm, m: i64) -> TwoForm {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                a.checked_add(m.checked_mul(*b).expect("two-form coefficient overflow"))
                    .expect("two-form coefficient overflow")
            })
            .collect();
        TwoForm { n: self.n, coeffs }
    }

    pub fn scaled(&self, m: i64) -> TwoForm {
        TwoForm {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|a| a.checked_mul(m).expect("two-form coefficient overflow"))
                .collect(),
        }
    }

    pub fn neg(&self) -> TwoForm {
        self.scaled(-1)
    }

    /// Embed into the symbolic exterior algebra with constant coefficients.
    pub fn as_multivector(&self, table: &Arc<SymbolTable>) -> Multivector {
        let pairs = index_pairs(self.n);
        Multivector::from_terms(
            self.n,
            table,
            pairs.iter().zip(&self.coeffs).filter(|(_, &c)| c != 0).map(|(&(i, j), &c)| {
                (Blade::pair(i, j), PolyScalar::constant(table, crate::scalars::rational_int(c)))
            }),
        )
        .expect("two-form terms are homogeneous")
    }
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ((i, j), &c) in index_pairs(self.n).into_iter().zip(&self.coeffs) {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.unsigned_abs();
            if a == 1 {
                write!(f, "dx{i}^dx{j}")?;
            } else {
                write!(f, "{a}*dx{i}^dx{j}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
