//! From a period matrix to the Néron–Severi lattice.
//!
//! A class ω = Σ a_ij dx_i∧dx_j is in NS(A) exactly when ω∧dz₁∧⋯∧dzₙ = 0,
//! where dz_i = Σ_j τ_ij dx_j + dx_{n+i}. With polynomial entries τ_ij the
//! blade coefficients of that (n+2)-form are polynomials that are linear in
//! the a_ij; expanding over the monomial basis turns the condition into a
//! rational linear system, whose saturated integer kernel is NS(A).
//! Extending the θ-vector to a lattice basis then yields the polarized
//! quotient NS(A,Θ) = NS(A)/ℤ[Θ] with a fixed linear section.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::{ambient_rank, index_pairs, pair_index, Blade, Multivector, TwoForm};
use crate::linalg::{self, IntMatrix};
use crate::scalars::{Monomial, PolyScalar, Rational, ScalarError, Symbol, SymbolTable};

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("tau[{i}][{j}] != tau[{j}][{i}]: period matrix must be exactly symmetric")]
    AsymmetricTau { i: usize, j: usize },
    #[error("tau must be {n}x{n}: row {row} has {len} entries")]
    WrongShape { n: usize, row: usize, len: usize },
    #[error("tau[{i}][{j}]: {source}")]
    Entry { i: usize, j: usize, source: ScalarError },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("theta does not lie in the constraint kernel (is tau symmetric?)")]
    ThetaNotInKernel,
    #[error("vector is not in NS(A)")]
    NotInLattice,
    #[error("vector has wrong length: expected {expected}, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("lattice coefficient does not fit in i64")]
    CoefficientOverflow,
    #[error("basis rows are linearly dependent")]
    DependentBasis,
    #[error("basis does not span a saturated sublattice (elementary divisor {0} > 1)")]
    NotSaturated(BigInt),
    #[error("invalid period-matrix document: {0}")]
    Document(String),
}

/// The pairs (i, j), 1 ≤ i < j ≤ 2n, in lexicographic order, with the
/// positions of the diagonal pairs (i, i+n) picked out.
#[derive(Debug, Clone)]
pub struct AmbientIndexing {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl AmbientIndexing {
    pub fn new(n: usize) -> Self {
        AmbientIndexing { n, pairs: index_pairs(n) }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn position(&self, i: usize, j: usize) -> usize {
        pair_index(self.n, i, j)
    }

    /// Positions of the diagonal pairs (i, i+n), i = 1..n.
    pub fn diagonal_positions(&self) -> Vec<usize> {
        (1..=self.n).map(|i| self.position(i, i + self.n)).collect()
    }

    /// The θ-vector a_{i,i+n} = −1, all other coefficients 0.
    pub fn theta_vector(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.len()];
        for p in self.diagonal_positions() {
            v[p] = -1;
        }
        v
    }
}

/// Symmetric n×n matrix of polynomial entries defining A = ℂⁿ/(τ I)ℤ²ⁿ.
#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    n: usize,
    table: Arc<SymbolTable>,
    entries: Vec<Vec<PolyScalar>>,
}

impl PeriodMatrix {
    pub fn new(
        n: usize,
        table: Arc<SymbolTable>,
        entries: Vec<Vec<PolyScalar>>,
    ) -> Result<Self, LatticeError> {
        if entries.len() != n {
            return Err(LatticeError::WrongShape { n, row: entries.len(), len: 0 });
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(LatticeError::WrongShape { n, row: i, len: row.len() });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if entries[i][j] != entries[j][i] {
                    return Err(LatticeError::AsymmetricTau { i, j });
                }
            }
        }
        Ok(PeriodMatrix { n, table, entries })
    }

    /// Parse the period-matrix JSON document.
    pub fn from_json(input: &str) -> Result<Self, LatticeError> {
        let doc: PeriodMatrixJson =
            serde_json::from_str(input).map_err(|e| LatticeError::Document(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &PeriodMatrixJson) -> Result<Self, LatticeError> {
        let mut symbols = Vec::new();
        for s in &doc.symbols {
            let square = match &s.square {
                None => None,
                Some(text) => Some(parse_rational_text(text)?),
            };
            symbols.push(Symbol { name: s.name.clone(), square });
        }
        let table = SymbolTable::new(symbols)?;
        let mut entries = Vec::with_capacity(doc.n);
        for (i, row) in doc.tau.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, text) in row.iter().enumerate() {
                let p = PolyScalar::parse(&table, text)
                    .map_err(|source| LatticeError::Entry { i, j, source })?;
                out.push(p);
            }
            entries.push(out);
        }
        if doc.tau.len() != doc.n {
            return Err(LatticeError::WrongShape { n: doc.n, row: doc.tau.len(), len: 0 });
        }
        Self::new(doc.n, table, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn entry(&self, i: usize, j: usize) -> &PolyScalar {
        &self.entries[i][j]
    }

    /// The forms dz_i = Σ_j τ_ij dx_j + dx_{n+i}.
    fn dz_forms(&self) -> Vec<Multivector> {
        (0..self.n)
            .map(|i| {
                let mut terms: Vec<(Blade, PolyScalar)> = Vec::new();
                for j in 0..self.n {
                    let c = self.entries[i][j].clone();
                    if !c.is_zero() {
                        terms.push((Blade::single(j + 1), c));
                    }
                }
                terms.push((Blade::single(self.n + i + 1), PolyScalar::one(&self.table)));
                Multivector::from_terms(self.n, &self.table, terms)
                    .expect("one-forms are homogeneous")
            })
            .collect()
    }
}

/// JSON schema for a period matrix:
/// `{ "n": 3, "symbols": [{"name": "s", "square": null}], "tau": [["3*s", ...], ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodMatrixJson {
    pub n: usize,
    pub symbols: Vec<SymbolJson>,
    pub tau: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolJson {
    pub name: String,
    pub square: Option<String>,
}

fn parse_rational_text(text: &str) -> Result<Rational, ScalarError> {
    let table = SymbolTable::empty();
    let p = PolyScalar::parse(&table, text)?;
    p.as_constant().ok_or(ScalarError::Parse {
        position: 0,
        message: "expected a rational constant".into(),
    })
}

/// The raw polynomial constraint rows: one row per (n+2)-blade β, whose entry
/// in column (i, j) is the β-coefficient of (dx_i∧dx_j)∧dz₁∧⋯∧dzₙ.
pub fn ns_polynomial_constraints(tau: &PeriodMatrix) -> Vec<Vec<PolyScalar>> {
    let n = tau.n;
    let table = &tau.table;
    let dz = tau.dz_forms();
    let mut z = Multivector::scalar(n, PolyScalar::one(table));
    for f in &dz {
        z = z.wedge(f).expect("same dimension");
    }
    let pairs = index_pairs(n);
    let wedges: Vec<Multivector> = pairs
        .iter()
        .map(|&(i, j)| {
            let blade = Multivector::from_terms(
                n,
                table,
                [(Blade::pair(i, j), PolyScalar::one(table))],
            )
            .expect("single blade");
            blade.wedge(&z).expect("same dimension")
        })
        .collect();
    let mut blades: BTreeSet<Blade> = BTreeSet::new();
    for w in &wedges {
        for (b, _) in w.terms() {
            blades.insert(*b);
        }
    }
    blades
        .into_iter()
        .map(|b| wedges.iter().map(|w| w.coefficient(b)).collect())
        .collect()
}

/// The ℚ-linear conditions on the a_ij: each polynomial constraint row is
/// expanded over the monomial basis of its entries, one rational row per
/// (blade, monomial) pair; zero rows are dropped.
pub fn ns_constraints(tau: &PeriodMatrix) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for row in ns_polynomial_constraints(tau) {
        let mut monomials: BTreeSet<Monomial> = BTreeSet::new();
        for p in &row {
            for (m, _) in p.terms() {
                monomials.insert(m.clone());
            }
        }
        for m in monomials {
            let rat_row: Vec<Rational> = row.iter().map(|p| p.coefficient(&m)).collect();
            if rat_row.iter().any(|x| !x.is_zero()) {
                out.push(rat_row);
            }
        }
    }
    out
}

fn clear_denominators(rows: &[Vec<Rational>], cols: usize) -> IntMatrix {
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut l = BigInt::one();
        for x in row {
            l = l.lcm(x.denom());
        }
        out.push(
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect::<Vec<BigInt>>(),
        );
    }
    IntMatrix::from_rows(out, cols)
}

fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>, LatticeError> {
    v.iter()
        .map(|x| x.to_i64().ok_or(LatticeError::CoefficientOverflow))
        .collect()
}

/// Integer basis of NS(A) inside ℤ^C(2n,2) with the θ-vector extended to a
/// lattice basis; the remaining rows represent NS(A,Θ) with a fixed lift.
#[derive(Debug, Clone)]
pub struct PolarizedNS {
    n: usize,
    ambient_rank: usize,
    theta: Vec<i64>,
    /// Basis of NS(A); row 0 is always the θ-vector.
    ns_basis: Vec<Vec<i64>>,
    /// Rows 1.. of `ns_basis`: ambient representatives of the quotient basis.
    quotient_basis: Vec<Vec<i64>>,
}

impl PolarizedNS {
    /// Compute NS(A) and the polarized quotient from a period matrix.
    pub fn from_period_matrix(tau: &PeriodMatrix) -> Result<Self, LatticeError> {
        let n = tau.n;
        let nc = ambient_rank(n);
        let rows = ns_constraints(tau);
        let mat = clear_denominators(&rows, nc);
        let kernel = linalg::kernel_basis(&mat);
        let k = kernel.len();
        let kmat = IntMatrix::from_rows(kernel, nc);

        let indexing = AmbientIndexing::new(n);
        let theta: Vec<BigInt> =
            indexing.theta_vector().iter().map(|&x| BigInt::from(x)).collect();
        let x = linalg::solve_left(&kmat, &theta).ok_or(LatticeError::ThetaNotInKernel)?;

        // complete the θ-coordinates to a unimodular change of basis
        let (c, _c_inv) = linalg::complete_primitive_row(&x);
        let b = c.mul(&kmat);
        debug_assert_eq!(b.row(0), &theta[..]);

        let mut ns_basis = Vec::with_capacity(k);
        for i in 0..k {
            ns_basis.push(to_i64_vec(b.row(i))?);
        }
        let quotient_basis = ns_basis[1..].to_vec();
        Ok(PolarizedNS {
            n,
            ambient_rank: nc,
            theta: indexing.theta_vector(),
            ns_basis,
            quotient_basis,
        })
    }

    /// Assemble from an explicit quotient basis (ambient representatives).
    /// The rows together with θ must be independent and span a saturated
    /// sublattice. The lattice itself is trusted to be NS(A) — this is the
    /// re-ingestion path for previously computed bases.
    pub fn from_parts(n: usize, quotient_basis: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let nc = ambient_rank(n);
        let indexing = AmbientIndexing::new(n);
        let theta = indexing.theta_vector();
        for row in &quotient_basis {
            if row.len() != nc {
                return Err(LatticeError::WrongLength { expected: nc, actual: row.len() });
            }
        }
        let mut rows = vec![theta.clone()];
        rows.extend(quotient_basis.iter().cloned());
        let mat = IntMatrix::from_i64_rows(&rows, nc);
        let smith = linalg::smith_normal_form(&mat);
        if smith.rank != rows.len() {
            return Err(LatticeError::DependentBasis);
        }
        if let Some(d) = smith.elementary_divisors().iter().find(|d| !d.is_one()) {
            return Err(LatticeError::NotSaturated(d.clone()));
        }
        Ok(PolarizedNS {
            n,
            ambient_rank: nc,
            theta,
            ns_basis: rows,
            quotient_basis,
        })
    }

    pub fn from_json(input: &str) -> Result<Self, LatticeError> {
        let doc: NsBasisJson =
            serde_json::from_str(input).map_err(|e| LatticeError::Document(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &NsBasisJson) -> Result<Self, LatticeError> {
        let pns = Self::from_parts(doc.n, doc.quotient_basis.clone())?;
        if doc.theta != pns.theta {
            return Err(LatticeError::Document(
                "theta must be the standard polarization vector (a_{i,i+n} = -1)".into(),
            ));
        }
        Ok(pns)
    }

    pub fn to_document(&self) -> NsBasisJson {
        NsBasisJson {
            n: self.n,
            theta: self.theta.clone(),
            quotient_basis: self.quotient_basis.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// rank NS(A).
    pub fn rank(&self) -> usize {
        self.ns_basis.len()
    }

    /// rank NS(A,Θ) = rank NS(A) − 1.
    pub fn quotient_rank(&self) -> usize {
        self.quotient_basis.len()
    }

    pub fn theta_coords(&self) -> &[i64] {
        &self.theta
    }

    pub fn ns_basis(&self) -> &[Vec<i64>] {
        &self.ns_basis
    }

    pub fn quotient_basis(&self) -> &[Vec<i64>] {
        &self.quotient_basis
    }

    /// Quotient coordinates of an ambient vector mod ℤθ.
    /// Fails when the vector is not in NS(A).
    pub fn project(&self, v: &[i64]) -> Result<Vec<i64>, LatticeError> {
        if v.len() != self.ambient_rank {
            return Err(LatticeError::WrongLength {
                expected: self.ambient_rank,
                actual: v.len(),
            });
        }
        let mat = IntMatrix::from_i64_rows(&self.ns_basis, self.ambient_rank);
        let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let y = linalg::solve_left(&mat, &vb).ok_or(LatticeError::NotInLattice)?;
        to_i64_vec(&y[1..])
    }

    /// The fixed linear section of the quotient map: 0 ↦ 0 and
    /// project(lift(q)) = q.
    pub fn lift(&self, q: &[i64]) -> TwoForm {
        assert_eq!(q.len(), self.quotient_rank(), "quotient coordinate length");
        let mut coeffs = vec![0i64; self.ambient_rank];
        for (qi, row) in q.iter().zip(&self.quotient_basis) {
            for (c, &r) in coeffs.iter_mut().zip(row) {
                *c = c
                    .checked_add(qi.checked_mul(r).expect("lift overflow"))
                    .expect("lift overflow");
            }
        }
        TwoForm::from_coeffs(self.n, coeffs).expect("ambient length")
    }

    /// Ambient vector of a TwoForm (identity on coefficients).
    pub fn ambient_of(&self, w: &TwoForm) -> Vec<i64> {
        w.coeffs().to_vec()
    }
}

/// JSON schema for a precomputed polarized basis, as emitted by `ns`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NsBasisJson {
    pub n: usize,
    pub theta: Vec<i64>,
    pub quotient_basis: Vec<Vec<i64>>,
}

/// Coordinates of `v` mod ℤθ in the normal form with the (n, 2n) slot
/// removed: add a_{n,2n}·θ (making that slot 0) and drop it. This projection
/// has kernel exactly ℤθ, so it identifies NS(A)/ℤθ with a sublattice of
/// ℤ^(C(2n,2)−1).
pub fn normalized_quotient_coords(n: usize, v: &[i64]) -> Vec<i64> {
    let nc = ambient_rank(n);
    assert_eq!(v.len(), nc, "ambient vector length");
    let last_diag = pair_index(n, n, 2 * n);
    let t = v[last_diag];
    let mut out = Vec::with_capacity(nc - 1);
    for (k, &(i, j)) in index_pairs(n).iter().enumerate() {
        if k == last_diag {
            continue;
        }
        if j == i + n {
            out.push(v[k] - t);
        } else {
            out.push(v[k]);
        }
    }
    out
}
