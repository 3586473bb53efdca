//! Exact computation of Néron–Severi lattices and abelian-divisor classes on
//! principally polarized abelian varieties.
//!
//! Given a period matrix τ with entries that are polynomials over ℚ in declared
//! symbols (so a whole family of tori is handled at once), this crate computes
//! the lattice of integral (1,1)-classes NS(A) ⊂ ℤ^C(2n,2), the quotient
//! NS(A,Θ) by the principal polarization, and the intersection-theoretic forms
//! q_r whose simultaneous values (−1)^r d^r pick out the classes of abelian
//! divisors of degree d. A bounded Diophantine search then enumerates those
//! classes, which correspond to elliptic curves on the variety.
//!
//! Everything is exact: arbitrary-precision rationals, integer wedge algebra,
//! Smith-normal-form lattice kernels. There is no floating point anywhere.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalars`] — sparse multivariate polynomials over ℚ with optional
//!   quadratic relations per symbol (coefficients for everything else);
//! * [`exterior`] — exterior algebra on the 2n real coordinate one-forms;
//! * [`intersection`] — the polarized intersection theory: degrees, the
//!   ♮-operator, the forms q_r (numeric and symbolic);
//! * [`linalg`] — exact integer linear algebra (Smith normal form, solving,
//!   lattice comparisons) and fraction-free polynomial ranks;
//! * [`nslattice`] — period matrices, the Néron–Severi kernel computation and
//!   the polarized quotient;
//! * [`search`] — bounded enumeration of primitive classes hitting the
//!   abelian-divisor targets;
//! * [`criteria`] — classification predicates built on the search
//!   (product splittings, Jacobian criteria, elliptic cover counts).
//!
//! With the default `parallel` feature the search partitions its box across
//! rayon workers; disabling it gives a dependency-free sequential build with
//! identical output.

pub mod criteria;
pub mod exterior;
pub mod intersection;
pub mod linalg;
pub mod nslattice;
pub mod scalars;
pub mod search;

pub use exterior::{Blade, Multivector, TwoForm};
pub use intersection::PolarizedContext;
pub use nslattice::{PeriodMatrix, PolarizedNS};
pub use scalars::{PolyScalar, Rational, SymbolTable};
pub use search::{DivisorRecord, SearchQuery};
