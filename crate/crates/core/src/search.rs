//! Bounded Diophantine enumeration of primitive quotient classes hitting the
//! abelian-divisor targets q_r(α) = (−1)ʳdʳ.
//!
//! The scan walks the box [−B,B]^rank in quotient coordinates. The q₂ value is
//! computed first and must be a perfect square d²; only then are the higher
//! forms checked, and finally the degree-d representative β = α − ((deg α −
//! d)/n!)·θ is constructed, whose mixed powers all vanish.
//!
//! With the `parallel` feature the box is partitioned by its first coordinate
//! across rayon workers; results are merged and canonically sorted, so the
//! output is identical to the sequential scan.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exterior::{index_pairs, Blade, Multivector, TwoForm};
use crate::intersection::{q_of_symbolic_form, PolarizedContext};
use crate::nslattice::PolarizedNS;
use crate::scalars::{PolyScalar, SymbolTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("m must lie outside {{-1, 0, 1}}")]
    DegenerateMultiplier,
    #[error("the degree correction (deg α − d) = {excess} is not divisible by n! = {modulus}")]
    InexactDivision { excess: i64, modulus: i64 },
    #[error("target degree must be positive")]
    NonPositiveDegree,
}

/// Box bound, degree cap and optional explicit degree targets for a search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchQuery {
    /// Scan the box [−B, B]^rank.
    pub coord_bound: i64,
    /// Accept divisor degrees d with 1 ≤ d ≤ max_degree …
    pub max_degree: u64,
    /// … or d in this explicit list.
    pub targets: Option<Vec<u64>>,
}

impl SearchQuery {
    pub fn new(coord_bound: i64, max_degree: u64) -> Self {
        assert!(coord_bound >= 1, "coordinate bound must be at least 1");
        assert!(max_degree >= 1, "degree cap must be at least 1");
        SearchQuery { coord_bound, max_degree, targets: None }
    }

    pub fn with_targets(mut self, targets: Vec<u64>) -> Self {
        let mut t = targets;
        t.sort_unstable();
        t.dedup();
        self.targets = Some(t);
        self
    }

    fn accepts_degree(&self, d: u64) -> bool {
        if d >= 1 && d <= self.max_degree {
            return true;
        }
        self.targets.as_deref().is_some_and(|t| t.contains(&d))
    }
}

/// One found abelian-divisor class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorRecord {
    /// Coordinates in the quotient basis of the [`PolarizedNS`] searched.
    pub quotient_coords: Vec<i64>,
    /// d = (Z·Θⁿ⁻¹).
    pub divisor_degree: u64,
    /// d/(n−1)! = (E·Θ) for the complementary elliptic curve, when integral.
    pub complement_degree: Option<u64>,
    /// q_r values, r = 2..n: exactly (−1)ʳdʳ.
    pub q_values: Vec<i128>,
    /// The degree-d representative β in ambient coordinates.
    pub ns_representative: Vec<i64>,
    /// For n = 2 both α and −α satisfy the target; both are emitted, flagged.
    pub sign_pair: bool,
}

/// gcd-1 test: coordinates of a primitive lattice element. Zero is not
/// primitive.
pub fn is_primitive(coords: &[i64]) -> bool {
    let mut g: u64 = 0;
    for &c in coords {
        g = g.gcd(&c.unsigned_abs());
    }
    g == 1
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Does q_r(lift(q)) = (−1)ʳdʳ hold for all 2 ≤ r ≤ n?
pub fn satisfies_target(
    ctx: &PolarizedContext,
    pns: &PolarizedNS,
    q: &[i64],
    d: u64,
) -> bool {
    assert!(d >= 1, "degree must be positive");
    let lift = pns.lift(q);
    q_values_match(ctx, &lift, d)
}

fn q_values_match(ctx: &PolarizedContext, lift: &TwoForm, d: u64) -> bool {
    for r in 2..=ctx.n() {
        let expect = signed_power(d, r);
        match ctx.q_form(lift, r) {
            Ok(v) => {
                if !v.is_integer() || v.numer() != &BigInt::from(expect) {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

/// (−1)ʳ dʳ.
fn signed_power(d: u64, r: usize) -> i128 {
    let p = (d as i128).pow(r as u32);
    if r % 2 == 0 {
        p
    } else {
        -p
    }
}

/// Cheap necessary condition from the congruence deg α ≡ d (mod n!).
pub fn congruence_filter(ctx: &PolarizedContext, w: &TwoForm, d: u64) -> bool {
    let modulus = factorial(ctx.n());
    (ctx.degree(w) as i128 - d as i128).rem_euclid(modulus as i128) == 0
}

/// The degree-d representative β = lift(q) − ((deg − d)/n!)·θ. The division
/// is exact whenever the target holds; a failure signals an upstream bug.
pub fn divisor_representative(
    ctx: &PolarizedContext,
    pns: &PolarizedNS,
    q: &[i64],
    d: u64,
) -> Result<TwoForm, SearchError> {
    if d < 1 {
        return Err(SearchError::NonPositiveDegree);
    }
    let lift = pns.lift(q);
    beta_from_lift(ctx, &lift, d)
}

fn beta_from_lift(
    ctx: &PolarizedContext,
    lift: &TwoForm,
    d: u64,
) -> Result<TwoForm, SearchError> {
    let modulus = factorial(ctx.n());
    let excess = ctx.degree(lift) - d as i64;
    if excess.rem_euclid(modulus) != 0 {
        return Err(SearchError::InexactDivision { excess, modulus });
    }
    Ok(lift.add_scaled(ctx.theta(), -excess.div_euclid(modulus)))
}

/// m^(n−1) | n!  (true only for m = ±2 with n a power of two).
pub fn divisibility_predicate(m: i64, n: u32) -> Result<bool, SearchError> {
    if (-1..=1).contains(&m) {
        return Err(SearchError::DegenerateMultiplier);
    }
    let mut fact = BigInt::one();
    for i in 1..=n as i64 {
        fact *= i;
    }
    let power = BigInt::from(m).pow(n.saturating_sub(1));
    Ok((fact % power).is_zero())
}

/// x_r = (d−k)^{r−1}(d+(r−1)k), the closed form of the scaled mixed powers
/// n!^{r−1}(αʳ·Θⁿ⁻ʳ) under the target congruence.
pub fn xr_closed_form(d: i64, k: i64, r: u32) -> i128 {
    assert!(r >= 2, "defined for r >= 2");
    let base = (d - k) as i128;
    base.pow(r - 1) * (d as i128 + (r as i128 - 1) * k as i128)
}

/// D·q_r as an integer polynomial in the quotient coordinates, for fast exact
/// candidate evaluation. q_r(v) = t iff evaluate(v) = D·t.
pub(crate) struct QuotientForm {
    /// Common denominator D cleared from the rational coefficients.
    denom: i128,
    /// (exponent vector over the quotient coordinates, coefficient of D·q_r).
    terms: Vec<(Vec<u32>, i128)>,
}

impl QuotientForm {
    pub(crate) fn evaluate(&self, v: &[i64]) -> i128 {
        let mut acc: i128 = 0;
        for (exps, c) in &self.terms {
            let mut t = *c;
            for (x, &e) in v.iter().zip(exps) {
                for _ in 0..e {
                    t = t
                        .checked_mul(*x as i128)
                        .expect("quotient form evaluation overflow");
                }
            }
            acc = acc.checked_add(t).expect("quotient form evaluation overflow");
        }
        acc
    }

    /// evaluate(v)/D when integral.
    pub(crate) fn value(&self, v: &[i64]) -> Option<i128> {
        let raw = self.evaluate(v);
        (raw % self.denom == 0).then(|| raw / self.denom)
    }
}

/// Precompute D·q_r polynomials in the quotient coordinates of `pns`,
/// r = 2..n, by running the symbolic q pipeline on Σ vᵢ·(basis row i).
pub(crate) fn quotient_forms(ctx: &PolarizedContext, pns: &PolarizedNS) -> Vec<QuotientForm> {
    let n = ctx.n();
    let rank = pns.quotient_rank();
    let names: Vec<String> = (1..=rank).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let table = SymbolTable::free(&refs);
    let pairs = index_pairs(n);
    let omega = Multivector::from_terms(
        n,
        &table,
        pairs.iter().enumerate().filter_map(|(k, &(i, j))| {
            let mut coeff = PolyScalar::zero(&table);
            for (vi, row) in pns.quotient_basis().iter().enumerate() {
                if row[k] != 0 {
                    let c = PolyScalar::symbol(&table, vi)
                        .scale(&crate::scalars::rational_int(row[k]));
                    coeff = &coeff + &c;
                }
            }
            (!coeff.is_zero()).then_some((Blade::pair(i, j), coeff))
        }),
    )
    .expect("degree-2 terms");
    (2..=n)
        .map(|r| {
            let q = q_of_symbolic_form(&omega, r).expect("r in range");
            let mut denom = BigInt::one();
            for (_, c) in q.terms() {
                denom = denom.lcm(c.denom());
            }
            let terms = q
                .terms()
                .map(|(m, c)| {
                    let scaled = c.numer() * (&denom / c.denom());
                    (
                        m.exponents().to_vec(),
                        scaled.to_i128().expect("quotient form coefficient overflow"),
                    )
                })
                .collect();
            QuotientForm {
                denom: denom.to_i128().expect("quotient form denominator overflow"),
                terms,
            }
        })
        .collect()
}

fn evaluate_candidate(
    ctx: &PolarizedContext,
    pns: &PolarizedNS,
    query: &SearchQuery,
    forms: &[QuotientForm],
    coords: &[i64],
) -> Option<DivisorRecord> {
    if !is_primitive(coords) {
        return None;
    }
    // fast exact filter on the precomputed quotient polynomials
    let q2 = forms[0].value(coords).filter(|&v| v >= 0)?;
    let d_i128 = {
        let root = (q2 as u128).isqrt() as i128;
        (root * root == q2).then_some(root)?
    };
    let d = u64::try_from(d_i128).ok()?;
    if d < 1 || !query.accepts_degree(d) {
        return None;
    }
    for (r, form) in (3..=ctx.n()).zip(&forms[1..]) {
        if form.value(coords) != Some(signed_power(d, r)) {
            return None;
        }
    }
    // authoritative re-verification of the finalist through the wedge route
    let lift = pns.lift(coords);
    if !q_values_match(ctx, &lift, d) {
        return None;
    }
    // Lemma-style congruence must now hold, and the β-lift must verify.
    assert!(congruence_filter(ctx, &lift, d), "target holds but congruence fails");
    let beta = beta_from_lift(ctx, &lift, d).expect("exact division after congruence");
    assert_eq!(ctx.degree(&beta), d as i64, "β must have degree d");
    for r in 2..=ctx.n() {
        assert_eq!(
            ctx.mixed_power(&beta, r).expect("r in range"),
            0,
            "β mixed powers must vanish"
        );
    }
    let complement = {
        let f = factorial(ctx.n() - 1) as u64;
        (d % f == 0).then(|| d / f)
    };
    Some(DivisorRecord {
        quotient_coords: coords.to_vec(),
        divisor_degree: d,
        complement_degree: complement,
        q_values: (2..=ctx.n()).map(|r| signed_power(d, r)).collect(),
        ns_representative: beta.coeffs().to_vec(),
        sign_pair: ctx.n() == 2,
    })
}

/// Visit every point of [−b, b]^rank whose first coordinate is `first`.
pub(crate) fn scan_slice<F: FnMut(&[i64])>(rank: usize, b: i64, first: i64, mut f: F) {
    debug_assert!(rank >= 1);
    let mut coords = vec![-b; rank];
    coords[0] = first;
    loop {
        f(&coords);
        let mut i = rank - 1;
        loop {
            if i == 0 {
                return;
            }
            coords[i] += 1;
            if coords[i] <= b {
                break;
            }
            coords[i] = -b;
            i -= 1;
        }
    }
}

fn sort_records(records: &mut [DivisorRecord]) {
    records.sort_by(|a, b| {
        a.divisor_degree
            .cmp(&b.divisor_degree)
            .then_with(|| a.quotient_coords.cmp(&b.quotient_coords))
    });
}

/// Sequential scan of the whole box; canonical output order (degree, then
/// lexicographic coordinates).
pub fn enumerate_sequential(
    ctx: &PolarizedContext,
    pns: &PolarizedNS,
    query: &SearchQuery,
) -> Vec<DivisorRecord> {
    assert_eq!(ctx.n(), pns.n(), "context and lattice dimension must agree");
    let rank = pns.quotient_rank();
    if rank == 0 {
        return Vec::new();
    }
    let forms = quotient_forms(ctx, pns);
    let b = query.coord_bound;
    let mut out = Vec::new();
    for first in -b..=b {
        scan_slice(rank, b, first, |coords| {
            if let Some(rec) = evaluate_candidate(ctx, pns, query, &forms, coords) {
                out.push(rec);
            }
        });
    }
    sort_records(&mut out);
    out
}

/// Box scan, partitioned by first coordinate across rayon workers when the
/// `parallel` feature is enabled. The env var `NS_DIVISOR_THREADS` caps the
/// worker count. Output is identical to [`enumerate_sequential`].
#[cfg(feature = "parallel")]
pub fn enumerate(
    ctx: &PolarizedContext,
    pns: &PolarizedNS,
    query: &SearchQuery,
) -> Vec<DivisorRecord> {
    use rayon::prelude::*;
    assert_eq!(ctx.n(), pns.n(), "context and lattice dimension must agree");
    let rank = pns.quotient_rank();
    if rank == 0 {
        return Vec::new();
    }
    let forms = quotient_forms(ctx, pns);
    let b = query.coord_bound;
    let mut records: Vec<DivisorRecord> = in_configured_pool(|| {
        (-b..=b)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut out = Vec::new();
                scan_slice(rank, b, first, |coords| {
                    if let Some(rec) = evaluate_candidate(ctx, pns, query, &forms, coords) {
                        out.push(rec);
                    }
                });
                out
            })
            .collect()
    });
    sort_records(&mut records);
    records
}

#[cfg(not(feature = "parallel"))]
pub fn enumerate(
    ctx: &PolarizedContext,
    pns: &PolarizedNS,
    query: &SearchQuery,
) -> Vec<DivisorRecord> {
    enumerate_sequential(ctx, pns, query)
}

#[cfg(feature = "parallel")]
fn in_configured_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    use std::sync::OnceLock;
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    let pool = POOL.get_or_init(|| {
        std::env::var("NS_DIVISOR_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .map(|k| {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .expect("worker pool")
            })
    });
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}
