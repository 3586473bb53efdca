//! Shared fixtures for the integration and acceptance suites.
#![allow(dead_code)]

use std::time::{Duration, Instant};

use nsdivisor::exterior::{index_pairs, TwoForm};
use nsdivisor::intersection::PolarizedContext;
use nsdivisor::nslattice::{PeriodMatrix, PolarizedNS};
use nsdivisor::scalars::{PolyScalar, SymbolTable};

pub fn period_matrix(n: usize, names: &[&str], rows: &[&[&str]]) -> PeriodMatrix {
    let table = SymbolTable::free(names);
    let entries = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| PolyScalar::parse(&table, s).unwrap())
                .collect()
        })
        .collect();
    PeriodMatrix::new(n, table, entries).unwrap()
}

/// The one-parameter family s·((n+1)I − J) at n = 3.
pub fn f3_tau() -> PeriodMatrix {
    period_matrix(
        3,
        &["s"],
        &[
            &["3*s", "-s", "-s"],
            &["-s", "3*s", "-s"],
            &["-s", "-s", "3*s"],
        ],
    )
}

pub fn product_tau() -> PeriodMatrix {
    period_matrix(
        3,
        &["s1", "s2", "s3"],
        &[&["s1", "0", "0"], &["0", "s2", "0"], &["0", "0", "s3"]],
    )
}

pub fn generic_tau() -> PeriodMatrix {
    period_matrix(
        3,
        &["t11", "t12", "t13", "t22", "t23", "t33"],
        &[
            &["t11", "t12", "t13"],
            &["t12", "t22", "t23"],
            &["t13", "t23", "t33"],
        ],
    )
}

/// Ambient lifts (a_{3,6} = 0) of the reference quotient basis for the
/// family; the 14-coordinate rows with the (3,6) slot reinserted as 0.
pub fn reference_quotient_basis() -> Vec<Vec<i64>> {
    vec![
        vec![0, 0, 0, 1, 3, 0, 0, 0, 0, 3, 1, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0],
        vec![0, 0, 0, 1, 1, 0, 0, 0, -2, 0, -2, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0],
    ]
}

/// The 14-coordinate form of the same basis rows ((3,6) slot dropped).
pub fn reference_quotient_basis_14() -> Vec<Vec<i64>> {
    reference_quotient_basis()
        .into_iter()
        .map(|row| {
            let mut v = row;
            v.remove(11);
            v
        })
        .collect()
}

pub fn f3_reference_pns() -> PolarizedNS {
    PolarizedNS::from_parts(3, reference_quotient_basis()).unwrap()
}

pub fn ctx3() -> PolarizedContext {
    PolarizedContext::standard(3)
}

/// The expected divisor table over the reference basis:
/// (coordinates, divisor degree, complement degree).
pub fn expected_divisor_table() -> Vec<(Vec<i64>, u64, u64)> {
    vec![
        (vec![0, 0, 0, -1, -2], 4, 2),
        (vec![1, -1, -1, -1, -1], 4, 2),
        (vec![0, -1, 1, 0, -1], 4, 2),
        (vec![1, -2, -1, 0, 0], 4, 2),
        (vec![0, 1, 0, 0, 0], 4, 2),
        (vec![-1, 1, 1, 0, 0], 4, 2),
        (vec![0, 0, 0, 0, 1], 4, 2),
        (vec![0, 0, 0, 1, 1], 4, 2),
        (vec![-1, 2, 0, 1, 2], 4, 2),
        (vec![0, 0, 1, -1, -3], 6, 3),
        (vec![0, 0, -1, 0, 0], 6, 3),
        (vec![1, -3, 0, 0, 0], 6, 3),
        (vec![-1, 3, 0, 1, 3], 6, 3),
    ]
}

/// Independent intersection-number oracle: expand the product of 2-forms over
/// every choice of one (pair, coefficient) term per form and sum permutation
/// signs of the concatenated index sequences.
pub fn oracle_intersection(n: usize, forms: &[&TwoForm]) -> i128 {
    assert_eq!(forms.len(), n);
    let pairs = index_pairs(n);
    let supports: Vec<Vec<((usize, usize), i64)>> = forms
        .iter()
        .map(|f| {
            pairs
                .iter()
                .zip(f.coeffs())
                .filter(|(_, &c)| c != 0)
                .map(|(&p, &c)| (p, c))
                .collect()
        })
        .collect();
    if supports.iter().any(|s| s.is_empty()) {
        return 0;
    }
    fn perm_sign(seq: &[usize]) -> i128 {
        let mut seen = std::collections::BTreeSet::new();
        for &x in seq {
            if !seen.insert(x) {
                return 0;
            }
        }
        let mut inv = 0usize;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if seq[i] > seq[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }
    // sign of eta relative to the sorted top blade, by inversion count
    let eta_sign: i128 = {
        let mut seq = Vec::new();
        for i in 1..=n {
            seq.push(i);
            seq.push(i + n);
        }
        perm_sign(&seq)
    };
    let mut total: i128 = 0;
    let mut idx = vec![0usize; n];
    'outer: loop {
        let mut seq = Vec::with_capacity(2 * n);
        let mut coeff: i128 = 1;
        for (k, &i) in idx.iter().enumerate() {
            let ((a, b), c) = supports[k][i];
            seq.push(a);
            seq.push(b);
            coeff *= c as i128;
        }
        total += coeff * perm_sign(&seq);
        for k in (0..n).rev() {
            idx[k] += 1;
            if idx[k] < supports[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
            if k == 0 {
                break 'outer;
            }
        }
    }
    (-1i128).pow(n as u32) * eta_sign * total
}

/// Print the acceptance line and enforce the runtime budget in optimized
/// builds (debug builds check correctness only).
pub fn pass(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("ACCEPTANCE {criterion}: PASS ({elapsed:.2?})");
    if !cfg!(debug_assertions) {
        assert!(
            elapsed <= budget,
            "{criterion} exceeded its runtime budget {budget:?}: took {elapsed:.2?}"
        );
    }
}
