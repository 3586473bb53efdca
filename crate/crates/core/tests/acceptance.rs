//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time. Runtime budgets are enforced in optimized builds; debug
//! builds check correctness only. Run with
//! `cargo test --release --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use nsdivisor::criteria;
use nsdivisor::exterior::{pair_index, TwoForm};
use nsdivisor::intersection::{
    coefficient_symbols, evaluate_symbolic, q_symbolic, PolarizedContext,
};
use nsdivisor::linalg::{self, IntMatrix};
use nsdivisor::nslattice::{normalized_quotient_coords, ns_polynomial_constraints, PolarizedNS};
use nsdivisor::scalars::{rational_int, Monomial, PolyScalar, Rational};
use nsdivisor::search::{
    self, congruence_filter, divisibility_predicate, enumerate, is_primitive, xr_closed_form,
    SearchQuery,
};

use common::*;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monomial over the a_ij coefficient table from (i, j, exponent) entries.
fn coeff_monomial(n: usize, table_len: usize, entries: &[(usize, usize, u32)]) -> Monomial {
    let mut e = vec![0u32; table_len];
    for &(i, j, p) in entries {
        e[pair_index(n, i, j)] = p;
    }
    Monomial::from_exponents(e)
}

#[test]
fn criterion_1_symbolic_q_forms() {
    let started = Instant::now();
    let q2 = q_symbolic(3, 2).unwrap();
    let q3 = q_symbolic(3, 3).unwrap();
    let table = coefficient_symbols(3);
    let len = table.len();
    let m = |entries: &[(usize, usize, u32)]| coeff_monomial(3, len, entries);

    // The quadratic form, all 12 monomials.
    let q2_terms: Vec<(Vec<(usize, usize, u32)>, i64)> = vec![
        (vec![(1, 2, 1), (4, 5, 1)], 12),
        (vec![(1, 3, 1), (4, 6, 1)], 12),
        (vec![(1, 4, 2)], 4),
        (vec![(1, 4, 1), (2, 5, 1)], -4),
        (vec![(1, 4, 1), (3, 6, 1)], -4),
        (vec![(1, 5, 1), (2, 4, 1)], 12),
        (vec![(1, 6, 1), (3, 4, 1)], 12),
        (vec![(2, 3, 1), (5, 6, 1)], 12),
        (vec![(2, 5, 2)], 4),
        (vec![(2, 5, 1), (3, 6, 1)], -4),
        (vec![(2, 6, 1), (3, 5, 1)], 12),
        (vec![(3, 6, 2)], 4),
    ];
    let expected_q2 = PolyScalar::from_terms(
        &table,
        q2_terms.iter().map(|(e, c)| (m(e), rational_int(*c))),
    );
    assert_eq!(q2, expected_q2, "q_2 expansion");
    assert_eq!(q2.num_terms(), 12);

    // The cubic form, all 36 monomials.
    let q3_terms: Vec<(Vec<(usize, usize, u32)>, i64)> = vec![
        (vec![(1, 2, 1), (1, 4, 1), (4, 5, 1)], 36),
        (vec![(1, 2, 1), (2, 5, 1), (4, 5, 1)], 36),
        (vec![(1, 2, 1), (3, 4, 1), (5, 6, 1)], -108),
        (vec![(1, 2, 1), (3, 5, 1), (4, 6, 1)], 108),
        (vec![(1, 2, 1), (3, 6, 1), (4, 5, 1)], -72),
        (vec![(1, 3, 1), (1, 4, 1), (4, 6, 1)], 36),
        (vec![(1, 3, 1), (2, 4, 1), (5, 6, 1)], 108),
        (vec![(1, 3, 1), (2, 5, 1), (4, 6, 1)], -72),
        (vec![(1, 3, 1), (2, 6, 1), (4, 5, 1)], 108),
        (vec![(1, 3, 1), (3, 6, 1), (4, 6, 1)], 36),
        (vec![(1, 4, 3)], 8),
        (vec![(1, 4, 2), (2, 5, 1)], -12),
        (vec![(1, 4, 2), (3, 6, 1)], -12),
        (vec![(1, 4, 1), (1, 5, 1), (2, 4, 1)], 36),
        (vec![(1, 4, 1), (1, 6, 1), (3, 4, 1)], 36),
        (vec![(1, 4, 1), (2, 3, 1), (5, 6, 1)], -72),
        (vec![(1, 4, 1), (2, 5, 2)], -12),
        (vec![(1, 4, 1), (2, 5, 1), (3, 6, 1)], 48),
        (vec![(1, 4, 1), (2, 6, 1), (3, 5, 1)], -72),
        (vec![(1, 4, 1), (3, 6, 2)], -12),
        (vec![(1, 5, 1), (2, 3, 1), (4, 6, 1)], 108),
        (vec![(1, 5, 1), (2, 4, 1), (2, 5, 1)], 36),
        (vec![(1, 5, 1), (2, 4, 1), (3, 6, 1)], -72),
        (vec![(1, 5, 1), (2, 6, 1), (3, 4, 1)], 108),
        (vec![(1, 6, 1), (2, 3, 1), (4, 5, 1)], -108),
        (vec![(1, 6, 1), (2, 4, 1), (3, 5, 1)], 108),
        (vec![(1, 6, 1), (2, 5, 1), (3, 4, 1)], -72),
        (vec![(1, 6, 1), (3, 4, 1), (3, 6, 1)], 36),
        (vec![(2, 3, 1), (2, 5, 1), (5, 6, 1)], 36),
        (vec![(2, 3, 1), (3, 6, 1), (5, 6, 1)], 36),
        (vec![(2, 5, 3)], 8),
        (vec![(2, 5, 2), (3, 6, 1)], -12),
        (vec![(2, 5, 1), (2, 6, 1), (3, 5, 1)], 36),
        (vec![(2, 5, 1), (3, 6, 2)], -12),
        (vec![(2, 6, 1), (3, 5, 1), (3, 6, 1)], 36),
        (vec![(3, 6, 3)], 8),
    ];
    let expected_q3 = PolyScalar::from_terms(
        &table,
        q3_terms.iter().map(|(e, c)| (m(e), rational_int(*c))),
    );
    assert_eq!(q3, expected_q3, "q_3 expansion");
    assert_eq!(q3.num_terms(), 36);

    // spot anchors
    assert_eq!(q2.coefficient(&m(&[(1, 2, 1), (4, 5, 1)])), rational_int(12));
    assert_eq!(q2.coefficient(&m(&[(1, 4, 2)])), rational_int(4));
    assert_eq!(q2.coefficient(&m(&[(1, 4, 1), (2, 5, 1)])), rational_int(-4));
    assert_eq!(q3.coefficient(&m(&[(1, 4, 3)])), rational_int(8));
    assert_eq!(
        q3.coefficient(&m(&[(1, 2, 1), (3, 4, 1), (5, 6, 1)])),
        rational_int(-108)
    );
    assert_eq!(
        q3.coefficient(&m(&[(1, 4, 1), (2, 5, 1), (3, 6, 1)])),
        rational_int(48)
    );
    pass("1 symbolic-q-forms", started, Duration::from_secs(1));
}

#[test]
fn criterion_2_constraint_row_space() {
    let started = Instant::now();
    let tau = generic_tau();
    let mine = ns_polynomial_constraints(&tau);
    assert_eq!(mine.len(), 6, "six polynomial constraint rows for n = 3");

    let table = tau.table();
    let p = |s: &str| PolyScalar::parse(table, s).unwrap();
    let d1223 = "(t12*t23 - t13*t22)";
    let d1233 = "(t12*t33 - t13*t23)";
    let d2233 = "(t22*t33 - t23^2)";
    let d1123 = "(t11*t23 - t12*t13)";
    let d1133 = "(t11*t33 - t13^2)";
    let d1122 = "(t11*t22 - t12^2)";
    let det = "(t11*t22*t33 - t11*t23^2 - t12^2*t33 + 2*t12*t13*t23 - t13^2*t22)";

    // the six displayed equations, as rows over the 14 reduced coordinates
    let rows_b: Vec<Vec<String>> = vec![
        vec![
            "0".into(), "0".into(), "0".into(), "0".into(), "0".into(),
            "1".into(), "-t13".into(), "-t23".into(), "-t33".into(),
            "t12".into(), "t22".into(),
            d1223.into(), d1233.into(), d2233.into(),
        ],
        vec![
            "0".into(), "1".into(), "-t13".into(), "-t23".into(), "-t33".into(),
            "0".into(), "0".into(), "0".into(), "0".into(),
            "t11".into(), "t12".into(),
            d1123.into(), d1133.into(), d1233.into(),
        ],
        vec![
            "1".into(), "0".into(), "-t12".into(), "-t22".into(), "-t23".into(),
            "0".into(), "t11".into(), "t12".into(), "t13".into(),
            "0".into(), "0".into(),
            d1122.into(), d1123.into(), d1223.into(),
        ],
        vec![
            "t13".into(), "-t12".into(), "0".into(), d1223.into(), d1233.into(),
            "t11".into(), "0".into(), format!("-{d1123}"), format!("-{d1133}"),
            "0".into(), d1122.into(),
            "0".into(), "0".into(), det.into(),
        ],
        vec![
            "-t23".into(), "t22".into(), d1223.into(), "0".into(), format!("-{d2233}"),
            "-t12".into(), format!("-{d1123}"), "0".into(), d1233.into(),
            d1122.into(), "0".into(),
            "0".into(), det.into(), "0".into(),
        ],
        vec![
            "t33".into(), "-t23".into(), format!("-{d1233}"), format!("-{d2233}"), "0".into(),
            "t13".into(), d1133.into(), d1233.into(), "0".into(),
            format!("-{d1123}"), format!("-{d1223}"),
            det.into(), "0".into(), "0".into(),
        ],
    ];

    // pull the 14-coordinate rows back to the 15 ambient coordinates:
    // slots map straight across except a_{3,6}, whose coefficient is
    // -(coeff of b3) - (coeff of b8) from the substitutions
    // b3 = a14 - a36, b8 = a25 - a36.
    let pulled: Vec<Vec<PolyScalar>> = rows_b
        .iter()
        .map(|row| {
            let parsed: Vec<PolyScalar> = row.iter().map(|s| p(s)).collect();
            let mut out = Vec::with_capacity(15);
            for k in 0..15 {
                if k == 11 {
                    out.push((&parsed[2].clone().neg() - &parsed[7]).clone());
                } else {
                    let bk = if k < 11 { k } else { k - 1 };
                    out.push(parsed[bk].clone());
                }
            }
            out
        })
        .collect();

    let rank_mine = linalg::poly_rank(&mine);
    let rank_paper = linalg::poly_rank(&pulled);
    let mut stacked = mine.clone();
    stacked.extend(pulled.iter().cloned());
    let rank_both = linalg::poly_rank(&stacked);
    assert_eq!(rank_mine, 3, "constraint rows have rank 3 over the fraction field");
    assert_eq!(rank_paper, 3);
    assert_eq!(rank_both, 3, "row spaces coincide");
    pass("2 constraint-row-space", started, Duration::from_secs(10));
}

#[test]
fn criterion_3_family_lattice() {
    let started = Instant::now();
    let pns = PolarizedNS::from_period_matrix(&f3_tau()).unwrap();
    assert_eq!(pns.rank(), 6, "NS rank");
    assert_eq!(pns.quotient_rank(), 5, "quotient rank");

    // quotient lattice (image in the 14 reduced coordinates, which kill
    // exactly the theta line) equals the span of the reference basis
    let projected: Vec<Vec<i64>> = pns
        .ns_basis()
        .iter()
        .map(|row| normalized_quotient_coords(3, row))
        .collect();
    let computed = IntMatrix::from_i64_rows(&projected, 14);
    let reference = IntMatrix::from_i64_rows(&reference_quotient_basis_14(), 14);
    assert!(
        linalg::lattice_equal(&computed, &reference),
        "quotient lattices agree by double inclusion"
    );
    pass("3 family-lattice", started, Duration::from_secs(5));
}

fn q2_display(v: &[i64]) -> i128 {
    let (a, b, c, d, e) = (v[0] as i128, v[1] as i128, v[2] as i128, v[3] as i128, v[4] as i128);
    108 * a * a + 16 * b * b + 36 * c * c + 48 * d * d + 16 * e * e
        + 72 * a * b + 96 * a * c + 12 * a * d + 12 * a * e + 24 * b * c
        + 12 * b * d - 4 * b * e - 24 * c * d + 24 * c * e - 48 * d * e
}

fn q3_display(v: &[i64]) -> i128 {
    let (a, b, c, d, e) = (v[0] as i128, v[1] as i128, v[2] as i128, v[3] as i128, v[4] as i128);
    576 * e * a * d - 504 * b * c * d + 936 * c * e * a + 24 * e * e * b + 24 * e * b * b
        - 504 * b * a * d - 1080 * c * a * d + 576 * c * e * d + 360 * b * a * e
        + 360 * b * c * e - 144 * b * c * a - 64 * e * e * e - 64 * b * b * b
        + 216 * b * c * c - 72 * b * d * d + 216 * c * c * e - 144 * c * e * e
        - 288 * e * d * d + 288 * d * e * e - 72 * a * e * e + 216 * c * c * c
        + 648 * e * a * a + 648 * c * a * a + 864 * c * c * a - 216 * c * c * d
        - 432 * c * d * d - 648 * a * a * d - 648 * d * d * a - 432 * a * b * b
        - 144 * b * b * c - 72 * d * b * b - 648 * b * a * a
}

#[test]
fn criterion_4_family_forms_in_five_coordinates() {
    let started = Instant::now();
    let ctx = ctx3();
    let pns = f3_reference_pns();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for _ in 0..200 {
        let v: Vec<i64> = (0..5).map(|_| rng.gen_range(-5i64..=5)).collect();
        let lift = pns.lift(&v);
        let q2 = ctx.q_form(&lift, 2).unwrap();
        let q3 = ctx.q_form(&lift, 3).unwrap();
        assert_eq!(q2, Rational::from_integer(q2_display(&v).into()), "q2 at {v:?}");
        assert_eq!(q3, Rational::from_integer(q3_display(&v).into()), "q3 at {v:?}");
    }
    pass("4 family-forms-5-coords", started, Duration::from_secs(10));
}

#[test]
fn criterion_5_divisor_table() {
    let started = Instant::now();
    let ctx = ctx3();
    let pns = f3_reference_pns();
    let records = enumerate(&ctx, &pns, &SearchQuery::new(3, 6));
    assert_eq!(records.len(), 13, "exactly thirteen classes");

    let mut found: Vec<(Vec<i64>, u64, u64)> = records
        .iter()
        .map(|r| {
            (
                r.quotient_coords.clone(),
                r.divisor_degree,
                r.complement_degree.expect("complement degree is integral"),
            )
        })
        .collect();
    let mut expected = expected_divisor_table();
    found.sort();
    expected.sort();
    assert_eq!(found, expected, "the divisor table matches as a set");

    let fours = records.iter().filter(|r| r.divisor_degree == 4).count();
    let sixes = records.iter().filter(|r| r.divisor_degree == 6).count();
    assert_eq!((fours, sixes), (9, 4));
    for r in &records {
        let expect_q = vec![
            (r.divisor_degree as i128).pow(2),
            -(r.divisor_degree as i128).pow(3),
        ];
        assert_eq!(r.q_values, expect_q);
    }
    pass("5 divisor-table", started, Duration::from_secs(1));
}

#[test]
fn criterion_6_cubic_form_is_indispensable() {
    let started = Instant::now();
    let ctx = ctx3();
    let pns = PolarizedNS::from_period_matrix(&product_tau()).unwrap();
    for k in 1i64..=5 {
        // -k*D1 + k(k+1)*D2 + (k+1)*D3 with D_i = -dx_i ^ dx_{i+3}
        let alpha = TwoForm::from_pairs(
            3,
            &[(1, 4, k), (2, 5, -k * (k + 1)), (3, 6, -(k + 1))],
        )
        .unwrap();
        let d = 2 * (k * k + k + 1);
        assert_eq!(ctx.degree(&alpha), d, "degree 2(k^2+k+1)");
        assert_eq!(ctx.mixed_power(&alpha, 2).unwrap(), 0, "(alpha^2 . theta) = 0");

        // the raw triple self-intersection, pinned by the independent oracle
        let cube = ctx.mixed_power(&alpha, 3).unwrap();
        assert_eq!(cube, oracle_intersection(3, &[&alpha, &alpha, &alpha]));
        assert_eq!(cube, -6 * (k as i128) * (k as i128) * ((k + 1) as i128).pow(2));

        // q2 is the perfect square deg^2, but q3 misses -deg^3
        let q2 = ctx.q_form(&alpha, 2).unwrap();
        assert_eq!(q2, Rational::from_integer((d * d).into()));
        let q3 = ctx.q_form(&alpha, 3).unwrap();
        assert_ne!(q3, Rational::from_integer((-d * d * d).into()));

        // so the class fails the abelian-divisor target at its own degree
        let q = pns.project(alpha.coeffs()).unwrap();
        assert!(!search::satisfies_target(&ctx, &pns, &q, d as u64));
    }
    pass("6 cubic-form-indispensable", started, Duration::from_secs(5));
}

#[test]
fn criterion_7_property_suites() {
    let started = Instant::now();

    // (Theta^n) = n! and q_r(theta) = 0 for 2 <= r <= n <= 6
    for n in 1..=6usize {
        let ctx = PolarizedContext::standard(n);
        assert_eq!(ctx.theta_top() as i128, (1..=n as i128).product::<i128>());
        for r in 2..=n {
            assert!(ctx.q_form(ctx.theta(), r).unwrap().is_zero());
        }
    }

    // theta-shift invariance, 500 seeded cases
    let ctx = ctx3();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for _ in 0..500 {
        let coeffs: Vec<i64> = (0..15).map(|_| rng.gen_range(-6i64..=6)).collect();
        let w = TwoForm::from_coeffs(3, coeffs).unwrap();
        let m = rng.gen_range(-5i64..=5);
        let shifted = w.add_scaled(ctx.theta(), m);
        for r in 2..=3 {
            assert_eq!(ctx.q_form(&w, r).unwrap(), ctx.q_form(&shifted, r).unwrap());
        }
    }

    // square-zero classes: q_r = (-1)^r deg^r on all +- coordinate blades
    for i in 1..=6usize {
        for j in i + 1..=6 {
            for s in [1i64, -1] {
                let w = TwoForm::from_pairs(3, &[(i, j, s)]).unwrap();
                let d = ctx.degree(&w);
                for r in 2..=3u32 {
                    let sign = if r % 2 == 0 { 1 } else { -1 };
                    assert_eq!(
                        ctx.q_form(&w, r as usize).unwrap(),
                        Rational::from_integer((sign * d.pow(r)).into())
                    );
                }
            }
        }
    }

    // degree closed form equals the wedge computation, 500 seeded cases
    for _ in 0..500 {
        let coeffs: Vec<i64> = (0..15).map(|_| rng.gen_range(-9i64..=9)).collect();
        let w = TwoForm::from_coeffs(3, coeffs).unwrap();
        assert_eq!(ctx.degree(&w) as i128, ctx.mixed_power(&w, 1).unwrap());
    }

    // divisibility predicate vs brute force
    for n in 2u32..=40 {
        let mut fact = num_bigint::BigInt::one();
        for i in 1..=n as i64 {
            fact *= i;
        }
        for m in 2i64..=40 {
            for sign in [1i64, -1] {
                let brute = (&fact % num_bigint::BigInt::from(sign * m).pow(n - 1)).is_zero();
                assert_eq!(divisibility_predicate(sign * m, n).unwrap(), brute);
            }
        }
    }

    // closed form x_r vs its recursion
    fn xr_recursive(d: i64, k: i64, r: u32) -> i128 {
        fn binom(n: u32, k: u32) -> i128 {
            let mut acc: i128 = 1;
            for i in 0..k {
                acc = acc * (n - i) as i128 / (i + 1) as i128;
            }
            acc
        }
        let sign = |p: u32| if p % 2 == 0 { 1i128 } else { -1 };
        if r == 2 {
            return (d as i128).pow(2) - (k as i128).pow(2);
        }
        let mut acc = (r as i128 - 1) * sign(r) * ((d as i128).pow(r) - (k as i128).pow(r));
        for m in 2..r {
            acc += binom(r, m) * sign(r - m + 1) * (d as i128).pow(r - m) * xr_recursive(d, k, m);
        }
        acc
    }
    for r in 2u32..=8 {
        for d in -10i64..=10 {
            for k in -10i64..=10 {
                assert_eq!(xr_closed_form(d, k, r), xr_recursive(d, k, r));
            }
        }
    }

    // kernel saturation: elementary divisors of every computed basis are 1
    for tau in [f3_tau(), product_tau(), generic_tau()] {
        let pns = PolarizedNS::from_period_matrix(&tau).unwrap();
        let mat = IntMatrix::from_i64_rows(&pns.ns_basis().to_vec(), 15);
        let smith = linalg::smith_normal_form(&mat);
        assert_eq!(smith.rank, pns.rank());
        assert!(smith.elementary_divisors().iter().all(|d| d.is_one()));
    }

    // primitivity of every emitted divisor class, and no multiples appear
    // when the box doubles
    let pns = f3_reference_pns();
    let small = enumerate(&ctx, &pns, &SearchQuery::new(3, 6));
    let doubled = enumerate(&ctx, &pns, &SearchQuery::new(6, 6));
    assert!(small.iter().all(|r| is_primitive(&r.quotient_coords)));
    assert!(doubled.iter().all(|r| is_primitive(&r.quotient_coords)));
    for rec in &doubled {
        for prev in &small {
            for m in 2..=6i64 {
                let scaled: Vec<i64> = prev.quotient_coords.iter().map(|&c| m * c).collect();
                assert_ne!(rec.quotient_coords, scaled, "a proper multiple was emitted");
            }
        }
    }
    // every emitted record passes the congruence filter and the target check
    for rec in &small {
        let lift = pns.lift(&rec.quotient_coords);
        assert!(congruence_filter(&ctx, &lift, rec.divisor_degree));
        assert!(search::satisfies_target(
            &ctx,
            &pns,
            &rec.quotient_coords,
            rec.divisor_degree
        ));
    }

    // symbolic expansions agree with the numeric route at random points, n = 3, 4
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0407);
    for n in [3usize, 4] {
        let ctxn = PolarizedContext::standard(n);
        let rmax = if n == 4 { 3 } else { n };
        for r in 2..=rmax {
            let q = q_symbolic(n, r).unwrap();
            for _ in 0..10 {
                let coeffs: Vec<i64> = (0..q.table().len())
                    .map(|_| rng.gen_range(-3i64..=3))
                    .collect();
                let w = TwoForm::from_coeffs(n, coeffs.clone()).unwrap();
                assert_eq!(evaluate_symbolic(&q, &coeffs), ctxn.q_form(&w, r).unwrap());
            }
        }
    }

    pass("7 property-suites", started, Duration::from_secs(30));
}

#[test]
fn criterion_8_classification_endpoints() {
    let started = Instant::now();
    let ctx = ctx3();

    // product of three elliptic curves: splits, and is not a Jacobian
    let product = PolarizedNS::from_period_matrix(&product_tau()).unwrap();
    let split = criteria::splits_off_elliptic_factor(&ctx, &product, 2);
    assert!(split.is_some(), "product splits off an elliptic factor at B = 2");
    assert!(criteria::represents(&ctx, &product, &[4, -8], 2)
        .unwrap()
        .is_some());
    let report = criteria::jacobian_split_report_dim3(&ctx, &product, 2).unwrap();
    assert_eq!(report.verdicts[0].criterion, "is-jacobian");
    assert_eq!(report.verdicts[0].verdict, criteria::Verdict::Fails);

    // the family: (4,-8) absent up to B = 5, at least two primitive
    // (d^2, -d^3) classes with d > 2
    let family = f3_reference_pns();
    assert!(criteria::represents(&ctx, &family, &[4, -8], 5)
        .unwrap()
        .is_none());
    let report = criteria::jacobian_split_report_dim3(&ctx, &family, 5).unwrap();
    assert_eq!(report.verdicts[0].verdict, criteria::Verdict::HoldsUpToBound);
    assert_eq!(report.verdicts[1].verdict, criteria::Verdict::Holds);
    assert!(report.verdicts[1].witnesses.len() >= 2);
    let distinct: std::collections::BTreeSet<&Vec<i64>> = report.verdicts[1]
        .witnesses
        .iter()
        .map(|w| &w.quotient_coords)
        .collect();
    assert_eq!(distinct.len(), report.verdicts[1].witnesses.len());

    // generic member: everything is empty
    let generic = PolarizedNS::from_period_matrix(&generic_tau()).unwrap();
    assert!(criteria::splits_off_elliptic_factor(&ctx, &generic, 5).is_none());
    assert!(criteria::represents(&ctx, &generic, &[4, -8], 5)
        .unwrap()
        .is_none());
    assert!(criteria::elliptic_covers(&ctx, &generic, 3, 5).unwrap().is_empty());

    // cover counts on the family at B = 3: nine of degree 2, four of degree 3
    let covers = criteria::elliptic_covers(&ctx, &family, 3, 3).unwrap();
    let k2 = covers.iter().filter(|(k, _)| *k == 2).count();
    let k3 = covers.iter().filter(|(k, _)| *k == 3).count();
    assert_eq!((k2, k3), (9, 4));
    assert!(
        !covers.iter().any(|(k, _)| *k == 1),
        "no degree-1 cover: the family does not split"
    );

    pass("8 classification-endpoints", started, Duration::from_secs(30));
}
