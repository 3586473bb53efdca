//! Exact linear algebra over ℤ and over polynomial rings.
//!
//! The integer side is built around a Smith normal form with both
//! transformation matrices, which powers saturated kernels, membership
//! solving and lattice comparisons. The polynomial side provides a
//! fraction-free (Bareiss) rank over the fraction field of a relation-free
//! polynomial ring, used for row-space comparisons of symbolic constraint
//! systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalars::PolyScalar;

/// Dense matrix over `BigInt`, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        IntMatrix { rows: nrows, cols, data }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    /// self * other
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * &other.data[k * other.cols + j];
                    out.data[i * other.cols + j] += v;
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form D = U·A·V with U, V unimodular; inverses tracked.
#[derive(Debug, Clone)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries d₁ | d₂ | ⋯ of the normal form.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form by alternating row/column gcd reduction.
/// Row operations update U (and inverse ops update U⁻¹); column operations
/// update V likewise, so D = U·A·V holds exactly throughout.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let mut d = a.clone();
    let (m, n) = (d.rows, d.cols);
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    let mut t = 0usize;
    while t < m.min(n) {
        // pick the nonzero pivot of smallest magnitude in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[(i, j)].is_zero()
                    && pivot
                        .map(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    let nq = -q.clone();
                    d.add_row_mul(i, t, &nq);
                    u.add_row_mul(i, t, &nq);
                    u_inv.add_col_mul(t, i, &q);
                }
                if !d[(i, t)].is_zero() {
                    // remainder smaller than pivot: swap it up and restart
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    u_inv.swap_cols(t, i);
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    let nq = -q.clone();
                    d.add_col_mul(j, t, &nq);
                    v.add_col_mul(j, t, &nq);
                    v_inv.add_row_mul(t, j, &q);
                }
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    v_inv.swap_rows(t, j);
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }
    let rank = t;

    // enforce the divisibility chain d_i | d_{i+1}: merge a violating pair
    // into one block (row_i += row_{i+1}) and re-reduce from position i.
    // Each fix strictly shrinks d_i to gcd(d_i, d_{i+1}), so this terminates.
    let mut i = 0;
    while i + 1 < rank {
        let a = d[(i, i)].clone();
        let b = d[(i + 1, i + 1)].clone();
        if (&b % &a).is_zero() {
            i += 1;
            continue;
        }
        d.add_row_mul(i, i + 1, &BigInt::one());
        u.add_row_mul(i, i + 1, &BigInt::one());
        u_inv.add_col_mul(i + 1, i, &(-BigInt::one()));
        reduce_block(&mut d, &mut u, &mut u_inv, &mut v, &mut v_inv, i);
        i = i.saturating_sub(1);
    }

    Smith { d, u, u_inv, v, v_inv, rank }
}

/// Re-reduce the trailing block starting at `t` after a divisibility fix-up.
fn reduce_block(
    d: &mut IntMatrix,
    u: &mut IntMatrix,
    u_inv: &mut IntMatrix,
    v: &mut IntMatrix,
    v_inv: &mut IntMatrix,
    t: usize,
) {
    let (m, n) = (d.rows, d.cols);
    let mut s = t;
    while s < m.min(n) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in s..m {
            for j in s..n {
                if !d[(i, j)].is_zero()
                    && pivot
                        .map(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(s, pi);
        u.swap_rows(s, pi);
        u_inv.swap_cols(s, pi);
        d.swap_cols(s, pj);
        v.swap_cols(s, pj);
        v_inv.swap_rows(s, pj);
        loop {
            let mut clean = true;
            for i in s + 1..m {
                if d[(i, s)].is_zero() {
                    continue;
                }
                let q = d[(i, s)].div_floor(&d[(s, s)]);
                if !q.is_zero() {
                    let nq = -q.clone();
                    d.add_row_mul(i, s, &nq);
                    u.add_row_mul(i, s, &nq);
                    u_inv.add_col_mul(s, i, &q);
                }
                if !d[(i, s)].is_zero() {
                    d.swap_rows(s, i);
                    u.swap_rows(s, i);
                    u_inv.swap_cols(s, i);
                    clean = false;
                }
            }
            for j in s + 1..n {
                if d[(s, j)].is_zero() {
                    continue;
                }
                let q = d[(s, j)].div_floor(&d[(s, s)]);
                if !q.is_zero() {
                    let nq = -q.clone();
                    d.add_col_mul(j, s, &nq);
                    v.add_col_mul(j, s, &nq);
                    v_inv.add_row_mul(s, j, &q);
                }
                if !d[(s, j)].is_zero() {
                    d.swap_cols(s, j);
                    v.swap_cols(s, j);
                    v_inv.swap_rows(s, j);
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if d[(s, s)].is_negative() {
            d.negate_row(s);
            u.negate_row(s);
            u_inv.negate_col(s);
        }
        s += 1;
    }
}

/// Basis of {x ∈ ℤⁿ : A·x = 0} as rows; automatically saturated
/// (columns of V beyond the rank).
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a);
    let n = a.cols;
    (s.rank..n)
        .map(|j| (0..n).map(|i| s.v[(i, j)].clone()).collect())
        .collect()
}

/// Rank of an integer matrix.
pub fn int_rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank
}

/// Solve y·A = b over ℤ for a row vector y, if a solution exists.
/// With D = U·A·V: y·A = b ⇔ (y·U⁻¹)·D = b·V, solved diagonally.
pub fn solve_left(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.cols, "length mismatch");
    let s = smith_normal_form(a);
    let bv = IntMatrix::from_rows(vec![b.to_vec()], b.len()).mul(&s.v);
    let mut w = vec![BigInt::zero(); a.rows];
    for j in 0..a.cols {
        let target = &bv[(0, j)];
        if j < s.rank {
            let dj = &s.d[(j, j)];
            let (q, r) = target.div_rem(dj);
            if !r.is_zero() {
                return None;
            }
            w[j] = q;
        } else if !target.is_zero() {
            return None;
        }
    }
    // y = w · U
    let wm = IntMatrix::from_rows(vec![w], a.rows);
    let y = wm.mul(&s.u);
    Some(y.row_vec(0))
}

/// Is `v` in the ℤ-span of the rows of `a`?
pub fn in_row_lattice(a: &IntMatrix, v: &[BigInt]) -> bool {
    solve_left(a, v).is_some()
}

/// ℤ-lattice equality of two row spans, by double inclusion.
pub fn lattice_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.cols != b.cols {
        return false;
    }
    (0..a.rows).all(|i| in_row_lattice(b, a.row(i)))
        && (0..b.rows).all(|i| in_row_lattice(a, b.row(i)))
}

/// Complete a primitive row vector to a unimodular matrix whose first row is
/// the vector. Returns (C, C⁻¹).
pub fn complete_primitive_row(x: &[BigInt]) -> (IntMatrix, IntMatrix) {
    let k = x.len();
    let xm = IntMatrix::from_rows(vec![x.to_vec()], k);
    let s = smith_normal_form(&xm);
    assert_eq!(s.rank, 1, "zero vector cannot be completed");
    assert!(
        s.d[(0, 0)].is_one(),
        "vector must be primitive (gcd 1), got content {}",
        s.d[(0, 0)]
    );
    // D = U·x·V with U = (±1), so x = ±(first row of V⁻¹); fix the sign.
    let mut c = s.v_inv;
    let mut c_inv = s.v;
    if !s.u[(0, 0)].is_one() {
        c.negate_row(0);
        c_inv.negate_col(0);
    }
    debug_assert_eq!(c.row(0), x);
    (c, c_inv)
}

/// Fraction-free Gaussian rank (Bareiss) of a matrix of polynomials over a
/// relation-free symbol table: the rank over the fraction field.
pub fn poly_rank(rows: &[Vec<PolyScalar>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<PolyScalar>> = rows.to_vec();
    let mut rank = 0usize;
    let mut prev_pivot: Option<PolyScalar> = None;
    let mut col = 0usize;
    while rank < m.len() && col < ncols {
        // find a row with nonzero entry in this column
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        let pivot = pivot_row[col].clone();
        for i in rank + 1..m.len() {
            // Bareiss step: row_i = (pivot*row_i - m[i][col]*pivot_row) / prev_pivot
            let factor = m[i][col].clone();
            for j in col..ncols {
                let a = &(&pivot * &m[i][j]) - &(&factor * &pivot_row[j]);
                m[i][j] = match &prev_pivot {
                    Some(pp) => a.div_exact(pp).expect("Bareiss division is exact"),
                    None => a,
                };
            }
        }
        prev_pivot = Some(pivot);
        rank += 1;
        col += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{PolyScalar, SymbolTable};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        IntMatrix::from_i64_rows(
            &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
            cols,
        )
    }

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        // D = U A V
        let uav = s.u.mul(a).mul(&s.v);
        assert_eq!(uav, s.d, "U*A*V = D");
        // inverses
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        // diagonal & divisibility chain
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero(), "off-diagonal at ({i},{j})");
                }
            }
        }
        use num_traits::Signed;
        for i in 0..s.rank {
            assert!(s.d[(i, i)].is_positive());
            if i + 1 < s.rank {
                assert!(
                    (&s.d[(i + 1, i + 1)] % &s.d[(i, i)]).is_zero(),
                    "divisibility chain"
                );
            }
        }
    }

    #[test]
    fn snf_small_examples() {
        check_snf(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]));
        check_snf(&m(&[&[1, 0], &[0, 1]]));
        check_snf(&m(&[&[0, 0], &[0, 0]]));
        check_snf(&m(&[&[6, 10, 15]]));
        check_snf(&m(&[&[2, 0], &[0, 3], &[0, 0]]));
    }

    #[test]
    fn kernel_is_saturated() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        let km = IntMatrix::from_rows(k, 3);
        let s = smith_normal_form(&km);
        assert!(s.elementary_divisors().iter().all(|d| d.is_one()));
        // kernel rows actually annihilate
        let prod = a.mul(&transpose(&km));
        for r in 0..prod.rows() {
            for c in 0..prod.cols() {
                assert!(prod[(r, c)].is_zero());
            }
        }
    }

    fn transpose(a: &IntMatrix) -> IntMatrix {
        let mut t = IntMatrix::zero(a.cols(), a.rows());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                t[(j, i)] = a[(i, j)].clone();
            }
        }
        t
    }

    #[test]
    fn solve_left_membership() {
        let a = m(&[&[2, 0, 0], &[0, 3, 0]]);
        let y = solve_left(&a, &[BigInt::from(4), BigInt::from(3), BigInt::from(0)]).unwrap();
        assert_eq!(y, vec![BigInt::from(2), BigInt::from(1)]);
        assert!(solve_left(&a, &[BigInt::from(1), BigInt::from(0), BigInt::from(0)]).is_none());
        assert!(solve_left(&a, &[BigInt::from(0), BigInt::from(0), BigInt::from(1)]).is_none());
    }

    #[test]
    fn lattice_equality_examples() {
        let a = m(&[&[1, 0], &[0, 2]]);
        let b = m(&[&[1, 2], &[1, -2], &[0, 2]]);
        assert!(lattice_equal(&a, &b));
        let c = m(&[&[1, 0], &[0, 1]]);
        assert!(!lattice_equal(&a, &c));
    }

    #[test]
    fn completion_of_primitive_rows() {
        for x in [vec![3i64, 5], vec![2, 3, 7], vec![0, 1, 0, 0], vec![-4, 9, 6]] {
            let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            let (c, c_inv) = complete_primitive_row(&xb);
            assert_eq!(c.row(0), &xb[..]);
            assert_eq!(c.mul(&c_inv), IntMatrix::identity(x.len()));
        }
    }

    #[test]
    #[should_panic(expected = "primitive")]
    fn completion_rejects_imprimitive() {
        let x: Vec<BigInt> = [2i64, 4].iter().map(|&v| BigInt::from(v)).collect();
        complete_primitive_row(&x);
    }

    #[test]
    fn poly_rank_examples() {
        let t = SymbolTable::free(&["x", "y"]);
        let p = |s: &str| PolyScalar::parse(&t, s).unwrap();
        // rank 2 over Q(x, y)
        let rows = vec![
            vec![p("x"), p("y"), p("0")],
            vec![p("0"), p("x"), p("y")],
            vec![p("x"), p("x + y"), p("y")],
        ];
        assert_eq!(poly_rank(&rows), 2);
        let rows2 = vec![vec![p("x*y"), p("x^2")], vec![p("y^2"), p("x*y")]];
        assert_eq!(poly_rank(&rows2), 1);
        assert_eq!(poly_rank(&[]), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn snf_random(rows in 1usize..5, cols in 1usize..5,
                      entries in proptest::collection::vec(-9i64..10, 25)) {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| entries[(i * cols + j) % entries.len()]).collect())
                .collect();
            let a = IntMatrix::from_i64_rows(&data, cols);
            check_snf(&a);
            // kernel annihilates
            for v in kernel_basis(&a) {
                for i in 0..rows {
                    let dot: BigInt = (0..cols).map(|j| &a[(i, j)] * &v[j]).sum();
                    prop_assert!(dot.is_zero());
                }
            }
        }
    }
}
