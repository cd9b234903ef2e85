//! Exact dense integer/rational matrices, Smith normal form with transform
//! accumulators, and inertia computation by congruent diagonalization.
//!
//! Everything here is arbitrary precision. These routines back the lattice
//! invariants, so no floating point is used anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Row-major dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Option<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    /// `self * v` for a column vector.
    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// First asymmetric entry, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (x, y) = (a * self.cols + j, b * self.cols + j);
            self.data.swap(x, y);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let (x, y) = (i * self.cols + a, i * self.cols + b);
            self.data.swap(x, y);
        }
    }

    /// row[a] += c * row[b]
    fn add_row(&mut self, a: usize, b: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = c * &self[(b, j)];
            self[(a, j)] += t;
        }
    }

    /// col[a] += c * col[b]
    fn add_col(&mut self, a: usize, b: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = c * &self[(i, b)];
            self[(i, a)] += t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let t = -self[(a, j)].clone();
            self[(a, j)] = t;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let t = -self[(i, a)].clone();
            self[(i, a)] = t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `p * m * q = diag(d)` with unimodular `p`, `q` and their
/// inverses accumulated alongside.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Invariant factors, nonnegative, each dividing the next, zeros last.
    pub diag: Vec<Int>,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    pub q_inv: IntMatrix,
}

/// Smith normal form of an arbitrary rectangular integer matrix.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut b = m.clone();
    let mut p = IntMatrix::identity(rows);
    let mut p_inv = IntMatrix::identity(rows);
    let mut q = IntMatrix::identity(cols);
    let mut q_inv = IntMatrix::identity(cols);

    // Elementary operation wrappers keeping all four accumulators in sync.
    macro_rules! row_add {
        ($a:expr, $b:expr, $c:expr) => {{
            let c: Int = $c;
            b.add_row($a, $b, &c);
            p.add_row($a, $b, &c);
            p_inv.add_col($b, $a, &(-c));
        }};
    }
    macro_rules! col_add {
        ($a:expr, $b:expr, $c:expr) => {{
            let c: Int = $c;
            b.add_col($a, $b, &c);
            q.add_col($a, $b, &c);
            q_inv.add_row($b, $a, &(-c));
        }};
    }

    let n = rows.min(cols);
    let mut k = 0;
    while k < n {
        // Locate a pivot: smallest nonzero absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !b[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| b[(i, j)].abs() < b[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        b.swap_rows(k, pi);
        p.swap_rows(k, pi);
        p_inv.swap_cols(k, pi);
        b.swap_cols(k, pj);
        q.swap_cols(k, pj);
        q_inv.swap_rows(k, pj);

        // Reduce row k and column k against the pivot until both are clear.
        loop {
            let mut dirty = false;
            for i in (k + 1)..rows {
                if !b[(i, k)].is_zero() {
                    let f = &b[(i, k)] / &b[(k, k)];
                    row_add!(i, k, -f);
                    if !b[(i, k)].is_zero() {
                        // Remainder left; swap it up as the smaller pivot.
                        b.swap_rows(k, i);
                        p.swap_rows(k, i);
                        p_inv.swap_cols(k, i);
                        dirty = true;
                    }
                }
            }
            for j in (k + 1)..cols {
                if !b[(k, j)].is_zero() {
                    let f = &b[(k, j)] / &b[(k, k)];
                    col_add!(j, k, -f);
                    if !b[(k, j)].is_zero() {
                        b.swap_cols(k, j);
                        q.swap_cols(k, j);
                        q_inv.swap_rows(k, j);
                        dirty = true;
                    }
                }
            }
            if !dirty
                && (k + 1..rows).all(|i| b[(i, k)].is_zero())
                && (k + 1..cols).all(|j| b[(k, j)].is_zero())
            {
                break;
            }
        }

        // Divisibility: fold in any entry the pivot does not divide.
        let mut fixed = false;
        'scan: for i in (k + 1)..rows {
            for j in (k + 1)..cols {
                if !(&b[(i, j)] % &b[(k, k)]).is_zero() {
                    row_add!(k, i, Int::one());
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue; // redo position k with the enlarged row
        }

        if b[(k, k)].is_negative() {
            b.negate_row(k);
            p.negate_row(k);
            p_inv.negate_col(k);
        }
        k += 1;
    }

    let diag = (0..n).map(|i| b[(i, i)].clone()).collect();
    SmithForm { diag, p, p_inv, q, q_inv }
}

/// Invariant factors only (`d1 | d2 | ...`, zeros for rank deficiency).
pub fn smith_invariants(m: &IntMatrix) -> Vec<Int> {
    smith_normal_form(m).diag
}

/// Row-major dense rational matrix, used for the few places that need exact
/// division (inertia, dual lattice data, projection centers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data.iter().map(|v| Rat::from(v.clone())).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Exact inverse by Gauss-Jordan; `None` for singular input.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.rows == self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            for j in 0..n {
                let (x, y) = (pivot * n + j, col * n + j);
                a.data.swap(x, y);
                inv.data.swap(x, y);
            }
            let d = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= d.clone();
                inv[(col, j)] /= d.clone();
            }
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    for j in 0..n {
                        let t = &f * &a[(col, j)];
                        a[(r, j)] -= t;
                        let t = &f * &inv[(col, j)];
                        inv[(r, j)] -= t;
                    }
                }
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Inertia `(n_plus, n_minus, n_zero)` of a symmetric integer matrix, computed
/// by exact congruent diagonalization over the rationals.
pub fn inertia(m: &IntMatrix) -> (usize, usize, usize) {
    assert!(m.is_square(), "inertia of non-square matrix");
    assert!(m.asymmetry().is_none(), "inertia of asymmetric matrix");
    let n = m.rows();
    let mut a = RatMatrix::from_int(m);
    let (mut plus, mut minus, mut zero) = (0usize, 0usize, 0usize);
    let mut k = 0;
    while k < n {
        if a[(k, k)].is_zero() {
            // Bring a nonzero entry onto the diagonal, congruently.
            if let Some(i) = ((k + 1)..n).find(|&i| !a[(i, i)].is_zero()) {
                for j in 0..n {
                    let (x, y) = (k * n + j, i * n + j);
                    a.data.swap(x, y);
                }
                for r in 0..n {
                    let (x, y) = (r * n + k, r * n + i);
                    a.data.swap(x, y);
                }
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_zero())
            {
                // All trailing diagonal zero: row_i += row_j (and symmetrically)
                // turns a(i,i) into 2*a(i,j) != 0, then swap into place.
                for c in 0..n {
                    let t = a[(j, c)].clone();
                    a[(i, c)] += t;
                }
                for r in 0..n {
                    let t = a[(r, j)].clone();
                    a[(r, i)] += t;
                }
                if i != k {
                    for c in 0..n {
                        let (x, y) = (k * n + c, i * n + c);
                        a.data.swap(x, y);
                    }
                    for r in 0..n {
                        let (x, y) = (r * n + k, r * n + i);
                        a.data.swap(x, y);
                    }
                }
            } else {
                zero += n - k;
                break;
            }
        }
        let d = a[(k, k)].clone();
        if d.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        for i in (k + 1)..n {
            if !a[(i, k)].is_zero() {
                let f = &a[(i, k)] / &d;
                for j in 0..n {
                    let t = &f * &a[(k, j)];
                    a[(i, j)] -= t;
                }
                for r in 0..n {
                    let t = &f * &a[(r, k)];
                    a[(r, i)] -= t;
                }
            }
        }
        k += 1;
    }
    (plus, minus, zero)
}

/// `floor(sqrt(r))` for a nonnegative rational.
pub fn rat_sqrt_floor(r: &Rat) -> Int {
    assert!(!r.is_negative(), "sqrt of negative rational");
    if r.is_zero() {
        return Int::zero();
    }
    // sqrt(p/q) = sqrt(pq)/q and floor(floor(x)/q) = floor(x/q) for q > 0,
    // so floor(sqrt(p/q)) = isqrt(pq) div q.
    let p = r.numer();
    let q = r.denom();
    let s = (p * q).sqrt();
    s / q
}

/// Largest integer `n` with `n <= c + sqrt(r)`; `r >= 0`.
pub fn floor_plus_sqrt(c: &Rat, r: &Rat) -> Int {
    let mut n = c.floor().to_integer() + rat_sqrt_floor(r);
    // Fix up by exact comparison: n <= c + sqrt(r)  <=>  n - c <= sqrt(r).
    let ok = |n: &Int| {
        let d = Rat::from(n.clone()) - c;
        !d.is_positive() || &d * &d <= *r
    };
    while ok(&(&n + 1)) {
        n += 1;
    }
    while !ok(&n) {
        n -= 1;
    }
    n
}

/// Smallest integer `n` with `n >= c - sqrt(r)`; `r >= 0`.
pub fn ceil_minus_sqrt(c: &Rat, r: &Rat) -> Int {
    let mut n = c.ceil().to_integer() - rat_sqrt_floor(r);
    let ok = |n: &Int| {
        let d = c - Rat::from(n.clone());
        !d.is_positive() || &d * &d <= *r
    };
    while ok(&(&n - 1)) {
        n -= 1;
    }
    while !ok(&n) {
        n += 1;
    }
    n
}

/// Rational upper bound on `sqrt(x)` (exact soundness; 2^-20 slack).
pub fn rat_sqrt_upper(x: &Rat) -> Rat {
    assert!(!x.is_negative(), "sqrt of negative rational");
    let scale = Int::one() << 40u32;
    let scaled = x * Rat::from(scale.clone());
    let root = rat_sqrt_floor(&scaled) + 1;
    Rat::new(root, Int::one() << 20u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn smith_of_identity() {
        let id = IntMatrix::identity(3);
        assert_eq!(smith_invariants(&id), vec![Int::from(1); 3]);
    }

    #[test]
    fn smith_of_hyperbolic_doubled() {
        let u2 = m(&[vec![0, 2], vec![2, 0]]);
        assert_eq!(smith_invariants(&u2), vec![Int::from(2), Int::from(2)]);
    }

    #[test]
    fn smith_of_diag_two() {
        let rows: Vec<Vec<i64>> = (0..9)
            .map(|i| (0..9).map(|j| if i == j { if i == 0 { 2 } else { -2 } } else { 0 }).collect())
            .collect();
        let g = m(&rows);
        assert_eq!(smith_invariants(&g), vec![Int::from(2); 9]);
    }

    #[test]
    fn smith_transforms_are_consistent() {
        let a = m(&[vec![-6, 111, -36, 6], vec![5, -672, 210, 74], vec![0, -255, 81, 24], vec![-7, 255, -81, -10]]);
        let snf = smith_normal_form(&a);
        assert_eq!(
            snf.diag,
            vec![Int::from(1), Int::from(3), Int::from(21), Int::from(0)]
        );
        // p * a * q must be the diagonal matrix, and the inverses must undo p, q.
        let paq = snf.p.mul(&a).mul(&snf.q);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { snf.diag[i].clone() } else { Int::zero() };
                assert_eq!(paq[(i, j)], want, "paq[{i}][{j}]");
            }
        }
        assert_eq!(snf.p.mul(&snf.p_inv), IntMatrix::identity(4));
        assert_eq!(snf.q.mul(&snf.q_inv), IntMatrix::identity(4));
    }

    #[test]
    fn inertia_examples() {
        let rows: Vec<Vec<i64>> = (0..9)
            .map(|i| (0..9).map(|j| if i == j { if i == 0 { 2 } else { -2 } } else { 0 }).collect())
            .collect();
        assert_eq!(inertia(&m(&rows)), (1, 8, 0));
        assert_eq!(inertia(&m(&[vec![0, 2], vec![2, 0]])), (1, 1, 0));
        assert_eq!(inertia(&m(&[vec![0]])), (0, 0, 1));
        assert_eq!(inertia(&m(&[vec![0, 1], vec![1, 0]])), (1, 1, 0));
    }

    #[test]
    fn rational_inverse_round_trip() {
        let a = m(&[vec![2, 0, 0], vec![0, -2, 0], vec![0, 1, 3]]);
        let r = RatMatrix::from_int(&a);
        let inv = r.inverse().unwrap();
        assert_eq!(r.mul(&inv), RatMatrix::identity(3));
    }

    #[test]
    fn sqrt_bound_helpers() {
        let c = Rat::new(Int::from(7), Int::from(2)); // 3.5
        let r = Rat::from(Int::from(2)); // sqrt(2) ~ 1.414
        assert_eq!(floor_plus_sqrt(&c, &r), Int::from(4));
        assert_eq!(ceil_minus_sqrt(&c, &r), Int::from(3));
        let exact = Rat::from(Int::from(9));
        assert_eq!(floor_plus_sqrt(&Rat::zero(), &exact), Int::from(3));
        assert_eq!(ceil_minus_sqrt(&Rat::zero(), &exact), Int::from(-3));
        assert!(rat_sqrt_upper(&Rat::from(Int::from(2))) > Rat::new(Int::from(14142), Int::from(10000)));
    }
}
