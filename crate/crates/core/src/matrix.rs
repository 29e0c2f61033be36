//! Dense integer matrices with arbitrary-precision entries and the Smith
//! normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::ops::{Index, IndexMut};

pub type Int = BigInt;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn zero_vec(n: usize) -> Vec<Int> {
    vec![Int::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Int> {
    let mut v = zero_vec(n);
    v[i] = Int::one();
    v
}

pub fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_scaled(acc: &mut [Int], c: &Int, v: &[Int]) {
    debug_assert_eq!(acc.len(), v.len());
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += c * b;
        }
    }
}

pub fn vec_add(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[Int]) -> Vec<Int> {
    a.iter().map(|x| -x).collect()
}

pub fn vec_scale(c: &Int, a: &[Int]) -> Vec<Int> {
    a.iter().map(|x| c * x).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (r, c): (usize, usize)) -> &Int {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Int) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: &[Vec<Int>]) -> Self {
        assert_eq!(entries.len(), rows);
        let mut m = Self::zeros(rows, cols);
        for (i, r) in entries.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, x) in r.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(entries: &[&[i64]]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let e: Vec<Vec<Int>> = entries.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Self::from_rows(rows, cols, &e)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<Int>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[Int]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = x.clone();
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = zero_vec(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    out[i] += a * x;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Int) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, e: usize) -> IntMatrix {
        assert_eq!(self.rows, self.cols);
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Select the given columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m[(ii, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Kronecker product.
    pub fn kron(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        m
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

    /// row[a] += c * row[b]
    fn add_row(&mut self, a: usize, b: usize, c: &Int) {
        for j in 0..self.cols {
            let v = &self[(b, j)] * c;
            if !v.is_zero() {
                self[(a, j)] += v;
            }
        }
    }

    /// col[a] += c * col[b]
    fn add_col(&mut self, a: usize, b: usize, c: &Int) {
        for i in 0..self.rows {
            let v = &self[(i, b)] * c;
            if !v.is_zero() {
                self[(i, a)] += v;
            }
        }
    }

    fn neg_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -&self[(a, j)];
            self[(a, j)] = v;
        }
    }

    fn neg_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, a)];
            self[(i, a)] = v;
        }
    }

    /// Absolute value of the determinant of a square matrix (via SNF).
    pub fn abs_det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let s = smith(self, false, false);
        if s.rank < self.rows {
            return Int::zero();
        }
        s.diag.iter().fold(Int::one(), |a, b| a * b)
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Smith normal form `U·A·V = D`, with the requested transforms.
#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal entries `d_0 | d_1 | …`, length `min(rows, cols)`; zero past the rank.
    pub diag: Vec<Int>,
    pub rank: usize,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

impl Snf {
    pub fn d_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, x) in self.diag.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

struct Tracker {
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Tracker {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(a, b);
        }
    }
    fn add_row(&mut self, a: usize, b: usize, c: &Int) {
        if let Some(u) = &mut self.u {
            u.add_row(a, b, c);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col(b, a, &-c);
        }
    }
    fn neg_row(&mut self, a: usize) {
        if let Some(u) = &mut self.u {
            u.neg_row(a);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.neg_col(a);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(a, b);
        }
    }
    fn add_col(&mut self, a: usize, b: usize, c: &Int) {
        if let Some(v) = &mut self.v {
            v.add_col(a, b, c);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row(b, a, &-c);
        }
    }
}

/// Smith normal form by repeated smallest-pivot elimination.
pub fn smith(a: &IntMatrix, left: bool, right: bool) -> Snf {
    let (r, c) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut tr = Tracker {
        u: left.then(|| IntMatrix::identity(r)),
        u_inv: left.then(|| IntMatrix::identity(r)),
        v: right.then(|| IntMatrix::identity(c)),
        v_inv: right.then(|| IntMatrix::identity(c)),
    };
    let steps = r.min(c);
    let mut rank = 0;
    'outer: for t in 0..steps {
        loop {
            // smallest nonzero entry in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &m[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if m[(bi, bj)].abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            m.swap_rows(t, pi);
            tr.swap_rows(t, pi);
            m.swap_cols(t, pj);
            tr.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = m[(i, t)].div_floor(&m[(t, t)]);
                let nq = -q;
                m.add_row(i, t, &nq);
                tr.add_row(i, t, &nq);
                if !m[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = m[(t, j)].div_floor(&m[(t, t)]);
                let nq = -q;
                m.add_col(j, t, &nq);
                tr.add_col(j, t, &nq);
                if !m[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let piv = m[(t, t)].clone();
            let mut bad = None;
            'find: for i in t + 1..r {
                for j in t + 1..c {
                    if !m[(i, j)].is_multiple_of(&piv) {
                        bad = Some(i);
                        break 'find;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = Int::one();
                    m.add_row(t, i, &one);
                    tr.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if m[(t, t)].is_negative() {
            m.neg_row(t);
            tr.neg_row(t);
        }
        rank = t + 1;
    }
    let diag = (0..steps).map(|i| m[(i, i)].clone()).collect();
    Snf { diag, rank, u: tr.u, u_inv: tr.u_inv, v: tr.v, v_inv: tr.v_inv }
}

/// Echelon basis of the row lattice spanned by `rows` (all of length `ncols`).
pub fn row_lattice_basis(rows: Vec<Vec<Int>>, ncols: usize) -> Vec<Vec<Int>> {
    let mut rows: Vec<Vec<Int>> = rows.into_iter().filter(|r| !is_zero_vec(r)).collect();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if rows[b][col].abs() <= rows[i][col].abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            let (head, tail) = rows.split_at_mut(pivot_row + 1);
            let piv = &head[pivot_row];
            let mut done = true;
            for r in tail.iter_mut() {
                if r[col].is_zero() {
                    continue;
                }
                let q = r[col].div_floor(&piv[col]);
                add_scaled(r, &-q, piv);
                if !r[col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                let neg = vec_neg(&rows[pivot_row]);
                rows[pivot_row] = neg;
            }
            let piv = rows[pivot_row].clone();
            for r in rows[..pivot_row].iter_mut() {
                if r[col].is_zero() {
                    continue;
                }
                let q = r[col].div_floor(&piv[col]);
                add_scaled(r, &-q, &piv);
            }
            pivot_row += 1;
            rows.retain(|r| !is_zero_vec(r));
        }
    }
    rows.truncate(pivot_row.min(rows.len()));
    rows.retain(|r| !is_zero_vec(r));
    rows
}

/// A basis (as columns) of the integer kernel `{x : A x = 0}`.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let basis = row_lattice_basis(a.to_rows(), a.cols);
    let reduced = if basis.is_empty() {
        IntMatrix::zeros(0, a.cols)
    } else {
        IntMatrix::from_rows(basis.len(), a.cols, &basis)
    };
    let s = smith(&reduced, false, true);
    let v = s.v.expect("right transform requested");
    let idx: Vec<usize> = (s.rank..a.cols).collect();
    v.select_cols(&idx)
}

/// Reusable solver for integer systems `A x = b`.
#[derive(Clone, Debug)]
pub struct Solver {
    rows: usize,
    snf: Snf,
}

impl Solver {
    pub fn new(a: &IntMatrix) -> Self {
        Solver { rows: a.rows, snf: smith(a, true, true) }
    }

    pub fn solve(&self, b: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(b.len(), self.rows);
        let u = self.snf.u.as_ref().unwrap();
        let v = self.snf.v.as_ref().unwrap();
        let ub = u.mul_vec(b);
        let mut y = zero_vec(v.rows());
        for (i, x) in ub.iter().enumerate() {
            if i < self.snf.rank {
                let (q, rem) = x.div_rem(&self.snf.diag[i]);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !x.is_zero() {
                return None;
            }
        }
        Some(v.mul_vec(&y))
    }
}

pub fn solve(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    Solver::new(a).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_snf(a: &IntMatrix) {
        let s = smith(a, true, true);
        let (u, v) = (s.u.as_ref().unwrap(), s.v.as_ref().unwrap());
        let d = s.d_matrix(a.rows(), a.cols());
        assert_eq!(u.mul(a).mul(v), d, "U A V != D for\n{a}");
        assert_eq!(u.mul(s.u_inv.as_ref().unwrap()), IntMatrix::identity(a.rows()));
        assert_eq!(v.mul(s.v_inv.as_ref().unwrap()), IntMatrix::identity(a.cols()));
        for w in s.diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "divisibility chain broken: {:?}", s.diag);
            } else {
                // zeros only trail
            }
        }
        for (i, d) in s.diag.iter().enumerate() {
            assert!(!d.is_negative());
            assert_eq!(d.is_zero(), i >= s.rank);
        }
    }

    #[test]
    fn snf_examples() {
        let s = smith(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]), false, false);
        assert_eq!(s.diag, vec![int(1), int(6)]);
        let s = smith(&IntMatrix::from_i64(&[&[0]]), false, false);
        assert_eq!(s.diag, vec![int(0)]);
        let s = smith(&IntMatrix::from_i64(&[&[4, 6], &[6, 4]]), false, false);
        assert_eq!(s.diag, vec![int(2), int(10)]);
        check_snf(&IntMatrix::from_i64(&[&[4, 6], &[6, 4]]));
        check_snf(&IntMatrix::zeros(0, 3));
        check_snf(&IntMatrix::zeros(2, 0));
    }

    #[test]
    fn kernel_and_solve() {
        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
        let b = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve(&b, &[int(4), int(9)]), Some(vec![int(2), int(3)]));
        assert_eq!(solve(&b, &[int(1), int(0)]), None);
    }

    #[test]
    fn lattice_basis_reduces() {
        let rows = vec![vec![int(2), int(4)], vec![int(3), int(6)], vec![int(0), int(0)]];
        let b = row_lattice_basis(rows, 2);
        assert_eq!(b, vec![vec![int(1), int(2)]]);
    }

    proptest! {
        #[test]
        fn snf_random(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 25)) {
            let entries: Vec<Vec<Int>> = (0..rows)
                .map(|i| (0..cols).map(|j| int(seed[i * 5 + j])).collect())
                .collect();
            let a = IntMatrix::from_rows(rows, cols, &entries);
            check_snf(&a);
            let k = kernel(&a);
            prop_assert!(a.mul(&k).is_zero());
            let s = smith(&a, true, true);
            prop_assert_eq!(s.u.unwrap().abs_det(), int(1));
            prop_assert_eq!(s.v.unwrap().abs_det(), int(1));
        }
    }
}
