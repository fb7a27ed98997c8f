//! Exact integer/rational linear algebra: vectors, matrices, Smith normal
//! form, sublattices, saturation, and quotient maps.
//!
//! All arithmetic is arbitrary precision. Defect decisions downstream are
//! boundary-sensitive, so nothing in this module may round.

use num_bigint::BigInt;
use num_integer::Integer as NumInteger;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("the zero vector spans no ray")]
    ZeroVector,
    #[error("sublattice is not primitive in its ambient lattice")]
    NonPrimitive,
}

/// Shorthand for building an `Int` in code and tests.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

// ---------------------------------------------------------------------------
// vectors

/// Integer vector in the ambient lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector {
    entries: Vec<Int>,
}

impl IntVector {
    pub fn new(entries: Vec<Int>) -> Self {
        IntVector { entries }
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVector::new(entries.iter().map(|&e| Int::from(e)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        IntVector::new(vec![Int::zero(); len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.entries[i] = Int::one();
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Int {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn dot(&self, other: &IntVector) -> Int {
        assert_eq!(self.len(), other.len(), "dot of mismatched lengths");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.len(), other.len());
        IntVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.len(), other.len());
        IntVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> IntVector {
        IntVector::new(self.entries.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Int) -> IntVector {
        IntVector::new(self.entries.iter().map(|a| a * k).collect())
    }

    /// gcd of the absolute values of the entries; zero for the zero vector.
    pub fn content(&self) -> Int {
        self.entries
            .iter()
            .fold(Int::zero(), |acc, e| acc.gcd(e))
    }

    /// Divides out the content, keeping direction. Panics on zero.
    pub fn primitive(&self) -> IntVector {
        let c = self.content();
        assert!(!c.is_zero(), "primitive() on zero vector");
        IntVector::new(self.entries.iter().map(|e| e / &c).collect())
    }

    pub fn to_rat(&self) -> RatVector {
        RatVector::new(
            self.entries
                .iter()
                .map(|e| Rat::from_integer(e.clone()))
                .collect(),
        )
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Exact rational vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatVector {
    entries: Vec<Rat>,
}

impl RatVector {
    pub fn new(entries: Vec<Rat>) -> Self {
        RatVector { entries }
    }

    pub fn zeros(len: usize) -> Self {
        RatVector::new(vec![Rat::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len());
        RatVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rat) -> RatVector {
        RatVector::new(self.entries.iter().map(|a| a * k).collect())
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    pub fn to_int(&self) -> Option<IntVector> {
        if !self.is_integral() {
            return None;
        }
        Some(IntVector::new(
            self.entries.iter().map(|e| e.to_integer()).collect(),
        ))
    }
}

/// Unique primitive integer vector on the ray through `v`.
pub fn primitive_generator(v: &RatVector) -> Result<IntVector, LatticeError> {
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    let mut lcm = Int::one();
    for e in v.entries() {
        lcm = lcm.lcm(e.denom());
    }
    let ints = IntVector::new(
        v.entries()
            .iter()
            .map(|e| (e * Rat::from_integer(lcm.clone())).to_integer())
            .collect(),
    );
    Ok(ints.primitive())
}

// ---------------------------------------------------------------------------
// matrices

/// Dense integer matrix, row major. Rows may be zero (empty basis etc.).
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Int) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[IntVector]) -> Self {
        let mut m = Self::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row");
            for j in 0..cols {
                m.set(i, j, r.get(j).clone());
            }
        }
        m
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| Int::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector::new((0..self.cols).map(|j| self.get(i, j).clone()).collect())
    }

    pub fn col(&self, j: usize) -> IntVector {
        IntVector::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(self.cols, v.len());
        IntVector::new(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j) * v.get(j)).sum())
                .collect(),
        )
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

    /// row[target] += k * row[source]
    fn add_row(&mut self, target: usize, source: usize, k: &Int) {
        for j in 0..self.cols {
            let v = self.get(target, j) + k * self.get(source, j);
            self.set(target, j, v);
        }
    }

    /// col[target] += k * col[source]
    fn add_col(&mut self, target: usize, source: usize, k: &Int) {
        for i in 0..self.rows {
            let v = self.get(i, target) + k * self.get(i, source);
            self.set(i, target, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut col = 0;
        while rank < m.rows && col < m.cols {
            let pivot = (rank..m.rows).find(|&i| !m.get(i, col).is_zero());
            let Some(p) = pivot else {
                col += 1;
                continue;
            };
            m.swap_rows(rank, p);
            for i in rank + 1..m.rows {
                if m.get(i, col).is_zero() {
                    continue;
                }
                // fraction-free: row_i := pivot*row_i - m[i][col]*row_rank
                let a = m.get(rank, col).clone();
                let b = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = &a * m.get(i, j) - &b * m.get(rank, j);
                    m.set(i, j, v);
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Exact inverse of a matrix with determinant ±1. `None` otherwise.
    #[allow(clippy::needless_range_loop)]
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // rational Gauss-Jordan on [self | I]
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            Rat::from_integer(self.get(i, j).clone())
                        } else if j - n == i {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
            a.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..2 * n {
                a[col][j] = &a[col][j] / &p;
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let v = &a[i][j] - &f * &a[col][j];
                    a[i][j] = v;
                }
            }
        }
        let mut out = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                if !a[i][n + j].is_integer() {
                    return None;
                }
                out.set(i, j, a[i][n + j].to_integer());
            }
        }
        Some(out)
    }

    /// Some rational solution of `self * x = b`, free variables set to 0.
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut a: Vec<Vec<Rat>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<Rat> = (0..self.cols)
                    .map(|j| Rat::from_integer(self.get(i, j).clone()))
                    .collect();
                row.push(b[i].clone());
                row
            })
            .collect();
        let n = self.cols;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..self.rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let pv = a[r][col].clone();
            for j in col..=n {
                a[r][j] = &a[r][j] / &pv;
            }
            for i in 0..self.rows {
                if i == r || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in col..=n {
                    let v = &a[i][j] - &f * &a[r][j];
                    a[i][j] = v;
                }
            }
            pivots.push((r, col));
            r += 1;
            if r == self.rows {
                break;
            }
        }
        // consistency: zero rows must have zero rhs
        for i in r..self.rows {
            if !a[i][n].is_zero() {
                return None;
            }
        }
        let mut x = vec![Rat::zero(); n];
        for &(row, col) in &pivots {
            x[col] = a[row][n].clone();
        }
        Some(x)
    }

    /// Integer solution of `self * x = b` when one exists.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_integer(&self, b: &IntVector) -> Option<IntVector> {
        let snf = smith_normal_form(self);
        let ub = snf.u.mul_vec(b);
        let mut y = vec![Int::zero(); self.cols];
        for i in 0..self.rows.min(self.cols) {
            let d = snf.d.get(i, i);
            if d.is_zero() {
                if !ub.get(i).is_zero() {
                    return None;
                }
            } else {
                let (q, r) = ub.get(i).div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
        }
        for i in self.cols..self.rows {
            if !ub.get(i).is_zero() {
                return None;
            }
        }
        Some(snf.v.mul_vec(&IntVector::new(y)))
    }

    /// Basis of the integer kernel {x : self*x = 0}; primitive sublattice.
    pub fn integer_kernel(&self) -> Vec<IntVector> {
        if self.cols == 0 {
            return Vec::new();
        }
        if self.rows == 0 {
            return (0..self.cols).map(|j| IntVector::unit(self.cols, j)).collect();
        }
        let snf = smith_normal_form(self);
        (snf.rank..self.cols).map(|j| snf.v.col(j)).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Smith normal form

/// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ...
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Elementary row/column reduction with pivot-by-least-absolute-value.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;

    let pick_pivot = |d: &IntMatrix, t: usize| -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d.get(i, j).is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if d.get(i, j).abs() < d.get(bi, bj).abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    };

    while t < rows.min(cols) {
        let Some((pi, pj)) = pick_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t) / d.get(t, t));
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d.get(i, t).is_zero() {
                    // remainder is smaller than the pivot; promote it
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j) / d.get(t, t));
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d.get(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility sweep over the remaining block
            let mut divides = true;
            'sweep: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(d.get(i, j) % d.get(t, t)).is_zero() {
                        d.add_row(t, i, &Int::one());
                        u.add_row(t, i, &Int::one());
                        divides = false;
                        break 'sweep;
                    }
                }
            }
            if divides {
                break;
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithForm { u, d, v, rank: t }
}

// ---------------------------------------------------------------------------
// sublattices

/// A sublattice of Z^n given by an independent basis (the lattice it
/// generates, not just its rational span). The zero lattice has an empty
/// basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: Vec<IntVector>,
}

impl Sublattice {
    pub fn new(ambient_rank: usize, basis: Vec<IntVector>) -> Self {
        for b in &basis {
            assert_eq!(b.len(), ambient_rank, "basis vector of wrong length");
        }
        let m = IntMatrix::from_rows(ambient_rank, &basis);
        assert_eq!(m.rank(), basis.len(), "basis is linearly dependent");
        Sublattice {
            ambient_rank,
            basis,
        }
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Sublattice {
            ambient_rank,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Sublattice::new(
            ambient_rank,
            (0..ambient_rank)
                .map(|i| IntVector::unit(ambient_rank, i))
                .collect(),
        )
    }

    /// Lattice generated by arbitrary (possibly dependent) vectors.
    pub fn spanned_by(ambient_rank: usize, vectors: &[IntVector]) -> Self {
        let m = IntMatrix::from_rows(ambient_rank, vectors);
        let snf = smith_normal_form(&m);
        if snf.rank == 0 {
            return Sublattice::zero(ambient_rank);
        }
        let vinv = snf
            .v
            .inverse_unimodular()
            .expect("SNF transform is unimodular");
        let basis = (0..snf.rank)
            .map(|i| vinv.row(i).scale(snf.d.get(i, i)))
            .collect();
        Sublattice::new(ambient_rank, basis)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.ambient_rank, &self.basis)
    }

    /// Basis of the saturation `span_Q(self) ∩ Z^n`. Idempotent.
    pub fn saturate(&self) -> Sublattice {
        if self.rank() == 0 {
            return self.clone();
        }
        let snf = smith_normal_form(&self.basis_matrix());
        let vinv = snf
            .v
            .inverse_unimodular()
            .expect("SNF transform is unimodular");
        let basis = (0..snf.rank).map(|i| vinv.row(i)).collect();
        Sublattice::new(self.ambient_rank, basis)
    }

    /// True iff the lattice equals its saturation (all elementary divisors 1).
    pub fn is_primitive(&self) -> bool {
        if self.rank() == 0 {
            return true;
        }
        let snf = smith_normal_form(&self.basis_matrix());
        snf.diagonal().iter().all(|d| d.is_one())
    }

    /// Exact membership of `v` in the lattice.
    pub fn contains(&self, v: &IntVector) -> bool {
        self.integral_coordinates(v).is_some()
    }

    /// Coordinates of `v` in the basis, when `v` lies in the lattice.
    pub fn integral_coordinates(&self, v: &IntVector) -> Option<IntVector> {
        assert_eq!(v.len(), self.ambient_rank);
        if self.rank() == 0 {
            return if v.is_zero() {
                Some(IntVector::new(Vec::new()))
            } else {
                None
            };
        }
        // solve x * B = v  <=>  B^T x = v^T
        let bt = self.basis_matrix().transpose();
        let rhs: Vec<Rat> = v
            .entries()
            .iter()
            .map(|e| Rat::from_integer(e.clone()))
            .collect();
        let x = bt.solve(&rhs)?;
        // solve() zero-fills free variables; with an independent basis the
        // solution is unique, but verify to catch inconsistent systems.
        let xr = RatVector::new(x);
        let xi = xr.to_int()?;
        let back = bt.mul_vec(&xi);
        if back == *v {
            Some(xi)
        } else {
            None
        }
    }

    /// Membership of `v` in the rational span.
    pub fn contains_in_span(&self, v: &IntVector) -> bool {
        assert_eq!(v.len(), self.ambient_rank);
        if v.is_zero() {
            return true;
        }
        if self.rank() == 0 {
            return false;
        }
        let mut rows = self.basis.clone();
        let r = rows.len();
        rows.push(v.clone());
        IntMatrix::from_rows(self.ambient_rank, &rows).rank() == r
    }

    pub fn spans_same(&self, other: &Sublattice) -> bool {
        self.rank() == other.rank()
            && other.basis.iter().all(|b| self.contains(b))
            && self.basis.iter().all(|b| other.contains(b))
    }

    /// {u : u.b = 0 for all b in self}, a primitive sublattice of rank n-r.
    pub fn annihilator(&self) -> Sublattice {
        if self.rank() == 0 {
            return Sublattice::full(self.ambient_rank);
        }
        let kernel = self.basis_matrix().integer_kernel();
        Sublattice::new(self.ambient_rank, kernel)
    }

    /// True when the two lattices meet only in 0.
    pub fn intersects_trivially(&self, other: &Sublattice) -> bool {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        IntMatrix::from_rows(self.ambient_rank, &rows).rank() == self.rank() + other.rank()
    }

    /// Canonical form usable as a map key: row-style Hermite normal form.
    pub fn canonical_key(&self) -> Vec<Vec<Int>> {
        hermite_rows(self.ambient_rank, &self.basis)
    }
}

/// Row-style Hermite normal form of the lattice generated by `rows`:
/// positive pivots, entries above a pivot reduced into [0, pivot).
#[allow(clippy::needless_range_loop)]
fn hermite_rows(cols: usize, rows: &[IntVector]) -> Vec<Vec<Int>> {
    let mut work: Vec<Vec<Int>> = rows
        .iter()
        .map(|r| r.entries().to_vec())
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        // gcd-reduce all rows below pivot_row in this column
        loop {
            let mut nonzero: Vec<usize> = (pivot_row..work.len())
                .filter(|&i| !work[i][col].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                work.swap(pivot_row, nonzero[0]);
                break;
            }
            nonzero.sort_by(|&a, &b| work[a][col].abs().cmp(&work[b][col].abs()));
            let (small, other) = (nonzero[0], nonzero[1]);
            let q = &work[other][col] / &work[small][col];
            for j in 0..cols {
                let v = &work[other][j] - &q * &work[small][j];
                work[other][j] = v;
            }
        }
        if pivot_row >= work.len() || work[pivot_row][col].is_zero() {
            continue;
        }
        if work[pivot_row][col].is_negative() {
            for j in 0..cols {
                work[pivot_row][j] = -work[pivot_row][j].clone();
            }
        }
        let p = work[pivot_row][col].clone();
        for i in 0..pivot_row {
            let q = work[i][col].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            for j in 0..cols {
                let v = &work[i][j] - &q * &work[pivot_row][j];
                work[i][j] = v;
            }
        }
        pivot_row += 1;
    }
    work.truncate(pivot_row);
    work
}

// ---------------------------------------------------------------------------
// lattice maps

/// Integer-matrix map Z^n -> Z^m with its Smith factorization cached.
#[derive(Clone, Debug)]
pub struct LatticeMap {
    matrix: IntMatrix,
    rank: usize,
    surjective: bool,
}

impl LatticeMap {
    pub fn new(matrix: IntMatrix) -> Self {
        let snf = smith_normal_form(&matrix);
        let surjective = snf.rank == matrix.rows() && snf.diagonal().iter().all(|d| d.is_one());
        LatticeMap {
            rank: snf.rank,
            surjective,
            matrix,
        }
    }

    pub fn identity(n: usize) -> Self {
        LatticeMap::new(IntMatrix::identity(n))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn domain_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn apply(&self, v: &IntVector) -> IntVector {
        self.matrix.mul_vec(v)
    }

    /// Kernel as a primitive sublattice of the domain.
    pub fn kernel(&self) -> Sublattice {
        let basis = self.matrix.integer_kernel();
        if basis.is_empty() {
            Sublattice::zero(self.domain_rank())
        } else {
            Sublattice::new(self.domain_rank(), basis)
        }
    }
}

/// Surjection Z^n -> Z^(n - rk Δ) with kernel exactly Δ. Deterministic:
/// codomain basis fixed by the Smith form of Δ's basis matrix.
pub fn quotient_map(ambient_rank: usize, delta: &Sublattice) -> Result<LatticeMap, LatticeError> {
    assert_eq!(delta.ambient_rank(), ambient_rank);
    if !delta.is_primitive() {
        return Err(LatticeError::NonPrimitive);
    }
    let r = delta.rank();
    if r == 0 {
        return Ok(LatticeMap::identity(ambient_rank));
    }
    let snf = smith_normal_form(&delta.basis_matrix());
    debug_assert_eq!(snf.rank, r);
    // rows of the quotient are the last n-r columns of V transposed
    let rows: Vec<IntVector> = (r..ambient_rank).map(|j| snf.v.col(j)).collect();
    let map = LatticeMap::new(IntMatrix::from_rows(ambient_rank, &rows));
    debug_assert!(map.is_surjective());
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(v: &[i64]) -> IntVector {
        IntVector::from_i64s(v)
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, IntMatrix::identity(2));
        assert_eq!(snf.rank, 2);
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_i64s(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![int(1), int(6)]);
        // U*M*V = D by direct multiplication
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_divisibility_and_det() {
        let m = IntMatrix::from_i64s(&[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![int(2), int(4)]);
        // d_1 = gcd of entries, d_1*d_2 = |det| = 8
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn saturate_scaling() {
        let l = Sublattice::spanned_by(2, &[iv(&[2, 0])]);
        let s = l.saturate();
        assert!(s.spans_same(&Sublattice::spanned_by(2, &[iv(&[1, 0])])));
    }

    #[test]
    fn saturate_already_saturated() {
        let l = Sublattice::spanned_by(2, &[iv(&[1, 0])]);
        assert!(l.saturate().spans_same(&l));
    }

    #[test]
    fn saturate_index_two_plane() {
        let l = Sublattice::spanned_by(2, &[iv(&[2, 2]), iv(&[0, 3])]);
        let s = l.saturate();
        assert!(s.contains(&iv(&[1, 1])));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn primitivity() {
        assert!(Sublattice::spanned_by(2, &[iv(&[1, 0])]).is_primitive());
        assert!(!Sublattice::spanned_by(2, &[iv(&[2, 0])]).is_primitive());
        // index 2
        assert!(!Sublattice::spanned_by(2, &[iv(&[1, 1]), iv(&[1, -1])]).is_primitive());
    }

    #[test]
    fn quotient_by_axis() {
        let delta = Sublattice::spanned_by(2, &[iv(&[1, 0])]);
        let q = quotient_map(2, &delta).unwrap();
        assert!(q.is_surjective());
        assert!(q.apply(&iv(&[1, 0])).is_zero());
        assert!(!q.apply(&iv(&[0, 1])).is_zero());
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let q = quotient_map(3, &Sublattice::zero(3)).unwrap();
        assert_eq!(*q.matrix(), IntMatrix::identity(3));
    }

    #[test]
    fn quotient_kernel_is_diagonal() {
        let delta = Sublattice::spanned_by(2, &[iv(&[1, 1])]);
        let q = quotient_map(2, &delta).unwrap();
        let k = q.kernel();
        assert!(k.spans_same(&delta));
    }

    #[test]
    fn quotient_rejects_non_primitive() {
        let delta = Sublattice::spanned_by(2, &[iv(&[2, 0])]);
        assert!(matches!(
            quotient_map(2, &delta),
            Err(LatticeError::NonPrimitive)
        ));
    }

    #[test]
    fn primitive_generator_cases() {
        assert_eq!(
            primitive_generator(&iv(&[2, 4]).to_rat()).unwrap(),
            iv(&[1, 2])
        );
        let half_third = RatVector::new(vec![Rat::new(int(1), int(2)), Rat::new(int(1), int(3))]);
        assert_eq!(primitive_generator(&half_third).unwrap(), iv(&[3, 2]));
        assert_eq!(
            primitive_generator(&iv(&[-3, 0]).to_rat()).unwrap(),
            iv(&[-1, 0])
        );
        assert_eq!(
            primitive_generator(&RatVector::zeros(2)),
            Err(LatticeError::ZeroVector)
        );
    }

    #[test]
    fn annihilator_of_axis() {
        let l = Sublattice::spanned_by(3, &[iv(&[0, 0, 1])]);
        let a = l.annihilator();
        assert_eq!(a.rank(), 2);
        assert!(a.contains(&iv(&[1, 0, 0])));
        assert!(a.contains(&iv(&[0, 1, 0])));
        assert!(!a.contains_in_span(&iv(&[0, 0, 1])));
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..10, r * c).prop_map(move |data| {
                IntMatrix::from_fn(r, c, |i, j| Int::from(data[i * c + j]))
            })
        })
    }

    proptest! {
        #[test]
        fn snf_is_exact_factorization(m in small_matrix()) {
            let snf = smith_normal_form(&m);
            prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
            // U, V unimodular
            prop_assert!(snf.u.inverse_unimodular().is_some());
            prop_assert!(snf.v.inverse_unimodular().is_some());
            // divisibility chain
            let diag = snf.diagonal();
            for w in diag.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }

        #[test]
        fn saturation_idempotent_and_rank_preserving(rows in proptest::collection::vec(
            proptest::collection::vec(-6i64..7, 3), 1..4))
        {
            let vecs: Vec<IntVector> = rows.iter().map(|r| IntVector::from_i64s(r)).collect();
            let l = Sublattice::spanned_by(3, &vecs);
            let s = l.saturate();
            prop_assert_eq!(s.rank(), l.rank());
            prop_assert!(s.saturate().spans_same(&s));
            prop_assert!(s.is_primitive());
        }

        #[test]
        fn quotient_annihilates_and_surjects(rows in proptest::collection::vec(
            proptest::collection::vec(-5i64..6, 3), 1..3))
        {
            let vecs: Vec<IntVector> = rows.iter().map(|r| IntVector::from_i64s(r)).collect();
            let delta = Sublattice::spanned_by(3, &vecs).saturate();
            let q = quotient_map(3, &delta).unwrap();
            for b in delta.basis() {
                prop_assert!(q.apply(b).is_zero());
            }
            prop_assert!(q.is_surjective());
            prop_assert!(q.kernel().spans_same(&delta));
        }
    }
}
