//! Exact integer and rational linear algebra.
//!
//! Matrices hold arbitrary-precision integers. The Hermite normal form is the
//! column-style one: `A * U = H` with `U` unimodular and `H = [L | 0]` where
//! `L` is in lower column-echelon form, pivots are positive and entries to the
//! left of a pivot are reduced into `[0, pivot)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_util::{big_to_string, parse_big};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntegerMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged matrix rows");
            entries.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        IntegerMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != nrows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has length {}, expected {nrows}",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.entries[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntegerMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn negate(&self) -> IntegerMatrix {
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let rows = self.to_rows();
        bareiss_rank(rows, self.cols)
    }

    fn col_axpy(&mut self, target: usize, factor: &BigInt, source: usize) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = factor * self.get(i, source);
            self.entries[i * self.cols + target] += add;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.entries[idx] = -&self.entries[idx];
        }
    }

    /// Replaces columns (p, q) by (s*p + t*q, x*p + y*q).
    fn col_combine(&mut self, p: usize, q: usize, coeffs: [&BigInt; 4]) {
        let [s, t, x, y] = coeffs;
        for i in 0..self.rows {
            let a = &self.entries[i * self.cols + p];
            let b = &self.entries[i * self.cols + q];
            let np = s * a + t * b;
            let nq = x * a + y * b;
            self.entries[i * self.cols + p] = np;
            self.entries[i * self.cols + q] = nq;
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntegerMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(big_to_string).collect())
            .collect();
        let width = cells
            .iter()
            .flatten()
            .map(|s| s.len())
            .max()
            .unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<serde_json::Value>>,
}

impl Serialize for IntegerMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .to_rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|v| serde_json::Value::String(big_to_string(v)))
                        .collect()
                })
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.rows {
            return Err(D::Error::custom(format!(
                "expected {} rows, found {}",
                repr.rows,
                repr.entries.len()
            )));
        }
        let mut entries = Vec::with_capacity(repr.rows * repr.cols);
        for row in repr.entries {
            if row.len() != repr.cols {
                return Err(D::Error::custom(format!(
                    "expected {} columns, found {}",
                    repr.cols,
                    row.len()
                )));
            }
            for v in row {
                let parsed = match v {
                    serde_json::Value::String(s) => parse_big(&s),
                    serde_json::Value::Number(n) => parse_big(&n.to_string()),
                    other => Err(format!("matrix entry {other} is not an integer")),
                };
                entries.push(parsed.map_err(D::Error::custom)?);
            }
        }
        IntegerMatrix::new(repr.rows, repr.cols, entries).map_err(D::Error::custom)
    }
}

/// Extended gcd with a nonnegative gcd: returns `(g, s, t)` with `s*a + t*b = g`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// `H = A * U` with `U` unimodular; `H` in column Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnfResult {
    pub h: IntegerMatrix,
    pub u: IntegerMatrix,
    /// `(row, column)` of every pivot, in column order.
    pub pivots: Vec<(usize, usize)>,
}

impl HnfResult {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn hnf(a: &IntegerMatrix) -> HnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntegerMatrix::identity(n);
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..m {
        if k == n {
            break;
        }
        for j in k + 1..n {
            if h.get(i, j).is_zero() {
                continue;
            }
            let a_ik = h.get(i, k).clone();
            let a_ij = h.get(i, j).clone();
            let (g, s, t) = extended_gcd(&a_ik, &a_ij);
            let x = -(&a_ij / &g);
            let y = &a_ik / &g;
            h.col_combine(k, j, [&s, &t, &x, &y]);
            u.col_combine(k, j, [&s, &t, &x, &y]);
        }
        if h.get(i, k).is_zero() {
            continue;
        }
        if h.get(i, k).is_negative() {
            h.negate_col(k);
            u.negate_col(k);
        }
        let pivot = h.get(i, k).clone();
        for j in 0..k {
            let q = h.get(i, j).div_floor(&pivot);
            if !q.is_zero() {
                let nq = -q;
                h.col_axpy(j, &nq, k);
                u.col_axpy(j, &nq, k);
            }
        }
        pivots.push((i, k));
        k += 1;
    }
    HnfResult { h, u, pivots }
}

/// Basis of the saturated integer kernel `{x in Z^n : A x = 0}`, as columns.
pub fn integer_nullspace(a: &IntegerMatrix) -> IntegerMatrix {
    let res = hnf(a);
    let rank = res.rank();
    let kernel_cols: Vec<usize> = (rank..a.cols()).collect();
    res.u.select_columns(&kernel_cols)
}

/// Some integer `x` with `A x = b`, or `None` when no integer solution exists.
pub fn solve_integer(a: &IntegerMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    let res = hnf(a);
    Ok(solve_with_hnf(&res, b))
}

pub(crate) fn solve_with_hnf(res: &HnfResult, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = res.u.rows();
    let mut y = vec![BigInt::zero(); n];
    let mut next_pivot = 0;
    for (i, bi) in b.iter().enumerate() {
        let mut residual = bi.clone();
        for (k, yk) in y.iter().enumerate().take(next_pivot) {
            residual -= res.h.get(i, k) * yk;
        }
        match res.pivots.get(next_pivot) {
            Some(&(pr, pc)) if pr == i => {
                let (q, r) = residual.div_rem(res.h.get(i, pc));
                if !r.is_zero() {
                    return None;
                }
                y[pc] = q;
                next_pivot += 1;
            }
            _ => {
                if !residual.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(res.u.mul_vec(&y).expect("u is square of size cols(a)"))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntegerMatrix) -> Result<BigInt> {
    if a.rows() != a.cols() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Rank of an integer matrix given by rows, by fraction-free elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &m[i][j] * &m[rank][c] - &m[i][c] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Result of reducing a rational linear system to row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub rank: usize,
    /// Solution with all free variables set to zero; `None` when inconsistent.
    pub solution: Option<Vec<BigRational>>,
    /// Pivot columns of the reduced system.
    pub pivot_columns: Vec<usize>,
}

impl LinearSolution {
    pub fn is_unique(&self, unknowns: usize) -> bool {
        self.solution.is_some() && self.rank == unknowns
    }
}

/// Solves `M x = rhs` over the rationals by Gauss–Jordan elimination.
pub fn solve_rational(matrix: &[Vec<BigRational>], rhs: &[BigRational]) -> LinearSolution {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivot_columns = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        pivot_columns.push(c);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let consistent = m[rank..].iter().all(|row| row[cols].is_zero());
    let solution = consistent.then(|| {
        let mut x = vec![BigRational::zero(); cols];
        for (r, &c) in pivot_columns.iter().enumerate() {
            x[c] = m[r][cols].clone();
        }
        x
    });
    LinearSolution {
        rank,
        solution,
        pivot_columns,
    }
}

/// A lattice in `Z^dim`, stored by its column Hermite basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: IntegerMatrix,
    determinant: BigInt,
}

impl Lattice {
    /// Lattice generated by the columns of `generators` (which may be dependent).
    pub fn from_generators(generators: &IntegerMatrix) -> Lattice {
        let dim = generators.rows();
        let res = hnf(generators);
        let rank = res.rank();
        let basis = res.h.select_columns(&(0..rank).collect::<Vec<_>>());
        let determinant = res
            .pivots
            .iter()
            .fold(BigInt::one(), |acc, &(r, c)| acc * basis.get(r, c));
        Lattice {
            dim,
            basis,
            determinant,
        }
    }

    /// The full lattice `Z^dim`.
    pub fn standard(dim: usize) -> Lattice {
        Self::from_generators(&IntegerMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    /// Index in `Z^dim` for full-rank lattices (product of the Hermite pivots).
    pub fn determinant(&self) -> &BigInt {
        &self.determinant
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        if self.is_full_rank() {
            return self.reduce(v).iter().all(Zero::is_zero);
        }
        matches!(solve_integer(&self.basis, v), Ok(Some(_)))
    }

    /// Canonical coset representative of `v` modulo a full-rank lattice:
    /// the unique `w = v - l` with `0 <= w_k < pivot_k`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert!(self.is_full_rank(), "reduce requires a full-rank lattice");
        let mut w = v.to_vec();
        for k in 0..self.dim {
            let p = self.basis.get(k, k);
            let q = w[k].div_floor(p);
            if q.is_zero() {
                continue;
            }
            for (i, wi) in w.iter_mut().enumerate().skip(k) {
                *wi -= &q * self.basis.get(i, k);
            }
        }
        w
    }

    /// All canonical coset representatives, in lexicographic order.
    pub fn coset_representatives(&self) -> Vec<Vec<BigInt>> {
        assert!(self.is_full_rank(), "cosets require a full-rank lattice");
        let mut out = vec![Vec::new()];
        for k in 0..self.dim {
            let p = self.basis.get(k, k).clone();
            let mut next = Vec::new();
            for prefix in &out {
                let mut c = BigInt::zero();
                while c < p {
                    let mut v: Vec<BigInt> = prefix.clone();
                    v.push(c.clone());
                    next.push(v);
                    c += 1;
                }
            }
            out = next;
        }
        out
    }

    pub fn intersection(&self, other: &Lattice) -> Result<Lattice> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "lattices in dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let stacked = self.basis.hstack(&other.basis.negate())?;
        let kernel = integer_nullspace(&stacked);
        let k1 = self.basis.cols();
        let coeffs = kernel.transpose();
        let mut gens = Vec::with_capacity(kernel.cols());
        for j in 0..kernel.cols() {
            let a = &coeffs.row(j)[..k1];
            gens.push(self.basis.mul_vec(a)?);
        }
        let gens = IntegerMatrix::from_columns(self.dim, &gens)?;
        Ok(Lattice::from_generators(&gens))
    }
}

pub fn lattice_intersection(l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    l1.intersection(l2)
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("dim", &self.dim)
            .field("basis", &self.basis)
            .field("determinant", &self.determinant)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    dim: usize,
    basis: IntegerMatrix,
    #[serde(default)]
    determinant: Option<String>,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeRepr {
            dim: self.dim,
            basis: self.basis.clone(),
            determinant: Some(big_to_string(&self.determinant)),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = LatticeRepr::deserialize(d)?;
        if repr.basis.rows() != repr.dim {
            return Err(serde::de::Error::custom("basis rows differ from dim"));
        }
        Ok(Lattice::from_generators(&repr.basis))
    }
}

/// Converts machine integers to a big-integer vector.
pub fn bigvec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(rows)
    }

    fn check_hnf_shape(res: &HnfResult) {
        let h = &res.h;
        let rank = res.rank();
        for (k, &(r, c)) in res.pivots.iter().enumerate() {
            assert_eq!(c, k);
            assert!(h.get(r, c).is_positive());
            for i in 0..r {
                assert!(h.get(i, c).is_zero(), "entry above pivot");
            }
            for j in 0..c {
                let v = h.get(r, j);
                assert!(!v.is_negative() && v < h.get(r, c), "left entry not reduced");
            }
        }
        for j in rank..h.cols() {
            assert!(h.column(j).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn hnf_of_weight_matrix_is_identity_block() {
        let a = m(&[&[3, 5, 8, 9], &[1, 1, 1, 1]]);
        let res = hnf(&a);
        assert_eq!(res.h, m(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]));
        assert_eq!(a.mul(&res.u).unwrap(), res.h);
        assert_eq!(determinant(&res.u).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn hnf_identity_and_single_row() {
        let id = IntegerMatrix::identity(2);
        let res = hnf(&id);
        assert_eq!(res.h, id);
        assert_eq!(res.u, id);

        let a = m(&[&[4, 6]]);
        let res = hnf(&a);
        assert_eq!(res.h, m(&[&[2, 0]]));
        assert_eq!(a.mul(&res.u).unwrap(), res.h);
        assert_eq!(determinant(&res.u).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn nullspace_examples() {
        let a = m(&[&[3, 5, 8, 9], &[1, 1, 1, 1]]);
        let g = integer_nullspace(&a);
        assert_eq!((g.rows(), g.cols()), (4, 2));
        assert!(a.mul(&g).unwrap().columns().iter().flatten().all(Zero::is_zero));
        // Known kernel vectors must lie in the generated lattice.
        let lat = Lattice::from_generators(&g);
        assert!(lat.contains(&bigvec(&[3, -5, 2, 0])));
        assert!(lat.contains(&bigvec(&[2, -3, 0, 1])));

        let g = integer_nullspace(&IntegerMatrix::identity(2));
        assert_eq!((g.rows(), g.cols()), (2, 0));

        let g = integer_nullspace(&m(&[&[1, 1]]));
        assert_eq!(g.cols(), 1);
        let col = g.column(0);
        assert!(col == bigvec(&[1, -1]) || col == bigvec(&[-1, 1]));
    }

    #[test]
    fn unit_image_columns_are_not_kernel_vectors() {
        // A valid transform whose first two columns map to unit vectors and
        // whose last two columns span the kernel.
        let a = m(&[&[3, 5, 8, 9], &[1, 1, 1, 1]]);
        let u = m(&[&[1, 4, 3, 2], &[-2, -4, -5, -3], &[1, 1, 2, 0], &[0, 0, 0, 1]]);
        let au = a.mul(&u).unwrap();
        assert_eq!(au, m(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]));
    }

    #[test]
    fn solve_integer_examples() {
        let a = m(&[&[3, 5, 8, 9], &[1, 1, 1, 1]]);
        let x = solve_integer(&a, &bigvec(&[3, 1])).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), bigvec(&[3, 1]));
        let x = solve_integer(&a, &bigvec(&[0, 0])).unwrap().unwrap();
        assert!(x.iter().all(Zero::is_zero));
        assert_eq!(solve_integer(&m(&[&[2]]), &bigvec(&[1])).unwrap(), None);
        assert!(solve_integer(&a, &bigvec(&[1])).is_err());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&m(&[&[3, 1], &[5, 1]])).unwrap(), BigInt::from(-2));
        assert_eq!(determinant(&IntegerMatrix::identity(3)).unwrap(), BigInt::one());
        assert_eq!(determinant(&m(&[&[8, 9], &[1, 1]])).unwrap(), BigInt::from(-1));
        assert!(matches!(
            determinant(&m(&[&[1, 2]])),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn lattice_intersection_examples() {
        let l1 = Lattice::from_generators(&m(&[&[2, 0], &[0, 1]]));
        let l2 = Lattice::from_generators(&m(&[&[1, 0], &[0, 2]]));
        let both = l1.intersection(&l2).unwrap();
        assert_eq!(both, Lattice::from_generators(&m(&[&[2, 0], &[0, 2]])));
        assert_eq!(both.determinant(), &BigInt::from(4));
        assert_eq!(l1.intersection(&l1).unwrap(), l1);

        let l34 = Lattice::from_generators(&m(&[&[8, 9], &[1, 1]]));
        assert_eq!(l34.determinant(), &BigInt::one());
        assert_eq!(l1.intersection(&l34).unwrap(), l1);

        let l3 = Lattice::standard(3);
        assert!(matches!(
            l1.intersection(&l3),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn coset_representatives_cover_quotient() {
        let l = Lattice::from_generators(&m(&[&[3, 5], &[1, 1]]));
        let reps = l.coset_representatives();
        assert_eq!(reps.len(), 2);
        for x in -4..4 {
            for y in -4..4 {
                let r = l.reduce(&bigvec(&[x, y]));
                assert!(reps.contains(&r));
            }
        }
    }

    #[test]
    fn matrix_json_uses_decimal_strings() {
        let a = m(&[&[3, -5], &[1, 1]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":2,"entries":[["3","-5"],["1","1"]]}"#);
        let back: IntegerMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let bad = r#"{"rows":2,"cols":2,"entries":[["3"],["1","1"]]}"#;
        assert!(serde_json::from_str::<IntegerMatrix>(bad).is_err());
    }

    fn small_matrix() -> impl Strategy<Value = IntegerMatrix> {
        (1usize..4, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..7, r * c).prop_map(move |v| {
                IntegerMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn hnf_invariants(a in small_matrix()) {
            let res = hnf(&a);
            prop_assert_eq!(a.mul(&res.u).unwrap(), res.h.clone());
            prop_assert_eq!(determinant(&res.u).unwrap().abs(), BigInt::one());
            check_hnf_shape(&res);
            prop_assert_eq!(res.rank(), a.rank());
        }

        #[test]
        fn nullspace_is_saturated(a in small_matrix()) {
            let g = integer_nullspace(&a);
            prop_assert_eq!(g.cols(), a.cols() - a.rank());
            for col in g.columns() {
                prop_assert!(a.mul_vec(&col).unwrap().iter().all(Zero::is_zero));
            }
            let lat = Lattice::from_generators(&g);
            // Brute force over a box of integer vectors.
            let n = a.cols();
            let range: Vec<i64> = (-2..=2).collect();
            let mut idx = vec![0usize; n];
            loop {
                let x: Vec<BigInt> = idx.iter().map(|&i| BigInt::from(range[i])).collect();
                if a.mul_vec(&x).unwrap().iter().all(Zero::is_zero) {
                    prop_assert!(g.cols() > 0 || x.iter().all(Zero::is_zero));
                    prop_assert!(lat.contains(&x) || x.iter().all(Zero::is_zero));
                }
                let mut p = 0;
                while p < n && idx[p] == range.len() - 1 { idx[p] = 0; p += 1; }
                if p == n { break; }
                idx[p] += 1;
            }
        }

        #[test]
        fn solve_integer_matches_column_lattice(a in small_matrix(), seed in proptest::collection::vec(-3i64..4, 4)) {
            let b: Vec<BigInt> = (0..a.rows()).map(|i| BigInt::from(seed[i])).collect();
            let lat = Lattice::from_generators(&a);
            let sol = solve_integer(&a, &b).unwrap();
            prop_assert_eq!(sol.is_some(), lat.contains(&b));
            if let Some(x) = sol {
                prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
            }
        }

        #[test]
        fn intersection_matches_membership(
            g1 in proptest::collection::vec(-4i64..5, 4),
            g2 in proptest::collection::vec(-4i64..5, 4),
        ) {
            let a = m(&[&[g1[0], g1[1]], &[g1[2], g1[3]]]);
            let b = m(&[&[g2[0], g2[1]], &[g2[2], g2[3]]]);
            prop_assume!(a.rank() == 2 && b.rank() == 2);
            let (la, lb) = (Lattice::from_generators(&a), Lattice::from_generators(&b));
            let both = la.intersection(&lb).unwrap();
            prop_assert_eq!(&both, &lb.intersection(&la).unwrap());
            for x in -10i64..=10 {
                for y in -10i64..=10 {
                    let v = bigvec(&[x, y]);
                    prop_assert_eq!(both.contains(&v), la.contains(&v) && lb.contains(&v));
                }
            }
        }
    }
}
