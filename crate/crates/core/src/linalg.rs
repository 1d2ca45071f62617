//! Dense exact linear algebra over a finite field.
//!
//! Matrices act on column vectors. Subspaces are stored by a canonical basis:
//! the columns of the basis matrix are the rows of the reduced row-echelon
//! form of any spanning set, so two subspaces are equal exactly when their
//! basis matrices are.

use std::fmt;

use thiserror::Error;

use crate::fields::Field;
use crate::polynomials::MPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("matrices live over different fields")]
    FieldMismatch,
    #[error("operators {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("polynomial has {vars} variables but {ops} operators were supplied")]
    Arity { vars: usize, ops: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|&x| self.field.format(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    pub fn scalar(field: &Field, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(&x) = data.iter().find(|&&x| x >= field.order()) {
            return Err(LinalgError::Shape(format!("entry code {x} is outside {field}")));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Builds a matrix from integer rows reduced into the prime subfield.
    pub fn from_rows(field: &Field, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(LinalgError::Shape("ragged rows".into()));
            }
            data.extend(r.iter().map(|&x| field.from_int(x)));
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols: ncols, data })
    }

    /// Matrix whose columns are the given vectors, all of length `len`.
    pub fn from_columns(field: &Field, len: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, len, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in 0..len {
                m.data[i * m.cols + j] = c[i];
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Same entries viewed over a larger field sharing the encoding.
    pub fn over(&self, field: &Field) -> Self {
        assert!(field.contains_subfield(&self.field), "{} is not a subfield of {field}", self.field);
        Matrix { field: field.clone(), ..self.clone() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    fn compatible(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.compatible(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.compatible(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    if b != 0 {
                        *d = f.add(*d, f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = &self.field;
        Matrix { data: self.data.iter().map(|&x| f.mul(c, x)).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Matrix {
        let f = &self.field;
        Matrix { data: self.data.iter().map(|&x| f.neg(x)).collect(), ..self.clone() }
    }

    pub fn pow(&self, n: u32) -> Matrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Matrix::identity(&self.field, self.rows);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    /// Copies `block` into `self` with its top-left corner at (r0, c0),
    /// multiplied by `sign` (±1 as a field element).
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Matrix, sign: u32) {
        let f = self.field.clone();
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = block.get(r, c);
                if v != 0 {
                    self.set(r0 + r, c0 + c, f.mul(sign, v));
                }
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut b = Matrix::zeros(&self.field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                b.set(r, c, self.get(r0 + r, c0 + c));
            }
        }
        b
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m.get(row, c);
                m.set(row, c, f.mul(inv, v));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for c in col..m.cols {
                    let pv = m.get(row, c);
                    if pv != 0 {
                        let v = m.get(r, c);
                        m.set(r, c, f.add(v, f.mul(neg, pv)));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        // forward elimination only
        let f = &self.field;
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(piv) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != rank {
                for c in col..m.cols {
                    m.data.swap(piv * m.cols + c, rank * m.cols + c);
                }
            }
            let inv = f.inv(m.get(rank, col)).expect("pivot is nonzero");
            for r in rank + 1..m.rows {
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                let k = f.neg(f.mul(factor, inv));
                for c in col..m.cols {
                    let pv = m.get(rank, c);
                    if pv != 0 {
                        let v = m.get(r, c);
                        m.set(r, c, f.add(v, f.mul(k, pv)));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn kernel_basis(&self) -> Subspace {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut vectors = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(i, free));
            }
            vectors.push(v);
        }
        Subspace::span(f, self.cols, &vectors)
    }

    pub fn image_basis(&self) -> Subspace {
        let cols: Vec<Vec<u32>> = (0..self.cols).map(|c| self.column(c)).collect();
        Subspace::span(&self.field, self.rows, &cols)
    }

    /// A solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        let mut aug = Matrix::zeros(f, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red.get(i, self.cols);
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it is invertible.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        aug.put_block(0, 0, self, 1);
        aug.put_block(0, n, &Matrix::identity(&self.field, n), 1);
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(red.block(0, n, n, n))
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum")
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_add(&rhs.neg()).expect("matrix difference")
    }
}

/// A subspace of F^n held by its canonical basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn span(field: &Field, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let mut rows = Matrix::zeros(field, vectors.len(), ambient);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), ambient, "vector length differs from ambient dimension");
            rows.data[i * ambient..(i + 1) * ambient].copy_from_slice(v);
        }
        let (red, pivots) = rows.rref();
        let basis_rows: Vec<Vec<u32>> = (0..pivots.len()).map(|i| red.row(i).to_vec()).collect();
        Subspace { ambient, basis: Matrix::from_columns(field, ambient, &basis_rows) }
    }

    pub fn zero(field: &Field, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(field, ambient, 0) }
    }

    pub fn full(field: &Field, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(field, ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    /// Basis vectors as the columns of a matrix.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<u32>> {
        (0..self.dim()).map(|c| self.basis.column(c)).collect()
    }

    fn check(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::Shape(format!(
                "ambient dimensions {} and {} differ",
                self.ambient, other.ambient
            )));
        }
        if self.basis.field != other.basis.field {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(())
    }

    /// Whether the two spans coincide.
    pub fn equals(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check(other)?;
        Ok(self.basis == other.basis)
    }

    /// Whether `inner` is contained in `self`.
    pub fn contains(&self, inner: &Subspace) -> Result<bool, LinalgError> {
        self.check(inner)?;
        let mut all = self.vectors();
        all.extend(inner.vectors());
        Ok(Subspace::span(&self.basis.field, self.ambient, &all).dim() == self.dim())
    }
}

pub fn subspace_equal(u: &Subspace, v: &Subspace) -> Result<bool, LinalgError> {
    u.equals(v)
}

/// Whether `inner ⊆ outer`.
pub fn subspace_contains(outer: &Subspace, inner: &Subspace) -> Result<bool, LinalgError> {
    outer.contains(inner)
}

/// Checks that the operators are square, equally sized, over one field and
/// pairwise commuting.
pub fn check_commuting(ops: &[Matrix]) -> Result<(), LinalgError> {
    if let Some(first) = ops.first() {
        for (i, t) in ops.iter().enumerate() {
            if !t.is_square() || t.rows != first.rows {
                return Err(LinalgError::Shape(format!("operator {} is {}x{}", i + 1, t.rows, t.cols)));
            }
            if t.field != first.field {
                return Err(LinalgError::FieldMismatch);
            }
        }
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if &ops[i] * &ops[j] != &ops[j] * &ops[i] {
                    return Err(LinalgError::NotCommuting(i + 1, j + 1));
                }
            }
        }
    }
    Ok(())
}

/// g(T₁, …, T_d) for pairwise-commuting operators.
pub fn evaluate_poly_at_operators(g: &MPoly, ops: &[Matrix]) -> Result<Matrix, LinalgError> {
    if g.nvars() != ops.len() {
        return Err(LinalgError::Arity { vars: g.nvars(), ops: ops.len() });
    }
    if ops.is_empty() {
        return Err(LinalgError::Shape("no operators supplied".into()));
    }
    check_commuting(ops)?;
    if ops[0].field() != g.field() && !ops[0].field().contains_subfield(g.field()) {
        return Err(LinalgError::FieldMismatch);
    }
    Ok(evaluate_unchecked(g, ops))
}

/// Evaluation without the commutation check; callers guarantee validity.
pub(crate) fn evaluate_unchecked(g: &MPoly, ops: &[Matrix]) -> Matrix {
    let field = ops[0].field().clone();
    let n = ops[0].rows();
    let mut powers: Vec<Vec<Matrix>> = ops.iter().map(|t| vec![Matrix::identity(&field, n), t.clone()]).collect();
    let mut acc = Matrix::zeros(&field, n, n);
    for (exps, coeff) in g.terms() {
        let mut term = Matrix::scalar(&field, n, coeff);
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e as usize {
                let next = &powers[i][powers[i].len() - 1] * &ops[i];
                powers[i].push(next);
            }
            term = &term * &powers[i][e as usize];
        }
        acc = &acc + &term;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::PolyRing;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let f = f5();
        let a = Matrix::from_rows(&f, &[vec![1, 2], vec![3, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(&f, 2));
        assert!(Matrix::from_rows(&f, &[vec![1, 2], vec![2, 4]]).unwrap().inverse().is_none());
        assert_eq!(Matrix::zeros(&f, 0, 0).inverse(), Some(Matrix::zeros(&f, 0, 0)));
    }

    #[test]
    fn identity_and_zero() {
        let f = f5();
        let i = Matrix::identity(&f, 4);
        assert_eq!(i.rank(), 4);
        assert_eq!(i.kernel_basis().dim(), 0);
        let z = Matrix::zeros(&f, 3, 5);
        assert_eq!(z.rank(), 0);
        assert!(z.kernel_basis().equals(&Subspace::full(&f, 5)).unwrap());
    }

    #[test]
    fn rank_one_kernel() {
        let f = f5();
        let a = Matrix::from_rows(&f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(a.rank(), 1);
        let k = a.kernel_basis();
        assert_eq!(k.dim(), 1);
        let expected = Subspace::span(&f, 2, &[vec![3, 1]]);
        assert!(k.equals(&expected).unwrap());
    }

    #[test]
    fn subspace_relations() {
        let f = f5();
        let e1 = Subspace::span(&f, 2, &[vec![1, 0]]);
        let two_e1 = Subspace::span(&f, 2, &[vec![2, 0]]);
        let plane = Subspace::span(&f, 2, &[vec![1, 0], vec![0, 1]]);
        assert!(subspace_equal(&e1, &two_e1).unwrap());
        assert!(subspace_contains(&plane, &e1).unwrap());
        assert!(!subspace_contains(&e1, &plane).unwrap());
        let other = Subspace::span(&f, 3, &[vec![1, 0, 0]]);
        assert!(e1.equals(&other).is_err());
    }

    #[test]
    fn square_zero_image_is_kernel() {
        for p in [2, 3, 7] {
            let f = Field::prime(p).unwrap();
            let n = Matrix::from_rows(&f, &[vec![0, 1], vec![0, 0]]).unwrap();
            assert!(n.image_basis().equals(&n.kernel_basis()).unwrap());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = f5();
        let a = Matrix::from_rows(&f, &[vec![1, 2], vec![2, 4]]).unwrap();
        let x = a.solve(&[3, 1]).unwrap();
        assert_eq!(a.apply(&x), vec![3, 1]);
        assert!(a.solve(&[1, 0]).is_none());
    }

    #[test]
    fn evaluate_constant_and_product() {
        let f = Field::prime(3).unwrap();
        let ring = PolyRing::new(&f, &["t1", "t2"]);
        let t1 = Matrix::from_rows(&f, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        let t2 = &t1 * &t1;
        let ops = [t1.clone(), t2.clone()];
        assert_eq!(evaluate_poly_at_operators(&ring.one(), &ops).unwrap(), Matrix::identity(&f, 3));
        let g = ring.parse("t1*t2").unwrap();
        assert_eq!(evaluate_poly_at_operators(&g, &ops).unwrap(), &t1 * &t2);
    }

    #[test]
    fn evaluate_rejects_noncommuting() {
        let f = Field::prime(2).unwrap();
        let ring = PolyRing::new(&f, &["t1", "t2"]);
        let a = Matrix::from_rows(&f, &[vec![0, 1], vec![0, 0]]).unwrap();
        let b = Matrix::from_rows(&f, &[vec![0, 0], vec![1, 0]]).unwrap();
        let err = evaluate_poly_at_operators(&ring.parse("t1").unwrap(), &[a, b]).unwrap_err();
        assert_eq!(err, LinalgError::NotCommuting(1, 2));
    }

    #[test]
    fn frobenius_identity_on_commuting_operators() {
        // (t1 + t2)^p = t1^p + t2^p in characteristic p, checked on operators
        for p in [2u32, 3, 5] {
            let f = Field::prime(p).unwrap();
            let ring = PolyRing::new(&f, &["t1", "t2"]);
            let n = 4;
            let mut shift = Matrix::zeros(&f, n, n);
            for i in 0..n - 1 {
                shift.set(i, i + 1, 1);
            }
            let t1 = &Matrix::scalar(&f, n, 2 % p) + &shift;
            let t2 = &(&shift * &shift) + &Matrix::scalar(&f, n, 1);
            let ops = [t1.clone(), t2.clone()];
            let lhs = evaluate_poly_at_operators(&ring.parse(&format!("(t1+t2)^{p}")).unwrap(), &ops).unwrap();
            let rhs = &t1.pow(p) + &t2.pow(p);
            assert_eq!(lhs, rhs);
        }
    }
}
