//! Dense matrices over a finite field.
//!
//! Matrices are values: every operation returns a new matrix. Row reduction
//! uses the first nonzero entry in each column as pivot, so results are
//! deterministic. User-facing index sets ([`MatGF::delete_rc`]) are 1-based.

use std::fmt;

use thiserror::Error;

use crate::gf::{Felt, Field, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct MatGF {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Felt>,
}

/// Reduced row echelon form with its rank and (0-based) pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatGF,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for MatGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatGF {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  [{}]", self.field.render_row(self.row(r)))?;
        }
        Ok(())
    }
}

impl MatGF {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> MatGF {
        MatGF { field: field.clone(), rows, cols, data: vec![Felt::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> MatGF {
        let mut m = MatGF::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Felt::ONE;
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Felt>>) -> Result<MatGF, MatError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(MatError::Dimension(format!(
                "row {} has {} entries, expected {cols}",
                bad + 1,
                rows[bad].len()
            )));
        }
        let q = field.order();
        if rows.iter().flatten().any(|x| x.code() as u32 >= q) {
            return Err(MatError::Field(GfError::MixedFields));
        }
        let nrows = rows.len();
        Ok(MatGF { field: field.clone(), rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Parses rows of `0 | 1 | w | w^k` tokens separated by `;`.
    pub fn parse(field: &Field, text: &str) -> Result<MatGF, MatError> {
        let rows = text
            .split(';')
            .filter(|r| !r.trim().is_empty())
            .map(|r| field.parse_row(r))
            .collect::<Result<Vec<_>, _>>()?;
        MatGF::from_rows(field, rows)
    }

    pub fn row_vector(field: &Field, v: &[Felt]) -> MatGF {
        MatGF { field: field.clone(), rows: 1, cols: v.len(), data: v.to_vec() }
    }

    pub fn diag(field: &Field, d: &[Felt]) -> MatGF {
        let n = d.len();
        let mut m = MatGF::zeros(field, n, n);
        for (i, &x) in d.iter().enumerate() {
            m.data[i * n + i] = x;
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
    pub fn get(&self, r: usize, c: usize) -> Felt {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, x: Felt) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Felt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Felt]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<Felt>> {
        self.row_iter().map(<[Felt]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn check_field(&self, other: &MatGF) -> Result<(), MatError> {
        Ok(self.field.same(&other.field)?)
    }

    pub fn transpose(&self) -> MatGF {
        let mut t = MatGF::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn matmul(&self, other: &MatGF) -> Result<MatGF, MatError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(MatError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = MatGF::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(t, j)));
                }
            }
        }
        Ok(out)
    }

    /// `A A^T`, the Gram matrix of the rows.
    pub fn gram(&self) -> MatGF {
        let f = &self.field;
        let mut out = MatGF::zeros(f, self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let v = f.dot(self.row(i), self.row(j));
                out.data[i * self.rows + j] = v;
                out.data[j * self.rows + i] = v;
            }
        }
        out
    }

    pub fn add(&self, other: &MatGF) -> Result<MatGF, MatError> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatError::Dimension(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(MatGF { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn vstack(&self, other: &MatGF) -> Result<MatGF, MatError> {
        self.check_field(other)?;
        // an empty operand adopts the other's width
        if self.rows == 0 {
            return Ok(MatGF { cols: other.cols, ..other.clone() });
        }
        if other.rows == 0 {
            return Ok(self.clone());
        }
        if self.cols != other.cols {
            return Err(MatError::Dimension(format!("vstack of widths {} and {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatGF { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn hstack(&self, other: &MatGF) -> Result<MatGF, MatError> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(MatError::Dimension(format!("hstack of heights {} and {}", self.rows, other.rows)));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(MatGF { field: self.field.clone(), rows: self.rows, cols: self.cols + other.cols, data })
    }

    /// Rows `range` as a new matrix.
    pub fn select_rows(&self, idx: &[usize]) -> MatGF {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        MatGF { field: self.field.clone(), rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> MatGF {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            data.extend(idx.iter().map(|&c| self.get(r, c)));
        }
        MatGF { field: self.field.clone(), rows: self.rows, cols: idx.len(), data }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> MatGF {
        let r: Vec<usize> = rows.collect();
        let c: Vec<usize> = cols.collect();
        self.select_rows(&r).select_cols(&c)
    }

    pub fn scale_row(&self, r: usize, lambda: Felt) -> MatGF {
        let mut m = self.clone();
        for c in 0..self.cols {
            m.data[r * self.cols + c] = self.field.mul(lambda, self.get(r, c));
        }
        m
    }

    pub fn scale_col(&self, c: usize, lambda: Felt) -> MatGF {
        let mut m = self.clone();
        for r in 0..self.rows {
            m.data[r * self.cols + c] = self.field.mul(lambda, self.get(r, c));
        }
        m
    }

    /// Multiplies column `i` by `a[i]` for every `i`.
    pub fn scale_cols(&self, a: &[Felt]) -> Result<MatGF, MatError> {
        if a.len() != self.cols {
            return Err(MatError::Dimension(format!("{} scalars for {} columns", a.len(), self.cols)));
        }
        let f = &self.field;
        let mut m = self.clone();
        for r in 0..self.rows {
            for (c, &s) in a.iter().enumerate() {
                m.data[r * self.cols + c] = f.mul(s, self.get(r, c));
            }
        }
        Ok(m)
    }

    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, rank);
            let inv = f.inv(m.get(rank, c)).expect("nonzero pivot");
            for j in c..self.cols {
                let v = f.mul(inv, m.get(rank, j));
                m.set(rank, j, v);
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = m.get(r, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        Rref { matrix: m, rank, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Nonzero rows of the RREF.
    pub fn row_basis(&self) -> MatGF {
        let r = self.rref();
        let idx: Vec<usize> = (0..r.rank).collect();
        r.matrix.select_rows(&idx)
    }

    pub fn det(&self) -> Result<Felt, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Felt::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return Ok(Felt::ZERO);
            };
            if p != c {
                m.swap_rows(p, c);
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot)?;
            for r in c + 1..n {
                let factor = f.mul(m.get(r, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(c, j)));
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> Result<bool, MatError> {
        Ok(!self.det()?.is_zero())
    }

    /// Canonical basis of `{x : A x^T = 0}`, one row per free column of the RREF.
    pub fn null_space(&self) -> MatGF {
        let f = &self.field;
        let Rref { matrix, rank, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = MatGF::zeros(f, free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            out.set(i, fc, Felt::ONE);
            for (r, &pc) in pivots.iter().enumerate().take(rank) {
                out.set(i, pc, f.neg(matrix.get(r, fc)));
            }
        }
        out
    }

    /// Deletes the rows and columns listed in `indices` (1-based). Deleting
    /// every index yields the 1x1 matrix `(1)`.
    pub fn delete_rc(&self, indices: &[usize]) -> Result<MatGF, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return Err(MatError::IndexOutOfRange { index: bad, n });
        }
        let keep: Vec<usize> = (0..n).filter(|i| !indices.contains(&(i + 1))).collect();
        if keep.is_empty() {
            return Ok(MatGF::identity(&self.field, 1));
        }
        Ok(self.select_rows(&keep).select_cols(&keep))
    }

    /// Checks `det(M + diag(u)) = (prod_{j in J} u_j) det(M_J)` with `J` the
    /// support of `u`, after verifying its hypotheses: `det(M_I) = 0` for all
    /// `|I| <= t` and `1 <= wt(u) <= t + 1`. Hypothesis failures are errors,
    /// a false identity is `Ok(false)`.
    pub fn det_diag_perturb_identity_check(&self, u: &[Felt], t: usize) -> Result<bool, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if u.len() != n {
            return Err(MatError::Dimension(format!("u has length {}, matrix is {n}x{n}", u.len())));
        }
        let support: Vec<usize> = (0..n).filter(|&i| !u[i].is_zero()).map(|i| i + 1).collect();
        if support.is_empty() || support.len() > t + 1 {
            return Err(MatError::Hypothesis(format!(
                "wt(u) = {} outside 1..={}",
                support.len(),
                t + 1
            )));
        }
        for size in 0..=t.min(n) {
            for subset in subsets(n, size) {
                let minor = self.delete_rc(&subset)?;
                if !minor.det()?.is_zero() {
                    return Err(MatError::Hypothesis(format!("det(M_I) != 0 for I = {subset:?}")));
                }
            }
        }
        let f = &self.field;
        let lhs = self.add(&MatGF::diag(f, u))?.det()?;
        let prod = support.iter().fold(Felt::ONE, |acc, &j| f.mul(acc, u[j - 1]));
        let rhs = f.mul(prod, self.delete_rc(&support)?.det()?);
        Ok(lhs == rhs)
    }

    pub fn row_space_contains(&self, v: &[Felt]) -> Result<bool, MatError> {
        let m = MatGF::row_vector(&self.field, v);
        self.contains_row_space_of(&m)
    }

    /// `rowspace(other) ⊆ rowspace(self)`.
    pub fn contains_row_space_of(&self, other: &MatGF) -> Result<bool, MatError> {
        self.check_field(other)?;
        if other.rows == 0 {
            return Ok(true);
        }
        if self.rows > 0 && self.cols != other.cols {
            return Err(MatError::Dimension(format!("widths {} and {}", self.cols, other.cols)));
        }
        Ok(self.vstack(other)?.rank() == self.rank())
    }

    /// True when `rowspace(self) ⊆ rowspace(other)`.
    pub fn subspace_leq(&self, other: &MatGF) -> Result<bool, MatError> {
        other.contains_row_space_of(self)
    }

    /// Equality of row spaces.
    pub fn same_row_space(&self, other: &MatGF) -> Result<bool, MatError> {
        Ok(self.subspace_leq(other)? && other.subspace_leq(self)?)
    }
}

/// All `size`-subsets of `1..=n`, as sorted vectors.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, size, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(f: &Field, s: &str) -> MatGF {
        MatGF::parse(f, s).unwrap()
    }

    #[test]
    fn identity_and_transpose() {
        let f = Field::gf4();
        let a = m(&f, "1 w 0; w^2 1 w");
        assert_eq!(MatGF::identity(&f, 2).matmul(&a).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
        let b = m(&f, "1 1 1 1; 0 w 0 w");
        let c = m(&f, "w 0 0 1");
        let s = b.vstack(&c).unwrap();
        assert_eq!((s.rows(), s.cols()), (3, 4));
        assert!(matches!(b.matmul(&c), Err(MatError::Dimension(_))));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = MatGF::identity(&Field::gf4(), 2);
        let b = MatGF::identity(&Field::gf8(), 2);
        assert_eq!(a.matmul(&b), Err(MatError::Field(GfError::MixedFields)));
    }

    #[test]
    fn rref_examples() {
        let f = Field::gf4();
        let z = MatGF::zeros(&f, 2, 3).rref();
        assert_eq!((z.rank, z.pivots.len()), (0, 0));
        let i = MatGF::identity(&f, 3);
        assert_eq!(i.rref().matrix, i);
        let a = m(&f, "1 w; w^2 1");
        let r = a.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(a.det().unwrap(), Felt::ZERO);
    }

    #[test]
    fn det_examples() {
        let f8 = Field::gf8();
        let d = MatGF::diag(&f8, &[f8.add(Felt::ONE, f8.w(3)), f8.add(Felt::ONE, f8.w(2)), Felt::ONE]);
        let expected = f8.mul(f8.add(Felt::ONE, f8.w(3)), f8.add(Felt::ONE, f8.w(2)));
        assert_eq!(d.det().unwrap(), expected);
        assert!(!expected.is_zero());
        assert_eq!(MatGF::identity(&f8, 4).det().unwrap(), Felt::ONE);
        // I_3 + J over GF(4)
        let f4 = Field::gf4();
        let g = m(&f4, "0 1 1; 1 0 1; 1 1 0");
        assert_eq!(g.det().unwrap(), Felt::ZERO);
        assert_eq!(g.rank(), 2);
        assert!(matches!(m(&f4, "1 0").det(), Err(MatError::NotSquare { .. })));
    }

    #[test]
    fn det_odd_characteristic_sign() {
        let f = Field::default_for(3).unwrap();
        // [[0,1],[1,0]] has det -1 = 2
        let p = MatGF::from_rows(&f, vec![vec![Felt::ZERO, Felt::ONE], vec![Felt::ONE, Felt::ZERO]]).unwrap();
        assert_eq!(p.det().unwrap(), f.neg(Felt::ONE));
    }

    #[test]
    fn null_space_examples() {
        let f = Field::gf4();
        assert_eq!(MatGF::identity(&f, 3).null_space().rows(), 0);
        let z = MatGF::zeros(&f, 1, 3);
        assert_eq!(z.null_space(), MatGF::identity(&f, 3));
        let g2 = Field::gf2();
        let a = m(&g2, "1 1");
        assert_eq!(a.null_space(), m(&g2, "1 1"));
    }

    #[test]
    fn delete_rc_conventions() {
        let f = Field::gf4();
        let a = m(&f, "1 w 0; w^2 1 w; 0 0 1");
        assert_eq!(a.delete_rc(&[]).unwrap(), a);
        assert_eq!(a.delete_rc(&[1, 2, 3]).unwrap(), MatGF::identity(&f, 1));
        assert_eq!(MatGF::identity(&f, 3).delete_rc(&[2]).unwrap(), MatGF::identity(&f, 2));
        assert_eq!(a.delete_rc(&[4]), Err(MatError::IndexOutOfRange { index: 4, n: 3 }));
        assert_eq!(a.delete_rc(&[0]), Err(MatError::IndexOutOfRange { index: 0, n: 3 }));
    }

    #[test]
    fn det_perturbation_examples() {
        let f = Field::gf4();
        let a = f.w(1);
        assert_eq!(MatGF::zeros(&f, 2, 2).det_diag_perturb_identity_check(&[a, Felt::ZERO], 1), Ok(true));
        // zero diagonal, singular: [[0,1,1],[1,0,1],[1,1,0]]
        let m0 = m(&f, "0 1 1; 1 0 1; 1 1 0");
        for j in 0..3 {
            for &x in &f.nonzero_elements() {
                let mut u = vec![Felt::ZERO; 3];
                u[j] = x;
                // direct evaluation of both sides
                let lhs = m0.add(&MatGF::diag(&f, &u)).unwrap().det().unwrap();
                let rhs = f.mul(x, m0.delete_rc(&[j + 1]).unwrap().det().unwrap());
                assert_eq!(lhs, rhs);
                assert_eq!(m0.det_diag_perturb_identity_check(&u, 0), Ok(true));
            }
        }
    }

    #[test]
    fn det_perturbation_hypothesis_gate() {
        let f = Field::gf8();
        // singular but with a nonzero 3x3 principal minor
        let s = m(&f, "1 0 0 0; 0 1 0 0; 0 0 1 0; 0 0 0 0");
        let u = [Felt::ONE, Felt::ZERO, Felt::ZERO, Felt::ZERO];
        assert!(matches!(s.det_diag_perturb_identity_check(&u, 1), Err(MatError::Hypothesis(_))));
        assert!(matches!(
            s.det_diag_perturb_identity_check(&[Felt::ZERO; 4], 1),
            Err(MatError::Hypothesis(_))
        ));
    }

    #[test]
    fn subspace_relations() {
        let f = Field::gf2();
        let a = m(&f, "1 0");
        let b = m(&f, "0 1");
        assert!(a.subspace_leq(&a).unwrap());
        assert!(MatGF::zeros(&f, 1, 2).subspace_leq(&b).unwrap());
        assert!(!a.subspace_leq(&b).unwrap());
        assert!(b.row_space_contains(&[Felt::ZERO, Felt::ONE]).unwrap());
        assert!(matches!(a.subspace_leq(&m(&f, "1 0 1")), Err(MatError::Dimension(_))));
    }
}
