//! Linear codes, duals, hulls and the operations that move hull dimension:
//! column scaling, permutation, sums and dual-word extension.

use rand::Rng;
use thiserror::Error;

use crate::exec::{fold_codewords, message_count, Exec};
use crate::gf::{Felt, Field, GfError};
use crate::matgf::{MatError, MatGF};

/// Default ceiling on `q^k` for exhaustive enumeration.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("generator matrix has no nonzero row")]
    ZeroCode,
    #[error("code has length 0")]
    EmptyLength,
    #[error("enumeration needs q^k = {needed} codewords, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("scaling vector has a zero entry at coordinate {0}")]
    ZeroScalar(usize),
    #[error("length mismatch: {0}")]
    Length(String),
    #[error("{0} is not a permutation of 1..={1}")]
    BadPermutation(String, usize),
    #[error("dual vector is invalid: {0}")]
    BadDualWord(String),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// An `[n, k]` code given by a full-rank generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    g: MatGF,
    input_rows: usize,
}

/// The dual of a code; the dual of the whole space is the zero code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualCode {
    Code(LinearCode),
    Zero { n: usize },
}

/// `Hull(C) = C ∩ C⊥` with a basis in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullReport {
    pub dim: usize,
    pub basis: MatGF,
}

/// The three rank formulas for the hull dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HullDims {
    /// `n - rank(G; H)`
    pub from_stack: usize,
    /// `k - rank(G G^T)`
    pub from_gram: usize,
    /// `(n - k) - rank(H H^T)`
    pub from_dual_gram: usize,
}

/// `[I_k | P]` generating a code equivalent to the input, and the column
/// order used: column `i` of the form is column `perm[i]` of the input
/// (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    pub generator: MatGF,
    pub perm: Vec<usize>,
}

/// A vector of nonzero column multipliers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingVector(Vec<Felt>);

impl ScalingVector {
    pub fn new(a: Vec<Felt>) -> Result<Self, CodeError> {
        if let Some(i) = a.iter().position(|x| x.is_zero()) {
            return Err(CodeError::ZeroScalar(i + 1));
        }
        Ok(ScalingVector(a))
    }

    pub fn ones(n: usize) -> Self {
        ScalingVector(vec![Felt::ONE; n])
    }

    /// All ones except `value` at 0-based coordinate `j`.
    pub fn unit(n: usize, j: usize, value: Felt) -> Result<Self, CodeError> {
        let mut a = vec![Felt::ONE; n];
        a[j] = value;
        ScalingVector::new(a)
    }

    pub fn entries(&self) -> &[Felt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self, f: &Field) -> Self {
        ScalingVector(self.0.iter().map(|&x| f.inv(x).expect("nonzero")).collect())
    }

    /// Coordinatewise product.
    pub fn compose(&self, other: &ScalingVector, f: &Field) -> Self {
        ScalingVector(self.0.iter().zip(&other.0).map(|(&x, &y)| f.mul(x, y)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&x| x == Felt::ONE)
    }
}

impl LinearCode {
    /// Builds a code from any generator matrix: rows that are dependent on
    /// earlier rows are dropped, the remaining rows are kept as given.
    pub fn new(g: MatGF) -> Result<LinearCode, CodeError> {
        if g.cols() == 0 {
            return Err(CodeError::EmptyLength);
        }
        let f = g.field().clone();
        let mut keep: Vec<usize> = Vec::new();
        let mut acc = MatGF::zeros(&f, 0, g.cols());
        for r in 0..g.rows() {
            let cand = acc.vstack(&g.select_rows(&[r]))?;
            if cand.rank() == keep.len() + 1 {
                keep.push(r);
                acc = cand;
            }
        }
        if keep.is_empty() {
            return Err(CodeError::ZeroCode);
        }
        Ok(LinearCode { input_rows: g.rows(), g: acc })
    }

    pub fn parse(field: &Field, text: &str) -> Result<LinearCode, CodeError> {
        LinearCode::new(MatGF::parse(field, text)?)
    }

    pub fn field(&self) -> &Field {
        self.g.field()
    }

    pub fn n(&self) -> usize {
        self.g.cols()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn generator(&self) -> &MatGF {
        &self.g
    }

    /// Number of rows in the matrix the code was built from.
    pub fn input_rows(&self) -> usize {
        self.input_rows
    }

    /// `G G^T`.
    pub fn gram(&self) -> MatGF {
        self.g.gram()
    }

    /// A generator matrix of the dual, `(n - k) x n`; empty when `k = n`.
    pub fn parity_check(&self) -> MatGF {
        self.g.null_space()
    }

    pub fn dual(&self) -> DualCode {
        let h = self.parity_check();
        if h.rows() == 0 {
            DualCode::Zero { n: self.n() }
        } else {
            DualCode::Code(LinearCode { input_rows: h.rows(), g: h })
        }
    }

    pub fn hull_dims(&self) -> HullDims {
        let h = self.parity_check();
        let stack = self.g.vstack(&h).expect("same width");
        HullDims {
            from_stack: self.n() - stack.rank(),
            from_gram: self.k() - self.gram().rank(),
            from_dual_gram: h.rows() - h.gram().rank(),
        }
    }

    pub fn hull(&self) -> HullReport {
        let dims = self.hull_dims();
        assert!(
            dims.from_stack == dims.from_gram && dims.from_gram == dims.from_dual_gram,
            "hull rank formulas disagree: {dims:?}"
        );
        // m G lies in the hull iff G (m G)^T = 0 iff (G G^T) m^T = 0
        let coeffs = self.gram().null_space();
        let basis = if coeffs.rows() == 0 {
            MatGF::zeros(self.field(), 0, self.n())
        } else {
            let r = coeffs.matmul(&self.g).expect("shapes agree").rref();
            r.matrix.select_rows(&(0..r.rank).collect::<Vec<_>>())
        };
        assert_eq!(basis.rows(), dims.from_gram);
        HullReport { dim: dims.from_gram, basis }
    }

    pub fn is_lcd(&self) -> bool {
        self.hull().dim == 0
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.gram().is_zero()
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.k() == self.n() && self.is_self_orthogonal()
    }

    /// Same code (equal row spaces).
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.field() == other.field()
            && self.n() == other.n()
            && self.g.same_row_space(&other.g).unwrap_or(false)
    }

    pub fn contains(&self, v: &[Felt]) -> Result<bool, CodeError> {
        self.check_len(v.len())?;
        Ok(self.g.row_space_contains(v)?)
    }

    /// True when some unit vector `e_i` is a codeword, i.e. `d(C) = 1`.
    pub fn has_weight_one_word(&self) -> bool {
        let h = self.parity_check();
        (0..self.n()).any(|c| (0..h.rows()).all(|r| h.get(r, c).is_zero()))
    }

    fn budget_check(&self, budget: u128) -> Result<(), CodeError> {
        let needed = message_count(self.field().order(), self.k());
        if needed > budget {
            return Err(CodeError::BudgetExceeded { needed, budget });
        }
        Ok(())
    }

    /// Exact minimum distance by enumerating all `q^k` codewords.
    pub fn minimum_distance(&self, budget: u128) -> Result<usize, CodeError> {
        self.minimum_distance_with(budget, Exec::default())
    }

    pub fn minimum_distance_with(&self, budget: u128, exec: Exec) -> Result<usize, CodeError> {
        self.budget_check(budget)?;
        let d = fold_codewords(
            &self.g,
            exec,
            || usize::MAX,
            |best: &mut usize, w| {
                let wt = w.iter().filter(|x| !x.is_zero()).count();
                if wt > 0 && wt < *best {
                    *best = wt;
                }
            },
            usize::min,
        );
        Ok(d)
    }

    /// Singleton bound met with equality.
    pub fn is_mds(&self, budget: u128) -> Result<bool, CodeError> {
        Ok(self.minimum_distance(budget)? == self.n() - self.k() + 1)
    }

    /// Hull dimension from first principles: counts codewords orthogonal to
    /// every row of `G` and takes the base-q logarithm.
    pub fn hull_oracle(&self, budget: u128) -> Result<usize, CodeError> {
        self.hull_oracle_with(budget, Exec::default())
    }

    pub fn hull_oracle_with(&self, budget: u128, exec: Exec) -> Result<usize, CodeError> {
        self.budget_check(budget)?;
        let f = self.field().clone();
        let g = &self.g;
        let count = fold_codewords(
            g,
            exec,
            || 0u128,
            |c: &mut u128, w| {
                if g.row_iter().all(|r| f.dot(r, w).is_zero()) {
                    *c += 1;
                }
            },
            |a, b| a + b,
        );
        let q = f.order() as u128;
        let mut ell = 0;
        let mut rest = count;
        while rest > 1 {
            assert_eq!(rest % q, 0, "hull size {count} is not a power of {q}");
            rest /= q;
            ell += 1;
        }
        Ok(ell)
    }

    /// The code `C_a = {(a_1 c_1, .., a_n c_n) : c ∈ C}`.
    pub fn scale(&self, a: &ScalingVector) -> Result<LinearCode, CodeError> {
        self.check_len(a.len())?;
        Ok(LinearCode { input_rows: self.input_rows, g: self.g.scale_cols(a.entries())? })
    }

    /// Checks `(C_a)⊥ = (C⊥)_{a^{-1}}`.
    pub fn dual_scaling_law_check(&self, a: &ScalingVector) -> Result<bool, CodeError> {
        let f = self.field();
        let lhs = self.scale(a)?.parity_check();
        let rhs = self.parity_check().scale_cols(a.inverse(f).entries())?;
        Ok(lhs.same_row_space(&rhs)?)
    }

    /// Column permutation with 1-based `sigma`: new column `i` is old column
    /// `sigma(i)`. Hull dimension is preserved.
    pub fn permute(&self, sigma: &[usize]) -> Result<LinearCode, CodeError> {
        let n = self.n();
        let mut seen = vec![false; n];
        for &s in sigma {
            if s == 0 || s > n || std::mem::replace(&mut seen[s - 1], true) {
                return Err(CodeError::BadPermutation(format!("{sigma:?}"), n));
            }
        }
        if sigma.len() != n {
            return Err(CodeError::BadPermutation(format!("{sigma:?}"), n));
        }
        let cols: Vec<usize> = sigma.iter().map(|s| s - 1).collect();
        let out = LinearCode { input_rows: self.input_rows, g: self.g.select_cols(&cols) };
        assert_eq!(out.hull_dims(), self.hull_dims());
        Ok(out)
    }

    /// `C1 + C2`; its dimension is `k1 + k2 - dim(C1 ∩ C2)`.
    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode, CodeError> {
        self.check_len(other.n())?;
        self.field().same(other.field())?;
        LinearCode::new(self.g.vstack(&other.g)?)
    }

    /// Dimension of `C1 ∩ C2`.
    pub fn intersection_dim(&self, other: &LinearCode) -> Result<usize, CodeError> {
        self.check_len(other.n())?;
        Ok(self.k() + other.k() - self.g.vstack(&other.g)?.rank())
    }

    /// The `[n+1, k+1]` code generated by `[[1 | d], [0 | G]]` for a dual
    /// word `d` with `1 + <d, d> = 0` (that is `<d, d> = 1` in characteristic
    /// 2). Its hull is one larger than the hull of `C`.
    pub fn extend_with_dual_word(&self, d: &[Felt]) -> Result<LinearCode, CodeError> {
        self.check_len(d.len())?;
        let f = self.field().clone();
        if d.iter().all(|x| x.is_zero()) {
            return Err(CodeError::BadDualWord("d is zero".into()));
        }
        if self.g.row_iter().any(|r| !f.dot(r, d).is_zero()) {
            return Err(CodeError::BadDualWord("d is not in the dual code".into()));
        }
        let dd = f.dot(d, d);
        if f.add(Felt::ONE, dd) != Felt::ZERO {
            return Err(CodeError::BadDualWord(format!("<d, d> = {} but must be -1", f.render(dd))));
        }
        let mut rows = Vec::with_capacity(self.k() + 1);
        rows.push(std::iter::once(Felt::ONE).chain(d.iter().copied()).collect::<Vec<_>>());
        for r in self.g.row_iter() {
            rows.push(std::iter::once(Felt::ZERO).chain(r.iter().copied()).collect());
        }
        let ext = LinearCode { input_rows: rows.len(), g: MatGF::from_rows(&f, rows)? };
        assert_eq!(ext.k(), self.k() + 1);
        // G_ex G_ex^T = diag(0, G G^T)
        let gram = ext.gram();
        let k = self.k();
        assert!((0..=k).all(|i| gram.get(0, i).is_zero() && gram.get(i, 0).is_zero()));
        assert_eq!(gram.submatrix(1..k + 1, 1..k + 1), self.gram());
        Ok(ext)
    }

    /// A generator `[I_k | P]` of an equivalent code.
    pub fn standard_form(&self) -> StandardForm {
        let r = self.g.rref();
        let mut perm = r.pivots.clone();
        perm.extend((0..self.n()).filter(|c| !r.pivots.contains(c)));
        let generator = r.matrix.select_cols(&perm);
        StandardForm { generator, perm }
    }

    fn check_len(&self, len: usize) -> Result<(), CodeError> {
        if len != self.n() {
            return Err(CodeError::Length(format!("expected {}, got {len}", self.n())));
        }
        Ok(())
    }
}

impl HullReport {
    pub fn is_trivial(&self) -> bool {
        self.dim == 0
    }
}

/// A uniformly random `[n, k]` code over `field`.
pub fn random_code<R: Rng + ?Sized>(field: &Field, n: usize, k: usize, rng: &mut R) -> LinearCode {
    assert!(1 <= k && k <= n, "need 1 <= k <= n");
    let q = field.order();
    loop {
        let rows: Vec<Vec<Felt>> = (0..k)
            .map(|_| (0..n).map(|_| Felt::from_code(rng.gen_range(0..q) as u16)).collect())
            .collect();
        let g = MatGF::from_rows(field, rows).expect("codes in range");
        if g.rank() == k {
            return LinearCode { input_rows: k, g };
        }
    }
}

/// A random scaling vector with nonzero entries.
pub fn random_scaling<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> ScalingVector {
    let nz = field.nonzero_elements();
    ScalingVector((0..n).map(|_| nz[rng.gen_range(0..nz.len())]).collect())
}
