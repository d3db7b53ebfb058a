//! Dense exact linear algebra: reduced row-echelon forms, kernels, ranks.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::field::{is_p_integral, is_p_unit, Field, FieldError, PrimeField, Rationals, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {found}")]
    Shape { rows: usize, cols: usize, expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
}

/// A dense row-major matrix over `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Output of [`Matrix::row_reduce`].
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F: Field> {
    pub rref: Matrix<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Self { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_vec(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape { rows, cols, expected: rows * cols, found: data.len() });
        }
        Ok(Self { field, rows, cols, data })
    }

    /// Builds a matrix from tagged scalars; every tag must match `field`.
    pub fn from_scalars(field: F, rows: usize, cols: usize, entries: &[Scalar]) -> Result<Self, LinalgError> {
        let data = entries.iter().map(|s| field.from_scalar(s)).collect::<Result<Vec<_>, _>>()?;
        Self::from_vec(field, rows, cols, data)
    }

    /// Rows of equal length `cols`; an empty row list gives a `0 x cols` matrix.
    pub fn from_rows(field: F, cols: usize, rows: &[Vec<F::Elem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Self { field, rows: rows.len(), cols, data }
    }

    /// Columns of equal length `rows`.
    pub fn from_columns(field: F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(field, rows, cols);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols + j] = x.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::Field(FieldError::TagMismatch {
                expected: self.field.tag(),
                found: other.field.tag(),
            }));
        }
        if self.cols != other.rows {
            return Err(LinalgError::Dimension("inner dimensions differ"));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                let neg = f.neg(a);
                let row = other.row(k).to_vec();
                f.sub_scaled(&mut out.data[i * other.cols..(i + 1) * other.cols], &neg, &row);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    /// The unique reduced row-echelon form, with strictly increasing pivot columns.
    pub fn row_reduce(&self) -> Rref<F> {
        let (rref, pivots, _) = self.row_reduce_inner();
        let rank = pivots.len();
        Rref { rref, pivots, rank }
    }

    /// Same elimination as [`row_reduce`](Self::row_reduce), also returning the
    /// pivot values met before normalization.
    fn row_reduce_inner(&self) -> (Self, Vec<usize>, Vec<F::Elem>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut pivot_values = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(sel) = (r..rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if sel != r {
                for j in 0..cols {
                    m.data.swap(sel * cols + j, r * cols + j);
                }
            }
            let pv = m.get(r, c).clone();
            let inv = f.inv(&pv).expect("nonzero pivot");
            f.scale(&mut m.data[r * cols..(r + 1) * cols], &inv);
            let pivot_row = m.row(r).to_vec();
            for i in 0..rows {
                if i != r {
                    let factor = m.get(i, c).clone();
                    if !f.is_zero(&factor) {
                        f.sub_scaled(&mut m.data[i * cols..(i + 1) * cols], &factor, &pivot_row);
                    }
                }
            }
            pivots.push(c);
            pivot_values.push(pv);
            r += 1;
        }
        (m, pivots, pivot_values)
    }

    pub fn rank(&self) -> usize {
        let mut span = EchelonSpan::new(self.field.clone(), self.cols);
        for r in 0..self.rows {
            span.insert(self.row(r).to_vec());
            if span.rank() == self.cols {
                break;
            }
        }
        span.rank()
    }

    /// A basis of `{x : M x = 0}`, one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let Rref { rref, pivots, .. } = self.row_reduce();
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(rref.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// The linear map columns -> rows is onto.
    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }
}

/// A subspace of `F^len` kept in semi-echelon form, for incremental rank and
/// membership queries.
#[derive(Clone, Debug)]
pub struct EchelonSpan<F: Field> {
    field: F,
    len: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> EchelonSpan<F> {
    pub fn new(field: F, len: usize) -> Self {
        Self { field, len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<F::Elem>>>(field: F, len: usize, vs: I) -> Self {
        let mut s = Self::new(field, len);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Basis vectors (leading coefficient 1 at distinct pivot columns).
    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn reduce(&self, v: &mut [F::Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !self.field.is_zero(&v[p]) {
                let factor = v[p].clone();
                self.field.sub_scaled(v, &factor, row);
            }
        }
    }

    /// Adds `v`; returns `true` if the span grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        debug_assert_eq!(v.len(), self.len);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !self.field.is_zero(x)) else {
            return false;
        };
        let inv = self.field.inv(&v[p]).expect("nonzero");
        self.field.scale(&mut v, &inv);
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    pub fn contains_span(&self, other: &EchelonSpan<F>) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    pub fn same_span(&self, other: &EchelonSpan<F>) -> bool {
        self.rank() == other.rank() && self.contains_span(other)
    }
}

/// A subspace with a fully reduced basis, so that coordinates of a member
/// vector are read off at the pivot columns.
#[derive(Clone, Debug)]
pub struct ReducedBasis<F: Field> {
    field: F,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> ReducedBasis<F> {
    pub fn from_vectors(field: F, len: usize, vs: &[Vec<F::Elem>]) -> Self {
        let m = Matrix::from_rows(field.clone(), len, vs);
        let Rref { rref, pivots, rank } = m.row_reduce();
        let rows = (0..rank).map(|r| rref.row(r).to_vec()).collect();
        Self { field, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let coords: Vec<F::Elem> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut w = v.to_vec();
        for (c, row) in coords.iter().zip(&self.rows) {
            self.field.sub_scaled(&mut w, c, row);
        }
        w.iter().all(|x| self.field.is_zero(x)).then_some(coords)
    }
}

/// Rank of a rational matrix compared with the rank of its reduction mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularRank {
    pub rational: usize,
    pub modular: Option<usize>,
    /// Some entry had `p` in its denominator, or a pivot of the rational
    /// elimination was divisible by `p`. Without this event the two ranks agree.
    pub bad_prime: bool,
}

/// Reduces a rational matrix modulo `p`; `None` when an entry is not `p`-integral.
pub fn reduce_mod_p(m: &Matrix<Rationals>, field: &PrimeField) -> Option<Matrix<PrimeField>> {
    let data = m.data.iter().map(|q| field.reduce_rational(q)).collect::<Option<Vec<_>>>()?;
    Some(Matrix { field: *field, rows: m.rows, cols: m.cols, data })
}

pub fn rank_mod_p_check(m: &Matrix<Rationals>, field: &PrimeField) -> ModularRank {
    let p = field.modulus();
    let (_, pivots, pivot_values) = m.row_reduce_inner();
    let entries_ok = m.data.iter().all(|q| is_p_integral(q, p));
    let pivots_ok = pivot_values.iter().all(|q: &BigRational| is_p_unit(q, p));
    let modular = reduce_mod_p(m, field).map(|r| r.rank());
    ModularRank { rational: pivots.len(), modular, bad_prime: !(entries_ok && pivots_ok) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};
    use proptest::prelude::*;

    fn q_matrix(rows: usize, cols: usize, entries: &[i64]) -> Matrix<Rationals> {
        let data = entries.iter().map(|&x| Rationals.from_i64(x)).collect();
        Matrix::from_vec(Rationals, rows, cols, data).unwrap()
    }

    #[test]
    fn identity_reduces_to_itself() {
        let id = Matrix::identity(Rationals, 2);
        let r = id.row_reduce();
        assert_eq!(r.rref, id);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn zero_matrix() {
        let z = Matrix::zeros(Rationals, 3, 4);
        let r = z.row_reduce();
        assert_eq!(r.rref, z);
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
        assert_eq!(Matrix::zeros(Rationals, 2, 3).kernel_basis().len(), 3);
    }

    #[test]
    fn dependent_rows() {
        let m = q_matrix(2, 2, &[1, 2, 2, 4]);
        let r = m.row_reduce();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(Rationals, 3).kernel_basis().is_empty());
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_vec(f, 1, 2, vec![1, 1]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (1, 4)
        let v = &k[0];
        let scale = f.inv(&v[0]).unwrap();
        assert_eq!(f.mul(&v[1], &scale), 4);
    }

    #[test]
    fn surjectivity() {
        let m = q_matrix(2, 4, &[1, 0, 2, 0, 0, 1, 0, 3]);
        assert!(m.is_surjective());
        let tall = q_matrix(3, 2, &[1, 0, 0, 1, 1, 1]);
        assert!(!tall.is_surjective());
        let vdm = q_matrix(3, 3, &[1, 0, 0, 1, 1, 1, 1, 2, 4]);
        assert!(vdm.is_surjective());
    }

    #[test]
    fn mixed_tags_rejected() {
        let entries = [Scalar::Prime { value: 1, p: 5 }, Scalar::Prime { value: 1, p: 7 }];
        let f = PrimeField::new(5).unwrap();
        assert!(matches!(Matrix::from_scalars(f, 1, 2, &entries), Err(LinalgError::Field(_))));
        let g = PrimeField::new(7).unwrap();
        let a = Matrix::identity(f, 2);
        let b = Matrix::identity(g, 2);
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn reduced_basis_coordinates() {
        let q = Rationals;
        let vs = vec![
            vec![q.from_i64(1), q.from_i64(1), q.from_i64(0)],
            vec![q.from_i64(0), q.from_i64(1), q.from_i64(1)],
        ];
        let b = ReducedBasis::from_vectors(q, 3, &vs);
        let target = vec![q.from_i64(2), q.from_i64(5), q.from_i64(3)];
        let c = b.coordinates(&target).unwrap();
        assert_eq!(c.len(), 2);
        assert!(b.coordinates(&[q.from_i64(1), q.from_i64(0), q.from_i64(0)]).is_none());
    }

    #[test]
    fn bad_prime_is_reported() {
        let f = PrimeField::new(7).unwrap();
        let m = q_matrix(2, 2, &[1, 2, 3, 13]); // det 7
        let r = rank_mod_p_check(&m, &f);
        assert_eq!(r.rational, 2);
        assert_eq!(r.modular, Some(1));
        assert!(r.bad_prime);
    }

    fn small_matrix(max_dim: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec(-10i64..=10, r * c))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_bounds_and_transpose((r, c, e) in small_matrix(6)) {
            let m = q_matrix(r, c, &e);
            let rk = m.rank();
            prop_assert!(rk <= r.min(c));
            prop_assert_eq!(rk, m.transpose().rank());
            prop_assert_eq!(rk, m.row_reduce().rank);
        }

        #[test]
        fn kernel_is_annihilated((r, c, e) in small_matrix(6)) {
            let m = q_matrix(r, c, &e);
            let k = m.kernel_basis();
            prop_assert_eq!(k.len(), c - m.rank());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|x| Rationals.is_zero(x)));
            }
        }

        #[test]
        fn rref_is_idempotent((r, c, e) in small_matrix(6)) {
            let m = q_matrix(r, c, &e);
            let once = m.row_reduce();
            let twice = once.rref.row_reduce();
            prop_assert_eq!(&once.rref, &twice.rref);
            prop_assert_eq!(once.pivots, twice.pivots);
        }

        #[test]
        fn product_rank_bound((n, e1, e2) in (1usize..5).prop_flat_map(|n| (Just(n), proptest::collection::vec(-3i64..=3, n*n), proptest::collection::vec(-3i64..=3, n*n)))) {
            let a = q_matrix(n, n, &e1);
            let b = q_matrix(n, n, &e2);
            let ab = a.mul(&b).unwrap();
            prop_assert!(ab.rank() <= a.rank().min(b.rank()));
        }

        #[test]
        fn rational_and_modular_ranks_agree((r, c, e) in small_matrix(7)) {
            let m = q_matrix(r, c, &e);
            let f = PrimeField::new(DEFAULT_PRIME).unwrap();
            let check = rank_mod_p_check(&m, &f);
            if !check.bad_prime {
                prop_assert_eq!(Some(check.rational), check.modular);
            }
        }
    }
}
