//! Brute-force homological checks on `A_S`: Hilbert functions, quadratic
//! generation of the ideal, and `Tor^A_{i,j}(k, k)` on a finite window.
//!
//! A window with no off-diagonal entry is consistency evidence only; an
//! off-diagonal entry is a proof that `A_S` is not Koszul.

pub mod bar;
pub mod model;
pub mod resolution;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::config::{ConfigError, Configuration};
use crate::field::{is_prime, primitive_integer_vector, Field, FieldTag, PrimeField, Rationals, DEFAULT_PRIME};
use crate::linalg::{EchelonSpan, Matrix};
use crate::monomials;

pub use bar::{bar_tor, BarCapacity};
pub use model::GradedModel;
pub use resolution::minimal_resolution_tor;

pub const DEFAULT_I_MAX: usize = 4;
pub const DEFAULT_J_MAX: usize = 6;
/// Largest bar term, in scalars per basis vector, the bar method will build.
pub const DEFAULT_BAR_BOUND: usize = 20_000;
pub const DEFAULT_SERIES_ORDER: usize = 50;
/// Primes tried by the modular driver before computing over `Q` directly.
pub const MAX_PRIME_ATTEMPTS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("window needs i_max <= j_max, got i_max = {i_max}, j_max = {j_max}")]
    Window { i_max: usize, j_max: usize },
    #[error("bar term at i = {}, j = {} has dimension {}, above the bound {}", .0.i, .0.j, .0.dim, .0.bound)]
    Capacity(BarCapacity),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TorMethod {
    /// Minimal graded free resolution of `k` over `A_S`.
    #[default]
    Resolution,
    /// Normalized bar complex.
    Bar,
}

impl TorMethod {
    pub fn name(self) -> &'static str {
        match self {
            TorMethod::Resolution => "resolution",
            TorMethod::Bar => "bar",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub i_max: usize,
    pub j_max: usize,
    pub method: TorMethod,
    pub bar_bound: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { i_max: DEFAULT_I_MAX, j_max: DEFAULT_J_MAX, method: TorMethod::default(), bar_bound: DEFAULT_BAR_BOUND }
    }
}

/// `values[d] = dim (A_S)_d` for `d = 0..=D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertFunction {
    pub values: Vec<usize>,
}

impl HilbertFunction {
    /// First degree at which the value reaches `points`.
    pub fn stabilization(&self, points: usize) -> Option<usize> {
        self.values.iter().position(|&v| v == points)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorTable {
    pub i_max: usize,
    pub j_max: usize,
    /// `dims[i][j] = dim Tor_{i,j}`.
    pub dims: Vec<Vec<usize>>,
    pub computed_over: FieldTag,
}

impl TorTable {
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.dims.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0)
    }

    /// Nonzero entries with `j != i`, ordered by `j` then `i`.
    pub fn off_diagonal(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for j in 0..=self.j_max {
            for i in 0..=self.i_max {
                let v = self.get(i, j);
                if i != j && v != 0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }
}

/// Evaluation of the degree-`d` monomials (deglex) at the points: one row per point.
pub fn evaluation_matrix<F: Field>(field: &F, points: &[Vec<F::Elem>], vars: usize, d: usize) -> Matrix<F> {
    let monos = monomials::monomials(vars, d);
    let rows: Vec<Vec<F::Elem>> =
        points.iter().map(|p| monos.iter().map(|m| monomials::evaluate(field, m, p)).collect()).collect();
    Matrix::from_rows(field.clone(), monos.len(), &rows)
}

pub fn hilbert_function<F: Field>(cfg: &Configuration<F>, d_max: usize) -> HilbertFunction {
    hilbert_of_points(cfg.field(), cfg.points(), cfg.dim() + 1, d_max)
}

fn hilbert_of_points<F: Field>(field: &F, points: &[Vec<F::Elem>], vars: usize, d_max: usize) -> HilbertFunction {
    let values = (0..=d_max)
        .map(|d| if points.is_empty() { usize::from(d == 0) } else { evaluation_matrix(field, points, vars, d).rank() })
        .collect();
    HilbertFunction { values }
}

/// Basis of `I_d`, as coefficient vectors on the deglex degree-`d` monomials.
pub fn ideal_component<F: Field>(cfg: &Configuration<F>, d: usize) -> Vec<Vec<F::Elem>> {
    ideal_of_points(cfg.field(), cfg.points(), cfg.dim() + 1, d)
}

fn ideal_of_points<F: Field>(field: &F, points: &[Vec<F::Elem>], vars: usize, d: usize) -> Vec<Vec<F::Elem>> {
    if points.is_empty() {
        let n = monomials::count(vars, d);
        return if d == 0 {
            Vec::new()
        } else {
            (0..n)
                .map(|k| {
                    let mut v = alloc::vec![field.zero(); n];
                    v[k] = field.one();
                    v
                })
                .collect()
        };
    }
    evaluation_matrix(field, points, vars, d).kernel_basis()
}

/// `(dim I_d, dim R_1 · I_{d-1})` in the ambient polynomial ring, `d >= 1`.
pub fn generation_gap<F: Field>(cfg: &Configuration<F>, d: usize) -> (usize, usize) {
    generation_gap_of_points(cfg.field(), cfg.points(), cfg.dim() + 1, d)
}

fn generation_gap_of_points<F: Field>(field: &F, points: &[Vec<F::Elem>], vars: usize, d: usize) -> (usize, usize) {
    let ideal = ideal_of_points(field, points, vars, d);
    let lower = ideal_of_points(field, points, vars, d - 1);
    let low_monos = monomials::monomials(vars, d - 1);
    let index: BTreeMap<Vec<u32>, usize> =
        monomials::monomials(vars, d).into_iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut span = EchelonSpan::new(field.clone(), index.len());
    'fill: for g in &lower {
        for v in 0..vars {
            if span.rank() == ideal.len() {
                break 'fill;
            }
            let mut prod = alloc::vec![field.zero(); index.len()];
            for (c, m) in g.iter().zip(&low_monos) {
                if field.is_zero(c) {
                    continue;
                }
                let mut e = m.clone();
                e[v] += 1;
                prod[index[&e]] = c.clone();
            }
            span.insert(prod);
        }
    }
    (ideal.len(), span.rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenerationStep {
    pub degree: usize,
    pub ideal_dim: usize,
    pub generated_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticGeneration {
    pub quadratic: bool,
    pub failing_degree: Option<usize>,
    /// Dimension of the span of `S`, plus one: the variables kept.
    pub restricted_vars: usize,
    /// First degree where the Hilbert function reaches `|S|`.
    pub stabilization: usize,
    pub steps: Vec<GenerationStep>,
}

/// Whether the ideal of `S` inside the coordinate ring of `span(S)` is
/// generated in degree at most 2.
pub fn quadratic_generation_check<F: Field>(cfg: &Configuration<F>) -> QuadraticGeneration {
    let f = cfg.field();
    let s = cfg.len();
    // coordinates at the pivot columns are a basis of the dual of span(S)
    let rref = cfg.coordinate_matrix(cfg.all()).row_reduce();
    let pivots: Vec<usize> = rref.pivots.clone();
    let points: Vec<Vec<F::Elem>> = cfg.points().iter().map(|p| pivots.iter().map(|&c| p[c].clone()).collect()).collect();
    let vars = pivots.len();
    let mut d0 = 0;
    while hilbert_of_points(f, &points, vars, d0).values[d0] != s {
        d0 += 1;
    }
    let mut steps = Vec::new();
    let mut failing = None;
    for d in 3..=d0 + 1 {
        let (ideal_dim, generated_dim) = generation_gap_of_points(f, &points, vars, d);
        steps.push(GenerationStep { degree: d, ideal_dim, generated_dim });
        if generated_dim != ideal_dim {
            failing = Some(d);
            break;
        }
    }
    QuadraticGeneration { quadratic: failing.is_none(), failing_degree: failing, restricted_vars: vars, stabilization: d0, steps }
}

/// True iff every entry off the diagonal `i = j` vanishes.
pub fn koszul_window_check(table: &TorTable) -> bool {
    table.off_diagonal().is_empty()
}

/// Coefficients of `1/h(z)` up to `z^order`; `h[0]` must be 1.
pub fn inverse_series(h: &[BigInt], order: usize) -> Vec<BigInt> {
    assert!(h.first().is_some_and(|c| c.is_one()), "constant term must be 1");
    let mut out: Vec<BigInt> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        if k == 0 {
            out.push(BigInt::one());
            continue;
        }
        let mut acc = BigInt::zero();
        for (t, ht) in h.iter().enumerate().take(k + 1).skip(1) {
            acc -= ht * &out[k - t];
        }
        out.push(acc);
    }
    out
}

/// Expands `1/h(-z)` for `h(z) = 1 + n z + (s - n - 1) z^2` to order `order`
/// and reports whether every coefficient is positive.
pub fn hilbert_positivity_check(n: u64, s: u64, order: usize) -> bool {
    assert!(s > n, "needs s >= n + 1");
    let c = BigInt::from(s - n - 1);
    let h_neg = [BigInt::one(), -BigInt::from(n), c];
    inverse_series(&h_neg, order).iter().all(|a| a > &BigInt::zero())
}

/// `s <= 1 + n + n^2/4`, the limit of the positivity check as the order grows.
pub fn hilbert_positivity_bound(n: u64, s: u64) -> bool {
    4 * s <= 4 + 4 * n + n * n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerCheck {
    /// Columns `0..=checked` are complete in the window and were compared.
    pub checked: usize,
    /// `(j, Σ_i (-1)^i dims[i][j], [z^j] 1/h(z))` for the first mismatch.
    pub mismatch: Option<(usize, BigInt, BigInt)>,
}

impl EulerCheck {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares alternating column sums of the table with the series `1/h(z)`.
/// Column `j` holds every nonzero `Tor_{i,j}` only when `j <= i_max`.
pub fn euler_check(table: &TorTable, hilbert: &HilbertFunction) -> EulerCheck {
    let checked = table.i_max.min(table.j_max).min(hilbert.values.len() - 1);
    let h: Vec<BigInt> = hilbert.values.iter().map(|&v| BigInt::from(v)).collect();
    let expected = inverse_series(&h, checked);
    for (j, e) in expected.iter().enumerate() {
        let found: BigInt = (0..=table.i_max)
            .map(|i| {
                let v = BigInt::from(table.get(i, j));
                if i % 2 == 0 { v } else { -v }
            })
            .sum();
        if &found != e {
            return EulerCheck { checked, mismatch: Some((j, found, e.clone())) };
        }
    }
    EulerCheck { checked, mismatch: None }
}

pub fn tor_table<F: Field>(cfg: &Configuration<F>, opts: &OracleOptions) -> Result<TorTable, OracleError> {
    if opts.i_max > opts.j_max {
        return Err(OracleError::Window { i_max: opts.i_max, j_max: opts.j_max });
    }
    let model = GradedModel::new(cfg, opts.j_max);
    let dims = match opts.method {
        TorMethod::Resolution => minimal_resolution_tor(&model, opts.i_max, opts.j_max),
        TorMethod::Bar => bar_tor(&model, opts.i_max, opts.j_max, opts.bar_bound).map_err(OracleError::Capacity)?,
    };
    Ok(TorTable { i_max: opts.i_max, j_max: opts.j_max, dims, computed_over: cfg.field().tag() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub hilbert: HilbertFunction,
    pub table: TorTable,
    pub method: TorMethod,
    pub euler: EulerCheck,
    /// Primes rejected by the modular driver (bad reduction).
    pub skipped_primes: Vec<u64>,
    /// For a modular table with an off-diagonal entry: whether the first such
    /// entry was recomputed over `Q` and found nonzero.
    pub exact_confirmation: Option<bool>,
}

impl OracleReport {
    pub fn diagonal_only(&self) -> bool {
        koszul_window_check(&self.table)
    }
}

/// Runs the window directly over the configuration's field.
pub fn oracle_window<F: Field>(cfg: &Configuration<F>, opts: &OracleOptions) -> Result<OracleReport, OracleError> {
    let table = tor_table(cfg, opts)?;
    let hilbert = hilbert_function(cfg, opts.j_max);
    let euler = euler_check(&table, &hilbert);
    Ok(OracleReport { hilbert, table, method: opts.method, euler, skipped_primes: Vec::new(), exact_confirmation: None })
}

/// Reduction of a rational configuration modulo `p`; `None` if two points
/// collide or a point vanishes.
pub fn reduce_configuration(cfg: &Configuration<Rationals>, p: u64) -> Option<Configuration<PrimeField>> {
    let field = PrimeField::new(p).ok()?;
    let points = cfg
        .points()
        .iter()
        .map(|pt| primitive_integer_vector(pt).iter().map(|x| field.reduce(x)).collect())
        .collect();
    Configuration::new(field, cfg.dim(), points, cfg.labels().to_vec()).ok()
}

fn next_prime(mut p: u64) -> u64 {
    p += 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Rational configurations: the window is computed modulo a prime whose
/// reduction keeps the Hilbert function. Dimensions of `Tor` can only grow
/// under such a reduction, so a diagonal-only table transfers to `Q`; an
/// off-diagonal entry is recomputed over `Q` on the smallest window holding it.
pub fn oracle_window_modular(cfg: &Configuration<Rationals>, opts: &OracleOptions) -> Result<OracleReport, OracleError> {
    if opts.i_max > opts.j_max {
        return Err(OracleError::Window { i_max: opts.i_max, j_max: opts.j_max });
    }
    let exact_hilbert = hilbert_function(cfg, opts.j_max);
    let mut skipped = Vec::new();
    let mut p = DEFAULT_PRIME;
    for _ in 0..MAX_PRIME_ATTEMPTS {
        let good = reduce_configuration(cfg, p).filter(|c| hilbert_function(c, opts.j_max) == exact_hilbert);
        let Some(reduced) = good else {
            skipped.push(p);
            p = next_prime(p);
            continue;
        };
        let mut report = oracle_window(&reduced, opts)?;
        report.hilbert = exact_hilbert;
        if let Some(&(i, j, _)) = report.table.off_diagonal().first() {
            let small = OracleOptions { i_max: i, j_max: j, ..*opts };
            let exact = tor_table(cfg, &small)?;
            if exact.get(i, j) == 0 {
                let mut full = oracle_window(cfg, opts)?;
                full.skipped_primes = skipped;
                full.skipped_primes.push(p);
                return Ok(full);
            }
            report.exact_confirmation = Some(true);
        }
        report.skipped_primes = skipped;
        return Ok(report);
    }
    let mut report = oracle_window(cfg, opts)?;
    report.skipped_primes = skipped;
    Ok(report)
}

/// Fields with a preferred way of running the window: rational
/// configurations go through [`oracle_window_modular`].
pub trait OracleField: Field {
    fn run_oracle(cfg: &Configuration<Self>, opts: &OracleOptions) -> Result<OracleReport, OracleError>;
}

impl OracleField for Rationals {
    fn run_oracle(cfg: &Configuration<Self>, opts: &OracleOptions) -> Result<OracleReport, OracleError> {
        oracle_window_modular(cfg, opts)
    }
}

impl OracleField for PrimeField {
    fn run_oracle(cfg: &Configuration<Self>, opts: &OracleOptions) -> Result<OracleReport, OracleError> {
        oracle_window(cfg, opts)
    }
}
