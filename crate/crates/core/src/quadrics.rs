//! Conditions imposed by points on quadrics, and descent of Koszulness to
//! subsets.
//!
//! Quadrics are coefficient vectors over the degree-2 monomials in
//! degree-lexicographic order ([`crate::monomials::monomials`]). Points are
//! evaluated on their normalized coordinates; rescaling a row never changes
//! a rank or a kernel.

use alloc::string::String;
use alloc::vec::Vec;

use crate::config::{ConfigError, Configuration};
use crate::field::Field;
use crate::filtration::FiltrationCertificate;
use crate::linalg::{EchelonSpan, Matrix};
use crate::monomials;
use crate::pointset::PointSet;

/// A subspace of `Sym^2 V` in the monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricSpace<F: Field> {
    pub dim: usize,
    pub basis: Vec<Vec<F::Elem>>,
}

impl<F: Field> QuadricSpace<F> {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// `(n+1)(n+2)/2`.
pub fn quadric_count(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

fn quadric_values<F: Field>(cfg: &Configuration<F>, p: usize) -> Vec<F::Elem> {
    monomials::monomials(cfg.dim() + 1, 2).iter().map(|m| monomials::evaluate(cfg.field(), m, cfg.point(p))).collect()
}

/// Rows: points of `t`; columns: degree-2 monomials.
pub fn quadric_evaluation<F: Field>(cfg: &Configuration<F>, t: PointSet) -> Matrix<F> {
    let rows: Vec<Vec<F::Elem>> = t.iter().map(|p| quadric_values(cfg, p)).collect();
    Matrix::from_rows(cfg.field().clone(), quadric_count(cfg.dim()), &rows)
}

pub fn imposes_independent_on_quadrics<F: Field>(cfg: &Configuration<F>, t: PointSet) -> bool {
    quadric_evaluation(cfg, t).is_surjective()
}

/// Quadrics vanishing on `t`.
pub fn quadrics_through<F: Field>(cfg: &Configuration<F>, t: PointSet) -> QuadricSpace<F> {
    QuadricSpace { dim: cfg.dim(), basis: quadric_evaluation(cfg, t).kernel_basis() }
}

/// `V_1 + V_2 = H^0(O(2))` for the quadrics `V_i` through `t_i`.
pub fn relatively_2_independent<F: Field>(cfg: &Configuration<F>, t1: PointSet, t2: PointSet) -> bool {
    sum_rank(cfg, t1, t2) == quadric_count(cfg.dim())
}

fn sum_rank<F: Field>(cfg: &Configuration<F>, t1: PointSet, t2: PointSet) -> usize {
    let v1 = quadrics_through(cfg, t1);
    let v2 = quadrics_through(cfg, t2);
    EchelonSpan::from_vectors(cfg.field().clone(), quadric_count(cfg.dim()), v1.basis.into_iter().chain(v2.basis))
        .rank()
}

fn through_rank<F: Field>(cfg: &Configuration<F>, t1: PointSet, t2: PointSet) -> usize {
    let f = cfg.field();
    let v2 = quadrics_through(cfg, t2);
    let rows: Vec<Vec<F::Elem>> = t1
        .iter()
        .map(|p| {
            let vals = quadric_values(cfg, p);
            v2.basis.iter().map(|q| dot(f, q, &vals)).collect()
        })
        .collect();
    Matrix::from_rows(f.clone(), v2.len(), &rows).rank()
}

fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// Quadrics through `t2`, evaluated at `t1`, fill out `k^{t1}`.
pub fn imposes_independent_on_quadrics_through<F: Field>(cfg: &Configuration<F>, t1: PointSet, t2: PointSet) -> bool {
    through_rank(cfg, t1, t2) == t1.len()
}

/// Why `S` is taken to be Koszul.
#[derive(Clone, Copy, Debug)]
pub enum Evidence<'c, F: Field> {
    Certificate(&'c FiltrationCertificate<F>),
    /// The caller vouches for `S` from outside this crate.
    Asserted,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Certificate,
    Asserted,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentRoute {
    /// `S' = S`.
    Trivial,
    /// `S` imposes independent conditions on quadrics, so every subset descends.
    QuadricIndependentSuperset,
    /// `S \ S'` imposes independent conditions on quadrics through `S'`.
    IndependentThrough,
    /// `S'` and `S \ S'` are relatively 2-independent.
    Relative2Independent,
}

impl DescentRoute {
    pub fn name(self) -> &'static str {
        match self {
            DescentRoute::Trivial => "trivial",
            DescentRoute::QuadricIndependentSuperset => "superset-independent-on-quadrics",
            DescentRoute::IndependentThrough => "independent-on-quadrics-through-subset",
            DescentRoute::Relative2Independent => "relative-2-independence",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentVerdict<F: Field> {
    pub koszul_by_descent: bool,
    pub route: Option<DescentRoute>,
    pub provenance: Provenance,
    /// Rank of the quadric evaluation on `S` (`|S|` when independent).
    pub quadric_rank: usize,
    /// Rank of quadrics through `S'` evaluated on `S \ S'`.
    pub through_rank: usize,
    /// `dim(V_1 + V_2)` against `(n+1)(n+2)/2`.
    pub sum_rank: usize,
    /// For a single removed point: a quadric through `S'` missing it.
    pub separating_quadric: Option<Vec<F::Elem>>,
    pub explanation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DescentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("certificate is over {found}, configuration over {expected}")]
    FieldMismatch { expected: crate::field::FieldTag, found: crate::field::FieldTag },
}

/// Decides whether Koszulness of `S` passes to `sub`, trying the routes in
/// the order of [`DescentRoute`].
pub fn descent_check<F: Field>(
    cfg: &Configuration<F>,
    sub: PointSet,
    evidence: Evidence<'_, F>,
) -> Result<DescentVerdict<F>, DescentError> {
    cfg.check_indices(sub)?;
    let all = cfg.all();
    let rest = all.difference(sub);
    let provenance = match evidence {
        Evidence::Certificate(c) => {
            if c.field != cfg.field().tag() {
                return Err(DescentError::FieldMismatch { expected: cfg.field().tag(), found: c.field });
            }
            Provenance::Certificate
        }
        Evidence::Asserted => Provenance::Asserted,
        Evidence::None => Provenance::Unknown,
    };
    let quadric_rank = quadric_evaluation(cfg, all).rank();
    let through = through_rank(cfg, rest, sub);
    let sum = sum_rank(cfg, sub, rest);
    let separating_quadric = (rest.len() == 1).then(|| separating(cfg, sub, rest.min().unwrap())).flatten();

    let route = if sub == all {
        Some(DescentRoute::Trivial)
    } else if quadric_rank == cfg.len() {
        Some(DescentRoute::QuadricIndependentSuperset)
    } else if through == rest.len() {
        Some(DescentRoute::IndependentThrough)
    } else if sum == quadric_count(cfg.dim()) {
        Some(DescentRoute::Relative2Independent)
    } else {
        None
    };
    let (koszul, explanation) = match (provenance, route) {
        (Provenance::Unknown, _) => (false, String::from("S is not known to be Koszul; descent needs that hypothesis")),
        (_, None) => (false, String::from("no descent route applies to this subset")),
        (_, Some(r)) => (true, alloc::format!("Koszul by descent via {}", r.name())),
    };
    Ok(DescentVerdict {
        koszul_by_descent: koszul,
        route: if koszul { route } else { None },
        provenance,
        quadric_rank,
        through_rank: through,
        sum_rank: sum,
        separating_quadric,
        explanation,
    })
}

fn separating<F: Field>(cfg: &Configuration<F>, sub: PointSet, p: usize) -> Option<Vec<F::Elem>> {
    let vals = quadric_values(cfg, p);
    let f = cfg.field();
    quadrics_through(cfg, sub).basis.into_iter().find(|q| !f.is_zero(&dot(f, q, &vals)))
}
