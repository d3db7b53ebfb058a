//! The degreewise model of the coordinate ring `A_S` and the ideals `J_T`,
//! and the certificate that a (**)-family `Λ` yields a Koszul filtration.
//!
//! `(A_S)_d` is realized inside `k^S` as the span of the values
//! `f(p) / λ(p)^d` of degree-`d` forms, with pointwise multiplication;
//! `(J_T)_d` is the subspace vanishing on `T` (and `(J_T)_0 = 0`).
//! For each step `T -> T ∪ T'` the certificate checks, in every degree
//! `d <= D_iso`, that `f -> v f` maps `(A_S / J_T')_d` isomorphically onto
//! `(J_T / J_{T ∪ T'})_{d+1}`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::config::{ConfigError, Configuration, Flat};
use crate::field::{Field, FieldTag};
use crate::lambda::{check_star_star, LambdaError, LambdaSet};
use crate::linalg::{EchelonSpan, Matrix};
use crate::pointset::PointSet;
use crate::search_vectors::SmallIntVectors;

/// Default top degree for the isomorphism checks.
pub const DEFAULT_D_ISO: usize = 3;

/// Coefficient bound when searching linear forms over `ℚ`.
const RATIONAL_SEARCH_COEF: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FiltrationError {
    #[error("field {0} too small: no admissible linear form")]
    FieldTooSmall(FieldTag),
    #[error("point {point} of {t_prime} lies in the span of {t}; no separating form exists")]
    NotSeparable { t: PointSet, t_prime: PointSet, point: usize },
    #[error("family violates (**) at {0}")]
    NotStarStar(PointSet),
    #[error("family does not contain the empty flat")]
    MissingEmpty,
    #[error("e_S has rank {rank} < {points}: S does not impose independent conditions on quadrics")]
    ESNotSurjective { rank: usize, points: usize },
    #[error("step {t} -> {t} + {t_prime} failed in degree {degree}: {what} (expected {expected}, found {found})")]
    StepFailed { t: PointSet, t_prime: PointSet, degree: usize, what: &'static str, expected: usize, found: usize },
    #[error("certificate mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

type Result<T> = core::result::Result<T, FiltrationError>;

fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter().zip(b).fold(field.zero(), |acc, (x, y)| field.add(&acc, &field.mul(x, y)))
}

fn hadamard<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| field.mul(x, y)).collect()
}

fn exhausted(tag: FieldTag) -> FiltrationError {
    FiltrationError::FieldTooSmall(tag)
}

/// Bound for the coefficient search: over `F_p` the levels up to `(p-1)/2`
/// cover every vector.
fn search_bound(tag: FieldTag) -> i64 {
    match tag {
        FieldTag::Rational => RATIONAL_SEARCH_COEF,
        FieldTag::Prime(p) => ((p - 1) / 2).min(RATIONAL_SEARCH_COEF as u64) as i64,
    }
}

/// A linear form nonvanishing on every point of `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trivialization<F: Field> {
    pub form: Vec<F::Elem>,
}

/// First form in small-integer order (coordinates first) nonvanishing on `S`.
pub fn choose_trivialization<F: Field>(cfg: &Configuration<F>) -> Result<Trivialization<F>> {
    let f = cfg.field();
    let tag = f.tag();
    let bound = search_bound(tag);
    for c in SmallIntVectors::new(cfg.dim() + 1, bound) {
        let form: Vec<F::Elem> = c.iter().map(|&x| f.from_i64(x)).collect();
        if cfg.points().iter().all(|p| !f.is_zero(&dot(f, &form, p))) {
            return Ok(Trivialization { form });
        }
    }
    Err(exhausted(tag))
}

/// `T^⊥ ⊂ V`, the linear forms vanishing on `T`, together with the support
/// `S \ T` of `(J_T)_d` for `d >= 2`.
#[derive(Clone, Debug)]
pub struct IdealView<F: Field> {
    pub flat: Flat,
    pub perp: Vec<Vec<F::Elem>>,
    pub support: PointSet,
}

pub fn ideal_view<F: Field>(cfg: &Configuration<F>, t: PointSet) -> Result<IdealView<F>> {
    let flat = cfg.closure(t)?;
    Ok(IdealView { flat, perp: perp_basis(cfg, t), support: cfg.all().difference(t) })
}

fn perp_basis<F: Field>(cfg: &Configuration<F>, t: PointSet) -> Vec<Vec<F::Elem>> {
    cfg.coordinate_matrix(t).kernel_basis()
}

/// `e_S : V ⊗ V -> k^S`, one column per ordered pair of coordinates.
pub fn eval_map_es<F: Field>(cfg: &Configuration<F>, triv: &Trivialization<F>) -> Matrix<F> {
    let n1 = cfg.dim() + 1;
    let units: Vec<Vec<F::Elem>> = (0..n1).map(|i| unit(cfg.field(), n1, i)).collect();
    pair_map(cfg, triv, cfg.all(), &units)
}

/// `e_{S,T} : V ⊗ T^⊥ -> k^{S \ T}`.
pub fn eval_map_est<F: Field>(cfg: &Configuration<F>, triv: &Trivialization<F>, t: PointSet) -> Matrix<F> {
    let perp = perp_basis(cfg, t);
    pair_map(cfg, triv, cfg.all().difference(t), &perp)
}

fn unit<F: Field>(f: &F, len: usize, i: usize) -> Vec<F::Elem> {
    let mut v = alloc::vec![f.zero(); len];
    v[i] = f.one();
    v
}

fn pair_map<F: Field>(cfg: &Configuration<F>, triv: &Trivialization<F>, rows: PointSet, right: &[Vec<F::Elem>]) -> Matrix<F> {
    let f = cfg.field();
    let n1 = cfg.dim() + 1;
    let mut data = Vec::with_capacity(rows.len() * n1 * right.len());
    for p in rows.iter() {
        let pt = cfg.point(p);
        let l = dot(f, &triv.form, pt);
        let l2inv = f.inv(&f.mul(&l, &l)).expect("trivialization is nonvanishing");
        let rvals: Vec<F::Elem> = right.iter().map(|w| dot(f, w, pt)).collect();
        for x in pt.iter().take(n1) {
            for r in &rvals {
                data.push(f.mul(&f.mul(x, r), &l2inv));
            }
        }
    }
    Matrix::from_vec(f.clone(), rows.len(), n1 * right.len(), data).expect("shape")
}

/// A form in `T^⊥` nonvanishing at every point of `T'`, taken first in
/// small-integer order over the kernel basis of `T`.
pub fn choose_v<F: Field>(cfg: &Configuration<F>, t: PointSet, t_prime: PointSet) -> Result<Vec<F::Elem>> {
    let f = cfg.field();
    let span = cfg.span(t);
    if let Some(point) = t_prime.iter().find(|&p| span.contains(cfg.point(p))) {
        return Err(FiltrationError::NotSeparable { t, t_prime, point });
    }
    let basis = perp_basis(cfg, t);
    let n1 = cfg.dim() + 1;
    for c in SmallIntVectors::new(basis.len(), search_bound(f.tag())) {
        let mut v = alloc::vec![f.zero(); n1];
        for (coef, b) in c.iter().zip(&basis) {
            if *coef != 0 {
                let neg = f.neg(&f.from_i64(*coef));
                f.sub_scaled(&mut v, &neg, b);
            }
        }
        if t_prime.iter().all(|p| !f.is_zero(&dot(f, &v, cfg.point(p)))) {
            return Ok(v);
        }
    }
    Err(exhausted(f.tag()))
}

/// `(A_S)_d` for `d = 0..=top` as subspaces of `k^S`, after dividing by `λ^d`.
#[derive(Clone, Debug)]
pub struct PointModel<F: Field> {
    field: F,
    /// `x_i(p) / λ(p)` for each coordinate `i`.
    linear: Vec<Vec<F::Elem>>,
    inv_lambda: Vec<F::Elem>,
    components: Vec<EchelonSpan<F>>,
}

impl<F: Field> PointModel<F> {
    pub fn new(cfg: &Configuration<F>, triv: &Trivialization<F>, top: usize) -> Self {
        let f = cfg.field().clone();
        let s = cfg.len();
        let inv_lambda: Vec<F::Elem> =
            cfg.points().iter().map(|p| f.inv(&dot(&f, &triv.form, p)).expect("nonvanishing")).collect();
        let linear: Vec<Vec<F::Elem>> = (0..=cfg.dim())
            .map(|i| cfg.points().iter().zip(&inv_lambda).map(|(p, il)| f.mul(&p[i], il)).collect())
            .collect();
        let mut components = alloc::vec![EchelonSpan::from_vectors(f.clone(), s, [alloc::vec![f.one(); s]])];
        for _ in 1..=top {
            let prev = components.last().expect("degree 0");
            let mut next = EchelonSpan::new(f.clone(), s);
            'outer: for x in &linear {
                for b in prev.basis() {
                    next.insert(hadamard(&f, x, b));
                    if next.rank() == s {
                        break 'outer;
                    }
                }
            }
            components.push(next);
        }
        Self { field: f, linear, inv_lambda, components }
    }

    pub fn top(&self) -> usize {
        self.components.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.rank()).collect()
    }

    pub fn component(&self, d: usize) -> &EchelonSpan<F> {
        &self.components[d]
    }

    /// A linear form as an element of `(A_S)_1`.
    pub fn linear_element(&self, form: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = alloc::vec![f.zero(); self.inv_lambda.len()];
        for (c, x) in form.iter().zip(&self.linear) {
            if !f.is_zero(c) {
                let neg = f.neg(c);
                f.sub_scaled(&mut out, &neg, x);
            }
        }
        out
    }

    /// `(J_T)_d`: elements of `(A_S)_d` vanishing on `T`; zero in degree 0.
    pub fn ideal(&self, t: PointSet, d: usize) -> EchelonSpan<F> {
        let s = self.inv_lambda.len();
        if d == 0 {
            return EchelonSpan::new(self.field.clone(), s);
        }
        let basis = self.components[d].basis();
        let coeffs = self.vanishing_coefficients(basis, t, None);
        EchelonSpan::from_vectors(self.field.clone(), s, coeffs.iter().map(|c| self.combine(basis, c)))
    }

    /// Coefficient vectors `c` with `(Σ c_j b_j)(p) · w(p) = 0` for `p ∈ t`.
    fn vanishing_coefficients(&self, basis: &[Vec<F::Elem>], t: PointSet, weight: Option<&[F::Elem]>) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let rows: Vec<Vec<F::Elem>> = t
            .iter()
            .map(|p| {
                basis
                    .iter()
                    .map(|b| match weight {
                        Some(w) => f.mul(&b[p], &w[p]),
                        None => b[p].clone(),
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(f.clone(), basis.len(), &rows).kernel_basis()
    }

    fn combine(&self, basis: &[Vec<F::Elem>], c: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = alloc::vec![f.zero(); self.inv_lambda.len()];
        for (coef, b) in c.iter().zip(basis) {
            if !f.is_zero(coef) {
                let neg = f.neg(coef);
                f.sub_scaled(&mut out, &neg, b);
            }
        }
        out
    }

    fn restrict(&self, vs: &[Vec<F::Elem>], to: PointSet) -> EchelonSpan<F> {
        EchelonSpan::from_vectors(
            self.field.clone(),
            to.len(),
            vs.iter().map(|v| to.iter().map(|p| v[p].clone()).collect::<Vec<_>>()),
        )
    }

    /// `A_1 · span(vs)` inside `k^S`.
    fn times_linear(&self, vs: &[Vec<F::Elem>]) -> EchelonSpan<F> {
        let s = self.inv_lambda.len();
        let mut out = EchelonSpan::new(self.field.clone(), s);
        for x in &self.linear {
            for v in vs {
                out.insert(hadamard(&self.field, x, v));
            }
        }
        out
    }
}

/// Ranks recorded for one degree of one step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: usize,
    /// `dim (A_S / J_T')_d`, i.e. the rank of `(A_S)_d` restricted to `T'`.
    pub source_rank: usize,
    /// `dim (J_T / J_{T∪T'})_{d+1}`, i.e. the rank of `(J_T)_{d+1}` restricted to `T'`.
    pub target_rank: usize,
    /// Rank of `v · (A_S)_d` and `(J_T)_{d+1}` together, restricted to `T'`.
    pub joint_rank: usize,
    /// `dim` of the annihilator of `v` modulo `J_{T∪T'}` in `(A_S)_d`.
    pub annihilator_dim: usize,
    pub j_t_prime_dim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepCertificate<F: Field> {
    pub t: PointSet,
    pub t_prime: PointSet,
    pub union: PointSet,
    pub v: Vec<F::Elem>,
    /// Rank and row count of `e_{S,T}`.
    pub est_rank: usize,
    pub est_rows: usize,
    pub perp_dim: usize,
    pub union_perp_dim: usize,
    /// Degrees `2..=D_iso+1` in which `(J_T)_d = A_1 (J_T)_{d-1}` was checked.
    pub generation_degrees: Vec<usize>,
    pub degrees: Vec<DegreeCheck>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationCertificate<F: Field> {
    pub field: FieldTag,
    pub lambda: Vec<PointSet>,
    pub trivialization: Vec<F::Elem>,
    pub d_iso: usize,
    pub es_rank: usize,
    /// `dim (A_S)_d` in the model, `d = 0..=D_iso+1`.
    pub model_dims: Vec<usize>,
    pub steps: Vec<StepCertificate<F>>,
    /// `∅ = T_0 ⊂ T_1 ⊂ .. ⊂ S`, following the recorded witnesses.
    pub chain: Vec<PointSet>,
}

fn fail(t: PointSet, t_prime: PointSet, degree: usize, what: &'static str, expected: usize, found: usize) -> FiltrationError {
    FiltrationError::StepFailed { t, t_prime, degree, what, expected, found }
}

fn verify_step<F: Field>(
    cfg: &Configuration<F>,
    triv: &Trivialization<F>,
    model: &PointModel<F>,
    t: PointSet,
    t_prime: PointSet,
    v: &[F::Elem],
    d_iso: usize,
) -> Result<StepCertificate<F>> {
    let f = cfg.field();
    let union = t.union(t_prime);
    if t_prime.iter().any(|p| f.is_zero(&dot(f, v, cfg.point(p)))) {
        return Err(FiltrationError::Mismatch(alloc::format!("v vanishes on a point of {t_prime}")));
    }
    if t.iter().any(|p| !f.is_zero(&dot(f, v, cfg.point(p)))) {
        return Err(FiltrationError::Mismatch(alloc::format!("v does not vanish on {t}")));
    }

    let est = eval_map_est(cfg, triv, t);
    let est_rank = est.rank();
    if est_rank != est.rows() {
        return Err(fail(t, t_prime, 2, "e_{S,T} surjective", est.rows(), est_rank));
    }

    let perp = perp_basis(cfg, t);
    let union_perp = perp_basis(cfg, union);
    let n1 = cfg.dim() + 1;
    let lhs = EchelonSpan::from_vectors(f.clone(), n1, perp.iter().cloned());
    let mut rhs = EchelonSpan::from_vectors(f.clone(), n1, union_perp.iter().cloned());
    rhs.insert(v.to_vec());
    if !lhs.same_span(&rhs) {
        return Err(fail(t, t_prime, 1, "T^perp = (T+T')^perp + <v>", lhs.rank(), rhs.rank()));
    }

    let mut generation_degrees = Vec::new();
    for d in 2..=d_iso + 1 {
        let jd = model.ideal(t, d);
        let prod = model.times_linear(model.ideal(t, d - 1).basis());
        if !jd.same_span(&prod) {
            return Err(fail(t, t_prime, d, "J_T generated in degree 1", jd.rank(), prod.rank()));
        }
        generation_degrees.push(d);
    }

    let v_elem = model.linear_element(v);
    let mut degrees = Vec::new();
    for d in 0..=d_iso {
        let basis = model.component(d).basis();
        let moved: Vec<Vec<F::Elem>> = basis.iter().map(|b| hadamard(f, &v_elem, b)).collect();
        let source = model.restrict(basis, t_prime).rank();
        let image = model.restrict(&moved, t_prime);
        let target_space = model.ideal(t, d + 1);
        let target = model.restrict(target_space.basis(), t_prime);
        let mut joint = image.clone();
        for w in target.basis() {
            joint.insert(w.clone());
        }
        if image.rank() != source {
            return Err(fail(t, t_prime, d, "v-multiplication injective on A/J_T'", source, image.rank()));
        }
        if target.rank() != source || joint.rank() != source {
            return Err(fail(t, t_prime, d, "v-multiplication onto J_T/J_(T+T')", target.rank(), joint.rank()));
        }

        // annihilator of v modulo J_{T ∪ T'} against J_{T'}, in coefficients over the basis
        let ann = EchelonSpan::from_vectors(
            f.clone(),
            basis.len(),
            model.vanishing_coefficients(basis, union, Some(&v_elem)),
        );
        let jtp = if d == 0 {
            EchelonSpan::new(f.clone(), basis.len())
        } else {
            EchelonSpan::from_vectors(f.clone(), basis.len(), model.vanishing_coefficients(basis, t_prime, None))
        };
        if !ann.same_span(&jtp) {
            return Err(fail(t, t_prime, d, "annihilator of v equals J_T'", jtp.rank(), ann.rank()));
        }
        degrees.push(DegreeCheck {
            degree: d,
            source_rank: source,
            target_rank: target.rank(),
            joint_rank: joint.rank(),
            annihilator_dim: ann.rank(),
            j_t_prime_dim: jtp.rank(),
        });
    }

    Ok(StepCertificate {
        t,
        t_prime,
        union,
        v: v.to_vec(),
        est_rank,
        est_rows: est.rows(),
        perp_dim: perp.len(),
        union_perp_dim: union_perp.len(),
        generation_degrees,
        degrees,
    })
}

fn chain_from_empty(all: PointSet, steps: &[(PointSet, PointSet)]) -> Result<Vec<PointSet>> {
    let mut chain = alloc::vec![PointSet::EMPTY];
    let mut cur = PointSet::EMPTY;
    while cur != all {
        let Some(&(_, next)) = steps.iter().find(|(t, _)| *t == cur) else {
            return Err(FiltrationError::Mismatch(alloc::format!("no step out of {cur}")));
        };
        if next == cur || !cur.is_subset(next) {
            return Err(FiltrationError::Mismatch(alloc::format!("step out of {cur} does not grow")));
        }
        cur = next;
        chain.push(cur);
    }
    Ok(chain)
}

fn preflight<'a, F: Field>(lambda: &LambdaSet<'a, F>) -> Result<(Trivialization<F>, usize)> {
    let cfg = lambda.configuration();
    if !lambda.contains(PointSet::EMPTY) {
        return Err(FiltrationError::MissingEmpty);
    }
    let triv = choose_trivialization(cfg)?;
    let es = eval_map_es(cfg, &triv);
    let es_rank = es.rank();
    if es_rank != cfg.len() {
        return Err(FiltrationError::ESNotSurjective { rank: es_rank, points: cfg.len() });
    }
    Ok((triv, es_rank))
}

/// Verifies that the ideals `J_T`, `T ∈ Λ`, form a Koszul filtration of
/// `A_S` in degrees up to `D_iso`, and records every rank that was checked.
pub fn verify_koszul_family<F: Field>(lambda: &LambdaSet<'_, F>, d_iso: usize) -> Result<FiltrationCertificate<F>> {
    let cfg = lambda.configuration();
    let witnesses = check_star_star(lambda).map_err(FiltrationError::NotStarStar)?;
    let (triv, es_rank) = preflight(lambda)?;
    let model = PointModel::new(cfg, &triv, d_iso + 1);
    let mut steps = Vec::with_capacity(witnesses.len());
    for w in &witnesses {
        let v = choose_v(cfg, w.t, w.t_prime)?;
        steps.push(verify_step(cfg, &triv, &model, w.t, w.t_prime, &v, d_iso)?);
    }
    let pairs: Vec<_> = steps.iter().map(|s| (s.t, s.union)).collect();
    let chain = chain_from_empty(cfg.all(), &pairs)?;
    Ok(FiltrationCertificate {
        field: cfg.field().tag(),
        lambda: lambda.to_vec(),
        trivialization: triv.form,
        d_iso,
        es_rank,
        model_dims: model.dims(),
        steps,
        chain,
    })
}

/// Re-verifies a stored certificate against `cfg` without searching: every
/// recorded witness, form and rank is recomputed and compared.
pub fn recheck_certificate<F: Field>(cfg: &Configuration<F>, cert: &FiltrationCertificate<F>) -> Result<()> {
    let f = cfg.field();
    if cert.field != f.tag() {
        return Err(FiltrationError::Mismatch(alloc::format!("field {} vs {}", cert.field, f.tag())));
    }
    let lambda = LambdaSet::new(cfg, cert.lambda.iter().copied())?;
    let triv = Trivialization { form: cert.trivialization.clone() };
    if cfg.points().iter().any(|p| f.is_zero(&dot(f, &triv.form, p))) {
        return Err(FiltrationError::Mismatch("trivialization vanishes at a point".into()));
    }
    if !lambda.contains(PointSet::EMPTY) {
        return Err(FiltrationError::MissingEmpty);
    }
    let es_rank = eval_map_es(cfg, &triv).rank();
    if es_rank != cfg.len() || es_rank != cert.es_rank {
        return Err(FiltrationError::ESNotSurjective { rank: es_rank, points: cfg.len() });
    }
    let all = cfg.all();
    let needed: Vec<PointSet> = lambda.sets().filter(|&t| t != all).collect();
    if needed.len() != cert.steps.len() || needed.iter().any(|t| !cert.steps.iter().any(|s| s.t == *t)) {
        return Err(FiltrationError::Mismatch("steps do not cover Λ \\ {S}".into()));
    }
    let model = PointModel::new(cfg, &triv, cert.d_iso + 1);
    if model.dims() != cert.model_dims {
        return Err(FiltrationError::Mismatch("model dimensions differ".into()));
    }
    for step in &cert.steps {
        let (t, tp) = (step.t, step.t_prime);
        let tf = lambda.flat(t).ok_or_else(|| FiltrationError::Mismatch(alloc::format!("{t} not in Λ")))?;
        let tpf = lambda.flat(tp).ok_or_else(|| FiltrationError::Mismatch(alloc::format!("{tp} not in Λ")))?;
        let uf = lambda.flat(t.union(tp)).ok_or(FiltrationError::NotStarStar(t))?;
        if tp.is_empty() || !tpf.is_independent() || !tp.is_disjoint(t) || uf.span_dim != tf.span_dim + 1 {
            return Err(FiltrationError::NotStarStar(t));
        }
        let again = verify_step(cfg, &triv, &model, t, tp, &step.v, cert.d_iso)?;
        if &again != step {
            return Err(FiltrationError::Mismatch(alloc::format!("recorded ranks differ at {t}")));
        }
    }
    let pairs: Vec<_> = cert.steps.iter().map(|s| (s.t, s.union)).collect();
    if chain_from_empty(all, &pairs)? != cert.chain {
        return Err(FiltrationError::Mismatch("chain differs".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::field::{PrimeField, Rationals};
    use crate::lambda::saturate;
    use alloc::vec;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(dim: usize, pts: &[Vec<i64>]) -> Configuration<Rationals> {
        Configuration::from_integers(Rationals, dim, pts).unwrap()
    }

    fn ints(v: &[BigRational]) -> Vec<i64> {
        v.iter().map(|x| x.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn trivialization_examples() {
        let c = q(1, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(ints(&choose_trivialization(&c).unwrap().form), vec![1, 1]);
        let c = q(2, &[vec![1, 0, 0], vec![1, 1, 1]]);
        assert_eq!(ints(&choose_trivialization(&c).unwrap().form), vec![1, 0, 0]);

        // independent sweep in exact integers over the defining vectors
        let rains: [[i64; 5]; 8] = [
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1],
            [1, 0, -1, 1, 0],
            [1, 1, 0, 1, -1],
            [1, 1, 1, 0, 0],
        ];
        let sweep = SmallIntVectors::new(5, 3)
            .find(|c| rains.iter().all(|p| p.iter().zip(c).map(|(x, y)| x * y).sum::<i64>() != 0))
            .unwrap();
        let cfg = families::rains_configuration(Rationals);
        assert_eq!(ints(&choose_trivialization(&cfg).unwrap().form), sweep);
    }

    #[test]
    fn small_prime_runs_out_of_forms() {
        // all four points of P^1 over F_3: every linear form vanishes somewhere
        let f3 = PrimeField::new(3).unwrap();
        let c = Configuration::from_integers(f3, 1, &[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]).unwrap();
        assert_eq!(choose_trivialization(&c), Err(FiltrationError::FieldTooSmall(FieldTag::Prime(3))));
    }

    #[test]
    fn es_examples() {
        let c = q(1, &[vec![1, 0], vec![0, 1]]);
        let t = choose_trivialization(&c).unwrap();
        let m = eval_map_es(&c, &t);
        assert_eq!((m.rows(), m.cols(), m.rank()), (2, 4, 2));
        let one = q(3, &[vec![1, 2, 3, 4]]);
        let t = choose_trivialization(&one).unwrap();
        let m = eval_map_es(&one, &t);
        assert_eq!((m.rows(), m.cols()), (1, 16));
        assert!(m.is_surjective());
    }

    #[test]
    fn est_examples() {
        let split = families::gen_split(Rationals, 3, [2, 2]).unwrap();
        let c = &split.config;
        let triv = choose_trivialization(c).unwrap();
        let e0 = eval_map_est(c, &triv, PointSet::EMPTY);
        let es = eval_map_es(c, &triv);
        let rows = |m: &Matrix<Rationals>| EchelonSpan::from_vectors(Rationals, m.cols(), (0..m.rows()).map(|r| m.row(r).to_vec()));
        assert!(rows(&e0).same_span(&rows(&es)));
        let full = eval_map_est(c, &triv, c.all());
        assert_eq!(full.rows(), 0);
        assert!(full.is_surjective());
        let m = eval_map_est(c, &triv, split.blocks[0]);
        assert_eq!((m.rows(), m.cols()), (2, 8));
        assert!(m.is_surjective());
    }

    #[test]
    fn choose_v_examples() {
        let c = q(2, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]);
        let s1 = PointSet::from_indices([0, 1]);
        let s2 = PointSet::from_indices([2, 3]);
        assert_eq!(ints(&choose_v(&c, s1, s2).unwrap()), vec![0, 0, 1]);
        assert_eq!(ints(&choose_v(&c, PointSet::EMPTY, PointSet::singleton(1)).unwrap()), vec![0, 1, 0]);
        let col = q(2, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]);
        assert!(matches!(
            choose_v(&col, PointSet::from_indices([0, 1]), PointSet::singleton(2)),
            Err(FiltrationError::NotSeparable { point: 2, .. })
        ));
    }

    fn certify<F: Field>(cfg: &Configuration<F>, lambda: &[PointSet]) -> FiltrationCertificate<F> {
        let l = LambdaSet::new(cfg, lambda.iter().copied()).unwrap();
        let sat = saturate(&l).unwrap();
        let cert = verify_koszul_family(&sat, DEFAULT_D_ISO).unwrap();
        recheck_certificate(cfg, &cert).unwrap();
        cert
    }

    #[test]
    fn split_certificate() {
        let split = families::gen_split(Rationals, 3, [2, 2]).unwrap();
        let cert = certify(&split.config, &split.lambda);
        assert_eq!(cert.chain.first(), Some(&PointSet::EMPTY));
        assert_eq!(cert.chain.last(), Some(&split.config.all()));
        assert_eq!(cert.model_dims, vec![1, 4, 4, 4, 4]);
    }

    #[test]
    fn single_point_certificate() {
        let c = q(2, &[vec![1, 2, 3]]);
        let cert = certify(&c, &[PointSet::EMPTY, c.all()]);
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.model_dims, vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn rains_chain_certificate() {
        let rains = families::rains_configuration(Rationals);
        let [a, b, c] = families::rains_chain();
        let sets = [a, b, c, a.union(b), b.union(c), rains.all()];
        let cert = certify(&rains, &sets);
        assert_eq!(cert.model_dims, vec![1, 5, 8, 8, 8]);
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let split = families::gen_split(Rationals, 3, [2, 2]).unwrap();
        let mut cert = certify(&split.config, &split.lambda);
        cert.steps[0].degrees[0].source_rank += 1;
        assert!(recheck_certificate(&split.config, &cert).is_err());
        let mut cert = certify(&split.config, &split.lambda);
        cert.steps.pop();
        assert!(recheck_certificate(&split.config, &cert).is_err());
    }

    #[test]
    fn star_star_and_empty_are_required() {
        let split = families::gen_split(Rationals, 3, [2, 2]).unwrap();
        let l = LambdaSet::new(&split.config, split.lambda.iter().copied()).unwrap();
        assert!(matches!(verify_koszul_family(&l, 3), Err(FiltrationError::NotStarStar(_))));
    }

    #[test]
    fn collinear_e_s_fails() {
        // four collinear points impose dependent conditions on quadrics
        let c = q(2, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![1, 2, 0]]);
        let l = LambdaSet::new(&c, [PointSet::EMPTY, c.all()]).unwrap();
        let (triv, _) = (choose_trivialization(&c).unwrap(), ());
        assert_eq!(eval_map_es(&c, &triv).rank(), 3);
        assert!(matches!(verify_koszul_family(&l, 3), Err(FiltrationError::NotStarStar(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn general_position_certifies_over_both_fields(n in 2usize..5, extra in 0usize..4) {
            let s = (n + 1 + extra).min(2 * n);
            let half = s / 2;
            let cq = families::gen_general_position(Rationals, n, s).unwrap();
            let lq = [PointSet::full(half), PointSet::full(s).difference(PointSet::full(half)), cq.all()];
            let cert = certify(&cq, &lq);
            prop_assert_eq!(cert.model_dims[1], n + 1);
            let fp = PrimeField::new(32003).unwrap();
            let cp = families::gen_general_position(fp, n, s).unwrap();
            let certp = certify(&cp, &lq);
            prop_assert_eq!(certp.lambda, cert.lambda);
        }
    }
}
