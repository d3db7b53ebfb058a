//! Serializable reports and certificates.

use serde::{Deserialize, Serialize};

use koszul_points_core::filtration::{DegreeCheck, FiltrationCertificate, StepCertificate};
use koszul_points_core::oracle::{OracleReport, QuadraticGeneration};
use koszul_points_core::quadrics::DescentVerdict;
use koszul_points_core::{Configuration, Field, FieldTag, PointSet};

use crate::format::{AnyConfig, FieldSpec, SCHEMA};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn indices(set: PointSet) -> Vec<usize> {
    set.iter().collect()
}

pub fn sets(v: &[PointSet]) -> Vec<Vec<usize>> {
    v.iter().map(|&s| indices(s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub digest: String,
    pub field: FieldSpec,
    pub dim: usize,
    pub points: usize,
}

impl ConfigSummary {
    pub fn of(cfg: &AnyConfig) -> Self {
        Self { digest: cfg.digest(), field: cfg.tag().into(), dim: cfg.dim(), points: cfg.len() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatDto {
    pub members: Vec<usize>,
    pub span_dim: isize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatsSection {
    pub count: usize,
    pub flats: Vec<FlatDto>,
    pub two_r_condition: bool,
    /// A flat spanning an `r`-plane with more than `2r` points, if any.
    pub violating_flat: Option<FlatDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSection {
    pub found: bool,
    /// The hypothesis that fired, with its blocks.
    pub hypothesis: Option<String>,
    pub blocks: Vec<Vec<usize>>,
    /// The family as found, before saturation.
    pub lambda: Vec<Vec<usize>>,
    pub exhaustive: bool,
    pub budget_used: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDto {
    pub degree: usize,
    pub source_rank: usize,
    pub target_rank: usize,
    pub joint_rank: usize,
    pub annihilator_dim: usize,
    pub j_t_prime_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDto {
    pub t: Vec<usize>,
    pub t_prime: Vec<usize>,
    pub union: Vec<usize>,
    pub v: Vec<String>,
    pub est_rank: usize,
    pub est_rows: usize,
    pub perp_dim: usize,
    pub union_perp_dim: usize,
    pub generation_degrees: Vec<usize>,
    pub degrees: Vec<DegreeDto>,
}

/// A filtration certificate, re-checkable without searching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDto {
    pub schema: String,
    pub config_digest: String,
    pub field: FieldSpec,
    /// The saturated family.
    pub lambda: Vec<Vec<usize>>,
    pub trivialization: Vec<String>,
    pub d_iso: usize,
    pub es_rank: usize,
    pub model_dims: Vec<usize>,
    pub steps: Vec<StepDto>,
    pub chain: Vec<Vec<usize>>,
}

#[derive(Debug, thiserror::Error)]
pub enum CertificateError {
    #[error("certificate schema {0:?} is not {SCHEMA}")]
    Schema(String),
    #[error("certificate was issued for configuration {found}, input is {expected}")]
    Digest { expected: String, found: String },
    #[error("bad scalar {0:?} in certificate")]
    Scalar(String),
    #[error("point index {0} out of range")]
    Index(usize),
}

fn to_set(v: &[usize], len: usize) -> Result<PointSet, CertificateError> {
    if let Some(&i) = v.iter().find(|&&i| i >= len) {
        return Err(CertificateError::Index(i));
    }
    Ok(PointSet::from_indices(v.iter().copied()))
}

fn scalars<F: Field>(f: &F, v: &[String]) -> Result<Vec<F::Elem>, CertificateError> {
    v.iter().map(|s| f.parse(s).map_err(|_| CertificateError::Scalar(s.clone()))).collect()
}

impl CertificateDto {
    pub fn from_certificate<F: Field>(cfg: &Configuration<F>, digest: &str, c: &FiltrationCertificate<F>) -> Self {
        let f = cfg.field();
        let render = |v: &[F::Elem]| v.iter().map(|x| f.render(x)).collect::<Vec<_>>();
        Self {
            schema: SCHEMA.into(),
            config_digest: digest.into(),
            field: c.field.into(),
            lambda: sets(&c.lambda),
            trivialization: render(&c.trivialization),
            d_iso: c.d_iso,
            es_rank: c.es_rank,
            model_dims: c.model_dims.clone(),
            steps: c
                .steps
                .iter()
                .map(|s| StepDto {
                    t: indices(s.t),
                    t_prime: indices(s.t_prime),
                    union: indices(s.union),
                    v: render(&s.v),
                    est_rank: s.est_rank,
                    est_rows: s.est_rows,
                    perp_dim: s.perp_dim,
                    union_perp_dim: s.union_perp_dim,
                    generation_degrees: s.generation_degrees.clone(),
                    degrees: s
                        .degrees
                        .iter()
                        .map(|d| DegreeDto {
                            degree: d.degree,
                            source_rank: d.source_rank,
                            target_rank: d.target_rank,
                            joint_rank: d.joint_rank,
                            annihilator_dim: d.annihilator_dim,
                            j_t_prime_dim: d.j_t_prime_dim,
                        })
                        .collect(),
                })
                .collect(),
            chain: sets(&c.chain),
        }
    }

    /// Rebuilds the typed certificate for `cfg`, whose digest must match.
    pub fn to_certificate<F: Field>(&self, cfg: &Configuration<F>, digest: &str) -> Result<FiltrationCertificate<F>, CertificateError> {
        if self.schema != SCHEMA {
            return Err(CertificateError::Schema(self.schema.clone()));
        }
        if self.config_digest != digest {
            return Err(CertificateError::Digest { expected: digest.into(), found: self.config_digest.clone() });
        }
        let f = cfg.field();
        let n = cfg.len();
        let field = match self.field {
            FieldSpec::Rational => FieldTag::Rational,
            FieldSpec::Prime { p } => FieldTag::Prime(p),
        };
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(StepCertificate {
                    t: to_set(&s.t, n)?,
                    t_prime: to_set(&s.t_prime, n)?,
                    union: to_set(&s.union, n)?,
                    v: scalars(f, &s.v)?,
                    est_rank: s.est_rank,
                    est_rows: s.est_rows,
                    perp_dim: s.perp_dim,
                    union_perp_dim: s.union_perp_dim,
                    generation_degrees: s.generation_degrees.clone(),
                    degrees: s
                        .degrees
                        .iter()
                        .map(|d| DegreeCheck {
                            degree: d.degree,
                            source_rank: d.source_rank,
                            target_rank: d.target_rank,
                            joint_rank: d.joint_rank,
                            annihilator_dim: d.annihilator_dim,
                            j_t_prime_dim: d.j_t_prime_dim,
                        })
                        .collect(),
                })
            })
            .collect::<Result<Vec<_>, CertificateError>>()?;
        Ok(FiltrationCertificate {
            field,
            lambda: self.lambda.iter().map(|v| to_set(v, n)).collect::<Result<_, _>>()?,
            trivialization: scalars(f, &self.trivialization)?,
            d_iso: self.d_iso,
            es_rank: self.es_rank,
            model_dims: self.model_dims.clone(),
            steps,
            chain: self.chain.iter().map(|v| to_set(v, n)).collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationDto {
    pub quadratic: bool,
    pub failing_degree: Option<usize>,
    pub restricted_vars: usize,
    pub stabilization: usize,
    /// `[degree, dim I_d, dim R_1 I_{d-1}]`.
    pub steps: Vec<[usize; 3]>,
}

impl From<&QuadraticGeneration> for GenerationDto {
    fn from(q: &QuadraticGeneration) -> Self {
        Self {
            quadratic: q.quadratic,
            failing_degree: q.failing_degree,
            restricted_vars: q.restricted_vars,
            stabilization: q.stabilization,
            steps: q.steps.iter().map(|s| [s.degree, s.ideal_dim, s.generated_dim]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricSection {
    pub independent_on_quadrics: bool,
    pub quadric_rank: usize,
    pub quadric_count: usize,
    pub generation: GenerationDto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSection {
    pub method: String,
    pub i_max: usize,
    pub j_max: usize,
    pub computed_over: FieldSpec,
    pub hilbert: Vec<usize>,
    /// `tor[i][j] = dim Tor_{i,j}(k, k)`.
    pub tor: Vec<Vec<usize>>,
    pub diagonal_only: bool,
    /// `[i, j, dim]` for every nonzero entry with `i != j`.
    pub off_diagonal: Vec<[usize; 3]>,
    pub euler_columns_checked: usize,
    pub euler_holds: bool,
    pub skipped_primes: Vec<u64>,
    pub exact_confirmation: Option<bool>,
    pub interpretation: String,
}

impl From<&OracleReport> for OracleSection {
    fn from(r: &OracleReport) -> Self {
        let diagonal_only = r.diagonal_only();
        let interpretation = if diagonal_only {
            "no off-diagonal Tor in the window: consistent with Koszulness, not a proof".to_string()
        } else {
            let (i, j, d) = r.table.off_diagonal()[0];
            format!("Tor_{{{i},{j}}} has dimension {d} with {j} != {i}: the algebra is not Koszul")
        };
        Self {
            method: r.method.name().into(),
            i_max: r.table.i_max,
            j_max: r.table.j_max,
            computed_over: r.table.computed_over.into(),
            hilbert: r.hilbert.values.clone(),
            tor: r.table.dims.clone(),
            diagonal_only,
            off_diagonal: r.table.off_diagonal().into_iter().map(|(i, j, d)| [i, j, d]).collect(),
            euler_columns_checked: r.euler.checked,
            euler_holds: r.euler.holds(),
            skipped_primes: r.skipped_primes.clone(),
            exact_confirmation: r.exact_confirmation,
            interpretation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentSection {
    pub subset: Vec<usize>,
    pub koszul_by_descent: bool,
    pub route: Option<String>,
    pub provenance: String,
    pub quadric_rank: usize,
    pub through_rank: usize,
    pub sum_rank: usize,
    pub separating_quadric: Option<Vec<String>>,
    pub explanation: String,
}

impl DescentSection {
    pub fn of<F: Field>(f: &F, subset: PointSet, v: &DescentVerdict<F>) -> Self {
        Self {
            subset: indices(subset),
            koszul_by_descent: v.koszul_by_descent,
            route: v.route.map(|r| r.name().to_string()),
            provenance: format!("{:?}", v.provenance).to_lowercase(),
            quadric_rank: v.quadric_rank,
            through_rank: v.through_rank,
            sum_rank: v.sum_rank,
            separating_quadric: v.separating_quadric.as_ref().map(|q| q.iter().map(|x| f.render(x)).collect()),
            explanation: v.explanation.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanTrialDto {
    pub index: usize,
    pub points: Vec<Vec<i64>>,
    pub rejected: usize,
    pub injected: bool,
    pub outcome: String,
    pub detail: String,
    pub oracle: Option<OracleSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSection {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub coord_bound: i64,
    pub inject_rains: bool,
    pub certified: usize,
    pub oracle_consistent_only: usize,
    pub oracle_refuted: usize,
    pub budget_exhausted: usize,
    pub results: Vec<ScanTrialDto>,
}

/// One report per command invocation. `timing_ms` is the only field that
/// may differ between runs on the same input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    pub configuration: Option<ConfigSummary>,
    pub verdict: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flats: Option<FlatsSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub search: Option<SearchSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateDto>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quadrics: Option<QuadricSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub descent: Option<DescentSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scan: Option<ScanSection>,
    pub notes: Vec<String>,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str, configuration: Option<ConfigSummary>) -> Self {
        Self {
            schema: SCHEMA.into(),
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            configuration,
            verdict: String::new(),
            exit_code: 0,
            flats: None,
            search: None,
            certificate: None,
            quadrics: None,
            descent: None,
            oracle: None,
            scan: None,
            notes: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
