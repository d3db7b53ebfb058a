//! The certification pipeline: search for a family, saturate it, verify the
//! filtration, cross-check against quadrics, and optionally run the oracle.

use alloc::vec::Vec;

use crate::config::Configuration;
use crate::filtration::{verify_koszul_family, FiltrationCertificate, FiltrationError, DEFAULT_D_ISO};
use crate::lambda::{saturate, search_lambda, Hypothesis, LambdaError, SearchOptions, SearchOutcome};
use crate::oracle::{quadratic_generation_check, OracleError, OracleField, OracleOptions, OracleReport, QuadraticGeneration};
use crate::pointset::PointSet;
use crate::quadrics::imposes_independent_on_quadrics;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    CertifiedKoszul,
    CriterionInapplicable,
    OracleRefuted,
    /// The search stopped on its budget and the oracle found nothing.
    BudgetExhausted,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::CertifiedKoszul => "certified-koszul",
            Verdict::CriterionInapplicable => "criterion-inapplicable",
            Verdict::OracleRefuted => "oracle-refuted",
            Verdict::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    /// A found family failed verification: a defect, never an input error.
    #[error("found family failed verification: {0}")]
    Unsound(FiltrationError),
    #[error("cross-check failed: {0}")]
    CrossCheck(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub search: SearchOptions,
    pub d_iso: usize,
    /// `None` skips the oracle window.
    pub oracle: Option<OracleOptions>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { search: SearchOptions::default(), d_iso: DEFAULT_D_ISO, oracle: Some(OracleOptions::default()) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certified<F: OracleField> {
    pub hypothesis: Hypothesis,
    /// Family returned by the search, before saturation.
    pub found: Vec<PointSet>,
    pub certificate: FiltrationCertificate<F>,
    pub quadrics_independent: bool,
    pub quadratic: QuadraticGeneration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyOutcome<F: OracleField> {
    pub verdict: Verdict,
    pub certified: Option<Certified<F>>,
    /// For a failed search: whether every candidate family was ruled out.
    pub exhaustive: bool,
    pub budget_used: u64,
    pub oracle: Option<OracleReport>,
}

pub fn certify<F: OracleField>(cfg: &Configuration<F>, opts: &CertifyOptions) -> Result<CertifyOutcome<F>, PipelineError> {
    match search_lambda(cfg, opts.search)? {
        SearchOutcome::Found { lambda, hypothesis, budget_used, .. } => {
            let found = lambda.to_vec();
            let saturated = saturate(&lambda)?;
            let certificate = verify_koszul_family(&saturated, opts.d_iso).map_err(PipelineError::Unsound)?;
            let quadrics_independent = imposes_independent_on_quadrics(cfg, cfg.all());
            if !quadrics_independent {
                return Err(PipelineError::CrossCheck("certified set does not impose independent conditions on quadrics"));
            }
            let quadratic = quadratic_generation_check(cfg);
            if !quadratic.quadratic {
                return Err(PipelineError::CrossCheck("certified set has an ideal not generated by quadrics"));
            }
            let oracle = opts.oracle.map(|o| F::run_oracle(cfg, &o)).transpose()?;
            if oracle.as_ref().is_some_and(|r| !r.diagonal_only()) {
                return Err(PipelineError::CrossCheck("oracle found off-diagonal Tor on a certified set"));
            }
            Ok(CertifyOutcome {
                verdict: Verdict::CertifiedKoszul,
                certified: Some(Certified { hypothesis, found, certificate, quadrics_independent, quadratic }),
                exhaustive: false,
                budget_used,
                oracle,
            })
        }
        SearchOutcome::NotFound { exhaustive, budget_used } => {
            let oracle = opts.oracle.map(|o| F::run_oracle(cfg, &o)).transpose()?;
            let refuted = oracle.as_ref().is_some_and(|r| !r.diagonal_only());
            let out_of_budget = !exhaustive && budget_used >= opts.search.budget;
            let verdict = if refuted {
                Verdict::OracleRefuted
            } else if out_of_budget {
                Verdict::BudgetExhausted
            } else {
                Verdict::CriterionInapplicable
            };
            Ok(CertifyOutcome { verdict, certified: None, exhaustive, budget_used, oracle })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};
    use alloc::vec;

    #[test]
    fn rains_certifies_through_the_chain() {
        let r = families::rains_configuration(Rationals);
        let out = certify(&r, &CertifyOptions::default()).unwrap();
        assert_eq!(out.verdict, Verdict::CertifiedKoszul);
        let c = out.certified.unwrap();
        assert_eq!(c.hypothesis.name(), "consecutive-union chain");
        assert!(out.oracle.unwrap().diagonal_only());
    }

    #[test]
    fn collinear_is_refuted() {
        let c = Configuration::from_integers(Rationals, 2, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]).unwrap();
        let out = certify(&c, &CertifyOptions::default()).unwrap();
        assert_eq!(out.verdict, Verdict::OracleRefuted);
        assert!(out.exhaustive);
        let no_oracle = CertifyOptions { oracle: None, ..CertifyOptions::default() };
        assert_eq!(certify(&c, &no_oracle).unwrap().verdict, Verdict::CriterionInapplicable);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let fp = PrimeField::new(DEFAULT_PRIME).unwrap();
        let c = Configuration::from_integers(fp, 2, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]).unwrap();
        let opts = CertifyOptions { search: SearchOptions { budget: 0, ..SearchOptions::default() }, ..CertifyOptions::default() };
        // the oracle still refutes
        assert_eq!(certify(&c, &opts).unwrap().verdict, Verdict::OracleRefuted);
        let opts = CertifyOptions { oracle: None, ..opts };
        assert_eq!(certify(&c, &opts).unwrap().verdict, Verdict::BudgetExhausted);
    }

    #[test]
    fn catalog_certifies_over_a_prime_field() {
        for (name, c) in families::catalog(PrimeField::new(DEFAULT_PRIME).unwrap()).unwrap() {
            let out = certify(&c, &CertifyOptions::default()).unwrap();
            assert_eq!(out.verdict, Verdict::CertifiedKoszul, "{name}");
            assert!(out.oracle.unwrap().euler.holds(), "{name}");
        }
    }
}
