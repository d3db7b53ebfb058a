//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact integer or boolean checks; runtime limits are pinned below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use koszul_points::Report;
use koszul_points_core::families::{self, catalog};
use koszul_points_core::filtration::recheck_certificate;
use koszul_points_core::lambda::{check_star, check_star_star, saturate, search_lambda, LambdaSet, SearchOptions, SearchOutcome};
use koszul_points_core::oracle::{
    self, euler_check, hilbert_positivity_bound, hilbert_positivity_check, koszul_window_check, quadratic_generation_check,
    OracleField, OracleOptions, TorMethod, DEFAULT_SERIES_ORDER,
};
use koszul_points_core::pipeline::{certify, CertifyOptions, Verdict};
use koszul_points_core::quadrics::{descent_check, imposes_independent_on_quadrics, Evidence};
use koszul_points_core::scan::{conjecture_scan, ScanOptions};
use koszul_points_core::{Configuration, Field, PointSet, PrimeField, Rationals};

const LIMIT_RAINS: Duration = Duration::from_secs(30);
const LIMIT_GENERAL_POSITION: Duration = Duration::from_secs(60);
const LIMIT_COLLINEAR: Duration = Duration::from_secs(5);
const LIMIT_SCAN: Duration = Duration::from_secs(300);
const PROPERTY_INSTANCES: usize = 220;
const SUBSET_SAMPLES: usize = 60;
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_koszul-points")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fp() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

fn criterion_1() -> Outcome {
    let r = families::rains_configuration(Rationals);
    let lattice = r.flats_lattice(16).map_err(|e| e.to_string())?;
    ensure(r.two_r_condition(&lattice).is_ok(), "(a) 2r condition fails")?;

    let mut balanced = 0;
    let mut splits = 0;
    for s1 in PointSet::full(8).subsets().filter(|s| s.len() == 4 && s.contains(0)) {
        let s2 = r.all().difference(s1);
        balanced += 1;
        let ok = |s: PointSet| r.is_independent(s) && r.is_flat(s);
        if ok(s1) && ok(s2) {
            splits += 1;
        }
    }
    ensure(balanced == 35 && splits == 0, format!("(b) {splits} of {balanced} balanced partitions split"))?;

    let [a, b, c] = families::rains_chain();
    let lambda = LambdaSet::new(&r, [a, b, c, a.union(b), b.union(c), a.union(b).union(c)]).map_err(|e| e.to_string())?;
    ensure(lambda.to_vec().iter().all(|&x| r.is_flat(x)), "(c) consecutive unions are not flats")?;
    ensure(check_star(&lambda).is_ok(), "(c) chain fails (*)")?;
    let (code, out) = cli(&["certify", &fixture("rains.json"), "--json"]);
    let report: Report = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure(code == 0 && report.verdict == "certified-koszul", format!("(c) certify gave {} / exit {code}", report.verdict))?;

    let bar = oracle::tor_table(&families::rains_configuration(fp()), &OracleOptions { i_max: 3, j_max: 5, method: TorMethod::Bar, ..OracleOptions::default() })
        .map_err(|e| e.to_string())?;
    ensure(koszul_window_check(&bar), format!("(d) off-diagonal entries {:?}", bar.off_diagonal()))?;
    let diag: Vec<usize> = (0..=3).map(|i| bar.get(i, i)).collect();
    Ok(format!("35 partitions, 0 splits; chain certified; bar diagonal {diag:?}"))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for n in 2..=5 {
        for s in 1..=2 * n {
            let cfg = families::gen_general_position(Rationals, n, s).map_err(|e| e.to_string())?;
            let out = certify(&cfg, &CertifyOptions { oracle: None, ..CertifyOptions::default() }).map_err(|e| e.to_string())?;
            let c = out.certified.ok_or(format!("n={n} s={s}: {}", out.verdict.name()))?;
            ensure(c.hypothesis.is_template(), format!("n={n} s={s}: certified by {}", c.hypothesis.name()))?;
            count += 1;
        }
    }
    Ok(format!("{count} (n, s) pairs certified by templates"))
}

fn criterion_3() -> Outcome {
    for (n, m, expected) in [(4, 3, 9), (5, 3, 12)] {
        let fam = families::gen_block_unions(Rationals, n, m).map_err(|e| e.to_string())?;
        ensure(fam.config.len() == expected, format!("n={n} m={m}: {} points", fam.config.len()))?;
        let out = certify(&fam.config, &CertifyOptions { oracle: None, ..CertifyOptions::default() }).map_err(|e| e.to_string())?;
        ensure(out.verdict == Verdict::CertifiedKoszul, format!("n={n} m={m}: {}", out.verdict.name()))?;
    }
    ensure(4 * 9 == 4 + 4 * 4 + 16, "9 = 1 + 4 + 16/4")?;
    ensure(4 * 12 == (5 + 1) * (5 + 3), "12 = 6 * 8 / 4")?;
    let mut cases = 0;
    for n in 1..=10u64 {
        for s in n + 1..=1 + n + (n * n).div_ceil(4) + 2 {
            let series = hilbert_positivity_check(n, s, DEFAULT_SERIES_ORDER);
            ensure(series == hilbert_positivity_bound(n, s), format!("n={n} s={s}: series {series}"))?;
            cases += 1;
        }
    }
    ensure(hilbert_positivity_check(4, 9, DEFAULT_SERIES_ORDER) && !hilbert_positivity_check(4, 10, DEFAULT_SERIES_ORDER), "boundary n=4")?;
    Ok(format!("9 and 12 points certified; {cases} positivity cases agree"))
}

fn criterion_4() -> Outcome {
    let c = Configuration::from_integers(Rationals, 2, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]).map_err(|e| e.to_string())?;
    let lattice = c.flats_lattice(16).map_err(|e| e.to_string())?;
    ensure(lattice.len() == 5, format!("{} flats", lattice.len()))?;
    match search_lambda(&c, SearchOptions::default()).map_err(|e| e.to_string())? {
        SearchOutcome::NotFound { exhaustive: true, .. } => {}
        _ => return Err("search did not refute exhaustively".into()),
    }
    let g = quadratic_generation_check(&c);
    ensure(g.failing_degree == Some(3), format!("generation fails at {:?}", g.failing_degree))?;
    let bar = oracle::tor_table(&c, &OracleOptions { method: TorMethod::Bar, ..OracleOptions::default() }).map_err(|e| e.to_string())?;
    ensure(bar.get(2, 3) >= 1, "Tor_{2,3} vanishes")?;
    Ok(format!("5 flats, exhaustive refusal, cubic generator, Tor_{{2,3}} = {}", bar.get(2, 3)))
}

/// A random generator call with feasible parameters.
fn random_family<F: Field>(field: F, rng: &mut ChaCha8Rng) -> Configuration<F> {
    loop {
        let n = rng.random_range(2..=4usize);
        let res = match rng.random_range(0..5) {
            0 => families::gen_split(field.clone(), n, [rng.random_range(1..=n), rng.random_range(1..=n)]).map(|f| f.config),
            1 => {
                let m = rng.random_range(1..=3usize);
                let sizes: Vec<usize> = (0..m).map(|_| rng.random_range(1..=n - 1)).collect();
                families::gen_chain(field.clone(), n, &sizes).map(|f| f.config)
            }
            2 if n >= 3 => {
                let k = n - 2;
                let sizes = [rng.random_range(0..=k), rng.random_range(1..=k), rng.random_range(1..=k), rng.random_range(1..=k)];
                families::gen_three_planes(field.clone(), n, sizes).map(|f| f.config)
            }
            3 => families::gen_block_unions(field.clone(), n, rng.random_range(1..=n + 1)).map(|f| f.config),
            _ => families::gen_general_position(field.clone(), n, rng.random_range(1..=2 * n)),
        };
        if let Ok(c) = res {
            return c;
        }
    }
}

fn soundness_instance<F: OracleField>(cfg: &Configuration<F>) -> Result<(), String> {
    let out = certify(cfg, &CertifyOptions { oracle: None, ..CertifyOptions::default() }).map_err(|e| e.to_string())?;
    let c = out.certified.ok_or("not certified")?;
    let cert = &c.certificate;
    recheck_certificate(cfg, cert).map_err(|e| e.to_string())?;
    ensure(cert.es_rank == cfg.len(), "e_S not surjective")?;
    for s in &cert.steps {
        ensure(s.est_rank == s.est_rows, format!("e_S,T not surjective at {}", s.t))?;
        ensure(s.perp_dim == s.union_perp_dim + 1, format!("perp identity fails at {}", s.t))?;
    }
    ensure(imposes_independent_on_quadrics(cfg, cfg.all()), "dependent on quadrics")
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 0..PROPERTY_INSTANCES {
        if k % 2 == 0 {
            let c = random_family(Rationals, &mut rng);
            soundness_instance(&c).map_err(|e| format!("instance {k} over QQ ({} points in P^{}): {e}", c.len(), c.dim()))?;
        } else {
            let c = random_family(fp(), &mut rng);
            soundness_instance(&c).map_err(|e| format!("instance {k} over GF(32003) ({} points in P^{}): {e}", c.len(), c.dim()))?;
        }
    }
    Ok(format!("{PROPERTY_INSTANCES} instances, seed {SEED}, half over QQ and half over GF(32003)"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut subsets = 0;
    let mut families_checked = 0;
    while subsets < SUBSET_SAMPLES {
        let cfg = random_family(Rationals, &mut rng);
        let found = match search_lambda(&cfg, SearchOptions::default()).map_err(|e| e.to_string())? {
            SearchOutcome::Found { lambda, .. } => lambda,
            SearchOutcome::NotFound { .. } => return Err("generated family not certified".into()),
        };
        let sat = saturate(&found).map_err(|e| e.to_string())?;
        let members = sat.to_vec();
        for &x in &members {
            for &y in &members {
                ensure(sat.contains(x.intersection(y)), format!("saturation not closed under {x} ∩ {y}"))?;
            }
        }
        ensure(check_star_star(&sat).is_ok(), "saturation fails (**)")?;
        families_checked += 1;
        for _ in 0..3 {
            let bits = rng.random_range(1..(1u64 << cfg.len()));
            let sub = PointSet::from_bits(bits);
            let (sub_cfg, sets) = sat.induced(sub).map_err(|e| e.to_string())?;
            let induced = LambdaSet::new(&sub_cfg, sets).map_err(|e| e.to_string())?;
            ensure(check_star(&induced).is_ok(), format!("induced family on {sub} fails (*)"))?;
            subsets += 1;
        }
    }
    Ok(format!("{subsets} subsets of {families_checked} saturated families"))
}

fn criterion_7() -> Outcome {
    let mut deletions = 0;
    for (name, cfg) in catalog(Rationals).map_err(|e| e.to_string())? {
        let opts = CertifyOptions { oracle: None, ..CertifyOptions::default() };
        let out = certify(&cfg, &opts).map_err(|e| e.to_string())?;
        let c = out.certified.ok_or(format!("{name} not certified"))?;
        for p in 0..cfg.len() {
            let sub = cfg.all().without(p);
            let v = descent_check(&cfg, sub, Evidence::Certificate(&c.certificate)).map_err(|e| e.to_string())?;
            ensure(v.koszul_by_descent, format!("{name} minus {p}: {}", v.explanation))?;
            let (sub_cfg, _) = cfg.restrict(sub).map_err(|e| e.to_string())?;
            let again = certify(&sub_cfg, &opts).map_err(|e| e.to_string())?;
            ensure(again.verdict == Verdict::CertifiedKoszul, format!("{name} minus {p}: search gave {}", again.verdict.name()))?;
            deletions += 1;
        }
    }
    Ok(format!("{deletions} single-point deletions agree"))
}

fn oracle_instance<F: OracleField>(name: &str, cfg: &Configuration<F>) -> Result<(), String> {
    let r = F::run_oracle(cfg, &OracleOptions::default()).map_err(|e| e.to_string())?;
    ensure(koszul_window_check(&r.table), format!("{name}: off-diagonal {:?}", r.table.off_diagonal()))?;
    let e = euler_check(&r.table, &r.hilbert);
    ensure(e.holds(), format!("{name}: euler mismatch {:?}", e.mismatch))
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    for (name, cfg) in catalog(Rationals).map_err(|e| e.to_string())? {
        oracle_instance(&name, &cfg)?;
        count += 1;
    }
    for (name, cfg) in catalog(fp()).map_err(|e| e.to_string())? {
        oracle_instance(&name, &cfg)?;
        count += 1;
    }
    Ok(format!("{count} bundled configurations, window i <= 4, j <= 6, euler on columns 0..=4"))
}

fn criterion_9() -> Outcome {
    let (code, out) = cli(&["scan", "--n", "3", "--trials", "50", "--seed", "1", "--json"]);
    let report: Report = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let scan = report.scan.ok_or("no scan section")?;
    ensure(code == 0, format!("exit {code}"))?;
    ensure(scan.oracle_refuted == 0, format!("{} refuted", scan.oracle_refuted))?;
    ensure(scan.certified == 50, format!("{} of 50 certified", scan.certified))?;
    let lib = conjecture_scan(&ScanOptions::new(3, 50, 1)).map_err(|e| e.to_string())?;
    ensure(lib.count("certified") == 50, "library scan disagrees")?;
    Ok("50 of 50 certified, 0 refuted".into())
}

fn main() {
    let criteria: [(u32, &str, Option<Duration>, fn() -> Outcome); 9] = [
        (1, "Rains configuration suite", Some(LIMIT_RAINS), criterion_1),
        (2, "general position up to 2n points", Some(LIMIT_GENERAL_POSITION), criterion_2),
        (3, "block-union counts and positivity", None, criterion_3),
        (4, "collinear negative control", Some(LIMIT_COLLINEAR), criterion_4),
        (5, "certificate soundness properties", None, criterion_5),
        (6, "induced and saturated families", None, criterion_6),
        (7, "descent agrees with search", None, criterion_7),
        (8, "oracle consistency on bundled families", None, criterion_8),
        (9, "conjecture scan smoke test", Some(LIMIT_SCAN), criterion_9),
    ];
    let mut failed = 0;
    for (id, title, limit, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {:.1} s, limit {} s", elapsed.as_secs_f64(), l.as_secs())),
            (r, _) => r,
        };
        let time = match limit {
            Some(l) => format!("{:.1} s / limit {} s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.1} s", elapsed.as_secs_f64()),
        };
        match result {
            Ok(detail) => println!("PASS criterion {id}: {title} [{time}] {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id}: {title} [{time}] {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
