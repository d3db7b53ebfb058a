//! Plain-text summaries of reports.

use std::fmt::Write;

use crate::format::FieldSpec;
use crate::report::{OracleSection, Report};

fn field_name(f: FieldSpec) -> String {
    match f {
        FieldSpec::Rational => "QQ".into(),
        FieldSpec::Prime { p } => format!("GF({p})"),
    }
}

fn set(v: &[usize]) -> String {
    let inner: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn oracle_lines(out: &mut String, o: &OracleSection) {
    let _ = writeln!(out, "hilbert function: {:?}", o.hilbert);
    let _ = writeln!(out, "Tor window i <= {}, j <= {} over {} ({}):", o.i_max, o.j_max, field_name(o.computed_over), o.method);
    let _ = write!(out, "     ");
    for j in 0..=o.j_max {
        let _ = write!(out, "{:>6}", format!("j={j}"));
    }
    let _ = writeln!(out);
    for (i, row) in o.tor.iter().enumerate() {
        let _ = write!(out, "i={i:<3}");
        for v in row {
            let _ = write!(out, "{v:>6}");
        }
        let _ = writeln!(out);
    }
    let _ = writeln!(out, "euler identity on columns 0..={}: {}", o.euler_columns_checked, if o.euler_holds { "holds" } else { "FAILS" });
    if !o.skipped_primes.is_empty() {
        let _ = writeln!(out, "primes with bad reduction: {:?}", o.skipped_primes);
    }
    if let Some(c) = o.exact_confirmation {
        let _ = writeln!(out, "first off-diagonal entry recomputed over QQ: {}", if c { "confirmed" } else { "not confirmed" });
    }
    let _ = writeln!(out, "{}", o.interpretation);
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    if let Some(c) = &r.configuration {
        let _ = writeln!(out, "configuration: {} points in P^{} over {} (sha256 {})", c.points, c.dim, field_name(c.field), &c.digest[..16]);
    }
    let _ = writeln!(out, "verdict: {}", r.verdict);
    if let Some(f) = &r.flats {
        let _ = writeln!(out, "{} flats; 2r condition {}", f.count, if f.two_r_condition { "holds" } else { "fails" });
        if let Some(v) = &f.violating_flat {
            let _ = writeln!(out, "  violated by {} spanning a {}-plane", set(&v.members), v.span_dim);
        }
        for fl in &f.flats {
            let _ = writeln!(out, "  dim {:>2}  {}", fl.span_dim, set(&fl.members));
        }
    }
    if let Some(s) = &r.search {
        match &s.hypothesis {
            Some(h) => {
                let _ = writeln!(out, "hypothesis: {h}");
                let fam: Vec<String> = s.lambda.iter().map(|v| set(v)).collect();
                let _ = writeln!(out, "family: {}", fam.join(" "));
            }
            None => {
                let _ = writeln!(
                    out,
                    "no certifying family ({}, {} checks)",
                    if s.exhaustive { "exhaustive" } else { "not exhaustive" },
                    s.budget_used
                );
            }
        }
    }
    if let Some(c) = &r.certificate {
        let chain: Vec<String> = c.chain.iter().map(|v| set(v)).collect();
        let _ = writeln!(out, "certificate: {} members after saturation, {} steps, D_iso = {}", c.lambda.len(), c.steps.len(), c.d_iso);
        let _ = writeln!(out, "  chain: {}", chain.join(" < "));
        let _ = writeln!(out, "  model dimensions: {:?}", c.model_dims);
    }
    if let Some(q) = &r.quadrics {
        let _ = writeln!(
            out,
            "quadrics: rank {} of {} ({})",
            q.quadric_rank,
            q.quadric_count,
            if q.independent_on_quadrics { "independent conditions" } else { "dependent conditions" }
        );
        match q.generation.failing_degree {
            None => {
                let _ = writeln!(out, "ideal generated in degrees <= 2 (checked up to degree {})", q.generation.stabilization + 1);
            }
            Some(d) => {
                let _ = writeln!(out, "ideal needs a generator in degree {d}");
            }
        }
    }
    if let Some(d) = &r.descent {
        let _ = writeln!(out, "subset {}: {}", set(&d.subset), d.explanation);
        if let Some(route) = &d.route {
            let _ = writeln!(out, "route: {route} (evidence: {})", d.provenance);
        }
    }
    if let Some(o) = &r.oracle {
        oracle_lines(&mut out, o);
    }
    if let Some(s) = &r.scan {
        let _ = writeln!(out, "scan n = {}, {} trials, seed {}, coordinates in [-{}, {}]", s.n, s.trials, s.seed, s.coord_bound, s.coord_bound);
        let _ = writeln!(
            out,
            "certified {}, oracle-consistent-only {}, oracle-refuted {}, budget-exhausted {}",
            s.certified, s.oracle_consistent_only, s.oracle_refuted, s.budget_exhausted
        );
        for t in &s.results {
            let _ = writeln!(out, "  #{:<3} {:<22} {}", t.index, t.outcome, t.detail);
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}
