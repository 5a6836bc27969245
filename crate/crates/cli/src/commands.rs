use std::collections::BTreeSet;
use std::fs;

use anyhow::{bail, Result};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use pilab_core::algebra::AlgebraSpec;
use pilab_core::phi::{self, exp_formula_slope, insert_row, lemma1_check, maximize_extension, realize_exponent};
use pilab_core::polyspace::monomial::Tree;
use pilab_core::polyspace::Engine;
use pilab_core::real;
use pilab_core::reptheory::{audits, cocharacter, unital_growth_audit, AuditLine, AuditStatus, Partition};
use pilab_core::witness::{self, build_tableau, lemma12_sequence, upper_bound_audit, Schedule, TableauForm};
use pilab_core::words::{bits_to_string, Slope, WordKind};

use crate::config::RunConfig;
use crate::report::Report;

fn status(ok: bool) -> String {
    AuditStatus::from_bool(ok).to_string()
}

pub fn word(cfg: &RunConfig, length: usize) -> Result<Vec<Report>> {
    let w = cfg.word_spec()?;
    let prefix = w.generate_prefix(length)?;
    let mut r = Report::new("word", &["length", "complexity", "certified", "expected", "ones", "partial_slope"]);
    for l in 1..=length {
        let (count, set) = w.complexity(l)?;
        let expected = match (w.kind(), w.slope()) {
            (WordKind::Periodic(p), _) => format!("<={}", p.len()),
            (_, Slope::Rational(q)) => (l + 1).min(q.denom().to_usize().unwrap_or(usize::MAX)).to_string(),
            _ => (l + 1).to_string(),
        };
        r.row(vec![
            l.to_string(),
            count.to_string(),
            set.certified.to_string(),
            expected,
            w.ones_count(l).to_string(),
            w.slope_partial(l)?.to_string(),
        ]);
    }
    r.notes.push(format!("prefix: {}", bits_to_string(&prefix)));
    r.notes.push(format!("slope: {}", w.slope()));
    let data = json!({ "word": w.to_string(), "prefix": bits_to_string(&prefix), "slope": w.slope().to_string() });
    Ok(vec![r.with_data(&data)?])
}

pub fn codim(cfg: &RunConfig) -> Result<Vec<Report>> {
    let mut engine = Engine::new(cfg.algebra()?, cfg.engine_options())?;
    let mut r = Report::new(
        "codim",
        &["n", "c_n", "c_n_root", "method", "rows", "cols", "nonzeros", "reduced_rows", "reduced_cols"],
    );
    let mut certs = Vec::new();
    for n in cfg.ns() {
        let (c, cert) = engine.codimension(n)?;
        r.row(vec![
            n.to_string(),
            c.to_string(),
            format!("{:.6}", (c as f64).powf(1.0 / n as f64)),
            cert.method.to_string(),
            cert.rows.to_string(),
            cert.cols.to_string(),
            cert.nonzeros.to_string(),
            cert.reduced_rows.to_string(),
            cert.reduced_cols.to_string(),
        ]);
        certs.push(cert);
    }
    Ok(vec![r.with_data(&certs)?])
}

fn audit_rows(r: &mut Report, lines: &[AuditLine]) {
    for a in lines {
        r.row(vec![a.name.clone(), a.n.to_string(), a.status.to_string(), a.detail.clone()]);
    }
}

pub fn cochar(cfg: &RunConfig) -> Result<Vec<Report>> {
    let mut engine = Engine::new(cfg.algebra()?, cfg.engine_options())?;
    let mut table_report = Report::new("cochar", &["n", "lambda", "m_lambda", "deg", "phi"]);
    let mut audit_report = Report::new("cochar-audits", &["audit", "n", "status", "detail"]);
    let mut tables = Vec::new();
    let mut all_audits = Vec::new();
    for n in cfg.ns() {
        let table = cocharacter(&mut engine, n, cfg.d)?;
        for e in &table.entries {
            table_report.row(vec![
                n.to_string(),
                e.partition.to_string(),
                e.multiplicity.to_string(),
                e.degree.to_string(),
                format!("{:.12}", e.phi),
            ]);
        }
        let lines = audits(&mut engine, &table)?;
        audit_rows(&mut audit_report, &lines);
        all_audits.extend(lines);
        tables.push(table);
    }
    table_report.notes.push(format!("partitions with at most d = {} rows", cfg.d));
    Ok(vec![table_report.with_data(&tables)?, audit_report.with_data(&all_audits)?])
}

pub fn exponent(cfg: &RunConfig) -> Result<Vec<Report>> {
    let spec = cfg.algebra()?;
    let f = exp_formula_slope(spec.m(), &spec.word().slope())?;
    let phi0 = real::to_f64(&f.phi0);
    let target = if spec.unital() { phi0 + 1.0 } else { phi0 };
    let reference = target + cfg.delta;
    let mut engine = Engine::new(spec.clone(), cfg.engine_options())?;
    let mut r = Report::new(
        "exponent",
        &["n", "c_n", "c_n_root", "phi0_beta", "phi0_beta_plus_1", "reference", "below_reference", "max_phi_lambda", "phi_audit", "method"],
    );
    let mut prev: Option<f64> = None;
    let mut monotone = true;
    for n in cfg.ns() {
        let (c, cert) = engine.codimension(n)?;
        let root = (c as f64).powf(1.0 / n as f64);
        monotone &= prev.map_or(true, |p| p <= root);
        prev = Some(root);
        let (max_phi, phi_ok) = if spec.unital() {
            let table = cocharacter(&mut engine, n, cfg.d)?;
            let audit = upper_bound_audit(&table, &spec, cfg.delta)?;
            (format!("{:.6}", audit.max_phi), status(audit.pass))
        } else {
            ("-".into(), "-".into())
        };
        r.row(vec![
            n.to_string(),
            c.to_string(),
            format!("{root:.6}"),
            format!("{phi0:.9}"),
            format!("{:.9}", phi0 + 1.0),
            format!("{reference:.9}"),
            status(root < reference),
            max_phi,
            phi_ok,
            cert.method.to_string(),
        ]);
    }
    r.notes.push("finite-n trend only; these values say nothing about the limit".into());
    r.notes.push(format!("beta = {:.12}", real::to_f64(&f.beta)));
    r.notes.push(format!("c_n^(1/n) non-decreasing over the range: {monotone}"));
    let data = json!({
        "beta": real::to_f64(&f.beta),
        "phi0_beta": phi0,
        "target": target,
        "reference": reference,
        "non_decreasing": monotone,
    });
    Ok(vec![r.with_data(&data)?])
}

pub const SUITES: [&str; 9] = [
    "degree-bounds",
    "extension",
    "row-insertion",
    "multiplicity",
    "non-unital-bounds",
    "unital-growth",
    "unital-colength",
    "row-ratio",
    "symmetrizer",
];

pub fn verify(cfg: &RunConfig, suites: &[String]) -> Result<Vec<Report>> {
    let chosen: BTreeSet<&str> = if suites.is_empty() {
        SUITES.iter().copied().collect()
    } else {
        let mut s = BTreeSet::new();
        for x in suites {
            match SUITES.iter().find(|k| **k == x.as_str()) {
                Some(k) => {
                    s.insert(*k);
                }
                None => bail!("unknown suite {x:?}; choose from {}", SUITES.join(", ")),
            }
        }
        s
    };
    let mut r = Report::new("verify", &["suite", "case", "status", "detail"]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for suite in SUITES.iter().filter(|s| chosen.contains(*s)) {
        match *suite {
            "degree-bounds" => verify_degree_bounds(cfg, &mut rng, &mut r)?,
            "extension" => verify_extension(&mut rng, &mut r)?,
            "row-insertion" => verify_row_insertion(cfg, &mut r)?,
            "unital-growth" => verify_unital_growth(cfg, &mut r)?,
            "symmetrizer" => verify_symmetrizer(cfg, &mut r)?,
            name => verify_cochar_audits(cfg, name, &mut r)?,
        }
    }
    let fails = r.fail_count();
    r.notes.push(format!("{} rows, {fails} FAIL", r.rows.len()));
    Ok(vec![r])
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize, h: usize) -> Result<Partition> {
    let mut cuts = BTreeSet::new();
    while cuts.len() < h - 1 {
        cuts.insert(rng.gen_range(1..n));
    }
    let mut parts = Vec::with_capacity(h);
    let mut prev = 0;
    for c in cuts.into_iter().chain([n]) {
        parts.push(c - prev);
        prev = c;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Partition::new(parts)?)
}

fn verify_degree_bounds(cfg: &RunConfig, rng: &mut ChaCha8Rng, r: &mut Report) -> Result<()> {
    let d = cfg.d.min(4);
    for case in 0..200 {
        let n = rng.gen_range(100..=120);
        let h = rng.gen_range(1..=d);
        let lambda = random_partition(rng, n, h)?;
        let c = lemma1_check(&lambda, d)?;
        r.row(vec![
            "degree-bounds".into(),
            format!("{case}:{lambda}"),
            status(c.pass),
            format!("{:.4} <= ln deg {:.4} <= {:.4}", c.ln_lower, c.ln_degree, c.ln_upper),
        ]);
    }
    Ok(())
}

fn phi_f64(x: &[f64]) -> f64 {
    (-x.iter().map(|&v| if v > 0.0 { v * v.ln() } else { 0.0 }).sum::<f64>()).exp()
}

fn golden_section(f: impl Fn(f64) -> f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-13 {
        let c = hi - g * (hi - lo);
        let d = lo + g * (hi - lo);
        if f(c) > f(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    0.5 * (lo + hi)
}

fn verify_extension(rng: &mut ChaCha8Rng, r: &mut Report) -> Result<()> {
    for case in 0..100 {
        let d = rng.gen_range(1..=4);
        let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(0.01..1.0)).collect();
        let s: f64 = raw.iter().sum();
        let z: Vec<f64> = raw.iter().map(|v| v / s).collect();
        let (t, v) = maximize_extension(&z)?;
        let f = |t: f64| {
            let mut x: Vec<f64> = z.iter().map(|v| v * t).collect();
            x.push(1.0 - t);
            phi_f64(&x)
        };
        let ts = golden_section(f);
        let (dt, dv) = ((t - ts).abs(), (v - f(ts)).abs());
        r.row(vec![
            "extension".into(),
            case.to_string(),
            status(dt < 1e-6 && dv < 1e-9),
            format!("t*={t:.9} search={ts:.9} value={v:.12} |dt|={dt:.2e} |dv|={dv:.2e}"),
        ]);
    }
    Ok(())
}

fn verify_row_insertion(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    for parts in [vec![50, 50], vec![500, 500], vec![60, 40], vec![75, 25]] {
        let lambda = Partition::new(parts)?;
        let ins = insert_row(&lambda, cfg.eps, 0.25)?;
        r.row(vec![
            "row-insertion".into(),
            format!("{lambda} eps={}", cfg.eps),
            status(ins.gap < cfg.eps),
            format!("k={} q={} mu={} gap={:.3e}", ins.k, ins.q, ins.mu, ins.gap),
        ]);
    }
    Ok(())
}

fn verify_cochar_audits(cfg: &RunConfig, suite: &str, r: &mut Report) -> Result<()> {
    let wanted: &[&str] = match suite {
        "multiplicity" => &["character-sum", "multiplicity-bound"],
        "non-unital-bounds" => &["wnd-bound", "colength-bound", "shape-list"],
        "unital-colength" => &["strip", "colength-bound"],
        _ => &["row-ratio"],
    };
    let mut engine = Engine::new(cfg.algebra()?, cfg.engine_options())?;
    let mut any = false;
    for n in cfg.ns() {
        let table = cocharacter(&mut engine, n, cfg.d)?;
        for a in audits(&mut engine, &table)? {
            if wanted.contains(&a.name.as_str()) {
                any = true;
                r.row(vec![suite.into(), format!("{} n={n}", a.name), a.status.to_string(), a.detail]);
            }
        }
    }
    if !any {
        let which = if cfg.unital { "unital" } else { "non-unital" };
        r.row(vec![suite.into(), "-".into(), "INFO".into(), format!("not applicable to the {which} algebra")]);
    }
    Ok(())
}

fn verify_unital_growth(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let base = cfg.algebra()?;
    let mut plain = Engine::new(base.with_unit(false), cfg.engine_options())?;
    let mut sharp = Engine::new(base.with_unit(true), cfg.engine_options())?;
    let ns: Vec<usize> = cfg.ns().collect();
    for a in unital_growth_audit(&mut plain, &mut sharp, &ns, cfg.d)? {
        r.row(vec!["unital-growth".into(), format!("n={}", a.n), a.status.to_string(), a.detail]);
    }
    Ok(())
}

fn verify_symmetrizer(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let spec = AlgebraSpec::new(cfg.m, cfg.word_spec()?, true)?;
    let word = spec.word().clone();
    for rr in 1..=2 {
        for j in 1..=4 {
            for form in [TableauForm::FirstRowLong, TableauForm::SecondRowLong] {
                let Ok(t) = build_tableau(cfg.m, &word, rr, j, form) else { continue };
                if t.tableau.n() > 9 {
                    continue;
                }
                let v = witness::evaluate_symmetrizer(&t.tableau, &t.substitution, &spec)?;
                let expected = t.expected_value();
                r.row(vec![
                    "symmetrizer".into(),
                    format!("r={rr} j={j} {form} {}", t.tableau.shape()),
                    status(v == expected),
                    format!("value {v}; expected {expected}"),
                ]);
                if t.tableau.n() <= 5 {
                    let mut agree = true;
                    for tree in Tree::all(t.tableau.n()) {
                        let fast = witness::evaluate_symmetrizer_on(&t.tableau, &t.substitution, &spec, &tree)?;
                        let slow = witness::symmetrizer_double_sum(&t.tableau, &t.substitution, &spec, &tree)?;
                        agree &= fast == slow;
                    }
                    r.row(vec![
                        "symmetrizer".into(),
                        format!("r={rr} j={j} {form} double-sum"),
                        status(agree),
                        "optimized and full double sum over every bracketing".into(),
                    ]);
                }
            }
        }
    }
    Ok(())
}

pub fn witness_cmd(cfg: &RunConfig, count: usize, schedule: Schedule, r_start: usize) -> Result<Vec<Report>> {
    let word = cfg.word_spec()?;
    let rep = lemma12_sequence(cfg.m, &word, cfg.eps, count, schedule, r_start)?;
    let mut r = Report::new("witness", &["i", "n_i", "lambda", "phi_gap", "shape_ok", "form", "inserted_row", "note"]);
    for p in &rep.points {
        r.row(vec![
            p.i.to_string(),
            p.n.to_string(),
            p.lambda.to_string(),
            format!("{:.12}", p.phi_gap),
            p.shape_ok.to_string(),
            p.form.map_or("-".into(), |f| f.to_string()),
            p.inserted_row.to_string(),
            p.note.clone().unwrap_or_default(),
        ]);
    }
    r.notes.push(format!("target Phi0(beta)+1 = {:.12}, k = {}, q = {}", rep.target, rep.k, rep.q));
    r.notes.push(format!(
        "i0 = {}, max gap after i0 = {}",
        rep.i0.map_or("none".into(), |i| i.to_string()),
        rep.max_gap_after_i0.map_or("-".into(), |g| format!("{g:.6}"))
    ));
    r.notes.push(format!(
        "C1 = {:.6}, C2 = {:.6}, C = {:.6}, max step = {}; gaps below eps: {}; steps bounded: {}",
        rep.c1,
        rep.c2,
        rep.c,
        rep.max_step.map_or("-".into(), |s| s.to_string()),
        status(rep.gaps_below_eps()),
        status(rep.steps_bounded())
    ));
    r.notes.extend(rep.notes.iter().cloned());
    Ok(vec![r.with_data(&rep)?])
}

pub fn realize(cfg: &RunConfig, gamma: f64) -> Result<Vec<Report>> {
    let res = realize_exponent(gamma)?;
    let check = phi::exp_formula_slope(res.m, &res.alpha)?;
    let mut r = Report::new("realize", &["gamma", "m", "alpha", "word", "beta", "phi0_beta_plus_1", "residual"]);
    r.row(vec![
        format!("{gamma}"),
        res.m.to_string(),
        res.alpha.to_string(),
        res.word.to_string(),
        format!("{:.15}", res.beta),
        format!("{:.15}", real::to_f64(&check.unital)),
        format!("{:.3e}", res.residual),
    ]);
    let run = RunConfig {
        m: res.m,
        word: res.word.to_string(),
        unital: true,
        d: pilab_core::reptheory::default_height(true),
        ..cfg.clone()
    };
    fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join("realize.toml");
    fs::write(&path, run.to_toml())?;
    r.notes.push(format!("ready-to-run config written to {}", path.display()));
    let data = json!({ "gamma": gamma, "m": res.m, "alpha": res.alpha.to_string(), "word": res.word.to_string(), "beta": res.beta, "residual": res.residual });
    Ok(vec![r.with_data(&data)?])
}
