use std::io::Write;

use rayon::prelude::*;
use serde_json::{json, Value};

use regover::chern::estimate;
use regover::combinatorics::{self, verify_lemma, Constraint, Lemma, VerificationReport};
use regover::inequalities::{check_q_bounds, check_subadditivity, q_bound_threshold, scan_thresholds, Property};
use regover::numerics::Interval;
use regover::qseries::pk_cached_series;
use regover::Error;

use crate::output::Report;
use crate::{Cli, Command, Failure, Span, VerifyProperty};

type Outcome = Result<bool, Failure>;

const DIGITS: usize = 25;

fn k_values(span: Span) -> Result<Vec<u32>, Failure> {
    span.iter()
        .map(|k| {
            let k = u32::try_from(k).map_err(|_| Failure::Usage(format!("k = {k} is out of range")))?;
            if k < 2 {
                return Err(Error::InvalidK { k, min: 2 }.into());
            }
            Ok(k)
        })
        .collect()
}

fn interval(x: &Interval) -> Value {
    Value::String(x.to_decimal(DIGITS))
}

fn opt_interval(x: Option<&Interval>) -> Value {
    x.map_or(Value::Null, interval)
}

fn opt_bool(x: Option<bool>) -> Value {
    x.map_or(Value::Null, Value::Bool)
}

pub fn run(cli: &Cli) -> Outcome {
    let mut out = std::io::stdout().lock();
    match &cli.command {
        Command::Count { k, n, n_max } => count(cli, *k, *n, *n_max, &mut out),
        Command::Enumerate { k, n, no_ones, no_twos } => enumerate(cli, *k, *n, *no_ones, *no_twos, &mut out),
        Command::Verify { property, k, horizon } => verify(cli, *property, *k, *horizon, &mut out),
        Command::Asym { k, n, step, max_precision } => asym(cli, *k, *n, *step, *max_precision, &mut out),
        Command::Lemmas { id, k, a_max, b_max, sum_max } => lemmas(cli, id, *k, *a_max, *b_max, *sum_max, &mut out),
    }
}

fn count(cli: &Cli, k: Span, n: Option<u64>, n_max: Option<u64>, out: &mut impl Write) -> Outcome {
    let ks = k_values(k)?;
    let ns: Vec<u64> = match (n, n_max) {
        (Some(n), None) => vec![n],
        (None, Some(m)) => (0..=m).collect(),
        _ => return Err(Failure::Usage("give exactly one of --n or --n-max".into())),
    };
    let top = *ns.last().expect("nonempty") as usize;
    let mut report = Report::new(vec!["k", "n", "value"]);
    for &k in &ks {
        let s = pk_cached_series(k, top)?;
        for &n in &ns {
            report.push(vec![json!(k), json!(n), Value::String(s.coeffs()[n as usize].to_string())]);
        }
    }
    if cli.output == crate::Format::Table && report.rows.len() == 1 {
        writeln!(out, "{}", report.rows[0][2].as_str().expect("string cell"))?;
    } else {
        report.write(cli.output, out)?;
    }
    Ok(true)
}

fn enumerate(cli: &Cli, k: Option<u32>, n: u64, no_ones: bool, no_twos: bool, out: &mut impl Write) -> Outcome {
    let mut c = match k {
        Some(k) => Constraint::regular(k)?,
        None => Constraint::none(),
    };
    if no_ones {
        c = c.no_ones();
    }
    if no_twos {
        c = c.no_twos();
    }
    let mut report = Report::new(vec!["n", "overpartition"]);
    for o in combinatorics::enumerate(n, &c) {
        report.push(vec![json!(n), Value::String(o.to_string())]);
    }
    report.write(cli.output, out)?;
    Ok(true)
}

fn verify(cli: &Cli, property: VerifyProperty, k: Span, horizon: u64, out: &mut impl Write) -> Outcome {
    let ks = k_values(k)?;
    if property == VerifyProperty::Qbounds {
        return verify_qbounds(cli, &ks, horizon, out);
    }
    let property = match property {
        VerifyProperty::Subadd => Property::Subadd,
        VerifyProperty::Logconcave => Property::Logconcave,
        VerifyProperty::Turan3 => Property::Turan3,
        VerifyProperty::Qbounds => unreachable!(),
    };
    let mut report = Report::new(vec![
        "k",
        "property",
        "published_threshold",
        "observed_min_threshold",
        "horizon",
        "exceptions_below",
        "equalities",
        "violations",
    ]);
    let mut ok = true;
    for &k in &ks {
        let r = scan_thresholds(k, property, horizon)?;
        if !r.violations.is_empty() {
            ok = false;
            for &n in &r.violations {
                eprintln!("counterexample: {property} k={k} n={n}");
                if property == Property::Subadd {
                    for b in 1..=n / 2 {
                        if !check_subadditivity(k, n - b, b)? {
                            eprintln!("    a={} b={b}", n - b);
                        }
                    }
                }
            }
        }
        report.push(vec![
            json!(k),
            json!(property.name()),
            json!(r.published_threshold),
            json!(r.observed_min_threshold),
            json!(r.horizon),
            json!(r.exceptions_below),
            json!(r.equalities),
            json!(r.violations),
        ]);
    }
    report.write(cli.output, out)?;
    Ok(ok)
}

fn verify_qbounds(cli: &Cli, ks: &[u32], horizon: u64, out: &mut impl Write) -> Outcome {
    let mut report = Report::new(vec!["k", "property", "threshold", "horizon", "checked", "violations", "upper_not_below_one"]);
    let mut ok = true;
    for &k in ks {
        let t = q_bound_threshold(k)?;
        if horizon < t {
            return Err(Failure::Usage(format!(
                "horizon {horizon} is below the Q-ratio bound threshold {t} for k = {k}"
            )));
        }
        let checks = (t..=horizon)
            .into_par_iter()
            .map(|n| check_q_bounds(k, n, cli.precision))
            .collect::<Result<Vec<_>, Error>>()?;
        let violations: Vec<u64> = checks.iter().filter(|c| !c.contained).map(|c| c.n).collect();
        let not_below: Vec<u64> = checks.iter().filter(|c| !c.upper_below_one).map(|c| c.n).collect();
        for c in checks.iter().filter(|c| !c.contained) {
            eprintln!("counterexample: qbounds k={k} n={}: Q outside ({}, {})", c.n, c.lower, c.upper);
        }
        ok &= violations.is_empty() && not_below.is_empty();
        report.push(vec![
            json!(k),
            json!("qbounds"),
            json!(t),
            json!(horizon),
            json!(checks.len()),
            json!(violations),
            json!(not_below),
        ]);
    }
    report.write(cli.output, out)?;
    Ok(ok)
}

fn asym(cli: &Cli, k: Span, n: Span, step: u64, max_precision: u32, out: &mut impl Write) -> Outcome {
    if step == 0 {
        return Err(Failure::Usage("--step must be positive".into()));
    }
    let ks = k_values(k)?;
    let cells: Vec<(u32, u64)> = ks
        .iter()
        .flat_map(|&k| n.iter().step_by(step as usize).filter(|&n| n >= 1).map(move |n| (k, n)))
        .collect();
    let estimates = cells
        .par_iter()
        .map(|&(k, n)| estimate(k, n, cli.precision, max_precision.max(cli.precision)))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut report = Report::new(vec![
        "k",
        "n",
        "mu",
        "main",
        "remainder_bound",
        "relative_width",
        "lower",
        "upper",
        "exact",
        "inside_remainder",
        "inside_relative",
    ]);
    let mut ok = true;
    for e in &estimates {
        ok &= e.inside_remainder != Some(false) && e.inside_relative != Some(false);
        let width = e.remainder_bound.as_ref().map(|r| r.div(&e.main)).transpose()?;
        report.push(vec![
            json!(e.k),
            json!(e.n),
            interval(&e.mu),
            interval(&e.main),
            opt_interval(e.remainder_bound.as_ref()),
            opt_interval(width.as_ref()),
            opt_interval(e.lower.as_ref()),
            opt_interval(e.upper.as_ref()),
            Value::String(e.exact.to_string()),
            opt_bool(e.inside_remainder),
            opt_bool(e.inside_relative),
        ]);
    }
    report.write(cli.output, out)?;
    Ok(ok)
}

fn lemma_pairs(lemma: Lemma, k: u32, a_max: Option<u64>, b_max: Option<u64>, sum_max: u64) -> Vec<(u64, u64)> {
    match lemma {
        Lemma::AddOne | Lemma::AddTwo => {
            let b = if lemma == Lemma::AddOne { 1 } else { 2 };
            (1..=a_max.unwrap_or(20)).map(|a| (a, b)).collect()
        }
        _ => {
            let a_top = a_max.unwrap_or(sum_max);
            let b_top = b_max.unwrap_or(sum_max);
            let mut v = Vec::new();
            for a in 1..=a_top {
                for b in 1..=b_top {
                    if a + b > sum_max {
                        break;
                    }
                    let valid = match lemma {
                        Lemma::Subadditivity => a >= b && a + b >= u64::from(k),
                        Lemma::AddMany => b >= 3 && a + b > u64::from(k),
                        _ => true,
                    };
                    if valid {
                        v.push((a, b));
                    }
                }
            }
            v
        }
    }
}

fn lemmas(
    cli: &Cli,
    id: &str,
    k: Span,
    a_max: Option<u64>,
    b_max: Option<u64>,
    sum_max: u64,
    out: &mut impl Write,
) -> Outcome {
    let lemma: Lemma = id.parse()?;
    let ks = k_values(k)?;
    let cells: Vec<(u32, u64, u64)> = ks
        .iter()
        .flat_map(|&k| lemma_pairs(lemma, k, a_max, b_max, sum_max).into_iter().map(move |(a, b)| (k, a, b)))
        .collect();
    if cells.is_empty() {
        return Err(Failure::Usage(format!("no (a, b) in range for lemma {lemma}")));
    }
    let reports = cells
        .par_iter()
        .map(|&(k, a, b)| verify_lemma(lemma, k, a, b))
        .collect::<Result<Vec<VerificationReport>, Error>>()?;
    if lemma == Lemma::NoOnesNoTwos {
        let small: Vec<u32> = ks.iter().copied().filter(|&k| k < 5).collect();
        if !small.is_empty() {
            eprintln!("note: no explicit map for k in {small:?}; lemma 2.1 is checked by cardinality only");
        }
    }
    let mut report = Report::new(vec![
        "lemma",
        "k",
        "a",
        "b",
        "lhs",
        "rhs",
        "holds",
        "strict",
        "mode",
        "injective",
        "codomain_ok",
        "witness",
        "stated_witness",
        "domain_size",
        "unsupported",
        "notes",
    ]);
    let mut ok = true;
    for r in &reports {
        ok &= r.holds && r.injective != Some(false) && r.codomain_ok != Some(false);
        report.push(vec![
            json!(lemma.id()),
            json!(r.k),
            json!(r.a),
            json!(r.b),
            json!(r.lhs),
            json!(r.rhs),
            json!(r.holds),
            json!(r.strict),
            serde_json::to_value(r.mode).expect("mode serializes"),
            opt_bool(r.injective),
            opt_bool(r.codomain_ok),
            r.unattained_witness.clone().map_or(Value::Null, Value::String),
            json!(r.witness_of_stated_form),
            json!(r.domain_size),
            json!(r.unsupported),
            Value::String(r.notes.join("; ")),
        ]);
    }
    report.write(cli.output, out)?;
    Ok(ok)
}
