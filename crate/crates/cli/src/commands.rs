use crate::{Cli, Command};
use mcen_core::boxes::{count_by_det, count_by_rank, BoxSpec, Filter};
use mcen_core::census::{census_products, count_pairs, count_solutions, scalar_table, write_count_map, Limits};
use mcen_core::fuzz::fuzz_construction;
use mcen_core::io::{field_mat_json, mat_json, parse_field_matrix, parse_int_matrix, trace_json};
use mcen_core::lab::{run_experiment, ExperimentConfig};
use mcen_core::rank::{
    bounded_rank_decompose, check_left_identity, fisher_rank_counts, left_identity_factor,
    verify_product_set_field, FieldMat,
};
use mcen_core::{par, Error, Field, PrimeField, Rationals, Result};
use serde_json::{json, Value};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

pub fn run(cli: &Cli) -> Result<()> {
    let limits = match cli.max_tuples {
        Some(max_tuples) => Limits { max_tuples },
        None => Limits::from_env()?,
    };
    if cli.workers == Some(0) {
        return Err(Error::OutOfRange("--workers must be at least 1".into()));
    }
    let output = match cli.workers {
        Some(w) => par::with_workers(w, || dispatch(cli, &limits)),
        None => dispatch(cli, &limits),
    }?;
    emit(cli.out.as_deref(), &output)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn json_text(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn spec(n: usize, h: u64, variant: &str) -> Result<BoxSpec> {
    BoxSpec::with_filter(n, h, variant.parse::<Filter>()?)
}

enum FieldChoice {
    Q,
    P(PrimeField),
}

fn field_choice(s: &str) -> Result<FieldChoice> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldChoice::Q);
    }
    let p = s
        .parse()
        .map_err(|_| Error::Parse(format!("--field must be q or a prime, got {s:?}")))?;
    Ok(FieldChoice::P(PrimeField::new(p)?))
}

fn read_to_string(p: &Path) -> Result<String> {
    Ok(fs::read_to_string(p)?)
}

fn dispatch(cli: &Cli, limits: &Limits) -> Result<String> {
    match &cli.command {
        Command::Census { n, h, m, variant, map } => {
            let spec = spec(*n, *h, variant)?;
            let start = Instant::now();
            let counts = census_products(&spec, *m, limits)?;
            let wall = if cli.no_timing { Duration::ZERO } else { start.elapsed() };
            if let Some(path) = map {
                let mut w = BufWriter::new(File::create(path)?);
                write_count_map(&counts, &mut w)?;
                w.flush()?;
            }
            Ok(json_text(&json!(counts.summary(wall))))
        }
        Command::Solve { n, h, m, variant, target } => {
            let spec = spec(*n, *h, variant)?;
            let c = parse_int_matrix(target)?;
            let count = count_solutions(&spec, *m, &c, limits)?;
            Ok(json_text(&json!({
                "n": n, "H": h, "m": m, "variant": spec.filter.to_string(),
                "target": mat_json(&c), "count": count,
            })))
        }
        Command::Pairs { n, h, m, variant } => {
            let spec = spec(*n, *h, variant)?;
            let pairs = count_pairs(&spec, *m, limits)?;
            Ok(json_text(&json!({
                "n": n, "H": h, "m": m, "variant": spec.filter.to_string(), "pairs": pairs,
            })))
        }
        Command::Detstats { n, h, variant } => Ok(count_by_det(&spec(*n, *h, variant)?)?.to_csv()),
        Command::Rankstats { n, h, variant } => Ok(count_by_rank(&spec(*n, *h, variant)?)?.to_csv()),
        Command::Scalartable { h, m } => Ok(json_text(&json!(scalar_table(*h, *m)?))),
        Command::Construct { field, input, fuzz, n } => match (fuzz, input) {
            (Some(cases), _) => {
                let n = n.ok_or_else(|| Error::Parse("--fuzz needs -n".into()))?;
                let report = match field_choice(field)? {
                    FieldChoice::Q => fuzz_construction(&Rationals, n, *cases, cli.seed)?,
                    FieldChoice::P(f) => fuzz_construction(&f, n, *cases, cli.seed)?,
                };
                if report.failures > 0 {
                    eprint!("{}", json_text(&json!(report)));
                    return Err(Error::Invariant(format!("{} fuzz failures", report.failures)));
                }
                Ok(json_text(&json!(report)))
            }
            (None, Some(path)) => {
                let text = read_to_string(path)?;
                match field_choice(field)? {
                    FieldChoice::Q => construct(&Rationals, &text),
                    FieldChoice::P(f) => construct(&f, &text),
                }
            }
            (None, None) => Err(Error::Parse("construct needs --in or --fuzz".into())),
        },
        Command::Decompose { field, input, k1, k2 } => {
            let text = read_to_string(input)?;
            match field_choice(field)? {
                FieldChoice::Q => decompose(&Rationals, &text, *k1, *k2),
                FieldChoice::P(f) => decompose(&f, &text, *k1, *k2),
            }
        }
        Command::Fieldcensus { q, n, k1, k2, k3, k4 } => {
            let ks: Vec<usize> = [Some(*k1), Some(*k2), *k3, *k4].into_iter().flatten().collect();
            let report = verify_product_set_field(*q, *n, &ks)?;
            let profile = fisher_rank_counts(*q, *n)?;
            let counts: Vec<Value> = profile
                .counts
                .iter()
                .map(|c| {
                    let s = c.to_string();
                    s.parse::<u64>().map_or(json!(s), |v| json!(v))
                })
                .collect();
            let mut v = json!(report);
            v["rank_counts"] = Value::Array(counts);
            let text = json_text(&v);
            if !report.pass {
                eprint!("{text}");
                return Err(Error::Invariant("product set differs from the rank-capped set".into()));
            }
            Ok(text)
        }
        Command::Fit { quantity, n, m, k, target, grid, plot_data } => {
            let mut cfg = ExperimentConfig::new(*quantity, *n, *m, grid.clone());
            cfg.k = *k;
            cfg.limits = *limits;
            cfg.target = target.as_deref().map(parse_int_matrix).transpose()?;
            let report = run_experiment(&cfg)?;
            for row in report.failures() {
                if let Err(e) = &row.count {
                    eprintln!("warning: H={}: {e}", row.h);
                }
            }
            if let Some(path) = plot_data {
                fs::write(path, report.to_dat())?;
            }
            Ok(report.to_csv())
        }
    }
}

fn construct<F: Field>(field: &F, text: &str) -> Result<String> {
    let a = parse_field_matrix(field, text)?;
    let (b, trace) = left_identity_factor(&a)?;
    check_left_identity(&a, &b, &trace)?;
    Ok(json_text(&json!({
        "field": field.label(),
        "a": field_mat_json(&a),
        "rank": a.rank(),
        "b": field_mat_json(&b),
        "trace": trace_json(&trace),
    })))
}

fn decompose<F: Field>(field: &F, text: &str, k1: usize, k2: usize) -> Result<String> {
    let c: FieldMat<F> = parse_field_matrix(field, text)?;
    let (x, y) = bounded_rank_decompose(&c, k1, k2)?;
    if x.mul(&y)? != c || x.rank() > k1 || y.rank() > k2 {
        return Err(Error::Invariant("decomposition does not reproduce C".into()));
    }
    Ok(json_text(&json!({
        "field": field.label(),
        "c": field_mat_json(&c),
        "rank": c.rank(),
        "k1": k1,
        "k2": k2,
        "x": field_mat_json(&x),
        "y": field_mat_json(&y),
    })))
}
