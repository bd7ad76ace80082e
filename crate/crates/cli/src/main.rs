//! Batch command-line surface over the library: every invocation runs one
//! job and prints a single JSON document on stdout that embeds the full
//! input and configuration, so any output can be replayed as an input.
//!
//! Exit codes: 0 success, 2 unsupported computation, 3 precision exhausted,
//! 4 validation error.

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use springer_fibers::exactnum::{
    matrix_from_json, matrix_to_json, series_from_json, series_to_json, FieldId, LaurentSeries,
    Scalar,
};
use springer_fibers::oracle::{enumerate_fiber, fit_dimension, report_to_csv, FitResult};
use springer_fibers::repn::{GroupElement, TorusElement};
use springer_fibers::rootdata::Coweight;
use springer_fibers::springer::{
    base_change_delta, base_disc_val, catalog::catalog_gamma, defect, delta, dim_springer,
    newton_point, nonempty, topological_jordan, FiberDim, SpringerInput,
};
use springer_fibers::vinberg::{
    centralizer_dim, chi_plus, discriminant_plus, equivariance_check, is_regular, nilcone_report,
    steinberg_section, verify_section, CharPoint, TorusPoint, VinbergPoint,
};
use springer_fibers::{Error, Result};
use std::io::Read;

#[derive(Parser, Debug)]
#[command(name = "spf", about = "exact affine Springer fiber invariants on the Vinberg monoid")]
struct Args {
    /// one of: chi, section, verify-section, regular, discriminant,
    /// equivariance, jordan, newton, delta, defect, dim, nonempty,
    /// enumerate, nilcone-report
    command: String,
    /// coefficient field: rational | fq:<p>[:<e>]
    #[arg(long, default_value = "rational")]
    field: String,
    /// working precision horizon
    #[arg(long, default_value_t = 32)]
    horizon: i64,
    /// seed for sampled jobs
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// enumeration depth bound on |nu|
    #[arg(long, default_value_t = 4)]
    depth: i64,
    /// comma-separated primes for the enumeration grid
    #[arg(long = "q-grid", default_value = "3,5,7,11")]
    q_grid: String,
    /// output format: json | csv (csv only for enumerate)
    #[arg(long, default_value = "json")]
    out: String,
    /// input document path (JSON); "-" or absent reads stdin when needed
    #[arg(long = "in")]
    input: Option<String>,
    /// named catalog element (avoids an input document)
    #[arg(long)]
    catalog: Option<String>,
    /// dominant coweight, comma-separated integers
    #[arg(long)]
    lambda: Option<String>,
    /// rank parameter for commands that need only n
    #[arg(long)]
    n: Option<usize>,
    /// number of random samples for verify-section / equivariance
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

fn parse_field(s: &str) -> Result<FieldId> {
    if s == "rational" {
        return Ok(FieldId::Rational);
    }
    if let Some(rest) = s.strip_prefix("fq:") {
        let mut it = rest.split(':');
        let p: u64 = it
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Validation("bad field spec".into()))?;
        let e: u32 = match it.next() {
            None => 1,
            Some(v) => v.parse().map_err(|_| Error::Validation("bad field spec".into()))?,
        };
        return FieldId::fq(p, e);
    }
    Err(Error::Validation(format!("unknown field '{s}'")))
}

fn read_input(args: &Args) -> Result<Option<Value>> {
    let raw = match &args.input {
        Some(path) if path != "-" => {
            Some(std::fs::read_to_string(path).map_err(|e| Error::Validation(e.to_string()))?)
        }
        Some(_) => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Validation(e.to_string()))?;
            Some(buf)
        }
        None => None,
    };
    match raw {
        None => Ok(None),
        Some(text) => {
            let mut v: Value =
                serde_json::from_str(&text).map_err(|e| Error::Validation(e.to_string()))?;
            // replay support: outputs embed their input
            if let Some(inner) = v.get("input") {
                v = inner.clone();
            }
            Ok(Some(v))
        }
    }
}

fn parse_lambda(args: &Args, doc: Option<&Value>) -> Result<Coweight> {
    if let Some(s) = &args.lambda {
        let ints: Vec<i64> = s
            .split(',')
            .map(|v| v.trim().parse().map_err(|_| Error::Validation("bad lambda".into())))
            .collect::<Result<Vec<_>>>()?;
        return Coweight::from_ints(&ints);
    }
    if let Some(doc) = doc {
        if let Some(arr) = doc.get("lambda").and_then(Value::as_array) {
            let ints: Vec<i64> = arr
                .iter()
                .map(|v| v.as_i64().ok_or_else(|| Error::Validation("bad lambda".into())))
                .collect::<Result<Vec<_>>>()?;
            return Coweight::from_ints(&ints);
        }
    }
    Err(Error::Validation("missing lambda (use --lambda or the input document)".into()))
}

fn gamma_from(args: &Args, doc: Option<&Value>, field: FieldId) -> Result<(GroupElement, Value)> {
    if let Some(name) = &args.catalog {
        let g = catalog_gamma(name, field, args.horizon)?;
        return Ok((g, json!({"catalog": name})));
    }
    let doc = doc.ok_or_else(|| {
        Error::Validation("missing input document (use --in, stdin, or --catalog)".into())
    })?;
    if let Some(name) = doc.get("catalog").and_then(Value::as_str) {
        let g = catalog_gamma(name, field, args.horizon)?;
        return Ok((g, json!({"catalog": name})));
    }
    let gm = doc
        .get("gamma")
        .ok_or_else(|| Error::Validation("input document needs a 'gamma' matrix".into()))?;
    let mat = matrix_from_json(field, gm)?;
    let g = GroupElement::new(mat)?;
    Ok((g, json!({"gamma": gm.clone()})))
}

fn vinberg_from_json(field: FieldId, v: &Value) -> Result<VinbergPoint> {
    let bad = |m: &str| Error::Validation(format!("bad monoid point: {m}"));
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))? as usize;
    let b = v
        .get("b")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing b"))?
        .iter()
        .map(|s| series_from_json(field, s))
        .collect::<Result<Vec<_>>>()?;
    let m = v
        .get("M")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing M"))?
        .iter()
        .map(|s| matrix_from_json(field, s))
        .collect::<Result<Vec<_>>>()?;
    if b.len() != n - 1 || m.len() != n - 1 {
        return Err(bad("rank mismatch"));
    }
    Ok(VinbergPoint { n, b, m })
}

fn vinberg_to_json(v: &VinbergPoint) -> Value {
    json!({
        "n": v.n,
        "b": v.b.iter().map(series_to_json).collect::<Vec<_>>(),
        "M": v.m.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

fn charpoint_from_json(field: FieldId, v: &Value) -> Result<CharPoint> {
    let bad = |m: &str| Error::Validation(format!("bad characteristic point: {m}"));
    let b = v
        .get("b")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing b"))?
        .iter()
        .map(|s| series_from_json(field, s))
        .collect::<Result<Vec<_>>>()?;
    let a = v
        .get("a")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing a"))?
        .iter()
        .map(|s| series_from_json(field, s))
        .collect::<Result<Vec<_>>>()?;
    CharPoint::new(b, a)
}

fn charpoint_to_json(c: &CharPoint) -> Value {
    json!({
        "b": c.b.iter().map(series_to_json).collect::<Vec<_>>(),
        "a": c.a.iter().map(series_to_json).collect::<Vec<_>>(),
    })
}

fn coweight_to_json(w: &Coweight) -> Value {
    Value::Array(
        w.coords()
            .iter()
            .map(|c| {
                if c.is_integer() {
                    json!(i64::try_from(c.to_integer()).unwrap_or(0))
                } else {
                    json!(c.to_string())
                }
            })
            .collect(),
    )
}

fn random_cpoint(field: FieldId, r: usize, rng: &mut ChaCha8Rng) -> CharPoint {
    CharPoint {
        b: (0..r).map(|_| LaurentSeries::monomial(field, 0, Scalar::random(field, rng))).collect(),
        a: (0..r).map(|_| LaurentSeries::monomial(field, 0, Scalar::random(field, rng))).collect(),
    }
}

fn springer_record(args: &Args, g: &GroupElement, lambda: &Coweight) -> Result<Value> {
    let input = SpringerInput::new(g.clone(), lambda.clone())?;
    let d = delta(g)?;
    let def = springer_fibers::with_horizon_escalation_from(args.horizon, |h| defect(g, h))?;
    let nu = newton_point(g)?;
    let ne = nonempty(&input)?;
    let dim = springer_fibers::with_horizon_escalation_from(args.horizon, |h| {
        dim_springer(&input, h)
    })?;
    Ok(json!({
        "delta": d,
        "defect": def,
        "newton": coweight_to_json(&nu),
        "nonempty": ne,
        "dim": match dim { FiberDim::Empty => json!("empty"), FiberDim::Dim(v) => json!(v) },
    }))
}

fn run(args: &Args) -> Result<(Value, Option<String>)> {
    let field = parse_field(&args.field)?;
    let doc = read_input(args)?;
    let config = json!({
        "field": args.field,
        "horizon": args.horizon,
        "seed": args.seed,
        "depth": args.depth,
        "q_grid": args.q_grid,
    });
    let (input_echo, result, csv): (Value, Value, Option<String>) = match args.command.as_str() {
        "chi" => {
            let doc = doc.ok_or_else(|| Error::Validation("chi needs an input document".into()))?;
            let v = vinberg_from_json(field, &doc)?;
            (doc, charpoint_to_json(&chi_plus(&v)), None)
        }
        "section" => {
            let doc =
                doc.ok_or_else(|| Error::Validation("section needs an input document".into()))?;
            let n = doc
                .get("n")
                .and_then(Value::as_u64)
                .or(args.n.map(|v| v as u64))
                .ok_or_else(|| Error::Validation("missing n".into()))? as usize;
            let c = charpoint_from_json(field, doc.get("c").unwrap_or(&doc))?;
            let v = steinberg_section(n, &c)?;
            (doc, vinberg_to_json(&v), None)
        }
        "verify-section" => {
            let n = args.n.unwrap_or(3);
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut ok = true;
            for _ in 0..args.samples {
                let c = random_cpoint(field, n - 1, &mut rng);
                if !verify_section(n, &c)? {
                    ok = false;
                    break;
                }
            }
            // always include the boundary point
            ok = ok && verify_section(n, &CharPoint::zero(field, n - 1))?;
            (json!({"n": n, "samples": args.samples}), json!({"ok": ok, "samples": args.samples}), None)
        }
        "equivariance" => {
            let n = args.n.unwrap_or(2);
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut ok = true;
            for _ in 0..args.samples.min(50) {
                let c = random_cpoint(field, n - 1, &mut rng);
                // z with random unit entries and a pi-power in the first slot
                let mut diag = Vec::with_capacity(n);
                let mut prod = LaurentSeries::one(field);
                for _ in 0..n - 1 {
                    let u = LaurentSeries::monomial(field, 0, Scalar::random_unit(field, &mut rng));
                    prod = prod.mul(&u);
                    diag.push(u);
                }
                diag[0] = diag[0].shift(1);
                prod = prod.shift(1);
                diag.push(prod.inv(args.horizon)?);
                let z = TorusElement::new(diag)?;
                if !equivariance_check(n, &z, &c, args.horizon)? {
                    ok = false;
                    break;
                }
            }
            (json!({"n": n, "samples": args.samples}), json!({"ok": ok}), None)
        }
        "regular" => {
            let doc =
                doc.ok_or_else(|| Error::Validation("regular needs an input document".into()))?;
            let v = vinberg_from_json(field, &doc)?;
            let d = centralizer_dim(&v, args.horizon)?;
            (
                doc,
                json!({"centralizer_dim": d, "regular": is_regular(&v, args.horizon)?}),
                None,
            )
        }
        "discriminant" => {
            let doc = doc
                .ok_or_else(|| Error::Validation("discriminant needs an input document".into()))?;
            let n = doc
                .get("n")
                .and_then(Value::as_u64)
                .or(args.n.map(|v| v as u64))
                .ok_or_else(|| Error::Validation("missing n".into()))? as usize;
            let point = if let Some(b) = doc.get("b").and_then(Value::as_array) {
                TorusPoint::AntidiagonalB(
                    b.iter().map(|s| series_from_json(field, s)).collect::<Result<Vec<_>>>()?,
                )
            } else {
                let z = doc
                    .get("z")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Validation("need 'b' or ('z','t')".into()))?
                    .iter()
                    .map(|s| series_from_json(field, s))
                    .collect::<Result<Vec<_>>>()?;
                let t = doc
                    .get("t")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Validation("need 'b' or ('z','t')".into()))?
                    .iter()
                    .map(|s| series_from_json(field, s))
                    .collect::<Result<Vec<_>>>()?;
                TorusPoint::Pair { z: TorusElement::new(z)?, t: TorusElement::new(t)? }
            };
            let d = discriminant_plus(n, &point, args.horizon)?;
            (doc, json!({"discriminant": series_to_json(&d)}), None)
        }
        "jordan" => {
            let (g, echo) = gamma_from(args, doc.as_ref(), field)?;
            let jp = topological_jordan(&g, args.horizon)?;
            (
                echo,
                json!({"s": matrix_to_json(jp.s.mat()), "u": matrix_to_json(jp.u.mat())}),
                None,
            )
        }
        "newton" => {
            let (g, echo) = gamma_from(args, doc.as_ref(), field)?;
            (echo, json!({"newton": coweight_to_json(&newton_point(&g)?)}), None)
        }
        "delta" => {
            let (g, echo) = gamma_from(args, doc.as_ref(), field)?;
            (echo, json!({"delta": delta(&g)?}), None)
        }
        "defect" => {
            let (g, echo) = gamma_from(args, doc.as_ref(), field)?;
            (echo, json!({"defect": defect(&g, args.horizon)?}), None)
        }
        "base-change-delta" => {
            let (g, echo) = gamma_from(args, doc.as_ref(), field)?;
            let e = doc
                .as_ref()
                .and_then(|d| d.get("e"))
                .and_then(Value::as_i64)
                .unwrap_or(2);
            let d = doc
                .as_ref()
                .and_then(|d| d.get("residue_degree"))
                .and_then(Value::as_u64)
                .unwrap_or(1) as u32;
            (echo, json!({"e": e, "residue_degree": d, "delta": base_change_delta(&g, e, d)?}), None)
        }
        "base-disc" => {
            let doc =
                doc.ok_or_else(|| Error::Validation("base-disc needs an input document".into()))?;
            let lambda = parse_lambda(args, Some(&doc))?;
            let a = charpoint_from_json(field, doc.get("a").unwrap_or(&doc))?;
            (doc.clone(), json!({"base_disc_val": base_disc_val(&a, &lambda)?}), None)
        }
        "dim" | "nonempty" => {
            // a JSON array is a catalog file: a list of named inputs
            // {"name", "n", "gamma", "lambda"}, one result record each
            if let Some(Value::Array(items)) = &doc {
                let mut records = Vec::new();
                for item in items {
                    let name = item
                        .get("name")
                        .and_then(Value::as_str)
                        .unwrap_or("unnamed")
                        .to_string();
                    let lambda = parse_lambda(args, Some(item))?;
                    let (g, _) = gamma_from(args, Some(item), field)?;
                    let mut rec = springer_record(args, &g, &lambda)?;
                    rec["name"] = json!(name);
                    rec["lambda"] = coweight_to_json(&lambda);
                    records.push(rec);
                }
                (doc.clone().unwrap(), Value::Array(records), None)
            } else {
                let lambda = parse_lambda(args, doc.as_ref())?;
                let (g, mut echo) = gamma_from(args, doc.as_ref(), field)?;
                echo["lambda"] = coweight_to_json(&lambda);
                (echo, springer_record(args, &g, &lambda)?, None)
            }
        }
        "enumerate" => {
            let lambda = parse_lambda(args, doc.as_ref())?;
            let qs: Vec<u64> = args
                .q_grid
                .split(',')
                .map(|v| v.trim().parse().map_err(|_| Error::Validation("bad q-grid".into())))
                .collect::<Result<Vec<_>>>()?;
            let mut reports = Vec::new();
            let mut counts = Vec::new();
            let mut echo = json!({});
            for &q in &qs {
                let fq = FieldId::fq(q, 1)?;
                let sub_args = Args { field: format!("fq:{q}"), ..clone_args(args) };
                let (g, e) = gamma_from(&sub_args, doc.as_ref(), fq)?;
                echo = e;
                let input = SpringerInput::new(g, lambda.clone())?;
                let rep = enumerate_fiber(&input, args.depth)?;
                counts.push((q, rep.total));
                reports.push(rep);
            }
            echo["lambda"] = coweight_to_json(&lambda);
            let max_deg = qs.len().saturating_sub(1);
            let fit = match fit_dimension(&counts, max_deg) {
                FitResult::Degree(d) => json!(d),
                FitResult::Undetermined => json!("undetermined"),
            };
            let csv = if args.out == "csv" { Some(report_to_csv(&reports)) } else { None };
            (
                echo,
                json!({
                    "reports": serde_json::to_value(&reports).unwrap(),
                    "counts": counts.iter().map(|(q, c)| json!([q, c])).collect::<Vec<_>>(),
                    "fitted_dim": fit,
                }),
                csv,
            )
        }
        "nilcone-report" => {
            let n = args
                .n
                .or_else(|| doc.as_ref().and_then(|d| d.get("n")).and_then(Value::as_u64).map(|v| v as usize))
                .ok_or_else(|| Error::Validation("missing n".into()))?;
            let rep = nilcone_report(n)?;
            (
                json!({"n": n}),
                json!({"dim_nilcone": rep.dim_nilcone, "components": rep.components}),
                None,
            )
        }
        other => return Err(Error::Validation(format!("unknown command '{other}'"))),
    };
    let doc = json!({
        "command": args.command,
        "config": config,
        "input": input_echo,
        "result": result,
    });
    Ok((doc, csv))
}

fn clone_args(a: &Args) -> Args {
    Args {
        command: a.command.clone(),
        field: a.field.clone(),
        horizon: a.horizon,
        seed: a.seed,
        depth: a.depth,
        q_grid: a.q_grid.clone(),
        out: a.out.clone(),
        input: a.input.clone(),
        catalog: a.catalog.clone(),
        lambda: a.lambda.clone(),
        n: a.n,
        samples: a.samples,
    }
}

fn main() {
    let args = Args::parse();
    match run(&args) {
        Ok((doc, csv)) => {
            if let Some(csv) = csv {
                print!("{csv}");
            } else {
                println!("{}", serde_json::to_string_pretty(&doc).expect("serialize"));
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Unsupported(_) => 2,
                Error::PrecisionExhausted { .. } => 3,
                _ => 4,
            };
            std::process::exit(code);
        }
    }
}
