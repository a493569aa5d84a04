use std::collections::BTreeMap;

use anyhow::{anyhow, Context};
use mixmult::components::{component_g, component_mixed};
use mixmult::multiplicity::{
    fit_homogeneous, positivity_report, sample_grid, Backend, Check, Coefficient, HarnessOptions, LimitEstimate,
    MixedMultiplicityReport, ZERO_THRESHOLD,
};
use mixmult::okounkov::{beta_for, body_for, theorem1_check, THEOREM1_LADDER};
use mixmult::rational::{self, Rational};
use mixmult::ComponentModel;
use serde_json::{json, Value};

use crate::config::{validate, Command, Format, JobConfig, Suite, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    InputError = 1,
    VerificationFailed = 2,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub status: Status,
    pub result: Value,
    /// Header row first.
    pub table: Vec<Vec<String>>,
    /// Failing assertions, for the diagnostic on stderr.
    pub failures: Vec<String>,
}

impl Report {
    fn ok(result: Value, table: Vec<Vec<String>>) -> Self {
        Report {
            status: Status::Success,
            result,
            table,
            failures: Vec::new(),
        }
    }

    pub fn render(&self, cfg: &JobConfig, format: Format, timestamp: Option<String>) -> anyhow::Result<String> {
        match format {
            Format::Json => {
                let mut doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": cfg.command,
                    "status": self.status as i32,
                    "result": self.result,
                });
                if let Some(t) = timestamp {
                    doc["generated_at"] = Value::String(t);
                }
                // serde_json maps are ordered by key, so output is stable
                Ok(serde_json::to_string_pretty(&doc)? + "\n")
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.table {
                    w.write_record(row)?;
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
        }
    }
}

fn coefficient_cell(c: &Coefficient) -> (String, String) {
    match c {
        Coefficient::Exact { exact } => (rational::format(exact), "truncation-exact".into()),
        Coefficient::Approx { approx, method } => (format!("{approx}"), method.to_string()),
    }
}

fn factorial_product(ty: &[u32]) -> Rational {
    ty.iter()
        .map(|&k| (1..=k as i64).map(rational::int).fold(rational::int(1), |a, b| a * b))
        .fold(rational::int(1), |a, b| a * b)
}

fn type_key(ty: &[u32]) -> String {
    ty.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn unit(r: usize, j: usize) -> Vec<u32> {
    let mut n = vec![0; r];
    n[j] = 1;
    n
}

fn estimate_json(g: &LimitEstimate, scale: &Rational) -> Value {
    json!({
        "method": g.method,
        "value": if g.is_exact() { Value::String(rational::format(&(g.value() * scale))) } else { Value::Null },
        "approx": rational::to_f64(&(g.value() * scale)),
        "primary": rational::format(&(&g.primary * scale)),
        "refined": rational::format(&(&g.refined * scale)),
        "note": g.error_note,
    })
}

fn colength(cfg: &JobConfig, model: &ComponentModel) -> anyhow::Result<Report> {
    let levels = cfg.parameters.levels.clone().unwrap_or_default();
    let mut rows = Vec::new();
    let mut table = vec![vec!["component".into(), "filtration".into(), "n".into(), "colength".into()]];
    for (k, c) in model.components().iter().enumerate() {
        for (j, f) in c.filtrations.iter().enumerate() {
            for &n in &levels {
                let len = f.ideal_at(n)?.colength()?.to_string();
                table.push(vec![k.to_string(), j.to_string(), n.to_string(), len.clone()]);
                rows.push(json!({"component": k, "filtration": j, "n": n, "colength": len}));
            }
        }
    }
    Ok(Report::ok(json!({ "rows": rows }), table))
}

fn multiplicity(cfg: &JobConfig, model: &ComponentModel) -> anyhow::Result<Report> {
    let backend = cfg.parameters.backend();
    let r = model.r();
    let d_fact = factorial_product(&[model.dim() as u32]);
    let mut out = Vec::new();
    let mut table = vec![vec!["filtration".into(), "value".into(), "method".into()]];
    for j in 0..r {
        let g = component_g(model, &unit(r, j), &backend)?;
        let mut entry = estimate_json(&g, &d_fact);
        entry["filtration"] = json!(j);
        let shown = entry["value"].as_str().map(str::to_owned).unwrap_or_else(|| entry["approx"].to_string());
        table.push(vec![j.to_string(), shown, g.method.to_string()]);
        out.push(entry);
    }
    Ok(Report::ok(json!({ "backend": backend, "multiplicities": out }), table))
}

fn mixed_table(rep: &MixedMultiplicityReport) -> Vec<Vec<String>> {
    let mut table = vec![vec!["type".into(), "value".into(), "method".into()]];
    for (k, c) in &rep.coeffs {
        let (v, m) = coefficient_cell(c);
        table.push(vec![k.to_string(), v, m]);
    }
    table
}

fn mixed(cfg: &JobConfig, model: &ComponentModel) -> anyhow::Result<Report> {
    let rep = component_mixed(model, &cfg.parameters.backend())?;
    let table = mixed_table(&rep);
    Ok(Report::ok(serde_json::to_value(&rep)?, table))
}

fn okounkov(cfg: &JobConfig, model: &ComponentModel) -> anyhow::Result<Report> {
    let p = &cfg.parameters;
    let j = p.filtration.unwrap_or(0);
    let f = model.components()[0]
        .filtrations
        .get(j)
        .ok_or_else(|| anyhow!("filtration index {j} out of range"))?;
    let fs = std::slice::from_ref(f);
    let beta = beta_for(fs, &[1])?;
    let ladder = p.limit_ladder.clone().unwrap_or_else(|| THEOREM1_LADDER.to_vec());
    let mut bodies = Vec::new();
    let mut checks = Vec::new();
    let mut last = None;
    for n in p.cutoffs() {
        let b = body_for(fs, &[1], beta, n)?;
        bodies.push(json!({
            "cutoff": n,
            "volume": rational::format(&b.volume()),
            "vertices": b.body.vertices(),
        }));
        checks.push(serde_json::to_value(theorem1_check(f, n, &ladder)?)?);
        last = Some(b);
    }
    let last = last.ok_or_else(|| anyhow!("no cutoffs"))?;
    let table = if f.dim() == 2 {
        let polygon = last.polygon_csv()?;
        let mut t = csv::Reader::from_reader(polygon.as_bytes());
        let mut rows = vec![vec!["x".to_string(), "y".to_string()]];
        for rec in t.records() {
            rows.push(rec?.iter().map(str::to_owned).collect());
        }
        rows
    } else {
        let mut rows = vec![(1..=f.dim()).map(|i| format!("x{i}")).collect()];
        rows.extend(last.body.vertices().iter().map(|v| v.0.iter().map(rational::format).collect()));
        rows
    };
    Ok(Report::ok(
        json!({ "filtration": j, "beta": beta, "inner_approximation": true, "bodies": bodies, "theorem1": checks }),
        table,
    ))
}

fn parse_expected(v: &str) -> anyhow::Result<Coefficient> {
    if let Ok(r) = rational::parse(v) {
        return Ok(Coefficient::Exact { exact: r });
    }
    let approx: f64 = v.parse().with_context(|| format!("expected value {v:?}"))?;
    Ok(Coefficient::Approx {
        approx,
        method: mixmult::multiplicity::Method::DirectSequence,
    })
}

fn verify(cfg: &JobConfig, model: &ComponentModel) -> anyhow::Result<Report> {
    let p = &cfg.parameters;
    let backend = p.backend();
    let tol = p.tolerance();
    let mut checks: Vec<Check> = Vec::new();
    let mut mixed_rep: Option<MixedMultiplicityReport> = None;
    for suite in &p.suites {
        match suite {
            Suite::Positivity => {
                if model.components().len() == 1 {
                    let opts = HarnessOptions {
                        single_component: true,
                        zero_threshold: p.zero_threshold.unwrap_or(ZERO_THRESHOLD),
                        tolerance: tol,
                        reduced_backend: p.reduced_backend.clone(),
                    };
                    let rep = positivity_report(&model.components()[0].filtrations, &backend, &opts)?;
                    checks.extend(rep.checks.clone());
                    mixed_rep = Some(rep.mixed);
                } else {
                    // several components: only nonnegativity is claimed
                    let rep = component_mixed(model, &backend)?;
                    let threshold = p.zero_threshold.unwrap_or(ZERO_THRESHOLD);
                    let bad: Vec<String> = rep
                        .coeffs
                        .iter()
                        .filter(|(_, c)| match c.exact() {
                            Some(x) => num_traits::Signed::is_negative(x),
                            None => c.to_f64() < -threshold,
                        })
                        .map(|(k, c)| format!("e({k}) = {}", c.to_f64()))
                        .collect();
                    checks.push(Check {
                        name: "nonnegative".into(),
                        passed: bad.is_empty(),
                        detail: if bad.is_empty() { "ok".into() } else { bad.join("; ") },
                    });
                    mixed_rep = Some(rep);
                }
            }
            Suite::Theorem1 => {
                let ladder = p.limit_ladder.clone().unwrap_or_else(|| THEOREM1_LADDER.to_vec());
                for (k, c) in model.components().iter().enumerate() {
                    for (j, f) in c.filtrations.iter().enumerate() {
                        let cutoffs = p.cutoffs();
                        let reps = cutoffs
                            .iter()
                            .map(|&n| theorem1_check(f, n, &ladder))
                            .collect::<mixmult::Result<Vec<_>>>()?;
                        let last = reps.last().expect("validated cutoffs");
                        let bound = tol.max(4.0 / *cutoffs.last().unwrap() as f64);
                        let within = rational::to_f64(&last.discrepancy) <= bound;
                        let shrinking = reps.windows(2).all(|w| w[1].discrepancy <= w[0].discrepancy);
                        checks.push(Check {
                            name: format!("theorem1[component {k}, filtration {j}]"),
                            passed: within && shrinking,
                            detail: format!(
                                "difference {} vs limit {:.6}, discrepancy {:.3e} (bound {bound:.3e}){}",
                                rational::format(&last.difference),
                                last.limit.value_f64(),
                                rational::to_f64(&last.discrepancy),
                                if shrinking { "" } else { ", grows with the cutoff" }
                            ),
                        });
                    }
                }
            }
        }
    }
    if !p.expected.is_empty() {
        let rep = match mixed_rep.take() {
            Some(r) => r,
            None => component_mixed(model, &backend)?,
        };
        for (key, want) in &p.expected {
            let ty: Vec<u32> = key.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
            let want = parse_expected(want)?;
            let got = rep.get(&ty).ok_or_else(|| anyhow!("no coefficient of type {key}"))?;
            let passed = match (got.exact(), want.exact()) {
                (Some(a), Some(b)) => a == b,
                _ => (got.to_f64() - want.to_f64()).abs() <= tol * want.to_f64().abs().max(1.0),
            };
            checks.push(Check {
                name: format!("expected e({})", type_key(&ty)),
                passed,
                detail: format!("computed {}, expected {}", coefficient_cell(got).0, coefficient_cell(&want).0),
            });
        }
    }
    let failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    let mut table = vec![vec!["check".into(), "passed".into(), "detail".into()]];
    table.extend(checks.iter().map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]));
    Ok(Report {
        status: if failures.is_empty() {
            Status::Success
        } else {
            Status::VerificationFailed
        },
        result: json!({ "passed": failures.is_empty(), "checks": checks }),
        table,
        failures,
    })
}

fn example1(cfg: &JobConfig, model: &ComponentModel) -> anyhow::Result<Report> {
    let backend = cfg
        .parameters
        .backend
        .clone()
        .unwrap_or(Backend::Direct { ladder: vec![32, 64, 128] });
    let samples: Vec<(Vec<u32>, LimitEstimate)> = sample_grid(2, 2)
        .into_iter()
        .map(|n| Ok((n.clone(), component_g(model, &n, &backend)?)))
        .collect::<anyhow::Result<_>>()?;
    let exact_pts: Vec<(Vec<u32>, Rational)> = samples.iter().map(|(n, g)| (n.clone(), g.value().clone())).collect();
    let fitted = fit_homogeneous(2, 2, &exact_pts)?;
    let mut coeffs = BTreeMap::new();
    let mut table = vec![vec!["quantity".into(), "value".into()]];
    for (ty, c) in &fitted {
        let v = rational::format(&(c * factorial_product(ty)));
        table.push(vec![format!("e({})", type_key(ty)), v.clone()]);
        coeffs.insert(type_key(ty), v);
    }
    let one = Rational::from_integer(1.into());
    let g11 = component_g(model, &[1, 1], &backend)?;
    table.push(vec!["G(1,1)".into(), rational::format(g11.value())]);
    let mut branches = Vec::new();
    for (k, c) in model.components().iter().enumerate() {
        let single = ComponentModel::single(c.filtrations.clone())?;
        let mut row = BTreeMap::new();
        for (name, n) in [("I", [1, 0]), ("J", [0, 1]), ("IJ", [1, 1])] {
            let g = component_g(&single, &n, &backend)?;
            table.push(vec![format!("branch {} {name}", k + 1), rational::format(g.value())]);
            row.insert(name, estimate_json(&g, &one));
        }
        branches.push(row);
    }
    Ok(Report::ok(
        json!({
            "backend": backend,
            "coefficients": coeffs,
            "coefficient_note": "homogeneous fit of the G samples; with the direct backend these are the refined \
                                 (c0 + c1/m) limits, exact whenever the lengths are quadratic in m",
            "g_1_1": estimate_json(&g11, &one),
            "branch_limits": branches,
            "samples": samples.iter().map(|(n, g)| json!({"n": n, "g": estimate_json(g, &one)})).collect::<Vec<_>>(),
        }),
        table,
    ))
}

/// Validates and runs a job. Input problems come back as `Err`.
pub fn run(cfg: &JobConfig) -> anyhow::Result<Report> {
    let diags = validate(cfg);
    if !diags.is_empty() {
        return Err(anyhow!("invalid config:\n  {}", diags.join("\n  ")));
    }
    let model = cfg.model()?;
    match cfg.command {
        Command::Colength => colength(cfg, &model),
        Command::Multiplicity => multiplicity(cfg, &model),
        Command::Mixed => mixed(cfg, &model),
        Command::Okounkov => okounkov(cfg, &model),
        Command::Verify => verify(cfg, &model),
        Command::Example1 => example1(cfg, &model),
    }
}
