use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use lingrowth::bv1d::{evaluate_mf, BVFunction1D, BoundaryData, FunctionalBreakdown};
use lingrowth::experiments::{format_number, run_experiment, EXPERIMENTS};
use lingrowth::integrand::Anisotropy;
use lingrowth::measure::{
    ic_check, verify_calibration, CalibrationField, CellGrid, Domain, JordanPair, SignedMeasure, TestSetFamily,
};
use lingrowth::solver::{minimize, Status};
use serde_json::{json, Value};

use crate::config::{self, CalibrationConfig, EvaluateConfig, IcConfig, MinimizeConfig};
use crate::{Cli, CliError, Command};

type Res<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> Res<u8> {
    match &cli.command {
        Command::Evaluate { config } => evaluate(cli, config),
        Command::Minimize { config } => minimize_cmd(cli, config),
        Command::Experiment {
            name,
            params,
            params_file,
        } => {
            let params = match (params, params_file) {
                (Some(p), _) => config::parse::<Value>(p, "--params")?,
                (None, Some(f)) => config::read::<Value>(f)?,
                (None, None) => json!({}),
            };
            experiment(cli, name, &params)
        }
        Command::IcCheck { config } => ic_check_cmd(cli, config),
    }
}

/// Parses the config twice: typed (for errors with positions) and raw (for
/// the footer, with sorted keys).
fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Res<(T, Value)> {
    let typed = config::read(path)?;
    let raw = config::read(path)?;
    Ok((typed, raw))
}

fn footer(cli: &Cli, what: &str, params: &Value) -> Vec<String> {
    vec![
        format!("experiment: {what}"),
        format!("params: {params}"),
        format!("seed: {}", cli.seed),
        format!(
            "build: lingrowth {} ({})",
            env!("CARGO_PKG_VERSION"),
            env!("LINGROWTH_GIT_DESCRIBE")
        ),
    ]
}

fn csv(columns: &[&str], rows: &[Vec<f64>], footer: &[String]) -> String {
    let mut s = columns.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| format_number(*v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    for line in footer {
        let _ = writeln!(s, "# {line}");
    }
    s
}

fn write(out: &Path, name: &str, contents: &str) -> Res<()> {
    fs::create_dir_all(out).map_err(|e| CliError::Config(format!("cannot create {}: {e}", out.display())))?;
    let p = out.join(name);
    fs::write(&p, contents).map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display())))
}

fn write_json(out: &Path, name: &str, v: &Value) -> Res<()> {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    write(out, name, &s)
}

fn pair_or_zero(spec: &Option<lingrowth::measure::PairSpec>, domain: Domain) -> Res<JordanPair> {
    match spec {
        Some(p) => Ok(p.build()?),
        None => Ok(JordanPair::zero(domain)),
    }
}

fn breakdown_row(b: &FunctionalBreakdown) -> Vec<f64> {
    vec![b.bulk_ac, b.bulk_jump, b.boundary, b.measure_pairing, b.total]
}

fn evaluate(cli: &Cli, path: &Path) -> Res<u8> {
    let (cfg, raw): (EvaluateConfig, Value) = load(path)?;
    let f = cfg.integrand.build()?;
    let w = cfg.function.build()?;
    let (a, b) = w.domain();
    let pair = pair_or_zero(&cfg.measures, Domain::interval(a, b))?;
    let u0 = BoundaryData::new(cfg.u0[0], cfg.u0[1]);
    let br = evaluate_mf(&f, &u0, &pair, &w)?;
    println!("{:<16} {:>22}", "term", "value");
    for (k, v) in ["bulk (ac)", "bulk (jumps)", "boundary", "measure pairing", "total"]
        .iter()
        .zip(breakdown_row(&br))
    {
        println!("{k:<16} {:>22}", format_number(v + 0.0));
    }
    let mut out = json!({"integrand": f.name(), "breakdown": br, "value": br.total});
    if let Some(s) = &cfg.series {
        let mut rows = Vec::new();
        for k in 1..=s.k_max {
            let bump = BVFunction1D::indicator(a, b, &s.intervals, s.sign * k as f64)?;
            let v = evaluate_mf(&f, &u0, &pair, &w.add(&bump)?)?;
            let mut row = vec![k as f64];
            row.extend(breakdown_row(&v));
            rows.push(row);
        }
        let decreasing = rows.windows(2).all(|r| r[1][5] < r[0][5]);
        out["series_decreasing"] = json!(decreasing);
        let cols = ["k", "bulk_ac", "bulk_jump", "boundary", "measure_pairing", "total"];
        write(
            &cli.out,
            "series.csv",
            &csv(&cols, &rows, &footer(cli, "evaluate-series", &raw)),
        )?;
        println!(
            "series k = 1..{}: {}",
            s.k_max,
            if decreasing {
                "strictly decreasing"
            } else {
                "not monotone"
            }
        );
    }
    write_json(&cli.out, "evaluate.json", &out)?;
    Ok(0)
}

fn minimize_cmd(cli: &Cli, path: &Path) -> Res<u8> {
    let (cfg, raw): (MinimizeConfig, Value) = load(path)?;
    let f = cfg.integrand.build()?;
    let domain = match cfg.domain {
        Some([a, b]) if a < b => Some(Domain::interval(a, b)),
        Some(d) => return Err(CliError::Config(format!("empty domain {d:?}"))),
        None => None,
    };
    let pair = match (&cfg.measures, domain) {
        (Some(p), d) => {
            let pair = p.build()?;
            if d.is_some_and(|d| !pair.domain().same_as(&d)) {
                return Err(CliError::Config("`domain` differs from the measure domain".into()));
            }
            pair
        }
        (None, Some(d)) => JordanPair::zero(d),
        (None, None) => return Err(CliError::Config("either `domain` or `measures` is required".into())),
    };
    let u0 = BoundaryData::new(cfg.u0[0], cfg.u0[1]);
    let res = minimize(&f, &u0, &pair, &cfg.solver)?;
    let foot = footer(cli, "minimize", &raw);

    let trace: Vec<Vec<f64>> = res
        .trace
        .iter()
        .map(|t| vec![t.stage as f64, t.iter as f64, t.eps, t.smoothed, t.value])
        .collect();
    write(
        &cli.out,
        "trace.csv",
        &csv(&["stage", "iter", "eps", "smoothed", "value"], &trace, &foot),
    )?;

    // Both one-sided values at a jump, so plots show it as a vertical segment.
    let mut profile = Vec::new();
    for &x in res.w.nodes() {
        let (l, r) = (res.w.left_limit(x), res.w.right_limit(x));
        profile.push(vec![x, l]);
        if l != r {
            profile.push(vec![x, r]);
        }
    }
    write(&cli.out, "profile.csv", &csv(&["x", "w"], &profile, &foot))?;

    let mut out = serde_json::to_value(&res).expect("serialisable");
    out["function"] = serde_json::to_value(res.w.to_spec()).expect("serialisable");
    write_json(&cli.out, "minimize.json", &out)?;
    let status = match res.status {
        Status::Converged => "converged",
        Status::MaxIters => "max_iters",
        Status::UnboundedSuspected => "unbounded_suspected",
    };
    println!(
        "status {status}, value {}, {} iterations",
        format_number(res.value),
        res.iterations
    );
    if let Some(c) = &res.certificate {
        println!(
            "certificate: IC ratio {} on {:?}",
            format_number(c.worst_ratio),
            c.witness
        );
    }
    Ok(0)
}

fn experiment(cli: &Cli, name: &str, params: &Value) -> Res<u8> {
    if !EXPERIMENTS.contains(&name) {
        return Err(CliError::Unknown(format!(
            "unknown experiment `{name}`; expected one of {}",
            EXPERIMENTS.join(", ")
        )));
    }
    let t = run_experiment(name, params)?;
    write(&cli.out, &format!("{name}.csv"), &t.to_csv(&footer(cli, name, params)))?;
    write_json(
        &cli.out,
        &format!("{name}.json"),
        &json!({"experiment": name, "params": t.params, "summary": t.summary}),
    )?;
    println!("{}", t.columns.join("\t"));
    for r in &t.rows {
        println!("{}", r.iter().map(|v| format_number(*v)).collect::<Vec<_>>().join("\t"));
    }
    for (k, v) in &t.summary {
        println!("{k}: {v}");
    }
    Ok(0)
}

fn family(cli: &Cli, cfg: &IcConfig, phi: &Anisotropy, mu1: &SignedMeasure, mu2: &SignedMeasure) -> Res<TestSetFamily> {
    let dom = mu1.domain().clone();
    let fc = &cfg.family;
    if dom.dim() == 1 {
        if fc.h.is_some() || fc.rectangles.is_some() || fc.blobs.is_some() || fc.polar_balls.is_some() {
            return Err(CliError::Config("planar family options given for a 1D measure".into()));
        }
        let (a, b) = dom.bounds1();
        return Ok(TestSetFamily::intervals(a, b, fc.intervals.unwrap_or(200), &[mu1, mu2]));
    }
    if fc.intervals.is_some() {
        return Err(CliError::Config("`intervals` applies to 1D measures only".into()));
    }
    let diam = (dom.hi[0] - dom.lo[0]).max(dom.hi[1] - dom.lo[1]);
    let mut fam =
        TestSetFamily::planar(fc.h.unwrap_or(diam / 100.0)).with_rectangles(&dom, fc.rectangles.unwrap_or(12));
    if let Some(bl) = &fc.blobs {
        let grid = CellGrid::new([dom.lo[0], dom.lo[1]], [dom.hi[0], dom.hi[1]], bl.n);
        fam = fam.with_blobs(grid, bl.count, bl.max_cells, cli.seed);
    }
    if let Some(pb) = &fc.polar_balls {
        let ball = match &pb.anisotropy {
            Some(s) => s.build()?,
            None => phi.clone(),
        };
        fam = fam.with_polar_balls(&ball, &pb.centers, &pb.radii, pb.n_theta, &dom)?;
    }
    Ok(fam)
}

fn ic_check_cmd(cli: &Cli, path: &Path) -> Res<u8> {
    let (cfg, raw): (IcConfig, Value) = load(path)?;
    let mu1 = cfg.mu1.build()?;
    let mu2 = match &cfg.mu2 {
        Some(m) => m.build()?,
        None => SignedMeasure::zero(mu1.domain().clone()),
    };
    if !mu1.domain().same_as(mu2.domain()) {
        return Err(CliError::Config("mu1 and mu2 live on different domains".into()));
    }
    let phi = match &cfg.anisotropy {
        Some(s) => s.build()?,
        None => Anisotropy::euclidean(mu1.dim()),
    };
    if phi.dim() != mu1.dim() {
        return Err(CliError::Config(format!(
            "anisotropy has dimension {}, measures {}",
            phi.dim(),
            mu1.dim()
        )));
    }
    let fam = family(cli, &cfg, &phi, &mu1, &mu2)?;
    let c = cfg.constant.unwrap_or(f64::INFINITY);
    let report = ic_check(&mu1, &mu2, &phi, c, &fam);
    let estimate = report.worst_ratio.max(0.0);
    let mut out = json!({
        "params": raw,
        "constant_estimate": estimate,
        "report": report,
    });
    println!(
        "sup over {} test sets of the IC ratio: {}",
        report.tested_sets,
        format_number(estimate)
    );

    if let Some(cal) = &cfg.calibration {
        let (mu, field) = match cal {
            CalibrationConfig::OneD { measure, field } => {
                (measure.build()?, CalibrationField::OneD { field: field.build()? })
            }
            CalibrationConfig::TwoD { measure, grid, sx, sy } => (
                measure.build()?,
                CalibrationField::TwoD {
                    grid: *grid,
                    sx: sx.clone(),
                    sy: sy.clone(),
                },
            ),
        };
        let certified = verify_calibration(&field, &mu, &phi, 1e-9)?;
        println!("calibration certifies C = {}", format_number(certified));
        out["calibration_constant"] = json!(certified);
    }

    let failed = cfg.constant.is_some() && !report.passed;
    if let Some(c) = cfg.constant {
        match &report.witness {
            Some(w) if failed => println!("C = {} fails; witness {w:?}", format_number(c)),
            _ => println!("C = {} passes", format_number(c)),
        }
    }
    write_json(&cli.out, "ic.json", &out)?;
    Ok(if failed { 1 } else { 0 })
}
