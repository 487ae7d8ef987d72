//! Command line for the principal-configuration library: classify axes,
//! export singular loci and traced leaves, compute linking numbers, and run
//! the acceptance checklist.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 internal numerical failure. Identical arguments (including --seed)
//! produce byte-identical output files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nalgebra::Vector4;
use serde::Serialize;

use ellipsoid4::curvature::{classify_point, principal_curvatures};
use ellipsoid4::loci::{self, ClosedCurve, LocusGeometry};
use ellipsoid4::surface::{Ellipsoid4, SurfacePoint, EPS_DEG};
use ellipsoid4::topology;
use ellipsoid4::tracer::{self, TraceConfig};
use ellipsoid4::verify;
use ellipsoid4::Error as GeomError;

#[derive(Parser)]
#[command(name = "ellipsoid4")]
#[command(about = "Principal configurations of tridimensional ellipsoids in R^4")]
#[command(version)]
struct Cli {
    /// Semi-axes a1 a2 a3 a4 (coefficients of x1..x4)
    #[arg(long, global = true, num_args = 4, value_names = ["A1", "A2", "A3", "A4"])]
    axes: Option<Vec<f64>>,

    /// Relative curvature-coincidence tolerance
    #[arg(long, global = true, default_value_t = EPS_DEG)]
    eps_deg: f64,

    /// Trace step (arclength); defaults to 0.002 × diameter
    #[arg(long, global = true)]
    step: Option<f64>,

    /// Trace arclength budget; defaults to 100 × diameter
    #[arg(long, global = true)]
    max_arclen: Option<f64>,

    /// Output format for reports
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    format: String,

    /// Output path (directory for `loci`, file for `trace`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for deterministic sampling
    #[arg(long, global = true, default_value_t = 0xE11A)]
    seed: u64,

    /// Grid resolution for grid-based subcommands
    #[arg(long, global = true, default_value_t = 41)]
    grid: usize,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Report the axis-degeneracy class of a surface
    Classify {
        /// Semi-axes (alternative to --axes)
        #[arg(num_args = 0..=4)]
        positional_axes: Vec<f64>,
    },
    /// Write umbilic points and sampled partially umbilic curves
    Loci {
        /// Sampling resolution along curves; defaults to π·diameter / grid
        #[arg(long)]
        resolution: Option<f64>,
    },
    /// Integrate one principal line field from a seed point
    Trace {
        /// Ambient seed coordinates
        #[arg(long, num_args = 4, value_names = ["X1", "X2", "X3", "X4"], allow_hyphen_values = true)]
        seed_point: Vec<f64>,
        /// Sorted-curvature field index (0, 1 or 2)
        #[arg(long)]
        field: usize,
    },
    /// Linking number of two exported curves
    Link {
        #[arg(long)]
        curve_a: PathBuf,
        #[arg(long)]
        curve_b: PathBuf,
    },
    /// Run the acceptance checklist
    Verify,
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    surface: Option<SurfaceInfo>,
    command: String,
    params: serde_json::Value,
    results: T,
    residuals: serde_json::Value,
    pass: bool,
}

#[derive(Serialize)]
struct SurfaceInfo {
    axes: [f64; 4],
    class: String,
}

fn exit_code_for(err: &GeomError) -> u8 {
    match err {
        GeomError::BadAxes(_)
        | GeomError::DomainViolation(_)
        | GeomError::OffSurface { .. }
        | GeomError::WrongAxisClass { .. }
        | GeomError::OnCoordinateHyperplane { .. }
        | GeomError::NotNormalized
        | GeomError::PoleContact { .. }
        | GeomError::WrongSignature { .. }
        | GeomError::CurvesTooClose { .. }
        | GeomError::SeedDegenerate { .. }
        | GeomError::Io(_) => 2,
        GeomError::SingularChart { .. }
        | GeomError::DegenerateDirection { .. }
        | GeomError::DivergentIntegral(_)
        | GeomError::NonGenericProjection { .. }
        | GeomError::NoValidPole { .. } => 3,
    }
}

fn surface_from(axes: &Option<Vec<f64>>) -> Result<Ellipsoid4, GeomError> {
    let axes = axes
        .as_ref()
        .ok_or_else(|| GeomError::BadAxes("missing --axes A1 A2 A3 A4".into()))?;
    if axes.len() != 4 {
        return Err(GeomError::BadAxes(format!(
            "need exactly 4 axes, got {}",
            axes.len()
        )));
    }
    Ellipsoid4::new([axes[0], axes[1], axes[2], axes[3]])
}

fn info(e: &Ellipsoid4) -> SurfaceInfo {
    SurfaceInfo {
        axes: e.axes(),
        class: e.class().to_string(),
    }
}

/// 17-significant-digit float formatting: lossless double round-trips make
/// re-runs byte-identical.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Curve rows in the fixed schema idx,s,x1,x2,x3,x4,k1,k2,k3,tag.
fn write_curve_csv(
    path: &Path,
    surface: &Ellipsoid4,
    samples: &[[f64; 4]],
    arclength: Option<&[f64]>,
    eps_deg: f64,
) -> Result<(), GeomError> {
    let mut rows = String::from("idx,s,x1,x2,x3,x4,k1,k2,k3,tag\n");
    let mut s_accum = 0.0;
    for (i, p) in samples.iter().enumerate() {
        let s = match arclength {
            Some(a) => a[i],
            None => {
                if i > 0 {
                    let prev = Vector4::from(samples[i - 1]);
                    s_accum += (Vector4::from(*p) - prev).norm();
                }
                s_accum
            }
        };
        let x = Vector4::from(*p);
        let pt = SurfacePoint {
            ambient: surface.project(&x),
        };
        let k = principal_curvatures(surface, &pt);
        let tag = classify_point(surface, &pt, eps_deg);
        rows.push_str(&format!(
            "{i},{},{},{},{},{},{},{},{},{:?}\n",
            fmt_f64(s),
            fmt_f64(p[0]),
            fmt_f64(p[1]),
            fmt_f64(p[2]),
            fmt_f64(p[3]),
            fmt_f64(k[0]),
            fmt_f64(k[1]),
            fmt_f64(k[2]),
            tag
        ));
    }
    std::fs::write(path, rows).map_err(|e| GeomError::Io(e.to_string()))
}

fn read_curve_csv(path: &Path) -> Result<ClosedCurve, GeomError> {
    let text = std::fs::read_to_string(path).map_err(|e| GeomError::Io(e.to_string()))?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if !line.starts_with("idx,s,x1") {
                return Err(GeomError::Io(format!(
                    "{}: unexpected header {line:?}",
                    path.display()
                )));
            }
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 10 {
            return Err(GeomError::Io(format!(
                "{}: malformed row {i}",
                path.display()
            )));
        }
        let mut p = [0.0; 4];
        for (slot, col) in p.iter_mut().zip(&cols[2..6]) {
            *slot = col
                .parse::<f64>()
                .map_err(|e| GeomError::Io(e.to_string()))?;
        }
        samples.push(p);
    }
    let closed = samples.len() > 2
        && (Vector4::from(samples[0]) - Vector4::from(*samples.last().unwrap())).norm() < 1e-6;
    Ok(ClosedCurve {
        samples,
        closed,
        chart: path.display().to_string(),
    })
}

fn print_report<T: Serialize>(format: &str, report: &Report<T>) {
    if format == "json" {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("serializable report")
        );
    } else {
        // Compact key=value lines for the csv-style output.
        println!(
            "command={} pass={} results={}",
            report.command,
            report.pass,
            serde_json::to_string(&report.results).expect("serializable results")
        );
    }
}

fn cmd_classify(cli: &Cli, positional: &[f64]) -> Result<u8, GeomError> {
    let axes_vec = if positional.len() == 4 {
        Some(positional.to_vec())
    } else {
        cli.axes.clone()
    };
    let e = surface_from(&axes_vec)?;
    let canon = e.canonical_axes();
    let report = Report {
        surface: Some(info(&e)),
        command: "classify".into(),
        params: serde_json::json!({}),
        results: serde_json::json!({
            "class": e.class().to_string(),
            "canonical_axes": canon,
        }),
        residuals: serde_json::json!({}),
        pass: true,
    };
    print_report(&cli.format, &report);
    Ok(0)
}

fn cmd_loci(cli: &Cli, resolution: Option<f64>) -> Result<u8, GeomError> {
    let e = surface_from(&cli.axes)?;
    let resolution =
        resolution.unwrap_or(std::f64::consts::PI * e.diameter() / cli.grid.max(8) as f64);
    let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("loci_out"));
    std::fs::create_dir_all(&out_dir).map_err(|err| GeomError::Io(err.to_string()))?;

    let umbilics = loci::umbilic_points(&e);
    let curves = loci::partially_umbilic_curves(&e, resolution)?;

    let mut umbilic_pts: Vec<[f64; 4]> = Vec::new();
    let mut totally_umbilic = false;
    let mut symbolic: Vec<String> = Vec::new();
    for u in &umbilics {
        match &u.geometry {
            LocusGeometry::Points(p) => umbilic_pts.extend(p.iter().cloned()),
            LocusGeometry::FullSurface => totally_umbilic = true,
            _ => {}
        }
    }
    std::fs::write(
        out_dir.join("umbilic_points.json"),
        serde_json::to_string_pretty(&umbilic_pts).expect("serializable points"),
    )
    .map_err(|err| GeomError::Io(err.to_string()))?;

    let mut files = Vec::new();
    let mut verifications = Vec::new();
    let mut curve_idx = 0usize;
    for l in &curves {
        match &l.geometry {
            LocusGeometry::Curve(c) => {
                let name = format!("curve_{curve_idx}_{:?}.csv", l.kind);
                write_curve_csv(&out_dir.join(&name), &e, &c.samples, None, cli.eps_deg)?;
                let rep = loci::verify_locus(&e, l, cli.eps_deg);
                verifications.push(serde_json::json!({
                    "file": name,
                    "kind": format!("{:?}", l.kind),
                    "provenance": l.provenance,
                    "max_pair_gap": rep.max_pair_gap,
                    "min_third_separation": rep.min_third_separation,
                    "max_discriminant_residual": rep.max_discriminant_residual,
                    "pass": rep.pass,
                }));
                files.push(name);
                curve_idx += 1;
            }
            LocusGeometry::SurfaceMinusPoints(pts) => {
                symbolic.push(format!(
                    "partially umbilic set is the whole surface minus {} points",
                    pts.len()
                ));
            }
            _ => {}
        }
    }
    let pass = verifications
        .iter()
        .all(|v| v["pass"].as_bool().unwrap_or(false));
    let report = Report {
        surface: Some(info(&e)),
        command: "loci".into(),
        params: serde_json::json!({"resolution": resolution, "out": out_dir}),
        results: serde_json::json!({
            "totally_umbilic": totally_umbilic,
            "umbilic_count": umbilic_pts.len(),
            "curve_files": files,
            "symbolic": symbolic,
        }),
        residuals: serde_json::json!(verifications),
        pass,
    };
    print_report(&cli.format, &report);
    Ok(0)
}

fn cmd_trace(cli: &Cli, seed_point: &[f64], field: usize) -> Result<u8, GeomError> {
    let e = surface_from(&cli.axes)?;
    if seed_point.len() != 4 {
        return Err(GeomError::BadAxes("seed point needs 4 coordinates".into()));
    }
    if field > 2 {
        return Err(GeomError::BadAxes(format!(
            "field index {field} not in 0..=2"
        )));
    }
    let p = Vector4::new(seed_point[0], seed_point[1], seed_point[2], seed_point[3]);
    let residual = (e.quadric(&p) - 1.0).abs();
    if residual > 1e-6 {
        return Err(GeomError::OffSurface { residual });
    }
    let seed = SurfacePoint {
        ambient: e.project(&p),
    };
    let mut cfg = TraceConfig::for_surface(&e);
    cfg.eps_deg = cli.eps_deg;
    if let Some(h) = cli.step {
        cfg.step = h;
    }
    if let Some(l) = cli.max_arclen {
        cfg.max_arclen = l;
    }
    let trace = tracer::trace_principal_line(&e, &seed, field, &cfg)?;
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("trace.csv"));
    write_curve_csv(
        &out,
        &e,
        &trace.samples,
        Some(&trace.arclength),
        cli.eps_deg,
    )?;
    let closed = trace.termination == tracer::Termination::Closed;
    let report = Report {
        surface: Some(info(&e)),
        command: "trace".into(),
        params: serde_json::json!({
            "seed": seed_point, "field": field,
            "step": cfg.step, "max_arclen": cfg.max_arclen,
        }),
        results: serde_json::json!({
            "file": out,
            "termination": format!("{:?}", trace.termination),
            "closed": closed,
            "samples": trace.samples.len(),
            "arclength": trace.arclength.last(),
            "period": trace.period,
        }),
        residuals: serde_json::json!({"closure_gap": trace.closure_gap}),
        pass: true,
    };
    print_report(&cli.format, &report);
    Ok(0)
}

fn cmd_link(cli: &Cli, a: &Path, b: &Path) -> Result<u8, GeomError> {
    let e = surface_from(&cli.axes)?;
    let ca = read_curve_csv(a)?;
    let cb = read_curve_csv(b)?;
    let rep = topology::link_curves(&e, &ca, &cb)?;
    let report = Report {
        surface: Some(info(&e)),
        command: "link".into(),
        params: serde_json::json!({"curve_a": a, "curve_b": b}),
        results: serde_json::json!({
            "linking_number": rep.linking_number,
            "gauss_estimate": rep.gauss_estimate,
            "projection_attempts": rep.crossings_projection_attempts,
        }),
        residuals: serde_json::json!({"gauss_gap": rep.gauss_gap}),
        pass: rep.gauss_gap < 0.05,
    };
    print_report(&cli.format, &report);
    Ok(0)
}

fn cmd_verify(cli: &Cli) -> Result<u8, GeomError> {
    let reports = verify::run_all_with(cli.seed, cli.eps_deg);
    let mut all_pass = true;
    for r in &reports {
        eprintln!("{}", r.summary_line());
        for c in &r.checks {
            if !c.pass {
                eprintln!(
                    "    FAIL {}: {:.6e} vs {:.6e}",
                    c.label, c.value, c.threshold
                );
            }
        }
        all_pass &= r.pass;
    }
    let report = Report {
        surface: None,
        command: "verify".into(),
        params: serde_json::json!({"seed": cli.seed, "eps_deg": cli.eps_deg}),
        results: &reports,
        residuals: serde_json::json!({}),
        pass: all_pass,
    };
    print_report(&cli.format, &report);
    std::io::stdout().flush().ok();
    Ok(if all_pass { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Commands::Classify { positional_axes } => cmd_classify(&cli, positional_axes),
        Commands::Loci { resolution } => cmd_loci(&cli, *resolution),
        Commands::Trace { seed_point, field } => cmd_trace(&cli, seed_point, *field),
        Commands::Link { curve_a, curve_b } => cmd_link(&cli, curve_a, curve_b),
        Commands::Verify => cmd_verify(&cli),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
