//! The `arakelian` command-line driver.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arakelian::{build_exhaustion, check_arakelian_with, CompactProbe, VerdictStatus, Witness, WindowInput};
use crate::builder::{build_v, check_refutation, disjoint_union_v, refute_witness, BuildError};
use crate::grid::{rasterize_closed, CellSet, GridSpec, Point, Primitive};
use crate::loglift::{log_lift, LiftError, LiftOptions, DEFAULT_EPS_ZERO, DEFAULT_TOL};
use crate::render::{self, Artifacts, Layer};
use crate::scene::{parse_scene, print_scene, Scene};
use crate::topology::{holes, HoleExtent, RegionModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "arakelian", version, about = "Discrete checks and constructions for Arakelian sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Scene file
    scene: PathBuf,
    /// Emit a single JSON object instead of text
    #[arg(long)]
    json: bool,
    /// Include wall-clock timings in the report (makes output non-reproducible)
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct KArgs {
    /// Extra compact K: disk:cx,cy,r | rect:x1,y1,x2,y2 | set:NAME (repeatable)
    #[arg(long = "with-k", value_name = "SPEC")]
    with_k: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide (up to a level) whether a set is Arakelian
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "F")]
        set: String,
        /// Exhaustion levels
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Window heights (top edge y) to sample, comma separated
        #[arg(long, value_delimiter = ',')]
        windows: Vec<f64>,
        #[command(flatten)]
        k: KArgs,
    },
    /// Report the holes of F ∪ K
    Holes {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "F")]
        set: String,
        #[command(flatten)]
        k: KArgs,
    },
    /// Build V with F ⊆ V ⊆ U and (Ω ∪ {α}) ∖ V connected
    BuildV {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "F")]
        set: String,
    },
    /// Pick one point per hole of F ∪ K and show no V fits in the punctured U
    Refute {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "F")]
        set: String,
        #[command(flatten)]
        k: KArgs,
    },
    /// Neighborhood of a disjoint union F1 ∪ F2
    Union {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "F1,F2")]
        sets: Vec<String>,
    },
    /// Continuous logarithm of a nonvanishing function on F
    Loglift {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "F")]
        set: String,
        #[arg(long = "fn", default_value = "f")]
        function: String,
        #[arg(long, default_value_t = DEFAULT_EPS_ZERO)]
        eps_zero: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Draw scene layers
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "F,holes")]
        layers: Vec<String>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, default_value = "F")]
        set: String,
        #[command(flatten)]
        k: KArgs,
    },
    /// Print the scene in canonical form with fixtures expanded
    Print {
        scene: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Svg,
    Ppm,
}

#[derive(Debug, Serialize)]
struct ExtentRow {
    label: String,
    ymax: f64,
    #[serde(flatten)]
    extent: HoleExtent,
}

#[derive(Debug, Serialize)]
struct Report {
    command: &'static str,
    status: String,
    level: Option<usize>,
    reason: Option<String>,
    witnesses: Vec<[f64; 2]>,
    extents: Vec<ExtentRow>,
    certificate: Option<Value>,
    detail: Value,
    timings_ms: Option<BTreeMap<String, f64>>,
}

impl Report {
    fn new(command: &'static str, status: impl Into<String>) -> Self {
        Report {
            command,
            status: status.into(),
            level: None,
            reason: None,
            witnesses: Vec::new(),
            extents: Vec::new(),
            certificate: None,
            detail: Value::Null,
            timings_ms: None,
        }
    }
}

struct Timer {
    enabled: bool,
    last: Instant,
    laps: BTreeMap<String, f64>,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Timer { enabled, last: Instant::now(), laps: BTreeMap::new() }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        *self.laps.entry(name.to_string()).or_default() += (now - self.last).as_secs_f64() * 1e3;
        self.last = now;
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.laps)
    }
}

struct Outcome {
    code: i32,
    report: Report,
    /// Lines for text mode, after the status line.
    text: Vec<String>,
}

fn center(g: &GridSpec, idx: usize) -> [f64; 2] {
    let c = g.center(idx);
    [c.x, c.y]
}

fn load(path: &Path) -> Result<Scene, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_scene(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_k(spec: &str) -> Result<Result<Primitive, String>, String> {
    let (kind, rest) = spec.split_once(':').ok_or_else(|| format!("bad --with-k `{spec}`"))?;
    if kind == "set" {
        return Ok(Err(rest.to_string()));
    }
    let v: Vec<f64> = rest
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad number `{t}` in --with-k")))
        .collect::<Result<_, _>>()?;
    let prim = match (kind, &v[..]) {
        ("disk", &[x, y, r]) => Primitive::Disk { center: Point::new(x, y), r },
        ("rect", &[a, b, c, d]) => Primitive::Rect(Point::new(a, b), Point::new(c, d)),
        _ => return Err(format!("bad --with-k `{spec}` (disk:cx,cy,r | rect:x1,y1,x2,y2 | set:NAME)")),
    };
    prim.validate().map_err(|e| e.to_string())?;
    Ok(Ok(prim))
}

/// Compacts from `--with-k`, or the scene's `K*` sets when none are given.
fn k_probes(scene: &Scene, region: &RegionModel, specs: &[String]) -> Result<Vec<CompactProbe>, String> {
    if specs.is_empty() {
        return Ok(scene.k_probes(region));
    }
    specs
        .iter()
        .map(|spec| {
            let prims = match parse_k(spec)? {
                Ok(p) => vec![p],
                Err(name) => scene.set(&name).map_err(|e| e.to_string())?.to_vec(),
            };
            let cells = rasterize_closed(&prims, &region.grid).intersection(&region.omega);
            Ok(CompactProbe { label: spec.clone(), cells })
        })
        .collect()
}

fn union_of(probes: &[CompactProbe], grid: &GridSpec) -> CellSet {
    let mut k = CellSet::empty(grid);
    for p in probes {
        k.union_with(&p.cells);
    }
    k
}

fn build_error_outcome(command: &'static str, e: &BuildError) -> Result<Outcome, String> {
    let (code, status) = match e {
        BuildError::FNotInU | BuildError::Overlap | BuildError::NoHoles => return Err(e.to_string()),
        BuildError::Inconclusive { .. } => (EXIT_INCONCLUSIVE, "INCONCLUSIVE"),
        BuildError::CertificateFailed(_) => (EXIT_NEGATIVE, "CERTIFICATE_FAILED"),
        BuildError::HypothesisViolated { .. } | BuildError::NotSimplyConnected => (EXIT_NEGATIVE, "REFUSED"),
    };
    let mut report = Report::new(command, status);
    report.reason = Some(e.to_string());
    if let BuildError::CertificateFailed(c) = e {
        report.certificate = Some(serde_json::to_value(c).expect("serializable"));
    }
    Ok(Outcome { code, report, text: vec![e.to_string()] })
}

fn check(
    common: &Common,
    set: &str,
    levels: usize,
    windows: &[f64],
    k: &KArgs,
    timer: &mut Timer,
) -> Result<Outcome, String> {
    let scene = load(&common.scene)?;
    let names = [set];
    let wins: Vec<WindowInput> = if windows.is_empty() {
        vec![scene.window(&names, None).map_err(|e| e.to_string())?]
    } else {
        windows.iter().map(|&h| scene.window(&names, Some(h)).map_err(|e| e.to_string())).collect::<Result<_, _>>()?
    };
    timer.lap("raster");
    let base = &wins[0];
    let exhaustion = build_exhaustion(&base.region, levels).map_err(|e| e.to_string())?;
    let probes = k_probes(&scene, &base.region, &k.with_k)?;
    timer.lap("exhaustion");
    let schedule: &[WindowInput] = if windows.is_empty() { &[] } else { &wins };
    let verdict = check_arakelian_with(&base.f, &base.region, &exhaustion, &probes, schedule);
    timer.lap("check");

    let mut report = Report::new("check", verdict.status.name());
    let mut text = Vec::new();
    let code = match &verdict.status {
        VerdictStatus::VerifiedUpTo(n) => {
            report.level = Some(*n);
            EXIT_OK
        }
        VerdictStatus::Refuted => EXIT_NEGATIVE,
        VerdictStatus::EvidenceDivergent => EXIT_INCONCLUSIVE,
        VerdictStatus::Inconclusive(r) => {
            report.reason = Some(r.clone());
            text.push(r.clone());
            EXIT_INCONCLUSIVE
        }
    };
    match &verdict.witness {
        Some(Witness::Hole { center, .. }) => {
            report.witnesses.push(*center);
            text.push(format!("hole witness at ({}, {})", center[0], center[1]));
        }
        Some(Witness::Level { label, growth }) => {
            if let Some(last) = growth.last() {
                report.witnesses.extend(last.representatives.iter().copied());
            }
            let reach: Vec<String> = growth.iter().map(|w| format!("{:.6}", w.extent.max_abs_center)).collect();
            text.push(format!("{label}: hole-union max|center| {}", reach.join(" < ")));
        }
        None => {}
    }
    for g in &verdict.growth {
        for w in &g.windows {
            report.extents.push(ExtentRow { label: g.label.clone(), ymax: w.ymax, extent: w.extent.clone() });
        }
    }
    if let Some(an) = &verdict.alpha_neighborhood {
        report.certificate = Some(json!({ "alpha_neighborhood": an.connectivity, "w_cells": an.w.len() }));
    }
    report.detail = json!({
        "set": set,
        "levels": exhaustion.levels.iter().map(|l| json!({"index": l.index, "cells": l.cells.len()})).collect::<Vec<_>>(),
        "warnings": exhaustion.warnings,
        "windows": wins.iter().map(|w| w.region.grid.ymax).collect::<Vec<_>>(),
        "growth": verdict.growth.iter().map(|g| json!({
            "label": g.label, "within_bound": g.within_bound, "divergent": g.divergent, "ambiguous": g.ambiguous,
        })).collect::<Vec<_>>(),
    });
    for row in &report.extents {
        text.push(format!(
            "  {:<12} ymax {:<6} holes {:<4} cells {:<7} max|center| {:.6}",
            row.label, row.ymax, row.extent.count, row.extent.cells, row.extent.max_abs_center
        ));
    }
    if let VerdictStatus::VerifiedUpTo(n) = verdict.status {
        report.status = "VERIFIED_UP_TO".into();
        text.insert(0, format!("verified up to exhaustion level {n}"));
    }
    Ok(Outcome { code, report, text })
}

fn holes_cmd(common: &Common, set: &str, k: &KArgs, timer: &mut Timer) -> Result<Outcome, String> {
    let scene = load(&common.scene)?;
    let win = scene.window(&[set], None).map_err(|e| e.to_string())?;
    let probes = k_probes(&scene, &win.region, &k.with_k)?;
    let kset = union_of(&probes, &win.region.grid);
    let hs = holes(&win.f.union(&kset), &win.region);
    timer.lap("holes");
    let g = win.region.grid;
    let mut report = Report::new("holes", if hs.is_empty() { "NO_HOLES" } else { "HOLES" });
    report.witnesses = hs.representatives().into_iter().map(|i| center(&g, i)).collect();
    report.extents.push(ExtentRow { label: "F∪K".into(), ymax: g.ymax, extent: hs.extent.clone() });
    report.detail = json!({
        "set": set,
        "k": probes.iter().map(|p| p.label.clone()).collect::<Vec<_>>(),
        "ambiguous_components": hs.ambiguous.len(),
    });
    let text = vec![format!("{} holes, {} cells, max|center| {:.6}", hs.extent.count, hs.extent.cells, hs.extent.max_abs_center)];
    Ok(Outcome { code: EXIT_OK, report, text })
}

fn neighborhood_json(g: &GridSpec, r: &crate::builder::NeighborhoodResult) -> Value {
    json!({
        "v_cells": r.v.len(),
        "u_cells": r.u.len(),
        "disks": r.cover.disks.iter().map(|d| json!({"center": center(g, d.center), "radius": d.radius, "annulus": d.annulus})).collect::<Vec<_>>(),
        "curves": r.plan.curves.iter().map(|c| json!({
            "disk": c.disk,
            "length": c.cells.len(),
            "end": center(g, *c.cells.last().expect("non-empty curve")),
            "stages": c.stages,
        })).collect::<Vec<_>>(),
    })
}

fn build_v_cmd(common: &Common, set: &str, timer: &mut Timer) -> Result<Outcome, String> {
    let scene = load(&common.scene)?;
    let win = scene.window(&[set], None).map_err(|e| e.to_string())?;
    let u = scene.u(&win.region);
    let res = build_v(&win.f, &u, &win.region);
    timer.lap("build_v");
    let r = match res {
        Ok(r) => r,
        Err(e) => return build_error_outcome("build-v", &e),
    };
    let g = win.region.grid;
    let mut report = Report::new("build-v", "CERTIFIED");
    report.witnesses = r.cover.disks.iter().map(|d| center(&g, d.center)).collect();
    report.certificate = Some(serde_json::to_value(&r.certificate).expect("serializable"));
    report.detail = neighborhood_json(&g, &r);
    let text = vec![format!(
        "V has {} cells; {} disks, {} escape curves; {}",
        r.v.len(),
        r.cover.disks.len(),
        r.plan.curves.len(),
        r.certificate
    )];
    Ok(Outcome { code: EXIT_OK, report, text })
}

fn refute_cmd(common: &Common, set: &str, k: &KArgs, timer: &mut Timer) -> Result<Outcome, String> {
    let scene = load(&common.scene)?;
    let win = scene.window(&[set], None).map_err(|e| e.to_string())?;
    let probes = k_probes(&scene, &win.region, &k.with_k)?;
    let kset = union_of(&probes, &win.region.grid);
    let w = refute_witness(&win.f, &win.region, &kset).map_err(|e| e.to_string())?;
    timer.lap("witness");
    let check = check_refutation(&win.f, &w.u, &win.region);
    timer.lap("build_v");
    let g = win.region.grid;
    let (code, status) = if check.holds() { (EXIT_NEGATIVE, "REFUTED") } else { (EXIT_INCONCLUSIVE, "INCONCLUSIVE") };
    let mut report = Report::new("refute", status);
    report.witnesses = w.points.iter().map(|&i| center(&g, i)).collect();
    report.certificate = Some(serde_json::to_value(&check.candidate).expect("serializable"));
    let mut text = vec![format!("{} witness points", w.points.len())];
    match &check.refused {
        Some(e) => text.push(format!("build_v refused: {e}")),
        None => {
            let reason = "build_v certified a neighborhood inside U on this window".to_string();
            text.push(reason.clone());
            report.reason = Some(reason);
        }
    }
    report.detail = json!({
        "set": set,
        "k": probes.iter().map(|p| p.label.clone()).collect::<Vec<_>>(),
        "build_v": check.refused.as_ref().map(|e| e.to_string()),
    });
    Ok(Outcome { code, report, text })
}

fn union_cmd(common: &Common, sets: &[String], timer: &mut Timer) -> Result<Outcome, String> {
    let [s1, s2] = sets else { return Err("--sets takes exactly two names".into()) };
    let scene = load(&common.scene)?;
    let win = scene.window(&[s1, s2], None).map_err(|e| e.to_string())?;
    let region = &win.region;
    let g = region.grid;
    let raster = |name: &str| -> Result<CellSet, String> {
        Ok(rasterize_closed(scene.set(name).map_err(|e| e.to_string())?, &g).intersection(&region.omega))
    };
    let (f1, f2) = (raster(s1)?, raster(s2)?);
    for (name, f) in [(s1, &f1), (s2, &f2)] {
        let hs = holes(f, region);
        if let Some(&rep) = hs.representatives().first() {
            let mut report = Report::new("union", "REFUTED");
            report.witnesses.push(center(&g, rep));
            report.reason = Some(format!("{name} has a hole"));
            return Ok(Outcome { code: EXIT_NEGATIVE, report, text: vec![format!("{name} has a hole")] });
        }
    }
    let u = scene.u(region);
    let res = disjoint_union_v(&f1, &f2, &u, region);
    timer.lap("union");
    let r = match res {
        Ok(r) => r,
        Err(e) => return build_error_outcome("union", &e),
    };
    let mut report = Report::new("union", "CERTIFIED");
    report.certificate = Some(serde_json::to_value(&r.certificate).expect("serializable"));
    report.detail = json!({
        "v_cells": r.v.len(),
        "parts": r.parts.iter().map(|p| neighborhood_json(&g, p)).collect::<Vec<_>>(),
    });
    let text = vec![format!(
        "V has {} cells in two parts ({} + {}); {}",
        r.v.len(),
        r.parts[0].v.len(),
        r.parts[1].v.len(),
        r.certificate.combined
    )];
    Ok(Outcome { code: EXIT_OK, report, text })
}

fn loglift_cmd(common: &Common, set: &str, function: &str, eps_zero: f64, tol: f64, timer: &mut Timer) -> Result<Outcome, String> {
    let scene = load(&common.scene)?;
    let win = scene.window(&[set], None).map_err(|e| e.to_string())?;
    let spec = scene.function(function).map_err(|e| e.to_string())?;
    let base = common.scene.parent().unwrap_or(Path::new("."));
    let f = spec.sample(&win.f, base).map_err(|e| e.to_string())?;
    timer.lap("sample");
    let opts = LiftOptions { eps_zero, tol, roots: Vec::new() };
    let res = log_lift(&win.f, &f, &win.region, &opts);
    timer.lap("lift");
    let lift = match res {
        Ok(l) => l,
        Err(e) => {
            let (code, status) = match &e {
                LiftError::Build(b) => return build_error_outcome("loglift", b),
                LiftError::PhaseJump { .. } => (EXIT_INCONCLUSIVE, "INCONCLUSIVE"),
                LiftError::Residual { .. } => (EXIT_NEGATIVE, "RESIDUAL_FAILED"),
                _ => return Err(e.to_string()),
            };
            let mut report = Report::new("loglift", status);
            report.reason = Some(e.to_string());
            return Ok(Outcome { code, report, text: vec![e.to_string()] });
        }
    };
    let g = win.region.grid;
    let mut report = Report::new("loglift", "VERIFIED");
    report.witnesses = lift.roots.iter().map(|&i| center(&g, i)).collect();
    report.certificate = Some(json!({
        "residual": lift.residual,
        "tol": tol,
        "max_jump_on_f": lift.max_jump_on_f,
        "neighborhood": lift.neighborhood.certificate,
    }));
    report.detail = json!({
        "g": lift.g.iter().map(|(i, v)| { let c = center(&g, i); json!([c[0], c[1], v.re, v.im]) }).collect::<Vec<_>>(),
    });
    let text = vec![format!(
        "g on {} cells; max|e^g - f| = {:e}; max phase step on F {:.6}",
        lift.g.carrier().len(),
        lift.residual,
        lift.max_jump_on_f
    )];
    Ok(Outcome { code: EXIT_OK, report, text })
}

fn render_cmd(
    common: &Common,
    output: &Path,
    layers: &[String],
    format: Option<Format>,
    set: &str,
    k: &KArgs,
    timer: &mut Timer,
) -> Result<Outcome, String> {
    let layers: Vec<Layer> = layers.iter().map(|l| l.parse()).collect::<Result<_, _>>()?;
    let format = format.unwrap_or(if output.extension().is_some_and(|e| e == "ppm") { Format::Ppm } else { Format::Svg });
    let scene = load(&common.scene)?;
    // a scene without the set still renders its Ω
    let names: &[&str] = if scene.sets.contains_key(set) { &[set] } else { &[] };
    let win = scene.window(names, None).map_err(|e| e.to_string())?;
    let region = &win.region;
    let mut art = Artifacts::new(region.omega.clone(), win.f.clone());
    let u = scene.u(region);
    if layers.contains(&Layer::U) {
        art.u = Some(u.clone());
    }
    if layers.contains(&Layer::Holes) {
        let probes = k_probes(&scene, region, &k.with_k)?;
        let kset = union_of(&probes, &region.grid);
        art.holes = Some(holes(&win.f.union(&kset), region).union);
    }
    if layers.iter().any(|l| matches!(l, Layer::V | Layer::Disks | Layer::Curves)) {
        match build_v(&win.f, &u, region) {
            Ok(r) => {
                art.v = Some(r.v);
                art.disks = r.cover.disks;
                art.curves = r.plan.curves.into_iter().map(|c| c.cells).collect();
            }
            Err(e) => return build_error_outcome("render", &e),
        }
    }
    timer.lap("compute");
    let bytes = match format {
        Format::Svg => render::svg(&art, &layers).into_bytes(),
        Format::Ppm => render::ppm(&art, &layers),
    };
    std::fs::write(output, &bytes).map_err(|e| format!("{}: {e}", output.display()))?;
    timer.lap("write");
    let mut report = Report::new("render", "WRITTEN");
    report.detail = json!({ "path": output.display().to_string(), "bytes": bytes.len() });
    Ok(Outcome { code: EXIT_OK, report, text: vec![format!("wrote {}", output.display())] })
}

/// Run the CLI on `args` (including the program name), writing reports to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let (common, result) = match &cli.command {
        Command::Print { scene } => {
            return match load(scene) {
                Ok(s) => {
                    let _ = write!(out, "{}", print_scene(&s));
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_INPUT
                }
            };
        }
        Command::Check { common, set, levels, windows, k } => {
            let mut t = Timer::new(common.timings);
            (common, check(common, set, *levels, windows, k, &mut t).map(|o| (o, t)))
        }
        Command::Holes { common, set, k } => {
            let mut t = Timer::new(common.timings);
            (common, holes_cmd(common, set, k, &mut t).map(|o| (o, t)))
        }
        Command::BuildV { common, set } => {
            let mut t = Timer::new(common.timings);
            (common, build_v_cmd(common, set, &mut t).map(|o| (o, t)))
        }
        Command::Refute { common, set, k } => {
            let mut t = Timer::new(common.timings);
            (common, refute_cmd(common, set, k, &mut t).map(|o| (o, t)))
        }
        Command::Union { common, sets } => {
            let mut t = Timer::new(common.timings);
            (common, union_cmd(common, sets, &mut t).map(|o| (o, t)))
        }
        Command::Loglift { common, set, function, eps_zero, tol } => {
            let mut t = Timer::new(common.timings);
            (common, loglift_cmd(common, set, function, *eps_zero, *tol, &mut t).map(|o| (o, t)))
        }
        Command::Render { common, output, layers, format, set, k } => {
            let mut t = Timer::new(common.timings);
            (common, render_cmd(common, output, layers, *format, set, k, &mut t).map(|o| (o, t)))
        }
    };
    match result {
        Ok((mut outcome, timer)) => {
            outcome.report.timings_ms = timer.finish();
            if common.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&outcome.report).expect("serializable"));
            } else {
                let _ = writeln!(out, "{}", outcome.report.status);
                for line in &outcome.text {
                    let _ = writeln!(out, "{line}");
                }
                if let Some(t) = &outcome.report.timings_ms {
                    let parts: Vec<String> = t.iter().map(|(k, v)| format!("{k} {v:.1}ms")).collect();
                    let _ = writeln!(out, "timings: {}", parts.join(", "));
                }
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}
