use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use gchtw_core::oracle::{auto_saddle, extract_recurrence, recurrence_mismatch, residual_scan};
use gchtw_core::phase::{
    classify_equilibrium, gstar, hyperbola_intersections, regular_equilibria, singular_equilibria, EquilibriumKind,
    GStar, HyperbolaIntersection, Origin, PortraitOptions, Window,
};
use gchtw_core::series::{assemble_with, build_branch_with, Construction, ForcingSign, Profile, Verdict};
use gchtw_core::{
    classify_singular_wave, equation::snap_equilibrium, evaluate_wave, portrait, EquationId,
    HomoclinicSolution, SeriesBranch, Side, SingularWaveVerdict, Strategy, WaveParams,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::*;
use crate::error::{CliError, CliResult, EXIT_USAGE};
use crate::manifest::{EquilibriumRecord, ManifestBuilder, Params};
use crate::output::{self, num, Table};

/// Distance within which an explicit `--x0` is moved onto the equilibrium.
const X0_SNAP: f64 = 1e-3;
const SHOOT_OFFSET: f64 = 1e-6;
const SHOOT_TOL: f64 = 1e-10;

pub const VERIFY_REBUILD_TOL: f64 = 1e-12;
pub const VERIFY_ORACLE_TOL: f64 = 1e-9;
pub const VERIFY_ORACLE_KMAX: usize = 10;
pub const VERIFY_JUNCTION_TOL: f64 = 1e-9;
pub const VERIFY_EXACT_TOL: f64 = 1e-10;

type Out<'a> = &'a mut dyn Write;

fn say(out: Out, text: std::fmt::Arguments) -> CliResult<()> {
    out.write_fmt(text).map_err(|e| CliError::io("<stdout>", e))
}

macro_rules! say {
    ($out:expr, $($t:tt)*) => { say($out, format_args!($($t)*)) };
}

fn params(m: &ModelArgs) -> CliResult<WaveParams> {
    Ok(WaveParams::new(m.c, m.g)?)
}

/// Thread pool sized by `GCHTW_THREADS` (all cores when unset).
pub fn pool() -> CliResult<rayon::ThreadPool> {
    let n = match std::env::var("GCHTW_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("GCHTW_THREADS must be a positive integer (got '{v}')")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

pub fn dispatch(cli: Cli, argv: &[String], out: Out) -> CliResult<()> {
    match cli.command {
        Command::Equilibria(a) => equilibria(a, argv, out),
        Command::Portrait(a) => portrait_cmd(a, argv, out),
        Command::Classify(a) => classify(a, argv, out),
        Command::Series(a) => series(a, argv, out),
        Command::Wave(a) => wave(a, argv, out),
        Command::Gstar(a) => gstar_cmd(a, argv, out),
        Command::Verify(a) => verify(a, argv, out),
        Command::Sweep(a) => sweep(a, argv, out),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EquilibriaReport {
    pub equation: EquationId,
    pub params: Params,
    pub equilibria: Vec<EquilibriumRecord>,
}

fn equilibria(a: EquilibriaArgs, argv: &[String], out: Out) -> CliResult<()> {
    let (eq, p) = (a.model.eq, params(&a.model)?);
    let infos: Vec<_> = regular_equilibria(eq, p).into_iter().chain(singular_equilibria(eq, p)).collect();
    let report = EquilibriaReport {
        equation: eq,
        params: Params { c: p.c(), g: p.g() },
        equilibria: infos.iter().map(EquilibriumRecord::from).collect(),
    };
    let mut table = Table::new(&["origin", "kind", "phi", "y", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im"]);
    for r in &report.equilibria {
        let [[a_re, a_im], [b_re, b_im]] = r.eigenvalues;
        table.push(vec![
            r.origin.clone(),
            r.kind.clone(),
            num(r.phi),
            num(r.y),
            num(a_re),
            num(a_im),
            num(b_re),
            num(b_im),
        ]);
    }
    let csv = a.csv || a.out.as_deref().is_some_and(|o| has_ext(o, "csv"));
    match &a.out {
        Some(path) => {
            if csv { table.write(path)? } else { output::write_json(path, &report)? }
            let mut m = ManifestBuilder::new(argv);
            m.model(eq, p);
            m.write(std::slice::from_ref(path))?;
            say!(out, "wrote {} ({} equilibria)\n", path.display(), report.equilibria.len())
        }
        None if a.json => say!(out, "{}\n", output::to_json_string(&report)),
        None if a.csv => out.write_all(&table.to_bytes()?).map_err(|e| CliError::io("<stdout>", e)),
        None => {
            say!(out, "{eq} c={} g={}\n", p.c(), p.g())?;
            for r in &report.equilibria {
                let [[a_re, a_im], [b_re, b_im]] = r.eigenvalues;
                say!(
                    out,
                    "{:<8} {:<10} phi={:<22} y={:<22} eig=({a_re}{a_im:+}i, {b_re}{b_im:+}i)\n",
                    r.origin,
                    r.kind,
                    r.phi,
                    r.y
                )?;
            }
            Ok(())
        }
    }
}

fn has_ext(p: &Path, ext: &str) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

fn portrait_cmd(a: PortraitArgs, argv: &[String], out: Out) -> CliResult<()> {
    let (eq, p) = (a.model.eq, params(&a.model)?);
    let [x0, x1, y0, y1] = a.window;
    let window = Window::new(x0, x1, y0, y1)?;
    let opts = PortraitOptions { seeds: a.seeds, seed: a.seed, span: a.span, tol: a.tol };
    let pt = pool()?.install(|| portrait(eq, p, window, &opts))?;

    let mut outputs = Vec::new();
    if let Some(path) = &a.csv {
        let mut t = Table::new(&["traj", "direction", "zeta", "phi", "y"]);
        for (i, tr) in pt.trajectories.iter().enumerate() {
            // Trajectories alternate forward and backward from each seed.
            let dir = if i % 2 == 0 { "forward" } else { "backward" };
            for s in &tr.samples {
                t.push(vec![(i / 2).to_string(), dir.into(), num(s.zeta), num(s.phi), num(s.y)]);
            }
        }
        t.write(path)?;
        outputs.push(path.clone());
    }
    if let Some(path) = &a.svg {
        output::write_text(path, &output::portrait_svg(&pt))?;
        outputs.push(path.clone());
    }
    if let Some(path) = &a.out {
        output::write_json(path, &pt)?;
        outputs.push(path.clone());
    }

    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    for tr in &pt.trajectories {
        *tally.entry(format!("{:?}", tr.terminated_by)).or_default() += 1;
    }
    say!(out, "{eq} c={} g={}: {} trajectories from {} seeds\n", p.c(), p.g(), pt.trajectories.len(), a.seeds)?;
    for (k, n) in &tally {
        say!(out, "  {k}: {n}\n")?;
    }
    for e in &pt.equilibria {
        say!(out, "  {:?} {:?} at ({}, {})\n", e.origin, e.kind, e.location.0, e.location.1)?;
    }
    if !outputs.is_empty() {
        let mut m = ManifestBuilder::new(argv);
        m.model(eq, p);
        m.write(&outputs)?;
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub equation: EquationId,
    pub params: Params,
    pub verdict: SingularWaveVerdict,
}

fn classify(a: ClassifyArgs, argv: &[String], out: Out) -> CliResult<()> {
    let (eq, p) = (a.model.eq, params(&a.model)?);
    let report = ClassifyReport {
        equation: eq,
        params: Params { c: p.c(), g: p.g() },
        verdict: classify_singular_wave(eq, p),
    };
    if let Some(path) = &a.out {
        output::write_json(path, &report)?;
        let mut m = ManifestBuilder::new(argv);
        m.model(eq, p);
        m.write(std::slice::from_ref(path))?;
    }
    if a.json {
        say!(out, "{}\n", output::to_json_string(&report))
    } else {
        say!(out, "{}\n", report.verdict.label.as_str())
    }
}

fn strategy(a: &SeriesArgs) -> CliResult<Strategy> {
    let need_a1 = || a.a1.ok_or_else(|| CliError::Usage(format!("--strategy {:?} needs --a1", a.strategy).to_lowercase()));
    Ok(match a.strategy {
        StrategyKind::Continuity => Strategy::ContinuityRoot { target: a.target, prefer: a.prefer },
        StrategyKind::Mirror => Strategy::Mirror { a1: need_a1()? },
        StrategyKind::Matched => Strategy::MatchedLeft { a1: need_a1()?, prefer: a.prefer },
        StrategyKind::Exact => {
            let family = a.family.ok_or_else(|| CliError::Usage("--strategy exact needs --family".into()))?;
            let constants = match a.constants.as_deref() {
                Some(&[k1, k2]) => [k1, k2],
                _ => return Err(CliError::Usage("--strategy exact needs --constants k1,k2".into())),
            };
            Strategy::ExactG0 { family, constants }
        }
    })
}

fn resolve_x0(a: &SeriesArgs, eq: EquationId, p: WaveParams) -> CliResult<f64> {
    match a.x0 {
        X0::Auto => match auto_saddle(eq, p, SHOOT_OFFSET, SHOOT_TOL)? {
            Some(r) => Ok(r.x0),
            None => Err(CliError::NoSaddle(format!("no regular saddle of {eq} at c={} g={} has a homoclinic loop", p.c(), p.g()))),
        },
        X0::Value(v) => {
            let x0 = snap_equilibrium(eq, p, v, X0_SNAP)
                .ok_or_else(|| CliError::NoSaddle(format!("x0 = {v} is not within {X0_SNAP} of an equilibrium")))?;
            let info = classify_equilibrium(eq, p, (x0, 0.0))?;
            if info.kind != EquilibriumKind::Saddle || info.origin != Origin::Regular {
                return Err(CliError::NoSaddle(format!("x0 = {x0} is a {:?}, not a regular saddle", info.kind).to_lowercase()));
            }
            Ok(x0)
        }
    }
}

fn series(a: SeriesArgs, argv: &[String], out: Out) -> CliResult<()> {
    let (eq, p) = (a.model.eq, params(&a.model)?);
    let strat = strategy(&a)?;
    let sign = match a.sign {
        SignArg::Standard => ForcingSign::Standard,
        SignArg::Reversed => ForcingSign::Reversed,
    };
    // The exact family has no anchoring saddle.
    let x0 = if matches!(strat, Strategy::ExactG0 { .. }) { 0.0 } else { resolve_x0(&a, eq, p)? };
    let sol = assemble_with(eq, p, x0, a.m, &strat, sign)?;

    if let Some(path) = &a.out {
        output::write_json(path, &sol)?;
        let mut m = ManifestBuilder::new(argv);
        m.model(eq, p);
        m.series(&sol);
        m.write(std::slice::from_ref(path))?;
    }
    match &sol.profile {
        Profile::Series { right, left, right_report, left_report } => {
            say!(out, "{eq} c={} g={} x0={} M={}\n", p.c(), p.g(), right.x0, right.order)?;
            for (b, r) in [(right, right_report), (left, left_report)] {
                say!(
                    out,
                    "  {:<5} exponent={} a1={} verdict={} tail-ratio={}\n",
                    b.side.as_str(),
                    b.exponent,
                    b.leading(),
                    r.verdict.as_str(),
                    r.tail_ratio
                )?;
            }
        }
        Profile::Exact { solution } => {
            say!(out, "{eq} c={} g=0 exact family {} constants {:?}\n", p.c(), solution.family, solution.constants)?;
        }
    }
    say!(out, "  junction-value={} junction-jump={}\n", sol.junction_value, sol.junction_jump)
}

fn wave(a: WaveArgs, argv: &[String], out: Out) -> CliResult<()> {
    let (sol, bytes): (HomoclinicSolution, _) = output::read_json(&a.solution)?;
    let xs = step_points(a.x);
    let c = sol.params.c();
    let mut t = Table::new(&["t", "x", "z", "u"]);
    for &time in &a.t {
        for &x in &xs {
            t.push(vec![num(time), num(x), num(x - c * time), num(evaluate_wave(&sol, x, time))]);
        }
    }
    match &a.out {
        Some(path) => {
            t.write(path)?;
            let mut m = ManifestBuilder::new(argv);
            m.input_file(&bytes);
            m.model(sol.equation, sol.params);
            m.series(&sol);
            m.write(std::slice::from_ref(path))?;
            say!(out, "wrote {} ({} points x {} times)\n", path.display(), xs.len(), a.t.len())
        }
        None => out.write_all(&t.to_bytes()?).map_err(|e| CliError::io("<stdout>", e)),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GstarReport {
    pub gstar: GStar,
    pub intersections: HyperbolaIntersection,
}

fn gstar_cmd(a: GstarArgs, argv: &[String], out: Out) -> CliResult<()> {
    let gs = gstar(a.c, a.tol)?;
    let g = a.g.unwrap_or(gs.g_star);
    let report = GstarReport { intersections: hyperbola_intersections(a.c, g)?, gstar: gs };
    if let Some(path) = &a.out {
        output::write_json(path, &report)?;
        let mut m = ManifestBuilder::new(argv);
        m.model(EquationId::Gch3, WaveParams::new(a.c, g)?);
        m.write(std::slice::from_ref(path))?;
    }
    let (gs, hi) = (&report.gstar, &report.intersections);
    say!(out, "c={} g*={} saddle={} h2={}\n", gs.c, gs.g_star, gs.saddle, gs.h2)?;
    say!(out, "g={} phi_s={} y_s={} P+=({}, {}) P-=({}, {})\n", hi.g, hi.phi_s, hi.y_s, hi.points[0].0, hi.points[0].1, hi.points[1].0, hi.points[1].1)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub equation: EquationId,
    pub params: Params,
    pub construction: Construction,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// Worst ratio of the residual profile to a bound decaying like the first
/// omitted term, fitted on the first unit of `|z|`.  At most 1 when the
/// residual is dominated by truncation.
fn tail_excess(branch: &SeriesBranch, profile: &[(f64, f64)], threshold: f64, floor: f64) -> f64 {
    let rate = -((branch.order + 1) as f64) * branch.exponent.abs();
    let zr: Vec<(f64, f64)> = profile
        .iter()
        .filter(|(z, _)| (*z > 0.0) == (branch.side == Side::Right) && z.abs() >= threshold)
        .map(|&(z, r)| (z.abs(), r.abs()))
        .collect();
    let fit = zr
        .iter()
        .take_while(|(z, _)| *z <= threshold + 1.0)
        .map(|(z, r)| r / (rate * z).exp())
        .fold(0.0f64, f64::max);
    zr.iter()
        .map(|&(z, r)| r / (10.0 * fit * (rate * z).exp() + floor))
        .fold(0.0f64, f64::max)
}

pub fn verify_solution(sol: &HomoclinicSolution) -> CliResult<VerifyReport> {
    let (eq, p) = (sol.equation, sol.params);
    let mut checks = Vec::new();
    let mut check = |name: String, value: f64, tolerance: f64| {
        checks.push(Check { passed: value <= tolerance, name, value, tolerance });
    };
    match &sol.profile {
        Profile::Series { right, left, .. } => {
            let rebuilt_right = build_branch_with(eq, p, right.x0, right.leading(), right.order, Side::Right, right.sign)?;
            let mirrored = eq.is_reversible() && matches!(sol.construction, Construction::Mirror | Construction::ContinuityRoot);
            let rebuilt_left = if mirrored {
                rebuilt_right.mirrored()
            } else {
                build_branch_with(eq, p, left.x0, left.leading(), left.order, Side::Left, left.sign)?
            };
            for (b, rb) in [(right, &rebuilt_right), (left, &rebuilt_left)] {
                let side = b.side.as_str();
                let exp_err = (b.exponent - rb.exponent).abs() / rb.exponent.abs();
                check(format!("{side}-rebuild"), rel_diff(&b.coefficients, &rb.coefficients).max(exp_err), VERIFY_REBUILD_TOL);
                let k_max = b.order.min(VERIFY_ORACLE_KMAX);
                let ext = extract_recurrence(eq, p, b.x0, b.exponent, k_max)?;
                check(format!("{side}-oracle-k{k_max}"), recurrence_mismatch(&ext, eq, p, b.x0), VERIFY_ORACLE_TOL);
                let diverging = gchtw_core::convergence_report(b).verdict == Verdict::Diverging;
                check(format!("{side}-not-diverging"), if diverging { 1.0 } else { 0.0 }, 0.0);
            }
            let jv = sol.junction_value;
            check("junction-jump".into(), sol.junction_jump, VERIFY_JUNCTION_TOL * jv.abs().max(1.0));

            let span = |b: &SeriesBranch| (2.0 / b.exponent.abs(), (10.0f64).max(2.0 / b.exponent.abs() + 1.0));
            let (r0, r1) = span(right);
            let (l0, l1) = span(left);
            let mut grid: Vec<f64> = (0..=80).map(|i| -(l0 + (l1 - l0) * i as f64 / 80.0)).collect();
            grid.extend((0..=80).map(|i| r0 + (r1 - r0) * i as f64 / 80.0));
            let scan = residual_scan(sol, &grid);
            for (b, threshold) in [(right, scan.thresholds.0), (left, scan.thresholds.1)] {
                let mass: f64 = b.coefficients.iter().map(|a| a.abs()).sum();
                let floor = 1e-13 * (1.0 + b.x0.abs() + p.c().abs() + mass).powi(3);
                check(format!("{}-residual-tail", b.side.as_str()), tail_excess(b, &scan.profile, threshold, floor), 1.0);
            }
        }
        Profile::Exact { .. } => {
            let grid: Vec<f64> = (0..=100).map(|i| -5.0 + 0.1 * i as f64).collect();
            let scan = residual_scan(sol, &grid);
            let peak = grid.iter().fold(1.0f64, |m, &z| m.max(sol.phi(z).abs()));
            check("exact-residual".into(), scan.max_residual, VERIFY_EXACT_TOL * peak.powi(3));
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        equation: eq,
        params: Params { c: p.c(), g: p.g() },
        construction: sol.construction,
        checks,
        passed,
    })
}

fn verify(a: VerifyArgs, argv: &[String], out: Out) -> CliResult<()> {
    let (sol, bytes): (HomoclinicSolution, _) = output::read_json(&a.solution)?;
    let report = verify_solution(&sol)?;
    if let Some(path) = &a.out {
        output::write_json(path, &report)?;
        let mut m = ManifestBuilder::new(argv);
        m.input_file(&bytes);
        m.model(sol.equation, sol.params);
        m.series(&sol);
        m.write(std::slice::from_ref(path))?;
    }
    for c in &report.checks {
        say!(out, "{} {:<22} {:.3e} (tol {:.1e})\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.value, c.tolerance)?;
    }
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(CliError::Verification(failed.join(", ")))
    }
}

fn fmt_f64(v: f64) -> String {
    // `Display` is the shortest string that parses back to the same value.
    v.to_string()
}

fn sweep(a: SweepArgs, argv: &[String], out: Out) -> CliResult<()> {
    let cs = grid_points(a.c_range);
    let gs = grid_points(a.g_range);
    let cells: Vec<(usize, usize, f64, f64, Vec<String>)> = cs
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| gs.iter().enumerate().map(move |(j, &g)| (i, j, c, g)))
        .map(|(i, j, c, g)| {
            let path = a.out_dir.join(format!("cell_{i}_{j}.json"));
            let mut cell = vec!["gchtw".to_string(), a.job.name().to_string(), "--eq".into(), a.eq.tag().into()];
            cell.extend(["--c".into(), fmt_f64(c), "--g".into(), fmt_f64(g)]);
            cell.extend(a.job_args.iter().cloned());
            cell.extend(["--out".into(), path.to_string_lossy().into_owned()]);
            (i, j, c, g, cell)
        })
        .collect();
    // Malformed job arguments would fail identically in every cell.
    if let Some((.., first)) = cells.first() {
        <Cli as clap::Parser>::try_parse_from(first).map_err(|e| CliError::Usage(format!("sweep job arguments: {e}")))?;
    }
    std::fs::create_dir_all(&a.out_dir).map_err(|e| CliError::io(&a.out_dir, e))?;

    let results: Vec<(u8, String)> = pool()?.install(|| {
        cells
            .par_iter()
            .map(|(.., cell)| match crate::run_quiet(cell) {
                Ok(()) => (0, String::new()),
                Err(e) => (e.exit_code(), e.to_string().lines().next().unwrap_or_default().to_string()),
            })
            .collect()
    });

    let mut index = Table::new(&["i", "j", "c", "g", "exit", "output", "message"]);
    for ((i, j, c, g, cell), (code, msg)) in cells.iter().zip(&results) {
        index.push(vec![
            i.to_string(),
            j.to_string(),
            num(*c),
            num(*g),
            code.to_string(),
            cell.last().cloned().unwrap_or_default(),
            msg.clone(),
        ]);
    }
    let index_path: PathBuf = a.out_dir.join("index.csv");
    index.write(&index_path)?;
    ManifestBuilder::new(argv).write(std::slice::from_ref(&index_path))?;
    let ok = results.iter().filter(|(c, _)| *c == 0).count();
    let usage = results.iter().filter(|(c, _)| *c == EXIT_USAGE).count();
    say!(out, "{} cells, {ok} succeeded; index at {}\n", cells.len(), index_path.display())?;
    if usage > 0 {
        say!(out, "{usage} cells rejected their parameters (exit {EXIT_USAGE})\n")?;
    }
    Ok(())
}
