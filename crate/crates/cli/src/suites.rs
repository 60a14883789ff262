//! One function per suite. Each returns its checks plus the data behind them.

use std::path::Path;
use std::time::Instant;

use anyhow::{Context as _, Result};
use log::{info, warn};
use nogo::assign::{
    build_from_pauli, exhaustive_search, parse_context_file, parity_certificate, system_from_context_lines,
    SearchOutcome, MAX_EXHAUSTIVE,
};
use nogo::bell2d::{mc_estimate, mc_mean, uniform_on_sphere, value, von_neumann_demo, Observable2D, Vec3};
use nogo::ks::construct::{bell_set_with, ladder_rays, tan_22_5};
use nogo::ks::{
    bell_gadget, parse_ray_file, peres_33, search_coloring, search_coloring_pinned, write_ray_file, Color,
    ColoringInstance, ColoringOutcome, Mode, Ray,
};
use nogo::pauli::{magic_square_lines, mutually_commuting, set_product, star_lines, Line};
use nogo::qverify::{
    binary_encoding_check, eigen, ghz_contradiction, marginal_invariance, pauli_to_matrix, random_marginal_instance,
    random_rotation, spin1_squared, spin1_triad_check,
};
use nogo::Sign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{Command, ExpectAssignment, ExpectColoring, RunConfig, SuiteReport, Verdict};

/// Thresholds for the dense-matrix identities.
const MATRIX_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;
const MARGINAL_TOL: f64 = 1e-10;
const BELL_MODEL_PAIRS: usize = 10;
const SPIN1_TRIADS: usize = 100;
const MARGINAL_INSTANCES: usize = 50;
const ENCODING_ORIENTATIONS: usize = 20;

/// The suites `report-all` runs, each once.
pub fn report_all_commands() -> Vec<Command> {
    vec![
        Command::VerifySquare,
        Command::VerifyStar,
        Command::Peres { rays: None },
        Command::BellSet { rays: None },
        Command::BellModel { a0: None, a: None, n: None },
        Command::VonNeumann { n: None },
        Command::Spin1,
        Command::Ghz,
        Command::Marginals,
    ]
}

/// Runs independent suites on scoped threads; results keep the input order.
pub fn run_parallel(commands: &[Command], cfg: &RunConfig) -> Result<Vec<(SuiteReport, f64)>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = commands
            .iter()
            .map(|cmd| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let report = run_suite(cmd, cfg)?;
                    let ms = start.elapsed().as_secs_f64() * 1e3;
                    info!("{} finished in {ms:.1} ms", report.suite);
                    Ok((report, ms))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

pub fn run_suite(cmd: &Command, cfg: &RunConfig) -> Result<SuiteReport> {
    match cmd {
        Command::VerifySquare => {
            use Sign::{Minus as M, Plus as P};
            pauli_suite("verify-square", &magic_square_lines(), &[P, P, P, P, P, M])
        }
        Command::VerifyStar => {
            use Sign::{Minus as M, Plus as P};
            pauli_suite("verify-star", &star_lines(), &[P, P, P, P, M])
        }
        Command::Color { rayfile, expect } => color(rayfile, *expect, cfg),
        Command::Solve { contextfile, opaque, expect } => solve(contextfile, *opaque, *expect),
        Command::BellSet { rays } => bell_set(rays.as_deref(), cfg),
        Command::Peres { rays } => peres(rays.as_deref(), cfg),
        Command::BellModel { a0, a, n } => bell_model(*a0, *a, *n, cfg),
        Command::VonNeumann { n } => von_neumann(*n, cfg),
        Command::Spin1 => Ok(spin1(cfg)),
        Command::Ghz => ghz(),
        Command::Marginals => marginals(cfg),
        Command::ReportAll => anyhow::bail!("report-all is not a single suite"),
    }
}

fn sign_list(signs: &[Sign]) -> String {
    signs.iter().map(|s| if *s == Sign::Plus { "+" } else { "−" }).collect::<Vec<_>>().join(",")
}

fn pauli_suite(name: &str, lines: &[Line], expected: &[Sign]) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut line_data = Vec::new();
    let mut signs = Vec::new();
    let mut all_commute = true;
    for l in lines {
        let commute = mutually_commuting(&l.members)?;
        all_commute &= commute;
        let sign = set_product(&l.members)?.and_then(|p| p.identity_sign());
        if let Some(s) = sign {
            signs.push(s);
        }
        line_data.push(json!({ "name": l.name, "members": l.members, "commuting": commute, "product_sign": sign }));
    }
    checks.push(Verdict::new("contexts commute", all_commute, format!("{} lines mutually commuting", lines.len())));
    checks.push(Verdict::new(
        "line signs",
        signs == expected,
        format!("products ({}), expected ({})", sign_list(&signs), sign_list(expected)),
    ));

    let sys = build_from_pauli(&lines.iter().map(|l| l.members.clone()).collect::<Vec<_>>())?;
    let outcome = exhaustive_search(&sys)?;
    let space = 1u64 << sys.observables().len();
    checks.push(Verdict::new(
        "exhaustive search",
        matches!(outcome, SearchOutcome::Unsat { examined } if examined == space),
        match &outcome {
            SearchOutcome::Unsat { examined } => format!("UNSAT after {examined} assignments"),
            SearchOutcome::Satisfiable { examined, .. } => format!("satisfiable after {examined} assignments"),
        },
    ));
    let cert = parity_certificate(&sys);
    let all: Vec<usize> = (0..lines.len()).collect();
    checks.push(Verdict::new(
        "parity certificate",
        cert.as_ref().is_some_and(|c| c.verify(&sys) && c.contexts == all),
        match &cert {
            Some(c) => format!("contexts {:?} multiply to a contradiction", c.contexts),
            None => "no certificate".into(),
        },
    ));
    let data = json!({
        "lines": line_data,
        "observables": sys.observables(),
        "outcome": outcome,
        "certificate": cert.map(|c| c.contexts),
    });
    Ok(SuiteReport::new(name, checks, data))
}

fn coloring_data(inst: &ColoringInstance, out: &ColoringOutcome) -> serde_json::Value {
    let coloring = match out {
        ColoringOutcome::Colorable { coloring, .. } => Some(coloring.0.iter().map(|c| c.value()).collect::<Vec<_>>()),
        ColoringOutcome::Uncolorable { .. } => None,
    };
    json!({
        "mode": inst.mode(),
        "rays": inst.rays().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "triads": inst.triads(),
        "pairs": inst.pairs(),
        "verdict": if out.is_colorable() { "colorable" } else { "uncolorable" },
        "nodes": out.nodes(),
        "coloring": coloring,
    })
}

fn verdict_detail(inst: &ColoringInstance, out: &ColoringOutcome) -> String {
    format!(
        "{} rays, {} triads, {} pairs: {} after {} nodes",
        inst.rays().len(),
        inst.triads().len(),
        inst.pairs().len(),
        if out.is_colorable() { "COLORABLE" } else { "UNCOLORABLE" },
        out.nodes()
    )
}

fn color(path: &Path, expect: Option<ExpectColoring>, cfg: &RunConfig) -> Result<SuiteReport> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rays = parse_ray_file(&text).with_context(|| format!("parsing {}", path.display()))?;
    let inst = ColoringInstance::build(&rays, cfg.tolerance)?;
    let out = search_coloring(&inst);
    let valid = match &out {
        ColoringOutcome::Colorable { coloring, .. } => coloring.is_valid(&inst),
        ColoringOutcome::Uncolorable { .. } => true,
    };
    let mut checks = vec![Verdict::new("coloring search", valid, verdict_detail(&inst, &out))];
    if let Some(e) = expect {
        let got = if out.is_colorable() { ExpectColoring::Colorable } else { ExpectColoring::Uncolorable };
        checks.push(Verdict::new("expected verdict", got == e, format!("expected {e:?}, got {got:?}")));
    }
    Ok(SuiteReport::new("color", checks, coloring_data(&inst, &out)))
}

fn solve(path: &Path, opaque: bool, expect: Option<ExpectAssignment>) -> Result<SuiteReport> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let lines = parse_context_file(&text).with_context(|| format!("parsing {}", path.display()))?;
    let sys = system_from_context_lines(&lines, opaque).with_context(|| format!("in {}", path.display()))?;
    let cert = parity_certificate(&sys);
    let outcome = if sys.observables().len() <= MAX_EXHAUSTIVE { Some(exhaustive_search(&sys)?) } else { None };
    let unsat = cert.is_some();
    let mut checks = Vec::new();
    match &outcome {
        Some(o) => checks.push(Verdict::new(
            "search and certificate agree",
            o.is_unsat() == unsat && cert.as_ref().is_none_or(|c| c.verify(&sys)),
            match o {
                SearchOutcome::Unsat { examined } => format!("UNSAT after {examined} assignments"),
                SearchOutcome::Satisfiable { examined, .. } => format!("satisfiable after {examined} assignments"),
            },
        )),
        None => checks.push(Verdict::new(
            "parity elimination",
            cert.as_ref().is_none_or(|c| c.verify(&sys)),
            format!(
                "{} observables exceed the search cap; elimination says {}",
                sys.observables().len(),
                if unsat { "UNSAT" } else { "satisfiable" }
            ),
        )),
    }
    if let Some(e) = expect {
        let got = if unsat { ExpectAssignment::Unsat } else { ExpectAssignment::Satisfiable };
        checks.push(Verdict::new("expected verdict", got == e, format!("expected {e:?}, got {got:?}")));
    }
    let data = json!({
        "system": sys,
        "outcome": outcome,
        "certificate": cert.map(|c| c.contexts),
    });
    Ok(SuiteReport::new("solve", checks, data))
}

fn write_rays(path: Option<&Path>, rays: &[Ray]) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, write_ray_file(rays)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn bell_set(rays_out: Option<&Path>, cfg: &RunConfig) -> Result<SuiteReport> {
    let alpha = tan_22_5().to_f64();
    let gadget = bell_gadget(alpha, 2)?;
    let g = ColoringInstance::build(&gadget, cfg.tolerance)?;
    let z = g.index_of(&Ray::approx([0.0, 0.0, 1.0])?).context("gadget lacks z")?;
    let a = g.index_of(&Ray::approx([0.0, alpha, 1.0])?).context("gadget lacks a")?;
    let mut checks = Vec::new();
    let refuted: Vec<bool> = [(Color::Blue, Color::Red), (Color::Red, Color::Blue)]
        .iter()
        .map(|&(cz, ca)| !search_coloring_pinned(&g, &[(z, cz), (a, ca)]).is_colorable())
        .collect();
    checks.push(Verdict::new(
        "gadget forbids opposite colors",
        refuted.iter().all(|&r| r),
        format!("α = tan 22.5°, {} rays; (z blue, a red) and (z red, a blue) both refuted: {refuted:?}", g.rays().len()),
    ));

    let rays = bell_set_with(2, cfg.tolerance);
    write_rays(rays_out, &rays)?;
    let inst = ColoringInstance::build(&rays, cfg.tolerance)?;
    let ladder_present = ladder_rays().iter().all(|r| inst.index_of(&r.to_approx()).is_some());
    checks.push(Verdict::new("ladder included", ladder_present, "z to x in 22.5° steps"));
    let out = search_coloring(&inst);
    checks.push(Verdict::new("set is uncolorable", !out.is_colorable(), verdict_detail(&inst, &out)));
    let mut data = coloring_data(&inst, &out);
    data["alpha"] = json!(alpha);
    Ok(SuiteReport::new("bell-set", checks, data))
}

fn peres(rays_out: Option<&Path>, cfg: &RunConfig) -> Result<SuiteReport> {
    let rays = peres_33();
    write_rays(rays_out, &rays)?;
    let mut checks = Vec::new();
    let canonical = rays.iter().all(|r| r.mode() == Mode::Exact && r.canonical() == *r);
    checks.push(Verdict::new("33 exact canonical rays", rays.len() == 33 && canonical, format!("{} rays", rays.len())));
    let inst = ColoringInstance::build(&rays, cfg.tolerance)?;
    let out = search_coloring(&inst);
    checks.push(Verdict::new("set is uncolorable", !out.is_colorable(), verdict_detail(&inst, &out)));
    let triad_ok = match inst.triads().first() {
        Some(t) => search_coloring(&inst.restrict(t)?).is_colorable(),
        None => false,
    };
    checks.push(Verdict::new("single triad is colorable", triad_ok, "all rays but one triad removed"));
    let mut data = coloring_data(&inst, &out);
    data["labels"] = json!(inst.rays().iter().map(|r| r.label.clone()).collect::<Vec<_>>());
    Ok(SuiteReport::new("peres", checks, data))
}

fn normalized(what: &str, v: Vec3) -> Result<Vec3> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    anyhow::ensure!(n > 0.0, "{what} must be nonzero");
    if (n - 1.0).abs() > 1e-12 {
        warn!("{what} {v:?} has norm {n}; normalizing");
    }
    Ok(v.map(|x| x / n))
}

fn bell_model(a0: Option<f64>, a: Option<Vec3>, n: Option<Vec3>, cfg: &RunConfig) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pairs: Vec<(Observable2D, Vec3)> = if a0.is_some() || a.is_some() || n.is_some() {
        let n = match n {
            Some(v) => normalized("state direction", v)?,
            None => [0.0, 0.0, 1.0],
        };
        vec![(Observable2D::new(a0.unwrap_or(0.0), a.unwrap_or([0.0, 0.0, 1.0])), n)]
    } else {
        (0..BELL_MODEL_PAIRS)
            .map(|_| {
                let dir = uniform_on_sphere(&mut rng);
                let mag = rng.random_range(0.1..3.0);
                let obs = Observable2D::new(rng.random_range(-2.0..2.0), dir.map(|x| mag * x));
                (obs, uniform_on_sphere(&mut rng))
            })
            .collect()
    };
    let root_n = (cfg.samples as f64).sqrt();
    let mut rows = Vec::new();
    let mut all_within = true;
    let mut worst: f64 = 0.0;
    for (k, (obs, n)) in pairs.iter().enumerate() {
        let mean = mc_mean(obs, *n, cfg.samples, cfg.seed.wrapping_add(k as u64))?;
        let quantum = obs.quantum_mean(*n);
        let bound = 4.0 * obs.magnitude() / root_n;
        let err = (mean - quantum).abs();
        all_within &= err <= bound;
        if bound > 0.0 {
            worst = worst.max(err / bound);
        }
        rows.push(json!({ "a0": obs.a0, "a": obs.a, "n": n, "mean": mean, "quantum_mean": quantum, "error": err, "bound": bound }));
    }
    let mut checks = vec![Verdict::new(
        "means match quantum predictions",
        all_within,
        format!("{} pairs, N = {}, worst error {worst:.2} of 4|a|/√N", pairs.len(), cfg.samples),
    )];

    // Eigenstate: a along n, a0 = 0, so every sample must give +|a|.
    let (obs0, n0) = &pairs[0];
    let mag = if obs0.magnitude() > 0.0 { obs0.magnitude() } else { 1.0 };
    let eig_obs = Observable2D::new(0.0, n0.map(|x| mag * x));
    let [hits] = mc_estimate(*n0, cfg.samples, cfg.seed, |c| {
        value(&eig_obs, c).map(|v| [f64::from(u8::from(v == eig_obs.magnitude()))])
    })?;
    checks.push(Verdict::new(
        "eigenstate gives +|a|",
        hits.mean == 1.0,
        format!("fraction of samples equal to +|a|: {}", hits.mean),
    ));
    Ok(SuiteReport::new("bell-model", checks, json!({ "pairs": rows, "eigenstate_fraction": hits.mean })))
}

fn von_neumann(n: Option<Vec3>, cfg: &RunConfig) -> Result<SuiteReport> {
    let n = match n {
        Some(v) => normalized("state direction", v)?,
        None => uniform_on_sphere(&mut ChaCha8Rng::seed_from_u64(cfg.seed)),
    };
    let m = pauli_to_matrix(&"X".parse()?)?.add(&pauli_to_matrix(&"Y".parse()?)?);
    let e = eigen(&m)?;
    let r2 = std::f64::consts::SQRT_2;
    let mut checks = vec![Verdict::new(
        "eigenvalues of σx + σy",
        (e[0] + r2).abs() < EIGEN_TOL && (e[1] - r2).abs() < EIGEN_TOL,
        format!("{e:?}, expected ±√2"),
    )];
    let rep = von_neumann_demo(n, cfg.seed, cfg.samples)?;
    checks.push(Verdict::new(
        "values are not additive",
        rep.sum_in_allowed_set && rep.value_of_sum_is_pm_sqrt2 && !rep.additive_pointwise,
        format!("v(σx) + v(σy) = {} but v(σx + σy) = {}", rep.v_x_plus_v_y, rep.v_of_sum),
    ));
    let (sx, sy) = (Observable2D::sigma_x(), Observable2D::sigma_y());
    let [in_set] = mc_estimate(n, cfg.samples, cfg.seed, |c| {
        let s = value(&sx, c)? + value(&sy, c)?;
        Some([f64::from(u8::from([-2.0, 0.0, 2.0].contains(&s)))])
    })?;
    checks.push(Verdict::new(
        "sampled sums lie in {−2, 0, 2}",
        in_set.mean == 1.0,
        format!("fraction in set: {}", in_set.mean),
    ));
    checks.push(Verdict::new(
        "means are additive",
        rep.means_additive,
        format!("gap {:.3e} within 4σ = {:.3e}", rep.additivity_gap, rep.gap_tolerance),
    ));
    Ok(SuiteReport::new("von-neumann", checks, serde_json::to_value(&rep)?))
}

fn spin1(cfg: &RunConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut sum_dev, mut comm): (f64, f64) = (0.0, 0.0);
    let mut spectrum_ok = true;
    for _ in 0..SPIN1_TRIADS {
        let triad = random_rotation(&mut rng);
        let c = spin1_triad_check(triad).expect("unit directions");
        sum_dev = sum_dev.max(c.sum_deviation);
        comm = comm.max(c.max_commutator);
        let e = eigen(&spin1_squared(triad[0]).expect("unit direction")).expect("hermitian");
        spectrum_ok &= e.iter().zip([0.0, 1.0, 1.0]).all(|(g, w)| (g - w).abs() < MATRIX_TOL);
    }
    let checks = vec![
        Verdict::new("S_u² + S_v² + S_w² = 2", sum_dev < MATRIX_TOL, format!("max deviation {sum_dev:.2e} over {SPIN1_TRIADS} triads")),
        Verdict::new("squares commute", comm < MATRIX_TOL, format!("max commutator norm {comm:.2e}")),
        Verdict::new("S_u² has spectrum {0, 1, 1}", spectrum_ok, "eigenvalues checked on every triad"),
    ];
    SuiteReport::new("spin1", checks, json!({ "triads": SPIN1_TRIADS, "max_sum_deviation": sum_dev, "max_commutator": comm }))
}

fn ghz() -> Result<SuiteReport> {
    let c = ghz_contradiction()?;
    let residual = c.eigen.iter().map(|e| e.residual).fold(0.0, f64::max);
    let signs: Vec<Sign> = c.eigen.iter().map(|e| e.sign).collect();
    let mut checks = vec![
        Verdict::new("GHZ is a joint eigenstate", residual < MATRIX_TOL, format!("max residual {residual:.2e}")),
        Verdict::new(
            "eigenvalue product is −1",
            c.eigenvalue_product == Sign::Minus,
            format!("eigenvalues ({}) of XXX, YYX, YXY, XYY", sign_list(&signs)),
        ),
    ];
    checks.push(Verdict::new(
        "local assignment is impossible",
        matches!(c.outcome, SearchOutcome::Unsat { examined: 64 }),
        match &c.outcome {
            SearchOutcome::Unsat { examined } => format!("UNSAT over {examined} assignments of the six local values"),
            SearchOutcome::Satisfiable { .. } => "satisfiable".into(),
        },
    ));
    let all: Vec<usize> = (0..c.system.contexts().len()).collect();
    checks.push(Verdict::new(
        "parity certificate",
        c.certificate.as_ref() == Some(&all),
        format!("contexts {:?}", c.certificate.as_deref().unwrap_or_default()),
    ));
    checks.push(Verdict::new(
        "each single flip is satisfiable",
        c.flipped_satisfiable.iter().all(|&s| s),
        format!("{:?}", c.flipped_satisfiable),
    ));
    Ok(SuiteReport::new("ghz", checks, serde_json::to_value(&c)?))
}

fn marginals(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    let mut max_tv = serde_json::Map::new();
    for dim in [4, 8] {
        let mut worst: f64 = 0.0;
        for _ in 0..MARGINAL_INSTANCES {
            let inst = random_marginal_instance(dim, &mut rng)?;
            worst = worst.max(marginal_invariance(&inst.state, &inst.a, &inst.ctx1, &inst.ctx2)?);
        }
        checks.push(Verdict::new(
            format!("marginals agree in dimension {dim}"),
            worst < MARGINAL_TOL,
            format!("max total-variation distance {worst:.2e} over {MARGINAL_INSTANCES} instances"),
        ));
        max_tv.insert(dim.to_string(), json!(worst));
    }
    let mut spectra = std::collections::BTreeSet::new();
    let mut holds = true;
    let mut residual: f64 = 0.0;
    for _ in 0..ENCODING_ORIENTATIONS {
        let [a, b, c] = random_rotation(&mut rng).map(|u| spin1_squared(u).expect("unit direction"));
        let chk = binary_encoding_check(&a, &b, &c)?;
        holds &= chk.holds;
        residual = residual.max(chk.max_residual);
        spectra.extend(chk.spectrum);
    }
    checks.push(Verdict::new(
        "4A + 2B + C encodes A, B, C",
        holds && spectra.iter().all(|s| [3, 5, 6].contains(s)),
        format!("{ENCODING_ORIENTATIONS} orientations, spectrum {spectra:?}, max residual {residual:.2e}"),
    ));
    let data = json!({ "max_tv_distance": max_tv, "encoding_spectrum": spectra, "encoding_max_residual": residual });
    Ok(SuiteReport::new("marginals", checks, data))
}
