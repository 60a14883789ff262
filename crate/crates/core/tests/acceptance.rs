//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

use std::time::{Duration, Instant};

use nogo::assign::{build_from_pauli, exhaustive_search, parity_certificate, SearchOutcome};
use nogo::bell2d::{mc_estimate, mc_mean, uniform_on_sphere, value, von_neumann_demo, Observable2D};
use nogo::ks::{
    bell_gadget, bell_uncolorable_set, peres_33, search_coloring, search_coloring_pinned, Color, ColoringInstance,
    Mode, Ray, DEFAULT_TOLERANCE,
};
use nogo::ks::construct::{ladder_rays, tan_22_5};
use nogo::pauli::{magic_square_lines, mutually_commuting, set_product, star_lines, Line};
use nogo::qverify::{
    binary_encoding_check, eigen, ghz_contradiction, ghz_eigenvalues, marginal_invariance, pauli_to_matrix,
    random_marginal_instance, random_rotation, spin1_squared, spin1_triad_check,
};
use nogo::Sign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn line_signs(lines: &[Line]) -> Result<Vec<Sign>, String> {
    lines
        .iter()
        .map(|l| {
            ensure(mutually_commuting(&l.members).map_err(|e| e.to_string())?, format!("{} not commuting", l.name))?;
            set_product(&l.members)
                .map_err(|e| e.to_string())?
                .and_then(|p| p.identity_sign())
                .ok_or_else(|| format!("{} product is not ±I", l.name))
        })
        .collect()
}

fn contradiction(lines: &[Line], expected_signs: &[Sign], assignments: u64) -> Check {
    let signs = line_signs(lines)?;
    ensure(signs == expected_signs, format!("line signs {signs:?}"))?;
    let sys = build_from_pauli(&lines.iter().map(|l| l.members.clone()).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
    match exhaustive_search(&sys).map_err(|e| e.to_string())? {
        SearchOutcome::Unsat { examined } if examined == assignments => {}
        other => return Err(format!("search: {other:?}")),
    }
    let cert = parity_certificate(&sys).ok_or("no parity certificate")?;
    ensure(cert.verify(&sys), "certificate does not verify")?;
    let all: Vec<usize> = (0..lines.len()).collect();
    ensure(cert.contexts == all, format!("certificate {:?}", cert.contexts))?;
    Ok(format!("{} lines commute, UNSAT after {assignments}, certificate uses all contexts", lines.len()))
}

fn criterion_1() -> Check {
    use Sign::{Minus as M, Plus as P};
    contradiction(&magic_square_lines(), &[P, P, P, P, P, M], 512)
}

fn criterion_2() -> Check {
    use Sign::{Minus as M, Plus as P};
    contradiction(&star_lines(), &[P, P, P, P, M], 1024)
}

fn criterion_3() -> Check {
    let rays = peres_33();
    ensure(rays.len() == 33, format!("{} rays", rays.len()))?;
    ensure(rays.iter().all(|r| r.mode() == Mode::Exact && r.canonical() == *r), "rays not canonical exact")?;
    let inst = ColoringInstance::build(&rays, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    ensure(inst.rays().len() == 33, "duplicate rays")?;
    let out = search_coloring(&inst);
    ensure(!out.is_colorable(), "Peres set colorable")?;
    let triad = inst.triads()[0];
    let sub = inst.restrict(&triad).map_err(|e| e.to_string())?;
    ensure(search_coloring(&sub).is_colorable(), "single triad uncolorable")?;
    Ok(format!("33 exact rays, {} triads, UNCOLORABLE in {} nodes; one triad colorable", inst.triads().len(), out.nodes()))
}

fn criterion_4() -> Check {
    let alpha = tan_22_5().to_f64();
    ensure((alpha - (2f64.sqrt() - 1.0)).abs() < 1e-15, "alpha")?;
    let gadget = bell_gadget(alpha, 2).map_err(|e| e.to_string())?;
    let g = ColoringInstance::build(&gadget, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    let idx = |v: [f64; 3]| g.index_of(&Ray::approx(v).unwrap()).ok_or("gadget lacks z or a");
    let (z, a) = (idx([0.0, 0.0, 1.0])?, idx([0.0, alpha, 1.0])?);
    for (cz, ca) in [(Color::Blue, Color::Red), (Color::Red, Color::Blue)] {
        ensure(!search_coloring_pinned(&g, &[(z, cz), (a, ca)]).is_colorable(), format!("z {cz:?}, a {ca:?} colorable"))?;
    }
    ensure(search_coloring(&g).is_colorable(), "gadget alone uncolorable")?;

    let set = bell_uncolorable_set();
    let inst = ColoringInstance::build(&set, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    for r in ladder_rays() {
        ensure(inst.index_of(&r.to_approx()).is_some(), "ladder ray missing")?;
    }
    let out = search_coloring(&inst);
    ensure(!out.is_colorable(), "Bell set colorable")?;
    Ok(format!(
        "gadget refutes both opposite pinnings; {} rays UNCOLORABLE in {} nodes",
        inst.rays().len(),
        out.nodes()
    ))
}

fn criterion_5() -> Check {
    const N: u64 = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe11);
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let dir = uniform_on_sphere(&mut rng);
        let mag = rng.random_range(0.1..3.0);
        let obs = Observable2D::new(rng.random_range(-2.0..2.0), dir.map(|x| mag * x));
        let n = uniform_on_sphere(&mut rng);
        let mean = mc_mean(&obs, n, N, k).map_err(|e| e.to_string())?;
        let err = (mean - obs.quantum_mean(n)).abs();
        let tol = 4.0 * obs.magnitude() / (N as f64).sqrt();
        ensure(err <= tol, format!("pair {k}: |Δ| = {err:e} > {tol:e}"))?;
        worst = worst.max(err / tol);
    }
    let n = [0.48, -0.6, 0.64];
    let obs = Observable2D::new(0.0, n.map(|x| 2.5 * x));
    let [hits] = mc_estimate(n, N, 1, |cfg| value(&obs, cfg).map(|v| [f64::from(u8::from(v == obs.magnitude()))]))
        .map_err(|e| e.to_string())?;
    ensure(hits.mean == 1.0, format!("eigenstate fraction {}", hits.mean))?;
    Ok(format!("10 pairs within 4|a|/sqrt(N) (worst {worst:.2} of bound); eigenstate gives +|a| on all {N} samples"))
}

fn criterion_6() -> Check {
    let m = pauli_to_matrix(&"X".parse().unwrap()).unwrap().add(&pauli_to_matrix(&"Y".parse().unwrap()).unwrap());
    let e = eigen(&m).map_err(|e| e.to_string())?;
    let r2 = 2f64.sqrt();
    ensure((e[0] + r2).abs() < 1e-10 && (e[1] - r2).abs() < 1e-10, format!("eigenvalues {e:?}"))?;

    let (sx, sy) = (Observable2D::sigma_x(), Observable2D::sigma_y());
    let n = [0.0, 0.6, 0.8];
    let [ok] = mc_estimate(n, 1_000_000, 2, |cfg| {
        let s = value(&sx, cfg)? + value(&sy, cfg)?;
        Some([f64::from(u8::from([-2.0, 0.0, 2.0].contains(&s)))])
    })
    .map_err(|e| e.to_string())?;
    ensure(ok.mean == 1.0, "sampled v(σx)+v(σy) outside {−2, 0, 2}")?;

    let rep = von_neumann_demo(n, 3, 1_000_000).map_err(|e| e.to_string())?;
    ensure(rep.sum_in_allowed_set && rep.value_of_sum_is_pm_sqrt2 && !rep.additive_pointwise, "pointwise demo")?;
    ensure(rep.means_additive, format!("gap {:e} > {:e}", rep.additivity_gap, rep.gap_tolerance))?;
    Ok(format!(
        "eig = ±√2; sums in {{−2,0,2}}; mean gap {:.2e} within 4σ = {:.2e}",
        rep.additivity_gap, rep.gap_tolerance
    ))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5);
    let (mut sum_dev, mut comm): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let c = spin1_triad_check(random_rotation(&mut rng)).map_err(|e| e.to_string())?;
        sum_dev = sum_dev.max(c.sum_deviation);
        comm = comm.max(c.max_commutator);
    }
    ensure(sum_dev < 1e-12 && comm < 1e-12, format!("max deviation {sum_dev:e}, commutator {comm:e}"))?;
    Ok(format!("100 triads: max ‖ΣS²−2I‖ = {sum_dev:.1e}, max commutator = {comm:.1e}"))
}

fn criterion_8() -> Check {
    let eig = ghz_eigenvalues();
    ensure(eig.len() == 4, "expected four observables")?;
    ensure(eig.iter().all(|e| e.residual < 1e-12), "eigen-residual too large")?;
    let signs: Vec<Sign> = eig.iter().map(|e| e.sign).collect();
    ensure(signs == [Sign::Plus, Sign::Minus, Sign::Minus, Sign::Minus], format!("signs {signs:?}"))?;
    let product = Sign::product(signs);
    ensure(product == Sign::Minus, "eigenvalue product is not −1")?;
    let c = ghz_contradiction().map_err(|e| e.to_string())?;
    ensure(matches!(c.outcome, SearchOutcome::Unsat { examined: 64 }), format!("{:?}", c.outcome))?;
    ensure(c.flipped_satisfiable.iter().all(|&s| s) && c.flipped_satisfiable.len() == 4, "a flipped system is UNSAT")?;
    Ok("eigenvalues (+1,−1,−1,−1), product −1; UNSAT over 64; every single flip satisfiable".into())
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9);
    let mut worst: f64 = 0.0;
    for dim in [4, 8] {
        for _ in 0..50 {
            let inst = random_marginal_instance(dim, &mut rng).map_err(|e| e.to_string())?;
            let tv = marginal_invariance(&inst.state, &inst.a, &inst.ctx1, &inst.ctx2).map_err(|e| e.to_string())?;
            worst = worst.max(tv);
        }
    }
    ensure(worst < 1e-10, format!("max TV distance {worst:e}"))?;
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..20 {
        let [a, b, c] = random_rotation(&mut rng).map(|u| spin1_squared(u).unwrap());
        let chk = binary_encoding_check(&a, &b, &c).map_err(|e| e.to_string())?;
        ensure(chk.holds, format!("encoding fails: {chk:?}"))?;
        seen.extend(chk.spectrum);
    }
    ensure(seen.iter().all(|s| [3, 5, 6].contains(s)), format!("spectrum {seen:?}"))?;
    Ok(format!("100 instances, max TV = {worst:.1e}; 20 orientations encode, spectrum {seen:?}"))
}

fn main() {
    let criteria: [(fn() -> Check, Option<Duration>, &str); 9] = [
        (criterion_1, Some(Duration::from_secs(1)), "magic square"),
        (criterion_2, Some(Duration::from_secs(1)), "star"),
        (criterion_3, Some(Duration::from_secs(10)), "Peres 33 rays"),
        (criterion_4, Some(Duration::from_secs(60)), "22.5° ladder with gadgets"),
        (criterion_5, Some(Duration::from_secs(30)), "2D hidden-variable model"),
        (criterion_6, None, "additivity counterexample"),
        (criterion_7, None, "spin-1 sum rule"),
        (criterion_8, None, "GHZ"),
        (criterion_9, None, "marginal invariance and binary encoding"),
    ];
    let mut failed = 0;
    for (i, (run, limit, name)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&result, limit) {
            if elapsed > *limit {
                result = Err(format!("took {elapsed:?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(msg) => println!("[PASS] criterion {} ({name}): {msg} [{elapsed:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] criterion {} ({name}): {msg} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
