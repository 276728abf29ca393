//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cvtele::circuit::presets::{
    build_ao_classical, build_ao_quantum, build_composite_amplifier, build_eo_classical,
};
use cvtele::circuit::Circuit;
use cvtele::dsl;
use cvtele::fock::verify::{run_grid, VerifyGrid, ORACLE_TOL};
use cvtele::fock::DEFAULT_TAIL_THRESHOLD;
use cvtele::metrics::{teleport_report, ReportOptions, TeleportReport};
use cvtele::mode::stats::{joint_stats, SEPARABLE_LIMIT};
use cvtele::mode::BogoliubovMode;
use num_complex::Complex64;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Largest deviation of `mode` from the listed (label, α, β) coefficients; unlisted entries must vanish.
fn deviation(mode: &BogoliubovMode, circuit: &Circuit, expected: &[(&str, Complex64, Complex64)]) -> f64 {
    let basis = circuit.basis();
    let mut worst = mode.displacement.norm();
    for i in 0..basis.len() {
        let (a, b) = expected
            .iter()
            .find(|e| e.0 == basis.label(i))
            .map_or((c(0.0, 0.0), c(0.0, 0.0)), |e| (e.1, e.2));
        let k = mode.coeff(i);
        worst = worst.max((k.alpha - a).norm()).max((k.beta - b).norm());
    }
    worst
}

fn report(circuit: &Circuit) -> TeleportReport {
    teleport_report(&circuit.run().unwrap(), &ReportOptions::default())
}

fn eo_identity() -> Outcome {
    let start = Instant::now();
    let circuit = build_eo_classical(1.0, 1.0).unwrap();
    let run = circuit.run().unwrap();
    let elapsed = start.elapsed();
    let dev = deviation(
        run.output(),
        &circuit,
        &[("a_in", c(1.0, 0.0), c(0.0, 0.0)), ("v1", c(0.0, 0.0), c(1.0, 0.0)), ("v2", c(-1.0, 0.0), c(0.0, 0.0))],
    );
    ensure(dev <= 1e-12, || format!("coefficient deviation {dev:e}"))?;
    ensure(elapsed < Duration::from_millis(1), || format!("took {elapsed:?}"))?;
    Ok(format!("deviation {dev:e}, {elapsed:?}"))
}

fn ao_classical_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for g in [1.5, 2.0, 10.0, 1e4] {
        let circuit = build_ao_classical(g).unwrap();
        let run = circuit.run().unwrap();
        let s = ((g - 1.0) / g).sqrt();
        let dev = deviation(
            run.output(),
            &circuit,
            &[("a_in", c(1.0, 0.0), c(0.0, 0.0)), ("v1", c(0.0, 0.0), c(s, 0.0)), ("v2", c(-s, 0.0), c(0.0, 0.0))],
        );
        let r = report(&circuit);
        let noise = 2.0 * (g - 1.0) / g;
        let err = (r.added_noise_plus - noise).abs().max((r.added_noise_minus - noise).abs());
        ensure(dev <= 1e-12 && err <= 1e-12, || format!("G={g}: deviation {dev:e}, noise error {err:e}"))?;
        worst = worst.max(dev).max(err);
        if g == 1e4 {
            let gap = 2.0 - r.added_noise_plus;
            ensure(gap <= 2e-4, || format!("G=1e4 noise {} too far from 2", r.added_noise_plus))?;
        }
    }
    Ok(format!("worst error {worst:e}"))
}

fn quantum_limit() -> Outcome {
    let g = 1e6;
    let closed = |h: f64| 2.0 * (h.sqrt() - (h - 1.0).sqrt()).powi(2) * (g - 1.0) / g;
    let start = Instant::now();
    let mut noises = Vec::new();
    for h in [1.0, 4.0, 25.0, 100.0] {
        let r = report(&build_ao_quantum(g, h, false).unwrap());
        for n in [r.added_noise_plus, r.added_noise_minus] {
            ensure((n - closed(h)).abs() <= 1e-9, || format!("H={h}: noise {n} vs {}", closed(h)))?;
        }
        noises.push(r.added_noise_plus);
    }
    let top = report(&build_ao_quantum(g, 1e6, false).unwrap());
    let elapsed = start.elapsed();
    ensure(noises.windows(2).all(|w| w[1] < w[0]), || format!("not decreasing: {noises:?}"))?;
    ensure((noises[0] - 2.0).abs() < 1e-5, || format!("H=1 noise {}", noises[0]))?;
    ensure(top.added_noise_plus < 1e-5 && top.added_noise_minus < 1e-5, || {
        format!("H=1e6 noise {}", top.added_noise_plus)
    })?;
    ensure(top.fidelity > 0.999999, || format!("H=1e6 fidelity {}", top.fidelity))?;
    ensure(elapsed < Duration::from_millis(10), || format!("took {elapsed:?}"))?;
    Ok(format!("noise {noises:.6?}, F(H=1e6) = {:.9}, {elapsed:?}", top.fidelity))
}

fn h_one_degenerates() -> Outcome {
    let mut worst: f64 = 0.0;
    for g in [2.0, 100.0] {
        let classical = build_ao_classical(g).unwrap();
        let c_run = classical.run().unwrap();
        for composite in [false, true] {
            let quantum = build_ao_quantum(g, 1.0, composite).unwrap();
            ensure(quantum.basis() == classical.basis(), || "bases differ".into())?;
            let dev = quantum.run().unwrap().output().max_abs_diff(c_run.output());
            ensure(dev <= 1e-12, || format!("G={g} composite={composite}: {dev:e}"))?;
            worst = worst.max(dev);
        }
    }
    Ok(format!("worst deviation {worst:e}"))
}

fn composite_amplifier() -> Outcome {
    let mut worst: f64 = 0.0;
    for g in [1.0, 1.5, 2.0, 10.0] {
        let circuit = build_composite_amplifier(g).unwrap();
        let run = circuit.run().unwrap();
        let dev = deviation(
            run.output(),
            &circuit,
            &[("a_in", c(g.sqrt(), 0.0), c(0.0, 0.0)), ("b1", c(0.0, 0.0), c((g - 1.0).sqrt(), 0.0))],
        );
        ensure(dev <= 1e-12, || format!("G={g}: deviation {dev:e}"))?;
        let e = run.mode("e").ok_or("discarded beam e missing")?;
        ensure(circuit.discarded().iter().any(|d| d == "e"), || "e not discarded".into())?;
        ensure((e.commutator_norm() - 1.0).abs() <= 1e-12, || {
            format!("G={g}: e commutator {}", e.commutator_norm())
        })?;
        worst = worst.max(dev);
    }
    Ok(format!("worst deviation {worst:e}"))
}

fn classical_bound() -> Outcome {
    // the all-optical route is only classical for G ≫ 1, where F - 1/2 ≈ 1/(4G)
    let schemes = [
        ("eo-classical", build_eo_classical(1.0, 1.0).unwrap()),
        ("ao-classical G=1e10", build_ao_classical(1e10).unwrap()),
    ];
    for (name, circuit) in &schemes {
        for alpha in [c(0.0, 0.0), c(1.0, 0.0), c(0.3, -0.7)] {
            let r = report(&circuit.clone().with_signal_displacement(alpha));
            ensure((r.signal_gain - 1.0).abs() <= 1e-9, || format!("{name}: gain {}", r.signal_gain))?;
            ensure((r.fidelity - 0.5).abs() <= 1e-9, || format!("{name} α={alpha}: F = {}", r.fidelity))?;
        }
    }
    let mut lowest = f64::INFINITY;
    for h in [1.0 + 1e-8, 1.0001, 1.01, 1.2, 2.0, 4.0, 25.0, 100.0, 1e6] {
        let f = report(&build_ao_quantum(1e6, h, false).unwrap()).fidelity;
        ensure(f > 0.5, || format!("quantum H={h}: F = {f}"))?;
        lowest = lowest.min(f);
    }
    Ok(format!("quantum F ≥ {lowest:.9} for H > 1"))
}

fn epr_correlation() -> Outcome {
    let pair = |h: f64| {
        let run = build_ao_quantum(2.0, h, false).unwrap().run().unwrap();
        joint_stats(run.mode("b1").unwrap(), run.mode("b2").unwrap())
    };
    let mut worst: f64 = 0.0;
    for h in [1.0, 1.2, 4.0, 100.0] {
        let j = pair(h);
        let want = 2.0 * (h.sqrt() - (h - 1.0).sqrt()).powi(2);
        let err = (j.diff_plus_variance() - want).abs().max((j.sum_minus_variance() - want).abs());
        ensure(err <= 1e-12, || format!("H={h}: error {err:e}"))?;
        worst = worst.max(err);
    }
    for h in [1.0 + 1e-9, 1.001, 1.5, 10.0, 1e4, 1e8] {
        let j = pair(h);
        ensure(j.diff_plus_variance() < SEPARABLE_LIMIT && j.sum_minus_variance() < SEPARABLE_LIMIT, || {
            format!("H={h}: not below {SEPARABLE_LIMIT}")
        })?;
    }
    Ok(format!("worst error {worst:e}"))
}

fn commutator_preservation() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut modes = 0;
    for seed in 0..1000 {
        let rc = common::random_circuit(seed);
        let run = rc.circuit.run().map_err(|e| format!("seed {seed}: {e}"))?;
        for (name, mode) in &run.modes {
            if rc.classical.contains(name) {
                continue;
            }
            let dev = (mode.commutator_norm() - 1.0).abs();
            ensure(dev <= 1e-10, || format!("seed {seed} mode {name}: {dev:e}"))?;
            worst = worst.max(dev);
            modes += 1;
        }
    }
    Ok(format!("{modes} modes, worst {worst:e}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let checks = run_grid(&VerifyGrid::default(), DEFAULT_TAIL_THRESHOLD).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let refused = checks.iter().filter(|c| c.oracle.is_err()).count();
    let failed = checks.iter().filter(|c| c.oracle.is_ok() && !c.passed()).count();
    let worst = checks.iter().filter_map(|c| c.abs_error()).fold(0.0, f64::max);
    let summary = format!(
        "{} checks, {failed} failed, {refused} refused (tail mass above {DEFAULT_TAIL_THRESHOLD:e}), worst trusted error {worst:e}, {elapsed:.1?}",
        checks.len()
    );
    let ok = failed == 0 && refused == 0 && worst <= ORACLE_TOL && elapsed < Duration::from_secs(60);
    if ok {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn dsl_round_trip() -> Outcome {
    for seed in 0..500 {
        let circuit = common::random_circuit(seed).circuit;
        let back = dsl::parse(&dsl::format(&circuit)).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == circuit, || format!("seed {seed}: round trip differs"))?;
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("circuits");
    let presets = [
        ("eo_classical.qot", build_eo_classical(1.0, 1.0).unwrap()),
        ("ao_classical.qot", build_ao_classical(100.0).unwrap()),
        ("ao_quantum.qot", build_ao_quantum(100.0, 4.0, false).unwrap()),
        ("ao_quantum_composite.qot", build_ao_quantum(100.0, 4.0, true).unwrap()),
        ("composite_amplifier.qot", build_composite_amplifier(2.0).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    for (file, built) in &presets {
        let text = fs::read_to_string(dir.join(file)).map_err(|e| format!("{file}: {e}"))?;
        let parsed = dsl::parse(&text).map_err(|e| format!("{file}: {e}"))?;
        ensure(parsed.basis() == built.basis() && parsed.output() == built.output(), || {
            format!("{file}: structure differs")
        })?;
        let (p, b) = (parsed.run().unwrap(), built.run().unwrap());
        for (label, mode) in &b.modes {
            let dev = p.mode(label).map_or(f64::INFINITY, |m| m.max_abs_diff(mode));
            ensure(dev <= 1e-12, || format!("{file} {label}: {dev:e}"))?;
            worst = worst.max(dev);
        }
    }
    Ok(format!("500 circuits, {} presets, worst preset deviation {worst:e}", presets.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("electro-optic identity", eo_identity),
        ("all-optical classical identity", ao_classical_identity),
        ("quantum-scheme limit", quantum_limit),
        ("H = 1 degeneration", h_one_degenerates),
        ("composite amplifier equivalence", composite_amplifier),
        ("classical fidelity bound", classical_bound),
        ("EPR correlation", epr_correlation),
        ("commutator preservation", commutator_preservation),
        ("oracle equivalence", oracle_equivalence),
        ("DSL round trip", dsl_round_trip),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
