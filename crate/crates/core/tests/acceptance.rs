//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use qdce::analytic::{hv_intensity, hv_monte_carlo, visibility};
use qdce::circuit::Scheme;
use qdce::experiment::{
    alpha_grid, compare_qm_hv, periodic_phi_grid, phi_grid, run_sweep, IntensityRecord, Mode, NoiseModel, SweepConfig,
};
use qdce::io::{comparison_report, load_noise, records_to_csv};
use qdce::quantum::{Complex64, DensityMatrix, GateOp, Projector, StateVector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

// Independent closed forms.

fn single_e0(alpha: f64, phi: f64) -> f64 {
    let c = alpha.cos();
    let s = alpha.sin();
    let w = (phi / 2.0).cos();
    c * c / 2.0 + s * s * w * w
}

fn hv_e0(phi: f64) -> f64 {
    let w = (phi / 2.0).cos();
    0.25 + w * w / 2.0
}

fn grid_sweep(scheme: Scheme, alphas: Vec<f64>, phis: Vec<f64>) -> SweepConfig {
    let mut c = SweepConfig::new(scheme);
    c.alpha_values = alphas;
    c.phi_values = phis;
    c
}

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond { Ok(ok) } else { Err(bad) }
}

fn single_ancilla_equivalence() -> Outcome {
    let config = grid_sweep(Scheme::Qdce, alpha_grid(16), phi_grid(64));
    let start = Instant::now();
    let records = run_sweep(&config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let worst = records
        .iter()
        .map(|r| (r.e0 - single_e0(r.alpha, r.phi)).abs())
        .fold(0.0, f64::max);
    check(
        records.len() == 1024 && worst <= 1e-10 && elapsed <= Duration::from_secs(1),
        format!("1024 points, max err {worst:.2e}, {elapsed:.2?}"),
        format!("{} points, max err {worst:.2e} (limit 1e-10), {elapsed:.2?} (limit 1 s)", records.len()),
    )
}

fn extreme_cases() -> Outcome {
    let config = grid_sweep(Scheme::Qdce, vec![0.0, FRAC_PI_2], phi_grid(64));
    let records = run_sweep(&config).map_err(|e| e.to_string())?;
    let mut flat = 0.0f64;
    let mut wave = 0.0f64;
    for r in &records {
        if r.alpha == 0.0 {
            flat = flat.max((r.e0 - 0.5).abs());
        } else {
            wave = wave.max((r.e0 - (r.phi / 2.0).cos().powi(2)).abs());
        }
    }
    check(
        flat <= 1e-12 && wave <= 1e-12,
        format!("α=0 dev {flat:.2e}, α=π/2 dev {wave:.2e}"),
        format!("α=0 dev {flat:.2e}, α=π/2 dev {wave:.2e} (limit 1e-12)"),
    )
}

fn visibility_curve() -> Outcome {
    let config = grid_sweep(Scheme::Qdce, alpha_grid(9), periodic_phi_grid(256));
    let records = run_sweep(&config).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut ends = (f64::NAN, f64::NAN);
    for &alpha in &config.alpha_values {
        let curve: Vec<(f64, f64)> = records.iter().filter(|r| r.alpha == alpha).map(|r| (r.phi, r.e0)).collect();
        let v = visibility(&curve).map_err(|e| e.to_string())?;
        worst = worst.max((v - alpha.sin().powi(2)).abs());
        if alpha == 0.0 {
            ends.0 = v;
        }
        if alpha == FRAC_PI_2 {
            ends.1 = v;
        }
    }
    check(
        worst <= 1e-6 && ends.0.abs() <= 1e-9 && (ends.1 - 1.0).abs() <= 1e-9,
        format!("max |V - sin²α| {worst:.2e}, V(0)={:.1e}, V(π/2)=1-{:.1e}", ends.0, 1.0 - ends.1),
        format!("max |V - sin²α| {worst:.2e}, V(0)={}, V(π/2)={}", ends.0, ends.1),
    )
}

fn ea_branch_structure() -> Outcome {
    let config = grid_sweep(Scheme::EaQdce, alpha_grid(16), phi_grid(64));
    let records = run_sweep(&config).map_err(|e| e.to_string())?;
    let find = |a: f64, p: f64, b: u8| {
        records
            .iter()
            .find(|r| r.alpha == a && r.phi == p && r.branch == Some(b))
            .expect("both branches present")
    };
    let mut shape = 0.0f64;
    let mut swap = 0.0f64;
    let mut total = 0.0f64;
    for &phi in &config.phi_values {
        let wave = (phi / 2.0).cos().powi(2);
        shape = shape.max((find(0.0, phi, 0).e0 - 0.5).abs());
        shape = shape.max((find(0.0, phi, 1).e0 - wave).abs());
        swap = swap.max((find(FRAC_PI_2, phi, 0).e0 - wave).abs());
        swap = swap.max((find(FRAC_PI_2, phi, 1).e0 - 0.5).abs());
        for &alpha in &config.alpha_values {
            let p = find(alpha, phi, 0).branch_prob.unwrap() + find(alpha, phi, 1).branch_prob.unwrap();
            total = total.max((p - 1.0).abs());
        }
    }
    check(
        shape <= 1e-10 && swap <= 1e-10 && total <= 1e-12,
        format!("α=0 branch dev {shape:.2e}, swapped at π/2 dev {swap:.2e}, Σp dev {total:.2e}"),
        format!("α=0 branch dev {shape:.2e}, π/2 swap dev {swap:.2e} (limit 1e-10), Σp dev {total:.2e} (limit 1e-12)"),
    )
}

fn hv_model() -> Outcome {
    let exact = hv_intensity(0.0) == 0.75 && hv_intensity(PI) == 0.25;
    let n = 1_000_000u64;
    let start = Instant::now();
    let mut worst_z = 0.0f64;
    for (k, phi) in periodic_phi_grid(8).into_iter().enumerate() {
        let p = hv_e0(phi);
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let est = hv_monte_carlo(phi, n, 1000 + k as u64).map_err(|e| e.to_string())?;
        worst_z = worst_z.max((est - p).abs() / sigma);
    }
    let elapsed = start.elapsed();
    check(
        exact && worst_z <= 5.0 && elapsed <= Duration::from_secs(5),
        format!("closed form exact, max |z| {worst_z:.2} over 8 phases, {elapsed:.2?}"),
        format!("closed form exact: {exact}, max |z| {worst_z:.2} (limit 5), {elapsed:.2?} (limit 5 s)"),
    )
}

fn qm_hv_incompatibility() -> Outcome {
    let alphas = alpha_grid(9);
    let c = compare_qm_hv(&alphas, &phi_grid(64)).map_err(|e| e.to_string())?;
    let reference = c.curve(0.0, 0, true);
    let hv_same = alphas.iter().all(|&a| {
        (0..2).all(|b| {
            let curve = c.curve(a, b, true);
            curve.len() == reference.len()
                && curve.iter().zip(&reference).all(|(x, y)| x.1.to_bits() == y.1.to_bits())
        })
    });
    let hv_matches = reference.iter().all(|&(p, v)| (v - hv_e0(p)).abs() <= 1e-12);
    let gap = c
        .curve(0.0, 0, false)
        .iter()
        .zip(c.curve(FRAC_PI_2, 0, false))
        .map(|(a, b)| (a.1 - b.1).abs())
        .fold(0.0, f64::max);
    let s = c.summary(0.0, 0).ok_or("missing α=0 summary")?;
    check(
        hv_same && hv_matches && gap >= 0.4 && (s.max_divergence - 0.25).abs() <= 1e-10 && s.at_phi == 0.0,
        format!("HV bitwise identical over α, QM α-gap {gap:.3}, max|QM-HV|(α=0)={} at φ={}", s.max_divergence, s.at_phi),
        format!(
            "HV identical {hv_same}, HV closed form {hv_matches}, QM α-gap {gap:.3}, max|QM-HV|(α=0)={} at φ={}",
            s.max_divergence, s.at_phi
        ),
    )
}

fn sampling_soundness() -> Outcome {
    let mut summary = Vec::new();
    let mut ok = true;
    for scheme in [Scheme::Qdce, Scheme::EaQdce] {
        let exact = run_sweep(&grid_sweep(scheme, alpha_grid(16), phi_grid(64))).map_err(|e| e.to_string())?;
        let mut config = grid_sweep(scheme, alpha_grid(16), phi_grid(64));
        config.mode = Mode::Sampled;
        config.shots = 8192;
        config.repetitions = 3;
        config.seed = 20_240_601;
        let sampled = run_sweep(&config).map_err(|e| e.to_string())?;
        let within = |s: &IntensityRecord, e: &IntensityRecord| {
            let dev = (s.e0 - e.e0).abs();
            dev <= 5.0 * s.stderr0.unwrap_or(0.0) || dev <= 1e-12
        };
        let good = sampled.iter().zip(&exact).filter(|(s, e)| within(s, e)).count();
        let frac = good as f64 / sampled.len() as f64;
        let again = run_sweep(&config).map_err(|e| e.to_string())?;
        let a = records_to_csv(&sampled).map_err(|e| e.to_string())?;
        let b = records_to_csv(&again).map_err(|e| e.to_string())?;
        let same = a.as_bytes() == b.as_bytes();
        ok &= frac >= 0.99 && same && sampled.len() == exact.len();
        summary.push(format!("{scheme}: {good}/{} within 5σ, reproducible {same}", sampled.len()));
    }
    check(ok, summary.join("; "), summary.join("; "))
}

fn noise_sanity() -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/melbourne_q8_q9_q10.json");
    let noise = load_noise(path).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for (scheme, branch) in [(Scheme::Qdce, None), (Scheme::EaQdce, Some(0u8))] {
        let mut config = grid_sweep(scheme, vec![FRAC_PI_2], periodic_phi_grid(64));
        config.branch = branch;
        config.noise = Some(noise.clone());
        let records = run_sweep(&config).map_err(|e| e.to_string())?;
        let curve: Vec<(f64, f64)> = records.iter().map(|r| (r.phi, r.e0)).collect();
        let v = visibility(&curve).map_err(|e| e.to_string())?;
        ok &= v > 0.5 && v < 1.0;
        parts.push(format!("{scheme} V(π/2)={v:.4}"));

        let mut clean = grid_sweep(scheme, alpha_grid(8), phi_grid(16));
        let exact = run_sweep(&clean).map_err(|e| e.to_string())?;
        clean.noise = Some(NoiseModel::noiseless(scheme.n_qubits()));
        let zero = run_sweep(&clean).map_err(|e| e.to_string())?;
        let dev = exact
            .iter()
            .zip(&zero)
            .map(|(a, b)| (a.e0 - b.e0).abs().max((a.e1 - b.e1).abs()))
            .fold(0.0, f64::max);
        ok &= dev <= 1e-12 && exact.len() == zero.len();
        parts.push(format!("zero-noise dev {dev:.1e}"));
    }
    check(ok, parts.join(", "), parts.join(", "))
}

// Property suite.

fn random_state_n(n: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("non-zero vector", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            let amps = v.into_iter().map(|(a, b)| Complex64::new(a / norm, b / norm)).collect();
            StateVector::from_amplitudes(amps).expect("normalized")
        })
}

fn random_state(max_qubits: usize) -> impl Strategy<Value = StateVector> {
    (1..=max_qubits).prop_flat_map(random_state_n)
}

fn random_gate(n: usize) -> BoxedStrategy<GateOp> {
    let angle = -2.0 * PI..2.0 * PI;
    let single = (0..n, 0..4usize, angle.clone(), angle.clone(), angle).prop_map(|(t, k, a, b, c)| match k {
        0 => GateOp::hadamard(t),
        1 => GateOp::phase(t, a),
        2 => GateOp::rot_y(t, a),
        _ => GateOp::u3(t, a, b, c),
    });
    if n < 2 {
        return single.boxed();
    }
    let pair = (0..n, 1..n, any::<bool>()).prop_map(move |(c, off, h)| {
        let t = (c + off) % n;
        if h { GateOp::controlled_hadamard(c, t) } else { GateOp::cnot(c, t) }
    });
    prop_oneof![single, pair].boxed()
}

fn runner() -> TestRunner {
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn ensure(cond: bool, what: String) -> Result<(), TestCaseError> {
    if cond { Ok(()) } else { Err(TestCaseError::fail(what)) }
}

fn unitarity(n: usize, gate: &GateOp) -> Result<(), TestCaseError> {
    let dim = 1usize << n;
    let cols: Vec<StateVector> = (0..dim)
        .map(|j| StateVector::basis(n, j).unwrap().apply_gate(gate).unwrap())
        .collect();
    for i in 0..dim {
        for j in 0..dim {
            let dot: Complex64 = cols[i]
                .amplitudes()
                .iter()
                .zip(cols[j].amplitudes())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            ensure((dot - expected).norm() <= 1e-12, format!("{gate:?}: (U†U)[{i}][{j}] = {dot}"))?;
        }
    }
    Ok(())
}

fn property_suite() -> Outcome {
    let mut lines = Vec::new();

    let gates = (1..=4usize).prop_flat_map(|n| (Just(n), random_gate(n)));
    runner()
        .run(&gates, |(n, g)| unitarity(n, &g))
        .map_err(|e| format!("unitarity: {e}"))?;
    lines.push("unitarity");

    let circuits = random_state(4).prop_flat_map(|s| {
        let n = s.n_qubits();
        (Just(s), proptest::collection::vec(random_gate(n), 1..12))
    });
    runner()
        .run(&circuits, |(s, ops)| {
            let mut psi = s;
            for op in &ops {
                psi = psi.apply_gate(op).unwrap();
            }
            ensure((psi.norm() - 1.0).abs() <= 1e-10, format!("norm {}", psi.norm()))
        })
        .map_err(|e| format!("norm preservation: {e}"))?;
    lines.push("norm");

    let mixtures = (random_state(4), 0.0f64..1.0).prop_flat_map(|(a, w)| {
        let n = a.n_qubits();
        (Just(a), random_state_n(n), Just(w), proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=n))
    });
    runner()
        .run(&mixtures, |(a, b, w, keep)| {
            let ra = a.to_density();
            let rb = b.to_density();
            let data = ra.entries().iter().zip(rb.entries()).map(|(x, y)| x * w + y * (1.0 - w)).collect();
            let rho = DensityMatrix::from_entries(a.n_qubits(), data).unwrap();
            let red = rho.partial_trace(&keep).unwrap();
            ensure((red.trace() - 1.0).norm() <= 1e-12, format!("trace {}", red.trace()))?;
            ensure(red.hermiticity_defect() <= 1e-12, format!("hermiticity {}", red.hermiticity_defect()))?;
            let min = red.eigenvalues()[0];
            ensure(min >= -1e-10, format!("eigenvalue {min}"))
        })
        .map_err(|e| format!("partial trace: {e}"))?;
    lines.push("partial trace");

    let measured = random_state(4).prop_flat_map(|s| {
        let n = s.n_qubits();
        (Just(s), 0..n)
    });
    runner()
        .run(&measured, |(s, q)| {
            let m0 = Projector::new(q, 0).unwrap().matrix();
            let m1 = Projector::new(q, 1).unwrap().matrix();
            for i in 0..2 {
                for j in 0..2 {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    ensure(m0[i][j] + m1[i][j] == expected, format!("P0+P1 at [{i}][{j}]"))?;
                }
            }
            let rho = s.to_density();
            let red = if s.n_qubits() > 1 { rho.partial_trace(&[q]).unwrap() } else { rho };
            let e0 = red.expectation(&Projector::new(0, 0).unwrap()).unwrap();
            let e1 = red.expectation(&Projector::new(0, 1).unwrap()).unwrap();
            ensure((e0 + e1 - 1.0).abs() <= 1e-12, format!("Σ expectation {}", e0 + e1))
        })
        .map_err(|e| format!("projector completeness: {e}"))?;
    lines.push("projectors");

    let selectable = random_state(4)
        .prop_filter("needs two qubits", |s| s.n_qubits() >= 2)
        .prop_flat_map(|s| {
            let n = s.n_qubits();
            (Just(s), 0..n)
        });
    runner()
        .run(&selectable, |(s, q)| {
            let mut total = 0.0;
            for outcome in 0..2u8 {
                let p = s.outcome_probability(q, outcome).unwrap();
                total += p;
                if p > 1e-14 {
                    let (post, pp) = s.post_select(q, outcome).unwrap();
                    ensure((pp - p).abs() <= 1e-12, format!("branch prob {pp} vs {p}"))?;
                    ensure((post.norm() - 1.0).abs() <= 1e-12, format!("post-selected norm {}", post.norm()))?;
                    ensure(post.n_qubits() == s.n_qubits() - 1, "qubit not removed".into())?;
                }
            }
            ensure((total - 1.0).abs() <= 1e-12, format!("Σ branch prob {total}"))
        })
        .map_err(|e| format!("post-selection totality: {e}"))?;
    lines.push("post-selection");

    Ok(format!("{} properties × 1000 cases: {}", lines.len(), lines.join(", ")))
}

fn discrepancy_report() -> Outcome {
    let c = compare_qm_hv(&alpha_grid(5), &phi_grid(21)).map_err(|e| e.to_string())?;
    let d = c.discrepancy;
    let report = comparison_report(&c);
    let values = d.printed == 1.0 && (d.conditional - 0.5).abs() <= 1e-12 && (d.joint - 0.25).abs() <= 1e-12;
    let labeled = report.contains("as-printed 1,")
        && report.contains("simulated conditional 0.5,")
        && report.contains("simulated joint 0.25")
        && report.contains("DISCREPANCY");
    check(
        values && labeled,
        format!("as-printed {} vs conditional {} / joint {}, labeled", d.printed, d.conditional, d.joint),
        format!("as-printed {} vs conditional {} / joint {}, labeled {labeled}", d.printed, d.conditional, d.joint),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 single-ancilla equivalence", single_ancilla_equivalence),
        ("2 extreme cases", extreme_cases),
        ("3 visibility curve", visibility_curve),
        ("4 entangled branch structure", ea_branch_structure),
        ("5 hidden-variable model", hv_model),
        ("6 QM/HV incompatibility", qm_hv_incompatibility),
        ("7 sampling soundness", sampling_soundness),
        ("8 noise sanity", noise_sanity),
        ("9 core property suite", property_suite),
        ("10 discrepancy report", discrepancy_report),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
