//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use coupled_wigner::experiments::{run_fig1, run_fig3, Experiment, ExperimentConfig};
use coupled_wigner::gaussian::{fidelity, thermal_state, GaussianState};
use coupled_wigner::info::{fock_grid, linear_entropy, negativity, WignerField};
use coupled_wigner::open_dynamics::{evolve_coupled, thermalize_closed_form, IntegratorOptions, ThermalBath};
use coupled_wigner::{
    fock::classical_trajectory, gauss_hermite, ConvergencePolicy, FockPairState, Mode, OscillatorParams, PhasePoint,
};
use nalgebra::{DMatrix, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(checks: Vec<(bool, String)>) -> Outcome {
    let pass = checks.iter().all(|(ok, _)| *ok);
    let detail = checks
        .into_iter()
        .map(|(ok, msg)| if ok { msg } else { format!("FAILED {msg}") })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail }
}

fn within(limit: Duration, elapsed: Duration) -> (bool, String) {
    (elapsed < limit, format!("runtime {:.2}s < {}s", elapsed.as_secs_f64(), limit.as_secs()))
}

fn fock1_negativity_exact() -> f64 {
    4.0 * (-0.5f64).exp() - 2.0
}

/// Composite Simpson rule for the radial negative lobe of the n = 1 Fock
/// Wigner function, `W(r) = -(1/π) e^{-r²} (1 - 2r²)`, negative for `r² < 1/2`.
fn fock1_negativity_radial() -> f64 {
    let n = 20_000;
    let b = 0.5f64.sqrt();
    let h = b / n as f64;
    let g = |r: f64| 2.0 * 2.0 * PI * (1.0 / PI) * (-r * r).exp() * (1.0 - 2.0 * r * r) * r;
    let mut s = g(0.0) + g(b);
    for i in 1..n {
        s += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let params = OscillatorParams::natural(0.1).unwrap();
    let state = FockPairState::new(1, 0, params);
    let field = WignerField::fock_marginal(&state, 0.0, Mode::First);
    let grid = fock_grid(&params, 1, 129).unwrap();
    let grid_value = negativity(&field, &grid, &ConvergencePolicy::default()).unwrap();
    let radial = fock1_negativity_radial();
    let exact = fock1_negativity_exact();
    let elapsed = start.elapsed();
    outcome(vec![
        ((grid_value - exact).abs() < 1e-4, format!("grid {grid_value:.10} vs {exact:.10} (tol 1e-4)")),
        ((radial - exact).abs() < 1e-8, format!("radial {radial:.12} (tol 1e-8)")),
        within(Duration::from_secs(5), elapsed),
    ])
}

fn criterion_2() -> Outcome {
    let gamma = 0.1;
    let params = OscillatorParams::natural(gamma).unwrap();
    let mut worst_norm: f64 = 0.0;
    let mut worst_entropy: f64 = 0.0;
    for (k, l) in [(1, 0), (2, 1)] {
        let state = FockPairState::new(k, l, params);
        let rule = gauss_hermite(state.default_hermite_nodes()).unwrap();
        for j in 0..20 {
            let t = j as f64 * (PI / gamma) / 19.0;
            let field = WignerField::fock_pair(&state, t);
            worst_norm = worst_norm.max((field.normalization(&rule).unwrap() - 1.0).abs());
            worst_entropy = worst_entropy.max(linear_entropy(&field, &rule).unwrap().abs());
            worst_entropy = worst_entropy.max((1.0 - field.purity(&rule).unwrap()).abs());
        }
    }
    outcome(vec![
        (worst_norm < 1e-8, format!("max |norm - 1| = {worst_norm:.2e}")),
        (worst_entropy < 1e-8, format!("max |S| = {worst_entropy:.2e}")),
    ])
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (k, l) in [(1u32, 0u32), (2, 1)] {
        let cfg = ExperimentConfig { experiment: Experiment::Fig1, k, l, ..Default::default() };
        let table = run_fig1(&cfg).unwrap();
        let theta = table.column("theta").unwrap();
        let mi = table.column("mutual_information").unwrap();
        let d1 = table.column("negativity_mode1").unwrap();
        let d2 = table.column("negativity_mode2").unwrap();
        let step = cfg.theta_step;
        let half = (PI / 2.0 / step).round() as usize;
        let tag = format!("({k},{l})");

        checks.push((mi[0].abs() < 1e-8, format!("{tag} I(0) = {:.1e}", mi[0])));

        let peak = mi[..=half].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let argmax = (0..=half).find(|&i| mi[i] >= peak - 1e-12).unwrap();
        let arg = theta[argmax];
        checks.push((
            (arg - PI / 4.0).abs() <= step * (1.0 + 1e-9),
            format!("{tag} argmax I = {:.4}π (I = {peak:.6})", arg / PI),
        ));

        let swap = (d1[half] - d2[0]).abs().max((d2[half] - d1[0]).abs());
        checks.push((swap < 1e-6, format!("{tag} inversion error {swap:.1e}")));

        for (name, d) in [("δ1", &d1), ("δ2", &d2)] {
            let low = d[..=half].iter().cloned().fold(f64::INFINITY, f64::min);
            let near = (0..=half).any(|i| d[i] <= low + 1e-6 && (theta[i] - arg).abs() <= step * (1.0 + 1e-9));
            checks.push((near, format!("{tag} {name} minimum at I peak")));
        }
    }
    checks.push(within(Duration::from_secs(120), start.elapsed()));
    outcome(checks)
}

fn random_state(rng: &mut ChaCha8Rng) -> GaussianState {
    let nu: f64 = 1.0 + rng.random_range(0.0..5.0);
    let r: f64 = rng.random_range(-1.5..1.5);
    let phi: f64 = rng.random_range(0.0..PI);
    let (s, c) = phi.sin_cos();
    let rot = Matrix2::new(c, -s, s, c);
    let sq = Matrix2::new((2.0 * r).exp(), 0.0, 0.0, (-2.0 * r).exp());
    let sigma = rot * sq * rot.transpose() * nu;
    let cov = DMatrix::from_iterator(2, 2, sigma.iter().copied());
    let cov = (&cov + cov.transpose()) * 0.5;
    GaussianState::new(vec![rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)], cov).unwrap()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let worst_self = (0..100)
        .map(|_| {
            let s = random_state(&mut rng);
            (fidelity(&s, &s).unwrap() - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let vac = GaussianState::vacuum(1).unwrap();
    let f = fidelity(&vac, &thermal_state(4.0).unwrap()).unwrap();
    let c_th = thermal_state(3.0).unwrap().coherence().unwrap();
    let c_coh = GaussianState::coherent(2.0, 0.0).unwrap().coherence().unwrap();
    outcome(vec![
        (worst_self < 1e-12, format!("max |F(s,s) - 1| = {worst_self:.1e} over 100 states")),
        ((f - 0.2).abs() < 1e-12, format!("F(vacuum, thermal 4) = {f}")),
        (c_th == 0.0, format!("C(thermal) = {c_th}")),
        ((c_coh - 2.0).abs() < 1e-12, format!("C(coherent (2,0)) = {c_coh}")),
    ])
}

/// Undo the free mode-1 oscillation so the record can be compared with the
/// closed form, which carries no `ωt` phase.
fn corotate(state: &GaussianState, t: f64, params: &OscillatorParams) -> (Matrix2<f64>, [f64; 2]) {
    let back = |q: f64, p: f64| {
        let x = classical_trajectory(&PhasePoint::new(q, p, 0.0, 0.0), -t, params).unwrap();
        [x.q1, x.p1]
    };
    let c0 = back(1.0, 0.0);
    let c1 = back(0.0, 1.0);
    let m = Matrix2::new(c0[0], c1[0], c0[1], c1[1]);
    let s = state.covariance();
    let block = Matrix2::new(s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]);
    let d = back(state.means()[0], state.means()[1]);
    (m * block * m.transpose(), d)
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig { experiment: Experiment::Fig3, gamma: 0.0, ..Default::default() };
    let params = cfg.params().unwrap();
    let bath = ThermalBath::new(cfg.decay_rate, cfg.bath_photons).unwrap();
    let n = (6.0 / cfg.time_step).round() as usize;
    let times: Vec<f64> = (0..=n).map(|i| i as f64 * cfg.time_step / cfg.decay_rate).collect();
    let initial = coupled_wigner::experiments::fig3::initial_state(&cfg).unwrap();
    let record =
        evolve_coupled(&initial, &params, &bath, &times, &IntegratorOptions { max_step: cfg.max_step }).unwrap();
    let mode1 = initial.reduce_mode(Mode::First).unwrap();
    let mut worst: f64 = 0.0;
    for (t, state) in times.iter().zip(&record.states) {
        let want = thermalize_closed_form(&mode1, &bath, *t).unwrap();
        let (block, d) = corotate(state, *t, &params);
        for i in 0..2 {
            worst = worst.max((d[i] - want.means()[i]).abs());
            for j in 0..2 {
                worst = worst.max((block[(i, j)] - want.covariance()[(i, j)]).abs());
            }
        }
    }
    let monotone = record.fidelity_track.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    outcome(vec![
        (worst < 1e-6, format!("max entry error {worst:.1e} over Γt ∈ [0, 6]")),
        (
            monotone && record.backflow_intervals.is_empty(),
            format!("fidelity monotone, {} backflow intervals", record.backflow_intervals.len()),
        ),
        within(Duration::from_secs(10), start.elapsed()),
    ])
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig { experiment: Experiment::Fig3, ..Default::default() };
    let run = run_fig3(&cfg).unwrap();
    let h = cfg.time_step * (1.0 + 1e-9);
    let orphans: Vec<_> = run
        .coherence_rises
        .iter()
        .filter(|(a, b)| !run.backflow.iter().any(|(c, d)| *a <= d + h && *c <= b + h))
        .collect();
    outcome(vec![
        (
            !run.backflow.is_empty(),
            format!("{} backflow intervals (target 2): {:?}", run.backflow.len(), run.backflow),
        ),
        (
            orphans.is_empty(),
            format!("coherence rises without backflow: {orphans:?} of {:?}", run.coherence_rises),
        ),
        within(Duration::from_secs(30), start.elapsed()),
    ])
}

fn criterion_7() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_coupled-wigner");
    let mut checks = Vec::new();
    for fig in ["fig1", "fig3"] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{fig}-{run}.csv"));
            let status = Command::new(bin).arg(fig).arg("--out").arg(&path).output().unwrap();
            assert!(status.status.success(), "{fig} failed: {}", String::from_utf8_lossy(&status.stderr));
            outputs.push(std::fs::read(&path).unwrap());
        }
        checks.push((outputs[0] == outputs[1], format!("{fig} identical ({} bytes)", outputs[0].len())));
    }
    outcome(checks)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("negativity oracle", criterion_1),
        ("purity and normalization", criterion_2),
        ("fig1 properties", criterion_3),
        ("gaussian closed forms", criterion_4),
        ("integrator vs closed form", criterion_5),
        ("fig3 backflow and coherence", criterion_6),
        ("determinism", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
