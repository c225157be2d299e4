//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::f64::consts::LN_2;
use std::path::Path;
use std::time::Instant;

use mutsel::analysis::equilibrium_position;
use mutsel::branching::OffspringLaw;
use mutsel::experiments::{
    median_empirical, run_branching_validation, run_equilibrium_experiment, run_sweep_with_trials,
    write_equilibrium_csv, write_sweep_csv, BranchingValidationSpec, EquilibriumRow, MatrixSpec, Quantity,
    SweepResult, SweepSpec, DEFAULT_EPSILON,
};
use mutsel::ranking::{check_beta_ratio, RankDistribution};
use mutsel::spectral::{
    build_mean_matrix, choose_phi, eigen_ratio_bound, frobenius_bound, perron, DEFAULT_MAX_ITERS, DEFAULT_TOL,
    RESIDUAL_LIMIT,
};
use mutsel::{derive_stream, EaConfig, SelPresParams};

const SEED: u64 = 0x5EED_2024;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

// --------------------------------------------------------------- 1

const GAMMAS: [f64; 3] = [0.25, 0.5, 0.75];

fn equilibrium_rows() -> Vec<EquilibriumRow> {
    let config = EaConfig {
        n: 400,
        lambda: 400,
        eta: 1.5,
        chi: 1.0,
        budget_evaluations: 0,
        seed: SEED,
    };
    run_equilibrium_experiment(&config, &GAMMAS, 3000, 20, 1.0 / 3.0).expect("equilibrium experiment")
}

fn criterion_1(rows: &[EquilibriumRow]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut medians = Vec::new();
    for g in GAMMAS {
        let predicted = equilibrium_position(g, 1.5, 1.0).unwrap();
        let m = median_empirical(rows, g).unwrap();
        let ok = (m - predicted).abs() <= 0.05;
        pass &= ok;
        medians.push(m);
        parts.push(format!("γ={g}: median {m:.4} vs ξ* {predicted:.4}"));
    }
    let ordered = medians[0] > medians[1] && medians[1] > medians[2];
    pass &= ordered;
    parts.push(format!("ordering preserved: {ordered}"));
    verdict(pass, parts.join("; "))
}

// --------------------------------------------------------------- 2

fn sweep_spec(chi: f64, etas: Vec<f64>) -> SweepSpec {
    SweepSpec {
        chi_grid: vec![chi],
        eta_grid: etas,
        selpres: SelPresParams { sigma: 0.5, delta: 0.05, k: 1 },
        n: 60,
        lambda: 60,
        budget_evaluations: 10_000_000,
        trials_per_point: 10,
        base_seed: SEED,
        epsilon: DEFAULT_EPSILON,
        band: 0.02,
    }
}

fn phase_sweeps() -> [SweepResult; 2] {
    [
        run_sweep_with_trials(&sweep_spec(2.0 * LN_2, vec![2.0, 1.1])).expect("sweep"),
        run_sweep_with_trials(&sweep_spec(0.1, vec![1.5])).expect("sweep"),
    ]
}

fn criterion_2(sweeps: &[SweepResult; 2]) -> Verdict {
    let balanced = &sweeps[0].cells[0];
    let low = &sweeps[0].cells[1];
    let high = &sweeps[1].cells[0];
    let pass = balanced.trials == 10
        && balanced.successes >= 6
        && low.trials == 10
        && low.successes == 0
        && high.trials == 10
        && high.successes == 0;
    let show = |c: &mutsel::experiments::SweepCell| {
        format!("(χ={:.4}, η={}) {} {}/{}", c.chi, c.eta, c.verdict, c.successes, c.trials)
    };
    verdict(pass, format!("{}; {}; {}", show(balanced), show(low), show(high)))
}

// --------------------------------------------------------------- 3

fn criterion_3() -> Verdict {
    const DRAWS: usize = 1_000_000;
    // DKW at 99.9%: ε = sqrt(ln(2/α)/(2N))
    let eps = ((2.0f64 / 1e-3).ln() / (2.0 * DRAWS as f64)).sqrt();
    let mut pass = true;
    let mut parts = Vec::new();
    for (idx, (lambda, eta)) in [(10usize, 1.2), (1000, 1.5), (100, 2.0)].into_iter().enumerate() {
        let dist = RankDistribution::new(lambda, eta).unwrap();
        let mut rng = derive_stream(SEED, 300 + idx as u64);
        let mut counts = vec![0u64; lambda + 1];
        for _ in 0..DRAWS {
            counts[dist.sample(&mut rng)] += 1;
        }
        let mut cum = 0u64;
        let mut worst = 0.0f64;
        for (i, c) in counts.iter().enumerate().skip(1) {
            cum += c;
            let x = i as f64 / lambda as f64;
            let target = eta * x - (eta - 1.0) * x * x;
            worst = worst.max((cum as f64 / DRAWS as f64 - target).abs());
        }
        pass &= worst <= eps;
        parts.push(format!("(λ={lambda}, η={eta}) sup gap {worst:.5}"));
    }
    verdict(pass, format!("{} (band {eps:.5})", parts.join("; ")))
}

// --------------------------------------------------------------- 4

fn criterion_4() -> Verdict {
    let mut rng = derive_stream(SEED, 400);
    let mut failures = 0;
    let mut oracle_failures = 0;
    let b = |x: f64, eta: f64| eta * x - (eta - 1.0) * x * x;
    for _ in 0..100_000 {
        let gamma = 1e-9 + rng.uniform() * (1.0 - 2e-9);
        let x = (rng.uniform() * 1e4f64.ln()).exp();
        let eta = 2.0 - rng.uniform() * (1.0 - 1e-9);
        if !check_beta_ratio(gamma, x, eta).unwrap() {
            failures += 1;
        }
        if b(gamma / x, eta) / b(gamma, eta) < 1.0 / x - 1e-12 {
            oracle_failures += 1;
        }
    }
    verdict(
        failures == 0 && oracle_failures == 0,
        format!("10^5 triples, {failures} failures ({oracle_failures} by independent polynomial)"),
    )
}

// --------------------------------------------------------------- 5

fn criterion_5() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, rho) in [0.3, 0.5, 0.9].into_iter().enumerate() {
        let spec = BranchingValidationSpec::SingleType {
            law: OffspringLaw::poisson(rho).unwrap(),
            max_t: 10,
            ks: vec![1, 2, 4],
            trials: 1_000_000,
            seed: SEED + 500 + i as u64,
        };
        let rows = run_branching_validation(&spec).expect("single-type validation");
        let checked: Vec<_> = rows
            .iter()
            .filter(|r| matches!(r.quantity, Quantity::SizeGeK | Quantity::MeanSize))
            .collect();
        let bad = checked.iter().filter(|r| r.violated).count();
        let tight = rows
            .iter()
            .filter(|r| r.quantity == Quantity::SizeGeK)
            .map(|r| r.empirical / r.bound)
            .fold(0.0, f64::max);
        pass &= bad == 0 && checked.len() == 10 * 4;
        parts.push(format!("ρ={rho}: {bad} violations, max empirical/bound {tight:.3}"));
    }
    verdict(pass, parts.join("; "))
}

// --------------------------------------------------------------- 6

fn criterion_6() -> Verdict {
    let mut pass = true;
    let mut worst_gap = f64::INFINITY;
    let mut worst_res = 0.0f64;
    let mut ratio_checks = 0;
    let mut failures = Vec::new();
    for n in [100usize, 400, 1000] {
        for eta in [1.2, 1.5, 2.0] {
            for kappa in [2.0, 4.0, 9.0] {
                let phi = choose_phi(eta, 1.0, kappa).unwrap();
                let m = build_mean_matrix(n, eta, 1.0, kappa, phi).unwrap();
                let p = perron(&m, DEFAULT_TOL, DEFAULT_MAX_ITERS).unwrap();
                let fb = frobenius_bound(n, eta, 1.0, kappa, phi).unwrap();
                let ok = p.rho < fb && fb < 1.0 && p.residual <= RESIDUAL_LIMIT;
                worst_gap = worst_gap.min(fb - p.rho);
                worst_res = worst_res.max(p.residual);
                if n == 100 {
                    for h in 1..=m.dim() {
                        ratio_checks += 1;
                        let lhs = (p.v[h - 1] / p.v_star).ln();
                        if lhs > eigen_ratio_bound(h, n, 1.0, phi).unwrap() {
                            failures.push(format!("ratio n={n} η={eta} κ={kappa} h={h}"));
                        }
                    }
                }
                if !ok {
                    failures.push(format!("n={n} η={eta} κ={kappa}: ρ={} bound={fb}", p.rho));
                }
            }
        }
    }
    pass &= failures.is_empty();
    verdict(
        pass,
        format!(
            "27 matrices, min(bound − ρ) {worst_gap:.4}, max residual {worst_res:.1e}, {ratio_checks} ratio checks{}",
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join(", ")) }
        ),
    )
}

// --------------------------------------------------------------- 7

fn criterion_7() -> Verdict {
    let matrix = MatrixSpec::SelPres {
        n: 340,
        eta: 1.5,
        chi: 1.0,
        kappa: 4.0,
        phi: None,
        log_base: Default::default(),
    };
    let d = matrix.build().unwrap().dim();
    let spec = BranchingValidationSpec::MultiType {
        matrix,
        start_types: None,
        max_t: 10,
        ks: vec![1, 2, 4, 8],
        trials: 1_000_000,
        seed: SEED + 700,
    };
    let rows = run_branching_validation(&spec).expect("multi-type validation");
    let bad = rows.iter().filter(|r| r.violated).count();
    let informative: Vec<_> = rows.iter().filter(|r| r.bound < 1.0).collect();
    let tight = informative.iter().map(|r| r.empirical / r.bound).fold(0.0, f64::max);
    verdict(
        d == 10 && bad == 0 && rows.len() == 10 * 10 * 4,
        format!(
            "d={d}, {} (h,t,k) cells, {bad} violations; {} cells with bound < 1, max empirical/bound there {tight:.3}",
            rows.len(),
            informative.len()
        ),
    )
}

// --------------------------------------------------------------- 8

fn criterion_8(rows: &[EquilibriumRow], sweeps: &[SweepResult; 2]) -> Verdict {
    let eq_runs = rows.len() / GAMMAS.len();
    let eq_ok = rows.iter().all(|r| r.accounting_holds);
    let trials: Vec<_> = sweeps.iter().flat_map(|s| &s.trials).collect();
    let sw_ok = trials.iter().all(|t| t.accounting_holds());
    verdict(
        eq_ok && sw_ok && trials.len() == 30,
        format!("{eq_runs} equilibrium runs ok={eq_ok}; {} sweep runs ok={sw_ok}", trials.len()),
    )
}

// --------------------------------------------------------------- 9

fn write_outputs(dir: &Path, rows: &[EquilibriumRow], sweeps: &[SweepResult; 2]) -> Vec<Vec<u8>> {
    std::fs::create_dir_all(dir).unwrap();
    let eq = dir.join("equilibrium.csv");
    write_equilibrium_csv(rows, &eq).unwrap();
    let mut files = vec![std::fs::read(&eq).unwrap()];
    for (i, s) in sweeps.iter().enumerate() {
        let p = dir.join(format!("sweep_{i}.csv"));
        write_sweep_csv(&s.cells, &p).unwrap();
        files.push(std::fs::read(&p).unwrap());
    }
    files
}

fn criterion_9(dir: &Path, first: &[Vec<u8>]) -> Verdict {
    let rows = equilibrium_rows();
    let sweeps = phase_sweeps();
    let second = write_outputs(&dir.join("second"), &rows, &sweeps);
    let same = first == second;
    verdict(same, format!("{} CSV files re-generated, byte-identical: {same}", first.len()))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut results: Vec<(u32, &str, Verdict, f64)> = Vec::new();
    let mut timed = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Verdict| {
        let t = Instant::now();
        let v = f();
        let secs = t.elapsed().as_secs_f64();
        println!(
            "criterion {id} [{}] {name}: {} ({secs:.1}s)",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        results.push((id, name, v, secs));
    };

    let t = Instant::now();
    let rows = equilibrium_rows();
    let eq_secs = t.elapsed().as_secs_f64();
    timed(1, "equilibrium position", &mut || {
        let mut v = criterion_1(&rows);
        v.detail.push_str(&format!("; runs took {eq_secs:.1}s"));
        v
    });
    let t = Instant::now();
    let sweeps = phase_sweeps();
    let sw_secs = t.elapsed().as_secs_f64();
    timed(2, "phase transition", &mut || {
        let mut v = criterion_2(&sweeps);
        v.detail.push_str(&format!("; sweeps took {sw_secs:.1}s"));
        v
    });
    timed(3, "rank sampler exactness", &mut criterion_3);
    timed(4, "beta ratio property", &mut criterion_4);
    timed(5, "single-type branching bounds", &mut criterion_5);
    timed(6, "Perron root machinery", &mut criterion_6);
    timed(7, "multi-type tail bound", &mut criterion_7);
    timed(8, "evaluation accounting", &mut || criterion_8(&rows, &sweeps));
    let first = write_outputs(&dir.path().join("first"), &rows, &sweeps);
    timed(9, "determinism", &mut || criterion_9(dir.path(), &first));

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
