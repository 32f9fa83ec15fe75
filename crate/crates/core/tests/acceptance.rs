//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex;
use trotterkit::expm::{exact_expm, taylor_propagator};
use trotterkit::hamiltonians::{
    build_diagonal, build_random_diagonal, build_random_hermitian, build_random_split, pauli,
    uniform_stream,
};
use trotterkit::linalg::{operator_2norm, ComplexMatrix, StateVector};
use trotterkit::schrodinger::{
    grid_split_hamiltonian, observables, split_step_evolve, GridSpec, PotentialPreset,
    WaveFunction,
};
use trotterkit::trotter::{
    convergence_study, defect_supremum, generator_residual, linearized_trotter, ErrorMetric,
    SplitHamiltonian,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let elapsed = start.elapsed();
    ensure(elapsed < budget, || format!("runtime {elapsed:?} exceeds {budget:?}"))
}

fn xz() -> SplitHamiltonian<f64> {
    SplitHamiltonian::new(pauli::x(), pauli::z()).unwrap()
}

fn doubling(from: u64, to: u64) -> Vec<u64> {
    std::iter::successors(Some(from), |&n| Some(n * 2))
        .take_while(|&n| n <= to)
        .collect()
}

fn up() -> StateVector<f64> {
    StateVector::basis(2, 0).unwrap()
}

fn trotter_limit() -> Outcome {
    let start = Instant::now();
    let report = convergence_study(
        &xz(),
        1.0,
        &doubling(4, 512),
        ErrorMetric::StateVectorNorm(up()),
    )
    .map_err(|e| e.to_string())?;
    within_budget(start, Duration::from_secs(1))?;
    let last = *report.errors.last().unwrap();
    ensure(last <= 5e-3, || format!("error at n=512 is {last:e} > 5e-3"))?;
    for (w, n) in report.errors.windows(2).zip(&report.step_counts[1..]) {
        ensure(w[1] <= w[0] * 1.05, || {
            format!("error rose at n={n}: {:e} -> {:e}", w[0], w[1])
        })?;
    }
    Ok(format!("error(512) = {last:.3e}, monotone over n = 4..512"))
}

fn first_order_rate() -> Outcome {
    let start = Instant::now();
    let ns = doubling(4, 512);
    let xz_report = convergence_study(&xz(), 1.0, &ns, ErrorMetric::StateVectorNorm(up()))
        .map_err(|e| e.to_string())?;
    let random = build_random_split::<f64>(8, 2024).map_err(|e| e.to_string())?;
    let random_report = convergence_study(&random, 1.0, &ns, ErrorMetric::Operator2Norm)
        .map_err(|e| e.to_string())?;
    within_budget(start, Duration::from_secs(5))?;
    for (name, r) in [("X/Z", &xz_report), ("random 8x8", &random_report)] {
        ensure(r.fitted_order_valid && (r.fitted_order - 1.0).abs() <= 0.15, || {
            format!("{name}: fitted order {}", r.fitted_order)
        })?;
    }
    Ok(format!(
        "fitted order X/Z = {:.4}, random 8x8 = {:.4}",
        xz_report.fitted_order, random_report.fitted_order
    ))
}

fn commuting_exactness() -> Outcome {
    let s = build_random_diagonal::<f64>(16, 101).map_err(|e| e.to_string())?;
    let t = build_random_diagonal::<f64>(16, 202).map_err(|e| e.to_string())?;
    let split = SplitHamiltonian::new(s, t).map_err(|e| e.to_string())?;
    let report = convergence_study(&split, 1.0, &[1, 2, 7, 64], ErrorMetric::Operator2Norm)
        .map_err(|e| e.to_string())?;
    let worst = report.errors.iter().cloned().fold(0.0, f64::max);
    ensure(worst <= 1e-10, || format!("max error {worst:e} > 1e-10"))?;
    Ok(format!("max error {worst:.3e} over n = 1, 2, 7, 64"))
}

fn diagonal_example() -> Outcome {
    let energies = [1.0, 2.0, 3.0];
    let u = exact_expm(&build_diagonal(&energies).unwrap(), 0.7).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (i, e) in energies.iter().enumerate() {
        for j in 0..3 {
            let expected = if i == j {
                Complex::new(0.0, -e * 0.7).exp()
            } else {
                Complex::new(0.0, 0.0)
            };
            worst = worst.max((u.matrix[(i, j)] - expected).norm());
        }
    }
    ensure(worst <= 1e-14, || format!("entry deviation {worst:e} > 1e-14"))?;
    Ok(format!("max entry deviation {worst:.3e}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let dims = [2usize, 4, 8, 16, 32];
    let mut times = uniform_stream(5150).map(|u| 10.0 * u - 5.0);
    let mut worst_ratio = 0.0f64;
    for k in 0..50u64 {
        let dim = dims[k as usize % dims.len()];
        let t = times.next().unwrap();
        let h = build_random_hermitian::<f64>(dim, 9000 + k).map_err(|e| e.to_string())?;
        let exact = exact_expm(&h, t).map_err(|e| e.to_string())?.matrix;
        let taylor = taylor_propagator(&h, t, 30).map_err(|e| e.to_string())?;
        let diff = (&exact - &taylor).frobenius_norm();
        let bound = 1e-8 * dim as f64;
        ensure(diff <= bound, || format!("case {k} (dim {dim}, t {t:.3}): {diff:e} > {bound:e}"))?;
        worst_ratio = worst_ratio.max(diff / bound);
    }
    within_budget(start, Duration::from_secs(10))?;
    Ok(format!("50 cases, worst diff/bound = {worst_ratio:.3e}"))
}

fn telescoping_residual(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>, n: u64) -> f64 {
    let lhs = &a.pow(n) - &b.pow(n);
    let diff = a - b;
    let mut sum = ComplexMatrix::zeros(a.dim());
    for j in 0..n {
        sum = &sum + &(&(&a.pow(j) * &diff) * &b.pow(n - 1 - j));
    }
    (&lhs - &sum).frobenius_norm()
}

fn proof_structure() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..100u64 {
        let dim = 1 + (k as usize % 8);
        let n = 1 + (k / 8) % 6;
        let a = exact_expm(&build_random_hermitian::<f64>(dim, 3 * k).unwrap(), 1.0)
            .map_err(|e| e.to_string())?
            .matrix;
        let b = exact_expm(&build_random_hermitian::<f64>(dim, 3 * k + 1).unwrap(), 1.0)
            .map_err(|e| e.to_string())?
            .matrix;
        let r = telescoping_residual(&a, &b, n);
        ensure(r <= 1e-12 * n as f64, || format!("pair {k}: residual {r:e}"))?;
        worst = worst.max(r / n as f64);
    }

    let h = xz();
    let sups: Vec<f64> = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&step| defect_supremum(&h, step, &up(), 1.0, 41))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(sups[0] > sups[1] && sups[1] > sups[2], || {
        format!("defect supremum not strictly decreasing: {sups:?}")
    })?;

    let hmat = h.total();
    let res: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|&step| generator_residual(&hmat, step, &up()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for w in res.windows(2) {
        let ratio = w[0] / w[1];
        ensure((ratio - 2.0).abs() <= 0.4, || format!("residual ratio {ratio}"))?;
    }
    Ok(format!(
        "telescoping worst/n = {worst:.2e}; sup defects {:.3e} > {:.3e} > {:.3e}; residual ratios {:.3}, {:.3}",
        sups[0],
        sups[1],
        sups[2],
        res[0] / res[1],
        res[1] / res[2]
    ))
}

fn linearized_rate() -> Outcome {
    let h = xz();
    let exact = h.exact_propagator(1.0).map_err(|e| e.to_string())?.matrix;
    let errors: Vec<f64> = (8..=14)
        .map(|k| {
            let m = linearized_trotter(&h, 1.0, k).map_err(|e| e.to_string())?;
            operator_2norm(&(&m.matrix - &exact)).map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    for (k, r) in ratios.iter().enumerate() {
        ensure((r - 2.0).abs() <= 0.4, || format!("ratio at log2_n={} is {r}", k + 8))?;
    }
    Ok(format!(
        "ratios {}",
        ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(", ")
    ))
}

fn splitstep_physics() -> Outcome {
    let grid = GridSpec::<f64>::new(1024, -20.0, 20.0, 1.0).unwrap();
    let psi = WaveFunction::gaussian(grid, 0.0, 1.0, 0.0).unwrap();
    let v = PotentialPreset::Linear.sample(&grid);
    let out = split_step_evolve(&psi, &v, 1.0, 256).map_err(|e| e.to_string())?;
    let obs = observables(&out).map_err(|e| e.to_string())?;
    ensure((obs.norm - 1.0).abs() <= 1e-8, || format!("norm {}", obs.norm))?;
    let tol = 2.0 * grid.spacing();
    ensure((obs.mean_x + 0.5).abs() <= tol, || format!("<x> = {}", obs.mean_x))?;

    let ns = doubling(16, 1024);
    let states: Vec<WaveFunction<f64>> = ns
        .iter()
        .map(|&n| split_step_evolve(&psi, &v, 1.0, n as usize))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let gaps: Vec<f64> = states
        .windows(2)
        .map(|w| w[0].distance(&w[1]).unwrap())
        .collect();
    let ratios: Vec<f64> = gaps.windows(2).map(|w| w[0] / w[1]).collect();
    for (r, n) in ratios.iter().zip(&ns) {
        ensure((r - 2.0).abs() <= 0.3, || format!("gap ratio at n={n}: {r}"))?;
    }
    Ok(format!(
        "norm-1 = {:.1e}, <x> = {:.5}, gap ratios {}",
        obs.norm - 1.0,
        obs.mean_x,
        ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(", ")
    ))
}

fn grid_matrix_cross_check() -> Outcome {
    let grid = GridSpec::<f64>::new(64, -10.0, 10.0, 1.0).unwrap();
    let psi = WaveFunction::gaussian(grid, 0.0, 1.0, 0.0).unwrap();
    let v = PotentialPreset::Linear.sample(&grid);
    let split = grid_split_hamiltonian(&grid, &v).map_err(|e| e.to_string())?;
    let xi = StateVector::from_amplitudes(psi.as_unit_vector()).map_err(|e| e.to_string())?;
    let ns = [4u64, 8, 16, 32, 64];
    let t = 1.0;
    let report = convergence_study(&split, t, &ns, ErrorMetric::StateVectorNorm(xi.clone()))
        .map_err(|e| e.to_string())?;
    let exact = split.exact_propagator(t).map_err(|e| e.to_string())?;
    let exact_values = exact.matrix.apply(psi.values()).map_err(|e| e.to_string())?;
    let exact_psi = WaveFunction::from_raw(grid, exact_values).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (&n, &dense_err) in ns.iter().zip(&report.errors) {
        let split_psi = split_step_evolve(&psi, &v, t, n as usize).map_err(|e| e.to_string())?;
        let grid_err = split_psi.distance(&exact_psi).map_err(|e| e.to_string())?;
        let gap = (grid_err - dense_err).abs();
        ensure(gap <= 1e-8, || format!("n={n}: dense {dense_err:e} vs grid {grid_err:e}"))?;
        worst = worst.max(gap);
    }
    Ok(format!("max |dense - grid| = {worst:.2e} over n = 4..64"))
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_trotterkit");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 3] = [
        &["trotter-sweep", "--random", "6", "--seed", "77", "--t", "1", "--n", "4:256:x2"],
        &["defect", "--pauli", "S=1*X", "--pauli", "T=1*Z", "--t", "1"],
        &["splitstep", "--preset", "linear", "--t", "1", "--steps", "64", "--points", "256"],
    ];
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("run{k}_{rep}.csv"));
            let status = Command::new(bin)
                .args(*args)
                .arg("--output")
                .arg(&path)
                .env_remove("TROTTERKIT_SEED")
                .status()
                .map_err(|e| e.to_string())?;
            ensure(status.success(), || format!("{args:?} exited with {status}"))?;
            outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        ensure(outputs[0] == outputs[1], || format!("{args:?}: outputs differ"))?;
        ensure(!outputs[0].is_empty(), || format!("{args:?}: empty output"))?;
    }
    Ok("three sweeps byte-identical across repeated runs".into())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("trotter limit", trotter_limit),
        ("first-order rate", first_order_rate),
        ("commuting exactness", commuting_exactness),
        ("diagonal worked example", diagonal_example),
        ("exact vs Taylor oracle", oracle_equivalence),
        ("proof-structure checks", proof_structure),
        ("linearized Trotter rate", linearized_rate),
        ("split-step physics", splitstep_physics),
        ("grid-matrix cross-check", grid_matrix_cross_check),
        ("CLI determinism", cli_determinism),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({elapsed:.2?})", k + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL [{:>2}] {name}: {why} ({elapsed:.2?})", k + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
