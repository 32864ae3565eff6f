//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with its own harness (`cargo test --test acceptance`) so that each
//! criterion reports its measured values and runtime.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use entren::densemath::{hermitian_eig, hermitian_eigvals, kron, ComplexMatrix};
use entren::entangle::{concurrence, eof_two_qubits, fidelity, schmidt_decompose};
use entren::expcli::{fig1_table, parse_fig1_rows, run_fig1, Experiment, RunConfig, Table};
use entren::lattice::{build_hamiltonian, connected_correlator, Axis, ModelSpec};
use entren::renorm::{dmrg_projection, dmrg_run, retained_weight, truncation_error, wilson_run, Isometry};
use entren::states::{qubit_dims, Bipartition, DensityMatrix, PureState, Reduce};

type Outcome = Result<String, String>;

/// Name, check, runtime limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

const FIG1_FROZEN: &str = include_str!("data/fig1_heisenberg4.csv");

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_state(rng: &mut ChaCha8Rng, dims: Vec<usize>) -> PureState<f64> {
    let n: usize = dims.iter().product();
    let amps = (0..n).map(|_| gaussian(rng)).collect();
    PureState::normalized(dims, amps).unwrap()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `|| Ψ - (P ⊗ 1)Ψ ||²` against `1 - tr(P ρ_A)`; the left side is built
/// from the full `P ⊗ 1` operator.
fn truncation_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let da = rng.random_range(1..=16);
        let db = rng.random_range(1..=16);
        let m = rng.random_range(1..=da);
        let psi = random_state(&mut rng, vec![da, db]);
        let p = Isometry::random(da, m, &mut rng).unwrap();
        let full = kron(&p.projector(), &ComplexMatrix::identity(db));
        let projected = full.matvec(psi.amplitudes());
        let lhs: f64 = psi
            .amplitudes()
            .iter()
            .zip(&projected)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let split = Bipartition::contiguous(1, 2).unwrap();
        let rho_a = psi.reduce(&[0]).unwrap();
        let rhs = 1.0 - retained_weight(&p, rho_a.matrix()).unwrap();
        let lib = truncation_error(&p, &psi, &split).unwrap();
        worst = worst.max((lhs - rhs).abs()).max((lib - rhs).abs());
    }
    check(worst <= 1e-9, || format!("max deviation {worst:.3e} > 1e-9"))?;
    Ok(format!("200 pairs, max deviation {worst:.2e}"))
}

fn ky_fan() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let split = Bipartition::contiguous(1, 2).unwrap();
    let mut worst_margin = f64::INFINITY;
    for _ in 0..50 {
        let psi = random_state(&mut rng, vec![4, 4]);
        let dmrg = dmrg_projection(&psi, &split, 2).unwrap();
        let e_dmrg = truncation_error(&dmrg.isometry, &psi, &split).unwrap();
        let mut best = f64::INFINITY;
        for _ in 0..10_000 {
            let w = Isometry::random(4, 2, &mut rng).unwrap();
            best = best.min(truncation_error(&w, &psi, &split).unwrap());
        }
        check(e_dmrg <= best + 1e-10, || {
            format!("DMRG error {e_dmrg:.6e} exceeds random minimum {best:.6e}")
        })?;
        worst_margin = worst_margin.min(best - e_dmrg);
    }
    Ok(format!("50 states x 1e4 isometries, smallest margin {worst_margin:.2e}"))
}

/// Orthonormal basis of the span of the columns (modified Gram-Schmidt).
fn orthonormalize(cols: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for mut v in cols {
        for _ in 0..2 {
            for q in &out {
                let c: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= y * c;
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        out.push(v.into_iter().map(|z| z / n).collect());
    }
    out
}

/// Dominant `m`-dimensional left singular subspace of `M` by subspace
/// iteration on `M M†`.
fn subspace_iteration(m: &ComplexMatrix<f64>, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
    let mmh = m.matmul(&m.adjoint());
    let d = m.rows();
    let mut basis = orthonormalize((0..k).map(|_| (0..d).map(|_| gaussian(rng)).collect()).collect());
    for _ in 0..20_000 {
        let next = orthonormalize(basis.iter().map(|v| mmh.matvec(v)).collect());
        let p_old = ComplexMatrix::from_columns(d, &basis);
        let p_new = ComplexMatrix::from_columns(d, &next);
        let change = p_old
            .matmul(&p_old.adjoint())
            .max_abs_diff(&p_new.matmul(&p_new.adjoint()));
        basis = next;
        if change < 1e-15 {
            break;
        }
    }
    basis
}

fn fidelity_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut worst_span = 0.0f64;
    let mut accepted = 0;
    while accepted < 50 {
        let da = rng.random_range(3..=8);
        let db = rng.random_range(da..=8);
        let m = rng.random_range(1..da);
        let psi = random_state(&mut rng, vec![da, db]);
        let split = Bipartition::contiguous(1, 2).unwrap();
        let mat = psi.split_matrix(&split).unwrap();
        let mut p = hermitian_eigvals(&mat.matmul(&mat.adjoint())).unwrap();
        p.reverse();
        // a clear gap at the cut keeps the iteration oracle well conditioned
        if p[m] / p[m - 1] > 0.9 || p.windows(2).any(|w| (w[0] - w[1]).abs() < 1e-6) {
            continue;
        }
        accepted += 1;
        let target = p[..m].iter().sum::<f64>().sqrt();

        let u = subspace_iteration(&mat, m, &mut rng);
        let uw = ComplexMatrix::from_columns(da, &u);
        let oracle = uw.adjoint_matmul(&mat).frobenius_norm_sqr().sqrt();

        let dmrg = dmrg_projection(&psi, &split, m).unwrap();
        let inside = (1.0 - truncation_error(&dmrg.isometry, &psi, &split).unwrap()).sqrt();

        // normalized truncated state |φ> = (P ⊗ 1)Ψ / ||.||; F = |<φ|Ψ>|²
        let full = kron(&dmrg.isometry.projector(), &ComplexMatrix::identity(db));
        let phi = PureState::normalized(vec![da, db], full.matvec(psi.amplitudes())).unwrap();
        let f = fidelity(&psi.to_density(), &phi.to_density()).unwrap().sqrt();

        let span = Isometry::new(uw).unwrap().projector_distance(&dmrg.isometry);
        for v in [oracle, inside, f, dmrg.retained().sqrt()] {
            worst = worst.max((v - target).abs());
        }
        worst_span = worst_span.max(span);
    }
    check(worst <= 1e-8, || format!("overlap deviation {worst:.3e} > 1e-8"))?;
    check(worst_span <= 1e-6, || {
        format!("optimal subspace differs from the DMRG one by {worst_span:.3e}")
    })?;
    Ok(format!("50 states, overlap deviation {worst:.2e}, subspace distance {worst_span:.2e}"))
}

fn fig1_reproduction() -> Outcome {
    let cfg = RunConfig::defaults(Experiment::Fig1);
    let rows = run_fig1(&cfg).map_err(|e| e.to_string())?;
    check(rows.len() == 60, || format!("{} rows", rows.len()))?;
    check(rows.windows(2).all(|w| w[0].kt < w[1].kt), || "kT not increasing".into())?;
    for r in &rows {
        check(r.eof_emp >= r.eof_dmrg - 1e-6, || format!("EMP below DMRG at kT={}", r.kt))?;
        for v in [r.eof_dmrg, r.eof_emp, r.eof_lower_bound] {
            check((0.0..=1.0).contains(&v), || format!("value {v} outside [0,1] at kT={}", r.kt))?;
        }
    }
    let gap = rows
        .iter()
        .filter(|r| r.kt < 1.0)
        .map(|r| r.eof_emp - r.eof_dmrg)
        .fold(f64::NEG_INFINITY, f64::max);
    check(gap >= 0.01, || format!("largest EMP-DMRG gap below kT=1 is {gap:.3e}"))?;
    let hot = rows.last().unwrap();
    let hot_max = hot.eof_dmrg.max(hot.eof_emp).max(hot.eof_lower_bound);
    check(hot_max < 1e-3, || format!("entanglement {hot_max:.3e} at kT={}", hot.kt))?;

    // ground-state block entropy from the exact ground vector
    let spec = &cfg.model;
    let h = build_hamiltonian(spec).unwrap();
    let eig = hermitian_eig(&h).unwrap();
    let g = PureState::new(qubit_dims(4), eig.vector(0)).unwrap();
    let s_ground = schmidt_decompose(&g, &Bipartition::new(vec![0, 1], vec![2, 3]).unwrap())
        .unwrap()
        .entropy();
    let cold = &rows[0];
    check((cold.eof_lower_bound - s_ground).abs() < 1e-3, || {
        format!("lower bound {} vs ground block entropy {s_ground} at kT={}", cold.eof_lower_bound, cold.kt)
    })?;

    let frozen = Table::parse(FIG1_FROZEN).map_err(|e| e.to_string())?;
    let expected = parse_fig1_rows(&frozen).map_err(|e| e.to_string())?;
    check(frozen.metadata == fig1_table(&cfg, &rows).metadata, || "metadata differs from frozen data".into())?;
    check(expected.len() == rows.len(), || "row count differs from frozen data".into())?;
    let mut drift = 0.0f64;
    for (a, b) in rows.iter().zip(&expected) {
        check(a.kt == b.kt, || format!("grid differs: {} vs {}", a.kt, b.kt))?;
        for (x, y) in [
            (a.eof_dmrg, b.eof_dmrg),
            (a.eof_emp, b.eof_emp),
            (a.eof_lower_bound, b.eof_lower_bound),
            (a.entropy_a, b.entropy_a),
        ] {
            drift = drift.max((x - y).abs());
        }
    }
    check(drift <= 1e-6, || format!("regression drift {drift:.3e} > 1e-6"))?;
    Ok(format!(
        "gap {gap:.3} below kT=1, max at kT=3 {hot_max:.1e}, cold bound {:.6} vs {s_ground:.6}, drift {drift:.1e}",
        cold.eof_lower_bound
    ))
}

fn dmrg_beats_wilson() -> Outcome {
    let spec = ModelSpec::heisenberg(10, 1.0);
    let h = build_hamiltonian(&spec).unwrap();
    let eig = hermitian_eig(&h).unwrap();
    let exact = eig.values[0];
    // residual check on the dense result
    let v = eig.vector(0);
    let res: f64 = h
        .matvec(&v)
        .iter()
        .zip(&v)
        .map(|(hv, x)| (hv - x * exact).norm_sqr())
        .sum::<f64>()
        .sqrt();
    check(res < 1e-8, || format!("dense residual {res:.3e}"))?;
    let wilson = wilson_run(&spec, 8, 2, 100, None).unwrap().final_energy();
    let dmrg = dmrg_run(&spec, 8, 100, None).unwrap().final_energy();
    let (ew, ed) = ((wilson - exact).abs(), (dmrg - exact).abs());
    check(ed < ew, || format!("DMRG error {ed:.3e} not below Wilson error {ew:.3e}"))?;
    let rel = ed / exact.abs();
    check(rel < 1e-2, || format!("relative DMRG error {rel:.3e}"))?;
    Ok(format!("exact {exact:.8}, Wilson error {ew:.3e}, DMRG error {ed:.3e} (rel {rel:.2e})"))
}

fn truncation_free() -> Outcome {
    let mut worst = 0.0f64;
    let mut runs = 0;
    for n in 2..=8usize {
        for spec in [ModelSpec::heisenberg(n, 1.0), ModelSpec::transverse_ising(n, 1.0, 0.7)] {
            let exact: f64 = hermitian_eigvals(&build_hamiltonian(&spec).unwrap()).unwrap()[0];
            let full = 1 << n;
            let w = wilson_run(&spec, full, 1, 100, None).map_err(|e| e.to_string())?;
            check(w.last().sites == n, || format!("Wilson stopped at {} sites", w.last().sites))?;
            worst = worst.max((w.final_energy() - exact).abs());
            runs += 1;
            if n % 2 == 0 {
                let d = dmrg_run(&spec, full, 100, None).map_err(|e| e.to_string())?;
                check(d.last().sites == n, || format!("DMRG stopped at {} sites", d.last().sites))?;
                worst = worst.max((d.final_energy() - exact).abs());
                runs += 1;
            }
        }
    }
    check(worst <= 1e-8, || format!("max energy error {worst:.3e} > 1e-8"))?;
    Ok(format!("{runs} runs up to N=8, max error {worst:.2e}"))
}

fn measure_conformance() -> Outcome {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex64::new(re, 0.0);
    let z = c(0.0);
    let bell = PureState::new(qubit_dims(2), vec![c(s), z, z, c(s)]).unwrap();
    let e = schmidt_decompose(&bell, &Bipartition::contiguous(1, 2).unwrap())
        .unwrap()
        .entropy();
    check((e - 1.0).abs() <= 1e-10, || format!("Bell entropy {e}"))?;

    let singlet = PureState::new(qubit_dims(2), vec![z, c(s), c(-s), z]).unwrap();
    let cs = concurrence(&singlet.to_density()).unwrap();
    check((cs - 1.0).abs() <= 1e-10, || format!("singlet concurrence {cs}"))?;

    let p = 0.8;
    let werner = &singlet.to_density().matrix().scaled(p) + &ComplexMatrix::identity(4).scaled((1.0 - p) / 4.0);
    let cw = concurrence(&DensityMatrix::new(qubit_dims(2), werner).unwrap()).unwrap();
    check((cw - 0.7).abs() <= 1e-8, || format!("Werner concurrence {cw}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let factors: Vec<Vec<Complex64>> = (0..6).map(|_| vec![gaussian(&mut rng), gaussian(&mut rng)]).collect();
    let factors: Vec<Vec<Complex64>> = factors
        .into_iter()
        .map(|f| {
            let n = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
            f.into_iter().map(|x| x / n).collect()
        })
        .collect();
    let product = PureState::product(&factors).unwrap();
    let mut corr = 0.0f64;
    for i in 0..6 {
        for j in (0..6).filter(|&j| j != i) {
            for a in Axis::ALL {
                for b in Axis::ALL {
                    corr = corr.max(connected_correlator(&product, i, a, j, b).unwrap().abs());
                }
            }
        }
    }
    check(corr <= 1e-12, || format!("product-state correlator {corr:.3e}"))?;

    // closed form: ρ_A eigenvalues (1 ± √(1 - 4 det ρ_A)) / 2 with
    // det ρ_A = |ad - bc|² for amplitudes (a, b, c, d)
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let psi = random_state(&mut rng, qubit_dims(2));
        let a = psi.amplitudes();
        let det = (a[0] * a[3] - a[1] * a[2]).norm_sqr();
        let lam = (1.0 + (1.0 - 4.0 * det).max(0.0).sqrt()) / 2.0;
        let h = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
        let entropy = h(lam) + h(1.0 - lam);
        let eof = eof_two_qubits(&psi.to_density()).unwrap();
        worst = worst.max((eof - entropy).abs());
    }
    check(worst <= 1e-8, || format!("pure-state EoF deviation {worst:.3e}"))?;
    Ok(format!(
        "Bell {e:.12}, singlet C {cs:.12}, Werner C {cw:.10}, product corr {corr:.1e}, pure EoF dev {worst:.1e}"
    ))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_entren");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}.csv"));
        let status = Command::new(bin)
            .args(["fig1", "--kt-steps", "8", "--restarts", "8", "--seed", "11", "--out"])
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        check(status.success(), || format!("run {k} exited with {status}"))?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    check(outputs[0] == outputs[1], || "CLI outputs differ".into())?;

    let mut cfg = RunConfig::defaults(Experiment::Fig1);
    cfg.kt_steps = 8;
    cfg.optimizer.restarts = 8;
    cfg.optimizer.seed = 11;
    let text = |cfg: &RunConfig| fig1_table(cfg, &run_fig1(cfg).unwrap()).to_csv_string();
    let (a, b) = (text(&cfg), text(&cfg));
    check(a == b, || "in-process outputs differ".into())?;
    check(a.as_bytes() == outputs[0].as_slice(), || "library and CLI outputs differ".into())?;
    Ok(format!("two CLI runs and two library runs byte-identical ({} bytes)", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("truncation error identity", truncation_identity, 10),
        ("Ky Fan optimality of DMRG projection", ky_fan, 60),
        ("fidelity-derivation equivalence", fidelity_equivalence, 60),
        ("two-block EoF curves (DMRG vs EMP)", fig1_reproduction, 600),
        ("DMRG beats Wilson, Heisenberg N=10 m=8", dmrg_beats_wilson, 120),
        ("truncation-free exactness N<=8", truncation_free, 60),
        ("entanglement-measure conformance", measure_conformance, 30),
        ("determinism", determinism, 600),
    ];
    let mut failed = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed > Duration::from_secs(*limit) {
                Err(format!("{msg}; runtime {:.1}s over {limit}s", elapsed.as_secs_f64()))
            } else {
                Ok(msg)
            }
        });
        match outcome {
            Ok(msg) => println!("PASS [{}] {name}: {msg} ({:.2}s)", k + 1, elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name}: {msg} ({:.2}s)", k + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
