//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use fracalderon_core::extension::{
    default_heights, extension_pde_residual, trace_constant, uniform_heights, weighted_profile_derivative,
};
use fracalderon_core::field::{dft_forward, dft_inverse};
use fracalderon_core::forward::{coercivity_check, smooth_bump};
use fracalderon_core::inverse::{default_alphas, interior_bump, quotient_potential, Tikhonov};
use fracalderon_core::operator::{duality_check, mapping_bound_check};
use fracalderon_core::*;
use num_complex::Complex;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn band_limited(g: &Grid64, cutoff: f64, seed: u64) -> Field64 {
    let mut spec = dft_forward(&random_field(g, seed));
    for k in 0..g.len() {
        if g.lambda_modulus(k) > cutoff {
            spec.coeffs[k] = Complex::new(0.0, 0.0);
        }
    }
    dft_inverse(&spec).unwrap()
}

fn desk_grid() -> Grid64 {
    GridConfig::new(1, 2.0, 2.0, 128, 128).unwrap()
}

fn c1_spectral_identities() -> Outcome {
    let g = desk_grid();
    let mut worst = 0.0f64;
    for s in [0.25, 0.5, 0.75] {
        for pair in 0..20u64 {
            let u = random_field(&g, 2 * pair);
            let w = random_field(&g, 2 * pair + 1);
            worst = worst.max(duality_check(&u, &w, s).unwrap().max());
        }
    }
    (worst < 1e-11, format!("max residual {worst:.2e} (limit 1e-11)"))
}

fn c2_mapping_bound() -> Outcome {
    let g = desk_grid();
    let worst = (0..100u64)
        .map(|k| mapping_bound_check(&random_field(&g, 1000 + k), 0.5).unwrap())
        .fold(0.0f64, f64::max);
    (worst <= 1.0 + 1e-10, format!("max ratio {worst:.12} (limit 1 + 1e-10)"))
}

fn c3_kernel_oracle() -> Outcome {
    let sigma2 = 2.0 * 0.25f64 * 0.25;
    let bump = |t: f64, x: [f64; 2]| (-(t * t + x[0] * x[0]) / sigma2).exp();
    let g = desk_grid();
    let u = Field::from_fn(&g, bump);
    // spectral reference on a box wide enough that periodization is negligible
    let (lt, lx) = (32.0, 16.0);
    let nt = (g.nodes_time as f64 * lt / g.half_period_time) as usize;
    let nx = (g.nodes_space as f64 * lx / g.half_period_space) as usize;
    let big = GridConfig::new(1, lt, lx, nt, nx).unwrap();
    let oracle = apply_symbol(&Field::from_fn(&big, bump), &SymbolSpec::forward(0.5)).unwrap();
    let support: Vec<usize> = (0..g.len())
        .filter(|&k| {
            let t = g.time_at(g.time_index(k));
            let x = g.space_at(g.space_index(k))[0];
            t * t + x * x < 0.75 * 0.75
        })
        .collect();
    let (ot, ox) = ((nt - g.nodes_time) / 2, (nx - g.nodes_space) / 2);
    let reference: Vec<f64> = support
        .iter()
        .map(|&k| oracle.values[big.node(g.time_index(k) + ot, g.space_index(k) + ox)])
        .collect();
    let rn = reference.iter().map(|v| v * v).sum::<f64>().sqrt();
    let devs: Vec<f64> = (0..3)
        .map(|level| {
            let quad = KernelQuadrature::refinement_level(&g, level).unwrap();
            let k = apply_kernel(&u, 0.5, &quad).unwrap();
            support
                .iter()
                .zip(&reference)
                .map(|(&n, r)| (k.values[n] - r).powi(2))
                .sum::<f64>()
                .sqrt()
                / rn
        })
        .collect();
    let pass = devs[2] < 1e-3 && devs.windows(2).all(|w| w[1] < w[0]);
    (
        pass,
        format!(
            "deviation by level {:.3e} {:.3e} {:.3e} (reference < 1e-3, decreasing)",
            devs[0], devs[1], devs[2]
        ),
    )
}

fn c4_causality() -> Outcome {
    let g = GridConfig::new(1, 2.0, 2.0, 64, 64).unwrap();
    let quad = KernelQuadrature::reference(&g).unwrap();
    let u = random_field(&g, 77);
    let base = apply_kernel(&u, 0.5, &quad).unwrap();
    let mut bitwise = true;
    for cut in [5usize, 31, 50] {
        let mut v = u.clone();
        let fresh = random_field(&g, 78 + cut as u64);
        for k in 0..g.len() {
            if g.time_index(k) > cut {
                v.values[k] = fresh.values[k] * 1e3;
            }
        }
        let out = apply_kernel(&v, 0.5, &quad).unwrap();
        bitwise &= (0..g.len())
            .filter(|&k| g.time_index(k) <= cut)
            .all(|k| out.values[k].to_bits() == base.values[k].to_bits());
    }
    (bitwise, "past-time outputs bitwise unchanged under future edits".into())
}

fn c5_coercivity() -> Outcome {
    let m = desk(64);
    let mut worst = f64::INFINITY;
    for s in [0.25, 0.5, 0.75] {
        for k in 0..100u64 {
            let v = random_on(&m.grid, &m.omega_t, 5000 + k);
            let (lhs, rhs) = coercivity_check(&v, s).unwrap();
            worst = worst.min((lhs - rhs) / rhs.abs().max(1.0));
        }
    }
    (
        worst >= -1e-10,
        format!("min (B0 - floor)/scale {worst:.3e} (>= -1e-10)"),
    )
}

fn c6_manufactured() -> Outcome {
    let m = desk(64);
    let q = Potential::from_fn(&m, |t, x| 0.5 * smooth_bump(t, x, 0.0, [0.0; 2], 1.0, 0.5, 1)).unwrap();
    let ustar = Field::from_fn(&m.grid, |t, x| smooth_bump(t, x, 0.0, [0.2, 0.0], 0.8, 1.5, 1));
    let outside: Vec<usize> = (0..m.grid.len()).filter(|&k| !m.is_interior(k)).collect();
    let f = ustar.restricted(&outside);
    let lu = apply_symbol(&ustar, &SymbolSpec::forward(0.5)).unwrap();
    let mut src = Field::zeros(&m.grid);
    for (i, &k) in m.omega_t.iter().enumerate() {
        src.values[k] = lu.values[k] + q.values[i] * ustar.values[k];
    }
    let opts = SolverOptions {
        tol: 1e-10,
        ..Default::default()
    };
    let sol = solve_dirichlet(&f, &src, &q, 0.5, &m, &opts).unwrap();
    let err = sol.u.sub(&ustar).restricted(&m.omega_t).l2_norm() / ustar.restricted(&m.omega_t).l2_norm();
    (
        err < 1e-8,
        format!(
            "relative L2 error {err:.2e} (limit 1e-8), {} iterations",
            sol.krylov_iters
        ),
    )
}

fn c7_dn_adjoint() -> Outcome {
    let m = make_masks(&desk_grid(), &Geometry::desk_default()).unwrap();
    let q = Potential::from_fn(&m, |t, x| 0.8 * smooth_bump(t, x, 0.0, [0.0; 2], 1.0, 0.5, 1)).unwrap();
    let opts = SolverOptions::default();
    let mut worst = 0.0f64;
    for k in 0..10u64 {
        let f = random_on(&m.grid, &m.control_window, 300 + k);
        let g = random_on(&m.grid, &m.measure_window, 400 + k);
        let fwd = dn_apply(&f, &q, 0.5, &m, &opts).unwrap();
        let adj = dn_adjoint_apply(&g, &q, 0.5, &m, &opts).unwrap();
        worst = worst.max(adjoint_pairing_residual(&fwd, &adj));
    }
    (worst < 1e-9, format!("max pairing residual {worst:.2e} (limit 1e-9)"))
}

fn c8_alessandrini() -> Outcome {
    let m = desk(32);
    let opts = SolverOptions::default();
    let bump = |amp: f64, t0: f64, x0: f64| {
        Potential::from_fn(&m, move |t, x| amp * smooth_bump(t, x, t0, [x0, 0.0], 0.7, 0.35, 1)).unwrap()
    };
    let pairs = [
        (bump(1.0, 0.0, 0.0), Potential::zero(&m)),
        (bump(0.8, 0.3, 0.1), bump(0.4, -0.2, -0.1)),
        (Potential::constant(&m, 0.6), Potential::constant(&m, -0.3)),
        (bump(-0.5, 0.0, 0.2), Potential::constant(&m, 0.2)),
        (bump(1.5, -0.4, 0.0), bump(1.5, 0.4, 0.0)),
    ];
    let mut worst = 0.0f64;
    for (i, (q1, q2)) in pairs.iter().enumerate() {
        for j in 0..3u64 {
            let seed = 10 * i as u64 + j;
            let f1 = random_on(&m.grid, &m.control_window, 600 + seed);
            let f2 = random_on(&m.grid, &m.measure_window, 700 + seed);
            worst = worst.max(alessandrini(q1, q2, &f1, &f2, 0.5, &m, &opts).unwrap().residual);
        }
    }
    let small = desk(16);
    let tight = SolverOptions {
        tol: 1e-13,
        ..Default::default()
    };
    let q2 = Potential::constant(&small, 0.25);
    let q1 = q2
        .axpy(
            0.9,
            &Potential::from_fn(&small, |t, x| smooth_bump(t, x, 0.0, [0.0; 2], 1.0, 0.5, 1)).unwrap(),
        )
        .unwrap();
    let f1 = random_on(&small.grid, &small.control_window, 800);
    let f2 = random_on(&small.grid, &small.measure_window, 801);
    let rep = alessandrini(&q1, &q2, &f1, &f2, 0.5, &small, &tight).unwrap();
    let dense = dense_alessandrini_lhs(0.5, &small, &q1, &q2, &f1, &f2);
    let agree = (rep.lhs - dense).abs().max((rep.rhs - dense).abs()) / dense.abs();
    (
        worst < 1e-7 && agree < 1e-8,
        format!("max residual {worst:.2e} (limit 1e-7), dense agreement {agree:.2e} (limit 1e-8)"),
    )
}

fn c9_trace_constant() -> Outcome {
    let g = GridConfig::new(1, 2.0, 2.0, 32, 32).unwrap();
    let u = band_limited(&g, 20.0, 7);
    let mut worst = 0.0f64;
    for s in [0.25, 0.5, 0.75] {
        let tr = neumann_trace(&extend(&u, s, &default_heights()).unwrap()).unwrap();
        let ds = trace_constant(s);
        worst = worst.max((tr.fitted_constant.abs() - ds).abs() / ds);
    }
    let d_half: f64 = trace_constant(0.5);
    let per_mode = weighted_profile_derivative(0.5, Complex::new(1.0, 0.0), 1e-12).unwrap();
    let closed = (d_half - 1.0).abs() < 1e-14 && (per_mode - Complex::new(-1.0, 0.0)).norm() < 1e-9;
    (
        worst < 1e-4 && closed,
        format!(
            "max relative |kappa| error {worst:.2e} (limit 1e-4), |d_1/2| = {d_half}, per-mode trace {:.10}",
            per_mode.re
        ),
    )
}

fn c10_pde_residual() -> Outcome {
    let pi = std::f64::consts::PI;
    let g = GridConfig::new(1, pi, pi, 16, 16).unwrap();
    let u = band_limited(&g, 12.0, 5);
    let res = |n| extension_pde_residual(&extend(&u, 0.5, &uniform_heights(0.25, 1.25, n)).unwrap()).unwrap();
    let factor = res(41) / res(81);
    (
        (3.5..=4.5).contains(&factor),
        format!("refinement factor {factor:.3} (in [3.5, 4.5])"),
    )
}

fn c11_tikhonov() -> Outcome {
    let m = desk(64);
    let truth = interior_bump(&m, 0.0, [0.0; 2], 0.9, 0.45);
    let tik = Tikhonov::new(0.5, &m, Penalty::L2).unwrap();
    let h = Field::scatter(&m.grid, &m.measure_window, &tik.forward_map(&truth.gather(&m.omega_t)));
    let opts = SolverOptions {
        tol: 1e-12,
        max_iters: 5000,
        ..Default::default()
    };
    let path = tik.path(&h, &default_alphas(), &opts, Some(&truth)).unwrap();
    let errs = path.solution_errors.unwrap();
    let pass = errs.windows(2).all(|w| w[1] < w[0]) && path.failures.iter().all(|f| f.is_none());
    let list: Vec<String> = errs.iter().map(|e| format!("{e:.3e}")).collect();
    (pass, format!("errors along alpha 1e-2..1e-8: {}", list.join(" ")))
}

/// Measurement on the whole exterior slab away from the control window.
pub fn recovery_geometry() -> Geometry {
    let band = |lo: f64, hi: f64| Shape::Box {
        lo: [lo, 0.0],
        hi: [hi, 0.0],
    };
    Geometry {
        measure: Region {
            parts: vec![band(-1.95, -0.55), band(0.55, 0.95), band(1.55, 1.95)],
        },
        ..Geometry::desk_default()
    }
}

fn c12_recovery() -> Outcome {
    let g = GridConfig::new(1, 2.0, 2.0, 64, 64).unwrap();
    let m = make_masks(&g, &recovery_geometry()).unwrap();
    let q = Potential::from_fn(&m, |t, x| 0.8 * smooth_bump(t, x, 0.0, [0.0; 2], 0.8, 0.4, 1)).unwrap();
    let f = Field::from_fn(&g, |t, x| smooth_bump(t, x, 0.0, [1.25, 0.0], 0.95, 0.25, 1)).restricted(&m.control_window);
    let opts = SolverOptions {
        tol: 1e-13,
        max_iters: 5000,
        ..Default::default()
    };
    let data = dn_apply(&f, &q, 0.5, &m, &opts).unwrap();
    let alphas: Vec<f64> = (2..=12).map(|k| 10f64.powi(-k)).collect();
    let rec = recover_potential(&f, &data.output, 0.5, &alphas, Penalty::L2, &m, &opts, 1e-2).unwrap();
    let err = rec.masked_error(&q);
    let exact = quotient_potential(&data.solution.u, 0.5, &m, 1e-2)
        .unwrap()
        .masked_error(&q);
    (
        err < 0.1 && exact < 1e-9,
        format!(
            "masked error {err:.3e} (limit 0.1, coverage {:.3}), exact-solution quotient {exact:.2e} (limit 1e-9)",
            rec.coverage
        ),
    )
}

fn c13_runge() -> Outcome {
    let m = desk(64);
    let q = Potential::from_fn(&m, |t, x| 0.5 * smooth_bump(t, x, 0.0, [0.0; 2], 0.8, 0.4, 1)).unwrap();
    let opts = SolverOptions {
        tol: 1e-12,
        ..Default::default()
    };
    let bump = interior_bump(&m, 0.0, [0.0; 2], 0.5, 0.25);
    let one = Field::from_fn(&m.grid, |_, _| 1.0);
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, target) in [("bump", &bump), ("one", &one)] {
        let errs: Vec<f64> = [4, 16, 64]
            .iter()
            .map(|&k| {
                runge_control(target, k, 1e-14, &q, 0.5, &m, &opts, RungeDirection::Forward)
                    .unwrap()
                    .approx_error
            })
            .collect();
        pass &= errs.windows(2).all(|w| w[1] < w[0]);
        detail.push(format!("{name} {:.4} {:.4} {:.4}", errs[0], errs[1], errs[2]));
    }
    (pass, format!("approx_error over K = 4, 16, 64: {}", detail.join("; ")))
}

fn c14_discrimination() -> Outcome {
    let m = desk(64);
    let q2 = Potential::constant(&m, 0.2);
    // gap of 0.6 on a cell around the origin
    let cell = Potential::from_fn(&m, |t, x| if t.abs() < 0.2 && x[0].abs() < 0.15 { 0.6 } else { 0.0 }).unwrap();
    let q1 = q2.axpy(1.0, &cell).unwrap();
    let opts = SolverOptions::default();
    let probes = inverse::runge_basis(&m, &m.control_window, 16).unwrap();
    let best = probes
        .iter()
        .map(|f| {
            let a = dn_apply(f, &q1, 0.5, &m, &opts).unwrap().output;
            let b = dn_apply(f, &q2, 0.5, &m, &opts).unwrap().output;
            a.sub(&b).l2_norm() / b.l2_norm()
        })
        .fold(0.0f64, f64::max);
    let floor = 100.0 * opts.tol;
    (
        best >= floor,
        format!("max relative DN difference {best:.3e} (needs >= {floor:.0e})"),
    )
}

fn main() {
    let criteria: [Criterion; 14] = [
        (
            "spectral identity suite",
            c1_spectral_identities,
            Duration::from_secs(10),
        ),
        ("mapping bound", c2_mapping_bound, Duration::from_secs(5)),
        (
            "kernel/spectral oracle equivalence",
            c3_kernel_oracle,
            Duration::from_secs(120),
        ),
        ("causality of the kernel form", c4_causality, Duration::from_secs(30)),
        ("coercivity", c5_coercivity, Duration::from_secs(30)),
        ("manufactured forward solve", c6_manufactured, Duration::from_secs(60)),
        ("DN adjoint pairing", c7_dn_adjoint, Duration::from_secs(120)),
        ("Alessandrini identity", c8_alessandrini, Duration::from_secs(300)),
        ("extension trace constant", c9_trace_constant, Duration::from_secs(60)),
        ("extension PDE residual", c10_pde_residual, Duration::from_secs(60)),
        ("Tikhonov convergence", c11_tikhonov, Duration::from_secs(300)),
        ("single-measurement recovery", c12_recovery, Duration::from_secs(600)),
        ("Runge density", c13_runge, Duration::from_secs(600)),
        ("discrimination", c14_discrimination, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(outcome) => outcome,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = ok && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<36} {}  {detail}; {:.2}s of {}s",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
