use std::fs::File;
use std::path::{Path, PathBuf};
use std::rc::Rc;

use fracalderon_core::extension::{extension_pde_residual, trace_constant, uniform_heights};
use fracalderon_core::field::{dft_forward, dft_inverse};
use fracalderon_core::forward::{coercivity_check, smooth_bump};
use fracalderon_core::inverse::{interior_bump, quotient_potential, runge_basis};
use fracalderon_core::io::{load_fhf1, save_fhf1, save_field_csv};
use fracalderon_core::linalg::{solve_dense, Dense};
use fracalderon_core::operator::{duality_check_with_branch, mapping_bound_check, Branch, Variant};
use fracalderon_core::{
    adjoint_pairing_residual, alessandrini, apply_kernel, dn_adjoint_apply, dn_apply, extend, make_masks,
    neumann_trace, recover_potential, runge_control, solve_dirichlet, Error, Field64, ForwardProblem, KernelQuadrature,
    Masks64, Potential64, RungeDirection,
};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::{BumpSpec, DatumSpec, ExperimentConfig, ExtensionField, PotentialSpec, RungeTarget};
use crate::report::RunReport;

/// Name of the check that records Krylov convergence; a failure maps to exit code 3.
pub const CONVERGED: &str = "converged";

#[derive(Debug)]
pub enum Failure {
    Config(String),
    NonConvergence(String),
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Config(_) => 2,
            Failure::NonConvergence(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) | Failure::NonConvergence(m) | Failure::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NonConvergence { .. } => Failure::NonConvergence(msg),
            Error::Geometry(_) | Error::InvalidArgument(_) | Error::Domain(_) | Error::Format(_) => {
                Failure::Config(msg)
            }
            _ => Failure::Runtime(msg),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

pub const COMMANDS: &[&str] = &[
    "forward",
    "dnmap",
    "alessandrini",
    "extension",
    "reconstruct",
    "runge",
    "selftest",
];

/// Stream ids; each stochastic suite draws from its own ChaCha stream.
mod stream {
    pub const DATUM: u64 = 1;
    pub const DN_PAIRS: u64 = 2;
    pub const LINEARITY: u64 = 3;
    pub const ALESSANDRINI: u64 = 4;
    pub const EXTENSION: u64 = 5;
    pub const NOISE: u64 = 6;
    pub const SELFTEST: u64 = 7;
}

pub struct Run<'a> {
    pub cfg: &'a ExperimentConfig,
    pub out: &'a Path,
    pub report: RunReport,
    masks: Rc<Masks64>,
}

impl<'a> Run<'a> {
    pub fn new(command: &str, cfg: &'a ExperimentConfig, config_text: &str, out: &'a Path) -> Result<Self> {
        let masks = Rc::new(make_masks(&cfg.grid, &cfg.geometry)?);
        std::fs::create_dir_all(out)
            .map_err(|e| Failure::Config(format!("cannot create output directory {}: {e}", out.display())))?;
        Ok(Self {
            cfg,
            out,
            report: RunReport::new(command, config_text, cfg.seed),
            masks,
        })
    }

    fn rng(&self, id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(id);
        rng
    }

    fn random_on(&self, nodes: &[usize], rng: &mut ChaCha8Rng) -> Field64 {
        let vals: Vec<f64> = nodes.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        Field64::scatter(&self.cfg.grid, nodes, &vals)
    }

    fn bump_field(&self, b: &BumpSpec) -> Field64 {
        let dims = self.cfg.grid.n_space_dims;
        Field64::from_fn(&self.cfg.grid, |t, x| {
            b.amplitude * smooth_bump(t, x, b.center_t, b.center_x, b.width_t, b.width_x, dims)
        })
    }

    fn potential(&self, spec: &PotentialSpec) -> Result<Potential64> {
        Ok(match spec {
            PotentialSpec::Zero => Potential64::zero(&self.masks),
            PotentialSpec::Constant(c) => Potential64::constant(&self.masks, *c),
            PotentialSpec::Bump(b) => Potential64::from_field(&self.bump_field(b), &self.masks)?,
            PotentialSpec::File(p) => {
                let f: Field64 = load_fhf1(p).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?;
                if f.grid != self.cfg.grid {
                    return Err(Failure::Config(format!("{}: grid differs from [grid]", p.display())));
                }
                Potential64::from_field(&f, &self.masks)?
            }
        })
    }

    fn datum(&self) -> Field64 {
        let window = &self.masks.control_window;
        match &self.cfg.datum {
            DatumSpec::Zero => Field64::zeros(&self.cfg.grid),
            DatumSpec::Bump(b) => self.bump_field(b).restricted(window),
            DatumSpec::Random => self.random_on(window, &mut self.rng(stream::DATUM)),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write_field(&mut self, name: &str, field: &Field64) -> Result<()> {
        let fhf = self.path(&format!("{name}.fhf1"));
        let csv = self.path(&format!("{name}.csv"));
        save_fhf1(&fhf, field)?;
        save_field_csv(&csv, field)?;
        self.report.output(format!("{name}_fhf1"), &fhf);
        self.report.output(format!("{name}_csv"), &csv);
        Ok(())
    }

    fn write_table(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let path = self.path(&format!("{name}.csv"));
        let io = |e: csv::Error| Failure::Config(format!("{}: {e}", path.display()));
        let file = File::create(&path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.write_record(r).map_err(io)?;
        }
        w.flush().map_err(|e| Failure::Config(e.to_string()))?;
        self.report.output(format!("{name}_csv"), &path);
        Ok(())
    }

    fn tol(&self) -> f64 {
        self.cfg.solver.tol
    }
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

pub fn forward(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let masks = Rc::clone(&run.masks);
    let m = &*masks;
    let q = run.potential(&cfg.potential)?;
    let sol = match &cfg.forward.manufactured {
        Some(b) => {
            let ustar = run.bump_field(b);
            let outside: Vec<usize> = (0..cfg.grid.len()).filter(|&k| !m.is_interior(k)).collect();
            let f = ustar.restricted(&outside);
            let lu = fracalderon_core::FracOperator::new(&cfg.grid, cfg.s)?.apply(&ustar);
            let mut src = Field64::zeros(&cfg.grid);
            for (i, &k) in m.omega_t.iter().enumerate() {
                src.values[k] = lu.values[k] + q.values[i] * ustar.values[k];
            }
            let sol = solve_dirichlet(&f, &src, &q, cfg.s, m, &cfg.solver)?;
            let err = sol.u.sub(&ustar).restricted(&m.omega_t).l2_norm() / ustar.restricted(&m.omega_t).l2_norm();
            run.report.diag("manufactured_error", err);
            run.report.check("manufactured_error", err < cfg.forward.error_tol);
            sol
        }
        None => solve_dirichlet(&run.datum(), &Field64::zeros(&cfg.grid), &q, cfg.s, m, &cfg.solver)?,
    };
    run.report.diag("interior_residual", sol.interior_residual);
    run.report.diag("krylov_iters", sol.krylov_iters as f64);
    run.report.diag("krylov_relres", sol.krylov_relres);
    run.report.diag("u_l2_norm", sol.u.l2_norm());
    run.report
        .diag("u_interior_max", sol.u.restricted(&m.omega_t).max_abs());
    run.report.check(CONVERGED, sol.krylov_relres <= run.tol());
    run.write_field("u", &sol.u)
}

pub fn dnmap(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let masks = Rc::clone(&run.masks);
    let m = &*masks;
    let q = run.potential(&cfg.potential)?;
    let f = run.datum();
    let rec = dn_apply(&f, &q, cfg.s, m, &cfg.solver)?;

    let mut rng = run.rng(stream::DN_PAIRS);
    let mut worst = 0.0f64;
    for _ in 0..cfg.dnmap.pairs {
        let g = run.random_on(&m.measure_window, &mut rng);
        let adj = dn_adjoint_apply(&g, &q, cfg.s, m, &cfg.solver)?;
        worst = worst.max(adjoint_pairing_residual(&rec, &adj));
    }

    let f2 = run.random_on(&m.control_window, &mut run.rng(stream::LINEARITY));
    let combo = dn_apply(&f.axpy(2.0, &f2), &q, cfg.s, m, &cfg.solver)?.output;
    let parts = rec.output.axpy(2.0, &dn_apply(&f2, &q, cfg.s, m, &cfg.solver)?.output);
    let linearity = combo.sub(&parts).l2_norm() / parts.l2_norm().max(f64::MIN_POSITIVE);

    run.report.diag("datum_l2_norm", f.l2_norm());
    run.report.diag("output_l2_norm", rec.output.l2_norm());
    run.report.diag("pairing_residual", worst);
    run.report.diag("linearity_defect", linearity);
    run.report.diag("krylov_iters", rec.solution.krylov_iters as f64);
    run.report.check("pairing", worst < cfg.dnmap.pairing_tol);
    run.report.check("linearity", linearity < cfg.dnmap.linearity_tol);
    run.report.check(CONVERGED, rec.solution.krylov_relres <= run.tol());
    run.write_field("datum", &f)?;
    run.write_field("dn_output", &rec.output)
}

/// `Lambda_Q f` on the measure window by a dense direct solve.
fn dense_dn(m: &Masks64, q: &Potential64, s: f64, f: &Field64) -> Result<Field64> {
    let prob = ForwardProblem::new(s, m, q, Variant::Forward)?;
    let n = prob.unknowns();
    let mut cols = Vec::with_capacity(n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let mut col = vec![0.0; n];
        prob.apply(&e, &mut col);
        cols.push(col);
        e[j] = 0.0;
    }
    let lf = prob.operator().apply(f);
    let b: Vec<f64> = m.omega_t.iter().map(|&k| -lf.values[k]).collect();
    let v = solve_dense(&Dense::from_columns(&cols), &b)?;
    let mut u = f.clone();
    for (&k, &x) in m.omega_t.iter().zip(&v) {
        u.values[k] = x;
    }
    Ok(prob.operator().apply(&u).restricted(&m.measure_window))
}

/// Largest interior system the dense cross-check will assemble.
const DENSE_LIMIT: usize = 3000;

pub fn alessandrini_cmd(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let masks = Rc::clone(&run.masks);
    let m = &*masks;
    let q1 = run.potential(&cfg.potential)?;
    let q2 = run.potential(&cfg.potential2)?;
    let dense = cfg.alessandrini.dense_check;
    if dense && m.omega_t.len() > DENSE_LIMIT {
        return Err(Failure::Config(format!(
            "dense_check needs at most {DENSE_LIMIT} interior nodes, this grid has {}",
            m.omega_t.len()
        )));
    }
    let mut rng = run.rng(stream::ALESSANDRINI);
    let mut rows = Vec::new();
    let (mut worst, mut dense_worst) = (0.0f64, 0.0f64);
    for k in 0..cfg.alessandrini.pairs {
        let f1 = run.random_on(&m.control_window, &mut rng);
        let f2 = run.random_on(&m.measure_window, &mut rng);
        let rep = alessandrini(&q1, &q2, &f1, &f2, cfg.s, m, &cfg.solver)?;
        worst = worst.max(rep.residual);
        let mut row = vec![k.to_string(), num(rep.lhs), num(rep.rhs), num(rep.residual)];
        if dense {
            let lhs = dense_dn(m, &q1, cfg.s, &f1)?
                .sub(&dense_dn(m, &q2, cfg.s, &f1)?)
                .dot(&f2);
            let scale = lhs.abs() + run.tol() * f1.l2_norm() * f2.l2_norm();
            let gap = (rep.lhs - lhs).abs().max((rep.rhs - lhs).abs()) / scale;
            dense_worst = dense_worst.max(gap);
            row.push(num(lhs));
        }
        rows.push(row);
    }
    run.report.diag("max_residual", worst);
    run.report.check("identity", worst < cfg.alessandrini.residual_tol);
    let mut header = vec!["pair", "lhs", "rhs", "residual"];
    if dense {
        header.push("dense_lhs");
        run.report.diag("dense_disagreement", dense_worst);
        run.report
            .check("dense_agreement", dense_worst < cfg.alessandrini.dense_tol);
    }
    run.write_table("alessandrini", &header, &rows)
}

pub fn extension_cmd(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let e = &cfg.extension;
    let u = match &e.field {
        ExtensionField::Zero => Field64::zeros(&cfg.grid),
        ExtensionField::Bump(b) => run.bump_field(b),
        ExtensionField::BandLimited { cutoff } => {
            let all: Vec<usize> = (0..cfg.grid.len()).collect();
            let raw = run.random_on(&all, &mut run.rng(stream::EXTENSION));
            let mut spec = dft_forward(&raw);
            for k in 0..cfg.grid.len() {
                if cfg.grid.lambda_modulus(k) > *cutoff {
                    spec.coeffs[k] = Complex::new(0.0, 0.0);
                }
            }
            dft_inverse(&spec)?
        }
    };
    let ext = extend(&u, cfg.s, &e.heights)?;
    let tr = neumann_trace(&ext)?;
    let ds = trace_constant(cfg.s);
    run.report.diag("trace_constant", ds);
    run.report.diag("zero_field", if tr.zero_field { 1.0 } else { 0.0 });
    if tr.zero_field {
        run.report.check("zero_trace", tr.weighted_neumann.max_abs() == 0.0);
    } else {
        let err = (tr.fitted_constant.abs() - ds).abs() / ds;
        run.report.diag("fitted_constant", tr.fitted_constant);
        run.report.diag("kappa_error", err);
        run.report.diag("ratio_variation", tr.ratio_variation);
        run.report.diag("extrapolation_residual", tr.extrapolation_residual);
        run.report.check("kappa", err < e.kappa_tol);
    }
    if let Some((lo, hi, n)) = e.refinement {
        let res = |k| -> Result<f64> {
            Ok(extension_pde_residual(&extend(
                &u,
                cfg.s,
                &uniform_heights(lo, hi, k),
            )?)?)
        };
        let (coarse, fine) = (res(n)?, res(2 * n - 1)?);
        let factor = coarse / fine;
        run.report.diag("pde_residual_coarse", coarse);
        run.report.diag("pde_residual_fine", fine);
        run.report.diag("refinement_factor", factor);
        run.report
            .check("second_order", factor >= e.factor_range.0 && factor <= e.factor_range.1);
    }
    let profile: Vec<Vec<String>> = e
        .heights
        .iter()
        .zip(ext.boundary_deviation())
        .map(|(y, d)| vec![num(*y), num(d)])
        .collect();
    run.write_table("boundary_deviation", &["height", "deviation"], &profile)?;
    run.write_field("weighted_neumann", &tr.weighted_neumann)
}

pub fn reconstruct(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let inv = &cfg.inverse;
    let masks = Rc::clone(&run.masks);
    let m = &*masks;
    let q = run.potential(&cfg.potential)?;
    let f = run.datum();
    let data = dn_apply(&f, &q, cfg.s, m, &cfg.solver)?;
    let mut measured = data.output.clone();
    if inv.noise > 0.0 {
        let mut rng = run.rng(stream::NOISE);
        let z: Vec<f64> = m.measure_window.iter().map(|_| rng.sample(StandardNormal)).collect();
        let z = Field64::scatter(&cfg.grid, &m.measure_window, &z);
        measured = measured.axpy(inv.noise * measured.l2_norm() / z.l2_norm(), &z);
    }
    let rec = recover_potential(
        &f,
        &measured,
        cfg.s,
        &inv.alphas,
        inv.penalty,
        m,
        &cfg.solver,
        inv.eps_mask,
    )?;
    let path = rec.path.as_ref().expect("recovery records its path");

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (i, v) in path.reconstructions.iter().enumerate() {
        let err = match quotient_potential(&f.add(v), cfg.s, m, inv.eps_mask) {
            Ok(r) => r.masked_error(&q),
            Err(_) => f64::NAN,
        };
        errors.push(err);
        rows.push(vec![
            num(path.alphas[i]),
            num(path.data_residuals[i]),
            num(err),
            path.iterations[i].to_string(),
        ]);
    }
    let err = rec.masked_error(&q);
    let best = (0..errors.len())
        .filter(|&i| errors[i].is_finite())
        .min_by(|&a, &b| errors[a].total_cmp(&errors[b]));
    run.report.diag("masked_error", err);
    run.report.diag("coverage", rec.coverage);
    run.report.diag("kept_nodes", rec.mask_kept.len() as f64);
    if let Some(b) = best {
        run.report.diag("best_alpha", path.alphas[b]);
        run.report.diag("best_masked_error", errors[b]);
    }
    run.report
        .diag("cgls_iterations", path.iterations.iter().sum::<usize>() as f64);
    run.report
        .diag("final_data_residual", *path.data_residuals.last().unwrap_or(&f64::NAN));
    run.report.check("recovery_error", err < inv.error_tol);
    run.report.check(CONVERGED, path.failures.iter().all(Option::is_none));

    let mut error_map = Field64::zeros(&cfg.grid);
    for (i, &n) in m.omega_t.iter().enumerate() {
        if rec.kept[i] {
            error_map.values[n] = (rec.q_hat.values[i] - q.values[i]).abs();
        }
    }
    run.write_table(
        "ucurve",
        &["alpha", "data_residual", "masked_error", "iterations"],
        &rows,
    )?;
    run.write_field("q_hat", &rec.q_hat.to_field(m))?;
    run.write_field("error_map", &error_map)?;
    run.write_field("u_hat", &rec.u_hat)
}

pub fn runge(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let r = &cfg.runge;
    let masks = Rc::clone(&run.masks);
    let m = &*masks;
    let q = run.potential(&cfg.potential)?;
    let mut rows = Vec::new();
    let mut f_star = None;
    for target in &r.targets {
        let (name, g) = match target {
            RungeTarget::Bump => {
                let b = &r.bump;
                (
                    "bump",
                    interior_bump(m, b.center_t, b.center_x, b.width_t, b.width_x).scaled(b.amplitude),
                )
            }
            RungeTarget::One => ("one", Field64::from_fn(&cfg.grid, |_, _| 1.0)),
            RungeTarget::InSpan => {
                let first = runge_basis(m, &m.control_window, 1)?.remove(0);
                (
                    "in_span",
                    solve_dirichlet(&first, &Field64::zeros(&cfg.grid), &q, cfg.s, m, &cfg.solver)?.u,
                )
            }
        };
        let mut errs = Vec::new();
        for &k in &r.basis {
            let res = runge_control(&g, k, r.reg, &q, cfg.s, m, &cfg.solver, RungeDirection::Forward)?;
            run.report.diag(format!("approx_error.{name}.{k}"), res.approx_error);
            rows.push(vec![
                name.to_string(),
                k.to_string(),
                num(res.approx_error),
                num(res.abs_error),
            ]);
            errs.push(res.approx_error);
            if f_star.is_none() && k == *r.basis.iter().max().expect("nonempty basis list") {
                f_star = Some(res.f_star);
            }
        }
        match target {
            RungeTarget::InSpan => run.report.check("in_span", errs.iter().all(|&e| e < 1e-8)),
            _ => run
                .report
                .check(format!("decreasing.{name}"), strictly_decreasing(&errs)),
        };
    }
    run.write_table("runge", &["target", "basis_size", "approx_error", "abs_error"], &rows)?;
    if let Some(f) = f_star {
        run.write_field("f_star", &f)?;
    }
    Ok(())
}

pub fn selftest(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let st = &cfg.selftest;
    let g = &cfg.grid;
    let masks = Rc::clone(&run.masks);
    let m = &*masks;
    let branch = if st.inject_branch_bug {
        Branch::NextSheet
    } else {
        Branch::Principal
    };
    let mut rng = run.rng(stream::SELFTEST);
    let all: Vec<usize> = (0..g.len()).collect();
    let mut rows = Vec::new();
    let mut record = |run: &mut Run, name: &str, value: f64, limit: f64, pass: bool| {
        println!(
            "selftest {name:<12} {}  value {value:.3e}, limit {limit:.1e}",
            if pass { "PASS" } else { "FAIL" }
        );
        run.report.diag(name, value);
        run.report.check(name, pass);
        rows.push(vec![name.to_string(), num(value), num(limit), pass.to_string()]);
    };

    let mut duality = 0.0f64;
    let mut mapping = 0.0f64;
    let mut plancherel = 0.0f64;
    for _ in 0..st.pairs {
        let u = run.random_on(&all, &mut rng);
        let w = run.random_on(&all, &mut rng);
        duality = duality.max(duality_check_with_branch(&u, &w, cfg.s, branch)?.max());
        mapping = mapping.max(mapping_bound_check(&u, cfg.s)?);
        let energy = u.dot(&u);
        let spectral: f64 = dft_forward(&u).coeffs.iter().map(|c| c.norm_sqr()).sum();
        plancherel = plancherel.max((energy - spectral).abs() / energy);
    }
    record(run, "duality", duality, st.duality_tol, duality < st.duality_tol);
    record(
        run,
        "mapping",
        mapping,
        1.0 + st.mapping_slack,
        mapping <= 1.0 + st.mapping_slack,
    );
    record(
        run,
        "plancherel",
        plancherel,
        st.plancherel_tol,
        plancherel <= st.plancherel_tol,
    );

    let mut coercivity = f64::INFINITY;
    for _ in 0..st.pairs {
        let v = run.random_on(&m.omega_t, &mut rng);
        let (lhs, floor) = coercivity_check(&v, cfg.s)?;
        coercivity = coercivity.min((lhs - floor) / floor.abs().max(1.0));
    }
    record(
        run,
        "coercivity",
        coercivity,
        -st.coercivity_slack,
        coercivity >= -st.coercivity_slack,
    );

    let quad = KernelQuadrature::reference(g)?;
    let u = run.random_on(&all, &mut rng);
    let base = apply_kernel(&u, cfg.s, &quad)?;
    let cut = g.nodes_time / 2;
    let mut v = u.clone();
    for k in 0..g.len() {
        if g.time_index(k) > cut {
            v.values[k] = rng.gen_range(-1e3..1e3);
        }
    }
    let moved = apply_kernel(&v, cfg.s, &quad)?;
    let changed = (0..g.len())
        .filter(|&k| g.time_index(k) <= cut && moved.values[k].to_bits() != base.values[k].to_bits())
        .count();
    record(run, "causality", changed as f64, 0.0, changed == 0);

    run.write_table("selftest", &["property", "value", "limit", "pass"], &rows)
}

pub fn dispatch(command: &str, run: &mut Run) -> Result<()> {
    match command {
        "forward" => forward(run),
        "dnmap" => dnmap(run),
        "alessandrini" => alessandrini_cmd(run),
        "extension" => extension_cmd(run),
        "reconstruct" => reconstruct(run),
        "runge" => runge(run),
        "selftest" => selftest(run),
        other => Err(Failure::Config(format!("unknown command '{other}'"))),
    }
}
