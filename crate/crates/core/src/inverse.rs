//! Single-measurement reconstruction, potential recovery, Runge control and
//! the potential-gap functional.
//!
//! Tikhonov step: with `L v = (L^s v)|_measure` for `v` on `omega_T` and the
//! data weight `W = P_m M E_m`, `M` the `(1 + |lambda|)^{-s}` multiplier,
//!
//! ```text
//! (L^T W L + alpha R) v = L^T W h
//! ```
//!
//! where the penalty `R` is the identity, or `P (1 + |lambda|)^s P` for the
//! `H^s` penalty.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::forward::{smooth_bump, ForwardProblem, Potential};
use crate::linalg::{cgls_partial, least_squares, Dense, SolverOptions};
use crate::masks::RegionMasks;
use crate::operator::{FracOperator, Variant};
use crate::scalar::Real;

/// Default regularization path: 7 geometric values from 1e-2 to 1e-8.
pub fn default_alphas<T: Real>() -> Vec<T> {
    (0..7).map(|k| T::lit(10f64.powi(-2 - k))).collect()
}

/// Default relative mask threshold for [`recover_potential`].
pub const DEFAULT_EPS_MASK: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Penalty {
    /// `alpha |v|^2`.
    #[default]
    L2,
    /// `alpha |v|_{H^s}^2` with the `(1 + |lambda|)^s` weight.
    Sobolev,
}

#[derive(Clone, Debug)]
pub struct TikhonovPath<T = f64> {
    pub alphas: Vec<T>,
    pub reconstructions: Vec<Field<T>>,
    /// `<L v - h, W (L v - h)>^{1/2}`.
    pub data_residuals: Vec<T>,
    /// `|v - truth| / |truth|` on `omega_T`, when a truth was supplied.
    pub solution_errors: Option<Vec<T>>,
    pub iterations: Vec<usize>,
    /// Final relative residual of the normal equations.
    pub normal_residuals: Vec<T>,
    /// Per alpha, the non-convergence error if the tolerance was missed.
    pub failures: Vec<Option<Error>>,
}

impl<T: Real> TikhonovPath<T> {
    /// Index of the smallest solution error, if errors were recorded.
    pub fn best_index(&self) -> Option<usize> {
        let e = self.solution_errors.as_ref()?;
        (0..e.len()).min_by(|&a, &b| e[a].partial_cmp(&e[b]).unwrap_or(std::cmp::Ordering::Equal))
    }

    /// Last reconstruction (smallest alpha).
    pub fn last(&self) -> Option<&Field<T>> {
        self.reconstructions.last()
    }
}

/// The operators of the Tikhonov problem on a fixed geometry.
///
/// Each alpha is solved as the stacked least-squares problem
/// `min |M^{1/2} E_m (L v - h)|^2 + alpha |G v|^2` by CGLS with
/// reorthogonalization, `G` the identity or `M^{-1/2} E` for the `H^s`
/// penalty. Its normal equations are the ones above.
pub struct Tikhonov<'a, T: Real> {
    op: FracOperator<T>,
    masks: &'a RegionMasks<T>,
    data_weight: Vec<Complex<T>>,
    data_half: Vec<Complex<T>>,
    penalty_weight: Option<Vec<Complex<T>>>,
    penalty_half: Option<Vec<Complex<T>>>,
}

impl<'a, T: Real> Tikhonov<'a, T> {
    pub fn new(s: T, masks: &'a RegionMasks<T>, penalty: Penalty) -> Result<Self> {
        let op = FracOperator::new(&masks.grid, s)?;
        let g = &masks.grid;
        let weight = |p: T| -> Vec<Complex<T>> {
            (0..g.len())
                .map(|k| Complex::new((T::one() + g.lambda_modulus(k)).powf(p), T::zero()))
                .collect()
        };
        let half = s * T::lit(0.5);
        let sobolev = penalty == Penalty::Sobolev;
        Ok(Self {
            data_weight: weight(-s),
            data_half: weight(-half),
            penalty_weight: sobolev.then(|| weight(s)),
            penalty_half: sobolev.then(|| weight(half)),
            op,
            masks,
        })
    }

    fn grid(&self) -> &crate::grid::GridConfig<T> {
        &self.masks.grid
    }

    /// `(L^s v)|_measure` for `v` given on `omega_T`.
    pub fn forward_map(&self, v: &[T]) -> Vec<T> {
        let full = Field::scatter(self.grid(), &self.masks.omega_t, v);
        self.op.apply(&full).gather(&self.masks.measure_window)
    }

    /// `W r` on the measure window.
    pub fn weight(&self, r: &[T]) -> Vec<T> {
        let full = Field::scatter(self.grid(), &self.masks.measure_window, r);
        self.op
            .fourier()
            .multiply(&full, &self.data_weight)
            .gather(&self.masks.measure_window)
    }

    /// `L^T z = (L^s_* E_m z)|_{omega_T}`.
    pub fn transpose_map(&self, z: &[T]) -> Vec<T> {
        let full = Field::scatter(self.grid(), &self.masks.measure_window, z);
        self.op.apply_adjoint(&full).gather(&self.masks.omega_t)
    }

    fn penalty(&self, v: &[T]) -> Vec<T> {
        match &self.penalty_weight {
            None => v.to_vec(),
            Some(w) => {
                let full = Field::scatter(self.grid(), &self.masks.omega_t, v);
                self.op.fourier().multiply(&full, w).gather(&self.masks.omega_t)
            }
        }
    }

    /// `(L^T W L + alpha R) v`.
    pub fn normal(&self, v: &[T], alpha: T) -> Vec<T> {
        let lv = self.forward_map(v);
        let mut out = self.transpose_map(&self.weight(&lv));
        for (o, p) in out.iter_mut().zip(self.penalty(v)) {
            *o += alpha * p;
        }
        out
    }

    /// `L^T W h`.
    pub fn normal_rhs(&self, h: &Field<T>) -> Vec<T> {
        self.transpose_map(&self.weight(&h.gather(&self.masks.measure_window)))
    }

    /// `<L v - h, W (L v - h)>^{1/2}` with the cell-volume weight.
    pub fn data_residual(&self, v: &[T], h: &[T]) -> T {
        let r: Vec<T> = self.forward_map(v).iter().zip(h).map(|(&a, &b)| a - b).collect();
        let wr = self.weight(&r);
        (crate::field::dot(&r, &wr).max(T::zero()) * self.grid().cell_volume()).sqrt()
    }

    fn data_len(&self) -> usize {
        self.grid().len()
    }

    fn penalty_len(&self) -> usize {
        if self.penalty_half.is_some() {
            self.grid().len()
        } else {
            self.masks.omega_t.len()
        }
    }

    /// `[M^{1/2} E_m L v; sqrt(alpha) G v]`.
    fn stacked(&self, v: &[T], root: T, out: &mut [T]) {
        let (data, pen) = out.split_at_mut(self.data_len());
        let lv = Field::scatter(self.grid(), &self.masks.measure_window, &self.forward_map(v));
        data.copy_from_slice(&self.op.fourier().multiply(&lv, &self.data_half).values);
        match &self.penalty_half {
            None => {
                for (p, &x) in pen.iter_mut().zip(v) {
                    *p = root * x;
                }
            }
            Some(w) => {
                let full = Field::scatter(self.grid(), &self.masks.omega_t, v);
                for (p, x) in pen.iter_mut().zip(self.op.fourier().multiply(&full, w).values) {
                    *p = root * x;
                }
            }
        }
    }

    fn stacked_transpose(&self, y: &[T], root: T, out: &mut [T]) {
        let (data, pen) = y.split_at(self.data_len());
        let dy = Field::from_values(self.grid(), data.to_vec()).expect("grid-sized buffer");
        let wy = self
            .op
            .fourier()
            .multiply(&dy, &self.data_half)
            .gather(&self.masks.measure_window);
        out.copy_from_slice(&self.transpose_map(&wy));
        match &self.penalty_half {
            None => {
                for (o, &p) in out.iter_mut().zip(pen) {
                    *o += root * p;
                }
            }
            Some(w) => {
                let py = Field::from_values(self.grid(), pen.to_vec()).expect("grid-sized buffer");
                let back = self.op.fourier().multiply(&py, w).gather(&self.masks.omega_t);
                for (o, p) in out.iter_mut().zip(back) {
                    *o += root * p;
                }
            }
        }
    }

    /// Runs the regularization path, warm-starting each alpha from the previous one.
    pub fn path(
        &self,
        h: &Field<T>,
        alphas: &[T],
        opts: &SolverOptions<T>,
        truth: Option<&Field<T>>,
    ) -> Result<TikhonovPath<T>> {
        opts.validate()?;
        if alphas.is_empty() || alphas.iter().any(|a| !(*a > T::zero())) {
            return Err(Error::InvalidArgument("alphas must be positive".into()));
        }
        if alphas.windows(2).any(|w| !(w[0] > w[1])) {
            return Err(Error::InvalidArgument("alphas must be strictly decreasing".into()));
        }
        if !h.is_finite() {
            return Err(Error::InvalidArgument("data are not finite".into()));
        }
        let hm = h.gather(&self.masks.measure_window);
        let mut b = vec![T::zero(); self.data_len() + self.penalty_len()];
        let hfull = Field::scatter(self.grid(), &self.masks.measure_window, &hm);
        b[..self.data_len()].copy_from_slice(&self.op.fourier().multiply(&hfull, &self.data_half).values);
        let truth_vals = truth.map(|t| t.gather(&self.masks.omega_t));
        let tnorm = truth_vals.as_ref().map(|t| t.iter().map(|v| *v * *v).sum::<T>().sqrt());

        let k = self.masks.omega_t.len();
        let mut x = vec![T::zero(); k];
        let mut path = TikhonovPath {
            alphas: alphas.to_vec(),
            reconstructions: Vec::new(),
            data_residuals: Vec::new(),
            solution_errors: truth.map(|_| Vec::new()),
            iterations: Vec::new(),
            normal_residuals: Vec::new(),
            failures: Vec::new(),
        };
        for &alpha in alphas {
            let root = alpha.sqrt();
            let (out, ok) = cgls_partial(
                |v, y| self.stacked(v, root, y),
                |y, v| self.stacked_transpose(y, root, v),
                &b,
                k,
                Some(&x),
                opts,
                true,
            );
            x = out.x;
            path.failures.push(if ok {
                None
            } else {
                Some(Error::NonConvergence {
                    iterations: out.iterations,
                    relres: out.relres.to_f64_lossy(),
                })
            });
            path.iterations.push(out.iterations);
            path.normal_residuals.push(out.relres);
            path.data_residuals.push(self.data_residual(&x, &hm));
            if let (Some(errs), Some(t), Some(tn)) = (path.solution_errors.as_mut(), &truth_vals, tnorm) {
                let d = x.iter().zip(t).map(|(a, b)| (*a - *b) * (*a - *b)).sum::<T>().sqrt();
                errs.push(if tn == T::zero() { d } else { d / tn });
            }
            path.reconstructions
                .push(Field::scatter(self.grid(), &self.masks.omega_t, &x));
        }
        Ok(path)
    }
}

/// Reconstructs `v` on `omega_T` from `h = (L^s v)|_measure` along `alphas`.
pub fn tikhonov_reconstruct<T: Real>(
    h: &Field<T>,
    s: T,
    alphas: &[T],
    masks: &RegionMasks<T>,
    opts: &SolverOptions<T>,
    truth: Option<&Field<T>>,
) -> Result<TikhonovPath<T>> {
    Tikhonov::new(s, masks, Penalty::L2)?.path(h, alphas, opts, truth)
}

#[derive(Clone, Debug)]
pub struct RecoveryResult<T = f64> {
    /// `-L^s u / u` on kept nodes, zero elsewhere (in `omega_t` order).
    pub q_hat: Potential<T>,
    /// Kept nodes (global indices).
    pub mask_kept: Vec<usize>,
    /// Per `omega_t` position, whether the node was kept.
    pub kept: Vec<bool>,
    pub coverage: T,
    /// The interior solution the quotient was taken of.
    pub u_hat: Field<T>,
    pub path: Option<TikhonovPath<T>>,
}

impl<T: Real> RecoveryResult<T> {
    /// `|q_hat - q| / |q|` over kept nodes.
    pub fn masked_error(&self, q: &Potential<T>) -> T {
        let (mut num, mut den) = (T::zero(), T::zero());
        for (i, &k) in self.kept.iter().enumerate() {
            if k {
                num += (self.q_hat.values[i] - q.values[i]).powi(2);
                den += q.values[i].powi(2);
            }
        }
        if den == T::zero() {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }
}

/// Pointwise quotient `q = -L^s u / u` where `|u| > eps_mask max |u|` on `omega_T`.
pub fn quotient_potential<T: Real>(
    u: &Field<T>,
    s: T,
    masks: &RegionMasks<T>,
    eps_mask: T,
) -> Result<RecoveryResult<T>> {
    let lu = FracOperator::new(&u.grid, s)?.apply(u);
    let umax = masks.omega_t.iter().fold(T::zero(), |m, &n| m.max(u.values[n].abs()));
    let cut = eps_mask * umax;
    let mut kept = Vec::with_capacity(masks.omega_t.len());
    let mut mask_kept = Vec::new();
    let mut vals = Vec::with_capacity(masks.omega_t.len());
    for &n in &masks.omega_t {
        let un = u.values[n];
        if umax > T::zero() && un.abs() > cut {
            kept.push(true);
            mask_kept.push(n);
            vals.push(-lu.values[n] / un);
        } else {
            kept.push(false);
            vals.push(T::zero());
        }
    }
    if mask_kept.is_empty() {
        return Err(Error::EmptyMask);
    }
    Ok(RecoveryResult {
        q_hat: Potential::new(vals)?,
        coverage: T::from_usize_lossy(mask_kept.len()) / T::from_usize_lossy(masks.omega_t.len()),
        mask_kept,
        kept,
        u_hat: u.clone(),
        path: None,
    })
}

/// Recovers the potential from one datum `f` and its measurement `Lambda_Q f`.
#[allow(clippy::too_many_arguments)]
pub fn recover_potential<T: Real>(
    f: &Field<T>,
    measured: &Field<T>,
    s: T,
    alphas: &[T],
    penalty: Penalty,
    masks: &RegionMasks<T>,
    opts: &SolverOptions<T>,
    eps_mask: T,
) -> Result<RecoveryResult<T>> {
    if f.max_abs() == T::zero() {
        return Err(Error::EmptyMask);
    }
    let tik = Tikhonov::new(s, masks, penalty)?;
    let lf = tik.op.apply(f);
    let h = measured.sub(&lf).restricted(&masks.measure_window);
    let path = tik.path(&h, alphas, opts, None)?;
    let v = path.last().expect("non-empty path").clone();
    let mut res = quotient_potential(&f.add(&v), s, masks, eps_mask)?;
    res.path = Some(path);
    Ok(res)
}

/// Which problem a Runge control drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RungeDirection {
    /// Forward problem, controls on the control window.
    Forward,
    /// Adjoint problem, controls on the measure window.
    Adjoint,
}

/// Largest basis the fixed lattice provides.
pub const RUNGE_MAX_BASIS: usize = 64;

/// Control-lattice bumps on `window`, ordered coarse to fine so that the
/// first `K` form the `K`-element basis for `K` in {4, 16, 64}.
///
/// The lattice has 16 time positions and 4 spatial positions (2 x 2 for
/// `n = 2`); each bump has the lattice spacing as radius and is cut to the
/// window nodes.
pub fn runge_basis<T: Real>(masks: &RegionMasks<T>, window: &[usize], count: usize) -> Result<Vec<Field<T>>> {
    if count == 0 || count > RUNGE_MAX_BASIS || count > window.len() {
        return Err(Error::InvalidArgument(format!(
            "basis size {count} must be in 1..={} and at most the window size {}",
            RUNGE_MAX_BASIS.min(window.len()),
            window.len()
        )));
    }
    let g = &masks.grid;
    let dims = g.n_space_dims;
    let th = masks.t_half();
    // spatial bounding box of the window nodes
    let mut lo = [T::infinity(); 2];
    let mut hi = [T::neg_infinity(); 2];
    for &n in window {
        let x = g.space_at(g.space_index(n));
        for a in 0..dims {
            lo[a] = lo[a].min(x[a]);
            hi[a] = hi[a].max(x[a]);
        }
    }
    let pad = g.dx() * T::lit(0.5);
    let nt = 16usize;
    let per_axis = if dims == 1 { 4usize } else { 2 };
    let ht = T::lit(2.0) * th / T::from_usize_lossy(nt);
    let hx: Vec<T> = (0..dims)
        .map(|a| (hi[a] - lo[a] + T::lit(2.0) * pad) / T::from_usize_lossy(per_axis))
        .collect();
    let tc = |i: usize| -th + ht * (T::from_usize_lossy(i) + T::lit(0.5));
    let xc = |a: usize, j: usize| lo[a] - pad + hx[a] * (T::from_usize_lossy(j) + T::lit(0.5));

    // (time index, spatial index) in coarse-to-fine order
    let spatial: Vec<[usize; 2]> = if dims == 1 {
        vec![[0, 0], [2, 0], [1, 0], [3, 0]]
    } else {
        vec![[0, 0], [1, 1], [0, 1], [1, 0]]
    };
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(64);
    let levels: [(usize, usize); 3] = [(4, 1), (2, 2), (1, 4)];
    for &(tstride, nspace) in &levels {
        for sp in 0..nspace {
            for i in (0..nt).step_by(tstride) {
                if !order.contains(&(i, sp)) {
                    order.push((i, sp));
                }
            }
        }
    }
    debug_assert_eq!(order.len(), RUNGE_MAX_BASIS);
    let mut inside = vec![false; g.len()];
    for &n in window {
        inside[n] = true;
    }
    Ok(order[..count]
        .iter()
        .map(|&(i, sp)| {
            let idx = spatial[sp];
            let t0 = tc(i);
            let mut x0 = [T::zero(); 2];
            for a in 0..dims {
                x0[a] = xc(a, idx[a]);
            }
            let mut f = Field::from_fn(g, |t, x| {
                let mut r2 = ((t - t0) / ht).powi(2);
                for a in 0..dims {
                    r2 += ((x[a] - x0[a]) / hx[a]).powi(2);
                }
                if r2 >= T::one() {
                    T::zero()
                } else {
                    (T::one() - T::one() / (T::one() - r2)).exp()
                }
            });
            for (n, v) in f.values.iter_mut().enumerate() {
                if !inside[n] {
                    *v = T::zero();
                }
            }
            f
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct RungeResult<T = f64> {
    pub f_star: Field<T>,
    /// Solution driven by `f_star`.
    pub u: Field<T>,
    pub coefficients: Vec<T>,
    /// `|u - g|_{L^2(Omega_T)} / |g|_{L^2(Omega_T)}` (absolute when `g = 0`).
    pub approx_error: T,
    /// `|u - g|_{L^2(Omega_T)}`.
    pub abs_error: T,
    pub basis_size: usize,
}

/// Least-squares combination of `K` basis controls approximating `g` on `omega_T`.
#[allow(clippy::too_many_arguments)]
pub fn runge_control<T: Real>(
    g: &Field<T>,
    basis_size: usize,
    reg: T,
    q: &Potential<T>,
    s: T,
    masks: &RegionMasks<T>,
    opts: &SolverOptions<T>,
    direction: RungeDirection,
) -> Result<RungeResult<T>> {
    let (window, variant) = match direction {
        RungeDirection::Forward => (&masks.control_window, Variant::Forward),
        RungeDirection::Adjoint => (&masks.measure_window, Variant::Adjoint),
    };
    let basis = runge_basis(masks, window, basis_size)?;
    let prob = ForwardProblem::new(s, masks, q, variant)?;
    let zero = Field::zeros(&masks.grid);
    let sols = basis
        .par_iter()
        .map(|b| prob.solve(b, &zero, opts).map(|sol| sol.u))
        .collect::<Result<Vec<_>>>()?;
    let w = masks.grid.cell_volume().sqrt();
    let cols: Vec<Vec<T>> = sols
        .iter()
        .map(|u| masks.omega_t.iter().map(|&n| u.values[n] * w).collect())
        .collect();
    let target: Vec<T> = masks.omega_t.iter().map(|&n| g.values[n] * w).collect();
    let a = Dense::from_columns(&cols);
    let c = least_squares(&a, &target, reg)?;
    let mut f_star = Field::zeros(&masks.grid);
    let mut u = Field::zeros(&masks.grid);
    for ((ck, b), uk) in c.iter().zip(&basis).zip(&sols) {
        f_star = f_star.axpy(*ck, b);
        u = u.axpy(*ck, uk);
    }
    let abs_error = u.sub(g).restricted(&masks.omega_t).l2_norm();
    let gn = g.restricted(&masks.omega_t).l2_norm();
    Ok(RungeResult {
        f_star,
        u,
        coefficients: c,
        approx_error: if gn == T::zero() { abs_error } else { abs_error / gn },
        abs_error,
        basis_size,
    })
}

#[derive(Clone, Debug)]
pub struct GapReport<T = f64> {
    /// Alessandrini pairing `<(Lambda_{Q1} - Lambda_{Q2}) f1, f2>` of the Runge data.
    pub lhs: T,
    /// `sum (Q1 - Q2) g` over `omega_T` times the cell volume.
    pub rhs: T,
    pub forward_error: T,
    pub adjoint_error: T,
    /// `|(Q1 - Q2)(u1 u2 - g)|` summed over `omega_T`, the gap the control errors leave.
    pub gap_bound: T,
}

/// Potential-gap functional: `u1 ~ g` (forward, `Q1`) and `u2 ~ 1` (adjoint, `Q2`).
#[allow(clippy::too_many_arguments)]
pub fn potential_gap_functional<T: Real>(
    q1: &Potential<T>,
    q2: &Potential<T>,
    g: &Field<T>,
    basis_size: usize,
    reg: T,
    s: T,
    masks: &RegionMasks<T>,
    opts: &SolverOptions<T>,
) -> Result<GapReport<T>> {
    let one = Field::from_fn(&masks.grid, |_, _| T::one());
    let (r1, r2) = rayon::join(
        || runge_control(g, basis_size, reg, q1, s, masks, opts, RungeDirection::Forward),
        || runge_control(&one, basis_size, reg, q2, s, masks, opts, RungeDirection::Adjoint),
    );
    let (r1, r2) = (r1?, r2?);
    let (d1, d2) = rayon::join(
        || crate::dnmap::dn_apply(&r1.f_star, q1, s, masks, opts),
        || crate::dnmap::dn_apply(&r1.f_star, q2, s, masks, opts),
    );
    let lhs = d1?.pair(&r2.f_star) - d2?.pair(&r2.f_star);
    let dv = masks.grid.cell_volume();
    let mut rhs = T::zero();
    let mut gap = T::zero();
    for (i, &n) in masks.omega_t.iter().enumerate() {
        let dq = q1.values[i] - q2.values[i];
        rhs += dq * g.values[n];
        gap += (dq * (r1.u.values[n] * r2.u.values[n] - g.values[n])).abs();
    }
    Ok(GapReport {
        lhs,
        rhs: rhs * dv,
        forward_error: r1.approx_error,
        adjoint_error: r2.approx_error,
        gap_bound: gap * dv,
    })
}

/// Smooth bump supported inside `omega_T`: centred at `(t0, x0)`, radii `a`
/// in time and `b` in space.
pub fn interior_bump<T: Real>(masks: &RegionMasks<T>, t0: T, x0: [T; 2], a: T, b: T) -> Field<T> {
    let dims = masks.grid.n_space_dims;
    Field::from_fn(&masks.grid, |t, x| smooth_bump(t, x, t0, x0, a, b, dims)).restricted(&masks.omega_t)
}
