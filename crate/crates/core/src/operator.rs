//! The fractional parabolic operator `L^s = (d/dt - Laplacian)^s`.
//!
//! Two independent evaluation routes live here:
//!
//! * the spectral route, multiplying Fourier coefficients by `(i rho + |xi|^2)^s`
//!   (principal branch) on the periodic box, and
//! * the kernel route, a causal quadrature of
//!   `int_0^inf int (u(t,x) - u(t - tau, x - z)) K_s(tau, z) dz dtau`
//!   that treats the field as zero outside the box.
//!
//! The kernel route never reads a sample later than the evaluation time.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{sobolev_norm_spectral, Field, Fourier};
use crate::grid::GridConfig;
use crate::scalar::{gamma, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Symbol `(i rho + |xi|^2)^p`, depends on the past.
    Forward,
    /// Symbol `(-i rho + |xi|^2)^p`, depends on the future.
    Adjoint,
}

/// Branch of the complex power. Only `Principal` is correct; `NextSheet`
/// multiplies by `exp(2 pi i p)` and exists as a negative control for the
/// self-test suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Principal,
    NextSheet,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolSpec<T = f64> {
    pub s: T,
    pub variant: Variant,
    /// 1 for `L^s`, 1/2 for `L^{s/2}`.
    pub power_fraction: T,
    pub branch: Branch,
}

impl<T: Real> SymbolSpec<T> {
    pub fn forward(s: T) -> Self {
        Self {
            s,
            variant: Variant::Forward,
            power_fraction: T::one(),
            branch: Branch::Principal,
        }
    }

    pub fn adjoint(s: T) -> Self {
        Self {
            variant: Variant::Adjoint,
            ..Self::forward(s)
        }
    }

    pub fn with_fraction(self, power_fraction: T) -> Self {
        Self { power_fraction, ..self }
    }

    pub fn exponent(&self) -> T {
        self.s * self.power_fraction
    }

    fn validate(&self) -> Result<()> {
        let p = self.exponent();
        if !(self.s > T::zero() && self.s < T::one()) || !(p > T::zero() && p < T::one()) {
            return Err(Error::Domain(format!(
                "symbol exponent s*power_fraction = {p} must lie in (0,1), s in (0,1)"
            )));
        }
        Ok(())
    }
}

/// Principal power `lambda^p`, defined as 0 at `lambda = 0`.
pub(crate) fn principal_pow<T: Real>(lambda: Complex<T>, p: T) -> Complex<T> {
    if lambda.re == T::zero() && lambda.im == T::zero() {
        Complex::new(T::zero(), T::zero())
    } else {
        lambda.powf(p)
    }
}

/// Symbol values over the frequency lattice of `grid`.
pub fn symbol<T: Real>(grid: &GridConfig<T>, spec: &SymbolSpec<T>) -> Result<Vec<Complex<T>>> {
    spec.validate()?;
    let p = spec.exponent();
    let sheet = match spec.branch {
        Branch::Principal => Complex::new(T::one(), T::zero()),
        Branch::NextSheet => Complex::from_polar(T::one(), T::TAU() * p),
    };
    Ok((0..grid.len())
        .map(|k| {
            let lam = grid.lambda(k);
            let lam = match spec.variant {
                Variant::Forward => lam,
                Variant::Adjoint => lam.conj(),
            };
            principal_pow(lam, p) * sheet
        })
        .collect())
}

/// `L^s` with cached transform plans and symbols, for repeated application.
#[derive(Clone, Debug)]
pub struct FracOperator<T: Real> {
    fourier: Fourier<T>,
    s: T,
    full: Vec<Complex<T>>,
    half: Vec<Complex<T>>,
}

impl<T: Real> FracOperator<T> {
    pub fn new(grid: &GridConfig<T>, s: T) -> Result<Self> {
        let full = symbol(grid, &SymbolSpec::forward(s))?;
        let half = symbol(grid, &SymbolSpec::forward(s).with_fraction(T::lit(0.5)))?;
        Ok(Self {
            fourier: Fourier::new(grid),
            s,
            full,
            half,
        })
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn grid(&self) -> &GridConfig<T> {
        self.fourier.grid()
    }

    pub fn fourier(&self) -> &Fourier<T> {
        &self.fourier
    }

    /// `lambda^s` per frequency.
    pub fn forward_symbol(&self) -> &[Complex<T>] {
        &self.full
    }

    /// `lambda^{s/2}` per frequency.
    pub fn half_symbol(&self) -> &[Complex<T>] {
        &self.half
    }

    fn apply_with(&self, u: &Field<T>, sym: &[Complex<T>], conj: bool) -> Field<T> {
        let mut spec = self.fourier.forward(u);
        for (c, s) in spec.coeffs.iter_mut().zip(sym) {
            *c *= if conj { s.conj() } else { *s };
        }
        self.fourier.inverse_unchecked(&spec.coeffs)
    }

    /// `L^s u`.
    pub fn apply(&self, u: &Field<T>) -> Field<T> {
        self.apply_with(u, &self.full, false)
    }

    /// `L^s_* u`.
    pub fn apply_adjoint(&self, u: &Field<T>) -> Field<T> {
        self.apply_with(u, &self.full, true)
    }

    pub fn apply_half(&self, u: &Field<T>) -> Field<T> {
        self.apply_with(u, &self.half, false)
    }

    pub fn apply_half_adjoint(&self, u: &Field<T>) -> Field<T> {
        self.apply_with(u, &self.half, true)
    }

    pub fn apply_variant(&self, u: &Field<T>, variant: Variant) -> Field<T> {
        match variant {
            Variant::Forward => self.apply(u),
            Variant::Adjoint => self.apply_adjoint(u),
        }
    }

    /// Largest symbol modulus `max |lambda|^s`.
    pub fn symbol_scale(&self) -> T {
        self.full.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }
}

/// Multiplies the Fourier coefficients of `field` by the symbol of `spec`.
pub fn apply_symbol<T: Real>(field: &Field<T>, spec: &SymbolSpec<T>) -> Result<Field<T>> {
    let sym = symbol(&field.grid, spec)?;
    let fourier = Fourier::new(&field.grid);
    let mut coeffs = fourier.forward(field);
    for (c, s) in coeffs.coeffs.iter_mut().zip(&sym) {
        *c *= *s;
    }
    match spec.branch {
        Branch::Principal => fourier.inverse(&coeffs),
        // a wrong sheet is not conjugate-symmetric; keep the real part
        Branch::NextSheet => Ok(fourier.inverse_unchecked(&coeffs.coeffs)),
    }
}

/// `|Gamma(-s)|`.
fn abs_gamma_neg<T: Real>(s: T) -> T {
    (gamma(T::one() - s) / s).abs()
}

/// Heat-semigroup kernel of `L^s`:
/// `exp(-|z|^2 / (4 tau)) / ((4 pi)^{n/2} |Gamma(-s)| tau^{n/2 + 1 + s})`.
pub fn kernel_value<T: Real>(s: T, n: usize, tau: T, z: &[T]) -> Result<T> {
    if !(tau > T::zero()) {
        return Err(Error::Domain(format!("kernel needs tau > 0, got {tau}")));
    }
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::Domain(format!("kernel needs s in (0,1), got {s}")));
    }
    let half_n = T::from_usize_lossy(n) * T::lit(0.5);
    let z2: T = z.iter().map(|v| *v * *v).sum();
    let four_pi = T::lit(4.0) * T::PI();
    Ok((-z2 / (T::lit(4.0) * tau)).exp() / (four_pi.powf(half_n) * abs_gamma_neg(s) * tau.powf(half_n + T::one() + s)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
    /// Four-point Lagrange on the latest admissible stencil.
    Cubic,
}

/// How samples outside the box are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exterior {
    /// Zero outside the box (whole-space faithful for compactly supported fields).
    Zero,
    /// Periodic wrap. The large-tau tail then uses the box mean, which is not causal.
    Periodic,
}

/// Quadrature for the kernel route.
///
/// `weights` integrate against `dtau` on `[tau_min, tau_max]`; the pieces
/// below `tau_min` (first-order Taylor term) and above `tau_max` (closed form)
/// are added analytically.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelQuadrature<T = f64> {
    pub tau_nodes: Vec<T>,
    pub weights: Vec<T>,
    /// Spatial truncation radius in units of `sqrt(tau)`.
    pub z_cutoff: T,
    pub interpolation: Interpolation,
    pub exterior: Exterior,
}

impl<T: Real> KernelQuadrature<T> {
    /// Trapezoid rule in `log tau` with `nodes` points on `[tau_min, tau_max]`.
    pub fn log_trapezoid(tau_min: T, tau_max: T, nodes: usize) -> Result<Self> {
        if !(tau_min > T::zero() && tau_max > tau_min) || nodes < 2 {
            return Err(Error::Quadrature(format!(
                "need 0 < tau_min < tau_max and >= 2 nodes, got [{tau_min}, {tau_max}] x {nodes}"
            )));
        }
        let (a, b) = (tau_min.ln(), tau_max.ln());
        let h = (b - a) / T::from_usize_lossy(nodes - 1);
        let mut tau_nodes = Vec::with_capacity(nodes);
        let mut weights = Vec::with_capacity(nodes);
        for q in 0..nodes {
            let tau = if q == nodes - 1 {
                tau_max
            } else {
                (a + h * T::from_usize_lossy(q)).exp()
            };
            let end = q == 0 || q == nodes - 1;
            let w = if end { h * T::lit(0.5) } else { h };
            tau_nodes.push(tau);
            weights.push(w * tau);
        }
        Ok(Self {
            tau_nodes,
            weights,
            z_cutoff: T::lit(6.0),
            interpolation: Interpolation::Cubic,
            exterior: Exterior::Zero,
        })
    }

    /// `nodes` log-spaced points from `dt / tau_min_divisor` to `tau_max_factor * L_t`.
    pub fn for_grid(grid: &GridConfig<T>, nodes: usize, tau_min_divisor: T, tau_max_factor: T) -> Result<Self> {
        Self::log_trapezoid(
            grid.dt() / tau_min_divisor,
            tau_max_factor * grid.half_period_time,
            nodes,
        )
    }

    /// Refinement ladder: level `l` uses `32 * 2^l` nodes and `tau_min = dt / (16 * 2^l)`.
    pub fn refinement_level(grid: &GridConfig<T>, level: u32) -> Result<Self> {
        let f = 1usize << level;
        Self::for_grid(grid, 32 * f, T::from_usize_lossy(16 * f), T::lit(8.0))
    }

    /// Default quadrature: level 2 of [`Self::refinement_level`].
    pub fn reference(grid: &GridConfig<T>) -> Result<Self> {
        Self::refinement_level(grid, 2)
    }

    pub fn with_exterior(self, exterior: Exterior) -> Self {
        Self { exterior, ..self }
    }

    pub fn with_interpolation(self, interpolation: Interpolation) -> Self {
        Self { interpolation, ..self }
    }

    pub fn tau_min(&self) -> T {
        self.tau_nodes[0]
    }

    pub fn tau_max(&self) -> T {
        *self.tau_nodes.last().expect("non-empty quadrature")
    }
}

/// Time stencil for a lag of `d = tau/dt` grid steps: `(lag, weight)` pairs.
fn time_stencil<T: Real>(d: T, interp: Interpolation) -> Vec<(usize, T)> {
    let c = d.ceil();
    let theta = c - d; // position of t - tau above node j - ceil(d)
    let base = c.to_usize().unwrap_or(0); // lag of node m = j - ceil(d)
    if theta == T::zero() {
        return vec![(base, T::one())];
    }
    match interp {
        Interpolation::Linear => vec![(base, T::one() - theta), (base - 1, theta)],
        Interpolation::Cubic => {
            // offsets relative to m; the stencil may not pass the evaluation time
            let offs: [i64; 4] = if base >= 2 { [-1, 0, 1, 2] } else { [-2, -1, 0, 1] };
            offs.iter()
                .map(|&oa| {
                    let w = offs.iter().filter(|&&ob| ob != oa).fold(T::one(), |acc, &ob| {
                        acc * (theta - T::lit(ob as f64)) / T::lit((oa - ob) as f64)
                    });
                    ((base as i64 - oa) as usize, w)
                })
                .collect()
        }
    }
}

/// Normalized 1-D Gaussian weights `exp(-(k dx)^2/(4 tau))` for |k dx| <= cutoff.
fn gaussian_weights<T: Real>(tau: T, dx: T, cutoff: T) -> Vec<T> {
    let kmax = (cutoff * tau.sqrt() / dx).floor().to_usize().unwrap_or(0);
    let mut w: Vec<T> = (0..=kmax)
        .map(|k| {
            let z = T::from_usize_lossy(k) * dx;
            (-(z * z) / (T::lit(4.0) * tau)).exp()
        })
        .collect();
    let total = w[0] + T::lit(2.0) * w[1..].iter().copied().sum::<T>();
    for v in w.iter_mut() {
        *v /= total;
    }
    w
}

/// 1-D smoothing difference along a line of `n` samples:
/// `E(i) = sum_k g_k (u(i) - u(i - k))` over signed offsets `k`.
fn smoothing_difference<T: Real>(line: &[T], w: &[T], exterior: Exterior, out: &mut [T]) {
    let n = line.len();
    match exterior {
        Exterior::Zero => {
            let inner = (w.len() - 1).min(n - 1);
            let inner_mass = w[0] + T::lit(2.0) * w[1..=inner].iter().copied().sum::<T>();
            // offsets beyond the box only see zeros
            let outer_mass = T::one() - inner_mass;
            for i in 0..n {
                let ui = line[i];
                let mut acc = outer_mass * ui;
                for (k, &g) in w.iter().enumerate().take(inner + 1).skip(1) {
                    let left = if i >= k { line[i - k] } else { T::zero() };
                    let right = if i + k < n { line[i + k] } else { T::zero() };
                    acc += g * ((ui - left) + (ui - right));
                }
                out[i] = acc;
            }
        }
        Exterior::Periodic => {
            let mut folded = vec![T::zero(); n];
            for (k, &g) in w.iter().enumerate() {
                if k == 0 {
                    folded[0] += g;
                } else {
                    folded[k % n] += g;
                    folded[(n - k % n) % n] += g;
                }
            }
            for i in 0..n {
                let ui = line[i];
                let mut acc = T::zero();
                for (b, &g) in folded.iter().enumerate().skip(1) {
                    acc += g * (ui - line[(i + n - b) % n]);
                }
                out[i] = acc;
            }
        }
    }
}

/// `E(x) = sum_z g(z) (u(x) - u(x - z))` on one time slice.
fn slice_smoothing_difference<T: Real>(grid: &GridConfig<T>, slice: &[T], w: &[T], exterior: Exterior) -> Vec<T> {
    let nx = grid.nodes_space;
    let mut out = vec![T::zero(); slice.len()];
    if grid.n_space_dims == 1 {
        smoothing_difference(slice, w, exterior, &mut out);
        return out;
    }
    // two axes: E = E_1 + sum_{z1} g1(z1) E_2(x1 - z1, x2), exact for constants
    let mut line = vec![T::zero(); nx];
    let mut tmp = vec![T::zero(); nx];
    let mut e2 = vec![T::zero(); slice.len()];
    for r in 0..nx {
        smoothing_difference(&slice[r * nx..(r + 1) * nx], w, exterior, &mut e2[r * nx..(r + 1) * nx]);
    }
    let mut smoothed_e2 = vec![T::zero(); slice.len()];
    for c in 0..nx {
        for r in 0..nx {
            line[r] = slice[r * nx + c];
        }
        smoothing_difference(&line, w, exterior, &mut tmp);
        for r in 0..nx {
            out[r * nx + c] = tmp[r];
        }
        // sum_{z1} g1 E2(x1 - z1) = E2(x1) - (difference of E2 along axis 1)
        for r in 0..nx {
            line[r] = e2[r * nx + c];
        }
        smoothing_difference(&line, w, exterior, &mut tmp);
        for r in 0..nx {
            smoothed_e2[r * nx + c] = tmp[r];
        }
    }
    let g_total = match exterior {
        Exterior::Zero => T::one(),
        Exterior::Periodic => T::one(),
    };
    for i in 0..slice.len() {
        out[i] += g_total * e2[i] - smoothed_e2[i];
    }
    out
}

/// Reads `u(j - lag, i)`, honoring the exterior rule for negative time indices.
#[inline]
fn past_sample<T: Real>(values: &[T], nt: usize, sl: usize, j: usize, lag: usize, i: usize, ext: Exterior) -> T {
    if lag <= j {
        values[(j - lag) * sl + i]
    } else {
        match ext {
            Exterior::Zero => T::zero(),
            Exterior::Periodic => {
                let jj = (j + nt * (lag / nt + 1) - lag) % nt;
                values[jj * sl + i]
            }
        }
    }
}

/// `dt u - Laplacian u` by one-sided (past) differences in time and centered
/// differences in space, both fourth order.
fn heat_operator_fd<T: Real>(field: &Field<T>, ext: Exterior) -> Vec<T> {
    let g = &field.grid;
    let (nt, sl, nx) = (g.nodes_time, g.space_len(), g.nodes_space);
    let u = &field.values;
    let dt = g.dt();
    let dx2 = g.dx() * g.dx();
    let twelve = T::lit(12.0);
    let at_space = |j: usize, axes: [i64; 2]| -> T {
        let inside = |a: i64| a >= 0 && (a as usize) < nx;
        let (a0, a1) = match ext {
            Exterior::Zero => {
                if !inside(axes[0]) || (g.n_space_dims == 2 && !inside(axes[1])) {
                    return T::zero();
                }
                (axes[0] as usize, axes[1].max(0) as usize)
            }
            Exterior::Periodic => (
                axes[0].rem_euclid(nx as i64) as usize,
                axes[1].rem_euclid(nx as i64) as usize,
            ),
        };
        let i = if g.n_space_dims == 1 { a0 } else { a0 * nx + a1 };
        u[j * sl + i]
    };
    let mut out = vec![T::zero(); u.len()];
    for j in 0..nt {
        for i in 0..sl {
            let ui = u[j * sl + i];
            let past = |lag: usize| ui - past_sample(u, nt, sl, j, lag, i, ext);
            // 25u0 - 48u1 + 36u2 - 16u3 + 3u4 in difference form
            let ut = (T::lit(48.0) * past(1) - T::lit(36.0) * past(2) + T::lit(16.0) * past(3) - T::lit(3.0) * past(4))
                / (twelve * dt);
            let axes = g.space_axes(i);
            let mut lap = T::zero();
            for axis in 0..g.n_space_dims {
                let shifted = |o: i64| {
                    let mut a = [axes[0] as i64, axes[1] as i64];
                    a[axis] += o;
                    at_space(j, a) - ui
                };
                lap += (T::lit(16.0) * (shifted(1) + shifted(-1)) - (shifted(2) + shifted(-2))) / (twelve * dx2);
            }
            out[j * sl + i] = ut - lap;
        }
    }
    out
}

/// Evaluates `L^s u` at every node through the causal kernel quadrature.
pub fn apply_kernel<T: Real>(field: &Field<T>, s: T, quad: &KernelQuadrature<T>) -> Result<Field<T>> {
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::Domain(format!("s must lie in (0,1), got {s}")));
    }
    let g = &field.grid;
    if quad.tau_nodes.is_empty() || quad.tau_nodes.len() != quad.weights.len() {
        return Err(Error::Quadrature("malformed quadrature".into()));
    }
    if !(quad.tau_min() < g.dt()) {
        return Err(Error::Quadrature(format!(
            "tau_min = {} must be below dt = {}",
            quad.tau_min(),
            g.dt()
        )));
    }
    if quad.weights.iter().any(|w| !(*w > T::zero())) {
        return Err(Error::Quadrature("weights must be positive".into()));
    }
    let (nt, sl) = (g.nodes_time, g.space_len());
    let c = T::one() / abs_gamma_neg(s);
    let u = &field.values;
    let ext = quad.exterior;

    // head: int_0^{tau_min} tau (dt - Lap) u tau^{-1-s} dtau
    let head_coef = c * quad.tau_min().powf(T::one() - s) / (T::one() - s);
    let heat = heat_operator_fd(field, ext);
    // tail: int_{tau_max}^inf (u - u_inf) tau^{-1-s} dtau
    let tail_coef = c * quad.tau_max().powf(-s) / s;
    let far = match ext {
        Exterior::Zero => T::zero(),
        Exterior::Periodic => {
            // offset by the minimum so a constant field gives its own value back
            let lo = u.iter().copied().fold(T::infinity(), T::min);
            lo + u.iter().map(|&v| v - lo).sum::<T>() / T::from_usize_lossy(u.len())
        }
    };
    let mut out: Vec<T> = (0..u.len())
        .map(|n| head_coef * heat[n] + tail_coef * (u[n] - far))
        .collect();

    for (&tau, &w) in quad.tau_nodes.iter().zip(&quad.weights) {
        let weight = c * w * tau.powf(-T::one() - s);
        let gw = gaussian_weights(tau, g.dx(), quad.z_cutoff);
        let e: Vec<Vec<T>> = (0..nt)
            .into_par_iter()
            .map(|j| slice_smoothing_difference(g, &u[j * sl..(j + 1) * sl], &gw, ext))
            .collect();
        let stencil = time_stencil(tau / g.dt(), quad.interpolation);
        out.par_chunks_mut(sl).enumerate().for_each(|(j, row)| {
            for (i, o) in row.iter_mut().enumerate() {
                let ui = u[j * sl + i];
                let mut d = T::zero();
                for &(lag, l) in &stencil {
                    let (past, e_past) = if lag <= j {
                        (u[(j - lag) * sl + i], e[j - lag][i])
                    } else {
                        match ext {
                            Exterior::Zero => (T::zero(), T::zero()),
                            Exterior::Periodic => {
                                let jj = (j + nt * (lag / nt + 1) - lag) % nt;
                                (u[jj * sl + i], e[jj][i])
                            }
                        }
                    };
                    d += l * ((ui - past) + e_past);
                }
                *o += weight * d;
            }
        });
    }
    Ok(Field {
        grid: g.clone(),
        values: out,
    })
}

/// Residuals of the three duality identities, each divided by `|u| |w|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityResiduals<T = f64> {
    /// `<L^s u, w> - <u, L^s_* w>`.
    pub adjoint: T,
    /// `<L^{s/2} L^{s/2} u - L^s u, w>`.
    pub semigroup: T,
    /// `<L^s u, w> - (L^{s/2} u, L^{s/2}_* w)`.
    pub bilinear: T,
}

impl<T: Real> DualityResiduals<T> {
    pub fn max(&self) -> T {
        self.adjoint.max(self.semigroup).max(self.bilinear)
    }
}

pub fn duality_check<T: Real>(u: &Field<T>, w: &Field<T>, s: T) -> Result<DualityResiduals<T>> {
    duality_check_with_branch(u, w, s, Branch::Principal)
}

/// [`duality_check`] with every symbol evaluated on `branch`.
pub fn duality_check_with_branch<T: Real>(
    u: &Field<T>,
    w: &Field<T>,
    s: T,
    branch: Branch,
) -> Result<DualityResiduals<T>> {
    let spec = |variant, frac: T| SymbolSpec {
        s,
        variant,
        power_fraction: frac,
        branch,
    };
    let half = T::lit(0.5);
    let lu = apply_symbol(u, &spec(Variant::Forward, T::one()))?;
    let lstar_w = apply_symbol(w, &spec(Variant::Adjoint, T::one()))?;
    let half_u = apply_symbol(u, &spec(Variant::Forward, half))?;
    let half_half_u = apply_symbol(&half_u, &spec(Variant::Forward, half))?;
    let half_star_w = apply_symbol(w, &spec(Variant::Adjoint, half))?;
    let scale = u.l2_norm() * w.l2_norm();
    if scale == T::zero() {
        return Ok(DualityResiduals {
            adjoint: T::zero(),
            semigroup: T::zero(),
            bilinear: T::zero(),
        });
    }
    let lu_w = lu.dot(w);
    Ok(DualityResiduals {
        adjoint: (lu_w - u.dot(&lstar_w)).abs() / scale,
        semigroup: half_half_u.sub(&lu).dot(w).abs() / scale,
        bilinear: (lu_w - half_u.dot(&half_star_w)).abs() / scale,
    })
}

/// `|L^s u|_{H^{-s}} / |u|_{H^s}`; at most 1 on the discrete lattice.
pub fn mapping_bound_check<T: Real>(u: &Field<T>, s: T) -> Result<T> {
    let fourier = Fourier::new(&u.grid);
    let spec = fourier.forward(u);
    let denom = sobolev_norm_spectral(&spec, s);
    if denom == T::zero() {
        return Err(Error::InvalidArgument("mapping bound needs a nonzero field".into()));
    }
    let sym = symbol(&u.grid, &SymbolSpec::forward(s))?;
    let mut image = spec.clone();
    for (c, m) in image.coeffs.iter_mut().zip(&sym) {
        *c *= *m;
    }
    Ok(sobolev_norm_spectral(&image, -s) / denom)
}
