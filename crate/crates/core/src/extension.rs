//! Parabolic Caffarelli–Silvestre extension, computed mode by mode.
//!
//! For a mode with `lambda = |xi|^2 + i rho` the extension profile is
//!
//! ```text
//! phi(y) = C_s z^s K_s(z),   z = sqrt(lambda) y,   C_s = 2^{1-s} / Gamma(s)
//! ```
//!
//! so that `phi(0+) = 1`, and `y^{1-2s} phi'(y) -> -d_s lambda^s` as `y -> 0`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::bessel::bessel_k;
use crate::error::{Error, Result};
use crate::field::{Field, Fourier};
use crate::linalg::power_extrapolate;
use crate::operator::principal_pow;
use crate::scalar::{gamma, Real};

/// Heights below this are used for the trace extrapolation.
pub const TRACE_HEIGHT_MAX: f64 = 0.1;
/// Largest accepted gap between the two highest-order extrapolants.
pub const EXTRAPOLATION_LIMIT: f64 = 1e-5;

/// Extension of `base` sampled at `heights`.
#[derive(Clone, Debug)]
pub struct ExtensionField<T: Real = f64> {
    pub base: Field<T>,
    pub heights: Vec<T>,
    pub slices: Vec<Field<T>>,
    pub s: T,
}

impl<T: Real> ExtensionField<T> {
    /// `|slice(y) - base| / |base|` at every height.
    pub fn boundary_deviation(&self) -> Vec<T> {
        let nb = self.base.l2_norm();
        self.slices
            .iter()
            .map(|sl| {
                if nb == T::zero() {
                    T::zero()
                } else {
                    sl.sub(&self.base).l2_norm() / nb
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct TraceReport<T: Real = f64> {
    /// Extrapolated `lim y^{1-2s} d_y u~`.
    pub weighted_neumann: Field<T>,
    pub ls_u: Field<T>,
    /// Least-squares `kappa` in `weighted_neumann ~ kappa L^s u`; NaN for a zero base.
    pub fitted_constant: T,
    /// Per active mode, `weighted_neumann / (lambda^s u^)`.
    pub per_mode_ratios: Vec<Complex<T>>,
    /// Standard deviation over mean modulus of `per_mode_ratios`.
    pub ratio_variation: T,
    /// Gap between the two highest-order extrapolants, relative to `max |lambda^s u^|`.
    pub extrapolation_residual: T,
    pub zero_field: bool,
}

/// `C_s = 2^{1-s} / Gamma(s)`.
pub fn profile_constant<T: Real>(s: T) -> T {
    T::lit(2.0).powf(T::one() - s) / gamma(s)
}

/// `d_s = -2s Gamma(-s) / (4^s Gamma(s))`, positive on `(0,1)`.
pub fn trace_constant<T: Real>(s: T) -> T {
    -T::lit(2.0) * s * gamma(-s) / (T::lit(4.0).powf(s) * gamma(s))
}

fn check_s<T: Real>(s: T) -> Result<()> {
    if s > T::zero() && s < T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("s must lie in (0,1), got {s}")))
    }
}

fn is_zero<T: Real>(z: Complex<T>) -> bool {
    z.re == T::zero() && z.im == T::zero()
}

/// `phi_lambda(y)`; the zero mode is the constant 1.
pub fn profile<T: Real>(s: T, lambda: Complex<T>, y: T) -> Result<Complex<T>> {
    check_s(s)?;
    if is_zero(lambda) {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let z = lambda.sqrt() * y;
    if z.norm() > T::lit(700.0) {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    Ok(z.powf(s) * bessel_k(s, z)? * profile_constant(s))
}

/// `y^{1-2s} phi_lambda'(y) = -C_s sqrt(lambda) y^{1-2s} z^s K_{1-s}(z)`.
pub fn weighted_profile_derivative<T: Real>(s: T, lambda: Complex<T>, y: T) -> Result<Complex<T>> {
    check_s(s)?;
    if is_zero(lambda) {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let root = lambda.sqrt();
    let z = root * y;
    if z.norm() > T::lit(700.0) {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let k = bessel_k(T::one() - s, z)?;
    Ok(-(root * z.powf(s) * k) * (profile_constant(s) * y.powf(T::one() - T::lit(2.0) * s)))
}

fn check_heights<T: Real>(heights: &[T]) -> Result<()> {
    if heights.is_empty() {
        return Err(Error::InvalidArgument("no heights given".into()));
    }
    if heights.iter().any(|h| !(*h > T::zero() && h.is_finite())) {
        return Err(Error::InvalidArgument("heights must be positive".into()));
    }
    if heights.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("heights must be strictly ascending".into()));
    }
    Ok(())
}

/// Geometric ladder of `count` heights from `lo` to `hi`.
pub fn geometric_heights<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    if count < 2 {
        return vec![lo];
    }
    let r = (hi / lo).ln() / T::from_usize_lossy(count - 1);
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo * (r * T::from_usize_lossy(i)).exp()
            }
        })
        .collect()
}

/// Default ladder: 20 geometric heights on `[1e-3, 1]`.
pub fn default_heights<T: Real>() -> Vec<T> {
    geometric_heights(T::lit(1e-3), T::one(), 20)
}

pub fn extend<T: Real>(u: &Field<T>, s: T, heights: &[T]) -> Result<ExtensionField<T>> {
    check_s(s)?;
    check_heights(heights)?;
    let g = &u.grid;
    let fourier = Fourier::new(g);
    let spec = fourier.forward(u);
    let slices = heights
        .par_iter()
        .map(|&y| {
            let mut out = spec.clone();
            for (k, c) in out.coeffs.iter_mut().enumerate() {
                if !is_zero(*c) {
                    *c *= profile(s, g.lambda(k), y)?;
                }
            }
            fourier.inverse(&out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtensionField {
        base: u.clone(),
        heights: heights.to_vec(),
        slices,
        s,
    })
}

pub fn neumann_trace<T: Real>(ext: &ExtensionField<T>) -> Result<TraceReport<T>> {
    let s = ext.s;
    let g = &ext.base.grid;
    let small: Vec<T> = ext
        .heights
        .iter()
        .copied()
        .filter(|&h| h < T::lit(TRACE_HEIGHT_MAX))
        .collect();
    if small.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 heights below {TRACE_HEIGHT_MAX}, got {}",
            small.len()
        )));
    }
    let m = small.len().min(4);
    let hs = &small[..m];
    let all_exps = [
        T::lit(2.0) - T::lit(2.0) * s,
        T::lit(2.0),
        T::lit(4.0) - T::lit(2.0) * s,
    ];

    let fourier = Fourier::new(g);
    let spec = fourier.forward(&ext.base);
    let umax = spec.coeffs.iter().fold(T::zero(), |a, c| a.max(c.norm()));
    let active = |c: &Complex<T>| c.norm() > umax * T::lit(1e-12);

    // per mode: (limit, gap between the two top extrapolants)
    let per_mode: Vec<(Complex<T>, T)> = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let c = spec.coeffs[k];
            let lam = g.lambda(k);
            if !active(&c) || is_zero(lam) {
                return Ok((Complex::new(T::zero(), T::zero()), T::zero()));
            }
            let vals = hs
                .iter()
                .map(|&y| weighted_profile_derivative(s, lam, y))
                .collect::<Result<Vec<_>>>()?;
            let re: Vec<T> = vals.iter().map(|v| v.re).collect();
            let im: Vec<T> = vals.iter().map(|v| v.im).collect();
            let fit = |vals: &[T], n: usize| power_extrapolate(&hs[..n], &vals[..n], &all_exps[..n - 1]);
            let top = Complex::new(fit(&re, m)?, fit(&im, m)?);
            let lower = Complex::new(fit(&re, m - 1)?, fit(&im, m - 1)?);
            Ok((top * c, (top - lower).norm() * c.norm()))
        })
        .collect::<Result<Vec<_>>>()?;

    let ls_spec: Vec<Complex<T>> = (0..g.len())
        .map(|k| spec.coeffs[k] * principal_pow(g.lambda(k), s))
        .collect();
    let ls_max = ls_spec.iter().fold(T::zero(), |a, c| a.max(c.norm()));
    let gap = per_mode.iter().fold(T::zero(), |a, p| a.max(p.1));
    let extrapolation_residual = if ls_max == T::zero() { T::zero() } else { gap / ls_max };
    if extrapolation_residual > T::lit(EXTRAPOLATION_LIMIT) {
        return Err(Error::Extrapolation {
            residual: extrapolation_residual.to_f64_lossy(),
            limit: EXTRAPOLATION_LIMIT,
        });
    }

    let wn_spec: Vec<Complex<T>> = per_mode.iter().map(|p| p.0).collect();
    let weighted_neumann = fourier.inverse_unchecked(&wn_spec);
    let ls_u = fourier.inverse_unchecked(&ls_spec);

    let zero_field = ls_max == T::zero();
    let (fitted_constant, per_mode_ratios, ratio_variation) = if zero_field {
        (T::nan(), Vec::new(), T::nan())
    } else {
        let num: T = wn_spec.iter().zip(&ls_spec).map(|(a, b)| (a * b.conj()).re).sum();
        let den: T = ls_spec.iter().map(|b| b.norm_sqr()).sum();
        let ratios: Vec<Complex<T>> = wn_spec
            .iter()
            .zip(&ls_spec)
            .filter(|(_, b)| b.norm() > ls_max * T::lit(1e-8))
            .map(|(a, b)| a / b)
            .collect();
        let nr = T::from_usize_lossy(ratios.len());
        let mean = ratios.iter().fold(Complex::new(T::zero(), T::zero()), |a, r| a + r) / nr;
        let var = ratios.iter().map(|r| (r - mean).norm_sqr()).sum::<T>() / nr;
        (num / den, ratios, var.sqrt() / mean.norm())
    };

    Ok(TraceReport {
        weighted_neumann,
        ls_u,
        fitted_constant,
        per_mode_ratios,
        ratio_variation,
        extrapolation_residual,
        zero_field,
    })
}

/// Max over interior heights and active modes of the profile ODE residual
/// `lambda phi - (1-2s)/y phi' - phi''`, derivatives by three-point differences,
/// each mode scaled by `(1 + |lambda|) max_y |phi|`.
pub fn extension_pde_residual<T: Real>(ext: &ExtensionField<T>) -> Result<T> {
    let hs = &ext.heights;
    if hs.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "need at least 5 heights, got {}",
            hs.len()
        )));
    }
    let s = ext.s;
    let g = &ext.base.grid;
    let spec = Fourier::new(g).forward(&ext.base);
    let umax = spec.coeffs.iter().fold(T::zero(), |a, c| a.max(c.norm()));
    let worst = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let lam = g.lambda(k);
            if spec.coeffs[k].norm() <= umax * T::lit(1e-12) || is_zero(lam) {
                return Ok(T::zero());
            }
            let phi = hs.iter().map(|&y| profile(s, lam, y)).collect::<Result<Vec<_>>>()?;
            let scale = (T::one() + lam.norm()) * phi.iter().fold(T::zero(), |a, p| a.max(p.norm()));
            if scale == T::zero() {
                return Ok(T::zero());
            }
            let mut worst = T::zero();
            for i in 1..hs.len() - 1 {
                let (h0, h1) = (hs[i] - hs[i - 1], hs[i + 1] - hs[i]);
                let d1 = phi[i + 1] * (h0 / (h1 * (h0 + h1))) - phi[i - 1] * (h1 / (h0 * (h0 + h1)))
                    + phi[i] * ((h1 - h0) / (h0 * h1));
                let d2 =
                    (phi[i + 1] * h0 + phi[i - 1] * h1 - phi[i] * (h0 + h1)) * (T::lit(2.0) / (h0 * h1 * (h0 + h1)));
                let r = lam * phi[i] - d1 * ((T::one() - T::lit(2.0) * s) / hs[i]) - d2;
                worst = worst.max(r.norm() / scale);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(worst.into_iter().fold(T::zero(), T::max))
}

/// Uniform ladder of `count` heights on `[lo, hi]`.
pub fn uniform_heights<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    let h = (hi - lo) / T::from_usize_lossy(count - 1);
    (0..count).map(|i| lo + h * T::from_usize_lossy(i)).collect()
}
