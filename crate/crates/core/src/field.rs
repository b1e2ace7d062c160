//! Node fields, their Fourier coefficients, and the discrete transform.
//!
//! The transform is normalized so that the Riemann-sum L² norm over the box
//! equals the plain coefficient norm:
//!
//! ```text
//! sum_nodes |u|^2 * cell_volume == sum_freqs |c|^2
//! ```
//!
//! i.e. `c = sqrt(cell_volume / N) * FFT(u)`.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::GridConfig;
use crate::scalar::Real;

/// Tag written into field files to identify the transform normalization.
pub const NORMALIZATION_TAG: &str = "unitary-riemann";

/// Symmetry tolerance accepted by [`dft_inverse`] in double precision.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// [`HERMITIAN_TOL`], widened to `1000 * epsilon` for coarser scalars.
pub fn hermitian_tol<T: Real>() -> T {
    T::lit(HERMITIAN_TOL).max(T::epsilon() * T::lit(1000.0))
}

/// Real samples of a space-time function, time index slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<T = f64> {
    pub grid: GridConfig<T>,
    pub values: Vec<T>,
}

/// Fourier coefficients on the frequency lattice, same flat layout as [`Field`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<T = f64> {
    pub grid: GridConfig<T>,
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> Field<T> {
    pub fn zeros(grid: &GridConfig<T>) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![T::zero(); grid.len()],
        }
    }

    pub fn from_values(grid: &GridConfig<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    /// Samples `f(t, [x0, x1])` at every node.
    pub fn from_fn(grid: &GridConfig<T>, f: impl Fn(T, [T; 2]) -> T) -> Self {
        let values = (0..grid.len())
            .map(|node| {
                let t = grid.time_at(grid.time_index(node));
                f(t, grid.space_at(grid.space_index(node)))
            })
            .collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `L²` inner product over the box (node sum times cell volume).
    pub fn dot(&self, other: &Self) -> T {
        dot(&self.values, &other.values) * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, a: T) -> Self {
        self.map(|v| a * v)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: T, other: &Self) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| x + a * y)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-T::one(), other)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(T::one(), other)
    }

    /// Time reflection `u(t, x) -> u(-t, x)` on the periodic lattice.
    pub fn time_reflected(&self) -> Self {
        let g = &self.grid;
        let mut out = vec![T::zero(); g.len()];
        for (node, &v) in self.values.iter().enumerate() {
            out[g.time_reflect_node(node)] = v;
        }
        Self {
            grid: g.clone(),
            values: out,
        }
    }

    /// Keeps only the listed nodes.
    pub fn restricted(&self, nodes: &[usize]) -> Self {
        let mut out = Self::zeros(&self.grid);
        for &n in nodes {
            out.values[n] = self.values[n];
        }
        out
    }

    /// Gathers the listed node values.
    pub fn gather(&self, nodes: &[usize]) -> Vec<T> {
        nodes.iter().map(|&n| self.values[n]).collect()
    }

    /// Zero field with `vals` scattered onto `nodes`.
    pub fn scatter(grid: &GridConfig<T>, nodes: &[usize], vals: &[T]) -> Self {
        let mut out = Self::zeros(grid);
        for (&n, &v) in nodes.iter().zip(vals) {
            out.values[n] = v;
        }
        out
    }
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(grid: &GridConfig<T>) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    /// Max relative deviation from `c(-k) = conj(c(k))`.
    pub fn hermitian_residue(&self) -> T {
        let scale = self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()));
        if scale == T::zero() {
            return T::zero();
        }
        let worst = (0..self.coeffs.len()).fold(T::zero(), |m, k| {
            let d = self.coeffs[k] - self.coeffs[self.grid.mirror_node(k)].conj();
            m.max(d.norm())
        });
        worst / scale
    }

    pub fn norm(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Cached FFT plans for one grid.
#[derive(Clone)]
pub struct Fourier<T: Real> {
    grid: GridConfig<T>,
    time_fwd: Arc<dyn Fft<T>>,
    time_inv: Arc<dyn Fft<T>>,
    space_fwd: Arc<dyn Fft<T>>,
    space_inv: Arc<dyn Fft<T>>,
    scale: T,
}

impl<T: Real> std::fmt::Debug for Fourier<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier").field("grid", &self.grid).finish()
    }
}

impl<T: Real> Fourier<T> {
    pub fn new(grid: &GridConfig<T>) -> Self {
        let mut planner = FftPlanner::new();
        let scale = (grid.cell_volume() / T::from_usize_lossy(grid.len())).sqrt();
        Self {
            grid: grid.clone(),
            time_fwd: planner.plan_fft_forward(grid.nodes_time),
            time_inv: planner.plan_fft_inverse(grid.nodes_time),
            space_fwd: planner.plan_fft_forward(grid.nodes_space),
            space_inv: planner.plan_fft_inverse(grid.nodes_space),
            scale,
        }
    }

    pub fn grid(&self) -> &GridConfig<T> {
        &self.grid
    }

    fn transform(&self, buf: &mut [Complex<T>], inverse: bool) {
        let g = &self.grid;
        let (tf, sf) = if inverse {
            (&self.time_inv, &self.space_inv)
        } else {
            (&self.time_fwd, &self.space_fwd)
        };
        let nx = g.nodes_space;
        // last spatial axis is contiguous
        sf.process(buf);
        if g.n_space_dims == 2 {
            // first spatial axis, stride nx, within each time slice
            let mut line = vec![Complex::new(T::zero(), T::zero()); nx * nx];
            for slice in buf.chunks_mut(nx * nx) {
                transpose_square(slice, &mut line, nx);
                sf.process(&mut line);
                transpose_square(&line, slice, nx);
            }
        }
        let nt = g.nodes_time;
        let sl = g.space_len();
        let mut cols = vec![Complex::new(T::zero(), T::zero()); buf.len()];
        for j in 0..nt {
            for i in 0..sl {
                cols[i * nt + j] = buf[j * sl + i];
            }
        }
        tf.process(&mut cols);
        for j in 0..nt {
            for i in 0..sl {
                buf[j * sl + i] = cols[i * nt + j];
            }
        }
    }

    pub fn forward(&self, field: &Field<T>) -> SpectralField<T> {
        let mut buf: Vec<Complex<T>> = field.values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.transform(&mut buf, false);
        for c in buf.iter_mut() {
            *c *= self.scale;
        }
        SpectralField {
            grid: self.grid.clone(),
            coeffs: buf,
        }
    }

    /// Inverse transform without the symmetry check; the imaginary part is dropped.
    pub fn inverse_unchecked(&self, coeffs: &[Complex<T>]) -> Field<T> {
        let mut buf = coeffs.to_vec();
        self.transform(&mut buf, true);
        let norm = T::one() / (self.scale * T::from_usize_lossy(self.grid.len()));
        Field {
            grid: self.grid.clone(),
            values: buf.into_iter().map(|c| c.re * norm).collect(),
        }
    }

    pub fn inverse(&self, spec: &SpectralField<T>) -> Result<Field<T>> {
        let residue = spec.hermitian_residue();
        if residue > hermitian_tol::<T>() {
            return Err(Error::HermitianViolation {
                residue: residue.to_f64_lossy(),
            });
        }
        Ok(self.inverse_unchecked(&spec.coeffs))
    }

    /// Multiplies the coefficients of `field` by `symbol[k]` and transforms back.
    pub fn multiply(&self, field: &Field<T>, symbol: &[Complex<T>]) -> Field<T> {
        let mut spec = self.forward(field);
        for (c, s) in spec.coeffs.iter_mut().zip(symbol) {
            *c *= *s;
        }
        self.inverse_unchecked(&spec.coeffs)
    }
}

fn transpose_square<T: Copy>(src: &[T], dst: &mut [T], n: usize) {
    for r in 0..n {
        for c in 0..n {
            dst[c * n + r] = src[r * n + c];
        }
    }
}

pub fn dft_forward<T: Real>(field: &Field<T>) -> SpectralField<T> {
    Fourier::new(&field.grid).forward(field)
}

pub fn dft_inverse<T: Real>(spec: &SpectralField<T>) -> Result<Field<T>> {
    Fourier::new(&spec.grid).inverse(spec)
}

/// Discrete `H^a` norm: `sqrt(sum (1 + |i rho + |xi|^2|)^a |c|^2)`.
pub fn sobolev_norm<T: Real>(field: &Field<T>, a: T) -> T {
    sobolev_norm_spectral(&dft_forward(field), a)
}

pub fn sobolev_norm_spectral<T: Real>(spec: &SpectralField<T>, a: T) -> T {
    let g = &spec.grid;
    spec.coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| (T::one() + g.lambda_modulus(k)).powf(a) * c.norm_sqr())
        .sum::<T>()
        .sqrt()
}

/// Output of [`time_window`].
#[derive(Clone, Debug)]
pub struct TimeWindowed<T = f64> {
    pub field: Field<T>,
    /// `|chi u|_{H^s} / |u|_{H^s}`; NaN when `u` is zero.
    pub norm_ratio: T,
}

/// Multiplies `field` by the indicator of `a <= t <= b`.
pub fn time_window<T: Real>(field: &Field<T>, a: T, b: T, s: T) -> Result<TimeWindowed<T>> {
    let g = &field.grid;
    if !(a < b) || a < -g.half_period_time || b > g.half_period_time {
        return Err(Error::InvalidArgument(format!(
            "time window [{a}, {b}] must satisfy -L_t <= a < b <= L_t"
        )));
    }
    let mut out = field.clone();
    for (node, v) in out.values.iter_mut().enumerate() {
        let t = g.time_at(g.time_index(node));
        if t < a || t > b {
            *v = T::zero();
        }
    }
    let denom = sobolev_norm(field, s);
    let norm_ratio = if denom > T::zero() {
        sobolev_norm(&out, s) / denom
    } else {
        T::nan()
    };
    Ok(TimeWindowed { field: out, norm_ratio })
}
