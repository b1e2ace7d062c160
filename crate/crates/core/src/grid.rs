//! Uniform periodic space-time lattice and its frequency lattice.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Periodic box `[-L_t, L_t) x [-L_x, L_x)^n` sampled on a uniform lattice.
///
/// Node `j` in time sits at `t_j = -L_t + j*dt`; spatial axes likewise.
/// Flat node indices run time-slowest, then spatial axes in order.
#[derive(Clone, Debug, PartialEq)]
pub struct GridConfig<T = f64> {
    pub n_space_dims: usize,
    pub half_period_time: T,
    pub half_period_space: T,
    pub nodes_time: usize,
    pub nodes_space: usize,
}

impl<T: Real> GridConfig<T> {
    pub fn new(
        n_space_dims: usize,
        half_period_time: T,
        half_period_space: T,
        nodes_time: usize,
        nodes_space: usize,
    ) -> Result<Self> {
        if !(1..=2).contains(&n_space_dims) {
            return Err(Error::InvalidArgument(format!(
                "n_space_dims must be 1 or 2, got {n_space_dims}"
            )));
        }
        if !(half_period_time > T::zero()) || !(half_period_space > T::zero()) {
            return Err(Error::InvalidArgument("half periods must be positive".into()));
        }
        for (name, n) in [("nodes_time", nodes_time), ("nodes_space", nodes_space)] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be an even integer >= 8, got {n}"
                )));
            }
        }
        Ok(Self {
            n_space_dims,
            half_period_time,
            half_period_space,
            nodes_time,
            nodes_space,
        })
    }

    /// Default desk-scale grid: n = 1, 128 x 128 nodes on `[-2,2)^2`.
    pub fn desk_default() -> Self {
        Self::new(1, T::lit(2.0), T::lit(2.0), 128, 128).expect("valid default grid")
    }

    pub fn dt(&self) -> T {
        T::lit(2.0) * self.half_period_time / T::from_usize_lossy(self.nodes_time)
    }

    pub fn dx(&self) -> T {
        T::lit(2.0) * self.half_period_space / T::from_usize_lossy(self.nodes_space)
    }

    pub fn cell_volume(&self) -> T {
        self.dt() * self.dx().powi(self.n_space_dims as i32)
    }

    /// Number of spatial nodes per time slice.
    pub fn space_len(&self) -> usize {
        self.nodes_space.pow(self.n_space_dims as u32)
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.nodes_time * self.space_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn time_index(&self, node: usize) -> usize {
        node / self.space_len()
    }

    pub fn space_index(&self, node: usize) -> usize {
        node % self.space_len()
    }

    pub fn node(&self, time_index: usize, space_index: usize) -> usize {
        time_index * self.space_len() + space_index
    }

    pub fn time_at(&self, time_index: usize) -> T {
        -self.half_period_time + T::from_usize_lossy(time_index) * self.dt()
    }

    /// Per-axis indices of a spatial index (unused axes are 0).
    pub fn space_axes(&self, space_index: usize) -> [usize; 2] {
        match self.n_space_dims {
            1 => [space_index, 0],
            _ => [space_index / self.nodes_space, space_index % self.nodes_space],
        }
    }

    /// Spatial coordinates of a spatial index (unused axes are 0).
    pub fn space_at(&self, space_index: usize) -> [T; 2] {
        let axes = self.space_axes(space_index);
        let coord = |i: usize| -self.half_period_space + T::from_usize_lossy(i) * self.dx();
        match self.n_space_dims {
            1 => [coord(axes[0]), T::zero()],
            _ => [coord(axes[0]), coord(axes[1])],
        }
    }

    /// Signed frequency index of FFT bin `k` for an axis of length `n`, in `[-n/2, n/2)`.
    pub fn signed_bin(k: usize, n: usize) -> i64 {
        if k < n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    /// Bin of the reflected frequency `-k`.
    pub fn mirror_bin(k: usize, n: usize) -> usize {
        (n - k) % n
    }

    pub fn rho(&self, k: usize) -> T {
        T::PI() * T::lit(Self::signed_bin(k, self.nodes_time) as f64) / self.half_period_time
    }

    pub fn xi(&self, m: usize) -> T {
        T::PI() * T::lit(Self::signed_bin(m, self.nodes_space) as f64) / self.half_period_space
    }

    /// `|xi|^2` for a spatial bin index.
    pub fn xi_sq(&self, space_index: usize) -> T {
        let axes = self.space_axes(space_index);
        (0..self.n_space_dims).map(|a| self.xi(axes[a]).powi(2)).sum()
    }

    /// Flat index of the frequency `(-rho, -xi)`.
    pub fn mirror_node(&self, node: usize) -> usize {
        let k = self.time_index(node);
        let axes = self.space_axes(self.space_index(node));
        let kt = Self::mirror_bin(k, self.nodes_time);
        let m0 = Self::mirror_bin(axes[0], self.nodes_space);
        let space = match self.n_space_dims {
            1 => m0,
            _ => m0 * self.nodes_space + Self::mirror_bin(axes[1], self.nodes_space),
        };
        self.node(kt, space)
    }

    /// Flat index of the time-reflected node `t -> -t` (same spatial position).
    pub fn time_reflect_node(&self, node: usize) -> usize {
        let j = self.time_index(node);
        self.node(Self::mirror_bin(j, self.nodes_time), self.space_index(node))
    }

    /// `|i rho + |xi|^2| = sqrt(rho^2 + |xi|^4)` at a frequency node.
    pub fn lambda_modulus(&self, node: usize) -> T {
        let rho = self.rho(self.time_index(node));
        let x2 = self.xi_sq(self.space_index(node));
        rho.hypot(x2)
    }

    /// Discrete parabolic symbol base `lambda = i rho + |xi|^2` at a frequency node.
    ///
    /// On the time-Nyquist row the bin is its own mirror, so a non-real
    /// symbol would break Hermitian symmetry; there `lambda` is replaced by its
    /// modulus, which keeps `|lambda|` and every power identity intact.
    pub fn lambda(&self, node: usize) -> Complex<T> {
        let k = self.time_index(node);
        let x2 = self.xi_sq(self.space_index(node));
        if 2 * k == self.nodes_time {
            Complex::new(self.rho(k).hypot(x2), T::zero())
        } else {
            Complex::new(x2, self.rho(k))
        }
    }

    /// Same lattice with a different time half-period and node count at equal spacing.
    pub fn with_time_extent(&self, half_period_time: T, nodes_time: usize) -> Result<Self> {
        Self::new(
            self.n_space_dims,
            half_period_time,
            self.half_period_space,
            nodes_time,
            self.nodes_space,
        )
    }
}
