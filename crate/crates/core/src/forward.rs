//! Exterior/initial-value Dirichlet problem for `L^s + Q` on `Omega_T`, its
//! adjoint, and the well-posedness diagnostics.
//!
//! Unknowns are the `omega_T` node values. With datum `f` supported off
//! `omega_T` the solution is `u = f + v`, where `v` solves
//!
//! ```text
//! P (L^s + Q) v = P (F - L^s f)
//! ```
//!
//! and `P` restricts to `omega_T`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{dot, Field};
use crate::linalg::{conjugate_gradient_partial, gmres, norm, LinearMap, SolverOptions};
use crate::masks::{NodeClass, RegionMasks};
use crate::operator::{FracOperator, Variant};
use crate::scalar::Real;

/// Potential on `omega_T`, stored in `masks.omega_t` order.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential<T = f64> {
    pub values: Vec<T>,
    pub bound: T,
}

impl<T: Real> Potential<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("potential must be finite".into()));
        }
        let bound = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        Ok(Self { values, bound })
    }

    pub fn zero(masks: &RegionMasks<T>) -> Self {
        Self {
            values: vec![T::zero(); masks.omega_t.len()],
            bound: T::zero(),
        }
    }

    pub fn constant(masks: &RegionMasks<T>, c: T) -> Self {
        Self {
            values: vec![c; masks.omega_t.len()],
            bound: c.abs(),
        }
    }

    /// Samples `q(t, x)` on `omega_T`.
    pub fn from_fn(masks: &RegionMasks<T>, q: impl Fn(T, [T; 2]) -> T) -> Result<Self> {
        let g = &masks.grid;
        Self::new(
            masks
                .omega_t
                .iter()
                .map(|&n| q(g.time_at(g.time_index(n)), g.space_at(g.space_index(n))))
                .collect(),
        )
    }

    /// Reads the `omega_T` values of a field.
    pub fn from_field(field: &Field<T>, masks: &RegionMasks<T>) -> Result<Self> {
        Self::new(field.gather(&masks.omega_t))
    }

    /// Full-box field, zero off `omega_T`.
    pub fn to_field(&self, masks: &RegionMasks<T>) -> Field<T> {
        Field::scatter(&masks.grid, &masks.omega_t, &self.values)
    }

    pub fn axpy(&self, a: T, other: &Self) -> Result<Self> {
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| x + a * y)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct ForwardSolution<T = f64> {
    pub u: Field<T>,
    /// `max |L^s u + Q u - F|` over `omega_T`, divided by the right-hand side norm.
    pub interior_residual: T,
    pub krylov_iters: usize,
    pub krylov_relres: T,
}

/// `exp(1 - 1/(1 - r^2))` for `r < 1`, zero outside; `r` measured in the
/// scaled coordinates `(t - t0)/a`, `(x - x0)/b`.
pub fn smooth_bump<T: Real>(t: T, x: [T; 2], t0: T, x0: [T; 2], a: T, b: T, dims: usize) -> T {
    let mut r2 = ((t - t0) / a).powi(2);
    for k in 0..dims {
        r2 += ((x[k] - x0[k]) / b).powi(2);
    }
    if r2 >= T::one() {
        T::zero()
    } else {
        (T::one() - T::one() / (T::one() - r2)).exp()
    }
}

/// The restricted operator `P (L^s + Q) P` or its adjoint counterpart.
#[derive(Clone, Debug)]
pub struct ForwardProblem<'a, T: Real> {
    op: FracOperator<T>,
    masks: &'a RegionMasks<T>,
    q: &'a Potential<T>,
    variant: Variant,
    jacobi: bool,
}

impl<'a, T: Real> ForwardProblem<'a, T> {
    pub fn new(s: T, masks: &'a RegionMasks<T>, q: &'a Potential<T>, variant: Variant) -> Result<Self> {
        Ok(Self {
            op: FracOperator::new(&masks.grid, s)?,
            masks,
            q,
            variant,
            jacobi: false,
        })
        .and_then(|p| p.check_potential().map(|_| p))
    }

    /// Reuses an operator already built for this grid.
    pub fn with_operator(
        op: FracOperator<T>,
        masks: &'a RegionMasks<T>,
        q: &'a Potential<T>,
        variant: Variant,
    ) -> Result<Self> {
        let p = Self {
            op,
            masks,
            q,
            variant,
            jacobi: false,
        };
        p.check_potential()?;
        Ok(p)
    }

    fn check_potential(&self) -> Result<()> {
        if self.q.len() != self.masks.omega_t.len() {
            return Err(Error::InvalidArgument(format!(
                "potential has {} values, omega_T has {} nodes",
                self.q.len(),
                self.masks.omega_t.len()
            )));
        }
        Ok(())
    }

    /// Enables the diagonal preconditioner `1 / (mean Re symbol + Q)`.
    pub fn with_jacobi(mut self, on: bool) -> Self {
        self.jacobi = on;
        self
    }

    pub fn operator(&self) -> &FracOperator<T> {
        &self.op
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn unknowns(&self) -> usize {
        self.masks.omega_t.len()
    }

    fn transpose_variant(&self) -> Variant {
        match self.variant {
            Variant::Forward => Variant::Adjoint,
            Variant::Adjoint => Variant::Forward,
        }
    }

    fn restricted(&self, v: &[T], out: &mut [T], variant: Variant) {
        let g = self.op.grid();
        let full = Field::scatter(g, &self.masks.omega_t, v);
        let lv = self.op.apply_variant(&full, variant);
        for (i, (&n, o)) in self.masks.omega_t.iter().zip(out.iter_mut()).enumerate() {
            *o = lv.values[n] + self.q.values[i] * v[i];
        }
    }

    /// `out = P (L + Q) v`.
    pub fn apply(&self, v: &[T], out: &mut [T]) {
        self.restricted(v, out, self.variant);
    }

    /// `out = P (L + Q)^T v`, the exact matrix transpose of [`Self::apply`].
    pub fn apply_transpose(&self, v: &[T], out: &mut [T]) {
        self.restricted(v, out, self.transpose_variant());
    }

    /// Diagonal entries: the circulant diagonal of `L^s` is the mean symbol.
    pub fn diagonal(&self) -> Vec<T> {
        let sym = self.op.forward_symbol();
        let mean = sym.iter().map(|c| c.re).sum::<T>() / T::from_usize_lossy(sym.len());
        self.q.values.iter().map(|&q| mean + q).collect()
    }

    /// Checks the support rule for the datum: zero on `omega_T` and on the
    /// buffer where the solution is pinned to zero.
    pub fn check_datum(&self, datum: &Field<T>) -> Result<()> {
        if datum.grid != *self.op.grid() {
            return Err(Error::InvalidArgument("datum is on a different grid".into()));
        }
        if !datum.is_finite() {
            return Err(Error::InvalidArgument("datum is not finite".into()));
        }
        let pinned = match self.variant {
            Variant::Forward => NodeClass::Past,
            Variant::Adjoint => NodeClass::Future,
        };
        for (n, &v) in datum.values.iter().enumerate() {
            let c = self.masks.class[n];
            if v != T::zero() && (c == NodeClass::Interior || c == pinned) {
                let what = if c == NodeClass::Interior {
                    "omega_T"
                } else {
                    "the pinned time buffer"
                };
                return Err(Error::Geometry(format!("datum is nonzero on {what} (node {n})")));
            }
        }
        Ok(())
    }

    /// Solves with exterior datum `datum` and interior source `source`
    /// (only its `omega_T` values are read).
    pub fn solve(&self, datum: &Field<T>, source: &Field<T>, opts: &SolverOptions<T>) -> Result<ForwardSolution<T>> {
        self.solve_from(datum, source, None, opts)
    }

    /// [`Self::solve`] with an initial guess for the interior unknowns.
    pub fn solve_from(
        &self,
        datum: &Field<T>,
        source: &Field<T>,
        x0: Option<&[T]>,
        opts: &SolverOptions<T>,
    ) -> Result<ForwardSolution<T>> {
        opts.validate()?;
        self.check_datum(datum)?;
        if source.grid != datum.grid {
            return Err(Error::InvalidArgument("source is on a different grid".into()));
        }
        let omega = &self.masks.omega_t;
        let lf = self.op.apply_variant(datum, self.variant);
        let b: Vec<T> = omega.iter().map(|&n| source.values[n] - lf.values[n]).collect();

        let diag = self.diagonal();
        let pre = move |x: &[T], y: &mut [T]| {
            for ((yi, &xi), &d) in y.iter_mut().zip(x).zip(&diag) {
                *yi = if d == T::zero() { xi } else { xi / d };
            }
        };
        let precond: Option<LinearMap<'_, T>> = if self.jacobi { Some(&pre) } else { None };
        let out = gmres(|x, y| self.apply(x, y), precond, &b, x0, opts)?;

        let mut u = datum.clone();
        for (&n, &v) in omega.iter().zip(&out.x) {
            u.values[n] = v;
        }
        let mut av = vec![T::zero(); b.len()];
        self.apply(&out.x, &mut av);
        let worst = av.iter().zip(&b).fold(T::zero(), |m, (&a, &bb)| m.max((a - bb).abs()));
        let bnorm = norm(&b);
        Ok(ForwardSolution {
            u,
            interior_residual: if bnorm == T::zero() { worst } else { worst / bnorm },
            krylov_iters: out.iterations,
            krylov_relres: out.relres,
        })
    }
}

/// Forward problem: `u = f` off `omega_T`, `u = 0` for `t <= -T`.
pub fn solve_dirichlet<T: Real>(
    f: &Field<T>,
    source: &Field<T>,
    q: &Potential<T>,
    s: T,
    masks: &RegionMasks<T>,
    opts: &SolverOptions<T>,
) -> Result<ForwardSolution<T>> {
    ForwardProblem::new(s, masks, q, Variant::Forward)?.solve(f, source, opts)
}

/// Adjoint problem with `L^s_*`: `u = g` off `omega_T`, `u = 0` for `t >= T`.
pub fn solve_adjoint<T: Real>(
    g: &Field<T>,
    source: &Field<T>,
    q: &Potential<T>,
    s: T,
    masks: &RegionMasks<T>,
    opts: &SolverOptions<T>,
) -> Result<ForwardSolution<T>> {
    ForwardProblem::new(s, masks, q, Variant::Adjoint)?.solve(g, source, opts)
}

/// `B_Q(u, w) = (L^{s/2} u, L^{s/2}_* w) + (Q u, w)_{Omega_T}`.
pub fn bilinear_form<T: Real>(u: &Field<T>, w: &Field<T>, q: &Potential<T>, s: T, masks: &RegionMasks<T>) -> Result<T> {
    let op = FracOperator::new(&u.grid, s)?;
    Ok(op.apply_half(u).dot(&op.apply_half_adjoint(w)) + potential_pairing(u, w, q, masks))
}

/// `<L^s u, w> + (Q u, w)`, the integrated-by-parts form of [`bilinear_form`].
pub fn bilinear_form_direct<T: Real>(
    u: &Field<T>,
    w: &Field<T>,
    q: &Potential<T>,
    s: T,
    masks: &RegionMasks<T>,
) -> Result<T> {
    let op = FracOperator::new(&u.grid, s)?;
    Ok(op.apply(u).dot(w) + potential_pairing(u, w, q, masks))
}

/// `(Q u, w)` over `omega_T`.
pub fn potential_pairing<T: Real>(u: &Field<T>, w: &Field<T>, q: &Potential<T>, masks: &RegionMasks<T>) -> T {
    masks
        .omega_t
        .iter()
        .zip(&q.values)
        .map(|(&n, &qv)| qv * u.values[n] * w.values[n])
        .sum::<T>()
        * u.grid.cell_volume()
}

/// `(B_0(v, v), cos(s pi/2) sum |lambda|^s |v^|^2)`.
pub fn coercivity_check<T: Real>(v: &Field<T>, s: T) -> Result<(T, T)> {
    let op = FracOperator::new(&v.grid, s)?;
    let spec = op.fourier().forward(v);
    let g = &v.grid;
    let mut lhs = T::zero();
    let mut weighted = T::zero();
    for (k, c) in spec.coeffs.iter().enumerate() {
        let w = c.norm_sqr();
        lhs += op.forward_symbol()[k].re * w;
        weighted += g.lambda_modulus(k).powf(s) * w;
    }
    Ok((lhs, (s * T::FRAC_PI_2()).cos() * weighted))
}

/// Inverse iteration for the smallest eigenpair of a symmetric positive
/// definite operator; returns the Rayleigh quotient and the unit vector.
fn smallest_eigenpair<T: Real>(
    apply: impl Fn(&[T], &mut [T]),
    n: usize,
    opts: &SolverOptions<T>,
) -> Result<(T, Vec<T>)> {
    // deterministic start with no special symmetry
    let mut x: Vec<T> = (0..n)
        .map(|i| T::lit(((i as f64 + 1.0) * 0.618_033_988_749_895).fract() - 0.5))
        .collect();
    let xn = norm(&x);
    x.iter_mut().for_each(|v| *v /= xn);
    let mut ax = vec![T::zero(); n];
    let mut value = T::infinity();
    for _ in 0..500 {
        // inexact inner solves only slow the iteration down
        let y = conjugate_gradient_partial(&apply, &x, Some(&x), opts).0.x;
        let yn = norm(&y);
        x = y.into_iter().map(|v| v / yn).collect();
        apply(&x, &mut ax);
        let next = dot(&x, &ax);
        let done = (value - next).abs() <= T::lit(1e-12) * next.abs();
        value = next;
        if done {
            break;
        }
    }
    Ok((value, x))
}

/// `cos(s pi/2)` times the smallest eigenvalue of `P |L|^s P` on `omega_T`:
/// a lower bound for `B_0(v, v) / |v|^2` over interior-supported `v`, and so
/// for the smallest singular value when `Q >= 0`.
pub fn coercivity_floor<T: Real>(s: T, masks: &RegionMasks<T>, opts: &SolverOptions<T>) -> Result<T> {
    opts.validate()?;
    let op = FracOperator::new(&masks.grid, s)?;
    let g = &masks.grid;
    let modulus: Vec<Complex<T>> = (0..g.len())
        .map(|k| Complex::new(g.lambda_modulus(k).powf(s), T::zero()))
        .collect();
    let apply = |v: &[T], out: &mut [T]| {
        let full = Field::scatter(g, &masks.omega_t, v);
        let lv = op.fourier().multiply(&full, &modulus);
        for (o, &n) in out.iter_mut().zip(&masks.omega_t) {
            *o = lv.values[n];
        }
    };
    let (value, _) = smallest_eigenpair(apply, masks.omega_t.len(), opts)?;
    Ok((s * T::FRAC_PI_2()).cos() * value)
}

/// Smallest singular value of `P (L^s + Q) P`, by inverse iteration on
/// `A^T A + mu I` with `mu = tol |A|^2` and conjugate-gradient inner solves.
pub fn eigenvalue_probe<T: Real>(q: &Potential<T>, s: T, masks: &RegionMasks<T>, opts: &SolverOptions<T>) -> Result<T> {
    opts.validate()?;
    let prob = ForwardProblem::new(s, masks, q, Variant::Forward)?;
    let n = prob.unknowns();
    let scale = prob.operator().symbol_scale() + q.bound;
    let mu = opts.tol * scale * scale;
    let normal = |x: &[T], y: &mut [T]| {
        let mut ax = vec![T::zero(); x.len()];
        prob.apply(x, &mut ax);
        prob.apply_transpose(&ax, y);
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi += mu * xi;
        }
    };
    let (_, x) = smallest_eigenpair(normal, n, opts)?;
    let mut ax = vec![T::zero(); n];
    prob.apply(&x, &mut ax);
    Ok(norm(&ax))
}

/// `|u|_{H^s}` on the slab `|t| < T` over `|F|_{H^{-s}}` on `omega_T` plus `|f|_{H^s}`.
pub fn stability_ratio<T: Real>(
    sol: &ForwardSolution<T>,
    f: &Field<T>,
    source: &Field<T>,
    s: T,
    masks: &RegionMasks<T>,
) -> T {
    let slab: Vec<usize> = (0..masks.grid.len())
        .filter(|&n| matches!(masks.class[n], NodeClass::Interior | NodeClass::Exterior))
        .collect();
    let num = crate::field::sobolev_norm(&sol.u.restricted(&slab), s);
    let den = crate::field::sobolev_norm(&source.restricted(&masks.omega_t), -s) + crate::field::sobolev_norm(f, s);
    if den == T::zero() {
        T::zero()
    } else {
        num / den
    }
}

/// `<A v, w> - <v, A^T w>` relative to `|A v| |w|`, for random-vector audits.
pub fn transpose_residual<T: Real>(prob: &ForwardProblem<'_, T>, v: &[T], w: &[T]) -> T {
    let n = v.len();
    let (mut av, mut atw) = (vec![T::zero(); n], vec![T::zero(); n]);
    prob.apply(v, &mut av);
    prob.apply_transpose(w, &mut atw);
    let scale = norm(&av) * norm(w) + norm(v) * norm(&atw);
    if scale == T::zero() {
        T::zero()
    } else {
        (dot(&av, w) - dot(v, &atw)).abs() / scale
    }
}

/// Per-mode lower bound used by [`coercivity_check`]: `Re lambda^s >= cos(s pi/2) |lambda|^s`.
pub fn mode_coercivity<T: Real>(lambda: Complex<T>, s: T) -> (T, T) {
    let m = lambda.norm();
    if m == T::zero() {
        return (T::zero(), T::zero());
    }
    (lambda.powf(s).re, (s * T::FRAC_PI_2()).cos() * m.powf(s))
}
