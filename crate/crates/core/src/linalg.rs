//! Matrix-free Krylov solvers and a few small dense routines.

use crate::error::{Error, Result};
use crate::field::dot;
use crate::scalar::Real;

/// Krylov solver settings.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions<T = f64> {
    /// Relative residual target.
    pub tol: T,
    pub max_iters: usize,
    /// GMRES restart length.
    pub restart: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-10),
            max_iters: 2000,
            restart: 50,
        }
    }
}

impl<T: Real> SolverOptions<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > T::zero()) || self.max_iters == 0 || self.restart == 0 {
            return Err(Error::InvalidArgument(format!("bad solver options {self:?}")));
        }
        Ok(())
    }
}

/// In-place linear map `y = A x`.
pub type LinearMap<'a, T> = &'a dyn Fn(&[T], &mut [T]);

#[derive(Clone, Debug)]
pub struct KrylovOutcome<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    /// True relative residual `|b - A x| / |b|`, recomputed at exit.
    pub relres: T,
}

pub(crate) fn norm<T: Real>(v: &[T]) -> T {
    dot(v, v).sqrt()
}

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
///
/// `apply(x, y)` must write `A x` into `y`. `precond`, when given, is applied
/// on the right: the iteration solves `A M^{-1} z = b`, `x = M^{-1} z`.
pub fn gmres<T: Real>(
    mut apply: impl FnMut(&[T], &mut [T]),
    precond: Option<LinearMap<'_, T>>,
    b: &[T],
    x0: Option<&[T]>,
    opts: &SolverOptions<T>,
) -> Result<KrylovOutcome<T>> {
    let n = b.len();
    let bnorm = norm(b);
    let mut x = x0.map(|v| v.to_vec()).unwrap_or_else(|| vec![T::zero(); n]);
    if bnorm == T::zero() {
        return Ok(KrylovOutcome {
            x: vec![T::zero(); n],
            iterations: 0,
            relres: T::zero(),
        });
    }
    let m = opts.restart.min(n).max(1);
    let mut ax = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut total = 0usize;

    let residual = |apply: &mut dyn FnMut(&[T], &mut [T]), x: &[T], ax: &mut [T]| -> Vec<T> {
        apply(x, ax);
        b.iter().zip(ax.iter()).map(|(&bi, &ai)| bi - ai).collect()
    };

    loop {
        let r = residual(&mut apply, &x, &mut ax);
        let rnorm = norm(&r);
        let relres = rnorm / bnorm;
        if relres <= opts.tol {
            return Ok(KrylovOutcome {
                x,
                iterations: total,
                relres,
            });
        }
        if total >= opts.max_iters {
            return Err(Error::NonConvergence {
                iterations: total,
                relres: relres.to_f64_lossy(),
            });
        }

        let mut basis: Vec<Vec<T>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|&v| v / rnorm).collect());
        let mut h = vec![vec![T::zero(); m + 1]; m];
        let mut cs = vec![T::zero(); m];
        let mut sn = vec![T::zero(); m];
        let mut g = vec![T::zero(); m + 1];
        g[0] = rnorm;
        let mut k_used = 0;

        for k in 0..m {
            let v = &basis[k];
            match precond {
                Some(p) => {
                    p(v, &mut z);
                    apply(&z, &mut w);
                }
                None => apply(v, &mut w),
            }
            for (i, vi) in basis.iter().enumerate() {
                let hij = dot(&w, vi);
                h[k][i] = hij;
                for (wj, &vj) in w.iter_mut().zip(vi) {
                    *wj -= hij * vj;
                }
            }
            let hnext = norm(&w);
            h[k][k + 1] = hnext;
            for i in 0..k {
                let (a, bb) = (h[k][i], h[k][i + 1]);
                h[k][i] = cs[i] * a + sn[i] * bb;
                h[k][i + 1] = -sn[i] * a + cs[i] * bb;
            }
            let (a, bb) = (h[k][k], h[k][k + 1]);
            let denom = a.hypot(bb);
            if denom == T::zero() {
                cs[k] = T::one();
                sn[k] = T::zero();
            } else {
                cs[k] = a / denom;
                sn[k] = bb / denom;
            }
            h[k][k] = denom;
            h[k][k + 1] = T::zero();
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            total += 1;
            k_used = k + 1;
            let est = g[k + 1].abs() / bnorm;
            if est <= opts.tol * T::lit(0.5) || total >= opts.max_iters || hnext == T::zero() {
                break;
            }
            basis.push(w.iter().map(|&v| v / hnext).collect());
        }

        // back substitution on the triangular Hessenberg factor
        let mut y = vec![T::zero(); k_used];
        for i in (0..k_used).rev() {
            let mut acc = g[i];
            for j in i + 1..k_used {
                acc -= h[j][i] * y[j];
            }
            y[i] = if h[i][i] == T::zero() { T::zero() } else { acc / h[i][i] };
        }
        let mut update = vec![T::zero(); n];
        for (j, &yj) in y.iter().enumerate() {
            for (u, &v) in update.iter_mut().zip(&basis[j]) {
                *u += yj * v;
            }
        }
        match precond {
            Some(p) => {
                p(&update, &mut z);
                for (xi, &zi) in x.iter_mut().zip(&z) {
                    *xi += zi;
                }
            }
            None => {
                for (xi, &ui) in x.iter_mut().zip(&update) {
                    *xi += ui;
                }
            }
        }
    }
}

/// Conjugate gradients for a symmetric positive definite operator.
pub fn conjugate_gradient<T: Real>(
    apply: impl FnMut(&[T], &mut [T]),
    b: &[T],
    x0: Option<&[T]>,
    opts: &SolverOptions<T>,
) -> Result<KrylovOutcome<T>> {
    let (out, converged) = conjugate_gradient_partial(apply, b, x0, opts);
    if converged {
        Ok(out)
    } else {
        Err(Error::NonConvergence {
            iterations: out.iterations,
            relres: out.relres.to_f64_lossy(),
        })
    }
}

/// [`conjugate_gradient`] that hands back the last iterate, with a flag that
/// is false when the tolerance was not reached.
pub fn conjugate_gradient_partial<T: Real>(
    mut apply: impl FnMut(&[T], &mut [T]),
    b: &[T],
    x0: Option<&[T]>,
    opts: &SolverOptions<T>,
) -> (KrylovOutcome<T>, bool) {
    let n = b.len();
    let bnorm = norm(b);
    if bnorm == T::zero() {
        return (
            KrylovOutcome {
                x: vec![T::zero(); n],
                iterations: 0,
                relres: T::zero(),
            },
            true,
        );
    }
    let mut x = x0.map(|v| v.to_vec()).unwrap_or_else(|| vec![T::zero(); n]);
    let mut ap = vec![T::zero(); n];
    apply(&x, &mut ap);
    let mut r: Vec<T> = b.iter().zip(&ap).map(|(&bi, &ai)| bi - ai).collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let mut iters = 0;
    // recompute the true residual periodically to curb drift
    let refresh = 50;
    loop {
        let relres = rr.sqrt() / bnorm;
        if relres <= opts.tol {
            apply(&x, &mut ap);
            let true_res = b
                .iter()
                .zip(&ap)
                .map(|(&bi, &ai)| (bi - ai) * (bi - ai))
                .sum::<T>()
                .sqrt()
                / bnorm;
            if true_res <= opts.tol * T::lit(2.0) {
                return (
                    KrylovOutcome {
                        x,
                        iterations: iters,
                        relres: true_res,
                    },
                    true,
                );
            }
            r = b.iter().zip(&ap).map(|(&bi, &ai)| bi - ai).collect();
            p = r.clone();
            rr = dot(&r, &r);
        }
        if iters >= opts.max_iters {
            return (
                KrylovOutcome {
                    x,
                    iterations: iters,
                    relres,
                },
                false,
            );
        }
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > T::zero()) {
            return (
                KrylovOutcome {
                    x,
                    iterations: iters,
                    relres,
                },
                false,
            );
        }
        let alpha = rr / pap;
        for ((xi, ri), (&pi, &api)) in x.iter_mut().zip(r.iter_mut()).zip(p.iter().zip(&ap)) {
            *xi += alpha * pi;
            *ri -= alpha * api;
        }
        iters += 1;
        if iters % refresh == 0 {
            apply(&x, &mut ap);
            for ((ri, &bi), &ai) in r.iter_mut().zip(b).zip(&ap) {
                *ri = bi - ai;
            }
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, &ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
}

/// CGLS for `min |K x - b|` with `K` given by `apply` and `K^T` by
/// `apply_t`, stopping when `|K^T r| <= tol |K^T b|`.
///
/// With `reorthogonalize`, each normal-equation residual is orthogonalized
/// against all previous ones (two passes of Gram-Schmidt); this stores one
/// vector per iteration. The flag is false when the tolerance was missed.
pub fn cgls_partial<T: Real>(
    mut apply: impl FnMut(&[T], &mut [T]),
    mut apply_t: impl FnMut(&[T], &mut [T]),
    b: &[T],
    n: usize,
    x0: Option<&[T]>,
    opts: &SolverOptions<T>,
    reorthogonalize: bool,
) -> (KrylovOutcome<T>, bool) {
    let m = b.len();
    let mut s = vec![T::zero(); n];
    apply_t(b, &mut s);
    let snorm0 = norm(&s);
    if snorm0 == T::zero() {
        return (
            KrylovOutcome {
                x: vec![T::zero(); n],
                iterations: 0,
                relres: T::zero(),
            },
            true,
        );
    }
    let mut x = x0.map(|v| v.to_vec()).unwrap_or_else(|| vec![T::zero(); n]);
    let mut r = b.to_vec();
    let mut q = vec![T::zero(); m];
    if x.iter().any(|v| *v != T::zero()) {
        apply(&x, &mut q);
        for (ri, &qi) in r.iter_mut().zip(&q) {
            *ri -= qi;
        }
    }
    apply_t(&r, &mut s);
    let mut basis: Vec<Vec<T>> = Vec::new();
    let push = |basis: &mut Vec<Vec<T>>, s: &[T]| {
        let nrm = norm(s);
        if nrm > T::zero() {
            basis.push(s.iter().map(|&v| v / nrm).collect());
        }
    };
    if reorthogonalize {
        push(&mut basis, &s);
    }
    let mut p = s.clone();
    let mut gamma = dot(&s, &s);
    let mut iters = 0;
    loop {
        let relres = gamma.sqrt() / snorm0;
        if relres <= opts.tol {
            apply(&x, &mut q);
            for ((ri, &bi), &qi) in r.iter_mut().zip(b).zip(&q) {
                *ri = bi - qi;
            }
            let mut st = vec![T::zero(); n];
            apply_t(&r, &mut st);
            let true_res = norm(&st) / snorm0;
            if true_res <= opts.tol * T::lit(2.0) || iters >= opts.max_iters {
                return (
                    KrylovOutcome {
                        x,
                        iterations: iters,
                        relres: true_res,
                    },
                    true_res <= opts.tol * T::lit(2.0),
                );
            }
            // restart from the true residual
            s = st;
            gamma = dot(&s, &s);
            p = s.clone();
            continue;
        }
        if iters >= opts.max_iters {
            return (
                KrylovOutcome {
                    x,
                    iterations: iters,
                    relres,
                },
                false,
            );
        }
        apply(&p, &mut q);
        let delta = dot(&q, &q);
        if !(delta > T::zero()) {
            return (
                KrylovOutcome {
                    x,
                    iterations: iters,
                    relres,
                },
                false,
            );
        }
        let a = gamma / delta;
        for (xi, &pi) in x.iter_mut().zip(&p) {
            *xi += a * pi;
        }
        for (ri, &qi) in r.iter_mut().zip(&q) {
            *ri -= a * qi;
        }
        apply_t(&r, &mut s);
        if reorthogonalize {
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &s);
                    for (si, &vi) in s.iter_mut().zip(v) {
                        *si -= c * vi;
                    }
                }
            }
            push(&mut basis, &s);
        }
        let gamma_new = dot(&s, &s);
        let beta = gamma_new / gamma;
        gamma = gamma_new;
        for (pi, &si) in p.iter_mut().zip(&s) {
            *pi = si + beta * *pi;
        }
        iters += 1;
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Real> Dense<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|r| dot(&self.data[r * self.cols..(r + 1) * self.cols], x))
            .collect()
    }
}

/// Solves a square system by Gaussian elimination with partial pivoting.
pub fn solve_dense<T: Real>(a: &Dense<T>, b: &[T]) -> Result<Vec<T>> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return Err(Error::InvalidArgument("solve_dense needs a square system".into()));
    }
    let mut m = a.data.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i * n + col].abs().partial_cmp(&m[j * n + col].abs()).unwrap())
            .unwrap_or(col);
        if m[piv * n + col] == T::zero() {
            return Err(Error::Domain("singular dense system".into()));
        }
        if piv != col {
            for c in 0..n {
                m.swap(col * n + c, piv * n + c);
            }
            rhs.swap(col, piv);
        }
        for r in col + 1..n {
            let f = m[r * n + col] / m[col * n + col];
            if f != T::zero() {
                for c in col..n {
                    let v = m[col * n + c];
                    m[r * n + c] -= f * v;
                }
                let v = rhs[col];
                rhs[r] -= f * v;
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut acc = rhs[r];
        for c in r + 1..n {
            acc -= m[r * n + c] * x[c];
        }
        x[r] = acc / m[r * n + r];
    }
    Ok(x)
}

/// Minimizes `|A c - b|^2 + reg |c|^2` by Householder QR of `[A; sqrt(reg) I]`.
pub fn least_squares<T: Real>(a: &Dense<T>, b: &[T], reg: T) -> Result<Vec<T>> {
    let (m, n) = (a.rows, a.cols);
    if b.len() != m {
        return Err(Error::InvalidArgument("least_squares: rhs length mismatch".into()));
    }
    if reg < T::zero() {
        return Err(Error::InvalidArgument("least_squares: negative regularization".into()));
    }
    let rows = m + n;
    // column-major working copy
    let mut q = vec![T::zero(); rows * n];
    for j in 0..n {
        for i in 0..m {
            q[j * rows + i] = a.get(i, j);
        }
        q[j * rows + m + j] = reg.sqrt();
    }
    let mut rhs = b.to_vec();
    rhs.resize(rows, T::zero());
    let mut diag = vec![T::zero(); n];
    for k in 0..n {
        let col = &mut q[k * rows..(k + 1) * rows];
        let alpha = col[k..].iter().map(|v| *v * *v).sum::<T>().sqrt();
        if alpha == T::zero() {
            diag[k] = T::zero();
            continue;
        }
        let sign = if col[k] >= T::zero() { T::one() } else { -T::one() };
        let d = -sign * alpha;
        col[k] -= d;
        let vnorm2: T = col[k..].iter().map(|v| *v * *v).sum();
        diag[k] = d;
        let v: Vec<T> = col[k..].to_vec();
        for j in k + 1..n {
            let cj = &mut q[j * rows..(j + 1) * rows];
            let f = T::lit(2.0) * dot(&v, &cj[k..]) / vnorm2;
            for (c, &vi) in cj[k..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        let f = T::lit(2.0) * dot(&v, &rhs[k..]) / vnorm2;
        for (r, &vi) in rhs[k..].iter_mut().zip(&v) {
            *r -= f * vi;
        }
    }
    let scale = diag.iter().fold(T::zero(), |m, d| m.max(d.abs()));
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k];
        for j in k + 1..n {
            acc -= q[j * rows + k] * x[j];
        }
        // rank-deficient directions are left at zero
        x[k] = if diag[k].abs() <= scale * T::epsilon() * T::lit(16.0) {
            T::zero()
        } else {
            acc / diag[k]
        };
    }
    Ok(x)
}

/// Least-squares fit of `values[i] ~ c0 + sum_k c_k heights[i]^exps[k]` through
/// exactly `exps.len() + 1` points; returns `c0`.
pub(crate) fn power_extrapolate<T: Real>(heights: &[T], values: &[T], exps: &[T]) -> Result<T> {
    let n = exps.len() + 1;
    if heights.len() != n || values.len() != n {
        return Err(Error::InvalidArgument("power_extrapolate: size mismatch".into()));
    }
    let mut a = Dense::zeros(n, n);
    for (i, &h) in heights.iter().enumerate() {
        a.set(i, 0, T::one());
        for (k, &p) in exps.iter().enumerate() {
            a.set(i, k + 1, h.powf(p));
        }
    }
    Ok(solve_dense(&a, values)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, shift: f64, seed: u64) -> Dense<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = Dense::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, rng.gen_range(-1.0..1.0) / (n as f64).sqrt());
            }
            a.set(i, i, a.get(i, i) + shift);
        }
        a
    }

    #[test]
    fn gmres_solves_nonsymmetric_system() {
        let n = 60;
        let a = random_matrix(n, 3.0, 1);
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let b = a.matvec(&x_true);
        let opts = SolverOptions {
            tol: 1e-12,
            max_iters: 500,
            restart: 10,
        };
        let out = gmres(|x, y| y.copy_from_slice(&a.matvec(x)), None, &b, None, &opts).unwrap();
        let err = x_true
            .iter()
            .zip(&out.x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert!(out.relres <= 1e-12);
    }

    #[test]
    fn gmres_zero_rhs_takes_no_iterations() {
        let a = random_matrix(5, 3.0, 2);
        let out = gmres(
            |x, y| y.copy_from_slice(&a.matvec(x)),
            None,
            &[0.0; 5],
            None,
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(out.iterations, 0);
        assert!(out.x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gmres_reports_nonconvergence() {
        // singular operator with rhs outside its range
        let b = [1.0, 1.0];
        let opts = SolverOptions {
            tol: 1e-10,
            max_iters: 20,
            restart: 2,
        };
        let res = gmres(
            |x, y| {
                y[0] = x[0];
                y[1] = 0.0;
            },
            None,
            &b,
            None,
            &opts,
        );
        assert!(matches!(res, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn cg_matches_dense_solve() {
        let n = 40;
        let m = random_matrix(n, 0.0, 3);
        let mut spd = Dense::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v: f64 = (0..n).map(|k| m.get(k, i) * m.get(k, j)).sum();
                spd.set(i, j, v + if i == j { 0.5 } else { 0.0 });
            }
        }
        let b: Vec<f64> = (0..n).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let direct = solve_dense(&spd, &b).unwrap();
        let opts = SolverOptions {
            tol: 1e-12,
            ..Default::default()
        };
        let out = conjugate_gradient(|x, y| y.copy_from_slice(&spd.matvec(x)), &b, None, &opts).unwrap();
        let err = direct
            .iter()
            .zip(&out.x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn cgls_matches_normal_equations_on_graded_matrix() {
        // tall matrix with singular values spread over eight decades
        let (m, n) = (50, 30);
        let q = random_matrix(m, 0.0, 4);
        let mut a = Dense::zeros(m, n);
        for j in 0..n {
            let sv = 10f64.powf(-8.0 * j as f64 / (n - 1) as f64);
            for i in 0..m {
                a.set(i, j, q.get(i, j) * sv);
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (0.3 * i as f64).cos()).collect();
        let b = a.matvec(&x_true);
        let at = |y: &[f64], out: &mut [f64]| {
            for (j, o) in out.iter_mut().enumerate() {
                *o = (0..m).map(|i| a.get(i, j) * y[i]).sum();
            }
        };
        let opts = SolverOptions {
            tol: 1e-14,
            max_iters: 200,
            ..Default::default()
        };
        let (plain, _) = cgls_partial(|x, y| y.copy_from_slice(&a.matvec(x)), at, &b, n, None, &opts, false);
        let (reorth, ok) = cgls_partial(|x, y| y.copy_from_slice(&a.matvec(x)), at, &b, n, None, &opts, true);
        let err = |x: &[f64]| {
            a.matvec(x)
                .iter()
                .zip(&b)
                .map(|(u, v)| (u - v).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        assert!(ok);
        assert!(reorth.iterations <= n, "{}", reorth.iterations);
        assert!(err(&reorth.x) <= 1e-7 * norm(&b), "{}", err(&reorth.x));
        assert!(err(&reorth.x) * 5.0 <= err(&plain.x));
        let zero = cgls_partial(
            |x, y| y.copy_from_slice(&a.matvec(x)),
            at,
            &vec![0.0; m],
            n,
            None,
            &opts,
            true,
        );
        assert_eq!(zero.0.iterations, 0);
    }

    #[test]
    fn least_squares_recovers_overdetermined_fit() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
        let a = Dense::from_columns(&[
            xs.iter().map(|_| 1.0).collect(),
            xs.clone(),
            xs.iter().map(|x| x * x).collect(),
        ]);
        let b: Vec<f64> = xs.iter().map(|x| 1.0 - 2.0 * x + 0.5 * x * x).collect();
        let c = least_squares(&a, &b, 0.0).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-12 && (c[1] + 2.0).abs() < 1e-12 && (c[2] - 0.5).abs() < 1e-12);
        // ridge shrinks the coefficients
        let r = least_squares(&a, &b, 1.0).unwrap();
        assert!(r.iter().map(|v| v * v).sum::<f64>() < c.iter().map(|v| v * v).sum::<f64>());
    }

    #[test]
    fn power_extrapolation_removes_known_exponents() {
        let f = |h: f64| 2.0 + 3.0 * h.powf(0.5) - h * h + 0.1 * h.powf(3.5);
        let hs = [1e-2, 2e-2, 4e-2, 8e-2];
        let vals: Vec<f64> = hs.iter().map(|&h| f(h)).collect();
        let c0 = power_extrapolate(&hs, &vals, &[0.5, 2.0, 3.5]).unwrap();
        assert!((c0 - 2.0).abs() < 1e-12, "{c0}");
    }
}
