#![allow(dead_code)]

use fracalderon_core::*;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_on(g: &Grid64, nodes: &[usize], seed: u64) -> Field64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals: Vec<f64> = nodes.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    Field::scatter(g, nodes, &vals)
}

pub fn random_field(g: &Grid64, seed: u64) -> Field64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Field::from_values(g, (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

pub fn desk(n: usize) -> Masks64 {
    make_masks(&GridConfig::new(1, 2.0, 2.0, n, n).unwrap(), &Geometry::desk_default()).unwrap()
}

/// Dense `L^s` (or `L^s_*`) on a one-dimensional grid, summed mode by mode
/// from the symbol `(i rho + xi^2)^s`; the time-Nyquist row uses `|lambda|^s`.
pub fn dense_operator(g: &Grid64, s: f64, adjoint: bool) -> DMatrix<f64> {
    assert_eq!(g.n_space_dims, 1);
    let (nt, nx) = (g.nodes_time, g.nodes_space);
    let (lt, lx) = (g.half_period_time, g.half_period_space);
    let pi = std::f64::consts::PI;
    let mut sym = vec![Complex::new(0.0, 0.0); nt * nx];
    for a in 0..nt {
        let m = a as i64 - (nt / 2) as i64;
        for b in 0..nx {
            let k = b as i64 - (nx / 2) as i64;
            let rho = pi * m as f64 / lt;
            let xi = pi * k as f64 / lx;
            let lam = Complex::new(xi * xi, if adjoint { -rho } else { rho });
            sym[a * nx + b] = if lam.norm() == 0.0 {
                Complex::new(0.0, 0.0)
            } else if 2 * m.unsigned_abs() as usize == nt {
                Complex::new(lam.norm().powf(s), 0.0)
            } else {
                lam.powf(s)
            };
        }
    }
    // kernel as a function of the index difference
    let mut kern = vec![0.0; nt * nx];
    for dj in 0..nt {
        for di in 0..nx {
            let mut acc = Complex::new(0.0, 0.0);
            for a in 0..nt {
                let m = a as f64 - (nt / 2) as f64;
                for b in 0..nx {
                    let k = b as f64 - (nx / 2) as f64;
                    let ph = 2.0 * pi * (m * dj as f64 / nt as f64 + k * di as f64 / nx as f64);
                    acc += sym[a * nx + b] * Complex::from_polar(1.0, ph);
                }
            }
            kern[dj * nx + di] = acc.re / (nt * nx) as f64;
        }
    }
    let n = nt * nx;
    DMatrix::from_fn(n, n, |p, q| {
        let dj = (p / nx + nt - q / nx) % nt;
        let di = (p % nx + nx - q % nx) % nx;
        kern[dj * nx + di]
    })
}

pub fn submatrix(a: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])])
}

/// `P (L + Q) P` on `omega_T`.
pub fn dense_restricted(l: &DMatrix<f64>, m: &Masks64, q: &Potential64) -> DMatrix<f64> {
    let mut a = submatrix(l, &m.omega_t, &m.omega_t);
    for (i, &qv) in q.values.iter().enumerate() {
        a[(i, i)] += qv;
    }
    a
}

/// Dense DN map applied to `f`: `(L u)|_out` with `u = f + E u_int` solving the
/// restricted problem, by LU factorization.
pub fn dense_dn(l: &DMatrix<f64>, m: &Masks64, q: &Potential64, f: &Field64, out: &[usize]) -> Field64 {
    let a = dense_restricted(l, m, q);
    let fv = DVector::from_vec(f.values.clone());
    let lf = l * &fv;
    let rhs = DVector::from_iterator(m.omega_t.len(), m.omega_t.iter().map(|&k| -lf[k]));
    let ui = a.lu().solve(&rhs).expect("nonsingular restricted matrix");
    let mut u = fv;
    for (i, &k) in m.omega_t.iter().enumerate() {
        u[k] = ui[i];
    }
    let lu = l * u;
    Field::scatter(&m.grid, out, &out.iter().map(|&k| lu[k]).collect::<Vec<_>>())
}

/// Dense `<(Lambda_{Q1} - Lambda_{Q2}) f1, f2>` with the cell-volume weight.
pub fn dense_alessandrini_lhs(
    s: f64,
    m: &Masks64,
    q1: &Potential64,
    q2: &Potential64,
    f1: &Field64,
    f2: &Field64,
) -> f64 {
    let l = dense_operator(&m.grid, s, false);
    let d1 = dense_dn(&l, m, q1, f1, &m.measure_window);
    let d2 = dense_dn(&l, m, q2, f1, &m.measure_window);
    d1.sub(&d2).dot(f2)
}
