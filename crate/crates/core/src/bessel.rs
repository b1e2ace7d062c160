//! Modified Bessel function of the second kind `K_nu(z)` for `0 < nu <= 1`
//! and complex `z` in the right half plane.
//!
//! Three regimes, switched on `|z|`:
//!
//! | `|z|`          | method                                              |
//! |----------------|-----------------------------------------------------|
//! | `<= 2`         | Temme's series for `K_mu`, `K_{mu+1}` with `|mu| <= 1/2` |
//! | `(2, 17]`      | Steed/Temme continued fraction                      |
//! | `> 17`         | Hankel asymptotic expansion                         |
//!
//! Orders above 1/2 are reached with `mu = nu - 1`, so `K_nu = K_{mu+1}`.

#![allow(clippy::excessive_precision)]

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{temme_gammas, Real};

/// `|z|` at and below which the power series is used.
pub const SERIES_MAX: f64 = 2.0;
/// `|z|` above which the asymptotic expansion is used.
pub const ASYMPTOTIC_MIN: f64 = 17.0;

const MAX_TERMS: usize = 100_000;

/// `K_nu(z)` for `nu` in `(0, 1]`, `Re z > 0`.
pub fn bessel_k<T: Real>(order: T, z: Complex<T>) -> Result<Complex<T>> {
    if !(order > T::zero() && order <= T::one()) {
        return Err(Error::Domain(format!("bessel_k order must be in (0,1], got {order}")));
    }
    if !(z.re > T::zero()) || !z.im.is_finite() {
        return Err(Error::Domain(format!("bessel_k needs Re z > 0, got {z}")));
    }
    // (mu, use K_{mu+1})
    let (mu, shifted) = if order > T::lit(0.5) {
        (order - T::one(), true)
    } else {
        (order, false)
    };
    let r = z.norm();
    let (k_mu, k_mu1) = if r <= T::lit(SERIES_MAX) {
        temme_series(mu, z)
    } else if r <= T::lit(ASYMPTOTIC_MIN) {
        steed_cf2(mu, z)?
    } else {
        return Ok(asymptotic(order, z));
    };
    Ok(if shifted { k_mu1 } else { k_mu })
}

/// Temme's series: returns `(K_mu(z), K_{mu+1}(z))`, `|mu| <= 1/2`.
fn temme_series<T: Real>(mu: T, z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let one = Complex::new(T::one(), T::zero());
    let eps = T::epsilon();
    let half = T::lit(0.5);
    let x2 = z * half;
    let pimu = T::PI() * mu;
    let fact = if pimu.abs() < eps { T::one() } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = d * mu;
    let fact2 = if e.norm() < eps { one } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = (e.cosh() * gam1 + fact2 * d * gam2) * fact;
    let mut sum = ff;
    let ee = e.exp();
    let mut p = ee * (half / gampl);
    let mut q = (ee * gammi).inv() * half;
    let mut c = one;
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAX_TERMS {
        let fi = T::from_usize_lossy(i);
        ff = (ff * fi + p + q) / (fi * fi - mu * mu);
        c = c * dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * p - del * fi;
        sum1 += del1;
        if del.norm() < sum.norm() * eps && del1.norm() < sum1.norm() * eps {
            break;
        }
    }
    (sum, sum1 * x2.inv())
}

/// Continued fraction CF2 (Steed's algorithm, Temme's normalization):
/// returns `(K_mu(z), K_{mu+1}(z))`, `|mu| <= 1/2`, `Re z > 0`.
fn steed_cf2<T: Real>(mu: T, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let eps = T::epsilon();
    let two = T::lit(2.0);
    let mut b = (z + T::one()) * two;
    let mut d = b.inv();
    let mut h = d;
    let mut delh = d;
    let mut q1 = zero;
    let mut q2 = one;
    let a1 = T::lit(0.25) - mu * mu;
    let mut q = Complex::new(a1, T::zero());
    let mut c = Complex::new(a1, T::zero());
    let mut a = -a1;
    let mut s = one + q * delh;
    let mut converged = false;
    for i in 1..MAX_TERMS {
        let fi = T::from_usize_lossy(i);
        a -= two * fi;
        c = -c * a / (fi + T::one());
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += two;
        d = (b + d * a).inv();
        delh = (b * d - one) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).norm() < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Domain(format!("bessel_k continued fraction failed at z = {z}")));
    }
    h *= a1;
    let k_mu = (z.inv() * (T::PI() / two)).sqrt() * (-z).exp() / s;
    let k_mu1 = k_mu * (z + mu + T::lit(0.5) - h) / z;
    Ok((k_mu, k_mu1))
}

/// Hankel expansion `sqrt(pi/(2z)) e^{-z} sum_k a_k(nu) / z^k`.
fn asymptotic<T: Real>(nu: T, z: Complex<T>) -> Complex<T> {
    let m = T::lit(4.0) * nu * nu;
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    let zinv = z.inv();
    let mut prev = T::infinity();
    for k in 1..200 {
        let fk = T::from_usize_lossy(k);
        let odd = T::lit(2.0) * fk - T::one();
        term = term * (m - odd * odd) / (fk * T::lit(8.0)) * zinv;
        let tn = term.norm();
        if tn > prev {
            break;
        }
        sum += term;
        prev = tn;
        if tn < sum.norm() * T::epsilon() {
            break;
        }
    }
    (zinv * (T::PI() / T::lit(2.0))).sqrt() * (-z).exp() * sum
}
