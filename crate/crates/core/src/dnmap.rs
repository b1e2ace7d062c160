//! Dirichlet-to-Neumann map, its adjoint, and the Alessandrini identity.
//!
//! Pairings of exterior data are node sums times the cell volume.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::forward::{potential_pairing, ForwardProblem, ForwardSolution, Potential};
use crate::linalg::SolverOptions;
use crate::masks::RegionMasks;
use crate::operator::Variant;
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct DNRecord<T = f64> {
    /// Exterior datum.
    pub input: Field<T>,
    /// `L^s u` (or `L^s_* u`) on the output window, zero elsewhere.
    pub output: Field<T>,
    pub solution: ForwardSolution<T>,
}

impl<T: Real> DNRecord<T> {
    /// `<output, g>` over the box.
    pub fn pair(&self, g: &Field<T>) -> T {
        self.output.dot(g)
    }
}

fn check_support<T: Real>(datum: &Field<T>, window: &[usize], name: &str) -> Result<()> {
    let mut inside = vec![false; datum.values.len()];
    for &n in window {
        inside[n] = true;
    }
    match datum
        .values
        .iter()
        .enumerate()
        .find(|(n, &v)| v != T::zero() && !inside[*n])
    {
        Some((n, _)) => Err(Error::Geometry(format!(
            "datum must be supported on the {name} window (nonzero at node {n})"
        ))),
        None => Ok(()),
    }
}

fn run<T: Real>(
    datum: &Field<T>,
    q: &Potential<T>,
    s: T,
    masks: &RegionMasks<T>,
    opts: &SolverOptions<T>,
    variant: Variant,
) -> Result<DNRecord<T>> {
    let (input_window, output_window, name) = match variant {
        Variant::Forward => (&masks.control_window, &masks.measure_window, "control"),
        Variant::Adjoint => (&masks.measure_window, &masks.control_window, "measure"),
    };
    check_support(datum, input_window, name)?;
    let prob = ForwardProblem::new(s, masks, q, variant)?;
    let solution = prob.solve(datum, &Field::zeros(&masks.grid), opts)?;
    let lu = prob.operator().apply_variant(&solution.u, variant);
    Ok(DNRecord {
        input: datum.clone(),
        output: lu.restricted(output_window),
        solution,
    })
}

/// `Lambda_Q f` on the measure window for `f` on the control window.
pub fn dn_apply<T: Real>(
    f: &Field<T>,
    q: &Potential<T>,
    s: T,
    masks: &RegionMasks<T>,
    opts: &SolverOptions<T>,
) -> Result<DNRecord<T>> {
    run(f, q, s, masks, opts, Variant::Forward)
}

/// `Lambda_Q^* g` on the control window for `g` on the measure window.
pub fn dn_adjoint_apply<T: Real>(
    g: &Field<T>,
    q: &Potential<T>,
    s: T,
    masks: &RegionMasks<T>,
    opts: &SolverOptions<T>,
) -> Result<DNRecord<T>> {
    run(g, q, s, masks, opts, Variant::Adjoint)
}

/// `|<Lambda f, g> - <f, Lambda^* g>| / (|<Lambda f, g>| + |<f, Lambda^* g>|)`.
pub fn adjoint_pairing_residual<T: Real>(forward: &DNRecord<T>, adjoint: &DNRecord<T>) -> T {
    let a = forward.pair(&adjoint.input);
    let b = adjoint.pair(&forward.input);
    let scale = a.abs() + b.abs();
    if scale == T::zero() {
        T::zero()
    } else {
        (a - b).abs() / scale
    }
}

#[derive(Clone, Debug)]
pub struct AlessandriniReport<T = f64> {
    /// `<(Lambda_{Q1} - Lambda_{Q2}) f1, f2>` from two forward solves.
    pub lhs: T,
    /// `((Q1 - Q2) u1, u2)` over `omega_T`, `u2` the `Q2` adjoint solution.
    pub rhs: T,
    /// `|lhs - rhs| / (|lhs| + |rhs| + tol |f1| |f2|)`.
    pub residual: T,
    pub u1: Field<T>,
    pub u2: Field<T>,
}

pub fn alessandrini<T: Real>(
    q1: &Potential<T>,
    q2: &Potential<T>,
    f1: &Field<T>,
    f2: &Field<T>,
    s: T,
    masks: &RegionMasks<T>,
    opts: &SolverOptions<T>,
) -> Result<AlessandriniReport<T>> {
    check_support(f2, &masks.measure_window, "measure")?;
    let ((d1, d2), adj) = rayon::join(
        || rayon::join(|| dn_apply(f1, q1, s, masks, opts), || dn_apply(f1, q2, s, masks, opts)),
        || dn_adjoint_apply(f2, q2, s, masks, opts),
    );
    let (d1, d2, adj) = (d1?, d2?, adj?);
    let lhs = d1.pair(f2) - d2.pair(f2);
    let dq = q1.axpy(-T::one(), q2)?;
    let u1 = d1.solution.u;
    let u2 = adj.solution.u;
    let rhs = potential_pairing(&u1, &u2, &dq, masks);
    let eps = opts.tol * f1.l2_norm() * f2.l2_norm();
    let denom = lhs.abs() + rhs.abs() + eps;
    Ok(AlessandriniReport {
        lhs,
        rhs,
        residual: if denom == T::zero() {
            T::zero()
        } else {
            (lhs - rhs).abs() / denom
        },
        u1,
        u2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{bilinear_form, smooth_bump};
    use crate::grid::GridConfig;
    use crate::masks::{make_masks, Geometry};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(n: usize) -> RegionMasks {
        let g = GridConfig::new(1, 2.0, 2.0, n, n).unwrap();
        make_masks(&g, &Geometry::desk_default()).unwrap()
    }

    fn random_on(m: &RegionMasks, window: &[usize], rng: &mut ChaCha8Rng) -> Field {
        let vals: Vec<f64> = window.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        Field::scatter(&m.grid, window, &vals)
    }

    fn bump_q(m: &RegionMasks, amp: f64) -> Potential {
        Potential::from_fn(m, |t, x| amp * smooth_bump(t, x, 0.0, [0.0; 2], 1.0, 0.5, 1)).unwrap()
    }

    #[test]
    fn zero_datum_gives_zero_output() {
        let m = setup(32);
        let q = bump_q(&m, 1.0);
        let z = Field::zeros(&m.grid);
        let o = SolverOptions::default();
        assert_eq!(dn_apply(&z, &q, 0.5, &m, &o).unwrap().output.max_abs(), 0.0);
        assert_eq!(dn_adjoint_apply(&z, &q, 0.5, &m, &o).unwrap().output.max_abs(), 0.0);
    }

    #[test]
    fn datum_outside_window_is_rejected() {
        let m = setup(32);
        let q = Potential::zero(&m);
        let mut f = Field::zeros(&m.grid);
        f.values[m.measure_window[0]] = 1.0;
        let o = SolverOptions::default();
        assert!(matches!(dn_apply(&f, &q, 0.5, &m, &o), Err(Error::Geometry(_))));
    }

    #[test]
    fn pairing_matches_bilinear_form() {
        let m = setup(32);
        let q = bump_q(&m, 0.8);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let o = SolverOptions::default();
        for _ in 0..3 {
            let f = random_on(&m, &m.control_window, &mut rng);
            let g = random_on(&m, &m.measure_window, &mut rng);
            let rec = dn_apply(&f, &q, 0.5, &m, &o).unwrap();
            let a = rec.pair(&g);
            let b = bilinear_form(&rec.solution.u, &g, &q, 0.5, &m).unwrap();
            assert!((a - b).abs() <= 1e-10 * (a.abs() + b.abs()), "{a} {b}");
        }
    }

    #[test]
    fn adjoint_pairing_and_linearity() {
        let m = setup(32);
        let q = bump_q(&m, 1.2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let o = SolverOptions::default();
        let f1 = random_on(&m, &m.control_window, &mut rng);
        let f2 = random_on(&m, &m.control_window, &mut rng);
        let g = random_on(&m, &m.measure_window, &mut rng);
        let d1 = dn_apply(&f1, &q, 0.5, &m, &o).unwrap();
        let d2 = dn_apply(&f2, &q, 0.5, &m, &o).unwrap();
        let da = dn_adjoint_apply(&g, &q, 0.5, &m, &o).unwrap();
        assert!(adjoint_pairing_residual(&d1, &da) < 1e-9);
        let combo = dn_apply(&f1.axpy(-2.5, &f2), &q, 0.5, &m, &o).unwrap();
        let lin = d1.output.axpy(-2.5, &d2.output);
        assert!(combo.output.sub(&lin).l2_norm() <= 1e-9 * lin.l2_norm());
    }

    #[test]
    fn time_reflection_links_adjoint_to_forward() {
        // swap the windows so the reflected datum lands on the control window
        let g = GridConfig::new(1, 2.0, 2.0, 32, 32).unwrap();
        let m = make_masks(&g, &Geometry::desk_default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let o = SolverOptions {
            tol: 1e-12,
            ..Default::default()
        };
        let q = Potential::zero(&m);
        let gdat = random_on(&m, &m.measure_window, &mut rng);
        let adj = dn_adjoint_apply(&gdat, &q, 0.5, &m, &o).unwrap();
        let mut geo = Geometry::desk_default();
        std::mem::swap(&mut geo.control, &mut geo.measure);
        let ms = make_masks(&g, &geo).unwrap();
        let fwd = dn_apply(&gdat.time_reflected(), &q, 0.5, &ms, &o).unwrap();
        let diff = fwd.output.time_reflected().sub(&adj.output).l2_norm();
        assert!(diff <= 1e-9 * adj.output.l2_norm(), "{diff}");
    }

    #[test]
    fn alessandrini_identity_holds() {
        let m = setup(32);
        let q2 = bump_q(&m, 0.5);
        let patch = Potential::from_fn(&m, |t, x| if t.abs() < 0.3 && x[0].abs() < 0.2 { 1.0 } else { 0.0 }).unwrap();
        let q1 = q2.axpy(0.7, &patch).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let o = SolverOptions::default();
        let f1 = random_on(&m, &m.control_window, &mut rng);
        let f2 = random_on(&m, &m.measure_window, &mut rng);
        let rep = alessandrini(&q1, &q2, &f1, &f2, 0.5, &m, &o).unwrap();
        assert!(rep.residual < 1e-7, "{rep:?}");
        let same = alessandrini(&q2, &q2, &f1, &f2, 0.5, &m, &o).unwrap();
        assert_eq!(same.rhs, 0.0);
        assert!(same.lhs.abs() < 1e-9 * f1.l2_norm() * f2.l2_norm());
    }
}
