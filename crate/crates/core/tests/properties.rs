use fracalderon_core::dnmap::dn_apply;
use fracalderon_core::extension::{default_heights, extend, neumann_trace, profile};
use fracalderon_core::field::{dft_forward, dft_inverse, sobolev_norm};
use fracalderon_core::forward::{coercivity_check, smooth_bump, solve_dirichlet, transpose_residual};
use fracalderon_core::masks::NodeClass;
use fracalderon_core::operator::{kernel_value, mapping_bound_check, Variant};
use fracalderon_core::*;
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(g: &Grid64, seed: u64) -> Field64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Field::from_values(g, (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

fn random_on(g: &Grid64, nodes: &[usize], seed: u64) -> Field64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals: Vec<f64> = nodes.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    Field::scatter(g, nodes, &vals)
}

fn grid_strategy() -> impl Strategy<Value = Grid64> {
    (
        1usize..=2,
        0.5f64..4.0,
        0.5f64..4.0,
        prop::sample::select(vec![8usize, 12, 16]),
        prop::sample::select(vec![8usize, 10, 16]),
    )
        .prop_map(|(d, lt, lx, nt, nx)| GridConfig::new(d, lt, lx, nt, nx).unwrap())
}

fn desk(n: usize) -> Masks64 {
    make_masks(&GridConfig::new(1, 2.0, 2.0, n, n).unwrap(), &Geometry::desk_default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trip_and_plancherel(g in grid_strategy(), seed in any::<u64>()) {
        let u = random_field(&g, seed);
        let spec = dft_forward(&u);
        let back = dft_inverse(&spec).unwrap();
        let err = back.sub(&u).max_abs();
        prop_assert!(err < 1e-12, "round trip {err}");
        let lhs = u.dot(&u);
        let rhs: f64 = spec.coeffs.iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs);
        prop_assert!(spec.hermitian_residue() < 1e-12);
    }

    #[test]
    fn sobolev_norm_is_a_norm(g in grid_strategy(), seed in any::<u64>(), a in -1.0f64..1.0, c in -5.0f64..5.0) {
        let u = random_field(&g, seed);
        let v = random_field(&g, seed ^ 0x9e37);
        let nu = sobolev_norm(&u, a);
        prop_assert!(nu > 0.0);
        prop_assert!((sobolev_norm(&u.scaled(c), a) - c.abs() * nu).abs() <= 1e-10 * (1.0 + c.abs() * nu));
        prop_assert!(sobolev_norm(&u.add(&v), a) <= nu + sobolev_norm(&v, a) + 1e-10);
    }

    #[test]
    fn masks_partition_every_node(lo in -0.9f64..-0.2, width in 0.2f64..0.9, t_half in 0.5f64..1.5, n in prop::sample::select(vec![16usize, 24, 32])) {
        let g = GridConfig::new(1, 2.0, 2.0, n, n).unwrap();
        let geo = Geometry {
            omega: Region::interval(lo, lo + width),
            control: Region::interval(1.0, 1.5),
            measure: Region::interval(-1.9, -1.0),
            t_half,
        };
        let m = make_masks(&g, &geo).unwrap();
        let mut seen = vec![0u8; g.len()];
        for set in [&m.omega_t, &m.exterior, &m.past_buffer, &m.future_buffer] {
            for &k in set {
                seen[k] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        for (k, class) in m.class.iter().enumerate() {
            let t = g.time_at(g.time_index(k));
            let x = g.space_at(g.space_index(k));
            let expect = if t <= -t_half {
                NodeClass::Past
            } else if t >= t_half {
                NodeClass::Future
            } else if x[0] > lo && x[0] < lo + width {
                NodeClass::Interior
            } else {
                NodeClass::Exterior
            };
            prop_assert_eq!(*class, expect);
        }
        for &k in m.control_window.iter().chain(&m.measure_window) {
            prop_assert_eq!(m.class[k], NodeClass::Exterior);
        }
    }

    #[test]
    fn symbol_maps_real_to_real_and_adds_exponents(g in grid_strategy(), seed in any::<u64>(), s1 in 0.05f64..0.45, s2 in 0.05f64..0.5) {
        let u = random_field(&g, seed);
        let once = apply_symbol(&u, &SymbolSpec::forward(s1 + s2)).unwrap();
        let twice = apply_symbol(&apply_symbol(&u, &SymbolSpec::forward(s1)).unwrap(), &SymbolSpec::forward(s2)).unwrap();
        prop_assert!(once.sub(&twice).max_abs() <= 1e-11 * (1.0 + once.max_abs()));
        // imaginary residue before the real part is taken
        let fourier = Fourier::new(&g);
        let sym = fracalderon_core::operator::symbol(&g, &SymbolSpec::forward(s1)).unwrap();
        let mut spec = fourier.forward(&u);
        for (c, m) in spec.coeffs.iter_mut().zip(&sym) {
            *c *= *m;
        }
        prop_assert!(spec.hermitian_residue() < 1e-10);
    }

    #[test]
    fn adjoint_is_conjugated_time_reversal(g in grid_strategy(), seed in any::<u64>(), s in 0.05f64..0.95) {
        let u = random_field(&g, seed);
        let adj = apply_symbol(&u, &SymbolSpec::adjoint(s)).unwrap();
        let via = apply_symbol(&u.time_reflected(), &SymbolSpec::forward(s)).unwrap().time_reflected();
        prop_assert!(adj.sub(&via).max_abs() <= 1e-11 * (1.0 + adj.max_abs()));
    }

    #[test]
    fn duality_identities_and_mapping_bound(g in grid_strategy(), seed in any::<u64>(), s in 0.05f64..0.95) {
        let u = random_field(&g, seed);
        let w = random_field(&g, seed.wrapping_add(1));
        let r = fracalderon_core::operator::duality_check(&u, &w, s).unwrap();
        prop_assert!(r.max() < 1e-11, "{r:?}");
        let ratio = mapping_bound_check(&u, s).unwrap();
        prop_assert!(ratio <= 1.0 + 1e-10);
    }

    #[test]
    fn kernel_is_positive(s in 0.05f64..0.95, tau in 1e-6f64..50.0, z0 in -20.0f64..20.0, z1 in -20.0f64..20.0) {
        let k1 = kernel_value(s, 1, tau, &[z0]).unwrap();
        let k2 = kernel_value(s, 2, tau, &[z0, z1]).unwrap();
        // underflow to zero is allowed deep in the Gaussian tail
        prop_assert!(k1 > 0.0 || z0 * z0 / (4.0 * tau) > 700.0);
        prop_assert!(k2 > 0.0 || (z0 * z0 + z1 * z1) / (4.0 * tau) > 700.0);
    }

    #[test]
    fn mode_profiles_decay_in_modulus(s in 0.1f64..0.9, y in 0.01f64..2.0, r1 in 0.0f64..50.0, dr in 0.0f64..50.0, arg in -1.5f64..1.5) {
        let lam = |r: f64| Complex::from_polar(r, arg);
        let a = profile(s, lam(r1), y).unwrap().norm();
        let b = profile(s, lam(r1 + dr), y).unwrap().norm();
        prop_assert!(b <= a * (1.0 + 1e-12) + 1e-300);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coercivity_on_interior_fields(seed in any::<u64>(), s in 0.05f64..0.95) {
        let m = desk(32);
        let v = random_on(&m.grid, &m.omega_t, seed);
        let (lhs, rhs) = coercivity_check(&v, s).unwrap();
        prop_assert!(lhs >= rhs - 1e-10 * rhs.abs().max(1.0), "{lhs} {rhs}");
    }

    #[test]
    fn restricted_operator_transpose_identity(seed in any::<u64>(), s in 0.1f64..0.9, amp in -1.0f64..2.0) {
        let m = desk(16);
        let q = Potential::from_fn(&m, |t, x| amp * smooth_bump(t, x, 0.0, [0.0; 2], 0.9, 0.45, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for variant in [Variant::Forward, Variant::Adjoint] {
            let prob = ForwardProblem::new(s, &m, &q, variant).unwrap();
            let v: Vec<f64> = (0..prob.unknowns()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let w: Vec<f64> = (0..prob.unknowns()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            prop_assert!(transpose_residual(&prob, &v, &w) < 1e-11);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn solves_leave_exterior_untouched_and_bound_the_residual(seed in any::<u64>(), amp in 0.0f64..1.5) {
        let m = desk(32);
        let q = Potential::from_fn(&m, |t, x| amp * smooth_bump(t, x, 0.0, [0.0; 2], 1.0, 0.5, 1)).unwrap();
        let f = random_on(&m.grid, &m.control_window, seed);
        let src = random_on(&m.grid, &m.omega_t, seed ^ 7);
        let opts = SolverOptions::default();
        let sol = solve_dirichlet(&f, &src, &q, 0.5, &m, &opts).unwrap();
        let mut inside = vec![false; m.grid.len()];
        for &k in &m.omega_t {
            inside[k] = true;
        }
        for (k, (&a, &b)) in sol.u.values.iter().zip(&f.values).enumerate() {
            if !inside[k] {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
        let scale = FracOperator::new(&m.grid, 0.5).unwrap().symbol_scale();
        let bound = 10.0 * sol.krylov_relres.max(f64::EPSILON) * (src.l2_norm() + scale * f.l2_norm()) / m.grid.cell_volume().sqrt();
        prop_assert!(sol.interior_residual <= bound.max(1e-12), "{} {}", sol.interior_residual, bound);
    }

    #[test]
    fn dn_map_is_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let m = desk(32);
        let q = Potential::constant(&m, 0.4);
        let f1 = random_on(&m.grid, &m.control_window, seed);
        let f2 = random_on(&m.grid, &m.control_window, seed ^ 11);
        let opts = SolverOptions { tol: 1e-12, ..Default::default() };
        let d1 = dn_apply(&f1, &q, 0.5, &m, &opts).unwrap().output;
        let d2 = dn_apply(&f2, &q, 0.5, &m, &opts).unwrap().output;
        let combo = dn_apply(&f1.scaled(a).add(&f2.scaled(b)), &q, 0.5, &m, &opts).unwrap().output;
        let lin = d1.scaled(a).add(&d2.scaled(b));
        prop_assert!(combo.sub(&lin).l2_norm() <= 1e-10 * lin.l2_norm().max(1e-300));
    }

    #[test]
    fn tikhonov_data_residuals_do_not_increase(seed in any::<u64>()) {
        let m = desk(32);
        let truth = random_on(&m.grid, &m.omega_t, seed);
        let tik = inverse::Tikhonov::new(0.5, &m, Penalty::L2).unwrap();
        let h = Field::scatter(&m.grid, &m.measure_window, &tik.forward_map(&truth.gather(&m.omega_t)));
        let path = tik.path(&h, &inverse::default_alphas(), &SolverOptions::default(), Some(&truth)).unwrap();
        for w in path.data_residuals.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-10);
        }
    }
}

#[test]
fn trace_constant_does_not_depend_on_the_field() {
    let g = GridConfig::new(1, 2.0, 2.0, 16, 16).unwrap();
    let heights = default_heights();
    for s in [0.25, 0.5, 0.75] {
        let fits: Vec<f64> = [3u64, 4]
            .iter()
            .map(|&seed| {
                // band-limit by keeping only the lowest modes
                let u = random_field(&g, seed);
                let mut spec = dft_forward(&u);
                for k in 0..g.len() {
                    if g.lambda_modulus(k) > 8.0 {
                        spec.coeffs[k] = Complex::new(0.0, 0.0);
                    }
                }
                let u = dft_inverse(&spec).unwrap();
                neumann_trace(&extend(&u, s, &heights).unwrap())
                    .unwrap()
                    .fitted_constant
            })
            .collect();
        assert!((fits[0] - fits[1]).abs() <= 1e-4 * fits[0].abs(), "{s}: {fits:?}");
    }
}

#[test]
fn boundary_deviation_grows_with_height() {
    let g = GridConfig::new(1, 2.0, 2.0, 16, 16).unwrap();
    let u = Field::from_fn(&g, |t: f64, x| (-(t * t + x[0] * x[0])).exp());
    let ext = extend(&u, 0.5, &default_heights()).unwrap();
    let dev = ext.boundary_deviation();
    assert!(dev.windows(2).all(|w| w[1] > w[0]), "{dev:?}");
}

#[test]
fn runge_error_is_nonincreasing_over_nested_bases() {
    let m = desk(64);
    let q = Potential::constant(&m, 0.2);
    let g = inverse::interior_bump(&m, 0.0, [0.0; 2], 0.6, 0.3);
    let opts = SolverOptions::default();
    let reg = 1e-14;
    let errs: Vec<f64> = [4, 16, 64]
        .iter()
        .map(|&k| {
            runge_control(&g, k, reg, &q, 0.5, &m, &opts, RungeDirection::Forward)
                .unwrap()
                .approx_error
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-7), "{errs:?}");
}
