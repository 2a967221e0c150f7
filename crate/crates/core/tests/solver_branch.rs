use std::f64::consts::TAU;

use proptest::prelude::*;

use freesurf_core::solver::{self, Branch, ContinuationOptions};
use freesurf_core::strip::{symmetric_extend, Grid, Parity};
use freesurf_core::{PeriodicFunction, Profile, Real, StripDomain};

fn unit_strip() -> StripDomain {
    StripDomain::new(1.0, TAU).unwrap()
}

fn neutral_speed() -> f64 {
    (1.0 / 1f64.tanh()).cbrt()
}

fn branch(n: usize, amplitude: f64, steps: usize) -> Vec<freesurf_core::Solution> {
    let p = Profile::water_wave(1.0, 3.0241).unwrap();
    let o = ContinuationOptions {
        steps,
        ..Default::default()
    };
    solver::continue_branch(&p, &unit_strip(), n, amplitude, &o).unwrap()
}

#[test]
fn jacobian_singular_values_are_the_margins() {
    let p = Profile::water_wave(1.0, 4.0).unwrap();
    let d = unit_strip();
    let a = solver::flat_state(&p, &d, Branch::Upper).unwrap();
    let v = PeriodicFunction::constant(TAU, 64, a).unwrap();
    let modes = 12;
    let jac = solver::residual_jacobian(&v, &p, &d, modes, 1e-6).unwrap();
    let sv = f64::singular_values(&jac, modes, modes);
    let mut margins: Vec<f64> = solver::bifurcation_wavenumbers(&p, &d, a, modes)
        .unwrap()
        .iter()
        .map(|m| m.margin.abs())
        .collect();
    margins.sort_by(|x, y| y.total_cmp(x));
    for (s, m) in sv.iter().zip(&margins) {
        assert!(((s - m) / m).abs() < 1e-6, "{s} vs {m}");
    }
}

#[test]
fn jacobian_is_singular_on_the_neutral_mode() {
    let a = neutral_speed();
    let p = Profile::water_wave(1.0, 1.0 / (a * a) + 2.0 * a).unwrap();
    let d = unit_strip();
    let v = PeriodicFunction::constant(TAU, 64, a).unwrap();
    let jac = solver::residual_jacobian(&v, &p, &d, 31, 1e-6).unwrap();
    let sv = f64::singular_values(&jac, 31, 31);
    assert!(sv[30] / sv[0] < 1e-6, "{:e}", sv[30] / sv[0]);
    // The null direction is cos t: column 0 is (numerically) zero.
    let col: f64 = (0..31).map(|r| jac[r * 31].abs()).fold(0.0, f64::max);
    assert!(col < 1e-8);
}

#[test]
fn continuation_sweep_to_five_hundredths() {
    let sols = branch(256, 0.05, 10);
    assert_eq!(sols.len(), 10);
    let mut prev_min_cos = 1.0;
    for (i, s) in sols.iter().enumerate() {
        assert!(s.residual_norm() < 1e-10);
        assert!(s.newton_iterations() <= 8, "step {i}: {} iterations", s.newton_iterations());
        assert!((s.amplitude() - 0.005 * (i + 1) as f64).abs() < 1e-12);
        let min_cos = s.theta().samples().iter().map(|t| t.cos()).fold(1.0, f64::min);
        assert!(min_cos > 0.0 && min_cos < prev_min_cos);
        prev_min_cos = min_cos;
        assert!(s.v().odd_part_max() < 1e-10);
        assert_eq!(s.branch(), Branch::Upper);
    }
}

#[test]
fn converged_spectrum_decays() {
    let s = branch(256, 0.05, 5).pop().unwrap();
    let spec = s.v().spectrum();
    let pts: Vec<(f64, f64)> = (1..60)
        .map(|k| (k as f64, spec[k].norm()))
        .filter(|&(_, m)| m > 1e-15)
        .map(|(k, m)| (k, m.ln()))
        .collect();
    assert!(pts.len() > 5);
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!(slope < -0.5, "slope {slope}");
    assert!(s.v().tail_energy_fraction() < 1e-20);
}

#[test]
fn residual_norm_is_translation_invariant() {
    let s = branch(128, 0.03, 3).pop().unwrap();
    let n = s.len();
    let base = solver::residual(s.v(), s.profile(), s.domain()).unwrap().r.max_abs();
    for shift in [1, 7, 40] {
        let rolled: Vec<f64> = (0..n).map(|j| s.v().samples()[(j + n - shift) % n]).collect();
        let v = PeriodicFunction::from_samples(TAU, rolled).unwrap();
        let r = solver::residual(&v, s.profile(), s.domain()).unwrap().r.max_abs();
        assert!((r - base).abs() < 1e-13, "shift {shift}: {r:e} vs {base:e}");
    }
}

#[test]
fn curve_closure_and_crest_spacing() {
    let s = branch(128, 0.04, 4).pop().unwrap();
    let p = s.profile();
    let curve = solver::reconstruct_curve(&s).unwrap();
    let lambda_shift = s.period_shift();
    let integral: f64 = s
        .theta()
        .samples()
        .iter()
        .zip(s.v().samples())
        .map(|(th, &v)| th.cos() / p.speed(v).unwrap())
        .sum::<f64>()
        * TAU
        / s.len() as f64;
    assert!((lambda_shift - integral).abs() < 1e-12);
    let u = |t: f64| s.mean_slope() * t + s.u_periodic().eval(t);
    for &t in &[0.0, 0.3, 2.0, 5.5] {
        assert!((u(t + TAU) - u(t) - lambda_shift).abs() < 1e-10);
    }
    // θ vanishes at crest and trough, so u' = 1/h(v) there.
    let n = s.len();
    let pts = curve.points();
    let crest = pts[1].0 - (pts[n - 1].0 - lambda_shift);
    let trough = pts[n / 2 + 1].0 - pts[n / 2 - 1].0;
    let (v_crest, v_trough) = (s.v().samples()[0], s.v().samples()[n / 2]);
    let expected = p.speed(v_trough).unwrap() / p.speed(v_crest).unwrap();
    assert!(expected > 1.0);
    assert!((crest / trough - expected).abs() < 1e-3 * expected);
}

#[test]
fn interior_field_matches_poisson_quadrature() {
    let s = branch(128, 0.03, 3).pop().unwrap();
    let d = *s.domain();
    let grid = Grid::full_strip(&d, 12, 9).unwrap();
    let field = solver::interior_field(&s, &grid).unwrap();
    let pts = grid.points();
    let v_quad = symmetric_extend(s.v(), Parity::Odd, &d, &pts).unwrap();
    let log_wp = PeriodicFunction::from_samples(TAU, s.abs_wp().samples().iter().map(|w| w.ln()).collect()).unwrap();
    let l_quad = symmetric_extend(&log_wp, Parity::Even, &d, &pts).unwrap();
    for k in 0..pts.len() {
        assert!((field.v[k] - v_quad[k]).abs() < 1e-8);
        assert!((field.log_abs_wp[k] - l_quad[k]).abs() < 1e-8);
    }
}

#[test]
fn interior_laplacian_is_second_order() {
    let s = branch(128, 0.04, 4).pop().unwrap();
    let (x0, y0) = (0.4, 0.3);
    let mut orders = Vec::new();
    let mut last: Option<[f64; 4]> = None;
    for level in 0..3 {
        let h = 0.1 / f64::from(1 << level);
        let grid = Grid::new(vec![x0 - h, x0, x0 + h], vec![y0 - h, y0, y0 + h]).unwrap();
        let f = solver::interior_field(&s, &grid).unwrap();
        let now = [
            grid.laplacian_max(&f.u),
            grid.laplacian_max(&f.v),
            grid.laplacian_max(&f.log_abs_wp),
            grid.laplacian_max(&f.theta),
        ];
        if let Some(prev) = last {
            for i in 0..4 {
                orders.push((prev[i] / now[i]).log2());
            }
        }
        last = Some(now);
    }
    for o in orders {
        assert!((1.8..=2.2).contains(&o), "order {o}");
    }
}

#[test]
fn tabulated_law_reproduces_water_wave_branch() {
    let n = 4001;
    let ys: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 / (n - 1) as f64).collect();
    let hs: Vec<f64> = ys.iter().map(|y| (4.0 - 2.0 * y).max(0.0).sqrt()).collect();
    let table = Profile::tabulated(ys, hs).unwrap();
    let d = unit_strip();
    let o = ContinuationOptions {
        steps: 2,
        ..Default::default()
    };
    let t = solver::solve_periodic(&table, &d, 64, 0.02, &o).unwrap();
    let w = solver::solve_periodic(&Profile::water_wave(1.0, 3.0241).unwrap(), &d, 64, 0.02, &o).unwrap();
    for (a, b) in t.v().samples().iter().zip(w.v().samples()) {
        assert!((a - b).abs() < 1e-6);
    }
    // A datum shift s turns sqrt(4 - 2Y) into sqrt((4 - 2s) - 2Y).
    let shift = t.profile().released_parameter();
    let lambda = w.profile().released_parameter();
    assert!((4.0 - 2.0 * shift - lambda).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn neutral_condition_is_the_dispersion_relation(
        g in 0.5f64..20.0,
        c in 0.2f64..3.0,
        period in 1.0f64..20.0,
        mode in 1usize..4,
    ) {
        let d = StripDomain::new(c, period).unwrap();
        let kappa = d.wavenumber(mode as i64);
        let a = (kappa / (g * (kappa * c).tanh())).cbrt();
        let lambda = 1.0 / (a * a) + 2.0 * g * a * c;
        let p = Profile::water_wave(g, lambda).unwrap();
        let margins = solver::bifurcation_wavenumbers(&p, &d, a, mode).unwrap();
        prop_assert!(margins[mode - 1].margin.abs() < 1e-9 * kappa.max(1.0));
        let phys = solver::physical_mode(&p, &d, a, kappa).unwrap();
        let (lhs, rhs) = solver::dispersion_relation(g, &phys);
        prop_assert!((lhs - rhs).abs() < 1e-10 * lhs.max(1.0));
    }

    #[test]
    fn flat_state_identity(g in 0.2f64..10.0, excess in 0.01f64..3.0, c in 0.3f64..2.0) {
        // Critical head for h = sqrt(λ - 2gY) is λ_c = 3 (g C)^{2/3}.
        let lambda = 3.0 * (g * c).powf(2.0 / 3.0) * (1.0 + excess);
        let p = Profile::water_wave(g, lambda).unwrap();
        let d = StripDomain::new(c, 1.0).unwrap();
        for branch in [Branch::Lower, Branch::Upper] {
            let a = solver::flat_state(&p, &d, branch).unwrap();
            prop_assert!((a * p.speed(a * c).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
