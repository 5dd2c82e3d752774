use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::geometry::ThetaGrid;

fn grid(m: usize) -> ThetaGrid {
    ThetaGrid::new(m).unwrap()
}

fn harmonic_curve(m: usize, n: usize, eps: f64) -> SupportCurve {
    SupportCurve::harmonic(grid(m), n, eps).unwrap()
}

#[test]
fn circle_analysis_has_no_modes() {
    let c = SupportCurve::circle(grid(64), 2.0).unwrap();
    let fs = FourierSupport::from_curve(&c, 16).unwrap();
    assert!((fs.length() - 4.0 * PI).abs() < 1e-12);
    for n in 1..=16 {
        let (a, b) = fs.mode(n);
        assert!(a.abs() < 1e-13 && b.abs() < 1e-13);
    }
}

#[test]
fn harmonic_analysis_recovers_the_coefficient() {
    let c = harmonic_curve(64, 2, 0.1);
    let fs = FourierSupport::from_curve(&c, 16).unwrap();
    assert!((fs.mode(2).0 - 0.1).abs() < 1e-13);
    let stray: f64 = (1..=16)
        .filter(|&n| n != 2)
        .map(|n| {
            let (a, b) = fs.mode(n);
            a.abs() + b.abs()
        })
        .sum();
    assert!(stray < 1e-12);
    assert!((fs.length() - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn synthesis_round_trips_band_limited_curves() {
    let c = SupportCurve::from_fn(grid(64), |t| {
        1.0 + 0.08 * (2.0 * t).cos() + 0.03 * (5.0 * t).sin() + 0.1 * t.cos()
    })
    .unwrap();
    let fs = FourierSupport::from_curve(&c, 16).unwrap();
    let back = fs.synthesize(c.grid()).unwrap();
    for (x, y) in c.values().iter().zip(back.values()) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn energy_above_the_cutoff_is_rejected() {
    let c = SupportCurve::from_fn(grid(64), |t| 1.0 + 0.01 * (6.0 * t).cos()).unwrap();
    match FourierSupport::from_curve(&c, 4) {
        Err(Error::AliasedInput { cutoff: 4, fraction }) => assert!(fraction > 1e-8),
        other => panic!("expected aliasing rejection, got {other:?}"),
    }
}

#[test]
fn non_convex_mode_sets_are_rejected() {
    assert!(matches!(
        FourierSupport::from_modes(1.0, &[(2, 0.5, 0.0)], 8),
        Err(Error::ConvexityViolation { .. })
    ));
}

#[test]
fn circles_are_fixed_points_of_the_evolution() {
    let c = SupportCurve::circle(grid(64), 1.5).unwrap();
    let fs = FourierSupport::from_curve(&c, 16).unwrap();
    for &tau in &[0.0, 0.5, 3.0, 50.0] {
        let evolved = fs.evolve(tau).unwrap();
        assert_eq!(evolved.area().to_bits(), fs.area().to_bits());
        assert!((evolved.length() - fs.length()).abs() < 1e-12);
        assert!(evolved.deficit() < 1e-12);
    }
}

#[test]
fn second_mode_decays_at_rate_three() {
    let fs = FourierSupport::from_modes(1.0, &[(2, 0.1, 0.0)], 16).unwrap();
    let evolved = fs.evolve(1.0).unwrap();
    assert!((evolved.mode(2).0 - 4.978_706_836_786_395e-3).abs() < 1e-15);
    assert!((evolved.deficit() - 6.0 * PI * PI * evolved.mode(2).0.powi(2)).abs() < 1e-15);
}

#[test]
fn translation_modes_never_decay() {
    let fs = FourierSupport::from_modes(2.0, &[(1, 0.3, 0.0)], 8).unwrap();
    for &tau in &[0.1, 1.0, 10.0] {
        let evolved = fs.evolve(tau).unwrap();
        assert_eq!(evolved.mode(1).0.to_bits(), 0.3f64.to_bits());
        assert_eq!(evolved.area().to_bits(), fs.area().to_bits());
        assert!((evolved.length() - fs.length()).abs() < 1e-12);
        assert!(evolved.deficit().abs() < 1e-12);
        // Still the same circle around (-0.3, 0).
        let curve = evolved.synthesize(grid(64)).unwrap();
        for p in curve.reconstruct_points() {
            assert!(((p.x + 0.3).hypot(p.y) - 2.0).abs() < 1e-12);
        }
    }
}

#[test]
fn deficit_closed_form_matches_quadrature() {
    let fs = FourierSupport::from_modes(1.0, &[(2, 0.1, 0.0)], 16).unwrap();
    assert!((fs.deficit_at(0.0) - 0.592_176_264_065_361_5).abs() < 1e-14);
    assert!((fs.deficit_at(0.5) - 2.948_272_014_484_840_5e-2).abs() < 1e-15);

    // Independent route: geometric quadrature of the synthesized curve.
    let evolved = fs.evolve(0.5).unwrap();
    let curve = evolved.synthesize(grid(256)).unwrap();
    assert!((curve.deficit_raw() - fs.deficit_at(0.5)).abs() < 1e-12);
}

#[test]
fn alpha_closed_form_matches_quadrature() {
    let circle = FourierSupport::from_modes(1.5, &[], 8).unwrap();
    assert!((circle.alpha() - 1.5).abs() < 1e-14);

    let fs = FourierSupport::from_modes(1.0, &[(2, 0.1, 0.0)], 16).unwrap();
    assert!((fs.alpha() - 1.045).abs() < 1e-14);
    let curve = fs.synthesize(grid(128)).unwrap();
    assert!((fs.alpha() - curve.alpha_area()).abs() < 1e-10 * fs.alpha());

    // Translation does not change alpha.
    let shifted = FourierSupport::from_modes(1.0, &[(1, 0.3, 0.0)], 8).unwrap();
    assert_eq!(shifted.alpha(), shifted.length() / (2.0 * PI));
}

#[test]
fn length_derivative_matches_mode_sum() {
    // dL/dτ = L - 2πα, which in mode form is -(2π²/L) Σ (n²-1)² (a²+b²).
    let fs = FourierSupport::from_modes(1.0, &[(2, 0.1, 0.0), (3, 0.02, 0.01)], 16).unwrap();
    let tau = 0.3;
    let h = 1e-4;
    let state = fs.evolve(tau).unwrap();
    let plus = fs.evolve(tau + h).unwrap().length();
    let minus = fs.evolve(tau - h).unwrap().length();
    let fd = (plus - minus) / (2.0 * h);
    let expected = -(2.0 * PI * PI / state.length())
        * (2..=3)
            .map(|n| {
                let (a, b) = state.mode(n);
                let w = ((n * n - 1) as f64).powi(2);
                w * (a * a + b * b)
            })
            .sum::<f64>();
    assert!(
        (fd - expected).abs() <= 1e-6 * expected.abs(),
        "fd = {fd}, expected = {expected}"
    );
    // Same thing stated through alpha.
    let via_alpha = state.length() - 2.0 * PI * state.alpha();
    assert!((via_alpha - expected).abs() < 1e-12);
}

#[test]
fn length_decays_to_the_area_circle() {
    let fs = FourierSupport::from_modes(1.0, &[(2, 0.1, 0.0), (4, 0.02, 0.0)], 16).unwrap();
    let far = fs.evolve(50.0).unwrap();
    assert!((far.length() - (4.0 * PI * fs.area()).sqrt()).abs() < 1e-12);
}

#[test]
fn single_mode_heat_decay_is_exact() {
    let fs = FourierSupport::from_modes(1.0, &[(2, 0.1, 0.0)], 16).unwrap();
    let g = grid(128);
    let (tau_1, tau_2) = (0.25, 0.5);
    let c1 = fs.evolve(tau_1).unwrap().synthesize(g).unwrap();
    let c2 = fs.evolve(tau_2).unwrap().synthesize(g).unwrap();
    let entries = heat_mode_check(
        g,
        (c1.radius_of_curvature(), c1.length(), tau_1),
        (c2.radius_of_curvature(), c2.length(), tau_2),
    )
    .unwrap();
    assert_eq!(entries.len(), 1);
    let e = &entries[0];
    assert_eq!(e.mode, 2);
    assert!((e.expected_ratio - (-1.0f64).exp()).abs() < 1e-16);
    assert!(e.rel_error < 1e-6, "rel error {}", e.rel_error);
}

#[test]
fn circle_heat_report_is_empty() {
    let g = grid(64);
    let c = SupportCurve::circle(g, 1.0).unwrap();
    let entries = heat_mode_check(
        g,
        (c.radius_of_curvature(), c.length(), 0.0),
        (c.radius_of_curvature(), c.length(), 0.25),
    )
    .unwrap();
    assert!(entries.is_empty());
}

#[test]
fn support_recovers_from_radius_profile() {
    let c = harmonic_curve(64, 3, 0.05);
    let back = support_from_radius(c.grid(), c.radius_of_curvature()).unwrap();
    for (x, y) in c.values().iter().zip(back.values()) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn trajectory_sampling_validates_times() {
    let fs = FourierSupport::from_modes(1.0, &[(2, 0.1, 0.0)], 8).unwrap();
    assert!(SpectralTrajectory::sample(&fs, &[0.5, 1.0]).is_err());
    assert!(SpectralTrajectory::sample(&fs, &[0.0, 1.0, 1.0]).is_err());
    let traj = SpectralTrajectory::sample(&fs, &[0.0, 0.5, 1.0]).unwrap();
    assert_eq!(traj.len(), 3);
    assert!(traj.samples()[2].deficit < traj.samples()[0].deficit);
}

#[test]
fn spectral_files_round_trip() {
    let dir = std::env::temp_dir().join("curveflow-spectral-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("state.csv");
    let fs = FourierSupport::from_modes(1.0, &[(2, 0.1, 0.0), (5, -0.002, 0.004)], 16).unwrap();
    write_spectral_file(&fs, &path).unwrap();
    let back = read_spectral_file(&path).unwrap();
    assert!((back.length() - fs.length()).abs() < 1e-12);
    assert!((back.area() - fs.area()).abs() < 1e-12 * fs.area());
    for n in 1..=16 {
        let (a, b) = fs.mode(n);
        let (a2, b2) = back.mode(n);
        assert!((a - a2).abs() < 1e-15 && (b - b2).abs() < 1e-15);
    }
}

/// Random valid spectral states: mean around 1, modes 2..=6 scaled to keep
/// strict convexity.
fn spectral_state() -> impl Strategy<Value = FourierSupport> {
    (
        0.8f64..1.5,
        prop::collection::vec(-1.0f64..1.0, 10),
        -0.3f64..0.3,
    )
        .prop_map(|(mean, raw, a1)| {
            let weight: f64 = raw
                .chunks(2)
                .enumerate()
                .map(|(i, ab)| (((i + 2) * (i + 2)) as f64 - 1.0) * (ab[0].abs() + ab[1].abs()))
                .sum();
            let scale = if weight > 0.8 * mean { 0.8 * mean / weight } else { 1.0 };
            let mut modes = vec![(1usize, a1, 0.0)];
            for (i, ab) in raw.chunks(2).enumerate() {
                modes.push((i + 2, scale * ab[0], scale * ab[1]));
            }
            FourierSupport::from_modes(mean, &modes, 8).expect("scaled to convexity")
        })
}

proptest! {
    #[test]
    fn evolution_is_a_semigroup(fs in spectral_state(), t1 in 0.0f64..2.0, t2 in 0.0f64..2.0) {
        let once = fs.evolve(t1 + t2).unwrap();
        let twice = fs.evolve(t1).unwrap().evolve(t2).unwrap();
        for n in 1..=8 {
            let (a, b) = once.mode(n);
            let (a2, b2) = twice.mode(n);
            prop_assert!((a - a2).abs() <= 1e-12 * a.abs().max(a2.abs()) + 1e-300);
            prop_assert!((b - b2).abs() <= 1e-12 * b.abs().max(b2.abs()) + 1e-300);
        }
        prop_assert!((once.length() - twice.length()).abs() <= 1e-12 * once.length());
        prop_assert_eq!(once.area().to_bits(), twice.area().to_bits());
    }

    #[test]
    fn deficit_obeys_the_exponential_bound(fs in spectral_state(), t1 in 0.0f64..2.0, dt in 0.01f64..2.0) {
        // deficit(τ₂) ≤ deficit(τ₁)·e^{-2(τ₂-τ₁)}, and length never grows.
        let d1 = fs.deficit_at(t1);
        let d2 = fs.deficit_at(t1 + dt);
        prop_assert!(d2 <= d1 * (-2.0 * dt).exp() + 1e-300);
        let l1 = fs.evolve(t1).unwrap().length();
        let l2 = fs.evolve(t1 + dt).unwrap().length();
        prop_assert!(l2 <= l1 * (1.0 + 1e-14));
    }

    #[test]
    fn convexity_is_preserved_along_the_evolution(fs in spectral_state(), tau in 0.0f64..5.0) {
        prop_assert!(fs.evolve(tau).unwrap().min_radius() > 0.0);
    }
}
