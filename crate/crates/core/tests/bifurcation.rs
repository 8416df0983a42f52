//! Critical points, domains and curves of the model families, checked against
//! direct evaluation of the model written out here.

use resonorm::bifurcation::{
    classify_domain, connection_curve, critical_points, domain_intervals, ModelHamiltonian, PointKind,
};

/// `δI + νI² + I³ + A(I) cos nφ` with `A = I^{5/2}` (n = 5, no cubic),
/// `b₀I³` (n = 6) or `I^{n/2}` (n ≥ 7).
fn model(n: u32, delta: f64, nu: f64, b0: f64) -> impl Fn(f64, f64) -> f64 {
    move |i: f64, phi: f64| {
        let cubic = if n == 5 { 0.0 } else { i.powi(3) };
        let amp = if n == 6 { b0 * i.powi(3) } else { i.powf(n as f64 / 2.0) };
        delta * i + nu * i * i + cubic + amp * (n as f64 * phi).cos()
    }
}

const CASES: [(u32, f64, f64, f64); 8] = [
    (5, 0.001, -0.1, 1.0),
    (5, -0.0001, 0.1, 1.0),
    (6, 0.002, -0.1, 0.5),
    (6, 0.001, -0.1, 1.5),
    (7, -0.001, -0.1, 1.0),
    (7, 0.001, -0.1, 1.0),
    (8, 0.002, -0.1, 1.0),
    (9, 0.01, -0.2, 1.0),
];

#[test]
fn critical_points_are_stationary_with_the_right_morse_type() {
    for (n, delta, nu, b0) in CASES {
        let h = model(n, delta, nu, b0);
        let set = critical_points(&ModelHamiltonian::new(n, delta, nu, b0).unwrap());
        assert!(!set.points.is_empty(), "n={n} delta={delta} nu={nu}");
        for p in &set.points {
            let (i, phi) = (p.action, p.phi_class);
            let s = 1e-6 * i;
            let hi = (h(i + s, phi) - h(i - s, phi)) / (2.0 * s);
            let scale = (h(i + s, phi) - h(i, phi)).abs().max(delta.abs() * s) / s;
            assert!(hi.abs() <= 1e-6 * scale.max(1e-12) + 1e-9, "n={n}: dh/dI = {hi} at I = {i}");
            let hii = (h(i + s, phi) - 2.0 * h(i, phi) + h(i - s, phi)) / (s * s);
            let t = 1e-4;
            let hpp = (h(i, phi + t) - 2.0 * h(i, phi) + h(i, phi - t)) / (t * t);
            let kind = if hii * hpp < 0.0 { PointKind::Saddle } else { PointKind::Center };
            assert_eq!(kind, p.kind, "n={n} delta={delta} nu={nu} I={i}");
            assert!((p.energy - h(i, phi)).abs() <= 1e-12 * h(i, phi).abs().max(1e-9));
        }
    }
}

#[test]
fn domain_intervals_tile_the_delta_line() {
    for (n, _, nu, b0) in CASES {
        let intervals = domain_intervals(n, nu, b0).unwrap();
        assert_eq!(intervals.first().unwrap().1, f64::NEG_INFINITY);
        assert_eq!(intervals.last().unwrap().2, f64::INFINITY);
        for w in intervals.windows(2) {
            assert_eq!(w[0].2, w[1].1, "n={n} nu={nu}: {intervals:?}");
        }
        // Every finite interval's midpoint is classified as its own label.
        for &(label, lo, hi) in &intervals {
            if lo.is_finite() && hi.is_finite() {
                let m = ModelHamiltonian::new(n, 0.5 * (lo + hi), nu, b0).unwrap();
                assert_eq!(classify_domain(&m).unwrap(), label);
            }
        }
    }
}

#[test]
fn saddle_energies_coincide_on_the_connection_curve() {
    for (n, nu, b0) in [(7, -0.1, 1.0), (6, -0.1, 0.5), (9, -0.2, 1.0)] {
        let delta = connection_curve(n, nu, b0).unwrap();
        let set = critical_points(&ModelHamiltonian::new(n, delta, nu, b0).unwrap());
        let energies: Vec<f64> = set.saddles().map(|p| p.energy).collect();
        assert_eq!(energies.len(), 2, "n={n}");
        let scale = energies[0].abs().max(energies[1].abs());
        assert!((energies[0] - energies[1]).abs() <= 1e-9 * scale, "n={n}: {energies:?}");
    }
}

#[test]
fn the_origin_is_stable_only_for_small_resonant_coefficient() {
    let m = |b0| ModelHamiltonian::new(6, 0.01, 0.0, b0).unwrap();
    assert!(m(0.5).is_stable());
    assert!(!m(1.5).is_stable());
    assert!(ModelHamiltonian::new(5, 0.0, 0.0, 1.0).is_ok());
    assert!(matches!(ModelHamiltonian::new(6, 0.0, 0.0, 1.0), Err(resonorm::Error::Degeneracy(_))));
    assert!(ModelHamiltonian::new(7, f64::NAN, 0.0, 1.0).is_err());
}
