//! Randomized and table-driven verification suites shared by the CLI and the
//! test-suite. Every suite is deterministic for a given seed.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bifurcation::rescale::{boundary_connection, cubic_connection, fit_exponent, pendulum_gap, rescale, RescaledModel, Scaling};
use crate::bifurcation::{
    classify_domain, connection_curve, critical_points, domain_intervals, double_point_asymptote, double_point_curve,
    linspace, CriticalSet, DomainLabel, ModelHamiltonian, PointKind, GRID_POINTS, MIN_ACTION,
};
use crate::error::Result;
use crate::levelset::{
    critical_energies, critical_level_sets_on, point_segment_distance, ray_defect, rays_reached, symmetry_defect, vertex_residual, ContourSet,
    GridSpec, PlanarHamiltonian, Samples, ScaledPlanar, DEFAULT_CELLS,
};
use crate::homology::{
    a_allowed, a_monomial, b_allowed, b_monomial, band_monomial, GradedSubspace, HomologicalOperator, Variant,
};
use crate::lie::lie_transform;
use crate::normalform::{
    conjugate_map, flow_map, interpolate, simplify_autonomous, simplify_family, validate_shape, Kind, SimplifiedNormalForm,
};
use crate::rational::{rat, rat_int, ComplexRational, Rational};
use crate::series::{Grade, GradingScheme, MonomialKey, ResonantSeries};

/// Outcome of one verification criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small random rational `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 5`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

fn small_complex<R: Rng>(rng: &mut R) -> ComplexRational {
    ComplexRational::new(small_rational(rng), small_rational(rng))
}

/// Random simplified normal form of the given kind, complete up to `truncation`.
pub fn random_normal_form<R: Rng>(
    n: u32,
    kind: Kind,
    variant: Variant,
    truncation: i64,
    rng: &mut R,
) -> SimplifiedNormalForm {
    let scheme = match kind {
        Kind::Autonomous => GradingScheme::autonomous_for(n),
        Kind::Family => GradingScheme::family_for(n),
    };
    let t = Grade::from_integer(truncation);
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    let pmax = if kind == Kind::Family { truncation as u32 } else { 0 };
    for m in 0..=pmax {
        for j in 0..=pmax {
            for k in 0..=(2 * truncation as u32 + 2) {
                let ak = a_monomial(n, k);
                let ak = MonomialKey::with_params(ak.k, ak.l, m, j);
                if scheme.grade(ak, n) <= t && a_allowed(n, k, variant) {
                    let v = if (k, m, j) == (0, 0, 0) && n >= 6 { nonzero_rational(rng) } else { small_rational(rng) };
                    if !v.is_zero() {
                        a.insert((k, m, j), v);
                    }
                }
                let bk = b_monomial(n, k);
                let bk = MonomialKey::with_params(bk.k, bk.l, m, j);
                if scheme.grade(bk, n) <= t && b_allowed(n, k, variant) {
                    let v = if (k, m, j) == (0, 0, 0) { rat(rng.gen_range(1..=9), rng.gen_range(1..=4)) } else { small_rational(rng) };
                    if !v.is_zero() {
                        b.insert((k, m, j), v);
                    }
                }
            }
        }
    }
    SimplifiedNormalForm { n, kind, variant, gauge: 0.0, scheme, truncation, a, b }
}

/// Random real-valued resonant polynomial whose terms have grades in `lo..=hi`.
/// With `density = 1` every coordinate gets a nonzero coefficient.
pub fn random_real_polynomial<R: Rng>(
    n: u32,
    scheme: GradingScheme,
    lo: i64,
    hi: i64,
    truncation: i64,
    density: f64,
    rng: &mut R,
) -> ResonantSeries {
    let mut chi = ResonantSeries::new(n, scheme, truncation).expect("valid order");
    for p in lo..=hi {
        let space = GradedSubspace::new(n, scheme.base(), p);
        for c in &space.coords {
            if rng.gen_bool(density) {
                let (key, unit) = c.vector();
                let v = if density >= 1.0 { nonzero_rational(rng) } else { small_rational(rng) };
                chi.add_real_pair(key, &unit.scale(&v));
            }
        }
    }
    chi
}

/// Random resonant real Hamiltonian in `PolyOrder` with degrees `3..=max_degree`.
pub fn random_hamiltonian<R: Rng>(n: u32, max_degree: i64, rng: &mut R) -> ResonantSeries {
    let mut h = ResonantSeries::new(n, GradingScheme::PolyOrder, max_degree).expect("valid order");
    for d in 3..=max_degree {
        for j in 0..=(d as u32) {
            if let Some(key) = band_monomial(n, GradingScheme::PolyOrder, d, j) {
                if rng.gen_bool(0.7) {
                    let c = if j == 0 { ComplexRational::real(small_rational(rng)) } else { small_complex(rng) };
                    h.add_real_pair(key, &c);
                }
            }
        }
    }
    h
}

/// Scramble-and-recover for one normal form. Returns the failure reason, if any.
pub fn scramble_and_recover<R: Rng>(
    nf: &SimplifiedNormalForm,
    weight: MonomialKey,
    rng: &mut R,
) -> std::result::Result<(), String> {
    let h = nf.to_series().map_err(|e| e.to_string())?;
    let scheme = nf.scheme;
    let drop = scheme.bracket_drop();
    // Lowest base grade such that the weighted generator still raises grades.
    let min_base = if scheme.base() == GradingScheme::PolyOrder { 2 } else { 1 };
    let mut lo = (drop + 1 - scheme.grade(weight, nf.n).to_integer()).max(min_base);
    while GradedSubspace::new(nf.n, scheme.base(), lo).coords.is_empty() {
        lo += 1;
    }
    // The lowest grade is dense so that the scramble is never vacuous.
    let chi = random_real_polynomial(nf.n, scheme, lo, lo, nf.truncation, 1.0, rng)
        .add(&random_real_polynomial(nf.n, scheme, lo + 1, lo + 3, nf.truncation, 0.6, rng))
        .map_err(|e| e.to_string())?;
    let scrambled = lie_transform(&h, &chi, weight).map_err(|e| e.to_string())?;
    if scrambled == h {
        return Err("scramble left the series unchanged".into());
    }
    let back = match nf.kind {
        Kind::Autonomous => simplify_autonomous(&scrambled, nf.truncation, nf.variant),
        Kind::Family => simplify_family(&scrambled, nf.truncation, nf.variant),
    }
    .map_err(|e| e.to_string())?;
    if !validate_shape(&back).passed() {
        return Err(format!("shape check failed: {:?}", validate_shape(&back).failures()));
    }
    if back.a != nf.a || back.b != nf.b {
        return Err(format!("coefficients differ for n = {}", nf.n));
    }
    Ok(())
}

/// Expected `(dim ker Λ, codim Im Λ)` at source grade `p`.
pub fn expected_kernel_codim(n: u32, p: i64) -> (usize, usize) {
    match n {
        4 => {
            if p % 2 == 1 {
                (0, 2)
            } else {
                (1, 1)
            }
        }
        5 => {
            if p % 5 == 0 {
                (1, 0)
            } else {
                (0, 1)
            }
        }
        _ => {
            if p % 3 == 0 {
                (1, 1)
            } else {
                (0, 2)
            }
        }
    }
}

/// Expected `(dim source, dim target)` at source grade `p` for `n = 5`.
pub fn expected_n5_dims(p: i64) -> (usize, usize) {
    let k = (p / 5) as usize;
    match p % 5 {
        0 => (k + 1, k),
        1 => (k, k + 1),
        2 => (k + 1, k + 2),
        3 => (k, k + 1),
        _ => (k + 1, k + 2),
    }
}

/// Dimension tables of `Λ` for the given orders and source grades.
pub fn suite_tables(orders: &[u32], pmax: i64) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for &n in orders {
        let op = HomologicalOperator::natural(n, rat_int(1), rat_int(1), Variant::Standard)?;
        let op = if n == 4 || n == 5 { HomologicalOperator::natural(n, Rational::zero(), rat_int(1), Variant::Standard)? } else { op };
        let mut bad = Vec::new();
        let first = if n == 5 { 3 } else { 2 };
        for p in first..=pmax {
            let (src, dst, rank) = op.dimensions(p)?;
            let kernel = src - rank;
            let codim = dst - rank;
            let mut ok = (kernel, codim) == expected_kernel_codim(n, p);
            if n == 5 {
                ok &= (src, dst) == expected_n5_dims(p);
            }
            if n >= 6 {
                ok &= src == 1 + 2 * (p as usize / 3) && dst == 1 + 2 * ((p + 2) as usize / 3);
            }
            ok &= op.complement_basis(p).len() == codim;
            if !ok {
                bad.push(format!("p={p}: ker {kernel} codim {codim} dims {src}->{dst}"));
            }
        }
        out.push(Outcome::new(
            format!("tables n={n}"),
            bad.is_empty(),
            if bad.is_empty() { format!("p <= {pmax} all match") } else { bad.join("; ") },
        ));
    }
    Ok(out)
}

/// Explicit monomial formulas against the bracket computation.
pub fn suite_explicit(orders: &[u32], pmax: i64) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for &n in orders {
        let op = HomologicalOperator::natural(n, rat(3, 2), rat(5, 3), Variant::Standard)?;
        let mut checked = 0;
        let mut bad = Vec::new();
        for p in 1..=pmax {
            let space = GradedSubspace::new(n, op.scheme, p);
            for c in &space.coords {
                let (key, unit) = c.vector();
                let mut e = ResonantSeries::new(n, op.scheme, p)?;
                e.add_real_pair(key, &unit);
                checked += 1;
                if op.apply(&e)? != op.apply_explicit(&e)? {
                    bad.push(format!("p={p} {}", c.label()));
                }
            }
        }
        out.push(Outcome::new(
            format!("explicit Lambda n={n}"),
            bad.is_empty(),
            format!("{checked} basis elements, {} mismatches {}", bad.len(), bad.join(" ")),
        ));
    }
    Ok(out)
}

/// Scramble-and-recover over the given orders and seeds.
pub fn suite_uniqueness(orders: &[u32], seeds: u64, base_seed: u64, truncation: i64) -> Vec<Outcome> {
    let mut out = Vec::new();
    for &n in orders {
        let mut failures = Vec::new();
        for s in 0..seeds {
            let mut r = rng(base_seed.wrapping_mul(1000).wrapping_add(s * 31 + n as u64));
            let nf = random_normal_form(n, Kind::Autonomous, Variant::Standard, truncation, &mut r);
            if let Err(e) = scramble_and_recover(&nf, MonomialKey::default(), &mut r) {
                failures.push(format!("seed {s}: {e}"));
            }
        }
        out.push(Outcome::new(
            format!("uniqueness n={n}"),
            failures.is_empty(),
            if failures.is_empty() { format!("{seeds} seeds recovered exactly") } else { failures.join("; ") },
        ));
    }
    out
}

/// Interpolation round trip `H → exp(L_H) z → H`.
pub fn suite_interpolation(orders: &[u32], count: u64, base_seed: u64, truncation: i64) -> Vec<Outcome> {
    let mut out = Vec::new();
    for &n in orders {
        let mut failures = Vec::new();
        for s in 0..count {
            let mut r = rng(base_seed.wrapping_mul(7919).wrapping_add(s * 17 + n as u64));
            let h = random_hamiltonian(n, truncation, &mut r);
            let result = flow_map(&h, truncation - 1).and_then(|g| interpolate(&g, truncation - 1));
            match result {
                Ok(back) if back == h => {}
                Ok(_) => failures.push(format!("seed {s}: mismatch")),
                Err(e) => failures.push(format!("seed {s}: {e}")),
            }
        }
        out.push(Outcome::new(
            format!("interpolation n={n}"),
            failures.is_empty(),
            if failures.is_empty() { format!("{count} Hamiltonians recovered to degree {truncation}") } else { failures.join("; ") },
        ));
    }
    out
}

/// Family scramble-and-recover with a generator weighted by `δ^m ν^j`.
pub fn suite_family_uniqueness(
    orders: &[u32],
    seeds: u64,
    base_seed: u64,
    truncation: i64,
    weight: (u32, u32),
) -> Vec<Outcome> {
    let mut out = Vec::new();
    for &n in orders {
        let mut failures = Vec::new();
        for s in 0..seeds {
            let mut r = rng(base_seed.wrapping_mul(4099).wrapping_add(s * 13 + n as u64));
            let nf = random_normal_form(n, Kind::Family, Variant::Standard, truncation, &mut r);
            let w = MonomialKey::with_params(0, 0, weight.0, weight.1);
            if let Err(e) = scramble_and_recover(&nf, w, &mut r) {
                failures.push(format!("seed {s}: {e}"));
            }
        }
        out.push(Outcome::new(
            format!("family uniqueness n={n} weight d^{}nu^{}", weight.0, weight.1),
            failures.is_empty(),
            if failures.is_empty() { format!("{seeds} seeds recovered exactly") } else { failures.join("; ") },
        ));
    }
    out
}

/// Rotates `z ↦ w z` for a unit `w`: the coefficient of `z^k z̄^l` picks up `w^k w̄^l`.
pub fn rotate(h: &ResonantSeries, w: &ComplexRational) -> ResonantSeries {
    let mut out = h.empty_like();
    let wbar = w.conj();
    for (key, c) in h.terms() {
        out.add_term(*key, &(c * &w.pow(key.k) * wbar.pow(key.l)));
    }
    out
}

/// Gauge invariance, idempotence and invariance under conjugation of the map.
pub fn suite_invariance(orders: &[u32], seeds: u64, base_seed: u64, truncation: i64) -> Vec<Outcome> {
    // A rational point on the unit circle: not a root of unity, so a genuine rotation.
    let w = ComplexRational::new(rat(3, 5), rat(4, 5));
    let mut out = Vec::new();
    for &n in orders {
        let mut gauge = Vec::new();
        let mut idem = Vec::new();
        let mut conj = Vec::new();
        for s in 0..seeds {
            let mut r = rng(base_seed.wrapping_mul(6007).wrapping_add(s * 19 + n as u64));
            let nf = random_normal_form(n, Kind::Autonomous, Variant::Standard, truncation, &mut r);
            let run = |h: &ResonantSeries, t: i64| simplify_autonomous(h, t, Variant::Standard);
            let h = match nf.to_series() {
                Ok(h) => h,
                Err(e) => {
                    idem.push(format!("seed {s}: {e}"));
                    continue;
                }
            };
            match run(&h, truncation) {
                Ok(back) if back.a == nf.a && back.b == nf.b => {}
                Ok(_) => idem.push(format!("seed {s}: coefficients changed")),
                Err(e) => idem.push(format!("seed {s}: {e}")),
            }
            match run(&rotate(&h, &w), truncation) {
                Ok(back) if back.a == nf.a && back.b == nf.b => {}
                Ok(_) => gauge.push(format!("seed {s}: coefficients changed")),
                Err(e) => gauge.push(format!("seed {s}: {e}")),
            }
            if let Err(e) = map_conjugation_check(&h, &mut r) {
                conj.push(format!("seed {s}: {e}"));
            }
        }
        for (label, failures) in [("gauge invariance", gauge), ("idempotence", idem), ("map conjugation", conj)] {
            out.push(Outcome::new(
                format!("{label} n={n}"),
                failures.is_empty(),
                if failures.is_empty() { format!("{seeds} seeds agree exactly") } else { failures.join("; ") },
            ));
        }
    }
    out
}

/// Builds the map of `h`, conjugates it by a random generator, interpolates
/// back and checks that the simplified normal forms agree.
fn map_conjugation_check<R: Rng>(h: &ResonantSeries, rng: &mut R) -> std::result::Result<(), String> {
    let n = h.n();
    let scheme = h.scheme();
    let poly = h.regrade(GradingScheme::PolyOrder);
    let degree = poly.truncation();
    let g = flow_map(&poly, degree - 1).map_err(|e| e.to_string())?;
    let chi = random_real_polynomial(n, GradingScheme::PolyOrder, 3, 6, degree, 1.0, rng);
    let g2 = conjugate_map(&g, &chi).map_err(|e| e.to_string())?;
    let h2 = interpolate(&g2, degree - 1).map_err(|e| e.to_string())?;
    if h2 == poly {
        return Err("conjugation left the map unchanged".into());
    }
    let t = h2.regrade(scheme).truncation();
    let a = simplify_autonomous(&poly, t, Variant::Standard).map_err(|e| e.to_string())?;
    let b = simplify_autonomous(&h2, t, Variant::Standard).map_err(|e| e.to_string())?;
    if a.a != b.a || a.b != b.b {
        return Err(format!("normal forms differ at truncation {t}"));
    }
    Ok(())
}

/// Extremum of `f_σ` located numerically from the roots of `f_σ′`, as an
/// oracle for the double-point curves.
pub fn numeric_double_point(model: &ModelHamiltonian, sigma: f64) -> Option<f64> {
    let grid = crate::bifurcation::log_grid(MIN_ACTION, model.action_bound(), GRID_POINTS);
    let roots = crate::bifurcation::bracketed_roots(
        |i| model.f_sigma_slope(i, sigma),
        |i| {
            let s = 1e-7 * i.max(1e-12);
            (model.f_sigma_slope(i + s, sigma) - model.f_sigma_slope(i - s, sigma)) / (2.0 * s)
        },
        &grid,
    );
    roots.first().map(|&i| model.f_sigma(i, sigma))
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Closed-form and iterated boundary curves against numeric oracles.
pub fn suite_boundaries() -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let nus: Vec<f64> = linspace(-0.2, 0.2, 41).into_iter().filter(|v| v.abs() > 1e-12).collect();

    for b0 in [0.5, 1.5] {
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        for &nu in &nus {
            let model = ModelHamiltonian::new(6, 0.0, nu, b0)?;
            for sigma in [1.0, -1.0] {
                let closed = nu * nu / (3.0 * (1.0 + sigma * b0));
                match (double_point_curve(6, nu, sigma, b0), numeric_double_point(&model, sigma)) {
                    (Ok(d), Some(oracle)) => {
                        worst = worst.max(relative(d, closed)).max(relative(oracle, closed));
                        checked += 1;
                    }
                    (Err(_), None) => {}
                    _ => worst = f64::INFINITY,
                }
            }
        }
        out.push(Outcome::new(
            format!("n=6 double-point parabola b0={b0}"),
            worst <= 1e-10 && checked > 0,
            format!("{checked} curve points, max relative deviation {worst:.3e} (tolerance 1e-10)"),
        ));
    }

    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for &nu in &nus {
        let model = ModelHamiltonian::new(5, 0.0, nu, 1.0)?;
        let sigma = -nu.signum();
        let closed = -128.0 / 675.0 * nu * nu * nu;
        let d = double_point_curve(5, nu, sigma, 1.0)?;
        match numeric_double_point(&model, sigma) {
            Some(oracle) => worst = worst.max(relative(d, closed)).max(relative(oracle, closed)),
            None => worst = f64::INFINITY,
        }
        checked += 1;
    }
    out.push(Outcome::new(
        "n=5 double-point cubic",
        worst <= 1e-9,
        format!("{checked} curve points, max relative deviation {worst:.3e} (tolerance 1e-9)"),
    ));

    let mut gaps = Vec::new();
    let mut oracle_gap: f64 = 0.0;
    for nu in [-0.1, -0.05, -0.02, -0.01] {
        let model = ModelHamiltonian::new(7, 0.0, nu, 1.0)?;
        let mut g: f64 = 0.0;
        for sigma in [1.0, -1.0] {
            let d = double_point_curve(7, nu, sigma, 1.0)?;
            g = g.max(relative(double_point_asymptote(7, nu, sigma), d));
            let oracle = numeric_double_point(&model, sigma).unwrap_or(f64::NAN);
            oracle_gap = oracle_gap.max(relative(oracle, d));
        }
        gaps.push((nu, g));
    }
    let at_005 = gaps.iter().find(|(nu, _)| *nu == -0.05).map_or(f64::INFINITY, |g| g.1);
    let decreasing = gaps.windows(2).all(|w| w[1].1 < w[0].1);
    out.push(Outcome::new(
        "n=7 iterated curve vs asymptote",
        at_005 < 0.05 && decreasing && oracle_gap < 1e-10,
        format!(
            "relative gaps {} ; gap at nu=-0.05 is {at_005:.4} (< |nu|); iterated vs numeric extremum {oracle_gap:.2e}",
            gaps.iter().map(|(nu, g)| format!("{nu}:{g:.4}")).collect::<Vec<_>>().join(" ")
        ),
    ));

    let mut worst: f64 = 0.0;
    let mut odd: f64 = 0.0;
    for nu in [0.05, 0.1, 0.2] {
        let plus = connection_curve(5, nu, 1.0)?;
        let minus = connection_curve(5, -nu, 1.0)?;
        worst = worst.max((plus / (nu * nu * nu) + 4.0 / 25.0).abs());
        worst = worst.max((minus / (-nu * nu * nu) + 4.0 / 25.0).abs());
        odd = odd.max((plus + minus).abs() / plus.abs());
    }
    out.push(Outcome::new(
        "n=5 connection curve",
        worst <= 1e-9 && odd <= 1e-9,
        format!("max |delta/nu^3 + 4/25| = {worst:.3e}, odd-symmetry defect {odd:.3e} (tolerance 1e-9)"),
    ));
    Ok(out)
}

/// Finite-difference gradient and Hessian checks at the critical points of `model`.
fn check_critical_set(model: &ModelHamiltonian, set: &CriticalSet) -> std::result::Result<(), String> {
    for p in &set.points {
        let (i, phi) = (p.action, p.phi_class);
        let (si, sp) = (1e-4 * i, 1e-4);
        let h = |a: f64, b: f64| model.evaluate(a, b);
        let (gi, gp) = (1e-6 * i, 1e-6);
        let hi = (h(i + gi, phi) - h(i - gi, phi)) / (2.0 * gi);
        let hp = (h(i, phi + gp) - h(i, phi - gp)) / (2.0 * gp);
        let scale = model.delta.abs().max(model.nu.abs() * i).max(i * i);
        if hi.abs() > 1e-10 * scale.max(1.0) || hp.abs() > 1e-10 {
            return Err(format!("gradient ({hi:.2e}, {hp:.2e}) at I = {i}"));
        }
        let hii = (h(i + si, phi) - 2.0 * h(i, phi) + h(i - si, phi)) / (si * si);
        let hpp = (h(i, phi + sp) - 2.0 * h(i, phi) + h(i, phi - sp)) / (sp * sp);
        let saddle = hii * hpp < 0.0;
        if saddle != (p.kind == PointKind::Saddle) {
            return Err(format!("Hessian sign disagrees with the slope rule at I = {i}"));
        }
    }
    Ok(())
}

/// Draws `δ` uniformly from the interior of an interval of `domain_intervals`;
/// unbounded sides are cut at twice the scale of the finite end (or `ν²`).
fn sample_in<R: Rng>(lo: f64, hi: f64, nu: f64, rng: &mut R) -> f64 {
    let scale = [lo, hi].iter().filter(|x| x.is_finite()).fold((nu * nu).max(1e-6), |m, x| m.max(x.abs()));
    let lo = if lo.is_finite() { lo } else { hi - 2.0 * scale };
    let hi = if hi.is_finite() { hi } else { lo + 2.0 * scale };
    let w = hi - lo;
    rng.gen_range(lo + 0.05 * w..hi - 0.05 * w)
}

/// Saddle counts, labels and pointwise checks over random samples of every domain.
pub fn suite_saddles(seed: u64, samples: usize) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let cases: [(u32, f64); 5] = [(5, 1.0), (6, 0.5), (6, 1.5), (7, 1.0), (9, 1.0)];
    for (n, b0) in cases {
        let mut r = rng(seed.wrapping_add(n as u64 * 101 + (b0 * 10.0) as u64));
        let mut failures = Vec::new();
        let mut tally = Vec::new();
        for label in DomainLabel::present(n, b0) {
            let mut done = 0;
            while done < samples {
                // |ν| ≥ 0.01 keeps every domain wider than the boundary margin.
                let nu = r.gen_range(0.01..0.1) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
                let intervals = domain_intervals(n, nu, b0)?;
                let Some(&(_, lo, hi)) = intervals.iter().find(|(l, _, _)| *l == label) else { continue };
                let delta = sample_in(lo, hi, nu, &mut r);
                let model = ModelHamiltonian::new(n, delta, nu, b0)?;
                let set = critical_points(&model);
                match classify_domain(&model) {
                    Ok(l) if l == label => {}
                    Ok(l) => failures.push(format!("({delta:.3e}, {nu:.3e}) labelled {l}, expected {label}")),
                    Err(e) => failures.push(format!("({delta:.3e}, {nu:.3e}): {e}")),
                }
                if set.saddle_count(n) != label.saddle_count(n) {
                    failures.push(format!(
                        "({delta:.3e}, {nu:.3e}) in {label}: {} saddles, expected {}",
                        set.saddle_count(n),
                        label.saddle_count(n)
                    ));
                }
                if n == 5 && set.center_count(n) != if label.saddle_count(n) == 10 { 5 } else { 0 } {
                    failures.push(format!("({delta:.3e}, {nu:.3e}) in {label}: {} centres", set.center_count(n)));
                }
                if let Err(e) = check_critical_set(&model, &set) {
                    failures.push(format!("({delta:.3e}, {nu:.3e}): {e}"));
                }
                let edges: Vec<f64> = intervals.iter().map(|x| x.1).filter(|x| x.is_finite()).collect();
                for &edge in &edges {
                    if edge != lo && edge != hi {
                        continue;
                    }
                    // Step a tenth of the way to the nearest other boundary.
                    let room = edges.iter().filter(|&&e| e != edge).map(|e| (e - edge).abs()).fold(edge.abs().max(1e-6), f64::min);
                    let eta = 0.1 * room;
                    {
                        let count = |d: f64| {
                            critical_points(&ModelHamiltonian { delta: d, ..model }).saddle_count(n) as i64
                        };
                        if (count(edge - eta) - count(edge + eta)).abs() != n as i64 {
                            failures.push(format!("crossing delta = {edge:.3e} at nu = {nu:.3e} does not change the count by n"));
                        }
                    }
                }
                done += 1;
            }
            tally.push(format!("{label}:{}", label.saddle_count(n)));
        }
        failures.dedup();
        let name = if n == 6 { format!("saddle counts n=6 b0={b0}") } else { format!("saddle counts n={n}") };
        out.push(Outcome::new(
            name,
            failures.is_empty(),
            if failures.is_empty() {
                format!("{samples} samples per domain agree ({})", tally.join(" "))
            } else {
                format!("{} failures: {}", failures.len(), failures.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
            },
        ));
    }

    // (δ, ν) ↦ (−δ, −ν) for n = 5 maps critical families onto each other with σ ↦ −σ.
    let mut r = rng(seed ^ 0x5eed);
    let mut bad = 0;
    for _ in 0..samples {
        let (delta, nu) = (r.gen_range(-1e-3..1e-3), r.gen_range(-0.1..0.1));
        let a = critical_points(&ModelHamiltonian::new(5, delta, nu, 1.0)?);
        let b = critical_points(&ModelHamiltonian::new(5, -delta, -nu, 1.0)?);
        let same = a.points.len() == b.points.len()
            && a.points.iter().all(|p| {
                b.points.iter().any(|q| {
                    relative(q.action, p.action) < 1e-9 && q.sigma == -p.sigma && q.kind == p.kind
                        && (q.energy + p.energy).abs() <= 1e-9 * p.energy.abs().max(1e-300)
                })
            });
        if !same {
            bad += 1;
        }
    }
    out.push(Outcome::new("n=5 symmetry", bad == 0, format!("{samples} samples, {bad} mismatches")));

    // The n = 6 scaling is a change of variables: critical points must agree.
    let mut worst: f64 = 0.0;
    for eps in [0.05, 0.1, -0.05, -0.1] {
        for b0 in [0.5, 1.5] {
            for a in [-0.2, -0.05, 0.02, 0.04, 0.3] {
                let model = ModelHamiltonian::new(6, eps * eps * a, eps, b0)?;
                let set = critical_points(&model);
                let scaled = rescale(&model, Scaling::N6)?.limit_critical_points();
                if scaled.len() != set.points.len() {
                    worst = f64::INFINITY;
                    continue;
                }
                for p in &set.points {
                    let best = scaled
                        .iter()
                        .filter(|q| q.sigma == p.sigma && q.kind == p.kind)
                        .map(|q| relative(q.j * eps, p.action))
                        .fold(f64::INFINITY, f64::min);
                    worst = worst.max(best);
                }
            }
        }
    }
    out.push(Outcome::new(
        "n=6 scaled vs unscaled critical points",
        worst <= 1e-10,
        format!("max relative deviation {worst:.3e} (tolerance 1e-10)"),
    ));
    Ok(out)
}

/// Constants of the rescaled limit models.
pub fn suite_scaled() -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let jcr = (0.4f64).powf(2.0 / 3.0);
    let vcr = 0.6 * jcr;
    let pts = RescaledModel::outer_limit().limit_critical_points();
    let ok = pts.len() == 1 && (pts[0].j - jcr).abs() <= 1e-12 && (pts[0].value - vcr).abs() <= 1e-12;
    out.push(Outcome::new(
        "outer model critical point",
        ok,
        format!(
            "J = {:?}, value = {:?}; expected {jcr} and {vcr} (tolerance 1e-12)",
            pts.first().map(|p| p.j),
            pts.first().map(|p| p.value)
        ),
    ));

    let eps1 = 0.1;
    let mut detail = Vec::new();
    let mut ok = true;
    for a in [-5.0, -1.0, 0.0] {
        let pts = RescaledModel::boundary_limit(7, eps1, a).limit_critical_points();
        let mut expected = Vec::new();
        for sigma in [1.0, -1.0] {
            let rad = -(a + eps1 * sigma) / 3.0;
            if rad > 0.0 {
                expected.push((rad.sqrt(), sigma));
                expected.push((-rad.sqrt(), sigma));
            }
        }
        let matched = expected.len() == pts.len()
            && expected.iter().all(|(j, s)| pts.iter().any(|p| p.sigma as f64 == *s && (p.j - j).abs() <= 1e-10));
        let saddles = pts.iter().filter(|p| p.kind == PointKind::Saddle).count();
        let want = if a < -eps1 { 2 } else if a < eps1 { 1 } else { 0 };
        ok &= matched && saddles == want;
        detail.push(format!("a={a}: {} points, {saddles} saddles", pts.len()));
    }
    out.push(Outcome::new(
        "boundary model saddles",
        ok,
        format!("{} (eps1 = 0.1, tolerance 1e-10)", detail.join("; ")),
    ));

    let a = cubic_connection()?;
    out.push(Outcome::new(
        "cubic model connection",
        (a + 4.0 / 25.0).abs() <= 1e-9,
        format!("a = {a}, expected -4/25 (tolerance 1e-9)"),
    ));

    let ac = 3.0 * (2.0f64).powf(-2.0 / 3.0);
    let small = 0.01;
    let a = boundary_connection(7, small)?;
    out.push(Outcome::new(
        "boundary model connection",
        (a + ac).abs() <= small * small,
        format!("a = {a} at eps1 = {small}, expected -3*2^(-2/3) = {} + O(eps1^2)", -ac),
    ));

    let eps = [1e-6, 1e-5, 1e-4, 1e-3];
    for n in [8u32, 10] {
        let gaps: Vec<f64> = eps.iter().map(|&e| pendulum_gap(n, e, 2.0)).collect();
        let slope = fit_exponent(&eps, &gaps);
        let want = (n as f64 - 6.0) / 4.0;
        out.push(Outcome::new(
            format!("pendulum limit n={n}"),
            (slope - want).abs() <= 0.1 * want,
            format!("fitted exponent {slope:.4}, expected {want} within 10%"),
        ));
    }
    Ok(out)
}

/// Model configurations whose critical level sets the level-set suite traces.
pub fn level_cases() -> Result<Vec<(String, Box<dyn PlanarHamiltonian>)>> {
    let within = |n: u32, nu: f64, b0: f64, label: DomainLabel, frac: f64| -> Result<f64> {
        let iv = domain_intervals(n, nu, b0)?;
        let &(_, lo, hi) = iv.iter().find(|(l, _, _)| *l == label).expect("domain present");
        Ok(lo + frac * (hi - lo))
    };
    let mid = |n, nu, b0, label| within(n, nu, b0, label, 0.5);
    let model = |n, delta, nu, b0| ModelHamiltonian::new(n, delta, nu, b0);
    let mut cases: Vec<(String, Box<dyn PlanarHamiltonian>)> = vec![
        ("outer model".into(), Box::new(ScaledPlanar::new(RescaledModel::outer_limit())?)),
        ("n=5 at delta=nu=0".into(), Box::new(model(5, 0.0, 0.0, 1.0)?)),
        ("n=7 D1".into(), Box::new(model(7, -0.001, -0.1, 1.0)?)),
        ("n=7 D2".into(), Box::new(model(7, 0.001, -0.1, 1.0)?)),
        ("n=5 D2".into(), Box::new(model(5, mid(5, 0.1, 1.0, DomainLabel::D2)?, 0.1, 1.0)?)),
        ("n=6 b0=0.5 D2".into(), Box::new(model(6, mid(6, -0.1, 0.5, DomainLabel::D2)?, -0.1, 0.5)?)),
        ("n=6 b0=1.5 D2'".into(), Box::new(model(6, mid(6, -0.1, 1.5, DomainLabel::D2Prime)?, -0.1, 1.5)?)),
        ("n=9 D2".into(), Box::new(model(9, within(9, -0.2, 1.0, DomainLabel::D2, 0.9)?, -0.2, 1.0)?)),
        ("n=7 connection".into(), Box::new(model(7, connection_curve(7, -0.1, 1.0)?, -0.1, 1.0)?)),
    ];
    cases.push(("cubic connection".into(), Box::new(ScaledPlanar::new(RescaledModel::cubic_limit(cubic_connection()?))?)));
    Ok(cases)
}

/// Largest distance, in cell diagonals, from a saddle of `h` to the critical
/// set at its energy.
fn saddle_gap(h: &dyn PlanarHamiltonian, sets: &[ContourSet], grid: GridSpec) -> f64 {
    let mut worst = 0.0f64;
    for f in h.critical_features().iter().filter(|f| f.kind == PointKind::Saddle) {
        let set = sets.iter().min_by(|a, b| (a.level - f.energy).abs().total_cmp(&(b.level - f.energy).abs()));
        let Some(set) = set else { return f64::INFINITY };
        for p in f.orbit(h.order()) {
            let d = set.segments().map(|(a, b)| point_segment_distance(p, a, b)).fold(f64::INFINITY, f64::min);
            worst = worst.max(d / grid.cell_diagonal());
        }
    }
    worst
}

/// Level-set fidelity at 512² cells.
pub fn suite_levels() -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for (name, h) in level_cases()? {
        let h = h.as_ref();
        let grid = GridSpec::auto(h, DEFAULT_CELLS, DEFAULT_CELLS)?;
        let samples = Samples::new(h, grid);
        let sets = critical_level_sets_on(h, grid, false)?;
        let energies = critical_energies(h);
        let n = h.order();

        let residual = sets.iter().map(|s| vertex_residual(h, s, &samples).1).fold(0.0, f64::max);
        let symmetry = sets.iter().map(|s| symmetry_defect(s, n, grid)).fold(0.0, f64::max);
        let gap = saddle_gap(h, &sets, grid);
        let mut ok = !sets.is_empty() && residual < 3.0 && symmetry <= 2.0 && gap <= 2.0;
        let mut detail = format!(
            "{} critical levels, {} vertices; residual {residual:.2e} cells (< 3), symmetry defect {symmetry:.3} \
             cell diagonals (<= 2), saddle gap {gap:.3} (<= 2)",
            sets.len(),
            sets.iter().map(ContourSet::vertex_count).sum::<usize>()
        );
        match name.as_str() {
            "outer model" => {
                // J + J^{5/2} cos 5φ in polar form, independent of the traced model.
                let level = 0.6 * 0.4f64.powf(2.0 / 3.0);
                let oracle = |x: f64, y: f64| {
                    let j = 0.5 * (x * x + y * y);
                    j + j.powf(2.5) * (5.0 * y.atan2(x)).cos()
                };
                let mut worst = 0.0f64;
                for s in &sets {
                    for (x, y) in s.vertices() {
                        let (i, j) = grid.cell_of(x, y);
                        worst = worst.max((oracle(x, y) - level).abs() / samples.cell_variation(i, j));
                    }
                }
                let level_ok = sets.len() == 1 && (sets[0].level - level).abs() <= 1e-12;
                ok &= level_ok && worst < 3.0;
                detail += &format!("; polar residual {worst:.2e} cells (< 3), level {:?} vs {level}", energies);
            }
            "n=5 at delta=nu=0" => {
                let rays = sets.first().map_or(0.0, |s| ray_defect(s, 5, grid));
                let reached = sets.first().map_or(0, |s| rays_reached(s, 5, 0.5 * grid.xmax));
                ok &= energies == [0.0] && rays <= 2.0 && reached == 10;
                detail += &format!("; ray distance {rays:.3} cell diagonals (<= 2), {reached}/10 half-lines reached");
            }
            "n=7 D1" => {
                ok &= energies.len() == 1;
                detail += &format!("; {} distinct saddle energies (expected 1)", energies.len());
            }
            "n=7 connection" | "cubic connection" => {
                let saddles = h.critical_features().iter().filter(|f| f.kind == PointKind::Saddle).count();
                ok &= saddles == 2 && energies.len() == 1;
                detail += &format!("; {saddles} saddle families on {} merged level(s) (expected 2 on 1)", energies.len());
            }
            _ => {}
        }
        out.push(Outcome::new(format!("level sets {name}"), ok, detail));
    }
    Ok(out)
}

/// The named verification suites with their standard parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Tables,
    Explicit,
    Uniqueness,
    Interpolation,
    Invariance,
    Boundaries,
    Saddles,
    Scaled,
    Levels,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Tables,
        Suite::Explicit,
        Suite::Uniqueness,
        Suite::Interpolation,
        Suite::Invariance,
        Suite::Boundaries,
        Suite::Saddles,
        Suite::Scaled,
        Suite::Levels,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tables => "tables",
            Suite::Explicit => "explicit",
            Suite::Uniqueness => "uniqueness",
            Suite::Interpolation => "interpolation",
            Suite::Invariance => "invariance",
            Suite::Boundaries => "boundaries",
            Suite::Saddles => "saddles",
            Suite::Scaled => "scaled",
            Suite::Levels => "levels",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|x| x.name()).collect();
            crate::error::Error::Parse(format!("unknown suite {s:?} (expected {} or all)", names.join(", ")))
        })
    }

    /// Runs the suite; `seed` drives every randomized check.
    pub fn run(self, seed: u64) -> Result<Vec<Outcome>> {
        match self {
            Suite::Tables => suite_tables(&[4, 5, 6, 7, 8, 13], 30),
            Suite::Explicit => suite_explicit(&[4, 6, 7, 8, 9], 15),
            Suite::Uniqueness => {
                let mut out = suite_uniqueness(&[3, 4, 5, 6, 7, 9], 20, seed, 10);
                out.extend(suite_family_uniqueness(&[3, 4, 5, 6, 7], 5, seed, 12, (1, 1)));
                out.extend(suite_family_uniqueness(&[4, 5, 6, 7], 5, seed, 12, (0, 0)));
                Ok(out)
            }
            Suite::Interpolation => Ok(suite_interpolation(&[4, 5, 7], 10, seed, 10)),
            Suite::Invariance => Ok(suite_invariance(&[4, 5, 6, 7], 3, seed, 10)),
            Suite::Boundaries => suite_boundaries(),
            Suite::Saddles => suite_saddles(seed, 200),
            Suite::Scaled => suite_scaled(),
            Suite::Levels => suite_levels(),
        }
    }
}
