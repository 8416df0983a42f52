//! Critical points, domains and boundary curves of the model Hamiltonians
//!
//! ```text
//! n ≥ 7:  h = δI + νI² + I³ + I^{n/2} cos nφ
//! n = 6:  h = δI + νI² + I³ + b₀ I³ cos 6φ
//! n = 5:  h = δI + νI² + I^{5/2} cos 5φ
//! ```
//!
//! in symplectic polar coordinates. Every critical point away from the origin
//! sits on `cos nφ = σ = ±1` and solves `δ = f_σ(I)`; the sign of `f_σ′` at the
//! root decides between saddle and centre. This module works in `f64`.

pub mod rescale;

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Distance below which a parameter point counts as lying on a boundary curve.
pub const BOUNDARY_MARGIN: f64 = 1e-10;
/// Smallest action sampled by the root bracketing grid.
pub const MIN_ACTION: f64 = 1e-12;
/// Number of log-spaced samples used to bracket roots.
pub const GRID_POINTS: usize = 4000;

/// One of the model Hamiltonians above.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelHamiltonian {
    pub n: u32,
    pub delta: f64,
    pub nu: f64,
    /// Coefficient of `I³ cos 6φ`; fixed to 1 for `n ≠ 6`.
    pub b0: f64,
}

impl ModelHamiltonian {
    pub fn new(n: u32, delta: f64, nu: f64, b0: f64) -> Result<Self> {
        if n < 5 {
            return Err(Error::Domain(format!("the model Hamiltonians need n >= 5, got n = {n}")));
        }
        if !(delta.is_finite() && nu.is_finite() && b0.is_finite()) {
            return Err(Error::Domain("model parameters must be finite".into()));
        }
        if n == 6 && (b0 == 0.0 || b0.abs() == 1.0) {
            return Err(Error::Degeneracy(format!(
                "b0 = {b0}: b0 in {{-1, 0, 1}} is a degeneracy of higher co-dimension"
            )));
        }
        let b0 = if n == 6 { b0 } else { 1.0 };
        Ok(Self { n, delta, nu, b0 })
    }

    /// `n ≥ 7`, or `n = 6` with `|b₀| < 1`: the origin is stable at `δ = ν = 0`.
    pub fn is_stable(&self) -> bool {
        match self.n {
            5 => false,
            6 => self.b0.abs() < 1.0,
            _ => true,
        }
    }

    /// Sign of the `cos nφ` amplitude.
    fn amplitude_sign(&self) -> f64 {
        if self.n == 6 {
            self.b0.signum()
        } else {
            1.0
        }
    }

    /// Amplitude `g(I)` of `cos nφ`.
    fn amplitude(&self, i: f64) -> f64 {
        match self.n {
            5 => i * i * i.sqrt(),
            6 => self.b0 * i * i * i,
            n => i.powf(n as f64 / 2.0),
        }
    }

    /// `h(I, φ)`.
    pub fn evaluate(&self, i: f64, phi: f64) -> f64 {
        let cubic = if self.n == 5 { 0.0 } else { i * i * i };
        self.delta * i + self.nu * i * i + cubic + self.amplitude(i) * (self.n as f64 * phi).cos()
    }

    /// `f_σ(I)`: critical points on `cos nφ = σ` are the roots of `δ = f_σ(I)`.
    pub fn f_sigma(&self, i: f64, sigma: f64) -> f64 {
        match self.n {
            5 => -2.0 * self.nu * i - 2.5 * sigma * i * i.sqrt(),
            6 => -2.0 * self.nu * i - 3.0 * (1.0 + sigma * self.b0) * i * i,
            n => {
                let half = n as f64 / 2.0;
                -2.0 * self.nu * i - 3.0 * i * i - sigma * half * i.powf(half - 1.0)
            }
        }
    }

    /// `∂f_σ/∂I`.
    pub fn f_sigma_slope(&self, i: f64, sigma: f64) -> f64 {
        match self.n {
            5 => -2.0 * self.nu - 3.75 * sigma * i.sqrt(),
            6 => -2.0 * self.nu - 6.0 * (1.0 + sigma * self.b0) * i,
            n => {
                let half = n as f64 / 2.0;
                -2.0 * self.nu - 6.0 * i - sigma * half * (half - 1.0) * i.powf(half - 2.0)
            }
        }
    }

    /// Upper end of the action interval searched for roots.
    ///
    /// For `n = 5, 6` this is a Cauchy bound, so no root is missed. For
    /// `n ≥ 7` the truncated model acquires spurious roots where `I^{n/2}`
    /// overtakes `I³`, near `I* = (6/n)^{2/(n−6)}`, and once `f₋₁` turns
    /// convex, at `I_c = (6/c)^{2/(n−6)}` with `c = (n/2)(n/2−1)(n/2−2)`.
    /// The search stops at `min(I*/2, I_c)`.
    pub fn action_bound(&self) -> f64 {
        let (d, v) = (self.delta.abs(), self.nu.abs());
        match self.n {
            5 => {
                let x = 1.0 + (2.0 * v).max(d) / 2.5;
                x * x
            }
            6 => {
                let c = (1.0 - self.b0.abs()).abs().min(1.0 + self.b0.abs());
                1.0 + (2.0 * v).max(d) / (3.0 * c)
            }
            n => {
                let (h, e) = (n as f64 / 2.0, 2.0 / (n as f64 - 6.0));
                let convex = (6.0 / (h * (h - 1.0) * (h - 2.0))).powf(e);
                (0.5 * (6.0 / n as f64).powf(e)).min(convex)
            }
        }
    }

    /// Angle of the critical points with `cos nφ = σ` in the fundamental sector.
    pub fn phi_class(&self, sigma: f64) -> f64 {
        if sigma > 0.0 {
            0.0
        } else {
            PI / self.n as f64
        }
    }
}

/// Type of a non-degenerate critical point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Saddle,
    Center,
}

impl PointKind {
    pub fn name(self) -> &'static str {
        match self {
            PointKind::Saddle => "saddle",
            PointKind::Center => "center",
        }
    }
}

/// One family of `n` critical points related by the rotation `φ ↦ φ + 2π/n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub action: f64,
    pub phi_class: f64,
    /// `cos nφ` at the point.
    pub sigma: i8,
    pub kind: PointKind,
    pub energy: f64,
}

/// All critical families of a model away from the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalSet {
    pub points: Vec<CriticalPoint>,
    /// Set when a root lies close to the end of the searched action interval.
    pub near_bound: bool,
}

impl CriticalSet {
    /// Number of saddle points in the plane.
    pub fn saddle_count(&self, n: u32) -> usize {
        n as usize * self.points.iter().filter(|p| p.kind == PointKind::Saddle).count()
    }

    pub fn center_count(&self, n: u32) -> usize {
        n as usize * self.points.iter().filter(|p| p.kind == PointKind::Center).count()
    }

    pub fn saddles(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|p| p.kind == PointKind::Saddle)
    }
}

/// Roots of `f` on the span of `grid`.
///
/// Sign changes between neighbouring samples are refined by bisection and a
/// guarded Newton step. A pair of roots hiding inside one cell shows up as a
/// sign change of `df`; the extremum is located and, if `f` changes sign
/// there, both roots are recovered.
pub fn bracketed_roots<F, D>(f: F, df: D, grid: &[f64]) -> Vec<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut roots = Vec::new();
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let slopes: Vec<f64> = grid.iter().map(|&x| df(x)).collect();
    for w in 0..grid.len().saturating_sub(1) {
        let (a, b) = (grid[w], grid[w + 1]);
        let (fa, fb) = (values[w], values[w + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fb != 0.0 && fa.signum() != fb.signum() {
            roots.push(refine(&f, &df, a, b));
        } else if fb != 0.0 && slopes[w].signum() != slopes[w + 1].signum() {
            let m = bisect(&df, a, b);
            let fm = f(m);
            if fm == 0.0 {
                roots.push(m);
            } else if fm.signum() != fa.signum() {
                roots.push(refine(&f, &df, a, m));
                roots.push(refine(&f, &df, m, b));
            }
        }
    }
    if let (Some(&last), Some(&v)) = (grid.last(), values.last()) {
        if v == 0.0 {
            roots.push(last);
        }
    }
    roots
}

/// Bisection for a sign change of `f` on `[a, b]`.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Bisection followed by at most two Newton steps that stay in the bracket.
fn refine<F: Fn(f64) -> f64, D: Fn(f64) -> f64>(f: &F, df: &D, a: f64, b: f64) -> f64 {
    let mut x = bisect(f, a, b);
    for _ in 0..2 {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - f(x) / d;
        if next >= a && next <= b && f(next).abs() < f(x).abs() {
            x = next;
        } else {
            break;
        }
    }
    x
}

/// `count` log-spaced points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..count).map(|k| (l0 + (l1 - l0) * k as f64 / (count - 1) as f64).exp()).collect()
}

/// All critical families with `I > 0`, classified, with energies.
pub fn critical_points(model: &ModelHamiltonian) -> CriticalSet {
    let bound = model.action_bound();
    let grid = log_grid(MIN_ACTION, bound, GRID_POINTS);
    let mut points = Vec::new();
    let mut near_bound = false;
    for sigma in [1.0, -1.0] {
        let roots = bracketed_roots(
            |i| model.delta - model.f_sigma(i, sigma),
            |i| -model.f_sigma_slope(i, sigma),
            &grid,
        );
        for i in roots {
            near_bound |= i > 0.9 * bound;
            let slope = model.f_sigma_slope(i, sigma);
            // h_II = −f_σ′, h_φφ = −n² σ g(I): a saddle iff C σ f_σ′ < 0.
            let kind = if model.amplitude_sign() * sigma * slope < 0.0 { PointKind::Saddle } else { PointKind::Center };
            let phi = model.phi_class(sigma);
            points.push(CriticalPoint {
                action: i,
                phi_class: phi,
                sigma: sigma as i8,
                kind,
                energy: model.evaluate(i, phi),
            });
        }
    }
    points.sort_by(|a, b| a.action.total_cmp(&b.action).then(b.sigma.cmp(&a.sigma)));
    CriticalSet { points, near_bound }
}

/// Domains of the `(δ, ν)` plane, distinguished by their saddle families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DomainLabel {
    D0,
    D1,
    D1Prime,
    D2,
    D2Prime,
}

impl DomainLabel {
    pub const ALL: [DomainLabel; 5] =
        [DomainLabel::D0, DomainLabel::D1, DomainLabel::D1Prime, DomainLabel::D2, DomainLabel::D2Prime];

    pub fn name(self) -> &'static str {
        match self {
            DomainLabel::D0 => "D0",
            DomainLabel::D1 => "D1",
            DomainLabel::D1Prime => "D1'",
            DomainLabel::D2 => "D2",
            DomainLabel::D2Prime => "D2'",
        }
    }

    /// Number of saddle points in the plane for parameters in this domain.
    pub fn saddle_count(self, n: u32) -> usize {
        n as usize
            * match self {
                DomainLabel::D0 => 0,
                DomainLabel::D1 | DomainLabel::D1Prime => 1,
                DomainLabel::D2 | DomainLabel::D2Prime => 2,
            }
    }

    /// Domains that occur for the given model class.
    pub fn present(n: u32, b0: f64) -> Vec<DomainLabel> {
        if n >= 7 || (n == 6 && b0.abs() < 1.0) {
            vec![DomainLabel::D0, DomainLabel::D1, DomainLabel::D1Prime, DomainLabel::D2]
        } else {
            vec![DomainLabel::D1, DomainLabel::D1Prime, DomainLabel::D2, DomainLabel::D2Prime]
        }
    }
}

impl fmt::Display for DomainLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `σ` as seen through the sign of the amplitude: for `n = 6` with `b₀ < 0`
/// the rotation by `π/6` swaps the two families.
fn effective_sigma(n: u32, b0: f64, sigma: f64) -> f64 {
    if n == 6 && b0 < 0.0 {
        -sigma
    } else {
        sigma
    }
}

/// `δ` on the curve where the family `σ` has a double critical point.
pub fn double_point_curve(n: u32, nu: f64, sigma: f64, b0: f64) -> Result<f64> {
    let model = ModelHamiltonian::new(n, 0.0, nu, b0)?;
    match n {
        5 => {
            if sigma * nu >= 0.0 {
                return Err(Error::Domain(format!(
                    "f_sigma has no extremum for sigma = {sigma}, nu = {nu} (needs sigma*nu < 0)"
                )));
            }
            Ok(-128.0 / 675.0 * nu * nu * nu)
        }
        6 => {
            let c = 1.0 + sigma * model.b0;
            let i = -nu / (3.0 * c);
            if !(i > 0.0) {
                return Err(Error::Domain(format!(
                    "f_sigma has no extremum at positive action for sigma = {sigma}, nu = {nu}, b0 = {}",
                    model.b0
                )));
            }
            Ok(nu * nu / (3.0 * c))
        }
        _ => {
            if nu >= 0.0 {
                return Err(Error::Domain(format!("f_sigma is monotone for nu = {nu} >= 0")));
            }
            let half = n as f64 / 2.0;
            let coeff = sigma * n as f64 / 12.0 * (half - 1.0);
            let mut i = -nu / 3.0;
            for _ in 0..10_000 {
                let next = -nu / 3.0 - coeff * i.powf(half - 2.0);
                if !(next > 0.0) || !next.is_finite() {
                    return Err(Error::Domain(format!("consecutive approximations left I > 0 at nu = {nu}")));
                }
                if (next - i).abs() <= 4.0 * f64::EPSILON * next {
                    return Ok(model.f_sigma(next, sigma));
                }
                i = next;
            }
            Err(Error::Domain(format!("consecutive approximations did not converge at nu = {nu}")))
        }
    }
}

/// Leading asymptotics `ν²/3 − σ(n/2)(−ν/3)^{n/2−1}` of the `n ≥ 7` curves.
pub fn double_point_asymptote(n: u32, nu: f64, sigma: f64) -> f64 {
    let half = n as f64 / 2.0;
    nu * nu / 3.0 - sigma * half * (-nu / 3.0).powf(half - 1.0)
}

/// Domains crossed by the vertical line `ν = const`, as `(label, δ_lo, δ_hi)`
/// intervals in increasing `δ`, derived from the boundary curves alone.
pub fn domain_intervals(n: u32, nu: f64, b0: f64) -> Result<Vec<(DomainLabel, f64, f64)>> {
    use DomainLabel::*;
    let model = ModelHamiltonian::new(n, 0.0, nu, b0)?;
    let inf = f64::INFINITY;
    // Curve of the family with effective sign `s`.
    let curve = |s: f64| double_point_curve(n, nu, effective_sigma(n, model.b0, s), model.b0);
    let out = if model.is_stable() {
        if nu >= 0.0 {
            vec![(D1, -inf, 0.0), (D0, 0.0, inf)]
        } else {
            let (lo, hi) = (curve(1.0)?, curve(-1.0)?);
            vec![(D1, -inf, 0.0), (D2, 0.0, lo), (D1Prime, lo, hi), (D0, hi, inf)]
        }
    } else if nu > 0.0 {
        let d = curve(-1.0)?;
        vec![(D1, -inf, d), (D2, d, 0.0), (D1Prime, 0.0, inf)]
    } else if nu < 0.0 {
        let d = curve(1.0)?;
        vec![(D1, -inf, 0.0), (D2Prime, 0.0, d), (D1Prime, d, inf)]
    } else {
        vec![(D1, -inf, 0.0), (D1Prime, 0.0, inf)]
    };
    Ok(out)
}

/// Boundary curves through `(δ, ν)` closer than [`BOUNDARY_MARGIN`].
fn boundary_hit(model: &ModelHamiltonian) -> Option<String> {
    if model.delta.abs() < BOUNDARY_MARGIN {
        return Some("delta = 0".into());
    }
    for sigma in [1.0, -1.0] {
        if let Ok(d) = double_point_curve(model.n, model.nu, sigma, model.b0) {
            if (model.delta - d).abs() < BOUNDARY_MARGIN {
                return Some(format!("double-point curve sigma = {sigma:+}"));
            }
        }
    }
    None
}

/// Domain label of `(δ, ν)` read off the saddle and centre families.
///
/// A single saddle family is `D1` when it has `σ = +1` and `D1′` otherwise
/// (`σ` taken relative to the sign of the amplitude). With two saddle
/// families the stable models have one domain `D2`; otherwise `D2` is the
/// one whose centre family has `σ = −1`, so that `D2` borders `D1` and `D2′`
/// borders `D1′` across a double-point curve.
pub fn classify_domain(model: &ModelHamiltonian) -> Result<DomainLabel> {
    if let Some(curve) = boundary_hit(model) {
        return Err(Error::OnBoundary(format!(
            "(delta, nu) = ({}, {}) lies on the {curve}",
            model.delta, model.nu
        )));
    }
    let set = critical_points(model);
    let eff = |p: &CriticalPoint| effective_sigma(model.n, model.b0, p.sigma as f64);
    let saddles: Vec<f64> = set.saddles().map(eff).collect();
    let label = match saddles.len() {
        0 => DomainLabel::D0,
        1 => {
            if saddles[0] > 0.0 {
                DomainLabel::D1
            } else {
                DomainLabel::D1Prime
            }
        }
        2 => {
            if model.is_stable() {
                DomainLabel::D2
            } else {
                let centre = set.points.iter().find(|p| p.kind == PointKind::Center).map(eff);
                match centre {
                    Some(s) if s < 0.0 => DomainLabel::D2,
                    Some(_) => DomainLabel::D2Prime,
                    None => return Err(Error::Contract("two saddle families without a centre".into())),
                }
            }
        }
        k => return Err(Error::Contract(format!("{k} saddle families found; the model allows at most 2"))),
    };
    Ok(label)
}

/// `δ` at which the two saddle families share one energy level, for fixed `ν`.
pub fn connection_curve(n: u32, nu: f64, b0: f64) -> Result<f64> {
    let intervals = domain_intervals(n, nu, b0)?;
    let Some(&(_, lo, hi)) =
        intervals.iter().find(|(l, _, _)| matches!(l, DomainLabel::D2 | DomainLabel::D2Prime))
    else {
        return Err(Error::Domain(format!("two saddle families never coexist at nu = {nu}")));
    };
    let model = ModelHamiltonian::new(n, 0.0, nu, b0)?;
    let gap = |delta: f64| -> Result<f64> {
        let m = ModelHamiltonian { delta, ..model };
        let set = critical_points(&m);
        let energy = |s: f64| {
            set.saddles().find(|p| effective_sigma(n, m.b0, p.sigma as f64) == s).map(|p| p.energy)
        };
        match (energy(1.0), energy(-1.0)) {
            (Some(a), Some(b)) => Ok(a - b),
            _ => Err(Error::Contract(format!("saddle families missing at delta = {delta}"))),
        }
    };
    // Stay clear of the double-point end, where two roots merge below grid resolution.
    let shrink = 1e-3 * (hi - lo);
    let (mut a, mut b) = (lo + shrink, hi - shrink);
    let (mut ga, gb) = (gap(a)?, gap(b)?);
    if ga.signum() == gb.signum() {
        return Err(Error::Domain(format!("saddle energies never coincide in D2 at nu = {nu}")));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a) <= 1e-12 * m.abs() || m <= a || m >= b {
            break;
        }
        let gm = gap(m)?;
        if gm == 0.0 {
            return Ok(m);
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Critical points as CSV rows (header included).
pub fn critical_points_csv(model: &ModelHamiltonian, set: &CriticalSet) -> String {
    let mut s = String::from("n,delta,nu,b0,I,phi_class,sigma,kind,energy\n");
    for p in &set.points {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            model.n,
            model.delta,
            model.nu,
            model.b0,
            p.action,
            p.phi_class,
            p.sigma,
            p.kind.name(),
            p.energy
        ));
    }
    s
}

/// One sample of a boundary curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveSample {
    pub nu: f64,
    pub delta_exact: f64,
    /// Closed-form asymptote where one exists (`n ≥ 7`); equal to the exact
    /// value for the parabolas (`n = 6`) and the cubic (`n = 5`).
    pub delta_asymptotic: f64,
    pub sigma: i8,
}

/// Double-point curves sampled at `steps + 1` values of `ν` in `[lo, hi]`.
pub fn boundary_curves(n: u32, b0: f64, lo: f64, hi: f64, steps: usize) -> Result<Vec<CurveSample>> {
    ModelHamiltonian::new(n, 0.0, 0.0, b0)?;
    let mut out = Vec::new();
    for sigma in [1.0, -1.0] {
        for k in 0..=steps {
            let nu = lo + (hi - lo) * k as f64 / steps.max(1) as f64;
            let Ok(exact) = double_point_curve(n, nu, sigma, b0) else { continue };
            let asym = if n >= 7 { double_point_asymptote(n, nu, sigma) } else { exact };
            out.push(CurveSample { nu, delta_exact: exact, delta_asymptotic: asym, sigma: sigma as i8 });
        }
    }
    Ok(out)
}

pub fn boundary_curves_csv(samples: &[CurveSample]) -> String {
    let mut s = String::from("nu,delta_exact,delta_asymptotic,sigma\n");
    for c in samples {
        s.push_str(&format!("{},{},{},{}\n", c.nu, c.delta_exact, c.delta_asymptotic, c.sigma));
    }
    s
}

/// Domain labels on a `(δ, ν)` grid; points on a boundary are labelled `boundary`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DomainGrid {
    pub deltas: Vec<f64>,
    pub nus: Vec<f64>,
    /// `labels[j][i]` belongs to `(deltas[i], nus[j])`.
    pub labels: Vec<Vec<Option<DomainLabel>>>,
}

impl DomainGrid {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("delta,nu,label\n");
        for (j, nu) in self.nus.iter().enumerate() {
            for (i, delta) in self.deltas.iter().enumerate() {
                let l = self.labels[j][i].map_or("boundary", |l| l.name());
                s.push_str(&format!("{delta},{nu},{l}\n"));
            }
        }
        s
    }
}

/// Classifies one row of a domain grid.
pub fn classify_row(n: u32, b0: f64, nu: f64, deltas: &[f64]) -> Result<Vec<Option<DomainLabel>>> {
    deltas
        .iter()
        .map(|&delta| match classify_domain(&ModelHamiltonian::new(n, delta, nu, b0)?) {
            Ok(l) => Ok(Some(l)),
            Err(Error::OnBoundary(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

/// Evenly spaced values `lo..=hi`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![lo];
    }
    (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect()
}

fn fill(label: Option<DomainLabel>) -> &'static str {
    match label {
        Some(DomainLabel::D0) => "#f2f2f2",
        Some(DomainLabel::D1) => "#c6dbef",
        Some(DomainLabel::D1Prime) => "#fdd0a2",
        Some(DomainLabel::D2) => "#a1d99b",
        Some(DomainLabel::D2Prime) => "#dadaeb",
        None => "#000000",
    }
}

/// Bifurcation diagram with `δ` horizontal and `ν` vertical.
pub fn diagram_svg(n: u32, b0: f64, grid: &DomainGrid, curves: &[CurveSample]) -> String {
    let (w, h) = (600.0, 600.0);
    let (d0, d1) = (grid.deltas[0], *grid.deltas.last().expect("non-empty grid"));
    let (v0, v1) = (grid.nus[0], *grid.nus.last().expect("non-empty grid"));
    let x = |d: f64| (d - d0) / (d1 - d0) * w;
    let y = |v: f64| h - (v - v0) / (v1 - v0) * h;
    let cw = w / grid.deltas.len() as f64;
    let ch = h / grid.nus.len() as f64;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {}\" width=\"{w}\" height=\"{}\">\n",
        h + 40.0,
        h + 40.0
    );
    for (j, row) in grid.labels.iter().enumerate() {
        for (i, l) in row.iter().enumerate() {
            s.push_str(&format!(
                "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"{}\"/>\n",
                i as f64 * cw,
                h - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05,
                fill(*l)
            ));
        }
    }
    for sigma in [1i8, -1] {
        let pts: Vec<String> = curves
            .iter()
            .filter(|c| c.sigma == sigma && c.delta_exact >= d0 && c.delta_exact <= d1)
            .map(|c| format!("{:.3},{:.3}", x(c.delta_exact), y(c.nu)))
            .collect();
        if pts.len() > 1 {
            let dash = if sigma > 0 { "" } else { " stroke-dasharray=\"6 3\"" };
            s.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"{dash}/>\n",
                pts.join(" ")
            ));
        }
    }
    s.push_str(&format!(
        "<line x1=\"{:.3}\" y1=\"0\" x2=\"{:.3}\" y2=\"{h}\" stroke=\"#555555\" stroke-width=\"0.8\"/>\n",
        x(0.0),
        x(0.0)
    ));
    s.push_str(&format!(
        "<line x1=\"0\" y1=\"{:.3}\" x2=\"{w}\" y2=\"{:.3}\" stroke=\"#555555\" stroke-width=\"0.8\"/>\n",
        y(0.0),
        y(0.0)
    ));
    let mut lx = 10.0;
    for l in DomainLabel::present(n, b0) {
        s.push_str(&format!(
            "<rect x=\"{lx}\" y=\"{}\" width=\"14\" height=\"14\" fill=\"{}\" stroke=\"#000000\"/>\
             <text x=\"{}\" y=\"{}\" font-size=\"14\" font-family=\"sans-serif\">{}</text>\n",
            h + 13.0,
            fill(Some(l)),
            lx + 18.0,
            h + 25.0,
            l.name()
        ));
        lx += 70.0;
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" font-family=\"sans-serif\">n = {n}, delta horizontal, nu vertical</text>\n",
        lx + 10.0,
        h + 25.0
    ));
    s.push_str("</svg>\n");
    s
}
