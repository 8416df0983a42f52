//! Rescalings of the model Hamiltonians onto their one-parameter limit models.
//!
//! | scaling    | substitution                                   | limit model                        |
//! |------------|------------------------------------------------|------------------------------------|
//! | `pendulum` | ν = μ − 3ε, δ = 3ε² − 2με, I = ε + ε^{n/4}μ^{−1/2}J | J² + cos nφ                    |
//! | `boundary` | ν = −3ε, δ = 3ε² + ε^{n/3}a, I = ε + ε^{n/6}J  | aJ + J³ + cos ψ + ε₁J cos ψ        |
//! | `n6`       | ν = ε, δ = ε²a, I = εJ                         | aJ + J² + J³(1 + b₀ cos 6φ)        |
//! | `outer`    | I = δ^{2/3}J                                   | J + J^{5/2} cos 5φ                 |
//! | `cubic`    | δ = aν³, I = ν²J                               | aJ + J² + J^{5/2} cos 5φ           |
//!
//! with `ψ = nφ` and `ε₁ = (n/2) ε^{n/6−1}`.

use std::f64::consts::PI;

use serde::Serialize;

use super::{bracketed_roots, linspace, log_grid, ModelHamiltonian, PointKind};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    Pendulum,
    Boundary,
    N6,
    Outer,
    Cubic,
}

impl Scaling {
    pub const ALL: [Scaling; 5] = [Scaling::Pendulum, Scaling::Boundary, Scaling::N6, Scaling::Outer, Scaling::Cubic];

    pub fn name(self) -> &'static str {
        match self {
            Scaling::Pendulum => "pendulum",
            Scaling::Boundary => "boundary",
            Scaling::N6 => "n6",
            Scaling::Outer => "outer",
            Scaling::Cubic => "cubic",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown scaling {s:?} (expected pendulum, boundary, n6, outer or cubic)")))
    }
}

/// A model Hamiltonian after one of the rescalings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RescaledModel {
    pub scaling: Scaling,
    pub n: u32,
    /// Small parameter: ε for `pendulum`, `boundary` and `n6`; `νδ^{−1/3}`
    /// for `outer`; `ν` for `cubic`.
    pub epsilon: f64,
    /// Rescaled detuning (`boundary`, `n6`, `cubic`).
    pub a: f64,
    /// Distance parameter of the `pendulum` scaling.
    pub mu: f64,
    /// `ε₁` of the `boundary` scaling.
    pub eps1: f64,
    pub b0: f64,
}

/// Rescales `model` and reports the limit-model parameters.
pub fn rescale(model: &ModelHamiltonian, scaling: Scaling) -> Result<RescaledModel> {
    let (n, delta, nu) = (model.n, model.delta, model.nu);
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("the {} scaling requires {what}", scaling.name())))
        }
    };
    let base = RescaledModel { scaling, n, epsilon: 0.0, a: 0.0, mu: 0.0, eps1: 0.0, b0: model.b0 };
    match scaling {
        Scaling::Pendulum => {
            need(n >= 7, "n >= 7")?;
            let disc = nu * nu - 3.0 * delta;
            need(disc >= 0.0, "nu^2 - 3 delta >= 0")?;
            let epsilon = ((disc).sqrt() - nu) / 3.0;
            let mu = nu + 3.0 * epsilon;
            need(0.0 < epsilon && epsilon < mu, "0 < eps < mu")?;
            Ok(RescaledModel { epsilon, mu, ..base })
        }
        Scaling::Boundary => {
            need(n >= 7, "n >= 7")?;
            need(nu < 0.0, "nu < 0")?;
            let epsilon = -nu / 3.0;
            let nf = n as f64;
            let a = (delta - 3.0 * epsilon * epsilon) / epsilon.powf(nf / 3.0);
            let eps1 = nf / 2.0 * epsilon.powf(nf / 6.0 - 1.0);
            Ok(RescaledModel { epsilon, a, eps1, ..base })
        }
        Scaling::N6 => {
            need(n == 6, "n = 6")?;
            need(nu != 0.0, "nu != 0")?;
            Ok(RescaledModel { epsilon: nu, a: delta / (nu * nu), ..base })
        }
        Scaling::Outer => {
            need(n == 5, "n = 5")?;
            need(delta > 0.0, "delta > 0 (use the symmetry (delta, nu) -> (-delta, -nu))")?;
            Ok(RescaledModel { epsilon: nu * delta.powf(-1.0 / 3.0), ..base })
        }
        Scaling::Cubic => {
            need(n == 5, "n = 5")?;
            need(nu != 0.0, "nu != 0")?;
            Ok(RescaledModel { epsilon: nu, a: delta / (nu * nu * nu), ..base })
        }
    }
}

/// A critical family of a limit model, in the rescaled variables.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaledPoint {
    pub j: f64,
    /// `cos nφ` (or `cos ψ`) at the point.
    pub sigma: i8,
    pub kind: PointKind,
    pub value: f64,
}

impl RescaledModel {
    /// Limit model `J + J^{5/2} cos 5φ`.
    pub fn outer_limit() -> Self {
        Self { scaling: Scaling::Outer, n: 5, epsilon: 0.0, a: 0.0, mu: 0.0, eps1: 0.0, b0: 1.0 }
    }

    /// Limit model `aJ + J³ + cos ψ + ε₁ J cos ψ`.
    pub fn boundary_limit(n: u32, eps1: f64, a: f64) -> Self {
        Self { scaling: Scaling::Boundary, n, epsilon: 0.0, a, mu: 0.0, eps1, b0: 1.0 }
    }

    /// Scale-free model `aJ + J² + J^{5/2} cos 5φ` (`ν > 0`).
    pub fn cubic_limit(a: f64) -> Self {
        Self { scaling: Scaling::Cubic, n: 5, epsilon: 1.0, a, mu: 0.0, eps1: 0.0, b0: 1.0 }
    }

    /// Scale-free model `aJ + J² + J³(1 + b₀ cos 6φ)` (`ν > 0`).
    pub fn n6_limit(a: f64, b0: f64) -> Self {
        Self { scaling: Scaling::N6, n: 6, epsilon: 1.0, a, mu: 0.0, eps1: 0.0, b0 }
    }

    /// Sign of `ν` for the cubic scaling, which flips the `J^{5/2}` term.
    fn cubic_sign(&self) -> f64 {
        if self.epsilon < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// The rescaled Hamiltonian, exact up to an additive constant.
    pub fn evaluate(&self, j: f64, phi: f64) -> f64 {
        let c = (self.n as f64 * phi).cos();
        let half = self.n as f64 / 2.0;
        match self.scaling {
            Scaling::Pendulum => {
                let e = self.epsilon;
                let cubic = e.powf(half / 2.0) * self.mu.powf(-1.5);
                let lin = e.powf(half / 2.0 - 1.0) * self.mu.powf(-0.5);
                j * j + cubic * j * j * j + (1.0 + lin * j).max(0.0).powf(half) * c
            }
            Scaling::Boundary => {
                let lin = self.epsilon.powf(self.n as f64 / 6.0 - 1.0);
                self.a * j + j * j * j + (1.0 + lin * j).max(0.0).powf(half) * c
            }
            Scaling::Outer => j + self.epsilon * j * j + j.max(0.0).powf(2.5) * c,
            _ => self.evaluate_limit(j, phi),
        }
    }

    /// The limit model.
    pub fn evaluate_limit(&self, j: f64, phi: f64) -> f64 {
        let c = (self.n as f64 * phi).cos();
        match self.scaling {
            Scaling::Pendulum => j * j + c,
            Scaling::Boundary => self.a * j + j * j * j + c + self.eps1 * j * c,
            Scaling::N6 => self.a * j + j * j + j * j * j * (1.0 + self.b0 * c),
            Scaling::Outer => j + j.max(0.0).powf(2.5) * c,
            Scaling::Cubic => self.a * j + j * j + self.cubic_sign() * j.max(0.0).powf(2.5) * c,
        }
    }

    /// `∂_J`, `∂²_J` and `∂²_φ` of the limit model on `cos nφ = σ`.
    fn limit_derivatives(&self, j: f64, sigma: f64) -> (f64, f64, f64) {
        let n2 = (self.n * self.n) as f64;
        match self.scaling {
            Scaling::Pendulum => (2.0 * j, 2.0, -n2 * sigma),
            Scaling::Boundary => (
                self.a + 3.0 * j * j + self.eps1 * sigma,
                6.0 * j,
                // ∂²_ψ in the angle ψ = nφ
                -sigma * (1.0 + self.eps1 * j),
            ),
            Scaling::N6 => {
                let c = 1.0 + self.b0 * sigma;
                (self.a + 2.0 * j + 3.0 * c * j * j, 2.0 + 6.0 * c * j, -n2 * self.b0 * sigma * j * j * j)
            }
            Scaling::Outer => (1.0 + 2.5 * sigma * j.powf(1.5), 3.75 * sigma * j.sqrt(), -n2 * sigma * j.powf(2.5)),
            Scaling::Cubic => {
                let s = self.cubic_sign() * sigma;
                (self.a + 2.0 * j + 2.5 * s * j.powf(1.5), 2.0 + 3.75 * s * j.sqrt(), -n2 * s * j.powf(2.5))
            }
        }
    }

    /// Critical families of the limit model.
    ///
    /// `J` ranges over the physical half-line (`J > 0`, or `νJ > 0` for `n6`);
    /// for `boundary` and `pendulum` `J` is a local coordinate of either sign.
    pub fn limit_critical_points(&self) -> Vec<ScaledPoint> {
        let grid: Vec<f64> = match self.scaling {
            Scaling::Pendulum => vec![],
            Scaling::Boundary => {
                let r = ((self.a.abs() + self.eps1.abs()) / 3.0).sqrt() + 1.0;
                linspace(-r, r, 4001)
            }
            Scaling::N6 => {
                let r = 1.0 + (2.0_f64).max(self.a.abs()) / (3.0 * (1.0 - self.b0.abs()).abs().min(1.0 + self.b0.abs()));
                log_grid(1e-12, r, 4000)
            }
            Scaling::Outer | Scaling::Cubic => {
                let x = 1.0 + (2.0_f64).max(self.a.abs()) / 2.5;
                log_grid(1e-12, x * x, 4000)
            }
        };
        let mut out = Vec::new();
        for sigma in [1.0, -1.0] {
            let phi = if sigma > 0.0 { 0.0 } else { PI / self.n as f64 };
            let roots = if self.scaling == Scaling::Pendulum {
                vec![0.0]
            } else {
                let flip = if self.scaling == Scaling::N6 && self.epsilon < 0.0 { -1.0 } else { 1.0 };
                // n6 with ν < 0 lives on J < 0: search the mirrored half-line.
                bracketed_roots(
                    |x| self.limit_derivatives(flip * x, sigma).0,
                    |x| flip * self.limit_derivatives(flip * x, sigma).1,
                    &grid,
                )
                .into_iter()
                .map(|x| flip * x)
                .collect()
            };
            for j in roots {
                let (_, hjj, hpp) = self.limit_derivatives(j, sigma);
                let kind = if hjj * hpp < 0.0 { PointKind::Saddle } else { PointKind::Center };
                out.push(ScaledPoint { j, sigma: sigma as i8, kind, value: self.evaluate_limit(j, phi) });
            }
        }
        out.sort_by(|a, b| a.j.total_cmp(&b.j).then(b.sigma.cmp(&a.sigma)));
        out
    }

    /// Action `I` of the rescaled coordinate `J`.
    pub fn action(&self, j: f64, delta: f64) -> f64 {
        let e = self.epsilon;
        let nf = self.n as f64;
        match self.scaling {
            Scaling::Pendulum => e + e.powf(nf / 4.0) * self.mu.powf(-0.5) * j,
            Scaling::Boundary => e + e.powf(nf / 6.0) * j,
            Scaling::N6 => e * j,
            Scaling::Outer => delta.powf(2.0 / 3.0) * j,
            Scaling::Cubic => e * e * j,
        }
    }
}

/// Value `a` of the cubic model at which both saddle families share a level.
pub fn cubic_connection() -> Result<f64> {
    scaled_connection(|a| RescaledModel::cubic_limit(a), -128.0 / 675.0, 0.0)
}

/// Value `a < −ε₁` at which both saddles of the boundary model share a level.
pub fn boundary_connection(n: u32, eps1: f64) -> Result<f64> {
    scaled_connection(|a| RescaledModel::boundary_limit(n, eps1, a), -20.0, -eps1)
}

fn scaled_connection<F: Fn(f64) -> RescaledModel>(make: F, lo: f64, hi: f64) -> Result<f64> {
    let gap = |a: f64| -> Result<f64> {
        let pts = make(a).limit_critical_points();
        let e = |s: i8| pts.iter().find(|p| p.kind == PointKind::Saddle && p.sigma == s).map(|p| p.value);
        match (e(1), e(-1)) {
            (Some(x), Some(y)) => Ok(x - y),
            _ => Err(Error::Contract(format!("saddle families missing at a = {a}"))),
        }
    };
    let shrink = 1e-3 * (hi - lo);
    let (mut a, mut b) = (lo + shrink, hi - shrink);
    let (mut ga, gb) = (gap(a)?, gap(b)?);
    if ga.signum() == gb.signum() {
        return Err(Error::Domain("the saddle energies do not cross on the interval".into()));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = gap(m)?;
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// `sup |h̄ − (J² + cos nφ)|` over `|J| ≤ 1` for the pendulum scaling with
/// `μ = ratio · ε`.
pub fn pendulum_gap(n: u32, epsilon: f64, ratio: f64) -> f64 {
    let m = RescaledModel {
        scaling: Scaling::Pendulum,
        n,
        epsilon,
        a: 0.0,
        mu: ratio * epsilon,
        eps1: 0.0,
        b0: 1.0,
    };
    let mut sup: f64 = 0.0;
    for j in linspace(-1.0, 1.0, 401) {
        for phi in linspace(0.0, 2.0 * PI / n as f64, 65) {
            sup = sup.max((m.evaluate(j, phi) - m.evaluate_limit(j, phi)).abs());
        }
    }
    sup
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_exponent(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}
