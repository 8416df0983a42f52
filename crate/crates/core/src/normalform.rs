//! Parameter extraction, interpolation of maps by Hamiltonian flows, and the
//! order-by-order reduction to the unique simplified normal forms.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{
    a_allowed, a_monomial, a_offset, b_allowed, b_monomial, HomologicalOperator, Variant,
};
use crate::lie::lie_transform;
use crate::rational::{format_rational, parse_rational, rational_sqrt, ComplexRational, Rational};
use crate::series::{GradingScheme, MonomialKey, ResonantSeries};

/// Default truncation grade of the autonomous reduction.
pub const DEFAULT_AUTONOMOUS_TRUNCATION: i64 = 12;
/// Default truncation grade of the family reduction.
pub const DEFAULT_FAMILY_TRUNCATION: i64 = 10;

/// Unfolding parameters `(δ, ν)` of a map with multiplier `λ_p` near the
/// resonant multiplier `λ₀`, from `δ = i log(λ_p/λ₀)` and `ν = i a_p′(0)/λ_p`.
///
/// Complex numbers are passed as `(re, im)` pairs.
pub fn extract_params(lambda0: (f64, f64), lambda_p: (f64, f64), a_prime: (f64, f64)) -> Result<(f64, f64)> {
    const TOL: f64 = 1e-12;
    let (r0, i0) = lambda0;
    let (rp, ip) = lambda_p;
    let n0 = r0 * r0 + i0 * i0;
    if n0 == 0.0 {
        return Err(Error::Domain("resonant multiplier is zero".into()));
    }
    // w = λ_p / λ₀
    let wr = (rp * r0 + ip * i0) / n0;
    let wi = (ip * r0 - rp * i0) / n0;
    // i log w = i ln|w| − arg w
    let delta = -wi.atan2(wr);
    let delta_im = 0.5 * (wr * wr + wi * wi).ln();
    let np = rp * rp + ip * ip;
    if np == 0.0 {
        return Err(Error::Domain("multiplier is zero".into()));
    }
    // i a′ / λ_p
    let (ar, ai) = a_prime;
    let qr = (ar * rp + ai * ip) / np;
    let qi = (ai * rp - ar * ip) / np;
    let nu = -qi;
    let nu_im = qr;
    if delta_im.abs() > TOL || nu_im.abs() > TOL {
        return Err(Error::NotAreaPreserving(format!(
            "parameters are not real: δ has imaginary part {delta_im:e}, ν has imaginary part {nu_im:e}"
        )));
    }
    Ok((delta, nu))
}

/// Exact version of [`extract_params`] for `ν` when `a(zz̄)` is given relative
/// to `λ_p` (so `a_p′(0)/λ_p` is the rational `a_rel′(0)`).
pub fn extract_nu_exact(a_rel_prime: &ComplexRational) -> Result<Rational> {
    if !a_rel_prime.re.is_zero() {
        return Err(Error::NotAreaPreserving(format!(
            "a'(0)/λ = {a_rel_prime} is not purely imaginary"
        )));
    }
    Ok(-a_rel_prime.im.clone())
}

/// A resonant map `z ↦ λ (a(zz̄) z + b(zz̄) z̄^{n−1})`, with `λ = e^{2πi m/n}`
/// and the rational coefficients of `a`, `b` stored relative to `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrenormalMap {
    pub n: u32,
    pub m: u32,
    pub a_coeffs: Vec<ComplexRational>,
    pub b_coeffs: Vec<ComplexRational>,
}

impl PrenormalMap {
    /// The series `G = λ⁻¹ N` in `PolyOrder` with the given truncation.
    pub fn relative_series(&self, truncation: i64) -> Result<ResonantSeries> {
        let mut g = ResonantSeries::new(self.n, GradingScheme::PolyOrder, truncation)?;
        for (i, c) in self.a_coeffs.iter().enumerate() {
            g.add_term(MonomialKey::new(i as u32 + 1, i as u32), c);
        }
        for (i, c) in self.b_coeffs.iter().enumerate() {
            g.add_term(MonomialKey::new(i as u32, i as u32 + self.n - 1), c);
        }
        Ok(g)
    }

    /// `a(0)⁻¹ a′(0)` must be purely imaginary for an area-preserving map.
    pub fn check_twist_coefficient(&self) -> Result<()> {
        let a0 = self.a_coeffs.first().cloned().unwrap_or_default();
        if a0 != ComplexRational::one() {
            return Err(Error::Domain(format!("a(0) must equal the multiplier, got relative value {a0}")));
        }
        if let Some(a1) = self.a_coeffs.get(1) {
            if !a1.re.is_zero() {
                return Err(Error::NotAreaPreserving(format!("a(0)^-1 a'(0) = {a1} is not imaginary")));
            }
        }
        Ok(())
    }

    /// Rotation angle `α₀ = 2π m / n`.
    pub fn alpha0(&self) -> f64 {
        2.0 * PI * self.m as f64 / self.n as f64
    }
}

/// `z` as a series.
fn coordinate(n: u32, truncation: i64) -> Result<ResonantSeries> {
    let mut z = ResonantSeries::new(n, GradingScheme::PolyOrder, truncation)?;
    z.add_term(MonomialKey::new(1, 0), &ComplexRational::one());
    Ok(z)
}

/// `z ∘ Φ¹_H = exp(L_H) z`: the time-one map of `H` as a coordinate series.
pub fn flow_map(h: &ResonantSeries, truncation: i64) -> Result<ResonantSeries> {
    let z = coordinate(h.n(), truncation)?;
    let h = h.reinterpret(GradingScheme::PolyOrder, truncation + 1);
    lie_transform(&z, &h, MonomialKey::default())
}

/// Finds the resonant real Hamiltonian `H` with `λ⁻¹ N = exp(L_H) z`.
///
/// `g` is the map relative to the rotation (`G = λ⁻¹ N`), in `PolyOrder`;
/// the result carries truncation `truncation + 1`.
pub fn interpolate(g: &ResonantSeries, truncation: i64) -> Result<ResonantSeries> {
    let n = g.n();
    let t = truncation.min(g.truncation());
    let g = g.reinterpret(GradingScheme::PolyOrder, t);
    for (key, c) in g.terms() {
        if key.m != 0 || key.j != 0 {
            return Err(Error::Domain(format!("map term {key} depends on parameters")));
        }
        if (key.k as i64 - key.l as i64 - 1).rem_euclid(n as i64) != 0 {
            return Err(Error::Domain(format!(
                "map term {c} {key} does not commute with the rotation by 2π/{n}"
            )));
        }
        if key.degree() == 1 && *key != MonomialKey::new(1, 0) {
            return Err(Error::Domain(format!("linear part contains {key}")));
        }
    }
    if g.coeff(MonomialKey::new(1, 0)) != ComplexRational::one() {
        return Err(Error::Domain("map is not tangent to the rotation at the origin".into()));
    }
    let mut h = ResonantSeries::new(n, GradingScheme::PolyOrder, t + 1)?;
    for d in 2..=t {
        let current = flow_map(&h, t)?;
        let residual = g.sub(&current)?.project_int_grade(d);
        if residual.is_empty() {
            continue;
        }
        // −2i ∂_z̄ (h z^k z̄^{l+1}) = −2i (l+1) h z^k z̄^l
        let mut update = h.empty_like();
        let mut pinned: BTreeMap<MonomialKey, ComplexRational> = BTreeMap::new();
        for (key, c) in residual.terms() {
            let hk = MonomialKey::new(key.k, key.l + 1);
            let coeff = c / &ComplexRational::from_ints(0, -2 * (key.l as i64 + 1));
            pinned.insert(hk, coeff);
        }
        for (key, c) in &pinned {
            let partner = key.swapped();
            match pinned.get(&partner) {
                Some(pc) if *pc != c.conj() => {
                    return Err(Error::NotAreaPreserving(format!(
                        "no real Hamiltonian reproduces degree {d}: coefficients of {key} and {partner} are {c} and {pc}"
                    )));
                }
                _ => {}
            }
            update.add_term(*key, c);
            if !pinned.contains_key(&partner) {
                // Terms without z̄ are fixed by realness.
                if partner.l != 0 {
                    return Err(Error::NotAreaPreserving(format!(
                        "degree {d} term {partner} is missing its conjugate partner"
                    )));
                }
                update.add_term(partner, &c.conj());
            }
        }
        h = h.add(&update)?;
    }
    let check = flow_map(&h, t)?;
    if check != g {
        return Err(Error::NotAreaPreserving(
            "the map is not the time-one map of a real Hamiltonian to the requested order".into(),
        ));
    }
    Ok(h)
}

/// Substitutes `z ↦ G(z, z̄)`, `z̄ ↦ conj G` into `p`.
pub fn compose(p: &ResonantSeries, g: &ResonantSeries) -> Result<ResonantSeries> {
    let t = p.truncation().min(g.truncation());
    let g = g.reinterpret(GradingScheme::PolyOrder, t);
    let gbar = g.real_conjugate();
    let mut out = g.empty_like();
    let max_k = p.terms().map(|(k, _)| k.k.max(k.l)).max().unwrap_or(0);
    let mut one = ResonantSeries::new(g.n(), GradingScheme::PolyOrder, t)?;
    one.add_term(MonomialKey::default(), &ComplexRational::one());
    let mut gp = vec![one.clone()];
    let mut gbp = vec![one];
    for i in 1..=max_k as usize {
        gp.push(gp[i - 1].mul(&g)?);
        gbp.push(gbp[i - 1].mul(&gbar)?);
    }
    for (key, c) in p.terms() {
        let term = gp[key.k as usize].mul(&gbp[key.l as usize])?.scale(c);
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Conjugates the map `N = λ G` by the time-one map of a resonant `χ`:
/// returns `G′` with `Φ_χ⁻¹ ∘ N ∘ Φ_χ = λ G′`.
pub fn conjugate_map(g: &ResonantSeries, chi: &ResonantSeries) -> Result<ResonantSeries> {
    let t = g.truncation();
    let chi = chi.reinterpret(GradingScheme::PolyOrder, t + 1);
    let z = coordinate(g.n(), t)?;
    // z ∘ Φ_χ⁻¹
    let inv = lie_transform(&z, &chi.neg(), MonomialKey::default())?;
    // Rotation by λ commutes with every term of `inv`, so (inv ∘ N) = λ (inv ∘ G).
    let inner = compose(&inv, g)?;
    lie_transform(&inner, &chi, MonomialKey::default())
}

/// Whether a simplified normal form is autonomous or a two-parameter family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Autonomous,
    Family,
}

/// Index of a normal-form coefficient: power `k` of `zz̄` and parameter powers.
pub type CoeffIndex = (u32, u32, u32);

/// The unique coefficients `a_{kmj}`, `b_{kmj}` of the simplified normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplifiedNormalForm {
    pub n: u32,
    pub kind: Kind,
    pub variant: Variant,
    /// Rotation angle in `[0, 2π/n)` applied to make `b₀` positive.
    pub gauge: f64,
    pub scheme: GradingScheme,
    pub truncation: i64,
    pub a: BTreeMap<CoeffIndex, Rational>,
    pub b: BTreeMap<CoeffIndex, Rational>,
}

impl SimplifiedNormalForm {
    pub fn a0(&self) -> Rational {
        self.a.get(&(0, 0, 0)).cloned().unwrap_or_default()
    }

    pub fn b0(&self) -> Rational {
        self.b.get(&(0, 0, 0)).cloned().unwrap_or_default()
    }

    /// Rebuilds `h̃` (including `δzz̄ + ν(zz̄)²` for families).
    pub fn to_series(&self) -> Result<ResonantSeries> {
        let mut h = ResonantSeries::new(self.n, self.scheme, self.truncation)?;
        if self.kind == Kind::Family {
            h.add_term(MonomialKey::with_params(1, 1, 1, 0), &ComplexRational::one());
            h.add_term(MonomialKey::with_params(2, 2, 0, 1), &ComplexRational::one());
        }
        for (&(k, m, j), v) in &self.a {
            let key = a_monomial(self.n, k);
            h.add_term(MonomialKey::with_params(key.k, key.l, m, j), &ComplexRational::real(v.clone()));
        }
        for (&(k, m, j), v) in &self.b {
            let key = b_monomial(self.n, k);
            h.add_real_pair(MonomialKey::with_params(key.k, key.l, m, j), &ComplexRational::real(v.clone()));
        }
        Ok(h)
    }

    pub fn to_file(&self) -> NormalFormFile {
        let rows = |m: &BTreeMap<CoeffIndex, Rational>| {
            m.iter()
                .map(|(&(k, mm, j), v)| CoeffRecord { k, m: mm, j, value: format_rational(v) })
                .collect()
        };
        NormalFormFile {
            n: self.n,
            kind: self.kind,
            variant: self.variant.name().to_string(),
            gauge: self.gauge,
            scheme: self.scheme.name().to_string(),
            truncation: self.truncation,
            a: rows(&self.a),
            b: rows(&self.b),
        }
    }

    pub fn from_file(f: &NormalFormFile) -> Result<Self> {
        let variant = match f.variant.as_str() {
            "standard" => Variant::Standard,
            "alt-n6" => Variant::AltN6,
            other => return Err(Error::Parse(format!("unknown variant {other:?}"))),
        };
        let rows = |v: &[CoeffRecord]| -> Result<BTreeMap<CoeffIndex, Rational>> {
            v.iter().map(|r| Ok(((r.k, r.m, r.j), parse_rational(&r.value)?))).collect()
        };
        Ok(Self {
            n: f.n,
            kind: f.kind,
            variant,
            gauge: f.gauge,
            scheme: GradingScheme::from_name(&f.scheme)?,
            truncation: f.truncation,
            a: rows(&f.a)?,
            b: rows(&f.b)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("normal form serialization")
    }

    /// Plain-text coefficient table.
    pub fn table(&self) -> String {
        let mut s = format!(
            "n = {}  kind = {:?}  variant = {}  truncation = {} ({})  gauge = {:.17}\n",
            self.n,
            self.kind,
            self.variant.name(),
            self.truncation,
            self.scheme.name(),
            self.gauge
        );
        for (name, map) in [("a", &self.a), ("b", &self.b)] {
            for (&(k, m, j), v) in map {
                if self.kind == Kind::Family {
                    s.push_str(&format!("{name}[{k},{m},{j}] = {}\n", format_rational(v)));
                } else {
                    s.push_str(&format!("{name}[{k}] = {}\n", format_rational(v)));
                }
            }
        }
        s
    }
}

/// JSON representation of a normal form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormFile {
    pub n: u32,
    pub kind: Kind,
    pub variant: String,
    pub gauge: f64,
    pub scheme: String,
    pub truncation: i64,
    pub a: Vec<CoeffRecord>,
    pub b: Vec<CoeffRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffRecord {
    pub k: u32,
    pub m: u32,
    pub j: u32,
    pub value: String,
}

/// Outcome of one shape check.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeCheck {
    pub name: String,
    pub passed: bool,
    pub offending: Vec<String>,
}

/// Pass/fail report of [`validate_shape`].
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeReport {
    pub checks: Vec<ShapeCheck>,
}

impl ShapeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&ShapeCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Checks the index constraints and the normalization `b₀ > 0`.
pub fn validate_shape(nf: &SimplifiedNormalForm) -> ShapeReport {
    let fmt = |&(k, m, j): &CoeffIndex| {
        if nf.kind == Kind::Family {
            format!("(k={k},m={m},j={j})")
        } else {
            format!("(k={k})")
        }
    };
    let bad_a: Vec<String> = nf
        .a
        .iter()
        .filter(|(idx, v)| !v.is_zero() && !a_allowed(nf.n, idx.0, nf.variant))
        .map(|(idx, _)| fmt(idx))
        .collect();
    let bad_b: Vec<String> = nf
        .b
        .iter()
        .filter(|(idx, v)| !v.is_zero() && !b_allowed(nf.n, idx.0, nf.variant))
        .map(|(idx, _)| fmt(idx))
        .collect();
    let b0 = nf.b0();
    let mut checks = vec![
        ShapeCheck { name: "a-index constraint".into(), passed: bad_a.is_empty(), offending: bad_a },
        ShapeCheck { name: "b-index constraint".into(), passed: bad_b.is_empty(), offending: bad_b },
        ShapeCheck {
            name: "normalization b0 > 0".into(),
            passed: b0.is_positive(),
            offending: if b0.is_positive() { vec![] } else { vec![format!("b0 = {}", format_rational(&b0))] },
        },
    ];
    if nf.variant == Variant::AltN6 && nf.n != 6 {
        checks.push(ShapeCheck {
            name: "variant".into(),
            passed: false,
            offending: vec![format!("alt-n6 variant used with n = {}", nf.n)],
        });
    }
    ShapeReport { checks }
}

fn check_input(h: &ResonantSeries, family: bool) -> Result<()> {
    if !h.is_resonant() {
        let bad = h.terms().find(|(k, _)| !k.is_resonant(h.n())).map(|(k, _)| *k).unwrap();
        return Err(Error::Domain(format!("term {bad} is not resonant for n = {}", h.n())));
    }
    if !h.is_real() {
        return Err(Error::Domain("Hamiltonian is not real-valued".into()));
    }
    for (key, _) in h.terms() {
        if !family && (key.m != 0 || key.j != 0) {
            return Err(Error::Domain(format!("autonomous input contains parameter term {key}")));
        }
        if family && key.degree() < 2 {
            return Err(Error::Domain(format!("term {key} has degree below 2")));
        }
        if !family && key.degree() < 3 {
            return Err(Error::Domain(format!("term {key} has degree below 3")));
        }
    }
    Ok(())
}

/// Multiplies the coefficient of every monomial with `k − l = n s` by `u^s`.
fn apply_gauge(h: &ResonantSeries, u: &ComplexRational) -> ResonantSeries {
    let n = h.n() as i64;
    let mut out = h.empty_like();
    let ubar = u.conj();
    for (key, c) in h.terms() {
        let s = (key.k as i64 - key.l as i64) / n;
        let f = if s >= 0 { u.pow(s as u32) } else { ubar.pow((-s) as u32) };
        out.add_term(*key, &(c * &f));
    }
    out
}

/// Unit `u` with `u · h_{n0} > 0` and the rotation angle in `[0, 2π/n)`.
fn gauge_unit(hn0: &ComplexRational, n: u32) -> Result<(ComplexRational, f64)> {
    let modulus = rational_sqrt(&hn0.norm_sqr()).ok_or_else(|| {
        Error::Domain(format!(
            "|h_n0|^2 = {} is not the square of a rational; the gauge rotation would leave exact arithmetic",
            hn0.norm_sqr()
        ))
    })?;
    let u = hn0.conj().scale(&(Rational::one() / modulus));
    let (re, im) = hn0.to_f64();
    let arg = im.atan2(re);
    let angle = (-arg).rem_euclid(2.0 * PI) / n as f64;
    let angle = if angle >= 2.0 * PI / n as f64 { 0.0 } else { angle };
    Ok((u, angle))
}

fn degeneracy_name(n: u32, variant: Variant) -> String {
    if n >= 6 && variant == Variant::Standard {
        "h_n0 = 0 or h33 = 0 (Lambda is singular)".into()
    } else {
        "h_n0 = 0 (Lambda is singular)".into()
    }
}

fn check_hypotheses(h: &ResonantSeries, variant: Variant, family: bool) -> Result<()> {
    let n = h.n();
    if variant == Variant::AltN6 && n != 6 {
        return Err(Error::Domain(format!("the alt-n6 variant applies to n = 6 only, got n = {n}")));
    }
    let p = |k, l| MonomialKey::new(k, l);
    if h.coeff(p(n, 0)).is_zero() {
        return Err(Error::Degeneracy(
            "h_n0 = 0: co-dimension three degeneracy, out of scope".into(),
        ));
    }
    if !family && n >= 4 && !h.coeff(p(2, 2)).is_zero() {
        return Err(Error::Degeneracy(
            "h22 != 0: non-degenerate twist, the classical resonant normal form applies".into(),
        ));
    }
    if n >= 6 && variant == Variant::Standard && h.coeff(p(3, 3)).is_zero() {
        let hint = if n == 6 { "; the alt-n6 variant does not need it" } else { "" };
        return Err(Error::Degeneracy(format!("h33 = 0: the standard normal form requires h33 != 0{hint}")));
    }
    if family {
        for (key, c) in h.terms() {
            if key.k == 1 && key.l == 1 {
                let want = if key.m == 1 && key.j == 0 { ComplexRational::one() } else { ComplexRational::zero() };
                if *c != want {
                    return Err(Error::Degeneracy(format!(
                        "h11mj: coefficient of {key} is {c}; the family needs exactly delta*z*zbar"
                    )));
                }
            }
            // For n = 3 the other (z z̄)² δ^m ν^j terms lie in the image of Λ and are removed.
            if key.k == 2 && key.l == 2 && (n >= 4 || (key.m, key.j) == (0, 1)) {
                let want = if key.m == 0 && key.j == 1 { ComplexRational::one() } else { ComplexRational::zero() };
                if *c != want {
                    return Err(Error::Degeneracy(format!(
                        "h22mj: coefficient of {key} is {c}; the family needs exactly nu*(z*zbar)^2"
                    )));
                }
            }
        }
        if h.coeff(MonomialKey::with_params(1, 1, 1, 0)).is_zero() {
            return Err(Error::Degeneracy("the family term delta*z*zbar is missing".into()));
        }
        if h.coeff(MonomialKey::with_params(2, 2, 0, 1)).is_zero() {
            return Err(Error::Degeneracy("the family term nu*(z*zbar)^2 is missing".into()));
        }
    }
    Ok(())
}

fn named(e: Error, n: u32, variant: Variant) -> Error {
    match e {
        Error::Degeneracy(msg) if msg.contains("singular") => {
            Error::Degeneracy(format!("{}: {msg}", degeneracy_name(n, variant)))
        }
        other => other,
    }
}

/// Reads the normal-form coefficients off a fully reduced series.
fn extract(
    h: &ResonantSeries,
    family: bool,
) -> Result<(BTreeMap<CoeffIndex, Rational>, BTreeMap<CoeffIndex, Rational>)> {
    let n = h.n();
    let off = a_offset(n);
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    for (key, c) in h.terms() {
        if family
            && ((key.k, key.l, key.m, key.j) == (1, 1, 1, 0) || (key.k, key.l, key.m, key.j) == (2, 2, 0, 1))
            && *c == ComplexRational::one()
        {
            continue;
        }
        if key.k == key.l && key.k >= off && c.im.is_zero() {
            a.insert((key.k - off, key.m, key.j), c.re.clone());
        } else if key.k == key.l + n && c.im.is_zero() {
            b.insert((key.l, key.m, key.j), c.re.clone());
        } else if key.l == key.k + n && c.im.is_zero() {
            continue;
        } else {
            return Err(Error::Contract(format!("term {c} {key} survived the reduction")));
        }
    }
    Ok((a, b))
}

/// Reduces a real resonant Hamiltonian (lowest degree ≥ 3, `h₂₂ = 0`,
/// `h_{n0} ≠ 0`, and `h₃₃ ≠ 0` for `n ≥ 6` in the standard variant) to its
/// unique simplified normal form up to `truncation` in the natural grading.
pub fn simplify_autonomous(h: &ResonantSeries, truncation: i64, variant: Variant) -> Result<SimplifiedNormalForm> {
    let n = h.n();
    check_input(h, false)?;
    check_hypotheses(h, variant, false)?;
    let scheme = GradingScheme::autonomous_for(n);
    let mut h = h.regrade(scheme).truncate(truncation);
    let t = h.truncation();
    let (u, gauge) = gauge_unit(&h.coeff(MonomialKey::new(n, 0)), n)?;
    h = apply_gauge(&h, &u);

    let lead_key = MonomialKey::new(n, 0);
    let g0 = scheme.grade(lead_key, n).to_integer();
    let a0 = crate::homology::band_monomial(n, scheme, g0, 0)
        .map(|k| h.coeff(k).re)
        .unwrap_or_default();
    let b0 = h.coeff(lead_key).re;
    let op = HomologicalOperator::new(n, scheme, a0, b0, variant)?;
    let s = op.shift;
    let mut p = g0 - s + 1;
    while p + s <= t {
        let target = h.project_int_grade(p + s);
        let sol = op.solve(p, &target).map_err(|e| named(e, n, variant))?;
        // Λχ + r = target, so the generator −χ leaves exactly r at this grade.
        if !sol.chi.is_empty() {
            h = lie_transform(&h, &sol.chi.neg().reinterpret(scheme, t), MonomialKey::default())?;
        }
        let reduced = h.project_int_grade(p + s);
        if reduced != sol.residual.reinterpret(scheme, t) {
            return Err(Error::Contract(format!("grade {} was not reduced to its residual", p + s)));
        }
        p += 1;
    }
    let (a, b) = extract(&h, false)?;
    Ok(SimplifiedNormalForm { n, kind: Kind::Autonomous, variant, gauge, scheme, truncation: t, a, b })
}

/// Parameter weight of `δ^m ν^j` in the family grading.
fn param_weight(scheme: GradingScheme, m: u32, j: u32) -> i64 {
    match scheme {
        GradingScheme::FamilyDeltaOrder => 3 * m as i64 + 2 * j as i64,
        _ => 4 * m as i64 + 2 * j as i64,
    }
}

/// Reduces a two-parameter family `δzz̄ + ν(zz̄)² + …` to its unique
/// simplified normal form up to `truncation` in the family grading.
pub fn simplify_family(h: &ResonantSeries, truncation: i64, variant: Variant) -> Result<SimplifiedNormalForm> {
    let n = h.n();
    check_input(h, true)?;
    check_hypotheses(h, variant, true)?;
    let scheme = GradingScheme::family_for(n);
    let base = scheme.base();
    let mut h = h.regrade(scheme).truncate(truncation);
    let t = h.truncation();
    let (u, gauge) = gauge_unit(&h.coeff(MonomialKey::new(n, 0)), n)?;
    h = apply_gauge(&h, &u);

    let lead_key = MonomialKey::new(n, 0);
    let g0 = base.grade(lead_key, n).to_integer();
    let a0 = crate::homology::band_monomial(n, base, g0, 0).map(|k| h.coeff(k).re).unwrap_or_default();
    let b0 = h.coeff(lead_key).re;
    let op = HomologicalOperator::new(n, base, a0, b0, variant)?;
    let s = op.shift;
    let protected = [MonomialKey::with_params(1, 1, 1, 0), MonomialKey::with_params(2, 2, 0, 1)];
    let mut excluded = vec![MonomialKey::new(1, 1)];
    if n >= 4 {
        excluded.push(MonomialKey::new(2, 2));
    }
    for total in (g0 + 1)..=t {
        for m in 0..=(total as u32) {
            for j in 0..=(total as u32) {
                let w = param_weight(scheme, m, j);
                let q = total - w;
                let p = q - s;
                let min_p = if (m, j) == (0, 0) { g0 - s + 1 } else { 1 };
                if p < min_p {
                    continue;
                }
                let mut target = ResonantSeries::new(n, base, q)?;
                for (key, c) in h.terms() {
                    if key.m == m && key.j == j && !protected.contains(key) && base.grade(key.base(), n) == q.into()
                    {
                        target.add_term(key.base(), c);
                    }
                }
                let sol = op.solve_excluding(p, &target, &excluded).map_err(|e| named(e, n, variant))?;
                if !sol.chi.is_empty() {
                    let chi = sol.chi.neg().reinterpret(scheme, t);
                    h = lie_transform(&h, &chi, MonomialKey::with_params(0, 0, m, j))?;
                }
            }
        }
    }
    let (a, b) = extract(&h, true)?;
    Ok(SimplifiedNormalForm { n, kind: Kind::Family, variant, gauge, scheme, truncation: t, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn real(v: i64) -> ComplexRational {
        ComplexRational::from_ints(v, 0)
    }

    #[test]
    fn params_trivial_cases() {
        let l = (0.3f64.cos(), 0.3f64.sin());
        let (d, nu) = extract_params(l, l, (0.0, 0.0)).unwrap();
        assert!(d.abs() < 1e-15 && nu.abs() < 1e-15);
        // a′(0) = i λ_p gives ν = −1.
        let (_, nu) = extract_params(l, l, (-l.1, l.0)).unwrap();
        assert!((nu + 1.0).abs() < 1e-14);
        assert!(extract_params(l, (2.0 * l.0, 2.0 * l.1), (0.0, 0.0)).is_err());
    }

    #[test]
    fn normal_form_is_fixed_point_n7() {
        let mut h = ResonantSeries::new(7, GradingScheme::PolyOrder, 40).unwrap();
        h.add_term(MonomialKey::new(3, 3), &real(1));
        h.add_real_pair(MonomialKey::new(7, 0), &real(2));
        let nf = simplify_autonomous(&h, 12, Variant::Standard).unwrap();
        assert_eq!(nf.a0(), rat_int(1));
        assert_eq!(nf.b0(), rat_int(2));
        assert_eq!(nf.a.len(), 1);
        assert_eq!(nf.b.len(), 1);
        assert!(validate_shape(&nf).passed());
    }

    #[test]
    fn gauge_makes_b0_positive() {
        let mut h = ResonantSeries::new(5, GradingScheme::PolyOrder, 12).unwrap();
        h.add_real_pair(MonomialKey::new(5, 0), &ComplexRational::new(rat(3, 5), rat(-4, 5)));
        h.add_term(MonomialKey::new(3, 3), &real(1));
        let nf = simplify_autonomous(&h, 12, Variant::Standard).unwrap();
        assert_eq!(nf.b0(), rat_int(1));
        assert!(nf.gauge > 0.0 && nf.gauge < 2.0 * PI / 5.0);
    }

    #[test]
    fn hypotheses_are_named() {
        let mut h = ResonantSeries::new(7, GradingScheme::PolyOrder, 20).unwrap();
        h.add_term(MonomialKey::new(3, 3), &real(1));
        h.add_term(MonomialKey::new(2, 2), &real(1));
        h.add_real_pair(MonomialKey::new(7, 0), &real(1));
        let e = simplify_autonomous(&h, 12, Variant::Standard).unwrap_err();
        assert!(matches!(&e, Error::Degeneracy(m) if m.contains("h22")));
        let mut h = ResonantSeries::new(7, GradingScheme::PolyOrder, 20).unwrap();
        h.add_term(MonomialKey::new(3, 3), &real(1));
        let e = simplify_autonomous(&h, 12, Variant::Standard).unwrap_err();
        assert!(matches!(&e, Error::Degeneracy(m) if m.contains("h_n0")));
    }

    #[test]
    fn shape_report_names_offending_index() {
        let mut nf = SimplifiedNormalForm {
            n: 5,
            kind: Kind::Autonomous,
            variant: Variant::Standard,
            gauge: 0.0,
            scheme: GradingScheme::PolyOrder,
            truncation: 12,
            a: BTreeMap::new(),
            b: BTreeMap::new(),
        };
        nf.b.insert((0, 0, 0), rat_int(1));
        assert!(validate_shape(&nf).passed());
        nf.a.insert((1, 0, 0), rat_int(3));
        let r = validate_shape(&nf);
        assert!(!r.passed());
        assert_eq!(r.failures()[0].offending, vec!["(k=1)".to_string()]);
        nf.a.clear();
        nf.b.insert((0, 0, 0), rat_int(-1));
        assert!(!validate_shape(&nf).passed());
    }

    #[test]
    fn interpolation_of_rotation_is_zero() {
        let g = coordinate(5, 8).unwrap();
        assert!(interpolate(&g, 8).unwrap().is_empty());
    }
}
