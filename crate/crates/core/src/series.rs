//! Sparse truncated power series in `z`, `z̄` and the unfolding parameters
//! `δ`, `ν`, with exact Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, ComplexRational, Rational};

/// Exact grade value. Grades of non-resonant monomials may be fractional.
pub type Grade = Ratio<i64>;

/// Exponents of `z^k z̄^l δ^m ν^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MonomialKey {
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub j: u32,
}

impl MonomialKey {
    pub const fn new(k: u32, l: u32) -> Self {
        Self { k, l, m: 0, j: 0 }
    }

    pub const fn with_params(k: u32, l: u32, m: u32, j: u32) -> Self {
        Self { k, l, m, j }
    }

    /// The monomial with `z` and `z̄` exchanged.
    pub const fn swapped(self) -> Self {
        Self { k: self.l, l: self.k, m: self.m, j: self.j }
    }

    pub fn is_resonant(&self, n: u32) -> bool {
        (self.k as i64 - self.l as i64).rem_euclid(n as i64) == 0
    }

    pub fn degree(&self) -> u32 {
        self.k + self.l
    }

    pub fn times(self, o: MonomialKey) -> MonomialKey {
        MonomialKey { k: self.k + o.k, l: self.l + o.l, m: self.m + o.m, j: self.j + o.j }
    }

    /// Parameter-free part `z^k z̄^l`.
    pub fn base(self) -> MonomialKey {
        MonomialKey::new(self.k, self.l)
    }
}

impl fmt::Display for MonomialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z^{} zb^{}", self.k, self.l)?;
        if self.m > 0 {
            write!(f, " d^{}", self.m)?;
        }
        if self.j > 0 {
            write!(f, " nu^{}", self.j)?;
        }
        Ok(())
    }
}

/// Filtration used to truncate and to split a series into homogeneous parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GradingScheme {
    /// `k + l`.
    PolyOrder,
    /// `(k + l) / 2`; natural for `n = 4, 6` where every resonant monomial has even degree.
    HalfOrder,
    /// `3|k − l|/n + min(k, l)`; makes `a₀(zz̄)³ + b₀(zⁿ + z̄ⁿ)` homogeneous for `n ≥ 7`.
    DeltaOrder,
    /// Delta order of the `z`-part plus `3m + 2j`.
    FamilyDeltaOrder,
    /// `k + l + 4m + 2j`.
    FamilyOrder,
}

impl GradingScheme {
    pub fn name(self) -> &'static str {
        match self {
            GradingScheme::PolyOrder => "PolyOrder",
            GradingScheme::HalfOrder => "HalfOrder",
            GradingScheme::DeltaOrder => "DeltaOrder",
            GradingScheme::FamilyDeltaOrder => "FamilyDeltaOrder",
            GradingScheme::FamilyOrder => "FamilyOrder",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "PolyOrder" => GradingScheme::PolyOrder,
            "HalfOrder" => GradingScheme::HalfOrder,
            "DeltaOrder" => GradingScheme::DeltaOrder,
            "FamilyDeltaOrder" => GradingScheme::FamilyDeltaOrder,
            "FamilyOrder" => GradingScheme::FamilyOrder,
            other => return Err(Error::Parse(format!("unknown grading scheme {other:?}"))),
        })
    }

    /// Grading used by the autonomous reduction for resonance order `n`.
    pub fn autonomous_for(n: u32) -> Self {
        match n {
            3 | 5 => GradingScheme::PolyOrder,
            4 | 6 => GradingScheme::HalfOrder,
            _ => GradingScheme::DeltaOrder,
        }
    }

    /// Grading used by the family reduction for resonance order `n`.
    pub fn family_for(n: u32) -> Self {
        if n >= 6 {
            GradingScheme::FamilyDeltaOrder
        } else {
            GradingScheme::FamilyOrder
        }
    }

    pub fn is_family(self) -> bool {
        matches!(self, GradingScheme::FamilyDeltaOrder | GradingScheme::FamilyOrder)
    }

    /// Lower bound on `grade(f) + grade(g) − grade({f, g})` for monomials.
    pub fn bracket_drop(self) -> i64 {
        match self {
            GradingScheme::PolyOrder | GradingScheme::FamilyOrder => 2,
            _ => 1,
        }
    }

    pub fn grade(self, key: MonomialKey, n: u32) -> Grade {
        let k = key.k as i64;
        let l = key.l as i64;
        let delta = || Grade::new(3 * (k - l).abs(), n as i64) + Grade::from_integer(k.min(l));
        match self {
            GradingScheme::PolyOrder => Grade::from_integer(k + l),
            GradingScheme::HalfOrder => Grade::new(k + l, 2),
            GradingScheme::DeltaOrder => delta(),
            GradingScheme::FamilyDeltaOrder => {
                delta() + Grade::from_integer(3 * key.m as i64 + 2 * key.j as i64)
            }
            GradingScheme::FamilyOrder => {
                Grade::from_integer(k + l + 4 * key.m as i64 + 2 * key.j as i64)
            }
        }
    }
}

/// Alternative closed form `(k+l)/2 − (n−6)|k−l|/(2n)` of the delta order.
pub fn delta_order_alt(k: u32, l: u32, n: u32) -> Grade {
    let (k, l, n) = (k as i64, l as i64, n as i64);
    Grade::new(k + l, 2) - Grade::new((n - 6) * (k - l).abs(), 2 * n)
}

/// A truncated formal series with a resonance order attached.
#[derive(Clone, PartialEq, Eq)]
pub struct ResonantSeries {
    n: u32,
    scheme: GradingScheme,
    truncation: i64,
    terms: BTreeMap<MonomialKey, ComplexRational>,
}

impl fmt::Debug for ResonantSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResonantSeries(n={}, {:?}, trunc={}) [", self.n, self.scheme, self.truncation)?;
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c} {k}")?;
        }
        write!(f, "]")
    }
}

impl ResonantSeries {
    pub fn new(n: u32, scheme: GradingScheme, truncation: i64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("resonance order must be at least 3, got {n}")));
        }
        Ok(Self { n, scheme, truncation, terms: BTreeMap::new() })
    }

    /// An empty series with the same structure as `self`.
    pub fn empty_like(&self) -> Self {
        Self { n: self.n, scheme: self.scheme, truncation: self.truncation, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(n: u32, scheme: GradingScheme, truncation: i64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MonomialKey, ComplexRational)>,
    {
        let mut s = Self::new(n, scheme, truncation)?;
        for (k, c) in terms {
            s.add_term(k, &c);
        }
        Ok(s)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn scheme(&self) -> GradingScheme {
        self.scheme
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &ComplexRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: MonomialKey) -> ComplexRational {
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    pub fn grade_of(&self, key: MonomialKey) -> Grade {
        self.scheme.grade(key, self.n)
    }

    pub fn within_truncation(&self, key: MonomialKey) -> bool {
        self.grade_of(key) <= Grade::from_integer(self.truncation)
    }

    /// Adds `c·key`; terms beyond the truncation are discarded.
    pub fn add_term(&mut self, key: MonomialKey, c: &ComplexRational) {
        if c.is_zero() || !self.within_truncation(key) {
            return;
        }
        let slot = self.terms.entry(key).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Adds `c·key + conj(c)·swapped(key)`, the real-valued combination.
    pub fn add_real_pair(&mut self, key: MonomialKey, c: &ComplexRational) {
        if key.k == key.l {
            self.add_term(key, &ComplexRational::real(c.re.clone()));
        } else {
            self.add_term(key, c);
            self.add_term(key.swapped(), &c.conj());
        }
    }

    pub fn min_grade(&self) -> Option<Grade> {
        self.terms.keys().map(|&k| self.grade_of(k)).min()
    }

    pub fn max_grade(&self) -> Option<Grade> {
        self.terms.keys().map(|&k| self.grade_of(k)).max()
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::Structure(format!("resonance orders differ: {} vs {}", self.n, o.n)));
        }
        if self.scheme != o.scheme {
            return Err(Error::Structure(format!(
                "grading schemes differ: {} vs {}",
                self.scheme.name(),
                o.scheme.name()
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let mut out = self.empty_like();
        out.truncation = self.truncation.min(o.truncation);
        for (k, c) in self.terms.iter().chain(o.terms.iter()) {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, s: &ComplexRational) -> Self {
        let mut out = self.empty_like();
        if s.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            out.terms.insert(*k, c * s);
        }
        out
    }

    pub fn scale_rational(&self, s: &Rational) -> Self {
        self.scale(&ComplexRational::real(s.clone()))
    }

    /// Cauchy product, truncated at the smaller truncation.
    ///
    /// Valid for every scheme here since monomial grades are superadditive.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let mut out = self.empty_like();
        out.truncation = self.truncation.min(o.truncation);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let key = ka.times(*kb);
                if out.within_truncation(key) {
                    out.add_term(key, &(ca * cb));
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by a single monomial. The truncation grows by the monomial's grade.
    pub fn mul_monomial(&self, key: MonomialKey) -> Self {
        let shift = self.grade_of(key);
        let mut out = self.empty_like();
        out.truncation = (Grade::from_integer(self.truncation) + shift).floor().to_integer();
        for (k, c) in &self.terms {
            out.add_term(k.times(key), c);
        }
        out
    }

    /// Lowers the truncation (never raises it).
    pub fn truncate(&self, t: i64) -> Self {
        let mut out = self.empty_like();
        out.truncation = self.truncation.min(t);
        for (k, c) in &self.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn with_truncation_unchecked(mut self, t: i64) -> Self {
        self.truncation = t;
        self
    }

    /// Sum of the terms of exact grade `p`.
    pub fn project_grade(&self, p: Grade) -> Self {
        self.filter(|k| self.grade_of(k) == p)
    }

    pub fn project_int_grade(&self, p: i64) -> Self {
        self.project_grade(Grade::from_integer(p))
    }

    pub fn filter<F: Fn(MonomialKey) -> bool>(&self, keep: F) -> Self {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            if keep(*k) {
                out.terms.insert(*k, c.clone());
            }
        }
        out
    }

    pub fn is_resonant(&self) -> bool {
        self.terms.keys().all(|k| k.is_resonant(self.n))
    }

    /// `h_{klmj} = conj(h_{lkmj})` for every stored term.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(k, c)| self.coeff(k.swapped()) == c.conj())
    }

    /// The series obtained by conjugating every coefficient and swapping `z`, `z̄`.
    pub fn real_conjugate(&self) -> Self {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            out.terms.insert(k.swapped(), c.conj());
        }
        out
    }

    /// Re-expresses the series in another grading, keeping only the grades that
    /// are completely determined by the known terms.
    pub fn regrade(&self, scheme: GradingScheme) -> Self {
        if scheme == self.scheme {
            return self.clone();
        }
        let old = Grade::from_integer(self.truncation);
        // The new truncation is one below the smallest new grade carried by a
        // monomial that was beyond the old truncation.
        let bound = (4 * self.truncation.max(0) as u32 + 4 * self.n + 8).min(400);
        let pmax = if scheme.is_family() || self.scheme.is_family() {
            self.truncation.max(0) as u32 + 1
        } else {
            0
        };
        let mut cut: Option<Grade> = None;
        for deg in 0..=bound {
            for k in 0..=deg {
                let l = deg - k;
                if !MonomialKey::new(k, l).is_resonant(self.n) {
                    continue;
                }
                for m in 0..=pmax {
                    for j in 0..=pmax {
                        let key = MonomialKey::with_params(k, l, m, j);
                        if self.scheme.grade(key, self.n) > old {
                            let g = scheme.grade(key, self.n);
                            cut = Some(cut.map_or(g, |c: Grade| c.min(g)));
                        }
                    }
                }
            }
        }
        let t = match cut {
            Some(c) => c.ceil().to_integer() - 1,
            None => self.truncation,
        };
        let mut out = Self { n: self.n, scheme, truncation: t, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.add_term(*k, c);
        }
        out
    }

    /// Relabels the scheme and truncation without touching the terms.
    pub fn reinterpret(&self, scheme: GradingScheme, truncation: i64) -> Self {
        let mut out = Self { n: self.n, scheme, truncation, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.add_term(*k, c);
        }
        out
    }

    /// Numeric value at `z = √(2I) e^{iφ}`, `z̄ = √(2I) e^{−iφ}`.
    pub fn evaluate_polar(&self, action: f64, angle: f64, delta: f64, nu: f64) -> (f64, f64) {
        let r2 = 2.0 * action;
        let mut re = 0.0;
        let mut im = 0.0;
        for (key, c) in &self.terms {
            let (cr, ci) = c.to_f64();
            let radial = r2.powf((key.k + key.l) as f64 / 2.0)
                * delta.powi(key.m as i32)
                * nu.powi(key.j as i32);
            let theta = (key.k as f64 - key.l as f64) * angle;
            let (s, co) = theta.sin_cos();
            re += radial * (cr * co - ci * s);
            im += radial * (cr * s + ci * co);
        }
        (re, im)
    }

    pub fn to_file(&self) -> SeriesFile {
        SeriesFile {
            n: self.n,
            scheme: self.scheme.name().to_string(),
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TermRecord {
                    k: k.k,
                    l: k.l,
                    m: k.m,
                    j: k.j,
                    re: format_rational(&c.re),
                    im: format_rational(&c.im),
                })
                .collect(),
        }
    }

    pub fn from_file(f: &SeriesFile) -> Result<Self> {
        let scheme = GradingScheme::from_name(&f.scheme)?;
        let mut s = Self::new(f.n, scheme, f.truncation)?;
        for t in &f.terms {
            let c = ComplexRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            let key = MonomialKey::with_params(t.k, t.l, t.m, t.j);
            if !s.within_truncation(key) && !c.is_zero() {
                return Err(Error::Parse(format!("term {key} exceeds truncation {}", f.truncation)));
            }
            s.add_term(key, &c);
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("series serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: SeriesFile = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("series JSON at line {} column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_file(&f)
    }
}

/// On-disk representation of a [`ResonantSeries`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub n: u32,
    pub scheme: String,
    pub truncation: i64,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub k: u32,
    pub l: u32,
    #[serde(default)]
    pub m: u32,
    #[serde(default)]
    pub j: u32,
    pub re: String,
    pub im: String,
}

/// `(zz̄)^r`.
pub fn zzbar_power(r: u32) -> MonomialKey {
    MonomialKey::new(r, r)
}

pub fn one() -> ComplexRational {
    ComplexRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn real(v: i64) -> ComplexRational {
        ComplexRational::real(rat_int(v))
    }

    fn series(n: u32, t: i64, terms: &[((u32, u32), i64)]) -> ResonantSeries {
        ResonantSeries::from_terms(
            n,
            GradingScheme::PolyOrder,
            t,
            terms.iter().map(|&((k, l), c)| (MonomialKey::new(k, l), real(c))),
        )
        .unwrap()
    }

    #[test]
    fn add_identity_and_cancellation() {
        let h = series(4, 12, &[((4, 0), 1), ((0, 4), 1), ((2, 2), 3)]);
        let zero = ResonantSeries::new(4, GradingScheme::PolyOrder, 12).unwrap();
        assert_eq!(h.add(&zero).unwrap(), h);
        assert!(h.add(&h.neg()).unwrap().is_empty());
        let a = series(4, 12, &[((4, 0), 1)]);
        let b = series(4, 12, &[((0, 4), 1)]);
        let s = a.add(&b).unwrap();
        assert_eq!(s.coeff(MonomialKey::new(4, 0)), real(1));
        assert_eq!(s.coeff(MonomialKey::new(0, 4)), real(1));
    }

    #[test]
    fn add_rejects_mismatched_structure() {
        let a = series(4, 12, &[((4, 0), 1)]);
        let b = series(5, 12, &[((5, 0), 1)]);
        assert!(matches!(a.add(&b), Err(Error::Structure(_))));
        let c = a.reinterpret(GradingScheme::HalfOrder, 6);
        assert!(matches!(a.add(&c), Err(Error::Structure(_))));
    }

    #[test]
    fn binomial_square() {
        let h = series(3, 12, &[((3, 0), 1), ((0, 3), 1)]);
        let sq = h.mul(&h).unwrap();
        assert_eq!(sq, series(3, 12, &[((6, 0), 1), ((3, 3), 2), ((0, 6), 1)]));
        let zz = series(3, 12, &[((1, 1), 1)]);
        assert_eq!(zz.mul(&zz).unwrap(), series(3, 12, &[((2, 2), 1)]));
    }

    #[test]
    fn truncation_drops_high_terms() {
        let h = series(3, 5, &[((3, 0), 1), ((0, 3), 1)]);
        assert!(h.mul(&h).unwrap().is_empty());
    }

    #[test]
    fn delta_order_formulas_agree_on_resonant_monomials() {
        for n in 7..=13 {
            for k in 0..40u32 {
                for l in 0..40u32 {
                    let key = MonomialKey::new(k, l);
                    if key.is_resonant(n) {
                        let g = GradingScheme::DeltaOrder.grade(key, n);
                        assert_eq!(g, delta_order_alt(k, l, n));
                        assert!(g.is_integer());
                    }
                }
            }
        }
    }

    #[test]
    fn delta_order_of_nonresonant_monomial_is_fractional() {
        let g = GradingScheme::DeltaOrder.grade(MonomialKey::new(5, 1), 7);
        assert_eq!(g, Grade::new(19, 7));
        let h = ResonantSeries::from_terms(
            7,
            GradingScheme::DeltaOrder,
            6,
            [(MonomialKey::new(5, 1), real(1)), (MonomialKey::new(3, 3), real(1))],
        )
        .unwrap();
        let p3 = h.project_int_grade(3);
        assert_eq!(p3.len(), 1);
    }

    #[test]
    fn projection_of_leading_part() {
        let h = ResonantSeries::from_terms(
            7,
            GradingScheme::DeltaOrder,
            6,
            [
                (MonomialKey::new(3, 3), real(2)),
                (MonomialKey::new(7, 0), real(5)),
                (MonomialKey::new(0, 7), real(5)),
            ],
        )
        .unwrap();
        assert_eq!(h.project_int_grade(3), h);
    }

    #[test]
    fn evaluate_polar_examples() {
        let zz = series(5, 12, &[((1, 1), 1)]);
        let (re, im) = zz.evaluate_polar(0.5, 1.234, 0.0, 0.0);
        assert!((re - 1.0).abs() < 1e-15 && im.abs() < 1e-15);
        let h = series(5, 12, &[((5, 0), 1), ((0, 5), 1)]);
        let (re, _) = h.evaluate_polar(0.5, 0.0, 0.0, 0.0);
        assert!((re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let mut h = ResonantSeries::new(7, GradingScheme::FamilyDeltaOrder, 10).unwrap();
        h.add_term(MonomialKey::with_params(1, 1, 1, 0), &real(1));
        h.add_real_pair(MonomialKey::new(7, 0), &ComplexRational::new(rat(3, 4), rat(-1, 9)));
        let text = h.to_json();
        let back = ResonantSeries::from_json(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_rejects_unknown_fields() {
        let text = r#"{"n":5,"scheme":"PolyOrder","truncation":8,"terms":[],"extra":1}"#;
        assert!(ResonantSeries::from_json(text).is_err());
    }

    #[test]
    fn regrade_poly_to_half() {
        let h = series(4, 9, &[((4, 0), 1), ((0, 4), 1)]);
        let g = h.regrade(GradingScheme::HalfOrder);
        assert_eq!(g.truncation(), 4);
        assert_eq!(g.len(), 2);
    }
}
