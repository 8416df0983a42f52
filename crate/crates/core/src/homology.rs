//! Graded spaces of real resonant polynomials, the homological operator
//! `Λχ = [L_χ h_lead]`, complement subspaces and the exact solver that
//! inverts `Λ` modulo its complement.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::lie_derivative;
use crate::linalg::{self, Matrix};
use crate::rational::{rat_int, ComplexRational, Rational};
use crate::series::{Grade, GradingScheme, MonomialKey, ResonantSeries};

/// Which normal-form shape the complements realize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    Standard,
    /// The alternative `n = 6` shape that does not need `h₃₃ ≠ 0`.
    AltN6,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::AltN6 => "alt-n6",
        }
    }
}

/// Offset of the `a`-series: `a_k` multiplies `(zz̄)^{offset + k}`.
pub fn a_offset(n: u32) -> u32 {
    if n == 4 {
        4
    } else {
        3
    }
}

/// Whether `a_k` may be non-zero in the simplified normal form.
pub fn a_allowed(n: u32, k: u32, variant: Variant) -> bool {
    match (n, variant) {
        (6, Variant::AltN6) => k % 6 != 5,
        (3, _) => k % 3 != 2,
        (4, _) => k % 4 != 3,
        (5, _) => k % 5 != 1,
        _ => true,
    }
}

/// Whether `b_k` may be non-zero in the simplified normal form.
pub fn b_allowed(n: u32, k: u32, variant: Variant) -> bool {
    match (n, variant) {
        (6, Variant::AltN6) => k % 6 != 2,
        (3, _) => k % 3 != 2,
        (4, _) => k % 4 != 3,
        (5, _) => k % 5 != 4,
        _ => k % 3 != 2,
    }
}

/// `z^{n+k} z̄^k`, the monomial carrying `b_k`.
pub fn b_monomial(n: u32, k: u32) -> MonomialKey {
    MonomialKey::new(n + k, k)
}

/// `(zz̄)^{offset+k}`, the monomial carrying `a_k`.
pub fn a_monomial(n: u32, k: u32) -> MonomialKey {
    let r = a_offset(n) + k;
    MonomialKey::new(r, r)
}

impl GradingScheme {
    /// Grading of the `z, z̄` part used to split a family into components.
    pub fn base(self) -> GradingScheme {
        match self {
            GradingScheme::FamilyDeltaOrder => GradingScheme::DeltaOrder,
            GradingScheme::FamilyOrder => GradingScheme::PolyOrder,
            s => s,
        }
    }
}

/// Monomial of band `j ≥ 0` (that is `k − l = n j`) with grade `p`, if any.
pub fn band_monomial(n: u32, scheme: GradingScheme, p: i64, j: u32) -> Option<MonomialKey> {
    let (n, j) = (n as i64, j as i64);
    let (k, l) = match scheme.base() {
        GradingScheme::PolyOrder => {
            if (p + n * j) % 2 != 0 {
                return None;
            }
            ((p + n * j) / 2, (p - n * j) / 2)
        }
        GradingScheme::HalfOrder => {
            if (n * j) % 2 != 0 {
                return None;
            }
            (p + n * j / 2, p - n * j / 2)
        }
        _ => (p - 3 * j + n * j, p - 3 * j),
    };
    if l < 0 || k < 0 {
        return None;
    }
    let key = MonomialKey::new(k as u32, l as u32);
    debug_assert_eq!(scheme.base().grade(key, n as u32), Grade::from_integer(p));
    Some(key)
}

fn max_band(n: u32, scheme: GradingScheme, p: i64) -> u32 {
    // Bands are contiguous in j for every scheme except parity gaps; scan a safe range.
    let mut last = 0;
    for j in 0..=(2 * p.max(0) as u32 + 2) {
        if band_monomial(n, scheme, p, j).is_some() {
            last = j;
        }
    }
    last
}

/// `Q_{m,j}` in the indexing of the natural grading for `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QBasisElement {
    pub n: u32,
    pub m: u32,
    pub j: i32,
}

impl QBasisElement {
    pub fn monomial(&self) -> Result<MonomialKey> {
        q_monomial(self.n, self.m, self.j)
    }
}

/// The monomial `Q_{m,j}` (band `j`, grade `m` in the natural grading).
pub fn q_monomial(n: u32, m: u32, j: i32) -> Result<MonomialKey> {
    if n < 3 {
        return Err(Error::Domain(format!("resonance order must be at least 3, got {n}")));
    }
    let scheme = GradingScheme::autonomous_for(n);
    let key = band_monomial(n, scheme, m as i64, j.unsigned_abs())
        .ok_or_else(|| Error::Domain(format!("Q_({m},{j}) does not exist for n = {n}")))?;
    Ok(if j < 0 { key.swapped() } else { key })
}

/// Real part or imaginary part of a band coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Re,
    Im,
}

/// One real coordinate of a graded space: `Re` or `Im` of the coefficient of
/// `key` (with `key.k ≥ key.l`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RealCoord {
    pub band: u32,
    pub part: Part,
    pub key: MonomialKey,
}

impl RealCoord {
    /// The real-valued polynomial that this coordinate measures.
    pub fn vector(&self) -> (MonomialKey, ComplexRational) {
        match self.part {
            Part::Re => (self.key, ComplexRational::one()),
            Part::Im => (self.key, ComplexRational::i()),
        }
    }

    pub fn label(&self) -> String {
        let p = match self.part {
            Part::Re => "Re",
            Part::Im => "Im",
        };
        format!("{p}[{},{}]", self.key.k, self.key.l)
    }
}

/// Real vector space of real-valued resonant polynomials of one grade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    pub n: u32,
    pub scheme: GradingScheme,
    pub p: i64,
    pub basis: Vec<QBasisElement>,
    pub coords: Vec<RealCoord>,
}

impl GradedSubspace {
    pub fn new(n: u32, scheme: GradingScheme, p: i64) -> Self {
        let mut basis = Vec::new();
        let mut coords = Vec::new();
        if p >= 0 {
            for j in 0..=max_band(n, scheme, p) {
                let Some(key) = band_monomial(n, scheme, p, j) else { continue };
                basis.push(QBasisElement { n, m: p as u32, j: j as i32 });
                if j > 0 {
                    basis.push(QBasisElement { n, m: p as u32, j: -(j as i32) });
                }
                coords.push(RealCoord { band: j, part: Part::Re, key });
                if j > 0 {
                    coords.push(RealCoord { band: j, part: Part::Im, key });
                }
            }
        }
        Self { n, scheme: scheme.base(), p, basis, coords }
    }

    pub fn real_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn index_of(&self, part: Part, key: MonomialKey) -> Option<usize> {
        self.coords.iter().position(|c| c.part == part && c.key == key)
    }

    /// Real coordinates of a real-valued element of this space.
    pub fn coords_of(&self, s: &ResonantSeries) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.coords.len()];
        for (key, c) in s.terms() {
            let base = key.base();
            if s.scheme().base().grade(base, self.n) != Grade::from_integer(self.p) {
                return Err(Error::Domain(format!(
                    "term {key} is not of grade {} under {}",
                    self.p,
                    self.scheme.name()
                )));
            }
            if key.k < key.l {
                continue;
            }
            let re = self.index_of(Part::Re, base);
            let Some(re) = re else {
                return Err(Error::Domain(format!("term {key} is not resonant")));
            };
            v[re] = c.re.clone();
            if key.k == key.l {
                if !c.im.is_zero() {
                    return Err(Error::Domain(format!("coefficient of {key} is not real")));
                }
            } else {
                let im = self.index_of(Part::Im, base).expect("imaginary coordinate");
                v[im] = c.im.clone();
            }
        }
        Ok(v)
    }

    /// The real-valued element with the given coordinates.
    pub fn from_coords(&self, x: &[Rational], target: &ResonantSeries) -> ResonantSeries {
        let mut out = target.empty_like();
        for (c, v) in self.coords.iter().zip(x) {
            if v.is_zero() {
                continue;
            }
            let (key, unit) = c.vector();
            out.add_real_pair(key, &unit.scale(v));
        }
        out
    }

    pub fn labels(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.label()).collect()
    }
}

/// Graded space in the natural autonomous grading for `n`.
pub fn space_basis(n: u32, p: i64) -> GradedSubspace {
    GradedSubspace::new(n, GradingScheme::autonomous_for(n), p)
}

/// Real coordinates (all of `Re` type) spanning the normal-form shape at
/// target grade `q` of the given base scheme.
pub fn shape_coords(n: u32, scheme: GradingScheme, q: i64, variant: Variant) -> Vec<RealCoord> {
    let space = GradedSubspace::new(n, scheme, q);
    space
        .coords
        .iter()
        .filter(|c| c.part == Part::Re)
        .filter(|c| match c.band {
            0 => {
                let r = c.key.k;
                r >= a_offset(n) && a_allowed(n, r - a_offset(n), variant)
            }
            1 => b_allowed(n, c.key.l, variant),
            _ => false,
        })
        .copied()
        .collect()
}

/// Leading part of the normal form, which defines `Λ`.
#[derive(Clone, Debug)]
pub struct HomologicalOperator {
    pub n: u32,
    /// Base grading of the `z, z̄` part.
    pub scheme: GradingScheme,
    pub lead: ResonantSeries,
    pub lead_grade: i64,
    /// Source grade `p` maps to target grade `p + shift`.
    pub shift: i64,
    pub variant: Variant,
    pub a0: Rational,
    pub b0: Rational,
}

/// Standard leading polynomial `a₀(zz̄)^r + b₀(zⁿ + z̄ⁿ)` of the natural grading.
pub fn standard_lead(n: u32, scheme: GradingScheme, a0: &Rational, b0: &Rational) -> ResonantSeries {
    let base = scheme.base();
    let g = base.grade(MonomialKey::new(n, 0), n);
    let mut lead = ResonantSeries::new(n, base, 1_000).expect("valid order");
    lead.add_real_pair(MonomialKey::new(n, 0), &ComplexRational::real(b0.clone()));
    // The a₀ term is the diagonal monomial of the same grade, if there is one.
    if g.is_integer() {
        if let Some(key) = band_monomial(n, base, g.to_integer(), 0) {
            lead.add_term(key, &ComplexRational::real(a0.clone()));
        }
    }
    lead
}

impl HomologicalOperator {
    /// `Λ` for leading coefficients `a₀`, `b₀` in the given (base) grading.
    pub fn new(n: u32, scheme: GradingScheme, a0: Rational, b0: Rational, variant: Variant) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("resonance order must be at least 3, got {n}")));
        }
        let base = scheme.base();
        let lead = standard_lead(n, base, &a0, &b0);
        let g = base.grade(MonomialKey::new(n, 0), n);
        if !g.is_integer() {
            return Err(Error::Domain(format!("z^{n} has non-integer grade under {}", base.name())));
        }
        let lead_grade = g.to_integer();
        let shift = lead_grade - base.bracket_drop();
        Ok(Self { n, scheme: base, lead, lead_grade, shift, variant, a0, b0 })
    }

    /// `Λ` of the natural autonomous grading.
    pub fn natural(n: u32, a0: Rational, b0: Rational, variant: Variant) -> Result<Self> {
        Self::new(n, GradingScheme::autonomous_for(n), a0, b0, variant)
    }

    fn homogeneous_grade(&self, chi: &ResonantSeries) -> Result<Option<i64>> {
        let mut grade = None;
        for (key, _) in chi.terms() {
            let g = self.scheme.grade(key.base(), self.n);
            if !g.is_integer() {
                return Err(Error::Domain(format!("generator term {key} has fractional grade")));
            }
            match grade {
                None => grade = Some(g.to_integer()),
                Some(p) if p == g.to_integer() => {}
                Some(p) => {
                    return Err(Error::Domain(format!(
                        "generator is not homogeneous: grades {p} and {}",
                        g.to_integer()
                    )))
                }
            }
        }
        Ok(grade)
    }

    /// `Λχ` by the generic bracket route (with projection where needed).
    pub fn apply(&self, chi: &ResonantSeries) -> Result<ResonantSeries> {
        let Some(p) = self.homogeneous_grade(chi)? else {
            return Ok(chi.empty_like().reinterpret(self.scheme, self.shift));
        };
        let t = p + self.lead_grade + 4;
        let chi_b = chi.reinterpret(self.scheme, t);
        let lead = self.lead.reinterpret(self.scheme, t);
        let d = lie_derivative(&lead, &chi_b)?;
        Ok(d.project_int_grade(p + self.shift).reinterpret(self.scheme, p + self.shift))
    }

    /// `Λχ` from the closed-form action on monomials.
    pub fn apply_explicit(&self, chi: &ResonantSeries) -> Result<ResonantSeries> {
        let Some(p) = self.homogeneous_grade(chi)? else {
            return Ok(chi.empty_like().reinterpret(self.scheme, self.shift));
        };
        let q = p + self.shift;
        let mut out = ResonantSeries::new(self.n, self.scheme, q)?;
        for (key, c) in chi.terms() {
            let sign = key.k >= key.l;
            let base = if sign { key.base() } else { key.base().swapped() };
            let j = (base.k - base.l) / self.n;
            let image = self.explicit_on_band(p, j as i32)?;
            // Λ commutes with the real structure: Λ Q_{p,−j} = conj-swap of Λ Q_{p,j}.
            let image = if sign { image } else { image.real_conjugate() };
            let params = MonomialKey::with_params(0, 0, key.m, key.j);
            for (k2, c2) in image.terms() {
                out.add_term(k2.times(params), &(c * c2));
            }
        }
        Ok(out)
    }

    /// Closed-form `Λ Q_{p,j}` for `j ≥ 0`.
    fn explicit_on_band(&self, p: i64, j: i32) -> Result<ResonantSeries> {
        let n = self.n;
        let q = p + self.shift;
        let mut out = ResonantSeries::new(n, self.scheme, q)?;
        let a0 = ComplexRational::real(self.a0.clone());
        let b0 = ComplexRational::real(self.b0.clone());
        let mut put = |band: i32, coeff: ComplexRational| {
            if coeff.is_zero() {
                return;
            }
            let key = band_monomial(n, self.scheme, q, band.unsigned_abs());
            if let Some(key) = key {
                let key = if band < 0 { key.swapped() } else { key };
                out.add_term(key, &coeff);
            }
        };
        let i = ComplexRational::i();
        let jr = rat_int(j as i64);
        let pr = rat_int(p);
        let natural = self.scheme == GradingScheme::autonomous_for(n);
        match n {
            4 if natural => {
                // 16 j i a₀ Q_{p+1,j} − 8 i b₀[(p−2j) Q_{p+1,j+1} − (p+2j) Q_{p+1,j−1}]
                put(j, (&i * &a0).scale(&(rat_int(16) * &jr)));
                put(j + 1, (&i * &b0).scale(&(rat_int(-8) * (&pr - rat_int(2) * &jr))));
                put(j - 1, (&i * &b0).scale(&(rat_int(8) * (&pr + rat_int(2) * &jr))));
            }
            6 if natural => {
                // −12 i (−3 j a₀ Q_{p+2,j} + b₀(p−3j) Q_{p+2,j+1} − b₀(p+3j) Q_{p+2,j−1})
                let m12 = ComplexRational::from_ints(0, -12);
                put(j, (&m12 * &a0).scale(&(rat_int(-3) * &jr)));
                put(j + 1, (&m12 * &b0).scale(&(&pr - rat_int(3) * &jr)));
                put(j - 1, (&m12 * &b0).scale(&(-(&pr + rat_int(3) * &jr))));
            }
            _ if n >= 7 && natural => {
                let m2n = ComplexRational::from_ints(0, -2 * n as i64);
                if j == 0 {
                    // −2 i n b₀ p (Q_{p+2,1} − Q_{p+2,−1})
                    put(1, (&m2n * &b0).scale(&pr));
                    put(-1, (&m2n * &b0).scale(&(-&pr)));
                } else {
                    // −2 i n (−3 a₀ j Q_{p+2,j} + b₀ (p−3j) Q_{p+2,j+1})
                    put(j, (&m2n * &a0).scale(&(rat_int(-3) * &jr)));
                    put(j + 1, (&m2n * &b0).scale(&(&pr - rat_int(3) * &jr)));
                }
            }
            _ => {
                // Direct differentiation of a₀(zz̄)^r + b₀(zⁿ + z̄ⁿ) against z^k z̄^l:
                // −2i[a₀ r (l−k) z^{k+r−1} z̄^{l+r−1} + n b₀ (l z^{k+n−1} z̄^{l−1} − k z^{k−1} z̄^{l+n−1})].
                let key = band_monomial(n, self.scheme, p, j as u32)
                    .ok_or_else(|| Error::Domain(format!("no band {j} at grade {p}")))?;
                let (k, l) = (key.k as i64, key.l as i64);
                let m2i = ComplexRational::from_ints(0, -2);
                let mut direct = ResonantSeries::new(n, self.scheme, q)?;
                for (lk, lc) in self.lead.terms() {
                    if lk.k == lk.l {
                        let r = lk.k as i64;
                        let c = (&m2i * lc).scale(&rat_int(r * (l - k)));
                        let key2 = MonomialKey::new((k + r - 1) as u32, (l + r - 1) as u32);
                        if (k + r - 1) >= 0 && (l + r - 1) >= 0 {
                            direct.add_term(key2, &c);
                        }
                    }
                }
                let nb = (&m2i * &b0).scale(&rat_int(n as i64));
                if l >= 1 {
                    direct.add_term(
                        MonomialKey::new((k + n as i64 - 1) as u32, (l - 1) as u32),
                        &nb.scale(&rat_int(l)),
                    );
                }
                if k >= 1 {
                    direct.add_term(
                        MonomialKey::new((k - 1) as u32, (l + n as i64 - 1) as u32),
                        &nb.scale(&rat_int(-k)),
                    );
                }
                return Ok(direct.project_int_grade(q));
            }
        }
        Ok(out)
    }

    /// Matrix of `Λ` from grade `p` to grade `p + shift` in real coordinates.
    pub fn matrix(&self, p: i64) -> Result<(Matrix, GradedSubspace, GradedSubspace)> {
        let src = GradedSubspace::new(self.n, self.scheme, p);
        let dst = GradedSubspace::new(self.n, self.scheme, p + self.shift);
        let proto = ResonantSeries::new(self.n, self.scheme, p)?;
        let mut cols = Vec::with_capacity(src.real_dim());
        for c in &src.coords {
            let (key, unit) = c.vector();
            let mut e = proto.empty_like();
            e.add_real_pair(key, &unit);
            cols.push(dst.coords_of(&self.apply(&e)?)?);
        }
        Ok((Matrix::from_columns(dst.real_dim(), &cols), src, dst))
    }

    /// `(dim source, dim target, rank Λ)` at source grade `p`.
    pub fn dimensions(&self, p: i64) -> Result<(usize, usize, usize)> {
        let (m, src, dst) = self.matrix(p)?;
        Ok((src.real_dim(), dst.real_dim(), linalg::rank(&m)))
    }

    /// Complement of `Im Λ` at target grade `p + shift`.
    pub fn complement_basis(&self, p: i64) -> Vec<RealCoord> {
        complement_basis(self.n, self.scheme, p + self.shift, self.variant)
    }

    /// Solves `Λχ + residual = target` with the residual in the complement.
    pub fn solve(&self, p: i64, target: &ResonantSeries) -> Result<HomologicalSolution> {
        self.solve_excluding(p, target, &[])
    }

    /// As [`Self::solve`], but the coordinates of the `excluded` diagonal
    /// monomials are left out of the system; the target must vanish there.
    pub fn solve_excluding(
        &self,
        p: i64,
        target: &ResonantSeries,
        excluded: &[MonomialKey],
    ) -> Result<HomologicalSolution> {
        let q = p + self.shift;
        let target = target.reinterpret(self.scheme, q);
        let (lam, src, dst) = self.matrix(p)?;
        let comp = self.complement_basis(p);
        let b_full = dst.coords_of(&target)?;
        let rows: Vec<usize> =
            (0..dst.real_dim()).filter(|&i| !excluded.contains(&dst.coords[i].key)).collect();
        for i in 0..dst.real_dim() {
            if !rows.contains(&i) && !b_full[i].is_zero() {
                return Err(Error::Degeneracy(format!(
                    "coefficient {} must vanish but is {}",
                    dst.coords[i].label(),
                    b_full[i]
                )));
            }
        }
        let ncols = src.real_dim() + comp.len();
        let mut a = Matrix::zeros(rows.len(), ncols);
        for (ri, &i) in rows.iter().enumerate() {
            for j in 0..src.real_dim() {
                a.set(ri, j, lam.get(i, j).clone());
            }
            for (cj, c) in comp.iter().enumerate() {
                if dst.coords[i] == *c {
                    a.set(ri, src.real_dim() + cj, Rational::one());
                }
            }
        }
        let mut lam_only = Matrix::zeros(rows.len(), src.real_dim());
        for ri in 0..rows.len() {
            for j in 0..src.real_dim() {
                lam_only.set(ri, j, a.get(ri, j).clone());
            }
        }
        let rank_lambda = linalg::rank(&lam_only);
        if rank_lambda + comp.len() != rows.len() || linalg::rank(&a) != rows.len() {
            return Err(Error::Degeneracy(format!(
                "homological operator is singular at grade {p} (rank {rank_lambda}, complement {}, target dimension {}); \
                 the leading coefficients violate a non-degeneracy hypothesis",
                comp.len(),
                rows.len()
            )));
        }
        let b: Vec<Rational> = rows.iter().map(|&i| b_full[i].clone()).collect();
        let sol = linalg::solve(&a, &b)?;
        let chi = src.from_coords(&sol.x[..src.real_dim()], &target.empty_like().reinterpret(self.scheme, p));
        let mut residual = target.empty_like();
        for (cj, c) in comp.iter().enumerate() {
            let v = &sol.x[src.real_dim() + cj];
            if !v.is_zero() {
                residual.add_real_pair(c.key, &ComplexRational::real(v.clone()));
            }
        }
        let free_kernel_coefficients = sol
            .free_columns
            .iter()
            .filter(|&&c| c < src.real_dim())
            .map(|&c| (c, Rational::zero()))
            .collect();
        let image = self.apply(&chi)?;
        let check = image.add(&residual)?.sub(&target)?;
        if !check.is_empty() {
            return Err(Error::Contract(format!("homological solve left a remainder: {check:?}")));
        }
        Ok(HomologicalSolution { chi, residual, free_kernel_coefficients })
    }
}

/// Complement of the image of `Λ` at target grade `q`: the normal-form shape.
pub fn complement_basis(n: u32, scheme: GradingScheme, q: i64, variant: Variant) -> Vec<RealCoord> {
    shape_coords(n, scheme, q, variant)
}

/// Complement for source grade `p` in the natural grading of `n`.
pub fn natural_complement(n: u32, p: i64, variant: Variant) -> Vec<RealCoord> {
    let scheme = GradingScheme::autonomous_for(n);
    let g = scheme.grade(MonomialKey::new(n, 0), n).to_integer();
    complement_basis(n, scheme, p + g - scheme.bracket_drop(), variant)
}

/// Output of [`HomologicalOperator::solve`].
#[derive(Clone, Debug)]
pub struct HomologicalSolution {
    pub chi: ResonantSeries,
    pub residual: ResonantSeries,
    /// Source coordinates left free by the elimination, with the value used.
    pub free_kernel_coefficients: Vec<(usize, Rational)>,
}

/// Determinant of the tridiagonal matrix with `a_jj = α_j`, `a_{j,j+1} = β_j`,
/// `a_{j+1,j} = −γ_j`, via the continuant recursion.
pub fn continuant_det(alphas: &[Rational], betas: &[Rational], gammas: &[Rational]) -> Result<Rational> {
    let k = alphas.len();
    let need = k.saturating_sub(1);
    if betas.len() != need || gammas.len() != need {
        return Err(Error::Domain(format!(
            "continuant needs {need} off-diagonal entries, got {} and {}",
            betas.len(),
            gammas.len()
        )));
    }
    let mut prev2 = Rational::one();
    if k == 0 {
        return Ok(prev2);
    }
    let mut prev1 = alphas[0].clone();
    for j in 1..k {
        let next = &alphas[j] * &prev1 + &betas[j - 1] * &gammas[j - 1] * &prev2;
        prev2 = prev1;
        prev1 = next;
    }
    Ok(prev1)
}

/// Tridiagonal subsystem for the real parts in the `n = 4` reduction at even
/// source grade `p`: `(α, β, γ, matrix)`. Odd `p` yields `None`.
pub fn n4_tridiagonal(p: u32, a0: &Rational, b0: &Rational) -> Option<(Vec<Rational>, Vec<Rational>, Vec<Rational>, Matrix)> {
    if p % 2 == 1 || p < 2 {
        return None;
    }
    let k0 = (p / 2) as usize;
    let pr = rat_int(p as i64);
    let r = |v: i64| Rational::from_integer(BigInt::from(v));
    let mut m = Matrix::zeros(k0, k0);
    // Equation j couples c''_{j−1}, c''_j, c''_{j+1}:
    // −16 j a₀ c''_j + 8 b₀ (p−2j+2) c''_{j−1} − 8 b₀ (p+2j+2) c''_{j+1}.
    let eq = |m: &mut Matrix, row: usize, j: i64| {
        let jr = r(j);
        if j >= 1 && (j as usize) <= k0 {
            m.set(row, j as usize - 1, r(-16) * &jr * a0);
        }
        if j >= 2 {
            m.set(row, j as usize - 2, r(8) * b0 * (&pr - r(2) * &jr + r(2)));
        }
        if (j as usize) < k0 {
            m.set(row, j as usize, r(-8) * b0 * (&pr + r(2) * &jr + r(2)));
        }
    };
    if k0 % 2 == 0 {
        for j in 1..=k0 as i64 {
            eq(&mut m, j as usize - 1, j);
        }
    } else {
        // Equation 0 reads −16 b₀ (p+2) c''_1, then equations 2..k0.
        m.set(0, 0, r(-16) * b0 * (&pr + r(2)));
        for j in 2..=k0 as i64 {
            eq(&mut m, j as usize - 1, j);
        }
    }
    let alphas = (0..k0).map(|i| m.get(i, i).clone()).collect();
    let betas = (0..k0.saturating_sub(1)).map(|i| m.get(i, i + 1).clone()).collect();
    let gammas = (0..k0.saturating_sub(1)).map(|i| -m.get(i + 1, i).clone()).collect();
    Some((alphas, betas, gammas, m))
}
