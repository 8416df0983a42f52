//! Poisson bracket, Lie derivative and Lie transforms on resonant series.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::{ComplexRational, Rational};
use crate::series::{Grade, MonomialKey, ResonantSeries};

/// `{f, g} = f_z g_z̄ − f_z̄ g_z`, truncated at `truncation`.
fn bracket_raw(f: &ResonantSeries, g: &ResonantSeries, truncation: i64) -> ResonantSeries {
    let mut out = f.empty_like().with_truncation_unchecked(truncation);
    for (a, ca) in f.terms() {
        for (b, cb) in g.terms() {
            let w = a.k as i64 * b.l as i64 - a.l as i64 * b.k as i64;
            if w == 0 {
                continue;
            }
            // k_a + k_b ≥ 1 and l_a + l_b ≥ 1 whenever w ≠ 0.
            let key = MonomialKey::with_params(a.k + b.k - 1, a.l + b.l - 1, a.m + b.m, a.j + b.j);
            if !out.within_truncation(key) {
                continue;
            }
            let c = (ca * cb).scale(&Rational::from_integer(BigInt::from(w)));
            out.add_term(key, &c);
        }
    }
    out
}

/// Truncation that is fully determined by the known terms of `f` and `g`.
fn bracket_truncation(f: &ResonantSeries, g: &ResonantSeries) -> i64 {
    let drop = f.scheme().bracket_drop();
    let mut t = f.truncation().min(g.truncation());
    let bound = |tr: i64, other: Option<Grade>| -> Option<i64> {
        other.map(|m| (Grade::from_integer(tr - drop) + m).floor().to_integer())
    };
    if let Some(b) = bound(f.truncation(), g.min_grade()) {
        t = t.min(b);
    }
    if let Some(b) = bound(g.truncation(), f.min_grade()) {
        t = t.min(b);
    }
    t
}

fn check_pair(f: &ResonantSeries, g: &ResonantSeries) -> Result<()> {
    if f.n() != g.n() || f.scheme() != g.scheme() {
        return Err(Error::Structure(format!(
            "bracket operands differ: (n={}, {}) vs (n={}, {})",
            f.n(),
            f.scheme().name(),
            g.n(),
            g.scheme().name()
        )));
    }
    Ok(())
}

/// Poisson bracket `{f, g}`.
pub fn poisson_bracket(f: &ResonantSeries, g: &ResonantSeries) -> Result<ResonantSeries> {
    check_pair(f, g)?;
    Ok(bracket_raw(f, g, bracket_truncation(f, g)))
}

/// `L_χ h = −2i (h_z χ_z̄ − h_z̄ χ_z)`.
pub fn lie_derivative(h: &ResonantSeries, chi: &ResonantSeries) -> Result<ResonantSeries> {
    let b = poisson_bracket(h, chi)?;
    Ok(b.scale(&ComplexRational::from_ints(0, -2)))
}

/// Like [`lie_derivative`] but keeps only the terms up to `truncation`
/// (which must not exceed the natural truncation).
pub fn lie_derivative_to(
    h: &ResonantSeries,
    chi: &ResonantSeries,
    truncation: i64,
) -> Result<ResonantSeries> {
    check_pair(h, chi)?;
    let t = bracket_truncation(h, chi).min(truncation);
    Ok(bracket_raw(h, chi, t).scale(&ComplexRational::from_ints(0, -2)))
}

/// `Σ_k t^k/k! L_χ^k h`: the pull-back of `h` by the time-one flow of `t·χ`,
/// where `t` is the parameter monomial `δ^M ν^J` (or `1`).
pub fn lie_transform(
    h: &ResonantSeries,
    chi: &ResonantSeries,
    t_monomial: MonomialKey,
) -> Result<ResonantSeries> {
    check_pair(h, chi)?;
    if t_monomial.k != 0 || t_monomial.l != 0 {
        return Err(Error::Domain(format!(
            "weight monomial must be a pure parameter monomial, got {t_monomial}"
        )));
    }
    if chi.is_empty() {
        return Ok(h.clone());
    }
    let weighted = if t_monomial == MonomialKey::default() {
        chi.clone()
    } else {
        chi.mul_monomial(t_monomial)
    };
    let drop = Grade::from_integer(h.scheme().bracket_drop());
    let low = weighted.min_grade().expect("non-empty generator");
    if low <= drop {
        return Err(Error::Contract(format!(
            "generator has lowest grade {low}; the Lie series needs grade above {drop} to terminate"
        )));
    }
    let t = h.truncation().min(weighted.truncation());
    let mut acc = h.truncate(t);
    let mut term = acc.clone();
    let mut k: u32 = 0;
    loop {
        k += 1;
        let next = lie_derivative_to(&term, &weighted, t)?;
        if next.is_empty() {
            break;
        }
        // term_k = L^k h / k!, built incrementally so the factorial stays exact.
        term = next.scale_rational(&Rational::new(BigInt::one(), BigInt::from(k)));
        acc = acc.add(&term)?;
    }
    Ok(acc.truncate(t))
}
