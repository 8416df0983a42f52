//! Algebraic laws of resonant series and the Poisson bracket.

use proptest::prelude::*;

use resonorm::lie::{lie_derivative, poisson_bracket};
use resonorm::series::zzbar_power;
use resonorm::{ComplexRational, GradingScheme, MonomialKey, ResonantSeries};

const N: u32 = 5;
const TRUNCATION: i64 = 40;

/// A real, resonant series with a handful of low-degree terms.
fn series() -> impl Strategy<Value = ResonantSeries> {
    let term = (0u32..4, 0u32..3, -1i32..=1, -6i64..=6, -6i64..=6);
    prop::collection::vec(term, 1..5).prop_map(|terms| {
        let mut s = ResonantSeries::new(N, GradingScheme::PolyOrder, TRUNCATION).unwrap();
        for (r, q, sign, re, im) in terms {
            // z^{r+qN} z̄^r, z^r z̄^{r+qN} or the diagonal z^r z̄^r, all degree ≥ 2.
            let key = match sign {
                1 => MonomialKey::new(r + q * N, r),
                -1 => MonomialKey::new(r, r + q * N),
                _ => MonomialKey::new(r + 1, r + 1),
            };
            if key.degree() < 2 {
                continue;
            }
            let c = if key.k == key.l { ComplexRational::from_ints(re, 0) } else { ComplexRational::from_ints(re, im) };
            s.add_real_pair(key, &c);
        }
        s
    })
}

fn common(a: &ResonantSeries, b: &ResonantSeries) -> (ResonantSeries, ResonantSeries) {
    let t = a.truncation().min(b.truncation());
    (a.truncate(t), b.truncate(t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_and_brackets_stay_real_and_resonant(f in series(), g in series()) {
        prop_assert!(f.is_real() && f.is_resonant());
        let p = f.mul(&g).unwrap();
        let b = lie_derivative(&f, &g).unwrap();
        prop_assert!(p.is_real() && p.is_resonant());
        prop_assert!(b.is_real() && b.is_resonant());
    }

    #[test]
    fn bracket_is_antisymmetric(f in series(), g in series()) {
        let fg = poisson_bracket(&f, &g).unwrap();
        let gf = poisson_bracket(&g, &f).unwrap();
        let (fg, gf) = common(&fg, &gf);
        prop_assert_eq!(fg, gf.neg());
    }

    #[test]
    fn bracket_satisfies_jacobi(f in series(), g in series(), h in series()) {
        let a = poisson_bracket(&f, &poisson_bracket(&g, &h).unwrap()).unwrap();
        let b = poisson_bracket(&g, &poisson_bracket(&h, &f).unwrap()).unwrap();
        let c = poisson_bracket(&h, &poisson_bracket(&f, &g).unwrap()).unwrap();
        let t = a.truncation().min(b.truncation()).min(c.truncation());
        let sum = a.truncate(t).add(&b.truncate(t)).unwrap().add(&c.truncate(t)).unwrap();
        prop_assert!(sum.is_empty(), "{:?}", sum);
    }

    #[test]
    fn bracket_is_a_derivation(f in series(), g in series(), h in series()) {
        let left = poisson_bracket(&f, &g.mul(&h).unwrap()).unwrap();
        let right = poisson_bracket(&f, &g)
            .unwrap()
            .mul(&h)
            .unwrap()
            .add(&g.mul(&poisson_bracket(&f, &h).unwrap()).unwrap())
            .unwrap();
        let (left, right) = common(&left, &right);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn actions_commute(r in 1u32..5, s in 1u32..5) {
        let one = ComplexRational::from_ints(1, 0);
        let a = ResonantSeries::from_terms(N, GradingScheme::PolyOrder, TRUNCATION, [(zzbar_power(r), one.clone())]).unwrap();
        let b = ResonantSeries::from_terms(N, GradingScheme::PolyOrder, TRUNCATION, [(zzbar_power(s), one)]).unwrap();
        prop_assert!(poisson_bracket(&a, &b).unwrap().is_empty());
    }
}

#[test]
fn brackets_of_the_coordinates() {
    let one = ComplexRational::from_ints(1, 0);
    let z = ResonantSeries::from_terms(N, GradingScheme::PolyOrder, TRUNCATION, [(MonomialKey::new(1, 0), one.clone())])
        .unwrap();
    let zb = ResonantSeries::from_terms(N, GradingScheme::PolyOrder, TRUNCATION, [(MonomialKey::new(0, 1), one)]).unwrap();
    let b = poisson_bracket(&z, &zb).unwrap();
    assert_eq!(b.len(), 1);
    assert_eq!(b.coeff(MonomialKey::new(0, 0)), ComplexRational::from_ints(1, 0));
    // L_χ h = −2i {h, χ}: the rotation vector field in complex form.
    let l = lie_derivative(&z, &zb).unwrap();
    assert_eq!(l.coeff(MonomialKey::new(0, 0)), ComplexRational::from_ints(0, -2));
}

#[test]
fn json_round_trip_preserves_the_series() {
    let mut h = ResonantSeries::new(7, GradingScheme::PolyOrder, 12).unwrap();
    h.add_real_pair(MonomialKey::new(3, 3), &ComplexRational::from_ints(1, 0));
    h.add_real_pair(MonomialKey::new(7, 0), &ComplexRational::from_ints(3, -2));
    let back = ResonantSeries::from_json(&h.to_json()).unwrap();
    assert_eq!(back, h);
}

#[test]
fn mismatched_orders_are_rejected() {
    let a = ResonantSeries::new(5, GradingScheme::PolyOrder, 10).unwrap();
    let b = ResonantSeries::new(6, GradingScheme::PolyOrder, 10).unwrap();
    assert!(poisson_bracket(&a, &b).is_err());
    assert!(ResonantSeries::new(2, GradingScheme::PolyOrder, 10).is_err());
}
