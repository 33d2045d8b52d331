mod common;

use proptest::prelude::*;
use rug::{Float, Integer, Rational};

use massbound_core::arith::{kronecker, l_value_exact, QuadraticCharacter};
use massbound_core::mass::{korner_mass, l_psi_euler_product, MassMode};
use massbound_core::transforms::{euler_transform, inverse_euler_transform, max_term_lower_bound, IntSequence};
use massbound_core::{Field, RealEnclosure};

const PREC: u32 = 96;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..5_000).prop_map(|(p, q)| Rational::from((p, q)))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..10_000, 1i64..5_000).prop_map(|(p, q)| Rational::from((p, q)))
}

fn enc(q: &Rational) -> RealEnclosure {
    RealEnclosure::from_rational(q, PREC)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_operations_contain_exact_result(x in rational(), y in rational()) {
        let (ex, ey) = (enc(&x), enc(&y));
        prop_assert!(ex.contains_rational(&x));
        prop_assert!((&ex + &ey).contains_rational(&Rational::from(&x + &y)));
        prop_assert!((&ex - &ey).contains_rational(&Rational::from(&x - &y)));
        prop_assert!((&ex * &ey).contains_rational(&Rational::from(&x * &y)));
        if y != 0 {
            prop_assert!((&ex / &ey).contains_rational(&Rational::from(&x / &y)));
        }
    }

    #[test]
    fn roots_of_squares_are_enclosed(x in positive_rational()) {
        let sq = Rational::from(x.square_ref());
        prop_assert!(enc(&sq).sqrt().unwrap().contains_rational(&x));
        let cube = Rational::from(&sq * &x);
        prop_assert!(enc(&cube).root(3).unwrap().contains_rational(&x));
    }

    #[test]
    fn transcendental_results_contain_high_precision_value(x in positive_rational()) {
        let lo = enc(&x);
        let hi = RealEnclosure::from_rational(&x, 512);
        let ln_ref: Float = hi.ln().unwrap().mid();
        prop_assert!(lo.ln().unwrap().contains(&ln_ref));
        let small = enc(&(x.clone() / 1000u32));
        let exp_ref = RealEnclosure::from_rational(&(x / 1000u32), 512).exp().mid();
        prop_assert!(small.exp().contains(&exp_ref));
    }

    #[test]
    fn euler_round_trip(a in prop::collection::vec(0u64..60, 1..16)) {
        let a = IntSequence::from_u64(&a).unwrap();
        let b = euler_transform(&a);
        prop_assert_eq!(inverse_euler_transform(&b).unwrap(), a.clone());
        for n in 1..=a.len() {
            let max = a.values()[..n].iter().max().unwrap();
            let bound = max_term_lower_bound(&b, n, PREC).unwrap();
            prop_assert!(!bound.certainly_gt(&RealEnclosure::from_integer(max, PREC)));
        }
    }

    #[test]
    fn euler_transform_of_ones_counts_partitions(len in 1usize..40) {
        let b = euler_transform(&IntSequence::from_u64(&vec![1; len]).unwrap());
        // p(n) by the pentagonal recurrence
        let mut p = vec![Integer::from(1)];
        for n in 1..=len as i64 {
            let mut acc = Integer::new();
            for k in 1.. {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > n {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                acc += Integer::from(&p[(n - g1) as usize] * sign);
                let g2 = k * (3 * k + 1) / 2;
                if g2 <= n {
                    acc += Integer::from(&p[(n - g2) as usize] * sign);
                }
            }
            p.push(acc);
        }
        prop_assert_eq!(b.values(), &p[1..]);
    }
}

#[test]
fn inverse_rejects_non_transforms() {
    // 1 + X + X² is not ∏ (1 - X^k)^{-a_k} with a_k ≥ 0
    let b = IntSequence::from_u64(&[1, 0]).unwrap();
    assert!(inverse_euler_transform(&b).is_err());
}

#[test]
fn rational_masses_match_classified_genera() {
    for n in 3..=9 {
        let m = korner_mass(&Field::Rationals, n, MassMode::Exact, PREC).unwrap();
        assert_eq!(m.total.exact().unwrap(), &common::mass_q_classified(n), "n = {n}");
    }
    assert_eq!(common::weyl_e8_order(), 696_729_600);
}

#[test]
fn euler_product_matches_exact_l_values() {
    // over ℚ(√D) with D ≡ 1 mod 4, L(s, ψ) = L(s, χ_{-4}) L(s, χ_{-4D})
    let chi4 = QuadraticCharacter::new(-4).unwrap();
    for s in [3, 5] {
        let lq = l_value_exact(s, chi4).unwrap().to_enclosure(PREC);
        assert!(l_psi_euler_product(&Field::Rationals, s, PREC).unwrap().intersects(&lq), "ℚ, s = {s}");
        for d in [5i64, 13, 21] {
            let twist = l_value_exact(s, QuadraticCharacter::new(-4 * d).unwrap()).unwrap().to_enclosure(PREC);
            let k = Field::quadratic(d).unwrap();
            let prod = l_psi_euler_product(&k, s, PREC).unwrap();
            assert!(prod.intersects(&(&lq * &twist)), "D = {d}, s = {s}");
            assert!(prod.rel_width() < Float::with_val(PREC, 1e-6));
        }
    }
}

#[test]
fn kronecker_is_multiplicative_in_the_top_argument() {
    for a in [-20i64, -4, 5, 8, 12, 13] {
        for m in 1..60 {
            for n in 1..60 {
                assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n), "a={a} m={m} n={n}");
            }
        }
    }
}
