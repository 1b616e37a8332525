use lensform::exactnum::modular::{multiplicative_order, primitive_root_mod_p_squared};
use lensform::exactnum::{smith_normal_form, CyclotomicNumber, IntegerMatrix};
use lensform::ktorsion::h_minus;
use lensform::lens::{
    homotopy_equivalent, isometric, mu_profile, rigidity_check, tangential_with, LensSpace,
};
use lensform::oracle::*;
use lensform::repring::{in_kernel_a, k_ring_of_lens, stable_class, KRingPresentation, VirtualRep};
use lensform::rho::rho_difference;
use lensform::thickness::{circle_order, theta_filtration, thickness_report, CodimVerdict};
use lensform::PrimeModulus;
use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;

fn pm(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

fn small_matrix() -> impl Strategy<Value = IntegerMatrix<i64>> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-4i64..=4, c), r)
            .prop_map(move |rows| IntegerMatrix::from_rows(c, rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smith_form_matches_oracles(m in small_matrix()) {
        let (g, free) = smith_normal_form(&m);
        let (factors, oracle_free) = determinantal_invariants(&m);
        prop_assert_eq!(g.invariant_factors(), &factors[..]);
        prop_assert_eq!(free, oracle_free);
        if free == 0 {
            prop_assert_eq!(brute_cokernel(&m).unwrap(), g);
        }
    }

    #[test]
    fn kernel_test_matches_lattice_oracle(
        p in prop::sample::select(vec![3u64, 5, 7]),
        n in 1u64..=7,
        raw in prop::collection::vec(-3i64..=3, 3),
        scale in prop::sample::select(vec![1i64, 3, 5, 7, 25]),
    ) {
        let pm = pm(p);
        let mult: Vec<i64> = raw.iter().take(pm.half()).map(|x| x * scale).collect();
        let v = VirtualRep::new(pm, -2 * mult.iter().sum::<i64>(), mult);
        prop_assert_eq!(in_kernel_a(&v, pm, n).unwrap(), in_kernel_by_lattice(&v, n).unwrap());
    }

    #[test]
    fn kernel_lies_in_p_ro_from_n_equal_p(
        p in prop::sample::select(vec![3u64, 5, 7]),
        extra in 0u64..4,
        raw in prop::collection::vec(-12i64..=12, 3),
    ) {
        let pm = pm(p);
        let mult: Vec<i64> = raw.into_iter().take(pm.half()).collect();
        let v = VirtualRep::new(pm, -2 * mult.iter().sum::<i64>(), mult);
        if in_kernel_a(&v, pm, p + extra).unwrap() {
            prop_assert!(v.mult().iter().all(|m| m % p as i64 == 0));
        }
    }

    #[test]
    fn class_ignores_relations(
        p in prop::sample::select(vec![3u64, 5, 7]),
        n in 2u64..=6,
        mult in prop::collection::vec(-3i64..=3, 3),
        combo in prop::collection::vec(-3i64..=3, 5),
    ) {
        let pm = pm(p);
        let k = KRingPresentation::shared(pm, n).unwrap();
        let v = VirtualRep::new(pm, 0, mult.into_iter().take(pm.half()).collect());
        let mut coords = k.coordinates(&lensform::repring::complexify(&v));
        for (row, c) in k.relations().row_vec().iter().zip(&combo) {
            for (x, r) in coords.iter_mut().zip(row) {
                *x += r * c;
            }
        }
        prop_assert_eq!(stable_class(&v, &k).unwrap(), k.reduce(&coords));
    }

    #[test]
    fn cyclotomic_field_axioms(
        p in prop::sample::select(vec![3u64, 5, 7]),
        a in prop::collection::vec(-3i64..=3, 6),
        b in prop::collection::vec(-3i64..=3, 6),
        c in prop::collection::vec(-3i64..=3, 6),
    ) {
        let mk = |v: &[i64]| CyclotomicNumber::from_coeffs(
            p,
            v.iter().take(p as usize - 1).map(|&x| Rational64::from_integer(x)).collect(),
        );
        let (a, b, c) = (mk(&a), mk(&b), mk(&c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b).try_div(&b).unwrap(), &a);
        }
    }

    #[test]
    fn rigidity_holds(p in prop::sample::select(vec![3u64, 5, 7, 11]), raw in prop::collection::vec(1i64..200, 1..=5)) {
        let l = LensSpace::new(p, &raw.into_iter().filter(|a| a % p as i64 != 0).chain([1]).collect::<Vec<_>>()).unwrap();
        prop_assert!(rigidity_check(&l));
    }
}

#[test]
fn primitive_roots_have_full_order() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let g = primitive_root_mod_p_squared(pm(p));
        assert_eq!(multiplicative_order(g, p * p), Some(p * (p - 1)));
        assert_eq!(g, primitive_root_by_orders(p));
    }
}

#[test]
fn k_group_orders_match_cell_count() {
    for p in [3u64, 5, 7] {
        for n in 1..=6 {
            let k = k_ring_of_lens(pm(p), n).unwrap();
            assert_eq!(k.resolved_group().order(), cell_count_order(p, n), "p = {p}, n = {n}");
        }
    }
}

#[test]
fn circle_orders_agree_with_iteration() {
    for p in [3u64, 5, 7] {
        for m in 0..=3u32 {
            let modulus = p.pow(m + 1);
            for x in (0..modulus).step_by(p as usize) {
                let c = circle_order(pm(p), m, x).unwrap();
                assert_eq!(c.loop_order, c.circle_order);
                assert_eq!((c.loop_order, c.circle_order), circle_order_by_iteration(p, m, x));
            }
        }
    }
}

#[test]
fn class_numbers_agree() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        assert_eq!(h_minus(pm(p)).unwrap(), h_minus_maillet(p).unwrap(), "p = {p}");
    }
    assert_eq!(h_minus(pm(37)).unwrap(), BigInt::from(37));
}

#[test]
fn isometry_is_an_equivalence_matching_the_oracle() {
    for p in [3u64, 5, 7, 11] {
        for n in 1..=4 {
            let spaces = enumerate_lens_spaces(p, n).unwrap();
            let classes = exhaustive_isometry_classes(p, n).unwrap();
            let class_of = |l: &LensSpace| classes.iter().position(|c| c.contains(l)).unwrap();
            for a in &spaces {
                for b in &spaces {
                    let s = isometric(a, b);
                    assert_eq!(s.is_some(), class_of(a) == class_of(b));
                    assert_eq!(s.is_some(), isometric(b, a).is_some());
                    if let Some(s) = s {
                        assert_eq!(mu_profile(&a.scaled(s).unwrap()), mu_profile(b));
                        assert!(homotopy_equivalent(a, b).is_some());
                    }
                }
            }
        }
    }
}

#[test]
fn tangential_is_reflexive_and_symmetric() {
    for p in [5u64, 7, 11] {
        for n in 1..=5 {
            let k = KRingPresentation::shared(pm(p), n).unwrap();
            let spaces = enumerate_lens_spaces(p, n).unwrap();
            for a in &spaces {
                assert!(tangential_with(a, a, &k).unwrap().equivalent);
                for b in &spaces {
                    assert_eq!(
                        tangential_with(a, b, &k).unwrap().equivalent,
                        tangential_by_lattice(a, b).unwrap(),
                        "oracle disagrees on {a} vs {b}"
                    );
                }
                for b in &spaces {
                    assert_eq!(
                        tangential_with(a, b, &k).unwrap().equivalent,
                        tangential_with(b, a, &k).unwrap().equivalent,
                        "{a} vs {b}"
                    );
                }
            }
        }
    }
}

#[test]
fn rigidity_exhaustive_small_primes() {
    for p in [3u64, 5, 7] {
        let r = verify_prop41(p).unwrap();
        assert!(r.ok(), "{r:?}");
    }
}

#[test]
fn isometric_pairs_have_zero_rho_difference() {
    for p in [3u64, 5] {
        for n in 1..=3 {
            for class in exhaustive_isometry_classes(p, n).unwrap() {
                for a in &class {
                    for b in &class {
                        assert!(rho_difference(a, b).unwrap().is_zero(), "{a} vs {b}");
                    }
                }
            }
        }
    }
}

#[test]
fn filtration_products() {
    for p in [3u64, 5, 7, 11, 13] {
        for n in 3..=40 {
            let f = theta_filtration(pm(p), n).unwrap();
            for a in f.admissible_assignments() {
                let prod: u128 = a.iter().map(|&q| q as u128).product();
                assert_eq!(BigInt::from(prod), BigInt::from(f.tprime_order.value()));
            }
        }
    }
}

#[test]
fn thickness_of_nonisometric_tangential_pair() {
    let a = LensSpace::new(11, &[1, 1, 1]).unwrap();
    let b = LensSpace::new(11, &[1, 1, 5]).unwrap();
    let r = thickness_report(&a, &b).unwrap();
    assert!(r.comparable);
    assert_eq!(r.thickness, Some(3));
    assert_eq!(r.verdict(2), Some(CodimVerdict::Unequal));
    assert_eq!(r.verdict(3), Some(CodimVerdict::Equal));
    assert!(r.is_monotone());
}

#[test]
fn every_report_is_monotone() {
    let spaces = enumerate_lens_spaces(7, 3).unwrap();
    for a in &spaces {
        for b in &spaces {
            let r = thickness_report(a, b).unwrap();
            assert!(r.is_monotone());
            if r.comparable {
                let last = r.filtration.as_ref().unwrap().stable_codim;
                assert_eq!(r.verdict(last.max(3)), Some(CodimVerdict::Equal));
            }
        }
    }
}
