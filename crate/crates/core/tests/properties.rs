use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use hilbert_modular::congruence::{Flavor, GroupSpec};
use hilbert_modular::cusps::{depth_product_bound, Cusp};
use hilbert_modular::hyperbolic::{dist_hn, psh_hessian, HPoint, Isometry};
use hilbert_modular::numberfield::{ideal_min, FieldElement, FractionalIdeal, TotallyRealField};
use hilbert_modular::thresholds::{ample_threshold, general_type_threshold, green_griffiths_threshold};

fn field(d: i64) -> TotallyRealField {
    TotallyRealField::quadratic(d).unwrap()
}

fn elem(f: &TotallyRealField, c: (i64, i64)) -> FieldElement {
    f.element_from_ints(&[c.0, c.1])
}

fn nonzero_pair() -> impl Strategy<Value = (i64, i64)> {
    (-15i64..=15, -15i64..=15).prop_filter("nonzero", |c| *c != (0, 0))
}

fn ideal(f: &TotallyRealField, x: (i64, i64), y: (i64, i64), denom: i64) -> FractionalIdeal {
    let i = FractionalIdeal::from_generators(f, &[elem(f, x), elem(f, y)]).unwrap();
    i.scale(&f.from_rational(&BigRational::new(1.into(), denom.into()))).unwrap()
}

fn point(n: usize) -> impl Strategy<Value = HPoint> {
    prop::collection::vec((-4.0f64..4.0, -2.0f64..2.0), n)
        .prop_map(|v| HPoint::new(v.into_iter().map(|(x, l)| Complex64::new(x, l.exp())).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideal_identities(d in prop::sample::select(vec![2i64, 3, 5, 6, 13]),
                        x in nonzero_pair(), y in nonzero_pair(), z in nonzero_pair(), w in nonzero_pair(),
                        p in 1i64..4, q in 1i64..4) {
        let f = field(d);
        let i = ideal(&f, x, y, p);
        let j = ideal(&f, z, w, q);
        prop_assert_eq!(i.intersect(&j).inverse().unwrap(), i.inverse().unwrap().sum(&j.inverse().unwrap()));
        let s = i.sum(&j);
        prop_assert_eq!(s.product(&s), i.product(&i).sum(&j.product(&j)));
        prop_assert_eq!(i.product(&j).norm(), i.norm() * j.norm());
        prop_assert_eq!(i.product(&i.inverse().unwrap()), FractionalIdeal::unit(&f));
    }

    #[test]
    fn hnf_is_canonical(d in prop::sample::select(vec![2i64, 3, 5]), x in nonzero_pair(), y in nonzero_pair(), m in (-5i64..=5, -5i64..=5)) {
        let f = field(d);
        let i = ideal(&f, x, y, 1);
        let mult = elem(&f, m);
        let (a, b) = (elem(&f, x), elem(&f, y));
        let again = FractionalIdeal::from_generators(&f, &[&b + &(&a * &mult), a.clone(), &a * &mult]).unwrap();
        prop_assert_eq!(again, i);
    }

    #[test]
    fn norms_are_multiplicative(d in prop::sample::select(vec![2i64, 3, 5, 7]), x in (-40i64..40, -40i64..40), y in (-40i64..40, -40i64..40)) {
        let f = field(d);
        let (a, b) = (elem(&f, x), elem(&f, y));
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
    }

    #[test]
    fn norm_minimum_is_between_ideal_norm_and_generator_norm(d in prop::sample::select(vec![2i64, 3, 5]), x in nonzero_pair(), y in nonzero_pair()) {
        let f = field(d);
        let i = ideal(&f, x, y, 1);
        let m = ideal_min(&i).unwrap();
        prop_assert!(m >= i.norm());
        let g = elem(&f, x);
        prop_assert!(m <= num_traits::Signed::abs(&g.norm()));
    }

    #[test]
    fn norm_is_superadditive_on_the_positive_cone(d in prop::sample::select(vec![2i64, 3, 5]),
                                                  x in nonzero_pair(), y in (-9i64..9, -9i64..9), z in nonzero_pair(), w in (-9i64..9, -9i64..9),
                                                  k in 0i64..5, j in 0i64..5) {
        // Sums x^2 + k y^2 cover many totally positive elements, and only those.
        let f = field(d);
        let sq = |p, q, c: i64| {
            let (p, q) = (elem(&f, p), elem(&f, q));
            &p * &p + (&q * &q).scale(&BigRational::from_integer(c.into()))
        };
        let (a, b) = (sq(x, y, k), sq(z, w, j));
        prop_assert!(f.is_totally_positive(&a) && f.is_totally_positive(&b));
        prop_assert!((&a + &b).norm() >= a.norm() + b.norm());
    }

    #[test]
    fn depth_product_reaches_the_level_norm(d in prop::sample::select(vec![2i64, 3, 5]), level in nonzero_pair(),
                                            a in (-5i64..=5, -5i64..=5), b in (-5i64..=5, -5i64..=5),
                                            c in (-5i64..=5, -5i64..=5), e in (-5i64..=5, -5i64..=5),
                                            gamma1 in any::<bool>()) {
        let f = field(d);
        let first = Cusp::new(elem(&f, a), elem(&f, b));
        let second = Cusp::new(elem(&f, c), elem(&f, e));
        prop_assume!(first.is_ok() && second.is_ok());
        let (first, second) = (first.unwrap(), second.unwrap());
        prop_assume!(first != second);
        let n = FractionalIdeal::from_generators(&f, &[elem(&f, level)]).unwrap();
        let flavor = if gamma1 { Flavor::Gamma1 } else { Flavor::Gamma0 };
        let group = GroupSpec::new(FractionalIdeal::unit(&f), n, flavor).unwrap();
        let r = depth_product_bound(&first, &second, &group).unwrap();
        prop_assert!(r.containment_holds);
        prop_assert!(r.product >= r.level_norm);
    }

    #[test]
    fn cusp_representatives_ignore_scaling(d in prop::sample::select(vec![2i64, 3, 5]), a in (-6i64..=6, -6i64..=6), b in (-6i64..=6, -6i64..=6), c in nonzero_pair(), k in 1i64..5) {
        let f = field(d);
        let first = Cusp::new(elem(&f, a), elem(&f, b));
        prop_assume!(first.is_ok());
        let first = first.unwrap();
        let scale = elem(&f, c).scale(&BigRational::new(1.into(), k.into()));
        let second = Cusp::new(&scale * first.alpha(), &scale * first.beta()).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn distance_is_a_metric(a in point(2), b in point(2), c in point(2)) {
        let (ab, ba) = (dist_hn(&a, &b), dist_hn(&b, &a));
        prop_assert!((ab - ba).abs() <= 1e-10);
        prop_assert!(dist_hn(&a, &c) <= ab + dist_hn(&b, &c) + 1e-10);
        prop_assert!(dist_hn(&a, &a) == 0.0);
    }

    #[test]
    fn isometries_preserve_distance(a in point(2), b in point(2), m in prop::collection::vec((0.5f64..2.0, -2.0f64..2.0, -2.0f64..2.0), 2)) {
        let g = Isometry::new(m.iter().map(|&(p, q, r)| [[p, q], [r, (1.0 + q * r) / p]]).collect()).unwrap();
        let d = dist_hn(&a, &b);
        prop_assert!((dist_hn(&g.apply(&a), &g.apply(&b)) - d).abs() <= 1e-9 * d.max(1.0));
    }

    #[test]
    fn hessian_sign_matches_critical_exponent(n in 2usize..9, num in 1i64..200) {
        let t = BigRational::new(num.into(), 200.into());
        let h = psh_hessian(&t, n).unwrap();
        prop_assert_eq!(h.psd, t <= BigRational::new(1.into(), BigInt::from(n)));
        prop_assert!(h.cross_check());
    }
}

#[test]
fn threshold_identities() {
    let one = BigRational::from_integer(1.into());
    for n in 1..=10u32 {
        assert_eq!(general_type_threshold(n).unwrap(), ample_threshold(n, &one).unwrap());
        let nq = BigRational::from_integer(n.into());
        assert_eq!(green_griffiths_threshold(n).unwrap(), ample_threshold(n, &nq).unwrap());
    }
}
