mod common;

use common::*;
use mls_core::algebra::{ComplexRational, Polynomial, SpherePoint, DEFAULT_CLUSTER_TOL};
use mls_core::parser::parse_rational;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn div_rem_reconstructs(p in poly(8), q in poly(8)) {
        let (quot, rem) = p.div_rem(&q).unwrap();
        let back = &(&q * &quot) + &rem;
        let scale = p.max_abs().max(q.max_abs() * quot.max_abs()).max(1.0);
        for k in 0..=p.deg().max(back.deg()) {
            prop_assert!((back.coeff(k) - p.coeff(k)).norm() <= 1e-9 * scale);
        }
        prop_assert!(rem.is_zero() || rem.deg() < q.deg().max(1));
    }

    #[test]
    fn roots_reproduce_polynomial(p in poly(8)) {
        let roots = p.roots(DEFAULT_CLUSTER_TOL).unwrap();
        prop_assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), p.deg());
        let pairs: Vec<_> = roots.iter().map(|r| (r.value, r.multiplicity)).collect();
        let back = Polynomial::from_roots(&pairs, p.leading());
        prop_assert!(back.approx_eq(&p, 1e-6), "{} vs {}", back, p);
    }

    #[test]
    fn residues_sum_to_zero(num in poly(5), poles in proptest::collection::vec(complex(), 1..5)) {
        // simple poles at distinct points
        let mut distinct: Vec<_> = Vec::new();
        for p in poles {
            if distinct.iter().all(|q: &mls_core::Complex| (q - p).norm() > 0.1) {
                distinct.push(p);
            }
        }
        let den = Polynomial::from_roots(&distinct.iter().map(|p| (*p, 1)).collect::<Vec<_>>(), c(1.0, 0.0));
        let r = ComplexRational::new(num, den).unwrap();
        prop_assume!(!r.is_zero());
        let finite: mls_core::Complex = r.poles().unwrap().iter().map(|p| r.residue_at(p.value)).sum();
        let total = finite + r.residue_at_infinity();
        let scale = r.numerator().max_abs().max(1.0);
        prop_assert!(total.norm() <= 1e-9 * scale, "sum {}", total);
    }

    #[test]
    fn antiderivative_round_trip(r in rational(4)) {
        if let Ok(prim) = r.antiderivative() {
            let back = prim.derivative();
            for z in [c(0.31, 0.72), c(-1.3, 0.4), c(2.1, -1.7)] {
                if let (Some(a), Some(b)) = (back.eval(z), r.eval(z)) {
                    prop_assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0), "{} vs {}", a, b);
                }
            }
        }
    }

    #[test]
    fn exact_primitive_round_trip(p in rational(3)) {
        // derivatives of rational functions always have zero residues
        let r = p.derivative();
        prop_assume!(!r.is_zero());
        let prim = r.antiderivative().unwrap();
        let back = prim.derivative();
        let agree = [c(0.31, 0.72), c(-1.3, 0.4)].iter().all(|&z| match (back.eval(z), r.eval(z)) {
            (Some(a), Some(b)) => (a - b).norm() <= 1e-9 * b.norm().max(1.0),
            _ => true,
        });
        prop_assert!(agree, "{} vs {}", back, r);
    }

    #[test]
    fn orders_sum_to_zero(r in rational(6)) {
        prop_assume!(!r.is_zero());
        let div = r.divisor().unwrap();
        prop_assert_eq!(div.degree(), 0);
        let at_inf = r.order_at(&SpherePoint::Infinity).unwrap();
        prop_assert_eq!(at_inf, div.order_at(&SpherePoint::Infinity, 0.0));
    }

    #[test]
    fn display_round_trip(r in rational(5)) {
        let back = parse_rational(&r.to_string()).unwrap();
        prop_assert!(back.approx_eq(&r, 1e-12), "{} vs {}", back, r);
    }
}

#[test]
fn precedence() {
    let r = parse_rational("1+2*z^2").unwrap();
    let expect = Polynomial::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
    assert!(r.numerator().approx_eq(&expect, 0.0));
}

#[test]
fn mobius_examples() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let g = parse_rational("-z^2").unwrap();
    let m = [[c(s, 0.0), c(-s, 0.0)], [c(s, 0.0), c(s, 0.0)]];
    let out = g.mobius_transform(m).unwrap();
    assert!(out.approx_eq(&parse_rational("(-z^2-1)/(-z^2+1)").unwrap(), 1e-14));
    let inv = parse_rational("z")
        .unwrap()
        .mobius_transform([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
    assert!(inv
        .unwrap()
        .approx_eq(&parse_rational("1/z").unwrap(), 1e-15));
}
