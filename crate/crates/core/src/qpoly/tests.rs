use proptest::prelude::*;

use super::rational::{int, rat};
use super::*;

fn p(c: &[i64]) -> QPoly {
    QPoly::from_ints(c)
}

fn lin(a: i64) -> QPoly {
    // z - a
    p(&[-a, 1])
}

#[test]
fn ring_operations() {
    assert_eq!(&p(&[0, 0, 1]) + &p(&[0, 0, 0, 1]), p(&[0, 0, 1, 1]));
    assert_eq!(&lin(1) * &lin(-1), p(&[-1, 0, 1]));
    assert!(p(&[0, 0, 1]).scale(&int(0)).is_zero());
    assert_eq!(QPoly::zero().degree(), Degree::NegInfinity);
    assert_eq!(p(&[0, 0, 1]).degree(), Degree::Finite(2));
}

#[test]
fn derivatives() {
    assert_eq!(p(&[0, 0, 1]).derivative(1), p(&[0, 2]));
    assert_eq!(p(&[0, 0, 1]).derivative(0), p(&[0, 0, 1]));
    // (z^3 (z-1)^5)'' at 0
    let mut f = FactoredPoly::one();
    f.push(QPoly::z(), 3).unwrap();
    f.push(lin(1), 5).unwrap();
    assert!(f.derivative_at(&GaussianRational::zero(), 2).is_zero());
    assert_eq!(f.expand().derivative(2).coefficient_of(0), int(0));
}

#[test]
fn evaluation() {
    let g = |x: Rational| GaussianRational::real(x);
    assert_eq!(p(&[-1, 0, 1]).eval(&g(int(2))), g(int(3)));
    assert_eq!(p(&[0, 0, 1]).eval(&GaussianRational::i()), g(int(-1)));
    let mut f = FactoredPoly::one();
    f.push(lin(1), 3).unwrap();
    f.push(lin(-2), 1).unwrap();
    assert_eq!(f.eval(&g(rat(1, 2))), g(rat(-5, 16)));
}

#[test]
fn gcd_and_division() {
    assert_eq!(p(&[-1, 0, 1]).gcd(&lin(1)), lin(1));
    assert_eq!(p(&[1, 0, 1]).gcd(&p(&[2, 0, 1])), QPoly::one());
    assert_eq!(p(&[0, 0, -1, 0, 1]).exact_divide(&QPoly::z()).unwrap(), p(&[0, -1, 0, 1]));
    assert_eq!(p(&[1, 0, 1]).exact_divide(&lin(1)), Err(PolyError::NonDivisible));
    let a = p(&[3, 0, 6]).scale(&rat(1, 7));
    let b = p(&[1, 0, 2]).scale(&rat(5, 3));
    assert_eq!(a.exact_divide(&b).unwrap(), QPoly::constant(rat(9, 35)));
}

#[test]
fn radicals() {
    assert_eq!(p(&[0, 0, -1, 0, 1]).radical().unwrap(), p(&[0, -1, 0, 1]));
    assert_eq!(p(&[1, 0, 1]).radical().unwrap(), p(&[1, 0, 1]));
    assert_eq!(lin(1).pow(3).radical().unwrap(), lin(1));
    assert_eq!(QPoly::zero().radical(), Err(PolyError::ZeroPolynomial));
}

#[test]
fn lengths_and_coefficients() {
    assert_eq!(QPoly::one().length(), int(1));
    assert_eq!(p(&[3, -2, 1]).length(), int(6));
    assert_eq!(QPoly::from_coeffs(vec![rat(1, 2), int(-2), int(0), int(1)]).length(), rat(7, 2));
    assert_eq!(p(&[0, 0, 1]).coefficient_of(2), int(1));
    assert_eq!(p(&[0, 0, 1]).coefficient_of(3), int(0));
    let mut f = FactoredPoly::one();
    f.push(lin(1), 4).unwrap();
    assert_eq!(f.coefficient_of(1), int(-4));
}

#[test]
fn json_forms() {
    let q = QPoly::from_coeffs(vec![rat(-1, 2), int(0), int(3)]);
    let s = serde_json::to_string(&q).unwrap();
    assert_eq!(s, r#"{"form":"dense","coefficients":["-1/2","0","3"]}"#);
    assert_eq!(serde_json::from_str::<QPoly>(&s).unwrap(), q);
    let mut f = FactoredPoly::one();
    f.push(p(&[1, 0, 1]), 2).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    assert!(s.starts_with(r#"{"form":"factored","scalar":"1","factors":[{"poly":"#));
    assert_eq!(serde_json::from_str::<FactoredPoly>(&s).unwrap(), f);
    assert!(serde_json::from_str::<QPoly>(r#"{"form":"dense","coefficients":["1","0"]}"#).is_err());
    let g = GaussianRational::new(rat(1, 2), rat(-3, 4));
    assert_eq!(serde_json::to_string(&g).unwrap(), r#""1/2-3/4*i""#);
}

#[test]
fn gpoly_conjugation() {
    let f = p(&[0, 1, 3, -2]);
    let a = GaussianRational::new(rat(1, 3), int(2));
    assert_eq!(GPoly::minus_constant(&f, &a).conj(), GPoly::minus_constant(&f, &a.conj()));
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 1..=max_deg + 1)
        .prop_map(|cs| QPoly::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
}

fn small_factored() -> impl Strategy<Value = FactoredPoly> {
    (
        (-3i64..=3).prop_filter("nonzero", |x| *x != 0),
        prop::collection::vec((small_poly(4), 1u32..=4), 0..=4),
    )
        .prop_filter_map("nonzero factors", |(s, fs)| {
            let mut f = FactoredPoly::new(int(s), Vec::new()).ok()?;
            for (q, e) in fs {
                if q.is_zero() {
                    return None;
                }
                f.push(q, e).ok()?;
            }
            Some(f)
        })
}

proptest! {
    #[test]
    fn radical_divides_and_is_squarefree(q in small_poly(8)) {
        prop_assume!(!q.is_zero());
        let r = q.radical().unwrap();
        prop_assert!(q.exact_divide(&r).is_ok());
        prop_assert_eq!(r.gcd(&r.derivative(1)), QPoly::one());
    }

    #[test]
    fn length_is_submultiplicative(a in small_poly(6), b in small_poly(6)) {
        prop_assert!((&a * &b).length() <= a.length() * b.length());
    }

    #[test]
    fn gcd_divides_both(a in small_poly(5), b in small_poly(5), c in small_poly(3)) {
        prop_assume!(!c.is_zero());
        let (x, y) = (&a * &c, &b * &c);
        prop_assume!(!x.is_zero() && !y.is_zero());
        let g = x.gcd(&y);
        prop_assert!(x.exact_divide(&g).is_ok());
        prop_assert!(y.exact_divide(&g).is_ok());
        prop_assert!(g.exact_divide(&c.monic()).is_ok());
        prop_assert!(g.leading_coefficient() == int(1));
    }

    #[test]
    fn factored_agrees_with_dense(f in small_factored(), x in (-5i64..=5, 1i64..=3), y in (-5i64..=5, 1i64..=3), j in 0usize..4) {
        let d = f.expand();
        let z = GaussianRational::new(rat(x.0, x.1), rat(y.0, y.1));
        prop_assert_eq!(f.degree(), d.deg().unwrap_or(0));
        prop_assert_eq!(f.eval(&z), d.eval(&z));
        prop_assert_eq!(f.derivative_at(&z, j), d.derivative(j).eval(&z));
        for k in 0..=f.degree() + 1 {
            prop_assert_eq!(f.coefficient_of(k), d.coefficient_of(k));
        }
        prop_assert!(d.length() <= f.length_upper());
    }

    #[test]
    fn factored_derivatives_at_a_root(f in small_factored(), a in (-4i64..=4, 1i64..=3), e in 1u32..=5, j in 0usize..7) {
        let root = rat(a.0, a.1);
        let mut f = f;
        f.push(QPoly::linear_root(&root), e).unwrap();
        let z = GaussianRational::real(root);
        prop_assert_eq!(f.derivative_at(&z, j), f.expand().derivative(j).eval(&z));
    }

    #[test]
    fn divide_undoes_multiply(a in small_poly(6), b in small_poly(6)) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_divide(&b).unwrap(), a);
    }

    #[test]
    fn derivative_matches_finite_difference(q in small_poly(10), x in -20i64..=20, j in 0usize..3) {
        let x = x as f64 / 10.0;
        let h = 1e-4;
        let eval = |t: f64| q.coeffs().iter().rev().fold(0.0, |acc, c| acc * t + rational::to_f64(c));
        let fd = match j {
            0 => eval(x),
            1 => (eval(x + h) - eval(x - h)) / (2.0 * h),
            _ => (eval(x + h) - 2.0 * eval(x) + eval(x - h)) / (h * h),
        };
        let exact = rational::to_f64(&q.derivative(j).eval_rational(&rat((x * 10.0).round() as i64, 10)));
        // magnitude scale: the absolute-coefficient polynomial and its derivatives at |x|
        let qa = QPoly::from_coeffs(q.coeffs().iter().map(|c| num_traits::Signed::abs(c)).collect());
        let ax = rat((x.abs() * 10.0).round() as i64, 10);
        let scale = (0..=j)
            .map(|k| rational::to_f64(&qa.derivative(k).eval_rational(&ax)))
            .fold(1.0f64, f64::max);
        prop_assert!((fd - exact).abs() <= 1e-6 * scale, "fd {} exact {}", fd, exact);
    }
}
