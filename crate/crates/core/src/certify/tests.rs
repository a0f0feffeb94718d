use super::*;
use crate::qpoly::rational::{int, rat, to_f64};
use crate::qpoly::{FactoredPoly, GPoly, GaussianRational, QPoly};

fn p(c: &[i64]) -> QPoly {
    QPoly::from_ints(c)
}

fn gp(c: &[i64]) -> GPoly {
    GPoly::from(&p(c))
}

#[test]
fn lower_bound_examples() {
    let b = CertifyBudget::default();
    let c = circle_lower_bound(&gp(&[-1, 0, 1]), &int(2), &b).unwrap();
    assert!(c.bound <= int(3) && to_f64(&c.bound) >= 2.9, "{}", c.bound);
    assert!(replay_circle_lower(&gp(&[-1, 0, 1]), &c).is_ok());
    let c = circle_lower_bound(&gp(&[0, 1]), &int(1), &b).unwrap();
    assert!(c.bound > int(0) && c.bound <= int(1));
    assert!(matches!(
        circle_lower_bound(&gp(&[-1, 1]), &int(1), &b),
        Err(CertifyError::BudgetExhausted { .. })
    ));
}

#[test]
fn replay_rejects_tampering() {
    let g = gp(&[-1, 0, 1]);
    let c = circle_lower_bound(&g, &int(2), &CertifyBudget::default()).unwrap();
    let mut t = c.clone();
    t.bound = int(4);
    assert!(replay_circle_lower(&g, &t).is_err());
    let mut t = c.clone();
    t.right.remove(1);
    t.right.swap(0, 1);
    assert!(replay_circle_lower(&g, &t).is_err());
    let mut t = c;
    t.left.pop();
    assert!(replay_circle_lower(&g, &t).is_err());
}

#[test]
fn gaussian_coefficients() {
    // z - i/2 on |z| = 1: minimum 1/2
    let g = GPoly::minus_constant(&p(&[0, 1]), &GaussianRational::new(int(0), rat(1, 2)));
    let c = circle_lower_bound(&g, &int(1), &CertifyBudget::default()).unwrap();
    assert!(c.bound <= rat(1, 2) && to_f64(&c.bound) > 0.49);
    let n = count_roots_in_disc(&g, &GaussianRational::zero(), &int(1)).unwrap();
    assert_eq!(n.count, 1);
    let n = count_roots_in_disc(&g, &GaussianRational::zero(), &rat(1, 4)).unwrap();
    assert_eq!(n.count, 0);
    assert_eq!(
        count_roots_in_disc(&g, &GaussianRational::zero(), &rat(1, 2)),
        Err(CertifyError::BoundaryRoot)
    );
}

#[test]
fn upper_bound_examples() {
    assert_eq!(circle_upper_bound(&gp(&[0, 2, 0, 1]), &int(2)).bound, int(24));
    assert_eq!(circle_upper_bound(&gp(&[5]), &int(7)).bound, int(5));
    assert_eq!(circle_upper_bound(&gp(&[0, 1]), &rat(1, 2)).bound, int(1));
}

#[test]
fn correction_bound_policies_agree_in_direction() {
    let mut corr = FactoredPoly::one();
    corr.push(p(&[1, 0, 1]), 3).unwrap();
    corr.push(p(&[-1, 1]), 2).unwrap();
    for k in 0..4 {
        let exact = correction_upper_bound(&corr, 3, k, &rat(5, 2), 1000).bound;
        let coarse = correction_upper_bound(&corr, 3, k, &rat(5, 2), 0).bound;
        let dense = corr.expand().shift_up(3).derivative(k);
        assert_eq!(exact, circle_upper_bound(&GPoly::from(&dense), &rat(5, 2)).bound);
        assert!(exact <= coarse);
    }
}

#[test]
fn count_examples() {
    let o = GaussianRational::zero();
    assert_eq!(count_roots_in_disc(&gp(&[1, 0, 0, 0, 1]), &o, &int(2)).unwrap().count, 4);
    assert_eq!(count_roots_in_disc(&gp(&[1, 0, 0, 0, 1]), &o, &rat(1, 2)).unwrap().count, 0);
    assert_eq!(count_roots_in_disc(&gp(&[0, 0, -3, 1]), &o, &int(2)).unwrap().count, 2);
    assert_eq!(count_roots_in_disc(&gp(&[0, 1]), &o, &int(1)).unwrap().count, 1);
    assert_eq!(count_roots_in_disc(&gp(&[7]), &o, &int(1)).unwrap().count, 0);
    // root at -r itself
    assert_eq!(count_roots_in_disc(&gp(&[2, 1]), &o, &int(2)), Err(CertifyError::BoundaryRoot));
    // off-center disc around 3 catches the root 3 only
    let c = GaussianRational::real(int(3));
    assert_eq!(count_roots_in_disc(&gp(&[0, 0, -3, 1]), &c, &int(1)).unwrap().count, 1);
    // (z-1)^3 (z+1/2): multiplicities count
    let g = &p(&[-1, 1]).pow(3) * &QPoly::from_coeffs(vec![rat(1, 2), int(1)]);
    assert_eq!(count_roots_in_disc(&GPoly::from(&g), &o, &int(2)).unwrap().count, 4);
    assert_eq!(count_roots_in_disc(&GPoly::from(&g), &o, &rat(3, 4)).unwrap().count, 1);
}

#[test]
fn on_circle_examples() {
    assert!(roots_on_circle(&p(&[1, 0, 1]), &int(1)).unwrap());
    assert!(!roots_on_circle(&p(&[1, 0, 1]), &int(2)).unwrap());
    assert!(roots_on_circle(&QPoly::from_coeffs(vec![rat(-3, 2), int(1)]), &rat(3, 2)).unwrap());
    // reflection pairs 1 with 4 at r = 2, yet no root has modulus 2
    assert!(!roots_on_circle(&(&p(&[-1, 1]) * &p(&[-4, 1])), &int(2)).unwrap());
    // 3/5 + 4/5 i on the unit circle, via its quadratic
    let q = QPoly::from_coeffs(vec![int(1), rat(-6, 5), int(1)]);
    assert!(roots_on_circle(&q, &int(1)).unwrap());
    assert!(!roots_on_circle(&q, &rat(99, 100)).unwrap());
}
