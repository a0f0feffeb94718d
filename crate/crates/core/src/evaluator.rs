//! Certified values of the limit function `f = lim f_n` from a finite log.
//!
//! Every future term satisfies `|ε_n z^{n+1} P_n(z)| < (M/n)^{n+1+deg P_n}`
//! on `|z| ≤ R`, `M = max(1, R)`, whatever the later choices are: this is
//! `|ε_n| < Γ_n` combined with `|P(z)| ≤ L(P)·M^{deg P}`. Since `P_N | P_n`,
//! the exponent is at least `n + 1 + deg P_N`, so the tail past the last
//! stage `N` is bounded without knowing any later stage.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::log::Construction;
use crate::qpoly::rational::{format_rational, max, pow, round_up_dyadic, sqrt_upper};
use crate::qpoly::serial::rational_str;
use crate::qpoly::{factorial, GaussianRational, Rational};

/// Exact terms summed before the geometric remainder takes over.
const EXACT_TERMS: usize = 16;
const BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("tail not controlled: {stages} stages need N + 1 > max(1, R) = {bound}")]
    TailNotControlled { stages: usize, bound: String },
    #[error("radius must be non-negative")]
    NegativeRadius,
    #[error("|z| exceeds the radius {0}")]
    OutsideRadius(String),
}

/// `f^(j)(z)` lies in the closed disc of radius `tail_radius` around `center`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedValue {
    pub z: GaussianRational,
    pub derivative: usize,
    /// `f_N^(j)(z)`, exact.
    pub center: GaussianRational,
    #[serde(with = "rational_str")]
    pub tail_radius: Rational,
    /// Last stage used.
    pub stages: usize,
}

impl CertifiedValue {
    /// Whether `|w − center| ≤ tail_radius`, decided on cross-multiplied
    /// integers so that no gcd of the (possibly million-bit) parts is taken.
    pub fn contains(&self, w: &GaussianRational) -> bool {
        let (a, b) = raw_difference(&w.re, &self.center.re);
        let (c, d) = raw_difference(&w.im, &self.center.im);
        let (bb, dd) = (&b * &b, &d * &d);
        let lhs = (&a * &a * &dd + &c * &c * &bb) * self.tail_radius.denom() * self.tail_radius.denom();
        let rhs = self.tail_radius.numer() * self.tail_radius.numer() * bb * dd;
        lhs <= rhs
    }

    /// `w − center` as floating point, without reducing the exact difference.
    pub fn offset_f64(&self, w: &GaussianRational) -> (f64, f64) {
        let part = |x: &Rational, y: &Rational| {
            let (n, d) = raw_difference(x, y);
            Rational::new_raw(n, d).to_f64().unwrap_or(f64::NAN)
        };
        (part(&w.re, &self.center.re), part(&w.im, &self.center.im))
    }
}

/// `x − y` as an unreduced numerator and positive denominator.
fn raw_difference(x: &Rational, y: &Rational) -> (BigInt, BigInt) {
    (
        x.numer() * y.denom() - y.numer() * x.denom(),
        x.denom() * y.denom(),
    )
}

impl std::fmt::Display for CertifiedValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (re, im) = self.center.to_f64();
        write!(
            f,
            "f^({})({}) = {} ± {}\n  ≈ {re:.17e} + {im:.17e}i (stage {})",
            self.derivative,
            self.z,
            self.center,
            format_rational(&self.tail_radius),
            self.stages
        )
    }
}

/// Certified `sup_{|z| ≤ R} |f(z) − f_N(z)|` for the last stage `N` of `c`.
pub fn tail_bound(c: &Construction, r: &Rational) -> Result<Rational, EvalError> {
    if r.is_negative() {
        return Err(EvalError::NegativeRadius);
    }
    let n = c.stages.len();
    let m = max(&Rational::one(), r);
    if Rational::from_integer((n + 1).into()) <= m {
        return Err(EvalError::TailNotControlled {
            stages: n,
            bound: format_rational(&m),
        });
    }
    let deg_p = c.last().p.degree();
    let term = |k: usize| -> Rational {
        let base = &m / Rational::from_integer(k.into());
        round_up_dyadic(&pow(&base, (k + 1 + deg_p) as u64), BITS)
    };
    let mut sum = Rational::zero();
    for k in n + 1..=n + EXACT_TERMS {
        sum = round_up_dyadic(&(sum + term(k)), BITS);
    }
    // k > n + EXACT_TERMS: (M/k)^e ≤ q^{k+1+deg P} with q = M/(n+EXACT_TERMS+1)
    let k0 = n + EXACT_TERMS + 1;
    let q = &m / Rational::from_integer(k0.into());
    let first = pow(&q, (k0 + 1 + deg_p) as u64);
    let rest = first / (Rational::one() - &q);
    Ok(round_up_dyadic(&(sum + rest), BITS))
}

/// Upper bound of `|z|` with a dyadic denominator.
pub fn modulus_upper(z: &GaussianRational) -> Rational {
    if z.im.is_zero() {
        return z.re.abs();
    }
    if z.re.is_zero() {
        return z.im.abs();
    }
    round_up_dyadic(&sqrt_upper(&z.norm_sqr(), BITS), BITS)
}

/// `f^(j)(z)` from the whole log, with `R = |z|` rounded up.
pub fn eval_certified(
    c: &Construction,
    z: &GaussianRational,
    j: usize,
) -> Result<CertifiedValue, EvalError> {
    eval_certified_within(c, z, j, &modulus_upper(z))
}

/// As [`eval_certified`] with a caller-chosen `R ≥ |z|`.
///
/// For `j > 0` the tail is transported by Cauchy's estimate
/// `|h^(j)(z)| ≤ j!·R'·sup_{|w|=R'}|h| / (R' − R)^{j+1}` with `R' = R + 1`,
/// or the midpoint of `R` and `N + 1` when `R + 1` is out of reach.
pub fn eval_certified_within(
    c: &Construction,
    z: &GaussianRational,
    j: usize,
    r: &Rational,
) -> Result<CertifiedValue, EvalError> {
    if &z.norm_sqr() > &(r * r) {
        return Err(EvalError::OutsideRadius(format_rational(r)));
    }
    let n = c.stages.len();
    let center = c.f_derivative_at(n, z, j);
    // every later term carries z^{N+2}; its j-th derivative vanishes at 0
    let tail_radius = if z.is_zero() && j <= n + 1 {
        Rational::zero()
    } else if j == 0 {
        tail_bound(c, r)?
    } else {
        let limit = Rational::from_integer((n + 1).into());
        let mut outer = r + Rational::one();
        if max(&Rational::one(), &outer) >= limit {
            outer = (r + &limit) / Rational::from_integer(2.into());
        }
        let sup = tail_bound(c, &outer)?;
        let gap = &outer - r;
        let k = Rational::from_integer(factorial(j));
        round_up_dyadic(&(k * &outer * sup / pow(&gap, (j + 1) as u64)), BITS)
    };
    Ok(CertifiedValue {
        z: z.clone(),
        derivative: j,
        center,
        tail_radius,
        stages: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_construction, BuildConfig, DerivativeCap};
    use crate::qpoly::rational::rat;

    fn j0_two() -> Construction {
        build_construction(&BuildConfig {
            cap: DerivativeCap::Fixed(0),
            ..BuildConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn containment_is_a_closed_disc() {
        let v = CertifiedValue {
            z: GaussianRational::zero(),
            derivative: 0,
            center: GaussianRational::new(rat(1, 3), rat(-1, 7)),
            tail_radius: rat(5, 6),
            stages: 2,
        };
        // 1/3 + 1/2 + i(−1/7 + 2/3) is at distance exactly 5/6 (3-4-5 triangle)
        let edge = GaussianRational::new(rat(1, 3) + rat(1, 2), rat(-1, 7) + rat(2, 3));
        assert!(v.contains(&edge));
        let beyond = GaussianRational::new(rat(1, 3) + rat(1, 2), rat(-1, 7) + rat(2, 3) + rat(1, 1000));
        assert!(!v.contains(&beyond));
        assert!(v.contains(&v.center));
        let (dx, dy) = v.offset_f64(&edge);
        assert!((dx - 0.5).abs() < 1e-15 && (dy - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tail_examples() {
        let c = j0_two();
        let t1 = tail_bound(&c, &rat(1, 1)).unwrap();
        assert!(t1 < rat(1, 20));
        let t_half = tail_bound(&c, &rat(1, 2)).unwrap();
        assert!(t_half <= t1);
        let t2 = tail_bound(&c, &rat(5, 2)).unwrap();
        assert!(t2 > t1);
        assert!(matches!(
            tail_bound(&c, &rat(3, 1)),
            Err(EvalError::TailNotControlled { .. })
        ));
        assert!(matches!(
            tail_bound(&c, &rat(4, 1)),
            Err(EvalError::TailNotControlled { .. })
        ));
    }

    #[test]
    fn origin_is_exact() {
        let c = j0_two();
        for j in 0..=3 {
            let v = eval_certified(&c, &GaussianRational::zero(), j).unwrap();
            assert!(v.tail_radius.is_zero());
        }
        let v = eval_certified(&c, &GaussianRational::zero(), 0).unwrap();
        assert!(v.center.is_zero());
    }

    #[test]
    fn derivative_tail_is_finite() {
        let c = j0_two();
        let z = GaussianRational::real(rat(1, 2));
        let v0 = eval_certified(&c, &z, 0).unwrap();
        let v1 = eval_certified(&c, &z, 1).unwrap();
        assert!(v1.tail_radius > v0.tail_radius);
        assert_eq!(v1.center, c.f_derivative_at(2, &z, 1));
        // near the edge the outer radius falls back to the midpoint
        let w = GaussianRational::real(rat(5, 2));
        assert!(eval_certified(&c, &w, 1).is_ok());
    }
}
