use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{CertifyBudget, CertifyError};
use crate::qpoly::rational::{
    max, pow, round_down_dyadic, round_up_dyadic, sqrt_lower, sqrt_upper,
};
use crate::qpoly::serial::{rational_str, rational_vec};
use crate::qpoly::{falling_factorial, FactoredPoly, GPoly, GaussIntPoly, QPoly, Rational};

/// Evidence that `|g| ≥ bound` on `|z| = radius`.
///
/// The circle is split into the right half `z(t) = r((1−t²) + 2ti)/(1+t²)`
/// and its negation, `t ∈ [−1, 1]`; `right` and `left` hold the arc
/// breakpoints of each half.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleLowerCert {
    #[serde(with = "rational_str")]
    pub radius: Rational,
    #[serde(with = "rational_str")]
    pub bound: Rational,
    #[serde(with = "rational_vec")]
    pub right: Vec<Rational>,
    #[serde(with = "rational_vec")]
    pub left: Vec<Rational>,
    pub arc_count: usize,
    pub max_depth: u32,
    pub precision: u32,
}

/// `sup |g| ≤ bound` on `|z| = radius`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleUpperCert {
    #[serde(with = "rational_str")]
    pub radius: Rational,
    #[serde(with = "rational_str")]
    pub bound: Rational,
}

/// Everything per-(g, r) that the arc bound needs.
struct ArcContext {
    g: GaussIntPoly,
    dg: GaussIntPoly,
    deg: usize,
    rn: BigInt,
    rd: BigInt,
    r2: Rational,
    /// `B_k ≥ Σ_m |A_m| C(m,k) r^(m−k)` for `k ≥ 2`, index `k − 2`.
    tail: Vec<Rational>,
    bits: u32,
}

fn abs_upper(c: &crate::qpoly::GaussianRational, bits: u32) -> Rational {
    if c.im.is_zero() {
        c.re.abs()
    } else if c.re.is_zero() {
        c.im.abs()
    } else {
        round_up_dyadic(&sqrt_upper(&c.norm_sqr(), bits), bits)
    }
}

impl ArcContext {
    fn new(g: &GPoly, r: &Rational, bits: u32) -> Self {
        let deg = g.deg().unwrap_or(0);
        let abs: Vec<Rational> = g.coeffs().iter().map(|c| abs_upper(c, bits)).collect();
        let mut tail = Vec::new();
        for k in 2..=deg {
            // Σ_m |A_m| C(m,k) r^(m−k) by Horner in r
            let mut acc = Rational::zero();
            for m in (k..=deg).rev() {
                let binom = falling_factorial(m, k) / falling_factorial(k, k);
                acc = acc * r + &abs[m] * Rational::from_integer(binom);
            }
            tail.push(round_up_dyadic(&acc, bits));
        }
        let gi = g.to_int();
        ArcContext {
            dg: gi.derivative(),
            g: gi,
            deg,
            rn: r.numer().clone(),
            rd: r.denom().clone(),
            r2: r * r,
            tail,
            bits,
        }
    }

    /// Lower bound of `|g|` on the arc `[s, t]` of the given half.
    fn arc_bound(&self, s: &Rational, t: &Rational, left: bool) -> (Rational, Rational) {
        let bits = self.bits;
        let u: Rational = (s + t) / Rational::from_integer(2.into());
        let (a, b) = (u.numer(), u.denom());
        let (a2, b2) = (a * a, b * b);
        let sign = if left { -BigInt::one() } else { BigInt::one() };
        let nre = &sign * &self.rn * (&b2 - &a2);
        let nim = &sign * &self.rn * BigInt::from(2) * a * b;
        let m = &self.rd * (&a2 + &b2);
        let d = self.deg;

        let mpow = num_traits::pow(m.clone(), d);
        let (gr, gi) = self.g.eval_homogeneous(&nre, &nim, &m);
        // left unreduced: only floors and square roots of it are taken
        let gabs2 = Rational::new_raw(&gr * &gr + &gi * &gi, &self.g.den * &self.g.den * &mpow * &mpow);
        let gval = round_down_dyadic(&sqrt_lower(&gabs2, bits), bits);

        let dval = if d >= 1 {
            let mpow1 = num_traits::pow(m.clone(), d - 1);
            let (hr, hi) = self.dg.eval_homogeneous(&nre, &nim, &m);
            let habs2 =
                Rational::new_raw(&hr * &hr + &hi * &hi, &self.dg.den * &self.dg.den * &mpow1 * &mpow1);
            round_up_dyadic(&sqrt_upper(&habs2, bits), bits)
        } else {
            Rational::zero()
        };

        let one = Rational::one();
        let u2 = &u * &u;
        let chord2 = |x: &Rational| {
            let diff = &u - x;
            Rational::from_integer(4.into()) * &self.r2 * &diff * &diff
                / ((&one + &u2) * (&one + x * x))
        };
        let rho2 = max(&chord2(s), &chord2(t));
        let rho = round_up_dyadic(&sqrt_upper(&rho2, bits), bits);
        let mut tail = Rational::zero();
        for bk in self.tail.iter().rev() {
            tail = round_up_dyadic(&(tail * &rho + bk), bits);
        }
        let tail = round_up_dyadic(&(tail * &rho * &rho), bits);
        let bound = &gval - round_up_dyadic(&(&dval * &rho), bits) - tail;
        (bound, gval)
    }
}

fn check_radius(r: &Rational) -> Result<(), CertifyError> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(CertifyError::NonPositiveRadius)
    }
}

/// Certified `0 < λ ≤ min_{|z|=r} |g(z)|`.
///
/// Arcs are bisected until their bound is positive and within a factor
/// `63/64` of `|g|` at the arc midpoint or of the smallest midpoint value
/// seen so far (or the tight depth is reached).
/// A root on or very near the circle exhausts the budget.
pub fn circle_lower_bound(
    g: &GPoly,
    r: &Rational,
    budget: &CertifyBudget,
) -> Result<CircleLowerCert, CertifyError> {
    if g.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    check_radius(r)?;
    let ctx = ArcContext::new(g, r, budget.precision);
    let tau_num = Rational::new(63.into(), 64.into());
    let mut halves: [Vec<Rational>; 2] = [Vec::new(), Vec::new()];
    let mut min: Option<Rational> = None;
    let mut arcs = 0usize;
    let mut deepest = 0u32;
    // smallest |g| at an arc midpoint so far, an upper bound on the minimum
    let mut best: Option<Rational> = None;
    for (h, left) in [false, true].into_iter().enumerate() {
        let start: Vec<Rational> = (-2..=2).map(|k| Rational::new(k.into(), 2.into())).collect();
        let mut out = vec![start[0].clone()];
        // explicit stack, processed left to right
        let mut stack: Vec<(Rational, Rational, u32)> = start
            .windows(2)
            .rev()
            .map(|w| (w[0].clone(), w[1].clone(), 0))
            .collect();
        while let Some((s, t, depth)) = stack.pop() {
            let (bound, gval) = ctx.arc_bound(&s, &t, left);
            if best.as_ref().is_none_or(|b| &gval < b) {
                best = Some(gval.clone());
            }
            let positive = bound.is_positive();
            // close to this arc's own value or to the smallest value seen anywhere
            let target = best.as_ref().unwrap();
            let tight = positive
                && (bound >= &tau_num * &gval
                    || bound >= &tau_num * target
                    || depth >= budget.tight_depth);
            if tight {
                arcs += 1;
                if arcs > budget.max_arcs {
                    return Err(CertifyError::BudgetExhausted { arcs, depth: deepest });
                }
                deepest = deepest.max(depth);
                min = Some(match min {
                    Some(m) if m <= bound => m,
                    _ => bound,
                });
                out.push(t);
                continue;
            }
            if depth >= budget.max_depth {
                if positive {
                    // loose but valid
                    arcs += 1;
                    deepest = deepest.max(depth);
                    min = Some(match min {
                        Some(m) if m <= bound => m,
                        _ => bound,
                    });
                    out.push(t);
                    continue;
                }
                return Err(CertifyError::BudgetExhausted { arcs, depth });
            }
            if arcs + stack.len() + 2 > budget.max_arcs {
                return Err(CertifyError::BudgetExhausted { arcs, depth });
            }
            let mid = (&s + &t) / Rational::from_integer(2.into());
            stack.push((mid.clone(), t, depth + 1));
            stack.push((s, mid, depth + 1));
        }
        halves[h] = out;
    }
    let bound = round_down_dyadic(&min.expect("at least one arc"), budget.precision);
    if !bound.is_positive() {
        return Err(CertifyError::BudgetExhausted { arcs, depth: deepest });
    }
    let [right, left] = halves;
    Ok(CircleLowerCert {
        radius: r.clone(),
        bound,
        right,
        left,
        arc_count: arcs,
        max_depth: deepest,
        precision: budget.precision,
    })
}

/// Re-derives the arc bounds of `cert` for `g` without subdividing and
/// returns their minimum; fails unless the breakpoints cover both halves and
/// the minimum is at least the stored bound.
pub fn replay_circle_lower(g: &GPoly, cert: &CircleLowerCert) -> Result<Rational, CertifyError> {
    if g.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    check_radius(&cert.radius)?;
    if !cert.bound.is_positive() {
        return Err(CertifyError::ReplayFailure("stored bound is not positive".into()));
    }
    let ctx = ArcContext::new(g, &cert.radius, cert.precision);
    let mut min: Option<Rational> = None;
    for (pts, left) in [(&cert.right, false), (&cert.left, true)] {
        let covers = pts.len() >= 2
            && pts[0] == -Rational::one()
            && pts[pts.len() - 1] == Rational::one()
            && pts.windows(2).all(|w| w[0] < w[1]);
        if !covers {
            return Err(CertifyError::ReplayFailure("arcs do not cover the circle".into()));
        }
        for w in pts.windows(2) {
            let (b, _) = ctx.arc_bound(&w[0], &w[1], left);
            if min.as_ref().is_none_or(|m| &b < m) {
                min = Some(b);
            }
        }
    }
    let min = min.expect("nonempty cover");
    if min < cert.bound {
        return Err(CertifyError::ReplayFailure(format!(
            "recomputed minimum {} below stored bound {}",
            crate::qpoly::rational::format_rational(&round_down_dyadic(&min, 32)),
            crate::qpoly::rational::format_rational(&cert.bound)
        )));
    }
    Ok(min)
}

/// `L(g)·max(1, r)^deg g ≥ sup_{|z|=r} |g(z)|`.
pub fn circle_upper_bound(g: &GPoly, r: &Rational) -> CircleUpperCert {
    let bits = 64;
    let len: Rational = g.coeffs().iter().map(|c| abs_upper(c, bits)).sum();
    let d = g.deg().unwrap_or(0) as u64;
    let base = max(&Rational::one(), r);
    CircleUpperCert {
        radius: r.clone(),
        bound: len * pow(&base, d),
    }
}

/// Upper bound of `|(z^shift · corr)^(k)|` on `|z| = r`.
///
/// Up to `expansion_ceiling` the product is expanded and its exact length
/// used. Beyond it, `L(p^(k)) ≤ D(D−1)⋯(D−k+1)·L(p)` with `D = deg p` and
/// the factor-wise overestimate of `L(corr)`.
pub fn correction_upper_bound(
    corr: &FactoredPoly,
    shift: usize,
    k: usize,
    r: &Rational,
    expansion_ceiling: usize,
) -> CircleUpperCert {
    let total = corr.degree() + shift;
    let base = max(&Rational::one(), r);
    if k > total {
        return CircleUpperCert {
            radius: r.clone(),
            bound: Rational::zero(),
        };
    }
    let bound = if total <= expansion_ceiling {
        let p: QPoly = corr.expand().shift_up(shift).derivative(k);
        p.length() * pow(&base, (total - k) as u64)
    } else {
        Rational::from_integer(falling_factorial(total, k))
            * corr.length_upper()
            * pow(&base, (total - k) as u64)
    };
    CircleUpperCert {
        radius: r.clone(),
        bound,
    }
}

