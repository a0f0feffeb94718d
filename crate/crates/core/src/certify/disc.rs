use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::CertifyError;
use crate::qpoly::intpoly::{self, IntPoly};
use crate::qpoly::serial::rational_str;
use crate::qpoly::{GPoly, GaussianRational, QPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    /// Exact winding number from a Sturm sequence on the parametrized circle.
    CauchyIndex,
    /// Equal to the count of the other side of a certified Rouché inequality.
    Rouche,
}

/// Number of roots (with multiplicity) of a polynomial in the open disc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCountCert {
    pub center: GaussianRational,
    #[serde(with = "rational_str")]
    pub radius: Rational,
    pub count: usize,
    pub method: CountMethod,
}

/// `H(t) = U(t) + i·V(t)`, proportional by a positive factor to
/// `c·g(z(t))·(1+t²)^d` on the circle `z(t) = r((1−t²) + 2ti)/(1+t²)`, with
/// the rotation `c ∈ {1, i}` chosen so that `U` keeps full degree `2d`.
///
/// `z(t)` sweeps the whole circle except `z = −r` as `t` runs over the reals.
/// Fails with `BoundaryRoot` when `g(−r) = 0`.
fn circle_image(g: &GPoly, r: &Rational) -> Result<(IntPoly, IntPoly), CertifyError> {
    let at_minus_r = g.eval(&GaussianRational::real(-r));
    if at_minus_r.is_zero() {
        return Err(CertifyError::BoundaryRoot);
    }
    let gi = g.to_int();
    let d = gi.degree.ok_or(CertifyError::ZeroPolynomial)?;
    let rotate = at_minus_r.re.is_zero();
    let (rn, rd) = (r.numer(), r.denom());
    // C_k = A_k · rn^k · rd^(d−k), times i when rotating
    let coeff = |k: usize| -> (BigInt, BigInt) {
        let (a, b) = gi.coeff(k);
        let s = num_traits::pow(rn.clone(), k) * num_traits::pow(rd.clone(), d - k);
        if rotate {
            (-b * &s, a * &s)
        } else {
            (a * &s, b * &s)
        }
    };
    let s_poly: IntPoly = vec![BigInt::one(), BigInt::zero(), BigInt::one()];
    let mut s_pows: Vec<IntPoly> = vec![vec![BigInt::one()]];
    for k in 1..=d {
        s_pows.push(intpoly::mul(&s_pows[k - 1], &s_poly));
    }
    let (cr, ci) = coeff(d);
    let mut u: IntPoly = vec![cr];
    let mut v: IntPoly = vec![ci];
    for k in (0..d).rev() {
        // (u + iv)·((1 − t²) + 2t·i)
        let t2u = shift(&u, 2);
        let t2v = shift(&v, 2);
        let tu2 = intpoly::scale(&shift(&u, 1), &BigInt::from(2));
        let tv2 = intpoly::scale(&shift(&v, 1), &BigInt::from(2));
        let nu = intpoly::sub(&intpoly::sub(&u, &t2u), &tv2);
        let nv = intpoly::add(&intpoly::sub(&v, &t2v), &tu2);
        let (cr, ci) = coeff(k);
        u = intpoly::add(&nu, &intpoly::scale(&s_pows[d - k], &cr));
        v = intpoly::add(&nv, &intpoly::scale(&s_pows[d - k], &ci));
    }
    intpoly::trim(&mut u);
    intpoly::trim(&mut v);
    Ok((u, v))
}

fn shift(p: &[BigInt], k: usize) -> IntPoly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); k];
    out.extend_from_slice(p);
    out
}

/// Whether `g` vanishes somewhere on `|z| = r` (exact).
fn vanishes_on_circle(g: &GPoly, r: &Rational) -> Result<bool, CertifyError> {
    match circle_image(g, r) {
        Err(CertifyError::BoundaryRoot) => Ok(true),
        Err(e) => Err(e),
        Ok((u, v)) => {
            if v.is_empty() {
                return Ok(intpoly::count_real_roots(&u) > 0);
            }
            if intpoly::coprime_modular(&u, &v) {
                return Ok(false);
            }
            let h = intpoly::gcd(&u, &v);
            Ok(intpoly::count_real_roots(&h) > 0)
        }
    }
}

/// Exact number of roots of `g` (with multiplicity) in the open disc
/// `|z − center| < r`; `BoundaryRoot` if a root lies on the circle.
pub fn count_roots_in_disc(
    g: &GPoly,
    center: &GaussianRational,
    r: &Rational,
) -> Result<RootCountCert, CertifyError> {
    if g.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    if !r.is_positive() {
        return Err(CertifyError::NonPositiveRadius);
    }
    let shifted = if center.is_zero() {
        g.clone()
    } else {
        g.taylor_shift(center)
    };
    let (u, v) = circle_image(&shifted, r)?;
    let count = if v.is_empty() {
        // H real-valued: the argument never turns, no roots inside
        if intpoly::count_real_roots(&u) > 0 {
            return Err(CertifyError::BoundaryRoot);
        }
        0
    } else {
        if !intpoly::coprime_modular(&u, &v) {
            let h = intpoly::gcd(&u, &v);
            if intpoly::count_real_roots(&h) > 0 {
                return Err(CertifyError::BoundaryRoot);
            }
        }
        // winding number = −Ind(V/U)/2 over the real line
        let ind = intpoly::cauchy_index_real_line(&u, &v);
        debug_assert!(ind <= 0 && ind % 2 == 0, "Cauchy index {ind}");
        (-ind / 2) as usize
    };
    Ok(RootCountCert {
        center: center.clone(),
        radius: r.clone(),
        count,
        method: CountMethod::CauchyIndex,
    })
}

/// Whether `g` has a root of modulus exactly `r`.
///
/// A root `y` with `|y| = r` satisfies `ȳ = r²/y`, so it is a common root of
/// `g` and its reflection `z^d·g(r²/z)`. Coprimality (certified modularly)
/// settles the common case; otherwise the exact circle test decides, since
/// common roots off the circle also occur (e.g. `(z − 1)(z − 4)` at `r = 2`).
pub fn roots_on_circle(g: &QPoly, r: &Rational) -> Result<bool, CertifyError> {
    if g.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    if !r.is_positive() {
        return Err(CertifyError::NonPositiveRadius);
    }
    let Some(d) = g.deg() else {
        return Err(CertifyError::ZeroPolynomial);
    };
    if d == 0 {
        return Ok(false);
    }
    let r2 = r * r;
    let mut refl = vec![Rational::zero(); d + 1];
    let mut rp = Rational::one();
    for (m, c) in g.coeffs().iter().enumerate() {
        refl[d - m] = c * &rp;
        rp *= &r2;
    }
    let (a, _) = g.to_int();
    let (b, _) = QPoly::from_coeffs(refl).to_int();
    if intpoly::coprime_modular(&a, &b) {
        return Ok(false);
    }
    vanishes_on_circle(&GPoly::from(g), r)
}
