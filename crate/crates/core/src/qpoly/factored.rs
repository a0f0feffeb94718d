use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dense::QPoly;
use super::gaussian::GaussianRational;
use super::intpoly;
use super::lazy::Lazy;
use super::rational::{pow, Rational};
use super::PolyError;

/// One factor `poly^exponent` of a [`FactoredPoly`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub poly: QPoly,
    pub exponent: u32,
}

/// Product `scalar · Π poly_i^exponent_i`, kept unexpanded.
///
/// The correction polynomials of the construction reach degrees in the tens of
/// thousands; everything the construction needs from them (value at 0, low
/// coefficients, point values, derivative values at a point, length bounds)
/// is computed factor by factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredPoly {
    scalar: Rational,
    factors: Vec<Factor>,
}

impl FactoredPoly {
    pub fn one() -> Self {
        FactoredPoly {
            scalar: Rational::one(),
            factors: Vec::new(),
        }
    }

    /// Fails with `ZeroPolynomial` if the scalar or any factor is zero.
    pub fn new(scalar: Rational, factors: Vec<Factor>) -> Result<Self, PolyError> {
        if scalar.is_zero() || factors.iter().any(|f| f.poly.is_zero()) {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(FactoredPoly { scalar, factors })
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Appends `poly^exponent`; exponent 0 and constant `1` factors are skipped.
    pub fn push(&mut self, poly: QPoly, exponent: u32) -> Result<(), PolyError> {
        if poly.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if exponent == 0 || poly == QPoly::one() {
            return Ok(());
        }
        self.factors.push(Factor { poly, exponent });
        Ok(())
    }

    /// Σ exponent × factor degree.
    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|f| f.exponent as usize * f.poly.deg().unwrap_or(0))
            .sum()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.factors.iter().fold(self.scalar.clone(), |acc, f| {
            acc * pow(&f.poly.leading_coefficient(), f.exponent as u64)
        })
    }

    pub fn value_at_zero(&self) -> Rational {
        self.factors.iter().fold(self.scalar.clone(), |acc, f| {
            acc * pow(&f.poly.coefficient_of(0), f.exponent as u64)
        })
    }

    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        self.eval_lazy(z).finish()
    }

    fn eval_lazy(&self, z: &GaussianRational) -> Lazy {
        let mut acc = Lazy::from(&GaussianRational::real(self.scalar.clone()));
        for f in &self.factors {
            let v = f.poly.eval(z);
            if v.is_zero() {
                return Lazy::zero();
            }
            acc = acc.mul(&Lazy::from(&v).pow(f.exponent as u64));
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.eval(&GaussianRational::real(x.clone())).re
    }

    /// Coefficients of `z^0 ..= z^k`, via products truncated at `z^(k+1)`.
    pub fn low_coefficients(&self, k: usize) -> Vec<Rational> {
        let n = k + 1;
        let mut acc = vec![Lazy::zero(); n];
        acc[0] = Lazy::from(&GaussianRational::real(self.scalar.clone()));
        for f in &self.factors {
            let base: Vec<GaussianRational> = (0..n)
                .map(|t| GaussianRational::real(f.poly.coefficient_of(t)))
                .collect();
            let p = gseries_pow(&base, f.exponent as u64, n);
            acc = gseries_mul(&acc, &p, n);
        }
        acc.into_iter().map(|c| c.finish().re).collect()
    }

    pub fn coefficient_of(&self, k: usize) -> Rational {
        self.low_coefficients(k).pop().unwrap()
    }

    /// Taylor coefficients of `self(z0 + w)` for `w^0 ..= w^order`.
    pub fn taylor_at(&self, z0: &GaussianRational, order: usize) -> Vec<GaussianRational> {
        self.taylor_at_lazy(z0, order).into_iter().map(Lazy::finish).collect()
    }

    pub(crate) fn taylor_at_lazy(&self, z0: &GaussianRational, order: usize) -> Vec<Lazy> {
        let n = order + 1;
        let mut acc = vec![Lazy::zero(); n];
        acc[0] = Lazy::from(&GaussianRational::real(self.scalar.clone()));
        for f in &self.factors {
            let base = taylor_coefficients(&f.poly, z0, order);
            let p = gseries_pow(&base, f.exponent as u64, n);
            acc = gseries_mul(&acc, &p, n);
        }
        acc
    }

    /// `self^(j)(z0)` without expansion.
    pub fn derivative_at(&self, z0: &GaussianRational, j: usize) -> GaussianRational {
        self.derivative_at_lazy(z0, j).finish()
    }

    pub(crate) fn derivative_at_lazy(&self, z0: &GaussianRational, j: usize) -> Lazy {
        if j == 0 {
            return self.eval_lazy(z0);
        }
        let t = self.taylor_at_lazy(z0, j);
        t[j].scale(&Rational::from_integer(factorial(j)))
    }

    /// Full dense expansion (balanced product tree over Z).
    pub fn expand(&self) -> QPoly {
        let mut parts = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let (p, d) = f.poly.to_int();
            let e = f.exponent as u64;
            parts.push((
                intpoly::pow(&p, e),
                num_traits::pow(d, e as usize),
            ));
        }
        while parts.len() > 1 {
            let mut next = Vec::with_capacity(parts.len().div_ceil(2));
            let mut it = parts.into_iter();
            while let Some((a, da)) = it.next() {
                match it.next() {
                    Some((b, db)) => next.push((intpoly::mul(&a, &b), da * db)),
                    None => next.push((a, da)),
                }
            }
            parts = next;
        }
        match parts.pop() {
            None => QPoly::constant(self.scalar.clone()),
            Some((p, d)) => {
                let (sn, sd) = (self.scalar.numer(), self.scalar.denom());
                let p: Vec<BigInt> = if sn.is_one() { p } else { p.iter().map(|c| c * sn).collect() };
                QPoly::from_int(&p, &(d * sd))
            }
        }
    }

    /// `|scalar| · Π L(f_i)^e_i ≥ L(self)` by submultiplicativity of length.
    pub fn length_upper(&self) -> Rational {
        self.factors.iter().fold(self.scalar.abs(), |acc, f| {
            acc * pow(&f.poly.length(), f.exponent as u64)
        })
    }

    /// Multiplicity of `z0` as a root (0 when `self(z0) ≠ 0`).
    pub fn multiplicity_at(&self, z0: &GaussianRational) -> usize {
        self.factors
            .iter()
            .map(|f| f.exponent as usize * root_multiplicity(&f.poly, z0))
            .sum()
    }

    /// Structural divisibility: every factor of `self` occurs in `other`
    /// with at least the same total exponent.
    pub fn divides_structurally(&self, other: &FactoredPoly) -> bool {
        let mut need: Vec<(&QPoly, u64)> = Vec::new();
        for f in &self.factors {
            match need.iter_mut().find(|(p, _)| *p == &f.poly) {
                Some(entry) => entry.1 += f.exponent as u64,
                None => need.push((&f.poly, f.exponent as u64)),
            }
        }
        need.iter().all(|(p, e)| {
            let have: u64 = other
                .factors
                .iter()
                .filter(|f| &f.poly == *p)
                .map(|f| f.exponent as u64)
                .sum();
            have >= *e
        })
    }
}

impl From<QPoly> for FactoredPoly {
    fn from(p: QPoly) -> Self {
        let mut f = FactoredPoly::one();
        if p.is_zero() {
            f.scalar = Rational::zero();
        } else if p.is_constant() {
            f.scalar = p.coefficient_of(0);
        } else {
            f.factors.push(Factor { poly: p, exponent: 1 });
        }
        f
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Multiplicity of `z0` as a root of `p` (`p ≠ 0`).
pub fn root_multiplicity(p: &QPoly, z0: &GaussianRational) -> usize {
    if !p.eval(z0).is_zero() {
        return 0;
    }
    let d = p.deg().unwrap_or(0);
    let t = taylor_coefficients(p, z0, d);
    t.iter().position(|c| !c.is_zero()).unwrap_or(0)
}

/// Taylor coefficients `p^[k](z0) = p^(k)(z0)/k!` for `k ≤ order`, by
/// repeated synthetic division.
pub fn taylor_coefficients(p: &QPoly, z0: &GaussianRational, order: usize) -> Vec<GaussianRational> {
    let mut a: Vec<GaussianRational> = p
        .coeffs()
        .iter()
        .map(|c| GaussianRational::real(c.clone()))
        .collect();
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        if a.is_empty() {
            out.push(GaussianRational::zero());
            continue;
        }
        // synthetic division by (z - z0): remainder is the value
        let n = a.len();
        let mut q = vec![GaussianRational::zero(); n - 1];
        let mut acc = GaussianRational::zero();
        for k in (0..n).rev() {
            acc = &(&acc * z0) + &a[k];
            if k > 0 {
                q[k - 1] = acc.clone();
            }
        }
        out.push(acc);
        a = q;
    }
    out
}

fn gseries_mul(a: &[Lazy], b: &[Lazy], n: usize) -> Vec<Lazy> {
    let mut out = vec![Lazy::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out.iter().map(Lazy::normalized).collect()
}

/// `base^e` truncated to `n` terms. After splitting off the valuation `v`,
/// `q = c^e` with `c_0 ≠ 0` follows from `c·q′ = e·c′·q`:
/// `q_k = Σ_{i=1}^{k} ((e+1)i − k)·c_i·q_{k−i} / (k·c_0)`.
fn gseries_pow(base: &[GaussianRational], e: u64, n: usize) -> Vec<Lazy> {
    let mut out = vec![Lazy::zero(); n];
    if n == 0 {
        return out;
    }
    if e == 0 {
        out[0] = Lazy::one();
        return out;
    }
    let Some(v) = base.iter().position(|c| !c.is_zero()) else {
        return out;
    };
    let shift = match (v as u64).checked_mul(e) {
        Some(s) if s < n as u64 => s as usize,
        _ => return out,
    };
    let c: Vec<Lazy> = base[v..].iter().map(Lazy::from).collect();
    let m = n - shift;
    let inv0 = Lazy::from(&base[v].inv().expect("nonzero"));
    let mut q = Vec::with_capacity(m);
    q.push(c[0].pow(e));
    let e1 = BigInt::from(e) + 1;
    for k in 1..m {
        let mut acc = Lazy::zero();
        for i in 1..=k.min(c.len() - 1) {
            if c[i].is_zero() {
                continue;
            }
            let w = &e1 * BigInt::from(i) - BigInt::from(k);
            acc = acc.add(&c[i].mul(&q[k - i]).scale(&Rational::from_integer(w)));
        }
        let kk = Rational::new(BigInt::one(), BigInt::from(k));
        q.push(acc.mul(&inv0).scale(&kk).normalized());
    }
    for (k, x) in q.into_iter().enumerate() {
        out[shift + k] = x;
    }
    out
}
