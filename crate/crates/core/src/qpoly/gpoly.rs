use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::dense::{falling_factorial, lcm_cheap, QPoly};
use super::gaussian::GaussianRational;
use super::intpoly::{self, IntPoly};
use super::rational::Rational;

/// Polynomial with Gaussian-rational coefficients, e.g. `f^(j)(z) - α` for
/// a non-real target `α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GPoly {
    coeffs: Vec<GaussianRational>,
}

impl GPoly {
    pub fn from_coeffs(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        GPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient_of(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `p(z) - alpha`.
    pub fn minus_constant(p: &QPoly, alpha: &GaussianRational) -> Self {
        let mut coeffs: Vec<GaussianRational> = p
            .coeffs()
            .iter()
            .map(|c| GaussianRational::real(c.clone()))
            .collect();
        if coeffs.is_empty() {
            coeffs.push(GaussianRational::zero());
        }
        coeffs[0] = &coeffs[0] - alpha;
        GPoly::from_coeffs(coeffs)
    }

    pub fn conj(&self) -> Self {
        GPoly {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Real and imaginary coefficient parts: `self = re + i·im`.
    pub fn split(&self) -> (QPoly, QPoly) {
        (
            QPoly::from_coeffs(self.coeffs.iter().map(|c| c.re.clone()).collect()),
            QPoly::from_coeffs(self.coeffs.iter().map(|c| c.im.clone()).collect()),
        )
    }

    /// `Some(p)` when every coefficient is real.
    pub fn as_real(&self) -> Option<QPoly> {
        self.coeffs
            .iter()
            .all(|c| c.is_real())
            .then(|| self.split().0)
    }

    pub fn derivative(&self, order: usize) -> GPoly {
        if order == 0 {
            return self.clone();
        }
        GPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(order)
                .map(|(k, c)| c.scale(&Rational::from_integer(falling_factorial(k, order))))
                .collect(),
        )
    }

    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// `self(z + c)`.
    pub fn taylor_shift(&self, c: &GaussianRational) -> GPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] = &a[j] + &t;
            }
        }
        GPoly::from_coeffs(a)
    }

    /// Gaussian-integer form `(re + i·im) / den`, `den > 0`.
    pub(crate) fn to_int(&self) -> GaussIntPoly {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            lcm_cheap(lcm_cheap(acc, c.re.denom()), c.im.denom())
        });
        let conv = |x: &Rational| x.numer() * (&den / x.denom());
        let mut re: IntPoly = self.coeffs.iter().map(|c| conv(&c.re)).collect();
        let mut im: IntPoly = self.coeffs.iter().map(|c| conv(&c.im)).collect();
        intpoly::trim(&mut re);
        intpoly::trim(&mut im);
        GaussIntPoly {
            re,
            im,
            den,
            degree: self.deg(),
        }
    }
}

impl From<&QPoly> for GPoly {
    fn from(p: &QPoly) -> Self {
        GPoly::minus_constant(p, &GaussianRational::zero())
    }
}

/// `(re(z) + i·im(z)) / den` with integer coefficient vectors.
#[derive(Clone, Debug)]
pub(crate) struct GaussIntPoly {
    pub re: IntPoly,
    pub im: IntPoly,
    pub den: BigInt,
    pub degree: Option<usize>,
}

impl GaussIntPoly {
    pub fn coeff(&self, k: usize) -> (BigInt, BigInt) {
        (
            self.re.get(k).cloned().unwrap_or_else(BigInt::zero),
            self.im.get(k).cloned().unwrap_or_else(BigInt::zero),
        )
    }

    pub fn derivative(&self) -> GaussIntPoly {
        GaussIntPoly {
            re: intpoly::derivative(&self.re),
            im: intpoly::derivative(&self.im),
            den: self.den.clone(),
            degree: self.degree.and_then(|d| d.checked_sub(1)),
        }
    }

    /// Homogeneous evaluation at `(nre + i·nim) / m`: returns the Gaussian
    /// integer `Σ a_k (nre + i·nim)^k m^(d-k)` with `d = degree`, so the value
    /// is that number divided by `den · m^d`.
    pub fn eval_homogeneous(&self, nre: &BigInt, nim: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
        let Some(d) = self.degree else {
            return (BigInt::zero(), BigInt::zero());
        };
        let (mut ar, mut ai) = self.coeff(d);
        let mut mpow = BigInt::one();
        for k in (0..d).rev() {
            mpow *= m;
            let nr = &ar * nre - &ai * nim;
            let ni = &ar * nim + &ai * nre;
            let (cr, ci) = self.coeff(k);
            ar = nr + cr * &mpow;
            ai = ni + ci * &mpow;
        }
        (ar, ai)
    }
}
