use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::gaussian::GaussianRational;
use super::intpoly::{self, IntPoly};
use super::rational::{format_rational, int, Rational};
use super::PolyError;

/// Degree of a polynomial; the zero polynomial has degree minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Dense univariate polynomial over Q, coefficients indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Rational::one())
    }

    /// The indeterminate `z`.
    pub fn z() -> Self {
        QPoly::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::from_coeffs(vec![c])
    }

    /// `c·z^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        QPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::from_coeffs(c.iter().map(|&x| int(x)).collect())
    }

    /// `z - a`.
    pub fn linear_root(a: &Rational) -> Self {
        QPoly::from_coeffs(vec![-a, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree, with the zero polynomial mapped to `None`.
    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient_of(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Order of vanishing at 0 (`None` for the zero polynomial).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift_up(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    /// Divide by `z^k`, dropping the low coefficients.
    pub fn shift_down(&self, k: usize) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Exact derivative of the given order; order 0 is the identity.
    pub fn derivative(&self, order: usize) -> QPoly {
        if order == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(order)
            .map(|(k, c)| c * falling_factorial(k, order))
            .collect();
        QPoly::from_coeffs(coeffs)
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.eval(&GaussianRational::real(x.clone())).re
    }

    /// Exact value at a Gaussian rational point, by integer Horner on the
    /// homogenized polynomial and a single final reduction.
    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let Some(d) = self.deg() else {
            return GaussianRational::zero();
        };
        let (p, den) = self.to_int();
        let m = z.re.denom().lcm(z.im.denom());
        let a = z.re.numer() * (&m / z.re.denom());
        let b = z.im.numer() * (&m / z.im.denom());
        let (mut re, mut im) = (p[d].clone(), BigInt::zero());
        let mut mpow = BigInt::one();
        let real = b.is_zero();
        for k in (0..d).rev() {
            mpow *= &m;
            if real {
                re = &re * &a + &p[k] * &mpow;
            } else {
                let nr = &re * &a - &im * &b;
                im = &re * &b + &im * &a;
                re = nr + &p[k] * &mpow;
            }
        }
        let scale = den * mpow;
        GaussianRational::new(
            Rational::new(re, scale.clone()),
            Rational::new(im, scale),
        )
    }

    /// Sum of absolute values of the coefficients.
    pub fn length(&self) -> Rational {
        let (p, den) = self.to_int();
        let total: BigInt = p.iter().map(|c| c.abs()).sum();
        Rational::new(total, den)
    }

    pub fn monic(&self) -> QPoly {
        match self.coeffs.last() {
            None => QPoly::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, e: u64) -> QPoly {
        let (p, den) = self.to_int();
        let num = intpoly::pow(&p, e);
        let den = num_traits::pow(den, e as usize);
        QPoly::from_int(&num, &den)
    }

    /// Long division over Q.
    pub fn div_rem(&self, b: &QPoly) -> Result<(QPoly, QPoly), PolyError> {
        let db = b.deg().ok_or(PolyError::DivisionByZero)?;
        let Some(da) = self.deg() else {
            return Ok((QPoly::zero(), QPoly::zero()));
        };
        if da < db {
            return Ok((QPoly::zero(), self.clone()));
        }
        let inv = b.leading_coefficient().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let top = &r[k + db];
            if top.is_zero() {
                continue;
            }
            let qc = top * &inv;
            for (j, c) in b.coeffs.iter().enumerate() {
                r[k + j] -= &qc * c;
            }
            q[k] = qc;
        }
        r.truncate(db);
        Ok((QPoly::from_coeffs(q), QPoly::from_coeffs(r)))
    }

    /// Quotient `a / b`; fails with `NonDivisible` when the remainder is nonzero.
    pub fn exact_divide(&self, b: &QPoly) -> Result<QPoly, PolyError> {
        if b.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(QPoly::zero());
        }
        // a = A/da, b = c·prim(B)/db; by Gauss's lemma prim(B) | A over Q iff
        // the integer quotient exists.
        let (pa, da) = self.to_int();
        let (pb, db) = b.to_int();
        let c = intpoly::content(&pb);
        let prim = intpoly::primitive(pb);
        let q = intpoly::div_exact(&pa, &prim).ok_or(PolyError::NonDivisible)?;
        Ok(QPoly::from_int(&q, &BigInt::one()).scale(&Rational::new(db, da * c)))
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, b: &QPoly) -> QPoly {
        if self.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return self.monic();
        }
        let va = self.valuation().unwrap_or(0);
        let vb = b.valuation().unwrap_or(0);
        let v = va.min(vb);
        let (pa, _) = self.shift_down(va).to_int();
        let (pb, _) = b.shift_down(vb).to_int();
        let g = intpoly::gcd(&pa, &pb);
        QPoly::from_int(&g, &BigInt::one()).monic().shift_up(v)
    }

    /// Squarefree part `p / gcd(p, p')`, monic: same distinct roots as `p`.
    pub fn radical(&self) -> Result<QPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let v = self.valuation().unwrap_or(0);
        let core = self.shift_down(v);
        let (pc, _) = core.to_int();
        let pc = intpoly::primitive(pc);
        let dpc = intpoly::derivative(&pc);
        let rad = if dpc.is_empty() || intpoly::coprime_modular(&pc, &dpc) {
            QPoly::from_int(&pc, &BigInt::one())
        } else {
            let g = intpoly::gcd(&pc, &dpc);
            let q = intpoly::div_exact(&pc, &g).expect("primitive gcd divides its argument");
            QPoly::from_int(&q, &BigInt::one())
        };
        let rad = rad.monic();
        Ok(if v > 0 { rad.shift_up(1) } else { rad })
    }

    /// `self(z + c)` for rational `c`.
    pub fn taylor_shift(&self, c: &Rational) -> QPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        QPoly::from_coeffs(a)
    }

    /// Integer form: `self = p / den` with `den > 0` the lcm of denominators.
    pub(crate) fn to_int(&self) -> (IntPoly, BigInt) {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| lcm_cheap(acc, c.denom()));
        let p = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (p, den)
    }

    pub(crate) fn from_int(p: &[BigInt], den: &BigInt) -> QPoly {
        QPoly::from_coeffs(
            p.iter()
                .map(|c| Rational::new(c.clone(), den.clone()))
                .collect(),
        )
    }

    /// Products of many factors via a balanced tree of integer multiplications.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a QPoly>) -> QPoly {
        let mut parts: Vec<(IntPoly, BigInt)> = factors.into_iter().map(|f| f.to_int()).collect();
        if parts.is_empty() {
            return QPoly::one();
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
        let (p, d) = parts.pop().unwrap();
        QPoly::from_int(&p, &d)
    }
}

/// `lcm(acc, d)`, skipping the gcd when `d` already divides `acc` (the
/// common case for coefficients sharing a large denominator).
pub(crate) fn lcm_cheap(acc: BigInt, d: &BigInt) -> BigInt {
    if d.is_one() || (&acc % d).is_zero() {
        acc
    } else {
        acc.lcm(d)
    }
}

pub(crate) fn falling_factorial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for t in 0..k {
        acc *= BigInt::from(n - t);
    }
    acc
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                f.write_str(&format_rational(&a))?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", format_rational(&a), mono)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::from_coeffs(
            (0..n)
                .map(|k| self.coefficient_of(k) + o.coefficient_of(k))
                .collect(),
        )
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::from_coeffs(
            (0..n)
                .map(|k| self.coefficient_of(k) - o.coefficient_of(k))
                .collect(),
        )
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let (a, da) = self.to_int();
        let (b, db) = o.to_int();
        QPoly::from_int(&intpoly::mul(&a, &b), &(da * db))
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $m(self, o: QPoly) -> QPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}
