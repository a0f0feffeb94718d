use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, parse_rational, ParseNumberError, Rational};

/// Complex number `re + im·i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    /// `|x|² = re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -&self.im / &n))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GaussianRational::new(&self.re * c, &self.im * c)
    }

    pub fn pow(&self, e: u64) -> Self {
        super::lazy::Lazy::from(self).pow(e).finish()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            super::rational::to_f64(&self.re),
            super::rational::to_f64(&self.im),
        )
    }

    /// Parses `a`, `b*i`, `a+b*i`, `a-b*i`, `i`, `-i`, `a+i`, `b/c*i`.
    pub fn parse(s: &str) -> Result<Self, ParseNumberError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ParseNumberError::new(s, "Gaussian rational a+b*i");
        if t.is_empty() {
            return Err(err());
        }
        // split at the last sign that is not the leading one
        let split = t
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (first, second) = match split {
            Some(k) => (&t[..k], Some(&t[k..])),
            None => (t.as_str(), None),
        };
        let mut out = GaussianRational::zero();
        let mut saw_re = false;
        let mut saw_im = false;
        for term in std::iter::once(first).chain(second) {
            if let Some(body) = term.strip_suffix('i') {
                if saw_im {
                    return Err(err());
                }
                saw_im = true;
                let body = body.strip_suffix('*').unwrap_or(body);
                out.im = match body {
                    "" | "+" => Rational::one(),
                    "-" => -Rational::one(),
                    b => parse_rational(b.strip_prefix('+').unwrap_or(b)).map_err(|_| err())?,
                };
            } else {
                if saw_re || saw_im {
                    return Err(err());
                }
                saw_re = true;
                out.re = parse_rational(term.strip_prefix('+').unwrap_or(term)).map_err(|_| err())?;
            }
        }
        Ok(out)
    }
}

fn imaginary_part(im: &Rational) -> String {
    if im.is_one() {
        "i".into()
    } else {
        format!("{}*i", format_rational(im))
    }
}

impl fmt::Display for GaussianRational {
    /// `p/q+r/s*i`; either part is dropped when zero (`0` for zero itself).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) if self.im.is_negative() => write!(f, "-{}", imaginary_part(&-&self.im)),
            (true, false) => write!(f, "{}", imaginary_part(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{}{}{}",
                    format_rational(&self.re),
                    sign,
                    imaginary_part(&self.im.abs())
                )
            }
        }
    }
}

impl From<Rational> for GaussianRational {
    fn from(re: Rational) -> Self {
        GaussianRational::real(re)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: GaussianRational) -> GaussianRational {
        &self + &o
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: GaussianRational) -> GaussianRational {
        &self - &o
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: GaussianRational) -> GaussianRational {
        &self * &o
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}
