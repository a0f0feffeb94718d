//! Unreduced Gaussian fractions for long products.
//!
//! `BigInt` gcds are binary and quadratic in the bit length, so normalizing
//! after every product of million-bit values dominates everything else.
//! [`Lazy`] defers normalization to a single [`Lazy::finish`], and keeps a
//! small odd `base` whose primes cover the odd primes of the denominator, so
//! the final reduction needs gcds of small numbers only; powers of two are
//! split off by shifting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::Rational;

/// `(re + i·im) / den` with every odd prime of `den` dividing `base`.
#[derive(Clone, Debug)]
pub(crate) struct Lazy {
    re: BigInt,
    im: BigInt,
    den: BigInt,
    base: BigInt,
}

fn lcm_small(a: &BigInt, b: &BigInt) -> BigInt {
    if b.is_one() || (a % b).is_zero() {
        a.clone()
    } else if a.is_one() || (b % a).is_zero() {
        b.clone()
    } else {
        a.lcm(b)
    }
}

fn odd_part(x: &BigInt) -> BigInt {
    match x.trailing_zeros() {
        Some(t) if t > 0 => x >> t,
        _ => x.clone(),
    }
}

/// `n / d` in lowest terms with `d > 0`, given that every odd prime of `d`
/// divides `base`.
///
/// An odd prime of `gcd(n, d)` divides `h = gcd(d mod g, g)` with
/// `g = gcd(n mod base, base)`, so dividing out `h` until it is 1 reduces.
fn reduce(mut n: BigInt, mut d: BigInt, base: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (n, BigInt::one());
    }
    let twos = n.trailing_zeros().unwrap_or(0).min(d.trailing_zeros().unwrap_or(0));
    if twos > 0 {
        n >>= twos;
        d >>= twos;
    }
    loop {
        let g = (&n % base).gcd(base);
        if g.is_one() {
            break;
        }
        let h = (&d % &g).gcd(&g);
        if h.is_one() {
            break;
        }
        strip_power(&mut n, &mut d, &h);
    }
    if d < BigInt::zero() {
        n = -n;
        d = -d;
    }
    (n, d)
}

fn divides_both(n: &BigInt, d: &BigInt, p: &BigInt) -> bool {
    (n % p).is_zero() && (d % p).is_zero()
}

/// Divides `n` and `d` by the largest power of `h` dividing both, through
/// `h, h², h⁴, …` so that a power in the tens of thousands costs a few dozen
/// divisions instead of one pass per factor.
fn strip_power(n: &mut BigInt, d: &mut BigInt, h: &BigInt) {
    let mut pows = vec![h.clone()];
    while divides_both(n, d, pows.last().unwrap()) {
        let sq = pows.last().unwrap() * pows.last().unwrap();
        pows.push(sq);
    }
    pows.pop();
    for p in pows.iter().rev() {
        if divides_both(n, d, p) {
            *n /= p;
            *d /= p;
        }
    }
}

/// A common multiple of `a` and `b`, exact when one divides the other.
fn common_multiple(a: &BigInt, b: &BigInt) -> BigInt {
    if (a % b).is_zero() {
        a.clone()
    } else if (b % a).is_zero() {
        b.clone()
    } else {
        a * b
    }
}

impl Lazy {
    pub(crate) fn zero() -> Self {
        Lazy::from_parts(BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub(crate) fn one() -> Self {
        Lazy::from_parts(BigInt::one(), BigInt::zero(), BigInt::one())
    }

    fn from_parts(re: BigInt, im: BigInt, den: BigInt) -> Self {
        let base = odd_part(&den);
        Lazy { re, im, den, base }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub(crate) fn mul(&self, o: &Lazy) -> Lazy {
        if self.is_zero() || o.is_zero() {
            return Lazy::zero();
        }
        Lazy {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
            den: &self.den * &o.den,
            base: lcm_small(&self.base, &o.base),
        }
    }

    pub(crate) fn add(&self, o: &Lazy) -> Lazy {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let den = common_multiple(&self.den, &o.den);
        let (s, t) = (&den / &self.den, &den / &o.den);
        Lazy {
            re: &self.re * &s + &o.re * &t,
            im: &self.im * &s + &o.im * &t,
            den,
            base: lcm_small(&self.base, &o.base),
        }
    }

    /// `self · c` for a small rational `c`.
    pub(crate) fn scale(&self, c: &Rational) -> Lazy {
        if c.is_zero() {
            return Lazy::zero();
        }
        Lazy {
            re: &self.re * c.numer(),
            im: &self.im * c.numer(),
            den: &self.den * c.denom(),
            base: lcm_small(&self.base, &odd_part(c.denom())),
        }
    }

    pub(crate) fn pow(&self, mut e: u64) -> Lazy {
        let mut acc = Lazy::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// The same value over a reduced denominator, keeping `base`.
    pub(crate) fn normalized(&self) -> Lazy {
        let (re, dr) = reduce(self.re.clone(), self.den.clone(), &self.base);
        let (im, di) = reduce(self.im.clone(), self.den.clone(), &self.base);
        let den = common_multiple(&dr, &di);
        Lazy {
            re: re * (&den / &dr),
            im: im * (&den / &di),
            den,
            base: self.base.clone(),
        }
    }

    pub(crate) fn finish(self) -> GaussianRational {
        let (re, dr) = reduce(self.re, self.den.clone(), &self.base);
        let (im, di) = reduce(self.im, self.den, &self.base);
        GaussianRational::new(Rational::new_raw(re, dr), Rational::new_raw(im, di))
    }
}

impl From<&GaussianRational> for Lazy {
    fn from(z: &GaussianRational) -> Self {
        let den = lcm_small(z.re.denom(), z.im.denom());
        Lazy {
            re: z.re.numer() * (&den / z.re.denom()),
            im: z.im.numer() * (&den / z.im.denom()),
            base: odd_part(&den),
            den,
        }
    }
}
