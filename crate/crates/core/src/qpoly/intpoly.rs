//! Dense polynomials over Z (little-endian `Vec<BigInt>`, no trailing zeros).
//!
//! Everything that is hot in the construction (products, pseudo-remainders,
//! Sturm sequences) runs here, free of per-operation rational normalization.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) type IntPoly = Vec<BigInt>;

const KARATSUBA_CUTOFF: usize = 32;

pub(crate) fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[BigInt]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub(crate) fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        if !c.is_zero() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

/// Divides out the (positive) content; the sign of every coefficient is kept.
pub(crate) fn primitive(mut p: IntPoly) -> IntPoly {
    trim(&mut p);
    let g = content(&p);
    if !g.is_zero() && !g.is_one() {
        for c in p.iter_mut() {
            *c = &*c / &g;
        }
    }
    p
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        out.push(match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        out.push(match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x - y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => -y,
            (None, None) => unreachable!(),
        });
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[BigInt], c: &BigInt) -> IntPoly {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

pub(crate) fn neg(a: &[BigInt]) -> IntPoly {
    a.iter().map(|x| -x).collect()
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_into(dst: &mut [BigInt], src: &[BigInt], offset: usize) {
    for (k, c) in src.iter().enumerate() {
        dst[offset + k] += c;
    }
}

fn karatsuba(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.len().min(b.len()) <= KARATSUBA_CUTOFF {
        return schoolbook(a, b);
    }
    let m = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));
    if a1.is_empty() || b1.is_empty() {
        // unbalanced: split the longer operand only
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        let mut off = 0;
        for chunk in long.chunks(short.len().max(1)) {
            let part = karatsuba(chunk, short);
            add_into(&mut out, &part, off);
            off += chunk.len();
        }
        return out;
    }
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let sa = add(a0, a1);
    let sb = add(b0, b1);
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    if !sa.is_empty() && !sb.is_empty() {
        let mut z1 = karatsuba(&sa, &sb);
        z1.resize(z1.len().max(z0.len()).max(z2.len()), BigInt::zero());
        for (k, c) in z0.iter().enumerate() {
            z1[k] -= c;
        }
        for (k, c) in z2.iter().enumerate() {
            z1[k] -= c;
        }
        trim(&mut z1);
        add_into(&mut out, &z1, m);
    }
    add_into(&mut out, &z0, 0);
    add_into(&mut out, &z2, 2 * m);
    out
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = karatsuba(a, b);
    trim(&mut out);
    out
}

pub(crate) fn pow(a: &[BigInt], mut e: u64) -> IntPoly {
    let mut acc: IntPoly = vec![BigInt::one()];
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}

pub(crate) fn derivative(p: &[BigInt]) -> IntPoly {
    let mut out: IntPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect();
    trim(&mut out);
    out
}

/// Primitive gcd over Z (sign normalized so the leading coefficient is positive).
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut a = primitive(a.to_vec());
    let mut b = primitive(b.to_vec());
    if a.is_empty() {
        return normalize_sign(b);
    }
    if b.is_empty() {
        return normalize_sign(a);
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    if degree(&b) == Some(0) || coprime_modular(&a, &b) {
        return vec![BigInt::one()];
    }
    let seq = subresultant_prs(a, b);
    let last = seq.into_iter().last().expect("nonempty").0;
    if degree(&last) == Some(0) {
        return vec![BigInt::one()];
    }
    normalize_sign(primitive(last))
}

/// `lc(b)^(deg a − deg b + 1)·a mod b`.
fn prem_full(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let da = degree(a).expect("nonzero dividend");
    let db = degree(b).expect("nonzero divisor");
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut steps = 0;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        let shift = dr - db;
        for (k, c) in b.iter().enumerate() {
            r[k + shift] -= &lr * c;
        }
        trim(&mut r);
        steps += 1;
    }
    let missing = da + 1 - db - steps;
    if missing > 0 {
        let m = num_traits::pow(lb.clone(), missing);
        for c in r.iter_mut() {
            *c *= &m;
        }
    }
    r
}

/// Subresultant remainder sequence of `a, b` (`deg a ≥ deg b`), each entry
/// with the sign `c` making `c·P_k` a positive multiple of the `k`-th term of
/// the signed remainder sequence `p, q, −rem(p, q), …`.
fn subresultant_prs(a: IntPoly, b: IntPoly) -> Vec<(IntPoly, Sign)> {
    let mut seq = vec![(a, Sign::Plus), (b, Sign::Plus)];
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let n = seq.len();
        let (pa, pb) = (&seq[n - 2].0, &seq[n - 1].0);
        let da = degree(pa).unwrap();
        let db = degree(pb).unwrap();
        let delta = da - db;
        let r = prem_full(pa, pb);
        if r.is_empty() {
            break;
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        let next: IntPoly = r.iter().map(|c| c / &divisor).collect();
        debug_assert!(r.iter().zip(&next).all(|(c, q)| &(q * &divisor) == c));
        // rem(P_{k−1}, P_k) = divisor·P_{k+1} / lc(P_k)^(δ+1)
        let lb = &pb[db];
        let mut sign = -seq[n - 2].1 * divisor.sign();
        if lb.is_negative() && (delta + 1) % 2 == 1 {
            sign = -sign;
        }
        let lc_new = pb[db].clone();
        seq.push((next, sign));
        g = lc_new;
        h = if delta == 0 {
            h
        } else if delta == 1 {
            g.clone()
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1)
        };
        if degree(&seq[seq.len() - 1].0) == Some(0) {
            break;
        }
    }
    seq
}

fn normalize_sign(p: IntPoly) -> IntPoly {
    if p.last().is_some_and(|c| c.is_negative()) {
        neg(&p)
    } else {
        p
    }
}

/// Exact quotient over Z when `b | a` with integral quotient; `None` otherwise.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    let db = degree(b)?;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.is_empty() {
        return Some(Vec::new());
    }
    let da = degree(&r)?;
    if da < db {
        return None;
    }
    let lb = &b[db];
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (qc, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, c) in b.iter().enumerate() {
            r[k + j] -= &qc * c;
        }
        q[k] = qc;
    }
    trim(&mut r);
    if r.is_empty() {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// modular coprimality certificate

const PRIMES: [u64; 3] = [
    2_305_843_009_213_693_951, // 2^61 - 1
    4_611_686_018_427_387_847,
    9_223_372_036_854_775_783,
];

fn reduce(p: &[BigInt], m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    let mut out: Vec<u64> = p
        .iter()
        .map(|c| c.mod_floor(&mb).to_u64().expect("residue fits in u64"))
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, m: u64) -> usize {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let inv = powmod(*b.last().unwrap(), m - 2, m);
        let db = b.len() - 1;
        while a.len() >= b.len() {
            let da = a.len() - 1;
            let f = mulmod(*a.last().unwrap(), inv, m);
            let shift = da - db;
            for (k, &c) in b.iter().enumerate() {
                let t = mulmod(f, c, m);
                let x = &mut a[k + shift];
                *x = if *x >= t { *x - t } else { *x + m - t };
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// `true` only when `gcd(a, b) = 1` over Q is certified by a prime that keeps
/// both leading coefficients. `false` means "not certified", not "not coprime".
pub(crate) fn coprime_modular(a: &[BigInt], b: &[BigInt]) -> bool {
    let (Some(da), Some(db)) = (degree(a), degree(b)) else {
        return false;
    };
    for &m in PRIMES.iter() {
        let ra = reduce(a, m);
        let rb = reduce(b, m);
        if ra.len() != da + 1 || rb.len() != db + 1 {
            continue;
        }
        return gcd_degree_mod(ra, rb, m) == 0;
    }
    false
}

// ---------------------------------------------------------------------------
// sign evaluation and Sturm sequences

pub(crate) fn sign_at_pos_inf(p: &[BigInt]) -> Sign {
    p.last().map_or(Sign::NoSign, |c| c.sign())
}

pub(crate) fn sign_at_neg_inf(p: &[BigInt]) -> Sign {
    match p.last() {
        None => Sign::NoSign,
        Some(c) if (p.len() - 1) % 2 == 0 => c.sign(),
        Some(c) => -c.sign(),
    }
}

/// Signed remainder sequence `p, q, -rem(p,q), ...` up to positive factors.
pub(crate) fn signed_remainder_sequence(p: &[BigInt], q: &[BigInt]) -> Vec<IntPoly> {
    let p = primitive(p.to_vec());
    let q = primitive(q.to_vec());
    if q.is_empty() || p.is_empty() {
        return vec![p];
    }
    if q.len() > p.len() {
        // −rem(p, q) = −p, so the sequence is p, q, −p, −rem(q, −p), …
        let mut seq = vec![p.clone()];
        seq.extend(signed_remainder_sequence(&q, &neg(&p)));
        return seq;
    }
    subresultant_prs(p, q)
        .into_iter()
        .map(|(poly, sign)| if sign == Sign::Minus { neg(&poly) } else { poly })
        .collect()
}

pub(crate) fn sign_variations(signs: impl IntoIterator<Item = Sign>) -> i64 {
    let mut last = Sign::NoSign;
    let mut count = 0;
    for s in signs {
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Cauchy index of `q/p` over the whole real line.
pub(crate) fn cauchy_index_real_line(p: &[BigInt], q: &[BigInt]) -> i64 {
    let seq = signed_remainder_sequence(p, q);
    let lo = sign_variations(seq.iter().map(|s| sign_at_neg_inf(s)));
    let hi = sign_variations(seq.iter().map(|s| sign_at_pos_inf(s)));
    lo - hi
}

/// Number of distinct real roots of `p ≠ 0`.
pub(crate) fn count_real_roots(p: &[BigInt]) -> usize {
    if degree(p).unwrap_or(0) == 0 {
        return 0;
    }
    let dp = derivative(p);
    cauchy_index_real_line(p, &dp) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        let mut v: IntPoly = c.iter().map(|&x| BigInt::from(x)).collect();
        trim(&mut v);
        v
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let a: IntPoly = (0..97).map(|k| BigInt::from((k * 37 % 11) as i64 - 5)).collect();
        let b: IntPoly = (0..70).map(|k| BigInt::from((k * 13 % 7) as i64 - 3)).collect();
        let mut s = schoolbook(&a, &b);
        trim(&mut s);
        assert_eq!(mul(&a, &b), s);
        let c: IntPoly = (0..5).map(|k| BigInt::from(k + 1)).collect();
        let mut s2 = schoolbook(&a, &c);
        trim(&mut s2);
        assert_eq!(mul(&a, &c), s2);
    }

    #[test]
    fn pseudo_remainder_and_gcd() {
        // (z-1)(z+2) and (z-1)(z-3)
        let a = ip(&[-2, 1, 1]);
        let b = ip(&[3, -4, 1]);
        assert_eq!(gcd(&a, &b), ip(&[-1, 1]));
        assert_eq!(gcd(&ip(&[1, 0, 1]), &ip(&[2, 0, 1])), ip(&[1]));
        // 2^3 · z^3 = (4z^2 − 2z + 1)(2z + 1) − 1
        assert_eq!(prem_full(&ip(&[0, 0, 0, 1]), &ip(&[1, 2])), ip(&[-1]));
    }

    #[test]
    fn modular_coprimality_is_conservative() {
        assert!(coprime_modular(&ip(&[1, 0, 1]), &ip(&[-1, 1])));
        assert!(!coprime_modular(&ip(&[-1, 0, 1]), &ip(&[-1, 1])));
    }

    #[test]
    fn exact_integer_division() {
        let a = mul(&ip(&[-1, 1]), &ip(&[2, 0, 3]));
        assert_eq!(div_exact(&a, &ip(&[-1, 1])), Some(ip(&[2, 0, 3])));
        assert_eq!(div_exact(&a, &ip(&[1, 1])), None);
    }

    #[test]
    fn sturm_counts_real_roots() {
        // (z^2 - 2)(z^2 + 1)(z - 5)
        let p = mul(&mul(&ip(&[-2, 0, 1]), &ip(&[1, 0, 1])), &ip(&[-5, 1]));
        assert_eq!(count_real_roots(&p), 3);
        assert_eq!(count_real_roots(&ip(&[1, 0, 1])), 0);
        assert_eq!(count_real_roots(&ip(&[0, 0, 1])), 1);
    }

    proptest::proptest! {
        #[test]
        fn sturm_matches_constructed_roots(
            roots in proptest::collection::btree_set(-20i64..20, 0..6),
            repeat in 0usize..3,
            shifts in proptest::collection::vec(1i64..9, 0..3),
        ) {
            let mut p = ip(&[1]);
            for &r in &roots {
                p = mul(&p, &ip(&[-r, 1]));
            }
            if let Some(&r) = roots.iter().next() {
                for _ in 0..repeat {
                    p = mul(&p, &ip(&[-r, 1]));
                }
            }
            for &c in &shifts {
                p = mul(&p, &ip(&[c, 0, 1]));
            }
            proptest::prop_assert_eq!(count_real_roots(&p), roots.len());
        }
    }
}
