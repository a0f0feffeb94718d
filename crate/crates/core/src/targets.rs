//! Conjugate-closed target enumerations `α₁ = 0, α₂, α₃, …`.
//!
//! Block `n` supplies `(α_{3n−1}, α_{3n})`, a non-real conjugate pair, and the
//! real entry `α_{3n+1}`. Only Gaussian rationals and rationals are accepted,
//! so every pair quadratic `z² − 2Re(α)z + |α|²` has rational coefficients.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::qpoly::rational::format_rational;
use crate::qpoly::serial::rational_str;
use crate::qpoly::{GaussianRational, QPoly, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TargetBlock {
    pub pair: (GaussianRational, GaussianRational),
    #[serde(with = "rational_str")]
    pub real: Rational,
}

impl TargetBlock {
    /// Block built from the upper member of a pair.
    pub fn new(alpha: GaussianRational, real: Rational) -> Self {
        let conj = alpha.conj();
        TargetBlock {
            pair: (alpha, conj),
            real,
        }
    }

    /// `(z − α)(z − ᾱ)` for the pair.
    pub fn pair_quadratic(&self) -> QPoly {
        let a = &self.pair.0;
        QPoly::from_coeffs(vec![a.norm_sqr(), -(&a.re + &a.re), Rational::one()])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TargetSchedule {
    pub blocks: Vec<TargetBlock>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DuplicateEntry,
    RealPairMember,
    ZeroEntry,
    ConjugationFailure,
}

/// One failed invariant; `block` counts from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub block: usize,
    pub reason: ViolationKind,
    pub entry: String,
}

#[derive(Debug, thiserror::Error)]
pub enum TargetError {
    #[error("schedule has {available} blocks, {requested} requested")]
    InsufficientBlocks { requested: usize, available: usize },
    #[error("cannot read schedule file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed schedule file: {0}")]
    Json(#[from] serde_json::Error),
}

fn height(x: &Rational) -> BigInt {
    x.numer().abs().max(x.denom().clone())
}

fn gaussian_height(x: &GaussianRational) -> BigInt {
    height(&x.re).max(height(&x.im))
}

/// Rationals with height exactly `h`, ordered by absolute value with the
/// positive member first.
fn rationals_of_height(h: u64, with_zero: bool) -> Vec<Rational> {
    let h = BigInt::from(h);
    let mut out = Vec::new();
    if with_zero && h.is_one() {
        out.push(Rational::zero());
    }
    let mut mags = Vec::new();
    let one = BigInt::one();
    let mut k = BigInt::one();
    while k <= h {
        for (n, d) in [(k.clone(), h.clone()), (h.clone(), k.clone())] {
            if num_integer::Integer::gcd(&n, &d) == one {
                let x = Rational::new(n, d);
                if !mags.contains(&x) {
                    mags.push(x);
                }
            }
        }
        k += 1;
    }
    mags.sort();
    for m in mags {
        out.push(m.clone());
        out.push(-m);
    }
    out
}

fn rational_key(x: &Rational) -> (Rational, bool) {
    (x.abs(), x.is_negative())
}

/// The first `count` blocks: pair representatives `a + bi` with `a ≥ 0`,
/// `b > 0` and real entries, each sequence ordered by height with ties broken
/// lexicographically (components compared by absolute value, positive first).
pub fn default_schedule(count: usize) -> TargetSchedule {
    let mut pairs: Vec<GaussianRational> = Vec::new();
    let mut reals: Vec<Rational> = Vec::new();
    let mut h = 1u64;
    while pairs.len() < count || reals.len() < count {
        let hb = BigInt::from(h);
        // all non-negative rationals of height ≤ h
        let mut comps: Vec<Rational> = (1..=h)
            .flat_map(|g| rationals_of_height(g, true))
            .filter(|x| !x.is_negative())
            .collect();
        comps.sort();
        let mut level: Vec<GaussianRational> = Vec::new();
        for re in &comps {
            for im in comps.iter().filter(|x| x.is_positive()) {
                let z = GaussianRational::new(re.clone(), im.clone());
                if gaussian_height(&z) == hb {
                    level.push(z);
                }
            }
        }
        level.sort_by(|a, b| {
            (rational_key(&a.re), rational_key(&a.im)).cmp(&(rational_key(&b.re), rational_key(&b.im)))
        });
        pairs.extend(level);
        let mut rl = rationals_of_height(h, false);
        rl.sort_by_key(rational_key);
        reals.extend(rl);
        h += 1;
    }
    TargetSchedule {
        blocks: pairs
            .into_iter()
            .zip(reals)
            .take(count)
            .map(|(a, r)| TargetBlock::new(a, r))
            .collect(),
    }
}

impl TargetSchedule {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Every failed invariant, in block order; empty iff the schedule is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen: Vec<(GaussianRational, usize)> = vec![(GaussianRational::zero(), 0)];
        for (k, b) in self.blocks.iter().enumerate() {
            let block = k + 1;
            let (a0, a1) = &b.pair;
            let real = GaussianRational::real(b.real.clone());
            let mut push = |reason, e: &GaussianRational| {
                out.push(Violation {
                    block,
                    reason,
                    entry: e.to_string(),
                })
            };
            for e in [a0, a1, &real] {
                if e.is_zero() {
                    push(ViolationKind::ZeroEntry, e);
                }
            }
            for e in [a0, a1] {
                if e.is_real() {
                    push(ViolationKind::RealPairMember, e);
                }
            }
            if a1 != &a0.conj() {
                push(ViolationKind::ConjugationFailure, a1);
            }
            // a0 == a1 is already a conjugation or real-member failure
            let entries = [a0, a1, &real];
            for (k, e) in entries.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let earlier_here = entries[..k]
                    .iter()
                    .enumerate()
                    .any(|(l, x)| x == e && !(l == 0 && k == 1));
                if earlier_here || seen.iter().any(|(s, _)| s == *e) {
                    push(ViolationKind::DuplicateEntry, e);
                }
            }
            seen.push((a0.clone(), block));
            seen.push((a1.clone(), block));
            seen.push((real, block));
        }
        out
    }

    /// `[α₁ = 0, α₂, …, α_{3n+1}]`.
    pub fn prefix(&self, n: usize) -> Result<Vec<GaussianRational>, TargetError> {
        if self.blocks.len() < n {
            return Err(TargetError::InsufficientBlocks {
                requested: n,
                available: self.blocks.len(),
            });
        }
        let mut out = vec![GaussianRational::zero()];
        for b in &self.blocks[..n] {
            out.push(b.pair.0.clone());
            out.push(b.pair.1.clone());
            out.push(GaussianRational::real(b.real.clone()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.blocks).expect("schedule serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, TargetError> {
        Ok(TargetSchedule {
            blocks: serde_json::from_str(s)?,
        })
    }

    pub fn load(path: &Path) -> Result<Self, TargetError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl std::fmt::Display for TargetBlock {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}; {})", self.pair.0, self.pair.1, format_rational(&self.real))
    }
}
