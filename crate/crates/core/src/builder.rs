//! One induction step at a time: from `f_n, P_n` to `f_{n+1}, P_{n+1}` with
//! every certificate the Rouché argument consumes.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::certify::{
    circle_lower_bound, correction_upper_bound, count_roots_in_disc, roots_on_circle,
    CertifyBudget, CertifyError, CircleUpperCert, CountMethod, RootCountCert,
};
use crate::log::{ConfigEcho, Construction, PairCert, Stage, LOG_FORMAT};
use crate::qpoly::rational::{floor_log2, format_rational, pow, pow2, to_f64};
use crate::qpoly::{FactoredPoly, GPoly, GaussianRational, PolyError, QPoly, Rational};
use crate::targets::{TargetError, TargetSchedule};

/// How many derivative orders each step tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DerivativeCap {
    /// `j ∈ [0, n]` at step `n → n+1`.
    #[default]
    Paper,
    /// `j ∈ [0, min(n, k)]`; `J0` tracks values only.
    Fixed(usize),
}

impl DerivativeCap {
    pub fn effective(self, n: usize) -> usize {
        match self {
            DerivativeCap::Paper => n,
            DerivativeCap::Fixed(k) => n.min(k),
        }
    }
}

impl fmt::Display for DerivativeCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivativeCap::Paper => f.write_str("paper"),
            DerivativeCap::Fixed(k) => write!(f, "J{k}"),
        }
    }
}

impl FromStr for DerivativeCap {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "paper" {
            return Ok(DerivativeCap::Paper);
        }
        s.strip_prefix('J')
            .and_then(|k| k.parse().ok())
            .map(DerivativeCap::Fixed)
            .ok_or_else(|| format!("mode must be `paper` or `J<k>`, got {s:?}"))
    }
}

#[derive(Clone, Debug)]
pub struct BuildConfig {
    pub schedule: TargetSchedule,
    pub max_stage: usize,
    pub cap: DerivativeCap,
    pub seed: u64,
    pub budget: CertifyBudget,
    /// Largest degree of `f_n` (and `z^{n+1} P_n`) kept in dense form.
    pub expansion_ceiling: usize,
    /// Largest degree of `f_{n+1}` whose disc counts are recomputed directly
    /// instead of taken from the certified Rouché inequality.
    pub count_ceiling: usize,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            schedule: crate::targets::default_schedule(8),
            max_stage: 2,
            cap: DerivativeCap::Paper,
            seed: 0,
            budget: CertifyBudget::default(),
            expansion_ceiling: 10_000,
            count_ceiling: 512,
        }
    }
}

impl BuildConfig {
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            mode: self.cap.to_string(),
            seed: self.seed,
            stages: self.max_stage,
            schedule: self.schedule.blocks.clone(),
            budget: self.budget,
            expansion_ceiling: self.expansion_ceiling,
            count_ceiling: self.count_ceiling,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Targets(#[from] TargetError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("stage {stage}, i = {i}, j = {j}: {source}")]
    Certify {
        stage: usize,
        i: usize,
        j: usize,
        source: CertifyError,
    },
    #[error("certificate error: {0}")]
    Radius(CertifyError),
    #[error("deg f = {degree} does not exceed the derivative order {j}")]
    DegreeTooLow { degree: usize, j: usize },
    #[error("correction polynomial vanishes at the origin")]
    ZeroAtOrigin,
    #[error("P(0) = 0")]
    ZeroDenominator,
    #[error("targets are not closed under conjugation: {0} lacks its conjugate")]
    NotConjugateClosed(GaussianRational),
    #[error("stage {stage}, i = {i}, j = {j}: root counts differ ({before} before, {after} after)")]
    CertMismatch {
        stage: usize,
        i: usize,
        j: usize,
        before: usize,
        after: usize,
    },
    #[error("stage {0} is not materialized; raise the expansion ceiling to continue")]
    NotMaterialized(usize),
}

/// `f_1 = z²`, `P_1 = 1`.
pub fn initial_stage() -> Stage {
    Stage {
        index: 1,
        degree: 2,
        f: Some(QPoly::monomial(Rational::one(), 2)),
        p: FactoredPoly::one(),
        epsilon: None,
        radius: None,
        a_radical: None,
        j_effective: None,
        gamma: None,
        steered_coefficient: Rational::one(),
        uppers: Vec::new(),
        denominator: None,
        pairs: Vec::new(),
    }
}

fn strip_z(p: QPoly) -> QPoly {
    let v = p.valuation().unwrap_or(0);
    p.shift_down(v)
}

/// Squarefree, pairwise coprime factors whose roots are exactly the nonzero
/// points of `⋃_{j ≤ j_max} (f^(j))^{-1}(targets)`.
///
/// Each target contributes `f^(j) − α` when real and
/// `(f^(j))² − 2Re(α) f^(j) + |α|²` once per conjugate pair.
pub fn preimage_radical(
    f: &QPoly,
    targets: &[GaussianRational],
    j_max: usize,
) -> Result<FactoredPoly, BuildError> {
    let degree = f.deg().ok_or(PolyError::ZeroPolynomial)?;
    if degree <= j_max {
        return Err(BuildError::DegreeTooLow { degree, j: j_max });
    }
    let mut kinds: Vec<&GaussianRational> = Vec::new();
    for a in targets {
        if !a.is_real() && !targets.contains(&a.conj()) {
            return Err(BuildError::NotConjugateClosed(a.clone()));
        }
        if (a.is_real() || a.im.is_positive()) && !kinds.contains(&a) {
            kinds.push(a);
        }
    }
    let jobs: Vec<(usize, &GaussianRational)> = (0..=j_max)
        .flat_map(|j| kinds.iter().map(move |a| (j, *a)))
        .collect();
    let pieces: Vec<QPoly> = jobs
        .par_iter()
        .map(|&(j, a)| -> Result<QPoly, PolyError> {
            let fj = f.derivative(j);
            let piece = if a.is_real() {
                &fj - &QPoly::constant(a.re.clone())
            } else {
                let lin = &fj.scale(&-(&a.re + &a.re)) + &QPoly::constant(a.norm_sqr());
                &(&fj * &fj) + &lin
            };
            strip_z(piece).radical()
        })
        .collect::<Result<_, _>>()?;
    let mut out: Vec<QPoly> = Vec::new();
    for mut h in pieces {
        for g in &out {
            if h.is_constant() {
                break;
            }
            let c = h.gcd(g);
            if !c.is_constant() {
                h = h.exact_divide(&c)?;
            }
        }
        if !h.is_constant() {
            out.push(h.monic());
        }
    }
    let mut rad = FactoredPoly::one();
    for h in out {
        rad.push(h, 1)?;
    }
    Ok(rad)
}

/// `P_{n+1} = P_n · Π_{i=2}^{3n+1}(z − α_i) · a_radical^(deg f_n + j_eff + 1)`,
/// with conjugate pairs multiplied into rational quadratics.
pub fn build_correction_polynomial(
    prev_p: &FactoredPoly,
    targets: &[GaussianRational],
    a_radical: &FactoredPoly,
    deg_f: usize,
    j_eff: usize,
) -> Result<FactoredPoly, BuildError> {
    let mut p = prev_p.clone();
    for a in targets.iter().skip(1) {
        if a.is_zero() {
            return Err(BuildError::ZeroAtOrigin);
        }
        if a.is_real() {
            p.push(QPoly::linear_root(&a.re), 1)?;
        } else if a.im.is_positive() {
            let q = QPoly::from_coeffs(vec![a.norm_sqr(), -(&a.re + &a.re), Rational::one()]);
            p.push(q, 1)?;
        }
    }
    let e = (deg_f + j_eff + 1) as u32;
    for fct in a_radical.factors() {
        p.push(fct.poly.clone(), e)?;
    }
    if p.value_at_zero().is_zero() {
        return Err(BuildError::ZeroAtOrigin);
    }
    Ok(p)
}

/// First radius in `n + 3/2, n + 3/2 ± 1/(2k)` (`k = 2, 3, …`) on which no
/// factor of `a_radical` has a root.
pub fn choose_radius(n: usize, a_radical: &FactoredPoly) -> Result<Rational, BuildError> {
    let mid = Rational::from_integer(n.into()) + Rational::new(3.into(), 2.into());
    let avoids = |r: &Rational| -> Result<bool, BuildError> {
        for f in a_radical.factors() {
            if roots_on_circle(&f.poly, r).map_err(BuildError::Radius)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if avoids(&mid)? {
        return Ok(mid);
    }
    for k in 2u64.. {
        let d = Rational::new(1.into(), (2 * k).into());
        for r in [&mid + &d, &mid - &d] {
            if avoids(&r)? {
                return Ok(r);
            }
        }
    }
    unreachable!("finitely many radii carry roots")
}

/// Length of `P` (exact up to the ceiling, factor-wise overestimate beyond).
pub fn length_estimate(p: &FactoredPoly, expansion_ceiling: usize) -> Rational {
    if p.degree() <= expansion_ceiling {
        p.expand().length()
    } else {
        p.length_upper()
    }
}

/// `Γ_m = 1 / (L(P)·m^{m+1+deg P})`.
pub fn gamma_bound(p: &FactoredPoly, m: usize, expansion_ceiling: usize) -> Rational {
    gamma_from_length(length_estimate(p, expansion_ceiling), m, p.degree())
}

fn gamma_from_length(length: Rational, m: usize, deg_p: usize) -> Rational {
    let e = (m + 1 + deg_p) as u64;
    (length * pow(&Rational::from_integer(m.into()), e)).recip()
}

/// Upper bounds for `|(z^{n+2} P_{n+1})^(k)|` on `|z| = r`, `k = 0..=j_eff`.
pub fn correction_uppers(
    p: &FactoredPoly,
    n: usize,
    j_eff: usize,
    r: &Rational,
    expansion_ceiling: usize,
) -> Vec<CircleUpperCert> {
    (0..=j_eff)
        .into_par_iter()
        .map(|k| correction_upper_bound(p, n + 2, k, r, expansion_ceiling))
        .collect()
}

/// As [`correction_uppers`] from an already expanded `P`.
fn dense_correction_uppers(p: &QPoly, n: usize, j_eff: usize, r: &Rational) -> Vec<CircleUpperCert> {
    let total = p.deg().unwrap_or(0) + n + 2;
    let base = crate::qpoly::rational::max(&Rational::one(), r);
    let shifted = p.shift_up(n + 2);
    (0..=j_eff)
        .into_par_iter()
        .map(|k| CircleUpperCert {
            radius: r.clone(),
            bound: shifted.derivative(k).length() * pow(&base, total.saturating_sub(k) as u64),
        })
        .collect()
}

/// `Λ̃ = lower / denominator`, a certified under-approximation of `Λ_{i,j}`
/// when `lower ≤ min |f^(j) − α|` and `denominator ≥ max_k max |(z^{n+2}P)^(k)|`.
pub fn lambda_bound(lower: &Rational, denominator: &Rational) -> Rational {
    lower / denominator
}

/// Picks `p/q = c + σ·2^{−k}` with `2^{−k}` the largest power of two below
/// `bound / 2`, halved once more for every step of `⌊seed/2⌋ mod 64`, and
/// `σ = +1` for even seeds, `−1` for odd ones (flipped if `p/q` would be 0).
/// Returns `(p/q, ε)` with `ε = (p/q − c) / P(0)`.
pub fn choose_epsilon(
    c: &Rational,
    p_at_0: &Rational,
    bound: &Rational,
    seed: u64,
) -> Result<(Rational, Rational), BuildError> {
    if p_at_0.is_zero() {
        return Err(BuildError::ZeroDenominator);
    }
    assert!(bound.is_positive(), "epsilon window must be positive");
    let half = bound / Rational::from_integer(2.into());
    // largest 2^e strictly below half
    let mut e = floor_log2(&half);
    if pow2(e) >= half {
        e -= 1;
    }
    e -= ((seed / 2) % 64) as i64;
    let step = pow2(e);
    let sigma = if seed % 2 == 0 { Rational::one() } else { -Rational::one() };
    let mut pq = c + &sigma * &step;
    if pq.is_zero() {
        pq = c - &sigma * &step;
    }
    let eps = (&pq - c) / p_at_0;
    Ok((pq, eps))
}

fn gpoly_minus(f: &QPoly, alpha: &GaussianRational) -> GPoly {
    GPoly::minus_constant(f, alpha)
}

/// Builds stage `n+1` from the last stage of `c`.
pub fn build_stage(c: &Construction, config: &BuildConfig) -> Result<Stage, BuildError> {
    let prev = c.last();
    let n = prev.index;
    let f_n = prev.f.as_ref().ok_or(BuildError::NotMaterialized(n))?;
    let deg_f = prev.degree;
    let targets = config.schedule.prefix(n)?;
    let j_eff = config.cap.effective(n);

    let a_radical = preimage_radical(f_n, &targets, j_eff)?;
    let p = build_correction_polynomial(&prev.p, &targets, &a_radical, deg_f, j_eff)?;
    let r = choose_radius(n, &a_radical)?;
    let m = n + 1;
    let dense_p = (p.degree() + n + 2 <= config.expansion_ceiling).then(|| p.expand());
    let (gamma, uppers) = match &dense_p {
        Some(d) => (
            gamma_from_length(d.length(), m, p.degree()),
            dense_correction_uppers(d, n, j_eff, &r),
        ),
        None => (
            gamma_bound(&p, m, config.expansion_ceiling),
            correction_uppers(&p, n, j_eff, &r, config.expansion_ceiling),
        ),
    };
    let denominator = uppers
        .iter()
        .map(|u| u.bound.clone())
        .max()
        .expect("at least k = 0");

    let jobs: Vec<(usize, usize)> = (0..=j_eff)
        .flat_map(|j| (1..=targets.len()).map(move |i| (i, j)))
        .collect();
    let lowers = jobs
        .par_iter()
        .map(|&(i, j)| {
            let g = gpoly_minus(&f_n.derivative(j), &targets[i - 1]);
            let lower = circle_lower_bound(&g, &r, &config.budget).map_err(|e| {
                BuildError::Certify {
                    stage: m,
                    i,
                    j,
                    source: e,
                }
            })?;
            let before = count_roots_in_disc(&g, &GaussianRational::zero(), &r).map_err(|e| {
                BuildError::Certify {
                    stage: m,
                    i,
                    j,
                    source: e,
                }
            })?;
            Ok((lower, before))
        })
        .collect::<Result<Vec<_>, BuildError>>()?;

    let mut window = gamma.clone();
    let lambdas: Vec<Rational> = lowers
        .iter()
        .map(|(l, _)| lambda_bound(&l.bound, &denominator))
        .collect();
    for l in &lambdas {
        if l < &window {
            window = l.clone();
        }
    }
    let p0 = p.value_at_zero();
    let c_next = f_n.coefficient_of(n + 2);
    let (pq, eps) = choose_epsilon(&c_next, &p0, &(p0.abs() * &window), config.seed)?;

    let degree = deg_f.max(p.degree() + n + 2);
    let f_next = dense_p.map(|d| f_n + &d.shift_up(n + 2).scale(&eps));
    debug_assert!(f_next.as_ref().is_none_or(|f| f.coefficient_of(n + 2) == pq));

    let direct_after = f_next
        .as_ref()
        .filter(|f| f.deg().unwrap_or(0) <= config.count_ceiling);
    let pairs = jobs
        .par_iter()
        .zip(lowers.into_par_iter().zip(lambdas.into_par_iter()))
        .map(|(&(i, j), ((lower, before), lambda))| {
            let alpha = targets[i - 1].clone();
            let after = match direct_after {
                Some(f) => {
                    let g = gpoly_minus(&f.derivative(j), &alpha);
                    count_roots_in_disc(&g, &GaussianRational::zero(), &r).map_err(|e| {
                        BuildError::Certify {
                            stage: m,
                            i,
                            j,
                            source: e,
                        }
                    })?
                }
                None => RootCountCert {
                    method: CountMethod::Rouche,
                    ..before.clone()
                },
            };
            if after.count != before.count {
                return Err(BuildError::CertMismatch {
                    stage: m,
                    i,
                    j,
                    before: before.count,
                    after: after.count,
                });
            }
            Ok(PairCert {
                i,
                j,
                alpha,
                lower,
                lambda,
                count_before: before,
                count_after: after,
            })
        })
        .collect::<Result<Vec<_>, BuildError>>()?;

    Ok(Stage {
        index: m,
        degree,
        f: f_next,
        p,
        epsilon: Some(eps),
        radius: Some(r),
        a_radical: Some(a_radical),
        j_effective: Some(j_eff),
        gamma: Some(gamma),
        steered_coefficient: pq,
        uppers,
        denominator: Some(denominator),
        pairs,
    })
}

/// Stages `1..=config.max_stage`.
pub fn build_construction(config: &BuildConfig) -> Result<Construction, BuildError> {
    build_construction_with(config, |_| {})
}

/// As [`build_construction`], calling `progress` after each finished stage.
pub fn build_construction_with(
    config: &BuildConfig,
    mut progress: impl FnMut(&Stage),
) -> Result<Construction, BuildError> {
    if config.max_stage < 2 {
        return Err(BuildError::Config(format!(
            "at least 2 stages are required, got {}",
            config.max_stage
        )));
    }
    let needed = config.max_stage - 1;
    if config.schedule.len() < needed {
        return Err(TargetError::InsufficientBlocks {
            requested: needed,
            available: config.schedule.len(),
        }
        .into());
    }
    if let Some(v) = config.schedule.validate().first() {
        return Err(BuildError::Config(format!(
            "invalid schedule: block {} {:?} ({})",
            v.block, v.reason, v.entry
        )));
    }
    let mut c = Construction {
        format: LOG_FORMAT.to_string(),
        config: config.echo(),
        stages: vec![initial_stage()],
    };
    progress(&c.stages[0]);
    while c.stages.len() < config.max_stage {
        let st = build_stage(&c, config)?;
        progress(&st);
        c.stages.push(st);
    }
    Ok(c)
}

/// One-line human summary of a stage.
pub fn describe(st: &Stage) -> String {
    match &st.epsilon {
        None => format!("stage {}: f = z^2, P = 1", st.index),
        Some(e) => format!(
            "stage {}: deg f = {}, deg P = {}, r = {}, a_{} ~ {:e}, |eps| ~ 2^{}",
            st.index,
            st.degree,
            st.p.degree(),
            format_rational(st.radius.as_ref().unwrap()),
            st.index + 1,
            to_f64(&st.steered_coefficient),
            floor_log2(&e.abs()),
        ),
    }
}
