//! Re-verification of a construction log from its stored `f`, `P`, `ε`, `r`
//! and certificates alone. Nothing the builder derived is taken on trust:
//! every bound, count, divisibility and value is recomputed and compared.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builder::DerivativeCap;
use crate::certify::{
    correction_upper_bound, count_roots_in_disc, replay_circle_lower, CircleUpperCert, CountMethod,
};
use crate::log::{Construction, Stage};
use crate::qpoly::rational::{format_rational, pow};
use crate::qpoly::{FactoredPoly, GPoly, GaussianRational, QPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Conditions,
    Rouche,
    Stability,
    Values,
    Divergence,
}

impl Suite {
    /// The suites `verify` runs on a single log.
    pub const ALL: [Suite; 4] = [Suite::Conditions, Suite::Rouche, Suite::Stability, Suite::Values];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Conditions => "conditions",
            Suite::Rouche => "rouche",
            Suite::Stability => "stability",
            Suite::Values => "values",
            Suite::Divergence => "divergence",
        })
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "conditions" => Ok(Suite::Conditions),
            "rouche" => Ok(Suite::Rouche),
            "stability" => Ok(Suite::Stability),
            "values" => Ok(Suite::Values),
            "divergence" => Ok(Suite::Divergence),
            _ => Err(format!(
                "unknown suite {s:?} (conditions | rouche | stability | values)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Nothing to check yet (e.g. a value that stabilizes after the last stage).
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub check: String,
    pub stage: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub status: Status,
    pub witness: String,
}

impl CheckResult {
    fn new(suite: Suite, check: &str, stage: usize, ok: bool, witness: String) -> Self {
        CheckResult {
            suite,
            check: check.to_string(),
            stage,
            i: None,
            j: None,
            status: if ok { Status::Pass } else { Status::Fail },
            witness,
        }
    }

    fn pair(mut self, i: usize, j: usize) -> Self {
        self.i = Some(i);
        self.j = Some(j);
        self
    }

    fn key(&self) -> (usize, usize, usize, Suite, String) {
        (
            self.stage,
            self.i.unwrap_or(0),
            self.j.unwrap_or(0),
            self.suite,
            self.check.clone(),
        )
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "{status} {:<10} stage {:>2}", self.suite.to_string(), self.stage)?;
        if let (Some(i), Some(j)) = (self.i, self.j) {
            write!(f, " i={i:<2} j={j}")?;
        }
        write!(f, " {}: {}", self.check, self.witness)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub results: Vec<CheckResult>,
}

impl Report {
    fn from_results(mut results: Vec<CheckResult>) -> Self {
        results.sort_by_key(|r| r.key());
        Report { results }
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn suite(&self, s: Suite) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(move |r| r.suite == s)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        let fails = self.failures().count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.results.len(),
            fails
        ));
        out
    }
}

/// Runs the selected suites on one log.
pub fn verify(c: &Construction, suites: &[Suite]) -> Report {
    let need_pairs = suites.contains(&Suite::Rouche) || suites.contains(&Suite::Stability);
    let outcomes = if need_pairs { pair_outcomes(c) } else { BTreeMap::new() };
    let mut results = Vec::new();
    if suites.contains(&Suite::Conditions) {
        results.extend(conditions(c));
    }
    if suites.contains(&Suite::Rouche) {
        results.extend(rouche(c, &outcomes));
    }
    if suites.contains(&Suite::Stability) {
        results.extend(stability(c, &outcomes));
    }
    if suites.contains(&Suite::Values) {
        results.extend(values(c));
    }
    Report::from_results(results)
}

pub fn check_conditions(c: &Construction) -> Report {
    Report::from_results(conditions(c))
}

pub fn check_rouche(c: &Construction) -> Report {
    Report::from_results(rouche(c, &pair_outcomes(c)))
}

pub fn check_preimage_stability(c: &Construction) -> Report {
    Report::from_results(stability(c, &pair_outcomes(c)))
}

pub fn check_value_stabilization(c: &Construction) -> Report {
    Report::from_results(values(c))
}

fn fmt_q(x: &Rational) -> String {
    let s = format_rational(x);
    if s.len() <= 24 {
        return s;
    }
    format!("~{:.6e}", crate::qpoly::rational::to_f64(x))
}

fn cap(c: &Construction) -> Result<DerivativeCap, String> {
    c.config.mode.parse()
}

/// `Γ_m = 1 / (L(P)·m^{m+1+deg P})`, length exact up to the ceiling.
fn gamma(p: &FactoredPoly, m: usize, ceiling: usize) -> Rational {
    let len = if p.degree() <= ceiling {
        p.expand().length()
    } else {
        p.length_upper()
    };
    let e = (m + 1 + p.degree()) as u64;
    (len * pow(&Rational::from_integer(m.into()), e)).recip()
}

fn conditions(c: &Construction) -> Vec<CheckResult> {
    let ceiling = c.config.expansion_ceiling;
    let per_stage: Vec<Vec<CheckResult>> = c
        .stages
        .par_iter()
        .map(|st| stage_conditions(c, st, ceiling))
        .collect();
    per_stage.into_iter().flatten().collect()
}

fn stage_conditions(c: &Construction, st: &Stage, ceiling: usize) -> Vec<CheckResult> {
    let m = st.index;
    let s = Suite::Conditions;
    let mut out = Vec::new();
    if m == 1 {
        let f = st.f.clone().unwrap_or_default();
        out.push(CheckResult::new(
            s,
            "initial stage",
            1,
            f == QPoly::monomial(Rational::one(), 2)
                && st.p == FactoredPoly::one()
                && st.degree == 2
                && st.steered_coefficient == Rational::one(),
            format!("f_1 = {f}, P_1 = 1"),
        ));
        return out;
    }
    let prev = &c.stages[m - 2];
    let eps = st.epsilon.clone().unwrap_or_default();

    // degree law and nonzero leading coefficient
    let corr_deg = st.p.degree() + m + 1;
    let law = prev.degree.max(corr_deg);
    let mut lc = Rational::zero();
    if prev.degree == law {
        lc += c.f_coefficient(m - 1, law);
    }
    if corr_deg == law {
        lc += &eps * st.p.leading_coefficient();
    }
    let dense_ok = st.f.as_ref().is_none_or(|f| f.deg() == Some(law));
    out.push(CheckResult::new(
        s,
        "degree",
        m,
        st.degree == law && !lc.is_zero() && dense_ok,
        format!("deg f_{m} = {} (law {law}), leading coefficient {}", st.degree, fmt_q(&lc)),
    ));

    // f_m = f_{m−1} + ε z^{m+1} P_m whenever both sides are dense
    if let (Some(f), Some(fp)) = (&st.f, &prev.f) {
        let rebuilt = fp + &st.p.expand().shift_up(m + 1).scale(&eps);
        out.push(CheckResult::new(
            s,
            "recurrence",
            m,
            &rebuilt == f,
            format!("f_{m} = f_{} + eps z^{} P_{m}", m - 1, m + 1),
        ));
    } else if st.f.is_some() {
        out.push(CheckResult::new(
            s,
            "recurrence",
            m,
            false,
            format!("f_{m} is dense but f_{} is not", m - 1),
        ));
    } else {
        out.push(CheckResult::new(
            s,
            "materialization",
            m,
            law > ceiling,
            format!("f_{m} implicit, degree {law} vs ceiling {ceiling}"),
        ));
    }

    // P_{m−1} | P_m and P_m(0) ≠ 0
    let divides = prev.p.divides_structurally(&st.p) || {
        st.p.degree() <= ceiling
            && st.p.expand().div_rem(&prev.p.expand()).is_ok_and(|(_, r)| r.is_zero())
    };
    let p0 = st.p.value_at_zero();
    out.push(CheckResult::new(
        s,
        "divisibility",
        m,
        divides && !p0.is_zero(),
        format!(
            "P_{} | P_{m}: {divides}; P_{m}(0) = {}",
            m - 1,
            fmt_q(&p0)
        ),
    ));

    // 0 < |ε| < Γ_m
    let g = gamma(&st.p, m, ceiling);
    let ok = !eps.is_zero() && eps.abs() < g;
    out.push(CheckResult::new(
        s,
        "0 < |eps| < Gamma",
        m,
        ok && st.gamma.as_ref() == Some(&g),
        if ok {
            format!("|eps| = {} < Gamma = {}", fmt_q(&eps.abs()), fmt_q(&g))
        } else {
            format!("|eps| = {} not in (0, Gamma = {})", fmt_q(&eps.abs()), fmt_q(&g))
        },
    ));

    // a_2..a_{m+1} nonzero rationals, a_{m+1} as recorded
    let zero_at: Vec<usize> = (2..=m + 1).filter(|&k| c.f_coefficient(m, k).is_zero()).collect();
    let steered = c.f_coefficient(m, m + 1);
    out.push(CheckResult::new(
        s,
        "nonzero coefficients",
        m,
        zero_at.is_empty() && steered == st.steered_coefficient,
        if zero_at.is_empty() {
            format!("a_2..a_{} nonzero, a_{} = {}", m + 1, m + 1, fmt_q(&steered))
        } else {
            format!("a_k = 0 for k in {zero_at:?}")
        },
    ));

    // recorded parameters that the step derives from the configuration
    let j_ok = cap(c).map(|k| Some(k.effective(m - 1)) == st.j_effective);
    let r_ok = st.radius.as_ref().is_some_and(|r| r.is_positive());
    out.push(CheckResult::new(
        s,
        "parameters",
        m,
        j_ok == Ok(true) && r_ok,
        format!(
            "mode {}, j_effective {:?}, radius {}",
            c.config.mode,
            st.j_effective,
            st.radius.as_ref().map(fmt_q).unwrap_or_default()
        ),
    ));
    out
}

/// Everything the Rouché and stability suites need for one `(stage, i, j)`.
#[derive(Clone, Debug)]
struct PairOutcome {
    inequality: Result<String, String>,
    counts: Result<(usize, usize), String>,
}

type PairKey = (usize, usize, usize);

fn stage_targets(c: &Construction, n: usize) -> Result<Vec<GaussianRational>, String> {
    c.schedule().prefix(n).map_err(|e| e.to_string())
}

fn pair_outcomes(c: &Construction) -> BTreeMap<PairKey, PairOutcome> {
    let mut jobs = Vec::new();
    for st in c.stages.iter().skip(1) {
        let n = st.index - 1;
        let Ok(targets) = stage_targets(c, n) else {
            continue;
        };
        let j_eff = st.j_effective.unwrap_or(0);
        for j in 0..=j_eff {
            for i in 1..=targets.len() {
                jobs.push((st.index, i, j, targets[i - 1].clone()));
            }
        }
    }
    // one upper bound per (stage, order), shared by all targets
    let orders: Vec<(usize, usize)> = c
        .stages
        .iter()
        .skip(1)
        .flat_map(|st| (0..=st.j_effective.unwrap_or(0)).map(move |j| (st.index, j)))
        .collect();
    let uppers: BTreeMap<(usize, usize), Option<CircleUpperCert>> = orders
        .into_par_iter()
        .map(|(m, j)| {
            let st = &c.stages[m - 1];
            let u = st
                .radius
                .as_ref()
                .map(|r| correction_upper_bound(&st.p, m + 1, j, r, c.config.expansion_ceiling));
            ((m, j), u)
        })
        .collect();
    jobs.into_par_iter()
        .map(|(m, i, j, alpha)| {
            let upper = uppers.get(&(m, j)).cloned().flatten();
            ((m, i, j), pair_outcome(c, m, i, j, &alpha, upper))
        })
        .collect()
}

fn pair_outcome(
    c: &Construction,
    m: usize,
    i: usize,
    j: usize,
    alpha: &GaussianRational,
    upper: Option<CircleUpperCert>,
) -> PairOutcome {
    let st = &c.stages[m - 1];
    let n = m - 1;
    let fail = |e: String| PairOutcome {
        inequality: Err(e.clone()),
        counts: Err(e),
    };
    let Some(cert) = st.pairs.iter().find(|p| p.i == i && p.j == j) else {
        return fail("no certificate recorded".into());
    };
    if &cert.alpha != alpha {
        return fail(format!("certificate target {} is not alpha_{i} = {alpha}", cert.alpha));
    }
    let Some(f_n) = &c.stages[n - 1].f else {
        return fail(format!("f_{n} is not materialized"));
    };
    let (Some(r), Some(eps)) = (&st.radius, &st.epsilon) else {
        return fail("stage lacks radius or epsilon".into());
    };
    let g = GPoly::minus_constant(&f_n.derivative(j), alpha);

    let inequality = (|| {
        if &cert.lower.radius != r {
            return Err("lower certificate radius differs from r".to_string());
        }
        replay_circle_lower(&g, &cert.lower).map_err(|e| e.to_string())?;
        let upper = upper.ok_or("no radius")?;
        if st.uppers.get(j) != Some(&upper) {
            return Err(format!(
                "recorded upper bound for order {j} differs from recomputed {}",
                fmt_q(&upper.bound)
            ));
        }
        let max_upper = st.uppers.iter().map(|u| &u.bound).max();
        if max_upper != st.denominator.as_ref() || cert.lambda != &cert.lower.bound / max_upper.unwrap() {
            return Err("recorded lambda or denominator inconsistent".to_string());
        }
        let rhs = eps.abs() * &upper.bound;
        if cert.lower.bound > rhs {
            Ok(format!(
                "lower {} > |eps| upper {}",
                fmt_q(&cert.lower.bound),
                fmt_q(&rhs)
            ))
        } else {
            Err(format!(
                "lower {} <= |eps| upper {}",
                fmt_q(&cert.lower.bound),
                fmt_q(&rhs)
            ))
        }
    })();

    let counts = (|| {
        let zero = GaussianRational::zero();
        let before = count_roots_in_disc(&g, &zero, r).map_err(|e| e.to_string())?.count;
        if before != cert.count_before.count || &cert.count_before.radius != r {
            return Err(format!(
                "recorded count {} before, recomputed {before}",
                cert.count_before.count
            ));
        }
        let direct = st
            .f
            .as_ref()
            .filter(|f| f.deg().unwrap_or(0) <= c.config.count_ceiling);
        let after = match direct {
            Some(f) => {
                let g1 = GPoly::minus_constant(&f.derivative(j), alpha);
                count_roots_in_disc(&g1, &zero, r).map_err(|e| e.to_string())?.count
            }
            None => {
                if cert.count_after.method != CountMethod::Rouche {
                    return Err("count after must be Rouché-derived above the count ceiling".into());
                }
                // equality is what the inequality certifies
                if inequality.is_err() {
                    return Err("Rouché-derived count without a valid inequality".into());
                }
                before
            }
        };
        if after != cert.count_after.count || &cert.count_after.radius != r {
            return Err(format!(
                "recorded count {} after, recomputed {after}",
                cert.count_after.count
            ));
        }
        Ok((before, after))
    })();
    PairOutcome { inequality, counts }
}

fn missing_pairs(c: &Construction) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for st in c.stages.iter().skip(1) {
        let n = st.index - 1;
        let expected = match (stage_targets(c, n), cap(c)) {
            (Ok(t), Ok(k)) => t.len() * (k.effective(n) + 1),
            (Err(e), _) | (_, Err(e)) => {
                out.push(CheckResult::new(Suite::Rouche, "coverage", st.index, false, e));
                continue;
            }
        };
        let ok = st.pairs.len() == expected;
        out.push(CheckResult::new(
            Suite::Rouche,
            "coverage",
            st.index,
            ok,
            format!("{} pair certificates, {expected} expected", st.pairs.len()),
        ));
    }
    out
}

fn rouche(c: &Construction, outcomes: &BTreeMap<PairKey, PairOutcome>) -> Vec<CheckResult> {
    let mut out = missing_pairs(c);
    for (&(m, i, j), o) in outcomes {
        let (ok, w) = match &o.inequality {
            Ok(w) => (true, w.clone()),
            Err(w) => (false, w.clone()),
        };
        out.push(CheckResult::new(Suite::Rouche, "inequality", m, ok, w).pair(i, j));
        let (ok, w) = match &o.counts {
            Ok((b, a)) if b == a => (true, format!("{b} roots in B(0, r) before and after")),
            Ok((b, a)) => (false, format!("{b} roots before, {a} after")),
            Err(w) => (false, w.clone()),
        };
        out.push(CheckResult::new(Suite::Rouche, "counts", m, ok, w).pair(i, j));
    }
    out
}

/// `f^(j) − α` for real `α`, `(f^(j) − α)(f^(j) − ᾱ)` otherwise.
fn pair_product(fj: &QPoly, alpha: &GaussianRational) -> QPoly {
    if alpha.is_real() {
        fj - &QPoly::constant(alpha.re.clone())
    } else {
        let lin = &fj.scale(&-(&alpha.re + &alpha.re)) + &QPoly::constant(alpha.norm_sqr());
        &(fj * fj) + &lin
    }
}

/// Largest root multiplicity of `h ≠ 0` via the chain `h, gcd(h, h'), …`.
fn max_multiplicity(h: &QPoly) -> usize {
    let mut k = 0;
    let mut g = h.clone();
    while !g.is_constant() {
        k += 1;
        g = g.gcd(&g.derivative(1));
    }
    k
}

/// Total exponent of `poly` among the factors of `p`.
fn structural_exponent(p: &FactoredPoly, poly: &QPoly) -> u64 {
    p.factors()
        .iter()
        .filter(|f| &f.poly == poly)
        .map(|f| f.exponent as u64)
        .sum()
}

fn stability_pair(c: &Construction, m: usize, alpha: &GaussianRational, j: usize) -> Result<String, String> {
    let n = m - 1;
    let st = &c.stages[m - 1];
    let f_n = c.stages[n - 1].f.as_ref().ok_or(format!("f_{n} is not materialized"))?;
    let deg_f = c.stages[n - 1].degree;
    let rad = st.a_radical.as_ref().ok_or("stage lacks a_radical")?;
    let g = pair_product(&f_n.derivative(j), alpha);
    if g.is_constant() {
        return Ok("no preimages".into());
    }
    let v = g.valuation().unwrap_or(0);
    // the origin: multiplicity n+2 in the correction, v in f_n^(j) − α
    if v > 0 && n + 2 - j <= v {
        return Err(format!("root 0 of multiplicity {v} not dominated by z^{}", n + 2));
    }
    let h = g.shift_down(v);
    let mut rest = h.radical().map_err(|e| e.to_string())?;
    let mut e_min: Option<u64> = None;
    for fct in rad.factors() {
        if rest.is_constant() {
            break;
        }
        let d = rest.gcd(&fct.poly);
        if d.is_constant() {
            continue;
        }
        rest = rest.exact_divide(&d).map_err(|e| e.to_string())?;
        let e = structural_exponent(&st.p, &fct.poly);
        e_min = Some(e_min.map_or(e, |x| x.min(e)));
    }
    if !rest.is_constant() {
        return Err(format!(
            "{} preimage(s) of alpha missing from a_radical",
            rest.deg().unwrap_or(0)
        ));
    }
    for fct in rad.factors() {
        let e = structural_exponent(&st.p, &fct.poly);
        if e < (deg_f + j + 1) as u64 {
            return Err(format!("a_radical factor has exponent {e} < deg f_{n} + j + 1 in P_{m}"));
        }
    }
    let mu = max_multiplicity(&h);
    let e_min = e_min.unwrap_or(0);
    if e_min > 0 && e_min <= (mu + j) as u64 {
        return Err(format!("exponent {e_min} does not exceed multiplicity {mu} + j"));
    }
    if e_min == 0 {
        return Ok(format!("only the origin (multiplicity {v}) is a preimage"));
    }
    Ok(format!(
        "preimages divide a_radical; multiplicity <= {mu} at nonzero roots, {v} at 0; correction order >= {e_min}"
    ))
}

fn stability(c: &Construction, outcomes: &BTreeMap<PairKey, PairOutcome>) -> Vec<CheckResult> {
    let structural: Vec<CheckResult> = outcomes
        .par_iter()
        .map(|(&(m, i, j), o)| {
            let alpha = stage_targets(c, m - 1).map(|t| t[i - 1].clone());
            let res = alpha.and_then(|a| stability_pair(c, m, &a, j));
            let res = res.and_then(|w| match &o.counts {
                Ok((b, a)) if b == a => Ok(format!("{w}; {b} roots before and after")),
                Ok((b, a)) => Err(format!("counts differ: {b} vs {a}")),
                Err(e) => Err(e.clone()),
            });
            let (ok, w) = match res {
                Ok(w) => (true, w),
                Err(w) => (false, w),
            };
            CheckResult::new(Suite::Stability, "preimages", m, ok, w).pair(i, j)
        })
        .collect();

    // chains of single steps give equality across any two stages l < k on
    // B(0, r_{l+1}), as long as the radii do not shrink
    let step_ok: BTreeMap<PairKey, bool> = structural
        .iter()
        .map(|r| ((r.stage, r.i.unwrap(), r.j.unwrap()), r.status == Status::Pass))
        .collect();
    let mut out = structural;
    let last = c.stages.len();
    for l in 1..last {
        let r_l = c.stages[l].radius.clone();
        let Some(j_l) = c.stages[l].j_effective else {
            continue;
        };
        for k in l + 2..=last {
            for j in 0..=j_l {
                for i in 1..=3 * l + 1 {
                    let mut ok = true;
                    let mut w = format!("f_{l} and f_{k} agree on B(0, r_{})", l + 1);
                    for step in l + 1..=k {
                        if step_ok.get(&(step, i, j)) != Some(&true) {
                            ok = false;
                            w = format!("step to stage {step} not certified");
                            break;
                        }
                        if c.stages[step - 1].radius < r_l {
                            ok = false;
                            w = format!("r_{step} < r_{}", l + 1);
                            break;
                        }
                    }
                    out.push(CheckResult::new(Suite::Stability, &format!("limit vs stage {l}"), k, ok, w).pair(i, j));
                }
            }
        }
    }
    out
}

/// `f_n^(j)(α_i)` freezes once the correction vanishes at `α_i` to order `> j`.
fn values(c: &Construction) -> Vec<CheckResult> {
    let last = c.stages.len();
    let mut out = Vec::new();
    for st in &c.stages {
        let v = c.f_derivative_at(st.index, &GaussianRational::zero(), 0);
        out.push(CheckResult::new(
            Suite::Values,
            "f(0) = 0",
            st.index,
            v.is_zero(),
            format!("f_{}(0) = {v}", st.index),
        ));
    }
    if last < 2 {
        return out;
    }
    let Ok(targets) = stage_targets(c, last - 1) else {
        return out;
    };
    let j_max = c.stages.iter().filter_map(|s| s.j_effective).max().unwrap_or(0);
    let jobs: Vec<(usize, usize)> = (1..=targets.len())
        .flat_map(|i| (0..=j_max).map(move |j| (i, j)))
        .collect();
    let results: Vec<CheckResult> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let alpha = &targets[i - 1];
            // first stage after which every correction vanishes at α to order > j
            let mut from = 1;
            for k in 2..=last {
                let z_part = if alpha.is_zero() { k + 1 } else { 0 };
                let mult = c.stages[k - 1].p.multiplicity_at(alpha) + z_part;
                if mult <= j {
                    from = k;
                }
            }
            if from == last {
                return CheckResult {
                    status: Status::Skip,
                    ..CheckResult::new(
                        Suite::Values,
                        "stabilization",
                        last,
                        true,
                        format!("f^({j})(alpha_{i}) not yet frozen within {last} stages"),
                    )
                    .pair(i, j)
                };
            }
            let base = c.f_derivative_at(from, alpha, j);
            let moved = (from + 1..=last).find(|&k| c.f_derivative_at(k, alpha, j) != base);
            let (ok, w) = match moved {
                None => (
                    true,
                    format!("f_n^({j})(alpha_{i}) = {} for n >= {from}", short_g(&base)),
                ),
                Some(k) => (false, format!("f_{k}^({j})(alpha_{i}) differs from f_{from}")),
            };
            CheckResult::new(Suite::Values, "stabilization", last, ok, w).pair(i, j)
        })
        .collect();
    out.extend(results);
    out
}

fn short_g(z: &GaussianRational) -> String {
    let s = z.to_string();
    if s.len() <= 60 {
        s
    } else {
        let (re, im) = z.to_f64();
        format!("~({re:.6e} + {im:.6e}i)")
    }
}

/// Outcome of comparing two runs that differ only in the seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divergence {
    /// First stage whose steered coefficient differs.
    pub first_stage: Option<usize>,
    pub identical: bool,
}

pub fn check_divergence(a: &Construction, b: &Construction) -> (Divergence, CheckResult) {
    let first = a
        .stages
        .iter()
        .zip(&b.stages)
        .find(|(x, y)| x.steered_coefficient != y.steered_coefficient)
        .map(|(x, _)| x.index);
    let identical = a == b;
    let same_schedule = a.config.schedule == b.config.schedule;
    let d = Divergence {
        first_stage: first,
        identical,
    };
    let w = match first {
        Some(k) => format!("a_{} differs first, at stage {k}", k + 1),
        None if identical => "no divergence: logs identical".to_string(),
        None => "no divergence in steered coefficients".to_string(),
    };
    let r = CheckResult::new(
        Suite::Divergence,
        "steered coefficients",
        first.unwrap_or(a.stages.len().min(b.stages.len())),
        first.is_some() && same_schedule,
        w,
    );
    (d, r)
}
