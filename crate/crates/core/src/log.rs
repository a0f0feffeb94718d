//! The construction log: every stage with its certificates plus an echo of
//! the configuration that produced it. Builder, checker and evaluator
//! exchange nothing else.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certify::{CertifyBudget, CircleLowerCert, CircleUpperCert, RootCountCert};
use crate::qpoly::lazy::Lazy;
use crate::qpoly::serial::{opt_rational_str, rational_str};
use crate::qpoly::{FactoredPoly, GaussianRational, QPoly, Rational};
use crate::targets::{TargetBlock, TargetSchedule};

/// Evidence for one `(i, j)` of a transition `n → n+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCert {
    /// Target index, `α_i`, counted from 1.
    pub i: usize,
    /// Derivative order.
    pub j: usize,
    pub alpha: GaussianRational,
    /// `|f_n^(j) − α_i| ≥ lower.bound` on `|z| = r_{n+1}`.
    pub lower: CircleLowerCert,
    /// `lower.bound / denominator ≤ Λ_{i,j}`.
    #[serde(with = "rational_str")]
    pub lambda: Rational,
    /// Roots of `f_n^(j) − α_i` in `B(0, r_{n+1})`.
    pub count_before: RootCountCert,
    /// Roots of `f_{n+1}^(j) − α_i` in `B(0, r_{n+1})`.
    pub count_after: RootCountCert,
}

/// Everything recorded about one stage `f_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub index: usize,
    /// Degree `t_n` of `f_n`.
    pub degree: usize,
    /// Dense `f_n`, present while `degree` is within the expansion ceiling.
    /// Otherwise `f_n = f_{n−1} + ε_n z^{n+1} P_n` is left implicit.
    pub f: Option<QPoly>,
    pub p: FactoredPoly,
    #[serde(with = "opt_rational_str")]
    pub epsilon: Option<Rational>,
    #[serde(with = "opt_rational_str")]
    pub radius: Option<Rational>,
    /// Squarefree, pairwise coprime factors whose roots are `A_{n−1} ∖ {0}`.
    pub a_radical: Option<FactoredPoly>,
    /// Derivative orders tracked by the step that built this stage.
    pub j_effective: Option<usize>,
    #[serde(with = "opt_rational_str")]
    pub gamma: Option<Rational>,
    /// `a_{n+1}`, the coefficient steered to a nonzero rational.
    #[serde(with = "rational_str")]
    pub steered_coefficient: Rational,
    /// Upper bounds of `|(z^{n+1} P_n)^(k)|` on `|z| = r_n`, `k = 0..=j_effective`.
    pub uppers: Vec<CircleUpperCert>,
    /// Maximum of `uppers`, the common denominator of the `Λ̃`.
    #[serde(with = "opt_rational_str")]
    pub denominator: Option<Rational>,
    pub pairs: Vec<PairCert>,
}

/// Configuration echoed into the log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub mode: String,
    pub seed: u64,
    pub stages: usize,
    pub schedule: Vec<TargetBlock>,
    pub budget: CertifyBudget,
    pub expansion_ceiling: usize,
    pub count_ceiling: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub format: String,
    pub config: ConfigEcho,
    pub stages: Vec<Stage>,
}

pub const LOG_FORMAT: &str = "mahler-forge/construction-log/v1";

#[derive(Debug, thiserror::Error)]
pub enum LogError {
    #[error("cannot read log: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed log: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed log: {0}")]
    Malformed(String),
}

impl Construction {
    pub fn schedule(&self) -> TargetSchedule {
        TargetSchedule {
            blocks: self.config.schedule.clone(),
        }
    }

    pub fn last(&self) -> &Stage {
        self.stages.last().expect("a construction has at least one stage")
    }

    pub fn stage(&self, n: usize) -> Option<&Stage> {
        n.checked_sub(1).and_then(|k| self.stages.get(k))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("log serializes");
        s.push('\n');
        s
    }

    /// Parses and checks the shape (indices consecutive from 1, per-stage
    /// fields present where the recurrence needs them).
    pub fn from_json(s: &str) -> Result<Self, LogError> {
        let c: Construction = serde_json::from_str(s)?;
        if c.format != LOG_FORMAT {
            return Err(LogError::Malformed(format!("unknown format tag {:?}", c.format)));
        }
        if c.stages.is_empty() {
            return Err(LogError::Malformed("no stages".into()));
        }
        for (k, st) in c.stages.iter().enumerate() {
            if st.index != k + 1 {
                return Err(LogError::Malformed(format!("stage {} has index {}", k + 1, st.index)));
            }
            if k == 0 {
                if st.f.is_none() {
                    return Err(LogError::Malformed("stage 1 lacks f".into()));
                }
                continue;
            }
            if st.epsilon.is_none() || st.radius.is_none() || st.j_effective.is_none() {
                return Err(LogError::Malformed(format!(
                    "stage {} lacks epsilon, radius or j_effective",
                    st.index
                )));
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, LogError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), LogError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// The dense `f_n` if any stage up to `n` lets it be formed within
    /// `ceiling`; `None` for implicit stages.
    pub fn dense_f(&self, n: usize) -> Option<QPoly> {
        self.stage(n)?.f.clone()
    }

    /// `(z^{m+1} P_m)` as a factored polynomial.
    pub fn correction(&self, m: usize) -> Option<FactoredPoly> {
        let st = self.stage(m)?;
        let mut c = st.p.clone();
        c.push(QPoly::z(), (m + 1) as u32).ok()?;
        Some(c)
    }

    /// `f_n^(j)(z)` exactly, from the latest dense stage `≤ n` plus the
    /// factored corrections after it.
    pub fn f_derivative_at(&self, n: usize, z: &GaussianRational, j: usize) -> GaussianRational {
        let base = (1..=n)
            .rev()
            .find(|&m| self.stages[m - 1].f.is_some())
            .expect("stage 1 is dense");
        let f = self.stages[base - 1].f.as_ref().unwrap();
        let mut acc = Lazy::from(&f.derivative(j).eval(z));
        for m in base + 1..=n {
            let eps = self.stages[m - 1].epsilon.as_ref().expect("validated");
            let term = self.correction(m).unwrap().derivative_at_lazy(z, j);
            acc = acc.add(&term.scale(eps));
        }
        acc.finish()
    }

    /// Coefficient of `z^k` in `f_n`, without expanding implicit stages.
    pub fn f_coefficient(&self, n: usize, k: usize) -> Rational {
        let base = (1..=n)
            .rev()
            .find(|&m| self.stages[m - 1].f.is_some())
            .expect("stage 1 is dense");
        let mut acc = self.stages[base - 1].f.as_ref().unwrap().coefficient_of(k);
        for m in base + 1..=n {
            if k > m {
                let st = &self.stages[m - 1];
                acc += st.epsilon.as_ref().unwrap() * st.p.coefficient_of(k - m - 1);
            }
        }
        acc
    }
}
