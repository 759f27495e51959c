//! Explicit Galois self-orthogonal constructions and their verification.

mod elliptic;
mod embed;
mod evalset;
mod hermitian;
mod hyper;
mod line;
mod report;
mod search;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{CodeError, LinearCode};
use crate::curves::{evaluate_code, CurveError, CurveModel, Family, PDivisorPair, Point};
use crate::gf::{Fe, FieldCtx, GfError};
use crate::matrix::MatrixError;

pub use elliptic::{construct_elliptic, eval_sets_t5, T5Variant};
pub use embed::{embed, EmbedCase, Embedded};
pub use evalset::{eval_set_t3, eval_sets_t7, hprime_values, t3_closed_forms, T7Case, T7Params, SEARCH_BUDGET};
pub use hermitian::{construct_hermitian, construct_t7};
pub use hyper::{construct_hyper_elliptic, eval_set_t6};
pub use line::{construct_line, construct_t3, line_generic_eval_set};
pub use report::{
    verify_code, Check, Checks, ConstructionReport, DistanceChoice, FieldInfo, MdsChoice, Verdict, VerifyOptions,
};
pub use search::{search_params, ParamRow, TheoremFilter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    /// A stated hypothesis or window of the construction does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// `h'(alpha)` is not a `(p^e+1)`-th power, so no multiplier exists.
    #[error("h'({element}) = {value} is not a (p^e+1)-th power (position {index})")]
    NotPowerResidue { index: usize, element: u32, value: u32 },
    #[error("no evaluation set passed verification after {tried} candidates: {detail}")]
    SearchExhausted { tried: usize, detail: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl ConstructionError {
    /// True for violated hypotheses, false for failed computations.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            ConstructionError::Precondition(_)
                | ConstructionError::NotPowerResidue { .. }
                | ConstructionError::SearchExhausted { .. }
                | ConstructionError::Field(_)
                | ConstructionError::Curve(_)
        )
    }
}

pub(crate) fn precondition(ok: bool, msg: impl FnOnce() -> String) -> Result<(), ConstructionError> {
    if ok {
        Ok(())
    } else {
        Err(ConstructionError::Precondition(msg()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// MDS codes on the projective line from unions of cyclotomic cosets.
    T3,
    /// Elliptic curves `y^2 + y = x^3` and `y^2 + y = x^3 + x`.
    T5a,
    T5b,
    /// The hyper-elliptic curve `y^2 + y = x^{sqrt(q)+1}`.
    T6,
    /// The Hermitian curve with one of six evaluation-set families.
    T7,
    /// Projective line over a caller-supplied node set.
    LineGeneric,
    /// One-row extension of an MDS GRS-form code.
    Embed,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::T3 => "t3",
            Theorem::T5a => "t5a",
            Theorem::T5b => "t5b",
            Theorem::T6 => "t6",
            Theorem::T7 => "t7",
            Theorem::LineGeneric => "line_generic",
            Theorem::Embed => "embed",
        };
        f.write_str(s)
    }
}

/// An evaluation set `U` with a record of how it was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalSet {
    pub elements: Vec<Fe>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub family: String,
    pub params: serde_json::Map<String, serde_json::Value>,
    /// Notes such as parameters admitted outside the stated range.
    pub flags: Vec<String>,
}

impl Provenance {
    pub(crate) fn new(family: &str) -> Self {
        Provenance {
            family: family.to_string(),
            params: serde_json::Map::new(),
            flags: Vec::new(),
        }
    }

    pub(crate) fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

/// Everything a construction fixes before the code is built.
#[derive(Debug, Clone)]
pub struct ConstructionPlan {
    pub theorem: Theorem,
    pub family: Family,
    pub eval_set: EvalSet,
    pub k: u64,
    pub e: u32,
    /// One multiplier per evaluation point.
    pub v: Vec<Fe>,
    pub divisors: PDivisorPair,
}

/// A constructed code together with its plan and verification report.
#[derive(Debug, Clone)]
pub struct Construction {
    pub plan: ConstructionPlan,
    pub code: LinearCode,
    pub report: ConstructionReport,
}

/// The self-orthogonality criterion for `C_L(D, (k-1)P_inf, v)`:
/// `p^e (k-1) <= h_coeff`, `2g - 2 < k - 1 < n` and `k >= 2g + 1`.
pub fn criterion_check(p: u32, deg_g: i64, h_coeff: i64, e: u32, g: u64, k: u64, n_points: usize) -> bool {
    let pe = (p as i128).pow(e);
    let g = g as i128;
    let deg_g = deg_g as i128;
    deg_g == k as i128 - 1
        && pe * deg_g <= h_coeff as i128
        && 2 * g - 2 < deg_g
        && deg_g < n_points as i128
        && k as i128 > 2 * g
}

/// Largest `k` allowed by the criterion for a code of length `len`:
/// `floor((len + p^e + 2g - 1) / (p^e + 1))`.
pub fn criterion_k_max(p: u32, e: u32, g: u64, len: usize) -> i64 {
    let pe = (p as i64).pow(e);
    (len as i64 + pe + 2 * g as i64 - 1).div_euclid(pe + 1)
}

/// `v_t = beta_t^{-1}` where `beta_t` is the canonical root of
/// `beta^{p^e+1} = h'(alpha_t)`.
pub fn multipliers(ctx: &FieldCtx, set: &[Fe], e: u32) -> Result<Vec<Fe>, ConstructionError> {
    let hp = hprime_values(ctx, set);
    hp.iter()
        .enumerate()
        .map(|(i, &d)| {
            let beta = ctx.root_pe1(d, e).map_err(|_| ConstructionError::NotPowerResidue {
                index: i,
                element: set[i].0,
                value: d.0,
            })?;
            Ok(ctx.inv(beta)?)
        })
        .collect()
}

/// Lifts `v` over fibers: every point above `set[i]` gets `v[i]`.
pub(crate) fn lift_multipliers(set: &[Fe], v: &[Fe], model: &CurveModel) -> Vec<(Point, Fe)> {
    set.iter()
        .zip(v)
        .flat_map(|(&x, &vx)| model.fiber(x).iter().map(move |&p| (p, vx)))
        .collect()
}

/// Human-readable form of each clause of [`criterion_check`].
pub(crate) fn criterion_message(p: u32, e: u32, g: u64, k: u64, len: usize, pd: &PDivisorPair) -> String {
    let pe = (p as i128).pow(e);
    let (k, g, m) = (k as i128, g as i128, pd.g_coeff as i128);
    let mark = |ok: bool| if ok { "" } else { " fails" };
    format!(
        "p^e(k-1) <= deg H: {} <= {}{}; 2g-2 < k-1 < n: {} < {} < {}{}; 2g+1 <= k: {} <= {}{}",
        pe * m,
        pd.h_coeff,
        mark(pe * m <= pd.h_coeff as i128),
        2 * g - 2,
        m,
        len,
        mark(2 * g - 2 < m && m < len as i128),
        2 * g + 1,
        k,
        mark(k > 2 * g),
    )
}

/// Inputs shared by the one-point curve constructions.
pub(crate) struct CurveInput<'a> {
    pub model: &'a CurveModel,
    pub theorem: Theorem,
    pub eval_set: EvalSet,
    /// One multiplier per element of the evaluation set.
    pub v: Vec<Fe>,
    pub k: u64,
    pub e: u32,
    pub fiber_size: usize,
    pub params: serde_json::Map<String, serde_json::Value>,
}

/// Lifts the evaluation set to points, builds `C_L(D, (k-1)P_inf, v)` and verifies it.
pub(crate) fn build_curve_code(inp: CurveInput<'_>, opts: &VerifyOptions) -> Result<Construction, ConstructionError> {
    let CurveInput {
        model,
        theorem,
        eval_set,
        v,
        k,
        e,
        fiber_size,
        mut params,
    } = inp;
    let ctx = model.ctx().clone();
    if let Some(x) = eval_set.elements.iter().find(|&&x| model.fiber(x).len() != fiber_size) {
        return Err(ConstructionError::Verification(format!(
            "x = {} has {} points on the curve, expected {fiber_size}",
            x.0,
            model.fiber(*x).len()
        )));
    }
    let lifted = lift_multipliers(&eval_set.elements, &v, model);
    let (points, vp): (Vec<Point>, Vec<Fe>) = lifted.into_iter().unzip();
    let len = points.len();
    let g = model.genus();
    let divisors = PDivisorPair::for_design(len, g, k);
    let ok = criterion_check(ctx.p(), divisors.g_coeff, divisors.h_coeff, e, g, k, len);
    let msg = criterion_message(ctx.p(), e, g, k, len, &divisors);
    precondition(ok, || msg.clone())?;
    let evaluated = evaluate_code(model, &points, k - 1, &vp)?;
    let expected_dim = (k - g) as usize;
    let design = len - (k as usize - 1);
    let vo = VerifyOptions {
        e,
        expect_mds: false,
        design_bound: Some(design),
        expected_dim: Some(expected_dim),
        criterion: Some((ok, msg)),
        ..opts.clone()
    };
    let code = evaluated.code;
    let checks = verify_code(&code, &vo)?;
    params.insert("k".into(), k.into());
    params.insert("n".into(), eval_set.elements.len().into());
    params.insert("genus".into(), g.into());
    params.insert("curve".into(), model.family().to_string().into());
    let report = ConstructionReport {
        field: FieldInfo::of(&ctx),
        e,
        theorem: Some(theorem),
        params,
        length: len,
        dimension: code.k(),
        design_distance_bound: Some(design),
        divisors: Some(divisors.clone()),
        checks,
        seed: opts.seed,
    };
    Ok(Construction {
        plan: ConstructionPlan {
            theorem,
            family: model.family(),
            eval_set,
            k,
            e,
            v: vp,
            divisors,
        },
        code,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_examples() {
        // line, n = 1641, e = 1, p = 3: h_coeff = n - 2 - (k - 1)
        let h = |k: i64| 1641 - 2 - (k - 1);
        assert!(criterion_check(3, 409, h(410), 1, 0, 410, 1641));
        assert!(!criterion_check(3, 410, h(411), 1, 0, 411, 1641));
        assert_eq!(criterion_k_max(3, 1, 0, 1641), 410);
        // hermitian over GF(9), g = 3, k = 7, n = 27
        let pd = PDivisorPair::for_design(27, 3, 7);
        assert!(criterion_check(3, pd.g_coeff, pd.h_coeff, 1, 3, 7, 27));
        assert!(!criterion_check(3, 5, 27 + 4 - 5, 1, 3, 6, 27));
        assert_eq!(criterion_k_max(3, 1, 3, 27), 8);
    }
}
