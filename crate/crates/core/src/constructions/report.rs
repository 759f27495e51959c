//! Verification of constructed codes and the machine-readable report.

use std::time::Instant;

use serde::Serialize;

use super::{ConstructionError, Theorem};
use crate::codes::{
    is_mds, message_count, min_distance, so_witness, Distance, DistanceMode, LinearCode, MdsMode, MdsRoute,
    CODEWORD_BUDGET, DEFAULT_SAMPLES,
};
use crate::curves::PDivisorPair;
use crate::gf::FieldCtx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Passed a seeded sampled test rather than an exhaustive one.
    Certificate,
}

impl Verdict {
    pub fn ok(self) -> bool {
        self != Verdict::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub verdict: Verdict,
    pub mode: String,
    pub millis: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub galois_so: Check,
    pub dimension: Check,
    pub mds: Check,
    pub criterion: Check,
}

impl Checks {
    pub fn all_ok(&self) -> bool {
        [&self.galois_so, &self.dimension, &self.mds, &self.criterion]
            .iter()
            .all(|c| c.verdict.ok())
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            ("galois_so", &self.galois_so),
            ("dimension", &self.dimension),
            ("mds", &self.mds),
            ("criterion", &self.criterion),
        ]
        .iter()
        .filter(|(_, c)| !c.verdict.ok())
        .map(|(n, _)| *n)
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FieldInfo {
    pub p: u32,
    pub h: u32,
    pub q: u32,
}

impl FieldInfo {
    pub fn of(ctx: &FieldCtx) -> Self {
        FieldInfo {
            p: ctx.p(),
            h: ctx.h(),
            q: ctx.q(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub field: FieldInfo,
    pub e: u32,
    /// `None` when a loaded matrix was verified without construction data.
    pub theorem: Option<Theorem>,
    pub params: serde_json::Map<String, serde_json::Value>,
    pub length: usize,
    pub dimension: usize,
    pub design_distance_bound: Option<usize>,
    pub divisors: Option<PDivisorPair>,
    pub checks: Checks,
    pub seed: u64,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        self.checks.all_ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `Err(Verification)` naming the failed checks.
    pub fn require_pass(&self) -> Result<(), ConstructionError> {
        if self.passed() {
            Ok(())
        } else {
            Err(ConstructionError::Verification(format!(
                "checks failed: {}",
                self.checks.failures().join(", ")
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdsChoice {
    Auto,
    Exhaustive,
    Sampled { count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceChoice {
    Auto,
    Exhaustive,
    Sampled { samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub e: u32,
    pub seed: u64,
    pub mds: MdsChoice,
    pub distance: DistanceChoice,
    /// Test the Singleton bound instead of `design_bound`.
    pub expect_mds: bool,
    pub design_bound: Option<usize>,
    pub expected_dim: Option<usize>,
    /// Outcome of the construction's criterion, if there was one.
    pub criterion: Option<(bool, String)>,
}

impl VerifyOptions {
    pub fn new(e: u32, seed: u64) -> Self {
        VerifyOptions {
            e,
            seed,
            mds: MdsChoice::Auto,
            distance: DistanceChoice::Auto,
            expect_mds: false,
            design_bound: None,
            expected_dim: None,
            criterion: None,
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_millis() as u64)
}

fn route_mode(r: &MdsRoute) -> String {
    match r {
        MdsRoute::Distance => "exhaustive_distance".into(),
        MdsRoute::AllSubsets => "all_subsets".into(),
        MdsRoute::SampledStructured {
            count,
            seed,
            cross_checked,
        } => format!("sampled_structured(count={count},seed={seed:#x},cross_checked={cross_checked})"),
        MdsRoute::SampledElimination { count, seed } => format!("sampled_elimination(count={count},seed={seed:#x})"),
    }
}

fn mds_check(code: &LinearCode, opts: &VerifyOptions) -> Result<Check, ConstructionError> {
    let seed = opts.seed;
    let mode = match opts.mds {
        MdsChoice::Auto => MdsMode::Auto { seed },
        MdsChoice::Exhaustive => MdsMode::Exhaustive,
        MdsChoice::Sampled { count } => MdsMode::Sampled { count, seed },
    };
    let (res, millis) = timed(|| is_mds(code, mode));
    let (verdict, millis, note) = match res {
        Ok(v) => (v, millis, None),
        Err(crate::codes::CodeError::BudgetExceeded { needed, budget }) => {
            let note = format!("exhaustive check needs {needed} > {budget}; downgraded to sampled");
            let (v, m2) = timed(|| {
                is_mds(
                    code,
                    MdsMode::Sampled {
                        count: DEFAULT_SAMPLES,
                        seed,
                    },
                )
            });
            (v?, millis + m2, Some(note))
        }
        Err(e) => return Err(e.into()),
    };
    let mut parts: Vec<String> = note.into_iter().chain(verdict.note.clone()).collect();
    if let Some(w) = &verdict.witness {
        parts.push(format!("singular columns {w:?}"));
    }
    let note = (!parts.is_empty()).then(|| parts.join("; "));
    let v = match (verdict.holds, verdict.route.is_certificate()) {
        (false, _) => Verdict::Fail,
        (true, true) => Verdict::Certificate,
        (true, false) => Verdict::Pass,
    };
    Ok(Check {
        verdict: v,
        mode: route_mode(&verdict.route),
        millis,
        note,
    })
}

fn distance_check(code: &LinearCode, opts: &VerifyOptions) -> Result<Check, ConstructionError> {
    let bound = opts.design_bound.unwrap_or(1);
    let feasible = message_count(code.ctx().q(), code.k()) <= CODEWORD_BUDGET;
    let sampled = |samples| DistanceMode::BoundCheck {
        samples,
        seed: opts.seed,
        bound,
    };
    let (mode, mut note) = match opts.distance {
        DistanceChoice::Auto if feasible => (DistanceMode::Exhaustive, None),
        DistanceChoice::Auto => (sampled(DEFAULT_SAMPLES), None),
        DistanceChoice::Exhaustive if feasible => (DistanceMode::Exhaustive, None),
        DistanceChoice::Exhaustive => (
            sampled(DEFAULT_SAMPLES),
            Some(format!(
                "exhaustive enumeration needs {} > {CODEWORD_BUDGET} codewords; downgraded to sampled",
                message_count(code.ctx().q(), code.k())
            )),
        ),
        DistanceChoice::Sampled { samples } => (sampled(samples), None),
    };
    let (res, millis) = timed(|| min_distance(code, mode));
    let (verdict, mode_s, detail) = match res? {
        Distance::Exact(d) => {
            let v = if d >= bound { Verdict::Pass } else { Verdict::Fail };
            (
                v,
                "exhaustive_distance".to_string(),
                format!("minimum distance {d}, bound {bound}"),
            )
        }
        Distance::Bound {
            samples,
            min_observed,
            holds,
            ..
        } => {
            let v = if holds { Verdict::Certificate } else { Verdict::Fail };
            (
                v,
                format!("sampled_weights(samples={samples},seed={:#x})", opts.seed),
                format!("minimum sampled weight {min_observed}, bound {bound}"),
            )
        }
    };
    note = Some(match note {
        Some(n) => format!("{n}; {detail}"),
        None => detail,
    });
    Ok(Check {
        verdict,
        mode: mode_s,
        millis,
        note,
    })
}

/// Runs the exact self-orthogonality check, the rank check and the
/// MDS or distance check on `code`.
pub fn verify_code(code: &LinearCode, opts: &VerifyOptions) -> Result<Checks, ConstructionError> {
    let (w, millis) = timed(|| so_witness(code, opts.e));
    let galois_so = Check {
        verdict: if w.is_none() { Verdict::Pass } else { Verdict::Fail },
        mode: "exact_gram".into(),
        millis,
        note: w.map(|(i, j, v)| format!("<g_{i}, g_{j}>_{} = {}", opts.e, v.0)),
    };
    let (rank, millis) = timed(|| code.generator().rank());
    let expected = opts.expected_dim.unwrap_or(code.k());
    let dimension = Check {
        verdict: if rank == expected && rank == code.k() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        mode: "rank".into(),
        millis,
        note: Some(format!("rank {rank}, expected {expected}")),
    };
    let mds = if opts.expect_mds {
        mds_check(code, opts)?
    } else {
        distance_check(code, opts)?
    };
    let criterion = match &opts.criterion {
        Some((ok, detail)) => Check {
            verdict: if *ok { Verdict::Pass } else { Verdict::Fail },
            mode: "degree_condition".into(),
            millis: 0,
            note: Some(detail.clone()),
        },
        None => Check {
            verdict: Verdict::Pass,
            mode: "not_applicable".into(),
            millis: 0,
            note: Some("no construction data; self-orthogonality was checked directly".into()),
        },
    };
    Ok(Checks {
        galois_so,
        dimension,
        mds,
        criterion,
    })
}
