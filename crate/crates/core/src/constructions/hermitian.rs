//! Codes on the Hermitian curve `y^r + y = x^{r+1}`, `r = sqrt(q)`.

use std::sync::Arc;

use super::{
    build_curve_code, eval_sets_t7, multipliers, precondition, Construction, ConstructionError, CurveInput, EvalSet,
    T7Params, Theorem, VerifyOptions,
};
use crate::curves::{enumerate_points, sqrt_q, Family};
use crate::gf::FieldCtx;

/// The `[sqrt(q) n, k - (q - sqrt(q))/2, >= sqrt(q) n - k + 1]` code over
/// the points above `eval_set`.
pub fn construct_hermitian(
    ctx: &Arc<FieldCtx>,
    e: u32,
    eval_set: EvalSet,
    k: u64,
    opts: &VerifyOptions,
) -> Result<Construction, ConstructionError> {
    let r = sqrt_q(ctx).ok_or_else(|| ConstructionError::Precondition(format!("h even fails: h = {}", ctx.h())))?;
    precondition(e < ctx.h(), || format!("0 <= e <= h-1 fails: e = {e}"))?;
    let q = ctx.q() as u64;
    let n = eval_set.elements.len() as u64;
    let pe = (ctx.p() as u64).pow(e);
    let kmin = 1 + q - r;
    let kmax = (r * n + pe + q - r - 1) / (pe + 1);
    precondition(k >= kmin && k <= kmax, || {
        format!("1+q-sqrt(q) = {kmin} <= k <= floor((sqrt(q)n+p^e+q-sqrt(q)-1)/(p^e+1)) = {kmax} fails: k = {k}")
    })?;
    let v = multipliers(ctx, &eval_set.elements, e)?;
    let model = enumerate_points(Family::Hermitian, ctx.clone())?;
    let mut params = eval_set.provenance.params.clone();
    params.insert("family".into(), eval_set.provenance.family.clone().into());
    build_curve_code(
        CurveInput {
            model: &model,
            theorem: Theorem::T7,
            eval_set,
            v,
            k,
            e,
            fiber_size: r as usize,
            params,
        },
        opts,
    )
}

/// Builds the evaluation set of one case and then the code.
pub fn construct_t7(
    ctx: &Arc<FieldCtx>,
    params: T7Params,
    k: u64,
    opts: &VerifyOptions,
) -> Result<Construction, ConstructionError> {
    let set = eval_sets_t7(ctx, params)?;
    construct_hermitian(ctx, params.e, set, k, opts)
}
