//! Codes on the hyper-elliptic curve `y^2 + y = x^{sqrt(q)+1}`.

use std::sync::Arc;

use super::{
    build_curve_code, hprime_values, precondition, Construction, ConstructionError, CurveInput, EvalSet, Provenance,
    Theorem, VerifyOptions,
};
use crate::curves::{enumerate_points, sqrt_q, Family};
use crate::gf::{Fe, FieldCtx};

/// The roots of `x^n - x`, that is `{0}` and the `(n-1)`-th roots of unity,
/// in encoding order.
pub fn eval_set_t6(ctx: &FieldCtx, n: u64) -> Result<EvalSet, ConstructionError> {
    let q = ctx.q() as u64;
    precondition(ctx.p() == 2, || format!("q = 2^h fails: p = {}", ctx.p()))?;
    precondition(ctx.h().is_multiple_of(2) && q >= 4, || {
        format!("q >= 4 with h even fails: h = {}", ctx.h())
    })?;
    precondition(n >= 2 && (q - 1).is_multiple_of(n - 1), || {
        format!("(n-1) | (q-1) fails: n = {n}")
    })?;
    precondition(2 * n <= 2 * q, || format!("2n <= N(H) - 1 = {} fails: n = {n}", 2 * q))?;
    let step = (q - 1) / (n - 1);
    let mut elements: Vec<Fe> = std::iter::once(Fe::ZERO)
        .chain((0..n - 1).map(|j| ctx.exp((j * step) as i64)))
        .collect();
    elements.sort();
    Ok(EvalSet {
        elements,
        provenance: Provenance::new("t6").with("n", n),
    })
}

/// The `[2n, k - sqrt(q)/2, >= 2n-k+1]` code with all-one multipliers.
pub fn construct_hyper_elliptic(
    ctx: &Arc<FieldCtx>,
    e: u32,
    n: u64,
    k: u64,
    opts: &VerifyOptions,
) -> Result<Construction, ConstructionError> {
    let set = eval_set_t6(ctx, n)?;
    precondition(e < ctx.h(), || format!("0 <= e <= h-1 fails: e = {e}"))?;
    let r = sqrt_q(ctx).expect("h even");
    let pe = 1u64 << e;
    let kmax = (2 * n + pe + r - 1) / (pe + 1);
    precondition(k > r && k <= kmax, || {
        format!("1+sqrt(q) <= k <= floor((2n+2^e+sqrt(q)-1)/(2^e+1)) = {kmax} fails: k = {k}")
    })?;
    let hp = hprime_values(ctx, &set.elements);
    if let Some(i) = hp.iter().position(|&x| x != Fe::ONE) {
        return Err(ConstructionError::Verification(format!(
            "h'({}) = {}, expected 1",
            set.elements[i].0, hp[i].0
        )));
    }
    let v = vec![Fe::ONE; set.elements.len()];
    let model = enumerate_points(Family::HyperElliptic, ctx.clone())?;
    let params = set.provenance.params.clone();
    build_curve_code(
        CurveInput {
            model: &model,
            theorem: Theorem::T6,
            eval_set: set,
            v,
            k,
            e,
            fiber_size: 2,
            params,
        },
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn eval_set_shape() {
        let ctx = make_field(2, 8).unwrap();
        assert_eq!(eval_set_t6(&ctx, 18).unwrap().elements.len(), 18);
        assert!(eval_set_t6(&ctx, 17).unwrap_err().is_precondition());
        assert_eq!(
            eval_set_t6(&ctx, 256).unwrap().elements,
            ctx.elements().collect::<Vec<_>>()
        );
    }
}
