//! MDS codes on the projective line.

use std::sync::Arc;

use super::{
    criterion_check, criterion_message, multipliers, precondition, verify_code, Construction, ConstructionError,
    ConstructionPlan, ConstructionReport, EvalSet, FieldInfo, Provenance, Theorem, VerifyOptions,
};
use crate::codes::{grs_encode, GrsSpec};
use crate::curves::{Family, PDivisorPair};
use crate::gf::{Fe, FieldCtx};

/// Wraps caller-supplied nodes; they must be distinct field elements.
pub fn line_generic_eval_set(ctx: &FieldCtx, nodes: Vec<Fe>) -> Result<EvalSet, ConstructionError> {
    precondition(nodes.iter().all(|x| ctx.contains(*x)), || {
        "node outside the field".into()
    })?;
    let mut sorted = nodes.clone();
    sorted.sort();
    precondition(sorted.windows(2).all(|w| w[0] != w[1]), || {
        "nodes must be distinct".into()
    })?;
    Ok(EvalSet {
        elements: nodes,
        provenance: Provenance::new("line_generic"),
    })
}

/// The GRS code `GRS_k(U, v)` with `v_t^{-(p^e+1)} = h'(u_t)`.
///
/// The degree condition `p^e (k-1) <= n - k - 1` is the precondition; the
/// resulting code is then checked for self-orthogonality, rank and MDS.
pub fn construct_line(
    ctx: &Arc<FieldCtx>,
    eval_set: EvalSet,
    k: u64,
    e: u32,
    theorem: Theorem,
    opts: &VerifyOptions,
) -> Result<Construction, ConstructionError> {
    let n = eval_set.elements.len();
    precondition(k >= 1, || format!("1 <= k fails: k = {k}"))?;
    precondition(e < ctx.h(), || format!("0 <= e <= h-1 fails: e = {e}"))?;
    let divisors = PDivisorPair::for_design(n, 0, k);
    let ok = criterion_check(ctx.p(), divisors.g_coeff, divisors.h_coeff, e, 0, k, n);
    let msg = criterion_message(ctx.p(), e, 0, k, n, &divisors);
    precondition(ok, || msg.clone())?;
    let v = multipliers(ctx, &eval_set.elements, e)?;
    let spec = GrsSpec::new(eval_set.elements.clone(), v.clone(), k as usize);
    let code = grs_encode(ctx, &spec)?;
    let design = n - k as usize + 1;
    let vo = VerifyOptions {
        e,
        expect_mds: true,
        design_bound: Some(design),
        expected_dim: Some(k as usize),
        criterion: Some((ok, msg)),
        ..opts.clone()
    };
    let checks = verify_code(&code, &vo)?;
    let mut params = eval_set.provenance.params.clone();
    params.insert("k".into(), k.into());
    params.insert("n".into(), n.into());
    if !eval_set.provenance.flags.is_empty() {
        params.insert("flags".into(), eval_set.provenance.flags.clone().into());
    }
    let report = ConstructionReport {
        field: FieldInfo::of(ctx),
        e,
        theorem: Some(theorem),
        params,
        length: n,
        dimension: code.k(),
        design_distance_bound: Some(design),
        divisors: Some(divisors.clone()),
        checks,
        seed: opts.seed,
    };
    Ok(Construction {
        plan: ConstructionPlan {
            theorem,
            family: Family::Line,
            eval_set,
            k,
            e,
            v,
            divisors,
        },
        code,
        report,
    })
}

/// The t3 code of length `(t+1)(q-1)/(p^e+1) + 1` and dimension `k`.
pub fn construct_t3(
    ctx: &Arc<FieldCtx>,
    e: u32,
    t: u32,
    k: u64,
    opts: &VerifyOptions,
) -> Result<Construction, ConstructionError> {
    let set = super::eval_set_t3(ctx, e, t)?;
    let pe = (ctx.p() as u64).pow(e);
    let kmax = ((t as u64 + 1) * (ctx.q() as u64 - 1) + pe * (pe + 1)) / ((pe + 1) * (pe + 1));
    precondition(k >= 1 && k <= kmax, || {
        format!("1 <= k <= floor(((t+1)(q-1)+p^e(p^e+1))/(p^e+1)^2) = {kmax} fails: k = {k}")
    })?;
    construct_line(ctx, set, k, e, Theorem::T3, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::is_galois_so;
    use crate::gf::make_field;

    #[test]
    fn t3_small_and_k1_sum() {
        let ctx = Arc::new(make_field(3, 4).unwrap());
        // q = 81: 8 does not divide N = 20
        assert!(construct_t3(&ctx, 1, 1, 2, &VerifyOptions::new(1, 7))
            .unwrap_err()
            .is_precondition());
        let ctx = Arc::new(make_field(3, 8).unwrap());
        let c = construct_t3(&ctx, 1, 0, 1, &VerifyOptions::new(1, 7)).unwrap();
        assert!(c.report.passed(), "{}", c.report.to_json());
        let sum = c.plan.v.iter().fold(Fe::ZERO, |acc, &v| ctx.add(acc, ctx.pow(v, 4)));
        assert_eq!(sum, Fe::ZERO);
        assert!(is_galois_so(&c.code, 1));
        let err = construct_t3(&ctx, 1, 0, 411, &VerifyOptions::new(1, 7)).unwrap_err();
        assert!(err.is_precondition());
    }
}
