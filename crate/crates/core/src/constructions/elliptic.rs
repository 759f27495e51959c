//! Codes on the elliptic curves `y^2 + y = x^3` and `y^2 + y = x^3 + x`.

use std::sync::Arc;

use super::evalset::two_e_divides_h;
use super::{
    build_curve_code, multipliers, precondition, Construction, ConstructionError, CurveInput, EvalSet, Provenance,
    Theorem, VerifyOptions,
};
use crate::curves::{enumerate_points, Family};
use crate::gf::{Fe, FieldCtx};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum T5Variant {
    /// `{a in E : Tr(a^3) = 0}` on `y^2 + y = x^3`.
    U1,
    /// `{a in E : Tr(a + a^3) = 0}` on `y^2 + y = x^3 + x`.
    U2,
}

impl T5Variant {
    pub fn family(self) -> Family {
        match self {
            T5Variant::U1 => Family::Elliptic { a: 1, b: 0, c: 0 },
            T5Variant::U2 => Family::Elliptic { a: 1, b: 1, c: 0 },
        }
    }

    pub fn theorem(self) -> Theorem {
        match self {
            T5Variant::U1 => Theorem::T5a,
            T5Variant::U2 => Theorem::T5b,
        }
    }
}

/// The full set `U_1` or `U_2`, scanning `E` in encoding order.
pub fn eval_sets_t5(ctx: &FieldCtx, e: u32, variant: T5Variant) -> Result<EvalSet, ConstructionError> {
    precondition(ctx.p() == 2, || format!("p = 2 fails: p = {}", ctx.p()))?;
    precondition(two_e_divides_h(ctx, e), || {
        format!("2e | h fails for e = {e}, h = {}", ctx.h())
    })?;
    let mut elements = Vec::new();
    for a in ctx.nonzero() {
        if !ctx.is_power_residue(a, e)? {
            continue;
        }
        let a3 = ctx.pow(a, 3);
        let arg = match variant {
            T5Variant::U1 => a3,
            T5Variant::U2 => ctx.add(a, a3),
        };
        if ctx.trace_to_prime(arg) == Fe::ZERO {
            elements.push(a);
        }
    }
    let name = match variant {
        T5Variant::U1 => "t5.U1",
        T5Variant::U2 => "t5.U2",
    };
    Ok(EvalSet {
        elements,
        provenance: Provenance::new(name),
    })
}

/// The `[2n, k-1, >= 2n-k+1]` code from the first `n` elements of `U_1` or `U_2`.
pub fn construct_elliptic(
    ctx: &Arc<FieldCtx>,
    e: u32,
    variant: T5Variant,
    n: usize,
    k: u64,
    opts: &VerifyOptions,
) -> Result<Construction, ConstructionError> {
    let mut set = eval_sets_t5(ctx, e, variant)?;
    let size = set.elements.len();
    precondition(n >= 1 && n <= size, || format!("1 <= n <= |U| = {size} fails: n = {n}"))?;
    let pe = 1u64 << e;
    let kmax = (2 * n as u64 + pe + 1) / (pe + 1);
    precondition(k >= 3 && k <= kmax, || {
        format!("3 <= k <= floor((2n+2^e+1)/(2^e+1)) = {kmax} fails: k = {k}")
    })?;
    set.elements.truncate(n);
    set.provenance = set.provenance.with("full_size", size);
    let v = multipliers(ctx, &set.elements, e)?;
    let model = enumerate_points(variant.family(), ctx.clone())?;
    let params = set.provenance.params.clone();
    build_curve_code(
        CurveInput {
            model: &model,
            theorem: variant.theorem(),
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
    fn small_sets() {
        let f4 = make_field(2, 2).unwrap();
        let u1 = eval_sets_t5(&f4, 1, T5Variant::U1).unwrap();
        assert_eq!(u1.elements, vec![Fe::ONE]);
        let f16 = make_field(2, 4).unwrap();
        for variant in [T5Variant::U1, T5Variant::U2] {
            let s = eval_sets_t5(&f16, 1, variant).unwrap();
            assert!(!s.elements.contains(&Fe::ZERO));
        }
        assert!(eval_sets_t5(&make_field(3, 2).unwrap(), 1, T5Variant::U1).is_err());
    }

    #[test]
    fn window_is_enforced() {
        let ctx = Arc::new(make_field(2, 4).unwrap());
        let err = construct_elliptic(&ctx, 1, T5Variant::U2, 5, 5, &VerifyOptions::new(1, 1)).unwrap_err();
        assert!(err.is_precondition());
    }
}
