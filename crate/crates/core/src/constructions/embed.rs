//! Extending an MDS Galois self-orthogonal GRS code by one row.

use super::{precondition, verify_code, ConstructionError, ConstructionReport, FieldInfo, Theorem, VerifyOptions};
use crate::codes::{grs_encode, so_witness, GrsSpec, LinearCode};
use crate::gf::{Fe, GfError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbedCase {
    /// `k(p^e+1) + 1 = n`: new row and a new coordinate, `[n+1, k+1]`.
    Extend = 1,
    /// `k(p^e+1) + 1 < n`: new row only, `[n, k+1]`.
    Below = 2,
    /// `k(p^e+1) + 1 > n` with `(n-1) | (q-1)`: new row only, `[n, k+1]`.
    Above = 3,
}

#[derive(Debug, Clone)]
pub struct Embedded {
    pub code: LinearCode,
    pub case: EmbedCase,
    /// The entry of the new coordinate in case 1.
    pub gamma: Option<Fe>,
    pub report: ConstructionReport,
}

/// Appends the row `(v_t alpha_t^k)` and, in case 1, the coordinate `gamma`
/// with `gamma^{p^e+1} = -1` of smallest discrete log.
pub fn embed(c: &LinearCode, e: u32, opts: &VerifyOptions) -> Result<Embedded, ConstructionError> {
    let ctx = c.ctx().clone();
    let grs = c
        .grs()
        .filter(|g| g.infinity.is_none() && c.grs_matches_generator())
        .ok_or_else(|| ConstructionError::Precondition("input must be a GRS code without infinity column".into()))?;
    let (n, k) = (grs.alpha.len() as u64, grs.k as u64);
    let pe1 = (ctx.p() as u64).pow(e) + 1;
    let kmax = (n + pe1 - 2) / pe1;
    precondition(k >= 1 && k <= kmax, || {
        format!("1 <= k <= floor((n+p^e-1)/(p^e+1)) = {kmax} fails: k = {k}")
    })?;
    precondition(so_witness(c, e).is_none(), || {
        format!("input is not {e}-Galois self-orthogonal")
    })?;
    let lhs = k * pe1 + 1;
    let q = ctx.q() as u64;
    let (case, gamma) = if lhs == n {
        let minus_one = ctx.neg(Fe::ONE);
        let gamma = ctx.root_pe1(minus_one, e).map_err(|err| match err {
            GfError::NotPowerResidue(_) => ConstructionError::Precondition(format!(
                "no gamma with gamma^(p^e+1) = -1: dlog(-1) = {} is not divisible by gcd(p^e+1, q-1) = {}",
                ctx.dlog(minus_one).unwrap_or(0),
                ctx.residue_index(e)
            )),
            other => other.into(),
        })?;
        (EmbedCase::Extend, Some(gamma))
    } else if lhs < n {
        (EmbedCase::Below, None)
    } else {
        precondition(n >= 2 && (q - 1).is_multiple_of(n - 1), || {
            format!("(n-1) | (q-1) fails: n = {n}, q = {q}")
        })?;
        (EmbedCase::Above, None)
    };
    let spec = GrsSpec {
        alpha: grs.alpha.clone(),
        v: grs.v.clone(),
        k: k as usize + 1,
        infinity: gamma,
    };
    let code = grs_encode(&ctx, &spec)?;
    let design = code.n() - code.k() + 1;
    let relation = match case {
        EmbedCase::Extend => "=",
        EmbedCase::Below => "<",
        EmbedCase::Above => ">",
    };
    let vo = VerifyOptions {
        e,
        expect_mds: true,
        design_bound: Some(design),
        expected_dim: Some(k as usize + 1),
        criterion: Some((
            true,
            format!("case {}: k(p^e+1)+1 = {lhs} {relation} n = {n}", case as u8),
        )),
        ..opts.clone()
    };
    let checks = verify_code(&code, &vo)?;
    let mut params = serde_json::Map::new();
    params.insert("case".into(), (case as u8).into());
    params.insert("input_length".into(), n.into());
    params.insert("input_dimension".into(), k.into());
    if let Some(g) = gamma {
        params.insert("gamma".into(), g.0.into());
    }
    let report = ConstructionReport {
        field: FieldInfo::of(&ctx),
        e,
        theorem: Some(Theorem::Embed),
        params,
        length: code.n(),
        dimension: code.k(),
        design_distance_bound: Some(design),
        divisors: None,
        checks,
        seed: opts.seed,
    };
    Ok(Embedded {
        code,
        case,
        gamma,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::is_galois_so;
    use crate::constructions::construct_t3;
    use crate::gf::make_field;
    use std::sync::Arc;

    #[test]
    fn gamma_over_3_8() {
        let ctx = make_field(3, 8).unwrap();
        let g = ctx.root_pe1(ctx.neg(Fe::ONE), 1).unwrap();
        assert_eq!(ctx.dlog(g).unwrap(), 820);
        assert_eq!(ctx.dlog(ctx.neg(Fe::ONE)).unwrap(), 3280);
    }

    #[test]
    fn case_two_keeps_length() {
        let ctx = Arc::new(make_field(3, 8).unwrap());
        let opts = VerifyOptions::new(1, 3);
        let base = construct_t3(&ctx, 1, 0, 20, &opts).unwrap();
        let out = embed(&base.code, 1, &opts).unwrap();
        assert_eq!(out.case, EmbedCase::Below);
        assert_eq!((out.code.n(), out.code.k()), (1641, 21));
        assert!(is_galois_so(&out.code, 1));
    }
}
