//! Evaluation sets `U` and the derivative values `h'(alpha)` of
//! `h(x) = prod_{u in U} (x - u)`.

use serde_json::json;

use super::{precondition, ConstructionError, EvalSet, Provenance};
use crate::gf::{gcd, Fe, FieldCtx};
use crate::matrix::next_combination;

/// Candidate evaluation sets tried by a representative search before giving up.
pub const SEARCH_BUDGET: usize = 10_000;

/// `sum_{j != t} dlog(alpha_t - alpha_j)` reduced mod `q - 1`.
fn hprime_log(ctx: &FieldCtx, set: &[Fe], t: usize) -> u32 {
    let log = ctx.log_table();
    let m = ctx.order_minus_one() as u64;
    let a = set[t];
    let mut acc = 0u64;
    for (j, &b) in set.iter().enumerate() {
        if j != t {
            acc += log[ctx.sub(a, b).0 as usize] as u64;
        }
    }
    (acc % m) as u32
}

/// `h'(alpha_t) = prod_{j != t} (alpha_t - alpha_j)` for every `t`, by direct
/// evaluation. The set must be duplicate free.
pub fn hprime_values(ctx: &FieldCtx, set: &[Fe]) -> Vec<Fe> {
    (0..set.len())
        .map(|t| ctx.exp(hprime_log(ctx, set, t) as i64))
        .collect()
}

/// First position whose `h'` value falls outside `E`.
pub(crate) fn first_non_residue(ctx: &FieldCtx, set: &[Fe], e: u32) -> Option<usize> {
    let g = ctx.residue_index(e);
    (0..set.len()).find(|&t| !hprime_log(ctx, set, t).is_multiple_of(g))
}

fn distinct(ctx: &FieldCtx, set: &[Fe]) -> bool {
    let mut seen = vec![false; ctx.q() as usize];
    set.iter().all(|x| !std::mem::replace(&mut seen[x.0 as usize], true))
}

fn divides(d: u64, n: u64) -> bool {
    d != 0 && n.is_multiple_of(d)
}

/// `2e | h`, read with the convention that `e = 0` qualifies.
pub(crate) fn two_e_divides_h(ctx: &FieldCtx, e: u32) -> bool {
    e == 0 || ctx.h().is_multiple_of(2 * e)
}

fn pow_u64(p: u32, e: u32) -> u64 {
    (p as u64).pow(e)
}

/// The set `U_N ∪ α_1 U_N ∪ ... ∪ α_t U_N ∪ {0}` with `N = (q-1)/(p^e+1)`
/// and coset leaders `α_i = w^i`.
///
/// Points are ordered by discrete log inside each coset, cosets by leader,
/// and zero last. The derivative values are compared with their closed forms.
pub fn eval_set_t3(ctx: &FieldCtx, e: u32, t: u32) -> Result<EvalSet, ConstructionError> {
    let (p, h, q) = (ctx.p(), ctx.h(), ctx.q() as u64);
    precondition(p % 2 == 1, || format!("p must be odd, got p = {p}"))?;
    precondition(e >= 1 && h % (2 * e) == 0, || {
        format!("2e | h fails for e = {e}, h = {h}")
    })?;
    let pe = pow_u64(p, e);
    let n_big = (q - 1) / (pe + 1);
    precondition(divides(pe * pe - 1, n_big), || {
        format!(
            "(p^(2e)-1) | (q-1)/(p^e+1) fails: {} does not divide {n_big}",
            pe * pe - 1
        )
    })?;
    precondition(t as u64 <= pe, || format!("t <= p^e fails: t = {t}, p^e = {pe}"))?;
    let mut elements = Vec::with_capacity(((t as u64 + 1) * n_big + 1) as usize);
    for lambda in 0..=t as u64 {
        elements.extend((0..n_big).map(|s| ctx.exp((lambda + (pe + 1) * s) as i64)));
    }
    elements.push(Fe::ZERO);
    let direct = hprime_values(ctx, &elements);
    let closed = t3_closed_forms(ctx, e, t);
    if let Some(i) = (0..direct.len()).find(|&i| direct[i] != closed[i]) {
        return Err(ConstructionError::Verification(format!(
            "h'({}) = {} but the closed form gives {}",
            elements[i].0, direct[i].0, closed[i].0
        )));
    }
    let mut provenance = Provenance::new("t3")
        .with("t", t)
        .with("N", n_big)
        .with("coset_leader_dlogs", (1..=t).collect::<Vec<_>>());
    if t == 0 {
        provenance
            .flags
            .push("t = 0 lies below the stated range 1 <= t <= p^e".into());
    }
    Ok(EvalSet { elements, provenance })
}

/// Closed forms of `h'` on the t3 set, in the order of [`eval_set_t3`]:
/// `N prod(1 - α_i^N)` on `U_N`, `N α_j^N (α_j^N - 1) prod_{i≠j}(α_j^N - α_i^N)`
/// on `α_j U_N` and `(-1)^{t+1} prod α_i^N` at zero.
pub fn t3_closed_forms(ctx: &FieldCtx, e: u32, t: u32) -> Vec<Fe> {
    let q = ctx.q() as u64;
    let pe = pow_u64(ctx.p(), e);
    let n_big = (q - 1) / (pe + 1);
    let n_fe = Fe((n_big % ctx.p() as u64) as u32);
    let an: Vec<Fe> = (1..=t as u64).map(|i| ctx.exp((i * n_big) as i64)).collect();
    let on_un = an.iter().fold(n_fe, |acc, &a| ctx.mul(acc, ctx.sub(Fe::ONE, a)));
    let mut out = vec![on_un; n_big as usize];
    for (j, &aj) in an.iter().enumerate() {
        let base = ctx.mul(ctx.mul(n_fe, aj), ctx.sub(aj, Fe::ONE));
        let v = an
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .fold(base, |acc, (_, &ai)| ctx.mul(acc, ctx.sub(aj, ai)));
        out.extend(std::iter::repeat_n(v, n_big as usize));
    }
    let prod = an.iter().fold(Fe::ONE, |acc, &a| ctx.mul(acc, a));
    out.push(if t.is_multiple_of(2) { ctx.neg(prod) } else { prod });
    out
}

/// The six evaluation-set families on the Hermitian curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum T7Case {
    /// (1) `t` cosets of an `a`-linear subspace of dimension `w`; `n = t p^{aw}`.
    SubspaceCosets { a: u32, w: u32, t: u32 },
    /// (2) `t` fibers of the trace to `GF(p^e)`; `n = t p^{h-e}`.
    TraceFibers { t: u32 },
    /// (3) the t3 set; `n = (t+1)(q-1)/(p^e+1) + 1`.
    CyclotomicCosets { t: u32 },
    /// (4) `t` fibers of the norm to `GF(p^e)`, plus zero when `zero`.
    NormFibers { t: u32, zero: bool },
    /// (5) `r` cosets `ξ1^i <ξ2>` with `ξ1 = w^{x1}`, `ξ2 = w^{x2}`.
    CyclicProducts { x1: u64, x2: u64, r: u64, zero: bool },
    /// (6) `r` cosets of `μ_m` inside `V = <w^{y/gcd(m,y)}>`, `y = (q-1)/(p^e-1)`.
    SubgroupCosets { m: u64, r: u64, zero: bool },
}

/// Parameters shared by every case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct T7Params {
    pub e: u32,
    pub case: T7Case,
}

impl T7Case {
    pub fn number(&self) -> u32 {
        match self {
            T7Case::SubspaceCosets { .. } => 1,
            T7Case::TraceFibers { .. } => 2,
            T7Case::CyclotomicCosets { .. } => 3,
            T7Case::NormFibers { .. } => 4,
            T7Case::CyclicProducts { .. } => 5,
            T7Case::SubgroupCosets { .. } => 6,
        }
    }

    pub fn params_json(&self) -> serde_json::Map<String, serde_json::Value> {
        let v = match *self {
            T7Case::SubspaceCosets { a, w, t } => json!({"case": 1, "a": a, "w": w, "t": t}),
            T7Case::TraceFibers { t } => json!({"case": 2, "t": t}),
            T7Case::CyclotomicCosets { t } => json!({"case": 3, "t": t}),
            T7Case::NormFibers { t, zero } => json!({"case": 4, "t": t, "a": u8::from(zero)}),
            T7Case::CyclicProducts { x1, x2, r, zero } => {
                json!({"case": 5, "x1": x1, "x2": x2, "r": r, "a": u8::from(zero)})
            }
            T7Case::SubgroupCosets { m, r, zero } => json!({"case": 6, "m": m, "r": r, "a": u8::from(zero)}),
        };
        match v {
            serde_json::Value::Object(m) => m,
            _ => unreachable!(),
        }
    }

    /// Checks the stated parameter range and returns the length `n`.
    pub fn length(&self, ctx: &FieldCtx, e: u32) -> Result<u64, ConstructionError> {
        let (p, h, q) = (ctx.p(), ctx.h(), ctx.q() as u64);
        let pe = pow_u64(p, e);
        let qm1 = q - 1;
        match *self {
            T7Case::SubspaceCosets { a, w, t } => {
                precondition(a >= 1 && e.is_multiple_of(a), || {
                    format!("a | e fails: a = {a}, e = {e}")
                })?;
                precondition(t >= 1 && t as u64 <= pow_u64(p, a), || {
                    format!("1 <= t <= p^a fails: t = {t}")
                })?;
                precondition(w >= 1 && w < h / a, || format!("1 <= w <= h/a - 1 fails: w = {w}"))?;
                Ok(t as u64 * pow_u64(p, a * w))
            }
            T7Case::TraceFibers { t } => {
                precondition(t >= 1 && t as u64 <= pe, || format!("1 <= t <= p^e fails: t = {t}"))?;
                Ok(t as u64 * pow_u64(p, h - e))
            }
            T7Case::CyclotomicCosets { t } => {
                let n_big = qm1 / (pe + 1);
                precondition(divides(pe * pe - 1, n_big), || {
                    format!(
                        "(p^(2e)-1) | (q-1)/(p^e+1) fails: {} does not divide {n_big}",
                        pe * pe - 1
                    )
                })?;
                precondition(t as u64 <= pe, || format!("t <= p^e fails: t = {t}"))?;
                Ok((t as u64 + 1) * n_big + 1)
            }
            T7Case::NormFibers { t, zero } => {
                precondition(t >= 1 && (t as u64) < pe, || {
                    format!("1 <= t <= p^e - 1 fails: t = {t}")
                })?;
                Ok(t as u64 * (qm1 / (pe - 1)) + u64::from(zero))
            }
            T7Case::CyclicProducts { x1, x2, r, zero } => {
                precondition(x1 >= 1 && x2 >= 1, || "x1, x2 >= 1 fails".into())?;
                let lcm = x1 / gcd(x1, x2) * x2;
                precondition(divides(qm1, lcm), || format!("(q-1) | lcm(x1, x2) fails: lcm = {lcm}"))?;
                precondition(divides(gcd(x2, qm1), x1 * (pe - 1)), || {
                    "gcd(x2, q-1) | x1 (p^e-1) fails".into()
                })?;
                let rmax = qm1 / gcd(qm1, x1);
                precondition(r >= 1 && r <= rmax, || {
                    format!("1 <= r <= (q-1)/gcd(q-1, x1) = {rmax} fails: r = {r}")
                })?;
                Ok(r * (qm1 / gcd(qm1, x2)) + u64::from(zero))
            }
            T7Case::SubgroupCosets { m, r, zero } => {
                precondition(divides(m, qm1), || format!("m | (q-1) fails: m = {m}"))?;
                let y = qm1 / (pe - 1);
                let m1 = m / gcd(m, y);
                precondition(r >= 1 && r * m1 < pe, || {
                    format!("1 <= r <= (p^e-1)/m1 fails: r = {r}, m1 = {m1}")
                })?;
                Ok(r * m + u64::from(zero))
            }
        }
    }
}

/// Builds and verifies the evaluation set of one Hermitian case.
///
/// Where the construction leaves representatives open they are searched in
/// ascending order and the first set with every `h'` value in `E` is kept.
pub fn eval_sets_t7(ctx: &FieldCtx, params: T7Params) -> Result<EvalSet, ConstructionError> {
    let T7Params { e, case } = params;
    let (p, h) = (ctx.p(), ctx.h());
    precondition(p % 2 == 1, || format!("p must be odd, got p = {p}"))?;
    precondition(e >= 1 && h % (2 * e) == 0, || {
        format!("2e | h with e >= 1 fails for e = {e}, h = {h}")
    })?;
    let n = case.length(ctx, e)?;
    let base = Provenance {
        family: format!("t7.{}", case.number()),
        params: case.params_json(),
        flags: Vec::new(),
    };
    let set = match case {
        T7Case::SubspaceCosets { a, w, t } => subspace_cosets(ctx, e, a, w, t, base)?,
        T7Case::TraceFibers { t } => trace_fibers(ctx, e, t, base)?,
        T7Case::CyclotomicCosets { t } => {
            let mut s = eval_set_t3(ctx, e, t)?;
            s.provenance.params.extend(base.params);
            s.provenance.family = base.family;
            verified(ctx, e, s)?
        }
        T7Case::NormFibers { t, zero } => norm_fibers(ctx, e, t, zero, base)?,
        T7Case::CyclicProducts { x1, x2, r, zero } => cyclic_products(ctx, e, x1, x2, r, zero, base)?,
        T7Case::SubgroupCosets { m, r, zero } => subgroup_cosets(ctx, e, m, r, zero, base)?,
    };
    debug_assert_eq!(set.elements.len() as u64, n);
    Ok(set)
}

fn verified(ctx: &FieldCtx, e: u32, set: EvalSet) -> Result<EvalSet, ConstructionError> {
    match first_non_residue(ctx, &set.elements, e) {
        None => Ok(set),
        Some(i) => {
            let hp = hprime_values(ctx, &set.elements[..]);
            Err(ConstructionError::NotPowerResidue {
                index: i,
                element: set.elements[i].0,
                value: hp[i].0,
            })
        }
    }
}

/// Runs `build` on successive candidates until one passes.
fn search<C: std::fmt::Debug>(
    ctx: &FieldCtx,
    e: u32,
    candidates: impl Iterator<Item = C>,
    mut build: impl FnMut(&C) -> Option<Vec<Fe>>,
    detail: &str,
) -> Result<(C, Vec<Fe>, usize), ConstructionError> {
    let mut tried = 0;
    for c in candidates.take(SEARCH_BUDGET) {
        tried += 1;
        let Some(set) = build(&c) else { continue };
        if first_non_residue(ctx, &set, e).is_none() {
            return Ok((c, set, tried));
        }
    }
    Err(ConstructionError::SearchExhausted {
        tried,
        detail: detail.to_string(),
    })
}

/// Sorted-index combinations of `k` out of `n`, lexicographic.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        cur = (k > 0 && next_combination(&mut next, n)).then_some(next);
        Some(out)
    })
}

fn subspace_cosets(
    ctx: &FieldCtx,
    e: u32,
    a: u32,
    w: u32,
    t: u32,
    base: Provenance,
) -> Result<EvalSet, ConstructionError> {
    let sub = ctx.subfield(a)?;
    let qm1 = ctx.order_minus_one() as u64;
    let span = |lambda: Fe| {
        let mut k = vec![Fe::ZERO];
        for i in 0..w {
            let b = ctx.mul(lambda, ctx.exp(i as i64));
            k = k
                .iter()
                .flat_map(|&x| sub.iter().map(move |&c| (x, c)))
                .map(|(x, c)| ctx.add(x, ctx.mul(c, b)))
                .collect();
        }
        k
    };
    let betas = &sub[..t as usize];
    let etas: Vec<u64> = if t == 1 { vec![0] } else { (0..qm1).collect() };
    let cands = (0..qm1).flat_map(|s| etas.iter().map(move |&r| (s, r)));
    let (chosen, elements, tried) = search(
        ctx,
        e,
        cands,
        |&(s, r)| {
            let k = span(ctx.exp(s as i64));
            let eta = ctx.exp(r as i64);
            let u: Vec<Fe> = betas
                .iter()
                .flat_map(|&b| {
                    let shift = ctx.mul(b, eta);
                    k.iter().map(move |&x| ctx.add(x, shift))
                })
                .collect();
            distinct(ctx, &u).then_some(u)
        },
        "no scaling λ = w^s and shift η = w^r gave h' values in E",
    )?;
    let mut prov = base.with("lambda_dlog", chosen.0).with("candidates_tried", tried);
    if t > 1 {
        prov = prov.with("eta_dlog", chosen.1);
    }
    Ok(EvalSet {
        elements,
        provenance: prov,
    })
}

fn trace_fibers(ctx: &FieldCtx, e: u32, t: u32, base: Provenance) -> Result<EvalSet, ConstructionError> {
    let targets: Vec<Fe> = ctx.subfield(e)?[..t as usize].to_vec();
    let traces: Vec<Fe> = ctx
        .elements()
        .map(|x| ctx.relative_trace(x, e))
        .collect::<Result<_, _>>()?;
    let elements: Vec<Fe> = targets
        .iter()
        .flat_map(|&b| ctx.elements().filter(|x| traces[x.0 as usize] == b).collect::<Vec<_>>())
        .collect();
    let prov = base.with("targets", targets.iter().map(|b| b.0).collect::<Vec<_>>());
    verified(
        ctx,
        e,
        EvalSet {
            elements,
            provenance: prov,
        },
    )
}

fn norm_fibers(ctx: &FieldCtx, e: u32, t: u32, zero: bool, base: Provenance) -> Result<EvalSet, ConstructionError> {
    let pe1 = pow_u64(ctx.p(), e) - 1;
    let qm1 = ctx.order_minus_one() as u64;
    // the fiber over w^{y j} is {x : dlog x ≡ j mod (p^e - 1)}
    let fiber = |j: u64| (0..qm1 / pe1).map(move |s| ctx.exp((j + pe1 * s) as i64));
    let (chosen, elements, tried) = search(
        ctx,
        e,
        combinations(pe1 as usize, t as usize),
        |js| {
            let mut u: Vec<Fe> = js.iter().flat_map(|&j| fiber(j as u64)).collect();
            if zero {
                u.push(Fe::ZERO);
            }
            Some(u)
        },
        "no choice of norm targets gave h' values in E",
    )?;
    let y = qm1 / pe1;
    let targets: Vec<u64> = chosen.iter().map(|&j| j as u64 * y).collect();
    let prov = base.with("target_dlogs", targets).with("candidates_tried", tried);
    Ok(EvalSet {
        elements,
        provenance: prov,
    })
}

fn cyclic_products(
    ctx: &FieldCtx,
    e: u32,
    x1: u64,
    x2: u64,
    r: u64,
    zero: bool,
    base: Provenance,
) -> Result<EvalSet, ConstructionError> {
    let qm1 = ctx.order_minus_one() as u64;
    let r2 = qm1 / gcd(qm1, x2);
    let mut elements: Vec<Fe> = (1..=r)
        .flat_map(|i| (1..=r2).map(move |j| ctx.exp(((i * x1 + j * x2) % qm1) as i64)))
        .collect();
    if zero {
        elements.push(Fe::ZERO);
    }
    precondition(distinct(ctx, &elements), || {
        "the cosets ξ1^i <ξ2> are not pairwise distinct".into()
    })?;
    verified(
        ctx,
        e,
        EvalSet {
            elements,
            provenance: base,
        },
    )
}

fn subgroup_cosets(
    ctx: &FieldCtx,
    e: u32,
    m: u64,
    r: u64,
    zero: bool,
    base: Provenance,
) -> Result<EvalSet, ConstructionError> {
    let qm1 = ctx.order_minus_one() as u64;
    let pe1 = pow_u64(ctx.p(), e) - 1;
    let y = qm1 / pe1;
    let m2 = gcd(m, y);
    let v_order = m2 * pe1;
    precondition(v_order.is_multiple_of(m), || {
        format!("<w^((q-1)/m)> ⊆ <w^(y/m2)> fails: m = {m}, |V| = {v_order}")
    })?;
    let cosets = (v_order / m) as usize;
    let step_h = qm1 / m;
    let step_v = y / m2;
    let (chosen, elements, tried) = search(
        ctx,
        e,
        combinations(cosets, r as usize),
        |cs| {
            let mut u: Vec<Fe> = cs
                .iter()
                .flat_map(|&c| (0..m).map(move |s| ctx.exp(((c as u64 * step_v + s * step_h) % qm1) as i64)))
                .collect();
            if zero {
                u.push(Fe::ZERO);
            }
            Some(u)
        },
        "no choice of V/H coset representatives gave h' values in E",
    )?;
    let reps: Vec<u64> = chosen.iter().map(|&c| c as u64 * step_v).collect();
    let prov = base
        .with("m2", m2)
        .with("representative_dlogs", reps)
        .with("candidates_tried", tried);
    Ok(EvalSet {
        elements,
        provenance: prov,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn t3_sizes_and_closed_forms() {
        let ctx = make_field(3, 8).unwrap();
        for (t, n) in [(0, 1641), (3, 6561)] {
            let s = eval_set_t3(&ctx, 1, t).unwrap();
            assert_eq!(s.elements.len(), n);
            assert!(distinct(&ctx, &s.elements));
        }
        assert!(eval_set_t3(&ctx, 1, 0).unwrap().provenance.flags.len() == 1);
        let s = eval_set_t3(&ctx, 1, 1).unwrap();
        assert_eq!(first_non_residue(&ctx, &s.elements, 1), None);
    }

    #[test]
    fn t3_preconditions() {
        let f9 = make_field(3, 2).unwrap();
        assert!(eval_set_t3(&f9, 1, 1).unwrap_err().is_precondition());
        let f16 = make_field(2, 4).unwrap();
        assert!(eval_set_t3(&f16, 1, 1).is_err());
    }

    #[test]
    fn t7_small_cases() {
        let ctx = make_field(3, 2).unwrap();
        let s = eval_sets_t7(
            &ctx,
            T7Params {
                e: 1,
                case: T7Case::TraceFibers { t: 3 },
            },
        )
        .unwrap();
        let mut all = s.elements.clone();
        all.sort();
        assert_eq!(all, ctx.elements().collect::<Vec<_>>());
        let s = eval_sets_t7(
            &ctx,
            T7Params {
                e: 1,
                case: T7Case::NormFibers { t: 1, zero: true },
            },
        )
        .unwrap();
        assert_eq!(s.elements.len(), 5);
        assert!(s.elements.contains(&Fe::ZERO));
        let s = eval_sets_t7(
            &ctx,
            T7Params {
                e: 1,
                case: T7Case::SubspaceCosets { a: 1, w: 1, t: 2 },
            },
        )
        .unwrap();
        assert_eq!(s.elements.len(), 6);
    }
}
