//! Enumeration of admissible parameters for each construction.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::evalset::two_e_divides_h;
use super::{eval_sets_t5, T5Variant, Theorem};
use crate::curves::sqrt_q;
use crate::gf::{gcd, FieldCtx};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremFilter {
    All,
    T3,
    T5,
    T6,
    T7,
    Embed,
}

impl std::str::FromStr for TheoremFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "all" => TheoremFilter::All,
            "t3" => TheoremFilter::T3,
            "t5" => TheoremFilter::T5,
            "t6" => TheoremFilter::T6,
            "t7" => TheoremFilter::T7,
            "embed" => TheoremFilter::Embed,
            _ => return Err(format!("unknown theorem filter {s:?}")),
        })
    }
}

/// One admissible family of codes: every design `k` in `k_min..=k_max`
/// gives a code of the stated length, dimension `k + dim_offset` and
/// distance (at least) `length + dist_offset - k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamRow {
    pub theorem: Theorem,
    pub e: u32,
    pub params: String,
    pub n: u64,
    pub length: u64,
    pub k_min: u64,
    pub k_max: u64,
    pub dim_offset: i64,
    pub dist_offset: i64,
    /// Distance is exactly `length + dist_offset - k` (MDS).
    pub exact_distance: bool,
}

impl ParamRow {
    /// `[n,k,d]` with a symbolic `k` unless the window is a single value.
    pub fn code_string(&self) -> String {
        let ge = if self.exact_distance { "" } else { ">=" };
        if self.k_min == self.k_max {
            let k = self.k_min as i64;
            return format!(
                "[{},{},{ge}{}]",
                self.length,
                k + self.dim_offset,
                self.length as i64 + self.dist_offset - k
            );
        }
        let dim = match self.dim_offset {
            0 => "k".to_string(),
            d if d > 0 => format!("k+{d}"),
            d => format!("k{d}"),
        };
        format!(
            "[{},{dim},{ge}{}-k]",
            self.length,
            self.length as i64 + self.dist_offset
        )
    }
}

impl fmt::Display for ParamRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} e={} {} n={} length={} k={}..{} code={}",
            self.theorem,
            self.e,
            self.params,
            self.n,
            self.length,
            self.k_min,
            self.k_max,
            self.code_string()
        )
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..)
        .take_while(|d| d * d <= n)
        .filter(|d| n.is_multiple_of(*d))
        .flat_map(|d| [d, n / d])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// All parameter tuples whose stated preconditions hold over `ctx` for this
/// `e`, ordered by theorem, case and length. Windows that are empty are
/// left out.
pub fn search_params(ctx: &FieldCtx, e: u32, filter: TheoremFilter) -> Vec<ParamRow> {
    let mut rows = Vec::new();
    if e >= ctx.h() {
        return rows;
    }
    let want = |f: TheoremFilter| filter == TheoremFilter::All || filter == f;
    if want(TheoremFilter::T3) {
        rows.extend(t3_rows(ctx, e));
    }
    if want(TheoremFilter::Embed) {
        rows.extend(embed_rows(ctx, e));
    }
    if want(TheoremFilter::T5) {
        rows.extend(t5_rows(ctx, e));
    }
    if want(TheoremFilter::T6) {
        rows.extend(t6_rows(ctx, e));
    }
    if want(TheoremFilter::T7) {
        rows.extend(t7_rows(ctx, e));
    }
    rows
}

/// `(t, n, k_max)` for every admissible t3 parameter.
fn t3_params(ctx: &FieldCtx, e: u32) -> Vec<(u64, u64, u64)> {
    let (p, h, q) = (ctx.p() as u64, ctx.h(), ctx.q() as u64);
    if p % 2 == 0 || e == 0 || h % (2 * e) != 0 {
        return Vec::new();
    }
    let pe = p.pow(e);
    let nb = (q - 1) / (pe + 1);
    if nb % (pe * pe - 1) != 0 {
        return Vec::new();
    }
    (0..=pe)
        .map(|t| {
            let kmax = ((t + 1) * (q - 1) + pe * (pe + 1)) / ((pe + 1) * (pe + 1));
            (t, (t + 1) * nb + 1, kmax)
        })
        .filter(|&(_, _, kmax)| kmax >= 1)
        .collect()
}

fn t3_rows(ctx: &FieldCtx, e: u32) -> Vec<ParamRow> {
    t3_params(ctx, e)
        .into_iter()
        .map(|(t, n, kmax)| ParamRow {
            theorem: Theorem::T3,
            e,
            params: format!("t={t}"),
            n,
            length: n,
            k_min: 1,
            k_max: kmax,
            dim_offset: 0,
            dist_offset: 1,
            exact_distance: true,
        })
        .collect()
}

/// One-row extensions of the t3 codes; `k` is the input dimension.
fn embed_rows(ctx: &FieldCtx, e: u32) -> Vec<ParamRow> {
    let q = ctx.q() as u64;
    let pe1 = (ctx.p() as u64).pow(e) + 1;
    let mut rows = Vec::new();
    for (t, n, kmax) in t3_params(ctx, e) {
        if (n - 1) % pe1 == 0 && (n - 1) / pe1 <= kmax && (n - 1) / pe1 >= 1 {
            let k = (n - 1) / pe1;
            rows.push(ParamRow {
                theorem: Theorem::Embed,
                e,
                params: format!("from=t3 t={t} case=1"),
                n,
                length: n + 1,
                k_min: k,
                k_max: k,
                dim_offset: 1,
                dist_offset: 0,
                exact_distance: true,
            });
        }
        let kfirst = (n - 1) / pe1 + 1;
        if (q - 1).is_multiple_of(n - 1) && kfirst <= kmax {
            rows.push(ParamRow {
                theorem: Theorem::Embed,
                e,
                params: format!("from=t3 t={t} case=3"),
                n,
                length: n,
                k_min: kfirst,
                k_max: kmax,
                dim_offset: 1,
                dist_offset: 0,
                exact_distance: true,
            });
        }
    }
    rows
}

fn t5_rows(ctx: &FieldCtx, e: u32) -> Vec<ParamRow> {
    if ctx.p() != 2 || !two_e_divides_h(ctx, e) {
        return Vec::new();
    }
    let pe = 1u64 << e;
    let mut rows = Vec::new();
    for (variant, name) in [(T5Variant::U1, "U1"), (T5Variant::U2, "U2")] {
        let size = eval_sets_t5(ctx, e, variant).map(|s| s.elements.len()).unwrap_or(0) as u64;
        for n in 1..=size {
            let kmax = (2 * n + pe + 1) / (pe + 1);
            if kmax >= 3 {
                rows.push(ParamRow {
                    theorem: variant.theorem(),
                    e,
                    params: format!("variant={name}"),
                    n,
                    length: 2 * n,
                    k_min: 3,
                    k_max: kmax,
                    dim_offset: -1,
                    dist_offset: 1,
                    exact_distance: false,
                });
            }
        }
    }
    rows
}

fn t6_rows(ctx: &FieldCtx, e: u32) -> Vec<ParamRow> {
    let q = ctx.q() as u64;
    if ctx.p() != 2 || !ctx.h().is_multiple_of(2) || q < 4 {
        return Vec::new();
    }
    let r = sqrt_q(ctx).expect("h even");
    let pe = 1u64 << e;
    divisors(q - 1)
        .into_iter()
        .map(|d| d + 1)
        .filter(|&n| n <= q)
        .filter_map(|n| {
            let kmax = (2 * n + pe + r - 1) / (pe + 1);
            (kmax > r).then(|| ParamRow {
                theorem: Theorem::T6,
                e,
                params: "curve=hyper-elliptic".into(),
                n,
                length: 2 * n,
                k_min: r + 1,
                k_max: kmax,
                dim_offset: -(r as i64 / 2),
                dist_offset: 1,
                exact_distance: false,
            })
        })
        .collect()
}

fn t7_rows(ctx: &FieldCtx, e: u32) -> Vec<ParamRow> {
    let (p, h, q) = (ctx.p() as u64, ctx.h(), ctx.q() as u64);
    if p % 2 == 0 || e == 0 || h % (2 * e) != 0 {
        return Vec::new();
    }
    let r = sqrt_q(ctx).expect("h even");
    let pe = p.pow(e);
    let qm1 = q - 1;
    let kmin = 1 + q - r;
    let kmax_of = |n: u64| (r * n + pe + q - r - 1) / (pe + 1);
    // (case, n) -> first parameter string in enumeration order
    let mut seen: BTreeSet<(u32, u64)> = BTreeSet::new();
    let mut found: Vec<(u32, u64, String)> = Vec::new();
    let mut push = |case: u32, n: u64, params: String| {
        if kmax_of(n) >= kmin && seen.insert((case, n)) {
            found.push((case, n, params));
        }
    };
    for a in (1..=e).filter(|a| e.is_multiple_of(*a)) {
        for w in 1..h / a {
            for t in 1..=p.pow(a) {
                push(1, t * p.pow(a * w), format!("case=1 a={a} w={w} t={t}"));
            }
        }
    }
    for t in 1..=pe {
        push(2, t * p.pow(h - e), format!("case=2 t={t}"));
    }
    let nb = qm1 / (pe + 1);
    if nb % (pe * pe - 1) == 0 {
        for t in 1..=pe {
            push(3, (t + 1) * nb + 1, format!("case=3 t={t}"));
        }
    }
    for zero in [0, 1] {
        for t in 1..pe {
            push(4, t * (qm1 / (pe - 1)) + zero, format!("case=4 t={t} a={zero}"));
        }
    }
    let divs = divisors(qm1);
    for zero in [0, 1] {
        for &x2 in &divs {
            for &x1 in &divs {
                let lcm = x1 / gcd(x1, x2) * x2;
                if !lcm.is_multiple_of(qm1) || (x1 * (pe - 1)) % x2 != 0 {
                    continue;
                }
                for rr in 1..=qm1 / x1 {
                    push(
                        5,
                        rr * (qm1 / x2) + zero,
                        format!("case=5 x1={x1} x2={x2} r={rr} a={zero}"),
                    );
                }
            }
        }
    }
    let y = qm1 / (pe - 1);
    for zero in [0, 1] {
        for &m in &divs {
            let m2 = gcd(m, y);
            let m1 = m / m2;
            if (pe - 1) % m1 != 0 {
                continue;
            }
            for rr in 1..=(pe - 1) / m1 {
                push(6, rr * m + zero, format!("case=6 m={m} r={rr} a={zero}"));
            }
        }
    }
    found.sort_by_key(|&(case, n, _)| (case, n));
    found
        .into_iter()
        .map(|(_, n, params)| ParamRow {
            theorem: Theorem::T7,
            e,
            params,
            n,
            length: r * n,
            k_min: kmin,
            k_max: kmax_of(n),
            dim_offset: -(((q - r) / 2) as i64),
            dist_offset: 1,
            exact_distance: false,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn hyper_elliptic_table() {
        let ctx = make_field(2, 8).unwrap();
        let rows = search_params(&ctx, 1, TheoremFilter::T6);
        let got: Vec<(u64, u64, u64)> = rows.iter().map(|r| (r.length, r.k_min, r.k_max)).collect();
        assert_eq!(got, vec![(36, 17, 17), (104, 17, 40), (172, 17, 63), (512, 17, 176)]);
        assert_eq!(rows[0].code_string(), "[36,9,>=20]");
        assert_eq!(rows[1].code_string(), "[104,k-8,>=105-k]");
        let rows = search_params(&ctx, 2, TheoremFilter::T6);
        let got: Vec<(u64, u64, u64)> = rows.iter().map(|r| (r.length, r.k_min, r.k_max)).collect();
        assert_eq!(got, vec![(104, 17, 24), (172, 17, 38), (512, 17, 106)]);
    }

    #[test]
    fn line_table() {
        let ctx = make_field(3, 8).unwrap();
        let rows = search_params(&ctx, 1, TheoremFilter::T3);
        let got: Vec<(u64, u64)> = rows.iter().map(|r| (r.n, r.k_max)).collect();
        assert_eq!(got, vec![(1641, 410), (3281, 820), (4921, 1230), (6561, 1640)]);
        let emb = search_params(&ctx, 1, TheoremFilter::Embed);
        let c1: Vec<String> = emb
            .iter()
            .filter(|r| r.params.ends_with("case=1"))
            .map(|r| r.code_string())
            .collect();
        assert_eq!(
            c1,
            vec![
                "[1642,411,1232]",
                "[3282,821,2462]",
                "[4922,1231,3692]",
                "[6562,1641,4922]"
            ]
        );
        assert!(search_params(&make_field(3, 2).unwrap(), 1, TheoremFilter::T3).is_empty());
        assert!(search_params(&make_field(2, 2).unwrap(), 1, TheoremFilter::T5).is_empty());
    }

    #[test]
    fn hermitian_rows_at_3_8() {
        let ctx = make_field(3, 8).unwrap();
        let rows = search_params(&ctx, 1, TheoremFilter::T7);
        let case2: Vec<(u64, u64, u64)> = rows
            .iter()
            .filter(|r| r.params.starts_with("case=2"))
            .map(|r| (r.length, r.k_min, r.k_max))
            .collect();
        assert_eq!(
            case2,
            vec![(177147, 6481, 45907), (354294, 6481, 90194), (531441, 6481, 134480)]
        );
        let rows = search_params(&ctx, 2, TheoremFilter::T7);
        let case2: Vec<u64> = rows
            .iter()
            .filter(|r| r.params.starts_with("case=2"))
            .map(|r| r.k_max)
            .collect();
        assert_eq!(
            case2,
            vec![6553, 12458, 18363, 24268, 30173, 36078, 41983, 47888, 53792]
        );
    }
}
