//! Inner loops for Gram products and Gaussian elimination.
//!
//! Matrices enter these kernels as discrete logarithms, with zero mapped to
//! `2(q-1)`. A product of two entries is then a single lookup at the sum of
//! their logs. In odd characteristic the looked-up word holds the base-p
//! digits of the product in separate integer lanes, so a running sum is a
//! plain integer addition; lanes are reduced modulo `p` before they can
//! overflow. In characteristic two the word is the element encoding and the
//! sum is XOR.

use crate::gf::{Fe, FieldCtx, LOG_ZERO};

/// Largest field order for which a spread table is materialised.
const SPREAD_CAP: u32 = 1 << 20;

pub(crate) trait Arith {
    type W: Copy;
    fn zero(&self) -> Self::W;
    fn lookup(&self, idx: usize) -> Self::W;
    fn add(&self, a: Self::W, b: Self::W) -> Self::W;
    /// Number of additions an accumulator may absorb between reductions.
    fn period(&self) -> usize;
    fn reduce(&self, a: Self::W) -> Self::W;
    /// Canonical encoding of a (not necessarily reduced) word.
    fn value(&self, a: Self::W) -> u32;
    fn pack(&self, v: u32) -> Self::W;
}

pub(crate) struct XorArith {
    table: Vec<u32>,
}

impl Arith for XorArith {
    type W = u32;
    #[inline(always)]
    fn zero(&self) -> u32 {
        0
    }
    #[inline(always)]
    fn lookup(&self, idx: usize) -> u32 {
        self.table[idx]
    }
    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }
    fn period(&self) -> usize {
        usize::MAX
    }
    #[inline(always)]
    fn reduce(&self, a: u32) -> u32 {
        a
    }
    #[inline(always)]
    fn value(&self, a: u32) -> u32 {
        a
    }
    #[inline(always)]
    fn pack(&self, v: u32) -> u32 {
        v
    }
}

pub(crate) trait LaneWord: Copy {
    const BITS: u32;
    const ZERO: Self;
    fn lane(self, shift: u32, mask: u64) -> u64;
    fn wrapping_add(self, o: Self) -> Self;
    fn or_shifted(self, v: u64, shift: u32) -> Self;
}

impl LaneWord for u64 {
    const BITS: u32 = 64;
    const ZERO: u64 = 0;
    #[inline(always)]
    fn lane(self, shift: u32, mask: u64) -> u64 {
        (self >> shift) & mask
    }
    #[inline(always)]
    fn wrapping_add(self, o: Self) -> Self {
        u64::wrapping_add(self, o)
    }
    #[inline(always)]
    fn or_shifted(self, v: u64, shift: u32) -> Self {
        self | (v << shift)
    }
}

impl LaneWord for u128 {
    const BITS: u32 = 128;
    const ZERO: u128 = 0;
    #[inline(always)]
    fn lane(self, shift: u32, mask: u64) -> u64 {
        ((self >> shift) as u64) & mask
    }
    #[inline(always)]
    fn wrapping_add(self, o: Self) -> Self {
        u128::wrapping_add(self, o)
    }
    #[inline(always)]
    fn or_shifted(self, v: u64, shift: u32) -> Self {
        self | ((v as u128) << shift)
    }
}

pub(crate) struct LaneArith<W> {
    table: Vec<W>,
    p: u64,
    h: u32,
    bits: u32,
    mask: u64,
    period: usize,
}

impl<W: LaneWord> LaneArith<W> {
    fn new(p: u64, h: u32) -> Option<Self> {
        let bits = (W::BITS / h).min(63);
        let mask = (1u64 << bits) - 1;
        // a reduced lane holds at most p-1; each addition adds at most p-1
        let period = (mask / (p - 1)).saturating_sub(1) as usize;
        if period < 8 {
            return None;
        }
        Some(LaneArith {
            table: Vec::new(),
            p,
            h,
            bits,
            mask,
            period,
        })
    }

    #[inline(always)]
    fn digits(&self, a: W) -> impl Iterator<Item = u64> + '_ {
        (0..self.h).map(move |i| a.lane(i * self.bits, self.mask) % self.p)
    }
}

impl<W: LaneWord> Arith for LaneArith<W> {
    type W = W;
    #[inline(always)]
    fn zero(&self) -> W {
        W::ZERO
    }
    #[inline(always)]
    fn lookup(&self, idx: usize) -> W {
        self.table[idx]
    }
    #[inline(always)]
    fn add(&self, a: W, b: W) -> W {
        a.wrapping_add(b)
    }
    fn period(&self) -> usize {
        self.period
    }
    fn reduce(&self, a: W) -> W {
        self.digits(a)
            .enumerate()
            .fold(W::ZERO, |acc, (i, d)| acc.or_shifted(d, i as u32 * self.bits))
    }
    fn value(&self, a: W) -> u32 {
        let mut v = 0u64;
        let mut scale = 1u64;
        for d in self.digits(a) {
            v += d * scale;
            scale *= self.p;
        }
        v as u32
    }
    fn pack(&self, mut v: u32) -> W {
        let mut w = W::ZERO;
        for i in 0..self.h {
            w = w.or_shifted(v as u64 % self.p, i * self.bits);
            v /= self.p as u32;
        }
        w
    }
}

/// Table-free fallback over the field's own arithmetic.
pub(crate) struct FieldArith<'a> {
    ctx: &'a FieldCtx,
    zero_log: usize,
}

impl<'a> FieldArith<'a> {
    pub(crate) fn new(ctx: &'a FieldCtx) -> Self {
        FieldArith {
            ctx,
            zero_log: zero_log(ctx) as usize,
        }
    }
}

impl Arith for FieldArith<'_> {
    type W = Fe;
    fn zero(&self) -> Fe {
        Fe::ZERO
    }
    fn lookup(&self, idx: usize) -> Fe {
        if idx >= self.zero_log {
            Fe::ZERO
        } else {
            self.ctx.exp(idx as i64)
        }
    }
    fn add(&self, a: Fe, b: Fe) -> Fe {
        self.ctx.add(a, b)
    }
    fn period(&self) -> usize {
        usize::MAX
    }
    fn reduce(&self, a: Fe) -> Fe {
        a
    }
    fn value(&self, a: Fe) -> u32 {
        a.0
    }
    fn pack(&self, v: u32) -> Fe {
        Fe(v)
    }
}

pub(crate) enum SpreadTable {
    Xor(XorArith),
    L64(LaneArith<u64>),
    L128(LaneArith<u128>),
}

/// Log used for the zero element inside the kernels.
#[inline]
pub(crate) fn zero_log(ctx: &FieldCtx) -> u32 {
    2 * (ctx.q() - 1)
}

impl SpreadTable {
    pub(crate) fn build(ctx: &FieldCtx) -> Option<SpreadTable> {
        let q = ctx.q();
        if !(3..=SPREAD_CAP).contains(&q) {
            return None;
        }
        let z = zero_log(ctx) as usize;
        let len = 2 * z + (q as usize - 1) / 2 + 1;
        let exp = ctx.exp_table();
        let entry = |i: usize| if i < z { exp[i] } else { 0 };
        let (p, h) = (ctx.p() as u64, ctx.h());
        if p == 2 {
            return Some(SpreadTable::Xor(XorArith {
                table: (0..len).map(entry).collect(),
            }));
        }
        if let Some(mut a) = LaneArith::<u64>::new(p, h) {
            a.table = (0..len).map(|i| a.pack(entry(i))).collect();
            return Some(SpreadTable::L64(a));
        }
        let mut a = LaneArith::<u128>::new(p, h)?;
        a.table = (0..len).map(|i| a.pack(entry(i))).collect();
        Some(SpreadTable::L128(a))
    }
}

/// Runs `$body` with `$a` bound to the fastest available arithmetic for `$ctx`.
macro_rules! with_arith {
    ($ctx:expr, $a:ident => $body:expr) => {{
        let ctx: &$crate::gf::FieldCtx = $ctx;
        match ctx.spread_table() {
            Some($crate::kernels::SpreadTable::Xor($a)) => $body,
            Some($crate::kernels::SpreadTable::L64($a)) => $body,
            Some($crate::kernels::SpreadTable::L128($a)) => $body,
            None => {
                let $a = &$crate::kernels::FieldArith::new(ctx);
                $body
            }
        }
    }};
}
pub(crate) use with_arith;

/// Kernel logs of a row-major matrix, optionally raised entrywise to `p^e`.
pub(crate) fn to_logs(ctx: &FieldCtx, data: &[Fe], frob: Option<u32>) -> Vec<u32> {
    let z = zero_log(ctx);
    let m = (ctx.q() - 1) as u64;
    let f = frob.map(|e| ctx.frobenius_exponent(e) as u64).unwrap_or(1);
    let log = ctx.log_table();
    data.iter()
        .map(|a| {
            let l = log[a.0 as usize];
            if l == LOG_ZERO {
                z
            } else {
                (l as u64 * f % m) as u32
            }
        })
        .collect()
}

const BLOCK: usize = 4;

/// First `(i, j)` with `sum_t L[i][t] * R[j][t] != 0`, scanning row blocks of
/// `L` against every row of `R`. Both operands are kernel logs with `cols`
/// columns.
pub(crate) fn gram_first_nonzero<A: Arith>(
    a: &A,
    lhs: &[u32],
    rhs: &[u32],
    cols: usize,
) -> Option<(usize, usize, u32)> {
    if cols == 0 {
        return None;
    }
    let lrows = lhs.len() / cols;
    let rrows = rhs.len() / cols;
    let period = a.period().max(1);
    let mut i0 = 0;
    while i0 < lrows {
        let bi = BLOCK.min(lrows - i0);
        let block = &lhs[i0 * cols..(i0 + bi) * cols];
        for j in 0..rrows {
            let rrow = &rhs[j * cols..(j + 1) * cols];
            let mut acc = [a.zero(); BLOCK];
            let mut start = 0;
            while start < cols {
                let end = cols.min(start.saturating_add(period));
                if bi == BLOCK {
                    let r0 = &block[start..end];
                    let r1 = &block[cols + start..cols + end];
                    let r2 = &block[2 * cols + start..2 * cols + end];
                    let r3 = &block[3 * cols + start..3 * cols + end];
                    let rr = &rrow[start..end];
                    for t in 0..rr.len() {
                        let lb = rr[t] as usize;
                        acc[0] = a.add(acc[0], a.lookup(r0[t] as usize + lb));
                        acc[1] = a.add(acc[1], a.lookup(r1[t] as usize + lb));
                        acc[2] = a.add(acc[2], a.lookup(r2[t] as usize + lb));
                        acc[3] = a.add(acc[3], a.lookup(r3[t] as usize + lb));
                    }
                } else {
                    for r in 0..bi {
                        let lrow = &block[r * cols + start..r * cols + end];
                        for (x, y) in lrow.iter().zip(&rrow[start..end]) {
                            acc[r] = a.add(acc[r], a.lookup(*x as usize + *y as usize));
                        }
                    }
                }
                for v in acc.iter_mut().take(bi) {
                    *v = a.reduce(*v);
                }
                start = end;
            }
            for (r, v) in acc.iter().take(bi).enumerate() {
                let val = a.value(*v);
                if val != 0 {
                    return Some((i0 + r, j, val));
                }
            }
        }
        i0 += bi;
    }
    None
}

/// Full product `L * R^T` on kernel logs, as canonical encodings.
pub(crate) fn gram_full<A: Arith>(a: &A, lhs: &[u32], rhs: &[u32], cols: usize) -> Vec<u32> {
    let lrows = lhs.len().checked_div(cols).unwrap_or(0);
    let rrows = rhs.len().checked_div(cols).unwrap_or(0);
    let period = a.period().max(1);
    let mut out = vec![0u32; lrows * rrows];
    for i in 0..lrows {
        let lrow = &lhs[i * cols..(i + 1) * cols];
        for j in 0..rrows {
            let rrow = &rhs[j * cols..(j + 1) * cols];
            let mut acc = a.zero();
            for (cx, cy) in lrow.chunks(period).zip(rrow.chunks(period)) {
                for (x, y) in cx.iter().zip(cy) {
                    acc = a.add(acc, a.lookup(*x as usize + *y as usize));
                }
                acc = a.reduce(acc);
            }
            out[i * rrows + j] = a.value(acc);
        }
    }
    out
}

/// Outcome of forward elimination.
pub(crate) struct Echelon {
    pub rank: usize,
    /// Determinant when the input was square.
    pub det: Option<Fe>,
}

/// Row-echelon reduction of a `rows x cols` matrix given as encodings.
pub(crate) fn eliminate<A: Arith>(a: &A, ctx: &FieldCtx, data: &[u32], rows: usize, cols: usize) -> Echelon {
    let qm1 = ctx.q() - 1;
    let half = if ctx.p() == 2 { 0 } else { qm1 / 2 };
    let z = zero_log(ctx);
    let log = ctx.log_table();
    let mut m: Vec<A::W> = data.iter().map(|&v| a.pack(v)).collect();
    let period = a.period();
    let mut since_reduce = 0usize;
    let mut rank = 0usize;
    let mut swaps = 0usize;
    let mut det_log: u64 = 0;
    let mut plog = vec![z; cols];
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let mut piv = None;
        for r in rank..rows {
            let v = a.value(m[r * cols + c]);
            if v != 0 {
                piv = Some((r, v));
                break;
            }
        }
        let Some((pr, pv)) = piv else { continue };
        if pr != rank {
            for j in c..cols {
                m.swap(pr * cols + j, rank * cols + j);
            }
            swaps += 1;
        }
        let lp = log[pv as usize];
        det_log += lp as u64;
        for j in c + 1..cols {
            let v = a.value(m[rank * cols + j]);
            plog[j] = if v == 0 { z } else { log[v as usize] };
        }
        if since_reduce >= period {
            for w in m[(rank + 1) * cols..].iter_mut() {
                *w = a.reduce(*w);
            }
            since_reduce = 0;
        }
        since_reduce += 1;
        let tail = &mut m[(rank + 1) * cols..];
        for row in tail.chunks_mut(cols) {
            let v = a.value(row[c]);
            if v == 0 {
                continue;
            }
            // factor -v / pivot as a log
            let lf = ((log[v as usize] + qm1 - lp + half) % qm1) as usize;
            row[c] = a.zero();
            for j in c + 1..cols {
                row[j] = a.add(row[j], a.lookup(lf + plog[j] as usize));
            }
        }
        rank += 1;
    }
    let det = if rows == cols {
        if rank < rows {
            Some(Fe::ZERO)
        } else {
            let d = ctx.exp((det_log % qm1 as u64) as i64);
            Some(if swaps % 2 == 1 { ctx.neg(d) } else { d })
        }
    } else {
        None
    };
    Echelon { rank, det }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_gram(ctx: &FieldCtx, l: &[Fe], r: &[Fe], cols: usize) -> Vec<u32> {
        let (lr, rr) = (l.len() / cols, r.len() / cols);
        let mut out = vec![];
        for i in 0..lr {
            for j in 0..rr {
                let mut s = Fe::ZERO;
                for t in 0..cols {
                    s = ctx.add(s, ctx.mul(l[i * cols + t], r[j * cols + t]));
                }
                out.push(s.0);
            }
        }
        out
    }

    #[test]
    fn gram_matches_naive_across_word_types() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, h) in [(2u64, 4u32), (3, 2), (3, 8), (5, 3), (7, 1), (3, 13)] {
            let ctx = make_field(p, h).unwrap();
            let cols = 300;
            let gen = |rng: &mut ChaCha8Rng, n: usize| -> Vec<Fe> {
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.2) {
                            Fe::ZERO
                        } else {
                            Fe(rng.gen_range(0..ctx.q()))
                        }
                    })
                    .collect()
            };
            let l = gen(&mut rng, 6 * cols);
            let r = gen(&mut rng, 3 * cols);
            let expect = naive_gram(&ctx, &l, &r, cols);
            let (ll, rl) = (to_logs(&ctx, &l, None), to_logs(&ctx, &r, None));
            let got = with_arith!(&ctx, a => gram_full(a, &ll, &rl, cols));
            assert_eq!(got, expect, "p={p} h={h}");
            let fallback = gram_full(&FieldArith::new(&ctx), &ll, &rl, cols);
            assert_eq!(fallback, expect);
            let first = with_arith!(&ctx, a => gram_first_nonzero(a, &ll, &rl, cols));
            let pos = expect.iter().position(|&v| v != 0);
            match (first, pos) {
                (None, None) => {}
                (Some((i, j, v)), Some(_)) => assert_eq!(expect[i * 3 + j], v),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        fn cofactor(ctx: &FieldCtx, m: &[Fe], k: usize) -> Fe {
            if k == 1 {
                return m[0];
            }
            let mut s = Fe::ZERO;
            for c in 0..k {
                let minor: Vec<Fe> = (1..k)
                    .flat_map(|r| (0..k).filter(move |&j| j != c).map(move |j| (r, j)))
                    .map(|(r, j)| m[r * k + j])
                    .collect();
                let t = ctx.mul(m[c], cofactor(ctx, &minor, k - 1));
                s = if c % 2 == 0 { ctx.add(s, t) } else { ctx.sub(s, t) };
            }
            s
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, h) in [(2u64, 3u32), (3, 2), (5, 1), (3, 4)] {
            let ctx = make_field(p, h).unwrap();
            for k in 1..=5 {
                for _ in 0..20 {
                    let m: Vec<Fe> = (0..k * k)
                        .map(|_| {
                            if rng.gen_bool(0.3) {
                                Fe::ZERO
                            } else {
                                Fe(rng.gen_range(0..ctx.q()))
                            }
                        })
                        .collect();
                    let raw: Vec<u32> = m.iter().map(|x| x.0).collect();
                    let ech = with_arith!(&ctx, a => eliminate(a, &ctx, &raw, k, k));
                    assert_eq!(ech.det, Some(cofactor(&ctx, &m, k)));
                }
            }
        }
    }
}
