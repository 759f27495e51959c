//! Table-backed arithmetic in GF(p^h).
//!
//! Elements are stored in their canonical encoding: the polynomial-basis
//! coordinates `(c_0, ..., c_{h-1})` packed little-endian in base `p`, so
//! the prime subfield occupies the values `0..p`. Multiplication goes through
//! exp/log tables over the primitive element `w` (the class of `x` modulo the
//! chosen modulus) and addition in odd characteristic through Zech
//! logarithms. In characteristic two addition is XOR of the encodings.

mod poly;

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::kernels::SpreadTable;

/// Largest field order backed by exp/log tables.
pub const Q_CAP: u64 = 1 << 24;

/// Log-table sentinel for the zero element.
pub const LOG_ZERO: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{h} exceeds the table cap 2^24")]
    TooLarge { p: u64, h: u32 },
    #[error("operation undefined for the zero element")]
    ZeroElement,
    #[error("{0} is not a (p^e+1)-th power in this field")]
    NotPowerResidue(u32),
    #[error("GF(p^{e}) is not a subfield of GF(p^{h})")]
    NotSubfield { e: u32, h: u32 },
}

/// A field element in canonical integer encoding.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The finite field GF(p^h) together with its arithmetic tables.
///
/// Immutable after construction; share it behind an `Arc`.
pub struct FieldCtx {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `exp[i] = w^i`, stored twice over so that `exp[a + b]` needs no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[d] = log(1 + w^d)`, `LOG_ZERO` when `1 + w^d = 0`.
    zech: Vec<u32>,
    /// `p^i mod (q - 1)` for `0 <= i < h`.
    frob_exp: Vec<u32>,
    spread: OnceLock<Option<SpreadTable>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Builds GF(p^h) over the lexicographically smallest monic primitive
/// modulus, comparing coefficients from `c_0` upward.
///
/// Primitive polynomials exist in every degree, so the scan always ends at a
/// modulus whose root `x` generates the multiplicative group.
pub fn make_field(p: u64, h: u32) -> Result<FieldCtx, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if h == 0 {
        return Err(GfError::ZeroDegree);
    }
    let q = p
        .checked_pow(h)
        .filter(|&q| q <= Q_CAP)
        .ok_or(GfError::TooLarge { p, h })?;
    let modulus = poly::smallest_primitive_modulus(p, h as usize);
    Ok(FieldCtx::from_modulus(p as u32, h, q as u32, modulus))
}

impl FieldCtx {
    fn from_modulus(p: u32, h: u32, q: u32, modulus: Vec<u32>) -> Self {
        let qm1 = (q - 1) as usize;
        let hs = h as usize;
        let mut exp = vec![0u32; 2 * qm1];
        let mut log = vec![LOG_ZERO; q as usize];
        let mut digits = vec![0u32; hs];
        digits[0] = 1;
        let mut pow_p = vec![1u32; hs];
        for i in 1..hs {
            pow_p[i] = pow_p[i - 1] * p;
        }
        for i in 0..qm1 {
            let v: u32 = digits.iter().zip(&pow_p).map(|(d, w)| d * w).sum();
            exp[i] = v;
            exp[i + qm1] = v;
            debug_assert_eq!(log[v as usize], LOG_ZERO, "modulus is not primitive");
            log[v as usize] = i as u32;
            // multiply by x and reduce with x^h = -(c_0 + ... + c_{h-1} x^{h-1})
            let top = digits[hs - 1];
            for j in (1..hs).rev() {
                digits[j] = digits[j - 1];
            }
            digits[0] = 0;
            if top != 0 {
                for j in 0..hs {
                    let sub = (top as u64 * modulus[j] as u64 % p as u64) as u32;
                    digits[j] = (digits[j] + p - sub) % p;
                }
            }
        }
        let mut zech = vec![LOG_ZERO; qm1.max(1)];
        if qm1 > 0 {
            for d in 0..qm1 {
                let v = exp[d];
                let c0 = v % p;
                let s = v - c0 + (c0 + 1) % p;
                zech[d] = log[s as usize];
            }
        }
        let mut frob_exp = Vec::with_capacity(hs);
        let mut acc = 1u64 % qm1.max(1) as u64;
        for _ in 0..hs {
            frob_exp.push(acc as u32);
            acc = acc * p as u64 % qm1.max(1) as u64;
        }
        FieldCtx {
            p,
            h,
            q,
            modulus,
            exp,
            log,
            zech,
            frob_exp,
            spread: OnceLock::new(),
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.h
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients `c_0, ..., c_{h-1}, 1` of the monic modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element `w` (the class of `x`).
    pub fn primitive(&self) -> Fe {
        Fe(self.exp[1 % self.exp.len().max(1)])
    }

    #[inline]
    pub fn order_minus_one(&self) -> u32 {
        self.q - 1
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log
    }

    pub fn zech_table(&self) -> &[u32] {
        &self.zech
    }

    pub(crate) fn spread_table(&self) -> Option<&SpreadTable> {
        self.spread.get_or_init(|| SpreadTable::build(self)).as_ref()
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> {
        (1..self.q).map(Fe)
    }

    #[inline]
    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.q
    }

    /// `w^i` for any integer exponent.
    #[inline]
    pub fn exp(&self, i: i64) -> Fe {
        let m = (self.q - 1) as i64;
        Fe(self.exp[i.rem_euclid(m) as usize])
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + self.q - 1 - la };
        let z = self.zech[d as usize];
        if z == LOG_ZERO {
            Fe::ZERO
        } else {
            Fe(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        let l = self.log[a.0 as usize] + (self.q - 1) / 2;
        Fe(self.exp[l as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroElement);
        }
        let l = self.log[a.0 as usize];
        Ok(Fe(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n`; `0^0 = 1`.
    pub fn pow(&self, a: Fe, n: u64) -> Fe {
        if n == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let m = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64 * (n % m) % m;
        Fe(self.exp[l as usize])
    }

    /// Square-and-multiply exponentiation that never touches the log table;
    /// used as an independent route in tests.
    pub fn pow_by_squaring(&self, a: Fe, mut n: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// `p^e mod (q - 1)` with `e` reduced modulo `h`.
    #[inline]
    pub fn frobenius_exponent(&self, e: u32) -> u32 {
        self.frob_exp[(e % self.h) as usize]
    }

    /// `a^{p^e}`.
    #[inline]
    pub fn frobenius(&self, a: Fe, e: u32) -> Fe {
        if a.0 == 0 {
            return a;
        }
        let m = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64 * self.frobenius_exponent(e) as u64 % m;
        Fe(self.exp[l as usize])
    }

    /// Absolute trace to the prime field.
    pub fn trace_to_prime(&self, a: Fe) -> Fe {
        (0..self.h).fold(Fe::ZERO, |acc, i| self.add(acc, self.frobenius(a, i)))
    }

    /// Relative trace to GF(p^e); requires `e | h`.
    pub fn relative_trace(&self, a: Fe, e: u32) -> Result<Fe, GfError> {
        self.check_subfield(e)?;
        Ok((0..self.h / e).fold(Fe::ZERO, |acc, i| self.add(acc, self.frobenius(a, e * i))))
    }

    /// Relative norm `a^{(q-1)/(p^e-1)}` into GF(p^e).
    pub fn relative_norm(&self, a: Fe, e: u32) -> Result<Fe, GfError> {
        self.check_subfield(e)?;
        if a.0 == 0 {
            return Err(GfError::ZeroElement);
        }
        let pe = (self.p as u64).pow(e);
        Ok(self.pow(a, (self.q as u64 - 1) / (pe - 1)))
    }

    fn check_subfield(&self, e: u32) -> Result<(), GfError> {
        if e == 0 || !self.h.is_multiple_of(e) {
            return Err(GfError::NotSubfield { e, h: self.h });
        }
        Ok(())
    }

    /// Elements of the subfield GF(p^d), ascending by encoding.
    pub fn subfield(&self, d: u32) -> Result<Vec<Fe>, GfError> {
        self.check_subfield(d)?;
        let pd = (self.p as u64).pow(d);
        let step = (self.q as u64 - 1) / (pd - 1);
        let mut out: Vec<Fe> = std::iter::once(Fe::ZERO)
            .chain((0..pd - 1).map(|j| self.exp((j * step) as i64)))
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn dlog(&self, a: Fe) -> Result<u32, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroElement);
        }
        Ok(self.log[a.0 as usize])
    }

    /// `gcd(p^e + 1, q - 1)`, the index of the (p^e+1)-th powers in GF(q)^*.
    pub fn residue_index(&self, e: u32) -> u32 {
        let pe1 = (self.p as u64).pow(e % self.h.max(1)) + 1;
        // p^e + 1 reduced modulo q - 1 leaves the gcd unchanged
        gcd(pe1 % (self.q as u64 - 1).max(1), self.q as u64 - 1) as u32
    }

    /// Whether `a` lies in `E = { x^{p^e+1} : x != 0 }`.
    pub fn is_power_residue(&self, a: Fe, e: u32) -> Result<bool, GfError> {
        let l = self.dlog(a)?;
        Ok(l % self.residue_index(e) == 0)
    }

    /// The `(p^e+1)`-th root of `a` with the smallest discrete logarithm.
    pub fn root_pe1(&self, a: Fe, e: u32) -> Result<Fe, GfError> {
        let l = self.dlog(a)? as u64;
        let m = self.q as u64 - 1;
        let g = self.residue_index(e) as u64;
        if !l.is_multiple_of(g) {
            return Err(GfError::NotPowerResidue(a.0));
        }
        let pe1 = ((self.p as u64).pow(e % self.h) + 1) % m;
        let m_red = m / g;
        if m_red == 1 {
            return Ok(Fe::ONE);
        }
        let inv = mod_inverse((pe1 / g) % m_red, m_red).expect("coprime after dividing by the gcd");
        let s = (l / g) % m_red * inv % m_red;
        Ok(self.exp(s as i64))
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(f: &FieldCtx, a: Fe) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != Fe::ONE {
            x = f.mul(x, a);
            k += 1;
        }
        k
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.q(), 4);
    }

    #[test]
    fn gf9_primitive_has_order_8() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.q(), 9);
        assert_eq!(brute_order(&f, f.primitive()), 8);
        // lexicographic scan from c_0: x^2+1 is irreducible but not primitive
        assert_eq!(f.modulus(), &[2, 1, 1]);
    }

    #[test]
    fn gf3_8_table_size() {
        let f = make_field(3, 8).unwrap();
        assert_eq!(f.q(), 6561);
        assert_eq!(f.exp_table().len() / 2, 6560);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 2).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(make_field(2, 0).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(make_field(2, 25), Err(GfError::TooLarge { .. })));
        assert!(matches!(make_field(3, 16), Err(GfError::TooLarge { .. })));
    }

    #[test]
    fn prime_field_modulus() {
        let f = make_field(7, 1).unwrap();
        // x + c_0 with root -c_0: c_0 = 1 gives 6 (order 2), c_0 = 2 gives 5 (order 6)
        assert_eq!(f.modulus(), &[2, 1]);
        assert_eq!(f.primitive(), Fe(5));
        assert_eq!(brute_order(&f, f.primitive()), 6);
    }

    #[test]
    fn frobenius_examples() {
        let f4 = make_field(2, 2).unwrap();
        let w = f4.primitive();
        assert_eq!(f4.frobenius(w, 1), f4.mul(w, w));
        assert_eq!(f4.frobenius(w, 1), f4.add(w, Fe::ONE));
        let f9 = make_field(3, 2).unwrap();
        for a in f9.elements() {
            assert_eq!(f9.frobenius(a, 0), a);
            assert_eq!(f9.frobenius(a, 2), a);
        }
    }

    #[test]
    fn trace_examples() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.trace_to_prime(Fe::ZERO), Fe::ZERO);
        assert_eq!(f4.trace_to_prime(f4.primitive()), Fe::ONE);
        let f16 = make_field(2, 4).unwrap();
        assert_eq!(f16.elements().filter(|&a| f16.trace_to_prime(a).is_zero()).count(), 8);
    }

    #[test]
    fn norm_examples() {
        let f9 = make_field(3, 2).unwrap();
        let w = f9.primitive();
        let n = f9.relative_norm(w, 1).unwrap();
        assert_eq!(n, f9.pow(w, 4));
        assert_eq!(n, f9.neg(Fe::ONE));
        assert_eq!(f9.relative_norm(Fe::ONE, 1).unwrap(), Fe::ONE);
        assert_eq!(f9.relative_norm(Fe::ZERO, 1), Err(GfError::ZeroElement));
        for target in [Fe::ONE, f9.neg(Fe::ONE)] {
            let fiber = f9
                .nonzero()
                .filter(|&a| f9.relative_norm(a, 1).unwrap() == target)
                .count();
            assert_eq!(fiber, 4);
        }
    }

    #[test]
    fn dlog_roundtrip_gf3_8() {
        let f = make_field(3, 8).unwrap();
        assert_eq!(f.dlog(Fe::ONE).unwrap(), 0);
        assert_eq!(f.dlog(f.primitive()).unwrap(), 1);
        assert_eq!(f.dlog(Fe::ZERO), Err(GfError::ZeroElement));
        for a in f.nonzero() {
            assert_eq!(f.exp(f.dlog(a).unwrap() as i64), a);
        }
    }

    #[test]
    fn power_residues_gf9() {
        let f = make_field(3, 2).unwrap();
        let w = f.primitive();
        let fourth: Vec<Fe> = {
            let mut v: Vec<Fe> = f.nonzero().map(|x| f.pow_by_squaring(x, 4)).collect();
            v.sort();
            v.dedup();
            v
        };
        let w4 = f.pow(w, 4);
        let mut expected = vec![Fe::ONE, w4];
        expected.sort();
        assert_eq!(fourth, expected);
        assert!(f.is_power_residue(w4, 1).unwrap());
        assert!(!f.is_power_residue(w, 1).unwrap());
        for e in 0..2 {
            assert!(f.is_power_residue(Fe::ONE, e).unwrap());
        }
        // GF(3)^* inside E since 2e | h
        assert!(f.is_power_residue(f.neg(Fe::ONE), 1).unwrap());
    }

    #[test]
    fn root_pe1_examples() {
        let f = make_field(3, 2).unwrap();
        let w = f.primitive();
        assert_eq!(f.root_pe1(Fe::ONE, 1).unwrap(), Fe::ONE);
        // beta^4 = w^4 has solutions w, w^3, w^5, w^7
        assert_eq!(f.root_pe1(f.pow(w, 4), 1).unwrap(), w);
        assert_eq!(f.root_pe1(w, 1), Err(GfError::NotPowerResidue(w.0)));
        assert_eq!(f.root_pe1(Fe::ZERO, 1), Err(GfError::ZeroElement));
    }

    #[test]
    fn root_pe1_is_smallest_log_root() {
        for (p, h) in [(2u64, 4u32), (3, 4), (5, 2), (2, 6)] {
            let f = make_field(p, h).unwrap();
            for e in 0..h {
                let pe1 = p.pow(e) + 1;
                for a in f.nonzero() {
                    let brute = (0..f.q() - 1)
                        .map(|s| f.exp(s as i64))
                        .find(|&b| f.pow_by_squaring(b, pe1) == a);
                    match f.root_pe1(a, e) {
                        Ok(b) => assert_eq!(Some(b), brute),
                        Err(_) => assert_eq!(brute, None),
                    }
                }
            }
        }
    }

    #[test]
    fn relative_trace_lands_in_subfield() {
        let f = make_field(3, 4).unwrap();
        let sub = f.subfield(2).unwrap();
        assert_eq!(sub.len(), 9);
        for a in f.elements() {
            assert!(sub.contains(&f.relative_trace(a, 2).unwrap()));
        }
        assert!(f.relative_trace(Fe::ONE, 3).is_err());
    }
}
