//! Dense polynomials over GF(p), coefficients stored low degree first.

use super::prime_factors;

type Poly = Vec<u64>;

fn trim(a: &mut Poly) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
}

fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm && !is_zero(&r) {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        if c != 0 {
            for i in 0..=dm {
                let sub = c * m[i] % p;
                r[dr - dm + i] = (r[dr - dm + i] + p - sub) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, m, p)
}

fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !is_zero(&y) {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test for a monic `f` of degree at least 1.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let h = f.len() - 1;
    let x: Poly = vec![0, 1];
    let mut xp = rem(&x, f, p);
    for _ in 1..=h / 2 {
        xp = pow_mod(&xp, p, f, p);
        let mut d = xp.clone();
        d.resize(d.len().max(2), 0);
        d[1] = (d[1] + p - 1) % p;
        trim(&mut d);
        let g = gcd(f, &d, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Whether the class of `x` generates the multiplicative group modulo an
/// irreducible monic `f`.
pub(crate) fn x_is_primitive(f: &[u64], p: u64) -> bool {
    let h = (f.len() - 1) as u32;
    let q1 = p.pow(h) - 1;
    let x: Poly = vec![0, 1];
    let one_of = |r: &Poly| r.len() == 1 && r[0] == 1;
    if !one_of(&pow_mod(&x, q1, f, p)) {
        return false;
    }
    prime_factors(q1)
        .into_iter()
        .all(|r| !one_of(&pow_mod(&x, q1 / r, f, p)))
}

/// The first monic degree-`h` primitive polynomial when candidates are
/// ordered by `(c_0, c_1, ..., c_{h-1})` lexicographically.
pub(crate) fn smallest_primitive_modulus(p: u64, h: usize) -> Vec<u32> {
    let mut coeffs = vec![0u64; h];
    loop {
        if coeffs[0] != 0 {
            let mut f = coeffs.clone();
            f.push(1);
            if is_irreducible(&f, p) && x_is_primitive(&f, p) {
                return f.into_iter().map(|c| c as u32).collect();
            }
        }
        // c_{h-1} is the least significant position
        let mut i = h;
        loop {
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            assert!(i > 0, "no primitive polynomial of degree {h} over GF({p})");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!x_is_primitive(&[1, 0, 1], 3));
        assert!(x_is_primitive(&[2, 1, 1], 3));
    }

    #[test]
    fn agrees_with_trial_division() {
        // all monic quartics over GF(2) and cubics over GF(3)
        for (p, h) in [(2u64, 4usize), (3, 3)] {
            let count = p.pow(h as u32);
            for code in 0..count {
                let mut f: Vec<u64> = (0..h).map(|i| code / p.pow(i as u32) % p).collect();
                f.push(1);
                let mut has_factor = false;
                for d in 1..=h / 2 {
                    for c2 in 0..p.pow(d as u32) {
                        let mut g: Vec<u64> = (0..d).map(|i| c2 / p.pow(i as u32) % p).collect();
                        g.push(1);
                        if is_zero(&rem(&f, &g, p)) {
                            has_factor = true;
                        }
                    }
                }
                assert_eq!(is_irreducible(&f, p), !has_factor, "{f:?}");
            }
        }
    }
}
