//! Invariant suites behind `gagc selftest`.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use clap::ValueEnum;
use gagc_core::codes::{
    galois_dual, galois_gram, galois_ip, grs_dual_multiplier, grs_encode, is_galois_so, GrsSpec, LinearCode,
};
use gagc_core::constructions::{
    construct_elliptic, construct_hyper_elliptic, construct_t3, construct_t7, Construction, ConstructionError,
    T5Variant, T7Case, T7Params, VerifyOptions,
};
use gagc_core::curves::{enumerate_points, rr_basis, sqrt_q, Family};
use gagc_core::gf::{make_field, Fe, FieldCtx};
use gagc_core::matrix::GfMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

/// Seed of every randomized suite.
pub const SELFTEST_SEED: u64 = 0x5E1F_7E57;

type SuiteResult = Result<String, String>;

struct Suite {
    name: &'static str,
    run: fn(Level, &mut ChaCha8Rng) -> SuiteResult,
}

const SUITES: &[Suite] = &[
    Suite {
        name: "frobenius_laws",
        run: frobenius_laws,
    },
    Suite {
        name: "trace_fibers",
        run: trace_fibers,
    },
    Suite {
        name: "residue_subfield",
        run: residue_subfield,
    },
    Suite {
        name: "artin_schreier",
        run: artin_schreier,
    },
    Suite {
        name: "subfield_traces",
        run: subfield_traces,
    },
    Suite {
        name: "coset_differences",
        run: coset_differences,
    },
    Suite {
        name: "galois_duals",
        run: galois_duals,
    },
    Suite {
        name: "grs_dual_multiplier",
        run: grs_dual,
    },
    Suite {
        name: "riemann_roch",
        run: riemann_roch,
    },
    Suite {
        name: "point_counts",
        run: point_counts,
    },
    Suite {
        name: "nesting",
        run: nesting,
    },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub millis: u128,
    pub detail: String,
}

pub fn run_suites(level: Level) -> Vec<SuiteOutcome> {
    SUITES
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(SELFTEST_SEED.wrapping_add(i as u64));
            let start = Instant::now();
            let res = (s.run)(level, &mut rng);
            let millis = start.elapsed().as_millis();
            let (passed, detail) = match res {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            SuiteOutcome {
                name: s.name,
                passed,
                millis,
                detail,
            }
        })
        .collect()
}

pub fn run_selftest(level: Level, out: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let outcomes = run_suites(level);
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag} {:<20} {:>7} ms  {}", o.name, o.millis, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let _ = writeln!(
        out,
        "{} of {} suites passed in {:.1} s",
        outcomes.len() - failed,
        outcomes.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        crate::EXIT_PASS
    } else {
        crate::EXIT_FAIL
    }
}

/// All `(p, h)` with `p^h <= max_q`.
fn fields_up_to(max_q: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in 2..=max_q {
        if !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            continue;
        }
        let mut h = 1;
        while p.pow(h) <= max_q {
            out.push((p, h));
            h += 1;
        }
    }
    out
}

fn field(p: u64, h: u32) -> Result<Arc<FieldCtx>, String> {
    make_field(p, h).map(Arc::new).map_err(|e| format!("GF({p}^{h}): {e}"))
}

fn random_fe(f: &FieldCtx, rng: &mut ChaCha8Rng) -> Fe {
    Fe(rng.gen_range(0..f.q()))
}

fn random_nonzero(f: &FieldCtx, rng: &mut ChaCha8Rng) -> Fe {
    Fe(rng.gen_range(1..f.q()))
}

fn frobenius_laws(level: Level, rng: &mut ChaCha8Rng) -> SuiteResult {
    let max_q = match level {
        Level::Quick => 81,
        Level::Full => 6561,
    };
    let mut checks = 0u64;
    for (p, h) in fields_up_to(max_q) {
        let f = field(p, h)?;
        let q = f.q() as u64;
        for a in f.elements() {
            if f.pow(a, q) != a {
                return Err(format!("GF({p}^{h}): a^q != a for a = {}", a.0));
            }
            checks += 1;
        }
        let pairs: Vec<(Fe, Fe)> = if q <= 81 {
            f.elements().flat_map(|a| f.elements().map(move |b| (a, b))).collect()
        } else {
            (0..10_000).map(|_| (random_fe(&f, rng), random_fe(&f, rng))).collect()
        };
        for e in 0..h {
            for &(a, b) in &pairs {
                let (fa, fb) = (f.frobenius(a, e), f.frobenius(b, e));
                if f.frobenius(f.add(a, b), e) != f.add(fa, fb) || f.frobenius(f.mul(a, b), e) != f.mul(fa, fb) {
                    return Err(format!("GF({p}^{h}) e={e}: not a homomorphism at ({}, {})", a.0, b.0));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} identities, q <= {max_q}"))
}

fn trace_fibers(_: Level, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut fields = 0;
    for (p, h) in fields_up_to(256) {
        let f = field(p, h)?;
        let mut counts = vec![0u64; p as usize];
        for a in f.elements() {
            let t = f.trace_to_prime(a);
            if t.0 as u64 >= p {
                return Err(format!("GF({p}^{h}): trace of {} is {} outside GF({p})", a.0, t.0));
            }
            counts[t.0 as usize] += 1;
        }
        let want = f.q() as u64 / p;
        if counts.iter().any(|&c| c != want) {
            return Err(format!("GF({p}^{h}): fiber sizes {counts:?}, expected {want} each"));
        }
        fields += 1;
    }
    Ok(format!("{fields} fields, q <= 256"))
}

/// `F_{p^e}^* ⊆ E` against `2e | h` for every `1 <= e <= h-1`. When `e` does
/// not divide `h`, `F_{p^e}` is not inside `F_q` and the inclusion is false.
fn residue_subfield(level: Level, _: &mut ChaCha8Rng) -> SuiteResult {
    let max_q = match level {
        Level::Quick => 81,
        Level::Full => 6561,
    };
    let mut cases = 0;
    let mut bad = Vec::new();
    for (p, h) in fields_up_to(max_q) {
        let f = field(p, h)?;
        for e in 1..h {
            let included = match f.subfield(e) {
                Ok(sub) => sub
                    .iter()
                    .filter(|x| !x.is_zero())
                    .all(|&x| f.is_power_residue(x, e).expect("nonzero")),
                Err(_) => false,
            };
            if included != (h % (2 * e) == 0) {
                bad.push(format!("(p={p},h={h},e={e}) inclusion={included}"));
            }
            cases += 1;
        }
    }
    if bad.is_empty() {
        Ok(format!("{cases} (p,h,e) triples, q <= {max_q}"))
    } else {
        Err(format!(
            "{} of {cases} triples contradict the biconditional: {}",
            bad.len(),
            bad.join(" ")
        ))
    }
}

/// `y^p - y = a` is solvable exactly when `Tr(a) = 0`, for every `q <= 256`.
fn artin_schreier(_: Level, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut fields = 0;
    for (p, h) in fields_up_to(256) {
        let f = field(p, h)?;
        let mut image = vec![false; f.q() as usize];
        for y in f.elements() {
            image[f.sub(f.pow(y, p), y).0 as usize] = true;
        }
        for a in f.elements() {
            let solvable = f.elements().any(|y| f.sub(f.pow(y, p), y) == a);
            if solvable != image[a.0 as usize] {
                return Err(format!("GF({p}^{h}): solution scans disagree at {}", a.0));
            }
            if solvable != f.trace_to_prime(a).is_zero() {
                return Err(format!("GF({p}^{h}): y^p - y = {} solvable = {solvable}", a.0));
            }
        }
        fields += 1;
    }
    Ok(format!("{fields} fields, q <= 256"))
}

/// Elements `a` of `GF(sqrt q)` have `Tr(a) = Tr(a^3 + a) = 0` over GF(2).
fn subfield_traces(_: Level, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut checked = 0;
    for h in [4, 6, 8] {
        let f = field(2, h)?;
        for a in f.subfield(h / 2).map_err(|e| e.to_string())? {
            let cube = f.add(f.pow(a, 3), a);
            if !f.trace_to_prime(a).is_zero() || !f.trace_to_prime(cube).is_zero() {
                return Err(format!("GF(2^{h}): nonzero trace at {}", a.0));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} subfield elements, q in {{16, 64, 256}}"))
}

/// Pairs at 3^8, e = 1, the smallest field here meeting `2e | h` and
/// `(p^{2e}-1) | (q-1)/(p^e+1)` for odd `p`.
fn coset_differences(level: Level, rng: &mut ChaCha8Rng) -> SuiteResult {
    let f = field(3, 8)?;
    let n = (f.q() as u64 - 1) / (f.p() as u64 + 1);
    let pairs = match level {
        Level::Quick => 10_000,
        Level::Full => 100_000,
    };
    let mut nonzero = 0u64;
    for _ in 0..pairs {
        let a = random_nonzero(&f, rng);
        let mut b = random_nonzero(&f, rng);
        while b == a {
            b = random_nonzero(&f, rng);
        }
        let d = f.sub(f.pow(a, n), f.pow(b, n));
        if d.is_zero() {
            continue;
        }
        if !f.is_power_residue(d, 1).expect("nonzero") {
            return Err(format!("a={} b={} gives {} outside E", a.0, b.0, d.0));
        }
        nonzero += 1;
    }
    Ok(format!("{pairs} random pairs at 3^8, {nonzero} nonzero differences"))
}

fn random_code(f: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> LinearCode {
    let n = rng.gen_range(2..=10);
    let k = rng.gen_range(1..n);
    let gen = GfMatrix::from_fn(f.clone(), k, n, |_, _| random_fe(f, rng));
    LinearCode::spanned_by(&gen)
}

/// Dual dimension, the three descriptions of the e-Galois dual, and the
/// agreement of the SO tests.
fn galois_duals(level: Level, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut fields = vec![(2, 2), (3, 2), (2, 4), (3, 4)];
    if level == Level::Full {
        fields.extend([(2, 8), (3, 8)]);
    }
    let mut codes = 0;
    for (p, h) in fields {
        let f = field(p, h)?;
        for _ in 0..100 {
            let c = random_code(&f, rng);
            let (n, k) = (c.n(), c.k());
            let gen = c.generator();
            let euclid = gen.null_space();
            for e in 0..h {
                let dual = galois_dual(&c, e);
                if dual.k() != n - k {
                    return Err(format!("GF({p}^{h}) e={e}: dual dimension {} for [{n},{k}]", dual.k()));
                }
                for x in gen.row_vecs() {
                    for y in dual.generator().row_vecs() {
                        if !galois_ip(&f, &x, &y, e).map_err(|e| e.to_string())?.is_zero() {
                            return Err(format!("GF({p}^{h}) e={e}: dual row not orthogonal"));
                        }
                    }
                }
                let conj = gen.frobenius_map(h - e).null_space();
                let conj_dual = euclid.frobenius_map(h - e);
                let same = |a: &GfMatrix, b: &GfMatrix| a.row_space_equal(b).map_err(|e| e.to_string());
                if !same(dual.generator(), &conj)? || !same(&conj, &conj_dual)? {
                    return Err(format!("GF({p}^{h}) e={e}: dual descriptions differ for [{n},{k}]"));
                }
                let so = is_galois_so(&c, e);
                let gram = galois_gram(&c, e).is_zero();
                let inside = gen.row_space_within(dual.generator()).map_err(|e| e.to_string())?;
                if so != gram || so != inside {
                    return Err(format!("GF({p}^{h}) e={e}: SO tests disagree ({so}, {gram}, {inside})"));
                }
            }
            codes += 1;
        }
    }
    Ok(format!("{codes} random codes, all e"))
}

/// `GRS_k(a, v)^⊥ = GRS_{n-k}(a, u/v)` against the null space, for every node
/// set of size at most 8 over GF(4) and GF(9).
fn grs_dual(_: Level, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut cases = 0;
    for (p, h) in [(2, 2), (3, 2)] {
        let f = field(p, h)?;
        let q = f.q();
        for mask in 1u32..(1 << q) {
            let alpha: Vec<Fe> = (0..q).filter(|i| mask >> i & 1 == 1).map(Fe).collect();
            let n = alpha.len();
            if !(2..=8).contains(&n) {
                continue;
            }
            let v: Vec<Fe> = (0..n).map(|_| random_nonzero(&f, rng)).collect();
            let u = grs_dual_multiplier(&f, &alpha).map_err(|e| e.to_string())?;
            let w: Vec<Fe> = u.iter().zip(&v).map(|(&a, &b)| f.div(a, b).expect("nonzero")).collect();
            for k in 1..n {
                let code = grs_encode(&f, &GrsSpec::new(alpha.clone(), v.clone(), k)).map_err(|e| e.to_string())?;
                let dual = grs_encode(&f, &GrsSpec::new(alpha.clone(), w.clone(), n - k)).map_err(|e| e.to_string())?;
                let oracle = code.generator().null_space();
                if !dual.generator().row_space_equal(&oracle).map_err(|e| e.to_string())? {
                    return Err(format!("GF({q}) nodes {:?} k={k}: dual multiplier mismatch", alpha));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (node set, k) cases"))
}

fn curve_fields(level: Level) -> Vec<(Family, u64, u32)> {
    let mut out = Vec::new();
    let max_q = match level {
        Level::Quick => 81,
        Level::Full => 6561,
    };
    for (p, h) in fields_up_to(max_q) {
        out.push((Family::Line, p, h));
        if h % 2 == 0 {
            out.push((Family::Hermitian, p, h));
            if p == 2 && p.pow(h) <= 256 {
                out.push((Family::HyperElliptic, p, h));
            }
        }
        if p == 2 && h % 2 == 0 && p.pow(h) <= 256 {
            out.push((Family::Elliptic { a: 1, b: 0, c: 0 }, p, h));
            out.push((Family::Elliptic { a: 1, b: 1, c: 0 }, p, h));
        }
    }
    out
}

fn riemann_roch(level: Level, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut checks = 0;
    for (family, p, h) in curve_fields(level) {
        let f = field(p, h)?;
        let model = enumerate_points(family, f).map_err(|e| format!("{family} over GF({p}^{h}): {e}"))?;
        let g = model.genus();
        let n = model.points().len() as u64;
        let hi = (4 * g + 10).min(n.saturating_sub(1));
        for m in (2 * g).saturating_sub(1)..=hi {
            let count = rr_basis(&model, m).len() as u64;
            if count != m + 1 - g {
                return Err(format!(
                    "{family} over GF({p}^{h}), m={m}: {count} monomials, expected {}",
                    m + 1 - g
                ));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} (curve, m) pairs"))
}

fn point_counts(level: Level, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut checks = 0;
    for (family, p, h) in curve_fields(level) {
        let f = field(p, h)?;
        let q = f.q() as u64;
        let expected = match family {
            Family::HyperElliptic => 2 * q + 1,
            Family::Hermitian => q * sqrt_q(&f).expect("h even") + 1,
            _ => continue,
        };
        let model = enumerate_points(family, f).map_err(|e| format!("{family} over GF({p}^{h}): {e}"))?;
        let got = model.rational_point_count() as u64;
        if got != expected {
            return Err(format!("{family} over GF({p}^{h}): {got} points, expected {expected}"));
        }
        checks += 1;
    }
    Ok(format!("{checks} curves"))
}

/// The code at `k` lies inside the code at `k + 1`.
fn nesting(level: Level, _: &mut ChaCha8Rng) -> SuiteResult {
    type Build = Box<dyn Fn(u64) -> Result<Construction, ConstructionError>>;
    let opts = |e: u32| VerifyOptions::new(e, SELFTEST_SEED);
    let big = field(3, 8)?;
    let gf9 = field(3, 2)?;
    let gf16 = field(2, 4)?;
    let mut families: Vec<(&str, std::ops::RangeInclusive<u64>, Build)> = vec![
        ("t3 GF(3^8) t=0", 1..=6, {
            let f = big.clone();
            Box::new(move |k| construct_t3(&f, 1, 0, k, &opts(1)))
        }),
        ("t5 GF(16) U2 n=5", 3..=4, {
            let f = gf16.clone();
            Box::new(move |k| construct_elliptic(&f, 1, T5Variant::U2, 5, k, &opts(1)))
        }),
        ("t6 GF(16) n=16", 5..=11, {
            let f = gf16.clone();
            Box::new(move |k| construct_hyper_elliptic(&f, 1, 16, k, &opts(1)))
        }),
        ("t7 GF(9) trace fibers t=3", 7..=8, {
            let f = gf9.clone();
            Box::new(move |k| {
                construct_t7(
                    &f,
                    T7Params {
                        e: 1,
                        case: T7Case::TraceFibers { t: 3 },
                    },
                    k,
                    &opts(1),
                )
            })
        }),
    ];
    if level == Level::Full {
        families.push((
            "t3 GF(3^8) t=1",
            1..=12,
            Box::new(move |k| construct_t3(&big, 1, 1, k, &opts(1))),
        ));
    }
    let mut pairs = 0;
    for (name, ks, build) in &families {
        let mut prev: Option<LinearCode> = None;
        for k in ks.clone() {
            let c = build(k).map_err(|e| format!("{name} k={k}: {e}"))?;
            if !c.report.passed() {
                return Err(format!("{name} k={k}: construction checks failed"));
            }
            if let Some(p) = &prev {
                let inside = p
                    .generator()
                    .row_space_within(c.code.generator())
                    .map_err(|e| e.to_string())?;
                if !inside {
                    return Err(format!("{name}: code at k={} not inside code at k={k}", k - 1));
                }
                pairs += 1;
            }
            prev = Some(c.code);
        }
    }
    Ok(format!("{pairs} consecutive pairs over {} families", families.len()))
}
