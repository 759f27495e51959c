//! Plane curves in Weierstrass form with a single point at infinity.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::LinearCode;
use crate::gf::{Fe, FieldCtx};
use crate::matrix::GfMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("{family} curves need {need}")]
    IncompatibleField { family: &'static str, need: &'static str },
    #[error("curve parameter out of range: {0}")]
    BadParameter(String),
    #[error("point {0} repeated in the evaluation set")]
    DuplicatePoint(usize),
    #[error("point {0} is not on the curve")]
    NotOnCurve(usize),
    #[error("multiplier {0} is zero")]
    ZeroMultiplier(usize),
    #[error("{points} points but {multipliers} multipliers")]
    LengthMismatch { points: usize, multipliers: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Family {
    Line,
    /// `y^2 + a y = x^3 + b x + c` in characteristic two.
    Elliptic {
        a: u32,
        b: u32,
        c: u32,
    },
    /// `y^2 + y = x^{r+1}` over GF(r^2), r a power of two.
    HyperElliptic,
    /// `y^r + y = x^{r+1}` over GF(r^2).
    Hermitian,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Line => write!(f, "line"),
            Family::Elliptic { a, b, c } => write!(f, "elliptic({a},{b},{c})"),
            Family::HyperElliptic => write!(f, "hyper-elliptic"),
            Family::Hermitian => write!(f, "hermitian"),
        }
    }
}

/// An affine rational point; on the line `y` is always zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Fe,
    pub y: Fe,
}

#[derive(Debug, Clone)]
pub struct CurveModel {
    family: Family,
    ctx: Arc<FieldCtx>,
    genus: u64,
    /// Pole orders of `x` and `y` at infinity.
    pole_x: u64,
    pole_y: Option<u64>,
    j_max: u32,
    /// Affine points sorted by encoding of `x`, then `y`.
    points: Vec<Point>,
}

/// `sqrt(q)` when `h` is even.
pub fn sqrt_q(ctx: &FieldCtx) -> Option<u64> {
    ctx.h().is_multiple_of(2).then(|| (ctx.p() as u64).pow(ctx.h() / 2))
}

impl CurveModel {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn pole_orders(&self) -> (u64, Option<u64>) {
        (self.pole_x, self.pole_y)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Number of rational points including the one at infinity.
    pub fn rational_point_count(&self) -> usize {
        self.points.len() + 1
    }

    /// Affine points with first coordinate `x`, ascending in `y`.
    pub fn fiber(&self, x: Fe) -> &[Point] {
        let lo = self.points.partition_point(|p| p.x < x);
        let hi = self.points.partition_point(|p| p.x <= x);
        &self.points[lo..hi]
    }

    /// Evaluates the defining polynomial `F(x, y)`; zero exactly on the curve.
    pub fn equation(&self, pt: Point) -> Fe {
        let f = &*self.ctx;
        let Point { x, y } = pt;
        match self.family {
            Family::Line => Fe::ZERO,
            Family::Elliptic { a, b, c } => {
                let lhs = f.add(f.mul(y, y), f.mul(Fe(a), y));
                let rhs = f.add(f.add(f.pow(x, 3), f.mul(Fe(b), x)), Fe(c));
                f.sub(lhs, rhs)
            }
            Family::HyperElliptic => {
                let r = sqrt_q(f).expect("validated");
                f.sub(f.add(f.mul(y, y), y), f.pow(x, r + 1))
            }
            Family::Hermitian => {
                let r = sqrt_q(f).expect("validated");
                f.sub(f.add(f.pow(y, r), y), f.pow(x, r + 1))
            }
        }
    }
}

/// Builds the curve and lists its affine rational points.
///
/// Fibers come from a table of the left-hand side over all `y`; each fiber
/// size is cross-checked against the additive Hilbert 90 criterion.
pub fn enumerate_points(family: Family, ctx: Arc<FieldCtx>) -> Result<CurveModel, CurveError> {
    let f = &*ctx;
    let q = f.q() as usize;
    let (genus, pole_x, pole_y, j_max) = match family {
        Family::Line => (0, 1, None, 0),
        Family::Elliptic { a, b, c } => {
            if f.p() != 2 {
                return Err(CurveError::IncompatibleField {
                    family: "elliptic",
                    need: "characteristic 2",
                });
            }
            if a == 0 {
                return Err(CurveError::BadParameter("a must be nonzero for a smooth curve".into()));
            }
            if [a, b, c].iter().any(|&v| v >= f.q()) {
                return Err(CurveError::BadParameter("coefficients must be field elements".into()));
            }
            (1, 2, Some(3), 1)
        }
        Family::HyperElliptic => {
            if f.p() != 2 || !f.h().is_multiple_of(2) {
                return Err(CurveError::IncompatibleField {
                    family: "hyper-elliptic",
                    need: "q = 2^h with h even",
                });
            }
            let r = sqrt_q(f).unwrap();
            (r / 2, 2, Some(r + 1), 1)
        }
        Family::Hermitian => {
            if !f.h().is_multiple_of(2) {
                return Err(CurveError::IncompatibleField {
                    family: "hermitian",
                    need: "an even extension degree",
                });
            }
            let r = sqrt_q(f).unwrap();
            ((f.q() as u64 - r) / 2, r, Some(r + 1), (r - 1) as u32)
        }
    };
    let mut model = CurveModel {
        family,
        ctx: ctx.clone(),
        genus,
        pole_x,
        pole_y,
        j_max,
        points: Vec::new(),
    };
    if family == Family::Line {
        model.points = f.elements().map(|x| Point { x, y: Fe::ZERO }).collect();
        return Ok(model);
    }
    // left-hand side in y, and the right-hand side in x
    let lhs = |y: Fe| -> Fe {
        match family {
            Family::Elliptic { a, .. } => f.add(f.mul(y, y), f.mul(Fe(a), y)),
            Family::HyperElliptic => f.add(f.mul(y, y), y),
            Family::Hermitian => f.add(f.pow(y, sqrt_q(f).unwrap()), y),
            Family::Line => unreachable!(),
        }
    };
    let rhs = |x: Fe| -> Fe {
        match family {
            Family::Elliptic { b, c, .. } => f.add(f.add(f.pow(x, 3), f.mul(Fe(b), x)), Fe(c)),
            Family::HyperElliptic | Family::Hermitian => f.pow(x, sqrt_q(f).unwrap() + 1),
            Family::Line => unreachable!(),
        }
    };
    // bucket y values by lhs(y); counting sort keeps each bucket ascending
    let mut count = vec![0usize; q + 1];
    let vals: Vec<u32> = f.elements().map(|y| lhs(y).0).collect();
    for &v in &vals {
        count[v as usize + 1] += 1;
    }
    for i in 0..q {
        count[i + 1] += count[i];
    }
    let mut slots = vec![Fe::ZERO; q];
    let mut fill = count.clone();
    for (y, &v) in vals.iter().enumerate() {
        slots[fill[v as usize]] = Fe(y as u32);
        fill[v as usize] += 1;
    }
    for x in f.elements() {
        let c = rhs(x);
        let ys = &slots[count[c.0 as usize]..count[c.0 as usize + 1]];
        let expected = match family {
            Family::Elliptic { a, .. } => {
                let a2 = f.mul(Fe(a), Fe(a));
                let t = f.trace_to_prime(f.div(c, a2).expect("a != 0"));
                if t.is_zero() {
                    2
                } else {
                    0
                }
            }
            Family::HyperElliptic => {
                if f.trace_to_prime(c).is_zero() {
                    2
                } else {
                    0
                }
            }
            Family::Hermitian => sqrt_q(f).unwrap() as usize,
            Family::Line => unreachable!(),
        };
        assert_eq!(
            ys.len(),
            expected,
            "fiber size disagrees with the trace criterion at x = {x}"
        );
        model.points.extend(ys.iter().map(|&y| Point { x, y }));
    }
    debug_assert!(model.points.iter().all(|&p| model.equation(p).is_zero()));
    Ok(model)
}

/// A monomial `x^i y^j`.
pub type Monomial = (u32, u32);

/// Monomials `x^i y^j` with `j <= j_max` and pole order at most `m`,
/// ordered by pole order.
pub fn rr_basis(model: &CurveModel, m: u64) -> Vec<Monomial> {
    let mut out: Vec<(u64, Monomial)> = Vec::new();
    for j in 0..=model.j_max {
        let yj = model.pole_y.unwrap_or(0) * j as u64;
        if yj > m {
            break;
        }
        let imax = (m - yj) / model.pole_x;
        out.extend((0..=imax).map(|i| (i * model.pole_x + yj, (i as u32, j))));
    }
    out.sort_unstable();
    out.into_iter().map(|(_, mono)| mono).collect()
}

/// Pole order of a monomial at infinity.
pub fn pole_order(model: &CurveModel, mono: Monomial) -> u64 {
    mono.0 as u64 * model.pole_x + mono.1 as u64 * model.pole_y.unwrap_or(0)
}

/// Result of [`evaluate_code`].
#[derive(Debug, Clone)]
pub struct EvaluatedCode {
    pub code: LinearCode,
    pub basis: Vec<Monomial>,
    /// Whether `2g - 2 < m < n`, where the dimension is `m + 1 - g`.
    pub in_window: bool,
}

/// The code `{(v_t z(P_t))_t : z in L(m P_inf)}`.
///
/// Inside the dimension window the monomial rows are the generator; outside
/// it the rows are reduced to a basis and the result is flagged.
pub fn evaluate_code(model: &CurveModel, points: &[Point], m: u64, v: &[Fe]) -> Result<EvaluatedCode, CurveError> {
    let f = &*model.ctx;
    if points.len() != v.len() {
        return Err(CurveError::LengthMismatch {
            points: points.len(),
            multipliers: v.len(),
        });
    }
    if let Some(i) = v.iter().position(|x| x.is_zero()) {
        return Err(CurveError::ZeroMultiplier(i));
    }
    let mut sorted: Vec<(Point, usize)> = points.iter().copied().zip(0..).collect();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(CurveError::DuplicatePoint(w[1].1));
    }
    if let Some(i) = points.iter().position(|&p| !model.equation(p).is_zero()) {
        return Err(CurveError::NotOnCurve(i));
    }
    let basis = rr_basis(model, m);
    let n = points.len();
    let max_i = basis.iter().map(|b| b.0).max().unwrap_or(0) as usize;
    let max_j = basis.iter().map(|b| b.1).max().unwrap_or(0) as usize;
    let mut data = vec![Fe::ZERO; basis.len() * n];
    let mut xp = vec![Fe::ZERO; max_i + 1];
    let mut yp = vec![Fe::ZERO; max_j + 1];
    for (t, (&pt, &vt)) in points.iter().zip(v).enumerate() {
        xp[0] = vt;
        for i in 1..=max_i {
            xp[i] = f.mul(xp[i - 1], pt.x);
        }
        yp[0] = Fe::ONE;
        for j in 1..=max_j {
            yp[j] = f.mul(yp[j - 1], pt.y);
        }
        for (r, &(i, j)) in basis.iter().enumerate() {
            data[r * n + t] = f.mul(xp[i as usize], yp[j as usize]);
        }
    }
    let gen = GfMatrix::new(model.ctx.clone(), basis.len(), n, data).expect("field entries");
    let g = model.genus as i64;
    let in_window = 2 * g - 2 < m as i64 && (m as usize) < n;
    let code = if in_window {
        LinearCode::from_generator_unchecked(gen)
    } else {
        LinearCode::spanned_by(&gen)
    };
    Ok(EvaluatedCode { code, basis, in_window })
}

/// The divisors `G = g_coeff P_inf`, `D` and `H = D - G + (dx/h)` of a
/// one-point construction, with `H` recorded by its coefficient at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PDivisorPair {
    pub g_coeff: i64,
    pub h_coeff: i64,
    pub d_len: usize,
}

impl PDivisorPair {
    /// `H = (n + 2g - 2 - (k - 1)) P_inf` for the differential `dx / h(x)`
    /// whose zero divisor of `h` is the evaluation divisor.
    pub fn for_design(len: usize, genus: u64, k: u64) -> Self {
        let g_coeff = k as i64 - 1;
        PDivisorPair {
            g_coeff,
            h_coeff: len as i64 + 2 * genus as i64 - 2 - g_coeff,
            d_len: len,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::matrix::GfMatrix;

    fn field(p: u64, h: u32) -> Arc<FieldCtx> {
        Arc::new(make_field(p, h).unwrap())
    }

    #[test]
    fn point_counts() {
        let he = enumerate_points(Family::HyperElliptic, field(2, 4)).unwrap();
        assert_eq!(he.points().len(), 32);
        assert_eq!(he.rational_point_count(), 33);
        assert_eq!(he.genus(), 2);
        let herm = enumerate_points(Family::Hermitian, field(3, 2)).unwrap();
        assert_eq!(herm.points().len(), 27);
        assert_eq!(herm.genus(), 3);
        for x in herm.ctx().elements() {
            assert_eq!(herm.fiber(x).len(), 3);
        }
    }

    #[test]
    fn elliptic_over_gf4() {
        let f4 = field(2, 2);
        let e = enumerate_points(Family::Elliptic { a: 1, b: 0, c: 0 }, f4.clone()).unwrap();
        let s = f4
            .elements()
            .filter(|&x| f4.trace_to_prime(f4.pow(x, 3)).is_zero())
            .count();
        assert_eq!(e.rational_point_count(), 2 * s + 1);
        // brute force over all pairs
        let brute = f4
            .elements()
            .flat_map(|x| f4.elements().map(move |y| Point { x, y }))
            .filter(|&p| e.equation(p).is_zero())
            .count();
        assert_eq!(brute, e.points().len());
    }

    #[test]
    fn incompatible_fields() {
        assert!(enumerate_points(Family::HyperElliptic, field(3, 2)).is_err());
        assert!(enumerate_points(Family::HyperElliptic, field(2, 3)).is_err());
        assert!(enumerate_points(Family::Hermitian, field(3, 3)).is_err());
        assert!(enumerate_points(Family::Elliptic { a: 1, b: 0, c: 0 }, field(3, 2)).is_err());
        assert!(enumerate_points(Family::Elliptic { a: 0, b: 0, c: 0 }, field(2, 2)).is_err());
    }

    #[test]
    fn basis_examples() {
        let line = enumerate_points(Family::Line, field(3, 2)).unwrap();
        assert_eq!(rr_basis(&line, 4), vec![(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]);
        let ell = enumerate_points(Family::Elliptic { a: 1, b: 0, c: 0 }, field(2, 4)).unwrap();
        assert_eq!(rr_basis(&ell, 2), vec![(0, 0), (1, 0)]);
        let herm = enumerate_points(Family::Hermitian, field(3, 2)).unwrap();
        assert_eq!(rr_basis(&herm, 6), vec![(0, 0), (1, 0), (0, 1), (2, 0)]);
        let b = rr_basis(&herm, 6);
        assert_eq!(b.len(), 6 + 1 - 3);
    }

    #[test]
    fn line_repetition_code() {
        let f9 = field(3, 2);
        let line = enumerate_points(Family::Line, f9.clone()).unwrap();
        let ev = evaluate_code(&line, line.points(), 0, &[Fe::ONE; 9]).unwrap();
        assert!(ev.in_window);
        assert_eq!(ev.code.generator(), &GfMatrix::new(f9, 1, 9, vec![Fe::ONE; 9]).unwrap());
    }

    #[test]
    fn evaluation_rejects_bad_input() {
        let f9 = field(3, 2);
        let herm = enumerate_points(Family::Hermitian, f9).unwrap();
        let pts = herm.points();
        let dup = [pts[0], pts[1], pts[0]];
        assert_eq!(
            evaluate_code(&herm, &dup, 2, &[Fe::ONE; 3]).unwrap_err(),
            CurveError::DuplicatePoint(2)
        );
        let off = [Point { x: Fe(0), y: Fe(1) }];
        assert!(herm.equation(off[0]) != Fe::ZERO);
        assert_eq!(
            evaluate_code(&herm, &off, 0, &[Fe::ONE]).unwrap_err(),
            CurveError::NotOnCurve(0)
        );
        assert!(evaluate_code(&herm, &pts[..2], 0, &[Fe::ONE, Fe::ZERO]).is_err());
    }

    #[test]
    fn out_of_window_is_flagged() {
        let f9 = field(3, 2);
        let herm = enumerate_points(Family::Hermitian, f9).unwrap();
        let ev = evaluate_code(&herm, &herm.points()[..5], 12, &[Fe::ONE; 5]).unwrap();
        assert!(!ev.in_window);
        assert_eq!(ev.code.k(), ev.code.generator().rank());
    }
}
