//! Critical temperature, critical field and fixed-point classification of the
//! homogeneous one-generation map `psi(x) = h + d F(x, theta)`.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::recursion::{kernel, kernel_prime, psi, psi_prime};

/// `|h|` counts as critical when `||h| - h_c| <= TANGENCY_BAND * max(1, h_c)`.
/// Double roots cannot be separated by bracketing below solver precision, so
/// the case label decides inside this band.
pub const TANGENCY_BAND: f64 = 1e-9;

/// `psi'` window around 1 inside which a fixed point counts as a saddle node.
pub const SADDLE_PSI_PRIME_BAND: f64 = 1e-6;

const BRACKET_CELLS: usize = 4096;
const BISECT_X_TOL: f64 = 1e-12;

/// Stability of a fixed point of `psi`, read off `psi'(b*)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Attracting,
    SaddleNode,
    Repelling,
}

/// One fixed point with its multiplier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPoint {
    pub value: f64,
    pub psi_prime: f64,
    pub stability: Stability,
}

/// Number of fixed points of `psi`; matches the classical three-case split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseLabel {
    One,
    Two,
    Three,
}

/// All fixed points of `psi` at a homogeneous field `h`, sorted ascending.
#[derive(Clone, Debug)]
pub struct FixedPointReport {
    pub h: f64,
    pub params: ModelParams,
    pub points: Vec<FixedPoint>,
    pub case: CaseLabel,
}

/// Critical inverse temperature: `tanh(beta_c J) d = 1`.
pub fn critical_beta(d: u32, coupling: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("tree order d must be >= 2, got {d}")));
    }
    if !coupling.is_finite() || coupling <= 0.0 {
        return Err(Error::Domain(format!(
            "coupling J must be positive and finite, got {coupling}"
        )));
    }
    Ok((1.0 / f64::from(d)).atanh() / coupling)
}

/// Positive abscissa `x*` where `psi'(x*) = 1`: the tangency location, which
/// is also the saddle fixed point `b+` at `h = -h_c`.
///
/// From `d theta (1 - t^2) = 1 - theta^2 t^2` with `t = tanh x`:
/// `t*^2 = (d theta - 1) / (theta (d - theta))`.
pub fn tangency_point(params: &ModelParams) -> Result<f64> {
    let d = params.d_f64();
    let theta = params.theta();
    if !params.is_supercritical() {
        return Err(Error::Criticality(format!(
            "theta = {theta} <= 1/d, no positive critical field exists"
        )));
    }
    let t_star_sq = (d * theta - 1.0) / (theta * (d - theta));
    Ok(t_star_sq.sqrt().atanh())
}

/// Critical field `h_c = d F(x*, theta) - x*` from the tangency of `psi`
/// with the diagonal. Positive exactly when `theta > 1/d`.
pub fn critical_field(params: &ModelParams) -> Result<f64> {
    let x_star = tangency_point(params)?;
    Ok(params.d_f64() * kernel(x_star, params.theta()) - x_star)
}

/// Independent numeric route to `h_c`: bisection solve of `psi'(x) = 1` on
/// `(0, inf)` (where `psi'` is strictly decreasing), then `h_c = d F(x) - x`.
pub fn critical_field_numeric(params: &ModelParams) -> Result<f64> {
    let d = params.d_f64();
    let theta = params.theta();
    if !params.is_supercritical() {
        return Err(Error::Criticality(format!(
            "theta = {theta} <= 1/d, no positive critical field exists"
        )));
    }
    let slope_minus_one = |x: f64| d * kernel_prime(x, theta) - 1.0;
    let mut hi = 1.0;
    while slope_minus_one(hi) > 0.0 {
        hi *= 2.0;
        assert!(hi < 1e6, "psi' = 1 bracket not found");
    }
    let x = bisect(&slope_minus_one, 0.0, hi, 1e-14);
    Ok(d * kernel(x, theta) - x)
}

/// Plain bisection on a sign-changing bracket, to absolute x-tolerance.
fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    debug_assert!(f_lo * f(hi) <= 0.0, "bisect needs a sign change");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_lo * f_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    0.5 * (lo + hi)
}

fn stability_of(multiplier: f64) -> Stability {
    if (multiplier - 1.0).abs() <= SADDLE_PSI_PRIME_BAND {
        Stability::SaddleNode
    } else if multiplier < 1.0 {
        Stability::Attracting
    } else {
        Stability::Repelling
    }
}

/// All solutions of `psi(b) = b`, with stability and the analytic case label.
///
/// Roots come from a 4096-cell sign-change scan over the a-priori interval
/// `[-(|h| + d arctanh theta + 1), +(|h| + d arctanh theta + 1)]` polished by
/// bisection. In the supercritical three-root case the scan is backed up by
/// the monotone pieces of `psi(b) - b` (split at the tangency abscissas
/// `+/- x*`), which separate root pairs too close for the uniform grid.
pub fn fixed_points(h: f64, params: &ModelParams) -> FixedPointReport {
    let d = params.d_f64();
    let theta = params.theta();
    let bound = h.abs() + d * theta.atanh() + 1.0;
    let g = |b: f64| psi(b, h, params) - b;

    let case = if params.is_supercritical() {
        let hc = critical_field(params).expect("supercritical");
        if (h.abs() - hc).abs() <= TANGENCY_BAND * hc.max(1.0) {
            CaseLabel::Two
        } else if h.abs() < hc {
            CaseLabel::Three
        } else {
            CaseLabel::One
        }
    } else {
        CaseLabel::One
    };

    let mut roots: Vec<f64> = Vec::new();
    let step = 2.0 * bound / BRACKET_CELLS as f64;
    let mut prev_x = -bound;
    let mut prev_g = g(prev_x);
    for i in 1..=BRACKET_CELLS {
        let x = -bound + step * i as f64;
        let gx = g(x);
        if prev_g == 0.0 {
            roots.push(prev_x);
        } else if prev_g * gx < 0.0 {
            roots.push(bisect(&g, prev_x, x, BISECT_X_TOL));
        }
        prev_x = x;
        prev_g = gx;
    }

    match case {
        CaseLabel::Two => {
            // The tangency root never produces a sign change; place it
            // analytically and keep the bracketed simple root.
            let x_star = tangency_point(params).expect("supercritical");
            let saddle = if h < 0.0 { x_star } else { -x_star };
            roots.retain(|r| (r - saddle).abs() > 1e-6);
            roots.push(saddle);
        }
        CaseLabel::Three => {
            if roots.len() < 3 {
                let x_star = tangency_point(params).expect("supercritical");
                roots.clear();
                for (lo, hi) in [(-bound, -x_star), (-x_star, x_star), (x_star, bound)] {
                    let g_lo = g(lo);
                    let g_hi = g(hi);
                    if g_lo == 0.0 {
                        roots.push(lo);
                    } else if g_lo * g_hi < 0.0 {
                        roots.push(bisect(&g, lo, hi, BISECT_X_TOL));
                    }
                }
            }
        }
        CaseLabel::One => {}
    }

    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-8);

    let points: Vec<FixedPoint> = roots
        .into_iter()
        .map(|value| {
            let multiplier = psi_prime(value, params);
            FixedPoint { value, psi_prime: multiplier, stability: stability_of(multiplier) }
        })
        .collect();

    debug_assert_eq!(
        points.len(),
        match case {
            CaseLabel::One => 1,
            CaseLabel::Two => 2,
            CaseLabel::Three => 3,
        },
        "root count disagrees with the analytic case at h = {h}"
    );

    FixedPointReport { h, params: *params, points, case }
}

/// Smallest and largest fixed points `(b-, b+)`.
pub fn extremal_pair(h: f64, params: &ModelParams) -> Result<(f64, f64)> {
    let report = fixed_points(h, params);
    if report.points.len() < 2 {
        return Err(Error::Case(format!(
            "extremal pair needs at least two fixed points; h = {h} has one"
        )));
    }
    let first = report.points.first().expect("non-empty").value;
    let last = report.points.last().expect("non-empty").value;
    Ok((first, last))
}

/// `(b-, b+)` at the critical minus field `h = -h_c`, where `b+` is the
/// saddle node and `b-` the attractor.
pub fn critical_pair(params: &ModelParams) -> Result<(f64, f64)> {
    let hc = critical_field(params)?;
    extremal_pair(-hc, params)
}
