//! Scalar boundary-field recursion: the edge kernel `F`, the one-generation
//! maps `psi` / `psi~_n`, their derivatives and backward composed iteration.

use crate::error::{Error, Result};
use crate::model::{EpsilonFamily, FieldProfile, ModelParams};

/// Relative residual every stored backward trace is validated against.
pub const RESIDUAL_TOL: f64 = 1e-12;

/// Boundary-field value extended with the two infinities.
///
/// The infinities are explicit variants rather than floating specials, so a
/// single map application lands on the finite `psi(+/-inf)` without any
/// `inf * 0` arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PlusInf,
    MinusInf,
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        ExtendedReal::Finite(x)
    }
}

fn atanh_strict(u: f64) -> f64 {
    // |theta tanh x| <= theta < 1 by construction; hitting the singularity is
    // a programming error, not an input error.
    assert!(u.abs() < 1.0, "arctanh argument must satisfy |u| < 1, got {u}");
    u.atanh()
}

/// Edge kernel `F(x, theta) = arctanh(theta tanh x)`.
///
/// Odd and strictly increasing in `x`, bounded by `arctanh(theta)`.
pub fn kernel(x: f64, theta: f64) -> f64 {
    debug_assert!(theta > 0.0 && theta < 1.0, "theta must lie in (0, 1), got {theta}");
    atanh_strict(theta * x.tanh())
}

/// Kernel at an extended argument; the infinities map to `+/- arctanh(theta)`.
pub fn kernel_extended(x: ExtendedReal, theta: f64) -> f64 {
    match x {
        ExtendedReal::Finite(v) => kernel(v, theta),
        ExtendedReal::PlusInf => atanh_strict(theta),
        ExtendedReal::MinusInf => -atanh_strict(theta),
    }
}

/// `dF/dx = theta (1 - t^2) / (1 - theta^2 t^2)` with `t = tanh x`.
pub fn kernel_prime(x: f64, theta: f64) -> f64 {
    let t = x.tanh();
    let t2 = t * t;
    theta * (1.0 - t2) / (1.0 - theta * theta * t2)
}

/// `d2F/dx2 = -2 theta (1 - theta^2) t (1 - t^2) / (1 - theta^2 t^2)^2`.
pub fn kernel_second(x: f64, theta: f64) -> f64 {
    let t = x.tanh();
    let t2 = t * t;
    let denom = 1.0 - theta * theta * t2;
    -2.0 * theta * (1.0 - theta * theta) * t * (1.0 - t2) / (denom * denom)
}

/// One-generation map `psi(x) = h + d F(x, theta)`.
pub fn psi(x: f64, h: f64, params: &ModelParams) -> f64 {
    h + params.d_f64() * kernel(x, params.theta())
}

/// `psi` at an extended argument.
pub fn psi_extended(x: ExtendedReal, h: f64, params: &ModelParams) -> f64 {
    h + params.d_f64() * kernel_extended(x, params.theta())
}

/// `psi'(x) = d F'(x, theta)`; independent of the field.
pub fn psi_prime(x: f64, params: &ModelParams) -> f64 {
    params.d_f64() * kernel_prime(x, params.theta())
}

/// `psi''(x) = d F''(x, theta)`.
pub fn psi_second(x: f64, params: &ModelParams) -> f64 {
    params.d_f64() * kernel_second(x, params.theta())
}

/// Field lookup resolved once per iteration run, so deep sweeps do not
/// re-derive the critical field at every generation.
enum ResolvedFields<'a> {
    Constant(f64),
    CriticalMinus { base: f64, family: &'a EpsilonFamily },
    Explicit(&'a [f64]),
}

impl<'a> ResolvedFields<'a> {
    fn resolve(profile: &'a FieldProfile, params: &ModelParams) -> Result<Self> {
        match profile {
            FieldProfile::Homogeneous(h) => Ok(Self::Constant(*h)),
            FieldProfile::CriticalMinusPerturbation(family) => Ok(Self::CriticalMinus {
                base: -crate::criticality::critical_field(params)?,
                family,
            }),
            FieldProfile::Explicit(values) => Ok(Self::Explicit(values)),
        }
    }

    fn field_at(&self, n: usize) -> Result<f64> {
        match self {
            Self::Constant(h) => Ok(*h),
            Self::CriticalMinus { base, family } => Ok(base - family.epsilon(n)?),
            Self::Explicit(values) => values
                .get(n - 1)
                .copied()
                .ok_or(Error::Index { index: n, len: values.len() }),
        }
    }
}

/// Backward trace of boundary fields `b_m` over `m = to_depth ..= from_depth`,
/// seeded with `b_{from_depth + 1} = seed`.
#[derive(Clone, Debug)]
pub struct IterationTrace {
    pub params: ModelParams,
    pub profile: FieldProfile,
    /// Deepest generation `n`; the seed sits one generation below it.
    pub from_depth: usize,
    /// Shallowest generation `k` reached by the iteration.
    pub to_depth: usize,
    pub seed: ExtendedReal,
    /// `values[i] = b_{to_depth + i}`; the last entry is `b_{from_depth}`.
    pub values: Vec<f64>,
}

impl IterationTrace {
    /// `b_depth` for `to_depth <= depth <= from_depth`.
    pub fn value_at(&self, depth: usize) -> f64 {
        assert!(
            depth >= self.to_depth && depth <= self.from_depth,
            "depth {depth} outside trace range [{}, {}]",
            self.to_depth,
            self.from_depth
        );
        self.values[depth - self.to_depth]
    }

    /// The shallowest value `b_{to_depth}`.
    pub fn final_value(&self) -> f64 {
        self.values[0]
    }

    /// Largest relative recursion residual over consecutive stored pairs.
    pub fn max_relative_residual(&self) -> Result<f64> {
        let fields = ResolvedFields::resolve(&self.profile, &self.params)?;
        let d = self.params.d_f64();
        let theta = self.params.theta();
        let mut worst: f64 = 0.0;
        for m in self.to_depth..self.from_depth {
            let expected = fields.field_at(m)? + d * kernel(self.value_at(m + 1), theta);
            let got = self.value_at(m);
            let residual = (got - expected).abs() / got.abs().max(1.0);
            worst = worst.max(residual);
        }
        Ok(worst)
    }
}

/// Run the compatibility recursion `b_{m-1} = h_{m-1} + d F(b_m, theta)`
/// from `b_{from_depth + 1} = seed` down to `b_{to_depth}`, storing every value.
pub fn iterate_backward(
    profile: &FieldProfile,
    params: &ModelParams,
    from_depth: usize,
    to_depth: usize,
    seed: ExtendedReal,
) -> Result<IterationTrace> {
    if to_depth == 0 {
        return Err(Error::Domain("to_depth must be >= 1".into()));
    }
    if to_depth > from_depth {
        return Err(Error::Domain(format!(
            "to_depth {to_depth} must not exceed from_depth {from_depth}"
        )));
    }
    let fields = ResolvedFields::resolve(profile, params)?;
    let d = params.d_f64();
    let theta = params.theta();
    let len = from_depth - to_depth + 1;
    let mut values = vec![0.0; len];

    let mut b = fields.field_at(from_depth)? + d * kernel_extended(seed, theta);
    values[len - 1] = b;
    for m in (to_depth..from_depth).rev() {
        b = fields.field_at(m)? + d * kernel(b, theta);
        values[m - to_depth] = b;
    }

    Ok(IterationTrace {
        params: *params,
        profile: profile.clone(),
        from_depth,
        to_depth,
        seed,
        values,
    })
}

/// `psi~_{k, n}(seed)`: the composed backward map without storing the trace.
pub fn compose(
    profile: &FieldProfile,
    params: &ModelParams,
    from_depth: usize,
    to_depth: usize,
    seed: ExtendedReal,
) -> Result<f64> {
    if to_depth == 0 {
        return Err(Error::Domain("to_depth must be >= 1".into()));
    }
    if to_depth > from_depth {
        return Err(Error::Domain(format!(
            "to_depth {to_depth} must not exceed from_depth {from_depth}"
        )));
    }
    let fields = ResolvedFields::resolve(profile, params)?;
    let d = params.d_f64();
    let theta = params.theta();
    let mut b = fields.field_at(from_depth)? + d * kernel_extended(seed, theta);
    for m in (to_depth..from_depth).rev() {
        b = fields.field_at(m)? + d * kernel(b, theta);
    }
    Ok(b)
}
