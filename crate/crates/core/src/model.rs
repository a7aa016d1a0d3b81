//! Model parameters, Cayley-tree geometry and generation-dependent field profiles.

use crate::error::{Error, Result};

/// Parameters of the ferromagnetic Ising model on the Cayley tree of order `d`.
///
/// Every recursion kernel depends only on the pair `(d, theta)` with
/// `theta = tanh(beta * J)`; beta and J are kept so finite-volume weights can
/// be formed and so theta stays consistent with its defining pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    d: u32,
    coupling: f64,
    beta: f64,
    theta: f64,
}

impl ModelParams {
    /// Build parameters from `(d, J, beta)`; `theta = tanh(beta * J)`.
    pub fn new(d: u32, coupling: f64, beta: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("tree order d must be >= 2, got {d}")));
        }
        if !coupling.is_finite() || coupling <= 0.0 {
            return Err(Error::Domain(format!(
                "coupling J must be positive and finite, got {coupling}"
            )));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Domain(format!(
                "inverse temperature beta must be positive and finite, got {beta}"
            )));
        }
        let theta = (beta * coupling).tanh();
        if theta >= 1.0 {
            return Err(Error::Domain(format!(
                "beta * J = {} saturates tanh; theta must stay below 1",
                beta * coupling
            )));
        }
        Ok(Self { d, coupling, beta, theta })
    }

    /// Build parameters from `(d, J, theta)`, back-solving `beta = arctanh(theta) / J`.
    pub fn from_theta(d: u32, coupling: f64, theta: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("tree order d must be >= 2, got {d}")));
        }
        if !coupling.is_finite() || coupling <= 0.0 {
            return Err(Error::Domain(format!(
                "coupling J must be positive and finite, got {coupling}"
            )));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Domain(format!("theta must lie in (0, 1), got {theta}")));
        }
        let beta = theta.atanh() / coupling;
        Ok(Self { d, coupling, beta, theta })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn d_f64(&self) -> f64 {
        f64::from(self.d)
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `theta > 1/d`, the regime where the homogeneous critical field exists.
    pub fn is_supercritical(&self) -> bool {
        self.theta * self.d_f64() > 1.0
    }
}

/// Family of perturbation magnitudes `eps_n`, evaluated lazily at `n >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum EpsilonFamily {
    /// `eps_n = n^(-gamma)` with `gamma > 0`.
    PowerLaw { gamma: f64 },
    /// `eps_n = amplitude * ratio^(n-1)` with `0 < ratio < 1`, `amplitude > 0`.
    Geometric { ratio: f64, amplitude: f64 },
    /// Explicit prefix `eps_1, eps_2, ...`; non-negative, non-increasing.
    Custom(Vec<f64>),
}

impl EpsilonFamily {
    pub fn power_law(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::Domain(format!("power-law exponent must be positive, got {gamma}")));
        }
        Ok(Self::PowerLaw { gamma })
    }

    pub fn geometric(ratio: f64, amplitude: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Domain(format!("geometric ratio must lie in (0, 1), got {ratio}")));
        }
        if !amplitude.is_finite() || amplitude <= 0.0 {
            return Err(Error::Domain(format!(
                "geometric amplitude must be positive, got {amplitude}"
            )));
        }
        Ok(Self::Geometric { ratio, amplitude })
    }

    /// An explicit prefix. Zeros are allowed (the degenerate unperturbed case);
    /// negative entries or an increase along the list are construction errors.
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("custom epsilon list must not be empty".into()));
        }
        for (i, w) in values.windows(2).enumerate() {
            if !w[0].is_finite() || w[0] < 0.0 {
                return Err(Error::Monotonicity(format!(
                    "eps_{} = {} is not a finite non-negative value",
                    i + 1,
                    w[0]
                )));
            }
            if w[1] > w[0] {
                return Err(Error::Monotonicity(format!(
                    "eps_{} = {} exceeds eps_{} = {}",
                    i + 2,
                    w[1],
                    i + 1,
                    w[0]
                )));
            }
        }
        let last = *values.last().expect("non-empty");
        if !last.is_finite() || last < 0.0 {
            return Err(Error::Monotonicity(format!(
                "eps_{} = {last} is not a finite non-negative value",
                values.len()
            )));
        }
        Ok(Self::Custom(values))
    }

    /// `eps_n` for `n >= 1`. Deterministic; repeated calls return identical values.
    pub fn epsilon(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("generation index starts at 1".into()));
        }
        match self {
            Self::PowerLaw { gamma } => Ok((n as f64).powf(-gamma)),
            Self::Geometric { ratio, amplitude } => Ok(amplitude * ratio.powi(n as i32 - 1)),
            Self::Custom(values) => values
                .get(n - 1)
                .copied()
                .ok_or(Error::Index { index: n, len: values.len() }),
        }
    }
}

/// External-field profile `h_n` for generations `n >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldProfile {
    /// The same field at every generation.
    Homogeneous(f64),
    /// `h_n = -h_c(params) - eps_n`: the critical minus field perturbed downward.
    CriticalMinusPerturbation(EpsilonFamily),
    /// Explicit per-generation fields `h_1, h_2, ...`.
    Explicit(Vec<f64>),
}

impl FieldProfile {
    /// The field at generation `n >= 1`.
    ///
    /// For [`FieldProfile::CriticalMinusPerturbation`] this needs `theta > 1/d`
    /// so that `h_c` is defined; otherwise a criticality error is returned.
    pub fn field_at(&self, params: &ModelParams, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("generation index starts at 1".into()));
        }
        match self {
            Self::Homogeneous(h) => Ok(*h),
            Self::CriticalMinusPerturbation(family) => {
                let hc = crate::criticality::critical_field(params)?;
                Ok(-hc - family.epsilon(n)?)
            }
            Self::Explicit(values) => values
                .get(n - 1)
                .copied()
                .ok_or(Error::Index { index: n, len: values.len() }),
        }
    }

    /// The field the profile approaches far from the root.
    pub fn asymptotic_field(&self, params: &ModelParams) -> Result<f64> {
        match self {
            Self::Homogeneous(h) => Ok(*h),
            Self::CriticalMinusPerturbation(_) => {
                Ok(-crate::criticality::critical_field(params)?)
            }
            Self::Explicit(_) => Err(Error::Domain(
                "an explicit field list has no asymptotic field".into(),
            )),
        }
    }

    /// Materialize `h_1 ..= h_n`.
    pub fn prefix(&self, params: &ModelParams, n: usize) -> Result<Vec<f64>> {
        (1..=n).map(|m| self.field_at(params, m)).collect()
    }
}

/// Rooted finite volume of the Cayley tree of order `d`.
///
/// The root (generation 0) is included and has `d + 1` children; every other
/// interior vertex has `d` children. Vertices are indexed generation by
/// generation, root first, children of a vertex consecutive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeGeometry {
    d: u32,
    depth: u32,
    root_included: bool,
}

impl TreeGeometry {
    pub fn new(d: u32, depth: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("tree order d must be >= 2, got {d}")));
        }
        if depth == 0 {
            return Err(Error::Domain("tree depth must be >= 1".into()));
        }
        Ok(Self { d, depth, root_included: true })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn root_included(&self) -> bool {
        self.root_included
    }

    /// `|W_0| = 1`, `|W_k| = (d+1) d^(k-1)` for `k >= 1`.
    pub fn generation_size(&self, k: u32) -> u64 {
        if k == 0 {
            1
        } else {
            u64::from(self.d + 1) * u64::from(self.d).pow(k - 1)
        }
    }

    /// Closed form `1 + (d+1)(d^depth - 1)/(d - 1)`.
    pub fn total_vertices(&self) -> u64 {
        let d = u64::from(self.d);
        1 + u64::from(self.d + 1) * (d.pow(self.depth) - 1) / (d - 1)
    }

    /// Start index of each generation `0 ..= depth`, plus the total as a sentinel.
    pub fn generation_offsets(&self) -> Vec<u64> {
        let mut offsets = Vec::with_capacity(self.depth as usize + 2);
        let mut acc = 0u64;
        for k in 0..=self.depth {
            offsets.push(acc);
            acc += self.generation_size(k);
        }
        offsets.push(acc);
        offsets
    }

    /// Generation of a vertex index.
    pub fn generation_of(&self, vertex: u64) -> u32 {
        let mut acc = 0u64;
        for k in 0..=self.depth {
            acc += self.generation_size(k);
            if vertex < acc {
                return k;
            }
        }
        panic!("vertex {vertex} outside volume of {} vertices", self.total_vertices());
    }

    /// Parent index per vertex; the root maps to itself.
    pub fn parents(&self) -> Vec<usize> {
        let offsets = self.generation_offsets();
        let total = self.total_vertices() as usize;
        let mut parents = vec![0usize; total];
        for k in 1..=self.depth {
            let start = offsets[k as usize] as usize;
            let size = self.generation_size(k) as usize;
            let parent_start = offsets[k as usize - 1] as usize;
            for i in 0..size {
                parents[start + i] = if k == 1 {
                    0
                } else {
                    parent_start + i / self.d as usize
                };
            }
        }
        parents
    }

    /// All `(parent, child)` edges of the volume.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let parents = self.parents();
        parents
            .iter()
            .enumerate()
            .skip(1)
            .map(|(v, &p)| (p, v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_compute_theta() {
        let p = ModelParams::new(2, 1.0, 1.0).unwrap();
        assert!((p.theta() - 0.761_594_155_955_764_9).abs() < 1e-15);
        // beta * J symmetry: same product, same theta
        let q = ModelParams::new(3, 2.0, 0.5).unwrap();
        assert!((q.theta() - p.theta()).abs() < 1e-15);
    }

    #[test]
    fn params_reject_bad_inputs() {
        assert!(matches!(ModelParams::new(1, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::new(2, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::new(2, 1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::new(2, 1.0, -0.5), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::new(2, 1.0, 1e9), Err(Error::Domain(_))));
    }

    #[test]
    fn theta_roundtrip_is_consistent() {
        let p = ModelParams::from_theta(2, 1.0, 0.8).unwrap();
        assert!(((p.beta() * p.coupling()).tanh() - p.theta()).abs() <= f64::EPSILON);
        assert!(p.is_supercritical());
        let q = ModelParams::from_theta(2, 1.0, 0.4).unwrap();
        assert!(!q.is_supercritical());
    }

    #[test]
    fn homogeneous_profile_is_constant() {
        let p = ModelParams::new(2, 1.0, 1.0).unwrap();
        let profile = FieldProfile::Homogeneous(0.3);
        for n in [1usize, 2, 7, 1000] {
            assert_eq!(profile.field_at(&p, n).unwrap(), 0.3);
        }
    }

    #[test]
    fn perturbed_profile_subtracts_epsilon() {
        let p = ModelParams::from_theta(2, 1.0, 0.8).unwrap();
        let hc = crate::criticality::critical_field(&p).unwrap();
        let gamma2 = FieldProfile::CriticalMinusPerturbation(EpsilonFamily::power_law(2.0).unwrap());
        let v = gamma2.field_at(&p, 2).unwrap();
        assert!((v - (-hc - 0.25)).abs() < 1e-15);
        let gamma32 =
            FieldProfile::CriticalMinusPerturbation(EpsilonFamily::power_law(1.5).unwrap());
        let v = gamma32.field_at(&p, 4).unwrap();
        assert!((v - (-hc - 0.125)).abs() < 1e-15);
    }

    #[test]
    fn perturbed_profile_needs_supercritical_theta() {
        let p = ModelParams::from_theta(2, 1.0, 0.4).unwrap();
        let profile = FieldProfile::CriticalMinusPerturbation(EpsilonFamily::power_law(2.0).unwrap());
        assert!(matches!(profile.field_at(&p, 1), Err(Error::Criticality(_))));
    }

    #[test]
    fn explicit_profile_bounds() {
        let p = ModelParams::new(2, 1.0, 1.0).unwrap();
        let profile = FieldProfile::Explicit(vec![0.1, 0.2]);
        assert_eq!(profile.field_at(&p, 2).unwrap(), 0.2);
        assert!(matches!(
            profile.field_at(&p, 3),
            Err(Error::Index { index: 3, len: 2 })
        ));
        assert!(matches!(profile.field_at(&p, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn epsilon_families_validate() {
        assert!(EpsilonFamily::power_law(0.0).is_err());
        assert!(EpsilonFamily::geometric(1.0, 1.0).is_err());
        assert!(EpsilonFamily::geometric(0.5, 0.0).is_err());
        assert!(EpsilonFamily::custom(vec![]).is_err());
        assert!(matches!(
            EpsilonFamily::custom(vec![0.1, 0.2]),
            Err(Error::Monotonicity(_))
        ));
        assert!(matches!(
            EpsilonFamily::custom(vec![0.1, -0.2]),
            Err(Error::Monotonicity(_))
        ));
        // zeros are allowed: the degenerate unperturbed case
        let z = EpsilonFamily::custom(vec![0.0, 0.0]).unwrap();
        assert_eq!(z.epsilon(2).unwrap(), 0.0);
    }

    #[test]
    fn power_law_prefix_strictly_decreasing_positive() {
        let fam = EpsilonFamily::power_law(1.5).unwrap();
        let mut prev = f64::INFINITY;
        for n in 1..=200 {
            let e = fam.epsilon(n).unwrap();
            assert!(e > 0.0 && e < prev);
            prev = e;
        }
    }

    #[test]
    fn geometric_epsilon_values() {
        let fam = EpsilonFamily::geometric(0.5, 2.0).unwrap();
        assert_eq!(fam.epsilon(1).unwrap(), 2.0);
        assert_eq!(fam.epsilon(3).unwrap(), 0.5);
    }

    #[test]
    fn generation_sizes_and_totals() {
        let g = TreeGeometry::new(2, 3).unwrap();
        assert_eq!(g.generation_size(0), 1);
        assert_eq!(g.generation_size(1), 3);
        assert_eq!(g.generation_size(2), 6);
        assert_eq!(g.generation_size(3), 12);
        assert_eq!(g.total_vertices(), 22);
        assert_eq!(TreeGeometry::new(2, 1).unwrap().total_vertices(), 4);
        assert_eq!(TreeGeometry::new(2, 2).unwrap().total_vertices(), 10);
    }

    #[test]
    fn closed_form_matches_generation_sum() {
        for d in 2..=5u32 {
            for depth in 1..=6u32 {
                let g = TreeGeometry::new(d, depth).unwrap();
                let by_sum: u64 = (0..=depth).map(|k| g.generation_size(k)).sum();
                assert_eq!(g.total_vertices(), by_sum, "d={d} depth={depth}");
            }
        }
    }

    #[test]
    fn parent_structure_has_correct_degrees() {
        let g = TreeGeometry::new(2, 3).unwrap();
        let parents = g.parents();
        let total = g.total_vertices() as usize;
        let mut child_count = vec![0usize; total];
        for v in 1..total {
            child_count[parents[v]] += 1;
            assert_eq!(g.generation_of(parents[v] as u64) + 1, g.generation_of(v as u64));
        }
        assert_eq!(child_count[0], 3, "root has d+1 children");
        for v in 1..total {
            let gen = g.generation_of(v as u64);
            if gen < g.depth() {
                assert_eq!(child_count[v], 2, "interior vertex {v} has d children");
            } else {
                assert_eq!(child_count[v], 0, "leaf {v} has no children");
            }
        }
    }
}
