//! Ground-truth engine: exhaustive enumeration of finite-volume Gibbs
//! measures on small Cayley-tree volumes, independent of the recursion path.
//!
//! Weights follow `exp{ beta J sum_edges s_x s_y + sum_k h_k sum_{W_k} s_x
//! + b sum_{W_depth} s_x + h_root s_root }`; the generation fields and the
//! boundary field enter without a factor of beta, matching the recursion's
//! units. All accumulation is done in log space.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ModelParams, TreeGeometry};
use crate::recursion::kernel;

/// Largest volume enumerated exhaustively (2^24 configurations).
pub const VERTEX_CAP: u64 = 24;

/// Fixed chunk length for the parallel sweep; constant so the reduction
/// order (and therefore every bit of the result) is independent of the
/// worker count.
const CHUNK: usize = 1 << 14;

/// Exact finite-volume table: one log-weight per spin configuration.
///
/// Configurations are bitmasks over vertex indices (bit set = spin up), with
/// vertices laid out generation by generation, root first.
#[derive(Clone, Debug)]
pub struct FiniteGibbsTable {
    pub geometry: TreeGeometry,
    pub params: ModelParams,
    /// Generation fields `h_1 ..= h_{depth-1}`.
    pub fields: Vec<f64>,
    /// Boundary field applied at generation `depth`.
    pub boundary: f64,
    pub root_field: f64,
    log_weights: Vec<f64>,
    log_z: f64,
}

impl FiniteGibbsTable {
    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    pub fn configurations(&self) -> usize {
        self.log_weights.len()
    }

    pub fn log_weight(&self, config: usize) -> f64 {
        self.log_weights[config]
    }

    pub fn probability(&self, config: usize) -> f64 {
        (self.log_weights[config] - self.log_z).exp()
    }

    /// `<s_v>`.
    pub fn magnetization(&self, vertex: usize) -> f64 {
        let mut m = 0.0;
        for (c, lw) in self.log_weights.iter().enumerate() {
            let spin = if c >> vertex & 1 == 1 { 1.0 } else { -1.0 };
            m += spin * (lw - self.log_z).exp();
        }
        m
    }

    /// Joint marginal of two spins; `[a_down/up][b_down/up]` with index 1 = up.
    pub fn pair_marginal(&self, a: usize, b: usize) -> [[f64; 2]; 2] {
        let mut out = [[0.0; 2]; 2];
        for (c, lw) in self.log_weights.iter().enumerate() {
            out[c >> a & 1][c >> b & 1] += (lw - self.log_z).exp();
        }
        out
    }

    /// Distribution over the inner volume after summing out the last
    /// generation: entry `sigma` is `sum_omega mu(sigma v omega)`.
    pub fn marginal_over_last_generation(&self) -> Vec<f64> {
        let inner_vertices =
            (self.geometry.total_vertices() - self.geometry.generation_size(self.geometry.depth()))
                as usize;
        let mask = (1usize << inner_vertices) - 1;
        let mut out = vec![0.0; 1 << inner_vertices];
        for (c, lw) in self.log_weights.iter().enumerate() {
            out[c & mask] += (lw - self.log_z).exp();
        }
        out
    }
}

/// Exhaustively enumerate the finite-volume measure.
///
/// `fields` must hold `h_1 ..= h_{depth-1}`; the boundary field acts on the
/// last generation and `root_field` on the root.
pub fn enumerate(
    geometry: &TreeGeometry,
    params: &ModelParams,
    fields: &[f64],
    boundary: f64,
    root_field: f64,
) -> Result<FiniteGibbsTable> {
    let total = geometry.total_vertices();
    if total > VERTEX_CAP {
        return Err(Error::Size(format!(
            "volume has {total} vertices; exhaustive enumeration is capped at {VERTEX_CAP}"
        )));
    }
    if fields.len() != geometry.depth() as usize - 1 {
        return Err(Error::Domain(format!(
            "expected {} generation fields for depth {}, got {}",
            geometry.depth() - 1,
            geometry.depth(),
            fields.len()
        )));
    }
    let total = total as usize;

    let mut vertex_field = vec![0.0f64; total];
    vertex_field[0] = root_field;
    for v in 1..total {
        let gen = geometry.generation_of(v as u64);
        vertex_field[v] = if gen == geometry.depth() {
            boundary
        } else {
            fields[gen as usize - 1]
        };
    }
    let field_total: f64 = vertex_field.iter().sum();

    // per-byte lookup: sum of fields over set bits of each byte lane
    let lanes = total.div_ceil(8);
    let mut lane_tables = vec![[0.0f64; 256]; lanes];
    for (lane, table) in lane_tables.iter_mut().enumerate() {
        for byte in 0..256usize {
            let mut acc = 0.0;
            for bit in 0..8 {
                let v = lane * 8 + bit;
                if v < total && byte >> bit & 1 == 1 {
                    acc += vertex_field[v];
                }
            }
            table[byte] = acc;
        }
    }

    let edges = geometry.edges();
    let n_edges = edges.len() as f64;
    let bj = params.beta() * params.coupling();

    let mut log_weights = vec![0.0f64; 1usize << total];
    let partials: Vec<(f64, f64)> = log_weights
        .par_chunks_mut(CHUNK)
        .enumerate()
        .map(|(chunk_idx, chunk)| {
            let base = chunk_idx * CHUNK;
            let mut chunk_max = f64::NEG_INFINITY;
            for (i, slot) in chunk.iter_mut().enumerate() {
                let c = base + i;
                let mut disagreements = 0usize;
                for &(p, v) in &edges {
                    disagreements += (c >> p ^ c >> v) & 1;
                }
                let edge_sum = n_edges - 2.0 * disagreements as f64;
                let mut up_fields = 0.0;
                for (lane, table) in lane_tables.iter().enumerate() {
                    up_fields += table[c >> (8 * lane) & 0xff];
                }
                let field_sum = 2.0 * up_fields - field_total;
                let lw = bj * edge_sum + field_sum;
                *slot = lw;
                if lw > chunk_max {
                    chunk_max = lw;
                }
            }
            let sum_exp: f64 = chunk.iter().map(|&lw| (lw - chunk_max).exp()).sum();
            (chunk_max, sum_exp)
        })
        .collect();

    // ordered log-sum-exp merge of the chunk partials
    let global_max = partials.iter().fold(f64::NEG_INFINITY, |acc, &(m, _)| acc.max(m));
    let mut total_exp = 0.0;
    for &(m, s) in &partials {
        total_exp += s * (m - global_max).exp();
    }
    let log_z = global_max + total_exp.ln();

    Ok(FiniteGibbsTable {
        geometry: *geometry,
        params: *params,
        fields: fields.to_vec(),
        boundary,
        root_field,
        log_weights,
        log_z,
    })
}

/// Outcome of one compatibility check at depth `n`.
#[derive(Clone, Copy, Debug)]
pub struct CompatibilityReport {
    pub depth: u32,
    pub boundary: f64,
    /// `b_{n-1} = h_{n-1} + d F(b_n, theta)` handed to the inner volume.
    pub derived_boundary: f64,
    /// `max_sigma | sum_omega mu_n(sigma v omega) - mu_{n-1}(sigma) |`.
    pub max_residual: f64,
}

/// Marginalize the depth-`n` measure over its last generation and compare,
/// configuration by configuration, against the depth-`n-1` measure built with
/// the recursion boundary value.
pub fn verify_compatibility(
    geometry: &TreeGeometry,
    params: &ModelParams,
    fields: &[f64],
    boundary: f64,
    root_field: f64,
) -> Result<CompatibilityReport> {
    let depth = geometry.depth();
    if depth < 2 {
        return Err(Error::Domain("compatibility check needs depth >= 2".into()));
    }
    if fields.len() != depth as usize - 1 {
        return Err(Error::Domain(format!(
            "expected {} generation fields for depth {depth}, got {}",
            depth - 1,
            fields.len()
        )));
    }

    let outer = enumerate(geometry, params, fields, boundary, root_field)?;
    let derived_boundary =
        fields[depth as usize - 2] + params.d_f64() * kernel(boundary, params.theta());
    let inner_geometry = TreeGeometry::new(geometry.d(), depth - 1)?;
    let inner = enumerate(
        &inner_geometry,
        params,
        &fields[..depth as usize - 2],
        derived_boundary,
        root_field,
    )?;

    let marginal = outer.marginal_over_last_generation();
    assert_eq!(marginal.len(), inner.configurations());
    let mut max_residual: f64 = 0.0;
    for (c, &m) in marginal.iter().enumerate() {
        max_residual = max_residual.max((m - inner.probability(c)).abs());
    }

    Ok(CompatibilityReport { depth, boundary, derived_boundary, max_residual })
}

/// Root magnetization by exhaustive enumeration (vertex cap applies).
pub fn root_magnetization(
    geometry: &TreeGeometry,
    params: &ModelParams,
    fields: &[f64],
    boundary: f64,
    root_field: f64,
) -> Result<f64> {
    Ok(enumerate(geometry, params, fields, boundary, root_field)?.magnetization(0))
}

/// Root magnetization through the recursion: run the boundary field up to
/// generation 1, then close the root's `d + 1` branches:
/// `m = tanh(h_root + (d+1) F(b_1, theta))`. No size cap.
pub fn root_magnetization_recursion(
    params: &ModelParams,
    fields: &[f64],
    boundary: f64,
    root_field: f64,
) -> f64 {
    let theta = params.theta();
    let mut b = boundary;
    for &h in fields.iter().rev() {
        b = h + params.d_f64() * kernel(b, theta);
    }
    (root_field + (params.d_f64() + 1.0) * kernel(b, theta)).tanh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criticality::{critical_field, critical_pair};
    use crate::model::{EpsilonFamily, FieldProfile};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn params(d: u32, beta: f64) -> ModelParams {
        ModelParams::new(d, 1.0, beta).unwrap()
    }

    #[test]
    fn zero_fields_give_zero_root_magnetization() {
        let g = TreeGeometry::new(2, 1).unwrap();
        let p = params(2, 1.0);
        let m = root_magnetization(&g, &p, &[], 0.0, 0.0).unwrap();
        assert!(m.abs() < 1e-14, "spin-flip symmetry forces m = 0, got {m}");
    }

    #[test]
    fn large_boundary_matches_recursion_formula() {
        let g = TreeGeometry::new(2, 1).unwrap();
        let p = params(2, 1.0);
        let m_enum = root_magnetization(&g, &p, &[], 30.0, 0.0).unwrap();
        let m_rec = root_magnetization_recursion(&p, &[], 30.0, 0.0);
        assert!((m_enum - m_rec).abs() < 1e-9);
        // b = 30 is effectively a plus boundary condition:
        // m ~ tanh(3 arctanh(theta)) with theta = tanh(1)
        let expected = (3.0 * p.theta().atanh()).tanh();
        assert!((m_enum - expected).abs() < 1e-9);
    }

    #[test]
    fn depth_one_root_field_only() {
        let g = TreeGeometry::new(2, 1).unwrap();
        let p = params(2, 1.0);
        let m = root_magnetization(&g, &p, &[], 0.0, 0.5).unwrap();
        assert!((m - 0.5f64.tanh()).abs() < 1e-12, "F(0) = 0 leaves tanh(h_root)");
    }

    #[test]
    fn random_tables_normalize() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let depth = rng.random_range(1..=2u32);
            let d = rng.random_range(2..=3u32);
            let g = TreeGeometry::new(d, depth).unwrap();
            let p = params(d, rng.random_range(0.2..1.5));
            let fields: Vec<f64> =
                (1..depth).map(|_| rng.random_range(-1.0..1.0)).collect();
            let boundary = rng.random_range(-2.0..2.0);
            let root = rng.random_range(-1.0..1.0);
            let table = enumerate(&g, &p, &fields, boundary, root).unwrap();
            assert!(table.log_z().is_finite());
            let total: f64 = (0..table.configurations()).map(|c| table.probability(c)).sum();
            assert!((total - 1.0).abs() < 1e-12, "probabilities sum to {total}");
        }
    }

    #[test]
    fn spin_flip_covariance() {
        let g = TreeGeometry::new(2, 2).unwrap();
        let p = params(2, 0.7);
        let fields = [0.3];
        let boundary = -0.8;
        let root = 0.2;
        let plus = enumerate(&g, &p, &fields, boundary, root).unwrap();
        let minus = enumerate(&g, &p, &[-0.3], -boundary, -root).unwrap();
        let all = plus.configurations();
        for c in 0..all {
            let flipped = !c & (all - 1);
            assert!(
                (plus.log_weight(c) - minus.log_weight(flipped)).abs() < 1e-12,
                "weight(sigma; h) = weight(-sigma; -h)"
            );
        }
    }

    #[test]
    fn enumeration_respects_vertex_cap() {
        // d = 3, depth 3 has 53 vertices
        let g = TreeGeometry::new(3, 3).unwrap();
        let p = params(3, 0.5);
        assert!(matches!(
            enumerate(&g, &p, &[0.0, 0.0], 0.0, 0.0),
            Err(Error::Size(_))
        ));
        assert!(matches!(
            verify_compatibility(&g, &p, &[0.0, 0.0], 0.0, 0.0),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn compatibility_symmetric_case() {
        let g = TreeGeometry::new(2, 2).unwrap();
        let p = params(2, 0.6);
        let report = verify_compatibility(&g, &p, &[0.0], 0.0, 0.0).unwrap();
        assert!(report.derived_boundary.abs() < 1e-15);
        assert!(report.max_residual <= 1e-12);
    }

    #[test]
    fn compatibility_generic_case() {
        let g = TreeGeometry::new(2, 2).unwrap();
        let p = params(2, 0.6);
        let report = verify_compatibility(&g, &p, &[0.0], 0.7, 0.0).unwrap();
        assert!(report.max_residual <= 1e-11, "residual {}", report.max_residual);
    }

    #[test]
    fn compatibility_check_is_sensitive() {
        // a deliberately wrong inner boundary must blow the residual past 1e-4
        let g = TreeGeometry::new(2, 2).unwrap();
        let p = params(2, 0.6);
        let outer = enumerate(&g, &p, &[0.0], 0.7, 0.0).unwrap();
        let wrong = 0.0 + p.d_f64() * kernel(0.7, p.theta()) + 0.01;
        let inner_geometry = TreeGeometry::new(2, 1).unwrap();
        let inner = enumerate(&inner_geometry, &p, &[], wrong, 0.0).unwrap();
        let marginal = outer.marginal_over_last_generation();
        let mut max_residual: f64 = 0.0;
        for (c, &m) in marginal.iter().enumerate() {
            max_residual = max_residual.max((m - inner.probability(c)).abs());
        }
        assert!(max_residual > 1e-4, "perturbed boundary went undetected: {max_residual}");
    }

    #[test]
    fn perturbed_profile_magnetization_consistency() {
        // depth 3, d = 2, critical-minus-perturbation prefix, boundary at b+
        let p = ModelParams::from_theta(2, 1.0, 0.8).unwrap();
        let g = TreeGeometry::new(2, 3).unwrap();
        let profile = FieldProfile::CriticalMinusPerturbation(
            EpsilonFamily::power_law(2.0).unwrap(),
        );
        let fields = profile.prefix(&p, 2).unwrap();
        let (_, b_plus) = critical_pair(&p).unwrap();
        let m_enum = root_magnetization(&g, &p, &fields, b_plus, 0.0).unwrap();
        let m_rec = root_magnetization_recursion(&p, &fields, b_plus, 0.0);
        assert!((m_enum - m_rec).abs() < 1e-10, "{m_enum} vs {m_rec}");
    }

    #[test]
    fn recursion_and_enumeration_agree_on_random_cases() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..10 {
            let g = TreeGeometry::new(2, 2).unwrap();
            let p = params(2, rng.random_range(0.3..1.2));
            let fields = [rng.random_range(-0.8..0.8)];
            let boundary = rng.random_range(-1.5..1.5);
            let root = rng.random_range(-0.5..0.5);
            let m_enum = root_magnetization(&g, &p, &fields, boundary, root).unwrap();
            let m_rec = root_magnetization_recursion(&p, &fields, boundary, root);
            assert!((m_enum - m_rec).abs() < 1e-10);
        }
    }

    #[test]
    fn field_increase_raises_root_magnetization() {
        // ferromagnetic positive association, checked exhaustively
        let g = TreeGeometry::new(2, 2).unwrap();
        let p = params(2, 0.8);
        let base = root_magnetization(&g, &p, &[0.1], -0.2, 0.05).unwrap();
        let bump_h1 = root_magnetization(&g, &p, &[0.2], -0.2, 0.05).unwrap();
        let bump_b = root_magnetization(&g, &p, &[0.1], -0.1, 0.05).unwrap();
        let bump_root = root_magnetization(&g, &p, &[0.1], -0.2, 0.15).unwrap();
        assert!(bump_h1 >= base);
        assert!(bump_b >= base);
        assert!(bump_root >= base);
    }

    #[test]
    fn conditional_extraction_recovers_boundary_fields() {
        // P(s_x | s_parent) ~ exp(s_x (b_k + beta J s_parent)) once the
        // subtree below x is traced out, so
        // b_k = (log-odds(+|parent up) + log-odds(+|parent down)) / 4.
        let p = ModelParams::from_theta(2, 1.0, 0.8).unwrap();
        let g = TreeGeometry::new(2, 3).unwrap();
        let hc = critical_field(&p).unwrap();
        let fields = [-hc - 1.0, -hc - 0.25];
        let boundary = 0.9;
        let table = enumerate(&g, &p, &fields, boundary, 0.0).unwrap();
        let parents = g.parents();

        let theta = p.theta();
        let b2 = fields[1] + p.d_f64() * kernel(boundary, theta);
        let b1 = fields[0] + p.d_f64() * kernel(b2, theta);

        let extract = |vertex: usize| -> f64 {
            let joint = table.pair_marginal(vertex, parents[vertex]);
            let lo_up = (joint[1][1] / joint[0][1]).ln();
            let lo_down = (joint[1][0] / joint[0][0]).ln();
            0.25 * (lo_up + lo_down)
        };

        // generation-1 vertex (index 1), generation-2 vertex (index 4)
        assert!((extract(1) - b1).abs() < 1e-10, "{} vs {b1}", extract(1));
        assert!((extract(4) - b2).abs() < 1e-10, "{} vs {b2}", extract(4));
    }

    #[test]
    fn boundary_monotonicity() {
        let g = TreeGeometry::new(2, 2).unwrap();
        let p = params(2, 0.9);
        let mut prev = -1.0;
        for b in [-2.0, -0.5, 0.0, 0.5, 2.0] {
            let m = root_magnetization(&g, &p, &[0.0], b, 0.0).unwrap();
            assert!(m > prev, "m must increase with the boundary field");
            prev = m;
        }
    }
}
