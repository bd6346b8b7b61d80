//! Uniform grid sampling with singular-locus masking.

use crate::error::{Error, Result};
use crate::families::{FamilySpec, EPS_SING};
use crate::geometry::{crpc_residual, height_jet_from_param, isotropic_curvatures, Point3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node {
    Masked,
    Live {
        point: Point3,
        u: f64,
        v: f64,
        h: f64,
        k: f64,
        /// `H^2/K - (a+1)^2/(4a)`; `None` without a ratio or where `K` vanishes.
        residual: Option<f64>,
    },
}

impl Node {
    pub fn point(&self) -> Option<Point3> {
        match self {
            Node::Live { point, .. } => Some(*point),
            Node::Masked => None,
        }
    }

    pub fn is_live(&self) -> bool {
        matches!(self, Node::Live { .. })
    }
}

/// Row-major `nu x nv` grid: node `(i, j)` sits at index `i * nv + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshGrid {
    pub nu: usize,
    pub nv: usize,
    pub nodes: Vec<Node>,
}

impl MeshGrid {
    pub fn node(&self, i: usize, j: usize) -> &Node {
        &self.nodes[i * self.nv + j]
    }

    /// Cells whose four corners are live, as `(i, j)` of the lower corner.
    pub fn quads(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.nu.saturating_sub(1))
            .flat_map(move |i| (0..self.nv.saturating_sub(1)).map(move |j| (i, j)))
            .filter(move |&(i, j)| {
                self.node(i, j).is_live()
                    && self.node(i + 1, j).is_live()
                    && self.node(i + 1, j + 1).is_live()
                    && self.node(i, j + 1).is_live()
            })
    }

    /// Sequential index of every live node in row-major order.
    pub fn live_indices(&self) -> Vec<Option<usize>> {
        let mut n = 0;
        self.nodes
            .iter()
            .map(|node| {
                node.is_live().then(|| {
                    n += 1;
                    n - 1
                })
            })
            .collect()
    }

    /// Applies `f` to every live point, e.g. to export a dual surface.
    pub fn map_points(&self, f: impl Fn(&Node) -> Result<Point3>) -> Result<MeshGrid> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Masked => Ok(Node::Masked),
                Node::Live { u, v, h, k, residual, .. } => {
                    Ok(Node::Live { point: f(n)?, u: *u, v: *v, h: *h, k: *k, residual: *residual })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MeshGrid { nu: self.nu, nv: self.nv, nodes })
    }
}

/// Samples `spec` on its domain. Nodes closer than `EPS_SING` to a singular
/// locus, and nodes where the chart is undefined or not admissible, are masked.
pub fn sample_grid(spec: &FamilySpec, nu: usize, nv: usize, a: Option<f64>) -> Result<MeshGrid> {
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidGrid { nu, nv });
    }
    if let Some(a) = a {
        if a == 0.0 || !a.is_finite() {
            return Err(Error::InvalidParams(format!("ratio a must be nonzero and finite, got {a}")));
        }
    }
    let d = spec.domain;
    let mut nodes = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let (u, v) = (d.u_at(i, nu), d.v_at(j, nv));
            nodes.push(sample_node(spec, u, v, a));
        }
    }
    if !nodes.iter().any(Node::is_live) {
        return Err(Error::EmptyGrid);
    }
    Ok(MeshGrid { nu, nv, nodes })
}

fn sample_node(spec: &FamilySpec, u: f64, v: f64, a: Option<f64>) -> Node {
    if spec.locus_distance(u, v) < EPS_SING {
        return Node::Masked;
    }
    let Ok(jet) = spec.chart(u, v) else { return Node::Masked };
    let Ok(hj) = height_jet_from_param(&jet) else { return Node::Masked };
    let c = isotropic_curvatures(&hj);
    if !(c.h.is_finite() && c.k.is_finite()) {
        return Node::Masked;
    }
    let residual = a.and_then(|a| crpc_residual(&hj, a).ok());
    Node::Live { point: jet.r, u, v, h: c.h, k: c.k, residual }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MaskStats {
    pub total: usize,
    pub live: usize,
    pub masked: usize,
    pub quads: usize,
    pub max_abs_residual: Option<f64>,
    pub max_abs_h: f64,
    pub max_abs_k: f64,
    pub min_abs_k: f64,
}

pub fn mask_stats(m: &MeshGrid) -> MaskStats {
    let mut s = MaskStats { total: m.nodes.len(), quads: m.quads().count(), ..MaskStats::default() };
    let mut min_k = f64::INFINITY;
    for n in &m.nodes {
        if let Node::Live { h, k, residual, .. } = *n {
            s.live += 1;
            s.max_abs_h = s.max_abs_h.max(h.abs());
            s.max_abs_k = s.max_abs_k.max(k.abs());
            min_k = min_k.min(k.abs());
            if let Some(r) = residual {
                s.max_abs_residual = Some(s.max_abs_residual.unwrap_or(0.0).max(r.abs()));
            }
        }
    }
    s.masked = s.total - s.live;
    s.min_abs_k = if s.live > 0 { min_k } else { 0.0 };
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{Domain, FamilyId};
    use std::f64::consts::PI;

    #[test]
    fn helicoid_grid_is_fully_live() {
        let s = FamilySpec::with_a(FamilyId::Helicoid, -1.0).unwrap().with_domain(Domain::new(0.5, 2.0, 0.0, PI));
        let m = sample_grid(&s, 10, 10, None).unwrap();
        let st = mask_stats(&m);
        assert_eq!((st.live, st.masked, st.quads), (100, 0, 81));
        assert_eq!(st.max_abs_residual, None);
    }

    #[test]
    fn helical_singular_band_is_masked() {
        let s = FamilySpec::with_a(FamilyId::HelicalGeneral, 2.0).unwrap();
        let star = 2f64.sqrt().atan();
        let s = s.with_domain(Domain::new(star - 0.2, star + 0.2, 0.0, 1.0));
        // odd resolution puts a row exactly on the locus
        let m = sample_grid(&s, 21, 5, Some(2.0)).unwrap();
        let st = mask_stats(&m);
        assert_eq!(st.masked, 5);
        assert_eq!(st.quads, 18 * 4);
        for (i, j) in m.quads() {
            for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                assert!(m.node(i + di, j + dj).is_live());
            }
        }
    }

    #[test]
    fn grid_on_the_locus_is_empty() {
        let s = FamilySpec::with_a(FamilyId::TransNonisoNoniso, -1.0).unwrap();
        // u + v = 0 everywhere on a degenerate strip
        let s = s.with_domain(Domain::new(0.3, 0.3, -0.3, -0.3));
        assert_eq!(sample_grid(&s, 3, 3, None), Err(Error::EmptyGrid));
        assert_eq!(sample_grid(&s, 1, 3, None), Err(Error::InvalidGrid { nu: 1, nv: 3 }));
    }

    #[test]
    fn summary_examples() {
        let s = FamilySpec::with_a(FamilyId::TransParaboloid, 2.0).unwrap();
        let st = mask_stats(&sample_grid(&s, 20, 20, Some(2.0)).unwrap());
        assert!(st.max_abs_residual.unwrap() <= 1e-12);

        let s = FamilySpec::with_a(FamilyId::Logarithmoid, -1.0).unwrap();
        assert!(mask_stats(&sample_grid(&s, 20, 20, Some(-1.0)).unwrap()).max_abs_h <= 1e-12);

        let empty = MeshGrid { nu: 2, nv: 2, nodes: vec![Node::Masked; 4] };
        let st = mask_stats(&empty);
        assert_eq!((st.live, st.quads, st.max_abs_residual), (0, 0, None));
    }

    #[test]
    fn reversed_parameters_mirror_the_mask() {
        let s = FamilySpec::with_a(FamilyId::TransIsoNoniso, 2.0).unwrap();
        let d = s.domain;
        let star = (1.0f64 / 3.0).asin();
        let wide = Domain::new(d.u0, d.u1, star - 0.7, star + 0.7);
        let fwd = sample_grid(&s.clone().with_domain(wide), 7, 41, None).unwrap();
        let rev = sample_grid(&s.with_domain(Domain::new(wide.u1, wide.u0, wide.v1, wide.v0)), 7, 41, None).unwrap();
        assert!(fwd.nodes.iter().any(|n| !n.is_live()));
        for i in 0..7 {
            for j in 0..41 {
                assert_eq!(fwd.node(i, j).is_live(), rev.node(6 - i, 40 - j).is_live());
            }
        }
    }
}
