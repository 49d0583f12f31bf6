//! Cluster of small bodies and the parameters `epsilon` (largest body
//! diameter), `delta` (smallest boundary-to-boundary distance) and `m`.
//!
//! Mesh distances and diameters use the vertex sets; the error is at most one
//! panel diameter.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::greens::Wavenumber;
use crate::math;
use crate::mesh::SurfaceMesh;
use crate::vector::{self, Vec3};

/// Default threshold for the regime check; the constant it stands in for is
/// not known numerically.
pub const DEFAULT_REGIME_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub enum BodyKind {
    AnalyticSphere { radius: f64 },
    /// Surface in local coordinates; it must enclose the local origin.
    Mesh(Arc<SurfaceMesh>),
}

/// One body `D_i`, placed at `center` (the point `z_i`).
#[derive(Debug, Clone, PartialEq)]
pub struct BodyShape {
    pub kind: BodyKind,
    pub center: Vec3,
}

impl BodyShape {
    pub fn sphere(center: Vec3, radius: f64) -> Self {
        Self {
            kind: BodyKind::AnalyticSphere { radius },
            center,
        }
    }

    pub fn mesh(center: Vec3, mesh: Arc<SurfaceMesh>) -> Self {
        Self {
            kind: BodyKind::Mesh(mesh),
            center,
        }
    }

    fn validate(&self, index: usize) -> Result<()> {
        if self.center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidBody {
                index,
                reason: "center is not finite".into(),
            });
        }
        match &self.kind {
            BodyKind::AnalyticSphere { radius } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidBody {
                        index,
                        reason: format!("sphere radius must be positive, got {radius}"),
                    });
                }
            }
            BodyKind::Mesh(mesh) => {
                if !mesh.contains(vector::ZERO) {
                    return Err(Error::InvalidBody {
                        index,
                        reason: "mesh does not contain its local origin".into(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn diameter(&self) -> f64 {
        match &self.kind {
            BodyKind::AnalyticSphere { radius } => 2.0 * radius,
            BodyKind::Mesh(mesh) => mesh.vertex_diameter(),
        }
    }

    /// Radius of a ball about `center` that contains the body.
    pub fn bounding_radius(&self) -> f64 {
        match &self.kind {
            BodyKind::AnalyticSphere { radius } => *radius,
            BodyKind::Mesh(mesh) => mesh.bounding_radius(vector::ZERO),
        }
    }

    fn world_vertices(&self) -> impl Iterator<Item = Vec3> + '_ {
        let verts: &[Vec3] = match &self.kind {
            BodyKind::Mesh(mesh) => mesh.vertices(),
            BodyKind::AnalyticSphere { .. } => &[],
        };
        verts.iter().map(move |v| vector::add(*v, self.center))
    }

    /// Distance from a point to the body surface; negative inside a sphere.
    pub fn distance_to_point(&self, p: Vec3) -> f64 {
        match &self.kind {
            BodyKind::AnalyticSphere { radius } => vector::distance(p, self.center) - radius,
            BodyKind::Mesh(_) => self
                .world_vertices()
                .map(|v| vector::distance(v, p))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Whether `p` lies inside the body.
    pub fn contains(&self, p: Vec3) -> bool {
        match &self.kind {
            BodyKind::AnalyticSphere { radius } => vector::distance(p, self.center) < *radius,
            BodyKind::Mesh(mesh) => mesh.contains(vector::sub(p, self.center)),
        }
    }

    /// Boundary-to-boundary distance. Non-positive means overlap or contact.
    pub fn boundary_distance(&self, other: &BodyShape) -> f64 {
        match (&self.kind, &other.kind) {
            (BodyKind::AnalyticSphere { radius: a }, BodyKind::AnalyticSphere { radius: b }) => {
                vector::distance(self.center, other.center) - (a + b)
            }
            (BodyKind::AnalyticSphere { .. }, BodyKind::Mesh(_)) => other
                .world_vertices()
                .map(|v| self.distance_to_point(v))
                .fold(f64::INFINITY, f64::min),
            (BodyKind::Mesh(_), BodyKind::AnalyticSphere { .. }) => other.boundary_distance(self),
            (BodyKind::Mesh(_), BodyKind::Mesh(_)) => {
                let mut best = f64::INFINITY;
                for a in self.world_vertices() {
                    for b in other.world_vertices() {
                        let d = vector::sub(a, b);
                        best = best.min(vector::dot(d, d));
                    }
                }
                math::sqrt(best)
            }
        }
    }
}

/// Largest body diameter and smallest pairwise boundary distance.
///
/// For a single body `delta` is `+inf`; interaction terms that depend on it
/// then vanish.
pub fn compute_epsilon_delta(bodies: &[BodyShape]) -> Result<(f64, f64)> {
    if bodies.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let epsilon = bodies.iter().map(BodyShape::diameter).fold(0.0, f64::max);
    let (delta, pair) = min_pair_distance(bodies);
    if let Some((first, second)) = pair {
        if !(delta > 0.0) {
            return Err(Error::OverlappingBodies {
                first,
                second,
                distance: delta,
            });
        }
    }
    Ok((epsilon, delta))
}

fn min_pair_distance(bodies: &[BodyShape]) -> (f64, Option<(usize, usize)>) {
    let radii: Vec<f64> = bodies.iter().map(BodyShape::bounding_radius).collect();
    let row = |i: usize| -> (f64, Option<(usize, usize)>) {
        let mut best = (f64::INFINITY, None);
        for j in i + 1..bodies.len() {
            // Cheap lower bound from bounding balls before the exact distance.
            let lower = vector::distance(bodies[i].center, bodies[j].center) - (radii[i] + radii[j]);
            if lower >= best.0 {
                continue;
            }
            let d = bodies[i].boundary_distance(&bodies[j]);
            if d < best.0 {
                best = (d, Some((i, j)));
            }
        }
        best
    };
    // Ties resolve to the lexicographically first pair so the result does not
    // depend on how rows were scheduled.
    let pick = |a: (f64, Option<(usize, usize)>), b: (f64, Option<(usize, usize)>)| {
        let pair = |x: Option<(usize, usize)>| x.unwrap_or((usize::MAX, usize::MAX));
        if a.0 < b.0 || (a.0 == b.0 && pair(a.1) <= pair(b.1)) {
            a
        } else {
            b
        }
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..bodies.len())
            .into_par_iter()
            .map(row)
            .reduce(|| (f64::INFINITY, None), pick)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..bodies.len()).map(row).fold((f64::INFINITY, None), pick)
    }
}

/// Diameter of the ball centred at the bounding-box centre of the bodies that
/// encloses all of them.
pub fn enclosing_diameter(bodies: &[BodyShape]) -> f64 {
    let (lo, hi) = bodies.iter().fold(
        ([f64::INFINITY; 3], [f64::NEG_INFINITY; 3]),
        |(mut lo, mut hi), b| {
            let r = b.bounding_radius();
            for a in 0..3 {
                lo[a] = lo[a].min(b.center[a] - r);
                hi[a] = hi[a].max(b.center[a] + r);
            }
            (lo, hi)
        },
    );
    let mid = vector::scale(vector::add(lo, hi), 0.5);
    2.0 * bodies
        .iter()
        .map(|b| vector::distance(b.center, mid) + b.bounding_radius())
        .fold(0.0, f64::max)
}

/// Validated cluster with its derived parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    bodies: Vec<BodyShape>,
    epsilon: f64,
    delta: f64,
    domain_diameter: f64,
}

impl Cluster {
    pub fn new(bodies: Vec<BodyShape>, domain_diameter: f64) -> Result<Self> {
        if bodies.is_empty() {
            return Err(Error::EmptyCluster);
        }
        for (i, b) in bodies.iter().enumerate() {
            b.validate(i)?;
        }
        let (epsilon, delta) = compute_epsilon_delta(&bodies)?;
        let required = enclosing_diameter(&bodies);
        if !(domain_diameter > 0.0) || required > domain_diameter * (1.0 + 1e-12) {
            return Err(Error::DomainTooSmall {
                domain_diameter,
                required,
            });
        }
        Ok(Self {
            bodies,
            epsilon,
            delta,
            domain_diameter,
        })
    }

    /// Cluster whose domain is the smallest ball checked by [`Cluster::new`].
    pub fn with_enclosing_domain(bodies: Vec<BodyShape>) -> Result<Self> {
        if bodies.is_empty() {
            return Err(Error::EmptyCluster);
        }
        let d = enclosing_diameter(&bodies);
        Self::new(bodies, d)
    }

    pub fn bodies(&self) -> &[BodyShape] {
        &self.bodies
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn domain_diameter(&self) -> f64 {
        self.domain_diameter
    }

    pub fn centers(&self) -> Vec<Vec3> {
        self.bodies.iter().map(|b| b.center).collect()
    }

    /// Distance from `p` to the nearest body surface.
    pub fn distance_to_point(&self, p: Vec3) -> f64 {
        self.bodies
            .iter()
            .map(|b| b.distance_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Smallest `n` with `16 n (n^2 + 3n + 3) >= m`: the number of spherical
/// shells of width `delta` needed to hold `m` bodies around any one of them.
pub fn shell_count(m: usize) -> usize {
    let capacity = |n: usize| 16 * n * (n * n + 3 * n + 3);
    // Start near the cube-root estimate and walk to the exact answer.
    let mut n = (math::cbrt(m as f64 / 16.0) as usize).max(1);
    while n > 1 && capacity(n - 1) >= m {
        n -= 1;
    }
    while capacity(n) < m {
        n += 1;
    }
    n
}

/// Evaluated left-hand side of the regime condition, term by term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    /// `|k|^2 eps`
    pub size_term: f64,
    /// `(1 + |k|^2) mu+ eps^3 / delta^3`
    pub tensor_term: f64,
    /// `(ln(m^{1/3}) / delta^3 + 2|k| m^{1/3} / delta^2 + m^{2/3} |k|^2 / (2 delta)) eps^3`
    pub interaction_term: f64,
    pub value: f64,
    pub threshold: f64,
    pub within_threshold: bool,
}

pub fn validate_regime(cluster: &Cluster, k: Wavenumber, mu_plus: f64, threshold: f64) -> RegimeReport {
    regime_terms(
        cluster.len(),
        cluster.epsilon(),
        cluster.delta(),
        k.abs(),
        mu_plus,
        threshold,
    )
}

pub(crate) fn interaction_sum(m: usize, delta: f64, k_abs: f64) -> f64 {
    if m <= 1 || !delta.is_finite() {
        return 0.0;
    }
    let mf = m as f64;
    let m13 = math::cbrt(mf);
    math::ln(mf) / 3.0 / math::powi(delta, 3)
        + 2.0 * k_abs * m13 / (delta * delta)
        + m13 * m13 * k_abs * k_abs / (2.0 * delta)
}

pub(crate) fn regime_terms(
    m: usize,
    epsilon: f64,
    delta: f64,
    k_abs: f64,
    mu_plus: f64,
    threshold: f64,
) -> RegimeReport {
    let eps3 = math::powi(epsilon, 3);
    let size_term = k_abs * k_abs * epsilon;
    let tensor_term = if delta.is_finite() {
        (1.0 + k_abs * k_abs) * mu_plus * eps3 / math::powi(delta, 3)
    } else {
        0.0
    };
    let interaction_term = interaction_sum(m, delta, k_abs) * eps3;
    let value = size_term + tensor_term + interaction_term;
    RegimeReport {
        size_term,
        tensor_term,
        interaction_term,
        value,
        threshold,
        within_threshold: value < threshold,
    }
}

/// `n^3` bodies on a cubic lattice with the given spacing, centred at the origin.
pub fn cubic_lattice(n: usize, spacing: f64, radius: f64) -> Vec<BodyShape> {
    let offset = 0.5 * (n as f64 - 1.0) * spacing;
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let c = [
                    i as f64 * spacing - offset,
                    j as f64 * spacing - offset,
                    l as f64 * spacing - offset,
                ];
                out.push(BodyShape::sphere(c, radius));
            }
        }
    }
    out
}
