//! Closed, outward-oriented triangle surfaces.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;
use crate::vector::{self, Mat3, Vec3};

/// Relative tolerance for the closed-surface identity `sum(nu * area) = 0`.
pub const CLOSURE_TOLERANCE: f64 = 1e-10;

/// Panels smaller than this fraction of the mean area are rejected.
pub const DEGENERATE_AREA_RATIO: f64 = 1e-14;

/// A validated closed manifold triangle mesh with per-panel data.
///
/// Every edge is shared by exactly two triangles with opposite orientation,
/// and the signed volume is positive, so normals point outward.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    areas: Vec<f64>,
    normals: Vec<Vec3>,
    centroids: Vec<Vec3>,
}

impl SurfaceMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.len() < 4 {
            return Err(Error::InvalidMesh(format!(
                "a closed surface needs at least 4 triangles, got {}",
                triangles.len()
            )));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidMesh("non-finite vertex coordinate".into()));
        }
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} references a missing vertex"
                )));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::InvalidMesh(format!("triangle {t} repeats a vertex")));
            }
        }
        check_manifold(&triangles)?;

        let mut areas = Vec::with_capacity(triangles.len());
        let mut normals = Vec::with_capacity(triangles.len());
        let mut centroids = Vec::with_capacity(triangles.len());
        for tri in &triangles {
            let [a, b, c] = tri.map(|i| vertices[i]);
            let n = vector::cross(vector::sub(b, a), vector::sub(c, a));
            let twice_area = vector::norm(n);
            areas.push(0.5 * twice_area);
            normals.push(if twice_area > 0.0 {
                vector::scale(n, 1.0 / twice_area)
            } else {
                vector::ZERO
            });
            centroids.push(vector::scale(vector::add(vector::add(a, b), c), 1.0 / 3.0));
        }

        let total: f64 = areas.iter().sum();
        let mean = total / areas.len() as f64;
        if let Some((panel, &area)) = areas
            .iter()
            .enumerate()
            .find(|(_, &a)| !(a >= DEGENERATE_AREA_RATIO * mean))
        {
            return Err(Error::DegenerateMesh { panel, area, mean });
        }

        let mesh = Self {
            vertices,
            triangles,
            areas,
            normals,
            centroids,
        };
        if mesh.signed_volume() <= 0.0 {
            return Err(Error::InvalidMesh(
                "signed volume is not positive; faces must wind counter-clockwise seen from outside"
                    .into(),
            ));
        }
        let closure = vector::norm(mesh.normal_area_sum());
        if closure > CLOSURE_TOLERANCE * total {
            return Err(Error::InvalidMesh(format!(
                "surface does not close: |sum nu dA| = {closure:e}"
            )));
        }
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    /// Panel centroids, used as collocation points.
    pub fn centroids(&self) -> &[Vec3] {
        &self.centroids
    }

    pub fn panel_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn normal_area_sum(&self) -> Vec3 {
        self.normals
            .iter()
            .zip(&self.areas)
            .fold(vector::ZERO, |acc, (n, &a)| vector::add(acc, vector::scale(*n, a)))
    }

    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i]);
                vector::dot(a, vector::cross(b, c)) / 6.0
            })
            .sum()
    }

    /// Area-weighted centroid of the surface.
    pub fn surface_centroid(&self) -> Vec3 {
        let s = self
            .centroids
            .iter()
            .zip(&self.areas)
            .fold(vector::ZERO, |acc, (c, &a)| vector::add(acc, vector::scale(*c, a)));
        vector::scale(s, 1.0 / self.total_area())
    }

    /// Largest distance between two vertices.
    pub fn vertex_diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                let d = vector::dot(vector::sub(*a, *b), vector::sub(*a, *b));
                best = best.max(d);
            }
        }
        math::sqrt(best)
    }

    /// Largest distance from `p` to a vertex.
    pub fn bounding_radius(&self, p: Vec3) -> f64 {
        self.vertices
            .iter()
            .map(|v| vector::distance(*v, p))
            .fold(0.0, f64::max)
    }

    /// Longest panel edge.
    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| {
                [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
                    .map(|(a, b)| vector::distance(self.vertices[a], self.vertices[b]))
            })
            .fold(0.0, f64::max)
    }

    /// Generalized winding number of `p`: 1 inside, 0 outside.
    pub fn winding_number(&self, p: Vec3) -> f64 {
        let mut total = 0.0;
        for t in &self.triangles {
            let [a, b, c] = t.map(|i| vector::sub(self.vertices[i], p));
            let (la, lb, lc) = (vector::norm(a), vector::norm(b), vector::norm(c));
            let num = vector::dot(a, vector::cross(b, c));
            let den = la * lb * lc + vector::dot(a, b) * lc + vector::dot(b, c) * la + vector::dot(c, a) * lb;
            total += 2.0 * math::atan2(num, den);
        }
        total / (4.0 * PI)
    }

    pub fn contains(&self, p: Vec3) -> bool {
        self.winding_number(p) > 0.5
    }

    /// Apply `x -> s * M x + t` to every vertex. `M` must have positive determinant.
    pub fn transformed(&self, m: &Mat3, s: f64, t: Vec3) -> Result<Self> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| vector::add(vector::scale(vector::mat_vec(m, *v), s), t))
            .collect();
        Self::new(vertices, self.triangles.clone())
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        self.transformed(&vector::IDENTITY, s, vector::ZERO)
    }

    pub fn translated(&self, t: Vec3) -> Result<Self> {
        self.transformed(&vector::IDENTITY, 1.0, t)
    }

    /// Axis-aligned stretch `x -> diag(axes) x`.
    pub fn stretched(&self, axes: Vec3) -> Result<Self> {
        let m = [[axes[0], 0.0, 0.0], [0.0, axes[1], 0.0], [0.0, 0.0, axes[2]]];
        self.transformed(&m, 1.0, vector::ZERO)
    }

    /// Icosahedron refined `subdivisions` times and projected onto the sphere
    /// of the given radius centred at the origin: `20 * 4^subdivisions` panels.
    pub fn icosphere(radius: f64, subdivisions: u32) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        let (vertices, triangles) = icosphere_unit(subdivisions);
        let vertices = vertices.into_iter().map(|v| vector::scale(v, radius)).collect();
        Self::new(vertices, triangles)
    }
}

fn check_manifold(triangles: &[[usize; 3]]) -> Result<()> {
    // Each directed edge must appear once and its reverse once.
    let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for tri in triangles {
        for (a, b) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
            *directed.entry((a, b)).or_insert(0) += 1;
        }
    }
    for (&(a, b), &count) in &directed {
        if count != 1 {
            return Err(Error::InvalidMesh(format!(
                "edge ({a}, {b}) is used {count} times in the same direction; the surface is non-manifold or inconsistently wound"
            )));
        }
        if !directed.contains_key(&(b, a)) {
            return Err(Error::InvalidMesh(format!(
                "edge ({a}, {b}) has no opposite half-edge; the surface is open"
            )));
        }
    }
    Ok(())
}

fn icosphere_unit(subdivisions: u32) -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let t = (1.0 + math::sqrt(5.0)) / 2.0;
    let mut vertices: Vec<Vec3> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .into_iter()
    .map(vector::normalize)
    .collect();
    let mut faces: Vec<[usize; 3]> = alloc::vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoints: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Vec3>| {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let m = vector::normalize(vector::add(vertices[a], vertices[b]));
                vertices.push(m);
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (vertices, faces)
}
