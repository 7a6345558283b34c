//! 2D triangulations with oriented facets and optional curved boundary edges.
//!
//! Conventions used throughout the crate:
//!
//! - Triangles are positively oriented (counterclockwise vertex order).
//! - Local edge `e` of a triangle is the edge opposite local vertex `e`,
//!   traversed in counterclockwise order: edge 0 runs `v1 -> v2`, edge 1
//!   runs `v2 -> v0`, edge 2 runs `v0 -> v1`.
//! - Every facet stores its vertices in the traversal direction of the
//!   **first** adjacent element, so the fixed facet normal `N_F` (right-hand
//!   normal of that direction) is the outward normal of the first element
//!   and the outward normal of the domain on the boundary.
//! - The per-element facet sign `s_T` is `+1` for the first adjacent
//!   element and `-1` for the second; `[[u . N]] = sum_T s_T u|_T . N_F`.
//!
//! Curved boundary edges are quadratic: one control point per edge, placed
//! on the exact boundary curve. Interior edges are always straight.

mod builders;
mod io;
mod map;
mod refine;

pub use builders::{build_cook_mesh, build_quarter_annulus, build_unit_square};
pub use io::MeshJson;
pub use map::{FacetQuadPoint, GeometryMap, geometry_at};
pub use refine::uniform_refine;

use nalgebra::{Matrix2, Vector2};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("facet ({0}, {1}) shared by more than two triangles")]
    NonManifold(usize, usize),
    #[error("triangle {0} has non-positive orientation (det = {1})")]
    NegativeJacobian(usize, f64),
    #[error("degenerate geometry in element {element}: det G = {det} at a requested point")]
    DegenerateMap { element: usize, det: f64 },
    #[error("unknown boundary marker `{0}`")]
    UnknownMarker(String),
    #[error("mesh i/o: {0}")]
    Io(String),
}

/// Rotate a vector by +90 degrees (counterclockwise).
pub fn rot90(v: Vector2<f64>) -> Vector2<f64> {
    Vector2::new(-v.y, v.x)
}

/// An oriented mesh edge with its fixed frame.
#[derive(Debug, Clone)]
pub struct Facet {
    /// Vertex indices in the traversal direction of the first adjacent element.
    pub verts: [usize; 2],
    /// Adjacent elements; `elems[1]` is `None` on the boundary.
    pub elems: [Option<usize>; 2],
    /// Fixed unit normal of the straight chord (outward for the first element).
    pub normal: Vector2<f64>,
    /// Fixed unit tangent, `t_F = rot90(N_F)`, pointing along `verts[0] -> verts[1]`.
    pub tangent: Vector2<f64>,
    /// Boundary marker index into `Triangulation::marker_names`.
    pub marker: Option<usize>,
}

impl Facet {
    pub fn is_boundary(&self) -> bool {
        self.elems[1].is_none()
    }
}

/// Reference from a triangle's local edge to its global facet.
#[derive(Debug, Clone, Copy)]
pub struct FacetRef {
    pub facet: usize,
    /// +1 if this element is the first adjacent one (its outward normal is `N_F`).
    pub sign: f64,
}

/// Exact boundary curve attached to a marker, used to re-project curved
/// control points under refinement.
#[derive(Debug, Clone, Copy)]
pub enum BoundaryCurve {
    Circle { center: Vector2<f64>, radius: f64 },
}

impl BoundaryCurve {
    pub fn project(&self, x: Vector2<f64>) -> Vector2<f64> {
        match *self {
            BoundaryCurve::Circle { center, radius } => {
                let d = x - center;
                let n = d.norm();
                if n == 0.0 { x } else { center + d * (radius / n) }
            }
        }
    }
}

/// A conforming triangulation of a planar domain (coordinates in mm).
#[derive(Debug, Clone, Default)]
pub struct Triangulation {
    pub vertices: Vec<Vector2<f64>>,
    /// Positively oriented vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub facets: Vec<Facet>,
    /// Per triangle: facet reference for each local edge (0, 1, 2).
    pub tri_facets: Vec<[FacetRef; 3]>,
    pub marker_names: Vec<String>,
    /// facet id -> quadratic control point (only curved boundary edges).
    pub curved_edges: HashMap<usize, Vector2<f64>>,
    /// Exact curves per marker, consulted when refining curved edges.
    pub curves: Vec<(usize, BoundaryCurve)>,
    /// Named mesh vertices (e.g. the Cook membrane corner "A").
    pub named_vertices: HashMap<String, usize>,
}

impl Triangulation {
    /// Assemble facet topology from raw vertices/triangles and boundary
    /// marker assignments (vertex pairs, unordered).
    pub fn build(
        vertices: Vec<Vector2<f64>>,
        triangles: Vec<[usize; 3]>,
        marker_names: Vec<String>,
        marked_edges: Vec<(usize, usize, usize)>, // (v0, v1, marker index)
        curved: Vec<((usize, usize), Vector2<f64>)>,
        curves: Vec<(usize, BoundaryCurve)>,
    ) -> Result<Self, GeometryError> {
        let mut mesh = Triangulation {
            vertices,
            triangles,
            marker_names,
            curves,
            ..Default::default()
        };
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let [a, b, c] = *tri;
            let det = orient_det(mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]);
            if det <= 0.0 {
                return Err(GeometryError::NegativeJacobian(t, det));
            }
        }

        let mut by_key: HashMap<(usize, usize), usize> = HashMap::new();
        let mut tri_facets = Vec::with_capacity(mesh.triangles.len());
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let mut refs = [FacetRef { facet: 0, sign: 1.0 }; 3];
            for e in 0..3 {
                let (a, b) = local_edge(*tri, e);
                let key = (a.min(b), a.max(b));
                match by_key.get(&key) {
                    None => {
                        let dir = mesh.vertices[b] - mesh.vertices[a];
                        let len = dir.norm();
                        let tangent = dir / len;
                        // outward normal of the traversing (first) element
                        let normal = -rot90(tangent);
                        let id = mesh.facets.len();
                        mesh.facets.push(Facet {
                            verts: [a, b],
                            elems: [Some(t), None],
                            normal,
                            tangent,
                            marker: None,
                        });
                        by_key.insert(key, id);
                        refs[e] = FacetRef { facet: id, sign: 1.0 };
                    }
                    Some(&id) => {
                        let f = &mut mesh.facets[id];
                        if f.elems[1].is_some() {
                            return Err(GeometryError::NonManifold(key.0, key.1));
                        }
                        f.elems[1] = Some(t);
                        refs[e] = FacetRef { facet: id, sign: -1.0 };
                    }
                }
            }
            tri_facets.push(refs);
        }
        mesh.tri_facets = tri_facets;

        for (a, b, m) in marked_edges {
            let key = (a.min(b), a.max(b));
            let id = *by_key.get(&key).ok_or_else(|| {
                GeometryError::InvalidInput(format!("marked edge ({a}, {b}) not in mesh"))
            })?;
            mesh.facets[id].marker = Some(m);
        }
        for ((a, b), ctrl) in curved {
            let key = (a.min(b), a.max(b));
            let id = *by_key.get(&key).ok_or_else(|| {
                GeometryError::InvalidInput(format!("curved edge ({a}, {b}) not in mesh"))
            })?;
            mesh.curved_edges.insert(id, ctrl);
        }
        Ok(mesh)
    }

    pub fn n_elements(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn marker_id(&self, name: &str) -> Result<usize, GeometryError> {
        self.marker_names
            .iter()
            .position(|m| m == name)
            .ok_or_else(|| GeometryError::UnknownMarker(name.to_string()))
    }

    /// Facets carrying the given marker name.
    pub fn marked_facets(&self, name: &str) -> Result<Vec<usize>, GeometryError> {
        let id = self.marker_id(name)?;
        Ok(self
            .facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.marker == Some(id))
            .map(|(i, _)| i)
            .collect())
    }

    /// Straight-chord length of a facet.
    pub fn facet_chord_length(&self, facet: usize) -> f64 {
        let [a, b] = self.facets[facet].verts;
        (self.vertices[b] - self.vertices[a]).norm()
    }

    /// Midpoint of the facet chord.
    pub fn facet_midpoint(&self, facet: usize) -> Vector2<f64> {
        let [a, b] = self.facets[facet].verts;
        (self.vertices[a] + self.vertices[b]) * 0.5
    }

    /// Longest edge chord in the mesh.
    pub fn max_edge_length(&self) -> f64 {
        (0..self.n_facets())
            .map(|f| self.facet_chord_length(f))
            .fold(0.0, f64::max)
    }

    /// Fixed frame of a facet: `(N_F, t_F, signs)` with one sign per
    /// adjacent element in adjacency order.
    pub fn facet_frame(&self, facet: usize) -> (Vector2<f64>, Vector2<f64>, Vec<f64>) {
        let f = &self.facets[facet];
        let mut signs = vec![1.0];
        if f.elems[1].is_some() {
            signs.push(-1.0);
        }
        (f.normal, f.tangent, signs)
    }

    /// Local vertex pair (in traversal order) of local edge `e` of triangle `t`.
    pub fn triangle_edge(&self, t: usize, e: usize) -> (usize, usize) {
        local_edge(self.triangles[t], e)
    }

    /// Sum of element areas, by quadrature over `det G` (handles curved elements).
    pub fn total_area(&self) -> f64 {
        let rule = crate::elements::quadrature::triangle_rule(6);
        (0..self.n_elements())
            .map(|t| {
                let map = GeometryMap::new(self, t);
                rule.iter()
                    .map(|(p, w)| w * map.jacobian(*p).1)
                    .sum::<f64>()
            })
            .sum()
    }
}

/// Vertex pair of local edge `e` (opposite vertex `e`), in ccw traversal order.
pub fn local_edge(tri: [usize; 3], e: usize) -> (usize, usize) {
    match e {
        0 => (tri[1], tri[2]),
        1 => (tri[2], tri[0]),
        2 => (tri[0], tri[1]),
        _ => unreachable!("triangle has 3 edges"),
    }
}

fn orient_det(a: Vector2<f64>, b: Vector2<f64>, c: Vector2<f64>) -> f64 {
    Matrix2::from_columns(&[b - a, c - a]).determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Two-triangle unit square used in several tests.
    pub fn unit_square_two() -> Triangulation {
        let verts = vec![
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(1.0, 1.0),
            Vector2::new(0.0, 1.0),
        ];
        let tris = vec![[0, 1, 2], [0, 2, 3]];
        let marked = vec![
            (0, 1, 0),
            (1, 2, 0),
            (2, 3, 0),
            (3, 0, 0),
        ];
        Triangulation::build(verts, tris, vec!["boundary".into()], marked, vec![], vec![]).unwrap()
    }

    #[test]
    fn facet_topology_and_signs() {
        let mesh = unit_square_two();
        assert_eq!(mesh.n_facets(), 5);
        let interior: Vec<_> = mesh
            .facets
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_boundary())
            .collect();
        assert_eq!(interior.len(), 1);
        let (fid, f) = interior[0];
        assert_eq!(f.elems, [Some(0), Some(1)]);
        // facet sign consistency: the two adjacent elements see opposite signs
        let (_, _, signs) = mesh.facet_frame(fid);
        assert_eq!(signs, vec![1.0, -1.0]);
        // boundary facets have a single +1 sign and outward normal
        for (i, f) in mesh.facets.iter().enumerate() {
            if f.is_boundary() {
                let (n, t, signs) = mesh.facet_frame(i);
                assert_eq!(signs, vec![1.0]);
                let mid = mesh.facet_midpoint(i);
                // outward: midpoint + eps*n leaves the unit square
                let probe = mid + n * 1e-3;
                let inside = probe.x >= 0.0 && probe.x <= 1.0 && probe.y >= 0.0 && probe.y <= 1.0;
                assert!(!inside, "normal {n:?} at {mid:?} is not outward");
                assert_relative_eq!(n.dot(&t), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn rejects_flipped_triangle() {
        let verts = vec![
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(0.0, 1.0),
        ];
        let r = Triangulation::build(verts, vec![[0, 2, 1]], vec![], vec![], vec![], vec![]);
        assert!(matches!(r, Err(GeometryError::NegativeJacobian(0, _))));
    }
}
