//! Reference-to-physical element maps.
//!
//! Elements are affine unless one of their edges carries a quadratic control
//! point, in which case the map is the 6-node isoparametric quadratic map
//! (straight edges keep their chord midpoints). The reference element is the
//! unit triangle with vertices (0,0), (1,0), (0,1).

use super::{local_edge, GeometryError, Triangulation};
use nalgebra::{Matrix2, Vector2};

/// Reference coordinates of the unit triangle vertices.
pub const REF_VERTS: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

#[derive(Debug, Clone)]
enum MapKind {
    Affine {
        origin: Vector2<f64>,
        g: Matrix2<f64>,
        det: f64,
    },
    Quadratic {
        /// vertices v0, v1, v2 then midnodes of local edges 0, 1, 2
        nodes: [Vector2<f64>; 6],
        /// constant second derivatives d2 Phi_c / dxa dxb, index [c][a][b]
        hess: [[[f64; 2]; 2]; 2],
    },
}

/// Map from the reference triangle onto one physical element.
#[derive(Debug, Clone)]
pub struct GeometryMap {
    pub element: usize,
    kind: MapKind,
}

impl GeometryMap {
    pub fn new(mesh: &Triangulation, t: usize) -> Self {
        let tri = mesh.triangles[t];
        let v = [
            mesh.vertices[tri[0]],
            mesh.vertices[tri[1]],
            mesh.vertices[tri[2]],
        ];
        let mut curved = false;
        let mut mids = [Vector2::zeros(); 3];
        for e in 0..3 {
            let (a, b) = local_edge(tri, e);
            let chord = (mesh.vertices[a] + mesh.vertices[b]) * 0.5;
            let fr = mesh.tri_facets[t][e];
            if let Some(ctrl) = mesh.curved_edges.get(&fr.facet) {
                mids[e] = *ctrl;
                curved = true;
            } else {
                mids[e] = chord;
            }
        }
        if !curved {
            let g = Matrix2::from_columns(&[v[1] - v[0], v[2] - v[0]]);
            GeometryMap {
                element: t,
                kind: MapKind::Affine {
                    origin: v[0],
                    det: g.determinant(),
                    g,
                },
            }
        } else {
            let nodes = [v[0], v[1], v[2], mids[0], mids[1], mids[2]];
            let mut hess = [[[0.0; 2]; 2]; 2];
            for c in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let mut s = 0.0;
                        for (i, n) in nodes.iter().enumerate() {
                            s += n[c] * P2_HESS[i][a][b];
                        }
                        hess[c][a][b] = s;
                    }
                }
            }
            GeometryMap {
                element: t,
                kind: MapKind::Quadratic { nodes, hess },
            }
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.kind, MapKind::Affine { .. })
    }

    /// Physical position of a reference point.
    pub fn position(&self, p: [f64; 2]) -> Vector2<f64> {
        match &self.kind {
            MapKind::Affine { origin, g, .. } => origin + g * Vector2::new(p[0], p[1]),
            MapKind::Quadratic { nodes, .. } => {
                let sh = p2_shape(p);
                let mut x = Vector2::zeros();
                for i in 0..6 {
                    x += nodes[i] * sh[i];
                }
                x
            }
        }
    }

    /// Jacobian `G = Grad Phi` and its determinant at a reference point.
    pub fn jacobian(&self, p: [f64; 2]) -> (Matrix2<f64>, f64) {
        match &self.kind {
            MapKind::Affine { g, det, .. } => (*g, *det),
            MapKind::Quadratic { nodes, .. } => {
                let dsh = p2_shape_grad(p);
                let mut g = Matrix2::zeros();
                for i in 0..6 {
                    for c in 0..2 {
                        for a in 0..2 {
                            g[(c, a)] += nodes[i][c] * dsh[i][a];
                        }
                    }
                }
                (g, g.determinant())
            }
        }
    }

    /// Second derivatives of the map (zero for affine elements).
    pub fn hessian(&self) -> [[[f64; 2]; 2]; 2] {
        match &self.kind {
            MapKind::Affine { .. } => [[[0.0; 2]; 2]; 2],
            MapKind::Quadratic { hess, .. } => *hess,
        }
    }

    /// Quadrature data along the local edge `e`, for a 1D rule on [-1, 1].
    ///
    /// Returns one entry per rule point with the physical position, the
    /// outward unit normal and ccw unit tangent of this element, the arc
    /// weight (physical `ds`), and the local edge coordinate `sigma`.
    pub fn edge_points(&self, e: usize, rule: &[(f64, f64)]) -> Vec<FacetQuadPoint> {
        let (la, lb) = local_edge([0, 1, 2], e);
        let a = Vector2::from_column_slice(&REF_VERTS[la]);
        let b = Vector2::from_column_slice(&REF_VERTS[lb]);
        rule.iter()
            .map(|&(sigma, w)| {
                let ref_pt = a + (b - a) * (0.5 * (sigma + 1.0));
                let p = [ref_pt.x, ref_pt.y];
                let (g, _) = self.jacobian(p);
                // dX/dsigma along the (possibly curved) physical edge
                let dxds = g * ((b - a) * 0.5);
                let arc = dxds.norm();
                let tangent = dxds / arc;
                let normal = Vector2::new(tangent.y, -tangent.x); // outward (ccw element)
                FacetQuadPoint {
                    ref_point: p,
                    position: self.position(p),
                    normal,
                    tangent,
                    weight: w * arc,
                    sigma,
                }
            })
            .collect()
    }
}

/// One quadrature point on an element edge.
#[derive(Debug, Clone, Copy)]
pub struct FacetQuadPoint {
    pub ref_point: [f64; 2],
    pub position: Vector2<f64>,
    /// Outward unit normal of the element at this point.
    pub normal: Vector2<f64>,
    /// Unit tangent in the element's ccw traversal direction.
    pub tangent: Vector2<f64>,
    /// Physical arc measure times the 1D rule weight.
    pub weight: f64,
    /// Local edge coordinate in [-1, 1].
    pub sigma: f64,
}

/// Physical coordinates, Jacobian and determinant at the given reference
/// points; errors if the map degenerates at any of them.
pub fn geometry_at(
    mesh: &Triangulation,
    element: usize,
    ref_points: &[[f64; 2]],
) -> Result<Vec<(Vector2<f64>, Matrix2<f64>, f64)>, GeometryError> {
    let map = GeometryMap::new(mesh, element);
    ref_points
        .iter()
        .map(|&p| {
            let (g, det) = map.jacobian(p);
            if det <= 0.0 {
                return Err(GeometryError::DegenerateMap { element, det });
            }
            Ok((map.position(p), g, det))
        })
        .collect()
}

/// Quadratic Lagrange shape functions on the reference triangle,
/// ordered (v0, v1, v2, m0, m1, m2) with m_e the midnode of local edge e.
fn p2_shape(p: [f64; 2]) -> [f64; 6] {
    let l = [1.0 - p[0] - p[1], p[0], p[1]];
    [
        l[0] * (2.0 * l[0] - 1.0),
        l[1] * (2.0 * l[1] - 1.0),
        l[2] * (2.0 * l[2] - 1.0),
        4.0 * l[1] * l[2],
        4.0 * l[2] * l[0],
        4.0 * l[0] * l[1],
    ]
}

fn p2_shape_grad(p: [f64; 2]) -> [[f64; 2]; 6] {
    let l = [1.0 - p[0] - p[1], p[0], p[1]];
    let dl = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
    let mut out = [[0.0; 2]; 6];
    for a in 0..2 {
        out[0][a] = (4.0 * l[0] - 1.0) * dl[0][a];
        out[1][a] = (4.0 * l[1] - 1.0) * dl[1][a];
        out[2][a] = (4.0 * l[2] - 1.0) * dl[2][a];
        out[3][a] = 4.0 * (dl[1][a] * l[2] + l[1] * dl[2][a]);
        out[4][a] = 4.0 * (dl[2][a] * l[0] + l[2] * dl[0][a]);
        out[5][a] = 4.0 * (dl[0][a] * l[1] + l[0] * dl[1][a]);
    }
    out
}

/// Constant second derivatives of the quadratic shape functions,
/// index [node][a][b].
const P2_HESS: [[[f64; 2]; 2]; 6] = [
    [[4.0, 4.0], [4.0, 4.0]],
    [[4.0, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [0.0, 4.0]],
    [[0.0, 4.0], [4.0, 0.0]],
    [[0.0, -4.0], [-4.0, -8.0]],
    [[-8.0, -4.0], [-4.0, 0.0]],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Triangulation;
    use approx::assert_relative_eq;

    fn single(verts: [[f64; 2]; 3]) -> Triangulation {
        let v = verts.iter().map(|p| Vector2::new(p[0], p[1])).collect();
        Triangulation::build(v, vec![[0, 1, 2]], vec![], vec![], vec![], vec![]).unwrap()
    }

    #[test]
    fn identity_map_on_reference_triangle() {
        let mesh = single(REF_VERTS);
        let pts = [[0.2, 0.3], [0.0, 0.0], [0.5, 0.5]];
        for (x, g, det) in geometry_at(&mesh, 0, &pts).unwrap() {
            assert_relative_eq!(g, Matrix2::identity(), epsilon = 1e-15);
            assert_relative_eq!(det, 1.0);
            let _ = x;
        }
    }

    #[test]
    fn affine_scaling() {
        let mesh = single([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]);
        let (_, g, det) = geometry_at(&mesh, 0, &[[0.25, 0.25]]).unwrap()[0];
        assert_relative_eq!(det, 4.0);
        assert_relative_eq!(g, Matrix2::identity() * 2.0);
        assert_relative_eq!(mesh.total_area(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn quadratic_hessian_matches_finite_differences() {
        // curved edge 0 bulged outward
        let v = vec![
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(0.0, 1.0),
        ];
        let mesh = Triangulation::build(
            v,
            vec![[0, 1, 2]],
            vec!["b".into()],
            vec![(1, 2, 0)],
            vec![((1, 2), Vector2::new(0.6, 0.6))],
            vec![],
        )
        .unwrap();
        let map = GeometryMap::new(&mesh, 0);
        assert!(!map.is_affine());
        let p = [0.3, 0.25];
        let h = 1e-6;
        let hess = map.hessian();
        for a in 0..2 {
            let mut pp = p;
            let mut pm = p;
            pp[a] += h;
            pm[a] -= h;
            let (gp, _) = map.jacobian(pp);
            let (gm, _) = map.jacobian(pm);
            let fd = (gp - gm) / (2.0 * h);
            for c in 0..2 {
                for b in 0..2 {
                    assert_relative_eq!(hess[c][b][a], fd[(c, b)], epsilon = 1e-6);
                }
            }
        }
    }

    #[test]
    fn edge_points_on_straight_edge() {
        let mesh = single([[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]]);
        let map = GeometryMap::new(&mesh, 0);
        let rule = crate::elements::quadrature::edge_rule(3);
        // local edge 2 runs v0 -> v1 along the x axis
        let pts = map.edge_points(2, &rule);
        let total: f64 = pts.iter().map(|q| q.weight).sum();
        assert_relative_eq!(total, 2.0, epsilon = 1e-14);
        for q in &pts {
            assert_relative_eq!(q.normal, Vector2::new(0.0, -1.0), epsilon = 1e-14);
            assert_relative_eq!(q.tangent, Vector2::new(1.0, 0.0), epsilon = 1e-14);
            assert_relative_eq!(q.position.y, 0.0, epsilon = 1e-15);
        }
    }
}
