//! Oriented cell complexes: vertices, directed edges, faces with signed
//! boundaries, the face-edge incidence matrix and its square augmentation.
//!
//! Edges always point along positive axis directions; square-face
//! boundaries carry the sign pattern (+1, +1, -1, -1) in (bottom, right,
//! top, left) order. Merges compose deterministically on top of this global
//! convention.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratmat::{Rat, RatMatrix};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    /// Axis direction for hypercubic edges; None for ad-hoc complexes.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub axis: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceKind {
    Square,
    Auxiliary,
    MergedComposite,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Face {
    /// Signed boundary: (edge id, chi) with chi in {+1, -1}. An edge appears
    /// at most once after cancellation.
    pub boundary: Vec<(EdgeId, i8)>,
    pub kind: FaceKind,
    /// Axis pair for square faces of a hypercubic complex.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub axes: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellComplex {
    pub dimension: usize,
    pub extents: Vec<usize>,
    pub periodic: Vec<bool>,
    pub n_vertices: usize,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    #[serde(skip)]
    edge_lookup: HashMap<(VertexId, usize), EdgeId>,
    #[serde(skip)]
    face_lookup: HashMap<(VertexId, usize, usize), FaceId>,
}

impl CellComplex {
    /// D-dimensional hypercubic complex with all unit square faces.
    pub fn hypercubic(dimension: usize, extents: &[usize], periodic: &[bool]) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::invalid(format!(
                "dimension {dimension} < 2 is rejected"
            )));
        }
        if extents.len() != dimension || periodic.len() != dimension {
            return Err(Error::invalid("extents/periodic length must equal dimension"));
        }
        for (ax, (&ext, &per)) in extents.iter().zip(periodic).enumerate() {
            if ext < 1 {
                return Err(Error::invalid(format!("axis {ax} has extent {ext} < 1")));
            }
            if per && ext < 2 {
                return Err(Error::invalid(format!(
                    "periodic axis {ax} with extent {ext} < 2 would double edges"
                )));
            }
        }
        let n_vertices: usize = extents.iter().product();
        let strides = strides_of(extents);
        let mut edges = Vec::new();
        let mut edge_lookup = HashMap::new();
        for v in 0..n_vertices {
            let coords = coords_of(v, extents, &strides);
            for ax in 0..dimension {
                if let Some(head) = neighbor_index(&coords, ax, extents, periodic, &strides) {
                    let id = edges.len();
                    edges.push(Edge {
                        tail: v,
                        head,
                        axis: Some(ax),
                    });
                    edge_lookup.insert((v, ax), id);
                }
            }
        }
        let mut faces = Vec::new();
        let mut face_lookup = HashMap::new();
        for v in 0..n_vertices {
            let coords = coords_of(v, extents, &strides);
            for a in 0..dimension {
                for b in (a + 1)..dimension {
                    let va = neighbor_index(&coords, a, extents, periodic, &strides);
                    let vb = neighbor_index(&coords, b, extents, periodic, &strides);
                    let (Some(va), Some(vb)) = (va, vb) else {
                        continue;
                    };
                    let e1 = edge_lookup[&(v, a)];
                    let e2 = edge_lookup[&(va, b)];
                    let e3 = edge_lookup[&(vb, a)];
                    let e4 = edge_lookup[&(v, b)];
                    face_lookup.insert((v, a, b), faces.len());
                    faces.push(Face {
                        boundary: vec![(e1, 1), (e2, 1), (e3, -1), (e4, -1)],
                        kind: FaceKind::Square,
                        axes: Some((a, b)),
                    });
                }
            }
        }
        Ok(CellComplex {
            dimension,
            extents: extents.to_vec(),
            periodic: periodic.to_vec(),
            n_vertices,
            edges,
            faces,
            edge_lookup,
            face_lookup,
        })
    }

    /// Ad-hoc complex from explicit edges and signed face boundaries.
    pub fn custom(
        n_vertices: usize,
        edges: Vec<(VertexId, VertexId)>,
        faces: Vec<(Vec<(EdgeId, i8)>, FaceKind)>,
    ) -> Result<Self> {
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(tail, head)| Edge {
                tail,
                head,
                axis: None,
            })
            .collect();
        for e in &edges {
            if e.tail >= n_vertices || e.head >= n_vertices {
                return Err(Error::invalid("edge endpoint out of range"));
            }
        }
        let mut out = Vec::new();
        for (boundary, kind) in faces {
            validate_boundary(&boundary, &edges, kind)?;
            out.push(Face {
                boundary,
                kind,
                axes: None,
            });
        }
        Ok(CellComplex {
            dimension: 0,
            extents: Vec::new(),
            periodic: Vec::new(),
            n_vertices,
            edges: edges.clone(),
            faces: out,
            edge_lookup: HashMap::new(),
            face_lookup: HashMap::new(),
        })
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_index(&self, coords: &[usize]) -> VertexId {
        let strides = strides_of(&self.extents);
        coords.iter().zip(&strides).map(|(c, s)| c * s).sum()
    }

    pub fn vertex_coords(&self, v: VertexId) -> Vec<usize> {
        let strides = strides_of(&self.extents);
        coords_of(v, &self.extents, &strides)
    }

    /// Edge leaving `v` along `axis`, if it exists.
    pub fn edge_at(&self, v: VertexId, axis: usize) -> Option<EdgeId> {
        self.edge_lookup.get(&(v, axis)).copied()
    }

    /// Square face with anchor vertex `v` in the (a, b) plane, a < b.
    pub fn face_at(&self, v: VertexId, a: usize, b: usize) -> Option<FaceId> {
        self.face_lookup.get(&(v, a, b)).copied()
    }

    /// (tail vertex, axis) of a hypercubic edge.
    pub fn edge_vertex_axis(&self, e: EdgeId) -> Option<(VertexId, usize)> {
        let edge = self.edges.get(e)?;
        edge.axis.map(|ax| (edge.tail, ax))
    }

    /// Append a face (used by merge composition and auxiliary rows).
    pub fn push_face(&mut self, boundary: Vec<(EdgeId, i8)>, kind: FaceKind) -> Result<FaceId> {
        validate_boundary(&boundary, &self.edges, kind)?;
        self.faces.push(Face {
            boundary,
            kind,
            axes: None,
        });
        Ok(self.faces.len() - 1)
    }

    /// The face variable Theta_f = sum over the boundary of chi_e theta_e
    /// (not reduced to a window; it is a sum of angles).
    pub fn face_angle(&self, f: FaceId, config: &EdgeConfig) -> f64 {
        self.faces[f]
            .boundary
            .iter()
            .map(|&(e, s)| s as f64 * config.angle(e))
            .sum()
    }

    /// Rebuild the (vertex, axis) -> edge lookup after deserialization.
    pub fn rebuild_lookup(&mut self) {
        if self.dimension == 0 {
            return;
        }
        let strides = strides_of(&self.extents);
        let mut lookup = HashMap::new();
        let mut next = 0usize;
        for v in 0..self.n_vertices {
            let coords = coords_of(v, &self.extents, &strides);
            for ax in 0..self.dimension {
                if neighbor_index(&coords, ax, &self.extents, &self.periodic, &strides).is_some() {
                    lookup.insert((v, ax), next);
                    next += 1;
                }
            }
        }
        self.edge_lookup = lookup;
    }
}

fn validate_boundary(boundary: &[(EdgeId, i8)], edges: &[Edge], kind: FaceKind) -> Result<()> {
    if boundary.is_empty() {
        return Err(Error::invalid("empty face boundary"));
    }
    let mut seen = HashMap::new();
    for &(e, s) in boundary {
        if e >= edges.len() {
            return Err(Error::invalid("face boundary references unknown edge"));
        }
        if s != 1 && s != -1 {
            return Err(Error::invalid("chi must be +1 or -1"));
        }
        if seen.insert(e, s).is_some() {
            return Err(Error::invalid(format!(
                "edge {e} appears twice in one face boundary"
            )));
        }
    }
    // Closed-walk condition: the signed boundary of the boundary vanishes,
    // i.e. every vertex has zero net incidence. Auxiliary rows are purely
    // algebraic and exempt.
    if kind != FaceKind::Auxiliary {
        let mut net: HashMap<VertexId, i64> = HashMap::new();
        for &(e, s) in boundary {
            *net.entry(edges[e].head).or_insert(0) += s as i64;
            *net.entry(edges[e].tail).or_insert(0) -= s as i64;
        }
        if net.values().any(|&v| v != 0) {
            return Err(Error::invalid("face boundary is not a closed walk"));
        }
    }
    Ok(())
}

fn strides_of(extents: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; extents.len()];
    for i in 1..extents.len() {
        strides[i] = strides[i - 1] * extents[i - 1];
    }
    strides
}

fn coords_of(v: VertexId, extents: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut coords = vec![0; extents.len()];
    let mut rest = v;
    for i in (0..extents.len()).rev() {
        coords[i] = rest / strides[i];
        rest %= strides[i];
    }
    coords
}

fn neighbor_index(
    coords: &[usize],
    axis: usize,
    extents: &[usize],
    periodic: &[bool],
    strides: &[usize],
) -> Option<VertexId> {
    let mut c = coords.to_vec();
    if c[axis] + 1 < extents[axis] {
        c[axis] += 1;
    } else if periodic[axis] {
        c[axis] = 0;
    } else {
        return None;
    }
    Some(c.iter().zip(strides).map(|(v, s)| v * s).sum())
}

/// Edge angles theta_e, kept reduced to [-pi, pi). Optional coupling and
/// lattice-spacing metadata so theta = Delta * G * A is recoverable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeConfig {
    angles: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coupling: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spacing: Option<f64>,
}

/// Reduce an angle to the canonical interval [-pi, pi).
pub fn reduce_angle(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let y = (x + std::f64::consts::PI).rem_euclid(two_pi) - std::f64::consts::PI;
    if y >= std::f64::consts::PI {
        -std::f64::consts::PI
    } else {
        y
    }
}

impl EdgeConfig {
    pub fn zero(n_edges: usize) -> Self {
        EdgeConfig {
            angles: vec![0.0; n_edges],
            coupling: None,
            spacing: None,
        }
    }

    pub fn from_angles(angles: Vec<f64>) -> Self {
        EdgeConfig {
            angles: angles.into_iter().map(reduce_angle).collect(),
            coupling: None,
            spacing: None,
        }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angle(&self, e: EdgeId) -> f64 {
        self.angles[e]
    }

    pub fn set_angle(&mut self, e: EdgeId, value: f64) {
        self.angles[e] = reduce_angle(value);
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

/// Gauge rotation at a vertex: every edge leaving the vertex shifts by
/// +angle, every edge entering it by -angle. Face variables are unchanged.
pub fn gauge_rotate(
    cc: &CellComplex,
    config: &EdgeConfig,
    vertex: VertexId,
    angle: f64,
) -> Result<EdgeConfig> {
    if vertex >= cc.n_vertices {
        return Err(Error::invalid(format!("unknown vertex {vertex}")));
    }
    let mut out = config.clone();
    for (id, e) in cc.edges.iter().enumerate() {
        let mut shift = 0.0;
        if e.tail == vertex {
            shift += angle;
        }
        if e.head == vertex {
            shift -= angle;
        }
        if shift != 0.0 {
            out.set_angle(id, config.angle(id) + shift);
        }
    }
    Ok(out)
}

/// Face-edge incidence matrix with entries chi in {-1, 0, +1}; rank over
/// the rationals, and (after [`square_augment`]) the square system
/// Theta = I~ . theta with its exact |det|.
#[derive(Debug, Clone)]
pub struct IncidenceMatrix {
    pub entries: Vec<Vec<i64>>,
    pub n_edges: usize,
    pub rank: usize,
    pub square: Option<SquareAugmented>,
}

#[derive(Debug, Clone)]
pub struct SquareAugmented {
    /// |E| x |E| nonsingular rows: kept original face rows then auxiliary
    /// standard-basis rows.
    pub rows: Vec<Vec<i64>>,
    /// Original face indices kept (maximal independent set).
    pub selected_rows: Vec<usize>,
    /// Original face indices dropped as linearly dependent.
    pub dropped_rows: Vec<usize>,
    /// Columns covered by auxiliary standard-basis rows (F_aux).
    pub aux_cols: Vec<usize>,
    /// Exact |det I~|.
    pub det_abs: Rat,
}

/// Incidence matrix of a complex; entry (f, e) is chi_e if e is on the
/// boundary of f, else 0.
pub fn incidence(cc: &CellComplex) -> IncidenceMatrix {
    let mut entries = vec![vec![0i64; cc.n_edges()]; cc.n_faces()];
    for (f, face) in cc.faces.iter().enumerate() {
        for &(e, s) in &face.boundary {
            entries[f][e] = s as i64;
        }
    }
    let rank = RatMatrix::from_i64(&entries, cc.n_edges()).rank_profile().rank;
    IncidenceMatrix {
        entries,
        n_edges: cc.n_edges(),
        rank,
        square: None,
    }
}

/// Square augmentation: select a maximal independent face-row subset, then
/// append standard-basis auxiliary rows on uncovered pivot columns (greedy
/// by column index) until the matrix is |E| x |E| and nonsingular.
pub fn square_augment(im: &IncidenceMatrix) -> Result<IncidenceMatrix> {
    let n_edges = im.n_edges;
    let profile = RatMatrix::from_i64(&im.entries, n_edges).rank_profile();
    let selected: Vec<usize> = profile
        .independent_rows
        .iter()
        .copied()
        .take(n_edges)
        .collect();
    let dropped: Vec<usize> = profile.dependent_rows.clone();
    let mut rows: Vec<Vec<i64>> = selected.iter().map(|&r| im.entries[r].clone()).collect();
    // Columns without a pivot among the kept rows get unit auxiliary rows.
    let mut aux_cols = Vec::new();
    let covered: std::collections::HashSet<usize> = profile.pivot_cols.iter().copied().collect();
    for col in 0..n_edges {
        if rows.len() >= n_edges {
            break;
        }
        if !covered.contains(&col) {
            let mut unit = vec![0i64; n_edges];
            unit[col] = 1;
            rows.push(unit);
            aux_cols.push(col);
        }
    }
    if rows.len() != n_edges {
        return Err(Error::Inconsistent(format!(
            "augmentation reached {} rows for {} edges",
            rows.len(),
            n_edges
        )));
    }
    let det_abs = RatMatrix::from_i64(&rows, n_edges).det_abs()?;
    if num_traits::Zero::is_zero(&det_abs) {
        return Err(Error::Inconsistent("augmented matrix is singular".into()));
    }
    Ok(IncidenceMatrix {
        entries: im.entries.clone(),
        n_edges,
        rank: profile.rank,
        square: Some(SquareAugmented {
            rows,
            selected_rows: selected,
            dropped_rows: dropped,
            aux_cols,
            det_abs,
        }),
    })
}
