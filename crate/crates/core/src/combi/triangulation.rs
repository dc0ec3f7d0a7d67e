use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{CombiError, Corner, OrbitSurface};

/// A triangulation edge on the boundary, tagged with the surface boundary
/// edge it subdivides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryLabel {
    pub edge: [usize; 2],
    pub surface_edge: usize,
}

/// User-supplied triangulation of an orbit surface.
///
/// `corners[c][i]` is the triangulation vertex sitting at corner `i` of
/// boundary component `c`. Every boundary edge of the triangulation carries a
/// label naming the surface edge it lies on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub vertex_count: usize,
    pub triangles: Vec<[usize; 3]>,
    pub corners: Vec<Vec<usize>>,
    pub boundary: Vec<BoundaryLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum VertexKind {
    Interior,
    /// Interior point of a surface boundary edge.
    Boundary { surface_edge: usize },
    Corner { component: usize, index: usize },
}

impl VertexKind {
    /// Codimension of the point in the surface.
    pub fn codimension(&self) -> u8 {
        match self {
            VertexKind::Interior => 0,
            VertexKind::Boundary { .. } => 1,
            VertexKind::Corner { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum EdgeKind {
    Interior,
    Boundary { surface_edge: usize },
}

/// Result of [`validate_triangulation`]: the checked triangulation plus its
/// derived boundary structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangulationReport {
    pub euler_characteristic: i64,
    pub expected_euler_characteristic: i64,
    pub euler_consistent: bool,
    pub vertex_kinds: Vec<VertexKind>,
    #[serde(serialize_with = "edge_list")]
    pub edges: BTreeMap<[usize; 2], EdgeKind>,
    pub triangles: Vec<[usize; 3]>,
    /// For each surface edge, its triangulation vertices in order from the
    /// initial corner to the terminal corner. Circles list their cycle once,
    /// starting at the smallest vertex.
    pub edge_paths: Vec<Vec<usize>>,
}

/// JSON keys must be strings, so the edge map goes out as a list.
fn edge_list<S: serde::Serializer>(edges: &BTreeMap<[usize; 2], EdgeKind>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        edge: [usize; 2],
        #[serde(flatten)]
        kind: &'a EdgeKind,
    }
    s.collect_seq(edges.iter().map(|(&edge, kind)| Entry { edge, kind }))
}

impl TriangulationReport {
    pub fn is_valid(&self) -> bool {
        self.euler_consistent
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_kinds.len()
    }

    pub fn corner_vertex(&self, corner: Corner) -> Option<usize> {
        self.vertex_kinds.iter().position(
            |k| matches!(k, VertexKind::Corner { component, index } if *component == corner.component && *index == corner.index),
        )
    }
}

fn edge_key(a: usize, b: usize) -> [usize; 2] {
    if a < b { [a, b] } else { [b, a] }
}

/// Checks the triangulation against the surface and derives vertex/edge
/// classifications. Structural violations are errors; a mismatched Euler
/// characteristic is reported in the result.
pub fn validate_triangulation(t: &Triangulation, s: &OrbitSurface) -> Result<TriangulationReport, CombiError> {
    let nv = t.vertex_count;
    let mut seen_tris = BTreeSet::new();
    let mut edge_tris: BTreeMap<[usize; 2], usize> = BTreeMap::new();
    let mut used = vec![false; nv];
    for (i, tri) in t.triangles.iter().enumerate() {
        if let Some(&v) = tri.iter().find(|&&v| v >= nv) {
            return Err(CombiError::TriangleVertex { triangle: i, vertex: v });
        }
        let mut sorted = *tri;
        sorted.sort_unstable();
        if sorted[0] == sorted[1] || sorted[1] == sorted[2] {
            return Err(CombiError::DegenerateTriangle { triangle: i });
        }
        if !seen_tris.insert(sorted) {
            return Err(CombiError::DuplicateTriangle { triangle: i });
        }
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            *edge_tris.entry([sorted[a], sorted[b]]).or_default() += 1;
        }
        for v in sorted {
            used[v] = true;
        }
    }
    if let Some(v) = used.iter().position(|u| !u) {
        return Err(CombiError::UnusedVertex { vertex: v });
    }
    if let Some((edge, &count)) = edge_tris.iter().find(|(_, &c)| c > 2) {
        return Err(CombiError::EdgeValence { edge: *edge, triangles: count });
    }
    check_connected(nv, &t.triangles)?;
    check_vertex_links(nv, &t.triangles)?;

    // Boundary labels must cover exactly the edges with one triangle.
    let boundary_edges: BTreeSet<[usize; 2]> =
        edge_tris.iter().filter(|(_, &c)| c == 1).map(|(e, _)| *e).collect();
    let mut labels: BTreeMap<[usize; 2], usize> = BTreeMap::new();
    for label in &t.boundary {
        let key = edge_key(label.edge[0], label.edge[1]);
        if !boundary_edges.contains(&key) {
            return Err(CombiError::NotBoundaryEdge { edge: key });
        }
        if label.surface_edge >= s.edge_count() {
            return Err(CombiError::SurfaceEdgeOutOfRange { surface_edge: label.surface_edge, count: s.edge_count() });
        }
        if labels.insert(key, label.surface_edge).is_some() {
            return Err(CombiError::DuplicateLabel { edge: key });
        }
    }
    if let Some(e) = boundary_edges.iter().find(|e| !labels.contains_key(*e)) {
        return Err(CombiError::UnlabelledBoundaryEdge { edge: *e });
    }

    // Corners.
    if t.corners.len() != s.components().len() {
        return Err(CombiError::CornerData { component: t.corners.len().min(s.components().len()) });
    }
    let boundary_vertices: BTreeSet<usize> = boundary_edges.iter().flat_map(|e| e.iter().copied()).collect();
    let mut vertex_kinds = vec![VertexKind::Interior; nv];
    for (component, (listed, comp)) in t.corners.iter().zip(s.components()).enumerate() {
        if listed.len() != comp.corners {
            return Err(CombiError::CornerData { component });
        }
        for (index, &v) in listed.iter().enumerate() {
            if v >= nv || !boundary_vertices.contains(&v) {
                return Err(CombiError::CornerNotVertex { component, index, vertex: v });
            }
            if vertex_kinds[v] != VertexKind::Interior {
                return Err(CombiError::CornerNotVertex { component, index, vertex: v });
            }
            vertex_kinds[v] = VertexKind::Corner { component, index };
        }
    }

    // Each surface edge must be a path between its corners (or a cycle).
    let mut edge_paths = Vec::with_capacity(s.edge_count());
    for surface_edge in 0..s.edge_count() {
        let pieces: Vec<[usize; 2]> = labels.iter().filter(|(_, &l)| l == surface_edge).map(|(e, _)| *e).collect();
        let endpoints = s.edge_corners(surface_edge).map(|(a, b)| {
            (t.corners[a.component][a.index], t.corners[b.component][b.index])
        });
        let path = trace_surface_edge(surface_edge, &pieces, endpoints)?;
        let inner: &[usize] = match endpoints {
            Some((a, b)) if a != b => &path[1..path.len() - 1],
            Some(_) => &path[1..],
            None => &path,
        };
        for &v in inner {
            if vertex_kinds[v] != VertexKind::Interior {
                return Err(CombiError::SurfaceEdgePath {
                    surface_edge,
                    reason: format!("vertex {v} is a corner or lies on another edge"),
                });
            }
            vertex_kinds[v] = VertexKind::Boundary { surface_edge };
        }
        edge_paths.push(path);
    }

    let edges: BTreeMap<[usize; 2], EdgeKind> = edge_tris
        .keys()
        .map(|e| {
            let kind = labels.get(e).map_or(EdgeKind::Interior, |&surface_edge| EdgeKind::Boundary { surface_edge });
            (*e, kind)
        })
        .collect();
    let chi = nv as i64 - edges.len() as i64 + t.triangles.len() as i64;
    let expected = s.euler_characteristic();
    Ok(TriangulationReport {
        euler_characteristic: chi,
        expected_euler_characteristic: expected,
        euler_consistent: chi == expected,
        vertex_kinds,
        edges,
        triangles: t.triangles.iter().map(|tri| {
            let mut s = *tri;
            s.sort_unstable();
            s
        }).collect(),
        edge_paths,
    })
}

fn check_connected(nv: usize, triangles: &[[usize; 3]]) -> Result<(), CombiError> {
    let mut adj = vec![Vec::new(); nv];
    for tri in triangles {
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            adj[tri[a]].push(tri[b]);
            adj[tri[b]].push(tri[a]);
        }
    }
    let mut seen = vec![false; nv];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    if seen.iter().all(|s| *s) { Ok(()) } else { Err(CombiError::Disconnected) }
}

/// The link of every vertex must be a single path or a single cycle.
fn check_vertex_links(nv: usize, triangles: &[[usize; 3]]) -> Result<(), CombiError> {
    let mut links: Vec<Vec<[usize; 2]>> = vec![Vec::new(); nv];
    for tri in triangles {
        for i in 0..3 {
            links[tri[i]].push(edge_key(tri[(i + 1) % 3], tri[(i + 2) % 3]));
        }
    }
    for (v, link) in links.iter().enumerate() {
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for e in link {
            *degree.entry(e[0]).or_default() += 1;
            *degree.entry(e[1]).or_default() += 1;
        }
        if degree.values().any(|&d| d > 2) {
            return Err(CombiError::NonManifoldVertex { vertex: v });
        }
        let ends = degree.values().filter(|&&d| d == 1).count();
        // A connected graph with max degree 2 is a path or cycle; check the
        // edge count matches.
        let nodes = degree.len();
        let connected = graph_connected(link);
        let ok = connected && ((ends == 0 && link.len() == nodes) || (ends == 2 && link.len() + 1 == nodes));
        if !ok {
            return Err(CombiError::NonManifoldVertex { vertex: v });
        }
    }
    Ok(())
}

fn graph_connected(edges: &[[usize; 2]]) -> bool {
    let Some(first) = edges.first() else {
        return false;
    };
    let mut seen = BTreeSet::from([first[0]]);
    let mut changed = true;
    while changed {
        changed = false;
        for e in edges {
            if seen.contains(&e[0]) != seen.contains(&e[1]) {
                seen.insert(e[0]);
                seen.insert(e[1]);
                changed = true;
            }
        }
    }
    edges.iter().all(|e| seen.contains(&e[0]))
}

fn trace_surface_edge(
    surface_edge: usize,
    pieces: &[[usize; 2]],
    endpoints: Option<(usize, usize)>,
) -> Result<Vec<usize>, CombiError> {
    let fail = |reason: &str| CombiError::SurfaceEdgePath { surface_edge, reason: reason.to_string() };
    if pieces.is_empty() {
        return Err(fail("no triangulation edges carry this label"));
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in pieces {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    if adj.values().any(|n| n.len() > 2) {
        return Err(fail("labelled edges branch"));
    }
    let (start, stop, closed) = match endpoints {
        Some((a, b)) if a != b => (a, b, false),
        Some((a, _)) => (a, a, true),
        None => {
            let s = *adj.keys().next().expect("nonempty");
            (s, s, true)
        }
    };
    if !adj.contains_key(&start) {
        return Err(fail("initial corner is not on the labelled edges"));
    }
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    for _ in 0..pieces.len() {
        let next = adj[&cur].iter().copied().find(|&w| w != prev);
        let Some(next) = next else {
            return Err(fail("labelled edges stop before the terminal corner"));
        };
        prev = cur;
        cur = next;
        if cur == stop {
            break;
        }
        path.push(cur);
    }
    // Before `stop` is appended, both arcs and cycles have one vertex per edge.
    if cur != stop || path.len() != pieces.len() {
        return Err(fail("labelled edges do not form a single arc between the corners"));
    }
    if !closed {
        path.push(stop);
    }
    if closed && endpoints.is_none() {
        let min_pos = path.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i).unwrap_or(0);
        path.rotate_left(min_pos);
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combi::{BoundaryComponent, SurfaceDescriptor};

    pub(crate) fn label(a: usize, b: usize, e: usize) -> BoundaryLabel {
        BoundaryLabel { edge: [a, b], surface_edge: e }
    }

    fn triangle_disk() -> (OrbitSurface, Triangulation) {
        let s = OrbitSurface::disk(3);
        let t = Triangulation {
            vertex_count: 3,
            triangles: vec![[0, 1, 2]],
            corners: vec![vec![0, 1, 2]],
            boundary: vec![label(0, 1, 0), label(1, 2, 1), label(2, 0, 2)],
        };
        (s, t)
    }

    fn annulus() -> (OrbitSurface, Triangulation) {
        let s = OrbitSurface::build(&SurfaceDescriptor {
            genus: 0,
            orientable: true,
            boundary: vec![BoundaryComponent { corners: 0 }, BoundaryComponent { corners: 0 }],
        })
        .unwrap();
        let mut triangles = Vec::new();
        let mut boundary = Vec::new();
        for i in 0..4 {
            let j = (i + 1) % 4;
            triangles.push([i, j, 4 + i]);
            triangles.push([j, 4 + j, 4 + i]);
            boundary.push(label(i, j, 0));
            boundary.push(label(4 + i, 4 + j, 1));
        }
        (s, Triangulation { vertex_count: 8, triangles, corners: vec![vec![], vec![]], boundary })
    }

    fn eye() -> (OrbitSurface, Triangulation) {
        let s = OrbitSurface::disk(2);
        let t = Triangulation {
            vertex_count: 5,
            triangles: vec![[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4]],
            corners: vec![vec![0, 1]],
            boundary: vec![label(0, 2, 0), label(2, 1, 0), label(1, 3, 1), label(3, 0, 1)],
        };
        (s, t)
    }

    #[test]
    fn triangle_valid() {
        let (s, t) = triangle_disk();
        let r = validate_triangulation(&t, &s).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.euler_characteristic, 1);
        assert_eq!(r.edge_paths, vec![vec![0, 1], vec![1, 2], vec![2, 0]]);
    }

    #[test]
    fn annulus_eight_triangles() {
        let (s, t) = annulus();
        assert_eq!(t.triangles.len(), 8);
        let r = validate_triangulation(&t, &s).unwrap();
        // V - E + F = 8 - 16 + 8
        assert_eq!(r.euler_characteristic, 0);
        assert!(r.is_valid());
        assert_eq!(r.edge_paths[1], vec![4, 5, 6, 7]);
        assert!(r.vertex_kinds.iter().all(|k| matches!(k, VertexKind::Boundary { .. })));
    }

    #[test]
    fn eye_valid_and_missing_corner() {
        let (s, t) = eye();
        let r = validate_triangulation(&t, &s).unwrap();
        assert_eq!(r.euler_characteristic, 1);
        assert!(r.is_valid());
        assert_eq!(r.vertex_kinds[4], VertexKind::Interior);
        assert_eq!(r.vertex_kinds[2], VertexKind::Boundary { surface_edge: 0 });

        let mut missing = t.clone();
        missing.corners = vec![vec![0]];
        assert!(matches!(validate_triangulation(&missing, &s), Err(CombiError::CornerData { .. })));
        let mut interior = t;
        interior.corners = vec![vec![0, 4]];
        assert!(matches!(validate_triangulation(&interior, &s), Err(CombiError::CornerNotVertex { .. })));
    }

    #[test]
    fn edge_valence_error() {
        let (s, mut t) = triangle_disk();
        t.vertex_count = 5;
        t.triangles.push([0, 1, 3]);
        t.triangles.push([0, 1, 4]);
        assert!(matches!(validate_triangulation(&t, &s), Err(CombiError::EdgeValence { triangles: 3, .. })));
    }

    #[test]
    fn euler_mismatch_reported() {
        // Triangle triangulation claimed for an annulus-like surface with one
        // boundary component of genus 1.
        let (_, t) = triangle_disk();
        let torus_with_hole = OrbitSurface::build(&SurfaceDescriptor {
            genus: 1,
            orientable: true,
            boundary: vec![BoundaryComponent { corners: 3 }],
        })
        .unwrap();
        let r = validate_triangulation(&t, &torus_with_hole).unwrap();
        assert!(!r.is_valid());
        assert_eq!(r.expected_euler_characteristic, -1);
    }

    #[test]
    fn wrong_labels() {
        let (s, mut t) = triangle_disk();
        t.boundary[1].surface_edge = 0;
        assert!(matches!(validate_triangulation(&t, &s), Err(CombiError::SurfaceEdgePath { .. })));
        let (s, mut t) = triangle_disk();
        t.boundary.pop();
        assert!(matches!(validate_triangulation(&t, &s), Err(CombiError::UnlabelledBoundaryEdge { .. })));
    }
}
