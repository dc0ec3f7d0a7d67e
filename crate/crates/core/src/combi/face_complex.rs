use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::CombiError;

/// A face of a simple polytope, named by the set of facets whose
/// intersection it is. The empty set is the whole polytope.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<usize>);

impl Face {
    pub fn new(facets: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = facets.into_iter().collect();
        Face(set.into_iter().collect())
    }

    pub fn whole() -> Self {
        Face(Vec::new())
    }

    pub fn facets(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, facet: usize) -> bool {
        self.0.binary_search(&facet).is_ok()
    }

    /// Facet-set inclusion. As point sets this is reversed: `self ⊆ other`
    /// means the face `other` lies inside the face `self`.
    pub fn is_subset(&self, other: &Face) -> bool {
        self.0.iter().all(|f| other.contains(*f))
    }

    pub fn with(&self, facet: usize) -> Face {
        Face::new(self.0.iter().copied().chain(std::iter::once(facet)))
    }

    pub fn without(&self, facet: usize) -> Face {
        Face(self.0.iter().copied().filter(|&f| f != facet).collect())
    }

    /// All subsets, including the empty set and the face itself.
    pub fn subsets(&self) -> Vec<Face> {
        let k = self.0.len();
        (0u64..1 << k)
            .map(|mask| Face((0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "P");
        }
        let names: Vec<String> = self.0.iter().map(|i| format!("F{i}")).collect();
        write!(f, "{}", names.join("∩"))
    }
}

/// Combinatorial type of a simple polytope, given by the facets meeting at
/// each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceComplex {
    dimension: usize,
    facet_count: usize,
    vertices: Vec<Face>,
    faces: BTreeSet<Face>,
}

impl FaceComplex {
    /// Validates vertex data and derives the face lattice.
    ///
    /// Besides simplicity and connectivity this also checks that every edge
    /// (an `n-1` subset of a vertex set) has exactly two endpoints.
    pub fn build(dimension: usize, facet_count: usize, vertex_sets: Vec<Vec<usize>>) -> Result<Self, CombiError> {
        if vertex_sets.is_empty() {
            return Err(CombiError::NoVertices);
        }
        let mut vertices = Vec::with_capacity(vertex_sets.len());
        let mut seen = BTreeMap::new();
        for (index, raw) in vertex_sets.into_iter().enumerate() {
            let face = Face::new(raw.iter().copied());
            if face.len() != raw.len() {
                return Err(CombiError::RepeatedFacet { vertex: index });
            }
            if face.len() != dimension {
                return Err(CombiError::NotSimple { vertex: index, size: face.len(), dimension });
            }
            if let Some(&f) = face.facets().iter().find(|&&f| f >= facet_count) {
                return Err(CombiError::FacetOutOfRange { facet: f, facet_count });
            }
            if let Some(&first) = seen.get(&face) {
                return Err(CombiError::DuplicateVertex { first, second: index });
            }
            seen.insert(face.clone(), index);
            vertices.push(face);
        }
        let used: BTreeSet<usize> = vertices.iter().flat_map(|v| v.facets().iter().copied()).collect();
        if let Some(f) = (0..facet_count).find(|f| !used.contains(f)) {
            return Err(CombiError::UnusedFacet { facet: f });
        }
        if dimension == 0 && vertices.len() != 1 {
            return Err(CombiError::Disconnected);
        }

        if dimension > 0 {
            let mut edge_ends: BTreeMap<Face, usize> = BTreeMap::new();
            for v in &vertices {
                for &f in v.facets() {
                    *edge_ends.entry(v.without(f)).or_default() += 1;
                }
            }
            if let Some((edge, &ends)) = edge_ends.iter().find(|(_, &c)| c != 2) {
                return Err(CombiError::BadEdge { edge: edge.clone(), endpoints: ends });
            }
        }

        let complex = FaceComplex {
            dimension,
            facet_count,
            faces: vertices.iter().flat_map(Face::subsets).collect(),
            vertices,
        };
        if !complex.graph_connected() {
            return Err(CombiError::Disconnected);
        }
        Ok(complex)
    }

    fn graph_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut reached = vec![false; n];
        let mut queue = VecDeque::from([0]);
        reached[0] = true;
        while let Some(u) = queue.pop_front() {
            for w in 0..n {
                if !reached[w] && self.adjacent(u, w) {
                    reached[w] = true;
                    queue.push_back(w);
                }
            }
        }
        reached.into_iter().all(|r| r)
    }

    /// Two vertices span an edge when they share `n - 1` facets.
    pub fn adjacent(&self, u: usize, w: usize) -> bool {
        if u == w || self.dimension == 0 {
            return false;
        }
        let shared = self.vertices[u].facets().iter().filter(|f| self.vertices[w].contains(**f)).count();
        shared + 1 == self.dimension
    }

    pub fn point() -> Self {
        Self::build(0, 0, vec![vec![]]).expect("point")
    }

    /// The n-simplex: vertex `i` is opposite facet `i`.
    pub fn simplex(n: usize) -> Self {
        let vs = (0..=n).map(|i| (0..=n).filter(|&j| j != i).collect()).collect();
        Self::build(n, n + 1, vs).expect("simplex")
    }

    /// The n-cube: facets `2d` and `2d + 1` are the opposite pair `x_d = 0`,
    /// `x_d = 1`. Vertices are listed in binary order.
    pub fn cube(n: usize) -> Self {
        let vs = (0..1usize << n).map(|bits| (0..n).map(|d| 2 * d + (bits >> d & 1)).collect()).collect();
        Self::build(n, 2 * n, vs).expect("cube")
    }

    /// A k-gon with edges `0..k` in cyclic order; vertex `i` joins edges `i`
    /// and `i + 1`.
    pub fn polygon(k: usize) -> Result<Self, CombiError> {
        if k < 3 {
            return Err(CombiError::PolygonTooSmall(k));
        }
        Self::build(2, k, (0..k).map(|i| vec![i, (i + 1) % k]).collect())
    }

    /// Product of simple polytopes. Facets of `b` are shifted past those of
    /// `a`; vertex `(i, j)` is listed at `i * |V(b)| + j`.
    pub fn product(a: &FaceComplex, b: &FaceComplex) -> Self {
        let shift = a.facet_count;
        let vs = a
            .vertices
            .iter()
            .flat_map(|u| {
                b.vertices.iter().map(move |w| {
                    u.facets().iter().copied().chain(w.facets().iter().map(|f| f + shift)).collect()
                })
            })
            .collect();
        Self::build(a.dimension + b.dimension, a.facet_count + b.facet_count, vs)
            .expect("product of simple polytopes is simple")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn facet_count(&self) -> usize {
        self.facet_count
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Face] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Result<&Face, CombiError> {
        self.vertices.get(v).ok_or(CombiError::UnknownVertex { vertex: v, count: self.vertices.len() })
    }

    pub fn vertex_index(&self, face: &Face) -> Option<usize> {
        self.vertices.iter().position(|v| v == face)
    }

    /// All faces, whole polytope included, in facet-set order.
    pub fn faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn is_face(&self, face: &Face) -> bool {
        self.faces.contains(face)
    }

    pub fn face_dimension(&self, face: &Face) -> usize {
        self.dimension - face.len()
    }

    /// Vertex `u` lies in face `F` iff the facets of `F` all pass through `u`.
    pub fn vertex_in_face(&self, u: usize, face: &Face) -> bool {
        face.is_subset(&self.vertices[u])
    }

    pub fn vertices_of(&self, face: &Face) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&u| self.vertex_in_face(u, face)).collect()
    }

    /// Face counts by dimension `0..n`. The whole polytope (dimension `n`) is
    /// not included.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dimension];
        for face in &self.faces {
            if !face.is_empty() {
                f[self.dimension - face.len()] += 1;
            }
        }
        f
    }

    /// Faces not containing vertex `v`; their union is the closed set removed
    /// from the polytope to form the open star around `v`.
    pub fn faces_avoiding(&self, v: usize) -> Result<Vec<Face>, CombiError> {
        self.vertex(v)?;
        Ok(self.faces.iter().filter(|f| !self.vertex_in_face(v, f)).cloned().collect())
    }

    /// Facets not containing `v`. Every face avoiding `v` lies in one of them.
    pub fn facets_avoiding(&self, v: usize) -> Result<Vec<usize>, CombiError> {
        let vertex = self.vertex(v)?;
        Ok((0..self.facet_count).filter(|f| !vertex.contains(*f)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn triangle() {
        let t = FaceComplex::build(2, 3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(t.vertex_count(), 3);
        assert_eq!(t.f_vector(), vec![3, 3]);
        assert_eq!(t.faces().filter(|f| f.is_empty()).count(), 1);
    }

    #[test]
    fn cube_f_vector() {
        // 8 vertices; each of the 3 coordinate directions gives 4 parallel
        // edges; 6 squares.
        assert_eq!(FaceComplex::cube(3).f_vector(), vec![8, 12, 6]);
    }

    #[test]
    fn simplex_f_vector_is_binomial() {
        for n in 1..=5 {
            let f = FaceComplex::simplex(n).f_vector();
            let expect: Vec<usize> = (0..n).map(|k| binom(n + 1, k + 1)).collect();
            assert_eq!(f, expect, "n = {n}");
        }
    }

    #[test]
    fn rejects_non_simple() {
        let err = FaceComplex::build(2, 3, vec![vec![0, 1, 2]]).unwrap_err();
        assert!(matches!(err, CombiError::NotSimple { size: 3, dimension: 2, .. }));
    }

    #[test]
    fn rejects_disconnected_and_open_edges() {
        // Two disjoint segments glued into one vertex list.
        let err = FaceComplex::build(1, 4, vec![vec![0], vec![1], vec![2], vec![3]]).unwrap_err();
        assert!(matches!(err, CombiError::BadEdge { .. }));
        let err = FaceComplex::build(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap_err();
        assert!(matches!(err, CombiError::BadEdge { .. }));
        // Two triangles on disjoint facet sets.
        let err = FaceComplex::build(
            2,
            6,
            vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]],
        )
        .unwrap_err();
        assert_eq!(err, CombiError::Disconnected);
    }

    #[test]
    fn rejects_unused_facet_and_duplicates() {
        let err = FaceComplex::build(2, 4, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap_err();
        assert_eq!(err, CombiError::UnusedFacet { facet: 3 });
        let err = FaceComplex::build(1, 2, vec![vec![0], vec![0]]).unwrap_err();
        assert!(matches!(err, CombiError::DuplicateVertex { .. }));
    }

    /// Brute force: a vertex u lies in face F iff F's facets ⊆ u's facets.
    #[test]
    fn triangle_faces_avoiding() {
        let t = FaceComplex::polygon(3).unwrap();
        // vertex 0 = F0 ∩ F1
        let v = t.vertex_index(&Face::new([0, 1])).unwrap();
        let got = t.faces_avoiding(v).unwrap();
        let expect = vec![Face::new([0, 2]), Face::new([1, 2]), Face::new([2])];
        let mut got_sorted = got.clone();
        got_sorted.sort();
        let mut expect_sorted = expect;
        expect_sorted.sort();
        assert_eq!(got_sorted, expect_sorted);
        assert!(matches!(t.faces_avoiding(7), Err(CombiError::UnknownVertex { .. })));
    }

    #[test]
    fn simplex_faces_avoiding_is_opposite_facet() {
        let s = FaceComplex::simplex(4);
        for v in 0..5 {
            let avoid = s.faces_avoiding(v).unwrap();
            // Faces of the opposite facet F_v: all faces containing facet v.
            assert!(avoid.iter().all(|f| f.contains(v)));
            assert_eq!(avoid.len(), s.faces().filter(|f| f.contains(v)).count());
        }
    }

    #[test]
    fn segment_faces_avoiding() {
        let seg = FaceComplex::simplex(1);
        let v = seg.vertex_index(&Face::new([1])).unwrap();
        assert_eq!(seg.faces_avoiding(v).unwrap(), vec![Face::new([0])]);
    }

    #[test]
    fn every_face_has_a_vertex() {
        for c in [FaceComplex::cube(4), FaceComplex::simplex(5), FaceComplex::polygon(7).unwrap()] {
            for f in c.faces() {
                assert!(!c.vertices_of(f).is_empty());
            }
        }
    }

    #[test]
    fn f_vector_from_vertex_subsets() {
        let c = FaceComplex::cube(3);
        for k in 0..=3 {
            let subsets: BTreeSet<Face> = c
                .vertices()
                .iter()
                .flat_map(Face::subsets)
                .filter(|f| f.len() == k)
                .collect();
            let fv = if k == 0 { 1 } else { c.f_vector()[3 - k] };
            assert_eq!(subsets.len(), fv);
        }
    }

    #[test]
    fn products() {
        let seg = FaceComplex::simplex(1);
        let sq = FaceComplex::product(&seg, &seg);
        assert_eq!(sq.f_vector(), vec![4, 4]);
        let prism = FaceComplex::product(&FaceComplex::polygon(3).unwrap(), &seg);
        assert_eq!(prism.facet_count(), 5);
        assert_eq!(prism.vertex_count(), 6);
        assert_eq!(prism.f_vector(), vec![6, 9, 5]);
        let same = FaceComplex::product(&prism, &FaceComplex::point());
        assert_eq!(same, prism);
    }

    #[test]
    fn face_inclusion_is_reversed_partial_order() {
        let c = FaceComplex::cube(3);
        let faces: Vec<&Face> = c.faces().collect();
        for a in &faces {
            for b in &faces {
                // b ⊆ a as facet sets  <=>  every vertex of a is a vertex of b.
                let geometric = c.vertices_of(a).iter().all(|u| c.vertices_of(b).contains(u));
                assert_eq!(b.is_subset(a), geometric, "{a} vs {b}");
            }
        }
    }
}
