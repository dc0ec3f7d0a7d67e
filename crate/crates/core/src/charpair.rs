//! Characteristic pairs: an orbit space together with one integer vector per
//! facet (or boundary edge), and the data derived from them.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::combi::{CombiError, Corner, Face, FaceComplex, OrbitSurface};
use crate::intlat::{is_direct_summand, smith_normal_form, IntMatrix, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error(transparent)]
    Combi(#[from] CombiError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("expected {expected} characteristic vectors (one per facet), got {found}")]
    VectorCount { expected: usize, found: usize },
    #[error("characteristic vector {facet} has length {found}, expected {expected}")]
    VectorLength { facet: usize, expected: usize, found: usize },
    #[error("{0} needs a polytope base")]
    PolytopeRequired(&'static str),
    #[error("{0} needs a surface base")]
    SurfaceRequired(&'static str),
    #[error("{face} is not a face of the base")]
    UnknownFace { face: Face },
    #[error("characteristic vectors on {face} do not span a direct summand")]
    NotSummand { face: Face },
    #[error("dimensions differ: {left} and {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("gluing orbit dimension {k} exceeds {dimension}")]
    OrbitDimension { k: usize, dimension: usize },
    #[error("{side} face {face} has dimension {found}, expected {expected}")]
    FaceDimension { side: Side, face: Face, expected: usize, found: usize },
    #[error("{side} pair is not a valid characteristic pair")]
    InvalidPair { side: Side },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    Polytope(FaceComplex),
    Surface(OrbitSurface),
}

impl Base {
    pub fn dimension(&self) -> usize {
        match self {
            Base::Polytope(p) => p.dimension(),
            Base::Surface(_) => 2,
        }
    }

    /// Facets of a polytope, boundary edges of a surface.
    pub fn facet_count(&self) -> usize {
        match self {
            Base::Polytope(p) => p.facet_count(),
            Base::Surface(s) => s.edge_count(),
        }
    }

    pub fn as_polytope(&self) -> Option<&FaceComplex> {
        match self {
            Base::Polytope(p) => Some(p),
            Base::Surface(_) => None,
        }
    }

    pub fn as_surface(&self) -> Option<&OrbitSurface> {
        match self {
            Base::Surface(s) => Some(s),
            Base::Polytope(_) => None,
        }
    }
}

/// A point of the orbit space fixed by the whole torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasePoint {
    Vertex(usize),
    Corner(Corner),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicPair {
    base: Base,
    lambda: Vec<Vec<i64>>,
}

/// Where a validity check was made.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Site {
    Face(Face),
    Corner(Corner),
    Edge(usize),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Face(face) => write!(f, "{face}"),
            Site::Corner(c) => write!(f, "corner {} of boundary component {}", c.index, c.component),
            Site::Edge(e) => write!(f, "edge {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiteFailure {
    pub site: Site,
    pub facets: Vec<usize>,
    /// Invariant factors of the matrix of the vectors there, as decimal
    /// strings.
    pub invariant_factors: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    /// Polytopes: vertices only, which implies every face. Surfaces: corners
    /// and single edges.
    Vertices,
    /// Every proper face.
    AllFaces,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub mode: CheckMode,
    pub sites_checked: usize,
    pub failures: Vec<SiteFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotropyModule {
    pub face: Face,
    pub basis: Vec<Vec<i64>>,
}

impl IsotropyModule {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

impl CharacteristicPair {
    pub fn new(base: Base, lambda: Vec<Vec<i64>>) -> Result<Self, CharError> {
        let expected = base.facet_count();
        if lambda.len() != expected {
            return Err(CharError::VectorCount { expected, found: lambda.len() });
        }
        let n = base.dimension();
        if let Some((facet, v)) = lambda.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(CharError::VectorLength { facet, expected: n, found: v.len() });
        }
        Ok(CharacteristicPair { base, lambda })
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn lambda(&self) -> &[Vec<i64>] {
        &self.lambda
    }

    pub fn dimension(&self) -> usize {
        self.base.dimension()
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(CheckMode::Vertices)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid
    }

    pub fn validate_with(&self, mode: CheckMode) -> ValidationReport {
        let sites: Vec<(Site, Vec<usize>)> = match &self.base {
            Base::Polytope(p) => match mode {
                CheckMode::Vertices => p.vertices().iter().map(|v| (Site::Face(v.clone()), v.facets().to_vec())).collect(),
                CheckMode::AllFaces => p
                    .faces()
                    .filter(|f| !f.is_empty())
                    .map(|f| (Site::Face(f.clone()), f.facets().to_vec()))
                    .collect(),
            },
            Base::Surface(s) => {
                let mut sites: Vec<(Site, Vec<usize>)> =
                    (0..s.edge_count()).map(|e| (Site::Edge(e), vec![e])).collect();
                for corner in s.corners() {
                    let (incoming, outgoing) = s.corner_edges(corner);
                    sites.push((Site::Corner(corner), vec![incoming, outgoing]));
                }
                sites
            }
        };
        let mut failures = Vec::new();
        for (site, facets) in &sites {
            let vectors: Vec<&[i64]> = facets.iter().map(|&j| self.lambda[j].as_slice()).collect();
            let ok = is_direct_summand(&vectors, self.dimension()).unwrap_or(false);
            if !ok {
                failures.push(SiteFailure {
                    site: site.clone(),
                    facets: facets.clone(),
                    invariant_factors: invariant_factors(&vectors),
                });
            }
        }
        ValidationReport { valid: failures.is_empty(), mode, sites_checked: sites.len(), failures }
    }

    /// Vertices of a polytope base or corners of a surface base.
    pub fn fixed_points(&self) -> Vec<BasePoint> {
        match &self.base {
            Base::Polytope(p) => (0..p.vertex_count()).map(BasePoint::Vertex).collect(),
            Base::Surface(s) => s.corners().into_iter().map(BasePoint::Corner).collect(),
        }
    }

    pub fn fixed_point_count(&self) -> usize {
        match &self.base {
            Base::Polytope(p) => p.vertex_count(),
            Base::Surface(s) => s.corner_count(),
        }
    }

    /// Faces as facet-index sets. For a surface these are the whole surface,
    /// single edges and the edge pairs at corners with two distinct edges.
    pub fn is_face(&self, face: &Face) -> bool {
        match &self.base {
            Base::Polytope(p) => p.is_face(face),
            Base::Surface(s) => match face.facets() {
                [] => true,
                [e] => *e < s.edge_count(),
                [a, b] => s.corners().into_iter().any(|c| {
                    let (i, o) = s.corner_edges(c);
                    (i.min(o), i.max(o)) == (*a, *b)
                }),
                _ => false,
            },
        }
    }

    /// The module generated by the characteristic vectors of the facets
    /// containing `face`.
    pub fn isotropy_module(&self, face: &Face) -> Result<IsotropyModule, CharError> {
        if !self.is_face(face) {
            return Err(CharError::UnknownFace { face: face.clone() });
        }
        let basis: Vec<Vec<i64>> = face.facets().iter().map(|&j| self.lambda[j].clone()).collect();
        if !is_direct_summand(&basis, self.dimension())? {
            return Err(CharError::NotSummand { face: face.clone() });
        }
        Ok(IsotropyModule { face: face.clone(), basis })
    }
}

fn invariant_factors(vectors: &[&[i64]]) -> Vec<String> {
    let rows: Vec<Vec<i64>> = vectors.iter().map(|v| v.to_vec()).collect();
    match IntMatrix::from_rows(&rows).and_then(|m| smith_normal_form(&m)) {
        Ok(snf) => snf.diagonal.iter().map(|d| d.to_string()).collect(),
        Err(_) => Vec::new(),
    }
}

/// Cartesian product: facets of `a` then facets of `b`, vectors embedded
/// block-diagonally.
pub fn product_pair(a: &CharacteristicPair, b: &CharacteristicPair) -> Result<CharacteristicPair, CharError> {
    let (Some(pa), Some(pb)) = (a.base.as_polytope(), b.base.as_polytope()) else {
        return Err(CharError::PolytopeRequired("product"));
    };
    let (na, nb) = (pa.dimension(), pb.dimension());
    let mut lambda = Vec::with_capacity(a.lambda.len() + b.lambda.len());
    for v in &a.lambda {
        let mut w = v.clone();
        w.resize(na + nb, 0);
        lambda.push(w);
    }
    for v in &b.lambda {
        let mut w = vec![0; na];
        w.extend_from_slice(v);
        lambda.push(w);
    }
    CharacteristicPair::new(Base::Polytope(FaceComplex::product(pa, pb)), lambda)
}

/// Re-expresses a pair over a polygon as a pair over a disk whose boundary
/// edges follow the polygon's facets in cyclic order. Returns the pair and,
/// for each surface edge, the polygon facet it came from.
pub fn polygon_as_surface(p: &CharacteristicPair) -> Result<(CharacteristicPair, Vec<usize>), CharError> {
    let Some(poly) = p.base.as_polytope().filter(|q| q.dimension() == 2) else {
        return Err(CharError::PolytopeRequired("polygon conversion"));
    };
    let m = poly.facet_count();
    let mut order = vec![0];
    let mut visited = BTreeSet::from([0]);
    while order.len() < m {
        let cur = *order.last().expect("nonempty");
        let next = poly
            .vertices()
            .iter()
            .filter(|v| v.contains(cur))
            .flat_map(|v| v.facets().iter().copied())
            .find(|f| !visited.contains(f))
            .expect("polygon facets form a cycle");
        visited.insert(next);
        order.push(next);
    }
    let lambda = order.iter().map(|&f| p.lambda[f].clone()).collect();
    let pair = CharacteristicPair::new(Base::Surface(OrbitSurface::disk(m)), lambda)?;
    Ok((pair, order))
}

/// Combinatorial record of an equivariant connected sum glued along orbits
/// of dimension `k` sitting in the relative interiors of faces `E1`, `E2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectedSumDescriptor {
    pub left: CharacteristicPair,
    pub right: CharacteristicPair,
    pub k: usize,
    pub faces: [Face; 2],
}

/// Assumption carried by every connected-sum descriptor: the gluing is the
/// natural one between equal isotropy representations.
pub const GLUING_ASSUMPTION: &str =
    "isotropy representations at the glued orbits agree and the gluing map is the natural one";

impl ConnectedSumDescriptor {
    pub fn dimension(&self) -> usize {
        self.left.dimension()
    }

    /// Gluing at a fixed point produces a quasitoric manifold over the
    /// connected sum of polytopes; the theorems for `k >= 1` do not apply.
    pub fn is_quasitoric_redirect(&self) -> bool {
        self.k == 0
    }

    /// Fixed points of the sum. Defined for `k >= 1`, where the glued orbits
    /// carry no fixed points.
    pub fn vertex_count(&self) -> Option<usize> {
        (self.k >= 1).then(|| self.left.fixed_point_count() + self.right.fixed_point_count())
    }

    pub fn polytope(&self, side: Side) -> &FaceComplex {
        let pair = match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        };
        pair.base.as_polytope().expect("checked at construction")
    }

    pub fn face(&self, side: Side) -> &Face {
        match side {
            Side::Left => &self.faces[0],
            Side::Right => &self.faces[1],
        }
    }
}

pub fn connected_sum(
    left: &CharacteristicPair,
    right: &CharacteristicPair,
    k: usize,
    face_left: Face,
    face_right: Face,
) -> Result<ConnectedSumDescriptor, CharError> {
    let (Some(pl), Some(pr)) = (left.base.as_polytope(), right.base.as_polytope()) else {
        return Err(CharError::PolytopeRequired("connected sum"));
    };
    let n = pl.dimension();
    if pr.dimension() != n {
        return Err(CharError::DimensionMismatch { left: n, right: pr.dimension() });
    }
    if k > n {
        return Err(CharError::OrbitDimension { k, dimension: n });
    }
    for (side, poly, face, pair) in [(Side::Left, pl, &face_left, left), (Side::Right, pr, &face_right, right)] {
        if !poly.is_face(face) {
            return Err(CharError::UnknownFace { face: face.clone() });
        }
        let found = poly.face_dimension(face);
        if found != k {
            return Err(CharError::FaceDimension { side, face: face.clone(), expected: k, found });
        }
        if !pair.is_valid() {
            return Err(CharError::InvalidPair { side });
        }
    }
    Ok(ConnectedSumDescriptor { left: left.clone(), right: right.clone(), k, faces: [face_left, face_right] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combi::{BoundaryComponent, SurfaceDescriptor};
    use proptest::prelude::*;

    fn triangle(lambda: Vec<Vec<i64>>) -> CharacteristicPair {
        CharacteristicPair::new(Base::Polytope(FaceComplex::simplex(2)), lambda).unwrap()
    }

    fn cp2() -> CharacteristicPair {
        triangle(vec![vec![1, 0], vec![0, 1], vec![1, 1]])
    }

    fn segment() -> CharacteristicPair {
        CharacteristicPair::new(Base::Polytope(FaceComplex::simplex(1)), vec![vec![1], vec![1]]).unwrap()
    }

    fn square() -> CharacteristicPair {
        CharacteristicPair::new(
            Base::Polytope(FaceComplex::polygon(4).unwrap()),
            vec![vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]],
        )
        .unwrap()
    }

    fn surface_pair(corners: &[usize], lambda: Vec<Vec<i64>>) -> CharacteristicPair {
        let s = OrbitSurface::build(&SurfaceDescriptor {
            genus: 0,
            orientable: true,
            boundary: corners.iter().map(|&c| BoundaryComponent { corners: c }).collect(),
        })
        .unwrap();
        CharacteristicPair::new(Base::Surface(s), lambda).unwrap()
    }

    // Independent check: every vertex determinant is +-1.
    fn unimodular_at_vertices(p: &CharacteristicPair) -> bool {
        let poly = p.base().as_polytope().unwrap();
        poly.vertices().iter().all(|v| {
            let rows: Vec<Vec<i64>> = v.facets().iter().map(|&j| p.lambda()[j].clone()).collect();
            let d = crate::intlat::det_of_rows(&rows).unwrap();
            d == 1.into() || d == (-1).into()
        })
    }

    #[test]
    fn triangle_validity() {
        let good = cp2();
        assert!(good.is_valid());
        assert!(unimodular_at_vertices(&good));

        let bad = triangle(vec![vec![1, 0], vec![0, 2], vec![1, 1]]);
        let report = bad.validate();
        assert!(!report.valid);
        assert!(!unimodular_at_vertices(&bad));
        let sites: Vec<&Site> = report.failures.iter().map(|f| &f.site).collect();
        assert!(sites.contains(&&Site::Face(Face::new([0, 1]))));
        assert_eq!(report.failures[0].invariant_factors, vec!["1", "2"]);
    }

    #[test]
    fn square_validity() {
        assert!(square().is_valid());
        assert!(unimodular_at_vertices(&square()));
        assert!(square().validate_with(CheckMode::AllFaces).valid);
    }

    #[test]
    fn length_errors() {
        let e = CharacteristicPair::new(Base::Polytope(FaceComplex::simplex(2)), vec![vec![1, 0]]);
        assert_eq!(e, Err(CharError::VectorCount { expected: 3, found: 1 }));
        let e = CharacteristicPair::new(Base::Polytope(FaceComplex::simplex(2)), vec![vec![1, 0], vec![1], vec![1, 1]]);
        assert_eq!(e, Err(CharError::VectorLength { facet: 1, expected: 2, found: 1 }));
    }

    #[test]
    fn fixed_point_counts() {
        assert_eq!(cp2().fixed_points().len(), 3);
        let annulus = surface_pair(&[0, 0], vec![vec![1, 0], vec![1, 2]]);
        assert_eq!(annulus.fixed_points().len(), 0);
        let eye = surface_pair(&[2], vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(eye.fixed_points().len(), 2);
        assert!(eye.is_valid());
    }

    #[test]
    fn surface_checks() {
        // Circle vector must be primitive.
        let annulus = surface_pair(&[0, 0], vec![vec![1, 0], vec![2, 2]]);
        let r = annulus.validate();
        assert!(!r.valid);
        assert_eq!(r.failures[0].site, Site::Edge(1));
        // A corner where an edge meets itself never carries a basis.
        let cycle = surface_pair(&[1], vec![vec![1, 0]]);
        assert!(!cycle.is_valid());
    }

    #[test]
    fn isotropy() {
        let p = cp2();
        assert_eq!(p.isotropy_module(&Face::whole()).unwrap().rank(), 0);
        let v = p.isotropy_module(&Face::new([0, 1])).unwrap();
        assert_eq!(v.basis, vec![vec![1, 0], vec![0, 1]]);
        let f = p.isotropy_module(&Face::new([2])).unwrap();
        assert_eq!(f.basis, vec![vec![1, 1]]);
        assert!(matches!(p.isotropy_module(&Face::new([0, 1, 2])), Err(CharError::UnknownFace { .. })));
        let eye = surface_pair(&[2], vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(eye.isotropy_module(&Face::new([0, 1])).unwrap().rank(), 2);
    }

    #[test]
    fn products() {
        let sq = product_pair(&segment(), &segment()).unwrap();
        assert_eq!(sq.lambda(), &[vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]]);
        assert!(sq.is_valid());
        assert_eq!(sq.fixed_point_count(), 4);

        let prism = product_pair(&cp2(), &segment()).unwrap();
        let poly = prism.base().as_polytope().unwrap();
        assert_eq!((poly.facet_count(), poly.vertex_count()), (5, 6));
        assert!(prism.is_valid());

        let point = CharacteristicPair::new(Base::Polytope(FaceComplex::point()), vec![]).unwrap();
        let same = product_pair(&cp2(), &point).unwrap();
        assert_eq!(same.lambda(), cp2().lambda());
        assert_eq!(same.base(), cp2().base());

        let eye = surface_pair(&[2], vec![vec![1, 0], vec![0, 1]]);
        assert!(matches!(product_pair(&eye, &cp2()), Err(CharError::PolytopeRequired(_))));
    }

    #[test]
    fn polygon_conversion() {
        let (s, order) = polygon_as_surface(&square()).unwrap();
        assert_eq!(order.len(), 4);
        assert!(s.is_valid());
        assert_eq!(s.fixed_point_count(), 4);
    }

    #[test]
    fn connected_sums() {
        let d = connected_sum(&cp2(), &square(), 2, Face::whole(), Face::whole()).unwrap();
        assert_eq!(d.vertex_count(), Some(7));
        assert!(!d.is_quasitoric_redirect());

        let d0 = connected_sum(&cp2(), &square(), 0, Face::new([0, 1]), Face::new([0, 1])).unwrap();
        assert!(d0.is_quasitoric_redirect());
        assert_eq!(d0.vertex_count(), None);

        let e = connected_sum(&cp2(), &segment(), 1, Face::new([0]), Face::whole());
        assert_eq!(e, Err(CharError::DimensionMismatch { left: 2, right: 1 }));
        let e = connected_sum(&cp2(), &square(), 1, Face::new([0, 1]), Face::new([0]));
        assert!(matches!(e, Err(CharError::FaceDimension { side: Side::Left, .. })));
    }

    fn cube_pair() -> CharacteristicPair {
        let lambda = (0..3).flat_map(|d| {
            let mut e = vec![0; 3];
            e[d] = 1;
            [e.clone(), e]
        });
        CharacteristicPair::new(Base::Polytope(FaceComplex::cube(3)), lambda.collect()).unwrap()
    }

    proptest! {
        #[test]
        fn validity_sign_invariant(flips in proptest::collection::vec(any::<bool>(), 6), coord in 0usize..3) {
            let p = cube_pair();
            let flipped: Vec<Vec<i64>> = p.lambda().iter().zip(&flips)
                .map(|(v, &f)| if f { v.iter().map(|x| -x).collect() } else { v.clone() })
                .collect();
            let q = CharacteristicPair::new(p.base().clone(), flipped).unwrap();
            prop_assert!(q.is_valid());
            let col_flipped: Vec<Vec<i64>> = p.lambda().iter()
                .map(|v| { let mut w = v.clone(); w[coord] = -w[coord]; w })
                .collect();
            prop_assert!(CharacteristicPair::new(p.base().clone(), col_flipped).unwrap().is_valid());
        }

        #[test]
        fn validity_relabel_invariant(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(), bad in any::<bool>()) {
            let p = cube_pair();
            let mut lambda = p.lambda().to_vec();
            if bad {
                lambda[0] = vec![2, 0, 1];
            }
            let poly = p.base().as_polytope().unwrap();
            let vertex_sets: Vec<Vec<usize>> = poly.vertices().iter()
                .map(|v| v.facets().iter().map(|&j| perm[j]).collect())
                .collect();
            let mut relabelled = vec![Vec::new(); 6];
            for (j, v) in lambda.iter().enumerate() {
                relabelled[perm[j]] = v.clone();
            }
            let original = CharacteristicPair::new(p.base().clone(), lambda).unwrap();
            let moved = CharacteristicPair::new(
                Base::Polytope(FaceComplex::build(3, 6, vertex_sets).unwrap()),
                relabelled,
            ).unwrap();
            prop_assert_eq!(original.is_valid(), moved.is_valid());
            prop_assert_eq!(original.is_valid(), !bad);
        }

        #[test]
        fn product_fixed_points(a in 1usize..4, b in 3usize..6) {
            let left = CharacteristicPair::new(
                Base::Polytope(FaceComplex::simplex(a)),
                (0..=a).map(|i| if i < a { let mut e = vec![0; a]; e[i] = 1; e } else { vec![-1; a] }).collect(),
            ).unwrap();
            let right = CharacteristicPair::new(
                Base::Polytope(FaceComplex::polygon(b).unwrap()),
                (0..b).map(|i| if i % 2 == 0 { vec![1, 0] } else { vec![0, 1] }).collect(),
            ).unwrap();
            let prod = product_pair(&left, &right).unwrap();
            prop_assert_eq!(prod.fixed_point_count(), left.fixed_point_count() * right.fixed_point_count());
        }
    }
}
