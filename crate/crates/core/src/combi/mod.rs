//! Combinatorial bases: simple polytopes as face posets, orbit surfaces with
//! corners, and triangulations of those surfaces.

mod face_complex;
mod surface;
mod triangulation;

pub use face_complex::{Face, FaceComplex};
pub use surface::{BoundaryComponent, ComponentKind, Corner, OrbitSurface, SurfaceDescriptor};
pub use triangulation::{
    validate_triangulation, BoundaryLabel, EdgeKind, Triangulation, TriangulationReport, VertexKind,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombiError {
    #[error("polytope has no vertices")]
    NoVertices,
    #[error("vertex {vertex} lists a facet twice")]
    RepeatedFacet { vertex: usize },
    #[error("vertex {vertex} lies on {size} facets, a simple polytope of dimension {dimension} needs exactly {dimension}")]
    NotSimple { vertex: usize, size: usize, dimension: usize },
    #[error("facet {facet} out of range (polytope has {facet_count} facets)")]
    FacetOutOfRange { facet: usize, facet_count: usize },
    #[error("vertices {first} and {second} lie on the same facets")]
    DuplicateVertex { first: usize, second: usize },
    #[error("facet {facet} contains no vertex")]
    UnusedFacet { facet: usize },
    #[error("not connected")]
    Disconnected,
    #[error("edge {edge} has {endpoints} endpoints, expected 2")]
    BadEdge { edge: Face, endpoints: usize },
    #[error("a polygon needs at least 3 sides, got {0}")]
    PolygonTooSmall(usize),
    #[error("vertex {vertex} out of range ({count} vertices)")]
    UnknownVertex { vertex: usize, count: usize },
    #[error("surface has empty boundary")]
    NoBoundary,
    #[error("a non-orientable surface needs at least one crosscap")]
    NonOrientableGenusZero,
    #[error("triangle {triangle} uses unknown vertex {vertex}")]
    TriangleVertex { triangle: usize, vertex: usize },
    #[error("triangle {triangle} repeats a vertex")]
    DegenerateTriangle { triangle: usize },
    #[error("triangle {triangle} appears twice")]
    DuplicateTriangle { triangle: usize },
    #[error("vertex {vertex} is in no triangle")]
    UnusedVertex { vertex: usize },
    #[error("edge {edge:?} lies in {triangles} triangles")]
    EdgeValence { edge: [usize; 2], triangles: usize },
    #[error("link of vertex {vertex} is not a single path or cycle")]
    NonManifoldVertex { vertex: usize },
    #[error("labelled edge {edge:?} is not a boundary edge")]
    NotBoundaryEdge { edge: [usize; 2] },
    #[error("edge {edge:?} is labelled twice")]
    DuplicateLabel { edge: [usize; 2] },
    #[error("boundary edge {edge:?} has no surface edge label")]
    UnlabelledBoundaryEdge { edge: [usize; 2] },
    #[error("surface edge {surface_edge} out of range ({count} edges)")]
    SurfaceEdgeOutOfRange { surface_edge: usize, count: usize },
    #[error("corner list for boundary component {component} does not match the surface")]
    CornerData { component: usize },
    #[error("corner {index} of component {component} is vertex {vertex}, which is not a free boundary vertex")]
    CornerNotVertex { component: usize, index: usize, vertex: usize },
    #[error("surface edge {surface_edge}: {reason}")]
    SurfaceEdgePath { surface_edge: usize, reason: String },
}
