//! Categorical-cover certificates: finite families of symbolic open sets in
//! the orbit space, each with a contraction target, plus a verifier that
//! re-derives coverage and the per-construction constraints from the
//! membership rules alone.

mod lens;
mod polytope;
mod surface;

pub use lens::lens_cover;
pub use polytope::{consum_cover, vertex_cover};
pub use surface::{qtm4_cover, triangulation_cover, Orientation};

use serde::Serialize;
use thiserror::Error;

use crate::charpair::{CharacteristicPair, ConnectedSumDescriptor, Side};
use crate::combi::{CombiError, Face, Triangulation};
use crate::invariants::Theorem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("characteristic pair is not valid")]
    InvalidPair,
    #[error("this cover needs a polytope base")]
    PolytopeRequired,
    #[error("this cover needs a surface base with a triangulation")]
    SurfaceRequired,
    #[error("gluing at a fixed point (k = 0) gives a quasitoric manifold; use the vertex cover of the sum")]
    QuasitoricRedirect,
    #[error("gluing face {face} on the {side} side has fewer than two vertices")]
    GluingFaceTooSmall { side: Side, face: Face },
    #[error("no fixed point: every orbit must contract to a fixed point ({citation})")]
    NoFixedPoint { citation: Theorem },
    #[error("triangulation: {0}")]
    Triangulation(#[from] CombiError),
    #[error("triangulation Euler characteristic {found} does not match the surface ({expected})")]
    EulerMismatch { expected: i64, found: i64 },
    #[error("boundary component {component} has a single corner; the edge-run construction needs distinct endpoints")]
    CornerCycle { component: usize },
    #[error("triangulation has interior vertices {vertices:?}; the bound construction covers interior edges and faces only")]
    InteriorVertices { vertices: Vec<usize> },
    #[error("orientation lists {found} components, surface has {expected}")]
    Orientation { expected: usize, found: usize },
    #[error("certificate was built for {certificate}, not for {base}")]
    BaseMismatch { certificate: String, base: String },
    #[error("certificate references {0}, which is not in the base")]
    DanglingReference(String),
}

/// What the certificate was built from; checked before verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum BaseSummary {
    Polytope { dimension: usize, facets: usize, vertices: usize },
    ConnectedSum { dimension: usize, k: usize, left_vertices: usize, right_vertices: usize },
    Triangulated { genus: u32, orientable: bool, corners: Vec<usize>, triangulation_vertices: usize, triangles: usize },
    Lens { n: usize },
}

impl std::fmt::Display for BaseSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&serde_json::to_string(self).unwrap_or_default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Vertex,
    ConnectedSum,
    Triangulation,
    SurfaceBound,
    Lens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetKind {
    VertexComplement,
    VertexStars,
    EdgeTubes,
    FaceDiscs,
    EdgeRun,
    CircleSlice,
    MarkedStar,
    Chart,
}

/// Where a set contracts to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Target {
    /// A fixed point over a polytope vertex.
    Vertex { vertex: usize },
    /// A fixed point over a vertex of one summand of a connected sum.
    SideVertex { side: Side, vertex: usize },
    /// The orbit over the barycenter of a triangulation simplex.
    Barycenter { simplex: Vec<usize> },
    /// A one-dimensional coordinate orbit.
    Orbit { coordinate: usize },
}

/// Decidable membership rule of a symbolic open set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Membership {
    /// The polytope minus the listed closed facets.
    FaceComplement { removed_facets: Vec<usize> },
    /// One summand minus closed facets, the gluing tube and the listed arcs
    /// (indices into the certificate's paths on that side).
    SumPiece { side: Side, removed_facets: Vec<usize>, removed_tube: bool, removed_paths: Vec<usize> },
    /// Union of open stars, in the barycentric subdivision, of the
    /// barycenters of the listed triangulation simplices.
    Stars { centers: Vec<Vec<usize>> },
    /// Points whose homogeneous coordinate `coordinate` is nonzero.
    Chart { coordinate: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpenSet {
    pub label: String,
    pub kind: SetKind,
    pub target: Target,
    pub rule: Membership,
    /// Readable names of the removed regions.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub removed: Vec<String>,
}

/// A symbolic arc from the gluing point to a vertex of the gluing face,
/// running through the face's relative interior.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathRecord {
    pub label: String,
    pub side: Side,
    pub index: usize,
    pub to_vertex: usize,
    pub within: Face,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub(crate) fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, detail: None }
    }

    pub(crate) fn detail(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: Some(detail.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub(crate) fn from_checks(checks: Vec<Check>) -> Self {
        VerificationReport { passed: checks.iter().all(|c| c.passed), checks }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverCertificate {
    pub construction: Construction,
    pub base: BaseSummary,
    pub citations: Vec<Theorem>,
    /// Number of sets, i.e. the upper bound certified.
    pub size: usize,
    pub sets: Vec<OpenSet>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<PathRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<Orientation>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Verification result at construction time.
    pub verification: VerificationReport,
}

impl CoverCertificate {
    pub fn passed(&self) -> bool {
        self.verification.passed
    }

    /// Removes set `index`, keeping `size` in step. Verification must be
    /// rerun by the caller.
    pub fn remove_set(&mut self, index: usize) -> OpenSet {
        let set = self.sets.remove(index);
        self.size = self.sets.len();
        set
    }
}

/// What a certificate is verified against.
#[derive(Debug, Clone, Copy)]
pub enum CoverBase<'a> {
    Polytope(&'a CharacteristicPair),
    ConnectedSum(&'a ConnectedSumDescriptor),
    Surface { pair: &'a CharacteristicPair, triangulation: &'a Triangulation },
    Lens { n: usize },
}

/// Re-derives every fact from the membership rules. Structural problems
/// (wrong base, references to missing faces) are errors; failed facts are
/// reported.
pub fn verify_cover(cert: &CoverCertificate, base: CoverBase<'_>) -> Result<VerificationReport, CoverError> {
    match (cert.construction, base) {
        (Construction::Vertex, CoverBase::Polytope(p)) => polytope::verify_vertex(cert, p),
        (Construction::ConnectedSum, CoverBase::ConnectedSum(d)) => polytope::verify_consum(cert, d),
        (Construction::Triangulation, CoverBase::Surface { pair, triangulation }) => {
            surface::verify_triangulation_cover(cert, pair, triangulation)
        }
        (Construction::SurfaceBound, CoverBase::Surface { pair, triangulation }) => {
            surface::verify_qtm4(cert, pair, triangulation)
        }
        (Construction::Lens, CoverBase::Lens { n }) => lens::verify_lens(cert, n),
        (construction, base) => Err(CoverError::BaseMismatch {
            certificate: format!("{construction:?} cover"),
            base: match base {
                CoverBase::Polytope(_) => "a polytope pair".into(),
                CoverBase::ConnectedSum(_) => "a connected sum".into(),
                CoverBase::Surface { .. } => "a triangulated surface".into(),
                CoverBase::Lens { .. } => "a lens space".into(),
            },
        }),
    }
}

pub(crate) fn check_summary(cert: &CoverCertificate, actual: &BaseSummary) -> Result<(), CoverError> {
    if &cert.base != actual {
        return Err(CoverError::BaseMismatch { certificate: cert.base.to_string(), base: actual.to_string() });
    }
    Ok(())
}

/// Coverage check over named atoms.
pub(crate) fn coverage_check<A: std::fmt::Debug>(atoms: &[A], mut covered: impl FnMut(&A) -> bool) -> Check {
    let missing: Vec<String> = atoms.iter().filter(|a| !covered(a)).map(|a| format!("{a:?}")).collect();
    if missing.is_empty() {
        Check::detail("coverage", true, format!("all {} atoms covered", atoms.len()))
    } else {
        Check::detail("coverage", false, format!("uncovered: {}", missing.join(", ")))
    }
}
