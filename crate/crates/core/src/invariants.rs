//! Closed-form values of cat and cat_G, each reported with the results it
//! relies on and the hypotheses that were checked.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::charpair::{Base, CharacteristicPair, ConnectedSumDescriptor};

/// Citation tags. Reports carry the tag string; [`Theorem::statement`] gives
/// a one-line summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    QuasitoricCat,
    QuasitoricCatG,
    PolytopeBoundaryCat,
    CupLengthBound,
    ConsumCat,
    ConsumSimplyConnected,
    ConsumCatG,
    ConsumAtFixedPoint,
    DiagonalProductCatG,
    SurfaceCat,
    SurfaceCatSharpness,
    SurfaceCatGBounds,
    OrbitToFixedPoint,
    FixedPointSimplyConnected,
    TriangulationUpperBound,
    FixedComponentBound,
    FiniteFixedSet,
    OrbitSpaceBound,
    WedgeBound,
    EquivariantProductBound,
    CupLength,
    SimplyConnectedManifold,
    GcatOneContractible,
    CatAtLeastOne,
    DimensionBound,
    ProductBound,
    SphereS3,
    SphereS5,
    EvenSphere,
    SphereProduct,
    CircleTimesRp3,
    LensSpace,
}

impl Theorem {
    pub const ALL: [Theorem; 32] = [
        Theorem::QuasitoricCat,
        Theorem::QuasitoricCatG,
        Theorem::PolytopeBoundaryCat,
        Theorem::CupLengthBound,
        Theorem::ConsumCat,
        Theorem::ConsumSimplyConnected,
        Theorem::ConsumCatG,
        Theorem::ConsumAtFixedPoint,
        Theorem::DiagonalProductCatG,
        Theorem::SurfaceCat,
        Theorem::SurfaceCatSharpness,
        Theorem::SurfaceCatGBounds,
        Theorem::OrbitToFixedPoint,
        Theorem::FixedPointSimplyConnected,
        Theorem::TriangulationUpperBound,
        Theorem::FixedComponentBound,
        Theorem::FiniteFixedSet,
        Theorem::OrbitSpaceBound,
        Theorem::WedgeBound,
        Theorem::EquivariantProductBound,
        Theorem::CupLength,
        Theorem::SimplyConnectedManifold,
        Theorem::GcatOneContractible,
        Theorem::CatAtLeastOne,
        Theorem::DimensionBound,
        Theorem::ProductBound,
        Theorem::SphereS3,
        Theorem::SphereS5,
        Theorem::EvenSphere,
        Theorem::SphereProduct,
        Theorem::CircleTimesRp3,
        Theorem::LensSpace,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Theorem::QuasitoricCat => "quasitoric-cat",
            Theorem::QuasitoricCatG => "quasitoric-cat-g",
            Theorem::PolytopeBoundaryCat => "polytope-boundary-cat",
            Theorem::CupLengthBound => "cup-length-bound",
            Theorem::ConsumCat => "consum-cat",
            Theorem::ConsumSimplyConnected => "consum-simply-connected",
            Theorem::ConsumCatG => "consum-cat-g",
            Theorem::ConsumAtFixedPoint => "consum-at-fixed-point",
            Theorem::DiagonalProductCatG => "diagonal-product-cat-g",
            Theorem::SurfaceCat => "surface-cat",
            Theorem::SurfaceCatSharpness => "surface-cat-sharpness",
            Theorem::SurfaceCatGBounds => "surface-cat-g-bounds",
            Theorem::OrbitToFixedPoint => "orbit-to-fixed-point",
            Theorem::FixedPointSimplyConnected => "fixed-point-simply-connected",
            Theorem::TriangulationUpperBound => "triangulation-upper-bound",
            Theorem::FixedComponentBound => "fixed-component-bound",
            Theorem::FiniteFixedSet => "finite-fixed-set",
            Theorem::OrbitSpaceBound => "orbit-space-bound",
            Theorem::WedgeBound => "wedge-bound",
            Theorem::EquivariantProductBound => "equivariant-product-bound",
            Theorem::CupLength => "cup-length",
            Theorem::SimplyConnectedManifold => "simply-connected-manifold",
            Theorem::GcatOneContractible => "gcat-one-contractible",
            Theorem::CatAtLeastOne => "cat-at-least-one",
            Theorem::DimensionBound => "dimension-bound",
            Theorem::ProductBound => "product-bound",
            Theorem::SphereS3 => "sphere-s3",
            Theorem::SphereS5 => "sphere-s5",
            Theorem::EvenSphere => "even-sphere",
            Theorem::SphereProduct => "sphere-product",
            Theorem::CircleTimesRp3 => "circle-times-rp3",
            Theorem::LensSpace => "lens-space",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Theorem> {
        Theorem::ALL.iter().copied().find(|t| t.tag() == tag)
    }

    pub fn statement(self) -> &'static str {
        match self {
            Theorem::QuasitoricCat => "a 2n-dimensional quasitoric manifold has cat = n+1",
            Theorem::QuasitoricCatG => "a quasitoric manifold has cat_{T^n} equal to its number of fixed points",
            Theorem::PolytopeBoundaryCat => {
                "simply connected orbit space with a boundary component bounding a simple polytope: cat = n+1"
            }
            Theorem::CupLengthBound => {
                "a boundary component bounding a simple n-polytope forces cup-length >= n, so cat >= n+1"
            }
            Theorem::ConsumCat => "cat of an equivariant connected sum of quasitoric manifolds is n+1 unless k = n = 2",
            Theorem::ConsumSimplyConnected => {
                "equivariant connected sums of quasitoric manifolds are simply connected unless k = n = 2"
            }
            Theorem::ConsumCatG => "cat_{T^n} of a connected sum along a k-orbit, k >= 1, is |V(P1)| + |V(P2)|",
            Theorem::ConsumAtFixedPoint => "a connected sum at a fixed point is again quasitoric",
            Theorem::DiagonalProductCatG => {
                "diagonal T^n-action on a product of quasitoric manifolds: cat_{T^n} is the product of fixed point counts"
            }
            Theorem::SurfaceCat => "4-dimensional, some boundary component bounds a polygon: cat = 3",
            Theorem::SurfaceCatSharpness => "the polygon hypothesis is needed: the annulus and eye shape give other values",
            Theorem::SurfaceCatGBounds => {
                "4-dimensional: |fixed points| + 2s <= cat_{T^2} <= |fixed points| + 2s + 2, s = boundary circles"
            }
            Theorem::OrbitToFixedPoint => {
                "4-dimensional with a fixed point: every orbit contracts to it (cover sets need a fixed point)"
            }
            Theorem::FixedPointSimplyConnected => "a fixed point and a simply connected orbit space make M simply connected",
            Theorem::TriangulationUpperBound => "a triangulable orbit space gives cat <= n+1",
            Theorem::FixedComponentBound => "the number of path components of X^G is at most cat_G(X)",
            Theorem::FiniteFixedSet => "a finite fixed set has at most one point per G-categorical set",
            Theorem::OrbitSpaceBound => "cat(X/G) <= cat_G(X)",
            Theorem::WedgeBound => "pointed G-spaces: cat_G(X v Y) <= cat_G(X) + cat_G(Y) - 1",
            Theorem::EquivariantProductBound => {
                "G-connected factors with fixed points, completely normal product: cat_G(X x Y) <= cat_G(X) + cat_G(Y) - 1"
            }
            Theorem::CupLength => "cup-length + 1 <= cat",
            Theorem::SimplyConnectedManifold => "a simply connected closed 2n-manifold has cat <= n+1",
            Theorem::GcatOneContractible => "cat_G(X) = 1 with a fixed point makes X G-contractible",
            Theorem::CatAtLeastOne => "cat >= 1 for nonempty spaces",
            Theorem::DimensionBound => "a d-manifold has cat <= d+1",
            Theorem::ProductBound => "cat(X x Y) <= cat(X) + cat(Y) - 1",
            Theorem::SphereS3 => "standard T^2-action on S^3: no fixed points, cat_{T^2} = 2",
            Theorem::SphereS5 => "T^2-action on S^5 fixing the last coordinate: two fixed points, cat_{T^2} = 2",
            Theorem::EvenSphere => "T^n-action on S^2n over an eye-shape-type orbit space: cat_{T^n} = cat = 2",
            Theorem::SphereProduct => "diagonal T^2-action on S^3 x S^5: cat_{T^2} = 4",
            Theorem::CircleTimesRp3 => "annulus with circle vectors (1,0), (1,2) gives S^1 x RP^3, cat = 5",
            Theorem::LensSpace => "T^{n+1}-action on a lens space L(p; q_1..q_n): cat_{T^{n+1}} = n+1",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Theorem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CatKind {
    Cat,
    CatG,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "type")]
pub enum CatValue {
    Exact { value: u64 },
    Interval { lo: u64, hi: u64 },
    Unknown,
}

impl CatValue {
    pub fn contains(&self, v: u64) -> bool {
        match *self {
            CatValue::Exact { value } => value == v,
            CatValue::Interval { lo, hi } => lo <= v && v <= hi,
            CatValue::Unknown => true,
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match *self {
            CatValue::Exact { value } => Some(value),
            _ => None,
        }
    }
}

impl fmt::Display for CatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatValue::Exact { value } => write!(f, "{value}"),
            CatValue::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
            CatValue::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatResult {
    pub kind: CatKind,
    pub value: CatValue,
    pub citations: Vec<Theorem>,
    pub hypotheses: Vec<Hypothesis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CatResult {
    /// Builds a result; the value is dropped to unknown if any hypothesis
    /// failed.
    fn new(kind: CatKind, value: CatValue, citations: Vec<Theorem>, hypotheses: Vec<(&str, bool)>) -> Self {
        let hypotheses: Vec<Hypothesis> =
            hypotheses.into_iter().map(|(name, passed)| Hypothesis { name: name.to_string(), passed }).collect();
        let value = if hypotheses.iter().all(|h| h.passed) { value } else { CatValue::Unknown };
        CatResult { kind, value, citations, hypotheses, note: None }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("characteristic pair is not valid")]
    InvalidPair,
    #[error("{0} needs a polytope base")]
    PolytopeRequired(&'static str),
    #[error("{0} needs a surface base")]
    SurfaceRequired(&'static str),
    #[error("torus dimensions differ: {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("a diagonal product needs at least two factors")]
    TooFewFactors,
    #[error("gluing at a fixed point (k = 0) gives a quasitoric manifold; compute its fixed points and use the quasitoric formula")]
    QuasitoricRedirect,
}

fn valid_polytope_pair<'a>(p: &'a CharacteristicPair, op: &'static str) -> Result<&'a crate::combi::FaceComplex, InvariantError> {
    let poly = p.base().as_polytope().ok_or(InvariantError::PolytopeRequired(op))?;
    if !p.is_valid() {
        return Err(InvariantError::InvalidPair);
    }
    Ok(poly)
}

pub fn quasitoric_cat(p: &CharacteristicPair) -> Result<CatResult, InvariantError> {
    let poly = valid_polytope_pair(p, "quasitoric cat")?;
    Ok(CatResult::new(
        CatKind::Cat,
        CatValue::Exact { value: poly.dimension() as u64 + 1 },
        vec![Theorem::QuasitoricCat, Theorem::CupLength, Theorem::SimplyConnectedManifold],
        vec![("orbit space is a simple polytope", true), ("characteristic vectors valid at every vertex", true)],
    ))
}

pub fn quasitoric_cat_g(p: &CharacteristicPair) -> Result<CatResult, InvariantError> {
    let poly = valid_polytope_pair(p, "quasitoric cat_G")?;
    Ok(CatResult::new(
        CatKind::CatG,
        CatValue::Exact { value: poly.vertex_count() as u64 },
        vec![Theorem::QuasitoricCatG, Theorem::FixedComponentBound],
        vec![("orbit space is a simple polytope", true), ("characteristic vectors valid at every vertex", true)],
    ))
}

pub fn consum_cat(d: &ConnectedSumDescriptor) -> CatResult {
    let n = d.dimension();
    let excluded = d.k == 2 && n == 2;
    let r = CatResult::new(
        CatKind::Cat,
        CatValue::Exact { value: n as u64 + 1 },
        vec![Theorem::ConsumCat, Theorem::ConsumSimplyConnected, Theorem::PolytopeBoundaryCat],
        vec![("summands are quasitoric", true), ("not the case k = n = 2", !excluded)],
    );
    if excluded {
        r.with_note("simple connectivity of the sum is not established when k = n = 2")
    } else {
        r
    }
}

pub fn consum_cat_g(d: &ConnectedSumDescriptor) -> Result<CatResult, InvariantError> {
    if d.is_quasitoric_redirect() {
        return Err(InvariantError::QuasitoricRedirect);
    }
    let total = d.left.fixed_point_count() + d.right.fixed_point_count();
    Ok(CatResult::new(
        CatKind::CatG,
        CatValue::Exact { value: total as u64 },
        vec![Theorem::ConsumCatG, Theorem::FixedComponentBound],
        vec![("summands are quasitoric", true), ("gluing orbit has dimension k >= 1", true)],
    ))
}

/// Diagonal torus action on a product of two or more quasitoric manifolds
/// over the same torus.
pub fn diagonal_product_cat_g(factors: &[&CharacteristicPair]) -> Result<CatResult, InvariantError> {
    if factors.len() < 2 {
        return Err(InvariantError::TooFewFactors);
    }
    let n = factors[0].dimension();
    let mut product: u64 = 1;
    for f in factors {
        let poly = valid_polytope_pair(f, "diagonal product")?;
        if poly.dimension() != n {
            return Err(InvariantError::DimensionMismatch(n, poly.dimension()));
        }
        product *= poly.vertex_count() as u64;
    }
    let r = CatResult::new(
        CatKind::CatG,
        CatValue::Exact { value: product },
        vec![Theorem::DiagonalProductCatG, Theorem::FixedComponentBound],
        vec![("factors are quasitoric over the same torus", true)],
    );
    Ok(if factors.len() > 2 { r.with_note("l-fold form of the product formula") } else { r })
}

fn surface_pair<'a>(p: &'a CharacteristicPair, op: &'static str) -> Result<&'a crate::combi::OrbitSurface, InvariantError> {
    p.base().as_surface().ok_or(InvariantError::SurfaceRequired(op))
}

pub fn torus4d_cat(p: &CharacteristicPair) -> Result<CatResult, InvariantError> {
    let s = surface_pair(p, "4-dimensional cat")?;
    let polygon = s.has_polygon_component();
    let r = CatResult::new(
        CatKind::Cat,
        CatValue::Exact { value: 3 },
        vec![Theorem::SurfaceCat, Theorem::CupLengthBound, Theorem::OrbitToFixedPoint],
        vec![("characteristic pair valid", p.is_valid()), ("a boundary component bounds a polygon", polygon)],
    );
    Ok(if polygon {
        r
    } else {
        let mut r = r.with_note("no polygon boundary component; the value 3 fails for e.g. S^1 x RP^3 (cat 5) and S^4 (cat 2)");
        r.citations.push(Theorem::SurfaceCatSharpness);
        r
    })
}

pub fn torus4d_cat_g_bounds(p: &CharacteristicPair) -> Result<CatResult, InvariantError> {
    let s = surface_pair(p, "4-dimensional cat_G bounds")?;
    let k = s.corner_count() as u64;
    let circles = s.circle_count() as u64;
    Ok(CatResult::new(
        CatKind::CatG,
        CatValue::Interval { lo: k + 2 * circles, hi: k + 2 * circles + 2 },
        vec![Theorem::SurfaceCatGBounds, Theorem::FixedComponentBound],
        vec![("characteristic pair valid", p.is_valid())],
    ))
}

/// Every result that applies to the pair.
pub fn all_invariants(p: &CharacteristicPair) -> Result<Vec<CatResult>, InvariantError> {
    match p.base() {
        Base::Polytope(_) => Ok(vec![quasitoric_cat(p)?, quasitoric_cat_g(p)?]),
        Base::Surface(_) => Ok(vec![torus4d_cat(p)?, torus4d_cat_g_bounds(p)?]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    True,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleConnectivity {
    pub answer: Answer,
    pub citations: Vec<Theorem>,
    pub hypotheses: Vec<Hypothesis>,
}

fn connectivity(citation: Theorem, checks: Vec<(&str, bool)>) -> SimpleConnectivity {
    let hypotheses: Vec<Hypothesis> =
        checks.into_iter().map(|(name, passed)| Hypothesis { name: name.to_string(), passed }).collect();
    let answer = if hypotheses.iter().all(|h| h.passed) { Answer::True } else { Answer::Unknown };
    SimpleConnectivity { answer, citations: vec![citation], hypotheses }
}

/// Never answers "no": a failed hypothesis only means the theorems are
/// silent.
pub fn simply_connected(p: &CharacteristicPair) -> SimpleConnectivity {
    match p.base() {
        Base::Polytope(poly) => connectivity(
            Theorem::FixedPointSimplyConnected,
            vec![("has a fixed point", poly.vertex_count() > 0), ("orbit space simply connected", true)],
        ),
        Base::Surface(s) => connectivity(
            Theorem::FixedPointSimplyConnected,
            vec![("has a fixed point", s.corner_count() > 0), ("orbit space simply connected", s.is_disk())],
        ),
    }
}

pub fn consum_simply_connected(d: &ConnectedSumDescriptor) -> SimpleConnectivity {
    connectivity(Theorem::ConsumSimplyConnected, vec![("not the case k = n = 2", !(d.k == 2 && d.dimension() == 2))])
}
