//! Face-ring computations for quasitoric manifolds: h-vectors, the
//! Stanley-Reisner presentation, rational cup-length and the vertex
//! determinant witness.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::charpair::{Base, BasePoint, CharacteristicPair};
use crate::combi::{ComponentKind, Corner, Face, FaceComplex};
use crate::intlat::det_of_rows;
use crate::invariants::Theorem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaceRingError {
    #[error("face-ring computations need a polytope base")]
    PolytopeRequired,
    #[error("characteristic pair is not valid")]
    InvalidPair,
    #[error("degree cap must be at least 1")]
    CapTooSmall,
    #[error("no determinant witness: {reason} ({citation})")]
    WitnessUnavailable { reason: String, citation: Theorem },
}

/// `h_0..h_n` from `sum_i f_i (t-1)^i = sum_i h_i t^i`, with `f_n = 1` for
/// the polytope itself.
pub fn h_vector(c: &FaceComplex) -> Vec<i64> {
    let mut f: Vec<i128> = c.f_vector().into_iter().map(|x| x as i128).collect();
    f.push(1);
    let n = c.dimension();
    let mut h = vec![0i128; n + 1];
    for (i, &fi) in f.iter().enumerate() {
        // (t-1)^i = sum_j C(i,j) t^j (-1)^(i-j)
        let mut binom: i128 = 1;
        for j in 0..=i {
            let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
            h[j] += fi * binom * sign;
            binom = binom * (i - j) as i128 / (j + 1) as i128;
        }
    }
    h.into_iter().map(|x| x as i64).collect()
}

/// Facet subsets that are not faces although every proper subset is.
pub fn minimal_non_faces(c: &FaceComplex) -> Vec<Face> {
    let mut out = std::collections::BTreeSet::new();
    for face in c.faces() {
        for j in 0..c.facet_count() {
            if face.contains(j) {
                continue;
            }
            let candidate = face.with(j);
            if c.is_face(&candidate) {
                continue;
            }
            if candidate.facets().iter().all(|&i| c.is_face(&candidate.without(i))) {
                out.insert(candidate);
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedRingPresentation {
    /// One degree-2 generator per facet.
    pub generators: usize,
    pub minimal_non_faces: Vec<Face>,
    /// Row `j` lists the coefficients of `theta_j = sum_i lambda_i[j] v_i`.
    pub linear_relations: Vec<Vec<i64>>,
}

/// Monomial part only; linear relations are empty.
pub fn stanley_reisner(c: &FaceComplex) -> GradedRingPresentation {
    GradedRingPresentation { generators: c.facet_count(), minimal_non_faces: minimal_non_faces(c), linear_relations: Vec::new() }
}

fn polytope_of(p: &CharacteristicPair) -> Result<&FaceComplex, FaceRingError> {
    let poly = p.base().as_polytope().ok_or(FaceRingError::PolytopeRequired)?;
    if !p.is_valid() {
        return Err(FaceRingError::InvalidPair);
    }
    Ok(poly)
}

pub fn presentation(p: &CharacteristicPair) -> Result<GradedRingPresentation, FaceRingError> {
    let poly = polytope_of(p)?;
    let n = poly.dimension();
    let linear = (0..n).map(|j| p.lambda().iter().map(|v| v[j]).collect()).collect();
    Ok(GradedRingPresentation { linear_relations: linear, ..stanley_reisner(poly) })
}

/// Monomial as a sorted list of generator indices (with repetition).
type Monomial = Vec<usize>;

fn support(m: &Monomial) -> Face {
    Face::new(m.iter().copied())
}

/// Degree-`d` monomials whose support is a face.
fn face_monomials(c: &FaceComplex, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    fn rec(c: &FaceComplex, d: usize, start: usize, current: &mut Monomial, out: &mut Vec<Monomial>) {
        if current.len() == d {
            out.push(current.clone());
            return;
        }
        for i in start..c.facet_count() {
            current.push(i);
            if c.is_face(&support(current)) {
                rec(c, d, i, current, out);
            }
            current.pop();
        }
    }
    rec(c, d, 0, &mut current, &mut out);
    out
}

/// Row-echelon accumulator over the rationals.
struct Echelon {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let factor = v[*pivot].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &factor * r;
                    }
                }
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    fn insert(&mut self, v: Vec<BigRational>) -> bool {
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let factor = row[pivot].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    if !r.is_zero() {
                        *x -= &factor * r;
                    }
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Degree-`d` piece of the rational quotient ring: its dimension and one
/// monomial whose class is nonzero, if any.
struct GradedPiece {
    dimension: usize,
    nonzero_monomial: Option<Monomial>,
}

fn graded_piece(p: &CharacteristicPair, poly: &FaceComplex, d: usize) -> GradedPiece {
    let basis = face_monomials(poly, d);
    if d == 0 {
        return GradedPiece { dimension: 1, nonzero_monomial: Some(Vec::new()) };
    }
    let index: std::collections::HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut relations = Echelon::new();
    for lower in face_monomials(poly, d - 1) {
        for j in 0..poly.dimension() {
            let mut row = vec![BigRational::zero(); basis.len()];
            for (i, v) in p.lambda().iter().enumerate() {
                if v[j] == 0 {
                    continue;
                }
                let mut m = lower.clone();
                let at = m.partition_point(|&x| x <= i);
                m.insert(at, i);
                // Non-face supports vanish in the face ring.
                if let Some(&col) = index.get(&m) {
                    row[col] += BigRational::from_integer(BigInt::from(v[j]));
                }
            }
            relations.insert(row);
        }
    }
    let dimension = basis.len() - relations.rank();
    let nonzero_monomial = basis.iter().enumerate().find_map(|(col, m)| {
        let mut unit = vec![BigRational::zero(); basis.len()];
        unit[col] = BigRational::one();
        let reduced = relations.reduce(unit);
        reduced.iter().any(|x| !x.is_zero()).then(|| m.clone())
    });
    GradedPiece { dimension, nonzero_monomial }
}

/// Ranks of the degree-`d` pieces (cohomological degree `2d`) for
/// `d = 0..=n`.
pub fn graded_dimensions(p: &CharacteristicPair) -> Result<Vec<usize>, FaceRingError> {
    let poly = polytope_of(p)?;
    Ok((0..=poly.dimension()).map(|d| graded_piece(p, poly, d).dimension).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CupLength {
    pub value: usize,
    pub cap: usize,
    /// Facet indices (with repetition) of a product of `value` generators
    /// that is nonzero.
    pub witness_monomial: Vec<usize>,
}

/// Largest `k <= cap` such that some product of `k` degree-2 classes is
/// nonzero in the rational cohomology ring.
pub fn cuplength_rational(p: &CharacteristicPair, cap: usize) -> Result<CupLength, FaceRingError> {
    if cap < 1 {
        return Err(FaceRingError::CapTooSmall);
    }
    let poly = polytope_of(p)?;
    let mut best = CupLength { value: 0, cap, witness_monomial: Vec::new() };
    // The ring is generated in degree one, so it vanishes above its first
    // zero piece.
    for d in 1..=cap {
        match graded_piece(p, poly, d).nonzero_monomial {
            Some(m) => best = CupLength { value: d, cap, witness_monomial: m },
            None => break,
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterminantWitness {
    pub point: BasePoint,
    pub facets: Vec<usize>,
    pub determinant: String,
    pub citation: Theorem,
}

/// A fixed point on a polytope boundary component whose characteristic
/// vectors have determinant +-1, certifying integral cup-length >= n.
pub fn vertex_cuplength_witness(p: &CharacteristicPair) -> Result<DeterminantWitness, FaceRingError> {
    let candidates: Vec<(BasePoint, Vec<usize>)> = match p.base() {
        Base::Polytope(poly) => poly
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| (BasePoint::Vertex(i), v.facets().to_vec()))
            .collect(),
        Base::Surface(s) => {
            if s.corner_count() == 0 {
                return Err(FaceRingError::WitnessUnavailable {
                    reason: "orbit space has no vertices".into(),
                    citation: Theorem::SurfaceCatSharpness,
                });
            }
            let polygons: Vec<usize> = s
                .components()
                .iter()
                .enumerate()
                .filter(|(_, c)| c.kind() == ComponentKind::Polygon)
                .map(|(i, _)| i)
                .collect();
            if polygons.is_empty() {
                return Err(FaceRingError::WitnessUnavailable {
                    reason: "no boundary component bounds a polygon".into(),
                    citation: Theorem::CupLengthBound,
                });
            }
            polygons
                .iter()
                .flat_map(|&component| (0..s.components()[component].corners).map(move |index| Corner { component, index }))
                .map(|corner| {
                    let (a, b) = s.corner_edges(corner);
                    (BasePoint::Corner(corner), vec![a, b])
                })
                .collect()
        }
    };
    for (point, facets) in candidates {
        let rows: Vec<&[i64]> = facets.iter().map(|&j| p.lambda()[j].as_slice()).collect();
        let det = det_of_rows(&rows).map_err(|_| FaceRingError::InvalidPair)?;
        if det.abs().is_one() {
            return Ok(DeterminantWitness { point, facets, determinant: det.to_string(), citation: Theorem::CupLengthBound });
        }
    }
    Err(FaceRingError::InvalidPair)
}
