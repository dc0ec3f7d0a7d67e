//! Built-in pairs and descriptors with their known category values.

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{apply_rules, Interval, Invariant, SpaceDescriptor};
use crate::charpair::{connected_sum, Base, CharacteristicPair, ConnectedSumDescriptor};
use crate::combi::{BoundaryComponent, BoundaryLabel, Face, FaceComplex, OrbitSurface, SurfaceDescriptor, Triangulation};
use crate::cover::{lens_cover, CoverCertificate};
use crate::invariants::{all_invariants, consum_cat, consum_cat_g, CatKind, CatValue, Theorem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("no catalog entry named {0:?}")]
    NotFound(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryData {
    Pair { pair: CharacteristicPair, triangulation: Option<Triangulation> },
    ConnectedSum(ConnectedSumDescriptor),
    /// A descriptor world; `subject` names the space the entry is about.
    World { spaces: Vec<SpaceDescriptor>, subject: String },
    Lens { p: u64, q: Vec<u64>, descriptor: SpaceDescriptor },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KnownValue {
    pub kind: CatKind,
    pub value: u64,
    pub citation: Theorem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub summary: String,
    pub data: EntryData,
    pub known_values: Vec<KnownValue>,
    pub notes: Vec<String>,
}

impl CatalogEntry {
    pub fn pair(&self) -> Option<&CharacteristicPair> {
        match &self.data {
            EntryData::Pair { pair, .. } => Some(pair),
            _ => None,
        }
    }

    pub fn triangulation(&self) -> Option<&Triangulation> {
        match &self.data {
            EntryData::Pair { triangulation, .. } => triangulation.as_ref(),
            _ => None,
        }
    }

    pub fn known(&self, kind: CatKind) -> Option<u64> {
        self.known_values.iter().find(|k| k.kind == kind).map(|k| k.value)
    }

    /// Covering certificate recorded with the entry, if any.
    pub fn certificate(&self) -> Option<CoverCertificate> {
        match &self.data {
            EntryData::Lens { q, .. } => Some(lens_cover(q.len())),
            _ => None,
        }
    }
}

fn known(kind: CatKind, value: u64, citation: Theorem) -> KnownValue {
    KnownValue { kind, value, citation }
}

fn standard_vectors(n: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    out.push(vec![-1; n]);
    out
}

/// `CP^n`: the n-simplex with `e_1, ..., e_n, -(e_1 + ... + e_n)`; facet `i`
/// is opposite vertex `i`.
pub fn projective_space(n: usize) -> CharacteristicPair {
    CharacteristicPair::new(Base::Polytope(FaceComplex::simplex(n)), standard_vectors(n)).expect("shape matches")
}

/// `(CP^1)^n` over the n-cube, facets `2d` and `2d + 1` both carrying `e_d`.
pub fn projective_line_power(n: usize) -> CharacteristicPair {
    let lambda = (0..n)
        .flat_map(|d| {
            let e: Vec<i64> = (0..n).map(|j| i64::from(j == d)).collect();
            [e.clone(), e]
        })
        .collect();
    CharacteristicPair::new(Base::Polytope(FaceComplex::cube(n)), lambda).expect("shape matches")
}

/// Square with `(1,0), (0,1), (-1,a), (0,-1)`: valid for every `a`.
pub fn hirzebruch(a: i64) -> CharacteristicPair {
    CharacteristicPair::new(
        Base::Polytope(FaceComplex::polygon(4).expect("square")),
        vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
    )
    .expect("shape matches")
}

fn square() -> CharacteristicPair {
    CharacteristicPair::new(
        Base::Polytope(FaceComplex::polygon(4).expect("square")),
        vec![vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]],
    )
    .expect("shape matches")
}

fn label(a: usize, b: usize, surface_edge: usize) -> BoundaryLabel {
    BoundaryLabel { edge: [a, b], surface_edge }
}

fn surface_pair(s: OrbitSurface, lambda: Vec<Vec<i64>>) -> CharacteristicPair {
    CharacteristicPair::new(Base::Surface(s), lambda).expect("shape matches")
}

/// One triangle, corners at its vertices.
pub fn triangle_disk() -> (CharacteristicPair, Triangulation) {
    let t = Triangulation {
        vertex_count: 3,
        triangles: vec![[0, 1, 2]],
        corners: vec![vec![0, 1, 2]],
        boundary: vec![label(0, 1, 0), label(1, 2, 1), label(2, 0, 2)],
    };
    (surface_pair(OrbitSurface::disk(3), standard_vectors(2)), t)
}

/// Eye shape split into two triangles by the chord between the midpoints
/// of its edges.
pub fn eye_shape() -> (CharacteristicPair, Triangulation) {
    let t = Triangulation {
        vertex_count: 4,
        triangles: vec![[0, 2, 3], [2, 1, 3]],
        corners: vec![vec![0, 1]],
        boundary: vec![label(0, 2, 0), label(2, 1, 0), label(1, 3, 1), label(3, 0, 1)],
    };
    (surface_pair(OrbitSurface::disk(2), vec![vec![1, 0], vec![0, 1]]), t)
}

/// Annulus as two squares joined by eight triangles; the boundary circles
/// carry `(1,0)` and `(1,2)`.
pub fn annulus() -> (CharacteristicPair, Triangulation) {
    let s = OrbitSurface::build(&SurfaceDescriptor {
        genus: 0,
        orientable: true,
        boundary: vec![BoundaryComponent { corners: 0 }, BoundaryComponent { corners: 0 }],
    })
    .expect("annulus");
    let mut triangles = Vec::new();
    let mut boundary = Vec::new();
    for i in 0..4 {
        let j = (i + 1) % 4;
        triangles.push([i, j, 4 + i]);
        triangles.push([j, 4 + j, 4 + i]);
        boundary.push(label(i, j, 0));
        boundary.push(label(4 + i, 4 + j, 1));
    }
    let t = Triangulation { vertex_count: 8, triangles, corners: vec![vec![], vec![]], boundary };
    (surface_pair(s, vec![vec![1, 0], vec![1, 2]]), t)
}

/// Pentagon triangulated as a fan from vertex 0.
pub fn pentagon_disk() -> (CharacteristicPair, Triangulation) {
    let t = Triangulation {
        vertex_count: 5,
        triangles: vec![[0, 1, 2], [0, 2, 3], [0, 3, 4]],
        corners: vec![vec![0, 1, 2, 3, 4]],
        boundary: (0..5).map(|i| label(i, (i + 1) % 5, i)).collect(),
    };
    let lambda = vec![vec![1, 0], vec![0, 1], vec![-1, 1], vec![-1, 0], vec![0, -1]];
    (surface_pair(OrbitSurface::disk(5), lambda), t)
}

pub fn triangle_square_sum() -> ConnectedSumDescriptor {
    connected_sum(&projective_space(2), &square(), 2, Face::whole(), Face::whole()).expect("valid gluing data")
}

/// The sphere worlds. With `fixed_points_on_s3` the 3-sphere is (falsely)
/// declared to have fixed points, which is the control case for the
/// diagonal product rule.
pub fn sphere_world(fixed_points_on_s3: bool) -> Vec<SpaceDescriptor> {
    let sphere = |name: &str, dim: u64| SpaceDescriptor {
        dimension: Some(dim),
        g_connected: true,
        completely_normal: true,
        simply_connected: true,
        is_manifold: true,
        cat: Some(Interval::exact(2)),
        ..SpaceDescriptor::named(name)
    };
    vec![
        SpaceDescriptor { has_fixed_point: Some(fixed_points_on_s3), cat_g: Some(Interval::exact(2)), ..sphere("S3", 3) },
        SpaceDescriptor { fixed_point_count: Some(2), cat_g: Some(Interval { lo: 1, hi: Some(2) }), ..sphere("S5", 5) },
        SpaceDescriptor {
            has_fixed_point: Some(fixed_points_on_s3),
            dimension: Some(8),
            g_connected: true,
            completely_normal: true,
            simply_connected: true,
            is_manifold: true,
            relation: Some(crate::bounds::Relation::DiagonalProductOf { factors: ["S3".into(), "S5".into()] }),
            ..SpaceDescriptor::named("S3xS5")
        },
    ]
}

pub fn lens_name(p: u64, q: &[u64]) -> String {
    let mut name = format!("lens-{p}");
    for x in q {
        name.push_str(&format!("-{x}"));
    }
    name
}

/// `L(p; q_1, ..., q_n)` with its `T^{n+1}`-action: `n + 1` circle orbits
/// and no fixed points.
pub fn lens_descriptor(p: u64, q: &[u64]) -> SpaceDescriptor {
    let n = q.len() as u64;
    SpaceDescriptor {
        dimension: Some(2 * n + 1),
        has_fixed_point: Some(false),
        is_manifold: true,
        completely_normal: true,
        simply_connected: p == 1,
        cat_g: Some(Interval::exact(n + 1)),
        ..SpaceDescriptor::named(lens_name(p, q))
    }
}

fn lens_weights(p: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| i % (p - 1) + 1).collect()
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push(CatalogEntry {
            name: format!("CP{n}"),
            summary: format!("complex projective {n}-space over the {n}-simplex"),
            data: EntryData::Pair { pair: projective_space(n), triangulation: None },
            known_values: vec![
                known(CatKind::Cat, n as u64 + 1, Theorem::QuasitoricCat),
                known(CatKind::CatG, n as u64 + 1, Theorem::QuasitoricCatG),
            ],
            notes: Vec::new(),
        });
    }
    for n in 2..=4 {
        out.push(CatalogEntry {
            name: format!("CP1^{n}"),
            summary: format!("product of {n} projective lines over the {n}-cube"),
            data: EntryData::Pair { pair: projective_line_power(n), triangulation: None },
            known_values: vec![
                known(CatKind::Cat, n as u64 + 1, Theorem::QuasitoricCat),
                known(CatKind::CatG, 1 << n, Theorem::QuasitoricCatG),
            ],
            notes: Vec::new(),
        });
    }
    out.push(CatalogEntry {
        name: "triangle#square".into(),
        summary: "equivariant connected sum of CP2 and CP1xCP1 along free orbits (k = 2)".into(),
        data: EntryData::ConnectedSum(triangle_square_sum()),
        known_values: vec![known(CatKind::CatG, 7, Theorem::ConsumCatG)],
        notes: vec![crate::charpair::GLUING_ASSUMPTION.into()],
    });
    let (pair, t) = triangle_disk();
    out.push(CatalogEntry {
        name: "CP2-disk".into(),
        summary: "CP2 with its orbit space read as a triangle-shaped surface".into(),
        data: EntryData::Pair { pair, triangulation: Some(t) },
        known_values: vec![known(CatKind::Cat, 3, Theorem::SurfaceCat), known(CatKind::CatG, 3, Theorem::QuasitoricCatG)],
        notes: Vec::new(),
    });
    let (pair, t) = pentagon_disk();
    out.push(CatalogEntry {
        name: "pentagon-disk".into(),
        summary: "quasitoric 4-manifold over the pentagon, orbit space read as a surface".into(),
        data: EntryData::Pair { pair, triangulation: Some(t) },
        known_values: vec![known(CatKind::Cat, 3, Theorem::SurfaceCat), known(CatKind::CatG, 5, Theorem::QuasitoricCatG)],
        notes: Vec::new(),
    });
    let (pair, t) = eye_shape();
    out.push(CatalogEntry {
        name: "S4".into(),
        summary: "4-sphere with T^2 acting over the eye shape".into(),
        data: EntryData::Pair { pair, triangulation: Some(t) },
        known_values: vec![known(CatKind::Cat, 2, Theorem::EvenSphere), known(CatKind::CatG, 2, Theorem::EvenSphere)],
        notes: Vec::new(),
    });
    let (pair, t) = annulus();
    out.push(CatalogEntry {
        name: "S1xRP3".into(),
        summary: "S^1 x RP^3 over the annulus, boundary vectors (1,0) and (1,2)".into(),
        data: EntryData::Pair { pair, triangulation: Some(t) },
        known_values: vec![known(CatKind::Cat, 5, Theorem::CircleTimesRp3)],
        notes: vec![
            "the determinant 2 between the circle vectors makes the quotient of T^2 x I the lens space L(2;1) = RP^3; taken as a cited construction, not recomputed".into(),
        ],
    });
    for (name, citation) in [("S3", Theorem::SphereS3), ("S5", Theorem::SphereS5)] {
        let world: Vec<SpaceDescriptor> = sphere_world(false).into_iter().filter(|d| d.name == name).collect();
        out.push(CatalogEntry {
            name: name.into(),
            summary: format!("{name} with the standard T^2-action"),
            data: EntryData::World { spaces: world, subject: name.into() },
            known_values: vec![known(CatKind::CatG, 2, citation)],
            notes: Vec::new(),
        });
    }
    out.push(CatalogEntry {
        name: "S3xS5".into(),
        summary: "S3 x S5 with the diagonal T^2-action".into(),
        data: EntryData::World { spaces: sphere_world(false), subject: "S3xS5".into() },
        known_values: vec![known(CatKind::CatG, 4, Theorem::SphereProduct)],
        notes: vec!["the value 4 is not part of the world; the rules alone must stay consistent with it".into()],
    });
    for n in 1..=3 {
        for p in [2u64, 3, 5] {
            let q = lens_weights(p, n);
            out.push(CatalogEntry {
                name: lens_name(p, &q),
                summary: format!("lens space L({p}; {}) with the T^{}-action", q.iter().map(u64::to_string).collect::<Vec<_>>().join(", "), n + 1),
                data: EntryData::Lens { p, descriptor: lens_descriptor(p, &q), q },
                known_values: vec![known(CatKind::CatG, n as u64 + 1, Theorem::LensSpace)],
                notes: vec![format!("recorded with the {}-chart covering certificate", n + 1)],
            });
        }
    }
    out
}

pub fn lookup(name: &str) -> Result<CatalogEntry, CatalogError> {
    catalog_entries().into_iter().find(|e| e.name == name).ok_or_else(|| CatalogError::NotFound(name.to_string()))
}

/// A known value next to what the library derives for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reproduction {
    pub known: KnownValue,
    pub computed: String,
    /// The computation gives exactly the known value.
    pub exact: bool,
    /// The computation is consistent with it.
    pub consistent: bool,
}

fn compare(known: KnownValue, value: CatValue) -> Reproduction {
    Reproduction {
        known,
        computed: value.to_string(),
        exact: value.exact() == Some(known.value),
        consistent: value.contains(known.value),
    }
}

fn compare_interval(known: KnownValue, interval: Interval) -> Reproduction {
    Reproduction {
        known,
        computed: interval.to_string(),
        exact: interval.hi == Some(interval.lo) && interval.lo == known.value,
        consistent: interval.contains(known.value),
    }
}

/// Recomputes every known value that the library can reach.
pub fn reproduce(entry: &CatalogEntry) -> Vec<Reproduction> {
    let kinds = |v: &KnownValue| v.kind;
    match &entry.data {
        EntryData::Pair { pair, .. } => {
            let results = all_invariants(pair).unwrap_or_default();
            entry
                .known_values
                .iter()
                .filter_map(|&k| results.iter().find(|r| r.kind == kinds(&k)).map(|r| compare(k, r.value)))
                .collect()
        }
        EntryData::ConnectedSum(d) => entry
            .known_values
            .iter()
            .filter_map(|&k| match k.kind {
                CatKind::Cat => Some(compare(k, consum_cat(d).value)),
                CatKind::CatG => consum_cat_g(d).ok().map(|r| compare(k, r.value)),
            })
            .collect(),
        EntryData::World { spaces, subject } => {
            let Ok(state) = apply_rules(spaces) else { return Vec::new() };
            entry
                .known_values
                .iter()
                .filter_map(|&k| state.interval(subject, invariant(k.kind)).map(|i| compare_interval(k, i)))
                .collect()
        }
        EntryData::Lens { descriptor, .. } => {
            let Ok(state) = apply_rules(std::slice::from_ref(descriptor)) else { return Vec::new() };
            entry
                .known_values
                .iter()
                .filter_map(|&k| state.interval(&descriptor.name, invariant(k.kind)).map(|i| compare_interval(k, i)))
                .collect()
        }
    }
}

pub fn invariant(kind: CatKind) -> Invariant {
    match kind {
        CatKind::Cat => Invariant::Cat,
        CatKind::CatG => Invariant::CatG,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combi::validate_triangulation;

    #[test]
    fn names_unique_and_lookup() {
        let entries = catalog_entries();
        let mut names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), entries.len());
        let cp2 = lookup("CP2").unwrap();
        assert_eq!((cp2.known(CatKind::Cat), cp2.known(CatKind::CatG)), (Some(3), Some(3)));
        assert_eq!(cp2.pair().unwrap().base().as_polytope().unwrap().vertex_count(), 3);
        assert_eq!(lookup("S3xS5").unwrap().known(CatKind::CatG), Some(4));
        assert_eq!(lookup("CP9"), Err(CatalogError::NotFound("CP9".into())));
    }

    #[test]
    fn pairs_valid_and_triangulations_consistent() {
        for e in catalog_entries() {
            if let Some(p) = e.pair() {
                assert!(p.is_valid(), "{}", e.name);
                if let Some(t) = e.triangulation() {
                    let r = validate_triangulation(t, p.base().as_surface().unwrap()).unwrap();
                    assert!(r.euler_consistent, "{}", e.name);
                }
            }
        }
    }

    #[test]
    fn known_values_reproduced() {
        for e in catalog_entries() {
            for r in reproduce(&e) {
                assert!(r.consistent, "{}: {:?}", e.name, r);
            }
        }
        // Exact reproduction where the library has a formula.
        for name in ["CP1", "CP3", "CP5", "CP1^3", "triangle#square", "CP2-disk", "pentagon-disk", "lens-3-1-2"] {
            let e = lookup(name).unwrap();
            let reps = reproduce(&e);
            assert!(!reps.is_empty());
            // Over surfaces only cat has a formula; cat_G gets an interval.
            let surface = e.triangulation().is_some();
            for r in reps.iter().filter(|r| !surface || r.known.kind == CatKind::Cat) {
                assert!(r.exact, "{name}: {r:?}");
            }
        }
    }

    #[test]
    fn hirzebruch_family_valid() {
        for a in -6..=6 {
            assert!(hirzebruch(a).is_valid());
        }
    }

    #[test]
    fn lens_weights_coprime() {
        for e in catalog_entries() {
            if let EntryData::Lens { p, q, .. } = &e.data {
                assert!(q.iter().all(|&x| num_integer::gcd(*p, x) == 1));
                assert_eq!(e.certificate().unwrap().size, q.len() + 1);
            }
        }
    }
}
