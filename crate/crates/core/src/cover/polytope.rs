use std::collections::BTreeSet;

use crate::charpair::{CharacteristicPair, ConnectedSumDescriptor, Side};
use crate::combi::{Face, FaceComplex};
use crate::invariants::Theorem;

use super::{
    check_summary, coverage_check, BaseSummary, Check, Construction, CoverCertificate, CoverError, Membership, OpenSet,
    PathRecord, SetKind, Target, VerificationReport,
};

fn summary(poly: &FaceComplex) -> BaseSummary {
    BaseSummary::Polytope { dimension: poly.dimension(), facets: poly.facet_count(), vertices: poly.vertex_count() }
}

/// One set per vertex `v`: the polytope minus every face not containing `v`.
pub fn vertex_cover(p: &CharacteristicPair) -> Result<CoverCertificate, CoverError> {
    let poly = p.base().as_polytope().ok_or(CoverError::PolytopeRequired)?;
    if !p.is_valid() {
        return Err(CoverError::InvalidPair);
    }
    let sets = (0..poly.vertex_count())
        .map(|v| {
            let removed_facets = poly.facets_avoiding(v).expect("vertex in range");
            OpenSet {
                label: format!("U{v}"),
                kind: SetKind::VertexComplement,
                target: Target::Vertex { vertex: v },
                removed: removed_facets.iter().map(|f| format!("F{f}")).collect(),
                rule: Membership::FaceComplement { removed_facets },
            }
        })
        .collect::<Vec<_>>();
    let mut cert = CoverCertificate {
        construction: Construction::Vertex,
        base: summary(poly),
        citations: vec![Theorem::QuasitoricCatG],
        size: sets.len(),
        sets,
        paths: Vec::new(),
        orientation: None,
        notes: Vec::new(),
        verification: VerificationReport::from_checks(Vec::new()),
    };
    cert.verification = verify_vertex(&cert, p)?;
    Ok(cert)
}

fn check_facets(removed: &[usize], poly: &FaceComplex, label: &str) -> Result<(), CoverError> {
    match removed.iter().find(|&&f| f >= poly.facet_count()) {
        Some(f) => Err(CoverError::DanglingReference(format!("facet {f} in set {label}"))),
        None => Ok(()),
    }
}

/// Relative interior of `face` lies in the complement of the closed facets
/// `removed` iff the face is on none of them.
fn face_in_complement(face: &Face, removed: &[usize]) -> bool {
    !removed.iter().any(|&f| face.contains(f))
}

pub(super) fn verify_vertex(cert: &CoverCertificate, p: &CharacteristicPair) -> Result<VerificationReport, CoverError> {
    let poly = p.base().as_polytope().ok_or(CoverError::PolytopeRequired)?;
    check_summary(cert, &summary(poly))?;
    let mut checks = vec![Check::new("characteristic pair valid", p.is_valid())];
    let mut parsed = Vec::new();
    for set in &cert.sets {
        let (Target::Vertex { vertex }, Membership::FaceComplement { removed_facets }) = (&set.target, &set.rule) else {
            return Err(CoverError::DanglingReference(format!("set {} has a rule foreign to vertex covers", set.label)));
        };
        if *vertex >= poly.vertex_count() {
            return Err(CoverError::DanglingReference(format!("vertex {vertex} in set {}", set.label)));
        }
        check_facets(removed_facets, poly, &set.label)?;
        parsed.push((*vertex, removed_facets.clone()));
    }
    for (v, removed) in &parsed {
        let expected = poly.facets_avoiding(*v).expect("checked");
        let mut sorted = removed.clone();
        sorted.sort_unstable();
        checks.push(Check::new(format!("U{v}: removed facets are exactly those avoiding the target"), sorted == expected));
        checks.push(Check::new(
            format!("U{v}: contains its target vertex"),
            face_in_complement(&poly.vertices()[*v], removed),
        ));
    }
    let atoms: Vec<&Face> = poly.faces().collect();
    checks.push(coverage_check(&atoms, |f| parsed.iter().any(|(_, removed)| face_in_complement(f, removed))));
    let targets: BTreeSet<usize> = parsed.iter().map(|(v, _)| *v).collect();
    checks.push(Check::detail(
        "one set per fixed point",
        targets.len() == parsed.len() && parsed.len() == poly.vertex_count(),
        format!("{} sets, {} vertices", parsed.len(), poly.vertex_count()),
    ));
    Ok(VerificationReport::from_checks(checks))
}

fn side_index(side: Side) -> usize {
    match side {
        Side::Left => 1,
        Side::Right => 2,
    }
}

fn vertex_name(side: Side, v: usize) -> String {
    format!("v{}{}", side_index(side), v + 1)
}

fn sum_summary(d: &ConnectedSumDescriptor) -> BaseSummary {
    BaseSummary::ConnectedSum {
        dimension: d.dimension(),
        k: d.k,
        left_vertices: d.polytope(Side::Left).vertex_count(),
        right_vertices: d.polytope(Side::Right).vertex_count(),
    }
}

/// One set per vertex of either summand: the vertex set of the summand
/// minus the gluing tube, and for vertices of the gluing face, minus one arc
/// from the tube to another vertex of that face.
pub fn consum_cover(d: &ConnectedSumDescriptor) -> Result<CoverCertificate, CoverError> {
    if d.is_quasitoric_redirect() {
        return Err(CoverError::QuasitoricRedirect);
    }
    let mut sets = Vec::new();
    let mut paths = Vec::new();
    for side in [Side::Left, Side::Right] {
        let poly = d.polytope(side);
        let face = d.face(side);
        let face_vertices = poly.vertices_of(face);
        if face_vertices.len() < 2 {
            return Err(CoverError::GluingFaceTooSmall { side, face: face.clone() });
        }
        for (index, &to_vertex) in face_vertices.iter().take(2).enumerate() {
            paths.push(PathRecord {
                label: format!("alpha{}{}", side_index(side), index + 1),
                side,
                index,
                to_vertex,
                within: face.clone(),
            });
        }
        for v in 0..poly.vertex_count() {
            let removed_facets = poly.facets_avoiding(v).expect("vertex in range");
            let removed_paths = if !face_vertices.contains(&v) {
                Vec::new()
            } else if v == face_vertices[0] {
                vec![1]
            } else {
                vec![0]
            };
            let mut removed = vec![format!("tube{}", side_index(side))];
            // Listed cyclically, starting after the target's own facets.
            let start = poly.vertices()[v].facets().iter().max().map_or(0, |f| f + 1);
            let mut listed = removed_facets.clone();
            listed.sort_by_key(|&f| (f + poly.facet_count() - start) % poly.facet_count());
            for &f in &listed {
                let names: Vec<String> = poly.vertices_of(&Face::new([f])).iter().map(|&u| vertex_name(side, u)).collect();
                removed.push(format!("[{}]", names.join(", ")));
            }
            for &i in &removed_paths {
                removed.push(format!("alpha{}{}", side_index(side), i + 1));
            }
            sets.push(OpenSet {
                label: format!("V{}{}", side_index(side), v + 1),
                kind: SetKind::VertexComplement,
                target: Target::SideVertex { side, vertex: v },
                rule: Membership::SumPiece { side, removed_facets, removed_tube: true, removed_paths },
                removed,
            });
        }
    }
    let mut cert = CoverCertificate {
        construction: Construction::ConnectedSum,
        base: sum_summary(d),
        citations: vec![Theorem::ConsumCatG, Theorem::QuasitoricCatG],
        size: sets.len(),
        sets,
        paths,
        orientation: None,
        notes: vec![
            "each set is thickened across the gluing collar to an invariant open neighbourhood that deformation retracts onto it".into(),
            crate::charpair::GLUING_ASSUMPTION.into(),
        ],
        verification: VerificationReport::from_checks(Vec::new()),
    };
    cert.verification = verify_consum(&cert, d)?;
    Ok(cert)
}

#[derive(Debug)]
enum SumAtom<'a> {
    Face(Side, &'a Face),
    Path(Side, usize),
}

pub(super) fn verify_consum(cert: &CoverCertificate, d: &ConnectedSumDescriptor) -> Result<VerificationReport, CoverError> {
    check_summary(cert, &sum_summary(d))?;
    let mut checks = vec![
        Check::new("gluing orbit has dimension k >= 1", d.k >= 1),
        Check::new("left pair valid", d.left.is_valid()),
        Check::new("right pair valid", d.right.is_valid()),
    ];

    // Paths.
    for side in [Side::Left, Side::Right] {
        let poly = d.polytope(side);
        let face = d.face(side);
        let face_vertices = poly.vertices_of(face);
        let mine: Vec<&PathRecord> = cert.paths.iter().filter(|p| p.side == side).collect();
        for p in &mine {
            if p.to_vertex >= poly.vertex_count() {
                return Err(CoverError::DanglingReference(format!("vertex {} in path {}", p.to_vertex, p.label)));
            }
        }
        let s = side_index(side);
        checks.push(Check::new(format!("side {s}: two arcs"), mine.len() == 2));
        checks.push(Check::new(
            format!("side {s}: arcs run inside the gluing face"),
            mine.iter().all(|p| &p.within == face) && poly.face_dimension(face) >= 1,
        ));
        checks.push(Check::new(
            format!("side {s}: arcs end at vertices of the gluing face"),
            mine.iter().all(|p| face_vertices.contains(&p.to_vertex)),
        ));
        // Two arcs from the gluing point inside an open face of dimension
        // >= 1 can be taken with disjoint interiors iff their endpoints
        // differ.
        let ends: BTreeSet<usize> = mine.iter().map(|p| p.to_vertex).collect();
        checks.push(Check::new(format!("side {s}: arc interiors pairwise disjoint"), ends.len() == mine.len()));
        let indices: BTreeSet<usize> = mine.iter().map(|p| p.index).collect();
        checks.push(Check::new(format!("side {s}: arc indices distinct"), indices.len() == mine.len()));
    }

    struct Piece<'a> {
        label: &'a str,
        side: Side,
        vertex: usize,
        removed_facets: &'a [usize],
        removed_tube: bool,
        removed_paths: &'a [usize],
    }
    let mut pieces = Vec::new();
    for set in &cert.sets {
        let (
            Target::SideVertex { side, vertex },
            Membership::SumPiece { side: rule_side, removed_facets, removed_tube, removed_paths },
        ) = (&set.target, &set.rule)
        else {
            return Err(CoverError::DanglingReference(format!("set {} has a rule foreign to connected-sum covers", set.label)));
        };
        let poly = d.polytope(*side);
        if *vertex >= poly.vertex_count() || rule_side != side {
            return Err(CoverError::DanglingReference(format!("vertex {vertex} in set {}", set.label)));
        }
        check_facets(removed_facets, poly, &set.label)?;
        if let Some(i) = removed_paths.iter().find(|&&i| !cert.paths.iter().any(|p| p.side == *side && p.index == i)) {
            return Err(CoverError::DanglingReference(format!("arc {i} in set {}", set.label)));
        }
        pieces.push(Piece {
            label: &set.label,
            side: *side,
            vertex: *vertex,
            removed_facets,
            removed_tube: *removed_tube,
            removed_paths,
        });
    }

    for piece in &pieces {
        let poly = d.polytope(piece.side);
        let face = d.face(piece.side);
        let mut expected = poly.facets_avoiding(piece.vertex).expect("checked");
        expected.sort_unstable();
        let mut got = piece.removed_facets.to_vec();
        got.sort_unstable();
        checks.push(Check::new(format!("{}: removed facets are exactly those avoiding the target", piece.label), got == expected));
        checks.push(Check::new(format!("{}: gluing tube removed", piece.label), piece.removed_tube));
        if poly.vertex_in_face(piece.vertex, face) {
            // The set meets the punctured gluing face; one arc to a vertex
            // outside the set cuts it open.
            let cut = piece.removed_paths.len() == 1
                && cert
                    .paths
                    .iter()
                    .find(|p| p.side == piece.side && p.index == piece.removed_paths[0])
                    .is_some_and(|p| p.to_vertex != piece.vertex);
            checks.push(Check::new(format!("{}: one arc removed, ending away from the target", piece.label), cut));
        }
    }

    let mut atoms = Vec::new();
    for side in [Side::Left, Side::Right] {
        for f in d.polytope(side).faces() {
            atoms.push(SumAtom::Face(side, f));
        }
        for p in cert.paths.iter().filter(|p| p.side == side) {
            atoms.push(SumAtom::Path(side, p.index));
        }
    }
    let contains = |piece: &Piece<'_>, atom: &SumAtom<'_>| match atom {
        SumAtom::Face(side, f) => *side == piece.side && face_in_complement(f, piece.removed_facets),
        SumAtom::Path(side, i) => {
            *side == piece.side
                && face_in_complement(d.face(*side), piece.removed_facets)
                && !piece.removed_paths.contains(i)
        }
    };
    checks.push(coverage_check(&atoms, |a| pieces.iter().any(|p| contains(p, a))));
    let total = d.polytope(Side::Left).vertex_count() + d.polytope(Side::Right).vertex_count();
    checks.push(Check::detail(
        "one set per fixed point",
        pieces.len() == total,
        format!("{} sets, {} fixed points", pieces.len(), total),
    ));
    Ok(VerificationReport::from_checks(checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpair::{connected_sum, Base};
    use crate::cover::{verify_cover, CoverBase};

    fn standard(n: usize) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        out.push(vec![-1; n]);
        out
    }

    fn simplex_pair(n: usize) -> CharacteristicPair {
        CharacteristicPair::new(Base::Polytope(FaceComplex::simplex(n)), standard(n)).unwrap()
    }

    fn square() -> CharacteristicPair {
        CharacteristicPair::new(
            Base::Polytope(FaceComplex::polygon(4).unwrap()),
            vec![vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]],
        )
        .unwrap()
    }

    fn cube3() -> CharacteristicPair {
        let lambda = (0..3).flat_map(|d| {
            let e: Vec<i64> = (0..3).map(|j| i64::from(j == d)).collect();
            [e.clone(), e]
        });
        CharacteristicPair::new(Base::Polytope(FaceComplex::cube(3)), lambda.collect()).unwrap()
    }

    #[test]
    fn triangle_vertex_cover() {
        let p = simplex_pair(2);
        let cert = vertex_cover(&p).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.size, 3);
        // U0 misses facet 0 and the two vertices on it.
        let poly = p.base().as_polytope().unwrap();
        let Membership::FaceComplement { removed_facets } = &cert.sets[0].rule else { panic!() };
        assert_eq!(removed_facets, &vec![0]);
        let missed: Vec<&Face> = poly.faces().filter(|f| !face_in_complement(f, removed_facets)).collect();
        assert_eq!(missed, vec![&Face::new([0]), &Face::new([0, 1]), &Face::new([0, 2])]);
    }

    #[test]
    fn segment_and_cube() {
        let seg = vertex_cover(&simplex_pair(1)).unwrap();
        assert_eq!(seg.size, 2);
        assert!(seg.passed());
        let cube = vertex_cover(&cube3()).unwrap();
        assert_eq!(cube.size, 8);
        assert!(cube.passed());
        for set in &cube.sets {
            let Membership::FaceComplement { removed_facets } = &set.rule else { panic!() };
            assert_eq!(removed_facets.len(), 3);
        }
    }

    #[test]
    fn deleting_any_set_breaks_coverage() {
        let p = cube3();
        let cert = vertex_cover(&p).unwrap();
        for i in 0..cert.size {
            let mut broken = cert.clone();
            broken.remove_set(i);
            let report = verify_cover(&broken, CoverBase::Polytope(&p)).unwrap();
            assert!(!report.passed);
            let coverage = report.checks.iter().find(|c| c.name == "coverage").unwrap();
            assert!(!coverage.passed);
        }
    }

    #[test]
    fn wrong_base_is_an_error() {
        let cert = vertex_cover(&simplex_pair(2)).unwrap();
        assert!(matches!(verify_cover(&cert, CoverBase::Polytope(&square())), Err(CoverError::BaseMismatch { .. })));
        let mut dangling = cert.clone();
        dangling.sets[0].rule = Membership::FaceComplement { removed_facets: vec![7] };
        assert!(matches!(
            verify_cover(&dangling, CoverBase::Polytope(&simplex_pair(2))),
            Err(CoverError::DanglingReference(_))
        ));
    }

    #[test]
    fn worked_connected_sum() {
        let d = connected_sum(&simplex_pair(2), &square(), 2, Face::whole(), Face::whole()).unwrap();
        let cert = consum_cover(&d).unwrap();
        assert!(cert.passed(), "{:?}", cert.verification.failures().collect::<Vec<_>>());
        let listing: Vec<(String, Vec<String>)> = cert.sets.iter().map(|s| (s.label.clone(), s.removed.clone())).collect();
        let expect = |label: &str, removed: &[&str]| (label.to_string(), removed.iter().map(|s| s.to_string()).collect());
        assert_eq!(
            listing,
            vec![
                expect("V11", &["tube1", "[v12, v13]", "alpha12"]),
                expect("V12", &["tube1", "[v11, v13]", "alpha11"]),
                expect("V13", &["tube1", "[v11, v12]", "alpha11"]),
                expect("V21", &["tube2", "[v22, v23]", "[v23, v24]", "alpha22"]),
                expect("V22", &["tube2", "[v23, v24]", "[v21, v24]", "alpha21"]),
                expect("V23", &["tube2", "[v21, v24]", "[v21, v22]", "alpha21"]),
                expect("V24", &["tube2", "[v21, v22]", "[v22, v23]", "alpha21"]),
            ]
        );
    }

    #[test]
    fn simplex_sum_along_edge() {
        for n in 2..=4 {
            let p = simplex_pair(n);
            let edge = Face::new(2..=n);
            let d = connected_sum(&p, &p, 1, edge.clone(), edge).unwrap();
            let cert = consum_cover(&d).unwrap();
            assert!(cert.passed());
            assert_eq!(cert.size, 2 * (n + 1));
            assert_eq!(cert.paths.len(), 4);
        }
    }

    #[test]
    fn consum_refusals_and_tampering() {
        let d0 = connected_sum(&simplex_pair(2), &square(), 0, Face::new([0, 1]), Face::new([0, 1])).unwrap();
        assert_eq!(consum_cover(&d0), Err(CoverError::QuasitoricRedirect));

        let d = connected_sum(&simplex_pair(2), &square(), 2, Face::whole(), Face::whole()).unwrap();
        let mut cert = consum_cover(&d).unwrap();
        // Both arcs to the same vertex: interiors no longer disjoint.
        cert.paths[1].to_vertex = cert.paths[0].to_vertex;
        let report = verify_cover(&cert, CoverBase::ConnectedSum(&d)).unwrap();
        assert!(!report.passed);

        let mut cert = consum_cover(&d).unwrap();
        // V11 keeping both arcs is not cut open.
        if let Membership::SumPiece { removed_paths, .. } = &mut cert.sets[0].rule {
            removed_paths.clear();
        }
        assert!(!verify_cover(&cert, CoverBase::ConnectedSum(&d)).unwrap().passed);
    }
}
