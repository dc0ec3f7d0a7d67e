use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::charpair::CharacteristicPair;
use crate::combi::{
    validate_triangulation, ComponentKind, EdgeKind, OrbitSurface, Triangulation, TriangulationReport, VertexKind,
};
use crate::invariants::Theorem;

use super::{
    check_summary, coverage_check, BaseSummary, Check, Construction, CoverCertificate, CoverError, Membership, OpenSet,
    SetKind, Target, VerificationReport,
};

/// Direction in which a boundary component is traversed. Forward follows
/// the surface's own edge order, so corner `i` starts edge `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    #[default]
    Forward,
    Reversed,
}

type Simplex = Vec<usize>;
type Chain = Vec<Simplex>;

/// Barycentric subdivision of a triangulation: its simplices are chains of
/// triangulation simplices under inclusion.
struct Subdivision {
    codim: BTreeMap<Simplex, u8>,
    chains: Vec<Chain>,
}

impl Subdivision {
    fn new(report: &TriangulationReport) -> Self {
        let mut codim = BTreeMap::new();
        for (v, kind) in report.vertex_kinds.iter().enumerate() {
            codim.insert(vec![v], kind.codimension());
        }
        for (edge, kind) in &report.edges {
            codim.insert(edge.to_vec(), u8::from(matches!(kind, EdgeKind::Boundary { .. })));
        }
        for tri in &report.triangles {
            codim.insert(tri.to_vec(), 0);
        }
        let mut ending: BTreeMap<Simplex, Vec<Chain>> = BTreeMap::new();
        let mut by_dim: Vec<&Simplex> = codim.keys().collect();
        by_dim.sort_by_key(|s| s.len());
        for s in by_dim {
            let mut chains = vec![vec![s.clone()]];
            for face in proper_faces(s) {
                for c in &ending[&face] {
                    let mut c = c.clone();
                    c.push(s.clone());
                    chains.push(c);
                }
            }
            ending.insert(s.clone(), chains);
        }
        let chains = ending.into_values().flatten().collect();
        Subdivision { codim, chains }
    }

    fn contains(&self, s: &Simplex) -> bool {
        self.codim.contains_key(s)
    }

    /// Codimension of the open chain simplex: that of its largest element.
    fn chain_codim(&self, c: &Chain) -> u8 {
        self.codim[c.last().expect("chains are nonempty")]
    }
}

fn proper_faces(s: &Simplex) -> Vec<Simplex> {
    let n = s.len();
    (1..(1u32 << n) - 1)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect())
        .collect()
}

fn is_face(a: &Simplex, b: &Simplex) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn in_star(chain: &Chain, center: &Simplex) -> bool {
    chain.contains(center)
}

fn in_stars(chain: &Chain, centers: &[Simplex]) -> bool {
    centers.iter().any(|c| in_star(chain, c))
}

fn edge(a: usize, b: usize) -> Simplex {
    if a < b { vec![a, b] } else { vec![b, a] }
}

/// Stars meet iff one center is a face of the other; a union of stars is
/// connected iff that graph on the centers is.
fn stars_connected(centers: &[Simplex]) -> bool {
    if centers.is_empty() {
        return true;
    }
    let mut seen = vec![false; centers.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..centers.len() {
            if !seen[j] && (is_face(&centers[i], &centers[j]) || is_face(&centers[j], &centers[i])) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn surface_of(p: &CharacteristicPair) -> Result<&OrbitSurface, CoverError> {
    p.base().as_surface().ok_or(CoverError::SurfaceRequired)
}

fn checked_report(s: &OrbitSurface, t: &Triangulation) -> Result<TriangulationReport, CoverError> {
    let report = validate_triangulation(t, s)?;
    if !report.euler_consistent {
        return Err(CoverError::EulerMismatch {
            expected: report.expected_euler_characteristic,
            found: report.euler_characteristic,
        });
    }
    Ok(report)
}

fn summary(s: &OrbitSurface, report: &TriangulationReport) -> BaseSummary {
    BaseSummary::Triangulated {
        genus: s.genus(),
        orientable: s.orientable(),
        corners: s.components().iter().map(|c| c.corners).collect(),
        triangulation_vertices: report.vertex_count(),
        triangles: report.triangles.len(),
    }
}

fn stars_set(label: String, kind: SetKind, target: Simplex, centers: Vec<Simplex>) -> OpenSet {
    OpenSet {
        label,
        kind,
        target: Target::Barycenter { simplex: target },
        rule: Membership::Stars { centers },
        removed: Vec::new(),
    }
}

fn first_corner_vertex(s: &OrbitSurface, report: &TriangulationReport) -> Option<usize> {
    s.corners().first().and_then(|&c| report.corner_vertex(c))
}

/// Three sets: stars of all vertices, of all edges and of all triangles in
/// the barycentric subdivision. Each family is a disjoint union of small
/// invariant discs, and all of them contract to a fixed point.
pub fn triangulation_cover(p: &CharacteristicPair, t: &Triangulation) -> Result<CoverCertificate, CoverError> {
    let s = surface_of(p)?;
    if !p.is_valid() {
        return Err(CoverError::InvalidPair);
    }
    if s.corner_count() == 0 {
        return Err(CoverError::NoFixedPoint { citation: Theorem::OrbitToFixedPoint });
    }
    let report = checked_report(s, t)?;
    let fixed = first_corner_vertex(s, &report).expect("corners are located by validation");
    let vertices: Vec<Simplex> = (0..report.vertex_count()).map(|v| vec![v]).collect();
    let edges: Vec<Simplex> = report.edges.keys().map(|e| e.to_vec()).collect();
    let triangles: Vec<Simplex> = report.triangles.iter().map(|t| t.to_vec()).collect();
    let sets = vec![
        stars_set("A".into(), SetKind::VertexStars, vec![fixed], vertices),
        stars_set("B".into(), SetKind::EdgeTubes, vec![fixed], edges),
        stars_set("C".into(), SetKind::FaceDiscs, vec![fixed], triangles),
    ];
    let mut cert = CoverCertificate {
        construction: Construction::Triangulation,
        base: summary(s, &report),
        citations: vec![Theorem::SurfaceCat, Theorem::OrbitToFixedPoint, Theorem::TriangulationUpperBound],
        size: sets.len(),
        sets,
        paths: Vec::new(),
        orientation: None,
        notes: vec![
            "neighbourhoods are open stars in the barycentric subdivision of the triangulation".into(),
            "each family is G-compressible onto the fixed point over its target corner".into(),
        ],
        verification: VerificationReport::from_checks(Vec::new()),
    };
    cert.verification = verify_triangulation_cover(&cert, p, t)?;
    Ok(cert)
}

/// Parsed star sets of a certificate, with dangling references rejected.
fn star_sets<'a>(cert: &'a CoverCertificate, sub: &Subdivision) -> Result<Vec<(&'a OpenSet, &'a [Simplex])>, CoverError> {
    let mut out = Vec::new();
    for set in &cert.sets {
        let Membership::Stars { centers } = &set.rule else {
            return Err(CoverError::DanglingReference(format!("set {} has a rule foreign to surface covers", set.label)));
        };
        for c in centers {
            if !sub.contains(c) {
                return Err(CoverError::DanglingReference(format!("simplex {c:?} in set {}", set.label)));
            }
        }
        if let Target::Barycenter { simplex } = &set.target {
            if !sub.contains(simplex) {
                return Err(CoverError::DanglingReference(format!("target {simplex:?} of set {}", set.label)));
            }
        } else {
            return Err(CoverError::DanglingReference(format!("set {} has a non-barycenter target", set.label)));
        }
        out.push((set, centers.as_slice()));
    }
    Ok(out)
}

fn target_of(set: &OpenSet) -> &Simplex {
    match &set.target {
        Target::Barycenter { simplex } => simplex,
        _ => unreachable!("checked by star_sets"),
    }
}

fn pairwise_disjoint(sub: &Subdivision, centers: &[Simplex]) -> bool {
    sub.chains.iter().all(|c| centers.iter().filter(|x| in_star(c, x)).count() <= 1)
}

pub(super) fn verify_triangulation_cover(
    cert: &CoverCertificate,
    p: &CharacteristicPair,
    t: &Triangulation,
) -> Result<VerificationReport, CoverError> {
    let s = surface_of(p)?;
    let report = checked_report(s, t)?;
    check_summary(cert, &summary(s, &report))?;
    let sub = Subdivision::new(&report);
    let sets = star_sets(cert, &sub)?;
    let mut checks = vec![
        Check::new("characteristic pair valid", p.is_valid()),
        Check::new("a fixed point exists", s.corner_count() > 0),
    ];

    let family = |kind: SetKind| -> Vec<Simplex> {
        sets.iter().filter(|(set, _)| set.kind == kind).flat_map(|(_, c)| c.iter().cloned()).collect()
    };
    let families = [
        ("vertex stars", family(SetKind::VertexStars), 1),
        ("edge tubes", family(SetKind::EdgeTubes), 2),
        ("face discs", family(SetKind::FaceDiscs), 3),
    ];
    checks.push(Check::new(
        "every set belongs to one of the three families",
        sets.iter().all(|(set, _)| matches!(set.kind, SetKind::VertexStars | SetKind::EdgeTubes | SetKind::FaceDiscs)),
    ));
    for (name, centers, size) in &families {
        checks.push(Check::new(format!("{name}: centers have {size} vertices"), centers.iter().all(|c| c.len() == *size)));
        checks.push(Check::new(format!("{name}: pairwise disjoint"), pairwise_disjoint(&sub, centers)));
        for (other, others, _) in &families {
            if other != name {
                checks.push(Check::new(
                    format!("{name}: centers avoid the {other}"),
                    centers.iter().all(|c| !in_stars(&vec![c.clone()], others)),
                ));
            }
        }
        // The star of a center has the local type of the center's stratum.
        let local = centers.iter().all(|c| {
            let own = sub.codim[c];
            let max = sub.chains.iter().filter(|ch| in_star(ch, c)).map(|ch| sub.chain_codim(ch)).max();
            max == Some(own) && (*size == 1 || own < 2)
        });
        checks.push(Check::new(format!("{name}: local corner type matches the center"), local));
    }
    // Closed simplices are covered by their own star and the stars of their
    // faces.
    let lower: Vec<Simplex> = families[0].1.iter().chain(&families[1].1).cloned().collect();
    let all: Vec<Simplex> = lower.iter().chain(&families[2].1).cloned().collect();
    for (name, centers, pool) in [("edges", &families[1].1, &lower), ("faces", &families[2].1, &all)] {
        let ok = centers.iter().all(|c| {
            sub.chains.iter().filter(|ch| ch.iter().all(|x| is_face(x, c))).all(|ch| in_stars(ch, pool))
        });
        checks.push(Check::new(format!("closed {name} covered by the lower families"), ok));
    }
    let fixed: BTreeSet<Simplex> =
        s.corners().into_iter().filter_map(|c| report.corner_vertex(c)).map(|v| vec![v]).collect();
    checks.push(Check::new(
        "every set contracts to a fixed point",
        sets.iter().all(|(set, _)| fixed.contains(target_of(set))),
    ));
    checks.push(coverage_check(&sub.chains, |ch| sets.iter().any(|(_, c)| in_stars(ch, c))));
    checks.push(Check::detail("three sets", sets.len() == 3, format!("{} sets", sets.len())));
    Ok(VerificationReport::from_checks(checks))
}

/// `k + 2s + 2` sets for a surface with `k` corners and `s` boundary
/// circles: one run along each corner's edge, a slice and a marked-point
/// star per circle, and the two interior families.
pub fn qtm4_cover(
    p: &CharacteristicPair,
    t: &Triangulation,
    orientation: Option<&[Orientation]>,
) -> Result<CoverCertificate, CoverError> {
    let s = surface_of(p)?;
    // Checked before validity: a corner cycle never carries a valid pair,
    // and this is the more useful message.
    if let Some(component) = s.components().iter().position(|c| c.kind() == ComponentKind::CornerCycle) {
        return Err(CoverError::CornerCycle { component });
    }
    if !p.is_valid() {
        return Err(CoverError::InvalidPair);
    }
    let orientation = match orientation {
        Some(o) if o.len() != s.components().len() => {
            return Err(CoverError::Orientation { expected: s.components().len(), found: o.len() })
        }
        Some(o) => o.to_vec(),
        None => vec![Orientation::Forward; s.components().len()],
    };
    let report = checked_report(s, t)?;
    let interior: Vec<usize> = (0..report.vertex_count()).filter(|&v| report.vertex_kinds[v] == VertexKind::Interior).collect();
    if !interior.is_empty() {
        return Err(CoverError::InteriorVertices { vertices: interior });
    }

    let mut sets = Vec::new();
    let mut label = 0;
    let mut next = || {
        label += 1;
        format!("R{label}")
    };
    for corner in s.corners() {
        let (incoming, outgoing) = s.corner_edges(corner);
        let path: Vec<usize> = match orientation[corner.component] {
            Orientation::Forward => report.edge_paths[outgoing].clone(),
            Orientation::Reversed => report.edge_paths[incoming].iter().rev().copied().collect(),
        };
        let mut centers: Vec<Simplex> = path[..path.len() - 1].iter().map(|&v| vec![v]).collect();
        centers.extend(path.windows(2).map(|w| edge(w[0], w[1])));
        sets.push(stars_set(next(), SetKind::EdgeRun, vec![path[0]], centers));
    }
    let mut slices = Vec::new();
    for (component, comp) in s.components().iter().enumerate() {
        if comp.kind() != ComponentKind::Circle {
            continue;
        }
        let cycle = &report.edge_paths[s.edge_offset(component)];
        let marked = cycle[0];
        let mut centers: Vec<Simplex> = cycle[1..].iter().map(|&v| vec![v]).collect();
        centers.extend((0..cycle.len()).map(|i| edge(cycle[i], cycle[(i + 1) % cycle.len()])));
        slices.push((cycle[1], centers, marked));
    }
    for (target, centers, _) in &slices {
        sets.push(stars_set(next(), SetKind::CircleSlice, vec![*target], centers.clone()));
    }
    for (_, _, marked) in &slices {
        sets.push(stars_set(next(), SetKind::MarkedStar, vec![*marked], vec![vec![*marked]]));
    }
    let interior_edges: Vec<Simplex> =
        report.edges.iter().filter(|(_, k)| **k == EdgeKind::Interior).map(|(e, _)| e.to_vec()).collect();
    let triangles: Vec<Simplex> = report.triangles.iter().map(|t| t.to_vec()).collect();
    let edge_target = interior_edges.first().unwrap_or(&triangles[0]).clone();
    sets.push(stars_set(next(), SetKind::EdgeTubes, edge_target, interior_edges));
    sets.push(stars_set(next(), SetKind::FaceDiscs, triangles[0].clone(), triangles));

    let mut cert = CoverCertificate {
        construction: Construction::SurfaceBound,
        base: summary(s, &report),
        citations: vec![Theorem::SurfaceCatGBounds],
        size: sets.len(),
        sets,
        paths: Vec::new(),
        orientation: Some(orientation),
        notes: vec![
            "neighbourhoods are open stars in the barycentric subdivision of the triangulation".into(),
            "each circle slice omits the star of the circle's marked point, which forms its own set".into(),
        ],
        verification: VerificationReport::from_checks(Vec::new()),
    };
    cert.verification = verify_qtm4(&cert, p, t)?;
    Ok(cert)
}

pub(super) fn verify_qtm4(
    cert: &CoverCertificate,
    p: &CharacteristicPair,
    t: &Triangulation,
) -> Result<VerificationReport, CoverError> {
    let s = surface_of(p)?;
    let report = checked_report(s, t)?;
    check_summary(cert, &summary(s, &report))?;
    let sub = Subdivision::new(&report);
    let sets = star_sets(cert, &sub)?;
    let mut checks = vec![Check::new("characteristic pair valid", p.is_valid())];

    let circle_vertex = |v: usize| match report.vertex_kinds[v] {
        VertexKind::Boundary { surface_edge } => {
            s.edge_location(surface_edge).is_some_and(|(c, _)| s.components()[c].kind() == ComponentKind::Circle)
        }
        _ => false,
    };
    let on_circle = |x: &Simplex| x.iter().all(|&v| circle_vertex(v));
    let star_chains =
        |centers: &[Simplex]| -> Vec<&Chain> { sub.chains.iter().filter(|ch| in_stars(ch, centers)).collect() };
    let max_codim = |centers: &[Simplex]| star_chains(centers).iter().map(|ch| sub.chain_codim(ch)).max();

    let mut runs = 0;
    for (set, centers) in &sets {
        let target = target_of(set);
        let name = &set.label;
        match set.kind {
            SetKind::EdgeRun => {
                runs += 1;
                let corners: Vec<&Chain> = star_chains(centers).into_iter().filter(|ch| sub.chain_codim(ch) == 2).collect();
                checks.push(Check::new(
                    format!("{name}: corner type, its only codimension-2 point is the target"),
                    corners.len() == 1 && corners[0] == &vec![target.clone()],
                ));
                checks.push(Check::new(format!("{name}: avoids boundary circles"), !centers.iter().any(on_circle)));
                checks.push(Check::new(format!("{name}: connected"), stars_connected(centers)));
            }
            SetKind::CircleSlice => {
                checks.push(Check::new(
                    format!("{name}: half-plane type"),
                    max_codim(centers) == Some(1) && centers.iter().all(on_circle),
                ));
                checks.push(Check::new(format!("{name}: connected"), stars_connected(centers)));
                checks.push(Check::new(format!("{name}: contains its target"), centers.contains(target)));
            }
            SetKind::MarkedStar => {
                checks.push(Check::new(
                    format!("{name}: star of one circle point"),
                    centers.len() == 1 && centers[0].len() == 1 && on_circle(&centers[0]) && &centers[0] == target,
                ));
            }
            SetKind::EdgeTubes | SetKind::FaceDiscs => {
                let size = if set.kind == SetKind::EdgeTubes { 2 } else { 3 };
                checks.push(Check::new(
                    format!("{name}: plane type"),
                    centers.iter().all(|c| c.len() == size && sub.codim[c] == 0) && max_codim(centers).unwrap_or(0) == 0,
                ));
                checks.push(Check::new(format!("{name}: pairwise disjoint"), pairwise_disjoint(&sub, centers)));
            }
            _ => checks.push(Check::new(format!("{name}: set kind belongs to this construction"), false)),
        }
    }
    let k = s.corner_count();
    checks.push(Check::detail("one edge run per corner", runs == k, format!("{runs} runs, {k} corners")));
    checks.push(coverage_check(&sub.chains, |ch| sets.iter().any(|(_, c)| in_stars(ch, c))));
    let expected = k + 2 * s.circle_count() + 2;
    checks.push(Check::detail(
        "k + 2s + 2 sets",
        sets.len() == expected,
        format!("{} sets, expected {expected}", sets.len()),
    ));
    Ok(VerificationReport::from_checks(checks))
}
