use std::collections::BTreeSet;

use crate::invariants::Theorem;

use super::{
    check_summary, coverage_check, BaseSummary, Check, Construction, CoverCertificate, CoverError, Membership, OpenSet,
    SetKind, Target, VerificationReport,
};

/// The `n + 1` coordinate charts `{z_i != 0}` of `L(p; q_1, ..., q_n)`,
/// each invariant and contracting onto the circle orbit `{z_j = 0, j != i}`.
pub fn lens_cover(n: usize) -> CoverCertificate {
    let sets = (0..=n)
        .map(|i| OpenSet {
            label: format!("U{}", i + 1),
            kind: SetKind::Chart,
            target: Target::Orbit { coordinate: i },
            rule: Membership::Chart { coordinate: i },
            removed: Vec::new(),
        })
        .collect::<Vec<_>>();
    let mut cert = CoverCertificate {
        construction: Construction::Lens,
        base: BaseSummary::Lens { n },
        citations: vec![Theorem::LensSpace],
        size: sets.len(),
        sets,
        paths: Vec::new(),
        orientation: None,
        notes: vec!["orbit types are indexed by the set of nonzero homogeneous coordinates".into()],
        verification: VerificationReport::from_checks(Vec::new()),
    };
    cert.verification = verify_lens(&cert, n).expect("generated against its own base");
    cert
}

pub(super) fn verify_lens(cert: &CoverCertificate, n: usize) -> Result<VerificationReport, CoverError> {
    check_summary(cert, &BaseSummary::Lens { n })?;
    let mut charts = Vec::new();
    for set in &cert.sets {
        let (Membership::Chart { coordinate }, Target::Orbit { coordinate: target }) = (&set.rule, &set.target) else {
            return Err(CoverError::DanglingReference(format!("set {} has a rule foreign to lens covers", set.label)));
        };
        if *coordinate > n || *target > n {
            return Err(CoverError::DanglingReference(format!("coordinate {coordinate} in set {}", set.label)));
        }
        charts.push((*coordinate, *target));
    }
    // Orbit strata: nonempty sets of nonzero coordinates.
    let atoms: Vec<BTreeSet<usize>> =
        (1..1u64 << (n + 1)).map(|mask| (0..=n).filter(|i| mask & (1 << i) != 0).collect()).collect();
    let mut checks = vec![coverage_check(&atoms, |a| charts.iter().any(|(c, _)| a.contains(c)))];
    checks.push(Check::new(
        "each chart contains its target orbit",
        charts.iter().all(|(c, t)| c == t),
    ));
    checks.push(Check::new(
        "each one-dimensional orbit lies in exactly one chart",
        (0..=n).all(|i| charts.iter().filter(|(c, _)| *c == i).count() == 1),
    ));
    checks.push(Check::detail("n + 1 sets", charts.len() == n + 1, format!("{} sets", charts.len())));
    Ok(VerificationReport::from_checks(checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{verify_cover, CoverBase};

    #[test]
    fn n_plus_one_charts() {
        for n in 1..=3 {
            let cert = lens_cover(n);
            assert_eq!(cert.size, n + 1);
            assert!(cert.passed());
        }
    }

    #[test]
    fn dropping_a_chart_uncovers_its_orbit() {
        let mut cert = lens_cover(2);
        cert.remove_set(1);
        let r = verify_cover(&cert, CoverBase::Lens { n: 2 }).unwrap();
        assert!(r.failures().any(|c| c.name == "coverage"));
        assert!(matches!(verify_cover(&cert, CoverBase::Lens { n: 3 }), Err(CoverError::BaseMismatch { .. })));
    }
}
