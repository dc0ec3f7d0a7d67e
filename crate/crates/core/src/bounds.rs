//! Monotone bound propagation for cat and cat_G over a world of abstract
//! G-space descriptors. Hypothesis flags are trusted inputs; every tightened
//! endpoint carries the chain of rules that produced it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::Theorem;

/// `[lo, hi]` with `hi = None` meaning unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<u64>,
}

impl Interval {
    pub fn exact(v: u64) -> Self {
        Interval { lo: v, hi: Some(v) }
    }

    pub fn contains(&self, v: u64) -> bool {
        self.lo <= v && self.hi.is_none_or(|h| v <= h)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[{}, {h}]", self.lo),
            None => write!(f, "[{}, inf)", self.lo),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// Cartesian product; the classical product inequality needs the
    /// product to be completely normal.
    ProductOf { factors: Vec<String> },
    /// Wedge; `pointed` asserts that the base points are fixed.
    WedgeOf { factors: Vec<String>, pointed: bool },
    /// Product with the diagonal action.
    DiagonalProductOf { factors: [String; 2] },
}

impl Relation {
    pub fn factors(&self) -> &[String] {
        match self {
            Relation::ProductOf { factors } | Relation::WedgeOf { factors, .. } => factors,
            Relation::DiagonalProductOf { factors } => factors,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub has_fixed_point: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_point_count: Option<u64>,
    /// Number of path components of the fixed set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_point_components: Option<u64>,
    #[serde(default)]
    pub g_connected: bool,
    #[serde(default)]
    pub completely_normal: bool,
    #[serde(default)]
    pub simply_connected: bool,
    /// Closed manifold.
    #[serde(default)]
    pub is_manifold: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cat: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cat_g: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_space_cat: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cup_length: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<Relation>,
}

impl SpaceDescriptor {
    pub fn named(name: impl Into<String>) -> Self {
        SpaceDescriptor { name: name.into(), ..Default::default() }
    }

    /// Fixed-point status, using the counts when the flag is absent.
    pub fn fixed_point(&self) -> Option<bool> {
        self.has_fixed_point
            .or(self.fixed_point_count.map(|c| c > 0))
            .or(self.fixed_point_components.map(|c| c > 0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "input")]
    Input,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    /// cat >= 1.
    T1,
    /// Dimension bound.
    T2,
    /// Classical product inequality.
    T3,
}

impl Rule {
    pub const PROPAGATING: [Rule; 11] =
        [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6, Rule::R7, Rule::R8, Rule::T1, Rule::T2, Rule::T3];

    pub fn citation(self) -> Option<Theorem> {
        Some(match self {
            Rule::Input => return None,
            Rule::R1 => Theorem::FixedComponentBound,
            Rule::R2 => Theorem::FiniteFixedSet,
            Rule::R3 => Theorem::OrbitSpaceBound,
            Rule::R4 => Theorem::WedgeBound,
            Rule::R5 => Theorem::EquivariantProductBound,
            Rule::R6 => Theorem::CupLength,
            Rule::R7 => Theorem::SimplyConnectedManifold,
            Rule::R8 => Theorem::GcatOneContractible,
            Rule::T1 => Theorem::CatAtLeastOne,
            Rule::T2 => Theorem::DimensionBound,
            Rule::T3 => Theorem::ProductBound,
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Input => f.write_str("input"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    Cat,
    CatG,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Cat => "cat",
            Invariant::CatG => "cat_G",
        })
    }
}

/// One rule firing. `premises` name the endpoints it used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub rule: Rule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<Theorem>,
    pub space: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Endpoint {
    /// `None` only for an unbounded upper endpoint.
    pub value: Option<u64>,
    /// The step that set the value, followed by the steps behind its
    /// premises.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<Step>,
}

impl Endpoint {
    fn rules(&self) -> Vec<Rule> {
        self.provenance.iter().map(|s| s.rule).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundPair {
    pub lower: Endpoint,
    pub upper: Endpoint,
}

impl BoundPair {
    fn unbounded() -> Self {
        BoundPair { lower: Endpoint { value: Some(0), provenance: Vec::new() }, upper: Endpoint { value: None, provenance: Vec::new() } }
    }

    pub fn interval(&self) -> Interval {
        Interval { lo: self.lower.value.unwrap_or(0), hi: self.upper.value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceBounds {
    pub cat: BoundPair,
    pub cat_g: BoundPair,
    /// Set by R8.
    pub g_contractible: bool,
}

impl SpaceBounds {
    pub fn get(&self, inv: Invariant) -> &BoundPair {
        match inv {
            Invariant::Cat => &self.cat,
            Invariant::CatG => &self.cat_g,
        }
    }

    fn get_mut(&mut self, inv: Invariant) -> &mut BoundPair {
        match inv {
            Invariant::Cat => &mut self.cat,
            Invariant::CatG => &mut self.cat_g,
        }
    }
}

/// A rule that matched a descriptor syntactically but whose hypotheses
/// failed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BlockedRule {
    pub rule: Rule,
    pub space: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundState {
    pub spaces: BTreeMap<String, SpaceBounds>,
    pub blocked: Vec<BlockedRule>,
}

impl BoundState {
    pub fn interval(&self, space: &str, inv: Invariant) -> Option<Interval> {
        self.spaces.get(space).map(|s| s.get(inv).interval())
    }

    pub fn blocked_for(&self, rule: Rule, space: &str) -> Option<&BlockedRule> {
        self.blocked.iter().find(|b| b.rule == rule && b.space == space)
    }

    /// Whether `rule` appears anywhere in the provenance of any endpoint.
    pub fn fired(&self, rule: Rule) -> bool {
        self.spaces.values().any(|s| {
            [&s.cat, &s.cat_g].iter().any(|b| b.lower.rules().contains(&rule) || b.upper.rules().contains(&rule))
        })
    }

    /// The world with every known interval replaced by the derived one.
    pub fn to_world(&self, world: &[SpaceDescriptor]) -> Vec<SpaceDescriptor> {
        world
            .iter()
            .map(|d| {
                let b = &self.spaces[&d.name];
                SpaceDescriptor { cat: Some(b.cat.interval()), cat_g: Some(b.cat_g.interval()), ..d.clone() }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("descriptor name {0} used twice")]
    DuplicateName(String),
    #[error("{space} refers to unknown descriptor {factor}")]
    UnknownFactor { space: String, factor: String },
    #[error("{space}: {relation} needs at least two factors")]
    TooFewFactors { space: String, relation: &'static str },
    #[error("{space}: known {invariant} interval {interval} is not well-ordered with lo >= 1")]
    BadInterval { space: String, invariant: Invariant, interval: Interval },
    #[error("{space}: fixed point flag contradicts the fixed point counts")]
    FixedPointFlags { space: String },
    #[error("{space}: {invariant} lower bound {lower} (rules {lower_rules:?}) exceeds upper bound {upper} (rules {upper_rules:?})")]
    Inconsistency {
        space: String,
        invariant: Invariant,
        lower: u64,
        upper: u64,
        lower_rules: Vec<Rule>,
        upper_rules: Vec<Rule>,
    },
    #[error("propagation did not reach a fixpoint")]
    NoFixpoint,
}

fn check_world(world: &[SpaceDescriptor]) -> Result<(), BoundsError> {
    let mut names = BTreeSet::new();
    for d in world {
        if !names.insert(d.name.as_str()) {
            return Err(BoundsError::DuplicateName(d.name.clone()));
        }
    }
    for d in world {
        for (inv, interval) in [(Invariant::Cat, d.cat), (Invariant::CatG, d.cat_g)] {
            if let Some(i) = interval {
                if i.lo < 1 || i.hi.is_some_and(|h| h < i.lo) {
                    return Err(BoundsError::BadInterval { space: d.name.clone(), invariant: inv, interval: i });
                }
            }
        }
        let counts = [d.fixed_point_count, d.fixed_point_components];
        let from_counts: Vec<bool> = counts.iter().flatten().map(|&c| c > 0).collect();
        if from_counts.windows(2).any(|w| w[0] != w[1])
            || d.has_fixed_point.is_some_and(|f| from_counts.iter().any(|&c| c != f))
            || d.fixed_point_count.zip(d.fixed_point_components).is_some_and(|(n, c)| c > n)
        {
            return Err(BoundsError::FixedPointFlags { space: d.name.clone() });
        }
        if let Some(rel) = &d.relation {
            let label = match rel {
                Relation::ProductOf { .. } => "product",
                Relation::WedgeOf { .. } => "wedge",
                Relation::DiagonalProductOf { .. } => "diagonal product",
            };
            if rel.factors().len() < 2 {
                return Err(BoundsError::TooFewFactors { space: d.name.clone(), relation: label });
            }
            for f in rel.factors() {
                if !names.contains(f.as_str()) {
                    return Err(BoundsError::UnknownFactor { space: d.name.clone(), factor: f.clone() });
                }
            }
        }
    }
    Ok(())
}

struct Engine<'a> {
    world: BTreeMap<&'a str, &'a SpaceDescriptor>,
    state: BTreeMap<String, SpaceBounds>,
    blocked: BTreeSet<BlockedRule>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum End {
    Lower,
    Upper,
}

fn endpoint_name(space: &str, inv: Invariant, end: End) -> String {
    let end = if end == End::Lower { "lower" } else { "upper" };
    format!("{space}.{inv}.{end}")
}

impl<'a> Engine<'a> {
    fn endpoint(&self, space: &str, inv: Invariant, end: End) -> &Endpoint {
        let b = self.state[space].get(inv);
        if end == End::Lower { &b.lower } else { &b.upper }
    }

    fn block(&mut self, rule: Rule, space: &str, reason: String) {
        self.blocked.insert(BlockedRule { rule, space: space.to_string(), reason });
    }

    /// Tightens one endpoint if `value` is strictly better.
    fn tighten(
        &mut self,
        rule: Rule,
        space: &str,
        inv: Invariant,
        end: End,
        value: u64,
        premises: &[(&str, Invariant, End)],
    ) -> Result<bool, BoundsError> {
        let current = self.endpoint(space, inv, end).value;
        let better = match end {
            End::Lower => current.is_none_or(|c| value > c),
            End::Upper => current.is_none_or(|c| value < c),
        };
        if !better {
            return Ok(false);
        }
        let mut provenance = vec![Step {
            rule,
            citation: rule.citation(),
            space: space.to_string(),
            premises: premises.iter().map(|&(s, i, e)| endpoint_name(s, i, e)).collect(),
        }];
        for &(s, i, e) in premises {
            for step in &self.endpoint(s, i, e).provenance {
                if !provenance.contains(step) {
                    provenance.push(step.clone());
                }
            }
        }
        let bounds = self.state.get_mut(space).expect("known space").get_mut(inv);
        let target = if end == End::Lower { &mut bounds.lower } else { &mut bounds.upper };
        *target = Endpoint { value: Some(value), provenance };
        let (lo, hi) = (bounds.lower.value.unwrap_or(0), bounds.upper.value);
        if let Some(hi) = hi.filter(|&h| lo > h) {
            return Err(BoundsError::Inconsistency {
                space: space.to_string(),
                invariant: inv,
                lower: lo,
                upper: hi,
                lower_rules: bounds.lower.rules(),
                upper_rules: bounds.upper.rules(),
            });
        }
        Ok(true)
    }

    fn upper(&self, space: &str, inv: Invariant) -> Option<u64> {
        self.endpoint(space, inv, End::Upper).value
    }

    fn apply(&mut self, rule: Rule) -> Result<bool, BoundsError> {
        let mut changed = false;
        let descriptors: Vec<&SpaceDescriptor> = self.world.values().copied().collect();
        for d in descriptors {
            let name = d.name.as_str();
            changed |= match rule {
                Rule::Input => false,
                Rule::R1 => match d.fixed_point_components {
                    Some(c) if c > 0 => self.tighten(rule, name, Invariant::CatG, End::Lower, c, &[])?,
                    _ => false,
                },
                Rule::R2 => match d.fixed_point_count {
                    Some(c) if c > 0 => self.tighten(rule, name, Invariant::CatG, End::Lower, c, &[])?,
                    _ => false,
                },
                Rule::R3 => match d.orbit_space_cat {
                    Some(c) => self.tighten(rule, name, Invariant::CatG, End::Lower, c, &[])?,
                    None => false,
                },
                Rule::R6 => match d.cup_length {
                    Some(c) => self.tighten(rule, name, Invariant::Cat, End::Lower, c + 1, &[])?,
                    None => false,
                },
                Rule::R7 => self.rule_r7(d)?,
                Rule::R8 => self.rule_r8(d)?,
                Rule::T1 => {
                    self.tighten(rule, name, Invariant::Cat, End::Lower, 1, &[])?
                        | self.tighten(rule, name, Invariant::CatG, End::Lower, 1, &[])?
                }
                Rule::T2 => match d.dimension {
                    Some(dim) => self.tighten(rule, name, Invariant::Cat, End::Upper, dim + 1, &[])?,
                    None => false,
                },
                Rule::R4 | Rule::R5 | Rule::T3 => self.sum_rule(rule, d)?,
            };
        }
        Ok(changed)
    }

    fn rule_r7(&mut self, d: &SpaceDescriptor) -> Result<bool, BoundsError> {
        if !d.is_manifold {
            return Ok(false);
        }
        let name = d.name.as_str();
        match d.dimension {
            Some(dim) if dim % 2 == 0 && d.simply_connected => {
                self.tighten(Rule::R7, name, Invariant::Cat, End::Upper, dim / 2 + 1, &[])
            }
            Some(dim) if dim % 2 == 0 => {
                self.block(Rule::R7, name, format!("hypothesis failed: {name} is not simply connected"));
                Ok(false)
            }
            Some(dim) if d.simply_connected => {
                self.block(Rule::R7, name, format!("hypothesis failed: dimension {dim} is odd"));
                Ok(false)
            }
            _ => Ok(false),
        }
    }

    fn rule_r8(&mut self, d: &SpaceDescriptor) -> Result<bool, BoundsError> {
        let name = d.name.as_str();
        if self.upper(name, Invariant::CatG) != Some(1) {
            return Ok(false);
        }
        if d.fixed_point() != Some(true) {
            self.block(Rule::R8, name, format!("hypothesis not established: ({name})^G is nonempty"));
            return Ok(false);
        }
        let fresh = !self.state[name].g_contractible;
        self.state.get_mut(name).expect("known space").g_contractible = true;
        let tightened = self.tighten(Rule::R8, name, Invariant::Cat, End::Upper, 1, &[(name, Invariant::CatG, End::Upper)])?;
        Ok(fresh | tightened)
    }

    /// R4, R5 and T3: `inv(X) <= sum of factor bounds - (m - 1)`.
    fn sum_rule(&mut self, rule: Rule, d: &SpaceDescriptor) -> Result<bool, BoundsError> {
        let name = d.name.as_str();
        let (factors, inv) = match (&d.relation, rule) {
            (Some(Relation::WedgeOf { factors, pointed }), Rule::R4) => {
                if !pointed {
                    self.block(rule, name, "hypothesis failed: base points are not fixed".into());
                    return Ok(false);
                }
                (factors.as_slice(), Invariant::CatG)
            }
            (Some(Relation::DiagonalProductOf { factors }), Rule::R5) => {
                let mut reasons = Vec::new();
                for f in factors {
                    let fd = self.world[f.as_str()];
                    match fd.fixed_point() {
                        Some(true) => {}
                        Some(false) => reasons.push(format!("hypothesis failed: ({f})^G = ∅")),
                        None => reasons.push(format!("hypothesis not established: ({f})^G is nonempty")),
                    }
                    if !fd.g_connected {
                        reasons.push(format!("hypothesis failed: {f} is not G-connected"));
                    }
                }
                if !d.completely_normal {
                    reasons.push(format!("hypothesis failed: {name} is not completely normal"));
                }
                if !reasons.is_empty() {
                    for r in reasons {
                        self.block(rule, name, r);
                    }
                    return Ok(false);
                }
                (factors.as_slice(), Invariant::CatG)
            }
            (Some(Relation::ProductOf { factors }), Rule::T3) => {
                if !d.completely_normal {
                    self.block(rule, name, format!("hypothesis failed: {name} is not completely normal"));
                    return Ok(false);
                }
                (factors.as_slice(), Invariant::Cat)
            }
            _ => return Ok(false),
        };
        let mut total = 0u64;
        for f in factors {
            match self.upper(f, inv) {
                Some(h) => total += h,
                None => return Ok(false),
            }
        }
        let value = total - (factors.len() as u64 - 1);
        let premises: Vec<(&str, Invariant, End)> = factors.iter().map(|f| (f.as_str(), inv, End::Upper)).collect();
        self.tighten(rule, name, inv, End::Upper, value, &premises)
    }
}

/// Runs every rule to a fixpoint.
pub fn apply_rules(world: &[SpaceDescriptor]) -> Result<BoundState, BoundsError> {
    apply_rules_in_order(world, &Rule::PROPAGATING)
}

/// As [`apply_rules`], visiting rules in the given order each round. The
/// result's intervals do not depend on the order.
pub fn apply_rules_in_order(world: &[SpaceDescriptor], order: &[Rule]) -> Result<BoundState, BoundsError> {
    check_world(world)?;
    let mut engine = Engine {
        world: world.iter().map(|d| (d.name.as_str(), d)).collect(),
        state: world.iter().map(|d| (d.name.clone(), SpaceBounds { cat: BoundPair::unbounded(), cat_g: BoundPair::unbounded(), g_contractible: false })).collect(),
        blocked: BTreeSet::new(),
    };
    for d in world {
        for (inv, known) in [(Invariant::Cat, d.cat), (Invariant::CatG, d.cat_g)] {
            if let Some(i) = known {
                engine.tighten(Rule::Input, &d.name, inv, End::Lower, i.lo, &[])?;
                if let Some(h) = i.hi {
                    engine.tighten(Rule::Input, &d.name, inv, End::Upper, h, &[])?;
                }
            }
        }
    }
    // Every firing strictly tightens an integer endpoint bounded by the
    // finitely many upper bounds present, so this terminates quickly.
    let limit = 64 * (world.len() + 1) * Rule::PROPAGATING.len();
    for _ in 0..limit {
        let mut changed = false;
        for &rule in order {
            changed |= engine.apply(rule)?;
        }
        if !changed {
            return Ok(BoundState { spaces: engine.state, blocked: engine.blocked.into_iter().collect() });
        }
    }
    Err(BoundsError::NoFixpoint)
}
