//! Embedded networks, shift and RV-split operations, exact power-law
//! kinetics, and the CSEN and CORE comparisons.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::fid;
use crate::error::{Error, Result};
use crate::network::{network_rank, Complex, Network, Reaction, SpeciesId};
use crate::ratlin::{ratio, Rational};
use crate::structure::{deficiency_zero_report, is_reversible, network_numbers};

/// Label given to a reaction altered by restriction.
pub fn embedded_label(label: &str) -> String {
    format!("{label}^E")
}

/// Removes species outside `keep`, drops trivial results and collapses
/// duplicates. A collapsed group takes the label of an unchanged member if
/// one exists, otherwise that of its first member.
pub fn restrict_reactions(reactions: &[Reaction], keep: &HashSet<SpeciesId>) -> Vec<Reaction> {
    let mut out: Vec<Reaction> = Vec::new();
    let mut slot: HashMap<(Complex, Complex), (usize, bool)> = HashMap::new();
    for r in reactions {
        let reactant = r.reactant.restricted_to(keep);
        let product = r.product.restricted_to(keep);
        if reactant == product {
            continue;
        }
        let unchanged = reactant == r.reactant && product == r.product;
        let label = match (&r.label, unchanged) {
            (Some(l), true) => Some(l.clone()),
            (Some(l), false) => Some(embedded_label(l)),
            (None, _) => None,
        };
        let restricted = Reaction {
            reactant,
            product,
            label,
        };
        match slot.get_mut(&restricted.key()) {
            Some((i, was_unchanged)) => {
                if unchanged && !*was_unchanged {
                    out[*i].label = restricted.label;
                    *was_unchanged = true;
                }
            }
            None => {
                slot.insert(restricted.key(), (out.len(), unchanged));
                out.push(restricted);
            }
        }
    }
    out
}

/// Embedded network of `net` on the species in `keep`.
pub fn embedded_network(net: &Network, keep: &HashSet<SpeciesId>) -> Result<Network> {
    if let Some(s) = keep.iter().find(|s| net.species_index(s).is_none()) {
        return Err(Error::UnknownSpecies(s.to_string()));
    }
    let reactions = restrict_reactions(net.reactions(), keep);
    Ok(Network::new(reactions)?.with_species_ranked_by(net.species()))
}

fn vector_map(z: &[(SpeciesId, i64)]) -> BTreeMap<SpeciesId, i64> {
    let mut out = BTreeMap::new();
    for (s, c) in z {
        *out.entry(s.clone()).or_insert(0) += c;
    }
    out
}

fn shifted_reaction(r: &Reaction, z: &BTreeMap<SpeciesId, i64>) -> Result<Reaction> {
    let mut out = Reaction::new(r.reactant.shifted(z)?, r.product.shifted(z)?)?;
    out.label = r.label.clone();
    Ok(out)
}

/// Replaces reaction `j` by `y + z -> y' + z`.
pub fn shift(net: &Network, j: usize, z: &[(SpeciesId, i64)]) -> Result<Network> {
    let len = net.num_reactions();
    if j >= len {
        return Err(Error::IndexOutOfRange { index: j, len });
    }
    let mut reactions = net.reactions().to_vec();
    reactions[j] = shifted_reaction(&reactions[j], &vector_map(z))?;
    Ok(Network::new(reactions)?.with_species_ranked_by(net.species()))
}

fn check_split(original: &Reaction, part1: &Reaction, part2: &Reaction) -> Result<()> {
    let mut sum = part1.vector();
    for (s, c) in part2.vector() {
        *sum.entry(s).or_insert(0) += c;
    }
    sum.retain(|_, c| *c != 0);
    if sum != original.vector() {
        return Err(Error::VectorSumMismatch {
            reaction: original.to_string(),
        });
    }
    Ok(())
}

fn split_labels(original: &Reaction, part1: &Reaction, part2: &Reaction) -> (Reaction, Reaction) {
    let mut a = part1.clone();
    let mut b = part2.clone();
    if let Some(l) = &original.label {
        a.label.get_or_insert_with(|| format!("{l}'"));
        b.label.get_or_insert_with(|| format!("{l}''"));
    }
    (a, b)
}

/// Replaces reaction `j` by two reactions whose vectors sum to its vector.
/// Parts that coincide with existing reactions are merged into them.
pub fn split_by_reaction_vector(
    net: &Network,
    j: usize,
    part1: &Reaction,
    part2: &Reaction,
) -> Result<Network> {
    let len = net.num_reactions();
    if j >= len {
        return Err(Error::IndexOutOfRange { index: j, len });
    }
    let original = &net.reactions()[j];
    check_split(original, part1, part2)?;
    let (a, b) = split_labels(original, part1, part2);
    let mut reactions = net.reactions().to_vec();
    reactions.splice(j..=j, [a, b]);
    Ok(Network::from_reaction_set(reactions)?.with_species_ranked_by(net.species()))
}

/// `coefficient * prod x_s^e_s` with non-negative integer exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coefficient: Rational,
    pub exponents: BTreeMap<SpeciesId, u32>,
}

impl Monomial {
    pub fn eval(&self, x: &HashMap<SpeciesId, Rational>) -> Rational {
        let mut v = self.coefficient.clone();
        for (s, &e) in &self.exponents {
            let xs = x.get(s).cloned().unwrap_or_else(Rational::zero);
            for _ in 0..e {
                v *= &xs;
            }
        }
        v
    }
}

/// A reaction rate as a sum of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RateFunction {
    pub terms: Vec<Monomial>,
}

impl RateFunction {
    pub fn mass_action(k: Rational, reactant: &Complex) -> Self {
        Self {
            terms: vec![Monomial {
                coefficient: k,
                exponents: reactant.terms().map(|(s, c)| (s.clone(), c)).collect(),
            }],
        }
    }

    /// Rate `k * prod x_s^e_s` for arbitrary (power-law) exponents.
    pub fn power_law(k: Rational, exponents: &Complex) -> Self {
        Self::mass_action(k, exponents)
    }

    pub fn eval(&self, x: &HashMap<SpeciesId, Rational>) -> Rational {
        self.terms.iter().map(|m| m.eval(x)).sum()
    }

    /// Sum of two rates, combining monomials with equal exponents.
    pub fn plus(&self, other: &RateFunction) -> RateFunction {
        let mut terms = self.terms.clone();
        for m in &other.terms {
            match terms.iter_mut().find(|t| t.exponents == m.exponents) {
                Some(t) => t.coefficient += &m.coefficient,
                None => terms.push(m.clone()),
            }
        }
        terms.retain(|t| !t.coefficient.is_zero());
        RateFunction { terms }
    }

    /// True when the rate is a single monomial whose exponents are the
    /// reactant coefficients.
    pub fn is_mass_action_for(&self, reactant: &Complex) -> bool {
        let expected: BTreeMap<SpeciesId, u32> =
            reactant.terms().map(|(s, c)| (s.clone(), c)).collect();
        self.terms.len() == 1 && self.terms[0].exponents == expected
    }
}

/// Reactions with attached rate functions. Repeated reactions are allowed
/// until [`KineticSystem::merged`] is called.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KineticSystem {
    reactions: Vec<(Reaction, RateFunction)>,
}

impl KineticSystem {
    pub fn new(reactions: Vec<(Reaction, RateFunction)>) -> Self {
        Self { reactions }
    }

    /// Mass-action system with one rate constant per reaction.
    pub fn mass_action(net: &Network, k: &[Rational]) -> Result<Self> {
        if k.len() != net.num_reactions() {
            return Err(Error::DimensionMismatch {
                expected: net.num_reactions(),
                actual: k.len(),
            });
        }
        Ok(Self {
            reactions: net
                .reactions()
                .iter()
                .zip(k)
                .map(|(r, k)| (r.clone(), RateFunction::mass_action(k.clone(), &r.reactant)))
                .collect(),
        })
    }

    pub fn reactions(&self) -> &[(Reaction, RateFunction)] {
        &self.reactions
    }

    pub fn len(&self) -> usize {
        self.reactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reactions.is_empty()
    }

    pub fn position(&self, r: &Reaction) -> Option<usize> {
        self.reactions.iter().position(|(q, _)| q.same_as(r))
    }

    /// Species mentioned by reactions or rates.
    pub fn species(&self) -> Vec<SpeciesId> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (r, k) in &self.reactions {
            let from_rates = k.terms.iter().flat_map(|m| m.exponents.keys());
            for s in r.species().chain(from_rates) {
                if seen.insert(s.clone()) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Right-hand side `sum_r K_r(x) (y'_r - y_r)`, zero entries omitted.
    pub fn rhs(&self, x: &HashMap<SpeciesId, Rational>) -> BTreeMap<SpeciesId, Rational> {
        let mut out: BTreeMap<SpeciesId, Rational> = BTreeMap::new();
        for (r, k) in &self.reactions {
            let rate = k.eval(x);
            for (s, c) in r.vector() {
                *out.entry(s).or_insert_with(Rational::zero) +=
                    &rate * Rational::from_integer(c.into());
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Shifts reaction `j` by `z`; the rate function is unchanged.
    pub fn shift(&self, j: usize, z: &[(SpeciesId, i64)]) -> Result<Self> {
        let mut out = self.clone();
        let entry = out.reactions.get_mut(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: self.reactions.len(),
        })?;
        entry.0 = shifted_reaction(&entry.0, &vector_map(z))?;
        Ok(out)
    }

    /// RV-splits reaction `j`; both parts inherit its rate function.
    pub fn split(&self, j: usize, part1: &Reaction, part2: &Reaction) -> Result<Self> {
        let (original, rate) = self.reactions.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: self.reactions.len(),
        })?;
        check_split(original, part1, part2)?;
        let (a, b) = split_labels(original, part1, part2);
        let mut out = self.clone();
        out.reactions
            .splice(j..=j, [(a, rate.clone()), (b, rate.clone())]);
        Ok(out)
    }

    /// Appends a reaction with the given rate.
    pub fn with_reaction(mut self, r: Reaction, k: RateFunction) -> Self {
        self.reactions.push((r, k));
        self
    }

    /// Combines repeated reactions by adding their rates (first label wins).
    pub fn merged(&self) -> Self {
        let mut out: Vec<(Reaction, RateFunction)> = Vec::new();
        for (r, k) in &self.reactions {
            match out.iter_mut().find(|(q, _)| q.same_as(r)) {
                Some((_, acc)) => *acc = acc.plus(k),
                None => out.push((r.clone(), k.clone())),
            }
        }
        Self { reactions: out }
    }

    /// Underlying network (after merging repeats).
    pub fn network(&self) -> Result<Network> {
        Network::from_reaction_set(self.reactions.iter().map(|(r, _)| r.clone()))
    }

    /// Number of reactions whose rate is mass action for their reactant.
    pub fn mass_action_count(&self) -> usize {
        self.reactions
            .iter()
            .filter(|(r, k)| k.is_mass_action_for(&r.reactant))
            .count()
    }
}

/// Random point with positive rational coordinates `p/q`, `p in 1..=1000`,
/// `q in 1..=100`.
pub fn random_positive_point(
    species: &[SpeciesId],
    rng: &mut impl Rng,
) -> HashMap<SpeciesId, Rational> {
    species
        .iter()
        .map(|s| {
            (
                s.clone(),
                ratio(rng.random_range(1..=1000), rng.random_range(1..=100)),
            )
        })
        .collect()
}

/// Exact right-hand-side equality at `points` random positive rational
/// points. Returns the first point where they differ, if any.
pub fn find_rhs_difference(
    a: &KineticSystem,
    b: &KineticSystem,
    points: usize,
    seed: u64,
) -> Option<HashMap<SpeciesId, Rational>> {
    let mut species = a.species();
    for s in b.species() {
        if !species.contains(&s) {
            species.push(s);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..points)
        .map(|_| random_positive_point(&species, &mut rng))
        .find(|x| a.rhs(x) != b.rhs(x))
}

pub fn dynamically_equivalent(
    a: &KineticSystem,
    b: &KineticSystem,
    points: usize,
    seed: u64,
) -> bool {
    find_rhs_difference(a, b, points, seed).is_none()
}

/// Rate constants `1, 2, ..., r` (distinct, so merging errors show up).
pub fn distinct_rates(r: usize) -> Vec<Rational> {
    (1..=r as i64).map(|k| ratio(k, 1)).collect()
}

/// Outcome of a CSEN comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsenReport {
    pub common_species: Vec<SpeciesId>,
    pub embedded1: Network,
    pub embedded2: Network,
    /// Reactions of both original networks.
    pub common_original: Vec<Reaction>,
    /// Common to both embedded networks but not to the originals.
    pub embedding_derived: Vec<Reaction>,
    pub unique1: Vec<Reaction>,
    pub unique2: Vec<Reaction>,
}

pub fn csen(net1: &Network, net2: &Network) -> Result<CsenReport> {
    let other: HashSet<&SpeciesId> = net2.species().iter().collect();
    let common_species: Vec<SpeciesId> = net1
        .species()
        .iter()
        .filter(|s| other.contains(s))
        .cloned()
        .collect();
    if common_species.is_empty() {
        return Err(Error::DisjointSpecies);
    }
    let keep: HashSet<SpeciesId> = common_species.iter().cloned().collect();
    let embedded1 = embedded_network(net1, &keep)?;
    let embedded2 = embedded_network(net2, &keep)?;
    let originals: HashSet<(Complex, Complex)> = net1
        .common_reactions(net2)
        .iter()
        .map(Reaction::key)
        .collect();
    let shared = embedded1.common_reactions(&embedded2);
    let (common_original, embedding_derived): (Vec<Reaction>, Vec<Reaction>) = shared
        .into_iter()
        .partition(|r| originals.contains(&r.key()));
    Ok(CsenReport {
        common_species,
        unique1: embedded1.difference(&embedded2),
        unique2: embedded2.difference(&embedded1),
        embedded1,
        embedded2,
        common_original,
        embedding_derived,
    })
}

/// Position of the core inside one parent network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreParent {
    /// Indices of the parent's FID blocks that meet the core.
    pub blocks: Vec<usize>,
    pub block_labels: Vec<Vec<String>>,
    pub union_rank: usize,
    /// Rank of the union minus the core reactions (0 when empty).
    pub complement_rank: usize,
    /// `{core, union \ core}` is an independent decomposition of the union.
    pub independent_inside_union: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreReport {
    pub core: Network,
    pub reversible: bool,
    pub deficiency: usize,
    pub rank: usize,
    pub parents: [CoreParent; 2],
}

fn core_parent(parent: &Network, core: &Network, core_rank: usize) -> CoreParent {
    let d = fid(parent);
    let in_core: HashSet<usize> = parent
        .indices_of(core.reactions())
        .expect("core reactions belong to each parent")
        .into_iter()
        .collect();
    let blocks: Vec<usize> = (0..d.len())
        .filter(|&i| d.blocks()[i].iter().any(|j| in_core.contains(j)))
        .collect();
    let union: Vec<usize> = {
        let mut u: Vec<usize> = blocks.iter().flat_map(|&i| d.blocks()[i].clone()).collect();
        u.sort_unstable();
        u
    };
    let union_rank = network_rank(&parent.subnetwork(&union).expect("non-empty union"));
    let rest: Vec<usize> = union
        .iter()
        .copied()
        .filter(|j| !in_core.contains(j))
        .collect();
    let complement_rank = if rest.is_empty() {
        0
    } else {
        network_rank(&parent.subnetwork(&rest).expect("valid indices"))
    };
    CoreParent {
        block_labels: blocks.iter().map(|&i| d.block_labels(i)).collect(),
        blocks,
        union_rank,
        complement_rank,
        independent_inside_union: core_rank + complement_rank == union_rank,
    }
}

pub fn core(net1: &Network, net2: &Network) -> Result<CoreReport> {
    let common = net1.common_reactions(net2);
    if common.is_empty() {
        return Err(Error::NoCommonReactions);
    }
    let core = Network::new(common)?.with_species_ranked_by(net1.species());
    let x = network_numbers(&core);
    Ok(CoreReport {
        reversible: is_reversible(&core),
        deficiency: x.deficiency,
        rank: x.rank,
        parents: [
            core_parent(net1, &core, x.rank),
            core_parent(net2, &core, x.rank),
        ],
        core,
    })
}

/// Whether the deficiency zero theorem applies to the core.
pub fn core_is_deficiency_zero(report: &CoreReport) -> bool {
    deficiency_zero_report(&report.core).applies
}

/// Replay of the split that relates the Lee and FAL embedded networks:
/// the Lee reaction `A13 + A2 -> A13 + A23` is RV-split into
/// `A13 + A2 -> 0` and `0 -> A13 + A23`, both with rate `k a13 a2`.
#[derive(Clone, Debug)]
pub struct InflowSplitCheck {
    pub original: KineticSystem,
    pub transformed: KineticSystem,
    pub equivalent: bool,
}

pub fn lee_fal_inflow_split(
    lee: &Network,
    fal: &Network,
    points: usize,
    seed: u64,
) -> Result<InflowSplitCheck> {
    let report = csen(lee, fal)?;
    let le = report.embedded1;
    let target = Reaction::parse("A13 + A2 -> A13 + A23")?;
    let j = le
        .position(&target)
        .ok_or_else(|| Error::Invalid(format!("{target} not in the embedded network")))?;
    let original = KineticSystem::mass_action(&le, &distinct_rates(le.num_reactions()))?;
    let transformed = original.split(
        j,
        &Reaction::parse("A13 + A2 -> 0")?,
        &Reaction::parse("0 -> A13 + A23")?,
    )?;
    let equivalent = dynamically_equivalent(&original, &transformed, points, seed);
    Ok(InflowSplitCheck {
        original,
        transformed,
        equivalent,
    })
}

/// Replay of the transformation of the Schmitz embedded network into the
/// augmented MacLean embedded network without its two outflows.
#[derive(Clone, Debug)]
pub struct SchmitzMacleanTransform {
    pub source: KineticSystem,
    pub transformed: KineticSystem,
    /// Expected reaction set: MacLean embedded plus `A1 <-> 2 A1`, minus
    /// `A4 -> 0` and `A5 -> 0`.
    pub target: Network,
    pub equivalent: bool,
    pub matches_target: bool,
    /// Source reactions carried over untouched.
    pub identity_count: usize,
    pub mass_action_count: usize,
}

pub fn schmitz_maclean_transform(
    schmitz: &Network,
    maclean: &Network,
    points: usize,
    seed: u64,
) -> Result<SchmitzMacleanTransform> {
    let report = csen(schmitz, maclean)?;
    let se = report.embedded1;
    let source = KineticSystem::mass_action(&se, &distinct_rates(se.num_reactions()))?;

    // Each A_i <-> A_j exchange becomes an outflow of the reactant and an
    // inflow of the product, both with the original mass-action rate.
    let mut sys = source.clone();
    for (from, to) in [("A1", "A2"), ("A2", "A1"), ("A1", "A3"), ("A3", "A1")] {
        let r = Reaction::parse(&format!("{from} -> {to}"))?;
        let j = sys
            .position(&r)
            .ok_or_else(|| Error::Invalid(format!("{r} not in the embedded network")))?;
        sys = sys.split(
            j,
            &Reaction::parse(&format!("{from} -> 0"))?,
            &Reaction::parse(&format!("0 -> {to}"))?,
        )?;
    }
    // A zero-net pair 0 <-> A1 with a shared rate, shifted by A1.
    let k3 = RateFunction::power_law(Rational::one(), &Complex::parse("A3")?);
    let n = sys.len();
    sys = sys
        .with_reaction(Reaction::parse("0 -> A1")?, k3.clone())
        .with_reaction(Reaction::parse("A1 -> 0")?, k3);
    let a1 = SpeciesId::new("A1")?;
    sys = sys.shift(n, &[(a1.clone(), 1)])?.shift(n + 1, &[(a1, 1)])?;
    let transformed = sys.merged();

    let augmented = report
        .embedded2
        .union(&Network::parse("A1 -> 2 A1\n2 A1 -> A1")?);
    let outflows = augmented
        .indices_of(&[Reaction::parse("A4 -> 0")?, Reaction::parse("A5 -> 0")?])
        .ok_or_else(|| Error::Invalid("outflows missing from the MacLean embedding".into()))?;
    let target = augmented.without(&outflows)?;

    let equivalent = dynamically_equivalent(&source, &transformed, points, seed);
    let matches_target = transformed.network()?.same_reaction_set(&target);
    let identity_count = source
        .reactions()
        .iter()
        .filter(|(r, k)| {
            transformed
                .position(r)
                .is_some_and(|i| transformed.reactions()[i].1 == *k)
        })
        .count();
    let mass_action_count = transformed.mass_action_count();
    Ok(SchmitzMacleanTransform {
        source,
        transformed,
        target,
        equivalent,
        matches_target,
        identity_count,
        mass_action_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::network::sp;
    use proptest::prelude::*;

    fn set(names: &[&str]) -> HashSet<SpeciesId> {
        names.iter().map(|s| sp(s)).collect()
    }

    fn shown(rs: &[Reaction]) -> Vec<String> {
        let mut v: Vec<String> = rs.iter().map(Reaction::to_string).collect();
        v.sort();
        v
    }

    fn canon(rs: &[&str]) -> Vec<String> {
        let mut v: Vec<String> = rs
            .iter()
            .map(|r| Reaction::parse(r).unwrap().to_string())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn restriction_examples() {
        let lee = fixtures::lee();
        let fal = fixtures::fal();
        let keep: HashSet<SpeciesId> = lee
            .species()
            .iter()
            .filter(|s| fal.species_index(s).is_some())
            .cloned()
            .collect();
        assert_eq!(keep.len(), 14);
        let r40 = &lee.reactions()[lee.find_label("R40").unwrap()];
        let out = restrict_reactions(std::slice::from_ref(r40), &keep);
        assert_eq!(out[0].to_string(), canon(&["A13 + A2 -> A13 + A23"])[0]);
        assert_eq!(out[0].label.as_deref(), Some("R40^E"));
        let r53 = &fal.reactions()[fal.find_label("R53").unwrap()];
        let out = restrict_reactions(std::slice::from_ref(r53), &keep);
        assert_eq!(out[0].to_string(), canon(&["A13 + A2 -> 0"])[0]);

        let all: HashSet<SpeciesId> = lee.species().iter().cloned().collect();
        assert_eq!(embedded_network(&lee, &all).unwrap(), lee);
    }

    #[test]
    fn embedded_sizes() {
        let lee = fixtures::lee();
        let rep = csen(&lee, &fixtures::fal()).unwrap();
        assert_eq!(rep.embedded1.num_reactions(), 22);
        let changed: Vec<String> = rep
            .embedded1
            .reactions()
            .iter()
            .filter_map(|r| r.label.clone())
            .filter(|l| l.ends_with("^E"))
            .collect();
        assert_eq!(changed, vec!["R40^E", "R41^E", "R42^E"]);

        let rep = csen(&fixtures::schmitz(), &fixtures::maclean()).unwrap();
        assert_eq!(rep.embedded1.num_reactions(), 15);
        let r10 = rep.embedded1.find_label("R10^E").unwrap();
        assert_eq!(rep.embedded1.reactions()[r10].to_string(), "A8 -> A1");
    }

    #[test]
    fn embed_unknown_species() {
        assert_eq!(
            embedded_network(&fixtures::lee(), &set(&["Z9"])),
            Err(Error::UnknownSpecies("Z9".into()))
        );
    }

    #[test]
    fn shift_examples() {
        let net = Network::parse("A1 -> A2\n0 -> A1\nA -> B").unwrap();
        assert!(matches!(
            shift(&net, 0, &[(sp("A1"), -1)]),
            Err(Error::NegativeCoefficient { .. })
        ));
        let s = shift(&net, 1, &[(sp("A1"), 1)]).unwrap();
        assert_eq!(s.reactions()[1].to_string(), "A1 -> 2 A1");
        let s = shift(&net, 2, &[(sp("C"), 1)]).unwrap();
        assert_eq!(s.reactions()[2].to_string(), "A + C -> B + C");
        assert_eq!(s.reactions()[2].vector(), net.reactions()[2].vector());
        assert!(matches!(
            shift(&net, 1, &[(sp("A1"), 1), (sp("A2"), 1)]).map(|n| n.num_reactions()),
            Ok(3)
        ));
    }

    #[test]
    fn split_examples() {
        let net = Network::parse("A13 + A2 -> A13 + A23 @ R40").unwrap();
        let s = split_by_reaction_vector(
            &net,
            0,
            &Reaction::parse("A13 + A2 -> 0").unwrap(),
            &Reaction::parse("0 -> A13 + A23").unwrap(),
        )
        .unwrap();
        assert_eq!(s.num_reactions(), 2);
        assert_eq!(s.label(0), "R40'");

        let net = Network::parse("A1 -> A2").unwrap();
        let ok = split_by_reaction_vector(
            &net,
            0,
            &Reaction::parse("A1 -> 0").unwrap(),
            &Reaction::parse("0 -> A2").unwrap(),
        );
        assert!(ok.is_ok());
        let bad = split_by_reaction_vector(
            &net,
            0,
            &Reaction::parse("A1 -> 0").unwrap(),
            &Reaction::parse("0 -> A3").unwrap(),
        );
        assert!(matches!(bad, Err(Error::VectorSumMismatch { .. })));
    }

    #[test]
    fn table_eight() {
        let lee = fixtures::lee();
        let rep = csen(&lee, &fixtures::fal()).unwrap();
        assert_eq!(rep.common_original.len(), 19);
        assert_eq!(
            shown(&rep.embedding_derived),
            canon(&["A23 -> A2", "A2 -> A23"])
        );
        assert_eq!(shown(&rep.unique1), canon(&["A13 + A2 -> A13 + A23"]));
        assert_eq!(
            shown(&rep.unique2),
            canon(&["A13 + A2 -> 0", "0 -> A13 + A23"])
        );
    }

    #[test]
    fn table_twelve() {
        let rep = csen(&fixtures::schmitz(), &fixtures::maclean()).unwrap();
        assert_eq!(rep.common_species.len(), 9);
        assert_eq!(rep.common_original.len(), 9);
        assert_eq!(network_rank(&rep.embedded1), 7);
        let derived: Vec<String> = rep
            .embedding_derived
            .iter()
            .map(|r| format!("{}: {}", r.label.clone().unwrap(), r))
            .collect();
        assert_eq!(derived, vec!["R10^E: A8 -> A1", "R11^E: A9 -> A3"]);
        let u1: Vec<String> = rep
            .unique1
            .iter()
            .map(|r| r.label.clone().unwrap())
            .collect();
        assert_eq!(u1, vec!["R14", "R15", "R16", "R17"]);
        assert_eq!(
            shown(&rep.unique2),
            canon(&[
                "A4 -> 0", "A5 -> 0", "A2 -> 0", "0 -> A2", "A3 -> 0", "0 -> A3", "A1 -> 0",
                "0 -> A1"
            ])
        );
    }

    #[test]
    fn table_fourteen() {
        let rep = csen(&fixtures::fal(), &fixtures::maclean()).unwrap();
        assert_eq!(
            shown(&rep.embedding_derived),
            canon(&["0 -> A1", "A2 -> 0", "0 -> A2", "0 -> A13"])
        );
        assert_eq!(rep.embedding_derived[0].label.as_deref(), Some("R46^E"));
        assert_eq!(
            shown(&rep.unique1),
            canon(&[
                "A1 -> A2",
                "A2 -> A1",
                "A8 -> 0",
                "A4 + A6 -> A7",
                "A7 -> A4 + A6",
                "A13 + A2 -> 0"
            ])
        );
        assert_eq!(
            shown(&rep.unique2),
            canon(&[
                "A6 -> A7",
                "A7 -> A6",
                "A13 -> 0",
                "A13 + A1 -> 0",
                "0 -> A13 + A1",
                "0 -> A13 + A2",
                "A8 -> A1",
            ])
        );
    }

    #[test]
    fn csen_disjoint() {
        let a = Network::parse("A -> B").unwrap();
        let b = Network::parse("C -> D").unwrap();
        assert_eq!(csen(&a, &b), Err(Error::DisjointSpecies));
    }

    #[test]
    fn csen_classes_partition() {
        for (a, b) in [
            (fixtures::lee(), fixtures::fal()),
            (fixtures::schmitz(), fixtures::maclean()),
            (fixtures::fal(), fixtures::maclean()),
        ] {
            let rep = csen(&a, &b).unwrap();
            let keys = |rs: &[Reaction]| rs.iter().map(Reaction::key).collect::<HashSet<_>>();
            let classes = [
                keys(&rep.common_original),
                keys(&rep.embedding_derived),
                keys(&rep.unique1),
                keys(&rep.unique2),
            ];
            let total: usize = classes.iter().map(HashSet::len).sum();
            let all: HashSet<_> = classes.iter().flatten().cloned().collect();
            assert_eq!(total, all.len());
            assert_eq!(all, keys(rep.embedded1.union(&rep.embedded2).reactions()));
            // common originals are untouched by restriction
            for r in &rep.common_original {
                assert!(a.contains(r) && b.contains(r));
            }
        }
    }

    #[test]
    fn core_schmitz_augmented() {
        let rep = core(&fixtures::schmitz_augmented(), &fixtures::maclean()).unwrap();
        assert_eq!(rep.core.num_reactions(), 10);
        assert!(rep.reversible && rep.deficiency == 0 && rep.rank == 5);
        assert!(core_is_deficiency_zero(&rep));
        let m = &rep.parents[1];
        assert_eq!(m.blocks, vec![0, 1]);
        assert_eq!(m.union_rank, 5);
    }

    #[test]
    fn core_fal_maclean() {
        let rep = core(&fixtures::fal(), &fixtures::maclean()).unwrap();
        let labels: Vec<String> = (0..rep.core.num_reactions())
            .map(|j| rep.core.label(j))
            .collect();
        assert_eq!(labels, vec!["R1", "R4", "R5", "R18", "R19", "R38"]);
        assert!(rep.reversible && rep.deficiency == 0 && rep.rank == 3);
        let [f, m] = &rep.parents;
        assert_eq!(f.blocks, vec![0, 2]);
        assert_eq!((f.union_rank, f.complement_rank), (5, 3));
        assert!(!f.independent_inside_union);
        assert_eq!(m.blocks, vec![0, 2]);
        assert_eq!((m.union_rank, m.complement_rank), (5, 4));
        assert!(!m.independent_inside_union);
    }

    #[test]
    fn core_errors_and_self() {
        let a = Network::parse("A -> B").unwrap();
        let b = Network::parse("B -> A").unwrap();
        assert_eq!(core(&a, &b), Err(Error::NoCommonReactions));
        let s = fixtures::schmitz();
        let rep = core(&s, &s).unwrap();
        assert_eq!(rep.core, s);
        assert!(rep.parents[0].independent_inside_union);
    }

    #[test]
    fn inflow_split_equivalence() {
        let check = lee_fal_inflow_split(&fixtures::lee(), &fixtures::fal(), 200, 7).unwrap();
        assert!(check.equivalent);
        assert_eq!(check.transformed.len(), check.original.len() + 1);
    }

    #[test]
    fn schmitz_maclean_scenario() {
        let t =
            schmitz_maclean_transform(&fixtures::schmitz(), &fixtures::maclean(), 200, 11).unwrap();
        assert!(t.equivalent);
        assert!(t.matches_target);
        assert_eq!(t.transformed.len(), 19);
        assert_eq!(t.identity_count, 11);
        assert_eq!(t.mass_action_count, 14);
    }

    #[test]
    fn altered_rates_are_detected() {
        let net = Network::parse("A -> B\nB -> A").unwrap();
        let a = KineticSystem::mass_action(&net, &distinct_rates(2)).unwrap();
        let b = KineticSystem::mass_action(&net, &[ratio(1, 1), ratio(3, 1)]).unwrap();
        assert!(!dynamically_equivalent(&a, &b, 5, 0));
    }

    fn small_reaction() -> impl Strategy<Value = Reaction> {
        let c = proptest::collection::vec(0u32..3, 3);
        (c.clone(), c).prop_filter_map("non-trivial", |(a, b)| {
            let mk = |v: &Vec<u32>| {
                Complex::from_terms(
                    v.iter()
                        .enumerate()
                        .filter(|(_, &c)| c > 0)
                        .map(|(i, &c)| (sp(["A", "B", "C"][i]), c)),
                )
            };
            Reaction::new(mk(&a), mk(&b)).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn shift_preserves_dynamics(r in small_reaction(), z in proptest::collection::vec(0i64..3, 3), k in 1i64..50) {
            let z: Vec<(SpeciesId, i64)> = z.iter().enumerate().map(|(i, &c)| (sp(["A", "B", "C"][i]), c)).collect();
            let net = Network::new(vec![r]).unwrap();
            let sys = KineticSystem::mass_action(&net, &[ratio(k, 1)]).unwrap();
            let shifted = sys.shift(0, &z).unwrap();
            prop_assert_eq!(shifted.reactions()[0].0.vector(), sys.reactions()[0].0.vector());
            prop_assert!(dynamically_equivalent(&sys, &shifted, 200, k as u64));
        }

        #[test]
        fn split_preserves_dynamics(r in small_reaction(), mid in proptest::collection::vec(0u32..3, 3)) {
            let mid = Complex::from_terms(mid.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (sp(["A", "B", "C"][i]), c)));
            prop_assume!(mid != r.reactant && mid != r.product);
            let p1 = Reaction::new(r.reactant.clone(), mid.clone()).unwrap();
            let p2 = Reaction::new(mid, r.product.clone()).unwrap();
            let net = Network::new(vec![r]).unwrap();
            let sys = KineticSystem::mass_action(&net, &[ratio(3, 2)]).unwrap();
            let split = sys.split(0, &p1, &p2).unwrap();
            prop_assert!(dynamically_equivalent(&sys, &split, 200, 1));
        }

        #[test]
        fn restriction_idempotent(drop in 0usize..15) {
            let net = fixtures::fal();
            let keep: HashSet<SpeciesId> = net.species().iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, s)| s.clone()).collect();
            let once = restrict_reactions(net.reactions(), &keep);
            for r in &once {
                prop_assert!(r.species().all(|s| keep.contains(s)));
            }
            let twice = restrict_reactions(&once, &keep);
            let keys = |v: &[Reaction]| v.iter().map(Reaction::key).collect::<Vec<_>>();
            prop_assert_eq!(keys(&once), keys(&twice));
        }
    }
}
