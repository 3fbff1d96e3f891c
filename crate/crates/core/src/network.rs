//! Reaction-network data model, the `.crn` text format, matrix builders and
//! set algebra over reactions.
//!
//! A `.crn` file holds one reaction per line:
//!
//! ```text
//! # comment
//! 2 X1 + X2 -> X3 @ R1
//! A4 <-> 0 @ R38, R39
//! ```
//!
//! `0` is the zero complex. A `<->` line expands to the forward reaction
//! followed by its reverse; its optional label part names both reactions,
//! separated by a comma.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratlin::{rat, Rational, RationalMatrix};

/// Species name: letters, digits and underscores, not starting with a digit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SpeciesId(String);

impl SpeciesId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let mut chars = name.chars();
        let valid = match chars.next() {
            Some(c) if c.is_alphabetic() || c == '_' => {
                chars.all(|c| c.is_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if valid {
            Ok(Self(name))
        } else {
            Err(Error::InvalidSpecies(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SpeciesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Builds a species id, panicking on an invalid name. Meant for literals.
pub fn sp(name: &str) -> SpeciesId {
    SpeciesId::new(name).expect("valid species literal")
}

/// A non-negative integer combination of species. The empty combination is
/// the zero complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex {
    terms: BTreeMap<SpeciesId, u32>,
}

impl Complex {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Collects terms, summing repeated species and dropping zero
    /// coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (SpeciesId, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (s, c) in terms {
            if c > 0 {
                *map.entry(s).or_insert(0) += c;
            }
        }
        Self { terms: map }
    }

    /// Parses a single complex such as `2 A1 + A4` or `0`.
    pub fn parse(text: &str) -> Result<Self> {
        parse_complex(text).map_err(|message| Error::Syntax { line: 0, message })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, species: &SpeciesId) -> u32 {
        self.terms.get(species).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SpeciesId, u32)> {
        self.terms.iter().map(|(s, &c)| (s, c))
    }

    /// Species with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = &SpeciesId> {
        self.terms.keys()
    }

    /// Drops every species not in `keep`.
    pub fn restricted_to(&self, keep: &HashSet<SpeciesId>) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| keep.contains(*s))
                .map(|(s, &c)| (s.clone(), c))
                .collect(),
        }
    }

    /// Adds the integer vector `z`; fails if any coefficient turns negative.
    pub fn shifted(&self, z: &BTreeMap<SpeciesId, i64>) -> Result<Self> {
        let mut terms: BTreeMap<SpeciesId, i64> = self
            .terms
            .iter()
            .map(|(s, &c)| (s.clone(), i64::from(c)))
            .collect();
        for (s, &dz) in z {
            *terms.entry(s.clone()).or_insert(0) += dz;
        }
        let mut out = BTreeMap::new();
        for (s, c) in terms {
            if c < 0 {
                return Err(Error::NegativeCoefficient {
                    species: s.to_string(),
                });
            }
            if c > 0 {
                out.insert(
                    s,
                    u32::try_from(c).map_err(|_| Error::Invalid("coefficient overflow".into()))?,
                );
            }
        }
        Ok(Self { terms: out })
    }

    /// Formats the complex with terms ordered by `rank`.
    pub fn display_ordered<F>(&self, rank: F) -> String
    where
        F: Fn(&SpeciesId) -> usize,
    {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&SpeciesId, u32)> = self.terms().collect();
        terms.sort_by_key(|(s, _)| rank(s));
        terms
            .iter()
            .map(|(s, c)| {
                if *c == 1 {
                    s.to_string()
                } else {
                    format!("{c} {s}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Orders species names like `A2 < A13` by comparing digit runs numerically.
pub fn natural_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    fn split(s: &str) -> (String, Option<u64>) {
        let digits_at = s.rfind(|c: char| !c.is_ascii_digit()).map_or(0, |i| i + 1);
        let (head, tail) = s.split_at(digits_at);
        (head.to_string(), tail.parse().ok())
    }
    let (ha, na) = split(a);
    let (hb, nb) = split(b);
    ha.cmp(&hb).then(na.cmp(&nb)).then(a.cmp(b))
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&SpeciesId, u32)> = self.terms().collect();
        terms.sort_by(|a, b| natural_cmp(a.0.as_str(), b.0.as_str()));
        let parts: Vec<String> = terms
            .iter()
            .map(|(s, c)| {
                if *c == 1 {
                    s.to_string()
                } else {
                    format!("{c} {s}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A reaction `reactant -> product`. Equality of reactions as network
/// members is structural (see [`Reaction::same_as`]); the derived
/// `PartialEq` also compares labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Reaction {
    pub reactant: Complex,
    pub product: Complex,
    pub label: Option<String>,
}

impl Reaction {
    pub fn new(reactant: Complex, product: Complex) -> Result<Self> {
        if reactant == product {
            return Err(Error::TrivialReaction {
                reaction: format!("{reactant} -> {product}"),
            });
        }
        Ok(Self {
            reactant,
            product,
            label: None,
        })
    }

    /// Parses `reactant -> product`.
    pub fn parse(text: &str) -> Result<Self> {
        let (l, r) = text
            .split_once("->")
            .ok_or_else(|| Error::Invalid(format!("no arrow in {text:?}")))?;
        Self::new(Complex::parse(l)?, Complex::parse(r)?)
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Structural identity: same reactant and product, labels ignored.
    pub fn same_as(&self, other: &Reaction) -> bool {
        self.reactant == other.reactant && self.product == other.product
    }

    pub fn key(&self) -> (Complex, Complex) {
        (self.reactant.clone(), self.product.clone())
    }

    pub fn reversed(&self) -> Reaction {
        Reaction {
            reactant: self.product.clone(),
            product: self.reactant.clone(),
            label: None,
        }
    }

    /// Reaction vector (product minus reactant) as a sparse species map.
    pub fn vector(&self) -> BTreeMap<SpeciesId, i64> {
        let mut v: BTreeMap<SpeciesId, i64> = BTreeMap::new();
        for (s, c) in self.product.terms() {
            *v.entry(s.clone()).or_insert(0) += i64::from(c);
        }
        for (s, c) in self.reactant.terms() {
            *v.entry(s.clone()).or_insert(0) -= i64::from(c);
        }
        v.retain(|_, c| *c != 0);
        v
    }

    /// Species occurring on either side.
    pub fn species(&self) -> impl Iterator<Item = &SpeciesId> {
        self.reactant.support().chain(self.product.support())
    }
}

impl fmt::Display for Reaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.reactant, self.product)
    }
}

/// A chemical reaction network: distinct, non-trivial reactions and the
/// species they mention, ordered by first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    species: Vec<SpeciesId>,
    reactions: Vec<Reaction>,
}

impl Network {
    /// Validates the reactions and derives the species list.
    pub fn new(reactions: Vec<Reaction>) -> Result<Self> {
        if reactions.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let mut seen = HashSet::new();
        for r in &reactions {
            if r.reactant == r.product {
                return Err(Error::TrivialReaction {
                    reaction: r.to_string(),
                });
            }
            if !seen.insert(r.key()) {
                return Err(Error::DuplicateReaction {
                    reaction: r.to_string(),
                });
            }
        }
        let species = derive_species(&reactions, |a, b| natural_cmp(a.as_str(), b.as_str()));
        Ok(Self { species, reactions })
    }

    /// Builds a network from reactions, silently dropping structural
    /// duplicates (first copy wins).
    pub fn from_reaction_set(reactions: impl IntoIterator<Item = Reaction>) -> Result<Self> {
        let mut seen = HashSet::new();
        let unique: Vec<Reaction> = reactions
            .into_iter()
            .filter(|r| seen.insert(r.key()))
            .collect();
        Self::new(unique)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_network(text)
    }

    pub fn species(&self) -> &[SpeciesId] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_index(&self, s: &SpeciesId) -> Option<usize> {
        self.species.iter().position(|x| x == s)
    }

    pub fn species_ranks(&self) -> HashMap<SpeciesId, usize> {
        self.species
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect()
    }

    /// Index of the reaction structurally equal to `r`.
    pub fn position(&self, r: &Reaction) -> Option<usize> {
        self.reactions.iter().position(|x| x.same_as(r))
    }

    pub fn contains(&self, r: &Reaction) -> bool {
        self.position(r).is_some()
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.reactions
            .iter()
            .position(|r| r.label.as_deref() == Some(label))
    }

    /// Label of reaction `j`, or `#<j+1>` when unlabeled.
    pub fn label(&self, j: usize) -> String {
        self.reactions[j]
            .label
            .clone()
            .unwrap_or_else(|| format!("#{}", j + 1))
    }

    /// Formats a complex with terms in this network's species order.
    pub fn format_complex(&self, c: &Complex) -> String {
        let ranks = self.species_ranks();
        c.display_ordered(|s| ranks.get(s).copied().unwrap_or(usize::MAX))
    }

    pub fn format_reaction(&self, r: &Reaction) -> String {
        format!(
            "{} -> {}",
            self.format_complex(&r.reactant),
            self.format_complex(&r.product)
        )
    }

    /// Reaction vector of reaction `j` in species order.
    pub fn reaction_vector(&self, j: usize) -> Vec<i64> {
        let r = &self.reactions[j];
        self.species
            .iter()
            .map(|s| i64::from(r.product.coefficient(s)) - i64::from(r.reactant.coefficient(s)))
            .collect()
    }

    /// Reactant complex of reaction `j` in species order.
    pub fn reactant_vector(&self, j: usize) -> Vec<i64> {
        let r = &self.reactions[j];
        self.species
            .iter()
            .map(|s| i64::from(r.reactant.coefficient(s)))
            .collect()
    }

    /// Distinct complexes in first-appearance order (reactant before product).
    pub fn complexes(&self) -> Vec<Complex> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for r in &self.reactions {
            for c in [&r.reactant, &r.product] {
                if seen.insert(c.clone()) {
                    out.push(c.clone());
                }
            }
        }
        out
    }

    /// Subnetwork generated by the selected reactions, kept in parent order.
    pub fn subnetwork(&self, indices: &[usize]) -> Result<Network> {
        if indices.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let mut picked = vec![false; self.reactions.len()];
        for &i in indices {
            if i >= self.reactions.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.reactions.len(),
                });
            }
            if picked[i] {
                return Err(Error::RepeatedIndex(i));
            }
            picked[i] = true;
        }
        let reactions = self
            .reactions
            .iter()
            .zip(&picked)
            .filter(|(_, &p)| p)
            .map(|(r, _)| r.clone())
            .collect();
        Ok(Network::new(reactions)?.with_species_ranked_by(&self.species))
    }

    /// Subnetwork of all reactions except the given ones.
    pub fn without(&self, indices: &[usize]) -> Result<Network> {
        let drop: HashSet<usize> = indices.iter().copied().collect();
        let keep: Vec<usize> = (0..self.reactions.len())
            .filter(|i| !drop.contains(i))
            .collect();
        self.subnetwork(&keep)
    }

    /// Reaction-set union: this network's reactions first, then the other's
    /// reactions not already present.
    pub fn union(&self, other: &Network) -> Network {
        let mut reference = self.species.clone();
        reference.extend(
            other
                .species
                .iter()
                .filter(|s| !self.species.contains(s))
                .cloned(),
        );
        Network::from_reaction_set(self.reactions.iter().chain(other.reactions.iter()).cloned())
            .expect("union of non-empty networks is non-empty")
            .with_species_ranked_by(&reference)
    }

    /// Reactions of `self` that also occur in `other`, in `self`'s order and
    /// with `self`'s labels.
    pub fn common_reactions(&self, other: &Network) -> Vec<Reaction> {
        let keys: HashSet<(Complex, Complex)> = other.reactions.iter().map(Reaction::key).collect();
        self.reactions
            .iter()
            .filter(|r| keys.contains(&r.key()))
            .cloned()
            .collect()
    }

    /// Reactions of `self` that do not occur in `other`.
    pub fn difference(&self, other: &Network) -> Vec<Reaction> {
        let keys: HashSet<(Complex, Complex)> = other.reactions.iter().map(Reaction::key).collect();
        self.reactions
            .iter()
            .filter(|r| !keys.contains(&r.key()))
            .cloned()
            .collect()
    }

    /// Indices in `self` of the given reactions (structural match).
    pub fn indices_of(&self, reactions: &[Reaction]) -> Option<Vec<usize>> {
        reactions.iter().map(|r| self.position(r)).collect()
    }

    /// Same reaction set, ignoring order and labels.
    pub fn same_reaction_set(&self, other: &Network) -> bool {
        let a: HashSet<_> = self.reactions.iter().map(Reaction::key).collect();
        let b: HashSet<_> = other.reactions.iter().map(Reaction::key).collect();
        a == b
    }

    /// Serializes to the `.crn` format.
    pub fn to_crn(&self) -> String {
        serialize_network(self)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_network(self))
    }
}

/// Species of `r` in first-appearance order, with the terms of each complex
/// sorted by `cmp`.
fn ordered_species<F>(r: &Reaction, cmp: &F) -> Vec<SpeciesId>
where
    F: Fn(&SpeciesId, &SpeciesId) -> std::cmp::Ordering,
{
    let mut out = Vec::new();
    for c in [&r.reactant, &r.product] {
        let mut part: Vec<SpeciesId> = c.support().cloned().collect();
        part.sort_by(cmp);
        out.extend(part);
    }
    out
}

fn derive_species<F>(reactions: &[Reaction], cmp: F) -> Vec<SpeciesId>
where
    F: Fn(&SpeciesId, &SpeciesId) -> std::cmp::Ordering,
{
    let mut known = HashSet::new();
    let mut species = Vec::new();
    for r in reactions {
        for s in ordered_species(r, &cmp) {
            if known.insert(s.clone()) {
                species.push(s);
            }
        }
    }
    species
}

impl Network {
    /// Replaces the derived species order by `order`, which must list exactly
    /// the network's species.
    fn with_species_order(mut self, order: Vec<SpeciesId>) -> Self {
        debug_assert_eq!(
            order.iter().collect::<HashSet<_>>(),
            self.species.iter().collect::<HashSet<_>>()
        );
        self.species = order;
        self
    }

    /// Re-derives the species order, sorting terms inside each complex by
    /// their rank in `reference` (unknown species last, in natural order).
    /// This is the order a parse of the serialized network would produce.
    pub(crate) fn with_species_ranked_by(mut self, reference: &[SpeciesId]) -> Self {
        let ranks: HashMap<&SpeciesId, usize> =
            reference.iter().enumerate().map(|(i, s)| (s, i)).collect();
        self.species = derive_species(&self.reactions, |a, b| {
            let ra = ranks.get(a).copied().unwrap_or(usize::MAX);
            let rb = ranks.get(b).copied().unwrap_or(usize::MAX);
            ra.cmp(&rb)
                .then_with(|| natural_cmp(a.as_str(), b.as_str()))
        });
        self
    }
}

fn parse_complex(text: &str) -> std::result::Result<Complex, String> {
    parse_complex_ordered(text).map(|(c, _)| c)
}

/// Parses a complex and also returns its species in textual order.
fn parse_complex_ordered(text: &str) -> std::result::Result<(Complex, Vec<SpeciesId>), String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty complex".into());
    }
    if text == "0" {
        return Ok((Complex::zero(), Vec::new()));
    }
    let mut terms = Vec::new();
    let mut order = Vec::new();
    for raw in text.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            return Err(format!("empty term in complex {text:?}"));
        }
        let digits = term.chars().take_while(char::is_ascii_digit).count();
        let (num, rest) = term.split_at(digits);
        let coeff: u32 = if num.is_empty() {
            1
        } else {
            num.parse()
                .map_err(|_| format!("bad coefficient {num:?}"))?
        };
        if coeff == 0 {
            return Err(format!("coefficient must be positive in {term:?}"));
        }
        let name = rest.trim();
        if name.is_empty() {
            return Err(format!("missing species in term {term:?}"));
        }
        let s = SpeciesId::new(name).map_err(|_| format!("invalid species name {name:?}"))?;
        order.push(s.clone());
        terms.push((s, coeff));
    }
    Ok((Complex::from_terms(terms), order))
}

/// Parses the `.crn` text format.
pub fn parse_network(text: &str) -> Result<Network> {
    let mut reactions = Vec::new();
    let mut species_order = Vec::new();
    let mut known = HashSet::new();
    let mut seen: HashMap<(Complex, Complex), usize> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| Error::Syntax {
            line: line_no,
            message,
        };
        let (body, label) = match line.split_once('@') {
            Some((b, l)) => {
                let l = l.trim();
                if l.is_empty() {
                    return Err(syntax("empty label after '@'".into()));
                }
                (b, Some(l))
            }
            None => (line, None),
        };
        let (lhs, rhs, reversible) = if let Some((l, r)) = body.split_once("<->") {
            (l, r, true)
        } else if let Some((l, r)) = body.split_once("->") {
            (l, r, false)
        } else {
            return Err(syntax("expected '->' or '<->'".into()));
        };
        if rhs.contains("->") {
            return Err(syntax("more than one arrow".into()));
        }
        let (reactant, mut order) = parse_complex_ordered(lhs).map_err(&syntax)?;
        let (product, order_r) = parse_complex_ordered(rhs).map_err(&syntax)?;
        order.extend(order_r);

        let (label_fwd, label_rev) = match (label, reversible) {
            (None, _) => (None, None),
            (Some(l), false) => (Some(l.to_string()), None),
            (Some(l), true) => match l.split_once(',') {
                Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => {
                    (Some(a.trim().to_string()), Some(b.trim().to_string()))
                }
                _ => {
                    return Err(syntax(
                        "a '<->' line needs two comma-separated labels".into(),
                    ))
                }
            },
        };

        if reactant == product {
            return Err(Error::TrivialReaction {
                reaction: format!("{reactant} -> {product} (line {line_no})"),
            });
        }
        let mut push = |r: Reaction| -> Result<()> {
            if let Some(prev) = seen.insert(r.key(), line_no) {
                return Err(Error::DuplicateReaction {
                    reaction: format!("{r} (lines {prev} and {line_no})"),
                });
            }
            reactions.push(r);
            Ok(())
        };
        push(Reaction {
            reactant: reactant.clone(),
            product: product.clone(),
            label: label_fwd,
        })?;
        if reversible {
            push(Reaction {
                reactant: product,
                product: reactant,
                label: label_rev,
            })?;
        }
        for s in order {
            if known.insert(s.clone()) {
                species_order.push(s);
            }
        }
    }
    let net = Network::new(reactions)?;
    Ok(net.with_species_order(species_order))
}

/// Writes the `.crn` format: one `->` line per reaction, terms in species
/// order, labels after `@`.
pub fn serialize_network(net: &Network) -> String {
    let mut out = String::new();
    for r in &net.reactions {
        out.push_str(&net.format_reaction(r));
        if let Some(l) = &r.label {
            out.push_str(" @ ");
            out.push_str(l);
        }
        out.push('\n');
    }
    out
}

/// The matrices attached to a network. Complex order is first appearance.
#[derive(Clone, Debug)]
pub struct NetworkMatrices {
    /// Molecularity matrix, species x complexes.
    pub y: RationalMatrix,
    /// Incidence matrix, complexes x reactions.
    pub ia: RationalMatrix,
    pub ia_plus: RationalMatrix,
    pub ia_minus: RationalMatrix,
    /// Stoichiometric matrix, species x reactions.
    pub n: RationalMatrix,
    /// Reactant matrix, species x reactions.
    pub n_minus: RationalMatrix,
    pub complexes: Vec<Complex>,
}

pub fn build_matrices(net: &Network) -> NetworkMatrices {
    let complexes = net.complexes();
    let index: HashMap<&Complex, usize> =
        complexes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let m = net.num_species();
    let nc = complexes.len();
    let r = net.num_reactions();

    let mut y = RationalMatrix::zeros(m, nc);
    for (j, c) in complexes.iter().enumerate() {
        for (i, s) in net.species().iter().enumerate() {
            let v = c.coefficient(s);
            if v != 0 {
                y.set(i, j, rat(i64::from(v)));
            }
        }
    }
    let mut ia_plus = RationalMatrix::zeros(nc, r);
    let mut ia_minus = RationalMatrix::zeros(nc, r);
    for (j, rx) in net.reactions().iter().enumerate() {
        ia_minus.set(index[&rx.reactant], j, rat(1));
        ia_plus.set(index[&rx.product], j, rat(1));
    }
    let ia = ia_plus.sub(&ia_minus);
    let n = y.mul(&ia);
    let n_minus = y.mul(&ia_minus);
    NetworkMatrices {
        y,
        ia,
        ia_plus,
        ia_minus,
        n,
        n_minus,
        complexes,
    }
}

/// Stoichiometric matrix built directly from the reaction vectors.
pub fn stoichiometric_matrix(net: &Network) -> RationalMatrix {
    let cols: Vec<Vec<Rational>> = (0..net.num_reactions())
        .map(|j| net.reaction_vector(j).into_iter().map(rat).collect())
        .collect();
    RationalMatrix::from_columns(net.num_species(), &cols)
}

/// Reactant matrix built directly from the reactant complexes.
pub fn reactant_matrix(net: &Network) -> RationalMatrix {
    let cols: Vec<Vec<Rational>> = (0..net.num_reactions())
        .map(|j| net.reactant_vector(j).into_iter().map(rat).collect())
        .collect();
    RationalMatrix::from_columns(net.num_species(), &cols)
}

/// Rank of the network's reaction vectors.
pub fn network_rank(net: &Network) -> usize {
    crate::ratlin::rank(&stoichiometric_matrix(net))
}

/// `true` when every column of `m` is zero.
pub fn is_zero_matrix(m: &RationalMatrix) -> bool {
    (0..m.rows()).all(|i| m.row(i).iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_weighted_reaction() {
        let net = parse_network("2 X1 + X2 -> X3").unwrap();
        assert_eq!(net.num_reactions(), 1);
        let r = &net.reactions()[0];
        assert_eq!(r.reactant.coefficient(&sp("X1")), 2);
        assert_eq!(r.reactant.coefficient(&sp("X2")), 1);
        assert_eq!(r.product, Complex::from_terms([(sp("X3"), 1)]));
        assert_eq!(net.species(), &[sp("X1"), sp("X2"), sp("X3")]);
    }

    #[test]
    fn reversible_line_expands_forward_first() {
        let net = parse_network("A4 <-> 0").unwrap();
        assert_eq!(net.num_reactions(), 2);
        assert_eq!(net.reactions()[0].to_string(), "A4 -> 0");
        assert_eq!(net.reactions()[1].to_string(), "0 -> A4");
        let labeled = parse_network("A4 <-> 0 @ R38, R1").unwrap();
        assert_eq!(labeled.reactions()[1].label.as_deref(), Some("R1"));
        assert!(matches!(
            parse_network("A4 <-> 0 @ R38"),
            Err(Error::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn rejects_trivial_and_duplicate() {
        assert!(matches!(
            parse_network("X -> X"),
            Err(Error::TrivialReaction { .. })
        ));
        assert!(matches!(
            parse_network("A -> B @ R1\nA -> B @ R2"),
            Err(Error::DuplicateReaction { .. })
        ));
        assert!(matches!(
            parse_network("A -> B\nB <-> A"),
            Err(Error::DuplicateReaction { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_network("# ok\nA -> B\nA => B").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 3,
                message: "expected '->' or '<->'".into()
            }
        );
        assert!(matches!(
            parse_network("A + -> B"),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_network("0 A -> B"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_network("1A -> 2B -> C"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_network("A -> B @"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(parse_network(""), Err(Error::EmptyNetwork)));
    }

    #[test]
    fn compact_coefficients_parse() {
        let net = parse_network("2X1+X2->3 X4").unwrap();
        assert_eq!(net.reactions()[0].reactant.coefficient(&sp("X1")), 2);
        assert_eq!(net.reactions()[0].product.coefficient(&sp("X4")), 3);
    }

    #[test]
    fn species_follow_textual_first_appearance() {
        let net = parse_network("A13 + A2 -> A28\nA2 -> A1").unwrap();
        assert_eq!(net.species(), &[sp("A13"), sp("A2"), sp("A28"), sp("A1")]);
    }

    #[test]
    fn serializer_formats() {
        let net = parse_network("0 -> A @ R1\n2 A + B -> C").unwrap();
        assert_eq!(net.to_crn(), "0 -> A @ R1\n2 A + B -> C\n");
    }

    #[test]
    fn matrices_for_inflow() {
        let net = parse_network("0 -> A").unwrap();
        let mats = build_matrices(&net);
        assert_eq!(mats.y, RationalMatrix::from_i64_rows(&[vec![0, 1]]));
        assert_eq!(mats.n, RationalMatrix::from_i64_rows(&[vec![1]]));
    }

    #[test]
    fn reversible_pair_columns_negate() {
        let net = parse_network("A -> B\nB -> A").unwrap();
        let n = build_matrices(&net).n;
        for i in 0..n.rows() {
            assert_eq!(n.get(i, 0), &-n.get(i, 1).clone());
        }
    }

    #[test]
    fn subnetwork_errors() {
        let net = parse_network("A -> B\nB -> C").unwrap();
        assert_eq!(net.subnetwork(&[]), Err(Error::EmptyNetwork));
        assert_eq!(
            net.subnetwork(&[2]),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        );
        assert_eq!(net.subnetwork(&[0, 0]), Err(Error::RepeatedIndex(0)));
        assert_eq!(net.subnetwork(&[0, 1]).unwrap(), net);
        let sub = net.subnetwork(&[1]).unwrap();
        assert_eq!(sub.species(), &[sp("B"), sp("C")]);
    }

    #[test]
    fn species_name_rules() {
        assert!(SpeciesId::new("X_1").is_ok());
        assert!(SpeciesId::new("_x").is_ok());
        assert!(SpeciesId::new("1X").is_err());
        assert!(SpeciesId::new("").is_err());
        assert!(SpeciesId::new("A-B").is_err());
    }

    #[test]
    fn shifting_a_complex() {
        let c = Complex::parse("A1").unwrap();
        let z: BTreeMap<SpeciesId, i64> = [(sp("A1"), -2)].into_iter().collect();
        assert!(matches!(
            c.shifted(&z),
            Err(Error::NegativeCoefficient { .. })
        ));
        let z: BTreeMap<SpeciesId, i64> = [(sp("A1"), 1)].into_iter().collect();
        assert_eq!(c.shifted(&z).unwrap(), Complex::parse("2 A1").unwrap());
    }

    #[test]
    fn natural_order() {
        assert_eq!(natural_cmp("A2", "A13"), std::cmp::Ordering::Less);
        assert_eq!(Complex::parse("A13 + A2").unwrap().to_string(), "A2 + A13");
    }
}
