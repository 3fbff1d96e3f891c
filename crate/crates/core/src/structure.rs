//! Network numbers, linkage classes, structural flags and the deficiency
//! zero report.

use std::collections::{HashMap, HashSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::network::{reactant_matrix, stoichiometric_matrix, Complex, Network};
use crate::ratlin::rank;

/// The thirteen integer descriptors of a network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NetworkNumbers {
    /// m
    pub species: usize,
    /// n
    pub complexes: usize,
    /// n_r
    pub reactant_complexes: usize,
    /// r_rev: unordered pairs {y -> y', y' -> y}
    pub reversible_reactions: usize,
    /// r_irrev
    pub irreversible_reactions: usize,
    /// r
    pub reactions: usize,
    /// l
    pub linkage_classes: usize,
    /// sl
    pub strong_linkage_classes: usize,
    /// t
    pub terminal_strong_linkage_classes: usize,
    /// s
    pub rank: usize,
    /// q
    pub reactant_rank: usize,
    /// delta = n - l - s
    pub deficiency: usize,
    /// delta_p = n_r - q
    pub reactant_deficiency: usize,
}

impl NetworkNumbers {
    pub const ROW_NAMES: [&'static str; 13] = [
        "Species",
        "Complexes",
        "Reactant complexes",
        "Reversible reactions",
        "Irreversible reactions",
        "Reactions",
        "Linkage classes",
        "Strong linkage classes",
        "Terminal strong linkage classes",
        "Rank",
        "Reactant rank",
        "Deficiency",
        "Reactant deficiency",
    ];

    pub const SYMBOLS: [&'static str; 13] = [
        "m", "n", "n_r", "r_rev", "r_irrev", "r", "l", "sl", "t", "s", "q", "delta", "delta_p",
    ];

    /// Values in the order of [`Self::ROW_NAMES`].
    pub fn as_array(&self) -> [usize; 13] {
        [
            self.species,
            self.complexes,
            self.reactant_complexes,
            self.reversible_reactions,
            self.irreversible_reactions,
            self.reactions,
            self.linkage_classes,
            self.strong_linkage_classes,
            self.terminal_strong_linkage_classes,
            self.rank,
            self.reactant_rank,
            self.deficiency,
            self.reactant_deficiency,
        ]
    }

    pub fn from_array(v: [usize; 13]) -> Self {
        Self {
            species: v[0],
            complexes: v[1],
            reactant_complexes: v[2],
            reversible_reactions: v[3],
            irreversible_reactions: v[4],
            reactions: v[5],
            linkage_classes: v[6],
            strong_linkage_classes: v[7],
            terminal_strong_linkage_classes: v[8],
            rank: v[9],
            reactant_rank: v[10],
            deficiency: v[11],
            reactant_deficiency: v[12],
        }
    }
}

/// Complex-index partitions of the reaction graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkagePartitions {
    /// Complex list the indices refer to (first-appearance order).
    pub complexes: Vec<Complex>,
    pub linkage_classes: Vec<Vec<usize>>,
    pub strong_classes: Vec<Vec<usize>>,
    pub terminal_classes: Vec<Vec<usize>>,
}

impl LinkagePartitions {
    pub fn is_terminal(&self, complex: usize) -> bool {
        self.terminal_classes.iter().any(|c| c.contains(&complex))
    }
}

fn canonical(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    classes
}

pub fn linkage_partitions(net: &Network) -> LinkagePartitions {
    let complexes = net.complexes();
    let index: HashMap<&Complex, usize> =
        complexes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(complexes.len(), net.num_reactions());
    let nodes: Vec<NodeIndex> = (0..complexes.len()).map(|_| graph.add_node(())).collect();
    let mut uf = UnionFind::new(complexes.len());
    for r in net.reactions() {
        let (a, b) = (index[&r.reactant], index[&r.product]);
        graph.add_edge(nodes[a], nodes[b], ());
        uf.union(a, b);
    }

    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..complexes.len() {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let linkage_classes = canonical(groups.into_values().collect());

    let strong_classes = canonical(
        tarjan_scc(&graph)
            .into_iter()
            .map(|c| c.into_iter().map(NodeIndex::index).collect())
            .collect(),
    );
    let terminal_classes = strong_classes
        .iter()
        .filter(|class| {
            let members: HashSet<usize> = class.iter().copied().collect();
            class.iter().all(|&i| {
                graph
                    .neighbors(nodes[i])
                    .all(|nb| members.contains(&nb.index()))
            })
        })
        .cloned()
        .collect();

    LinkagePartitions {
        complexes,
        linkage_classes,
        strong_classes,
        terminal_classes,
    }
}

/// Number of unordered reversible pairs.
pub fn reversible_pairs(net: &Network) -> usize {
    let keys: HashSet<(Complex, Complex)> = net.reactions().iter().map(|r| r.key()).collect();
    net.reactions()
        .iter()
        .filter(|r| keys.contains(&(r.product.clone(), r.reactant.clone())))
        .count()
        / 2
}

pub fn network_numbers(net: &Network) -> NetworkNumbers {
    let parts = linkage_partitions(net);
    let m = net.num_species();
    let n = parts.complexes.len();
    let n_r = net
        .reactions()
        .iter()
        .map(|r| &r.reactant)
        .collect::<HashSet<_>>()
        .len();
    let r = net.num_reactions();
    let r_rev = reversible_pairs(net);
    let l = parts.linkage_classes.len();
    let s = rank(&stoichiometric_matrix(net));
    let q = rank(&reactant_matrix(net));
    NetworkNumbers {
        species: m,
        complexes: n,
        reactant_complexes: n_r,
        reversible_reactions: r_rev,
        irreversible_reactions: r - 2 * r_rev,
        reactions: r,
        linkage_classes: l,
        strong_linkage_classes: parts.strong_classes.len(),
        terminal_strong_linkage_classes: parts.terminal_classes.len(),
        rank: s,
        reactant_rank: q,
        deficiency: n - l - s,
        reactant_deficiency: n_r - q,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralFlags {
    pub branching: bool,
    pub closed: bool,
    pub cycle_terminal: bool,
    pub high_reactant_diversity: bool,
    pub maximally_closed: bool,
    pub point_terminal: bool,
    pub t_minimal: bool,
    pub weakly_reversible: bool,
}

impl StructuralFlags {
    pub const ROWS: [(&'static str, &'static str); 8] = [
        ("Branching", "n_r < r"),
        ("Closed", "s < m"),
        ("Cycle terminal", "n = n_r"),
        ("High reactant diversity", "n_r > s"),
        ("Maximally closed", "s = m - 1"),
        ("Point terminal", "n - n_r = t"),
        ("t-minimal", "t = l"),
        ("Weakly reversible", "sl = l"),
    ];

    pub fn from_numbers(x: &NetworkNumbers) -> Self {
        Self {
            branching: x.reactant_complexes < x.reactions,
            closed: x.rank < x.species,
            cycle_terminal: x.complexes == x.reactant_complexes,
            high_reactant_diversity: x.reactant_complexes > x.rank,
            maximally_closed: x.rank + 1 == x.species,
            point_terminal: x.complexes - x.reactant_complexes == x.terminal_strong_linkage_classes,
            t_minimal: x.terminal_strong_linkage_classes == x.linkage_classes,
            weakly_reversible: x.strong_linkage_classes == x.linkage_classes,
        }
    }

    /// Values in the order of [`Self::ROWS`].
    pub fn as_array(&self) -> [bool; 8] {
        [
            self.branching,
            self.closed,
            self.cycle_terminal,
            self.high_reactant_diversity,
            self.maximally_closed,
            self.point_terminal,
            self.t_minimal,
            self.weakly_reversible,
        ]
    }
}

pub fn structural_flags(net: &Network) -> StructuralFlags {
    StructuralFlags::from_numbers(&network_numbers(net))
}

/// Verdict of the t-minimality criterion for kinetic = stoichiometric
/// subspace. `Unknown` because the criterion is only sufficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KineticSubspace {
    Yes,
    Unknown,
}

pub fn kinetic_subspace_coincides(net: &Network) -> KineticSubspace {
    let x = network_numbers(net);
    if x.terminal_strong_linkage_classes == x.linkage_classes {
        KineticSubspace::Yes
    } else {
        KineticSubspace::Unknown
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeficiencyZeroReport {
    /// Deficiency zero and weakly reversible.
    pub applies: bool,
    /// Every reaction has its reverse.
    pub reversible: bool,
    pub weakly_reversible: bool,
    pub deficiency: usize,
}

pub fn is_reversible(net: &Network) -> bool {
    2 * reversible_pairs(net) == net.num_reactions()
}

pub fn deficiency_zero_report(net: &Network) -> DeficiencyZeroReport {
    let x = network_numbers(net);
    let weakly_reversible = x.strong_linkage_classes == x.linkage_classes;
    DeficiencyZeroReport {
        applies: x.deficiency == 0 && weakly_reversible,
        reversible: is_reversible(net),
        weakly_reversible,
        deficiency: x.deficiency,
    }
}
