//! Decompositions of a network into reaction blocks and the finest
//! independent decomposition.

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::network::{stoichiometric_matrix, Network};
use crate::ratlin::{rank, rref, RationalMatrix};
use crate::structure::{linkage_partitions, network_numbers, NetworkNumbers};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    parent: Network,
    blocks: Vec<Vec<usize>>,
}

impl Decomposition {
    /// Checks that `blocks` partitions the parent's reactions and orders them
    /// canonically.
    pub fn new(parent: Network, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let r = parent.num_reactions();
        let mut seen = vec![false; r];
        for block in blocks.iter_mut() {
            if block.is_empty() {
                return Err(Error::NotAPartition);
            }
            block.sort_unstable();
            for &j in block.iter() {
                if j >= r {
                    return Err(Error::IndexOutOfRange { index: j, len: r });
                }
                if std::mem::replace(&mut seen[j], true) {
                    return Err(Error::NotAPartition);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NotAPartition);
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { parent, blocks })
    }

    pub fn trivial(parent: Network) -> Self {
        let all = (0..parent.num_reactions()).collect();
        Self {
            parent,
            blocks: vec![all],
        }
    }

    pub fn parent(&self) -> &Network {
        &self.parent
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_network(&self, i: usize) -> Network {
        self.parent
            .subnetwork(&self.blocks[i])
            .expect("blocks are valid non-empty index sets")
    }

    pub fn block_labels(&self, i: usize) -> Vec<String> {
        self.blocks[i]
            .iter()
            .map(|&j| self.parent.label(j))
            .collect()
    }

    /// Block index containing reaction `j`.
    pub fn block_of(&self, j: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&j))
    }

    /// True when every block of `self` lies inside a single block of `other`.
    pub fn refines(&self, other: &Decomposition) -> bool {
        self.blocks.iter().all(|b| {
            let target = other.block_of(b[0]);
            b.iter().all(|&j| other.block_of(j) == target)
        })
    }
}

fn block_rank(n: &RationalMatrix, block: &[usize]) -> usize {
    rank(&n.select_columns(block))
}

pub fn is_independent(d: &Decomposition) -> bool {
    let n = stoichiometric_matrix(&d.parent);
    let total: usize = d.blocks.iter().map(|b| block_rank(&n, b)).sum();
    total == rank(&n)
}

pub fn is_incidence_independent(d: &Decomposition) -> bool {
    let x = network_numbers(&d.parent);
    let lhs = x.complexes - x.linkage_classes;
    let rhs: usize = (0..d.len())
        .map(|i| {
            let y = network_numbers(&d.block_network(i));
            y.complexes - y.linkage_classes
        })
        .sum();
    lhs == rhs
}

/// Finest independent decomposition.
pub fn fid(net: &Network) -> Decomposition {
    let n = stoichiometric_matrix(net);
    let r = net.num_reactions();
    // RREF pivots are the greedy basis in reaction order; a non-pivot column
    // of the reduced matrix holds that reaction's coordinates in the basis.
    let (reduced, pivots) = rref(&n);
    let mut uf = UnionFind::<usize>::new(r);
    let is_pivot: Vec<bool> = (0..r).map(|j| pivots.contains(&j)).collect();
    for j in (0..r).filter(|&j| !is_pivot[j]) {
        for (row, &p) in pivots.iter().enumerate() {
            if !reduced.get(row, j).is_zero() {
                uf.union(j, p);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_block: Vec<Option<usize>> = vec![None; r];
    for j in 0..r {
        let root = uf.find(j);
        match root_block[root] {
            Some(b) => blocks[b].push(j),
            None => {
                root_block[root] = Some(blocks.len());
                blocks.push(vec![j]);
            }
        }
    }
    let d = Decomposition::new(net.clone(), blocks).expect("components partition the reactions");
    debug_assert!(is_independent(&d));
    d
}

/// Reactions grouped by the linkage class of their reactant complex.
pub fn linkage_class_decomposition(net: &Network) -> Decomposition {
    let parts = linkage_partitions(net);
    let complexes = &parts.complexes;
    let mut blocks = vec![Vec::new(); parts.linkage_classes.len()];
    for (j, reaction) in net.reactions().iter().enumerate() {
        let c = complexes
            .iter()
            .position(|c| *c == reaction.reactant)
            .unwrap();
        let class = parts
            .linkage_classes
            .iter()
            .position(|lc| lc.contains(&c))
            .unwrap();
        blocks[class].push(j);
    }
    Decomposition::new(net.clone(), blocks).expect("linkage classes partition the reactions")
}

/// Parent numbers followed by one column per block.
pub fn decomposition_numbers(d: &Decomposition) -> Vec<NetworkNumbers> {
    std::iter::once(network_numbers(&d.parent))
        .chain((0..d.len()).map(|i| network_numbers(&d.block_network(i))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::network::Reaction;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn labels(d: &Decomposition) -> Vec<Vec<String>> {
        (0..d.len()).map(|i| d.block_labels(i)).collect()
    }

    fn rs(names: &[u32]) -> Vec<String> {
        names.iter().map(|n| format!("R{n}")).collect()
    }

    fn range(a: u32, b: u32) -> Vec<u32> {
        (a..=b).collect()
    }

    #[test]
    fn schmitz_fid() {
        let d = fid(&fixtures::schmitz());
        let mut first = range(1, 7);
        first.extend(range(10, 13));
        assert_eq!(
            labels(&d),
            vec![rs(&first), rs(&[8, 9]), rs(&[14, 15]), rs(&[16, 17])]
        );
        assert!(is_independent(&d));
    }

    #[test]
    fn fal_fid() {
        let d = fid(&fixtures::fal());
        assert_eq!(
            labels(&d),
            vec![
                rs(&[1, 4, 5, 12, 38, 45, 46]),
                rs(&[14, 15]),
                rs(&[18, 19]),
                rs(&[43, 44]),
                rs(&[47, 48]),
                rs(&[49, 50]),
                rs(&[51, 52]),
                rs(&range(53, 56)),
            ]
        );
    }

    #[test]
    fn maclean_fid() {
        let d = fid(&fixtures::maclean());
        let mut first = range(1, 7);
        first.extend(range(36, 39));
        assert_eq!(
            labels(&d),
            vec![
                rs(&first),
                rs(&[8, 9]),
                rs(&[18, 19]),
                rs(&[20, 21]),
                rs(&[22, 23]),
                rs(&range(24, 29)),
                rs(&range(30, 35)),
            ]
        );
    }

    fn table(d: &Decomposition) -> Vec<[usize; 13]> {
        decomposition_numbers(d)
            .iter()
            .map(|x| x.as_array())
            .collect()
    }

    fn transpose(rows: &[&[usize]]) -> Vec<[usize; 13]> {
        (0..rows[0].len())
            .map(|c| std::array::from_fn(|r| rows[r][c]))
            .collect()
    }

    #[test]
    fn table_nine() {
        let expected = transpose(&[
            &[15, 5, 2, 2, 3, 1, 3, 3, 4],
            &[21, 7, 2, 2, 2, 2, 2, 2, 5],
            &[19, 6, 2, 2, 2, 2, 2, 2, 4],
            &[9, 2, 1, 1, 1, 1, 1, 1, 1],
            &[5, 3, 0, 0, 0, 0, 0, 0, 2],
            &[23, 7, 2, 2, 2, 2, 2, 2, 4],
            &[7, 2, 1, 1, 1, 1, 1, 1, 2],
            &[12, 5, 1, 1, 1, 1, 1, 1, 4],
            &[7, 2, 1, 1, 1, 1, 1, 1, 2],
            &[12, 4, 1, 1, 1, 1, 1, 1, 2],
            &[15, 5, 2, 2, 2, 1, 2, 2, 4],
            &[2, 1, 0, 0, 0, 0, 0, 0, 1],
            &[4, 1, 0, 0, 0, 1, 0, 0, 0],
        ]);
        assert_eq!(table(&fid(&fixtures::fal())), expected);
    }

    #[test]
    fn table_ten() {
        let expected = transpose(&[
            &[19, 6, 3, 2, 2, 2, 6, 6],
            &[28, 9, 2, 2, 2, 2, 6, 6],
            &[22, 7, 2, 2, 2, 2, 4, 4],
            // M1 counts R1/R38 (0 -> A4, A4 -> 0) as a pair: (4, 3), not (3, 5)
            &[12, 4, 1, 1, 1, 1, 2, 2],
            &[7, 3, 0, 0, 0, 0, 2, 2],
            &[31, 11, 2, 2, 2, 2, 6, 6],
            &[10, 3, 1, 1, 1, 1, 2, 2],
            &[16, 5, 1, 1, 1, 1, 4, 4],
            &[10, 3, 1, 1, 1, 1, 2, 2],
            &[14, 4, 1, 1, 1, 1, 3, 3],
            &[19, 6, 2, 2, 2, 2, 4, 4],
            &[4, 2, 0, 0, 0, 0, 1, 1],
            &[3, 1, 0, 0, 0, 0, 0, 0],
        ]);
        assert_eq!(table(&fid(&fixtures::maclean())), expected);
    }

    #[test]
    fn table_eleven() {
        let expected = transpose(&[
            &[11, 8, 3, 2, 2],
            &[16, 11, 2, 2, 2],
            &[14, 9, 2, 2, 2],
            &[6, 3, 1, 1, 1],
            &[5, 5, 0, 0, 0],
            &[17, 11, 2, 2, 2],
            &[5, 3, 1, 1, 1],
            &[10, 8, 1, 1, 1],
            &[5, 3, 1, 1, 1],
            &[9, 6, 1, 1, 1],
            &[11, 8, 2, 2, 2],
            &[2, 2, 0, 0, 0],
            &[3, 1, 0, 0, 0],
        ]);
        assert_eq!(table(&fid(&fixtures::schmitz())), expected);
    }

    #[test]
    fn trivial_and_linkage_decompositions() {
        for name in fixtures::NAMES {
            let net = fixtures::load(name).unwrap();
            let t = Decomposition::trivial(net.clone());
            assert!(is_independent(&t) && is_incidence_independent(&t));
            assert!(is_incidence_independent(&linkage_class_decomposition(&net)));
        }
    }

    #[test]
    fn maclean_fid_incidence() {
        // n - l: parent 18; blocks 6+1+1+1+1+4+4 = 18
        assert!(is_incidence_independent(&fid(&fixtures::maclean())));
    }

    #[test]
    fn fm_split_is_dependent() {
        let fal = fixtures::fal();
        let f = fid(&fal);
        let mut union: Vec<usize> = f.blocks()[0].clone();
        union.extend(&f.blocks()[2]);
        let sub = fal.subnetwork(&union).unwrap();
        let fm: Vec<usize> = ["R1", "R4", "R5", "R18", "R19", "R38"]
            .iter()
            .map(|l| sub.find_label(l).unwrap())
            .collect();
        let rest: Vec<usize> = (0..sub.num_reactions())
            .filter(|j| !fm.contains(j))
            .collect();
        let d = Decomposition::new(sub, vec![fm, rest]).unwrap();
        assert!(!is_independent(&d));
    }

    #[test]
    fn invalid_partitions() {
        let net = fixtures::schmitz();
        assert_eq!(
            Decomposition::new(net.clone(), vec![vec![0, 1]]),
            Err(Error::NotAPartition)
        );
        let mut dup = vec![(0..17).collect::<Vec<_>>()];
        dup.push(vec![3]);
        assert_eq!(
            Decomposition::new(net.clone(), dup),
            Err(Error::NotAPartition)
        );
        let all: Vec<usize> = (0..17).collect();
        assert_eq!(
            Decomposition::new(net.clone(), vec![all, vec![]]),
            Err(Error::NotAPartition)
        );
    }

    // Exhaustive oracle for small networks.
    fn set_partitions(n: usize) -> Vec<Vec<usize>> {
        // restricted growth strings
        let mut out = Vec::new();
        let mut a = vec![0usize; n];
        fn rec(i: usize, max: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == a.len() {
                out.push(a.clone());
                return;
            }
            for v in 0..=max + 1 {
                a[i] = v;
                rec(i + 1, max.max(v), a, out);
            }
        }
        if n > 0 {
            a[0] = 0;
            rec(1, 0, &mut a, &mut out);
        }
        out
    }

    fn blocks_from(labels: &[usize]) -> Vec<Vec<usize>> {
        let k = labels.iter().max().unwrap() + 1;
        let mut b = vec![Vec::new(); k];
        for (j, &l) in labels.iter().enumerate() {
            b[l].push(j);
        }
        b
    }

    fn small_network() -> impl Strategy<Value = Network> {
        let complex = proptest::collection::vec(0u32..3, 3);
        proptest::collection::vec((complex.clone(), complex), 1..=5).prop_filter_map(
            "valid network",
            |pairs| {
                let names = ["A", "B", "C"];
                let mk = |v: &Vec<u32>| {
                    crate::network::Complex::from_terms(
                        v.iter()
                            .enumerate()
                            .filter(|(_, &c)| c > 0)
                            .map(|(i, &c)| (crate::network::sp(names[i]), c)),
                    )
                };
                let mut reactions = Vec::new();
                for (a, b) in &pairs {
                    let r = Reaction::new(mk(a), mk(b)).ok()?;
                    if reactions.iter().any(|x: &Reaction| x.same_as(&r)) {
                        return None;
                    }
                    reactions.push(r);
                }
                Network::new(reactions).ok()
            },
        )
    }

    fn reaction_sets(d: &Decomposition) -> BTreeSet<BTreeSet<String>> {
        d.blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&j| d.parent().reactions()[j].to_string())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn set_partition_counts() {
        let bell: Vec<usize> = (1..=5).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 2, 5, 15, 52]);
    }

    proptest! {
        #[test]
        fn independent_decompositions_coarsen_fid(net in small_network()) {
            let f = fid(&net);
            prop_assert!(is_independent(&f));
            for labels in set_partitions(net.num_reactions()) {
                let d = Decomposition::new(net.clone(), blocks_from(&labels)).unwrap();
                if is_independent(&d) {
                    prop_assert!(f.refines(&d));
                }
            }
        }

        #[test]
        fn fid_permutation_invariant(seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for net in [fixtures::schmitz(), fixtures::fal(), fixtures::maclean()] {
                let mut reactions = net.reactions().to_vec();
                reactions.shuffle(&mut rng);
                let shuffled = Network::new(reactions).unwrap();
                prop_assert_eq!(reaction_sets(&fid(&net)), reaction_sets(&fid(&shuffled)));
                let f = fid(&shuffled);
                let total: usize = (0..f.len()).map(|i| network_numbers(&f.block_network(i)).rank).sum();
                prop_assert_eq!(total, network_numbers(&net).rank);
            }
        }
    }
}
