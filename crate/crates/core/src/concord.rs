//! Concordance decision with witnesses, positive dependence,
//! conservativity, and maximal concordant containers.
//!
//! The search assigns signs to the species that occur in some reactant
//! complex. Given those signs, each reaction's admissible sign set for
//! `alpha` is fixed and never empty:
//!
//! | reactant support under `sigma` | admissible `alpha_r` |
//! |--------------------------------|----------------------|
//! | empty, or all zero             | `0`                  |
//! | `+` and `0` only               | `> 0`                |
//! | `-` and `0` only               | `< 0`                |
//! | both `+` and `-`               | any                  |
//!
//! so the existence of `alpha` is a single LP. Species outside every
//! reactant complex only matter through `sigma != 0` and `sigma in S`.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{reactant_matrix, stoichiometric_matrix, Network, Reaction};
use crate::ratlin::{
    lp_feasible, nullspace_basis, rank, rref, LinearSystem, Rational, RationalMatrix,
};

pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// `alpha` in Ker(N), nonzero `sigma` in Im(N), satisfying the sign
/// conditions of the concordance definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignWitness {
    pub alpha: Vec<Rational>,
    pub sigma: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Concordant,
    Discordant(SignWitness),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcordanceVerdict {
    pub status: Verdict,
    pub nodes: u64,
}

impl ConcordanceVerdict {
    pub fn is_concordant(&self) -> bool {
        matches!(self.status, Verdict::Concordant)
    }

    pub fn is_discordant(&self) -> bool {
        matches!(self.status, Verdict::Discordant(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.status, Verdict::Unknown)
    }

    pub fn witness(&self) -> Option<&SignWitness> {
        match &self.status {
            Verdict::Discordant(w) => Some(w),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.status {
            Verdict::Concordant => "concordant",
            Verdict::Discordant(_) => "discordant",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Admissible sign set of one `alpha_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Allowed {
    Zero,
    Positive,
    Negative,
    Any,
}

fn allowed(signs: impl Iterator<Item = i8>) -> Allowed {
    let (mut pos, mut neg) = (false, false);
    for s in signs {
        pos |= s > 0;
        neg |= s < 0;
    }
    match (pos, neg) {
        (false, false) => Allowed::Zero,
        (true, false) => Allowed::Positive,
        (false, true) => Allowed::Negative,
        (true, true) => Allowed::Any,
    }
}

/// Whether `x` already satisfies the homogeneous constraint for sign `s`
/// after scaling by a factor >= 1; returns the factor needed.
fn scale_for(x: &Rational, s: i8) -> Option<Rational> {
    match s {
        0 => x.is_zero().then(Rational::one),
        1 if x.is_positive() => Some(if *x >= Rational::one() {
            Rational::one()
        } else {
            x.recip()
        }),
        -1 if x.is_negative() => {
            let a = x.abs();
            Some(if a >= Rational::one() {
                Rational::one()
            } else {
                a.recip()
            })
        }
        _ => None,
    }
}

fn scaled(v: &[Rational], c: &Rational) -> Vec<Rational> {
    if c.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x * c).collect()
    }
}

struct Search {
    m: usize,
    r: usize,
    /// Basis of Im(N) as columns (m x s).
    basis: RationalMatrix,
    /// Independent rows spanning the row space of N.
    kernel_rows: Vec<Vec<Rational>>,
    /// Reactant-support species indices per reaction.
    support: Vec<Vec<usize>>,
    /// Reactant species in search order.
    order: Vec<usize>,
    /// Reactions whose support is complete after `d` assignments.
    completes_at: Vec<Vec<usize>>,
    alpha_cache: HashMap<Vec<Allowed>, Option<Vec<Rational>>>,
    nodes: u64,
    budget: u64,
}

enum Outcome {
    Found(SignWitness),
    Exhausted,
    OutOfBudget,
}

impl Search {
    fn new(net: &Network, budget: u64) -> Self {
        let n = stoichiometric_matrix(net);
        let (m, r) = (n.rows(), n.cols());
        let (reduced, pivots) = rref(&n);
        let basis = n.select_columns(&pivots);
        let kernel_rows: Vec<Vec<Rational>> =
            (0..pivots.len()).map(|i| reduced.row(i).to_vec()).collect();

        let y = reactant_matrix(net);
        let support: Vec<Vec<usize>> = (0..r)
            .map(|j| (0..m).filter(|&i| !y.get(i, j).is_zero()).collect())
            .collect();
        let mut freq = vec![0usize; m];
        for s in &support {
            for &i in s {
                freq[i] += 1;
            }
        }
        let mut order: Vec<usize> = (0..m).filter(|&i| freq[i] > 0).collect();
        order.sort_by(|a, b| freq[*b].cmp(&freq[*a]).then(a.cmp(b)));
        let mut pos = vec![usize::MAX; m];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let mut completes_at = vec![Vec::new(); order.len() + 1];
        for (j, s) in support.iter().enumerate() {
            let d = s.iter().map(|&i| pos[i] + 1).max().unwrap_or(0);
            completes_at[d].push(j);
        }
        Self {
            m,
            r,
            basis,
            kernel_rows,
            support,
            order,
            completes_at,
            alpha_cache: HashMap::new(),
            nodes: 0,
            budget,
        }
    }

    /// `gamma` with `sigma = B gamma` honouring the assigned signs.
    fn sigma_lp(&self, signs: &[Option<i8>]) -> Option<Vec<Rational>> {
        let s = self.basis.cols();
        let nonzero: Vec<usize> = (0..self.m)
            .filter(|&i| matches!(signs[i], Some(1 | -1)))
            .collect();
        let mut sys = LinearSystem::new(s + nonzero.len());
        for (i, sign) in signs.iter().enumerate().take(self.m) {
            let Some(sign) = *sign else { continue };
            let mut row: Vec<Rational> = self.basis.row(i).to_vec();
            row.resize(s + nonzero.len(), Rational::zero());
            if sign != 0 {
                let t = s + nonzero.iter().position(|&k| k == i).unwrap();
                row[t] = -Rational::one();
                if sign > 0 {
                    sys.set_lower(t, Rational::one());
                } else {
                    sys.set_upper(t, -Rational::one());
                }
            }
            sys.add_equality(row, Rational::zero());
        }
        lp_feasible(&sys)
            .point()
            .map(|p| self.basis.mul_vec(&p[..s]))
    }

    fn alpha_lp(&mut self, constraints: &[Allowed]) -> Option<Vec<Rational>> {
        if let Some(hit) = self.alpha_cache.get(constraints) {
            return hit.clone();
        }
        let mut sys = LinearSystem::new(self.r);
        for row in &self.kernel_rows {
            sys.add_equality(row.clone(), Rational::zero());
        }
        for (j, c) in constraints.iter().enumerate() {
            match c {
                Allowed::Zero => {
                    sys.fix(j, Rational::zero());
                }
                Allowed::Positive => {
                    sys.set_lower(j, Rational::one());
                }
                Allowed::Negative => {
                    sys.set_upper(j, -Rational::one());
                }
                Allowed::Any => {}
            }
        }
        let out = lp_feasible(&sys).point();
        self.alpha_cache.insert(constraints.to_vec(), out.clone());
        out
    }

    fn run(&mut self) -> Outcome {
        // All reactant species zero: alpha = 0 works, so a witness exists iff
        // S has a nonzero vector vanishing on the reactant species.
        if let Some(sigma) = self.zero_pattern_sigma() {
            return Outcome::Found(SignWitness {
                alpha: vec![Rational::zero(); self.r],
                sigma,
            });
        }
        let mut signs = vec![None; self.m];
        let mut constraints = vec![Allowed::Any; self.r];
        for &j in &self.completes_at[0] {
            constraints[j] = Allowed::Zero;
        }
        let sigma0 = vec![Rational::zero(); self.m];
        let Some(alpha0) = self.alpha_lp(&constraints) else {
            return Outcome::Exhausted;
        };
        self.dfs(0, false, &mut signs, &mut constraints, &sigma0, &alpha0)
    }

    fn zero_pattern_sigma(&self) -> Option<Vec<Rational>> {
        let rows: Vec<Vec<Rational>> = self
            .order
            .iter()
            .map(|&i| self.basis.row(i).to_vec())
            .collect();
        if rows.is_empty() {
            return (self.basis.cols() > 0).then(|| self.basis.column(0));
        }
        let sub = RationalMatrix::from_rows(rows);
        nullspace_basis(&sub)
            .into_iter()
            .next()
            .map(|g| self.basis.mul_vec(&g))
    }

    fn dfs(
        &mut self,
        depth: usize,
        any_nonzero: bool,
        signs: &mut Vec<Option<i8>>,
        constraints: &mut Vec<Allowed>,
        sigma: &[Rational],
        alpha: &[Rational],
    ) -> Outcome {
        if depth == self.order.len() {
            return if any_nonzero {
                Outcome::Found(SignWitness {
                    alpha: alpha.to_vec(),
                    sigma: sigma.to_vec(),
                })
            } else {
                Outcome::Exhausted
            };
        }
        let species = self.order[depth];
        let choices: &[i8] = if any_nonzero { &[1, -1, 0] } else { &[1, 0] };
        for &sign in choices {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Outcome::OutOfBudget;
            }
            signs[species] = Some(sign);
            let next_sigma = match scale_for(&sigma[species], sign) {
                Some(c) => Some(scaled(sigma, &c)),
                None => self.sigma_lp(signs),
            };
            let Some(next_sigma) = next_sigma else {
                continue;
            };

            let completed = self.completes_at[depth + 1].clone();
            let saved: Vec<Allowed> = completed.iter().map(|&j| constraints[j]).collect();
            for &j in &completed {
                constraints[j] = allowed(self.support[j].iter().map(|&i| signs[i].unwrap()));
            }
            let next_alpha = self.alpha_for(&completed, constraints, alpha);
            let outcome = match next_alpha {
                Some(next_alpha) => self.dfs(
                    depth + 1,
                    any_nonzero || sign != 0,
                    signs,
                    constraints,
                    &next_sigma,
                    &next_alpha,
                ),
                None => Outcome::Exhausted,
            };
            for (&j, c) in completed.iter().zip(saved) {
                constraints[j] = c;
            }
            match outcome {
                Outcome::Exhausted => {}
                done => {
                    signs[species] = None;
                    return done;
                }
            }
        }
        signs[species] = None;
        Outcome::Exhausted
    }

    fn alpha_for(
        &mut self,
        completed: &[usize],
        constraints: &[Allowed],
        alpha: &[Rational],
    ) -> Option<Vec<Rational>> {
        let mut factor = Rational::one();
        for &j in completed {
            let need = match constraints[j] {
                Allowed::Zero => Some(0),
                Allowed::Positive => Some(1),
                Allowed::Negative => Some(-1),
                Allowed::Any => None,
            };
            if let Some(s) = need {
                match scale_for(&alpha[j], s) {
                    Some(c) => factor = factor.max(c),
                    None => return self.alpha_lp(constraints),
                }
            }
        }
        Some(scaled(alpha, &factor))
    }
}

/// Complete sign-pattern search; `Unknown` once `budget` nodes are spent.
pub fn check_concordance(net: &Network, budget: u64) -> ConcordanceVerdict {
    let mut search = Search::new(net, budget);
    let outcome = search.run();
    let status = match outcome {
        Outcome::Found(w) => {
            debug_assert_eq!(verify_witness(net, &w), Ok(true));
            Verdict::Discordant(w)
        }
        Outcome::Exhausted => Verdict::Concordant,
        Outcome::OutOfBudget => Verdict::Unknown,
    };
    ConcordanceVerdict {
        status,
        nodes: search.nodes,
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Checks a witness directly against the definition.
pub fn verify_witness(net: &Network, w: &SignWitness) -> Result<bool> {
    let n = stoichiometric_matrix(net);
    if w.alpha.len() != n.cols() {
        return Err(Error::DimensionMismatch {
            expected: n.cols(),
            actual: w.alpha.len(),
        });
    }
    if w.sigma.len() != n.rows() {
        return Err(Error::DimensionMismatch {
            expected: n.rows(),
            actual: w.sigma.len(),
        });
    }
    if n.mul_vec(&w.alpha).iter().any(|x| !x.is_zero()) {
        return Ok(false);
    }
    if w.sigma.iter().all(Zero::is_zero) {
        return Ok(false);
    }
    let mut cols: Vec<Vec<Rational>> = (0..n.cols()).map(|j| n.column(j)).collect();
    let base = rank(&n);
    cols.push(w.sigma.clone());
    if rank(&RationalMatrix::from_columns(n.rows(), &cols)) != base {
        return Ok(false);
    }
    for (j, reaction) in net.reactions().iter().enumerate() {
        let signs: Vec<i8> = reaction
            .reactant
            .support()
            .map(|s| sign(&w.sigma[net.species_index(s).unwrap()]))
            .collect();
        let a = sign(&w.alpha[j]);
        let ok = if a != 0 {
            signs.contains(&a)
        } else {
            signs.iter().all(|&s| s == 0) || (signs.contains(&1) && signs.contains(&-1))
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `N alpha = 0` with every `alpha_r >= 1`; the certificate when feasible.
pub fn positive_dependence(net: &Network) -> Option<Vec<Rational>> {
    let n = stoichiometric_matrix(net);
    let mut sys = LinearSystem::new(n.cols());
    for i in 0..n.rows() {
        sys.add_equality(n.row(i).to_vec(), Rational::zero());
    }
    for j in 0..n.cols() {
        sys.set_lower(j, Rational::one());
    }
    lp_feasible(&sys).point()
}

pub fn is_positive_dependent(net: &Network) -> bool {
    positive_dependence(net).is_some()
}

/// `N^T p = 0` with every `p_i >= 1`; the certificate when feasible.
pub fn conservation_certificate(net: &Network) -> Option<Vec<Rational>> {
    let n = stoichiometric_matrix(net);
    let mut sys = LinearSystem::new(n.rows());
    for j in 0..n.cols() {
        sys.add_equality(n.column(j), Rational::zero());
    }
    for i in 0..n.rows() {
        sys.set_lower(i, Rational::one());
    }
    lp_feasible(&sys).point()
}

pub fn is_conservative(net: &Network) -> bool {
    conservation_certificate(net).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Maximality {
    /// Every excluded reaction makes the container discordant.
    Verified,
    /// Some check returned Unknown.
    Undecided,
    /// Some excluded reaction can be added without losing concordance.
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M3crReport {
    pub container: Network,
    /// Parent indices of the container reactions.
    pub container_indices: Vec<usize>,
    pub discordance_set: Vec<Reaction>,
    pub maximality: Maximality,
    /// Greedy growth in reverse order gave a different container.
    pub order_dependent: bool,
    /// Container found by the reverse-order pass.
    pub reverse_container: Vec<usize>,
    pub grouping: Grouping,
    pub undecided_checks: usize,
}

impl M3crReport {
    pub fn maximality_verified(&self) -> bool {
        self.maximality == Maximality::Verified
    }
}

/// What the greedy construction adds in one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    /// Single reactions.
    Reactions,
    /// A reversible pair outside the mandatory set is added or rejected as
    /// one unit.
    ReversiblePairs,
}

fn units(net: &Network, mandatory: &[usize], grouping: Grouping) -> Vec<Vec<usize>> {
    let r = net.num_reactions();
    let mut taken = vec![false; r];
    for &j in mandatory {
        taken[j] = true;
    }
    let mut out = Vec::new();
    for j in 0..r {
        if taken[j] {
            continue;
        }
        taken[j] = true;
        let mut unit = vec![j];
        if grouping == Grouping::ReversiblePairs {
            if let Some(k) = net.position(&net.reactions()[j].reversed()) {
                if !taken[k] {
                    taken[k] = true;
                    unit.push(k);
                }
            }
        }
        out.push(unit);
    }
    out
}

fn with_unit(current: &[usize], unit: &[usize]) -> Vec<usize> {
    let mut trial: Vec<usize> = current.iter().chain(unit).copied().collect();
    trial.sort_unstable();
    trial
}

/// Greedy growth over `units` in the given order, repeated until no excluded
/// unit can be added. Concordance is not inherited by subnetworks, so a
/// unit rejected early can become admissible once others are present.
fn greedy(
    net: &Network,
    mandatory: &[usize],
    units: &[Vec<usize>],
    budget: u64,
    undecided: &mut usize,
) -> Vec<usize> {
    let mut current: Vec<usize> = mandatory.to_vec();
    current.sort_unstable();
    let mut pending: Vec<&Vec<usize>> = units.iter().collect();
    loop {
        let mut rejected = Vec::new();
        let before = pending.len();
        for unit in pending {
            let trial = with_unit(&current, unit);
            let v = check_concordance(&net.subnetwork(&trial).expect("valid indices"), budget);
            if v.is_concordant() {
                current = trial;
            } else {
                if v.is_unknown() {
                    *undecided += 1;
                }
                rejected.push(unit);
            }
        }
        let grew = rejected.len() < before;
        pending = rejected;
        if !grew || pending.is_empty() {
            break;
        }
    }
    current
}

/// Maximal concordant container of `mandatory` inside `net`, grown one
/// reaction at a time.
pub fn m3cr(net: &Network, mandatory: &[Reaction], budget: u64) -> Result<M3crReport> {
    m3cr_grouped(net, mandatory, budget, Grouping::Reactions)
}

pub fn m3cr_grouped(
    net: &Network,
    mandatory: &[Reaction],
    budget: u64,
    grouping: Grouping,
) -> Result<M3crReport> {
    let mandatory_idx = net
        .indices_of(mandatory)
        .ok_or_else(|| Error::Invalid("mandatory reaction not in the network".into()))?;
    if mandatory_idx.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let base = check_concordance(&net.subnetwork(&mandatory_idx)?, budget);
    match base.status {
        Verdict::Discordant(_) => return Err(Error::MandatoryDiscordant),
        Verdict::Unknown => return Err(Error::MandatoryUndecided),
        Verdict::Concordant => {}
    }
    let forward = units(net, &mandatory_idx, grouping);
    let backward: Vec<Vec<usize>> = forward.iter().rev().cloned().collect();
    let mut undecided = 0;
    let container = greedy(net, &mandatory_idx, &forward, budget, &mut undecided);
    let reverse_container = greedy(net, &mandatory_idx, &backward, budget, &mut undecided);

    let mut maximality = Maximality::Verified;
    for unit in forward.iter().filter(|u| !container.contains(&u[0])) {
        let v = check_concordance(&net.subnetwork(&with_unit(&container, unit))?, budget);
        if v.is_concordant() {
            maximality = Maximality::Failed;
        } else if v.is_unknown() && maximality == Maximality::Verified {
            maximality = Maximality::Undecided;
        }
    }
    let excluded: Vec<usize> = (0..net.num_reactions())
        .filter(|j| !container.contains(j))
        .collect();
    Ok(M3crReport {
        container: net.subnetwork(&container)?,
        discordance_set: excluded
            .iter()
            .map(|&j| net.reactions()[j].clone())
            .collect(),
        order_dependent: reverse_container != container,
        container_indices: container,
        reverse_container,
        maximality,
        grouping,
        undecided_checks: undecided,
    })
}
