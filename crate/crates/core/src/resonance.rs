//! Resonant subset decompositions of a semigroup and the subalgebras and
//! reductions they carve out of an S-expanded algebra.
//!
//! Parts are numbered `0..P` in the order of the subspace decomposition's
//! labels. Brackets are antisymmetric and the semigroup is Abelian, so every
//! part tuple `(p1, ..., pn)` is handled as a sorted multiset.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::expansion::{s_expand, ExpandedAlgebra};
use crate::multialgebra::{MultiAlgebra, SubspaceSplit};
use crate::semigroup::Semigroup;

/// `G = ⊕_p V_p`: disjoint labelled parts covering every generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceDecomposition {
    labels: Vec<String>,
    parts: Vec<BTreeSet<usize>>,
    part_of: Vec<usize>,
}

impl SubspaceDecomposition {
    pub fn new(dim: usize, parts: Vec<(String, Vec<usize>)>) -> Result<Self> {
        let mut part_of = vec![usize::MAX; dim];
        let mut labels = Vec::new();
        let mut sets = Vec::new();
        for (p, (label, members)) in parts.into_iter().enumerate() {
            if labels.contains(&label) {
                return Err(Error::Decomposition(format!("duplicate part label {label:?}")));
            }
            for &g in &members {
                if g >= dim {
                    return Err(Error::Index { index: g, size: dim });
                }
                if part_of[g] != usize::MAX {
                    return Err(Error::Decomposition(format!(
                        "generator {g} appears in more than one subspace"
                    )));
                }
                part_of[g] = p;
            }
            labels.push(label);
            sets.push(members.into_iter().collect());
        }
        if let Some(g) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Decomposition(format!("generator {g} is in no subspace")));
        }
        Ok(Self { labels, parts: sets, part_of })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, p: usize) -> &BTreeSet<usize> {
        &self.parts[p]
    }

    pub fn part_of(&self, generator: usize) -> usize {
        self.part_of[generator]
    }

    pub fn part_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// The sets `i_(p1...pn)`: which parts a bracket of parts `p1..pn` can reach.
/// Missing keys mean the bracket vanishes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosureStructure {
    pub i_map: BTreeMap<Vec<usize>, BTreeSet<usize>>,
}

impl ClosureStructure {
    pub fn get(&self, parts: &[usize]) -> BTreeSet<usize> {
        let mut key = parts.to_vec();
        key.sort_unstable();
        self.i_map.get(&key).cloned().unwrap_or_default()
    }

    /// Whether every set of `minimal` is contained in the matching set here,
    /// i.e. whether this structure is a valid (possibly looser) description.
    pub fn covers(&self, minimal: &ClosureStructure) -> bool {
        minimal
            .i_map
            .iter()
            .all(|(key, targets)| self.i_map.get(key).is_some_and(|t| targets.is_subset(t)))
    }
}

/// The smallest closure structure: the parts actually hit by nonzero constants.
pub fn closure_sets(a: &MultiAlgebra, d: &SubspaceDecomposition) -> Result<ClosureStructure> {
    if d.part_of.len() != a.dim() {
        return Err(Error::Decomposition(format!(
            "decomposition covers {} generators, algebra has {}",
            d.part_of.len(),
            a.dim()
        )));
    }
    let mut cs = ClosureStructure::default();
    for (lower, upper, _) in a.tensor().entries() {
        let mut key: Vec<usize> = lower.iter().map(|&g| d.part_of(g)).collect();
        key.sort_unstable();
        cs.i_map.entry(key).or_default().insert(d.part_of(upper));
    }
    Ok(cs)
}

/// `S = ∪_p S_p`; subsets may overlap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SemigroupDecomposition {
    pub subsets: Vec<BTreeSet<usize>>,
}

impl SemigroupDecomposition {
    pub fn new(s: &Semigroup, subsets: Vec<BTreeSet<usize>>) -> Result<Self> {
        let mut covered = vec![false; s.order()];
        for set in &subsets {
            for &e in set {
                if e >= s.order() {
                    return Err(Error::Index { index: e, size: s.order() });
                }
                covered[e] = true;
            }
        }
        if let Some(e) = covered.iter().position(|c| !c) {
            return Err(Error::Decomposition(format!(
                "semigroup element {e} is in no subset"
            )));
        }
        Ok(Self { subsets })
    }
}

/// A product that escaped the subset it had to land in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductWitness {
    /// Part multiset of the bracket.
    pub parts: Vec<usize>,
    /// One element per slot, in the same order as `parts`.
    pub factors: Vec<usize>,
    pub product: usize,
    /// Part whose subset should have contained `product`.
    pub missing_from: usize,
}

impl fmt::Display for ProductWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.factors.iter().map(|e| format!("l{e}")).collect();
        write!(
            f,
            "parts {:?}: {} = element {} not in part {}",
            self.parts,
            factors.join("*"),
            self.product,
            self.missing_from
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceCheck {
    pub holds: bool,
    pub witnesses: Vec<ProductWitness>,
}

/// First tuple (one element per set) whose product is `target`.
fn find_factors(s: &Semigroup, sets: &[&BTreeSet<usize>], target: usize) -> Option<Vec<usize>> {
    fn go(
        s: &Semigroup,
        sets: &[&BTreeSet<usize>],
        acc: Option<usize>,
        chosen: &mut Vec<usize>,
        target: usize,
    ) -> bool {
        let Some((first, rest)) = sets.split_first() else {
            return acc == Some(target);
        };
        for &e in first.iter() {
            chosen.push(e);
            let next = acc.map_or(e, |a| s.mul(a, e));
            if go(s, rest, Some(next), chosen, target) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    go(s, sets, None, &mut chosen, target).then_some(chosen)
}

fn subset_condition(
    s: &Semigroup,
    parts: &[usize],
    slot_sets: &[&BTreeSet<usize>],
    targets: &BTreeSet<usize>,
    allowed: &[BTreeSet<usize>],
    out: &mut Vec<ProductWitness>,
) {
    let m = s.order();
    let masks: Vec<Vec<bool>> = slot_sets
        .iter()
        .map(|set| (0..m).map(|e| set.contains(&e)).collect())
        .collect();
    let refs: Vec<&[bool]> = masks.iter().map(Vec::as_slice).collect();
    let product = s.set_product(&refs);
    for gamma in (0..m).filter(|&g| product[g]) {
        for &r in targets {
            if !allowed[r].contains(&gamma) {
                let factors = find_factors(s, slot_sets, gamma).expect("gamma is a product");
                out.push(ProductWitness {
                    parts: parts.to_vec(),
                    factors,
                    product: gamma,
                    missing_from: r,
                });
            }
        }
    }
}

/// `S_{p1} × ... × S_{pn} ⊂ ∩_{r ∈ i_(p1...pn)} S_r` for every closure entry.
pub fn check_resonance(
    s: &Semigroup,
    sd: &SemigroupDecomposition,
    cs: &ClosureStructure,
) -> Result<ResonanceCheck> {
    check_part_count(sd.subsets.len(), cs)?;
    let mut witnesses = Vec::new();
    for (parts, targets) in &cs.i_map {
        let sets: Vec<&BTreeSet<usize>> = parts.iter().map(|&p| &sd.subsets[p]).collect();
        subset_condition(s, parts, &sets, targets, &sd.subsets, &mut witnesses);
    }
    Ok(ResonanceCheck { holds: witnesses.is_empty(), witnesses })
}

fn check_part_count(parts: usize, cs: &ClosureStructure) -> Result<()> {
    match cs.i_map.iter().flat_map(|(k, t)| k.iter().chain(t)).find(|&&p| p >= parts) {
        Some(&p) => Err(Error::Decomposition(format!(
            "closure structure mentions part {p} but only {parts} subsets were given"
        ))),
        None => Ok(()),
    }
}

fn require_nonempty(d: &SubspaceDecomposition, sd: &SemigroupDecomposition) -> Result<()> {
    if sd.subsets.len() != d.len() {
        return Err(Error::Decomposition(format!(
            "{} semigroup subsets for {} subspaces",
            sd.subsets.len(),
            d.len()
        )));
    }
    for p in 0..d.len() {
        if !d.part(p).is_empty() && sd.subsets[p].is_empty() {
            return Err(Error::Decomposition(format!(
                "subset for part {:?} is empty but its subspace is not",
                d.labels[p]
            )));
        }
    }
    Ok(())
}

/// Positions of the pairs `(A, α)` of a full expansion with `α ∈ S_{part(A)}`.
fn resonant_positions(
    e: &ExpandedAlgebra,
    d: &SubspaceDecomposition,
    sd: &SemigroupDecomposition,
) -> Vec<usize> {
    e.pairs()
        .iter()
        .enumerate()
        .filter(|(_, &(a, alpha))| sd.subsets[d.part_of(a)].contains(&alpha))
        .map(|(i, _)| i)
        .collect()
}

/// First constant with all lower indices in `keep` but its upper index outside.
pub fn closure_leak(a: &MultiAlgebra, keep: &[usize]) -> Option<(Vec<usize>, usize)> {
    let inside: BTreeSet<usize> = keep.iter().copied().collect();
    a.tensor()
        .entries()
        .find(|(lower, upper, _)| {
            lower.iter().all(|g| inside.contains(g)) && !inside.contains(upper)
        })
        .map(|(lower, upper, _)| (lower.clone(), upper))
}

/// The resonant submultialgebra `⊕_p S_p ⊗ V_p` of `S ⊗ G`.
pub fn resonant_subalgebra(
    a: &MultiAlgebra,
    s: &Semigroup,
    d: &SubspaceDecomposition,
    sd: &SemigroupDecomposition,
) -> Result<ExpandedAlgebra> {
    require_nonempty(d, sd)?;
    let cs = closure_sets(a, d)?;
    let check = check_resonance(s, sd, &cs)?;
    if let Some(w) = check.witnesses.first() {
        return Err(Error::NotResonant(w.to_string()));
    }
    let full = s_expand(a, s);
    let keep = resonant_positions(&full, d, sd);
    if let Some((lower, upper)) = closure_leak(full.algebra(), &keep) {
        return Err(Error::NotResonant(format!(
            "bracket of {lower:?} reaches generator {upper} outside the subalgebra"
        )));
    }
    full.restrict(&keep)
}

/// `S_p = Ŝ_p ∪ Š_p`: the hat elements are reduced away, the check elements kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionPartition {
    pub hat: Vec<BTreeSet<usize>>,
    pub check: Vec<BTreeSet<usize>>,
}

impl ReductionPartition {
    /// `Š_p = S_p \ Ŝ_p`; every hat element must belong to its `S_p`.
    pub fn from_hat(sd: &SemigroupDecomposition, hat: Vec<BTreeSet<usize>>) -> Result<Self> {
        if hat.len() != sd.subsets.len() {
            return Err(Error::Decomposition(format!(
                "{} hat sets for {} subsets",
                hat.len(),
                sd.subsets.len()
            )));
        }
        let mut check = Vec::with_capacity(hat.len());
        for (p, (h, sp)) in hat.iter().zip(&sd.subsets).enumerate() {
            if let Some(e) = h.difference(sp).next() {
                return Err(Error::Decomposition(format!(
                    "hat element {e} of part {p} is not in its subset"
                )));
            }
            check.push(sp.difference(h).copied().collect());
        }
        Ok(Self { hat, check })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCheck {
    pub holds: bool,
    /// Parts whose hat and check sets intersect.
    pub overlapping_parts: Vec<usize>,
    pub witnesses: Vec<ProductWitness>,
}

/// Disjointness of each `Ŝ_p`, `Š_p` and
/// `Ŝ_{p1} × Š_{p2} × ... × Š_{pn} ⊂ ∩_{r ∈ i_(p1...pn)} Ŝ_r`,
/// with the hat factor tried in every slot.
pub fn check_reduction_partition(
    s: &Semigroup,
    rp: &ReductionPartition,
    cs: &ClosureStructure,
) -> Result<PartitionCheck> {
    if rp.hat.len() != rp.check.len() {
        return Err(Error::Decomposition("hat and check lists differ in length".into()));
    }
    check_part_count(rp.hat.len(), cs)?;
    let overlapping_parts: Vec<usize> = (0..rp.hat.len())
        .filter(|&p| !rp.hat[p].is_disjoint(&rp.check[p]))
        .collect();
    let mut witnesses = Vec::new();
    for (parts, targets) in &cs.i_map {
        let mut seen_slots = BTreeSet::new();
        for slot in 0..parts.len() {
            // slots holding the same part give the same product set
            if !seen_slots.insert(parts[slot]) {
                continue;
            }
            let mut ordered = vec![parts[slot]];
            ordered.extend(parts.iter().enumerate().filter(|&(i, _)| i != slot).map(|(_, &p)| p));
            let sets: Vec<&BTreeSet<usize>> = ordered
                .iter()
                .enumerate()
                .map(|(i, &p)| if i == 0 { &rp.hat[p] } else { &rp.check[p] })
                .collect();
            subset_condition(s, &ordered, &sets, targets, &rp.hat, &mut witnesses);
        }
    }
    Ok(PartitionCheck {
        holds: overlapping_parts.is_empty() && witnesses.is_empty(),
        overlapping_parts,
        witnesses,
    })
}

/// The reduced algebra `|Ǧ_R|` of a resonant subalgebra: the check pairs,
/// after discarding constants that land on hat pairs.
pub fn reduce_resonant(
    r: &ExpandedAlgebra,
    d: &SubspaceDecomposition,
    cs: &ClosureStructure,
    rp: &ReductionPartition,
) -> Result<ExpandedAlgebra> {
    let check = check_reduction_partition(r.semigroup(), rp, cs)?;
    if let Some(&p) = check.overlapping_parts.first() {
        return Err(Error::Decomposition(format!("hat and check sets of part {p} overlap")));
    }
    if let Some(w) = check.witnesses.first() {
        return Err(Error::NotResonant(format!("reduction partition fails: {w}")));
    }
    let mut v0 = Vec::new();
    for (i, &(a, alpha)) in r.pairs().iter().enumerate() {
        let p = d.part_of(a);
        if rp.check[p].contains(&alpha) {
            v0.push(i);
        } else if !rp.hat[p].contains(&alpha) {
            return Err(Error::Decomposition(format!(
                "pair ({a}, {alpha}) is in neither the hat nor the check set of its part"
            )));
        }
    }
    let split = SubspaceSplit::from_v0(r.algebra().dim(), v0.iter().copied())?;
    r.algebra().reduced(&split)?;
    r.restrict(&v0)
}

/// The hat/check split of a resonant subalgebra's basis as a [`SubspaceSplit`]
/// with the check pairs in `v0`.
pub fn hat_check_split(
    r: &ExpandedAlgebra,
    d: &SubspaceDecomposition,
    rp: &ReductionPartition,
) -> Result<SubspaceSplit> {
    let v0 = r
        .pairs()
        .iter()
        .enumerate()
        .filter(|(_, &(a, alpha))| rp.check[d.part_of(a)].contains(&alpha))
        .map(|(i, _)| i);
    SubspaceSplit::from_v0(r.algebra().dim(), v0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Stop after this many decompositions.
    pub max_results: Option<usize>,
    /// Stop after visiting this many search nodes.
    pub max_nodes: Option<u64>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_results: None, max_nodes: Some(50_000_000) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub decompositions: Vec<SemigroupDecomposition>,
    /// False when a limit stopped the enumeration early.
    pub complete: bool,
    pub nodes: u64,
}

struct Search<'a> {
    s: &'a Semigroup,
    constraints: Vec<(&'a Vec<usize>, &'a BTreeSet<usize>)>,
    parts: usize,
    limits: SearchLimits,
    /// `row[a][b_mask]` would be large; products are folded bit by bit instead.
    masks: Vec<u64>,
    nodes: u64,
    stopped: bool,
    found: Vec<SemigroupDecomposition>,
}

impl Search<'_> {
    fn product(&self, a: u64, b: u64) -> u64 {
        let mut out = 0u64;
        for x in bits(a) {
            for y in bits(b) {
                out |= 1 << self.s.mul(x, y);
            }
        }
        out
    }

    /// Products among the first `assigned` elements must already sit in the
    /// required subsets; later elements can only add to the subsets.
    fn consistent(&self, assigned: usize) -> bool {
        let settled = if assigned >= 64 { u64::MAX } else { (1u64 << assigned) - 1 };
        self.constraints.iter().all(|(parts, targets)| {
            let product = parts[1..]
                .iter()
                .fold(self.masks[parts[0]], |acc, &p| self.product(acc, self.masks[p]));
            let product = product & settled;
            targets.iter().all(|&r| product & !self.masks[r] == 0)
        })
    }

    fn run(&mut self, element: usize) {
        if self.stopped {
            return;
        }
        self.nodes += 1;
        if self.limits.max_nodes.is_some_and(|cap| self.nodes > cap) {
            self.stopped = true;
            return;
        }
        if !self.consistent(element) {
            return;
        }
        if element == self.s.order() {
            if self.masks.iter().all(|&m| m != 0) {
                let subsets = self.masks.iter().map(|&m| bits(m).collect()).collect();
                self.found.push(SemigroupDecomposition { subsets });
                if self.limits.max_results.is_some_and(|k| self.found.len() >= k) {
                    self.stopped = true;
                }
            }
            return;
        }
        for choice in 1u64..(1 << self.parts) {
            for p in bits(choice) {
                self.masks[p] |= 1 << element;
            }
            self.run(element + 1);
            for p in bits(choice) {
                self.masks[p] &= !(1 << element);
            }
            if self.stopped {
                return;
            }
        }
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask & (1 << i) != 0)
}

/// Enumerates the resonant decompositions of `s` into `parts` nonempty
/// subsets: each element goes to a nonempty set of parts, assignments are
/// explored element by element (choices in increasing bitmask order) and
/// pruned as soon as a settled product lands outside a required subset.
pub fn search_resonant(
    s: &Semigroup,
    cs: &ClosureStructure,
    parts: usize,
    limits: SearchLimits,
) -> Result<SearchOutcome> {
    if s.order() > 64 {
        return Err(Error::Shape("search supports at most 64 semigroup elements".into()));
    }
    if parts == 0 || parts > 16 {
        return Err(Error::Decomposition(format!("cannot search over {parts} parts")));
    }
    check_part_count(parts, cs)?;
    let mut search = Search {
        s,
        constraints: cs.i_map.iter().collect(),
        parts,
        limits,
        masks: vec![0; parts],
        nodes: 0,
        stopped: false,
        found: Vec::new(),
    };
    search.run(0);
    Ok(SearchOutcome { decompositions: search.found, complete: !search.stopped, nodes: search.nodes })
}
