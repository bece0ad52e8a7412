//! UTF-8 JSON file formats for semigroups, algebras (plain and expanded),
//! matrix representations and resonance decompositions.
//!
//! Rationals travel as `"p/q"` strings (`"p"` for integers). Writers emit
//! entries sorted by lower tuple and then upper index, so equal objects give
//! byte-identical files.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::combinatorics::canonical_antisym;
use crate::error::{Error, Result};
use crate::expansion::{ExpandedAlgebra, PairBasis};
use crate::matrix::Matrix;
use crate::multialgebra::MultiAlgebra;
use crate::rational::{self, Rational};
use crate::realization::MatrixRep;
use crate::resonance::{ClosureStructure, ReductionPartition, SemigroupDecomposition, SubspaceDecomposition};
use crate::semigroup::Semigroup;
use crate::tensor::StructureTensor;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupFile {
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryFile {
    pub lower: Vec<usize>,
    pub upper: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingFile {
    pub base_dim: usize,
    pub semigroup_order: usize,
    /// `[generator, element]` per basis vector; absent when the basis is the
    /// full product in flat order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub basis: Vec<String>,
    pub order: usize,
    pub entries: Vec<EntryFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub size: usize,
    pub generators: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub subspaces: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsets: Option<BTreeMap<String, Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hat: Option<BTreeMap<String, Vec<usize>>>,
    /// Declared closure sets; when present they replace the computed ones
    /// after being checked to contain them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<Vec<ClosureEntryFile>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureEntryFile {
    pub parts: Vec<String>,
    pub targets: Vec<String>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what} file: {e}")))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("file types always serialize");
    out.push('\n');
    out
}

pub fn semigroup_to_file(s: &Semigroup) -> SemigroupFile {
    SemigroupFile { labels: s.labels().to_vec(), table: s.table().to_vec() }
}

pub fn semigroup_from_file(f: SemigroupFile) -> Result<Semigroup> {
    Semigroup::validate(f.labels, f.table)
}

pub fn parse_semigroup_file(text: &str) -> Result<SemigroupFile> {
    from_json(text, "semigroup")
}

pub fn semigroup_from_json(text: &str) -> Result<Semigroup> {
    semigroup_from_file(parse_semigroup_file(text)?)
}

pub fn semigroup_to_json(s: &Semigroup) -> String {
    to_json(&semigroup_to_file(s))
}

pub fn algebra_to_file(a: &MultiAlgebra) -> AlgebraFile {
    let entries = a
        .tensor()
        .entries()
        .map(|(lower, upper, value)| EntryFile {
            lower: lower.clone(),
            upper,
            value: rational::format(value),
        })
        .collect();
    AlgebraFile { basis: a.basis().to_vec(), order: a.order(), entries, pairing: None }
}

/// Builds the algebra described by a file. Lower tuples in any order are
/// accepted and brought to increasing order with the matching sign; the same
/// constant listed twice must agree.
pub fn algebra_from_file(f: &AlgebraFile) -> Result<MultiAlgebra> {
    let dim = f.basis.len();
    let mut tensor = StructureTensor::new(dim, f.order)?;
    let mut seen: BTreeMap<(Vec<usize>, usize), Rational> = BTreeMap::new();
    for (i, entry) in f.entries.iter().enumerate() {
        if entry.lower.len() != f.order {
            return Err(Error::Parse(format!(
                "entries[{i}].lower has {} indices, order is {}",
                entry.lower.len(),
                f.order
            )));
        }
        if let Some(&bad) = entry.lower.iter().chain([&entry.upper]).find(|&&g| g >= dim) {
            return Err(Error::Parse(format!("entries[{i}]: index {bad} outside basis of size {dim}")));
        }
        let value = rational::parse(&entry.value)
            .map_err(|e| Error::Parse(format!("entries[{i}].value: {e}")))?;
        let Some((lower, sign)) = canonical_antisym(&entry.lower) else {
            if value == rational::zero() {
                continue;
            }
            return Err(Error::Antisymmetry(entry.lower.clone()));
        };
        let value = if sign < 0 { -value } else { value };
        match seen.get(&(lower.clone(), entry.upper)) {
            Some(previous) if *previous != value => {
                return Err(Error::Parse(format!(
                    "entries[{i}] conflicts with an earlier entry for {lower:?} -> {}",
                    entry.upper
                )));
            }
            Some(_) => continue,
            None => {}
        }
        tensor.insert(&lower, entry.upper, value.clone())?;
        seen.insert((lower, entry.upper), value);
    }
    MultiAlgebra::new(f.basis.clone(), tensor)
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile> {
    from_json(text, "algebra")
}

pub fn algebra_from_json(text: &str) -> Result<MultiAlgebra> {
    algebra_from_file(&parse_algebra_file(text)?)
}

pub fn algebra_to_json(a: &MultiAlgebra) -> String {
    to_json(&algebra_to_file(a))
}

pub fn expanded_to_file(e: &ExpandedAlgebra) -> AlgebraFile {
    let mut file = algebra_to_file(e.algebra());
    let p = e.pairing();
    file.pairing = Some(PairingFile {
        base_dim: p.base_dim,
        semigroup_order: p.semigroup_order,
        pairs: (!e.is_full()).then(|| e.pairs().to_vec()),
    });
    file
}

pub fn expanded_to_json(e: &ExpandedAlgebra) -> String {
    to_json(&expanded_to_file(e))
}

/// Reattaches an expanded algebra file to the semigroup it was built with.
pub fn expanded_from_file(f: &AlgebraFile, s: &Semigroup) -> Result<ExpandedAlgebra> {
    let pairing = f
        .pairing
        .as_ref()
        .ok_or_else(|| Error::Parse("algebra file has no \"pairing\" section".into()))?;
    let basis = PairBasis { base_dim: pairing.base_dim, semigroup_order: pairing.semigroup_order };
    let pairs = pairing.pairs.clone().unwrap_or_else(|| basis.pairs());
    ExpandedAlgebra::from_parts(algebra_from_file(f)?, s.clone(), basis, pairs)
}

pub fn expanded_from_json(text: &str, s: &Semigroup) -> Result<ExpandedAlgebra> {
    expanded_from_file(&parse_algebra_file(text)?, s)
}

pub fn rep_to_file(rep: &MatrixRep) -> RepFile {
    RepFile {
        size: rep.size(),
        generators: rep
            .generators()
            .iter()
            .map(|m| m.rows().iter().map(|r| r.iter().map(rational::format).collect()).collect())
            .collect(),
    }
}

pub fn rep_from_file(f: &RepFile) -> Result<MatrixRep> {
    let mut generators = Vec::with_capacity(f.generators.len());
    for (g, rows) in f.generators.iter().enumerate() {
        if rows.len() != f.size || rows.iter().any(|r| r.len() != f.size) {
            return Err(Error::Parse(format!("generators[{g}] is not {0}x{0}", f.size)));
        }
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| {
                        rational::parse(x)
                            .map_err(|e| Error::Parse(format!("generators[{g}][{i}][{j}]: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        generators.push(Matrix::from_rows(parsed)?);
    }
    MatrixRep::with_size(f.size, generators)
}

pub fn rep_from_json(text: &str) -> Result<MatrixRep> {
    rep_from_file(&from_json(text, "representation")?)
}

pub fn rep_to_json(rep: &MatrixRep) -> String {
    to_json(&rep_to_file(rep))
}

/// A decomposition file resolved against an algebra and a semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub subspaces: SubspaceDecomposition,
    pub subsets: Option<SemigroupDecomposition>,
    pub partition: Option<ReductionPartition>,
    pub closure: Option<ClosureStructure>,
}

fn keyed_sets(
    labels: &[String],
    map: &BTreeMap<String, Vec<usize>>,
    field: &str,
) -> Result<Vec<BTreeSet<usize>>> {
    if let Some(extra) = map.keys().find(|k| !labels.contains(k)) {
        return Err(Error::Parse(format!("{field}: unknown part {extra:?}")));
    }
    Ok(labels
        .iter()
        .map(|l| map.get(l).map(|v| v.iter().copied().collect()).unwrap_or_default())
        .collect())
}

pub fn parse_decomposition_file(text: &str) -> Result<DecompositionFile> {
    from_json(text, "decomposition")
}

/// Parts are ordered by label. Missing parts in "subsets" or "hat" are empty.
pub fn decomposition_from_file(f: &DecompositionFile, dim: usize, s: &Semigroup) -> Result<Decomposition> {
    let subspaces = SubspaceDecomposition::new(
        dim,
        f.subspaces.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
    )?;
    let labels = subspaces.labels().to_vec();
    let subsets = f
        .subsets
        .as_ref()
        .map(|m| SemigroupDecomposition::new(s, keyed_sets(&labels, m, "subsets")?))
        .transpose()?;
    let partition = match (&f.hat, &subsets) {
        (Some(hat), Some(sd)) => Some(ReductionPartition::from_hat(sd, keyed_sets(&labels, hat, "hat")?)?),
        (Some(_), None) => {
            return Err(Error::Parse("\"hat\" needs \"subsets\" alongside it".into()));
        }
        (None, _) => None,
    };
    let closure = f
        .closure
        .as_ref()
        .map(|entries| {
            let index = |field: &str, l: &String| {
                subspaces
                    .part_index(l)
                    .ok_or_else(|| Error::Parse(format!("closure {field}: unknown part {l:?}")))
            };
            let mut cs = ClosureStructure::default();
            for e in entries {
                let mut key = e.parts.iter().map(|l| index("parts", l)).collect::<Result<Vec<_>>>()?;
                key.sort_unstable();
                let targets = e.targets.iter().map(|l| index("targets", l)).collect::<Result<BTreeSet<_>>>()?;
                cs.i_map.entry(key).or_default().extend(targets);
            }
            Ok::<_, Error>(cs)
        })
        .transpose()?;
    Ok(Decomposition { subspaces, subsets, partition, closure })
}

pub fn decomposition_from_json(text: &str, dim: usize, s: &Semigroup) -> Result<Decomposition> {
    decomposition_from_file(&parse_decomposition_file(text)?, dim, s)
}

fn label_map(labels: &[String], sets: &[BTreeSet<usize>]) -> BTreeMap<String, Vec<usize>> {
    labels.iter().cloned().zip(sets.iter().map(|s| s.iter().copied().collect())).collect()
}

pub fn decomposition_to_file(d: &Decomposition) -> DecompositionFile {
    let labels = d.subspaces.labels();
    DecompositionFile {
        subspaces: label_map(labels, &(0..labels.len()).map(|p| d.subspaces.part(p).clone()).collect::<Vec<_>>()),
        subsets: d.subsets.as_ref().map(|sd| label_map(labels, &sd.subsets)),
        hat: d.partition.as_ref().map(|rp| label_map(labels, &rp.hat)),
        closure: d.closure.as_ref().map(|cs| {
            cs.i_map
                .iter()
                .map(|(parts, targets)| ClosureEntryFile {
                    parts: parts.iter().map(|&p| labels[p].clone()).collect(),
                    targets: targets.iter().map(|&p| labels[p].clone()).collect(),
                })
                .collect()
        }),
    }
}

pub fn decomposition_to_json(d: &Decomposition) -> String {
    to_json(&decomposition_to_file(d))
}
