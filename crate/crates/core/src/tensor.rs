//! Sparse, fully antisymmetric structure tensors `C_{A1...An}^B`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::combinatorics::{canonical_antisym, IndexTuple};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Nonzero constants keyed by strictly increasing lower tuple, then upper index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTensor {
    dim: usize,
    order: usize,
    entries: BTreeMap<IndexTuple, BTreeMap<usize, Rational>>,
}

impl StructureTensor {
    pub fn new(dim: usize, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Shape(format!("bracket order must be at least 2, got {order}")));
        }
        Ok(Self { dim, order, entries: BTreeMap::new() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of stored nonzero constants.
    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_indices(&self, lower: &[usize], upper: usize) -> Result<()> {
        if lower.len() != self.order {
            return Err(Error::Arity { expected: self.order, got: lower.len() });
        }
        for &i in lower.iter().chain(std::iter::once(&upper)) {
            if i >= self.dim {
                return Err(Error::Index { index: i, size: self.dim });
            }
        }
        Ok(())
    }

    /// Canonical key and the sign `value` picks up when stored under it.
    /// Repeated lower indices only admit a zero value.
    fn canonical(&self, lower: &[usize], value: &Rational) -> Result<Option<(IndexTuple, i32)>> {
        match canonical_antisym(lower) {
            Some(key) => Ok(Some(key)),
            None if value.is_zero() => Ok(None),
            None => Err(Error::Antisymmetry(lower.to_vec())),
        }
    }

    /// Sets `C_{lower}^{upper}`; `lower` may be in any order.
    pub fn insert(&mut self, lower: &[usize], upper: usize, value: Rational) -> Result<()> {
        self.check_indices(lower, upper)?;
        let Some((key, sign)) = self.canonical(lower, &value)? else {
            return Ok(());
        };
        let value = if sign > 0 { value } else { -value };
        let column = self.entries.entry(key.clone()).or_default();
        if value.is_zero() {
            column.remove(&upper);
        } else {
            column.insert(upper, value);
        }
        if column.is_empty() {
            self.entries.remove(&key);
        }
        Ok(())
    }

    /// Adds `value` to `C_{lower}^{upper}`.
    pub fn add(&mut self, lower: &[usize], upper: usize, value: &Rational) -> Result<()> {
        self.check_indices(lower, upper)?;
        let Some((key, sign)) = self.canonical(lower, value)? else {
            return Ok(());
        };
        let current = self.get_sorted(&key, upper);
        let next = if sign > 0 { current + value } else { current - value };
        self.insert(&key, upper, next)
    }

    fn get_sorted(&self, key: &[usize], upper: usize) -> Rational {
        self.entries
            .get(key)
            .and_then(|col| col.get(&upper))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `C_{lower}^{upper}` with the antisymmetry sign applied; zero on repeats.
    pub fn get(&self, lower: &[usize], upper: usize) -> Rational {
        match canonical_antisym(lower) {
            Some((key, sign)) => {
                let v = self.get_sorted(&key, upper);
                if sign > 0 {
                    v
                } else {
                    -v
                }
            }
            None => Rational::zero(),
        }
    }

    /// Stored upper-index column for a strictly increasing lower tuple.
    pub fn column(&self, sorted_lower: &[usize]) -> Option<&BTreeMap<usize, Rational>> {
        self.entries.get(sorted_lower)
    }

    /// All nonzero constants in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&IndexTuple, usize, &Rational)> + '_ {
        self.entries
            .iter()
            .flat_map(|(lower, col)| col.iter().map(move |(&upper, v)| (lower, upper, v)))
    }

    /// Keeps only the generators in `keep` (strictly increasing), renumbered
    /// by their position there. Entries touching any other index are dropped.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut position = vec![None; self.dim];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = Some(new);
        }
        let mut out = Self { dim: keep.len(), order: self.order, entries: BTreeMap::new() };
        for (lower, upper, value) in self.entries() {
            let mapped: Option<Vec<usize>> = lower.iter().map(|&i| position[i]).collect();
            if let (Some(mapped), Some(upper)) = (mapped, position[upper]) {
                // order-preserving relabel keeps the key sorted
                out.entries.entry(mapped).or_default().insert(upper, value.clone());
            }
        }
        out
    }
}
