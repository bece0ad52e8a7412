//! Higher-order Lie algebras: bracket evaluation, the generalized Jacobi
//! condition, and the submultialgebra / reduction predicates for a split
//! `G = V0 ⊕ V1`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;

use crate::combinatorics::{binomial, IndexTuple};
use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};
use crate::tensor::StructureTensor;

/// A named basis together with its structure tensor. Orders above 2 must be even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiAlgebra {
    basis: Vec<String>,
    tensor: StructureTensor,
}

impl MultiAlgebra {
    pub fn new(basis: Vec<String>, tensor: StructureTensor) -> Result<Self> {
        if basis.len() != tensor.dim() {
            return Err(Error::Shape(format!(
                "{} basis names for a tensor of dimension {}",
                basis.len(),
                tensor.dim()
            )));
        }
        let order = tensor.order();
        if order > 2 && order % 2 == 1 {
            return Err(Error::OddOrderUnsupported(order));
        }
        Ok(Self { basis, tensor })
    }

    /// Basis named `T0, T1, ...`.
    pub fn with_default_basis(tensor: StructureTensor) -> Result<Self> {
        let basis = (0..tensor.dim()).map(|i| format!("T{i}")).collect();
        Self::new(basis, tensor)
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn order(&self) -> usize {
        self.tensor.order()
    }

    pub fn tensor(&self) -> &StructureTensor {
        &self.tensor
    }

    /// Coefficients of `[T_{args[0]}, ..., T_{args[n-1]}]` over the basis.
    pub fn bracket(&self, args: &[usize]) -> Result<Vec<Rational>> {
        if args.len() != self.order() {
            return Err(Error::Arity { expected: self.order(), got: args.len() });
        }
        if let Some(&bad) = args.iter().find(|&&a| a >= self.dim()) {
            return Err(Error::Index { index: bad, size: self.dim() });
        }
        Ok((0..self.dim()).map(|b| self.tensor.get(args, b)).collect())
    }

    /// Evaluates `ε_{A1..A(2n-1)}^{B1..B(2n-1)} C_{B1..Bn}^C C_{C B(n+1)..B(2n-1)}^D`
    /// for every strictly increasing `A` and every `D`.
    ///
    /// Grouping the permutation sum by which `n` of the `A`s feed the inner
    /// bracket gives `n!(n-1)! Σ_S sgn(S,R) C_S^C C_{C R}^D`; only pairs of
    /// stored entries contribute, so the work is driven by the nonzeros.
    pub fn check_gji(&self) -> Result<GjiReport> {
        let n = self.order();
        if n > 2 && n % 2 == 1 {
            return Err(Error::OddOrderUnsupported(n));
        }
        let entries: Vec<(&IndexTuple, usize, &Rational)> = self.tensor.entries().collect();
        let mut containing: Vec<Vec<usize>> = vec![Vec::new(); self.dim()];
        for (id, (lower, _, _)) in entries.iter().enumerate() {
            for &i in lower.iter() {
                containing[i].push(id);
            }
        }
        let prefactor = factorial(n) * factorial(n - 1);

        type Residuals = BTreeMap<(IndexTuple, usize), Rational>;
        let (residuals, terms) = entries
            .par_iter()
            .fold(
                || (Residuals::new(), 0u64),
                |(mut acc, mut terms), &(inner, c, c1)| {
                    for &id in &containing[c] {
                        let (outer, d, c2) = entries[id];
                        let pos = outer.iter().position(|&i| i == c).expect("indexed by member");
                        let rest: Vec<usize> =
                            outer.iter().copied().filter(|&i| i != c).collect();
                        let Some((tuple, merge_sign)) = merge_disjoint(inner, &rest) else {
                            continue;
                        };
                        terms += 1;
                        let mut value = c1 * c2;
                        if (merge_sign < 0) != (pos % 2 == 1) {
                            value = -value;
                        }
                        *acc.entry((tuple, d)).or_insert_with(Rational::zero) += value;
                    }
                    (acc, terms)
                },
            )
            .reduce(
                || (Residuals::new(), 0u64),
                |(mut a, ta), (b, tb)| {
                    for (key, value) in b {
                        *a.entry(key).or_insert_with(Rational::zero) += value;
                    }
                    (a, ta + tb)
                },
            );

        let violations = residuals
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((tuple, upper), v)| GjiViolation { tuple, upper, residual: &prefactor * v })
            .collect();
        Ok(GjiReport {
            order: n,
            tuples_checked: binomial(self.dim(), 2 * n - 1),
            terms_evaluated: terms,
            violations,
        })
    }

    /// Checks `[V0, ..., V0] ⊂ V0`, i.e. `C_{a1..an}^{b} = 0` for lower indices
    /// in `v0` and `b` in `v1`.
    pub fn check_submultialgebra(&self, split: &SubspaceSplit) -> SplitCheck {
        self.split_check(split, |lower| lower.iter().all(|&i| split.in_v0(i)), false)
    }

    /// Checks `[V1, V0, ..., V0] ⊂ V1`: entries with exactly one lower index in
    /// `v1` must not reach `v0`.
    pub fn check_reduction_condition(&self, split: &SubspaceSplit) -> SplitCheck {
        self.split_check(
            split,
            |lower| lower.iter().filter(|&&i| !split.in_v0(i)).count() == 1,
            true,
        )
    }

    fn split_check(
        &self,
        split: &SubspaceSplit,
        pattern: impl Fn(&[usize]) -> bool,
        forbid_v0_target: bool,
    ) -> SplitCheck {
        let witnesses: Vec<_> = self
            .tensor
            .entries()
            .filter(|(lower, upper, _)| {
                pattern(lower) && split.in_v0(*upper) == forbid_v0_target
            })
            .map(|(lower, upper, value)| SplitWitness {
                lower: lower.clone(),
                upper,
                value: value.clone(),
            })
            .collect();
        SplitCheck { holds: witnesses.is_empty(), witnesses }
    }

    /// The algebra spanned by `keep` (strictly increasing), keeping only the
    /// constants whose indices all lie in it.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        if keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Shape("restriction indices must be strictly increasing".into()));
        }
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.dim()) {
            return Err(Error::Index { index: bad, size: self.dim() });
        }
        let basis = keep.iter().map(|&i| self.basis[i].clone()).collect();
        Self::new(basis, self.tensor.restrict(keep))
    }

    /// The reduced multialgebra `|V0|` when `[V1, V0, ..., V0] ⊂ V1` holds.
    pub fn reduced(&self, split: &SubspaceSplit) -> Result<Self> {
        let check = self.check_reduction_condition(split);
        if let Some(w) = check.witnesses.first() {
            return Err(Error::NotReducible {
                lower: w.lower.clone(),
                upper: w.upper,
                value: crate::rational::format(&w.value),
            });
        }
        let keep: Vec<usize> = split.v0.iter().copied().collect();
        self.restrict(&keep)
    }
}

/// Merges two sorted index lists. Returns the sorted union and the sign of
/// the permutation taking `a ++ b` to it, or `None` if they intersect.
fn merge_disjoint(a: &[usize], b: &[usize]) -> Option<(IndexTuple, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut crossings = 0usize;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over every remaining element of a
            crossings += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((out, if crossings.is_multiple_of(2) { 1 } else { -1 }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GjiViolation {
    pub tuple: IndexTuple,
    pub upper: usize,
    pub residual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GjiReport {
    pub order: usize,
    /// Strictly increasing `(2n-1)`-tuples covered by the check.
    pub tuples_checked: u128,
    /// Entry pairs that contributed a term to some residual.
    pub terms_evaluated: u64,
    /// Nonzero residuals, sorted by tuple then upper index.
    pub violations: Vec<GjiViolation>,
}

impl GjiReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// Distinct lower tuples among the violations.
    pub fn witness_tuples(&self) -> BTreeSet<IndexTuple> {
        self.violations.iter().map(|v| v.tuple.clone()).collect()
    }
}

/// A partition of the generator indices into `v0` and its complement `v1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceSplit {
    pub v0: BTreeSet<usize>,
    pub v1: BTreeSet<usize>,
}

impl SubspaceSplit {
    /// `v1` is the complement of `v0` in `0..dim`.
    pub fn from_v0(dim: usize, v0: impl IntoIterator<Item = usize>) -> Result<Self> {
        let v0: BTreeSet<usize> = v0.into_iter().collect();
        if let Some(&bad) = v0.iter().find(|&&i| i >= dim) {
            return Err(Error::Index { index: bad, size: dim });
        }
        let v1 = (0..dim).filter(|i| !v0.contains(i)).collect();
        Ok(Self { v0, v1 })
    }

    pub fn in_v0(&self, i: usize) -> bool {
        self.v0.contains(&i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitWitness {
    pub lower: IndexTuple,
    pub upper: usize,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCheck {
    pub holds: bool,
    pub witnesses: Vec<SplitWitness>,
}
