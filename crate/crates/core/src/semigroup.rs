//! Finite Abelian semigroups given by their multiplication tables.

use std::fmt;

use crate::error::{Error, Result};

/// One failed axiom, with the witness that breaks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    NotClosed { row: usize, col: usize, value: usize },
    NotCommutative { a: usize, b: usize },
    NotAssociative { a: usize, b: usize, c: usize },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotClosed { row, col, value } => {
                write!(f, "NotClosed: table[{row}][{col}] = {value}")
            }
            Self::NotCommutative { a, b } => write!(f, "NotCommutative: ({a}, {b})"),
            Self::NotAssociative { a, b, c } => write!(f, "NotAssociative: ({a}, {b}, {c})"),
        }
    }
}

/// A validated finite Abelian semigroup. Element `i` is `labels[i]`, and
/// `table[a][b]` is the index of the product of elements `a` and `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semigroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl Semigroup {
    /// Checks closure, commutativity and associativity exhaustively.
    pub fn validate(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::Shape("semigroup must have at least one element".into()));
        }
        if table.len() != m || table.iter().any(|row| row.len() != m) {
            return Err(Error::Shape(format!("table must be {m}x{m} to match the labels")));
        }
        let mut seen = std::collections::BTreeSet::new();
        for label in &labels {
            if !seen.insert(label) {
                return Err(Error::Shape(format!("duplicate label {label:?}")));
            }
        }
        let violations = axiom_violations(&table);
        if violations.is_empty() {
            Ok(Self { labels, table })
        } else {
            Err(Error::InvalidSemigroup(violations))
        }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn check(&self, index: usize) -> Result<()> {
        if index < self.order() {
            Ok(())
        } else {
            Err(Error::Index { index, size: self.order() })
        }
    }

    pub fn product(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.table[a][b])
    }

    /// Product of unchecked indices, for hot loops over validated data.
    #[inline]
    pub(crate) fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Left fold of the product over `args`.
    pub fn fold(&self, args: &[usize]) -> Result<usize> {
        let (&first, rest) = args
            .split_first()
            .ok_or_else(|| Error::Shape("cannot multiply an empty list".into()))?;
        self.check(first)?;
        rest.iter().try_fold(first, |acc, &b| {
            self.check(b)?;
            Ok(self.table[acc][b])
        })
    }

    /// The n-selector `K_{args}^{target}`: 1 when the product of `args` is `target`.
    pub fn selector(&self, args: &[usize], target: usize) -> Result<u8> {
        if args.len() < 2 {
            return Err(Error::Arity { expected: 2, got: args.len() });
        }
        self.check(target)?;
        Ok(u8::from(self.fold(args)? == target))
    }

    /// The absorbing element, if any. It is unique when it exists.
    pub fn zero_element(&self) -> Option<usize> {
        (0..self.order()).find(|&z| (0..self.order()).all(|a| self.table[a][z] == z))
    }

    /// `{product of one element of each set}` as a membership mask.
    pub fn set_product(&self, sets: &[&[bool]]) -> Vec<bool> {
        let m = self.order();
        let Some((first, rest)) = sets.split_first() else {
            return vec![false; m];
        };
        let mut acc = first.to_vec();
        for set in rest {
            let mut next = vec![false; m];
            for a in (0..m).filter(|&a| acc[a]) {
                for b in (0..m).filter(|&b| set[b]) {
                    next[self.table[a][b]] = true;
                }
            }
            acc = next;
        }
        acc
    }

    /// Relabels by a bijection: element `i` of `self` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        crate::combinatorics::permutation_parity(perm)?;
        if perm.len() != self.order() {
            return Err(Error::Shape("relabeling must cover every element".into()));
        }
        let m = self.order();
        let mut labels = vec![String::new(); m];
        let mut table = vec![vec![0; m]; m];
        for a in 0..m {
            labels[perm[a]] = self.labels[a].clone();
            for b in 0..m {
                table[perm[a]][perm[b]] = perm[self.table[a][b]];
            }
        }
        Ok(Self { labels, table })
    }
}

/// Every closure, commutativity and associativity failure of a square table.
/// Associativity is only examined once the table is closed.
pub fn axiom_violations(table: &[Vec<usize>]) -> Vec<AxiomViolation> {
    let m = table.len();
    let mut out = Vec::new();
    for (row, entries) in table.iter().enumerate() {
        for (col, &value) in entries.iter().enumerate() {
            if value >= m {
                out.push(AxiomViolation::NotClosed { row, col, value });
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            if table[a][b] != table[b][a] {
                out.push(AxiomViolation::NotCommutative { a, b });
            }
        }
    }
    if !out.is_empty() && out.iter().any(|v| matches!(v, AxiomViolation::NotClosed { .. })) {
        return out;
    }
    for a in 0..m {
        for b in 0..m {
            let ab = table[a][b];
            for c in 0..m {
                if table[ab][c] != table[a][table[b][c]] {
                    out.push(AxiomViolation::NotAssociative { a, b, c });
                }
            }
        }
    }
    out
}

/// The semigroup `S_E^(N)`: elements `l0..l{N+1}` with
/// `l_a * l_b = l_{min(a + b, N + 1)}`. The last element is the zero.
pub fn gen_se(n: usize) -> Semigroup {
    let size = n + 2;
    let cap = n + 1;
    let labels = (0..size).map(|i| format!("l{i}")).collect();
    let table = (0..size)
        .map(|a| (0..size).map(|b| (a + b).min(cap)).collect())
        .collect();
    Semigroup { labels, table }
}

/// The cyclic group `Z_m` under addition, labelled `e0..e{m-1}`.
pub fn cyclic_group(m: usize) -> Semigroup {
    let labels = (0..m).map(|i| format!("e{i}")).collect();
    let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
    Semigroup { labels, table }
}
