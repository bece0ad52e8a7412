//! Matrix realizations of multibrackets.
//!
//! A multibracket of matrices is the fully antisymmetrized product
//! `Σ_σ sgn(σ) T_{σ(1)} ... T_{σ(n)}`. Nesting one such bracket inside another
//! and antisymmetrizing over `S_{2n-1}` yields zero for even `n` and `n` times
//! the `(2n-1)`-bracket for odd `n`; [`verify_identity`] checks this exactly.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{
    binomial, canonical_antisym, for_each_permutation, increasing_tuples, sort_sign, IndexTuple,
};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Span};
use crate::multialgebra::MultiAlgebra;
use crate::rational::{factorial, int, Rational};
use crate::tensor::StructureTensor;

/// Generators `T_A` as square rational matrices of a common size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRep {
    size: usize,
    generators: Vec<Matrix>,
}

impl MatrixRep {
    pub fn new(generators: Vec<Matrix>) -> Result<Self> {
        let size = generators.first().map_or(0, Matrix::size);
        if generators.iter().any(|g| g.size() != size) {
            return Err(Error::Shape("all generators must have the same size".into()));
        }
        Ok(Self { size, generators })
    }

    /// Like [`MatrixRep::new`], also checking the declared matrix size.
    pub fn with_size(size: usize, generators: Vec<Matrix>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.size() != size) {
            return Err(Error::Shape(format!(
                "generator of size {} in a representation of size {size}",
                g.size()
            )));
        }
        Ok(Self { size, generators })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// A new representation from a subset of the generators.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        self.check(indices)?;
        Ok(Self {
            size: self.size,
            generators: indices.iter().map(|&i| self.generators[i].clone()).collect(),
        })
    }

    fn check(&self, args: &[usize]) -> Result<()> {
        match args.iter().find(|&&a| a >= self.len()) {
            Some(&bad) => Err(Error::Index { index: bad, size: self.len() }),
            None => Ok(()),
        }
    }
}

/// `Σ_σ sgn(σ) M_{σ(1)} ... M_{σ(n)}` over all orderings of `mats`.
///
/// Expands along the first factor: the sum equals
/// `Σ_i (-1)^i M_i · (antisymmetrized product of the others)`, memoized per
/// subset, which costs `O(2^n n)` products instead of `O(n! n)`.
pub fn antisymmetrized_product(mats: &[&Matrix]) -> Matrix {
    let n = mats.len();
    assert!(n < 32, "antisymmetrized product over {n} factors");
    let size = mats.first().map_or(0, |m| m.size());
    let full = (1u32 << n) - 1;
    let mut table: HashMap<u32, Matrix> = HashMap::new();
    table.insert(0, Matrix::identity(size));
    // subsets in order of increasing popcount so smaller ones are ready
    let mut masks: Vec<u32> = (1..=full).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let mut acc = Matrix::zeros(size);
        let mut rank = 0;
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            let rest = &table[&(mask & !(1 << i))];
            let term = mats[i] * rest;
            if rank % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
            rank += 1;
        }
        table.insert(mask, acc);
    }
    table.remove(&full).expect("full subset computed")
}

/// `[T_{args[0]}, ..., T_{args[n-1]}]` realized on matrices.
pub fn multibracket(rep: &MatrixRep, args: &[usize]) -> Result<Matrix> {
    rep.check(args)?;
    if canonical_antisym(args).is_none() {
        return Ok(Matrix::zeros(rep.size()));
    }
    let mats: Vec<&Matrix> = args.iter().map(|&a| &rep.generators[a]).collect();
    Ok(antisymmetrized_product(&mats))
}

/// The nested antisymmetrized bracket
/// `1/((n-1)! n!) Σ_{σ ∈ S_{2n-1}} sgn(σ) [[T_{σ(1)}, ..., T_{σ(n)}], T_{σ(n+1)}, ..., T_{σ(2n-1)}]`.
///
/// Every permutation is visited; the inner and outer brackets for a given
/// choice of argument positions are computed once and reused with the sign of
/// the ordering within each group.
pub fn gji_lhs(rep: &MatrixRep, args: &[usize], n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::Arity { expected: 2, got: n });
    }
    let width = 2 * n - 1;
    if args.len() != width {
        return Err(Error::Arity { expected: width, got: args.len() });
    }
    rep.check(args)?;
    let mut outer: HashMap<u32, Matrix> = HashMap::new();
    let mut acc = Matrix::zeros(rep.size());
    for_each_permutation(width, |perm, sign| {
        let mut head = perm[..n].to_vec();
        let mut tail = perm[n..].to_vec();
        let sign = sign * sort_sign(&mut head).unwrap() * sort_sign(&mut tail).unwrap();
        let mask = head.iter().fold(0u32, |m, &p| m | (1 << p));
        let value = outer.entry(mask).or_insert_with(|| {
            let inner_args: Vec<&Matrix> = head.iter().map(|&p| &rep.generators[args[p]]).collect();
            let inner = antisymmetrized_product(&inner_args);
            let mut outer_args = vec![&inner];
            outer_args.extend(tail.iter().map(|&p| &rep.generators[args[p]]));
            antisymmetrized_product(&outer_args)
        });
        if sign > 0 {
            acc += value;
        } else {
            acc -= value;
        }
    });
    let norm = (factorial(n - 1) * factorial(n)).recip();
    Ok(acc.scaled(&norm))
}

/// `Σ_{s=0}^{n-1} (-1)^{s(n+1)}`: 0 for even `n`, `n` for odd `n`.
pub fn alternating_sum(n: u64) -> i64 {
    (0..n).map(|s| if (s * (n + 1)).is_multiple_of(2) { 1 } else { -1 }).sum()
}

/// What the nested bracket must equal for this arity and tuple.
fn expected_lhs(rep: &MatrixRep, args: &[usize], n: usize) -> Result<Matrix> {
    let factor = alternating_sum(n as u64);
    if factor == 0 {
        Ok(Matrix::zeros(rep.size()))
    } else {
        Ok(multibracket(rep, args)?.scaled(&int(factor)))
    }
}

/// Checks the identity for one `(2n-1)`-tuple, which may repeat indices.
pub fn verify_tuple(rep: &MatrixRep, args: &[usize], n: usize) -> Result<bool> {
    Ok(gji_lhs(rep, args, n)? == expected_lhs(rep, args, n)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub n: usize,
    /// `0` for even `n`, `n` for odd `n`.
    pub factor: i64,
    pub tuples_checked: usize,
    pub permutations_evaluated: u128,
    /// Tuples where the identity failed.
    pub violations: Vec<IndexTuple>,
}

impl IdentityReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Strictly increasing `(2n-1)`-tuples to examine: all of them when there are
/// at most `trials` (or `trials == 0`), otherwise `trials` distinct ones drawn
/// with a seeded generator. Returned sorted.
pub fn identity_tuples(generators: usize, n: usize, trials: usize, seed: u64) -> Vec<IndexTuple> {
    let width = 2 * n - 1;
    let total = binomial(generators, width);
    if trials == 0 || total <= trials as u128 {
        return increasing_tuples(generators, width).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = BTreeSet::new();
    while picked.len() < trials {
        let mut t = sample(&mut rng, generators, width).into_vec();
        t.sort_unstable();
        picked.insert(t);
    }
    picked.into_iter().collect()
}

/// Verifies the nested-bracket identity on the tuples chosen by
/// [`identity_tuples`].
pub fn verify_identity(rep: &MatrixRep, n: usize, trials: usize, seed: u64) -> Result<IdentityReport> {
    if n < 2 {
        return Err(Error::Arity { expected: 2, got: n });
    }
    let tuples = identity_tuples(rep.len(), n, trials, seed);
    let mut violations = Vec::new();
    for t in &tuples {
        if !verify_tuple(rep, t, n)? {
            violations.push(t.clone());
        }
    }
    let perms: u128 = (1..=(2 * n - 1) as u128).product();
    Ok(IdentityReport {
        n,
        factor: alternating_sum(n as u64),
        tuples_checked: tuples.len(),
        permutations_evaluated: perms * tuples.len() as u128,
        violations,
    })
}

/// Structure constants of the `n`-bracket in the span of the generators.
pub fn extract_constants(rep: &MatrixRep, n: usize) -> Result<MultiAlgebra> {
    if n > 2 && n % 2 == 1 {
        return Err(Error::OddOrderUnsupported(n));
    }
    let vectors: Vec<Vec<Rational>> =
        rep.generators.iter().map(|g| g.as_slice().to_vec()).collect();
    let span = Span::new(&vectors)?;
    let mut tensor = StructureTensor::new(rep.len(), n)?;
    for tuple in increasing_tuples(rep.len(), n) {
        let m = multibracket(rep, &tuple)?;
        if m.is_zero() {
            continue;
        }
        let coords = span.coordinates(m.as_slice()).ok_or_else(|| Error::Closure(tuple.clone()))?;
        for (b, c) in coords.into_iter().enumerate() {
            if !c.is_zero() {
                tensor.insert(&tuple, b, c)?;
            }
        }
    }
    MultiAlgebra::with_default_basis(tensor)
}

/// `Σ_B C_{args}^B T_B`: the bracket of an abstract algebra pushed through
/// the generators of a representation.
pub fn recombine(rep: &MatrixRep, algebra: &MultiAlgebra, args: &[usize]) -> Result<Matrix> {
    let coeffs = algebra.bracket(args)?;
    let mut out = Matrix::zeros(rep.size());
    for (g, c) in rep.generators.iter().zip(&coeffs) {
        if !c.is_zero() {
            out.add_scaled(g, c);
        }
    }
    Ok(out)
}
