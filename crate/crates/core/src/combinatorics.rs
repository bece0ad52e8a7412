//! Permutation and antisymmetrization primitives.
//!
//! Index tuples are plain `usize` slices; the canonical storage key for an
//! antisymmetric quantity is the strictly increasing rearrangement of its
//! indices together with the parity of the sorting permutation.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// An ordered list of generator indices.
pub type IndexTuple = Vec<usize>;

/// `(-1)^(inversions)` for a bijection on `0..perm.len()`.
pub fn permutation_parity(perm: &[usize]) -> Result<i32> {
    let m = perm.len();
    let mut seen = vec![false; m];
    for &p in perm {
        if p >= m || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    let mut inversions = 0usize;
    for i in 0..m {
        for j in i + 1..m {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    Ok(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Sign of the permutation that sorts `t`, or `None` if `t` has a repeated
/// entry. Works for any comparable items.
pub fn sort_sign<T: Ord>(t: &mut [T]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && t[j - 1] == t[j] {
            return None;
        }
    }
    Some(sign)
}

/// Strictly increasing rearrangement of `t` and its sorting parity, or `None`
/// when an index repeats (the antisymmetric value is then zero).
pub fn canonical_antisym(t: &[usize]) -> Option<(IndexTuple, i32)> {
    let mut sorted = t.to_vec();
    sort_sign(&mut sorted).map(|sign| (sorted, sign))
}

/// Determinant of a square integer matrix by Bareiss fraction-free elimination.
pub fn integer_determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

/// Generalized Kronecker delta: `det[δ_{lower_i}^{upper_j}]`.
pub fn generalized_delta(upper: &[usize], lower: &[usize]) -> Result<i64> {
    if upper.len() != lower.len() {
        return Err(Error::Shape(format!(
            "generalized delta needs equal lengths, got {} upper and {} lower",
            upper.len(),
            lower.len()
        )));
    }
    let matrix = lower
        .iter()
        .map(|l| upper.iter().map(|u| i128::from(l == u)).collect())
        .collect();
    Ok(integer_determinant(matrix) as i64)
}

/// Contracts the generalized delta against an antisymmetric tensor given by
/// explicit values on (possibly unsorted) index tuples of arity `r`:
/// `result^{i} = Σ_h ε_h^{i} B^{h}`, which equals `r! B^{i}`.
///
/// Tuples absent from the map are zero; a stored value whose permuted
/// partners disagree with antisymmetry is rejected.
pub fn contract_antisym(
    tensor: &BTreeMap<IndexTuple, Rational>,
    r: usize,
) -> Result<BTreeMap<IndexTuple, Rational>> {
    let mut groups: BTreeMap<IndexTuple, Vec<(&IndexTuple, &Rational)>> = BTreeMap::new();
    for (key, value) in tensor {
        if key.len() != r {
            return Err(Error::Arity { expected: r, got: key.len() });
        }
        match canonical_antisym(key) {
            None if !value.is_zero() => return Err(Error::Antisymmetry(key.clone())),
            None => {}
            Some((sorted, _)) => groups.entry(sorted).or_default().push((key, value)),
        }
    }

    let mut out = BTreeMap::new();
    for (sorted, members) in &groups {
        // every stored ordering must agree with sign * B^{sorted}
        let reference = members.iter().find_map(|(key, value)| {
            let (_, sign) = canonical_antisym(key)?;
            Some(if sign > 0 { (*value).clone() } else { -(*value).clone() })
        });
        let reference = reference.unwrap_or_else(Rational::zero);
        for (key, value) in members {
            let (_, sign) = canonical_antisym(key).expect("grouped keys have no repeats");
            let expected = if sign > 0 { reference.clone() } else { -reference.clone() };
            if **value != expected {
                return Err(Error::Antisymmetry(key.to_vec()));
            }
        }
        if !reference.is_zero() && members.len() != factorial_usize(r) {
            return Err(Error::Antisymmetry(sorted.clone()));
        }
        for (upper, _) in members {
            let mut acc = Rational::zero();
            for (lower, value) in members {
                let delta = generalized_delta(upper, lower)?;
                if delta != 0 {
                    acc += *value * Rational::from_integer(delta.into());
                }
            }
            out.insert((*upper).clone(), acc);
        }
    }
    Ok(out)
}

fn factorial_usize(n: usize) -> usize {
    (1..=n).product()
}

/// Calls `f(perm, sign)` for every permutation of `0..m` (Heap's algorithm).
/// Enumeration order is deterministic.
pub fn for_each_permutation(m: usize, mut f: impl FnMut(&[usize], i32)) {
    let mut perm: Vec<usize> = (0..m).collect();
    let mut counters = vec![0usize; m];
    let mut sign = 1;
    f(&perm, sign);
    let mut i = 1;
    while i < m {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            f(&perm, sign);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

/// All strictly increasing `k`-tuples over `0..n`, in lexicographic order.
pub fn increasing_tuples(n: usize, k: usize) -> IncreasingTuples {
    IncreasingTuples {
        n,
        current: if k <= n { Some((0..k).collect()) } else { None },
    }
}

pub struct IncreasingTuples {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for IncreasingTuples {
    type Item = IndexTuple;

    fn next(&mut self) -> Option<IndexTuple> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
