//! S-expanded multialgebras on the pair basis `T_(A,α) = λ_α T_A`, and their
//! 0_S-reductions.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multialgebra::MultiAlgebra;
use crate::semigroup::Semigroup;
use crate::tensor::StructureTensor;

/// Flat encoding of pairs `(A, α) ↔ A·M + α`, keeping the `M` copies of each
/// base generator contiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairBasis {
    pub base_dim: usize,
    pub semigroup_order: usize,
}

impl PairBasis {
    pub fn len(&self) -> usize {
        self.base_dim * self.semigroup_order
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn encode(&self, generator: usize, element: usize) -> usize {
        generator * self.semigroup_order + element
    }

    pub fn decode(&self, flat: usize) -> (usize, usize) {
        (flat / self.semigroup_order, flat % self.semigroup_order)
    }

    /// Every pair in flat order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).map(|f| self.decode(f)).collect()
    }
}

/// An expanded algebra, or a subalgebra/reduction of one. Generator `i` of
/// `algebra` is the pair `pairs[i]`; `pairs` is sorted by flat encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedAlgebra {
    algebra: MultiAlgebra,
    semigroup: Semigroup,
    pairing: PairBasis,
    pairs: Vec<(usize, usize)>,
}

impl ExpandedAlgebra {
    /// Reassembles an expanded algebra from its parts, e.g. after loading it
    /// from a file.
    pub fn from_parts(
        algebra: MultiAlgebra,
        semigroup: Semigroup,
        pairing: PairBasis,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if pairing.semigroup_order != semigroup.order() {
            return Err(Error::Shape(format!(
                "pairing declares {} semigroup elements, semigroup has {}",
                pairing.semigroup_order,
                semigroup.order()
            )));
        }
        if pairs.len() != algebra.dim() {
            return Err(Error::Shape(format!(
                "{} pairs for an algebra of dimension {}",
                pairs.len(),
                algebra.dim()
            )));
        }
        let flat: Vec<usize> = pairs
            .iter()
            .map(|&(a, s)| {
                if a >= pairing.base_dim || s >= pairing.semigroup_order {
                    Err(Error::Shape(format!("pair ({a}, {s}) outside the pairing")))
                } else {
                    Ok(pairing.encode(a, s))
                }
            })
            .collect::<Result<_>>()?;
        if flat.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Shape("pairs must be strictly increasing in flat order".into()));
        }
        Ok(Self { algebra, semigroup, pairing, pairs })
    }

    pub fn algebra(&self) -> &MultiAlgebra {
        &self.algebra
    }

    pub fn into_algebra(self) -> MultiAlgebra {
        self.algebra
    }

    pub fn semigroup(&self) -> &Semigroup {
        &self.semigroup
    }

    pub fn pairing(&self) -> PairBasis {
        self.pairing
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// True when the basis is every pair of the product.
    pub fn is_full(&self) -> bool {
        self.pairs.len() == self.pairing.len()
    }

    /// Position of a pair in this algebra's basis.
    pub fn index_of(&self, generator: usize, element: usize) -> Option<usize> {
        self.pairs.binary_search(&(generator, element)).ok()
    }

    /// Keeps the generators at the given (strictly increasing) positions.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let algebra = self.algebra.restrict(keep)?;
        let pairs = keep.iter().map(|&i| self.pairs[i]).collect();
        Ok(Self {
            algebra,
            semigroup: self.semigroup.clone(),
            pairing: self.pairing,
            pairs,
        })
    }
}

fn pair_name(base: &MultiAlgebra, s: &Semigroup, (a, alpha): (usize, usize)) -> String {
    format!("{}*{}", s.label(alpha), base.basis()[a])
}

/// Calls `f` with every tuple in `0..m` of length `k`, lexicographically.
fn for_each_tuple(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if m == 0 {
        return;
    }
    let mut t = vec![0usize; k];
    loop {
        f(&t);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < m {
                break;
            }
            t[i] = 0;
        }
    }
}

/// `C_{(A1,α1)...(An,αn)}^{(C,γ)} = K_{α1...αn}^γ C_{A1...An}^C`.
pub fn s_expand(base: &MultiAlgebra, s: &Semigroup) -> ExpandedAlgebra {
    let pairing = PairBasis { base_dim: base.dim(), semigroup_order: s.order() };
    let n = base.order();
    let mut tensor = StructureTensor::new(pairing.len(), n).expect("order carried over from base");
    let mut lower = vec![0usize; n];
    for (base_lower, c, value) in base.tensor().entries() {
        for_each_tuple(s.order(), n, |alphas| {
            let gamma = alphas[1..].iter().fold(alphas[0], |acc, &b| s.mul(acc, b));
            for (slot, (&a, &alpha)) in base_lower.iter().zip(alphas).enumerate() {
                lower[slot] = pairing.encode(a, alpha);
            }
            // base_lower is strictly increasing, so the encoded tuple is too
            tensor
                .insert(&lower, pairing.encode(c, gamma), value.clone())
                .expect("pair indices in range");
        });
    }
    let pairs = pairing.pairs();
    let basis = pairs.iter().map(|&p| pair_name(base, s, p)).collect();
    let algebra = MultiAlgebra::new(basis, tensor).expect("expanded algebra keeps base order");
    ExpandedAlgebra { algebra, semigroup: s.clone(), pairing, pairs }
}

/// Imposes `0_S T_A = 0`: drops every pair `(A, 0_S)` and every constant
/// landing on one.
pub fn zero_reduce(e: &ExpandedAlgebra) -> Result<ExpandedAlgebra> {
    let zero = e.semigroup.zero_element().ok_or(Error::NoZeroElement)?;
    let keep: Vec<usize> = e
        .pairs
        .iter()
        .enumerate()
        .filter(|(_, &(_, alpha))| alpha != zero)
        .map(|(i, _)| i)
        .collect();
    e.restrict(&keep)
}

/// Checks `C = K·C_base` on every constant, stored or not: each pair-index
/// tuple of the expanded algebra is compared with the selector formula.
pub fn matches_selector_formula(e: &ExpandedAlgebra, base: &MultiAlgebra) -> bool {
    let s = &e.semigroup;
    let n = base.order();
    let dim = e.algebra.dim();
    crate::combinatorics::increasing_tuples(dim, n).all(|tuple| {
        let base_lower: Vec<usize> = tuple.iter().map(|&i| e.pairs[i].0).collect();
        let alphas: Vec<usize> = tuple.iter().map(|&i| e.pairs[i].1).collect();
        let gamma = alphas[1..].iter().fold(alphas[0], |acc, &b| s.mul(acc, b));
        (0..dim).all(|target| {
            let (c, g) = e.pairs[target];
            let expected = if g == gamma { base.tensor().get(&base_lower, c) } else { Zero::zero() };
            e.algebra.tensor().get(&tuple, target) == expected
        })
    })
}
