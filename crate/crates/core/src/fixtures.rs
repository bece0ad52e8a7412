//! Small named algebras and matrix representations used by the examples,
//! the CLI smoke tests and the acceptance suite.

use crate::matrix::Matrix;
use crate::multialgebra::MultiAlgebra;
use crate::rational::{int, Rational};
use crate::realization::MatrixRep;
use crate::tensor::StructureTensor;

fn levi_civita(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// Inserts `[X_a, Y_b] = ε_{abc} Z_c` for three-element blocks starting at the
/// given offsets.
fn add_epsilon_block(t: &mut StructureTensor, x: usize, y: usize, z: usize) {
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let e = levi_civita(a, b, c);
                if e != 0 && x + a != y + b {
                    t.insert(&[x + a, y + b], z + c, int(e)).expect("fixture indices are valid");
                }
            }
        }
    }
}

fn named(names: &[&str], tensor: StructureTensor) -> MultiAlgebra {
    MultiAlgebra::new(names.iter().map(|s| s.to_string()).collect(), tensor)
        .expect("fixture is well formed")
}

/// `so(3)`: `[J0, J1] = J2`, `[J1, J2] = J0`, `[J2, J0] = J1`.
pub fn so3() -> MultiAlgebra {
    let mut t = StructureTensor::new(3, 2).unwrap();
    add_epsilon_block(&mut t, 0, 0, 0);
    named(&["J0", "J1", "J2"], t)
}

/// Euclidean `iso(3)`: rotations `J0..J2` and commuting translations `P0..P2`.
pub fn iso3() -> MultiAlgebra {
    let mut t = StructureTensor::new(6, 2).unwrap();
    add_epsilon_block(&mut t, 0, 0, 0);
    add_epsilon_block(&mut t, 0, 3, 3);
    named(&["J0", "J1", "J2", "P0", "P1", "P2"], t)
}

/// `so(4)` as a symmetric pair: `[J, J] ⊂ J`, `[J, K] ⊂ K`, `[K, K] ⊂ J`.
pub fn so4() -> MultiAlgebra {
    let mut t = StructureTensor::new(6, 2).unwrap();
    add_epsilon_block(&mut t, 0, 0, 0);
    add_epsilon_block(&mut t, 0, 3, 3);
    add_epsilon_block(&mut t, 3, 3, 0);
    named(&["J0", "J1", "J2", "K0", "K1", "K2"], t)
}

/// Elementary matrices `E_ij` of `gl(n)` in row-major order.
pub fn gl(n: usize) -> MatrixRep {
    let generators = (0..n)
        .flat_map(|i| (0..n).map(move |j| Matrix::unit(n, i, j)))
        .collect();
    MatrixRep::new(generators).expect("elementary matrices are square")
}

/// Adjoint representation of `so(3)`: `(M_a)_{cb} = ε_{abc}`.
pub fn so3_adjoint() -> MatrixRep {
    let generators = (0..3)
        .map(|a| {
            let mut m = Matrix::zeros(3);
            for b in 0..3 {
                for c in 0..3 {
                    m.set(c, b, Rational::from_integer(levi_civita(a, b, c).into()));
                }
            }
            m
        })
        .collect();
    MatrixRep::new(generators).unwrap()
}
