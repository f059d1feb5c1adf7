//! Choosing an epimorphism `Z^2 -> Z_n` under which none of a given set of
//! classes generates, and kernel bases for it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyClass {
    pub a: i64,
    pub b: i64,
}

impl HomologyClass {
    pub const fn new(a: i64, b: i64) -> Self {
        HomologyClass { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("no nonzero classes given")]
    EmptyInput,
    #[error("class {index} = ({}, {}) has zero first coordinate; change basis first", class.a, class.b)]
    ZeroFirstCoordinate { index: usize, class: HomologyClass },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassImage {
    pub class: HomologyClass,
    /// `|2m a - b|`.
    pub c: BigInt,
    /// Image in `Z_n`, in `[0, n)`.
    pub image: BigInt,
    pub gcd: BigInt,
}

/// `phi(a, b) = (2m a - b) mod n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyPlan {
    pub classes: Vec<HomologyClass>,
    pub discarded_zero: usize,
    pub m: BigInt,
    pub n: BigInt,
    pub images: Vec<ClassImage>,
}

impl HomologyPlan {
    pub fn phi_integer(&self, class: HomologyClass) -> BigInt {
        phi_integer(&self.m, class)
    }

    pub fn phi(&self, class: HomologyClass) -> BigInt {
        self.phi_integer(class).mod_floor(&self.n)
    }

    /// A class mapping to 1, showing that `phi` is onto.
    pub fn unit_preimage(&self) -> (BigInt, BigInt) {
        (BigInt::one(), BigInt::from(2) * &self.m - 1)
    }
}

fn phi_integer(m: &BigInt, class: HomologyClass) -> BigInt {
    BigInt::from(2) * m * class.a - class.b
}

pub fn build_plan(classes: &[HomologyClass]) -> Result<HomologyPlan, HomologyError> {
    let kept: Vec<HomologyClass> = classes.iter().copied().filter(|c| !c.is_zero()).collect();
    if kept.is_empty() {
        return Err(HomologyError::EmptyInput);
    }
    if let Some((index, class)) = classes.iter().enumerate().find(|(_, c)| !c.is_zero() && c.a == 0) {
        return Err(HomologyError::ZeroFirstCoordinate { index, class: *class });
    }
    let max_b = kept.iter().map(|c| BigInt::from(c.b).abs()).max().unwrap_or_default();
    let m = max_b + 2;
    let cs: Vec<BigInt> = kept.iter().map(|c| phi_integer(&m, *c).abs()).collect();
    let n = cs.iter().fold(BigInt::one(), |acc, c| acc * c);
    let images = kept
        .iter()
        .zip(cs)
        .map(|(class, c)| {
            let image = phi_integer(&m, *class).mod_floor(&n);
            let gcd = image.gcd(&n);
            ClassImage { class: *class, c, image, gcd }
        })
        .collect();
    let discarded_zero = classes.len() - kept.len();
    Ok(HomologyPlan { classes: kept, discarded_zero, m, n, images })
}

/// `{(1, 2m + k n), (0, n)}`: a basis of the kernel of `phi`. Larger `k`
/// gives a longer first vector.
pub fn kernel_basis(plan: &HomologyPlan, k: u64) -> [(BigInt, BigInt); 2] {
    let first = (BigInt::one(), BigInt::from(2) * &plan.m + BigInt::from(k) * &plan.n);
    let second = (BigInt::zero(), plan.n.clone());
    [first, second]
}

/// A unimodular change of coordinates after which every class has nonzero
/// first coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    /// Rows act on column vectors `(a, b)`.
    pub matrix: [[i64; 2]; 2],
    pub classes: Vec<HomologyClass>,
}

impl BasisChange {
    pub fn is_identity(&self) -> bool {
        self.matrix == [[1, 0], [0, 1]]
    }
}

fn apply(matrix: [[i64; 2]; 2], c: HomologyClass) -> Option<HomologyClass> {
    let row = |r: [i64; 2]| i64::try_from(r[0] as i128 * c.a as i128 + r[1] as i128 * c.b as i128).ok();
    Some(HomologyClass { a: row(matrix[0])?, b: row(matrix[1])? })
}

/// Tries `[[1, k], [0, 1]]` and then `[[k, 1], [1, 0]]` for `k = 0, 1, 2, ...`.
/// Zero classes are dropped first.
pub fn change_basis(classes: &[HomologyClass]) -> BasisChange {
    let nonzero: Vec<HomologyClass> = classes.iter().copied().filter(|c| !c.is_zero()).collect();
    for k in 0i64.. {
        for matrix in [[[1, k], [0, 1]], [[k, 1], [1, 0]]] {
            let moved: Option<Vec<HomologyClass>> = nonzero.iter().map(|&c| apply(matrix, c)).collect();
            if let Some(moved) = moved {
                if moved.iter().all(|c| c.a != 0) {
                    return BasisChange { matrix, classes: moved };
                }
            }
        }
    }
    unreachable!("each class rules out at most one shear")
}
