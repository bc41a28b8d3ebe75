use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::normal_form::{smith_normal_form, SmithDecomposition};
use super::IntMatrix;
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^r ⊕ Z/d1 ⊕ … ⊕ Z/dk` in canonical
/// form: every `d_i ≥ 2` and `d1 | d2 | … | dk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        Self::from_presentation_diagonal(0, &[order.into()])
    }

    /// Canonicalises an arbitrary list of cyclic orders (zeros meaning `Z`).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let mut d = IntMatrix::zeros(n, n);
        for (i, o) in orders.iter().enumerate() {
            d.set(i, i, o.clone());
        }
        cokernel(&d)
    }

    fn from_presentation_diagonal(extra_free: usize, diagonal: &[BigInt]) -> Self {
        let mut free_rank = extra_free;
        let mut torsion = Vec::new();
        for d in diagonal {
            let d = d.abs();
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                torsion.push(d);
            }
        }
        torsion.sort();
        Self { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }
}

/// Canonical notation: `0`, `Z`, `Z^2 ⊕ Z/2 ⊕ Z/6`.
impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Kernel of an integer matrix as a map `Z^cols → Z^rows`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    pub group: FgAbelianGroup,
    /// Basis vectors as columns (`cols × nullity`).
    pub basis: IntMatrix,
}

pub fn kernel(m: &IntMatrix) -> Kernel {
    kernel_from_smith(m, &smith_normal_form(m))
}

pub(crate) fn kernel_from_smith(m: &IntMatrix, snf: &SmithDecomposition) -> Kernel {
    let rank = snf.rank();
    let basis: Vec<Vec<BigInt>> = (rank..m.cols()).map(|j| snf.v.column(j)).collect();
    Kernel { group: FgAbelianGroup::free(basis.len()), basis: IntMatrix::from_columns(m.cols(), &basis) }
}

/// `Z^rows / m·Z^cols`.
pub fn cokernel(m: &IntMatrix) -> FgAbelianGroup {
    cokernel_from_smith(m, &smith_normal_form(m))
}

pub(crate) fn cokernel_from_smith(m: &IntMatrix, snf: &SmithDecomposition) -> FgAbelianGroup {
    let diag = snf.invariant_factors();
    let nonzero: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_zero()).collect();
    FgAbelianGroup::from_presentation_diagonal(m.rows() - nonzero.len(), &nonzero)
}

/// K-groups of the graph algebra of a vertex matrix `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphKTheory {
    /// `I - Aᵗ`
    pub map: IntMatrix,
    pub smith_diagonal: Vec<BigInt>,
    pub k0: FgAbelianGroup,
    pub k1: FgAbelianGroup,
}

/// `K1 = ker(I - Aᵗ)`, `K0 = coker(I - Aᵗ)`.
pub fn graph_algebra_ktheory(vertex_matrix: &IntMatrix) -> Result<GraphKTheory> {
    if !vertex_matrix.is_square() {
        return Err(Error::NotSquare { rows: vertex_matrix.rows(), cols: vertex_matrix.cols() });
    }
    let map = vertex_matrix.identity_minus_transpose()?;
    let snf = smith_normal_form(&map);
    let k1 = kernel_from_smith(&map, &snf).group;
    let k0 = cokernel_from_smith(&map, &snf);
    Ok(GraphKTheory { smith_diagonal: snf.invariant_factors(), map, k0, k1 })
}
