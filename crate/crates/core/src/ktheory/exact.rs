//! Homomorphisms between presented abelian groups and exactness checks.
//!
//! A group is presented as `Z^n / span(R)` where the columns of `R` are the
//! relations. Subgroups are compared as lattices in `Z^n` through their
//! (unique) Hermite normal forms.

use num_bigint::BigInt;

use super::group::{cokernel, kernel, FgAbelianGroup};
use super::normal_form::{hermite_normal_form, smith_normal_form};
use super::IntMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: usize,
    relations: IntMatrix,
}

impl Presentation {
    /// `relations` must have `generators` rows.
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != generators {
            return Err(Error::ShapeMismatch(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.rows()
            )));
        }
        Ok(Self { generators, relations })
    }

    pub fn free(n: usize) -> Self {
        Self { generators: n, relations: IntMatrix::zeros(n, 0) }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn cyclic(order: i64) -> Self {
        Self { generators: 1, relations: IntMatrix::from_rows(&[vec![order]]) }
    }

    /// Standard presentation `Z^r ⊕ ⊕ Z/d_i` of a canonical group.
    pub fn of_group(g: &FgAbelianGroup) -> Self {
        let n = g.free_rank + g.torsion.len();
        let mut r = IntMatrix::zeros(n, g.torsion.len());
        for (j, d) in g.torsion.iter().enumerate() {
            r.set(g.free_rank + j, j, d.clone());
        }
        Self { generators: n, relations: r }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn group(&self) -> FgAbelianGroup {
        cokernel(&self.relations)
    }

    fn same_as(&self, other: &Presentation) -> bool {
        self.generators == other.generators
            && lattice_hnf(&self.relations) == lattice_hnf(&other.relations)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub domain: Presentation,
    pub codomain: Presentation,
    /// `codomain.generators × domain.generators`, acting on generator vectors.
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(domain: Presentation, codomain: Presentation, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.generators || matrix.cols() != domain.generators {
            return Err(Error::ShapeMismatch(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.generators,
                domain.generators
            )));
        }
        Ok(Self { domain, codomain, matrix })
    }

    pub fn zero(domain: Presentation, codomain: Presentation) -> Self {
        let matrix = IntMatrix::zeros(codomain.generators, domain.generators);
        Self { domain, codomain, matrix }
    }

    /// Relations of the domain land in the relation lattice of the codomain.
    pub fn is_well_defined(&self) -> bool {
        let image = &self.matrix * &self.domain.relations;
        lattice_contains(&self.codomain.relations, &image)
    }

    /// Image lattice in `Z^codomain.generators`, including codomain relations.
    fn image_lattice(&self) -> IntMatrix {
        self.matrix.hstack(&self.codomain.relations).expect("rows agree")
    }

    /// Lifted kernel lattice in `Z^domain.generators`, including domain relations.
    fn kernel_lattice(&self) -> IntMatrix {
        let n = self.domain.generators;
        let joint = self.matrix.hstack(&self.codomain.relations).expect("rows agree");
        let k = kernel(&joint).basis;
        let mut cols: Vec<Vec<BigInt>> =
            k.columns().into_iter().map(|c| c[..n].to_vec()).collect();
        cols.extend(self.domain.relations.columns());
        IntMatrix::from_columns(n, &cols)
    }
}

/// Nonzero rows of the HNF of the lattice spanned by the columns of `gens`.
fn lattice_hnf(gens: &IntMatrix) -> IntMatrix {
    let h = hermite_normal_form(&gens.transpose());
    let rank = h.rank();
    let cols = h.h.cols();
    let data = (0..rank).flat_map(|i| h.h.row(i).to_vec()).collect();
    IntMatrix::from_vec(rank, cols, data).expect("shape")
}

fn lattice_contains(outer: &IntMatrix, inner: &IntMatrix) -> bool {
    if inner.cols() == 0 || inner.is_zero() {
        return true;
    }
    let joined = outer.hstack(inner).expect("rows agree");
    lattice_hnf(&joined) == lattice_hnf(outer)
}

fn lattices_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    lattice_hnf(a) == lattice_hnf(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exactness {
    pub exact: bool,
    /// Index `i` of the first homomorphism whose kernel differs from the
    /// image of the one feeding into it (the node is `sequence[i].domain`).
    pub failure_at: Option<usize>,
}

/// Checks `im(h_{i-1}) = ker(h_i)` at every interior node of the chain, and
/// also at the wrap-around node when `cyclic`.
pub fn check_exact(sequence: &[GroupHom], cyclic: bool) -> Result<Exactness> {
    for (i, h) in sequence.iter().enumerate() {
        if !h.is_well_defined() {
            return Err(Error::IllDefinedHom(i));
        }
    }
    let n = sequence.len();
    let links: Vec<(usize, usize)> = if cyclic && n > 0 {
        (0..n).map(|i| ((i + n - 1) % n, i)).collect()
    } else {
        (1..n).map(|i| (i - 1, i)).collect()
    };
    for &(a, b) in &links {
        if !sequence[a].codomain.same_as(&sequence[b].domain) {
            return Err(Error::NonComposableHoms(a, b));
        }
    }
    let mut nodes: Vec<(usize, usize)> = links;
    nodes.sort_by_key(|&(_, b)| b);
    for (a, b) in nodes {
        let image = sequence[a].image_lattice();
        let ker = sequence[b].kernel_lattice();
        if !lattices_equal(&image, &ker) {
            return Ok(Exactness { exact: false, failure_at: Some(b) });
        }
    }
    Ok(Exactness { exact: true, failure_at: None })
}

/// `Z^cols →(m) Z^rows → coker(m) → 0`, with the cokernel presented in
/// Smith form and the quotient map given by the left transform.
pub fn cokernel_sequence(m: &IntMatrix) -> Vec<GroupHom> {
    let snf = smith_normal_form(m);
    let rows = m.rows();
    let mut rel = IntMatrix::zeros(rows, rows);
    for (i, d) in snf.d.diagonal().into_iter().enumerate() {
        rel.set(i, i, d);
    }
    let coker = Presentation { generators: rows, relations: rel };
    let first = GroupHom { domain: Presentation::free(m.cols()), codomain: Presentation::free(rows), matrix: m.clone() };
    let quotient = GroupHom { domain: Presentation::free(rows), codomain: coker.clone(), matrix: snf.u };
    let last = GroupHom::zero(coker, Presentation::zero());
    vec![first, quotient, last]
}

impl Default for Presentation {
    fn default() -> Self {
        Self::zero()
    }
}
