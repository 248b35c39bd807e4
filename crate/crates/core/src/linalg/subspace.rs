//! Subspaces of `Q^n` in a canonical form.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{MatrixError, RatMatrix};

/// A linear subspace of `Q^ambient_dim`.
///
/// The basis is kept in reduced column echelon form (the transpose of the
/// RREF of the spanning vectors, with zero rows dropped), so two subspaces
/// are equal iff their stored bases are identical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RatMatrix,
    /// Pivot row of each basis column.
    pivots: Vec<usize>,
}

impl Subspace {
    /// The span of the columns of `m`.
    pub fn span(m: &RatMatrix) -> Self {
        let rref = m.transpose().rref();
        let k = rref.rank();
        let basis = RatMatrix::from_fn(m.rows(), k, |i, j| rref.matrix[(j, i)].clone());
        Subspace { ambient_dim: m.rows(), basis, pivots: rref.pivots }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: RatMatrix::zeros(n, 0), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: RatMatrix::identity(n), pivots: (0..n).collect() }
    }

    /// Nullspace of `m`, as a subspace of `Q^{cols(m)}`.
    pub fn kernel_of(m: &RatMatrix) -> Self {
        Self::span(&m.nullspace_matrix())
    }

    /// Column space of `m`, as a subspace of `Q^{rows(m)}`.
    pub fn image_of(m: &RatMatrix) -> Self {
        Self::span(m)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), MatrixError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(MatrixError::DimensionMismatch(format!(
                "subspaces of Q^{} and Q^{}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    /// Non-pivot coordinates; the matching standard basis vectors span a
    /// complement.
    fn free_coordinates(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|i| !self.pivots.contains(i)).collect()
    }

    /// Standard basis vectors spanning a complement, as columns.
    pub fn complement_basis(&self) -> RatMatrix {
        let free = self.free_coordinates();
        RatMatrix::identity(self.ambient_dim).select_columns(&free)
    }

    /// The surjection `Q^n -> Q^{n-k}` with kernel exactly this subspace,
    /// reading off coordinates along `complement_basis` after removing the
    /// subspace component.
    pub fn quotient_map(&self) -> RatMatrix {
        let free = self.free_coordinates();
        let mut q = RatMatrix::zeros(free.len(), self.ambient_dim);
        for (r, &j) in free.iter().enumerate() {
            q[(r, j)] = super::Rational::one();
            for (i, &p) in self.pivots.iter().enumerate() {
                q[(r, p)] = -&self.basis[(j, i)];
            }
        }
        q
    }

    pub fn contains_vector(&self, v: &[super::Rational]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let col = RatMatrix::from_columns(self.ambient_dim, &[v.to_vec()]);
        self.quotient_map().mul(&col).expect("shapes agree").is_zero()
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, MatrixError> {
        self.check_ambient(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(self.quotient_map().mul(&other.basis)?.is_zero())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, MatrixError> {
        self.check_ambient(other)?;
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        let stacked = self.quotient_map().vstack(&other.quotient_map())?;
        Ok(Subspace::kernel_of(&stacked))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, MatrixError> {
        self.check_ambient(other)?;
        Ok(Subspace::span(&self.basis.hstack(&other.basis)?))
    }

    /// `{x : map * x in self}`, a subspace of `Q^{cols(map)}`.
    pub fn preimage(&self, map: &RatMatrix) -> Result<Subspace, MatrixError> {
        if map.rows() != self.ambient_dim {
            return Err(MatrixError::DimensionMismatch(format!(
                "preimage under a {}x{} map of a subspace of Q^{}",
                map.rows(),
                map.cols(),
                self.ambient_dim
            )));
        }
        if self.is_full() {
            return Ok(Subspace::full(map.cols()));
        }
        Ok(Subspace::kernel_of(&self.quotient_map().mul(map)?))
    }

    /// `map(self)`, a subspace of `Q^{rows(map)}`.
    pub fn pushforward(&self, map: &RatMatrix) -> Result<Subspace, MatrixError> {
        Ok(Subspace::span(&map.mul(&self.basis)?))
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

/// Any spanning matrix is accepted and canonicalized.
impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Subspace::span(&RatMatrix::deserialize(d)?))
    }
}
