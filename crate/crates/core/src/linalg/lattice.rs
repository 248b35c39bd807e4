//! Integer lattices: column Hermite normal form, integer kernels and saturation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::RatMatrix;
use super::rational::Rational;

/// Dense integer matrix used internally by the lattice routines.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        IntMat { rows: n, cols: n, data }
    }

    fn from_rat(m: &RatMatrix) -> Option<Self> {
        let data = m.entries().iter().map(Rational::to_integer).collect::<Option<Vec<_>>>()?;
        Some(IntMat { rows: m.rows(), cols: m.cols(), data })
    }

    fn to_rat(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| Rational::from_bigint(self.at(i, j).clone()))
    }

    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn col_negate(&mut self, a: usize) {
        for i in 0..self.rows {
            let k = i * self.cols + a;
            self.data[k] = -&self.data[k];
        }
    }

    /// `col[dst] -= q * col[src]`
    fn col_axpy(&mut self, dst: usize, q: &BigInt, src: usize) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src] * q;
            let k = i * self.cols + dst;
            self.data[k] -= s;
        }
    }

    /// Replaces columns `(a, b)` with `(a, b) * [[p, -v], [q, u]]`, a
    /// unimodular transform when `p*u + q*v = 1`.
    fn col_combine(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, u: &BigInt, v: &BigInt) {
        for i in 0..self.rows {
            let ka = i * self.cols + a;
            let kb = i * self.cols + b;
            let (x, y) = (self.data[ka].clone(), self.data[kb].clone());
            self.data[ka] = &x * p + &y * q;
            self.data[kb] = &y * u - &x * v;
        }
    }

    fn select_columns(&self, cols: impl Iterator<Item = usize>) -> IntMat {
        let cols: Vec<usize> = cols.collect();
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in &cols {
                data.push(self.at(i, j).clone());
            }
        }
        IntMat { rows: self.rows, cols: cols.len(), data }
    }
}

/// Column Hermite normal form by unimodular column operations.
///
/// Returns `(h, u, rank)` with `a * u = h`. The first `rank` columns of `h`
/// are in echelon form (strictly increasing pivot rows, positive pivots,
/// entries left of each pivot reduced into `[0, pivot)`); the remaining
/// columns are zero.
fn column_hnf(a: &IntMat) -> (IntMat, IntMat, usize) {
    let mut h = a.clone();
    let mut u = IntMat::identity(a.cols);
    let mut c = 0;
    for row in 0..h.rows {
        if c == h.cols {
            break;
        }
        // fold every entry of this row (columns c..) into column c via gcd steps
        for j in c + 1..h.cols {
            if h.at(row, j).is_zero() {
                continue;
            }
            if h.at(row, c).is_zero() {
                h.col_swap(c, j);
                u.col_swap(c, j);
                continue;
            }
            let (x, y) = (h.at(row, c).clone(), h.at(row, j).clone());
            let e = x.extended_gcd(&y);
            // x*e.x + y*e.y = g; new col c gets g, new col j gets 0
            let (p, q) = (e.x, e.y);
            let (uu, vv) = (&x / &e.gcd, &y / &e.gcd);
            h.col_combine(c, j, &p, &q, &uu, &vv);
            u.col_combine(c, j, &p, &q, &uu, &vv);
        }
        if h.at(row, c).is_zero() {
            continue;
        }
        if h.at(row, c).is_negative() {
            h.col_negate(c);
            u.col_negate(c);
        }
        let pivot = h.at(row, c).clone();
        for l in 0..c {
            let q = h.at(row, l).div_floor(&pivot);
            h.col_axpy(l, &q, c);
            u.col_axpy(l, &q, c);
        }
        c += 1;
    }
    (h, u, c)
}

/// A basis (as columns, in column Hermite normal form) of the integer vectors
/// `x` with `m * x = 0`. Returns `None` if `m` has non-integer entries.
///
/// The result is always saturated: if `k*x` is in the kernel for some
/// nonzero integer `k`, so is `x`.
pub fn integer_kernel(m: &RatMatrix) -> Option<RatMatrix> {
    let a = IntMat::from_rat(m)?;
    let (_, u, rank) = column_hnf(&a);
    let k = u.select_columns(rank..a.cols);
    Some(IntLattice::from_generators(&k.to_rat()).expect("integral").basis)
}

/// A sublattice of `Z^n`, stored by a basis in column Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntLattice {
    ambient_dim: usize,
    basis: RatMatrix,
}

impl IntLattice {
    /// The lattice generated by the (integer) columns of `gens`; `None` if an
    /// entry is not integral.
    pub fn from_generators(gens: &RatMatrix) -> Option<Self> {
        let a = IntMat::from_rat(gens)?;
        let (h, _, rank) = column_hnf(&a);
        let basis = h.select_columns(0..rank).to_rat();
        Some(IntLattice { ambient_dim: gens.rows(), basis })
    }

    pub fn full(n: usize) -> Self {
        IntLattice { ambient_dim: n, basis: RatMatrix::identity(n) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    /// `span_Q(self) ∩ Z^n`.
    pub fn saturate(&self) -> IntLattice {
        // integer vectors annihilating the lattice, then their common kernel
        let annihilator =
            RatMatrix::from_columns(self.ambient_dim, &primitive_columns(&self.basis.transpose().nullspace_matrix()))
                .transpose();
        let basis = integer_kernel(&annihilator).expect("primitive columns are integral");
        IntLattice { ambient_dim: self.ambient_dim, basis }
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate() == *self
    }

    /// Whether every integer vector in the lattice spanned by `other` lies in `self`.
    pub fn contains(&self, other: &IntLattice) -> bool {
        if other.ambient_dim != self.ambient_dim {
            return false;
        }
        let joined = self.basis.hstack(&other.basis).expect("same ambient");
        IntLattice::from_generators(&joined).as_ref() == Some(self)
    }

    /// `[self.saturate() : self]`, the order of the torsion in `Z^n / self`.
    pub fn saturation_index(&self) -> BigInt {
        let sat = self.saturate();
        // both bases are HNF with the same pivot rows; the index is the ratio
        // of pivot products
        let pivot_product = |m: &RatMatrix| {
            let mut p = BigInt::one();
            let mut row = 0;
            for j in 0..m.cols() {
                while m[(row, j)].is_zero() {
                    row += 1;
                }
                p *= m[(row, j)].numer();
            }
            p
        };
        pivot_product(&self.basis) / pivot_product(&sat.basis)
    }
}

/// Scales each column of a rational matrix to a primitive integer vector.
pub fn primitive_columns(m: &RatMatrix) -> Vec<Vec<Rational>> {
    (0..m.cols())
        .map(|j| {
            let col = m.column(j);
            let mut lcm = BigInt::one();
            for x in &col {
                lcm = lcm.lcm(&x.denom());
            }
            let ints: Vec<BigInt> = col.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
            let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            ints.into_iter().map(|x| Rational::from_bigint(if g.is_zero() { x } else { x / &g })).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64(rows)
    }

    fn lattice(cols: &[&[i64]]) -> IntLattice {
        let n = cols[0].len();
        let cols: Vec<Vec<Rational>> =
            cols.iter().map(|c| c.iter().map(|&x| Rational::from_integer(x)).collect()).collect();
        IntLattice::from_generators(&RatMatrix::from_columns(n, &cols)).unwrap()
    }

    #[test]
    fn saturate_examples() {
        // gcd(2) = 2, so 2Z saturates to Z
        assert_eq!(lattice(&[&[2]]).saturate(), IntLattice::full(1));
        assert_eq!(IntLattice::full(3).saturate(), IntLattice::full(3));
        // content of (2,4) is 2
        assert_eq!(lattice(&[&[2, 4]]).saturate(), lattice(&[&[1, 2]]));
        assert_eq!(lattice(&[&[2, 4]]).saturation_index(), BigInt::from(2));
    }

    #[test]
    fn hnf_is_canonical() {
        // same lattice from different generators
        let a = lattice(&[&[2, 0], &[0, 3], &[2, 3]]);
        let b = lattice(&[&[2, 3], &[0, 3]]);
        assert_eq!(a, b);
        assert_eq!(a.rank(), 2);
        // columns: pivots positive, entries left of a pivot reduced
        assert_eq!(a.basis(), &m(&[&[2, 0], &[0, 3]]));
    }

    #[test]
    fn integer_kernel_examples() {
        // -2a + b = 0 -> (1, 2)
        assert_eq!(integer_kernel(&m(&[&[-2, 1]])).unwrap(), m(&[&[1], &[2]]));
        assert_eq!(integer_kernel(&RatMatrix::zeros(0, 2)).unwrap(), RatMatrix::identity(2));
        assert_eq!(integer_kernel(&m(&[&[2]])).unwrap().shape(), (1, 0));
        let half = RatMatrix::from_fn(1, 1, |_, _| Rational::new(1, 2));
        assert!(integer_kernel(&half).is_none());
    }

    #[test]
    fn contains_and_saturation() {
        let l = lattice(&[&[2, 0], &[0, 2]]);
        assert!(IntLattice::full(2).contains(&l));
        assert!(!l.contains(&IntLattice::full(2)));
        assert!(!l.is_saturated());
        assert_eq!(l.saturation_index(), BigInt::from(4));
    }

    use proptest::prelude::*;

    fn int_matrix(rows: usize, max_cols: usize) -> impl Strategy<Value = RatMatrix> {
        (0..=max_cols).prop_flat_map(move |c| {
            proptest::collection::vec(-6i64..=6, rows * c)
                .prop_map(move |v| RatMatrix::from_fn(rows, c, |i, j| Rational::from_integer(v[i * c + j])))
        })
    }

    proptest! {
        #[test]
        fn saturate_is_idempotent_and_inflationary(g in int_matrix(3, 4)) {
            let l = IntLattice::from_generators(&g).unwrap();
            let s = l.saturate();
            prop_assert_eq!(s.saturate(), s.clone());
            prop_assert!(s.contains(&l));
            prop_assert_eq!(s.rank(), l.rank());
        }

        #[test]
        fn integer_kernel_is_a_saturated_kernel(a in int_matrix(2, 4)) {
            let k = integer_kernel(&a).unwrap();
            prop_assert!(a.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.cols() + a.rank(), a.cols());
            let l = IntLattice::from_generators(&k).unwrap();
            prop_assert!(l.is_saturated());
        }
    }
}
