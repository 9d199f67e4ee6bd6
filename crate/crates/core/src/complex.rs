//! Bounded chain complexes of free Z-modules.
//!
//! Boundary matrices are stored as sparse triplet lists (bar complexes of
//! order-8 groups already have thousands of columns); they are densified only
//! where the SNF engine needs them. Homology generators are fixed by the SNF
//! change-of-basis matrices, so cycle classes are reproducible across runs.

use crate::abgroup::FgAbelianGroup;
use crate::matrix::{snf_with, IntMatrix, SnfWant, Solver};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::sync::OnceLock;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("degree {degree} out of range [{min}, {max}]")]
    DegreeOutOfRange { degree: isize, min: isize, max: isize },
    #[error("boundary∘boundary ≠ 0 between degrees {degree} and {}", degree - 2)]
    NotAComplex { degree: isize },
    #[error("vector has length {got}, basis has size {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("vector is not a cycle")]
    NotACycle,
}

/// Sparse integer matrix in compressed-column form.
#[derive(Clone, Debug)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<i64>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> SparseMat {
        SparseMat { rows, cols, col_ptr: vec![0; cols + 1], row_idx: vec![], vals: vec![] }
    }

    /// Duplicate (row, col) entries are summed; zeros are dropped.
    pub fn from_triplets(rows: usize, cols: usize, trips: &[(usize, usize, i64)]) -> SparseMat {
        let mut sorted: Vec<(usize, usize, i64)> = trips.to_vec();
        sorted.sort_by_key(|&(r, c, _)| (c, r));
        let mut col_ptr = vec![0usize; cols + 1];
        let mut row_idx = Vec::with_capacity(sorted.len());
        let mut vals: Vec<i64> = Vec::with_capacity(sorted.len());
        let mut i = 0;
        while i < sorted.len() {
            let (r, c, mut v) = sorted[i];
            assert!(r < rows && c < cols, "triplet out of bounds");
            i += 1;
            while i < sorted.len() && sorted[i].0 == r && sorted[i].1 == c {
                v = v.checked_add(sorted[i].2).expect("coefficient overflow");
                i += 1;
            }
            if v != 0 {
                col_ptr[c + 1] += 1;
                row_idx.push(r as u32);
                vals.push(v);
            }
        }
        for c in 0..cols {
            col_ptr[c + 1] += col_ptr[c];
        }
        SparseMat { rows, cols, col_ptr, row_idx, vals }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn col(&self, j: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let lo = self.col_ptr[j];
        let hi = self.col_ptr[j + 1];
        self.row_idx[lo..hi].iter().zip(&self.vals[lo..hi]).map(|(&r, &v)| (r as usize, v))
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            for (i, v) in self.col(j) {
                m.set(i, j, v);
            }
        }
        m
    }

    /// y = M·x for a dense integer x (exact, i128 accumulation).
    pub fn apply(&self, x: &[i64]) -> Vec<i128> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0i128; self.rows];
        for j in 0..self.cols {
            if x[j] == 0 {
                continue;
            }
            for (i, v) in self.col(j) {
                y[i] += v as i128 * x[j] as i128;
            }
        }
        y
    }
}

#[derive(Debug)]
pub struct ChainComplex {
    min_degree: isize,
    basis_sizes: Vec<usize>,
    /// boundaries[i] maps degree min+i+1 → min+i.
    boundaries: Vec<SparseMat>,
}

impl ChainComplex {
    /// `boundaries[i]` must map degree `min_degree+i+1` to `min_degree+i`;
    /// the composite of consecutive boundaries is checked to vanish.
    pub fn new(
        min_degree: isize,
        basis_sizes: Vec<usize>,
        boundaries: Vec<SparseMat>,
    ) -> Result<ChainComplex, ComplexError> {
        assert!(!basis_sizes.is_empty(), "complex needs at least one degree");
        assert_eq!(boundaries.len(), basis_sizes.len() - 1, "one boundary per adjacent pair");
        for (i, b) in boundaries.iter().enumerate() {
            assert_eq!(b.rows(), basis_sizes[i], "boundary {} row count", i);
            assert_eq!(b.cols(), basis_sizes[i + 1], "boundary {} col count", i);
        }
        for i in 0..boundaries.len().saturating_sub(1) {
            let lower = &boundaries[i];
            let upper = &boundaries[i + 1];
            for j in 0..upper.cols() {
                let mut acc = vec![0i128; lower.rows()];
                for (k, v) in upper.col(j) {
                    for (r, w) in lower.col(k) {
                        acc[r] += v as i128 * w as i128;
                    }
                }
                if acc.iter().any(|&x| x != 0) {
                    return Err(ComplexError::NotAComplex {
                        degree: min_degree + i as isize + 2,
                    });
                }
            }
        }
        Ok(ChainComplex { min_degree, basis_sizes, boundaries })
    }

    pub fn min_degree(&self) -> isize {
        self.min_degree
    }

    pub fn max_degree(&self) -> isize {
        self.min_degree + self.basis_sizes.len() as isize - 1
    }

    pub fn basis_size(&self, n: isize) -> Result<usize, ComplexError> {
        self.check_range(n)?;
        Ok(self.basis_sizes[(n - self.min_degree) as usize])
    }

    fn check_range(&self, n: isize) -> Result<(), ComplexError> {
        if n < self.min_degree || n > self.max_degree() {
            return Err(ComplexError::DegreeOutOfRange {
                degree: n,
                min: self.min_degree,
                max: self.max_degree(),
            });
        }
        Ok(())
    }

    /// The boundary out of degree n (zero-column map at the bottom).
    pub fn boundary_from(&self, n: isize) -> Result<SparseMat, ComplexError> {
        self.check_range(n)?;
        let i = (n - self.min_degree) as usize;
        if i == 0 {
            Ok(SparseMat::zero(0, self.basis_sizes[0]))
        } else {
            Ok(self.boundaries[i - 1].clone())
        }
    }

    /// H_n as an abstract group. Boundaries beyond the stored range are zero.
    pub fn homology(&self, n: isize) -> Result<FgAbelianGroup, ComplexError> {
        Ok(self.resolution(n)?.group().clone())
    }

    /// Homology at degree n with the change-of-basis data needed to resolve
    /// classes of explicit cycles. Deterministic for a fixed complex.
    pub fn resolution(&self, n: isize) -> Result<HomologyResolution, ComplexError> {
        self.check_range(n)?;
        let i = (n - self.min_degree) as usize;
        let cn = self.basis_sizes[i];

        let d_n = if i == 0 { IntMatrix::zeros(0, cn) } else { self.boundaries[i - 1].to_dense() };
        let snf = snf_with(&d_n, SnfWant { v: true, v_inv: true, ..SnfWant::default() });
        let rank = snf.rank;
        let kdim = cn - rank;
        let v_inv = snf.v_inv.unwrap();

        let up = if i + 1 < self.basis_sizes.len() {
            self.boundaries[i].clone()
        } else {
            SparseMat::zero(cn, 0)
        };
        // R = (V⁻¹·∂_{n+1}) restricted to the kernel rows: boundaries in
        // kernel-basis coordinates. Built column-by-column from the sparse
        // form so ∂_{n+1} is never densified against V.
        let mut r = IntMatrix::zeros(kdim, up.cols());
        for j in 0..up.cols() {
            let mut w = vec![BigInt::zero(); cn];
            for (row, v) in up.col(j) {
                let vb = BigInt::from(v);
                for t in 0..cn {
                    let e = v_inv.at(t, row);
                    if !e.is_zero() {
                        let add = e * &vb;
                        w[t] += add;
                    }
                }
            }
            debug_assert!(w[..rank].iter().all(|x| x.is_zero()), "∂∂ ≠ 0 leaked");
            for t in 0..kdim {
                if !w[rank + t].is_zero() {
                    r.set(t, j, w[rank + t].clone());
                }
            }
        }
        let group = FgAbelianGroup::from_relations(r);
        Ok(HomologyResolution {
            degree: n,
            group,
            v_inv,
            rank,
            boundary_above: up,
            solver: OnceLock::new(),
        })
    }
}

/// Degree, canonical coordinates in H_n, and the order of the class
/// (None = infinite).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleClass {
    pub degree: isize,
    pub coordinates: Vec<BigInt>,
    pub order: Option<BigInt>,
}

impl CycleClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|c| c.is_zero())
    }
}

pub struct HomologyResolution {
    degree: isize,
    group: FgAbelianGroup,
    v_inv: IntMatrix,
    rank: usize,
    boundary_above: SparseMat,
    solver: OnceLock<Solver>,
}

impl HomologyResolution {
    pub fn degree(&self) -> isize {
        self.degree
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    fn check_len(&self, z: &[BigInt]) -> Result<(), ComplexError> {
        if z.len() != self.v_inv.rows() {
            return Err(ComplexError::DimensionMismatch {
                got: z.len(),
                want: self.v_inv.rows(),
            });
        }
        Ok(())
    }

    /// Kernel-basis coordinates of a cycle, or NotACycle.
    fn kernel_coords(&self, z: &[BigInt]) -> Result<Vec<BigInt>, ComplexError> {
        self.check_len(z)?;
        let w = self.v_inv.mul_vec(z);
        if w[..self.rank].iter().any(|x| !x.is_zero()) {
            return Err(ComplexError::NotACycle);
        }
        Ok(w[self.rank..].to_vec())
    }

    pub fn is_cycle(&self, z: &[BigInt]) -> Result<bool, ComplexError> {
        self.check_len(z)?;
        let w = self.v_inv.mul_vec(z);
        Ok(w[..self.rank].iter().all(|x| x.is_zero()))
    }

    /// Some(witness) with ∂(witness) = z when z is a boundary, else None.
    pub fn boundary_witness(&self, z: &[BigInt]) -> Result<Option<Vec<BigInt>>, ComplexError> {
        self.check_len(z)?;
        let solver =
            self.solver.get_or_init(|| Solver::new(&self.boundary_above.to_dense()));
        Ok(solver.solve(z))
    }

    pub fn class_of(&self, z: &[BigInt]) -> Result<CycleClass, ComplexError> {
        let y = self.kernel_coords(z)?;
        let coordinates = self.group.canonical_coords(&y);
        let order = self.group.canonical_element_order(&coordinates);
        Ok(CycleClass { degree: self.degree, coordinates, order })
    }

    pub fn add(&self, a: &CycleClass, b: &CycleClass) -> CycleClass {
        let raw: Vec<BigInt> =
            a.coordinates.iter().zip(&b.coordinates).map(|(x, y)| x + y).collect();
        self.from_raw_canonical(raw)
    }

    pub fn scale(&self, k: &BigInt, a: &CycleClass) -> CycleClass {
        let raw: Vec<BigInt> = a.coordinates.iter().map(|x| x * k).collect();
        self.from_raw_canonical(raw)
    }

    fn from_raw_canonical(&self, raw: Vec<BigInt>) -> CycleClass {
        let nf = self.group.invariant_factors().len();
        let coordinates: Vec<BigInt> = raw
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i < nf {
                    c.mod_floor(&self.group.invariant_factors()[i])
                } else {
                    c.clone()
                }
            })
            .collect();
        let order = self.group.canonical_element_order(&coordinates);
        CycleClass { degree: self.degree, coordinates, order }
    }
}
