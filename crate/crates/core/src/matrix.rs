//! Dense arbitrary-precision integer matrices and Smith normal form.
//!
//! Everything downstream (canonical forms of abelian groups, homology,
//! kernels of presented maps) reduces to the SNF engine here. The engine is
//! fraction-free: only integer row/column operations are ever applied, so
//! results are exact by construction. Pivot selection is smallest magnitude
//! with ties broken by lowest (row, col), which makes every output
//! deterministic for a fixed input.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>, // row-major
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<I: Into<BigInt> + Clone>(rows: &[Vec<I>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for e in row {
                data.push(e.clone().into());
            }
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn diagonal<I: Into<BigInt> + Clone>(rows: usize, cols: usize, diag: &[I]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            assert!(i < rows && i < cols);
            m.data[i * cols + i] = d.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set<I: Into<BigInt>>(&mut self, r: usize, c: usize, v: I) {
        self.data[r * self.cols + c] = v.into();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| -e).collect(),
        }
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    /// Columns side by side: [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack: row mismatch");
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols { self.at(r, c).clone() } else { other.at(r, c - self.cols).clone() }
        })
    }

    /// Rows stacked: [self; other].
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack: col mismatch");
        IntMatrix::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows { self.at(r, c).clone() } else { other.at(r - self.rows, c).clone() }
        })
    }

    pub fn row_range(&self, lo: usize, hi: usize) -> IntMatrix {
        assert!(lo <= hi && hi <= self.rows);
        IntMatrix::from_fn(hi - lo, self.cols, |r, c| self.at(lo + r, c).clone())
    }

    pub fn col_range(&self, lo: usize, hi: usize) -> IntMatrix {
        assert!(lo <= hi && hi <= self.cols);
        IntMatrix::from_fn(self.rows, hi - lo, |r, c| self.at(r, lo + c).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "mul: dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    out.data[r * other.cols + c] += t;
                }
            }
        }
        out
    }

    /// Kronecker product: (self ⊗ other)[(i,j),(k,l)] = self[i,k]·other[j,l],
    /// row index i·other.rows + j, column index k·other.cols + l.
    pub fn kron(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.at(j, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * other.rows + j, k * other.cols + l, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    if !b.at(r, c).is_zero() {
                        out.set(ro + r, co + c, b.at(r, c).clone());
                    }
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        let mut out = vec![BigInt::zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = BigInt::zero();
            for c in 0..self.cols {
                let a = &self.data[r * self.cols + c];
                if !a.is_zero() && !v[c].is_zero() {
                    acc += a * &v[c];
                }
            }
            out[r] = acc;
        }
        out
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Which transform data to materialize alongside D.
#[derive(Clone, Copy, Default)]
pub struct SnfWant {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
    /// Record column operations so `x = V·y` can be replayed without
    /// materializing V (needed for solving on very wide matrices).
    pub col_journal: bool,
}

impl SnfWant {
    pub fn none() -> Self {
        SnfWant::default()
    }
    pub fn all() -> Self {
        SnfWant { u: true, u_inv: true, v: true, v_inv: true, col_journal: false }
    }
}

#[derive(Clone, Debug)]
enum ColOp {
    Swap(usize, usize),
    /// col dst += q · col src
    AddMul { src: usize, dst: usize, q: BigInt },
}

pub struct Snf {
    pub d: IntMatrix,
    pub rank: usize,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
    col_journal: Option<Vec<ColOp>>,
}

impl Snf {
    /// Nonzero diagonal entries d₁|d₂|…, positive, in chain order.
    pub fn nonzero_diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.at(i, i).clone()).collect()
    }

    /// Given y, compute x = V·y by replaying the recorded column operations.
    pub fn replay_v(&self, y: &[BigInt]) -> Vec<BigInt> {
        let journal = self.col_journal.as_ref().expect("column journal not recorded");
        let mut x = y.to_vec();
        for op in journal.iter().rev() {
            match op {
                ColOp::Swap(a, b) => x.swap(*a, *b),
                ColOp::AddMul { src, dst, q } => {
                    if !x[*dst].is_zero() {
                        let t = q * &x[*dst];
                        x[*src] += t;
                    }
                }
            }
        }
        x
    }
}

struct Engine {
    a: Vec<BigInt>,
    rows: usize,
    cols: usize,
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
    journal: Option<Vec<ColOp>>,
}

impl Engine {
    fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.a[r * self.cols + c]
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(r1 * self.cols + c, r2 * self.cols + c);
        }
        if let Some(u) = &mut self.u {
            for c in 0..u.cols {
                u.data.swap(r1 * u.cols + c, r2 * u.cols + c);
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for r in 0..ui.rows {
                ui.data.swap(r * ui.cols + r1, r * ui.cols + r2);
            }
        }
    }

    fn swap_cols(&mut self, c1: usize, c2: usize) {
        if c1 == c2 {
            return;
        }
        for r in 0..self.rows {
            self.a.swap(r * self.cols + c1, r * self.cols + c2);
        }
        if let Some(v) = &mut self.v {
            for r in 0..v.rows {
                v.data.swap(r * v.cols + c1, r * v.cols + c2);
            }
        }
        if let Some(vi) = &mut self.v_inv {
            for c in 0..vi.cols {
                vi.data.swap(c1 * vi.cols + c, c2 * vi.cols + c);
            }
        }
        if let Some(j) = &mut self.journal {
            j.push(ColOp::Swap(c1, c2));
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let i = r * self.cols + c;
            if !self.a[i].is_zero() {
                let t = -&self.a[i];
                self.a[i] = t;
            }
        }
        if let Some(u) = &mut self.u {
            for c in 0..u.cols {
                let i = r * u.cols + c;
                let t = -&u.data[i];
                u.data[i] = t;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for rr in 0..ui.rows {
                let i = rr * ui.cols + r;
                let t = -&ui.data[i];
                ui.data[i] = t;
            }
        }
    }

    /// row dst += q · row src, on columns from..cols of the working matrix.
    fn row_addmul(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        if q.is_zero() {
            return;
        }
        let cols = self.cols;
        for c in from..cols {
            let s = &self.a[src * cols + c];
            if s.is_zero() {
                continue;
            }
            let t = s * q;
            self.a[dst * cols + c] += t;
        }
        if let Some(u) = &mut self.u {
            let ucols = u.cols;
            for c in 0..ucols {
                let s = &u.data[src * ucols + c];
                if s.is_zero() {
                    continue;
                }
                let t = s * q;
                u.data[dst * ucols + c] += t;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            // U⁻¹ ← U⁻¹ · E⁻¹ where E = I + q·e_{dst,src}: col src −= q · col dst.
            let ucols = ui.cols;
            for r in 0..ui.rows {
                let d = &ui.data[r * ucols + dst];
                if d.is_zero() {
                    continue;
                }
                let t = d * q;
                ui.data[r * ucols + src] -= t;
            }
        }
    }

    /// col dst += q · col src, on rows from..rows of the working matrix.
    fn col_addmul(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        if q.is_zero() {
            return;
        }
        let cols = self.cols;
        for r in from..self.rows {
            let s = &self.a[r * cols + src];
            if s.is_zero() {
                continue;
            }
            let t = s * q;
            self.a[r * cols + dst] += t;
        }
        if let Some(v) = &mut self.v {
            let vcols = v.cols;
            for r in 0..v.rows {
                let s = &v.data[r * vcols + src];
                if s.is_zero() {
                    continue;
                }
                let t = s * q;
                v.data[r * vcols + dst] += t;
            }
        }
        if let Some(vi) = &mut self.v_inv {
            // V⁻¹ ← E⁻¹ · V⁻¹ where E = I + q·e_{src,dst}: row src −= q · row dst.
            let vcols = vi.cols;
            for c in 0..vcols {
                let d = &vi.data[dst * vcols + c];
                if d.is_zero() {
                    continue;
                }
                let t = d * q;
                vi.data[src * vcols + c] -= t;
            }
        }
        if let Some(j) = &mut self.journal {
            j.push(ColOp::AddMul { src, dst, q: q.clone() });
        }
    }

    /// Smallest-magnitude nonzero entry of the submatrix at (k..,k..);
    /// ties broken by lowest (row, col) via the row-major scan order.
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for r in k..self.rows {
            for c in k..self.cols {
                let e = self.at(r, c);
                if e.is_zero() {
                    continue;
                }
                let a = e.abs();
                // a unit can't be beaten, and the first one found in this
                // row-major scan is already the lowest-(row,col) unit
                if a.is_one() {
                    return Some((r, c));
                }
                match &best {
                    Some((ba, _, _)) if *ba <= a => {}
                    _ => best = Some((a, r, c)),
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }
}

pub fn snf_with(m: &IntMatrix, want: SnfWant) -> Snf {
    let rows = m.rows;
    let cols = m.cols;
    let mut eng = Engine {
        a: m.data.clone(),
        rows,
        cols,
        u: want.u.then(|| IntMatrix::identity(rows)),
        u_inv: want.u_inv.then(|| IntMatrix::identity(rows)),
        v: want.v.then(|| IntMatrix::identity(cols)),
        v_inv: want.v_inv.then(|| IntMatrix::identity(cols)),
        journal: want.col_journal.then(Vec::new),
    };

    let mut rank = 0;
    for k in 0..rows.min(cols) {
        'stage: loop {
            let Some((pr, pc)) = eng.find_pivot(k) else {
                break;
            };
            eng.swap_rows(k, pr);
            eng.swap_cols(k, pc);
            if eng.at(k, k).is_negative() {
                eng.negate_row(k);
            }

            // One reduction pass down the column and across the row.
            let mut clean = true;
            for r in k + 1..rows {
                if eng.at(r, k).is_zero() {
                    continue;
                }
                let q = -(eng.at(r, k) / eng.at(k, k));
                eng.row_addmul(r, k, &q, k);
                if !eng.at(r, k).is_zero() {
                    clean = false;
                }
            }
            for c in k + 1..cols {
                if eng.at(k, c).is_zero() {
                    continue;
                }
                let q = -(eng.at(k, c) / eng.at(k, k));
                eng.col_addmul(c, k, &q, k);
                if !eng.at(k, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue 'stage;
            }

            // Divisibility: the pivot must divide every remaining entry.
            let p = eng.at(k, k).clone();
            for r in k + 1..rows {
                for c in k + 1..cols {
                    if !(eng.at(r, c) % &p).is_zero() {
                        eng.row_addmul(k, r, &BigInt::one(), k);
                        continue 'stage;
                    }
                }
            }
            break 'stage;
        }
        if eng.at(k, k).is_zero() {
            break;
        }
        rank = k + 1;
    }

    let d = IntMatrix { rows, cols, data: eng.a };
    Snf {
        d,
        rank,
        u: eng.u,
        u_inv: eng.u_inv,
        v: eng.v,
        v_inv: eng.v_inv,
        col_journal: eng.journal,
    }
}

/// U·M·V = D with U, V unimodular and D diagonal satisfying d₁|d₂|….
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let snf = snf_with(m, SnfWant { u: true, v: true, ..SnfWant::default() });
    (snf.u.unwrap(), snf.d, snf.v.unwrap())
}

/// Reusable exact solver for M·x = b over the integers (one SNF, many b).
pub struct Solver {
    rank: usize,
    cols: usize,
    diag: Vec<BigInt>,
    u: IntMatrix,
    snf: Snf,
}

impl Solver {
    pub fn new(m: &IntMatrix) -> Solver {
        let snf = snf_with(m, SnfWant { u: true, col_journal: true, ..SnfWant::default() });
        Solver {
            rank: snf.rank,
            cols: m.cols,
            diag: snf.nonzero_diagonal(),
            u: snf.u.clone().unwrap(),
            snf,
        }
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.u.mul_vec(b);
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..c.len() {
            if i < self.rank {
                let (q, r) = num_integer::Integer::div_rem(&c[i], &self.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !c[i].is_zero() {
                return None;
            }
        }
        Some(self.snf.replay_v(&y))
    }

    pub fn contains(&self, b: &[BigInt]) -> bool {
        self.solve(b).is_some()
    }
}

pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    Solver::new(m).solve(b)
}

/// Basis of {x : M·x = 0}, as columns.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = snf_with(m, SnfWant { v: true, ..SnfWant::default() });
    let v = snf.v.unwrap();
    v.col_range(snf.rank, m.cols)
}

/// Generators (as columns) of the lattice {x : F·x ∈ column-span(L)}.
pub fn preimage_lattice(f: &IntMatrix, l: &IntMatrix) -> IntMatrix {
    assert_eq!(f.rows(), l.rows(), "preimage_lattice: ambient rank mismatch");
    let stacked = f.hstack(l);
    let ker = kernel_basis(&stacked);
    ker.row_range(0, f.cols())
}

/// Do the columns of `a` and `b` span the same sublattice of Zⁿ?
pub fn same_column_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    assert_eq!(a.rows(), b.rows());
    let sa = Solver::new(a);
    let sb = Solver::new(b);
    (0..b.cols()).all(|j| sa.contains(&b.col(j)))
        && (0..a.cols()).all(|j| sb.contains(&a.col(j)))
}
