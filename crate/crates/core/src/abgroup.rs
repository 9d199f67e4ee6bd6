//! Finitely generated abelian groups presented as cokernels.
//!
//! A group is the data of a relation matrix R: the group is Zⁿ/col-span(R)
//! where n = R.rows(). The canonical form (invariant factors d₁|d₂|…, each
//! ≥ 2, plus a free rank) is computed once on construction and is a complete
//! isomorphism invariant. Homomorphisms are integer matrices on presentation
//! generators, checked for well-definedness when built.

use crate::matrix::{
    kernel_basis, preimage_lattice, same_column_lattice, snf_with, IntMatrix, SnfWant, Solver,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AbGroupError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix does not send relations into relations (column {column})")]
    IllDefinedHom { column: usize },
    #[error("presentations do not match: {0}")]
    IncompatiblePresentation(String),
    #[error("operation requires a finite group, got one of free rank {free_rank}")]
    InfiniteInput { free_rank: usize },
    #[error("maps do not compose to zero")]
    NotAComplex,
}

/// Canonical form of a finitely generated abelian group, in the JSON shape
/// used by the CLI and golden files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
}

#[derive(Clone)]
pub struct FgAbelianGroup {
    relations: IntMatrix,
    // w = U·v puts generator coordinates v into diagonalized coordinates w.
    u: IntMatrix,
    u_inv: IntMatrix,
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
    /// Diagonal positions carrying the factors ≥ 2, then the free positions.
    coord_positions: Vec<usize>,
}

impl PartialEq for FgAbelianGroup {
    /// Presentation equality, not isomorphism; see [`Self::is_isomorphic_to`].
    fn eq(&self, other: &Self) -> bool {
        self.relations == other.relations
    }
}
impl Eq for FgAbelianGroup {}

impl std::fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FgAbelianGroup({self})")
    }
}

impl std::fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> =
            self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

impl FgAbelianGroup {
    pub fn from_relations(relations: IntMatrix) -> FgAbelianGroup {
        let n = relations.rows();
        let snf = snf_with(&relations, SnfWant { u: true, u_inv: true, ..SnfWant::default() });
        let diag = snf.nonzero_diagonal();
        let mut invariant_factors = Vec::new();
        let mut coord_positions = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if *d > BigInt::one() {
                invariant_factors.push(d.clone());
                coord_positions.push(i);
            }
        }
        let free_rank = n - diag.len();
        coord_positions.extend(diag.len()..n);
        FgAbelianGroup {
            relations,
            u: snf.u.unwrap(),
            u_inv: snf.u_inv.unwrap(),
            invariant_factors,
            free_rank,
            coord_positions,
        }
    }

    /// Z/n, with the convention cyclic(0) = Z.
    pub fn cyclic(n: u64) -> FgAbelianGroup {
        FgAbelianGroup::from_relations(IntMatrix::from_rows(&[vec![n as i64]]))
    }

    pub fn free(rank: usize) -> FgAbelianGroup {
        FgAbelianGroup::from_relations(IntMatrix::zeros(rank, 0))
    }

    pub fn trivial() -> FgAbelianGroup {
        FgAbelianGroup::from_relations(IntMatrix::zeros(0, 0))
    }

    /// ⊕ᵢ Z/dᵢ for the given orders (0 meaning a Z summand).
    pub fn direct_sum_of_cyclics(orders: &[u64]) -> FgAbelianGroup {
        let n = orders.len();
        let d: Vec<i64> = orders.iter().map(|&o| o as i64).collect();
        FgAbelianGroup::from_relations(IntMatrix::diagonal(n, n, &d))
    }

    pub fn relation_matrix(&self) -> &IntMatrix {
        &self.relations
    }

    /// Number of presentation generators.
    pub fn ngens(&self) -> usize {
        self.relations.rows()
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        CanonicalForm {
            invariant_factors: self
                .invariant_factors
                .iter()
                .map(|d| d.to_u64().expect("invariant factor exceeds u64"))
                .collect(),
            free_rank: self.free_rank,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.canonical_form()).expect("canonical form serializes")
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().product())
    }

    pub fn is_isomorphic_to(&self, other: &FgAbelianGroup) -> bool {
        self.invariant_factors == other.invariant_factors && self.free_rank == other.free_rank
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        FgAbelianGroup::from_relations(IntMatrix::block_diag(&[&self.relations, &other.relations]))
    }

    /// Canonical coordinates of an element given in generator coordinates:
    /// one coordinate per invariant factor (reduced into [0, dᵢ)) followed by
    /// free coordinates. All zero iff the element is zero in the group.
    pub fn canonical_coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ngens(), "element has wrong length");
        let w = self.u.mul_vec(v);
        let nt = self.invariant_factors.len();
        self.coord_positions
            .iter()
            .enumerate()
            .map(|(i, &pos)| {
                if i < nt {
                    w[pos].mod_floor(&self.invariant_factors[i])
                } else {
                    w[pos].clone()
                }
            })
            .collect()
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.canonical_coords(v).iter().all(|c| c.is_zero())
    }

    /// Generator coordinates of the i-th canonical generator (torsion
    /// generators in factor order, then free generators).
    pub fn canonical_generator(&self, i: usize) -> Vec<BigInt> {
        let pos = self.coord_positions[i];
        self.u_inv.col(pos)
    }

    /// All elements, in generator coordinates. Errors on infinite groups.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>, AbGroupError> {
        if self.free_rank > 0 {
            return Err(AbGroupError::InfiniteInput { free_rank: self.free_rank });
        }
        let factors: Vec<u64> = self.canonical_form().invariant_factors;
        let total: u64 = factors.iter().product();
        let mut out = Vec::with_capacity(total as usize);
        for idx in 0..total {
            let mut rem = idx;
            let mut coords = Vec::with_capacity(factors.len());
            for f in factors.iter().rev() {
                coords.push(BigInt::from(rem % f));
                rem /= f;
            }
            coords.reverse();
            out.push(self.element_from_canonical(&coords));
        }
        Ok(out)
    }

    /// Generator coordinates of the element with the given canonical coords.
    pub fn element_from_canonical(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.invariant_factors.len() + self.free_rank);
        let n = self.ngens();
        let mut w = vec![BigInt::zero(); n];
        for (i, c) in coords.iter().enumerate() {
            w[self.coord_positions[i]] = c.clone();
        }
        self.u_inv.mul_vec(&w)
    }

    /// Order of the element with the given canonical coordinates; None if
    /// infinite (nonzero free coordinate).
    pub fn canonical_element_order(&self, coords: &[BigInt]) -> Option<BigInt> {
        assert_eq!(coords.len(), self.invariant_factors.len() + self.free_rank);
        let nt = self.invariant_factors.len();
        if coords[nt..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut ord = BigInt::one();
        for (c, d) in coords[..nt].iter().zip(&self.invariant_factors) {
            let piece = d / c.gcd(d);
            ord = ord.lcm(&piece);
        }
        Some(ord)
    }

    /// (2-primary part, odd part, free rank) with A ≅ two ⊕ odd ⊕ Z^rank.
    pub fn primary_parts(&self) -> (FgAbelianGroup, FgAbelianGroup, usize) {
        let mut two = Vec::new();
        let mut odd = Vec::new();
        for d in &self.invariant_factors {
            let mut rest = d.clone();
            let mut twopow = BigInt::one();
            let two_big = BigInt::from(2);
            while (&rest % &two_big).is_zero() {
                rest /= &two_big;
                twopow *= &two_big;
            }
            if twopow > BigInt::one() {
                two.push(twopow.to_u64().expect("factor fits u64"));
            }
            if rest > BigInt::one() {
                odd.push(rest.to_u64().expect("factor fits u64"));
            }
        }
        (
            FgAbelianGroup::direct_sum_of_cyclics(&two),
            FgAbelianGroup::direct_sum_of_cyclics(&odd),
            self.free_rank,
        )
    }

    /// Canonical presentation D: Z^k → Z^(k+f) by the invariant factors,
    /// giving the free resolution 0 → Z^k → Z^(k+f) → A → 0.
    pub fn canonical_presentation(&self) -> IntMatrix {
        let k = self.invariant_factors.len();
        let n = k + self.free_rank;
        let mut d = IntMatrix::zeros(n, k);
        for (i, f) in self.invariant_factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }

    /// Direct sum of `copies` copies of self's canonical model, block layout.
    fn canonical_power(&self, copies: usize) -> FgAbelianGroup {
        let d = self.canonical_presentation();
        let blocks: Vec<&IntMatrix> = std::iter::repeat(&d).take(copies).collect();
        FgAbelianGroup::from_relations(IntMatrix::block_diag(&blocks))
    }
}

/// A ⊗ B, via the presentation [D_A ⊗ I | I ⊗ D_B] on n_A·n_B generators.
pub fn tensor(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    let da = a.canonical_presentation();
    let db = b.canonical_presentation();
    let (na, nb) = (da.rows(), db.rows());
    let left = da.kron(&IntMatrix::identity(nb));
    let right = IntMatrix::identity(na).kron(&db);
    FgAbelianGroup::from_relations(left.hstack(&right))
}

/// Tor(A, B) = ker(D_A ⊗ B), from the length-1 resolution of A.
pub fn tor(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    let da = a.canonical_presentation();
    let (na, ka) = (da.rows(), da.cols());
    let nb = b.canonical_presentation().rows();
    let f = AbHom::new(
        b.canonical_power(ka),
        b.canonical_power(na),
        da.kron(&IntMatrix::identity(nb)),
    )
    .expect("resolution map is well defined");
    f.kernel().0
}

/// Hom(A, B) = ker(D_Aᵀ ⊗ B) on B^(n_A) → B^(k_A).
pub fn hom(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    hom_map(a, b).kernel().0
}

/// Ext(A, B) = coker(D_Aᵀ ⊗ B).
pub fn ext(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    hom_map(a, b).cokernel().0
}

fn hom_map(a: &FgAbelianGroup, b: &FgAbelianGroup) -> AbHom {
    let da = a.canonical_presentation();
    let (na, ka) = (da.rows(), da.cols());
    let nb = b.canonical_presentation().rows();
    AbHom::new(
        b.canonical_power(na),
        b.canonical_power(ka),
        da.transpose().kron(&IntMatrix::identity(nb)),
    )
    .expect("resolution map is well defined")
}

/// (A⊗A)_σ = (A⊗A)/⟨x⊗y + y⊗x⟩, with the quotient map from A⊗A.
pub fn tensor_sigma(a: &FgAbelianGroup) -> (FgAbelianGroup, AbHom) {
    let t = tensor(a, a);
    let n = a.canonical_presentation().rows();
    // Symmetrizing relators at generator level: e_(i,j) + e_(j,i), i ≤ j.
    let mut sym_cols = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut col = vec![BigInt::zero(); n * n];
            col[i * n + j] += BigInt::one();
            col[j * n + i] += BigInt::one();
            sym_cols.push(col);
        }
    }
    let sym = IntMatrix::from_fn(n * n, sym_cols.len(), |r, c| sym_cols[c][r].clone());
    let quotient =
        FgAbelianGroup::from_relations(t.relation_matrix().hstack(&sym));
    let proj = AbHom::new(t, quotient.clone(), IntMatrix::identity(n * n))
        .expect("quotient projection is well defined");
    (quotient, proj)
}

#[derive(Clone)]
pub struct AbHom {
    source: FgAbelianGroup,
    target: FgAbelianGroup,
    matrix: IntMatrix,
}

impl std::fmt::Debug for AbHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AbHom({} → {}, {:?})", self.source, self.target, self.matrix)
    }
}

impl AbHom {
    /// Builds the homomorphism and checks well-definedness: the matrix must
    /// send every relation of the source into the relation span of the target.
    pub fn new(
        source: FgAbelianGroup,
        target: FgAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<AbHom, AbGroupError> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(AbGroupError::DimensionMismatch(format!(
                "hom matrix is {}x{}, want {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        let solver = Solver::new(target.relation_matrix());
        for c in 0..source.relation_matrix().cols() {
            let mapped = matrix.mul_vec(&source.relation_matrix().col(c));
            if !solver.contains(&mapped) {
                return Err(AbGroupError::IllDefinedHom { column: c });
            }
        }
        Ok(AbHom { source, target, matrix })
    }

    pub fn identity(g: &FgAbelianGroup) -> AbHom {
        AbHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ngens()),
        }
    }

    pub fn zero(source: &FgAbelianGroup, target: &FgAbelianGroup) -> AbHom {
        AbHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.ngens(), source.ngens()),
        }
    }

    pub fn source(&self) -> &FgAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }

    /// self ∘ other. The presentations (not just isomorphism classes) of
    /// other.target and self.source must coincide.
    pub fn compose(&self, other: &AbHom) -> Result<AbHom, AbGroupError> {
        if self.source != other.target {
            return Err(AbGroupError::IncompatiblePresentation(
                "compose: inner presentations differ".into(),
            ));
        }
        Ok(AbHom {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix),
        })
    }

    pub fn is_zero_map(&self) -> bool {
        let solver = Solver::new(self.target.relation_matrix());
        (0..self.matrix.cols()).all(|c| solver.contains(&self.matrix.col(c)))
    }

    /// Kernel subgroup together with its inclusion into the source.
    pub fn kernel(&self) -> (FgAbelianGroup, AbHom) {
        // Lattice of source-coordinate vectors mapping into target relations.
        let k = preimage_lattice(&self.matrix, self.target.relation_matrix());
        let rels = preimage_lattice(&k, self.source.relation_matrix());
        let group = FgAbelianGroup::from_relations(rels);
        let incl = AbHom { source: group.clone(), target: self.source.clone(), matrix: k };
        (group, incl)
    }

    /// Image subgroup together with its inclusion into the target.
    pub fn image(&self) -> (FgAbelianGroup, AbHom) {
        let k = preimage_lattice(&self.matrix, self.target.relation_matrix());
        let group = FgAbelianGroup::from_relations(k);
        let incl = AbHom {
            source: group.clone(),
            target: self.target.clone(),
            matrix: self.matrix.clone(),
        };
        (group, incl)
    }

    /// Cokernel together with the projection from the target.
    pub fn cokernel(&self) -> (FgAbelianGroup, AbHom) {
        let rels = self.matrix.hstack(self.target.relation_matrix());
        let group = FgAbelianGroup::from_relations(rels);
        let proj = AbHom {
            source: self.target.clone(),
            target: group.clone(),
            matrix: IntMatrix::identity(self.target.ngens()),
        };
        (group, proj)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }
}

/// ker(f)/im(g) for a composable pair with f∘g = 0.
pub fn homology_of_pair(f: &AbHom, g: &AbHom) -> Result<FgAbelianGroup, AbGroupError> {
    if g.target != f.source {
        return Err(AbGroupError::IncompatiblePresentation(
            "homology_of_pair: g.target and f.source differ".into(),
        ));
    }
    if !f.compose(g)?.is_zero_map() {
        return Err(AbGroupError::NotAComplex);
    }
    let k = preimage_lattice(&f.matrix, f.target.relation_matrix());
    let boundary = g.matrix.hstack(f.source.relation_matrix());
    let rels = preimage_lattice(&k, &boundary);
    Ok(FgAbelianGroup::from_relations(rels))
}

#[derive(Clone)]
pub struct ExtensionDatum {
    pub kernel: FgAbelianGroup,
    pub total: FgAbelianGroup,
    pub quotient: FgAbelianGroup,
    pub inclusion: AbHom,
    pub projection: AbHom,
    pub split: bool,
}

impl ExtensionDatum {
    /// Checks the short-exactness invariants: inclusion injective, projection
    /// surjective, image(inclusion) = kernel(projection), and that the split
    /// flag matches a brute-force section search.
    pub fn verify(&self) -> Result<(), String> {
        if !self.inclusion.is_injective() {
            return Err("inclusion is not injective".into());
        }
        if !self.projection.is_surjective() {
            return Err("projection is not surjective".into());
        }
        if !self.projection.compose(&self.inclusion).map_err(|e| e.to_string())?.is_zero_map() {
            return Err("projection ∘ inclusion is not zero".into());
        }
        let e_rel = self.total.relation_matrix();
        let im = self.inclusion.matrix().hstack(e_rel);
        let ker = preimage_lattice(self.projection.matrix(), self.quotient.relation_matrix())
            .hstack(e_rel);
        if !same_column_lattice(&im, &ker) {
            return Err("image(inclusion) ≠ kernel(projection)".into());
        }
        match section_exists(&self.projection) {
            Ok(has) if has == self.split => Ok(()),
            Ok(_) => Err("split flag does not match section search".into()),
            Err(e) => Err(e.to_string()),
        }
    }
}

/// Brute-force search for a section of a surjection onto a finite group with
/// finite total group: for each canonical generator cᵢ of the quotient (of
/// order qᵢ) independently seek e with qᵢ·e = 0 and proj(e) = cᵢ.
fn section_exists(proj: &AbHom) -> Result<bool, AbGroupError> {
    let q = &proj.target;
    let e = &proj.source;
    let elements = e.elements()?;
    for (i, qi) in q.invariant_factors().iter().enumerate() {
        let want = q.canonical_coords(&q.canonical_generator(i));
        let found = elements.iter().any(|v| {
            let order_kills = {
                let scaled: Vec<BigInt> = v.iter().map(|x| x * qi).collect();
                e.is_zero_element(&scaled)
            };
            order_kills && q.canonical_coords(&proj.apply(v)) == want
        });
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One representative extension 0 → K → E → Q → 0 per class of Ext(Q, K),
/// each with a split flag decided by brute-force section search.
pub fn classify_extensions(
    kernel: &FgAbelianGroup,
    quotient: &FgAbelianGroup,
) -> Result<Vec<ExtensionDatum>, AbGroupError> {
    if !kernel.is_finite() {
        return Err(AbGroupError::InfiniteInput { free_rank: kernel.free_rank() });
    }
    if !quotient.is_finite() {
        return Err(AbGroupError::InfiniteInput { free_rank: quotient.free_rank() });
    }
    let n = kernel.ngens();
    let qfac: Vec<BigInt> = quotient.invariant_factors().to_vec();
    let k = qfac.len();

    // Ext(Q, K) = ⊕ᵢ K/qᵢK; enumerate one κᵢ per element of each K/qᵢK.
    let mut per_factor: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(k);
    for qi in &qfac {
        let mut scaled = IntMatrix::zeros(n, n);
        for j in 0..n {
            scaled.set(j, j, qi.clone());
        }
        let quot = FgAbelianGroup::from_relations(kernel.relation_matrix().hstack(&scaled));
        per_factor.push(quot.elements()?);
    }

    let mut data = Vec::new();
    let mut choice = vec![0usize; k];
    loop {
        let kappa: Vec<&Vec<BigInt>> =
            (0..k).map(|i| &per_factor[i][choice[i]]).collect();

        // Total group: gens of K plus one xᵢ per quotient factor, relations
        // of K plus qᵢ·xᵢ − κᵢ.
        let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
        let rk = kernel.relation_matrix();
        for c in 0..rk.cols() {
            let mut col = rk.col(c);
            col.extend(std::iter::repeat_with(BigInt::zero).take(k));
            rel_cols.push(col);
        }
        for i in 0..k {
            let mut col: Vec<BigInt> = kappa[i].iter().map(|x| -x).collect();
            col.extend((0..k).map(|j| if j == i { qfac[i].clone() } else { BigInt::zero() }));
            rel_cols.push(col);
        }
        let rels = IntMatrix::from_fn(n + k, rel_cols.len(), |r, c| rel_cols[c][r].clone());
        let total = FgAbelianGroup::from_relations(rels);

        let mut incl = IntMatrix::zeros(n + k, n);
        for j in 0..n {
            incl.set(j, j, 1);
        }
        let inclusion = AbHom::new(kernel.clone(), total.clone(), incl)?;

        let mut proj = IntMatrix::zeros(quotient.ngens(), n + k);
        for i in 0..k {
            let gen = quotient.canonical_generator(i);
            for (r, val) in gen.iter().enumerate() {
                proj.set(r, n + i, val.clone());
            }
        }
        let projection = AbHom::new(total.clone(), quotient.clone(), proj)?;

        let split = section_exists(&projection)?;
        let datum = ExtensionDatum {
            kernel: kernel.clone(),
            total,
            quotient: quotient.clone(),
            inclusion,
            projection,
            split,
        };
        debug_assert_eq!(datum.verify(), Ok(()));
        data.push(datum);

        // Next choice in mixed-radix order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(data);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < per_factor[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Rank of the kernel lattice of the matrix, i.e. dim ker over Q.
pub fn kernel_rank(m: &IntMatrix) -> usize {
    kernel_basis(m).cols()
}

/// Cokernel of a relation matrix presented as a stream of sparse columns,
/// for presentations with far more relators than generators. Columns are
/// folded into a column-style Hermite form (at most one pivot per row), so
/// memory stays O(ngens²) however many relators arrive.
pub fn cokernel_of_sparse_columns<I>(ngens: usize, columns: I) -> FgAbelianGroup
where
    I: IntoIterator<Item = Vec<(usize, i64)>>,
{
    // pivot[r] = column with lowest nonzero entry at row r
    let mut pivots: Vec<Option<Vec<BigInt>>> = vec![None; ngens];
    for col in columns {
        let mut v = vec![BigInt::from(0); ngens];
        for (r, c) in col {
            assert!(r < ngens, "row index out of range");
            v[r] += c;
        }
        loop {
            let Some(top) = v.iter().position(|x| !x.is_zero()) else {
                break;
            };
            match &mut pivots[top] {
                slot @ None => {
                    *slot = Some(v);
                    break;
                }
                Some(p) => {
                    // replace pivot by the gcd combination, push the rest down
                    let e = num_integer::Integer::extended_gcd(&p[top], &v[top]);
                    let (pq, vq) = (&p[top] / &e.gcd, &v[top] / &e.gcd);
                    for r in top..ngens {
                        let np = &e.x * &p[r] + &e.y * &v[r];
                        let nv = &pq * &v[r] - &vq * &p[r];
                        p[r] = np;
                        v[r] = nv;
                    }
                    debug_assert!(v[top].is_zero());
                }
            }
        }
    }
    let cols: Vec<Vec<BigInt>> = pivots.into_iter().flatten().collect();
    let rel = IntMatrix::from_fn(ngens, cols.len(), |r, c| cols[c][r].clone());
    FgAbelianGroup::from_relations(rel)
}
