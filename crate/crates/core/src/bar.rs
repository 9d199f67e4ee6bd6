//! Normalized bar complex of a finite group in coinvariants, with trivial
//! integer coefficients.
//!
//! Chains are sparse sums of tuples [g₁|…|gₙ] of non-identity elements.
//! Normalization is eager: any tuple containing the identity is zero and is
//! never stored. Working in coinvariants makes the leading boundary term
//! drop its coefficient action and collapses the degree-1 boundary to zero.

use crate::complex::{ChainComplex, SparseMat};
use crate::groups::{FiniteGroup, GroupElement, GroupHom};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;

pub const DEFAULT_BAR_BUDGET: u128 = 10_000_000;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BarError {
    #[error("chain and group (or two chains) belong to different groups")]
    GroupMismatch,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("boundary of a degree-0 chain is undefined")]
    DegreeZeroBoundary,
    #[error("bar complex size {size} exceeds budget {budget} (basis of top degree)")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("element index {index} out of range for group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("cannot parse chain literal: {0}")]
    Parse(String),
    #[error("coefficient does not fit in 64 bits")]
    CoefficientOverflow,
}

/// A sparse normalized bar chain: tuples of non-identity element indices with
/// nonzero integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarChain {
    group_id: u64,
    degree: usize,
    terms: BTreeMap<Vec<u16>, i64>,
}

impl BarChain {
    pub fn zero(group: &FiniteGroup, degree: usize) -> BarChain {
        BarChain { group_id: group.id(), degree, terms: BTreeMap::new() }
    }

    /// Single term c·[g₁|…|gₙ]; normalized (identity entries kill the term).
    pub fn term(group: &FiniteGroup, tuple: &[u16], coeff: i64) -> BarChain {
        let mut z = BarChain::zero(group, tuple.len());
        z.accumulate_checked(group, tuple, coeff);
        z
    }

    pub fn from_terms<I>(group: &FiniteGroup, degree: usize, terms: I) -> Result<BarChain, BarError>
    where
        I: IntoIterator<Item = (Vec<u16>, i64)>,
    {
        let mut z = BarChain::zero(group, degree);
        for (tuple, coeff) in terms {
            if tuple.len() != degree {
                return Err(BarError::DegreeMismatch { left: tuple.len(), right: degree });
            }
            for &g in &tuple {
                if g as usize >= group.order() {
                    return Err(BarError::ElementOutOfRange {
                        index: g as usize,
                        order: group.order(),
                    });
                }
            }
            z.accumulate_checked(group, &tuple, coeff);
        }
        Ok(z)
    }

    fn accumulate_checked(&mut self, group: &FiniteGroup, tuple: &[u16], coeff: i64) {
        debug_assert_eq!(group.id(), self.group_id);
        debug_assert_eq!(tuple.len(), self.degree);
        if coeff == 0 || tuple.iter().any(|&g| g == 0) {
            return;
        }
        let entry = self.terms.entry(tuple.to_vec()).or_insert(0);
        *entry = entry.checked_add(coeff).expect("coefficient overflow");
        if *entry == 0 {
            self.terms.remove(tuple);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group_id(&self) -> u64 {
        self.group_id
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], i64)> + '_ {
        self.terms.iter().map(|(t, &c)| (t.as_slice(), c))
    }

    pub fn coeff(&self, tuple: &[u16]) -> i64 {
        self.terms.get(tuple).copied().unwrap_or(0)
    }

    fn check_same(&self, other: &BarChain) -> Result<(), BarError> {
        if self.group_id != other.group_id {
            return Err(BarError::GroupMismatch);
        }
        if self.degree != other.degree {
            return Err(BarError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        Ok(())
    }

    pub fn add(&self, other: &BarChain) -> Result<BarChain, BarError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            let entry = out.terms.entry(t.clone()).or_insert(0);
            *entry = entry.checked_add(*c).expect("coefficient overflow");
            if *entry == 0 {
                out.terms.remove(t);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BarChain) -> Result<BarChain, BarError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BarChain {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> BarChain {
        let mut out = BarChain { group_id: self.group_id, degree: self.degree, terms: BTreeMap::new() };
        if k == 0 {
            return out;
        }
        for (t, c) in &self.terms {
            out.terms.insert(t.clone(), c.checked_mul(k).expect("coefficient overflow"));
        }
        out
    }
}

fn check_group(group: &FiniteGroup, z: &BarChain) -> Result<(), BarError> {
    if group.id() != z.group_id() {
        return Err(BarError::GroupMismatch);
    }
    Ok(())
}

fn check_element(group: &FiniteGroup, g: GroupElement) -> Result<(), BarError> {
    if group.id() != g.group_id {
        return Err(BarError::GroupMismatch);
    }
    Ok(())
}

/// ∂[g₁|…|gₙ] = [g₂|…|gₙ] + Σᵢ(−1)ⁱ[…|gᵢgᵢ₊₁|…] + (−1)ⁿ[g₁|…|gₙ₋₁],
/// the leading term carrying no coefficient action (coinvariants). The
/// boundary of every degree-1 chain is zero.
pub fn boundary(group: &FiniteGroup, z: &BarChain) -> Result<BarChain, BarError> {
    check_group(group, z)?;
    if z.degree() == 0 {
        return Err(BarError::DegreeZeroBoundary);
    }
    let n = z.degree();
    let mut out = BarChain::zero(group, n - 1);
    if n == 1 {
        // Both faces of [g] hit the empty symbol with opposite signs.
        return Ok(out);
    }
    for (tuple, c) in z.terms() {
        out.accumulate_checked(group, &tuple[1..], c);
        let mut sign = 1i64;
        for i in 0..n - 1 {
            sign = -sign;
            let mut t = Vec::with_capacity(n - 1);
            t.extend_from_slice(&tuple[..i]);
            t.push(group.mul_idx(tuple[i], tuple[i + 1]));
            t.extend_from_slice(&tuple[i + 2..]);
            out.accumulate_checked(group, &t, sign * c);
        }
        let last_sign = if n % 2 == 0 { 1 } else { -1 };
        out.accumulate_checked(group, &tuple[..n - 1], last_sign * c);
    }
    Ok(out)
}

/// ρ_g(z) = Σⱼ(−1)ʲ[g₁|…|gⱼ|g⁻¹|g·gⱼ₊₁·g⁻¹|…|g·gₙ·g⁻¹], the homotopy
/// between the identity and conjugation by g.
pub fn homotopy_rho(
    group: &FiniteGroup,
    g: GroupElement,
    z: &BarChain,
) -> Result<BarChain, BarError> {
    check_group(group, z)?;
    check_element(group, g)?;
    let n = z.degree();
    let ginv = group.inv_idx(g.index);
    let mut out = BarChain::zero(group, n + 1);
    for (tuple, c) in z.terms() {
        let mut sign = 1i64;
        for j in 0..=n {
            let mut t = Vec::with_capacity(n + 1);
            t.extend_from_slice(&tuple[..j]);
            t.push(ginv);
            for &x in &tuple[j..] {
                t.push(group.conjugate_idx(g.index, x));
            }
            out.accumulate_checked(group, &t, sign * c);
            sign = -sign;
        }
    }
    Ok(out)
}

/// Tuple-wise conjugation [g·g₁·g⁻¹|…|g·gₙ·g⁻¹].
pub fn conjugate_chain(
    group: &FiniteGroup,
    g: GroupElement,
    z: &BarChain,
) -> Result<BarChain, BarError> {
    check_group(group, z)?;
    check_element(group, g)?;
    let mut out = BarChain::zero(group, z.degree());
    for (tuple, c) in z.terms() {
        let t: Vec<u16> = tuple.iter().map(|&x| group.conjugate_idx(g.index, x)).collect();
        out.accumulate_checked(group, &t, c);
    }
    Ok(out)
}

/// Push a chain through a group homomorphism, entrywise on tuples.
pub fn transport(hom: &GroupHom, z: &BarChain) -> Result<BarChain, BarError> {
    if hom.source_id != z.group_id() {
        return Err(BarError::GroupMismatch);
    }
    let mut terms: BTreeMap<Vec<u16>, i64> = BTreeMap::new();
    for (tuple, c) in z.terms() {
        let t: Vec<u16> = tuple.iter().map(|&x| hom.apply(x)).collect();
        if t.iter().any(|&x| x == 0) {
            continue;
        }
        let entry = terms.entry(t).or_insert(0);
        *entry = entry.checked_add(c).expect("coefficient overflow");
    }
    terms.retain(|_, c| *c != 0);
    Ok(BarChain { group_id: hom.target_id, degree: z.degree(), terms })
}

/// Basis of degree-n tuples in lexicographic element-index order; the n-digit
/// mixed-radix code over non-identity indices 1..order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BarBasis {
    order: usize,
    degree: usize,
}

impl BarBasis {
    pub fn new(group: &FiniteGroup, degree: usize) -> BarBasis {
        BarBasis { order: group.order(), degree }
    }

    pub fn size(&self) -> usize {
        (self.order - 1).pow(self.degree as u32)
    }

    pub fn index_of(&self, tuple: &[u16]) -> usize {
        assert_eq!(tuple.len(), self.degree);
        let mut idx = 0usize;
        for &g in tuple {
            debug_assert!(g != 0 && (g as usize) < self.order);
            idx = idx * (self.order - 1) + (g as usize - 1);
        }
        idx
    }

    pub fn tuple_at(&self, mut idx: usize) -> Vec<u16> {
        let mut t = vec![0u16; self.degree];
        for slot in (0..self.degree).rev() {
            t[slot] = (idx % (self.order - 1) + 1) as u16;
            idx /= self.order - 1;
        }
        debug_assert_eq!(idx, 0, "basis index out of range");
        t
    }
}

/// The normalized coinvariant bar complex through degree `top`, with the
/// tuple bases retained for converting chains to coordinate vectors.
#[derive(Debug)]
pub struct BarComplex {
    pub complex: ChainComplex,
    group_id: u64,
    bases: Vec<BarBasis>,
}

pub fn bar_complex(group: &FiniteGroup, top: usize) -> Result<BarComplex, BarError> {
    bar_complex_with_budget(group, top, DEFAULT_BAR_BUDGET)
}

pub fn bar_complex_with_budget(
    group: &FiniteGroup,
    top: usize,
    budget: u128,
) -> Result<BarComplex, BarError> {
    let o = group.order() as u128;
    let size = (o - 1).checked_pow(top as u32).unwrap_or(u128::MAX);
    if size > budget {
        return Err(BarError::BudgetExceeded { size, budget });
    }
    let bases: Vec<BarBasis> = (0..=top).map(|d| BarBasis { order: group.order(), degree: d }).collect();
    let sizes: Vec<usize> = bases.iter().map(|b| b.size()).collect();
    let mut boundaries = Vec::new();
    for n in 1..=top {
        let hi = &bases[n];
        let lo = &bases[n - 1];
        let mut trips: Vec<(usize, usize, i64)> = Vec::new();
        if n >= 2 {
            for col in 0..hi.size() {
                let tuple = hi.tuple_at(col);
                let mut push = |t: &[u16], c: i64| {
                    if t.iter().all(|&g| g != 0) {
                        trips.push((lo.index_of(t), col, c));
                    }
                };
                push(&tuple[1..], 1);
                let mut sign = 1i64;
                for i in 0..n - 1 {
                    sign = -sign;
                    let mut t = Vec::with_capacity(n - 1);
                    t.extend_from_slice(&tuple[..i]);
                    t.push(group.mul_idx(tuple[i], tuple[i + 1]));
                    t.extend_from_slice(&tuple[i + 2..]);
                    push(&t, sign);
                }
                push(&tuple[..n - 1], if n % 2 == 0 { 1 } else { -1 });
            }
        }
        boundaries.push(SparseMat::from_triplets(sizes[n - 1], sizes[n], &trips));
    }
    let complex = ChainComplex::new(0, sizes, boundaries)
        .expect("bar boundaries compose to zero");
    Ok(BarComplex { complex, group_id: group.id(), bases })
}

impl BarComplex {
    pub fn group_id(&self) -> u64 {
        self.group_id
    }

    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, degree: usize) -> &BarBasis {
        &self.bases[degree]
    }

    pub fn chain_to_vector(&self, z: &BarChain) -> Result<Vec<BigInt>, BarError> {
        if z.group_id() != self.group_id {
            return Err(BarError::GroupMismatch);
        }
        if z.degree() > self.top_degree() {
            return Err(BarError::DegreeMismatch {
                left: z.degree(),
                right: self.top_degree(),
            });
        }
        let basis = &self.bases[z.degree()];
        let mut v = vec![BigInt::from(0); basis.size()];
        for (tuple, c) in z.terms() {
            v[basis.index_of(tuple)] = BigInt::from(c);
        }
        Ok(v)
    }

    pub fn vector_to_chain(
        &self,
        group: &FiniteGroup,
        degree: usize,
        v: &[BigInt],
    ) -> Result<BarChain, BarError> {
        if group.id() != self.group_id {
            return Err(BarError::GroupMismatch);
        }
        let basis = &self.bases[degree];
        assert_eq!(v.len(), basis.size());
        let mut z = BarChain::zero(group, degree);
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = c.to_i64().ok_or(BarError::CoefficientOverflow)?;
            z.accumulate_checked(group, &basis.tuple_at(i), coeff);
        }
        Ok(z)
    }
}

// ---- text format ----

/// Renders `+1 [(0,1;e)|(1,0;s)] -2 [...]` style literals; "0" for the zero
/// chain. Terms appear in the deterministic tuple order of the chain.
pub fn format_chain(group: &FiniteGroup, z: &BarChain) -> Result<String, BarError> {
    check_group(group, z)?;
    if z.is_zero() {
        return Ok("0".to_string());
    }
    let mut parts = Vec::new();
    for (tuple, c) in z.terms() {
        let labels: Vec<&str> = tuple.iter().map(|&g| group.label(g)).collect();
        parts.push(format!("{}{} [{}]", if c < 0 { "-" } else { "+" }, c.abs(), labels.join("|")));
    }
    Ok(parts.join(" "))
}

/// Parses the literal format produced by [`format_chain`]. Element syntax
/// follows the group kind: bare indices for cyclic groups, `(i,j)` for
/// products of two cyclics, `(a,b;e)`/`(a,b;s)` for GM₂.
pub fn parse_chain(group: &FiniteGroup, degree: usize, text: &str) -> Result<BarChain, BarError> {
    let trimmed = text.trim();
    if trimmed == "0" {
        return Ok(BarChain::zero(group, degree));
    }
    let mut z = BarChain::zero(group, degree);
    let bytes = trimmed.as_bytes();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos == bytes.len() {
            if first {
                return Err(BarError::Parse("empty literal".into()));
            }
            break;
        }
        // sign and coefficient
        let mut sign = 1i64;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -1;
            }
            pos += 1;
        } else if !first {
            return Err(BarError::Parse("expected sign between terms".into()));
        }
        skip_ws(&mut pos);
        let digits_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let coeff: i64 = if pos > digits_start {
            trimmed[digits_start..pos]
                .parse::<i64>()
                .map_err(|e| BarError::Parse(format!("bad coefficient: {e}")))?
        } else {
            1
        };
        skip_ws(&mut pos);
        if pos == bytes.len() || bytes[pos] != b'[' {
            return Err(BarError::Parse("expected '[' to open a tuple".into()));
        }
        let close = trimmed[pos..]
            .find(']')
            .ok_or_else(|| BarError::Parse("unclosed tuple".into()))?
            + pos;
        let inner = &trimmed[pos + 1..close];
        pos = close + 1;
        let elems: Vec<&str> = if inner.trim().is_empty() {
            vec![]
        } else {
            inner.split('|').collect()
        };
        if elems.len() != degree {
            return Err(BarError::DegreeMismatch { left: elems.len(), right: degree });
        }
        let mut tuple = Vec::with_capacity(elems.len());
        for e in elems {
            tuple.push(parse_element(group, e.trim())?);
        }
        z.accumulate_checked(group, &tuple, sign * coeff);
        first = false;
    }
    Ok(z)
}

/// Index of an element literal in the group's syntax.
pub fn parse_element(group: &FiniteGroup, text: &str) -> Result<u16, BarError> {
    use crate::groups::GroupKind;
    let bad = |m: &str| BarError::Parse(format!("bad element '{text}': {m}"));
    let idx = match group.kind() {
        GroupKind::Cyclic(_) | GroupKind::Opaque => {
            text.parse::<usize>().map_err(|_| bad("expected a bare index"))?
        }
        GroupKind::Product2(_, m) => {
            let inner = text
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| bad("expected (i,j)"))?;
            let (i, j) = inner.split_once(',').ok_or_else(|| bad("expected (i,j)"))?;
            let i: usize = i.trim().parse().map_err(|_| bad("bad first coordinate"))?;
            let j: usize = j.trim().parse().map_err(|_| bad("bad second coordinate"))?;
            i * *m as usize + j
        }
        GroupKind::Gm2(n) => {
            let inner = text
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| bad("expected (a,b;e) or (a,b;s)"))?;
            let (coords, eps) = inner.split_once(';').ok_or_else(|| bad("missing ';'"))?;
            let (a, b) = coords.split_once(',').ok_or_else(|| bad("expected a,b"))?;
            let a: usize = a.trim().parse().map_err(|_| bad("bad first coordinate"))?;
            let b: usize = b.trim().parse().map_err(|_| bad("bad second coordinate"))?;
            let e = match eps.trim() {
                "e" => 0usize,
                "s" => 1,
                _ => return Err(bad("component must be 'e' or 's'")),
            };
            let n = *n as usize;
            if a >= n || b >= n {
                return Err(BarError::ElementOutOfRange { index: a.max(b), order: group.order() });
            }
            e * n * n + a * n + b
        }
    };
    if idx >= group.order() {
        return Err(BarError::ElementOutOfRange { index: idx, order: group.order() });
    }
    Ok(idx as u16)
}
