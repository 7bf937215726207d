//! F_q- and F_{q^m}-subspaces of F_{q^m}^k in canonical reduced-echelon form.
//!
//! F_q coordinates of a vector (v_1, …, v_k) are read block by block with the
//! expansion basis 1, y, …, y^{m−1}: coordinate `i·m + j` is the y^j coefficient of v_i.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Code, FieldOps, FieldTower, GfError};
use crate::linalg::{self, PointEnumerator, RrefEnumerator};

/// Default bound on the number of subspaces or vectors a brute-force scan may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubspaceError {
    #[error("vector length {got} does not match ambient dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("enumeration of {count} objects exceeds the cap {cap}")]
    EnumerationCapExceeded { count: u128, cap: u64 },
    #[error("operation needs a nonzero subspace")]
    ZeroSubspace,
    #[error("stored rows are not in canonical reduced-echelon form")]
    NotCanonical,
    #[error("ambient dimension must be at least 1")]
    InvalidDimension,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// V(k, q^m) = F_{q^m}^k over a fixed tower.
#[derive(Clone, Debug)]
pub struct AmbientSpace {
    tower: Arc<FieldTower>,
    k: usize,
}

impl PartialEq for AmbientSpace {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && (Arc::ptr_eq(&self.tower, &other.tower) || *self.tower == *other.tower)
    }
}

impl Eq for AmbientSpace {}

impl AmbientSpace {
    pub fn new(tower: &Arc<FieldTower>, k: usize) -> Result<AmbientSpace, SubspaceError> {
        if k == 0 {
            return Err(SubspaceError::InvalidDimension);
        }
        Ok(AmbientSpace { tower: tower.clone(), k })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn m(&self) -> usize {
        self.tower.m()
    }
    pub fn q(&self) -> u32 {
        self.tower.q()
    }
    /// q^m, the size of the scalar field.
    pub fn big_q(&self) -> u32 {
        self.tower.order()
    }
    /// Dimension over F_q, namely mk.
    pub fn fq_dim(&self) -> usize {
        self.k * self.m()
    }

    /// Expands a vector of F_{q^m}^k into its mk F_q coordinates.
    pub fn expand(&self, v: &[Code]) -> Vec<Code> {
        let m = self.m();
        let mut out = Vec::with_capacity(self.k * m);
        for &x in v {
            for j in 0..m {
                out.push(self.tower.coord(x, j));
            }
        }
        out
    }

    /// Inverse of [`AmbientSpace::expand`].
    pub fn pack(&self, c: &[Code]) -> Vec<Code> {
        c.chunks(self.m()).map(|b| self.tower.from_coords(b)).collect()
    }

    /// Number of s-dimensional F_{q^m}-subspaces.
    pub fn subspace_count(&self, s: usize) -> Option<u128> {
        linalg::gaussian_binomial(self.k, s, self.big_q() as u64)
    }

    fn check_vec(&self, v: &[Code]) -> Result<(), SubspaceError> {
        if v.len() != self.k {
            return Err(SubspaceError::DimensionMismatch { expected: self.k, got: v.len() });
        }
        if v.iter().any(|&x| x >= self.big_q()) {
            return Err(GfError::OutOfRange(*v.iter().max().unwrap() as u64).into());
        }
        Ok(())
    }
}

/// F_q-dimension of {u ∈ ⟨basis⟩_{F_q} : P u = 0} where `basis` holds F_q-independent
/// vectors of F_{q^m}^k and `parity` holds rows over F_{q^m}.
pub fn meet_dim_with_kernel(tower: &FieldTower, basis: &[Vec<Code>], parity: &[Vec<Code>]) -> usize {
    let n = basis.len();
    if n == 0 || parity.is_empty() {
        return n;
    }
    let m = tower.m();
    let ncols = m * parity.len();
    let mut a = vec![0; n * ncols];
    for (r, b) in basis.iter().enumerate() {
        for (pi, prow) in parity.iter().enumerate() {
            let val = linalg::dot(tower, prow, b);
            for j in 0..m {
                a[r * ncols + pi * m + j] = tower.coord(val, j);
            }
        }
    }
    n - linalg::rank_flat(tower.base(), &mut a, n, ncols)
}

/// The vectors spanning {u ∈ ⟨basis⟩_{F_q} : P u = 0}, as F_{q^m}^k vectors.
pub fn meet_with_kernel(tower: &FieldTower, basis: &[Vec<Code>], parity: &[Vec<Code>]) -> Vec<Vec<Code>> {
    let n = basis.len();
    if parity.is_empty() {
        return basis.to_vec();
    }
    let m = tower.m();
    let images: Vec<Vec<Code>> = basis
        .iter()
        .map(|b| {
            parity
                .iter()
                .flat_map(|prow| {
                    let val = linalg::dot(tower, prow, b);
                    (0..m).map(move |j| tower.coord(val, j))
                })
                .collect()
        })
        .collect();
    // Left kernel of the images matrix: kernel of its transpose.
    let ncols = m * parity.len();
    let transpose: Vec<Vec<Code>> = (0..ncols).map(|c| images.iter().map(|r| r[c]).collect()).collect();
    let combos = linalg::kernel(tower.base(), &transpose, n);
    combos
        .iter()
        .map(|lam| {
            let mut v = vec![0; basis[0].len()];
            for (&l, b) in lam.iter().zip(basis) {
                if l != 0 {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = tower.add(*x, tower.mul(l, y));
                    }
                }
            }
            v
        })
        .collect()
}

/// An F_q-subspace of F_{q^m}^k stored as an RREF basis over F_q of width mk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqSubspace {
    ambient: AmbientSpace,
    rows: Vec<Vec<Code>>,
}

impl FqSubspace {
    pub fn zero(ambient: &AmbientSpace) -> FqSubspace {
        FqSubspace { ambient: ambient.clone(), rows: Vec::new() }
    }

    pub fn full(ambient: &AmbientSpace) -> FqSubspace {
        let n = ambient.fq_dim();
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        FqSubspace { ambient: ambient.clone(), rows }
    }

    /// Canonical subspace spanned by rows of F_q coordinates (width mk).
    pub fn from_fq_rows(ambient: &AmbientSpace, rows: Vec<Vec<Code>>) -> Result<FqSubspace, SubspaceError> {
        let n = ambient.fq_dim();
        let q = ambient.q();
        for r in &rows {
            if r.len() != n {
                return Err(SubspaceError::DimensionMismatch { expected: n, got: r.len() });
            }
            if r.iter().any(|&x| x >= q) {
                return Err(GfError::OutOfRange(*r.iter().max().unwrap() as u64).into());
            }
        }
        let mut rows = rows;
        linalg::rref(ambient.tower.base(), &mut rows);
        Ok(FqSubspace { ambient: ambient.clone(), rows })
    }

    /// Loads rows that must already be canonical.
    pub fn from_canonical_rows(ambient: &AmbientSpace, rows: Vec<Vec<Code>>) -> Result<FqSubspace, SubspaceError> {
        let s = FqSubspace::from_fq_rows(ambient, rows.clone())?;
        if s.rows != rows {
            return Err(SubspaceError::NotCanonical);
        }
        Ok(s)
    }

    /// F_q-span of vectors of F_{q^m}^k.
    pub fn span(ambient: &AmbientSpace, vectors: &[Vec<Code>]) -> Result<FqSubspace, SubspaceError> {
        for v in vectors {
            ambient.check_vec(v)?;
        }
        FqSubspace::from_fq_rows(ambient, vectors.iter().map(|v| ambient.expand(v)).collect())
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }
    pub fn rows(&self) -> &[Vec<Code>] {
        &self.rows
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Basis rows as vectors of F_{q^m}^k.
    pub fn basis_vectors(&self) -> Vec<Vec<Code>> {
        self.rows.iter().map(|r| self.ambient.pack(r)).collect()
    }

    fn same_ambient(&self, other: &FqSubspace) -> Result<(), SubspaceError> {
        if self.ambient != other.ambient {
            return Err(SubspaceError::AmbientMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, v: &[Code]) -> bool {
        let mut c = self.ambient.expand(v);
        let pivots = linalg::pivots_of(&self.rows);
        linalg::reduce(self.ambient.tower.base(), &self.rows, &pivots, &mut c);
        c.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &FqSubspace) -> bool {
        self.ambient == other.ambient && self.basis_vectors().iter().all(|v| other.contains(v))
    }

    /// (U ∩ W, U + W) by the Zassenhaus method; Grassmann's identity is checked.
    pub fn meet_join(&self, other: &FqSubspace) -> Result<(FqSubspace, FqSubspace), SubspaceError> {
        self.same_ambient(other)?;
        let n = self.ambient.fq_dim();
        let f = self.ambient.tower.base();
        let mut z: Vec<Vec<Code>> = self.rows.iter().map(|r| [r.as_slice(), r.as_slice()].concat()).collect();
        z.extend(other.rows.iter().map(|r| [r.as_slice(), &vec![0; n]].concat()));
        if z.is_empty() {
            return Ok((self.clone(), self.clone()));
        }
        linalg::rref(f, &mut z);
        let mut join = Vec::new();
        let mut meet = Vec::new();
        for row in z {
            if row[..n].iter().any(|&x| x != 0) {
                join.push(row[..n].to_vec());
            } else {
                meet.push(row[n..].to_vec());
            }
        }
        let meet = FqSubspace::from_fq_rows(&self.ambient, meet)?;
        let join = FqSubspace::from_fq_rows(&self.ambient, join)?;
        if meet.dim() + join.dim() != self.dim() + other.dim() {
            return Err(SubspaceError::Invariant("Grassmann identity".into()));
        }
        Ok((meet, join))
    }

    pub fn meet(&self, other: &FqSubspace) -> Result<FqSubspace, SubspaceError> {
        Ok(self.meet_join(other)?.0)
    }

    pub fn join(&self, other: &FqSubspace) -> Result<FqSubspace, SubspaceError> {
        Ok(self.meet_join(other)?.1)
    }

    /// Smallest F_{q^m}-subspace containing U.
    pub fn fqm_span(&self) -> FqmSubspace {
        FqmSubspace::new_unchecked(&self.ambient, self.basis_vectors())
    }

    /// dim_{F_q}(U ∩ W) for an F_{q^m}-subspace W.
    pub fn meet_dim_fqm(&self, w: &FqmSubspace) -> usize {
        meet_dim_with_kernel(&self.ambient.tower, &self.basis_vectors(), &w.parity_check())
    }

    /// U ∩ W for an F_{q^m}-subspace W.
    pub fn meet_fqm(&self, w: &FqmSubspace) -> FqSubspace {
        let vecs = meet_with_kernel(&self.ambient.tower, &self.basis_vectors(), &w.parity_check());
        FqSubspace::span(&self.ambient, &vecs).expect("vectors come from the same ambient")
    }

    /// Every nonzero vector of U, visited through all F_q-combinations of the basis.
    pub fn vectors(&self, cap: u64) -> Result<Vec<Vec<Code>>, SubspaceError> {
        let q = self.ambient.q() as u128;
        let count = q.pow(self.dim() as u32);
        if count > cap as u128 {
            return Err(SubspaceError::EnumerationCapExceeded { count, cap });
        }
        let f = self.ambient.tower.base();
        let n = self.ambient.fq_dim();
        let out = linalg::all_vectors(q as u32, self.dim())
            .skip(1)
            .map(|lam| {
                let mut c = vec![0; n];
                for (&l, row) in lam.iter().zip(&self.rows) {
                    if l != 0 {
                        for (x, &y) in c.iter_mut().zip(row) {
                            *x = f.add(*x, f.mul(l, y));
                        }
                    }
                }
                self.ambient.pack(&c)
            })
            .collect();
        Ok(out)
    }

    /// The linear set L_U with point weights.
    pub fn linear_set(&self, cap: u64) -> Result<WeightedPointSet, SubspaceError> {
        if self.is_zero() {
            return Err(SubspaceError::ZeroSubspace);
        }
        let t = &self.ambient.tower;
        let mut hits: BTreeMap<Vec<Code>, u64> = BTreeMap::new();
        for v in self.vectors(cap)? {
            let p = linalg::normalize_projective(&**t, &v).expect("nonzero vector");
            *hits.entry(p).or_insert(0) += 1;
        }
        let q = t.q() as u64;
        let mut entries = BTreeMap::new();
        for (p, count) in hits {
            // A point of weight w carries q^w − 1 vectors of U.
            let mut w = 0u32;
            let mut size = 1u64;
            while size - 1 < count {
                size *= q;
                w += 1;
            }
            if size - 1 != count {
                return Err(SubspaceError::Invariant(format!("point hit {count} times")));
            }
            entries.insert(p, w);
        }
        let set = WeightedPointSet { ambient: self.ambient.clone(), entries };
        let lhs: u64 = set.weight_counts().iter().map(|(&i, &n)| n * (q.pow(i) - 1) / (q - 1)).sum();
        let rhs = (q.pow(self.dim() as u32) - 1) / (q - 1);
        if lhs != rhs {
            return Err(SubspaceError::Invariant("weight-count identity for linear sets".into()));
        }
        Ok(set)
    }

    /// U^{τ′} = {v : Tr(Σ u_i v_i) = 0 for all u ∈ U}.
    pub fn ordinary_dual(&self) -> Result<FqSubspace, SubspaceError> {
        let d = self.trace_dual();
        if d.dim() + self.dim() != self.ambient.fq_dim() || d.trace_dual() != *self {
            return Err(SubspaceError::Invariant("ordinary dual is not an involution".into()));
        }
        Ok(d)
    }

    fn trace_dual(&self) -> FqSubspace {
        let t = &self.ambient.tower;
        let m = t.m();
        let n = self.ambient.fq_dim();
        let gram: Vec<Vec<Code>> = (0..m)
            .map(|j| {
                (0..m)
                    .map(|l| {
                        let yj = t.pow(t.generator(), j as u64);
                        let yl = t.pow(t.generator(), l as u64);
                        t.trace(t.mul(yj, yl))
                    })
                    .collect()
            })
            .collect();
        let f = t.base();
        // Row u ↦ u G with G block-diagonal; then the dual is the right kernel.
        let images: Vec<Vec<Code>> = self
            .rows
            .iter()
            .map(|r| {
                let mut out = vec![0; n];
                for blk in 0..self.ambient.k {
                    let seg = &r[blk * m..(blk + 1) * m];
                    let prod = linalg::vec_mat(f, seg, &gram);
                    out[blk * m..(blk + 1) * m].copy_from_slice(&prod);
                }
                out
            })
            .collect();
        let rows = linalg::kernel(f, &images, n);
        FqSubspace { ambient: self.ambient.clone(), rows }
    }
}

/// An F_{q^m}-subspace of F_{q^m}^k stored as an RREF basis over F_{q^m}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqmSubspace {
    ambient: AmbientSpace,
    rows: Vec<Vec<Code>>,
}

impl FqmSubspace {
    pub fn new(ambient: &AmbientSpace, rows: Vec<Vec<Code>>) -> Result<FqmSubspace, SubspaceError> {
        for r in &rows {
            ambient.check_vec(r)?;
        }
        Ok(FqmSubspace::new_unchecked(ambient, rows))
    }

    fn new_unchecked(ambient: &AmbientSpace, mut rows: Vec<Vec<Code>>) -> FqmSubspace {
        linalg::rref(&**ambient.tower(), &mut rows);
        FqmSubspace { ambient: ambient.clone(), rows }
    }

    pub fn from_canonical_rows(ambient: &AmbientSpace, rows: Vec<Vec<Code>>) -> Result<FqmSubspace, SubspaceError> {
        let s = FqmSubspace::new(ambient, rows.clone())?;
        if s.rows != rows {
            return Err(SubspaceError::NotCanonical);
        }
        Ok(s)
    }

    pub fn zero(ambient: &AmbientSpace) -> FqmSubspace {
        FqmSubspace { ambient: ambient.clone(), rows: Vec::new() }
    }

    pub fn full(ambient: &AmbientSpace) -> FqmSubspace {
        let k = ambient.k;
        FqmSubspace::new_unchecked(
            ambient,
            (0..k)
                .map(|i| {
                    let mut r = vec![0; k];
                    r[i] = 1;
                    r
                })
                .collect(),
        )
    }

    /// The hyperplane {v : Σ a_i v_i = 0}.
    pub fn hyperplane(ambient: &AmbientSpace, normal: &[Code]) -> Result<FqmSubspace, SubspaceError> {
        ambient.check_vec(normal)?;
        if normal.iter().all(|&x| x == 0) {
            return Err(SubspaceError::ZeroSubspace);
        }
        let rows = linalg::kernel(&**ambient.tower(), &[normal.to_vec()], ambient.k);
        Ok(FqmSubspace { ambient: ambient.clone(), rows })
    }

    /// Subspace cut out by the given rows: {v : P v = 0}.
    pub fn from_parity(ambient: &AmbientSpace, parity: &[Vec<Code>]) -> FqmSubspace {
        let rows = linalg::kernel(&**ambient.tower(), parity, ambient.k);
        FqmSubspace { ambient: ambient.clone(), rows }
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }
    pub fn rows(&self) -> &[Vec<Code>] {
        &self.rows
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Rows of a matrix P with W = {v : P v = 0} (a basis of the dot-product dual W^τ).
    pub fn parity_check(&self) -> Vec<Vec<Code>> {
        linalg::kernel(&**self.ambient.tower(), &self.rows, self.ambient.k)
    }

    /// The dot-product dual W^τ.
    pub fn dual(&self) -> FqmSubspace {
        FqmSubspace { ambient: self.ambient.clone(), rows: self.parity_check() }
    }

    /// W regarded as an F_q-subspace of dimension m·dim W.
    pub fn expand(&self) -> FqSubspace {
        let t = self.ambient.tower();
        let mut vecs = Vec::new();
        for r in &self.rows {
            let mut scalar = 1;
            for _ in 0..t.m() {
                vecs.push(r.iter().map(|&x| t.mul(scalar, x)).collect::<Vec<_>>());
                scalar = t.mul(scalar, t.generator());
            }
        }
        FqSubspace::span(&self.ambient, &vecs).expect("same ambient")
    }

    pub fn contains(&self, v: &[Code]) -> bool {
        let t = self.ambient.tower();
        self.parity_check().iter().all(|p| linalg::dot(&**t, p, v) == 0)
    }

    /// dim_{F_{q^m}}(self ∩ other).
    pub fn meet_dim(&self, other: &FqmSubspace) -> usize {
        let mut both = self.rows.clone();
        both.extend(other.rows.iter().cloned());
        self.dim() + other.dim() - linalg::rank(&**self.ambient.tower(), &both)
    }
}

/// The s-dimensional F_{q^m}-subspaces of an ambient space as an indexed family.
/// Hyperplanes (s = k−1) are indexed by canonical normal vectors; other s use
/// reduced-echelon enumeration.
#[derive(Clone, Debug)]
pub struct SubspaceFamily {
    ambient: AmbientSpace,
    s: usize,
    space: FamilySpace,
}

#[derive(Clone, Debug)]
enum FamilySpace {
    Normals(PointEnumerator),
    Echelon(RrefEnumerator),
}

impl SubspaceFamily {
    pub fn new(ambient: &AmbientSpace, s: usize, cap: u64) -> Result<SubspaceFamily, SubspaceError> {
        if s + 1 == ambient.k && ambient.k >= 2 {
            let e = PointEnumerator::new(ambient.big_q(), ambient.k);
            check_cap(e.len(), cap)?;
            return Ok(SubspaceFamily { ambient: ambient.clone(), s, space: FamilySpace::Normals(e) });
        }
        SubspaceFamily::echelon(ambient, s, cap)
    }

    /// Always the generic reduced-echelon path.
    pub fn echelon(ambient: &AmbientSpace, s: usize, cap: u64) -> Result<SubspaceFamily, SubspaceError> {
        if s > ambient.k {
            return Err(SubspaceError::DimensionMismatch { expected: ambient.k, got: s });
        }
        let e = RrefEnumerator::new(ambient.big_q(), ambient.k, s)
            .ok_or(SubspaceError::EnumerationCapExceeded { count: u128::MAX, cap })?;
        check_cap(e.len(), cap)?;
        Ok(SubspaceFamily { ambient: ambient.clone(), s, space: FamilySpace::Echelon(e) })
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> u128 {
        match &self.space {
            FamilySpace::Normals(e) => e.len(),
            FamilySpace::Echelon(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rows P whose common kernel is the idx-th subspace.
    pub fn parity(&self, idx: u128) -> Vec<Vec<Code>> {
        match &self.space {
            FamilySpace::Normals(e) => vec![e.nth(idx)],
            FamilySpace::Echelon(e) => linalg::kernel(&**self.ambient.tower(), &e.nth(idx), self.ambient.k),
        }
    }

    pub fn subspace(&self, idx: u128) -> FqmSubspace {
        match &self.space {
            FamilySpace::Normals(e) => FqmSubspace::from_parity(&self.ambient, &[e.nth(idx)]),
            FamilySpace::Echelon(e) => FqmSubspace { ambient: self.ambient.clone(), rows: e.nth(idx) },
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = FqmSubspace> + '_ {
        (0..self.len()).map(move |i| self.subspace(i))
    }
}

fn check_cap(count: u128, cap: u64) -> Result<(), SubspaceError> {
    if count > cap as u128 {
        return Err(SubspaceError::EnumerationCapExceeded { count, cap });
    }
    Ok(())
}

/// Every s-dimensional F_{q^m}-subspace exactly once.
pub fn enumerate_fqm_subspaces(ambient: &AmbientSpace, s: usize, cap: u64) -> Result<SubspaceFamily, SubspaceError> {
    SubspaceFamily::new(ambient, s, cap)
}

/// Projective points with positive weights, keyed by canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPointSet {
    ambient: AmbientSpace,
    entries: BTreeMap<Vec<Code>, u32>,
}

impl WeightedPointSet {
    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }
    pub fn entries(&self) -> &BTreeMap<Vec<Code>, u32> {
        &self.entries
    }
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn weight(&self, point: &[Code]) -> u32 {
        self.entries.get(point).copied().unwrap_or(0)
    }
    /// weight ↦ number of points of that weight.
    pub fn weight_counts(&self) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for &w in self.entries.values() {
            *out.entry(w).or_insert(0) += 1;
        }
        out
    }
    pub fn is_scattered(&self) -> bool {
        self.entries.values().all(|&w| w == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;

    fn f4_plane() -> AmbientSpace {
        AmbientSpace::new(&FieldTower::with_defaults(2, 1, 2).unwrap(), 2).unwrap()
    }

    fn f9_plane() -> AmbientSpace {
        AmbientSpace::new(&FieldTower::with_defaults(3, 1, 2).unwrap(), 2).unwrap()
    }

    #[test]
    fn canonical_subgeometry() {
        let a = f4_plane();
        let u = FqSubspace::span(&a, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(u.dim(), 2);
        assert_eq!(u.fqm_span().dim(), 2);
        let ls = u.linear_set(1000).unwrap();
        assert_eq!(ls.len(), 3);
        assert!(ls.is_scattered());
        // ker Tr_{4/2} = F_2, so the canonical subgeometry is self-dual.
        assert_eq!(u.ordinary_dual().unwrap(), u);
    }

    #[test]
    fn pseudoregulus_member_is_scattered() {
        let a = f9_plane();
        let t = a.tower().clone();
        let vecs: Vec<Vec<Code>> = [1, 3].iter().map(|&x| vec![x, t.frobenius(x, 1)]).collect();
        let u = FqSubspace::span(&a, &vecs).unwrap();
        assert_eq!(u.dim(), 2);
        let ls = u.linear_set(1000).unwrap();
        assert_eq!(ls.len(), 4);
        assert!(ls.is_scattered());
    }

    #[test]
    fn meet_join_with_a_line() {
        let a = f4_plane();
        let u = FqSubspace::span(&a, &[vec![1, 0], vec![0, 1]]).unwrap();
        let w = FqmSubspace::new(&a, vec![vec![1, 0]]).unwrap().expand();
        assert_eq!(w.dim(), 2);
        let (meet, join) = u.meet_join(&w).unwrap();
        assert_eq!((meet.dim(), join.dim()), (1, 3));
        assert!(meet.contains(&[1, 0]));
        let (mm, jj) = u.meet_join(&u).unwrap();
        assert_eq!((mm.clone(), jj), (u.clone(), u.clone()));
        let z = FqSubspace::zero(&a);
        assert!(u.meet(&z).unwrap().is_zero());
        let ls = w.linear_set(100).unwrap();
        assert_eq!(ls.len(), 1);
        assert_eq!(ls.weight(&[1, 0]), 2);
    }

    #[test]
    fn dual_dimension_identity_example() {
        let a = f4_plane();
        let u = FqSubspace::span(&a, &[vec![1, 0], vec![0, 1]]).unwrap();
        let w = FqmSubspace::new(&a, vec![vec![1, 0]]).unwrap();
        let lhs = u.ordinary_dual().unwrap().meet_dim_fqm(&w.dual()) as i64 - u.meet_dim_fqm(&w) as i64;
        assert_eq!(lhs, 4 - 2 - 2);
        assert_eq!(FqSubspace::zero(&a).ordinary_dual().unwrap().dim(), 4);
        // The F_q-expansion of W^τ is the trace dual of the expansion of W.
        assert_eq!(w.expand().ordinary_dual().unwrap(), w.dual().expand());
    }

    #[test]
    fn fqm_span_cases() {
        let a = f4_plane();
        let u = FqSubspace::span(&a, &[vec![1, 0]]).unwrap();
        assert_eq!(u.fqm_span(), FqmSubspace::new(&a, vec![vec![1, 0]]).unwrap());
        assert_eq!(FqSubspace::zero(&a).fqm_span().dim(), 0);
    }

    #[test]
    fn enumeration_counts() {
        let a = f4_plane();
        assert_eq!(enumerate_fqm_subspaces(&a, 1, 100).unwrap().len(), 5);
        assert_eq!(enumerate_fqm_subspaces(&a, 0, 100).unwrap().len(), 1);
        let big = AmbientSpace::new(&FieldTower::with_defaults(3, 1, 3).unwrap(), 4).unwrap();
        assert_eq!(enumerate_fqm_subspaces(&big, 3, DEFAULT_ENUMERATION_CAP).unwrap().len(), 20440);
        assert!(matches!(
            enumerate_fqm_subspaces(&big, 2, 1000),
            Err(SubspaceError::EnumerationCapExceeded { .. })
        ));
    }

    #[test]
    fn hyperplane_sweep_agrees_with_echelon_path() {
        let a = AmbientSpace::new(&FieldTower::with_defaults(2, 1, 2).unwrap(), 3).unwrap();
        let fast = SubspaceFamily::new(&a, 2, 1000).unwrap();
        let slow = SubspaceFamily::echelon(&a, 2, 1000).unwrap();
        let mut x: Vec<_> = fast.iter().map(|w| w.rows().to_vec()).collect();
        let mut y: Vec<_> = slow.iter().map(|w| w.rows().to_vec()).collect();
        x.sort();
        y.sort();
        assert_eq!(x.len(), 21);
        assert_eq!(x, y);
    }

    #[test]
    fn non_canonical_rows_rejected() {
        let a = f4_plane();
        let err = FqSubspace::from_canonical_rows(&a, vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0]]).unwrap_err();
        assert_eq!(err, SubspaceError::NotCanonical);
    }
}
