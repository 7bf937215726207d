//! Subspace designs: constructions, brute-force certification of (s, A) parameters,
//! dualities, hyperplane histograms and the cutting property.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{self, Code, FieldOps, FieldTower, GfError};
use crate::linalg;
use crate::par;
use crate::subspace::{
    meet_dim_with_kernel, meet_with_kernel, AmbientSpace, FqSubspace, FqmSubspace, SubspaceError, SubspaceFamily,
};
use crate::sumrank::{self, SumRankError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("a design needs at least one member")]
    EmptyDesign,
    #[error("vectors do not form an F_{{q^m}}-basis of the ambient space")]
    NotABasis,
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("norms of the twisting elements are not pairwise distinct")]
    NormClash,
    #[error("(−1)^{{km}}·N(η) lies in the subgroup generated by the norms")]
    EtaInNormGroup,
    #[error("blocks have total dimension {have} < k = {need}")]
    TooFewBlocks { have: usize, need: usize },
    #[error("{t} members requested but at most {max} are allowed")]
    TooManyBlocks { t: usize, max: usize },
    #[error("designs do not share the tower and number of members")]
    MixedParameters,
    #[error("Frobenius exponent {s} is not coprime to m = {m}")]
    BadExponent { s: usize, m: usize },
    #[error("gcd(k = {k}, m = {m}) ≠ 1")]
    GcdViolation { k: usize, m: usize },
    #[error("member {member}: increment {increment} exceeds the available {max}")]
    IncrementTooLarge { member: usize, increment: usize, max: usize },
    #[error("dual members span only {span} < {needed} dimensions")]
    DualSpanTooSmall { span: usize, needed: usize },
    #[error("s = {s} is outside 1..={k}")]
    InvalidS { s: usize, k: usize },
    #[error("the design is not an (s = {s}, A = {a}) design: some W meets it in {found}")]
    NotADesign { s: usize, a: usize, found: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    SumRank(#[from] Box<SumRankError>),
}

impl From<SumRankError> for DesignError {
    fn from(e: SumRankError) -> Self {
        DesignError::SumRank(Box::new(e))
    }
}

/// An ordered tuple (U_1, …, U_t) of F_q-subspaces of one ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceDesign {
    ambient: AmbientSpace,
    members: Vec<FqSubspace>,
}

impl SubspaceDesign {
    pub fn new(ambient: &AmbientSpace, members: Vec<FqSubspace>) -> Result<SubspaceDesign, DesignError> {
        if members.is_empty() {
            return Err(DesignError::EmptyDesign);
        }
        if members.iter().any(|u| u.ambient() != ambient) {
            return Err(SubspaceError::AmbientMismatch.into());
        }
        Ok(SubspaceDesign { ambient: ambient.clone(), members })
    }

    /// Members given as F_q-spanning sets of vectors of F_{q^m}^k.
    pub fn from_spanning_sets(ambient: &AmbientSpace, sets: &[Vec<Vec<Code>>]) -> Result<SubspaceDesign, DesignError> {
        let members = sets.iter().map(|s| FqSubspace::span(ambient, s)).collect::<Result<Vec<_>, _>>()?;
        SubspaceDesign::new(ambient, members)
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }
    pub fn tower(&self) -> &Arc<FieldTower> {
        self.ambient.tower()
    }
    pub fn members(&self) -> &[FqSubspace] {
        &self.members
    }
    pub fn t(&self) -> usize {
        self.members.len()
    }
    pub fn dims(&self) -> Vec<usize> {
        self.members.iter().map(FqSubspace::dim).collect()
    }
    /// N = Σ dim U_i.
    pub fn total_dim(&self) -> usize {
        self.members.iter().map(FqSubspace::dim).sum()
    }

    /// dim_{F_{q^m}} ⟨U_1, …, U_t⟩.
    pub fn span_dim(&self) -> usize {
        let all: Vec<Vec<Code>> = self.members.iter().flat_map(|u| u.basis_vectors()).collect();
        linalg::rank(&**self.tower(), &all)
    }

    fn member_bases(&self) -> Vec<Vec<Vec<Code>>> {
        self.members.iter().map(FqSubspace::basis_vectors).collect()
    }
}

/// Σ_i dim(U_i ∩ W) for every W of the family, in family order.
pub fn intersection_sums(design: &SubspaceDesign, family: &SubspaceFamily) -> Vec<u32> {
    let bases = design.member_bases();
    let tower = design.tower().clone();
    par::map_indices(family.len(), |i| {
        let p = family.parity(i);
        bases.iter().map(|b| meet_dim_with_kernel(&tower, b, &p) as u32).sum()
    })
}

/// Exact answer to "smallest A making D an (s, A) design" with a maximizing witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignProfile {
    pub s: usize,
    pub a_min: usize,
    pub span_dim: usize,
    /// First maximizer in enumeration order.
    pub witness: FqmSubspace,
    pub non_degenerate: bool,
}

pub fn design_profile(design: &SubspaceDesign, s: usize, cap: u64) -> Result<DesignProfile, DesignError> {
    let k = design.ambient.k();
    if s == 0 || s > k {
        return Err(DesignError::InvalidS { s, k });
    }
    let family = SubspaceFamily::new(&design.ambient, s, cap)?;
    let sums = intersection_sums(design, &family);
    let (idx, &a) = sums
        .iter()
        .enumerate()
        .rev()
        .max_by_key(|&(_, v)| *v)
        .expect("families are nonempty");
    let span_dim = design.span_dim();
    let a_min = a as usize;
    if span_dim >= s && a_min < s {
        return Err(DesignError::Invariant(format!("span {span_dim} ≥ s = {s} but A_min = {a_min} < s")));
    }
    Ok(DesignProfile {
        s,
        a_min,
        span_dim,
        witness: family.subspace(idx as u128),
        non_degenerate: span_dim == k,
    })
}

/// Errors with [`DesignError::NotADesign`] unless D is an (s, a) design.
pub fn certify(design: &SubspaceDesign, s: usize, a: usize, cap: u64) -> Result<DesignProfile, DesignError> {
    let p = design_profile(design, s, cap)?;
    if p.a_min > a {
        return Err(DesignError::NotADesign { s, a, found: p.a_min });
    }
    Ok(p)
}

/// (h_0, h_1): the number of hyperplanes meeting a maximum 1-design of V(k, q^m) with t
/// members in tm(k−2)/2 and tm(k−2)/2 + 1 dimensions. `None` when mk is odd, k < 2 or the
/// parameters admit no integral solution.
pub fn h_values(q: u64, m: u32, k: u32, t: u64) -> Option<(u128, u128)> {
    if k < 2 || (m * k) % 2 == 1 {
        return None;
    }
    let q = q as i128;
    let t = t as i128;
    let p = |e: u32| q.checked_pow(e);
    let half = p(m * k / 2)?;
    let low = p(m * (k - 2) / 2)?;
    let qm = p(m)?;
    let num = t * ((half - 1) * (p(m * (k - 1))? - 1) - (low - 1) * (p(m * k)? - 1));
    let den = (qm - 1) * (q - 1) * low;
    if num < 0 || num % den != 0 {
        return None;
    }
    let h1 = num / den;
    let total = (p(m * k)? - 1) / (qm - 1);
    let h0 = total - h1;
    if h0 < 0 {
        return None;
    }
    Some((h0 as u128, h1 as u128))
}

/// Whether t ≤ (q−1)(q^{mk/2}+1)/(q^m−1), the size limit for maximum 1-designs.
pub fn t_bound_satisfied(q: u64, m: u32, k: u32, t: u64) -> bool {
    let q = q as u128;
    let lhs = t as u128 * (q.pow(m) - 1);
    lhs <= (q - 1) * (q.pow(m * k / 2) + 1)
}

/// Whether t equals the maximum-1-design size limit exactly.
pub fn t_bound_attained(q: u64, m: u32, k: u32, t: u64) -> bool {
    let q = q as u128;
    t as u128 * (q.pow(m) - 1) == (q - 1) * (q.pow(m * k / 2) + 1)
}

/// Hyperplane histogram c ↦ #{H : Σ dim(U_i ∩ H) = c}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneHistogram {
    pub counts: BTreeMap<usize, u128>,
    /// Set when the design was certified a maximum 1-design and the histogram was
    /// matched against the closed-form (h_0, h_1).
    pub max1_checked: bool,
}

/// All dims equal mk/2 and every point meets the design in at most one dimension.
pub fn is_maximum_one_design(design: &SubspaceDesign, cap: u64) -> Result<bool, DesignError> {
    let (m, k) = (design.ambient.m(), design.ambient.k());
    if m < 2 || (m * k) % 2 == 1 || design.dims().iter().any(|&n| n != m * k / 2) {
        return Ok(false);
    }
    Ok(design_profile(design, 1, cap)?.a_min == 1)
}

pub fn hyperplane_weight_distribution(design: &SubspaceDesign, cap: u64) -> Result<HyperplaneHistogram, DesignError> {
    let k = design.ambient.k();
    let family = SubspaceFamily::new(&design.ambient, k - 1, cap)?;
    let mut counts = BTreeMap::new();
    for c in intersection_sums(design, &family) {
        *counts.entry(c as usize).or_insert(0u128) += 1;
    }
    let mut max1_checked = false;
    if k >= 2 && is_maximum_one_design(design, cap)? {
        check_max1_histogram(design, &counts)?;
        max1_checked = true;
    }
    Ok(HyperplaneHistogram { counts, max1_checked })
}

fn check_max1_histogram(design: &SubspaceDesign, counts: &BTreeMap<usize, u128>) -> Result<(), DesignError> {
    let a = &design.ambient;
    let (q, m, k, t) = (a.q() as u64, a.m(), a.k(), design.t());
    let base = t * m * (k - 2) / 2;
    let (h0, h1) = h_values(q, m as u32, k as u32, t as u64)
        .ok_or_else(|| DesignError::Invariant("closed-form h-values are not integral".into()))?;
    let mut expected = BTreeMap::new();
    if h0 > 0 {
        expected.insert(base, h0);
    }
    if h1 > 0 {
        expected.insert(base + 1, h1);
    }
    if *counts != expected {
        return Err(DesignError::Invariant(format!(
            "hyperplane histogram {counts:?} differs from closed form {expected:?}"
        )));
    }
    Ok(())
}

/// Verdict of the cutting test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuttingReport {
    pub cutting: bool,
    /// First hyperplane H (enumeration order) with ⟨U_i ∩ H⟩_{F_{q^m}} ≠ H.
    pub witness: Option<FqmSubspace>,
    /// Σ dim(U_i ∩ H) is the same for every H.
    pub constant_sum: bool,
}

pub fn is_cutting(design: &SubspaceDesign, cap: u64) -> Result<CuttingReport, DesignError> {
    let k = design.ambient.k();
    let family = SubspaceFamily::new(&design.ambient, k - 1, cap)?;
    let bases = design.member_bases();
    let tower = design.tower().clone();
    let per_h: Vec<(bool, u32)> = par::map_indices(family.len(), |i| {
        let p = family.parity(i);
        let mut gens = Vec::new();
        let mut sum = 0;
        for b in &bases {
            let meet = meet_with_kernel(&tower, b, &p);
            sum += meet.len() as u32;
            gens.extend(meet);
        }
        (linalg::rank(&*tower, &gens) == k - 1, sum)
    });
    let bad = per_h.iter().position(|&(ok, _)| !ok);
    let first = per_h[0].1;
    let constant_sum = per_h.iter().all(|&(_, s)| s == first);
    if constant_sum && first > 0 && bad.is_some() {
        return Err(DesignError::Invariant("constant positive hyperplane sum without cutting".into()));
    }
    Ok(CuttingReport {
        cutting: bad.is_none(),
        witness: bad.map(|i| family.subspace(i as u128)),
        constant_sum,
    })
}

/// Per-s entry of a classification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub profile: DesignProfile,
    pub is_design: bool,
    pub is_maximum: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyReport {
    pub dims: Vec<usize>,
    pub levels: Vec<LevelReport>,
    /// s-design ⇒ i-design for every i ≤ s among the computed levels.
    pub monotone: bool,
    /// MSRD verdict of the associated code, in the regimes where optimality is defined.
    pub optimal: Option<bool>,
    /// t-bound satisfaction, reported when D is a maximum 1-design.
    pub t_bound_ok: Option<bool>,
}

pub fn classify(design: &SubspaceDesign, max_s: usize, cap: u64) -> Result<ClassifyReport, DesignError> {
    let a = &design.ambient;
    let (q, m, k) = (a.q() as u64, a.m(), a.k());
    let dims = design.dims();
    let max_s = max_s.min(k);
    let mut levels: Vec<LevelReport> = Vec::new();
    for s in 1..=max_s {
        let profile = design_profile(design, s, cap)?;
        let is_design = profile.a_min == s && profile.span_dim >= s;
        let fits = m > s && (m * k) % (s + 1) == 0;
        let is_maximum = is_design && fits && dims.iter().all(|&n| n == m * k / (s + 1));
        if is_design && m > s && dims.iter().any(|&n| n * (s + 1) > m * k) {
            return Err(DesignError::Invariant(format!("{s}-design member exceeds mk/(s+1)")));
        }
        if is_maximum && !profile.non_degenerate {
            return Err(DesignError::Invariant(format!("maximum {s}-design is degenerate")));
        }
        levels.push(LevelReport { profile, is_design, is_maximum });
    }
    let monotone = levels
        .iter()
        .enumerate()
        .all(|(i, l)| !l.is_design || levels[..i].iter().all(|x| x.is_design));
    if !monotone {
        return Err(DesignError::Invariant("an s-design fails to be an i-design for some i < s".into()));
    }
    let optimal = optimal_verdict(design, &levels, cap)?;
    let t_bound_ok = levels
        .first()
        .filter(|l| l.is_maximum)
        .map(|_| t_bound_satisfied(q, m as u32, k as u32, design.t() as u64));
    Ok(ClassifyReport { dims, levels, monotone, optimal, t_bound_ok })
}

fn optimal_verdict(design: &SubspaceDesign, levels: &[LevelReport], cap: u64) -> Result<Option<bool>, DesignError> {
    let (m, k) = (design.ambient.m(), design.ambient.k());
    let mut n = design.dims();
    n.sort_unstable_by(|a, b| b.cmp(a));
    let regime = n[0] <= m || n.iter().all(|&x| x == n[0]);
    if k < 2 || !regime || design.span_dim() < k || n.contains(&0) {
        return Ok(None);
    }
    let big_m = match levels.get(k - 2) {
        Some(l) => l.profile.a_min,
        None => design_profile(design, k - 1, cap)?.a_min,
    };
    let d = design.total_dim() - big_m;
    let verdict = sumrank::singleton_msrd(&n, m, k, d)?;
    if let Some(ineq) = verdict.optimal_inequality {
        if ineq != verdict.is_msrd {
            return Err(DesignError::Invariant("MSRD verdict disagrees with the optimal-design inequality".into()));
        }
    }
    Ok(Some(verdict.is_msrd))
}

/// Members U_i = F_q-span of the basis vectors indexed by block i.
pub fn construct_basis_partition(
    ambient: &AmbientSpace,
    basis: &[Vec<Code>],
    partition: &[Vec<usize>],
) -> Result<SubspaceDesign, DesignError> {
    let k = ambient.k();
    if basis.len() != k || basis.iter().any(|v| v.len() != k) {
        return Err(DesignError::NotABasis);
    }
    if linalg::rank(&**ambient.tower(), basis) != k {
        return Err(DesignError::NotABasis);
    }
    if partition.len() < 2 {
        return Err(DesignError::BadPartition("need at least two blocks".into()));
    }
    let mut seen = vec![false; k];
    for block in partition {
        if block.is_empty() {
            return Err(DesignError::BadPartition("empty block".into()));
        }
        for &i in block {
            if i >= k || seen[i] {
                return Err(DesignError::BadPartition(format!("index {i} repeated or out of range")));
            }
            seen[i] = true;
        }
    }
    if seen.contains(&false) {
        return Err(DesignError::BadPartition("blocks do not cover every index".into()));
    }
    let sets: Vec<Vec<Vec<Code>>> =
        partition.iter().map(|b| b.iter().map(|&i| basis[i].clone()).collect()).collect();
    SubspaceDesign::from_spanning_sets(ambient, &sets)
}

/// ∏_{j<i} σ^j(α) for i = 0..=k.
fn partial_norms(tower: &FieldTower, alpha: Code, k: usize) -> Vec<Code> {
    let mut out = vec![1];
    for j in 0..k {
        let next = tower.mul(out[j], tower.frobenius(alpha, j as i64));
        out.push(next);
    }
    out
}

/// F_q-basis (as elements) of the F_q-span of elements of F_{q^m}.
fn element_basis(tower: &FieldTower, gens: &[Code]) -> Vec<Code> {
    let mut rows: Vec<Vec<Code>> = gens.iter().map(|&g| tower.coords(g)).collect();
    linalg::rref(tower.base(), &mut rows);
    rows.iter().map(|r| tower.from_coords(r)).collect()
}

/// Subgroup of F_q* generated by `gens`.
fn generated_subgroup(tower: &FieldTower, gens: &[Code]) -> Vec<Code> {
    let mut group = vec![1];
    let mut frontier = vec![1];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = tower.mul(x, g);
            if !group.contains(&y) {
                group.push(y);
                frontier.push(y);
            }
        }
    }
    group
}

fn norms_distinct(tower: &FieldTower, elems: &[Code]) -> bool {
    let norms: Vec<Code> = elems.iter().map(|&a| tower.norm(a)).collect();
    (0..norms.len()).all(|i| (i + 1..norms.len()).all(|j| norms[i] != norms[j]))
}

/// The twisted (k−1)-design with members
/// {(x + η N^k(α_i) σ^k(x), σ(x) N^1(α_i), …, σ^{k−1}(x) N^{k−1}(α_i)) : x ∈ S_i},
/// where σ(x) = x^q and S_i is the F_q-span of `blocks[i]`.
pub fn construct_twisted(
    ambient: &AmbientSpace,
    alphas: &[Code],
    eta: Code,
    blocks: &[Vec<Code>],
) -> Result<SubspaceDesign, DesignError> {
    let tower = ambient.tower().clone();
    let (q, k) = (ambient.q() as usize, ambient.k());
    let t = alphas.len();
    if t == 0 || t != blocks.len() {
        return Err(DesignError::BadPartition("one block per twisting element".into()));
    }
    if t >= q {
        return Err(DesignError::TooManyBlocks { t, max: q - 1 });
    }
    if let Some(&bad) = alphas.iter().chain([&eta]).chain(blocks.iter().flatten()).find(|&&a| a >= tower.order()) {
        return Err(GfError::OutOfRange(bad as u64).into());
    }
    if alphas.contains(&0) {
        return Err(GfError::DivisionByZero.into());
    }
    if !norms_distinct(&tower, alphas) {
        return Err(DesignError::NormClash);
    }
    let bases: Vec<Vec<Code>> = blocks.iter().map(|b| element_basis(&tower, b)).collect();
    let have: usize = bases.iter().map(Vec::len).sum();
    if have < k {
        return Err(DesignError::TooFewBlocks { have, need: k });
    }
    if eta != 0 {
        let norms: Vec<Code> = alphas.iter().map(|&a| tower.norm(a)).collect();
        let sign = if (k * tower.m()) % 2 == 1 { tower.neg(1) } else { 1 };
        let target = tower.mul(sign, tower.norm(eta));
        if generated_subgroup(&tower, &norms).contains(&target) {
            return Err(DesignError::EtaInNormGroup);
        }
    }
    let mut sets = Vec::with_capacity(t);
    for (&alpha, basis) in alphas.iter().zip(&bases) {
        let nrm = partial_norms(&tower, alpha, k);
        let vectors = basis
            .iter()
            .map(|&x| {
                let mut v: Vec<Code> = (0..k).map(|j| tower.mul(tower.frobenius(x, j as i64), nrm[j])).collect();
                let tail = tower.mul(eta, tower.mul(nrm[k], tower.frobenius(x, k as i64)));
                v[0] = tower.add(x, tail);
                v
            })
            .collect();
        sets.push(vectors);
    }
    SubspaceDesign::from_spanning_sets(ambient, &sets)
}

/// Direct sum of designs with the same tower and the same number of members.
pub fn direct_sum(designs: &[SubspaceDesign]) -> Result<SubspaceDesign, DesignError> {
    let first = designs.first().ok_or(DesignError::EmptyDesign)?;
    let t = first.t();
    if designs.iter().any(|d| d.t() != t || *d.tower() != *first.tower()) {
        return Err(DesignError::MixedParameters);
    }
    let k: usize = designs.iter().map(|d| d.ambient.k()).sum();
    let ambient = AmbientSpace::new(first.tower(), k)?;
    let mut sets = vec![Vec::new(); t];
    let mut offset = 0;
    for d in designs {
        let kd = d.ambient.k();
        for (set, u) in sets.iter_mut().zip(&d.members) {
            for b in u.basis_vectors() {
                let mut v = vec![0; k];
                v[offset..offset + kd].copy_from_slice(&b);
                set.push(v);
            }
        }
        offset += kd;
    }
    SubspaceDesign::from_spanning_sets(&ambient, &sets)
}

/// The F_q-basis 1, y, …, y^{m−1} of F_{q^m} as packed elements.
fn power_basis(tower: &FieldTower) -> Vec<Code> {
    (0..tower.m()).map(|l| tower.from_coords(&unit(tower.m(), l))).collect()
}

fn unit(n: usize, i: usize) -> Vec<Code> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// k/(s+1) copies of the η = 0 twisted s-design on F_{q^m}^{s+1} with full blocks,
/// glued by direct sum.
pub fn construct_glued(tower: &Arc<FieldTower>, k: usize, s: usize, alphas: &[Code]) -> Result<SubspaceDesign, DesignError> {
    if s == 0 || !k.is_multiple_of(s + 1) {
        return Err(DesignError::InvalidS { s, k });
    }
    let piece = AmbientSpace::new(tower, s + 1)?;
    let full = power_basis(tower);
    let blocks = vec![full; alphas.len()];
    let one = construct_twisted(&piece, alphas, 0, &blocks)?;
    direct_sum(&vec![one; k / (s + 1)])
}

/// Members {(x_1, μ_i x_1^{q^s}, …, x_r, μ_i x_r^{q^s}) : x_j ∈ F_{q^m}} in F_{q^m}^{2r}.
/// Pairwise disjointness of the linear sets is asserted when their total size is at most 2^20.
pub fn construct_pseudoregulus(ambient: &AmbientSpace, s_exp: usize, mus: &[Code]) -> Result<SubspaceDesign, DesignError> {
    let tower = ambient.tower().clone();
    let (q, m, k) = (ambient.q() as usize, ambient.m(), ambient.k());
    if k % 2 == 1 {
        return Err(SubspaceError::DimensionMismatch { expected: k + 1, got: k }.into());
    }
    if gcd(s_exp, m) != 1 {
        return Err(DesignError::BadExponent { s: s_exp, m });
    }
    if mus.is_empty() || mus.len() > q - 1 {
        return Err(DesignError::TooManyBlocks { t: mus.len(), max: q - 1 });
    }
    if let Some(&bad) = mus.iter().find(|&&a| a == 0 || a >= tower.order()) {
        return Err(GfError::OutOfRange(bad as u64).into());
    }
    if !norms_distinct(&tower, mus) {
        return Err(DesignError::NormClash);
    }
    let r = k / 2;
    let basis = power_basis(&tower);
    let sets: Vec<Vec<Vec<Code>>> = mus
        .iter()
        .map(|&mu| {
            let mut vs = Vec::new();
            for j in 0..r {
                for &x in &basis {
                    let mut v = vec![0; k];
                    v[2 * j] = x;
                    v[2 * j + 1] = tower.mul(mu, tower.frobenius(x, s_exp as i64));
                    vs.push(v);
                }
            }
            vs
        })
        .collect();
    let design = SubspaceDesign::from_spanning_sets(ambient, &sets)?;
    let size = (q as u128).checked_pow((m * r) as u32).unwrap_or(u128::MAX) * mus.len() as u128;
    if size <= 1 << 20 {
        let mut seen = BTreeMap::new();
        for (i, u) in design.members.iter().enumerate() {
            for p in u.linear_set(1 << 20)?.entries().keys() {
                if let Some(j) = seen.insert(p.clone(), i) {
                    return Err(DesignError::Invariant(format!("linear sets of members {j} and {i} meet")));
                }
            }
        }
    }
    Ok(design)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Partition of F_{q^{mk}}* into cosets c·F_{q^k}*F_{q^m}*, read in F_{q^m}^k through the
/// basis 1, z, …, z^{k−1} where z is a primitive element of F_{q^k}; gcd(k, m) = 1.
pub fn construct_field_partition(tower: &Arc<FieldTower>, k: usize) -> Result<SubspaceDesign, DesignError> {
    let m = tower.m();
    if k == 0 || gcd(k, m) != 1 {
        return Err(DesignError::GcdViolation { k, m });
    }
    let ambient = AmbientSpace::new(tower, k)?;
    let (p, h) = (tower.p(), tower.h());
    let big = match FieldTower::with_defaults(p, h, m * k) {
        Ok(b) if b.fq_modulus() == tower.fq_modulus() => b,
        _ => {
            let g = FieldTower::search_modulus(p, h, m * k, tower.fq_modulus())?;
            FieldTower::new(p, h, m * k, tower.fq_modulus(), &g)?
        }
    };
    let q = tower.q() as u64;
    let order = big.order() as u64 - 1;
    let gamma = (2..big.order())
        .find(|&a| big.mult_order(a) == order)
        .ok_or_else(|| DesignError::Invariant("no primitive element".into()))?;
    let qk = q.pow(k as u32) - 1;
    let z = big.pow(gamma, order / qk);
    let emb = gf::subfield_embedding(tower, &big)?;
    // F_q basis ρ^l z^i of the big field, indexed i·m + l.
    let zpow: Vec<Code> = (0..k).map(|i| big.pow(z, i as u64)).collect();
    let rows: Vec<Vec<Code>> = (0..k)
        .flat_map(|i| (0..m).map(move |l| (i, l)))
        .map(|(i, l)| big.coords(big.mul(zpow[i], emb[tower.from_coords(&unit(m, l)) as usize])))
        .collect();
    let inv = linalg::inverse(big.base(), &rows)
        .ok_or_else(|| DesignError::Invariant("1, z, …, z^{k−1} is not a basis".into()))?;
    let to_vector = |e: Code| -> Vec<Code> {
        let lam = linalg::vec_mat(big.base(), &big.coords(e), &inv);
        (0..k).map(|i| tower.from_coords(&lam[i * m..(i + 1) * m])).collect()
    };
    let t = (order * (q - 1) / (qk * (q.pow(m as u32) - 1))) as usize;
    let sets: Vec<Vec<Vec<Code>>> = (0..t)
        .map(|j| {
            let c = big.pow(gamma, j as u64);
            zpow.iter().map(|&zi| to_vector(big.mul(c, zi))).collect()
        })
        .collect();
    SubspaceDesign::from_spanning_sets(&ambient, &sets)
}

/// Extends member i by `increments[i]` dimensions using the lowest-index expanded unit
/// vectors outside it, and checks that an (s, A) design becomes an (s, A + Σ j_i) design.
pub fn enlarge(
    design: &SubspaceDesign,
    s: usize,
    increments: &[usize],
    cap: u64,
) -> Result<(SubspaceDesign, DesignProfile), DesignError> {
    let n = design.ambient.fq_dim();
    if increments.len() != design.t() {
        return Err(DesignError::MixedParameters);
    }
    for (i, (&j, u)) in increments.iter().zip(&design.members).enumerate() {
        if j > n - u.dim() {
            return Err(DesignError::IncrementTooLarge { member: i, increment: j, max: n - u.dim() });
        }
    }
    let before = design_profile(design, s, cap)?;
    let members = design
        .members
        .iter()
        .zip(increments)
        .map(|(u, &j)| {
            let mut rows = u.rows().to_vec();
            let mut added = 0;
            for c in 0..n {
                if added == j {
                    break;
                }
                let e = unit(n, c);
                let mut trial = rows.clone();
                trial.push(e.clone());
                if linalg::rank(design.tower().base(), &trial) > rows.len() {
                    rows.push(e);
                    added += 1;
                }
            }
            FqSubspace::from_fq_rows(&design.ambient, rows)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let out = SubspaceDesign::new(&design.ambient, members)?;
    let after = design_profile(&out, s, cap)?;
    let bound = before.a_min + increments.iter().sum::<usize>();
    if after.a_min > bound {
        return Err(DesignError::Invariant(format!("enlarged design has A = {} > {bound}", after.a_min)));
    }
    Ok((out, after))
}

/// Ordinary dual with its declared parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualDesign {
    pub design: SubspaceDesign,
    pub s: usize,
    pub a: i64,
}

/// Member-wise trace duals of an (s, A) design, certified as a (k−s, A + t(k−s)m − N)
/// design; maximum 1-designs are re-certified as maximum 1-designs.
pub fn dual_design(design: &SubspaceDesign, s: usize, a: usize, cap: u64) -> Result<DualDesign, DesignError> {
    let (m, k, t) = (design.ambient.m(), design.ambient.k(), design.t());
    if s == 0 || s >= k {
        return Err(DesignError::InvalidS { s, k });
    }
    certify(design, s, a, cap)?;
    let members = design.members.iter().map(FqSubspace::ordinary_dual).collect::<Result<Vec<_>, _>>()?;
    let dual = SubspaceDesign::new(&design.ambient, members)?;
    let span = dual.span_dim();
    if span < k - s {
        return Err(DesignError::DualSpanTooSmall { span, needed: k - s });
    }
    let declared = a as i64 + (t * (k - s) * m) as i64 - design.total_dim() as i64;
    let p = design_profile(&dual, k - s, cap)?;
    if p.a_min as i64 > declared {
        return Err(DesignError::Invariant(format!("dual design has A = {} > declared {declared}", p.a_min)));
    }
    if s == 1 && a == 1 && is_maximum_one_design(design, cap)? && !is_maximum_one_design(&dual, cap)? {
        return Err(DesignError::Invariant("dual of a maximum 1-design is not a maximum 1-design".into()));
    }
    Ok(DualDesign { design: dual, s: k - s, a: declared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::DEFAULT_ENUMERATION_CAP as CAP;

    fn tower(p: u32, m: usize) -> Arc<FieldTower> {
        FieldTower::with_defaults(p, 1, m).unwrap()
    }

    /// The q=3, m=2, r=1 pseudoregulus design with μ = (1, i+1).
    fn pseudoregulus_9() -> SubspaceDesign {
        let t = tower(3, 2);
        construct_pseudoregulus(&AmbientSpace::new(&t, 2).unwrap(), 1, &[1, 4]).unwrap()
    }

    #[test]
    fn profile_examples() {
        let d = pseudoregulus_9();
        let p = design_profile(&d, 1, CAP).unwrap();
        assert_eq!((p.a_min, p.span_dim, p.non_degenerate), (1, 2, true));
        assert!(d.members().iter().any(|u| u.meet_dim_fqm(&p.witness) == 1));

        let t4 = tower(2, 2);
        let a = AmbientSpace::new(&t4, 2).unwrap();
        let axes = construct_basis_partition(&a, &[vec![1, 0], vec![0, 1]], &[vec![0], vec![1]]).unwrap();
        assert_eq!(design_profile(&axes, 1, CAP).unwrap().a_min, 1);

        let line = SubspaceDesign::from_spanning_sets(&a, &[vec![vec![1, 0], vec![2, 0]]]).unwrap();
        let p = design_profile(&line, 1, CAP).unwrap();
        assert_eq!(p.a_min, 2);
        assert_eq!(p.witness.rows(), &[vec![1, 0]]);
    }

    #[test]
    fn classify_examples() {
        let r = classify(&pseudoregulus_9(), 1, CAP).unwrap();
        assert!(r.levels[0].is_maximum);
        assert_eq!(r.optimal, Some(true));
        assert_eq!(r.t_bound_ok, Some(true));

        let t4 = tower(2, 2);
        let a = AmbientSpace::new(&t4, 2).unwrap();
        let sub = SubspaceDesign::from_spanning_sets(&a, &[vec![vec![1, 0], vec![0, 1]]]).unwrap();
        let r = classify(&sub, 1, CAP).unwrap();
        assert!(r.levels[0].is_maximum);
        // q=2, m=2, k=2: bound (1)(4+1)/3, so t=1 fits and t=2 does not.
        assert!(t_bound_satisfied(2, 2, 2, 1));
        assert!(!t_bound_satisfied(2, 2, 2, 2));
    }

    #[test]
    fn basis_partition_examples() {
        let t8 = tower(2, 3);
        let a = AmbientSpace::new(&t8, 3).unwrap();
        let basis = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let d = construct_basis_partition(&a, &basis, &[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(d.dims(), vec![2, 1]);
        let family = SubspaceFamily::new(&a, 2, CAP).unwrap();
        assert_eq!(family.len(), 73);
        assert_eq!(design_profile(&d, 2, CAP).unwrap().a_min, 2);
        assert!(matches!(
            construct_basis_partition(&a, &basis, &[vec![0, 1, 2], vec![]]),
            Err(DesignError::BadPartition(_))
        ));
        assert_eq!(
            construct_basis_partition(&a, &[vec![1, 0, 0], vec![1, 0, 0], vec![0, 0, 1]], &[vec![0], vec![1, 2]]),
            Err(DesignError::NotABasis)
        );
    }

    #[test]
    fn twisted_examples() {
        let t9 = tower(3, 2);
        let a = AmbientSpace::new(&t9, 2).unwrap();
        let full = power_basis(&t9);
        let d = construct_twisted(&a, &[1, 4], 0, &[full.clone(), full.clone()]).unwrap();
        let r = classify(&d, 1, CAP).unwrap();
        assert!(r.levels[0].is_maximum);
        assert_eq!(
            hyperplane_weight_distribution(&d, CAP).unwrap(),
            hyperplane_weight_distribution(&pseudoregulus_9(), CAP).unwrap()
        );
        // 1 and 2 both have norm 1 over F_3.
        assert_eq!(construct_twisted(&a, &[1, 2], 0, &[full.clone(), full.clone()]), Err(DesignError::NormClash));

        let t27 = tower(3, 3);
        let a = AmbientSpace::new(&t27, 3).unwrap();
        let full = power_basis(&t27);
        let alpha = (1..27).find(|&x| t27.norm(x) == 2).unwrap();
        let d = construct_twisted(&a, &[1, alpha], 0, &[full.clone(), full.clone()]).unwrap();
        assert_eq!(d.dims(), vec![3, 3]);
        assert_eq!(SubspaceFamily::new(&a, 2, CAP).unwrap().len(), 757);
        let r = classify(&d, 2, CAP).unwrap();
        assert!(r.levels[1].is_maximum);
    }

    #[test]
    fn twisted_eta_condition() {
        // q=5, k=2, m=2: norms {1, 4} generate {1, 4}; (−1)^{4}N(η) must avoid it.
        let t = tower(5, 2);
        let a = AmbientSpace::new(&t, 2).unwrap();
        let full = power_basis(&t);
        let a2 = (1..25).find(|&x| t.norm(x) == 4).unwrap();
        let bad_eta = (1..25).find(|&x| t.norm(x) == 4).unwrap();
        let good_eta = (1..25).find(|&x| t.norm(x) == 2).unwrap();
        let blocks = vec![full.clone(), full.clone()];
        assert_eq!(construct_twisted(&a, &[1, a2], bad_eta, &blocks), Err(DesignError::EtaInNormGroup));
        let d = construct_twisted(&a, &[1, a2], good_eta, &blocks).unwrap();
        assert_eq!(design_profile(&d, 1, CAP).unwrap().a_min, 1);
        assert_eq!(
            construct_twisted(&a, &[1], 0, &[vec![1]]),
            Err(DesignError::TooFewBlocks { have: 1, need: 2 })
        );
    }

    #[test]
    fn direct_sum_examples() {
        let d = pseudoregulus_9();
        let s = direct_sum(&[d.clone(), d.clone()]).unwrap();
        assert_eq!(s.dims(), vec![4, 4]);
        assert_eq!(SubspaceFamily::new(s.ambient(), 1, CAP).unwrap().len(), 820);
        assert!(is_maximum_one_design(&s, CAP).unwrap());
        let other = SubspaceDesign::from_spanning_sets(
            &AmbientSpace::new(&tower(3, 3), 2).unwrap(),
            &[vec![vec![1, 0]], vec![vec![0, 1]]],
        )
        .unwrap();
        assert_eq!(direct_sum(&[d, other]), Err(DesignError::MixedParameters));
    }

    #[test]
    fn pseudoregulus_examples() {
        let d = pseudoregulus_9();
        assert_eq!((d.t(), d.dims()), (2, vec![2, 2]));
        let t8 = tower(2, 3);
        let a = AmbientSpace::new(&t8, 2).unwrap();
        let one = construct_pseudoregulus(&a, 1, &[1]).unwrap();
        assert_eq!(one.dims(), vec![3]);
        assert!(one.members()[0].linear_set(CAP).unwrap().is_scattered());
        let t9 = tower(3, 2);
        let a9 = AmbientSpace::new(&t9, 2).unwrap();
        assert_eq!(construct_pseudoregulus(&a9, 1, &[1, 2]), Err(DesignError::NormClash));
        assert_eq!(construct_pseudoregulus(&a9, 2, &[1]), Err(DesignError::BadExponent { s: 2, m: 2 }));
    }

    #[test]
    fn field_partition_examples() {
        for (p, expected_t, points) in [(2u32, 3usize, 21usize), (3, 7, 91)] {
            let t = tower(p, 2);
            let d = construct_field_partition(&t, 3).unwrap();
            assert_eq!(d.t(), expected_t);
            let mut covered = BTreeMap::new();
            for u in d.members() {
                for (pt, w) in u.linear_set(CAP).unwrap().entries() {
                    *covered.entry(pt.clone()).or_insert(0) += w;
                }
            }
            assert_eq!(covered.len(), points);
            assert!(covered.values().all(|&w| w == 1));
        }
        assert_eq!(
            construct_field_partition(&tower(2, 2), 2),
            Err(DesignError::GcdViolation { k: 2, m: 2 })
        );
    }

    #[test]
    fn enlarge_examples() {
        let d = pseudoregulus_9();
        let (same, p) = enlarge(&d, 1, &[0, 0], CAP).unwrap();
        assert_eq!((same, p.a_min), (d.clone(), 1));
        let (bigger, p) = enlarge(&d, 1, &[1, 0], CAP).unwrap();
        assert_eq!((bigger.dims(), p.a_min), (vec![3, 2], 2));
        assert_eq!(
            enlarge(&d, 1, &[3, 0], CAP).map(|x| x.1),
            Err(DesignError::IncrementTooLarge { member: 0, increment: 3, max: 2 })
        );
    }

    #[test]
    fn dual_examples() {
        let d = pseudoregulus_9();
        let dual = dual_design(&d, 1, 1, CAP).unwrap();
        assert_eq!((dual.s, dual.a, dual.design.dims()), (1, 1, vec![2, 2]));
        assert!(is_maximum_one_design(&dual.design, CAP).unwrap());
        assert_eq!(dual_design(&dual.design, 1, 1, CAP).unwrap().design, d);

        let a = AmbientSpace::new(&tower(2, 2), 2).unwrap();
        let axes = construct_basis_partition(&a, &[vec![1, 0], vec![0, 1]], &[vec![0], vec![1]]).unwrap();
        // t = 2 members of dimension 1: A' = 1 + 2·1·2 − 2 = 3.
        let dual = dual_design(&axes, 1, 1, CAP).unwrap();
        assert_eq!((dual.s, dual.a, dual.design.dims()), (1, 3, vec![3, 3]));
    }

    #[test]
    fn histogram_examples() {
        let h = hyperplane_weight_distribution(&pseudoregulus_9(), CAP).unwrap();
        assert!(h.max1_checked);
        assert_eq!(h.counts.values().sum::<u128>(), 10);
        let (h0, h1) = h_values(3, 2, 2, 2).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(0, h0), (1, h1)]));

        let a = AmbientSpace::new(&tower(2, 2), 2).unwrap();
        let sub = SubspaceDesign::from_spanning_sets(&a, &[vec![vec![1, 0], vec![0, 1]]]).unwrap();
        let h = hyperplane_weight_distribution(&sub, CAP).unwrap();
        assert_eq!(h.counts.keys().copied().collect::<Vec<_>>(), vec![0, 1]);
        assert!(h.max1_checked);
    }

    #[test]
    fn glued_histogram() {
        let t = tower(3, 3);
        let alpha = (1..27).find(|&x| t.norm(x) == 2).unwrap();
        let d = construct_glued(&t, 4, 1, &[1, alpha]).unwrap();
        assert_eq!(d.dims(), vec![6, 6]);
        let h = hyperplane_weight_distribution(&d, CAP).unwrap();
        assert!(h.max1_checked);
        assert_eq!(h.counts, BTreeMap::from([(6, 19712), (7, 728)]));
        assert_eq!(h_values(3, 3, 4, 2), Some((19712, 728)));
    }

    #[test]
    fn cutting_examples() {
        let baer = construct_field_partition(&tower(2, 2), 3).unwrap();
        let r = is_cutting(&baer, CAP).unwrap();
        assert!(r.cutting && r.constant_sum);

        let r = is_cutting(&pseudoregulus_9(), CAP).unwrap();
        assert!(!r.cutting);
        let w = r.witness.unwrap();
        let d = pseudoregulus_9();
        assert!(d.members().iter().all(|u| u.meet_dim_fqm(&w) == 0));

        let a = AmbientSpace::new(&tower(2, 2), 2).unwrap();
        let single = SubspaceDesign::from_spanning_sets(&a, &[vec![vec![1, 0]]]).unwrap();
        assert!(!is_cutting(&single, CAP).unwrap().cutting);
    }
}
