//! Linear sum-rank metric codes over F_{q^m}/F_q and their correspondence with
//! subspace designs (block i of the generator spans U_i over F_q).

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::design::{self, DesignError, SubspaceDesign};
use crate::gf::{Code, FieldOps, FieldTower, GfError};
use crate::linalg::{self, PointEnumerator};
use crate::par;
use crate::subspace::{meet_dim_with_kernel, AmbientSpace, FqSubspace, SubspaceError};

/// Exhaustive codeword-level checks run only when q^{mk} stays below this.
pub const BRUTE_FORCE_LIMIT: u64 = 6561;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SumRankError {
    #[error("block {0} of the generator has F_q-dependent columns")]
    DegenerateCode(usize),
    #[error("design member {0} is the zero subspace")]
    ZeroMember(usize),
    #[error("members span {rank} < k = {k} dimensions over F_{{q^m}}")]
    SpanDeficient { rank: usize, k: usize },
    #[error("generator has rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("generator shape does not match block lengths: {0}")]
    BadShape(String),
    #[error("length profile is not sorted in non-increasing order")]
    ProfileNotSorted,
    #[error("distance {d} outside 1..={max}")]
    InvalidDistance { d: usize, max: usize },
    #[error("the dual code is degenerate or zero")]
    DegenerateDual,
    #[error("block matrix {0} is not invertible over F_q")]
    NotInvertible(usize),
    #[error("block permutation does not preserve the length profile")]
    LengthProfileBroken,
    #[error("operation needs a nonzero code")]
    ZeroCode,
    #[error("message length {got} differs from k = {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Design(#[from] Box<DesignError>),
}

impl From<DesignError> for SumRankError {
    fn from(e: DesignError) -> Self {
        SumRankError::Design(Box::new(e))
    }
}

/// A k-dimensional F_{q^m}-linear code in ⊕_i F_{q^m}^{n_i}. Blocks are stored with
/// lengths sorted non-increasingly; `origin[b]` is the caller's index of stored block b.
#[derive(Clone, Debug)]
pub struct SumRankCode {
    tower: Arc<FieldTower>,
    n: Vec<usize>,
    origin: Vec<usize>,
    generator: Vec<Vec<Code>>,
}

impl PartialEq for SumRankCode {
    fn eq(&self, other: &Self) -> bool {
        *self.tower == *other.tower && self.n == other.n && self.origin == other.origin && self.generator == other.generator
    }
}

impl Eq for SumRankCode {}

impl SumRankCode {
    /// `generator` has k rows of length Σ lengths, blocks in the caller's order.
    pub fn new(tower: &Arc<FieldTower>, generator: Vec<Vec<Code>>, lengths: &[usize]) -> Result<SumRankCode, SumRankError> {
        let total: usize = lengths.iter().sum();
        if lengths.is_empty() || lengths.contains(&0) {
            return Err(SumRankError::BadShape("block lengths must be positive".into()));
        }
        if let Some(r) = generator.iter().find(|r| r.len() != total) {
            return Err(SumRankError::BadShape(format!("row of length {} for N = {total}", r.len())));
        }
        if let Some(&bad) = generator.iter().flatten().find(|&&c| c >= tower.order()) {
            return Err(GfError::OutOfRange(bad as u64).into());
        }
        let rank = linalg::rank(&**tower, &generator);
        if rank < generator.len() {
            return Err(SumRankError::RankDeficient { rank, rows: generator.len() });
        }
        let mut origin: Vec<usize> = (0..lengths.len()).collect();
        origin.sort_by(|&a, &b| lengths[b].cmp(&lengths[a]));
        let offsets = offsets(lengths);
        let generator = generator
            .iter()
            .map(|row| origin.iter().flat_map(|&o| row[offsets[o]..offsets[o] + lengths[o]].iter().copied()).collect())
            .collect();
        let n = origin.iter().map(|&o| lengths[o]).collect();
        Ok(SumRankCode { tower: tower.clone(), n, origin, generator })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn k(&self) -> usize {
        self.generator.len()
    }
    /// Sorted length profile n_1 ≥ … ≥ n_t.
    pub fn n(&self) -> &[usize] {
        &self.n
    }
    pub fn origin(&self) -> &[usize] {
        &self.origin
    }
    pub fn t(&self) -> usize {
        self.n.len()
    }
    pub fn total_len(&self) -> usize {
        self.n.iter().sum()
    }
    /// Generator rows with blocks in sorted order.
    pub fn generator(&self) -> &[Vec<Code>] {
        &self.generator
    }

    fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        let start: usize = self.n[..b].iter().sum();
        start..start + self.n[b]
    }

    /// Columns of block b as vectors of F_{q^m}^k.
    fn block_columns(&self, b: usize) -> Vec<Vec<Code>> {
        self.block_range(b).map(|c| self.generator.iter().map(|r| r[c]).collect()).collect()
    }

    /// F_q-spans of the block columns, in stored order.
    fn column_spaces(&self) -> Result<Vec<FqSubspace>, SumRankError> {
        let ambient = AmbientSpace::new(&self.tower, self.k().max(1))?;
        if self.k() == 0 {
            return Ok(vec![FqSubspace::zero(&ambient); self.t()]);
        }
        (0..self.t()).map(|b| Ok(FqSubspace::span(&ambient, &self.block_columns(b))?)).collect()
    }

    /// Index of the first block whose columns are F_q-dependent.
    pub fn degenerate_block(&self) -> Result<Option<usize>, SumRankError> {
        Ok(self.column_spaces()?.iter().zip(&self.n).position(|(u, &n)| u.dim() < n))
    }

    pub fn is_non_degenerate(&self) -> Result<bool, SumRankError> {
        Ok(self.degenerate_block()?.is_none())
    }

    pub fn codeword(&self, x: &[Code]) -> Result<Vec<Code>, SumRankError> {
        if x.len() != self.k() {
            return Err(SumRankError::MessageLength { expected: self.k(), got: x.len() });
        }
        Ok(linalg::vec_mat(&*self.tower, x, &self.generator))
    }

    /// Row spaces agree and block structure matches.
    pub fn same_code(&self, other: &SumRankCode) -> bool {
        let mut a = self.generator.clone();
        let mut b = other.generator.clone();
        linalg::rref(&*self.tower, &mut a);
        linalg::rref(&*other.tower, &mut b);
        *self.tower == *other.tower && self.n == other.n && a == b
    }
}

fn offsets(lengths: &[usize]) -> Vec<usize> {
    let mut out = vec![0];
    for &l in lengths {
        out.push(out.last().unwrap() + l);
    }
    out
}

/// Φ: generator columns of block i form an F_q-basis of U_i.
pub fn code_from_system(design: &SubspaceDesign) -> Result<SumRankCode, SumRankError> {
    if let Some(i) = design.members().iter().position(FqSubspace::is_zero) {
        return Err(SumRankError::ZeroMember(i));
    }
    let k = design.ambient().k();
    let rank = design.span_dim();
    if rank < k {
        return Err(SumRankError::SpanDeficient { rank, k });
    }
    let columns: Vec<Vec<Code>> = design.members().iter().flat_map(FqSubspace::basis_vectors).collect();
    let generator = (0..k).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    SumRankCode::new(design.tower(), generator, &design.dims())
}

/// Ψ: U_i = F_q-span of the columns of block i, in the caller's original block order.
pub fn system_from_code(code: &SumRankCode) -> Result<SubspaceDesign, SumRankError> {
    if code.k() == 0 {
        return Err(SumRankError::ZeroCode);
    }
    let spaces = code.column_spaces()?;
    if let Some(b) = spaces.iter().zip(&code.n).position(|(u, &n)| u.dim() < n) {
        return Err(SumRankError::DegenerateCode(code.origin[b]));
    }
    let mut members = vec![None; code.t()];
    for (u, &o) in spaces.into_iter().zip(&code.origin) {
        members[o] = Some(u);
    }
    let ambient = AmbientSpace::new(&code.tower, code.k())?;
    Ok(SubspaceDesign::new(&ambient, members.into_iter().map(Option::unwrap).collect())?)
}

/// Sum-rank weight of xG, computed directly as Σ rk_q(x G_i) and geometrically as
/// Σ (dim U_i − dim(U_i ∩ x^⊥)); the two must agree.
pub fn sumrank_weight(code: &SumRankCode, x: &[Code]) -> Result<usize, SumRankError> {
    let c = code.codeword(x)?;
    let direct = direct_weight(code, &c);
    let spaces = code.column_spaces()?;
    let bases: Vec<Vec<Vec<Code>>> = spaces.iter().map(FqSubspace::basis_vectors).collect();
    let geometric = geometric_weight(&code.tower, &bases, x);
    if direct != geometric {
        return Err(SumRankError::Invariant(format!("direct weight {direct} ≠ geometric weight {geometric}")));
    }
    Ok(direct)
}

fn direct_weight(code: &SumRankCode, c: &[Code]) -> usize {
    (0..code.t()).map(|b| support_block(&code.tower, &c[code.block_range(b)]).len()).sum()
}

fn geometric_weight(tower: &FieldTower, bases: &[Vec<Vec<Code>>], x: &[Code]) -> usize {
    let parity = [x.to_vec()];
    bases.iter().map(|b| b.len() - meet_dim_with_kernel(tower, b, &parity)).sum()
}

/// RREF basis over F_q of colsp(Γ(c)) ⊆ F_q^n for one block c ∈ F_{q^m}^n: the span of
/// the m vectors (coord_j(c_1), …, coord_j(c_n)).
fn support_block(tower: &FieldTower, c: &[Code]) -> Vec<Vec<Code>> {
    let mut rows: Vec<Vec<Code>> = (0..tower.m()).map(|j| c.iter().map(|&x| tower.coord(x, j)).collect()).collect();
    linalg::rref(tower.base(), &mut rows);
    rows
}

/// supp(xG) = (colsp Γ(c_1), …, colsp Γ(c_t)) in stored block order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumRankSupport {
    pub blocks: Vec<Vec<Vec<Code>>>,
}

impl SumRankSupport {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn is_subset_of(&self, other: &SumRankSupport, base: &dyn FieldOps) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| {
            if a.len() > b.len() {
                return false;
            }
            let pivots = linalg::pivots_of(b);
            a.iter().all(|row| {
                let mut v = row.clone();
                linalg::reduce(base, b, &pivots, &mut v);
                v.iter().all(|&x| x == 0)
            })
        })
    }
}

pub fn support(code: &SumRankCode, x: &[Code]) -> Result<SumRankSupport, SumRankError> {
    let c = code.codeword(x)?;
    Ok(SumRankSupport { blocks: (0..code.t()).map(|b| support_block(&code.tower, &c[code.block_range(b)])).collect() })
}

fn check_cap(count: u128, cap: u64) -> Result<(), SumRankError> {
    if count > cap as u128 {
        return Err(SubspaceError::EnumerationCapExceeded { count, cap }.into());
    }
    Ok(())
}

/// Geometric weight of every projective message, in point-enumeration order.
fn projective_weights(code: &SumRankCode, cap: u64) -> Result<Vec<u32>, SumRankError> {
    if code.k() == 0 {
        return Err(SumRankError::ZeroCode);
    }
    let points = PointEnumerator::new(code.tower.order(), code.k());
    check_cap(points.len(), cap)?;
    let bases: Vec<Vec<Vec<Code>>> = code.column_spaces()?.iter().map(FqSubspace::basis_vectors).collect();
    let tower = code.tower.clone();
    Ok(par::map_indices(points.len(), |i| geometric_weight(&tower, &bases, &points.nth(i)) as u32))
}

/// d = N − max_H Σ dim(U_i ∩ H), swept over the hyperplanes x^⊥.
pub fn min_distance(code: &SumRankCode, cap: u64) -> Result<usize, SumRankError> {
    Ok(*projective_weights(code, cap)?.iter().min().unwrap() as usize)
}

/// Minimum of the direct weight over all q^{mk} − 1 nonzero codewords.
pub fn min_distance_exhaustive(code: &SumRankCode, cap: u64) -> Result<usize, SumRankError> {
    Ok(*weight_distribution_exhaustive(code, cap)?.keys().find(|&&w| w > 0).ok_or(SumRankError::ZeroCode)?)
}

/// weight ↦ number of codewords, from the projective sweep.
pub fn weight_distribution(code: &SumRankCode, cap: u64) -> Result<BTreeMap<usize, u128>, SumRankError> {
    let scalars = code.tower.order() as u128 - 1;
    let mut out = BTreeMap::from([(0, 1)]);
    for w in projective_weights(code, cap)? {
        *out.entry(w as usize).or_insert(0) += scalars;
    }
    Ok(out)
}

/// weight ↦ number of codewords, by listing every codeword and using the direct weight.
pub fn weight_distribution_exhaustive(code: &SumRankCode, cap: u64) -> Result<BTreeMap<usize, u128>, SumRankError> {
    let count = (code.tower.order() as u128).checked_pow(code.k() as u32).unwrap_or(u128::MAX);
    check_cap(count, cap)?;
    let weights = par::map_indices(count, |i| {
        let x = message_from_index(code.tower.order(), code.k(), i);
        direct_weight(code, &linalg::vec_mat(&*code.tower, &x, &code.generator))
    });
    let mut out = BTreeMap::new();
    for w in weights {
        *out.entry(w).or_insert(0u128) += 1;
    }
    Ok(out)
}

fn message_from_index(order: u32, k: usize, mut i: u128) -> Vec<Code> {
    (0..k)
        .map(|_| {
            let d = (i % order as u128) as Code;
            i /= order as u128;
            d
        })
        .collect()
}

/// Singleton-bound bookkeeping for a length profile and distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingletonCheck {
    /// 1-based block index j of the decomposition d−1 = Σ_{i<j} min(m, n_i) + δ.
    pub j: usize,
    pub delta: usize,
    /// log_q of the bound: m Σ_{i≥j} n_i − max(m, n_j) δ.
    pub bound_exponent: usize,
    pub is_msrd: bool,
    /// M ≤ k−1 (n_1 ≤ m) or M ≤ N − tm + mk/n − 1 (all n_i = n ≥ m), with M = N − d.
    pub optimal_inequality: Option<bool>,
}

pub fn singleton_msrd(n: &[usize], m: usize, k: usize, d: usize) -> Result<SingletonCheck, SumRankError> {
    if n.windows(2).any(|w| w[0] < w[1]) {
        return Err(SumRankError::ProfileNotSorted);
    }
    let max: usize = n.iter().map(|&x| x.min(m)).sum();
    if d == 0 || d > max {
        return Err(SumRankError::InvalidDistance { d, max });
    }
    let mut rem = d - 1;
    let mut j = 0;
    while rem >= n[j].min(m) {
        rem -= n[j].min(m);
        j += 1;
    }
    let bound = m * n[j..].iter().sum::<usize>() - m.max(n[j]) * rem;
    if m * k > bound {
        return Err(SumRankError::Invariant(format!("code of size q^{} exceeds the Singleton bound q^{bound}", m * k)));
    }
    let total: usize = n.iter().sum();
    let big_m = total - d;
    let t = n.len();
    let optimal_inequality = if n[0] <= m {
        Some(big_m < k)
    } else if n.iter().all(|&x| x == n[0]) {
        // M ≤ N − tm + mk/n − 1, multiplied through by n.
        Some((n[0] * (big_m + t * m + 1)) as u128 <= (n[0] * total + m * k) as u128)
    } else {
        None
    };
    Ok(SingletonCheck { j: j + 1, delta: rem, bound_exponent: bound, is_msrd: m * k == bound, optimal_inequality })
}

/// Minimum distance plus Singleton verdict.
pub fn singleton_for_code(code: &SumRankCode, cap: u64) -> Result<(usize, SingletonCheck), SumRankError> {
    let d = min_distance(code, cap)?;
    Ok((d, singleton_msrd(&code.n, code.tower.m(), code.k(), d)?))
}

/// C^⊥ = {y : Σ_i x_i · y_i = 0 for all x ∈ C}, same block structure, RREF generator.
pub fn dual_code(code: &SumRankCode) -> SumRankCode {
    let n = code.total_len();
    let generator = linalg::kernel(&*code.tower, &code.generator, n);
    SumRankCode { tower: code.tower.clone(), n: code.n.clone(), origin: code.origin.clone(), generator }
}

/// Distances of C and C^⊥ with the MSRD-duality checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualMsrdReport {
    pub d: usize,
    pub d_dual: usize,
    pub msrd: bool,
    pub dual_msrd: bool,
}

/// Asserts MSRD ⇒ dual MSRD with d⊥ = N − d + 2 (m ≥ n_1) or tm − d + 2 (all n_i ≥ m equal).
pub fn verify_dual_msrd(code: &SumRankCode, cap: u64) -> Result<DualMsrdReport, SumRankError> {
    let dual = dual_code(code);
    if code.k() == 0 || dual.k() == 0 {
        return Err(SumRankError::ZeroCode);
    }
    let (d, s) = singleton_for_code(code, cap)?;
    let (d_dual, sd) = singleton_for_code(&dual, cap)?;
    let m = code.tower.m();
    if s.is_msrd {
        if !sd.is_msrd {
            return Err(SumRankError::Invariant("dual of an MSRD code is not MSRD".into()));
        }
        let n_total = code.total_len();
        if m >= code.n[0] && d_dual != n_total + 2 - d {
            return Err(SumRankError::Invariant(format!("d⊥ = {d_dual} ≠ N − d + 2")));
        }
        if code.n.iter().all(|&x| x == code.n[0] && x >= m) && d_dual != code.t() * m + 2 - d {
            return Err(SumRankError::Invariant(format!("d⊥ = {d_dual} ≠ tm − d + 2")));
        }
    }
    Ok(DualMsrdReport { d, d_dual, msrd: s.is_msrd, dual_msrd: sd.is_msrd })
}

/// Ψ of the dual of Φ(D): a Delsarte dual design in V(N − k, q^m).
pub fn delsarte_dual(design: &SubspaceDesign) -> Result<SubspaceDesign, SumRankError> {
    let dual = dual_code(&code_from_system(design)?);
    if dual.k() == 0 || !dual.is_non_degenerate()? {
        return Err(SumRankError::DegenerateDual);
    }
    system_from_code(&dual)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelsarteReport {
    pub dual: SubspaceDesign,
    /// max_H Σ dim(U_i ∩ H) for D and for its Delsarte dual.
    pub m: usize,
    pub m_dual: usize,
    /// Lower bound on M' where one applies.
    pub lower_bound: Option<i64>,
    pub optimal: bool,
    pub dual_optimal: bool,
}

/// Delsarte dual with the parameter inequality and optimality transfer asserted.
pub fn delsarte_check(d: &SubspaceDesign, cap: u64) -> Result<DelsarteReport, SumRankError> {
    let dual = delsarte_dual(d)?;
    let code = code_from_system(d)?;
    let (dist, s) = singleton_for_code(&code, cap)?;
    let dual_code = code_from_system(&dual)?;
    let (dist_dual, sd) = singleton_for_code(&dual_code, cap)?;
    let n_total = d.total_dim();
    let (m, k) = (d.tower().m(), d.ambient().k());
    let big_m = n_total - dist;
    let m_dual = n_total - dist_dual;
    let n = code.n();
    let lower_bound = if m >= n[0] {
        Some(n_total as i64 - big_m as i64 - 2)
    } else if n.iter().all(|&x| x == n[0]) {
        Some(2 * n_total as i64 - (code.t() * m) as i64 - big_m as i64 - 2)
    } else {
        None
    };
    if lower_bound.is_some_and(|b| (m_dual as i64) < b) {
        return Err(SumRankError::Invariant(format!("M' = {m_dual} below the Delsarte bound {lower_bound:?}")));
    }
    if s.is_msrd && !sd.is_msrd {
        return Err(SumRankError::Invariant("Delsarte dual of an optimal design is not optimal".into()));
    }
    let mut a = d.dims();
    let mut b = dual.dims();
    a.sort_unstable();
    b.sort_unstable();
    if a != b || dual.ambient().k() != n_total - k {
        return Err(SumRankError::Invariant("Delsarte dual changed the dimension multiset".into()));
    }
    Ok(DelsarteReport { dual, m: big_m, m_dual, lower_bound, optimal: s.is_msrd, dual_optimal: sd.is_msrd })
}

/// Minimality verdict; witness (x, y) has supp(yG) ⊆ supp(xG) with y ∉ ⟨x⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalReport {
    pub minimal: bool,
    pub witness: Option<(Vec<Code>, Vec<Code>)>,
    /// Whether the codeword-pair scan also ran (and agreed).
    pub brute_force_checked: bool,
}

/// Geometric path via the cutting test on the column system, and (when q^{mk} ≤ `brute_limit`)
/// a scan over ordered pairs of projective messages; both verdicts must agree.
pub fn is_minimal_code(code: &SumRankCode, cap: u64, brute_limit: u64) -> Result<MinimalReport, SumRankError> {
    if code.k() == 0 {
        return Err(SumRankError::ZeroCode);
    }
    let tower = code.tower.clone();
    let ambient = AmbientSpace::new(&tower, code.k())?;
    let system = SubspaceDesign::new(&ambient, code.column_spaces()?)?;
    let cut = design::is_cutting(&system, cap)?;
    let mut report = MinimalReport { minimal: cut.cutting, witness: None, brute_force_checked: false };
    if let Some(h) = &cut.witness {
        let x = h.parity_check().remove(0);
        let mut gens = Vec::new();
        let parity = [x.clone()];
        for u in system.members() {
            gens.extend(crate::subspace::meet_with_kernel(&tower, &u.basis_vectors(), &parity));
        }
        let perp = linalg::kernel(&*tower, &gens, code.k());
        let y = perp
            .into_iter()
            .find(|v| linalg::rank(&*tower, &[x.clone(), v.clone()]) == 2)
            .ok_or_else(|| SumRankError::Invariant("no second hyperplane through the meet".into()))?;
        if !support(code, &y)?.is_subset_of(&support(code, &x)?, tower.base()) {
            return Err(SumRankError::Invariant("witness supports are not nested".into()));
        }
        report.witness = Some((x, y));
    }
    let size = (tower.order() as u128).checked_pow(code.k() as u32).unwrap_or(u128::MAX);
    if size <= brute_limit as u128 {
        let brute = minimal_by_pairs(code)?;
        if brute.is_none() != report.minimal {
            return Err(SumRankError::Invariant("geometric and codeword minimality verdicts differ".into()));
        }
        report.brute_force_checked = true;
    }
    Ok(report)
}

/// Messages (x, y) with supp(yG) ⊆ supp(xG), ⟨x⟩ ≠ ⟨y⟩.
pub type MessagePair = (Vec<Code>, Vec<Code>);

/// First ordered pair (x, y) of distinct projective messages with supp(yG) ⊆ supp(xG).
pub fn minimal_by_pairs(code: &SumRankCode) -> Result<Option<MessagePair>, SumRankError> {
    let points = PointEnumerator::new(code.tower.order(), code.k());
    let msgs: Vec<Vec<Code>> = points.iter().collect();
    let supports = msgs.iter().map(|x| support(code, x)).collect::<Result<Vec<_>, _>>()?;
    let base = code.tower.base();
    let hits = par::map_indices(msgs.len() as u128, |xi| {
        let sx = &supports[xi as usize];
        (0..msgs.len()).find(|&yi| yi != xi as usize && supports[yi].is_subset_of(sx, base))
    });
    Ok(hits
        .iter()
        .enumerate()
        .find_map(|(xi, y)| y.map(|yi| (msgs[xi].clone(), msgs[yi].clone()))))
}

/// Image under c ↦ (a_1 c^{(π^{-1}(1))} M_1 | … | a_t c^{(π^{-1}(t))} M_t), blocks indexed in
/// stored (sorted) order; `pi[b]` is the new position of block b.
pub fn apply_isometry(
    code: &SumRankCode,
    a: &[Code],
    mats: &[Vec<Vec<Code>>],
    pi: &[usize],
) -> Result<SumRankCode, SumRankError> {
    let t = code.t();
    if a.len() != t || mats.len() != t || pi.len() != t {
        return Err(SumRankError::BadShape("one scalar, matrix and image per block".into()));
    }
    if a.iter().any(|&x| x == 0 || x >= code.tower.order()) {
        return Err(SumRankError::BadShape("scalars must be nonzero field elements".into()));
    }
    let mut inv = vec![usize::MAX; t];
    for (b, &p) in pi.iter().enumerate() {
        if p >= t || inv[p] != usize::MAX || code.n[b] != code.n[p] {
            return Err(SumRankError::LengthProfileBroken);
        }
        inv[p] = b;
    }
    let q = code.tower.q();
    for (i, mat) in mats.iter().enumerate() {
        let n = code.n[i];
        if mat.len() != n || mat.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= q)) {
            return Err(SumRankError::BadShape(format!("matrix {i} must be {n}×{n} over F_q")));
        }
        if linalg::rank(code.tower.base(), mat) < n {
            return Err(SumRankError::NotInvertible(i));
        }
    }
    let f = &*code.tower;
    let generator = code
        .generator
        .iter()
        .map(|row| {
            (0..t)
                .flat_map(|i| {
                    let src = &row[code.block_range(inv[i])];
                    let scaled: Vec<Code> = src.iter().map(|&c| f.mul(a[i], c)).collect();
                    linalg::vec_mat(f, &scaled, &mats[i])
                })
                .collect()
        })
        .collect();
    Ok(SumRankCode { tower: code.tower.clone(), n: code.n.clone(), origin: code.origin.clone(), generator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{construct_field_partition, construct_glued, construct_pseudoregulus};
    use crate::subspace::DEFAULT_ENUMERATION_CAP as CAP;
    use proptest::prelude::*;

    fn tower(p: u32, m: usize) -> Arc<FieldTower> {
        FieldTower::with_defaults(p, 1, m).unwrap()
    }

    fn pseudoregulus_code() -> SumRankCode {
        let t = tower(3, 2);
        let d = construct_pseudoregulus(&AmbientSpace::new(&t, 2).unwrap(), 1, &[1, 4]).unwrap();
        code_from_system(&d).unwrap()
    }

    #[test]
    fn correspondence_round_trip() {
        let t = tower(3, 2);
        let d = construct_pseudoregulus(&AmbientSpace::new(&t, 2).unwrap(), 1, &[1, 4]).unwrap();
        let c = code_from_system(&d).unwrap();
        assert_eq!((c.k(), c.n()), (2, &[2, 2][..]));
        assert_eq!(system_from_code(&c).unwrap(), d);
        let dup = SumRankCode::new(&t, vec![vec![1, 2, 1, 0], vec![0, 0, 0, 1]], &[2, 2]).unwrap();
        assert_eq!(system_from_code(&dup), Err(SumRankError::DegenerateCode(0)));
    }

    #[test]
    fn weights_and_supports() {
        let c = pseudoregulus_code();
        assert_eq!(sumrank_weight(&c, &[0, 0]).unwrap(), 0);
        assert_eq!(support(&c, &[0, 0]).unwrap().dims(), vec![0, 0]);
        assert_eq!(sumrank_weight(&c, &[1, 0]).unwrap(), 4);

        let t = tower(3, 2);
        let i = 3;
        let code = SumRankCode::new(&t, vec![vec![1, i, 0, 0], vec![0, 0, 1, 0]], &[2, 2]).unwrap();
        assert_eq!(support(&code, &[1, 0]).unwrap().dims(), vec![2, 0]);
    }

    #[test]
    fn distances() {
        let c = pseudoregulus_code();
        assert_eq!(min_distance(&c, CAP).unwrap(), 3);
        assert_eq!(min_distance_exhaustive(&c, CAP).unwrap(), 3);
        let s = singleton_msrd(c.n(), 2, 2, 3).unwrap();
        assert_eq!((s.j, s.delta, s.bound_exponent, s.is_msrd), (2, 0, 4, true));
        assert_eq!(s.optimal_inequality, Some(true));

        let t = tower(3, 3);
        let alpha = (1..27).find(|&x| t.norm(x) == 2).unwrap();
        let glued = code_from_system(&construct_glued(&t, 4, 1, &[1, alpha]).unwrap()).unwrap();
        assert_eq!(min_distance(&glued, CAP).unwrap(), 5);
        let s = singleton_msrd(glued.n(), 3, 4, 5).unwrap();
        assert_eq!((s.bound_exponent, s.is_msrd, s.optimal_inequality), (12, true, Some(true)));

        let rep = SumRankCode::new(&tower(2, 2), vec![vec![1, 2, 1]], &[2, 1]).unwrap();
        assert_eq!(min_distance(&rep, CAP).unwrap(), 3);
        assert_eq!(singleton_msrd(&[2, 2], 2, 2, 5), Err(SumRankError::InvalidDistance { d: 5, max: 4 }));
        assert_eq!(singleton_msrd(&[1, 2], 2, 1, 1), Err(SumRankError::ProfileNotSorted));
    }

    #[test]
    fn duals() {
        let c = pseudoregulus_code();
        let d = dual_code(&c);
        assert_eq!(d.k(), 2);
        assert_eq!(min_distance(&d, CAP).unwrap(), 3);
        assert!(dual_code(&d).same_code(&c));
        let r = verify_dual_msrd(&c, CAP).unwrap();
        assert!(r.msrd && r.dual_msrd);
        let full = SumRankCode::new(&tower(2, 2), vec![vec![1, 0], vec![0, 1]], &[1, 1]).unwrap();
        assert_eq!(dual_code(&full).k(), 0);
    }

    #[test]
    fn delsarte() {
        let t = tower(3, 2);
        let d = construct_pseudoregulus(&AmbientSpace::new(&t, 2).unwrap(), 1, &[1, 4]).unwrap();
        let r = delsarte_check(&d, CAP).unwrap();
        assert!(r.optimal && r.dual_optimal);
        let back = delsarte_check(&r.dual, CAP).unwrap();
        assert_eq!(back.m_dual, r.m);
        let a = AmbientSpace::new(&t, 2).unwrap();
        // Three F_3-dimensions inside a single F_9-line give a degenerate dual block.
        let bad = SubspaceDesign::from_spanning_sets(&a, &[vec![vec![1, 0], vec![3, 0], vec![0, 1]]]).unwrap();
        assert_eq!(delsarte_dual(&bad), Err(SumRankError::DegenerateDual));
    }

    #[test]
    fn minimality() {
        let baer = code_from_system(&construct_field_partition(&tower(2, 2), 3).unwrap()).unwrap();
        let r = is_minimal_code(&baer, CAP, BRUTE_FORCE_LIMIT).unwrap();
        assert!(r.minimal && r.brute_force_checked);
        let r = is_minimal_code(&pseudoregulus_code(), CAP, BRUTE_FORCE_LIMIT).unwrap();
        assert!(!r.minimal && r.brute_force_checked);
        let (x, y) = r.witness.unwrap();
        let c = pseudoregulus_code();
        assert!(support(&c, &y).unwrap().is_subset_of(&support(&c, &x).unwrap(), c.tower().base()));
    }

    #[test]
    fn isometries() {
        let c = pseudoregulus_code();
        let id = vec![vec![1, 0], vec![0, 1]];
        let same = apply_isometry(&c, &[1, 1], &[id.clone(), id.clone()], &[0, 1]).unwrap();
        assert!(same.same_code(&c));
        let swapped = apply_isometry(&c, &[1, 1], &[id.clone(), id.clone()], &[1, 0]).unwrap();
        assert_eq!(min_distance(&swapped, CAP).unwrap(), 3);
        let scaled = apply_isometry(&c, &[3, 1], &[id.clone(), id.clone()], &[0, 1]).unwrap();
        assert_eq!(weight_distribution_exhaustive(&scaled, CAP).unwrap(), weight_distribution_exhaustive(&c, CAP).unwrap());
        assert_eq!(
            apply_isometry(&c, &[1, 1], &[vec![vec![1, 1], vec![2, 2]], id], &[0, 1]),
            Err(SumRankError::NotInvertible(0))
        );
    }

    fn arb_code() -> impl Strategy<Value = (Vec<usize>, Vec<Vec<Code>>)> {
        (1usize..=2, prop::collection::vec(1usize..=3, 1..=3)).prop_flat_map(|(k, lengths)| {
            let n: usize = lengths.iter().sum();
            (Just(lengths), prop::collection::vec(prop::collection::vec(0u32..9, n), k))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 96, rng_seed: proptest::test_runner::RngSeed::Fixed(7), ..ProptestConfig::default() })]

        #[test]
        fn weights_agree_and_singleton_holds((lengths, g) in arb_code()) {
            let t = tower(3, 2);
            let Ok(code) = SumRankCode::new(&t, g, &lengths) else { return Ok(()); };
            for x in linalg::all_vectors(9, code.k()) {
                sumrank_weight(&code, &x).unwrap();
            }
            let d = min_distance(&code, CAP).unwrap();
            prop_assert_eq!(d, min_distance_exhaustive(&code, CAP).unwrap());
            prop_assert!(singleton_msrd(code.n(), 2, code.k(), d).is_ok());
            prop_assert_eq!(dual_code(&code).k() + code.k(), code.total_len());
        }
    }
}
