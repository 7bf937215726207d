//! Strong subspace designs (members are F_{q^m}-subspaces, intersections counted over
//! F_{q^m}) and the routes from them to ordinary subspace designs: evasive intersection,
//! restriction of scalars to a subfield, high-degree places and Cameron–Liebler sets.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::design::{design_profile, DesignError, DesignProfile, SubspaceDesign};
use crate::gf::{poly, subfield_embedding, Code, FieldOps, FieldTower, GfError};
use crate::linalg;
use crate::par;
use crate::subspace::{AmbientSpace, FqSubspace, FqmSubspace, SubspaceError, SubspaceFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrongError {
    #[error("a strong design needs at least one member")]
    EmptyDesign,
    #[error("members do not share one ambient space")]
    AmbientMismatch,
    #[error("s = {s} is outside 1..={k}")]
    InvalidS { s: usize, k: usize },
    #[error("E meets an {h}-dimensional subspace in {found} > c·{h} dimensions")]
    NotEvasive { h: usize, found: usize },
    #[error("members span {span} < s = {s} dimensions over F_{{q^m}}")]
    SpanTooSmall { span: usize, s: usize },
    #[error("c = {c} is not a multiple of m = {m}")]
    NotAMultiple { c: usize, m: usize },
    #[error("polynomial {0:?} is not irreducible over F_q")]
    NotIrreducible(Vec<Code>),
    #[error("places τ^{i}p and τ^{j}p coincide")]
    PlacesCollide { i: usize, j: usize },
    #[error("degree bound violated: {0}")]
    DegreeTooLarge(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Design(#[from] Box<DesignError>),
}

impl From<DesignError> for StrongError {
    fn from(e: DesignError) -> Self {
        StrongError::Design(Box::new(e))
    }
}

/// An ordered tuple (V_1, …, V_t) of F_{q^m}-subspaces of one ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongSubspaceDesign {
    ambient: AmbientSpace,
    members: Vec<FqmSubspace>,
}

impl StrongSubspaceDesign {
    pub fn new(ambient: &AmbientSpace, members: Vec<FqmSubspace>) -> Result<StrongSubspaceDesign, StrongError> {
        if members.is_empty() {
            return Err(StrongError::EmptyDesign);
        }
        if members.iter().any(|v| v.ambient() != ambient) {
            return Err(StrongError::AmbientMismatch);
        }
        Ok(StrongSubspaceDesign { ambient: ambient.clone(), members })
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }
    pub fn members(&self) -> &[FqmSubspace] {
        &self.members
    }
    pub fn t(&self) -> usize {
        self.members.len()
    }
    pub fn dims(&self) -> Vec<usize> {
        self.members.iter().map(FqmSubspace::dim).collect()
    }
    /// dim_{F_{q^m}} ⟨V_1, …, V_t⟩.
    pub fn span_dim(&self) -> usize {
        let rows: Vec<Vec<Code>> = self.members.iter().flat_map(|v| v.rows().iter().cloned()).collect();
        linalg::rank(&**self.ambient.tower(), &rows)
    }
}

/// Exact max of Σ dim(V_i ∩ W) over s-dimensional W, with a first maximizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongProfile {
    pub s: usize,
    pub a_min: usize,
    pub witness: FqmSubspace,
}

pub fn verify_strong(design: &StrongSubspaceDesign, s: usize, cap: u64) -> Result<StrongProfile, StrongError> {
    let k = design.ambient.k();
    if s == 0 || s > k {
        return Err(StrongError::InvalidS { s, k });
    }
    let family = SubspaceFamily::new(&design.ambient, s, cap)?;
    let sums = par::map_indices(family.len(), |i| {
        let w = family.subspace(i);
        design.members.iter().map(|v| v.meet_dim(&w)).sum::<usize>()
    });
    let (best, a_min) = sums
        .iter()
        .enumerate()
        .fold((0, 0), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    Ok(StrongProfile { s, a_min, witness: family.subspace(best as u128) })
}

/// Rational constant c = num/den of an (h, c·h)-evasive subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: usize,
    pub den: usize,
}

impl Ratio {
    pub fn new(num: usize, den: usize) -> Result<Ratio, StrongError> {
        if num == 0 || den == 0 {
            return Err(StrongError::BadParameters("c must be a positive rational".into()));
        }
        Ok(Ratio { num, den })
    }
    /// ⌊c·x⌋.
    pub fn floor_mul(&self, x: usize) -> usize {
        self.num * x / self.den
    }
}

/// Checks dim_{F_q}(E ∩ W) ≤ c·h for every F_{q^m}-subspace W of each dimension h ≤ s.
pub fn check_evasive(e: &FqSubspace, c: Ratio, s: usize, cap: u64) -> Result<(), StrongError> {
    for h in 1..=s.min(e.ambient().k()) {
        let family = SubspaceFamily::new(e.ambient(), h, cap)?;
        let worst = par::map_indices(family.len(), |i| e.meet_dim_fqm(&family.subspace(i))).into_iter().max().unwrap_or(0);
        if worst > c.floor_mul(h) {
            return Err(StrongError::NotEvasive { h, found: worst });
        }
    }
    Ok(())
}

/// The result of one conversion: the ordinary design and its certified profile.
#[derive(Clone, Debug)]
pub struct Converted {
    pub design: SubspaceDesign,
    pub bound: usize,
    pub profile: DesignProfile,
}

fn certify_bound(design: SubspaceDesign, s: usize, bound: usize, cap: u64) -> Result<Converted, StrongError> {
    let profile = design_profile(&design, s, cap)?;
    if profile.a_min > bound {
        return Err(DesignError::NotADesign { s, a: bound, found: profile.a_min }.into());
    }
    Ok(Converted { design, bound, profile })
}

/// U_i = V_i ∩ E for an (h, c·h)-evasive E (h ≤ s): an (s, ⌊cA⌋) subspace design with
/// dim U_i ≥ m·dim V_i − km + dim E.
pub fn evasive_intersect(
    design: &StrongSubspaceDesign,
    e: &FqSubspace,
    c: Ratio,
    s: usize,
    cap: u64,
) -> Result<Converted, StrongError> {
    let amb = &design.ambient;
    if e.ambient() != amb {
        return Err(StrongError::AmbientMismatch);
    }
    let span = design.span_dim();
    if span < s {
        return Err(StrongError::SpanTooSmall { span, s });
    }
    check_evasive(e, c, s, cap)?;
    let a = verify_strong(design, s, cap)?.a_min;
    let members = design.members.iter().map(|v| v.expand().meet(e)).collect::<Result<Vec<_>, _>>()?;
    let km = amb.fq_dim();
    for (u, v) in members.iter().zip(&design.members) {
        let floor = (amb.m() * v.dim() + e.dim()).saturating_sub(km);
        if u.dim() < floor {
            return Err(StrongError::Invariant(format!("dim U = {} < {floor}", u.dim())));
        }
    }
    certify_bound(SubspaceDesign::new(amb, members)?, s, c.floor_mul(a), cap)
}

/// Regards each V_i ⊆ F_{q^m}^k as an F_q-subspace of F_{q^c}^k (m | c): an (s, mA) design.
pub fn intermediate_field_design(
    design: &StrongSubspaceDesign,
    big: &Arc<FieldTower>,
    s: usize,
    cap: u64,
) -> Result<Converted, StrongError> {
    let small = design.ambient.tower();
    let (m, c) = (small.m(), big.m());
    if c % m != 0 {
        return Err(StrongError::NotAMultiple { c, m });
    }
    let emb = subfield_embedding(small, big)?;
    let a = verify_strong(design, s, cap)?.a_min;
    let target = AmbientSpace::new(big, design.ambient.k())?;
    let members = design
        .members
        .iter()
        .map(|v| {
            let vectors: Vec<Vec<Code>> = v.expand().basis_vectors().iter().map(|b| b.iter().map(|&x| emb[x as usize]).collect()).collect();
            FqSubspace::span(&target, &vectors)
        })
        .collect::<Result<Vec<_>, _>>()?;
    for (u, v) in members.iter().zip(&design.members) {
        if u.dim() != m * v.dim() {
            return Err(StrongError::Invariant("restriction of scalars changed a dimension".into()));
        }
    }
    certify_bound(SubspaceDesign::new(&target, members)?, s, m * a, cap)
}

/// Places p, τp, …, τ^{k−1}p of F_q[x] with τ: x ↦ ζx, and the fixed residue maps
/// f ↦ f(r_j), r_j the smallest root of τ^j p in F_{q^m}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Places {
    pub polys: Vec<Vec<Code>>,
    pub roots: Vec<Code>,
}

/// Monic τ^j p(x) = p(ζ^j x) / ζ^{j·deg p}.
fn twist_place(base: &dyn FieldOps, p: &[Code], zeta_j: Code) -> Vec<Code> {
    let mut scale = 1;
    let twisted: Vec<Code> = p
        .iter()
        .map(|&c| {
            let v = base.mul(c, scale);
            scale = base.mul(scale, zeta_j);
            v
        })
        .collect();
    let lead_inv = base.inv(*twisted.last().expect("nonzero"));
    twisted.iter().map(|&c| base.mul(c, lead_inv)).collect()
}

pub fn places(tower: &FieldTower, p: &[Code], zeta: Code, k: usize) -> Result<Places, StrongError> {
    let q = tower.q();
    let m = tower.m();
    let base = tower.base();
    let mut p = p.to_vec();
    poly::trim(&mut p);
    if p.iter().any(|&c| c >= q) {
        return Err(GfError::OutOfRange(*p.iter().max().unwrap() as u64).into());
    }
    if p.len() != m + 1 {
        return Err(StrongError::BadParameters(format!("p must have degree m = {m}")));
    }
    if m as u32 > q - 1 {
        return Err(StrongError::DegreeTooLarge(format!("m = {m} > q − 1 = {}", q - 1)));
    }
    if zeta == 0 || zeta >= q || tower.mult_order(zeta) != (q - 1) as u64 {
        return Err(StrongError::BadParameters(format!("ζ = {zeta} is not primitive in F_q")));
    }
    if poly::is_irreducible(base, &p, u64::MAX) != Some(true) {
        return Err(StrongError::NotIrreducible(p));
    }
    let polys: Vec<Vec<Code>> = (0..k).map(|j| twist_place(base, &p, base.pow(zeta, j as u64))).collect();
    for i in 0..k {
        for j in i + 1..k {
            if polys[i] == polys[j] {
                return Err(StrongError::PlacesCollide { i, j });
            }
        }
    }
    let roots = polys
        .iter()
        .map(|g| {
            (0..tower.order())
                .find(|&x| poly::eval(tower, g, x) == 0)
                .ok_or_else(|| StrongError::Invariant("irreducible place without a root in F_{q^m}".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Places { polys, roots })
}

/// U_i = π(V_i) with π(f) = (f mod p, f mod τp, …, f mod τ^{k−1}p) ∈ F_{q^m}^k, where each
/// V_i is spanned by polynomials over F_q of degree < h and h < km. π is injective,
/// so dim U_i = dim V_i is asserted.
pub fn places_embed(
    ambient: &AmbientSpace,
    spaces: &[Vec<Vec<Code>>],
    p: &[Code],
    zeta: Code,
    h: usize,
) -> Result<SubspaceDesign, StrongError> {
    let tower = ambient.tower();
    let k = ambient.k();
    if h >= k * tower.m() {
        return Err(StrongError::DegreeTooLarge(format!("h = {h} ≥ km = {}", k * tower.m())));
    }
    let pl = places(tower, p, zeta, k)?;
    let base = tower.base();
    let mut members = Vec::with_capacity(spaces.len());
    for gens in spaces {
        let mut padded: Vec<Vec<Code>> = Vec::with_capacity(gens.len());
        for f in gens {
            let mut f = f.clone();
            poly::trim(&mut f);
            if f.len() > h {
                return Err(StrongError::DegreeTooLarge(format!("{f:?} has degree ≥ h = {h}")));
            }
            if f.iter().any(|&c| c >= tower.q()) {
                return Err(GfError::OutOfRange(*f.iter().max().unwrap() as u64).into());
            }
            f.resize(h, 0);
            padded.push(f);
        }
        let images: Vec<Vec<Code>> = padded.iter().map(|f| pl.roots.iter().map(|&r| poly::eval(&**tower, f, r)).collect()).collect();
        let u = FqSubspace::span(ambient, &images)?;
        if u.dim() != linalg::rank(base, &padded) {
            return Err(StrongError::Invariant("the places map is not injective".into()));
        }
        members.push(u);
    }
    Ok(SubspaceDesign::new(ambient, members)?)
}

/// Cameron–Liebler sets of projective n-spaces of PG(k, q), i.e. (n+1)-dimensional
/// subspaces of F_q^{k+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClKind {
    /// All n-spaces through a point.
    PointPencil { point: Vec<Code> },
    /// All n-spaces inside the hyperplane with the given normal (k = 2n+1).
    InHyperplane { normal: Vec<Code> },
    /// Pencil through P plus the n-spaces of H, P ∉ H (k = 2n+1).
    Mixed { point: Vec<Code>, normal: Vec<Code> },
    /// Complement within all n-spaces (k = 2n+1).
    Complement(Box<ClKind>),
    /// Union of pairwise disjoint sets.
    Union(Vec<ClKind>),
}

/// Closed-form intersection numbers: w[i−1] (resp. w'[i−1]) members meet an n-space π
/// of the set (resp. not of the set) in an (n−i)-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClPrediction {
    pub x: u128,
    pub w: Vec<u128>,
    pub w_prime: Vec<u128>,
    pub a: u128,
}

fn gauss(n: i64, k: i64, q: u64) -> u128 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        linalg::gaussian_binomial(n as usize, k as usize, q).expect("small Gaussian binomial")
    }
}

/// w_i = ((x−1)(q^{n+1}−1)/(q^{n−i+1}−1) + q^i (q^{k−n}−1)/(q^i−1)) q^{i(i−1)} [k−n−1, i−1]_q [n, i]_q,
/// w'_i = x [k−n−1, i−1]_q [n+1, i]_q q^{i(i−1)}, A = n+1 + Σ w_i (n−i+1).
/// Using [n, i]_q/(q^{n−i+1}−1) = [n, i−1]_q/(q^i−1) removes the pole at i = n+1, where
/// w_{n+1} = (x−1) q^{n(n+1)} [k−n−1, n]_q.
pub fn cl_prediction(q: u64, n: usize, k: usize, x: u128) -> Result<ClPrediction, StrongError> {
    if k < 2 * n + 1 || x == 0 {
        return Err(StrongError::BadParameters(format!("need k ≥ 2n+1 and x ≥ 1 (n = {n}, k = {k}, x = {x})")));
    }
    let qq = q as u128;
    let (n_, k_) = (n as i64, k as i64);
    let mut w = Vec::with_capacity(n + 1);
    let mut w_prime = Vec::with_capacity(n + 1);
    for i in 1..=n + 1 {
        let ii = i as i64;
        let g = gauss(k_ - n_ - 1, ii - 1, q) * qq.pow((i * (i - 1)) as u32);
        w_prime.push(x * g * gauss(n_ + 1, ii, q));
        let num = (x - 1) * (qq.pow(n as u32 + 1) - 1) * gauss(n_, ii - 1, q)
            + qq.pow(i as u32) * (qq.pow((k - n) as u32) - 1) * gauss(n_, ii, q);
        let den = qq.pow(i as u32) - 1;
        if !(g * num).is_multiple_of(den) {
            return Err(StrongError::Invariant(format!("w_{i} is not integral")));
        }
        w.push(g * num / den);
    }
    let a = (n as u128 + 1) + w.iter().enumerate().map(|(j, &wi)| wi * (n - j) as u128).sum::<u128>();
    Ok(ClPrediction { x, w, w_prime, a })
}

type RowSet = BTreeSet<Vec<Vec<Code>>>;

fn cl_members(amb: &AmbientSpace, n: usize, kind: &ClKind, all: &[FqmSubspace]) -> Result<(RowSet, u128), StrongError> {
    let k = amb.k() - 1;
    let f = &**amb.tower();
    let q = amb.q() as u128;
    let check = |v: &Vec<Code>| -> Result<(), StrongError> {
        if v.len() != amb.k() || v.iter().all(|&c| c == 0) || v.iter().any(|&c| c >= amb.big_q()) {
            return Err(StrongError::BadParameters(format!("{v:?} is not a nonzero vector of F_q^{}", amb.k())));
        }
        Ok(())
    };
    let need_middle = || {
        if k != 2 * n + 1 {
            Err(StrongError::BadParameters(format!("this kind needs k = 2n+1 (n = {n}, k = {k})")))
        } else {
            Ok(())
        }
    };
    let through = |p: &[Code]| -> RowSet { all.iter().filter(|s| s.contains(p)).map(|s| s.rows().to_vec()).collect() };
    let inside = |h: &[Code]| -> RowSet {
        all.iter().filter(|s| s.rows().iter().all(|r| linalg::dot(f, h, r) == 0)).map(|s| s.rows().to_vec()).collect()
    };
    Ok(match kind {
        ClKind::PointPencil { point } => {
            check(point)?;
            (through(point), 1)
        }
        ClKind::InHyperplane { normal } => {
            check(normal)?;
            need_middle()?;
            (inside(normal), 1)
        }
        ClKind::Mixed { point, normal } => {
            check(point)?;
            check(normal)?;
            need_middle()?;
            if linalg::dot(f, point, normal) == 0 {
                return Err(StrongError::BadParameters("the point lies in the hyperplane".into()));
            }
            let mut set = through(point);
            set.extend(inside(normal));
            (set, 2)
        }
        ClKind::Complement(inner) => {
            need_middle()?;
            let (set, x) = cl_members(amb, n, inner, all)?;
            let rest = all.iter().map(|s| s.rows().to_vec()).filter(|r| !set.contains(r)).collect();
            (rest, q.pow(n as u32 + 1) + 1 - x)
        }
        ClKind::Union(parts) => {
            if parts.is_empty() {
                return Err(StrongError::BadParameters("empty union".into()));
            }
            let mut set = RowSet::new();
            let mut x = 0;
            for part in parts {
                let (s, xp) = cl_members(amb, n, part, all)?;
                if !set.is_disjoint(&s) {
                    return Err(StrongError::BadParameters("union parts are not disjoint".into()));
                }
                set.extend(s);
                x += xp;
            }
            (set, x)
        }
    })
}

/// The Cameron–Liebler set as a strong (n+1, A) design of F_q^{k+1} (the tower must have
/// m = 1), with its closed-form parameters. The parameter x = |L|/[k, n]_q is checked
/// against the kind's declared value.
pub fn cameron_liebler(
    ambient: &AmbientSpace,
    n: usize,
    kind: &ClKind,
    cap: u64,
) -> Result<(StrongSubspaceDesign, ClPrediction), StrongError> {
    if ambient.m() != 1 {
        return Err(StrongError::BadParameters("Cameron–Liebler sets live in a tower with m = 1".into()));
    }
    if ambient.k() < 2 {
        return Err(StrongError::BadParameters("need k ≥ 1".into()));
    }
    let k = ambient.k() - 1;
    if k < 2 * n + 1 {
        return Err(StrongError::BadParameters(format!("need k ≥ 2n+1 (n = {n}, k = {k})")));
    }
    let q = ambient.q() as u64;
    let family = SubspaceFamily::echelon(ambient, n + 1, cap)?;
    let all: Vec<FqmSubspace> = family.iter().collect();
    let (set, x) = cl_members(ambient, n, kind, &all)?;
    if set.is_empty() {
        return Err(StrongError::EmptyDesign);
    }
    let per = gauss(k as i64, n as i64, q);
    if set.len() as u128 != x * per {
        return Err(StrongError::Invariant(format!("|L| = {} ≠ x·[k, n]_q = {}", set.len(), x * per)));
    }
    let members = set.into_iter().map(|rows| FqmSubspace::from_canonical_rows(ambient, rows)).collect::<Result<Vec<_>, _>>()?;
    let pred = cl_prediction(q, n, k, x)?;
    Ok((StrongSubspaceDesign::new(ambient, members)?, pred))
}

/// Brute-force check of the intersection numbers over every n-space π, and of A.
pub fn verify_cameron_liebler(
    design: &StrongSubspaceDesign,
    n: usize,
    pred: &ClPrediction,
    cap: u64,
) -> Result<StrongProfile, StrongError> {
    let family = SubspaceFamily::echelon(&design.ambient, n + 1, cap)?;
    let members: BTreeSet<&[Vec<Code>]> = design.members.iter().map(FqmSubspace::rows).collect();
    let bad = par::map_indices(family.len(), |idx| {
        let pi = family.subspace(idx);
        let mut counts = vec![0u128; n + 1];
        for v in &design.members {
            let d = v.meet_dim(&pi);
            // meeting in an (n−i)-space means an (n+1−i)-dimensional intersection
            if d <= n {
                counts[n - d] += 1;
            }
        }
        let expected = if members.contains(pi.rows()) { &pred.w } else { &pred.w_prime };
        (counts != *expected).then(|| (pi.rows().to_vec(), counts))
    });
    if let Some((rows, counts)) = bad.into_iter().flatten().next() {
        return Err(StrongError::Invariant(format!("π = {rows:?} has counts {counts:?}")));
    }
    let profile = verify_strong(design, n + 1, cap)?;
    if profile.a_min as u128 != pred.a {
        return Err(StrongError::Invariant(format!("sweep gives A = {}, closed form {}", profile.a_min, pred.a)));
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::DEFAULT_ENUMERATION_CAP as CAP;

    fn pg32() -> AmbientSpace {
        AmbientSpace::new(&FieldTower::with_defaults(2, 1, 1).unwrap(), 4).unwrap()
    }

    fn e(i: usize, k: usize) -> Vec<Code> {
        let mut v = vec![0; k];
        v[i] = 1;
        v
    }

    #[test]
    fn strong_profiles() {
        let a = AmbientSpace::new(&FieldTower::with_defaults(2, 1, 2).unwrap(), 3).unwrap();
        let full = StrongSubspaceDesign::new(&a, vec![FqmSubspace::full(&a)]).unwrap();
        assert_eq!(verify_strong(&full, 2, CAP).unwrap().a_min, 2);
        let point = StrongSubspaceDesign::new(&a, vec![FqmSubspace::new(&a, vec![e(0, 3)]).unwrap()]).unwrap();
        assert_eq!(verify_strong(&point, 1, CAP).unwrap().a_min, 1);
        assert!(matches!(verify_strong(&point, 4, CAP), Err(StrongError::InvalidS { .. })));
    }

    #[test]
    fn cl_closed_form() {
        let p = cl_prediction(2, 1, 3, 1).unwrap();
        assert_eq!(p, ClPrediction { x: 1, w: vec![6, 0], w_prime: vec![3, 4], a: 8 });
        assert_eq!(cl_prediction(2, 1, 3, 2).unwrap().w, vec![9, 4]);
        assert!(cl_prediction(2, 2, 4, 1).is_err());
    }

    #[test]
    fn cl_point_pencil_pg32() {
        let a = pg32();
        let (d, pred) = cameron_liebler(&a, 1, &ClKind::PointPencil { point: e(0, 4) }, CAP).unwrap();
        assert_eq!((d.t(), pred.x, pred.a), (7, 1, 8));
        let prof = verify_cameron_liebler(&d, 1, &pred, CAP).unwrap();
        assert_eq!(prof.a_min, 8);
    }

    #[test]
    fn cl_other_kinds_pg32() {
        let a = pg32();
        let (h, ph) = cameron_liebler(&a, 1, &ClKind::InHyperplane { normal: e(0, 4) }, CAP).unwrap();
        assert_eq!((h.t(), ph.x), (7, 1));
        verify_cameron_liebler(&h, 1, &ph, CAP).unwrap();
        let mixed = ClKind::Mixed { point: e(0, 4), normal: e(0, 4) };
        let (m, pm) = cameron_liebler(&a, 1, &mixed, CAP).unwrap();
        assert_eq!((m.t(), pm.x), (14, 2));
        verify_cameron_liebler(&m, 1, &pm, CAP).unwrap();
        let comp = ClKind::Complement(Box::new(ClKind::PointPencil { point: e(0, 4) }));
        let (c, pc) = cameron_liebler(&a, 1, &comp, CAP).unwrap();
        assert_eq!((c.t(), pc.x), (28, 4));
        verify_cameron_liebler(&c, 1, &pc, CAP).unwrap();
        let union = ClKind::Union(vec![ClKind::PointPencil { point: e(0, 4) }, ClKind::InHyperplane { normal: e(0, 4) }]);
        assert_eq!(cameron_liebler(&a, 1, &union, CAP).unwrap().1.x, 2);
        let overlap = ClKind::Union(vec![ClKind::PointPencil { point: e(0, 4) }, ClKind::PointPencil { point: e(1, 4) }]);
        assert!(matches!(cameron_liebler(&a, 1, &overlap, CAP), Err(StrongError::BadParameters(_))));
        let bad_mixed = ClKind::Mixed { point: e(0, 4), normal: e(1, 4) };
        assert!(cameron_liebler(&a, 1, &bad_mixed, CAP).is_err());
    }

    #[test]
    fn evasive_examples() {
        let t = FieldTower::with_defaults(2, 1, 2).unwrap();
        let a = AmbientSpace::new(&t, 2).unwrap();
        let lines = StrongSubspaceDesign::new(
            &a,
            vec![FqmSubspace::new(&a, vec![vec![1, 0]]).unwrap(), FqmSubspace::new(&a, vec![vec![0, 1]]).unwrap()],
        )
        .unwrap();
        let sub = FqSubspace::span(&a, &[vec![1, 0], vec![0, 1]]).unwrap();
        let out = evasive_intersect(&lines, &sub, Ratio::new(1, 1).unwrap(), 1, CAP).unwrap();
        assert_eq!((out.bound, out.profile.a_min, out.design.dims()), (1, 1, vec![1, 1]));

        let full = FqSubspace::full(&a);
        let out = evasive_intersect(&lines, &full, Ratio::new(2, 1).unwrap(), 1, CAP).unwrap();
        assert_eq!((out.bound, out.design.dims()), (2, vec![2, 2]));

        let fat = FqSubspace::span(&a, &[vec![1, 0], vec![2, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            evasive_intersect(&lines, &fat, Ratio::new(1, 1).unwrap(), 1, CAP),
            Err(StrongError::NotEvasive { h: 1, found: 2 })
        ));
    }

    #[test]
    fn intermediate_field_examples() {
        let small = FieldTower::with_defaults(2, 1, 2).unwrap();
        let a = AmbientSpace::new(&small, 2).unwrap();
        let s = StrongSubspaceDesign::new(&a, vec![FqmSubspace::new(&a, vec![vec![1, 0]]).unwrap()]).unwrap();
        let big = FieldTower::with_defaults(2, 1, 4).unwrap();
        let out = intermediate_field_design(&s, &big, 1, CAP).unwrap();
        assert_eq!((out.bound, out.profile.a_min, out.design.dims()), (2, 2, vec![2]));
        let same = intermediate_field_design(&s, &small, 1, CAP).unwrap();
        assert_eq!(same.bound, 2);
        let odd = FieldTower::with_defaults(2, 1, 3).unwrap();
        assert!(matches!(intermediate_field_design(&s, &odd, 1, CAP), Err(StrongError::NotAMultiple { c: 3, m: 2 })));
    }

    #[test]
    fn places_examples() {
        let t = FieldTower::with_defaults(2, 2, 3).unwrap();
        let a = AmbientSpace::new(&t, 2).unwrap();
        let zeta = 2;
        let invariant = t.fqm_modulus().to_vec();
        assert!(matches!(places(&t, &invariant, zeta, 2), Err(StrongError::PlacesCollide { i: 0, j: 1 })));

        let base = t.base();
        let p = (0..64u32)
            .map(|c| vec![c % 4, c / 4 % 4, c / 16, 1])
            .find(|p| poly::is_irreducible(base, p, u64::MAX) == Some(true) && places(&t, p, zeta, 2).is_ok())
            .unwrap();
        let d = places_embed(&a, &[vec![vec![1], vec![0, 1]], vec![vec![1]]], &p, zeta, 5).unwrap();
        assert_eq!(d.dims(), vec![2, 1]);
        assert_eq!(d.members()[1].basis_vectors(), vec![vec![1, 1]]);
        assert!(matches!(places_embed(&a, &[vec![vec![1]]], &p, zeta, 6), Err(StrongError::DegreeTooLarge(_))));
        assert!(matches!(places_embed(&a, &[vec![vec![0, 0, 1]]], &[1, 0, 0, 1], zeta, 5), Err(StrongError::NotIrreducible(_))));
    }
}
