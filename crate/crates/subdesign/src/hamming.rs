//! Hamming-metric side: the Ext multiset of a design, hyperplane-wise weight
//! enumerators, two-intersection sets and their strongly regular Cayley graphs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::design::SubspaceDesign;
use crate::gf::{Code, FieldOps};
use crate::linalg;
use crate::par;
use crate::subspace::{AmbientSpace, FqSubspace, SubspaceError, SubspaceFamily};

/// Largest vertex count for which the Cayley graph is built and checked pair by pair.
pub const GRAPH_LIMIT: u64 = 6561;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HammingError {
    #[error("design member {0} is the zero subspace")]
    ZeroMember(usize),
    #[error("hyperplanes meet the system in {0:?} points, not exactly two values")]
    NotTwoIntersection(Vec<u64>),
    #[error("point {0:?} has multiplicity > 1; two-intersection graphs need a set")]
    NotASet(Vec<Code>),
    #[error("point {0:?} is zero or has the wrong length")]
    BadPoint(Vec<Code>),
    #[error("graph on {v} vertices exceeds the limit {limit}")]
    GraphTooLarge { v: u128, limit: u64 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

/// Points of PG(k−1, q^m) with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveSystem {
    ambient: AmbientSpace,
    entries: BTreeMap<Vec<Code>, u64>,
}

impl ProjectiveSystem {
    /// Points are normalized to canonical representatives and merged.
    pub fn new(ambient: &AmbientSpace, points: &[(Vec<Code>, u64)]) -> Result<ProjectiveSystem, HammingError> {
        let mut entries = BTreeMap::new();
        for (p, mult) in points {
            if p.len() != ambient.k() || p.iter().any(|&x| x >= ambient.big_q()) {
                return Err(HammingError::BadPoint(p.clone()));
            }
            let canon = linalg::normalize_projective(&**ambient.tower(), p).ok_or_else(|| HammingError::BadPoint(p.clone()))?;
            if *mult > 0 {
                *entries.entry(canon).or_insert(0) += mult;
            }
        }
        Ok(ProjectiveSystem { ambient: ambient.clone(), entries })
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }
    pub fn entries(&self) -> &BTreeMap<Vec<Code>, u64> {
        &self.entries
    }
    /// N = Σ multiplicities.
    pub fn length(&self) -> u64 {
        self.entries.values().sum()
    }
    pub fn is_set(&self) -> bool {
        self.entries.values().all(|&m| m == 1)
    }
    /// Points span the whole space.
    pub fn is_non_degenerate(&self) -> bool {
        let pts: Vec<Vec<Code>> = self.entries.keys().cloned().collect();
        linalg::rank(&**self.ambient.tower(), &pts) == self.ambient.k()
    }

    /// Multiplicity-weighted number of points inside each hyperplane, in family order.
    pub fn hyperplane_counts(&self, cap: u64) -> Result<Vec<u64>, HammingError> {
        let k = self.ambient.k();
        let family = SubspaceFamily::new(&self.ambient, k - 1, cap)?;
        let tower = self.ambient.tower().clone();
        let pts: Vec<(&Vec<Code>, u64)> = self.entries.iter().map(|(p, &m)| (p, m)).collect();
        Ok(par::map_indices(family.len(), |i| {
            let parity = family.parity(i);
            pts.iter()
                .filter(|(p, _)| parity.iter().all(|row| linalg::dot(&*tower, row, p) == 0))
                .map(|&(_, m)| m)
                .sum()
        }))
    }
}

/// Ext(D) = ⨄_i (L_{U_i}, m_{U_i}) with m_U(⟨v⟩) = (q^{dim(U ∩ ⟨v⟩)} − 1)/(q − 1).
pub fn ext_system(design: &SubspaceDesign, cap: u64) -> Result<ProjectiveSystem, HammingError> {
    if let Some(i) = design.members().iter().position(FqSubspace::is_zero) {
        return Err(HammingError::ZeroMember(i));
    }
    let q = design.ambient().q() as u64;
    let mut points = Vec::new();
    for u in design.members() {
        for (p, &w) in u.linear_set(cap)?.entries() {
            points.push((p.clone(), (q.pow(w) - 1) / (q - 1)));
        }
    }
    let sys = ProjectiveSystem::new(design.ambient(), &points)?;
    let expected: u64 = design.dims().iter().map(|&n| (q.pow(n as u32) - 1) / (q - 1)).sum();
    if sys.length() != expected {
        return Err(HammingError::Invariant(format!("Ext length {} ≠ {expected}", sys.length())));
    }
    Ok(sys)
}

/// Weight enumerator of the associated Hamming code: each hyperplane H contributes
/// q^m − 1 codewords of weight N − |H ∩ P|, plus the zero word.
pub fn weight_enumerator(sys: &ProjectiveSystem, cap: u64) -> Result<BTreeMap<u64, u128>, HammingError> {
    let n = sys.length();
    let scalars = sys.ambient.big_q() as u128 - 1;
    let mut out = BTreeMap::from([(0u64, 1u128)]);
    for c in sys.hyperplane_counts(cap)? {
        *out.entry(n - c).or_insert(0) += scalars;
    }
    let total: u128 = out.values().sum();
    let expected = (sys.ambient.big_q() as u128).pow(sys.ambient.k() as u32);
    if total != expected {
        return Err(HammingError::Invariant(format!("enumerator counts {total} codewords, expected {expected}")));
    }
    Ok(out)
}

/// Closed-form enumerator 1 + (q^m−1)h_1 z^{N−w_1} + (q^m−1)h_0 z^{N−w_0} of the Ext code
/// of a maximum 1-design with t members.
pub fn max1_enumerator(q: u64, m: u32, k: u32, t: u64) -> Option<BTreeMap<u64, u128>> {
    let (h0, h1) = crate::design::h_values(q, m, k, t)?;
    let (w0, w1) = max1_intersections(q, m, k, t);
    let n = t * (q.pow(m * k / 2) - 1) / (q - 1);
    let scalars = q.pow(m) as u128 - 1;
    let mut out = BTreeMap::from([(0u64, 1u128)]);
    for (h, w) in [(h0, w0), (h1, w1)] {
        if h > 0 {
            *out.entry(n - w).or_insert(0) += scalars * h;
        }
    }
    Some(out)
}

/// (w_0, w_1): sizes of H ∩ Ext(D) for hyperplanes meeting a maximum 1-design in
/// tm(k−2)/2 and tm(k−2)/2 + 1 dimensions.
pub fn max1_intersections(q: u64, m: u32, k: u32, t: u64) -> (u64, u64) {
    let e = m * (k - 2) / 2;
    let w0 = t * (q.pow(e) - 1) / (q - 1);
    let w1 = (t - 1) * (q.pow(e) - 1) / (q - 1) + (q.pow(e + 1) - 1) / (q - 1);
    (w0, w1)
}

/// Parameters (v, K, λ, μ) of a strongly regular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SrgParams {
    pub v: u128,
    pub k: u128,
    pub lambda: u128,
    pub mu: u128,
}

impl SrgParams {
    pub fn feasible(&self) -> bool {
        self.k * (self.k - self.lambda - 1) == (self.v - self.k - 1) * self.mu
    }
}

/// The two hyperplane intersection sizes (w_0 < w_1) of a two-intersection set.
pub fn intersection_numbers(sys: &ProjectiveSystem, cap: u64) -> Result<(u64, u64), HammingError> {
    let values: BTreeSet<u64> = sys.hyperplane_counts(cap)?.into_iter().collect();
    let v: Vec<u64> = values.into_iter().collect();
    match v[..] {
        [w0, w1] => Ok((w0, w1)),
        _ => Err(HammingError::NotTwoIntersection(v)),
    }
}

/// Closed-form parameters with v = Q^k, K = N(Q−1), μ = Q²(N−w_1)(N−w_0)/Q^k and
/// λ = K² + 3K − Q(2N−w_1−w_0) − KQ(2N−w_1−w_0) + Q²(N−w_1)(N−w_0), Q = q^m.
pub fn srg_from_two_intersection(sys: &ProjectiveSystem, cap: u64) -> Result<SrgParams, HammingError> {
    if let Some((p, _)) = sys.entries.iter().find(|(_, &m)| m > 1) {
        return Err(HammingError::NotASet(p.clone()));
    }
    let (w0, w1) = intersection_numbers(sys, cap)?;
    let q = sys.ambient.big_q() as i128;
    let n = sys.length() as i128;
    let (w0, w1) = (w0 as i128, w1 as i128);
    let v = q.pow(sys.ambient.k() as u32);
    let k = n * (q - 1);
    let prod = q * q * (n - w1) * (n - w0);
    if prod % v != 0 {
        return Err(HammingError::Invariant("μ is not integral".into()));
    }
    let mu = prod / v;
    let spread = 2 * n - w1 - w0;
    let lambda = k * k + 3 * k - q * spread - k * q * spread + prod;
    if lambda < 0 {
        return Err(HammingError::Invariant(format!("λ = {lambda} is negative")));
    }
    let params = SrgParams { v: v as u128, k: k as u128, lambda: lambda as u128, mu: mu as u128 };
    if !params.feasible() {
        return Err(HammingError::Invariant(format!("{params:?} violates K(K−λ−1) = (v−K−1)μ")));
    }
    Ok(params)
}

/// Cayley graph Γ(P): vertices F_{q^m}^k (index = base-Q digits), u ~ w iff u − w is a
/// nonzero multiple of a point of P. Returns the neighbour bitsets.
fn cayley_graph(sys: &ProjectiveSystem) -> Result<Vec<Vec<u64>>, HammingError> {
    let a = &sys.ambient;
    let big_q = a.big_q();
    let v = (big_q as u128).pow(a.k() as u32);
    if v > GRAPH_LIMIT as u128 {
        return Err(HammingError::GraphTooLarge { v, limit: GRAPH_LIMIT });
    }
    let v = v as usize;
    let f = &**a.tower();
    let encode = |x: &[Code]| x.iter().rev().fold(0usize, |acc, &d| acc * big_q as usize + d as usize);
    let decode = |mut i: usize| -> Vec<Code> {
        (0..a.k())
            .map(|_| {
                let d = (i % big_q as usize) as Code;
                i /= big_q as usize;
                d
            })
            .collect()
    };
    let mut conn = Vec::new();
    for p in sys.entries.keys() {
        for c in 1..big_q {
            conn.push(p.iter().map(|&x| f.mul(c, x)).collect::<Vec<Code>>());
        }
    }
    let words = v.div_ceil(64);
    Ok(par::map_indices(v as u128, |u| {
        let uv = decode(u as usize);
        let mut bits = vec![0u64; words];
        for s in &conn {
            let w: Vec<Code> = uv.iter().zip(s).map(|(&x, &y)| f.add(x, y)).collect();
            let j = encode(&w);
            bits[j / 64] |= 1 << (j % 64);
        }
        bits
    }))
}

/// Builds Γ(P) and checks regularity, λ and μ over every vertex pair.
pub fn verify_srg_graph(sys: &ProjectiveSystem, params: &SrgParams) -> Result<(), HammingError> {
    let adj = cayley_graph(sys)?;
    let v = adj.len();
    if v as u128 != params.v {
        return Err(HammingError::Invariant(format!("graph has {v} vertices, expected {}", params.v)));
    }
    let degree = |b: &Vec<u64>| b.iter().map(|w| w.count_ones() as u128).sum::<u128>();
    if let Some(u) = adj.iter().position(|b| degree(b) != params.k) {
        return Err(HammingError::Invariant(format!("vertex {u} has degree ≠ {}", params.k)));
    }
    let bad = par::map_indices(v as u128, |u| {
        let u = u as usize;
        (0..v).filter(|&w| w != u).find(|&w| {
            let common: u128 = adj[u].iter().zip(&adj[w]).map(|(a, b)| (a & b).count_ones() as u128).sum();
            let adjacent = adj[u][w / 64] >> (w % 64) & 1 == 1;
            common != if adjacent { params.lambda } else { params.mu }
        })
    });
    if let Some((u, w)) = bad.iter().enumerate().find_map(|(u, w)| w.map(|w| (u, w))) {
        return Err(HammingError::Invariant(format!("vertices {u}, {w} violate the λ/μ count")));
    }
    Ok(())
}

/// Edge list (u < w) of Γ(P), for DOT export of tiny graphs.
pub fn cayley_edges(sys: &ProjectiveSystem) -> Result<(usize, Vec<(usize, usize)>), HammingError> {
    let adj = cayley_graph(sys)?;
    let edges = (0..adj.len())
        .flat_map(|u| {
            let row = &adj[u];
            (u + 1..adj.len()).filter(move |&w| row[w / 64] >> (w % 64) & 1 == 1).map(move |w| (u, w))
        })
        .collect();
    Ok((adj.len(), edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{construct_field_partition, construct_glued};
    use crate::gf::FieldTower;
    use crate::subspace::DEFAULT_ENUMERATION_CAP as CAP;

    fn f4_plane() -> AmbientSpace {
        AmbientSpace::new(&FieldTower::with_defaults(2, 1, 2).unwrap(), 2).unwrap()
    }

    #[test]
    fn ext_examples() {
        let a = f4_plane();
        let sub = SubspaceDesign::from_spanning_sets(&a, &[vec![vec![1, 0], vec![0, 1]]]).unwrap();
        let e = ext_system(&sub, CAP).unwrap();
        assert_eq!((e.entries().len(), e.length(), e.is_set()), (3, 3, true));
        let line = SubspaceDesign::from_spanning_sets(&a, &[vec![vec![1, 0], vec![2, 0]]]).unwrap();
        let e = ext_system(&line, CAP).unwrap();
        assert_eq!(e.entries(), &BTreeMap::from([(vec![1, 0], 3)]));
    }

    #[test]
    fn glued_code_and_graph_parameters() {
        let t = FieldTower::with_defaults(3, 1, 3).unwrap();
        let alpha = (1..27).find(|&x| t.norm(x) == 2).unwrap();
        let d = construct_glued(&t, 4, 1, &[1, alpha]).unwrap();
        let e = ext_system(&d, CAP).unwrap();
        assert_eq!(e.length(), 728);
        let en = weight_enumerator(&e, CAP).unwrap();
        assert_eq!(en, BTreeMap::from([(0, 1), (675, 18928), (702, 512512)]));
        assert_eq!(max1_enumerator(3, 3, 4, 2), Some(en));
        assert_eq!(intersection_numbers(&e, CAP).unwrap(), (26, 53));
        assert_eq!(max1_intersections(3, 3, 4, 2), (26, 53));
        let p = srg_from_two_intersection(&e, CAP).unwrap();
        assert_eq!(p, SrgParams { v: 531441, k: 18928, lambda: 1327, mu: 650 });
        assert!(matches!(verify_srg_graph(&e, &p), Err(HammingError::GraphTooLarge { .. })));
    }

    #[test]
    fn subgeometry_graph() {
        let a = f4_plane();
        let sub = SubspaceDesign::from_spanning_sets(&a, &[vec![vec![1, 0], vec![0, 1]]]).unwrap();
        let e = ext_system(&sub, CAP).unwrap();
        let p = srg_from_two_intersection(&e, CAP).unwrap();
        assert_eq!(p, SrgParams { v: 16, k: 9, lambda: 4, mu: 6 });
        verify_srg_graph(&e, &p).unwrap();
        let (v, edges) = cayley_edges(&e).unwrap();
        assert_eq!((v, edges.len()), (16, 72));
        let wrong = SrgParams { lambda: 3, ..p };
        assert!(verify_srg_graph(&e, &wrong).is_err());
    }

    #[test]
    fn one_weight_and_degenerate_cases() {
        let baer = construct_field_partition(&FieldTower::with_defaults(2, 1, 2).unwrap(), 3).unwrap();
        let e = ext_system(&baer, CAP).unwrap();
        let en = weight_enumerator(&e, CAP).unwrap();
        assert_eq!(en.len(), 2);
        assert!(matches!(srg_from_two_intersection(&e, CAP), Err(HammingError::NotTwoIntersection(_))));

        let t = FieldTower::with_defaults(2, 1, 2).unwrap();
        let line = AmbientSpace::new(&t, 1).unwrap();
        let single = ProjectiveSystem::new(&line, &[(vec![1], 1)]).unwrap();
        assert_eq!(weight_enumerator(&single, CAP).unwrap(), BTreeMap::from([(0, 1), (1, 3)]));
    }
}
