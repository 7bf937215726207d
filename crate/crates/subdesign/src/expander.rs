//! Dimension expanders from subspace designs: D = {Σ_i f_i x^{q^i} : f_i ∈ U_{i+1}} with
//! the m evaluation maps Γ_j: f ↦ f(β_j), checked exhaustively or by sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::design::SubspaceDesign;
use crate::gf::{Code, FieldOps, FieldTower};
use crate::linalg::{self, RrefEnumerator};
use crate::par;
use crate::subspace::SubspaceError;

/// Random pairs used to spot-check linearity of each Γ_j.
pub const LINEARITY_SAMPLES: usize = 500;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpanderError {
    #[error("member {member} has dimension {dim}, expected ℓ/t = {expected}")]
    BadDims { member: usize, dim: usize, expected: usize },
    #[error("t = {t} members exceed m = {m}")]
    TooManyMembers { t: usize, m: usize },
    #[error("β is not an F_q-basis of F_{{q^m}}")]
    NotABasis,
    #[error("dimension {dim} is outside 1..={ell}")]
    InvalidDim { dim: usize, ell: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

/// The family: ℓ = mk, row r of `maps[j]` is Γ_j applied to the r-th basis vector of D,
/// written in F_q-coordinates of F_{q^m}^k.
#[derive(Clone, Debug)]
pub struct ExpanderFamily {
    design: SubspaceDesign,
    beta: Vec<Code>,
    /// (Frobenius power i, packed vector b) for each basis vector b·x^{q^i} of D.
    domain: Vec<(usize, Vec<Code>)>,
    maps: Vec<Vec<Vec<Code>>>,
}

/// Power basis 1, y, …, y^{m−1}.
pub fn default_beta(tower: &FieldTower) -> Vec<Code> {
    (0..tower.m()).map(|l| tower.q().pow(l as u32)).collect()
}

pub fn build_expander(design: &SubspaceDesign, beta: &[Code]) -> Result<ExpanderFamily, ExpanderError> {
    let amb = design.ambient();
    let tower = design.tower();
    let (m, ell, t) = (amb.m(), amb.fq_dim(), design.t());
    if t > m {
        return Err(ExpanderError::TooManyMembers { t, m });
    }
    let expected = ell / t;
    for (member, u) in design.members().iter().enumerate() {
        if ell % t != 0 || u.dim() != expected {
            return Err(ExpanderError::BadDims { member, dim: u.dim(), expected });
        }
    }
    let coords: Vec<Vec<Code>> = beta.iter().map(|&b| tower.coords(b)).collect();
    if beta.len() != m || beta.iter().any(|&b| b >= tower.order()) || linalg::rank(tower.base(), &coords) != m {
        return Err(ExpanderError::NotABasis);
    }
    let domain: Vec<(usize, Vec<Code>)> = design
        .members()
        .iter()
        .enumerate()
        .flat_map(|(i, u)| u.basis_vectors().into_iter().map(move |b| (i, b)))
        .collect();
    if domain.len() != ell {
        return Err(ExpanderError::Invariant(format!("dim D = {} ≠ ℓ = {ell}", domain.len())));
    }
    let maps = beta
        .iter()
        .map(|&bj| {
            domain
                .iter()
                .map(|(i, b)| {
                    let c = tower.frobenius(bj, *i as i64);
                    amb.expand(&b.iter().map(|&x| tower.mul(c, x)).collect::<Vec<_>>())
                })
                .collect()
        })
        .collect();
    let family = ExpanderFamily { design: design.clone(), beta: beta.to_vec(), domain, maps };
    family.check_linearity(LINEARITY_SAMPLES, 0)?;
    Ok(family)
}

impl ExpanderFamily {
    pub fn design(&self) -> &SubspaceDesign {
        &self.design
    }
    pub fn beta(&self) -> &[Code] {
        &self.beta
    }
    pub fn ell(&self) -> usize {
        self.domain.len()
    }
    pub fn maps(&self) -> &[Vec<Vec<Code>>] {
        &self.maps
    }

    /// f(β_j) computed in F_{q^m} from the coefficients f_i = Σ c_r b_r, returned packed.
    pub fn evaluate(&self, c: &[Code], j: usize) -> Vec<Code> {
        let tower = self.design.tower();
        let k = self.design.ambient().k();
        let t = self.design.t();
        let mut coeffs = vec![vec![0; k]; t];
        for (&cr, (i, b)) in c.iter().zip(&self.domain) {
            for (acc, &x) in coeffs[*i].iter_mut().zip(b) {
                *acc = tower.add(*acc, tower.mul(cr, x));
            }
        }
        let mut out = vec![0; k];
        for (i, f_i) in coeffs.iter().enumerate() {
            let power = tower.frobenius(self.beta[j], i as i64);
            for (o, &x) in out.iter_mut().zip(f_i) {
                *o = tower.add(*o, tower.mul(power, x));
            }
        }
        out
    }

    /// Γ_j(u + v) = Γ_j(u) + Γ_j(v) by direct evaluation, and agreement with the matrix of Γ_j.
    pub fn check_linearity(&self, samples: usize, seed: u64) -> Result<(), ExpanderError> {
        let tower = self.design.tower();
        let base = tower.base();
        let amb = self.design.ambient();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = tower.q();
        for _ in 0..samples {
            let u: Vec<Code> = (0..self.ell()).map(|_| rng.random_range(0..q)).collect();
            let v: Vec<Code> = (0..self.ell()).map(|_| rng.random_range(0..q)).collect();
            let sum: Vec<Code> = u.iter().zip(&v).map(|(&a, &b)| base.add(a, b)).collect();
            for j in 0..self.maps.len() {
                let (gu, gv, gs) = (self.evaluate(&u, j), self.evaluate(&v, j), self.evaluate(&sum, j));
                let added: Vec<Code> = gu.iter().zip(&gv).map(|(&a, &b)| tower.add(a, b)).collect();
                if added != gs || amb.expand(&gs) != linalg::vec_mat(base, &sum, &self.maps[j]) {
                    return Err(ExpanderError::Invariant(format!("Γ_{j} is not F_q-linear")));
                }
            }
        }
        Ok(())
    }

    /// dim_{F_q} Σ_j Γ_j(U) for U given by F_q-rows in D-coordinates.
    pub fn image_dim(&self, u: &[Vec<Code>]) -> usize {
        let base = self.design.tower().base();
        let stacked: Vec<Vec<Code>> = self.maps.iter().flat_map(|g| u.iter().map(move |r| linalg::vec_mat(base, r, g))).collect();
        linalg::rank(base, &stacked)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive { cap: u64 },
    Sample { samples: u64, seed: u64 },
}

/// Smallest dim(Σ Γ_j(U)) over the tested U of one dimension, with a minimizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimReport {
    pub dim: usize,
    pub tested: u128,
    pub exhaustive: bool,
    pub min_image_dim: usize,
    pub witness: Vec<Vec<Code>>,
}

impl DimReport {
    pub fn min_ratio(&self) -> f64 {
        self.min_image_dim as f64 / self.dim as f64
    }
}

/// Target ζ = num/den: every tested U must satisfy dim Σ Γ_j(U) ≥ ζ·dim U.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionTarget {
    pub zeta_num: usize,
    pub zeta_den: usize,
}

impl ExpansionTarget {
    /// ζ = (m − t + 1)/A for a family built from an (s, A) design.
    pub fn from_design(m: usize, t: usize, a: usize) -> ExpansionTarget {
        ExpansionTarget { zeta_num: m + 1 - t, zeta_den: a }
    }
    pub fn met_by(&self, r: &DimReport) -> bool {
        r.min_image_dim * self.zeta_den >= self.zeta_num * r.dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionReport {
    pub dims: Vec<DimReport>,
    pub target: Option<ExpansionTarget>,
    pub verdict: Option<bool>,
}

pub fn expansion_check(
    family: &ExpanderFamily,
    max_dim: usize,
    mode: CheckMode,
    target: Option<ExpansionTarget>,
) -> Result<ExpansionReport, ExpanderError> {
    let ell = family.ell();
    let q = family.design.ambient().q();
    if max_dim == 0 || max_dim > ell {
        return Err(ExpanderError::InvalidDim { dim: max_dim, ell });
    }
    let mut dims = Vec::with_capacity(max_dim);
    for r in 1..=max_dim {
        let en = RrefEnumerator::new(q, ell, r).ok_or(SubspaceError::EnumerationCapExceeded { count: u128::MAX, cap: 0 })?;
        let report = match mode {
            CheckMode::Exhaustive { cap } => {
                if en.len() > cap as u128 {
                    return Err(SubspaceError::EnumerationCapExceeded { count: en.len(), cap }.into());
                }
                let images = par::map_indices(en.len(), |i| family.image_dim(&en.nth(i)));
                let (idx, &min) = images.iter().enumerate().min_by_key(|&(_, v)| *v).expect("nonempty");
                DimReport { dim: r, tested: en.len(), exhaustive: true, min_image_dim: min, witness: en.nth(idx as u128) }
            }
            CheckMode::Sample { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
                let picks: Vec<u128> = (0..samples.max(1)).map(|_| rng.random_range(0..en.len())).collect();
                let images = par::map_indices(picks.len() as u128, |i| family.image_dim(&en.nth(picks[i as usize])));
                let (idx, &min) = images.iter().enumerate().min_by_key(|&(_, v)| *v).expect("nonempty");
                DimReport { dim: r, tested: picks.len() as u128, exhaustive: false, min_image_dim: min, witness: en.nth(picks[idx]) }
            }
        };
        dims.push(report);
    }
    let verdict = target.map(|t| dims.iter().all(|d| t.met_by(d)));
    Ok(ExpansionReport { dims, target, verdict })
}
