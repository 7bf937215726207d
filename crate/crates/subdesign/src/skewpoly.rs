//! σ-polynomials F(x) = f_0 x + f_1 x^σ + … + f_d x^{σ^d} over F_{q^m}, with
//! σ = x ↦ x^{q^s}, multiplied by composition.

use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Code, FieldOps, FieldTower, GfError};
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkewError {
    #[error("σ-polynomials use different towers or Frobenius exponents")]
    ParameterMismatch,
    #[error("right division by the zero σ-polynomial")]
    DivisionByZeroPoly,
    #[error("gcrd/lclm of two zero σ-polynomials")]
    BothZero,
    #[error("operation needs a nonzero σ-polynomial")]
    ZeroPoly,
    #[error("twisting element must be nonzero")]
    ZeroTwist,
    #[error("{0} is not a nonzero element of the base field")]
    NotInBaseField(Code),
    #[error("Frobenius exponent {s} is not coprime to m = {m}")]
    BadExponent { s: usize, m: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Gf(#[from] GfError),
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An element of L_{m,σ}; `coeffs[i]` multiplies x^{σ^i} and the last entry is nonzero.
#[derive(Clone, Debug)]
pub struct SigmaPoly {
    tower: Arc<FieldTower>,
    s: usize,
    coeffs: Vec<Code>,
}

impl PartialEq for SigmaPoly {
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s && *self.tower == *other.tower && self.coeffs == other.coeffs
    }
}

impl Eq for SigmaPoly {}

impl SigmaPoly {
    /// Trailing zero coefficients are dropped; `s` is reduced modulo m.
    pub fn new(tower: &Arc<FieldTower>, s: usize, coeffs: Vec<Code>) -> Result<SigmaPoly, SkewError> {
        let m = tower.m();
        let s = s % m;
        if gcd(s, m) != 1 {
            return Err(SkewError::BadExponent { s, m });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= tower.order()) {
            return Err(GfError::OutOfRange(bad as u64).into());
        }
        let mut p = SigmaPoly { tower: tower.clone(), s, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn zero(tower: &Arc<FieldTower>, s: usize) -> Result<SigmaPoly, SkewError> {
        SigmaPoly::new(tower, s, Vec::new())
    }

    /// The identity map x.
    pub fn x(tower: &Arc<FieldTower>, s: usize) -> Result<SigmaPoly, SkewError> {
        SigmaPoly::new(tower, s, vec![1])
    }

    /// a · x^{σ^i}.
    pub fn monomial(tower: &Arc<FieldTower>, s: usize, a: Code, i: usize) -> Result<SigmaPoly, SkewError> {
        let mut c = vec![0; i + 1];
        c[i] = a;
        SigmaPoly::new(tower, s, c)
    }

    fn like(&self, coeffs: Vec<Code>) -> SigmaPoly {
        let mut p = SigmaPoly { tower: self.tower.clone(), s: self.s, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn coeffs(&self) -> &[Code] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// σ-degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn leading(&self) -> Option<Code> {
        self.coeffs.last().copied()
    }

    /// σ^i(a).
    fn sigma(&self, a: Code, i: usize) -> Code {
        self.tower.frobenius(a, (self.s * i) as i64)
    }

    fn check_same(&self, other: &SigmaPoly) -> Result<(), SkewError> {
        if self.s != other.s || *self.tower != *other.tower {
            return Err(SkewError::ParameterMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &SigmaPoly) -> Result<SigmaPoly, SkewError> {
        self.check_same(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let f = &*self.tower;
        let c = (0..n)
            .map(|i| {
                f.add(self.coeffs.get(i).copied().unwrap_or(0), other.coeffs.get(i).copied().unwrap_or(0))
            })
            .collect();
        Ok(self.like(c))
    }

    pub fn neg(&self) -> SigmaPoly {
        self.like(self.coeffs.iter().map(|&c| self.tower.neg(c)).collect())
    }

    pub fn sub(&self, other: &SigmaPoly) -> Result<SigmaPoly, SkewError> {
        self.add(&other.neg())
    }

    /// (a x) ∘ F.
    pub fn scale_left(&self, a: Code) -> SigmaPoly {
        self.like(self.coeffs.iter().map(|&c| self.tower.mul(a, c)).collect())
    }

    /// Monic associate a^{-1}·F; zero stays zero.
    pub fn monic(&self) -> SigmaPoly {
        match self.leading() {
            Some(l) => self.scale_left(self.tower.inv(l)),
            None => self.clone(),
        }
    }

    /// The map a ↦ F(a).
    pub fn eval(&self, a: Code) -> Code {
        let f = &*self.tower;
        self.coeffs
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &c)| f.add(acc, f.mul(c, self.sigma(a, i))))
    }

    /// Matrix of the F_q-linear map on the expansion basis 1, y, …, y^{m−1}
    /// (row j holds the coordinates of F(y^j)).
    pub fn fq_matrix(&self) -> Vec<Vec<Code>> {
        let f = &*self.tower;
        let y = if f.m() == 1 { 1 } else { f.q() };
        (0..f.m()).map(|j| f.coords(self.eval(f.pow(y, j as u64)))).collect()
    }

    /// σ-polynomial with coefficients f_i N_σ^i(α), where N_σ^i(α) = ∏_{j<i} σ^j(α).
    pub fn twist(&self, alpha: Code) -> Result<SigmaPoly, SkewError> {
        if alpha == 0 {
            return Err(SkewError::ZeroTwist);
        }
        if alpha >= self.tower.order() {
            return Err(GfError::OutOfRange(alpha as u64).into());
        }
        let f = &*self.tower;
        let mut norm = 1;
        let mut c = Vec::with_capacity(self.coeffs.len());
        for (i, &fi) in self.coeffs.iter().enumerate() {
            c.push(f.mul(fi, norm));
            norm = f.mul(norm, self.sigma(alpha, i));
        }
        Ok(self.like(c))
    }
}

/// Composition F ∘ G using a x^{σ^i} ∘ b x^{σ^j} = a σ^i(b) x^{σ^{i+j}}.
pub fn skew_mul(f: &SigmaPoly, g: &SigmaPoly) -> Result<SigmaPoly, SkewError> {
    f.check_same(g)?;
    if f.is_zero() || g.is_zero() {
        return Ok(f.like(Vec::new()));
    }
    let t = &*f.tower;
    let mut c = vec![0; f.coeffs.len() + g.coeffs.len() - 1];
    for (i, &a) in f.coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.coeffs.iter().enumerate() {
            c[i + j] = t.add(c[i + j], t.mul(a, f.sigma(b, i)));
        }
    }
    Ok(f.like(c))
}

/// Q, R with F = Q ∘ G + R and deg R < deg G, re-verified by recomposition.
pub fn right_divmod(f: &SigmaPoly, g: &SigmaPoly) -> Result<(SigmaPoly, SigmaPoly), SkewError> {
    f.check_same(g)?;
    let dg = g.degree().ok_or(SkewError::DivisionByZeroPoly)?;
    let t = &*f.tower;
    let lead = g.leading().unwrap();
    let mut quot = vec![0; f.coeffs.len().saturating_sub(dg)];
    let mut rem = f.clone();
    while let Some(dr) = rem.degree().filter(|&d| d >= dg) {
        let shift = dr - dg;
        let c = t.mul(rem.leading().unwrap(), t.inv(f.sigma(lead, shift)));
        quot[shift] = c;
        let term = skew_mul(&SigmaPoly::monomial(&f.tower, f.s, c, shift)?, g)?;
        rem = rem.sub(&term)?;
        debug_assert!(rem.degree().is_none_or(|d| d < dr));
    }
    let quot = f.like(quot);
    if skew_mul(&quot, g)?.add(&rem)? != *f {
        return Err(SkewError::Invariant("right division does not recompose".into()));
    }
    Ok((quot, rem))
}

/// Monic gcrd and lclm by the extended right Euclidean algorithm.
/// When one input is zero the lclm is zero.
pub fn gcrd_lclm(f: &SigmaPoly, g: &SigmaPoly) -> Result<(SigmaPoly, SigmaPoly), SkewError> {
    f.check_same(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(SkewError::BothZero);
    }
    if f.is_zero() || g.is_zero() {
        let nz = if f.is_zero() { g } else { f };
        return Ok((nz.monic(), f.like(Vec::new())));
    }
    // Invariant: s_i ∘ F + t_i ∘ G = r_i; only the s-sequence is needed for the lclm.
    let (mut r0, mut r1) = (f.clone(), g.clone());
    let (mut s0, mut s1) = (SigmaPoly::x(&f.tower, f.s)?, f.like(Vec::new()));
    while !r1.is_zero() {
        let (quo, rem) = right_divmod(&r0, &r1)?;
        let s2 = s0.sub(&skew_mul(&quo, &s1)?)?;
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let gcrd = r0.monic();
    let lclm = skew_mul(&s1, f)?.monic();
    let (df, dg) = (f.degree().unwrap(), g.degree().unwrap());
    if gcrd.degree().unwrap() + lclm.degree().unwrap_or(0) != df + dg {
        return Err(SkewError::Invariant("deg gcrd + deg lclm ≠ deg F + deg G".into()));
    }
    for (a, b) in [(f, &gcrd), (g, &gcrd), (&lclm, f), (&lclm, g)] {
        if !right_divmod(a, b)?.1.is_zero() {
            return Err(SkewError::Invariant("gcrd/lclm divisibility fails".into()));
        }
    }
    Ok((gcrd, lclm))
}

/// dim_{F_q} ker F on F_{q^m}; checked against the bound dim ker F ≤ deg_σ F.
pub fn kernel_dim(f: &SigmaPoly) -> Result<usize, SkewError> {
    let d = f.degree().ok_or(SkewError::ZeroPoly)?;
    let mat = f.fq_matrix();
    let dim = f.tower.m() - linalg::rank(f.tower.base(), &mat);
    if dim > d {
        return Err(SkewError::Invariant(format!("kernel dimension {dim} exceeds σ-degree {d}")));
    }
    Ok(dim)
}

/// F_q-basis of ker F, as elements of F_{q^m}.
pub fn kernel_basis(f: &SigmaPoly) -> Vec<Code> {
    // Row j of the matrix is F(y^j); the kernel is the left kernel.
    let mat = f.fq_matrix();
    let m = f.tower.m();
    let transpose: Vec<Vec<Code>> = (0..m).map(|c| mat.iter().map(|r| r[c]).collect()).collect();
    linalg::kernel(f.tower.base(), &transpose, m)
        .iter()
        .map(|v| f.tower.from_coords(v))
        .collect()
}

/// Smallest-code α with N_{q^m/q}(α) = λ.
pub fn element_of_norm(tower: &FieldTower, lambda: Code) -> Result<Code, SkewError> {
    if lambda == 0 || !tower.in_base(lambda) {
        return Err(SkewError::NotInBaseField(lambda));
    }
    (1..tower.order())
        .find(|&a| tower.norm(a) == lambda)
        .ok_or_else(|| SkewError::Invariant(format!("norm map misses {lambda}")))
}

/// d_λ(F) = deg_σ gcrd(F, x^{σ^m} − λx), cross-checked against dim ker F_α with N(α) = λ.
pub fn lambda_value(f: &SigmaPoly, lambda: Code) -> Result<usize, SkewError> {
    if f.is_zero() {
        return Err(SkewError::ZeroPoly);
    }
    let t = &*f.tower;
    let alpha = element_of_norm(t, lambda)?;
    let m = t.m();
    let mut c = vec![0; m + 1];
    c[0] = t.neg(lambda);
    c[m] = 1;
    let modulus = f.like(c);
    let (g, _) = gcrd_lclm(f, &modulus)?;
    let d = g.degree().unwrap();
    let kd = kernel_dim(&f.twist(alpha)?)?;
    if kd != d {
        return Err(SkewError::Invariant(format!("d_λ = {d} but twisted kernel has dimension {kd}")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f9() -> Arc<FieldTower> {
        FieldTower::with_defaults(3, 1, 2).unwrap()
    }

    fn poly(t: &Arc<FieldTower>, c: &[Code]) -> SigmaPoly {
        SigmaPoly::new(t, 1, c.to_vec()).unwrap()
    }

    /// Packs a·1 + b·i for F_9 = F_3[i]/(i² + 1).
    fn el(a: Code, b: Code) -> Code {
        a + 3 * b
    }

    #[test]
    fn composition_examples() {
        let t = f9();
        let (one, m1) = (1, t.neg(1));
        let plus = poly(&t, &[one, 1]);
        let minus = poly(&t, &[m1, 1]);
        assert_eq!(skew_mul(&plus, &minus).unwrap(), poly(&t, &[m1, 0, 1]));
        let x = SigmaPoly::x(&t, 1).unwrap();
        assert_eq!(skew_mul(&plus, &x).unwrap(), plus);
        assert_eq!(skew_mul(&x, &plus).unwrap(), plus);
        let (a, b) = (el(1, 1), el(2, 1));
        assert_eq!(skew_mul(&poly(&t, &[a]), &poly(&t, &[b])).unwrap(), poly(&t, &[t.mul(a, b)]));
    }

    #[test]
    fn division_examples() {
        let t = f9();
        let m1 = t.neg(1);
        let f = poly(&t, &[m1, 0, 1]);
        let g = poly(&t, &[m1, 1]);
        let (q, r) = right_divmod(&f, &g).unwrap();
        assert_eq!(q, poly(&t, &[1, 1]));
        assert!(r.is_zero());
        let (q, r) = right_divmod(&g, &g).unwrap();
        assert_eq!(q, SigmaPoly::x(&t, 1).unwrap());
        assert!(r.is_zero());
        let (q, r) = right_divmod(&g, &f).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, g);
        assert_eq!(right_divmod(&f, &SigmaPoly::zero(&t, 1).unwrap()), Err(SkewError::DivisionByZeroPoly));
    }

    #[test]
    fn gcrd_examples() {
        let t = f9();
        let m1 = t.neg(1);
        let f = poly(&t, &[m1, 0, 1]);
        let g = poly(&t, &[m1, 1]);
        let (d, l) = gcrd_lclm(&f, &g).unwrap();
        assert_eq!(d, g);
        assert_eq!(l, f);
        let x = SigmaPoly::x(&t, 1).unwrap();
        assert_eq!(gcrd_lclm(&f, &x).unwrap().0, x);
        let h = poly(&t, &[el(0, 1), 2, el(1, 2)]);
        assert_eq!(gcrd_lclm(&h, &h).unwrap().0, h.monic());
        let z = SigmaPoly::zero(&t, 1).unwrap();
        assert_eq!(gcrd_lclm(&z, &z), Err(SkewError::BothZero));
    }

    #[test]
    fn kernel_examples() {
        let t = f9();
        assert_eq!(kernel_dim(&poly(&t, &[t.neg(1), 1])).unwrap(), 1);
        assert_eq!(kernel_dim(&poly(&t, &[1, 1])).unwrap(), 1);
        let g = (1..9).find(|&g| t.norm(g) == 2).unwrap();
        assert_eq!(kernel_dim(&poly(&t, &[t.neg(g), 1])).unwrap(), 0);
        let f27 = FieldTower::with_defaults(3, 1, 3).unwrap();
        let fix = poly(&f27, &[f27.neg(1), 1]);
        assert_eq!(kernel_basis(&fix), vec![1]);
    }

    #[test]
    fn twist_examples() {
        let t = f9();
        let a = el(1, 1);
        assert_eq!(poly(&t, &[0, 1]).twist(a).unwrap(), poly(&t, &[0, a]));
        let f = poly(&t, &[t.neg(1), 1]);
        assert_eq!(f.twist(1).unwrap(), f);
        assert_eq!(f.twist(a).unwrap(), poly(&t, &[t.neg(1), a]));
        assert_eq!(f.twist(0), Err(SkewError::ZeroTwist));
    }

    #[test]
    fn lambda_examples() {
        let t = f9();
        let f = poly(&t, &[t.neg(1), 1]);
        assert_eq!(lambda_value(&f, 1).unwrap(), 1);
        assert_eq!(lambda_value(&f, 2).unwrap(), 0);
        assert_eq!(lambda_value(&f, el(0, 1)), Err(SkewError::NotInBaseField(3)));
        for lam in [1, 2] {
            let g = poly(&t, &[t.neg(lam), 0, 1]);
            assert_eq!(lambda_value(&g, lam).unwrap(), 2);
        }
    }

    #[test]
    fn other_frobenius_exponent() {
        let t = FieldTower::with_defaults(2, 1, 3).unwrap();
        let f = SigmaPoly::new(&t, 2, vec![1, 1]).unwrap();
        assert_eq!(kernel_dim(&f).unwrap(), 1);
        assert_eq!(SigmaPoly::new(&t, 3, vec![1]), Err(SkewError::BadExponent { s: 0, m: 3 }));
    }

    fn arb_poly(t: Arc<FieldTower>, max_deg: usize) -> impl Strategy<Value = SigmaPoly> {
        let order = t.order();
        prop::collection::vec(0..order, 0..=max_deg + 1).prop_map(move |c| SigmaPoly::new(&t, 1, c).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(11), ..ProptestConfig::default() })]

        #[test]
        fn divmod_recomposes(f in arb_poly(f9(), 5), g in arb_poly(f9(), 3)) {
            prop_assume!(!g.is_zero());
            let (q, r) = right_divmod(&f, &g).unwrap();
            prop_assert!(r.degree().is_none_or(|d| d < g.degree().unwrap()));
            prop_assert_eq!(skew_mul(&q, &g).unwrap().add(&r).unwrap(), f);
        }

        #[test]
        fn composition_is_the_map_composition(f in arb_poly(f9(), 3), g in arb_poly(f9(), 3), a in 0u32..9) {
            let fg = skew_mul(&f, &g).unwrap();
            prop_assert_eq!(fg.eval(a), f.eval(g.eval(a)));
        }

        #[test]
        fn left_distributive(f in arb_poly(f9(), 3), g in arb_poly(f9(), 3), h in arb_poly(f9(), 3)) {
            let lhs = skew_mul(&f, &g.add(&h).unwrap()).unwrap();
            let rhs = skew_mul(&f, &g).unwrap().add(&skew_mul(&f, &h).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gcrd_lclm_degrees(f in arb_poly(f9(), 4), g in arb_poly(f9(), 4)) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let (d, l) = gcrd_lclm(&f, &g).unwrap();
            prop_assert_eq!(d.degree().unwrap() + l.degree().unwrap(), f.degree().unwrap() + g.degree().unwrap());
            prop_assert_eq!(d.leading(), Some(1));
        }
    }
}
