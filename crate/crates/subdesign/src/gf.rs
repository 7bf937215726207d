//! Exact arithmetic in the tower F_p ⊂ F_q = F_p[x]/(f) ⊂ F_{q^m} = F_q[y]/(g).
//!
//! Elements are packed into a single integer whose base-p digits are the nested
//! polynomial-basis coefficients: the F_q coordinate `j` of a packed element is
//! `(code / q^j) mod q`, and inside it digit `l` is the coefficient of `x^l`.
//! F_q sits inside F_{q^m} as the codes below `q`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

/// Packed element of a finite field (see module docs).
pub type Code = u32;

const MAX_BASE_ORDER: u64 = 1 << 10;
const MAX_TOP_ORDER: u64 = 1 << 31;
const LOG_TABLE_LIMIT: u64 = 1 << 22;
const ADD_TABLE_LIMIT: u64 = 1 << 10;
const TRIAL_DIVISION_LIMIT: u64 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0:?} is not irreducible")]
    NotIrreducible(Vec<u32>),
    #[error("modulus must be monic of degree {expected} with reduced coefficients")]
    BadModulus { expected: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different towers")]
    TowerMismatch,
    #[error("field of order {0} is outside the supported desk-scale range")]
    TooLarge(u64),
    #[error("element code {0} out of range")]
    OutOfRange(u64),
    #[error("digit array does not match a tower with h = {h}, m = {m}")]
    BadDigits { h: usize, m: usize },
    #[error("cannot parse element `{0}`")]
    Parse(String),
}

/// Arithmetic shared by the base field and the top field of a tower.
pub trait FieldOps: Sync {
    fn order(&self) -> u32;
    fn add(&self, a: Code, b: Code) -> Code;
    fn neg(&self, a: Code) -> Code;
    fn mul(&self, a: Code, b: Code) -> Code;
    /// Multiplicative inverse; the caller guarantees `a != 0`.
    fn inv(&self, a: Code) -> Code;

    fn sub(&self, a: Code, b: Code) -> Code {
        self.add(a, self.neg(b))
    }

    fn pow(&self, a: Code, mut e: u64) -> Code {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// F_q = F_p[x]/(f) with full operation tables.
#[derive(Clone)]
pub struct BaseField {
    p: u32,
    h: usize,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<Code>,
    mul: Vec<Code>,
    neg: Vec<Code>,
    inv: Vec<Code>,
}

impl BaseField {
    fn build(p: u32, h: usize, modulus: &[u32]) -> BaseField {
        let q = p.pow(h as u32);
        let qs = q as usize;
        let digits = |mut c: u32| {
            let mut d = vec![0u32; h];
            for slot in d.iter_mut() {
                *slot = c % p;
                c /= p;
            }
            d
        };
        let pack = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &x| acc * p + x);
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        let mut neg = vec![0; qs];
        for a in 0..q {
            let da = digits(a);
            neg[a as usize] = pack(&da.iter().map(|&x| (p - x) % p).collect::<Vec<_>>());
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = pack(&s);
                let mut prod = vec![0u64; 2 * h];
                for i in 0..h {
                    for j in 0..h {
                        prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p as u64;
                    }
                }
                for d in (h..2 * h).rev() {
                    let c = prod[d];
                    if c != 0 {
                        for (i, &fi) in modulus.iter().enumerate() {
                            let idx = d - h + i;
                            prod[idx] = (prod[idx] + (p as u64 - c) * fi as u64) % p as u64;
                        }
                    }
                }
                let r: Vec<u32> = prod[..h].iter().map(|&x| x as u32).collect();
                mul[a as usize * qs + b as usize] = pack(&r);
            }
        }
        let mut inv = vec![0; qs];
        for a in 1..q {
            for b in 1..q {
                if mul[a as usize * qs + b as usize] == 1 {
                    inv[a as usize] = b;
                    break;
                }
            }
        }
        BaseField { p, h, q, modulus: modulus.to_vec(), add, mul, neg, inv }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn digits(&self, c: Code) -> Vec<u32> {
        let mut c = c;
        (0..self.h)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    fn is_field(&self) -> bool {
        (1..self.q).all(|a| self.inv[a as usize] != 0)
    }
}

impl FieldOps for BaseField {
    fn order(&self) -> u32 {
        self.q
    }
    #[inline]
    fn add(&self, a: Code, b: Code) -> Code {
        self.add[(a * self.q + b) as usize]
    }
    #[inline]
    fn neg(&self, a: Code) -> Code {
        self.neg[a as usize]
    }
    #[inline]
    fn mul(&self, a: Code, b: Code) -> Code {
        self.mul[(a * self.q + b) as usize]
    }
    #[inline]
    fn inv(&self, a: Code) -> Code {
        self.inv[a as usize]
    }
}

struct LogTables {
    exp: Vec<Code>,
    log: Vec<u32>,
}

/// The tower F_p ⊂ F_q ⊂ F_{q^m}; also implements [`FieldOps`] for F_{q^m}.
pub struct FieldTower {
    base: BaseField,
    m: usize,
    order: u32,
    fqm_modulus: Vec<Code>,
    qpow: Vec<u32>,
    logs: OnceLock<Option<LogTables>>,
    add_table: OnceLock<Option<Vec<u16>>>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.base.p)
            .field("h", &self.base.h)
            .field("m", &self.m)
            .field("fq_modulus", &self.base.modulus)
            .field("fqm_modulus", &self.fqm_modulus)
            .finish()
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.base.p == other.base.p
            && self.base.modulus == other.base.modulus
            && self.fqm_modulus == other.fqm_modulus
    }
}

impl Eq for FieldTower {}

/// Smallest-code monic irreducible moduli, `(p, h, m, fq_modulus, fqm_modulus)`.
/// `fqm_modulus` coefficients are F_q codes.
type ModulusEntry = (u32, usize, usize, &'static [u32], &'static [u32]);

#[rustfmt::skip]
const DEFAULT_MODULI: &[ModulusEntry] = &[
    (2, 1, 1, &[0, 1], &[0, 1]),
    (2, 1, 2, &[0, 1], &[1, 1, 1]),
    (2, 1, 3, &[0, 1], &[1, 1, 0, 1]),
    (2, 1, 4, &[0, 1], &[1, 1, 0, 0, 1]),
    (2, 1, 5, &[0, 1], &[1, 0, 1, 0, 0, 1]),
    (2, 1, 6, &[0, 1], &[1, 1, 0, 0, 0, 0, 1]),
    (2, 2, 1, &[1, 1, 1], &[0, 1]),
    (2, 2, 2, &[1, 1, 1], &[2, 1, 1]),
    (2, 2, 3, &[1, 1, 1], &[2, 0, 0, 1]),
    (2, 2, 4, &[1, 1, 1], &[1, 2, 1, 0, 1]),
    (2, 2, 5, &[1, 1, 1], &[2, 1, 0, 0, 0, 1]),
    (2, 2, 6, &[1, 1, 1], &[2, 1, 1, 0, 0, 0, 1]),
    (3, 1, 1, &[0, 1], &[0, 1]),
    (3, 1, 2, &[0, 1], &[1, 0, 1]),
    (3, 1, 3, &[0, 1], &[1, 2, 0, 1]),
    (3, 1, 4, &[0, 1], &[2, 1, 0, 0, 1]),
    (3, 1, 5, &[0, 1], &[1, 2, 0, 0, 0, 1]),
    (3, 1, 6, &[0, 1], &[2, 1, 0, 0, 0, 0, 1]),
    (3, 2, 1, &[1, 0, 1], &[0, 1]),
    (3, 2, 2, &[1, 0, 1], &[4, 0, 1]),
    (3, 2, 3, &[1, 0, 1], &[3, 1, 0, 1]),
    (3, 2, 4, &[1, 0, 1], &[4, 0, 0, 0, 1]),
    (3, 2, 5, &[1, 0, 1], &[4, 1, 0, 0, 0, 1]),
    (3, 2, 6, &[1, 0, 1], &[4, 0, 1, 0, 0, 0, 1]),
    (5, 1, 1, &[0, 1], &[0, 1]),
    (5, 1, 2, &[0, 1], &[2, 0, 1]),
    (5, 1, 3, &[0, 1], &[1, 1, 0, 1]),
    (5, 1, 4, &[0, 1], &[2, 0, 0, 0, 1]),
    (5, 1, 5, &[0, 1], &[1, 4, 0, 0, 0, 1]),
    (5, 1, 6, &[0, 1], &[2, 1, 0, 0, 0, 0, 1]),
    (5, 2, 1, &[2, 0, 1], &[0, 1]),
    (5, 2, 2, &[2, 0, 1], &[5, 0, 1]),
    (5, 2, 3, &[2, 0, 1], &[6, 0, 0, 1]),
    (5, 2, 4, &[2, 0, 1], &[5, 0, 0, 0, 1]),
    (5, 2, 5, &[2, 0, 1], &[5, 1, 0, 0, 0, 1]),
    (5, 2, 6, &[2, 0, 1], &[6, 0, 0, 0, 0, 0, 1]),
];

/// Polynomial helpers over a [`FieldOps`] field, coefficients little-endian.
pub mod poly {
    use super::{Code, FieldOps};

    pub fn trim(a: &mut Vec<Code>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    /// Remainder of `a` modulo the nonzero polynomial `b`.
    pub fn rem<F: FieldOps + ?Sized>(f: &F, a: &[Code], b: &[Code]) -> Vec<Code> {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut b = b.to_vec();
        trim(&mut b);
        let lead_inv = f.inv(*b.last().expect("nonzero divisor"));
        while r.len() >= b.len() {
            let c = f.mul(*r.last().unwrap(), lead_inv);
            let shift = r.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    /// Horner evaluation of `a` at `x`; coefficients must be codes of the same field.
    pub fn eval<F: FieldOps + ?Sized>(f: &F, a: &[Code], x: Code) -> Code {
        a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Brute-force irreducibility by trial division with every monic polynomial of
    /// degree at most deg/2. Returns `None` when the search exceeds `limit` divisors.
    pub fn is_irreducible<F: FieldOps + ?Sized>(f: &F, a: &[Code], limit: u64) -> Option<bool> {
        let mut a = a.to_vec();
        trim(&mut a);
        let n = a.len().saturating_sub(1);
        if n == 0 {
            return Some(false);
        }
        let q = f.order() as u64;
        let mut budget = 0u64;
        for d in 1..=n / 2 {
            let count = q.checked_pow(d as u32)?;
            budget = budget.checked_add(count)?;
            if budget > limit {
                return None;
            }
            for code in 0..count {
                let mut g: Vec<Code> = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    g.push((c % q) as Code);
                    c /= q;
                }
                g.push(1);
                if rem(f, &a, &g).is_empty() {
                    return Some(false);
                }
            }
        }
        Some(true)
    }
}

impl FieldTower {
    /// Builds and validates a tower; both moduli are checked for irreducibility.
    pub fn new(
        p: u32,
        h: usize,
        m: usize,
        fq_modulus: &[u32],
        fqm_modulus: &[Code],
    ) -> Result<Arc<FieldTower>, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if h == 0 || fq_modulus.len() != h + 1 || fq_modulus[h] != 1 || fq_modulus.iter().any(|&c| c >= p) {
            return Err(GfError::BadModulus { expected: h });
        }
        let q = (p as u64).checked_pow(h as u32).ok_or(GfError::TooLarge(u64::MAX))?;
        if q > MAX_BASE_ORDER {
            return Err(GfError::TooLarge(q));
        }
        let order = q.checked_pow(m as u32).ok_or(GfError::TooLarge(u64::MAX))?;
        if m == 0 || order > MAX_TOP_ORDER {
            return Err(GfError::TooLarge(order));
        }
        if fqm_modulus.len() != m + 1 || fqm_modulus[m] != 1 || fqm_modulus.iter().any(|&c| c as u64 >= q) {
            return Err(GfError::BadModulus { expected: m });
        }
        let prime_field = BaseField::build(p, 1, &[0, 1]);
        if poly::is_irreducible(&prime_field, fq_modulus, TRIAL_DIVISION_LIMIT) != Some(true) {
            return Err(GfError::NotIrreducible(fq_modulus.to_vec()));
        }
        let base = BaseField::build(p, h, fq_modulus);
        debug_assert!(base.is_field());
        match poly::is_irreducible(&base, fqm_modulus, TRIAL_DIVISION_LIMIT) {
            Some(true) => {}
            Some(false) => return Err(GfError::NotIrreducible(fqm_modulus.to_vec())),
            None => return Err(GfError::TooLarge(order)),
        }
        let qpow = (0..=m).map(|j| (q as u32).pow(j as u32)).collect();
        Ok(Arc::new(FieldTower {
            base,
            m,
            order: order as u32,
            fqm_modulus: fqm_modulus.to_vec(),
            qpow,
            logs: OnceLock::new(),
            add_table: OnceLock::new(),
        }))
    }

    /// Tower with deterministic default moduli: the built-in table for
    /// p ∈ {2,3,5}, h ≤ 2, m ≤ 6, otherwise the smallest-code irreducible.
    pub fn with_defaults(p: u32, h: usize, m: usize) -> Result<Arc<FieldTower>, GfError> {
        if let Some(&(_, _, _, f, g)) = DEFAULT_MODULI.iter().find(|e| e.0 == p && e.1 == h && e.2 == m) {
            return FieldTower::new(p, h, m, f, g);
        }
        let f = Self::search_modulus(p, 1, h, &[0, 1])?;
        let g = Self::search_modulus(p, h, m, &f)?;
        FieldTower::new(p, h, m, &f, &g)
    }

    /// Smallest-code monic irreducible of degree `deg` over F_{p^h}, where `fq` is the
    /// degree-h modulus of F_{p^h} over F_p (ignored when h = 1).
    pub fn search_modulus(p: u32, h: usize, deg: usize, fq: &[u32]) -> Result<Vec<Code>, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        let base = if h == 1 {
            BaseField::build(p, 1, &[0, 1])
        } else {
            if fq.len() != h + 1 {
                return Err(GfError::BadModulus { expected: h });
            }
            BaseField::build(p, h, fq)
        };
        Self::first_irreducible(&base, deg)
    }

    fn first_irreducible(base: &BaseField, deg: usize) -> Result<Vec<Code>, GfError> {
        if deg == 1 {
            return Ok(vec![0, 1]);
        }
        let q = base.q() as u64;
        let total = q.checked_pow(deg as u32).ok_or(GfError::TooLarge(u64::MAX))?;
        for code in 0..total {
            let mut c = code;
            let mut g: Vec<Code> = (0..deg)
                .map(|_| {
                    let d = (c % q) as Code;
                    c /= q;
                    d
                })
                .collect();
            g.push(1);
            if poly::is_irreducible(base, &g, TRIAL_DIVISION_LIMIT) == Some(true) {
                return Ok(g);
            }
        }
        Err(GfError::TooLarge(total))
    }

    pub fn p(&self) -> u32 {
        self.base.p
    }
    pub fn h(&self) -> usize {
        self.base.h
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn q(&self) -> u32 {
        self.base.q
    }
    pub fn fq_modulus(&self) -> &[u32] {
        &self.base.modulus
    }
    pub fn fqm_modulus(&self) -> &[Code] {
        &self.fqm_modulus
    }
    pub fn base(&self) -> &BaseField {
        &self.base
    }
    pub fn same_parameters(&self, other: &FieldTower) -> bool {
        self == other
    }

    /// F_q coordinate `j` (coefficient of y^j) of `a`.
    #[inline]
    pub fn coord(&self, a: Code, j: usize) -> Code {
        (a / self.qpow[j]) % self.base.q
    }

    /// All m F_q coordinates of `a`.
    pub fn coords(&self, a: Code) -> Vec<Code> {
        (0..self.m).map(|j| self.coord(a, j)).collect()
    }

    /// Packs m F_q coordinates into an element.
    pub fn from_coords(&self, c: &[Code]) -> Code {
        c.iter().enumerate().map(|(j, &x)| x * self.qpow[j]).sum()
    }

    /// Nested digits: m lists of h base-p digits.
    pub fn digits(&self, a: Code) -> Vec<Vec<u32>> {
        (0..self.m).map(|j| self.base.digits(self.coord(a, j))).collect()
    }

    pub fn from_digits(&self, d: &[Vec<u32>]) -> Result<Code, GfError> {
        let bad = GfError::BadDigits { h: self.h(), m: self.m };
        if d.len() != self.m || d.iter().any(|c| c.len() != self.h() || c.iter().any(|&x| x >= self.p())) {
            return Err(bad);
        }
        let coords: Vec<Code> = d
            .iter()
            .map(|c| c.iter().rev().fold(0, |acc, &x| acc * self.p() + x))
            .collect();
        Ok(self.from_coords(&coords))
    }

    /// The class of y in F_{q^m}.
    pub fn generator(&self) -> Code {
        if self.m >= 2 {
            self.base.q
        } else {
            self.base.neg(self.fqm_modulus[0])
        }
    }

    fn slow_mul(&self, a: Code, b: Code) -> Code {
        let m = self.m;
        let f = &self.base;
        let ac = self.coords(a);
        let bc = self.coords(b);
        let mut r = vec![0; 2 * m];
        for i in 0..m {
            if ac[i] == 0 {
                continue;
            }
            for j in 0..m {
                r[i + j] = f.add(r[i + j], f.mul(ac[i], bc[j]));
            }
        }
        for d in (m..2 * m - 1).rev() {
            let c = r[d];
            if c != 0 {
                for (i, &gi) in self.fqm_modulus.iter().enumerate() {
                    r[d - m + i] = f.sub(r[d - m + i], f.mul(c, gi));
                }
            }
        }
        self.from_coords(&r[..m])
    }

    fn slow_pow(&self, a: Code, mut e: u64) -> Code {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn logs(&self) -> Option<&LogTables> {
        self.logs
            .get_or_init(|| {
                let n = self.order as u64;
                if n > LOG_TABLE_LIMIT {
                    return None;
                }
                let group = n - 1;
                let factors = prime_factors(group);
                let g = (1..self.order).find(|&g| factors.iter().all(|&r| self.slow_pow(g, group / r) != 1))?;
                let mut exp = vec![0; 2 * group as usize];
                let mut log = vec![0; n as usize];
                let mut x: Code = 1;
                for (i, e) in exp.iter_mut().take(group as usize).enumerate() {
                    *e = x;
                    log[x as usize] = i as u32;
                    x = self.slow_mul(x, g);
                }
                exp.copy_within(0..group as usize, group as usize);
                Some(LogTables { exp, log })
            })
            .as_ref()
    }

    fn digit_add(&self, mut a: Code, mut b: Code, negate_b: bool) -> Code {
        let p = self.base.p;
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            let db = b % p;
            let db = if negate_b { (p - db) % p } else { db };
            out += ((a % p + db) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn add_table(&self) -> Option<&Vec<u16>> {
        self.add_table
            .get_or_init(|| {
                let n = self.order as u64;
                if n > ADD_TABLE_LIMIT || self.base.p == 2 {
                    return None;
                }
                let mut t = vec![0u16; (n * n) as usize];
                for a in 0..self.order {
                    for b in 0..self.order {
                        t[(a * self.order + b) as usize] = self.digit_add(a, b, false) as u16;
                    }
                }
                Some(t)
            })
            .as_ref()
    }

    /// a^{q^j}, with j reduced modulo m.
    pub fn frobenius(&self, a: Code, j: i64) -> Code {
        let j = j.rem_euclid(self.m as i64) as usize;
        if j == 0 || a == 0 {
            return a;
        }
        if let Some(t) = self.logs() {
            let group = (self.order - 1) as u64;
            let e = (t.log[a as usize] as u64 * self.qpow[j] as u64) % group;
            t.exp[e as usize]
        } else {
            self.pow(a, self.qpow[j] as u64)
        }
    }

    pub fn norm(&self, a: Code) -> Code {
        (0..self.m).fold(1, |acc, j| self.mul(acc, self.frobenius(a, j as i64)))
    }

    pub fn trace(&self, a: Code) -> Code {
        (0..self.m).fold(0, |acc, j| self.add(acc, self.frobenius(a, j as i64)))
    }

    /// Subfield test: a ∈ F_q iff a^q = a.
    pub fn in_base(&self, a: Code) -> bool {
        self.frobenius(a, 1) == a
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Code) -> u64 {
        let group = (self.order - 1) as u64;
        let mut n = group;
        for r in prime_factors(group) {
            while n.is_multiple_of(r) && self.pow(a, n / r) == 1 {
                n /= r;
            }
        }
        n
    }
}

impl FieldOps for FieldTower {
    fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    fn add(&self, a: Code, b: Code) -> Code {
        if self.base.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return self.base.add(a, b);
        }
        match self.add_table() {
            Some(t) => t[(a * self.order + b) as usize] as Code,
            None => self.digit_add(a, b, false),
        }
    }

    #[inline]
    fn neg(&self, a: Code) -> Code {
        if self.base.p == 2 {
            return a;
        }
        self.digit_add(0, a, true)
    }

    #[inline]
    fn sub(&self, a: Code, b: Code) -> Code {
        if self.base.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return self.base.sub(a, b);
        }
        match self.add_table() {
            Some(t) => t[(a * self.order + self.neg(b)) as usize] as Code,
            None => self.digit_add(a, b, true),
        }
    }

    #[inline]
    fn mul(&self, a: Code, b: Code) -> Code {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.m == 1 {
            return self.base.mul(a, b);
        }
        match self.logs() {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.slow_mul(a, b),
        }
    }

    fn inv(&self, a: Code) -> Code {
        debug_assert!(a != 0);
        if self.m == 1 {
            return self.base.inv(a);
        }
        match self.logs() {
            Some(t) => t.exp[(self.order - 1 - t.log[a as usize]) as usize],
            None => self.slow_pow(a, self.order as u64 - 2),
        }
    }
}

/// Images of every element of `small`'s top field in `big`, under the embedding that
/// sends y to the smallest-code root of `small`'s modulus. Both towers must share F_q
/// and `small.m()` must divide `big.m()`.
pub fn subfield_embedding(small: &FieldTower, big: &FieldTower) -> Result<Vec<Code>, GfError> {
    if small.p() != big.p() || small.fq_modulus() != big.fq_modulus() || !big.m().is_multiple_of(small.m()) {
        return Err(GfError::TowerMismatch);
    }
    let g = small.fqm_modulus();
    let root = (0..big.order())
        .find(|&x| poly::eval(big, g, x) == 0)
        .ok_or(GfError::NotIrreducible(g.to_vec()))?;
    let powers: Vec<Code> = (0..small.m()).map(|l| big.pow(root, l as u64)).collect();
    Ok((0..small.order())
        .map(|a| {
            small
                .coords(a)
                .iter()
                .zip(&powers)
                .fold(0, |acc, (&c, &r)| big.add(acc, big.mul(c, r)))
        })
        .collect())
}

/// Validated tower construction (alias of [`FieldTower::new`]).
pub fn make_tower(
    p: u32,
    h: usize,
    m: usize,
    fq_modulus: &[u32],
    fqm_modulus: &[Code],
) -> Result<Arc<FieldTower>, GfError> {
    FieldTower::new(p, h, m, fq_modulus, fqm_modulus)
}

/// An element of F_{q^m} tagged with its tower.
#[derive(Clone)]
pub struct FFElement {
    tower: Arc<FieldTower>,
    code: Code,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Pow(u64),
}

impl FFElement {
    pub fn new(tower: &Arc<FieldTower>, code: Code) -> Result<FFElement, GfError> {
        if code >= tower.order() {
            return Err(GfError::OutOfRange(code as u64));
        }
        Ok(FFElement { tower: tower.clone(), code })
    }

    pub fn zero(tower: &Arc<FieldTower>) -> FFElement {
        FFElement { tower: tower.clone(), code: 0 }
    }

    pub fn one(tower: &Arc<FieldTower>) -> FFElement {
        FFElement { tower: tower.clone(), code: 1 }
    }

    pub fn generator(tower: &Arc<FieldTower>) -> FFElement {
        FFElement { tower: tower.clone(), code: tower.generator() }
    }

    pub fn from_digits(tower: &Arc<FieldTower>, digits: &[Vec<u32>]) -> Result<FFElement, GfError> {
        Ok(FFElement { tower: tower.clone(), code: tower.from_digits(digits)? })
    }

    pub fn code(&self) -> Code {
        self.code
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn digits(&self) -> Vec<Vec<u32>> {
        self.tower.digits(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn check(&self, other: &FFElement) -> Result<(), GfError> {
        if Arc::ptr_eq(&self.tower, &other.tower) || *self.tower == *other.tower {
            Ok(())
        } else {
            Err(GfError::TowerMismatch)
        }
    }

    fn with(&self, code: Code) -> FFElement {
        FFElement { tower: self.tower.clone(), code }
    }

    pub fn add(&self, other: &FFElement) -> Result<FFElement, GfError> {
        self.check(other)?;
        Ok(self.with(self.tower.add(self.code, other.code)))
    }

    pub fn sub(&self, other: &FFElement) -> Result<FFElement, GfError> {
        self.check(other)?;
        Ok(self.with(self.tower.sub(self.code, other.code)))
    }

    pub fn mul(&self, other: &FFElement) -> Result<FFElement, GfError> {
        self.check(other)?;
        Ok(self.with(self.tower.mul(self.code, other.code)))
    }

    pub fn inv(&self) -> Result<FFElement, GfError> {
        if self.code == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.with(self.tower.inv(self.code)))
    }

    pub fn div(&self, other: &FFElement) -> Result<FFElement, GfError> {
        self.check(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: u64) -> FFElement {
        self.with(self.tower.pow(self.code, e))
    }

    pub fn neg(&self) -> FFElement {
        self.with(self.tower.neg(self.code))
    }

    /// a^{q^j} with j reduced modulo m.
    pub fn frobenius(&self, j: i64) -> FFElement {
        self.with(self.tower.frobenius(self.code, j))
    }

    /// Relative norm and trace of F_{q^m}/F_q; both land in F_q.
    pub fn norm_trace(&self) -> (FFElement, FFElement) {
        let n = self.tower.norm(self.code);
        let t = self.tower.trace(self.code);
        debug_assert!(self.tower.in_base(n) && self.tower.in_base(t));
        (self.with(n), self.with(t))
    }

    pub fn in_base(&self) -> bool {
        self.tower.in_base(self.code)
    }

    /// Human-readable form in the generator `y`, with F_q coefficients written as codes.
    pub fn to_expr(&self) -> String {
        format_expr(&self.tower, self.code)
    }
}

/// Binary/unary arithmetic dispatcher; `b` is ignored for `Inv` and `Pow`.
pub fn field_arith(a: &FFElement, b: &FFElement, kind: ArithOp) -> Result<FFElement, GfError> {
    match kind {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b),
        ArithOp::Inv => a.inv(),
        ArithOp::Pow(e) => Ok(a.pow(e)),
    }
}

impl PartialEq for FFElement {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && (Arc::ptr_eq(&self.tower, &other.tower) || *self.tower == *other.tower)
    }
}

impl Eq for FFElement {}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FFElement({})", self.to_expr())
    }
}

impl fmt::Display for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

pub fn format_expr(tower: &FieldTower, a: Code) -> String {
    if a == 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for j in (0..tower.m()).rev() {
        let c = tower.coord(a, j);
        if c == 0 {
            continue;
        }
        let mono = match j {
            0 => String::new(),
            1 => "y".into(),
            _ => format!("y^{j}"),
        };
        terms.push(match (c, j) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    terms.join("+")
}

/// Parses sums of terms `c`, `c*y^e`, `cy^e`, `y`, where the generator may also be
/// written `i` or `w`, and `c` is an F_q code. Also accepts a bare packed code `#n`.
pub fn parse_expr(tower: &FieldTower, s: &str) -> Result<Code, GfError> {
    let err = || GfError::Parse(s.to_string());
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(err());
    }
    if let Some(rest) = text.strip_prefix('#') {
        let v: u64 = rest.parse().map_err(|_| err())?;
        if v >= tower.order() as u64 {
            return Err(GfError::OutOfRange(v));
        }
        return Ok(v as Code);
    }
    let mut total: Code = 0;
    let normalized = text.replace('-', "+-");
    for term in normalized.split('+').filter(|t| !t.is_empty()) {
        let (negative, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term),
        };
        let split = body.find(['y', 'i', 'w']);
        let (coef_txt, mono_txt) = match split {
            Some(pos) => (&body[..pos], &body[pos..]),
            None => (body, ""),
        };
        let coef_txt = coef_txt.trim_end_matches('*');
        let coef: Code = if coef_txt.is_empty() {
            1
        } else {
            let v: u64 = coef_txt.parse().map_err(|_| err())?;
            if v >= tower.q() as u64 {
                return Err(err());
            }
            v as Code
        };
        let exponent: u64 = if mono_txt.is_empty() {
            0
        } else {
            let rest = &mono_txt[1..];
            if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^').ok_or_else(err)?.parse().map_err(|_| err())?
            }
        };
        let mut value = tower.mul(coef, tower.pow(tower.generator(), exponent));
        if negative {
            value = tower.neg(value);
        }
        total = tower.add(total, value);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FieldTower> {
        make_tower(2, 1, 2, &[0, 1], &[1, 1, 1]).unwrap()
    }

    fn f9() -> Arc<FieldTower> {
        make_tower(3, 1, 2, &[0, 1], &[1, 0, 1]).unwrap()
    }

    #[test]
    fn f4_omega_squared_is_omega_plus_one() {
        let t = f4();
        let w = FFElement::generator(&t);
        let w2 = w.mul(&w).unwrap();
        assert_eq!(w2, w.add(&FFElement::one(&t)).unwrap());
        assert_eq!(w.pow(3), FFElement::one(&t));
        assert_eq!(w.frobenius(1), w2);
    }

    #[test]
    fn f9_i_squared_is_minus_one() {
        let t = f9();
        let i = FFElement::generator(&t);
        let one = FFElement::one(&t);
        assert_eq!(i.mul(&i).unwrap(), one.neg());
        // (i+1)^2 = i^2 + 2i + 1 = 2i, worked by hand.
        let ip1 = i.add(&one).unwrap();
        assert_eq!(ip1.pow(2).digits(), vec![vec![0], vec![2]]);
        assert_eq!(i.frobenius(1), i.neg());
        let (n, _) = ip1.norm_trace();
        assert_eq!(n.code(), 2);
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert_eq!(
            make_tower(2, 1, 2, &[0, 1], &[1, 0, 1]).unwrap_err(),
            GfError::NotIrreducible(vec![1, 0, 1])
        );
        assert_eq!(make_tower(4, 1, 2, &[0, 1], &[1, 1, 1]).unwrap_err(), GfError::NotPrime(4));
    }

    #[test]
    fn norm_trace_of_small_elements() {
        let t = f4();
        let (n, tr) = FFElement::generator(&t).norm_trace();
        assert_eq!((n.code(), tr.code()), (1, 1));
        let (n0, t0) = FFElement::zero(&t).norm_trace();
        assert!(n0.is_zero() && t0.is_zero());
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let a = FFElement::one(&f4());
        let z = FFElement::zero(&f4());
        assert_eq!(a.div(&z).unwrap_err(), GfError::DivisionByZero);
        assert_eq!(a.add(&FFElement::one(&f9())).unwrap_err(), GfError::TowerMismatch);
        assert_eq!(field_arith(&a, &a, ArithOp::Pow(5)).unwrap(), a);
    }

    #[test]
    fn default_table_matches_search() {
        for &(p, h, m, f, g) in DEFAULT_MODULI {
            let fs = FieldTower::search_modulus(p, 1, h, &[0, 1]).unwrap();
            assert_eq!(fs, f, "fq modulus for p={p}, h={h}");
            let gs = FieldTower::search_modulus(p, h, m, f).unwrap();
            assert_eq!(gs, g, "fqm modulus for p={p}, h={h}, m={m}");
        }
    }

    #[test]
    fn fast_and_slow_multiplication_agree() {
        for (p, h, m) in [(3, 1, 3), (2, 2, 3), (5, 1, 2), (3, 2, 2)] {
            let t = FieldTower::with_defaults(p, h, m).unwrap();
            for a in 0..t.order() {
                for b in (0..t.order()).step_by(7) {
                    assert_eq!(t.mul(a, b), t.slow_mul(a, b));
                    assert_eq!(t.add(a, b), t.digit_add(a, b, false));
                }
                if a != 0 {
                    assert_eq!(t.mul(a, t.inv(a)), 1);
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_subfield() {
        for (p, h, m) in [(2, 1, 3), (3, 1, 3), (2, 2, 2), (3, 1, 6), (5, 1, 2), (3, 2, 3)] {
            let t = FieldTower::with_defaults(p, h, m).unwrap();
            let mut fixed = 0;
            for a in 0..t.order() {
                let mut x = a;
                for _ in 0..m {
                    x = t.frobenius(x, 1);
                }
                assert_eq!(x, a);
                assert_eq!(t.frobenius(a, m as i64), a);
                if t.in_base(a) {
                    fixed += 1;
                    assert!(a < t.q());
                }
            }
            assert_eq!(fixed, t.q());
        }
    }

    #[test]
    fn parse_aliases() {
        let t = f9();
        assert_eq!(parse_expr(&t, "i+1").unwrap(), 4);
        assert_eq!(parse_expr(&t, "2i").unwrap(), 6);
        assert_eq!(parse_expr(&t, "y^2").unwrap(), 2);
        assert_eq!(parse_expr(&t, "#5").unwrap(), 5);
        assert!(parse_expr(&t, "3").is_err());
        let t4 = f4();
        assert_eq!(parse_expr(&t4, "w").unwrap(), 2);
        assert_eq!(format_expr(&t4, 3), "y+1");
    }
}
