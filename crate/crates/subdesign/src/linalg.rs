//! Dense linear algebra over any [`FieldOps`] field, plus reduced-echelon enumeration.

use crate::gf::{Code, FieldOps};

/// In-place reduced row-echelon form; zero rows are dropped. Returns pivot columns.
pub fn rref<F: FieldOps + ?Sized>(f: &F, rows: &mut Vec<Vec<Code>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = f.inv(rows[r][c]);
        if inv != 1 {
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c];
            if factor != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: FieldOps + ?Sized>(f: &F, rows: &[Vec<Code>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Rank of a flat row-major `nrows × ncols` matrix, destroying its contents.
pub fn rank_flat<F: FieldOps + ?Sized>(f: &F, a: &mut [Code], nrows: usize, ncols: usize) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(sel) = (r..nrows).find(|&i| a[i * ncols + c] != 0) else {
            continue;
        };
        if sel != r {
            for j in c..ncols {
                a.swap(r * ncols + j, sel * ncols + j);
            }
        }
        let inv = f.inv(a[r * ncols + c]);
        for j in c..ncols {
            a[r * ncols + j] = f.mul(a[r * ncols + j], inv);
        }
        for i in r + 1..nrows {
            let factor = a[i * ncols + c];
            if factor != 0 {
                for j in c..ncols {
                    let v = f.mul(factor, a[r * ncols + j]);
                    a[i * ncols + j] = f.sub(a[i * ncols + j], v);
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis (in RREF) of the right kernel {v : A v = 0} of a matrix with `ncols` columns.
pub fn kernel<F: FieldOps + ?Sized>(f: &F, rows: &[Vec<Code>], ncols: usize) -> Vec<Vec<Code>> {
    let mut a = rows.to_vec();
    let pivots = rref(f, &mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vec<Code>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![0; ncols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a[r][fc]);
            }
            v
        })
        .collect();
    rref(f, &mut basis);
    basis
}

/// Reduces `v` against an RREF basis with the given pivots; zero iff `v` lies in the span.
pub fn reduce<F: FieldOps + ?Sized>(f: &F, basis: &[Vec<Code>], pivots: &[usize], v: &mut [Code]) {
    for (row, &c) in basis.iter().zip(pivots) {
        let factor = v[c];
        if factor != 0 {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
    }
}

/// Pivot columns of a matrix already in RREF.
pub fn pivots_of(rows: &[Vec<Code>]) -> Vec<usize> {
    rows.iter().map(|r| r.iter().position(|&x| x != 0).expect("nonzero RREF row")).collect()
}

pub fn is_rref(rows: &[Vec<Code>]) -> bool {
    let mut last = None;
    for (i, row) in rows.iter().enumerate() {
        let Some(p) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        if row[p] != 1 || last.is_some_and(|l| p <= l) {
            return false;
        }
        if rows.iter().enumerate().any(|(j, other)| j != i && other[p] != 0) {
            return false;
        }
        last = Some(p);
    }
    true
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<F: FieldOps + ?Sized>(f: &F, a: &[Vec<Code>]) -> Option<Vec<Vec<Code>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Code>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Code::from(i == j)));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row vector times matrix.
pub fn vec_mat<F: FieldOps + ?Sized>(f: &F, x: &[Code], m: &[Vec<Code>]) -> Vec<Code> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = vec![0; ncols];
    for (&xi, row) in x.iter().zip(m) {
        if xi == 0 {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(xi, v));
        }
    }
    out
}

pub fn mat_mul<F: FieldOps + ?Sized>(f: &F, a: &[Vec<Code>], b: &[Vec<Code>]) -> Vec<Vec<Code>> {
    a.iter().map(|row| vec_mat(f, row, b)).collect()
}

pub fn dot<F: FieldOps + ?Sized>(f: &F, a: &[Code], b: &[Code]) -> Code {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Gaussian binomial [n choose k]_Q, `None` on overflow.
pub fn gaussian_binomial(n: usize, k: usize, big_q: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let qq = big_q as u128;
    for i in 0..k {
        num = num.checked_mul(qq.checked_pow((n - i) as u32)?.checked_sub(1)?)?;
        den = den.checked_mul(qq.checked_pow((i + 1) as u32)?.checked_sub(1)?)?;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    Some(num / den)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// One pivot pattern of reduced-echelon `s × k` matrices.
#[derive(Debug, Clone)]
struct Cell {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    start: u128,
}

/// Random-access enumeration of all `s × k` reduced-echelon matrices over a field
/// with `order` elements. Matrices are ordered by pivot set (lexicographic), then
/// by free entries read row-major as a base-`order` number (last entry fastest).
#[derive(Debug, Clone)]
pub struct RrefEnumerator {
    order: u32,
    k: usize,
    s: usize,
    cells: Vec<Cell>,
    total: u128,
}

impl RrefEnumerator {
    pub fn new(order: u32, k: usize, s: usize) -> Option<RrefEnumerator> {
        let mut cells = Vec::new();
        let mut total: u128 = 0;
        if s <= k {
            for pivots in combinations(k, s) {
                let mut free = Vec::new();
                for (r, &pc) in pivots.iter().enumerate() {
                    for c in pc + 1..k {
                        if !pivots.contains(&c) {
                            free.push((r, c));
                        }
                    }
                }
                let size = (order as u128).checked_pow(free.len() as u32)?;
                cells.push(Cell { pivots, free, start: total });
                total = total.checked_add(size)?;
            }
        }
        Some(RrefEnumerator { order, k, s, cells, total })
    }

    pub fn len(&self) -> u128 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn nth(&self, idx: u128) -> Vec<Vec<Code>> {
        assert!(idx < self.total);
        let ci = self.cells.partition_point(|c| c.start <= idx) - 1;
        let cell = &self.cells[ci];
        let mut off = idx - cell.start;
        let mut m = vec![vec![0; self.k]; self.s];
        for (r, &pc) in cell.pivots.iter().enumerate() {
            m[r][pc] = 1;
        }
        for &(r, c) in cell.free.iter().rev() {
            m[r][c] = (off % self.order as u128) as Code;
            off /= self.order as u128;
        }
        m
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<Vec<Code>>> + '_ {
        (0..self.total).map(move |i| self.nth(i))
    }
}

/// Random-access enumeration of projective points of PG(k−1, order): vectors whose
/// first nonzero entry is 1, in ascending lexicographic order.
#[derive(Debug, Clone, Copy)]
pub struct PointEnumerator {
    order: u32,
    k: usize,
}

impl PointEnumerator {
    pub fn new(order: u32, k: usize) -> PointEnumerator {
        PointEnumerator { order, k }
    }

    pub fn len(&self) -> u128 {
        let q = self.order as u128;
        (0..self.k).map(|i| q.pow(i as u32)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn nth(&self, mut idx: u128) -> Vec<Code> {
        let q = self.order as u128;
        let mut v = vec![0; self.k];
        // Leading position k-1 first: the block with lead at position j has q^{k-1-j} points.
        for lead in (0..self.k).rev() {
            let size = q.pow((self.k - 1 - lead) as u32);
            if idx < size {
                v[lead] = 1;
                for c in (lead + 1..self.k).rev() {
                    v[c] = (idx % q) as Code;
                    idx /= q;
                }
                return v;
            }
            idx -= size;
        }
        panic!("point index out of range");
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<Code>> + '_ {
        (0..self.len()).map(move |i| self.nth(i))
    }
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize_projective<F: FieldOps + ?Sized>(f: &F, v: &[Code]) -> Option<Vec<Code>> {
    let lead = *v.iter().find(|&&x| x != 0)?;
    if lead == 1 {
        return Some(v.to_vec());
    }
    let inv = f.inv(lead);
    Some(v.iter().map(|&x| f.mul(x, inv)).collect())
}

/// All `s`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..s).collect();
    if s > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = s;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - s + i {
                cur[i] += 1;
                for j in i + 1..s {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        if s == 0 {
            return out;
        }
    }
}

/// Iterates every vector of F^n (as codes) in base-`order` counting order.
pub fn all_vectors(order: u32, n: usize) -> impl Iterator<Item = Vec<Code>> {
    let total = (order as u128).pow(n as u32);
    (0..total).map(move |mut i| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = (i % order as u128) as Code;
            i /= order as u128;
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, 4), Some(5));
        assert_eq!(gaussian_binomial(4, 3, 27), Some(20440));
        assert_eq!(gaussian_binomial(4, 2, 2), Some(35));
        assert_eq!(gaussian_binomial(6, 1, 3), Some(364));
        assert_eq!(gaussian_binomial(3, 0, 9), Some(1));
        assert_eq!(gaussian_binomial(1, 2, 9), Some(0));
    }

    #[test]
    fn enumerator_counts_and_canonical() {
        for (q, k, s) in [(2u32, 4usize, 2usize), (3, 3, 1), (4, 3, 2), (2, 5, 3), (3, 2, 0)] {
            let e = RrefEnumerator::new(q, k, s).unwrap();
            assert_eq!(e.len(), gaussian_binomial(k, s, q as u64).unwrap());
            let mut seen = std::collections::HashSet::new();
            for m in e.iter() {
                assert!(is_rref(&m));
                assert!(seen.insert(m));
            }
        }
    }

    #[test]
    fn point_enumerator_is_lexicographic() {
        let e = PointEnumerator::new(3, 3);
        let pts: Vec<_> = e.iter().collect();
        assert_eq!(pts.len(), 13);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(pts.iter().all(|p| p.iter().find(|&&x| x != 0) == Some(&1)));
    }

    #[test]
    fn kernel_is_annihilated() {
        let t = FieldTower::with_defaults(3, 1, 2).unwrap();
        let a = vec![vec![1, 2, 3, 4], vec![0, 1, 5, 7]];
        let k = kernel(&*t, &a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &a {
                assert_eq!(dot(&*t, row, v), 0);
            }
        }
    }

    #[test]
    fn combinations_lexicographic() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
