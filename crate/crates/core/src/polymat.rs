//! Matrices over the principal ideal domain `S = L[x]`: Hermite normal
//! forms, exact back-substitution and local valuations.

use crate::exactfield::{ExtElem, Field, FieldTower, Poly};

pub type LPoly = Poly<ExtElem>;

/// Dense row-major matrix of polynomials over `L`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<LPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(l: &FieldTower, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(l));
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<LPoly>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, p) in c.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LPoly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<LPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<LPoly> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, l: &FieldTower, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j).add(l, &a.mul(l, b));
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, l: &FieldTower, v: &[LPoly]) -> Vec<LPoly> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Poly::zero(), |acc, k| {
                    acc.add(l, &self.get(i, k).mul(l, &v[k]))
                })
            })
            .collect()
    }

    /// Entrywise value at `x = 0`.
    pub fn at_zero(&self, l: &FieldTower) -> crate::linalg::Matrix<ExtElem> {
        crate::linalg::Matrix::from_fn(l, self.rows, self.cols, |i, j| {
            self.get(i, j).constant_term(l)
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c · row[src]
    fn add_row_multiple(&mut self, l: &FieldTower, dst: usize, src: usize, c: &LPoly) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.get(dst, j).add(l, &c.mul(l, s));
            self.set(dst, j, v);
        }
    }

    /// col[dst] += c · col[src]
    fn add_col_multiple(&mut self, l: &FieldTower, dst: usize, src: usize, c: &LPoly) {
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s.is_zero() {
                continue;
            }
            let v = self.get(i, dst).add(l, &c.mul(l, s));
            self.set(i, dst, v);
        }
    }

    fn scale_row(&mut self, l: &FieldTower, r: usize, c: &ExtElem) {
        for j in 0..self.cols {
            let v = self.get(r, j).scale(l, c);
            self.set(r, j, v);
        }
    }

    fn scale_col(&mut self, l: &FieldTower, col: usize, c: &ExtElem) {
        for i in 0..self.rows {
            let v = self.get(i, col).scale(l, c);
            self.set(i, col, v);
        }
    }
}

/// Result of a row Hermite reduction `U·G = E`.
#[derive(Debug, Clone)]
pub struct RowHermite {
    /// Echelon form; rows past `rank` are zero.
    pub echelon: PolyMatrix,
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
    /// Unimodular transform and its inverse, when tracked.
    pub transform: Option<(PolyMatrix, PolyMatrix)>,
}

/// Canonical row Hermite form over `L[x]`: monic pivots, entries above a
/// pivot reduced modulo it. With `track`, also returns `U` and `U⁻¹`.
pub fn row_hermite(l: &FieldTower, g: &PolyMatrix, track: bool) -> RowHermite {
    let mut m = g.clone();
    let n = m.rows;
    let mut u = track.then(|| PolyMatrix::identity(l, n));
    let mut uinv = track.then(|| PolyMatrix::identity(l, n));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == n {
            break;
        }
        loop {
            // Row with the lowest-degree nonzero entry in column c.
            let best = (r..n)
                .filter(|&i| !m.get(i, c).is_zero())
                .min_by_key(|&i| m.get(i, c).len());
            let Some(p) = best else { break };
            m.swap_rows(r, p);
            if let (Some(u), Some(ui)) = (u.as_mut(), uinv.as_mut()) {
                u.swap_rows(r, p);
                ui.swap_cols(r, p);
            }
            let mut clean = true;
            for i in r + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let q = m.get(i, c).div_rem(l, m.get(r, c)).0;
                let neg_q = q.neg(l);
                m.add_row_multiple(l, i, r, &neg_q);
                if let (Some(u), Some(ui)) = (u.as_mut(), uinv.as_mut()) {
                    u.add_row_multiple(l, i, r, &neg_q);
                    // (E_ir(-q))⁻¹ = E_ir(q) acting on the right: col r += q · col i
                    ui.add_col_multiple(l, r, i, &q);
                }
                if !m.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if m.get(r, c).is_zero() {
            continue;
        }
        let lc = m.get(r, c).lc().unwrap().clone();
        let inv = l.inv(&lc).unwrap();
        m.scale_row(l, r, &inv);
        if let (Some(u), Some(ui)) = (u.as_mut(), uinv.as_mut()) {
            u.scale_row(l, r, &inv);
            ui.scale_col(l, r, &lc);
        }
        for i in 0..r {
            if m.get(i, c).is_zero() {
                continue;
            }
            let q = m.get(i, c).div_rem(l, m.get(r, c)).0;
            if q.is_zero() {
                continue;
            }
            let neg_q = q.neg(l);
            m.add_row_multiple(l, i, r, &neg_q);
            if let (Some(u), Some(ui)) = (u.as_mut(), uinv.as_mut()) {
                u.add_row_multiple(l, i, r, &neg_q);
                ui.add_col_multiple(l, r, i, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    RowHermite {
        echelon: m,
        rank: r,
        pivots,
        transform: u.zip(uinv),
    }
}

/// Canonical basis of the `S`-span of the columns of `g`: an `n × r` matrix
/// in column Hermite form, with the row index of each column's pivot.
pub fn column_hermite(l: &FieldTower, g: &PolyMatrix) -> (PolyMatrix, Vec<usize>) {
    let h = row_hermite(l, &g.transpose(), false);
    let rows: Vec<Vec<LPoly>> = (0..h.rank).map(|i| h.echelon.row(i)).collect();
    (PolyMatrix::from_cols(&rows, g.rows), h.pivots)
}

/// For a column Hermite basis `b` with pivot rows `pivots`, solve
/// `b·s = P·y` with `P` the product of the pivots, returning `(s, P)`.
/// `s` is polynomial; `None` if `y` is not in the rational span of `b`.
pub fn solve_scaled(
    l: &FieldTower,
    b: &PolyMatrix,
    pivots: &[usize],
    y: &[LPoly],
) -> Option<(Vec<LPoly>, LPoly)> {
    let r = pivots.len();
    let p = (0..r).fold(Poly::one(l), |acc, j| acc.mul(l, b.get(pivots[j], j)));
    let py: Vec<LPoly> = y.iter().map(|c| c.mul(l, &p)).collect();
    let mut s: Vec<LPoly> = Vec::with_capacity(r);
    for j in 0..r {
        let row = pivots[j];
        let mut rhs = py[row].clone();
        for (k, sk) in s.iter().enumerate() {
            rhs = rhs.sub(l, &b.get(row, k).mul(l, sk));
        }
        s.push(rhs.div_exact(l, b.get(row, j))?);
    }
    (b.mul_vec(l, &s) == py).then_some((s, p))
}

/// Exact coordinates `s` with `b·s = y`, when they are polynomial.
pub fn solve_exact(
    l: &FieldTower,
    b: &PolyMatrix,
    pivots: &[usize],
    y: &[LPoly],
) -> Option<Vec<LPoly>> {
    let (s, p) = solve_scaled(l, b, pivots, y)?;
    s.iter().map(|c| c.div_exact(l, &p)).collect()
}

/// Exponent of the largest power of `q` dividing `p`; `None` for zero.
pub fn valuation(l: &FieldTower, p: &LPoly, q: &LPoly) -> Option<usize> {
    if p.is_zero() {
        return None;
    }
    let mut cur = p.clone();
    let mut k = 0;
    while let Some(next) = cur.div_exact(l, q) {
        cur = next;
        k += 1;
    }
    Some(k)
}

/// Determinant by cofactor expansion along the first row (sizes stay ≤ 4).
pub fn det(l: &FieldTower, m: &PolyMatrix) -> LPoly {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return Poly::one(l);
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = Poly::zero();
    for j in 0..n {
        if m.get(0, j).is_zero() {
            continue;
        }
        let minor_cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let mut minor = PolyMatrix::zeros(n - 1, n - 1);
        for i in 1..n {
            for (k, &c) in minor_cols.iter().enumerate() {
                minor.set(i - 1, k, m.get(i, c).clone());
            }
        }
        let term = m.get(0, j).mul(l, &det(l, &minor));
        acc = if j % 2 == 0 {
            acc.add(l, &term)
        } else {
            acc.sub(l, &term)
        };
    }
    acc
}

/// Exponents `e₁ ≤ … ≤ e_r` of the local Smith form at `q` of an `n × r`
/// matrix of full column rank, from valuations of determinantal divisors.
pub fn local_smith_exponents(l: &FieldTower, b: &PolyMatrix, q: &LPoly) -> Vec<usize> {
    use itertools::Itertools;
    let r = b.cols;
    let mut prev = 0;
    let mut out = Vec::with_capacity(r);
    for k in 1..=r {
        let mut best: Option<usize> = None;
        for rows in (0..b.rows).combinations(k) {
            for cols in (0..r).combinations(k) {
                let mut minor = PolyMatrix::zeros(k, k);
                for (a, &i) in rows.iter().enumerate() {
                    for (c, &j) in cols.iter().enumerate() {
                        minor.set(a, c, b.get(i, j).clone());
                    }
                }
                if let Some(v) = valuation(l, &det(l, &minor), q) {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        let dk = best.expect("full column rank");
        out.push(dk - prev);
        prev = dk;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(l: &FieldTower, v: &[i64]) -> LPoly {
        Poly::from_coeffs(v.iter().map(|&n| l.from_int(n)).collect())
    }

    #[test]
    fn hermite_of_ideal_generators_is_gcd() {
        let l = FieldTower::theta7();
        // gcd(x(1+x), x^2) = x
        let g = PolyMatrix::from_cols(&[vec![c(&l, &[0, 1, 1])], vec![c(&l, &[0, 0, 1])]], 1);
        let (b, piv) = column_hermite(&l, &g);
        assert_eq!(piv, vec![0]);
        assert_eq!(b.get(0, 0), &c(&l, &[0, 1]));
    }

    #[test]
    fn tracked_transform_is_inverse_pair() {
        let l = FieldTower::theta7();
        let g = PolyMatrix::from_cols(&[vec![c(&l, &[1, 1]), c(&l, &[0, 1]), c(&l, &[2])]], 3);
        let h = row_hermite(&l, &g, true);
        let (u, ui) = h.transform.unwrap();
        assert_eq!(u.mul(&l, &ui), PolyMatrix::identity(&l, 3));
        assert_eq!(u.mul(&l, &g), h.echelon);
        assert_eq!(h.rank, 1);
    }

    #[test]
    fn smith_exponents_at_a_prime() {
        let l = FieldTower::theta7();
        let q = c(&l, &[1, 1]);
        let q2 = q.mul(&l, &q);
        let mut b = PolyMatrix::zeros(2, 2);
        b.set(0, 0, q.clone());
        b.set(1, 1, q2);
        b.set(1, 0, c(&l, &[0, 1]));
        assert_eq!(local_smith_exponents(&l, &b, &q), vec![0, 3]);
    }
}
