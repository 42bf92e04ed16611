use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntegerMatrix {
            rows: r,
            cols: c,
            entries: rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// rows (a, b) <- (s*a + t*b, u*a + v*b)
    fn mix_rows(&mut self, a: usize, b: usize, [s, t, u, v]: &[BigInt; 4]) {
        for j in 0..self.cols {
            let x = self[(a, j)].clone();
            let y = self[(b, j)].clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            self[(a, j)] = s * &x + t * &y;
            self[(b, j)] = u * &x + v * &y;
        }
    }

    /// columns (a, b) <- (s*a + t*b, u*a + v*b)
    fn mix_cols(&mut self, a: usize, b: usize, [s, t, u, v]: &[BigInt; 4]) {
        for i in 0..self.rows {
            let x = self[(i, a)].clone();
            let y = self[(i, b)].clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            self[(i, a)] = s * &x + t * &y;
            self[(i, b)] = u * &x + v * &y;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// `m = u * d * v` with `u`, `v` unimodular and `d` diagonal, `d_i | d_{i+1}`.
/// `u_inv * m * v_inv = d` is kept alongside for solving.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v_inv: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Unimodular 2x2 `[s t; u v]` sending `(a, b)` to `(gcd(a, b), 0)`, with its inverse.
fn gcd_transform(a: &BigInt, b: &BigInt) -> ([BigInt; 4], [BigInt; 4]) {
    let e = a.extended_gcd(b);
    let (g, s, t) = (e.gcd, e.x, e.y);
    let u = -(b / &g);
    let v = a / &g;
    // det = s*v - t*u = (s*a + t*b)/g = 1
    let inv = [v.clone(), -t.clone(), -u.clone(), s.clone()];
    ([s, t, u, v], inv)
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    // invariants: m = u * d * v and d = u_inv * m * v_inv
    let mut u = IntegerMatrix::identity(rows);
    let mut u_inv = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    let mut v_inv = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &d[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u_inv.swap_rows(t, pi);
        u.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v_inv.swap_cols(t, pj);
        v.swap_rows(t, pj);

        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let (fwd, inv) = if (&d[(i, t)] % &d[(t, t)]).is_zero() {
                    let q = &d[(i, t)] / &d[(t, t)];
                    let one = BigInt::one();
                    let zero = BigInt::zero();
                    ([one.clone(), zero.clone(), -q.clone(), one.clone()], [one.clone(), zero, q, one])
                } else {
                    gcd_transform(&d[(t, t)], &d[(i, t)])
                };
                d.mix_rows(t, i, &fwd);
                u_inv.mix_rows(t, i, &fwd);
                // u <- u * fwd^{-1}: columns mix with the transpose of the inverse
                let [a, b, c, e] = &inv;
                u.mix_cols(t, i, &[a.clone(), c.clone(), b.clone(), e.clone()]);
                changed = true;
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let (fwd, inv) = if (&d[(t, j)] % &d[(t, t)]).is_zero() {
                    let q = &d[(t, j)] / &d[(t, t)];
                    let one = BigInt::one();
                    let zero = BigInt::zero();
                    ([one.clone(), zero.clone(), -q.clone(), one.clone()], [one.clone(), zero, q, one])
                } else {
                    gcd_transform(&d[(t, t)], &d[(t, j)])
                };
                // column ops: d <- d * fwd^T, v_inv <- v_inv * fwd^T, v <- (fwd^T)^{-1} * v
                d.mix_cols(t, j, &fwd);
                v_inv.mix_cols(t, j, &fwd);
                let [a, b, c, e] = &inv;
                v.mix_rows(t, j, &[a.clone(), c.clone(), b.clone(), e.clone()]);
                changed = true;
            }
            if changed {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    let zero = BigInt::zero();
                    let fwd = [one.clone(), one.clone(), zero.clone(), one.clone()];
                    let inv_t = [one.clone(), zero.clone(), -one.clone(), one.clone()];
                    d.mix_rows(t, i, &fwd);
                    u_inv.mix_rows(t, i, &fwd);
                    u.mix_cols(t, i, &inv_t);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            // negate row t; u picks up the same sign on column t
            for j in 0..cols {
                let x = -d[(t, j)].clone();
                d[(t, j)] = x;
            }
            for j in 0..rows {
                let x = -u_inv[(t, j)].clone();
                u_inv[(t, j)] = x;
            }
            for i in 0..rows {
                let x = -u[(i, t)].clone();
                u[(i, t)] = x;
            }
        }
    }
    SmithForm { u, d, v, u_inv, v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert!(s.d.is_diagonal());
        assert_eq!(&s.u.mul(&s.d).mul(&s.v), m);
        assert_eq!(s.u_inv.mul(m).mul(&s.v_inv), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntegerMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntegerMatrix::identity(m.cols()));
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {f:?}");
        }
        assert!(f.iter().all(|x| x.is_positive()));
        s
    }

    #[test]
    fn small_examples() {
        let z = IntegerMatrix::zeros(3, 2);
        assert!(check(&z).invariant_factors().is_empty());
        let id = IntegerMatrix::identity(3);
        assert_eq!(check(&id).d, id);
        let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let f = check(&m).invariant_factors();
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(m.determinant(), BigInt::from(-8));
    }

    #[test]
    fn relation_matrix_of_z2_z4() {
        // Z^3 modulo rows (2,0,0), (0,4,0), (0,2,2), (0,0,4)
        let m = IntegerMatrix::from_rows(&[vec![2, 0, 0], vec![0, 4, 0], vec![0, 2, 2], vec![0, 0, 4]]);
        let f: Vec<i64> = check(&m)
            .invariant_factors()
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(f, vec![2, 2, 4]);
    }

    /// gcd of all k x k minors, by enumeration
    fn determinantal_divisor(m: &IntegerMatrix, k: usize) -> BigInt {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            (0..n)
                .flat_map(|first| {
                    subsets(n, k - 1)
                        .into_iter()
                        .filter(move |rest| rest.first().is_none_or(|&r| r > first))
                        .map(move |mut rest| {
                            rest.insert(0, first);
                            rest
                        })
                })
                .collect()
        }
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let sub = IntegerMatrix::from_rows(
                    &rs.iter().map(|&i| cs.iter().map(|&j| m[(i, j)].clone()).collect()).collect::<Vec<Vec<BigInt>>>(),
                );
                g = g.gcd(&sub.determinant());
            }
        }
        g
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn matches_determinantal_divisors(
            rows in 1usize..4,
            cols in 1usize..4,
            seed in proptest::collection::vec(-12i64..12, 9),
        ) {
            let m = IntegerMatrix::from_rows(
                &(0..rows).map(|i| (0..cols).map(|j| seed[i * 3 + j]).collect()).collect::<Vec<Vec<i64>>>(),
            );
            let s = check(&m);
            let f = s.invariant_factors();
            let mut prev = BigInt::one();
            for k in 1..=rows.min(cols) {
                let dk = determinantal_divisor(&m, k);
                if dk.is_zero() {
                    prop_assert_eq!(f.len(), k - 1);
                    break;
                }
                prop_assert_eq!(&f[k - 1], &(&dk / &prev));
                prev = dk;
            }
        }
    }
}
