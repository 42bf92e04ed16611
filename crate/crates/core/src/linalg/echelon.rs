//! Echelon (Howell-style) form of a subgroup of `Z/m_0 + ... + Z/m_{L-1}`.
//!
//! Pivot `i` has its first nonzero coordinate at `col_i`, and the pivots with
//! `col >= c` generate exactly the elements whose coordinates before `c`
//! vanish. That one property yields membership tests, lexicographically least
//! coset representatives, kernels (via graphs of maps) and a unique digit
//! expansion for enumerating subgroup elements.

use num_integer::Integer;

/// Coordinates of an element: residues `0 <= v[i] < moduli[i]`.
pub type Residues = Vec<i64>;

/// Sorted `(index, nonzero residue)` pairs.
type Sparse = Vec<(usize, i64)>;

#[derive(Debug, Clone)]
struct Pivot {
    col: usize,
    vec: Sparse,
    /// `gcd(vec[col], m_col)`: the subgroup of `Z/m_col` reachable at this column.
    step: i64,
    /// `(vec[col] / step)^{-1} mod (m_col / step)`.
    unit_inv: i64,
}

#[derive(Debug, Clone)]
pub struct SubgroupEchelon {
    moduli: Vec<i64>,
    pivots: Vec<Pivot>,
}

#[inline]
fn modn(x: i128, m: i64) -> i64 {
    x.rem_euclid(m as i128) as i64
}

fn inv_mod(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    modn(e.x, m)
}

/// `s*x + t*y` on sparse vectors.
fn lin(s: i64, x: &[(usize, i64)], t: i64, y: &[(usize, i64)], moduli: &[i64]) -> Sparse {
    let mut out = Vec::with_capacity(x.len().max(y.len()));
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (idx, a, b) = match (x.get(i), y.get(j)) {
            (Some(&(xi, xa)), Some(&(yi, yb))) if xi == yi => {
                i += 1;
                j += 1;
                (xi, xa, yb)
            }
            (Some(&(xi, xa)), Some(&(yi, _))) if xi < yi => {
                i += 1;
                (xi, xa, 0)
            }
            (Some(&(xi, xa)), None) => {
                i += 1;
                (xi, xa, 0)
            }
            (_, Some(&(yi, yb))) => {
                j += 1;
                (yi, 0, yb)
            }
            (None, None) => unreachable!(),
        };
        let v = modn(s as i128 * a as i128 + t as i128 * b as i128, moduli[idx]);
        if v != 0 {
            out.push((idx, v));
        }
    }
    out
}

fn densify(v: &[(usize, i64)], len: usize) -> Residues {
    let mut out = vec![0i64; len];
    for &(i, x) in v {
        out[i] = x;
    }
    out
}

/// `target -= k * v` on a dense target.
fn sub_multiple(target: &mut [i64], k: i64, v: &[(usize, i64)], moduli: &[i64]) {
    for &(i, x) in v {
        target[i] = modn(target[i] as i128 - k as i128 * x as i128, moduli[i]);
    }
}

impl SubgroupEchelon {
    /// Echelon form of the subgroup generated by `generators`.
    pub fn new(moduli: Vec<i64>, generators: Vec<Residues>) -> Self {
        assert!(moduli.iter().all(|&m| m >= 1));
        let len = moduli.len();
        // generators bucketed by leading column
        let mut buckets: Vec<Vec<Sparse>> = vec![Vec::new(); len];
        for g in generators {
            assert_eq!(g.len(), len, "generator length");
            let sparse: Sparse = g
                .iter()
                .zip(&moduli)
                .enumerate()
                .map(|(i, (&x, &m))| (i, x.rem_euclid(m)))
                .filter(|&(_, x)| x != 0)
                .collect();
            if let Some(&(lead, _)) = sparse.first() {
                buckets[lead].push(sparse);
            }
        }
        let mut pivots = Vec::new();

        for col in 0..len {
            let list = std::mem::take(&mut buckets[col]);
            let mut it = list.into_iter();
            let Some(mut p) = it.next() else { continue };
            for g in it {
                let a = p[0].1 as i128;
                let b = g[0].1 as i128;
                let e = a.extended_gcd(&b);
                let (gg, s, t) = (e.gcd, e.x, e.y);
                let (bg, ag) = ((b / gg) as i64, (a / gg) as i64);
                // (p, g) <- (s p + t g, (b/g) p - (a/g) g), unimodular
                let np = lin(s as i64, &p, t as i64, &g, &moduli);
                let ng = lin(bg, &p, -ag, &g, &moduli);
                p = np;
                debug_assert!(ng.first().is_none_or(|&(i, _)| i > col));
                if let Some(&(lead, _)) = ng.first() {
                    buckets[lead].push(ng);
                }
            }
            debug_assert_eq!(p[0].0, col);
            let m = moduli[col];
            let a = p[0].1;
            let step = a.gcd(&m);
            let order_here = m / step;
            let unit_inv = inv_mod(a / step, order_here);
            // multiples of the pivot that vanish at this column carry on
            let carry = lin(order_here, &p, 0, &[], &moduli);
            if let Some(&(lead, _)) = carry.first() {
                buckets[lead].push(carry);
            }
            pivots.push(Pivot {
                col,
                vec: p,
                step,
                unit_inv,
            });
        }
        SubgroupEchelon { moduli, pivots }
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots.len()
    }

    /// Order of the subgroup, `prod m_col / step`, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        self.pivots
            .iter()
            .map(|p| (self.moduli[p.col] / p.step) as u128)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    /// Per-pivot digit ranges of the unique expansion `sum c_i pivot_i`.
    pub fn digit_ranges(&self) -> Vec<i64> {
        self.pivots.iter().map(|p| self.moduli[p.col] / p.step).collect()
    }

    /// Pivot vectors, densified, in column order.
    pub fn pivot_vectors(&self) -> impl Iterator<Item = Residues> + '_ {
        self.pivots.iter().map(|p| densify(&p.vec, self.moduli.len()))
    }

    /// Generators of the elements vanishing on every coordinate before `col`.
    pub fn generators_from(&self, col: usize) -> Vec<Residues> {
        self.pivots
            .iter()
            .filter(|p| p.col >= col)
            .map(|p| densify(&p.vec, self.moduli.len()))
            .collect()
    }

    /// Pivots leading before `col`; their restrictions to `0..col` generate
    /// the projection of the subgroup onto those coordinates.
    pub fn generators_before(&self, col: usize) -> Vec<Residues> {
        self.pivots
            .iter()
            .filter(|p| p.col < col)
            .map(|p| densify(&p.vec, self.moduli.len()))
            .collect()
    }

    /// Pivot vector leading at `col` and its step, if any.
    pub fn pivot_at(&self, col: usize) -> Option<(Residues, i64)> {
        let i = self.pivots.binary_search_by_key(&col, |p| p.col).ok()?;
        Some((densify(&self.pivots[i].vec, self.moduli.len()), self.pivots[i].step))
    }

    /// Step of the pivot leading at `col`, or the modulus when there is none.
    pub fn step_at(&self, col: usize) -> i64 {
        match self.pivots.binary_search_by_key(&col, |p| p.col) {
            Ok(i) => self.pivots[i].step,
            Err(_) => self.moduli[col],
        }
    }

    /// Reduces `v` towards the lexicographically least element of
    /// `v + subgroup`, using only pivots whose column lies in `cols`.
    fn reduce_range(&self, v: &mut [i64], cols: std::ops::Range<usize>) {
        let start = self.pivots.partition_point(|p| p.col < cols.start);
        for p in &self.pivots[start..] {
            if p.col >= cols.end {
                break;
            }
            let m = self.moduli[p.col];
            let q = v[p.col] / p.step;
            if q == 0 {
                continue;
            }
            let k = modn(q as i128 * p.unit_inv as i128, m / p.step);
            if k != 0 {
                sub_multiple(v, k, &p.vec, &self.moduli);
            }
        }
    }

    fn reduced_copy(&self, v: &[i64]) -> Residues {
        assert_eq!(v.len(), self.moduli.len(), "vector length");
        v.iter().zip(&self.moduli).map(|(&x, &m)| x.rem_euclid(m)).collect()
    }

    /// Lexicographically least representative of the coset `v + subgroup`.
    pub fn reduce(&self, v: &[i64]) -> Residues {
        let mut out = self.reduced_copy(v);
        self.reduce_range(&mut out, 0..self.moduli.len());
        out
    }

    /// Reduces with the pivots whose column lies in `cols` only.
    pub fn reduce_cols(&self, v: &[i64], cols: std::ops::Range<usize>) -> Residues {
        let mut out = self.reduced_copy(v);
        self.reduce_range(&mut out, cols);
        out
    }

    /// Reduces only with pivots in columns `< prefix`; the result vanishes on
    /// that prefix exactly when the prefix part of `v` lies in the projection.
    pub fn reduce_prefix(&self, v: &[i64], prefix: usize) -> Residues {
        self.reduce_cols(v, 0..prefix)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Element with the given digits, `sum digits[i] * pivot_i`.
    pub fn combine(&self, digits: &[i64]) -> Residues {
        let mut out = vec![0i64; self.moduli.len()];
        for (p, &c) in self.pivots.iter().zip(digits) {
            if c != 0 {
                sub_multiple(&mut out, -c, &p.vec, &self.moduli);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// all elements of the subgroup generated by `gens`, by closure
    fn closure(moduli: &[i64], gens: &[Residues]) -> BTreeSet<Residues> {
        let mut seen = BTreeSet::new();
        let zero = vec![0i64; moduli.len()];
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: Residues = x.iter().zip(g).zip(moduli).map(|((&a, &b), &m)| (a + b).rem_euclid(m)).collect();
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    fn all_elements(moduli: &[i64]) -> Vec<Residues> {
        let mut out = vec![vec![]];
        for &m in moduli {
            out = out
                .into_iter()
                .flat_map(|v: Residues| {
                    (0..m).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn simple_subgroups() {
        let e = SubgroupEchelon::new(vec![4], vec![vec![2]]);
        assert_eq!(e.order(), 2);
        assert!(e.contains(&[2]));
        assert!(!e.contains(&[1]));
        assert_eq!(e.reduce(&[3]), vec![1]);

        let e = SubgroupEchelon::new(vec![4, 4], vec![vec![2, 1]]);
        assert_eq!(e.order(), 4);
        assert!(e.contains(&[0, 2]));
        assert_eq!(e.reduce(&[3, 3]), vec![1, 0]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn agrees_with_closure(
            moduli in proptest::collection::vec(prop_oneof![Just(2i64), Just(3), Just(4), Just(6), Just(8)], 1..4),
            raw in proptest::collection::vec(proptest::collection::vec(0i64..24, 4), 0..4),
        ) {
            let gens: Vec<Residues> = raw.iter().map(|g| g[..moduli.len()].iter().zip(&moduli).map(|(&x, &m)| x % m).collect()).collect();
            let e = SubgroupEchelon::new(moduli.clone(), gens.clone());
            let span = closure(&moduli, &gens);
            prop_assert_eq!(e.order(), span.len() as u128);

            // the digit expansion enumerates the subgroup without repeats
            let ranges = e.digit_ranges();
            let mut digits = vec![0i64; ranges.len()];
            let mut seen = BTreeSet::new();
            loop {
                let x = e.combine(&digits);
                prop_assert!(span.contains(&x));
                prop_assert!(seen.insert(x));
                let mut i = 0;
                while i < digits.len() {
                    digits[i] += 1;
                    if digits[i] < ranges[i] { break; }
                    digits[i] = 0;
                    i += 1;
                }
                if i == digits.len() { break; }
            }
            prop_assert_eq!(seen.len(), span.len());

            // reduce returns the least coset element
            for v in all_elements(&moduli) {
                let r = e.reduce(&v);
                let least = span
                    .iter()
                    .map(|s| v.iter().zip(s).zip(&moduli).map(|((&a, &b), &m)| (a - b).rem_euclid(m)).collect::<Residues>())
                    .min()
                    .unwrap();
                prop_assert_eq!(&r, &least);
                prop_assert_eq!(e.contains(&v), span.contains(&v));
            }
        }
    }
}
