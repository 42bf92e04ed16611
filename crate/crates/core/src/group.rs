//! Finite groups presented by dense multiplication tables.
//!
//! Elements are the indices `0..order`; the identity is always index 0.

use crate::error::{AxiomViolation, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// The cyclic group Z/n with element `i` standing for the residue `i`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        let mult = (0..n * n).map(|ij| (ij / n + ij % n) % n).collect();
        let inv = (0..n).map(|i| (n - i) % n).collect();
        Ok(FiniteGroup { order: n, mult, inv })
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            order: 1,
            mult: vec![0],
            inv: vec![0],
        }
    }

    /// Direct product with the lexicographic encoding `(g1, g2) -> g1 * |G2| + g2`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.order;
        let order = self.order * m;
        let mut mult = vec![0; order * order];
        for x in 0..order {
            for y in 0..order {
                let first = self.mul(x / m, y / m);
                let second = other.mul(x % m, y % m);
                mult[x * order + y] = first * m + second;
            }
        }
        let inv = (0..order)
            .map(|x| self.inv(x / m) * m + other.inv(x % m))
            .collect();
        FiniteGroup { order, mult, inv }
    }

    /// Validates a multiplication table. If the identity is not element 0 the
    /// identity and element 0 swap labels.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidOrder(0));
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != order {
                return Err(Error::Axiom(AxiomViolation::NotSquare {
                    row,
                    len: entries.len(),
                    order,
                }));
            }
            if let Some((col, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= order) {
                return Err(Error::Axiom(AxiomViolation::EntryOutOfRange { row, col, value }));
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or(Error::Axiom(AxiomViolation::NoIdentity))?;

        // relabel so the identity becomes 0
        let relabel = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut mult = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                mult[relabel(a) * order + relabel(b)] = relabel(table[a][b]);
            }
        }

        let mut inv = vec![0; order];
        for a in 0..order {
            let found = (0..order).find(|&b| mult[a * order + b] == 0 && mult[b * order + a] == 0);
            match found {
                Some(b) => inv[a] = b,
                None => {
                    return Err(Error::Axiom(AxiomViolation::NoInverse {
                        element: relabel(a),
                    }))
                }
            }
        }
        let group = FiniteGroup { order, mult, inv };
        if let Some((a, b, c)) = group.associativity_witness() {
            return Err(Error::Axiom(AxiomViolation::NotAssociative {
                a: relabel(a),
                b: relabel(b),
                c: relabel(c),
            }));
        }
        Ok(group)
    }

    fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Product of a sequence of elements, left to right.
    pub fn product(&self, elements: &[usize]) -> usize {
        elements.iter().fold(0, |acc, &g| self.mul(acc, g))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |e, a| num_integer::lcm(e, self.element_order(a)))
    }

    /// Exhaustive axiom check, used by tests and diagnostics.
    pub fn check_axioms(&self) -> Result<()> {
        Self::from_table(&self.table()).map(|_| ())
    }

    /// Searches for an isomorphism `self -> other`, returned as an element map.
    /// Backtracking over images of a generating sequence; fine for small orders.
    pub fn find_isomorphism(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        if self.order != other.order {
            return None;
        }
        let n = self.order;
        let mut orders_self: Vec<usize> = (0..n).map(|a| self.element_order(a)).collect();
        let mut orders_other: Vec<usize> = (0..n).map(|a| other.element_order(a)).collect();
        let by_order_other = orders_other.clone();
        orders_self.sort_unstable();
        orders_other.sort_unstable();
        if orders_self != orders_other {
            return None;
        }

        // greedy generating sequence: add elements not yet in the generated subgroup
        let mut gens = Vec::new();
        let mut span = vec![false; n];
        span[0] = true;
        for g in 0..n {
            if !span[g] {
                gens.push(g);
                span = self.closure(&gens);
            }
        }

        let mut images = Vec::with_capacity(gens.len());
        self.extend_iso(other, &gens, &mut images, &by_order_other)
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut span = vec![false; self.order];
        span[0] = true;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !span[y] {
                    span[y] = true;
                    frontier.push(y);
                }
            }
        }
        span
    }

    fn extend_iso(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        images: &mut Vec<usize>,
        other_orders: &[usize],
    ) -> Option<Vec<usize>> {
        if images.len() == gens.len() {
            return self.induced_map(other, gens, images);
        }
        let g = gens[images.len()];
        let want = self.element_order(g);
        for candidate in 0..other.order {
            if other_orders[candidate] != want {
                continue;
            }
            images.push(candidate);
            if let Some(map) = self.extend_iso(other, gens, images, other_orders) {
                return Some(map);
            }
            images.pop();
        }
        None
    }

    /// Extends generator images to a full map by breadth-first words; returns
    /// it if it is a well-defined bijective homomorphism.
    fn induced_map(&self, other: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let n = self.order;
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = other.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    frontier.push(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let mut seen = vec![false; n];
        for &v in &map {
            if seen[v] {
                return None;
            }
            seen[v] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if map[self.mul(a, b)] != other.mul(map[a], map[b]) {
                    return None;
                }
            }
        }
        Some(map)
    }
}

/// Number of `n`-tuples over a set of `base` elements.
pub fn tuple_count(base: usize, n: usize) -> usize {
    base.pow(n as u32)
}

/// Decodes a lexicographic (first entry most significant) tuple index.
pub fn decode_tuple(mut index: usize, base: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
}

pub fn encode_tuple(tuple: &[usize], base: usize) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * base + x)
}

/// All `n`-tuples in lexicographic order.
pub fn tuples(base: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..tuple_count(base, n)).map(move |i| {
        let mut t = vec![0; n];
        decode_tuple(i, base, &mut t);
        t
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_table() -> Vec<Vec<usize>> {
        // permutations of {0,1,2} in a fixed order, composed as functions
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index([p[q[0]], p[q[1]], p[q[2]]]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn cyclic_groups() {
        let z1 = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(z1.order(), 1);
        assert_eq!(FiniteGroup::cyclic(2).unwrap().table(), vec![vec![0, 1], vec![1, 0]]);
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(z4.inv(3), 1);
        assert_eq!(FiniteGroup::cyclic(0), Err(Error::InvalidOrder(0)));
        for n in 1..=12 {
            let g = FiniteGroup::cyclic(n).unwrap();
            assert!(g.is_abelian());
            g.check_axioms().unwrap();
        }
    }

    #[test]
    fn products() {
        let z1 = FiniteGroup::cyclic(1).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let s3 = FiniteGroup::from_table(&s3_table()).unwrap();
        assert_eq!(z1.direct_product(&s3).table(), s3.table());

        let v4 = z2.direct_product(&z2);
        assert!((0..4).all(|a| v4.mul(a, a) == 0));
        v4.check_axioms().unwrap();

        let z6 = z2.direct_product(&z3);
        assert_eq!(z6.order(), 6);
        assert_eq!(z6.element_order(1 * 3 + 1), 6);
        assert!(z6.find_isomorphism(&FiniteGroup::cyclic(6).unwrap()).is_some());
        assert!(v4.find_isomorphism(&FiniteGroup::cyclic(4).unwrap()).is_none());
    }

    #[test]
    fn table_validation() {
        assert_eq!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap(),
            FiniteGroup::cyclic(2).unwrap()
        );
        assert_eq!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]),
            Err(Error::Axiom(AxiomViolation::NoInverse { element: 1 }))
        );
        let s3 = FiniteGroup::from_table(&s3_table()).unwrap();
        assert!(!s3.is_abelian());
        assert_eq!(
            FiniteGroup::from_table(&[vec![1, 1], vec![1, 1]]),
            Err(Error::Axiom(AxiomViolation::NoIdentity))
        );
        // identity at index 1, inverses exist, but (0*2)*2 != 0*(2*2)
        let g = FiniteGroup::from_table(&[vec![1, 0, 2], vec![0, 1, 2], vec![2, 2, 1]]);
        assert!(g.is_err());
        let swapped = FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(swapped, FiniteGroup::cyclic(2).unwrap());
    }

    #[test]
    fn non_associative_witness() {
        // a loop with identity and inverses that is not associative
        let table = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table(&table) {
            Err(Error::Axiom(AxiomViolation::NotAssociative { a, b, c })) => {
                let t = &table;
                assert_ne!(t[t[a][b]][c], t[a][t[b][c]]);
            }
            other => panic!("expected associativity failure, got {other:?}"),
        }
    }

    #[test]
    fn tuple_encoding() {
        let mut t = [0; 3];
        decode_tuple(encode_tuple(&[2, 0, 1], 3), 3, &mut t);
        assert_eq!(t, [2, 0, 1]);
        let all: Vec<_> = tuples(2, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
