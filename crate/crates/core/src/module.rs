//! Finite abelian groups `Z/m1 + ... + Z/mr` and group actions on them.
//!
//! An element is a residue tuple; internally every element is also addressed
//! by its lexicographic index (first factor most significant), which is the
//! ordering used for every cochain table.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::report::ValidationReport;

/// Modules up to this order carry addition and negation tables.
const TABLE_ORDER: usize = 64;

#[derive(Clone)]
pub struct FinAbModule {
    factors: Vec<u64>,
    order: usize,
    /// `x + y` at `x * order + y`, then `-x` at `order^2 + x`
    tables: Option<Arc<Vec<u16>>>,
}

impl PartialEq for FinAbModule {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for FinAbModule {}

impl std::hash::Hash for FinAbModule {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.factors.hash(state);
    }
}

impl std::fmt::Debug for FinAbModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinAbModule").field("factors", &self.factors).finish()
    }
}

impl FinAbModule {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&m) = factors.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidModule(format!("cyclic factor Z/{m} is not allowed")));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m as usize))
            .filter(|&o| o <= u32::MAX as usize)
            .ok_or_else(|| Error::InvalidModule("module too large".into()))?;
        let mut m = FinAbModule {
            factors,
            order,
            tables: None,
        };
        if m.rank() > 1 && order <= TABLE_ORDER {
            let mut t = Vec::with_capacity(order * order + order);
            for x in 0..order {
                for y in 0..order {
                    t.push(m.combine(x, y, |a, b| a + b) as u16);
                }
            }
            for x in 0..order {
                t.push(m.combine(0, x, |a, b| a - b) as u16);
            }
            m.tables = Some(Arc::new(t));
        }
        Ok(m)
    }

    pub fn cyclic(m: u64) -> Result<Self> {
        Self::new(vec![m])
    }

    pub fn trivial() -> Self {
        FinAbModule {
            factors: Vec::new(),
            order: 1,
            tables: None,
        }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |e, &m| num_integer::lcm(e, m))
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Index of a residue tuple; residues are reduced first (negatives allowed).
    pub fn elem(&self, residues: &[i64]) -> Result<usize> {
        if residues.len() != self.rank() {
            return Err(Error::Shape(format!(
                "element has {} residues, module rank is {}",
                residues.len(),
                self.rank()
            )));
        }
        Ok(self.encode(residues))
    }

    #[inline]
    pub fn encode(&self, residues: &[i64]) -> usize {
        let mut idx = 0usize;
        for (&r, &m) in residues.iter().zip(&self.factors) {
            idx = idx * m as usize + r.rem_euclid(m as i64) as usize;
        }
        idx
    }

    /// Residue tuple of an element index.
    pub fn residues(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0i64; self.rank()];
        for (slot, &m) in out.iter_mut().zip(&self.factors).rev() {
            *slot = (idx % m as usize) as i64;
            idx /= m as usize;
        }
        out
    }

    #[inline]
    fn decode_into(&self, mut idx: usize, out: &mut [i64; MAX_INLINE_RANK]) {
        for i in (0..self.factors.len()).rev() {
            let m = self.factors[i] as usize;
            out[i] = (idx % m) as i64;
            idx /= m;
        }
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        if self.factors.len() == 1 {
            let m = self.order;
            let s = x + y;
            return if s >= m { s - m } else { s };
        }
        if let Some(t) = &self.tables {
            return t[x * self.order + y] as usize;
        }
        self.combine(x, y, |a, b| a + b)
    }

    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        if self.factors.len() == 1 {
            let m = self.order;
            return if x >= y { x - y } else { x + m - y };
        }
        if let Some(t) = &self.tables {
            let o = self.order;
            return t[x * o + t[o * o + y] as usize] as usize;
        }
        self.combine(x, y, |a, b| a - b)
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.sub(0, x)
    }

    pub fn scale(&self, k: i64, x: usize) -> usize {
        if self.factors.len() == 1 {
            let m = self.order as i64;
            return ((k.rem_euclid(m) as i128 * x as i128) % m as i128) as usize;
        }
        let r: Vec<i64> = self
            .residues(x)
            .iter()
            .zip(&self.factors)
            .map(|(&a, &m)| ((k.rem_euclid(m as i64) as i128 * a as i128) % m as i128) as i64)
            .collect();
        self.encode(&r)
    }

    pub fn sum<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    #[inline]
    fn combine(&self, x: usize, y: usize, op: impl Fn(i64, i64) -> i64) -> usize {
        if self.factors.len() > MAX_INLINE_RANK {
            let a = self.residues(x);
            let b = self.residues(y);
            let r: Vec<i64> = a.iter().zip(&b).map(|(&p, &q)| op(p, q)).collect();
            return self.encode(&r);
        }
        let mut a = [0i64; MAX_INLINE_RANK];
        let mut b = [0i64; MAX_INLINE_RANK];
        self.decode_into(x, &mut a);
        self.decode_into(y, &mut b);
        let mut idx = 0usize;
        for (i, &m) in self.factors.iter().enumerate() {
            idx = idx * m as usize + op(a[i], b[i]).rem_euclid(m as i64) as usize;
        }
        idx
    }

    /// Additive order of an element.
    pub fn element_order(&self, x: usize) -> u64 {
        self.residues(x)
            .iter()
            .zip(&self.factors)
            .fold(1, |acc, (&r, &m)| num_integer::lcm(acc, m / num_integer::gcd(r as u64, m)))
    }

    /// The additive group of the module as a multiplication table, with the
    /// same element indices.
    pub fn additive_group(&self) -> FiniteGroup {
        let n = self.order;
        let table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| self.add(x, y)).collect()).collect();
        FiniteGroup::from_table(&table).expect("additive group of a module satisfies the axioms")
    }
}

const MAX_INLINE_RANK: usize = 8;

/// An endomorphism of a [`FinAbModule`] given by an integer matrix acting on
/// residue columns. It is an automorphism once [`ModuleAutomorphism::check`] passes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleAutomorphism {
    matrix: Vec<Vec<i64>>,
}

impl ModuleAutomorphism {
    pub fn new(matrix: Vec<Vec<i64>>) -> Self {
        ModuleAutomorphism { matrix }
    }

    pub fn identity(module: &FinAbModule) -> Self {
        let r = module.rank();
        Self::new((0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect())
    }

    pub fn scalar(module: &FinAbModule, k: i64) -> Self {
        let r = module.rank();
        Self::new((0..r).map(|i| (0..r).map(|j| if i == j { k } else { 0 }).collect()).collect())
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    fn check_shape(&self, module: &FinAbModule) -> Result<()> {
        let r = module.rank();
        if self.matrix.len() != r || self.matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Shape(format!("automorphism matrix must be {r}x{r}")));
        }
        Ok(())
    }

    /// Well-definedness: entry (i, j) times m_j vanishes mod m_i.
    pub fn is_well_defined(&self, module: &FinAbModule) -> bool {
        let f = module.factors();
        self.matrix.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &a)| (a as i128 * f[j] as i128).rem_euclid(f[i] as i128) == 0)
        })
    }

    pub fn apply(&self, module: &FinAbModule, x: usize) -> usize {
        let v = module.residues(x);
        let out: Vec<i64> = self
            .matrix
            .iter()
            .zip(module.factors())
            .map(|(row, &m)| {
                let s: i128 = row.iter().zip(&v).map(|(&a, &b)| a as i128 * b as i128).sum();
                s.rem_euclid(m as i128) as i64
            })
            .collect();
        module.encode(&out)
    }

    /// Image table `x -> self(x)` over every element.
    pub fn table(&self, module: &FinAbModule) -> Vec<usize> {
        (0..module.order()).map(|x| self.apply(module, x)).collect()
    }

    /// Reads the matrix back off an additive map given as an element table.
    pub fn from_table(module: &FinAbModule, table: &[usize]) -> Self {
        let r = module.rank();
        let columns: Vec<Vec<i64>> = (0..r)
            .map(|j| {
                let mut e = vec![0i64; r];
                e[j] = 1;
                module.residues(table[module.encode(&e)])
            })
            .collect();
        Self::new((0..r).map(|i| (0..r).map(|j| columns[j][i]).collect()).collect())
    }

    pub fn compose(&self, module: &FinAbModule, inner: &ModuleAutomorphism) -> Self {
        let outer = self.table(module);
        let inner = inner.table(module);
        Self::from_table(module, &inner.iter().map(|&x| outer[x]).collect::<Vec<_>>())
    }

    /// Shape, well-definedness and bijectivity.
    pub fn check(&self, module: &FinAbModule) -> Result<()> {
        self.check_shape(module)?;
        if !self.is_well_defined(module) {
            return Err(Error::InvalidModule(format!(
                "matrix {:?} does not respect the factor orders",
                self.matrix
            )));
        }
        if !is_bijection(&self.table(module)) {
            return Err(Error::InvalidModule(format!("matrix {:?} is not invertible", self.matrix)));
        }
        Ok(())
    }

    /// Inverse automorphism, if the map is bijective.
    pub fn inverse(&self, module: &FinAbModule) -> Option<Self> {
        let t = self.table(module);
        if !is_bijection(&t) {
            return None;
        }
        let mut inv = vec![0; t.len()];
        for (x, &y) in t.iter().enumerate() {
            inv[y] = x;
        }
        Some(Self::from_table(module, &inv))
    }

    /// Every automorphism of `module`, with reduced matrices, in the order of
    /// the images of the standard generators.
    pub fn all(module: &FinAbModule) -> Vec<Self> {
        let r = module.rank();
        let f = module.factors();
        // images allowed for generator j: elements whose order divides m_j
        let choices: Vec<Vec<usize>> = (0..r)
            .map(|j| (0..module.order()).filter(|&x| f[j].is_multiple_of(module.element_order(x))).collect())
            .collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; r];
        loop {
            if choices.iter().all(|c| !c.is_empty()) {
                let cols: Vec<Vec<i64>> = (0..r).map(|j| module.residues(choices[j][pick[j]])).collect();
                let m = Self::new((0..r).map(|i| (0..r).map(|j| cols[j][i]).collect()).collect());
                if is_bijection(&m.table(module)) {
                    out.push(m);
                }
            }
            let mut j = r;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                pick[j] += 1;
                if pick[j] < choices[j].len() {
                    break;
                }
                pick[j] = 0;
            }
        }
    }

    /// Canonical matrix: entries reduced into `0..m_i` by row.
    pub fn reduced(&self, module: &FinAbModule) -> Self {
        Self::new(
            self.matrix
                .iter()
                .zip(module.factors())
                .map(|(row, &m)| row.iter().map(|&a| a.rem_euclid(m as i64)).collect())
                .collect(),
        )
    }
}

fn is_bijection(table: &[usize]) -> bool {
    let mut seen = vec![false; table.len()];
    for &y in table {
        if seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

/// A group acting on a finite abelian group, `g |-> act(g)`.
///
/// Construction only checks shapes; the action axioms are checked by
/// [`GAction::validate`], so that invalid actions can still be reported on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GAction {
    group: FiniteGroup,
    module: FinAbModule,
    maps: Vec<ModuleAutomorphism>,
    tables: Vec<Vec<usize>>,
}

impl GAction {
    pub fn new(group: FiniteGroup, module: FinAbModule, maps: Vec<ModuleAutomorphism>) -> Result<Self> {
        if maps.len() != group.order() {
            return Err(Error::Shape(format!(
                "action lists {} automorphisms for a group of order {}",
                maps.len(),
                group.order()
            )));
        }
        for m in &maps {
            m.check_shape(&module)?;
        }
        let maps: Vec<_> = maps.into_iter().map(|m| m.reduced(&module)).collect();
        let tables = maps.iter().map(|m| m.table(&module)).collect();
        Ok(GAction {
            group,
            module,
            maps,
            tables,
        })
    }

    pub fn trivial(group: FiniteGroup, module: FinAbModule) -> Self {
        let id = ModuleAutomorphism::identity(&module);
        let maps = vec![id; group.order()];
        GAction::new(group, module, maps).expect("identity maps have the right shape")
    }

    /// Action through a homomorphism to {+1, -1}: elements mapped to -1 act by negation.
    pub fn by_sign(group: FiniteGroup, module: FinAbModule, negates: impl Fn(usize) -> bool) -> Result<Self> {
        let maps = (0..group.order())
            .map(|g| ModuleAutomorphism::scalar(&module, if negates(g) { -1 } else { 1 }))
            .collect();
        GAction::new(group, module, maps)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn module(&self) -> &FinAbModule {
        &self.module
    }

    pub fn automorphism(&self, g: usize) -> &ModuleAutomorphism {
        &self.maps[g]
    }

    pub fn automorphisms(&self) -> &[ModuleAutomorphism] {
        &self.maps
    }

    /// `g |> x` on element indices, without range checks.
    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.tables[g][x]
    }

    pub fn table(&self, g: usize) -> &[usize] {
        &self.tables[g]
    }

    /// `g |> a` with range checks on both arguments.
    pub fn act(&self, g: usize, a: usize) -> Result<usize> {
        if g >= self.group.order() {
            return Err(Error::Range {
                what: "group element",
                index: g,
                bound: self.group.order(),
            });
        }
        if a >= self.module.order() {
            return Err(Error::Range {
                what: "module element",
                index: a,
                bound: self.module.order(),
            });
        }
        Ok(self.apply(g, a))
    }

    pub fn is_trivial(&self) -> bool {
        self.tables
            .iter()
            .all(|t| t.iter().enumerate().all(|(x, &y)| x == y))
    }

    /// Checks well-definedness, invertibility, unitality and the homomorphism
    /// law exhaustively.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (g, m) in self.maps.iter().enumerate() {
            if !m.is_well_defined(&self.module) {
                report.fail("well-defined", vec![g], format!("act({g}) does not respect factor orders"));
            } else if !is_bijection(&self.tables[g]) {
                report.fail("invertible", vec![g], format!("act({g}) is not invertible"));
            }
        }
        if self.tables[0].iter().enumerate().any(|(x, &y)| x != y) {
            report.fail("unital", vec![0], "act(identity) is not the identity".to_string());
        }
        let n = self.group.order();
        for g1 in 0..n {
            for g2 in 0..n {
                let g12 = self.group.mul(g1, g2);
                let broken = (0..self.module.order())
                    .any(|x| self.tables[g12][x] != self.tables[g1][self.tables[g2][x]]);
                if broken {
                    report.fail(
                        "homomorphism",
                        vec![g1, g2],
                        format!("act({g1}*{g2}) != act({g1}) o act({g2})"),
                    );
                }
            }
        }
        report
    }
}
