//! Exact cohomology of the bar complex: `H^n(G, M)`, coboundary preimages and
//! class comparison.
//!
//! Cochains are flattened into residue coordinates (tuple-major, then module
//! factor), so lexicographic order on coordinates is lexicographic order on
//! value tables. Kernels and preimages come from the echelon form of the graph
//! `{(d x, x)}`; the structure of `Z/B` comes from a Smith form of a small
//! relation matrix.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::cochain::{differential, Cochain};
use crate::error::{Error, Result};
use crate::group::{decode_tuple, tuple_count};
use crate::linalg::{smith_normal_form, solve_affine, IntegerMatrix, Residues, SubgroupEchelon};
use crate::module::{FinAbModule, GAction};

const ABSENT: usize = usize::MAX;

/// Which tuples of `G^n` carry free coordinates.
#[derive(Debug, Clone)]
pub struct CochainLayout {
    degree: usize,
    base_order: usize,
    module: FinAbModule,
    tuples: Vec<usize>,
    slot_of: Vec<usize>,
}

impl CochainLayout {
    pub fn new(degree: usize, base_order: usize, module: FinAbModule, normalized: bool) -> Self {
        let len = tuple_count(base_order, degree);
        let mut tuples = Vec::new();
        let mut slot_of = vec![ABSENT; len];
        let mut t = vec![0; degree];
        for (idx, slot) in slot_of.iter_mut().enumerate() {
            decode_tuple(idx, base_order, &mut t);
            if normalized && t.contains(&0) {
                continue;
            }
            *slot = tuples.len();
            tuples.push(idx);
        }
        CochainLayout {
            degree,
            base_order,
            module,
            tuples,
            slot_of,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of residue coordinates.
    pub fn dim(&self) -> usize {
        self.tuples.len() * self.module.rank()
    }

    pub fn moduli(&self) -> Vec<i64> {
        let f: Vec<i64> = self.module.factors().iter().map(|&m| m as i64).collect();
        self.tuples.iter().flat_map(|_| f.iter().copied()).collect()
    }

    /// Coordinates of `f`; values outside the layout are ignored.
    pub fn coords(&self, f: &Cochain) -> Residues {
        let mut out = Vec::with_capacity(self.dim());
        for &t in &self.tuples {
            out.extend(self.module.residues(f.at(t)));
        }
        out
    }

    pub fn cochain(&self, coords: &[i64]) -> Cochain {
        let r = self.module.rank();
        let mut f = Cochain::zero(self.degree, self.base_order, self.module.clone());
        for (slot, &t) in self.tuples.iter().enumerate() {
            f.set_at(t, self.module.encode(&coords[slot * r..(slot + 1) * r]));
        }
        f
    }

    /// True when `f` vanishes off the layout.
    pub fn covers(&self, f: &Cochain) -> bool {
        (0..f.len()).all(|i| self.slot_of[i] != ABSENT || f.at(i) == 0)
    }
}

/// Sparse columns of `d: C^m -> C^{m+1}` in layout coordinates.
fn differential_columns(action: &GAction, source: &CochainLayout, target: &CochainLayout) -> Vec<Vec<(usize, i64)>> {
    let g = action.group();
    let module = action.module();
    let r = module.rank();
    let m = source.degree;
    let base = g.order();
    let units: Vec<usize> = (0..r)
        .map(|i| {
            let mut e = vec![0i64; r];
            e[i] = 1;
            module.encode(&e)
        })
        .collect();
    // acted[h][i] = residues of h |> e_i
    let acted: Vec<Vec<Vec<i64>>> = (0..base)
        .map(|h| units.iter().map(|&u| module.residues(action.apply(h, u))).collect())
        .collect();

    let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); source.dim()];
    let mut s = vec![0; m + 1];
    let mut face = vec![0; m];
    for (out_slot, &sidx) in target.tuples.iter().enumerate() {
        decode_tuple(sidx, base, &mut s);
        let row0 = out_slot * r;
        let slot_of = |t: &[usize]| source.slot_of[crate::group::encode_tuple(t, base)];

        let first = slot_of(&s[1..]);
        if first != ABSENT {
            for (i, img) in acted[s[0]].iter().enumerate() {
                for (j, &c) in img.iter().enumerate() {
                    if c != 0 {
                        cols[first * r + i].push((row0 + j, c));
                    }
                }
            }
        }
        for i in 0..m {
            face[..i].copy_from_slice(&s[..i]);
            face[i] = g.mul(s[i], s[i + 1]);
            face[i + 1..].copy_from_slice(&s[i + 2..]);
            let slot = slot_of(&face);
            if slot != ABSENT {
                let sign = if i % 2 == 0 { -1 } else { 1 };
                for k in 0..r {
                    cols[slot * r + k].push((row0 + k, sign));
                }
            }
        }
        let last = slot_of(&s[..m]);
        if last != ABSENT {
            let sign = if m.is_multiple_of(2) { -1 } else { 1 };
            for k in 0..r {
                cols[last * r + k].push((row0 + k, sign));
            }
        }
    }
    cols
}

/// Echelon form of the graph `{(d x, x)}` of `d: C^m -> C^{m+1}`, target coordinates first.
fn graph_echelon(action: &GAction, source: &CochainLayout, target: &CochainLayout) -> SubgroupEchelon {
    let cols = differential_columns(action, source, target);
    let (t, s) = (target.dim(), source.dim());
    let mut moduli = target.moduli();
    moduli.extend(source.moduli());
    let gens = cols
        .into_iter()
        .enumerate()
        .map(|(c, col)| {
            let mut v = vec![0i64; t + s];
            for (row, x) in col {
                v[row] += x;
            }
            v[t + c] = 1;
            v
        })
        .collect();
    SubgroupEchelon::new(moduli, gens)
}

fn check_degree(f: &Cochain, action: &GAction) -> Result<()> {
    if f.base_order() != action.group().order() || f.module() != action.module() {
        return Err(Error::Shape(format!(
            "cochain over {} elements into {:?} does not match an action of a group of order {} on {:?}",
            f.base_order(),
            f.module().factors(),
            action.group().order(),
            action.module().factors()
        )));
    }
    Ok(())
}

/// Decides membership in `B^n = d(C^{n-1})` and produces preimages.
///
/// Built once per (action, degree, normalization) and reusable.
#[derive(Debug, Clone)]
pub struct CoboundarySolver {
    source: CochainLayout,
    target: CochainLayout,
    graph: SubgroupEchelon,
}

impl CoboundarySolver {
    pub fn new(action: &GAction, degree: usize, normalized: bool) -> Result<Self> {
        if degree == 0 {
            return Err(Error::UnsupportedDegree(0));
        }
        let n = action.group().order();
        let module = action.module().clone();
        let source = CochainLayout::new(degree - 1, n, module.clone(), normalized);
        let target = CochainLayout::new(degree, n, module, normalized);
        let graph = graph_echelon(action, &source, &target);
        Ok(CoboundarySolver { source, target, graph })
    }

    pub fn degree(&self) -> usize {
        self.target.degree
    }

    /// Number of coboundaries.
    pub fn image_order(&self) -> u128 {
        SubgroupEchelon::new(self.target.moduli(), self.image_generators()).order()
    }

    fn image_generators(&self) -> Vec<Residues> {
        let t = self.target.dim();
        self.graph
            .generators_before(t)
            .into_iter()
            .map(|mut p| {
                p.truncate(t);
                p
            })
            .collect()
    }

    /// Lexicographically least cochain in `f + B^n`.
    pub fn reduce(&self, f: &Cochain) -> Cochain {
        let t = self.target.dim();
        let mut v = self.target.coords(f);
        v.resize(t + self.source.dim(), 0);
        let r = self.graph.reduce_prefix(&v, t);
        self.target.cochain(&r[..t])
    }

    /// `Some(lambda)` with `d lambda = f`, the lexicographically least such, or `None`.
    pub fn solve(&self, f: &Cochain, action: &GAction) -> Result<Option<Cochain>> {
        check_degree(f, action)?;
        if f.degree() != self.target.degree {
            return Err(Error::Shape(format!(
                "solver for degree {} given a degree-{} cochain",
                self.target.degree,
                f.degree()
            )));
        }
        if !self.target.covers(f) {
            return Ok(None);
        }
        let (t, s) = (self.target.dim(), self.source.dim());
        let mut v = self.target.coords(f);
        v.resize(t + s, 0);
        let r = self.graph.reduce_prefix(&v, t);
        if r[..t].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        // v - r lies in the graph: (f, -tail) = (d x, x) with x = -tail
        let mut x = vec![0i64; t + s];
        for (k, m) in self.graph.moduli()[t..].iter().enumerate() {
            x[t + k] = (-r[t + k]).rem_euclid(*m);
        }
        // canonical preimage: least element of x + ker d
        let x = self.graph.reduce_cols(&x, t..t + s);
        let lambda = self.source.cochain(&x[t..]);
        if differential(&lambda, action)? != *f {
            return Err(Error::Internal("coboundary preimage failed verification".into()));
        }
        Ok(Some(lambda))
    }
}

/// `H^n(G, M)` as a list of cyclic factors with one representative cocycle each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub factors: Vec<u64>,
    pub representatives: Vec<Cochain>,
}

impl CohomologyGroup {
    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Kernel of `d: C^n -> C^{n+1}` restricted to the coordinates `cols` of
/// `source`, as an echelon form in those coordinates.
fn restricted_kernel(action: &GAction, source: &CochainLayout, cols: &[usize]) -> SubgroupEchelon {
    let target = CochainLayout::new(source.degree + 1, action.group().order(), action.module().clone(), true);
    let columns = differential_columns(action, source, &target);
    let t = target.dim();
    let source_moduli = source.moduli();
    let sub_moduli: Vec<i64> = cols.iter().map(|&c| source_moduli[c]).collect();
    let mut moduli = target.moduli();
    moduli.extend(&sub_moduli);
    let gens = cols
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let mut v = vec![0i64; t + cols.len()];
            for &(row, x) in &columns[c] {
                v[row] += x;
            }
            v[t + k] = 1;
            v
        })
        .collect();
    let graph = SubgroupEchelon::new(moduli, gens);
    let kernel = graph.generators_from(t).into_iter().map(|p| p[t..].to_vec()).collect();
    SubgroupEchelon::new(sub_moduli, kernel)
}

/// Structure of `H^n(G, M)` from the normalized bar complex, `n >= 1`.
pub fn cohomology_group(action: &GAction, n: usize) -> Result<CohomologyGroup> {
    if n == 0 {
        return Err(Error::UnsupportedDegree(0));
    }
    action.validate().into_result("cohomology_group")?;
    let solver = CoboundarySolver::new(action, n, true)?;
    let layout = &solver.target;
    let full_moduli = layout.moduli();
    let all_boundaries = SubgroupEchelon::new(full_moduli.clone(), solver.image_generators());

    // Every cocycle is congruent mod B to one supported on W, the coordinates
    // without a unit pivot in B, so H = (Z n W) / (B n W).
    let (outside, w_cols): (Vec<usize>, Vec<usize>) =
        (0..full_moduli.len()).partition(|&c| all_boundaries.step_at(c) == 1);
    let moduli: Vec<i64> = w_cols.iter().map(|&c| full_moduli[c]).collect();
    let boundaries = {
        let order: Vec<usize> = outside.iter().chain(&w_cols).copied().collect();
        let permuted = SubgroupEchelon::new(
            order.iter().map(|&c| full_moduli[c]).collect(),
            all_boundaries
                .pivot_vectors()
                .map(|b| order.iter().map(|&c| b[c]).collect())
                .collect(),
        );
        let inside = permuted
            .generators_from(outside.len())
            .into_iter()
            .map(|b| b[outside.len()..].to_vec())
            .collect();
        SubgroupEchelon::new(moduli.clone(), inside)
    };
    let cocycles = restricted_kernel(action, layout, &w_cols);

    // Columns where the cocycle step is finer than the coboundary step carry
    // generators of Z/B; all other cocycle pivots are absorbed by B.
    let gens: Vec<Residues> = (0..moduli.len())
        .filter(|&col| cocycles.step_at(col) < boundaries.step_at(col))
        .filter_map(|col| cocycles.pivot_at(col).map(|(z, _)| z))
        .collect();
    // |Z/B| as a product of per-column step ratios (the raw orders overflow)
    let quotient_order: u128 = (0..moduli.len())
        .map(|col| (boundaries.step_at(col) / cocycles.step_at(col)) as u128)
        .product();

    let s = gens.len();
    if s == 0 {
        debug_assert_eq!(quotient_order, 1);
        return Ok(CohomologyGroup {
            degree: n,
            factors: Vec::new(),
            representatives: Vec::new(),
        });
    }
    // relations among the generators modulo B: kernel of Z^s -> C^n / B
    let exp = action.module().exponent() as i64;
    let len = moduli.len();
    let mut rel_moduli = moduli.clone();
    rel_moduli.extend(std::iter::repeat_n(exp, s));
    let mut rel_gens: Vec<Residues> = gens
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let mut v = z.clone();
            v.resize(len + s, 0);
            v[len + i] = 1;
            v
        })
        .collect();
    rel_gens.extend(boundaries.pivot_vectors().map(|b| {
        let mut v = b;
        v.resize(len + s, 0);
        v
    }));
    let rel = SubgroupEchelon::new(rel_moduli, rel_gens);
    let mut rows: Vec<Vec<BigInt>> = rel
        .generators_from(len)
        .into_iter()
        .map(|p| p[len..].iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    for i in 0..s {
        let mut row = vec![BigInt::zero(); s];
        row[i] = BigInt::from(exp);
        rows.push(row);
    }
    let snf = smith_normal_form(&IntegerMatrix::from_rows(&rows));

    let mut factors = Vec::new();
    let mut representatives = Vec::new();
    for i in 0..s {
        let d = snf.d[(i, i)].to_u64().ok_or_else(|| Error::Internal("invariant factor overflow".into()))?;
        if d <= 1 {
            continue;
        }
        // generator of this factor: row i of v, in terms of the z's
        let mut v = vec![0i64; len];
        for (j, z) in gens.iter().enumerate() {
            let c = (&snf.v[(i, j)] % BigInt::from(exp)).to_i64().unwrap_or(0);
            if c == 0 {
                continue;
            }
            for (k, (&zk, &m)) in z.iter().zip(&moduli).enumerate() {
                v[k] = ((v[k] as i128 + c as i128 * zk as i128).rem_euclid(m as i128)) as i64;
            }
        }
        let mut lifted = vec![0i64; full_moduli.len()];
        for (&c, &x) in w_cols.iter().zip(&v) {
            lifted[c] = x;
        }
        let v = all_boundaries.reduce(&lifted);
        factors.push(d);
        representatives.push(layout.cochain(&v));
    }
    let product: u128 = factors.iter().map(|&d| d as u128).product();
    if product != quotient_order {
        return Err(Error::Internal(format!(
            "H^{n}: factors {factors:?} disagree with |Z|/|B| = {quotient_order}"
        )));
    }
    Ok(CohomologyGroup {
        degree: n,
        factors,
        representatives,
    })
}

fn require_cocycle(f: &Cochain, action: &GAction, what: &str) -> Result<()> {
    if let Some(w) = crate::cochain::cocycle_witness(f, action)? {
        return Err(Error::Precondition(format!("{what} is not a cocycle: d f is nonzero at {w:?}")));
    }
    Ok(())
}

/// `Some(lambda)` with `d lambda = f` for a cocycle `f`, else `None`.
///
/// Normalized input is solved in the normalized complex, so the preimage is
/// normalized as well.
pub fn is_coboundary(f: &Cochain, action: &GAction) -> Result<Option<Cochain>> {
    check_degree(f, action)?;
    if f.degree() == 0 {
        return Err(Error::UnsupportedDegree(0));
    }
    require_cocycle(f, action, "is_coboundary input")?;
    let solver = CoboundarySolver::new(action, f.degree(), f.is_normalized())?;
    solver.solve(f, action)
}

/// Whether two cocycles of the same degree define the same class.
pub fn classes_equal(f: &Cochain, other: &Cochain, action: &GAction) -> Result<bool> {
    if f.degree() != other.degree() {
        return Err(Error::Precondition(format!(
            "classes_equal on degrees {} and {}",
            f.degree(),
            other.degree()
        )));
    }
    require_cocycle(f, action, "first class")?;
    require_cocycle(other, action, "second class")?;
    Ok(is_coboundary(&f.sub(other)?, action)?.is_some())
}

/// Every normalized `n`-cocycle, in lexicographic order of value tables;
/// refuses when there are more than `limit`.
pub fn normalized_cocycles(action: &GAction, n: usize, limit: u128) -> Result<Vec<Cochain>> {
    if n == 0 {
        return Err(Error::UnsupportedDegree(0));
    }
    let g = action.group().order();
    let m = action.module();
    let source = CochainLayout::new(n, g, m.clone(), true);
    let target = CochainLayout::new(n + 1, g, m.clone(), true);
    let solutions = solve_affine(source.moduli(), target.moduli(), |x| {
        let f = source.cochain(x);
        target.coords(&differential(&f, action).expect("layout shapes agree"))
    });
    if solutions.count() > limit {
        return Err(Error::ScaleGuard {
            what: format!("normalized {n}-cocycles"),
            estimate: solutions.count(),
            limit,
        });
    }
    Ok(solutions.enumerate().iter().map(|x| source.cochain(x)).collect())
}
