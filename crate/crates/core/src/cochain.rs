//! Dense cochains `G^n -> M` and the inhomogeneous bar differential.
//!
//! The base may be a group or the additive group of a module (for the
//! associator, braiding and the `k`, `theta` data). Tables are indexed by the
//! lexicographic encoding of argument tuples.

use crate::error::{Error, Result};
use crate::group::{decode_tuple, encode_tuple, tuple_count};
use crate::module::{FinAbModule, GAction, ModuleAutomorphism};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    base_order: usize,
    module: FinAbModule,
    values: Vec<usize>,
}

impl Cochain {
    pub fn zero(degree: usize, base_order: usize, module: FinAbModule) -> Self {
        let len = tuple_count(base_order, degree);
        Cochain {
            degree,
            base_order,
            module,
            values: vec![0; len],
        }
    }

    pub fn from_fn(
        degree: usize,
        base_order: usize,
        module: FinAbModule,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Self {
        let len = tuple_count(base_order, degree);
        let mut tuple = vec![0; degree];
        let values = (0..len)
            .map(|i| {
                decode_tuple(i, base_order, &mut tuple);
                f(&tuple)
            })
            .collect();
        Cochain {
            degree,
            base_order,
            module,
            values,
        }
    }

    /// Builds a cochain from a full value table (element indices).
    pub fn from_values(degree: usize, base_order: usize, module: FinAbModule, values: Vec<usize>) -> Result<Self> {
        if values.len() != tuple_count(base_order, degree) {
            return Err(Error::Shape(format!(
                "a degree-{degree} table over {base_order} elements has {} entries, got {}",
                tuple_count(base_order, degree),
                values.len()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= module.order()) {
            return Err(Error::Range {
                what: "module element",
                index: v,
                bound: module.order(),
            });
        }
        Ok(Cochain {
            degree,
            base_order,
            module,
            values,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_order(&self) -> usize {
        self.base_order
    }

    pub fn module(&self) -> &FinAbModule {
        &self.module
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, tuple: &[usize]) -> usize {
        self.values[encode_tuple(tuple, self.base_order)]
    }

    #[inline]
    pub fn at(&self, index: usize) -> usize {
        self.values[index]
    }

    pub fn set(&mut self, tuple: &[usize], value: usize) {
        let i = encode_tuple(tuple, self.base_order);
        self.values[i] = value;
    }

    pub fn set_at(&mut self, index: usize, value: usize) {
        self.values[index] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Iterates `(tuple, value)` pairs in table order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, usize)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| {
            let mut t = vec![0; self.degree];
            decode_tuple(i, self.base_order, &mut t);
            (t, v)
        })
    }

    /// True when the value on every tuple containing the identity (index 0) is zero.
    pub fn is_normalized(&self) -> bool {
        self.normalization_witness().is_none()
    }

    pub fn normalization_witness(&self) -> Option<Vec<usize>> {
        let mut t = vec![0; self.degree];
        for (idx, &v) in self.values.iter().enumerate() {
            if v != 0 {
                decode_tuple(idx, self.base_order, &mut t);
                if t.contains(&0) {
                    return Some(t);
                }
            }
        }
        None
    }

    fn check_same_shape(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || self.base_order != other.base_order || self.module != other.module {
            return Err(Error::Shape(format!(
                "cochains of degree {} over {} elements into {:?} and degree {} over {} elements into {:?}",
                self.degree,
                self.base_order,
                self.module.factors(),
                other.degree,
                other.base_order,
                other.module.factors()
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Cochain, op: impl Fn(usize, usize) -> usize) -> Result<Cochain> {
        self.check_same_shape(other)?;
        Ok(Cochain {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, |a, b| self.module.add(a, b))
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, |a, b| self.module.sub(a, b))
    }

    pub fn neg(&self) -> Cochain {
        self.map(|v| self.module.neg(v))
    }

    pub fn scale(&self, k: i64) -> Cochain {
        self.map(|v| self.module.scale(k, v))
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> Cochain {
        Cochain {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// Post-composition with a coefficient automorphism, `psi o f`.
    pub fn post_compose(&self, psi: &ModuleAutomorphism) -> Cochain {
        let t = psi.table(&self.module);
        self.map(|v| t[v])
    }

    /// Precomposition with a map of base elements applied to every argument,
    /// `f o (phi x ... x phi)`.
    pub fn pull_back(&self, base_map: &[usize]) -> Cochain {
        Cochain::from_fn(self.degree, self.base_order, self.module.clone(), |t| {
            let mapped: Vec<usize> = t.iter().map(|&x| base_map[x]).collect();
            self.get(&mapped)
        })
    }

    /// Swaps the two arguments of a 2-cochain.
    pub fn transpose(&self) -> Result<Cochain> {
        if self.degree != 2 {
            return Err(Error::Shape(format!("transpose needs degree 2, got {}", self.degree)));
        }
        Ok(Cochain::from_fn(2, self.base_order, self.module.clone(), |t| {
            self.get(&[t[1], t[0]])
        }))
    }
}

fn check_action(f: &Cochain, action: &GAction) -> Result<()> {
    if action.group().order() != f.base_order {
        return Err(Error::Shape(format!(
            "cochain is over {} elements but the action is by a group of order {}",
            f.base_order,
            action.group().order()
        )));
    }
    if action.module() != &f.module {
        return Err(Error::Shape(format!(
            "cochain coefficients {:?} differ from the acted-on module {:?}",
            f.module.factors(),
            action.module().factors()
        )));
    }
    Ok(())
}

/// Bar differential:
/// `(df)(g1..g_{n+1}) = g1 |> f(g2..g_{n+1}) + sum_i (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{n+1} f(g1..g_n)`.
pub fn differential(f: &Cochain, action: &GAction) -> Result<Cochain> {
    check_action(f, action)?;
    let n = f.degree;
    let g = action.group();
    let m = &f.module;
    let base = f.base_order;
    let pw: Vec<usize> = (0..=n + 1).map(|k| base.pow(k as u32)).collect();
    let len = pw[n + 1];
    // tuples in lexicographic order; prefix[i] indexes t[..i], suffix[i] indexes t[i..]
    let mut t = vec![0; n + 1];
    let mut prefix = vec![0; n + 2];
    let mut suffix = vec![0; n + 2];
    let mut values = Vec::with_capacity(len);
    for idx in 0..len {
        if idx > 0 {
            let mut i = n;
            while t[i] + 1 == base {
                t[i] = 0;
                i -= 1;
            }
            t[i] += 1;
        }
        for i in 0..=n {
            prefix[i + 1] = prefix[i] * base + t[i];
        }
        for i in (0..=n).rev() {
            suffix[i] = t[i] * pw[n - i] + suffix[i + 1];
        }
        let mut acc = action.apply(t[0], f.values[suffix[1]]);
        for i in 0..n {
            let merged = prefix[i] * pw[n - i] + g.mul(t[i], t[i + 1]) * pw[n - i - 1] + suffix[i + 2];
            let v = f.values[merged];
            acc = if i % 2 == 0 { m.sub(acc, v) } else { m.add(acc, v) };
        }
        let last = f.values[prefix[n]];
        values.push(if n.is_multiple_of(2) { m.sub(acc, last) } else { m.add(acc, last) });
    }
    Ok(Cochain {
        degree: n + 1,
        base_order: base,
        module: m.clone(),
        values,
    })
}

/// First tuple on which `df` is nonzero, or `None` for a cocycle.
pub fn cocycle_witness(f: &Cochain, action: &GAction) -> Result<Option<Vec<usize>>> {
    let df = differential(f, action)?;
    Ok(df.values.iter().position(|&v| v != 0).map(|idx| {
        let mut t = vec![0; df.degree];
        decode_tuple(idx, df.base_order, &mut t);
        t
    }))
}

pub fn is_cocycle(f: &Cochain, action: &GAction) -> Result<bool> {
    Ok(cocycle_witness(f, action)?.is_none())
}

/// `f + d(lambda)`.
pub fn shift_by_coboundary(f: &Cochain, lambda: &Cochain, action: &GAction) -> Result<Cochain> {
    if lambda.degree + 1 != f.degree {
        return Err(Error::Shape(format!(
            "cannot shift a degree-{} cochain by the differential of a degree-{} cochain",
            f.degree, lambda.degree
        )));
    }
    check_action(f, action)?;
    f.add(&differential(lambda, action)?)
}
