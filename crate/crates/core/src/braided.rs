//! Skeletal braided 2-groups: abelian 3-cocycles `(A, H, h, c)`.
//!
//! Hexagon convention, for all `a, b, x` in `A`:
//!
//! ```text
//! c(a+b, x) = c(a,x) + c(b,x) + h(a,b,x) - h(a,x,b) + h(x,a,b)
//! c(a, b+x) = c(a,b) + c(a,x) - h(a,b,x) + h(b,a,x) - h(b,x,a)
//! ```
//!
//! The braided monoidal functor `(id, id, k)` carries `(h, c)` to
//! `(h - dk, c + k - k o tau)`.

use crate::cochain::{differential, Cochain};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::module::{FinAbModule, GAction};
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianThreeCocycle {
    pi0: FinAbModule,
    pi1: FinAbModule,
    associator: Cochain,
    braiding: Cochain,
    /// trivial action of `(A, +)` on `H`, for differentials of cochains on `A`
    coefficients: GAction,
}

impl AbelianThreeCocycle {
    /// Checks shapes only; see [`validate_ab3`] for the cocycle conditions.
    pub fn new(pi0: FinAbModule, pi1: FinAbModule, associator: Cochain, braiding: Cochain) -> Result<Self> {
        for (name, f, degree) in [("associator", &associator, 3), ("braiding", &braiding, 2)] {
            if f.degree() != degree || f.base_order() != pi0.order() || f.module() != &pi1 {
                return Err(Error::Shape(format!(
                    "{name} must be a degree-{degree} cochain on A = {:?} valued in H = {:?}; got degree {} over {} elements into {:?}",
                    pi0.factors(),
                    pi1.factors(),
                    f.degree(),
                    f.base_order(),
                    f.module().factors()
                )));
            }
        }
        let coefficients = GAction::trivial(pi0.additive_group(), pi1.clone());
        Ok(AbelianThreeCocycle {
            pi0,
            pi1,
            associator,
            braiding,
            coefficients,
        })
    }

    /// `h = 0`, `c = 0`.
    pub fn trivial(pi0: FinAbModule, pi1: FinAbModule) -> Self {
        let n = pi0.order();
        let h = Cochain::zero(3, n, pi1.clone());
        let c = Cochain::zero(2, n, pi1.clone());
        Self::new(pi0, pi1, h, c).expect("zero cochains have the right shape")
    }

    pub fn pi0(&self) -> &FinAbModule {
        &self.pi0
    }

    pub fn pi1(&self) -> &FinAbModule {
        &self.pi1
    }

    pub fn associator(&self) -> &Cochain {
        &self.associator
    }

    pub fn braiding(&self) -> &Cochain {
        &self.braiding
    }

    pub fn additive_group(&self) -> &FiniteGroup {
        self.coefficients.group()
    }

    /// The trivial action of `(A, +)` on `H`.
    pub fn coefficient_action(&self) -> &GAction {
        &self.coefficients
    }

    #[inline]
    pub fn h(&self, a: usize, b: usize, x: usize) -> usize {
        let n = self.pi0.order();
        self.associator.at((a * n + b) * n + x)
    }

    #[inline]
    pub fn c(&self, a: usize, b: usize) -> usize {
        self.braiding.at(a * self.pi0.order() + b)
    }

    pub fn same_shape(&self, other: &AbelianThreeCocycle) -> bool {
        self.pi0 == other.pi0 && self.pi1 == other.pi1
    }
}

/// Normalization, `dh = 0` and both hexagons, each with its first witness.
pub fn validate_ab3(b: &AbelianThreeCocycle) -> ValidationReport {
    let mut report = ValidationReport::new();
    let (a, hm) = (&b.pi0, &b.pi1);
    let n = a.order();
    if let Some(w) = b.associator.normalization_witness() {
        report.fail("normalized", w, "the associator is nonzero on a tuple containing 0".into());
    }
    if let Some(w) = b.braiding.normalization_witness() {
        report.fail("normalized", w, "the braiding is nonzero on a pair containing 0".into());
    }
    let dh = differential(&b.associator, &b.coefficients).expect("shapes checked on construction");
    if let Some((w, v)) = dh.entries().find(|(_, v)| *v != 0) {
        report.fail("cocycle", w, format!("dh = {:?}", hm.residues(v)));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let left = b.c(a.add(x, y), z);
                let right = hm.sum([
                    b.c(x, z),
                    b.c(y, z),
                    b.h(x, y, z),
                    hm.neg(b.h(x, z, y)),
                    b.h(z, x, y),
                ]);
                if left != right {
                    report.fail_once(
                        "hexagon-1",
                        vec![x, y, z],
                        format!("c(a+b,x) = {:?} but the right side is {:?}", hm.residues(left), hm.residues(right)),
                    );
                }
                let left = b.c(x, a.add(y, z));
                let right = hm.sum([
                    b.c(x, y),
                    b.c(x, z),
                    hm.neg(b.h(x, y, z)),
                    b.h(y, x, z),
                    hm.neg(b.h(y, z, x)),
                ]);
                if left != right {
                    report.fail_once(
                        "hexagon-2",
                        vec![x, y, z],
                        format!("c(a,b+x) = {:?} but the right side is {:?}", hm.residues(left), hm.residues(right)),
                    );
                }
            }
        }
    }
    report
}

/// `q(a) = c(a, a)` as a table indexed by elements of `A`.
///
/// Re-verifies `q(m a) = m^2 q(a)` and bi-additivity of `c(a,b) + c(b,a)`.
pub fn quadratic_trace(b: &AbelianThreeCocycle) -> Result<Vec<usize>> {
    validate_ab3(b).into_result("quadratic_trace")?;
    let (a, hm) = (&b.pi0, &b.pi1);
    let n = a.order();
    let q: Vec<usize> = (0..n).map(|x| b.c(x, x)).collect();
    let exp = a.exponent() as i64;
    for x in 0..n {
        for m in 0..=exp {
            if q[a.scale(m, x)] != hm.scale(m * m, q[x]) {
                return Err(Error::Internal(format!("trace is not quadratic: q({m} * {x}) != {m}^2 q({x})")));
            }
        }
    }
    let pairing = |x: usize, y: usize| hm.add(b.c(x, y), b.c(y, x));
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if pairing(a.add(x, y), z) != hm.add(pairing(x, z), pairing(y, z)) {
                    return Err(Error::Internal(format!("polarization is not bi-additive at ({x}, {y}, {z})")));
                }
            }
        }
    }
    Ok(q)
}

/// `A = Z/n` with `c(a,b) = a b t` and `h(a,b,x) = n a floor((b+x)/n) t`,
/// representatives `0..n`.
///
/// Requires `n^2 t = 0` and `2 n t = 0` in `H`.
pub fn standard_cyclic(n: usize, pi1: FinAbModule, t: usize) -> Result<AbelianThreeCocycle> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if t >= pi1.order() {
        return Err(Error::Range {
            what: "element of H",
            index: t,
            bound: pi1.order(),
        });
    }
    let ni = n as i64;
    for (name, m) in [("n^2 t", ni * ni), ("2 n t", 2 * ni)] {
        let v = pi1.scale(m, t);
        if v != 0 {
            return Err(Error::Construction(format!(
                "standard_cyclic({n}, t = {:?}): {name} = {:?} is nonzero in H",
                pi1.residues(t),
                pi1.residues(v)
            )));
        }
    }
    let pi0 = if n == 1 {
        FinAbModule::trivial()
    } else {
        FinAbModule::cyclic(n as u64)?
    };
    let h = Cochain::from_fn(3, n, pi1.clone(), |v| {
        let carry = ((v[1] + v[2]) / n) as i64;
        pi1.scale(ni * v[0] as i64 * carry, t)
    });
    let c = Cochain::from_fn(2, n, pi1.clone(), |v| pi1.scale((v[0] * v[1]) as i64, t));
    AbelianThreeCocycle::new(pi0, pi1, h, c)
}

/// A normalized 2-cochain `k` on `A` with `h' = h - dk` and
/// `c' = c + k - k o tau`, i.e. a braided equivalence `(id, id, k): B -> B'`.
///
/// Exhaustive: the braiding condition fixes `k(b, a)` from `k(a, b)`, so the
/// search runs over the entries with `0 < a <= b`.
pub fn ab3_equivalent(b: &AbelianThreeCocycle, other: &AbelianThreeCocycle) -> Result<Option<Cochain>> {
    if !b.same_shape(other) {
        return Err(Error::Shape(format!(
            "abelian 3-cocycles on ({:?}, {:?}) and ({:?}, {:?})",
            b.pi0.factors(),
            b.pi1.factors(),
            other.pi0.factors(),
            other.pi1.factors()
        )));
    }
    let (a, hm) = (&b.pi0, &b.pi1);
    let n = a.order();
    // k(x,y) - k(y,x) = c'(x,y) - c(x,y)
    let skew = |x: usize, y: usize| hm.sub(other.c(x, y), b.c(x, y));
    if (0..n).any(|x| skew(x, x) != 0) {
        return Ok(None);
    }
    let target = b.associator.sub(&other.associator)?;
    let free: Vec<(usize, usize)> = (1..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
    let m = hm.order();
    let mut digits = vec![0usize; free.len()];
    let mut k = Cochain::zero(2, n, hm.clone());
    loop {
        for (&(x, y), &v) in free.iter().zip(&digits) {
            k.set_at(x * n + y, v);
            if x != y {
                k.set_at(y * n + x, hm.sub(v, skew(x, y)));
            }
        }
        if differential(&k, &b.coefficients)? == target {
            return Ok(Some(k));
        }
        let mut i = 0;
        while i < digits.len() {
            digits[i] += 1;
            if digits[i] < m {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            return Ok(None);
        }
    }
}
