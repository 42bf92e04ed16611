//! The Pontryagin-square obstruction `pi` in `Z^4(G, H)`, the lifting decision
//! and torsor report, and extensions of `G` by `A` with a section.

use crate::action::BraidedActionData;
use crate::braided::AbelianThreeCocycle;
use crate::cochain::{cocycle_witness, differential, Cochain};
use crate::cohomology::{cohomology_group, CoboundarySolver};
use crate::error::{AxiomViolation, Error, Result};
use crate::group::FiniteGroup;
use crate::module::GAction;
use crate::report::ValidationReport;

fn check_shapes(d: &BraidedActionData, omega: &Cochain, upsilon: Option<&Cochain>) -> Result<()> {
    let n = d.group().order();
    let (a, hm) = (d.braided().pi0(), d.braided().pi1());
    let mut problems = Vec::new();
    if omega.degree() != 2 || omega.base_order() != n || omega.module() != a {
        problems.push(format!(
            "omega must be a 2-cochain on G (order {n}) valued in A = {:?}; got degree {} over {} elements into {:?}",
            a.factors(),
            omega.degree(),
            omega.base_order(),
            omega.module().factors()
        ));
    }
    if let Some(u) = upsilon {
        if u.degree() != 3 || u.base_order() != n || u.module() != hm {
            problems.push(format!(
                "upsilon must be a 3-cochain on G valued in H = {:?}; got degree {} over {} elements into {:?}",
                hm.factors(),
                u.degree(),
                u.base_order(),
                u.module().factors()
            ));
        }
    }
    if !problems.is_empty() {
        return Err(Error::Shape(problems.join("; ")));
    }
    Ok(())
}

fn check_omega(d: &BraidedActionData, omega: &Cochain, report: &mut ValidationReport) -> Result<()> {
    if let Some(w) = omega.normalization_witness() {
        report.fail("omega-normalized", w, "omega is nonzero on a pair containing the identity".into());
    }
    if let Some(w) = cocycle_witness(omega, d.phi())? {
        report.fail("omega-cocycle", w, "d omega is nonzero".into());
    }
    Ok(())
}

/// Consolidated compatibility check of `(D, omega, upsilon)`.
fn preflight(d: &BraidedActionData, omega: &Cochain, upsilon: Option<&Cochain>) -> Result<()> {
    check_shapes(d, omega, upsilon)?;
    let mut report = validate_action_data_report(d);
    check_omega(d, omega, &mut report)?;
    report.into_result("pontryagin_square")
}

fn validate_action_data_report(d: &BraidedActionData) -> ValidationReport {
    let mut report = crate::braided::validate_ab3(d.braided());
    report.merge(crate::action::validate_action_data(d));
    report
}

/// Term-by-term evaluation of `pi`.
///
/// The theta term enters as `-theta_{g1,g2}(omega(g3,g4))`, matching
/// `d theta_{g1,g2} = k_{g1 g2} - k_{g1} o phi_{g2}^2 - psi_{g1} o k_{g2}`.
fn evaluate(d: &BraidedActionData, omega: &Cochain) -> Cochain {
    let g = d.group();
    let b = d.braided();
    let (a, hm) = (b.pi0(), b.pi1());
    let phi = d.phi();
    let n = g.order();
    let w = |x: usize, y: usize| omega.at(x * n + y);
    let act = |x: usize, v: usize| phi.apply(x, v);
    Cochain::from_fn(4, n, hm.clone(), |t| {
        let (g1, g2, g3, g4) = (t[0], t[1], t[2], t[3]);
        let g12 = g.mul(g1, g2);
        let g23 = g.mul(g2, g3);
        let g34 = g.mul(g3, g4);
        let g123 = g.mul(g12, g3);
        let g234 = g.mul(g2, g34);
        let (w12, w23, w34) = (w(g1, g2), w(g2, g3), w(g3, g4));
        let moved34 = act(g12, w34);
        let terms = [
            b.c(w12, moved34),
            b.h(moved34, w12, w(g12, g34)),
            hm.neg(b.h(moved34, act(g1, w(g2, g34)), w(g1, g234))),
            b.h(act(g1, w23), act(g1, w(g23, g4)), w(g1, g234)),
            hm.neg(b.h(act(g1, w23), w(g1, g23), w(g123, g4))),
            b.h(w12, w(g12, g3), w(g123, g4)),
            hm.neg(b.h(w12, moved34, w(g12, g34))),
            hm.neg(d.theta(g1, g2).at(w34)),
            hm.neg(d.k(g1).at(act(g2, w34) * a.order() + w(g2, g34))),
            d.k(g1).at(w23 * a.order() + w(g23, g4)),
        ];
        hm.sum(terms)
    })
}

/// The obstruction 4-cochain `pi` for the quintuple `(phi, psi, k, theta, omega)`,
/// shifted by `d upsilon` when given.
///
/// The result is re-verified to be a normalized `psi`-cocycle.
pub fn pontryagin_square(d: &BraidedActionData, omega: &Cochain, upsilon: Option<&Cochain>) -> Result<Cochain> {
    preflight(d, omega, upsilon)?;
    finish(d, omega, upsilon)
}

/// `pi` for one action datum and many `omega`; the datum is validated once.
#[derive(Debug, Clone, Copy)]
pub struct PontryaginSquare<'a> {
    d: &'a BraidedActionData,
}

impl<'a> PontryaginSquare<'a> {
    pub fn new(d: &'a BraidedActionData) -> Result<Self> {
        validate_action_data_report(d).into_result("pontryagin_square")?;
        Ok(PontryaginSquare { d })
    }

    pub fn apply(&self, omega: &Cochain, upsilon: Option<&Cochain>) -> Result<Cochain> {
        check_shapes(self.d, omega, upsilon)?;
        let mut report = ValidationReport::new();
        check_omega(self.d, omega, &mut report)?;
        report.into_result("pontryagin_square")?;
        finish(self.d, omega, upsilon)
    }
}

fn finish(d: &BraidedActionData, omega: &Cochain, upsilon: Option<&Cochain>) -> Result<Cochain> {
    let mut pi = evaluate(d, omega);
    if let Some(u) = upsilon {
        pi = pi.add(&differential(u, d.psi())?)?;
    }
    if let Some(w) = pi.normalization_witness() {
        return Err(Error::Internal(format!("pi is not normalized at {w:?}")));
    }
    if let Some(w) = cocycle_witness(&pi, d.psi())? {
        return Err(Error::Internal(format!("pi is not a cocycle: d pi is nonzero at {w:?}")));
    }
    Ok(pi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub obstruction: Cochain,
    pub liftable: bool,
    /// `lambda` with `d lambda = pi` when liftable
    pub preimage: Option<Cochain>,
    pub torsor_factors: Vec<u64>,
    pub torsor_order: u128,
}

/// Decides whether the data lifts, and describes the `H^3(G, H)`-torsor of lifts.
pub fn classify(d: &BraidedActionData, omega: &Cochain, upsilon: Option<&Cochain>) -> Result<ClassificationReport> {
    let pi = pontryagin_square(d, omega, upsilon)?;
    let preimage = CoboundarySolver::new(d.psi(), 4, true)?.solve(&pi, d.psi())?;
    let h3 = cohomology_group(d.psi(), 3)?;
    Ok(ClassificationReport {
        liftable: preimage.is_some(),
        preimage,
        torsor_order: h3.order(),
        torsor_factors: h3.factors,
        obstruction: pi,
    })
}

/// `pi` for trivial actions and `k = 0`, `theta = 0`.
pub fn classical_pontryagin(b: &AbelianThreeCocycle, group: &FiniteGroup, omega: &Cochain) -> Result<Cochain> {
    let d = BraidedActionData::trivial(b.clone(), group.clone());
    pontryagin_square(&d, omega, None)
}

/// `E` on `A x G`, element `(a, g)` stored as `a |G| + g`, with
/// `(a1, g1)(a2, g2) = (a1 + g1 |> a2 + omega(g1, g2), g1 g2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub group: FiniteGroup,
    /// `E -> G`
    pub projection: Vec<usize>,
    /// `g -> (0, g)`
    pub section: Vec<usize>,
    /// `a -> (a, e)`
    pub inclusion: Vec<usize>,
}

/// The multiplication table on `A x G`, whether or not `omega` is a cocycle.
pub fn extension_table(phi: &GAction, omega: &Cochain) -> Result<Vec<Vec<usize>>> {
    let n = phi.group().order();
    let a = phi.module();
    if omega.degree() != 2 || omega.base_order() != n || omega.module() != a {
        return Err(Error::Shape(format!(
            "omega must be a 2-cochain on G (order {n}) valued in {:?}",
            a.factors()
        )));
    }
    let g = phi.group();
    let size = a.order() * n;
    Ok((0..size)
        .map(|x| {
            let (a1, g1) = (x / n, x % n);
            (0..size)
                .map(|y| {
                    let (a2, g2) = (y / n, y % n);
                    let s = a.add(a.add(a1, phi.apply(g1, a2)), omega.at(g1 * n + g2));
                    s * n + g.mul(g1, g2)
                })
                .collect()
        })
        .collect())
}

/// Builds `E` without requiring `d omega = 0`; a non-cocycle surfaces as the
/// group-axiom error of the table, with its non-associativity witness.
pub fn build_extension_unchecked(phi: &GAction, omega: &Cochain) -> Result<Extension> {
    if let Some(w) = omega.normalization_witness() {
        return Err(Error::Precondition(format!("omega is not normalized at {w:?}")));
    }
    let table = extension_table(phi, omega)?;
    // associativity before the other axioms, so a non-cocycle is reported as such
    let size = table.len();
    for x in 0..size {
        for y in 0..size {
            for z in 0..size {
                if table[table[x][y]][z] != table[x][table[y][z]] {
                    return Err(Error::Axiom(AxiomViolation::NotAssociative { a: x, b: y, c: z }));
                }
            }
        }
    }
    let group = FiniteGroup::from_table(&table)?;
    let n = phi.group().order();
    let size = group.order();
    Ok(Extension {
        projection: (0..size).map(|x| x % n).collect(),
        section: (0..n).collect(),
        inclusion: (0..phi.module().order()).map(|a| a * n).collect(),
        group,
    })
}

/// The extension of `G` by `A` described by a normalized `phi`-cocycle `omega`.
pub fn build_extension(phi: &GAction, omega: &Cochain) -> Result<Extension> {
    phi.validate().into_result("build_extension")?;
    if let Some(w) = cocycle_witness(omega, phi)? {
        return Err(Error::Precondition(format!("omega is not a cocycle: d omega is nonzero at {w:?}")));
    }
    build_extension_unchecked(phi, omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::standard_cyclic;
    use crate::module::FinAbModule;

    fn z(m: u64) -> FinAbModule {
        FinAbModule::cyclic(m).unwrap()
    }

    fn top(n: usize, m: FinAbModule, degree: usize, v: usize) -> Cochain {
        Cochain::from_fn(degree, n, m, |t| if t.iter().all(|&x| x == 1) { v } else { 0 })
    }

    #[test]
    fn semion_type_landmark() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let b = standard_cyclic(2, z(4), 1).unwrap();
        let omega = top(2, z(2), 2, 1);
        let pi = classical_pontryagin(&b, &g, &omega).unwrap();
        assert_eq!(pi, top(2, z(4), 4, 1));
        let d = BraidedActionData::trivial(b, g);
        let r = classify(&d, &omega, None).unwrap();
        assert!(!r.liftable);
        assert_eq!(r.torsor_factors, vec![2]);

        let r = classify(&d, &Cochain::zero(2, 2, z(2)), None).unwrap();
        assert!(r.liftable);
        assert_eq!(r.torsor_order, 2);
        assert!(r.preimage.unwrap().is_zero());
    }

    #[test]
    fn extensions_of_z2_by_z2() {
        let phi = GAction::trivial(FiniteGroup::cyclic(2).unwrap(), z(2));
        let e = build_extension(&phi, &top(2, z(2), 2, 1)).unwrap();
        assert_eq!(e.group.exponent(), 4);
        let e = build_extension(&phi, &Cochain::zero(2, 2, z(2))).unwrap();
        assert_eq!(e.group.exponent(), 2);
    }
}
