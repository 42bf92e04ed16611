//! Braided autoequivalences `(phi, psi, k)` of a skeletal braided 2-group and
//! actions of a finite group by them, `(phi, psi, k, theta)`.
//!
//! `k o phi^2` means `k(phi a, phi b)`; `psi o k` means `psi(k(a, b))`.

use rand::Rng;

use crate::braided::AbelianThreeCocycle;
use crate::cochain::{differential, Cochain};
use crate::cohomology::CochainLayout;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{solve_affine, AffineSolutions, Residues};
use crate::module::{FinAbModule, GAction, ModuleAutomorphism};
use crate::report::ValidationReport;

/// An object `(phi, psi, k)` of the braided autoequivalence 2-group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidedAutObject {
    pub phi: ModuleAutomorphism,
    pub psi: ModuleAutomorphism,
    pub k: Cochain,
}

impl BraidedAutObject {
    pub fn identity(b: &AbelianThreeCocycle) -> Self {
        BraidedAutObject {
            phi: ModuleAutomorphism::identity(b.pi0()),
            psi: ModuleAutomorphism::identity(b.pi1()),
            k: Cochain::zero(2, b.pi0().order(), b.pi1().clone()),
        }
    }
}

fn post(f: &Cochain, table: &[usize]) -> Cochain {
    f.map(|v| table[v])
}

/// `dk - psi o h + h o phi^3`.
fn eq1_residual(b: &AbelianThreeCocycle, phi: &[usize], psi: &[usize], k: &Cochain) -> Cochain {
    let h = b.associator();
    let dk = differential(k, b.coefficient_action()).expect("k has the shape of a 2-cochain on A");
    dk.sub(&post(h, psi))
        .and_then(|r| r.add(&h.pull_back(phi)))
        .expect("shapes agree")
}

/// `psi o c + k - k o tau - c o phi^2`.
fn eq2_residual(b: &AbelianThreeCocycle, phi: &[usize], psi: &[usize], k: &Cochain) -> Cochain {
    let c = b.braiding();
    let hm = b.pi1();
    Cochain::from_fn(2, b.pi0().order(), hm.clone(), |t| {
        let (x, y) = (t[0], t[1]);
        let lhs = hm.add(psi[c.get(t)], k.get(t));
        let rhs = hm.add(k.get(&[y, x]), c.get(&[phi[x], phi[y]]));
        hm.sub(lhs, rhs)
    })
}

fn check_object_shape(b: &AbelianThreeCocycle, x: &BraidedAutObject) -> Result<()> {
    let (a, hm) = (b.pi0(), b.pi1());
    if x.k.degree() != 2 || x.k.base_order() != a.order() || x.k.module() != hm {
        return Err(Error::Shape(format!(
            "k must be a 2-cochain on A = {:?} valued in H = {:?}",
            a.factors(),
            hm.factors()
        )));
    }
    x.phi.check(a).map_err(|e| Error::Shape(format!("phi: {e}")))?;
    x.psi.check(hm).map_err(|e| Error::Shape(format!("psi: {e}")))?;
    Ok(())
}

fn first_nonzero(f: &Cochain) -> Option<(Vec<usize>, usize)> {
    f.entries().find(|(_, v)| *v != 0)
}

fn with_prefix(prefix: &[usize], tail: Vec<usize>) -> Vec<usize> {
    prefix.iter().copied().chain(tail).collect()
}

fn object_checks(
    report: &mut ValidationReport,
    b: &AbelianThreeCocycle,
    phi: &[usize],
    psi: &[usize],
    k: &Cochain,
    prefix: &[usize],
) {
    let hm = b.pi1();
    if let Some(w) = k.normalization_witness() {
        report.fail_once("k-normalized", with_prefix(prefix, w), "k is nonzero on a pair containing 0".into());
    }
    if let Some((w, v)) = first_nonzero(&eq1_residual(b, phi, psi, k)) {
        report.fail_once(
            "eq1",
            with_prefix(prefix, w),
            format!("dk - (psi o h - h o phi^3) = {:?}", hm.residues(v)),
        );
    }
    if let Some((w, v)) = first_nonzero(&eq2_residual(b, phi, psi, k)) {
        report.fail_once(
            "eq2",
            with_prefix(prefix, w),
            format!("psi o c + k - k o tau - c o phi^2 = {:?}", hm.residues(v)),
        );
    }
}

/// Checks that `x` is an object: automorphisms, normalization and both equations.
pub fn validate_aut_object(b: &AbelianThreeCocycle, x: &BraidedAutObject) -> ValidationReport {
    let mut report = ValidationReport::new();
    if let Err(e) = check_object_shape(b, x) {
        report.fail("shape", vec![], e.to_string());
        return report;
    }
    let phi = x.phi.table(b.pi0());
    let psi = x.psi.table(b.pi1());
    object_checks(&mut report, b, &phi, &psi, &x.k, &[]);
    report
}

/// `(phi phi', psi psi', k o phi'^2 + psi o k')`.
pub fn compose_aut(b: &AbelianThreeCocycle, x: &BraidedAutObject, y: &BraidedAutObject) -> Result<BraidedAutObject> {
    check_object_shape(b, x)?;
    check_object_shape(b, y)?;
    let (a, hm) = (b.pi0(), b.pi1());
    let k = x
        .k
        .pull_back(&y.phi.table(a))
        .add(&post(&y.k, &x.psi.table(hm)))?;
    let out = BraidedAutObject {
        phi: x.phi.compose(a, &y.phi),
        psi: x.psi.compose(hm, &y.psi),
        k,
    };
    if validate_aut_object(b, x).is_ok() && validate_aut_object(b, y).is_ok() {
        validate_aut_object(b, &out).into_result("composite of valid objects")?;
    }
    Ok(out)
}

/// Every object of the braided autoequivalence 2-group, ordered by `phi`,
/// then `psi` (as in [`ModuleAutomorphism::all`]), then `k` lexicographically.
/// Refuses with the exact count when it exceeds `limit`.
pub fn search_aut_objects(b: &AbelianThreeCocycle, limit: u128) -> Result<Vec<BraidedAutObject>> {
    let (a, hm) = (b.pi0(), b.pi1());
    let layout = CochainLayout::new(2, a.order(), hm.clone(), true);
    let cells = a.order().pow(3) + a.order().pow(2);
    let mut spaces = Vec::new();
    let mut total: u128 = 0;
    for phi in ModuleAutomorphism::all(a) {
        for psi in ModuleAutomorphism::all(hm) {
            let (pt, st) = (phi.table(a), psi.table(hm));
            let sols = solve_affine(layout.moduli(), h_moduli(hm, cells), |x| {
                let k = layout.cochain(x);
                let mut out = Vec::new();
                flatten(&mut out, &eq1_residual(b, &pt, &st, &k));
                flatten(&mut out, &eq2_residual(b, &pt, &st, &k));
                out
            });
            total = total.saturating_add(sols.count());
            spaces.push((phi.clone(), psi, sols));
        }
    }
    if total > limit {
        return Err(Error::ScaleGuard {
            what: "braided autoequivalences".into(),
            estimate: total,
            limit,
        });
    }
    Ok(spaces
        .into_iter()
        .flat_map(|(phi, psi, sols)| {
            let layout = &layout;
            sols.enumerate().into_iter().map(move |x| BraidedAutObject {
                phi: phi.clone(),
                psi: psi.clone(),
                k: layout.cochain(&x),
            })
        })
        .collect())
}

/// `(phi, psi, {k_g}, {theta_{g1,g2}})` for a group `G` acting on `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidedActionData {
    braided: AbelianThreeCocycle,
    phi: GAction,
    psi: GAction,
    k: Vec<Cochain>,
    theta: Vec<Cochain>,
}

impl BraidedActionData {
    /// Checks shapes; the equations are checked by [`validate_action_data`].
    pub fn new(
        braided: AbelianThreeCocycle,
        phi: GAction,
        psi: GAction,
        k: Vec<Cochain>,
        theta: Vec<Cochain>,
    ) -> Result<Self> {
        let n = phi.group().order();
        if phi.group() != psi.group() {
            return Err(Error::Shape("phi and psi are actions of different groups".into()));
        }
        if phi.module() != braided.pi0() || psi.module() != braided.pi1() {
            return Err(Error::Shape("phi must act on A and psi on H".into()));
        }
        if k.len() != n || theta.len() != n * n {
            return Err(Error::Shape(format!(
                "need {n} k-cochains and {} theta-cochains, got {} and {}",
                n * n,
                k.len(),
                theta.len()
            )));
        }
        let (a, hm) = (braided.pi0(), braided.pi1());
        for (what, list, degree) in [("k", &k, 2), ("theta", &theta, 1)] {
            if let Some(f) = list
                .iter()
                .find(|f| f.degree() != degree || f.base_order() != a.order() || f.module() != hm)
            {
                return Err(Error::Shape(format!(
                    "{what} entries must be degree-{degree} cochains on A valued in H; found degree {} over {} elements into {:?}",
                    f.degree(),
                    f.base_order(),
                    f.module().factors()
                )));
            }
        }
        Ok(BraidedActionData {
            braided,
            phi,
            psi,
            k,
            theta,
        })
    }

    /// `k = 0`, `theta = 0` over the given actions.
    pub fn zero(braided: AbelianThreeCocycle, phi: GAction, psi: GAction) -> Result<Self> {
        let n = phi.group().order();
        let (a, hm) = (braided.pi0().clone(), braided.pi1().clone());
        let k = vec![Cochain::zero(2, a.order(), hm.clone()); n];
        let theta = vec![Cochain::zero(1, a.order(), hm); n * n];
        Self::new(braided, phi, psi, k, theta)
    }

    /// Trivial actions and zero data.
    pub fn trivial(braided: AbelianThreeCocycle, group: FiniteGroup) -> Self {
        let phi = GAction::trivial(group.clone(), braided.pi0().clone());
        let psi = GAction::trivial(group, braided.pi1().clone());
        Self::zero(braided, phi, psi).expect("trivial data has the right shape")
    }

    pub fn group(&self) -> &FiniteGroup {
        self.phi.group()
    }

    pub fn braided(&self) -> &AbelianThreeCocycle {
        &self.braided
    }

    pub fn phi(&self) -> &GAction {
        &self.phi
    }

    pub fn psi(&self) -> &GAction {
        &self.psi
    }

    pub fn k(&self, g: usize) -> &Cochain {
        &self.k[g]
    }

    pub fn ks(&self) -> &[Cochain] {
        &self.k
    }

    pub fn theta(&self, g1: usize, g2: usize) -> &Cochain {
        &self.theta[g1 * self.group().order() + g2]
    }

    pub fn thetas(&self) -> &[Cochain] {
        &self.theta
    }

    pub fn aut_object(&self, g: usize) -> BraidedAutObject {
        BraidedAutObject {
            phi: self.phi.automorphism(g).clone(),
            psi: self.psi.automorphism(g).clone(),
            k: self.k[g].clone(),
        }
    }

    fn same_underlying(&self, other: &BraidedActionData) -> bool {
        self.braided == other.braided && self.phi == other.phi && self.psi == other.psi
    }
}

/// `d theta_{g1,g2} - (k_{g1g2} - k_{g1} o phi_{g2}^2 - psi_{g1} o k_{g2})`.
fn theta_differential_residual(d: &BraidedActionData, theta: &Cochain, g1: usize, g2: usize) -> Cochain {
    let b = &d.braided;
    let g12 = d.group().mul(g1, g2);
    let dtheta = differential(theta, b.coefficient_action()).expect("theta is a 1-cochain on A");
    let rhs = d.k[g12]
        .sub(&d.k[g1].pull_back(d.phi.table(g2)))
        .and_then(|r| r.sub(&post(&d.k[g2], d.psi.table(g1))))
        .expect("shapes agree");
    dtheta.sub(&rhs).expect("shapes agree")
}

/// `theta_{g1g2,g3} + theta_{g1,g2} o phi_{g3} - theta_{g1,g2g3} - psi_{g1} o theta_{g2,g3}`.
fn theta_cocycle_residual(d: &BraidedActionData, g1: usize, g2: usize, g3: usize) -> Cochain {
    let g = d.group();
    let hm = d.braided.pi1();
    let (g12, g23) = (g.mul(g1, g2), g.mul(g2, g3));
    let phi3 = d.phi.table(g3);
    let psi1 = d.psi.table(g1);
    Cochain::from_fn(1, d.braided.pi0().order(), hm.clone(), |t| {
        let a = t[0];
        let lhs = hm.add(d.theta(g12, g3).at(a), d.theta(g1, g2).at(phi3[a]));
        let rhs = hm.add(d.theta(g1, g23).at(a), psi1[d.theta(g2, g3).at(a)]);
        hm.sub(lhs, rhs)
    })
}

/// Checks every condition on action data, recording the first witness of each.
pub fn validate_action_data(d: &BraidedActionData) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (name, action) in [("phi-action", &d.phi), ("psi-action", &d.psi)] {
        let r = action.validate();
        if let Some(v) = r.violations().first() {
            report.fail(name, v.witness.clone(), format!("{}: {}", v.check, v.message));
        }
    }
    if !report.is_ok() {
        return report;
    }
    let b = &d.braided;
    let hm = b.pi1();
    let n = d.group().order();
    for g in 0..n {
        object_checks(&mut report, b, d.phi.table(g), d.psi.table(g), &d.k[g], &[g]);
    }
    if !d.k[0].is_zero() {
        report.fail("g-normalized", vec![0], "k at the identity is nonzero".into());
    }
    for g1 in 0..n {
        for g2 in 0..n {
            let theta = d.theta(g1, g2);
            if (g1 == 0 || g2 == 0) && !theta.is_zero() {
                report.fail_once("g-normalized", vec![g1, g2], "theta with an identity index is nonzero".into());
            }
            if theta.at(0) != 0 {
                report.fail_once("theta-normalized", vec![g1, g2], "theta(0) is nonzero".into());
            }
            if let Some((w, v)) = first_nonzero(&theta_differential_residual(d, theta, g1, g2)) {
                report.fail_once(
                    "theta-differential",
                    with_prefix(&[g1, g2], w),
                    format!("d theta - (k_g1g2 - k_g1 o phi_g2^2 - psi_g1 o k_g2) = {:?}", hm.residues(v)),
                );
            }
            for g3 in 0..n {
                if let Some((w, v)) = first_nonzero(&theta_cocycle_residual(d, g1, g2, g3)) {
                    report.fail_once(
                        "theta-cocycle",
                        with_prefix(&[g1, g2, g3], w),
                        format!("theta cocycle defect {:?}", hm.residues(v)),
                    );
                }
            }
        }
    }
    report
}

/// Applies an isomorphism `{eta_g}`: `k'_g = k_g + d eta_g` and
/// `theta' = theta + eta_{g1g2} - eta_{g1} o phi_{g2} - psi_{g1} o eta_{g2}`.
pub fn gauge(d: &BraidedActionData, eta: &[Cochain]) -> Result<BraidedActionData> {
    let n = d.group().order();
    let (a, hm) = (d.braided.pi0(), d.braided.pi1());
    if eta.len() != n || eta.iter().any(|e| e.degree() != 1 || e.base_order() != a.order() || e.module() != hm) {
        return Err(Error::Shape(format!("need {n} 1-cochains on A valued in H")));
    }
    let action = d.braided.coefficient_action();
    let k = (0..n)
        .map(|g| d.k[g].add(&differential(&eta[g], action)?))
        .collect::<Result<Vec<_>>>()?;
    let mut theta = Vec::with_capacity(n * n);
    for g1 in 0..n {
        for g2 in 0..n {
            let g12 = d.group().mul(g1, g2);
            let shift = eta[g12]
                .sub(&eta[g1].pull_back(d.phi.table(g2)))?
                .sub(&post(&eta[g2], d.psi.table(g1)))?;
            theta.push(d.theta(g1, g2).add(&shift)?);
        }
    }
    BraidedActionData::new(d.braided.clone(), d.phi.clone(), d.psi.clone(), k, theta)
}

fn flatten(out: &mut Residues, f: &Cochain) {
    for &v in f.values() {
        out.extend(f.module().residues(v));
    }
}

fn h_moduli(hm: &FinAbModule, cells: usize) -> Vec<i64> {
    let f: Vec<i64> = hm.factors().iter().map(|&m| m as i64).collect();
    (0..cells).flat_map(|_| f.iter().copied()).collect()
}

/// All `(k, theta)` completing given `(B, phi, psi)`, as an affine coset.
///
/// Unknowns are `k_g` for `g != e` and `theta_{g1,g2}` for `g1, g2 != e`, both
/// normalized on `A`; the identity entries are fixed to zero.
#[derive(Debug, Clone)]
pub struct ActionSpace {
    template: BraidedActionData,
    k_layout: CochainLayout,
    theta_layout: CochainLayout,
    solutions: AffineSolutions,
}

impl ActionSpace {
    pub fn new(braided: AbelianThreeCocycle, phi: GAction, psi: GAction) -> Result<Self> {
        let template = BraidedActionData::zero(braided, phi, psi)?;
        let r = validate_action_data(&template);
        for check in ["phi-action", "psi-action"] {
            if r.has_check(check) {
                return Err(Error::Precondition(format!("{check} is not a valid action")));
            }
        }
        let b = &template.braided;
        let (a, hm) = (b.pi0().clone(), b.pi1().clone());
        let n = template.group().order();
        let na = a.order();
        let k_layout = CochainLayout::new(2, na, hm.clone(), true);
        let theta_layout = CochainLayout::new(1, na, hm.clone(), true);
        let unknowns = (n - 1) * k_layout.dim() + (n - 1) * (n - 1) * theta_layout.dim();
        let x_moduli: Vec<i64> = {
            let mut m = Vec::with_capacity(unknowns);
            for _ in 1..n {
                m.extend(k_layout.moduli());
            }
            for _ in 0..(n - 1) * (n - 1) {
                m.extend(theta_layout.moduli());
            }
            m
        };
        let cells = n * (na * na * na + na * na) + n * n * na * na + n * n * n * na;
        let y_moduli = h_moduli(&hm, cells);
        let space_for_eval = ActionSpaceRef {
            template: &template,
            k_layout: &k_layout,
            theta_layout: &theta_layout,
        };
        let solutions = solve_affine(x_moduli, y_moduli, |x| space_for_eval.residuals(x));
        Ok(ActionSpace {
            template,
            k_layout,
            theta_layout,
            solutions,
        })
    }

    pub fn count(&self) -> u128 {
        self.solutions.count()
    }

    pub fn solutions(&self) -> &AffineSolutions {
        &self.solutions
    }

    fn view(&self) -> ActionSpaceRef<'_> {
        ActionSpaceRef {
            template: &self.template,
            k_layout: &self.k_layout,
            theta_layout: &self.theta_layout,
        }
    }

    pub fn datum(&self, x: &[i64]) -> BraidedActionData {
        self.view().datum(x)
    }

    /// Coordinates of a G-normalized datum over the same `(B, phi, psi)`.
    pub fn coordinates(&self, d: &BraidedActionData) -> Residues {
        let n = d.group().order();
        let mut x = Vec::new();
        for g in 1..n {
            x.extend(self.k_layout.coords(d.k(g)));
        }
        for g1 in 1..n {
            for g2 in 1..n {
                x.extend(self.theta_layout.coords(d.theta(g1, g2)));
            }
        }
        x
    }

    /// Every datum in lexicographic order of `(k_1, ..., theta_{1,1}, ...)`,
    /// refusing when there are more than `limit`.
    pub fn enumerate(&self, limit: u128) -> Result<Vec<BraidedActionData>> {
        let count = self.count();
        if count > limit {
            return Err(Error::ScaleGuard {
                what: "action data".into(),
                estimate: count,
                limit,
            });
        }
        Ok(self.solutions.enumerate().iter().map(|x| self.datum(x)).collect())
    }

    /// A uniformly random datum, if any exists.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<BraidedActionData> {
        self.solutions.sample(rng).map(|x| self.datum(&x))
    }
}

struct ActionSpaceRef<'a> {
    template: &'a BraidedActionData,
    k_layout: &'a CochainLayout,
    theta_layout: &'a CochainLayout,
}

impl ActionSpaceRef<'_> {
    fn datum(&self, x: &[i64]) -> BraidedActionData {
        let mut d = self.template.clone();
        let n = d.group().order();
        let (kd, td) = (self.k_layout.dim(), self.theta_layout.dim());
        for g in 1..n {
            let off = (g - 1) * kd;
            d.k[g] = self.k_layout.cochain(&x[off..off + kd]);
        }
        let base = (n - 1) * kd;
        for g1 in 1..n {
            for g2 in 1..n {
                let off = base + ((g1 - 1) * (n - 1) + (g2 - 1)) * td;
                d.theta[g1 * n + g2] = self.theta_layout.cochain(&x[off..off + td]);
            }
        }
        d
    }

    fn residuals(&self, x: &[i64]) -> Residues {
        let d = self.datum(x);
        let b = &d.braided;
        let n = d.group().order();
        let mut out = Vec::new();
        for g in 0..n {
            flatten(&mut out, &eq1_residual(b, d.phi.table(g), d.psi.table(g), &d.k[g]));
            flatten(&mut out, &eq2_residual(b, d.phi.table(g), d.psi.table(g), &d.k[g]));
        }
        for g1 in 0..n {
            for g2 in 0..n {
                flatten(&mut out, &theta_differential_residual(&d, d.theta(g1, g2), g1, g2));
            }
        }
        for g1 in 0..n {
            for g2 in 0..n {
                for g3 in 0..n {
                    flatten(&mut out, &theta_cocycle_residual(&d, g1, g2, g3));
                }
            }
        }
        out
    }
}

/// Every valid G-normalized datum over `(B, phi, psi)`, in lexicographic
/// order; refuses with the exact count when it exceeds `limit`.
pub fn search_action_data(
    braided: &AbelianThreeCocycle,
    phi: &GAction,
    psi: &GAction,
    limit: u128,
) -> Result<Vec<BraidedActionData>> {
    ActionSpace::new(braided.clone(), phi.clone(), psi.clone())?.enumerate(limit)
}

/// An isomorphism `{eta_g}` from `d` to `other`, the lexicographically least one.
pub fn action_isomorphic(d: &BraidedActionData, other: &BraidedActionData) -> Result<Option<Vec<Cochain>>> {
    if !d.same_underlying(other) {
        return Err(Error::Shape("action data over different (B, phi, psi)".into()));
    }
    let b = &d.braided;
    let (a, hm) = (b.pi0(), b.pi1());
    let n = d.group().order();
    let layout = CochainLayout::new(1, a.order(), hm.clone(), true);
    let dim = layout.dim();
    let x_moduli: Vec<i64> = (0..n).flat_map(|_| layout.moduli()).collect();
    let cells = n * a.order() * a.order() + n * n * a.order();
    let etas = |x: &[i64]| -> Vec<Cochain> { (0..n).map(|g| layout.cochain(&x[g * dim..(g + 1) * dim])).collect() };
    let solutions = solve_affine(x_moduli, h_moduli(hm, cells), |x| {
        let moved = gauge(d, &etas(x)).expect("shapes agree");
        let mut out = Vec::new();
        for g in 0..n {
            flatten(&mut out, &moved.k[g].sub(&other.k[g]).expect("shapes agree"));
        }
        for (t, t2) in moved.theta.iter().zip(&other.theta) {
            flatten(&mut out, &t.sub(t2).expect("shapes agree"));
        }
        out
    });
    Ok(solutions.particular().map(|x| etas(x)))
}
