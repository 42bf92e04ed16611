//! Problem-file schema and its resolution into engine objects.
//!
//! Syntax and type errors come from serde_json with line and column; errors
//! found while building engine objects name the JSON path of the offending value.

use std::collections::BTreeMap;

use braidext::action::BraidedActionData;
use braidext::braided::{standard_cyclic, AbelianThreeCocycle};
use braidext::cochain::Cochain;
use braidext::group::FiniteGroup;
use braidext::module::{FinAbModule, GAction, ModuleAutomorphism};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

fn default_version() -> u32 {
    FORMAT_VERSION
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default = "default_version")]
    pub version: u32,
    pub group: GroupSpec,
    #[serde(default)]
    pub braided2group: Option<BraidedSpec>,
    #[serde(default)]
    pub action_data: Option<ActionDataSpec>,
    #[serde(default)]
    pub omega: Option<CochainSpec>,
    #[serde(default)]
    pub upsilon: Option<CochainSpec>,
    /// coefficients for `cohomology`; defaults to `H` under `psi`
    #[serde(default)]
    pub module: Option<ModSpec>,
    #[serde(default)]
    pub action: Option<ActionSpec>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic(usize),
    Product(Vec<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModSpec {
    pub factors: Vec<u64>,
}

/// An element as its index in the lexicographic encoding, or as a residue list.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Index(usize),
    Residues(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CochainSpec {
    pub degree: usize,
    /// `[tuple, value]` pairs; omitted tuples are zero
    #[serde(default)]
    pub values: Vec<(Vec<ElementSpec>, ElementSpec)>,
    #[serde(default = "yes")]
    pub normalized: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StandardCyclicSpec {
    pub n: usize,
    #[serde(rename = "H")]
    pub h: ModSpec,
    pub t: ElementSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraidedSpec {
    #[serde(default)]
    pub standard_cyclic: Option<StandardCyclicSpec>,
    #[serde(default, rename = "A")]
    pub a: Option<ModSpec>,
    #[serde(default, rename = "H")]
    pub h_module: Option<ModSpec>,
    #[serde(default)]
    pub h: Option<CochainSpec>,
    #[serde(default)]
    pub c: Option<CochainSpec>,
}

/// `g -> matrix`; group elements that are not listed act trivially.
pub type ActionSpec = BTreeMap<String, Vec<Vec<i64>>>;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDataSpec {
    #[serde(default)]
    pub phi: Option<ActionSpec>,
    #[serde(default)]
    pub psi: Option<ActionSpec>,
    #[serde(default)]
    pub k: BTreeMap<String, CochainSpec>,
    #[serde(default)]
    pub theta: BTreeMap<String, CochainSpec>,
}

/// Engine objects built from a problem file, before any validation.
#[derive(Debug, Clone)]
pub struct Problem {
    pub group: FiniteGroup,
    pub braided: Option<AbelianThreeCocycle>,
    pub data: Option<BraidedActionData>,
    pub omega: Option<Cochain>,
    pub upsilon: Option<Cochain>,
    pub coefficients: Option<GAction>,
}

pub fn parse_str(text: &str) -> Result<ProblemFile, CliError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
        }
    })?;
    if file.version != FORMAT_VERSION {
        return Err(input("$.version", format!("unsupported version {}, expected {FORMAT_VERSION}", file.version)));
    }
    Ok(file)
}

fn input(path: &str, message: impl Into<String>) -> CliError {
    CliError::Input {
        path: path.to_string(),
        message: message.into(),
    }
}

fn engine(path: &str) -> impl Fn(braidext::Error) -> CliError + '_ {
    move |e| input(path, e.to_string())
}

pub fn build_group(spec: &GroupSpec, path: &str) -> Result<FiniteGroup, CliError> {
    match spec {
        GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n).map_err(engine(path)),
        GroupSpec::Product(parts) => {
            if parts.is_empty() {
                return Err(input(path, "product of no groups"));
            }
            let mut g = build_group(&parts[0], &format!("{path}.product[0]"))?;
            for (i, p) in parts.iter().enumerate().skip(1) {
                g = g.direct_product(&build_group(p, &format!("{path}.product[{i}]"))?);
            }
            Ok(g)
        }
        GroupSpec::Table(rows) => {
            let g = FiniteGroup::from_table(rows).map_err(engine(path))?;
            if rows[0].iter().enumerate().any(|(i, &x)| x != i) {
                return Err(input(path, "the identity must be element 0 (row 0 must read 0, 1, 2, ...)"));
            }
            Ok(g)
        }
    }
}

pub fn build_module(spec: &ModSpec, path: &str) -> Result<FinAbModule, CliError> {
    FinAbModule::new(spec.factors.clone()).map_err(engine(path))
}

pub fn element(m: &FinAbModule, spec: &ElementSpec, path: &str) -> Result<usize, CliError> {
    match spec {
        ElementSpec::Index(i) if *i < m.order() => Ok(*i),
        ElementSpec::Index(i) => Err(input(path, format!("element {i} out of range for a module of order {}", m.order()))),
        ElementSpec::Residues(r) => m.elem(r).map_err(engine(path)),
    }
}

/// Reads a cochain on a base of `base_order` elements; `base` decodes tuple
/// entries that are given as residues.
fn build_cochain(
    spec: &CochainSpec,
    degree: usize,
    base_order: usize,
    base: Option<&FinAbModule>,
    target: &FinAbModule,
    path: &str,
) -> Result<Cochain, CliError> {
    if spec.degree != degree {
        return Err(input(&format!("{path}.degree"), format!("expected degree {degree}, got {}", spec.degree)));
    }
    let mut f = Cochain::zero(degree, base_order, target.clone());
    let mut seen = std::collections::BTreeSet::new();
    for (i, (tuple, value)) in spec.values.iter().enumerate() {
        let here = format!("{path}.values[{i}]");
        if tuple.len() != degree {
            return Err(input(&here, format!("tuple of length {}, expected {degree}", tuple.len())));
        }
        let mut t = Vec::with_capacity(degree);
        for (j, e) in tuple.iter().enumerate() {
            let at = format!("{here}[0][{j}]");
            let x = match (e, base) {
                (ElementSpec::Index(x), _) if *x < base_order => *x,
                (ElementSpec::Index(x), _) => {
                    return Err(input(&at, format!("element {x} out of range (order {base_order})")));
                }
                (ElementSpec::Residues(_), Some(m)) => element(m, e, &at)?,
                (ElementSpec::Residues(_), None) => {
                    return Err(input(&at, "group elements are given by index"));
                }
            };
            t.push(x);
        }
        if !seen.insert(t.clone()) {
            return Err(input(&here, format!("tuple {t:?} listed twice")));
        }
        f.set(&t, element(target, value, &format!("{here}[1]"))?);
    }
    if spec.normalized {
        if let Some(w) = f.normalization_witness() {
            return Err(input(path, format!("declared normalized but nonzero at {w:?}")));
        }
    }
    Ok(f)
}

fn parse_index(key: &str, bound: usize, path: &str) -> Result<usize, CliError> {
    match key.trim().parse::<usize>() {
        Ok(g) if g < bound => Ok(g),
        _ => Err(input(path, format!("key {key:?} is not a group element index below {bound}"))),
    }
}

pub fn build_action(
    group: &FiniteGroup,
    module: &FinAbModule,
    spec: Option<&ActionSpec>,
    path: &str,
) -> Result<GAction, CliError> {
    let mut maps = vec![ModuleAutomorphism::identity(module); group.order()];
    if let Some(spec) = spec {
        for (key, matrix) in spec {
            let g = parse_index(key, group.order(), path)?;
            let m = ModuleAutomorphism::new(matrix.clone());
            m.check(module).map_err(engine(&format!("{path}.{key}")))?;
            maps[g] = m;
        }
    }
    GAction::new(group.clone(), module.clone(), maps).map_err(engine(path))
}

fn build_braided(spec: &BraidedSpec) -> Result<AbelianThreeCocycle, CliError> {
    let path = "$.braided2group";
    if let Some(s) = &spec.standard_cyclic {
        if spec.a.is_some() || spec.h_module.is_some() || spec.h.is_some() || spec.c.is_some() {
            return Err(input(path, "give either standard_cyclic or explicit A, H, h, c"));
        }
        let hm = build_module(&s.h, &format!("{path}.standard_cyclic.H"))?;
        let t = element(&hm, &s.t, &format!("{path}.standard_cyclic.t"))?;
        return standard_cyclic(s.n, hm, t).map_err(engine(&format!("{path}.standard_cyclic")));
    }
    let a = spec.a.as_ref().ok_or_else(|| input(path, "missing A"))?;
    let hm = spec.h_module.as_ref().ok_or_else(|| input(path, "missing H"))?;
    let a = build_module(a, &format!("{path}.A"))?;
    let hm = build_module(hm, &format!("{path}.H"))?;
    let h = match &spec.h {
        Some(s) => build_cochain(s, 3, a.order(), Some(&a), &hm, &format!("{path}.h"))?,
        None => Cochain::zero(3, a.order(), hm.clone()),
    };
    let c = match &spec.c {
        Some(s) => build_cochain(s, 2, a.order(), Some(&a), &hm, &format!("{path}.c"))?,
        None => Cochain::zero(2, a.order(), hm.clone()),
    };
    AbelianThreeCocycle::new(a, hm, h, c).map_err(engine(path))
}

fn build_data(
    group: &FiniteGroup,
    b: &AbelianThreeCocycle,
    spec: &ActionDataSpec,
) -> Result<BraidedActionData, CliError> {
    let path = "$.action_data";
    let (a, hm) = (b.pi0(), b.pi1());
    let n = group.order();
    let phi = build_action(group, a, spec.phi.as_ref(), &format!("{path}.phi"))?;
    let psi = build_action(group, hm, spec.psi.as_ref(), &format!("{path}.psi"))?;
    let mut k = vec![Cochain::zero(2, a.order(), hm.clone()); n];
    for (key, s) in &spec.k {
        let here = format!("{path}.k.{key}");
        let g = parse_index(key, n, &here)?;
        k[g] = build_cochain(s, 2, a.order(), Some(a), hm, &here)?;
    }
    let mut theta = vec![Cochain::zero(1, a.order(), hm.clone()); n * n];
    for (key, s) in &spec.theta {
        let here = format!("{path}.theta.{key}");
        let (g1, g2) = key
            .split_once(',')
            .ok_or_else(|| input(&here, "theta keys read \"g1,g2\""))?;
        let (g1, g2) = (parse_index(g1, n, &here)?, parse_index(g2, n, &here)?);
        theta[g1 * n + g2] = build_cochain(s, 1, a.order(), Some(a), hm, &here)?;
    }
    BraidedActionData::new(b.clone(), phi, psi, k, theta).map_err(engine(path))
}

impl ProblemFile {
    pub fn resolve(&self) -> Result<Problem, CliError> {
        let group = build_group(&self.group, "$.group")?;
        let braided = self.braided2group.as_ref().map(build_braided).transpose()?;
        let data = match (&braided, &self.action_data) {
            (Some(b), spec) => Some(build_data(&group, b, &spec.clone().unwrap_or_default())?),
            (None, Some(_)) => return Err(input("$.action_data", "action_data needs braided2group")),
            (None, None) => None,
        };
        let n = group.order();
        let coefficients = match (&self.module, &self.action) {
            (Some(m), action) => {
                let m = build_module(m, "$.module")?;
                Some(build_action(&group, &m, action.as_ref(), "$.action")?)
            }
            (None, Some(_)) => return Err(input("$.action", "action needs module")),
            (None, None) => None,
        };
        // omega lives in A, or in the stand-alone module when there is no braided 2-group
        let a = braided.as_ref().map(|b| b.pi0()).or(coefficients.as_ref().map(|c| c.module()));
        let omega = match (&self.omega, a) {
            (Some(s), Some(a)) => Some(build_cochain(s, 2, n, None, a, "$.omega")?),
            (Some(_), None) => return Err(input("$.omega", "omega needs braided2group or module")),
            _ => None,
        };
        let upsilon = match (&self.upsilon, &braided) {
            (Some(s), Some(b)) => Some(build_cochain(s, 3, n, None, b.pi1(), "$.upsilon")?),
            (Some(_), None) => return Err(input("$.upsilon", "upsilon needs braided2group")),
            _ => None,
        };
        Ok(Problem {
            group,
            braided,
            data,
            omega,
            upsilon,
            coefficients,
        })
    }
}

/// Emits a cochain in the input schema: nonzero entries only, values as
/// residues, tuple entries as residues when the base is a module.
pub fn cochain_spec(f: &Cochain, base: Option<&FinAbModule>) -> CochainSpec {
    let target = f.module();
    let values = f
        .entries()
        .filter(|(_, v)| *v != 0)
        .map(|(t, v)| {
            let tuple = t
                .iter()
                .map(|&x| match base {
                    Some(m) => ElementSpec::Residues(m.residues(x)),
                    None => ElementSpec::Index(x),
                })
                .collect();
            (tuple, ElementSpec::Residues(target.residues(v)))
        })
        .collect();
    CochainSpec {
        degree: f.degree(),
        values,
        normalized: f.is_normalized(),
    }
}

/// Reads back an emitted cochain on `G` (indices) or on a module (residues).
pub fn read_cochain(
    spec: &CochainSpec,
    base_order: usize,
    base: Option<&FinAbModule>,
    target: &FinAbModule,
) -> Result<Cochain, CliError> {
    build_cochain(spec, spec.degree, base_order, base, target, "$")
}
