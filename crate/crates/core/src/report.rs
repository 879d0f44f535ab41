//! Verification suites behind the command-line front end, producing
//! deterministic JSON reports.

use serde::Serialize;
use serde_json::{json, Value};

use crate::cd::CdModel;
use crate::cdp::{enumerate_cdp, square_defects, Window};
use crate::chain::{GradedComplex, HomologyReport, PivotOrder};
use crate::grid::{vertical_annulus, Domain, GridDiagram, GridError};
use crate::signs::{
    extend_sign_cdp, gauge_normalize, read_sign_file, solve_f_j, solve_sign_cd, solve_sign_cdp, t_value,
    uniqueness_audit, verify_constant_law, verify_rules_cd, verify_rules_cdp, Extension, SignAssignment, SignError,
};
use crate::witness::{
    boundary_parity, build_h0_witnesses, build_h1_witnesses, build_h2_witnesses, build_h3_witnesses, build_named_rectangles,
    cancellation_audit, certify, expected_u_terms, WitnessContext, WitnessError,
};

pub const SCHEMA: &str = "gridob-report/1";

/// Which coefficient rings a suite covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RingChoice {
    F2,
    Z,
    Both,
}

impl RingChoice {
    fn f2(self) -> bool {
        self != RingChoice::Z
    }

    fn z(self) -> bool {
        self != RingChoice::F2
    }
}

/// Everything a run depends on; echoed into each report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub o: Option<String>,
    pub x: Option<String>,
    pub random_markings: Option<u64>,
    pub grid_file: Option<String>,
    pub k: usize,
    pub n_max: usize,
    pub ring: RingChoice,
    pub s_params: Option<String>,
    pub sign_file: Option<String>,
    pub audit_markings: bool,
}

impl RunConfig {
    pub fn new(n: usize) -> Self {
        RunConfig {
            n,
            o: None,
            x: None,
            random_markings: None,
            grid_file: None,
            k: 4,
            n_max: 4,
            ring: RingChoice::Both,
            s_params: None,
            sign_file: None,
            audit_markings: false,
        }
    }

    pub fn grid(&self) -> Result<GridDiagram, ReportError> {
        let g = if let Some(path) = &self.grid_file {
            let text = std::fs::read_to_string(path).map_err(|e| ReportError::Usage(format!("{path}: {e}")))?;
            GridDiagram::parse_grid_file(&text)?
        } else if let (Some(o), Some(x)) = (&self.o, &self.x) {
            GridDiagram::from_brackets(o, x)?
        } else if self.o.is_some() || self.x.is_some() {
            return Err(ReportError::Usage("--o and --x must be given together".into()));
        } else if let Some(seed) = self.random_markings {
            GridDiagram::random(self.n, seed)?
        } else {
            GridDiagram::standard(self.n)?
        };
        if g.n() != self.n {
            return Err(ReportError::Usage(format!("grid has size {}, --n is {}", g.n(), self.n)));
        }
        Ok(g)
    }

    pub fn s_params(&self) -> Result<Vec<bool>, ReportError> {
        match &self.s_params {
            None => Ok(vec![false; self.n]),
            Some(bits) => {
                let v = crate::signs::parse_bits(bits).map_err(|e| ReportError::Usage(e.to_string()))?;
                if v.len() != self.n {
                    return Err(ReportError::Usage(format!("--s-params needs {} bits, got {}", self.n, v.len())));
                }
                Ok(v)
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    /// Bad arguments; exit code 2.
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Sign(#[from] SignError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("{0}")]
    Failed(String),
}

impl ReportError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Usage(_) | ReportError::Grid(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

/// Results of one suite.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Section {
    pub checks: Vec<Check>,
    pub data: serde_json::Map<String, Value>,
}

impl Section {
    pub fn check(&mut self, name: &str, pass: bool, detail: Value) {
        self.checks.push(Check { name: name.into(), pass, detail });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn put(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }
}

/// The full report document.
pub fn document(command: &str, config: &RunConfig, sections: &[(&str, Section)]) -> Value {
    let pass = sections.iter().all(|(_, s)| s.pass());
    let body: serde_json::Map<String, Value> =
        sections.iter().map(|(k, s)| (k.to_string(), serde_json::to_value(s).expect("serializable"))).collect();
    json!({ "schema": SCHEMA, "command": command, "config": config, "pass": pass, "sections": body })
}

fn validate(config: &RunConfig) -> Result<(), ReportError> {
    if config.n < 2 {
        return Err(ReportError::Usage(format!("n must be at least 2, got {}", config.n)));
    }
    if config.n > 6 {
        return Err(ReportError::Usage(format!("n = {} is beyond the supported range 2..=6", config.n)));
    }
    Ok(())
}

/// `1, 0, 1, 0, …`
fn polynomial_pattern(len: usize) -> Vec<usize> {
    (0..len).map(|k| usize::from(k % 2 == 0)).collect()
}

fn signs_for(config: &RunConfig, model: &CdModel, complex: &GradedComplex<Domain>) -> Result<SignAssignment, ReportError> {
    match &config.sign_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ReportError::Usage(format!("{path}: {e}")))?;
            Ok(read_sign_file(&text)?)
        }
        None => Ok(solve_sign_cd(model, complex, PivotOrder::Forward)?),
    }
}

fn homology_check(section: &mut Section, name: &str, rep: &HomologyReport) {
    let ranks = rep.ranks();
    let want = polynomial_pattern(ranks.len());
    section.check(name, ranks == want && rep.torsion_free(), json!({ "ranks": ranks, "expected": want, "torsion_free": rep.torsion_free() }));
}

/// CD homology for one marking placement; returns the F2 and Z reports.
fn cd_homology(
    grid: &GridDiagram,
    config: &RunConfig,
    section: &mut Section,
    tag: &str,
) -> Result<(Option<HomologyReport>, Option<HomologyReport>), ReportError> {
    let model = CdModel::new(grid, config.k);
    let f2 = model.f2_complex();
    section.check(&format!("{tag}d2_f2"), f2.is_ok(), json!(f2.as_ref().err().map(|e| e.to_string())));
    let f2 = f2.map_err(|e| ReportError::Failed(e.to_string()))?;
    let mut out = (None, None);
    if config.ring.f2() {
        let rep = f2.homology_report().map_err(|e| ReportError::Failed(e.to_string()))?;
        homology_check(section, &format!("{tag}homology_f2"), &rep);
        out.0 = Some(rep);
    }
    if config.ring.z() {
        let s = signs_for(config, &model, &f2)?;
        let z = model.z_complex(&s);
        section.check(&format!("{tag}d2_z"), z.is_ok(), json!(z.as_ref().err().map(|e| e.to_string())));
        if let Ok(z) = z {
            let rep = z.homology_report().map_err(|e| ReportError::Failed(e.to_string()))?;
            homology_check(section, &format!("{tag}homology_z"), &rep);
            out.1 = Some(rep);
        }
    }
    let sizes: Vec<usize> = model.levels.iter().map(Vec::len).collect();
    section.put(&format!("{tag}generators"), sizes);
    Ok(out)
}

/// Enumerates CD, checks `∂² = 0` and compares homology with the `F[U]` pattern.
pub fn cmd_cd(config: &RunConfig) -> Result<Section, ReportError> {
    validate(config)?;
    if config.k < 1 {
        return Err(ReportError::Usage("--K must be at least 1".into()));
    }
    let grid = config.grid()?;
    let mut section = Section::default();
    section.put("grid", grid.to_grid_file());
    let (f2, z) = cd_homology(&grid, config, &mut section, "")?;
    if let Some(r) = &f2 {
        section.put("homology_f2", r);
    }
    if let Some(r) = &z {
        section.put("homology_z", r);
    }
    if config.audit_markings {
        let seed = config.random_markings.map_or(1, |s| s + 1);
        let other = GridDiagram::random(config.n, seed)?;
        let mut side = Section::default();
        let (f2b, zb) = cd_homology(&other, config, &mut side, "")?;
        let same = f2.as_ref().map(HomologyReport::ranks) == f2b.as_ref().map(HomologyReport::ranks)
            && z.as_ref().map(|r| (r.ranks(), r.torsion_free())) == zb.as_ref().map(|r| (r.ranks(), r.torsion_free()));
        section.check(
            "marking_independence",
            same && side.pass() && other != grid,
            json!({ "other_grid": other.to_grid_file(), "distinct": other != grid, "other_checks": side.checks }),
        );
    }
    Ok(section)
}

/// Solves, normalizes and verifies sign assignments on CD and on the CDP window.
pub fn cmd_signs(config: &RunConfig) -> Result<(Section, SignAssignment), ReportError> {
    validate(config)?;
    let grid = config.grid()?;
    let s_params = config.s_params()?;
    let model = CdModel::new(&grid, config.k.max(2));
    let complex = model.f2_complex().map_err(|e| ReportError::Failed(e.to_string()))?;
    let mut section = Section::default();

    let s = signs_for(config, &model, &complex)?;
    let normal = gauge_normalize(&model, &s)?;
    let rules = verify_rules_cd(&model, &normal);
    section.check("cd_rules", rules.ok(), json!({ "checked": rules.checked, "violations": rules.violations }));
    let other = gauge_normalize(&model, &solve_sign_cd(&model, &complex, PivotOrder::Reverse)?)?;
    section.check("pivot_orders_agree", other.values == normal.values, json!(null));
    let audit = uniqueness_audit(&complex);
    section.check("unique_up_to_gauge", audit.unique_up_to_gauge, json!(audit));

    let f: Vec<_> = (1..=config.n).map(|j| solve_f_j(&model, &complex, j)).collect::<Result<_, _>>()?;
    let ext = extend_sign_cdp(&normal, &s_params, &f, Extension::Corrected);
    let window = Window { k: 2, n_max: config.n_max };
    let cdp_rules = verify_rules_cdp(&model, &ext, window);
    section.check("cdp_rules", cdp_rules.ok(), json!({ "checked": cdp_rules.checked, "violations": cdp_rules.violations }));
    let solved = solve_sign_cdp(&model, window, &s_params, PivotOrder::Forward)?;
    let bad = verify_constant_law(&model, &solved, &s_params, config.n_max);
    section.check("constant_law", bad.is_empty(), json!({ "n_max": config.n_max, "failures": bad }));

    let ones = normal.values.values().filter(|&&b| b).count();
    section.put("rectangles", normal.values.len());
    section.put("normalized_ones", ones);
    section.put("s_params", s_params.iter().map(|&b| u8::from(b)).collect::<Vec<_>>());
    Ok((section, ext))
}

/// CDP window: `∂² = 0` sweeps, witness construction and rank certification.
pub fn cmd_cdp(config: &RunConfig) -> Result<Section, ReportError> {
    validate(config)?;
    let grid = config.grid()?;
    let s_params = config.s_params()?;
    let model = CdModel::new(&grid, config.k.max(2));
    let complex = model.f2_complex().map_err(|e| ReportError::Failed(e.to_string()))?;
    let window = Window { k: config.k, n_max: config.n_max };
    let levels = enumerate_cdp(&model, window);
    let all: Vec<_> = levels.concat();
    let mut section = Section::default();
    section.put("window", window);
    section.put("triples", levels.iter().map(Vec::len).collect::<Vec<_>>());

    if config.ring.f2() {
        let bad = square_defects(&model, &all, None).expect("no signs needed");
        section.check("d2_f2", bad.is_empty(), json!({ "checked": all.len(), "defects": bad.len() }));
    }
    if config.ring.z() {
        let s = gauge_normalize(&model, &signs_for(config, &model, &complex)?)?;
        let f: Vec<_> = (1..=config.n).map(|j| solve_f_j(&model, &complex, j)).collect::<Result<_, _>>()?;
        let ext = extend_sign_cdp(&s, &s_params, &f, Extension::Corrected);
        let bad = square_defects(&model, &all, Some(&ext)).map_err(|e| ReportError::Failed(e.0))?;
        section.check("d2_z", bad.is_empty(), json!({ "checked": all.len(), "defects": bad.len() }));
    }
    witness_groups(&model, &complex, &levels, &mut section)?;
    Ok(section)
}

fn witness_groups(
    model: &CdModel,
    complex: &GradedComplex<Domain>,
    levels: &[Vec<crate::cdp::PartitionTriple>],
    section: &mut Section,
) -> Result<(), ReportError> {
    let ctx = WitnessContext::new(model, complex)?;
    let top = levels.len() - 1;
    let mut groups = vec![build_h0_witnesses(&ctx), build_h1_witnesses(&ctx)];
    if top >= 3 {
        let h2 = build_h2_witnesses(&ctx)?;
        let u_prime = h2.cycles[0].clone();
        groups.push(h2);
        if top >= 4 {
            groups.push(build_h3_witnesses(&ctx, &u_prime, &levels[3])?);
        }
    }
    let mut table = Vec::new();
    let mut reports = Vec::new();
    for g in &groups {
        let rep = certify(model, g, &levels[g.grading + 1]);
        section.check(&format!("witnesses_h{}", g.grading), rep.ok(), json!(null));
        table.push(rep.certificate.clone());
        reports.push(rep);
    }
    if top < 4 {
        section.put("witness_note", format!("window K = {top} covers witness gradings below {}", top));
    }
    if model.n() < 4 {
        section.put("family_note", "C/D/E families need n >= 3 and F/G need n >= 4; absent families are skipped");
    }
    section.put("rank_certificates", table);
    section.put("witnesses", reports);
    Ok(())
}

/// CD-side witnesses: the families, `U`, the cancellation audit, `T` and `r`.
pub fn cmd_witness(config: &RunConfig) -> Result<Section, ReportError> {
    validate(config)?;
    let grid = config.grid()?;
    let n = config.n;
    let model = CdModel::new(&grid, 3);
    let complex = model.f2_complex().map_err(|e| ReportError::Failed(e.to_string()))?;
    let ctx = WitnessContext::new(&model, &complex)?;
    let u = &ctx.u;
    let mut section = Section::default();

    section.put("families", u.members.iter().map(|m| m.name.clone()).collect::<Vec<_>>());
    let listed_cycle = u.listed_defect.is_empty();
    section.check(
        "u_listed_is_cycle",
        listed_cycle && u.listed.terms.len() == expected_u_terms(n),
        json!({ "terms": u.listed.terms.len(), "expected_terms": expected_u_terms(n), "odd_boundary_rectangles": u.listed_defect.len() }),
    );
    let completed_residue = boundary_parity(&model.cache, &u.completed.terms).len();
    section.check(
        "u_completed_is_cycle",
        completed_residue == 0,
        json!({ "terms": u.completed.terms.len(), "correction_terms": u.correction.len() }),
    );
    if n >= 4 {
        let audit = cancellation_audit(&model.cache, &u.members, &build_named_rectangles(n));
        section.check(
            "cancellation_audit",
            audit.ok(),
            json!({ "named": audit.entries.len(), "failing": audit.failures(), "unnamed": audit.unnamed.len() }),
        );
        section.put("cancellation", audit);
    } else {
        section.put("cancellation_note", "named rectangle families need n >= 4");
    }

    // T is a cocycle, and its value on U.
    let t_sweep = model.grading(3).iter().filter(|e| model.boundary_f2(e).iter().filter(|(d, _)| t_value(&grid, d)).count() % 2 == 1).count();
    section.check("t_cocycle", t_sweep == 0, json!({ "checked": model.grading(3).len(), "violations": t_sweep }));
    let t_listed = u.listed.terms.iter().filter(|d| t_value(&grid, d)).count();
    let t_completed = u.completed.terms.iter().filter(|d| t_value(&grid, d)).count();
    let m = n - 2;
    let displayed = n + 3 * m + m * m.saturating_sub(1);
    section.check(
        "t_of_u",
        t_listed == displayed && t_listed % 2 == 0 && t_completed % 2 == 0,
        json!({ "t_listed": t_listed, "displayed": displayed, "t_completed_mod2": t_completed % 2 }),
    );

    // r: the rightmost vertical annulus from any generator.
    let r = |d: &Domain| d.from() == d.to() && *d == vertical_annulus(&d.from(), n - 1);
    let r_sweep = model.grading(3).iter().filter(|e| model.boundary_f2(e).iter().filter(|(d, _)| r(d)).count() % 2 == 1).count();
    let r_u = u.completed.terms.iter().filter(|d| r(d)).count() % 2 == 1;
    let h2 = complex.homology_f2(2).map_err(|e| ReportError::Failed(e.to_string()))?;
    section.check("r_cocycle", r_sweep == 0, json!({ "violations": r_sweep }));
    section.check("r_of_u", r_u, json!(null));
    section.check(
        "u_generates_h2",
        r_sweep == 0 && r_u && completed_residue == 0 && h2 == 1,
        json!({ "h2_rank": h2 }),
    );
    Ok(section)
}
