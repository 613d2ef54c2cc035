//! Command implementations: each one loads a scenario, runs the relevant
//! checks and emits a [`Report`].
//!
//! Exit codes: `0` every check passed, `1` a mathematical check failed,
//! `2` the input could not be parsed or is structurally invalid.

use std::path::PathBuf;
use std::time::Instant;

use plectic::cartan::{
    cartan_cocycle_check, isotopy_to_cartan_equiv, moment_from_cartan, CartanError, FamilyError,
};
use plectic::equivalence::{
    build_homotopy_from_inner, extract_eta_from_homotopy, fixomega_certificate,
    isotopy_to_equivalence, verify_equivalence, verify_inner_equivalence, EquivalenceWitness,
    FixomegaError, HomotopyError, MomentFamilyError,
};
use plectic::equivariant::invariance_check;
use plectic::moment::{
    cross_check, existence_hypotheses, f_from_phi, monomial_ansatz, phi_from_f, solve_primitive,
    SolveMomentOutcome,
};

use crate::report::Report;
use crate::scenario::{parse_x_flag, Scenario, ScenarioError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub scenario: PathBuf,
    pub format: Format,
    pub report_path: Option<PathBuf>,
    pub point: Option<String>,
    pub ansatz: Option<String>,
    pub x: Option<String>,
    pub timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CommandKind {
    Validate,
    CheckAction,
    CheckMomentmap,
    FromCartan,
    Obstruction,
    Solve,
    CheckEquivalence,
    CheckInner,
    IsotopyWitness,
    BuildHomotopy,
    Fixomega,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Validate => "validate",
            CommandKind::CheckAction => "check-action",
            CommandKind::CheckMomentmap => "check-momentmap",
            CommandKind::FromCartan => "from-cartan",
            CommandKind::Obstruction => "obstruction",
            CommandKind::Solve => "solve",
            CommandKind::CheckEquivalence => "check-equivalence",
            CommandKind::CheckInner => "check-inner",
            CommandKind::IsotopyWitness => "isotopy-witness",
            CommandKind::BuildHomotopy => "build-homotopy",
            CommandKind::Fixomega => "fixomega",
        }
    }
}

/// Run a command end to end and return the process exit code.
pub fn execute(kind: CommandKind, opts: &RunOptions) -> i32 {
    let started = Instant::now();
    let scenario = match Scenario::load(&opts.scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let result = dispatch(kind, &scenario, opts);
    match result {
        Ok(mut report) => {
            if opts.timing {
                report.timing_ms = Some(started.elapsed().as_millis());
            }
            let rendered = match opts.format {
                Format::Text => report.render_text(),
                Format::Machine => report.render_machine(),
            };
            if let Some(path) = &opts.report_path {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("error: cannot write report to {}: {e}", path.display());
                    return 2;
                }
            } else {
                print!("{rendered}");
            }
            // structural problems surfaced by `validate` are input errors
            if kind == CommandKind::Validate && !report.all_ok() {
                2
            } else {
                report.exit_code()
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(
    kind: CommandKind,
    scenario: &Scenario,
    opts: &RunOptions,
) -> Result<Report, ScenarioError> {
    match kind {
        CommandKind::Validate => validate(scenario),
        CommandKind::CheckAction => check_action(scenario),
        CommandKind::CheckMomentmap => check_momentmap(scenario),
        CommandKind::FromCartan => from_cartan(scenario),
        CommandKind::Obstruction => obstruction(scenario, opts),
        CommandKind::Solve => solve(scenario, opts),
        CommandKind::CheckEquivalence => check_equivalence(scenario),
        CommandKind::CheckInner => check_inner(scenario),
        CommandKind::IsotopyWitness => isotopy_witness(scenario),
        CommandKind::BuildHomotopy => build_homotopy(scenario),
        CommandKind::Fixomega => fixomega(scenario, opts),
    }
}

fn validate(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut report = Report::new("validate", &s.name);
    // parsing, Jacobi and the action morphism were all enforced during
    // loading; surface them as explicit check lines
    report.push("expressions parse", true, None);
    report.push("Jacobi identity", true, None);
    report.push("action is a Lie algebra morphism", true, None);

    let geometric = !s.action.generators().is_empty() || !s.forms.is_empty();
    report.push(
        "manifold has coordinates",
        !geometric || s.manifold.dim() >= 1,
        None,
    );

    let n = s.n;
    let check_form = |report: &mut Report, key: &str, degree: usize| {
        if s.forms.contains_key(key) {
            match s.form(key, degree) {
                Ok(_) => report.push(format!("forms.{key} has degree {degree}"), true, None),
                Err(e) => report.push(format!("forms.{key} has degree {degree}"), false, Some(e.to_string())),
            }
        }
    };
    check_form(&mut report, "omega", n + 1);
    check_form(&mut report, "omega_prime", n + 1);
    check_form(&mut report, "alpha", n);

    for (stem, suffix, what) in [
        ("f", "", "moment map"),
        ("f", "_prime", "second moment map"),
    ] {
        if s.maps.contains_key(&format!("{stem}1{suffix}")) {
            match if suffix.is_empty() {
                s.moment_map()
            } else {
                s.moment_map_prime()
            } {
                Ok(_) => report.push(format!("{what} components have valid degrees"), true, None),
                Err(e) => report.push(
                    format!("{what} components have valid degrees"),
                    false,
                    Some(e.to_string()),
                ),
            }
        }
    }
    if s.maps.keys().any(|k| k.starts_with("eta")) {
        match s.eta() {
            Ok(_) => report.push("eta components have valid degrees", true, None),
            Err(e) => report.push(
                "eta components have valid degrees",
                false,
                Some(e.to_string()),
            ),
        }
    }
    for (key, degree) in [("mu", n.max(1) - 1), ("mu_prime", n.max(1) - 1)] {
        if s.maps.contains_key(key) {
            match s.gmap(key, degree) {
                Ok(_) => report.push(format!("maps.{key} has degree {degree}"), true, None),
                Err(e) => report.push(
                    format!("maps.{key} has degree {degree}"),
                    false,
                    Some(e.to_string()),
                ),
            }
        }
    }
    if s.maps.contains_key("F") && n >= 2 {
        match s.gmap("F", n - 2) {
            Ok(_) => report.push("maps.F has valid degree", true, None),
            Err(e) => report.push("maps.F has valid degree", false, Some(e.to_string())),
        }
    }
    if s.has_cartan_family() {
        match s.cartan_family() {
            Ok(_) => report.push("family (Cartan flavour) well formed", true, None),
            Err(e) => report.push(
                "family (Cartan flavour) well formed",
                false,
                Some(e.to_string()),
            ),
        }
    }
    if s.has_moment_family() {
        match s.moment_family() {
            Ok(_) => report.push("family (moment flavour) well formed", true, None),
            Err(e) => report.push(
                "family (moment flavour) well formed",
                false,
                Some(e.to_string()),
            ),
        }
    }
    Ok(report)
}

fn check_action(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut report = Report::new("check-action", &s.name);
    report.push(
        "action is a Lie algebra morphism",
        s.action.morphism_check().is_ok(),
        None,
    );
    let omega = s.form("omega", s.n + 1)?;
    report.push("omega is closed", omega.exterior_d().is_zero(), None);
    match invariance_check(&omega, &s.action) {
        Ok(()) => report.push("omega is invariant", true, None),
        Err(w) => report.push("omega is invariant", false, Some(w.to_string())),
    }
    Ok(report)
}

fn check_momentmap(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut report = Report::new("check-momentmap", &s.name);
    let omega = s.form("omega", s.n + 1)?;
    let f = s.moment_map()?;
    let check = cross_check(&f, &omega, &s.action)
        .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
    report.push(
        "coboundary route (d_tot phi = tilde omega)",
        check.primitive.is_ok(),
        residual_detail(&check.primitive.localization()),
    );
    report.push(
        "direct route (structure equations)",
        check.direct.is_ok(),
        if check.direct.violations.is_empty() {
            None
        } else {
            Some(
                check
                    .direct
                    .violations
                    .iter()
                    .map(|v| format!("{} at {:?}", v.family, one_based(&v.tuple)))
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        },
    );
    report.push(
        "routes agree",
        check.agree(),
        (!check.agree()).then(|| "internal inconsistency: please report this as a bug".into()),
    );
    // equivariance is not part of validity; reported for information only
    let equivariant = plectic::moment::equivariance_check_components(&f, &s.action);
    report.certificate(match equivariant {
        Ok(()) => "components are equivariant".to_string(),
        Err(w) => format!(
            "components are NOT equivariant (first failure at k={}, e{})",
            w.k,
            w.index + 1
        ),
    });
    Ok(report)
}

fn one_based(tuple: &[usize]) -> Vec<usize> {
    tuple.iter().map(|i| i + 1).collect()
}

fn residual_detail(locs: &[(usize, Vec<usize>)]) -> Option<String> {
    if locs.is_empty() {
        return None;
    }
    Some(
        locs.iter()
            .map(|(k, t)| format!("k={k} at {:?}", one_based(t)))
            .collect::<Vec<_>>()
            .join("; "),
    )
}

fn from_cartan(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut report = Report::new("from-cartan", &s.name);
    let omega = s.form("omega", s.n + 1)?;
    let mu = s.gmap("mu", s.n - 1)?;
    let cocycle = cartan_cocycle_check(&omega, &mu, &s.action)
        .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
    for cond in ['a', 'b', 'c'] {
        let failures: Vec<String> = cocycle
            .failures
            .iter()
            .filter(|f| f.condition() == cond)
            .map(|f| f.to_string())
            .collect();
        let name = match cond {
            'a' => "(a) d mu(x) = -iota_{v_x} omega",
            'b' => "(b) mu is equivariant",
            _ => "(c) iota_{v_x} mu(x) = 0",
        };
        report.push(
            name,
            failures.is_empty(),
            (!failures.is_empty()).then(|| failures.join("; ")),
        );
    }
    report.push(
        "(a, c) match the direct d_G test",
        cocycle.consistent(),
        None,
    );
    if !cocycle.is_ok() {
        return Ok(report);
    }

    match moment_from_cartan(&omega, &mu, &s.action) {
        Ok(f) => {
            let check = cross_check(&f, &omega, &s.action)
                .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
            report.push("induced moment map verifies (both routes)", check.is_ok(), None);
            for (k, c) in f.components() {
                report.certificate(format!("f{k}: {c}"));
            }
        }
        Err(CartanError::NotCocycle(_)) => {
            report.push("induced moment map verifies (both routes)", false, None);
        }
        Err(e) => return Err(ScenarioError::Invalid(e.to_string())),
    }
    Ok(report)
}

fn obstruction(s: &Scenario, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let mut report = Report::new("obstruction", &s.name);
    let omega = s.form("omega", s.n + 1)?;
    let point = s.point(opts.point.as_deref())?;
    let existence = existence_hypotheses(&omega, &s.action, &point)
        .map_err(|e| ScenarioError::Invalid(e.to_string()))?;

    report.certificate(format!("evaluation point: {point}"));
    report.certificate(format!(
        "restricted top cochain: {}",
        existence.obstruction.cochain
    ));
    report.certificate(format!("CE Betti numbers: {:?}", existence.ce_betti));
    report.certificate(format!(
        "de Rham Betti numbers (degrees 0..={}): {:?}",
        s.n + 1,
        existence.derham_betti
    ));
    for (j, vanish) in &existence.products_vanish {
        report.certificate(format!(
            "H^{j}_CE (x) H^{}(M) = 0: {vanish}",
            s.n + 1 - j
        ));
    }
    report.certificate(format!("conclusion: {}", existence.conclusion));

    match &existence.obstruction.verdict {
        plectic::lie::CoboundaryOutcome::Coboundary(b) => {
            report.push("obstruction class vanishes", true, None);
            report.certificate(format!("primitive cochain: {b}"));
        }
        plectic::lie::CoboundaryOutcome::Class(cert) => {
            report.push(
                "obstruction class vanishes",
                false,
                Some(format!(
                    "functional {} pairs to {}",
                    cert.functional, cert.pairing
                )),
            );
        }
    }
    Ok(report)
}

fn parse_ansatz_spec(text: &str) -> Result<(u32, i64), ScenarioError> {
    let mut poly = None;
    let mut trig = 0i64;
    for part in text.split(',') {
        let part = part.trim();
        if let Some(d) = part.strip_prefix("poly:") {
            poly = Some(d.parse::<u32>().map_err(|_| {
                ScenarioError::Invalid(format!("bad ansatz polynomial degree `{d}`"))
            })?);
        } else if let Some(f) = part.strip_prefix("trig:") {
            trig = f.parse::<i64>().map_err(|_| {
                ScenarioError::Invalid(format!("bad ansatz trigonometric bound `{f}`"))
            })?;
        } else {
            return Err(ScenarioError::Invalid(format!(
                "bad ansatz component `{part}`; expected poly:<degree> or trig:<bound>"
            )));
        }
    }
    let poly = poly.ok_or_else(|| {
        ScenarioError::Invalid("the ansatz must specify poly:<degree>".into())
    })?;
    Ok((poly, trig))
}

fn solve(s: &Scenario, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let mut report = Report::new("solve", &s.name);
    let omega = s.form("omega", s.n + 1)?;
    let spec = opts
        .ansatz
        .as_deref()
        .ok_or_else(|| ScenarioError::Missing("--ansatz".into()))?;
    let (poly, trig) = parse_ansatz_spec(spec)?;
    let ansatz = monomial_ansatz(&s.manifold, s.algebra.dim(), s.n, poly, trig);
    report.certificate(format!(
        "ansatz: {} monomial generators (poly degree <= {poly}, trig bound {trig})",
        ansatz.len()
    ));
    match solve_primitive(&omega, &s.action, &ansatz)
        .map_err(|e| ScenarioError::Invalid(e.to_string()))?
    {
        SolveMomentOutcome::Solution(phi) => {
            report.push("solution found in ansatz", true, None);
            let f = f_from_phi(&phi);
            let check = cross_check(&f, &omega, &s.action)
                .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
            report.push("solution verifies (both routes)", check.is_ok(), None);
            for (k, c) in f.components() {
                report.certificate(format!("f{k}: {c}"));
            }
        }
        SolveMomentOutcome::NoSolutionInAnsatz => {
            report.push(
                "solution found in ansatz",
                false,
                Some(
                    "no solution in the ansatz span; this does not certify non-existence"
                        .into(),
                ),
            );
        }
    }
    Ok(report)
}

fn check_equivalence(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut report = Report::new("check-equivalence", &s.name);
    let omega = s.form("omega", s.n + 1)?;
    let omega2 = if s.forms.contains_key("omega_prime") {
        s.form("omega_prime", s.n + 1)?
    } else {
        omega.clone()
    };
    let phi = phi_from_f(&s.moment_map()?);
    let phi2 = phi_from_f(&s.moment_map_prime()?);
    let witness = EquivalenceWitness {
        eta: s.eta()?,
        alpha: s.form_or_zero("alpha", s.n)?,
    };
    let verdict = verify_equivalence(&omega, &phi, &omega2, &phi2, &witness, &s.action)
        .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
    report.push(
        "form difference equation (omega' - omega = d alpha)",
        verdict.form_residual.is_zero(),
        (!verdict.form_residual.is_zero()).then(|| format!("residual {}", verdict.form_residual)),
    );
    report.push(
        "cochain difference equation (phi' - phi = d_tot eta + tilde alpha)",
        verdict.cochain_residual.is_zero(),
        residual_detail(&verdict.cochain_residual.nonzero_positions()),
    );
    report.push("explicit slice expansion agrees", verdict.consistent(), None);
    Ok(report)
}

fn check_inner(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut report = Report::new("check-inner", &s.name);
    let omega = s.form("omega", s.n + 1)?;
    let phi = phi_from_f(&s.moment_map()?);
    let phi2 = phi_from_f(&s.moment_map_prime()?);
    let eta = s.eta()?;
    let verdict = verify_inner_equivalence(&omega, &phi, &phi2, &eta, &s.action)
        .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
    report.push(
        "coboundary equation (phi' - phi = d_tot eta)",
        verdict.is_ok(),
        residual_detail(&verdict.residual.nonzero_positions()),
    );
    for (i, exactness) in &verdict.slice1_exactness {
        match exactness {
            plectic::derham::Exactness::Exact(_) => {
                report.push(
                    format!("slice-1 difference is exact at e{}", i + 1),
                    true,
                    None,
                );
            }
            plectic::derham::Exactness::Class(h) => {
                report.push(
                    format!("slice-1 difference is exact at e{}", i + 1),
                    false,
                    Some(format!("harmonic class {h}")),
                );
                report.certificate(format!(
                    "no inner equivalence exists: (phi' - phi)_1(e{}) has nonzero class {h}",
                    i + 1
                ));
            }
        }
    }
    Ok(report)
}

fn isotopy_witness(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut report = Report::new("isotopy-witness", &s.name);
    if !s.has_cartan_family() && !s.has_moment_family() {
        return Err(ScenarioError::Missing("family.mu_s or family.f1_s".into()));
    }
    if s.has_cartan_family() {
        let family = s.cartan_family()?;
        match isotopy_to_cartan_equiv(&family, &s.action) {
            Ok((alpha, f_map, equiv)) => {
                report.push("Cartan family is consistent", true, None);
                report.push("Cartan witness verifies", equiv.is_ok(), None);
                report.certificate(format!("alpha = {alpha}"));
                for i in 0..f_map.len() {
                    report.certificate(format!("F(e{}) = {}", i + 1, f_map.value(i)));
                }
            }
            Err(FamilyError::Cartan(e)) => {
                return Err(ScenarioError::Invalid(e.to_string()))
            }
            Err(e) => {
                report.push("Cartan family is consistent", false, Some(e.to_string()));
            }
        }
    }
    if s.has_moment_family() {
        let family = s.moment_family()?;
        match isotopy_to_equivalence(&family, &s.action) {
            Ok((witness, verdict)) => {
                report.push("moment-map family is consistent", true, None);
                report.push("moment-map witness verifies", verdict.is_ok(), None);
                report.certificate(format!("alpha = {}", witness.alpha));
                report.certificate(format!("eta = {}", witness.eta));
            }
            Err(MomentFamilyError::Moment(e)) => {
                return Err(ScenarioError::Invalid(e.to_string()))
            }
            Err(e) => {
                report.push(
                    "moment-map family is consistent",
                    false,
                    Some(e.to_string()),
                );
            }
        }
    }
    Ok(report)
}

fn build_homotopy(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut report = Report::new("build-homotopy", &s.name);
    let omega = s.form("omega", s.n + 1)?;
    let phi = phi_from_f(&s.moment_map()?);
    let phi2 = phi_from_f(&s.moment_map_prime()?);
    let eta = s.eta()?;
    match build_homotopy_from_inner(&omega, &phi, &phi2, &eta, &s.action) {
        Ok((h, hr)) => {
            report.push("inner equivalence holds", true, None);
            report.push("boundary value at t = 0", hr.boundary_at_zero, None);
            report.push("boundary value at t = 1", hr.boundary_at_one, None);
            report.push(
                "morphism equations hold identically in t",
                hr.morphism_identity,
                None,
            );
            report.push(
                "morphism equations hold at rational samples",
                hr.morphism_samples.iter().all(|(_, ok)| *ok),
                None,
            );
            report.push("derivative identity", hr.derivative_identity, None);
            report.push("raw system: hamiltonian family", hr.raw_hamiltonian, None);
            report.push("raw system: first component", hr.raw_first, None);
            report.push("raw system: dt-free structure equations", hr.raw_structure, None);
            report.push("raw system: dt structure equations", hr.raw_dt, None);

            let action_t = s.action.promote(h.h0.manifold());
            match extract_eta_from_homotopy(&h, &action_t) {
                Ok(recovered) => {
                    let alg = s.action.algebra();
                    let same = recovered.d_tot(alg)
                        == eta.promote(h.h0.manifold()).d_tot(alg);
                    report.push("extracted witness induces the same coboundary", same, None);
                    report.certificate(format!("extracted eta = {recovered}"));
                }
                Err(e) => {
                    report.push(
                        "extracted witness induces the same coboundary",
                        false,
                        Some(e.to_string()),
                    );
                }
            }
        }
        Err(HomotopyError::NotInnerEquivalent(v)) => {
            report.push(
                "inner equivalence holds",
                false,
                residual_detail(&v.residual.nonzero_positions()),
            );
        }
        Err(HomotopyError::ConditionFailed(hr)) => {
            report.push("inner equivalence holds", true, None);
            report.push("homotopy conditions", false, Some(hr.to_string()));
        }
        Err(e) => return Err(ScenarioError::Invalid(e.to_string())),
    }
    Ok(report)
}

fn fixomega(s: &Scenario, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let mut report = Report::new("fixomega", &s.name);
    let omega = s.form("omega", s.n + 1)?;
    let f = s.moment_map()?;
    let x = match &opts.x {
        Some(text) => parse_x_flag(s.algebra.dim(), text)?,
        None => s
            .fixomega_x
            .clone()
            .ok_or_else(|| ScenarioError::Missing("fixomega.x or --x".into()))?,
    };
    match fixomega_certificate(&omega, &f, &x, &s.action) {
        Ok(r) => {
            report.push(
                format!("generator aligned with circle theta{}", r.circle + 1),
                true,
                None,
            );
            report.push(
                "contraction iota_v phi_1(x) is nonzero",
                !r.contraction_value.is_zero(),
                Some(format!("value {}", r.contraction_value)),
            );
            report.push(
                "circle average of the contraction is nonzero",
                !r.average.is_zero(),
                Some(format!("average {}", r.average)),
            );
            report.push(
                "derivative-average identity verified",
                r.stokes_identity_verified,
                None,
            );
            report.push("certificate issued", r.certified(), None);
            if let Some(cert) = &r.certificate {
                report.certificate(cert.clone());
            }
        }
        Err(FixomegaError::NotAligned | FixomegaError::NotPre2Plectic(_)) => {
            return Err(ScenarioError::Invalid(
                "fixomega requires n = 2 and a generator aligned with a circle direction"
                    .into(),
            ));
        }
        Err(FixomegaError::NotMomentMap) => {
            report.push("f is a moment map for omega", false, None);
        }
        Err(FixomegaError::Moment(e)) => {
            return Err(ScenarioError::Invalid(e.to_string()))
        }
    }
    Ok(report)
}
