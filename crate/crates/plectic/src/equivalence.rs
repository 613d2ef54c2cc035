//! Equivalences of (closed form, moment map) pairs, isotopy-generated
//! witnesses, the torus counterexample machinery, and the polynomial-in-`t`
//! homotopies realising inner equivalences.
//!
//! Two pairs are equivalent when `omega' - omega = d alpha` and
//! `phi' - phi = d_tot eta + tilde(alpha)` for an invariant `alpha` and a
//! cochain `eta` of total degree `n - 1`; inner equivalence is the special
//! case `alpha = 0`. An inner equivalence is the same thing as a homotopy
//! `H = h0(t) + h1(t) dt` of morphisms with `h0(0) = f`, `h0(1) = f'`,
//! subject to: `h0(t)` solves the moment-map equations for every `t`, and
//! `d_tot bar(h1(t)) = d/dt bar(h0(t))` where `bar` rescales the degree-`k`
//! slice by `varsigma(k)`.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::derham::{find_primitive, Exactness};
use crate::equivariant::{
    invariance_check, tilde_form_unchecked, InvarianceWitness, LieAction, TotalCochain,
};
use crate::form::{DifferentialForm, VectorField};
use crate::lie::CeFormCochain;
use crate::manifold::{Coordinate, ModelManifold, Param};
use crate::moment::{
    bracket_sum, f_from_phi, phi_from_f, varsigma, verify_linfty_direct, verify_primitive,
    LinftyVerdict, MomentError, MomentMapCandidate,
};
use crate::scalar::{rat, rat_int, Rational, ScalarFn};

/// Witness of an equivalence: `eta` of total degree `n - 1` and an invariant
/// `n`-form `alpha`.
#[derive(Clone, PartialEq, Debug)]
pub struct EquivalenceWitness {
    pub eta: TotalCochain,
    pub alpha: DifferentialForm,
}

impl EquivalenceWitness {
    pub fn trivial(manifold: &ModelManifold, dim_g: usize, n: usize) -> Self {
        EquivalenceWitness {
            eta: TotalCochain::zero(manifold, dim_g, n as i64 - 1),
            alpha: DifferentialForm::zero(manifold, n),
        }
    }

    /// Witness of the reversed equivalence.
    pub fn neg(&self) -> Self {
        EquivalenceWitness {
            eta: self.eta.neg(),
            alpha: -&self.alpha,
        }
    }

    /// Witness of the composed equivalence.
    pub fn add(&self, other: &Self) -> Self {
        EquivalenceWitness {
            eta: self.eta.add(&other.eta),
            alpha: &self.alpha + &other.alpha,
        }
    }
}

/// `bar(xi) = sum_k varsigma(k) xi_k`; involutive since `varsigma^2 = 1`.
pub fn bar(xi: &TotalCochain) -> TotalCochain {
    xi.map_slices_sign(varsigma)
}

#[derive(Error, Debug, PartialEq)]
pub enum EquivError {
    #[error("the {side} candidate is not a verified primitive for its form")]
    NotPrimitive { side: &'static str },
    #[error("alpha is not invariant: {0}")]
    AlphaNotInvariant(InvarianceWitness),
    #[error("{0}")]
    Moment(#[from] MomentError),
}

/// Verdict of a full equivalence check: residuals of the two defining
/// equations, plus an independent slice-by-slice recomputation of the
/// second one.
#[derive(Clone, PartialEq, Debug)]
pub struct EquivalenceVerdict {
    /// `omega' - omega - d alpha`.
    pub form_residual: DifferentialForm,
    /// `phi' - phi - d_tot eta - tilde(alpha)`.
    pub cochain_residual: TotalCochain,
    /// The same residual assembled from the explicit per-slice equations.
    pub expanded_residual: TotalCochain,
}

impl EquivalenceVerdict {
    pub fn is_ok(&self) -> bool {
        self.form_residual.is_zero() && self.cochain_residual.is_zero()
    }

    /// The operator route and the explicit expansion must agree; a mismatch
    /// is a bug.
    pub fn consistent(&self) -> bool {
        self.cochain_residual == self.expanded_residual
    }
}

/// The right-hand side `d_tot eta + tilde(alpha)` assembled from the
/// explicit per-slice equations
///
/// ```text
/// k = 1:       -d eta_1 + alpha_1
/// 1 < k < n:   d_g eta_{k-1} + (-1)^k d eta_k + (-1)^{k-1} alpha_k
/// k = n:       d_g eta_{n-1} + (-1)^{n-1} alpha_n
/// ```
///
/// written out independently of the `d_tot` operator composition.
fn expanded_rhs(
    eta: &TotalCochain,
    alpha: &DifferentialForm,
    action: &LieAction,
    n: usize,
) -> TotalCochain {
    let dim = action.dim();
    let manifold = action.manifold();
    let mut out = TotalCochain::zero(manifold, dim, n as i64);
    for k in 1..=dim.min(n) {
        let mut acc = CeFormCochain::new(dim, k);
        if k >= 2 {
            if let Some(prev) = eta.slice(k - 1) {
                acc = acc.add(&prev.ce_d(action.algebra()));
            }
        }
        if (k as i64) < n as i64 {
            if let Some(cur) = eta.slice(k) {
                let mut derived = cur.map_values(|f| f.exterior_d());
                if k % 2 == 1 {
                    derived = derived.neg();
                }
                acc = acc.add(&derived);
            }
        }
        let mut alpha_k = crate::equivariant::contraction_cochain(alpha, action, k);
        if k % 2 == 0 {
            alpha_k = alpha_k.neg();
        }
        acc = acc.add(&alpha_k);
        if !acc.is_zero() {
            out.set_slice(k, acc);
        }
    }
    out
}

/// Check that `(eta, alpha)` witnesses the equivalence of `(omega, phi)` and
/// `(omega', phi')`. Both candidates must be verified primitives and `alpha`
/// must be invariant.
pub fn verify_equivalence(
    omega: &DifferentialForm,
    phi: &TotalCochain,
    omega2: &DifferentialForm,
    phi2: &TotalCochain,
    witness: &EquivalenceWitness,
    action: &LieAction,
) -> Result<EquivalenceVerdict, EquivError> {
    if !verify_primitive(phi, omega, action)?.is_ok() {
        return Err(EquivError::NotPrimitive { side: "first" });
    }
    if !verify_primitive(phi2, omega2, action)?.is_ok() {
        return Err(EquivError::NotPrimitive { side: "second" });
    }
    invariance_check(&witness.alpha, action).map_err(EquivError::AlphaNotInvariant)?;

    let form_residual = &(omega2 - omega) - &witness.alpha.exterior_d();

    let diff = phi2.sub(phi);
    let rhs = witness
        .eta
        .d_tot(action.algebra())
        .add(&tilde_form_unchecked(&witness.alpha, action));
    let cochain_residual = diff.sub(&rhs);

    let n = phi.total_degree() as usize;
    let expanded =
        expanded_rhs(&witness.eta, &witness.alpha, action, n);
    let expanded_residual = diff.sub(&expanded);

    Ok(EquivalenceVerdict {
        form_residual,
        cochain_residual,
        expanded_residual,
    })
}

/// Verdict of an inner-equivalence check. Besides the residual of
/// `phi' - phi = d_tot eta`, the slice-1 differences are classified by the
/// exactness decision: a nonzero harmonic class there rules out *every*
/// witness, not just the given one.
#[derive(Clone, PartialEq, Debug)]
pub struct InnerVerdict {
    pub residual: TotalCochain,
    /// Exactness of `(phi' - phi)_1(e_i)` per basis index.
    pub slice1_exactness: Vec<(usize, Exactness)>,
}

impl InnerVerdict {
    pub fn is_ok(&self) -> bool {
        self.residual.is_zero()
    }

    /// Harmonic certificates proving that no inner equivalence exists at all.
    pub fn non_exactness_certificates(&self) -> Vec<(usize, &DifferentialForm)> {
        self.slice1_exactness
            .iter()
            .filter_map(|(i, e)| match e {
                Exactness::Class(h) => Some((*i, h)),
                Exactness::Exact(_) => None,
            })
            .collect()
    }
}

/// Check `phi' - phi = d_tot eta` for two primitives of the same form, and
/// classify the slice-1 difference through the exactness decision.
pub fn verify_inner_equivalence(
    omega: &DifferentialForm,
    phi: &TotalCochain,
    phi2: &TotalCochain,
    eta: &TotalCochain,
    action: &LieAction,
) -> Result<InnerVerdict, EquivError> {
    if !verify_primitive(phi, omega, action)?.is_ok() {
        return Err(EquivError::NotPrimitive { side: "first" });
    }
    if !verify_primitive(phi2, omega, action)?.is_ok() {
        return Err(EquivError::NotPrimitive { side: "second" });
    }
    let diff = phi2.sub(phi);
    let residual = diff.sub(&eta.d_tot(action.algebra()));

    let mut slice1_exactness = Vec::new();
    let n = phi.total_degree();
    for i in 0..action.dim() {
        let value = diff
            .slice(1)
            .and_then(|c| c.get(&[i]).cloned())
            .unwrap_or_else(|| {
                DifferentialForm::zero(action.manifold(), (n - 1).max(0) as usize)
            });
        // the difference of two primitives is d_tot-closed, so each slice-1
        // value is a closed form
        let decision = find_primitive(&value).expect("slice-1 difference must be closed");
        slice1_exactness.push((i, decision));
    }

    Ok(InnerVerdict {
        residual,
        slice1_exactness,
    })
}

// ---- isotopy witnesses ----

/// A one-parameter family of moment maps transported by a generating field,
/// polynomial in `s`.
#[derive(Clone, Debug)]
pub struct MomentFamily {
    pub x_s: VectorField,
    pub omega_s: DifferentialForm,
    pub f_s: MomentMapCandidate,
}

#[derive(Error, Debug)]
pub enum MomentFamilyError {
    #[error("the manifold does not declare the parameter s")]
    MissingParam,
    #[error("the generating field is not invariant: [v_e{}, X_s] is nonzero", .0 + 1)]
    GeneratorNotInvariant(usize),
    #[error("transport identity fails: d/ds omega^s + L_{{X_s}} omega^s is nonzero")]
    FormTransport(DifferentialForm),
    #[error("transport identity fails for component k={k}")]
    ComponentTransport { k: usize },
    #[error("the family is not a moment map identically in s")]
    NotMomentMapInFamily(LinftyVerdict),
    #[error("the computed witness fails the equivalence check")]
    WitnessRejected(Box<EquivalenceVerdict>),
    #[error("{0}")]
    Moment(#[from] MomentError),
    #[error("{0}")]
    Equiv(#[from] EquivError),
}

/// Certify that the endpoints of a transported family of moment maps are
/// equivalent, producing the witness
///
/// ```text
/// alpha = -int_0^1 iota_{X_s} omega^s ds
/// eta_k = (-1)^{k-1} varsigma(k) int_0^1 iota_{X_s} f^s_k ds
/// ```
///
/// Preconditions (exact polynomial identities in `s`): the generating field
/// is invariant, `d/ds omega^s = -L_{X_s} omega^s`,
/// `d/ds f^s_k = -L_{X_s} f^s_k`, and `f^s` solves the moment-map
/// equations for all `s`.
pub fn isotopy_to_equivalence(
    family: &MomentFamily,
    action: &LieAction,
) -> Result<(EquivalenceWitness, EquivalenceVerdict), MomentFamilyError> {
    let manifold = action.manifold();
    if !manifold.has_param(Param::S) {
        return Err(MomentFamilyError::MissingParam);
    }
    for i in 0..action.dim() {
        if !action.generator(i).lie_bracket(&family.x_s).is_zero() {
            return Err(MomentFamilyError::GeneratorNotInvariant(i));
        }
    }
    let form_transport = &family.omega_s.partial_param(Param::S)
        + &family.omega_s.lie_derivative(&family.x_s);
    if !form_transport.is_zero() {
        return Err(MomentFamilyError::FormTransport(form_transport));
    }
    for (k, c) in family.f_s.components() {
        let residual = c
            .map_values(|f| &f.partial_param(Param::S) + &f.lie_derivative(&family.x_s));
        if !residual.is_zero() {
            return Err(MomentFamilyError::ComponentTransport { k: *k });
        }
    }
    let in_family = verify_linfty_direct(&family.f_s, &family.omega_s, action)?;
    if !in_family.is_ok() {
        return Err(MomentFamilyError::NotMomentMapInFamily(in_family));
    }

    let n = family.f_s.n();
    let alpha = -&family
        .omega_s
        .contract_field(&family.x_s)
        .integrate_param_unit(Param::S);

    let mut eta = TotalCochain::zero(manifold, action.dim(), n as i64 - 1);
    for (k, c) in family.f_s.components() {
        let sign = if k % 2 == 1 { 1 } else { -1 } * varsigma(*k);
        let integrated = c.map_values(|f| {
            f.contract_field(&family.x_s)
                .integrate_param_unit(Param::S)
                .scale(&rat_int(sign))
        });
        if !integrated.is_zero() {
            eta.set_slice(*k, integrated);
        }
    }
    let witness = EquivalenceWitness { eta, alpha };

    let zero = Rational::zero();
    let one = rat_int(1);
    let omega0 = family.omega_s.subst_param(Param::S, &zero);
    let omega1 = family.omega_s.subst_param(Param::S, &one);
    let phi0 = phi_from_f(&family.f_s.subst_param(Param::S, &zero));
    let phi1 = phi_from_f(&family.f_s.subst_param(Param::S, &one));

    let verdict = verify_equivalence(&omega0, &phi0, &omega1, &phi1, &witness, action)?;
    if !verdict.is_ok() {
        return Err(MomentFamilyError::WitnessRejected(Box::new(verdict)));
    }
    Ok((witness, verdict))
}

// ---- the torus counterexample machinery ----

#[derive(Error, Debug, PartialEq)]
pub enum FixomegaError {
    #[error("the argument requires a pre-2-plectic structure (n = 2), got n = {0}")]
    NotPre2Plectic(usize),
    #[error("the generator of x is not a coordinate circle field")]
    NotAligned,
    #[error("f is not a moment map for omega")]
    NotMomentMap,
    #[error("{0}")]
    Moment(#[from] MomentError),
}

/// Certificate that no moment map induced by a Cartan cocycle is equivalent
/// to `f`.
#[derive(Clone, PartialEq, Debug)]
pub struct FixomegaReport {
    /// Torus direction with `v_x = par_theta{i+1}`.
    pub circle: usize,
    /// `iota_{v_x} phi_1(x)`, a function for `n = 2`.
    pub contraction_value: ScalarFn,
    /// Circle average of the contraction value; the obstruction survives
    /// every witness precisely when this is nonzero.
    pub average: ScalarFn,
    /// The supporting identity `theta_average(d/dtheta_i h, i) = 0`,
    /// verified on a battery of functions.
    pub stokes_identity_verified: bool,
    /// Issued when the average is nonzero and the identity verified.
    pub certificate: Option<String>,
}

impl FixomegaReport {
    pub fn certified(&self) -> bool {
        self.certificate.is_some()
    }
}

fn stokes_identity_battery(manifold: &ModelManifold, i: usize) -> bool {
    let a = manifold.torus_dim();
    let mut samples = vec![ScalarFn::one(manifold)];
    let mut freq = vec![0i64; a];
    freq[i] = 1;
    samples.push(ScalarFn::sin(manifold, &freq));
    freq[i] = 2;
    if a > 1 {
        freq[(i + 1) % a] = -1;
    }
    samples.push(ScalarFn::cos(manifold, &freq));
    if manifold.affine_dim() > 0 {
        let z = ScalarFn::z(manifold, 0);
        let trig = ScalarFn::sin(manifold, &freq);
        samples.push(&z.pow(2) + &(&z * &trig));
    }
    samples
        .iter()
        .all(|h| h.partial(Coordinate::Theta(i)).theta_average(i).is_zero())
}

/// Check the two obstruction ingredients on `(omega, f)` at the algebra
/// element `x`:
///
/// 1. `iota_{v_x} phi_1(x)` has nonzero circle average along the circle
///    direction of `v_x`;
/// 2. every function of the form `d/dtheta_i h` has zero circle average.
///
/// Together these rule out any equivalence between `f` and a moment map
/// arising from a Cartan cocycle, whose candidates satisfy
/// `iota_{v_x} phi_1(x) = 0`.
pub fn fixomega_certificate(
    omega: &DifferentialForm,
    f: &MomentMapCandidate,
    x: &[Rational],
    action: &LieAction,
) -> Result<FixomegaReport, FixomegaError> {
    if f.n() != 2 {
        return Err(FixomegaError::NotPre2Plectic(f.n()));
    }
    let manifold = action.manifold();
    let vx = action.field_for(x);
    let circle = (0..manifold.torus_dim())
        .find(|&i| vx == VectorField::frame(manifold, i))
        .ok_or(FixomegaError::NotAligned)?;
    if !verify_linfty_direct(f, omega, action)?.is_ok() {
        return Err(FixomegaError::NotMomentMap);
    }

    let f1x = f
        .component(1)
        .and_then(|c| c.eval_multi(&[x]))
        .unwrap_or_else(|| DifferentialForm::zero(manifold, 1));
    let contraction_value = f1x.contract_field(&vx).to_scalar();
    let average = contraction_value.theta_average(circle);
    let stokes_identity_verified = stokes_identity_battery(manifold, circle);

    let certificate = if !average.is_zero() && stokes_identity_verified {
        Some(format!(
            "iota_v phi_1(x) = {contraction_value} has nonzero circle average {average} \
             along theta{}; any witness changes it by a theta{}-derivative, which \
             averages to zero, while Cartan-induced moment maps make it vanish: \
             no moment map induced by a Cartan cocycle is equivalent to f",
            circle + 1,
            circle + 1
        ))
    } else {
        None
    };

    Ok(FixomegaReport {
        circle,
        contraction_value,
        average,
        stokes_identity_verified,
        certificate,
    })
}

// ---- homotopies of morphisms ----

/// A polynomial-in-`t` homotopy `H = h0(t) + h1(t) dt` between moment maps:
/// `h0` is a candidate with `t`-dependent coefficients, `h1` a cochain of
/// total degree `n - 1`.
#[derive(Clone, PartialEq, Debug)]
pub struct HomotopyMorphism {
    pub h0: MomentMapCandidate,
    pub h1: TotalCochain,
}

/// Condition-by-condition report on a homotopy.
#[derive(Clone, PartialEq, Debug)]
pub struct HomotopyReport {
    /// `h0(0) = f` and `h0(1) = f'`.
    pub boundary_at_zero: bool,
    pub boundary_at_one: bool,
    /// `h0(t)` solves the moment-map equations as a polynomial identity in `t`.
    pub morphism_identity: bool,
    /// The same, re-checked at rational sample values of `t`.
    pub morphism_samples: Vec<(Rational, bool)>,
    /// `d_tot bar(h1(t)) = d/dt bar(h0(t))` exactly.
    pub derivative_identity: bool,
    /// Raw system, checked independently: the Hamiltonian family in `t`.
    pub raw_hamiltonian: bool,
    /// `d/dt h0(t)_1 + d h1(t)_1 = 0`.
    pub raw_first: bool,
    /// The `dt`-free structure equations for `2 <= m <= n+1`.
    pub raw_structure: bool,
    /// The `dt` structure equations for `2 <= m <= n+1`.
    pub raw_dt: bool,
}

impl HomotopyReport {
    pub fn is_ok(&self) -> bool {
        self.boundary_at_zero
            && self.boundary_at_one
            && self.morphism_identity
            && self.morphism_samples.iter().all(|(_, ok)| *ok)
            && self.derivative_identity
            && self.raw_ok()
    }

    /// The raw system alone.
    pub fn raw_ok(&self) -> bool {
        self.raw_hamiltonian && self.raw_first && self.raw_structure && self.raw_dt
    }
}

#[derive(Error, Debug)]
pub enum HomotopyError {
    #[error("the pair is not inner equivalent via the given eta")]
    NotInnerEquivalent(Box<InnerVerdict>),
    #[error("a homotopy condition failed")]
    ConditionFailed(Box<HomotopyReport>),
    #[error("{0}")]
    Equiv(#[from] EquivError),
    #[error("{0}")]
    Moment(#[from] MomentError),
}

/// Check every homotopy condition for `H` against the boundary data
/// `(omega, f, f')`. All inputs must live on a manifold declaring `t`.
pub fn check_homotopy(
    h: &HomotopyMorphism,
    omega: &DifferentialForm,
    f: &MomentMapCandidate,
    f2: &MomentMapCandidate,
    action: &LieAction,
) -> Result<HomotopyReport, MomentError> {
    let zero = Rational::zero();
    let one = rat_int(1);
    let n = h.h0.n();

    let boundary_at_zero = h.h0.subst_param(Param::T, &zero) == *f;
    let boundary_at_one = h.h0.subst_param(Param::T, &one) == *f2;

    let morphism_identity = verify_linfty_direct(&h.h0, omega, action)?.is_ok();
    let mut morphism_samples = Vec::new();
    for t in [zero.clone(), one.clone(), rat(1, 2), rat_int(-2)] {
        let ok = verify_linfty_direct(&h.h0.subst_param(Param::T, &t), omega, action)?.is_ok();
        morphism_samples.push((t, ok));
    }

    let bar_h0 = phi_from_f(&h.h0);
    let derivative_identity =
        bar(&h.h1).d_tot(action.algebra()) == bar_h0.partial_param(Param::T);

    // raw system, assembled directly from the component equations
    let manifold = action.manifold();
    let dim = action.dim();

    let mut raw_hamiltonian = true;
    for i in 0..dim {
        let h01 = h
            .h0
            .component(1)
            .and_then(|c| c.get(&[i]).cloned())
            .unwrap_or_else(|| DifferentialForm::zero(manifold, n - 1));
        let residual = &h01.exterior_d() + &omega.contract_field(action.generator(i));
        if !residual.is_zero() {
            raw_hamiltonian = false;
        }
    }

    let mut raw_first = true;
    for i in 0..dim {
        let dt_h01 = h
            .h0
            .component(1)
            .and_then(|c| c.get(&[i]).cloned())
            .unwrap_or_else(|| DifferentialForm::zero(manifold, n - 1))
            .partial_param(Param::T);
        let d_h11 = h
            .h1
            .slice(1)
            .and_then(|c| c.get(&[i]).cloned())
            .unwrap_or_else(|| DifferentialForm::zero(manifold, n - 2))
            .exterior_d();
        if !(&dt_h01 + &d_h11).is_zero() {
            raw_first = false;
        }
    }

    let mut raw_structure = true;
    let mut raw_dt = true;
    // wrap h1 as a candidate of top degree n-1 so the bracket sums apply
    let mut h1_candidate = MomentMapCandidate::zero(manifold, dim, (n - 1).max(1));
    if n >= 2 {
        for (k, c) in h.h1.slices() {
            h1_candidate.set_component(*k, c.clone());
        }
    }
    for m in 2..=(n + 1).min(dim) {
        for tuple in itertools::Itertools::combinations(0..dim, m) {
            let fields: Vec<VectorField> = tuple
                .iter()
                .map(|&i| action.generator(i).clone())
                .collect();

            // dt-free part: bracket sum of h0_{m-1} = d h0_m + varsigma(m) iota omega
            let lhs0 = bracket_sum(&h.h0, action, &tuple);
            let h0m = h
                .h0
                .component(m)
                .and_then(|c| c.get(&tuple).cloned())
                .unwrap_or_else(|| DifferentialForm::zero(manifold, n.saturating_sub(m)));
            let rhs0 = &h0m.exterior_d()
                + &omega.contract(&fields).scale(&rat_int(varsigma(m)));
            if !(&lhs0 - &rhs0).is_zero() {
                raw_structure = false;
            }

            // dt part: bracket sum of h1_{m-1} = d h1_m + (-1)^{1-m} dt h0_m
            let lhs1 = bracket_sum(&h1_candidate, action, &tuple);
            let h1m = h
                .h1
                .slice(m)
                .and_then(|c| c.get(&tuple).cloned())
                .unwrap_or_else(|| {
                    DifferentialForm::zero(manifold, (n as i64 - 1 - m as i64).max(0) as usize)
                });
            let mut dt_h0m = h0m.partial_param(Param::T);
            if m % 2 == 0 {
                dt_h0m = -&dt_h0m;
            }
            let rhs1 = &h1m.exterior_d() + &dt_h0m;
            if !(&lhs1 - &rhs1).is_zero() {
                raw_dt = false;
            }
        }
    }

    Ok(HomotopyReport {
        boundary_at_zero,
        boundary_at_one,
        morphism_identity,
        morphism_samples,
        derivative_identity,
        raw_hamiltonian,
        raw_first,
        raw_structure,
        raw_dt,
    })
}

/// Build the homotopy `H = bar(phi + t d_tot eta) + bar(eta) dt` realising a
/// verified inner equivalence, and check every condition on it.
pub fn build_homotopy_from_inner(
    omega: &DifferentialForm,
    phi: &TotalCochain,
    phi2: &TotalCochain,
    eta: &TotalCochain,
    action: &LieAction,
) -> Result<(HomotopyMorphism, HomotopyReport), HomotopyError> {
    let inner = verify_inner_equivalence(omega, phi, phi2, eta, action)?;
    if !inner.is_ok() {
        return Err(HomotopyError::NotInnerEquivalent(Box::new(inner)));
    }

    let mani_t = action.manifold().extended_with(Param::T);
    let action_t = action.promote(&mani_t);
    let omega_t = omega.promote(&mani_t);
    let phi_t = phi.promote(&mani_t);
    let eta_t = eta.promote(&mani_t);

    let t = ScalarFn::param(&mani_t, Param::T);
    let shift = eta_t
        .d_tot(action_t.algebra())
        .map_forms(|form| form.scalar_mul(&t));
    let h0 = f_from_phi(&phi_t.add(&shift));
    let h1 = bar(&eta_t);
    let h = HomotopyMorphism { h0, h1 };

    let f = f_from_phi(&phi_t);
    let f2 = f_from_phi(&phi2.promote(&mani_t));
    let report = check_homotopy(&h, &omega_t, &f, &f2, &action_t)?;
    if !report.is_ok() {
        return Err(HomotopyError::ConditionFailed(Box::new(report)));
    }
    Ok((h, report))
}

/// Recover `eta = int_0^1 bar(h1(t)) dt` from a homotopy satisfying the
/// derivative identity; then `bar(h0(1)) - bar(h0(0)) = d_tot eta` exactly.
pub fn extract_eta_from_homotopy(
    h: &HomotopyMorphism,
    action: &LieAction,
) -> Result<TotalCochain, HomotopyError> {
    let bar_h0 = phi_from_f(&h.h0);
    if bar(&h.h1).d_tot(action.algebra()) != bar_h0.partial_param(Param::T) {
        return Err(HomotopyError::ConditionFailed(Box::new(HomotopyReport {
            boundary_at_zero: true,
            boundary_at_one: true,
            morphism_identity: true,
            morphism_samples: Vec::new(),
            derivative_identity: false,
            raw_hamiltonian: true,
            raw_first: true,
            raw_structure: true,
            raw_dt: true,
        })));
    }
    Ok(bar(&h.h1).integrate_param_unit(Param::T))
}

impl fmt::Display for HomotopyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "boundary(0)={} boundary(1)={} morphism={} derivative={} raw={}",
            self.boundary_at_zero,
            self.boundary_at_one,
            self.morphism_identity,
            self.derivative_identity,
            self.raw_ok()
        )
    }
}
