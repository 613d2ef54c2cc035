//! The Cartan model of an action, at the exterior-calculus level: forms with
//! polynomial coefficients in the degree-two generators `xi^1..xi^dim`, the
//! differential `d_G = d (x) 1 - sum_i iota_{v_i} (x) xi^i`, cocycle checks
//! for elements `omega - mu`, and the moment maps they induce.
//!
//! For an invariant closed `omega` and a linear `mu` given on the basis,
//! `omega - mu` is a cocycle in the model precisely when
//!
//! - (a) `d mu(x) = -iota_{v_x} omega`,
//! - (b) `mu` is equivariant,
//! - (c) `iota_{v_x} mu(x) = 0`;
//!
//! (a) and (c) together are equivalent to `d_G(omega - mu) = 0`, which the
//! check recomputes independently as a consistency guard.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::equivariant::{
    equivariance_check, invariance_check, tilde_equivariant_unchecked, EquivarianceWitness,
    GMap, InvarianceWitness, LieAction,
};
use crate::form::{DifferentialForm, VectorField};
use crate::manifold::{ModelManifold, Param};
use crate::moment::{f_from_phi, MomentMapCandidate};
use crate::scalar::Rational;

/// An element of `Omega(M) (x) S g*`, homogeneous of total degree
/// `form degree + 2 * |xi exponent|`.
#[derive(Clone, PartialEq, Debug)]
pub struct CartanElement {
    manifold: ModelManifold,
    dim_g: usize,
    degree: usize,
    terms: BTreeMap<Vec<u32>, DifferentialForm>,
}

impl CartanElement {
    pub fn zero(manifold: &ModelManifold, dim_g: usize, degree: usize) -> Self {
        CartanElement {
            manifold: manifold.clone(),
            dim_g,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `form (x) 1`.
    pub fn from_form(form: &DifferentialForm, dim_g: usize) -> Self {
        let mut out = Self::zero(form.manifold(), dim_g, form.degree());
        out.insert_term(vec![0; dim_g], form.clone());
        out
    }

    /// A linear map on the basis as `sum_i mu(e_i) (x) xi^i`.
    pub fn from_gmap(mu: &GMap) -> Self {
        let dim_g = mu.len();
        let mut out = Self::zero(mu.manifold(), dim_g, mu.degree() + 2);
        for i in 0..dim_g {
            let mut xi = vec![0; dim_g];
            xi[i] = 1;
            out.insert_term(xi, mu.value(i).clone());
        }
        out
    }

    /// Accumulate a term; adding zero is a no-op.
    pub fn insert_term(&mut self, xi: Vec<u32>, form: DifferentialForm) {
        assert_eq!(xi.len(), self.dim_g, "xi exponent length mismatch");
        if form.is_zero() {
            return;
        }
        let xi_degree: u32 = xi.iter().sum();
        assert_eq!(
            form.degree() + 2 * xi_degree as usize,
            self.degree,
            "inhomogeneous Cartan term"
        );
        match self.terms.remove(&xi) {
            Some(existing) => {
                let sum = &existing + &form;
                if !sum.is_zero() {
                    self.terms.insert(xi, sum);
                }
            }
            None => {
                self.terms.insert(xi, form);
            }
        }
    }

    pub fn get(&self, xi: &[u32]) -> Option<&DifferentialForm> {
        self.terms.get(xi)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &DifferentialForm)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect();
        CartanElement {
            manifold: self.manifold.clone(),
            dim_g: self.dim_g,
            degree: self.degree,
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.manifold, other.manifold);
        assert_eq!(self.dim_g, other.dim_g);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (xi, form) in &other.terms {
            out.insert_term(xi.clone(), form.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// The Cartan differential `d_G = d (x) 1 - sum_i iota_{v_i} (x) xi^i`.
    pub fn cartan_d(&self, action: &LieAction) -> Self {
        assert_eq!(action.dim(), self.dim_g, "action dimension mismatch");
        let mut out = Self::zero(&self.manifold, self.dim_g, self.degree + 1);
        for (xi, form) in &self.terms {
            out.insert_term(xi.clone(), form.exterior_d());
            for i in 0..self.dim_g {
                let contracted = form.contract_field(action.generator(i));
                if contracted.is_zero() {
                    continue;
                }
                let mut xi2 = xi.clone();
                xi2[i] += 1;
                out.insert_term(xi2, -&contracted);
            }
        }
        out
    }
}

impl fmt::Display for CartanElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(xi, form)| {
                let mut factors: Vec<String> = Vec::new();
                for (i, &e) in xi.iter().enumerate() {
                    if e == 1 {
                        factors.push(format!("xi{}", i + 1));
                    } else if e > 1 {
                        factors.push(format!("xi{}^{}", i + 1, e));
                    }
                }
                if factors.is_empty() {
                    format!("({form})")
                } else {
                    format!("({form})*{}", factors.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Nonzero diagonal contraction `iota_{v_x} mu(x)`, on a basis vector or on
/// a sum of two basis vectors (polarization witness).
#[derive(Clone, PartialEq, Debug)]
pub enum ContractionWitness {
    Diagonal { index: usize, value: DifferentialForm },
    Sum { pair: (usize, usize), value: DifferentialForm },
}

impl fmt::Display for ContractionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContractionWitness::Diagonal { index, value } => {
                write!(f, "iota_{{v}} mu at e{} is {}", index + 1, value)
            }
            ContractionWitness::Sum { pair, value } => write!(
                f,
                "iota_{{v}} mu at e{} + e{} is {}",
                pair.0 + 1,
                pair.1 + 1,
                value
            ),
        }
    }
}

/// One failed cocycle condition, with its witness.
#[derive(Clone, PartialEq, Debug)]
pub enum CocycleFailure {
    /// `d mu(x) + iota_{v_x} omega` is nonzero at a basis index.
    HamiltonianCondition {
        index: usize,
        residual: DifferentialForm,
    },
    /// `mu` is not equivariant.
    Equivariance(EquivarianceWitness),
    /// `iota_{v_x} mu(x)` is nonzero.
    Contraction(ContractionWitness),
}

impl CocycleFailure {
    pub fn condition(&self) -> char {
        match self {
            CocycleFailure::HamiltonianCondition { .. } => 'a',
            CocycleFailure::Equivariance(_) => 'b',
            CocycleFailure::Contraction(_) => 'c',
        }
    }
}

impl fmt::Display for CocycleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleFailure::HamiltonianCondition { index, residual } => write!(
                f,
                "(a) d mu + iota_v omega nonzero at e{}: {}",
                index + 1,
                residual
            ),
            CocycleFailure::Equivariance(w) => write!(f, "(b) {w}"),
            CocycleFailure::Contraction(w) => write!(f, "(c) {w}"),
        }
    }
}

/// Outcome of the cocycle check: per-condition failures plus the
/// independently computed verdict of `d_G(omega - mu) = 0`.
#[derive(Clone, PartialEq, Debug)]
pub struct CocycleReport {
    pub failures: Vec<CocycleFailure>,
    /// `d_G(omega - mu) = 0`, computed via [`CartanElement::cartan_d`].
    pub direct_vanishes: bool,
}

impl CocycleReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Conditions (a) and (c) together must match the direct `d_G` verdict
    /// (condition (b) is membership of `mu` in the model, which `d_G`
    /// cannot see). A mismatch is a bug.
    pub fn consistent(&self) -> bool {
        let ac_ok = !self
            .failures
            .iter()
            .any(|f| f.condition() == 'a' || f.condition() == 'c');
        ac_ok == self.direct_vanishes
    }
}

#[derive(Error, Debug, PartialEq)]
pub enum CartanError {
    #[error("the form is not closed")]
    NotClosed,
    #[error("{0}")]
    NotInvariant(InvarianceWitness),
    #[error("omega - mu is not a Cartan cocycle: {}", .0.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; "))]
    NotCocycle(CocycleReport),
    #[error("degree mismatch: mu must take values in forms of degree {expected}, got {got}")]
    MuDegree { expected: usize, got: usize },
}

fn contraction_failures(mu: &GMap, action: &LieAction) -> Vec<CocycleFailure> {
    let mut out = Vec::new();
    for i in 0..action.dim() {
        let value = mu.value(i).contract_field(action.generator(i));
        if !value.is_zero() {
            out.push(CocycleFailure::Contraction(ContractionWitness::Diagonal {
                index: i,
                value,
            }));
        }
    }
    for i in 0..action.dim() {
        for j in (i + 1)..action.dim() {
            let field = action.generator(i) + action.generator(j);
            let value = (mu.value(i) + mu.value(j)).contract_field(&field);
            if !value.is_zero() {
                out.push(CocycleFailure::Contraction(ContractionWitness::Sum {
                    pair: (i, j),
                    value,
                }));
            }
        }
    }
    out
}

/// Check conditions (a), (b), (c) for `omega - mu`, and cross-check (a, c)
/// against the direct computation `d_G(omega - mu) = 0`.
pub fn cartan_cocycle_check(
    omega: &DifferentialForm,
    mu: &GMap,
    action: &LieAction,
) -> Result<CocycleReport, CartanError> {
    if !omega.exterior_d().is_zero() {
        return Err(CartanError::NotClosed);
    }
    invariance_check(omega, action).map_err(CartanError::NotInvariant)?;
    if omega.degree() < 2 {
        return Err(CartanError::MuDegree {
            expected: 0,
            got: mu.degree(),
        });
    }
    if mu.degree() != omega.degree() - 2 {
        return Err(CartanError::MuDegree {
            expected: omega.degree() - 2,
            got: mu.degree(),
        });
    }

    let mut failures = Vec::new();
    for i in 0..action.dim() {
        let residual =
            &mu.value(i).exterior_d() + &omega.contract_field(action.generator(i));
        if !residual.is_zero() {
            failures.push(CocycleFailure::HamiltonianCondition { index: i, residual });
        }
    }
    if let Err(w) = equivariance_check(mu, action) {
        failures.push(CocycleFailure::Equivariance(w));
    }
    failures.extend(contraction_failures(mu, action));

    let element = CartanElement::from_form(omega, action.dim())
        .sub(&CartanElement::from_gmap(mu));
    let direct_vanishes = element.cartan_d(action).is_zero();

    Ok(CocycleReport {
        failures,
        direct_vanishes,
    })
}

/// The moment map induced by a Cartan cocycle `omega - mu`:
/// `f_k(x_1,..,x_k) = varsigma(k) iota(v_{x_1} ^ .. ^ v_{x_{k-1}}) mu(x_k)`.
pub fn moment_from_cartan(
    omega: &DifferentialForm,
    mu: &GMap,
    action: &LieAction,
) -> Result<MomentMapCandidate, CartanError> {
    let report = cartan_cocycle_check(omega, mu, action)?;
    if !report.is_ok() {
        return Err(CartanError::NotCocycle(report));
    }
    // conditions (b) and (c) hold, so the equivariant tilde is defined and
    // the induced components are exactly its varsigma rescaling
    let tilde = tilde_equivariant_unchecked(mu, action);
    Ok(f_from_phi(&tilde))
}

/// One failed condition of a Cartan-cocycle equivalence.
#[derive(Clone, PartialEq, Debug)]
pub enum CartanEquivFailure {
    /// `omega^1 - omega^0 - d alpha` is nonzero.
    FormDifference(DifferentialForm),
    /// `mu^1 - mu^0 - iota_. alpha + d F` is nonzero at a basis index.
    MuDifference {
        index: usize,
        residual: DifferentialForm,
    },
    /// `iota_{v_x} F(x)` is nonzero.
    Contraction(ContractionWitness),
}

impl CartanEquivFailure {
    pub fn condition(&self) -> char {
        match self {
            CartanEquivFailure::FormDifference(_) => 'a',
            CartanEquivFailure::MuDifference { .. } => 'b',
            CartanEquivFailure::Contraction(_) => 'c',
        }
    }
}

impl fmt::Display for CartanEquivFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanEquivFailure::FormDifference(r) => {
                write!(f, "(a) omega^1 - omega^0 - d alpha = {r}")
            }
            CartanEquivFailure::MuDifference { index, residual } => write!(
                f,
                "(b) mu difference mismatch at e{}: {residual}",
                index + 1
            ),
            CartanEquivFailure::Contraction(w) => write!(f, "(c) {w}"),
        }
    }
}

#[derive(Error, Debug, PartialEq)]
pub enum CartanEquivError {
    #[error("the {side} pair is not a Cartan cocycle")]
    NotCocycle { side: &'static str },
    #[error("alpha is not invariant: {0}")]
    AlphaNotInvariant(InvarianceWitness),
    #[error("F is not equivariant: {0}")]
    FNotEquivariant(EquivarianceWitness),
    #[error("{0}")]
    Cartan(#[from] CartanError),
}

#[derive(Clone, PartialEq, Debug)]
pub struct CartanEquivReport {
    pub failures: Vec<CartanEquivFailure>,
}

impl CartanEquivReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check that `(omega^1, mu^1) - (omega^0, mu^0)` is the coboundary
/// `d_G(alpha + F)`:
///
/// - (a) `omega^1 - omega^0 = d alpha`,
/// - (b) `mu^1 - mu^0 = iota_. alpha - d F`,
/// - (c) `iota_{v_x} F(x) = 0`.
#[allow(clippy::too_many_arguments)]
pub fn cartan_equiv_check(
    omega0: &DifferentialForm,
    mu0: &GMap,
    omega1: &DifferentialForm,
    mu1: &GMap,
    alpha: &DifferentialForm,
    f_map: &GMap,
    action: &LieAction,
) -> Result<CartanEquivReport, CartanEquivError> {
    for (side, omega, mu) in [("first", omega0, mu0), ("second", omega1, mu1)] {
        let report = cartan_cocycle_check(omega, mu, action)?;
        if !report.is_ok() {
            return Err(CartanEquivError::NotCocycle { side });
        }
    }
    invariance_check(alpha, action).map_err(CartanEquivError::AlphaNotInvariant)?;
    equivariance_check(f_map, action).map_err(CartanEquivError::FNotEquivariant)?;

    let mut failures = Vec::new();

    let res_a = &(omega1 - omega0) - &alpha.exterior_d();
    if !res_a.is_zero() {
        failures.push(CartanEquivFailure::FormDifference(res_a));
    }

    for i in 0..action.dim() {
        let iota_alpha = alpha.contract_field(action.generator(i));
        let expected = &iota_alpha - &f_map.value(i).exterior_d();
        let residual = &(mu1.value(i) - mu0.value(i)) - &expected;
        if !residual.is_zero() {
            failures.push(CartanEquivFailure::MuDifference { index: i, residual });
        }
    }

    for w in contraction_failures(f_map, action) {
        if let CocycleFailure::Contraction(cw) = w {
            failures.push(CartanEquivFailure::Contraction(cw));
        }
    }

    Ok(CartanEquivReport { failures })
}

/// A one-parameter family of Cartan cocycles transported by a generating
/// field, all polynomial in the parameter `s`.
#[derive(Clone, Debug)]
pub struct CartanFamily {
    pub x_s: VectorField,
    pub omega_s: DifferentialForm,
    pub mu_s: GMap,
}

#[derive(Error, Debug, PartialEq)]
pub enum FamilyError {
    #[error("the manifold does not declare the parameter s")]
    MissingParam,
    #[error("the generating field is not invariant: [v_e{}, X_s] is nonzero", .0 + 1)]
    GeneratorNotInvariant(usize),
    #[error("transport identity fails for the form family: d/ds omega^s + L_{{X_s}} omega^s is nonzero")]
    FormTransport(DifferentialForm),
    #[error("transport identity fails for the linear family at e{}", .index + 1)]
    MapTransport {
        index: usize,
        residual: DifferentialForm,
    },
    #[error("the family is not a Cartan cocycle identically in s")]
    NotCocycleInFamily(CocycleReport),
    #[error("{0}")]
    Cartan(#[from] CartanError),
    #[error("the computed witness fails the equivalence check")]
    WitnessRejected(CartanEquivReport),
    #[error("{0}")]
    Equiv(#[from] CartanEquivError),
}

/// Certify that the endpoints of a transported family of Cartan cocycles are
/// equivalent, producing the explicit witness
/// `alpha = -int_0^1 iota_{X_s} omega^s ds`, `F = int_0^1 iota_{X_s} mu^s ds`.
///
/// Consistency preconditions, checked exactly as polynomial identities in
/// `s`: the generating field is invariant, both transport identities
/// `d/ds omega^s = -L_{X_s} omega^s` and `d/ds mu^s(x) = -L_{X_s} mu^s(x)`
/// hold, and `(omega^s, mu^s)` is a Cartan cocycle for all `s`.
pub fn isotopy_to_cartan_equiv(
    family: &CartanFamily,
    action: &LieAction,
) -> Result<(DifferentialForm, GMap, CartanEquivReport), FamilyError> {
    let manifold = action.manifold();
    if !manifold.has_param(Param::S) {
        return Err(FamilyError::MissingParam);
    }
    for i in 0..action.dim() {
        if !action.generator(i).lie_bracket(&family.x_s).is_zero() {
            return Err(FamilyError::GeneratorNotInvariant(i));
        }
    }
    let form_transport = &family.omega_s.partial_param(Param::S)
        + &family.omega_s.lie_derivative(&family.x_s);
    if !form_transport.is_zero() {
        return Err(FamilyError::FormTransport(form_transport));
    }
    for i in 0..action.dim() {
        let residual = &family.mu_s.value(i).partial_param(Param::S)
            + &family.mu_s.value(i).lie_derivative(&family.x_s);
        if !residual.is_zero() {
            return Err(FamilyError::MapTransport { index: i, residual });
        }
    }
    let report = cartan_cocycle_check(&family.omega_s, &family.mu_s, action)?;
    if !report.is_ok() {
        return Err(FamilyError::NotCocycleInFamily(report));
    }

    let alpha = -&family
        .omega_s
        .contract_field(&family.x_s)
        .integrate_param_unit(Param::S);
    let f_values: Vec<DifferentialForm> = (0..action.dim())
        .map(|i| {
            family
                .mu_s
                .value(i)
                .contract_field(&family.x_s)
                .integrate_param_unit(Param::S)
        })
        .collect();
    let f_map = GMap::new(manifold, family.mu_s.degree() - 1, f_values);

    let zero = Rational::zero();
    let one = crate::scalar::rat_int(1);
    let omega0 = family.omega_s.subst_param(Param::S, &zero);
    let omega1 = family.omega_s.subst_param(Param::S, &one);
    let mu0 = family.mu_s.subst_param(Param::S, &zero);
    let mu1 = family.mu_s.subst_param(Param::S, &one);

    let equiv = cartan_equiv_check(&omega0, &mu0, &omega1, &mu1, &alpha, &f_map, action)?;
    if !equiv.is_ok() {
        return Err(FamilyError::WitnessRejected(equiv));
    }
    Ok((alpha, f_map, equiv))
}
