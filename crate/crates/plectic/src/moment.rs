//! Homotopy moment maps for a Lie algebra action on a pre-n-plectic
//! manifold, with two independent verification routes.
//!
//! A moment map is stored through its components `f_k: Lambda^k g ->
//! Omega^{n-k}(M)`. The sign `varsigma(k) = -(-1)^{k(k+1)/2}` bridges these
//! components and the slices `phi_k = varsigma(k) f_k` of a total cochain;
//! `f` is a moment map exactly when `d_tot phi = tilde(omega)`.
//!
//! Route one ([`verify_primitive`]) checks that coboundary equation. Route
//! two ([`verify_linfty_direct`]) checks the structure equations directly:
//!
//! - `d f_1(x) = -iota(v_x) omega`,
//! - for `2 <= k <= n`:
//!   `sum_{i<j} (-1)^{i+j+1} f_{k-1}([x_i,x_j], ..) = d f_k + varsigma(k)
//!   iota(v_{x_1} ^ .. ^ v_{x_k}) omega`,
//! - in top degree `k = n + 1` the same sum equals
//!   `varsigma(n+1) iota(v_{x_1} ^ .. ^ v_{x_{n+1}}) omega`.
//!
//! Neither route is derived from the other in code; [`cross_check`] runs
//! both and any disagreement is a bug in this crate, not in the input.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use thiserror::Error;

use crate::equivariant::{
    contraction_cochain, invariance_check, tilde_form_unchecked, InvarianceWitness, LieAction,
    TotalCochain,
};
use crate::form::{DifferentialForm, VectorField};
use crate::lie::{
    ce_cohomology_dims, ce_is_coboundary, CeFormCochain, CeScalarCochain, CoboundaryOutcome,
    NotCocycle,
};
use crate::linalg::{solve, QMatrix, SolveOutcome};
use crate::manifold::{ModelManifold, Param, Point};
use crate::scalar::{rat_int, EvalError, Rational};

/// `varsigma(k) = -(-1)^{k(k+1)/2}`, i.e. `+ + - - + + - -` for `k = 1, 2, ...`.
pub fn varsigma(k: usize) -> i64 {
    if (k * (k + 1) / 2).is_multiple_of(2) {
        -1
    } else {
        1
    }
}

#[derive(Error, Debug, PartialEq)]
pub enum MomentError {
    #[error("the pre-n-plectic form is not closed")]
    NotClosed,
    #[error("{0}")]
    NotInvariant(InvarianceWitness),
    #[error("degree mismatch: the form has degree {omega_degree}, the candidate expects n = {n}")]
    DegreeMismatch { omega_degree: usize, n: usize },
    #[error("point evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("the restricted contraction cochain is not closed; the input data is inconsistent")]
    ObstructionNotClosed(#[from] NotCocycle),
}

/// Moment-map components `f_k` of exterior degree `k = 1..=n`, each a
/// form-valued cochain of form degree `n - k`.
#[derive(Clone, PartialEq, Debug)]
pub struct MomentMapCandidate {
    manifold: ModelManifold,
    dim_g: usize,
    n: usize,
    components: BTreeMap<usize, CeFormCochain>,
}

impl MomentMapCandidate {
    pub fn zero(manifold: &ModelManifold, dim_g: usize, n: usize) -> Self {
        assert!(n >= 1, "the pre-n-plectic degree must be positive");
        MomentMapCandidate {
            manifold: manifold.clone(),
            dim_g,
            n,
            components: BTreeMap::new(),
        }
    }

    pub fn set_component(&mut self, k: usize, c: CeFormCochain) {
        assert!(k >= 1 && k <= self.n, "component index out of range");
        assert_eq!(c.dim(), self.dim_g, "cochain dimension mismatch");
        assert_eq!(c.k(), k, "cochain exterior degree mismatch");
        if c.is_zero() {
            self.components.remove(&k);
            return;
        }
        for (_, v) in c.iter() {
            assert_eq!(v.degree(), self.n - k, "component {k} has wrong form degree");
            assert_eq!(v.manifold(), &self.manifold, "manifold mismatch");
        }
        self.components.insert(k, c);
    }

    pub fn component(&self, k: usize) -> Option<&CeFormCochain> {
        self.components.get(&k)
    }

    pub fn components(&self) -> impl Iterator<Item = (&usize, &CeFormCochain)> {
        self.components.iter()
    }

    pub fn manifold(&self) -> &ModelManifold {
        &self.manifold
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        assert_eq!(self.dim_g, other.dim_g);
        let mut out = self.clone();
        for (k, c) in &other.components {
            let merged = match out.components.get(k) {
                Some(existing) => existing.add(c),
                None => c.clone(),
            };
            if merged.is_zero() {
                out.components.remove(k);
            } else {
                out.components.insert(*k, merged);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.map_forms(|f| -f))
    }

    pub fn map_forms(&self, mut f: impl FnMut(&DifferentialForm) -> DifferentialForm) -> Self {
        let mut out = MomentMapCandidate::zero(&self.manifold, self.dim_g, self.n);
        for (k, c) in &self.components {
            let mapped = c.map_values(|v| f(v));
            if !mapped.is_zero() {
                out.set_component(*k, mapped);
            }
        }
        out
    }

    pub fn promote(&self, target: &ModelManifold) -> Self {
        let mut out = MomentMapCandidate::zero(target, self.dim_g, self.n);
        for (k, c) in &self.components {
            out.set_component(*k, c.map_values(|v| v.promote(target)));
        }
        out
    }

    pub fn subst_param(&self, p: Param, v: &Rational) -> Self {
        self.map_forms(|f| f.subst_param(p, v))
    }

    pub fn partial_param(&self, p: Param) -> Self {
        self.map_forms(|f| f.partial_param(p))
    }
}

impl fmt::Display for MomentMapCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(k, c)| format!("f{k}: {c}"))
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// Witness of an equivariance failure of a moment-map component.
#[derive(Clone, PartialEq, Debug)]
pub struct ComponentEquivarianceWitness {
    pub k: usize,
    pub tuple: Vec<usize>,
    /// Basis index of the acting element.
    pub index: usize,
    pub defect: DifferentialForm,
}

/// Check equivariance of every component on basis tuples:
/// `L_{v_x} f_k(y_1,..,y_k) = sum_j f_k(y_1, .., [x, y_j], .., y_k)`.
///
/// Moment-map validity does not require equivariance; this check is offered
/// separately.
pub fn equivariance_check_components(
    f: &MomentMapCandidate,
    action: &LieAction,
) -> Result<(), ComponentEquivarianceWitness> {
    let dim = action.dim();
    for (k, c) in f.components() {
        for tuple in (0..dim).combinations(*k) {
            for i in 0..dim {
                let value = c
                    .get(&tuple)
                    .cloned()
                    .unwrap_or_else(|| DifferentialForm::zero(f.manifold(), f.n() - k));
                let lhs = value.lie_derivative(action.generator(i));
                let mut rhs = DifferentialForm::zero(f.manifold(), f.n() - k);
                for (pos, &y) in tuple.iter().enumerate() {
                    for (l, coeff) in action.algebra().bracket_basis(i, y).iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut arg = tuple.clone();
                        arg[pos] = l;
                        if let Some(v) = c.eval_tuple(&arg) {
                            rhs = &rhs + &v.scale(coeff);
                        }
                    }
                }
                let defect = &lhs - &rhs;
                if !defect.is_zero() {
                    return Err(ComponentEquivarianceWitness {
                        k: *k,
                        tuple,
                        index: i,
                        defect,
                    });
                }
            }
        }
    }
    Ok(())
}

/// A Hamiltonian pair: an `(n-1)`-form together with a vector field
/// satisfying `d form = -iota(field) omega`.
#[derive(Clone, PartialEq, Debug)]
pub struct HamiltonianPair {
    pub form: DifferentialForm,
    pub field: VectorField,
}

impl HamiltonianPair {
    /// Does `d form = -iota(field) omega` hold?
    pub fn verify(&self, omega: &DifferentialForm) -> bool {
        let lhs = self.form.exterior_d();
        let rhs = -&omega.contract_field(&self.field);
        lhs == rhs
    }
}

/// `phi_k = varsigma(k) f_k`, assembled into a total cochain of degree `n`.
pub fn phi_from_f(f: &MomentMapCandidate) -> TotalCochain {
    let mut out = TotalCochain::zero(f.manifold(), f.dim_g(), f.n() as i64);
    for (k, c) in f.components() {
        let signed = if varsigma(*k) == 1 { c.clone() } else { c.neg() };
        out.set_slice(*k, signed);
    }
    out
}

/// Inverse of [`phi_from_f`]; exact involution since `varsigma(k)^2 = 1`.
pub fn f_from_phi(phi: &TotalCochain) -> MomentMapCandidate {
    let n = phi.total_degree();
    assert!(n >= 1, "a moment-map cochain has positive total degree");
    let mut out = MomentMapCandidate::zero(phi.manifold(), phi.dim_g(), n as usize);
    for (k, c) in phi.slices() {
        let signed = if varsigma(*k) == 1 { c.clone() } else { c.neg() };
        out.set_component(*k, signed);
    }
    out
}

fn check_preconditions(
    omega: &DifferentialForm,
    action: &LieAction,
    n: usize,
) -> Result<(), MomentError> {
    if omega.degree() != n + 1 {
        return Err(MomentError::DegreeMismatch {
            omega_degree: omega.degree(),
            n,
        });
    }
    if !omega.exterior_d().is_zero() {
        return Err(MomentError::NotClosed);
    }
    invariance_check(omega, action).map_err(MomentError::NotInvariant)?;
    Ok(())
}

/// Verdict of the coboundary route: the residual `d_tot phi - tilde(omega)`.
#[derive(Clone, PartialEq, Debug)]
pub struct PrimitiveVerdict {
    pub residual: TotalCochain,
}

impl PrimitiveVerdict {
    pub fn is_ok(&self) -> bool {
        self.residual.is_zero()
    }

    /// `(slice, tuple)` positions of the nonzero residual entries.
    pub fn localization(&self) -> Vec<(usize, Vec<usize>)> {
        self.residual.nonzero_positions()
    }
}

/// Coboundary route: `phi` corresponds to a moment map iff
/// `d_tot phi = tilde(omega)`.
pub fn verify_primitive(
    phi: &TotalCochain,
    omega: &DifferentialForm,
    action: &LieAction,
) -> Result<PrimitiveVerdict, MomentError> {
    let n = phi.total_degree();
    assert!(n >= 0, "negative total degree");
    check_preconditions(omega, action, n as usize)?;
    let tilde = tilde_form_unchecked(omega, action);
    let residual = phi.d_tot(action.algebra()).sub(&tilde);
    Ok(PrimitiveVerdict { residual })
}

/// Which structure equation a violation belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EquationFamily {
    /// `d f_1(x) = -iota(v_x) omega`.
    Hamiltonian,
    /// The equation linking `f_{k-1}` and `f_k` for `2 <= k <= n`.
    Structure(usize),
    /// The top equation in degree `n + 1`.
    Top,
}

impl fmt::Display for EquationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquationFamily::Hamiltonian => write!(f, "hamiltonian"),
            EquationFamily::Structure(k) => write!(f, "structure k={k}"),
            EquationFamily::Top => write!(f, "top"),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct LinftyViolation {
    pub family: EquationFamily,
    pub tuple: Vec<usize>,
    pub residual: DifferentialForm,
}

/// Verdict of the direct route: all violated structure equations.
#[derive(Clone, PartialEq, Debug)]
pub struct LinftyVerdict {
    pub violations: Vec<LinftyViolation>,
}

impl LinftyVerdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluate `sum_{i<j} (-1)^{i+j+1} f_{k-1}([x_i, x_j], .. hat i .. hat j ..)`
/// on an increasing basis tuple.
pub(crate) fn bracket_sum(
    f: &MomentMapCandidate,
    action: &LieAction,
    tuple: &[usize],
) -> DifferentialForm {
    let k = tuple.len();
    let degree = f.n() as i64 - (k as i64 - 1);
    let mut acc = DifferentialForm::zero(
        f.manifold(),
        degree.max(0) as usize,
    );
    let Some(prev) = f.component(k - 1) else {
        return acc;
    };
    for p in 0..k {
        for q in (p + 1)..k {
            let coeffs = action.algebra().bracket_basis(tuple[p], tuple[q]);
            for (l, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut arg = Vec::with_capacity(k - 1);
                arg.push(l);
                for (pos, &idx) in tuple.iter().enumerate() {
                    if pos != p && pos != q {
                        arg.push(idx);
                    }
                }
                let Some(v) = prev.eval_tuple(&arg) else {
                    continue;
                };
                // (-1)^{i+j+1} with 1-based i, j is (-1)^{p+q+1} here
                let mut coeff = c.clone();
                if (p + q) % 2 == 0 {
                    coeff = -coeff;
                }
                acc = &acc + &v.scale(&coeff);
            }
        }
    }
    acc
}

/// Direct route: check all structure equations on all increasing basis
/// tuples.
pub fn verify_linfty_direct(
    f: &MomentMapCandidate,
    omega: &DifferentialForm,
    action: &LieAction,
) -> Result<LinftyVerdict, MomentError> {
    let n = f.n();
    check_preconditions(omega, action, n)?;
    let dim = action.dim();
    let mut violations = Vec::new();

    // d f_1(x) = -iota(v_x) omega on the basis
    for i in 0..dim {
        let f1x = f
            .component(1)
            .and_then(|c| c.get(&[i]).cloned())
            .unwrap_or_else(|| DifferentialForm::zero(f.manifold(), n - 1));
        let residual = &f1x.exterior_d() + &omega.contract_field(action.generator(i));
        if !residual.is_zero() {
            violations.push(LinftyViolation {
                family: EquationFamily::Hamiltonian,
                tuple: vec![i],
                residual,
            });
        }
    }

    // intermediate equations, 2 <= k <= n
    for k in 2..=n.min(dim) {
        for tuple in (0..dim).combinations(k) {
            let lhs = bracket_sum(f, action, &tuple);
            let fields: Vec<VectorField> = tuple
                .iter()
                .map(|&i| action.generator(i).clone())
                .collect();
            let fk = f
                .component(k)
                .and_then(|c| c.get(&tuple).cloned())
                .unwrap_or_else(|| DifferentialForm::zero(f.manifold(), n - k));
            let contraction = omega.contract(&fields).scale(&rat_int(varsigma(k)));
            let rhs = &fk.exterior_d() + &contraction;
            let residual = &lhs - &rhs;
            if !residual.is_zero() {
                violations.push(LinftyViolation {
                    family: EquationFamily::Structure(k),
                    tuple,
                    residual,
                });
            }
        }
    }

    // top equation in degree n + 1
    if n < dim {
        for tuple in (0..dim).combinations(n + 1) {
            let lhs = bracket_sum(f, action, &tuple);
            let fields: Vec<VectorField> = tuple
                .iter()
                .map(|&i| action.generator(i).clone())
                .collect();
            let rhs = omega.contract(&fields).scale(&rat_int(varsigma(n + 1)));
            let residual = &lhs - &rhs;
            if !residual.is_zero() {
                violations.push(LinftyViolation {
                    family: EquationFamily::Top,
                    tuple,
                    residual,
                });
            }
        }
    }

    Ok(LinftyVerdict { violations })
}

/// Both verification routes side by side. A disagreement between the two
/// `ok` bits is a bug in this crate; callers should treat it as fatal.
#[derive(Clone, PartialEq, Debug)]
pub struct CrossCheck {
    pub primitive: PrimitiveVerdict,
    pub direct: LinftyVerdict,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.primitive.is_ok() == self.direct.is_ok()
    }

    pub fn is_ok(&self) -> bool {
        self.agree() && self.primitive.is_ok()
    }
}

/// Run both routes on the same candidate.
pub fn cross_check(
    f: &MomentMapCandidate,
    omega: &DifferentialForm,
    action: &LieAction,
) -> Result<CrossCheck, MomentError> {
    let phi = phi_from_f(f);
    let primitive = verify_primitive(&phi, omega, action)?;
    let direct = verify_linfty_direct(f, omega, action)?;
    Ok(CrossCheck { primitive, direct })
}

// ---- ansatz solving ----

type FlatKey = (
    usize,                   // slice
    Vec<usize>,              // basis tuple
    Vec<usize>,              // coframe tuple
    crate::scalar::Monomial, // scalar monomial
    bool,                    // imaginary part?
);

fn flatten(tc: &TotalCochain) -> BTreeMap<FlatKey, Rational> {
    let mut out = BTreeMap::new();
    for (k, c) in tc.slices() {
        for (tuple, form) in c.iter() {
            for (cof, coeff) in form.terms() {
                for (mono, g) in coeff.terms() {
                    if !g.re.is_zero() {
                        out.insert(
                            (*k, tuple.clone(), cof.clone(), mono.clone(), false),
                            g.re.clone(),
                        );
                    }
                    if !g.im.is_zero() {
                        out.insert(
                            (*k, tuple.clone(), cof.clone(), mono.clone(), true),
                            g.im.clone(),
                        );
                    }
                }
            }
        }
    }
    out
}

/// Outcome of the ansatz-restricted linear solve.
#[derive(Clone, PartialEq, Debug)]
pub enum SolveMomentOutcome {
    /// A cochain `phi` with `d_tot phi = tilde(omega)`.
    Solution(TotalCochain),
    /// No solution in the span of the ansatz. This does NOT certify that no
    /// moment map exists; non-existence claims come only from
    /// [`obstruction_class`].
    NoSolutionInAnsatz,
}

/// Solve `d_tot phi = tilde(omega)` exactly within the rational span of the
/// given ansatz elements.
pub fn solve_primitive(
    omega: &DifferentialForm,
    action: &LieAction,
    ansatz: &[TotalCochain],
) -> Result<SolveMomentOutcome, MomentError> {
    let n = omega.degree() as i64 - 1;
    check_preconditions(omega, action, n as usize)?;
    let target = flatten(&tilde_form_unchecked(omega, action));
    let columns: Vec<BTreeMap<FlatKey, Rational>> = ansatz
        .iter()
        .map(|a| {
            assert_eq!(a.total_degree(), n, "ansatz element of wrong total degree");
            flatten(&a.d_tot(action.algebra()))
        })
        .collect();

    let mut keys: Vec<FlatKey> = Vec::new();
    for key in target.keys() {
        keys.push(key.clone());
    }
    for col in &columns {
        for key in col.keys() {
            if !target.contains_key(key) && !keys.contains(key) {
                keys.push(key.clone());
            }
        }
    }
    keys.sort();
    keys.dedup();

    let mut matrix = QMatrix::zero(keys.len(), columns.len());
    let mut rhs = vec![Rational::zero(); keys.len()];
    for (row, key) in keys.iter().enumerate() {
        if let Some(v) = target.get(key) {
            rhs[row] = v.clone();
        }
        for (col, data) in columns.iter().enumerate() {
            if let Some(v) = data.get(key) {
                matrix.set(row, col, v.clone());
            }
        }
    }

    match solve(&matrix, &rhs) {
        SolveOutcome::Solution(x) => {
            let mut phi = TotalCochain::zero(omega.manifold(), action.dim(), n);
            for (c, a) in x.iter().zip(ansatz) {
                if !c.is_zero() {
                    phi = phi.add(&a.scale(c));
                }
            }
            Ok(SolveMomentOutcome::Solution(phi))
        }
        SolveOutcome::Inconsistent { .. } => Ok(SolveMomentOutcome::NoSolutionInAnsatz),
    }
}

/// All monomial ansatz elements of total degree `n`: one generator per
/// `(slice k, basis tuple, coframe tuple, scalar monomial)` with polynomial
/// degree at most `poly_degree` and, when `trig_bound > 0`, sine/cosine
/// factors with frequency entries bounded by `trig_bound`.
pub fn monomial_ansatz(
    manifold: &ModelManifold,
    dim_g: usize,
    n: usize,
    poly_degree: u32,
    trig_bound: i64,
) -> Vec<TotalCochain> {
    use crate::scalar::ScalarFn;

    // z-monomials of total degree <= poly_degree
    let mut zmonos: Vec<ScalarFn> = vec![ScalarFn::one(manifold)];
    let mut frontier: Vec<ScalarFn> = vec![ScalarFn::one(manifold)];
    for _ in 0..poly_degree {
        let mut next = Vec::new();
        for f in &frontier {
            for j in 0..manifold.affine_dim() {
                let g = f * &ScalarFn::z(manifold, j);
                if !zmonos.contains(&g) {
                    zmonos.push(g.clone());
                    next.push(g);
                }
            }
        }
        frontier = next;
    }

    // trig factors with canonical nonzero frequencies
    let mut trig: Vec<ScalarFn> = Vec::new();
    if trig_bound > 0 && manifold.torus_dim() > 0 {
        let ranges = vec![-trig_bound..=trig_bound; manifold.torus_dim()];
        for freq in ranges.into_iter().multi_cartesian_product() {
            if freq.iter().all(|&f| f == 0) {
                continue;
            }
            if crate::scalar::canonical_freq(&freq) != freq {
                continue;
            }
            trig.push(ScalarFn::sin(manifold, &freq));
            trig.push(ScalarFn::cos(manifold, &freq));
        }
    }

    let mut scalars = zmonos.clone();
    for t in &trig {
        for z in &zmonos {
            scalars.push(t * z);
        }
    }

    let mut out = Vec::new();
    for k in 1..=n.min(dim_g) {
        let form_degree = n - k;
        if form_degree > manifold.dim() {
            continue;
        }
        for tuple in (0..dim_g).combinations(k) {
            for cof in (0..manifold.dim()).combinations(form_degree) {
                for s in &scalars {
                    let form = DifferentialForm::from_term(manifold, &cof, s.clone());
                    let mut c = CeFormCochain::new(dim_g, k);
                    c.insert(tuple.clone(), form);
                    let mut tc = TotalCochain::zero(manifold, dim_g, n as i64);
                    tc.set_slice(k, c);
                    out.push(tc);
                }
            }
        }
    }
    out
}

// ---- obstruction theory ----

/// The point-restricted top contraction cochain and its cohomological
/// classification.
#[derive(Clone, PartialEq, Debug)]
pub struct ObstructionOutcome {
    /// `omega_{n+1}` evaluated at the point, a scalar `(n+1)`-cochain.
    pub cochain: CeScalarCochain,
    /// Whether the class vanishes, with an exact certificate either way.
    pub verdict: CoboundaryOutcome,
}

impl ObstructionOutcome {
    pub fn vanishes(&self) -> bool {
        self.verdict.is_coboundary()
    }
}

/// Evaluate the top contraction cochain at a point and classify its class
/// in the Chevalley-Eilenberg cohomology. A nonzero class forbids moment
/// maps; a vanishing class is necessary but not sufficient in general.
pub fn obstruction_class(
    omega: &DifferentialForm,
    action: &LieAction,
    point: &Point,
) -> Result<ObstructionOutcome, MomentError> {
    let n = omega.degree() as i64 - 1;
    assert!(n >= 0, "the form must have positive degree");
    let n = n as usize;
    check_preconditions(omega, action, n)?;
    let top = contraction_cochain(omega, action, n + 1);
    let mut cochain = CeScalarCochain::new(action.dim(), top.k());
    for (tuple, form) in top.iter() {
        let value = form.to_scalar().eval(point)?;
        cochain.insert(tuple.clone(), value);
    }
    if !cochain.ce_d(action.algebra()).is_zero() {
        return Err(MomentError::ObstructionNotClosed(NotCocycle));
    }
    let verdict = ce_is_coboundary(&cochain, action.algebra())?;
    Ok(ObstructionOutcome { cochain, verdict })
}

/// Conclusion of the existence report.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExistenceConclusion {
    /// The obstruction class vanishes and every Kunneth product
    /// `H^j_CE (x) H^{n+1-j}(M)` for `j = 1..n` is zero: a moment map exists.
    Guaranteed,
    /// The obstruction class is nonzero: no moment map exists.
    NoMomentMap,
    /// The hypotheses fail but the obstruction vanishes: no conclusion.
    Inconclusive,
}

impl fmt::Display for ExistenceConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExistenceConclusion::Guaranteed => write!(f, "existence guaranteed"),
            ExistenceConclusion::NoMomentMap => write!(f, "no moment map exists"),
            ExistenceConclusion::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// The existence report: Betti numbers on both sides, the vanishing of each
/// Kunneth product, the obstruction verdict and the resulting conclusion.
#[derive(Clone, PartialEq, Debug)]
pub struct ExistenceReport {
    pub ce_betti: Vec<usize>,
    /// `dim H^k(T^a x R^b) = C(a, k)` for `k = 0..=n+1`.
    pub derham_betti: Vec<usize>,
    /// For each `j = 1..=n`, whether `H^j_CE (x) H^{n+1-j}(M) = 0`.
    pub products_vanish: Vec<(usize, bool)>,
    pub obstruction: ObstructionOutcome,
    pub conclusion: ExistenceConclusion,
}

fn binomial(a: usize, k: usize) -> usize {
    if k > a {
        return 0;
    }
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..k.min(a - k) {
        num *= a - i;
        den *= i + 1;
    }
    num / den
}

/// Betti number of the model manifold in one degree.
pub fn derham_betti(manifold: &ModelManifold, k: usize) -> usize {
    binomial(manifold.torus_dim(), k)
}

/// Assemble the existence report for an invariant closed form.
pub fn existence_hypotheses(
    omega: &DifferentialForm,
    action: &LieAction,
    point: &Point,
) -> Result<ExistenceReport, MomentError> {
    let n = omega.degree() - 1;
    let obstruction = obstruction_class(omega, action, point)?;
    let ce_betti = ce_cohomology_dims(action.algebra());
    let derham: Vec<usize> = (0..=n + 1)
        .map(|k| derham_betti(omega.manifold(), k))
        .collect();
    let mut products_vanish = Vec::new();
    let mut all_vanish = true;
    for j in 1..=n {
        let ce = ce_betti.get(j).copied().unwrap_or(0);
        let dr = derham_betti(omega.manifold(), n + 1 - j);
        let vanish = ce == 0 || dr == 0;
        all_vanish &= vanish;
        products_vanish.push((j, vanish));
    }
    let conclusion = if !obstruction.vanishes() {
        ExistenceConclusion::NoMomentMap
    } else if all_vanish {
        ExistenceConclusion::Guaranteed
    } else {
        ExistenceConclusion::Inconclusive
    };
    Ok(ExistenceReport {
        ce_betti,
        derham_betti: derham,
        products_vanish,
        obstruction,
        conclusion,
    })
}
