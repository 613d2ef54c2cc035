//! Lie algebra actions on the model manifold, the contraction cochains of an
//! invariant form, the total complex `Lambda^{>=1} g* (x) Omega(M)` and its
//! cone.
//!
//! The total differential acts on the exterior-degree-`k` slice as
//! `d_g + (-1)^k d` (Koszul convention). An invariant `N`-form `sigma` maps
//! to the cochain `tilde(sigma) = sum_k (-1)^{k-1} sigma_k` where
//! `sigma_k(x_1,..,x_k) = iota(v_{x_1} ^ .. ^ v_{x_k}) sigma`; this is a
//! chain map, which the tests verify mechanically.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use thiserror::Error;

use crate::form::{DifferentialForm, VectorField};
use crate::lie::{CeFormCochain, LieAlgebra};
use crate::manifold::{ModelManifold, Param};
use crate::scalar::{rat_int, Rational};

/// A Lie algebra acting by vector fields: one generator per basis element,
/// required to satisfy the bracket relations of the algebra.
#[derive(Clone, PartialEq, Debug)]
pub struct LieAction {
    algebra: LieAlgebra,
    manifold: ModelManifold,
    generators: Vec<VectorField>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct MorphismViolation {
    /// 0-based basis pair `(i, j)` with `i < j`.
    pub pair: (usize, usize),
    /// `[v_i, v_j] - v_{[e_i, e_j]}`, nonzero.
    pub defect: VectorField,
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "generators violate the bracket relation at (e{}, e{}): defect {}",
            self.pair.0 + 1,
            self.pair.1 + 1,
            self.defect
        )
    }
}

#[derive(Error, Debug, PartialEq)]
pub enum ActionError {
    #[error("expected {expected} generators, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("{0}")]
    NotMorphism(MorphismViolation),
}

impl LieAction {
    pub fn new(
        algebra: LieAlgebra,
        manifold: &ModelManifold,
        generators: Vec<VectorField>,
    ) -> Result<Self, ActionError> {
        if generators.len() != algebra.dim() {
            return Err(ActionError::GeneratorCount {
                expected: algebra.dim(),
                got: generators.len(),
            });
        }
        let action = LieAction {
            algebra,
            manifold: manifold.clone(),
            generators,
        };
        action.morphism_check().map_err(ActionError::NotMorphism)?;
        Ok(action)
    }

    /// Verify `[v_i, v_j] = v_{[e_i, e_j]}` on all basis pairs.
    pub fn morphism_check(&self) -> Result<(), MorphismViolation> {
        for i in 0..self.algebra.dim() {
            for j in (i + 1)..self.algebra.dim() {
                let lhs = self.generators[i].lie_bracket(&self.generators[j]);
                let rhs = self.field_for(&self.algebra.bracket_basis(i, j));
                let defect = &lhs - &rhs;
                if !defect.is_zero() {
                    return Err(MorphismViolation {
                        pair: (i, j),
                        defect,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn manifold(&self) -> &ModelManifold {
        &self.manifold
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn generator(&self, i: usize) -> &VectorField {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.generators
    }

    /// The generator of an arbitrary algebra element, by linearity.
    pub fn field_for(&self, x: &[Rational]) -> VectorField {
        assert_eq!(x.len(), self.algebra.dim(), "coordinate length mismatch");
        let mut out = VectorField::zero(&self.manifold);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.generators[i].scale(c);
            }
        }
        out
    }

    pub fn promote(&self, target: &ModelManifold) -> Self {
        LieAction {
            algebra: self.algebra.clone(),
            manifold: target.clone(),
            generators: self.generators.iter().map(|v| v.promote(target)).collect(),
        }
    }
}

/// Witness of an invariance failure: the basis index and the nonzero Lie
/// derivative.
#[derive(Clone, PartialEq, Debug)]
pub struct InvarianceWitness {
    pub index: usize,
    pub derivative: DifferentialForm,
}

impl fmt::Display for InvarianceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "not invariant along e{}: Lie derivative {}",
            self.index + 1,
            self.derivative
        )
    }
}

/// Check `L_{v_i} sigma = 0` for every generator.
pub fn invariance_check(
    sigma: &DifferentialForm,
    action: &LieAction,
) -> Result<(), InvarianceWitness> {
    for (i, v) in action.generators().iter().enumerate() {
        let ld = sigma.lie_derivative(v);
        if !ld.is_zero() {
            return Err(InvarianceWitness {
                index: i,
                derivative: ld,
            });
        }
    }
    Ok(())
}

/// A linear map from the Lie algebra to forms of one fixed degree, given on
/// the basis.
#[derive(Clone, PartialEq, Debug)]
pub struct GMap {
    manifold: ModelManifold,
    degree: usize,
    values: Vec<DifferentialForm>,
}

impl GMap {
    pub fn new(manifold: &ModelManifold, degree: usize, values: Vec<DifferentialForm>) -> Self {
        for v in &values {
            assert!(v.is_zero() || v.degree() == degree, "value degree mismatch");
            assert_eq!(v.manifold(), manifold, "manifold mismatch");
        }
        GMap {
            manifold: manifold.clone(),
            degree,
            values,
        }
    }

    pub fn zero(manifold: &ModelManifold, degree: usize, dim: usize) -> Self {
        Self::new(
            manifold,
            degree,
            vec![DifferentialForm::zero(manifold, degree); dim],
        )
    }

    pub fn manifold(&self) -> &ModelManifold {
        &self.manifold
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> &DifferentialForm {
        &self.values[i]
    }

    pub fn values(&self) -> &[DifferentialForm] {
        &self.values
    }

    /// Evaluate on an arbitrary algebra element, by linearity.
    pub fn eval(&self, x: &[Rational]) -> DifferentialForm {
        assert_eq!(x.len(), self.values.len(), "coordinate length mismatch");
        let mut out = DifferentialForm::zero(&self.manifold, self.degree);
        for (v, c) in self.values.iter().zip(x) {
            if !c.is_zero() {
                out = &out + &v.scale(c);
            }
        }
        out
    }

    pub fn add(&self, other: &GMap) -> GMap {
        assert_eq!(self.values.len(), other.values.len());
        GMap::new(
            &self.manifold,
            self.degree,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &GMap) -> GMap {
        assert_eq!(self.values.len(), other.values.len());
        GMap::new(
            &self.manifold,
            self.degree,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn exterior_d(&self) -> GMap {
        GMap::new(
            &self.manifold,
            self.degree + 1,
            self.values.iter().map(|v| v.exterior_d()).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// As a degree-1 cochain.
    pub fn to_cochain(&self) -> CeFormCochain {
        let mut c = CeFormCochain::new(self.values.len(), 1);
        for (i, v) in self.values.iter().enumerate() {
            if !v.is_zero() {
                c.insert(vec![i], v.clone());
            }
        }
        c
    }

    pub fn promote(&self, target: &ModelManifold) -> GMap {
        GMap {
            manifold: target.clone(),
            degree: self.degree,
            values: self.values.iter().map(|v| v.promote(target)).collect(),
        }
    }

    pub fn subst_param(&self, p: Param, v: &Rational) -> GMap {
        GMap::new(
            &self.manifold,
            self.degree,
            self.values.iter().map(|f| f.subst_param(p, v)).collect(),
        )
    }

    pub fn integrate_param_unit(&self, p: Param) -> GMap {
        GMap::new(
            &self.manifold,
            self.degree,
            self.values
                .iter()
                .map(|f| f.integrate_param_unit(p))
                .collect(),
        )
    }

    pub fn partial_param(&self, p: Param) -> GMap {
        GMap::new(
            &self.manifold,
            self.degree,
            self.values.iter().map(|f| f.partial_param(p)).collect(),
        )
    }
}

/// Witness of an equivariance failure on a basis pair.
#[derive(Clone, PartialEq, Debug)]
pub struct EquivarianceWitness {
    pub pair: (usize, usize),
    /// `L_{v_i} F(e_j) - F([e_i, e_j])`, nonzero.
    pub defect: DifferentialForm,
}

impl fmt::Display for EquivarianceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "not equivariant at (e{}, e{}): defect {}",
            self.pair.0 + 1,
            self.pair.1 + 1,
            self.defect
        )
    }
}

/// Check `L_{v_x} F(y) = F([x, y])` on all ordered basis pairs (the diagonal
/// included); bilinearity extends the verdict to arbitrary arguments.
pub fn equivariance_check(f: &GMap, action: &LieAction) -> Result<(), EquivarianceWitness> {
    assert_eq!(f.len(), action.dim(), "map is not defined on the basis");
    for i in 0..action.dim() {
        for j in 0..action.dim() {
            let lhs = f.value(j).lie_derivative(action.generator(i));
            let rhs = f.eval(&action.algebra().bracket_basis(i, j));
            let defect = &lhs - &rhs;
            if !defect.is_zero() {
                return Err(EquivarianceWitness {
                    pair: (i, j),
                    defect,
                });
            }
        }
    }
    Ok(())
}

/// The contraction cochain `sigma_k`: on the increasing basis tuple
/// `(x_1,..,x_k)` it is `iota(v_{x_1} ^ .. ^ v_{x_k}) sigma`.
///
/// Empty when `k` exceeds the algebra dimension or the form degree.
pub fn contraction_cochain(
    sigma: &DifferentialForm,
    action: &LieAction,
    k: usize,
) -> CeFormCochain {
    assert!(k >= 1, "contraction degree must be positive");
    let dim = action.dim();
    let mut out = CeFormCochain::new(dim, k);
    if k > dim || k > sigma.degree() {
        return out;
    }
    for tuple in (0..dim).combinations(k) {
        let fields: Vec<VectorField> = tuple
            .iter()
            .map(|&i| action.generator(i).clone())
            .collect();
        let value = sigma.contract(&fields);
        if !value.is_zero() {
            out.insert(tuple, value);
        }
    }
    out
}

/// An element of the total complex, stored per exterior degree `k >= 1` with
/// form degree `total_degree - k` on each slice.
#[derive(Clone, PartialEq, Debug)]
pub struct TotalCochain {
    manifold: ModelManifold,
    dim_g: usize,
    total_degree: i64,
    slices: BTreeMap<usize, CeFormCochain>,
}

impl TotalCochain {
    pub fn zero(manifold: &ModelManifold, dim_g: usize, total_degree: i64) -> Self {
        TotalCochain {
            manifold: manifold.clone(),
            dim_g,
            total_degree,
            slices: BTreeMap::new(),
        }
    }

    pub fn manifold(&self) -> &ModelManifold {
        &self.manifold
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn total_degree(&self) -> i64 {
        self.total_degree
    }

    pub fn set_slice(&mut self, k: usize, c: CeFormCochain) {
        assert!(k >= 1 && k <= self.dim_g, "slice index out of range");
        assert_eq!(c.dim(), self.dim_g, "cochain dimension mismatch");
        assert_eq!(c.k(), k, "cochain exterior degree mismatch");
        if c.is_zero() {
            self.slices.remove(&k);
            return;
        }
        let expected = self.total_degree - k as i64;
        assert!(expected >= 0, "slice would have negative form degree");
        for (_, v) in c.iter() {
            assert_eq!(
                v.degree() as i64,
                expected,
                "slice {k} has wrong form degree"
            );
            assert_eq!(v.manifold(), &self.manifold, "manifold mismatch");
        }
        self.slices.insert(k, c);
    }

    pub fn slice(&self, k: usize) -> Option<&CeFormCochain> {
        self.slices.get(&k)
    }

    pub fn slices(&self) -> impl Iterator<Item = (&usize, &CeFormCochain)> {
        self.slices.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn add(&self, other: &TotalCochain) -> TotalCochain {
        assert_eq!(self.manifold, other.manifold, "manifold mismatch");
        assert_eq!(self.dim_g, other.dim_g, "algebra dimension mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.total_degree, other.total_degree, "degree mismatch");
        let mut out = self.clone();
        for (k, c) in &other.slices {
            let merged = match out.slices.get(k) {
                Some(existing) => existing.add(c),
                None => c.clone(),
            };
            if merged.is_zero() {
                out.slices.remove(k);
            } else {
                out.slices.insert(*k, merged);
            }
        }
        out
    }

    pub fn neg(&self) -> TotalCochain {
        let mut out = self.clone();
        out.slices = self.slices.iter().map(|(k, c)| (*k, c.neg())).collect();
        out
    }

    pub fn sub(&self, other: &TotalCochain) -> TotalCochain {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> TotalCochain {
        if c.is_zero() {
            return TotalCochain::zero(&self.manifold, self.dim_g, self.total_degree);
        }
        let mut out = self.clone();
        out.slices = self.slices.iter().map(|(k, s)| (*k, s.scale(c))).collect();
        out
    }

    /// Rescale each slice by a sign depending on its exterior degree.
    pub fn map_slices_sign(&self, sign: impl Fn(usize) -> i64) -> TotalCochain {
        let mut out = TotalCochain::zero(&self.manifold, self.dim_g, self.total_degree);
        for (k, c) in &self.slices {
            let s = sign(*k);
            let scaled = match s {
                1 => c.clone(),
                -1 => c.neg(),
                other => c.scale(&rat_int(other)),
            };
            out.set_slice(*k, scaled);
        }
        out
    }

    /// The total differential: the degree-`k` slice of the result is
    /// `d_g (slice k-1) + (-1)^k d (slice k)`.
    pub fn d_tot(&self, alg: &LieAlgebra) -> TotalCochain {
        assert_eq!(alg.dim(), self.dim_g, "algebra dimension mismatch");
        let mut out = TotalCochain::zero(&self.manifold, self.dim_g, self.total_degree + 1);
        for k in 1..=self.dim_g {
            let mut acc = CeFormCochain::new(self.dim_g, k);
            if k >= 2 {
                if let Some(prev) = self.slices.get(&(k - 1)) {
                    acc = acc.add(&prev.ce_d(alg));
                }
            }
            if let Some(cur) = self.slices.get(&k) {
                let mut derived = cur.map_values(|f| f.exterior_d());
                if k % 2 == 1 {
                    derived = derived.neg();
                }
                acc = acc.add(&derived);
            }
            if !acc.is_zero() {
                out.set_slice(k, acc);
            }
        }
        out
    }

    /// Apply a form transformation slice-wise (degrees must be preserved).
    pub fn map_forms(&self, mut f: impl FnMut(&DifferentialForm) -> DifferentialForm) -> Self {
        let mut out = TotalCochain::zero(&self.manifold, self.dim_g, self.total_degree);
        for (k, c) in &self.slices {
            let mapped = c.map_values(|v| f(v));
            if !mapped.is_zero() {
                out.set_slice(*k, mapped);
            }
        }
        out
    }

    pub fn promote(&self, target: &ModelManifold) -> Self {
        let mut out = TotalCochain::zero(target, self.dim_g, self.total_degree);
        for (k, c) in &self.slices {
            out.set_slice(*k, c.map_values(|v| v.promote(target)));
        }
        out
    }

    pub fn subst_param(&self, p: Param, v: &Rational) -> Self {
        self.map_forms(|f| f.subst_param(p, v))
    }

    pub fn integrate_param_unit(&self, p: Param) -> Self {
        self.map_forms(|f| f.integrate_param_unit(p))
    }

    pub fn partial_param(&self, p: Param) -> Self {
        self.map_forms(|f| f.partial_param(p))
    }

    /// All `(slice, tuple)` positions carrying a nonzero value.
    pub fn nonzero_positions(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out = Vec::new();
        for (k, c) in &self.slices {
            for (t, _) in c.iter() {
                out.push((*k, t.clone()));
            }
        }
        out
    }
}

impl fmt::Display for TotalCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .slices
            .iter()
            .map(|(k, c)| format!("k={k}: {c}"))
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// `tilde(sigma) = sum_{k>=1} (-1)^{k-1} sigma_k` for an invariant form.
pub fn tilde_form(
    sigma: &DifferentialForm,
    action: &LieAction,
) -> Result<TotalCochain, InvarianceWitness> {
    invariance_check(sigma, action)?;
    Ok(tilde_form_unchecked(sigma, action))
}

pub(crate) fn tilde_form_unchecked(
    sigma: &DifferentialForm,
    action: &LieAction,
) -> TotalCochain {
    let n = sigma.degree();
    let mut out = TotalCochain::zero(action.manifold(), action.dim(), n as i64);
    for k in 1..=n.min(action.dim()) {
        let mut c = contraction_cochain(sigma, action, k);
        if k % 2 == 0 {
            c = c.neg();
        }
        if !c.is_zero() {
            out.set_slice(k, c);
        }
    }
    out
}

/// Why a map cannot be fed to [`tilde_equivariant`].
#[derive(Error, Debug, PartialEq)]
pub enum TildeError {
    #[error("{0}")]
    NotEquivariant(EquivarianceWitness),
    #[error("iota_{{v_x}} F(x) is nonzero at basis witness e{}", .0 + 1)]
    DiagonalContraction(usize),
    #[error("iota_{{v_x}} F(x) is nonzero at the sum witness e{} + e{}", .0 + 1, .1 + 1)]
    SumContraction(usize, usize),
}

/// For an equivariant `F: g -> Omega^N(M)` with `iota_{v_x} F(x) = 0`,
/// the cochain with slices
/// `F_k(x_1,..,x_k) = iota(v_{x_1} ^ .. ^ v_{x_{k-1}}) F(x_k)`
/// summed over `k = 1..N+1` (no alternating signs).
///
/// The vanishing precondition is checked on basis vectors and on sums of two
/// basis vectors; the defect is symmetric bilinear, so this polarization
/// test is exhaustive.
pub fn tilde_equivariant(f: &GMap, action: &LieAction) -> Result<TotalCochain, TildeError> {
    equivariance_check(f, action).map_err(TildeError::NotEquivariant)?;
    let dim = action.dim();
    for i in 0..dim {
        if !f.value(i).contract_field(action.generator(i)).is_zero() {
            return Err(TildeError::DiagonalContraction(i));
        }
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let sum_field = action.generator(i) + action.generator(j);
            let sum_value = f.value(i) + f.value(j);
            if !sum_value.contract_field(&sum_field).is_zero() {
                return Err(TildeError::SumContraction(i, j));
            }
        }
    }
    Ok(tilde_equivariant_unchecked(f, action))
}

pub(crate) fn tilde_equivariant_unchecked(f: &GMap, action: &LieAction) -> TotalCochain {
    let dim = action.dim();
    let n = f.degree();
    let total = n as i64 + 1;
    let mut out = TotalCochain::zero(action.manifold(), dim, total);
    for k in 1..=(n + 1).min(dim) {
        let mut c = CeFormCochain::new(dim, k);
        for tuple in (0..dim).combinations(k) {
            let fields: Vec<VectorField> = tuple[..k - 1]
                .iter()
                .map(|&i| action.generator(i).clone())
                .collect();
            let value = f.value(tuple[k - 1]).contract(&fields);
            if !value.is_zero() {
                c.insert(tuple, value);
            }
        }
        if !c.is_zero() {
            out.set_slice(k, c);
        }
    }
    out
}

/// An element of the cone complex: a degree-shifted invariant form together
/// with a total cochain one degree below.
#[derive(Clone, PartialEq, Debug)]
pub struct ConeElement {
    pub form: DifferentialForm,
    pub cochain: TotalCochain,
}

impl ConeElement {
    pub fn new(form: DifferentialForm, cochain: TotalCochain) -> Self {
        assert_eq!(
            cochain.total_degree(),
            form.degree() as i64 - 1,
            "cone degree bookkeeping: cochain must sit one degree below the shifted form"
        );
        ConeElement { form, cochain }
    }
}

/// The cone differential `D(sigma[1], phi) = (d sigma [1], tilde(sigma) - d_tot phi)`.
pub fn cone_differential(
    e: &ConeElement,
    action: &LieAction,
) -> Result<ConeElement, InvarianceWitness> {
    invariance_check(&e.form, action)?;
    let tilde = tilde_form_unchecked(&e.form, action);
    let cochain = tilde.sub(&e.cochain.d_tot(action.algebra()));
    Ok(ConeElement::new(e.form.exterior_d(), cochain))
}
