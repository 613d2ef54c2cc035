//! Differential forms, vector fields and the Cartan calculus on a model
//! manifold.
//!
//! A form is stored per strictly increasing coframe index tuple (thetas
//! before zs) with [`ScalarFn`] coefficients; a vector field is stored per
//! frame index. The contraction of a decomposable multivector is
//! `iota(v_1 ^ ... ^ v_k) a = a(v_1, ..., v_k, .)`, realised as
//! `iota(v_k) o ... o iota(v_1)`; the extended Cartan residual below checks
//! that orientation mechanically.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use crate::manifold::{Coordinate, ModelManifold, Param};
use crate::scalar::{render_terms, PrintTerm, Rational, ScalarFn};

/// An exterior form with exact coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct DifferentialForm {
    manifold: ModelManifold,
    degree: usize,
    terms: BTreeMap<Vec<usize>, ScalarFn>,
}

/// A vector field with exact coefficients in the coordinate frame.
#[derive(Clone, PartialEq, Debug)]
pub struct VectorField {
    manifold: ModelManifold,
    components: BTreeMap<usize, ScalarFn>,
}

/// Merge two strictly increasing index tuples.
///
/// Returns the merged tuple and the sign of the permutation moving the
/// concatenation `a ++ b` into increasing order, or `None` when the tuples
/// share an index.
fn merge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i64;
    let mut i = 0;
    let mut j = 0;
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining entries of a
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, sign))
}

impl DifferentialForm {
    pub fn zero(m: &ModelManifold, degree: usize) -> Self {
        DifferentialForm {
            manifold: m.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A function viewed as a 0-form.
    pub fn from_scalar(f: ScalarFn) -> Self {
        let manifold = f.manifold().clone();
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(Vec::new(), f);
        }
        DifferentialForm {
            manifold,
            degree: 0,
            terms,
        }
    }

    /// The coframe element for a flat coordinate index.
    pub fn coframe(m: &ModelManifold, flat: usize) -> Self {
        Self::from_term(m, &[flat], ScalarFn::one(m))
    }

    /// `f * dx_{i_1} ^ ... ^ dx_{i_k}` for a strictly increasing tuple.
    pub fn from_term(m: &ModelManifold, indices: &[usize], f: ScalarFn) -> Self {
        assert!(
            indices.windows(2).all(|w| w[0] < w[1]),
            "coframe tuple must be strictly increasing"
        );
        assert!(
            indices.iter().all(|&i| i < m.dim()),
            "coframe index out of range"
        );
        assert_eq!(f.manifold(), m, "manifold mismatch");
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(indices.to_vec(), f);
        }
        DifferentialForm {
            manifold: m.clone(),
            degree: indices.len(),
            terms,
        }
    }

    pub fn manifold(&self) -> &ModelManifold {
        &self.manifold
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &ScalarFn)> {
        self.terms.iter()
    }

    pub(crate) fn from_terms(
        m: &ModelManifold,
        degree: usize,
        terms: BTreeMap<Vec<usize>, ScalarFn>,
    ) -> Self {
        let mut out = DifferentialForm {
            manifold: m.clone(),
            degree,
            terms,
        };
        out.terms.retain(|_, f| !f.is_zero());
        debug_assert!(out.terms.keys().all(|k| k.len() == degree));
        out
    }

    /// The coefficient of a degree-0 form as a function.
    pub fn to_scalar(&self) -> ScalarFn {
        assert_eq!(self.degree, 0, "to_scalar requires a 0-form");
        self.terms
            .get(&Vec::new())
            .cloned()
            .unwrap_or_else(|| ScalarFn::zero(&self.manifold))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, f)| (k.clone(), f.scale(c)))
            .collect();
        Self::from_terms(&self.manifold, self.degree, terms)
    }

    pub fn scalar_mul(&self, g: &ScalarFn) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, f)| (k.clone(), f * g))
            .collect();
        Self::from_terms(&self.manifold, self.degree, terms)
    }

    /// Graded-commutative exterior product.
    pub fn wedge(&self, other: &DifferentialForm) -> DifferentialForm {
        assert_eq!(
            self.manifold, other.manifold,
            "manifold mismatch in wedge"
        );
        let degree = self.degree + other.degree;
        let mut terms: BTreeMap<Vec<usize>, ScalarFn> = BTreeMap::new();
        for (ia, fa) in &self.terms {
            for (ib, fb) in &other.terms {
                if let Some((merged, sign)) = merge_indices(ia, ib) {
                    let mut coeff = fa * fb;
                    if sign < 0 {
                        coeff = -&coeff;
                    }
                    merge_form_term(&mut terms, merged, coeff);
                }
            }
        }
        Self::from_terms(&self.manifold, degree, terms)
    }

    /// De Rham differential.
    pub fn exterior_d(&self) -> DifferentialForm {
        let mut terms: BTreeMap<Vec<usize>, ScalarFn> = BTreeMap::new();
        for (indices, f) in &self.terms {
            for flat in 0..self.manifold.dim() {
                let df = f.partial(self.manifold.coordinate(flat));
                if df.is_zero() {
                    continue;
                }
                if let Some((merged, sign)) = merge_indices(&[flat], indices) {
                    let coeff = if sign < 0 { -&df } else { df };
                    merge_form_term(&mut terms, merged, coeff);
                }
            }
        }
        Self::from_terms(&self.manifold, self.degree + 1, terms)
    }

    /// Interior product with a single vector field.
    pub fn contract_field(&self, v: &VectorField) -> DifferentialForm {
        assert_eq!(
            self.manifold, v.manifold,
            "manifold mismatch in contraction"
        );
        if self.degree == 0 {
            return DifferentialForm::zero(&self.manifold, 0);
        }
        let mut terms: BTreeMap<Vec<usize>, ScalarFn> = BTreeMap::new();
        for (indices, f) in &self.terms {
            for (pos, &idx) in indices.iter().enumerate() {
                let Some(comp) = v.component(idx) else {
                    continue;
                };
                let mut coeff = f * comp;
                if pos % 2 == 1 {
                    coeff = -&coeff;
                }
                let mut rest = indices.clone();
                rest.remove(pos);
                merge_form_term(&mut terms, rest, coeff);
            }
        }
        Self::from_terms(&self.manifold, self.degree - 1, terms)
    }

    /// Contraction of a decomposable multivector:
    /// `iota(v_1 ^ ... ^ v_k) a = a(v_1, ..., v_k, .)`.
    ///
    /// An empty slice is the identity; `k > degree` gives zero.
    pub fn contract(&self, fields: &[VectorField]) -> DifferentialForm {
        let mut out = self.clone();
        for v in fields {
            out = out.contract_field(v);
        }
        out
    }

    /// Cartan's magic formula `L_v = d o iota_v + iota_v o d`.
    pub fn lie_derivative(&self, v: &VectorField) -> DifferentialForm {
        &self.contract_field(v).exterior_d() + &self.exterior_d().contract_field(v)
    }

    /// Lie derivative along a decomposable `k`-multivector:
    /// `L_V = d o iota(V) - (-1)^k iota(V) o d`.
    pub fn lie_derivative_multi(&self, fields: &[VectorField]) -> DifferentialForm {
        let k = fields.len();
        let first = self.contract(fields).exterior_d();
        let second = self.exterior_d().contract(fields);
        if k.is_multiple_of(2) {
            &first - &second
        } else {
            &first + &second
        }
    }

    pub fn promote(&self, target: &ModelManifold) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, f)| (k.clone(), f.promote(target)))
            .collect();
        DifferentialForm {
            manifold: target.clone(),
            degree: self.degree,
            terms,
        }
    }

    /// Coefficient-wise partial derivative in a parameter.
    pub fn partial_param(&self, p: Param) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, f)| (k.clone(), f.partial(Coordinate::Param(p))))
            .collect();
        Self::from_terms(&self.manifold, self.degree, terms)
    }

    /// Coefficient-wise substitution of a parameter value.
    pub fn subst_param(&self, p: Param, v: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, f)| (k.clone(), f.subst_param(p, v)))
            .collect();
        Self::from_terms(&self.manifold, self.degree, terms)
    }

    /// Coefficient-wise definite integral of a parameter over `[0, 1]`.
    pub fn integrate_param_unit(&self, p: Param) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, f)| (k.clone(), f.integrate_param_unit(p)))
            .collect();
        Self::from_terms(&self.manifold, self.degree, terms)
    }

    pub fn uses_param(&self, p: Param) -> bool {
        self.terms.values().any(|f| f.uses_param(p))
    }
}

fn merge_form_term(
    map: &mut BTreeMap<Vec<usize>, ScalarFn>,
    key: Vec<usize>,
    val: ScalarFn,
) {
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            if !val.is_zero() {
                e.insert(val);
            }
        }
        Entry::Occupied(mut e) => {
            let sum = e.get() + &val;
            if sum.is_zero() {
                e.remove();
            } else {
                e.insert(sum);
            }
        }
    }
}

impl Add for &DifferentialForm {
    type Output = DifferentialForm;

    fn add(self, rhs: &DifferentialForm) -> DifferentialForm {
        assert_eq!(self.manifold, rhs.manifold, "manifold mismatch in add");
        // the zero form sits in every degree
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, rhs.degree, "degree mismatch in add");
        let mut terms = self.terms.clone();
        for (k, v) in &rhs.terms {
            merge_form_term(&mut terms, k.clone(), v.clone());
        }
        DifferentialForm::from_terms(&self.manifold, self.degree, terms)
    }
}

impl Sub for &DifferentialForm {
    type Output = DifferentialForm;

    fn sub(self, rhs: &DifferentialForm) -> DifferentialForm {
        self + &(-rhs)
    }
}

impl Neg for &DifferentialForm {
    type Output = DifferentialForm;

    fn neg(self) -> DifferentialForm {
        let terms = self
            .terms
            .iter()
            .map(|(k, f)| (k.clone(), -f))
            .collect();
        DifferentialForm {
            manifold: self.manifold.clone(),
            degree: self.degree,
            terms,
        }
    }
}

impl Mul<&DifferentialForm> for &ScalarFn {
    type Output = DifferentialForm;

    fn mul(self, rhs: &DifferentialForm) -> DifferentialForm {
        rhs.scalar_mul(self)
    }
}

impl VectorField {
    pub fn zero(m: &ModelManifold) -> Self {
        VectorField {
            manifold: m.clone(),
            components: BTreeMap::new(),
        }
    }

    /// The coordinate frame field for a flat index.
    pub fn frame(m: &ModelManifold, flat: usize) -> Self {
        Self::from_component(m, flat, ScalarFn::one(m))
    }

    pub fn from_component(m: &ModelManifold, flat: usize, f: ScalarFn) -> Self {
        assert!(flat < m.dim(), "frame index out of range");
        assert_eq!(f.manifold(), m, "manifold mismatch");
        let mut components = BTreeMap::new();
        if !f.is_zero() {
            components.insert(flat, f);
        }
        VectorField {
            manifold: m.clone(),
            components,
        }
    }

    pub fn manifold(&self) -> &ModelManifold {
        &self.manifold
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, flat: usize) -> Option<&ScalarFn> {
        self.components.get(&flat)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let components = self
            .components
            .iter()
            .map(|(k, f)| (*k, f.scale(c)))
            .collect();
        Self::canonical(&self.manifold, components)
    }

    pub fn scalar_mul(&self, g: &ScalarFn) -> Self {
        let components = self
            .components
            .iter()
            .map(|(k, f)| (*k, f * g))
            .collect();
        Self::canonical(&self.manifold, components)
    }

    fn canonical(m: &ModelManifold, mut components: BTreeMap<usize, ScalarFn>) -> Self {
        components.retain(|_, f| !f.is_zero());
        VectorField {
            manifold: m.clone(),
            components,
        }
    }

    /// Apply the field to a function as a derivation.
    pub fn apply(&self, g: &ScalarFn) -> ScalarFn {
        assert_eq!(self.manifold, *g.manifold(), "manifold mismatch in apply");
        let mut acc = ScalarFn::zero(&self.manifold);
        for (flat, comp) in &self.components {
            let dg = g.partial(self.manifold.coordinate(*flat));
            acc = &acc + &(comp * &dg);
        }
        acc
    }

    /// Commutator of derivations.
    pub fn lie_bracket(&self, other: &VectorField) -> VectorField {
        assert_eq!(
            self.manifold, other.manifold,
            "manifold mismatch in bracket"
        );
        let mut components = BTreeMap::new();
        for flat in 0..self.manifold.dim() {
            let wc = other
                .component(flat)
                .cloned()
                .unwrap_or_else(|| ScalarFn::zero(&self.manifold));
            let vc = self
                .component(flat)
                .cloned()
                .unwrap_or_else(|| ScalarFn::zero(&self.manifold));
            let c = &self.apply(&wc) - &other.apply(&vc);
            if !c.is_zero() {
                components.insert(flat, c);
            }
        }
        VectorField {
            manifold: self.manifold.clone(),
            components,
        }
    }

    pub fn promote(&self, target: &ModelManifold) -> Self {
        let components = self
            .components
            .iter()
            .map(|(k, f)| (*k, f.promote(target)))
            .collect();
        VectorField {
            manifold: target.clone(),
            components,
        }
    }

    pub fn subst_param(&self, p: Param, v: &Rational) -> Self {
        let components = self
            .components
            .iter()
            .map(|(k, f)| (*k, f.subst_param(p, v)))
            .collect();
        Self::canonical(&self.manifold, components)
    }

    pub fn uses_param(&self, p: Param) -> bool {
        self.components.values().any(|f| f.uses_param(p))
    }
}

impl Add for &VectorField {
    type Output = VectorField;

    fn add(self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.manifold, rhs.manifold, "manifold mismatch in add");
        let mut components = self.components.clone();
        for (k, v) in &rhs.components {
            let sum = match components.get(k) {
                Some(c) => c + v,
                None => v.clone(),
            };
            if sum.is_zero() {
                components.remove(k);
            } else {
                components.insert(*k, sum);
            }
        }
        VectorField {
            manifold: self.manifold.clone(),
            components,
        }
    }
}

impl Neg for &VectorField {
    type Output = VectorField;

    fn neg(self) -> VectorField {
        let components = self
            .components
            .iter()
            .map(|(k, f)| (*k, -f))
            .collect();
        VectorField {
            manifold: self.manifold.clone(),
            components,
        }
    }
}

impl Sub for &VectorField {
    type Output = VectorField;

    fn sub(self, rhs: &VectorField) -> VectorField {
        self + &(-rhs)
    }
}

/// Left-hand side minus right-hand side of the extended Cartan identity
///
/// ```text
/// (-1)^k d iota(v_1 ^ .. ^ v_k) W
///   = sum_{i<j} (-1)^{i+j} iota([v_i,v_j] ^ .. hat i .. hat j ..) W
///   + sum_i (-1)^i iota(.. hat i ..) L_{v_i} W
///   + iota(v_1 ^ .. ^ v_k) dW
/// ```
///
/// Identically zero exactly when the contraction orientation is consistent,
/// so it doubles as a mechanical validation of the convention.
pub fn extended_cartan_residual(
    fields: &[VectorField],
    omega: &DifferentialForm,
) -> DifferentialForm {
    let k = fields.len();
    assert!(k >= 2, "the identity needs at least two fields");

    let mut lhs = omega.contract(fields).exterior_d();
    if k % 2 == 1 {
        lhs = -&lhs;
    }

    let mut rhs = omega.exterior_d().contract(fields);

    for i in 0..k {
        for j in (i + 1)..k {
            let bracket = fields[i].lie_bracket(&fields[j]);
            let mut rest: Vec<VectorField> = vec![bracket];
            for (p, f) in fields.iter().enumerate() {
                if p != i && p != j {
                    rest.push(f.clone());
                }
            }
            let term = omega.contract(&rest);
            // positions are 0-based; the identity's signs are 1-based
            if (i + j) % 2 == 0 {
                rhs = &rhs + &term;
            } else {
                rhs = &rhs - &term;
            }
        }
    }

    for i in 0..k {
        let rest: Vec<VectorField> = fields
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != i)
            .map(|(_, f)| f.clone())
            .collect();
        let term = omega.lie_derivative(&fields[i]).contract(&rest);
        if (i + 1) % 2 == 0 {
            rhs = &rhs + &term;
        } else {
            rhs = &rhs - &term;
        }
    }

    &lhs - &rhs
}

// ---- Display ----

fn printable_with_suffix(f: &ScalarFn, suffix: Option<String>) -> PrintTerm {
    let pts = f.printable();
    match suffix {
        None => {
            // degree-0 term: fall back to the scalar's own rendering
            PrintTerm {
                coef: Rational::one(),
                factors: vec![format!("{f}")],
            }
        }
        Some(sfx) => {
            if pts.len() == 1 {
                let mut t = pts.into_iter().next().unwrap();
                t.factors.push(sfx);
                t
            } else {
                PrintTerm {
                    coef: Rational::one(),
                    factors: vec![format!("({f})"), sfx],
                }
            }
        }
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.degree == 0 {
            return write!(f, "{}", self.to_scalar());
        }
        let mut terms = Vec::new();
        for (indices, coeff) in &self.terms {
            let suffix = indices
                .iter()
                .map(|&i| self.manifold.coframe_name(i))
                .collect::<Vec<_>>()
                .join("^");
            terms.push(printable_with_suffix(coeff, Some(suffix)));
        }
        write!(f, "{}", render_terms(&terms))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (flat, coeff) in &self.components {
            terms.push(printable_with_suffix(
                coeff,
                Some(self.manifold.frame_name(*flat)),
            ));
        }
        write!(f, "{}", render_terms(&terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn torus_line() -> ModelManifold {
        // theta1, theta2, z1 -> flat indices 0, 1, 2
        ModelManifold::new(2, 1)
    }

    fn dtheta(m: &ModelManifold, i: usize) -> DifferentialForm {
        DifferentialForm::coframe(m, i)
    }

    #[test]
    fn wedge_basics() {
        let m = torus_line();
        let d1 = dtheta(&m, 0);
        let d2 = dtheta(&m, 1);
        let dz = dtheta(&m, 2);

        let w = d1.wedge(&d2);
        assert_eq!(w, DifferentialForm::from_term(&m, &[0, 1], ScalarFn::one(&m)));
        assert!(d1.wedge(&d1).is_zero());

        let z = ScalarFn::z(&m, 0);
        let zd2 = d2.scalar_mul(&z);
        let res = zd2.wedge(&dz);
        assert_eq!(res, DifferentialForm::from_term(&m, &[1, 2], z));
    }

    #[test]
    fn wedge_graded_commutative() {
        let m = torus_line();
        let a = &dtheta(&m, 0).scalar_mul(&ScalarFn::z(&m, 0))
            + &dtheta(&m, 2).scalar_mul(&ScalarFn::sin(&m, &[1, 0]));
        let b = dtheta(&m, 1);
        // |a| = |b| = 1: a ^ b = -b ^ a
        assert_eq!(a.wedge(&b), -&b.wedge(&a));
        let c = dtheta(&m, 0).wedge(&dtheta(&m, 1));
        // |c| = 2: a ^ c = c ^ a
        assert_eq!(a.wedge(&c), c.wedge(&a));
    }

    #[test]
    fn exterior_derivative() {
        let m = torus_line();
        let z = ScalarFn::z(&m, 0);
        // d(z dtheta2 + dtheta1) = dz ^ dtheta2
        let alpha = &dtheta(&m, 1).scalar_mul(&z) + &dtheta(&m, 0);
        let d = alpha.exterior_d();
        let expected = DifferentialForm::from_term(&m, &[1, 2], ScalarFn::int(&m, -1));
        assert_eq!(d, expected); // dz^dtheta2 = -dtheta2^dz

        assert!(dtheta(&m, 0).exterior_d().is_zero());

        let beta = DifferentialForm::from_term(&m, &[2], ScalarFn::sin(&m, &[1, 0]));
        let db = beta.exterior_d();
        let expected =
            DifferentialForm::from_term(&m, &[0, 2], ScalarFn::cos(&m, &[1, 0]));
        assert_eq!(db, expected);
    }

    #[test]
    fn d_squared_zero() {
        let m = torus_line();
        let alpha = &DifferentialForm::from_term(
            &m,
            &[0],
            &ScalarFn::z(&m, 0).pow(2) * &ScalarFn::sin(&m, &[1, 1]),
        ) + &DifferentialForm::from_term(&m, &[2], ScalarFn::cos(&m, &[0, 2]));
        assert!(alpha.exterior_d().exterior_d().is_zero());
    }

    #[test]
    fn contraction_slots() {
        let m = torus_line();
        let omega = DifferentialForm::from_term(&m, &[0, 1, 2], ScalarFn::one(&m));
        let v0 = VectorField::frame(&m, 0);
        let v1 = VectorField::frame(&m, 1);

        let once = omega.contract(std::slice::from_ref(&v0));
        assert_eq!(
            once,
            DifferentialForm::from_term(&m, &[1, 2], ScalarFn::one(&m))
        );

        let twice = omega.contract(&[v0.clone(), v1.clone()]);
        assert_eq!(twice, DifferentialForm::coframe(&m, 2));

        // alternation
        assert!(omega.contract(&[v0.clone(), v0.clone()]).is_zero());
    }

    #[test]
    fn lie_derivative_and_bracket() {
        let m = torus_line();
        let omega = DifferentialForm::from_term(&m, &[0, 1, 2], ScalarFn::one(&m));
        assert!(omega.lie_derivative(&VectorField::frame(&m, 0)).is_zero());

        // [par_z, z par_z] = par_z on the affine factor
        let mz = ModelManifold::new(0, 1);
        let v = VectorField::frame(&mz, 0);
        let zv = VectorField::from_component(&mz, 0, ScalarFn::z(&mz, 0));
        assert_eq!(v.lie_bracket(&zv), v);
    }

    #[test]
    fn lie_derivative_is_a_derivation() {
        let m = torus_line();
        let v = VectorField::from_component(&m, 2, ScalarFn::sin(&m, &[1, 0]));
        let a = DifferentialForm::from_term(&m, &[0], ScalarFn::z(&m, 0));
        let b = DifferentialForm::from_term(&m, &[1], ScalarFn::cos(&m, &[0, 1]));
        let lhs = a.wedge(&b).lie_derivative(&v);
        let rhs = &a.lie_derivative(&v).wedge(&b) + &a.wedge(&b.lie_derivative(&v));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn multivector_lie_derivative() {
        let m = torus_line();
        let omega = DifferentialForm::from_term(&m, &[0, 1, 2], ScalarFn::one(&m));
        let fields = [VectorField::frame(&m, 0), VectorField::frame(&m, 1)];
        // d iota(V) omega = d(dz) = 0 and d omega = 0
        assert!(omega.lie_derivative_multi(&fields).is_zero());

        // k = 1 agrees with the ordinary Lie derivative
        let v = VectorField::from_component(&m, 2, ScalarFn::z(&m, 0));
        let alpha = DifferentialForm::from_term(&m, &[2], ScalarFn::z(&m, 0).pow(2));
        assert_eq!(
            alpha.lie_derivative_multi(std::slice::from_ref(&v)),
            alpha.lie_derivative(&v)
        );

        // degree < k: only the -(-1)^k iota(V) d truncation survives
        let low = DifferentialForm::from_term(&m, &[2], ScalarFn::sin(&m, &[1, 0]));
        let got = low.lie_derivative_multi(&fields);
        let expected = -&low.exterior_d().contract(&fields);
        assert_eq!(got, expected);
    }

    #[test]
    fn extended_cartan_identity_examples() {
        let m = torus_line();
        // constant fields on a closed constant form
        let omega = DifferentialForm::from_term(&m, &[0, 1, 2], ScalarFn::one(&m));
        let fields = [VectorField::frame(&m, 0), VectorField::frame(&m, 1)];
        assert!(extended_cartan_residual(&fields, &omega).is_zero());

        // non-commuting fields on R^3
        let m3 = ModelManifold::new(0, 3);
        let omega3 = DifferentialForm::from_term(&m3, &[0, 1, 2], ScalarFn::one(&m3));
        let v1 = VectorField::frame(&m3, 0);
        let v2 = VectorField::from_component(&m3, 0, ScalarFn::z(&m3, 0));
        assert!(extended_cartan_residual(&[v1, v2], &omega3).is_zero());
    }

    #[test]
    fn display_round_shape() {
        let m = torus_line();
        let alpha = &dtheta(&m, 1).scalar_mul(&ScalarFn::z(&m, 0)) + &dtheta(&m, 0);
        assert_eq!(format!("{alpha}"), "dtheta1 + z1*dtheta2");
        let msum = &dtheta(&m, 0)
            .scalar_mul(&(&ScalarFn::z(&m, 0) + &ScalarFn::one(&m)));
        assert_eq!(format!("{msum}"), "(1 + z1)*dtheta1");
        let v = VectorField::from_component(&m, 2, ScalarFn::int(&m, -2));
        assert_eq!(format!("{v}"), "-2*par_z1");
    }

    #[test]
    fn scalar_degree_zero_sign() {
        let m = torus_line();
        let f = ScalarFn::sin(&m, &[1, 0]);
        let form = DifferentialForm::from_scalar(f.clone());
        assert_eq!(form.to_scalar(), f);
        assert_eq!(format!("{form}"), format!("{f}"));
        let c = rat(1, 2);
        assert_eq!(form.scale(&c).to_scalar(), f.scale(&c));
    }
}
