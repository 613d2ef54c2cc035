//! Constructive exactness decisions on the model manifold.
//!
//! The de Rham cohomology of `T^a x R^b` is the exterior algebra on the
//! constant `dtheta` classes. [`find_primitive`] decides where a closed form
//! sits: it first strips the affine directions with the line-integration
//! homotopy operator, then inverts the exterior derivative on each nonzero
//! Fourier sector by contraction with a constant torus field. What survives
//! is the harmonic part — a constant-coefficient `dtheta` combination — and
//! the form is exact precisely when that part vanishes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::form::{DifferentialForm, VectorField};
use crate::manifold::ModelManifold;
use crate::scalar::ScalarFn;

#[derive(Error, Debug, PartialEq)]
#[error("the form is not closed")]
pub struct NotClosed;

/// Outcome of an exactness decision for a closed form.
#[derive(Clone, PartialEq, Debug)]
pub enum Exactness {
    /// `Exact(tau)` with `d tau` equal to the input.
    Exact(DifferentialForm),
    /// The nonzero harmonic representative of the class.
    Class(DifferentialForm),
}

impl Exactness {
    pub fn primitive(&self) -> Option<&DifferentialForm> {
        match self {
            Exactness::Exact(tau) => Some(tau),
            Exactness::Class(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact(_))
    }
}

/// Homotopy operator for the affine coordinate `z{j+1}`: integrate the
/// `dz` part from `0` along the line. Satisfies
/// `d(h a) + h(d a) = a - restrict(a)` with [`z_restrict`].
pub(crate) fn z_homotopy(alpha: &DifferentialForm, j: usize) -> DifferentialForm {
    let m = alpha.manifold().clone();
    let flat = m.torus_dim() + j;
    let mut terms: BTreeMap<Vec<usize>, ScalarFn> = BTreeMap::new();
    for (indices, f) in alpha.terms() {
        let Some(pos) = indices.iter().position(|&i| i == flat) else {
            continue;
        };
        let mut rest = indices.clone();
        rest.remove(pos);
        let mut coeff = f.integrate_z_from_zero(j);
        if pos % 2 == 1 {
            coeff = -&coeff;
        }
        let entry = terms
            .remove(&rest)
            .map(|g| &g + &coeff)
            .unwrap_or(coeff);
        terms.insert(rest, entry);
    }
    DifferentialForm::from_terms(&m, alpha.degree().saturating_sub(1), terms)
}

/// Pull back along the inclusion `{z_{ j+1} = 0}`: drop the `dz` terms and
/// set the coordinate to zero in the coefficients.
pub(crate) fn z_restrict(alpha: &DifferentialForm, j: usize) -> DifferentialForm {
    let m = alpha.manifold().clone();
    let flat = m.torus_dim() + j;
    let mut terms: BTreeMap<Vec<usize>, ScalarFn> = BTreeMap::new();
    for (indices, f) in alpha.terms() {
        if indices.contains(&flat) {
            continue;
        }
        terms.insert(indices.clone(), f.subst_z_zero(j));
    }
    DifferentialForm::from_terms(&m, alpha.degree(), terms)
}

fn filter_frequency_class(alpha: &DifferentialForm, class: &[i64]) -> DifferentialForm {
    let m = alpha.manifold().clone();
    let terms = alpha
        .terms()
        .map(|(k, f)| (k.clone(), f.frequency_class(class)))
        .collect();
    DifferentialForm::from_terms(&m, alpha.degree(), terms)
}

fn constant_torus_field(m: &ModelManifold, u: &[i64]) -> VectorField {
    let mut field = VectorField::zero(m);
    for (i, &c) in u.iter().enumerate() {
        if c != 0 {
            field = &field + &VectorField::from_component(m, i, ScalarFn::int(m, c));
        }
    }
    field
}

fn div_sector(alpha: &DifferentialForm, u: &[i64]) -> DifferentialForm {
    let m = alpha.manifold().clone();
    let terms = alpha
        .terms()
        .map(|(k, f)| (k.clone(), f.div_i_freq_dot(u)))
        .collect();
    DifferentialForm::from_terms(&m, alpha.degree(), terms)
}

/// Decide exactness of a closed form, constructively.
///
/// Returns a primitive when the class vanishes, and the nonzero harmonic
/// representative otherwise. The two outcomes are mutually exclusive.
pub fn find_primitive(alpha: &DifferentialForm) -> Result<Exactness, NotClosed> {
    if !alpha.exterior_d().is_zero() {
        return Err(NotClosed);
    }
    let m = alpha.manifold().clone();

    if alpha.degree() == 0 {
        // closed functions are parameter-polynomial constants
        return Ok(if alpha.is_zero() {
            Exactness::Exact(DifferentialForm::zero(&m, 0))
        } else {
            Exactness::Class(alpha.clone())
        });
    }

    let mut tau = DifferentialForm::zero(&m, alpha.degree() - 1);
    let mut current = alpha.clone();

    for j in 0..m.affine_dim() {
        tau = &tau + &z_homotopy(&current, j);
        current = z_restrict(&current, j);
    }

    // nonzero Fourier sectors: invert d by iota_u / (i <freq, u>) with u = class
    let mut classes: Vec<Vec<i64>> = Vec::new();
    for (_, f) in current.terms() {
        for c in f.frequency_classes() {
            if c.iter().any(|&x| x != 0) && !classes.contains(&c) {
                classes.push(c);
            }
        }
    }
    for class in classes {
        let rho = filter_frequency_class(&current, &class);
        let u = constant_torus_field(&m, &class);
        tau = &tau + &div_sector(&rho.contract_field(&u), &class);
    }

    let zero_class = vec![0i64; m.torus_dim()];
    let harmonic = filter_frequency_class(&current, &zero_class);
    if harmonic.is_zero() {
        Ok(Exactness::Exact(tau))
    } else {
        Ok(Exactness::Class(harmonic))
    }
}
