//! Ready-made example data used by the test suites and mirrored by the
//! bundled scenario files.

use crate::equivariant::{GMap, LieAction};
use crate::form::{DifferentialForm, VectorField};
use crate::lie::{CeFormCochain, LieAlgebra};
use crate::manifold::ModelManifold;
use crate::moment::MomentMapCandidate;
use crate::scalar::ScalarFn;

/// Torus translations on `T^2 x R` with the volume form (`n = 2`), the
/// equivariant moment map `f`, and two candidate linear maps for the Cartan
/// model: `mu'` (a cocycle) and `f_1` itself (which is not).
pub struct TorusExample {
    pub manifold: ModelManifold,
    pub action: LieAction,
    pub omega: DifferentialForm,
    pub f: MomentMapCandidate,
    pub mu_prime: GMap,
    pub f1_map: GMap,
}

/// `omega = dtheta1 ^ dtheta2 ^ dz1`, generators `par_theta1`, `par_theta2`,
/// `f1(e1) = z dtheta2 + dtheta1`, `f1(e2) = -z dtheta1 + dtheta2`,
/// `f2(e1, e2) = -z`.
pub fn torus() -> TorusExample {
    let m = ModelManifold::new(2, 1);
    let action = LieAction::new(
        LieAlgebra::abelian(2),
        &m,
        vec![VectorField::frame(&m, 0), VectorField::frame(&m, 1)],
    )
    .expect("translations commute");
    let omega = DifferentialForm::from_term(&m, &[0, 1, 2], ScalarFn::one(&m));

    let z = ScalarFn::z(&m, 0);
    let f1_values = vec![
        &DifferentialForm::from_term(&m, &[1], z.clone()) + &DifferentialForm::coframe(&m, 0),
        &DifferentialForm::from_term(&m, &[0], -&z) + &DifferentialForm::coframe(&m, 1),
    ];
    let mut f1 = CeFormCochain::new(2, 1);
    f1.insert(vec![0], f1_values[0].clone());
    f1.insert(vec![1], f1_values[1].clone());
    let mut f2 = CeFormCochain::new(2, 2);
    f2.insert(vec![0, 1], DifferentialForm::from_scalar(-&z));
    let mut f = MomentMapCandidate::zero(&m, 2, 2);
    f.set_component(1, f1);
    f.set_component(2, f2);

    let mu_prime = GMap::new(
        &m,
        1,
        vec![
            DifferentialForm::from_term(&m, &[1], z.clone()),
            DifferentialForm::from_term(&m, &[0], -&z),
        ],
    );
    let f1_map = GMap::new(&m, 1, f1_values);

    TorusExample {
        manifold: m,
        action,
        omega,
        f,
        mu_prime,
        f1_map,
    }
}

/// Translations on the plane with the area form, viewed with `n = 1`: the
/// standard example of a nonzero obstruction class.
pub struct PlaneTranslations {
    pub manifold: ModelManifold,
    pub action: LieAction,
    pub omega: DifferentialForm,
}

pub fn plane_translations() -> PlaneTranslations {
    let m = ModelManifold::new(0, 2);
    let action = LieAction::new(
        LieAlgebra::abelian(2),
        &m,
        vec![VectorField::frame(&m, 0), VectorField::frame(&m, 1)],
    )
    .expect("translations commute");
    let omega = DifferentialForm::from_term(&m, &[0, 1], ScalarFn::one(&m));
    PlaneTranslations {
        manifold: m,
        action,
        omega,
    }
}

/// A nonabelian example: `aff(1)` acting on `R^3` by `v1 = par_z1`,
/// `v2 = z1 par_z1 - z2 par_z2`, preserving `dz1 ^ dz2 ^ dz3` (`n = 2`),
/// with a polynomial moment map.
pub struct Aff1Example {
    pub manifold: ModelManifold,
    pub action: LieAction,
    pub omega: DifferentialForm,
    pub f: MomentMapCandidate,
}

pub fn aff1_on_r3() -> Aff1Example {
    let m = ModelManifold::new(0, 3);
    let z1 = ScalarFn::z(&m, 0);
    let z2 = ScalarFn::z(&m, 1);
    let v1 = VectorField::frame(&m, 0);
    let v2 = &VectorField::from_component(&m, 0, z1.clone())
        + &VectorField::from_component(&m, 1, -&z2);
    let action =
        LieAction::new(LieAlgebra::aff1(), &m, vec![v1, v2]).expect("aff(1) relations hold");
    let omega = DifferentialForm::from_term(&m, &[0, 1, 2], ScalarFn::one(&m));

    // f1(e1) = -z2 dz3, f1(e2) = -z1 z2 dz3, f2 = 0
    let mut f1 = CeFormCochain::new(2, 1);
    f1.insert(vec![0], DifferentialForm::from_term(&m, &[2], -&z2));
    f1.insert(
        vec![1],
        DifferentialForm::from_term(&m, &[2], -&(&z1 * &z2)),
    );
    let mut f = MomentMapCandidate::zero(&m, 2, 2);
    f.set_component(1, f1);

    Aff1Example {
        manifold: m,
        action,
        omega,
        f,
    }
}

/// The zero form with the zero moment map under a trivial action.
pub struct TrivialExample {
    pub manifold: ModelManifold,
    pub action: LieAction,
    pub omega: DifferentialForm,
    pub f: MomentMapCandidate,
}

pub fn trivial() -> TrivialExample {
    let m = ModelManifold::new(1, 1);
    let action = LieAction::new(LieAlgebra::abelian(1), &m, vec![VectorField::zero(&m)])
        .expect("trivial action");
    TrivialExample {
        manifold: m.clone(),
        action,
        omega: DifferentialForm::zero(&m, 3),
        f: MomentMapCandidate::zero(&m, 1, 2),
    }
}
