//! Randomized agreement suite for the two verification routes, the affine
//! structure of the solution space, and the obstruction machinery.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plectic::corpus;
use plectic::equivariant::TotalCochain;
use plectic::form::DifferentialForm;
use plectic::lie::ce_is_coboundary;
use plectic::manifold::{Point, QuarterTurn};
use plectic::moment::{
    cross_check, f_from_phi, monomial_ansatz, obstruction_class, phi_from_f, solve_primitive,
    verify_primitive, MomentMapCandidate, SolveMomentOutcome,
};
use plectic::random::{self, GenConfig};
use plectic::scalar::rat;

/// Perturb one component of a candidate by a random form of matching degree.
fn perturb(
    rng: &mut ChaCha8Rng,
    f: &MomentMapCandidate,
    k: usize,
    cfg: &GenConfig,
) -> MomentMapCandidate {
    let m = f.manifold().clone();
    let degree = f.n() - k;
    let mut c = f
        .component(k)
        .cloned()
        .unwrap_or_else(|| plectic::lie::CeFormCochain::new(f.dim_g(), k));
    let cochain = random::form_cochain(rng, &m, f.dim_g(), k, degree, cfg);
    c = c.add(&cochain);
    let mut out = f.clone();
    out.set_component(k, c);
    out
}

#[test]
fn both_routes_agree_on_valid_and_perturbed_candidates() {
    let cfg = GenConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut cases = 0usize;

    let torus = corpus::torus();
    let aff = corpus::aff1_on_r3();
    let trivial = corpus::trivial();

    // the valid corpus candidates
    for _ in 0..5 {
        assert!(cross_check(&torus.f, &torus.omega, &torus.action)
            .unwrap()
            .is_ok());
        assert!(cross_check(&aff.f, &aff.omega, &aff.action).unwrap().is_ok());
        assert!(cross_check(&trivial.f, &trivial.omega, &trivial.action)
            .unwrap()
            .is_ok());
        cases += 3;
    }

    // perturbations in each component separately, plus joint ones
    for _ in 0..50 {
        for k in 1..=2usize {
            let p = perturb(&mut rng, &torus.f, k, &cfg);
            let check = cross_check(&p, &torus.omega, &torus.action).unwrap();
            assert!(check.agree(), "routes disagree on torus perturbation");
            cases += 1;

            let p = perturb(&mut rng, &aff.f, k, &cfg);
            let check = cross_check(&p, &aff.omega, &aff.action).unwrap();
            assert!(check.agree(), "routes disagree on aff(1) perturbation");
            cases += 1;
        }
        // fully random candidates
        let mut f = MomentMapCandidate::zero(&torus.manifold, 2, 2);
        for k in 1..=2usize {
            f.set_component(
                k,
                random::form_cochain(&mut rng, &torus.manifold, 2, k, 2 - k, &cfg),
            );
        }
        let check = cross_check(&f, &torus.omega, &torus.action).unwrap();
        assert!(check.agree(), "routes disagree on random candidate");
        cases += 1;
    }

    assert!(cases >= 200, "only {cases} cases exercised");
}

#[test]
fn primitives_form_an_affine_space() {
    let cfg = GenConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let torus = corpus::torus();
    let alg = torus.action.algebra();
    let phi = phi_from_f(&torus.f);

    for _ in 0..40 {
        // any d_tot-exact shift preserves the primitive property
        let eta = random::total_cochain(&mut rng, &torus.manifold, 2, 1, &cfg);
        let shifted = phi.add(&eta.d_tot(alg));
        assert!(verify_primitive(&shifted, &torus.omega, &torus.action)
            .unwrap()
            .is_ok());
        // differences of primitives are closed
        assert!(shifted.sub(&phi).d_tot(alg).is_zero());
        // and the shifted candidate still passes the direct route
        assert!(
            cross_check(&f_from_phi(&shifted), &torus.omega, &torus.action)
                .unwrap()
                .is_ok()
        );
    }
}

#[test]
fn ansatz_solutions_verify_everywhere() {
    let torus = corpus::torus();
    let ansatz = monomial_ansatz(&torus.manifold, 2, 2, 1, 0);
    let SolveMomentOutcome::Solution(phi) =
        solve_primitive(&torus.omega, &torus.action, &ansatz).unwrap()
    else {
        panic!("torus solve must succeed");
    };
    assert!(cross_check(&f_from_phi(&phi), &torus.omega, &torus.action)
        .unwrap()
        .is_ok());

    let aff = corpus::aff1_on_r3();
    let ansatz = monomial_ansatz(&aff.manifold, 2, 2, 2, 0);
    let SolveMomentOutcome::Solution(phi) =
        solve_primitive(&aff.omega, &aff.action, &ansatz).unwrap()
    else {
        panic!("aff(1) solve must succeed");
    };
    assert!(cross_check(&f_from_phi(&phi), &aff.omega, &aff.action)
        .unwrap()
        .is_ok());
}

#[test]
fn trig_ansatz_elements_are_usable() {
    // an ansatz with trigonometric generators still solves the torus case
    let torus = corpus::torus();
    let ansatz = monomial_ansatz(&torus.manifold, 2, 2, 1, 1);
    assert!(ansatz.len() > monomial_ansatz(&torus.manifold, 2, 2, 1, 0).len());
    let SolveMomentOutcome::Solution(phi) =
        solve_primitive(&torus.omega, &torus.action, &ansatz).unwrap()
    else {
        panic!("torus solve with trig ansatz must succeed");
    };
    assert!(verify_primitive(&phi, &torus.omega, &torus.action)
        .unwrap()
        .is_ok());
}

#[test]
fn obstruction_class_is_point_independent() {
    let torus = corpus::torus();
    let plane = corpus::plane_translations();
    let alg2 = plectic::lie::LieAlgebra::abelian(2);

    // all quarter-period angles, bounded affine values
    let mut torus_classes = Vec::new();
    for q1 in 0..4 {
        for q2 in 0..4 {
            for z in [rat(0, 1), rat(3, 2)] {
                let p = Point::new(
                    &torus.manifold,
                    vec![QuarterTurn::new(q1), QuarterTurn::new(q2)],
                    vec![z],
                )
                .unwrap();
                torus_classes.push(
                    obstruction_class(&torus.omega, &torus.action, &p)
                        .unwrap()
                        .cochain,
                );
            }
        }
    }
    for pair in torus_classes.windows(2) {
        let diff = pair[0].sub(&pair[1]);
        assert!(ce_is_coboundary(&diff, &alg2).unwrap().is_coboundary());
    }

    let mut plane_classes = Vec::new();
    for z1 in [rat(0, 1), rat(-1, 2), rat(7, 3)] {
        for z2 in [rat(0, 1), rat(5, 4)] {
            let p = Point::new(&plane.manifold, vec![], vec![z1.clone(), z2]).unwrap();
            plane_classes.push(
                obstruction_class(&plane.omega, &plane.action, &p)
                    .unwrap()
                    .cochain,
            );
        }
    }
    for pair in plane_classes.windows(2) {
        let diff = pair[0].sub(&pair[1]);
        assert!(ce_is_coboundary(&diff, &alg2).unwrap().is_coboundary());
    }
}

#[test]
fn degenerate_inputs_are_rejected() {
    let torus = corpus::torus();
    let nonclosed = DifferentialForm::from_term(
        &torus.manifold,
        &[0],
        plectic::scalar::ScalarFn::z(&torus.manifold, 0),
    );
    assert!(!nonclosed.exterior_d().is_zero());
    let zero = TotalCochain::zero(&torus.manifold, 2, 0);
    assert!(verify_primitive(&zero, &nonclosed, &torus.action).is_err());

    // a non-invariant omega is rejected as well
    let noninvariant = DifferentialForm::from_term(
        &torus.manifold,
        &[0, 1, 2],
        plectic::scalar::ScalarFn::sin(&torus.manifold, &[1, 0]),
    );
    let zero2 = TotalCochain::zero(&torus.manifold, 2, 2);
    assert!(verify_primitive(&zero2, &noninvariant, &torus.action).is_err());
}
