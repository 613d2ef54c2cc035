//! Acceptance suite: one test per criterion, each printing a PASS line and
//! enforcing its runtime budget. All arithmetic is rational, so every
//! comparison below is exact — the tolerance everywhere is zero.
//!
//! Run with:
//!
//! ```text
//! cargo test -p plectic-cli --test acceptance -- --nocapture
//! ```

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plectic::cartan::{
    cartan_cocycle_check, isotopy_to_cartan_equiv, moment_from_cartan, CartanFamily,
};
use plectic::corpus;
use plectic::derham::{find_primitive, Exactness};
use plectic::equivalence::{
    build_homotopy_from_inner, extract_eta_from_homotopy, fixomega_certificate,
    isotopy_to_equivalence, verify_equivalence, verify_inner_equivalence, EquivalenceWitness,
    MomentFamily,
};
use plectic::equivariant::{
    tilde_equivariant, tilde_form, GMap, LieAction, TotalCochain,
};
use plectic::form::{extended_cartan_residual, DifferentialForm, VectorField};
use plectic::lie::{ce_cohomology_dims, CeFormCochain, LieAlgebra};
use plectic::manifold::{ModelManifold, Param};
use plectic::moment::{
    cross_check, monomial_ansatz, obstruction_class, phi_from_f, solve_primitive,
    verify_linfty_direct, verify_primitive, ExistenceConclusion, MomentMapCandidate,
    SolveMomentOutcome,
};
use plectic::random::{self, GenConfig};
use plectic::scalar::{rat, rat_int, ScalarFn};
use plectic_cli::scenario::Scenario;

fn scenario(name: &str) -> Scenario {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name);
    Scenario::load(&path).unwrap_or_else(|e| panic!("loading {name}: {e}"))
}

fn finish(criterion: &str, started: Instant, budget_secs: u64) {
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < budget_secs,
        "criterion {criterion} exceeded its {budget_secs}s budget: {elapsed:?}"
    );
    println!(
        "acceptance criterion {criterion}: PASS ({} ms)",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_01_cartan_calculus_relations() {
    let started = Instant::now();
    let cfg = GenConfig {
        max_terms: 2,
        freq_bound: 3,
        poly_degree: 3,
        ..GenConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let manifolds = [
        ModelManifold::new(1, 1),
        ModelManifold::new(2, 1),
        ModelManifold::new(2, 2),
        ModelManifold::new(0, 2),
        ModelManifold::new(1, 2),
    ];
    let mut cases = 0usize;
    for m in &manifolds {
        for _ in 0..200 {
            let deg_a = rng.random_range(0..=m.dim());
            let a = random::form(&mut rng, m, deg_a, &cfg);
            let deg_b = rng.random_range(0..=m.dim());
            let b = random::form(&mut rng, m, deg_b, &cfg);
            let v = random::field(&mut rng, m, &cfg);
            let w = random::field(&mut rng, m, &cfg);
            let f = random::scalar(&mut rng, m, &cfg);

            // 1: d o d = 0
            assert!(a.exterior_d().exterior_d().is_zero());
            // 2: [L_v, d] = 0
            assert_eq!(
                a.exterior_d().lie_derivative(&v),
                a.lie_derivative(&v).exterior_d()
            );
            // 3: (d iota_v + iota_v d) f = v(f) on functions
            assert_eq!(
                DifferentialForm::from_scalar(f.clone()).lie_derivative(&v),
                DifferentialForm::from_scalar(v.apply(&f))
            );
            // 4: iota_v iota_w + iota_w iota_v = 0
            let vw = a.contract_field(&v).contract_field(&w);
            let wv = a.contract_field(&w).contract_field(&v);
            assert!((&vw + &wv).is_zero());
            // 5: [L_v, L_w] = L_{[v,w]}
            let commutator =
                &a.lie_derivative(&w).lie_derivative(&v) - &a.lie_derivative(&v).lie_derivative(&w);
            assert_eq!(commutator, a.lie_derivative(&v.lie_bracket(&w)));
            // 6: [L_v, iota_w] = iota_{[v,w]}
            let mixed = &a.contract_field(&w).lie_derivative(&v)
                - &a.lie_derivative(&v).contract_field(&w);
            assert_eq!(mixed, a.contract_field(&v.lie_bracket(&w)));
            // 7: L_v is a derivation of the wedge product
            assert_eq!(
                a.wedge(&b).lie_derivative(&v),
                &a.lie_derivative(&v).wedge(&b) + &a.wedge(&b.lie_derivative(&v))
            );
            cases += 1;
        }
    }
    assert!(cases >= 1000);
    finish("01 (derivation calculus relations)", started, 30);
}

#[test]
fn criterion_02_extended_cartan_identity() {
    let started = Instant::now();
    let cfg = GenConfig {
        max_terms: 2,
        ..GenConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let m = ModelManifold::new(2, 2);
    for k in 2..=4usize {
        for _ in 0..300 {
            let degree = rng.random_range(0..=m.dim());
            let omega = random::form(&mut rng, &m, degree, &cfg);
            let fields: Vec<VectorField> =
                (0..k).map(|_| random::field(&mut rng, &m, &cfg)).collect();
            assert!(
                extended_cartan_residual(&fields, &omega).is_zero(),
                "failed at k = {k}"
            );
        }
    }
    finish("02 (extended Cartan identity)", started, 60);
}

#[test]
fn criterion_03_chain_map_identities() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let invariant_cfg = GenConfig {
        freq_bound: 0,
        ..GenConfig::default()
    };

    // every bundled closed invariant form gives a closed cochain
    let torus = corpus::torus();
    let aff = corpus::aff1_on_r3();
    let plane = corpus::plane_translations();
    for (omega, action) in [
        (&torus.omega, &torus.action),
        (&aff.omega, &aff.action),
        (&plane.omega, &plane.action),
    ] {
        assert!(tilde_form(omega, action)
            .unwrap()
            .d_tot(action.algebra())
            .is_zero());
    }

    // the invariant-form chain map, randomized over the torus translations
    for _ in 0..100 {
        let degree = rng.random_range(0..torus.manifold.dim());
        let sigma = random::form(&mut rng, &torus.manifold, degree, &invariant_cfg);
        let lhs = tilde_form(&sigma, &torus.action)
            .unwrap()
            .d_tot(torus.action.algebra());
        let rhs = tilde_form(&sigma.exterior_d(), &torus.action).unwrap();
        assert_eq!(lhs, rhs);
    }

    // and over the nonabelian corpus action: z3-polynomials against the
    // invariant coframe monomials
    for _ in 0..100 {
        let m = &aff.manifold;
        let z3 = ScalarFn::z(m, 2);
        let mut coeff = ScalarFn::constant(m, random::rational(&mut rng, &invariant_cfg));
        for _ in 0..rng.random_range(0..=2u32) {
            coeff = &coeff * &z3;
        }
        let dz12 =
            DifferentialForm::coframe(m, 0).wedge(&DifferentialForm::coframe(m, 1));
        let sigma = match rng.random_range(0..3u32) {
            0 => DifferentialForm::from_scalar(coeff),
            1 => DifferentialForm::coframe(m, 2).scalar_mul(&coeff),
            _ => dz12.scalar_mul(&coeff),
        };
        let lhs = tilde_form(&sigma, &aff.action)
            .unwrap()
            .d_tot(aff.action.algebra());
        let rhs = tilde_form(&sigma.exterior_d(), &aff.action).unwrap();
        assert_eq!(lhs, rhs);
    }

    // the equivariant chain map, randomized: dz-leg values plus matched pairs
    for _ in 0..100 {
        let m = &torus.manifold;
        let degree = rng.random_range(0..=1usize);
        let mut values: Vec<DifferentialForm> = (0..2)
            .map(|_| {
                let f = random::scalar(&mut rng, m, &invariant_cfg);
                if degree == 0 {
                    DifferentialForm::from_scalar(f)
                } else {
                    DifferentialForm::from_term(m, &[2], f)
                }
            })
            .collect();
        if degree == 1 {
            let c = random::rational(&mut rng, &invariant_cfg);
            let z = ScalarFn::z(m, 0);
            values[0] = &values[0]
                + &DifferentialForm::from_term(m, &[1], z.scale(&c));
            values[1] = &values[1]
                - &DifferentialForm::from_term(m, &[0], z.scale(&c));
        }
        let f = GMap::new(m, degree, values);
        let lhs = tilde_equivariant(&f, &torus.action)
            .unwrap()
            .d_tot(torus.action.algebra());
        let rhs = tilde_equivariant(&f.exterior_d(), &torus.action)
            .unwrap()
            .neg();
        assert_eq!(lhs, rhs);
    }
    finish("03 (tilde chain maps)", started, 30);
}

#[test]
fn criterion_04_route_agreement() {
    let started = Instant::now();
    let cfg = GenConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let torus = corpus::torus();
    let aff = corpus::aff1_on_r3();
    let mut cases = 0usize;

    let mut invalid_seen = 0usize;
    let mut run_case = |f: &MomentMapCandidate,
                        omega: &DifferentialForm,
                        action: &LieAction,
                        expect_valid: Option<bool>| {
        let check = cross_check(f, omega, action).unwrap();
        assert!(check.agree(), "routes disagree");
        if let Some(valid) = expect_valid {
            assert_eq!(check.is_ok(), valid);
        }
        if !check.is_ok() {
            invalid_seen += 1;
        }
        cases += 1;
    };

    run_case(&torus.f, &torus.omega, &torus.action, Some(true));
    run_case(&aff.f, &aff.omega, &aff.action, Some(true));

    for _ in 0..80 {
        // perturb each component separately, in both scenarios
        for k in 1..=2usize {
            for (base, omega, action) in [
                (&torus.f, &torus.omega, &torus.action),
                (&aff.f, &aff.omega, &aff.action),
            ] {
                let noise = random::form_cochain(
                    &mut rng,
                    base.manifold(),
                    2,
                    k,
                    2 - k,
                    &cfg,
                );
                if noise.is_zero() {
                    continue;
                }
                let mut perturbed = base.clone();
                let merged = match base.component(k) {
                    Some(c) => c.add(&noise),
                    None => noise,
                };
                perturbed.set_component(k, merged);
                // a perturbation may happen to be d_tot-closed and land back
                // in the affine solution space, so only agreement is asserted
                run_case(&perturbed, omega, action, None);
            }
        }
        // fully random candidates against the torus volume
        let mut f = MomentMapCandidate::zero(&torus.manifold, 2, 2);
        for k in 1..=2usize {
            f.set_component(
                k,
                random::form_cochain(&mut rng, &torus.manifold, 2, k, 2 - k, &cfg),
            );
        }
        run_case(&f, &torus.omega, &torus.action, None);
    }
    assert!(cases >= 200, "only {cases} cases exercised");
    assert!(invalid_seen >= 50, "too few failing candidates exercised");
    finish("04 (verification route agreement)", started, 60);
}

#[test]
fn criterion_05_torus_scenario() {
    let started = Instant::now();
    let s = scenario("torus.toml");
    let f = s.moment_map().unwrap();
    let m = &s.manifold;

    // the bundled components
    let z = ScalarFn::z(m, 0);
    let expected_f1_e1 = &DifferentialForm::from_term(m, &[1], z.clone())
        + &DifferentialForm::coframe(m, 0);
    assert_eq!(f.component(1).unwrap().get(&[0]).unwrap(), &expected_f1_e1);
    assert_eq!(
        f.component(2).unwrap().get(&[0, 1]).unwrap(),
        &DifferentialForm::from_scalar(-&z)
    );

    // both verification routes
    let omega = s.form("omega", 3).unwrap();
    let check = cross_check(&f, &omega, &s.action).unwrap();
    assert!(check.is_ok());

    // equivariance of every component
    assert!(plectic::moment::equivariance_check_components(&f, &s.action).is_ok());

    // obstruction class vanishes (top exterior power of a 2-dim algebra)
    let p = s.point(None).unwrap();
    let obstruction = obstruction_class(&omega, &s.action, &p).unwrap();
    assert!(obstruction.cochain.is_zero());
    assert!(obstruction.vanishes());

    // the circle-average certificate issues with contraction value 1
    let x = s.fixomega_x.clone().unwrap();
    let report = fixomega_certificate(&omega, &f, &x, &s.action).unwrap();
    assert_eq!(report.contraction_value, ScalarFn::one(m));
    assert!(report.certified());

    finish("05 (torus worked example)", started, 5);
}

#[test]
fn criterion_06_cartan_pipeline() {
    let started = Instant::now();
    let s = scenario("torus.toml");
    let omega = s.form("omega", 3).unwrap();
    let mu = s.gmap("mu", 1).unwrap();

    let f = moment_from_cartan(&omega, &mu, &s.action).unwrap();
    assert_eq!(
        f.component(2).unwrap().get(&[0, 1]).unwrap(),
        &DifferentialForm::from_scalar(-&ScalarFn::z(&s.manifold, 0))
    );
    let check = cross_check(&f, &omega, &s.action).unwrap();
    assert!(check.is_ok());
    assert!(verify_primitive(&phi_from_f(&f), &omega, &s.action)
        .unwrap()
        .is_ok());

    // f1 itself is rejected precisely at condition (c)
    let torus = corpus::torus();
    let report = cartan_cocycle_check(&omega, &torus.f1_map, &s.action).unwrap();
    assert!(!report.is_ok());
    assert!(report.failures.iter().all(|f| f.condition() == 'c'));
    assert!(report.consistent());

    finish("06 (Cartan pipeline)", started, 5);
}

#[test]
fn criterion_07_obstruction_theory() {
    let started = Instant::now();
    let s = scenario("translations_r2.toml");
    let omega = s.form("omega", 2).unwrap();
    let p = s.point(None).unwrap();

    let obstruction = obstruction_class(&omega, &s.action, &p).unwrap();
    let mut expected = plectic::lie::CeScalarCochain::new(2, 2);
    expected.insert(vec![0, 1], rat_int(1));
    assert_eq!(obstruction.cochain, expected);
    assert!(!obstruction.vanishes());

    let ansatz = monomial_ansatz(&s.manifold, 2, 1, 3, 0);
    assert_eq!(
        solve_primitive(&omega, &s.action, &ansatz).unwrap(),
        SolveMomentOutcome::NoSolutionInAnsatz
    );

    let report = plectic::moment::existence_hypotheses(&omega, &s.action, &p).unwrap();
    assert_eq!(report.conclusion, ExistenceConclusion::NoMomentMap);

    assert_eq!(ce_cohomology_dims(&LieAlgebra::abelian(2)), vec![1, 2, 1]);
    assert_eq!(ce_cohomology_dims(&LieAlgebra::heisenberg())[1], 2);

    finish("07 (obstruction theory)", started, 10);
}

#[test]
fn criterion_08_equivalences() {
    let started = Instant::now();
    let s = scenario("torus.toml");
    let omega = s.form("omega", 3).unwrap();
    let phi = phi_from_f(&s.moment_map().unwrap());
    let phi2 = phi_from_f(&s.moment_map_prime().unwrap());
    let eta = s.eta().unwrap();

    // the bundled inner equivalence verifies
    let inner = verify_inner_equivalence(&omega, &phi, &phi2, &eta, &s.action).unwrap();
    assert!(inner.is_ok());

    // a closed non-exact shift is certified non-equivalent
    let m = &s.manifold;
    let mut kappa = TotalCochain::zero(m, 2, 2);
    let mut c = CeFormCochain::new(2, 1);
    c.insert(vec![0], DifferentialForm::coframe(m, 0));
    c.insert(vec![1], DifferentialForm::coframe(m, 1));
    kappa.set_slice(1, c);
    let shifted = phi.add(&kappa);
    let zero_eta = TotalCochain::zero(m, 2, 1);
    let broken =
        verify_inner_equivalence(&omega, &phi, &shifted, &zero_eta, &s.action).unwrap();
    assert!(!broken.is_ok());
    let certs = broken.non_exactness_certificates();
    assert_eq!(certs.len(), 2);
    for (i, h) in certs {
        assert_eq!(h, &DifferentialForm::coframe(m, i));
        assert!(matches!(
            find_primitive(h).unwrap(),
            Exactness::Class(_)
        ));
    }

    // relation laws on a corpus triple
    let alg = s.action.algebra();
    let alpha = DifferentialForm::from_term(m, &[0, 1], ScalarFn::z(m, 0));
    let w01 = EquivalenceWitness {
        eta: eta.clone(),
        alpha: DifferentialForm::zero(m, 2),
    };
    let w12 = EquivalenceWitness {
        eta: TotalCochain::zero(m, 2, 1),
        alpha: alpha.clone(),
    };
    let omega2 = &omega + &alpha.exterior_d();
    let phi_c = phi2.add(&tilde_form(&alpha, &s.action).unwrap());

    let id = EquivalenceWitness::trivial(m, 2, 2);
    assert!(
        verify_equivalence(&omega, &phi, &omega, &phi, &id, &s.action)
            .unwrap()
            .is_ok()
    );
    assert!(
        verify_equivalence(&omega, &phi, &omega, &phi2, &w01, &s.action)
            .unwrap()
            .is_ok()
    );
    assert!(
        verify_equivalence(&omega, &phi2, &omega, &phi, &w01.neg(), &s.action)
            .unwrap()
            .is_ok()
    );
    assert!(
        verify_equivalence(&omega, &phi2, &omega2, &phi_c, &w12, &s.action)
            .unwrap()
            .is_ok()
    );
    assert!(verify_equivalence(
        &omega,
        &phi,
        &omega2,
        &phi_c,
        &w01.add(&w12),
        &s.action
    )
    .unwrap()
    .is_ok());
    let _ = alg;

    finish("08 (equivalences)", started, 10);
}

#[test]
fn criterion_09_homotopy_correspondence() {
    let started = Instant::now();
    let cfg = GenConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let s = scenario("torus.toml");
    let omega = s.form("omega", 3).unwrap();
    let phi = phi_from_f(&s.moment_map().unwrap());
    let alg = s.action.algebra();

    // the bundled witness plus randomized ones
    let mut etas = vec![s.eta().unwrap()];
    for _ in 0..15 {
        etas.push(random::total_cochain(&mut rng, &s.manifold, 2, 1, &cfg));
    }

    for eta in &etas {
        let phi2 = phi.add(&eta.d_tot(alg));
        let inner = verify_inner_equivalence(&omega, &phi, &phi2, eta, &s.action).unwrap();
        assert!(inner.is_ok());

        let (h, report) =
            build_homotopy_from_inner(&omega, &phi, &phi2, eta, &s.action).unwrap();
        // boundary conditions
        assert!(report.boundary_at_zero && report.boundary_at_one);
        // the morphism property as an exact polynomial identity in t,
        // re-checked at rational samples
        assert!(report.morphism_identity);
        assert!(report.morphism_samples.iter().all(|(_, ok)| *ok));
        // the derivative identity and the raw component system
        assert!(report.derivative_identity);
        assert!(report.raw_ok());

        // extraction round-trips the induced coboundary exactly
        let mani_t = h.h0.manifold().clone();
        let action_t = s.action.promote(&mani_t);
        let recovered = extract_eta_from_homotopy(&h, &action_t).unwrap();
        assert_eq!(recovered.d_tot(alg), eta.promote(&mani_t).d_tot(alg));

        // the morphism property also holds at a sampled irrational-free
        // rational value away from the unit interval
        let frozen = h.h0.subst_param(Param::T, &rat(7, 3));
        assert!(verify_linfty_direct(&frozen, &omega.promote(&mani_t), &action_t)
            .unwrap()
            .is_ok());
    }

    finish("09 (homotopy correspondence)", started, 30);
}

#[test]
fn criterion_10_isotopy_witnesses() {
    let started = Instant::now();
    let s = scenario("torus_isotopy.toml");

    // the transported families
    let cartan_family = s.cartan_family().unwrap();
    let (alpha, f_map, equiv) = isotopy_to_cartan_equiv(&cartan_family, &s.action).unwrap();
    assert!(equiv.is_ok());
    assert_eq!(
        alpha,
        -&DifferentialForm::from_term(&s.manifold, &[0, 1], ScalarFn::one(&s.manifold))
    );
    assert!(f_map.is_zero());

    let moment_family = s.moment_family().unwrap();
    let (witness, verdict) = isotopy_to_equivalence(&moment_family, &s.action).unwrap();
    assert!(verdict.is_ok());
    assert!(witness.eta.is_zero());

    // the constant families
    let frozen_cartan = CartanFamily {
        x_s: VectorField::zero(&s.manifold),
        omega_s: cartan_family.omega_s.clone(),
        mu_s: cartan_family
            .mu_s
            .subst_param(Param::S, &rat_int(0)),
    };
    let (alpha0, f0, equiv0) = isotopy_to_cartan_equiv(&frozen_cartan, &s.action).unwrap();
    assert!(alpha0.is_zero() && f0.is_zero() && equiv0.is_ok());

    let frozen_moment = MomentFamily {
        x_s: VectorField::zero(&s.manifold),
        omega_s: moment_family.omega_s.clone(),
        f_s: moment_family.f_s.subst_param(Param::S, &rat_int(0)),
    };
    let (w0, v0) = isotopy_to_equivalence(&frozen_moment, &s.action).unwrap();
    assert!(w0.eta.is_zero() && w0.alpha.is_zero() && v0.is_ok());

    finish("10 (isotopy witnesses)", started, 10);
}
