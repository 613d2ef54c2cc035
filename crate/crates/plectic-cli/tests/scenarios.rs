//! The bundled scenario corpus loads, validates, and matches the
//! programmatic example data.

use std::path::{Path, PathBuf};

use plectic::corpus;
use plectic::moment::phi_from_f;
use plectic_cli::scenario::Scenario;

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn load(name: &str) -> Scenario {
    Scenario::load(&scenario_dir().join(name))
        .unwrap_or_else(|e| panic!("loading {name}: {e}"))
}

#[test]
fn every_bundled_scenario_loads() {
    for entry in std::fs::read_dir(scenario_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) == Some("toml") {
            Scenario::load(&path)
                .unwrap_or_else(|e| panic!("loading {}: {e}", path.display()));
        }
    }
}

#[test]
fn torus_scenario_matches_the_programmatic_example() {
    let s = load("torus.toml");
    let reference = corpus::torus();
    assert_eq!(s.manifold, reference.manifold);
    assert_eq!(s.action, reference.action);
    assert_eq!(s.forms["omega"], reference.omega);
    assert_eq!(s.moment_map().unwrap(), reference.f);
    assert_eq!(s.gmap("mu", 1).unwrap(), reference.mu_prime);
}

#[test]
fn torus_prime_candidate_is_the_eta_shift() {
    let s = load("torus.toml");
    let phi = phi_from_f(&s.moment_map().unwrap());
    let phi2 = phi_from_f(&s.moment_map_prime().unwrap());
    let eta = s.eta().unwrap();
    assert_eq!(phi2, phi.add(&eta.d_tot(s.action.algebra())));
}

#[test]
fn plane_scenario_matches() {
    let s = load("translations_r2.toml");
    let reference = corpus::plane_translations();
    assert_eq!(s.manifold, reference.manifold);
    assert_eq!(s.forms["omega"], reference.omega);
    assert_eq!(s.n, 1);
}

#[test]
fn aff1_scenario_matches() {
    let s = load("aff1_r3.toml");
    let reference = corpus::aff1_on_r3();
    assert_eq!(s.action, reference.action);
    assert_eq!(s.forms["omega"], reference.omega);
    assert_eq!(s.moment_map().unwrap(), reference.f);
}

#[test]
fn isotopy_scenario_provides_both_families() {
    let s = load("torus_isotopy.toml");
    assert!(s.has_cartan_family());
    assert!(s.has_moment_family());
    let cartan = s.cartan_family().unwrap();
    assert!(!cartan.x_s.is_zero());
    let moment = s.moment_family().unwrap();
    assert_eq!(moment.f_s.n(), 2);
}

#[test]
fn trivial_scenario_is_zero_everywhere() {
    let s = load("trivial.toml");
    assert!(s.forms["omega"].is_zero());
    assert!(s.moment_map().unwrap().is_zero());
}
