//! Deterministic random generators for the property suites.
//!
//! All randomized tests seed their own `ChaCha` generator, so failures
//! reproduce exactly; the generators here only consume the `Rng` they are
//! given.

use itertools::Itertools;
use rand::Rng;

use crate::equivariant::TotalCochain;
use crate::form::{DifferentialForm, VectorField};
use crate::lie::{CeFormCochain, CeScalarCochain};
use crate::manifold::{ModelManifold, Param};
use crate::scalar::{rat, Rational, ScalarFn};

/// Size and coefficient bounds for generated objects.
#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub max_terms: usize,
    pub freq_bound: i64,
    pub poly_degree: u32,
    pub numerator_bound: i64,
    pub denominator_bound: i64,
    pub use_params: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_terms: 2,
            freq_bound: 3,
            poly_degree: 3,
            numerator_bound: 4,
            denominator_bound: 2,
            use_params: false,
        }
    }
}

pub fn rational(rng: &mut impl Rng, cfg: &GenConfig) -> Rational {
    let num = rng.random_range(-cfg.numerator_bound..=cfg.numerator_bound);
    let den = rng.random_range(1..=cfg.denominator_bound);
    rat(num, den)
}

fn nonzero_rational(rng: &mut impl Rng, cfg: &GenConfig) -> Rational {
    let mut num = rng.random_range(1..=cfg.numerator_bound);
    if rng.random_bool(0.5) {
        num = -num;
    }
    let den = rng.random_range(1..=cfg.denominator_bound);
    rat(num, den)
}

/// One random monomial term: rational times optional trig factor times a
/// z/t/s monomial.
fn term(rng: &mut impl Rng, m: &ModelManifold, cfg: &GenConfig) -> ScalarFn {
    let mut out = ScalarFn::constant(m, nonzero_rational(rng, cfg));
    if m.torus_dim() > 0 && rng.random_bool(0.6) {
        let freq: Vec<i64> = (0..m.torus_dim())
            .map(|_| rng.random_range(-cfg.freq_bound..=cfg.freq_bound))
            .collect();
        let trig = if rng.random_bool(0.5) {
            ScalarFn::sin(m, &freq)
        } else {
            ScalarFn::cos(m, &freq)
        };
        out = &out * &trig;
    }
    if m.affine_dim() > 0 {
        let degree = rng.random_range(0..=cfg.poly_degree);
        for _ in 0..degree {
            let j = rng.random_range(0..m.affine_dim());
            out = &out * &ScalarFn::z(m, j);
        }
    }
    if cfg.use_params {
        for p in [Param::T, Param::S] {
            if m.has_param(p) && rng.random_bool(0.5) {
                let e = rng.random_range(1..=cfg.poly_degree.max(1));
                out = &out * &ScalarFn::param(m, p).pow(e);
            }
        }
    }
    out
}

pub fn scalar(rng: &mut impl Rng, m: &ModelManifold, cfg: &GenConfig) -> ScalarFn {
    let nterms = rng.random_range(0..=cfg.max_terms);
    let mut out = ScalarFn::zero(m);
    for _ in 0..nterms {
        out = &out + &term(rng, m, cfg);
    }
    out
}

fn random_tuple(rng: &mut impl Rng, universe: usize, k: usize) -> Option<Vec<usize>> {
    if k > universe {
        return None;
    }
    let mut all: Vec<usize> = (0..universe).collect();
    for i in 0..k {
        let j = rng.random_range(i..universe);
        all.swap(i, j);
    }
    let mut tuple = all[..k].to_vec();
    tuple.sort_unstable();
    Some(tuple)
}

pub fn form(
    rng: &mut impl Rng,
    m: &ModelManifold,
    degree: usize,
    cfg: &GenConfig,
) -> DifferentialForm {
    let mut out = DifferentialForm::zero(m, degree);
    if degree > m.dim() {
        return out;
    }
    let nterms = rng.random_range(0..=cfg.max_terms);
    for _ in 0..nterms {
        let Some(tuple) = random_tuple(rng, m.dim(), degree) else {
            continue;
        };
        let coeff = term(rng, m, cfg);
        out = &out + &DifferentialForm::from_term(m, &tuple, coeff);
    }
    out
}

pub fn field(rng: &mut impl Rng, m: &ModelManifold, cfg: &GenConfig) -> VectorField {
    let mut out = VectorField::zero(m);
    let nterms = rng.random_range(1..=cfg.max_terms.max(1));
    for _ in 0..nterms {
        let flat = rng.random_range(0..m.dim());
        let coeff = term(rng, m, cfg);
        out = &out + &VectorField::from_component(m, flat, coeff);
    }
    out
}

pub fn form_cochain(
    rng: &mut impl Rng,
    m: &ModelManifold,
    dim_g: usize,
    k: usize,
    degree: usize,
    cfg: &GenConfig,
) -> CeFormCochain {
    let mut out = CeFormCochain::new(dim_g, k);
    if k > dim_g || degree > m.dim() {
        return out;
    }
    for tuple in (0..dim_g).combinations(k) {
        if rng.random_bool(0.7) {
            out.insert(tuple, form(rng, m, degree, cfg));
        }
    }
    out
}

pub fn scalar_cochain(
    rng: &mut impl Rng,
    dim_g: usize,
    k: usize,
    cfg: &GenConfig,
) -> CeScalarCochain {
    let mut out = CeScalarCochain::new(dim_g, k);
    if k > dim_g {
        return out;
    }
    for tuple in (0..dim_g).combinations(k) {
        if rng.random_bool(0.7) {
            out.insert(tuple, rational(rng, cfg));
        }
    }
    out
}

pub fn total_cochain(
    rng: &mut impl Rng,
    m: &ModelManifold,
    dim_g: usize,
    total_degree: i64,
    cfg: &GenConfig,
) -> TotalCochain {
    let mut out = TotalCochain::zero(m, dim_g, total_degree);
    for k in 1..=dim_g {
        let degree = total_degree - k as i64;
        if !(0..=m.dim() as i64).contains(&degree) {
            continue;
        }
        let c = form_cochain(rng, m, dim_g, k, degree as usize, cfg);
        if !c.is_zero() {
            out.set_slice(k, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic() {
        let m = ModelManifold::new(2, 1);
        let cfg = GenConfig::default();
        let a = scalar(&mut ChaCha8Rng::seed_from_u64(7), &m, &cfg);
        let b = scalar(&mut ChaCha8Rng::seed_from_u64(7), &m, &cfg);
        assert_eq!(a, b);
        let fa = form(&mut ChaCha8Rng::seed_from_u64(9), &m, 2, &cfg);
        let fb = form(&mut ChaCha8Rng::seed_from_u64(9), &m, 2, &cfg);
        assert_eq!(fa, fb);
    }

    #[test]
    fn tuples_are_increasing_and_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let t = random_tuple(&mut rng, 5, 3).unwrap();
            assert!(t.windows(2).all(|w| w[0] < w[1]));
            assert!(t.iter().all(|&i| i < 5));
        }
        assert!(random_tuple(&mut rng, 2, 3).is_none());
    }
}
