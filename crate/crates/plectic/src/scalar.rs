//! Exact functions on the model manifold: finite Fourier sums with integer
//! frequencies times polynomials in the affine coordinates and parameters,
//! all over the rationals.
//!
//! Internally a function is stored as a map from monomials
//! `e^{i<m,theta>} * z^a * t^p * s^q` to Gaussian-rational coefficients,
//! subject to the reality constraint: the coefficient at `-m` is the complex
//! conjugate of the coefficient at `m`. Multiplication and differentiation
//! are monomial-wise and exact; the sin/cos form is only a display concern.
//!
//! Canonical form: no zero coefficients are stored, so structural equality
//! is function equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::manifold::{Coordinate, ModelManifold, Param, Point};

/// Arbitrary-precision rational scalar, always kept in lowest terms with
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// `n/d` as a [`Rational`].
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rational`].
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Error, Debug, PartialEq)]
pub enum EvalError {
    #[error("parameter {} has no value at the evaluation point", .0.name())]
    UnsetParam(Param),
    #[error("point does not match the manifold: {0}")]
    PointMismatch(String),
}

/// A Gaussian rational `re + i*im`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    pub fn real(re: Rational) -> Self {
        GaussRat {
            re,
            im: Rational::zero(),
        }
    }

    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRat { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn neg(&self) -> Self {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GaussRat {
            re: &self.re * c,
            im: &self.im * c,
        }
    }

    /// Multiply by `i*m` for an integer `m`.
    pub fn mul_i_int(&self, m: i64) -> Self {
        let m = rat_int(m);
        GaussRat {
            re: -(&self.im * &m),
            im: &self.re * &m,
        }
    }

    /// Multiply by `i^q` for `q` in `0..4`.
    pub fn mul_i_pow(&self, q: u8) -> Self {
        match q % 4 {
            0 => self.clone(),
            1 => GaussRat {
                re: -self.im.clone(),
                im: self.re.clone(),
            },
            2 => self.neg(),
            _ => GaussRat {
                re: self.im.clone(),
                im: -self.re.clone(),
            },
        }
    }

    /// Divide by `i*m` for a nonzero integer `m`.
    pub fn div_i_int(&self, m: i64) -> Self {
        assert!(m != 0, "division by zero frequency");
        // 1/(i*m) = -i/m
        let inv = rat(1, m);
        GaussRat {
            re: &self.im * &inv,
            im: -(&self.re * &inv),
        }
    }
}

/// Exponent-vector key of a single monomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub(crate) struct Monomial {
    pub freq: Vec<i64>,
    pub zexp: Vec<u32>,
    pub texp: u32,
    pub sexp: u32,
}

impl Monomial {
    pub fn trivial(m: &ModelManifold) -> Self {
        Monomial {
            freq: vec![0; m.torus_dim()],
            zexp: vec![0; m.affine_dim()],
            texp: 0,
            sexp: 0,
        }
    }

    pub fn neg_freq(&self) -> Self {
        let mut out = self.clone();
        for f in &mut out.freq {
            *f = -*f;
        }
        out
    }

    pub fn param_exp(&self, p: Param) -> u32 {
        match p {
            Param::T => self.texp,
            Param::S => self.sexp,
        }
    }

    pub fn set_param_exp(&mut self, p: Param, e: u32) {
        match p {
            Param::T => self.texp = e,
            Param::S => self.sexp = e,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Monomial {
            freq: self
                .freq
                .iter()
                .zip(&o.freq)
                .map(|(a, b)| a + b)
                .collect(),
            zexp: self
                .zexp
                .iter()
                .zip(&o.zexp)
                .map(|(a, b)| a + b)
                .collect(),
            texp: self.texp + o.texp,
            sexp: self.sexp + o.sexp,
        }
    }
}

/// An exact function on a [`ModelManifold`].
#[derive(Clone, PartialEq, Debug)]
pub struct ScalarFn {
    manifold: ModelManifold,
    terms: BTreeMap<Monomial, GaussRat>,
}

impl ScalarFn {
    pub fn manifold(&self) -> &ModelManifold {
        &self.manifold
    }

    pub fn zero(m: &ModelManifold) -> Self {
        ScalarFn {
            manifold: m.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: &ModelManifold) -> Self {
        Self::constant(m, Rational::one())
    }

    pub fn constant(m: &ModelManifold, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::trivial(m), GaussRat::real(c));
        }
        ScalarFn {
            manifold: m.clone(),
            terms,
        }
    }

    pub fn int(m: &ModelManifold, n: i64) -> Self {
        Self::constant(m, rat_int(n))
    }

    /// The affine coordinate `z{j+1}`.
    pub fn z(m: &ModelManifold, j: usize) -> Self {
        assert!(j < m.affine_dim(), "z index {j} out of range");
        let mut key = Monomial::trivial(m);
        key.zexp[j] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(key, GaussRat::real(Rational::one()));
        ScalarFn {
            manifold: m.clone(),
            terms,
        }
    }

    /// The parameter `t` or `s`; the manifold must declare it.
    pub fn param(m: &ModelManifold, p: Param) -> Self {
        assert!(m.has_param(p), "parameter {} not declared", p.name());
        let mut key = Monomial::trivial(m);
        key.set_param_exp(p, 1);
        let mut terms = BTreeMap::new();
        terms.insert(key, GaussRat::real(Rational::one()));
        ScalarFn {
            manifold: m.clone(),
            terms,
        }
    }

    /// `sin(<freq, theta>)`.
    pub fn sin(m: &ModelManifold, freq: &[i64]) -> Self {
        assert_eq!(freq.len(), m.torus_dim(), "frequency length mismatch");
        if freq.iter().all(|&f| f == 0) {
            return Self::zero(m);
        }
        let mut pos = Monomial::trivial(m);
        pos.freq = freq.to_vec();
        let neg = pos.neg_freq();
        let mut terms = BTreeMap::new();
        // sin x = (e^{ix} - e^{-ix}) / (2i)
        terms.insert(pos, GaussRat::new(Rational::zero(), rat(-1, 2)));
        terms.insert(neg, GaussRat::new(Rational::zero(), rat(1, 2)));
        ScalarFn {
            manifold: m.clone(),
            terms,
        }
    }

    /// `cos(<freq, theta>)`.
    pub fn cos(m: &ModelManifold, freq: &[i64]) -> Self {
        assert_eq!(freq.len(), m.torus_dim(), "frequency length mismatch");
        if freq.iter().all(|&f| f == 0) {
            return Self::one(m);
        }
        let mut pos = Monomial::trivial(m);
        pos.freq = freq.to_vec();
        let neg = pos.neg_freq();
        let mut terms = BTreeMap::new();
        terms.insert(pos, GaussRat::real(rat(1, 2)));
        terms.insert(neg, GaussRat::real(rat(1, 2)));
        ScalarFn {
            manifold: m.clone(),
            terms,
        }
    }

    pub(crate) fn from_terms(m: &ModelManifold, terms: BTreeMap<Monomial, GaussRat>) -> Self {
        let mut f = ScalarFn {
            manifold: m.clone(),
            terms,
        };
        f.prune();
        f.debug_check_reality();
        f
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    fn debug_check_reality(&self) {
        #[cfg(debug_assertions)]
        for (mono, c) in &self.terms {
            let other = self
                .terms
                .get(&mono.neg_freq())
                .cloned()
                .unwrap_or_else(GaussRat::zero);
            assert_eq!(
                c.conj(),
                other,
                "reality constraint violated at {:?}",
                mono
            );
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// The constant value, if this function is constant (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (mono, c) = self.terms.iter().next().unwrap();
            if *mono == Monomial::trivial(&self.manifold) {
                return Some(c.re.clone());
            }
        }
        None
    }

    pub fn uses_param(&self, p: Param) -> bool {
        self.terms.keys().any(|mono| mono.param_exp(p) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.manifold);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v.scale(c)))
            .collect();
        ScalarFn {
            manifold: self.manifold.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.manifold);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative along a coordinate or parameter.
    ///
    /// Derivatives with respect to an undeclared parameter are zero.
    pub fn partial(&self, c: Coordinate) -> Self {
        let mut out: BTreeMap<Monomial, GaussRat> = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            match c {
                Coordinate::Theta(i) => {
                    assert!(i < self.manifold.torus_dim(), "theta index out of range");
                    let m = mono.freq[i];
                    if m != 0 {
                        out.insert(mono.clone(), coeff.mul_i_int(m));
                    }
                }
                Coordinate::Z(j) => {
                    assert!(j < self.manifold.affine_dim(), "z index out of range");
                    let e = mono.zexp[j];
                    if e > 0 {
                        let mut k = mono.clone();
                        k.zexp[j] = e - 1;
                        merge(&mut out, k, coeff.scale(&rat_int(e as i64)));
                    }
                }
                Coordinate::Param(p) => {
                    let e = mono.param_exp(p);
                    if e > 0 {
                        let mut k = mono.clone();
                        k.set_param_exp(p, e - 1);
                        merge(&mut out, k, coeff.scale(&rat_int(e as i64)));
                    }
                }
            }
        }
        Self::from_terms(&self.manifold, out)
    }

    /// Exact definite integral of the parameter `p` over `[0, 1]`; the result
    /// is free of `p`.
    pub fn integrate_param_unit(&self, p: Param) -> Self {
        let mut out: BTreeMap<Monomial, GaussRat> = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let e = mono.param_exp(p);
            let mut k = mono.clone();
            k.set_param_exp(p, 0);
            merge(&mut out, k, coeff.scale(&rat(1, e as i64 + 1)));
        }
        Self::from_terms(&self.manifold, out)
    }

    /// Substitute a rational value for the parameter `p`.
    pub fn subst_param(&self, p: Param, v: &Rational) -> Self {
        let mut out: BTreeMap<Monomial, GaussRat> = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let e = mono.param_exp(p);
            let mut k = mono.clone();
            k.set_param_exp(p, 0);
            let factor = rational_pow(v, e);
            merge(&mut out, k, coeff.scale(&factor));
        }
        Self::from_terms(&self.manifold, out)
    }

    /// Exact evaluation at a quarter-period point.
    pub fn eval(&self, pt: &Point) -> Result<Rational, EvalError> {
        if pt.thetas().len() != self.manifold.torus_dim()
            || pt.zs().len() != self.manifold.affine_dim()
        {
            return Err(EvalError::PointMismatch(format!(
                "point has {} angles / {} affine values, manifold needs {} / {}",
                pt.thetas().len(),
                pt.zs().len(),
                self.manifold.torus_dim(),
                self.manifold.affine_dim()
            )));
        }
        let mut acc = GaussRat::zero();
        for (mono, coeff) in &self.terms {
            let mut quarters: i64 = 0;
            for (i, m) in mono.freq.iter().enumerate() {
                quarters += m * pt.theta(i).quarters() as i64;
            }
            let mut value = coeff.mul_i_pow(quarters.rem_euclid(4) as u8);
            for (j, e) in mono.zexp.iter().enumerate() {
                if *e > 0 {
                    value = value.scale(&rational_pow(pt.z(j), *e));
                }
            }
            for p in [Param::T, Param::S] {
                let e = mono.param_exp(p);
                if e > 0 {
                    let v = pt.param(p).ok_or(EvalError::UnsetParam(p))?;
                    value = value.scale(&rational_pow(v, e));
                }
            }
            acc = acc.add(&value);
        }
        assert!(
            acc.im.is_zero(),
            "imaginary residue in evaluation of a real function"
        );
        Ok(acc.re)
    }

    /// The exact circle average along `theta{i+1}`: keeps only the terms with
    /// zero frequency in that direction.
    pub fn theta_average(&self, i: usize) -> Self {
        assert!(i < self.manifold.torus_dim(), "theta index out of range");
        let terms = self
            .terms
            .iter()
            .filter(|(mono, _)| mono.freq[i] == 0)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        ScalarFn {
            manifold: self.manifold.clone(),
            terms,
        }
    }

    /// Reinterpret on a manifold with more declared parameters.
    pub fn promote(&self, target: &ModelManifold) -> Self {
        assert!(
            target.extends(&self.manifold),
            "target manifold does not extend the source"
        );
        ScalarFn {
            manifold: target.clone(),
            terms: self.terms.clone(),
        }
    }

    /// Divide each term's coefficient by `i * <freq, u>`.
    ///
    /// Every stored frequency must pair nontrivially with `u`; used by the
    /// Fourier-sector inversion of the exactness decision.
    pub(crate) fn div_i_freq_dot(&self, u: &[i64]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(mono, c)| {
                let dot: i64 = mono.freq.iter().zip(u).map(|(a, b)| a * b).sum();
                (mono.clone(), c.div_i_int(dot))
            })
            .collect();
        Self::from_terms(&self.manifold, terms)
    }

    /// Split off the terms whose frequency lies in `{m, -m}` (`m` nonzero) or,
    /// for `m = 0`, the frequency-free terms.
    pub(crate) fn frequency_class(&self, m: &[i64]) -> Self {
        let neg: Vec<i64> = m.iter().map(|f| -f).collect();
        let terms = self
            .terms
            .iter()
            .filter(|(mono, _)| mono.freq == m || mono.freq == neg)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        ScalarFn {
            manifold: self.manifold.clone(),
            terms,
        }
    }

    /// All distinct frequency classes present, each represented by its
    /// sign-canonical member (first nonzero entry positive).
    pub(crate) fn frequency_classes(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = Vec::new();
        for mono in self.terms.keys() {
            let c = canonical_freq(&mono.freq);
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Substitute `z{j+1} = 0`: drops every term with a positive exponent.
    pub(crate) fn subst_z_zero(&self, j: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(mono, _)| mono.zexp[j] == 0)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        ScalarFn {
            manifold: self.manifold.clone(),
            terms,
        }
    }

    /// Antiderivative in `z{j+1}` vanishing at `z{j+1} = 0`.
    pub(crate) fn integrate_z_from_zero(&self, j: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(mono, c)| {
                let mut k = mono.clone();
                k.zexp[j] += 1;
                (k, c.scale(&rat(1, mono.zexp[j] as i64 + 1)))
            })
            .collect();
        Self::from_terms(&self.manifold, terms)
    }
}

pub(crate) fn canonical_freq(m: &[i64]) -> Vec<i64> {
    match m.iter().find(|&&f| f != 0) {
        Some(&f) if f < 0 => m.iter().map(|x| -x).collect(),
        _ => m.to_vec(),
    }
}

fn rational_pow(v: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc = &acc * v;
    }
    acc
}

fn merge(map: &mut BTreeMap<Monomial, GaussRat>, key: Monomial, val: GaussRat) {
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(val);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().add(&val);
            if sum.is_zero() {
                e.remove();
            } else {
                e.insert(sum);
            }
        }
    }
}

impl Add for &ScalarFn {
    type Output = ScalarFn;

    fn add(self, rhs: &ScalarFn) -> ScalarFn {
        assert_eq!(self.manifold, rhs.manifold, "manifold mismatch in add");
        let mut terms = self.terms.clone();
        for (k, v) in &rhs.terms {
            merge(&mut terms, k.clone(), v.clone());
        }
        ScalarFn {
            manifold: self.manifold.clone(),
            terms,
        }
    }
}

impl Sub for &ScalarFn {
    type Output = ScalarFn;

    fn sub(self, rhs: &ScalarFn) -> ScalarFn {
        self + &(-rhs)
    }
}

impl Neg for &ScalarFn {
    type Output = ScalarFn;

    fn neg(self) -> ScalarFn {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v.neg()))
            .collect();
        ScalarFn {
            manifold: self.manifold.clone(),
            terms,
        }
    }
}

impl Mul for &ScalarFn {
    type Output = ScalarFn;

    fn mul(self, rhs: &ScalarFn) -> ScalarFn {
        assert_eq!(self.manifold, rhs.manifold, "manifold mismatch in mul");
        let mut terms: BTreeMap<Monomial, GaussRat> = BTreeMap::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                merge(&mut terms, ka.mul(kb), va.mul(vb));
            }
        }
        ScalarFn::from_terms(&self.manifold, terms)
    }
}

// ---- Display (sin/cos surface form) ----

/// A printable sum term: rational coefficient times symbolic factors.
pub(crate) struct PrintTerm {
    pub coef: Rational,
    pub factors: Vec<String>,
}

fn freq_combo(freq: &[i64]) -> String {
    let mut out = String::new();
    for (i, &m) in freq.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let mag = m.abs();
        if out.is_empty() {
            if m < 0 {
                out.push('-');
            }
        } else if m < 0 {
            out.push('-');
        } else {
            out.push('+');
        }
        if mag != 1 {
            out.push_str(&format!("{mag}*"));
        }
        out.push_str(&format!("theta{}", i + 1));
    }
    out
}

fn push_power(factors: &mut Vec<String>, name: &str, e: u32) {
    if e == 1 {
        factors.push(name.to_string());
    } else if e > 1 {
        factors.push(format!("{name}^{e}"));
    }
}

impl ScalarFn {
    fn print_terms(&self) -> Vec<PrintTerm> {
        let mut out = Vec::new();
        for (mono, c) in &self.terms {
            let canon = canonical_freq(&mono.freq);
            let is_zero_freq = mono.freq.iter().all(|&f| f == 0);
            if !is_zero_freq && mono.freq != canon {
                continue; // handled by the conjugate partner
            }
            let mut base: Vec<String> = Vec::new();
            for (j, &e) in mono.zexp.iter().enumerate() {
                push_power(&mut base, &format!("z{}", j + 1), e);
            }
            push_power(&mut base, "t", mono.texp);
            push_power(&mut base, "s", mono.sexp);

            if is_zero_freq {
                out.push(PrintTerm {
                    coef: c.re.clone(),
                    factors: base,
                });
            } else {
                let combo = freq_combo(&canon);
                let cos_coef = &c.re * &rat_int(2);
                let sin_coef = -(&c.im * &rat_int(2));
                if !cos_coef.is_zero() {
                    let mut factors = vec![format!("cos({combo})")];
                    factors.extend(base.iter().cloned());
                    out.push(PrintTerm {
                        coef: cos_coef,
                        factors,
                    });
                }
                if !sin_coef.is_zero() {
                    let mut factors = vec![format!("sin({combo})")];
                    factors.extend(base.iter().cloned());
                    out.push(PrintTerm {
                        coef: sin_coef,
                        factors,
                    });
                }
            }
        }
        out
    }
}

pub(crate) fn render_terms(terms: &[PrintTerm]) -> String {
    let mut out = String::new();
    for (idx, term) in terms.iter().enumerate() {
        let negative = term.coef.is_negative();
        let mag = term.coef.abs();
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let coef_is_one = mag.is_one();
        if term.factors.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !coef_is_one {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&term.factors.join("*"));
        }
    }
    out
}

impl ScalarFn {
    /// The printable terms of this function (coefficient/factor pairs).
    pub(crate) fn printable(&self) -> Vec<PrintTerm> {
        self.print_terms()
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", render_terms(&self.printable()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus_line() -> ModelManifold {
        ModelManifold::new(2, 1)
    }

    #[test]
    fn sin_times_cos_is_half_sin_double() {
        // Complex-exponential expansion by hand:
        // sin t cos t = (e^{it}-e^{-it})/(2i) * (e^{it}+e^{-it})/2
        //            = (e^{2it}-e^{-2it})/(4i),
        // so the product carries coefficient -i/4 at frequency +2 and +i/4 at -2.
        let m = torus_line();
        let product = &ScalarFn::sin(&m, &[1, 0]) * &ScalarFn::cos(&m, &[1, 0]);
        let expected = ScalarFn::sin(&m, &[2, 0]).scale(&rat(1, 2));
        assert_eq!(product, expected);
        let coeffs: Vec<(Vec<i64>, GaussRat)> = product
            .terms()
            .map(|(k, v)| (k.freq.clone(), v.clone()))
            .collect();
        assert_eq!(
            coeffs,
            vec![
                (vec![-2, 0], GaussRat::new(rat_int(0), rat(1, 4))),
                (vec![2, 0], GaussRat::new(rat_int(0), rat(-1, 4))),
            ]
        );
    }

    #[test]
    fn ring_identities() {
        let m = torus_line();
        let f = &ScalarFn::z(&m, 0) + &ScalarFn::cos(&m, &[1, -2]);
        assert!((&f * &ScalarFn::zero(&m)).is_zero());
        let z = ScalarFn::z(&m, 0);
        let sum = &(&z + &ScalarFn::one(&m)) + &(-&z);
        assert_eq!(sum, ScalarFn::one(&m));
    }

    #[test]
    fn partial_derivatives() {
        let m = torus_line();
        let dsin = ScalarFn::sin(&m, &[1, 0]).partial(Coordinate::Theta(0));
        assert_eq!(dsin, ScalarFn::cos(&m, &[1, 0]));

        let f = &ScalarFn::z(&m, 0).pow(2) * &ScalarFn::cos(&m, &[0, 1]);
        let df = f.partial(Coordinate::Z(0));
        let expected = &ScalarFn::z(&m, 0).scale(&rat_int(2)) * &ScalarFn::cos(&m, &[0, 1]);
        assert_eq!(df, expected);

        assert!(f.partial(Coordinate::Param(Param::T)).is_zero());
    }

    #[test]
    fn mixed_partials_commute() {
        let m = torus_line();
        let f = &(&ScalarFn::z(&m, 0).pow(3) * &ScalarFn::sin(&m, &[2, 1]))
            + &ScalarFn::cos(&m, &[0, 3]);
        let a = f.partial(Coordinate::Theta(0)).partial(Coordinate::Z(0));
        let b = f.partial(Coordinate::Z(0)).partial(Coordinate::Theta(0));
        assert_eq!(a, b);
    }

    #[test]
    fn parameter_integration() {
        let m = ModelManifold::with_params(1, 1, &[Param::S]);
        let s = ScalarFn::param(&m, Param::S);
        let three_s_sq = s.pow(2).scale(&rat_int(3));
        assert_eq!(three_s_sq.integrate_param_unit(Param::S), ScalarFn::one(&m));

        let f = &s.scale(&rat_int(2)) * &ScalarFn::z(&m, 0);
        assert_eq!(f.integrate_param_unit(Param::S), ScalarFn::z(&m, 0));

        let g = &s * &ScalarFn::sin(&m, &[1]);
        assert_eq!(
            g.integrate_param_unit(Param::S),
            ScalarFn::sin(&m, &[1]).scale(&rat(1, 2))
        );
    }

    #[test]
    fn substitute_parameter() {
        let m = ModelManifold::with_params(0, 1, &[Param::T]);
        let f = &(&ScalarFn::param(&m, Param::T).pow(2) * &ScalarFn::z(&m, 0))
            + &ScalarFn::param(&m, Param::T);
        let at_zero = f.subst_param(Param::T, &rat_int(0));
        assert!(at_zero.is_zero());
        let at_one = f.subst_param(Param::T, &rat_int(1));
        assert_eq!(at_one, &ScalarFn::z(&m, 0) + &ScalarFn::one(&m));
    }

    #[test]
    fn quarter_period_evaluation() {
        use crate::manifold::QuarterTurn;
        let m = torus_line();
        let p0 = Point::new(
            &m,
            vec![QuarterTurn::new(0), QuarterTurn::new(0)],
            vec![rat_int(0)],
        )
        .unwrap();
        assert_eq!(ScalarFn::cos(&m, &[1, 0]).eval(&p0).unwrap(), rat_int(1));

        let ppi = Point::new(
            &m,
            vec![QuarterTurn::new(2), QuarterTurn::new(0)],
            vec![rat_int(0)],
        )
        .unwrap();
        assert_eq!(ScalarFn::sin(&m, &[1, 0]).eval(&ppi).unwrap(), rat_int(0));

        let pz = Point::new(
            &m,
            vec![QuarterTurn::new(0), QuarterTurn::new(0)],
            vec![rat(3, 2)],
        )
        .unwrap();
        assert_eq!(ScalarFn::z(&m, 0).pow(2).eval(&pz).unwrap(), rat(9, 4));
    }

    #[test]
    fn eval_is_multiplicative() {
        use crate::manifold::QuarterTurn;
        let m = torus_line();
        let f = &ScalarFn::sin(&m, &[1, 1]) + &ScalarFn::z(&m, 0);
        let g = &ScalarFn::cos(&m, &[2, -1]) + &ScalarFn::one(&m);
        let p = Point::new(
            &m,
            vec![QuarterTurn::new(1), QuarterTurn::new(3)],
            vec![rat(5, 3)],
        )
        .unwrap();
        let lhs = (&f * &g).eval(&p).unwrap();
        let rhs = f.eval(&p).unwrap() * g.eval(&p).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn unset_parameter_is_an_error() {
        let m = ModelManifold::with_params(0, 0, &[Param::T]);
        let f = ScalarFn::param(&m, Param::T);
        let p = Point::new(&m, vec![], vec![]).unwrap();
        assert_eq!(f.eval(&p), Err(EvalError::UnsetParam(Param::T)));
    }

    #[test]
    fn circle_average() {
        let m = torus_line();
        let f = &ScalarFn::sin(&m, &[1, 0]) + &ScalarFn::z(&m, 0);
        assert_eq!(f.theta_average(0), ScalarFn::z(&m, 0));

        let g = &ScalarFn::cos(&m, &[2, 0]) * &ScalarFn::cos(&m, &[0, 1]);
        assert!(g.theta_average(0).is_zero());

        let c = ScalarFn::constant(&m, rat(7, 5));
        assert_eq!(c.theta_average(0), c);
    }

    #[test]
    fn average_of_theta_derivative_vanishes() {
        let m = torus_line();
        let f = &(&ScalarFn::sin(&m, &[3, -1]) * &ScalarFn::z(&m, 0))
            + &ScalarFn::cos(&m, &[1, 0]);
        for i in 0..2 {
            assert!(f.partial(Coordinate::Theta(i)).theta_average(i).is_zero());
        }
    }

    #[test]
    fn display_surface_form() {
        let m = torus_line();
        let f = &(&ScalarFn::sin(&m, &[1, 2]) * &ScalarFn::z(&m, 0)) + &ScalarFn::cos(&m, &[1, 0]).scale(&rat(-3, 2));
        let text = format!("{f}");
        assert_eq!(text, "-3/2*cos(theta1) + sin(theta1+2*theta2)*z1");
        assert_eq!(format!("{}", ScalarFn::zero(&m)), "0");
        assert_eq!(format!("{}", ScalarFn::int(&m, -2)), "-2");
    }
}
