//! The model manifold `T^a x R^b`, its coordinates, and exact evaluation points.
//!
//! Torus coordinates are `theta1..theta_a`, affine coordinates `z1..z_b`.
//! A manifold may additionally declare the formal parameters `t` and `s`;
//! functions depend on them polynomially only.

use std::fmt;
use std::str::FromStr;

use crate::scalar::Rational;

/// A formal polynomial parameter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Param {
    T,
    S,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::T => "t",
            Param::S => "s",
        }
    }
}

/// A coordinate or parameter a derivation can act on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Coordinate {
    /// Torus coordinate `theta{i+1}` (0-based index).
    Theta(usize),
    /// Affine coordinate `z{j+1}` (0-based index).
    Z(usize),
    /// Formal parameter `t` or `s`.
    Param(Param),
}

/// The product manifold `T^a x R^b`, optionally carrying the parameters `t`, `s`.
///
/// Equality is structural; all ring and exterior operations require both
/// operands to live on the same manifold.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelManifold {
    torus_dim: usize,
    affine_dim: usize,
    params: Vec<Param>,
}

impl ModelManifold {
    pub fn new(torus_dim: usize, affine_dim: usize) -> Self {
        ModelManifold {
            torus_dim,
            affine_dim,
            params: Vec::new(),
        }
    }

    pub fn with_params(torus_dim: usize, affine_dim: usize, params: &[Param]) -> Self {
        let mut params = params.to_vec();
        params.sort();
        params.dedup();
        ModelManifold {
            torus_dim,
            affine_dim,
            params,
        }
    }

    /// The same manifold with one more declared parameter.
    pub fn extended_with(&self, p: Param) -> Self {
        let mut params = self.params.clone();
        params.push(p);
        params.sort();
        params.dedup();
        ModelManifold {
            torus_dim: self.torus_dim,
            affine_dim: self.affine_dim,
            params,
        }
    }

    pub fn torus_dim(&self) -> usize {
        self.torus_dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    /// Dimension of the underlying manifold (parameters excluded).
    pub fn dim(&self) -> usize {
        self.torus_dim + self.affine_dim
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn has_param(&self, p: Param) -> bool {
        self.params.contains(&p)
    }

    /// True when `other` has the same coordinates and at most our parameters.
    pub fn extends(&self, other: &ModelManifold) -> bool {
        self.torus_dim == other.torus_dim
            && self.affine_dim == other.affine_dim
            && other.params.iter().all(|p| self.has_param(*p))
    }

    /// Coordinate for a flat frame/coframe index in `0..dim()`:
    /// `0..a` are the theta directions, `a..a+b` the z directions.
    pub fn coordinate(&self, flat: usize) -> Coordinate {
        assert!(flat < self.dim(), "coordinate index {flat} out of range");
        if flat < self.torus_dim {
            Coordinate::Theta(flat)
        } else {
            Coordinate::Z(flat - self.torus_dim)
        }
    }

    pub fn coord_name(&self, flat: usize) -> String {
        match self.coordinate(flat) {
            Coordinate::Theta(i) => format!("theta{}", i + 1),
            Coordinate::Z(j) => format!("z{}", j + 1),
            Coordinate::Param(p) => p.name().to_string(),
        }
    }

    pub fn coframe_name(&self, flat: usize) -> String {
        format!("d{}", self.coord_name(flat))
    }

    pub fn frame_name(&self, flat: usize) -> String {
        format!("par_{}", self.coord_name(flat))
    }
}

/// An angle restricted to the quarter-period lattice `{0, pi/2, pi, 3pi/2}`.
///
/// Every trigonometric monomial evaluates to an exact Gaussian integer at
/// such angles, which keeps point evaluation inside the rationals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuarterTurn(u8);

impl QuarterTurn {
    /// `q` quarter turns, i.e. the angle `q * pi/2` (taken mod `2*pi`).
    pub fn new(q: i64) -> Self {
        QuarterTurn(q.rem_euclid(4) as u8)
    }

    pub fn quarters(self) -> u8 {
        self.0
    }
}

impl fmt::Display for QuarterTurn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.0 {
            0 => "0",
            1 => "pi/2",
            2 => "pi",
            _ => "3pi/2",
        };
        write!(f, "{s}")
    }
}

impl FromStr for QuarterTurn {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" => Ok(QuarterTurn(0)),
            "pi/2" => Ok(QuarterTurn(1)),
            "pi" => Ok(QuarterTurn(2)),
            "3pi/2" => Ok(QuarterTurn(3)),
            other => Err(format!(
                "invalid angle `{other}`: expected one of 0, pi/2, pi, 3pi/2"
            )),
        }
    }
}

/// An exact evaluation point: quarter-period angles, rational affine
/// coordinates, and optional rational parameter values.
#[derive(Clone, PartialEq, Debug)]
pub struct Point {
    thetas: Vec<QuarterTurn>,
    zs: Vec<Rational>,
    t: Option<Rational>,
    s: Option<Rational>,
}

impl Point {
    pub fn new(
        manifold: &ModelManifold,
        thetas: Vec<QuarterTurn>,
        zs: Vec<Rational>,
    ) -> Result<Self, String> {
        if thetas.len() != manifold.torus_dim() {
            return Err(format!(
                "expected {} theta values, got {}",
                manifold.torus_dim(),
                thetas.len()
            ));
        }
        if zs.len() != manifold.affine_dim() {
            return Err(format!(
                "expected {} z values, got {}",
                manifold.affine_dim(),
                zs.len()
            ));
        }
        Ok(Point {
            thetas,
            zs,
            t: None,
            s: None,
        })
    }

    /// The origin, with every declared parameter set to zero.
    pub fn origin(manifold: &ModelManifold) -> Self {
        use num_traits::Zero;
        let mut p = Point {
            thetas: vec![QuarterTurn(0); manifold.torus_dim()],
            zs: vec![Rational::zero(); manifold.affine_dim()],
            t: None,
            s: None,
        };
        for q in manifold.params() {
            p = p.with_param(*q, Rational::zero());
        }
        p
    }

    pub fn with_param(mut self, p: Param, value: Rational) -> Self {
        match p {
            Param::T => self.t = Some(value),
            Param::S => self.s = Some(value),
        }
        self
    }

    pub fn theta(&self, i: usize) -> QuarterTurn {
        self.thetas[i]
    }

    pub fn thetas(&self) -> &[QuarterTurn] {
        &self.thetas
    }

    pub fn z(&self, j: usize) -> &Rational {
        &self.zs[j]
    }

    pub fn zs(&self) -> &[Rational] {
        &self.zs
    }

    pub fn param(&self, p: Param) -> Option<&Rational> {
        match p {
            Param::T => self.t.as_ref(),
            Param::S => self.s.as_ref(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (i, q) in self.thetas.iter().enumerate() {
            parts.push(format!("theta{}={}", i + 1, q));
        }
        for (j, z) in self.zs.iter().enumerate() {
            parts.push(format!("z{}={}", j + 1, z));
        }
        if let Some(t) = &self.t {
            parts.push(format!("t={t}"));
        }
        if let Some(s) = &self.s {
            parts.push(format!("s={s}"));
        }
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_names() {
        let m = ModelManifold::new(2, 1);
        assert_eq!(m.coord_name(0), "theta1");
        assert_eq!(m.coord_name(1), "theta2");
        assert_eq!(m.coord_name(2), "z1");
        assert_eq!(m.coframe_name(2), "dz1");
        assert_eq!(m.frame_name(0), "par_theta1");
    }

    #[test]
    fn params_sorted_and_deduped() {
        let m = ModelManifold::with_params(1, 0, &[Param::S, Param::T, Param::S]);
        assert_eq!(m.params(), &[Param::T, Param::S]);
        assert!(m.has_param(Param::S));
        let m2 = ModelManifold::new(1, 0).extended_with(Param::S);
        assert!(m2.has_param(Param::S));
        assert!(!m2.has_param(Param::T));
        assert!(m.extends(&m2));
        assert!(!m2.extends(&m));
    }

    #[test]
    fn quarter_turn_wraps() {
        assert_eq!(QuarterTurn::new(5), QuarterTurn::new(1));
        assert_eq!(QuarterTurn::new(-1), QuarterTurn::new(3));
        assert_eq!("3pi/2".parse::<QuarterTurn>().unwrap(), QuarterTurn::new(3));
        assert!("pi/3".parse::<QuarterTurn>().is_err());
    }

    #[test]
    fn point_dimension_checked() {
        let m = ModelManifold::new(1, 2);
        assert!(Point::new(&m, vec![QuarterTurn::new(0)], vec![]).is_err());
        let p = Point::origin(&m);
        assert_eq!(p.thetas().len(), 1);
        assert_eq!(p.zs().len(), 2);
    }
}
