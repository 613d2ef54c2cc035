//! Scenario files: a TOML schema whose leaves are expression strings, and
//! the assembly of the core objects they describe.
//!
//! See `docs/scenario-format.md` for the full schema. Field names mirror the
//! usual symbols: `omega`, `mu`, `f1`, `f2`, `eta1`, `alpha`, `F`, `X_s`,
//! with `_prime` suffixes for second copies and `_s` suffixes for family
//! data polynomial in `s`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use plectic::cartan::CartanFamily;
use plectic::equivalence::MomentFamily;
use plectic::equivariant::{GMap, LieAction, TotalCochain};
use plectic::form::{DifferentialForm, VectorField};
use plectic::lie::{CeFormCochain, LieAlgebra};
use plectic::manifold::{ModelManifold, Param, Point, QuarterTurn};
use plectic::moment::MomentMapCandidate;
use plectic::scalar::Rational;

use crate::expr::{parse_expression, ParseError, Value};

#[derive(Error, Debug)]
pub enum ScenarioError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("in `{field}`: {source}")]
    Expr { field: String, source: ParseError },
    #[error("in `{field}`: expected a {expected}, got a {got}")]
    WrongKind {
        field: String,
        expected: &'static str,
        got: &'static str,
    },
    #[error("in `{field}`: expected a form of degree {expected}, got degree {got}")]
    WrongDegree {
        field: String,
        expected: usize,
        got: usize,
    },
    #[error("in `{field}`: bad tuple key `{key}`: {message}")]
    BadTuple {
        field: String,
        key: String,
        message: String,
    },
    #[error("invalid rational `{0}`")]
    BadRational(String),
    #[error("invalid point: {0}")]
    BadPoint(String),
    #[error("invalid Lie algebra: {0}")]
    Algebra(String),
    #[error("invalid action: {0}")]
    Action(String),
    #[error("the scenario has no `{0}` data")]
    Missing(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub metadata: MetadataSpec,
    pub manifold: ManifoldSpec,
    pub lie_algebra: AlgebraSpec,
    pub action: ActionSpec,
    #[serde(default)]
    pub point: Option<PointSpec>,
    #[serde(default)]
    pub forms: BTreeMap<String, String>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    #[serde(default)]
    pub family: BTreeMap<String, MapSpec>,
    #[serde(default)]
    pub fixomega: Option<FixomegaSpec>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct MetadataSpec {
    pub n: usize,
    #[serde(default)]
    pub description: String,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub torus_dim: usize,
    pub affine_dim: usize,
    #[serde(default)]
    pub parameters: Vec<String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, Vec<RationalSpec>)>,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
pub enum RationalSpec {
    Int(i64),
    Text(String),
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub generators: Vec<String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    #[serde(default)]
    pub theta: Vec<String>,
    #[serde(default)]
    pub z: Vec<RationalSpec>,
    #[serde(default)]
    pub t: Option<RationalSpec>,
    #[serde(default)]
    pub s: Option<RationalSpec>,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
pub enum MapSpec {
    /// A single expression (families use this for `X_s`, `omega_s`).
    Expr(String),
    /// One expression per basis element.
    Basis(Vec<String>),
    /// Expressions on increasing 1-based tuples, keys like `"1,3"`.
    Tuples(BTreeMap<String, String>),
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct FixomegaSpec {
    pub x: Vec<RationalSpec>,
}

fn parse_rational(spec: &RationalSpec) -> Result<Rational, ScenarioError> {
    match spec {
        RationalSpec::Int(n) => Ok(plectic::scalar::rat_int(*n)),
        RationalSpec::Text(text) => {
            let t = text.trim();
            let (num, den) = match t.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (t, "1"),
            };
            let n: i64 = num
                .parse()
                .map_err(|_| ScenarioError::BadRational(text.clone()))?;
            let d: i64 = den
                .parse()
                .map_err(|_| ScenarioError::BadRational(text.clone()))?;
            if d == 0 {
                return Err(ScenarioError::BadRational(text.clone()));
            }
            Ok(plectic::scalar::rat(n, d))
        }
    }
}

/// A fully parsed scenario.
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub n: usize,
    pub manifold: ModelManifold,
    pub algebra: LieAlgebra,
    pub action: LieAction,
    pub forms: BTreeMap<String, DifferentialForm>,
    pub maps: BTreeMap<String, MapValue>,
    pub family: BTreeMap<String, MapValue>,
    pub point: Option<Point>,
    pub fixomega_x: Option<Vec<Rational>>,
}

/// A parsed `[maps]` entry.
pub enum MapValue {
    Expr(Value),
    Basis(Vec<Value>),
    Tuples(BTreeMap<Vec<usize>, Value>),
}

fn parse_tuple_key(field: &str, key: &str, dim: usize) -> Result<Vec<usize>, ScenarioError> {
    let mut out = Vec::new();
    for part in key.split(',') {
        let idx: usize = part.trim().parse().map_err(|_| ScenarioError::BadTuple {
            field: field.to_string(),
            key: key.to_string(),
            message: "indices must be integers".into(),
        })?;
        if idx < 1 || idx > dim {
            return Err(ScenarioError::BadTuple {
                field: field.to_string(),
                key: key.to_string(),
                message: format!("index {idx} out of range 1..={dim}"),
            });
        }
        out.push(idx - 1);
    }
    if !out.windows(2).all(|w| w[0] < w[1]) {
        return Err(ScenarioError::BadTuple {
            field: field.to_string(),
            key: key.to_string(),
            message: "indices must be strictly increasing".into(),
        });
    }
    Ok(out)
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".into());
        Self::from_str_named(&text, name)
    }

    pub fn from_str_named(text: &str, name: String) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text)?;

        if file.metadata.n == 0 {
            return Err(ScenarioError::Invalid(
                "metadata.n must be at least 1".into(),
            ));
        }

        let mut params = Vec::new();
        for p in &file.manifold.parameters {
            match p.as_str() {
                "t" => params.push(Param::T),
                "s" => params.push(Param::S),
                other => {
                    return Err(ScenarioError::Invalid(format!(
                        "unknown parameter `{other}` (only `t` and `s` exist)"
                    )))
                }
            }
        }
        let manifold = ModelManifold::with_params(
            file.manifold.torus_dim,
            file.manifold.affine_dim,
            &params,
        );

        let mut brackets = Vec::new();
        for (i, j, coeffs) in &file.lie_algebra.brackets {
            if *i < 1 || *j < 1 {
                return Err(ScenarioError::Algebra(
                    "bracket indices are 1-based".into(),
                ));
            }
            let cs: Result<Vec<Rational>, _> = coeffs.iter().map(parse_rational).collect();
            brackets.push((i - 1, j - 1, cs?));
        }
        let algebra = LieAlgebra::new(file.lie_algebra.dim, &brackets)
            .map_err(|e| ScenarioError::Algebra(e.to_string()))?;

        if file.action.generators.len() != algebra.dim() {
            return Err(ScenarioError::Action(format!(
                "expected {} generators, got {}",
                algebra.dim(),
                file.action.generators.len()
            )));
        }
        if manifold.dim() == 0 && !file.action.generators.is_empty() {
            return Err(ScenarioError::Invalid(
                "a manifold with no coordinates cannot carry generators".into(),
            ));
        }
        let mut generators = Vec::new();
        for (i, text) in file.action.generators.iter().enumerate() {
            let field = format!("action.generators[{}]", i + 1);
            let value = parse_expression(text, &manifold)
                .map_err(|source| ScenarioError::Expr {
                    field: field.clone(),
                    source,
                })?;
            let kind = value.kind();
            let v = value
                .into_field(&manifold)
                .ok_or(ScenarioError::WrongKind {
                    field,
                    expected: "vector field",
                    got: kind,
                })?;
            generators.push(v);
        }
        let action = LieAction::new(algebra.clone(), &manifold, generators)
            .map_err(|e| ScenarioError::Action(e.to_string()))?;

        let mut forms = BTreeMap::new();
        for (key, text) in &file.forms {
            let field = format!("forms.{key}");
            let value = parse_expression(text, &manifold)
                .map_err(|source| ScenarioError::Expr {
                    field: field.clone(),
                    source,
                })?;
            let kind = value.kind();
            let form = value
                .into_form(&manifold)
                .ok_or(ScenarioError::WrongKind {
                    field,
                    expected: "form",
                    got: kind,
                })?;
            forms.insert(key.clone(), form);
        }

        let parse_map_spec = |section: &str,
                              key: &str,
                              spec: &MapSpec|
         -> Result<MapValue, ScenarioError> {
            let field = format!("{section}.{key}");
            match spec {
                MapSpec::Expr(text) => {
                    let value = parse_expression(text, &manifold).map_err(|source| {
                        ScenarioError::Expr {
                            field: field.clone(),
                            source,
                        }
                    })?;
                    Ok(MapValue::Expr(value))
                }
                MapSpec::Basis(entries) => {
                    if entries.len() != algebra.dim() {
                        return Err(ScenarioError::Invalid(format!(
                            "`{field}` must list one expression per basis element ({})",
                            algebra.dim()
                        )));
                    }
                    let mut values = Vec::new();
                    for (i, text) in entries.iter().enumerate() {
                        let value = parse_expression(text, &manifold).map_err(|source| {
                            ScenarioError::Expr {
                                field: format!("{field}[{}]", i + 1),
                                source,
                            }
                        })?;
                        values.push(value);
                    }
                    Ok(MapValue::Basis(values))
                }
                MapSpec::Tuples(entries) => {
                    let mut values = BTreeMap::new();
                    for (key2, text) in entries {
                        let tuple = parse_tuple_key(&field, key2, algebra.dim())?;
                        let value = parse_expression(text, &manifold).map_err(|source| {
                            ScenarioError::Expr {
                                field: format!("{field}[{key2}]"),
                                source,
                            }
                        })?;
                        values.insert(tuple, value);
                    }
                    Ok(MapValue::Tuples(values))
                }
            }
        };

        let mut maps = BTreeMap::new();
        for (key, spec) in &file.maps {
            maps.insert(key.clone(), parse_map_spec("maps", key, spec)?);
        }
        let mut family = BTreeMap::new();
        for (key, spec) in &file.family {
            family.insert(key.clone(), parse_map_spec("family", key, spec)?);
        }

        let point = match &file.point {
            None => None,
            Some(spec) => Some(build_point(&manifold, spec)?),
        };

        let fixomega_x = match &file.fixomega {
            None => None,
            Some(spec) => {
                if spec.x.len() != algebra.dim() {
                    return Err(ScenarioError::Invalid(format!(
                        "`fixomega.x` must have {} coordinates",
                        algebra.dim()
                    )));
                }
                let xs: Result<Vec<Rational>, _> = spec.x.iter().map(parse_rational).collect();
                Some(xs?)
            }
        };

        Ok(Scenario {
            name,
            description: file.metadata.description,
            n: file.metadata.n,
            manifold,
            algebra,
            action,
            forms,
            maps,
            family,
            point,
            fixomega_x,
        })
    }

    /// The named form, with degree enforcement; a missing key is an error.
    pub fn form(&self, key: &str, degree: usize) -> Result<DifferentialForm, ScenarioError> {
        let form = self
            .forms
            .get(key)
            .ok_or_else(|| ScenarioError::Missing(format!("forms.{key}")))?;
        if !form.is_zero() && form.degree() != degree {
            return Err(ScenarioError::WrongDegree {
                field: format!("forms.{key}"),
                expected: degree,
                got: form.degree(),
            });
        }
        Ok(if form.is_zero() {
            DifferentialForm::zero(&self.manifold, degree)
        } else {
            form.clone()
        })
    }

    pub fn form_or_zero(&self, key: &str, degree: usize) -> Result<DifferentialForm, ScenarioError> {
        if self.forms.contains_key(key) {
            self.form(key, degree)
        } else {
            Ok(DifferentialForm::zero(&self.manifold, degree))
        }
    }

    fn map_value<'a>(
        source: &'a BTreeMap<String, MapValue>,
        section: &str,
        key: &str,
    ) -> Result<&'a MapValue, ScenarioError> {
        source
            .get(key)
            .ok_or_else(|| ScenarioError::Missing(format!("{section}.{key}")))
    }

    fn value_to_form(
        &self,
        field: String,
        value: &Value,
        degree: usize,
    ) -> Result<DifferentialForm, ScenarioError> {
        let kind = value.kind();
        let form = value
            .clone()
            .into_form(&self.manifold)
            .ok_or(ScenarioError::WrongKind {
                field: field.clone(),
                expected: "form",
                got: kind,
            })?;
        if !form.is_zero() && form.degree() != degree {
            return Err(ScenarioError::WrongDegree {
                field,
                expected: degree,
                got: form.degree(),
            });
        }
        Ok(if form.is_zero() {
            DifferentialForm::zero(&self.manifold, degree)
        } else {
            form
        })
    }

    fn gmap_from(
        &self,
        source: &BTreeMap<String, MapValue>,
        section: &str,
        key: &str,
        degree: usize,
    ) -> Result<GMap, ScenarioError> {
        let value = Self::map_value(source, section, key)?;
        let MapValue::Basis(entries) = value else {
            return Err(ScenarioError::Invalid(format!(
                "`{section}.{key}` must be an array with one expression per basis element"
            )));
        };
        let mut values = Vec::new();
        for (i, v) in entries.iter().enumerate() {
            values.push(self.value_to_form(
                format!("{section}.{key}[{}]", i + 1),
                v,
                degree,
            )?);
        }
        Ok(GMap::new(&self.manifold, degree, values))
    }

    /// A one-argument linear map such as `mu` or `F`, as a [`GMap`].
    pub fn gmap(&self, key: &str, degree: usize) -> Result<GMap, ScenarioError> {
        self.gmap_from(&self.maps, "maps", key, degree)
    }

    fn cochain_from(
        &self,
        source: &BTreeMap<String, MapValue>,
        section: &str,
        key: &str,
        k: usize,
        degree: usize,
    ) -> Result<CeFormCochain, ScenarioError> {
        let dim = self.algebra.dim();
        let value = Self::map_value(source, section, key)?;
        let mut out = CeFormCochain::new(dim, k);
        match value {
            MapValue::Expr(_) => {
                return Err(ScenarioError::Invalid(format!(
                    "`{section}.{key}` must be an array (k = 1) or a tuple table"
                )))
            }
            MapValue::Basis(entries) => {
                if k != 1 {
                    return Err(ScenarioError::Invalid(format!(
                        "`{section}.{key}` is an array but describes a degree-{k} cochain"
                    )));
                }
                if entries.len() != dim {
                    return Err(ScenarioError::Invalid(format!(
                        "`{section}.{key}` must list one expression per basis element ({dim})"
                    )));
                }
                for (i, v) in entries.iter().enumerate() {
                    let form = self.value_to_form(
                        format!("{section}.{key}[{}]", i + 1),
                        v,
                        degree,
                    )?;
                    if !form.is_zero() {
                        out.insert(vec![i], form);
                    }
                }
            }
            MapValue::Tuples(entries) => {
                for (tuple, v) in entries {
                    if tuple.len() != k {
                        return Err(ScenarioError::Invalid(format!(
                            "`{section}.{key}` key of length {} in a degree-{k} cochain",
                            tuple.len()
                        )));
                    }
                    let form = self.value_to_form(
                        format!("{section}.{key}[{tuple:?}]"),
                        v,
                        degree,
                    )?;
                    if !form.is_zero() {
                        out.insert(tuple.clone(), form);
                    }
                }
            }
        }
        Ok(out)
    }

    fn candidate_from(
        &self,
        source: &BTreeMap<String, MapValue>,
        section: &str,
        stem: &str,
        suffix: &str,
    ) -> Result<MomentMapCandidate, ScenarioError> {
        let n = self.n;
        let dim = self.algebra.dim();
        let mut found = false;
        let mut out = MomentMapCandidate::zero(&self.manifold, dim, n);
        for k in 1..=n.min(dim) {
            let key = format!("{stem}{k}{suffix}");
            if source.contains_key(&key) {
                found = true;
                let c = self.cochain_from(source, section, &key, k, n - k)?;
                out.set_component(k, c);
            }
        }
        if !found {
            return Err(ScenarioError::Missing(format!(
                "{section}.{stem}1{suffix}"
            )));
        }
        Ok(out)
    }

    /// The moment-map candidate assembled from `f1`, `f2`, ...
    pub fn moment_map(&self) -> Result<MomentMapCandidate, ScenarioError> {
        self.candidate_from(&self.maps, "maps", "f", "")
    }

    /// The second candidate, from `f1_prime`, `f2_prime`, ...
    pub fn moment_map_prime(&self) -> Result<MomentMapCandidate, ScenarioError> {
        self.candidate_from(&self.maps, "maps", "f", "_prime")
    }

    /// The total cochain assembled from `eta1`, `eta2`, ... (missing keys
    /// mean zero).
    pub fn eta(&self) -> Result<TotalCochain, ScenarioError> {
        let n = self.n;
        let dim = self.algebra.dim();
        let mut out = TotalCochain::zero(&self.manifold, dim, n as i64 - 1);
        for k in 1..=dim {
            let degree = n as i64 - 1 - k as i64;
            if degree < 0 {
                continue;
            }
            let key = format!("eta{k}");
            if self.maps.contains_key(&key) {
                let c = self.cochain_from(&self.maps, "maps", &key, k, degree as usize)?;
                out.set_slice(k, c);
            }
        }
        Ok(out)
    }

    /// The Cartan-model family `(X_s, omega_s, mu_s)`.
    pub fn cartan_family(&self) -> Result<CartanFamily, ScenarioError> {
        let x_s = self.family_field("X_s")?;
        let omega_s = self.family_form("omega_s", self.n + 1)?;
        let mu_s = self.gmap_from(&self.family, "family", "mu_s", self.n - 1)?;
        Ok(CartanFamily { x_s, omega_s, mu_s })
    }

    /// The moment-map family `(X_s, omega_s, f_s)`.
    pub fn moment_family(&self) -> Result<MomentFamily, ScenarioError> {
        let x_s = self.family_field("X_s")?;
        let omega_s = self.family_form("omega_s", self.n + 1)?;
        let f_s = self.candidate_from(&self.family, "family", "f", "_s")?;
        Ok(MomentFamily { x_s, omega_s, f_s })
    }

    pub fn has_cartan_family(&self) -> bool {
        self.family.contains_key("mu_s")
    }

    pub fn has_moment_family(&self) -> bool {
        self.family.contains_key("f1_s")
    }

    fn family_field(&self, key: &str) -> Result<VectorField, ScenarioError> {
        let value = Self::map_value(&self.family, "family", key)?;
        let MapValue::Expr(v) = value else {
            return Err(ScenarioError::Invalid(format!(
                "`family.{key}` must be a single expression"
            )));
        };
        let kind = v.kind();
        v.clone()
            .into_field(&self.manifold)
            .ok_or(ScenarioError::WrongKind {
                field: format!("family.{key}"),
                expected: "vector field",
                got: kind,
            })
    }

    fn family_form(&self, key: &str, degree: usize) -> Result<DifferentialForm, ScenarioError> {
        let value = Self::map_value(&self.family, "family", key)?;
        let MapValue::Expr(v) = value else {
            return Err(ScenarioError::Invalid(format!(
                "`family.{key}` must be a single expression"
            )));
        };
        self.value_to_form(format!("family.{key}"), v, degree)
    }

    /// The evaluation point: the CLI override, the scenario `[point]`, or the
    /// origin.
    pub fn point(&self, cli_override: Option<&str>) -> Result<Point, ScenarioError> {
        if let Some(text) = cli_override {
            return parse_point_flag(&self.manifold, text);
        }
        Ok(match &self.point {
            Some(p) => p.clone(),
            None => Point::origin(&self.manifold),
        })
    }
}

fn build_point(manifold: &ModelManifold, spec: &PointSpec) -> Result<Point, ScenarioError> {
    let mut thetas = Vec::new();
    for t in &spec.theta {
        thetas.push(
            t.parse::<QuarterTurn>()
                .map_err(ScenarioError::BadPoint)?,
        );
    }
    let zs: Result<Vec<Rational>, _> = spec.z.iter().map(parse_rational).collect();
    let mut point = Point::new(manifold, thetas, zs?).map_err(ScenarioError::BadPoint)?;
    if let Some(t) = &spec.t {
        point = point.with_param(Param::T, parse_rational(t)?);
    }
    if let Some(s) = &spec.s {
        point = point.with_param(Param::S, parse_rational(s)?);
    }
    Ok(point)
}

/// Parse a `--point` flag: comma-separated angles then affine values, e.g.
/// `pi/2,0,3/2` on a manifold with two circles and one line.
pub fn parse_point_flag(manifold: &ModelManifold, text: &str) -> Result<Point, ScenarioError> {
    let parts: Vec<&str> = text.split(',').map(|p| p.trim()).collect();
    let expected = manifold.torus_dim() + manifold.affine_dim();
    if parts.len() != expected {
        return Err(ScenarioError::BadPoint(format!(
            "expected {expected} comma-separated values, got {}",
            parts.len()
        )));
    }
    let mut thetas = Vec::new();
    for part in &parts[..manifold.torus_dim()] {
        thetas.push(part.parse::<QuarterTurn>().map_err(ScenarioError::BadPoint)?);
    }
    let mut zs = Vec::new();
    for part in &parts[manifold.torus_dim()..] {
        zs.push(parse_rational(&RationalSpec::Text((*part).to_string()))?);
    }
    Point::new(manifold, thetas, zs).map_err(ScenarioError::BadPoint)
}

/// Parse an `--x` flag: comma-separated rational coordinates of an algebra
/// element, e.g. `1,0`.
pub fn parse_x_flag(dim: usize, text: &str) -> Result<Vec<Rational>, ScenarioError> {
    let parts: Vec<&str> = text.split(',').map(|p| p.trim()).collect();
    if parts.len() != dim {
        return Err(ScenarioError::Invalid(format!(
            "expected {dim} comma-separated coordinates, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| parse_rational(&RationalSpec::Text((*p).to_string())))
        .collect()
}
