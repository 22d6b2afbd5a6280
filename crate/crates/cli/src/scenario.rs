//! Scenario files: TOML documents describing one verification run.
//!
//! Parsing keeps byte spans for every key and value so that diagnostics can
//! name the offending key path together with its line.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};

use oscequiv::linalg::Vec3;
use oscequiv::tdfields::Signal;
use toml::de::{DeTable, DeValue};
use toml::Spanned;

/// A diagnostic produced while reading a scenario.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ScenarioError {
    pub file: String,
    /// 1-based line, when the problem can be located.
    pub line: Option<usize>,
    /// Dotted key path, e.g. `field.e`.
    pub key: String,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{}: `{}`: {}", self.file, line, self.key, self.message),
            None => write!(f, "{}: `{}`: {}", self.file, self.key, self.message),
        }
    }
}

/// What a scenario runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    ClassicalEquivalence,
    QuantumPipeline,
    EigenstateExpansion,
    HillStability,
    Case1,
    Case2,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::ClassicalEquivalence,
        Mode::QuantumPipeline,
        Mode::EigenstateExpansion,
        Mode::HillStability,
        Mode::Case1,
        Mode::Case2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::ClassicalEquivalence => "classical-equivalence",
            Mode::QuantumPipeline => "quantum-pipeline",
            Mode::EigenstateExpansion => "eigenstate-expansion",
            Mode::HillStability => "hill-stability",
            Mode::Case1 => "case1",
            Mode::Case2 => "case2",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == s)
    }

    /// Checks this mode can emit, with their default tolerances.
    pub fn default_tolerances(self) -> &'static [(&'static str, f64)] {
        match self {
            Mode::ClassicalEquivalence => &[
                ("equivalence.deviation", 1e-6),
                ("ct1.symplectic", 1e-8),
                ("ct2.symplectic", 1e-8),
                ("homogeneous.energy", 1e-10),
                ("phase_a.zero", 1e-12),
            ],
            Mode::QuantumPipeline => &[
                ("qt2.pipeline", 1e-4),
                ("qt1.pipeline", 1e-4),
                ("qt2.identity", 1e-14),
                ("norm.preservation", 1e-6),
            ],
            Mode::EigenstateExpansion => &[
                ("hermite.shift", 1e-9),
                ("rotation.orthogonality", 1e-8),
                ("rotation.one_quantum", 1e-10),
                ("spectrum.relative", 1e-3),
                ("eigenstate.residual", 5e-3),
                ("ledger.dynamical_only", 1e-12),
            ],
            Mode::HillStability => &[
                ("monodromy.det", 1e-8),
                ("constant.trace", 1e-8),
                ("mathieu.boundary", 1e-3),
            ],
            Mode::Case1 => &[("rotation.ode", 1e-6), ("monodromy.det", 1e-8)],
            Mode::Case2 => &[
                ("conjugation", 1e-10),
                ("euler", 1e-8),
                ("ct3.symplectic", 1e-8),
                ("ct4.symplectic", 1e-8),
                ("stiffness.period", 1e-10),
                ("monodromy.det", 1e-8),
                ("static_limit", 1e-12),
            ],
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Charge, mass and a static field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub b: Vec3,
    pub e: Vec3,
    pub charge: f64,
    pub mass: f64,
}

/// Initial classical data: explicit states or a number of random draws.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Explicit { q: Vec3, p: Vec3 },
    Random { samples: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub half_width: f64,
    pub hbar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSpec {
    pub field: FieldSpec,
    pub initial: InitialSpec,
    pub horizon: Option<f64>,
    pub dt: f64,
    pub checkpoints: usize,
    pub panels_per_unit_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSpec {
    pub field: FieldSpec,
    pub grid: GridSpec,
    pub center: [f64; 2],
    pub momentum: [f64; 2],
    pub horizon: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionSpec {
    pub max_degree: usize,
    pub max_level: usize,
    pub theta: f64,
    pub spectrum_levels: usize,
    pub mass: f64,
    pub omega: f64,
    pub grid: GridSpec,
    /// Optional field for the transformed-eigenstate checks.
    pub field: Option<FieldSpec>,
    pub horizon: f64,
}

/// Evenly spaced parameter values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HillTemplate {
    /// `ω² = a + 2q cos 2t`.
    Mathieu { a: Sweep, q: Sweep },
    /// `ω² = ω₀²` over the period `T`.
    Constant { omega: Sweep, period: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec {
    pub q: f64,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HillSpec {
    pub template: HillTemplate,
    pub steps_per_period: usize,
    pub boundary: Option<BoundarySpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case1Spec {
    pub b3: Signal,
    pub charge: f64,
    pub mass: f64,
    pub periods: usize,
    pub dt: f64,
    pub steps_per_period: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case2Spec {
    pub b1: f64,
    pub b3: f64,
    pub alpha: f64,
    pub e: Vec3,
    pub charge: f64,
    pub mass: f64,
    pub probes: usize,
    pub steps_per_period: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModeSpec {
    ClassicalEquivalence(ClassicalSpec),
    QuantumPipeline(QuantumSpec),
    EigenstateExpansion(ExpansionSpec),
    HillStability(HillSpec),
    Case1(Case1Spec),
    Case2(Case2Spec),
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub mode: Mode,
    pub seed: u64,
    /// Tolerance per enabled check, defaults merged with overrides.
    pub tolerances: BTreeMap<String, f64>,
    pub output_dir: Option<PathBuf>,
    pub spec: ModeSpec,
}

impl Scenario {
    pub fn tolerance(&self, check: &str) -> f64 {
        self.tolerances[check]
    }
}

pub fn parse_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError {
        file: file.clone(),
        line: None,
        key: "<file>".into(),
        message: format!("cannot read: {e}"),
    })?;
    parse_scenario_str(&text, &file)
}

/// Parse scenario text; `file` is only used in diagnostics.
pub fn parse_scenario_str(text: &str, file: &str) -> Result<Scenario, ScenarioError> {
    let doc = Doc { src: text, file };
    let root = DeTable::parse(text).map_err(|e| {
        let line = e.span().map(|s| doc.line(s.start));
        let key = e.span().map(|s| doc.key_near(s.start)).unwrap_or_default();
        ScenarioError { file: file.into(), line, key, message: e.message().trim().to_string() }
    })?;
    let node = Node { doc: &doc, table: root.get_ref(), path: String::new(), span: root.span() };
    build(&node)
}

struct Doc<'a> {
    src: &'a str,
    file: &'a str,
}

impl Doc<'_> {
    fn line(&self, offset: usize) -> usize {
        self.src[..offset.min(self.src.len())].matches('\n').count() + 1
    }

    /// Best-effort dotted key for a syntax error at `offset`.
    fn key_near(&self, offset: usize) -> String {
        let before = &self.src[..offset.min(self.src.len())];
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let line = self.src[line_start..].lines().next().unwrap_or("");
        let key = line.split('=').next().unwrap_or("").trim();
        let table = before[..line_start]
            .lines()
            .rev()
            .find_map(|l| l.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')))
            .map(|t| t.trim().to_string());
        match (table, key.is_empty() || line.trim_start().starts_with('[')) {
            (_, true) => line.trim().to_string(),
            (Some(t), false) => format!("{t}.{key}"),
            (None, false) => key.to_string(),
        }
    }
}

struct Node<'a, 'i> {
    doc: &'a Doc<'a>,
    table: &'a DeTable<'i>,
    path: String,
    span: Range<usize>,
}

type Value<'a, 'i> = &'a Spanned<DeValue<'i>>;

impl<'a, 'i> Node<'a, 'i> {
    fn key_path(&self, key: &str) -> String {
        if self.path.is_empty() { key.to_string() } else { format!("{}.{}", self.path, key) }
    }

    fn err_at(&self, key: &str, span: Option<Range<usize>>, message: impl Into<String>) -> ScenarioError {
        ScenarioError {
            file: self.doc.file.into(),
            line: span.map(|s| self.doc.line(s.start)),
            key: self.key_path(key),
            message: message.into(),
        }
    }

    fn get(&self, key: &str) -> Option<Value<'a, 'i>> {
        self.table.iter().find(|(k, _)| k.get_ref().as_ref() == key).map(|(_, v)| v)
    }

    fn missing(&self, key: &str) -> ScenarioError {
        let span = if self.path.is_empty() { None } else { Some(self.span.clone()) };
        self.err_at(key, span, "missing required key")
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<(), ScenarioError> {
        for (k, _) in self.table.iter() {
            if !allowed.contains(&k.get_ref().as_ref()) {
                return Err(self.err_at(
                    k.get_ref(),
                    Some(k.span()),
                    format!("unknown key (expected one of: {})", allowed.join(", ")),
                ));
            }
        }
        Ok(())
    }

    fn number(&self, key: &str, v: Value<'a, 'i>) -> Result<f64, ScenarioError> {
        let parsed = match v.get_ref() {
            DeValue::Float(f) => f.as_str().replace('_', "").parse::<f64>().ok(),
            DeValue::Integer(i) => i64::from_str_radix(&i.as_str().replace('_', ""), i.radix()).ok().map(|n| n as f64),
            other => {
                return Err(self.err_at(key, Some(v.span()), format!("type mismatch: expected a number, found {}", other.type_str())))
            }
        };
        match parsed {
            Some(x) if x.is_finite() => Ok(x),
            _ => Err(self.err_at(key, Some(v.span()), "value must be a finite number")),
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, ScenarioError> {
        self.get(key).map(|v| self.number(key, v)).transpose()
    }

    fn req_f64(&self, key: &str) -> Result<f64, ScenarioError> {
        self.f64(key)?.ok_or_else(|| self.missing(key))
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, ScenarioError> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    fn positive(&self, key: &str, default: Option<f64>) -> Result<f64, ScenarioError> {
        let v = match (self.f64(key)?, default) {
            (Some(v), _) => v,
            (None, Some(d)) => return Ok(d),
            (None, None) => return Err(self.missing(key)),
        };
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.err_at(key, self.get(key).map(|s| s.span()), format!("{key} must be positive")))
        }
    }

    fn count(&self, key: &str, default: Option<usize>, min: usize) -> Result<usize, ScenarioError> {
        let Some(v) = self.get(key) else {
            return default.ok_or_else(|| self.missing(key));
        };
        let n = match v.get_ref() {
            DeValue::Integer(i) => i64::from_str_radix(&i.as_str().replace('_', ""), i.radix()).ok(),
            other => {
                return Err(self.err_at(key, Some(v.span()), format!("type mismatch: expected an integer, found {}", other.type_str())))
            }
        };
        match n {
            Some(n) if n >= min as i64 => Ok(n as usize),
            _ => Err(self.err_at(key, Some(v.span()), format!("{key} must be an integer ≥ {min}"))),
        }
    }

    fn string(&self, key: &str) -> Result<Option<(&'a str, Range<usize>)>, ScenarioError> {
        let Some(v) = self.get(key) else { return Ok(None) };
        match v.get_ref() {
            DeValue::String(s) => Ok(Some((s.as_ref(), v.span()))),
            other => Err(self.err_at(key, Some(v.span()), format!("type mismatch: expected a string, found {}", other.type_str()))),
        }
    }

    fn array<const N: usize>(&self, key: &str) -> Result<Option<[f64; N]>, ScenarioError> {
        let Some(v) = self.get(key) else { return Ok(None) };
        let DeValue::Array(items) = v.get_ref() else {
            return Err(self.err_at(
                key,
                Some(v.span()),
                format!("type mismatch: expected an array of {N} numbers, found {}", v.get_ref().type_str()),
            ));
        };
        let items: Vec<_> = items.iter().collect();
        if items.len() != N {
            return Err(self.err_at(key, Some(v.span()), format!("expected {N} components, found {}", items.len())));
        }
        let mut out = [0.0; N];
        for (o, item) in out.iter_mut().zip(items) {
            *o = self.number(key, item)?;
        }
        Ok(Some(out))
    }

    fn vec3(&self, key: &str, default: Vec3) -> Result<Vec3, ScenarioError> {
        Ok(self.array::<3>(key)?.map_or(default, Vec3::from))
    }

    fn table(&self, key: &str) -> Result<Option<Node<'a, 'i>>, ScenarioError> {
        let Some(v) = self.get(key) else { return Ok(None) };
        match v.get_ref() {
            DeValue::Table(t) => Ok(Some(Node { doc: self.doc, table: t, path: self.key_path(key), span: v.span() })),
            other => Err(self.err_at(key, Some(v.span()), format!("type mismatch: expected a table, found {}", other.type_str()))),
        }
    }

    fn req_table(&self, key: &str) -> Result<Node<'a, 'i>, ScenarioError> {
        self.table(key)?.ok_or_else(|| self.missing(key))
    }
}

const ROOT_KEYS: &[&str] =
    &["name", "mode", "seed", "horizon", "field", "initial", "grid", "numerics", "expansion", "sweep", "boundary", "tolerances", "output"];

fn build(root: &Node<'_, '_>) -> Result<Scenario, ScenarioError> {
    root.check_keys(ROOT_KEYS)?;
    let (name, name_span) = root.string("name")?.ok_or_else(|| root.missing("name"))?;
    if name.trim().is_empty() || name.contains(['/', '\\']) {
        return Err(root.err_at("name", Some(name_span), "name must be non-empty and contain no path separators"));
    }
    let (mode_str, mode_span) = root.string("mode")?.ok_or_else(|| root.missing("mode"))?;
    let mode = Mode::parse(mode_str).ok_or_else(|| {
        let known: Vec<&str> = Mode::ALL.iter().map(|m| m.as_str()).collect();
        root.err_at("mode", Some(mode_span.clone()), format!("unknown mode \"{mode_str}\" (expected one of: {})", known.join(", ")))
    })?;
    let seed = root.count("seed", Some(0), 0)? as u64;

    let spec = match mode {
        Mode::ClassicalEquivalence => ModeSpec::ClassicalEquivalence(classical(root)?),
        Mode::QuantumPipeline => ModeSpec::QuantumPipeline(quantum(root)?),
        Mode::EigenstateExpansion => ModeSpec::EigenstateExpansion(expansion(root)?),
        Mode::HillStability => ModeSpec::HillStability(hill(root)?),
        Mode::Case1 => ModeSpec::Case1(case1(root)?),
        Mode::Case2 => ModeSpec::Case2(case2(root)?),
    };

    let mut tolerances: BTreeMap<String, f64> =
        mode.default_tolerances().iter().map(|(k, v)| (k.to_string(), *v)).collect();
    if let Some(t) = root.table("tolerances")? {
        for (k, v) in t.table.iter() {
            let key = k.get_ref().as_ref();
            if !tolerances.contains_key(key) {
                let known: Vec<&str> = mode.default_tolerances().iter().map(|(k, _)| *k).collect();
                return Err(t.err_at(key, Some(k.span()), format!("no such check in mode {mode} (known: {})", known.join(", "))));
            }
            let x = t.number(key, v)?;
            if x <= 0.0 {
                return Err(t.err_at(key, Some(v.span()), format!("tolerance {key} must be positive")));
            }
            tolerances.insert(key.to_string(), x);
        }
    }

    let output_dir = match root.table("output")? {
        Some(o) => {
            o.check_keys(&["dir"])?;
            o.string("dir")?.map(|(s, _)| PathBuf::from(s))
        }
        None => None,
    };

    Ok(Scenario { name: name.to_string(), mode, seed, tolerances, output_dir, spec })
}

/// Reject tables that make no sense for the mode.
fn only_tables(root: &Node<'_, '_>, mode: &str, allowed: &[&str]) -> Result<(), ScenarioError> {
    for key in ["horizon", "field", "initial", "grid", "numerics", "expansion", "sweep", "boundary"] {
        if !allowed.contains(&key) {
            if let Some(v) = root.get(key) {
                return Err(root.err_at(key, Some(v.span()), format!("not used by mode {mode}")));
            }
        }
    }
    Ok(())
}

fn static_field(node: &Node<'_, '_>) -> Result<FieldSpec, ScenarioError> {
    node.check_keys(&["b", "b3", "e", "charge", "mass"])?;
    let b = match (node.array::<3>("b")?, node.f64("b3")?) {
        (Some(_), Some(_)) => return Err(node.err_at("b3", node.get("b3").map(|v| v.span()), "give either b or b3, not both")),
        (Some(b), None) => Vec3::from(b),
        (None, Some(b3)) => Vec3::new(0.0, 0.0, b3),
        (None, None) => return Err(node.missing("b3")),
    };
    if b.x != 0.0 || b.y != 0.0 {
        return Err(node.err_at("b", node.get("b").map(|v| v.span()), "static fields must be axial (b = [0, 0, b3])"));
    }
    Ok(FieldSpec { b, e: node.vec3("e", Vec3::zeros())?, charge: node.f64_or("charge", 1.0)?, mass: node.positive("mass", Some(1.0))? })
}

fn grid(root: &Node<'_, '_>, points: usize, half_width: f64) -> Result<GridSpec, ScenarioError> {
    let Some(g) = root.table("grid")? else {
        return Ok(GridSpec { points, half_width, hbar: 1.0 });
    };
    g.check_keys(&["points", "half_width", "hbar"])?;
    let points = g.count("points", Some(points), 16)?;
    if !points.is_power_of_two() {
        return Err(g.err_at("points", g.get("points").map(|v| v.span()), "points must be a power of two"));
    }
    Ok(GridSpec { points, half_width: g.positive("half_width", Some(half_width))?, hbar: g.positive("hbar", Some(1.0))? })
}

fn numerics<'a, 'i>(root: &Node<'a, 'i>, allowed: &[&str]) -> Result<Option<Node<'a, 'i>>, ScenarioError> {
    let n = root.table("numerics")?;
    if let Some(n) = &n {
        n.check_keys(allowed)?;
    }
    Ok(n)
}

fn classical(root: &Node<'_, '_>) -> Result<ClassicalSpec, ScenarioError> {
    only_tables(root, "classical-equivalence", &["horizon", "field", "initial", "numerics"])?;
    let field = static_field(&root.req_table("field")?)?;
    let initial = match root.table("initial")? {
        None => InitialSpec::Random { samples: 1 },
        Some(i) => {
            i.check_keys(&["q", "p", "samples"])?;
            match (i.array::<3>("q")?, i.array::<3>("p")?, i.get("samples")) {
                (Some(q), Some(p), None) => InitialSpec::Explicit { q: Vec3::from(q), p: Vec3::from(p) },
                (None, None, Some(_)) => InitialSpec::Random { samples: i.count("samples", None, 1)? },
                (Some(_), None, None) => return Err(i.missing("p")),
                (None, Some(_), None) => return Err(i.missing("q")),
                (None, None, None) => return Err(i.missing("q")),
                _ => return Err(i.err_at("samples", i.get("samples").map(|v| v.span()), "give either q and p, or samples")),
            }
        }
    };
    let horizon = match root.get("horizon") {
        Some(_) => Some(root.positive("horizon", None)?),
        None => None,
    };
    let num = numerics(root, &["dt", "checkpoints", "panels_per_unit_time"])?;
    let (dt, checkpoints, panels) = match &num {
        Some(n) => (n.positive("dt", Some(1e-4))?, n.count("checkpoints", Some(200), 1)?, n.positive("panels_per_unit_time", Some(1e4))?),
        None => (1e-4, 200, 1e4),
    };
    Ok(ClassicalSpec { field, initial, horizon, dt, checkpoints, panels_per_unit_time: panels })
}

fn quantum(root: &Node<'_, '_>) -> Result<QuantumSpec, ScenarioError> {
    only_tables(root, "quantum-pipeline", &["horizon", "field", "initial", "grid", "numerics"])?;
    let field = static_field(&root.req_table("field")?)?;
    if field.b.z == 0.0 {
        return Err(root.err_at("field.b3", None, "the quantum pipeline needs a nonzero magnetic field"));
    }
    let (center, momentum) = match root.table("initial")? {
        Some(i) => {
            i.check_keys(&["center", "momentum"])?;
            (i.array::<2>("center")?.unwrap_or([1.0, 0.0]), i.array::<2>("momentum")?.unwrap_or([0.0, 0.0]))
        }
        None => ([1.0, 0.0], [0.0, 0.0]),
    };
    let dt = match numerics(root, &["dt"])? {
        Some(n) => n.positive("dt", Some(1e-3))?,
        None => 1e-3,
    };
    Ok(QuantumSpec { field, grid: grid(root, 256, 8.0)?, center, momentum, horizon: root.positive("horizon", Some(1.0))?, dt })
}

fn expansion(root: &Node<'_, '_>) -> Result<ExpansionSpec, ScenarioError> {
    only_tables(root, "eigenstate-expansion", &["horizon", "field", "grid", "expansion"])?;
    let (max_degree, max_level, theta, spectrum_levels, mass, omega) = match root.table("expansion")? {
        Some(e) => {
            e.check_keys(&["max_degree", "max_level", "theta", "spectrum_levels", "mass", "omega"])?;
            (
                e.count("max_degree", Some(10), 0)?,
                e.count("max_level", Some(6), 0)?,
                e.f64_or("theta", 0.7)?,
                e.count("spectrum_levels", Some(3), 0)?,
                e.positive("mass", Some(1.0))?,
                e.positive("omega", Some(1.0))?,
            )
        }
        None => (10, 6, 0.7, 3, 1.0, 1.0),
    };
    let field = root.table("field")?.map(|f| static_field(&f)).transpose()?;
    if let Some(f) = &field {
        if f.b.z == 0.0 {
            return Err(root.err_at("field.b3", None, "eigenstates need a nonzero magnetic field"));
        }
    }
    Ok(ExpansionSpec {
        max_degree,
        max_level,
        theta,
        spectrum_levels,
        mass,
        omega,
        grid: grid(root, 256, 8.0)?,
        field,
        horizon: root.positive("horizon", Some(1.0))?,
    })
}

fn sweep(node: &Node<'_, '_>, key: &str) -> Result<Sweep, ScenarioError> {
    let t = node.req_table(key)?;
    t.check_keys(&["start", "stop", "count"])?;
    let count = t.count("count", Some(1), 1)?;
    let start = t.req_f64("start")?;
    let stop = if count == 1 { t.f64_or("stop", start)? } else { t.req_f64("stop")? };
    Ok(Sweep { start, stop, count })
}

fn hill(root: &Node<'_, '_>) -> Result<HillSpec, ScenarioError> {
    only_tables(root, "hill-stability", &["sweep", "boundary", "numerics"])?;
    let s = root.req_table("sweep")?;
    let (kind, kind_span) = s.string("template")?.ok_or_else(|| s.missing("template"))?;
    let template = match kind {
        "mathieu" => {
            s.check_keys(&["template", "a", "q"])?;
            HillTemplate::Mathieu { a: sweep(&s, "a")?, q: sweep(&s, "q")? }
        }
        "constant" => {
            s.check_keys(&["template", "omega", "period"])?;
            HillTemplate::Constant { omega: sweep(&s, "omega")?, period: s.positive("period", None)? }
        }
        other => {
            return Err(s.err_at("template", Some(kind_span), format!("unknown template \"{other}\" (expected mathieu or constant)")))
        }
    };
    let steps_per_period = match numerics(root, &["steps_per_period"])? {
        Some(n) => n.count("steps_per_period", Some(4096), 1)?,
        None => 4096,
    };
    let boundary = match root.table("boundary")? {
        Some(b) => {
            b.check_keys(&["q", "lo", "hi", "tol"])?;
            let (lo, hi) = (b.req_f64("lo")?, b.req_f64("hi")?);
            if hi <= lo {
                return Err(b.err_at("hi", b.get("hi").map(|v| v.span()), "hi must exceed lo"));
            }
            Some(BoundarySpec { q: b.req_f64("q")?, lo, hi, tol: b.positive("tol", Some(1e-4))? })
        }
        None => None,
    };
    Ok(HillSpec { template, steps_per_period, boundary })
}

fn signal(node: &Node<'_, '_>, key: &str) -> Result<Signal, ScenarioError> {
    if let Some(t) = node.table(key)? {
        t.check_keys(&["mean", "amplitude", "freq", "phase"])?;
        return Ok(Signal::harmonic(t.f64_or("mean", 0.0)?, t.f64_or("amplitude", 0.0)?, t.req_f64("freq")?, t.f64_or("phase", 0.0)?));
    }
    Ok(Signal::Constant(node.req_f64(key)?))
}

fn case1(root: &Node<'_, '_>) -> Result<Case1Spec, ScenarioError> {
    only_tables(root, "case1", &["field", "numerics"])?;
    let f = root.req_table("field")?;
    f.check_keys(&["b3", "charge", "mass"])?;
    let b3 = signal(&f, "b3")?;
    if b3.period().is_none() {
        return Err(f.err_at("b3", f.get("b3").map(|v| v.span()), "b3 must oscillate (give a table with nonzero amplitude and freq)"));
    }
    let (periods, dt, steps) = match numerics(root, &["periods", "dt", "steps_per_period"])? {
        Some(n) => (n.count("periods", Some(10), 1)?, n.positive("dt", Some(1e-4))?, n.count("steps_per_period", Some(4096), 1)?),
        None => (10, 1e-4, 4096),
    };
    Ok(Case1Spec { b3, charge: f.f64_or("charge", 1.0)?, mass: f.positive("mass", Some(1.0))?, periods, dt, steps_per_period: steps })
}

fn case2(root: &Node<'_, '_>) -> Result<Case2Spec, ScenarioError> {
    only_tables(root, "case2", &["field", "numerics"])?;
    let f = root.req_table("field")?;
    f.check_keys(&["b1", "b3", "alpha", "e", "charge", "mass"])?;
    let (probes, steps) = match numerics(root, &["probes", "steps_per_period"])? {
        Some(n) => (n.count("probes", Some(20), 1)?, n.count("steps_per_period", Some(4096), 1)?),
        None => (20, 4096),
    };
    Ok(Case2Spec {
        b1: f.f64_or("b1", 0.0)?,
        b3: f.req_f64("b3")?,
        alpha: f.f64_or("alpha", 0.0)?,
        e: f.vec3("e", Vec3::zeros())?,
        charge: f.f64_or("charge", 1.0)?,
        mass: f.positive("mass", Some(1.0))?,
        probes,
        steps_per_period: steps,
    })
}
