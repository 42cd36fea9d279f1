//! Scenario files: a line-oriented sectioned text format binding pre-potential
//! expressions, pair structure, declared checks, and sampling policy.
//!
//! ```text
//! # comment
//! [scenario]
//! name = maxwell_sol
//! chart = cartesian
//! lambda = "t^2"            # optional gauge function for the potential check
//!
//! [params]
//! alpha = 0.3
//!
//! [prepotentials]
//! u1 = "sin(t+x) + 0.5*cos(t-x)"
//!
//! [pairs]
//! pair = u1, u2
//!
//! [rarita_schwinger]
//! u = u1
//! column = c1, c2, c1, c2
//!
//! [dirac_column]
//! slot = u1, u2             # exactly four slot lines
//!
//! [checks]
//! conditions = dalembert, gradient_orthogonality
//! sectors = maxwell, klein_gordon
//! tolerance = 1e-9
//!
//! [sampling]
//! count = 256
//! seed = 42
//! box_t = -1, 1
//! exclusion = "r - 0.1"
//! ```

use crate::chart::{chart_by_name, Chart};
use crate::expr::Expr;
use crate::prepotential::Prepotential;
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("I/O error reading scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("semantic error: {0}")]
    Semantic(String),
}

fn format_err(line: usize, msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Format {
        line,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    KleinGordon,
    DiracProducts,
    DiracMaxwell,
    Maxwell,
    RaritaSchwinger,
    LinearizedEinstein,
    FullEinstein,
}

impl Sector {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "klein_gordon" => Self::KleinGordon,
            "dirac_products" => Self::DiracProducts,
            "dirac_maxwell" => Self::DiracMaxwell,
            "maxwell" => Self::Maxwell,
            "rarita_schwinger" => Self::RaritaSchwinger,
            "linearized_einstein" => Self::LinearizedEinstein,
            "full_einstein" => Self::FullEinstein,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::KleinGordon => "klein_gordon",
            Self::DiracProducts => "dirac_products",
            Self::DiracMaxwell => "dirac_maxwell",
            Self::Maxwell => "maxwell",
            Self::RaritaSchwinger => "rarita_schwinger",
            Self::LinearizedEinstein => "linearized_einstein",
            Self::FullEinstein => "full_einstein",
        }
    }

    /// Sectors whose comma-derivative formulas are flat-chart only.
    pub fn requires_cartesian(&self) -> bool {
        matches!(
            self,
            Self::DiracProducts | Self::DiracMaxwell | Self::RaritaSchwinger | Self::LinearizedEinstein
        )
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    Dalembert,
    GradientOrthogonality,
    Hessian,
    Commutation,
    Independence,
    DisjointSupports,
}

impl Condition {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "dalembert" => Self::Dalembert,
            "gradient_orthogonality" => Self::GradientOrthogonality,
            "hessian" => Self::Hessian,
            "commutation" => Self::Commutation,
            "independence" => Self::Independence,
            "disjoint_supports" => Self::DisjointSupports,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Dalembert => "dalembert",
            Self::GradientOrthogonality => "gradient_orthogonality",
            Self::Hessian => "hessian",
            Self::Commutation => "commutation",
            Self::Independence => "independence",
            Self::DisjointSupports => "disjoint_supports",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RsBlock {
    /// index of the distinguished pre-potential u
    pub u: usize,
    /// indices of the four column entries
    pub column: [usize; 4],
}

#[derive(Debug, Clone)]
pub struct Sampling {
    pub count: usize,
    pub seed: u64,
    pub boxes: [[f64; 2]; 4],
    pub exclusion: Option<Expr>,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rel: f64,
    pub einstein: f64,
    pub nonflat_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            einstein: 1e-8,
            nonflat_floor: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub chart: Chart,
    pub params: HashMap<String, f64>,
    pub prepotentials: Vec<Prepotential>,
    /// index pairs into `prepotentials`
    pub pairs: Vec<(usize, usize)>,
    pub rs: Option<RsBlock>,
    pub dirac_column: Option<[(usize, usize); 4]>,
    pub sectors: Vec<Sector>,
    pub conditions: Vec<Condition>,
    pub gauge: Option<Expr>,
    pub sampling: Sampling,
    pub tol: Tolerances,
}

impl Scenario {
    pub fn prepotential_index(&self, name: &str) -> Option<usize> {
        self.prepotentials.iter().position(|p| p.name == name)
    }
}

/// Strip a trailing comment: `#` outside double quotes starts a comment.
fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Unquote a `"..."` value; bare values pass through.
fn unquote(v: &str, line: usize) -> Result<&str, ScenarioError> {
    let v = v.trim();
    if let Some(stripped) = v.strip_prefix('"') {
        stripped
            .strip_suffix('"')
            .ok_or_else(|| format_err(line, "unterminated quoted value"))
    } else if v.contains('"') {
        Err(format_err(line, "stray quote in value"))
    } else {
        Ok(v)
    }
}

struct RawScenario {
    scenario: Vec<(String, String, usize)>,
    params: Vec<(String, String, usize)>,
    prepotentials: Vec<(String, String, usize)>,
    pairs: Vec<(String, usize)>,
    rs: Vec<(String, String, usize)>,
    dirac_slots: Vec<(String, usize)>,
    checks: Vec<(String, String, usize)>,
    sampling: Vec<(String, String, usize)>,
}

fn split_sections(text: &str) -> Result<RawScenario, ScenarioError> {
    let mut raw = RawScenario {
        scenario: vec![],
        params: vec![],
        prepotentials: vec![],
        pairs: vec![],
        rs: vec![],
        dirac_slots: vec![],
        checks: vec![],
        sampling: vec![],
    };
    let mut section: Option<String> = None;
    let mut saw_any = false;
    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw_line).trim();
        if line.is_empty() {
            continue;
        }
        saw_any = true;
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| format_err(lineno, "unterminated section header"))?
                .trim()
                .to_string();
            match name.as_str() {
                "scenario" | "params" | "prepotentials" | "pairs" | "rarita_schwinger"
                | "dirac_column" | "checks" | "sampling" => section = Some(name),
                other => return Err(format_err(lineno, format!("unknown section [{other}]"))),
            }
            continue;
        }
        let section = section
            .as_deref()
            .ok_or_else(|| format_err(lineno, "entry before any [section] header"))?;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format_err(lineno, "expected `key = value`"))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        match section {
            "scenario" => raw.scenario.push((key, value, lineno)),
            "params" => raw.params.push((key, value, lineno)),
            "prepotentials" => raw.prepotentials.push((key, value, lineno)),
            "pairs" => {
                if key != "pair" {
                    return Err(format_err(lineno, "only `pair = a, b` entries allowed"));
                }
                raw.pairs.push((value, lineno));
            }
            "rarita_schwinger" => raw.rs.push((key, value, lineno)),
            "dirac_column" => {
                if key != "slot" {
                    return Err(format_err(lineno, "only `slot = a, b` entries allowed"));
                }
                raw.dirac_slots.push((value, lineno));
            }
            "checks" => raw.checks.push((key, value, lineno)),
            "sampling" => raw.sampling.push((key, value, lineno)),
            _ => unreachable!(),
        }
    }
    if !saw_any {
        return Err(format_err(1, "empty scenario file"));
    }
    Ok(raw)
}

/// Parse scenario text. The filename is only used in messages.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let raw = split_sections(text)?;

    let mut name = None;
    let mut chart_name = None;
    let mut gauge_text: Option<(String, usize)> = None;
    for (key, value, lineno) in &raw.scenario {
        match key.as_str() {
            "name" => name = Some(unquote(value, *lineno)?.to_string()),
            "chart" => chart_name = Some(unquote(value, *lineno)?.to_string()),
            "lambda" => gauge_text = Some((unquote(value, *lineno)?.to_string(), *lineno)),
            other => return Err(format_err(*lineno, format!("unknown scenario key `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| ScenarioError::Semantic("missing scenario name".into()))?;
    let chart_name =
        chart_name.ok_or_else(|| ScenarioError::Semantic("missing chart reference".into()))?;
    let chart = chart_by_name(&chart_name)
        .ok_or_else(|| ScenarioError::Semantic(format!("unknown chart `{chart_name}`")))?;
    let coords = chart.coords().to_vec();

    let mut params = HashMap::new();
    let mut param_names = Vec::new();
    for (key, value, lineno) in &raw.params {
        let v: f64 = value
            .parse()
            .map_err(|_| format_err(*lineno, format!("parameter `{key}` is not a number")))?;
        if params.insert(key.clone(), v).is_some() {
            return Err(ScenarioError::Semantic(format!(
                "parameter `{key}` declared twice"
            )));
        }
        param_names.push(key.clone());
    }

    let mut prepotentials: Vec<Prepotential> = Vec::new();
    for (key, value, lineno) in &raw.prepotentials {
        if prepotentials.iter().any(|p| p.name == *key) {
            return Err(ScenarioError::Semantic(format!(
                "pre-potential `{key}` declared twice"
            )));
        }
        let text = unquote(value, *lineno)?;
        let expr = Expr::parse(text, &coords, &param_names).map_err(|e| {
            ScenarioError::Semantic(format!("pre-potential `{key}`: {e}"))
        })?;
        prepotentials.push(Prepotential {
            name: key.clone(),
            expr,
        });
    }

    let lookup = |nm: &str| -> Result<usize, ScenarioError> {
        prepotentials
            .iter()
            .position(|p| p.name == nm)
            .ok_or_else(|| ScenarioError::Semantic(format!("undefined pre-potential `{nm}`")))
    };

    let mut pairs = Vec::new();
    for (value, lineno) in &raw.pairs {
        let parts: Vec<&str> = value.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(format_err(*lineno, "pair needs exactly two names"));
        }
        pairs.push((lookup(parts[0])?, lookup(parts[1])?));
    }

    let rs = if raw.rs.is_empty() {
        None
    } else {
        let mut u = None;
        let mut column = None;
        for (key, value, lineno) in &raw.rs {
            match key.as_str() {
                "u" => u = Some(lookup(value.trim())?),
                "column" => {
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    if parts.len() != 4 {
                        return Err(format_err(*lineno, "column needs exactly four names"));
                    }
                    let mut idx = [0usize; 4];
                    for (slot, nm) in idx.iter_mut().zip(parts) {
                        *slot = lookup(nm)?;
                    }
                    column = Some(idx);
                }
                other => {
                    return Err(format_err(
                        *lineno,
                        format!("unknown rarita_schwinger key `{other}`"),
                    ))
                }
            }
        }
        Some(RsBlock {
            u: u.ok_or_else(|| ScenarioError::Semantic("rarita_schwinger block missing u".into()))?,
            column: column.ok_or_else(|| {
                ScenarioError::Semantic("rarita_schwinger block missing column".into())
            })?,
        })
    };

    let dirac_column = if raw.dirac_slots.is_empty() {
        None
    } else {
        if raw.dirac_slots.len() != 4 {
            return Err(ScenarioError::Semantic(format!(
                "dirac_column needs exactly 4 slots, got {}",
                raw.dirac_slots.len()
            )));
        }
        let mut out = [(0usize, 0usize); 4];
        for (slot, (value, lineno)) in out.iter_mut().zip(&raw.dirac_slots) {
            let parts: Vec<&str> = value.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(format_err(*lineno, "slot needs exactly two names"));
            }
            *slot = (lookup(parts[0])?, lookup(parts[1])?);
        }
        Some(out)
    };

    let mut sectors = Vec::new();
    let mut conditions = Vec::new();
    let mut tol = Tolerances::default();
    for (key, value, lineno) in &raw.checks {
        match key.as_str() {
            "sectors" => {
                for part in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let s = Sector::parse(part).ok_or_else(|| {
                        ScenarioError::Semantic(format!("unknown sector `{part}`"))
                    })?;
                    if !sectors.contains(&s) {
                        sectors.push(s);
                    }
                }
            }
            "conditions" => {
                for part in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let c = Condition::parse(part).ok_or_else(|| {
                        ScenarioError::Semantic(format!("unknown condition `{part}`"))
                    })?;
                    if !conditions.contains(&c) {
                        conditions.push(c);
                    }
                }
            }
            "tolerance" => {
                tol.rel = value
                    .parse()
                    .map_err(|_| format_err(*lineno, "tolerance is not a number"))?
            }
            "tolerance_einstein" => {
                tol.einstein = value
                    .parse()
                    .map_err(|_| format_err(*lineno, "tolerance_einstein is not a number"))?
            }
            "nonflat_floor" => {
                tol.nonflat_floor = value
                    .parse()
                    .map_err(|_| format_err(*lineno, "nonflat_floor is not a number"))?
            }
            other => return Err(format_err(*lineno, format!("unknown checks key `{other}`"))),
        }
    }

    let mut sampling = Sampling {
        count: 256,
        seed: 42,
        boxes: chart.default_box,
        exclusion: None,
    };
    for (key, value, lineno) in &raw.sampling {
        match key.as_str() {
            "count" => {
                sampling.count = value
                    .parse()
                    .map_err(|_| format_err(*lineno, "count is not an integer"))?
            }
            "seed" => {
                sampling.seed = value
                    .parse()
                    .map_err(|_| format_err(*lineno, "seed is not an integer"))?
            }
            "exclusion" => {
                let text = unquote(value, *lineno)?;
                let expr = Expr::parse(text, &coords, &param_names)
                    .map_err(|e| ScenarioError::Semantic(format!("exclusion: {e}")))?;
                sampling.exclusion = Some(expr);
            }
            other => {
                if let Some(coord) = other.strip_prefix("box_") {
                    let axis = coords
                        .iter()
                        .position(|c| c == coord)
                        .ok_or_else(|| {
                            ScenarioError::Semantic(format!(
                                "box for unknown coordinate `{coord}` on chart {}",
                                chart.name
                            ))
                        })?;
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    if parts.len() != 2 {
                        return Err(format_err(*lineno, "box needs `lo, hi`"));
                    }
                    let lo: f64 = parts[0]
                        .parse()
                        .map_err(|_| format_err(*lineno, "box lo is not a number"))?;
                    let hi: f64 = parts[1]
                        .parse()
                        .map_err(|_| format_err(*lineno, "box hi is not a number"))?;
                    // rejects NaN bounds too, not just lo >= hi
                    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
                        return Err(ScenarioError::Semantic(format!(
                            "box for `{coord}` is empty: [{lo}, {hi}]"
                        )));
                    }
                    sampling.boxes[axis] = [lo, hi];
                } else {
                    return Err(format_err(*lineno, format!("unknown sampling key `{other}`")));
                }
            }
        }
    }

    let gauge = match gauge_text {
        None => None,
        Some((text, _lineno)) => Some(
            Expr::parse(&text, &coords, &param_names)
                .map_err(|e| ScenarioError::Semantic(format!("lambda: {e}")))?,
        ),
    };

    let scenario = Scenario {
        name,
        chart,
        params,
        prepotentials,
        pairs,
        rs,
        dirac_column,
        sectors,
        conditions,
        gauge,
        sampling,
        tol,
    };
    validate(&scenario)?;
    Ok(scenario)
}

fn validate(s: &Scenario) -> Result<(), ScenarioError> {
    if s.prepotentials.is_empty() {
        return Err(ScenarioError::Semantic(
            "scenario declares no pre-potentials".into(),
        ));
    }
    if s.sampling.count == 0 {
        return Err(ScenarioError::Semantic("sampling count must be >= 1".into()));
    }
    let needs_pairs = s.sectors.iter().any(|sec| {
        matches!(
            sec,
            Sector::KleinGordon | Sector::DiracMaxwell | Sector::Maxwell | Sector::LinearizedEinstein
        )
    });
    if needs_pairs && s.pairs.is_empty() {
        return Err(ScenarioError::Semantic(
            "declared sectors require at least one pair".into(),
        ));
    }
    if s.sectors.contains(&Sector::DiracProducts) && s.dirac_column.is_none() {
        return Err(ScenarioError::Semantic(
            "dirac_products sector requires a [dirac_column] section".into(),
        ));
    }
    if s.sectors.contains(&Sector::RaritaSchwinger) && s.rs.is_none() {
        return Err(ScenarioError::Semantic(
            "rarita_schwinger sector requires a [rarita_schwinger] section".into(),
        ));
    }
    for sec in &s.sectors {
        if sec.requires_cartesian() && s.chart.name != "cartesian" {
            return Err(ScenarioError::Semantic(format!(
                "sector {sec} uses flat comma derivatives and requires the cartesian chart"
            )));
        }
    }
    if s.conditions.contains(&Condition::Independence) && s.prepotentials.len() != 4 {
        return Err(ScenarioError::Semantic(format!(
            "independence condition requires exactly 4 pre-potentials, got {}",
            s.prepotentials.len()
        )));
    }
    if s.conditions
        .iter()
        .any(|c| !matches!(c, Condition::Independence))
        && s.pairs.is_empty()
        && s.conditions
            .iter()
            .any(|c| !matches!(c, Condition::Dalembert | Condition::Independence))
    {
        return Err(ScenarioError::Semantic(
            "pair conditions declared but no pairs given".into(),
        ));
    }
    Ok(())
}

/// Load a scenario from disk.
pub fn load_scenario(path: &std::path::Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}

/// The shipped catalog: scenario names and their file contents.
pub const CATALOG: &[(&str, &str)] = &[
    ("maxwell_sol", include_str!("../catalog/maxwell_sol.scn")),
    ("rs_sol", include_str!("../catalog/rs_sol.scn")),
    (
        "einstein_cartesian",
        include_str!("../catalog/einstein_cartesian.scn"),
    ),
    (
        "einstein_cartesian_alpha",
        include_str!("../catalog/einstein_cartesian_alpha.scn"),
    ),
    (
        "einstein_cylindrical",
        include_str!("../catalog/einstein_cylindrical.scn"),
    ),
    (
        "einstein_lightlike",
        include_str!("../catalog/einstein_lightlike.scn"),
    ),
    (
        "einstein_lightlike_cyl",
        include_str!("../catalog/einstein_lightlike_cyl.scn"),
    ),
];

/// Parse one catalog entry by name.
pub fn catalog_scenario(name: &str) -> Option<Result<Scenario, ScenarioError>> {
    CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_scenario(text))
}

/// Parse the whole catalog (panics only if a shipped file is broken, which
/// the test suite rules out).
pub fn catalog() -> Vec<Scenario> {
    CATALOG
        .iter()
        .map(|(name, text)| {
            parse_scenario(text).unwrap_or_else(|e| panic!("catalog entry {name}: {e}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_parses_and_has_expected_entries() {
        let all = catalog();
        assert!(all.len() >= 7);
        let names: Vec<&str> = all.iter().map(|s| s.name.as_str()).collect();
        for want in [
            "maxwell_sol",
            "rs_sol",
            "einstein_cartesian",
            "einstein_cartesian_alpha",
            "einstein_cylindrical",
            "einstein_lightlike",
            "einstein_lightlike_cyl",
        ] {
            assert!(names.contains(&want), "missing {want}");
        }
    }

    #[test]
    fn maxwell_sol_structure() {
        let s = catalog_scenario("maxwell_sol").unwrap().unwrap();
        assert_eq!(s.prepotentials.len(), 4);
        assert_eq!(s.pairs.len(), 2);
        assert_eq!(s.sectors.len(), 5);
        assert_eq!(s.conditions.len(), 6);
        assert!(s.dirac_column.is_some());
        assert_eq!(s.sampling.count, 256);
        assert_eq!(s.sampling.seed, 42);
        assert_eq!(s.chart.name, "cartesian");
    }

    #[test]
    fn einstein_cylindrical_structure() {
        let s = catalog_scenario("einstein_cylindrical").unwrap().unwrap();
        assert_eq!(s.chart.name, "cylindrical");
        assert_eq!(s.prepotentials.len(), 2);
        assert_eq!(s.sectors, vec![Sector::FullEinstein]);
        assert_eq!(s.sampling.boxes[1], [0.05, 1.0]);
    }

    #[test]
    fn dangling_reference_is_semantic_error() {
        let text = r#"
[scenario]
name = bad
chart = cartesian
[prepotentials]
u1 = "t + x"
[pairs]
pair = u1, u9
[checks]
sectors = maxwell
"#;
        match parse_scenario(text) {
            Err(ScenarioError::Semantic(msg)) => assert!(msg.contains("u9")),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_format_error() {
        match parse_scenario("") {
            Err(ScenarioError::Format { .. }) => {}
            other => panic!("expected format error, got {other:?}"),
        }
        match parse_scenario("   \n# only a comment\n") {
            Err(ScenarioError::Format { .. }) => {}
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn spinor_sector_rejected_off_cartesian() {
        let text = r#"
[scenario]
name = bad
chart = cylindrical
[prepotentials]
u1 = "ln(r)"
u2 = "t"
[pairs]
pair = u1, u2
[checks]
sectors = linearized_einstein
"#;
        assert!(matches!(
            parse_scenario(text),
            Err(ScenarioError::Semantic(_))
        ));
    }

    #[test]
    fn independence_needs_exactly_four() {
        let text = r#"
[scenario]
name = bad
chart = cartesian
[prepotentials]
u1 = "t + x"
u2 = "y"
[pairs]
pair = u1, u2
[checks]
conditions = independence
"#;
        assert!(matches!(
            parse_scenario(text),
            Err(ScenarioError::Semantic(_))
        ));
    }

    #[test]
    fn bad_syntax_has_line_numbers() {
        let text = "[scenario]\nname = x\nchart = cartesian\n[prepotentials]\nbroken line without equals\n";
        match parse_scenario(text) {
            Err(ScenarioError::Format { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_quotes() {
        let text = r#"
# full-line comment
[scenario]
name = demo   # trailing comment
chart = cartesian
[prepotentials]
u1 = "t + x"  # the expression contains no hash
u2 = "y"
[pairs]
pair = u1, u2
[checks]
sectors = maxwell
conditions = dalembert
[sampling]
count = 16
seed = 7
box_t = -2, 2
"#;
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.name, "demo");
        assert_eq!(s.sampling.count, 16);
        assert_eq!(s.sampling.seed, 7);
        assert_eq!(s.sampling.boxes[0], [-2.0, 2.0]);
    }
}
