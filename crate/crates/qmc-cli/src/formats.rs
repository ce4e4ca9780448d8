//! File formats: JSON model and property files with `format_version: 1`.
//!
//! Complex scalars are `[re, im]` pairs; each part is a number or a small
//! literal such as `"1/sqrt(2)"`. A bare number or literal is taken as a
//! real scalar. Loading collects every violated invariant into one
//! diagnostic so a bad file is reported in full, not constraint by
//! constraint.

use std::fmt;
use std::fs;
use std::path::Path;

use qmc_core::classauto::{AcceptMode, ClassicalAutomaton, Letter};
use qmc_core::ltcheck::{PropertyKind, PropertySpec};
use qmc_core::props::PropositionSet;
use qmc_core::qautomaton::QuantumAutomaton;
use qmc_core::{CMatrix, CVector, Subspace, Tolerances, C64};
use serde_json::{json, Map, Value};

/// Every violated constraint found while loading a file.
#[derive(Debug)]
pub struct Diagnostic {
    pub messages: Vec<String>,
}

impl Diagnostic {
    fn new() -> Self {
        Diagnostic {
            messages: Vec::new(),
        }
    }

    fn push(&mut self, msg: impl Into<String>) {
        self.messages.push(msg.into());
    }

    fn single(msg: impl Into<String>) -> Self {
        Diagnostic {
            messages: vec![msg.into()],
        }
    }

    fn into_result<T>(self, value: T) -> Result<T, Diagnostic> {
        if self.messages.is_empty() {
            Ok(value)
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.messages.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl From<qmc_core::Error> for Diagnostic {
    fn from(e: qmc_core::Error) -> Self {
        Diagnostic::single(e.to_string())
    }
}

/// Parses `"1/sqrt(2)"`-style literals: an optional sign, then `a`,
/// `sqrt(b)`, `a/b` or `a/sqrt(b)`.
fn parse_literal(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let (sign, t) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let atom = |s: &str| -> Result<f64, String> {
        if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let x: f64 = inner
                .trim()
                .parse()
                .map_err(|_| format!("bad sqrt argument in {text:?}"))?;
            if x < 0.0 {
                return Err(format!("negative sqrt argument in {text:?}"));
            }
            Ok(x.sqrt())
        } else if s.is_empty() {
            Ok(1.0)
        } else {
            s.trim()
                .parse()
                .map_err(|_| format!("unrecognized scalar literal {text:?}"))
        }
    };
    match t.split_once('/') {
        Some((num, den)) => {
            let d = atom(den.trim())?;
            if d == 0.0 {
                return Err(format!("division by zero in {text:?}"));
            }
            Ok(sign * atom(num.trim())? / d)
        }
        None => Ok(sign * atom(t)?),
    }
}

fn parse_real(v: &Value, ctx: &str) -> Result<f64, String> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| format!("{ctx}: non-finite number")),
        Value::String(s) => parse_literal(s),
        other => Err(format!("{ctx}: expected number or literal, got {other}")),
    }
}

fn parse_complex(v: &Value, ctx: &str) -> Result<C64, String> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(C64::new(
            parse_real(&parts[0], ctx)?,
            parse_real(&parts[1], ctx)?,
        )),
        Value::Array(_) => Err(format!("{ctx}: a complex entry is a [re, im] pair")),
        other => Ok(C64::new(parse_real(other, ctx)?, 0.0)),
    }
}

fn parse_vector(v: &Value, ctx: &str) -> Result<CVector, String> {
    let entries = v
        .as_array()
        .ok_or_else(|| format!("{ctx}: expected a vector (array of entries)"))?;
    let parsed = entries
        .iter()
        .enumerate()
        .map(|(i, e)| parse_complex(e, &format!("{ctx}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CVector::new(parsed))
}

fn parse_matrix(v: &Value, ctx: &str) -> Result<CMatrix, String> {
    let rows = v
        .as_array()
        .ok_or_else(|| format!("{ctx}: expected a matrix (array of rows)"))?;
    let mut parsed: Vec<Vec<C64>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let rctx = format!("{ctx} row {i}");
        let row = row
            .as_array()
            .ok_or_else(|| format!("{rctx}: expected an array"))?;
        let entries = row
            .iter()
            .enumerate()
            .map(|(j, e)| parse_complex(e, &format!("{rctx} col {j}")))
            .collect::<Result<Vec<_>, _>>()?;
        if !parsed.is_empty() && entries.len() != parsed[0].len() {
            return Err(format!("{rctx}: ragged matrix"));
        }
        parsed.push(entries);
    }
    if parsed.is_empty() {
        return Err(format!("{ctx}: empty matrix"));
    }
    Ok(CMatrix::from_rows(&parsed))
}

fn read_json(path: &Path) -> Result<Value, Diagnostic> {
    let text = fs::read_to_string(path)
        .map_err(|e| Diagnostic::single(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Diagnostic::single(format!("{}: invalid JSON: {e}", path.display())))
}

fn check_version(root: &Map<String, Value>, diag: &mut Diagnostic) {
    match root.get("format_version") {
        Some(Value::Number(n)) if n.as_u64() == Some(1) => {}
        Some(other) => diag.push(format!("unsupported format_version {other}, expected 1")),
        None => diag.push("missing format_version (expected 1)"),
    }
}

/// A model file parsed into validated core objects.
pub struct LoadedModel {
    pub automaton: QuantumAutomaton,
    pub ap: PropositionSet,
}

pub fn load_model(path: &Path, tol: &Tolerances) -> Result<LoadedModel, Diagnostic> {
    let root = read_json(path)?;
    parse_model_value(&root, tol)
}

pub fn parse_model_value(root: &Value, tol: &Tolerances) -> Result<LoadedModel, Diagnostic> {
    let mut diag = Diagnostic::new();
    let Some(root) = root.as_object() else {
        return Err(Diagnostic::single("model file: top level must be an object"));
    };
    check_version(root, &mut diag);

    let dim = match root.get("dim").and_then(Value::as_u64) {
        Some(d) if d > 0 => d as usize,
        _ => {
            diag.push("model file: missing or invalid positive integer `dim`");
            return Err(diag);
        }
    };

    let mut actions: Vec<(String, CMatrix)> = Vec::new();
    match root.get("actions").and_then(Value::as_object) {
        Some(map) if !map.is_empty() => {
            for (name, mv) in map {
                match parse_matrix(mv, &format!("action {name:?}")) {
                    Ok(m) => {
                        if m.rows() != dim || m.cols() != dim {
                            diag.push(format!(
                                "action {name:?}: expected {dim}x{dim}, got {}x{}",
                                m.rows(),
                                m.cols()
                            ));
                        } else {
                            let violation = m.unitarity_violation();
                            if violation > tol.unitarity_eps {
                                diag.push(format!(
                                    "action {name:?} is not unitary: max |U\u{2020}U - I| entry = {violation}"
                                ));
                            }
                            actions.push((name.clone(), m));
                        }
                    }
                    Err(e) => diag.push(e),
                }
            }
        }
        _ => diag.push("model file: `actions` must be a nonempty name -> matrix object"),
    }

    let mut initial_vectors: Vec<CVector> = Vec::new();
    match root.get("initial").and_then(Value::as_array) {
        Some(list) if !list.is_empty() => {
            for (i, vv) in list.iter().enumerate() {
                match parse_vector(vv, &format!("initial vector {i}")) {
                    Ok(v) if v.dim() == dim => initial_vectors.push(v),
                    Ok(v) => diag.push(format!(
                        "initial vector {i}: expected dimension {dim}, got {}",
                        v.dim()
                    )),
                    Err(e) => diag.push(e),
                }
            }
        }
        _ => diag.push("model file: `initial` must be a nonempty list of spanning vectors"),
    }
    let initial = Subspace::span_of(&initial_vectors, dim, tol);
    if !initial_vectors.is_empty() && initial.rank() == 0 {
        diag.push("model file: initial vectors span the zero subspace");
    }

    let mut props: Vec<(String, Subspace)> = Vec::new();
    match root.get("propositions").and_then(Value::as_object) {
        Some(map) => {
            for (name, vv) in map {
                let ctx = format!("proposition {name:?}");
                match vv.as_array() {
                    Some(list) => {
                        let mut vectors = Vec::new();
                        for (i, v) in list.iter().enumerate() {
                            match parse_vector(v, &format!("{ctx} vector {i}")) {
                                Ok(v) if v.dim() == dim => vectors.push(v),
                                Ok(v) => diag.push(format!(
                                    "{ctx} vector {i}: expected dimension {dim}, got {}",
                                    v.dim()
                                )),
                                Err(e) => diag.push(e),
                            }
                        }
                        props.push((name.clone(), Subspace::span_of(&vectors, dim, tol)));
                    }
                    None => diag.push(format!("{ctx}: expected a list of spanning vectors")),
                }
            }
        }
        None => diag.push("model file: missing `propositions` object"),
    }

    if !diag.messages.is_empty() {
        return Err(diag);
    }
    let automaton = QuantumAutomaton::new(dim, actions, initial, tol)?;
    let ap = PropositionSet::new(props, tol)?;
    diag.into_result(LoadedModel { automaton, ap })
}

fn complex_value(c: C64) -> Value {
    json!([c.re, c.im])
}

fn vector_value(v: &CVector) -> Value {
    Value::Array(v.entries().iter().map(|&c| complex_value(c)).collect())
}

fn matrix_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| complex_value(m.get(i, j))).collect()))
            .collect(),
    )
}

/// Serializes a model back to the file schema (round-trip safe).
pub fn model_to_value(model: &LoadedModel) -> Value {
    let actions: Map<String, Value> = model
        .automaton
        .actions()
        .iter()
        .map(|(name, m)| (name.clone(), matrix_value(m)))
        .collect();
    let props: Map<String, Value> = model
        .ap
        .members()
        .iter()
        .map(|(name, s)| {
            (
                name.clone(),
                Value::Array(s.basis().iter().map(vector_value).collect()),
            )
        })
        .collect();
    json!({
        "format_version": 1,
        "dim": model.automaton.dim(),
        "actions": Value::Object(actions),
        "initial": Value::Array(model.automaton.initial().basis().iter().map(vector_value).collect()),
        "propositions": Value::Object(props),
    })
}

/// A property file: what to check against a model.
pub enum PropertyFile {
    Invariant { target_vectors: Vec<CVector> },
    Persistence { target_vectors: Vec<CVector> },
    LinearTime { spec: PropertySpec },
    Reachability { question: ReachQuestion },
}

/// A bounded ray-reachability question for the fixture search.
pub struct ReachQuestion {
    pub gates: Vec<CMatrix>,
    pub sites: usize,
    pub source: CVector,
    pub target: CVector,
}

impl PropertyFile {
    pub fn kind_name(&self) -> &'static str {
        match self {
            PropertyFile::Invariant { .. } => "invariant",
            PropertyFile::Persistence { .. } => "persistence",
            PropertyFile::LinearTime { spec } => match spec.kind {
                PropertyKind::Safety => "safety",
                PropertyKind::Omega => "omega",
            },
            PropertyFile::Reachability { .. } => "reachability",
        }
    }
}

pub fn load_property(path: &Path, tol: &Tolerances) -> Result<PropertyFile, Diagnostic> {
    let root = read_json(path)?;
    parse_property_value(&root, tol)
}

fn parse_target(root: &Map<String, Value>, diag: &mut Diagnostic) -> Vec<CVector> {
    let mut vectors = Vec::new();
    match root.get("target").and_then(Value::as_array) {
        Some(list) => {
            for (i, v) in list.iter().enumerate() {
                match parse_vector(v, &format!("target vector {i}")) {
                    Ok(v) => vectors.push(v),
                    Err(e) => diag.push(e),
                }
            }
        }
        None => diag.push("property file: missing `target` list of spanning vectors"),
    }
    vectors
}

fn parse_letter(v: &Value, ctx: &str) -> Result<Letter, String> {
    let list = v
        .as_array()
        .ok_or_else(|| format!("{ctx}: a letter is a list of proposition names"))?;
    list.iter()
        .map(|name| {
            name.as_str()
                .map(str::to_string)
                .ok_or_else(|| format!("{ctx}: proposition names are strings"))
        })
        .collect()
}

fn parse_recognizer(
    root: &Map<String, Value>,
    mode: AcceptMode,
    diag: &mut Diagnostic,
) -> Option<ClassicalAutomaton> {
    let Some(rec) = root.get("recognizer").and_then(Value::as_object) else {
        diag.push("property file: missing `recognizer` object");
        return None;
    };
    let names = |key: &str| -> Vec<String> {
        rec.get(key)
            .and_then(Value::as_array)
            .map(|l| {
                l.iter()
                    .filter_map(Value::as_str)
                    .map(str::to_string)
                    .collect()
            })
            .unwrap_or_default()
    };
    let states = names("states");
    if states.is_empty() {
        diag.push("recognizer: missing or empty `states`");
    }
    let mut transitions: Vec<(String, Letter, String)> = Vec::new();
    if let Some(list) = rec.get("transitions").and_then(Value::as_array) {
        for (i, t) in list.iter().enumerate() {
            let ctx = format!("recognizer transition {i}");
            match t.as_array() {
                Some(parts) if parts.len() == 3 => {
                    let from = parts[0].as_str();
                    let to = parts[2].as_str();
                    match (from, parse_letter(&parts[1], &ctx), to) {
                        (Some(f), Ok(letter), Some(t)) => {
                            transitions.push((f.to_string(), letter, t.to_string()));
                        }
                        (_, Err(e), _) => diag.push(e),
                        _ => diag.push(format!("{ctx}: expected [from, letter, to]")),
                    }
                }
                _ => diag.push(format!("{ctx}: expected a [from, letter, to] triple")),
            }
        }
    } else {
        diag.push("recognizer: missing `transitions` list");
    }
    if !diag.messages.is_empty() {
        return None;
    }
    match ClassicalAutomaton::new(states, transitions, names("initials"), names("finals"), mode) {
        Ok(a) => Some(a),
        Err(e) => {
            diag.push(format!("recognizer: {e}"));
            None
        }
    }
}

pub fn parse_property_value(root: &Value, _tol: &Tolerances) -> Result<PropertyFile, Diagnostic> {
    let mut diag = Diagnostic::new();
    let Some(root) = root.as_object() else {
        return Err(Diagnostic::single(
            "property file: top level must be an object",
        ));
    };
    check_version(root, &mut diag);
    let kind = root.get("kind").and_then(Value::as_str).unwrap_or("");
    let file = match kind {
        "invariant" => PropertyFile::Invariant {
            target_vectors: parse_target(root, &mut diag),
        },
        "persistence" => PropertyFile::Persistence {
            target_vectors: parse_target(root, &mut diag),
        },
        "safety" | "omega" => {
            let (pk, mode) = if kind == "safety" {
                (PropertyKind::Safety, AcceptMode::Finite)
            } else {
                (PropertyKind::Omega, AcceptMode::Buechi)
            };
            let sound_for_violation = root
                .get("sound_for_violation")
                .and_then(Value::as_bool)
                .unwrap_or(false);
            match parse_recognizer(root, mode, &mut diag) {
                Some(recognizer) => {
                    if !recognizer.flags().reversible && !sound_for_violation {
                        diag.push(
                            "recognizer is not reversible and sound_for_violation is not set",
                        );
                    }
                    PropertyFile::LinearTime {
                        spec: PropertySpec {
                            kind: pk,
                            recognizer,
                            sound_for_violation,
                        },
                    }
                }
                None => return Err(diag),
            }
        }
        "reachability" => {
            let mut gates = Vec::new();
            match root.get("gates").and_then(Value::as_object) {
                Some(map) if !map.is_empty() => {
                    for (name, mv) in map {
                        match parse_matrix(mv, &format!("gate {name:?}")) {
                            Ok(m) => gates.push(m),
                            Err(e) => diag.push(e),
                        }
                    }
                }
                _ => diag.push("property file: `gates` must be a nonempty name -> matrix object"),
            }
            let sites = root.get("sites").and_then(Value::as_u64).unwrap_or(0) as usize;
            if sites == 0 {
                diag.push("property file: missing positive integer `sites`");
            }
            let source = root
                .get("source")
                .map(|v| parse_vector(v, "source"))
                .unwrap_or_else(|| Err("property file: missing `source` vector".into()));
            let target = root
                .get("target")
                .map(|v| parse_vector(v, "target"))
                .unwrap_or_else(|| Err("property file: missing `target` vector".into()));
            match (source, target) {
                (Ok(source), Ok(target)) => PropertyFile::Reachability {
                    question: ReachQuestion {
                        gates,
                        sites,
                        source,
                        target,
                    },
                },
                (s, t) => {
                    if let Err(e) = s {
                        diag.push(e);
                    }
                    if let Err(e) = t {
                        diag.push(e);
                    }
                    return Err(diag);
                }
            }
        }
        other => {
            diag.push(format!(
                "property file: unknown kind {other:?} (expected invariant, persistence, safety, omega or reachability)"
            ));
            return Err(diag);
        }
    };
    diag.into_result(file)
}

/// Named built-in fixtures, each a model plus a matching property file.
pub fn fixture_names() -> Vec<&'static str> {
    vec!["z-stabilizer", "x-gate", "ghz-stabilizer", "never-leave-zero", "qubit-reach"]
}

fn stabilizer_fixture(words: &[&str], psi: Vec<C64>, tol: &Tolerances) -> (LoadedModel, Value) {
    use qmc_core::fixtures::{stabilizer_automaton, PauliWord};
    let generators: Vec<PauliWord> = words
        .iter()
        .map(|w| PauliWord::parse(w).expect("fixture generator"))
        .collect();
    let psi = CVector::new(psi);
    let (automaton, ap, target) =
        stabilizer_automaton(&generators, &psi, tol).expect("fixture model");
    let property = json!({
        "format_version": 1,
        "kind": "invariant",
        "target": Value::Array(target.basis().iter().map(vector_value).collect()),
    });
    (LoadedModel { automaton, ap }, property)
}

/// Emits the named fixture: `(model json, property json)`.
pub fn fixture(name: &str, tol: &Tolerances) -> Option<(Value, Value)> {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| C64::new(x, 0.0);
    match name {
        "z-stabilizer" => {
            let (model, property) = stabilizer_fixture(&["Z"], vec![c(1.0), c(0.0)], tol);
            Some((model_to_value(&model), property))
        }
        "x-gate" => {
            let (model, property) = stabilizer_fixture(&["X"], vec![c(1.0), c(0.0)], tol);
            Some((model_to_value(&model), property))
        }
        "ghz-stabilizer" => {
            let mut psi = vec![c(0.0); 8];
            psi[0] = c(inv_sqrt2);
            psi[7] = c(inv_sqrt2);
            let (model, property) = stabilizer_fixture(&["XXX", "ZZI", "IZZ"], psi, tol);
            Some((model_to_value(&model), property))
        }
        "never-leave-zero" => {
            // X-gate qubit model with AP {zero, one, top}; the property is
            // the safety recognizer of traces that leave span{|0>}.
            let model = json!({
                "format_version": 1,
                "dim": 2,
                "actions": {"x": [[0, 1], [1, 0]]},
                "initial": [[1, 0]],
                "propositions": {
                    "zero": [[1, 0]],
                    "one": [[0, 1]],
                    "top": [[1, 0], [0, 1]],
                },
            });
            let property = json!({
                "format_version": 1,
                "kind": "safety",
                "sound_for_violation": false,
                "recognizer": {
                    "states": ["ok", "bad"],
                    "initials": ["ok"],
                    "finals": ["bad"],
                    "transitions": [
                        ["ok", ["top", "zero"], "ok"],
                        ["ok", ["one", "top"], "bad"],
                        ["ok", ["top"], "bad"],
                    ],
                },
            });
            Some((model, property))
        }
        "qubit-reach" => {
            // The Hadamard-free rotation orbit question: reachable under X,
            // inconclusive under an irrational-angle rotation.
            let model = json!({
                "format_version": 1,
                "dim": 2,
                "actions": {"x": [[0, 1], [1, 0]]},
                "initial": [[1, 0]],
                "propositions": {"top": [[1, 0], [0, 1]]},
            });
            let property = json!({
                "format_version": 1,
                "kind": "reachability",
                "gates": {"x": [[0, 1], [1, 0]]},
                "sites": 1,
                "source": [1, 0],
                "target": [0, 1],
            });
            Some((model, property))
        }
        _ => None,
    }
}
