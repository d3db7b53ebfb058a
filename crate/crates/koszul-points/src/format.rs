//! Configuration JSON: parsing with location context, canonical output and digests.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use koszul_points_core::field::FieldError;
use koszul_points_core::{ConfigError, Configuration, Field, FieldTag, PrimeField, Rationals};

pub const SCHEMA: &str = "koszul-points/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Rational,
    Prime { p: u64 },
}

impl From<FieldTag> for FieldSpec {
    fn from(t: FieldTag) -> Self {
        match t {
            FieldTag::Rational => FieldSpec::Rational,
            FieldTag::Prime(p) => FieldSpec::Prime { p },
        }
    }
}

/// A coordinate as written in the file: a string such as `"-3/2"`, or a bare integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Text(String),
    Int(i64),
}

impl Coord {
    fn text(&self) -> String {
        match self {
            Coord::Text(s) => s.clone(),
            Coord::Int(v) => v.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub field: FieldSpec,
    pub dim: usize,
    pub points: Vec<Vec<Coord>>,
    #[serde(default)]
    pub labels: Vec<Option<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Json { source_name: String, line: usize, column: usize, message: String },
    #[error("{source_name}: point {point}, coordinate {coord}: {error}")]
    Coordinate { source_name: String, point: usize, coord: usize, error: FieldError },
    #[error("{source_name}: {error}")]
    Field { source_name: String, error: FieldError },
    #[error("{source_name}: {error}")]
    Config { source_name: String, error: ConfigError },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {error}")]
    Io { path: String, error: std::io::Error },
}

/// A configuration over whichever field the file names.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyConfig {
    Rational(Configuration<Rationals>),
    Prime(Configuration<PrimeField>),
}

/// Runs `$body` with `$c` bound to the typed configuration.
#[macro_export]
macro_rules! with_config {
    ($any:expr, $c:ident => $body:expr) => {
        match $any {
            $crate::format::AnyConfig::Rational($c) => $body,
            $crate::format::AnyConfig::Prime($c) => $body,
        }
    };
}

impl AnyConfig {
    pub fn tag(&self) -> FieldTag {
        with_config!(self, c => c.field().tag())
    }

    pub fn len(&self) -> usize {
        with_config!(self, c => c.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        with_config!(self, c => c.dim())
    }

    pub fn to_file(&self) -> ConfigFile {
        with_config!(self, c => to_file(c))
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data serializes")
    }

    pub fn pretty_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain data serializes")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

impl From<Configuration<Rationals>> for AnyConfig {
    fn from(c: Configuration<Rationals>) -> Self {
        AnyConfig::Rational(c)
    }
}

impl From<Configuration<PrimeField>> for AnyConfig {
    fn from(c: Configuration<PrimeField>) -> Self {
        AnyConfig::Prime(c)
    }
}

pub fn to_file<F: Field>(cfg: &Configuration<F>) -> ConfigFile {
    let f = cfg.field();
    let labels = if cfg.labels().iter().all(Option::is_none) { Vec::new() } else { cfg.labels().to_vec() };
    ConfigFile {
        field: f.tag().into(),
        dim: cfg.dim(),
        points: cfg.points().iter().map(|p| p.iter().map(|x| Coord::Text(f.render(x))).collect()).collect(),
        labels,
    }
}

fn build<F: Field>(field: F, file: &ConfigFile, source_name: &str) -> Result<Configuration<F>, InputError> {
    let mut points = Vec::with_capacity(file.points.len());
    for (point, row) in file.points.iter().enumerate() {
        let mut p = Vec::with_capacity(row.len());
        for (coord, x) in row.iter().enumerate() {
            let v = field
                .parse(&x.text())
                .map_err(|error| InputError::Coordinate { source_name: source_name.into(), point, coord, error })?;
            p.push(v);
        }
        points.push(p);
    }
    Configuration::new(field, file.dim, points, file.labels.clone())
        .map_err(|error| InputError::Config { source_name: source_name.into(), error })
}

pub fn parse_config(text: &str, source_name: &str) -> Result<AnyConfig, InputError> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| InputError::Json {
        source_name: source_name.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_file(&file, source_name)
}

pub fn from_file(file: &ConfigFile, source_name: &str) -> Result<AnyConfig, InputError> {
    match file.field {
        FieldSpec::Rational => Ok(AnyConfig::Rational(build(Rationals, file, source_name)?)),
        FieldSpec::Prime { p } => {
            let field = PrimeField::new(p).map_err(|error| InputError::Field { source_name: source_name.into(), error })?;
            Ok(AnyConfig::Prime(build(field, file, source_name)?))
        }
    }
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &str) -> Result<String, InputError> {
    use std::io::Read;
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_string(&mut text)).map(|_| ())
    };
    res.map_err(|error| InputError::Io { path: path.into(), error })?;
    Ok(text)
}

pub fn load_config(path: &str) -> Result<AnyConfig, InputError> {
    let name = if path == "-" { "<stdin>" } else { path };
    parse_config(&read_input(path)?, name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use koszul_points_core::families;

    #[test]
    fn rational_round_trip() {
        let text = r#"{"field":{"type":"rational"},"dim":1,"points":[["2","-3/2"],[0,"5"]],"labels":["a",null]}"#;
        let cfg = parse_config(text, "t").unwrap();
        assert_eq!(cfg.len(), 2);
        let canon = cfg.canonical_json();
        assert_eq!(canon, r#"{"field":{"type":"rational"},"dim":1,"points":[["1","-3/4"],["0","1"]],"labels":["a",null]}"#);
        let again = parse_config(&canon, "t").unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.canonical_json(), canon);
    }

    #[test]
    fn prime_field_and_digest() {
        let a: AnyConfig = families::rains_configuration(PrimeField::new(101).unwrap()).into();
        let text = a.pretty_json();
        let b = parse_config(&text, "t").unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
        assert_eq!(b.tag(), FieldTag::Prime(101));
    }

    #[test]
    fn errors_carry_context() {
        let e = parse_config("{\n\"field\": {\"type\": \"rational\"},\n\"dim\": 1,\n\"points\": [[\"1\", \"x\"]]\n}", "f.json").unwrap_err();
        assert!(matches!(e, InputError::Coordinate { point: 0, coord: 1, .. }), "{e}");
        let e = parse_config("{\n\"field\": 3\n}", "f.json").unwrap_err();
        assert!(matches!(e, InputError::Json { line: 2, .. }), "{e}");
        assert!(e.to_string().starts_with("f.json:2:"));
        let e = parse_config(r#"{"field":{"type":"prime","p":91},"dim":0,"points":[]}"#, "f").unwrap_err();
        assert!(matches!(e, InputError::Field { .. }));
        let e = parse_config(r#"{"field":{"type":"rational"},"dim":1,"points":[["1","1"],["2","2"]]}"#, "f").unwrap_err();
        assert!(matches!(e, InputError::Config { error: ConfigError::DuplicatePoint(0, 1), .. }));
    }
}
