use serde::{Deserialize, Serialize};

use crate::poly::{default_names, parse_with_names, ParseError, Polynomial, MAX_VARS};

pub const DOMAIN_SCHEMA: &str = "kohnlab/1";

/// The on-disk description of a special domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainFile {
    pub schema: String,
    pub n: usize,
    #[serde(default)]
    pub vars: Vec<String>,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema `{0}` (expected `{DOMAIN_SCHEMA}`)")]
    Schema(String),
    #[error("dimension must be between 1 and {MAX_VARS}, got {0}")]
    Dimension(usize),
    #[error("expected {expected} variable names, got {got}")]
    VariableCount { expected: usize, got: usize },
    #[error("bad variable name `{0}`")]
    VariableName(String),
    #[error("generator {index} (line {line}, column {column}): {source}")]
    Generator {
        index: usize,
        line: usize,
        column: usize,
        source: ParseError,
    },
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("generator {0} does not vanish at the origin")]
    NonzeroConstant(usize),
    #[error("generator {0} is identically zero")]
    ZeroGenerator(usize),
}

/// `Re w + Σ|F_j(z)|² < 0`, given by its generators `F_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialDomain {
    pub n: usize,
    pub vars: Vec<String>,
    pub generators: Vec<Polynomial>,
}

impl SpecialDomain {
    /// Checks the shape constraints (not the colength, which needs the
    /// Gröbner machinery and is checked by the engine).
    pub fn new(n: usize, vars: Vec<String>, generators: Vec<Polynomial>) -> Result<Self, DomainError> {
        if n == 0 || n > MAX_VARS {
            return Err(DomainError::Dimension(n));
        }
        if vars.len() != n {
            return Err(DomainError::VariableCount {
                expected: n,
                got: vars.len(),
            });
        }
        if generators.is_empty() {
            return Err(DomainError::NoGenerators);
        }
        for (i, g) in generators.iter().enumerate() {
            if g.is_zero() {
                return Err(DomainError::ZeroGenerator(i + 1));
            }
            if g.is_unit_at_origin() {
                return Err(DomainError::NonzeroConstant(i + 1));
            }
        }
        Ok(SpecialDomain { n, vars, generators })
    }

    /// Parses generators in the default variables `z1..zn`.
    pub fn parse(n: usize, generators: &[&str]) -> Result<Self, DomainError> {
        let file = DomainFile {
            schema: DOMAIN_SCHEMA.into(),
            n,
            vars: default_names(n),
            generators: generators.iter().map(|s| s.to_string()).collect(),
        };
        Self::from_file(&file)
    }

    pub fn from_file(file: &DomainFile) -> Result<Self, DomainError> {
        if file.schema != DOMAIN_SCHEMA {
            return Err(DomainError::Schema(file.schema.clone()));
        }
        if file.n == 0 || file.n > MAX_VARS {
            return Err(DomainError::Dimension(file.n));
        }
        let vars = if file.vars.is_empty() {
            default_names(file.n)
        } else {
            file.vars.clone()
        };
        for v in &vars {
            let ok = v
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(DomainError::VariableName(v.clone()));
            }
        }
        if vars.len() != file.n {
            return Err(DomainError::VariableCount {
                expected: file.n,
                got: vars.len(),
            });
        }
        let mut gens = Vec::with_capacity(file.generators.len());
        for (i, text) in file.generators.iter().enumerate() {
            let g = parse_with_names(text, &vars).map_err(|e| {
                let pos = match &e {
                    ParseError::Syntax { pos, .. }
                    | ParseError::UnknownVariable { pos, .. }
                    | ParseError::DivisionByZero { pos } => *pos,
                    ParseError::BadDimension(_) => 0,
                };
                DomainError::Generator {
                    index: i + 1,
                    line: 1,
                    column: pos + 1,
                    source: e,
                }
            })?;
            gens.push(g);
        }
        Self::new(file.n, vars, gens)
    }

    /// Parses a domain file's JSON text, locating generator errors in the
    /// source text where possible.
    pub fn from_json(text: &str) -> Result<Self, DomainError> {
        let file: DomainFile = serde_json::from_str(text).map_err(|e| DomainError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_file(&file).map_err(|e| match e {
            DomainError::Generator {
                index,
                column,
                source,
                ..
            } => {
                let (line, col) = locate(text, &file.generators[index - 1], column);
                DomainError::Generator {
                    index,
                    line,
                    column: col,
                    source,
                }
            }
            other => other,
        })
    }

    pub fn to_file(&self) -> DomainFile {
        DomainFile {
            schema: DOMAIN_SCHEMA.into(),
            n: self.n,
            vars: self.vars.clone(),
            generators: self.generator_strings(),
        }
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| self.show(g)).collect()
    }

    pub fn show(&self, p: &Polynomial) -> String {
        p.to_string_with(&self.vars)
    }

    pub fn ideal(&self, budget: crate::groebner::Budget) -> crate::groebner::Ideal {
        crate::groebner::Ideal::with_budget(self.n, self.generators.clone(), budget)
    }
}

/// Line/column in `text` of the `column`-th character of the first
/// occurrence of the JSON string literal `needle`. Falls back to line 1.
fn locate(text: &str, needle: &str, column: usize) -> (usize, usize) {
    let quoted = serde_json::to_string(needle).unwrap_or_default();
    match text.find(&quoted) {
        Some(start) => {
            let offset = start + 1 + column - 1;
            let before = &text[..offset.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
            (line, col)
        }
        None => (1, column),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_domain_json() {
        let text = r#"{"schema": "kohnlab/1", "n": 2, "vars": ["x", "y"], "generators": ["x^2", "y^3"]}"#;
        let d = SpecialDomain::from_json(text).unwrap();
        assert_eq!(d.generator_strings(), vec!["x^2", "y^3"]);
        assert_eq!(d.generators[0].to_string(), "z1^2");
    }

    #[test]
    fn domain_errors() {
        let text = "{\"schema\": \"kohnlab/1\", \"n\": 2,\n \"generators\": [\"z1^2\", \"z2 z1\"]}";
        match SpecialDomain::from_json(text) {
            Err(DomainError::Generator { index: 2, line: 2, column, .. }) => assert_eq!(column, 29),
            other => panic!("{other:?}"),
        }
        assert!(matches!(SpecialDomain::from_json("{"), Err(DomainError::Json { .. })));
        assert!(matches!(
            SpecialDomain::parse(2, &["z1 + 1", "z2"]),
            Err(DomainError::NonzeroConstant(1))
        ));
        let bad_schema = r#"{"schema": "other", "n": 1, "generators": ["z1"]}"#;
        assert!(matches!(SpecialDomain::from_json(bad_schema), Err(DomainError::Schema(_))));
    }
}
