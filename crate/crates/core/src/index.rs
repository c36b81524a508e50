//! Names of neurons, neuron inputs, and neuron outputs.
//!
//! A neuron is named `t@s` where `t` is a neuron-type name and `s` a simple
//! name. Its `k`-th input is `t@ik\s` and its `k`-th output is `t@ok%s`.
//! Inputs name matrix rows and outputs name matrix columns.
//!
//! Alphabets:
//! - separators: `\`, `%`, `@`
//! - type names: ASCII letters, digits, and `_ ( ) + , .`
//! - simple names: ASCII letters, digits, `_` and `-`

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const SEPARATOR: char = '@';
pub const INPUT_MARK: char = '\\';
pub const OUTPUT_MARK: char = '%';

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PortKind {
    Neuron,
    Input(u32),
    Output(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexName {
    pub type_name: String,
    pub kind: PortKind,
    pub simple_name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("invalid {segment} `{value}`: character outside its alphabet or empty")]
    InvalidAlphabet {
        segment: &'static str,
        value: String,
    },
    #[error("cannot parse index `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("unknown neuron type `{0}`")]
    UnknownType(String),
}

pub fn is_type_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '(' | ')' | '+' | ',' | '.')
}

pub fn is_simple_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-')
}

pub fn is_type_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_type_char)
}

pub fn is_simple_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_simple_char)
}

impl IndexName {
    pub fn neuron(type_name: impl Into<String>, simple_name: impl Into<String>) -> Self {
        IndexName {
            type_name: type_name.into(),
            kind: PortKind::Neuron,
            simple_name: simple_name.into(),
        }
    }

    pub fn input(type_name: impl Into<String>, k: u32, simple_name: impl Into<String>) -> Self {
        IndexName {
            type_name: type_name.into(),
            kind: PortKind::Input(k),
            simple_name: simple_name.into(),
        }
    }

    pub fn output(type_name: impl Into<String>, k: u32, simple_name: impl Into<String>) -> Self {
        IndexName {
            type_name: type_name.into(),
            kind: PortKind::Output(k),
            simple_name: simple_name.into(),
        }
    }

    pub fn validate(&self) -> Result<(), IndexError> {
        if !is_type_name(&self.type_name) {
            return Err(IndexError::InvalidAlphabet {
                segment: "type name",
                value: self.type_name.clone(),
            });
        }
        if !is_simple_name(&self.simple_name) {
            return Err(IndexError::InvalidAlphabet {
                segment: "simple name",
                value: self.simple_name.clone(),
            });
        }
        match self.kind {
            PortKind::Input(0) | PortKind::Output(0) => Err(IndexError::InvalidAlphabet {
                segment: "field name",
                value: "0".into(),
            }),
            _ => Ok(()),
        }
    }

    /// The neuron this port belongs to.
    pub fn neuron_name(&self) -> IndexName {
        IndexName::neuron(self.type_name.clone(), self.simple_name.clone())
    }

    /// Checks the port number against the arities reported by `registry`.
    pub fn validate_against<R: ArityLookup + ?Sized>(
        &self,
        registry: &R,
    ) -> Result<bool, IndexError> {
        let (m, n) = registry
            .arity(&self.type_name)
            .ok_or_else(|| IndexError::UnknownType(self.type_name.clone()))?;
        Ok(match self.kind {
            PortKind::Neuron => true,
            PortKind::Input(k) => k >= 1 && (k as usize) <= m,
            PortKind::Output(k) => k >= 1 && (k as usize) <= n,
        })
    }
}

/// Anything that can report `(input arity, output arity)` for a type name.
pub trait ArityLookup {
    fn arity(&self, type_name: &str) -> Option<(usize, usize)>;
}

pub fn input_field(k: u32) -> String {
    format!("i{k}")
}

pub fn output_field(k: u32) -> String {
    format!("o{k}")
}

pub fn format_index(n: &IndexName) -> Result<String, IndexError> {
    n.validate()?;
    let t = &n.type_name;
    let s = &n.simple_name;
    Ok(match n.kind {
        PortKind::Neuron => format!("{t}{SEPARATOR}{s}"),
        PortKind::Input(k) => format!("{t}{SEPARATOR}{}{INPUT_MARK}{s}", input_field(k)),
        PortKind::Output(k) => format!("{t}{SEPARATOR}{}{OUTPUT_MARK}{s}", output_field(k)),
    })
}

fn parse_field(input: &str, field: &str, prefix: char) -> Result<u32, IndexError> {
    let err = |reason: String| IndexError::Parse {
        input: input.to_string(),
        reason,
    };
    let digits = field
        .strip_prefix(prefix)
        .ok_or_else(|| err(format!("field name `{field}` must start with `{prefix}`")))?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) || digits.starts_with('0') {
        return Err(err(format!("bad field number in `{field}`")));
    }
    digits
        .parse::<u32>()
        .map_err(|_| err(format!("field number out of range in `{field}`")))
}

pub fn parse_index(s: &str) -> Result<IndexName, IndexError> {
    let err = |reason: &str| IndexError::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    if s.matches(SEPARATOR).count() != 1 {
        return Err(err("exactly one `@` separator is required"));
    }
    let (type_name, rest) = s.split_once(SEPARATOR).expect("checked above");
    if type_name.is_empty() {
        return Err(err("empty type name"));
    }
    if !is_type_name(type_name) {
        return Err(err("type name contains a character outside its alphabet"));
    }
    let inputs = rest.matches(INPUT_MARK).count();
    let outputs = rest.matches(OUTPUT_MARK).count();
    let (kind, simple) = match (inputs, outputs) {
        (0, 0) => (PortKind::Neuron, rest),
        (1, 0) => {
            let (field, simple) = rest.split_once(INPUT_MARK).expect("counted");
            (PortKind::Input(parse_field(s, field, 'i')?), simple)
        }
        (0, 1) => {
            let (field, simple) = rest.split_once(OUTPUT_MARK).expect("counted");
            (PortKind::Output(parse_field(s, field, 'o')?), simple)
        }
        _ => return Err(err("multiple port separators")),
    };
    if simple.is_empty() {
        return Err(err("empty simple name"));
    }
    if !is_simple_name(simple) {
        return Err(err("simple name contains a character outside its alphabet"));
    }
    Ok(IndexName {
        type_name: type_name.to_string(),
        kind,
        simple_name: simple.to_string(),
    })
}

pub fn validate_against_registry<R: ArityLookup + ?Sized>(
    n: &IndexName,
    registry: &R,
) -> Result<bool, IndexError> {
    n.validate_against(registry)
}

impl fmt::Display for IndexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match format_index(self) {
            Ok(s) => f.write_str(&s),
            Err(_) => write!(f, "<invalid {}@{}>", self.type_name, self.simple_name),
        }
    }
}

impl FromStr for IndexName {
    type Err = IndexError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_index(s)
    }
}
