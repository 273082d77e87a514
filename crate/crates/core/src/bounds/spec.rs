use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Which lower bound to use. Text form:
/// `zero | jterm:<j> | onetree | tsp | max(<b1>,<b2>,...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundSpec {
    Zero,
    JTerm(usize),
    OneTree,
    Tsp,
    Max(Vec<BoundSpec>),
}

pub const DEFAULT_JTERM: usize = 2;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bad bound {input:?} at byte {at}: {message}")]
pub struct BoundParseError {
    pub input: String,
    pub at: usize,
    pub message: String,
}

impl BoundSpec {
    pub fn uses_tsp(&self) -> bool {
        match self {
            BoundSpec::Tsp => true,
            BoundSpec::Max(parts) => parts.iter().any(BoundSpec::uses_tsp),
            _ => false,
        }
    }

    /// Distinct `j` values of the j-terminal bounds mentioned.
    pub fn jterm_orders(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_j(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_j(&self, out: &mut Vec<usize>) {
        match self {
            BoundSpec::JTerm(j) => out.push(*j),
            BoundSpec::Max(parts) => parts.iter().for_each(|p| p.collect_j(out)),
            _ => {}
        }
    }
}

impl fmt::Display for BoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundSpec::Zero => f.write_str("zero"),
            BoundSpec::JTerm(j) => write!(f, "jterm:{j}"),
            BoundSpec::OneTree => f.write_str("onetree"),
            BoundSpec::Tsp => f.write_str("tsp"),
            BoundSpec::Max(parts) => {
                f.write_str("max(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for BoundSpec {
    type Err = BoundParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            input: s,
            bytes: s.as_bytes(),
            pos: 0,
        };
        let spec = p.bound()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("trailing input"));
        }
        Ok(spec)
    }
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> BoundParseError {
        BoundParseError {
            input: self.input.to_string(),
            at: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        &self.input[start..self.pos]
    }

    fn bound(&mut self) -> Result<BoundSpec, BoundParseError> {
        let start = self.pos;
        let word = self.word().to_ascii_lowercase();
        match word.as_str() {
            "zero" => Ok(BoundSpec::Zero),
            "onetree" => Ok(BoundSpec::OneTree),
            "tsp" => Ok(BoundSpec::Tsp),
            "jterm" => {
                if !self.eat(b':') {
                    return Ok(BoundSpec::JTerm(DEFAULT_JTERM));
                }
                let digits = self.word();
                match digits.parse::<usize>() {
                    Ok(j @ 1..=3) => Ok(BoundSpec::JTerm(j)),
                    _ => Err(self.error("j must be 1, 2 or 3")),
                }
            }
            "max" => {
                if !self.eat(b'(') {
                    return Err(self.error("expected `(`"));
                }
                let mut parts = vec![self.bound()?];
                while self.eat(b',') {
                    parts.push(self.bound()?);
                }
                if !self.eat(b')') {
                    return Err(self.error("expected `,` or `)`"));
                }
                Ok(BoundSpec::Max(parts))
            }
            "" => Err(self.error("expected a bound name")),
            _ => {
                self.pos = start;
                self.skip_ws();
                Err(self.error("unknown bound name"))
            }
        }
    }
}
