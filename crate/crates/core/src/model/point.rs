use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the instance space.
///
/// Every example family fits one of three kinds: a real scalar on `[0, 1]`,
/// a short real vector, or a string over a finite alphabet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Real(f64),
    Vector(Vec<f64>),
    Word(String),
}

impl Point {
    pub fn as_real(&self) -> Result<f64> {
        match self {
            Point::Real(x) => Ok(*x),
            other => Err(Error::invalid(format!("expected a real point, got {other}"))),
        }
    }

    pub fn as_vector(&self) -> Result<&[f64]> {
        match self {
            Point::Vector(v) => Ok(v),
            other => Err(Error::invalid(format!("expected a vector point, got {other}"))),
        }
    }

    pub fn as_word(&self) -> Result<&str> {
        match self {
            Point::Word(w) => Ok(w),
            other => Err(Error::invalid(format!("expected a string point, got {other}"))),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(x) => write!(f, "{x}"),
            Point::Vector(v) => write!(f, "{v:?}"),
            Point::Word(w) => write!(f, "{w:?}"),
        }
    }
}

/// A binary label, serialized as `-1` / `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn value(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    /// Label of a real prediction, with `sign(0) = +1`.
    pub fn of(v: f64) -> Label {
        if v >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

impl TryFrom<i8> for Label {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, Self::Error> {
        match v {
            -1 => Ok(Label::Negative),
            1 => Ok(Label::Positive),
            other => Err(format!("label must be -1 or 1, got {other}")),
        }
    }
}

impl From<Label> for i8 {
    fn from(l: Label) -> i8 {
        match l {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }
}

/// A labeled point `z = (x, y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example {
    pub x: Point,
    pub y: Label,
}

impl Example {
    pub fn new(x: Point, y: Label) -> Self {
        Self { x, y }
    }

    pub fn real(x: f64, y: Label) -> Self {
        Self::new(Point::Real(x), y)
    }

    pub fn vector(x: Vec<f64>, y: Label) -> Self {
        Self::new(Point::Vector(x), y)
    }

    pub fn word(x: impl Into<String>, y: Label) -> Self {
        Self::new(Point::Word(x.into()), y)
    }
}
