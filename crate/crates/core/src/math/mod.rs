//! TeX math to presentation MathML.
//!
//! [`parse_math`] builds a [`MathNode`] tree from the interior of a math span,
//! [`to_mathml`] serializes it, and [`translate_span`] composes the two with a
//! fallback that never fails.

mod mathml;
mod parse;
pub mod tables;

use thiserror::Error;

pub use mathml::{escape_xml, MATHML_NS, to_mathml, translate_span, MathMLFragment, Translation};
pub use parse::{parse_math, ParsedMath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceWidth {
    /// `\,`
    Thin,
    /// `\:`
    Medium,
    /// `\;`
    Thick,
    /// `\!`
    NegativeThin,
    /// `~` and `\ `
    Word,
    Quad,
    QQuad,
}

impl SpaceWidth {
    pub fn em(self) -> &'static str {
        match self {
            SpaceWidth::Thin => "0.1667em",
            SpaceWidth::Medium => "0.2222em",
            SpaceWidth::Thick => "0.2778em",
            SpaceWidth::NegativeThin => "-0.1667em",
            SpaceWidth::Word => "0.3333em",
            SpaceWidth::Quad => "1em",
            SpaceWidth::QQuad => "2em",
        }
    }
}

/// Math-mode syntax tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MathNode {
    Identifier(String),
    Number(String),
    Operator(String),
    /// Juxtaposition; always has at least two children.
    Row(Vec<MathNode>),
    Sup(Box<MathNode>, Box<MathNode>),
    Sub(Box<MathNode>, Box<MathNode>),
    SubSup(Box<MathNode>, Box<MathNode>, Box<MathNode>),
    Frac(Box<MathNode>, Box<MathNode>),
    Sqrt(Box<MathNode>),
    /// Index, then radicand.
    Root(Box<MathNode>, Box<MathNode>),
    FunctionName(String),
    /// `\left..\right`; an empty delimiter string stands for `.`.
    Fenced { open: String, close: String, body: Box<MathNode> },
    Space(SpaceWidth),
    /// An empty group `{}`.
    Empty,
}

impl MathNode {
    /// Collapses a parsed row: empty → `Empty`, singleton → its element.
    pub fn from_row(mut children: Vec<MathNode>) -> MathNode {
        match children.len() {
            0 => MathNode::Empty,
            1 => children.pop().unwrap(),
            _ => MathNode::Row(children),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("math syntax error at offset {offset}: {message}")]
pub struct MathError {
    /// Character offset into the math source.
    pub offset: usize,
    pub message: String,
}
