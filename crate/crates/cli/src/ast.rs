//! Syntax tree of a script. Positions live on [`Statement`] only, so two
//! parses of equivalent text compare equal via [`Script::kinds`].

use svlab_core::Q;

use crate::error::Pos;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Statement>,
}

impl Script {
    /// Statements without positions, comments or blank lines.
    pub fn kinds(&self) -> Vec<&Stmt> {
        self.statements
            .iter()
            .map(|s| &s.stmt)
            .filter(|s| !matches!(s, Stmt::Comment(_) | Stmt::Blank))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub pos: Pos,
    pub stmt: Stmt,
    /// Comment on the same line after the statement.
    pub trailing: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Manifold { name: String, attrs: Vec<Attr> },
    Let { name: String, expr: Expr },
    Certify { name: String, stable: Option<Stable> },
    Assert(Assertion),
    Query { name: String, invariant: String },
    Cobordism { name: String, def: CobDef },
    Comment(String),
    Blank,
}

impl Stmt {
    /// The name this statement binds, if any.
    pub fn binds(&self) -> Option<&str> {
        match self {
            Stmt::Manifold { name, .. } | Stmt::Let { name, .. } | Stmt::Cobordism { name, .. } => Some(name),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attr {
    pub key: String,
    pub value: Value,
}

/// Attribute values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Unknown,
    Int(i64),
    Ident(String),
    List(Vec<Value>),
    Block(Vec<Attr>),
    /// `S1 { pi1_injective: true }`
    Tagged(String, Vec<Attr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stable {
    pub cocycle: String,
    pub degrees: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    /// `Sphere[2]`
    Indexed(String, u64),
    Double(Box<Expr>),
    ConnSum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    Disjoint(Box<Expr>, Box<Expr>),
    Reverse(Box<Expr>),
    Glue {
        left: Box<Expr>,
        left_component: usize,
        right: Box<Expr>,
        right_component: usize,
        map: Option<Vec<(usize, usize)>>,
    },
    Cover {
        base: Box<Expr>,
        cocycle: String,
        degree: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
}

impl Op {
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Eq => "==",
            Op::Ne => "!=",
            Op::Le => "<=",
            Op::Ge => ">=",
            Op::Lt => "<",
            Op::Gt => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub func: String,
    pub arg: String,
    pub op: Op,
    pub expected: Expected,
}

/// Right-hand side of an assertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Number(Q),
    Inf,
    Interval { lo: Q, strict: bool, hi: Option<Q> },
    Tuple(Vec<Q>),
    Ident(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CobDef {
    Explicit {
        body: String,
        incoming: Vec<usize>,
        outgoing: Vec<usize>,
    },
    Word(Word),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    Name(String),
    /// `f ; g`: first `f`, then `g`.
    Compose(Box<Word>, Box<Word>),
    /// `f * g`
    Tensor(Box<Word>, Box<Word>),
}

pub const FUNCS: &[&str] = &[
    "sv",
    "sv_rel",
    "isv",
    "isv_rel",
    "sisv",
    "sisv_rel",
    "chi",
    "chi_rel",
    "chi_functor",
    "sv_functor",
    "reinhart",
    "gromov",
];

pub const QUERIES: &[&str] = &[
    "sv",
    "sv_rel",
    "isv",
    "isv_rel",
    "sisv",
    "sisv_rel",
    "chi",
    "chi_rel",
    "gromov",
    "reinhart",
    "obstruction",
];

/// Attribute keys of `manifold` blocks: the description fields, plus the
/// triangulation source.
pub const KEYS: &[&str] = &[
    "dim",
    "closed",
    "oriented",
    "connected",
    "aspherical",
    "boundary",
    "amenable",
    "residually_finite",
    "hyperbolic_group",
    "lex",
    "boundedly_acyclic",
    "amcat_upper",
    "self_map_degree",
    "hyperbolic",
    "negative_curvature",
    "locally_symmetric",
    "s1_action",
    "f_structure",
    "affine_translation",
    "graph_manifold",
    "mapping_torus",
    "co_amenable_subcomplex",
    "relative_amenable_cover",
    "fibre",
    "signature",
    "chi",
    "chi_rel",
    "triangulation",
];

pub const BOUNDARY_KEYS: &[&str] = &["pi1_injective", "pi1_surjective", "aspherical"];

pub const FIBRE_KEYS: &[&str] = &["fiber", "base"];
