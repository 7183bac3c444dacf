//! Serializable description of expressions, moves and derivations.
//! Indices in scripts are 1-based.

use serde::{Deserialize, Serialize};

/// A scalar function of p. Pair indices refer to p_ij = p_i − p_j.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "snake_case")]
pub enum ScalarFn {
    Const { value: String },
    /// [m]!
    QFact { m: usize },
    /// q^{e/n}; needs the n-th root of q.
    RootPow { e: i64 },
    /// q^{e·p_ij}
    QPow { i: usize, j: usize, e: i64 },
    /// f(p_ij, β_ij)
    F { i: usize, j: usize },
    Alpha { i: usize, j: usize },
    Xi { i: usize, j: usize },
    /// c^p·w^{p(p−1)/2} at p = p_ij for α_ij(p) = c·w^p.
    Phi { i: usize, j: usize },
    /// ∏_{i<j} φ_ij/f_ij
    U,
    Product { factors: Vec<ScalarFn> },
    Inverse { of: Box<ScalarFn> },
}

impl ScalarFn {
    pub fn constant(value: &str) -> Self {
        ScalarFn::Const {
            value: value.to_string(),
        }
    }

    /// True when the value does not depend on p.
    pub fn is_constant(&self) -> bool {
        match self {
            ScalarFn::Const { .. } | ScalarFn::QFact { .. } | ScalarFn::RootPow { .. } => true,
            ScalarFn::Product { factors } => factors.iter().all(ScalarFn::is_constant),
            ScalarFn::Inverse { of } => of.is_constant(),
            _ => false,
        }
    }

    pub fn inverse(self) -> Self {
        ScalarFn::Inverse { of: Box::new(self) }
    }
}

/// Diagonal matrices of p on the row side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagKind {
    /// q^{−2p_i}·π_in, with p_i the barycentric representative.
    D,
    DInv,
    K,
    KInv,
    N,
    NInv,
}

/// Constant diagonals built from the constant ε-tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstDiagKind {
    K,
    KInv,
    N,
    NInv,
}

/// One factor of a product expression. `up`/`lo` are upper and lower
/// index names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factor {
    /// a^{row}_{col}
    A { row: String, col: String },
    Det { power: i64 },
    Scalar { f: ScalarFn },
    /// E_{idx}(p)
    EpsLoDyn { idx: Vec<String> },
    /// E^{idx}(p)
    EpsUpDyn { idx: Vec<String> },
    /// ε_{idx}
    EpsLo { idx: Vec<String> },
    /// ε^{idx}
    EpsUp { idx: Vec<String> },
    /// R̂^{up1 up2}_{lo1 lo2} or its inverse, constant.
    Rhat {
        up: [String; 2],
        lo: [String; 2],
        #[serde(default)]
        inverse: bool,
    },
    /// Diagonal function of p carrying row-side names.
    Diag { up: String, lo: String, of: DiagKind },
    /// Constant diagonal carrying column-side names.
    ConstDiag { up: String, lo: String, of: ConstDiagKind },
    Delta { up: String, lo: String },
}

/// A product of factors with declared free indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExprSpec {
    pub factors: Vec<Factor>,
    #[serde(default)]
    pub free_rows: Vec<String>,
    #[serde(default)]
    pub free_cols: Vec<String>,
}

/// An element of the Hecke algebra used by intertwining moves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordSpec {
    /// g_{|i|}^{sign i} letters, left to right.
    Gens(Vec<i64>),
    /// The antisymmetrizer on the window i..=j.
    Antisym(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollapseMode {
    /// E_{⟨w|}(p)a_w ε^{|w⟩} → [n]!·det
    Definition,
    /// E_{⟨w|}(p)a_w → det·ε_{⟨w|}
    Bra,
    /// a_w ε^{|w⟩} → E^{|w⟩}(p)·det
    Ket,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Moves a word from the row side to the column side.
    IntertwineLr { word: WordSpec },
    /// Moves a word from the column side to the row side.
    IntertwineRl { word: WordSpec },
    /// Brings pending functions to the far left; all of them when `pending`
    /// is absent.
    ScalarShift {
        #[serde(default)]
        pending: Option<usize>,
    },
    /// Collapses the n slots starting at slot `start`.
    EpsCollapse { mode: CollapseMode, start: usize },
    /// Moves the det power at one position to an adjacent position.
    DetCommute { from: usize, to: usize },
    Simplify,
}

impl Move {
    pub fn kind(&self) -> &'static str {
        match self {
            Move::IntertwineLr { .. } => "IntertwineLR",
            Move::IntertwineRl { .. } => "IntertwineRL",
            Move::ScalarShift { .. } => "ScalarShift",
            Move::EpsCollapse { .. } => "EpsCollapse",
            Move::DetCommute { .. } => "DetCommute",
            Move::Simplify => "Simplify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub name: String,
    #[serde(default)]
    pub requires: Vec<String>,
    #[serde(default)]
    pub provides: Vec<String>,
    #[serde(default)]
    pub needs_root: bool,
    pub start: ExprSpec,
    pub moves: Vec<Move>,
    pub end: ExprSpec,
    /// Moves applied to the claimed end before the comparison.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub end_moves: Vec<Move>,
}

impl Derivation {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("derivations serialize")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Parse(e.to_string()))
    }
}
