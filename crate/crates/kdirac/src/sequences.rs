//! Explicit operator sequences for k = 2 and k = 3, their symbols, and the
//! machinery used to decide whether compositions vanish.
//!
//! Each operator is a table of terms `output += coeff * word * input` where the
//! word is a product of directional Dirac operators (and, for k = 2, one
//! rotational field).  The tables ship in two editions: [`Edition::Given`]
//! encodes them verbatim as transcribed from their source, while
//! [`Edition::Amended`] applies three single-index corrections under which
//! every composition vanishes identically.  The [`cw`] submodule implements the
//! constant-coefficient word calculus that certifies those identities and
//! drives the repair-suggestion search.

use crate::clifford::{blade_mul, CliffordElement};
use crate::flatmodel::{apply_dirac, apply_xi_second, is_q_pullback, Poly};
use crate::matrix::ExactMatrix;
use crate::scalar::FieldScalar;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Which edition of the operator tables to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Edition {
    /// The tables exactly as transcribed.
    Given,
    /// The tables with the three single-index corrections applied.
    Amended,
}

impl fmt::Display for Edition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edition::Given => write!(f, "given"),
            Edition::Amended => write!(f, "amended"),
        }
    }
}

impl FromStr for Edition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "given" => Ok(Edition::Given),
            "amended" => Ok(Edition::Amended),
            other => Err(format!("unknown table edition '{other}' (expected given|amended)")),
        }
    }
}

/// Errors from operator construction and application.
#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("no operator D{index} in the k={k} sequence")]
    BadOperatorIndex { k: u16, index: usize },
    #[error("unsupported parameters k={k}, n={n}: need k in {{2,3}}, n even, n >= 2k, n+2 not a perfect square")]
    BadParameters { k: u16, n: u16 },
    #[error("operator {name} expects {expected} input components, got {got}")]
    ComponentMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("operator {name} is only defined on sections pulled back from the first factor (no y variables)")]
    NotQPullback { name: String },
    #[error("composition words must be products of Dirac factors, found {found}")]
    NonDiracWord { found: String },
}

/// One factor of an operator word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WordAtom {
    /// The i-th directional Dirac operator (1-based).
    Dirac(u16),
    /// The rotational invariant field in the second slot, indices i < j.
    XiSecond(u16, u16),
}

impl fmt::Display for WordAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordAtom::Dirac(i) => write!(f, "d{i}"),
            WordAtom::XiSecond(i, j) => write!(f, "xi{i}{j}"),
        }
    }
}

/// A single term `outputs[out] += coeff * word * inputs[input]`.
#[derive(Debug, Clone)]
pub struct Term {
    pub out: usize,
    pub coeff: FieldScalar,
    pub word: Vec<WordAtom>,
    pub input: usize,
}

/// An operator given by an explicit table of terms.
#[derive(Debug, Clone)]
pub struct OperatorDef {
    pub name: String,
    pub k: u16,
    pub inputs: Vec<&'static str>,
    pub outputs: Vec<&'static str>,
    pub terms: Vec<Term>,
}

impl OperatorDef {
    fn out_index(&self, label: &str) -> usize {
        self.outputs
            .iter()
            .position(|l| *l == label)
            .unwrap_or_else(|| panic!("{}: unknown output {label}", self.name))
    }

    fn in_index(&self, label: &str) -> usize {
        self.inputs
            .iter()
            .position(|l| *l == label)
            .unwrap_or_else(|| panic!("{}: unknown input {label}", self.name))
    }

    /// Renders the full term list, one line per term, in table order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for t in &self.terms {
            let word = if t.word.is_empty() {
                "1".to_string()
            } else {
                t.word
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            s.push_str(&format!(
                "{} += {} * {} {}\n",
                self.outputs[t.out], t.coeff, word, self.inputs[t.input]
            ));
        }
        s
    }

    /// Length of the longest word in the table (the operator's order).
    pub fn order(&self) -> usize {
        self.terms.iter().map(|t| t.word.len()).max().unwrap_or(0)
    }

    fn render_term(&self, t: &Term) -> String {
        let word = if t.word.is_empty() {
            "1".to_string()
        } else {
            t.word
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("{} * {} {}", t.coeff, word, self.inputs[t.input])
    }
}

struct Build {
    def: OperatorDef,
    m: u32,
}

impl Build {
    fn new(name: &str, k: u16, m: u32, inputs: &[&'static str], outputs: &[&'static str]) -> Self {
        Build {
            def: OperatorDef {
                name: name.to_string(),
                k,
                inputs: inputs.to_vec(),
                outputs: outputs.to_vec(),
                terms: Vec::new(),
            },
            m,
        }
    }

    /// Adds `out += (num/den) * d_{word[0]} ... d_{word[last]} input`.
    fn t(&mut self, out: &str, num: i64, den: i64, word: &[u16], input: &str) {
        let coeff = FieldScalar::from_ratio(num, den, self.m);
        self.ts(out, coeff, &word.iter().map(|&i| WordAtom::Dirac(i)).collect::<Vec<_>>(), input);
    }

    fn ts(&mut self, out: &str, coeff: FieldScalar, word: &[WordAtom], input: &str) {
        let term = Term {
            out: self.def.out_index(out),
            coeff,
            word: word.to_vec(),
            input: self.def.in_index(input),
        };
        self.def.terms.push(term);
    }
}

fn check_params(k: u16, n: u16) -> Result<u32, SequenceError> {
    let ok = (k == 2 || k == 3) && n.is_multiple_of(2) && n >= 2 * k;
    let m = u32::from(n) + 2;
    let root = (m as f64).sqrt().round() as u32;
    if !ok || root * root == m {
        return Err(SequenceError::BadParameters { k, n });
    }
    Ok(m)
}

/// `2/sqrt(m)` as an exact field element.
fn two_over_root(m: u32) -> FieldScalar {
    FieldScalar::sqrt_multiple(2, m as i64, m)
}

/// Compact spec of one table term `coeff/d * d_a d_b input` (d fixed per table).
type WordSpec = (i64, u16, u16, &'static str);

/// Builds the index-th operator (1-based) of the k-Dirac sequence at rank n.
pub fn operator_def(k: u16, index: usize, n: u16, edition: Edition) -> Result<OperatorDef, SequenceError> {
    let m = check_params(k, n)?;
    match (k, index) {
        (2, 1) => {
            let mut b = Build::new("D1", 2, m, &["phi"], &["e1", "e2"]);
            b.t("e1", 1, 1, &[1], "phi");
            b.t("e2", 1, 1, &[2], "phi");
            Ok(b.def)
        }
        (2, 2) => {
            let mut b = Build::new("D2", 2, m, &["e1", "e2"], &["c1", "c2"]);
            b.t("c1", 1, 1, &[1, 1], "e2");
            b.t("c1", -1, 1, &[2, 1], "e1");
            b.ts("c1", two_over_root(m), &[WordAtom::XiSecond(1, 2)], "e1");
            b.t("c2", 1, 1, &[1, 2], "e2");
            b.t("c2", -1, 1, &[2, 2], "e1");
            b.ts("c2", two_over_root(m), &[WordAtom::XiSecond(1, 2)], "e2");
            Ok(b.def)
        }
        (2, 3) => {
            let mut b = Build::new("D3", 2, m, &["c1", "c2"], &["t"]);
            b.ts("t", two_over_root(m), &[WordAtom::Dirac(1)], "c2");
            b.ts("t", two_over_root(m).checked_mul(&FieldScalar::from_int(-1, m)).unwrap(), &[WordAtom::Dirac(2)], "c1");
            Ok(b.def)
        }
        (3, 1) => {
            let mut b = Build::new("D1", 3, m, &["phi"], &["e1", "e2", "e3"]);
            for i in 1..=3u16 {
                b.t(&format!("e{i}"), 1, 1, &[i], "phi");
            }
            Ok(b.def)
        }
        (3, 2) => {
            let ins = ["e1", "e2", "e3"];
            let outs = ["h12", "h21", "h13", "h31", "h23", "h32", "w1", "w2"];
            let mut b = Build::new("D2", 3, m, &ins, &outs);
            for (i, j) in [(1u16, 2u16), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)] {
                let h = format!("h{i}{j}");
                b.t(&h, 1, 1, &[i, i], &format!("e{j}"));
                b.t(&h, -1, 1, &[j, i], &format!("e{i}"));
            }
            b.t("w1", 1, 1, &[2, 3], "e1");
            b.t("w1", 1, 1, &[3, 2], "e1");
            b.t("w1", -1, 1, &[1, 3], "e2");
            b.t("w1", -1, 1, &[1, 2], "e3");
            b.t("w2", 1, 1, &[1, 3], "e2");
            b.t("w2", 1, 1, &[3, 1], "e2");
            b.t("w2", -1, 1, &[2, 3], "e1");
            b.t("w2", -1, 1, &[2, 1], "e3");
            Ok(b.def)
        }
        (3, 3) => {
            let ins = ["h12", "h21", "h13", "h31", "h23", "h32", "w1", "w2"];
            let outs = ["v220", "v202", "v022", "v211", "v121", "v112"];
            let mut b = Build::new("D3", 3, m, &ins, &outs);
            b.t("v220", -1, 2, &[1], "h21");
            b.t("v220", -1, 2, &[2], "h12");
            b.t("v202", -1, 2, &[1], "h31");
            b.t("v202", -1, 2, &[3], "h13");
            b.t("v022", -1, 2, &[3], "h23");
            b.t("v022", -1, 2, &[2], "h32");
            b.t("v211", -1, 4, &[2], "h13");
            b.t("v211", -1, 4, &[3], "h12");
            b.t("v211", -1, 4, &[1], "w1");
            b.t("v121", -1, 4, &[1], "h23");
            b.t("v121", -1, 4, &[3], "h21");
            b.t("v121", -1, 4, &[2], "w2");
            b.t("v112", 1, 4, &[2], "h31");
            b.t("v112", 1, 4, &[1], "h32");
            b.t("v112", -1, 4, &[3], "w1");
            b.t("v112", -1, 4, &[3], "w2");
            Ok(b.def)
        }
        (3, 4) => {
            let ins = ["h12", "h21", "h13", "h31", "h23", "h32", "w1", "w2"];
            let outs = ["w311", "w131", "w113", "w221", "w212", "w122"];
            let mut b = Build::new("D4", 3, m, &ins, &outs);
            let rows: &[(&str, &[WordSpec])] = &[
                ("w311", &[
                    (2, 1, 1, "w1"), (4, 1, 1, "w2"),
                    (4, 2, 1, "h13"), (2, 1, 2, "h13"),
                    (-2, 1, 3, "h12"), (-4, 3, 1, "h12"),
                ]),
                ("w131", &[
                    (-4, 2, 2, "w1"), (-2, 2, 2, "w2"),
                    (2, 2, 3, "h21"), (4, 3, 2, "h21"),
                    (-2, 2, 1, "h23"), (-4, 1, 2, "h23"),
                ]),
                ("w113", &[
                    (2, 3, 3, "w1"), (-2, 3, 3, "w2"),
                    (2, 3, 1, "h32"), (4, 1, 3, "h32"),
                    (-2, 3, 2, "h31"), (-4, 2, 3, "h31"),
                ]),
                ("w221", &[
                    (1, 1, 2, "w2"), (-3, 1, 1, "h23"),
                    (-1, 2, 1, "w1"), (3, 2, 2, "h13"),
                    (1, 1, 3, "h21"), (2, 3, 1, "h21"),
                    (-1, 2, 3, "h12"), (-2, 3, 2, "h12"),
                ]),
                ("w212", &[
                    (1, 1, 3, "w1"), (1, 1, 3, "w2"),
                    (3, 1, 1, "h32"), (1, 3, 1, "w1"),
                    (-3, 3, 3, "h12"), (-1, 1, 2, "h31"),
                    (-2, 2, 1, "h31"), (1, 3, 2, "h13"),
                    (2, 2, 3, "h13"),
                ]),
                ("w122", &[
                    (-1, 2, 3, "w1"), (-1, 2, 3, "w2"),
                    (-3, 2, 2, "h31"), (-1, 3, 2, "w2"),
                    (3, 3, 3, "h21"), (1, 2, 1, "h32"),
                    (2, 1, 2, "h32"), (-1, 3, 1, "h23"),
                    (-2, 1, 3, "h23"),
                ]),
            ];
            for (out, terms) in rows {
                for &(c, a, bb, lab) in *terms {
                    b.t(out, c, 8, &[a, bb], lab);
                }
            }
            Ok(b.def)
        }
        (3, 5) => {
            let ins = ["w311", "w131", "w113", "w221", "w212", "w122"];
            let outs = ["hs12", "hs21", "hs13", "hs31", "hs23", "hs32", "ws1", "ws2"];
            let mut b = Build::new("D5", 3, m, &ins, &outs);
            let rows: &[(&str, u16, &str, i64)] = &[
                ("hs12", 3, "w122", 1), ("hs12", 2, "w113", -1),
                ("hs21", 3, "w212", 1), ("hs21", 1, "w113", -1),
                ("hs13", 2, "w122", 1), ("hs13", 3, "w131", -1),
                ("hs31", 2, "w221", 1), ("hs31", 1, "w131", -1),
                ("hs23", 1, "w212", 1), ("hs23", 3, "w311", -1),
                ("hs32", 1, "w221", 1), ("hs32", 2, "w311", -1),
                ("ws1", 1, "w122", 1), ("ws1", 3, "w221", -1),
                ("ws2", 2, "w212", 1), ("ws2", 3, "w221", -1),
            ];
            for &(out, a, lab, sgn) in rows {
                b.t(out, sgn, 24, &[a], lab);
            }
            Ok(b.def)
        }
        (3, 6) => {
            let ins = ["v220", "v202", "v022", "v211", "v121", "v112"];
            let outs = ["hs12", "hs21", "hs13", "hs31", "hs23", "hs32", "ws1", "ws2"];
            let mut b = Build::new("D6", 3, m, &ins, &outs);
            // pair(c, a, b, lab) stands for c*(d_a d_b) + 2c*(d_b d_a), all over 48.
            let pair = |b: &mut Build, out: &str, c: i64, x: u16, y: u16, lab: &str| {
                b.t(out, c, 48, &[x, y], lab);
                b.t(out, 2 * c, 48, &[y, x], lab);
            };
            pair(&mut b, "hs12", -1, 3, 1, "v022");
            pair(&mut b, "hs12", -1, 3, 2, "v112");
            b.t("hs12", 3, 48, &[3, 3], "v121");
            pair(&mut b, "hs21", 1, 3, 2, "v202");
            pair(&mut b, "hs21", 1, 3, 1, "v112");
            b.t("hs21", -3, 48, &[3, 3], "v211");
            b.t("hs13", 2, 48, &[1, 2], "v022");
            b.t("hs13", 1, 48, &[2, 1], "v022");
            pair(&mut b, "hs13", -1, 2, 3, "v121");
            b.t("hs13", 3, 48, &[2, 2], "v112");
            pair(&mut b, "hs31", -1, 2, 3, "v220");
            pair(&mut b, "hs31", 1, 2, 1, "v121");
            b.t("hs31", 3, 48, &[2, 2], "v211");
            pair(&mut b, "hs23", -1, 1, 2, "v202");
            pair(&mut b, "hs23", 1, 1, 3, "v211");
            b.t("hs23", -3, 48, &[1, 1], "v112");
            pair(&mut b, "hs32", 1, 1, 3, "v220");
            pair(&mut b, "hs32", -1, 1, 2, "v211");
            b.t("hs32", -3, 48, &[1, 1], "v121");
            b.t("ws1", 1, 48, &[1, 1], "v022");
            b.t("ws1", -2, 48, &[2, 2], "v202");
            b.t("ws1", 1, 48, &[3, 3], "v220");
            b.t("ws1", -1, 48, &[1, 2], "v112");
            b.t("ws1", -1, 48, &[3, 1], "v121");
            match edition {
                Edition::Given => b.t("ws1", -1, 48, &[3, 1], "v121"),
                Edition::Amended => b.t("ws1", -1, 48, &[1, 3], "v121"),
            }
            b.t("ws1", 1, 48, &[3, 2], "v211");
            b.t("ws2", 2, 48, &[1, 1], "v022");
            b.t("ws2", -1, 48, &[2, 2], "v202");
            b.t("ws2", -1, 48, &[3, 3], "v220");
            b.t("ws2", 1, 48, &[2, 1], "v112");
            b.t("ws2", -1, 48, &[3, 1], "v121");
            b.t("ws2", 1, 48, &[3, 2], "v211");
            b.t("ws2", 1, 48, &[2, 3], "v211");
            Ok(b.def)
        }
        (3, 7) => {
            let ins = ["hs12", "hs21", "hs13", "hs31", "hs23", "hs32", "ws1", "ws2"];
            let outs = ["es1", "es2", "es3"];
            let mut b = Build::new("D7", 3, m, &ins, &outs);
            b.t("es1", 1, 1, &[2, 2], "hs21");
            b.t("es1", -1, 1, &[1, 2], "hs12");
            b.t("es1", 1, 1, &[3, 3], "hs31");
            match edition {
                Edition::Given => b.t("es1", -1, 1, &[3, 1], "hs13"),
                Edition::Amended => b.t("es1", -1, 1, &[1, 3], "hs13"),
            }
            b.t("es1", 1, 1, &[2, 3], "ws1");
            b.t("es1", 1, 1, &[3, 2], "ws1");
            b.t("es1", -1, 1, &[3, 2], "ws2");
            match edition {
                Edition::Given => b.t("es2", 1, 1, &[2, 2], "hs12"),
                Edition::Amended => b.t("es2", 1, 1, &[1, 1], "hs12"),
            }
            b.t("es2", -1, 1, &[2, 1], "hs21");
            b.t("es2", 1, 1, &[3, 3], "hs32");
            b.t("es2", -1, 1, &[2, 3], "hs23");
            b.t("es2", 1, 1, &[1, 3], "ws2");
            b.t("es2", 1, 1, &[3, 1], "ws2");
            b.t("es2", -1, 1, &[3, 1], "ws1");
            b.t("es3", 1, 1, &[1, 1], "hs13");
            b.t("es3", -1, 1, &[3, 1], "hs31");
            b.t("es3", 1, 1, &[2, 2], "hs23");
            b.t("es3", -1, 1, &[3, 2], "hs32");
            b.t("es3", -1, 1, &[2, 1], "ws1");
            b.t("es3", -1, 1, &[1, 2], "ws2");
            Ok(b.def)
        }
        (3, 8) => {
            let mut b = Build::new("D8", 3, m, &["es1", "es2", "es3"], &["out"]);
            for i in 1..=3u16 {
                b.t("out", 1, 1, &[i], &format!("es{i}"));
            }
            Ok(b.def)
        }
        _ => Err(SequenceError::BadOperatorIndex { k, index }),
    }
}

/// Applies an operator table to a section, one polynomial per input component.
pub fn apply_operator(def: &OperatorDef, section: &[Poly]) -> Result<Vec<Poly>, SequenceError> {
    if section.len() != def.inputs.len() {
        return Err(SequenceError::ComponentMismatch {
            name: def.name.clone(),
            expected: def.inputs.len(),
            got: section.len(),
        });
    }
    if def.k == 3 && !is_q_pullback(section) {
        return Err(SequenceError::NotQPullback {
            name: def.name.clone(),
        });
    }
    let n = section
        .iter()
        .map(|p| p.generators())
        .max()
        .unwrap_or(0);
    let m = section.first().map(|p| p.radicand()).unwrap_or(6);
    let mut out: Vec<Poly> = (0..def.outputs.len()).map(|_| Poly::zero(n, m)).collect();
    for t in &def.terms {
        let mut p = section[t.input].clone();
        for atom in t.word.iter().rev() {
            p = match atom {
                WordAtom::Dirac(i) => apply_dirac(*i, &p, def.k),
                WordAtom::XiSecond(i, j) => apply_xi_second(*i, *j, &p),
            };
        }
        out[t.out] = out[t.out].add(&p.scale(&t.coeff));
    }
    Ok(out)
}

/// How a composition in the sequence is formed from the numbered operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompKind {
    /// Apply the listed operators left to right.
    Chain(&'static [usize]),
    /// The middle square of the k = 3 diagram: D6 after D3 plus D5 after D4.
    MidSquare,
}

/// A composition that is expected to vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Composition {
    pub id: &'static str,
    pub kind: CompKind,
}

/// The compositions verified for a given k, in diagram order.
pub fn compositions(k: u16) -> Vec<Composition> {
    match k {
        2 => vec![
            Composition { id: "D2D1", kind: CompKind::Chain(&[1, 2]) },
            Composition { id: "D3D2", kind: CompKind::Chain(&[2, 3]) },
            Composition { id: "D3D2D1", kind: CompKind::Chain(&[1, 2, 3]) },
        ],
        3 => vec![
            Composition { id: "D2D1", kind: CompKind::Chain(&[1, 2]) },
            Composition { id: "D3D2", kind: CompKind::Chain(&[2, 3]) },
            Composition { id: "D4D2", kind: CompKind::Chain(&[2, 4]) },
            Composition { id: "D6D3+D5D4", kind: CompKind::MidSquare },
            Composition { id: "D7D6", kind: CompKind::Chain(&[6, 7]) },
            Composition { id: "D7D5", kind: CompKind::Chain(&[5, 7]) },
            Composition { id: "D8D7", kind: CompKind::Chain(&[7, 8]) },
        ],
        _ => vec![],
    }
}

/// A full operator sequence at fixed k, n and edition.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    k: u16,
    n: u16,
    edition: Edition,
    ops: Vec<OperatorDef>,
}

impl OperatorSet {
    pub fn new(k: u16, n: u16, edition: Edition) -> Result<Self, SequenceError> {
        check_params(k, n)?;
        let count = if k == 2 { 3 } else { 8 };
        let ops = (1..=count)
            .map(|i| operator_def(k, i, n, edition))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OperatorSet { k, n, edition, ops })
    }

    pub fn k(&self) -> u16 {
        self.k
    }

    pub fn n(&self) -> u16 {
        self.n
    }

    pub fn edition(&self) -> Edition {
        self.edition
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// The index-th operator, 1-based.
    pub fn op(&self, index: usize) -> &OperatorDef {
        &self.ops[index - 1]
    }

    /// Input labels consumed by a composition.
    pub fn composition_inputs(&self, comp: &Composition) -> &[&'static str] {
        match comp.kind {
            CompKind::Chain(list) => &self.op(list[0]).inputs,
            CompKind::MidSquare => &self.op(3).inputs,
        }
    }

    /// Output labels produced by a composition.
    pub fn composition_outputs(&self, comp: &Composition) -> &[&'static str] {
        match comp.kind {
            CompKind::Chain(list) => &self.op(*list.last().unwrap()).outputs,
            CompKind::MidSquare => &self.op(6).outputs,
        }
    }

    /// Evaluates a composition on a section.
    pub fn apply_composition(
        &self,
        comp: &Composition,
        section: &[Poly],
    ) -> Result<Vec<Poly>, SequenceError> {
        match comp.kind {
            CompKind::Chain(list) => {
                let mut cur = section.to_vec();
                for &i in list {
                    cur = apply_operator(self.op(i), &cur)?;
                }
                Ok(cur)
            }
            CompKind::MidSquare => {
                let a = apply_operator(self.op(6), &apply_operator(self.op(3), section)?)?;
                let b = apply_operator(self.op(5), &apply_operator(self.op(4), section)?)?;
                Ok(a.iter().zip(&b).map(|(x, y)| x.add(y)).collect())
            }
        }
    }

    fn with_tweak(&self, op_index: usize, term_index: usize, tweak: &Tweak) -> OperatorSet {
        let mut copy = self.clone();
        let term = &mut copy.ops[op_index - 1].terms[term_index];
        match tweak {
            Tweak::Word(w) => term.word = w.clone(),
            Tweak::Input(i) => term.input = *i,
        }
        copy
    }
}

pub mod cw {
    //! Normal forms for constant-coefficient words in the directional Dirac
    //! operators.  On sections pulled back from the first factor the operators
    //! satisfy `d_i d_j + d_j d_i = -2 L_ij` with every `L_ij` central, so each
    //! word reduces to a combination of strictly increasing square-free words
    //! times a monomial in the `L_ij`.  A composition of table operators is
    //! identically zero on such sections exactly when its normal form is zero.

    use num::{BigRational, One, Zero};
    use std::collections::BTreeMap;
    use std::fmt;

    /// Monomial in the central operators, as sorted `(i <= j, exponent)` pairs.
    pub type DeltaMono = Vec<((u16, u16), u32)>;

    fn delta_mul(delta: &DeltaMono, i: u16, j: u16) -> DeltaMono {
        let key = if i <= j { (i, j) } else { (j, i) };
        let mut out = delta.clone();
        match out.binary_search_by(|entry| entry.0.cmp(&key)) {
            Ok(pos) => out[pos].1 += 1,
            Err(pos) => out.insert(pos, (key, 1)),
        }
        out
    }

    /// Polynomial in reduced words and central monomials, exact coefficients.
    #[derive(Debug, Clone, PartialEq, Eq, Default)]
    pub struct CwPoly {
        terms: BTreeMap<(Vec<u16>, DeltaMono), BigRational>,
    }

    fn reduce_into(
        word: Vec<u16>,
        delta: DeltaMono,
        coeff: BigRational,
        out: &mut BTreeMap<(Vec<u16>, DeltaMono), BigRational>,
    ) {
        if coeff.is_zero() {
            return;
        }
        for t in 0..word.len().saturating_sub(1) {
            let (a, b) = (word[t], word[t + 1]);
            if a < b {
                continue;
            }
            if a == b {
                let mut shorter = word.clone();
                shorter.drain(t..t + 2);
                reduce_into(shorter, delta_mul(&delta, a, a), -coeff, out);
                return;
            }
            let mut swapped = word.clone();
            swapped.swap(t, t + 1);
            let mut cut = word;
            cut.drain(t..t + 2);
            reduce_into(swapped, delta.clone(), -coeff.clone(), out);
            reduce_into(
                cut,
                delta_mul(&delta, b, a),
                BigRational::from_integer((-2).into()) * coeff,
                out,
            );
            return;
        }
        let entry = out.entry((word, delta)).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            // Leave removal to the caller-facing constructors.
        }
    }

    impl CwPoly {
        pub fn zero() -> Self {
            CwPoly::default()
        }

        /// A single word `coeff * d_{indices[0]} ... d_{indices[last]}`, reduced.
        pub fn word(indices: &[u16], coeff: BigRational) -> Self {
            let mut terms = BTreeMap::new();
            reduce_into(indices.to_vec(), Vec::new(), coeff, &mut terms);
            terms.retain(|_, c| !c.is_zero());
            CwPoly { terms }
        }

        pub fn is_zero(&self) -> bool {
            self.terms.is_empty()
        }

        pub fn add(&self, other: &CwPoly) -> CwPoly {
            let mut terms = self.terms.clone();
            for (key, c) in &other.terms {
                let entry = terms.entry(key.clone()).or_insert_with(BigRational::zero);
                *entry += c;
            }
            terms.retain(|_, c| !c.is_zero());
            CwPoly { terms }
        }

        pub fn scale(&self, factor: &BigRational) -> CwPoly {
            if factor.is_zero() {
                return CwPoly::zero();
            }
            let terms = self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * factor))
                .collect();
            CwPoly { terms }
        }

        /// Product, reducing the concatenated words.  Central monomials multiply.
        pub fn mul(&self, other: &CwPoly) -> CwPoly {
            let mut terms = BTreeMap::new();
            for ((w1, d1), c1) in &self.terms {
                for ((w2, d2), c2) in &other.terms {
                    let mut word = w1.clone();
                    word.extend_from_slice(w2);
                    let mut delta = d1.clone();
                    for &((i, j), e) in d2 {
                        for _ in 0..e {
                            delta = delta_mul(&delta, i, j);
                        }
                    }
                    reduce_into(word, delta, c1 * c2, &mut terms);
                }
            }
            terms.retain(|_, c| !c.is_zero());
            CwPoly { terms }
        }

        pub fn one() -> Self {
            let mut terms = BTreeMap::new();
            terms.insert((Vec::new(), Vec::new()), BigRational::one());
            CwPoly { terms }
        }
    }

    impl fmt::Display for CwPoly {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.terms.is_empty() {
                return write!(f, "0");
            }
            let mut first = true;
            for ((word, delta), coeff) in &self.terms {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "{coeff}")?;
                for ((i, j), e) in delta {
                    if *e == 1 {
                        write!(f, "*L{i}{j}")?;
                    } else {
                        write!(f, "*L{i}{j}^{e}")?;
                    }
                }
                for i in word {
                    write!(f, "*d{i}")?;
                }
            }
            Ok(())
        }
    }

    /// A matrix of word polynomials between labeled components.
    #[derive(Debug, Clone)]
    pub struct CwMatrix {
        pub outputs: Vec<&'static str>,
        pub inputs: Vec<&'static str>,
        entries: BTreeMap<(usize, usize), CwPoly>,
    }

    impl CwMatrix {
        pub fn new(outputs: Vec<&'static str>, inputs: Vec<&'static str>) -> Self {
            CwMatrix {
                outputs,
                inputs,
                entries: BTreeMap::new(),
            }
        }

        pub fn add_entry(&mut self, out: usize, input: usize, poly: CwPoly) {
            if poly.is_zero() {
                return;
            }
            let slot = self
                .entries
                .entry((out, input))
                .or_insert_with(CwPoly::zero);
            let sum = slot.add(&poly);
            if sum.is_zero() {
                self.entries.remove(&(out, input));
            } else {
                *slot = sum;
            }
        }

        pub fn entry(&self, out: usize, input: usize) -> CwPoly {
            self.entries
                .get(&(out, input))
                .cloned()
                .unwrap_or_else(CwPoly::zero)
        }

        pub fn is_zero(&self) -> bool {
            self.entries.is_empty()
        }

        /// Nonzero entries as (output label, input label, normal form).
        pub fn nonzero_entries(&self) -> Vec<(String, String, String)> {
            self.entries
                .iter()
                .map(|((o, i), p)| {
                    (
                        self.outputs[*o].to_string(),
                        self.inputs[*i].to_string(),
                        p.to_string(),
                    )
                })
                .collect()
        }

        pub fn nonzero_count(&self) -> usize {
            self.entries.len()
        }

        /// Matrix product `self * other` (apply `other` first).
        pub fn mul(&self, other: &CwMatrix) -> CwMatrix {
            assert_eq!(self.inputs, other.outputs, "composition shape mismatch");
            let mut out = CwMatrix::new(self.outputs.clone(), other.inputs.clone());
            for ((o, mid), left) in &self.entries {
                for ((mid2, i), right) in &other.entries {
                    if mid == mid2 {
                        out.add_entry(*o, *i, left.mul(right));
                    }
                }
            }
            out
        }

        pub fn add(&self, other: &CwMatrix) -> CwMatrix {
            assert_eq!(self.outputs, other.outputs);
            assert_eq!(self.inputs, other.inputs);
            let mut out = self.clone();
            for ((o, i), p) in &other.entries {
                out.add_entry(*o, *i, p.clone());
            }
            out
        }
    }
}

/// Lifts a table to the word calculus.  Fails on rotational factors or
/// irrational coefficients, which only occur in the k = 2 tables.
pub fn operator_cw(def: &OperatorDef) -> Result<cw::CwMatrix, SequenceError> {
    let mut mat = cw::CwMatrix::new(def.outputs.clone(), def.inputs.clone());
    for t in &def.terms {
        if !t.coeff.is_rational() {
            return Err(SequenceError::NonDiracWord {
                found: t.coeff.to_string(),
            });
        }
        let mut indices = Vec::with_capacity(t.word.len());
        for atom in &t.word {
            match atom {
                WordAtom::Dirac(i) => indices.push(*i),
                other => {
                    return Err(SequenceError::NonDiracWord {
                        found: other.to_string(),
                    })
                }
            }
        }
        mat.add_entry(t.out, t.input, cw::CwPoly::word(&indices, t.coeff.a().clone()));
    }
    Ok(mat)
}

/// Normal form of a composition in the word calculus.
pub fn composition_cw(set: &OperatorSet, comp: &Composition) -> Result<cw::CwMatrix, SequenceError> {
    match comp.kind {
        CompKind::Chain(list) => {
            let mut acc = operator_cw(set.op(list[0]))?;
            for &i in &list[1..] {
                acc = operator_cw(set.op(i))?.mul(&acc);
            }
            Ok(acc)
        }
        CompKind::MidSquare => {
            let a = operator_cw(set.op(6))?.mul(&operator_cw(set.op(3))?);
            let b = operator_cw(set.op(5))?.mul(&operator_cw(set.op(4))?);
            Ok(a.add(&b))
        }
    }
}

/// A single-index substitution that repairs part of a failing composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairSuggestion {
    /// Operator holding the suspect term, e.g. "D6".
    pub operator: String,
    /// Output component of that term.
    pub output: String,
    /// Input component of that term.
    pub input: String,
    /// The term as it stands in the table.
    pub term: String,
    /// The substitution, e.g. "word d3 d1 -> d1 d3" or "input v121 -> v112".
    pub replacement: String,
    /// What the substitution fixes: the whole check or a single entry.
    pub scope: String,
}

impl fmt::Display for RepairSuggestion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{} <- {}]: {} ({})",
            self.operator, self.output, self.input, self.replacement, self.scope
        )
    }
}

#[derive(Debug, Clone)]
enum Tweak {
    Word(Vec<WordAtom>),
    Input(usize),
}

fn word_candidates(len: usize, k: u16, original: &[WordAtom]) -> Vec<Vec<WordAtom>> {
    let mut out = Vec::new();
    let count = (k as usize).pow(len as u32);
    for code in 0..count {
        let mut word = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            word.push(WordAtom::Dirac((c % k as usize) as u16 + 1));
            c /= k as usize;
        }
        if word != original {
            out.push(word);
        }
    }
    out
}

fn render_word(word: &[WordAtom]) -> String {
    word.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Searches single-index substitutions (one word or one input label of one
/// term) that repair a failing composition.  Substitutions that zero the whole
/// normal form are reported first; otherwise, per-entry repairs that do not
/// enlarge the set of failing entries.
pub fn search_repairs(set: &OperatorSet, comp: &Composition) -> Vec<RepairSuggestion> {
    let base = match composition_cw(set, comp) {
        Ok(m) => m,
        Err(_) => return Vec::new(),
    };
    if base.is_zero() {
        return Vec::new();
    }
    let op_indices: Vec<usize> = match comp.kind {
        CompKind::Chain(list) => list.to_vec(),
        CompKind::MidSquare => vec![3, 4, 5, 6],
    };
    let mut candidates: Vec<(usize, usize, Tweak)> = Vec::new();
    for &oi in &op_indices {
        let def = set.op(oi);
        for (ti, term) in def.terms.iter().enumerate() {
            if term.word.iter().any(|a| !matches!(a, WordAtom::Dirac(_))) {
                continue;
            }
            for word in word_candidates(term.word.len(), set.k(), &term.word) {
                candidates.push((oi, ti, Tweak::Word(word)));
            }
            for inp in 0..def.inputs.len() {
                if inp != term.input {
                    candidates.push((oi, ti, Tweak::Input(inp)));
                }
            }
        }
    }
    let suggestion = |oi: usize, ti: usize, tweak: &Tweak, scope: String| {
        let def = set.op(oi);
        let term = &def.terms[ti];
        let replacement = match tweak {
            Tweak::Word(w) => format!("word {} -> {}", render_word(&term.word), render_word(w)),
            Tweak::Input(i) => format!("input {} -> {}", def.inputs[term.input], def.inputs[*i]),
        };
        RepairSuggestion {
            operator: def.name.clone(),
            output: def.outputs[term.out].to_string(),
            input: def.inputs[term.input].to_string(),
            term: def.render_term(term),
            replacement,
            scope,
        }
    };
    let mut whole: Vec<RepairSuggestion> = Vec::new();
    let mut results: Vec<(usize, usize, Tweak, cw::CwMatrix)> = Vec::new();
    for (oi, ti, tweak) in &candidates {
        let modified = set.with_tweak(*oi, *ti, tweak);
        if let Ok(m) = composition_cw(&modified, comp) {
            if m.is_zero() {
                let s = suggestion(*oi, *ti, tweak, "restores the whole check".to_string());
                if !whole.contains(&s) {
                    whole.push(s);
                }
            } else {
                results.push((*oi, *ti, tweak.clone(), m));
            }
        }
    }
    if !whole.is_empty() {
        return whole;
    }
    let mut out: Vec<RepairSuggestion> = Vec::new();
    let base_entries = base.nonzero_entries();
    for (o_lab, i_lab, _) in &base_entries {
        let o = base.outputs.iter().position(|l| l == o_lab).unwrap();
        let i = base.inputs.iter().position(|l| l == i_lab).unwrap();
        let mut found = 0;
        for (oi, ti, tweak, m) in &results {
            if m.entry(o, i).is_zero() && m.nonzero_count() < base.nonzero_count() {
                let s = suggestion(*oi, *ti, tweak, format!("clears entry [{o_lab} <- {i_lab}]"));
                if !out.contains(&s) {
                    out.push(s);
                    found += 1;
                    if found == 2 {
                        break;
                    }
                }
            }
        }
    }
    out
}

/// The symbol of an operator at a covector, as a matrix of algebra elements.
///
/// Rotational factors differentiate in the second slot only, so they drop out
/// of the symbol; each word d_a d_b contributes the product f_a f_b of the
/// covector rows as vectors in the algebra.
#[derive(Debug, Clone)]
pub struct SymbolMatrix {
    pub name: String,
    pub outputs: Vec<&'static str>,
    pub inputs: Vec<&'static str>,
    n: u16,
    m: u32,
    blocks: Vec<Vec<CliffordElement>>,
}

/// Builds the symbol of a table at a covector with one row per Dirac index.
pub fn symbol_matrix(def: &OperatorDef, covector: &[CliffordElement]) -> SymbolMatrix {
    assert_eq!(
        covector.len(),
        def.k as usize,
        "need one covector row per Dirac index"
    );
    let n = covector[0].generators();
    let m = covector[0].radicand();
    let mut blocks =
        vec![vec![CliffordElement::zero(n, m); def.inputs.len()]; def.outputs.len()];
    for t in &def.terms {
        let mut factor = CliffordElement::from_scalar(n, FieldScalar::one(m));
        let mut skip = false;
        for atom in &t.word {
            match atom {
                WordAtom::Dirac(i) => {
                    factor = factor.mul(&covector[*i as usize - 1]);
                }
                WordAtom::XiSecond(_, _) => {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }
        blocks[t.out][t.input] = blocks[t.out][t.input].add(&factor.scale(&t.coeff));
    }
    SymbolMatrix {
        name: format!("sigma({})", def.name),
        outputs: def.outputs.clone(),
        inputs: def.inputs.clone(),
        n,
        m,
        blocks,
    }
}

impl SymbolMatrix {
    pub fn from_blocks(
        name: &str,
        outputs: Vec<&'static str>,
        inputs: Vec<&'static str>,
        blocks: Vec<Vec<CliffordElement>>,
    ) -> Self {
        let n = blocks[0][0].generators();
        let m = blocks[0][0].radicand();
        SymbolMatrix {
            name: name.to_string(),
            outputs,
            inputs,
            n,
            m,
            blocks,
        }
    }

    pub fn n(&self) -> u16 {
        self.n
    }

    pub fn block(&self, out: usize, input: usize) -> &CliffordElement {
        &self.blocks[out][input]
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(|b| b.is_zero())
    }

    /// Block matrix product `self * other`.
    pub fn mul(&self, other: &SymbolMatrix) -> SymbolMatrix {
        assert_eq!(self.inputs, other.outputs, "symbol shape mismatch");
        let mut blocks = vec![
            vec![CliffordElement::zero(self.n, self.m); other.inputs.len()];
            self.outputs.len()
        ];
        for (o, row) in self.blocks.iter().enumerate() {
            for (mid, left) in row.iter().enumerate() {
                if left.is_zero() {
                    continue;
                }
                for (i, right) in other.blocks[mid].iter().enumerate() {
                    if right.is_zero() {
                        continue;
                    }
                    blocks[o][i] = blocks[o][i].add(&left.mul(right));
                }
            }
        }
        SymbolMatrix {
            name: format!("{}*{}", self.name, other.name),
            outputs: self.outputs.clone(),
            inputs: other.inputs.clone(),
            n: self.n,
            m: self.m,
            blocks,
        }
    }

    pub fn add(&self, other: &SymbolMatrix) -> SymbolMatrix {
        assert_eq!(self.outputs, other.outputs);
        assert_eq!(self.inputs, other.inputs);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a.add(b)).collect())
            .collect();
        SymbolMatrix {
            name: format!("{}+{}", self.name, other.name),
            outputs: self.outputs.clone(),
            inputs: self.inputs.clone(),
            n: self.n,
            m: self.m,
            blocks,
        }
    }

    /// Stacks two symbols sharing inputs into one with concatenated outputs.
    pub fn vstack(&self, other: &SymbolMatrix) -> SymbolMatrix {
        assert_eq!(self.inputs, other.inputs);
        let mut outputs = self.outputs.clone();
        outputs.extend_from_slice(&other.outputs);
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        SymbolMatrix {
            name: format!("[{}; {}]", self.name, other.name),
            outputs,
            inputs: self.inputs.clone(),
            n: self.n,
            m: self.m,
            blocks,
        }
    }

    /// Joins two symbols sharing outputs into one with concatenated inputs.
    pub fn hstack(&self, other: &SymbolMatrix) -> SymbolMatrix {
        assert_eq!(self.outputs, other.outputs);
        let mut inputs = self.inputs.clone();
        inputs.extend_from_slice(&other.inputs);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(r1, r2)| {
                let mut row = r1.clone();
                row.extend_from_slice(r2);
                row
            })
            .collect();
        SymbolMatrix {
            name: format!("[{} {}]", self.name, other.name),
            outputs: self.outputs.clone(),
            inputs,
            n: self.n,
            m: self.m,
            blocks,
        }
    }

    /// Expands each block to its left-multiplication matrix on the algebra.
    pub fn realize(&self) -> ExactMatrix {
        let dim = 1usize << self.n;
        let rows = self.outputs.len() * dim;
        let cols = self.inputs.len() * dim;
        let mut mat = ExactMatrix::zeros(rows, cols, self.m);
        for (o, row) in self.blocks.iter().enumerate() {
            for (i, block) in row.iter().enumerate() {
                for (blade, coeff) in block.terms() {
                    for col_blade in 0..dim as u64 {
                        let (prod, sign) = blade_mul(blade, col_blade);
                        let mut value = coeff.clone();
                        if sign < 0 {
                            value = FieldScalar::zero(self.m).checked_sub(&value).unwrap();
                        }
                        let r = o * dim + prod as usize;
                        let c = i * dim + col_blade as usize;
                        let cur = mat.get(r, c).checked_add(&value).unwrap();
                        mat.set(r, c, cur);
                    }
                }
            }
        }
        mat
    }

    /// Exact rank of the realized matrix, computed blockwise.
    ///
    /// Pivots on invertible algebra entries, eliminating a full block row and
    /// column at a time; whatever remains without an invertible entry is
    /// realized and finished by scalar elimination.
    pub fn rank(&self) -> usize {
        let dim = 1usize << self.n;
        let mut blocks = self.blocks.clone();
        let mut active_rows: Vec<usize> = (0..self.outputs.len()).collect();
        let mut active_cols: Vec<usize> = (0..self.inputs.len()).collect();
        let mut rank = 0usize;
        loop {
            let mut pivot = None;
            'search: for &r in &active_rows {
                for &c in &active_cols {
                    if blocks[r][c].is_zero() {
                        continue;
                    }
                    if let Some(inv) = blocks[r][c].inverse() {
                        pivot = Some((r, c, inv));
                        break 'search;
                    }
                }
            }
            let Some((pr, pc, inv)) = pivot else { break };
            rank += dim;
            for &r in &active_rows {
                if r == pr || blocks[r][pc].is_zero() {
                    continue;
                }
                let factor = blocks[r][pc].mul(&inv);
                for &c in &active_cols {
                    if c == pc || blocks[pr][c].is_zero() {
                        continue;
                    }
                    let update = factor.mul(&blocks[pr][c]);
                    blocks[r][c] = blocks[r][c].sub(&update);
                }
                blocks[r][pc] = CliffordElement::zero(self.n, self.m);
            }
            active_rows.retain(|&r| r != pr);
            active_cols.retain(|&c| c != pc);
        }
        let residual_nonzero = active_rows
            .iter()
            .any(|&r| active_cols.iter().any(|&c| !blocks[r][c].is_zero()));
        if residual_nonzero {
            let sub_outputs: Vec<&'static str> = active_rows.iter().map(|&r| self.outputs[r]).collect();
            let sub_inputs: Vec<&'static str> = active_cols.iter().map(|&c| self.inputs[c]).collect();
            let sub_blocks: Vec<Vec<CliffordElement>> = active_rows
                .iter()
                .map(|&r| active_cols.iter().map(|&c| blocks[r][c].clone()).collect())
                .collect();
            let residual = SymbolMatrix::from_blocks("residual", sub_outputs, sub_inputs, sub_blocks);
            rank += residual.realize().rank();
        }
        rank
    }
}

/// Builds covector rows as vectors in the algebra from scalar coordinates.
pub fn covector_rows(coords: &[Vec<FieldScalar>], n: u16) -> Vec<CliffordElement> {
    coords
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n as usize);
            crate::clifford::vector_of(row)
        })
        .collect()
}

/// The stacked symbol maps between direct-sum nodes of the k = 3 diagram.
///
/// Interior nodes collect the parallel components, so the third map stacks the
/// symbols of D3 and D4 and the fourth joins D6 and D5 side by side.
pub fn node_symbols(set: &OperatorSet, covector: &[CliffordElement]) -> Vec<SymbolMatrix> {
    match set.k() {
        2 => (1..=3)
            .map(|i| symbol_matrix(set.op(i), covector))
            .collect(),
        3 => {
            let s1 = symbol_matrix(set.op(1), covector);
            let s2 = symbol_matrix(set.op(2), covector);
            let s3 = symbol_matrix(set.op(3), covector);
            let s4 = symbol_matrix(set.op(4), covector);
            let s5 = symbol_matrix(set.op(5), covector);
            let s6 = symbol_matrix(set.op(6), covector);
            let s7 = symbol_matrix(set.op(7), covector);
            let s8 = symbol_matrix(set.op(8), covector);
            vec![s1, s2, s3.vstack(&s4), s6.hstack(&s5), s7, s8]
        }
        _ => vec![],
    }
}
