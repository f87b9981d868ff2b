//! The band-sum equation system.
//!
//! Each row records the coefficient of one degree-five commutator in the
//! band-summed first component; the row must equal the coefficient of that
//! commutator in `w`, which is 1. The twelve unknowns are the homological
//! multiplicities with which the slices go over the three 2-handles; the six
//! multiplicities forbidden by the homological condition are simply absent.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::obstruction::quad::QuadExt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SysVariable {
    A3,
    A4,
    A5,
    A6,
    B1,
    B2,
    B5,
    B6,
    C1,
    C2,
    C3,
    C4,
}

impl SysVariable {
    pub const ALL: [SysVariable; 12] = [
        SysVariable::A3,
        SysVariable::A4,
        SysVariable::A5,
        SysVariable::A6,
        SysVariable::B1,
        SysVariable::B2,
        SysVariable::B5,
        SysVariable::B6,
        SysVariable::C1,
        SysVariable::C2,
        SysVariable::C3,
        SysVariable::C4,
    ];

    fn parts(self) -> (char, u8) {
        use SysVariable::*;
        match self {
            A3 => ('a', 3),
            A4 => ('a', 4),
            A5 => ('a', 5),
            A6 => ('a', 6),
            B1 => ('b', 1),
            B2 => ('b', 2),
            B5 => ('b', 5),
            B6 => ('b', 6),
            C1 => ('c', 1),
            C2 => ('c', 2),
            C3 => ('c', 3),
            C4 => ('c', 4),
        }
    }

    fn from_parts(letter: char, index: u8) -> Option<Self> {
        SysVariable::ALL
            .into_iter()
            .find(|v| v.parts() == (letter, index))
    }

    /// `a3`, `b5`, ...
    pub fn name(self) -> String {
        let (l, i) = self.parts();
        format!("{l}{i}")
    }

    /// `a[3]`
    pub fn bracket_name(self) -> String {
        let (l, i) = self.parts();
        format!("{l}[{i}]")
    }

    /// `α₃`
    pub fn greek(self) -> String {
        let (l, i) = self.parts();
        let g = match l {
            'a' => 'α',
            'b' => 'β',
            _ => 'γ',
        };
        let sub = char::from_u32(0x2080 + i as u32).unwrap();
        format!("{g}{sub}")
    }

    /// Accepts `a3` and `a[3]`.
    pub fn parse(name: &str) -> Result<Self> {
        let s: String = name.chars().filter(|c| !"[] ".contains(*c)).collect();
        let mut chars = s.chars();
        let letter = chars.next();
        let index: Option<u8> = chars.as_str().parse().ok();
        letter
            .zip(index)
            .and_then(|(l, i)| SysVariable::from_parts(l, i))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn position(self) -> usize {
        SysVariable::ALL.iter().position(|v| *v == self).unwrap()
    }
}

impl fmt::Display for SysVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A polynomial over `Q` in the system variables. Monomials are sorted
/// multisets of variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SysPolynomial {
    terms: BTreeMap<Vec<SysVariable>, BigRational>,
}

impl SysPolynomial {
    pub fn zero() -> Self {
        SysPolynomial::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = SysPolynomial::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: SysVariable) -> Self {
        let mut p = SysPolynomial::zero();
        p.add_term(vec![v], BigRational::one());
        p
    }

    pub fn add_term(&mut self, mut monomial: Vec<SysVariable>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        monomial.sort_unstable();
        match self.terms.entry(monomial) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<SysVariable>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &SysPolynomial) -> SysPolynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> SysPolynomial {
        let mut out = SysPolynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SysPolynomial) -> SysPolynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SysPolynomial) -> SysPolynomial {
        let mut out = SysPolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Vec::new())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Maximum total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<SysVariable> {
        let mut vs: Vec<_> = self.terms.keys().flatten().copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn eval(&self, value: impl Fn(SysVariable) -> QuadExt) -> QuadExt {
        self.terms.iter().fold(QuadExt::zero(), |acc, (m, c)| {
            let term = m
                .iter()
                .fold(QuadExt::rational(c.clone()), |t, v| &t * &value(*v));
            &acc + &term
        })
    }

    /// Serializes as `b6*c4 - b5*c3`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        // Positive terms first, so `b6*c4 - b5*c3` rather than `-b5*c3 + b6*c4`.
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|(_, c)| c.is_negative());
        let mut out = String::new();
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let vars: Vec<_> = m.iter().map(|v| v.name()).collect();
            if m.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&format!("{abs}*"));
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

/// One equation `poly = target`, labelled by its table row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub label: u8,
    pub poly: SysPolynomial,
    pub target: BigRational,
    /// The commutator whose coefficient the row records, when known.
    pub commutator: Option<String>,
}

impl Row {
    /// Moves constants to the right-hand side.
    pub fn normalized(label: u8, lhs: SysPolynomial, rhs: SysPolynomial) -> Row {
        let diff = lhs.sub(&rhs);
        let target = -diff.constant_term();
        let poly = diff.add(&SysPolynomial::constant(target.clone()));
        Row {
            label,
            poly,
            target,
            commutator: None,
        }
    }

    pub fn to_text(&self) -> String {
        format!("{} = {}", self.poly.to_text(), self.target)
    }

    /// The identically satisfied row `0 = 0`.
    pub fn is_trivial(&self) -> bool {
        self.poly.is_zero() && self.target.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pub rows: Vec<Row>,
}

impl PolySystem {
    /// Rows with the given labels, in the given order.
    pub fn select(&self, labels: &[u8]) -> Result<PolySystem> {
        let rows = labels
            .iter()
            .map(|l| {
                self.rows
                    .iter()
                    .find(|r| r.label == *l)
                    .cloned()
                    .ok_or(Error::UnknownLabel(*l))
            })
            .collect::<Result<_>>()?;
        Ok(PolySystem { rows })
    }

    /// Rows that are not identically satisfied.
    pub fn nontrivial(&self) -> PolySystem {
        PolySystem {
            rows: self
                .rows
                .iter()
                .filter(|r| !r.is_trivial())
                .cloned()
                .collect(),
        }
    }

    pub fn concat(&self, other: &PolySystem) -> PolySystem {
        PolySystem {
            rows: self.rows.iter().chain(&other.rows).cloned().collect(),
        }
    }

    pub fn variables(&self) -> Vec<SysVariable> {
        let mut vs: Vec<_> = self.rows.iter().flat_map(|r| r.poly.variables()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// One equation per line, `b6*c4 - b5*c3 = 1`.
    pub fn to_text(&self) -> String {
        self.rows.iter().map(|r| r.to_text() + "\n").collect()
    }

    /// Parses the line format of [`PolySystem::to_text`]; rows are labelled
    /// 1, 2, ... in order. Blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<PolySystem> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let label = rows.len() as u8 + 1;
            let sides: Vec<_> = line.split('=').collect();
            if sides.len() != 2 {
                return Err(Error::Malformed(format!("expected one `=` in `{line}`")));
            }
            let lhs = PolyParser::new(sides[0], Dialect::Plain).polynomial()?;
            let rhs = PolyParser::new(sides[1], Dialect::Plain).polynomial()?;
            rows.push(Row::normalized(label, lhs, rhs));
        }
        Ok(PolySystem { rows })
    }
}

/// Residual `value - target` of every row, exactly.
pub fn evaluate(system: &PolySystem, value: impl Fn(SysVariable) -> QuadExt) -> Vec<QuadExt> {
    system
        .rows
        .iter()
        .map(|r| &r.poly.eval(&value) - &QuadExt::rational(r.target.clone()))
        .collect()
}

/// The equation table: label, commutator, equation cell, as typeset.
pub const TABLE_ROWS: [(u8, &str, &str); 15] = [
    (1, r"[m_2,[[m_3,m_4],[m_5,m_6]]]", r"1=1"),
    (
        2,
        r"[m_2,[[m_4,m_5],[m_3,m_6]]]",
        r"{\beta}_6{\gamma}_4- {\beta}_5{\gamma}_3=1",
    ),
    (
        3,
        r"[m_2,[[m_5,m_3],[m_4,m_6]]]",
        r"{\beta}_6{\gamma}_3 - {\beta}_5 {\gamma}_4= 1",
    ),
    (
        4,
        r"[m_3,[[m_4,m_2],[m_5,m_6]]]",
        r"-{\alpha}_3{\beta}_2+{\beta}_1{\alpha}_4=1",
    ),
    (
        5,
        r"[m_3,[[m_2,m_5],[m_4,m_6]]]",
        r"-{\alpha}_3 {\beta}_6{\gamma}_2-{\beta}_1{\alpha}_5{\gamma}_4=1",
    ),
    (
        6,
        r"[m_3,[[m_5,m_4],[m_2,m_6]]]",
        r"{\alpha}_3{\beta}_5{\gamma}_2 +{\beta}_1{\alpha}_6{\gamma}_4=1",
    ),
    (
        7,
        r"[m_4,[[m_2,m_3],[m_5,m_6]]]",
        r"-{\alpha}_4{\beta}_2+{\beta}_1{\alpha}_3=1",
    ),
    (
        8,
        r"[m_4,[[m_5,m_2],[m_3,m_6]]]",
        r"-{\alpha}_4 {\beta}_6{\gamma}_2-{\beta}_1{\alpha}_5{\gamma}_3=1",
    ),
    (
        9,
        r"[m_4,[[m_3,m_5],[m_2,m_6]]]",
        r"{\alpha}_4{\beta}_5{\gamma}_2+{\beta}_1{\alpha}_6{\gamma}_3=1",
    ),
    (
        10,
        r"[m_5,[[m_3,m_2],[m_4,m_6]]]",
        r"{\alpha}_5 {\beta}_2{\gamma}_4 -{\gamma}_1{\alpha}_3{\beta}_6  =1",
    ),
    (
        11,
        r"[m_5,[[m_2,m_4],[m_3,m_6]]]",
        r"{\alpha}_5 {\beta}_2{\gamma}_3-{\gamma}_1{\alpha}_4{\beta}_6    =1",
    ),
    (
        12,
        r"[m_5,[[m_3,m_4],[m_2,m_6]]]",
        r"{\alpha}_5  {\gamma}_2+{\gamma}_1  {\alpha}_6   =1",
    ),
    (
        13,
        r"[m_6,[[m_2,m_3],[m_4,m_5]]]",
        r"{\alpha}_6  {\beta}_2{\gamma}_4-{\gamma}_1 {\alpha}_3{\beta}_5     =1",
    ),
    (
        14,
        r"[m_6,[[m_4,m_2],[m_3,m_5]]]",
        r"{\alpha}_6 {\beta}_2{\gamma}_3 -{\gamma}_1{\alpha}_4{\beta}_5    =1",
    ),
    (
        15,
        r"[m_6,[[m_2,m_5],[m_3,m_4]]]",
        r"{\alpha}_6 {\gamma}_2 +{\gamma}_1 {\alpha}_5   =1",
    ),
];

/// The solver input, one conjunct per line for rows (2)..(15), as typeset.
pub const MATHEMATICA_INPUT: [&str; 14] = [
    r"{b[6]c[4]-b[5]c[3]\text{==}1\&\&}",
    r"{b[6] c[3] - b[5] c[4]\text{==}1\&\&}",
    r"{-a[3] b[2] + b[1] a[4]\text{==}1\&\&}",
    r"{ -a[3] b[6] c[2] - b[1] a[5] c[4]\text{==}1\&\&}",
    r"{a[3] b[5] c[2] + b[1] a[6] c[4]\text{==}1\&\&}",
    r"{ -a[4] b[2] + b[1] a[3]\text{==}1\&\&}",
    r"{ -a[4] b[6] c[2] - b[1] a[5] c[3]\text{==}1\&\&}",
    r"{a[4] b[5] c[2] + b[1] a[6] c[3] == 1\text{==}1\&\&}",
    r"{a[5] b[2] c[4] - c[1] a[3] b[6]\text{==}1\&\&}",
    r"{a[5] b[2] c[3] - c[1] a[4] b[6]\text{==}1\&\&}",
    r"{a[5] c[2] + c[1] a[6]\text{==}1\&\&}",
    r"{a[6] b[2] c[4] - c[1] a[3] b[5]\text{==}1\&\&}",
    r"{a[6] b[2] c[3] - c[1] a[4] b[5]\text{==}1\&\&}",
    r"{a[6] c[2] + c[1] a[5]\text{==}1,}",
];

/// Parses the typeset table into the system, including the trivial row (1).
pub fn table_system() -> Result<PolySystem> {
    let rows = TABLE_ROWS
        .iter()
        .map(|(label, comm, cell)| {
            let sides: Vec<_> = cell.split('=').collect();
            if sides.len() != 2 {
                return Err(Error::Malformed(format!("row ({label}): `{cell}`")));
            }
            let lhs = PolyParser::new(sides[0], Dialect::Latex).polynomial()?;
            let rhs = PolyParser::new(sides[1], Dialect::Latex).polynomial()?;
            let mut row = Row::normalized(*label, lhs, rhs);
            row.commutator = Some(comm.replace("m_", "m"));
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(PolySystem { rows })
}

/// A parsed solver conjunct. `chained` is set when the line contains more
/// than one `==`; only the first equation is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverLine {
    pub row: Row,
    pub chained: bool,
}

pub fn mathematica_system() -> Result<Vec<SolverLine>> {
    MATHEMATICA_INPUT
        .iter()
        .enumerate()
        .map(|(i, line)| parse_mathematica_line(i as u8 + 2, line))
        .collect()
}

fn parse_mathematica_line(label: u8, line: &str) -> Result<SolverLine> {
    let cleaned = line
        .replace(r"\text{==}", "==")
        .replace(r"\&\&", "")
        .replace(['{', '}', ','], "");
    let sides: Vec<_> = cleaned.split("==").collect();
    if sides.len() < 2 {
        return Err(Error::Malformed(format!("no `==` in `{line}`")));
    }
    let lhs = PolyParser::new(sides[0], Dialect::Bracket).polynomial()?;
    let rhs = PolyParser::new(sides[1], Dialect::Bracket).polynomial()?;
    Ok(SolverLine {
        row: Row::normalized(label, lhs, rhs),
        chained: sides.len() > 2,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCheck {
    pub label: u8,
    pub agrees: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptionReport {
    pub rows: Vec<RowCheck>,
}

impl TranscriptionReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agrees)
    }

    pub fn flagged(&self) -> Vec<u8> {
        self.rows
            .iter()
            .filter(|r| r.note.is_some())
            .map(|r| r.label)
            .collect()
    }
}

/// Compares the typeset table with the solver input row by row. Row (1) has
/// no solver counterpart and is checked to be identically satisfied.
pub fn transcription_check() -> Result<TranscriptionReport> {
    let table = table_system()?;
    let solver = mathematica_system()?;
    let mut rows = Vec::new();
    for row in &table.rows {
        if row.label == 1 {
            rows.push(RowCheck {
                label: 1,
                agrees: row.is_trivial(),
                note: Some("identically satisfied, no solver conjunct".into()),
            });
            continue;
        }
        let found = solver.iter().find(|s| s.row.label == row.label);
        let check = match found {
            None => RowCheck {
                label: row.label,
                agrees: false,
                note: Some("missing from solver input".into()),
            },
            Some(s) => RowCheck {
                label: row.label,
                agrees: s.row.poly == row.poly && s.row.target == row.target,
                note: s.chained.then(|| {
                    "solver input repeats `== 1`; compared on the first equation".to_string()
                }),
            },
        };
        rows.push(check);
    }
    Ok(TranscriptionReport { rows })
}

/// The fifteen-row system, cross-checked against the solver input.
pub fn paper_system() -> PolySystem {
    let report = transcription_check().expect("transcribed tables parse");
    assert!(
        report.all_agree(),
        "table and solver input disagree: {report:?}"
    );
    table_system().expect("transcribed table parses")
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dialect {
    /// `{\alpha}_3`
    Latex,
    /// `a[3]`
    Bracket,
    /// `a3`, with `*` or whitespace between factors
    Plain,
}

/// Sums of signed products of variables and integers.
struct PolyParser<'a> {
    src: &'a str,
    pos: usize,
    dialect: Dialect,
}

impl<'a> PolyParser<'a> {
    fn new(src: &'a str, dialect: Dialect) -> Self {
        PolyParser {
            src,
            pos: 0,
            dialect,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Malformed(format!("{what} at byte {} of `{}`", self.pos, self.src))
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn polynomial(&mut self) -> Result<SysPolynomial> {
        let mut out = SysPolynomial::zero();
        let mut first = true;
        loop {
            self.skip_ws();
            let neg = match self.rest().chars().next() {
                None if !first => return Ok(out),
                None => return Err(self.err("empty polynomial")),
                Some('+') if !first => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                Some(_) => return Err(self.err("expected `+` or `-`")),
            };
            first = false;
            let t = self.product()?;
            out = if neg { out.sub(&t) } else { out.add(&t) };
        }
    }

    fn product(&mut self) -> Result<SysPolynomial> {
        let mut out = SysPolynomial::constant(BigRational::one());
        let mut any = false;
        loop {
            self.skip_ws();
            if self.dialect == Dialect::Plain && any && self.rest().starts_with('*') {
                self.pos += 1;
                self.skip_ws();
            }
            match self.factor()? {
                Some(f) => {
                    out = out.mul(&f);
                    any = true;
                }
                None if any => return Ok(out),
                None => return Err(self.err("expected a factor")),
            }
        }
    }

    fn factor(&mut self) -> Result<Option<SysPolynomial>> {
        let rest = self.rest();
        if let Some(len) = rest
            .find(|c: char| !c.is_ascii_digit())
            .or(Some(rest.len()))
            .filter(|&l| l > 0)
        {
            let n: BigInt = rest[..len].parse().map_err(|_| self.err("bad integer"))?;
            self.pos += len;
            return Ok(Some(SysPolynomial::constant(BigRational::from_integer(n))));
        }
        let parsed = match self.dialect {
            Dialect::Latex => latex_variable(rest),
            Dialect::Bracket => bracket_variable(rest),
            Dialect::Plain => plain_variable(rest),
        };
        match parsed {
            Some((v, len)) => {
                self.pos += len;
                Ok(Some(SysPolynomial::var(v)))
            }
            None => Ok(None),
        }
    }
}

fn latex_variable(s: &str) -> Option<(SysVariable, usize)> {
    for (prefix, letter) in [(r"{\alpha}_", 'a'), (r"{\beta}_", 'b'), (r"{\gamma}_", 'c')] {
        if let Some(tail) = s.strip_prefix(prefix) {
            let digit = tail.chars().next()?.to_digit(10)? as u8;
            let v = SysVariable::from_parts(letter, digit)?;
            return Some((v, prefix.len() + 1));
        }
    }
    None
}

fn bracket_variable(s: &str) -> Option<(SysVariable, usize)> {
    let b = s.as_bytes();
    if b.len() >= 4 && b[1] == b'[' && b[3] == b']' {
        let v = SysVariable::from_parts(b[0] as char, (b[2] as char).to_digit(10)? as u8)?;
        return Some((v, 4));
    }
    None
}

fn plain_variable(s: &str) -> Option<(SysVariable, usize)> {
    let b = s.as_bytes();
    if b.len() >= 2 && b[0].is_ascii_alphabetic() && b[1].is_ascii_digit() {
        if b.len() > 2 && b[2].is_ascii_alphanumeric() {
            return None;
        }
        let v = SysVariable::from_parts(b[0] as char, (b[1] as char).to_digit(10)? as u8)?;
        return Some((v, 2));
    }
    None
}

/// Parses lines `a3 = -1`, `a[3] -> -1/4` or `b2 = 1 + 2/3*sqrt3`; entries
/// may also be separated by commas.
pub fn parse_assignment(text: &str) -> Result<BTreeMap<SysVariable, QuadExt>> {
    let mut out = BTreeMap::new();
    for entry in text.split(['\n', ',']) {
        let entry = entry.split('#').next().unwrap().trim();
        if entry.is_empty() {
            continue;
        }
        let (name, value) = entry
            .split_once("->")
            .or_else(|| entry.split_once('='))
            .ok_or_else(|| Error::Malformed(format!("expected `name = value`, got `{entry}`")))?;
        let v = SysVariable::parse(name.trim())?;
        if out.insert(v, QuadExt::parse(value)?).is_some() {
            return Err(Error::Malformed(format!("{v} assigned twice")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use SysVariable::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn poly(terms: &[(&[SysVariable], i64)]) -> SysPolynomial {
        let mut p = SysPolynomial::zero();
        for (m, c) in terms {
            p.add_term(m.to_vec(), q(*c));
        }
        p
    }

    #[test]
    fn rows_from_table() {
        let s = paper_system();
        assert_eq!(s.rows.len(), 15);
        assert!(s.rows[0].is_trivial());
        assert_eq!(s.rows[1].poly, poly(&[(&[B6, C4], 1), (&[B5, C3], -1)]));
        assert_eq!(s.rows[1].target, q(1));
        assert_eq!(s.rows[11].poly, poly(&[(&[A5, C2], 1), (&[C1, A6], 1)]));
        assert_eq!(
            s.rows[11].commutator.as_deref(),
            Some("[m5,[[m3,m4],[m2,m6]]]")
        );
        assert_eq!(s.nontrivial().rows.len(), 14);
        assert_eq!(s.variables(), SysVariable::ALL.to_vec());
    }

    #[test]
    fn solver_input_row_nine_is_flagged() {
        let report = transcription_check().unwrap();
        assert!(report.all_agree());
        assert_eq!(report.flagged(), vec![1, 9]);
    }

    #[test]
    fn mismatched_transcription_is_detected() {
        let bad = parse_mathematica_line(2, r"{b[6]c[4]+b[5]c[3]\text{==}1\&\&}").unwrap();
        assert_ne!(bad.row.poly, table_system().unwrap().rows[1].poly);
    }

    #[test]
    fn text_round_trip() {
        let s = paper_system().nontrivial();
        let text = s.to_text();
        assert!(text.starts_with("b6*c4 - b5*c3 = 1\n"), "{text}");
        let back = PolySystem::parse_text(&text).unwrap();
        for (a, b) in s.rows.iter().zip(&back.rows) {
            assert_eq!((&a.poly, &a.target), (&b.poly, &b.target));
        }
    }

    #[test]
    fn all_zero_residuals() {
        let s = paper_system();
        let r = evaluate(&s, |_| QuadExt::zero());
        assert!(r[0].is_zero());
        assert!(r[1..].iter().all(|x| *x == QuadExt::int(-1)));
    }

    #[test]
    fn variable_names() {
        assert_eq!(SysVariable::parse("c[4]").unwrap(), C4);
        assert_eq!(SysVariable::parse("a3").unwrap(), A3);
        assert!(SysVariable::parse("a1").is_err());
        assert_eq!(B5.greek(), "β₅");
    }

    #[test]
    fn assignment_parsing() {
        let a = parse_assignment("a3 = -1, c[3] -> -1/4\nb2 = 1 + 2/3*sqrt3 # comment").unwrap();
        assert_eq!(a[&C3], QuadExt::ratio(-1, 4));
        assert_eq!(a[&B2], QuadExt::parse("1+2/3*sqrt3").unwrap());
        assert!(parse_assignment("a3 = 1\na3 = 2").is_err());
        assert!(parse_assignment("z9 = 1").is_err());
    }
}
