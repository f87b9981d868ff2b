//! The three parametric solution families over `Q(sqrt 3)`.
//!
//! Each family expresses ten unknowns as rational functions of the free
//! parameters `b1`, `b5`. They are stored in the solver's typeset output
//! form and parsed into expression trees.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::obstruction::quad::QuadExt;
use crate::obstruction::system::{evaluate, paper_system, PolySystem, SysVariable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyExpr {
    Const(QuadExt),
    B1,
    B5,
    Neg(Box<FamilyExpr>),
    Add(Box<FamilyExpr>, Box<FamilyExpr>),
    Sub(Box<FamilyExpr>, Box<FamilyExpr>),
    Mul(Box<FamilyExpr>, Box<FamilyExpr>),
    Div(Box<FamilyExpr>, Box<FamilyExpr>),
}

impl FamilyExpr {
    pub fn int(n: i64) -> Self {
        FamilyExpr::Const(QuadExt::int(n))
    }

    fn bin(
        op: fn(Box<FamilyExpr>, Box<FamilyExpr>) -> FamilyExpr,
        a: FamilyExpr,
        b: FamilyExpr,
    ) -> Self {
        op(Box::new(a), Box::new(b))
    }

    /// Exact value at `(b1, b5)`; a vanishing denominator is a pole.
    pub fn eval(&self, b1: &QuadExt, b5: &QuadExt) -> Result<QuadExt> {
        Ok(match self {
            FamilyExpr::Const(c) => c.clone(),
            FamilyExpr::B1 => b1.clone(),
            FamilyExpr::B5 => b5.clone(),
            FamilyExpr::Neg(a) => -&a.eval(b1, b5)?,
            FamilyExpr::Add(a, b) => &a.eval(b1, b5)? + &b.eval(b1, b5)?,
            FamilyExpr::Sub(a, b) => &a.eval(b1, b5)? - &b.eval(b1, b5)?,
            FamilyExpr::Mul(a, b) => &a.eval(b1, b5)? * &b.eval(b1, b5)?,
            FamilyExpr::Div(a, b) => {
                let d = b.eval(b1, b5)?;
                a.eval(b1, b5)?
                    .checked_div(&d)
                    .ok_or_else(|| Error::Pole(format!("{b} vanishes at b1 = {b1}, b5 = {b5}")))?
            }
        })
    }

    /// Parses the typeset form (`\frac`, `\left(`, `\sqrt{3}`, implicit
    /// products) as well as the plain form written by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = lex(text)?;
        let mut p = ExprParser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Malformed(format!("trailing input in `{text}`")));
        }
        Ok(e)
    }

    fn precedence(&self) -> u8 {
        match self {
            FamilyExpr::Add(..) | FamilyExpr::Sub(..) | FamilyExpr::Neg(_) => 1,
            FamilyExpr::Mul(..) | FamilyExpr::Div(..) => 2,
            FamilyExpr::Const(c) if !is_plain_constant(c) => 1,
            _ => 3,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8, right: bool) -> fmt::Result {
        let p = self.precedence();
        if p < min || (right && p == min) {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

fn is_plain_constant(c: &QuadExt) -> bool {
    (c.is_rational() && c.a.is_integer() && c.a >= BigRational::zero())
        || (c.a.is_zero() && c.b == BigRational::from_integer(1.into()))
}

impl fmt::Display for FamilyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyExpr::Const(c) if c.a.is_zero() && !c.b.is_zero() => {
                if c.b == BigRational::from_integer(1.into()) {
                    f.write_str("Sqrt[3]")
                } else {
                    write!(f, "{}*Sqrt[3]", c.b)
                }
            }
            FamilyExpr::Const(c) => write!(f, "{}", c.to_string().replace("sqrt3", "Sqrt[3]")),
            FamilyExpr::B1 => f.write_str("b[1]"),
            FamilyExpr::B5 => f.write_str("b[5]"),
            FamilyExpr::Neg(a) => {
                f.write_str("-")?;
                a.write_child(f, 2, false)
            }
            FamilyExpr::Add(a, b) | FamilyExpr::Sub(a, b) => {
                a.write_child(f, 1, false)?;
                f.write_str(if matches!(self, FamilyExpr::Add(..)) {
                    " + "
                } else {
                    " - "
                })?;
                b.write_child(f, 1, true)
            }
            FamilyExpr::Mul(a, b) | FamilyExpr::Div(a, b) => {
                a.write_child(f, 2, false)?;
                f.write_str(if matches!(self, FamilyExpr::Mul(..)) {
                    "*"
                } else {
                    "/"
                })?;
                b.write_child(f, 2, true)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Param(u8),
    Sqrt3,
    Frac,
    Open,
    Close,
    Plus,
    Minus,
    Star,
    Slash,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut s = text;
    let bad = |s: &str| {
        Error::Malformed(format!(
            "unexpected `{}` in family expression",
            s.chars().take(12).collect::<String>()
        ))
    };
    loop {
        s = s.trim_start();
        if s.is_empty() {
            return Ok(out);
        }
        let fixed: [(&str, Option<Tok>); 13] = [
            (r"\left(", Some(Tok::Open)),
            (r"\right)", Some(Tok::Close)),
            (r"\frac", Some(Tok::Frac)),
            (r"\sqrt{3}", Some(Tok::Sqrt3)),
            ("Sqrt[3]", Some(Tok::Sqrt3)),
            ("b[1]", Some(Tok::Param(1))),
            ("b[5]", Some(Tok::Param(5))),
            ("(", Some(Tok::Open)),
            ("{", Some(Tok::Open)),
            (")", Some(Tok::Close)),
            ("}", Some(Tok::Close)),
            ("*", Some(Tok::Star)),
            ("/", Some(Tok::Slash)),
        ];
        if let Some((lit, tok)) = fixed.iter().find(|(lit, _)| s.starts_with(lit)) {
            out.push(tok.clone().unwrap());
            s = &s[lit.len()..];
            continue;
        }
        let c = s.chars().next().unwrap();
        match c {
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            d if d.is_ascii_digit() => {
                let len = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
                out.push(Tok::Num(s[..len].parse().map_err(|_| bad(s))?));
                s = &s[len..];
                continue;
            }
            _ => return Err(bad(s)),
        }
        s = &s[1..];
    }
}

struct ExprParser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(Error::Malformed(format!(
                "expected {t:?} at token {}",
                self.pos
            )))
        }
    }

    fn expr(&mut self) -> Result<FamilyExpr> {
        let mut e = if self.eat(&Tok::Minus) {
            FamilyExpr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                e = FamilyExpr::bin(FamilyExpr::Add, e, self.term()?);
            } else if self.eat(&Tok::Minus) {
                e = FamilyExpr::bin(FamilyExpr::Sub, e, self.term()?);
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<FamilyExpr> {
        let mut e = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                e = FamilyExpr::bin(FamilyExpr::Mul, e, self.factor()?);
            } else if self.eat(&Tok::Slash) {
                e = FamilyExpr::bin(FamilyExpr::Div, e, self.factor()?);
            } else if matches!(
                self.peek(),
                Some(Tok::Num(_) | Tok::Param(_) | Tok::Sqrt3 | Tok::Frac | Tok::Open)
            ) {
                e = FamilyExpr::bin(FamilyExpr::Mul, e, self.factor()?);
            } else {
                return Ok(e);
            }
        }
    }

    fn factor(&mut self) -> Result<FamilyExpr> {
        let t = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::Malformed("family expression ends early".into()))?;
        self.pos += 1;
        Ok(match t {
            Tok::Num(n) => FamilyExpr::int(n),
            Tok::Param(1) => FamilyExpr::B1,
            Tok::Param(_) => FamilyExpr::B5,
            Tok::Sqrt3 => FamilyExpr::Const(QuadExt::sqrt3()),
            Tok::Open => {
                let e = self.expr()?;
                self.expect(&Tok::Close)?;
                e
            }
            Tok::Frac => {
                self.expect(&Tok::Open)?;
                let n = self.expr()?;
                self.expect(&Tok::Close)?;
                self.expect(&Tok::Open)?;
                let d = self.expr()?;
                self.expect(&Tok::Close)?;
                FamilyExpr::bin(FamilyExpr::Div, n, d)
            }
            other => {
                return Err(Error::Malformed(format!(
                    "unexpected {other:?} at token {}",
                    self.pos - 1
                )))
            }
        })
    }
}

const FAMILY_1: [&str; 10] = [
    r"a[3]\to -\frac{1}{b[1]}",
    r"a[4]\to -\frac{1}{b[1]}",
    r"a[5]\to -\frac{2 b[5]}{b[1]}",
    r"a[6]\to -\frac{2 b[5]}{b[1]}",
    r"b[2]\to 2 b[1]",
    r"b[6]\to-3 b[5]",
    r"c[1]\to 0",
    r"c[2]\to -\frac{b[1]}{2 b[5]}",
    r"c[3]\to -\frac{1}{4 b[5]}",
    r"c[4]\to -\frac{1}{4 b[5]}",
];

const FAMILY_2: [&str; 10] = [
    r"a[3]\to -\frac{\sqrt{3}}{2 b[1]}",
    r"a[4]\to-\frac{\sqrt{3}}{2 b[1]}",
    r"a[5]\to 0",
    r"a[6]\to \frac{3 \left(-5 b[5]-3 \sqrt{3} b[5]\right)}{2 \left(3 b[1]+2 \sqrt{3} b[1]\right)}",
    r"b[2]\to \frac{1}{3}\left(3 b[1]+2 \sqrt{3} b[1]\right)",
    r"b[6]\to -b[5]-\sqrt{3} b[5]",
    r"c[1]\to -\frac{2 \left(3 b[1]+2 \sqrt{3} b[1]\right)}{3 \left(5+3 \sqrt{3}\right)b[5]}",
    r"c[2]\to -\frac{2 \left(3 b[1]+2 \sqrt{3} b[1]\right)}{3 \left(5+3 \sqrt{3}\right) b[5]}",
    r"c[3]\to \frac{-1-\sqrt{3}}{\left(5+3 \sqrt{3}\right)b[5]}",
    r"c[4]\to \frac{-1-\sqrt{3}}{\left(5+3 \sqrt{3}\right) b[5]}",
];

const FAMILY_3: [&str; 10] = [
    r"a[3]\to \frac{\sqrt{3}}{2 b[1]}",
    r"a[4]\to \frac{\sqrt{3}}{2 b[1]}",
    r"a[5]\to0",
    r"a[6]\to \frac{3 \left(5 b[5]-3 \sqrt{3} b[5]\right)}{2 \left(-3 b[1]+2 \sqrt{3} b[1]\right)}",
    r"b[2]\to \frac{1}{3} \left(3 b[1]-2 \sqrt{3} b[1]\right)",
    r"b[6]\to-b[5]+\sqrt{3} b[5]",
    r"c[1]\to -\frac{2 \left(-3 b[1]+2 \sqrt{3} b[1]\right)}{3 \left(-5+3 \sqrt{3}\right) b[5]}",
    r"c[2]\to -\frac{2 \left(-3+2 \sqrt{3}\right)b[1]}{3 \left(-5+3 \sqrt{3}\right) b[5]}",
    r"c[3]\to \frac{1-\sqrt{3}}{\left(-5+3 \sqrt{3}\right) b[5]}",
    r"c[4]\to \frac{1-\sqrt{3}}{\left(-5+3 \sqrt{3}\right) b[5]}",
];

/// A family: every unknown as an expression in the parameters `b1`, `b5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDefinition {
    pub id: u8,
    pub rules: Vec<(SysVariable, FamilyExpr)>,
}

impl FamilyDefinition {
    /// Parses rules `a[3] -> expr` (or `\to`), one per line.
    pub fn parse(id: u8, text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (lhs, rhs) = line
                .split_once(r"\to")
                .or_else(|| line.split_once("->"))
                .ok_or_else(|| Error::Malformed(format!("expected a rule, got `{line}`")))?;
            let v = SysVariable::parse(lhs.trim())?;
            if v == SysVariable::B1 || v == SysVariable::B5 {
                return Err(Error::Malformed(format!("{v} is a parameter")));
            }
            if rules.iter().any(|(u, _)| *u == v) {
                return Err(Error::Malformed(format!("{v} has two rules")));
            }
            rules.push((v, FamilyExpr::parse(rhs)?));
        }
        Ok(FamilyDefinition { id, rules })
    }

    pub fn rule(&self, v: SysVariable) -> Option<&FamilyExpr> {
        self.rules.iter().find(|(u, _)| *u == v).map(|(_, e)| e)
    }

    /// Full assignment at `(b1, b5)`, in `SysVariable::ALL` order.
    pub fn assignment(&self, b1: &QuadExt, b5: &QuadExt) -> Result<Vec<QuadExt>> {
        SysVariable::ALL
            .iter()
            .map(|&v| match v {
                SysVariable::B1 => Ok(b1.clone()),
                SysVariable::B5 => Ok(b5.clone()),
                _ => self
                    .rule(v)
                    .ok_or_else(|| {
                        Error::Malformed(format!("family {} has no rule for {v}", self.id))
                    })?
                    .eval(b1, b5),
            })
            .collect()
    }

    /// Arrow-syntax serialization, one rule per line.
    pub fn to_text(&self) -> String {
        self.rules
            .iter()
            .map(|(v, e)| format!("{} -> {e}\n", v.bracket_name()))
            .collect()
    }
}

pub fn family(id: u8) -> Result<FamilyDefinition> {
    let rules = match id {
        1 => FAMILY_1,
        2 => FAMILY_2,
        3 => FAMILY_3,
        _ => return Err(Error::Malformed(format!("no family {id}"))),
    };
    FamilyDefinition::parse(id, &rules.join("\n"))
}

/// `{1..n} x {1..n}`.
pub fn square_grid(n: u32) -> Vec<(BigRational, BigRational)> {
    let r = |i: u32| BigRational::from_integer(i.into());
    (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (r(i), r(j))))
        .collect()
}

/// Smallest per-parameter grid size that certifies an identity whose residual
/// numerator has total degree at most 12.
pub const CERTIFICATE_GRID: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyFailure {
    pub b1: BigRational,
    pub b5: BigRational,
    pub label: u8,
    pub residual: QuadExt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub id: u8,
    pub points: usize,
    pub failures: Vec<FamilyFailure>,
    /// Whether the grid is a full product of at least 13 x 13 distinct
    /// values, so that vanishing on it proves the identity.
    pub certificate: bool,
    /// Structural facts read off the expression trees.
    pub closed_form: Vec<(String, bool)>,
}

impl FamilyReport {
    pub fn residuals_vanish(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.residuals_vanish() && self.closed_form.iter().all(|(_, ok)| *ok)
    }

    pub fn certified(&self) -> bool {
        self.passes() && self.certificate
    }
}

fn is_product_grid(grid: &[(BigRational, BigRational)]) -> bool {
    let xs: BTreeSet<_> = grid.iter().map(|p| &p.0).collect();
    let ys: BTreeSet<_> = grid.iter().map(|p| &p.1).collect();
    let pts: BTreeSet<_> = grid.iter().collect();
    xs.len() >= CERTIFICATE_GRID && ys.len() >= CERTIFICATE_GRID && pts.len() == xs.len() * ys.len()
}

/// The trees `-1/(4 b5)` and `0`.
fn minus_quarter_over_b5() -> FamilyExpr {
    FamilyExpr::Neg(Box::new(FamilyExpr::bin(
        FamilyExpr::Div,
        FamilyExpr::int(1),
        FamilyExpr::bin(FamilyExpr::Mul, FamilyExpr::int(4), FamilyExpr::B5),
    )))
}

fn closed_form_facts(def: &FamilyDefinition) -> Vec<(String, bool)> {
    if def.id != 1 {
        return Vec::new();
    }
    let target = minus_quarter_over_b5();
    vec![
        (
            "c3 = -1/(4*b5)".into(),
            def.rule(SysVariable::C3) == Some(&target),
        ),
        (
            "c4 = -1/(4*b5)".into(),
            def.rule(SysVariable::C4) == Some(&target),
        ),
        (
            "c1 = 0".into(),
            def.rule(SysVariable::C1) == Some(&FamilyExpr::int(0)),
        ),
    ]
}

/// Evaluates family `id` against rows (2)..(15) at every grid point.
pub fn verify_family(id: u8, grid: &[(BigRational, BigRational)]) -> Result<FamilyReport> {
    verify_family_against(&family(id)?, &paper_system().nontrivial(), grid)
}

pub fn verify_family_against(
    def: &FamilyDefinition,
    system: &PolySystem,
    grid: &[(BigRational, BigRational)],
) -> Result<FamilyReport> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("no grid points".into()));
    }
    let mut failures = Vec::new();
    for (b1, b5) in grid {
        let values = def.assignment(&b1.clone().into(), &b5.clone().into())?;
        let residuals = evaluate(system, |v| values[v.position()].clone());
        for (row, r) in system.rows.iter().zip(residuals) {
            if !r.is_zero() {
                failures.push(FamilyFailure {
                    b1: b1.clone(),
                    b5: b5.clone(),
                    label: row.label,
                    residual: r,
                });
            }
        }
    }
    Ok(FamilyReport {
        id: def.id,
        points: grid.len(),
        failures,
        certificate: is_product_grid(grid),
        closed_form: closed_form_facts(def),
    })
}

impl fmt::Display for FamilyDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadExt {
        QuadExt::int(n)
    }

    #[test]
    fn family_one_sample_point() {
        let f = family(1).unwrap();
        let v = f.assignment(&q(1), &q(1)).unwrap();
        let expected = [
            "-1", "-1", "-2", "-2", "1", "2", "1", "-3", "0", "-1/2", "-1/4", "-1/4",
        ];
        let expected: Vec<_> = expected
            .iter()
            .map(|s| QuadExt::parse(s).unwrap())
            .collect();
        assert_eq!(v, expected);
    }

    #[test]
    fn family_two_at_one_one() {
        let f = family(2).unwrap();
        let v = f.assignment(&q(1), &q(1)).unwrap();
        assert_eq!(
            v[SysVariable::B2.position()],
            QuadExt::parse("1 + 2/3*sqrt3").unwrap()
        );
        let report = verify_family(
            2,
            &[(1.into(), 1.into())].map(|(a, b): (i64, i64)| {
                (
                    BigRational::from_integer(a.into()),
                    BigRational::from_integer(b.into()),
                )
            }),
        )
        .unwrap();
        assert!(report.passes());
        assert!(!report.certificate);
    }

    #[test]
    fn pole_at_b5_zero() {
        let grid = [(BigRational::from_integer(1.into()), BigRational::zero())];
        assert!(matches!(verify_family(1, &grid), Err(Error::Pole(_))));
    }

    #[test]
    fn closed_forms_of_family_one() {
        let r = verify_family(1, &square_grid(2)).unwrap();
        assert_eq!(r.closed_form.len(), 3);
        assert!(r.closed_form.iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn broken_family_fails() {
        let mut f = family(1).unwrap();
        f.rules[8].1 = FamilyExpr::int(1);
        let r = verify_family_against(&f, &paper_system().nontrivial(), &square_grid(3)).unwrap();
        assert!(!r.residuals_vanish());
    }

    #[test]
    fn arrow_round_trip() {
        for id in 1..=3 {
            let f = family(id).unwrap();
            let back = FamilyDefinition::parse(id, &f.to_text()).unwrap();
            for (b1, b5) in [(1, 2), (3, -5), (7, 4)] {
                assert_eq!(
                    f.assignment(&q(b1), &q(b5)).unwrap(),
                    back.assignment(&q(b1), &q(b5)).unwrap()
                );
            }
        }
        assert_eq!(
            family(1)
                .unwrap()
                .rule(SysVariable::C3)
                .unwrap()
                .to_string(),
            "-1/(4*b[5])"
        );
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(FamilyExpr::parse(r"\frac{1}").is_err());
        assert!(FamilyExpr::parse("x + 1").is_err());
        assert!(FamilyExpr::parse("(1 + 2").is_err());
    }
}
