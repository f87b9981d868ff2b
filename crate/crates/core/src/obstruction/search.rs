//! Bounded integer search with forced-value propagation.
//!
//! Every equation is multilinear: no variable occurs twice in a monomial.
//! So once all but one variable of an equation are fixed, the last one is
//! determined by a single division, which is what drives the pruning.

use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::obstruction::system::{PolySystem, SysVariable};

/// Blocks decided first: rows (2),(3), then (4),(7), then (12),(15).
pub const DEFAULT_ORDER: [SysVariable; 12] = [
    SysVariable::B5,
    SysVariable::B6,
    SysVariable::C3,
    SysVariable::C4,
    SysVariable::A3,
    SysVariable::A4,
    SysVariable::B1,
    SysVariable::B2,
    SysVariable::A5,
    SysVariable::A6,
    SysVariable::C1,
    SysVariable::C2,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub bound: i64,
    /// Branching order; variables of the system missing from it are
    /// appended in `SysVariable::ALL` order.
    pub order: Vec<SysVariable>,
    /// Split the first variable's range across rayon workers.
    pub parallel: bool,
}

impl SearchOptions {
    pub fn new(bound: i64) -> Self {
        SearchOptions {
            bound,
            order: DEFAULT_ORDER.to_vec(),
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Variables of the system in `SysVariable::ALL` order; each solution
    /// lists their values in this order.
    pub variables: Vec<SysVariable>,
    pub solutions: Vec<Vec<i64>>,
    pub bound: i64,
    pub nodes: u64,
}

impl SearchResult {
    pub fn contains(&self, assignment: &[(SysVariable, i64)]) -> bool {
        self.solutions.iter().any(|s| {
            assignment.iter().all(|(v, x)| {
                self.variables
                    .iter()
                    .position(|u| u == v)
                    .is_some_and(|i| s[i] == *x)
            })
        })
    }
}

/// Integer form of one row: `sum c * prod x_i = target`, variables as
/// indices into the search slots.
#[derive(Debug, Clone)]
struct IntRow {
    terms: Vec<(i64, Vec<usize>)>,
    target: i64,
    vars: Vec<usize>,
}

fn compile(system: &PolySystem, slots: &[SysVariable]) -> Result<Vec<IntRow>> {
    let slot = |v: &SysVariable| slots.iter().position(|s| s == v).unwrap();
    system
        .rows
        .iter()
        .filter(|r| !r.is_trivial())
        .map(|r| {
            let lcm = r
                .poly
                .terms()
                .map(|(_, c)| c.denom().clone())
                .chain(std::iter::once(r.target.denom().clone()))
                .fold(One::one(), |a: num_bigint::BigInt, d| a.lcm(&d));
            let scale = |c: &num_rational::BigRational| {
                (c * &lcm).to_integer().to_i64().ok_or_else(|| {
                    Error::Malformed(format!("coefficient too large in row ({})", r.label))
                })
            };
            let mut terms = Vec::new();
            for (m, c) in r.poly.terms() {
                let vs: Vec<usize> = m.iter().map(slot).collect();
                let mut sorted = vs.clone();
                sorted.dedup();
                if sorted.len() != vs.len() {
                    return Err(Error::Malformed(format!(
                        "row ({}) is not multilinear",
                        r.label
                    )));
                }
                terms.push((scale(c)?, vs));
            }
            let mut vars: Vec<usize> = terms.iter().flat_map(|(_, v)| v.iter().copied()).collect();
            vars.sort_unstable();
            vars.dedup();
            Ok(IntRow {
                terms,
                target: scale(&r.target)?,
                vars,
            })
        })
        .collect()
}

#[derive(Clone)]
struct State {
    values: Vec<i64>,
    set: Vec<bool>,
}

struct Searcher<'a> {
    rows: &'a [IntRow],
    /// Rows touching each slot.
    touching: Vec<Vec<usize>>,
    order: &'a [usize],
    bound: i64,
}

enum Outcome {
    Ok,
    Conflict,
}

impl Searcher<'_> {
    /// Fixes `slot = x` and propagates forced values to a fixpoint.
    fn assign(&self, st: &mut State, slot: usize, x: i64) -> Outcome {
        let mut queue = vec![(slot, x)];
        while let Some((s, x)) = queue.pop() {
            if st.set[s] {
                if st.values[s] != x {
                    return Outcome::Conflict;
                }
                continue;
            }
            st.set[s] = true;
            st.values[s] = x;
            for &ri in &self.touching[s] {
                let row = &self.rows[ri];
                let mut free = row.vars.iter().filter(|v| !st.set[**v]);
                let (first, second) = (free.next(), free.next());
                match (first, second) {
                    (None, _) => {
                        if self.value(row, st, None).0 != row.target {
                            return Outcome::Conflict;
                        }
                    }
                    (Some(&v), None) => {
                        let (rest, coeff) = self.value(row, st, Some(v));
                        let need = row.target - rest;
                        if coeff == 0 {
                            if need != 0 {
                                return Outcome::Conflict;
                            }
                        } else if need % coeff != 0 || (need / coeff).abs() > self.bound {
                            return Outcome::Conflict;
                        } else {
                            queue.push((v, need / coeff));
                        }
                    }
                    _ => {}
                }
            }
        }
        Outcome::Ok
    }

    /// Value of the row with `free` treated as unknown: returns the fixed
    /// part and the coefficient of `free`.
    fn value(&self, row: &IntRow, st: &State, free: Option<usize>) -> (i64, i64) {
        let (mut rest, mut coeff) = (0i64, 0i64);
        for (c, vs) in &row.terms {
            let mut p = *c;
            let mut has_free = false;
            for &v in vs {
                if Some(v) == free {
                    has_free = true;
                } else {
                    p *= st.values[v];
                }
            }
            if has_free {
                coeff += p;
            } else {
                rest += p;
            }
        }
        (rest, coeff)
    }

    fn dfs(&self, st: &State, depth: usize, out: &mut Vec<Vec<i64>>, nodes: &mut u64) {
        *nodes += 1;
        let Some(pos) = (depth..self.order.len()).find(|&i| !st.set[self.order[i]]) else {
            out.push(st.values.clone());
            return;
        };
        let slot = self.order[pos];
        for x in -self.bound..=self.bound {
            let mut next = st.clone();
            if let Outcome::Ok = self.assign(&mut next, slot, x) {
                self.dfs(&next, pos + 1, out, nodes);
            }
        }
    }
}

/// All integer solutions of `system` with every `|v| <= bound`, over the
/// variables that occur in it. Solutions are sorted lexicographically.
pub fn integer_search_with(system: &PolySystem, opts: &SearchOptions) -> Result<SearchResult> {
    if opts.bound < 0 {
        return Err(Error::Malformed("bound must be non-negative".into()));
    }
    let variables = system.variables();
    let rows = compile(system, &variables)?;
    let mut order: Vec<usize> = opts
        .order
        .iter()
        .filter_map(|v| variables.iter().position(|u| u == v))
        .collect();
    order.dedup();
    for i in 0..variables.len() {
        if !order.contains(&i) {
            order.push(i);
        }
    }
    let mut touching = vec![Vec::new(); variables.len()];
    for (ri, r) in rows.iter().enumerate() {
        for &v in &r.vars {
            touching[v].push(ri);
        }
    }
    let searcher = Searcher {
        rows: &rows,
        touching,
        order: &order,
        bound: opts.bound,
    };
    let start = State {
        values: vec![0; variables.len()],
        set: vec![false; variables.len()],
    };

    let (mut solutions, nodes) = if variables.is_empty() {
        // No unknowns: the system holds iff every row is trivially true.
        let holds = rows.iter().all(|r| r.target == 0);
        (if holds { vec![Vec::new()] } else { Vec::new() }, 1)
    } else {
        let top = order[0];
        let branch = |x: i64| {
            let mut out = Vec::new();
            let mut nodes = 0;
            let mut st = start.clone();
            if let Outcome::Ok = searcher.assign(&mut st, top, x) {
                searcher.dfs(&st, 1, &mut out, &mut nodes);
            }
            (out, nodes)
        };
        let parts: Vec<_> = if opts.parallel {
            (-opts.bound..=opts.bound)
                .into_par_iter()
                .map(branch)
                .collect()
        } else {
            (-opts.bound..=opts.bound).map(branch).collect()
        };
        parts
            .into_iter()
            .fold((Vec::new(), 1), |(mut s, n), (o, m)| {
                s.extend(o);
                (s, n + m)
            })
    };
    solutions.sort();
    solutions.dedup();
    Ok(SearchResult {
        variables,
        solutions,
        bound: opts.bound,
        nodes,
    })
}

/// [`integer_search_with`] using the default block order, in parallel.
pub fn integer_search(system: &PolySystem, bound: i64) -> Result<SearchResult> {
    integer_search_with(system, &SearchOptions::new(bound))
}

/// Exhaustive enumeration without propagation, for cross-checking small
/// systems.
pub fn brute_force(system: &PolySystem, bound: i64) -> Vec<Vec<i64>> {
    let variables = system.variables();
    let n = variables.len();
    let width = (2 * bound + 1) as u64;
    let total = width.pow(n as u32);
    let mut out: Vec<Vec<i64>> = (0..total)
        .into_par_iter()
        .filter_map(|mut k| {
            let mut vals = vec![0i64; n];
            for v in vals.iter_mut() {
                *v = (k % width) as i64 - bound;
                k /= width;
            }
            let ok = crate::obstruction::system::evaluate(system, |v| {
                crate::obstruction::quad::QuadExt::int(
                    vals[variables.iter().position(|u| *u == v).unwrap()],
                )
            })
            .iter()
            .all(|r| r.is_zero());
            ok.then_some(vals)
        })
        .collect();
    out.sort();
    out
}
