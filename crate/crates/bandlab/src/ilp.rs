//! Bounded-integer constraint systems: linear rows, indicator links
//! (y = 1 exactly when x ≥ 1), and y-guarded inequalities, solved by
//! depth-first search with bounds-consistency propagation. All arithmetic
//! is exact integer; guards are handled natively and only linearized with
//! a big-M when exporting LP text.

use crate::error::{Error, Result};
use std::fmt::Write as _;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
const MAX_SOLVE_VARS: usize = 20_000;
const MAX_COEFF: i64 = 1_000_000;
const MAX_BOUND: i64 = 1_000_000_000;
const MAX_RHS: i64 = 1_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
struct Variable {
    name: String,
    lo: i64,
    hi: i64,
    binary: bool,
}

#[derive(Clone, Debug)]
pub struct LinearConstraint {
    pub terms: Vec<(i64, VarId)>,
    pub cmp: Cmp,
    pub rhs: i64,
}

#[derive(Clone, Debug)]
pub struct Indicator {
    pub y: VarId,
    pub x: VarId,
}

#[derive(Clone, Debug)]
pub struct Guarded {
    pub y: VarId,
    pub terms: Vec<(i64, VarId)>,
    pub bound: i64,
}

#[derive(Clone, Debug)]
pub struct DerivedExpr {
    pub name: String,
    pub terms: Vec<(i64, VarId)>,
}

/// A satisfying assignment, indexed by `VarId`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<i64>,
}

impl Assignment {
    pub fn value(&self, v: VarId) -> i64 {
        self.values[v.0]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

#[derive(Clone, Debug, Default)]
pub struct ConstraintSystem {
    vars: Vec<Variable>,
    linears: Vec<LinearConstraint>,
    indicators: Vec<Indicator>,
    guardeds: Vec<Guarded>,
    derived: Vec<DerivedExpr>,
    big_m: Option<i64>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !name.chars().next().unwrap().is_ascii_digit()
}

impl ConstraintSystem {
    pub fn new() -> Self {
        ConstraintSystem::default()
    }

    pub fn add_var(&mut self, name: &str, lo: i64, hi: i64) -> Result<VarId> {
        self.add_var_inner(name, lo, hi, false)
    }

    pub fn add_binary(&mut self, name: &str) -> Result<VarId> {
        self.add_var_inner(name, 0, 1, true)
    }

    fn add_var_inner(&mut self, name: &str, lo: i64, hi: i64, binary: bool) -> Result<VarId> {
        if !valid_name(name) {
            return Err(Error::InvalidInput(format!("bad variable name {name:?}")));
        }
        if self.vars.iter().any(|v| v.name == name) {
            return Err(Error::InvalidInput(format!("duplicate variable {name}")));
        }
        if lo > hi || lo.abs() > MAX_BOUND || hi.abs() > MAX_BOUND {
            return Err(Error::InvalidInput(format!(
                "bounds [{lo}, {hi}] for {name} out of supported range"
            )));
        }
        self.vars.push(Variable {
            name: name.to_string(),
            lo,
            hi,
            binary,
        });
        Ok(VarId(self.vars.len() - 1))
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.vars[v.0].name
    }

    pub fn bounds(&self, v: VarId) -> (i64, i64) {
        (self.vars[v.0].lo, self.vars[v.0].hi)
    }

    pub fn is_binary(&self, v: VarId) -> bool {
        self.vars[v.0].binary
    }

    fn check_terms(&self, terms: &[(i64, VarId)]) -> Result<Vec<(i64, VarId)>> {
        let mut merged: Vec<(i64, VarId)> = Vec::new();
        for &(c, v) in terms {
            if v.0 >= self.vars.len() {
                return Err(Error::InvalidInput("undeclared variable in terms".into()));
            }
            if c.abs() > MAX_COEFF {
                return Err(Error::InvalidInput(format!("coefficient {c} too large")));
            }
            match merged.iter_mut().find(|(_, w)| *w == v) {
                Some((acc, _)) => *acc += c,
                None => merged.push((c, v)),
            }
        }
        merged.retain(|&(c, _)| c != 0);
        merged.sort_by_key(|&(_, v)| v);
        for &(c, _) in &merged {
            if c.abs() > MAX_COEFF {
                return Err(Error::InvalidInput("merged coefficient too large".into()));
            }
        }
        Ok(merged)
    }

    pub fn add_linear(&mut self, terms: &[(i64, VarId)], cmp: Cmp, rhs: i64) -> Result<()> {
        if rhs.abs() > MAX_RHS {
            return Err(Error::InvalidInput("right-hand side too large".into()));
        }
        let terms = self.check_terms(terms)?;
        self.linears.push(LinearConstraint { terms, cmp, rhs });
        Ok(())
    }

    /// Link a binary y to a nonnegative integer x: y = 1 exactly when x ≥ 1.
    pub fn add_indicator(&mut self, y: VarId, x: VarId) -> Result<()> {
        if y.0 >= self.vars.len() || x.0 >= self.vars.len() {
            return Err(Error::InvalidInput(
                "undeclared variable in indicator".into(),
            ));
        }
        if !self.vars[y.0].binary {
            return Err(Error::InvalidInput("indicator guard must be binary".into()));
        }
        if self.vars[x.0].lo < 0 {
            return Err(Error::InvalidInput(
                "indicator target must be nonnegative".into(),
            ));
        }
        self.indicators.push(Indicator { y, x });
        Ok(())
    }

    /// y = 1 implies Σ terms ≤ bound; y = 0 leaves the row inactive.
    pub fn add_guarded(&mut self, y: VarId, terms: &[(i64, VarId)], bound: i64) -> Result<()> {
        if y.0 >= self.vars.len() || !self.vars[y.0].binary {
            return Err(Error::InvalidInput(
                "guard must be a declared binary".into(),
            ));
        }
        if bound.abs() > MAX_RHS {
            return Err(Error::InvalidInput("guard bound too large".into()));
        }
        let terms = self.check_terms(terms)?;
        self.guardeds.push(Guarded { y, terms, bound });
        Ok(())
    }

    /// Record a named linear expression for reporting and LP comments.
    pub fn add_derived(&mut self, name: &str, terms: &[(i64, VarId)]) -> Result<usize> {
        if !valid_name(name) {
            return Err(Error::InvalidInput(format!("bad derived name {name:?}")));
        }
        let terms = self.check_terms(terms)?;
        self.derived.push(DerivedExpr {
            name: name.to_string(),
            terms,
        });
        Ok(self.derived.len() - 1)
    }

    pub fn derived(&self) -> &[DerivedExpr] {
        &self.derived
    }

    pub fn linears(&self) -> &[LinearConstraint] {
        &self.linears
    }

    pub fn indicators(&self) -> &[Indicator] {
        &self.indicators
    }

    pub fn guardeds(&self) -> &[Guarded] {
        &self.guardeds
    }

    pub fn set_big_m(&mut self, m: i64) {
        self.big_m = Some(m);
    }

    pub fn eval(&self, terms: &[(i64, VarId)], values: &[i64]) -> i128 {
        terms
            .iter()
            .map(|&(c, v)| c as i128 * values[v.0] as i128)
            .sum()
    }

    /// Check an assignment against every constraint kind under product
    /// semantics. Returns human-readable violations; empty means satisfied.
    pub fn verify_assignment(&self, values: &[i64]) -> Result<Vec<String>> {
        if values.len() != self.vars.len() {
            return Err(Error::InvalidInput(format!(
                "assignment has {} values for {} variables",
                values.len(),
                self.vars.len()
            )));
        }
        let mut bad = Vec::new();
        for (i, var) in self.vars.iter().enumerate() {
            let x = values[i];
            if x < var.lo || x > var.hi {
                bad.push(format!(
                    "{} = {x} outside [{}, {}]",
                    var.name, var.lo, var.hi
                ));
            }
        }
        for (i, lin) in self.linears.iter().enumerate() {
            let lhs = self.eval(&lin.terms, values);
            let ok = match lin.cmp {
                Cmp::Le => lhs <= lin.rhs as i128,
                Cmp::Eq => lhs == lin.rhs as i128,
                Cmp::Ge => lhs >= lin.rhs as i128,
            };
            if !ok {
                bad.push(format!("linear row {i}: lhs {lhs} vs rhs {}", lin.rhs));
            }
        }
        for (i, ind) in self.indicators.iter().enumerate() {
            let y = values[ind.y.0];
            let x = values[ind.x.0];
            if (y == 1) != (x >= 1) {
                bad.push(format!("indicator {i}: y = {y}, x = {x}"));
            }
        }
        for (i, grd) in self.guardeds.iter().enumerate() {
            if values[grd.y.0] == 1 {
                let lhs = self.eval(&grd.terms, values);
                if lhs > grd.bound as i128 {
                    bad.push(format!("guard {i}: lhs {lhs} vs bound {}", grd.bound));
                }
            }
        }
        Ok(bad)
    }

    pub fn solve_feasibility(&self) -> Result<Option<Assignment>> {
        self.solve_feasibility_with(DEFAULT_NODE_BUDGET)
    }

    pub fn solve_feasibility_with(&self, node_budget: u64) -> Result<Option<Assignment>> {
        if self.vars.len() > MAX_SOLVE_VARS {
            return Err(Error::ResourceLimit(format!(
                "system has {} variables, solver cap is {MAX_SOLVE_VARS}",
                self.vars.len()
            )));
        }
        let mut rows: Vec<(Vec<(i64, usize)>, i64)> = Vec::new();
        for lin in &self.linears {
            let plain: Vec<(i64, usize)> = lin.terms.iter().map(|&(c, v)| (c, v.0)).collect();
            let negated: Vec<(i64, usize)> = plain.iter().map(|&(c, v)| (-c, v)).collect();
            match lin.cmp {
                Cmp::Le => rows.push((plain, lin.rhs)),
                Cmp::Ge => rows.push((negated, -lin.rhs)),
                Cmp::Eq => {
                    rows.push((plain, lin.rhs));
                    rows.push((negated, -lin.rhs));
                }
            }
        }
        let guard_rows: Vec<GuardRow> = self
            .guardeds
            .iter()
            .map(|grd| {
                let terms = grd.terms.iter().map(|&(c, v)| (c, v.0)).collect();
                (grd.y.0, terms, grd.bound)
            })
            .collect();
        let mut solver = Solver {
            sys: self,
            rows,
            guard_rows,
            nodes: 0,
            budget: node_budget,
        };
        let mut lo: Vec<i64> = self.vars.iter().map(|v| v.lo).collect();
        let mut hi: Vec<i64> = self.vars.iter().map(|v| v.hi).collect();
        match solver.dfs(&mut lo, &mut hi)? {
            None => Ok(None),
            Some(values) => {
                let bad = self.verify_assignment(&values)?;
                if !bad.is_empty() {
                    return Err(Error::Internal(format!(
                        "solver produced a bad assignment: {}",
                        bad.join("; ")
                    )));
                }
                Ok(Some(Assignment { values }))
            }
        }
    }

    fn effective_big_m(&self) -> i64 {
        let mut need: i128 = 1;
        for ind in &self.indicators {
            need = need.max(self.vars[ind.x.0].hi as i128);
        }
        for grd in &self.guardeds {
            let maxsum: i128 = grd
                .terms
                .iter()
                .map(|&(c, v)| {
                    let var = &self.vars[v.0];
                    if c > 0 {
                        c as i128 * var.hi as i128
                    } else {
                        c as i128 * var.lo as i128
                    }
                })
                .sum();
            need = need.max(maxsum - grd.bound as i128);
        }
        let need = need.clamp(1, i64::MAX as i128) as i64;
        match self.big_m {
            Some(m) => m.max(need),
            None => need,
        }
    }

    /// Render the system as LP-style text. Indicator links become
    /// x ≤ M·y plus y ≤ x; a guarded row becomes terms + M·y ≤ bound + M.
    pub fn export_lp(&self) -> String {
        let m = self.effective_big_m();
        let mut out = String::new();
        out.push_str("\\ bandlab constraint system export\n");
        let _ = writeln!(out, "\\ big-M M = {m}");
        for d in &self.derived {
            let _ = writeln!(out, "\\ derived {} ={}", d.name, self.term_string(&d.terms));
        }
        out.push_str("OBJECTIVE\n  obj: 0\nSUBJECT TO\n");
        for (i, lin) in self.linears.iter().enumerate() {
            let op = match lin.cmp {
                Cmp::Le => "<=",
                Cmp::Eq => "=",
                Cmp::Ge => ">=",
            };
            let lhs = if lin.terms.is_empty() {
                " 0".to_string()
            } else {
                self.term_string(&lin.terms)
            };
            let _ = writeln!(out, "  lin{i}:{lhs} {op} {}", lin.rhs);
        }
        for (i, ind) in self.indicators.iter().enumerate() {
            let x = &self.vars[ind.x.0].name;
            let y = &self.vars[ind.y.0].name;
            let _ = writeln!(out, "  ind{i}a: + 1 {x} - {m} {y} <= 0");
            let _ = writeln!(out, "  ind{i}b: + 1 {y} - 1 {x} <= 0");
        }
        for (i, grd) in self.guardeds.iter().enumerate() {
            let y = &self.vars[grd.y.0].name;
            let lhs = if grd.terms.is_empty() {
                " 0".to_string()
            } else {
                self.term_string(&grd.terms)
            };
            let rhs = grd.bound as i128 + m as i128;
            let _ = writeln!(out, "  grd{i}:{lhs} + {m} {y} <= {rhs}");
        }
        out.push_str("BOUNDS\n");
        for var in &self.vars {
            let _ = writeln!(out, "  {} <= {} <= {}", var.lo, var.name, var.hi);
        }
        out.push_str("GENERAL\n");
        for var in &self.vars {
            if !var.binary {
                let _ = writeln!(out, "  {}", var.name);
            }
        }
        out.push_str("BINARY\n");
        for var in &self.vars {
            if var.binary {
                let _ = writeln!(out, "  {}", var.name);
            }
        }
        out.push_str("END\n");
        out
    }

    fn term_string(&self, terms: &[(i64, VarId)]) -> String {
        let mut s = String::new();
        for &(c, v) in terms {
            let sign = if c < 0 { '-' } else { '+' };
            let _ = write!(s, " {sign} {} {}", c.abs(), self.vars[v.0].name);
        }
        s
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && (a < 0) != (b < 0) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && (a < 0) == (b < 0) {
        q + 1
    } else {
        q
    }
}

/// A guarded row as (guard var, terms, bound).
type GuardRow = (usize, Vec<(i64, usize)>, i64);

struct Solver<'a> {
    sys: &'a ConstraintSystem,
    /// All linear material normalized to Σ terms ≤ rhs.
    rows: Vec<(Vec<(i64, usize)>, i64)>,
    guard_rows: Vec<GuardRow>,
    nodes: u64,
    budget: u64,
}

type Trail = Vec<(usize, i64, i64)>;

impl Solver<'_> {
    fn set_lo(lo: &mut [i64], hi: &[i64], trail: &mut Trail, v: usize, val: i64) -> bool {
        if val > lo[v] {
            trail.push((v, lo[v], hi[v]));
            lo[v] = val;
        }
        lo[v] <= hi[v]
    }

    fn set_hi(lo: &[i64], hi: &mut [i64], trail: &mut Trail, v: usize, val: i64) -> bool {
        if val < hi[v] {
            trail.push((v, lo[v], hi[v]));
            hi[v] = val;
        }
        lo[v] <= hi[v]
    }

    fn undo(lo: &mut [i64], hi: &mut [i64], trail: &Trail) {
        for &(v, l, h) in trail.iter().rev() {
            lo[v] = l;
            hi[v] = h;
        }
    }

    /// One bounds-tightening pass over a ≤ row. Returns false on conflict.
    fn tighten_le(
        terms: &[(i64, usize)],
        rhs: i64,
        lo: &mut [i64],
        hi: &mut [i64],
        trail: &mut Trail,
    ) -> bool {
        let minsum: i128 = terms
            .iter()
            .map(|&(c, v)| {
                if c > 0 {
                    c as i128 * lo[v] as i128
                } else {
                    c as i128 * hi[v] as i128
                }
            })
            .sum();
        if minsum > rhs as i128 {
            return false;
        }
        for &(c, v) in terms {
            let own_min = if c > 0 {
                c as i128 * lo[v] as i128
            } else {
                c as i128 * hi[v] as i128
            };
            let rest = minsum - own_min;
            let budget = rhs as i128 - rest;
            if c > 0 {
                let cap = div_floor(budget, c as i128);
                if cap < lo[v] as i128 {
                    return false;
                }
                if cap < hi[v] as i128 && !Self::set_hi(lo, hi, trail, v, cap as i64) {
                    return false;
                }
            } else {
                let floor = div_ceil(budget, c as i128);
                if floor > hi[v] as i128 {
                    return false;
                }
                if floor > lo[v] as i128 && !Self::set_lo(lo, hi, trail, v, floor as i64) {
                    return false;
                }
            }
        }
        true
    }

    fn propagate(&self, lo: &mut [i64], hi: &mut [i64], trail: &mut Trail) -> bool {
        for _round in 0..10_000 {
            let mark = trail.len();
            for (terms, rhs) in &self.rows {
                if !Self::tighten_le(terms, *rhs, lo, hi, trail) {
                    return false;
                }
            }
            for ind in self.sys.indicators() {
                let (y, x) = (ind.y.0, ind.x.0);
                if lo[y] == 1 && !Self::set_lo(lo, hi, trail, x, 1) {
                    return false;
                }
                if hi[y] == 0 && !Self::set_hi(lo, hi, trail, x, 0) {
                    return false;
                }
                if lo[x] >= 1 && !Self::set_lo(lo, hi, trail, y, 1) {
                    return false;
                }
                if hi[x] <= 0 && !Self::set_hi(lo, hi, trail, y, 0) {
                    return false;
                }
            }
            for (y, terms, bound) in &self.guard_rows {
                let y = *y;
                if lo[y] == 1 {
                    if !Self::tighten_le(terms, *bound, lo, hi, trail) {
                        return false;
                    }
                } else if hi[y] == 1 {
                    let minsum: i128 = terms
                        .iter()
                        .map(|&(c, v)| {
                            if c > 0 {
                                c as i128 * lo[v] as i128
                            } else {
                                c as i128 * hi[v] as i128
                            }
                        })
                        .sum();
                    if minsum > *bound as i128 && !Self::set_hi(lo, hi, trail, y, 0) {
                        return false;
                    }
                }
            }
            if trail.len() == mark {
                return true;
            }
        }
        true
    }

    fn dfs(&mut self, lo: &mut Vec<i64>, hi: &mut Vec<i64>) -> Result<Option<Vec<i64>>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::ResourceLimit(format!(
                "feasibility search exceeded {} nodes",
                self.budget
            )));
        }
        let mut trail: Trail = Vec::new();
        if !self.propagate(lo, hi, &mut trail) {
            Self::undo(lo, hi, &trail);
            return Ok(None);
        }
        // Branch binaries first, then smallest domain, then index.
        let mut pick: Option<(u8, i64, usize)> = None;
        for v in 0..lo.len() {
            if lo[v] < hi[v] {
                let rank = (u8::from(!self.sys.vars[v].binary), hi[v] - lo[v], v);
                if pick.is_none_or(|p| rank < p) {
                    pick = Some(rank);
                }
            }
        }
        let Some((_, _, v)) = pick else {
            let solution = lo.clone();
            Self::undo(lo, hi, &trail);
            return Ok(Some(solution));
        };
        let (from, to) = (lo[v], hi[v]);
        for val in from..=to {
            let mut leaf: Trail = Vec::new();
            let a = Self::set_lo(lo, hi, &mut leaf, v, val);
            let b = Self::set_hi(lo, hi, &mut leaf, v, val);
            if a && b {
                match self.dfs(lo, hi) {
                    Ok(Some(sol)) => {
                        Self::undo(lo, hi, &leaf);
                        Self::undo(lo, hi, &trail);
                        return Ok(Some(sol));
                    }
                    Ok(None) => {}
                    Err(e) => {
                        Self::undo(lo, hi, &leaf);
                        Self::undo(lo, hi, &trail);
                        return Err(e);
                    }
                }
            }
            Self::undo(lo, hi, &leaf);
        }
        Self::undo(lo, hi, &trail);
        Ok(None)
    }
}
