//! Generic mixed binary/continuous linear programs and an exact
//! branch-and-bound solver over a replaceable LP-relaxation backend.
//!
//! The solver proves optimality at zero gap: with integral objective data it
//! prunes on `ceil(lp bound)`, and integer candidates are re-verified against
//! every row before they become incumbents. Lazy constraints arrive through
//! an incumbent callback; returned rows are added globally and the node is
//! re-solved, so the final optimum respects every cut ever returned.

mod branch_bound;
mod simplex;

pub use branch_bound::{solve, BranchRule, MipStatus, Outcome, SolveOptions};
pub use branch_bound::{CB_CALLS, CB_NANOS, NODES_TOTAL};
pub use simplex::{LP_NANOS, LP_SOLVES, PIVOTS};
pub use simplex::{DenseSimplex, LpBackend, LpResult};

use std::io::{self, Write};

pub const FEAS_TOL: f64 = 1e-6;
pub const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    /// Continuous with explicit bounds.
    Continuous,
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub obj: f64,
    pub lb: f64,
    pub ub: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(VarId, f64)>, sense: Sense, rhs: f64) -> Row {
        Row { coeffs, sense, rhs }
    }

    pub fn le(coeffs: Vec<(VarId, f64)>, rhs: f64) -> Row {
        Row::new(coeffs, Sense::Le, rhs)
    }

    pub fn ge(coeffs: Vec<(VarId, f64)>, rhs: f64) -> Row {
        Row::new(coeffs, Sense::Ge, rhs)
    }

    pub fn eq(coeffs: Vec<(VarId, f64)>, rhs: f64) -> Row {
        Row::new(coeffs, Sense::Eq, rhs)
    }

    pub fn activity(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    pub fn satisfied(&self, values: &[f64], tol: f64) -> bool {
        let a = self.activity(values);
        match self.sense {
            Sense::Le => a <= self.rhs + tol,
            Sense::Ge => a >= self.rhs - tol,
            Sense::Eq => (a - self.rhs).abs() <= tol,
        }
    }

    /// Normalized key for deduplication: sorted support, sense, rhs.
    pub fn dedup_key(&self) -> (Vec<(usize, i64)>, u8, i64) {
        let mut support: Vec<(usize, i64)> = self
            .coeffs
            .iter()
            .map(|&(v, c)| (v.0, (c * 1024.0).round() as i64))
            .collect();
        support.sort_unstable();
        let sense = match self.sense {
            Sense::Le => 0,
            Sense::Eq => 1,
            Sense::Ge => 2,
        };
        (support, sense, (self.rhs * 1024.0).round() as i64)
    }
}

/// A minimization mixed binary/continuous linear program.
#[derive(Debug, Clone, Default)]
pub struct Model {
    pub vars: Vec<Variable>,
    pub rows: Vec<Row>,
}

impl Model {
    pub fn new() -> Model {
        Model::default()
    }

    pub fn add_binary(&mut self, name: impl Into<String>, obj: f64) -> VarId {
        let id = VarId(self.vars.len());
        self.vars.push(Variable {
            name: name.into(),
            kind: VarKind::Binary,
            obj,
            lb: 0.0,
            ub: 1.0,
        });
        id
    }

    pub fn add_continuous(&mut self, name: impl Into<String>, obj: f64, lb: f64, ub: f64) -> VarId {
        let id = VarId(self.vars.len());
        self.vars.push(Variable {
            name: name.into(),
            kind: VarKind::Continuous,
            obj,
            lb,
            ub,
        });
        id
    }

    pub fn add_row(&mut self, row: Row) {
        debug_assert!(row.coeffs.iter().all(|&(v, _)| v.0 < self.vars.len()));
        self.rows.push(row);
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    /// True when every objective coefficient is integral and carried only by
    /// binary variables; optimal objectives are then integers.
    pub fn objective_is_integral(&self) -> bool {
        self.vars.iter().all(|v| {
            v.obj.fract() == 0.0 && (v.obj == 0.0 || v.kind == VarKind::Binary)
        })
    }

    /// Every row satisfied and binaries integral, within tolerances.
    pub fn is_integer_feasible(&self, values: &[f64]) -> bool {
        if values.len() != self.vars.len() {
            return false;
        }
        for (var, &x) in self.vars.iter().zip(values) {
            if x < var.lb - FEAS_TOL || x > var.ub + FEAS_TOL {
                return false;
            }
            if var.kind == VarKind::Binary && (x - x.round()).abs() > INT_TOL {
                return false;
            }
        }
        self.rows.iter().all(|r| r.satisfied(values, FEAS_TOL))
    }

    /// Exact objective of an integral assignment.
    pub fn integral_objective(&self, values: &[f64]) -> i64 {
        self.vars
            .iter()
            .zip(values)
            .map(|(v, &x)| v.obj as i64 * x.round() as i64)
            .sum()
    }

    /// Text dump in LP format (objective, rows, bounds, binaries) for
    /// external cross-checking.
    pub fn write_lp<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "Minimize")?;
        write!(w, " obj:")?;
        for (i, v) in self.vars.iter().enumerate() {
            if v.obj != 0.0 {
                write!(w, " {} {}", fmt_signed(v.obj, i == 0), v.name)?;
            }
        }
        writeln!(w)?;
        writeln!(w, "Subject To")?;
        for (i, row) in self.rows.iter().enumerate() {
            write!(w, " c{i}:")?;
            for (j, &(var, c)) in row.coeffs.iter().enumerate() {
                write!(w, " {} {}", fmt_signed(c, j == 0), self.vars[var.0].name)?;
            }
            let op = match row.sense {
                Sense::Le => "<=",
                Sense::Eq => "=",
                Sense::Ge => ">=",
            };
            writeln!(w, " {} {}", op, row.rhs)?;
        }
        writeln!(w, "Bounds")?;
        for v in &self.vars {
            if v.kind == VarKind::Continuous {
                writeln!(w, " {} <= {} <= {}", v.lb, v.name, v.ub)?;
            }
        }
        writeln!(w, "Binaries")?;
        for v in &self.vars {
            if v.kind == VarKind::Binary {
                writeln!(w, " {}", v.name)?;
            }
        }
        writeln!(w, "End")
    }
}

fn fmt_signed(c: f64, first: bool) -> String {
    if first {
        format!("{c}")
    } else if c >= 0.0 {
        format!("+ {c}")
    } else {
        format!("- {}", -c)
    }
}

/// Feasibility check of a continuous constraint system by phase-style dual
/// simplex with a zero objective.
pub fn lp_feasible(model: &Model) -> bool {
    debug_assert!(model.vars.iter().all(|v| v.kind == VarKind::Continuous));
    let mut lp = DenseSimplex::new();
    lp.load(model);
    matches!(lp.solve(), LpResult::Optimal { .. })
}

#[cfg(test)]
mod test;
