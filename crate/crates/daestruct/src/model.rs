//! Square systems of equations over declared variables and driving functions.

use std::fmt::Write as _;

use crate::expr::{DriverId, Expr, SymbolNames, VarId};

/// An ordered system of equations. Each stored expression is the residual
/// `lhs - rhs` of one `eq` line; variable and equation order follow
/// declaration order.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub name: String,
    pub variables: Vec<String>,
    pub drivers: Vec<String>,
    pub equations: Vec<Expr>,
}

impl Model {
    pub fn n_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    /// Squareness is not enforced at construction; analysis entry points
    /// check it.
    pub fn is_square(&self) -> bool {
        self.equations.len() == self.variables.len()
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v == name).map(VarId)
    }

    pub fn driver_id(&self, name: &str) -> Option<DriverId> {
        self.drivers.iter().position(|d| d == name).map(DriverId)
    }

    /// Deterministic rendering in the model grammar. Residuals print as
    /// `eq <residual> = 0`, which re-parses to the identical model.
    pub fn print(&self) -> String {
        let mut out = String::new();
        writeln!(out, "model {}", self.name).unwrap();
        if !self.variables.is_empty() {
            writeln!(out, "var {}", self.variables.join(", ")).unwrap();
        }
        if !self.drivers.is_empty() {
            writeln!(out, "input {}", self.drivers.join(", ")).unwrap();
        }
        for eq in &self.equations {
            writeln!(out, "eq {} = 0", eq.display(self)).unwrap();
        }
        out
    }
}

impl SymbolNames for Model {
    fn var_name(&self, id: VarId) -> &str {
        &self.variables[id.0]
    }

    fn driver_name(&self, id: DriverId) -> &str {
        &self.drivers[id.0]
    }
}

/// See [`Model::print`].
pub fn print_model(m: &Model) -> String {
    m.print()
}
