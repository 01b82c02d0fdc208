//! Signature matrix: for each (equation, variable) pair, the highest
//! derivative order to which the variable occurs, or absent when it does not
//! occur at all.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Symbol;
use crate::model::Model;

/// Square matrix of syntactic highest derivative orders. `None` is the
/// absent sentinel standing for "variable does not occur"; it is never a
/// negative integer, so ordinary arithmetic cannot absorb it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaMatrix {
    n: usize,
    entries: Vec<Option<u32>>,
}

impl SigmaMatrix {
    pub fn from_rows(rows: Vec<Vec<Option<u32>>>) -> SigmaMatrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "signature matrix must be square");
        SigmaMatrix { n, entries: rows.into_iter().flatten().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Option<u32> {
        self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<Option<u32>>> {
        self.entries.chunks(self.n.max(1)).map(|c| c.to_vec()).collect()
    }

    /// Largest finite entry, or 0 for an all-absent or empty matrix.
    pub fn max_order(&self) -> u32 {
        self.entries.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Builds the signature matrix by a single syntactic walk over each
/// equation. Occurrences count even if they would cancel after
/// simplification. Drivers and `t` never contribute: they are not dependent
/// variables.
pub fn signature_matrix(model: &Model) -> Result<SigmaMatrix> {
    if !model.is_square() {
        return Err(Error::NonSquare {
            equations: model.n_equations(),
            variables: model.n_variables(),
        });
    }
    let n = model.n_variables();
    let mut entries: Vec<Option<u32>> = vec![None; n * n];
    for (i, eq) in model.equations.iter().enumerate() {
        eq.visit_symbols(&mut |sym| {
            if let Symbol::Var { id, order } = sym {
                let slot = &mut entries[i * n + id.0];
                *slot = Some(slot.map_or(order, |prev| prev.max(order)));
            }
        });
    }
    Ok(SigmaMatrix { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_model;

    #[test]
    fn single_ode() {
        let m = parse_model("model m\nvar x\neq der(x,1) = x\n").unwrap();
        let s = signature_matrix(&m).unwrap();
        assert_eq!(s.rows(), vec![vec![Some(1)]]);
    }

    #[test]
    fn symmetric_coupling() {
        let m = parse_model("model m\nvar x, y\neq der(x,1) = y\neq der(y,1) = x\n").unwrap();
        let s = signature_matrix(&m).unwrap();
        assert_eq!(s.rows(), vec![vec![Some(1), Some(0)], vec![Some(0), Some(1)]]);
    }

    #[test]
    fn non_square_is_rejected() {
        let m = parse_model("model m\nvar x, y\neq x = y\n").unwrap();
        assert!(matches!(signature_matrix(&m), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn drivers_do_not_contribute() {
        let m = parse_model("model m\nvar x\ninput Q\neq der(x,1) = der(Q,2) + t\n").unwrap();
        let s = signature_matrix(&m).unwrap();
        assert_eq!(s.rows(), vec![vec![Some(1)]]);
    }
}
