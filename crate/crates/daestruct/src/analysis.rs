//! The full structural-analysis pipeline: signature matrix, transversal,
//! offsets, structural index, degrees of freedom.

use serde::Serialize;

use crate::assignment::{solve_hvt, Transversal};
use crate::error::Result;
use crate::model::Model;
use crate::offsets::{compute_offsets, Offsets};
use crate::sigma::{signature_matrix, SigmaMatrix};

#[derive(Clone, Debug)]
pub struct Analysis {
    pub sigma: SigmaMatrix,
    pub offsets: Offsets,
}

impl Analysis {
    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    pub fn hvt(&self) -> &Transversal {
        &self.offsets.hvt
    }

    pub fn structural_index(&self) -> u32 {
        self.offsets.structural_index()
    }

    pub fn degrees_of_freedom(&self) -> i64 {
        self.offsets.degrees_of_freedom()
    }

    pub fn report(&self) -> AnalysisReport {
        AnalysisReport {
            n: self.n(),
            sigma: self.sigma.rows(),
            hvt: HvtReport {
                assignment: self.offsets.hvt.assignment.clone(),
                value: self.offsets.hvt.value,
            },
            c: self.offsets.c.clone(),
            d: self.offsets.d.clone(),
            structural_index: self.structural_index(),
            degrees_of_freedom: self.degrees_of_freedom(),
        }
    }
}

/// JSON-facing view of an analysis. Absent signature entries serialize as
/// `null`; indices are zero-based.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub sigma: Vec<Vec<Option<u32>>>,
    pub hvt: HvtReport,
    pub c: Vec<u32>,
    pub d: Vec<u32>,
    pub structural_index: u32,
    pub degrees_of_freedom: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HvtReport {
    pub assignment: Vec<usize>,
    pub value: i64,
}

/// Runs signature matrix, transversal, and offsets on a square model.
pub fn analyze(model: &Model) -> Result<Analysis> {
    let sigma = signature_matrix(model)?;
    let hvt = solve_hvt(&sigma)?;
    let offsets = compute_offsets(&sigma, &hvt)?;
    Ok(Analysis { sigma, offsets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_model;

    #[test]
    fn pipeline_on_single_ode() {
        let m = parse_model("model m\nvar x\neq der(x,1) = x\n").unwrap();
        let a = analyze(&m).unwrap();
        assert_eq!(a.offsets.c, vec![0]);
        assert_eq!(a.offsets.d, vec![1]);
        assert_eq!(a.structural_index(), 0);
        assert_eq!(a.degrees_of_freedom(), 1);
        assert_eq!(a.degrees_of_freedom(), a.hvt().value);
    }

    #[test]
    fn report_serializes_absent_as_null() {
        let m = parse_model("model m\nvar x, y\neq der(x,1) = x\neq y = 1\n").unwrap();
        let a = analyze(&m).unwrap();
        let json = serde_json::to_value(a.report()).unwrap();
        assert_eq!(json["sigma"][0][1], serde_json::Value::Null);
        assert_eq!(json["n"], 2);
    }
}
