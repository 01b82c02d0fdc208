//! Canonical offsets: the smallest non-negative integer vectors `c` (per
//! equation) and `d` (per variable) with `d[j] - c[i] >= sigma[i][j]` on
//! every finite entry and equality on the chosen transversal.

use serde::Serialize;

use crate::assignment::Transversal;
use crate::error::{Error, Result};
use crate::sigma::SigmaMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Offsets {
    /// Differentiation count per equation.
    pub c: Vec<u32>,
    /// Highest derivative order per variable in the prolonged system.
    pub d: Vec<u32>,
    /// The transversal the offsets were tightened against.
    pub hvt: Transversal,
}

impl Offsets {
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// `max c`, plus one when any `d` component is zero.
    pub fn structural_index(&self) -> u32 {
        let max_c = self.c.iter().copied().max().unwrap_or(0);
        let bump = u32::from(self.d.iter().any(|&d| d == 0));
        max_c + bump
    }

    /// `sum(d) - sum(c)`, the dual objective; equals the transversal value.
    pub fn degrees_of_freedom(&self) -> i64 {
        let sd: i64 = self.d.iter().map(|&d| d as i64).sum();
        let sc: i64 = self.c.iter().map(|&c| c as i64).sum();
        sd - sc
    }

    pub fn max_c(&self) -> u32 {
        self.c.iter().copied().max().unwrap_or(0)
    }

    pub fn max_d(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }
}

/// Fixed-point iteration: start from `c = 0` and alternate
/// `d[j] = max_i (sigma[i][j] + c[i])` over finite entries with
/// `c[i] = d[t(i)] - sigma[i][t(i)]` until nothing changes. For an optimal
/// transversal this terminates at the componentwise smallest feasible pair;
/// a non-optimal transversal makes `c` grow without bound, which the round
/// budget turns into an error.
pub fn compute_offsets(sigma: &SigmaMatrix, hvt: &Transversal) -> Result<Offsets> {
    let n = sigma.n();
    assert_eq!(hvt.assignment.len(), n, "transversal size must match the matrix");
    let max_sigma = sigma.max_order() as i64;
    let max_rounds = n * (1 + max_sigma as usize) * n + 1;

    let mut c = vec![0i64; n];
    let mut d = vec![0i64; n];
    for _ in 0..=max_rounds {
        let mut changed = false;
        for j in 0..n {
            let mut best: Option<i64> = None;
            for i in 0..n {
                if let Some(s) = sigma.get(i, j) {
                    let candidate = s as i64 + c[i];
                    best = Some(best.map_or(candidate, |b: i64| b.max(candidate)));
                }
            }
            // A column with no finite entry cannot occur here: the
            // transversal assigns a finite entry to every column.
            let new_d = best.expect("transversal guarantees a finite entry per column");
            if new_d != d[j] {
                d[j] = new_d;
                changed = true;
            }
        }
        for (i, &j) in hvt.assignment.iter().enumerate() {
            let s = sigma.get(i, j).expect("transversal entries are finite") as i64;
            let new_c = d[j] - s;
            if new_c != c[i] {
                c[i] = new_c;
                changed = true;
            }
        }
        if !changed {
            let c = c.iter().map(|&v| v as u32).collect();
            let d = d.iter().map(|&v| v as u32).collect();
            return Ok(Offsets { c, d, hvt: hvt.clone() });
        }
    }
    Err(Error::OffsetsDiverged { rounds: max_rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::solve_hvt;
    use crate::sigma::SigmaMatrix;

    fn offsets_of(rows: Vec<Vec<Option<u32>>>) -> Offsets {
        let s = SigmaMatrix::from_rows(rows);
        let t = solve_hvt(&s).unwrap();
        compute_offsets(&s, &t).unwrap()
    }

    #[test]
    fn single_ode() {
        let o = offsets_of(vec![vec![Some(1)]]);
        assert_eq!(o.c, vec![0]);
        assert_eq!(o.d, vec![1]);
        assert_eq!(o.structural_index(), 0);
        assert_eq!(o.degrees_of_freedom(), 1);
    }

    #[test]
    fn tank_k1_case_b() {
        let o = offsets_of(vec![
            vec![Some(0), Some(1), Some(0), Some(0)],
            vec![None, None, Some(1), None],
            vec![None, None, None, Some(0)],
            vec![None, Some(0), None, None],
        ]);
        assert_eq!(o.c, vec![0, 0, 0, 1]);
        assert_eq!(o.d, vec![0, 1, 1, 0]);
        assert_eq!(o.structural_index(), 2);
        assert_eq!(o.degrees_of_freedom(), 1);
    }

    #[test]
    fn equality_holds_on_the_transversal() {
        let s = SigmaMatrix::from_rows(vec![
            vec![Some(2), Some(0), None],
            vec![Some(0), Some(1), Some(0)],
            vec![None, Some(0), Some(3)],
        ]);
        let t = solve_hvt(&s).unwrap();
        let o = compute_offsets(&s, &t).unwrap();
        for (i, &j) in o.hvt.assignment.iter().enumerate() {
            assert_eq!(
                o.d[j] as i64 - o.c[i] as i64,
                s.get(i, j).unwrap() as i64
            );
        }
        assert_eq!(o.degrees_of_freedom(), t.value);
    }

    #[test]
    fn non_optimal_transversal_diverges() {
        // Feasible matrix where swapping the optimal assignment forces the
        // iteration to climb forever.
        let s = SigmaMatrix::from_rows(vec![
            vec![Some(2), Some(0)],
            vec![Some(0), Some(2)],
        ]);
        let bad = Transversal { assignment: vec![1, 0], value: 0 };
        assert!(matches!(
            compute_offsets(&s, &bad),
            Err(Error::OffsetsDiverged { .. })
        ));
    }
}
