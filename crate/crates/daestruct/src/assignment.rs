//! Maximum-weight transversal of the signature matrix, i.e. the assignment
//! problem over its finite entries.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sigma::SigmaMatrix;

/// One finite entry per row and per column, maximizing the entry sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transversal {
    /// `assignment[i]` is the column picked for row `i`; a bijection.
    pub assignment: Vec<usize>,
    /// Sum of the signature entries on the assignment.
    pub value: i64,
}

const INF: i64 = i64::MAX / 4;

/// Solves the assignment problem by shortest augmenting paths with
/// potentials, in O(n^3). Absent entries are forbidden edges; when no
/// complete assignment avoids them the system is structurally singular.
/// Rows are scanned in ascending index, which makes the returned optimal
/// assignment deterministic; any optimal assignment is acceptable since the
/// canonical offsets do not depend on the choice.
pub fn solve_hvt(sigma: &SigmaMatrix) -> Result<Transversal> {
    let n = sigma.n();
    // Minimization form: cost = -sigma on finite entries.
    let cost = |i: usize, j: usize| -> i64 {
        match sigma.get(i, j) {
            Some(v) => -(v as i64),
            None => INF,
        }
    };

    let virt = n; // virtual column holding the row being inserted
    let mut row_potential = vec![0i64; n];
    let mut col_potential = vec![0i64; n + 1];
    let mut row_for_col: Vec<usize> = vec![usize::MAX; n + 1];

    for i in 0..n {
        row_for_col[virt] = i;
        let mut j0 = virt;
        let mut min_slack = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        let mut predecessor = vec![virt; n + 1];

        loop {
            used[j0] = true;
            let i0 = row_for_col[j0];
            let mut delta = INF;
            let mut j1 = virt;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                let c = cost(i0, j);
                if c < INF {
                    let reduced = c - row_potential[i0] - col_potential[j];
                    if reduced < min_slack[j] {
                        min_slack[j] = reduced;
                        predecessor[j] = j0;
                    }
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            if delta >= INF {
                return Err(Error::StructurallySingular);
            }
            for j in 0..=n {
                if used[j] {
                    if row_for_col[j] != usize::MAX {
                        row_potential[row_for_col[j]] += delta;
                    }
                    col_potential[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if row_for_col[j0] == usize::MAX {
                break;
            }
        }

        // Augment along the alternating path back to the virtual column.
        loop {
            let j1 = predecessor[j0];
            row_for_col[j0] = row_for_col[j1];
            j0 = j1;
            if j0 == virt {
                break;
            }
        }
    }

    let mut assignment = vec![usize::MAX; n];
    for j in 0..n {
        let i = row_for_col[j];
        debug_assert!(i < n);
        assignment[i] = j;
    }
    let mut value = 0i64;
    for (i, &j) in assignment.iter().enumerate() {
        let entry = sigma.get(i, j).expect("matched entry must be finite");
        value += entry as i64;
    }
    Ok(Transversal { assignment, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: Vec<Vec<Option<u32>>>) -> SigmaMatrix {
        SigmaMatrix::from_rows(rows)
    }

    #[test]
    fn single_entry() {
        let t = solve_hvt(&mat(vec![vec![Some(1)]])).unwrap();
        assert_eq!(t.assignment, vec![0]);
        assert_eq!(t.value, 1);
    }

    #[test]
    fn unreachable_column_is_singular() {
        let s = mat(vec![vec![Some(0), None], vec![Some(0), None]]);
        assert!(matches!(solve_hvt(&s), Err(Error::StructurallySingular)));
    }

    #[test]
    fn tank_k1_case_b_matrix() {
        // Rows: concentration ODE, volume, q equation, constraint.
        // Columns: C0, C1, V1, q.
        let s = mat(vec![
            vec![Some(0), Some(1), Some(0), Some(0)],
            vec![None, None, Some(1), None],
            vec![None, None, None, Some(0)],
            vec![None, Some(0), None, None],
        ]);
        let t = solve_hvt(&s).unwrap();
        assert_eq!(t.value, 1);
        assert_eq!(t.assignment, vec![0, 2, 3, 1]);
    }

    #[test]
    fn empty_matrix() {
        let t = solve_hvt(&mat(vec![])).unwrap();
        assert_eq!(t.value, 0);
        assert!(t.assignment.is_empty());
    }

    #[test]
    fn prefers_heavier_diagonal() {
        let s = mat(vec![
            vec![Some(3), Some(0)],
            vec![Some(0), Some(3)],
        ]);
        let t = solve_hvt(&s).unwrap();
        assert_eq!(t.value, 6);
        assert_eq!(t.assignment, vec![0, 1]);
    }
}
