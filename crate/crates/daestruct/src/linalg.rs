//! Small dense linear algebra: LU with partial pivoting and column-pivoted
//! QR. The matrices here are tiny (a few hundred rows at most), so plain
//! O(n^3) routines are the right tool.

/// Row-major dense matrix view helpers are inlined at call sites; this
/// module works on flat `Vec<f64>` buffers.

pub struct Lu {
    n: usize,
    data: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
    /// Largest absolute entry of the input matrix.
    pub max_abs: f64,
    /// Smallest absolute pivot met during elimination.
    pub min_pivot: f64,
}

/// Factors a row-major n-by-n matrix. Elimination always runs to completion;
/// singularity is judged afterwards from `min_pivot` relative to `max_abs`.
pub fn lu_factor(mut data: Vec<f64>, n: usize) -> Lu {
    assert_eq!(data.len(), n * n);
    let max_abs = data.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let mut best = k;
        let mut best_val = data[perm[k] * n + k].abs();
        for r in (k + 1)..n {
            let v = data[perm[r] * n + k].abs();
            if v > best_val {
                best_val = v;
                best = r;
            }
        }
        if best != k {
            perm.swap(k, best);
            sign = -sign;
        }
        let pivot = data[perm[k] * n + k];
        min_pivot = min_pivot.min(pivot.abs());
        if pivot == 0.0 {
            continue;
        }
        for r in (k + 1)..n {
            let factor = data[perm[r] * n + k] / pivot;
            data[perm[r] * n + k] = factor;
            if factor != 0.0 {
                for c in (k + 1)..n {
                    data[perm[r] * n + c] -= factor * data[perm[k] * n + c];
                }
            }
        }
    }
    if n == 0 {
        min_pivot = f64::INFINITY;
    }
    Lu { n, data, perm, sign, max_abs, min_pivot }
}

impl Lu {
    /// A pivot below `rel_tol` times the matrix max-norm counts as zero.
    pub fn is_singular(&self, rel_tol: f64) -> bool {
        if self.n == 0 {
            return false;
        }
        let scale = if self.max_abs > 0.0 { self.max_abs } else { 1.0 };
        !self.min_pivot.is_finite() || self.min_pivot < rel_tol * scale
    }

    pub fn det(&self) -> f64 {
        let mut det = self.sign;
        for k in 0..self.n {
            det *= self.data[self.perm[k] * self.n + k];
        }
        det
    }

    /// Solves `A x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut y = vec![0.0; n];
        for k in 0..n {
            let mut acc = b[self.perm[k]];
            for c in 0..k {
                acc -= self.data[self.perm[k] * n + c] * y[c];
            }
            y[k] = acc;
        }
        for k in (0..n).rev() {
            let mut acc = y[k];
            for c in (k + 1)..n {
                acc -= self.data[self.perm[k] * n + c] * b[c];
            }
            b[k] = acc / self.data[self.perm[k] * n + k];
        }
    }

    /// 1-norm condition estimate computed from the explicit inverse; the
    /// matrices are small enough that n extra solves are cheap.
    pub fn condition_1(&self, a: &[f64]) -> f64 {
        let n = self.n;
        if n == 0 {
            return 1.0;
        }
        let norm_a = one_norm(a, n);
        let mut norm_inv = 0.0f64;
        let mut col = vec![0.0; n];
        for j in 0..n {
            col.iter_mut().for_each(|v| *v = 0.0);
            col[j] = 1.0;
            self.solve(&mut col);
            let sum: f64 = col.iter().map(|v| v.abs()).sum();
            norm_inv = norm_inv.max(sum);
        }
        norm_a * norm_inv
    }
}

fn one_norm(a: &[f64], n: usize) -> f64 {
    let mut best = 0.0f64;
    for j in 0..n {
        let mut sum = 0.0;
        for i in 0..n {
            sum += a[i * n + j].abs();
        }
        best = best.max(sum);
    }
    best
}

/// Column-pivoted Householder QR of a rows-by-cols matrix.
pub struct PivotedQr {
    /// Column order chosen by pivoting: `perm[0..rank]` are pivot columns.
    pub perm: Vec<usize>,
    /// Numerical rank at the supplied relative tolerance.
    pub rank: usize,
}

pub fn qr_column_pivoted(a: &[f64], rows: usize, cols: usize, rel_tol: f64) -> PivotedQr {
    assert_eq!(a.len(), rows * cols);
    let mut m = a.to_vec();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut col_norms: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| m[i * cols + j] * m[i * cols + j]).sum())
        .collect();
    let steps = rows.min(cols);
    let mut rank = 0;
    let mut first_pivot = 0.0f64;
    for k in 0..steps {
        // Select the remaining column with the largest trailing norm.
        let mut best = k;
        for j in (k + 1)..cols {
            if col_norms[j] > col_norms[best] {
                best = j;
            }
        }
        if best != k {
            perm.swap(k, best);
            col_norms.swap(k, best);
            for i in 0..rows {
                m.swap(i * cols + k, i * cols + best);
            }
        }
        // Householder reflection zeroing column k below the diagonal.
        let mut norm = 0.0f64;
        for i in k..rows {
            norm += m[i * cols + k] * m[i * cols + k];
        }
        let norm = norm.sqrt();
        if k == 0 {
            first_pivot = norm;
        }
        let threshold = rel_tol * if first_pivot > 0.0 { first_pivot } else { 1.0 };
        if norm <= threshold {
            break;
        }
        rank += 1;
        let alpha = if m[k * cols + k] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| m[i * cols + k]).collect();
        v[0] -= alpha;
        let v_norm2: f64 = v.iter().map(|x| x * x).sum();
        if v_norm2 > 0.0 {
            for j in k..cols {
                let mut dot = 0.0;
                for (offset, vi) in v.iter().enumerate() {
                    dot += vi * m[(k + offset) * cols + j];
                }
                let scale = 2.0 * dot / v_norm2;
                for (offset, vi) in v.iter().enumerate() {
                    m[(k + offset) * cols + j] -= scale * vi;
                }
            }
        }
        // Update trailing norms.
        for j in (k + 1)..cols {
            let mut s = 0.0;
            for i in (k + 1)..rows {
                s += m[i * cols + j] * m[i * cols + j];
            }
            col_norms[j] = s;
        }
    }
    PivotedQr { perm, rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_and_dets() {
        let a = vec![2.0, 1.0, 1.0, 3.0];
        let lu = lu_factor(a.clone(), 2);
        assert!((lu.det() - 5.0).abs() < 1e-12);
        let mut b = vec![3.0, 5.0];
        lu.solve(&mut b);
        assert!((b[0] - 0.8).abs() < 1e-12);
        assert!((b[1] - 1.4).abs() < 1e-12);
        assert!(!lu.is_singular(1e-10));
        assert!((lu.condition_1(&a) - 3.2).abs() < 1e-9);
    }

    #[test]
    fn singular_matrix_is_flagged() {
        let a = vec![1.0, 2.0, 2.0, 4.0];
        let lu = lu_factor(a, 2);
        assert!(lu.is_singular(1e-10));
        assert_eq!(lu.det(), 0.0);
    }

    #[test]
    fn qr_ranks_and_pivots() {
        // Column 1 is zero; rank 2 out of 3 columns.
        let a = vec![
            1.0, 0.0, 2.0, //
            0.0, 0.0, 1.0, //
            1.0, 0.0, 0.0,
        ];
        let qr = qr_column_pivoted(&a, 3, 3, 1e-10);
        assert_eq!(qr.rank, 2);
        assert!(!qr.perm[..2].contains(&1));
    }

    #[test]
    fn qr_full_rank_identity() {
        let a = vec![1.0, 0.0, 0.0, 1.0];
        let qr = qr_column_pivoted(&a, 2, 2, 1e-10);
        assert_eq!(qr.rank, 2);
    }
}
