use crate::{Error, Result};

/// Pivots smaller than this fraction of their row's largest original
/// coefficient are treated as zero.
pub const SINGULARITY_THRESHOLD: f64 = 1e-10;

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
///
/// Singularity is judged relative to the scale of each original row, so a
/// duplicated equation whose residue after elimination is pure round-off is
/// reported as [`Error::SingularSystem`].
pub fn solve_dense<const N: usize>(mut m: [[f64; N]; N], mut rhs: [f64; N]) -> Result<[f64; N]> {
    let mut scale = [0.0f64; N];
    for (s, row) in scale.iter_mut().zip(&m) {
        *s = row.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    }

    for col in 0..N {
        let pivot_row = (col..N)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap_or(col);
        let pivot = m[pivot_row][col];
        if scale[pivot_row] == 0.0 || pivot.abs() <= SINGULARITY_THRESHOLD * scale[pivot_row] {
            return Err(Error::SingularSystem);
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        scale.swap(col, pivot_row);

        for row in col + 1..N {
            let factor = m[row][col] / pivot;
            if factor == 0.0 {
                continue;
            }
            let pivot_coeffs = m[col];
            for (x, p) in m[row][col..].iter_mut().zip(&pivot_coeffs[col..]) {
                *x -= factor * p;
            }
            rhs[row] -= factor * rhs[col];
        }
    }

    let mut x = [0.0f64; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_identity_and_permutation() {
        let x = solve_dense([[0.0, 1.0], [1.0, 0.0]], [3.0, 4.0]).unwrap();
        assert_eq!(x, [4.0, 3.0]);
    }

    #[test]
    fn solves_small_system() {
        // 2x + y = 5, x + 3y = 10  ->  x = 1, y = 3
        let x = solve_dense([[2.0, 1.0], [1.0, 3.0]], [5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn duplicated_rows_are_singular() {
        let m = [
            [0.5, -0.5, -0.5, 0.5],
            [0.5, -0.5, -0.5, 0.5],
            [0.5, -0.5, -0.5, 0.5],
            [1.0; 4],
        ];
        assert_eq!(
            solve_dense(m, [0.0, 0.0, 0.0, 1.0]),
            Err(Error::SingularSystem)
        );
    }

    #[test]
    fn zero_row_is_singular() {
        assert_eq!(
            solve_dense([[1.0, 0.0], [0.0, 0.0]], [1.0, 0.0]),
            Err(Error::SingularSystem)
        );
    }
}
