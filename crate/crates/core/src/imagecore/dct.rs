//! Orthonormal DCT-II, one- and two-dimensional, by basis-matrix products.

use std::f64::consts::PI;

use super::ImageError;

/// Row `k` holds the k-th orthonormal DCT-II basis vector of length `n`.
fn basis(n: usize) -> Vec<Vec<f64>> {
    let nf = n as f64;
    (0..n)
        .map(|k| {
            let alpha = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
            (0..n)
                .map(|i| alpha * (PI * (2 * i + 1) as f64 * k as f64 / (2.0 * nf)).cos())
                .collect()
        })
        .collect()
}

/// Orthonormal 1-D DCT-II.
pub fn dct1(signal: &[f64]) -> Vec<f64> {
    let c = basis(signal.len());
    c.iter()
        .map(|row| row.iter().zip(signal).map(|(a, b)| a * b).sum())
        .collect()
}

fn check_square(block: &[Vec<f64>]) -> Result<usize, ImageError> {
    let n = block.len();
    if n == 0 {
        return Err(ImageError::NonSquare { rows: 0, cols: 0 });
    }
    for row in block {
        if row.len() != n {
            return Err(ImageError::NonSquare {
                rows: n,
                cols: row.len(),
            });
        }
    }
    Ok(n)
}

// out = a * m * b^T, all n x n
fn sandwich(a: &[Vec<f64>], m: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut tmp = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            tmp[i][j] = (0..n).map(|k| a[i][k] * m[k][j]).sum();
        }
    }
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = (0..n).map(|k| tmp[i][k] * b[j][k]).sum();
        }
    }
    out
}

fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect()
}

/// Orthonormal 2-D DCT-II of a square matrix.
pub fn dct2(block: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, ImageError> {
    let n = check_square(block)?;
    let c = basis(n);
    Ok(sandwich(&c, block, &c))
}

/// Inverse of [`dct2`] (orthonormal DCT-III).
pub fn idct2(coeffs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, ImageError> {
    let n = check_square(coeffs)?;
    let ct = transpose(&basis(n));
    Ok(sandwich(&ct, coeffs, &ct))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Direct evaluation of the DCT-II double sum.
    fn dct2_direct(x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = x.len();
        let nf = n as f64;
        let alpha = |k: usize| if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
        let mut out = vec![vec![0.0; n]; n];
        for (k, row) in out.iter_mut().enumerate() {
            for (l, cell) in row.iter_mut().enumerate() {
                let mut s = 0.0;
                for (i, xr) in x.iter().enumerate() {
                    for (j, v) in xr.iter().enumerate() {
                        s += v
                            * (PI * (2 * i + 1) as f64 * k as f64 / (2.0 * nf)).cos()
                            * (PI * (2 * j + 1) as f64 * l as f64 / (2.0 * nf)).cos();
                    }
                }
                *cell = alpha(k) * alpha(l) * s;
            }
        }
        out
    }

    #[test]
    fn constant_has_only_dc() {
        let c = 3.25;
        let out = dct2(&vec![vec![c; 8]; 8]).unwrap();
        assert!((out[0][0] - 8.0 * c).abs() < 1e-12);
        for (i, row) in out.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i + j > 0 {
                    assert!(v.abs() < 1e-12, "AC ({i},{j}) = {v}");
                }
            }
        }
    }

    #[test]
    fn identity_2x2_matches_double_sum() {
        let x = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let oracle = dct2_direct(&x);
        // hand evaluation: {{1,0},{0,1}}
        let frozen = [[1.0, 0.0], [0.0, 1.0]];
        let got = dct2(&x).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((got[i][j] - oracle[i][j]).abs() < 1e-12);
                assert!((got[i][j] - frozen[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn matches_double_sum_on_ramp() {
        let x: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..5).map(|j| (i * 7 + j * j) as f64).collect())
            .collect();
        let oracle = dct2_direct(&x);
        let got = dct2(&x).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((got[i][j] - oracle[i][j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn round_trip() {
        let x: Vec<Vec<f64>> = (0..8)
            .map(|i| (0..8).map(|j| ((i * 31 + j * 17) % 23) as f64).collect())
            .collect();
        let back = idct2(&dct2(&x).unwrap()).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert!((back[i][j] - x[i][j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn non_square_rejected() {
        let x = vec![vec![1.0, 2.0], vec![3.0]];
        assert!(matches!(dct2(&x), Err(ImageError::NonSquare { .. })));
        assert!(dct2(&[]).is_err());
    }

    #[test]
    fn dct1_parseval() {
        let x: Vec<f64> = (0..17).map(|i| ((i * 13) % 7) as f64 - 2.5).collect();
        let y = dct1(&x);
        let ex: f64 = x.iter().map(|v| v * v).sum();
        let ey: f64 = y.iter().map(|v| v * v).sum();
        assert!((ex - ey).abs() < 1e-9 * ex);
    }
}
