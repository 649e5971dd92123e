use super::Matrix;

/// Kronecker product: block `(i, j)` of the result is `a_ij · B`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (p, q) = (b.rows(), b.cols());
    Matrix::from_fn(a.rows() * p, a.cols() * q, |i, j| a[(i / p, j / q)] * b[(i % p, j % q)])
}

/// Column-stacking vectorization.
pub fn vec(x: &Matrix) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.rows() * x.cols());
    for j in 0..x.cols() {
        for i in 0..x.rows() {
            out.push(x[(i, j)]);
        }
    }
    out
}

/// Inverse of [`vec`] for a `rows × cols` target.
pub fn unvec(v: &[f64], rows: usize, cols: usize) -> Matrix {
    assert_eq!(v.len(), rows * cols, "unvec length mismatch");
    Matrix::from_fn(rows, cols, |i, j| v[j * rows + i])
}
