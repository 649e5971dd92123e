use super::Matrix;
use crate::error::{Error, Result};

const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring around a degree-13 Padé
/// approximant.
pub fn expm(m: &Matrix) -> Result<Matrix> {
    let n = m.ensure_square("expm input")?;
    if !m.is_finite() {
        return Err(Error::Numerical("expm input has non-finite entries".into()));
    }
    let norm = m.norm_one();
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let a = m.scale(0.5_f64.powi(s));

    let id = Matrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE_13;

    let u_inner = &(&a6.scale(b[13]) + &a4.scale(b[11])) + &a2.scale(b[9]);
    let u_tail = &(&(&a6.scale(b[7]) + &a4.scale(b[5])) + &a2.scale(b[3])) + &id.scale(b[1]);
    let u = &a * &(&(&a6 * &u_inner) + &u_tail);

    let v_inner = &(&a6.scale(b[12]) + &a4.scale(b[10])) + &a2.scale(b[8]);
    let v_tail = &(&(&a6.scale(b[6]) + &a4.scale(b[4])) + &a2.scale(b[2])) + &id.scale(b[0]);
    let v = &(&a6 * &v_inner) + &v_tail;

    let p = &v + &u;
    let q = &v - &u;
    let lu = q.lu().map_err(|_| Error::Numerical("singular Padé denominator in expm".into()))?;
    let mut r = Matrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| p[(i, j)]).collect();
        for (i, x) in lu.solve(&col).into_iter().enumerate() {
            r[(i, j)] = x;
        }
    }
    for _ in 0..s {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(Error::Numerical("expm overflowed".into()));
    }
    Ok(r)
}
