//! Real Schur decomposition and reordering of its diagonal blocks.
//!
//! The reduction is Householder Hessenberg followed by the Francis
//! double-shift QR iteration (EISPACK `hqr2` structure, Schur vectors
//! accumulated, no back-substitution). Converged 2×2 blocks with real
//! eigenvalues are split by a Givens rotation so every remaining 2×2 block
//! carries a complex-conjugate pair.
//!
//! Reordering moves selected blocks to the leading positions by swapping
//! adjacent blocks. Each swap solves the small Sylvester equation
//! `R11 X − X R22 = R12` and re-triangularizes with the orthogonal factor of
//! `[−X; I]`.

use num_complex::Complex64;

use super::{kron, tol, vec, Matrix};
use crate::error::{Error, Result};

/// `G = U R Uᵀ` with `U` orthogonal and `R` quasi-upper-triangular.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub u: Matrix,
    pub r: Matrix,
    /// Sizes (1 or 2) of the diagonal blocks of `r`, top to bottom.
    pub block_sizes: Vec<usize>,
}

impl SchurForm {
    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    /// Row offset of every diagonal block.
    pub fn block_starts(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .scan(0, |acc, &s| {
                let start = *acc;
                *acc += s;
                Some(start)
            })
            .collect()
    }

    /// Eigenvalues read off the diagonal blocks, in block order. A 2×2 block
    /// contributes `(re + i·im, re − i·im)` with `im > 0`.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.dim());
        for (start, &size) in self.block_starts().iter().zip(&self.block_sizes) {
            if size == 1 {
                out.push(Complex64::new(self.r[(*start, *start)], 0.0));
            } else {
                let (a, b) = block_eigenvalues(&self.r, *start);
                out.push(a);
                out.push(b);
            }
        }
        out
    }

    /// `‖UᵀU − I‖_F`.
    pub fn orthogonality_residual(&self) -> f64 {
        (&(&self.u.transpose() * &self.u) - &Matrix::identity(self.dim())).norm_fro()
    }

    /// `‖UᵀGU − R‖_F`.
    pub fn similarity_residual(&self, g: &Matrix) -> f64 {
        (&(&(&self.u.transpose() * g) * &self.u) - &self.r).norm_fro()
    }

    /// Largest entry of `R` below its block diagonal.
    pub fn below_block_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (start, &size) in self.block_starts().iter().zip(&self.block_sizes) {
            for i in (start + size)..self.dim() {
                for j in *start..(start + size) {
                    worst = worst.max(self.r[(i, j)].abs());
                }
            }
        }
        worst
    }
}

fn block_eigenvalues(r: &Matrix, k: usize) -> (Complex64, Complex64) {
    let (a, b, c, d) = (r[(k, k)], r[(k, k + 1)], r[(k + 1, k)], r[(k + 1, k + 1)]);
    let p = 0.5 * (a - d);
    let disc = p * p + b * c;
    let mid = 0.5 * (a + d);
    if disc >= 0.0 {
        let s = disc.sqrt();
        (Complex64::new(mid + s, 0.0), Complex64::new(mid - s, 0.0))
    } else {
        let s = (-disc).sqrt();
        (Complex64::new(mid, s), Complex64::new(mid, -s))
    }
}

/// Householder reduction to upper Hessenberg form, returning `(H, Q)` with
/// `A = Q H Qᵀ`.
fn hessenberg(a: &Matrix) -> (Matrix, Matrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut v = Matrix::identity(n);
    if n < 3 {
        return (h, v);
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];

    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[(i, m - 1)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let f: f64 = (m..=high).rev().map(|i| ort[i] * h[(i, j)]).sum::<f64>() / hh;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let f: f64 = (m..=high).rev().map(|j| ort[j] * h[(i, j)]).sum::<f64>() / hh;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        ort[m] *= scale;
        h[(m, m - 1)] = scale * g;
    }

    for m in (1..high).rev() {
        if h[(m, m - 1)] == 0.0 {
            continue;
        }
        for i in (m + 1)..=high {
            ort[i] = h[(i, m - 1)];
        }
        for j in m..=high {
            let g: f64 = (m..=high).map(|i| ort[i] * v[(i, j)]).sum();
            let g = (g / ort[m]) / h[(m, m - 1)];
            for i in m..=high {
                v[(i, j)] += g * ort[i];
            }
        }
    }

    for i in 2..n {
        for j in 0..(i - 1) {
            h[(i, j)] = 0.0;
        }
    }
    (h, v)
}

/// Real Schur decomposition `G = U R Uᵀ`.
///
/// Fails with [`Error::NotConverged`] if the QR iteration needs more than
/// `100·d` iterations in total.
pub fn real_schur(g: &Matrix) -> Result<SchurForm> {
    let nn = g.ensure_square("Schur input")?;
    if !g.is_finite() {
        return Err(Error::Precondition("matrix has non-finite entries".into()));
    }
    let (mut h, mut v) = hessenberg(g);
    let mut complex_block_at = vec![false; nn];
    let max_iter = 100 * nn.max(1);
    let eps = f64::EPSILON;

    let norm: f64 = (0..nn)
        .map(|i| (i.saturating_sub(1)..nn).map(|j| h[(i, j)].abs()).sum::<f64>())
        .sum();

    let mut n = nn as isize - 1;
    let mut exshift = 0.0;
    let mut iter = 0usize;
    let mut total = 0usize;
    let (mut p, mut q, mut r, mut s, mut z);
    let (mut x, mut y, mut w);

    while n >= 0 {
        let nu = n as usize;
        // Look for a single small sub-diagonal element.
        let mut l = nu;
        while l > 0 {
            s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == nu {
            // One root.
            h[(nu, nu)] += exshift;
            if nu > 0 {
                h[(nu, nu - 1)] = 0.0;
            }
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            // Two roots.
            let m1 = nu - 1;
            w = h[(nu, m1)] * h[(m1, nu)];
            p = (h[(m1, m1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(m1, m1)] += exshift;

            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                x = h[(nu, m1)];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in m1..nn {
                    z = h[(m1, j)];
                    h[(m1, j)] = q * z + p * h[(nu, j)];
                    h[(nu, j)] = q * h[(nu, j)] - p * z;
                }
                for i in 0..=nu {
                    z = h[(i, m1)];
                    h[(i, m1)] = q * z + p * h[(i, nu)];
                    h[(i, nu)] = q * h[(i, nu)] - p * z;
                }
                for i in 0..nn {
                    z = v[(i, m1)];
                    v[(i, m1)] = q * z + p * v[(i, nu)];
                    v[(i, nu)] = q * v[(i, nu)] - p * z;
                }
                h[(nu, m1)] = 0.0;
            } else {
                complex_block_at[m1] = true;
            }
            if m1 > 0 {
                h[(m1, m1 - 1)] = 0.0;
            }
            n -= 2;
            iter = 0;
        } else {
            // No convergence yet: one double-shift QR sweep on rows l..=n.
            total += 1;
            if total > max_iter {
                return Err(Error::NotConverged { routine: "real Schur QR iteration", iterations: max_iter });
            }
            x = h[(nu, nu)];
            y = h[(nu - 1, nu - 1)];
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];

            if iter == 10 {
                // Wilkinson's ad hoc shift.
                exshift += x;
                for i in 0..=nu {
                    h[(i, i)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in 0..=nu {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;

            // Look for two consecutive small sub-diagonal elements.
            let mut m = nu - 2;
            loop {
                z = h[(m, m)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - r - s;
                r = h[(m + 2, m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(m, m - 1)].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in (m + 2)..=nu {
                h[(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // Double QR step involving rows l..=n and columns m..=n.
            let mut k = m;
            while k < nu {
                let notlast = k != nu - 1;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        k += 1;
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        let mut t = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            t += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= t * z;
                        }
                        h[(k, j)] -= t * x;
                        h[(k + 1, j)] -= t * y;
                    }
                    for i in 0..=nu.min(k + 3) {
                        let mut t = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            t += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= t * r;
                        }
                        h[(i, k)] -= t;
                        h[(i, k + 1)] -= t * q;
                    }
                    for i in 0..nn {
                        let mut t = x * v[(i, k)] + y * v[(i, k + 1)];
                        if notlast {
                            t += z * v[(i, k + 2)];
                            v[(i, k + 2)] -= t * r;
                        }
                        v[(i, k)] -= t;
                        v[(i, k + 1)] -= t * q;
                    }
                }
                k += 1;
            }
        }
    }

    let mut block_sizes = Vec::new();
    let mut i = 0;
    while i < nn {
        if complex_block_at[i] {
            block_sizes.push(2);
            i += 2;
        } else {
            block_sizes.push(1);
            i += 1;
        }
    }
    let mut sf = SchurForm { u: v, r: h, block_sizes };
    clear_below_blocks(&mut sf);
    Ok(sf)
}

fn clear_below_blocks(sf: &mut SchurForm) {
    let n = sf.dim();
    for (start, &size) in sf.block_starts().iter().zip(&sf.block_sizes) {
        for i in (start + size)..n {
            for j in *start..(start + size) {
                sf.r[(i, j)] = 0.0;
            }
        }
    }
}

/// Reorders `sf` so that every block whose eigenvalues satisfy `select`
/// comes first. Returns the reordered form and `k`, the dimension of the
/// leading selected block `R₁₁`.
///
/// Both eigenvalues of a 2×2 block must receive the same verdict.
pub fn reorder_schur(
    sf: &SchurForm,
    select: impl Fn(Complex64) -> bool,
) -> Result<(SchurForm, usize)> {
    let eig = sf.eigenvalues();
    let mut mask = Vec::with_capacity(sf.block_sizes.len());
    let mut idx = 0;
    for &size in &sf.block_sizes {
        let first = select(eig[idx]);
        if size == 2 && select(eig[idx + 1]) != first {
            return Err(Error::SplitConjugatePair(eig[idx], eig[idx + 1]));
        }
        mask.push(first);
        idx += size;
    }
    reorder_schur_by_mask(sf, &mask)
}

/// Block-level variant of [`reorder_schur`]: `mask[b]` selects block `b`.
pub fn reorder_schur_by_mask(sf: &SchurForm, mask: &[bool]) -> Result<(SchurForm, usize)> {
    if mask.len() != sf.block_sizes.len() {
        return Err(Error::DimensionMismatch(format!(
            "selection mask has {} entries for {} blocks",
            mask.len(),
            sf.block_sizes.len()
        )));
    }
    let mut out = sf.clone();
    let mut selected = mask.to_vec();
    let mut target = 0usize;
    for b in 0..selected.len() {
        if !selected[b] {
            continue;
        }
        let mut cur = b;
        while cur > target {
            swap_adjacent(&mut out, cur - 1)?;
            out.block_sizes.swap(cur - 1, cur);
            selected.swap(cur - 1, cur);
            cur -= 1;
        }
        target += 1;
    }
    let k = out.block_sizes[..target].iter().sum();
    Ok((out, k))
}

/// Swaps diagonal blocks `b` and `b + 1` in place (sizes are swapped by the
/// caller).
fn swap_adjacent(sf: &mut SchurForm, b: usize) -> Result<()> {
    let starts = sf.block_starts();
    let j = starts[b];
    let p = sf.block_sizes[b];
    let q = sf.block_sizes[b + 1];
    let m = p + q;
    let n = sf.dim();
    let scale = sf.r.norm_fro().max(f64::MIN_POSITIVE);

    let r11 = sf.r.block(j, j + p, j, j + p);
    let r12 = sf.r.block(j, j + p, j + p, j + m);
    let r22 = sf.r.block(j + p, j + m, j + p, j + m);

    // (I_q ⊗ R11 − R22ᵀ ⊗ I_p) vec X = vec R12
    let sylv = &kron(&Matrix::identity(q), &r11) - &kron(&r22.transpose(), &Matrix::identity(p));
    let x = sylv.solve(&vec(&r12)).map_err(|_| Error::SwapFailed { position: j, residual: f64::INFINITY })?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SwapFailed { position: j, residual: f64::INFINITY });
    }

    // Orthogonal Q whose first q columns span range([−X; I_q]).
    let mut basis = Matrix::zeros(m, q);
    for c in 0..q {
        for r in 0..p {
            basis[(r, c)] = -x[c * p + r];
        }
        basis[(p + c, c)] = 1.0;
    }
    let qmat = householder_q(&basis);

    // R ← Qᵀ R Q on the affected rows/columns, U ← U Q.
    let qt = qmat.transpose();
    let rows_blk = sf.r.block(j, j + m, j, n);
    sf.r.set_block(j, j, &(&qt * &rows_blk));
    let cols_blk = sf.r.block(0, j + m, j, j + m);
    sf.r.set_block(0, j, &(&cols_blk * &qmat));
    let u_blk = sf.u.block(0, n, j, j + m);
    sf.u.set_block(0, j, &(&u_blk * &qmat));

    let mut residual = 0.0_f64;
    for r in (j + q)..(j + m) {
        for c in j..(j + q) {
            residual = residual.max(sf.r[(r, c)].abs());
            sf.r[(r, c)] = 0.0;
        }
    }
    if residual > tol::SCHUR * scale {
        return Err(Error::SwapFailed { position: j, residual });
    }

    if q == 2 {
        standardize_block(sf, j);
    }
    if p == 2 {
        standardize_block(sf, j + q);
    }
    Ok(())
}

/// A 2×2 block that drifted to real eigenvalues (only possible through
/// rounding) is split by a rotation; complex blocks are left alone.
fn standardize_block(sf: &mut SchurForm, k: usize) {
    let (a, b, c, d) = (sf.r[(k, k)], sf.r[(k, k + 1)], sf.r[(k + 1, k)], sf.r[(k + 1, k + 1)]);
    if c == 0.0 {
        return;
    }
    let p = 0.5 * (a - d);
    let disc = p * p + b * c;
    if disc < 0.0 {
        return;
    }
    let lambda = 0.5 * (a + d) + if p >= 0.0 { disc.sqrt() } else { -disc.sqrt() };
    let (v1, v2) = if (b * b + (lambda - a).powi(2)) >= ((lambda - d).powi(2) + c * c) {
        (b, lambda - a)
    } else {
        (lambda - d, c)
    };
    let nrm = v1.hypot(v2);
    let (cs, sn) = (v1 / nrm, v2 / nrm);
    let n = sf.dim();
    for j in k..n {
        let t1 = sf.r[(k, j)];
        let t2 = sf.r[(k + 1, j)];
        sf.r[(k, j)] = cs * t1 + sn * t2;
        sf.r[(k + 1, j)] = -sn * t1 + cs * t2;
    }
    for i in 0..(k + 2) {
        let t1 = sf.r[(i, k)];
        let t2 = sf.r[(i, k + 1)];
        sf.r[(i, k)] = cs * t1 + sn * t2;
        sf.r[(i, k + 1)] = -sn * t1 + cs * t2;
    }
    for i in 0..n {
        let t1 = sf.u[(i, k)];
        let t2 = sf.u[(i, k + 1)];
        sf.u[(i, k)] = cs * t1 + sn * t2;
        sf.u[(i, k + 1)] = -sn * t1 + cs * t2;
    }
    sf.r[(k + 1, k)] = 0.0;
    let idx = sf.block_starts().iter().position(|&s| s == k).expect("block start");
    sf.block_sizes[idx] = 1;
    sf.block_sizes.insert(idx + 1, 1);
}

/// Full orthogonal factor of the Householder QR of a tall matrix.
pub(crate) fn householder_q(a: &Matrix) -> Matrix {
    let (m, ncols) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut q = Matrix::identity(m);
    for k in 0..ncols.min(m.saturating_sub(1)) {
        let norm: f64 = (k..m).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in 0..ncols {
            let dot: f64 = (k..m).map(|i| v[i - k] * r[(i, j)]).sum::<f64>() * 2.0 / vnorm2;
            for i in k..m {
                r[(i, j)] -= dot * v[i - k];
            }
        }
        for i in 0..m {
            let dot: f64 = (k..m).map(|t| q[(i, t)] * v[t - k]).sum::<f64>() * 2.0 / vnorm2;
            for t in k..m {
                q[(i, t)] -= dot * v[t - k];
            }
        }
    }
    q
}
