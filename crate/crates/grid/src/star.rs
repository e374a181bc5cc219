use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::field::GridField;

/// Row pairs whose spectral weight is below this fraction of the largest
/// are skipped; their contribution is far below double precision.
const NEGLIGIBLE: f64 = 1e-24;

fn transpose(data: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = data[i * n + j];
        }
    }
    out
}

fn fft_rows(data: &mut [Complex64], n: usize, fft: &Arc<dyn Fft<f64>>) {
    data.par_chunks_mut(n).for_each(|row| fft.process(row));
}

/// Coefficients `c[m1][m2]` with
/// `f(x1, x2_j) = sum_{m1} e^{i a_{m1} x1} sum_{m2} c[m1][m2] e^{2 pi i m2 j / N}`.
fn spectrum(f: &GridField, fwd: &Arc<dyn Fft<f64>>) -> Vec<Complex64> {
    let n = f.n();
    let mut data = f.values().to_vec();
    fft_rows(&mut data, n, fwd);
    let mut data = transpose(&data, n);
    fft_rows(&mut data, n, fwd);
    let mut data = transpose(&data, n);
    let norm = 1.0 / (n * n) as f64;
    for (m1, row) in data.chunks_mut(n).enumerate() {
        // e^{2 pi i m n / N} = (-1)^m e^{i a_m x_n} for centered x_n
        let s = if m1 % 2 == 0 { norm } else { -norm };
        row.iter_mut().for_each(|z| *z *= s);
    }
    data
}

/// Star product by twisted convolution.
///
/// For each pair of `x1`-modes `(a1, b1)` the `x2`-profiles are translated
/// spectrally, `f_{a1}(x2 + theta b1 / 2)` and `g_{b1}(x2 - theta a1 / 2)`,
/// multiplied, and accumulated into mode `a1 + b1`; this reproduces the
/// phase `e^{-(i/2) theta (a1 b2 - a2 b1)}` on every mode pair in `O(N^3 log N)`.
pub fn grid_star(f: &GridField, g: &GridField) -> Result<GridField> {
    f.check_compatible(g)?;
    let n = f.n();
    let theta = f.theta();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);

    let fhat = spectrum(f, &fwd);
    let ghat = spectrum(g, &fwd);
    let wave: Vec<f64> = (0..n).map(|k| f.wavenumber(k)).collect();
    let weight = |h: &[Complex64]| -> Vec<f64> {
        h.chunks(n).map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect()
    };
    let wf = weight(&fhat);
    let wg = weight(&ghat);
    let cut = NEGLIGIBLE * wf.iter().cloned().fold(0.0, f64::max) * wg.iter().cloned().fold(0.0, f64::max);

    let zero = Complex64::new(0.0, 0.0);
    let acc = (0..n)
        .into_par_iter()
        .fold(
            || vec![zero; n * n],
            |mut h, m1| {
                let mut bf = vec![zero; n];
                let mut bg = vec![zero; n];
                let mut scratch = vec![zero; inv.get_inplace_scratch_len()];
                let frow = &fhat[m1 * n..(m1 + 1) * n];
                let shift_g = -theta * wave[m1] / 2.0;
                for k1 in 0..n {
                    if wf[m1] * wg[k1] <= cut {
                        continue;
                    }
                    let shift_f = theta * wave[k1] / 2.0;
                    let grow = &ghat[k1 * n..(k1 + 1) * n];
                    for m2 in 0..n {
                        bf[m2] = frow[m2] * Complex64::from_polar(1.0, wave[m2] * shift_f);
                        bg[m2] = grow[m2] * Complex64::from_polar(1.0, wave[m2] * shift_g);
                    }
                    inv.process_with_scratch(&mut bf, &mut scratch);
                    inv.process_with_scratch(&mut bg, &mut scratch);
                    let row = (m1 + k1) % n;
                    let out = &mut h[row * n..(row + 1) * n];
                    for j in 0..n {
                        out[j] += bf[j] * bg[j];
                    }
                }
                h
            },
        )
        .reduce(
            || vec![zero; n * n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    // back to position space along x1
    let mut cols = transpose(&acc, n);
    for col in cols.chunks_mut(n) {
        for (m, z) in col.iter_mut().enumerate() {
            if m % 2 == 1 {
                *z = -*z;
            }
        }
    }
    fft_rows(&mut cols, n, &inv);
    f.with_values(transpose(&cols, n))
}

/// `|sum (f*g) - sum (f g)| * cell_area`.
pub fn grid_trace_defect(f: &GridField, g: &GridField) -> Result<f64> {
    let sg = grid_star(f, g)?;
    let pw = f.pointwise_mul(g)?;
    Ok((sg.integral() - pw.integral()).norm())
}

/// `|sum (f*g) - sum (g*f)| * cell_area`.
pub fn grid_cyclicity_defect(f: &GridField, g: &GridField) -> Result<f64> {
    let fg = grid_star(f, g)?;
    let gf = grid_star(g, f)?;
    Ok((fg.integral() - gf.integral()).norm())
}

/// A defect divided by `||f|| ||g||`.
pub fn relative_defect(defect: f64, f: &GridField, g: &GridField) -> f64 {
    let s = f.l2_norm() * g.l2_norm();
    if s == 0.0 {
        defect
    } else {
        defect / s
    }
}

/// `max |(f*g)*h - f*(g*h)|`.
pub fn associativity_defect(f: &GridField, g: &GridField, h: &GridField) -> Result<f64> {
    let left = grid_star(&grid_star(f, g)?, h)?;
    let right = grid_star(f, &grid_star(g, h)?)?;
    left.max_diff(&right)
}
