use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::array::{strides_of, CoefficientArray};
use crate::error::{Error, Result};

/// Results smaller than this many entries use the direct path.
pub const DIRECT_THRESHOLD: usize = 4096;

/// Magnitudes below this are zeroed after a transform-based product.
pub const DUST: f64 = 1e-15;

fn result_geometry(a: &CoefficientArray, b: &CoefficientArray) -> Result<(Vec<i64>, Vec<usize>)> {
    if a.dims() != b.dims() {
        return Err(Error::Dimension { expected: format!("{} dimensions", a.dims()), got: b.dims().to_string() });
    }
    let offsets = a.offsets().iter().zip(b.offsets()).map(|(x, y)| x + y).collect();
    let shape = a.shape().iter().zip(b.shape()).map(|(x, y)| x + y - 1).collect();
    Ok((offsets, shape))
}

/// Flat positions of `a`'s nonzero entries laid out with `strides`.
fn placed(a: &CoefficientArray, strides: &[usize], skip_zero: bool) -> Vec<(usize, f64)> {
    let a_strides = a.strides();
    let mut out = Vec::with_capacity(a.len());
    for (i, &v) in a.values().iter().enumerate() {
        if skip_zero && v == 0.0 {
            continue;
        }
        let mut rem = i;
        let mut pos = 0;
        for d in 0..a.dims() {
            pos += (rem / a_strides[d]) * strides[d];
            rem %= a_strides[d];
        }
        out.push((pos, v));
    }
    out
}

/// Schoolbook n-dimensional convolution.
pub fn conv_direct(a: &CoefficientArray, b: &CoefficientArray) -> Result<CoefficientArray> {
    let (offsets, shape) = result_geometry(a, b)?;
    let strides = strides_of(&shape);
    let pa = placed(a, &strides, true);
    let pb = placed(b, &strides, true);
    let mut out = CoefficientArray::zeros(offsets, shape);
    let vals = out.values_mut();
    for &(i, x) in &pa {
        for &(j, y) in &pb {
            vals[i + j] += x * y;
        }
    }
    Ok(out)
}

fn fft_nd(buf: &mut [Complex64], shape: &[usize], planner: &mut FftPlanner<f64>, inverse: bool) {
    let strides = strides_of(shape);
    let total = buf.len();
    let mut line = Vec::new();
    for d in 0..shape.len() {
        let n = shape[d];
        if n == 1 {
            continue;
        }
        let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
        let s = strides[d];
        line.resize(n, Complex64::new(0.0, 0.0));
        // Each line is identified by a flat index with coordinate d equal to zero.
        for base in 0..total {
            if !(base / s).is_multiple_of(n) {
                continue;
            }
            for k in 0..n {
                line[k] = buf[base + k * s];
            }
            fft.process(&mut line);
            for k in 0..n {
                buf[base + k * s] = line[k];
            }
        }
    }
}

/// Convolution through n-dimensional FFTs on the exact result extents.
pub fn conv_fft(a: &CoefficientArray, b: &CoefficientArray) -> Result<CoefficientArray> {
    let (offsets, shape) = result_geometry(a, b)?;
    let strides = strides_of(&shape);
    let total: usize = shape.iter().product();
    let mut fa = vec![Complex64::new(0.0, 0.0); total];
    let mut fb = fa.clone();
    for (i, v) in placed(a, &strides, false) {
        fa[i].re = v;
    }
    for (i, v) in placed(b, &strides, false) {
        fb[i].re = v;
    }
    let mut planner = FftPlanner::new();
    fft_nd(&mut fa, &shape, &mut planner, false);
    fft_nd(&mut fb, &shape, &mut planner, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    fft_nd(&mut fa, &shape, &mut planner, true);
    let scale = 1.0 / total as f64;
    let values = fa
        .iter()
        .map(|c| {
            let v = c.re * scale;
            if v.abs() < DUST {
                0.0
            } else {
                v
            }
        })
        .collect();
    CoefficientArray::new(offsets, shape, values)
}

/// Convolution choosing the direct or transform path by result size.
pub fn conv(a: &CoefficientArray, b: &CoefficientArray) -> Result<CoefficientArray> {
    let (_, shape) = result_geometry(a, b)?;
    if shape.iter().product::<usize>() < DIRECT_THRESHOLD {
        conv_direct(a, b)
    } else {
        conv_fft(a, b)
    }
}

/// Convolution of a whole list, left to right.
pub fn conv_all(arrays: &[&CoefficientArray]) -> Result<CoefficientArray> {
    let (first, rest) = arrays.split_first().ok_or_else(|| Error::InvalidParams("empty convolution list".into()))?;
    let mut acc = (*first).clone();
    for a in rest {
        acc = conv(&acc, a)?;
    }
    Ok(acc)
}

/// `a` convolved with itself `n` times; `n = 0` gives the constant 1.
pub fn power(a: &CoefficientArray, n: u32) -> Result<CoefficientArray> {
    let mut acc = CoefficientArray::constant(a.dims(), 1.0);
    for _ in 0..n {
        acc = conv(&acc, a)?;
    }
    Ok(acc)
}
