use crate::error::{Error, Result};
use crate::tensor::TensorAtPoint;

/// Norm below which a Gram–Schmidt residual counts as dependent.
const DEPENDENT: f64 = 1e-8;

fn inner(g: &TensorAtPoint, x: &[f64], y: &[f64]) -> f64 {
    let d = g.dim();
    let mut acc = 0.0;
    for a in 0..d {
        for b in 0..d {
            acc += g.get(&[a, b]) * x[a] * y[b];
        }
    }
    acc
}

/// Removes the components of `v` along the (orthonormal) `basis`.
pub fn orthogonalize(g: &TensorAtPoint, basis: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    // Two passes keep the result orthogonal to rounding level.
    for _ in 0..2 {
        for e in basis {
            let c = inner(g, &out, e);
            for (o, ei) in out.iter_mut().zip(e) {
                *o -= c * ei;
            }
        }
    }
    out
}

/// Unit vector along `v`, or `None` if `v` is numerically zero.
pub fn normalize(g: &TensorAtPoint, v: &[f64]) -> Option<Vec<f64>> {
    let n = inner(g, v, v).sqrt();
    (n > DEPENDENT).then(|| v.iter().map(|x| x / n).collect())
}

/// g-orthonormal frame from `seeds` followed by coordinate vectors, skipping
/// dependent candidates.
pub fn gram_schmidt(g: &TensorAtPoint, seeds: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = g.dim();
    let coordinate = (0..d).map(|i| {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        e
    });
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d);
    for v in seeds.iter().cloned().chain(coordinate) {
        if frame.len() == d {
            break;
        }
        if let Some(u) = normalize(g, &orthogonalize(g, &frame, &v)) {
            frame.push(u);
        }
    }
    if frame.len() < d {
        return Err(Error::FrameExhausted { found: frame.len(), needed: d });
    }
    Ok(frame)
}

/// Gram matrix `g(E_i, E_j)` of a list of vectors.
pub fn gram_matrix(g: &TensorAtPoint, frame: &[Vec<f64>]) -> Vec<Vec<f64>> {
    frame.iter().map(|x| frame.iter().map(|y| inner(g, x, y)).collect()).collect()
}
