//! Exact Euclidean distance transform (separable lower-envelope method).

use super::Mask;
use crate::scalar::Scalar;

/// Per-pixel distances, row-major, same shape as the source mask.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Scalar> DistanceField<T> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }
}

/// Squared distance transform of a sampled function along one line.
fn lower_envelope<T: Scalar>(f: &[T], out: &mut [T], v: &mut [usize], z: &mut [T]) {
    let n = f.len();
    let sq = |q: usize| T::of_usize(q * q);
    let mut k = 0usize;
    v[0] = 0;
    z[0] = T::neg_infinity();
    z[1] = T::infinity();
    let cross = |q: usize, p: usize| ((f[q] + sq(q)) - (f[p] + sq(p))) / T::of_usize(2 * (q - p));
    for q in 1..n {
        let mut s = cross(q, v[k]);
        // z[0] = -inf stops the walk for finite inputs
        while s <= z[k] {
            k -= 1;
            s = cross(q, v[k]);
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = T::infinity();
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < T::of_usize(q) {
            k += 1;
        }
        let d = q.abs_diff(v[k]);
        *o = T::of_usize(d * d) + f[v[k]];
    }
}

/// Euclidean distance from every ink pixel to the nearest background pixel.
///
/// Pixels beyond the mask border count as background. Background maps to 0.
pub fn distance_transform<T: Scalar>(mask: &Mask) -> DistanceField<T> {
    let (w, h) = (mask.width(), mask.height());
    let (pw, ph) = (w + 2, h + 2);
    // larger than any squared distance on the padded grid
    let big = T::of_usize((pw + ph) * (pw + ph));
    let mut grid: Vec<T> = (0..pw * ph)
        .map(|i| {
            let (x, y) = (i % pw, i / pw);
            if x >= 1 && y >= 1 && mask.get(x - 1, y - 1) {
                big
            } else {
                T::zero()
            }
        })
        .collect();

    let n = pw.max(ph);
    let mut f = vec![T::zero(); n];
    let mut out = vec![T::zero(); n];
    let mut v = vec![0usize; n];
    let mut z = vec![T::zero(); n + 1];

    for x in 0..pw {
        for y in 0..ph {
            f[y] = grid[y * pw + x];
        }
        lower_envelope(&f[..ph], &mut out[..ph], &mut v, &mut z);
        for y in 0..ph {
            grid[y * pw + x] = out[y];
        }
    }
    for y in 0..ph {
        let row = &mut grid[y * pw..(y + 1) * pw];
        f[..pw].copy_from_slice(row);
        lower_envelope(&f[..pw], &mut out[..pw], &mut v, &mut z);
        row.copy_from_slice(&out[..pw]);
    }

    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            data.push(grid[(y + 1) * pw + x + 1].sqrt());
        }
    }
    DistanceField {
        width: w,
        height: h,
        data,
    }
}
