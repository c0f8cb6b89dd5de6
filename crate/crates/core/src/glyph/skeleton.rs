//! Morphological thinning to a one-pixel-wide skeleton.
//!
//! Each pass has two subiterations in the Zhang-Suen style: the first
//! marks south-east border points, the second north-west ones, both
//! judged on the image as it stood before the subiteration. Marked points
//! are then deleted in scan order, each re-checked to be simple (removal
//! keeps the 8-connected topology of its neighborhood). An isolated pixel
//! is never simple, so no component can vanish the way a 2x2 block does under purely
//! parallel deletion.

use super::Mask;

// E, NE, N, NW, W, SW, S, SE
const RING: [(isize, isize); 8] = [
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

fn ring(mask: &Mask, x: usize, y: usize) -> [bool; 8] {
    let (x, y) = (x as isize, y as isize);
    RING.map(|(dx, dy)| mask.get_signed(x + dx, y + dy))
}

/// Yokoi connectivity number for 8-connected foreground.
fn connectivity(n: &[bool; 8]) -> u8 {
    let bg = |i: usize| u8::from(!n[i % 8]);
    [0usize, 2, 4, 6]
        .iter()
        .map(|&k| bg(k) - bg(k) * bg(k + 1) * bg(k + 2))
        .sum()
}

fn is_simple(n: &[bool; 8]) -> bool {
    connectivity(n) == 1
}


fn transitions(n: &[bool; 8]) -> usize {
    // clockwise from N: N, NE, E, SE, S, SW, W, NW
    let cw = [n[2], n[1], n[0], n[7], n[6], n[5], n[4], n[3]];
    (0..8).filter(|&i| !cw[i] && cw[(i + 1) % 8]).count()
}

fn marked(n: &[bool; 8], first: bool) -> bool {
    let (e, north, w, s) = (n[0], n[2], n[4], n[6]);
    let b = n.iter().filter(|&&v| v).count();
    if !(2..=6).contains(&b) || transitions(n) != 1 {
        return false;
    }
    if first {
        !(north && e && s) && !(e && s && w)
    } else {
        !(north && e && w) && !(north && s && w)
    }
}

/// Thins `mask` until no border point can be removed.
///
/// The result is a subset of the input and keeps at least one pixel of
/// every connected component.
pub fn skeletonize(mask: &Mask) -> Mask {
    let mut img = mask.clone();
    let mut candidates = Vec::new();
    loop {
        let mut changed = false;
        for first in [true, false] {
            candidates.clear();
            candidates.extend(img.pixels().filter(|&(x, y)| marked(&ring(&img, x, y), first)));
            for &(x, y) in &candidates {
                if is_simple(&ring(&img, x, y)) {
                    img.set(x, y, false);
                    changed = true;
                }
            }
        }
        if !changed {
            return img;
        }
    }
}
