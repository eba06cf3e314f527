//! Planar helpers: polygons, rectangles and point classification.

/// Where a point sits relative to a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

pub fn polygon_area(p: &[[f64; 2]]) -> f64 {
    let n = p.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = p[i];
        let b = p[(i + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * s
}

/// Orient counter-clockwise.
pub fn ccw(mut p: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    if polygon_area(&p) < 0.0 {
        p.reverse();
    }
    p
}

pub fn classify_polygon(p: &[[f64; 2]], q: [f64; 2], tol: f64) -> Location {
    let n = p.len();
    let mut wn = 0i32;
    for i in 0..n {
        let a = p[i];
        let b = p[(i + 1) % n];
        if dist_to_segment(q, a, b) <= tol {
            return Location::Boundary;
        }
        let cross = (b[0] - a[0]) * (q[1] - a[1]) - (q[0] - a[0]) * (b[1] - a[1]);
        if a[1] <= q[1] {
            if b[1] > q[1] && cross > 0.0 {
                wn += 1;
            }
        } else if b[1] <= q[1] && cross < 0.0 {
            wn -= 1;
        }
    }
    if wn != 0 {
        Location::Interior
    } else {
        Location::Outside
    }
}

pub fn dist_to_segment(q: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let l2 = d[0] * d[0] + d[1] * d[1];
    let t = if l2 > 0.0 {
        (((q[0] - a[0]) * d[0] + (q[1] - a[1]) * d[1]) / l2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ((q[0] - a[0] - t * d[0]).powi(2) + (q[1] - a[1] - t * d[1]).powi(2)).sqrt()
}

pub fn classify_rect(lo: [f64; 2], hi: [f64; 2], q: [f64; 2], tol: f64) -> Location {
    let inside = |k: usize| q[k] > lo[k] + tol && q[k] < hi[k] - tol;
    let near = |k: usize| q[k] >= lo[k] - tol && q[k] <= hi[k] + tol;
    if inside(0) && inside(1) {
        Location::Interior
    } else if near(0) && near(1) {
        Location::Boundary
    } else {
        Location::Outside
    }
}

/// Area of `polygon ∩ [lo, hi]` by Sutherland–Hodgman clipping; the clip
/// region is convex, so non-convex subjects are handled correctly.
pub fn clip_area(poly: &[[f64; 2]], lo: [f64; 2], hi: [f64; 2]) -> f64 {
    let mut out: Vec<[f64; 2]> = poly.to_vec();
    for (axis, bound, keep_above) in [(0, lo[0], true), (0, hi[0], false), (1, lo[1], true), (1, hi[1], false)] {
        if out.is_empty() {
            break;
        }
        let input = std::mem::take(&mut out);
        let inside = |p: &[f64; 2]| if keep_above { p[axis] >= bound } else { p[axis] <= bound };
        let n = input.len();
        for i in 0..n {
            let cur = input[i];
            let prev = input[(i + n - 1) % n];
            let (ci, pi) = (inside(&cur), inside(&prev));
            if ci != pi {
                let t = (bound - prev[axis]) / (cur[axis] - prev[axis]);
                out.push([prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])]);
            }
            if ci {
                out.push(cur);
            }
        }
    }
    if out.len() < 3 {
        0.0
    } else {
        polygon_area(&out).abs()
    }
}
