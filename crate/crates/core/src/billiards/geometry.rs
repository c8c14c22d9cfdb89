//! Plane isometries and convex polygon helpers.

pub type Point = [f64; 2];

/// `x -> L x + t` with `L` orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub linear: [[f64; 2]; 2],
    pub translation: Point,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        linear: [[1.0, 0.0], [0.0, 1.0]],
        translation: [0.0, 0.0],
    };

    pub fn apply(&self, p: Point) -> Point {
        let l = &self.linear;
        [
            l[0][0] * p[0] + l[0][1] * p[1] + self.translation[0],
            l[1][0] * p[0] + l[1][1] * p[1] + self.translation[1],
        ]
    }

    /// `self` after `inner`: `x -> self(inner(x))`.
    pub fn compose(&self, inner: &Isometry) -> Isometry {
        let (a, b) = (&self.linear, &inner.linear);
        let mut linear = [[0.0; 2]; 2];
        for (i, row) in linear.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Isometry {
            linear,
            translation: self.apply(inner.translation),
        }
    }

    /// Reflection in the line through `p` and `q`.
    pub fn reflection(p: Point, q: Point) -> Isometry {
        let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
        let len2 = dx * dx + dy * dy;
        let (c, s) = ((dx * dx - dy * dy) / len2, 2.0 * dx * dy / len2);
        let linear = [[c, s], [s, -c]];
        let moved = Isometry {
            linear,
            translation: [0.0, 0.0],
        }
        .apply(p);
        Isometry {
            linear,
            translation: [p[0] - moved[0], p[1] - moved[1]],
        }
    }

    pub fn inverse(&self) -> Isometry {
        let l = &self.linear;
        let linear = [[l[0][0], l[1][0]], [l[0][1], l[1][1]]];
        let t = Isometry {
            linear,
            translation: [0.0, 0.0],
        }
        .apply(self.translation);
        Isometry {
            linear,
            translation: [-t[0], -t[1]],
        }
    }

    pub fn determinant(&self) -> f64 {
        self.linear[0][0] * self.linear[1][1] - self.linear[0][1] * self.linear[1][0]
    }

    /// The isometry sending `from[k]` to `to[k]`, from the first three points.
    pub fn from_points(from: &[Point], to: &[Point]) -> Option<Isometry> {
        if from.len() < 3 || to.len() < 3 {
            return None;
        }
        // solve L (from1 - from0) = to1 - to0, L (from2 - from0) = to2 - to0
        let u = [sub(from[1], from[0]), sub(from[2], from[0])];
        let v = [sub(to[1], to[0]), sub(to[2], to[0])];
        let det = u[0][0] * u[1][1] - u[1][0] * u[0][1];
        if det.abs() < 1e-300 {
            return None;
        }
        // L = V U^-1 with columns u0, u1 and v0, v1
        let inv = [
            [u[1][1] / det, -u[1][0] / det],
            [-u[0][1] / det, u[0][0] / det],
        ];
        let mut linear = [[0.0; 2]; 2];
        for (i, row) in linear.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = v[0][i] * inv[0][j] + v[1][i] * inv[1][j];
            }
        }
        let base = Isometry {
            linear,
            translation: [0.0, 0.0],
        }
        .apply(from[0]);
        Some(Isometry {
            linear,
            translation: sub(to[0], base),
        })
    }

    pub fn max_deviation(&self, other: &Isometry, probe: &[Point]) -> f64 {
        probe
            .iter()
            .map(|&p| dist(self.apply(p), other.apply(p)))
            .fold(0.0, f64::max)
    }
}

pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Signed area, positive for counterclockwise vertex order.
pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        / 2.0
}

/// Counterclockwise copy of a polygon.
pub fn ccw(poly: &[Point]) -> Vec<Point> {
    let mut v = poly.to_vec();
    if signed_area(&v) < 0.0 {
        v.reverse();
    }
    v
}

/// Area of the intersection of two convex polygons (Sutherland-Hodgman).
pub fn convex_intersection_area(a: &[Point], b: &[Point]) -> f64 {
    let mut out = ccw(a);
    let clip = ccw(b);
    let n = clip.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let (p, q) = (clip[i], clip[(i + 1) % n]);
        let side = |x: Point| (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0]);
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let (cur, prev) = (input[j], input[(j + input.len() - 1) % input.len()]);
            let (sc, sp) = (side(cur), side(prev));
            if sc >= 0.0 {
                if sp < 0.0 {
                    out.push(crossing(prev, cur, sp, sc));
                }
                out.push(cur);
            } else if sp >= 0.0 {
                out.push(crossing(prev, cur, sp, sc));
            }
        }
    }
    if out.len() < 3 {
        0.0
    } else {
        signed_area(&out).abs()
    }
}

fn crossing(a: Point, b: Point, sa: f64, sb: f64) -> Point {
    let t = sa / (sa - sb);
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Whether `p` lies in the closed convex polygon, up to `eps`.
pub fn convex_contains(poly: &[Point], p: Point, eps: f64) -> bool {
    let poly = ccw(poly);
    let n = poly.len();
    (0..n).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let len = dist(a, b);
        ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])) / len >= -eps
    })
}

/// Distance from `p` to the segment `ab`.
pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = sub(b, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0)
    };
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_is_an_involution() {
        let r = Isometry::reflection([0.3, -1.0], [2.0, 0.7]);
        let rr = r.compose(&r);
        let probe = [[0.0, 0.0], [1.0, 2.0], [-3.0, 0.5]];
        assert!(rr.max_deviation(&Isometry::IDENTITY, &probe) < 1e-12);
        assert!((r.determinant() + 1.0).abs() < 1e-12);
        // points on the line stay put
        assert!(dist(r.apply([0.3, -1.0]), [0.3, -1.0]) < 1e-12);
    }

    #[test]
    fn isometry_from_points_recovers_map() {
        let g = Isometry::reflection([1.0, 0.0], [0.0, 1.0]).compose(&Isometry {
            linear: [[0.0, -1.0], [1.0, 0.0]],
            translation: [2.0, 3.0],
        });
        let from = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let to: Vec<Point> = from.iter().map(|&p| g.apply(p)).collect();
        let h = Isometry::from_points(&from, &to).unwrap();
        assert!(h.max_deviation(&g, &[[5.0, -2.0], [0.1, 0.2]]) < 1e-12);
    }

    #[test]
    fn intersection_areas() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let shifted = [[0.5, 0.5], [1.5, 0.5], [1.5, 1.5], [0.5, 1.5]];
        assert!((convex_intersection_area(&sq, &shifted) - 0.25).abs() < 1e-12);
        let tri = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]];
        let other = [[0.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert!(convex_intersection_area(&tri, &other) < 1e-12);
        assert!((signed_area(&tri) - 0.5).abs() < 1e-15);
    }
}
