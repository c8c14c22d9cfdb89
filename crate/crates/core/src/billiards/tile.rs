use num_rational::Rational64;

use super::geometry::{dist, signed_area, Point};
use super::BilliardsError;
use crate::permcat::COLORS;

/// A convex polygon with three of its sides designated as mirrors.
///
/// Side `i` runs from vertex `i` to vertex `i + 1`. `color_sides[mu]` is the
/// side across which color `mu` reflects; any remaining sides are always
/// boundary. For a triangle, color `mu` uses the side opposite vertex `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseTile {
    pub vertices: Vec<Point>,
    pub color_sides: [usize; COLORS],
    pub label: String,
}

/// Denominators tried when recognising an angle as a rational multiple of pi.
const MAX_DENOMINATOR: i64 = 48;

impl BaseTile {
    /// Triangle with positively oriented vertices; color `mu` reflects across
    /// the side opposite vertex `mu`.
    pub fn triangle(vertices: [Point; 3]) -> Result<Self, BilliardsError> {
        Self::polygon(vertices.to_vec(), [1, 2, 0], "triangle".into())
    }

    /// Right isosceles triangle with legs `d`: right angle at `(d,0)`, other
    /// corners `(d,d)` and `(0,0)`, so the hypotenuse lies on `y = x`. Color 1
    /// reflects across the hypotenuse, colors 2 and 3 across the horizontal and
    /// vertical legs.
    pub fn half_square(d: f64) -> Result<Self, BilliardsError> {
        let mut t = Self::triangle([[d, 0.0], [d, d], [0.0, 0.0]])?;
        t.label = format!("half-square:{d}");
        Ok(t)
    }

    /// Rectangle `[0,w] x [0,h]`. Colors 1, 2, 3 reflect across the left,
    /// right and bottom sides; the top side is always boundary.
    pub fn rectangle(w: f64, h: f64) -> Result<Self, BilliardsError> {
        Self::polygon(
            vec![[0.0, 0.0], [w, 0.0], [w, h], [0.0, h]],
            [3, 1, 0],
            format!("rectangle:{w},{h}"),
        )
    }

    pub fn polygon(
        vertices: Vec<Point>,
        color_sides: [usize; COLORS],
        label: String,
    ) -> Result<Self, BilliardsError> {
        let n = vertices.len();
        if n < 3 {
            return Err(BilliardsError::InvalidTile("fewer than three vertices".into()));
        }
        if signed_area(&vertices) <= 1e-12 * perimeter(&vertices).powi(2) {
            return Err(BilliardsError::InvalidTile(
                "vertices must be positively oriented and non-degenerate".into(),
            ));
        }
        let mut used = vec![false; n];
        for &s in &color_sides {
            if s >= n || used[s] {
                return Err(BilliardsError::InvalidTile(format!("bad mirror side {s}")));
            }
            used[s] = true;
        }
        let tile = BaseTile {
            vertices,
            color_sides,
            label,
        };
        if tile.angles().iter().any(|&a| a >= std::f64::consts::PI - 1e-12) {
            return Err(BilliardsError::InvalidTile("tile must be strictly convex".into()));
        }
        Ok(tile)
    }

    pub fn side_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn side(&self, s: usize) -> (Point, Point) {
        (self.vertices[s], self.vertices[(s + 1) % self.side_count()])
    }

    pub fn side_length(&self, s: usize) -> f64 {
        let (a, b) = self.side(s);
        dist(a, b)
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Interior angle at each vertex, radians.
    pub fn angles(&self) -> Vec<f64> {
        let n = self.side_count();
        (0..n)
            .map(|i| {
                let (p, v, q) = (
                    self.vertices[(i + n - 1) % n],
                    self.vertices[i],
                    self.vertices[(i + 1) % n],
                );
                let (a, b) = ([p[0] - v[0], p[1] - v[1]], [q[0] - v[0], q[1] - v[1]]);
                (a[0] * b[1] - a[1] * b[0]).abs().atan2(a[0] * b[0] + a[1] * b[1])
            })
            .collect()
    }

    /// Vertex angles as exact multiples of pi, when they all are.
    pub fn angles_over_pi(&self) -> Option<Vec<Rational64>> {
        self.angles()
            .iter()
            .map(|&a| rational_multiple_of_pi(a))
            .collect()
    }

    /// The two sides meeting at vertex `v`.
    pub fn sides_at(&self, v: usize) -> [usize; 2] {
        let n = self.side_count();
        [(v + n - 1) % n, v]
    }

    /// Color mirrored across side `s`, if any.
    pub fn color_of_side(&self, s: usize) -> Option<usize> {
        self.color_sides.iter().position(|&c| c == s)
    }
}

fn perimeter(v: &[Point]) -> f64 {
    (0..v.len()).map(|i| dist(v[i], v[(i + 1) % v.len()])).sum()
}

/// `x / pi` as a fraction with denominator at most 48, if within `1e-12`.
pub fn rational_multiple_of_pi(x: f64) -> Option<Rational64> {
    let r = x / std::f64::consts::PI;
    (1..=MAX_DENOMINATOR).find_map(|n| {
        let m = (r * n as f64).round();
        ((r * n as f64 - m).abs() < 1e-12 * n as f64).then(|| Rational64::new(m as i64, n))
    })
}

/// Parses `half-square`, `half-square:d`, `rectangle:w,h` or
/// `triangle:x1,y1,x2,y2,x3,y3`.
pub fn parse_base(spec: &str) -> Result<BaseTile, BilliardsError> {
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    let nums: Vec<f64> = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| BilliardsError::InvalidTile(format!("bad numbers in {spec:?}")))?
    };
    match (kind, nums.as_slice()) {
        ("half-square", []) => BaseTile::half_square(1.0),
        ("half-square", [d]) => BaseTile::half_square(*d),
        ("rectangle", [w, h]) => BaseTile::rectangle(*w, *h),
        ("triangle", [x1, y1, x2, y2, x3, y3]) => {
            BaseTile::triangle([[*x1, *y1], [*x2, *y2], [*x3, *y3]])
        }
        _ => Err(BilliardsError::InvalidTile(format!("unknown base tile {spec:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_square_angles() {
        let t = BaseTile::half_square(2.0).unwrap();
        assert_eq!(
            t.angles_over_pi().unwrap(),
            vec![Rational64::new(1, 2), Rational64::new(1, 4), Rational64::new(1, 4)]
        );
        // the hypotenuse carries color 1
        assert!((t.side_length(t.color_sides[0]) - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((t.area() - 2.0).abs() < 1e-15);
        let sum: f64 = t.angles().iter().sum();
        assert!((sum - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn triangle_sides_oppose_vertices() {
        let t = BaseTile::triangle([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]).unwrap();
        // color 0 is opposite vertex 0: the hypotenuse
        assert!((t.side_length(t.color_sides[0]) - 5.0).abs() < 1e-12);
        assert!((t.side_length(t.color_sides[1]) - 4.0).abs() < 1e-12);
        assert!((t.side_length(t.color_sides[2]) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_tiles() {
        assert!(BaseTile::triangle([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).is_err());
        assert!(BaseTile::triangle([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).is_err());
        assert!(parse_base("hexagon:1").is_err());
        assert!(parse_base("rectangle:1,2").is_ok());
    }
}
