//! Even–odd membership test for the upper phase Ω⁻.

use crate::geometry::Curve;
use crate::vec2::Vec2;

/// Polygonal copy of an interface, refined for point-in-phase queries.
#[derive(Debug, Clone)]
pub struct PhaseTester {
    poly: Vec<Vec2>,
    period: f64,
    /// Closed curves: Ω⁻ is the interior iff the curve runs counterclockwise.
    minus_inside: bool,
}

impl PhaseTester {
    pub fn new(curve: &Curve) -> Self {
        let fine = curve
            .upsample(16 * curve.n_points())
            .unwrap_or_else(|_| curve.clone());
        let poly = fine.positions().to_vec();
        let area = signed_area(&poly);
        PhaseTester {
            poly,
            period: curve.period(),
            minus_inside: area > 0.0,
        }
    }

    /// Number of crossings of the upward vertical ray from `p` with the polygon.
    fn upward_crossings(&self, p: Vec2) -> usize {
        let n = self.poly.len();
        let mut count = 0;
        let mut edge = |a: Vec2, b: Vec2| {
            if (a.x <= p.x) != (b.x <= p.x) {
                let y = a.y + (p.x - a.x) * (b.y - a.y) / (b.x - a.x);
                if y > p.y {
                    count += 1;
                }
            }
        };
        if self.period > 0.0 {
            // Images of one period on either side of the query's own cell.
            let l = self.period;
            let x0 = self.poly[0].x;
            let k = ((p.x - x0) / l).floor();
            let shift = k * l;
            for img in -1..=1 {
                let off = shift + img as f64 * l;
                for i in 0..n {
                    let a = self.poly[i] + Vec2::new(off, 0.0);
                    let b = if i + 1 < n {
                        self.poly[i + 1] + Vec2::new(off, 0.0)
                    } else {
                        self.poly[0] + Vec2::new(off + l, 0.0)
                    };
                    edge(a, b);
                }
            }
        } else {
            for i in 0..n {
                edge(self.poly[i], self.poly[(i + 1) % n]);
            }
        }
        count
    }

    /// True if `p` lies in Ω⁻, the side the interface normal points into.
    pub fn in_minus(&self, p: Vec2) -> bool {
        let odd = self.upward_crossings(p) % 2 == 1;
        if self.period > 0.0 {
            // Left-to-right sheet: Ω⁻ lies above, reached by an even number of crossings.
            !odd
        } else {
            odd == self.minus_inside
        }
    }
}

/// Shoelace area, positive for counterclockwise polygons.
pub fn signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    0.5 * (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_and_sheet_sides() {
        let t = PhaseTester::new(&Curve::circle(32, 1.0).unwrap());
        assert!(t.in_minus(Vec2::new(0.1, 0.2)));
        assert!(!t.in_minus(Vec2::new(1.5, 0.0)));
        let cw = Curve::from_fn(32, 0.0, |x| Vec2::new(x.cos(), -x.sin())).unwrap();
        let t = PhaseTester::new(&cw);
        assert!(!t.in_minus(Vec2::new(0.1, 0.2)));
        let flat = PhaseTester::new(&Curve::flat(32).unwrap());
        assert!(flat.in_minus(Vec2::new(100.3, 0.2)));
        assert!(!flat.in_minus(Vec2::new(-7.0, -0.2)));
    }
}
