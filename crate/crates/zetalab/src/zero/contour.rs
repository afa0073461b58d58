//! Piecewise contours: rectangles, circles, and indented half-disks.
//!
//! Contours are counter-clockwise sequences of line and circular-arc
//! segments.  The half-disk builder produces the Speiser-type geometry: the
//! left half of a disk centered on the critical line, whose chord bypasses
//! listed line zeros through small semicircular indentations bulging into the
//! disk, so the bypassed zeros end up outside the enclosed region.

use num_complex::Complex;

use super::Rect;
use crate::error::Error;
use crate::scalar::{Cx, Scalar};

/// One contour piece, parameterized over `u` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment<T: Scalar> {
    /// Straight line from `from` to `to`.
    Line { from: Cx<T>, to: Cx<T> },
    /// Circular arc `center + radius e^{i theta}`, `theta` moving linearly
    /// from `theta0` to `theta1` (either direction).
    Arc {
        center: Cx<T>,
        radius: T,
        theta0: T,
        theta1: T,
    },
}

impl<T: Scalar> Segment<T> {
    /// Point at parameter `u` in `[0, 1]`.
    pub fn point(&self, u: T) -> Cx<T> {
        match *self {
            Segment::Line { from, to } => from + (to - from) * u,
            Segment::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let theta = theta0 + (theta1 - theta0) * u;
                center + Complex::from_polar(radius, theta)
            }
        }
    }

    pub fn start(&self) -> Cx<T> {
        self.point(T::zero())
    }

    pub fn end(&self) -> Cx<T> {
        self.point(T::one())
    }

    /// Rough length scale used to pick initial sample counts.
    pub fn arc_span(&self) -> Option<T> {
        match *self {
            Segment::Line { .. } => None,
            Segment::Arc { theta0, theta1, .. } => Some((theta1 - theta0).abs()),
        }
    }
}

/// Which side of a chord an indentation bulges toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Metadata for one chord indentation (the arcs themselves are part of the
/// segment list; this record is kept for reports).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Indentation<T: Scalar> {
    pub center: Cx<T>,
    pub radius: T,
    pub side: Side,
}

/// A closed, counter-clockwise contour.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour<T: Scalar> {
    pub segments: Vec<Segment<T>>,
    pub indentations: Vec<Indentation<T>>,
}

impl<T: Scalar> Contour<T> {
    /// Counter-clockwise rectangle boundary.
    pub fn rectangle(rect: &Rect<T>) -> Self {
        let bl = Complex::new(rect.sigma_lo, rect.t_lo);
        let br = Complex::new(rect.sigma_hi, rect.t_lo);
        let tr = Complex::new(rect.sigma_hi, rect.t_hi);
        let tl = Complex::new(rect.sigma_lo, rect.t_hi);
        Contour {
            segments: vec![
                Segment::Line { from: bl, to: br },
                Segment::Line { from: br, to: tr },
                Segment::Line { from: tr, to: tl },
                Segment::Line { from: tl, to: bl },
            ],
            indentations: Vec::new(),
        }
    }

    /// Counter-clockwise circle.
    pub fn circle(center: Cx<T>, radius: T) -> Self {
        Contour {
            segments: vec![Segment::Arc {
                center,
                radius,
                theta0: T::zero(),
                theta1: T::lit(2.0) * T::PI(),
            }],
            indentations: Vec::new(),
        }
    }

    /// Boundary of the region `{ |s - s0| <= r, Re s < chord_sigma }`,
    /// traversed counter-clockwise: the arc left of the chord followed by
    /// the chord upward along `Re s = chord_sigma`, with semicircular
    /// indentations of radius `indent_radius` bulging left (into the disk)
    /// around each ordinate in `bypass` — those points are excluded from the
    /// enclosed region.  With the center on the chord this is the left
    /// half-disk.
    ///
    /// `bypass` entries outside the open chord are ignored; entries too close
    /// to a chord endpoint or to each other (within `4 * indent_radius`
    /// either way) are geometry errors.
    pub fn half_disk_left(
        s0: Cx<T>,
        r: T,
        chord_sigma: T,
        bypass: &[T],
        indent_radius: T,
    ) -> Result<Self, Error> {
        if !(r > T::zero()) || !(indent_radius > T::zero()) || indent_radius >= r {
            return Err(Error::InvalidInput {
                what: format!("half-disk radii invalid: r = {r}, indent = {indent_radius}"),
            });
        }
        if chord_sigma < s0.re || chord_sigma - s0.re >= r {
            return Err(Error::InvalidInput {
                what: format!(
                    "chord at sigma = {chord_sigma} must cut the disk right of its center {}",
                    s0.re
                ),
            });
        }
        // Angle of the chord intersections: cos(theta_c) = q.
        let q = (chord_sigma - s0.re) / r;
        let theta_c = q.acos();
        let half_chord = r * (T::one() - q * q).sqrt();
        let t_bot = s0.im - half_chord;
        let t_top = s0.im + half_chord;
        let margin = indent_radius * T::lit(4.0);

        let mut inside: Vec<T> = Vec::new();
        for &g in bypass {
            if g <= t_bot || g >= t_top {
                continue; // outside the chord: nothing to bypass
            }
            if (g - t_bot).abs() < margin || (t_top - g).abs() < margin {
                return Err(Error::BoundaryZero { t: g.as_f64() });
            }
            inside.push(g);
        }
        inside.sort_by(|a, b| a.partial_cmp(b).expect("finite ordinates"));
        for pair in inside.windows(2) {
            if pair[1] - pair[0] < indent_radius * T::lit(4.0) {
                return Err(Error::IndentationOverlap {
                    t_a: pair[0].as_f64(),
                    t_b: pair[1].as_f64(),
                    radius: indent_radius.as_f64(),
                });
            }
        }

        let sigma = chord_sigma;
        let mut segments = Vec::with_capacity(2 * inside.len() + 2);
        // Arc left of the chord, from the top intersection around to the
        // bottom one; theta_c = pi/2 when the center sits on the chord.
        segments.push(Segment::Arc {
            center: s0,
            radius: r,
            theta0: theta_c,
            theta1: T::lit(2.0) * T::PI() - theta_c,
        });
        // Chord upward with indentations.
        let mut indentations = Vec::with_capacity(inside.len());
        let mut cursor = t_bot;
        for &g in &inside {
            segments.push(Segment::Line {
                from: Complex::new(sigma, cursor),
                to: Complex::new(sigma, g - indent_radius),
            });
            // Semicircle around (sigma, g) through its left side: theta from
            // -pi/2 down to -3pi/2, i.e. clockwise about the indentation
            // center, bulging into the (left) interior.
            segments.push(Segment::Arc {
                center: Complex::new(sigma, g),
                radius: indent_radius,
                theta0: -T::FRAC_PI_2(),
                theta1: -T::lit(1.5) * T::PI(),
            });
            indentations.push(Indentation {
                center: Complex::new(sigma, g),
                radius: indent_radius,
                side: Side::Left,
            });
            cursor = g + indent_radius;
        }
        segments.push(Segment::Line {
            from: Complex::new(sigma, cursor),
            to: Complex::new(sigma, t_top),
        });
        Ok(Contour {
            segments,
            indentations,
        })
    }

    /// Whether consecutive segments chain up and the contour closes.
    pub fn is_closed(&self, tol: T) -> bool {
        if self.segments.is_empty() {
            return false;
        }
        let n = self.segments.len();
        for i in 0..n {
            let end = self.segments[i].end();
            let next = self.segments[(i + 1) % n].start();
            if (end - next).norm() > tol {
                return false;
            }
        }
        true
    }

    /// Mean of segment endpoints; a point safely inside well-formed convex
    /// contours, used as the similarity center for nudges.
    pub fn centroid(&self) -> Cx<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut n = T::zero();
        for seg in &self.segments {
            acc = acc + seg.start() + seg.end();
            n = n + T::lit(2.0);
        }
        acc / n
    }

    /// Largest distance between the centroid and any endpoint, doubled — a
    /// cheap diameter proxy for nudge displacement scaling.
    pub fn diameter(&self) -> T {
        let c = self.centroid();
        let mut best = T::zero();
        for seg in &self.segments {
            best = best.max((seg.start() - c).norm());
            best = best.max((seg.end() - c).norm());
            if let Segment::Arc { center, radius, .. } = *seg {
                best = best.max((center - c).norm() + radius);
            }
        }
        best * T::lit(2.0)
    }

    /// Similarity about the centroid; `factor` slightly above 1 nudges every
    /// boundary point outward by `(factor - 1) * distance-from-centroid`.
    pub fn scaled_about_centroid(&self, factor: T) -> Self {
        let c = self.centroid();
        let segments = self
            .segments
            .iter()
            .map(|seg| match *seg {
                Segment::Line { from, to } => Segment::Line {
                    from: c + (from - c) * factor,
                    to: c + (to - c) * factor,
                },
                Segment::Arc {
                    center,
                    radius,
                    theta0,
                    theta1,
                } => Segment::Arc {
                    center: c + (center - c) * factor,
                    radius: radius * factor,
                    theta0,
                    theta1,
                },
            })
            .collect();
        let indentations = self
            .indentations
            .iter()
            .map(|ind| Indentation {
                center: c + (ind.center - c) * factor,
                radius: ind.radius * factor,
                side: ind.side,
            })
            .collect();
        Contour {
            segments,
            indentations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn rectangle_closes_counterclockwise() {
        let r = Rect::new(-1.0, 2.0, 3.0, 5.0);
        let c = Contour::circle(cx::<f64>(0.0, 0.0), 1.0);
        assert!(c.is_closed(1e-12));
        let c = Contour::<f64>::rectangle(&r);
        assert!(c.is_closed(1e-12));
        assert_eq!(c.segments.len(), 4);
        // Counter-clockwise: first edge runs left to right along the bottom.
        assert_eq!(c.segments[0].start(), cx(-1.0, 3.0));
        assert_eq!(c.segments[0].end(), cx(2.0, 3.0));
    }

    #[test]
    fn half_disk_geometry() {
        let s0 = cx::<f64>(0.5, 100.0);
        let c = Contour::half_disk_left(s0, 1.0, 0.5, &[99.7, 100.2], 1e-4).unwrap();
        assert!(c.is_closed(1e-12), "half-disk does not close");
        assert_eq!(c.indentations.len(), 2);
        // All chord points sit on sigma = 0.5; arc points to the left.
        for seg in &c.segments {
            for k in 0..=8 {
                let p = seg.point(k as f64 / 8.0);
                assert!(p.re <= 0.5 + 1e-12, "point {p} right of the chord");
            }
        }
        // Ordinates outside the chord are ignored.
        let c2 = Contour::half_disk_left(s0, 1.0, 0.5, &[42.0, 100.2], 1e-4).unwrap();
        assert_eq!(c2.indentations.len(), 1);
    }

    #[test]
    fn half_disk_geometry_errors() {
        let s0 = cx::<f64>(0.5, 50.0);
        // Zero too close to the chord corner.
        assert!(matches!(
            Contour::half_disk_left(s0, 1.0, 0.5, &[49.0001], 1e-4),
            Err(Error::BoundaryZero { .. })
        ));
        // Two zeros closer than the overlap margin.
        assert!(matches!(
            Contour::half_disk_left(s0, 1.0, 0.5, &[50.0, 50.0001], 1e-4),
            Err(Error::IndentationOverlap { .. })
        ));
        // Degenerate radii.
        assert!(Contour::half_disk_left(s0, 0.0, 0.5, &[], 1e-4).is_err());
        assert!(Contour::half_disk_left(s0, 0.5, 0.5, &[], 0.6).is_err());
    }

    #[test]
    fn cut_disk_with_off_center_chord() {
        // Center left of the chord: the region is the disk minus a cap.
        let s0 = cx::<f64>(0.45, 50.0);
        let c = Contour::half_disk_left(s0, 0.2, 0.5, &[50.05], 1e-6).unwrap();
        assert!(c.is_closed(1e-12));
        for seg in &c.segments {
            for k in 0..=16 {
                let p = seg.point(k as f64 / 16.0);
                assert!(p.re <= 0.5 + 1e-12);
                assert!((p - s0).norm() <= 0.2 + 1e-12);
            }
        }
        // Chord must be strictly inside the disk on the right.
        assert!(matches!(
            Contour::half_disk_left(s0, 0.04, 0.5, &[], 1e-6),
            Err(Error::InvalidInput { .. })
        ));
        // Chord left of the center is not a left cut.
        assert!(matches!(
            Contour::half_disk_left(cx::<f64>(0.55, 50.0), 0.2, 0.5, &[], 1e-6),
            Err(Error::InvalidInput { .. })
        ));
    }

    #[test]
    fn scaling_preserves_closure() {
        let s0 = cx::<f64>(0.5, 10.0);
        let c = Contour::half_disk_left(s0, 0.5, 0.5, &[9.8, 10.1], 1e-5).unwrap();
        let scaled = c.scaled_about_centroid(1.0 + 2e-6);
        assert!(scaled.is_closed(1e-10));
        assert!(scaled.diameter() > c.diameter());
    }
}
