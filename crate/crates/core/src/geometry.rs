//! Small 2-D / 3-D helpers shared by scenario generation and propagation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn horizontal_distance(&self, other: &Point3) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Point at parameter `t` on the segment `self -> other`.
    pub fn lerp(&self, other: &Point3, t: f64) -> Point3 {
        Point3 {
            x: self.x + t * (other.x - self.x),
            y: self.y + t * (other.y - self.y),
            z: self.z + t * (other.z - self.z),
        }
    }

    pub(crate) fn axis(&self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }
}

/// Axis-aligned rectangle in the horizontal plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Rect {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min_x && x <= self.max_x && y >= self.min_y && y <= self.max_y
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn depth(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.depth()
    }

    /// Rectangle grown by `margin` on every side.
    pub fn inflate(&self, margin: f64) -> Rect {
        Rect {
            min_x: self.min_x - margin,
            min_y: self.min_y - margin,
            max_x: self.max_x + margin,
            max_y: self.max_y + margin,
        }
    }

    pub fn overlaps(&self, other: &Rect) -> bool {
        self.min_x < other.max_x && other.min_x < self.max_x && self.min_y < other.max_y && other.min_y < self.max_y
    }

    /// Euclidean distance from a point to the rectangle (0 inside).
    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        let dx = (self.min_x - x).max(0.0).max(x - self.max_x);
        let dy = (self.min_y - y).max(0.0).max(y - self.max_y);
        dx.hypot(dy)
    }

    /// True when the open 2-D segment `a -> b` passes through the interior.
    pub fn intersects_segment(&self, a: &Point3, b: &Point3) -> bool {
        let lo = [self.min_x, self.min_y];
        let hi = [self.max_x, self.max_y];
        match clip_interval(a, b, &lo, &hi, 2) {
            Some((t0, t1)) => t1 > t0,
            None => false,
        }
    }
}

/// Liang-Barsky clip of segment `a -> b` against the box `[lo, hi]` over the
/// first `dims` axes. Returns the parameter interval inside the box,
/// intersected with `[0, 1]`.
pub(crate) fn clip_interval(a: &Point3, b: &Point3, lo: &[f64], hi: &[f64], dims: usize) -> Option<(f64, f64)> {
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for axis in 0..dims {
        let p = a.axis(axis);
        let d = b.axis(axis) - p;
        if d.abs() < 1e-15 {
            if p < lo[axis] || p > hi[axis] {
                return None;
            }
            continue;
        }
        let mut ta = (lo[axis] - p) / d;
        let mut tb = (hi[axis] - p) / d;
        if ta > tb {
            std::mem::swap(&mut ta, &mut tb);
        }
        t0 = t0.max(ta);
        t1 = t1.min(tb);
        if t0 > t1 {
            return None;
        }
    }
    Some((t0, t1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect() -> Rect {
        Rect {
            min_x: 0.0,
            min_y: 0.0,
            max_x: 10.0,
            max_y: 5.0,
        }
    }

    #[test]
    fn segment_through_rect() {
        let r = rect();
        assert!(r.intersects_segment(&Point3::new(-1.0, 2.0, 0.0), &Point3::new(11.0, 2.0, 0.0)));
        assert!(!r.intersects_segment(&Point3::new(-1.0, 6.0, 0.0), &Point3::new(11.0, 6.0, 0.0)));
        // parallel to and outside an edge
        assert!(!r.intersects_segment(&Point3::new(-1.0, -1.0, 0.0), &Point3::new(-1.0, 9.0, 0.0)));
    }

    #[test]
    fn distance_to_rect() {
        let r = rect();
        assert_eq!(r.distance_to(5.0, 2.0), 0.0);
        assert!((r.distance_to(13.0, 9.0) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn clip_matches_hand_computation() {
        let a = Point3::new(-5.0, 2.5, 0.0);
        let b = Point3::new(15.0, 2.5, 0.0);
        let (t0, t1) = clip_interval(&a, &b, &[0.0, 0.0], &[10.0, 5.0], 2).unwrap();
        assert!((t0 - 0.25).abs() < 1e-12);
        assert!((t1 - 0.75).abs() < 1e-12);
    }
}
