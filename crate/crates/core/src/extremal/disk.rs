//! Smallest enclosing disk by randomized incremental construction.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::rng::stream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnclosingDisk {
    pub center: Complex64,
    pub radius: f64,
    /// Two or three input points on the boundary that determine the disk
    /// (one for a single point).
    pub support: Vec<Complex64>,
}

impl EnclosingDisk {
    fn point(p: Complex64) -> Self {
        Self {
            center: p,
            radius: 0.0,
            support: vec![p],
        }
    }

    fn diameter(a: Complex64, b: Complex64) -> Self {
        Self {
            center: (a + b) * 0.5,
            radius: (a - b).norm() * 0.5,
            support: vec![a, b],
        }
    }

    fn circumcircle(a: Complex64, b: Complex64, c: Complex64) -> Option<Self> {
        let (ba, ca) = (b - a, c - a);
        let d = 2.0 * (ba.re * ca.im - ba.im * ca.re);
        if d == 0.0 {
            return None;
        }
        let (nb, nc) = (ba.norm_sqr(), ca.norm_sqr());
        let offset = Complex64::new((ca.im * nb - ba.im * nc) / d, (ba.re * nc - ca.re * nb) / d);
        Some(Self {
            center: a + offset,
            radius: offset.norm(),
            support: vec![a, b, c],
        })
    }

    /// Disk through `a`, `b`, `c`; falls back to the widest diameter disk
    /// for collinear points.
    fn through(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Self::circumcircle(a, b, c).unwrap_or_else(|| {
            [Self::diameter(a, b), Self::diameter(a, c), Self::diameter(b, c)]
                .into_iter()
                .max_by(|x, y| x.radius.total_cmp(&y.radius))
                .expect("three candidates")
        })
    }

    pub fn contains(&self, p: Complex64) -> bool {
        (p - self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-15
    }
}

/// Smallest closed disk containing `points`, or `None` for an empty list.
/// The points are visited in a fixed pseudo-random order.
pub fn enclosing_disk(points: &[Complex64]) -> Option<EnclosingDisk> {
    let mut p = points.to_vec();
    let count = p.len() as u64;
    p.shuffle(&mut stream(0x5eed, count));
    let mut disk = EnclosingDisk::point(*p.first()?);
    for i in 1..p.len() {
        if disk.contains(p[i]) {
            continue;
        }
        disk = EnclosingDisk::point(p[i]);
        for j in 0..i {
            if disk.contains(p[j]) {
                continue;
            }
            disk = EnclosingDisk::diameter(p[i], p[j]);
            for k in 0..j {
                if !disk.contains(p[k]) {
                    disk = EnclosingDisk::through(p[i], p[j], p[k]);
                }
            }
        }
    }
    Some(disk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::uniform_disk;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_cases() {
        assert!(enclosing_disk(&[]).is_none());
        let d = enclosing_disk(&[c(0.3, 0.4)]).unwrap();
        assert_eq!((d.center, d.radius), (c(0.3, 0.4), 0.0));
        let d = enclosing_disk(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(d.center.norm() < 1e-15 && (d.radius - 1.0).abs() < 1e-15);
        let d = enclosing_disk(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]).unwrap();
        assert!(d.center.norm() < 1e-15 && (d.radius - 1.0).abs() < 1e-15);
    }

    #[test]
    fn collinear_points() {
        let d = enclosing_disk(&[c(0.0, 0.0), c(1.0, 1.0), c(2.0, 2.0), c(0.5, 0.5)]).unwrap();
        assert!((d.center - c(1.0, 1.0)).norm() < 1e-15);
        assert!((d.radius - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn every_point_is_inside() {
        let mut rng = stream(3, 0);
        let pts: Vec<Complex64> = (0..200).map(|_| uniform_disk(&mut rng, 2.0)).collect();
        let d = enclosing_disk(&pts).unwrap();
        assert!(pts.iter().all(|p| d.contains(*p)));
        assert!(d.support.len() >= 2);
        for s in &d.support {
            assert!(((s - d.center).norm() - d.radius).abs() < 1e-12);
        }
    }
}
