//! Majorana (stellar) representation of qutrit rays as point pairs on the sphere.
//!
//! A ray (c0, c1, c2) is sent to the roots of p(z) = c0·z² − √2·c1·z + c2;
//! each root is projected stereographically with z = 0 at the north pole and
//! z = ∞ at the south pole. When the degree of p drops, the missing roots are ∞.
//! This is the one floating-point module of the crate.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::colorability::KSInstance;
use crate::error::Result;
use crate::numfield::CycNumber;
use crate::rays::Ray;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpherePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpherePoint {
    pub const NORTH: SpherePoint = SpherePoint { x: 0.0, y: 0.0, z: 1.0 };
    pub const SOUTH: SpherePoint = SpherePoint { x: 0.0, y: 0.0, z: -1.0 };

    fn from_root(w: Option<Complex64>) -> Self {
        match w {
            None => Self::SOUTH,
            Some(w) => {
                let m = w.norm_sqr();
                SpherePoint { x: 2.0 * w.re / (1.0 + m), y: 2.0 * w.im / (1.0 + m), z: (1.0 - m) / (1.0 + m) }
            }
        }
    }

    pub fn distance(&self, other: &SpherePoint) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Ordering key, rounded so that float noise near a tie cannot flip the order.
    fn key(&self) -> [i64; 3] {
        [self.x, self.y, self.z].map(|c| (c * 1e9).round() as i64)
    }
}

/// Text written above the CSV header.
pub const CONVENTION: &str =
    "p(z) = c0*z^2 - sqrt(2)*c1*z + c2; stereographic projection with z=0 at the north pole, z=inf at the south pole";

/// Which coefficients of the quadratic vanish, decided in exact arithmetic.
struct Degeneracy {
    a_zero: bool,
    b_zero: bool,
    disc_zero: bool,
}

/// Roots of a·z² + b·z + c, with `None` standing for ∞.
fn roots(a: Complex64, b: Complex64, c: Complex64, d: Degeneracy) -> [Option<Complex64>; 2] {
    if d.a_zero {
        if d.b_zero {
            return [None, None];
        }
        return [Some(-c / b), None];
    }
    if d.disc_zero {
        let z = -b / (2.0 * a);
        return [Some(z), Some(z)];
    }
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation, then use Vieta for the other root
    let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) / 2.0 } else { -(b - disc) / 2.0 };
    if q.norm() == 0.0 {
        return [Some(Complex64::new(0.0, 0.0)); 2];
    }
    [Some(q / a), Some(c / q)]
}

/// The two Majorana points of `r`, in lexicographic order of (x, y, z) at 1e-9 resolution.
pub fn majorana_points(r: &Ray) -> (SpherePoint, SpherePoint) {
    let c = r.components();
    let f = c.each_ref().map(|x| x.to_complex());
    let b = -f[1] * std::f64::consts::SQRT_2;
    // b² − 4ac = 2·c1² − 4·c0·c2
    let disc = &(&c[1] * &c[1]) - &(&CycNumber::from_int(1, 2) * &(&c[0] * &c[2]));
    let d = Degeneracy { a_zero: c[0].is_zero(), b_zero: c[1].is_zero(), disc_zero: disc.is_zero() };
    let [u, v] = roots(f[0], b, f[2], d);
    let (p, q) = (SpherePoint::from_root(u), SpherePoint::from_root(v));
    if p.key() <= q.key() {
        (p, q)
    } else {
        (q, p)
    }
}

#[derive(Serialize)]
struct Row<'a> {
    ray_index: usize,
    ray: &'a str,
    point: u8,
    x: f64,
    y: f64,
    z: f64,
}

/// Writes one CSV row per (ray, point), preceded by a `#` line stating the convention.
/// Returns the number of rows.
pub fn export_majorana(inst: &KSInstance, path: &Path) -> Result<usize> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "# {CONVENTION}")?;
    write_rows(inst, file)
}

fn write_rows(inst: &KSInstance, out: impl std::io::Write) -> Result<usize> {
    let mut w = csv::Writer::from_writer(out);
    let mut rows = 0;
    for (i, r) in inst.rays().iter().enumerate() {
        let text = r.canonical_string();
        let (p, q) = majorana_points(r);
        for (k, pt) in [(1, p), (2, q)] {
            w.serialize(Row { ray_index: i, ray: &text, point: k, x: pt.x, y: pt.y, z: pt.z })?;
            rows += 1;
        }
    }
    w.flush()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(s: &str) -> (SpherePoint, SpherePoint) {
        majorana_points(&Ray::parse(s).unwrap())
    }

    #[test]
    fn pole_anchors() {
        let close = |a: SpherePoint, b: SpherePoint| a.distance(&b) < 1e-12;
        let (p, q) = pts("(1,0,0)");
        assert!(close(p, SpherePoint::NORTH) && close(q, SpherePoint::NORTH));
        let (p, q) = pts("(0,1,0)");
        assert!(close(p, SpherePoint::SOUTH) && close(q, SpherePoint::NORTH));
        let (p, q) = pts("(0,0,1)");
        assert!(close(p, SpherePoint::SOUTH) && close(q, SpherePoint::SOUTH));
    }

    #[test]
    fn unit_norm() {
        for s in ["(1,1,1)", "(1,ω,ω²)", "(1,-1,0)", "(2,ω,-1)"] {
            let (p, q) = pts(s);
            assert!((p.norm() - 1.0).abs() < 1e-9 && (q.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn coincident_roots() {
        // (1, √2, 1) gives (z − 1)², a double root on the equator
        let (p, q) = pts("(1,√2,1)");
        assert!(p.distance(&q) < 1e-12);
        assert!(p.z.abs() < 1e-12);
    }
}
