//! Seeded random sampling used by every sampled check.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`), a counter-based
//! stream cipher with a 64-bit block counter. It is seeded from a single
//! `u64` through `SeedableRng::seed_from_u64`, so a seed fixes every report
//! byte for byte.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cones::{ConeKind, SolidCone};
use crate::vector::Vector;

pub type SampleRng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 42;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for a named sub-task.
pub fn substream(seed: u64, label: &str) -> SampleRng {
    // FNV-1a over the label, folded into the seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub fn uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// Entries uniform in `[-scale, scale]`.
pub fn vector(rng: &mut SampleRng, dim: usize, scale: f64) -> Vector {
    Vector::new((0..dim).map(|_| uniform(rng, -scale, scale)).collect()).expect("finite samples")
}

/// The cone families exercised by the property suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Orthant,
    Lorentz,
    Polyhedral,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Orthant, Family::Lorentz, Family::Polyhedral];

    pub fn name(self) -> &'static str {
        match self {
            Family::Orthant => "orthant",
            Family::Lorentz => "lorentz",
            Family::Polyhedral => "polyhedral",
        }
    }
}

pub fn random_cone(rng: &mut SampleRng, family: Family, dim: usize) -> SolidCone {
    match family {
        Family::Orthant => SolidCone::orthant(dim).expect("dim > 0"),
        Family::Lorentz => SolidCone::lorentz(dim).expect("dim > 0"),
        Family::Polyhedral => random_polyhedral(rng, dim),
    }
}

/// A pointed polyhedral cone with `dim..=dim+3` normals, each making an angle
/// of at most ~72° with a random witness direction.
pub fn random_polyhedral(rng: &mut SampleRng, dim: usize) -> SolidCone {
    loop {
        let mut w = vector(rng, dim, 1.0);
        if w.norm2() < 1e-3 {
            w = Vector::ones(dim);
        }
        let w = w.scale(1.0 / w.norm2());
        let count = dim + rng.random_range(0..=3usize);
        let mut normals = Vec::with_capacity(count);
        while normals.len() < count {
            let a = vector(rng, dim, 1.0);
            let na = a.norm2();
            if na < 1e-6 {
                continue;
            }
            let cos = a.dot(&w) / na;
            if cos >= 0.3 {
                normals.push(a.scale(1.0 / na));
            } else if cos <= -0.3 {
                normals.push(a.scale(-1.0 / na));
            }
        }
        if crate::cones::rank_of_rows(&normals, dim) < dim {
            continue;
        }
        if let Ok(cone) = SolidCone::polyhedral(normals, w) {
            return cone;
        }
    }
}

/// A point of `P`; about one draw in six lies on the boundary.
pub fn sample_member(cone: &SolidCone, rng: &mut SampleRng) -> Vector {
    let dim = cone.dim();
    let scale = uniform(rng, 0.1, 5.0);
    match cone.kind() {
        ConeKind::Orthant => Vector::new(
            (0..dim)
                .map(|_| {
                    if rng.random_bool(1.0 / 6.0) {
                        0.0
                    } else {
                        uniform(rng, 0.0, scale)
                    }
                })
                .collect(),
        )
        .expect("finite"),
        ConeKind::Lorentz => {
            let bar = vector(rng, dim - 1, scale);
            let lift = if rng.random_bool(1.0 / 6.0) {
                0.0
            } else {
                uniform(rng, 0.0, scale)
            };
            let mut entries = bar.into_inner();
            let t = entries.iter().map(|v| v * v).sum::<f64>().sqrt() + lift;
            entries.push(t);
            Vector::new(entries).expect("finite")
        }
        ConeKind::Polyhedral { .. } => {
            let w = cone.witness();
            let mut z = vector(rng, dim, scale);
            let base = w.scale(uniform(rng, 0.0, scale) / w.norm2());
            for _ in 0..200 {
                let x = &base + &z;
                if cone.contains(&x).unwrap_or(false) {
                    return x;
                }
                z = z.scale(0.5);
            }
            base
        }
    }
}

/// An interior point with a comfortable margin relative to its size.
pub fn sample_interior(cone: &SolidCone, rng: &mut SampleRng) -> Vector {
    let dim = cone.dim();
    match cone.kind() {
        ConeKind::Orthant => {
            Vector::new((0..dim).map(|_| uniform(rng, 0.1, 3.0)).collect()).expect("finite")
        }
        ConeKind::Lorentz => {
            let bar = vector(rng, dim - 1, 1.0);
            let mut entries = bar.into_inner();
            let r = entries.iter().map(|v| v * v).sum::<f64>().sqrt();
            entries.push(r * uniform(rng, 1.1, 3.0) + uniform(rng, 0.1, 1.0));
            Vector::new(entries).expect("finite")
        }
        ConeKind::Polyhedral { .. } => {
            let w = cone.witness();
            let w_rel = cone.margin(&w).expect("dim") / w.norm2();
            let base = w.scale(uniform(rng, 0.5, 2.0) / w.norm2());
            let mut z = vector(rng, dim, 0.5 * base.norm2());
            loop {
                let x = &base + &z;
                let rel = cone.margin(&x).expect("dim") / x.norm2();
                if rel >= 0.5 * w_rel {
                    return x;
                }
                z = z.scale(0.5);
            }
        }
    }
}

/// The cone's witness followed by `n − 1` random interior points.
pub fn interior_directions(cone: &SolidCone, n: usize, rng: &mut SampleRng) -> Vec<Vector> {
    let mut out = Vec::with_capacity(n);
    if n > 0 {
        out.push(cone.witness());
    }
    while out.len() < n {
        out.push(sample_interior(cone, rng));
    }
    out
}
