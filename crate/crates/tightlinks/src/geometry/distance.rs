use super::Vec3;

/// Closest approach of two segments [p1, p2] and [q1, q2].
///
/// Returns `(distance, s, t)` with barycentric coordinates clamped to
/// [0, 1] on each segment; robust for parallel and degenerate cases.
pub fn segment_distance(p1: Vec3, p2: Vec3, q1: Vec3, q2: Vec3) -> (f64, f64, f64) {
    let d1 = p2 - p1;
    let d2 = q2 - q1;
    let r = p1 - q1;
    let a = d1.dot(&d1);
    let e = d2.dot(&d2);
    let f = d2.dot(&r);

    let (mut s, mut t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        s = 0.0;
        t = 0.0;
    } else if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            s = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0 // parallel: pick an endpoint on the first segment
            };
            t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
        }
    }
    let cp = p1 + d1 * s;
    let cq = q1 + d2 * t;
    ((cp - cq).norm(), s, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_segments() {
        // skew lines one unit apart
        let (d, s, t) = segment_distance(
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, -1.0, 1.0),
            Vec3::new(0.0, 1.0, 1.0),
        );
        assert!((d - 1.0).abs() < 1e-14);
        assert!((s - 0.5).abs() < 1e-14);
        assert!((t - 0.5).abs() < 1e-14);
    }

    #[test]
    fn endpoint_cases() {
        let (d, s, t) = segment_distance(
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(3.0, 1.0, 0.0),
            Vec3::new(4.0, 1.0, 0.0),
        );
        assert!((d - 5f64.sqrt()).abs() < 1e-14);
        assert_eq!(s, 1.0);
        assert_eq!(t, 0.0);
    }

    #[test]
    fn parallel_segments() {
        let (d, _, _) = segment_distance(
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(0.5, 1.0, 0.0),
            Vec3::new(1.5, 1.0, 0.0),
        );
        assert!((d - 1.0).abs() < 1e-14);
    }

    #[test]
    fn symmetry_and_brute_force_agreement() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p: Vec<Vec3> = (0..4)
                .map(|_| Vec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let (d, s, t) = segment_distance(p[0], p[1], p[2], p[3]);
            let (d2, s2, t2) = segment_distance(p[2], p[3], p[0], p[1]);
            assert!((d - d2).abs() < 1e-12);
            let _ = (s2, t2);
            // dense parameter sweep can only be worse
            let mut brute = f64::INFINITY;
            for i in 0..=40 {
                for j in 0..=40 {
                    let u = i as f64 / 40.0;
                    let v = j as f64 / 40.0;
                    let a = p[0] + (p[1] - p[0]) * u;
                    let b = p[2] + (p[3] - p[2]) * v;
                    brute = brute.min((a - b).norm());
                }
            }
            assert!(d <= brute + 1e-12, "d={d} brute={brute} s={s} t={t}");
        }
    }
}
