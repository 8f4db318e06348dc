//! Small fixed-size vector helpers. Everything here is plain f64 arithmetic;
//! robustness decisions (tolerances, degeneracy cutoffs) live with the callers.

pub type Vec2 = [f64; 2];
pub type Vec3 = [f64; 3];

pub fn add2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn sub2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn scale2(s: f64, a: Vec2) -> Vec2 {
    [s * a[0], s * a[1]]
}

pub fn dot2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// z-component of the cross product, twice the signed area of (0, a, b).
pub fn cross2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn norm2(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

pub fn dist2(a: Vec2, b: Vec2) -> f64 {
    norm2(sub2(a, b))
}

/// Angle of the corner at p between rays to q and r, in (0, pi) for
/// non-degenerate input. Uses atan2 so nearly collinear corners stay accurate.
pub fn corner_angle2(p: Vec2, q: Vec2, r: Vec2) -> f64 {
    let u = sub2(q, p);
    let w = sub2(r, p);
    cross2(u, w).abs().atan2(dot2(u, w))
}

/// Counterclockwise rotation.
pub fn rotate2(a: Vec2, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    [c * a[0] - s * a[1], s * a[0] + c * a[1]]
}

pub fn add3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale3(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm3(a: Vec3) -> f64 {
    dot3(a, a).sqrt()
}

pub fn dist3(a: Vec3, b: Vec3) -> f64 {
    norm3(sub3(a, b))
}

pub fn normalize3(a: Vec3) -> Vec3 {
    let n = norm3(a);
    scale3(1.0 / n, a)
}

pub fn det3(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    dot3(a, cross3(b, c))
}
