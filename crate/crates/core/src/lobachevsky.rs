//! The Lobachevsky function and the concave energy built from it.
//!
//! Lambda(x) = -integral_0^x log|2 sin t| dt. It is odd, pi-periodic, and
//! real-analytic away from multiples of pi, where the integrand has a log
//! singularity but the integral stays finite. Its derivative -log|2 sin x|
//! blows up there, which is what pushes maximizers of the energy away from
//! degenerate angles.
//!
//! Evaluation: reduce to [0, pi/2] by periodicity and Lambda(pi - x) =
//! -Lambda(x), then sum the power series
//!
//!   Lambda(x) = x - x log(2x) + x * sum_{k>=1} zeta(2k)/(k(2k+1)) (x/pi)^{2k}
//!
//! whose ratio is at most 1/4 on that range, so the fixed 32-term zeta table
//! reaches full f64 accuracy. The quadrature cross-check lives in the tests.

use crate::angles::{AngleStructure, TOL_AFFINE};
use crate::complex::TriComplex;
use crate::error::{Error, Result};

use std::f64::consts::{FRAC_PI_2, PI};

/// zeta(2k) for k = 1..=32.
const ZETA_EVEN: [f64; 32] = [
    1.644934066848226436,
    1.082323233711138192,
    1.017343061984449140,
    1.004077356197944339,
    1.000994575127818085,
    1.000246086553308048,
    1.000061248135058705,
    1.000015282259408652,
    1.000003817293265000,
    1.000000953962033873,
    1.000000238450502728,
    1.000000059608189051,
    1.000000014901554828,
    1.000000003725334025,
    1.000000000931327432,
    1.000000000232831183,
    1.000000000058207721,
    1.000000000014551922,
    1.000000000003637980,
    1.000000000000909495,
    1.000000000000227374,
    1.000000000000056843,
    1.000000000000014211,
    1.000000000000003553,
    1.000000000000000888,
    1.000000000000000222,
    1.000000000000000056,
    1.000000000000000014,
    1.000000000000000003,
    1.000000000000000001,
    1.0,
    1.0,
];

/// Corner angles below this are clamped before taking logs in the gradient.
pub const GRAD_CLAMP: f64 = 1e-12;

pub fn lobachevsky(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(lob(x))
}

/// Unchecked evaluation for internal hot paths.
pub(crate) fn lob(x: f64) -> f64 {
    let mut y = x % PI;
    if y < 0.0 {
        y += PI;
    }
    if y <= FRAC_PI_2 {
        series(y)
    } else {
        -series(PI - y)
    }
}

fn series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let q = (x / PI) * (x / PI);
    let mut p = 1.0;
    let mut s = 0.0;
    for (i, z) in ZETA_EVEN.iter().enumerate() {
        let k = (i + 1) as f64;
        p *= q;
        let term = z * p / (k * (2.0 * k + 1.0));
        s += term;
        if term <= 1e-18 * s {
            break;
        }
    }
    x - x * (2.0 * x).ln() + x * s
}

/// Hyperbolic volume of the ideal tetrahedron with dihedral angles a, b, c.
pub fn face_volume(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite())
        || a <= 0.0
        || b <= 0.0
        || c <= 0.0
        || (a + b + c - PI).abs() > TOL_AFFINE
    {
        return Err(Error::NotATriangle(a, b, c));
    }
    Ok(lob(a) + lob(b) + lob(c))
}

#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub value: f64,
    /// d/d theta_c = -log(2 sin theta_c), corner-linear order.
    pub gradient: Vec<f64>,
    /// Second derivatives -cot(theta_c); the full Hessian is this diagonal.
    pub hessian_diag: Vec<f64>,
    /// Some corner was clamped away from {0, pi} before differentiating.
    pub clamped: bool,
}

/// Total volume energy of an angle structure, with first and second
/// derivatives. Concave on angle space; strictly concave along directions
/// that change some corner, which covers every nonzero fiber direction.
pub fn energy(t: &TriComplex, theta: &AngleStructure) -> Result<EnergyReport> {
    if !theta.is_valid(t, TOL_AFFINE) {
        return Err(Error::InvalidAngleStructure(format!(
            "{} corners for {} faces, or positivity/face sums violated",
            theta.len(),
            t.face_count()
        )));
    }
    Ok(energy_unchecked(theta.as_slice()))
}

pub(crate) fn energy_unchecked(theta: &[f64]) -> EnergyReport {
    let mut value = 0.0;
    let mut gradient = Vec::with_capacity(theta.len());
    let mut hessian_diag = Vec::with_capacity(theta.len());
    let mut clamped = false;
    for &x in theta {
        value += lob(x);
        let y = x.clamp(GRAD_CLAMP, PI - GRAD_CLAMP);
        if y != x {
            clamped = true;
        }
        let (sin, cos) = y.sin_cos();
        gradient.push(-(2.0 * sin).ln());
        hessian_diag.push(-cos / sin);
    }
    EnergyReport {
        value,
        gradient,
        hessian_diag,
        clamped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::equilateral;
    use crate::complex::build_complex;

    // Reference values computed with 30-digit arithmetic from the defining
    // integral, rounded to 20 significant digits.
    const PINS: [(f64, f64); 10] = [
        (0.52359877559829887308, 0.50747080320482681251), // pi/6, the maximum
        (0.78539816339744830962, 0.45798279708860950753), // pi/4
        (1.04719755119659774615, 0.33831386880321787501), // pi/3
        (0.01, 0.049120285609948127757),
        (0.1, 0.26099935791511869818),
        (1.0, 0.36357302543163962371),
        (1.5, 0.049013104695650710581),
        (2.0, -0.2840719722149348904),
        (3.0, -0.3203913328508616048),
        (3.04159265358979323846, -0.26099935791511869818), // pi - 0.1
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, v) in &PINS {
            let got = lobachevsky(x).unwrap();
            assert!(
                (got - v).abs() <= 1e-12,
                "Lambda({x}) = {got}, want {v}"
            );
        }
        assert_eq!(lobachevsky(0.0).unwrap(), 0.0);
        assert!(lobachevsky(f64::NAN).is_err());
        assert!(lobachevsky(f64::INFINITY).is_err());
    }

    #[test]
    fn oddness_periodicity_and_maximum() {
        for i in 0..2000 {
            let x = -7.0 + 14.0 * (i as f64) / 1999.0;
            let l = lob(x);
            assert!((lob(-x) + l).abs() <= 1e-12, "odd fails at {x}");
            assert!((lob(x + PI) - l).abs() <= 1e-12, "periodic fails at {x}");
            assert!(l <= lob(PI / 6.0) + 1e-15, "max exceeded at {x}");
        }
        // Zeros at multiples of pi/2.
        assert!(lob(FRAC_PI_2).abs() <= 1e-15);
        assert!(lob(PI).abs() <= 1e-15);
    }

    #[test]
    fn doubling_identity() {
        // Lambda(2x)/2 = Lambda(x) + Lambda(x + pi/2).
        let pin = 0.23632709091902700713;
        assert!((lob(0.74) / 2.0 - pin).abs() <= 1e-13);
        assert!((lob(0.37) + lob(0.37 + FRAC_PI_2) - pin).abs() <= 1e-13);
        for i in 0..500 {
            let x = 1e-3 + (PI - 2e-3) * (i as f64) / 499.0;
            let lhs = lob(2.0 * x) / 2.0;
            let rhs = lob(x) + lob(x + FRAC_PI_2);
            assert!((lhs - rhs).abs() <= 1e-12, "identity fails at {x}");
        }
    }

    // Independent oracle: adaptive Simpson on [a, x] plus the analytic head
    // integral_0^a -log(2 sin t) dt = a - a log(2a) + a^3/18 + O(a^5).
    fn quad_oracle(x: f64) -> f64 {
        let a = 1e-4_f64.min(x / 2.0);
        let head = a - a * (2.0 * a).ln() + a * a * a / 18.0;
        head + simpson(a, x, 1e-13, 48)
    }

    fn f(t: f64) -> f64 {
        -(2.0 * t.sin()).ln()
    }

    fn simpson(lo: f64, hi: f64, tol: f64, depth: u32) -> f64 {
        let mid = 0.5 * (lo + hi);
        let whole = (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
        step(lo, hi, whole, tol, depth)
    }

    fn step(lo: f64, hi: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let mid = 0.5 * (lo + hi);
        let l = (mid - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + mid)) + f(mid));
        let r = (hi - mid) / 6.0 * (f(mid) + 4.0 * f(0.5 * (mid + hi)) + f(hi));
        if depth == 0 || (l + r - whole).abs() <= 15.0 * tol {
            l + r + (l + r - whole) / 15.0
        } else {
            step(lo, mid, l, tol / 2.0, depth - 1) + step(mid, hi, r, tol / 2.0, depth - 1)
        }
    }

    #[test]
    fn agrees_with_quadrature() {
        for i in 0..100 {
            let x = 0.01 + (PI - 0.02) * (i as f64) / 99.0;
            let s = lob(x);
            let q = quad_oracle(x);
            assert!((s - q).abs() <= 1e-10, "series {s} vs quadrature {q} at {x}");
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        // Derivative vanishes exactly at pi/6 where 2 sin = 1.
        let r = energy_unchecked(&[PI / 6.0]);
        assert!(r.gradient[0].abs() <= 1e-15);
        assert!(!r.clamped);

        let h = 1e-5;
        for &x in &[0.3, 0.7, PI / 6.0, 1.2, 2.0, 2.8] {
            let fd = (lob(x + h) - lob(x - h)) / (2.0 * h);
            let g = energy_unchecked(&[x]).gradient[0];
            assert!((fd - g).abs() <= 1e-6, "gradient at {x}: fd {fd} vs {g}");
            let fd2 = (lob(x + h) - 2.0 * lob(x) + lob(x - h)) / (h * h);
            let hh = energy_unchecked(&[x]).hessian_diag[0];
            assert!((fd2 - hh).abs() <= 1e-4, "hessian at {x}: fd {fd2} vs {hh}");
        }

        let r = energy_unchecked(&[1e-300]);
        assert!(r.clamped);
        assert!(r.gradient[0].is_finite());
    }

    #[test]
    fn tetrahedron_energy() {
        let t = build_complex(vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap();
        let theta = equilateral(&t);
        let rep = energy(&t, &theta).unwrap();
        // Four ideal regular tetrahedra: 4 * 3 * Lambda(pi/3).
        assert!((rep.value - 4.0 * 1.014941606409653625).abs() <= 1e-12);
        assert!(!rep.clamped);
        let fv = face_volume(PI / 3.0, PI / 3.0, PI / 3.0).unwrap();
        assert!((fv - 1.014941606409653625).abs() <= 1e-13);
    }

    #[test]
    fn rejects_non_triangles() {
        assert!(face_volume(1.0, 1.0, 1.0).is_err());
        assert!(face_volume(-0.1, 1.6, PI + 0.1 - 1.6).is_err());
        assert!(face_volume(0.0, PI / 2.0, PI / 2.0).is_err());
        let t = build_complex(vec![[0, 1, 2]]).unwrap();
        let bad = AngleStructure(vec![1.0, 1.0, 1.0]);
        assert!(matches!(
            energy(&t, &bad),
            Err(Error::InvalidAngleStructure(_))
        ));
    }
}
