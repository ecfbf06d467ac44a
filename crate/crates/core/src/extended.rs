//! Even angular velocity, the even forms of the Hamiltonian, the massless
//! kinetic moment of inertia and the ring radius `r_s = s / |p|`.

use crate::dirac::{dot_ops, DiracOperatorSet, FourMomentum};
use crate::error::{Error, Result};
use crate::even_spin::{build_even_spin, positive_energy_helicity_state};
use crate::little_algebra::FrameTriad;
use crate::numkernel::{commutator, inner, CMatrix, Tolerance, I};
use crate::report::{Check, Report};
use crate::vec3::Vec3;

const TAG: &str = "extended";

/// Residual scale for operators linear in the momentum.
fn even_check_scale(p0: f64) -> f64 {
    p0.max(1.0)
}

/// `omega = -2 gamma5 p`.
pub fn angular_velocity(dset: &DiracOperatorSet) -> [CMatrix; 3] {
    let p = dset.momentum.momentum();
    std::array::from_fn(|i| dset.gamma5.scale_real(-2.0 * p[i]))
}

fn cross_ops(a: &[CMatrix; 3], b: &[CMatrix; 3]) -> [CMatrix; 3] {
    std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        &(&a[j] * &b[k]) - &(&a[k] * &b[j])
    })
}

fn sum_products(a: &[CMatrix; 3], b: &[CMatrix; 3]) -> CMatrix {
    let mut out = &a[0] * &b[0];
    for i in 1..3 {
        out = &out + &(&a[i] * &b[i]);
    }
    out
}

/// Operators derived from the angular velocity. Massive momenta fill
/// `big_omega`; massless momenta fill `even_velocity`, `ik` and `r_s`.
#[derive(Debug, Clone)]
pub struct ExtendedQuantities {
    pub omega: [CMatrix; 3],
    /// Even part of `omega`: `(1 + m gamma.n/|p|) / (1 + m^2/p^2) omega`.
    pub big_omega: [CMatrix; 3],
    /// `c = (alpha . p) p / p^2` (massless only).
    pub even_velocity: Option<[CMatrix; 3]>,
    /// `s (p . S) / p^2` (massless only).
    pub ik: Option<CMatrix>,
    /// `s / |p|` (massless only).
    pub r_s: Option<f64>,
    pub helicity_s: f64,
}

/// `i[H, S] = omega x S` componentwise, `[H, n.S] = 0`, and at `m = 0`
/// also `H = omega . S`.
pub fn verify_precession(dset: &DiracOperatorSet, tol: Tolerance) -> Result<Report> {
    let fm = dset.momentum;
    let omega = angular_velocity(dset);
    let rhs = cross_ops(&omega, &dset.spin);
    let mut heis = 0.0f64;
    for (s, r) in dset.spin.iter().zip(&rhs) {
        let lhs = commutator(&dset.hamiltonian, s)?.scale(I);
        heis = heis.max(lhs.max_abs_diff(r));
    }
    let scale = even_check_scale(fm.energy());
    let mut report = Report::new();
    report.push(Check::scaled("precession.heisenberg", "i[H, S] = omega x S", TAG, heis, tol, scale));
    if !fm.is_rest_frame() {
        let n = FrameTriad::for_momentum(fm.momentum()).n;
        let res = commutator(&dset.hamiltonian, &dot_ops(n, &dset.spin))?.max_abs();
        report.push(Check::scaled("precession.helicity_conserved", "[H, n.S] = 0", TAG, res, tol, scale));
    }
    if fm.mass() == 0.0 {
        let res = dset.hamiltonian.max_abs_diff(&sum_products(&omega, &dset.spin));
        report.push(Check::scaled("precession.h1", "H = omega . S (m = 0)", TAG, res, tol, scale));
    }
    Ok(report)
}

/// Closed-form `Omega`; requires `|p| > 0`.
pub fn even_angular_velocity(dset: &DiracOperatorSet) -> Result<[CMatrix; 3]> {
    let fm = dset.momentum;
    let pmag = fm.p_mag();
    if pmag == 0.0 {
        return Err(Error::Domain("even angular velocity needs |p| > 0".into()));
    }
    let m = fm.mass();
    let n = fm.momentum() * (1.0 / pmag);
    let factor = (&CMatrix::identity(4) + &dot_ops(n, &dset.gamma_vec()).scale_real(m / pmag))
        .scale_real(1.0 / (1.0 + m * m / (pmag * pmag)));
    Ok(angular_velocity(dset).map(|w| &factor * &w))
}

/// `max |Omega - omega|`; vanishes linearly as `m -> 0` at fixed `|p|`.
pub fn omega_deviation(dset: &DiracOperatorSet) -> Result<f64> {
    let big = even_angular_velocity(dset)?;
    let omega = angular_velocity(dset);
    Ok(big.iter().zip(&omega).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max))
}

/// Builds `Omega` and checks `H = (p0^2/p^2) Omega . S_p = (p0^2/p^2) Omega . S`,
/// `[Omega, H] = 0` and `Omega = (omega + lambda omega lambda) / 2`.
pub fn build_even_velocity_set(dset: &DiracOperatorSet, tol: Tolerance) -> Result<(ExtendedQuantities, Report)> {
    let fm = dset.momentum;
    let big_omega = even_angular_velocity(dset)?;
    let omega = angular_velocity(dset);
    let es = build_even_spin(dset, &FrameTriad::for_momentum(fm.momentum()))?;
    let inv_beta_sq = fm.energy().powi(2) / fm.p_mag().powi(2);
    let scale = even_check_scale(fm.energy());

    let mut report = Report::new();
    let via_sp = sum_products(&big_omega, &es.sp).scale_real(inv_beta_sq);
    let via_s = sum_products(&big_omega, &dset.spin).scale_real(inv_beta_sq);
    report.push(Check::scaled(
        "even_velocity.nh_even_spin",
        "H = (p0^2/p^2) Omega . S_p",
        TAG,
        dset.hamiltonian.max_abs_diff(&via_sp),
        tol,
        scale,
    ));
    report.push(Check::scaled(
        "even_velocity.nh_spin",
        "H = (p0^2/p^2) Omega . S",
        TAG,
        dset.hamiltonian.max_abs_diff(&via_s),
        tol,
        scale,
    ));
    let mut conserved = 0.0f64;
    let mut even = 0.0f64;
    for (big, w) in big_omega.iter().zip(&omega) {
        conserved = conserved.max(commutator(big, &dset.hamiltonian)?.max_abs());
        even = even.max(big.max_abs_diff(&crate::dirac::even_part(w, dset)?));
    }
    report.push(Check::scaled("even_velocity.conserved", "[Omega, H] = 0", TAG, conserved, tol, scale * scale));
    report.push(Check::scaled(
        "even_velocity.even_part",
        "Omega = (omega + lambda omega lambda)/2",
        TAG,
        even,
        tol,
        scale,
    ));
    Ok((
        ExtendedQuantities {
            omega,
            big_omega,
            even_velocity: None,
            ik: None,
            r_s: None,
            helicity_s: 0.5,
        },
        report,
    ))
}

/// `r_s = s / |p|` in natural units.
pub fn robinson_radius(s: f64, p_mag: f64) -> Result<f64> {
    if !(p_mag > 0.0) || !p_mag.is_finite() || !s.is_finite() {
        return Err(Error::Domain(format!("radius needs finite s and |p| > 0, got s = {s}, |p| = {p_mag}")));
    }
    Ok(s / p_mag)
}

/// Massless quantities for helicity `s`: `H = c . p = omega . S`,
/// `|p| r_s = s`, and for `s = 1/2` the expectation identity
/// `<Psi+| I_k omega^2 |Psi+> = <Psi+| H |Psi+>`.
pub fn massless_extended_set(dset: &DiracOperatorSet, s: f64, tol: Tolerance) -> Result<(ExtendedQuantities, Report)> {
    let fm = dset.momentum;
    if fm.mass() != 0.0 {
        return Err(Error::Domain(format!("massless set needs m = 0, got m = {}", fm.mass())));
    }
    let p = fm.momentum();
    let psq = p.dot(p);
    let alpha_p = dot_ops(p, &dset.alpha);
    let c: [CMatrix; 3] = std::array::from_fn(|i| alpha_p.scale_real(p[i] / psq));
    let omega = angular_velocity(dset);
    let ik = dot_ops(p, &dset.spin).scale_real(s / psq);
    let r_s = robinson_radius(s, fm.p_mag())?;
    let scale = even_check_scale(fm.energy());

    let mut report = Report::new();
    report.push(Check::scaled(
        "massless.h2",
        "H = c . p",
        TAG,
        dset.hamiltonian.max_abs_diff(&dot_ops(p, &c)),
        tol,
        scale,
    ));
    report.push(Check::scaled(
        "massless.h1",
        "H = omega . S",
        TAG,
        dset.hamiltonian.max_abs_diff(&sum_products(&omega, &dset.spin)),
        tol,
        scale,
    ));
    report.push(Check::new(
        "massless.radius",
        "|p| r_s = s",
        TAG,
        (fm.p_mag() * r_s - s).abs(),
        4.0 * f64::EPSILON * s.abs().max(1.0),
    ));
    if s == 0.5 {
        let psi = positive_energy_helicity_state(dset, 1.0);
        let omega_sq = sum_products(&omega, &omega);
        let lhs = inner(&psi, &(&ik * &omega_sq).matvec(&psi));
        let rhs = inner(&psi, &dset.hamiltonian.matvec(&psi));
        report.push(Check::scaled(
            "massless.kinetic_inertia",
            "<Psi+| I_k omega^2 |Psi+> = <Psi+| H |Psi+>",
            TAG,
            (lhs - rhs).norm(),
            tol,
            scale,
        ));
    }
    let big_omega = omega.clone();
    Ok((
        ExtendedQuantities {
            omega,
            big_omega,
            even_velocity: Some(c),
            ik: Some(ik),
            r_s: Some(r_s),
            helicity_s: s,
        },
        report,
    ))
}

/// One sample of the ring projection.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RingPoint {
    pub frame: usize,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Unwrapped angle in the `(m, l)` plane.
    pub phase: f64,
}

/// Circle of radius `|r_s|` in the plane orthogonal to `n`, centred on
/// `t n`, rotating at angular rate `1/|r_s|` in the sense `sign(s)`. The frame
/// step defaults to `|r_s| / 8`.
pub fn robinson_circle_samples(
    fm: &FourMomentum,
    s: f64,
    n_samples: usize,
    n_frames: usize,
    dt: Option<f64>,
) -> Result<Vec<RingPoint>> {
    if fm.mass() != 0.0 {
        return Err(Error::Domain(format!("ring samples need m = 0, got m = {}", fm.mass())));
    }
    if n_samples < 3 || n_frames < 1 {
        return Err(Error::Domain(format!(
            "need at least 3 samples and 1 frame, got {n_samples} and {n_frames}"
        )));
    }
    if s == 0.0 {
        return Err(Error::Domain("helicity must be non-zero".into()));
    }
    let radius = robinson_radius(s, fm.p_mag())?.abs();
    let dt = dt.unwrap_or(radius / 8.0);
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain(format!("frame step must be positive, got {dt}")));
    }
    let triad = FrameTriad::for_momentum(fm.momentum());
    let sense = s.signum();
    let mut out = Vec::with_capacity(n_samples * n_frames);
    for frame in 0..n_frames {
        let t = frame as f64 * dt;
        let centre = triad.n * t;
        for j in 0..n_samples {
            let phase = std::f64::consts::TAU * j as f64 / n_samples as f64 + sense * t / radius;
            let r: Vec3 = centre + triad.m * (radius * phase.cos()) + triad.l * (radius * phase.sin());
            out.push(RingPoint {
                frame,
                t,
                x: r[0],
                y: r[1],
                z: r[2],
                phase,
            });
        }
    }
    Ok(out)
}
