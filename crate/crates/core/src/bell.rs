//! Two electrons in the centre-of-mass frame: squared total even spin,
//! helicity basis, singlet, spin correlation and CHSH combinations.
//!
//! Both particles share particle 1's triad `(m, l, n)`. The helicity basis is
//! `Psi_+ = Pi_+ (w_+, 0)` and `Psi_- = Pi_+ ((sigma_m - i sigma_l) w_+, 0)`
//! (normalized) with each particle's own `Pi_+`, so `Psi_-` is the lowered
//! `Psi_+` with the usual relative phase.

use serde::Serialize;

use crate::dirac::{build_dirac_set, helicity_two_spinor, sigma_apply, upper_spinor, DiracOperatorSet, FourMomentum};
use crate::error::{Error, Result};
use crate::even_spin::{build_even_spin, spin_projection_magnitude, EvenSpinSet};
use crate::little_algebra::FrameTriad;
use crate::numkernel::{commutator, hermitian_eigensystem, inner, kron, normalized, vector_norm, CMatrix, SpinSpectrum, Tolerance, C64, I};
use crate::report::{Check, Report};
use crate::vec3::Vec3;

const TAG: &str = "bell";

/// Below this `|s_a|` the normalized observable `a . S_p / |s_a|` is undefined.
const SPIN_FLOOR: f64 = 1e-14;

/// Positive-energy helicity pair `(Psi_+, Psi_-)` relative to `triad`.
fn helicity_pair(dset: &DiracOperatorSet, triad: &FrameTriad) -> (Vec<C64>, Vec<C64>) {
    let w_plus = helicity_two_spinor(triad.n);
    let lowered = {
        let a = sigma_apply(triad.m, w_plus);
        let b = sigma_apply(triad.l, w_plus);
        [a[0] - I * b[0], a[1] - I * b[1]]
    };
    let lift = |w| normalized(&dset.pi_plus.matvec(&upper_spinor(w))).expect("upper spinors overlap Pi_+");
    (lift(w_plus), lift(lowered))
}

/// Particle 1 at `p`, particle 2 at `-p`, with the squared total even spin
/// and the helicity basis.
#[derive(Debug, Clone)]
pub struct TwoParticleSystem {
    pub momentum: FourMomentum,
    pub triad: FrameTriad,
    pub particle1: EvenSpinSet,
    pub particle2: EvenSpinSet,
    /// `(S_p1 x 1 + 1 x S_p2)^2`, 16 x 16.
    pub total_sq: CMatrix,
    /// `H1 x 1 + 1 x H2`.
    pub total_hamiltonian: CMatrix,
    /// `[Psi_+, Psi_-]` for particle 1.
    pub basis1: [Vec<C64>; 2],
    /// `[Psi_+, Psi_-]` for particle 2.
    pub basis2: [Vec<C64>; 2],
}

impl TwoParticleSystem {
    pub fn new(fm: FourMomentum) -> Result<Self> {
        let triad = FrameTriad::for_momentum(fm.momentum());
        let d1 = build_dirac_set(fm);
        let d2 = build_dirac_set(fm.reversed());
        let particle1 = build_even_spin(&d1, &triad)?;
        let particle2 = build_even_spin(&d2, &FrameTriad::for_momentum(fm.reversed().momentum()))?;
        let id = CMatrix::identity(4);
        let mut total_sq = CMatrix::zeros(16, 16);
        for i in 0..3 {
            let t = &kron(&particle1.sp[i], &id) + &kron(&id, &particle2.sp[i]);
            total_sq = &total_sq + &(&t * &t);
        }
        let total_hamiltonian = &kron(&d1.hamiltonian, &id) + &kron(&id, &d2.hamiltonian);
        let (p1, m1) = helicity_pair(&d1, &triad);
        let (p2, m2) = helicity_pair(&d2, &triad);
        Ok(TwoParticleSystem {
            momentum: fm,
            triad,
            particle1,
            particle2,
            total_sq,
            total_hamiltonian,
            basis1: [p1, m1],
            basis2: [p2, m2],
        })
    }

    /// `m^2 / p0^2`.
    pub fn contraction_param(&self) -> f64 {
        self.momentum.contraction_param()
    }

    /// Product vectors in the order `++, +-, -+, --`.
    pub fn helicity_basis(&self) -> [Vec<C64>; 4] {
        let prod = |a: &[C64], b: &[C64]| -> Vec<C64> { a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect() };
        [
            prod(&self.basis1[0], &self.basis2[0]),
            prod(&self.basis1[0], &self.basis2[1]),
            prod(&self.basis1[1], &self.basis2[0]),
            prod(&self.basis1[1], &self.basis2[1]),
        ]
    }
}

/// `(S_p1 x 1 + 1 x S_p2)^2` for particle 1 at `p` and particle 2 at `-p`.
pub fn build_two_particle_even_spin(fm: FourMomentum) -> Result<CMatrix> {
    Ok(TwoParticleSystem::new(fm)?.total_sq)
}

/// Eigenvalues of the squared total even spin predicted in closed form,
/// ascending: `0 (x4), 2 m^2/p0^2 (x4), 1 + m^2/p0^2 (x8)`.
pub fn expected_total_spectrum(contraction_param: f64) -> [f64; 16] {
    let c = contraction_param;
    let mut v = [0.0; 16];
    for (k, x) in v.iter_mut().enumerate() {
        *x = match k {
            0..=3 => 0.0,
            4..=7 => 2.0 * c,
            _ => 1.0 + c,
        };
    }
    v.sort_by(f64::total_cmp);
    v
}

pub fn two_particle_spectrum(sys: &TwoParticleSystem) -> Result<SpinSpectrum> {
    hermitian_eigensystem(&sys.total_sq, Tolerance::default())
}

/// `<B_i| total_sq |B_j>` over the helicity basis `++, +-, -+, --`.
pub fn helicity_block_matrix(sys: &TwoParticleSystem) -> CMatrix {
    let basis = sys.helicity_basis();
    let applied: Vec<Vec<C64>> = basis.iter().map(|b| sys.total_sq.matvec(b)).collect();
    CMatrix::from_fn(4, 4, |i, j| inner(&basis[i], &applied[j]))
}

/// Diagonal `{1 + c, c, c, 1 + c}` with `c` coupling the middle pair.
pub fn expected_block_matrix(contraction_param: f64) -> CMatrix {
    let c = contraction_param;
    let mut m = CMatrix::from_real_diagonal(&[1.0 + c, c, c, 1.0 + c]);
    m[(1, 2)] = C64::new(c, 0.0);
    m[(2, 1)] = C64::new(c, 0.0);
    m
}

/// A vector in the 16-dimensional product space, particle 1 first.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    pub amplitudes: Vec<C64>,
}

impl TwoParticleState {
    /// `sum_k coeffs[k] B_k` over the helicity basis `++, +-, -+, --`.
    pub fn from_helicity(sys: &TwoParticleSystem, coeffs: [C64; 4]) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 16];
        for (c, b) in coeffs.iter().zip(sys.helicity_basis()) {
            for (a, x) in amplitudes.iter_mut().zip(b) {
                *a += c * x;
            }
        }
        TwoParticleState { amplitudes }
    }

    pub fn norm(&self) -> f64 {
        vector_norm(&self.amplitudes)
    }

    /// Coefficients over `++, +-, -+, --`.
    pub fn helicity_coefficients(&self, sys: &TwoParticleSystem) -> [C64; 4] {
        sys.helicity_basis().map(|b| inner(&b, &self.amplitudes))
    }

    /// Swaps the helicity labels of the two particles.
    pub fn exchange_helicity(&self, sys: &TwoParticleSystem) -> Self {
        let [pp, pm, mp, mm] = self.helicity_coefficients(sys);
        TwoParticleState::from_helicity(sys, [pp, mp, pm, mm])
    }

    pub fn expectation(&self, op: &CMatrix) -> C64 {
        inner(&self.amplitudes, &op.matvec(&self.amplitudes))
    }
}

/// `(Psi_+ x Psi_- - Psi_- x Psi_+) / sqrt 2`.
pub fn singlet_state(sys: &TwoParticleSystem) -> TwoParticleState {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let zero = C64::new(0.0, 0.0);
    TwoParticleState::from_helicity(sys, [zero, C64::new(r, 0.0), C64::new(-r, 0.0), zero])
}

/// Hermiticity, conservation, closed-form spectrum, singlet null vector and
/// the helicity block matrix.
pub fn verify_two_particle(sys: &TwoParticleSystem, tol: Tolerance) -> Result<Report> {
    let c = sys.contraction_param();
    let mut r = Report::new();
    r.push(Check::new(
        "bell.total_sq_hermitian",
        "(S_p1 + S_p2)^2 Hermitian",
        TAG,
        sys.total_sq.hermiticity_defect(),
        1e-12,
    ));
    let comm = commutator(&sys.total_sq, &sys.total_hamiltonian)?.max_abs();
    r.push(Check::scaled(
        "bell.total_sq_conserved",
        "[(S_p1 + S_p2)^2, H1 + H2] = 0",
        TAG,
        comm,
        tol,
        sys.momentum.energy().max(1.0),
    ));
    let spec = two_particle_spectrum(sys)?;
    let spec_res = spec
        .values
        .iter()
        .zip(expected_total_spectrum(c))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    r.push(Check::scaled(
        "bell.total_sq_spectrum",
        "spec = {1 + m^2/p0^2 (x8), 2 m^2/p0^2 (x4), 0 (x4)}",
        TAG,
        spec_res,
        tol,
        1.0,
    ));
    let singlet = singlet_state(sys);
    r.push(Check::scaled(
        "bell.singlet_null",
        "(S_p1 + S_p2)^2 Psi = 0",
        TAG,
        vector_norm(&sys.total_sq.matvec(&singlet.amplitudes)),
        tol,
        1.0,
    ));
    r.push(Check::scaled(
        "bell.helicity_blocks",
        "helicity-basis matrix = [[1+c,0,0,0],[0,c,c,0],[0,c,c,0],[0,0,0,1+c]]",
        TAG,
        helicity_block_matrix(sys).max_abs_diff(&expected_block_matrix(c)),
        tol,
        1.0,
    ));
    Ok(r)
}

/// Analyzer directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSetting {
    pub a: Vec3,
    pub b: Vec3,
}

fn require_unit(v: Vec3, name: &str) -> Result<()> {
    if (v.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("analyzer {name} must be a unit vector, |{name}| = {}", v.norm())));
    }
    Ok(())
}

impl BellSetting {
    pub fn new(a: Vec3, b: Vec3) -> Result<Self> {
        require_unit(a, "a")?;
        require_unit(b, "b")?;
        Ok(BellSetting { a, b })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellCorrelation {
    /// `-(a_par . b_par + m^2/p0^2 a_perp . b_perp) / (4 |s_a s_b|)`.
    pub e_formula: f64,
    /// `<Psi| (a . S_p1 / |s_a|) x (b . S_p2 / |s_b|) |Psi>` on the singlet.
    pub e_numeric: f64,
}

impl BellCorrelation {
    pub fn abs_diff(&self) -> f64 {
        (self.e_formula - self.e_numeric).abs()
    }
}

/// Singlet correlation of the normalized spin observables, in closed form
/// and by direct contraction.
pub fn bell_correlation(sys: &TwoParticleSystem, setting: &BellSetting) -> Result<BellCorrelation> {
    BellSetting::new(setting.a, setting.b)?;
    let fm = sys.momentum;
    let (sa, sb) = (
        spin_projection_magnitude(&fm, setting.a),
        spin_projection_magnitude(&fm, setting.b),
    );
    if sa < SPIN_FLOOR || sb < SPIN_FLOOR {
        return Err(Error::Domain(
            "normalized observable undefined: s_a = 0 for a massless particle with a orthogonal to p".into(),
        ));
    }
    let n = sys.triad.n;
    let (a_par, b_par) = (setting.a.dot(n), setting.b.dot(n));
    let perp = setting.a.reject_from(n).dot(setting.b.reject_from(n));
    let e_formula = -(a_par * b_par + sys.contraction_param() * perp) / (4.0 * sa * sb);

    let op = kron(
        &sys.particle1.along(setting.a).scale_real(1.0 / sa),
        &sys.particle2.along(setting.b).scale_real(1.0 / sb),
    );
    let e_numeric = singlet_state(sys).expectation(&op).re;
    Ok(BellCorrelation { e_formula, e_numeric })
}

/// `cos(theta) n + sin(theta) (cos(phi) m + sin(phi) l)`; angles in degrees.
pub fn direction_from_angles(triad: &FrameTriad, theta_deg: f64, phi_deg: f64) -> Vec3 {
    let (t, p) = (theta_deg.to_radians(), phi_deg.to_radians());
    triad.n * t.cos() + (triad.m * p.cos() + triad.l * p.sin()) * t.sin()
}

/// Inverse of [`direction_from_angles`]: `(theta, phi)` in degrees with
/// `theta` in `[0, 180]` and `phi` in `(-180, 180]`.
pub fn angles_of(triad: &FrameTriad, v: Vec3) -> (f64, f64) {
    let [x, y, z] = triad.components(v);
    let theta = z.clamp(-1.0, 1.0).acos().to_degrees();
    let phi = if x.abs() < 1e-15 && y.abs() < 1e-15 { 0.0 } else { y.atan2(x).to_degrees() };
    (theta, phi)
}

/// Four analyzer directions for `E(a,b) - E(a,b') + E(a',b) + E(a',b')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSetting {
    pub a: Vec3,
    pub b: Vec3,
    pub a_prime: Vec3,
    pub b_prime: Vec3,
}

/// Plane containing all four analyzers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChshPlane {
    /// Spanned by `m` and `l`, orthogonal to the momentum.
    Perp,
    /// Spanned by `n` and `m`.
    Mixed,
}

impl ChshPlane {
    /// Unit vector at `angle_deg` within the plane.
    pub fn direction(self, triad: &FrameTriad, angle_deg: f64) -> Vec3 {
        let t = angle_deg.to_radians();
        match self {
            ChshPlane::Perp => triad.m * t.cos() + triad.l * t.sin(),
            ChshPlane::Mixed => triad.n * t.cos() + triad.m * t.sin(),
        }
    }

    /// Setting with `a, b, a', b'` at `0, phi, 2 phi, 3 phi`.
    pub fn setting(self, triad: &FrameTriad, phi_deg: f64) -> ChshSetting {
        ChshSetting {
            a: self.direction(triad, 0.0),
            b: self.direction(triad, phi_deg),
            a_prime: self.direction(triad, 2.0 * phi_deg),
            b_prime: self.direction(triad, 3.0 * phi_deg),
        }
    }

    /// Settings for `phi = 0, step, 2 step, ...` up to 180 degrees inclusive.
    pub fn grid(self, triad: &FrameTriad, step_deg: f64) -> Result<Vec<ChshSetting>> {
        if !(step_deg > 0.0) || step_deg > 180.0 {
            return Err(Error::Domain(format!("angle step must be in (0, 180], got {step_deg}")));
        }
        let count = (180.0 / step_deg + 1e-9).floor() as usize;
        Ok((0..=count).map(|k| self.setting(triad, k as f64 * step_deg)).collect())
    }
}

/// `|E(a,b) - E(a,b') + E(a',b) + E(a',b')|` from the closed-form correlation.
pub fn chsh_value(sys: &TwoParticleSystem, s: &ChshSetting) -> Result<f64> {
    let e = |a, b| bell_correlation(sys, &BellSetting::new(a, b)?).map(|c| c.e_formula);
    Ok((e(s.a, s.b)? - e(s.a, s.b_prime)? + e(s.a_prime, s.b)? + e(s.a_prime, s.b_prime)?).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshRow {
    pub setting: ChshSetting,
    /// `None` when some correlation is undefined.
    pub s: Option<f64>,
}

impl ChshRow {
    /// `Some(S > 2)` for valid rows.
    pub fn violation(&self) -> Option<bool> {
        self.s.map(|s| s > 2.0)
    }
}

/// Evaluates every setting; rows with an undefined correlation carry `None`.
pub fn chsh_scan(sys: &TwoParticleSystem, settings: &[ChshSetting]) -> Vec<ChshRow> {
    settings
        .iter()
        .map(|setting| ChshRow {
            setting: *setting,
            s: chsh_value(sys, setting).ok(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(m: f64, p: [f64; 3]) -> TwoParticleSystem {
        TwoParticleSystem::new(FourMomentum::new(m, Vec3(p)).unwrap()).unwrap()
    }

    #[test]
    fn spectrum_examples() {
        let s = sys(1.0, [0.0, 0.0, 2.0]);
        let spec = two_particle_spectrum(&s).unwrap();
        let levels: Vec<(f64, usize)> = spec.levels.iter().map(|l| (l.value, l.multiplicity)).collect();
        assert_eq!(levels.len(), 3);
        for ((v, k), (ev, ek)) in levels.iter().zip([(0.0, 4), (0.4, 4), (1.2, 8)]) {
            assert!((v - ev).abs() < 1e-11 && *k == ek, "{levels:?}");
        }
        let spec = two_particle_spectrum(&sys(0.0, [0.0, 0.0, 1.0])).unwrap();
        let levels: Vec<(f64, usize)> = spec.levels.iter().map(|l| (l.value, l.multiplicity)).collect();
        assert_eq!(levels.len(), 2);
        assert!(levels[0].0.abs() < 1e-12 && levels[0].1 == 8);
        assert!((levels[1].0 - 1.0).abs() < 1e-12 && levels[1].1 == 8);
    }

    #[test]
    fn rest_limit_approaches_triplet_and_singlet() {
        let spec = two_particle_spectrum(&sys(1.0, [0.0, 0.0, 1e-4])).unwrap();
        assert!(spec.values[..4].iter().all(|v| v.abs() < 1e-12));
        assert!(spec.values[4..].iter().all(|v| (v - 2.0).abs() < 1e-7));
    }

    #[test]
    fn block_matrix_examples() {
        let s = sys(1.0, [0.0, 0.0, 2.0]);
        let b = helicity_block_matrix(&s);
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((b[(i, j)] - C64::new(0.2, 0.0)).norm() < 1e-12);
        }
        assert!(b.max_abs_diff(&expected_block_matrix(0.2)) < 1e-12);
        let b = helicity_block_matrix(&sys(0.0, [0.0, 0.0, 3.0]));
        assert!(b.max_abs_diff(&CMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 1.0])) < 1e-12);
        let b = helicity_block_matrix(&sys(1.0, [0.0; 3]));
        assert!(b.max_abs_diff(&expected_block_matrix(1.0)) < 1e-12);
    }

    #[test]
    fn singlet_examples() {
        let s = sys(1.0, [0.0, 0.0, 2.0]);
        let psi = singlet_state(&s);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!(vector_norm(&s.total_sq.matvec(&psi.amplitudes)) < 1e-10);
        let ex = psi.exchange_helicity(&s);
        for (x, y) in ex.amplitudes.iter().zip(&psi.amplitudes) {
            assert!((x + y).norm() < 1e-12);
        }
        assert!(verify_two_particle(&s, Tolerance::uniform(1e-11)).unwrap().passed());
    }

    #[test]
    fn basis_matches_even_spin_lowering() {
        let s = sys(1.3, [0.4, -0.2, 1.1]);
        for (es, [plus, minus]) in [(&s.particle1, &s.basis1), (&s.particle2, &s.basis2)] {
            let lower = &es.along(s.triad.m) - &es.along(s.triad.l).scale(I);
            let lowered = normalized(&lower.matvec(plus)).unwrap();
            for (x, y) in lowered.iter().zip(minus) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn correlation_examples() {
        let s = sys(1.0, [0.0, 0.0, 2.0]);
        let n = s.triad.n;
        let c = bell_correlation(&s, &BellSetting::new(n, n).unwrap()).unwrap();
        assert!((c.e_formula + 1.0).abs() < 1e-12 && c.abs_diff() < 1e-10);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let a = (n + s.triad.m) * r;
        let b = (n - s.triad.m) * r;
        let c = bell_correlation(&s, &BellSetting::new(a, b).unwrap()).unwrap();
        assert!((c.e_formula + 2.0 / 3.0).abs() < 1e-12, "{c:?}");
        assert!(c.abs_diff() < 1e-10);
        for p in [[0.0, 0.0, 2.0], [0.0, 0.0, 200.0], [0.3, 1.0, -0.5]] {
            let s = sys(1.0, p);
            let a = ChshPlane::Perp.direction(&s.triad, 0.0);
            let b = ChshPlane::Perp.direction(&s.triad, 50.0);
            let c = bell_correlation(&s, &BellSetting::new(a, b).unwrap()).unwrap();
            assert!((c.e_numeric + 50f64.to_radians().cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn massless_perpendicular_is_undefined() {
        let s = sys(0.0, [0.0, 0.0, 1.0]);
        let e = bell_correlation(&s, &BellSetting::new(Vec3::X, Vec3::Z).unwrap());
        assert!(matches!(e, Err(Error::Domain(msg)) if msg.contains("normalized observable undefined")));
    }

    #[test]
    fn chsh_examples() {
        for p in [[0.0, 0.0, 2.0], [0.0, 0.0, 200.0]] {
            let s = sys(1.0, p);
            let v = chsh_value(&s, &ChshPlane::Perp.setting(&s.triad, 45.0)).unwrap();
            assert!((v - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        }
        let s = sys(1.0, [0.0, 0.0, 2.0]);
        let mixed = chsh_value(&s, &ChshPlane::Mixed.setting(&s.triad, 45.0)).unwrap();
        // Regression value, reduced from 2 sqrt 2 by the m^2/p0^2 weighting.
        assert!((mixed - 2.642_238_439_278_279).abs() < 1e-12, "{mixed}");
        let rows = chsh_scan(&sys(0.0, [0.0, 0.0, 1.0]), &ChshPlane::Perp.grid(&FrameTriad::CANONICAL, 5.0).unwrap());
        assert_eq!(rows.len(), 37);
        assert!(rows.iter().all(|r| r.s.is_none() && r.violation().is_none()));
    }

    #[test]
    fn angle_round_trip() {
        let t = FrameTriad::for_momentum(Vec3::new(0.2, -0.5, 0.7));
        let v = direction_from_angles(&t, 63.0, -120.0);
        let (th, ph) = angles_of(&t, v);
        assert!((th - 63.0).abs() < 1e-10 && (ph + 120.0).abs() < 1e-10);
    }
}
