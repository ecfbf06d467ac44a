//! The even spin operator `S_p = (S + lambda S lambda)/2`, its triad
//! components, spectrum and eigenvectors, and the Pauli-Lubanski vector on
//! momentum eigenstates.

use crate::dirac::{
    dot_ops, even_part, helicity_two_spinor, sigma_apply, upper_spinor, DiracOperatorSet, FourMomentum,
};
use crate::error::{Error, Result};
use crate::little_algebra::FrameTriad;
pub use crate::numkernel::SpinSpectrum;
use crate::numkernel::{
    commutator, fix_phase, hermitian_eigensystem, inner, normalized, vector_norm, CMatrix, Tolerance, C64, I,
};
use crate::report::{Check, Report};
use crate::vec3::Vec3;

const TAG: &str = "even_spin";

/// Eigenvalue magnitude of `a . S_p`: `sqrt((p.a)^2 + m^2) / (2 p0)`.
pub fn spin_projection_magnitude(fm: &FourMomentum, a: Vec3) -> f64 {
    let pa = fm.momentum().dot(a);
    0.5 * (pa * pa + fm.mass() * fm.mass()).sqrt() / fm.energy()
}

/// The even spin built three independent ways.
#[derive(Debug, Clone)]
pub struct EvenSpinForms {
    /// `(S + lambda S lambda) / 2`.
    pub projector: [CMatrix; 3],
    /// `m^2/p0^2 S + |p|^2/p0^2 (n.S) n + i m/(2 p0^2) p x gamma`.
    pub closed: [CMatrix; 3],
    /// `W H^{-1}` with a numerically inverted `H`.
    pub from_pauli_lubanski: [CMatrix; 3],
    /// Triad components in closed form:
    /// `Sp1 = m^2/p0^2 m.S - i m|p|/(2p0^2) l.gamma`,
    /// `Sp2 = m^2/p0^2 l.S + i m|p|/(2p0^2) m.gamma`, `Sp3 = n.S`.
    pub triad_closed: [CMatrix; 3],
}

impl EvenSpinForms {
    /// Largest entrywise disagreement among the three constructions and
    /// between the closed triad components and projections of the
    /// projector form.
    pub fn disagreement(&self, triad: &FrameTriad) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            worst = worst.max(self.projector[i].max_abs_diff(&self.closed[i]));
            worst = worst.max(self.projector[i].max_abs_diff(&self.from_pauli_lubanski[i]));
        }
        for (axis, closed) in triad.axes().into_iter().zip(&self.triad_closed) {
            worst = worst.max(dot_ops(axis, &self.projector).max_abs_diff(closed));
        }
        worst
    }
}

/// Pauli-Lubanski vector on momentum eigenstates: `W0 = S . p`,
/// `W = (S H + H S) / 2`.
#[derive(Debug, Clone)]
pub struct PauliLubanski {
    pub w0: CMatrix,
    pub w: [CMatrix; 3],
}

pub fn build_pauli_lubanski(dset: &DiracOperatorSet) -> PauliLubanski {
    let h = &dset.hamiltonian;
    PauliLubanski {
        w0: dot_ops(dset.momentum.momentum(), &dset.spin),
        w: dset.spin.clone().map(|s| (&(&s * h) + &(h * &s)).scale_real(0.5)),
    }
}

pub fn even_spin_forms(dset: &DiracOperatorSet, triad: &FrameTriad) -> Result<EvenSpinForms> {
    let fm = dset.momentum;
    triad.check_against(&fm)?;
    let (m, p0sq, pmag) = (fm.mass(), fm.energy().powi(2), fm.p_mag());
    let p = fm.momentum();
    let n = triad.n;
    let gamma = dset.gamma_vec();
    let spin = &dset.spin;

    let projector = [
        even_part(&spin[0], dset)?,
        even_part(&spin[1], dset)?,
        even_part(&spin[2], dset)?,
    ];

    let n_s = dot_ops(n, spin);
    let p_cross_gamma = [
        &gamma[2].scale_real(p[1]) - &gamma[1].scale_real(p[2]),
        &gamma[0].scale_real(p[2]) - &gamma[2].scale_real(p[0]),
        &gamma[1].scale_real(p[0]) - &gamma[0].scale_real(p[1]),
    ];
    let closed = std::array::from_fn(|i| {
        let t1 = spin[i].scale_real(m * m / p0sq);
        let t2 = n_s.scale_real(pmag * pmag / p0sq * n[i]);
        let t3 = p_cross_gamma[i].scale(I * (m / (2.0 * p0sq)));
        &(&t1 + &t2) + &t3
    });

    let h_inv = dset.hamiltonian_inverse()?;
    let pl = build_pauli_lubanski(dset);
    let from_pauli_lubanski = pl.w.map(|w| &w * &h_inv);

    let k = m * pmag / (2.0 * p0sq);
    let triad_closed = [
        &dot_ops(triad.m, spin).scale_real(m * m / p0sq) - &dot_ops(triad.l, &gamma).scale(I * k),
        &dot_ops(triad.l, spin).scale_real(m * m / p0sq) + &dot_ops(triad.m, &gamma).scale(I * k),
        n_s,
    ];
    Ok(EvenSpinForms {
        projector,
        closed,
        from_pauli_lubanski,
        triad_closed,
    })
}

/// Even spin with its triad components and the Pauli-Lubanski vector.
#[derive(Debug, Clone)]
pub struct EvenSpinSet {
    pub momentum: FourMomentum,
    pub triad: FrameTriad,
    /// Cartesian components of `S_p`.
    pub sp: [CMatrix; 3],
    /// `(m . S_p, l . S_p, n . S_p)`.
    pub components: [CMatrix; 3],
    pub w0: CMatrix,
    pub w: [CMatrix; 3],
    pub hamiltonian: CMatrix,
    /// Worst disagreement among the independent constructions.
    pub construction_residual: f64,
}

impl EvenSpinSet {
    /// `a . S_p`.
    pub fn along(&self, a: Vec3) -> CMatrix {
        dot_ops(a, &self.sp)
    }
}

/// Builds `S_p` and checks that the projector form, the closed form and
/// `W H^{-1}` agree entrywise to `1e-11`.
pub fn build_even_spin(dset: &DiracOperatorSet, triad: &FrameTriad) -> Result<EvenSpinSet> {
    let forms = even_spin_forms(dset, triad)?;
    let residual = forms.disagreement(triad);
    if !(residual <= 1e-11) {
        return Err(Error::CheckFailed {
            id: "even_spin.triple_construction".into(),
            residual,
            tolerance: 1e-11,
        });
    }
    let pl = build_pauli_lubanski(dset);
    let components = triad.axes().map(|axis| dot_ops(axis, &forms.projector));
    Ok(EvenSpinSet {
        momentum: dset.momentum,
        triad: *triad,
        sp: forms.projector,
        components,
        w0: pl.w0,
        w: pl.w,
        hamiltonian: dset.hamiltonian.clone(),
        construction_residual: residual,
    })
}

fn require_unit(a: Vec3) -> Result<()> {
    if (a.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("direction must be a unit vector, |a| = {}", a.norm())));
    }
    Ok(())
}

/// Diagonalizes `a . S_p` and checks the spectrum against
/// `{-s_a (x2), +s_a (x2)}` to `1e-10`.
pub fn even_spin_spectrum(es: &EvenSpinSet, a: Vec3) -> Result<SpinSpectrum> {
    require_unit(a)?;
    let spec = hermitian_eigensystem(&es.along(a), Tolerance::default())?;
    let s = spin_projection_magnitude(&es.momentum, a);
    let residual = spec
        .values
        .iter()
        .zip([-s, -s, s, s])
        .map(|(v, e)| (v - e).abs())
        .fold(0.0, f64::max);
    if !(residual <= 1e-10) {
        return Err(Error::CheckFailed {
            id: "even_spin.spectrum".into(),
            residual,
            tolerance: 1e-10,
        });
    }
    Ok(spec)
}

/// How the w-mixing coefficient of the closed eigenvector formula is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingCoefficient {
    /// `m (a . n) / (2 |p0|)`, as typeset.
    Axial,
    /// `m |a x n| / (2 |p0|)`.
    Transverse,
}

/// Placement of the inner signs of the closed eigenvector formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPlacement {
    /// upper `(..) w_± ± c w_∓`, lower `±(..) w_± - c w_∓`.
    AsPrinted,
    /// upper `(..) w_± ∓ c w_∓`, lower `±(..) w_± + c w_∓`.
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaReading {
    pub coefficient: MixingCoefficient,
    pub signs: SignPlacement,
}

impl FormulaReading {
    pub const ALL: [FormulaReading; 4] = [
        FormulaReading { coefficient: MixingCoefficient::Axial, signs: SignPlacement::AsPrinted },
        FormulaReading { coefficient: MixingCoefficient::Axial, signs: SignPlacement::Flipped },
        FormulaReading { coefficient: MixingCoefficient::Transverse, signs: SignPlacement::AsPrinted },
        FormulaReading { coefficient: MixingCoefficient::Transverse, signs: SignPlacement::Flipped },
    ];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadingResidual {
    pub reading: FormulaReading,
    /// `None` when the reading produces the zero vector.
    pub residual: Option<f64>,
}

/// Outcome of comparing the closed positive-energy eigenvectors of
/// `a . S_p` with the numerical eigenspaces.
#[derive(Debug, Clone)]
pub struct EigenvectorAnalysis {
    pub s_a: f64,
    pub readings: Vec<ReadingResidual>,
    pub matched: FormulaReading,
    /// Unit, phase-fixed eigenvectors for `+s_a` and `-s_a` from the
    /// matching reading.
    pub psi_plus: Vec<C64>,
    pub psi_minus: Vec<C64>,
    pub spectrum: SpinSpectrum,
}

/// Two-spinors `(w_+, w_-)` with `w_- = (a_perp . sigma) w_+ / |a_perp|`
/// (`m` replaces `a_perp` when `a` is along `n`).
fn helicity_pair(triad: &FrameTriad, a: Vec3) -> ([C64; 2], [C64; 2]) {
    let w_plus = helicity_two_spinor(triad.n);
    let flip_axis = a.reject_from(triad.n).normalized().unwrap_or(triad.m);
    (w_plus, sigma_apply(flip_axis, w_plus))
}

fn closed_eigenvector(
    fm: &FourMomentum,
    triad: &FrameTriad,
    a: Vec3,
    sign: f64,
    reading: FormulaReading,
) -> Vec<C64> {
    let (p0, m) = (fm.energy(), fm.mass());
    let an = a.dot(triad.n);
    let s = spin_projection_magnitude(fm, a);
    let c = match reading.coefficient {
        MixingCoefficient::Axial => m * an / (2.0 * p0),
        MixingCoefficient::Transverse => m * a.cross(triad.n).norm() / (2.0 * p0),
    };
    let (w_plus, w_minus) = helicity_pair(triad, a);
    let (wx, wy) = if sign > 0.0 { (w_plus, w_minus) } else { (w_minus, w_plus) };
    let head = s + 0.5 * an;
    let (up_mix, low_mix) = match reading.signs {
        SignPlacement::AsPrinted => (sign * c, -c),
        SignPlacement::Flipped => (-sign * c, c),
    };
    let up = (p0 + m).sqrt();
    let low = (p0 - m).max(0.0).sqrt();
    let mut out = Vec::with_capacity(4);
    for k in 0..2 {
        out.push((wx[k] * head + wy[k] * up_mix) * up);
    }
    for k in 0..2 {
        out.push((wx[k] * (sign * head) + wy[k] * low_mix) * low);
    }
    out
}

/// Evaluates every reading of the closed eigenvector formula against the
/// numerical eigendecomposition of `a . S_p` and returns the one that
/// matches (eigen-equation and rank-1 positive-energy eigenprojector, both to
/// `1e-9`).
pub fn even_spin_eigenvectors(es: &EvenSpinSet, dset: &DiracOperatorSet, a: Vec3) -> Result<EigenvectorAnalysis> {
    require_unit(a)?;
    let fm = es.momentum;
    let triad = es.triad;
    let spectrum = hermitian_eigensystem(&es.along(a), Tolerance::default())?;
    let s_a = spin_projection_magnitude(&fm, a);
    let op = es.along(a);
    let scale = (fm.energy() + fm.mass()).sqrt().max(1.0);

    let mut readings = Vec::new();
    let mut best: Option<(f64, FormulaReading, Vec<C64>, Vec<C64>)> = None;
    for reading in FormulaReading::ALL {
        let mut worst = 0.0f64;
        let mut vectors = Vec::new();
        let mut degenerate = false;
        for sign in [1.0, -1.0] {
            let raw = closed_eigenvector(&fm, &triad, a, sign, reading);
            if vector_norm(&raw) <= 1e-12 * scale {
                degenerate = true;
                break;
            }
            let mut psi = normalized(&raw).expect("non-zero");
            fix_phase(&mut psi);
            let applied = op.matvec(&psi);
            let eig: f64 = applied
                .iter()
                .zip(&psi)
                .map(|(x, y)| (x - y * (sign * s_a)).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let numeric = &spectrum.projector(spectrum.level_near(sign * s_a)) * &dset.pi_plus;
            let proj = CMatrix::outer(&psi, &psi).max_abs_diff(&numeric);
            worst = worst.max(eig).max(proj);
            vectors.push(psi);
        }
        if degenerate {
            readings.push(ReadingResidual { reading, residual: None });
            continue;
        }
        readings.push(ReadingResidual {
            reading,
            residual: Some(worst),
        });
        if worst <= 1e-9 && best.as_ref().is_none_or(|b| worst < b.0) {
            let minus = vectors.pop().unwrap();
            let plus = vectors.pop().unwrap();
            best = Some((worst, reading, plus, minus));
        }
    }

    match best {
        Some((_, matched, psi_plus, psi_minus)) => Ok(EigenvectorAnalysis {
            s_a,
            readings,
            matched,
            psi_plus,
            psi_minus,
            spectrum,
        }),
        None if readings.iter().all(|r| r.residual.is_none()) => Err(Error::Domain(format!(
            "closed eigenvector formula vanishes for this direction (a.n = {})",
            a.dot(triad.n)
        ))),
        None => Err(Error::TranscriptionSuspect(format!(
            "no reading of the eigenvector formula matches the numerical eigenspaces: {readings:?}"
        ))),
    }
}

/// Hermiticity, conservation and the triad brackets
/// `[Sp1, Sp2] = i m^2/p0^2 Sp3`, `[Sp3, Sp1] = i Sp2`, `[Sp2, Sp3] = i Sp1`.
pub fn verify_even_spin_algebra(es: &EvenSpinSet, tol: Tolerance) -> Result<Report> {
    let [s1, s2, s3] = &es.components;
    let c = es.momentum.contraction_param();
    let mut r = Report::new();
    for (id, eq, lhs, rhs) in [
        ("bracket_12", "[Sp1, Sp2] = i m^2/p0^2 Sp3", commutator(s1, s2)?, s3.scale(I * c)),
        ("bracket_31", "[Sp3, Sp1] = i Sp2", commutator(s3, s1)?, s2.scale(I)),
        ("bracket_23", "[Sp2, Sp3] = i Sp1", commutator(s2, s3)?, s1.scale(I)),
    ] {
        r.push(Check::scaled(format!("even_spin.{id}"), eq, TAG, lhs.max_abs_diff(&rhs), tol, 1.0));
    }
    let herm = es.sp.iter().map(CMatrix::hermiticity_defect).fold(0.0, f64::max);
    r.push(Check::new("even_spin.hermitian", "S_p = S_p^dagger", TAG, herm, 1e-12));
    let mut conserved = 0.0f64;
    for sp in &es.sp {
        conserved = conserved.max(commutator(sp, &es.hamiltonian)?.max_abs());
    }
    r.push(Check::new(
        "even_spin.conserved",
        "[S_p, H] = 0",
        TAG,
        conserved / es.momentum.energy(),
        1e-12,
    ));
    r.push(Check::new(
        "even_spin.triple_construction",
        "(S + lambda S lambda)/2 = closed form = W H^-1",
        TAG,
        es.construction_residual,
        1e-11,
    ));
    Ok(r)
}

/// `W H^{-1} = S_p`, `[W_mu, H] = 0`, and the rest-frame values
/// `W0 = 0`, `W = m S gamma^0`.
pub fn verify_pauli_lubanski(dset: &DiracOperatorSet, es: &EvenSpinSet, tol: Tolerance) -> Result<Report> {
    let pl = build_pauli_lubanski(dset);
    let h_inv = dset.hamiltonian_inverse()?;
    let p0 = dset.momentum.energy();
    let mut r = Report::new();
    let mut wh = 0.0f64;
    let mut cons = commutator(&pl.w0, &dset.hamiltonian)?.max_abs();
    for (w, sp) in pl.w.iter().zip(&es.sp) {
        wh = wh.max((w * &h_inv).max_abs_diff(sp));
        cons = cons.max(commutator(w, &dset.hamiltonian)?.max_abs());
    }
    r.push(Check::scaled("pauli_lubanski.w_hinv", "W H^-1 = S_p", TAG, wh, tol, 1.0));
    r.push(Check::scaled("pauli_lubanski.conserved", "[W_mu, H] = 0", TAG, cons, tol, p0 * p0));
    if dset.momentum.is_rest_frame() {
        let m = dset.momentum.mass();
        let mut rest = pl.w0.max_abs();
        for (w, s) in pl.w.iter().zip(&dset.spin) {
            rest = rest.max(w.max_abs_diff(&(s * &dset.gamma[0]).scale_real(m)));
        }
        r.push(Check::scaled("pauli_lubanski.rest_frame", "W0 = 0, W = m S gamma^0", TAG, rest, tol, m));
    }
    Ok(r)
}

/// Eigenvalues of `a . W`, which should be `p0 s_a` with `s_a` the
/// eigenvalues of `a . S_p`.
pub fn pauli_lubanski_spectrum(es: &EvenSpinSet, a: Vec3) -> Result<SpinSpectrum> {
    require_unit(a)?;
    hermitian_eigensystem(&dot_ops(a, &es.w), Tolerance::default())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub m: f64,
    pub p_mag: f64,
    /// Largest eigenvalue of `a . S_p` for `a` orthogonal to `p`.
    pub s_perp: f64,
    /// Largest eigenvalue of `a . W` for the same `a`.
    pub w_perp: f64,
}

/// For each `(m, |p|)` (momentum along `z`) diagonalizes the transverse
/// components of `S_p` and `W`. Rows follow input order.
pub fn limit_inequivalence_scan(points: &[(f64, f64)]) -> Result<Vec<LimitRow>> {
    points
        .iter()
        .map(|&(m, p_mag)| {
            if !(p_mag >= 0.0) {
                return Err(Error::Domain(format!("|p| must be >= 0, got {p_mag}")));
            }
            let fm = FourMomentum::new(m, Vec3::new(0.0, 0.0, p_mag))?;
            let dset = crate::dirac::build_dirac_set(fm);
            let triad = FrameTriad::for_momentum(fm.momentum());
            let es = build_even_spin(&dset, &triad)?;
            let a = triad.m;
            let s = hermitian_eigensystem(&es.along(a), Tolerance::default())?;
            let w = pauli_lubanski_spectrum(&es, a)?;
            Ok(LimitRow {
                m,
                p_mag,
                s_perp: *s.values.last().unwrap(),
                w_perp: *w.values.last().unwrap(),
            })
        })
        .collect()
}

/// Polarization data of a positive-energy state.
#[derive(Debug, Clone)]
pub struct Polarization {
    pub rho: CMatrix,
    /// Twice the helicity expectation `2 <n . S>`.
    pub zeta_par: f64,
    /// `(2/m) <W - (W . n) n>`.
    pub zeta_perp: Vec3,
    /// `max |(p_mu gamma^mu) rho|`, which vanishes as `m -> 0`.
    pub null_residual: f64,
}

/// Polarization vector of a normalized positive-energy spinor and the
/// density matrix `rho = (p_mu gamma^mu)(1 - gamma5 (zeta_par + zeta_perp . gamma)) / 2`.
pub fn polarization_density(dset: &DiracOperatorSet, state: &[C64]) -> Result<Polarization> {
    if state.len() != 4 {
        return Err(Error::Shape(format!("spinor needs 4 components, got {}", state.len())));
    }
    let fm = dset.momentum;
    if fm.mass() <= 0.0 {
        return Err(Error::Domain("transverse polarization is defined for m > 0".into()));
    }
    if (vector_norm(state) - 1.0).abs() > 1e-10 {
        return Err(Error::Domain("state must be unit-normalized".into()));
    }
    let negative = vector_norm(&dset.pi_minus.matvec(state));
    if negative > 1e-10 {
        return Err(Error::Domain(format!("negative-energy contamination {negative:e}")));
    }
    let n = FrameTriad::for_momentum(fm.momentum()).n;
    let pl = build_pauli_lubanski(dset);
    let expect = |op: &CMatrix| inner(state, &op.matvec(state)).re;
    let w = Vec3(std::array::from_fn(|i| expect(&pl.w[i])));
    let zeta_perp = w.reject_from(n) * (2.0 / fm.mass());
    let zeta_par = 2.0 * expect(&dot_ops(n, &dset.spin));

    let id = CMatrix::identity(4);
    let pol = &id.scale_real(zeta_par) + &dot_ops(zeta_perp, &dset.gamma_vec());
    let slash = dset.slash_p();
    let rho = (&slash * &(&id - &(&dset.gamma5 * &pol))).scale_real(0.5);
    let null_residual = (&slash * &rho).max_abs();
    Ok(Polarization {
        rho,
        zeta_par,
        zeta_perp,
        null_residual,
    })
}

/// `rho = (p_mu gamma^mu)(1 + helicity_sign gamma5) / 2` for a massless
/// momentum, with `(p_mu gamma^mu) rho` returned alongside.
pub fn massless_density(dset: &DiracOperatorSet, helicity_sign: f64) -> Result<(CMatrix, CMatrix)> {
    if dset.momentum.mass() != 0.0 {
        return Err(Error::Domain("massless density needs m = 0".into()));
    }
    let slash = dset.slash_p();
    let rho = (&slash * &(&CMatrix::identity(4) + &dset.gamma5.scale_real(helicity_sign))).scale_real(0.5);
    let null = &slash * &rho;
    Ok((rho, null))
}

/// Positive-energy helicity eigenspinor `Pi_+ (w, 0)` normalized, where `w`
/// is the two-spinor with `(n . sigma) w = +w` (or its flip for negative
/// helicity).
pub fn positive_energy_helicity_state(dset: &DiracOperatorSet, helicity_sign: f64) -> Vec<C64> {
    let triad = FrameTriad::for_momentum(dset.momentum.momentum());
    let w_plus = helicity_two_spinor(triad.n);
    let w = if helicity_sign > 0.0 {
        w_plus
    } else {
        sigma_apply(triad.m, w_plus)
    };
    let raw = dset.pi_plus.matvec(&upper_spinor(w));
    normalized(&raw).expect("upper spinors have positive-energy overlap")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::build_dirac_set;

    fn setup(m: f64, p: [f64; 3]) -> (DiracOperatorSet, EvenSpinSet) {
        let fm = FourMomentum::new(m, Vec3(p)).unwrap();
        let dset = build_dirac_set(fm);
        let es = build_even_spin(&dset, &FrameTriad::for_momentum(fm.momentum())).unwrap();
        (dset, es)
    }

    #[test]
    fn rest_frame_even_spin_is_spin() {
        let (dset, es) = setup(1.0, [0.0; 3]);
        for (sp, s) in es.sp.iter().zip(&dset.spin) {
            assert!(sp.max_abs_diff(s) < 1e-15);
        }
    }

    #[test]
    fn three_constructions_agree() {
        let (dset, es) = setup(1.0, [0.0, 0.0, 2.0]);
        let forms = even_spin_forms(&dset, &es.triad).unwrap();
        assert!(forms.disagreement(&es.triad) < 1e-12);
    }

    #[test]
    fn massless_transverse_components_vanish() {
        let (dset, es) = setup(0.0, [0.0, 0.0, 1.0]);
        assert_eq!(es.components[0].max_abs(), 0.0);
        assert_eq!(es.components[1].max_abs(), 0.0);
        assert!(es.components[2].max_abs_diff(&dset.spin[2]) < 1e-15);
        let r = verify_even_spin_algebra(&es, Tolerance::uniform(1e-12)).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn algebra_examples() {
        let tol = Tolerance::uniform(1e-12);
        let (_, es) = setup(1.0, [0.0, 0.0, 2.0]);
        let br = commutator(&es.components[0], &es.components[1]).unwrap();
        assert!(br.max_abs_diff(&es.components[2].scale(I * 0.2)) < 1e-12);
        assert!(verify_even_spin_algebra(&es, tol).unwrap().passed());
        let (_, rest) = setup(1.0, [0.0; 3]);
        let br = commutator(&rest.components[0], &rest.components[1]).unwrap();
        assert!(br.max_abs_diff(&rest.components[2].scale(I)) < 1e-15);
    }

    #[test]
    fn spectrum_examples() {
        let (_, rest) = setup(1.0, [0.0; 3]);
        for a in [Vec3::X, Vec3::Z, Vec3::new(0.6, 0.0, 0.8)] {
            let s = even_spin_spectrum(&rest, a).unwrap();
            assert!(s.values.iter().all(|v| (v.abs() - 0.5).abs() < 1e-12));
        }
        let (_, es) = setup(1.0, [0.0, 0.0, 2.0]);
        let s = even_spin_spectrum(&es, Vec3::X).unwrap();
        assert!((s.values[3] - 0.223_606_797_749_979).abs() < 1e-12);
        assert_eq!(s.levels.len(), 2);
        assert_eq!(s.levels[0].multiplicity, 2);
        let s = even_spin_spectrum(&es, Vec3::Z).unwrap();
        assert!((s.values[3] - 0.5).abs() < 1e-12);
        assert!(matches!(even_spin_spectrum(&es, Vec3::new(1.0, 1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn pauli_lubanski_examples() {
        let tol = Tolerance::uniform(1e-12);
        let (dset, rest) = setup(1.0, [0.0; 3]);
        let r = verify_pauli_lubanski(&dset, &rest, tol).unwrap();
        assert!(r.get("pauli_lubanski.rest_frame").unwrap().pass);
        assert!(r.passed());

        let (dset, es) = setup(1.0, [0.0, 0.0, 2.0]);
        assert!(verify_pauli_lubanski(&dset, &es, tol).unwrap().passed());
        let w = pauli_lubanski_spectrum(&es, Vec3::X).unwrap();
        assert!((w.values[3] - 0.5).abs() < 1e-12 && (w.values[0] + 0.5).abs() < 1e-12);
        let a = Vec3::new(0.48, 0.6, 0.64);
        let w = pauli_lubanski_spectrum(&es, a).unwrap();
        let s = even_spin_spectrum(&es, a).unwrap();
        for (wv, sv) in w.values.iter().zip(&s.values) {
            assert!((wv - es.momentum.energy() * sv).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvector_formula_matches_only_transverse_reading() {
        let (dset, es) = setup(1.0, [0.0, 0.0, 2.0]);
        let an = even_spin_eigenvectors(&es, &dset, Vec3::X).unwrap();
        assert_eq!(
            an.matched,
            FormulaReading {
                coefficient: MixingCoefficient::Transverse,
                signs: SignPlacement::AsPrinted
            }
        );
        for r in &an.readings {
            if r.reading != an.matched {
                assert!(r.residual.is_some_and(|x| x > 1e-3), "{r:?}");
            }
        }
        let (dset, es) = setup(1.3, [0.3, -0.7, 2.0]);
        let a = Vec3::new(0.6, 0.0, 0.8);
        let an = even_spin_eigenvectors(&es, &dset, a).unwrap();
        let op = es.along(a);
        let v = op.matvec(&an.psi_minus);
        for (x, y) in v.iter().zip(&an.psi_minus) {
            assert!((x + y * an.s_a).norm() < 1e-9);
        }
    }

    #[test]
    fn eigenvectors_along_momentum_are_helicity_states() {
        let (dset, es) = setup(1.0, [0.0, 0.0, 2.0]);
        let an = even_spin_eigenvectors(&es, &dset, Vec3::Z).unwrap();
        let hel = dot_ops(Vec3::Z, &dset.spin);
        let v = hel.matvec(&an.psi_plus);
        for (x, y) in v.iter().zip(&an.psi_plus) {
            assert!((x - y * 0.5).norm() < 1e-12);
        }
    }

    #[test]
    fn rest_frame_eigenvectors_are_upper_sigma_x_states() {
        let (dset, es) = setup(1.0, [0.0; 3]);
        let an = even_spin_eigenvectors(&es, &dset, Vec3::X).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [C64::new(r, 0.0), C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        for (x, y) in an.psi_plus.iter().zip(expected) {
            assert!((x - y).norm() < 1e-12);
        }
        assert!(an.psi_minus[2].norm() < 1e-15 && an.psi_minus[3].norm() < 1e-15);
    }

    #[test]
    fn eigenvector_formula_antiparallel() {
        // Along -n only the axial coefficient survives; the transverse one
        // gives the zero vector.
        let (dset, es) = setup(1.0, [0.0, 0.0, 2.0]);
        let an = even_spin_eigenvectors(&es, &dset, -Vec3::Z).unwrap();
        assert_eq!(an.matched.coefficient, MixingCoefficient::Axial);
        assert!(an
            .readings
            .iter()
            .filter(|r| r.reading.coefficient == MixingCoefficient::Transverse)
            .all(|r| r.residual.is_none()));
        let (dset, es) = setup(0.0, [0.0, 0.0, 2.0]);
        let r = even_spin_eigenvectors(&es, &dset, -Vec3::Z);
        assert!(matches!(r, Err(Error::Domain(_))), "{r:?}");
    }

    #[test]
    fn limit_rows() {
        let rows = limit_inequivalence_scan(&[(1.0, 1.0), (1.0, 10.0), (1.0, 100.0), (0.0, 5.0)]).unwrap();
        for r in &rows[..3] {
            assert!((r.w_perp - 0.5).abs() < 1e-12);
            assert!((r.s_perp - 0.5 / (1.0 + r.p_mag * r.p_mag).sqrt()).abs() < 1e-12);
        }
        assert!(rows[3].s_perp.abs() < 1e-15 && rows[3].w_perp.abs() < 1e-15);
    }

    #[test]
    fn polarization_of_helicity_states() {
        let (dset, _) = setup(1.0, [0.0, 0.0, 10.0]);
        let plus = positive_energy_helicity_state(&dset, 1.0);
        let pol = polarization_density(&dset, &plus).unwrap();
        assert!((pol.zeta_par - 1.0).abs() < 1e-12);
        assert!(pol.zeta_perp.norm() < 1e-12);

        let minus = positive_energy_helicity_state(&dset, -1.0);
        let mix: Vec<C64> = plus.iter().zip(&minus).map(|(a, b)| (a + b) * std::f64::consts::FRAC_1_SQRT_2).collect();
        let pol = polarization_density(&dset, &mix).unwrap();
        assert!(pol.zeta_perp.norm() > 0.5);
        assert!(pol.zeta_par.abs() < 1e-12);
    }

    #[test]
    fn density_null_residual_shrinks_with_mass() {
        let mut last = f64::INFINITY;
        for m in [1.0, 0.1, 0.01] {
            let fm = FourMomentum::new(m, Vec3::new(0.0, 0.0, 10.0)).unwrap();
            let dset = build_dirac_set(fm);
            let pol = polarization_density(&dset, &positive_energy_helicity_state(&dset, 1.0)).unwrap();
            assert!(pol.null_residual < last);
            last = pol.null_residual;
        }
        let dset = build_dirac_set(FourMomentum::new(0.0, Vec3::new(0.0, 0.0, 3.0)).unwrap());
        for sign in [1.0, -1.0] {
            let (_, null) = massless_density(&dset, sign).unwrap();
            assert_eq!(null.max_abs(), 0.0);
        }
    }

    #[test]
    fn polarization_rejects_bad_states() {
        let (dset, _) = setup(1.0, [0.0, 0.0, 2.0]);
        let neg = dset.pi_minus.matvec(&upper_spinor([C64::new(1.0, 0.0), C64::new(0.0, 0.0)]));
        let neg = normalized(&neg).unwrap();
        assert!(matches!(polarization_density(&dset, &neg), Err(Error::Domain(_))));
        let unnorm = vec![C64::new(2.0, 0.0); 4];
        assert!(matches!(polarization_density(&dset, &unnorm), Err(Error::Domain(_))));
        assert!(matches!(polarization_density(&dset, &unnorm[..3]), Err(Error::Shape(_))));
    }
}
