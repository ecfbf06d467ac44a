//! Standard (Dirac) representation of the gamma matrices and the
//! momentum-space operator bundle `{H, lambda, Pi_+, Pi_-}` of a free
//! Dirac particle.
//!
//! Conventions: metric `(+,-,-,-)`, `gamma^0 = diag(1,1,-1,-1)`,
//! `gamma^k = [[0, sigma_k], [-sigma_k, 0]]`, `alpha^k = gamma^0 gamma^k`,
//! `S = diag(sigma, sigma)/2`. The chirality matrix is
//! `gamma^5 = -i gamma^0 gamma^1 gamma^2 gamma^3 = -[[0, 1], [1, 0]]`; with
//! this sign the spin precession `i[H, S] = omega x S` and the massless
//! Hamiltonian `H = omega . S` both hold for `omega = -2 gamma^5 p`.

use crate::error::{Error, Result};
use crate::numkernel::{
    anticommutator, commutator, hermitian_eigensystem, linear_combination, pauli, CMatrix, Tolerance, C64, I, ZERO,
};
use crate::report::{Check, Report};
use crate::vec3::Vec3;

/// On-shell four-momentum with the positive energy branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourMomentum {
    mass: f64,
    p: Vec3,
    energy: f64,
}

impl FourMomentum {
    /// `p0 = +sqrt(p^2 + m^2)`. Rejects negative or non-finite input and the
    /// massless particle at rest.
    pub fn new(mass: f64, p: Vec3) -> Result<Self> {
        if !mass.is_finite() || mass < 0.0 {
            return Err(Error::Domain(format!("mass must be finite and >= 0, got {mass}")));
        }
        if !p.is_finite() {
            return Err(Error::Domain("momentum components must be finite".into()));
        }
        if mass == 0.0 && p.norm() == 0.0 {
            return Err(Error::Domain(
                "massless momentum with p = 0 has p0 = 0 and is excluded".into(),
            ));
        }
        let energy = (p.dot(p) + mass * mass).sqrt();
        Ok(FourMomentum { mass, p, energy })
    }

    /// Accepts an explicit energy and checks the mass shell
    /// `p0^2 - p^2 - m^2 = 0` to `1e-12 p0^2`.
    pub fn with_energy(mass: f64, p: Vec3, energy: f64) -> Result<Self> {
        let fm = FourMomentum::new(mass, p)?;
        if !(energy > 0.0) {
            return Err(Error::Domain(format!("energy must be positive, got {energy}")));
        }
        let shell = energy * energy - p.dot(p) - mass * mass;
        if shell.abs() > 1e-12 * energy * energy {
            return Err(Error::Domain(format!(
                "off-shell four-momentum: p0^2 - p^2 - m^2 = {shell:e}"
            )));
        }
        Ok(FourMomentum { energy, ..fm })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn momentum(&self) -> Vec3 {
        self.p
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn p_mag(&self) -> f64 {
        self.p.norm()
    }

    pub fn is_rest_frame(&self) -> bool {
        self.p.norm() == 0.0
    }

    /// `m^2 / p0^2`, the structure constant of the little algebra.
    pub fn contraction_param(&self) -> f64 {
        (self.mass * self.mass) / (self.energy * self.energy)
    }

    /// The same mass with momentum `-p`.
    pub fn reversed(&self) -> FourMomentum {
        FourMomentum {
            p: -self.p,
            ..*self
        }
    }

    /// Column `(p0, p1, p2, p3)` for the four-vector representation.
    pub fn as_column(&self) -> Vec<C64> {
        [self.energy, self.p[0], self.p[1], self.p[2]]
            .iter()
            .map(|&x| C64::new(x, 0.0))
            .collect()
    }
}

fn block2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
    CMatrix::from_fn(4, 4, |i, j| {
        let blk = match (i / 2, j / 2) {
            (0, 0) => a,
            (0, 1) => b,
            (1, 0) => c,
            _ => d,
        };
        blk[(i % 2, j % 2)]
    })
}

/// `gamma^0 .. gamma^3` in the standard representation.
pub fn gamma_matrices() -> [CMatrix; 4] {
    let id = CMatrix::identity(2);
    let zero = CMatrix::zeros(2, 2);
    let [s1, s2, s3] = pauli();
    let g = |s: &CMatrix| block2(&zero, s, &(-s), &zero);
    [block2(&id, &zero, &zero, &(-&id)), g(&s1), g(&s2), g(&s3)]
}

/// `gamma^5 = -i gamma^0 gamma^1 gamma^2 gamma^3`.
pub fn gamma5() -> CMatrix {
    let [g0, g1, g2, g3] = gamma_matrices();
    (&(&(&g0 * &g1) * &g2) * &g3).scale(-I)
}

/// `alpha^k = gamma^0 gamma^k`.
pub fn alpha_matrices() -> [CMatrix; 3] {
    let g = gamma_matrices();
    [&g[0] * &g[1], &g[0] * &g[2], &g[0] * &g[3]]
}

/// `S^k = diag(sigma_k, sigma_k) / 2`.
pub fn spin_matrices() -> [CMatrix; 3] {
    let zero = CMatrix::zeros(2, 2);
    pauli().map(|s| block2(&s, &zero, &zero, &s).scale_real(0.5))
}

/// `S^{ab} = (i/4) [gamma^a, gamma^b]`.
pub fn spin_tensor(a: usize, b: usize) -> CMatrix {
    let g = gamma_matrices();
    commutator(&g[a], &g[b])
        .expect("gamma matrices are 4x4")
        .scale(C64::new(0.0, 0.25))
}

/// `v . ops` for a real three-vector and three operators.
pub fn dot_ops(v: Vec3, ops: &[CMatrix; 3]) -> CMatrix {
    linear_combination(&v.0, ops)
}

/// Metric `eta = diag(1,-1,-1,-1)`.
pub fn metric(mu: usize, nu: usize) -> f64 {
    match (mu, nu) {
        (0, 0) => 1.0,
        (a, b) if a == b => -1.0,
        _ => 0.0,
    }
}

/// Operator bundle for a fixed on-shell momentum.
#[derive(Debug, Clone)]
pub struct DiracOperatorSet {
    pub momentum: FourMomentum,
    pub gamma: [CMatrix; 4],
    pub gamma5: CMatrix,
    pub alpha: [CMatrix; 3],
    pub spin: [CMatrix; 3],
    /// `H = alpha . p + m gamma^0`.
    pub hamiltonian: CMatrix,
    /// Sign-of-energy operator `H / p0`.
    pub lambda: CMatrix,
    pub pi_plus: CMatrix,
    pub pi_minus: CMatrix,
}

pub fn build_dirac_set(fm: FourMomentum) -> DiracOperatorSet {
    let gamma = gamma_matrices();
    let alpha = alpha_matrices();
    let hamiltonian = &dot_ops(fm.momentum(), &alpha) + &gamma[0].scale_real(fm.mass());
    let lambda = hamiltonian.scale_real(1.0 / fm.energy());
    let id = CMatrix::identity(4);
    let pi_plus = (&id + &lambda).scale_real(0.5);
    let pi_minus = (&id - &lambda).scale_real(0.5);
    DiracOperatorSet {
        momentum: fm,
        gamma,
        gamma5: gamma5(),
        alpha,
        spin: spin_matrices(),
        hamiltonian,
        lambda,
        pi_plus,
        pi_minus,
    }
}

impl DiracOperatorSet {
    /// `p_mu gamma^mu = p0 gamma^0 - p . gamma`.
    pub fn slash_p(&self) -> CMatrix {
        let p = self.momentum.momentum();
        let spatial = [self.gamma[1].clone(), self.gamma[2].clone(), self.gamma[3].clone()];
        &self.gamma[0].scale_real(self.momentum.energy()) - &dot_ops(p, &spatial)
    }

    /// Spatial gamma matrices as a three-vector of operators.
    pub fn gamma_vec(&self) -> [CMatrix; 3] {
        [self.gamma[1].clone(), self.gamma[2].clone(), self.gamma[3].clone()]
    }

    /// Numerical inverse of `H` (exists because `|det H| = p0^4 > 0`).
    pub fn hamiltonian_inverse(&self) -> Result<CMatrix> {
        self.hamiltonian.inverse()
    }
}

/// Even part `(A + lambda A lambda) / 2` of a 4x4 operator.
pub fn even_part(a: &CMatrix, dset: &DiracOperatorSet) -> Result<CMatrix> {
    if a.shape() != (4, 4) {
        return Err(Error::Shape(format!("even part needs a 4x4 operator, got {:?}", a.shape())));
    }
    let lam = &dset.lambda;
    Ok((a + &(&(lam * a) * lam)).scale_real(0.5))
}

/// Even part in projector form `Pi_+ A Pi_+ + Pi_- A Pi_-`.
pub fn even_part_projected(a: &CMatrix, dset: &DiracOperatorSet) -> Result<CMatrix> {
    if a.shape() != (4, 4) {
        return Err(Error::Shape(format!("even part needs a 4x4 operator, got {:?}", a.shape())));
    }
    let (pp, pm) = (&dset.pi_plus, &dset.pi_minus);
    Ok(&(&(pp * a) * pp) + &(&(pm * a) * pm))
}

/// Odd part `A - even_part(A)`.
pub fn odd_part(a: &CMatrix, dset: &DiracOperatorSet) -> Result<CMatrix> {
    Ok(a - &even_part(a, dset)?)
}

/// Structural identities of the bundle: Clifford relations, chirality,
/// spin algebra, sign-of-energy projectors and the spectrum of `H`.
pub fn verify_dirac_set(dset: &DiracOperatorSet, tol: Tolerance) -> Result<Report> {
    let tag = "dirac_rep";
    let mut r = Report::new();
    let id = CMatrix::identity(4);
    let g = &dset.gamma;

    let mut clifford = 0.0f64;
    for mu in 0..4 {
        for nu in mu..4 {
            let lhs = anticommutator(&g[mu], &g[nu])?;
            clifford = clifford.max(lhs.max_abs_diff(&id.scale_real(2.0 * metric(mu, nu))));
        }
    }
    r.push(Check::new("dirac.clifford", "{g^mu, g^nu} = 2 eta^{mu nu}", tag, clifford, 1e-14));

    let mut chir = (&dset.gamma5 * &dset.gamma5).max_abs_diff(&id);
    for gm in g {
        chir = chir.max(anticommutator(&dset.gamma5, gm)?.max_abs());
    }
    r.push(Check::new("dirac.gamma5", "(g5)^2 = 1, {g5, g^mu} = 0", tag, chir, 1e-14));

    let mut spin_alg = 0.0f64;
    for (j, k, l) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let lhs = commutator(&dset.spin[j], &dset.spin[k])?;
        spin_alg = spin_alg.max(lhs.max_abs_diff(&dset.spin[l].scale(I)));
    }
    r.push(Check::new("dirac.spin_algebra", "[S_j, S_k] = i eps_jkl S_l", tag, spin_alg, 1e-14));

    let mut generators = 0.0f64;
    for (k, l, m) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        generators = generators.max(spin_tensor(k, l).max_abs_diff(&dset.spin[m - 1]));
    }
    for k in 1..4 {
        let expected = dset.alpha[k - 1].scale(C64::new(0.0, 0.5));
        generators = generators.max(spin_tensor(0, k).max_abs_diff(&expected));
    }
    r.push(Check::new(
        "dirac.spin_tensor",
        "S^{kl} = eps^{klm} S^m, S^{0k} = (i/2) alpha^k",
        tag,
        generators,
        1e-14,
    ));

    let p0 = dset.momentum.energy();
    let lam = &dset.lambda;
    let mut proj = (lam * lam).max_abs_diff(&id);
    proj = proj.max(lam.hermiticity_defect());
    proj = proj.max(dset.hamiltonian.max_abs_diff(&lam.scale_real(p0)) / p0);
    proj = proj.max((&dset.pi_plus * &dset.pi_plus).max_abs_diff(&dset.pi_plus));
    proj = proj.max((&dset.pi_minus * &dset.pi_minus).max_abs_diff(&dset.pi_minus));
    proj = proj.max((&dset.pi_plus * &dset.pi_minus).max_abs());
    proj = proj.max((&dset.pi_plus + &dset.pi_minus).max_abs_diff(&id));
    r.push(Check::scaled(
        "dirac.sign_of_energy",
        "lambda^2 = 1, H = p0 lambda, Pi+- idempotent and complementary",
        tag,
        proj,
        tol,
        1.0,
    ));

    let spec = hermitian_eigensystem(&dset.hamiltonian, tol)?;
    let expected = [-p0, -p0, p0, p0];
    let spec_res = spec
        .values
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    r.push(Check::scaled("dirac.h_spectrum", "spec H = {-p0 (x2), +p0 (x2)}", tag, spec_res, tol, p0));
    Ok(r)
}

/// Two-spinor `w_+` with `(n . sigma) w_+ = +w_+`, phase fixed so the first
/// non-negligible component is real and positive.
pub fn helicity_two_spinor(n: Vec3) -> [C64; 2] {
    // (1 + n.sigma) e projects onto the +1 eigenspace for any e not in the -1 one.
    let [x, y, z] = n.0;
    let col0 = [C64::new(1.0 + z, 0.0), C64::new(x, y)];
    let col1 = [C64::new(x, -y), C64::new(1.0 - z, 0.0)];
    let pick = if z >= 0.0 { col0 } else { col1 };
    let norm = (pick[0].norm_sqr() + pick[1].norm_sqr()).sqrt();
    let mut w = [pick[0] / norm, pick[1] / norm];
    crate::numkernel::fix_phase(&mut w);
    w
}

/// `(v . sigma) w` for a real three-vector.
pub fn sigma_apply(v: Vec3, w: [C64; 2]) -> [C64; 2] {
    let m = linear_combination(&v.0, &pauli());
    let out = m.matvec(&w);
    [out[0], out[1]]
}

/// Four-spinor with upper components `w` and zero lower components.
pub fn upper_spinor(w: [C64; 2]) -> Vec<C64> {
    vec![w[0], w[1], ZERO, ZERO]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{hermitian_eigensystem, Tolerance};

    fn fm(m: f64, p: [f64; 3]) -> FourMomentum {
        FourMomentum::new(m, Vec3(p)).unwrap()
    }

    #[test]
    fn structural_identities_hold() {
        for (m, p) in [(1.0, [0.0, 0.0, 0.0]), (1.0, [0.0, 0.0, 2.0]), (0.0, [0.3, -1.0, 0.4]), (2.5, [1.0, 2.0, -3.0])] {
            let report = verify_dirac_set(&build_dirac_set(fm(m, p)), Tolerance::uniform(1e-12)).unwrap();
            assert!(report.passed(), "{report:#?}");
        }
    }

    #[test]
    fn gamma5_matches_chosen_sign() {
        let expected = CMatrix::from_fn(4, 4, |i, j| {
            if (i + 2) % 4 == j {
                C64::new(-1.0, 0.0)
            } else {
                ZERO
            }
        });
        assert!(gamma5().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn rest_frame_hamiltonian_is_gamma0() {
        let d = build_dirac_set(fm(1.0, [0.0; 3]));
        assert!(d.hamiltonian.max_abs_diff(&d.gamma[0]) < 1e-15);
        assert!(d.lambda.max_abs_diff(&d.gamma[0]) < 1e-15);
        let s = hermitian_eigensystem(&d.hamiltonian, Tolerance::default()).unwrap();
        assert_eq!(s.values, vec![-1.0, -1.0, 1.0, 1.0]);
    }

    #[test]
    fn moving_hamiltonian_spectrum() {
        let d = build_dirac_set(fm(1.0, [0.0, 0.0, 2.0]));
        let s = hermitian_eigensystem(&d.hamiltonian, Tolerance::default()).unwrap();
        let r5 = 5f64.sqrt();
        for (v, e) in s.values.iter().zip([-r5, -r5, r5, r5]) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn massless_lambda_is_alpha_n() {
        let d = build_dirac_set(fm(0.0, [0.0, 0.0, 1.0]));
        assert!(d.lambda.max_abs_diff(&d.alpha[2]) < 1e-15);
        assert!((&d.lambda * &d.lambda).max_abs_diff(&CMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn rejects_massless_at_rest_and_off_shell() {
        assert!(matches!(FourMomentum::new(0.0, Vec3::ZERO), Err(Error::Domain(_))));
        assert!(matches!(FourMomentum::new(-1.0, Vec3::Z), Err(Error::Domain(_))));
        assert!(matches!(
            FourMomentum::with_energy(1.0, Vec3::new(0.0, 0.0, 2.0), 2.0),
            Err(Error::Domain(_))
        ));
        let ok = FourMomentum::with_energy(1.0, Vec3::new(0.0, 0.0, 2.0), 5f64.sqrt()).unwrap();
        assert_eq!(ok.contraction_param(), 1.0 / ok.energy().powi(2));
    }

    #[test]
    fn even_part_examples() {
        let d = build_dirac_set(fm(1.0, [0.0, 0.0, 2.0]));
        let h = even_part(&d.hamiltonian, &d).unwrap();
        assert!(h.max_abs_diff(&d.hamiltonian) < 1e-14);

        // even part of gamma^0 is (m / p0^2) H
        let eg0 = even_part(&d.gamma[0], &d).unwrap();
        assert!(eg0.max_abs_diff(&d.hamiltonian.scale_real(1.0 / 5.0)) < 1e-14);
        assert!(commutator(&eg0, &d.hamiltonian).unwrap().max_abs() < 1e-13);

        assert!(matches!(even_part(&CMatrix::identity(2), &d), Err(Error::Shape(_))));
    }

    #[test]
    fn even_part_forms_agree_and_project() {
        let d = build_dirac_set(fm(0.7, [0.4, -1.3, 0.9]));
        let ops = [d.spin[0].clone(), d.gamma[2].clone(), d.gamma5.clone(), d.alpha[1].clone()];
        for a in &ops {
            let e1 = even_part(a, &d).unwrap();
            let e2 = even_part_projected(a, &d).unwrap();
            assert!(e1.max_abs_diff(&e2) < 1e-12);
            assert!(even_part(&e1, &d).unwrap().max_abs_diff(&e1) < 1e-12);
            assert!(commutator(&e1, &d.lambda).unwrap().max_abs() < 1e-12);
            let odd = odd_part(a, &d).unwrap();
            assert!(anticommutator(&odd, &d.lambda).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn helicity_spinor_is_eigenvector() {
        for n in [Vec3::Z, -Vec3::Z, Vec3::X, Vec3::new(0.3, -0.4, -0.866_025_403_784_438_6)] {
            let n = n.normalized().unwrap();
            let w = helicity_two_spinor(n);
            let nw = sigma_apply(n, w);
            assert!((nw[0] - w[0]).norm() < 1e-14 && (nw[1] - w[1]).norm() < 1e-14);
        }
    }
}
