//! Little-group generators of an on-shell four-momentum in the four-vector
//! and bispinor representations of the Lorentz algebra.
//!
//! The four-vector generators are read off from the infinitesimal action
//! `L(mu, nu) p = i (nu . p, nu p0 + mu x p)` with `L = mu . J + nu . K`, which
//! gives `[J_a, J_b] = i eps J_c`, `[J_a, K_b] = i eps K_c`,
//! `[K_a, K_b] = -i eps J_c`. The bispinor generators `J = S`,
//! `K = (i/2) alpha` satisfy the same relations.

use crate::dirac::{alpha_matrices, dot_ops, spin_matrices, FourMomentum};
use crate::error::{Error, Result};
use crate::numkernel::{commutator, expm, vector_norm, CMatrix, Tolerance, C64, I};
use crate::report::{Check, Report};
use crate::vec3::Vec3;

const TAG: &str = "little_algebra";
const LEVI_CIVITA: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

/// Right-handed orthonormal triad `(m, l, n)` with `n` along the momentum and
/// `l = n x m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameTriad {
    pub m: Vec3,
    pub l: Vec3,
    pub n: Vec3,
}

impl FrameTriad {
    /// `(x, y, z)`, used in the rest frame.
    pub const CANONICAL: FrameTriad = FrameTriad {
        m: Vec3::X,
        l: Vec3::Y,
        n: Vec3::Z,
    };

    /// Deterministic triad for a momentum: `m = normalize(e x n)` with
    /// `e = z` when `|n . z| < 0.9` and `e = y` otherwise, so that `p` along
    /// `z` yields the canonical triad. `p = 0` also yields the canonical triad.
    pub fn for_momentum(p: Vec3) -> FrameTriad {
        match p.normalized() {
            None => FrameTriad::CANONICAL,
            Some(n) => {
                let e = if n[2].abs() < 0.9 { Vec3::Z } else { Vec3::Y };
                let m = e.cross(n).normalized().expect("e is not parallel to n");
                FrameTriad { m, l: n.cross(m), n }
            }
        }
    }

    /// Triad with prescribed axis `n` and `m` taken from the part of `hint`
    /// orthogonal to `n`.
    pub fn with_reference(n: Vec3, hint: Vec3) -> Result<FrameTriad> {
        let n = n
            .normalized()
            .ok_or_else(|| Error::Domain("triad axis must be non-zero".into()))?;
        let m = hint
            .reject_from(n)
            .normalized()
            .ok_or_else(|| Error::Domain("reference vector is parallel to the axis".into()))?;
        Ok(FrameTriad { m, l: n.cross(m), n })
    }

    /// The same axis with `(m, l)` rotated by `angle` about `n`.
    pub fn rotated(&self, angle: f64) -> FrameTriad {
        let m = self.m.rotated_about(self.n, angle);
        FrameTriad {
            m,
            l: self.n.cross(m),
            n: self.n,
        }
    }

    /// Components `(A . m, A . l, A . n)`.
    pub fn components(&self, a: Vec3) -> [f64; 3] {
        [a.dot(self.m), a.dot(self.l), a.dot(self.n)]
    }

    pub fn axes(&self) -> [Vec3; 3] {
        [self.m, self.l, self.n]
    }

    /// Worst deviation from orthonormality and right-handedness.
    pub fn defect(&self) -> f64 {
        let unit = [self.m, self.l, self.n].map(|v| (v.norm() - 1.0).abs());
        let orth = [self.m.dot(self.l), self.l.dot(self.n), self.n.dot(self.m)].map(f64::abs);
        let hand = (self.n.cross(self.m) - self.l).norm();
        unit.into_iter().chain(orth).fold(hand, f64::max)
    }

    /// Error unless `n` is the direction of `fm`'s momentum.
    pub fn check_against(&self, fm: &FourMomentum) -> Result<()> {
        if self.defect() > 1e-12 {
            return Err(Error::Domain(format!("triad is not orthonormal (defect {:e})", self.defect())));
        }
        if let Some(dir) = fm.momentum().normalized() {
            if (dir - self.n).norm() > 1e-12 {
                return Err(Error::Domain("triad axis n is not along the momentum".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// 4x4 matrices acting on `(p0, p1, p2, p3)`.
    FourVector,
    /// `(1/2, 0) + (0, 1/2)` on Dirac bispinors.
    Bispinor,
}

/// Rotation generators `J` and boost generators `K`.
#[derive(Debug, Clone)]
pub struct LorentzGenerators {
    pub j: [CMatrix; 3],
    pub k: [CMatrix; 3],
    pub rep: Representation,
}

impl LorentzGenerators {
    pub fn four_vector() -> Self {
        let rotation = |a: usize| {
            // (J_a p)_spatial = i e_a x p
            let mut m = CMatrix::zeros(4, 4);
            for (x, y, z) in LEVI_CIVITA {
                // eps_{x y z} = 1: (e_y x e_z) = e_x
                if y == a {
                    m[(1 + x, 1 + z)] = I;
                }
                if z == a {
                    m[(1 + x, 1 + y)] = -I;
                }
            }
            m
        };
        let boost = |a: usize| {
            let mut m = CMatrix::zeros(4, 4);
            m[(0, 1 + a)] = I;
            m[(1 + a, 0)] = I;
            m
        };
        LorentzGenerators {
            j: [rotation(0), rotation(1), rotation(2)],
            k: [boost(0), boost(1), boost(2)],
            rep: Representation::FourVector,
        }
    }

    pub fn bispinor() -> Self {
        LorentzGenerators {
            j: spin_matrices(),
            k: alpha_matrices().map(|a| a.scale(C64::new(0.0, 0.5))),
            rep: Representation::Bispinor,
        }
    }

    pub fn dim(&self) -> usize {
        self.j[0].rows()
    }

    /// `mu . J + nu . K`.
    pub fn combination(&self, mu: Vec3, nu: Vec3) -> CMatrix {
        &dot_ops(mu, &self.j) + &dot_ops(nu, &self.k)
    }

    /// Lorentz algebra relations; residuals are exact zeros in floating point
    /// for both built-in representations.
    pub fn verify_lorentz_algebra(&self) -> Report {
        let mut jj = 0.0f64;
        let mut jk = 0.0f64;
        let mut kk = 0.0f64;
        for (a, b, c) in LEVI_CIVITA {
            let br = |x: &CMatrix, y: &CMatrix| commutator(x, y).expect("square generators");
            jj = jj.max(br(&self.j[a], &self.j[b]).max_abs_diff(&self.j[c].scale(I)));
            jk = jk.max(br(&self.j[a], &self.k[b]).max_abs_diff(&self.k[c].scale(I)));
            kk = kk.max(br(&self.k[a], &self.k[b]).max_abs_diff(&self.j[c].scale(-I)));
        }
        let rep = rep_name(self.rep);
        [
            Check::new(format!("lorentz.jj.{rep}"), "[J_a, J_b] = i eps_abc J_c", TAG, jj, 1e-12),
            Check::new(format!("lorentz.jk.{rep}"), "[J_a, K_b] = i eps_abc K_c", TAG, jk, 1e-12),
            Check::new(format!("lorentz.kk.{rep}"), "[K_a, K_b] = -i eps_abc J_c", TAG, kk, 1e-12),
        ]
        .into_iter()
        .collect()
    }
}

pub(crate) fn rep_name(rep: Representation) -> &'static str {
    match rep {
        Representation::FourVector => "four_vector",
        Representation::Bispinor => "bispinor",
    }
}

/// Triad components `(L1, L2, L3)` of the little-group generators.
#[derive(Debug, Clone)]
pub struct LittleGenerators {
    pub l: [CMatrix; 3],
    /// `m^2 / p0^2`.
    pub contraction_param: f64,
    pub rep: Representation,
}

/// `L1 = J.m + (K.l)|p|/p0`, `L2 = J.l - (K.m)|p|/p0`, `L3 = J.n`.
pub fn little_generators(gens: &LorentzGenerators, fm: &FourMomentum, triad: &FrameTriad) -> Result<LittleGenerators> {
    triad.check_against(fm)?;
    let beta = fm.p_mag() / fm.energy();
    let jm = dot_ops(triad.m, &gens.j);
    let jl = dot_ops(triad.l, &gens.j);
    let km = dot_ops(triad.m, &gens.k);
    let kl = dot_ops(triad.l, &gens.k);
    Ok(LittleGenerators {
        l: [&jm + &kl.scale_real(beta), &jl - &km.scale_real(beta), dot_ops(triad.n, &gens.j)],
        contraction_param: fm.contraction_param(),
        rep: gens.rep,
    })
}

/// Cartesian components of `L = J - (p/p0) x K`.
pub fn little_vector(gens: &LorentzGenerators, fm: &FourMomentum) -> [CMatrix; 3] {
    let b = fm.momentum() * (1.0 / fm.energy());
    let mut out = gens.j.clone();
    for (a, x, y) in LEVI_CIVITA {
        // (b x K)_a = b_x K_y - b_y K_x
        let bxk = &gens.k[y].scale_real(b[x]) - &gens.k[x].scale_real(b[y]);
        out[a] = &out[a] - &bxk;
    }
    out
}

fn cross_ops(a: &[CMatrix; 3], b: &[CMatrix; 3]) -> [CMatrix; 3] {
    let comp = |x: usize, y: usize| &(&a[x] * &b[y]) - &(&a[y] * &b[x]);
    [comp(1, 2), comp(2, 0), comp(0, 1)]
}

/// The three brackets `[L1,L2] = i (m^2/p0^2) L3`, `[L3,L1] = i L2`,
/// `[L2,L3] = i L1`.
pub fn verify_little_algebra(lg: &LittleGenerators, tol: Tolerance) -> Result<Report> {
    let [l1, l2, l3] = &lg.l;
    let c = lg.contraction_param;
    let scale = lg.l.iter().map(CMatrix::max_abs).fold(0.0, f64::max);
    let rep = rep_name(lg.rep);
    let cases = [
        ("bracket_12", "[L1, L2] = i m^2/p0^2 L3", commutator(l1, l2)?, l3.scale(I * c)),
        ("bracket_31", "[L3, L1] = i L2", commutator(l3, l1)?, l2.scale(I)),
        ("bracket_23", "[L2, L3] = i L1", commutator(l2, l3)?, l1.scale(I)),
    ];
    Ok(cases
        .into_iter()
        .map(|(id, eq, lhs, rhs)| {
            Check::scaled(format!("little_algebra.{id}.{rep}"), eq, TAG, lhs.max_abs_diff(&rhs), tol, scale * scale)
        })
        .collect())
}

/// Residual of `L(mu, nu) p = i (nu . p, nu p0 + mu x p)` in the four-vector
/// representation, relative to `|p|` as a Euclidean four-vector.
pub fn generator_action_residual(gens: &LorentzGenerators, fm: &FourMomentum, mu: Vec3, nu: Vec3) -> Result<f64> {
    require_four_vector(gens)?;
    let p = fm.momentum();
    let col = fm.as_column();
    let lhs = gens.combination(mu, nu).matvec(&col);
    let spatial = nu * fm.energy() + mu.cross(p);
    let rhs = [nu.dot(p), spatial[0], spatial[1], spatial[2]].map(|x| C64::new(0.0, x));
    let diff: Vec<C64> = lhs.iter().zip(rhs).map(|(a, b)| a - b).collect();
    Ok(vector_norm(&diff) / vector_norm(&col))
}

fn require_four_vector(gens: &LorentzGenerators) -> Result<()> {
    if gens.rep != Representation::FourVector {
        return Err(Error::Contract("operation needs the four-vector representation".into()));
    }
    Ok(())
}

/// `nu = -mu x p / p0`, the boost parameters that keep `p` fixed.
pub fn stabilizing_boost(fm: &FourMomentum, mu: Vec3) -> Vec3 {
    -mu.cross(fm.momentum()) * (1.0 / fm.energy())
}

/// Exponentiates `-i (mu . J + nu . K)` with `nu = -mu x p / p0` and checks
/// that the resulting Lorentz matrix leaves `p` fixed; also checks the
/// closed form of the generator action for this `(mu, nu)` and for the
/// non-stabilizing probe `(mu, mu)`.
pub fn verify_invariance(gens: &LorentzGenerators, fm: &FourMomentum, mu: Vec3, tol: Tolerance) -> Result<Report> {
    require_four_vector(gens)?;
    let nu = stabilizing_boost(fm, mu);
    let lambda = expm(&gens.combination(mu, nu).scale(-I))?;
    let col = fm.as_column();
    let moved = lambda.matvec(&col);
    let diff: Vec<C64> = moved.iter().zip(&col).map(|(a, b)| a - b).collect();
    let fixed = vector_norm(&diff) / vector_norm(&col);

    let mut r = Report::new();
    r.push(Check::scaled("invariance.lambda_p", "Lambda(mu, nu) p = p, nu p0 = -mu x p", TAG, fixed, tol, 1.0));
    r.push(Check::scaled(
        "invariance.action_stabilizer",
        "L(mu, nu) p = i (nu.p, nu p0 + mu x p) = 0",
        TAG,
        generator_action_residual(gens, fm, mu, nu)?,
        tol,
        1.0,
    ));
    r.push(Check::scaled(
        "invariance.action_generic",
        "L(mu, nu) p = i (nu.p, nu p0 + mu x p)",
        TAG,
        generator_action_residual(gens, fm, mu, mu)?,
        tol,
        1.0,
    ));
    Ok(r)
}

/// Checks `L x L = i L - i (p/p0^2)(p . J)` componentwise.
///
/// This is the form from which the triad brackets follow; it is equivalent
/// to `L x L = i J - i (p/p0) x K - i (p/p0^2)(p . J)`.
pub fn verify_vector_bracket(gens: &LorentzGenerators, fm: &FourMomentum, tol: Tolerance) -> Result<Report> {
    let residual = vector_bracket_residual(gens, fm, |l, _j, _k, pj, p, p0sq| {
        let mut rhs = l.clone().map(|x| x.scale(I));
        for a in 0..3 {
            rhs[a] = &rhs[a] - &pj.scale(I * (p[a] / p0sq));
        }
        rhs
    });
    let rep = rep_name(gens.rep);
    Ok(Report::from_iter([Check::scaled(
        format!("little_algebra.vector_bracket.{rep}"),
        "L x L = i L - i p/p0^2 (p . J)",
        TAG,
        residual,
        tol,
        1.0,
    )]))
}

/// Residual of the relation `L x L = i J - i (p/p0^2)(p . K)`.
///
/// This relation does not hold for `|p| > 0` (it is not consistent with the
/// triad brackets); it is exposed so callers can see the size of the
/// discrepancy.
pub fn vector_bracket_residual_jk_form(gens: &LorentzGenerators, fm: &FourMomentum) -> f64 {
    vector_bracket_residual(gens, fm, |_l, j, k, _pj, p, p0sq| {
        let pk = dot_ops(Vec3(p), k);
        let mut rhs = j.clone().map(|x| x.scale(I));
        for a in 0..3 {
            rhs[a] = &rhs[a] - &pk.scale(I * (p[a] / p0sq));
        }
        rhs
    })
}

type BracketRhs = fn(&[CMatrix; 3], &[CMatrix; 3], &[CMatrix; 3], &CMatrix, [f64; 3], f64) -> [CMatrix; 3];

fn vector_bracket_residual(gens: &LorentzGenerators, fm: &FourMomentum, rhs: BracketRhs) -> f64 {
    let l = little_vector(gens, fm);
    let lhs = cross_ops(&l, &l);
    let p = fm.momentum();
    let pj = dot_ops(p, &gens.j);
    let rhs = rhs(&l, &gens.j, &gens.k, &pj, p.0, fm.energy().powi(2));
    lhs.iter()
        .zip(&rhs)
        .map(|(a, b)| a.max_abs_diff(b))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanMode {
    /// Fixed `|p|`, grid over the mass.
    MassToZero { p_mag: f64 },
    /// Fixed mass, grid over `|p|`.
    MomentumToInfinity { mass: f64 },
}

/// Strictly monotone grid of positive values.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid {
    values: Vec<f64>,
}

impl ScanGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("scan grid is empty".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Domain("scan grid values must be finite and positive".into()));
        }
        let up = values.windows(2).all(|w| w[1] > w[0]);
        let down = values.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(Error::Domain("scan grid must be strictly monotone".into()));
        }
        Ok(ScanGrid { values })
    }

    /// `steps` logarithmically spaced values from `start` to `stop`
    /// (either direction), endpoints included.
    pub fn logarithmic(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(start > 0.0 && stop > 0.0) {
            return Err(Error::Domain("logarithmic grid needs steps >= 1 and positive ends".into()));
        }
        if steps == 1 {
            return ScanGrid::new(vec![start]);
        }
        let (a, b) = (start.ln(), stop.ln());
        let values = (0..steps)
            .map(|i| {
                if i == 0 {
                    start
                } else if i == steps - 1 {
                    stop
                } else {
                    (a + (b - a) * i as f64 / (steps - 1) as f64).exp()
                }
            })
            .collect();
        ScanGrid::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionRow {
    pub m: f64,
    pub p_mag: f64,
    pub contraction_param: f64,
    /// `||[L1, L2]||_F / ||L3||_F` in the bispinor representation.
    pub bracket_ratio: f64,
}

/// Tracks the little algebra along a mass or momentum sweep with `p` along
/// `z`. Rows follow grid order.
pub fn contraction_scan(mode: ScanMode, grid: &ScanGrid) -> Result<Vec<ContractionRow>> {
    let gens = LorentzGenerators::bispinor();
    grid.values()
        .iter()
        .map(|&v| {
            let (m, p_mag) = match mode {
                ScanMode::MassToZero { p_mag } => (v, p_mag),
                ScanMode::MomentumToInfinity { mass } => (mass, v),
            };
            let fm = FourMomentum::new(m, Vec3::new(0.0, 0.0, p_mag))?;
            let lg = little_generators(&gens, &fm, &FrameTriad::for_momentum(fm.momentum()))?;
            let bracket = commutator(&lg.l[0], &lg.l[1])?;
            Ok(ContractionRow {
                m,
                p_mag,
                contraction_param: fm.contraction_param(),
                bracket_ratio: bracket.frobenius_norm() / lg.l[2].frobenius_norm(),
            })
        })
        .collect()
}
