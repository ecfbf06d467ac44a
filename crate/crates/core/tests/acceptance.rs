//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;

use evenspin::bell::{bell_correlation, chsh_value, two_particle_spectrum, BellSetting, ChshPlane, TwoParticleSystem};
use evenspin::cli;
use evenspin::dirac::build_dirac_set;
use evenspin::even_spin::{build_even_spin, even_spin_spectrum, limit_inequivalence_scan, verify_even_spin_algebra};
use evenspin::extended::{build_even_velocity_set, massless_extended_set, robinson_radius, verify_precession};
use evenspin::little_algebra::{FrameTriad, ScanGrid};
use evenspin::suite::{
    bell_sweep, contraction_equivalence, even_spin_sweep, hamiltonian_sweep, invariance_sweep, little_algebra_sweep,
    random_massive, random_with_mass, rng_from_seed, spectrum_sweep, two_particle_sweep, fitted_structure_constant,
};
use evenspin::{FourMomentum, Report, Tolerance, Vec3};

const SEED: u64 = 20_240_501;

type Outcome = Result<String, String>;

fn fm(m: f64, p: [f64; 3]) -> FourMomentum {
    FourMomentum::new(m, Vec3(p)).expect("valid momentum")
}

fn require(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn report_ok(r: evenspin::Result<Report>) -> Result<Report, String> {
    let r = r.map_err(|e| e.to_string())?;
    let failure = r
        .failures()
        .next()
        .map(|c| format!("{}: residual {:e} > {:e}", c.id, c.residual, c.tolerance));
    match failure {
        None => Ok(r),
        Some(msg) => Err(msg),
    }
}

fn little_algebra_brackets() -> Outcome {
    let mut rng = rng_from_seed(SEED);
    let r = report_ok(little_algebra_sweep(&mut rng, 100, Tolerance::uniform(1e-10)))?;
    let max_bracket = r
        .checks
        .iter()
        .filter(|c| c.id.contains("bracket"))
        .map(|c| c.residual)
        .fold(0.0, f64::max);
    require(max_bracket < 1e-10, format!("bracket residual {max_bracket:e}"))?;
    let example = fm(1.0, [0.0, 0.0, 2.0]);
    for gens in [
        evenspin::little_algebra::LorentzGenerators::four_vector(),
        evenspin::little_algebra::LorentzGenerators::bispinor(),
    ] {
        let c = fitted_structure_constant(&gens, &example).map_err(|e| e.to_string())?;
        require((c - 0.2).abs() < 1e-12, format!("structure constant {c}"))?;
    }
    Ok(format!("100 momenta, max bracket residual {max_bracket:.1e}, c(m=1,|p|=2) = 0.2"))
}

fn contraction_equivalent() -> Outcome {
    let grid = ScanGrid::logarithmic(1e-4, 1e4, 41).map_err(|e| e.to_string())?;
    let r = report_ok(contraction_equivalence(&grid))?;
    Ok(format!("41 ratios, max difference {:.1e}", r.max_residual()))
}

fn little_group_invariance() -> Outcome {
    let mut rng = rng_from_seed(SEED + 1);
    let r = report_ok(invariance_sweep(&mut rng, 100, Tolerance::new(0.0, 1e-10)))?;
    let lp = r.get("invariance.lambda_p").map(|c| c.residual).unwrap_or(f64::NAN);
    Ok(format!("100 (mu, p) pairs, max |Lambda p - p|/|p| {lp:.1e}"))
}

fn even_spin_constructions() -> Outcome {
    let mut rng = rng_from_seed(SEED + 2);
    let r = report_ok(even_spin_sweep(&mut rng, 50, Tolerance::uniform(1e-12)))?;
    for id in ["even_spin.triple_construction", "even_spin.conserved", "even_spin.hermitian"] {
        require(r.get(id).is_some(), format!("missing {id}"))?;
    }
    let es = build_even_spin(&build_dirac_set(fm(1.0, [0.0, 0.0, 2.0])), &FrameTriad::CANONICAL)
        .map_err(|e| e.to_string())?;
    report_ok(verify_even_spin_algebra(&es, Tolerance::uniform(1e-12)))?;
    Ok(format!(
        "50 momenta, construction {:.1e}, [Sp, H] {:.1e}",
        r.get("even_spin.triple_construction").unwrap().residual,
        r.get("even_spin.conserved").unwrap().residual
    ))
}

fn spectrum_law() -> Outcome {
    let mut rng = rng_from_seed(SEED + 3);
    let r = report_ok(spectrum_sweep(&mut rng, 100))?;
    let rest = build_even_spin(&build_dirac_set(fm(1.0, [0.0; 3])), &FrameTriad::CANONICAL).map_err(|e| e.to_string())?;
    for _ in 0..20 {
        let a = evenspin::suite::random_unit(&mut rng);
        let s = even_spin_spectrum(&rest, a).map_err(|e| e.to_string())?;
        require(s.values.iter().all(|v| (v.abs() - 0.5).abs() < 1e-10), "rest-frame spectrum not +-1/2")?;
    }
    let es = build_even_spin(&build_dirac_set(fm(1.0, [0.0, 0.0, 2.0])), &FrameTriad::CANONICAL)
        .map_err(|e| e.to_string())?;
    let s = even_spin_spectrum(&es, Vec3::X).map_err(|e| e.to_string())?;
    require((s.values[3] - 0.223_606_8).abs() < 1e-7, format!("transverse value {}", s.values[3]))?;
    Ok(format!("100 (m, p, a), max residual {:.1e}; rest +-1/2; +-0.2236068", r.max_residual()))
}

fn limit_inequivalence() -> Outcome {
    let rows = limit_inequivalence_scan(&[(1.0, 1.0), (1.0, 10.0), (1.0, 100.0)]).map_err(|e| e.to_string())?;
    let mut last = f64::INFINITY;
    for r in &rows {
        let s_closed = 0.5 / (1.0 + r.p_mag * r.p_mag).sqrt();
        require((r.w_perp - 0.5).abs() < 1e-12, format!("w_perp {} at |p| {}", r.w_perp, r.p_mag))?;
        require((r.s_perp - s_closed).abs() < 1e-12, format!("s_perp {} at |p| {}", r.s_perp, r.p_mag))?;
        require(r.s_perp < last, "s_perp not decreasing")?;
        last = r.s_perp;
    }
    Ok(format!("w_perp = 1/2 at |p| = 1, 10, 100; s_perp down to {last:.3e}"))
}

fn hamiltonian_identities() -> Outcome {
    let mut rng = rng_from_seed(SEED + 4);
    let r = report_ok(hamiltonian_sweep(&mut rng, 50))?;
    let tol = Tolerance::uniform(1e-11);
    let d = build_dirac_set(fm(0.0, [0.0, 0.0, 1.0]));
    report_ok(verify_precession(&d, tol))?;
    report_ok(massless_extended_set(&d, 0.5, tol).map(|x| x.1))?;
    report_ok(build_even_velocity_set(&build_dirac_set(fm(1.0, [0.0, 0.0, 2.0])), tol).map(|x| x.1))?;
    Ok(format!("50 massive + 50 massless momenta, max residual {:.1e}", r.max_residual()))
}

fn robinson_radius_law() -> Outcome {
    let mut worst = 0.0f64;
    for s in [0.5, 1.0, 1.5, 2.0] {
        for k in 0..=60 {
            let p = 10f64.powf(-3.0 + 0.1 * k as f64);
            let r = robinson_radius(s, p).map_err(|e| e.to_string())?;
            worst = worst.max((p * r - s).abs() / s);
        }
    }
    require(worst <= 2.0 * f64::EPSILON, format!("|p| r_s - s relative error {worst:e}"))?;
    let mut rng = rng_from_seed(SEED + 5);
    let mut ik = 0.0f64;
    for _ in 0..20 {
        let d = build_dirac_set(random_with_mass(&mut rng, 0.0));
        let r = report_ok(massless_extended_set(&d, 0.5, Tolerance::uniform(1e-11)).map(|x| x.1))?;
        ik = ik.max(r.get("massless.kinetic_inertia").unwrap().residual);
    }
    Ok(format!("6 decades x 4 helicities, max rel error {worst:.1e}; I_k omega^2 check {ik:.1e}"))
}

fn two_particle_spectrum_law() -> Outcome {
    let mut rng = rng_from_seed(SEED + 6);
    report_ok(two_particle_sweep(&mut rng, 50, Tolerance::uniform(1e-11)))?;
    let sys = TwoParticleSystem::new(fm(1.0, [0.0, 0.0, 2.0])).map_err(|e| e.to_string())?;
    let spec = two_particle_spectrum(&sys).map_err(|e| e.to_string())?;
    let levels: Vec<(f64, usize)> = spec.levels.iter().map(|l| (l.value, l.multiplicity)).collect();
    require(levels.len() == 3, format!("levels {levels:?}"))?;
    for ((v, k), (ev, ek)) in levels.iter().zip([(0.0, 4), (0.4, 4), (1.2, 8)]) {
        require((v - ev).abs() < 1e-11 && *k == ek, format!("levels {levels:?}"))?;
    }
    Ok("50 momenta; {1.2 x8, 0.4 x4, 0 x4} at m=1, |p|=2".into())
}

fn bell_agreement() -> Outcome {
    let mut rng = rng_from_seed(SEED + 7);
    let r = report_ok(bell_sweep(&mut rng, 200))?;
    let oracle = r.get("bell.correlation_oracle").unwrap().residual;
    let theta: f64 = 1.1;
    for _ in 0..10 {
        let sys = TwoParticleSystem::new(random_massive(&mut rng)).map_err(|e| e.to_string())?;
        let a = ChshPlane::Perp.direction(&sys.triad, 0.0);
        let b = ChshPlane::Perp.direction(&sys.triad, theta.to_degrees());
        let c = bell_correlation(&sys, &BellSetting::new(a, b).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        require((c.e_numeric + theta.cos()).abs() < 1e-10, format!("perpendicular E {}", c.e_numeric))?;
    }
    let sys = TwoParticleSystem::new(fm(1.0, [0.0, 0.0, 2.0])).map_err(|e| e.to_string())?;
    let t = sys.triad;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = bell_correlation(&sys, &BellSetting::new((t.n + t.m) * h, (t.n - t.m) * h).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    require((c.e_numeric + 2.0 / 3.0).abs() < 1e-10, format!("mixed E {}", c.e_numeric))?;
    let s = chsh_value(&sys, &ChshPlane::Perp.setting(&t, 45.0)).map_err(|e| e.to_string())?;
    require((s - 2.0 * 2f64.sqrt()).abs() < 1e-9, format!("CHSH {s}"))?;
    Ok(format!("200 settings, max |E_formula - E_numeric| {oracle:.1e}; E = -cos; -2/3; |S| = {s:.10}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [(&str, Vec<&str>); 5] = [
        ("verify.json", vec!["verify", "--m", "1", "--p", "0,0,2", "--seed", "7", "--samples", "3"]),
        ("scan.csv", vec!["scan", "--mode", "momentum", "--m", "1", "--pmin", "0.1", "--pmax", "1000", "--steps", "40"]),
        ("bell.csv", vec!["bell", "--m", "1", "--p", "0,0,2", "--random", "20", "--seed", "3"]),
        ("chsh.json", vec!["bell", "--m", "1", "--p", "0,0,2", "--chsh", "--plane", "mixed", "--format", "json"]),
        ("ring.csv", vec!["robinson", "--s", "1", "--p", "0,0,1", "--samples", "64", "--frames", "10"]),
    ];
    for (name, args) in runs {
        let mut bytes = Vec::new();
        for _ in 0..2 {
            let path = dir.path().join(name);
            let mut full = vec!["evenspin".to_string()];
            full.extend(args.iter().map(|s| s.to_string()));
            full.extend(["--out".to_string(), path.display().to_string()]);
            let code = cli::run(full);
            require(code == 0, format!("{name}: exit {code}"))?;
            bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        require(bytes[0] == bytes[1], format!("{name}: outputs differ"))?;
    }
    Ok("verify/scan/bell/chsh/robinson outputs byte-identical across runs".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("little-algebra brackets", little_algebra_brackets),
        ("contraction equivalence", contraction_equivalent),
        ("little-group invariance", little_group_invariance),
        ("even spin constructions", even_spin_constructions),
        ("spectrum law", spectrum_law),
        ("limit inequivalence", limit_inequivalence),
        ("precession and Hamiltonian identities", hamiltonian_identities),
        ("ring radius", robinson_radius_law),
        ("two-particle spectrum", two_particle_spectrum_law),
        ("Bell oracle agreement", bell_agreement),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
