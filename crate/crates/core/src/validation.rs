//! Executable verification suite: one check per shipping criterion, shared
//! by the `validate` CLI subcommand and the acceptance test target.
//!
//! Every check pins its tolerance and its runtime budget in code and reports
//! the measured values in its details line, so a failure states exactly
//! which number fell outside which band.

use std::time::{Duration, Instant};

use crate::error::Result;
use crate::inversion::{
    default_contour, default_vertex, invert_density, make_contour, moments_direct,
    moments_residue_split, moments_residue_split_with_nodes,
};
use crate::oracles::{mc_radius, pde_radius, McConfig, PdeConfig};
use crate::radius::radius;
use crate::spectral::{critical_coupling, ground_state, Coupling, BETA_CR};

/// Outcome of one suite criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:2} ({}, {:.1?} of {:.1?}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed,
            self.budget,
            self.details
        )
    }
}

struct Check {
    ok: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn assert_le(&mut self, label: &str, value: f64, bound: f64) {
        let pass = value <= bound;
        self.ok &= pass;
        self.notes.push(format!(
            "{label} = {value:.3e} {} {bound:.3e}",
            if pass { "<=" } else { "EXCEEDS" }
        ));
    }

    fn assert_in(&mut self, label: &str, value: f64, lo: f64, hi: f64) {
        let pass = value >= lo && value <= hi;
        self.ok &= pass;
        self.notes.push(format!(
            "{label} = {value:.6} {} [{lo:.4}, {hi:.4}]",
            if pass { "in" } else { "OUTSIDE" }
        ));
    }

    fn note(&mut self, message: String) {
        self.notes.push(message);
    }

    fn fail(&mut self, message: String) {
        self.ok = false;
        self.notes.push(message);
    }

    fn finish(self) -> (bool, String) {
        (self.ok, self.notes.join("; "))
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn run(
    id: usize,
    name: &'static str,
    budget: Duration,
    body: impl FnOnce() -> std::result::Result<(bool, String), crate::Error>,
) -> Criterion {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let (mut passed, mut details) = match outcome {
        Ok(pair) => pair,
        Err(e) => (false, format!("computation failed: {e}")),
    };
    if elapsed > budget {
        passed = false;
        details.push_str(&format!("; runtime {elapsed:.1?} exceeds budget {budget:.1?}"));
    }
    Criterion {
        id,
        name,
        passed,
        details,
        elapsed,
        budget,
    }
}

fn check_critical_coupling() -> Result<(bool, String)> {
    let mut c = Check::new();
    let bc = critical_coupling();
    c.assert_le("|beta_cr - pi^2/8|", (bc - BETA_CR).abs(), 1e-12);
    Ok(c.finish())
}

fn check_eigenvalue_asymptotics() -> Result<(bool, String)> {
    let mut c = Check::new();
    for (delta, lo, hi) in [(1e-3, 0.495, 0.505), (0.05, 0.45, 0.55)] {
        let gs = ground_state(&Coupling::new(BETA_CR + delta)?)?;
        let ratio = gs.lambda0.unwrap_or(f64::NAN) / (delta * delta);
        c.assert_in(&format!("lambda0/delta^2 (delta={delta})"), ratio, lo, hi);
    }
    Ok(c.finish())
}

fn check_gamma_bracketing() -> Result<(bool, String)> {
    let mut c = Check::new();
    for delta in [0.01, 0.05, 0.1, -0.01, -0.05, -0.1] {
        let gs = ground_state(&Coupling::new(BETA_CR + delta)?)?;
        c.assert_in(
            &format!("|gamma|/|delta| (delta={delta})"),
            gs.gamma.abs() / delta.abs(),
            0.5,
            1.0,
        );
    }
    Ok(c.finish())
}

fn check_free_limit() -> Result<(bool, String)> {
    let mut c = Check::new();
    let free = Coupling::new(1e-12)?;
    let t = 4.0;
    let spec = default_contour(&free, t)?;
    for r in [0.5, 1.0, 2.0] {
        let got = invert_density(&free, t, r, &spec)?.value;
        let want = (2.0 * std::f64::consts::PI * t).powf(-1.5) * (-r * r / (2.0 * t)).exp();
        c.assert_le(&format!("density rel err (r={r})"), rel(got, want), 1e-6);
    }
    for t in [1.0, 10.0, 100.0] {
        let got = radius(&free, t)?.radius;
        c.assert_le(
            &format!("radius rel err (t={t})"),
            rel(got, (3.0 * t).sqrt()),
            1e-6,
        );
    }
    Ok(c.finish())
}

fn check_contour_residue_identity() -> Result<(bool, String)> {
    let mut c = Check::new();
    let coupling = Coupling::new(BETA_CR + 0.1)?;
    let t = 400.0;
    let direct = moments_direct(&coupling, t, &default_contour(&coupling, t)?)?;
    let split = moments_residue_split(&coupling, t)?;
    c.assert_le("p0 route mismatch", rel(split.p0, direct.p0), 1e-8);
    c.assert_le("p2 route mismatch", rel(split.p2, direct.p2), 1e-8);
    Ok(c.finish())
}

fn check_supercritical_plateau() -> Result<(bool, String)> {
    let mut c = Check::new();
    let sqrt6 = 6.0f64.sqrt();
    let mut plateau_radii = Vec::new();
    for delta in [0.05, 0.1] {
        let coupling = Coupling::new(BETA_CR + delta)?;
        let lambda0 = ground_state(&coupling)?.lambda0.unwrap();
        let t = (20.0 / lambda0).ceil();
        let r1 = radius(&coupling, t)?.radius;
        let r2 = radius(&coupling, 2.0 * t)?.radius;
        c.assert_in(&format!("r(2t)/r(t) (delta={delta})"), r2 / r1, 0.98, 1.02);
        c.assert_in(
            &format!("r·delta/sqrt(6) (delta={delta})"),
            r1 * delta / sqrt6,
            0.9,
            1.1,
        );
        plateau_radii.push((delta, r1));
    }
    let (d1, r1) = plateau_radii[0];
    let (d2, r2) = plateau_radii[1];
    c.assert_in("r(b1)/r(b2) vs delta2/delta1", (r1 / r2) / (d2 / d1), 0.85, 1.15);
    Ok(c.finish())
}

fn check_diffusive_scaling() -> Result<(bool, String)> {
    let mut c = Check::new();
    for beta in [BETA_CR, BETA_CR - 0.1] {
        let coupling = Coupling::new(beta)?;
        for t in [100.0, 400.0] {
            let r1 = radius(&coupling, t)?.radius;
            let r4 = radius(&coupling, 4.0 * t)?.radius;
            c.assert_in(
                &format!("r(4t)/r(t) (beta-beta_cr={:+.1}, t={t})", beta - BETA_CR),
                r4 / r1,
                1.9,
                2.1,
            );
        }
    }
    let coupling = Coupling::new(BETA_CR - 0.1)?;
    let n1 = radius(&coupling, 5e3)?.radius / 5e3f64.sqrt();
    let n2 = radius(&coupling, 1e4)?.radius / 1e4f64.sqrt();
    c.assert_le("r/sqrt(t) drift 5e3 -> 1e4", rel(n1, n2), 0.02);
    Ok(c.finish())
}

fn check_growth_rate() -> Result<(bool, String)> {
    let mut c = Check::new();
    let coupling = Coupling::new(BETA_CR + 0.1)?;
    let lambda0 = ground_state(&coupling)?.lambda0.unwrap();
    let (t1, t2) = (300.0, 400.0);
    let p1 = moments_residue_split(&coupling, t1)?.p0;
    let p2 = moments_residue_split(&coupling, t2)?.p0;
    let rate = (p2 / p1).ln() / (t2 - t1);
    c.note(format!("rate = {rate:.6e}, lambda0 = {lambda0:.6e}"));
    c.assert_le("growth rate rel err vs lambda0", rel(rate, lambda0), 0.01);
    Ok(c.finish())
}

fn check_oracle_triangle(seed: u64) -> Result<(bool, String)> {
    let mut c = Check::new();
    let t = 10.0;
    for beta in [0.0, BETA_CR - 0.1, BETA_CR + 0.3] {
        let coupling = Coupling::new(beta)?;
        let lap = radius(&coupling, t)?.radius;
        let pde = pde_radius(&coupling, t, &PdeConfig::for_time(t))?.radius;
        c.assert_le(
            &format!("pde vs laplace rel err (beta={beta:.4})"),
            rel(pde, lap),
            0.02,
        );
        let cfg = McConfig::for_time(t)
            .with_paths(200_000)
            .with_dt(2e-3)
            .with_seed(seed);
        let mc = mc_radius(&coupling, t, &cfg)?;
        let tol = (3.0 * mc.stderr).max(0.05 * lap);
        let diff = (mc.radius - lap).abs();
        c.assert_le(
            &format!("mc vs laplace |diff| (beta={beta:.4}, stderr={:.3e})", mc.stderr),
            diff,
            tol,
        );
    }
    Ok(c.finish())
}

fn check_numerical_hygiene(seed: u64) -> Result<(bool, String)> {
    let mut c = Check::new();

    // imaginary residuals on deterministic outputs across the regimes
    let cases = [
        (1e-12, 10.0),
        (BETA_CR - 0.1, 100.0),
        (BETA_CR, 100.0),
        (BETA_CR + 0.3, 10.0),
    ];
    for (beta, t) in cases {
        let coupling = Coupling::new(beta)?;
        let m = moments_direct(&coupling, t, &default_contour(&coupling, t)?)?;
        c.assert_le(
            &format!("imag residual (beta={beta:.4}, t={t})"),
            m.imag_residual,
            1e-8 * m.p0.max(m.p2),
        );
    }
    let sup = Coupling::new(BETA_CR + 0.1)?;
    let m = moments_residue_split(&sup, 400.0)?;
    c.assert_le("imag residual (residue split)", m.imag_residual, 1e-8 * m.p0.max(m.p2));

    // node doubling leaves radii unchanged to 1e-6
    for (beta, t) in [(BETA_CR - 0.1, 100.0), (BETA_CR + 0.3, 10.0)] {
        let coupling = Coupling::new(beta)?;
        let a = default_vertex(&coupling, t)?;
        let coarse = moments_direct(&coupling, t, &make_contour(a, t, 128)?)?;
        let fine = moments_direct(&coupling, t, &make_contour(a, t, 256)?)?;
        let r_coarse = (coarse.p2 / coarse.p0).sqrt();
        let r_fine = (fine.p2 / fine.p0).sqrt();
        c.assert_le(
            &format!("node-doubling radius shift (beta={beta:.4}, t={t})"),
            rel(r_coarse, r_fine),
            1e-6,
        );
    }
    let coarse = moments_residue_split_with_nodes(&sup, 400.0, 128)?;
    let fine = moments_residue_split_with_nodes(&sup, 400.0, 256)?;
    c.assert_le(
        "node-doubling radius shift (residue split)",
        rel((coarse.p2 / coarse.p0).sqrt(), (fine.p2 / fine.p0).sqrt()),
        1e-6,
    );

    // Monte Carlo determinism is bit-exact
    let cfg = McConfig::for_time(5.0).with_paths(5000).with_dt(0.05).with_seed(seed);
    let coupling = Coupling::new(BETA_CR)?;
    let a = mc_radius(&coupling, 5.0, &cfg)?;
    let b = mc_radius(&coupling, 5.0, &cfg)?;
    if a.radius.to_bits() != b.radius.to_bits() || a.stderr.to_bits() != b.stderr.to_bits() {
        c.fail(format!(
            "mc repeat differs: {:.17e} vs {:.17e}",
            a.radius, b.radius
        ));
    } else {
        c.notes.push("mc repeat bit-identical".into());
    }
    Ok(c.finish())
}

/// Number of criteria in the suite.
pub const CRITERIA: usize = 10;

/// Run one criterion by id (1-based). `seed` controls the Monte Carlo
/// checks. Returns `None` for an unknown id.
pub fn run_single(id: usize, seed: u64) -> Option<Criterion> {
    let ms = Duration::from_millis;
    let s = Duration::from_secs;
    Some(match id {
        1 => run(1, "critical coupling", ms(1), check_critical_coupling),
        2 => run(2, "eigenvalue asymptotics", ms(10), check_eigenvalue_asymptotics),
        3 => run(3, "gamma bracketing", ms(10), check_gamma_bracketing),
        4 => run(4, "free-limit density and radius", s(1), check_free_limit),
        5 => run(5, "contour/residue identity", s(1), check_contour_residue_identity),
        6 => run(6, "supercritical plateau", s(5), check_supercritical_plateau),
        7 => run(7, "diffusive scaling", s(10), check_diffusive_scaling),
        8 => run(8, "growth rate", s(1), check_growth_rate),
        9 => run(9, "oracle triangle", s(300), || check_oracle_triangle(seed)),
        10 => run(10, "numerical hygiene", s(60), || check_numerical_hygiene(seed)),
        _ => return None,
    })
}

/// Run the full suite. `seed` controls the Monte Carlo checks.
pub fn run_all(seed: u64) -> Vec<Criterion> {
    (1..=CRITERIA)
        .map(|id| run_single(id, seed).expect("criterion ids are dense"))
        .collect()
}
