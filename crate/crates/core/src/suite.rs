//! Seeded randomized invariant suite.
//!
//! Every invariant draws from its own ChaCha stream derived from the suite
//! seed, so results do not depend on which other invariants ran.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::entanglement::{ccn, ccn_via_stokes, complement, feasibility_flags};
use crate::error::{arg, Result};
use crate::io::{StateFile, StateFormat};
use crate::maps::mask_total_reflection;
use crate::repr::{
    from_stokes, hs_inner, max_abs_diff, to_real_density, to_stokes, HermitianOperator, QubitSet,
};
use crate::spectral::eigh;
use crate::states::{random_density, random_unitary, RandomMode};
use crate::{CMatrix, SignMask, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    /// Corrupts one sign of the mask used to undo a mask application, so
    /// the involution invariant must fail.
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 42, trials: 500, inject_fault: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantResult {
    pub name: String,
    pub trials: usize,
    pub passed: bool,
    /// Largest observed deviation (0 for boolean invariants).
    pub max_error: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub invariants: Vec<InvariantResult>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &InvariantResult> {
        self.invariants.iter().filter(|r| !r.passed)
    }
}

/// Outcome of one trial: the measured error and, on failure, the witness.
type Trial = Result<(f64, Option<Value>)>;

struct Invariant {
    name: &'static str,
    tolerance: f64,
    run: fn(usize, &mut ChaCha8Rng, &SuiteConfig) -> Trial,
}

fn state_json(rho: &HermitianOperator) -> Value {
    serde_json::to_value(StateFile::from_operator(rho, StateFormat::Hermitian, None))
        .expect("plain struct")
}

fn qubits_for_trial(t: usize) -> usize {
    1 + t % 3
}

fn random_mask(n: usize, rng: &mut impl Rng) -> SignMask {
    let mut signs: Vec<i8> = (0..1usize << (2 * n)).map(|_| if rng.random() { 1 } else { -1 }).collect();
    signs[0] = 1;
    SignMask::new(n, signs, "random").expect("valid by construction")
}

fn random_state(t: usize, rng: &mut ChaCha8Rng) -> Result<crate::DensityState> {
    random_density(qubits_for_trial(t), RandomMode::MixedDirichlet, rng)
}

fn round_trip(t: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let rho = random_state(t, rng)?;
    let err = from_stokes(&to_stokes(&rho)).max_abs_diff(&rho);
    Ok((err, Some(state_json(&rho))))
}

fn norm_bridge(t: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let rho = random_state(t, rng)?;
    let sigma = to_real_density(&to_stokes(&rho));
    let scale = ((1u64 << rho.n()) as f64).sqrt();
    let err = (sigma.matrix().norm() / scale - rho.matrix().norm()).abs();
    Ok((err, Some(state_json(&rho))))
}

fn purity_dual(t: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let rho = random_state(t, rng)?;
    let err = (to_stokes(&rho).purity() - rho.purity()).abs();
    Ok((err, Some(state_json(&rho))))
}

fn eigen_reconstruction(t: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let rho = random_state(t, rng)?;
    let (vals, vecs) = eigh(rho.matrix())?;
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|v| C64::new(*v, 0.0)),
    ));
    let err = max_abs_diff(&(&vecs * diag * vecs.adjoint()), rho.matrix());
    Ok((err, Some(state_json(&rho))))
}

fn involution(t: usize, rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Trial {
    let rho = random_state(t, rng)?;
    let mask = random_mask(rho.n(), rng);
    let undo = if cfg.inject_fault {
        let mut signs = mask.signs().to_vec();
        let k = rng.random_range(1..signs.len());
        signs[k] = -signs[k];
        SignMask::new(rho.n(), signs, "corrupted")?
    } else {
        mask.clone()
    };
    let s = to_stokes(&rho);
    let back = undo.apply_stokes(&mask.apply_stokes(&s)?)?;
    let err = s.values().iter().zip(back.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let witness = json!({"state": state_json(&rho), "mask": mask, "undo": undo});
    Ok((err, Some(witness)))
}

fn norm_trace_preservation(t: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let a = random_state(t, rng)?;
    let b = random_density(a.n(), RandomMode::MixedDirichlet, rng)?;
    let mask = random_mask(a.n(), rng);
    let (ma, mb) = (mask.apply(&a)?, mask.apply(&b)?);
    let err = [
        (ma.purity() - a.purity()).abs(),
        (ma.matrix().trace() - C64::new(1.0, 0.0)).norm(),
        (hs_inner(ma.matrix(), mb.matrix()) - hs_inner(a.matrix(), b.matrix())).abs(),
        max_abs_diff(ma.matrix(), &ma.matrix().adjoint()),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok((err, Some(json!({"a": state_json(&a), "b": state_json(&b), "mask": mask}))))
}

fn pure_total_reflection_spectrum(_: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let rho = random_density(2, RandomMode::HaarPure, rng)?;
    let out = mask_total_reflection(2, &QubitSet::all(2))?.apply(&rho)?;
    let expect = [0.5, 0.5, 0.5, -0.5];
    let err = out.eigenvalues().iter().zip(expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok((err, Some(state_json(&rho))))
}

fn unitary_commutation(t: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let rho = random_state(t, rng)?;
    let n = rho.n();
    let u = random_unitary(n, rng);
    let mask = mask_total_reflection(n, &QubitSet::all(n))?;
    let rotated = HermitianOperator::new(&u * rho.matrix() * u.adjoint())?;
    let lhs = mask.apply(&rotated)?;
    let rhs = &u * mask.apply(&rho)?.matrix() * u.adjoint();
    Ok((max_abs_diff(lhs.matrix(), &rhs), Some(state_json(&rho))))
}

fn theorem2(t: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let n = 2 + t % 2;
    let cap = 2.0 / (1u64 << n) as f64;
    let rho = random_density(n, RandomMode::BoundedSpectrum(cap), rng)?;
    let min = complement(&rho).min_eig();
    Ok(((-min).max(0.0), Some(state_json(&rho))))
}

fn corollaries(t: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let n = 2 + t % 2;
    let cap = 2.0 / (1u64 << n) as f64;
    let mode = if t.is_multiple_of(3) { RandomMode::MixedDirichlet } else { RandomMode::BoundedSpectrum(cap) };
    let rho = random_density(n, mode, rng)?;
    let flags = feasibility_flags(&rho, crate::PSD_TOL);
    let err = if flags.implications_hold() { 0.0 } else { 1.0 };
    Ok((err, Some(json!({"state": state_json(&rho), "flags": flags}))))
}

fn ccn_dual_path(_: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let rho = random_density(2, RandomMode::MixedDirichlet, rng)?;
    let err = (ccn_via_stokes(&to_stokes(&rho))? - ccn(&rho, &QubitSet::new([0]))?).abs();
    Ok((err, Some(state_json(&rho))))
}

fn complement_identity(t: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let rho = random_state(t, rng)?;
    let d = rho.dim();
    let mean = (rho.matrix() + complement(&rho).matrix()) * C64::new(0.5, 0.0);
    let err = max_abs_diff(&mean, &(CMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0)));
    Ok((err, Some(state_json(&rho))))
}

fn random_state_validity(t: usize, rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Trial {
    let n = qubits_for_trial(t);
    let mode = match t % 3 {
        0 => RandomMode::HaarPure,
        1 => RandomMode::MixedDirichlet,
        _ => RandomMode::BoundedSpectrum(2.0 / (1u64 << n) as f64),
    };
    let rho = random_density(n, mode, rng)?;
    // re-validate through the public constructor
    let err = match crate::DensityState::new(rho.matrix().clone()) {
        Ok(_) => 0.0,
        Err(_) => 1.0,
    };
    Ok((err, Some(state_json(&rho))))
}

const INVARIANTS: &[Invariant] = &[
    Invariant { name: "repr/round-trip", tolerance: 1e-12, run: round_trip },
    Invariant { name: "repr/norm-bridge", tolerance: 1e-12, run: norm_bridge },
    Invariant { name: "repr/purity-dual-path", tolerance: 1e-12, run: purity_dual },
    Invariant { name: "spectral/reconstruction", tolerance: 1e-12, run: eigen_reconstruction },
    Invariant { name: "maps/involution", tolerance: 0.0, run: involution },
    Invariant { name: "maps/norm-trace-preservation", tolerance: 1e-12, run: norm_trace_preservation },
    Invariant { name: "maps/pure-total-reflection-spectrum", tolerance: 1e-10, run: pure_total_reflection_spectrum },
    Invariant { name: "maps/unitary-commutation", tolerance: 1e-10, run: unitary_commutation },
    Invariant { name: "entanglement/spectral-bound-feasible", tolerance: 1e-10, run: theorem2 },
    Invariant { name: "entanglement/feasibility-implications", tolerance: 0.0, run: corollaries },
    Invariant { name: "entanglement/ccn-dual-path", tolerance: 1e-10, run: ccn_dual_path },
    Invariant { name: "entanglement/complement-identity", tolerance: 1e-14, run: complement_identity },
    Invariant { name: "states/random-state-validity", tolerance: 0.0, run: random_state_validity },
];

pub fn invariant_names() -> Vec<&'static str> {
    INVARIANTS.iter().map(|i| i.name).collect()
}

fn run_one(index: usize, inv: &Invariant, cfg: &SuiteConfig) -> Result<InvariantResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut max_error: f64 = 0.0;
    for t in 0..cfg.trials {
        let (err, witness) = (inv.run)(t, &mut rng, cfg)?;
        max_error = max_error.max(err);
        if err.is_nan() || err > inv.tolerance {
            return Ok(InvariantResult {
                name: inv.name.into(),
                trials: t + 1,
                passed: false,
                max_error,
                tolerance: inv.tolerance,
                counterexample: Some(json!({"trial": t, "error": err, "witness": witness})),
            });
        }
    }
    Ok(InvariantResult {
        name: inv.name.into(),
        trials: cfg.trials,
        passed: true,
        max_error,
        tolerance: inv.tolerance,
        counterexample: None,
    })
}

/// Runs every invariant for `cfg.trials` trials; stops an invariant at its
/// first failing trial.
pub fn run(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.trials == 0 {
        return arg("trials must be at least 1");
    }
    let invariants = INVARIANTS
        .iter()
        .enumerate()
        .map(|(i, inv)| run_one(i, inv, cfg))
        .collect::<Result<Vec<_>>>()?;
    let passed = invariants.iter().all(|r| r.passed);
    Ok(SuiteReport { seed: cfg.seed, trials: cfg.trials, passed, invariants })
}
