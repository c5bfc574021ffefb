//! Separability criteria and total-reflection feasibility.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{dim, Result};
use crate::maps::{mask_partial_transpose, mask_total_reflection, spin_flipped_partner};
use crate::repr::{
    hs_inner, partial_trace_matrix, place, realign, reorder_qubits, stokes_as_matrix,
    DensityState, HermitianOperator, QubitSet, StokesTensor,
};
use crate::spectral::{eigvalsh, rank, sqrt_psd, svd_values, trace_norm};
use crate::{CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SeparableConsistent,
    Entangled,
    Infeasible,
    Feasible,
}

/// Outcome of one criterion. The verdict is a function of `witness` and
/// `tolerance` only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub verdict: Verdict,
    pub witness: f64,
    pub subset: QubitSet,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
}

impl CriterionReport {
    pub fn new(criterion: &str, verdict: Verdict, witness: f64, subset: QubitSet, tolerance: f64) -> Self {
        Self { criterion: criterion.into(), verdict, witness, subset, tolerance, details: Map::new() }
    }

    pub fn detail(mut self, key: &str, value: Value) -> Self {
        self.details.insert(key.into(), value);
        self
    }
}

/// Negative-eigenvalue verdict shared by PPT and reduction tests.
fn positivity_verdict(min_eig: f64, tol: f64) -> Verdict {
    if min_eig < -tol {
        Verdict::Entangled
    } else {
        Verdict::SeparableConsistent
    }
}

/// Partial transpose on `subset` followed by a PSD check.
pub fn ppt_test(rho: &HermitianOperator, subset: &QubitSet, tol: f64) -> Result<CriterionReport> {
    subset.check_proper(rho.n())?;
    let pt = mask_partial_transpose(rho.n(), subset)?.apply(rho)?;
    let min = pt.min_eig();
    Ok(CriterionReport::new("ppt", positivity_verdict(min, tol), min, subset.clone(), tol))
}

/// Realigned matrix of `rho` for the cut `subset | rest`.
pub fn realigned(rho: &HermitianOperator, subset: &QubitSet) -> Result<CMatrix> {
    let n = rho.n();
    subset.check_proper(n)?;
    let order: Vec<usize> = subset
        .members()
        .iter()
        .copied()
        .chain(subset.complement(n).members().iter().copied())
        .collect();
    let m = reorder_qubits(rho.matrix(), n, &order);
    realign(&m, 1 << subset.len(), 1 << (n - subset.len()))
}

/// Computable cross-norm: trace norm of the realigned density.
pub fn ccn(rho: &HermitianOperator, subset: &QubitSet) -> Result<f64> {
    Ok(trace_norm(&realigned(rho, subset)?))
}

pub fn ccn_test(rho: &HermitianOperator, subset: &QubitSet, tol: f64) -> Result<CriterionReport> {
    let xi = ccn(rho, subset)?;
    let verdict = if xi > 1.0 + tol { Verdict::Entangled } else { Verdict::SeparableConsistent };
    Ok(CriterionReport::new("ccn", verdict, xi, subset.clone(), tol))
}

/// Cross-norm from the two-qubit Stokes matrix: half the sum of its
/// singular values.
pub fn ccn_via_stokes(s: &StokesTensor) -> Result<f64> {
    let t = stokes_as_matrix(s)?;
    Ok(0.5 * svd_values(&t).iter().sum::<f64>())
}

/// Wootters concurrence with `ν_j = √eig(ρρ′)`.
pub fn concurrence(rho: &DensityState) -> Result<f64> {
    if rho.n() != 2 {
        return dim(format!("concurrence needs 2 qubits, got {}", rho.n()));
    }
    let partner = spin_flipped_partner(rho)?;
    // eig(ρρ′) = eig(√ρ ρ′ √ρ), which is Hermitian PSD
    let root = sqrt_psd(rho.matrix())?;
    let sandwich = &root * partner.matrix() * &root;
    let sandwich = (&sandwich + sandwich.adjoint()) * C64::new(0.5, 0.0);
    let mut nu: Vec<f64> = eigvalsh(&sandwich)?.iter().map(|l| l.max(0.0).sqrt()).collect();
    nu.sort_by(|a, b| b.total_cmp(a));
    Ok((nu[0] - nu[1] - nu[2] - nu[3]).max(0.0))
}

/// `tr(ρρ′)` as the Lorentzian quadratic form on the Stokes tensor.
pub fn lorentz_metric(s: &StokesTensor) -> Result<f64> {
    if s.n() != 2 {
        return dim(format!("Lorentz metric needs 2 qubits, got {}", s.n()));
    }
    let v = s.values();
    let mut out = v[0] * v[0];
    for j in 1..4 {
        out -= v[j] * v[j] + v[4 * j] * v[4 * j];
        for k in 1..4 {
            out += v[4 * j + k] * v[4 * j + k];
        }
    }
    Ok(out)
}

/// `1_traced ⊗ tr_traced(ρ) − ρ`; not trace preserving.
pub fn reduction_operator(rho: &HermitianOperator, traced: &QubitSet) -> Result<CMatrix> {
    let n = rho.n();
    traced.check_proper(n)?;
    let reduced = partial_trace_matrix(rho.matrix(), n, &traced.complement(n))?;
    let d = 1usize << traced.len();
    Ok(place(n, traced.members(), &CMatrix::identity(d, d), &reduced) - rho.matrix())
}

pub fn reduction_criterion(
    rho: &HermitianOperator,
    traced: &QubitSet,
    tol: f64,
) -> Result<CriterionReport> {
    let op = reduction_operator(rho, traced)?;
    let min = *eigvalsh(&op)?.last().expect("nonempty");
    let trace = op.trace().re;
    Ok(CriterionReport::new("reduction", positivity_verdict(min, tol), min, traced.clone(), tol)
        .detail("trace", json!(trace))
        .detail("expected_trace", json!(((1u64 << traced.len()) - 1) as f64)))
}

/// `2^{1-n} 1 − ρ`; the total reflection written on the Hermitian side.
pub fn complement(rho: &HermitianOperator) -> HermitianOperator {
    let d = rho.dim();
    let m = CMatrix::identity(d, d) * C64::new(2.0 / d as f64, 0.0) - rho.matrix();
    HermitianOperator::new(m).expect("complement of a trace-one Hermitian operator")
}

/// Flags reported by [`total_reflection_feasible`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityFlags {
    /// `max eig(ρ) ≤ 2^{1-n}`.
    pub spectral_bound: bool,
    /// The reflected operator is PSD.
    pub exact: bool,
    /// `tr(ρ²) ≤ 2^{1-n}`.
    pub purity_bound: bool,
    /// `rank(ρ) ≥ 2^{n-1}`.
    pub rank_bound: bool,
}

impl FeasibilityFlags {
    /// spectral ⇒ exact, exact ⇒ purity, exact ⇒ rank.
    pub fn implications_hold(&self) -> bool {
        (!self.spectral_bound || self.exact)
            && (!self.exact || self.purity_bound)
            && (!self.exact || self.rank_bound)
    }
}

pub fn feasibility_flags(rho: &HermitianOperator, tol: f64) -> FeasibilityFlags {
    let n = rho.n();
    let bound = 2.0 / (1u64 << n) as f64;
    let eig = rho.eigenvalues();
    let reflected_min = complement(rho).min_eig();
    FeasibilityFlags {
        spectral_bound: eig[0] <= bound + tol,
        exact: reflected_min >= -tol,
        purity_bound: rho.purity() <= bound + tol,
        rank_bound: eig.iter().filter(|v| v.abs() > tol).count() >= 1 << (n - 1),
    }
}

/// Whether the total reflection of `rho` is again a density.
pub fn total_reflection_feasible(rho: &HermitianOperator, tol: f64) -> CriterionReport {
    let flags = feasibility_flags(rho, tol);
    let reflected = mask_total_reflection(rho.n(), &QubitSet::all(rho.n()))
        .expect("valid qubit count")
        .apply(rho)
        .expect("matching size");
    let min = reflected.min_eig();
    let verdict = if flags.exact { Verdict::Feasible } else { Verdict::Infeasible };
    CriterionReport::new("total-reflection", verdict, min, QubitSet::all(rho.n()), tol)
        .detail("max_eig", json!(rho.max_eig()))
        .detail("purity", json!(rho.purity()))
        .detail("rank", json!(rank(rho.matrix(), tol).expect("Hermitian")))
        .detail("flags", serde_json::to_value(flags).expect("plain struct"))
        .detail("implications_hold", json!(flags.implications_hold()))
}

/// Nonlocal reflection of the joint density of `subset`, identity
/// elsewhere, followed by a PSD check.
pub fn partial_reflection_test(
    rho: &HermitianOperator,
    subset: &QubitSet,
    tol: f64,
) -> Result<CriterionReport> {
    let mask = mask_total_reflection(rho.n(), subset)?;
    let out = mask.apply(rho)?;
    let min = out.min_eig();
    let verdict = if min < -tol { Verdict::Infeasible } else { Verdict::Feasible };
    Ok(CriterionReport::new("reflection", verdict, min, subset.clone(), tol)
        .detail("purity_in", json!(rho.purity()))
        .detail("purity_out", json!(hs_inner(out.matrix(), out.matrix()))))
}
