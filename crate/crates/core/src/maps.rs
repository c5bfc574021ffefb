//! Discrete symmetry maps on the Stokes tensor.
//!
//! Every involutory, trace-preserving diagonal symmetry is a [`SignMask`]:
//! a ±1 multiplier per Stokes component. Partial transposes, spin flips,
//! partial and total reflections, the composite `C` map and the pair of
//! non-product masks related by the reshuffle are all built here. General
//! local actions `diag(1, R)` with `R ∈ O(3)` are [`LocalOrthogonalMap`]s.
//!
//! Maps are applied Stokes-side. The Hermitian-side operator-sum forms at
//! the bottom of the module are independent evaluation paths used to
//! cross-check the masks.

use nalgebra::{Matrix3, Matrix4};
use num_bigint::BigUint;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{arg, dim, Error, Result};
use crate::repr::{
    check_qubits, digit_at, from_real_density, from_stokes, partial_trace_matrix, place,
    to_real_density, to_stokes, unfold_position, HermitianOperator, QubitSet, RealDensityMatrix,
    StokesTensor,
};
use crate::{CMatrix, RMatrix, C64};

/// A ±1 multiplier for every Stokes component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MaskRecord", into = "MaskRecord")]
pub struct SignMask {
    n: usize,
    name: String,
    signs: Vec<i8>,
}

#[derive(Serialize, Deserialize)]
struct MaskRecord {
    n: usize,
    name: String,
    signs: Vec<i8>,
}

impl TryFrom<MaskRecord> for SignMask {
    type Error = Error;

    fn try_from(r: MaskRecord) -> Result<Self> {
        SignMask::new(r.n, r.signs, r.name)
    }
}

impl From<SignMask> for MaskRecord {
    fn from(m: SignMask) -> Self {
        MaskRecord { n: m.n, name: m.name, signs: m.signs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Preserving,
    Changing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapClassification {
    pub orientation: Orientation,
    pub local_factorizable: bool,
    pub sign_change_count: usize,
}

impl SignMask {
    pub fn new(n: usize, signs: Vec<i8>, name: impl Into<String>) -> Result<Self> {
        check_qubits(n)?;
        if signs.len() != 1 << (2 * n) {
            return dim(format!("mask needs {} signs, got {}", 1usize << (2 * n), signs.len()));
        }
        if let Some(s) = signs.iter().find(|s| **s != 1 && **s != -1) {
            return arg(format!("mask entry {s} is not ±1"));
        }
        if signs[0] != 1 {
            return arg("affine component of a mask must be +1");
        }
        Ok(Self { n, name: name.into(), signs })
    }

    fn from_fn(n: usize, name: impl Into<String>, f: impl Fn(usize) -> bool) -> Self {
        let signs = (0..1usize << (2 * n)).map(|l| if f(l) { -1 } else { 1 }).collect();
        Self { n, name: name.into(), signs }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, "1", |_| false)
    }

    /// Outer product of per-qubit 4-vectors (each with a leading +1).
    pub fn from_local_factors(factors: &[[i8; 4]], name: impl Into<String>) -> Result<Self> {
        let n = factors.len();
        check_qubits(n)?;
        if factors.iter().any(|f| f[0] != 1 || f.iter().any(|s| *s != 1 && *s != -1)) {
            return arg("local factors must be ±1 with a leading +1");
        }
        Ok(Self::from_fn(n, name, |l| {
            (0..n).map(|q| factors[q][digit_at(l, q, n)]).product::<i8>() == -1
        }))
    }

    /// Reads a mask from a ±1 matrix laid out like the real density matrix.
    pub fn from_real_density_signs(m: &RMatrix, name: impl Into<String>) -> Result<Self> {
        let d = m.nrows();
        if d != m.ncols() || d < 2 || !d.is_power_of_two() {
            return dim("sign matrix must be square with power-of-two size");
        }
        let n = d.trailing_zeros() as usize;
        let signs = (0..1usize << (2 * n))
            .map(|l| {
                let (r, c) = unfold_position(l, n);
                m[(r, c)].signum() as i8
            })
            .collect();
        Self::new(n, signs, name)
    }

    /// Reads a two-qubit mask from a ±1 matrix laid out like
    /// [`crate::repr::stokes_as_matrix`] (row `j`, column `k`).
    pub fn from_stokes_matrix_signs(m: &RMatrix, name: impl Into<String>) -> Result<Self> {
        if m.shape() != (4, 4) {
            return dim("Stokes sign matrix must be 4x4");
        }
        let signs = (0..16).map(|l| m[(l / 4, l % 4)].signum() as i8).collect();
        Self::new(2, signs, name)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Hadamard product of two masks (composition of the maps).
    pub fn compose(&self, other: &SignMask) -> Result<SignMask> {
        if self.n != other.n {
            return dim("masks act on different qubit counts");
        }
        let signs = self.signs.iter().zip(&other.signs).map(|(a, b)| a * b).collect();
        Ok(SignMask { n: self.n, name: format!("{}·{}", self.name, other.name), signs })
    }

    pub fn sign_change_count(&self) -> usize {
        self.signs.iter().filter(|s| **s == -1).count()
    }

    /// Per-qubit factors when the mask is an outer product.
    pub fn local_factors(&self) -> Option<Vec<[i8; 4]>> {
        let n = self.n;
        let factors: Vec<[i8; 4]> = (0..n)
            .map(|q| {
                let mut f = [1i8; 4];
                for (d, slot) in f.iter_mut().enumerate() {
                    *slot = self.signs[d << (2 * (n - 1 - q))];
                }
                f
            })
            .collect();
        let ok = self.signs.iter().enumerate().all(|(l, &s)| {
            (0..n).map(|q| factors[q][digit_at(l, q, n)]).product::<i8>() == s
        });
        ok.then_some(factors)
    }

    pub fn classify(&self) -> MapClassification {
        let count = self.sign_change_count();
        MapClassification {
            orientation: if count % 2 == 1 { Orientation::Changing } else { Orientation::Preserving },
            local_factorizable: self.local_factors().is_some(),
            sign_change_count: count,
        }
    }

    /// The same mask as a ±1 matrix in real-density-matrix layout.
    pub fn real_density_signs(&self) -> RMatrix {
        let d = 1usize << self.n;
        let mut m = RMatrix::zeros(d, d);
        for (l, &s) in self.signs.iter().enumerate() {
            let (r, c) = unfold_position(l, self.n);
            m[(r, c)] = s as f64;
        }
        m
    }

    /// Two-qubit mask as a ±1 matrix in Stokes-matrix layout.
    pub fn stokes_matrix_signs(&self) -> Result<RMatrix> {
        if self.n != 2 {
            return dim("Stokes-matrix layout is only defined for two qubits");
        }
        Ok(RMatrix::from_fn(4, 4, |j, k| self.signs[4 * j + k] as f64))
    }

    /// Component-wise product with the tensor.
    pub fn apply_stokes(&self, s: &StokesTensor) -> Result<StokesTensor> {
        if s.n() != self.n {
            return dim(format!("mask on {} qubits applied to {}-qubit tensor", self.n, s.n()));
        }
        let values = s.values().iter().zip(&self.signs).map(|(v, &g)| v * g as f64).collect();
        Ok(StokesTensor::from_parts(self.n, values))
    }

    /// Hadamard product with the real density matrix.
    pub fn apply_real_density(&self, sigma: &RealDensityMatrix) -> Result<RealDensityMatrix> {
        if sigma.n() != self.n {
            return dim("mask and real density matrix sizes differ");
        }
        RealDensityMatrix::new(sigma.matrix().component_mul(&self.real_density_signs()))
    }

    pub fn apply(&self, rho: &HermitianOperator) -> Result<HermitianOperator> {
        apply_mask(self, &to_stokes(rho))
    }
}

/// Applies the mask to the tensor and returns the Hermitian result.
pub fn apply_mask(mask: &SignMask, s: &StokesTensor) -> Result<HermitianOperator> {
    Ok(from_stokes(&mask.apply_stokes(s)?))
}

fn subset_label(prefix: &str, subset: &QubitSet) -> String {
    format!("{prefix}[{subset}]")
}

/// Partial transpose on `subset`: flips components with an odd number of
/// `2` digits inside the subset.
pub fn mask_partial_transpose(n: usize, subset: &QubitSet) -> Result<SignMask> {
    check_qubits(n)?;
    subset.check(n)?;
    Ok(SignMask::from_fn(n, subset_label("T", subset), |l| {
        subset.members().iter().filter(|&&q| digit_at(l, q, n) == 2).count() % 2 == 1
    }))
}

/// Local spin flip (Bloch-vector inversion) on each qubit of `subset`.
pub fn mask_spin_flip(n: usize, subset: &QubitSet) -> Result<SignMask> {
    check_qubits(n)?;
    subset.check(n)?;
    Ok(SignMask::from_fn(n, subset_label("S", subset), |l| {
        subset.members().iter().filter(|&&q| digit_at(l, q, n) != 0).count() % 2 == 1
    }))
}

/// Nonlocal reflection of the joint density of `subset`: flips every
/// component except those whose subset digits are all zero.
pub fn mask_total_reflection(n: usize, subset: &QubitSet) -> Result<SignMask> {
    check_qubits(n)?;
    subset.check(n)?;
    if subset.is_empty() {
        return arg("reflection needs at least one qubit");
    }
    Ok(SignMask::from_fn(n, subset_label("R", subset), |l| {
        subset.members().iter().any(|&q| digit_at(l, q, n) != 0)
    }))
}

/// Two-qubit `C`: flips exactly the two-body components.
pub fn mask_composite_c() -> SignMask {
    SignMask::from_fn(2, "C", |l| l / 4 != 0 && l % 4 != 0)
}

fn pm_matrix(rows: [[i8; 4]; 4]) -> RMatrix {
    RMatrix::from_fn(4, 4, |r, c| rows[r][c] as f64)
}

/// The pair of 4×4 sign matrices related by the reshuffle: the first acts
/// on the real density matrix, the second on the Stokes matrix, and both
/// describe the same map.
pub fn mask_pair_eq13() -> (RMatrix, RMatrix) {
    let on_real = pm_matrix([[1, 1, 1, 1], [1, -1, -1, 1], [1, -1, -1, 1], [1, 1, 1, 1]]);
    let on_stokes = pm_matrix([[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [-1, 1, 1, 1]]);
    (on_real, on_stokes)
}

/// Both matrices of [`mask_pair_eq13`] read as real-density sign matrices,
/// i.e. the two distinct maps they define when applied to `σ(ρ)`.
pub fn eq13_masks() -> (SignMask, SignMask) {
    let (a, b) = mask_pair_eq13();
    (
        SignMask::from_real_density_signs(&a, "P1").expect("valid constant"),
        SignMask::from_real_density_signs(&b, "P2").expect("valid constant"),
    )
}

/// Columns of the two-qubit sign table, in order, with their labels.
pub fn table1() -> Vec<(&'static str, SignMask)> {
    let a = QubitSet::new([0]);
    let b = QubitSet::new([1]);
    let ab = QubitSet::new([0, 1]);
    let pt = |s: &QubitSet| mask_partial_transpose(2, s).expect("two qubits");
    let sf = |s: &QubitSet| mask_spin_flip(2, s).expect("two qubits");
    vec![
        ("RT⊗1", pt(&a)),
        ("1⊗RT", pt(&b)),
        ("RT⊗RT", pt(&ab)),
        ("RS⊗1", sf(&a)),
        ("1⊗RS", sf(&b)),
        ("RS⊗RS", sf(&ab)),
        ("RS,16", mask_total_reflection(2, &ab).expect("two qubits")),
    ]
}

/// `2^{4^n - 3n - 1}`, the number of locally inequivalent diagonal
/// symmetries on `n` qubits.
pub fn count_inequivalent(n: usize) -> Result<BigUint> {
    if n == 0 {
        return arg("qubit count must be at least 1");
    }
    let exponent = u32::try_from(n)
        .ok()
        .and_then(|k| 4u64.checked_pow(k))
        .and_then(|p| p.checked_sub(3 * n as u64 + 1))
        .ok_or_else(|| Error::Argument(format!("exponent overflows for n = {n}")))?;
    Ok(BigUint::from(1u8) << exponent)
}

/// Per-qubit affine blocks `diag(1, R)` with `R ∈ O(3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOrthogonalMap {
    blocks: Vec<Matrix4<f64>>,
}

const ORTHO_TOL: f64 = 1e-10;

impl LocalOrthogonalMap {
    pub fn new(blocks: Vec<Matrix4<f64>>) -> Result<Self> {
        check_qubits(blocks.len())?;
        for (q, b) in blocks.iter().enumerate() {
            let affine_ok = (b[(0, 0)] - 1.0).abs() <= ORTHO_TOL
                && (1..4).all(|i| b[(0, i)].abs() <= ORTHO_TOL && b[(i, 0)].abs() <= ORTHO_TOL);
            if !affine_ok {
                return arg(format!("block {q} is not of the form diag(1, R)"));
            }
            let r: Matrix3<f64> = b.fixed_view::<3, 3>(1, 1).into_owned();
            let defect = (r * r.transpose() - Matrix3::identity()).abs().max();
            if defect > ORTHO_TOL {
                return arg(format!("block {q} is not orthogonal (defect {defect:e})"));
            }
        }
        Ok(Self { blocks })
    }

    /// Embeds the 3×3 rotations as `diag(1, R)`.
    pub fn from_rotations(rotations: &[Matrix3<f64>]) -> Result<Self> {
        Self::new(rotations.iter().map(affine_block).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self { blocks: vec![Matrix4::identity(); n] }
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Matrix4<f64>] {
        &self.blocks
    }

    pub fn with_block(mut self, q: usize, rotation: &Matrix3<f64>) -> Result<Self> {
        if q >= self.blocks.len() {
            return arg(format!("qubit {} out of range", q + 1));
        }
        self.blocks[q] = affine_block(rotation);
        Self::new(self.blocks)
    }

    /// Contracts each qubit slot of the tensor with its block.
    pub fn apply_stokes(&self, s: &StokesTensor) -> Result<StokesTensor> {
        let n = self.n();
        if s.n() != n {
            return dim(format!("map on {n} qubits applied to {}-qubit tensor", s.n()));
        }
        let mut v = s.values().to_vec();
        let mut next = vec![0.0; v.len()];
        for (q, block) in self.blocks.iter().enumerate() {
            if *block == Matrix4::identity() {
                continue;
            }
            let stride = 1usize << (2 * (n - 1 - q));
            for (l, out) in next.iter_mut().enumerate() {
                let dq = (l / stride) % 4;
                let base = l - dq * stride;
                *out = (0..4).map(|j| block[(dq, j)] * v[base + j * stride]).sum();
            }
            std::mem::swap(&mut v, &mut next);
        }
        Ok(StokesTensor::from_parts(n, v))
    }
}

fn affine_block(r: &Matrix3<f64>) -> Matrix4<f64> {
    let mut b = Matrix4::identity();
    b.fixed_view_mut::<3, 3>(1, 1).copy_from(r);
    b
}

pub fn apply_local_orthogonal(
    map: &LocalOrthogonalMap,
    s: &StokesTensor,
) -> Result<HermitianOperator> {
    Ok(from_stokes(&map.apply_stokes(s)?))
}

pub const R_T: [f64; 3] = [1.0, -1.0, 1.0];

/// `diag(1, -1, 1)`, the Bloch-space action of transposition.
pub fn reflection_t() -> Matrix3<f64> {
    Matrix3::from_diagonal(&R_T.into())
}

/// `-1₃`, spatial inversion.
pub fn reflection_s() -> Matrix3<f64> {
    -Matrix3::identity()
}

fn pauli(d: usize) -> CMatrix {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match d {
        0 => CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        1 => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        2 => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        _ => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Adjoint representation of a 2×2 unitary: `R_ab = ½ tr(σ_a U σ_b U†)`
/// restricted to the Bloch block.
pub fn rotation_from_unitary(u: &CMatrix) -> Result<Matrix3<f64>> {
    if u.shape() != (2, 2) {
        return dim("expected a 2x2 unitary");
    }
    let defect = (u * u.adjoint() - CMatrix::identity(2, 2)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > ORTHO_TOL {
        return arg(format!("matrix is not unitary (defect {defect:e})"));
    }
    Ok(Matrix3::from_fn(|a, b| {
        (pauli(a + 1) * u * pauli(b + 1) * u.adjoint()).trace().re * 0.5
    }))
}

/// Gram–Schmidt on a matrix of standard normals.
fn random_orthogonal(rng: &mut impl Rng) -> Matrix3<f64> {
    loop {
        let g = Matrix3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let mut cols: Vec<nalgebra::Vector3<f64>> = Vec::with_capacity(3);
        let mut ok = true;
        for j in 0..3 {
            let mut v = g.column(j).into_owned();
            for u in &cols {
                v -= u * u.dot(&v);
            }
            let norm = v.norm();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols.push(v / norm);
        }
        if ok {
            return Matrix3::from_columns(&cols);
        }
    }
}

/// Random element of `O⁻(3)` (orthogonal, determinant −1).
pub fn random_reflection(rng: &mut impl Rng) -> Matrix3<f64> {
    let mut r = random_orthogonal(rng);
    if r.determinant() > 0.0 {
        r.column_mut(0).neg_mut();
    }
    r
}

/// Random element of `SO(3)`.
pub fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
    let mut r = random_orthogonal(rng);
    if r.determinant() < 0.0 {
        r.column_mut(0).neg_mut();
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OneQubitReflection {
    Transpose,
    SpinFlip,
}

/// Single-qubit transpose or spin flip evaluated through the real density
/// matrix: `σ(ρᵀ) = σ|0⟩⟨0| − σ_z σ |1⟩⟨1|` and `σ(ρ^S) = 2|0⟩⟨0| − σ`.
pub fn operator_sum_onequbit(
    which: OneQubitReflection,
    rho: &HermitianOperator,
) -> Result<HermitianOperator> {
    if rho.n() != 1 {
        return dim(format!("one-qubit form applied to {} qubits", rho.n()));
    }
    let sigma = to_real_density(&to_stokes(rho)).into_matrix();
    let p0 = RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let p1 = RMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
    let out = match which {
        OneQubitReflection::Transpose => {
            let sz = RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
            &sigma * p0 - sz * &sigma * p1
        }
        OneQubitReflection::SpinFlip => p0 * 2.0 - sigma,
    };
    let s = from_real_density(&RealDensityMatrix::new(out)?)?;
    Ok(from_stokes(&s))
}

/// Spin flip as the two-sided form `σ_y ρ* σ_y`.
pub fn spin_flip_conjugation(rho: &HermitianOperator) -> Result<HermitianOperator> {
    if rho.n() != 1 {
        return dim(format!("one-qubit spin flip applied to {} qubits", rho.n()));
    }
    let sy = pauli(2);
    Ok(HermitianOperator::from_parts(1, &sy * rho.matrix().conjugate() * &sy))
}

/// `ρ′ = 4 Λ₂₂ ρ* Λ₂₂ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn spin_flipped_partner(rho: &HermitianOperator) -> Result<HermitianOperator> {
    if rho.n() != 2 {
        return dim(format!("spin-flipped partner needs 2 qubits, got {}", rho.n()));
    }
    let yy = pauli(2).kronecker(&pauli(2));
    Ok(HermitianOperator::from_parts(2, &yy * rho.matrix().conjugate() * &yy))
}

/// The `C` map as an operator sum:
/// `Σ_k (λ_k⊗1) ρ (λ_k⊗1) + (1⊗λ_k) ρ (1⊗λ_k) − ½·1₄`.
pub fn operator_sum_composite_c(rho: &HermitianOperator) -> Result<HermitianOperator> {
    if rho.n() != 2 {
        return dim(format!("C map needs 2 qubits, got {}", rho.n()));
    }
    let half = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let id = CMatrix::identity(2, 2);
    let m = rho.matrix();
    let mut out = CMatrix::identity(4, 4) * C64::new(-0.5, 0.0);
    for k in 1..4 {
        let lk = pauli(k) * half;
        let left = lk.kronecker(&id);
        let right = id.kronecker(&lk);
        out += &left * m * &left + &right * m * &right;
    }
    Ok(HermitianOperator::from_parts(2, out))
}

fn check_pair(n: usize, pair: &QubitSet) -> Result<()> {
    if n < 2 {
        return arg("relaxed reflection needs at least two qubits");
    }
    pair.check(n)?;
    if pair.len() != 2 {
        return arg(format!("relaxed reflection acts on exactly two qubits, got '{pair}'"));
    }
    Ok(())
}

/// Linear action of the relaxed reflection on any `2^n × 2^n` matrix:
/// `⅓ (1_pair ⊗ tr_pair(X) − X)`.
pub fn relaxed_reflection_linear(m: &CMatrix, n: usize, pair: &QubitSet) -> Result<CMatrix> {
    check_pair(n, pair)?;
    let third = C64::new(1.0 / 3.0, 0.0);
    let id4 = CMatrix::identity(4, 4);
    let embedded = if n == 2 {
        id4 * m.trace()
    } else {
        let reduced = partial_trace_matrix(m, n, &pair.complement(n))?;
        place(n, pair.members(), &id4, &reduced)
    };
    Ok((embedded - m) * third)
}

/// Relaxed two-qubit reflection on `pair`, identity elsewhere.
pub fn relaxed_reflection(rho: &HermitianOperator, pair: &QubitSet) -> Result<HermitianOperator> {
    let m = relaxed_reflection_linear(rho.matrix(), rho.n(), pair)?;
    Ok(HermitianOperator::from_parts(rho.n(), m))
}

/// Choi matrix `Σ_ij E_ij ⊗ Φ(E_ij)` of a linear map on `n` qubits.
pub fn choi_matrix(n: usize, map: impl Fn(&CMatrix) -> Result<CMatrix>) -> Result<CMatrix> {
    let d = 1usize << n;
    let mut out = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let mut e = CMatrix::zeros(d, d);
            e[(i, j)] = C64::new(1.0, 0.0);
            let image = map(&e)?;
            if image.shape() != (d, d) {
                return dim("map changed the matrix size");
            }
            out.view_mut((i * d, j * d), (d, d)).copy_from(&image);
        }
    }
    Ok(out)
}
