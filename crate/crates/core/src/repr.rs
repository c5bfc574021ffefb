//! Pauli basis and the three equivalent carriers of an n-qubit density:
//! the Hermitian matrix, the Stokes tensor and the real density matrix.
//!
//! Conventions used everywhere in the crate:
//!
//! * qubit 1 (position 0) is the leftmost Kronecker factor, i.e. the most
//!   significant bit of a matrix row/column index, and is subsystem `A`;
//! * Stokes values are expansion coefficients against the orthonormal basis
//!   `λ_j = σ_j / √2`, so the affine component of an n-qubit tensor is
//!   `2^{-n/2}`;
//! * a [`MultiIndex`] is linearized base-4 with the first digit most
//!   significant.

use std::fmt;

use nalgebra::{DMatrix, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::{arg, dim, Error, Result};
use crate::{spectral, CMatrix, RMatrix, C64, HERMITIAN_TOL, MAX_QUBITS, PSD_TOL};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// `2^{n/2}`.
pub(crate) fn sqrt2_pow(n: usize) -> f64 {
    let half = (1u64 << (n / 2)) as f64;
    if n % 2 == 1 {
        half * SQRT2
    } else {
        half
    }
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return arg(format!("qubit count {n} outside supported range 1..={MAX_QUBITS}"));
    }
    Ok(())
}

/// Bit of `index` belonging to qubit `q` in an `n`-qubit register.
#[inline]
pub(crate) fn qubit_bit(index: usize, q: usize, n: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

/// Per-qubit Pauli digits in {0,1,2,3}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn new(digits: impl Into<Vec<u8>>) -> Result<Self> {
        let digits = digits.into();
        if digits.is_empty() {
            return arg("multi-index must have at least one digit");
        }
        if let Some(d) = digits.iter().find(|&&d| d > 3) {
            return arg(format!("Pauli digit {d} outside 0..=3"));
        }
        Ok(Self(digits))
    }

    /// Inverse of [`MultiIndex::linear`].
    pub fn from_linear(n: usize, mut linear: usize) -> Self {
        let mut digits = vec![0u8; n];
        for d in digits.iter_mut().rev() {
            *d = (linear % 4) as u8;
            linear /= 4;
        }
        Self(digits)
    }

    pub fn linear(&self) -> usize {
        self.0.iter().fold(0, |acc, &d| acc * 4 + d as usize)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of non-identity digits (the "body" order of the component).
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&d| d != 0).count()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Iterator over the digits of the linear Stokes index `linear`.
#[inline]
pub(crate) fn digit_at(linear: usize, q: usize, n: usize) -> usize {
    (linear >> (2 * (n - 1 - q))) & 3
}

/// A set of qubit positions (0-based; position 0 is subsystem `A`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QubitSet(Vec<usize>);

impl QubitSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn all(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Parses `"A"`, `"AC"`, `"a,b"` or 1-based numbers such as `"1,3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(Self::empty());
        }
        let mut members = Vec::new();
        if text.chars().all(|c| c.is_ascii_digit() || c == ',' || c == ' ') {
            for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let q: usize = tok
                    .parse()
                    .map_err(|_| Error::Argument(format!("bad qubit number '{tok}'")))?;
                if q == 0 {
                    return arg("qubit numbers are 1-based");
                }
                members.push(q - 1);
            }
        } else {
            for c in text.chars().filter(|c| *c != ',' && !c.is_whitespace()) {
                if !c.is_ascii_alphabetic() {
                    return arg(format!("bad qubit label '{c}'"));
                }
                members.push((c.to_ascii_uppercase() as u8 - b'A') as usize);
            }
        }
        Ok(Self::new(members))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.binary_search(&q).is_ok()
    }

    pub fn complement(&self, n: usize) -> Self {
        Self((0..n).filter(|q| !self.contains(*q)).collect())
    }

    /// Errors unless every member is below `n`.
    pub fn check(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&q| q >= n) {
            Some(q) => dim(format!("qubit {} out of range for {n} qubits", q + 1)),
            None => Ok(()),
        }
    }

    /// Errors unless the set is a nonempty proper subset of `0..n`.
    pub fn check_proper(&self, n: usize) -> Result<()> {
        self.check(n)?;
        if self.is_empty() || self.len() == n {
            return arg(format!("subset '{self}' must be a nonempty proper subset of {n} qubits"));
        }
        Ok(())
    }
}

impl fmt::Display for QubitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        for &q in &self.0 {
            if q < 26 {
                write!(f, "{}", (b'A' + q as u8) as char)?;
            } else {
                write!(f, "[{}]", q + 1)?;
            }
        }
        Ok(())
    }
}

impl Serialize for QubitSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QubitSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        QubitSet::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Trace-one Hermitian matrix on `n` qubits; positivity is not required.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    n: usize,
    m: CMatrix,
}

fn qubits_for_dim(d: usize) -> Result<usize> {
    if d < 2 || !d.is_power_of_two() {
        return dim(format!("matrix dimension {d} is not a power of two"));
    }
    let n = d.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(n)
}

pub(crate) fn hermiticity_defect(m: &CMatrix) -> f64 {
    let d = m.nrows();
    let mut worst = 0.0f64;
    for r in 0..d {
        for c in r..d {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

impl HermitianOperator {
    /// Validates shape, Hermiticity and unit trace (tolerance 1e-10).
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return dim(format!("matrix is {}x{}, not square", m.nrows(), m.ncols()));
        }
        let n = qubits_for_dim(m.nrows())?;
        let defect = hermiticity_defect(&m);
        if defect > HERMITIAN_TOL {
            return Err(Error::Representation(format!(
                "matrix is not Hermitian (defect {defect:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::Representation(format!("trace is {tr}, expected 1")));
        }
        Ok(Self { n, m })
    }

    /// Skips validation. Used for outputs of maps that preserve the
    /// invariants by construction.
    pub(crate) fn from_parts(n: usize, m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), 1 << n);
        Self { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        spectral::eigvalsh(&self.m).expect("operator is Hermitian by construction")
    }

    pub fn min_eig(&self) -> f64 {
        *self.eigenvalues().last().expect("nonempty spectrum")
    }

    pub fn max_eig(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        hs_inner(&self.m, &self.m)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eig() >= -tol
    }

    /// Largest entrywise deviation.
    pub fn max_abs_diff(&self, other: &HermitianOperator) -> f64 {
        max_abs_diff(&self.m, &other.m)
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState(HermitianOperator);

impl DensityState {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::from_operator(HermitianOperator::new(m)?)
    }

    pub fn from_operator(op: HermitianOperator) -> Result<Self> {
        let min = op.min_eig();
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self(op))
    }

    pub(crate) fn from_parts(n: usize, m: CMatrix) -> Self {
        Self(HermitianOperator::from_parts(n, m))
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.0
    }
}

impl std::ops::Deref for DensityState {
    type Target = HermitianOperator;

    fn deref(&self) -> &HermitianOperator {
        &self.0
    }
}

impl TryFrom<HermitianOperator> for DensityState {
    type Error = Error;

    fn try_from(op: HermitianOperator) -> Result<Self> {
        Self::from_operator(op)
    }
}

impl From<DensityState> for HermitianOperator {
    fn from(s: DensityState) -> Self {
        s.0
    }
}

/// Real coefficients `ϱ^{j1…jn}` of a density against the `Λ` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StokesTensor {
    n: usize,
    values: Vec<f64>,
}

impl StokesTensor {
    /// Checks the length and the affine component; the latter is then
    /// stored exactly as `2^{-n/2}`.
    pub fn new(n: usize, mut values: Vec<f64>) -> Result<Self> {
        check_qubits(n)?;
        if values.len() != 1 << (2 * n) {
            return Err(Error::InvalidTensor(format!(
                "expected {} values for {n} qubits, got {}",
                1usize << (2 * n),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTensor("non-finite component".into()));
        }
        let affine = 1.0 / sqrt2_pow(n);
        if (values[0] - affine).abs() > HERMITIAN_TOL {
            return Err(Error::InvalidTensor(format!(
                "affine component is {}, expected {affine}",
                values[0]
            )));
        }
        values[0] = affine;
        Ok(Self { n, values })
    }

    pub(crate) fn from_parts(n: usize, values: Vec<f64>) -> Self {
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, idx: &MultiIndex) -> f64 {
        self.values[idx.linear()]
    }

    /// Sum of squares of all components, `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        purity(self)
    }

    /// Euclidean norm of the homogeneous (non-affine) part.
    pub fn homogeneous_norm(&self) -> f64 {
        self.values[1..].iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Real unfolding `σ(ρ)` of a Stokes tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct RealDensityMatrix {
    n: usize,
    m: RMatrix,
}

impl RealDensityMatrix {
    pub fn new(m: RMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return dim("real density matrix must be square");
        }
        let n = qubits_for_dim(m.nrows())?;
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> RMatrix {
        self.m
    }
}

/// Non-zero entry of row `row` of the Pauli string `digits` (unnormalized
/// σ matrices): returns `(column, value)`.
#[inline]
pub(crate) fn pauli_row_entry(n: usize, linear: usize, row: usize) -> (usize, C64) {
    let mut col = row;
    let mut phase = C64::new(1.0, 0.0);
    for q in 0..n {
        let d = digit_at(linear, q, n);
        let b = qubit_bit(row, q, n);
        let shift = n - 1 - q;
        match d {
            0 => {}
            1 => col ^= 1 << shift,
            2 => {
                col ^= 1 << shift;
                // σ_y = [[0, -i], [i, 0]]
                phase *= if b == 0 { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) };
            }
            _ => {
                if b == 1 {
                    phase = -phase;
                }
            }
        }
    }
    (col, phase)
}

/// `Λ_idx = λ_{d1} ⊗ … ⊗ λ_{dn}` with `λ_j = σ_j / √2`.
pub fn basis_element(idx: &MultiIndex) -> CMatrix {
    let n = idx.len();
    let d = 1usize << n;
    let scale = 1.0 / sqrt2_pow(n);
    let linear = idx.linear();
    let mut m = CMatrix::zeros(d, d);
    for r in 0..d {
        let (c, v) = pauli_row_entry(n, linear, r);
        m[(r, c)] = v * scale;
    }
    m
}

/// `ϱ^idx = tr(ρ Λ_idx)` for every multi-index.
pub fn to_stokes(rho: &HermitianOperator) -> StokesTensor {
    let n = rho.n;
    let d = 1usize << n;
    let scale = 1.0 / sqrt2_pow(n);
    let m = &rho.m;
    let values = (0..1usize << (2 * n))
        .map(|linear| {
            // tr(ρP) = Σ_b ρ[b^x, b] P[b, b^x]
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..d {
                let (c, p) = pauli_row_entry(n, linear, b);
                acc += m[(c, b)] * p;
            }
            acc.re * scale
        })
        .collect();
    let mut s = StokesTensor::from_parts(n, values);
    s.values[0] = scale;
    s
}

/// `ρ = Σ ϱ^idx Λ_idx`.
pub fn from_stokes(s: &StokesTensor) -> HermitianOperator {
    let n = s.n;
    let d = 1usize << n;
    let scale = 1.0 / sqrt2_pow(n);
    let mut m = CMatrix::zeros(d, d);
    for (linear, &v) in s.values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        for r in 0..d {
            let (c, p) = pauli_row_entry(n, linear, r);
            m[(r, c)] += p * (v * scale);
        }
    }
    HermitianOperator::from_parts(n, m)
}

// Position of λ_j inside a single-qubit real density matrix:
// λ0 → (0,0), λ1 → (1,0), λ2 → (0,1), λ3 → (1,1).
#[inline]
fn unfold_row(d: usize) -> usize {
    d & 1
}

#[inline]
fn unfold_col(d: usize) -> usize {
    d >> 1
}

/// Row and column of the real density matrix that hold Stokes component
/// `linear`.
#[inline]
pub(crate) fn unfold_position(linear: usize, n: usize) -> (usize, usize) {
    let (mut r, mut c) = (0, 0);
    for q in 0..n {
        let dq = digit_at(linear, q, n);
        r = (r << 1) | unfold_row(dq);
        c = (c << 1) | unfold_col(dq);
    }
    (r, c)
}

/// Real density matrix: `σ[row(idx), col(idx)] = 2^{n/2} ϱ^idx`.
pub fn to_real_density(s: &StokesTensor) -> RealDensityMatrix {
    let n = s.n;
    let d = 1usize << n;
    let scale = sqrt2_pow(n);
    let mut m = RMatrix::zeros(d, d);
    for (linear, &v) in s.values.iter().enumerate() {
        let (r, c) = unfold_position(linear, n);
        m[(r, c)] = v * scale;
    }
    RealDensityMatrix { n, m }
}

/// Column-stacks `σ` back into a Stokes tensor.
pub fn from_real_density(sigma: &RealDensityMatrix) -> Result<StokesTensor> {
    let n = sigma.n;
    let scale = 1.0 / sqrt2_pow(n);
    let values = (0..1usize << (2 * n))
        .map(|linear| {
            let (r, c) = unfold_position(linear, n);
            sigma.m[(r, c)] * scale
        })
        .collect();
    StokesTensor::new(n, values)
}

/// Two-qubit Stokes tensor as the 4×4 array `2ϱ^{jk}` (row `j`, column `k`).
pub fn stokes_as_matrix(s: &StokesTensor) -> Result<RMatrix> {
    if s.n != 2 {
        return dim(format!("Stokes matrix needs 2 qubits, got {}", s.n));
    }
    Ok(RMatrix::from_fn(4, 4, |j, k| 2.0 * s.values[4 * j + k]))
}

/// Rearranges a two-qubit real density matrix into the Stokes matrix by
/// column-stacking each qubit's 2×2 block index, i.e. the per-factor `col`
/// operation. Exactly inverts the unfolding on the Stokes side, so
/// `stokes_matrix_from_real_density(σ(s)) == stokes_as_matrix(s)`.
///
/// This is a qubit-wise relabelling of [`choi_reshuffle`]: the two agree up
/// to the fixed permutation that swaps Stokes digits 1 and 2 on each side,
/// and therefore share singular values.
pub fn stokes_matrix_from_real_density(sigma: &RealDensityMatrix) -> Result<RMatrix> {
    if sigma.n != 2 {
        return dim(format!("needs 2 qubits, got {}", sigma.n));
    }
    let m = &sigma.m;
    Ok(RMatrix::from_fn(4, 4, |j, k| {
        let row = (unfold_row(j) << 1) | unfold_row(k);
        let col = (unfold_col(j) << 1) | unfold_col(k);
        m[(row, col)]
    }))
}

/// Realignment of a `(da·db)×(da·db)` bipartite matrix into a `da²×db²`
/// matrix: `R[(i1,j1),(i2,j2)] = M[(i1,i2),(j1,j2)]`.
pub fn realign<T: Scalar + Copy>(m: &DMatrix<T>, da: usize, db: usize) -> Result<DMatrix<T>> {
    let d = da * db;
    if m.nrows() != d || m.ncols() != d {
        return dim(format!(
            "matrix is {}x{}, expected {d}x{d} for a {da}x{db} split",
            m.nrows(),
            m.ncols()
        ));
    }
    Ok(DMatrix::from_fn(da * da, db * db, |row, col| {
        let (i1, j1) = (row / da, row % da);
        let (i2, j2) = (col / db, col % db);
        m[(i1 * db + i2, j1 * db + j2)]
    }))
}

/// Self-inverse reshuffle of a square bipartite matrix with equal halves.
pub fn choi_reshuffle<T: Scalar + Copy>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    if m.nrows() != m.ncols() {
        return dim("reshuffle needs a square matrix");
    }
    let d2 = m.nrows();
    let d = (d2 as f64).sqrt().round() as usize;
    if d * d != d2 || d < 2 {
        return dim(format!("dimension {d2} is not a perfect square of a local dimension"));
    }
    realign(m, d, d)
}

/// Kronecker product; qubit counts add.
pub fn tensor_product(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    let n = a.n + b.n;
    check_qubits(n)?;
    Ok(HermitianOperator::from_parts(n, a.m.kronecker(&b.m)))
}

/// Matrix on `n` qubits equal to `a` on the qubits `first` (in that order)
/// tensored with `b` on the remaining qubits (ascending), laid out in the
/// standard qubit order.
pub fn place(n: usize, first: &[usize], a: &CMatrix, b: &CMatrix) -> CMatrix {
    let rest: Vec<usize> = (0..n).filter(|q| !first.contains(q)).collect();
    let d = 1usize << n;
    let gather = |idx: usize, qs: &[usize]| {
        qs.iter().fold(0usize, |acc, &q| (acc << 1) | qubit_bit(idx, q, n))
    };
    CMatrix::from_fn(d, d, |r, c| {
        a[(gather(r, first), gather(c, first))] * b[(gather(r, &rest), gather(c, &rest))]
    })
}

/// Reorders qubits so that new position `i` holds old qubit `order[i]`.
pub fn reorder_qubits(m: &CMatrix, n: usize, order: &[usize]) -> CMatrix {
    let d = 1usize << n;
    let map = |idx: usize| {
        order.iter().fold(0usize, |acc, &q| (acc << 1) | qubit_bit(idx, q, n))
    };
    let mut out = CMatrix::zeros(d, d);
    for r in 0..d {
        let nr = map(r);
        for c in 0..d {
            out[(nr, map(c))] = m[(r, c)];
        }
    }
    out
}

/// Partial trace of any `2^n × 2^n` matrix keeping `keep` (ascending order).
pub fn partial_trace_matrix(m: &CMatrix, n: usize, keep: &QubitSet) -> Result<CMatrix> {
    keep.check(n)?;
    if keep.is_empty() {
        return arg("partial trace must keep at least one qubit");
    }
    let traced = keep.complement(n);
    let k = keep.len();
    let t = traced.len();
    let dk = 1usize << k;
    let compose = |kept: usize, tr: usize| {
        let mut idx = 0usize;
        for q in 0..n {
            let bit = if let Ok(pos) = keep.members().binary_search(&q) {
                (kept >> (k - 1 - pos)) & 1
            } else {
                let pos = traced.members().binary_search(&q).unwrap();
                (tr >> (t - 1 - pos)) & 1
            };
            idx = (idx << 1) | bit;
        }
        idx
    };
    let mut out = CMatrix::zeros(dk, dk);
    for r in 0..dk {
        for c in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for x in 0..1usize << t {
                acc += m[(compose(r, x), compose(c, x))];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Reduced operator on the kept qubits.
pub fn partial_trace(rho: &HermitianOperator, keep: &QubitSet) -> Result<HermitianOperator> {
    let m = partial_trace_matrix(&rho.m, rho.n, keep)?;
    Ok(HermitianOperator::from_parts(keep.len(), m))
}

/// Stokes-side partial trace: keep components whose traced digits are all
/// zero and rescale by `√2` per traced qubit.
pub fn partial_trace_stokes(s: &StokesTensor, keep: &QubitSet) -> Result<StokesTensor> {
    let n = s.n;
    keep.check(n)?;
    if keep.is_empty() {
        return arg("partial trace must keep at least one qubit");
    }
    let m = keep.len();
    let scale = sqrt2_pow(n - m);
    let values = (0..1usize << (2 * m))
        .map(|sub| {
            let mut full = 0usize;
            for q in 0..n {
                let d = match keep.members().binary_search(&q) {
                    Ok(pos) => digit_at(sub, pos, m),
                    Err(_) => 0,
                };
                full = (full << 2) | d;
            }
            s.values[full] * scale
        })
        .collect();
    let mut out = StokesTensor::from_parts(m, values);
    out.values[0] = 1.0 / sqrt2_pow(m);
    Ok(out)
}

/// `Σ ϱ² = tr(ρ²)`.
pub fn purity(s: &StokesTensor) -> f64 {
    s.values.iter().map(|v| v * v).sum()
}

/// Real part of `tr(A B)` for Hermitian arguments.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.transpose().iter())
        .map(|(x, y)| (x * y).re)
        .sum()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `2^{-n} 1`.
pub fn maximally_mixed(n: usize) -> DensityState {
    let d = 1usize << n;
    DensityState::from_parts(n, CMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0))
}
