//! Dense complex linear algebra used as the numerical oracle.
//!
//! Conventions: z-basis Pauli matrices with qubit 0 as the most significant
//! tensor factor (leftmost letter of a Pauli string); spin-1 operators in
//! the `S_z = diag(1, 0, −1)` eigenbasis.

use std::collections::BTreeMap;

use log::warn;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::assign::{self, exhaustive_search, parity_certificate, ConstraintSystem, SearchOutcome};
use crate::pauli::{star_lines, Letter, PauliString};
use crate::sign::Sign;

pub const DIMENSIONS: [usize; 4] = [2, 3, 4, 8];
/// Hermiticity and commutation checks on inputs.
pub const INPUT_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as one degenerate level.
pub const LEVEL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("dimension {0} not in {{2, 3, 4, 8}}")]
    Dimension(usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("{0}")]
    Input(String),
    #[error("Pauli string on {0} qubits is too large for a dense matrix (max 3)")]
    TooManyQubits(usize),
    #[error(transparent)]
    Assign(#[from] assign::AssignError),
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_dim(d: usize) -> Result<(), VerifyError> {
    if DIMENSIONS.contains(&d) {
        Ok(())
    } else {
        Err(VerifyError::Dimension(d))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self, VerifyError> {
        if m.nrows() != m.ncols() {
            return Err(VerifyError::NotSquare(m.nrows(), m.ncols()));
        }
        check_dim(m.nrows())?;
        Ok(ComplexMatrix(m))
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self, VerifyError> {
        let n = rows.len();
        Self::new(DMatrix::from_fn(n, rows.first().map_or(0, |r| r.len()), |i, j| rows[i][j]))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Result<Self, VerifyError> {
        Self::new(DMatrix::from_diagonal(&DVector::from_iterator(d.len(), d.iter().map(|&x| c(x, 0.0)))))
    }

    pub fn identity(d: usize) -> Result<Self, VerifyError> {
        Self::new(DMatrix::identity(d, d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &other.0)
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &other.0)
    }

    pub fn scale(&self, s: f64) -> ComplexMatrix {
        ComplexMatrix(self.0.map(|z| z * s))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        (&self.0 - &other.0).norm()
    }

    pub fn commutator_norm(&self, other: &ComplexMatrix) -> f64 {
        (&self.0 * &other.0 - &other.0 * &self.0).norm()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        (&self.0 - self.0.adjoint()).norm()
    }

    pub fn apply(&self, v: &StateVector) -> DVector<Complex64> {
        &self.0 * &v.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(DVector<Complex64>);

impl StateVector {
    /// Normalizes `amps`; errors on a zero vector or unsupported dimension.
    pub fn new(amps: DVector<Complex64>) -> Result<Self, VerifyError> {
        check_dim(amps.len())?;
        let n = amps.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(VerifyError::Input("state has zero norm".into()));
        }
        Ok(StateVector(amps / c(n, 0.0)))
    }

    /// Gaussian-distributed amplitudes, normalized (Haar-random state).
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self, VerifyError> {
        let amps = DVector::from_fn(dim, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.0
    }
}

fn letter_matrix(l: Letter) -> DMatrix<Complex64> {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match l {
        Letter::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Letter::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Letter::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Letter::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Kronecker product of the letters times the phase.
pub fn pauli_to_matrix(p: &PauliString) -> Result<ComplexMatrix, VerifyError> {
    if p.num_qubits() > 3 {
        return Err(VerifyError::TooManyQubits(p.num_qubits()));
    }
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for l in p.letters() {
        m = m.kronecker(&letter_matrix(l));
    }
    let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase().exponent() as usize];
    ComplexMatrix::new(m * phase)
}

/// Spin-1 `S_x`, `S_y`, `S_z` in the `S_z` eigenbasis.
pub fn spin1_operators() -> [ComplexMatrix; 3] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (z, o) = (c(0.0, 0.0), c(r, 0.0));
    let (pi, mi) = (c(0.0, r), c(0.0, -r));
    let sx = DMatrix::from_row_slice(3, 3, &[z, o, z, o, z, o, z, o, z]);
    let sy = DMatrix::from_row_slice(3, 3, &[z, mi, z, pi, z, mi, z, pi, z]);
    let sz = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0, 0.0), z, c(-1.0, 0.0)]));
    [ComplexMatrix(sx), ComplexMatrix(sy), ComplexMatrix(sz)]
}

/// `S_u²` for direction `u`; eigenvalues 0, 1, 1. Non-unit input is
/// normalized with a warning.
pub fn spin1_squared(direction: [f64; 3]) -> Result<ComplexMatrix, VerifyError> {
    let n = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return Err(VerifyError::Input("spin direction must be nonzero".into()));
    }
    if (n - 1.0).abs() > 1e-12 {
        warn!("spin direction {direction:?} has norm {n}; normalizing");
    }
    let u = direction.map(|x| x / n);
    let [sx, sy, sz] = spin1_operators();
    let s = sx.scale(u[0]).add(&sy.scale(u[1])).add(&sz.scale(u[2]));
    Ok(s.mul(&s))
}

/// Ascending eigenvalues with matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

fn hermitian_eigen(m: &DMatrix<Complex64>) -> EigenDecomposition {
    let se = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, k| se.eigenvectors[(r, order[k])]);
    EigenDecomposition { values, vectors }
}

fn require_hermitian(m: &ComplexMatrix) -> Result<(), VerifyError> {
    let dev = m.hermitian_deviation();
    if dev > INPUT_TOL {
        return Err(VerifyError::NotHermitian(dev));
    }
    Ok(())
}

pub fn eigen_decomposition(m: &ComplexMatrix) -> Result<EigenDecomposition, VerifyError> {
    require_hermitian(m)?;
    Ok(hermitian_eigen(&m.0))
}

/// Real eigenvalues of a hermitian matrix, ascending.
pub fn eigen(m: &ComplexMatrix) -> Result<Vec<f64>, VerifyError> {
    Ok(eigen_decomposition(m)?.values)
}

/// A joint eigenspace of a commuting family, with the eigenvalue of each
/// member on it.
#[derive(Clone, Debug)]
pub struct JointBlock {
    /// Orthonormal basis as columns.
    pub basis: DMatrix<Complex64>,
    pub values: Vec<f64>,
}

/// Splits the space into joint eigenspaces of `ops` by successive
/// refinement: each member is restricted to the current blocks and its
/// eigenspaces split them further. The members must commute pairwise.
pub fn joint_spectrum(ops: &[&ComplexMatrix]) -> Result<Vec<JointBlock>, VerifyError> {
    let Some(first) = ops.first() else {
        return Err(VerifyError::Input("empty operator family".into()));
    };
    let d = first.dim();
    for (i, a) in ops.iter().enumerate() {
        if a.dim() != d {
            return Err(VerifyError::Input("operators of different dimension".into()));
        }
        require_hermitian(a)?;
        for b in &ops[i + 1..] {
            let cn = a.commutator_norm(b);
            if cn > INPUT_TOL {
                return Err(VerifyError::Input(format!("operators do not commute (‖[A,B]‖ = {cn:e})")));
            }
        }
    }
    let mut blocks = vec![JointBlock { basis: DMatrix::identity(d, d), values: Vec::new() }];
    for a in ops {
        let mut next = Vec::new();
        for b in blocks {
            let restricted = b.basis.adjoint() * &a.0 * &b.basis;
            let restricted = (&restricted + restricted.adjoint()) * c(0.5, 0.0);
            let eig = hermitian_eigen(&restricted);
            let mut start = 0;
            while start < eig.values.len() {
                let mut end = start + 1;
                while end < eig.values.len() && eig.values[end] - eig.values[end - 1] <= LEVEL_TOL {
                    end += 1;
                }
                let level = eig.values[start..end].iter().sum::<f64>() / (end - start) as f64;
                let sub = eig.vectors.columns(start, end - start);
                let mut values = b.values.clone();
                values.push(level);
                next.push(JointBlock { basis: &b.basis * sub, values });
                start = end;
            }
        }
        blocks = next;
    }
    Ok(blocks)
}

/// Outcome distribution of the first member of `family` in `state`,
/// obtained from the joint projectors of the whole family.
fn marginal(state: &StateVector, family: &[&ComplexMatrix]) -> Result<Vec<(f64, f64)>, VerifyError> {
    let blocks = joint_spectrum(family)?;
    let mut dist: Vec<(f64, f64)> = Vec::new();
    for b in &blocks {
        let p = (b.basis.adjoint() * &state.0).norm_squared();
        let level = b.values[0];
        match dist.iter_mut().find(|(v, _)| (v - level).abs() <= LEVEL_TOL) {
            Some(entry) => entry.1 += p,
            None => dist.push((level, p)),
        }
    }
    Ok(dist)
}

fn total_variation(p: &[(f64, f64)], q: &[(f64, f64)]) -> f64 {
    let mut levels: Vec<f64> = p.iter().chain(q).map(|&(v, _)| v).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|a, b| (*a - *b).abs() <= LEVEL_TOL);
    let mass = |d: &[(f64, f64)], v: f64| d.iter().filter(|(w, _)| (w - v).abs() <= LEVEL_TOL).map(|x| x.1).sum::<f64>();
    0.5 * levels.iter().map(|&v| (mass(p, v) - mass(q, v)).abs()).sum::<f64>()
}

/// Total-variation distance between the distributions of `a` measured
/// jointly with `ctx1` and jointly with `ctx2`.
pub fn marginal_invariance(
    state: &StateVector,
    a: &ComplexMatrix,
    ctx1: &[ComplexMatrix],
    ctx2: &[ComplexMatrix],
) -> Result<f64, VerifyError> {
    if a.dim() != state.dim() {
        return Err(VerifyError::Input("state and observable dimensions differ".into()));
    }
    let fam1: Vec<&ComplexMatrix> = std::iter::once(a).chain(ctx1).collect();
    let fam2: Vec<&ComplexMatrix> = std::iter::once(a).chain(ctx2).collect();
    let d1 = marginal(state, &fam1)?;
    let d2 = marginal(state, &fam2)?;
    Ok(total_variation(&d1, &d2))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingCheck {
    pub holds: bool,
    /// Distinct eigenvalues of `4A + 2B + C`, rounded.
    pub spectrum: Vec<u8>,
    /// Largest deviation of A, B, C from the decoded bits on each eigenspace.
    pub max_residual: f64,
}

/// Checks that each eigenvalue of `4A + 2B + C`, read as three binary
/// digits, gives the values of A, B and C on that eigenspace.
pub fn binary_encoding_check(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c_op: &ComplexMatrix,
) -> Result<EncodingCheck, VerifyError> {
    let ops = [a, b, c_op];
    for op in ops {
        if op.dim() != a.dim() {
            return Err(VerifyError::Input("operators of different dimension".into()));
        }
        let vals = eigen(op)?;
        if let Some(v) = vals.iter().find(|v| v.abs() > INPUT_TOL && (*v - 1.0).abs() > INPUT_TOL) {
            return Err(VerifyError::Input(format!("spectrum not within {{0, 1}}: found {v}")));
        }
    }
    // Joint decomposition doubles as the commutation check.
    joint_spectrum(&ops)?;
    let combo = a.scale(4.0).add(&b.scale(2.0)).add(&c_op.scale(1.0));
    let eig = hermitian_eigen(&combo.0);
    let mut holds = true;
    let mut max_residual: f64 = 0.0;
    let mut spectrum = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate() {
        let code = lambda.round();
        if (lambda - code).abs() > LEVEL_TOL || !(0.0..=7.0).contains(&code) {
            holds = false;
            continue;
        }
        let code = code as u8;
        spectrum.push(code);
        let v = eig.vectors.column(k);
        for (bit, op) in [(4u8, a), (2, b), (1, c_op)] {
            let expected = if code & bit != 0 { 1.0 } else { 0.0 };
            let r = (&op.0 * v - v * c(expected, 0.0)).norm();
            max_residual = max_residual.max(r);
        }
    }
    spectrum.sort_unstable();
    spectrum.dedup();
    holds &= max_residual <= LEVEL_TOL;
    Ok(EncodingCheck { holds, spectrum, max_residual })
}

/// `(|000⟩ + |111⟩)/√2`.
pub fn ghz_state() -> StateVector {
    let mut v = DVector::from_element(8, c(0.0, 0.0));
    v[0] = c(1.0, 0.0);
    v[7] = c(1.0, 0.0);
    StateVector::new(v).expect("nonzero")
}

/// Eigenvalue of `op` on an eigenvector `state`, with the residual
/// `‖op·ψ − λψ‖`.
pub fn eigen_residual(op: &ComplexMatrix, state: &StateVector) -> (f64, f64) {
    let applied = op.apply(state);
    let lambda = state.0.dotc(&applied).re;
    let r = (applied - &state.0 * c(lambda, 0.0)).norm();
    (lambda, r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhzEigen {
    pub observable: PauliString,
    pub eigenvalue: f64,
    pub sign: Sign,
    pub residual: f64,
}

/// Eigenvalues of the four three-body star observables on the GHZ state.
pub fn ghz_eigenvalues() -> Vec<GhzEigen> {
    let psi = ghz_state();
    let horizontal = star_lines().into_iter().find(|l| l.name == "horizontal").expect("star has a horizontal line");
    horizontal
        .members
        .iter()
        .map(|p| {
            let m = pauli_to_matrix(p).expect("three qubits");
            let (lambda, residual) = eigen_residual(&m, &psi);
            GhzEigen { observable: *p, eigenvalue: lambda, sign: Sign::from_bit(lambda < 0.0), residual }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhzContradiction {
    pub eigen: Vec<GhzEigen>,
    pub eigenvalue_product: Sign,
    pub system: ConstraintSystem,
    pub outcome: SearchOutcome,
    pub certificate: Option<Vec<usize>>,
    /// For each context, whether flipping only its target leaves a satisfiable system.
    pub flipped_satisfiable: Vec<bool>,
}

/// Value assignments to the six local observables `σˣ`, `σʸ` of each
/// particle, one context per non-horizontal star line with its target
/// fixed by the GHZ eigenvalue of that line's three-body observable.
pub fn ghz_contradiction() -> Result<GhzContradiction, VerifyError> {
    let eigen = ghz_eigenvalues();
    let sign_of = |p: &PauliString| eigen.iter().find(|e| e.observable == *p).map(|e| e.sign);
    let mut locals = Vec::new();
    for q in 0..3 {
        for l in [Letter::X, Letter::Y] {
            locals.push(PauliString::single(3, q, l).expect("3 qubits").to_string());
        }
    }
    let mut contexts = Vec::new();
    for line in star_lines().into_iter().filter(|l| l.name != "horizontal") {
        let (singles, triple): (Vec<PauliString>, Vec<PauliString>) =
            line.members.iter().partition(|p| p.letters().iter().filter(|&&l| l != Letter::I).count() == 1);
        let target = sign_of(&triple[0]).expect("three-body observable lies on the horizontal line");
        contexts.push((singles.iter().map(|p| p.to_string()).collect::<Vec<_>>(), target));
    }
    let system = ConstraintSystem::new(locals, &contexts)?;
    let outcome = exhaustive_search(&system)?;
    let certificate = parity_certificate(&system).map(|c| c.contexts);
    let flipped_satisfiable = (0..system.contexts().len())
        .map(|i| exhaustive_search(&system.with_flipped_target(i)).map(|o| !o.is_unsat()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GhzContradiction {
        eigenvalue_product: Sign::product(eigen.iter().map(|e| e.sign)),
        eigen,
        system,
        outcome,
        certificate,
        flipped_satisfiable,
    })
}

/// Random proper rotation from a normalized Gaussian quaternion; rows are
/// an orthonormal triad.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> [[f64; 3]; 3] {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / n);
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

/// Deviations for the spin-1 identity on one orthonormal triad.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spin1Check {
    pub triad: [[f64; 3]; 3],
    /// `‖S_u² + S_v² + S_w² − 2·I‖`.
    pub sum_deviation: f64,
    /// Largest pairwise commutator norm.
    pub max_commutator: f64,
}

pub fn spin1_triad_check(triad: [[f64; 3]; 3]) -> Result<Spin1Check, VerifyError> {
    let sq = triad.map(spin1_squared);
    let [a, b, c_op] = [sq[0].clone()?, sq[1].clone()?, sq[2].clone()?];
    let sum = a.add(&b).add(&c_op);
    let sum_deviation = sum.distance(&ComplexMatrix::identity(3)?.scale(2.0));
    let max_commutator = a.commutator_norm(&b).max(a.commutator_norm(&c_op)).max(b.commutator_norm(&c_op));
    Ok(Spin1Check { triad, sum_deviation, max_commutator })
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// R's diagonal moved into Q.
fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(d, d, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..d {
        let dk = r[(k, k)];
        let phase = if dk.norm() > 0.0 { dk / dk.norm() } else { c(1.0, 0.0) };
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    q
}

/// A state, an observable `a` with degenerate spectrum, and two contexts of
/// commuting observables that each commute with `a` but not with each other.
#[derive(Clone, Debug)]
pub struct MarginalInstance {
    pub state: StateVector,
    pub a: ComplexMatrix,
    pub ctx1: Vec<ComplexMatrix>,
    pub ctx2: Vec<ComplexMatrix>,
}

/// Random instance in dimension 4 or 8.
///
/// `a` has eigenspaces of dimension ≥ 2 in a random basis `U`. Each context
/// is two operators diagonal in `U·V`, where `V` is block diagonal with an
/// independent random unitary per eigenspace of `a`.
pub fn random_marginal_instance<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<MarginalInstance, VerifyError> {
    let blocks: &[usize] = match dim {
        4 => &[2, 2],
        8 => {
            if rng.random() {
                &[4, 4]
            } else {
                &[2, 2, 4]
            }
        }
        _ => return Err(VerifyError::Input(format!("marginal instances need dimension 4 or 8, got {dim}"))),
    };
    let u = random_unitary(dim, rng);
    let diag_in = |basis: &DMatrix<Complex64>, d: &[f64]| {
        let dm = DMatrix::from_diagonal(&DVector::from_iterator(dim, d.iter().map(|&x| c(x, 0.0))));
        let m = basis * dm * basis.adjoint();
        ComplexMatrix((&m + m.adjoint()) * c(0.5, 0.0))
    };
    let mut levels = Vec::with_capacity(dim);
    for (k, &size) in blocks.iter().enumerate() {
        levels.extend(std::iter::repeat_n(k as f64 + 1.0, size));
    }
    let a = diag_in(&u, &levels);
    let context = |rng: &mut R| {
        let mut v = DMatrix::zeros(dim, dim);
        let mut start = 0;
        for &size in blocks {
            v.view_mut((start, start), (size, size)).copy_from(&random_unitary(size, rng));
            start += size;
        }
        let basis = &u * v;
        (0..2)
            .map(|_| {
                let d: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                diag_in(&basis, &d)
            })
            .collect::<Vec<_>>()
    };
    let ctx1 = context(rng);
    let ctx2 = context(rng);
    Ok(MarginalInstance { state: StateVector::random(dim, rng)?, a, ctx1, ctx2 })
}

/// Eigenvalue table keyed by the rounded value, for reports.
pub fn eigenvalue_table(values: &[f64]) -> BTreeMap<String, usize> {
    let mut t = BTreeMap::new();
    for v in values {
        *t.entry(format!("{v:.10}")).or_insert(0) += 1;
    }
    t
}
