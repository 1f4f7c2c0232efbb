//! Dense-matrix oracles built independently of the library's fast paths:
//! operators are assembled from textbook 2×2 blocks with explicit Kronecker
//! products (qubit 0 is the leftmost factor).

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use svqnhe::pauli::{Hamiltonian, Pauli, PauliString};
use svqnhe::qsim::{Gate, GateKind, Statevector};
use svqnhe::C64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn m2(a: [[C64; 2]; 2]) -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
}

pub fn pauli_2x2(p: Pauli) -> DMatrix<C64> {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => m2([[o, z], [z, o]]),
        Pauli::X => m2([[z, o], [o, z]]),
        Pauli::Y => m2([[z, -i], [i, z]]),
        Pauli::Z => m2([[o, z], [z, -o]]),
    }
}

/// `exp(−i θ/2 · σ)` for a single-qubit Pauli `σ`.
pub fn rotation(p: Pauli, theta: f64) -> DMatrix<C64> {
    let id = pauli_2x2(Pauli::I);
    let s = pauli_2x2(p);
    id * c((theta / 2.0).cos(), 0.0) - s * c(0.0, (theta / 2.0).sin())
}

pub fn kron_all(factors: &[DMatrix<C64>]) -> DMatrix<C64> {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

/// `op` on qubit `q` of `n`, identity elsewhere.
pub fn embed(n: usize, q: usize, op: &DMatrix<C64>) -> DMatrix<C64> {
    let f: Vec<DMatrix<C64>> = (0..n).map(|k| if k == q { op.clone() } else { pauli_2x2(Pauli::I) }).collect();
    kron_all(&f)
}

fn projector(bit: usize) -> DMatrix<C64> {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    if bit == 0 {
        m2([[o, z], [z, z]])
    } else {
        m2([[z, z], [z, o]])
    }
}

pub fn gate_1q(kind: GateKind, theta: f64) -> DMatrix<C64> {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let q = std::f64::consts::FRAC_PI_2;
    match kind {
        GateKind::H => m2([[h, h], [h, -h]]),
        GateKind::X => pauli_2x2(Pauli::X),
        GateKind::Y => pauli_2x2(Pauli::Y),
        GateKind::Z => pauli_2x2(Pauli::Z),
        GateKind::S => m2([[o, z], [z, c(0.0, 1.0)]]),
        GateKind::Sdg => m2([[o, z], [z, c(0.0, -1.0)]]),
        GateKind::Rx => rotation(Pauli::X, theta),
        GateKind::Ry => rotation(Pauli::Y, theta),
        GateKind::Rz => rotation(Pauli::Z, theta),
        GateKind::Xp => rotation(Pauli::X, q),
        GateKind::Xm => rotation(Pauli::X, -q),
        GateKind::Yp => rotation(Pauli::Y, q),
        GateKind::Ym => rotation(Pauli::Y, -q),
        k => panic!("{k:?} is not a single-qubit gate"),
    }
}

pub fn gate_matrix(n: usize, g: &Gate) -> DMatrix<C64> {
    let t = &g.targets;
    let theta = g.angle.unwrap_or(0.0);
    match g.kind {
        GateKind::Cnot => {
            let mut a: Vec<DMatrix<C64>> = (0..n).map(|_| pauli_2x2(Pauli::I)).collect();
            let mut b = a.clone();
            a[t[0]] = projector(0);
            b[t[0]] = projector(1);
            b[t[1]] = pauli_2x2(Pauli::X);
            kron_all(&a) + kron_all(&b)
        }
        GateKind::Cz => {
            let mut a: Vec<DMatrix<C64>> = (0..n).map(|_| pauli_2x2(Pauli::I)).collect();
            let mut b = a.clone();
            a[t[0]] = projector(0);
            b[t[0]] = projector(1);
            b[t[1]] = pauli_2x2(Pauli::Z);
            kron_all(&a) + kron_all(&b)
        }
        GateKind::Rzz => {
            let mut f: Vec<DMatrix<C64>> = (0..n).map(|_| pauli_2x2(Pauli::I)).collect();
            f[t[0]] = pauli_2x2(Pauli::Z);
            f[t[1]] = pauli_2x2(Pauli::Z);
            let zz = kron_all(&f);
            let id = DMatrix::<C64>::identity(1 << n, 1 << n);
            id * c((theta / 2.0).cos(), 0.0) - zz * c(0.0, (theta / 2.0).sin())
        }
        k => embed(n, t[0], &gate_1q(k, theta)),
    }
}

pub fn circuit_matrix(n: usize, gates: &[Gate]) -> DMatrix<C64> {
    gates.iter().fold(DMatrix::identity(1 << n, 1 << n), |acc, g| gate_matrix(n, g) * acc)
}

pub fn pauli_matrix(p: &PauliString) -> DMatrix<C64> {
    let f: Vec<DMatrix<C64>> = p.ops().into_iter().map(pauli_2x2).collect();
    kron_all(&f) * p.phase()
}

pub fn hamiltonian_matrix(h: &Hamiltonian) -> DMatrix<C64> {
    let d = 1 << h.n_qubits();
    h.terms().iter().fold(DMatrix::zeros(d, d), |acc, t| acc + pauli_matrix(&t.pauli) * c(t.coeff, 0.0))
}

pub fn vector(state: &Statevector) -> DVector<C64> {
    DVector::from_column_slice(state.amplitudes())
}

pub fn zero_vector(n: usize) -> DVector<C64> {
    let mut v = DVector::zeros(1 << n);
    v[0] = c(1.0, 0.0);
    v
}

/// `⟨v|M|v⟩ / ⟨v|v⟩` (real part).
pub fn rayleigh(m: &DMatrix<C64>, v: &DVector<C64>) -> f64 {
    let num = (v.adjoint() * m * v)[(0, 0)].re;
    num / v.norm_squared()
}

/// Lowest eigenvalue of a Hermitian matrix through its real symmetric
/// embedding `[[Re, −Im], [Im, Re]]` (each eigenvalue appears twice).
pub fn lowest_eigenvalue(m: &DMatrix<C64>) -> f64 {
    let d = m.nrows();
    let mut r = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let z = m[(i, j)];
            r[(i, j)] = z.re;
            r[(i + d, j + d)] = z.re;
            r[(i, j + d)] = -z.im;
            r[(i + d, j)] = z.im;
        }
    }
    r.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Random gate from the full gate set on `n ≥ 2` qubits.
pub fn random_gate(n: usize, rng: &mut impl rand::Rng) -> Gate {
    let kinds = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Xp,
        GateKind::Xm,
        GateKind::Yp,
        GateKind::Ym,
        GateKind::Rzz,
        GateKind::Cnot,
        GateKind::Cz,
    ];
    let kind = kinds[rng.random_range(0..kinds.len())];
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    let theta = rng.random_range(-4.0..4.0);
    match kind {
        GateKind::Rzz => Gate::rzz(a, b, theta),
        GateKind::Cnot => Gate::cnot(a, b),
        GateKind::Cz => Gate::cz(a, b),
        GateKind::Rx | GateKind::Ry | GateKind::Rz => Gate::new(kind, vec![a], Some(theta)),
        k => Gate::fixed(k, a),
    }
}

/// Central finite difference of `f` at `x` along coordinate `i`.
pub fn central_difference(x: &[f64], i: usize, h: f64, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    xp[i] += h;
    xm[i] -= h;
    (f(&xp) - f(&xm)) / (2.0 * h)
}

/// `|a − b| ≤ tol · max(|b|, floor)`.
pub fn rel_close(a: f64, b: f64, tol: f64, floor: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(floor)
}

/// Density-matrix channel `ρ → (1 − p)ρ + p · Tr_q(ρ) ⊗ I/2` on qubit `q`.
pub fn depolarize(rho: &DMatrix<C64>, n: usize, q: usize, p: f64) -> DMatrix<C64> {
    // Tr_q(ρ) ⊗ I/2 = ¼ Σ_σ σ_q ρ σ_q
    let mut twirl = DMatrix::zeros(rho.nrows(), rho.ncols());
    for s in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
        let sq = embed(n, q, &pauli_2x2(s));
        twirl += &sq * rho * &sq * C64::new(0.25, 0.0);
    }
    rho * C64::new(1.0 - p, 0.0) + twirl * C64::new(p, 0.0)
}
