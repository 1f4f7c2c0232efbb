//! Ground-state oracles: dense diagonalization and matrix-free Lanczos.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng as _;

use super::Hamiltonian;
use crate::qsim::Statevector;
use crate::rng::{self, Stream};
use crate::{Error, Result, C64};

/// Largest width handled by [`ground_state`] through dense diagonalization.
pub const DENSE_MAX_QUBITS: usize = 10;
/// Largest width accepted by [`ground_state_dense`] when called directly.
const DENSE_HARD_LIMIT: usize = 12;

const LANCZOS_MAX_KRYLOV: usize = 300;
const LANCZOS_RESTARTS: usize = 20;
const RESIDUAL_TOL: f64 = 1e-9;

/// Lowest eigenpair of `h`: dense for `n ≤ 10`, Lanczos above.
pub fn ground_state(h: &Hamiltonian) -> Result<(f64, Statevector)> {
    if h.n_qubits() <= DENSE_MAX_QUBITS {
        ground_state_dense(h)
    } else {
        ground_state_lanczos(h)
    }
}

/// Lowest eigenpair through full dense diagonalization (`n ≤ 12`).
pub fn ground_state_dense(h: &Hamiltonian) -> Result<(f64, Statevector)> {
    let n = h.n_qubits();
    if n > DENSE_HARD_LIMIT {
        return Err(Error::Eigensolver(format!("dense path limited to {DENSE_HARD_LIMIT} qubits, got {n}")));
    }
    let dense = h.to_dense();
    let (energy, amps) = if h.is_real() {
        let m: DMatrix<f64> = dense.map(|c| c.re);
        let eig = SymmetricEigen::new(m);
        let k = argmin(eig.eigenvalues.as_slice());
        let v = eig.eigenvectors.column(k).iter().map(|&x| C64::new(x, 0.0)).collect();
        (eig.eigenvalues[k], v)
    } else {
        let eig = SymmetricEigen::new(dense);
        let k = argmin(eig.eigenvalues.as_slice());
        (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())
    };
    Ok((energy, Statevector::from_amplitudes(amps)?))
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Lowest eigenpair through restarted Lanczos with full reorthogonalization.
///
/// Never forms the matrix; each step applies `h` term by term. Restarts from
/// the current Ritz vector until `‖Hv − Ev‖ < 1e-9`.
pub fn ground_state_lanczos(h: &Hamiltonian) -> Result<(f64, Statevector)> {
    let dim = 1usize << h.n_qubits();
    let mut rng = rng::substream(0x1A2C_2005, Stream::Aux);
    let mut start: Vec<C64> = (0..dim).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let mut best = (f64::INFINITY, f64::INFINITY);
    for _ in 0..LANCZOS_RESTARTS {
        let (energy, vector) = lanczos_pass(h, &start)?;
        let residual = residual_norm(h, energy, &vector)?;
        best = (energy, residual);
        if residual < RESIDUAL_TOL {
            return Ok((energy, Statevector::from_amplitudes(vector)?));
        }
        start = vector;
    }
    Err(Error::Eigensolver(format!(
        "Lanczos did not converge: energy {}, residual {:e}",
        best.0, best.1
    )))
}

fn residual_norm(h: &Hamiltonian, energy: f64, v: &[C64]) -> Result<f64> {
    let hv = h.apply(v)?;
    Ok(hv.iter().zip(v).map(|(a, b)| (a - b * energy).norm_sqr()).sum::<f64>().sqrt())
}

fn normalize(v: &mut [C64]) -> f64 {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|a| *a /= norm);
    }
    norm
}

fn lanczos_pass(h: &Hamiltonian, start: &[C64]) -> Result<(f64, Vec<C64>)> {
    let dim = start.len();
    let k_max = LANCZOS_MAX_KRYLOV.min(dim);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(k_max);
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut v = start.to_vec();
    if normalize(&mut v) == 0.0 {
        return Err(Error::Eigensolver("zero start vector".into()));
    }
    let mut w = vec![C64::new(0.0, 0.0); dim];
    loop {
        h.apply_into(&v, &mut w);
        let a: f64 = v.iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum();
        alpha.push(a);
        basis.push(v.clone());
        // full reorthogonalization, twice for stability
        for _ in 0..2 {
            for b in &basis {
                let overlap: C64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                w.iter_mut().zip(b).for_each(|(y, x)| *y -= overlap * x);
            }
        }
        let norm = normalize(&mut w);
        if basis.len() >= k_max || norm < 1e-12 {
            break;
        }
        beta.push(norm);
        std::mem::swap(&mut v, &mut w);
    }
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let j = argmin(eig.eigenvalues.as_slice());
    let y = eig.eigenvectors.column(j);
    let mut ritz = vec![C64::new(0.0, 0.0); dim];
    for (coef, b) in y.iter().zip(&basis) {
        ritz.iter_mut().zip(b).for_each(|(r, x)| *r += x * *coef);
    }
    normalize(&mut ritz);
    let energy: f64 = {
        let hv = h.apply(&ritz)?;
        ritz.iter().zip(&hv).map(|(x, y)| (x.conj() * y).re).sum()
    };
    Ok((energy, ritz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{build_heisenberg_2d, build_ising_1d};

    #[test]
    fn single_z() {
        let mut h = Hamiltonian::new(1);
        h.add(1.0, "Z").unwrap();
        let (e, v) = ground_state(&h).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
        assert!((v.amplitudes()[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_site_singlet() {
        let h = build_heisenberg_2d(1, 2, 0.0, 1.0).unwrap();
        let (e, v) = ground_state(&h).unwrap();
        assert!((e + 3.0).abs() < 1e-12);
        let a = v.amplitudes();
        assert!((a[1] + a[2]).norm() < 1e-10);
        assert!(a[0].norm() < 1e-10 && a[3].norm() < 1e-10);
    }

    #[test]
    fn lanczos_matches_dense_on_small_chain() {
        let h = build_ising_1d(5, 1.0, 0.3).unwrap();
        let (ed, _) = ground_state_dense(&h).unwrap();
        let (el, _) = ground_state_lanczos(&h).unwrap();
        assert!((ed - el).abs() < 1e-9, "{ed} vs {el}");
    }
}
