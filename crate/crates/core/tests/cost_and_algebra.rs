use rand::seq::SliceRandom;
use svqnhe::ansatz::{build_hea, build_sign_ansatz, Circuit};
use svqnhe::estimator::{build_measurement_plan, build_plan_for_block, vqe_circuits_per_iteration};
use svqnhe::liealg::{closure_dimension, compare_generator_sets, generators_individual};
use svqnhe::pauli::{build_j1j2_1d, MaxCutEncoding};
use svqnhe::qsim::GateKind;
use svqnhe::rng::{substream, Stream};

/// Bonds of an open J1-J2 chain: `n − 1` nearest and `n − 2` next-nearest.
fn bond_counts(n: usize) -> (usize, usize) {
    (n - 1, n - 2)
}

#[test]
fn j1j2_circuit_counts_follow_the_bond_formula() {
    for n in 3..=8 {
        let h = build_j1j2_1d(n, 1.0, 0.6, 1.0, 1.0, 0.0).unwrap();
        let ansatz = build_sign_ansatz(n, &h.interaction_edges(), 1).unwrap();
        let plan = build_measurement_plan(&h, &ansatz, 1).unwrap();
        let (n1, n2) = bond_counts(n);
        assert_eq!(plan.circuit_count, 3 * (n1 + n2) + 1, "n={n}");
        assert_eq!(plan.circuit_count, plan.bases.len());
    }
    let h = build_j1j2_1d(6, 1.0, 0.6, 1.0, 1.0, 0.0).unwrap();
    let plan = build_measurement_plan(&h, &build_sign_ansatz(6, &h.interaction_edges(), 1).unwrap(), 1).unwrap();
    assert_eq!(plan.circuit_count, 28);
}

#[test]
fn extra_diagonal_parameters_cost_no_extra_circuits() {
    let n = 6;
    let h = build_j1j2_1d(n, 1.0, 0.6, 1.0, 1.0, 0.0).unwrap();
    let base = build_measurement_plan(&h, &build_sign_ansatz(n, &h.interaction_edges(), 1).unwrap(), 1).unwrap();
    // every pair, twice over, plus repeated single-qubit Rz
    let mut w = Circuit::new(n);
    for rep in 0..2 {
        for q in 0..n {
            w.push_param(GateKind::Rz, &[q], &format!("z{rep}_{q}"), 1.0);
        }
        for a in 0..n {
            for b in a + 1..n {
                w.push_param(GateKind::Rzz, &[a, b], &format!("zz{rep}_{a}_{b}"), 1.0);
            }
        }
    }
    let dense = build_plan_for_block(&h, &w).unwrap();
    assert!(dense.shifted_terms.len() > base.shifted_terms.len());
    assert_eq!(dense.circuit_count, base.circuit_count);
    // a circuit-only VQE pays per parameter
    let hea = build_hea(n, 2).unwrap();
    assert!(vqe_circuits_per_iteration(&h, &hea) > base.circuit_count);
}

#[test]
fn encoding_capacities() {
    assert_eq!(MaxCutEncoding::capacity(17, 2), 408);
    assert_eq!(MaxCutEncoding::capacity(30, 2), 1305);
    assert_eq!(MaxCutEncoding::capacity(17, 3), 2040);
    assert_eq!(MaxCutEncoding::capacity(30, 3), 12180);
}

#[test]
fn lie_algebra_dimensions() {
    for n in 2..=4 {
        let c = compare_generator_sets(n, 2).unwrap();
        assert_eq!(c.dim_g1, 2 * (4usize.pow(n as u32 - 1) - 1), "n={n}");
        assert!(c.dim_g1 < 4usize.pow(n as u32));
        if n >= 3 {
            assert!(c.g2_smaller, "n={n}: {} vs {}", c.dim_g2, c.dim_g1);
        }
    }
}

#[test]
fn closure_is_order_independent() {
    let mut gens = generators_individual(3, 2).unwrap();
    let reference = closure_dimension(&gens, 3).unwrap();
    let mut rng = substream(3, Stream::Aux);
    for _ in 0..5 {
        gens.shuffle(&mut rng);
        assert_eq!(closure_dimension(&gens, 3).unwrap(), reference);
    }
}
