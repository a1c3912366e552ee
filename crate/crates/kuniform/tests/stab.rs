mod common;

use common::*;
use proptest::prelude::*;

use kuniform::circuits::{assemble_hybrid, gen_color_kuniform, Op, Program};
use kuniform::codes::{build_code, CodeId};
use kuniform::stab::*;

fn p(s: &str) -> PauliString {
    s.parse().unwrap()
}

fn state(gens: &[&str]) -> StabilizerTableau {
    StabilizerTableau::from_stabilizers(&gens.iter().map(|g| p(g)).collect::<Vec<_>>()).unwrap()
}

fn dense_rows(rows: &[&[u8]]) -> Vec<Vec<u8>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

#[test]
fn hadamard_maps_zero_to_plus() {
    let mut t: StabilizerTableau = StabilizerTableau::new(1);
    t.apply(&Clifford::H(0)).unwrap();
    assert!(t.same_state(&state(&["X"])));
}

#[test]
fn cnot_makes_bell_pair() {
    let mut t = state(&["XI", "IZ"]);
    t.apply(&Clifford::Cnot(0, 1)).unwrap();
    assert!(t.same_state(&state(&["XX", "ZZ"])));
}

#[test]
fn gate_errors() {
    let mut t: StabilizerTableau = StabilizerTableau::new(2);
    assert_eq!(
        t.apply(&Clifford::H(2)),
        Err(StabError::QubitOutOfRange { index: 2, n: 2 })
    );
    assert_eq!(t.apply(&Clifford::Cnot(1, 1)), Err(StabError::SameQubit(1)));
    assert_eq!(t.apply(&Clifford::Cz(0, 0)), Err(StabError::SameQubit(0)));
    assert!(t.measure_z(3, || false).is_err());
}

#[test]
fn measuring_zero_is_deterministic() {
    let mut t: StabilizerTableau = StabilizerTableau::new(1);
    let m = t.measure_z(0, || panic!("no coin needed")).unwrap();
    assert!(m.deterministic);
    assert!(!m.outcome);
}

#[test]
fn bell_measurement_outcomes_agree() {
    for first in [0, 1] {
        for coin in [false, true] {
            let mut t = state(&["XX", "ZZ"]);
            let a = t.measure_z(first, || coin).unwrap();
            assert!(!a.deterministic);
            assert_eq!(a.outcome, coin);
            let b = t.measure_z(1 - first, || panic!("determined")).unwrap();
            assert!(b.deterministic);
            assert_eq!(b.outcome, coin);
            assert!(t.is_stabilized_by(&p("ZZ")).unwrap());
        }
    }
}

#[test]
fn appendix_ranks() {
    let m = BinarySymplecticMatrix::from_dense(
        2,
        &dense_rows(&[
            &[0, 1, 1, 0],
            &[1, 0, 0, 1],
            &[0, 0, 0, 1],
            &[1, 1, 0, 0],
            &[0, 0, 1, 1],
        ]),
    );
    assert_eq!(gf2_rank(&m), 4);
    let zero = BinarySymplecticMatrix::from_dense(3, &vec![vec![0; 6]; 3]);
    assert_eq!(gf2_rank(&zero), 0);
    let id = BinarySymplecticMatrix::from_dense(
        2,
        &dense_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
    );
    assert_eq!(gf2_rank(&id), 4);
}

fn five_qubit_zero_matrix() -> BinarySymplecticMatrix {
    let c = build_code(CodeId::FiveQubit).unwrap();
    let gens: Vec<PauliString> = c.stabilizers.iter().chain(&c.logical_z).cloned().collect();
    BinarySymplecticMatrix::from_paulis(&gens).unwrap()
}

#[test]
fn five_qubit_restriction_matches_worked_example() {
    let m = five_qubit_zero_matrix();
    assert_eq!(
        m.to_dense(),
        dense_rows(&[
            &[1, 0, 0, 1, 0, 0, 1, 1, 0, 0],
            &[0, 1, 0, 0, 1, 0, 0, 1, 1, 0],
            &[1, 0, 1, 0, 0, 0, 0, 0, 1, 1],
            &[0, 1, 0, 1, 0, 1, 0, 0, 0, 1],
            &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1],
        ])
    );
    let r = restrict_columns(&m, &[1, 3]).unwrap();
    assert_eq!(
        r.to_dense(),
        dense_rows(&[
            &[0, 1, 1, 0],
            &[1, 0, 0, 1],
            &[0, 0, 0, 1],
            &[1, 1, 0, 0],
            &[0, 0, 1, 1]
        ])
    );
    assert_eq!(gf2_rank(&r), 4);
    assert_eq!(restrict_columns(&m, &[0, 1, 2, 3, 4]).unwrap(), m);
}

#[test]
fn ghz3_restriction() {
    let m = BinarySymplecticMatrix::from_paulis(&[p("XXX"), p("ZZI"), p("IZZ")]).unwrap();
    let r = restrict_columns(&m, &[0, 1]).unwrap();
    assert_eq!(r.to_dense(), dense_rows(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]]));
}

#[test]
fn restriction_errors() {
    let m = five_qubit_zero_matrix();
    assert_eq!(restrict_columns(&m, &[1, 1]), Err(StabError::DuplicateQubit(1)));
    assert_eq!(
        restrict_columns(&m, &[5]),
        Err(StabError::QubitOutOfRange { index: 5, n: 5 })
    );
}

#[test]
fn group_membership_examples() {
    let bell = [p("XX"), p("ZZ")];
    assert!(pauli_in_group(&p("II"), &bell).unwrap());
    assert!(pauli_in_group(&p("XX"), &bell).unwrap());
    assert!(pauli_in_group(&p("-YY"), &bell).unwrap());
    assert!(!pauli_in_group(&p("XI"), &bell).unwrap());
    assert!(pauli_in_group(&p("XXX"), &bell).is_err());
}

#[test]
fn five_qubit_group_by_enumeration() {
    let c = build_code(CodeId::FiveQubit).unwrap();
    let gens: Vec<PauliString> = c.stabilizers.iter().chain(&c.logical_z).cloned().collect();
    let mut elements = std::collections::HashSet::new();
    for mask in 0u32..32 {
        let mut acc = PauliString::identity(5);
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = acc.mul(g);
            }
        }
        assert!(pauli_in_group(&acc, &gens).unwrap());
        elements.insert(acc.unsigned());
    }
    assert_eq!(elements.len(), 32);
    // Every one of the 4^5 unsigned Paulis is a member iff it was enumerated.
    for code in 0u32..1024 {
        let mut q = PauliString::identity(5);
        for i in 0..5 {
            q.set(i, ['I', 'X', 'Y', 'Z'][(code >> (2 * i) & 3) as usize]);
        }
        assert_eq!(pauli_in_group(&q, &gens).unwrap(), elements.contains(&q), "{q}");
        if q.weight() == 1 {
            assert!(!elements.contains(&q));
        }
    }
}

#[test]
fn frame_through_cnot() {
    let mut f = PauliFrame::new(2);
    f.inject(&p("XI"));
    f.apply(&Clifford::Cnot(0, 1));
    assert_eq!(f.error.unsigned(), p("XX"));
    let mut g = PauliFrame::new(2);
    g.inject(&p("ZI"));
    g.apply(&Clifford::Cnot(0, 1));
    assert_eq!(g.error.unsigned(), p("ZI"));
    assert!(g.measure_x(0));
    assert!(!g.measure_z(0));
}

#[test]
fn conjugation_matches_dense_matrices() {
    let mut r = rng(11);
    for n in 1..=3 {
        for _ in 0..200 {
            let g = random_gate(n, &mut r);
            let q = random_pauli(n, &mut r);
            let mut out = q.clone();
            g.conjugate(&mut out);
            let u = dense_gate(&g, n);
            let expect = &u * dense_pauli(&q) * u.adjoint();
            assert!(approx_eq(&dense_pauli(&out), &expect), "{g} on {q} gave {out}");
        }
    }
}

#[test]
fn pauli_products_match_dense_matrices() {
    let mut r = rng(12);
    for _ in 0..200 {
        let a = random_pauli(3, &mut r);
        let b = random_pauli(3, &mut r);
        let (imag, prod) = a.mul_with_phase(&b);
        let lhs = dense_pauli(&a) * dense_pauli(&b);
        let mut rhs = dense_pauli(&prod);
        if imag {
            rhs *= num_complex::Complex64::new(0.0, 1.0);
        }
        assert!(approx_eq(&lhs, &rhs), "{a} * {b}");
    }
}

#[test]
fn tableau_rows_are_symplectic() {
    let mut r = rng(13);
    for n in 1..=8 {
        let t = random_state(n, &mut r);
        assert!(t.is_consistent());
        let s = t.stabilizers();
        for i in 0..n {
            let d = t.destabilizer(i);
            for (j, sj) in s.iter().enumerate() {
                assert_eq!(d.commutes(sj), i != j);
            }
        }
        assert_eq!(gf2_rank(&t.symplectic_matrix()), n);
    }
}

#[test]
fn measurement_state_matches_dense_projection() {
    let mut r = rng(14);
    for n in 1..=4 {
        for _ in 0..20 {
            let t = random_state(n, &mut r);
            let q = r.random_range(0..n);
            let coin: bool = r.random();
            let mut after = t.clone();
            let m = after.measure_z(q, || coin).unwrap();
            let proj = {
                let zq = dense_pauli(&PauliString::single(n, q, 'Z'));
                let id = Mat::identity(1 << n, 1 << n);
                let s = if m.outcome { -1.0 } else { 1.0 };
                (id + zq * num_complex::Complex64::new(s, 0.0)) * num_complex::Complex64::new(0.5, 0.0)
            };
            let rho = density(&t);
            let projected = &proj * &rho * &proj;
            let prob = projected.trace().re;
            assert!(prob > 1e-9);
            if m.deterministic {
                assert!((prob - 1.0).abs() < 1e-9);
            } else {
                assert!((prob - 0.5).abs() < 1e-9);
            }
            let expect = projected / num_complex::Complex64::new(prob, 0.0);
            assert!(approx_eq(&density(&after), &expect));
        }
    }
}

use rand::Rng;

/// Runs `p` from `init`, giving random measurement `i` the outcome
/// `forced(i)` and injecting `fault` after operation `at`.
fn run_with_fault(
    prog: &Program,
    init: &StabilizerTableau,
    at: Option<(usize, &PauliString)>,
    forced: &dyn Fn(usize) -> bool,
) -> (StabilizerTableau, Vec<Measurement<bool>>) {
    let mut t = init.clone();
    let mut rec: Vec<Measurement<bool>> = Vec::new();
    for (i, op) in prog.ops().enumerate() {
        match op {
            Op::Gate(g) => t.apply(g).unwrap(),
            Op::Measure { qubit, basis, index } => {
                let m = match basis {
                    kuniform::circuits::MeasBasis::Z => t.measure_z(*qubit, || forced(*index)),
                    kuniform::circuits::MeasBasis::X => t.measure_x(*qubit, || forced(*index)),
                }
                .unwrap();
                rec.push(m);
            }
            Op::Cond { qubit, pauli, parity } => {
                let fire = parity.iter().fold(false, |a, &j| a ^ rec[j].outcome);
                t.apply_pauli_if(&PauliString::single(t.n(), *qubit, *pauli), &fire)
                    .unwrap();
            }
        }
        if let Some((pos, f)) = at {
            if pos == i {
                t.apply_pauli(f).unwrap();
            }
        }
    }
    (t, rec)
}

#[test]
fn frame_agrees_with_tableau_for_single_faults() {
    let code = build_code(CodeId::Color422).unwrap();
    let h = assemble_hybrid(&code, &gen_color_kuniform(1, 2).unwrap()).unwrap();
    let prog = Program::compile(&h.circuit);
    let n = prog.n_qubits;
    let mut r = rng(15);
    let coins: Vec<bool> = (0..prog.n_measurements).map(|_| r.random()).collect();
    let (reference, ref_rec) = run_with_fault(&prog, &h.init, None, &|i| coins[i]);
    let ops: Vec<&Op> = prog.ops().collect();
    let mut checked = 0;
    for at in 0..ops.len() {
        for q in 0..n {
            for letter in ['X', 'Y', 'Z'] {
                let fault = PauliString::single(n, q, letter);
                let mut frame = PauliFrame::new(n);
                for (i, op) in ops.iter().enumerate() {
                    kuniform::circuits::propagate(&mut frame, op);
                    if i == at {
                        frame.inject(&fault);
                    }
                }
                let flips = frame.flipped_measurements.clone();
                let (faulted, rec) = run_with_fault(&prog, &h.init, Some((at, &fault)), &|i| coins[i] ^ flips[i]);
                for (i, m) in rec.iter().enumerate() {
                    assert_eq!(m.outcome, ref_rec[i].outcome ^ flips[i], "fault {fault} after op {at}");
                }
                let mut expect = reference.clone();
                expect.apply_pauli(&frame.error).unwrap();
                assert!(faulted.same_state(&expect), "fault {fault} after op {at}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugated_generators_stabilize_result(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let t = random_state(n, &mut r);
        let g = random_gate(n, &mut r);
        let mut after = t.clone();
        after.apply(&g).unwrap();
        for mut s in t.stabilizers() {
            g.conjugate(&mut s);
            prop_assert!(after.is_stabilized_by(&s).unwrap());
        }
    }

    #[test]
    fn rank_matches_subset_enumeration(seed in any::<u64>(), m in 1usize..=12, n in 1usize..=5) {
        let mut r = rng(seed);
        let rows: Vec<Vec<u8>> = (0..m).map(|_| (0..2 * n).map(|_| r.random_range(0..2)).collect()).collect();
        let mat = BinarySymplecticMatrix::from_dense(n, &rows);
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..1 << m {
            let mut acc = vec![0u8; 2 * n];
            for (i, row) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (a, b) in acc.iter_mut().zip(row) {
                        *a ^= b;
                    }
                }
            }
            span.insert(acc);
        }
        let rank = span.len().trailing_zeros() as usize;
        prop_assert_eq!(gf2_rank(&mat), rank);
        prop_assert_eq!(mat.to_dense(), rows);
    }

    #[test]
    fn restriction_never_raises_rank(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let t = random_state(n, &mut r);
        let m = t.symplectic_matrix();
        let subset: Vec<usize> = (0..n).filter(|_| r.random()).collect();
        let rm = restrict_columns(&m, &subset).unwrap();
        prop_assert!(gf2_rank(&rm) <= gf2_rank(&m).min(2 * subset.len()));
    }

    #[test]
    fn repeated_measurement_is_stable(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let mut t = random_state(n, &mut r);
        let q = r.random_range(0..n);
        let coin: bool = r.random();
        let first = t.measure_z(q, || coin).unwrap();
        let second = t.measure_z(q, || panic!("second measurement is determined")).unwrap();
        prop_assert!(second.deterministic);
        prop_assert_eq!(first.outcome, second.outcome);
    }

    #[test]
    fn frame_matches_tableau_with_two_faults(seed in any::<u64>(), n in 2usize..=8) {
        let mut r = rng(seed);
        let init = random_state(n, &mut r);
        let gates = random_circuit(n, 20, &mut r);
        let at = [r.random_range(0..gates.len()), r.random_range(0..gates.len())];
        let faults = [random_pauli(n, &mut r), random_pauli(n, &mut r)];
        let mut t = init.clone();
        let mut frame = PauliFrame::new(n);
        for (i, g) in gates.iter().enumerate() {
            t.apply(g).unwrap();
            frame.apply(g);
            for j in 0..2 {
                if at[j] == i {
                    t.apply_pauli(&faults[j]).unwrap();
                    frame.inject(&faults[j]);
                }
            }
        }
        let mut clean = init.clone();
        clean.apply_all(&gates).unwrap();
        clean.apply_pauli(&frame.error).unwrap();
        prop_assert!(t.same_state(&clean));
    }
}
