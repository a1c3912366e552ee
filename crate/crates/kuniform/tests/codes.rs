mod common;

use common::*;
use proptest::prelude::*;

use kuniform::codes::*;
use kuniform::stab::{BinarySymplecticMatrix, Clifford, PauliString, StabilizerTableau};
use kuniform::uniformity::verify;

fn all_codes() -> Vec<CodeSpec> {
    [
        CodeId::FiveQubit,
        CodeId::Steane713,
        CodeId::Color422,
        CodeId::Surface(2),
        CodeId::Surface(3),
        CodeId::Surface(4),
        CodeId::Surface(5),
    ]
    .into_iter()
    .map(|id| build_code(id).unwrap())
    .collect()
}

/// Logical Clifford circuit of a table entry on `blocks · kappa` qubits.
fn logical_circuit(g: &LogicalGate, kappa: usize) -> Vec<Clifford> {
    match *g {
        LogicalGate::X(i) => vec![Clifford::X(i)],
        LogicalGate::Z(i) => vec![Clifford::Z(i)],
        LogicalGate::H => (0..kappa).map(Clifford::H).collect(),
        LogicalGate::Cz(a, b) => vec![Clifford::Cz(a, b)],
        LogicalGate::Cnot => (0..kappa).map(|i| Clifford::Cnot(i, kappa + i)).collect(),
    }
}

#[test]
fn parameters_and_invariants() {
    for c in all_codes() {
        assert_eq!(c.stabilizers.len(), c.n - c.kappa, "{}", c.id);
        let m = BinarySymplecticMatrix::from_paulis(&c.stabilizers).unwrap();
        assert_eq!(m.rank(), c.n - c.kappa, "{} generators independent", c.id);
        for (i, s) in c.stabilizers.iter().enumerate() {
            for t in &c.stabilizers[i + 1..] {
                assert!(s.commutes(t));
            }
            for l in c.logical_x.iter().chain(&c.logical_z) {
                assert!(s.commutes(l));
            }
        }
        for i in 0..c.kappa {
            for j in 0..c.kappa {
                assert_eq!(c.logical_x[i].commutes(&c.logical_z[j]), i != j, "{}", c.id);
                assert!(c.logical_x[i].commutes(&c.logical_x[j]));
                assert!(c.logical_z[i].commutes(&c.logical_z[j]));
            }
        }
    }
    let s3 = build_code(CodeId::Surface(3)).unwrap();
    assert_eq!((s3.n, s3.kappa, s3.d), (9, 1, 3));
    let color = build_code(CodeId::Color422).unwrap();
    assert_eq!((color.n, color.kappa, color.d), (4, 2, 2));
}

#[test]
fn distance_by_exhaustive_search() {
    for c in all_codes() {
        assert_eq!(c.min_logical_weight(c.n), Some(c.d), "{}", c.id);
    }
}

#[test]
fn unsupported_ids() {
    assert!(build_code(CodeId::Surface(1)).is_err());
    assert!(build_code(CodeId::Surface(6)).is_err());
    assert!("surface:9".parse::<CodeId>().map_or(true, |id| build_code(id).is_err()));
    assert!("hypercube".parse::<CodeId>().is_err());
}

#[test]
fn ids_round_trip_through_strings() {
    for (s, id) in [
        ("five_qubit", CodeId::FiveQubit),
        ("steane713", CodeId::Steane713),
        ("surface:3", CodeId::Surface(3)),
        ("color422", CodeId::Color422),
    ] {
        assert_eq!(s.parse::<CodeId>().unwrap(), id);
        assert_eq!(id.to_string(), s);
    }
}

#[test]
fn five_qubit_state_is_two_uniform() {
    let c = build_code(CodeId::FiveQubit).unwrap();
    for basis in [Basis::Zero, Basis::Plus] {
        let t = c.encoded_state(basis, 1).unwrap();
        assert!(verify(&t, 2, 1).unwrap().is_exact());
    }
    assert_eq!(c.logical_x[0].weight(), 5);
    assert!(!c.logical_x[0].commutes(&c.logical_z[0]));
}

#[test]
fn color_plus_state() {
    let c = build_code(CodeId::Color422).unwrap();
    let t = c.encoded_state(Basis::Plus, 1).unwrap();
    for s in ["IXIX", "IIXX", "XXXX", "ZZZZ"] {
        assert!(t.is_stabilized_by(&s.parse().unwrap()).unwrap(), "{s}");
    }
}

#[test]
fn encoded_zero_reads_zero() {
    for c in all_codes() {
        for blocks in 1..=3 {
            let mut t = c.encoded_state(Basis::Zero, blocks).unwrap();
            let n = t.n();
            for b in 0..blocks {
                for lz in &c.logical_z {
                    let p = lz.embed(n, b * c.n);
                    let m = t.measure_pauli(&p, || panic!("logical Z is determined")).unwrap();
                    assert!(m.deterministic);
                    assert!(!m.outcome, "{}", c.id);
                }
            }
        }
    }
}

#[test]
fn transversal_gates_enact_their_logical_action() {
    let mut r = rng(31);
    for c in all_codes() {
        for g in c.transversal_table.keys() {
            let blocks = g.blocks();
            for _ in 0..10 {
                let logical = random_state(blocks * c.kappa, &mut r);
                let mut physical = c.encode_state(&logical).unwrap();
                let placed: Vec<usize> = (0..blocks).collect();
                physical.apply_all(&c.transversal(g, &placed).unwrap()).unwrap();
                let mut after = logical.clone();
                after.apply_all(&logical_circuit(g, c.kappa)).unwrap();
                assert!(physical.same_state(&c.encode_state(&after).unwrap()), "{} {g}", c.id);
            }
        }
    }
}

#[test]
fn transversal_placement() {
    let s3 = build_code(CodeId::Surface(3)).unwrap();
    let gates = s3.transversal(&LogicalGate::Cnot, &[0, 1]).unwrap();
    assert_eq!(gates, (0..9).map(|q| Clifford::Cnot(q, 9 + q)).collect::<Vec<_>>());
    let shifted = s3.transversal(&LogicalGate::Cnot, &[2, 1]).unwrap();
    assert_eq!(shifted[0], Clifford::Cnot(18, 9));
    assert!(matches!(
        s3.transversal(&LogicalGate::H, &[0]),
        Err(CodeError::NotTransversal { .. })
    ));
    assert!(matches!(
        s3.transversal(&LogicalGate::Cnot, &[0]),
        Err(CodeError::BlockCount { .. })
    ));
    let five = build_code(CodeId::FiveQubit).unwrap();
    assert_eq!(five.transversal(&LogicalGate::X(0), &[0]).unwrap().len(), 5);
}

#[test]
fn color_cz_conjugates_logical_operators() {
    let c = build_code(CodeId::Color422).unwrap();
    let gates = c.transversal(&LogicalGate::Cz(0, 1), &[0]).unwrap();
    let group = c.stabilizer_group();
    let conj = |p: &PauliString| {
        let mut q = p.clone();
        for g in &gates {
            g.conjugate(&mut q);
        }
        q
    };
    // CZ: X1 -> X1 Z2, X2 -> Z1 X2, Z unchanged.
    let expect_x0 = c.logical_x[0].mul(&c.logical_z[1]);
    let expect_x1 = c.logical_z[0].mul(&c.logical_x[1]);
    for (image, expect) in [
        (conj(&c.logical_x[0]), expect_x0),
        (conj(&c.logical_x[1]), expect_x1),
        (conj(&c.logical_z[0]), c.logical_z[0].clone()),
        (conj(&c.logical_z[1]), c.logical_z[1].clone()),
    ] {
        assert!(group.contains(&image.mul(&expect)));
    }
}

#[test]
fn zero_syndrome_decodes_to_identity() {
    for c in all_codes() {
        let zero = c.syndrome(&PauliString::identity(c.n));
        match c.decode(&zero) {
            Ok(Decoding::Correction(p)) => assert!(p.is_identity()),
            Ok(Decoding::Reject) => panic!("{} rejected the zero syndrome", c.id),
            Err(CodeError::NoDecoder(_)) => assert!(matches!(c.decoder, Decoder::None)),
            Err(e) => panic!("{e}"),
        }
    }
}

fn for_each_error(n: usize, max_w: usize, mut f: impl FnMut(PauliString)) {
    let mut stack = vec![(0usize, PauliString::identity(n), 0usize)];
    while let Some((q, p, w)) = stack.pop() {
        if q == n {
            f(p);
            continue;
        }
        stack.push((q + 1, p.clone(), w));
        if w < max_w {
            for letter in ['X', 'Y', 'Z'] {
                let mut e = p.clone();
                e.set(q, letter);
                stack.push((q + 1, e, w + 1));
            }
        }
    }
}

#[test]
fn lookup_decoders_correct_up_to_half_distance() {
    for c in all_codes() {
        if !matches!(c.decoder, Decoder::Lookup(_)) {
            continue;
        }
        let group = c.stabilizer_group();
        let t = (c.d - 1) / 2;
        let mut count = 0;
        for_each_error(c.n, t, |e| {
            let corr = c.correct(&c.syndrome(&e)).unwrap();
            // X and Z parts are each of minimum weight.
            assert!(corr.x.count_ones() <= e.x.count_ones(), "{} {e}", c.id);
            assert!(corr.z.count_ones() <= e.z.count_ones(), "{} {e}", c.id);
            let mut residual = corr.clone();
            residual.mul_assign_unsigned(&e);
            assert!(group.contains(&residual), "{} {e} -> {corr}", c.id);
            count += 1;
        });
        if t > 0 {
            assert!(count > c.n);
        }
    }
}

#[test]
fn surface3_single_x_errors() {
    let c = build_code(CodeId::Surface(3)).unwrap();
    let group = c.stabilizer_group();
    for q in 0..9 {
        let e = PauliString::single(9, q, 'X');
        let Decoding::Correction(corr) = c.decode(&c.syndrome(&e)).unwrap() else {
            panic!("rejected");
        };
        assert_eq!(corr.weight(), 1);
        assert!(group.contains(&corr.mul(&e)));
    }
}

#[test]
fn color_decoding_detects_only() {
    let c = build_code(CodeId::Color422).unwrap();
    for_each_error(4, 1, |e| {
        let s = c.syndrome(&e);
        let d = c.decode(&s).unwrap();
        assert_eq!(d == Decoding::Reject, !s.is_zero());
        if !e.is_identity() {
            assert_eq!(d, Decoding::Reject);
        }
    });
    let bad = c.syndrome(&PauliString::single(4, 0, 'X'));
    assert!(matches!(c.correct(&bad), Err(CodeError::DetectionOnly(_))));
    let five = build_code(CodeId::FiveQubit).unwrap();
    assert!(matches!(
        five.decode(&five.syndrome(&PauliString::identity(5))),
        Err(CodeError::NoDecoder(_))
    ));
    assert!(c.decode(&kuniform::stab::BitVec::zeros(3)).is_err());
}

#[test]
fn logical_to_physical_signs() {
    let c = build_code(CodeId::Color422).unwrap();
    let y: PauliString = "YI".parse().unwrap();
    let img = c.logical_to_physical(&y);
    // Y = iXZ, so the image stabilizes the encoded +Y eigenstate.
    let mut l: StabilizerTableau = StabilizerTableau::new(2);
    l.apply(&Clifford::H(0)).unwrap();
    l.apply(&Clifford::S(0)).unwrap();
    let t = c.encode_state(&l).unwrap();
    assert!(t.is_stabilized_by(&img).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn encoding_commutes_with_logical_paulis(seed in any::<u64>()) {
        let mut r = rng(seed);
        for c in all_codes() {
            let logical = random_state(2 * c.kappa, &mut r);
            let enc = c.encode_state(&logical).unwrap();
            for g in logical.stabilizers() {
                let mut acc = PauliString::identity(2 * c.n);
                for b in 0..2 {
                    let mut part = g.restrict(&(b * c.kappa..(b + 1) * c.kappa).collect::<Vec<_>>());
                    part.sign = false;
                    acc = acc.mul(&c.logical_to_physical(&part).embed(2 * c.n, b * c.n));
                }
                acc.sign ^= g.sign;
                prop_assert!(enc.is_stabilized_by(&acc).unwrap());
            }
            for s in &c.stabilizers {
                prop_assert!(enc.is_stabilized_by(&s.embed(2 * c.n, c.n)).unwrap());
            }
        }
    }
}
