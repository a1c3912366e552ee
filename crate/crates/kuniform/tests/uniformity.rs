mod common;

use common::*;
use proptest::prelude::*;

use kuniform::circuits::{gen_color_kuniform, gen_decay_circuit, gen_ghz, DecayFamily, GhzVariant};
use kuniform::codes::{build_code, Basis, CodeId};
use kuniform::stab::{Clifford, PauliString, StabilizerTableau};
use kuniform::uniformity::*;

fn collect(f: &SubsetFamily) -> Vec<Vec<usize>> {
    let mut it = f.iter();
    let mut out = Vec::new();
    while let Some(s) = it.next_subset() {
        out.push(s.to_vec());
    }
    out
}

fn ghz(n: usize) -> StabilizerTableau {
    let mut gens = vec![PauliString::on(n, &(0..n).collect::<Vec<_>>(), 'X')];
    gens.extend((0..n - 1).map(|i| PauliString::on(n, &[i, i + 1], 'Z')));
    StabilizerTableau::from_stabilizers(&gens).unwrap()
}

fn prepared(c: &kuniform::circuits::Circuit) -> StabilizerTableau {
    let mut t = StabilizerTableau::new(c.n_qubits());
    t.apply_all(&c.cliffords().unwrap()).unwrap();
    t
}

#[test]
fn spaced_family_contains_every_third_site() {
    let f = subsets_alpha(10, 4, 3).unwrap();
    let all = collect(&f);
    assert!(all.contains(&vec![0, 3, 6, 9]));
    assert_eq!(all.len() as u64, f.len());
    assert!(all.iter().all(|s| s.windows(2).all(|w| w[1] - w[0] >= 3)));
}

#[test]
fn small_families() {
    assert_eq!(collect(&subsets_alpha(4, 2, 1).unwrap()).len(), 6);
    assert_eq!(
        collect(&subsets_alpha(4, 2, 2).unwrap()),
        vec![vec![0, 2], vec![0, 3], vec![1, 3]]
    );
    assert!(subsets_alpha(3, 4, 1).is_err());
    assert!(subsets_alpha(3, 2, 0).is_err());
}

#[test]
fn family_matches_brute_force() {
    for n in 1..=9 {
        for k in 1..=n {
            for alpha in 1..=4 {
                let f = subsets_alpha(n, k, alpha).unwrap();
                let mut brute = Vec::new();
                for mask in 0u32..1 << n {
                    if mask.count_ones() as usize != k {
                        continue;
                    }
                    let s: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
                    if s.windows(2).all(|w| w[1] - w[0] >= alpha) {
                        brute.push(s);
                    }
                }
                brute.sort();
                let got = collect(&f);
                assert_eq!(got, brute, "n={n} k={k} alpha={alpha}");
                for (i, s) in got.iter().enumerate() {
                    assert_eq!(&f.unrank(i as u64), s);
                }
                if alpha == 1 {
                    assert_eq!(f.len(), binomial(n as u64, k as u64));
                }
            }
        }
    }
}

#[test]
fn chunked_iteration_resumes_anywhere() {
    let f = subsets_alpha(12, 4, 2).unwrap();
    let all = collect(&f);
    for start in [0, 1, 17, all.len() as u64 - 1] {
        let mut it = f.iter_from(start, 5);
        let mut got = Vec::new();
        while let Some(s) = it.next_subset() {
            got.push(s.to_vec());
        }
        let end = (start as usize + 5).min(all.len());
        assert_eq!(got, all[start as usize..end].to_vec());
    }
}

#[test]
fn independent_count_examples() {
    let five = build_code(CodeId::FiveQubit)
        .unwrap()
        .encoded_state(Basis::Zero, 1)
        .unwrap();
    assert_eq!(independent_count(&five, &[1, 3]).unwrap(), 4);
    assert_eq!(independent_count(&ghz(3), &[0]).unwrap(), 2);
    let zero: StabilizerTableau = StabilizerTableau::new(4);
    for q in 0..4 {
        assert_eq!(independent_count(&zero, &[q]).unwrap(), 1);
    }
    assert!(independent_count(&zero, &[4]).is_err());
}

#[test]
fn ghz3_single_qubit_marginal_is_maximally_mixed() {
    let rho = density(&ghz(3));
    let r = partial_trace(&rho, 3, &[0]);
    let half = Mat::identity(2, 2) * num_complex::Complex64::new(0.5, 0.0);
    assert!(approx_eq(&r, &half));
}

#[test]
fn five_qubit_code_is_two_uniform() {
    let t = build_code(CodeId::FiveQubit)
        .unwrap()
        .encoded_state(Basis::Zero, 1)
        .unwrap();
    let r = verify(&t, 2, 1).unwrap();
    assert_eq!(r.min_ia, 4);
    assert_eq!(r.r, 0);
    assert_eq!(r.delta, 0.0);
    assert_eq!(r.subsets_scanned, 10);
    assert!(!verify(&t, 3, 1).unwrap().is_exact());
}

#[test]
fn ghz_uniformity() {
    // Two qubits form a pure Bell pair, far from mixed.
    assert_eq!(verify(&ghz(2), 2, 1).unwrap().delta, 1.5);
    for n in 3..=12 {
        let t = ghz(n);
        assert_eq!(verify(&t, 1, 1).unwrap().delta, 0.0);
        let r2 = verify(&t, 2, 1).unwrap();
        assert_eq!(r2.delta, 1.0);
        assert_eq!(r2.witness, vec![0, 1]);
        if n <= 6 {
            assert!((dense_delta(&t, 2) - 1.0).abs() < 1e-10);
            assert!(dense_delta(&t, 1).abs() < 1e-10);
        }
    }
    // The circuit preparation agrees with the generator definition.
    let c = gen_ghz(8, GhzVariant::LogDepth).unwrap();
    assert!(prepared(&c).same_state(&ghz(8)));
}

#[test]
fn color_k3_on_twelve_qubits() {
    let t = prepared(&gen_color_kuniform(3, 12).unwrap());
    let r = verify(&t, 3, 1).unwrap();
    assert_eq!(r.delta, 0.0);
    assert_eq!(r.subsets_scanned, 220);
}

#[test]
fn product_state_report() {
    let t: StabilizerTableau = StabilizerTableau::new(5);
    let r = verify(&t, 1, 1).unwrap();
    assert_eq!((r.min_ia, r.r, r.delta), (1, 1, 1.0));
    assert_eq!(r.witness, vec![0]);
    assert_eq!(r.witness_one_based(), vec![1]);
    assert_eq!(r.witness_entropy(), 0.0);
    assert!(verify(&t, 6, 1).is_err());
}

#[test]
fn delta_r_conversion() {
    assert_eq!(delta_from_r(0), 0.0);
    assert_eq!(delta_from_r(1), 1.0);
    assert_eq!(delta_from_r(2), 1.5);
    for r in 0..20 {
        assert_eq!(r_for_delta(delta_from_r(r)), r);
    }
}

#[test]
fn kappa_ratio_examples() {
    let five = build_code(CodeId::FiveQubit)
        .unwrap()
        .encoded_state(Basis::Zero, 1)
        .unwrap();
    assert_eq!(kappa_ratio(&five, 2).unwrap(), KappaRatio::Ratio(0.0));
    let zero: StabilizerTableau = StabilizerTableau::new(6);
    assert_eq!(kappa_ratio(&zero, 1).unwrap(), KappaRatio::NoUniformSubsets);
    let counts = kappa_counts(&ghz(5), 2).unwrap();
    assert_eq!(
        counts,
        KappaCounts {
            exact: 0,
            approximate: 10
        }
    );
}

#[test]
fn kappa_counts_match_per_subset_ranks() {
    let t = prepared(&gen_decay_circuit(DecayFamily::C1, 12, 2).unwrap());
    for k in 1..=4 {
        let fam = subsets_alpha(12, k, 1).unwrap();
        let mut exact = 0;
        let mut it = fam.iter();
        while let Some(s) = it.next_subset() {
            if independent_count(&t, s).unwrap() == 2 * k {
                exact += 1;
            }
        }
        let c = kappa_counts(&t, k).unwrap();
        assert_eq!(c.exact, exact);
        assert_eq!(c.exact + c.approximate, fam.len());
    }
}

#[test]
fn c1_kappa_does_not_grow_with_depth() {
    let mut prev = f64::INFINITY;
    for d in 1..=5 {
        let t = prepared(&gen_decay_circuit(DecayFamily::C1, 24, d).unwrap());
        let v = kappa_ratio(&t, 3).unwrap().value().unwrap_or(f64::INFINITY);
        assert!(v <= prev, "depth {d}: {v} > {prev}");
        prev = v;
    }
}

#[test]
fn verification_is_thread_count_independent() {
    let t = prepared(&gen_decay_circuit(DecayFamily::C3, 24, 2).unwrap());
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = single.install(|| verify(&t, 4, 1).unwrap());
    let b = verify(&t, 4, 1).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        single.install(|| kappa_counts(&t, 3).unwrap()),
        kappa_counts(&t, 3).unwrap()
    );
}

#[test]
fn scanner_rank_is_independent_count() {
    let mut r = rng(21);
    for n in 2..=10 {
        let t = random_state(n, &mut r);
        let scanner = ColumnScanner::from_tableau(&t);
        let fam = subsets_alpha(n, n.min(3), 1).unwrap();
        let mut it = fam.iter();
        while let Some(s) = it.next_subset() {
            assert_eq!(scanner.rank(s), independent_count(&t, s).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_equals_dense_trace_distance(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let t = random_state(n, &mut r);
        for k in 1..=n {
            let ours = verify(&t, k, 1).unwrap().delta;
            let dense = dense_delta(&t, k);
            prop_assert!((ours - dense).abs() < 1e-10, "k={} ours={} dense={}", k, ours, dense);
        }
    }

    #[test]
    fn report_invariants(seed in any::<u64>(), n in 2usize..=12) {
        let mut r = rng(seed);
        let t = random_state(n, &mut r);
        let mut prev_exact = true;
        for k in 1..=n.min(5) {
            let full = verify(&t, k, 1).unwrap();
            prop_assert_eq!(full.r, 2 * k - full.min_ia);
            prop_assert!(full.min_ia <= n.min(2 * k));
            prop_assert_eq!(full.delta, delta_from_r(full.r));
            prop_assert_eq!(independent_count(&t, &full.witness).unwrap(), full.min_ia);
            prop_assert_eq!(full.clone(), verify(&t, k, 1).unwrap());
            // Monotone in k.
            if !prev_exact {
                prop_assert!(!full.is_exact());
            }
            prev_exact = full.is_exact();
            // Monotone in alpha.
            let mut last = full.delta;
            for alpha in 2..=3 {
                if let Ok(rep) = verify(&t, k, alpha) {
                    if rep.subsets_scanned > 0 {
                        prop_assert!(rep.delta <= last);
                        last = rep.delta;
                    }
                }
            }
        }
    }

    #[test]
    fn signs_do_not_change_reports(seed in any::<u64>(), n in 2usize..=8) {
        let mut r = rng(seed);
        let t = random_state(n, &mut r);
        let mut flipped = t.clone();
        for q in 0..n {
            if r.random::<bool>() {
                flipped.apply(&Clifford::X(q)).unwrap();
            }
            if r.random::<bool>() {
                flipped.apply(&Clifford::Z(q)).unwrap();
            }
        }
        for k in 1..=n.min(3) {
            prop_assert_eq!(verify(&t, k, 1).unwrap(), verify(&flipped, k, 1).unwrap());
        }
    }
}

use rand::Rng;
