#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kuniform::stab::{Clifford, PauliString, StabilizerTableau};

pub type Mat = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_gate(n: usize, rng: &mut impl Rng) -> Clifford {
    let a = rng.random_range(0..n);
    let kind = if n == 1 {
        rng.random_range(0..5)
    } else {
        rng.random_range(0..7)
    };
    let b = if n > 1 { (a + rng.random_range(1..n)) % n } else { a };
    match kind {
        0 => Clifford::H(a),
        1 => Clifford::S(a),
        2 => Clifford::Sdg(a),
        3 => Clifford::X(a),
        4 => Clifford::Z(a),
        5 => Clifford::Cnot(a, b),
        _ => Clifford::Cz(a, b),
    }
}

pub fn random_circuit(n: usize, len: usize, rng: &mut impl Rng) -> Vec<Clifford> {
    (0..len).map(|_| random_gate(n, rng)).collect()
}

pub fn random_state(n: usize, rng: &mut impl Rng) -> StabilizerTableau {
    let mut t = StabilizerTableau::new(n);
    t.apply_all(&random_circuit(n, 8 * n + 4, rng)).unwrap();
    t
}

pub fn random_pauli(n: usize, rng: &mut impl Rng) -> PauliString {
    let mut p = PauliString::identity(n);
    for q in 0..n {
        p.set(q, ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]);
    }
    p.sign = rng.random();
    p
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense matrix of a Pauli; qubit `q` is bit `q` of the basis index.
pub fn dense_pauli(p: &PauliString) -> Mat {
    let n = p.n();
    let dim = 1 << n;
    let mut m = Mat::zeros(dim, dim);
    for b in 0..dim {
        let mut amp = if p.sign { c(-1.0, 0.0) } else { c(1.0, 0.0) };
        let mut out = b;
        for q in 0..n {
            let bit = (b >> q) & 1 == 1;
            let flip_sign = if bit { -1.0 } else { 1.0 };
            match p.get(q) {
                'X' => out ^= 1 << q,
                'Z' => amp *= flip_sign,
                'Y' => {
                    out ^= 1 << q;
                    amp *= c(0.0, flip_sign);
                }
                _ => {}
            }
        }
        m[(out, b)] = amp;
    }
    m
}

/// Dense unitary of a gate on `n` qubits.
pub fn dense_gate(g: &Clifford, n: usize) -> Mat {
    let dim = 1 << n;
    let mut m = Mat::zeros(dim, dim);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for b in 0..dim {
        let bit = |q: usize| (b >> q) & 1 == 1;
        match *g {
            Clifford::H(a) => {
                let b0 = b & !(1 << a);
                let b1 = b | (1 << a);
                m[(b0, b)] += c(s, 0.0);
                m[(b1, b)] += c(if bit(a) { -s } else { s }, 0.0);
            }
            Clifford::S(a) => m[(b, b)] = if bit(a) { c(0.0, 1.0) } else { c(1.0, 0.0) },
            Clifford::Sdg(a) => m[(b, b)] = if bit(a) { c(0.0, -1.0) } else { c(1.0, 0.0) },
            Clifford::X(a) => m[(b ^ (1 << a), b)] = c(1.0, 0.0),
            Clifford::Z(a) => m[(b, b)] = c(if bit(a) { -1.0 } else { 1.0 }, 0.0),
            Clifford::Cnot(ct, t) => {
                let out = if bit(ct) { b ^ (1 << t) } else { b };
                m[(out, b)] = c(1.0, 0.0);
            }
            Clifford::Cz(x, y) => m[(b, b)] = c(if bit(x) && bit(y) { -1.0 } else { 1.0 }, 0.0),
        }
    }
    m
}

/// Density matrix `∏ (I + g)/2` over the stabilizer generators.
pub fn density(t: &StabilizerTableau) -> Mat {
    let dim = 1 << t.n();
    let id = Mat::identity(dim, dim);
    let mut rho = id.clone();
    for g in t.stabilizers() {
        rho = rho * (&id + dense_pauli(&g)) * c(0.5, 0.0);
    }
    rho
}

/// Reduced density matrix on `keep` (in the given order).
pub fn partial_trace(rho: &Mat, n: usize, keep: &[usize]) -> Mat {
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let k = keep.len();
    let mut out = Mat::zeros(1 << k, 1 << k);
    let compose = |a: usize, e: usize| {
        let mut idx = 0;
        for (i, &q) in keep.iter().enumerate() {
            idx |= ((a >> i) & 1) << q;
        }
        for (i, &q) in rest.iter().enumerate() {
            idx |= ((e >> i) & 1) << q;
        }
        idx
    };
    for i in 0..1 << k {
        for j in 0..1 << k {
            let mut acc = c(0.0, 0.0);
            for e in 0..1 << rest.len() {
                acc += rho[(compose(i, e), compose(j, e))];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(h: &Mat) -> f64 {
    h.clone().symmetric_eigen().eigenvalues.iter().map(|v| v.abs()).sum()
}

/// `max_A ‖ρ_A − I/2^k‖₁` over all k-subsets.
pub fn dense_delta(t: &StabilizerTableau, k: usize) -> f64 {
    let n = t.n();
    let rho = density(t);
    let dim = 1 << k;
    let mixed = Mat::identity(dim, dim) * c(1.0 / dim as f64, 0.0);
    let mut best: f64 = 0.0;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        let r = partial_trace(&rho, n, &keep);
        best = best.max(trace_norm(&(r - &mixed)));
    }
    best
}

pub fn approx_eq(a: &Mat, b: &Mat) -> bool {
    (a - b).iter().all(|v| v.norm() < 1e-9)
}
