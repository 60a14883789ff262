//! Pauli algebra against the dense-matrix oracle, plus algebraic properties.

use nogo::pauli::{magic_square_lines, set_product, star_lines, Letter, PauliString, Phase};
use nogo::qverify::{pauli_to_matrix, ComplexMatrix};
use nogo::Sign;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LETTERS: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

fn all_strings(n: usize) -> Vec<PauliString> {
    let mut out = Vec::new();
    for code in 0..4usize.pow(n as u32) {
        let letters: Vec<Letter> = (0..n).map(|q| LETTERS[code / 4usize.pow(q as u32) % 4]).collect();
        for k in 0..4 {
            out.push(PauliString::from_letters(&letters, Phase::from_exponent(k)).unwrap());
        }
    }
    out
}

fn random_string(rng: &mut impl Rng, n: usize) -> PauliString {
    let letters: Vec<Letter> = (0..n).map(|_| LETTERS[rng.random_range(0..4)]).collect();
    PauliString::from_letters(&letters, Phase::from_exponent(rng.random_range(0..4))).unwrap()
}

fn matrix_product_agrees(p: &PauliString, q: &PauliString) -> f64 {
    let lhs = pauli_to_matrix(&p.multiply(q).unwrap()).unwrap();
    let rhs = pauli_to_matrix(p).unwrap().mul(&pauli_to_matrix(q).unwrap());
    lhs.distance(&rhs)
}

#[test]
fn homomorphism_exhaustive_up_to_two_qubits() {
    for n in 1..=2 {
        let all = all_strings(n);
        for p in &all {
            for q in &all {
                assert!(matrix_product_agrees(p, q) < 1e-14, "{p} * {q}");
            }
        }
    }
}

#[test]
fn homomorphism_random_three_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let (p, q) = (random_string(&mut rng, 3), random_string(&mut rng, 3));
        assert!(matrix_product_agrees(&p, &q) < 1e-14, "{p} * {q}");
    }
}

#[test]
fn commutation_matches_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let (p, q) = (random_string(&mut rng, n), random_string(&mut rng, n));
        let (mp, mq) = (pauli_to_matrix(&p).unwrap(), pauli_to_matrix(&q).unwrap());
        assert_eq!(p.commutes(&q).unwrap(), mp.commutator_norm(&mq) < 1e-12);
    }
}

#[test]
fn line_products_match_matrices() {
    for (lines, n) in [(magic_square_lines(), 2), (star_lines(), 3)] {
        let id = ComplexMatrix::identity(1 << n).unwrap();
        for line in lines {
            let sign = set_product(&line.members).unwrap().unwrap().identity_sign().unwrap();
            let m = line
                .members
                .iter()
                .map(|p| pauli_to_matrix(p).unwrap())
                .reduce(|a, b| a.mul(&b))
                .unwrap();
            let expected = id.scale(sign.value() as f64);
            assert!(m.distance(&expected) < 1e-14, "{}", line.name);
        }
    }
}

#[test]
fn star_x_line_with_product_is_identity() {
    let set: Vec<PauliString> = ["XII", "IXI", "IIX", "XXX"].iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(set_product(&set).unwrap().unwrap().identity_sign(), Some(Sign::Plus));
}

fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
    (prop::collection::vec(0usize..4, n), 0i64..4)
        .prop_map(|(l, k)| PauliString::from_letters(&l.iter().map(|&i| LETTERS[i]).collect::<Vec<_>>(), Phase::from_exponent(k)).unwrap())
}

fn arb_triple() -> impl Strategy<Value = (PauliString, PauliString, PauliString)> {
    (1usize..=16).prop_flat_map(|n| (arb_string(n), arb_string(n), arb_string(n)))
}

proptest! {
    #[test]
    fn multiplication_is_associative((p, q, r) in arb_triple()) {
        let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_is_two_sided((p, _, _) in arb_triple()) {
        let id = PauliString::identity(p.num_qubits()).unwrap();
        prop_assert_eq!(id.multiply(&p).unwrap(), p);
        prop_assert_eq!(p.multiply(&id).unwrap(), p);
    }

    #[test]
    fn swapped_products_differ_by_sign((p, q, _) in arb_triple()) {
        let pq = p.multiply(&q).unwrap();
        let qp = q.multiply(&p).unwrap();
        prop_assert_eq!(pq.letters(), qp.letters());
        let same = pq.phase() == qp.phase();
        prop_assert!(same || pq.phase() == qp.phase() * Phase::MINUS_ONE);
        prop_assert_eq!(p.commutes(&q).unwrap(), same);
    }

    #[test]
    fn text_round_trip((p, _, _) in arb_triple()) {
        prop_assert_eq!(p.to_string().parse::<PauliString>().unwrap(), p);
    }
}
