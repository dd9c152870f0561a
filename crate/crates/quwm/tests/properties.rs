//! Property suites over the embeddings and algebraic identities.

use proptest::prelude::*;

use quwm::binary::{psi, BinaryCode};
use quwm::matrix::{MatrixFamily, WeighingMatrix};
use quwm::spherical::{code_to_family, family_to_code};
use quwm::z4::{gray, lee_weight, psi_phi};

fn inner(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    /// Hamming distance j between words corresponds to inner product d − 2j
    /// of their ±1 images.
    #[test]
    fn psi_distance_inner_product_identity(x in any::<u64>(), y in any::<u64>(), len in 1usize..=64) {
        let mask = if len == 64 { !0u64 } else { (1 << len) - 1 };
        let (x, y) = ((x & mask) as u128, (y & mask) as u128);
        let j = (x ^ y).count_ones() as i64;
        let ip = inner(&psi(x, len), &psi(y, len));
        prop_assert_eq!(ip, len as i64 - 2 * j);
    }

    /// The Gray map is an isometry from Lee weight to Hamming weight.
    #[test]
    fn gray_lee_hamming_isometry(word in prop::collection::vec(0u8..4, 1..40)) {
        prop_assert_eq!(gray(&word).count_ones(), lee_weight(&word));
    }

    /// ⟨ψφ(x), ψφ(y)⟩ = 2(n₀(x−y) − n₂(x−y)).
    #[test]
    fn psi_phi_correlation_identity(
        x in prop::collection::vec(0u8..4, 1..32),
        y in prop::collection::vec(0u8..4, 1..32),
    ) {
        let n = x.len().min(y.len());
        let (x, y) = (&x[..n], &y[..n]);
        let diff: Vec<u8> = x.iter().zip(y).map(|(a, b)| (a + 4 - b) % 4).collect();
        let n0 = diff.iter().filter(|&&c| c == 0).count() as i64;
        let n2 = diff.iter().filter(|&&c| c == 2).count() as i64;
        prop_assert_eq!(inner(&psi_phi(x), &psi_phi(y)), 2 * (n0 - n2));
    }

    /// dual ∘ dual is the identity and extension preserves dimension.
    #[test]
    fn dual_involution_and_extension(
        gens in prop::collection::vec(any::<u32>(), 1..6),
        len in 8usize..=20,
    ) {
        let mask = (1u128 << len) - 1;
        let rows: Vec<u128> = gens.iter().map(|&g| g as u128 & mask).collect();
        let code = BinaryCode::new(len, &rows).unwrap();
        prop_assert_eq!(code.dual().dual(), code.clone());
        prop_assert_eq!(code.dual().dimension(), len - code.dimension());
        prop_assert_eq!(code.extend().unwrap().dimension(), code.dimension());
    }

    /// Per-member row permutations and row signs, together with one common
    /// signed column permutation, preserve family validity. (Column
    /// operations are the shared coordinate system: applied per member they
    /// would break unbiasedness.)
    #[test]
    fn signed_permutations_preserve_family_validity(seed in any::<u64>()) {
        use rand::prelude::*;
        use rand::seq::SliceRandom;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (family, _) = quwm::binary::build_mquwm_binary(3).unwrap();
        let d = family.params.d as usize;
        let mut cols: Vec<usize> = (0..d).collect();
        cols.shuffle(&mut rng);
        let col_sign: Vec<i64> = (0..d).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
        let mut members = Vec::new();
        for w in &family.members {
            let mut rows = w.to_rows();
            rows.shuffle(&mut rng);
            for row in rows.iter_mut() {
                if rng.gen_bool(0.5) {
                    for e in row.iter_mut() {
                        *e = -*e;
                    }
                }
            }
            let permuted: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c] * col_sign[c]).collect())
                .collect();
            members.push(WeighingMatrix::verify(&permuted).unwrap());
        }
        prop_assert!(MatrixFamily::verify(family.params, members).is_ok());
    }
}

proptest! {
    /// For weighing matrices of equal order and weight,
    /// (W1·W2ᵀ)(W1·W2ᵀ)ᵀ = k²·I holds identically, quasi-unbiased or not.
    #[test]
    fn product_orthogonality_identity(seed in any::<u64>()) {
        use rand::prelude::*;
        use rand::seq::SliceRandom;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let base = vec![
            vec![1i64, 1, 0, 0],
            vec![1, -1, 0, 0],
            vec![0, 0, 1, 1],
            vec![0, 0, 1, -1],
        ];
        let scramble = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut rows = base.clone();
            rows.shuffle(rng);
            let mut cols: Vec<usize> = (0..4).collect();
            cols.shuffle(rng);
            let signs: Vec<i64> = (0..4).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
            let rows: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| cols.iter().zip(&signs).map(|(&c, &s)| r[c] * s).collect())
                .collect();
            WeighingMatrix::verify(&rows).unwrap()
        };
        let w1 = scramble(&mut rng);
        let w2 = scramble(&mut rng);
        let p = w1.product_transpose(&w2).unwrap();
        let k = w1.weight() as i64;
        for i in 0..4 {
            for j in 0..4 {
                let e: i64 = (0..4).map(|t| p[i][t] * p[j][t]).sum();
                prop_assert_eq!(e, if i == j { k * k } else { 0 });
            }
        }
    }
}

/// The first failing pair (by index order) is reported, independent of the
/// parallel evaluation schedule.
#[test]
fn family_verification_reports_least_failing_pair() {
    use quwm::error::MatrixError;
    let w = WeighingMatrix::verify(&[
        vec![1, 1, 0, 0],
        vec![1, -1, 0, 0],
        vec![0, 0, 1, 1],
        vec![0, 0, 1, -1],
    ])
    .unwrap();
    // every pair of copies has self-product 2I, so entries square to 4, not 1:
    // all three pairs fail at a = 1 and the least pair must be the one named
    let params = quwm::matrix::FamilyParams::new(4, 2, 4, 1).unwrap();
    let err = MatrixFamily::verify(params, vec![w.clone(), w.clone(), w]).unwrap_err();
    match err {
        MatrixError::NotQuasiUnbiased { i, j, .. } => assert_eq!((i, j), (0, 1)),
        other => panic!("unexpected error {other:?}"),
    }
}

/// Round trip through the spherical representation is the identity on
/// canonicalized families.
#[test]
fn family_code_round_trip_on_constructions() {
    let (binary3, _) = quwm::binary::build_mquwm_binary(3).unwrap();
    let dframes6 = quwm::construct::lookup("d-frames")
        .unwrap()
        .build(&quwm::construct::ConstructOptions { d: Some(6), ..Default::default() })
        .unwrap()
        .family;
    let (z4m2, _) = quwm::z4::build_mquwm_z4(2).unwrap();
    for family in [binary3, dframes6, z4m2] {
        let (code, decomp) = family_to_code(&family).unwrap();
        let back = code_to_family(&code, &decomp, family.params.a, false).unwrap();
        assert_eq!(back.params, family.params);
        assert_eq!(back.size(), family.size());
        for (a, b) in family.members.iter().zip(&back.members) {
            let mut rows: Vec<Vec<i64>> =
                a.rows().map(quwm::spherical::canonicalize).collect();
            rows.sort();
            assert_eq!(rows, b.to_rows());
        }
    }
}

/// Derivation output always re-verifies as an unbiased family.
#[test]
fn derive_muwm_reverifies_on_constructions() {
    let (binary3, _) = quwm::binary::build_mquwm_binary(3).unwrap();
    let (z4m2, _) = quwm::z4::build_mquwm_z4(2).unwrap();
    let dframes10 = quwm::construct::lookup("d-frames")
        .unwrap()
        .build(&quwm::construct::ConstructOptions { d: Some(10), ..Default::default() })
        .unwrap()
        .family;
    for family in [binary3, z4m2, dframes10] {
        let derived = quwm::matrix::derive_muwm(&family).unwrap();
        assert_eq!(derived.size(), family.size() - 1);
        assert!(derived.params.is_unbiased());
    }
}
