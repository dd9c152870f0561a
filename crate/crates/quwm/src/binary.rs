//! Binary linear codes: cyclotomic cosets, the narrow-sense BCH code of
//! designed distance 5, duals/extensions, first-order Reed-Muller codes,
//! coset decompositions, and the ±1 embedding ψ.
//!
//! Words are u128 bitsets with coordinate i at bit i, so lengths up to 128
//! (m ≤ 7) are supported. Lexicographic order on words compares coordinate 0
//! first.

use serde::Serialize;
use std::collections::BTreeSet;

use crate::error::CodeError;
use crate::matrix::MatrixFamily;
use crate::spherical::{code_to_family, CrossPolytopeDecomposition, SphericalCode};

/// One binary word; coordinate i lives at bit i.
pub type Word = u128;

pub const MAX_LENGTH: usize = 128;

/// Enumeration cap for weight sets and coset scans.
pub const ENUM_DIM_CAP: usize = 24;

/// Pinned primitive polynomials over GF(2), coefficient of x^i at bit i.
/// One fixed choice per degree so every build is bit-reproducible.
pub const PRIMITIVE_POLYS: &[(u32, u64)] = &[
    (1, 0b11),        // x + 1
    (2, 0b111),       // x^2 + x + 1
    (3, 0b1011),      // x^3 + x + 1
    (4, 0b10011),     // x^4 + x + 1
    (5, 0b100101),    // x^5 + x^2 + 1
    (6, 0b1000011),   // x^6 + x + 1
    (7, 0b10001001),  // x^7 + x^3 + 1
];

pub fn primitive_poly(m: u32) -> Result<u64, CodeError> {
    PRIMITIVE_POLYS
        .iter()
        .find(|(mm, _)| *mm == m)
        .map(|(_, p)| *p)
        .ok_or(CodeError::UnsupportedM { m })
}

/// GF(2^m) with the pinned primitive polynomial; the primitive element α is
/// the class of x (integer 2).
#[derive(Debug, Clone, Copy)]
pub struct Gf2m {
    pub m: u32,
    prim: u64,
}

impl Gf2m {
    pub fn new(m: u32) -> Result<Self, CodeError> {
        Ok(Gf2m { m, prim: primitive_poly(m)? })
    }

    pub fn mul(&self, mut a: u64, mut b: u64) -> u64 {
        let mut r = 0;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if (a >> self.m) & 1 == 1 {
                a ^= self.prim;
            }
        }
        r
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e != 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Field elements in the pinned evaluation order: α^0, α^1, …, α^{n-1}, 0.
    pub fn field_points(&self) -> Vec<u64> {
        let n = (1u64 << self.m) - 1;
        let mut pts = Vec::with_capacity(n as usize + 1);
        let mut a = 1;
        for _ in 0..n {
            pts.push(a);
            a = self.mul(a, 2);
        }
        pts.push(0);
        pts
    }
}

/// Orbit of i under doubling mod n.
pub fn cyclotomic_coset(i: u64, n: u64) -> Result<BTreeSet<u64>, CodeError> {
    if n.is_multiple_of(2) {
        return Err(CodeError::EvenModulus { n });
    }
    let mut set = BTreeSet::new();
    let mut j = i % n;
    while set.insert(j) {
        j = (2 * j) % n;
    }
    Ok(set)
}

/// Partition of {0,…,n−1} into 2-cyclotomic cosets.
#[derive(Debug, Clone)]
pub struct CyclotomicCosets {
    pub modulus: u64,
    pub cosets: Vec<BTreeSet<u64>>,
}

impl CyclotomicCosets {
    pub fn new(n: u64) -> Result<Self, CodeError> {
        let mut seen = vec![false; n as usize];
        let mut cosets = Vec::new();
        for i in 0..n {
            if !seen[i as usize] {
                let c = cyclotomic_coset(i, n)?;
                for &j in &c {
                    seen[j as usize] = true;
                }
                cosets.push(c);
            }
        }
        Ok(CyclotomicCosets { modulus: n, cosets })
    }
}

/// Lexicographic order on words: coordinate 0 is most significant, 0 < 1.
pub fn lex_less(a: Word, b: Word) -> bool {
    if a == b {
        return false;
    }
    let diff = a ^ b;
    let low = diff.trailing_zeros();
    (a >> low) & 1 == 0
}

/// A binary linear code given by generators in reduced row-echelon form
/// (pivot = lowest set coordinate, pivots cleared from all other rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    length: usize,
    gens: Vec<Word>, // RREF, sorted by pivot
}

fn rref(rows: &[Word]) -> Vec<Word> {
    let mut basis: Vec<Word> = Vec::new();
    for &r in rows {
        let mut cur = r;
        for &b in &basis {
            if cur & (b & b.wrapping_neg()) != 0 {
                cur ^= b;
            }
        }
        if cur != 0 {
            basis.push(cur);
            basis.sort_by_key(|w| w.trailing_zeros());
            // clear new pivots from earlier rows
            let snapshot = basis.clone();
            for row in basis.iter_mut() {
                for &other in &snapshot {
                    if *row != other && *row & (other & other.wrapping_neg()) != 0 {
                        *row ^= other;
                    }
                }
            }
        }
    }
    basis.sort_by_key(|w| w.trailing_zeros());
    basis
}

impl BinaryCode {
    pub fn new(length: usize, generators: &[Word]) -> Result<Self, CodeError> {
        if length > MAX_LENGTH {
            return Err(CodeError::LengthOverflow { len: length, max: MAX_LENGTH });
        }
        let mask = if length == 128 { !0u128 } else { (1u128 << length) - 1 };
        for &g in generators {
            debug_assert_eq!(g & !mask, 0, "generator exceeds code length");
        }
        Ok(BinaryCode { length, gens: rref(generators) })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Word] {
        &self.gens
    }

    pub fn size(&self) -> u128 {
        1u128 << self.gens.len()
    }

    /// Canonical residue mod this code: clears every pivot coordinate.
    /// The residue is the lexicographically least element of the coset.
    pub fn reduce(&self, mut w: Word) -> Word {
        for &g in &self.gens {
            if w & (g & g.wrapping_neg()) != 0 {
                w ^= g;
            }
        }
        w
    }

    pub fn contains_word(&self, w: Word) -> bool {
        self.reduce(w) == 0
    }

    pub fn contains_code(&self, other: &BinaryCode) -> bool {
        other.gens.iter().all(|&g| self.contains_word(g))
    }

    /// All codewords in Gray-code order (one generator XOR per step).
    pub fn codewords(&self) -> impl Iterator<Item = Word> + '_ {
        let dim = self.gens.len();
        let total: u64 = 1 << dim;
        let mut word: Word = 0;
        let mut counter: u64 = 0;
        std::iter::from_fn(move || {
            if counter == total {
                return None;
            }
            if counter > 0 {
                let flip = counter.trailing_zeros() as usize;
                word ^= self.gens[flip];
            }
            counter += 1;
            Some(word)
        })
    }

    /// Dual code: the orthogonal complement row space.
    pub fn dual(&self) -> BinaryCode {
        let piv_cols: Vec<usize> = self.gens.iter().map(|g| g.trailing_zeros() as usize).collect();
        let mut duals = Vec::new();
        for c in 0..self.length {
            if piv_cols.contains(&c) {
                continue;
            }
            let mut v: Word = 1 << c;
            for (&g, &pc) in self.gens.iter().zip(&piv_cols) {
                if (v & g).count_ones() % 2 == 1 {
                    v ^= 1 << pc;
                }
            }
            duals.push(v);
        }
        BinaryCode::new(self.length, &duals).expect("dual length equals code length")
    }

    /// Appends an overall parity coordinate at position `length`.
    pub fn extend(&self) -> Result<BinaryCode, CodeError> {
        if self.length + 1 > MAX_LENGTH {
            return Err(CodeError::LengthOverflow { len: self.length + 1, max: MAX_LENGTH });
        }
        let gens: Vec<Word> = self
            .gens
            .iter()
            .map(|&g| g | (((g.count_ones() % 2) as Word) << self.length))
            .collect();
        BinaryCode::new(self.length + 1, &gens)
    }

    /// Adjoins the all-ones row; reports whether it was already present.
    pub fn augment_all_ones(&self) -> (BinaryCode, bool) {
        let ones: Word = if self.length == 128 { !0 } else { (1u128 << self.length) - 1 };
        let already = self.contains_word(ones);
        let mut gens = self.gens.clone();
        gens.push(ones);
        (BinaryCode::new(self.length, &gens).expect("same length"), already)
    }

    /// Exact set of Hamming weights over all codewords.
    pub fn weight_set(&self) -> Result<BTreeSet<u32>, CodeError> {
        if self.dimension() > ENUM_DIM_CAP {
            return Err(CodeError::TooLarge { dim: self.dimension(), cap: ENUM_DIM_CAP });
        }
        Ok(self.codewords().map(|w| w.count_ones()).collect())
    }

    /// One canonical (lexicographically least) representative per coset of
    /// `sub` in `self`, sorted lexicographically; the zero word represents
    /// the subcode itself.
    pub fn coset_representatives(&self, sub: &BinaryCode) -> Result<Vec<Word>, CodeError> {
        if !self.contains_code(sub) {
            return Err(CodeError::NotSubcode);
        }
        if self.dimension() > ENUM_DIM_CAP {
            return Err(CodeError::TooLarge { dim: self.dimension(), cap: ENUM_DIM_CAP });
        }
        let mut reps: std::collections::HashMap<Word, Word> = std::collections::HashMap::new();
        for w in self.codewords() {
            let key = sub.reduce(w);
            reps.entry(key)
                .and_modify(|best| {
                    if lex_less(w, *best) {
                        *best = w;
                    }
                })
                .or_insert(w);
        }
        let mut out: Vec<Word> = reps.into_values().collect();
        out.sort_by(|&a, &b| if lex_less(a, b) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater });
        Ok(out)
    }
}

/// Narrow-sense BCH code of designed distance 5: the cyclic code of length
/// 2^m − 1 whose defining set is C_1 ∪ C_2 ∪ C_3 ∪ C_4.
pub fn bch_narrow_sense(m: u32) -> Result<BinaryCode, CodeError> {
    if m < 3 {
        return Err(CodeError::UnsupportedM { m });
    }
    let field = Gf2m::new(m)?;
    let n = (1u64 << m) - 1;
    let mut seen: Vec<BTreeSet<u64>> = Vec::new();
    for i in [1, 2, 3, 4] {
        let c = cyclotomic_coset(i, n)?;
        if !seen.contains(&c) {
            seen.push(c);
        }
    }
    // generator polynomial: product of the minimal polynomials of α^i over
    // the defining cosets; computed in GF(2^m) and checked to land in GF(2)
    let mut gen: Vec<u64> = vec![1];
    for coset in &seen {
        for &j in coset {
            let root = field.pow(2, j);
            let mut next = vec![0u64; gen.len() + 1];
            for (i, &c) in gen.iter().enumerate() {
                next[i + 1] ^= c;
                next[i] ^= field.mul(c, root);
            }
            gen = next;
        }
    }
    debug_assert!(gen.iter().all(|&c| c <= 1), "minimal polynomial not binary");
    let deg = gen.len() - 1;
    let gpoly: Word = gen.iter().enumerate().fold(0, |acc, (i, &c)| acc | ((c as Word) << i));
    let rows: Vec<Word> = (0..(n as usize - deg)).map(|i| gpoly << i).collect();
    BinaryCode::new(n as usize, &rows)
}

/// First-order Reed-Muller code of length 2^m on the pinned field-point
/// order (α^0, …, α^{n−1}, 0): spanned by the all-ones vector and the m
/// coordinate functionals of the points.
pub fn rm1(m: u32) -> Result<BinaryCode, CodeError> {
    let field = Gf2m::new(m)?;
    let labels: Vec<u64> = field.field_points();
    Ok(rm1_on_points(&labels, m))
}

/// RM(1,m) on an explicit point labeling (one m-bit label per coordinate).
pub fn rm1_on_points(labels: &[u64], m: u32) -> BinaryCode {
    let len = labels.len();
    let ones: Word = if len == 128 { !0 } else { (1u128 << len) - 1 };
    let mut gens = vec![ones];
    for b in 0..m {
        let mut v: Word = 0;
        for (pos, &e) in labels.iter().enumerate() {
            if (e >> b) & 1 == 1 {
                v |= 1 << pos;
            }
        }
        gens.push(v);
    }
    BinaryCode::new(len, &gens).expect("label count within word size")
}

/// ψ((x_i)) = ((−1)^{x_i}): a word of length n as a ±1 integer vector.
pub fn psi(word: Word, length: usize) -> Vec<i64> {
    (0..length).map(|i| 1 - 2 * ((word >> i) & 1) as i64).collect()
}

/// Hypothesis checks and outcome of the binary MQUWM pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct BinaryPipelineReport {
    pub m: u32,
    pub d: u64,
    pub bch_dimension: usize,
    pub dual_dimension: usize,
    pub code_dimension: usize,
    pub weight_set: Vec<u32>,
    pub expected_weight_set: Vec<u32>,
    pub rm_subcode: bool,
    pub coset_count: usize,
    pub inner_scale: u64,
    pub family_size: usize,
    pub params: crate::matrix::FamilyParams,
}

/// The code C of the construction: the extended dual of the BCH code with
/// the all-ones vector adjoined.
pub fn pipeline_code(m: u32) -> Result<BinaryCode, CodeError> {
    let (code, _) = bch_narrow_sense(m)?.dual().extend()?.augment_all_ones();
    Ok(code)
}

/// Builds MQUWM for parameters (d, d, d/2, 2d) with d = 2^m from the code
/// generated by the extended dual of the BCH code and the all-ones vector.
///
/// Verifies the weight-set and Reed-Muller-subcode hypotheses before
/// constructing; both failures surface as pipeline diagnostics.
pub fn build_mquwm_binary(m: u32) -> Result<(MatrixFamily, BinaryPipelineReport), crate::error::Error> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(CodeError::HypothesisFailed(format!(
            "pipeline requires odd m >= 3 (the dual weight spectrum needs (m-1)/2 integral), got m = {m}"
        ))
        .into());
    }
    let bch = bch_narrow_sense(m)?;
    let dual = bch.dual();
    let extended = dual.extend()?;
    let (code, _) = extended.augment_all_ones();
    let d = 1u64 << m;
    let half = (d / 2) as u32;
    let a = 1u32 << ((m - 1) / 2);
    let expected: BTreeSet<u32> = [0, half - a, half, half + a, d as u32].into_iter().collect();
    let weights = code.weight_set()?;
    if weights != expected {
        return Err(CodeError::HypothesisFailed(format!(
            "weight set {weights:?} differs from the required {expected:?}"
        ))
        .into());
    }
    let rm = rm1(m)?;
    if !code.contains_code(&rm) {
        return Err(CodeError::HypothesisFailed(
            "RM(1,m) is not a subcode of the augmented extended dual".into(),
        )
        .into());
    }
    let reps = code.coset_representatives(&rm)?;
    let rm_words: Vec<Word> = rm.codewords().collect();
    let mut vectors = Vec::with_capacity(reps.len() * rm_words.len());
    let mut parts_as_vectors: Vec<Vec<Vec<i64>>> = Vec::with_capacity(reps.len());
    for &rep in &reps {
        let part: Vec<Vec<i64>> = rm_words.iter().map(|&w| psi(rep ^ w, code.length())).collect();
        vectors.extend(part.iter().cloned());
        parts_as_vectors.push(part);
    }
    let code_set = SphericalCode::new(vectors)?;
    let parts = parts_as_vectors
        .iter()
        .map(|part| part.iter().map(|v| code_set.index_of(v).expect("vector present")).collect())
        .collect();
    let decomp = CrossPolytopeDecomposition::new(code_set.dimension(), parts);
    let scale = (2 * a as u64) * (2 * a as u64); // (2a)^2 = 2d
    debug_assert_eq!(scale, 2 * d);
    let family = code_to_family(&code_set, &decomp, scale, false)?;
    let report = BinaryPipelineReport {
        m,
        d,
        bch_dimension: bch.dimension(),
        dual_dimension: dual.dimension(),
        code_dimension: code.dimension(),
        weight_set: weights.iter().copied().collect(),
        expected_weight_set: expected.iter().copied().collect(),
        rm_subcode: true,
        coset_count: reps.len(),
        inner_scale: scale,
        family_size: family.size(),
        params: family.params,
    };
    Ok((family, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_elements_have_full_order() {
        for &(m, _) in PRIMITIVE_POLYS {
            let f = Gf2m::new(m).unwrap();
            let n = (1u64 << m) - 1;
            let mut a = 1;
            let mut seen = std::collections::HashSet::new();
            for _ in 0..n {
                assert!(seen.insert(a), "alpha has order < 2^{m}-1");
                a = f.mul(a, 2);
            }
            assert_eq!(a, 1);
        }
    }

    #[test]
    fn cyclotomic_cosets_mod_7() {
        assert_eq!(cyclotomic_coset(0, 7).unwrap(), BTreeSet::from([0]));
        assert_eq!(cyclotomic_coset(1, 7).unwrap(), BTreeSet::from([1, 2, 4]));
        assert_eq!(cyclotomic_coset(3, 7).unwrap(), BTreeSet::from([3, 5, 6]));
        assert!(matches!(cyclotomic_coset(1, 6), Err(CodeError::EvenModulus { n: 6 })));
        let all = CyclotomicCosets::new(7).unwrap();
        let union: BTreeSet<u64> = all.cosets.iter().flatten().copied().collect();
        assert_eq!(union, (0..7).collect());
    }

    #[test]
    fn bch_m3_is_repetition() {
        let c = bch_narrow_sense(3).unwrap();
        assert_eq!(c.dimension(), 1);
        assert_eq!(c.weight_set().unwrap(), BTreeSet::from([0, 7]));
    }

    #[test]
    fn bch_m4_minimum_distance_at_least_5() {
        let c = bch_narrow_sense(4).unwrap();
        assert_eq!(c.dimension(), 15 - 8); // |C1 ∪ C3| = 8
        let min_wt = c.weight_set().unwrap().iter().copied().filter(|&w| w > 0).min().unwrap();
        assert!(min_wt >= 5, "designed distance violated: {min_wt}");
    }

    #[test]
    fn dual_of_repetition_is_even_weight() {
        let d = bch_narrow_sense(3).unwrap().dual();
        assert_eq!(d.dimension(), 6);
        assert_eq!(d.weight_set().unwrap(), BTreeSet::from([0, 2, 4, 6]));
    }

    #[test]
    fn extend_even_code_appends_zero_column() {
        let d = bch_narrow_sense(3).unwrap().dual();
        let e = d.extend().unwrap();
        assert_eq!(e.dimension(), d.dimension());
        for w in e.codewords() {
            assert_eq!((w >> 7) & 1, 0, "parity coordinate must vanish on an even-weight code");
        }
    }

    #[test]
    fn augment_reaches_dimension_seven() {
        let e = bch_narrow_sense(3).unwrap().dual().extend().unwrap();
        let (c, present) = e.augment_all_ones();
        assert!(!present);
        assert_eq!(c.dimension(), 7);
        assert_eq!(c.size(), 128);
        assert_eq!(c.weight_set().unwrap(), BTreeSet::from([0, 2, 4, 6, 8]));
    }

    #[test]
    fn rm1_small_cases() {
        let r1 = rm1(1).unwrap();
        assert_eq!(r1.length(), 2);
        assert_eq!(r1.dimension(), 2);
        let r3 = rm1(3).unwrap();
        assert_eq!(r3.dimension(), 4);
        assert_eq!(r3.weight_set().unwrap(), BTreeSet::from([0, 4, 8]));
    }

    #[test]
    fn rm1_is_subcode_of_pipeline_code() {
        for m in [3, 5] {
            let (code, _) = bch_narrow_sense(m).unwrap().dual().extend().unwrap().augment_all_ones();
            assert!(code.contains_code(&rm1(m).unwrap()), "m = {m}");
        }
    }

    #[test]
    fn dual_is_involutive() {
        let c = bch_narrow_sense(4).unwrap();
        assert_eq!(c.dual().dual(), c);
    }

    #[test]
    fn coset_representatives_counts() {
        let (c, _) = bch_narrow_sense(3).unwrap().dual().extend().unwrap().augment_all_ones();
        assert_eq!(c.coset_representatives(&c).unwrap(), vec![0]);
        let reps = c.coset_representatives(&rm1(3).unwrap()).unwrap();
        assert_eq!(reps.len(), 8);
        assert!(reps.contains(&0));
        let sub = rm1(3).unwrap();
        let err = sub.coset_representatives(&c).unwrap_err();
        assert!(matches!(err, CodeError::NotSubcode));
    }

    #[test]
    fn psi_of_zero_word() {
        assert_eq!(psi(0, 4), vec![1, 1, 1, 1]);
        assert_eq!(psi(0b0101, 4), vec![-1, 1, -1, 1]);
    }

    #[test]
    fn lex_order_compares_coordinate_zero_first() {
        assert!(lex_less(0b10, 0b01)); // (0,1,..) < (1,0,..)
        assert!(lex_less(0, 1));
        assert!(!lex_less(1, 1));
    }

    #[test]
    fn even_m_rejected() {
        assert!(build_mquwm_binary(4).is_err());
        assert!(build_mquwm_binary(2).is_err());
    }

    #[test]
    fn unsupported_m_outside_table() {
        assert!(matches!(bch_narrow_sense(9), Err(CodeError::UnsupportedM { m: 9 })));
        assert!(matches!(Gf2m::new(16), Err(CodeError::UnsupportedM { m: 16 })));
    }

    #[test]
    fn weight_set_enumeration_cap() {
        let gens: Vec<Word> = (0..25).map(|i| 1u128 << i).collect();
        let code = BinaryCode::new(30, &gens).unwrap();
        assert!(matches!(code.weight_set(), Err(CodeError::TooLarge { dim: 25, .. })));
    }
}
