//! Z4 machinery: Hensel-lifted primitive polynomials, Kerdock codes,
//! ZRM(1,m), the Gray map, and symmetrized correlation spectra.
//!
//! Coordinate conventions match the binary module: cyclic coordinates are
//! coefficients of x^i at position i (equivalently evaluations at α^i), the
//! extension coordinate comes last, and the Gray image of coordinate i
//! occupies output bits 2i and 2i+1.

use serde::Serialize;
use std::collections::BTreeSet;

use crate::binary::{primitive_poly, rm1_on_points, BinaryCode, Gf2m, Word};
use crate::error::Z4Error;
use crate::matrix::MatrixFamily;
use crate::spherical::{code_to_family, CrossPolytopeDecomposition, SphericalCode};

/// Polynomial over the integers mod 4, coefficients ascending, leading
/// coefficient nonzero (except for the zero polynomial `[0]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z4Polynomial {
    pub coeffs: Vec<u8>,
}

impl Z4Polynomial {
    pub fn new(mut coeffs: Vec<u8>) -> Self {
        for c in &mut coeffs {
            *c %= 4;
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Z4Polynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0u16; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u16 * b as u16) % 4;
            }
        }
        Z4Polynomial::new(out.into_iter().map(|c| c as u8).collect())
    }

    /// Division with remainder; the divisor's leading coefficient must be a
    /// unit (1 or 3).
    pub fn divmod(&self, den: &Self) -> Result<(Self, Self), Z4Error> {
        let lead = *den.coeffs.last().unwrap();
        if lead.is_multiple_of(2) {
            return Err(Z4Error::LiftFailure("division by a non-unit leading coefficient".into()));
        }
        let inv = if lead == 1 { 1u8 } else { 3 };
        let mut rem: Vec<u8> = self.coeffs.clone();
        let dd = den.degree();
        if rem.len() <= dd {
            return Ok((Z4Polynomial::new(vec![0]), Z4Polynomial::new(rem)));
        }
        let mut quo = vec![0u8; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = (rem[i] * inv) % 4;
            if c != 0 {
                quo[i - dd] = c;
                for (j, &dc) in den.coeffs.iter().enumerate() {
                    let idx = i - dd + j;
                    rem[idx] = (rem[idx] + 4 - (c * dc) % 4) % 4;
                }
            }
        }
        Ok((Z4Polynomial::new(quo), Z4Polynomial::new(rem)))
    }

    /// x^deg · p(1/x): coefficients reversed, normalized to a unit leading
    /// coefficient of 1.
    pub fn reciprocal(&self) -> Self {
        let mut coeffs: Vec<u8> = self.coeffs.iter().rev().copied().collect();
        if let Some(&lead) = coeffs.last() {
            if lead == 3 {
                for c in &mut coeffs {
                    *c = (*c * 3) % 4;
                }
            }
        }
        Z4Polynomial::new(coeffs)
    }

    pub fn reduce_mod2(&self) -> u64 {
        self.coeffs.iter().enumerate().fold(0, |acc, (i, &c)| acc | (((c & 1) as u64) << i))
    }

    /// x^n − 1 over Z4.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![0u8; n + 1];
        coeffs[0] = 3;
        coeffs[n] = 1;
        Z4Polynomial::new(coeffs)
    }
}

/// The Hensel lift of the pinned degree-m binary primitive polynomial:
/// h(x²) = (−1)^m f(x)·f(−x) mod 4 (Graeffe step). Verified to reduce to f
/// mod 2 and to divide x^{2^m−1} − 1 over Z4.
pub fn hensel_lift_primitive(m: u32) -> Result<Z4Polynomial, Z4Error> {
    let fbits = primitive_poly(m).map_err(|_| Z4Error::UnsupportedM { m })?;
    let f = Z4Polynomial::new((0..=m as usize).map(|i| ((fbits >> i) & 1) as u8).collect());
    let fneg = Z4Polynomial::new(
        f.coeffs.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c } else { (4 - c) % 4 }).collect(),
    );
    let prod = f.mul(&fneg);
    let sign_flip = m % 2 == 1;
    let mut h = vec![0u8; m as usize + 1];
    for (i, &c) in prod.coeffs.iter().enumerate() {
        if i % 2 == 1 {
            if c != 0 {
                return Err(Z4Error::LiftFailure("odd coefficient survives the Graeffe step".into()));
            }
        } else {
            h[i / 2] = if sign_flip { (4 - c) % 4 } else { c };
        }
    }
    let h = Z4Polynomial::new(h);
    if h.reduce_mod2() != fbits {
        return Err(Z4Error::LiftFailure("lift does not reduce to f mod 2".into()));
    }
    let n = (1usize << m) - 1;
    let (_, rem) = Z4Polynomial::x_pow_minus_one(n).divmod(&h)?;
    if !rem.is_zero() {
        return Err(Z4Error::LiftFailure(format!("h does not divide x^{n} - 1 mod 4")));
    }
    Ok(h)
}

/// One Z4 word: coordinates as digits 0..=3.
pub type Z4Word = Vec<u8>;

fn word_add(a: &[u8], b: &[u8]) -> Z4Word {
    a.iter().zip(b).map(|(x, y)| (x + y) % 4).collect()
}

fn word_scale(a: &[u8], t: u8) -> Z4Word {
    a.iter().map(|x| (x * t) % 4).collect()
}

/// A Z4-linear code in canonical blocked generator form: k1 rows with unit
/// pivots, then k2 rows with pivot 2; size = 4^{k1}·2^{k2}.
#[derive(Debug, Clone)]
pub struct Z4Code {
    length: usize,
    // (pivot column, pivot kind 1|2, row) in pivot-column order
    pivots: Vec<(usize, u8, Z4Word)>,
}

impl Z4Code {
    pub fn new(length: usize, generators: &[Z4Word]) -> Self {
        let mut work: Vec<Z4Word> = generators
            .iter()
            .filter(|r| r.iter().any(|&c| c != 0))
            .map(|r| r.iter().map(|&c| c % 4).collect())
            .collect();
        let mut pivots: Vec<(usize, u8, Z4Word)> = Vec::new();
        for col in 0..length {
            if let Some(pos) = work.iter().position(|r| r[col] % 2 == 1) {
                let mut piv = work.swap_remove(pos);
                if piv[col] == 3 {
                    piv = word_scale(&piv, 3);
                }
                for r in work.iter_mut() {
                    let c = r[col];
                    if c != 0 {
                        *r = word_add(r, &word_scale(&piv, 4 - c));
                    }
                }
                // clear this column from earlier pivot rows where possible
                for (_, _, prow) in pivots.iter_mut() {
                    let c = prow[col];
                    if c != 0 {
                        *prow = word_add(prow, &word_scale(&piv, 4 - c));
                    }
                }
                work.retain(|r| r.iter().any(|&c| c != 0));
                pivots.push((col, 1, piv));
            } else if let Some(pos) = work.iter().position(|r| r[col] == 2) {
                let piv = work.swap_remove(pos);
                for r in work.iter_mut() {
                    if r[col] == 2 {
                        *r = word_add(r, &word_scale(&piv, 3));
                    }
                }
                for (_, kind, prow) in pivots.iter_mut() {
                    // only order-4 rows can carry a clearable 2 here
                    if *kind == 1 && prow[col] == 2 {
                        *prow = word_add(prow, &word_scale(&piv, 3));
                    }
                }
                work.retain(|r| r.iter().any(|&c| c != 0));
                pivots.push((col, 2, piv));
            }
        }
        pivots.sort_by_key(|(c, _, _)| *c);
        Z4Code { length, pivots }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn k1(&self) -> usize {
        self.pivots.iter().filter(|(_, k, _)| *k == 1).count()
    }

    pub fn k2(&self) -> usize {
        self.pivots.iter().filter(|(_, k, _)| *k == 2).count()
    }

    pub fn size(&self) -> u128 {
        4u128.pow(self.k1() as u32) * 2u128.pow(self.k2() as u32)
    }

    /// Generator rows in canonical order (unit-pivot rows first).
    pub fn generators(&self) -> Vec<Z4Word> {
        let mut rows: Vec<(u8, usize, Z4Word)> =
            self.pivots.iter().map(|(c, k, r)| (*k, *c, r.clone())).collect();
        rows.sort_by_key(|(k, c, _)| (*k, *c));
        rows.into_iter().map(|(_, _, r)| r).collect()
    }

    pub fn reduce(&self, word: &[u8]) -> Z4Word {
        let mut w: Z4Word = word.iter().map(|&c| c % 4).collect();
        for (col, kind, row) in &self.pivots {
            let c = w[*col];
            match kind {
                1 if c != 0 => w = word_add(&w, &word_scale(row, 4 - c)),
                2 if c == 2 => w = word_add(&w, &word_scale(row, 3)),
                _ => {}
            }
        }
        w
    }

    pub fn contains_word(&self, word: &[u8]) -> bool {
        self.reduce(word).iter().all(|&c| c == 0)
    }

    pub fn contains_code(&self, other: &Z4Code) -> bool {
        other.generators().iter().all(|g| self.contains_word(g))
    }

    /// Every codeword, by odometer over the canonical generators.
    pub fn codewords(&self) -> Vec<Z4Word> {
        let mut words: Vec<Z4Word> = vec![vec![0; self.length]];
        for (_, kind, row) in &self.pivots {
            let order = if *kind == 1 { 4 } else { 2 };
            let mut next = Vec::with_capacity(words.len() * order as usize);
            for w in &words {
                for t in 0..order {
                    next.push(word_add(w, &word_scale(row, t)));
                }
            }
            words = next;
        }
        words
    }
}

/// The Z4-Kerdock code K(m) of length 2^m: the cyclic code K'(m) generated
/// by the reciprocal of (x^{2^m−1}−1)/((x−1)h(x)), extended by an overall
/// parity symbol equal to minus the coordinate sum mod 4.
pub fn kerdock(m: u32) -> Result<Z4Code, Z4Error> {
    if m < 2 {
        return Err(Z4Error::UnsupportedM { m });
    }
    let h = hensel_lift_primitive(m)?;
    let n = (1usize << m) - 1;
    let xn1 = Z4Polynomial::x_pow_minus_one(n);
    let xm1 = Z4Polynomial::new(vec![3, 1]);
    let (q1, r1) = xn1.divmod(&xm1)?;
    if !r1.is_zero() {
        return Err(Z4Error::LiftFailure("x - 1 must divide x^n - 1".into()));
    }
    let (gstar, r2) = q1.divmod(&h)?;
    if !r2.is_zero() {
        return Err(Z4Error::LiftFailure("h must divide (x^n - 1)/(x - 1)".into()));
    }
    let g = gstar.reciprocal();
    let deg = g.degree();
    let mut gens: Vec<Z4Word> = Vec::new();
    for i in 0..n - deg {
        let mut row = vec![0u8; n];
        for (j, &c) in g.coeffs.iter().enumerate() {
            row[i + j] = c;
        }
        let parity = (4 - row.iter().map(|&c| c as u32).sum::<u32>() % 4) % 4;
        row.push(parity as u8);
        gens.push(row);
    }
    Ok(Z4Code::new(n + 1, &gens))
}

/// Field-point labels shared with the binary module: position i < n carries
/// α^i, the extension position carries 0.
fn point_labels(m: u32) -> Result<Vec<u64>, Z4Error> {
    let field = Gf2m::new(m).map_err(|_| Z4Error::UnsupportedM { m })?;
    Ok(field.field_points())
}

/// ZRM(1,m): generated by the all-ones vector (order 4) and the doubled
/// coordinate functionals 2·x_b of the point labels (order 2).
pub fn zrm1(m: u32) -> Result<Z4Code, Z4Error> {
    let labels = point_labels(m)?;
    let len = labels.len();
    let mut gens: Vec<Z4Word> = vec![vec![1; len]];
    for b in 0..m {
        gens.push(labels.iter().map(|&e| 2 * ((e >> b) & 1) as u8).collect());
    }
    Ok(Z4Code::new(len, &gens))
}

/// The Gray map φ: 0↦00, 1↦01, 2↦11, 3↦10, componentwise; the two output
/// bits of coordinate i land at positions 2i and 2i+1.
pub fn gray(word: &[u8]) -> Word {
    let mut out: Word = 0;
    for (i, &c) in word.iter().enumerate() {
        let (b0, b1) = match c % 4 {
            0 => (0, 0),
            1 => (0, 1),
            2 => (1, 1),
            _ => (1, 0),
        };
        out |= (b0 as Word) << (2 * i);
        out |= (b1 as Word) << (2 * i + 1);
    }
    out
}

/// ψ∘φ: a Z4 word as a ±1 vector of twice its length.
pub fn psi_phi(word: &[u8]) -> Vec<i64> {
    crate::binary::psi(gray(word), 2 * word.len())
}

pub fn lee_weight(word: &[u8]) -> u32 {
    word.iter().map(|&c| match c % 4 { 0 => 0, 2 => 2, _ => 1 }).sum()
}

/// The set of (n_0−n_2, n_1−n_3) over all codewords, where n_i counts
/// coordinates equal to i: the real and imaginary parts of the symmetrized
/// correlation Σ i^{x_j}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrelationSpectrum {
    pub values: BTreeSet<(i64, i64)>,
}

pub fn correlation_spectrum(code: &Z4Code) -> CorrelationSpectrum {
    let values = code
        .codewords()
        .into_iter()
        .map(|w| {
            let mut n = [0i64; 4];
            for &c in &w {
                n[c as usize] += 1;
            }
            (n[0] - n[2], n[1] - n[3])
        })
        .collect();
    CorrelationSpectrum { values }
}

/// Hypothesis checks and measured outcome of the Z4 MQUWM pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct Z4PipelineReport {
    pub m: u32,
    pub z4_length: usize,
    pub kerdock_size: u128,
    pub zrm_size: u128,
    pub zrm_subcode: bool,
    pub spectrum: Vec<(i64, i64)>,
    pub coset_count: usize,
    pub matrix_order: usize,
    pub inner_products: Vec<i64>,
    pub measured_scale: u64,
    pub gray_image_linear: bool,
    /// A pair of Gray-image words whose XOR leaves the image, when one exists.
    pub nonlinearity_witness: Option<(String, String)>,
    pub params: crate::matrix::FamilyParams,
    pub family_size: usize,
}

/// Builds MQUWM from the cosets of ZRM(1,m) in the Kerdock code K(m),
/// mapped through ψ∘φ. The achieved parameters are measured from the
/// constructed vectors and reported, never assumed.
pub fn build_mquwm_z4(m: u32) -> Result<(MatrixFamily, Z4PipelineReport), crate::error::Error> {
    let k = kerdock(m)?;
    let z = zrm1(m)?;
    if !k.contains_code(&z) {
        return Err(Z4Error::HypothesisFailed("ZRM(1,m) is not a subcode of K(m)".into()).into());
    }
    let kwords = {
        let mut w = k.codewords();
        w.sort();
        w
    };
    let zwords = z.codewords();
    // lexicographically least representative per coset
    let mut reps: Vec<Z4Word> = Vec::new();
    let mut seen: std::collections::HashSet<Z4Word> = std::collections::HashSet::new();
    for w in &kwords {
        if seen.contains(w) {
            continue;
        }
        reps.push(w.clone());
        for zw in &zwords {
            seen.insert(word_add(w, zw));
        }
    }
    let order = 2 * k.length();
    let mut parts_as_vectors: Vec<Vec<Vec<i64>>> = Vec::with_capacity(reps.len());
    let mut vectors = Vec::with_capacity(kwords.len());
    for rep in &reps {
        let part: Vec<Vec<i64>> = zwords.iter().map(|zw| psi_phi(&word_add(rep, zw))).collect();
        vectors.extend(part.iter().cloned());
        parts_as_vectors.push(part);
    }
    let code_set = SphericalCode::new(vectors)?;
    let parts: Vec<Vec<usize>> = parts_as_vectors
        .iter()
        .map(|part| part.iter().map(|v| code_set.index_of(v).expect("vector present")).collect())
        .collect();
    let decomp = CrossPolytopeDecomposition::new(code_set.dimension(), parts);
    // cross-coset inner products must be {0, ±2b} for a single b
    let ips = crate::spherical::inner_product_set(&code_set);
    let minus_k = -(order as i64);
    let mut magnitudes: BTreeSet<i64> = BTreeSet::new();
    for &v in &ips.values {
        if v != 0 && v != minus_k {
            magnitudes.insert(v.abs());
        }
    }
    if magnitudes.len() > 1 {
        let bad = *magnitudes.iter().last().unwrap();
        return Err(Z4Error::HypothesisFailed(format!(
            "cross-coset inner products are not a single ±2b: magnitudes {magnitudes:?}, offending value {bad}"
        ))
        .into());
    }
    let s = magnitudes.into_iter().next().unwrap_or(0);
    if s == 0 {
        return Err(Z4Error::HypothesisFailed("no nonzero cross-coset inner product".into()).into());
    }
    let scale = (s * s) as u64;
    let family = code_to_family(&code_set, &decomp, scale, false)?;
    // Gray-image linearity probe (the image is famously nonlinear for m >= 2)
    let gray_words: std::collections::HashSet<Word> = kwords.iter().map(|w| gray(w)).collect();
    let mut witness = None;
    'outer: for x in &gray_words {
        for y in &gray_words {
            if !gray_words.contains(&(x ^ y)) {
                witness = Some((format!("{x:0width$b}", width = order), format!("{y:0width$b}", width = order)));
                break 'outer;
            }
        }
    }
    let spectrum = correlation_spectrum(&k);
    let report = Z4PipelineReport {
        m,
        z4_length: k.length(),
        kerdock_size: k.size(),
        zrm_size: z.size(),
        zrm_subcode: true,
        spectrum: spectrum.values.iter().copied().collect(),
        coset_count: reps.len(),
        matrix_order: order,
        inner_products: ips.values.iter().copied().collect(),
        measured_scale: scale,
        gray_image_linear: witness.is_none(),
        nonlinearity_witness: witness,
        params: family.params,
        family_size: family.size(),
    };
    Ok((family, report))
}

/// RM(1, m+1) on the Gray-induced point labeling of ZRM(1,m): position
/// 2i+t carries the label (coords(point_i), t). The Gray image of ZRM(1,m)
/// equals this code as a set; under other point orders the two are only
/// permutation-equivalent.
pub fn rm1_gray_induced(m: u32) -> Result<BinaryCode, Z4Error> {
    let labels = point_labels(m)?;
    let mut induced = Vec::with_capacity(2 * labels.len());
    for &p in &labels {
        for t in 0..2u64 {
            induced.push(p | (t << m));
        }
    }
    Ok(rm1_on_points(&induced, m + 1))
}
