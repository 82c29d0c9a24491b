//! Barker sequences, Kronecker-product composite codes and the zero-padded
//! 128-symbol pseudo-noise code used as the radar reference waveform.
//!
//! The composite core is B11 ⊗ B11 (121 symbols). Three zeros in front and
//! four behind bring it to 128 symbols so the correlator can run a radix-2
//! FFT over exactly one code period.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Lengths for which a Barker sequence exists.
pub const BARKER_LENGTHS: [usize; 7] = [2, 3, 4, 5, 7, 11, 13];

const BARKER2: [i8; 2] = [1, -1];
const BARKER3: [i8; 3] = [1, 1, -1];
const BARKER4: [i8; 4] = [1, 1, -1, 1];
const BARKER5: [i8; 5] = [1, 1, 1, -1, 1];
const BARKER7: [i8; 7] = [1, 1, 1, -1, -1, 1, -1];
const BARKER11: [i8; 11] = [1, 1, 1, -1, -1, -1, 1, -1, -1, 1, -1];
const BARKER13: [i8; 13] = [1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1];

/// Length of the padded pseudo-noise code.
pub const PNC_LEN: usize = 128;
pub const PNC_PAD_FRONT: usize = 3;
pub const PNC_PAD_BACK: usize = 4;

/// A non-empty sequence of ±1 symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipolarSequence(Vec<i8>);

impl BipolarSequence {
    pub fn new(symbols: Vec<i8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidSequence(
                "bipolar sequence must be non-empty".into(),
            ));
        }
        if let Some(i) = symbols.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSequence(format!(
                "symbol {} at index {i} is not ±1",
                symbols[i]
            )));
        }
        Ok(Self(symbols))
    }

    pub fn symbols(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A {-1, 0, +1} code whose zeros are confined to leading and trailing pads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PaddedCode {
    symbols: Vec<i8>,
    pad_front: usize,
    pad_back: usize,
}

impl PaddedCode {
    /// Surround a bipolar core with the given number of zeros.
    pub fn from_core(core: &BipolarSequence, pad_front: usize, pad_back: usize) -> Self {
        let mut symbols = Vec::with_capacity(pad_front + core.len() + pad_back);
        symbols.resize(pad_front, 0);
        symbols.extend_from_slice(core.symbols());
        symbols.resize(pad_front + core.len() + pad_back, 0);
        Self {
            symbols,
            pad_front,
            pad_back,
        }
    }

    pub fn symbols(&self) -> &[i8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn pad_front(&self) -> usize {
        self.pad_front
    }

    pub fn pad_back(&self) -> usize {
        self.pad_back
    }

    pub fn core(&self) -> &[i8] {
        &self.symbols[self.pad_front..self.symbols.len() - self.pad_back]
    }

    /// Sum of squared symbols.
    pub fn energy(&self) -> i64 {
        self.symbols
            .iter()
            .map(|&s| i64::from(s) * i64::from(s))
            .sum()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.symbols
            .iter()
            .map(|&s| Complex64::new(f64::from(s), 0.0))
            .collect()
    }
}

/// Standard Barker sequence of length `n`.
pub fn barker(n: usize) -> Result<BipolarSequence> {
    let table: &[i8] = match n {
        2 => &BARKER2,
        3 => &BARKER3,
        4 => &BARKER4,
        5 => &BARKER5,
        7 => &BARKER7,
        11 => &BARKER11,
        13 => &BARKER13,
        _ => return Err(Error::UnsupportedBarkerLength(n)),
    };
    Ok(BipolarSequence(table.to_vec()))
}

/// Each `outer` symbol scales one full copy of `inner`.
pub fn kronecker_product(outer: &BipolarSequence, inner: &BipolarSequence) -> BipolarSequence {
    let symbols = outer
        .symbols()
        .iter()
        .flat_map(|&o| inner.symbols().iter().map(move |&i| o * i))
        .collect();
    BipolarSequence(symbols)
}

/// `[0, 0, 0, B11 ⊗ B11, 0, 0, 0, 0]`.
pub fn build_pnc128() -> PaddedCode {
    let b11 = BipolarSequence(BARKER11.to_vec());
    let core = kronecker_product(&b11, &b11);
    PaddedCode::from_core(&core, PNC_PAD_FRONT, PNC_PAD_BACK)
}

/// Hold every symbol for `factor` consecutive samples.
pub fn repeat_symbols(code: &PaddedCode, factor: usize) -> Result<PaddedCode> {
    if factor < 1 {
        return Err(Error::validation("repeat factor", "must be at least 1"));
    }
    let symbols = code
        .symbols
        .iter()
        .flat_map(|&s| std::iter::repeat_n(s, factor))
        .collect();
    Ok(PaddedCode {
        symbols,
        pad_front: code.pad_front * factor,
        pad_back: code.pad_back * factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Direct summation over every lag; independent of the code tables.
    fn aperiodic_autocorrelation(seq: &[i8]) -> Vec<i32> {
        let n = seq.len();
        (0..n)
            .map(|lag| {
                (0..n - lag)
                    .map(|i| i32::from(seq[i]) * i32::from(seq[i + lag]))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn barker11_matches_published_sequence() {
        assert_eq!(
            barker(11).unwrap().symbols(),
            &[1, 1, 1, -1, -1, -1, 1, -1, -1, 1, -1]
        );
    }

    #[test]
    fn barker2_is_plus_minus() {
        assert_eq!(barker(2).unwrap().symbols(), &[1, -1]);
    }

    #[test]
    fn every_barker_has_unit_sidelobes() {
        for n in BARKER_LENGTHS {
            let code = barker(n).unwrap();
            assert_eq!(code.len(), n);
            let ac = aperiodic_autocorrelation(code.symbols());
            assert_eq!(ac[0], n as i32);
            assert!(ac[1..].iter().all(|v| v.abs() <= 1), "n={n}: {ac:?}");
        }
    }

    #[test]
    fn unsupported_barker_length_names_valid_set() {
        for n in [0, 1, 6, 8, 12, 14, 121] {
            let err = barker(n).unwrap_err();
            assert!(matches!(err, Error::UnsupportedBarkerLength(m) if m == n));
            assert!(err.to_string().contains("2, 3, 4, 5, 7, 11, 13"));
        }
    }

    #[test]
    fn bipolar_rejects_zero_and_empty() {
        assert!(BipolarSequence::new(vec![]).is_err());
        assert!(BipolarSequence::new(vec![1, 0, -1]).is_err());
        assert!(BipolarSequence::new(vec![1, 2]).is_err());
        assert!(BipolarSequence::new(vec![1, -1, -1]).is_ok());
    }

    #[test]
    fn kronecker_b11_block_signs() {
        let b11 = barker(11).unwrap();
        let k = kronecker_product(&b11, &b11);
        assert_eq!(k.len(), 121);
        assert_eq!(&k.symbols()[..11], b11.symbols());
        let signs: Vec<i8> = k.symbols().chunks(11).map(|blk| blk[0]).collect();
        assert_eq!(signs, vec![1, 1, 1, -1, -1, -1, 1, -1, -1, 1, -1]);
        for (j, blk) in k.symbols().chunks(11).enumerate() {
            let expected: Vec<i8> = b11.symbols().iter().map(|&s| s * signs[j]).collect();
            assert_eq!(blk, expected.as_slice());
        }
    }

    #[test]
    fn pnc128_layout() {
        let c = build_pnc128();
        assert_eq!(c.len(), 128);
        assert_eq!(c.pad_front(), 3);
        assert_eq!(c.pad_back(), 4);
        let zeros: Vec<usize> = (0..128).filter(|&i| c.symbols()[i] == 0).collect();
        assert_eq!(zeros, vec![0, 1, 2, 124, 125, 126, 127]);
        assert_eq!(c.core().len(), 121);
        assert_eq!(c.energy(), 121);
        assert_eq!(c, build_pnc128());
    }

    #[test]
    fn repeat_identity_and_doubling() {
        let c = build_pnc128();
        assert_eq!(repeat_symbols(&c, 1).unwrap(), c);
        let r2 = repeat_symbols(&c, 2).unwrap();
        assert_eq!(r2.len(), 256);
        assert_eq!(r2.energy(), 242);
        assert!(repeat_symbols(&c, 0).is_err());
    }

    #[test]
    fn repeat_by_four_leading_symbols() {
        let r4 = repeat_symbols(&build_pnc128(), 4).unwrap();
        let mut expected = vec![0i8; 12];
        expected.extend([1, 1, 1, 1]);
        assert_eq!(&r4.symbols()[..16], expected.as_slice());
        assert_eq!(r4.pad_front(), 12);
        assert_eq!(r4.pad_back(), 16);
    }

    proptest! {
        #[test]
        fn kronecker_stays_bipolar(
            a in prop::collection::vec(prop::bool::ANY, 1..16),
            b in prop::collection::vec(prop::bool::ANY, 1..16),
        ) {
            let to_seq = |v: &[bool]| BipolarSequence::new(v.iter().map(|&x| if x { 1 } else { -1 }).collect()).unwrap();
            let (outer, inner) = (to_seq(&a), to_seq(&b));
            let k = kronecker_product(&outer, &inner);
            prop_assert_eq!(k.len(), outer.len() * inner.len());
            prop_assert!(k.symbols().iter().all(|&s| s == 1 || s == -1));
        }

        #[test]
        fn repeat_composes(a in 1usize..6, b in 1usize..6) {
            let c = build_pnc128();
            let nested = repeat_symbols(&repeat_symbols(&c, a).unwrap(), b).unwrap();
            prop_assert_eq!(repeat_symbols(&c, a * b).unwrap(), nested);
        }
    }
}
