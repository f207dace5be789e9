//! Fixed-capacity multi-word bitvectors.
//!
//! Bit `j = 0` is the most significant bit of word 0, so a machine left shift
//! moves bits toward `j = 0`. Shifted-in bits enter at the least significant
//! end (`j = m - 1`) as zeros. Bits past `len` are kept zero.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported bitvector length.
pub const MAX_W: usize = 1024;

pub(crate) const WORD_BITS: usize = 64;
pub(crate) const MAX_WORDS: usize = MAX_W / WORD_BITS;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Machine mask selecting bit `j` inside its word.
#[inline]
pub(crate) fn bit_mask(j: usize) -> u64 {
    1u64 << (WORD_BITS - 1 - j % WORD_BITS)
}

/// Mask of the valid (high) bits of the last word of a `len`-bit vector.
#[inline]
pub(crate) fn last_word_mask(len: usize) -> u64 {
    let used = len - (words_for(len) - 1) * WORD_BITS;
    if used == WORD_BITS {
        !0
    } else {
        !0u64 << (WORD_BITS - used)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: [u64; MAX_WORDS],
    len: usize,
}

impl BitVector {
    /// All-zero vector of `len` bits.
    pub fn zeros(len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(BitVector {
            words: [0; MAX_WORDS],
            len,
        })
    }

    /// All-one vector of `len` bits.
    pub fn ones(len: usize) -> Result<Self> {
        let mut v = Self::zeros(len)?;
        let nw = words_for(len);
        v.words[..nw].fill(!0);
        v.words[nw - 1] &= last_word_mask(len);
        Ok(v)
    }

    /// Builds a vector from the leading `len` bits of `words` (j = 0 first).
    pub(crate) fn from_words(words: &[u64], len: usize) -> Self {
        debug_assert!((1..=MAX_W).contains(&len));
        let nw = words_for(len);
        let mut v = BitVector {
            words: [0; MAX_WORDS],
            len,
        };
        v.words[..nw].copy_from_slice(&words[..nw]);
        v.words[nw - 1] &= last_word_mask(len);
        v
    }

    /// Parses a string of `'0'`/`'1'` characters, leftmost character is j = 0.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.len())?;
        for (j, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(j, true),
                _ => return Err(Error::Input(format!("invalid bit character {c:?}"))),
            }
        }
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub(crate) fn words(&self) -> &[u64] {
        &self.words[..words_for(self.len)]
    }

    #[inline]
    pub fn bit_at(&self, j: usize) -> bool {
        assert!(
            j < self.len,
            "bit index {j} out of range for length {}",
            self.len
        );
        self.words[j / WORD_BITS] & bit_mask(j) != 0
    }

    /// Bit j = 0.
    #[inline]
    pub fn msb(&self) -> bool {
        self.bit_at(0)
    }

    #[inline]
    pub(crate) fn set(&mut self, j: usize, value: bool) {
        debug_assert!(j < self.len);
        if value {
            self.words[j / WORD_BITS] |= bit_mask(j);
        } else {
            self.words[j / WORD_BITS] &= !bit_mask(j);
        }
    }

    /// Moves every bit `s` places toward j = 0, filling zeros at the low end.
    pub fn shl(&self, s: usize) -> Self {
        assert!(s <= self.len, "shift {s} exceeds length {}", self.len);
        let nw = words_for(self.len);
        let word_shift = s / WORD_BITS;
        let bit_shift = s % WORD_BITS;
        let mut out = BitVector {
            words: [0; MAX_WORDS],
            len: self.len,
        };
        for w in 0..nw.saturating_sub(word_shift) {
            let src = w + word_shift;
            let hi = self.words[src] << bit_shift;
            // the carry word: two shifts so bit_shift == 0 never shifts by 64
            let lo = if bit_shift != 0 && src + 1 < nw {
                self.words[src + 1] >> (WORD_BITS - bit_shift)
            } else {
                0
            };
            out.words[w] = hi | lo;
        }
        out
    }

    /// `shl(1)` with bit `len - 1` set to `tail`.
    pub(crate) fn shl1_tail(&self, tail: bool) -> Self {
        let mut out = *self;
        let nw = words_for(self.len);
        shl1_tail_into(&mut out.words[..nw], &self.words[..nw], self.len, tail);
        out
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    /// Leading `b` bits as a new vector of length `b`.
    pub fn slice_high(&self, b: usize) -> Self {
        assert!(
            (1..=self.len).contains(&b),
            "slice length {b} out of range for length {}",
            self.len
        );
        Self::from_words(&self.words, b)
    }

    pub fn count_zeros(&self) -> usize {
        (0..self.len).filter(|&j| !self.bit_at(j)).count()
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.len, other.len, "bitvector length mismatch");
        let mut out = *self;
        for w in 0..words_for(self.len) {
            out.words[w] = f(self.words[w], other.words[w]);
        }
        out
    }
}

fn check_len(len: usize) -> Result<()> {
    if (1..=MAX_W).contains(&len) {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "bitvector length {len} outside 1..={MAX_W}"
        )))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            f.write_str(if self.bit_at(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

// Slice kernels used by the DP hot loop. All operate on `words_for(len)` words.

/// `dst = src << 1`, then bit `len - 1` is set to `tail`.
#[inline(always)]
pub(crate) fn shl1_tail_into(dst: &mut [u64], src: &[u64], len: usize, tail: bool) {
    let nw = dst.len();
    for w in 0..nw - 1 {
        dst[w] = (src[w] << 1) | (src[w + 1] >> (WORD_BITS - 1));
    }
    dst[nw - 1] = src[nw - 1] << 1;
    if tail {
        dst[(len - 1) / WORD_BITS] |= bit_mask(len - 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain per-bit model, j = 0 first.
    #[derive(Clone, Debug, PartialEq)]
    struct Naive(Vec<bool>);

    impl Naive {
        fn from_bv(v: &BitVector) -> Self {
            Naive((0..v.len()).map(|j| v.bit_at(j)).collect())
        }
        fn shl(&self, s: usize) -> Self {
            let m = self.0.len();
            Naive((0..m).map(|j| j + s < m && self.0[j + s]).collect())
        }
        fn and(&self, o: &Self) -> Self {
            Naive(self.0.iter().zip(&o.0).map(|(a, b)| *a && *b).collect())
        }
        fn or(&self, o: &Self) -> Self {
            Naive(self.0.iter().zip(&o.0).map(|(a, b)| *a || *b).collect())
        }
        fn to_bv(&self) -> BitVector {
            let mut v = BitVector::zeros(self.0.len()).unwrap();
            for (j, &b) in self.0.iter().enumerate() {
                v.set(j, b);
            }
            v
        }
    }

    fn bv(s: &str) -> BitVector {
        BitVector::from_bit_str(s).unwrap()
    }

    fn padding_clear(v: &BitVector) -> bool {
        let nw = words_for(v.len());
        v.words[nw - 1] & !last_word_mask(v.len()) == 0 && v.words[nw..].iter().all(|&w| w == 0)
    }

    #[test]
    fn ones_small() {
        assert_eq!(BitVector::ones(4).unwrap().to_string(), "1111");
        assert_eq!(BitVector::ones(1).unwrap().to_string(), "1");
    }

    #[test]
    fn ones_spans_two_words() {
        let v = BitVector::ones(65).unwrap();
        assert_eq!(Naive::from_bv(&v), Naive(vec![true; 65]));
        assert_eq!(v.words[0], !0);
        assert_eq!(v.words[1], 1u64 << 63);
        assert!(padding_clear(&v));
    }

    #[test]
    fn ones_rejects_out_of_range() {
        assert!(matches!(BitVector::ones(0), Err(Error::Config(_))));
        assert!(matches!(BitVector::ones(MAX_W + 1), Err(Error::Config(_))));
        assert!(BitVector::ones(MAX_W).is_ok());
    }

    #[test]
    fn shl_examples() {
        assert_eq!(bv("1111").shl(1).to_string(), "1110");
        assert_eq!(BitVector::ones(4).unwrap().shl(2).to_string(), "1100");
        assert_eq!(bv("1011").shl(4).to_string(), "0000");
        assert_eq!(bv("1011").shl(0), bv("1011"));
    }

    #[test]
    fn shl_across_word_boundary() {
        let mut naive = Naive(vec![false; 65]);
        for j in (0..65).step_by(3) {
            naive.0[j] = true;
        }
        naive.0[64] = true;
        let v = naive.to_bv();
        for s in [1, 2, 63, 64, 65] {
            assert_eq!(Naive::from_bv(&v.shl(s)), naive.shl(s), "s = {s}");
        }
    }

    #[test]
    fn logic_and_msb() {
        assert_eq!(bv("1110").and(&bv("1011")).to_string(), "1010");
        assert_eq!(bv("1110").or(&bv("1011")).to_string(), "1111");
        assert!(!bv("0111").msb());
        assert!(!bv("1101").bit_at(2));
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn length_mismatch_panics() {
        let _ = bv("101").and(&bv("1010"));
    }

    #[test]
    fn slice_high_examples() {
        assert_eq!(bv("1011").slice_high(2).to_string(), "10");
        let v = bv("1011");
        assert_eq!(v.slice_high(4), v);
        let mut naive = Naive(vec![false; 64]);
        for j in [0, 5, 31, 32, 40, 63] {
            naive.0[j] = true;
        }
        let s = naive.to_bv().slice_high(32);
        assert_eq!(Naive::from_bv(&s), Naive(naive.0[..32].to_vec()));
        assert!(padding_clear(&s));
    }

    #[test]
    fn single_word_agrees_with_u64() {
        // m = 64: shl is a machine shift, and/or are machine ops
        let a: u64 = 0xDEAD_BEEF_0123_4567;
        let b: u64 = 0x0F0F_F0F0_AAAA_5555;
        let va = BitVector::from_words(&[a], 64);
        let vb = BitVector::from_words(&[b], 64);
        for s in 0..64 {
            assert_eq!(va.shl(s).words[0], a << s);
        }
        assert_eq!(va.and(&vb).words[0], a & b);
        assert_eq!(va.or(&vb).words[0], a | b);
        assert_eq!(va.msb(), a >> 63 == 1);
    }

    #[test]
    fn shl1_tail_kernel_matches_shl() {
        for len in [1, 5, 63, 64, 65, 127, 128, 129, 200] {
            let mut naive = Naive(vec![false; len]);
            for j in (0..len).step_by(2) {
                naive.0[j] = true;
            }
            let v = naive.to_bv();
            let nw = words_for(len);
            for tail in [false, true] {
                let mut dst = vec![0u64; nw];
                shl1_tail_into(&mut dst, v.words(), len, tail);
                let mut expect = naive.shl(1);
                expect.0[len - 1] = tail;
                assert_eq!(Naive::from_bv(&BitVector::from_words(&dst, len)), expect);
            }
        }
    }

    fn arb_naive() -> impl Strategy<Value = Naive> {
        (1usize..=3 * WORD_BITS)
            .prop_flat_map(|m| prop::collection::vec(any::<bool>(), m).prop_map(Naive))
    }

    fn arb_pair() -> impl Strategy<Value = (Naive, Naive)> {
        (1usize..=3 * WORD_BITS).prop_flat_map(|m| {
            (
                prop::collection::vec(any::<bool>(), m).prop_map(Naive),
                prop::collection::vec(any::<bool>(), m).prop_map(Naive),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn differential_against_naive((a, b) in arb_pair(), s_seed in any::<usize>(), b_seed in any::<usize>()) {
            let m = a.0.len();
            let (va, vb) = (a.to_bv(), b.to_bv());
            let s = s_seed % (m + 1);
            let keep = 1 + b_seed % m;
            prop_assert_eq!(Naive::from_bv(&va.shl(s)), a.shl(s));
            prop_assert_eq!(Naive::from_bv(&va.and(&vb)), a.and(&b));
            prop_assert_eq!(Naive::from_bv(&va.or(&vb)), a.or(&b));
            prop_assert_eq!(va.msb(), a.0[0]);
            prop_assert_eq!(Naive::from_bv(&va.slice_high(keep)), Naive(a.0[..keep].to_vec()));
            let ones = BitVector::ones(m).unwrap();
            prop_assert_eq!(Naive::from_bv(&ones), Naive(vec![true; m]));
            prop_assert!(padding_clear(&va.shl(s)));
            prop_assert!(padding_clear(&ones));
        }

        #[test]
        fn shifts_compose(a in arb_naive(), x in any::<usize>(), y in any::<usize>()) {
            let v = a.to_bv();
            let m = v.len();
            let s1 = x % (m + 1);
            let s2 = y % (m - s1 + 1);
            prop_assert_eq!(v.shl(s1).shl(s2), v.shl(s1 + s2));
            let sh = v.shl(s1);
            for j in 0..m {
                let expect = j + s1 < m && v.bit_at(j + s1);
                prop_assert_eq!(sh.bit_at(j), expect);
            }
        }
    }
}
