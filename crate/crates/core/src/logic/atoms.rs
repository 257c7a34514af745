use crate::error::{Error, Result};

/// Largest supported number of predicates.
pub const MAX_LEVEL: u32 = 10;

/// The `2^q` atoms of `L_q` in canonical order.
///
/// Atoms are ordered by number of negated predicates (ascending) and, within
/// one negation count, by descending binary value of the sign vector read
/// with `P1` as the most significant bit. For `q = 2` this gives
/// `11, 10, 01, 00`.
///
/// Internally an atom's sign vector is a bit mask with `P_i` at bit `q - i`.
/// That puts the first predicates in the high bits, so dropping trailing
/// predicates is a right shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomTable {
    q: u32,
    masks: Vec<u32>,
    gamma: Vec<u32>,
    index_of: Vec<usize>,
}

pub fn enumerate_atoms(q: u32) -> Result<AtomTable> {
    AtomTable::new(q)
}

impl AtomTable {
    pub fn new(q: u32) -> Result<Self> {
        if q == 0 || q > MAX_LEVEL {
            return Err(Error::LevelOutOfRange { q, max: MAX_LEVEL });
        }
        let full = 1u32 << q;
        let mut masks: Vec<u32> = (0..full).collect();
        masks.sort_by_key(|&m| (q - m.count_ones(), std::cmp::Reverse(m)));
        let gamma = masks.iter().map(|m| q - m.count_ones()).collect();
        let mut index_of = vec![0; full as usize];
        for (i, &m) in masks.iter().enumerate() {
            index_of[m as usize] = i;
        }
        Ok(Self { q, masks, gamma, index_of })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Sign-vector mask of the atom at 0-based position `index`.
    pub fn mask(&self, index: usize) -> u32 {
        self.masks[index]
    }

    /// Number of negated predicates in the atom at 0-based position `index`.
    pub fn gamma(&self, index: usize) -> u32 {
        self.gamma[index]
    }

    pub fn gammas(&self) -> &[u32] {
        &self.gamma
    }

    pub fn index_of_mask(&self, mask: u32) -> usize {
        self.index_of[mask as usize]
    }

    /// Truth value of predicate `P_{pred+1}` in the atom at `index`.
    pub fn sign(&self, index: usize, pred: u32) -> bool {
        (self.masks[index] >> (self.q - 1 - pred)) & 1 == 1
    }

    /// The sign vector as ε values, `P1` first.
    pub fn epsilon(&self, index: usize) -> Vec<u8> {
        (0..self.q).map(|p| self.sign(index, p) as u8).collect()
    }

    /// Bit-string form, e.g. `"10"` for `P1 ∧ ¬P2`.
    pub fn bits(&self, index: usize) -> String {
        self.epsilon(index).iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }

    /// 0-based position of the atom written as a bit-string.
    pub fn parse_bits(&self, bits: &str) -> Result<usize> {
        if bits.len() != self.q as usize || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::InvalidDescriptor(format!(
                "atom {bits:?} is not a {}-bit string",
                self.q
            )));
        }
        let mask = u32::from_str_radix(bits, 2).expect("validated bit-string");
        Ok(self.index_of_mask(mask))
    }

    /// Mask obtained by keeping only the first `to` predicates.
    pub fn truncate_mask(&self, mask: u32, to: u32) -> u32 {
        debug_assert!(to <= self.q);
        mask >> (self.q - to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;

    #[test]
    fn level_one_and_two() {
        let t = enumerate_atoms(1).unwrap();
        assert_eq!((0..2).map(|i| t.bits(i)).collect::<Vec<_>>(), ["1", "0"]);
        assert_eq!(t.gammas(), &[0, 1]);

        let t = enumerate_atoms(2).unwrap();
        assert_eq!(
            (0..4).map(|i| t.bits(i)).collect::<Vec<_>>(),
            ["11", "10", "01", "00"]
        );
        assert_eq!(t.gammas(), &[0, 1, 1, 2]);
    }

    #[test]
    fn level_three_gamma() {
        let t = enumerate_atoms(3).unwrap();
        assert_eq!(t.gammas(), &[0, 1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(t.bits(1), "110");
        assert_eq!(t.bits(3), "011");
    }

    #[test]
    fn invariants_up_to_cap() {
        for q in 1..=MAX_LEVEL {
            let t = enumerate_atoms(q).unwrap();
            assert_eq!(t.len(), 1 << q);
            assert!(t.gammas().windows(2).all(|w| w[0] <= w[1]));
            for k in 0..=q {
                let count = t.gammas().iter().filter(|&&g| g == k).count();
                assert_eq!(num_bigint::BigInt::from(count), binomial(q, k));
            }
            for i in 0..t.len() {
                let zeros = t.epsilon(i).iter().filter(|&&e| e == 0).count() as u32;
                assert_eq!(zeros, t.gamma(i));
                assert_eq!(t.index_of_mask(t.mask(i)), i);
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(enumerate_atoms(0), Err(Error::LevelOutOfRange { .. })));
        assert!(enumerate_atoms(MAX_LEVEL + 1).is_err());
    }

    #[test]
    fn bit_strings_round_trip() {
        let t = enumerate_atoms(3).unwrap();
        for i in 0..t.len() {
            assert_eq!(t.parse_bits(&t.bits(i)).unwrap(), i);
        }
        assert!(t.parse_bits("10").is_err());
        assert!(t.parse_bits("1x0").is_err());
    }
}
