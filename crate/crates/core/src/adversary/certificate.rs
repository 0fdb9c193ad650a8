//! Domain-relative 1-certificates by exhaustive search.

use serde::{Deserialize, Serialize};

use super::{AdversaryError, PartialBooleanFunction};

/// Largest input length the exhaustive search accepts.
pub const MAX_CERTIFICATE_VARIABLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    /// `max` over 1-inputs of the smallest certificate size.
    pub k: usize,
    /// For each 1-input (by domain index), a smallest certificate as 1-based positions.
    pub sets: Vec<(usize, Vec<usize>)>,
}

impl Certificates {
    /// The certificate of domain input `x`, if `x` is a 1-input.
    pub fn of(&self, x: usize) -> Option<&[usize]> {
        self.sets
            .iter()
            .find(|(i, _)| *i == x)
            .map(|(_, s)| s.as_slice())
    }
}

/// Next integer with the same popcount (Gosper's hack).
fn next_same_weight(v: u32) -> u32 {
    let t = v | (v.wrapping_sub(1));
    (t.wrapping_add(1)) | (((!t & (!t).wrapping_neg()) - 1) >> (v.trailing_zeros() + 1))
}

/// Smallest position set hitting every mask, lowest in colex order among ties.
fn min_hitting_set(n: usize, masks: &[u32]) -> u32 {
    if masks.is_empty() {
        return 0;
    }
    for size in 1..=n {
        let mut s: u32 = (1u32 << size) - 1;
        let limit = 1u64 << n;
        while u64::from(s) < limit {
            if masks.iter().all(|&m| m & s != 0) {
                return s;
            }
            if size == n {
                break;
            }
            s = next_same_weight(s);
        }
    }
    unreachable!("the full position set hits every nonempty mask")
}

/// A 1-certificate of `x` fixes `x` on a position set `A` so that no 0-input of
/// the domain agrees with `x` on `A`; `k` is the worst case over 1-inputs of
/// the smallest such set.
pub fn certificate_size(f: &PartialBooleanFunction) -> Result<Certificates, AdversaryError> {
    if f.n() > MAX_CERTIFICATE_VARIABLES {
        return Err(AdversaryError::TooManyVariables {
            n: f.n(),
            max: MAX_CERTIFICATE_VARIABLES,
        });
    }
    let zeros: Vec<usize> = f.zeros().collect();
    let mut sets = Vec::new();
    let mut k = 0;
    for x in f.ones() {
        let masks: Vec<u32> = zeros.iter().map(|&y| f.diff_mask(x, y)).collect();
        let s = min_hitting_set(f.n(), &masks);
        k = k.max(s.count_ones() as usize);
        sets.push((
            x,
            (0..f.n())
                .filter(|i| s >> i & 1 == 1)
                .map(|i| i + 1)
                .collect(),
        ));
    }
    if sets.is_empty() {
        return Err(AdversaryError::InvalidFunction(
            "function has no 1-input".into(),
        ));
    }
    Ok(Certificates { k, sets })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gosper_enumerates_combinations() {
        let mut v = 0b0011u32;
        let mut seen = vec![v];
        while v < 0b1100 {
            v = next_same_weight(v);
            seen.push(v);
        }
        assert_eq!(seen, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
    }

    #[test]
    fn textbook_sizes() {
        assert_eq!(
            certificate_size(&PartialBooleanFunction::or(2)).unwrap().k,
            1
        );
        assert_eq!(
            certificate_size(&PartialBooleanFunction::and(3)).unwrap().k,
            3
        );
        assert_eq!(
            certificate_size(&PartialBooleanFunction::triangle3())
                .unwrap()
                .k,
            3
        );
        assert_eq!(
            certificate_size(&PartialBooleanFunction::or(4)).unwrap().k,
            1
        );
        assert_eq!(
            certificate_size(&PartialBooleanFunction::and(4)).unwrap().k,
            4
        );
        let c = certificate_size(&PartialBooleanFunction::or_promise(4)).unwrap();
        assert_eq!(c.k, 1);
        assert_eq!(c.of(2), Some(&[2][..]));
    }

    #[test]
    fn all_ones_function_needs_no_positions() {
        let f = PartialBooleanFunction::total(2, |_| true);
        assert_eq!(certificate_size(&f).unwrap().k, 0);
        assert!(certificate_size(&PartialBooleanFunction::total(2, |_| false)).is_err());
    }
}
