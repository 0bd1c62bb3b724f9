//! Base-`L+S` digit machinery: canonical digit strings, the forbidden pair
//! set `E_{L,S}`, and direct enumeration of admissible integers.

use crate::LsParams;

/// Little-endian digit string: `digits[k]` is the coefficient of `base^k`.
///
/// Canonical form carries no trailing zeros beyond the most significant
/// nonzero digit, except for zero itself which is the single digit `[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitString {
    digits: Vec<u32>,
    base: u32,
}

impl DigitString {
    /// Canonical base-`b` digits of `n` (least significant first).
    pub fn from_value(n: u128, base: u32) -> Self {
        assert!(base >= 2, "base must be at least 2");
        if n == 0 {
            return DigitString {
                digits: vec![0],
                base,
            };
        }
        let mut digits = Vec::new();
        let mut rest = n;
        while rest > 0 {
            digits.push((rest % base as u128) as u32);
            rest /= base as u128;
        }
        DigitString { digits, base }
    }

    pub(crate) fn from_raw(digits: Vec<u32>, base: u32) -> Self {
        DigitString { digits, base }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Value `sum a_k base^k`.
    pub fn value(&self) -> u128 {
        self.digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * self.base as u128 + d as u128)
    }

    /// Most-significant-first rendering, e.g. `[n]_2 = 10100` for 20.
    ///
    /// Single characters for bases up to 10, hyphen-separated otherwise.
    pub fn to_string_msb(&self) -> String {
        if self.base <= 10 {
            self.digits
                .iter()
                .rev()
                .map(|d| char::from_digit(*d, 10).unwrap())
                .collect()
        } else {
            let parts: Vec<String> = self.digits.iter().rev().map(u32::to_string).collect();
            parts.join("-")
        }
    }
}

/// The forbidden digit-pair set `E_{L,S} = {L..L+S-1} x {1..L+S-1}`:
/// a short digit (`>= L`) must be followed, in the next more significant
/// position, by 0. Empty when `S = 0`.
#[derive(Debug, Clone, Copy)]
pub struct ForbiddenSet {
    l: u32,
    base: u32,
}

impl ForbiddenSet {
    pub fn new(params: &LsParams) -> Self {
        ForbiddenSet {
            l: params.l(),
            base: params.base(),
        }
    }

    /// Membership of `(lower, upper)` where `lower` is the less significant
    /// digit of the pair.
    pub fn contains(&self, lower: u32, upper: u32) -> bool {
        lower >= self.l && lower < self.base && upper >= 1 && upper < self.base
    }

    pub fn is_empty(&self) -> bool {
        self.l == self.base
    }
}

/// True when no adjacent digit pair of `d` lies in `E_{L,S}`.
pub fn is_admissible(d: &DigitString, params: &LsParams) -> bool {
    let forbidden = ForbiddenSet::new(params);
    if d.digits().iter().any(|&digit| digit >= params.base()) {
        return false;
    }
    d.digits()
        .windows(2)
        .all(|pair| !forbidden.contains(pair[0], pair[1]))
}

/// Checked admissibility of an integer value.
pub fn admissible_value(n: u128, params: &LsParams) -> bool {
    is_admissible(&DigitString::from_value(n, params.base()), params)
}

/// Enumerates `{0} u N_{L,S}` in increasing order by direct digit-string
/// succession: increment with carry, then bump past any forbidden
/// configuration instead of filtering every integer.
///
/// The counter starts positioned on 0; [`AdmissibleCounter::advance`] moves
/// to the next admissible integer.
#[derive(Debug, Clone)]
pub struct AdmissibleCounter {
    digits: Vec<u32>,
    params: LsParams,
}

impl AdmissibleCounter {
    pub fn new(params: LsParams) -> Self {
        AdmissibleCounter {
            digits: vec![0],
            params,
        }
    }

    pub fn params(&self) -> LsParams {
        self.params
    }

    /// Current position as a digit string.
    pub fn digits(&self) -> DigitString {
        DigitString::from_raw(self.digits.clone(), self.params.base())
    }

    /// Current position as an integer.
    pub fn value(&self) -> u128 {
        self.digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * self.params.base() as u128 + d as u128)
    }

    /// Moves to the next element of `{0} u N_{L,S}`.
    pub fn advance(&mut self) {
        let l = self.params.l();
        // Plain increment with carry; `pos` ends on the digit that changed.
        let mut pos = self.increment_at(0);
        // A violation can only involve the changed digit and the one above
        // it (everything below has been zeroed by the carry). Bumping the
        // prefix may create a new violation one level up, so repeat.
        loop {
            let lower = self.digits[pos];
            let upper = self.digits.get(pos + 1).copied().unwrap_or(0);
            if lower >= l && upper >= 1 {
                for d in &mut self.digits[..=pos] {
                    *d = 0;
                }
                pos = self.increment_at(pos + 1);
            } else {
                break;
            }
        }
        debug_assert!(*self.digits.last().unwrap() != 0 || self.digits.len() == 1);
    }

    /// Adds 1 at `start`, propagating the carry; returns the final changed
    /// position. All digits below `start` must already be zero.
    fn increment_at(&mut self, start: usize) -> usize {
        let base = self.params.base();
        let mut pos = start;
        loop {
            if pos == self.digits.len() {
                self.digits.push(0);
            }
            self.digits[pos] += 1;
            if self.digits[pos] == base {
                self.digits[pos] = 0;
                pos += 1;
            } else {
                return pos;
            }
        }
    }
}

/// Iterator over admissible integer values, starting at 0.
#[derive(Debug, Clone)]
pub struct AdmissibleIntegers {
    counter: AdmissibleCounter,
    started: bool,
}

impl AdmissibleIntegers {
    pub fn new(params: LsParams) -> Self {
        AdmissibleIntegers {
            counter: AdmissibleCounter::new(params),
            started: false,
        }
    }
}

impl Iterator for AdmissibleIntegers {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        if self.started {
            self.counter.advance();
        } else {
            self.started = true;
        }
        Some(self.counter.value())
    }
}

/// Next admissible integer strictly greater than the counter position.
pub fn next_admissible(counter: &mut AdmissibleCounter) -> u128 {
    counter.advance();
    counter.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(l: u32, s: u32) -> LsParams {
        LsParams::new(l, s).unwrap()
    }

    #[test]
    fn digit_expansion_examples() {
        assert_eq!(DigitString::from_value(0, 2).digits(), &[0]);
        assert_eq!(DigitString::from_value(5, 2).digits(), &[1, 0, 1]);
        assert_eq!(DigitString::from_value(20, 2).digits(), &[0, 0, 1, 0, 1]);
        assert_eq!(DigitString::from_value(20, 2).to_string_msb(), "10100");
        assert_eq!(DigitString::from_value(20, 2).value(), 20);
    }

    #[test]
    fn admissibility_examples() {
        let pr = params(1, 1);
        assert!(!is_admissible(&DigitString::from_value(3, 2), &pr)); // 11
        assert!(is_admissible(&DigitString::from_value(5, 2), &pr)); // 101
        let pr = params(3, 0);
        for n in 0..200 {
            assert!(admissible_value(n, &pr));
        }
    }

    #[test]
    fn forbidden_set_shape() {
        let f = ForbiddenSet::new(&params(1, 2));
        // E_{1,2} = {1,2} x {1,2}.
        for lower in 0..3 {
            for upper in 0..3 {
                let expected = lower >= 1 && upper >= 1;
                assert_eq!(f.contains(lower, upper), expected);
            }
        }
        assert!(ForbiddenSet::new(&params(2, 0)).is_empty());
    }

    #[test]
    fn counter_golden_prefixes() {
        let first: Vec<u128> = AdmissibleIntegers::new(params(1, 1)).take(12).collect();
        assert_eq!(first, vec![0, 1, 2, 4, 5, 8, 9, 10, 16, 17, 18, 20]);

        let first: Vec<u128> = AdmissibleIntegers::new(params(2, 0)).take(5).collect();
        assert_eq!(first, vec![0, 1, 2, 3, 4]);

        // Brute-force oracle for (1, 2): E = {1,2} x {1,2} in base 3, so an
        // admissible integer has no adjacent pair of nonzero digits.
        let pr = params(1, 2);
        let expected: Vec<u128> = (0..100).filter(|&n| admissible_value(n, &pr)).collect();
        let got: Vec<u128> = AdmissibleIntegers::new(pr)
            .take(expected.len())
            .collect();
        assert_eq!(got, expected);
        assert_eq!(&got[..8], &[0, 1, 2, 3, 6, 9, 10, 11]);
    }

    #[test]
    fn counter_matches_filter_on_first_ten_thousand() {
        for (l, s) in [(1, 1), (2, 1), (1, 2), (1, 3), (3, 2), (4, 4), (2, 0)] {
            let pr = params(l, s);
            let filtered: Vec<u128> = (0..10_000)
                .filter(|&n| admissible_value(n, &pr))
                .collect();
            let enumerated: Vec<u128> = AdmissibleIntegers::new(pr)
                .take_while(|&n| n < 10_000)
                .collect();
            assert_eq!(enumerated, filtered, "mismatch for ({l},{s})");
        }
    }

    #[test]
    fn counter_digits_stay_canonical() {
        let mut counter = AdmissibleCounter::new(params(1, 1));
        for _ in 0..500 {
            counter.advance();
            let d = counter.digits();
            assert_ne!(d.digits().last(), Some(&0));
            assert_eq!(d.value(), counter.value());
        }
    }
}
