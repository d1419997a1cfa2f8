//! Enumeration steppers shared by the exhaustive searches.
//!
//! All searches walk fixed-radix odometers (base-p digit strings, last
//! digit fastest) or lexicographic combinations. Keeping the successor
//! functions in one place keeps every enumeration order identical, which
//! the deterministic-witness contract depends on.

/// Advance a base-`radix` digit string, last digit fastest. Returns false
/// when the string wraps back to all zeros (enumeration done).
pub(crate) fn next_digits(digits: &mut [u8], radix: u8) -> bool {
    let mut i = digits.len();
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if digits[i] + 1 < radix {
            digits[i] += 1;
            return true;
        }
        digits[i] = 0;
    }
}

/// Advance an index string where every position ranges over 0..radix.
pub(crate) fn next_indices(state: &mut [usize], radix: usize) -> bool {
    let mut i = state.len();
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if state[i] + 1 < radix {
            state[i] += 1;
            return true;
        }
        state[i] = 0;
    }
}

/// Advance a strictly increasing combination drawn from 0..universe, in
/// lexicographic order. Returns false after the last combination.
pub(crate) fn next_combination(slots: &mut [usize], universe: usize) -> bool {
    let k = slots.len();
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if slots[i] < universe - (k - i) {
            slots[i] += 1;
            for j in i + 1..k {
                slots[j] = slots[j - 1] + 1;
            }
            return true;
        }
    }
}
