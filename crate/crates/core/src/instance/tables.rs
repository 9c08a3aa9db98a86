//! Calibration tables for preference scores, period deltas and cost/time
//! factors. Scores are on a 1..=10 scale where 1 is best.

use super::TimePeriod;

/// Preference scores per access pattern, keyed on the binary assignment
/// (walk, bike, car, e-car, public); values are (walk/public, bike, car).
/// Patterns not listed fall back to the final all-zero row.
pub const PREFERENCE_SCORES: [([bool; 5], [i64; 3]); 25] = [
    ([true, false, false, false, false], [4, 6, 7]),
    ([false, true, false, false, false], [6, 4, 7]),
    ([false, false, false, false, true], [4, 6, 7]),
    ([false, false, true, false, false], [6, 7, 4]),
    ([false, false, false, true, false], [6, 7, 5]),
    ([true, true, false, false, false], [4, 4, 7]),
    ([false, true, false, false, true], [4, 4, 7]),
    ([false, false, true, false, true], [4, 5, 4]),
    ([false, false, true, true, false], [7, 7, 4]),
    ([true, false, false, false, true], [4, 6, 7]),
    ([false, true, true, false, false], [6, 4, 4]),
    ([false, false, false, true, true], [4, 7, 5]),
    ([true, false, true, false, false], [4, 5, 4]),
    ([false, true, false, true, false], [6, 5, 6]),
    ([true, true, false, false, true], [4, 4, 7]),
    ([true, false, false, true, false], [4, 7, 5]),
    ([false, true, true, false, true], [4, 4, 4]),
    ([false, false, true, true, true], [7, 7, 4]),
    ([true, true, true, false, true], [4, 4, 4]),
    ([false, true, true, true, true], [7, 4, 4]),
    ([true, false, true, true, true], [4, 7, 4]),
    ([true, true, true, true, false], [4, 4, 4]),
    ([true, true, false, true, true], [4, 4, 7]),
    ([true, true, true, true, true], [4, 4, 4]),
    ([false, false, false, false, false], [4, 5, 5]),
];

/// Scores (walk/public, bike, car) for an access pattern, reordered to
/// [`super::Mot::index`] order (car, bike, public).
pub fn preference_scores(bits: [bool; 5]) -> [i64; 3] {
    let row = PREFERENCE_SCORES
        .iter()
        .find(|(pattern, _)| *pattern == bits)
        .map(|(_, scores)| *scores)
        .unwrap_or(PREFERENCE_SCORES[24].1);
    // table order is (walk/public, bike, car)
    [row[2], row[1], row[0]]
}

/// Per-period preference deltas in Mot order (car, bike, public), one row
/// per period.
pub const PREF_DELTAS: [[i64; 3]; 7] = [
    [1, -2, -3],
    [3, -2, 2],
    [-3, -1, -2],
    [0, 0, 0],
    [1, -3, -2],
    [3, -2, 2],
    [-2, 2, -1],
];

/// Per-period beta factors in tenths, Mot order (car, bike, public).
pub const BETA_TENTHS: [[i64; 3]; 7] = [
    [12, 10, 11],
    [14, 11, 8],
    [13, 10, 9],
    [10, 10, 10],
    [13, 10, 10],
    [14, 11, 9],
    [11, 10, 13],
];

/// Default seven-period day over a 720-minute horizon: pre-rush, rush,
/// after-rush, normal day-time, then the evening mirror.
pub const DEFAULT_PERIOD_BOUNDS: [i64; 8] = [0, 90, 150, 240, 420, 510, 600, 720];

pub fn default_periods() -> Vec<TimePeriod> {
    (0..7)
        .map(|i| TimePeriod {
            index: i,
            start: DEFAULT_PERIOD_BOUNDS[i],
            end: DEFAULT_PERIOD_BOUNDS[i + 1],
            pref_delta: PREF_DELTAS[i],
            beta_num: BETA_TENTHS[i],
            beta_den: [10, 10, 10],
        })
        .collect()
}
