//! Null-boundary evolution and exhaustive reversibility checks.
//!
//! Everything here works directly on configurations and never touches the
//! graph or bucket machinery, so it can serve as ground truth for them.

use crate::error::{Error, Result};
use crate::rule::{Configuration, LocalRule};
use crate::sequence::State;

/// Default limit on `p^n`, the number of configurations enumerated.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_configs: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_configs: DEFAULT_ORACLE_BUDGET,
        }
    }
}

impl OracleBudget {
    fn config_count(&self, rule: &LocalRule, n: usize) -> Result<u64> {
        let p = rule.alphabet().size();
        let over = || Error::OracleBudget {
            p,
            n,
            budget: self.max_configs,
        };
        let count = u32::try_from(n)
            .ok()
            .and_then(|n| rule.alphabet().count(n))
            .ok_or_else(over)?;
        if count > self.max_configs {
            return Err(over());
        }
        Ok(count)
    }
}

/// Applies the global map once; cells outside `0..n` read as state 0.
pub fn evolve_null(rule: &LocalRule, config: &Configuration) -> Result<Configuration> {
    for &c in config.cells() {
        rule.alphabet().check_state(u64::from(c))?;
    }
    let mut out = Vec::with_capacity(config.len());
    evolve_cells(rule, config.cells(), &mut out);
    Ok(Configuration::from_cells_unchecked(out))
}

/// Sliding-window evaluation of the local rule over `cells` padded with zeros.
pub(crate) fn evolve_cells(rule: &LocalRule, cells: &[State], out: &mut Vec<State>) {
    let n = cells.len() as isize;
    let p = rule.p();
    let windows = rule.window_count();
    let left = rule.neighborhood().left as isize;
    let right = rule.neighborhood().right as isize;
    let cell = |i: isize| -> usize {
        if (0..n).contains(&i) {
            cells[i as usize] as usize
        } else {
            0
        }
    };
    out.clear();
    let mut window = 0usize;
    for pos in -left..=right {
        window = window * p + cell(pos);
    }
    for i in 0..n {
        out.push(rule.apply(window));
        window = (window * p + cell(i + right + 1)) % windows;
    }
}

/// Visits every length-`n` configuration in ascending index order together
/// with the index of its image.
fn for_each_image(
    rule: &LocalRule,
    n: usize,
    total: u64,
    mut visit: impl FnMut(u64, &[State], u64) -> bool,
) {
    let p = rule.p() as u64;
    let max_digit = (rule.p() - 1) as State;
    let mut cells = vec![0 as State; n];
    let mut image = Vec::with_capacity(n);
    for index in 0..total {
        evolve_cells(rule, &cells, &mut image);
        let image_index = image.iter().fold(0u64, |acc, &d| acc * p + u64::from(d));
        if !visit(index, &cells, image_index) {
            return;
        }
        // odometer increment, rightmost cell least significant
        for c in cells.iter_mut().rev() {
            if *c == max_digit {
                *c = 0;
            } else {
                *c += 1;
                break;
            }
        }
    }
}

/// The first pair of distinct length-`n` configurations (by index) with the
/// same image, or `None` when the global map is injective.
pub fn first_collision(
    rule: &LocalRule,
    n: usize,
    budget: &OracleBudget,
) -> Result<Option<(Configuration, Configuration)>> {
    if n == 0 {
        return Err(Error::invalid("n", "cell count must be at least 1"));
    }
    let total = budget.config_count(rule, n)?;
    let mut seen = vec![0u64; (total as usize).div_ceil(64)];
    let mut collision = None;
    for_each_image(rule, n, total, |index, cells, image| {
        let (word, bit) = ((image / 64) as usize, image % 64);
        if seen[word] & (1 << bit) != 0 {
            collision = Some((index, cells.to_vec(), image));
            return false;
        }
        seen[word] |= 1 << bit;
        true
    });
    let Some((_, later, image)) = collision else {
        return Ok(None);
    };
    let mut earlier = None;
    for_each_image(rule, n, total, |_, cells, img| {
        if img == image {
            earlier = Some(cells.to_vec());
            return false;
        }
        true
    });
    let earlier = earlier.expect("an earlier configuration produced the colliding image");
    Ok(Some((
        Configuration::from_cells_unchecked(earlier),
        Configuration::from_cells_unchecked(later),
    )))
}

/// True iff the global map on length-`n` configurations is a bijection.
pub fn brute_force_reversible(rule: &LocalRule, n: usize, budget: &OracleBudget) -> Result<bool> {
    Ok(first_collision(rule, n, budget)?.is_none())
}

/// All preimages of `config` under the null-boundary global map, ascending.
pub fn preimages(
    rule: &LocalRule,
    config: &Configuration,
    budget: &OracleBudget,
) -> Result<Vec<Configuration>> {
    for &c in config.cells() {
        rule.alphabet().check_state(u64::from(c))?;
    }
    let n = config.len();
    let total = budget.config_count(rule, n)?;
    let p = rule.p() as u64;
    let target = config
        .cells()
        .iter()
        .fold(0u64, |acc, &d| acc * p + u64::from(d));
    let mut found = Vec::new();
    for_each_image(rule, n, total, |_, cells, image| {
        if image == target {
            found.push(Configuration::from_cells_unchecked(cells.to_vec()));
        }
        true
    });
    Ok(found)
}

pub fn count_preimages(
    rule: &LocalRule,
    config: &Configuration,
    budget: &OracleBudget,
) -> Result<u64> {
    for &c in config.cells() {
        rule.alphabet().check_state(u64::from(c))?;
    }
    let n = config.len();
    let total = budget.config_count(rule, n)?;
    let p = rule.p() as u64;
    let target = config
        .cells()
        .iter()
        .fold(0u64, |acc, &d| acc * p + u64::from(d));
    let mut count = 0;
    for_each_image(rule, n, total, |_, _, image| {
        count += u64::from(image == target);
        true
    });
    Ok(count)
}

/// Preimage counts of every length-`n` configuration, indexed by image.
pub fn preimage_histogram(rule: &LocalRule, n: usize, budget: &OracleBudget) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::invalid("n", "cell count must be at least 1"));
    }
    let total = budget.config_count(rule, n)?;
    let mut counts = vec![0u64; total as usize];
    for_each_image(rule, n, total, |_, _, image| {
        counts[image as usize] += 1;
        true
    });
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::Neighborhood;
    use crate::sequence::Alphabet;
    use num_bigint::BigUint;

    fn rule(n: u64, left: u32, right: u32) -> LocalRule {
        LocalRule::from_number(
            &BigUint::from(n),
            Alphabet::BINARY,
            Neighborhood::new(left, right),
        )
        .unwrap()
    }

    fn cfg(s: &str) -> Configuration {
        Configuration::parse(s, Alphabet::BINARY).unwrap()
    }

    #[test]
    fn rule_150_single_cell_pattern() {
        assert_eq!(
            evolve_null(&rule(150, 1, 1), &cfg("010")).unwrap(),
            cfg("111")
        );
    }

    #[test]
    fn radius_two_path_example() {
        let r = rule(4161270000, 2, 2);
        assert_eq!(evolve_null(&r, &cfg("10110")).unwrap(), cfg("10010"));
        let pre = preimages(&r, &cfg("10010"), &OracleBudget::default()).unwrap();
        assert!(pre.contains(&cfg("10110")));
    }

    #[test]
    fn quiescent_stays_quiescent() {
        for n in [0u64, 150, 204, 90] {
            assert_eq!(
                evolve_null(&rule(n, 1, 1), &cfg("00000")).unwrap(),
                cfg("00000")
            );
        }
    }

    #[test]
    fn reversibility_examples() {
        let b = OracleBudget::default();
        assert!(brute_force_reversible(&rule(153, 1, 1), 4, &b).unwrap());
        assert!(!brute_force_reversible(&rule(90, 1, 1), 3, &b).unwrap());
        assert!(brute_force_reversible(&rule(90, 1, 1), 4, &b).unwrap());
        assert!(!brute_force_reversible(&rule(170, 1, 1), 1, &b).unwrap());
    }

    #[test]
    fn collision_is_first_by_index() {
        // rule 170 shifts left: cells 0 and 1 of length 1 both map to 0
        let (a, b) = first_collision(&rule(170, 1, 1), 1, &OracleBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!((a, b), (cfg("0"), cfg("1")));
    }

    #[test]
    fn preimage_count_examples() {
        let b = OracleBudget::default();
        for s in ["00000", "10110", "11111", "01010"] {
            assert_eq!(count_preimages(&rule(204, 1, 1), &cfg(s), &b).unwrap(), 1);
        }
        assert_eq!(count_preimages(&rule(0, 1, 1), &cfg("000"), &b).unwrap(), 8);
        assert_eq!(count_preimages(&rule(0, 1, 1), &cfg("010"), &b).unwrap(), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let tight = OracleBudget {
            max_configs: 1 << 10,
        };
        assert!(matches!(
            brute_force_reversible(&rule(150, 1, 1), 11, &tight),
            Err(Error::OracleBudget { n: 11, .. })
        ));
        assert!(brute_force_reversible(&rule(150, 1, 1), 10, &tight).is_ok());
        assert!(brute_force_reversible(&rule(150, 1, 1), 0, &tight).is_err());
    }

    #[test]
    fn reversible_iff_every_count_is_one() {
        let b = OracleBudget::default();
        for number in 0..256u64 {
            let r = rule(number, 1, 1);
            for n in 1..=8 {
                let hist = preimage_histogram(&r, n, &b).unwrap();
                assert_eq!(hist.iter().sum::<u64>(), 1 << n);
                assert_eq!(
                    brute_force_reversible(&r, n, &b).unwrap(),
                    hist.iter().all(|&c| c == 1),
                    "rule {number}, n={n}"
                );
            }
        }
    }

    #[test]
    fn wrong_alphabet_rejected() {
        let p3 = Alphabet::new(3).unwrap();
        let c = Configuration::new(vec![2, 1], p3).unwrap();
        assert!(matches!(
            evolve_null(&rule(150, 1, 1), &c),
            Err(Error::InvalidState { .. })
        ));
    }
}
