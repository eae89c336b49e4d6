//! Admissible tuples: verification, narrow-tuple search, bundled witnesses.
//!
//! A set of `k` distinct integers is *admissible* when, for every prime `p`,
//! its residues modulo `p` miss at least one class; only primes `p <= k` can
//! fail, since `k` values occupy at most `k` classes. The diameter is the
//! difference between the largest and smallest element; the bundled data
//! files witness the narrowest known diameters used by the gap bounds.
//!
//! The search side works on a residue sieve: choose one killed class per
//! prime `p <= k` over an interval, keep the survivors, and look for `k` of
//! them in a narrow window. A greedy descent over class choices plus random
//! restarts (iterated local search) drives the interval width down.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Simple Eratosthenes sieve.
pub fn primes_up_to(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        primes.push(p);
        let mut q = p * p;
        while q <= n {
            composite[q] = true;
            q += p;
        }
    }
    primes
}

/// Sorts, deduplicates, and shifts so the smallest element is zero.
pub fn normalize(values: &[u64]) -> Vec<u64> {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    if let Some(&first) = v.first() {
        for x in &mut v {
            *x -= first;
        }
    }
    v
}

/// Largest minus smallest element (zero for empty or singleton tuples).
pub fn diameter(tuple: &[u64]) -> u64 {
    match (tuple.iter().min(), tuple.iter().max()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    }
}

/// Verdict of an admissibility check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admissibility {
    /// Whether every prime misses at least one residue class.
    pub admissible: bool,
    /// The smallest prime whose classes are all covered, if any.
    pub witness: Option<usize>,
}

/// Checks coverage for every prime up to `bound`.
///
/// The standard check uses `bound = k`; larger bounds are redundant but
/// useful as a cross-check, since `k` values cannot cover `p > k` classes.
pub fn is_admissible_with_prime_bound(tuple: &[u64], bound: usize) -> Admissibility {
    let values = normalize(tuple);
    for p in primes_up_to(bound) {
        let mut seen = vec![false; p];
        let mut distinct = 0usize;
        for &x in &values {
            let r = (x % p as u64) as usize;
            if !seen[r] {
                seen[r] = true;
                distinct += 1;
                if distinct == p {
                    break;
                }
            }
        }
        if distinct == p {
            return Admissibility {
                admissible: false,
                witness: Some(p),
            };
        }
    }
    Admissibility {
        admissible: true,
        witness: None,
    }
}

/// Checks admissibility (primes up to the tuple size suffice).
pub fn is_admissible(tuple: &[u64]) -> Admissibility {
    let distinct = normalize(tuple).len();
    is_admissible_with_prime_bound(tuple, distinct)
}

/// Parses nonnegative integers separated by whitespace or commas
/// (brackets are ignored, so JSON-style lists work too) and normalizes them.
pub fn parse_tuple(text: &str) -> Result<Vec<u64>> {
    let mut values = Vec::new();
    for token in text
        .split(|ch: char| ch.is_whitespace() || matches!(ch, ',' | '[' | ']'))
        .filter(|t| !t.is_empty())
    {
        let x: u64 = token
            .parse()
            .map_err(|_| Error::Parse(format!("bad tuple entry {token:?}")))?;
        values.push(x);
    }
    if values.is_empty() {
        return Err(Error::Parse("empty tuple".into()));
    }
    Ok(normalize(&values))
}

/// One line of whitespace-separated entries.
pub fn format_tuple(tuple: &[u64]) -> String {
    tuple
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Search strategies for [`greedy_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Consecutive primes above `k`: always admissible, instant, not narrow.
    ShiftedPrimes,
    /// Residue sieve with greedy descent and random restarts.
    GreedyResidueSieve,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shifted_primes" => Ok(Strategy::ShiftedPrimes),
            "greedy_residue_sieve" => Ok(Strategy::GreedyResidueSieve),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Work limit and RNG seed for the sieve search.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    /// Total number of class evaluations allowed.
    pub max_evals: u64,
    /// Seed for the deterministic random stream.
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_evals: 40_000_000,
            seed: 1,
        }
    }
}

/// `k` consecutive primes greater than `k`, chosen to minimize the spread.
fn shifted_primes_tuple(k: usize) -> Vec<u64> {
    let mut limit = (20 * (k + 10) * (64 - (k as u64).leading_zeros() as usize)).max(512);
    loop {
        let pool: Vec<u64> = primes_up_to(limit)
            .into_iter()
            .filter(|&p| p > k)
            .map(|p| p as u64)
            .collect();
        if pool.len() >= k {
            let best = pool
                .windows(k)
                .min_by_key(|w| w[k - 1] - w[0])
                .expect("pool holds at least one window");
            return normalize(best);
        }
        limit *= 2;
    }
}

/// Killed-class sieve over `[0, len)` with incremental survivor counts.
struct Sieve {
    len: usize,
    primes: Vec<usize>,
    residues: Vec<usize>,
    kill: Vec<u32>,
    survivors: usize,
}

impl Sieve {
    fn new(len: usize, primes: &[usize], residues: &[usize]) -> Self {
        let mut kill = vec![0u32; len];
        for (&p, &r) in primes.iter().zip(residues) {
            let mut x = r;
            while x < len {
                kill[x] += 1;
                x += p;
            }
        }
        let survivors = kill.iter().filter(|&&c| c == 0).count();
        Sieve {
            len,
            primes: primes.to_vec(),
            residues: residues.to_vec(),
            kill,
            survivors,
        }
    }

    /// Survivor change if prime `pi` switched to `class` (no state change).
    fn class_gain(&self, pi: usize, class: usize) -> i64 {
        let p = self.primes[pi];
        let old = self.residues[pi];
        if class == old {
            return 0;
        }
        let mut revived = 0i64;
        let mut x = old;
        while x < self.len {
            if self.kill[x] == 1 {
                revived += 1;
            }
            x += p;
        }
        let mut lost = 0i64;
        let mut x = class;
        while x < self.len {
            if self.kill[x] == 0 {
                lost += 1;
            }
            x += p;
        }
        revived - lost
    }

    fn set_class(&mut self, pi: usize, class: usize) {
        let p = self.primes[pi];
        let old = self.residues[pi];
        if class == old {
            return;
        }
        let mut x = old;
        while x < self.len {
            self.kill[x] -= 1;
            if self.kill[x] == 0 {
                self.survivors += 1;
            }
            x += p;
        }
        let mut x = class;
        while x < self.len {
            if self.kill[x] == 0 {
                self.survivors -= 1;
            }
            self.kill[x] += 1;
            x += p;
        }
        self.residues[pi] = class;
    }

    /// Greedy sweeps: move each prime to its best class until stable.
    fn descend(&mut self, evals: &mut u64, max_evals: u64, rng: &mut ChaCha8Rng) {
        let mut order: Vec<usize> = (0..self.primes.len()).collect();
        loop {
            let mut improved = false;
            // random sweep order so ties break differently across restarts
            for i in (1..order.len()).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
            for &pi in &order {
                let p = self.primes[pi];
                let mut best_class = self.residues[pi];
                let mut best_gain = 0i64;
                for class in 0..p {
                    if class == self.residues[pi] {
                        continue;
                    }
                    *evals += 1;
                    let gain = self.class_gain(pi, class);
                    if gain > best_gain {
                        best_gain = gain;
                        best_class = class;
                    }
                }
                if best_gain > 0 {
                    self.set_class(pi, best_class);
                    improved = true;
                }
                if *evals >= max_evals {
                    return;
                }
            }
            if !improved {
                return;
            }
        }
    }

    fn survivor_list(&self) -> Vec<u64> {
        (0..self.len)
            .filter(|&x| self.kill[x] == 0)
            .map(|x| x as u64)
            .collect()
    }
}

/// Narrowest `k`-window of a sorted survivor list, if one exists.
fn best_window(survivors: &[u64], k: usize) -> Option<Vec<u64>> {
    if survivors.len() < k {
        return None;
    }
    let start = (0..=survivors.len() - k)
        .min_by_key(|&i| survivors[i + k - 1] - survivors[i])
        .expect("nonempty range");
    Some(normalize(&survivors[start..start + k]))
}

/// Residue-sieve search: greedy init, then iterated local search driving the
/// interval width down. Stops early once `target_width` is reached, if given.
pub fn residue_sieve_search(
    k: usize,
    target_width: Option<u64>,
    budget: &SearchBudget,
) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::InvalidInput("tuple size must be positive".into()));
    }
    if k == 1 {
        return Ok(vec![0]);
    }
    let primes = primes_up_to(k);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut evals = 0u64;

    // generous starting interval: the consecutive-prime witness always fits
    let start_width = diameter(&shifted_primes_tuple(k)) as usize + 1;
    let residues: Vec<usize> = primes.iter().map(|&p| rng.gen_range(0..p)).collect();
    let mut sieve = Sieve::new(start_width + 1, &primes, &residues);
    sieve.descend(&mut evals, budget.max_evals, &mut rng);
    let mut best = best_window(&sieve.survivor_list(), k)
        .unwrap_or_else(|| shifted_primes_tuple(k));

    let done = |t: &[u64]| target_width.is_some_and(|w| diameter(t) <= w);
    if done(&best) {
        return Ok(best);
    }

    // decision problems of decreasing width: fit k survivors in [0, width]
    'widths: while evals < budget.max_evals {
        let width = diameter(&best) as usize - 2;
        let len = width + 1;
        // seed from the current best tuple's own residue pattern: kill the
        // class with fewest best-tuple members for each prime
        let residues: Vec<usize> = primes
            .iter()
            .map(|&p| {
                let mut hits = vec![0usize; p];
                for &x in &best {
                    hits[(x % p as u64) as usize] += 1;
                }
                (0..p).min_by_key(|&c| hits[c]).unwrap_or(0)
            })
            .collect();
        let mut sieve = Sieve::new(len, &primes, &residues);
        sieve.descend(&mut evals, budget.max_evals, &mut rng);
        let mut champion = (sieve.survivors, sieve.residues.clone());
        let mut stale = 0u32;
        loop {
            if sieve.survivors >= k {
                let tuple = best_window(&sieve.survivor_list(), k)
                    .expect("enough survivors for a window");
                debug_assert!(is_admissible(&tuple).admissible);
                best = tuple;
                if done(&best) {
                    return Ok(best);
                }
                continue 'widths;
            }
            if evals >= budget.max_evals {
                break 'widths;
            }
            // perturb a few primes (biased toward the large, flexible ones),
            // then descend again
            let kicks = 1 + rng.gen_range(0..3);
            for _ in 0..kicks {
                let lo = primes.len() / 3;
                let pi = rng.gen_range(lo..primes.len());
                let class = rng.gen_range(0..primes[pi]);
                sieve.set_class(pi, class);
            }
            sieve.descend(&mut evals, budget.max_evals, &mut rng);
            if sieve.survivors > champion.0 {
                champion = (sieve.survivors, sieve.residues.clone());
                stale = 0;
            } else {
                stale += 1;
                if sieve.survivors + 2 < champion.0 {
                    // fell too far: restore the best state seen at this width
                    let restore = champion.1.clone();
                    for (pi, &class) in restore.iter().enumerate() {
                        sieve.set_class(pi, class);
                    }
                }
                if stale > 400 {
                    // width appears infeasible within this budget share
                    break 'widths;
                }
            }
        }
    }
    debug_assert!(is_admissible(&best).admissible);
    Ok(best)
}

/// Finds an admissible `k`-tuple with the requested strategy.
pub fn greedy_search(k: usize, strategy: Strategy, budget: &SearchBudget) -> Result<Vec<u64>> {
    match strategy {
        Strategy::ShiftedPrimes => {
            if k == 0 {
                Err(Error::InvalidInput("tuple size must be positive".into()))
            } else {
                Ok(shifted_primes_tuple(k))
            }
        }
        Strategy::GreedyResidueSieve => residue_sieve_search(k, None, budget),
    }
}

/// Tuple sizes with bundled witness files.
pub const BUNDLED_SIZES: [usize; 13] = [3, 4, 5, 6, 7, 10, 16, 23, 25, 37, 49, 102, 225];

/// Returns the bundled witness tuple for `k`, re-verified on load.
pub fn load_bundled(k: usize) -> Result<Vec<u64>> {
    let text = match k {
        3 => include_str!("../../../data/tuple_k3.txt"),
        4 => include_str!("../../../data/tuple_k4.txt"),
        5 => include_str!("../../../data/tuple_k5.txt"),
        6 => include_str!("../../../data/tuple_k6.txt"),
        7 => include_str!("../../../data/tuple_k7.txt"),
        10 => include_str!("../../../data/tuple_k10.txt"),
        16 => include_str!("../../../data/tuple_k16.txt"),
        23 => include_str!("../../../data/tuple_k23.txt"),
        25 => include_str!("../../../data/tuple_k25.txt"),
        37 => include_str!("../../../data/tuple_k37.txt"),
        49 => include_str!("../../../data/tuple_k49.txt"),
        102 => include_str!("../../../data/tuple_k102.txt"),
        225 => include_str!("../../../data/tuple_k225.txt"),
        other => return Err(Error::UnknownTuple(other)),
    };
    let tuple = parse_tuple(text)?;
    if tuple.len() != k {
        return Err(Error::InvalidInput(format!(
            "bundled tuple for k={k} has {} entries",
            tuple.len()
        )));
    }
    let verdict = is_admissible(&tuple);
    if !verdict.admissible {
        return Err(Error::InvalidInput(format!(
            "bundled tuple for k={k} is covered modulo {}",
            verdict.witness.unwrap_or(0)
        )));
    }
    Ok(tuple)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_verdicts_on_small_tuples() {
        assert!(is_admissible(&[0, 2, 6]).admissible);
        assert_eq!(diameter(&[0, 2, 6]), 6);
        assert!(is_admissible(&[0, 2, 6, 8]).admissible);
        assert_eq!(diameter(&[0, 2, 6, 8]), 8);
        assert!(is_admissible(&[0, 4, 6, 10, 12, 16]).admissible);
        assert_eq!(diameter(&[0, 4, 6, 10, 12, 16]), 16);
        // {0, 2, 4} covers every class mod 3
        let bad = is_admissible(&[0, 2, 4]);
        assert!(!bad.admissible);
        assert_eq!(bad.witness, Some(3));
        // consecutive integers cover mod 2
        let bad2 = is_admissible(&[5, 6]);
        assert!(!bad2.admissible);
        assert_eq!(bad2.witness, Some(2));
    }

    #[test]
    fn normalization_and_parsing() {
        assert_eq!(normalize(&[11, 13, 17, 13]), vec![0, 2, 6]);
        assert_eq!(parse_tuple("11 13\n17").unwrap(), vec![0, 2, 6]);
        assert_eq!(format_tuple(&[0, 2, 6]), "0 2 6");
        assert!(parse_tuple("").is_err());
        assert!(parse_tuple("3 x 5").is_err());
        assert_eq!(diameter(&[]), 0);
        assert_eq!(diameter(&[7]), 0);
    }

    #[test]
    fn prime_bound_equivalence_for_small_diameters() {
        // checking p <= k agrees with checking far beyond the diameter
        let tuples: Vec<Vec<u64>> = vec![
            vec![0, 2, 6],
            vec![0, 2, 6, 8],
            vec![0, 2, 6, 8, 12],
            vec![0, 4, 6, 10, 12, 16],
            vec![0, 2, 4],
            vec![0, 1, 2, 3],
            (0..20).map(|i| 3 * i).collect(),
        ];
        for t in tuples {
            let d = diameter(&t) as usize;
            let quick = is_admissible(&t);
            let full = is_admissible_with_prime_bound(&t, d + 1);
            assert_eq!(quick.admissible, full.admissible, "tuple {t:?}");
        }
    }

    #[test]
    fn shifted_primes_strategy() {
        let budget = SearchBudget::default();
        let t3 = greedy_search(3, Strategy::ShiftedPrimes, &budget).unwrap();
        assert!(is_admissible(&t3).admissible);
        assert_eq!(diameter(&t3), 6); // {5, 7, 11}
        let t10 = greedy_search(10, Strategy::ShiftedPrimes, &budget).unwrap();
        assert!(is_admissible(&t10).admissible);
        assert_eq!(diameter(&t10), 32); // {11, ..., 43}
    }

    #[test]
    fn sieve_search_reaches_known_widths_small() {
        let budget = SearchBudget {
            max_evals: 4_000_000,
            seed: 1,
        };
        for (k, width) in [(3usize, 6u64), (4, 8), (5, 12), (6, 16), (7, 20)] {
            let t = residue_sieve_search(k, Some(width), &budget).unwrap();
            assert!(is_admissible(&t).admissible, "k = {k}");
            assert_eq!(t.len(), k);
            assert!(diameter(&t) <= width, "k = {k}: got {}", diameter(&t));
        }
    }

    #[test]
    fn sieve_search_reaches_known_width_k10() {
        let t = greedy_search(10, Strategy::GreedyResidueSieve, &SearchBudget::default()).unwrap();
        assert!(is_admissible(&t).admissible);
        assert_eq!(t.len(), 10);
        assert!(diameter(&t) <= 32, "got {}", diameter(&t));
    }

    #[test]
    fn sieve_search_reaches_known_width_k16() {
        let t = greedy_search(16, Strategy::GreedyResidueSieve, &SearchBudget::default()).unwrap();
        assert!(is_admissible(&t).admissible);
        assert_eq!(t.len(), 16);
        assert!(diameter(&t) <= 60, "got {}", diameter(&t));
    }

    #[test]
    fn subsets_of_admissible_tuples_stay_admissible() {
        let t = greedy_search(10, Strategy::ShiftedPrimes, &SearchBudget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let subset: Vec<u64> = t
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.6))
                .collect();
            if subset.is_empty() {
                continue;
            }
            assert!(is_admissible(&subset).admissible, "subset {subset:?}");
        }
    }

    #[test]
    fn search_edge_cases() {
        assert!(greedy_search(0, Strategy::ShiftedPrimes, &SearchBudget::default()).is_err());
        assert_eq!(
            residue_sieve_search(1, None, &SearchBudget::default()).unwrap(),
            vec![0]
        );
        assert!("shifted_primes".parse::<Strategy>().is_ok());
        assert!("nope".parse::<Strategy>().is_err());
    }
}
