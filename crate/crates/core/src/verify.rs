//! Exhaustive sweeps over small ranks. Each sweep reports how many cases it
//! checked and, on failure, the first counterexample as JSON.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dieudonne::{canonical_filtration, classify, standard_module_for};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::hasse::{bruhat_descendants, check_inequality, total_weight_check};
use crate::parabolic::{admissible_pairs, max_admissible_j, AdmissiblePair};
use crate::schubert::{admissible_closed_test, enumerate_flags, in_closed_cell, random_flag, SymplecticSpace};
use crate::weyl::{bruhat_leq, enumerate_group, min_coset_reps, w_i_reps, Side, SignedPermutation, MAX_RANK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Weights,
    Inequality,
    Descendants,
    Roundtrip,
    Bruhat,
    Schubert,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Weights,
        Check::Inequality,
        Check::Descendants,
        Check::Roundtrip,
        Check::Bruhat,
        Check::Schubert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Weights => "weights",
            Check::Inequality => "inequality",
            Check::Descendants => "descendants",
            Check::Roundtrip => "roundtrip",
            Check::Bruhat => "bruhat",
            Check::Schubert => "schubert",
        }
    }

    /// Largest rank the sweep accepts.
    pub fn max_rank(self) -> usize {
        match self {
            Check::Weights | Check::Inequality => 8,
            Check::Descendants | Check::Bruhat => 4,
            Check::Roundtrip => 6,
            Check::Schubert => 3,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidSubset(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: Check,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct Sweep {
    check: Check,
    cases: usize,
    counterexample: Option<Value>,
}

impl Sweep {
    fn new(check: Check) -> Self {
        Self {
            check,
            cases: 0,
            counterexample: None,
        }
    }

    /// Records one case; returns `false` once a counterexample is stored.
    fn record(&mut self, outcome: std::result::Result<(), Value>) -> bool {
        self.cases += 1;
        if let Err(v) = outcome {
            self.counterexample = Some(v);
            return false;
        }
        true
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            check: self.check,
            cases: self.cases,
            counterexample: self.counterexample,
        }
    }
}

fn pair_json(pair: &AdmissiblePair) -> Value {
    json!({ "w": pair.w.images(), "J": pair.datum.j.members() })
}

/// Runs one sweep for ranks `1..=g_max`. Arguments outside the supported
/// range are errors; a failed case is reported, not returned as an error.
pub fn run_check(check: Check, g_max: usize, primes: &[u64]) -> Result<CheckReport> {
    if g_max == 0 || g_max > check.max_rank().min(MAX_RANK) {
        return Err(Error::BoundExceeded {
            g: g_max,
            bound: check.max_rank(),
        });
    }
    if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::NotPrime(p));
    }
    let needs_primes = matches!(check, Check::Weights | Check::Inequality | Check::Roundtrip | Check::Schubert);
    if needs_primes && primes.is_empty() {
        return Err(Error::Field(format!("check {check} needs at least one prime")));
    }
    let mut sweep = Sweep::new(check);
    match check {
        Check::Weights => weights(&mut sweep, g_max, primes),
        Check::Inequality => inequality(&mut sweep, g_max, primes),
        Check::Descendants => descendants(&mut sweep, g_max),
        Check::Roundtrip => roundtrip(&mut sweep, g_max, primes),
        Check::Bruhat => bruhat(&mut sweep, g_max),
        Check::Schubert => schubert(&mut sweep, g_max, primes),
    }
    Ok(sweep.finish())
}

fn weights(sweep: &mut Sweep, g_max: usize, primes: &[u64]) {
    for g in 1..=g_max {
        for pair in admissible_pairs(g) {
            for &p in primes {
                let outcome = total_weight_check(&pair, p).map(|_| ()).map_err(|e| {
                    let mut v = pair_json(&pair);
                    v["p"] = json!(p);
                    v["error"] = json!(e.to_string());
                    v
                });
                if !sweep.record(outcome) {
                    return;
                }
            }
        }
    }
}

/// `(r, s)` with `r > c >= s`, `r + s < 2c + 1` and `σ(r) + σ(s) >= 2c + 1`.
pub fn inner_lemma_violation(pair: &AdmissiblePair) -> Option<(usize, usize)> {
    let c = pair.c();
    (c + 1..=2 * c)
        .flat_map(|r| (1..=c).map(move |s| (r, s)))
        .filter(|&(r, s)| r + s < 2 * c + 1)
        .find(|&(r, s)| pair.sigma(r) + pair.sigma(s) > 2 * c)
}

fn inequality(sweep: &mut Sweep, g_max: usize, primes: &[u64]) {
    for g in 1..=g_max {
        for pair in admissible_pairs(g) {
            if let Some((r, s)) = inner_lemma_violation(&pair) {
                let mut v = pair_json(&pair);
                v["r"] = json!(r);
                v["s"] = json!(s);
                sweep.record(Err(v));
                return;
            }
            for &p in primes {
                let outcome = check_inequality(&pair, p).map(|_| ()).map_err(|e| {
                    let mut v = pair_json(&pair);
                    v["p"] = json!(p);
                    v["error"] = json!(e.to_string());
                    v
                });
                if !sweep.record(outcome) {
                    return;
                }
            }
        }
    }
}

/// `{v ∈ W^{J~} : v <= w, l(v) = l(w) - 1}` by brute force.
pub fn brute_force_descendants(pair: &AdmissiblePair) -> Result<BTreeSet<SignedPermutation>> {
    let lw = pair.w.length();
    let mut out = BTreeSet::new();
    for v in min_coset_reps(pair.g(), &pair.datum.jtilde, Side::Right)? {
        if v.length() + 1 == lw && bruhat_leq(&v, &pair.w)? {
            out.insert(v);
        }
    }
    Ok(out)
}

fn descendants(sweep: &mut Sweep, g_max: usize) {
    for g in 1..=g_max {
        for pair in admissible_pairs(g) {
            let formula: BTreeSet<SignedPermutation> = bruhat_descendants(&pair).into_iter().map(|r| r.v).collect();
            let outcome = match brute_force_descendants(&pair) {
                Ok(brute) if brute == formula => Ok(()),
                Ok(brute) => {
                    let mut v = pair_json(&pair);
                    v["formula"] = json!(formula.iter().map(|x| x.images()).collect::<Vec<_>>());
                    v["brute_force"] = json!(brute.iter().map(|x| x.images()).collect::<Vec<_>>());
                    Err(v)
                }
                Err(e) => {
                    let mut v = pair_json(&pair);
                    v["error"] = json!(e.to_string());
                    Err(v)
                }
            };
            if !sweep.record(outcome) {
                return;
            }
        }
    }
}

fn roundtrip_one(w: &SignedPermutation, p: u64) -> Result<bool> {
    let d = standard_module_for(w, p)?;
    let chain = canonical_filtration(&d)?;
    let pairing = d.pairing().expect("standard modules carry a pairing");
    let dual = chain.is_self_dual(d.field(), pairing) && chain.sigma_is_symmetric();
    Ok(dual && classify(&d)? == (*w, max_admissible_j(w)?))
}

fn roundtrip(sweep: &mut Sweep, g_max: usize, primes: &[u64]) {
    for g in 1..=g_max {
        for w in w_i_reps(g) {
            let failure = primes.iter().find_map(|&p| match roundtrip_one(&w, p) {
                Ok(true) => None,
                Ok(false) => Some(json!({ "w": w.images(), "p": p })),
                Err(e) => Some(json!({ "w": w.images(), "p": p, "error": e.to_string() })),
            });
            if !sweep.record(failure.map_or(Ok(()), Err)) {
                return;
            }
        }
    }
}

/// The Bruhat interval `[e, w]` as the set of products of subwords of a
/// reduced word of `w`.
pub fn subword_interval(w: &SignedPermutation) -> BTreeSet<SignedPermutation> {
    let g = w.rank();
    let mut set = BTreeSet::from([SignedPermutation::identity(g)]);
    for i in w.reduced_word() {
        let s = SignedPermutation::simple_reflection(g, i).expect("letters of a reduced word are simple");
        let extended: Vec<SignedPermutation> = set.iter().map(|u| u.mul(&s)).collect();
        set.extend(extended);
    }
    set
}

fn bruhat(sweep: &mut Sweep, g_max: usize) {
    for g in 1..=g_max {
        let group = match enumerate_group(g) {
            Ok(group) => group,
            Err(e) => {
                sweep.record(Err(json!({ "g": g, "error": e.to_string() })));
                return;
            }
        };
        for w in &group {
            let below = subword_interval(w);
            for v in &group {
                let rank = bruhat_leq(v, w).unwrap_or(false);
                let outcome = if rank == below.contains(v) {
                    Ok(())
                } else {
                    Err(json!({ "v": v.images(), "w": w.images(), "rank_criterion": rank }))
                };
                if !sweep.record(outcome) {
                    return;
                }
            }
        }
    }
}

/// Flags checked per pair at ranks too large for exhaustive enumeration.
pub const RANDOM_FLAGS: usize = 500;

fn schubert(sweep: &mut Sweep, g_max: usize, primes: &[u64]) {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for g in 1..=g_max {
        for &p in primes {
            let space = match SymplecticSpace::new(g, p) {
                Ok(s) => s,
                Err(e) => {
                    sweep.record(Err(json!({ "g": g, "p": p, "error": e.to_string() })));
                    return;
                }
            };
            let exhaustive = (p as f64).powi(2 * g as i32) <= 64.0;
            for pair in admissible_pairs(g) {
                let jt = pair.datum.jtilde;
                let flags = if exhaustive {
                    enumerate_flags(&space, &jt)
                } else {
                    (0..RANDOM_FLAGS).map(|_| random_flag(&space, &jt, &mut rng)).collect()
                };
                for flag in flags {
                    let quick = admissible_closed_test(&flag, &pair);
                    let full = in_closed_cell(&flag, &pair.w, &pair.datum.j);
                    let outcome = match (quick, full) {
                        (Ok(a), Ok(b)) if a == b => Ok(()),
                        (quick, full) => {
                            let mut v = pair_json(&pair);
                            v["flag"] = json!(flag.to_json());
                            v["admissible_test"] = json!(format!("{quick:?}"));
                            v["closed_cell"] = json!(format!("{full:?}"));
                            Err(v)
                        }
                    };
                    if !sweep.record(outcome) {
                        return;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        for check in Check::ALL {
            let report = run_check(check, 2, &[2, 3]).unwrap();
            assert!(report.passed(), "{check}: {:?}", report.counterexample);
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn roundtrip_counts_strata() {
        let report = run_check(Check::Roundtrip, 4, &[2]).unwrap();
        assert_eq!((report.cases, report.passed()), (30, true));
    }

    #[test]
    fn bruhat_pair_count() {
        let report = run_check(Check::Bruhat, 3, &[]).unwrap();
        assert_eq!(report.cases, 4 + 64 + 2304);
        assert!(report.passed());
    }

    #[test]
    fn bad_arguments() {
        assert!(run_check(Check::Bruhat, 9, &[]).is_err());
        assert!(run_check(Check::Weights, 2, &[4]).is_err());
        assert!(run_check(Check::Weights, 2, &[]).is_err());
        assert!(run_check(Check::Weights, 0, &[2]).is_err());
        assert_eq!("schubert".parse::<Check>().unwrap(), Check::Schubert);
        assert!("everything".parse::<Check>().is_err());
    }
}
