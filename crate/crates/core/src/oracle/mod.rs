//! Brute-force reference solvers for the minimum number of storage groups.
//!
//! [`min_eta_star`] finds the fewest `M`-subsets that admit strictly positive
//! fractions giving every server exactly `M/N` of each file; [`min_eta_equal`]
//! does the same when all fractions must be equal. Both enumerate candidate
//! supports exhaustively and are only meant for `N <= 8`.
//!
//! Every search fixes `{1, ..., M}` as a member of the support: any support
//! can be relabelled so that one of its subsets becomes `{1, ..., M}`, and
//! relabelling servers preserves both feasibility and support size.

mod simplex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::sda::{AlphaAssignment, ServerSet};
use crate::{Error, Result};

pub use simplex::{maximize, LpOutcome};

pub const MAX_N: usize = 8;
pub const MAX_CAP: usize = 12;
/// Default number of candidate supports examined before giving up.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// A proposed support: the subsets allowed to carry positive fractions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportCandidate {
    pub subsets: Vec<ServerSet>,
}

impl SupportCandidate {
    pub fn new(subsets: Vec<ServerSet>) -> Self {
        SupportCandidate { subsets }
    }

    fn check(&self, n: usize, m: usize) -> Result<()> {
        if self.subsets.is_empty() {
            return Err(Error::InvalidParameters("empty support".into()));
        }
        for (i, s) in self.subsets.iter().enumerate() {
            if s.len() != m || s.iter().any(|x| x == 0 || x > n) {
                return Err(Error::InvalidParameters(format!(
                    "subset {s} is not an {m}-subset of 1..={n}"
                )));
            }
            if self.subsets[..i].contains(s) {
                return Err(Error::InvalidParameters(format!("subset {s} repeated")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub feasible: bool,
    pub witness: Option<AlphaAssignment>,
}

/// Decides whether strictly positive fractions on `candidate` can give every
/// server exactly `M/N`.
///
/// Solved as one exact LP: maximize `t` subject to the per-server equalities
/// and `alpha_S - t >= 0` for every subset. A strictly positive solution
/// exists iff the optimum is positive, and the optimizer is then a witness.
pub fn lp_feasible(candidate: &SupportCandidate, n: usize, m: usize) -> Result<FeasibilityResult> {
    if m == 0 || m > n {
        return Err(Error::InvalidParameters(format!("need 1 <= M <= N, got N={n} M={m}")));
    }
    candidate.check(n, m)?;
    let s = candidate.subsets.len();
    // columns: alpha_0..alpha_{s-1}, t, slack_0..slack_{s-1}
    let cols = 2 * s + 1;
    let one = BigRational::from_integer(BigInt::from(1));
    let zero = BigRational::zero();
    let load = BigRational::new(BigInt::from(m), BigInt::from(n));

    let mut a = Vec::with_capacity(n + s);
    let mut b = Vec::with_capacity(n + s);
    for server in 1..=n {
        let mut row = vec![zero.clone(); cols];
        for (j, set) in candidate.subsets.iter().enumerate() {
            if set.contains(server) {
                row[j] = one.clone();
            }
        }
        a.push(row);
        b.push(load.clone());
    }
    for j in 0..s {
        let mut row = vec![zero.clone(); cols];
        row[j] = one.clone();
        row[s] = -one.clone();
        row[s + 1 + j] = -one.clone();
        a.push(row);
        b.push(zero.clone());
    }
    let mut c = vec![zero.clone(); cols];
    c[s] = one;

    let infeasible = FeasibilityResult {
        feasible: false,
        witness: None,
    };
    match maximize(&a, &b, &c) {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            let witness = AlphaAssignment {
                n,
                m,
                entries: candidate.subsets.iter().cloned().zip(x.into_iter().take(s)).collect(),
            };
            // exact re-check of the solver's answer
            witness
                .check()
                .map_err(|e| Error::ProtocolViolation(format!("LP witness failed re-check: {e}")))?;
            Ok(FeasibilityResult {
                feasible: true,
                witness: Some(witness),
            })
        }
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => Ok(infeasible),
        LpOutcome::Unbounded => Err(Error::ProtocolViolation(
            "feasibility LP reported unbounded".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { eta: usize, witness: AlphaAssignment },
    /// No support of size at most `cap` works.
    ExceedsCap { cap: usize },
}

impl SearchOutcome {
    pub fn eta(&self) -> Option<usize> {
        match self {
            SearchOutcome::Found { eta, .. } => Some(*eta),
            SearchOutcome::ExceedsCap { .. } => None,
        }
    }
}

fn check_search(n: usize, m: usize, cap: usize) -> Result<()> {
    if !(2 <= m && m <= n && n <= MAX_N) {
        return Err(Error::InvalidParameters(format!(
            "oracle needs 2 <= M <= N <= {MAX_N}, got N={n} M={m}"
        )));
    }
    if cap == 0 || cap > MAX_CAP {
        return Err(Error::InvalidParameters(format!("cap must be in 1..={MAX_CAP}")));
    }
    Ok(())
}

/// All `m`-subsets of `1..=n` in lexicographic order.
pub fn all_subsets(n: usize, m: usize) -> Vec<ServerSet> {
    let mut out = Vec::new();
    for_each_combination(n, m, |idx| {
        out.push(ServerSet::new(idx.iter().map(|i| i + 1).collect()));
        true
    });
    out
}

// Calls `f` on every k-combination of 0..n in lexicographic order until it
// returns false. Returns false if stopped early.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return true;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn covers_all(subsets: &[&ServerSet], n: usize) -> bool {
    let mut seen = vec![false; n + 1];
    for s in subsets {
        for x in s.iter() {
            seen[x] = true;
        }
    }
    seen[1..].iter().all(|&b| b)
}

/// Smallest support size admitting a feasible storage split, by exhaustive
/// search over supports of size 1, 2, ... up to `cap`.
pub fn min_eta_star(n: usize, m: usize, cap: usize) -> Result<SearchOutcome> {
    min_eta_star_with_budget(n, m, cap, DEFAULT_BUDGET)
}

pub fn min_eta_star_with_budget(n: usize, m: usize, cap: usize, budget: u64) -> Result<SearchOutcome> {
    check_search(n, m, cap)?;
    let subsets = all_subsets(n, m);
    let mut examined = 0u64;
    for size in 1..=cap.min(subsets.len()) {
        let mut found: Option<Result<AlphaAssignment>> = None;
        let mut over_budget = false;
        let rest = &subsets[1..];
        for_each_combination(rest.len(), size - 1, |idx| {
            examined += 1;
            if examined > budget {
                over_budget = true;
                return false;
            }
            let mut chosen: Vec<&ServerSet> = Vec::with_capacity(size);
            chosen.push(&subsets[0]);
            chosen.extend(idx.iter().map(|&i| &rest[i]));
            if !covers_all(&chosen, n) {
                return true;
            }
            let candidate = SupportCandidate::new(chosen.into_iter().cloned().collect());
            match lp_feasible(&candidate, n, m) {
                Ok(FeasibilityResult {
                    witness: Some(w), ..
                }) => {
                    found = Some(Ok(w));
                    false
                }
                Ok(_) => true,
                Err(e) => {
                    found = Some(Err(e));
                    false
                }
            }
        });
        if over_budget {
            return Err(Error::BudgetExceeded(format!(
                "no feasible support of size < {size} for (N={n}, M={m}); \
                 stopped inside size {size} after {budget} candidates"
            )));
        }
        if let Some(w) = found {
            return Ok(SearchOutcome::Found {
                eta: size,
                witness: w?,
            });
        }
    }
    Ok(SearchOutcome::ExceedsCap { cap })
}

/// Smallest number of distinct `M`-subsets, all given the same fraction,
/// that load every server equally.
///
/// With `eta` equal fractions each server lies in `M * eta / N` subsets, so
/// sizes where that is not an integer are skipped by counting; every other
/// size is searched by backtracking.
pub fn min_eta_equal(n: usize, m: usize, cap: usize) -> Result<SearchOutcome> {
    min_eta_equal_with_budget(n, m, cap, DEFAULT_BUDGET)
}

pub fn min_eta_equal_with_budget(n: usize, m: usize, cap: usize, budget: u64) -> Result<SearchOutcome> {
    check_search(n, m, cap)?;
    let subsets = all_subsets(n, m);
    let mut nodes = 0u64;
    for eta in 1..=cap.min(subsets.len()) {
        if !(m * eta).is_multiple_of(n) {
            continue;
        }
        let per_server = m * eta / n;
        let mut degree = vec![0usize; n + 1];
        for x in subsets[0].iter() {
            degree[x] += 1;
        }
        let mut chosen = vec![0usize];
        let hit = equal_search(
            &subsets,
            eta,
            per_server,
            &mut degree,
            &mut chosen,
            &mut nodes,
            budget,
        )?;
        if hit {
            let delta = BigRational::new(BigInt::from(1), BigInt::from(eta));
            let witness = AlphaAssignment {
                n,
                m,
                entries: chosen.iter().map(|&i| (subsets[i].clone(), delta.clone())).collect(),
            };
            witness.check()?;
            return Ok(SearchOutcome::Found { eta, witness });
        }
    }
    Ok(SearchOutcome::ExceedsCap { cap })
}

fn equal_search(
    subsets: &[ServerSet],
    eta: usize,
    per_server: usize,
    degree: &mut [usize],
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::BudgetExceeded(format!(
            "equal-size search stopped at {eta} subsets after {budget} nodes"
        )));
    }
    if chosen.len() == eta {
        return Ok(degree[1..].iter().all(|&d| d == per_server));
    }
    let start = chosen.last().map_or(0, |&i| i + 1);
    for i in start..subsets.len() {
        if subsets.len() - i < eta - chosen.len() {
            break;
        }
        if subsets[i].iter().any(|x| degree[x] >= per_server) {
            continue;
        }
        for x in subsets[i].iter() {
            degree[x] += 1;
        }
        chosen.push(i);
        if equal_search(subsets, eta, per_server, degree, chosen, nodes, budget)? {
            return Ok(true);
        }
        chosen.pop();
        for x in subsets[i].iter() {
            degree[x] -= 1;
        }
    }
    Ok(false)
}
