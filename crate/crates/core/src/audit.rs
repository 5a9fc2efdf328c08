//! Exhaustive checks of privacy, decodability, download cost, placement and
//! sub-packetization on constructed schemes.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::scpir::{
    self, FileLibrary, Fault, Method, PacketId, PacketLayout, Scheme, ServerViews, StoragePlan,
    JOINT_LIMIT,
};
use crate::sda;
use crate::sfpir::{self, Answer};
use crate::{download_factor, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: String,
    pub expected: String,
    pub citation: String,
    pub detail: String,
}

impl Check {
    fn new(name: &str, citation: &str, measured: impl ToString, expected: impl ToString, pass: bool) -> Self {
        Check {
            name: name.to_string(),
            pass,
            measured: measured.to_string(),
            expected: expected.to_string(),
            citation: citation.to_string(),
            detail: String::new(),
        }
    }

    fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub checks: Vec<Check>,
}

impl AuditReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Combines reports, ordering checks by name.
    pub fn merge(reports: impl IntoIterator<Item = AuditReport>) -> AuditReport {
        let mut checks: Vec<Check> = reports.into_iter().flat_map(|r| r.checks).collect();
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        AuditReport { checks }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,status,measured,expected,citation\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.name,
                status(c.pass),
                c.measured,
                c.expected,
                c.citation
            ));
        }
        out
    }
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = |g: fn(&Check) -> &str, head: &str| {
            self.checks.iter().map(|c| g(c).len()).max().unwrap_or(0).max(head.len())
        };
        let wn = width(|c| &c.name, "check");
        let wm = width(|c| &c.measured, "measured");
        let we = width(|c| &c.expected, "expected");
        writeln!(f, "{:wn$}  status  {:wm$}  {:we$}  citation", "check", "measured", "expected")?;
        for c in &self.checks {
            write!(
                f,
                "{:wn$}  {:6}  {:wm$}  {:we$}  {}",
                c.name,
                status(c.pass),
                c.measured,
                c.expected,
                c.citation
            )?;
            if !c.detail.is_empty() {
                write!(f, "  ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        write!(f, "overall: {}", status(self.pass()))
    }
}

fn big(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn zero_library(layout: &PacketLayout, k: usize) -> Result<FileLibrary> {
    FileLibrary::new(vec![vec![0u8; layout.file_len]; k])
}

/// Product of the per-group realization counts, if no larger than
/// [`JOINT_LIMIT`].
fn joint_count(layout: &PacketLayout, k: usize) -> Result<Option<u64>> {
    let per = sfpir::realization_count(layout.m, k)?;
    let mut total = 1u64;
    for _ in &layout.groups {
        total = total.saturating_mul(per);
        if total > JOINT_LIMIT {
            return Ok(None);
        }
    }
    Ok(Some(total))
}

/// Calls `f` with one realization index per group, odometer order.
fn for_each_joint(groups: usize, per: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; groups];
    loop {
        f(&idx);
        let mut g = groups;
        loop {
            if g == 0 {
                return;
            }
            g -= 1;
            idx[g] += 1;
            if idx[g] < per {
                break;
            }
            idx[g] = 0;
        }
    }
}

type ServerView = (Vec<usize>, Option<Vec<u8>>);

/// For every server and every pair of files, the multiset of
/// (query, answer bytes) it sees over all realizations must not depend on
/// the requested file.
pub fn privacy_audit(plan: &StoragePlan, layout: &PacketLayout, library: &FileLibrary, k: usize) -> Result<Check> {
    privacy_audit_with(plan, layout, library, k, Fault::None)
}

pub fn privacy_audit_with(
    plan: &StoragePlan,
    layout: &PacketLayout,
    library: &FileLibrary,
    k: usize,
    fault: Fault,
) -> Result<Check> {
    let views = ServerViews::build(plan, layout, library)?;
    let m = layout.m;
    sfpir::realization_count(m, k)?;
    let mut compared = 0usize;
    for (gi, g) in layout.groups.iter().enumerate() {
        // views_by_theta[theta - 1][pos]: sorted (query, answer) pairs
        let mut views_by_theta: Vec<Vec<Vec<ServerView>>> = Vec::with_capacity(k);
        for theta in 1..=k {
            let mut seen: Vec<Vec<ServerView>> = vec![Vec::new(); m];
            for base in sfpir::enumerate_realizations(m, k)? {
                let run = scpir::run_group(&views, gi, theta, &base, fault)?;
                for (pos, (q, a)) in run.queries.iter().zip(&run.answers).enumerate() {
                    seen[pos].push((q.entries().to_vec(), a.payload().map(|p| p.as_bytes().to_vec())));
                }
            }
            for s in &mut seen {
                s.sort();
            }
            views_by_theta.push(seen);
        }
        for (pos, reference) in views_by_theta[0].iter().enumerate() {
            for theta in 2..=k {
                compared += 1;
                if *reference != views_by_theta[theta - 1][pos] {
                    let server = g.servers.as_slice()[pos];
                    return Ok(Check::new("privacy", "privacy", "distinguishable", "identical", false).detail(
                        format!("server {server} in group {} separates file 1 from file {theta}", gi + 1),
                    ));
                }
            }
        }
    }
    Ok(Check::new("privacy", "privacy", "identical", "identical", true)
        .detail(format!("{compared} server/file-pair comparisons")))
}

/// Per group and file: every realization's decoded segment, or `None` when
/// decoding failed, plus the symbols downloaded.
struct GroupOutcomes {
    segments: Vec<Option<Vec<u8>>>,
    downloads: Vec<usize>,
}

fn group_outcomes(
    views: &ServerViews,
    layout: &PacketLayout,
    k: usize,
    fault: Fault,
) -> Result<Vec<Vec<GroupOutcomes>>> {
    let m = layout.m;
    sfpir::realization_count(m, k)?;
    (0..layout.groups.len())
        .into_par_iter()
        .map(|gi| {
            (1..=k)
                .map(|theta| {
                    let mut out = GroupOutcomes {
                        segments: Vec::new(),
                        downloads: Vec::new(),
                    };
                    for base in sfpir::enumerate_realizations(m, k)? {
                        let run = scpir::run_group(views, gi, theta, &base, fault)?;
                        out.downloads.push(run.answers.iter().map(Answer::len).sum());
                        out.segments.push(run.decoded.ok().map(|ps| {
                            ps.iter().flat_map(|p| p.as_bytes().iter().copied()).collect()
                        }));
                    }
                    Ok(out)
                })
                .collect()
        })
        .collect()
}

/// Every file decodes correctly under every realization.
pub fn correctness_audit(plan: &StoragePlan, layout: &PacketLayout, library: &FileLibrary) -> Result<Check> {
    correctness_audit_with(plan, layout, library, Fault::None)
}

pub fn correctness_audit_with(
    plan: &StoragePlan,
    layout: &PacketLayout,
    library: &FileLibrary,
    fault: Fault,
) -> Result<Check> {
    let k = plan.k;
    let views = ServerViews::build(plan, layout, library)?;
    let outcomes = group_outcomes(&views, layout, k, fault)?;
    let per = sfpir::realization_count(layout.m, k)? as usize;
    let mut checked = 0u64;
    let mut failures = 0u64;
    let mut first = None;
    let joint = joint_count(layout, k)?.is_some();
    for theta in 1..=k {
        let file = library.file(theta)?;
        if joint {
            for_each_joint(layout.groups.len(), per, |idx| {
                checked += 1;
                let mut assembled = Vec::with_capacity(file.len());
                let mut ok = true;
                for (gi, &r) in idx.iter().enumerate() {
                    match &outcomes[gi][theta - 1].segments[r] {
                        Some(seg) => assembled.extend_from_slice(seg),
                        None => ok = false,
                    }
                }
                if !ok || assembled != file {
                    failures += 1;
                    first.get_or_insert((theta, None));
                }
            });
        } else {
            for (gi, g) in layout.groups.iter().enumerate() {
                let want = &file[g.file_offset..g.file_offset + g.group_bytes];
                for seg in &outcomes[gi][theta - 1].segments {
                    checked += 1;
                    if seg.as_deref() != Some(want) {
                        failures += 1;
                        first.get_or_insert((theta, Some(gi + 1)));
                    }
                }
            }
        }
    }
    let mode = if joint { "joint" } else { "per-group" };
    let mut detail = format!("{checked} {mode} realizations");
    if let Some((theta, group)) = first {
        detail.push_str(&format!(", first failure at file {theta}"));
        if let Some(g) = group {
            detail.push_str(&format!(" group {g}"));
        }
    }
    Ok(Check::new("correctness", "decodability", failures, 0, failures == 0).detail(detail))
}

/// Exact average download over all realizations against
/// `L (1 + 1/M + ... + 1/M^(K-1))`, for every requested file.
pub fn rate_audit(plan: &StoragePlan, layout: &PacketLayout, k: usize) -> Result<Check> {
    rate_audit_with(plan, layout, k, Fault::None)
}

pub fn rate_audit_with(plan: &StoragePlan, layout: &PacketLayout, k: usize, fault: Fault) -> Result<Check> {
    let library = zero_library(layout, k)?;
    let views = ServerViews::build(plan, layout, &library)?;
    let outcomes = group_outcomes(&views, layout, k, fault)?;
    let per = sfpir::realization_count(layout.m, k)?;
    let expected = download_factor(layout.m, k) * big(layout.file_len);
    let joint = joint_count(layout, k)?;
    let mut worst: Option<BigRational> = None;
    for theta in 1..=k {
        let measured = match joint {
            Some(total) => {
                let mut sum = 0u64;
                for_each_joint(layout.groups.len(), per as usize, |idx| {
                    sum += idx
                        .iter()
                        .enumerate()
                        .map(|(gi, &r)| outcomes[gi][theta - 1].downloads[r] as u64)
                        .sum::<u64>();
                });
                BigRational::new(BigInt::from(sum), BigInt::from(total))
            }
            None => outcomes.iter().fold(BigRational::zero(), |acc, g| {
                let sum: usize = g[theta - 1].downloads.iter().sum();
                acc + BigRational::new(BigInt::from(sum), BigInt::from(per))
            }),
        };
        if measured != expected {
            return Ok(Check::new("rate", "capacity", &measured, &expected, false)
                .detail(format!("file {theta}")));
        }
        worst = Some(measured);
    }
    let measured = worst.unwrap_or_else(BigRational::zero);
    let mode = if joint.is_some() { "joint" } else { "per-group" };
    Ok(Check::new("rate", "capacity", &measured, &expected, true)
        .detail(format!("{mode} enumeration, L={}", layout.file_len)))
}

/// Over all realizations of one group with `theta` requested, the number of
/// non-silent answers; `M^(K+1) - M` for the honest scheme.
pub fn non_silent_answers(m: usize, k: usize, theta: usize) -> Result<u64> {
    let mut count = 0u64;
    for base in sfpir::enumerate_realizations(m, k)? {
        count += sfpir::make_queries(theta, &base, m)?
            .iter()
            .filter(|q| !q.is_silent(m))
            .count() as u64;
    }
    Ok(count)
}

/// Every packet on exactly `M` servers, and every server holding exactly
/// `MKL/N` symbols.
pub fn storage_audit(plan: &StoragePlan, layout: &PacketLayout) -> Vec<Check> {
    let (n, m, k) = (plan.n, plan.m, plan.k);
    let mut copies: HashMap<PacketId, usize> = HashMap::new();
    for list in &plan.per_server {
        for id in list {
            *copies.entry(*id).or_default() += 1;
        }
    }
    let mut bad_packets = 0usize;
    let mut first_packet = None;
    for (gi, _) in layout.groups.iter().enumerate() {
        for file in 0..k {
            for index in 0..m - 1 {
                let id = PacketId { group: gi, file, index };
                let c = copies.remove(&id).unwrap_or(0);
                if c != m {
                    bad_packets += 1;
                    first_packet.get_or_insert((id, c));
                }
            }
        }
    }
    // anything left is a packet the layout never defined
    bad_packets += copies.len();
    let mut p1 = Check::new("storage-p1", "P1", bad_packets, 0, bad_packets == 0);
    if let Some((id, c)) = first_packet {
        p1 = p1.detail(format!(
            "packet {} of file {} in group {} on {c} servers",
            id.index,
            id.file + 1,
            id.group + 1
        ));
    }

    let target = m * k * layout.file_len / n;
    let exact = (m * k * layout.file_len).is_multiple_of(n);
    let loads: Vec<usize> = (1..=n).map(|s| plan.stored_symbols(layout, s)).collect();
    let off: Vec<usize> = (1..=n).filter(|&s| loads[s - 1] != target).collect();
    let measured = match off.first() {
        Some(&s) => format!("server {s} holds {}", loads[s - 1]),
        None => format!("all hold {target}"),
    };
    let p2 = Check::new("storage-p2", "P2", measured, format!("all hold {target}"), exact && off.is_empty());
    vec![p1, p2]
}

fn gf2_independent(mut rows: Vec<Vec<u64>>) -> bool {
    rows.retain(|r| r.iter().any(|&w| w != 0));
    let total = rows.len();
    let mut rank = 0;
    let words = rows.first().map_or(0, Vec::len);
    for bit in 0..words * 64 {
        let (w, b) = (bit / 64, 1u64 << (bit % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank == total
}

/// GF(2) coefficient rows of one group's answers over (file, packet)
/// coordinates, keeping only files for which `keep` holds.
fn coefficient_rows(queries: &[sfpir::ServerQuery], m: usize, keep: impl Fn(usize) -> bool) -> Vec<Vec<u64>> {
    let k = queries.first().map_or(0, |q| q.entries().len());
    let words = (k * (m - 1)).div_ceil(64).max(1);
    queries
        .iter()
        .map(|q| {
            let mut row = vec![0u64; words];
            for (file, idx) in q.touched(m) {
                if keep(file) {
                    let bit = file * (m - 1) + idx;
                    row[bit / 64] |= 1 << (bit % 64);
                }
            }
            row
        })
        .collect()
}

/// The three retrieval conditions, per realization and per group: desired
/// coefficients independent; coefficients outside any one undesired file
/// independent; residual combinations identical across non-silent answers.
pub fn conditions_audit(plan: &StoragePlan, layout: &PacketLayout, k: usize) -> Result<Vec<Check>> {
    conditions_audit_with(plan, layout, k, Fault::None)
}

pub fn conditions_audit_with(
    plan: &StoragePlan,
    layout: &PacketLayout,
    k: usize,
    fault: Fault,
) -> Result<Vec<Check>> {
    let library = zero_library(layout, k)?;
    let views = ServerViews::build(plan, layout, &library)?;
    let m = layout.m;
    sfpir::realization_count(m, k)?;
    let mut fails = [0u64; 3];
    let mut cases = [0u64; 3];
    for gi in 0..layout.groups.len() {
        for theta in 1..=k {
            for base in sfpir::enumerate_realizations(m, k)? {
                let run = scpir::run_group(&views, gi, theta, &base, fault)?;
                let t = theta - 1;
                cases[0] += 1;
                if !gf2_independent(coefficient_rows(&run.queries, m, |f| f == t)) {
                    fails[0] += 1;
                }
                for other in (0..k).filter(|&f| f != t) {
                    cases[1] += 1;
                    if !gf2_independent(coefficient_rows(&run.queries, m, |f| f != other)) {
                        fails[1] += 1;
                    }
                    cases[2] += 1;
                    let residual: Vec<Vec<u64>> = coefficient_rows(&run.queries, m, |f| f != t && f != other)
                        .into_iter()
                        .zip(&run.queries)
                        .filter(|(_, q)| !q.is_silent(m))
                        .map(|(r, _)| r)
                        .collect();
                    if residual.windows(2).any(|w| w[0] != w[1]) {
                        fails[2] += 1;
                    }
                }
            }
        }
    }
    let names = [("conditions-p3", "P3"), ("conditions-p4", "P4"), ("conditions-p5", "P5")];
    Ok(names
        .iter()
        .enumerate()
        .map(|(i, (name, cite))| {
            Check::new(name, cite, fails[i], 0, fails[i] == 0).detail(format!("{} cases", cases[i]))
        })
        .collect())
}

/// Sub-packetization of the constructions against each other and against
/// the lower bound.
pub fn subpacketization_audit(n: usize, m: usize) -> Result<Vec<Check>> {
    if m == 1 {
        return Err(Error::DegenerateRetrieval);
    }
    let g = n.gcd(&m);
    let unit = m - 1;
    let f_equal = sda::build_equal_size(n, m)?.eta() * unit;
    let greedy = sda::build_greedy(n, m)?;
    let f_greedy = greedy.eta() * unit;
    let f_lower = sda::eta_lower_bound(n, m)? * unit;
    let f_recursion = sda::eta_recursion(n, m)? * unit;
    let mut checks = vec![
        Check::new("subpacketization-equal", "equal-size", f_equal, n * unit / g, f_equal == n * unit / g),
        Check::new("subpacketization-greedy", "recursion", f_greedy, f_recursion, f_greedy == f_recursion),
        Check::new(
            "subpacketization-greedy-vs-equal",
            "recursion",
            f_greedy,
            format!("<= {f_equal}"),
            f_greedy <= f_equal,
        ),
        Check::new(
            "subpacketization-lower",
            "lower-bound",
            f_greedy,
            format!(">= {f_lower}"),
            f_greedy >= f_lower,
        ),
    ];
    let gap = BigRational::new(BigInt::from(f_greedy), BigInt::from(f_lower));
    let bound = gap_bound(n, m);
    checks.push(Check::new("subpacketization-gap", "gap", &gap, format!("<= {bound}"), gap <= bound));
    if m == n || n.is_multiple_of(m.min(n - m)) {
        checks.push(Check::new(
            "subpacketization-optimal",
            "optimal-case",
            f_greedy,
            f_lower,
            f_greedy == f_lower,
        ));
    }
    if let Some(eta) = sda::eta_improved(n, m) {
        let built = sda::build_improved(n, m)?;
        let ok = built.validate().is_ok() && built.eta() == eta;
        checks.push(Check::new("subpacketization-improved", "improved", built.eta() * unit, eta * unit, ok));
    }
    Ok(checks)
}

/// `min{M, N-M} / gcd(N, M)`, and 1 when `M = N`.
pub fn gap_bound(n: usize, m: usize) -> BigRational {
    if m == n {
        return big(1);
    }
    BigRational::new(BigInt::from(m.min(n - m)), BigInt::from(n.gcd(&m)))
}

/// Full audit of the greedy scheme at the minimal file length.
pub fn run_all(n: usize, m: usize, k: usize, seed: u64) -> Result<AuditReport> {
    let scheme = Scheme::build(n, m, k, 1, Method::Greedy, seed)?;
    audit_scheme(&scheme)
}

pub fn audit_scheme(scheme: &Scheme) -> Result<AuditReport> {
    let (plan, layout, library) = (&scheme.plan, &scheme.layout, &scheme.library);
    let k = scheme.k();
    let n = plan.n;
    let m = plan.m;
    let (left, right) = rayon::join(
        || -> Result<Vec<Check>> {
            Ok(vec![
                privacy_audit(plan, layout, library, k)?,
                correctness_audit(plan, layout, library)?,
                rate_audit(plan, layout, k)?,
            ])
        },
        || -> Result<Vec<Check>> {
            let mut v = storage_audit(plan, layout);
            v.extend(conditions_audit(plan, layout, k)?);
            v.extend(subpacketization_audit(n, m)?);
            Ok(v)
        },
    );
    Ok(AuditReport::merge([
        AuditReport { checks: left? },
        AuditReport { checks: right? },
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn scheme(n: usize, m: usize, k: usize) -> Scheme {
        Scheme::build(n, m, k, 1, Method::Greedy, 11).unwrap()
    }

    #[test]
    fn honest_schemes_pass() {
        for (n, m, k) in [(2, 2, 2), (3, 3, 2), (4, 2, 2), (9, 4, 2)] {
            let report = audit_scheme(&scheme(n, m, k)).unwrap();
            assert!(report.pass(), "{n} {m} {k}\n{report}");
        }
    }

    #[test]
    fn privacy_catches_unreduced_shift() {
        let s = scheme(2, 2, 2);
        let c = privacy_audit_with(&s.plan, &s.layout, &s.library, 2, Fault::UnreducedShift).unwrap();
        assert!(!c.pass);
    }

    #[test]
    fn correctness_catches_bit_flip() {
        let s = scheme(4, 2, 2);
        let c = correctness_audit_with(&s.plan, &s.layout, &s.library, Fault::FlipAnswerBit).unwrap();
        assert!(!c.pass);
    }

    #[test]
    fn conditions_catch_duplicated_shift() {
        let s = scheme(3, 3, 2);
        let c = conditions_audit_with(&s.plan, &s.layout, 2, Fault::DuplicatedShift).unwrap();
        assert!(!c[0].pass);
    }

    #[test]
    fn rate_values() {
        let s = scheme(2, 2, 2);
        let c = rate_audit(&s.plan, &s.layout, 2).unwrap();
        assert_eq!(c.measured, (ratio(3, 2) * big(s.layout.file_len)).to_string());
        let s = scheme(12, 5, 2);
        let c = rate_audit(&s.plan, &s.layout, 2).unwrap();
        assert!(c.pass);
        assert_eq!(c.measured, "288/5");
        let s = scheme(6, 3, 1);
        let c = rate_audit(&s.plan, &s.layout, 1).unwrap();
        assert_eq!(c.measured, s.layout.file_len.to_string());
    }

    #[test]
    fn non_silent_count() {
        assert_eq!(non_silent_answers(2, 2, 1).unwrap(), 6);
        assert_eq!(non_silent_answers(3, 2, 2).unwrap(), 24);
    }

    #[test]
    fn storage_faults() {
        let s = scheme(9, 4, 2);
        assert!(storage_audit(&s.plan, &s.layout).iter().all(|c| c.pass));

        let mut dup = s.plan.clone();
        let id = dup.per_server[0][0];
        let outsider = (1..=9).find(|&v| !s.layout.groups[id.group].servers.contains(v)).unwrap();
        dup.per_server[outsider - 1].push(id);
        assert!(!storage_audit(&dup, &s.layout)[0].pass);

        let mut short = s.plan.clone();
        short.per_server[3].pop();
        assert!(!storage_audit(&short, &s.layout)[1].pass);
    }

    #[test]
    fn subpacketization_examples() {
        let c = subpacketization_audit(12, 5).unwrap();
        assert!(c.iter().all(|c| c.pass));
        let greedy = c.iter().find(|c| c.name == "subpacketization-greedy").unwrap();
        assert_eq!(greedy.measured, "24");
        let gap = c.iter().find(|c| c.name == "subpacketization-gap").unwrap();
        assert_eq!(gap.measured, "2");

        let c = subpacketization_audit(12, 4).unwrap();
        let opt = c.iter().find(|c| c.name == "subpacketization-optimal").unwrap();
        assert!(opt.pass);
        assert_eq!(opt.measured, "9");

        let c = subpacketization_audit(5, 5).unwrap();
        assert!(c.iter().all(|c| c.pass));
        assert_eq!(c[1].measured, "4");
    }

    #[test]
    fn csv_header() {
        let report = AuditReport::merge([AuditReport {
            checks: subpacketization_audit(6, 3).unwrap(),
        }]);
        let csv = report.to_csv();
        assert!(csv.starts_with("check,status,measured,expected,citation\n"));
        assert_eq!(csv.lines().count(), report.checks.len() + 1);
    }
}
