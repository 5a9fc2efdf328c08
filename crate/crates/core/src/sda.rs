//! Storage design arrays.
//!
//! An `(N, M)` storage design array is an `N x N/gcd(N,M)` grid of stars and
//! blanks in which every column holds `M` stars and every row holds
//! `M/gcd(N,M)` stars. Column `j` names the server subset that stores the
//! `j`-th `gcd(N,M)/N` slice of every file, so the number of *distinct*
//! columns is the number of independent retrieval groups, and the
//! sub-packetization of the resulting scheme is that count times `M - 1`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A subset of servers, stored sorted ascending with 1-based server ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ServerSet(Vec<usize>);

impl ServerSet {
    pub fn new(mut servers: Vec<usize>) -> Self {
        servers.sort_unstable();
        servers.dedup();
        ServerSet(servers)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, server: usize) -> bool {
        self.0.binary_search(&server).is_ok()
    }

    /// Position of `server` inside the subset, i.e. its relabelled index in
    /// the group's replicated retrieval.
    pub fn position(&self, server: usize) -> Option<usize> {
        self.0.binary_search(&server).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for ServerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// First broken S1/S2 condition found by [`StorageDesignArray::validate`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("column {col} has {stars} stars, expected {expected}")]
    Column {
        col: usize,
        stars: usize,
        expected: usize,
    },
    #[error("row {row} has {stars} stars, expected {expected}")]
    Row {
        row: usize,
        stars: usize,
        expected: usize,
    },
}

fn check_params(n: usize, m: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= M <= N, got N={n} M={m}"
        )));
    }
    Ok(())
}

/// Number of columns of an `(n, m)` array.
pub fn column_count(n: usize, m: usize) -> usize {
    n / n.gcd(&m)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StorageDesignArray {
    n: usize,
    m: usize,
    cols: usize,
    // row-major, true = star
    cells: Vec<bool>,
}

impl StorageDesignArray {
    fn blank(n: usize, m: usize) -> Self {
        let cols = column_count(n, m);
        StorageDesignArray {
            n,
            m,
            cols,
            cells: vec![false; n * cols],
        }
    }

    /// Wraps a raw grid. Only the shape is checked here; S1/S2 are left to
    /// [`validate`](Self::validate).
    pub fn from_rows(n: usize, m: usize, rows: Vec<Vec<bool>>) -> Result<Self> {
        check_params(n, m)?;
        let cols = column_count(n, m);
        let got_cols = rows.first().map_or(0, Vec::len);
        if rows.len() != n || rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                rows: rows.len(),
                cols: got_cols,
                expected_rows: n,
                expected_cols: cols,
            });
        }
        Ok(StorageDesignArray {
            n,
            m,
            cols,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Zero-based cell access.
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.cols + col]
    }

    fn set(&mut self, row: usize, col: usize) {
        self.cells[row * self.cols + col] = true;
    }

    fn fill(&mut self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) {
        for r in rows {
            for c in cols.clone() {
                self.set(r, c);
            }
        }
    }

    /// Servers (1-based) holding a star in zero-based column `col`.
    pub fn column_set(&self, col: usize) -> ServerSet {
        ServerSet((0..self.n).filter(|&r| self.get(r, col)).map(|r| r + 1).collect())
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let per_row = self.m / self.n.gcd(&self.m);
        for col in 0..self.cols {
            let stars = (0..self.n).filter(|&r| self.get(r, col)).count();
            if stars != self.m {
                return Err(Violation::Column {
                    col: col + 1,
                    stars,
                    expected: self.m,
                });
            }
        }
        for row in 0..self.n {
            let stars = (0..self.cols).filter(|&c| self.get(row, c)).count();
            if stars != per_row {
                return Err(Violation::Row {
                    row: row + 1,
                    stars,
                    expected: per_row,
                });
            }
        }
        Ok(())
    }

    pub fn column_profile(&self) -> ColumnProfile {
        let mut index: HashMap<ServerSet, usize> = HashMap::new();
        let mut distinct = Vec::new();
        let mut multiplicities: Vec<usize> = Vec::new();
        for col in 0..self.cols {
            let set = self.column_set(col);
            match index.get(&set) {
                Some(&l) => multiplicities[l] += 1,
                None => {
                    index.insert(set.clone(), distinct.len());
                    distinct.push(set);
                    multiplicities.push(1);
                }
            }
        }
        ColumnProfile {
            n: self.n,
            m: self.m,
            distinct,
            multiplicities,
        }
    }

    /// Number of distinct columns.
    pub fn eta(&self) -> usize {
        self.column_profile().eta()
    }

    /// Every cell flipped: an `(N, N-M)` array with the same distinct-column
    /// count.
    pub fn opposite(&self) -> Result<StorageDesignArray> {
        if self.m == self.n {
            return Err(Error::InvalidParameters(
                "opposite of an M=N array has no stars".into(),
            ));
        }
        Ok(StorageDesignArray {
            n: self.n,
            m: self.n - self.m,
            cols: self.cols,
            cells: self.cells.iter().map(|c| !c).collect(),
        })
    }

    /// `N M` header followed by one line of `*`/`.` per row.
    pub fn to_ascii(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m);
        for r in 0..self.n {
            out.extend((0..self.cols).map(|c| if self.get(r, c) { '*' } else { '.' }));
            out.push('\n');
        }
        out
    }

    pub fn parse_ascii(text: &str) -> Result<StorageDesignArray> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split(' ').collect();
        let parse_num = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("expected \"N M\", got {header:?}"),
            })
        };
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected \"N M\", got {header:?}"),
            });
        }
        let (n, m) = (parse_num(fields[0])?, parse_num(fields[1])?);
        check_params(n, m).map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
        let cols = column_count(n, m);
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line_no = i + 2;
            let line = lines.next().ok_or(Error::Parse {
                line: line_no,
                msg: format!("expected {n} rows, found {i}"),
            })?;
            if line.chars().count() != cols {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {cols} cells, found {}", line.chars().count()),
                });
            }
            let row = line
                .chars()
                .map(|c| match c {
                    '*' => Ok(true),
                    '.' => Ok(false),
                    other => Err(Error::Parse {
                        line: line_no,
                        msg: format!("unexpected character {other:?}"),
                    }),
                })
                .collect::<Result<Vec<bool>>>()?;
            rows.push(row);
        }
        if let Some((i, _)) = lines.enumerate().find(|(_, l)| !l.is_empty()) {
            return Err(Error::Parse {
                line: n + 2 + i,
                msg: "trailing content after last row".into(),
            });
        }
        StorageDesignArray::from_rows(n, m, rows)
    }
}

impl fmt::Display for StorageDesignArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

/// Distinct columns of an array in first-occurrence order, with how often
/// each one repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnProfile {
    pub n: usize,
    pub m: usize,
    pub distinct: Vec<ServerSet>,
    pub multiplicities: Vec<usize>,
}

impl ColumnProfile {
    pub fn eta(&self) -> usize {
        self.distinct.len()
    }

    /// `alpha_S = s_l * gcd(N,M) / N` on each distinct column, zero elsewhere.
    pub fn alpha(&self) -> AlphaAssignment {
        alpha_from_profile(self)
    }
}

pub fn alpha_from_profile(profile: &ColumnProfile) -> AlphaAssignment {
    let g = profile.n.gcd(&profile.m);
    let entries = profile
        .distinct
        .iter()
        .zip(&profile.multiplicities)
        .map(|(set, &s)| {
            let value = BigRational::new(BigInt::from(s * g), BigInt::from(profile.n));
            (set.clone(), value)
        })
        .collect();
    AlphaAssignment {
        n: profile.n,
        m: profile.m,
        entries,
    }
}

/// Normalized sizes of the per-subset file slices. Subsets not listed carry
/// zero; listed subsets are kept in group order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaAssignment {
    pub n: usize,
    pub m: usize,
    pub entries: Vec<(ServerSet, BigRational)>,
}

impl AlphaAssignment {
    pub fn get(&self, set: &ServerSet) -> BigRational {
        self.entries
            .iter()
            .find(|(s, _)| s == set)
            .map_or_else(BigRational::zero, |(_, a)| a.clone())
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Sum of the fractions held by `server`.
    pub fn server_load(&self, server: usize) -> BigRational {
        self.entries
            .iter()
            .filter(|(s, _)| s.contains(server))
            .fold(BigRational::zero(), |acc, (_, a)| acc + a)
    }

    /// Checks that every subset has `M` servers in range, values are strictly
    /// positive, subsets are distinct, each server carries exactly `M/N`, and
    /// the fractions sum to one.
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidAlpha(msg));
        let mut seen = std::collections::HashSet::new();
        for (set, a) in &self.entries {
            if set.len() != self.m {
                return bad(format!("subset {set} has size {}, expected {}", set.len(), self.m));
            }
            if set.iter().any(|s| s == 0 || s > self.n) {
                return bad(format!("subset {set} names a server outside 1..={}", self.n));
            }
            if *a <= BigRational::zero() {
                return bad(format!("alpha{set} = {a} is not positive"));
            }
            if !seen.insert(set) {
                return bad(format!("subset {set} listed twice"));
            }
        }
        let target = BigRational::new(BigInt::from(self.m), BigInt::from(self.n));
        for server in 1..=self.n {
            let load = self.server_load(server);
            if load != target {
                return bad(format!("server {server} stores {load}, expected {target}"));
            }
        }
        let total = self
            .entries
            .iter()
            .fold(BigRational::zero(), |acc, (_, a)| acc + a);
        if !total.is_one() {
            return bad(format!("fractions sum to {total}"));
        }
        Ok(())
    }
}

/// Cyclic construction with all columns distinct: column `j` (1-based) holds
/// rows `(j-1)M, ..., (j-1)M + M - 1` taken mod `N`, shifted to 1-based.
pub fn build_equal_size(n: usize, m: usize) -> Result<StorageDesignArray> {
    check_params(n, m)?;
    let mut sda = StorageDesignArray::blank(n, m);
    for col in 0..sda.cols {
        for t in 0..m {
            sda.set((t + col * m) % n, col);
        }
    }
    Ok(sda)
}

/// Greedy recursive construction. For `gcd(N,M) = g > 1` the coprime array
/// for `(N/g, M/g)` is stacked `g` times.
pub fn build_greedy(n: usize, m: usize) -> Result<StorageDesignArray> {
    check_params(n, m)?;
    let g = n.gcd(&m);
    let base = greedy_coprime(n / g, m / g);
    let side = n / g;
    let mut sda = StorageDesignArray::blank(n, m);
    for copy in 0..g {
        for r in 0..side {
            for c in 0..side {
                if base.get(r, c) {
                    sda.set(copy * side + r, c);
                }
            }
        }
    }
    Ok(sda)
}

// Square n x n array for coprime (n, m).
fn greedy_coprime(n: usize, m: usize) -> StorageDesignArray {
    let mut out = StorageDesignArray::blank(n, m);
    if n == 1 {
        out.set(0, 0);
        return out;
    }
    if n >= 2 * m {
        out.fill(0..m, 0..m);
        let sub = greedy_coprime(n - m, m);
        paste(&mut out, &sub, m, m);
    } else {
        let rest = n - m;
        out.fill(0..m, 0..rest);
        let sub = greedy_coprime(m, 2 * m - n);
        paste(&mut out, &sub, 0, rest);
        out.fill(m..n, rest..n);
    }
    out
}

fn paste(dst: &mut StorageDesignArray, src: &StorageDesignArray, row0: usize, col0: usize) {
    for r in 0..src.rows() {
        for c in 0..src.cols() {
            if src.get(r, c) {
                dst.set(row0 + r, col0 + c);
            }
        }
    }
}

/// Parameter sequence visited by the greedy recursion after the gcd
/// reduction, ending at `(1, 1)`.
pub fn greedy_trace(n: usize, m: usize) -> Result<Vec<(usize, usize)>> {
    check_params(n, m)?;
    let g = n.gcd(&m);
    let (mut n, mut m) = (n / g, m / g);
    let mut steps = vec![(n, m)];
    while n > 1 {
        (n, m) = if n >= 2 * m { (n - m, m) } else { (m, 2 * m - n) };
        steps.push((n, m));
    }
    Ok(steps)
}

/// Distinct-column count of the greedy array.
pub fn eta_recursion(n: usize, m: usize) -> Result<usize> {
    Ok(greedy_trace(n, m)?.len())
}

/// The `(2M+1, M)` array `Q_M` with `ceil(M/2) + 3` distinct columns.
///
/// Layout, top to bottom: a left `M x (M-1)` star block; a middle band of
/// `M` (even) or `M-1` (odd) columns that is full for the next rows and ends
/// in two side-by-side complemented diagonals; a right band of 2 (even) or 3
/// (odd) columns made of stacked diagonals over its upper rows and full below.
pub fn build_q_array(m: usize) -> Result<StorageDesignArray> {
    if m < 2 {
        return Err(Error::InvalidParameters(format!("Q array needs M >= 2, got {m}")));
    }
    let n = 2 * m + 1;
    let right = if m.is_multiple_of(2) { 2 } else { 3 };
    let mid = n - (m - 1) - right;
    let half = mid / 2;
    let full_mid_rows = n - m - half;
    let mut sda = StorageDesignArray::blank(n, m);

    sda.fill(0..m, 0..m - 1);

    let mid0 = m - 1;
    sda.fill(m..m + full_mid_rows, mid0..mid0 + mid);
    let bottom0 = n - half;
    for r in 0..half {
        for block in 0..2 {
            for c in 0..half {
                if c != r {
                    sda.set(bottom0 + r, mid0 + block * half + c);
                }
            }
        }
    }

    // odd M leaves one star per middle-band row to the right band
    let right0 = mid0 + mid;
    let diag_rows = if m.is_multiple_of(2) { m } else { bottom0 };
    for r in 0..diag_rows {
        sda.set(r, right0 + r % right);
    }
    sda.fill(bottom0..n, right0..n);
    Ok(sda)
}

/// Plus or minus case of `N = dM ± 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImprovedCase {
    Plus { d: usize },
    Minus { d: usize },
}

/// Classifies `(n, m)` for the improved construction, or `None` when it does
/// not apply (`M < 3`, or `N` not of the form `dM ± 1` with `d >= 2`).
pub fn improved_case(n: usize, m: usize) -> Option<ImprovedCase> {
    if m < 3 || m > n {
        return None;
    }
    if (n - 1).is_multiple_of(m) && (n - 1) / m >= 2 {
        return Some(ImprovedCase::Plus { d: (n - 1) / m });
    }
    if (n + 1).is_multiple_of(m) && (n + 1) / m >= 2 {
        return Some(ImprovedCase::Minus { d: (n + 1) / m });
    }
    None
}

/// Closed-form distinct-column count of [`build_improved`].
pub fn eta_improved(n: usize, m: usize) -> Option<usize> {
    improved_case(n, m).map(|case| match case {
        ImprovedCase::Plus { d } => d + m.div_ceil(2) + 1,
        ImprovedCase::Minus { d } => d + m / 2 + 1,
    })
}

/// `d - 2` diagonal `M x M` star blocks followed by `Q_M` (plus case) or the
/// opposite of `Q_{M-1}` (minus case).
pub fn build_improved(n: usize, m: usize) -> Result<StorageDesignArray> {
    let case = improved_case(n, m).ok_or(Error::NotImprovedForm { n, m })?;
    let (d, tail) = match case {
        ImprovedCase::Plus { d } => (d, build_q_array(m)?),
        ImprovedCase::Minus { d } => (d, build_q_array(m - 1)?.opposite()?),
    };
    let mut sda = StorageDesignArray::blank(n, m);
    for b in 0..d - 2 {
        sda.fill(b * m..(b + 1) * m, b * m..(b + 1) * m);
    }
    let off = (d - 2) * m;
    paste(&mut sda, &tail, off, off);
    Ok(sda)
}

/// `max{ceil(N/M), ceil(N/(N-M))}` for `M < N`, and 1 for `M = N`.
pub fn eta_lower_bound(n: usize, m: usize) -> Result<usize> {
    check_params(n, m)?;
    if m == n {
        return Ok(1);
    }
    Ok(n.div_ceil(m).max(n.div_ceil(n - m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn grid(n: usize, m: usize, rows: &[&str]) -> StorageDesignArray {
        let mut text = format!("{n} {m}\n");
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        StorageDesignArray::parse_ascii(&text).unwrap()
    }

    fn p_9_4() -> StorageDesignArray {
        grid(
            9,
            4,
            &[
                "****.....",
                "****.....",
                "****.....",
                "****.....",
                "....****.",
                "....***.*",
                "....**.**",
                "....*.***",
                ".....****",
            ],
        )
    }

    fn p_11_5() -> StorageDesignArray {
        grid(
            11,
            5,
            &[
                "*****......",
                "*****......",
                "*****......",
                "*****......",
                "*****......",
                ".....*****.",
                ".....****.*",
                ".....***.**",
                ".....**.***",
                ".....*.****",
                "......*****",
            ],
        )
    }

    fn cyclic_12_5() -> StorageDesignArray {
        grid(
            12,
            5,
            &[
                "*.*.*..*.*..",
                "*.*..*.*.*..",
                "*.*..*.*..*.",
                "*..*.*.*..*.",
                "*..*.*..*.*.",
                ".*.*.*..*.*.",
                ".*.*..*.*.*.",
                ".*.*..*.*..*",
                ".*..*.*.*..*",
                ".*..*.*..*.*",
                "..*.*.*..*.*",
                "..*.*..*.*.*",
            ],
        )
    }

    fn greedy_12_5() -> StorageDesignArray {
        grid(
            12,
            5,
            &[
                "*****.......",
                "*****.......",
                "*****.......",
                "*****.......",
                "*****.......",
                ".....*****..",
                ".....****.*.",
                ".....****..*",
                ".....**..***",
                ".....**..***",
                ".......*****",
                ".......*****",
            ],
        )
    }

    fn q4() -> StorageDesignArray {
        grid(
            9,
            4,
            &[
                "***....*.",
                "***.....*",
                "***....*.",
                "***.....*",
                "...****..",
                "...****..",
                "...****..",
                "....*.***",
                "...*.*.**",
            ],
        )
    }

    fn q5() -> StorageDesignArray {
        grid(
            11,
            5,
            &[
                "****....*..",
                "****.....*.",
                "****......*",
                "****....*..",
                "****.....*.",
                "....****..*",
                "....*****..",
                "....****.*.",
                "....****..*",
                ".....*.****",
                "....*.*.***",
            ],
        )
    }

    #[test]
    fn validates_worked_arrays() {
        for sda in [p_9_4(), p_11_5(), cyclic_12_5(), greedy_12_5(), q4(), q5()] {
            assert_eq!(sda.validate(), Ok(()), "{sda}");
        }
        let full = StorageDesignArray::from_rows(4, 4, vec![vec![true]; 4]).unwrap();
        assert_eq!(full.validate(), Ok(()));
    }

    #[test]
    fn reports_first_violation() {
        let identity: Vec<Vec<bool>> = (0..3).map(|r| (0..3).map(|c| r == c).collect()).collect();
        let sda = StorageDesignArray::from_rows(3, 2, identity).unwrap();
        assert_eq!(
            sda.validate(),
            Err(Violation::Column {
                col: 1,
                stars: 1,
                expected: 2
            })
        );
    }

    #[test]
    fn rejects_wrong_shape() {
        let err = StorageDesignArray::from_rows(4, 2, vec![vec![true; 4]; 4]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected_cols: 2, .. }));
    }

    #[test]
    fn profiles_of_worked_arrays() {
        let p = p_9_4().column_profile();
        assert_eq!(p.eta(), 6);
        assert_eq!(p.multiplicities, vec![4, 1, 1, 1, 1, 1]);
        let p = p_11_5().column_profile();
        assert_eq!(p.eta(), 7);
        assert_eq!(p.multiplicities, vec![5, 1, 1, 1, 1, 1, 1]);
        let p = cyclic_12_5().column_profile();
        assert_eq!(p.eta(), 12);
        assert!(p.multiplicities.iter().all(|&s| s == 1));
        assert_eq!(greedy_12_5().eta(), 6);
    }

    #[test]
    fn alpha_of_9_4() {
        let alpha = p_9_4().column_profile().alpha();
        alpha.check().unwrap();
        assert_eq!(alpha.get(&ServerSet::new(vec![1, 2, 3, 4])), crate::ratio(4, 9));
        for set in [[5, 6, 7, 8], [5, 6, 7, 9], [5, 6, 8, 9], [5, 7, 8, 9], [6, 7, 8, 9]] {
            assert_eq!(alpha.get(&ServerSet::new(set.to_vec())), crate::ratio(1, 9));
        }
        assert_eq!(alpha.get(&ServerSet::new(vec![1, 2, 3, 5])), BigRational::zero());
    }

    #[test]
    fn alpha_of_cyclic_and_full() {
        let alpha = cyclic_12_5().column_profile().alpha();
        alpha.check().unwrap();
        assert_eq!(alpha.support_size(), 12);
        assert!(alpha.entries.iter().all(|(_, a)| *a == crate::ratio(1, 12)));

        let alpha = build_greedy(6, 6).unwrap().column_profile().alpha();
        assert_eq!(alpha.entries, vec![(ServerSet::new((1..=6).collect()), crate::ratio(1, 1))]);
    }

    #[test]
    fn alpha_check_catches_bad_loads() {
        let mut alpha = build_greedy(4, 2).unwrap().column_profile().alpha();
        alpha.entries[0].1 = crate::ratio(1, 4);
        assert!(matches!(alpha.check(), Err(Error::InvalidAlpha(_))));
    }

    #[test]
    fn equal_size_matches_cyclic_example() {
        assert_eq!(build_equal_size(12, 5).unwrap(), cyclic_12_5());
        let small = build_equal_size(4, 2).unwrap();
        let p = small.column_profile();
        assert_eq!(
            p.distinct,
            vec![ServerSet::new(vec![1, 2]), ServerSet::new(vec![3, 4])]
        );
        let full = build_equal_size(5, 5).unwrap();
        assert_eq!((full.cols(), full.eta()), (1, 1));
    }

    #[test]
    fn greedy_matches_worked_arrays() {
        assert_eq!(build_greedy(9, 4).unwrap(), p_9_4());
        assert_eq!(build_greedy(11, 5).unwrap(), p_11_5());
        assert_eq!(build_greedy(12, 5).unwrap(), greedy_12_5());
        assert_eq!(
            greedy_trace(12, 5).unwrap(),
            vec![(12, 5), (7, 5), (5, 3), (3, 1), (2, 1), (1, 1)]
        );
    }

    #[test]
    fn greedy_stacks_for_common_divisor() {
        let sda = build_greedy(12, 4).unwrap();
        assert_eq!((sda.rows(), sda.cols()), (12, 3));
        sda.validate().unwrap();
        assert_eq!(sda.eta(), 3);
        for r in 0..12 {
            for c in 0..3 {
                assert_eq!(sda.get(r, c), sda.get(r % 3, c));
            }
        }
    }

    #[test]
    fn eta_recursion_values() {
        assert_eq!(eta_recursion(12, 5).unwrap(), 6);
        assert_eq!(eta_recursion(7, 7).unwrap(), 1);
        for m in 2..=6 {
            for d in 2..=5 {
                assert_eq!(eta_recursion(d * m + 1, m).unwrap(), d + m);
            }
        }
        assert!(eta_recursion(3, 4).is_err());
        assert!(eta_recursion(3, 0).is_err());
    }

    #[test]
    fn q_arrays() {
        assert_eq!(build_q_array(4).unwrap(), q4());
        assert_eq!(build_q_array(5).unwrap(), q5());
        assert_eq!(q4().column_profile().multiplicities, vec![3, 2, 2, 1, 1]);
        assert_eq!(q5().column_profile().multiplicities, vec![4, 2, 2, 1, 1, 1]);
        let q2 = build_q_array(2).unwrap();
        assert_eq!((q2.n(), q2.m()), (5, 2));
        q2.validate().unwrap();
        assert_eq!(q2.eta(), 4);
        assert!(build_q_array(1).is_err());
    }

    #[test]
    fn opposite_arrays() {
        let q = build_q_array(4).unwrap();
        let o = q.opposite().unwrap();
        assert_eq!((o.n(), o.m()), (9, 5));
        o.validate().unwrap();
        assert_eq!(o.eta(), 5);

        let p = build_greedy(9, 4).unwrap();
        assert_eq!(p.opposite().unwrap().opposite().unwrap(), p);
        assert!(build_greedy(3, 3).unwrap().opposite().is_err());
    }

    #[test]
    fn improved_arrays() {
        let sda = build_improved(11, 5).unwrap();
        sda.validate().unwrap();
        assert_eq!(sda.eta(), 6);
        let sda = build_improved(9, 5).unwrap();
        sda.validate().unwrap();
        assert_eq!(sda.eta(), 5);
        assert_eq!(build_improved(9, 4).unwrap(), q4());
        assert_eq!(build_improved(10, 4), Err(Error::NotImprovedForm { n: 10, m: 4 }));
        assert_eq!(build_improved(7, 2), Err(Error::NotImprovedForm { n: 7, m: 2 }));
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(eta_lower_bound(12, 5).unwrap(), 3);
        assert_eq!(eta_lower_bound(9, 4).unwrap(), 3);
        assert_eq!(eta_lower_bound(8, 8).unwrap(), 1);
    }

    #[test]
    fn ascii_rejects_garbage() {
        assert!(StorageDesignArray::parse_ascii("2 1\n*.\n.x\n").is_err());
        assert!(StorageDesignArray::parse_ascii("2 1\n*.\n").is_err());
        assert!(StorageDesignArray::parse_ascii("2 1\n*.\n.*\n**\n").is_err());
        assert!(StorageDesignArray::parse_ascii("2 1\n*\n*\n").is_err());
        assert!(StorageDesignArray::parse_ascii("2  1\n*.\n.*\n").is_err());
        assert!(StorageDesignArray::parse_ascii("1 2\n*\n").is_err());
        let sda = build_greedy(12, 5).unwrap();
        assert_eq!(StorageDesignArray::parse_ascii(&sda.to_ascii()).unwrap(), sda);
    }
}
