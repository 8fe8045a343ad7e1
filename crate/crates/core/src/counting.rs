//! Exact enumeration of nonnegative integer matrices with row and column
//! sum constraints.
//!
//! Everything here counts lattice points, so every result is a
//! [`BigCount`]. The general counter fills a matrix column by column and
//! memoizes on the multiset of remaining row capacities: rows whose
//! residual capacity and constraint kind coincide are interchangeable, so
//! the state is kept sorted and each column assignment is enumerated once
//! per multiset, weighted by its multinomial multiplicity.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{BigCount, Error, Result};

/// Default cap on the number of candidate matrices a brute-force count may visit.
pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 50_000_000;

/// Weakly decreasing vector of positive parts.
///
/// Construction normalizes: zero parts are dropped and the rest sorted in
/// decreasing order, so any composition can be passed in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: impl IntoIterator<Item = u64>) -> Self {
        let mut parts: Vec<u64> = parts.into_iter().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// The partition `<1^{m_1} 2^{m_2} ...>` with `m_i` parts equal to `i`.
    pub fn from_multiplicities(multiplicities: &[u64]) -> Self {
        let parts = multiplicities
            .iter()
            .enumerate()
            .flat_map(|(i, &m)| std::iter::repeat_n(i as u64 + 1, m as usize));
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Partition::default());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::invalid(format!("bad partition part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition::new(parts))
    }
}

/// Constraint on one row or column sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineConstraint {
    Exact(u64),
    AtMost(u64),
}

impl LineConstraint {
    /// Largest sum the line may carry.
    pub fn bound(self) -> u64 {
        match self {
            LineConstraint::Exact(v) | LineConstraint::AtMost(v) => v,
        }
    }

    fn lower(self) -> u64 {
        match self {
            LineConstraint::Exact(v) => v,
            LineConstraint::AtMost(_) => 0,
        }
    }

    pub fn accepts(self, sum: u64) -> bool {
        match self {
            LineConstraint::Exact(v) => sum == v,
            LineConstraint::AtMost(v) => sum <= v,
        }
    }
}

impl fmt::Display for LineConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineConstraint::Exact(v) => write!(f, "={v}"),
            LineConstraint::AtMost(v) => write!(f, "<={v}"),
        }
    }
}

impl FromStr for LineConstraint {
    type Err = Error;

    /// Accepts `=j`, `<=l` or a bare `j` (exact).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("bad line constraint {s:?}"));
        if let Some(rest) = s.strip_prefix("<=") {
            rest.trim()
                .parse()
                .map(LineConstraint::AtMost)
                .map_err(|_| bad())
        } else {
            s.strip_prefix('=')
                .unwrap_or(s)
                .trim()
                .parse()
                .map(LineConstraint::Exact)
                .map_err(|_| bad())
        }
    }
}

/// A family of nonnegative integer matrices described by line constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixCountSpec {
    pub row_constraints: Vec<LineConstraint>,
    pub col_constraints: Vec<LineConstraint>,
    /// Only matrices equal to their transpose.
    pub symmetric: bool,
    /// Only matrices with even diagonal entries (square specs only).
    pub even_diagonal: bool,
}

impl MatrixCountSpec {
    pub fn new(rows: Vec<LineConstraint>, cols: Vec<LineConstraint>) -> Self {
        MatrixCountSpec {
            row_constraints: rows,
            col_constraints: cols,
            symmetric: false,
            even_diagonal: false,
        }
    }

    pub fn contingency(rows: &Partition, cols: &Partition) -> Self {
        let exact = |p: &Partition| {
            p.parts()
                .iter()
                .map(|&v| LineConstraint::Exact(v))
                .collect()
        };
        MatrixCountSpec::new(exact(rows), exact(cols))
    }

    pub fn magic(k: usize, j: u64) -> Self {
        let line = vec![LineConstraint::Exact(j); k];
        MatrixCountSpec::new(line.clone(), line)
    }

    pub fn pseudomagic(k: usize, l: u64) -> Self {
        MatrixCountSpec::pseudomagic_multi(&vec![l; k])
    }

    /// Row `i` and column `i` both bounded by `bounds[i]`.
    pub fn pseudomagic_multi(bounds: &[u64]) -> Self {
        let line: Vec<_> = bounds.iter().map(|&l| LineConstraint::AtMost(l)).collect();
        MatrixCountSpec::new(line.clone(), line)
    }

    pub fn symmetric_even(k: usize, j: u64) -> Self {
        MatrixCountSpec {
            symmetric: true,
            even_diagonal: true,
            ..MatrixCountSpec::magic(k, j)
        }
    }

    pub fn symmetric_even_bounded(k: usize, l: u64) -> Self {
        MatrixCountSpec {
            symmetric: true,
            even_diagonal: true,
            ..MatrixCountSpec::pseudomagic(k, l)
        }
    }

    pub fn rows(&self) -> usize {
        self.row_constraints.len()
    }

    pub fn cols(&self) -> usize {
        self.col_constraints.len()
    }

    fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    fn validate(&self) -> Result<()> {
        if (self.symmetric || self.even_diagonal) && !self.is_square() {
            return Err(Error::invalid(format!(
                "symmetric or even-diagonal spec must be square, got {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }

    /// Upper bound for entry `(i, j)` implied by the line constraints.
    fn cell_bound(&self, i: usize, j: usize) -> u64 {
        let b = self.row_constraints[i]
            .bound()
            .min(self.col_constraints[j].bound());
        if self.symmetric {
            b.min(self.row_constraints[j].bound())
                .min(self.col_constraints[i].bound())
        } else {
            b
        }
    }
}

/// `N_{mu nu}`: matrices with row sums `rows` and column sums `cols`.
pub fn count_contingency(rows: &Partition, cols: &Partition) -> BigCount {
    if rows.weight() != cols.weight() {
        return BigCount::zero();
    }
    count_unsymmetric(&MatrixCountSpec::contingency(rows, cols))
}

/// `H_k(j)`: k×k magic squares with line sum `j`.
pub fn count_magic(k: usize, j: u64) -> BigCount {
    count_unsymmetric(&MatrixCountSpec::magic(k, j))
}

/// `G_k(l)`: k×k matrices with every line sum at most `l`.
pub fn count_pseudomagic(k: usize, l: u64) -> BigCount {
    count_unsymmetric(&MatrixCountSpec::pseudomagic(k, l))
}

/// `G_k(l_1, ..., l_k)`: row `i` and column `i` sum to at most `bounds[i]`.
pub fn count_pseudomagic_multi(bounds: &[u64]) -> BigCount {
    count_unsymmetric(&MatrixCountSpec::pseudomagic_multi(bounds))
}

/// `S^sp_k(j)`: symmetric k×k matrices, line sums `j`, even diagonal.
pub fn count_symmetric_even(k: usize, j: u64) -> BigCount {
    if (k as u64 * j) % 2 == 1 {
        return BigCount::zero();
    }
    count_symmetric(&MatrixCountSpec::symmetric_even(k, j))
}

/// `F_k(l)`: symmetric k×k matrices, line sums at most `l`, even diagonal.
pub fn count_symmetric_even_bounded(k: usize, l: u64) -> BigCount {
    count_symmetric(&MatrixCountSpec::symmetric_even_bounded(k, l))
}

/// Counts the matrices described by `spec` with the appropriate fast counter.
pub fn count(spec: &MatrixCountSpec) -> Result<BigCount> {
    spec.validate()?;
    if spec.symmetric {
        Ok(count_symmetric(spec))
    } else if spec.even_diagonal {
        Err(Error::invalid(
            "even_diagonal without symmetric breaks row exchangeability; use brute_force_count",
        ))
    } else {
        Ok(count_unsymmetric(spec))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Kind {
    Exact,
    AtMost,
}

/// Sorted multiset of `(kind, remaining capacity)` per row.
type RowState = Vec<(Kind, u64)>;

fn count_unsymmetric(spec: &MatrixCountSpec) -> BigCount {
    let mut state: RowState = spec
        .row_constraints
        .iter()
        .map(|c| match *c {
            LineConstraint::Exact(v) => (Kind::Exact, v),
            LineConstraint::AtMost(v) => (Kind::AtMost, v),
        })
        .collect();
    state.sort_unstable();
    let cols = &spec.col_constraints;
    let mut suffix_upper = vec![0u64; cols.len() + 1];
    let mut suffix_exact = vec![0u64; cols.len() + 1];
    for c in (0..cols.len()).rev() {
        suffix_upper[c] = suffix_upper[c + 1] + cols[c].bound();
        suffix_exact[c] = suffix_exact[c + 1] + cols[c].lower();
    }
    let mut dp = ColumnDp {
        cols,
        suffix_upper,
        suffix_exact,
        memo: HashMap::new(),
    };
    dp.count_from(0, state)
}

struct ColumnDp<'a> {
    cols: &'a [LineConstraint],
    suffix_upper: Vec<u64>,
    suffix_exact: Vec<u64>,
    memo: HashMap<(usize, RowState), BigUint>,
}

impl ColumnDp<'_> {
    fn count_from(&mut self, col: usize, state: RowState) -> BigUint {
        let exact_left: u64 = state
            .iter()
            .filter(|(k, _)| *k == Kind::Exact)
            .map(|&(_, c)| c)
            .sum();
        let capacity: u64 = state.iter().map(|&(_, c)| c).sum();
        if exact_left > self.suffix_upper[col] || self.suffix_exact[col] > capacity {
            return BigUint::zero();
        }
        if col == self.cols.len() {
            return if exact_left == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        let key = (col, state);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let state = &key.1;

        let groups = group_runs(state);
        let (lo, hi) = (self.cols[col].lower(), self.cols[col].bound());
        let mut suffix_cap = vec![0u64; groups.len() + 1];
        for g in (0..groups.len()).rev() {
            suffix_cap[g] = suffix_cap[g + 1] + groups[g].0 .1 * groups[g].1 as u64;
        }
        let mut successors: HashMap<RowState, BigUint> = HashMap::new();
        let mut scratch = Vec::with_capacity(state.len());
        distribute(
            &groups,
            &suffix_cap,
            0,
            lo,
            hi,
            &mut scratch,
            BigUint::one(),
            &mut successors,
        );

        let mut total = BigUint::zero();
        for (next, weight) in successors {
            let sub = self.count_from(col + 1, next);
            if !sub.is_zero() {
                total += weight * sub;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

fn group_runs(state: &[(Kind, u64)]) -> Vec<((Kind, u64), usize)> {
    let mut groups: Vec<((Kind, u64), usize)> = Vec::new();
    for &row in state {
        match groups.last_mut() {
            Some((r, m)) if *r == row => *m += 1,
            _ => groups.push((row, 1)),
        }
    }
    groups
}

/// Enumerates column assignments group by group. Within a group of `m`
/// interchangeable rows only nonincreasing take-sequences are generated,
/// each weighted by the number of distinct row orderings it stands for.
#[allow(clippy::too_many_arguments)]
fn distribute(
    groups: &[((Kind, u64), usize)],
    suffix_cap: &[u64],
    g: usize,
    lo: u64,
    hi: u64,
    next: &mut RowState,
    weight: BigUint,
    out: &mut HashMap<RowState, BigUint>,
) {
    if g == groups.len() {
        if lo == 0 {
            let mut s = next.clone();
            s.sort_unstable();
            *out.entry(s).or_insert_with(BigUint::zero) += weight;
        }
        return;
    }
    if suffix_cap[g] < lo {
        return;
    }
    let ((kind, cap), m) = groups[g];
    let mut takes = Vec::with_capacity(m);
    group_takes(
        groups,
        suffix_cap,
        g,
        kind,
        cap,
        m,
        lo,
        hi,
        cap.min(hi),
        &mut takes,
        next,
        &weight,
        out,
    );
}

#[allow(clippy::too_many_arguments)]
fn group_takes(
    groups: &[((Kind, u64), usize)],
    suffix_cap: &[u64],
    g: usize,
    kind: Kind,
    cap: u64,
    m: usize,
    lo: u64,
    hi: u64,
    max_take: u64,
    takes: &mut Vec<u64>,
    next: &mut RowState,
    weight: &BigUint,
    out: &mut HashMap<RowState, BigUint>,
) {
    if takes.len() == m {
        let used: u64 = takes.iter().sum();
        let base = next.len();
        next.extend(takes.iter().map(|&t| (kind, cap - t)));
        let w = weight * multinomial_of_runs(takes);
        distribute(
            groups,
            suffix_cap,
            g + 1,
            lo.saturating_sub(used),
            hi - used,
            next,
            w,
            out,
        );
        next.truncate(base);
        return;
    }
    let used: u64 = takes.iter().sum();
    let rest = (m - takes.len()) as u64;
    // Rows still to be assigned in this group plus all later groups must be
    // able to cover the column's lower bound.
    let reachable_later = suffix_cap[g + 1];
    for t in (0..=max_take.min(hi - used)).rev() {
        if used + t * rest + reachable_later < lo {
            break;
        }
        takes.push(t);
        group_takes(
            groups, suffix_cap, g, kind, cap, m, lo, hi, t, takes, next, weight, out,
        );
        takes.pop();
    }
}

/// `m! / prod(run lengths)!` for a sorted sequence.
fn multinomial_of_runs(seq: &[u64]) -> BigUint {
    let mut result = BigUint::one();
    let mut placed = 0u64;
    let mut i = 0;
    while i < seq.len() {
        let mut run = 1;
        while i + run < seq.len() && seq[i + run] == seq[i] {
            run += 1;
        }
        for r in 1..=run as u64 {
            placed += 1;
            result *= placed;
            result /= r;
        }
        i += run;
    }
    result
}

fn count_symmetric(spec: &MatrixCountSpec) -> BigCount {
    let k = spec.rows();
    let lower: Vec<u64> = (0..k)
        .map(|i| {
            spec.row_constraints[i]
                .lower()
                .max(spec.col_constraints[i].lower())
        })
        .collect();
    let upper: Vec<u64> = (0..k)
        .map(|i| {
            spec.row_constraints[i]
                .bound()
                .min(spec.col_constraints[i].bound())
        })
        .collect();
    if lower.iter().zip(&upper).any(|(lo, hi)| lo > hi) {
        return BigCount::zero();
    }
    let mut walk = SymmetricWalk {
        k,
        lower,
        residual: upper.clone(),
        upper,
        diag_step: if spec.even_diagonal { 2 } else { 1 },
        found: 0,
    };
    walk.cell(0, 0);
    BigCount::from(walk.found)
}

struct SymmetricWalk {
    k: usize,
    lower: Vec<u64>,
    upper: Vec<u64>,
    residual: Vec<u64>,
    diag_step: u64,
    found: u64,
}

impl SymmetricWalk {
    fn cell(&mut self, i: usize, j: usize) {
        if i == self.k {
            self.found += 1;
            return;
        }
        let last_in_row = j + 1 == self.k;
        let max = if i == j {
            self.residual[i]
        } else {
            self.residual[i].min(self.residual[j])
        };
        let step = if i == j { self.diag_step } else { 1 };
        // Row i is complete after this cell, so its lower bound forces a minimum.
        let mut min = if last_in_row {
            let row_sum = self.upper[i] - self.residual[i];
            self.lower[i].saturating_sub(row_sum)
        } else {
            0
        };
        min = min.div_ceil(step) * step;
        let (ni, nj) = if last_in_row {
            (i + 1, i + 1)
        } else {
            (i, j + 1)
        };
        let mut v = min;
        while v <= max {
            self.residual[i] -= v;
            if i != j {
                self.residual[j] -= v;
            }
            self.cell(ni, nj);
            self.residual[i] += v;
            if i != j {
                self.residual[j] += v;
            }
            v += step;
        }
    }
}

/// Counts by visiting every candidate matrix entry by entry.
///
/// Independent of the fast counters: no memoization, no pruning beyond
/// the per-entry bound implied by its row and column.
pub fn brute_force_count(spec: &MatrixCountSpec, cap: u128) -> Result<BigCount> {
    spec.validate()?;
    let (r, c) = (spec.rows(), spec.cols());
    let cells: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .filter(|&(i, j)| !spec.symmetric || j >= i)
        .collect();
    let bounds: Vec<u64> = cells.iter().map(|&(i, j)| spec.cell_bound(i, j)).collect();
    let mut size: u128 = 1;
    for &b in &bounds {
        size = size.saturating_mul(b as u128 + 1);
    }
    if size > cap {
        return Err(Error::SizeLimit {
            what: "brute-force grid",
            required: size,
            budget: cap,
        });
    }

    let mut values = vec![0u64; cells.len()];
    let mut matrix = vec![0u64; r * c];
    let mut found = 0u64;
    'outer: loop {
        for (&(i, j), &v) in cells.iter().zip(&values) {
            matrix[i * c + j] = v;
            if spec.symmetric {
                matrix[j * c + i] = v;
            }
        }
        if satisfies(spec, &matrix) {
            found += 1;
        }
        for (v, &b) in values.iter_mut().zip(&bounds) {
            if *v < b {
                *v += 1;
                continue 'outer;
            }
            *v = 0;
        }
        break;
    }
    Ok(BigCount::from(found))
}

fn satisfies(spec: &MatrixCountSpec, matrix: &[u64]) -> bool {
    let (r, c) = (spec.rows(), spec.cols());
    let rows_ok =
        (0..r).all(|i| spec.row_constraints[i].accepts((0..c).map(|j| matrix[i * c + j]).sum()));
    let cols_ok =
        (0..c).all(|j| spec.col_constraints[j].accepts((0..r).map(|i| matrix[i * c + j]).sum()));
    let diag_ok = !spec.even_diagonal || (0..r).all(|i| matrix[i * c + i].is_multiple_of(2));
    rows_ok && cols_ok && diag_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.iter().copied())
    }

    fn n(v: u64) -> BigCount {
        BigCount::from(v)
    }

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn partition_normalizes() {
        let q = p(&[1, 0, 3, 2, 0]);
        assert_eq!(q.parts(), &[3, 2, 1]);
        assert_eq!(q.weight(), 6);
        assert_eq!(
            Partition::from_multiplicities(&[2, 0, 1]).parts(),
            &[3, 1, 1]
        );
        assert_eq!("(2, 1,1)".parse::<Partition>().unwrap(), p(&[1, 2, 1]));
        assert!("2,x".parse::<Partition>().is_err());
    }

    #[test]
    fn line_constraint_parsing() {
        assert_eq!(
            "=3".parse::<LineConstraint>().unwrap(),
            LineConstraint::Exact(3)
        );
        assert_eq!(
            "4".parse::<LineConstraint>().unwrap(),
            LineConstraint::Exact(4)
        );
        assert_eq!(
            "<=2".parse::<LineConstraint>().unwrap(),
            LineConstraint::AtMost(2)
        );
        assert!("<2".parse::<LineConstraint>().is_err());
    }

    #[test]
    fn contingency_examples() {
        assert_eq!(count_contingency(&p(&[2, 1, 1]), &p(&[3, 1])), n(3));
        assert_eq!(count_contingency(&p(&[2, 2, 1]), &p(&[3, 1, 1])), n(8));
        assert_eq!(count_contingency(&p(&[5]), &p(&[5])), n(1));
        assert_eq!(count_contingency(&p(&[2]), &p(&[1])), n(0));
        assert_eq!(count_contingency(&p(&[]), &p(&[0, 0])), n(1));
    }

    #[test]
    fn magic_examples() {
        assert_eq!(count_magic(3, 1), n(6));
        assert_eq!(count_magic(1, 7), n(1));
        assert_eq!(count_magic(2, 5), n(6));
        assert_eq!(count_magic(3, 2), n(21));
    }

    #[test]
    fn magic_small_identities() {
        let mut fact = 1u64;
        for k in 1..=6 {
            fact *= k as u64;
            assert_eq!(count_magic(k, 1), n(fact), "H_{k}(1)");
        }
        for j in 0..=20 {
            assert_eq!(count_magic(2, j), n(j + 1));
        }
        for j in 0..=12 {
            let closed = binom(j + 2, 4) + binom(j + 3, 4) + binom(j + 4, 4);
            assert_eq!(count_magic(3, j), n(closed), "H_3({j})");
        }
    }

    #[test]
    fn pseudomagic_examples() {
        assert_eq!(count_pseudomagic(1, 4), n(5));
        assert_eq!(count_pseudomagic(2, 3), n(70));
        assert_eq!(count_pseudomagic(2, 0), n(1));
        assert_eq!(count_pseudomagic_multi(&[6]), n(7));
        assert_eq!(count_pseudomagic_multi(&[1, 0]), n(2));
        assert_eq!(count_pseudomagic_multi(&[3, 3]), count_pseudomagic(2, 3));
    }

    #[test]
    fn pseudomagic_dominates() {
        for k in 1..=3 {
            for l in 1..=5 {
                assert!(count_pseudomagic(k, l) >= count_pseudomagic(k, l - 1));
                assert!(count_pseudomagic(k, l) >= count_magic(k, l));
            }
        }
    }

    #[test]
    fn symmetric_examples() {
        assert_eq!(count_symmetric_even(2, 2), n(2));
        assert_eq!(count_symmetric_even(1, 3), n(0));
        assert_eq!(count_symmetric_even(2, 1), n(1));
        assert_eq!(count_symmetric_even(3, 1), n(0));
        assert_eq!(count_symmetric_even_bounded(1, 4), n(3));
        assert_eq!(count_symmetric_even_bounded(2, 1), n(2));
        for k in 1..=4 {
            assert_eq!(count_symmetric_even_bounded(k, 0), n(1));
        }
    }

    #[test]
    fn brute_force_examples() {
        let cap = DEFAULT_BRUTE_FORCE_CAP;
        assert_eq!(
            brute_force_count(&MatrixCountSpec::magic(3, 1), cap).unwrap(),
            n(6)
        );
        assert_eq!(
            brute_force_count(&MatrixCountSpec::pseudomagic(2, 3), cap).unwrap(),
            n(70)
        );
        assert_eq!(
            brute_force_count(&MatrixCountSpec::symmetric_even(2, 2), cap).unwrap(),
            n(2)
        );
    }

    #[test]
    fn brute_force_refuses_large_grids() {
        let err = brute_force_count(&MatrixCountSpec::pseudomagic(4, 9), 1_000).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn even_diagonal_requires_symmetric_for_fast_path() {
        let mut spec = MatrixCountSpec::magic(2, 2);
        spec.even_diagonal = true;
        assert!(count(&spec).is_err());
        assert_eq!(
            brute_force_count(&spec, DEFAULT_BRUTE_FORCE_CAP).unwrap(),
            n(2)
        );
        let rect = MatrixCountSpec {
            symmetric: true,
            ..MatrixCountSpec::new(
                vec![LineConstraint::Exact(1)],
                vec![LineConstraint::Exact(1); 2],
            )
        };
        assert!(count(&rect).is_err());
    }

    #[test]
    fn multinomial_weights() {
        assert_eq!(multinomial_of_runs(&[2, 2, 1]), n(3));
        assert_eq!(multinomial_of_runs(&[3, 2, 1]), n(6));
        assert_eq!(multinomial_of_runs(&[0, 0, 0, 0]), n(1));
    }
}
