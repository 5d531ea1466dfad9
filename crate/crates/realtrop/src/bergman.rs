//! Weight flags, `s`-acyclicity, `s`-flags and signed Bergman fan
//! membership.
//!
//! Membership is decided by three independent routes that must agree:
//! `s`-acyclicity of the initial matroid, a per-circuit argmax sign
//! condition, and the `s`-flag condition on the flag of the weight vector.
//! The circuit route is the default; the other two run in verification
//! mode. A disagreement between routes is a fatal internal error, never a
//! data error.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::exactlin::{rat_int, Rat};
use crate::orientedmatroid::{
    closure_flat, initial_matroid, is_covector, MatroidError, OrientedMatroid, Sign, SignVector,
};

#[derive(Debug, Error, PartialEq)]
pub enum BergmanError {
    #[error("sign vector must be pure (no zero entries)")]
    NotPure,
    #[error("flag member {0} is not a flat")]
    NotAFlat(usize),
    #[error("weight length {0} does not match ground size {1}")]
    LengthMismatch(usize, usize),
    #[error("matroid error: {0}")]
    Matroid(#[from] MatroidError),
    #[error("membership routes disagree: {0:?} — this is a bug")]
    RouteDisagreement(RouteReport),
}

/// Strictly increasing chain of index sets ending at the full ground set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlagOfFlats {
    flats: Vec<BTreeSet<usize>>,
}

impl fmt::Debug for FlagOfFlats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flag(")?;
        for (i, flat) in self.flats.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊂ ")?;
            }
            write!(f, "{:?}", flat)?;
        }
        write!(f, ")")
    }
}

impl FlagOfFlats {
    /// Builds a flag after checking strict inclusion and that the last
    /// member is `{0, .., n-1}`.
    pub fn new(flats: Vec<BTreeSet<usize>>, n: usize) -> Option<FlagOfFlats> {
        if flats.is_empty() {
            return None;
        }
        for pair in flats.windows(2) {
            if !(pair[0].is_subset(&pair[1]) && pair[0] != pair[1]) {
                return None;
            }
        }
        let full: BTreeSet<usize> = (0..n).collect();
        if flats.last() != Some(&full) {
            return None;
        }
        Some(FlagOfFlats { flats })
    }

    pub fn flats(&self) -> &[BTreeSet<usize>] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Ascending weight vector compatible with the flag: elements first
    /// appearing in `F_i` get weight `i`, so the top difference carries
    /// the maximum.
    pub fn compatible_weight(&self) -> Vec<Rat> {
        let n = self.flats.last().map(|f| f.len()).unwrap_or(0);
        let mut w = vec![rat_int(0); n];
        for (i, flat) in self.flats.iter().enumerate() {
            let prev = if i == 0 { BTreeSet::new() } else { self.flats[i - 1].clone() };
            for &j in flat.difference(&prev) {
                w[j] = rat_int(i as i64 + 1);
            }
        }
        w
    }
}

/// Flag of index sets induced by a weight vector: `F_i` collects the
/// indices whose weight is among the `i` smallest distinct values, so the
/// top difference carries the maximum weight.
pub fn flag_of_weight(w: &[Rat]) -> FlagOfFlats {
    let mut values: Vec<&Rat> = w.iter().collect();
    values.sort();
    values.dedup();
    let flats = values
        .iter()
        .map(|&cut| (0..w.len()).filter(|&j| &w[j] <= cut).collect())
        .collect();
    FlagOfFlats { flats }
}

/// True iff no circuit sign, in either orientation, is dominated by `s`.
pub fn is_s_acyclic(m: &OrientedMatroid, s: &SignVector) -> Result<bool, BergmanError> {
    if !s.is_pure() {
        return Err(BergmanError::NotPure);
    }
    if s.len() != m.ground_size() {
        return Err(BergmanError::LengthMismatch(s.len(), m.ground_size()));
    }
    for c in m.circuits() {
        if c.sign().leq(s)? || c.sign().negate().leq(s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides whether `flat` is an `s`-flat of the realized matroid: there
/// is a covector dominated by `s` whose zero set is exactly `flat`.
pub fn is_s_flat(
    m: &OrientedMatroid,
    flat: &BTreeSet<usize>,
    s: &SignVector,
) -> Result<bool, BergmanError> {
    if !s.is_pure() {
        return Err(BergmanError::NotPure);
    }
    let mut v = s.clone();
    for &j in flat {
        if j >= m.ground_size() {
            return Err(MatroidError::IndexOutOfRange(j, m.ground_size()).into());
        }
        v.set(j, Sign::Zero);
    }
    Ok(is_covector(m, &v)?.is_some())
}

/// Decides whether the whole chain consists of `s`-flats. Every member
/// must be a flat of the matroid; otherwise `NotAFlat` with the offending
/// position is returned.
///
/// A chain implicitly starts at the empty flat, whose `s`-flat condition
/// asks for a pure covector dominated by `s` — that is, `s` itself must
/// be a tope. Without this the chain cannot arise from a nested sequence
/// of covectors ending in a pure one.
pub fn is_s_flag(
    m: &OrientedMatroid,
    flag: &FlagOfFlats,
    s: &SignVector,
) -> Result<bool, BergmanError> {
    if !s.is_pure() {
        return Err(BergmanError::NotPure);
    }
    for (i, flat) in flag.flats().iter().enumerate() {
        if &closure_flat(m, flat)? != flat {
            return Err(BergmanError::NotAFlat(i));
        }
    }
    if !is_s_flat(m, &BTreeSet::new(), s)? {
        return Ok(false);
    }
    for flat in flag.flats() {
        if !is_s_flat(m, flat, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether [`bergman_membership`] evaluates only the circuit route or all
/// three routes with an agreement check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteMode {
    Fast,
    Verify,
}

/// Per-route results of a membership query. In [`RouteMode::Fast`] only
/// the circuit route is populated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteReport {
    pub circuit_route: bool,
    pub initial_matroid_route: Option<bool>,
    pub flag_route: Option<bool>,
}

/// Signed Bergman fan membership: is the initial matroid of `m` at `w`
/// still `s`-acyclic?
///
/// The circuit route checks, for every circuit `C`, that the argmax of
/// `w` over the support of `C` meets both the positive and the negative
/// part of `s · s_C`. In verification mode the initial-matroid and flag
/// routes are evaluated too and any disagreement is reported as a bug.
pub fn bergman_membership(
    m: &OrientedMatroid,
    s: &SignVector,
    w: &[Rat],
    mode: RouteMode,
) -> Result<(bool, RouteReport), BergmanError> {
    if !s.is_pure() {
        return Err(BergmanError::NotPure);
    }
    if w.len() != m.ground_size() || s.len() != m.ground_size() {
        return Err(BergmanError::LengthMismatch(w.len(), m.ground_size()));
    }

    let circuit_route = m.circuits().iter().all(|c| {
        let support = c.support();
        let max = support.iter().map(|&i| &w[i]).max().expect("nonempty support");
        let mut has_plus = false;
        let mut has_minus = false;
        for &i in &support {
            if &w[i] == max {
                match s.get(i).product(c.sign().get(i)) {
                    Sign::Plus => has_plus = true,
                    Sign::Minus => has_minus = true,
                    Sign::Zero => unreachable!("pure s, support entry nonzero"),
                }
            }
        }
        has_plus && has_minus
    });

    let report = match mode {
        RouteMode::Fast => RouteReport {
            circuit_route,
            initial_matroid_route: None,
            flag_route: None,
        },
        RouteMode::Verify => {
            let initial_route = is_s_acyclic(&initial_matroid(m, w)?, s)?;
            // The weight flag need not consist of flats; then it cannot
            // be an s-flag and the route answers false.
            let flag_route = match is_s_flag(m, &flag_of_weight(w), s) {
                Ok(b) => b,
                Err(BergmanError::NotAFlat(_)) => false,
                Err(e) => return Err(e),
            };
            let report = RouteReport {
                circuit_route,
                initial_matroid_route: Some(initial_route),
                flag_route: Some(flag_route),
            };
            if initial_route != circuit_route || flag_route != circuit_route {
                return Err(BergmanError::RouteDisagreement(report));
            }
            report
        }
    };
    Ok((circuit_route, report))
}

/// All maximal flags of flats that are `s`-flags, by depth-first
/// extension through the flat lattice. A maximal flag of a rank-`r`
/// matroid has one flat of each rank `1..=r`, the last being the ground
/// set. Output is sorted and deterministic.
pub fn enumerate_s_flags(
    m: &OrientedMatroid,
    s: &SignVector,
) -> Result<Vec<FlagOfFlats>, BergmanError> {
    if !s.is_pure() {
        return Err(BergmanError::NotPure);
    }
    let n = m.ground_size();
    let rank = m.rank()?;
    let full: BTreeSet<usize> = (0..n).collect();

    // The empty flat's condition: s must itself be a covector (a tope).
    if !is_s_flat(m, &BTreeSet::new(), s)? {
        return Ok(Vec::new());
    }

    // Rank-1 flats: closures of single non-loop elements.
    let mut starts: Vec<BTreeSet<usize>> = Vec::new();
    for j in 0..n {
        let cl = closure_flat(m, &[j].into_iter().collect())?;
        if cl != full || rank == 1 {
            if !starts.contains(&cl) {
                starts.push(cl);
            }
        }
    }
    starts.sort();

    let mut out = Vec::new();
    let mut chain: Vec<BTreeSet<usize>> = Vec::new();
    for start in starts {
        if is_s_flat(m, &start, s)? {
            chain.push(start);
            extend(m, s, rank, &full, &mut chain, &mut out)?;
            chain.pop();
        }
    }
    out.sort();
    Ok(out)
}

/// All maximal flags of flats of the realized matroid, without any sign
/// condition. Sorted and deterministic.
pub fn enumerate_maximal_flags(m: &OrientedMatroid) -> Result<Vec<FlagOfFlats>, BergmanError> {
    let n = m.ground_size();
    let rank = m.rank()?;
    let full: BTreeSet<usize> = (0..n).collect();
    let mut starts: Vec<BTreeSet<usize>> = Vec::new();
    for j in 0..n {
        let cl = closure_flat(m, &[j].into_iter().collect())?;
        if (cl != full || rank == 1) && !starts.contains(&cl) {
            starts.push(cl);
        }
    }
    starts.sort();
    let mut out = Vec::new();
    let mut chain: Vec<BTreeSet<usize>> = Vec::new();
    for start in starts {
        chain.push(start);
        extend_unrestricted(m, rank, &full, &mut chain, &mut out)?;
        chain.pop();
    }
    out.sort();
    Ok(out)
}

fn extend_unrestricted(
    m: &OrientedMatroid,
    rank: usize,
    full: &BTreeSet<usize>,
    chain: &mut Vec<BTreeSet<usize>>,
    out: &mut Vec<FlagOfFlats>,
) -> Result<(), BergmanError> {
    let depth = chain.len();
    if depth == rank {
        debug_assert_eq!(chain.last(), Some(full));
        out.push(FlagOfFlats { flats: chain.clone() });
        return Ok(());
    }
    let current = chain.last().unwrap().clone();
    let mut children: Vec<BTreeSet<usize>> = Vec::new();
    for j in 0..m.ground_size() {
        if current.contains(&j) {
            continue;
        }
        let mut ext = current.clone();
        ext.insert(j);
        let cl = closure_flat(m, &ext)?;
        if depth + 1 < rank && &cl == full {
            continue;
        }
        if !children.contains(&cl) {
            children.push(cl);
        }
    }
    children.sort();
    for child in children {
        chain.push(child);
        extend_unrestricted(m, rank, full, chain, out)?;
        chain.pop();
    }
    Ok(())
}

fn extend(
    m: &OrientedMatroid,
    s: &SignVector,
    rank: usize,
    full: &BTreeSet<usize>,
    chain: &mut Vec<BTreeSet<usize>>,
    out: &mut Vec<FlagOfFlats>,
) -> Result<(), BergmanError> {
    let depth = chain.len();
    if depth == rank {
        debug_assert_eq!(chain.last(), Some(full));
        out.push(FlagOfFlats { flats: chain.clone() });
        return Ok(());
    }
    let current = chain.last().unwrap().clone();
    let mut children: Vec<BTreeSet<usize>> = Vec::new();
    for j in 0..m.ground_size() {
        if current.contains(&j) {
            continue;
        }
        let mut ext = current.clone();
        ext.insert(j);
        let cl = closure_flat(m, &ext)?;
        // A proper extension by one element raises the rank by exactly
        // one; skip to full only at the last step.
        if depth + 1 < rank && &cl == full {
            continue;
        }
        if !children.contains(&cl) {
            children.push(cl);
        }
    }
    children.sort();
    for child in children {
        if is_s_flat(m, &child, s)? {
            chain.push(child);
            extend(m, s, rank, full, chain, out)?;
            chain.pop();
        }
    }
    Ok(())
}
