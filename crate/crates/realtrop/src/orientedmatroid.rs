//! Sign vectors, signed circuits of rational matrices, circuit-axiom
//! validation, reorientation, initial matroids and covector machinery for
//! realizable oriented matroids.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::exactlin::{strict_feasibility, Feasibility, QMatrix, Rat};
use num::Signed;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatroidError {
    #[error("sign vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("index {0} out of range for ground set of size {1}")]
    IndexOutOfRange(usize, usize),
    #[error("operation requires a realization")]
    NoRealization,
    #[error("sign vector is not pure")]
    NotPure,
}

/// One of `+`, `0`, `-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn of(r: &Rat) -> Sign {
        if r.is_positive() {
            Sign::Plus
        } else if r.is_negative() {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn product(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Plus,
            _ => Sign::Minus,
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Zero => '0',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '0' => Some(Sign::Zero),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Element of `{+,0,-}^n` with componentwise product and the usual partial
/// order (`a <= b` iff `a^+ ⊆ b^+` and `a^- ⊆ b^-`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector(Vec<Sign>);

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({})", self)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignVector(signs)
    }

    pub fn zero(n: usize) -> Self {
        SignVector(vec![Sign::Zero; n])
    }

    pub fn all_plus(n: usize) -> Self {
        SignVector(vec![Sign::Plus; n])
    }

    /// Parses a string over `+-0`.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars().map(Sign::from_char).collect::<Option<Vec<_>>>().map(SignVector)
    }

    /// Sign pattern of a rational vector.
    pub fn of_rationals(v: &[Rat]) -> Self {
        SignVector(v.iter().map(Sign::of).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, s: Sign) {
        self.0[i] = s;
    }

    pub fn iter(&self) -> impl Iterator<Item = Sign> + '_ {
        self.0.iter().copied()
    }

    pub fn support(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&i| self.0[i] != Sign::Zero).collect()
    }

    pub fn positive_part(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&i| self.0[i] == Sign::Plus).collect()
    }

    pub fn negative_part(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&i| self.0[i] == Sign::Minus).collect()
    }

    pub fn zero_set(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&i| self.0[i] == Sign::Zero).collect()
    }

    pub fn is_pure(&self) -> bool {
        self.0.iter().all(|&s| s != Sign::Zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == Sign::Zero)
    }

    pub fn negate(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| s.negate()).collect())
    }

    /// Componentwise product, zero absorbing.
    pub fn product(&self, other: &SignVector) -> Result<SignVector, MatroidError> {
        if self.len() != other.len() {
            return Err(MatroidError::LengthMismatch(self.len(), other.len()));
        }
        Ok(SignVector(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a.product(b)).collect(),
        ))
    }

    /// `self <= other` in the covector order.
    pub fn leq(&self, other: &SignVector) -> Result<bool, MatroidError> {
        if self.len() != other.len() {
            return Err(MatroidError::LengthMismatch(self.len(), other.len()));
        }
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .all(|(&a, &b)| a == Sign::Zero || a == b))
    }

    /// Sign vector that is `-` on `set` and `+` elsewhere.
    pub fn reorientation(n: usize, set: &BTreeSet<usize>) -> SignVector {
        SignVector(
            (0..n)
                .map(|i| if set.contains(&i) { Sign::Minus } else { Sign::Plus })
                .collect(),
        )
    }
}

/// Signed circuit in canonical orientation: the entry at the smallest
/// support index is `+`. The negated circuit is implicit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedCircuit {
    sign: SignVector,
}

impl fmt::Debug for SignedCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedCircuit({})", self.sign)
    }
}

impl SignedCircuit {
    /// Canonicalizes an arbitrary nonzero sign vector.
    pub fn new(sign: SignVector) -> SignedCircuit {
        assert!(!sign.is_zero(), "a circuit has nonempty support");
        let first = sign.iter().find(|&s| s != Sign::Zero).unwrap();
        let sign = if first == Sign::Minus { sign.negate() } else { sign };
        SignedCircuit { sign }
    }

    pub fn sign(&self) -> &SignVector {
        &self.sign
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.sign.support()
    }
}

/// First circuit-axiom violation found by [`validate_circuit_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptySupport,
    NestedSupports(SignVector, SignVector),
    WeakEliminationFails { x: SignVector, y: SignVector, pivot: usize },
}

/// Checks the circuit axioms (C0)-(C3) for a canonical circuit list on a
/// ground set of size `n`. Negation closure (C1) is implicit in the
/// canonical form; the elimination axiom runs over both orientations.
pub fn validate_circuit_axioms(circuits: &[SignedCircuit], n: usize) -> Result<(), Violation> {
    for c in circuits {
        assert_eq!(c.sign().len(), n, "circuit length must match ground set");
        if c.support().is_empty() {
            return Err(Violation::EmptySupport);
        }
    }
    for (i, x) in circuits.iter().enumerate() {
        for y in &circuits[i + 1..] {
            let sx = x.support();
            let sy = y.support();
            if sx.is_subset(&sy) || sy.is_subset(&sx) {
                return Err(Violation::NestedSupports(x.sign().clone(), y.sign().clone()));
            }
        }
    }
    // Weak elimination over the full +/- expansion.
    let mut expanded: Vec<SignVector> = Vec::new();
    for c in circuits {
        expanded.push(c.sign().clone());
        expanded.push(c.sign().negate());
    }
    for x in &expanded {
        for y in &expanded {
            if x == &y.negate() {
                continue;
            }
            let xp = x.positive_part();
            let yn = y.negative_part();
            for &e in xp.intersection(&yn) {
                let mut pos: BTreeSet<usize> = x.positive_part();
                pos.extend(y.positive_part());
                pos.remove(&e);
                let mut neg: BTreeSet<usize> = x.negative_part();
                neg.extend(y.negative_part());
                neg.remove(&e);
                let found = expanded.iter().any(|z| {
                    z.positive_part().is_subset(&pos) && z.negative_part().is_subset(&neg)
                });
                if !found {
                    return Err(Violation::WeakEliminationFails {
                        x: x.clone(),
                        y: y.clone(),
                        pivot: e,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Realizable (or at least circuit-presented) oriented matroid.
#[derive(Clone, Debug)]
pub struct OrientedMatroid {
    ground_size: usize,
    circuits: Vec<SignedCircuit>,
    realization: Option<QMatrix>,
}

impl OrientedMatroid {
    pub fn from_circuits(ground_size: usize, mut circuits: Vec<SignedCircuit>) -> Self {
        circuits.sort();
        circuits.dedup();
        OrientedMatroid { ground_size, circuits, realization: None }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn circuits(&self) -> &[SignedCircuit] {
        &self.circuits
    }

    pub fn realization(&self) -> Option<&QMatrix> {
        self.realization.as_ref()
    }

    /// Rank of the underlying matroid; requires a realization.
    pub fn rank(&self) -> Result<usize, MatroidError> {
        Ok(self.realization.as_ref().ok_or(MatroidError::NoRealization)?.rank())
    }
}

/// Oriented vector matroid of the columns of `a`: circuits are the sign
/// vectors of kernel elements with inclusion-minimal support.
pub fn circuits_from_matrix(a: &QMatrix) -> OrientedMatroid {
    let n = a.cols();
    let rank = a.rank();
    let mut circuits = Vec::new();
    for size in 1..=(rank + 1).min(n) {
        for subset in subsets(n, size) {
            let sub = a.select_cols(&subset);
            if sub.rank() != size - 1 {
                continue;
            }
            // Minimal dependence: every proper subset is independent.
            let minimal = (0..size).all(|drop| {
                let rest: Vec<usize> = subset
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != drop)
                    .map(|(_, &j)| j)
                    .collect();
                a.select_cols(&rest).rank() == size - 1
            });
            if !minimal {
                continue;
            }
            let kernel = sub.kernel_basis();
            debug_assert_eq!(kernel.len(), 1);
            let mut sign = SignVector::zero(n);
            for (k, &j) in subset.iter().enumerate() {
                sign.set(j, Sign::of(&kernel[0][k]));
            }
            circuits.push(SignedCircuit::new(sign));
        }
    }
    let mut m = OrientedMatroid::from_circuits(n, circuits);
    m.realization = Some(a.clone());
    m
}

/// All `size`-element subsets of `0..n`, in lexicographic order.
pub(crate) fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, size, current, out);
            current.pop();
        }
    }
    rec(0, n, size, &mut current, &mut out);
    out
}

/// Reorientation with respect to an index set: every circuit sign is
/// multiplied by the reorientation vector and recanonicalized. The
/// realization, when present, has the corresponding columns negated so
/// covector queries stay consistent.
pub fn reorient(m: &OrientedMatroid, set: &BTreeSet<usize>) -> Result<OrientedMatroid, MatroidError> {
    if let Some(&i) = set.iter().find(|&&i| i >= m.ground_size) {
        return Err(MatroidError::IndexOutOfRange(i, m.ground_size));
    }
    let sigma = SignVector::reorientation(m.ground_size, set);
    let circuits = m
        .circuits
        .iter()
        .map(|c| Ok(SignedCircuit::new(c.sign().product(&sigma)?)))
        .collect::<Result<Vec<_>, MatroidError>>()?;
    let realization = m.realization.as_ref().map(|a| {
        let mut a = a.clone();
        for &j in set {
            for i in 0..a.rows() {
                let v = -a.get(i, j).clone();
                a.set(i, j, v);
            }
        }
        a
    });
    let mut out = OrientedMatroid::from_circuits(m.ground_size, circuits);
    out.realization = realization;
    Ok(out)
}

/// Oriented initial matroid with respect to a weight vector: circuits are
/// the inclusion-minimal signed initial circuits, where an initial circuit
/// keeps only the entries attaining the maximum weight over its support.
pub fn initial_matroid(m: &OrientedMatroid, w: &[Rat]) -> Result<OrientedMatroid, MatroidError> {
    if w.len() != m.ground_size {
        return Err(MatroidError::LengthMismatch(w.len(), m.ground_size));
    }
    let initials: Vec<SignedCircuit> = m
        .circuits
        .iter()
        .map(|c| SignedCircuit::new(initial_sign(c.sign(), w)))
        .collect();
    let minimal: Vec<SignedCircuit> = initials
        .iter()
        .filter(|c| {
            !initials
                .iter()
                .any(|d| d.support() != c.support() && d.support().is_subset(&c.support()))
        })
        .cloned()
        .collect();
    Ok(OrientedMatroid::from_circuits(m.ground_size, minimal))
}

/// Restriction of a circuit sign to the argmax of `w` over its support.
pub(crate) fn initial_sign(sign: &SignVector, w: &[Rat]) -> SignVector {
    let support = sign.support();
    let max = support.iter().map(|&i| &w[i]).max().expect("nonempty support");
    let mut out = SignVector::zero(sign.len());
    for &i in &support {
        if &w[i] == max {
            out.set(i, sign.get(i));
        }
    }
    out
}

/// Decides whether `v` is a covector of the realized matroid, i.e. whether
/// some `y` satisfies `sign(<y, g_j>) = v_j` for all columns `g_j`.
pub fn is_covector(m: &OrientedMatroid, v: &SignVector) -> Result<Option<Vec<Rat>>, MatroidError> {
    let a = m.realization.as_ref().ok_or(MatroidError::NoRealization)?;
    if v.len() != m.ground_size {
        return Err(MatroidError::LengthMismatch(v.len(), m.ground_size));
    }
    let mut equalities = Vec::new();
    let mut strict = Vec::new();
    for j in 0..a.cols() {
        let col = a.col(j);
        match v.get(j) {
            Sign::Zero => equalities.push(col),
            Sign::Plus => strict.push(col),
            Sign::Minus => strict.push(col.iter().map(|x| -x).collect()),
        }
    }
    match strict_feasibility(&equalities, &strict, a.rows()) {
        Feasibility::Witness(y) => Ok(Some(y)),
        Feasibility::Infeasible => Ok(None),
    }
}

/// All topes (pure covectors) of a realized matroid. Candidates are pruned
/// by the necessary condition that the matroid is `s`-acyclic for a tope
/// `s`; the final decision is always the feasibility oracle.
pub fn topes(m: &OrientedMatroid) -> Result<Vec<SignVector>, MatroidError> {
    if m.realization.is_none() {
        return Err(MatroidError::NoRealization);
    }
    let n = m.ground_size;
    let mut out = Vec::new();
    for bits in 0..(1u64 << n) {
        let s = SignVector::new(
            (0..n)
                .map(|i| if bits >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect(),
        );
        let dominated = m.circuits.iter().any(|c| {
            c.sign().leq(&s).unwrap() || c.sign().negate().leq(&s).unwrap()
        });
        if dominated {
            continue;
        }
        if is_covector(m, &s)?.is_some() {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

/// Closure of an index set in the realized matroid: all columns contained
/// in the linear span of the selected columns. The result is a flat.
pub fn closure_flat(m: &OrientedMatroid, set: &BTreeSet<usize>) -> Result<BTreeSet<usize>, MatroidError> {
    let a = m.realization.as_ref().ok_or(MatroidError::NoRealization)?;
    if let Some(&i) = set.iter().find(|&&i| i >= m.ground_size) {
        return Err(MatroidError::IndexOutOfRange(i, m.ground_size));
    }
    let base: Vec<usize> = set.iter().copied().collect();
    let base_rank = a.select_cols(&base).rank();
    let mut out = BTreeSet::new();
    for j in 0..a.cols() {
        if set.contains(&j) {
            out.insert(j);
            continue;
        }
        let mut with = base.clone();
        with.push(j);
        if a.select_cols(&with).rank() == base_rank {
            out.insert(j);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat_int;

    pub(crate) fn example_matrix() -> QMatrix {
        QMatrix::from_i64(&[&[1, 0, 1, -1, -2], &[0, 1, 1, -1, -1]])
    }

    fn sv(s: &str) -> SignVector {
        SignVector::parse(s).unwrap()
    }

    #[test]
    fn sign_product_rules() {
        let a = sv("+-0");
        assert_eq!(a.product(&sv("+++")).unwrap(), a);
        assert_eq!(sv("+-0").product(&sv("--+")).unwrap(), sv("-+0"));
        // s*s is the support indicator.
        assert_eq!(a.product(&a).unwrap(), sv("++0"));
    }

    #[test]
    fn sign_leq_rules() {
        assert!(sv("00000").leq(&sv("-++-+")).unwrap());
        assert!(sv("-+00+").leq(&sv("-++-+")).unwrap());
        assert!(!sv("+0").leq(&sv("-+")).unwrap());
        assert_eq!(
            sv("+").leq(&sv("++")),
            Err(MatroidError::LengthMismatch(1, 2))
        );
    }

    #[test]
    fn circuits_of_reference_example() {
        let m = circuits_from_matrix(&example_matrix());
        let expected: Vec<SignedCircuit> = ["++-00", "++0+0", "++00+", "00++0", "+0+0+", "+00-+", "0-+0+", "0-0-+"]
            .iter()
            .map(|s| SignedCircuit::new(sv(s)))
            .collect();
        let mut expected = expected;
        expected.sort();
        assert_eq!(m.circuits(), expected.as_slice());
    }

    #[test]
    fn identity_columns_have_no_circuits() {
        let m = circuits_from_matrix(&QMatrix::from_i64(&[&[1, 0], &[0, 1]]));
        assert!(m.circuits().is_empty());
    }

    /// Brute-force oracle: every column subset tested for minimal
    /// dependence directly, signs read from the 1-dimensional kernel.
    fn circuits_brute_force(a: &QMatrix) -> Vec<SignedCircuit> {
        let n = a.cols();
        let mut out = Vec::new();
        for size in 1..=n {
            for subset in subsets(n, size) {
                let sub = a.select_cols(&subset);
                let dependent = sub.rank() < size;
                if !dependent {
                    continue;
                }
                let all_proper_independent = (0..size).all(|drop| {
                    let rest: Vec<usize> = subset
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != drop)
                        .map(|(_, &j)| j)
                        .collect();
                    a.select_cols(&rest).rank() == rest.len()
                });
                if !all_proper_independent {
                    continue;
                }
                let kernel = sub.kernel_basis();
                assert_eq!(kernel.len(), 1);
                let mut sign = SignVector::zero(n);
                for (k, &j) in subset.iter().enumerate() {
                    sign.set(j, Sign::of(&kernel[0][k]));
                }
                out.push(SignedCircuit::new(sign));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn circuits_match_subset_enumeration_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut a = QMatrix::zeros(2, 4);
            for i in 0..2 {
                for j in 0..4 {
                    a.set(i, j, rat_int(rng.gen_range(-3..=3)));
                }
            }
            let m = circuits_from_matrix(&a);
            assert_eq!(m.circuits(), circuits_brute_force(&a).as_slice());
            assert_eq!(validate_circuit_axioms(m.circuits(), 4), Ok(()));
        }
    }

    #[test]
    fn axioms_accept_reference_example() {
        let m = circuits_from_matrix(&example_matrix());
        assert_eq!(validate_circuit_axioms(m.circuits(), 5), Ok(()));
    }

    #[test]
    fn axioms_reject_nested_supports() {
        let c1 = SignedCircuit::new(sv("++0"));
        let c2 = SignedCircuit::new(sv("+++"));
        assert_eq!(
            validate_circuit_axioms(&[c1, c2], 3),
            Err(Violation::NestedSupports(sv("++0"), sv("+++")))
        );
    }

    #[test]
    fn reorient_is_involution() {
        let m = circuits_from_matrix(&example_matrix());
        let set: BTreeSet<usize> = [1, 3].into_iter().collect();
        let back = reorient(&reorient(&m, &set).unwrap(), &set).unwrap();
        assert_eq!(m.circuits(), back.circuits());
        let empty = BTreeSet::new();
        assert_eq!(reorient(&m, &empty).unwrap().circuits(), m.circuits());
    }

    #[test]
    fn reorient_flips_signs_on_set() {
        let m = circuits_from_matrix(&example_matrix());
        // Circuit 12(bar 3) becomes 123 after reorienting at element 3
        // (index 2).
        let set: BTreeSet<usize> = [2].into_iter().collect();
        let r = reorient(&m, &set).unwrap();
        assert!(r.circuits().contains(&SignedCircuit::new(sv("+++00"))));
        assert!(!r.circuits().iter().any(|c| c.sign() == &sv("++-00")));
    }

    #[test]
    fn initial_matroid_constant_weight_is_identity() {
        let m = circuits_from_matrix(&example_matrix());
        let w = vec![rat_int(1); 5];
        let mw = initial_matroid(&m, &w).unwrap();
        assert_eq!(mw.circuits(), m.circuits());
    }

    #[test]
    fn initial_matroid_matches_definition() {
        let m = circuits_from_matrix(&example_matrix());
        let w = vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0), rat_int(0)];
        let mw = initial_matroid(&m, &w).unwrap();
        // Oracle: initial signs of all 8 circuits, then inclusion-minimal.
        let initials: Vec<SignedCircuit> = m
            .circuits()
            .iter()
            .map(|c| SignedCircuit::new(initial_sign(c.sign(), &w)))
            .collect();
        for c in mw.circuits() {
            assert!(initials.contains(c));
            assert!(!mw
                .circuits()
                .iter()
                .any(|d| d != c && d.support().is_subset(&c.support())));
        }
        for c in &initials {
            assert!(mw.circuits().iter().any(|d| d.support().is_subset(&c.support())));
        }
        assert_eq!(validate_circuit_axioms(mw.circuits(), 5), Ok(()));
    }

    #[test]
    fn covector_zero_vector() {
        let m = circuits_from_matrix(&example_matrix());
        let y = is_covector(&m, &sv("00000")).unwrap().expect("zero is a covector");
        assert!(y.iter().all(|x| num::Zero::is_zero(x)));
    }

    #[test]
    fn covector_of_known_chain_element() {
        let m = circuits_from_matrix(&example_matrix());
        assert!(is_covector(&m, &sv("-+00+")).unwrap().is_some());
    }

    #[test]
    fn covector_rejected_when_zero_set_pins_signs() {
        let m = circuits_from_matrix(&example_matrix());
        assert!(is_covector(&m, &sv("++00+")).unwrap().is_none());
    }

    #[test]
    fn topes_of_reference_example() {
        let m = circuits_from_matrix(&example_matrix());
        let got = topes(&m).unwrap();
        let mut expected: Vec<SignVector> = [
            "+-+--", "+--+-", "+--++", "---++", "-+-++", "-++-+", "-++--", "+++--",
        ]
        .iter()
        .map(|s| sv(s))
        .collect();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn topes_of_single_column() {
        let m = circuits_from_matrix(&QMatrix::from_i64(&[&[2]]));
        assert_eq!(topes(&m).unwrap(), vec![sv("-"), sv("+")]);
    }

    #[test]
    fn topes_match_enumeration_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let mut a = QMatrix::zeros(2, 4);
            for i in 0..2 {
                for j in 0..4 {
                    a.set(i, j, rat_int(rng.gen_range(-3..=3)));
                }
            }
            let m = circuits_from_matrix(&a);
            let got = topes(&m).unwrap();
            // Oracle: no pruning, pure feasibility on all pure vectors.
            let mut expected = Vec::new();
            for bits in 0..16u64 {
                let s = SignVector::new(
                    (0..4)
                        .map(|i| if bits >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
                        .collect(),
                );
                if is_covector(&m, &s).unwrap().is_some() {
                    expected.push(s);
                }
            }
            expected.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn closure_flat_examples() {
        let m = circuits_from_matrix(&example_matrix());
        let full: BTreeSet<usize> = (0..5).collect();
        assert_eq!(closure_flat(&m, &full).unwrap(), full);
        // Columns 3 and 4 (indices 2,3) are parallel.
        let s: BTreeSet<usize> = [2].into_iter().collect();
        let expected: BTreeSet<usize> = [2, 3].into_iter().collect();
        assert_eq!(closure_flat(&m, &s).unwrap(), expected);
    }

    #[test]
    fn closure_is_idempotent_and_extensive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut a = QMatrix::zeros(2, 5);
            for i in 0..2 {
                for j in 0..5 {
                    a.set(i, j, rat_int(rng.gen_range(-2..=2)));
                }
            }
            let m = circuits_from_matrix(&a);
            let set: BTreeSet<usize> =
                (0..5).filter(|_| rng.gen_bool(0.4)).collect();
            let cl = closure_flat(&m, &set).unwrap();
            assert!(set.is_subset(&cl));
            assert_eq!(closure_flat(&m, &cl).unwrap(), cl);
        }
    }
}
