//! Exact rational linear algebra: kernels, rank, Gale duals, affine
//! coordinates and a strict-inequality feasibility oracle.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar, always stored in lowest terms with positive
/// denominator.
pub type Rat = BigRational;

/// `n/d` as a [`Rat`].
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `n` as a [`Rat`].
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactLinError {
    #[error("selected basis columns are affinely dependent")]
    SingularBasis,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense rational matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl std::fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    /// Matrix with the columns indexed by `cols`, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must match");
        let mut m = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Reduced row echelon form together with the pivot columns.
    fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let tmp = m.get(r, j).clone();
                m.set(r, j, m.get(p, j).clone());
                m.set(p, j, tmp);
            }
            let inv = m.get(r, c).clone();
            for j in 0..m.cols {
                let v = m.get(r, j) / &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel. The returned vectors are linearly
    /// independent and `count = cols - rank`.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (pr, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(pr, f).clone();
                }
                v
            })
            .collect()
    }
}

/// Gale dual of a `3 x m` matrix with respect to three chosen basis columns.
///
/// Row `r` of the result reads off the affine relation of the `r`-th
/// non-basis column: it carries an identity block on the non-basis columns
/// and the negated affine coordinates on the basis columns, so
/// `aprime * G^T = 0`.
pub fn gale_dual(aprime: &QMatrix, basis_cols: [usize; 3]) -> Result<QMatrix, ExactLinError> {
    if aprime.rows() != 3 {
        return Err(ExactLinError::DimensionMismatch(format!(
            "expected 3 rows, got {}",
            aprime.rows()
        )));
    }
    let m = aprime.cols();
    let basis = aprime.select_cols(&basis_cols);
    if basis.rank() != 3 {
        return Err(ExactLinError::SingularBasis);
    }
    let non_basis: Vec<usize> = (0..m).filter(|j| !basis_cols.contains(j)).collect();
    let mut g = QMatrix::zeros(m - 3, m);
    for (r, &j) in non_basis.iter().enumerate() {
        let coeffs = solve3(&basis, &aprime.col(j)).ok_or(ExactLinError::SingularBasis)?;
        for (bi, &bc) in basis_cols.iter().enumerate() {
            g.set(r, bc, -coeffs[bi].clone());
        }
        g.set(r, j, Rat::one());
    }
    Ok(g)
}

/// Solves the 3x3 system `basis * x = rhs`.
fn solve3(basis: &QMatrix, rhs: &[Rat]) -> Option<[Rat; 3]> {
    let mut aug = QMatrix::zeros(3, 4);
    for i in 0..3 {
        for j in 0..3 {
            aug.set(i, j, basis.get(i, j).clone());
        }
        aug.set(i, 3, rhs[i].clone());
    }
    let (r, pivots) = aug.rref();
    if pivots != [0, 1, 2] {
        return None;
    }
    Some([r.get(0, 3).clone(), r.get(1, 3).clone(), r.get(2, 3).clone()])
}

/// Affine coordinates of each point with respect to an affine basis of
/// three points: `p = a*b1 + b*b2 + c*b3` with `a + b + c = 1`, exactly.
pub fn affine_coordinates(
    points: &[(i64, i64)],
    basis: [(i64, i64); 3],
) -> Result<Vec<[Rat; 3]>, ExactLinError> {
    let bm = QMatrix::from_rows(vec![
        vec![Rat::one(), Rat::one(), Rat::one()],
        basis.iter().map(|&(x, _)| rat_int(x)).collect(),
        basis.iter().map(|&(_, y)| rat_int(y)).collect(),
    ]);
    if bm.rank() != 3 {
        return Err(ExactLinError::SingularBasis);
    }
    points
        .iter()
        .map(|&(x, y)| {
            let rhs = [Rat::one(), rat_int(x), rat_int(y)];
            solve3(&bm, &rhs).ok_or(ExactLinError::SingularBasis)
        })
        .collect()
}

/// Outcome of a strict feasibility query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// A rational point satisfying every equality exactly and every strict
    /// form with a strictly positive value. Normalized to integer entries
    /// with unit content when nonzero.
    Witness(Vec<Rat>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Witness(_))
    }

    pub fn witness(&self) -> Option<&Vec<Rat>> {
        match self {
            Feasibility::Witness(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }
}

/// Decides whether some `y` satisfies `<e, y> = 0` for every equality form
/// and `<f, y> > 0` for every strict form. Equalities are projected out
/// first, then Fourier-Motzkin elimination runs on the strict forms.
pub fn strict_feasibility(
    equalities: &[Vec<Rat>],
    strict_positives: &[Vec<Rat>],
    dim: usize,
) -> Feasibility {
    for f in equalities.iter().chain(strict_positives) {
        assert_eq!(f.len(), dim, "form has wrong dimension");
    }
    // Solution space of the equalities as the column span of `null`.
    let null = if equalities.is_empty() {
        let mut id = QMatrix::zeros(dim, dim);
        for i in 0..dim {
            id.set(i, i, Rat::one());
        }
        id
    } else {
        let kernel = QMatrix::from_rows(equalities.to_vec()).kernel_basis();
        let k = kernel.len();
        let mut n = QMatrix::zeros(dim, k);
        for (j, v) in kernel.iter().enumerate() {
            for i in 0..dim {
                n.set(i, j, v[i].clone());
            }
        }
        n
    };
    let k = null.cols();
    // Substitute y = null * z into each strict form.
    let reduced: Vec<Vec<Rat>> = strict_positives
        .iter()
        .map(|f| {
            (0..k)
                .map(|j| (0..dim).map(|i| &f[i] * null.get(i, j)).sum())
                .collect()
        })
        .collect();
    match fm_strict(reduced, k) {
        None => Feasibility::Infeasible,
        Some(z) => {
            let y = null.mul_vec(&z);
            Feasibility::Witness(normalize_integer(&y))
        }
    }
}

/// Fourier-Motzkin elimination for homogeneous strict forms `<f, z> > 0`.
/// Returns a witness in `k` variables, or `None` when infeasible.
fn fm_strict(forms: Vec<Vec<Rat>>, k: usize) -> Option<Vec<Rat>> {
    if forms.iter().any(|f| f.iter().all(|c| c.is_zero())) {
        return None; // 0 > 0
    }
    if k == 0 {
        return Some(Vec::new());
    }
    let mut lowers: Vec<Vec<Rat>> = Vec::new(); // z_k > L(z')
    let mut uppers: Vec<Vec<Rat>> = Vec::new(); // z_k < U(z')
    let mut rest: Vec<Vec<Rat>> = Vec::new();
    for f in &forms {
        let c = &f[k - 1];
        if c.is_zero() {
            rest.push(f[..k - 1].to_vec());
        } else {
            let bound: Vec<Rat> = f[..k - 1].iter().map(|a| -a / c).collect();
            if c.is_positive() {
                lowers.push(bound);
            } else {
                uppers.push(bound);
            }
        }
    }
    let mut projected = rest;
    for lo in &lowers {
        for up in &uppers {
            projected.push(up.iter().zip(lo).map(|(u, l)| u - l).collect());
        }
    }
    let z = fm_strict(projected, k - 1)?;
    let eval = |bound: &Vec<Rat>| -> Rat { bound.iter().zip(&z).map(|(c, v)| c * v).sum() };
    let lo = lowers.iter().map(&eval).max();
    let hi = uppers.iter().map(&eval).min();
    let last = match (lo, hi) {
        (Some(l), Some(h)) => (l + h) / rat_int(2),
        (Some(l), None) => l + Rat::one(),
        (None, Some(h)) => h - Rat::one(),
        (None, None) => Rat::zero(),
    };
    let mut z = z;
    z.push(last);
    Some(z)
}

/// Scales a rational vector to integer entries with unit content,
/// preserving direction. The zero vector is returned unchanged.
pub fn normalize_integer(v: &[Rat]) -> Vec<Rat> {
    if v.iter().all(|x| x.is_zero()) {
        return v.to_vec();
    }
    let lcm = v
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let gcd = ints
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Rat::from_integer(x / &gcd)).collect()
}

/// Decision-only Fourier–Motzkin over mixed weak/strict homogeneous forms
/// (`<f,y> >= 0` resp. `> 0`). Test oracle shared across modules; kept
/// deliberately independent of [`strict_feasibility`].
#[cfg(test)]
pub(crate) fn mixed_feasible(weak: &[Vec<Rat>], strict: &[Vec<Rat>], dim: usize) -> bool {
    let mut cons: Vec<(Vec<Rat>, bool)> = Vec::new();
    for w in weak {
        cons.push((w.clone(), false));
    }
    for s in strict {
        cons.push((s.clone(), true));
    }
    for k in (1..=dim).rev() {
        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        let mut next = Vec::new();
        for (f, is_strict) in cons {
            let c = f[k - 1].clone();
            let rest = f[..k - 1].to_vec();
            if c.is_zero() {
                next.push((rest, is_strict));
            } else if c.is_positive() {
                lowers.push((rest, c, is_strict));
            } else {
                uppers.push((rest, c, is_strict));
            }
        }
        for (lf, lc, ls) in &lowers {
            for (uf, uc, us) in &uppers {
                // lc*x + lf >= 0 and uc*x + uf >= 0 with uc < 0 combine to
                // (-uc)*lf + lc*uf >= 0 (strict if either is).
                let comb: Vec<Rat> = lf.iter().zip(uf).map(|(a, b)| -uc * a + lc * b).collect();
                next.push((comb, *ls || *us));
            }
        }
        cons = next;
    }
    cons.iter().all(|(_, is_strict)| !is_strict)
}
