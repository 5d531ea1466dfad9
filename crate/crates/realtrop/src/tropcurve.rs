//! Real tropical polynomials in two variables, regular marked subdivisions
//! from upper hulls, Klein-group sign bookkeeping and per-chart real plane
//! tropical curves via the sign-aware duality.
//!
//! A real tropical curve is presented as four charts indexed by the pure
//! sign vectors of length 2. The chart for `v` keeps exactly those pieces
//! of the unsigned tropical curve whose dual face in the subdivision
//! carries two marked points with different adjusted signs `s_i · ψ(v)_i`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exactlin::{rat_int, Rat};
use crate::orientedmatroid::{Sign, SignVector};

pub type LatticePoint = (i64, i64);
pub type QPoint = [Rat; 2];
/// Element of the Klein four-group `{+,-}²` acting on sign distributions.
pub type Klein = [Sign; 2];

pub const KLEIN_ELEMENTS: [Klein; 4] = [
    [Sign::Plus, Sign::Plus],
    [Sign::Plus, Sign::Minus],
    [Sign::Minus, Sign::Plus],
    [Sign::Minus, Sign::Minus],
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TropError {
    #[error("support points must be distinct")]
    DuplicateSupportPoint,
    #[error("support does not affinely span the plane")]
    DegenerateSupport,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("sign vector must be pure")]
    NotPure,
}

/// Real tropical polynomial: signed coefficients `(sign, modulus)` over a
/// finite support in `Z²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealTropPoly {
    support: Vec<LatticePoint>,
    signs: SignVector,
    moduli: Vec<Rat>,
}

impl RealTropPoly {
    pub fn new(
        support: Vec<LatticePoint>,
        signs: SignVector,
        moduli: Vec<Rat>,
    ) -> Result<RealTropPoly, TropError> {
        if signs.len() != support.len() {
            return Err(TropError::LengthMismatch(signs.len(), support.len()));
        }
        if moduli.len() != support.len() {
            return Err(TropError::LengthMismatch(moduli.len(), support.len()));
        }
        if !signs.is_pure() {
            return Err(TropError::NotPure);
        }
        let mut seen = BTreeSet::new();
        for p in &support {
            if !seen.insert(*p) {
                return Err(TropError::DuplicateSupportPoint);
            }
        }
        Ok(RealTropPoly { support, signs, moduli })
    }

    pub fn support(&self) -> &[LatticePoint] {
        &self.support
    }

    pub fn signs(&self) -> &SignVector {
        &self.signs
    }

    pub fn moduli(&self) -> &[Rat] {
        &self.moduli
    }
}

/// Value and full argmax set of `max_i (u_i + <α_i, x>)` at a rational
/// point.
pub fn eval_modulus(f: &RealTropPoly, x: &QPoint) -> (Rat, BTreeSet<usize>) {
    let values: Vec<Rat> = f
        .support
        .iter()
        .zip(&f.moduli)
        .map(|(&(ax, ay), u)| u + rat_int(ax) * &x[0] + rat_int(ay) * &x[1])
        .collect();
    let max = values.iter().max().expect("nonempty support").clone();
    let argmax = (0..values.len()).filter(|&i| values[i] == max).collect();
    (max, argmax)
}

/// Cell of a marked subdivision: convex-hull vertices in counterclockwise
/// order and the indices of all marked support points lying on the cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MarkedCell {
    pub vertices: Vec<LatticePoint>,
    pub marked: BTreeSet<usize>,
}

/// Regular marked subdivision of the support polygon, with an optional
/// sign distribution on the support points (shared points automatically
/// carry equal signs across cells).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMarkedSubdivision {
    pub support: Vec<LatticePoint>,
    pub cells: Vec<MarkedCell>,
    pub signs: Option<SignVector>,
}

impl SignedMarkedSubdivision {
    /// Indices of all marked support points.
    pub fn marked_points(&self) -> BTreeSet<usize> {
        self.cells.iter().flat_map(|c| c.marked.iter().copied()).collect()
    }
}

pub(crate) fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull by monotone chain, counterclockwise, collinear points
/// dropped.
pub(crate) fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts: Vec<LatticePoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub(crate) fn on_segment(p: LatticePoint, a: LatticePoint, b: LatticePoint) -> bool {
    cross(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

fn gcd64(a: i64, b: i64) -> i64 {
    num::integer::gcd(a, b)
}

/// Number of lattice points on the segment minus one.
pub(crate) fn lattice_length(a: LatticePoint, b: LatticePoint) -> i64 {
    gcd64((b.0 - a.0).abs(), (b.1 - a.1).abs())
}

/// Twice the Euclidean area of a simple polygon, i.e. its normalized
/// lattice area, by the shoelace formula. Positive for counterclockwise
/// orientation.
pub(crate) fn double_area(polygon: &[LatticePoint]) -> i64 {
    let k = polygon.len();
    (0..k)
        .map(|t| {
            let a = polygon[t];
            let b = polygon[(t + 1) % k];
            a.0 * b.1 - b.0 * a.1
        })
        .sum()
}

fn affinely_independent(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> bool {
    cross(a, b, c) != 0
}

fn has_independent_triple(points: &[LatticePoint]) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if affinely_independent(points[i], points[j], points[k]) {
                    return true;
                }
            }
        }
    }
    false
}

/// Affine lift functional `ℓ(x,y) = cx·x + cy·y + d` as `(cx, cy, d)`.
type Functional = [Rat; 3];

fn functional_through(
    support: &[LatticePoint],
    u: &[Rat],
    i: usize,
    j: usize,
    k: usize,
) -> Functional {
    // Cramer's rule on the 3x3 system ℓ(α) = u at the three points.
    let (xi, yi) = support[i];
    let (xj, yj) = support[j];
    let (xk, yk) = support[k];
    let det = rat_int(cross(support[i], support[j], support[k]));
    let xi = rat_int(xi);
    let yi = rat_int(yi);
    let xj = rat_int(xj);
    let yj = rat_int(yj);
    let xk = rat_int(xk);
    let yk = rat_int(yk);
    let (ui, uj, uk) = (&u[i], &u[j], &u[k]);
    let cx = (ui * (&yj - &yk) + uj * (&yk - &yi) + uk * (&yi - &yj)) / &det;
    let cy = (ui * (&xk - &xj) + uj * (&xi - &xk) + uk * (&xj - &xi)) / &det;
    let d = (ui * (&xj * &yk - &xk * &yj) + uj * (&xk * &yi - &xi * &yk)
        + uk * (&xi * &yj - &xj * &yi))
        / &det;
    [cx, cy, d]
}

fn eval_functional(l: &Functional, p: LatticePoint) -> Rat {
    &l[0] * rat_int(p.0) + &l[1] * rat_int(p.1) + &l[2]
}

/// Maximal (2-dimensional) cells of the upper hull, each with its
/// supporting affine functional. A cell is the equality set of a
/// functional that majorizes all lifts and is attained on an affinely
/// independent triple.
fn upper_cells(
    support: &[LatticePoint],
    u: &[Rat],
) -> Result<Vec<(Functional, BTreeSet<usize>)>, TropError> {
    if u.len() != support.len() {
        return Err(TropError::LengthMismatch(u.len(), support.len()));
    }
    if !has_independent_triple(support) {
        return Err(TropError::DegenerateSupport);
    }
    let n = support.len();
    let mut out: Vec<(Functional, BTreeSet<usize>)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if !affinely_independent(support[i], support[j], support[k]) {
                    continue;
                }
                let l = functional_through(support, u, i, j, k);
                let mut eq = BTreeSet::new();
                let mut majorizes = true;
                for t in 0..n {
                    let val = eval_functional(&l, support[t]);
                    if val < u[t] {
                        majorizes = false;
                        break;
                    }
                    if val == u[t] {
                        eq.insert(t);
                    }
                }
                if majorizes && !out.iter().any(|(_, e)| e == &eq) {
                    out.push((l, eq));
                }
            }
        }
    }
    out.sort_by(|(_, a), (_, b)| a.cmp(b));
    Ok(out)
}

/// Regular marked subdivision induced by lifting the support points to
/// heights `u` and projecting the upper facets. A support point is marked
/// iff its lift lies on an upper facet.
pub fn regular_marked_subdivision(
    support: &[LatticePoint],
    u: &[Rat],
) -> Result<SignedMarkedSubdivision, TropError> {
    let cells = upper_cells(support, u)?
        .into_iter()
        .map(|(_, marked)| {
            let pts: Vec<LatticePoint> = marked.iter().map(|&i| support[i]).collect();
            MarkedCell { vertices: convex_hull(&pts), marked }
        })
        .collect();
    Ok(SignedMarkedSubdivision { support: support.to_vec(), cells, signs: None })
}

/// Image of a Klein element under ψ: the sign at `α` is
/// `v_x^{α_x} · v_y^{α_y}`.
pub fn klein_image(support: &[LatticePoint], v: Klein) -> SignVector {
    SignVector::new(
        support
            .iter()
            .map(|&(ax, ay)| {
                let sx = if ax.rem_euclid(2) == 1 { v[0] } else { Sign::Plus };
                let sy = if ay.rem_euclid(2) == 1 { v[1] } else { Sign::Plus };
                sx.product(sy)
            })
            .collect(),
    )
}

pub fn klein_product(a: Klein, b: Klein) -> Klein {
    [a[0].product(b[0]), a[1].product(b[1])]
}

/// Variant `T_v` of a signed subdivision: same cells and markings, sign at
/// `α` replaced by `s_α · ψ(v)_α`.
pub fn signed_subdivision_variant(
    t: &SignedMarkedSubdivision,
    s: &SignVector,
    v: Klein,
) -> Result<SignedMarkedSubdivision, TropError> {
    if s.len() != t.support.len() {
        return Err(TropError::LengthMismatch(s.len(), t.support.len()));
    }
    if !s.is_pure() {
        return Err(TropError::NotPure);
    }
    let adjusted = s
        .product(&klein_image(&t.support, v))
        .expect("lengths checked");
    Ok(SignedMarkedSubdivision {
        support: t.support.clone(),
        cells: t.cells.clone(),
        signs: Some(adjusted),
    })
}

/// Decides whether the signed point `(v, x)` lies on the real tropical
/// curve of `f`: the modulus maximum must be attained at least twice, at
/// two indices with different adjusted signs.
pub fn point_in_real_hypersurface(f: &RealTropPoly, v: Klein, x: &QPoint) -> bool {
    let (_, argmax) = eval_modulus(f, x);
    let adjusted = f
        .signs
        .product(&klein_image(&f.support, v))
        .expect("lengths match by construction");
    let has_plus = argmax.iter().any(|&i| adjusted.get(i) == Sign::Plus);
    let has_minus = argmax.iter().any(|&i| adjusted.get(i) == Sign::Minus);
    has_plus && has_minus
}

/// Segment of a chart, endpoints in canonical (sorted) order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Segment {
    pub a: QPoint,
    pub b: QPoint,
    pub weight: i64,
}

/// Ray of a chart: base point, primitive integer direction, weight.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ray {
    pub base: QPoint,
    pub dir: LatticePoint,
    pub weight: i64,
}

/// One chart of a real plane tropical curve, in the modulus plane. The
/// sign index is metadata selecting the orthant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub sign_index: Klein,
    pub vertices: Vec<QPoint>,
    pub segments: Vec<Segment>,
    pub rays: Vec<Ray>,
}

impl Chart {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.segments.is_empty() && self.rays.is_empty()
    }
}

/// Chart of the real tropical curve of `f` for the sign index `v`, via
/// duality with the signed subdivision variant `T_v`:
///
/// * a cell with two differently-signed marked points contributes its dual
///   vertex (the point where all its marked monomials tie),
/// * an interior subdivision edge with two differently-signed marked
///   points contributes the segment between the dual vertices of its two
///   cells,
/// * a boundary subdivision edge with two differently-signed marked points
///   contributes a ray from its cell's dual vertex in the outward normal
///   direction,
/// * every edge weight is the lattice length of the dual subdivision edge.
pub fn compute_chart(f: &RealTropPoly, v: Klein) -> Result<Chart, TropError> {
    let cells = upper_cells(&f.support, &f.moduli)?;
    let adjusted = f
        .signs
        .product(&klein_image(&f.support, v))
        .expect("lengths match by construction");
    let sign_condition = |indices: &BTreeSet<usize>| {
        indices.iter().any(|&i| adjusted.get(i) == Sign::Plus)
            && indices.iter().any(|&i| adjusted.get(i) == Sign::Minus)
    };

    let duals: Vec<QPoint> = cells.iter().map(|(l, _)| [-l[0].clone(), -l[1].clone()]).collect();
    let hulls: Vec<Vec<LatticePoint>> = cells
        .iter()
        .map(|(_, marked)| {
            let pts: Vec<LatticePoint> = marked.iter().map(|&i| f.support[i]).collect();
            convex_hull(&pts)
        })
        .collect();

    let mut vertices: Vec<QPoint> = Vec::new();
    for (ci, (_, marked)) in cells.iter().enumerate() {
        if sign_condition(marked) {
            vertices.push(duals[ci].clone());
        }
    }
    vertices.sort();
    vertices.dedup();

    // Subdivision edges: consecutive hull vertices per cell, keyed by
    // sorted endpoints; interior edges belong to two cells, boundary edges
    // to one.
    let mut edges: BTreeMap<(LatticePoint, LatticePoint), Vec<usize>> = BTreeMap::new();
    for (ci, hull) in hulls.iter().enumerate() {
        let k = hull.len();
        for t in 0..k {
            let a = hull[t];
            let b = hull[(t + 1) % k];
            let key = if a <= b { (a, b) } else { (b, a) };
            edges.entry(key).or_default().push(ci);
        }
    }

    let mut segments = Vec::new();
    let mut rays = Vec::new();
    for ((a, b), incident) in &edges {
        let on_edge: BTreeSet<usize> = incident
            .iter()
            .flat_map(|&ci| cells[ci].1.iter().copied())
            .filter(|&i| on_segment(f.support[i], *a, *b))
            .collect();
        if !sign_condition(&on_edge) {
            continue;
        }
        let weight = lattice_length(*a, *b);
        match incident.as_slice() {
            [c1, c2] => {
                let (mut p, mut q) = (duals[*c1].clone(), duals[*c2].clone());
                if p > q {
                    std::mem::swap(&mut p, &mut q);
                }
                segments.push(Segment { a: p, b: q, weight });
            }
            [c1] => {
                // Outward primitive normal: perpendicular to the edge,
                // pointing away from the cell.
                let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                let g = gcd64(dx.abs(), dy.abs());
                let mut n = (dy / g, -dx / g);
                let hull = &hulls[*c1];
                let inward: i64 = hull
                    .iter()
                    .map(|p| n.0 * (p.0 - a.0) + n.1 * (p.1 - a.1))
                    .sum();
                if inward > 0 {
                    n = (-n.0, -n.1);
                }
                rays.push(Ray { base: duals[*c1].clone(), dir: n, weight });
            }
            _ => unreachable!("an edge bounds at most two cells"),
        }
    }
    segments.sort();
    rays.sort();
    Ok(Chart { sign_index: v, vertices, segments, rays })
}

/// Klein witness for sign equivalence: the `v` with
/// `s = klein_image(support, v) · s'`, if any.
pub fn sign_equivalent(
    s: &SignVector,
    s2: &SignVector,
    support: &[LatticePoint],
) -> Result<Option<Klein>, TropError> {
    if s.len() != s2.len() || s.len() != support.len() {
        return Err(TropError::LengthMismatch(s.len(), s2.len()));
    }
    for v in KLEIN_ELEMENTS {
        let image = klein_image(support, v);
        if &image.product(s2).expect("lengths checked") == s {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Two signed lifted points define the same class in the signed secondary
/// fan iff their sign distributions are Klein-equivalent and their lifts
/// induce the same marked subdivision.
pub fn same_secondary_class(
    p: (&SignVector, &[Rat]),
    p2: (&SignVector, &[Rat]),
    support: &[LatticePoint],
) -> Result<bool, TropError> {
    if sign_equivalent(p.0, p2.0, support)?.is_none() {
        return Ok(false);
    }
    let t = regular_marked_subdivision(support, p.1)?;
    let t2 = regular_marked_subdivision(support, p2.1)?;
    Ok(t.cells == t2.cells)
}

/// Action of the lineality group: signs move by ψ(v), lifts by the affine
/// function `r₀ + r₁·α_x + r₂·α_y` of the support. The secondary class is
/// unchanged; charts permute (`v'`-chart of the result is the
/// `v·v'`-chart of the input) and translate by `(-r₁, -r₂)`.
pub fn lineality_act(
    p: (&SignVector, &[Rat]),
    v: Klein,
    r: &[Rat; 3],
    support: &[LatticePoint],
) -> Result<(SignVector, Vec<Rat>), TropError> {
    let (s, u) = p;
    if s.len() != support.len() || u.len() != support.len() {
        return Err(TropError::LengthMismatch(s.len(), support.len()));
    }
    let signs = klein_image(support, v).product(s).expect("lengths checked");
    let lifts = support
        .iter()
        .zip(u)
        .map(|(&(ax, ay), ui)| ui + &r[0] + &r[1] * rat_int(ax) + &r[2] * rat_int(ay))
        .collect();
    Ok((signs, lifts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{mixed_feasible, rat};
    use rand::{Rng, SeedableRng};

    fn sv(s: &str) -> SignVector {
        SignVector::parse(s).unwrap()
    }

    fn qp(a: i64, b: i64) -> QPoint {
        [rat_int(a), rat_int(b)]
    }

    fn w_int(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    /// Degree-2 support in the fixed order 1, x, y, x², xy, y².
    fn conic_support() -> Vec<LatticePoint> {
        vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    }

    fn conic_poly() -> RealTropPoly {
        RealTropPoly::new(conic_support(), sv("+-+-++"), w_int(&[-1, 0, 0, -1, 0, 0])).unwrap()
    }

    const PP: Klein = [Sign::Plus, Sign::Plus];
    const PM: Klein = [Sign::Plus, Sign::Minus];
    const MP: Klein = [Sign::Minus, Sign::Plus];
    const MM: Klein = [Sign::Minus, Sign::Minus];

    #[test]
    fn eval_single_monomial() {
        let f = RealTropPoly::new(vec![(2, 3)], sv("+"), w_int(&[5])).unwrap();
        let (val, argmax) = eval_modulus(&f, &[rat(1, 2), rat_int(-1)]);
        assert_eq!(val, rat_int(5) + rat_int(1) - rat_int(3));
        assert_eq!(argmax, [0].into_iter().collect());
    }

    #[test]
    fn eval_conic_at_origin() {
        let (val, argmax) = eval_modulus(&conic_poly(), &qp(0, 0));
        assert_eq!(val, rat_int(0));
        assert_eq!(argmax, [1, 2, 4, 5].into_iter().collect());
    }

    #[test]
    fn eval_conic_at_minus_one() {
        let (val, argmax) = eval_modulus(&conic_poly(), &qp(-1, -1));
        assert_eq!(val, rat_int(-1));
        assert_eq!(argmax, [0, 1, 2].into_iter().collect());
    }

    #[test]
    fn subdivision_of_unimodular_triangle() {
        let support = vec![(0, 0), (1, 0), (0, 1)];
        let t = regular_marked_subdivision(&support, &w_int(&[3, -1, 2])).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert_eq!(t.cells[0].marked, (0..3).collect());
        assert_eq!(t.marked_points(), (0..3).collect());
    }

    #[test]
    fn subdivision_of_conic_example() {
        let t = regular_marked_subdivision(&conic_support(), &w_int(&[-1, 0, 0, -1, 0, 0])).unwrap();
        assert_eq!(t.cells.len(), 3);
        let marked_sets: Vec<BTreeSet<usize>> =
            t.cells.iter().map(|c| c.marked.clone()).collect();
        // Triangle 1, x, y; quadrangle x, y, xy, y²; triangle x, x², xy.
        assert!(marked_sets.contains(&[0, 1, 2].into_iter().collect()));
        assert!(marked_sets.contains(&[1, 2, 4, 5].into_iter().collect()));
        assert!(marked_sets.contains(&[1, 3, 4].into_iter().collect()));
        assert_eq!(t.marked_points(), (0..6).collect());
        let quad = t
            .cells
            .iter()
            .find(|c| c.marked.len() == 4)
            .unwrap();
        assert_eq!(
            quad.vertices.iter().copied().collect::<BTreeSet<_>>(),
            [(1, 0), (0, 1), (1, 1), (0, 2)].into_iter().collect()
        );
    }

    #[test]
    fn unmarked_point_strictly_below() {
        // Unit-square hull with the interior-ish point (1,1) lifted low.
        let support = vec![(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)];
        let t = regular_marked_subdivision(&support, &w_int(&[0, 0, 0, 0, -1])).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert!(!t.marked_points().contains(&4));
    }

    /// Oracle: the lift of `i` lies on an upper facet iff there is an
    /// affine `ℓ` with `ℓ(α_i) = u_i` and `ℓ ≥ u` on the support. The
    /// affine system is homogenized with an extra variable `t > 0` and
    /// decided by the independent mixed eliminator.
    fn marked_oracle(support: &[LatticePoint], u: &[Rat], i: usize) -> bool {
        let row = |t: usize| -> Vec<Rat> {
            vec![rat_int(support[t].0), rat_int(support[t].1), rat_int(1), -u[t].clone()]
        };
        let mut weak: Vec<Vec<Rat>> = (0..support.len()).map(row).collect();
        let eq = row(i);
        weak.push(eq.iter().map(|c| -c).collect());
        weak.push(eq);
        let strict = vec![vec![rat_int(0), rat_int(0), rat_int(0), rat_int(1)]];
        mixed_feasible(&weak, &strict, 4)
    }

    #[test]
    fn marking_agrees_with_feasibility_oracle() {
        let support = conic_support();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..60 {
            let u: Vec<Rat> = (0..6).map(|_| rat_int(rng.gen_range(-3..=3))).collect();
            let t = regular_marked_subdivision(&support, &u).unwrap();
            let marked = t.marked_points();
            for i in 0..6 {
                assert_eq!(
                    marked.contains(&i),
                    marked_oracle(&support, &u, i),
                    "u={u:?} i={i}"
                );
            }
        }
    }

    #[test]
    fn cell_areas_tile_the_support_polygon() {
        let support = conic_support();
        let total = double_area(&convex_hull(&support));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for _ in 0..40 {
            let u: Vec<Rat> = (0..6).map(|_| rat_int(rng.gen_range(-3..=3))).collect();
            let t = regular_marked_subdivision(&support, &u).unwrap();
            let sum: i64 = t.cells.iter().map(|c| double_area(&c.vertices)).sum();
            assert_eq!(sum, total, "u={u:?}");
        }
    }

    #[test]
    fn klein_identity_is_all_plus() {
        assert_eq!(klein_image(&conic_support(), PP), sv("++++++"));
    }

    #[test]
    fn klein_minus_plus_by_x_parity() {
        assert_eq!(klein_image(&conic_support(), MP), sv("+-++-+"));
    }

    #[test]
    fn klein_is_a_homomorphism() {
        let support = conic_support();
        for v in KLEIN_ELEMENTS {
            for v2 in KLEIN_ELEMENTS {
                let lhs = klein_image(&support, v)
                    .product(&klein_image(&support, v2))
                    .unwrap();
                assert_eq!(lhs, klein_image(&support, klein_product(v, v2)));
            }
        }
    }

    #[test]
    fn variant_identity() {
        let t = regular_marked_subdivision(&conic_support(), &w_int(&[-1, 0, 0, -1, 0, 0])).unwrap();
        let s = sv("+-+-++");
        let tv = signed_subdivision_variant(&t, &s, PP).unwrap();
        assert_eq!(tv.signs, Some(s));
        assert_eq!(tv.cells, t.cells);
    }

    #[test]
    fn variant_signs_match_figure() {
        let t = regular_marked_subdivision(&conic_support(), &w_int(&[-1, 0, 0, -1, 0, 0])).unwrap();
        let s = sv("+-+-++");
        assert_eq!(
            signed_subdivision_variant(&t, &s, PM).unwrap().signs,
            Some(sv("+----+"))
        );
        assert_eq!(
            signed_subdivision_variant(&t, &s, MM).unwrap().signs,
            Some(sv("++--++"))
        );
    }

    #[test]
    fn single_term_hypersurface_is_empty() {
        let f = RealTropPoly::new(vec![(1, 1)], sv("-"), w_int(&[0])).unwrap();
        for v in KLEIN_ELEMENTS {
            assert!(!point_in_real_hypersurface(&f, v, &qp(0, 0)));
            assert!(!point_in_real_hypersurface(&f, v, &[rat(7, 3), rat(-2, 5)]));
        }
    }

    #[test]
    fn conic_membership_at_origin() {
        assert!(point_in_real_hypersurface(&conic_poly(), PP, &qp(0, 0)));
    }

    #[test]
    fn conic_non_membership_in_minus_plus_chart() {
        assert!(!point_in_real_hypersurface(&conic_poly(), MP, &qp(-1, -1)));
    }

    #[test]
    fn conic_chart_plus_plus() {
        let chart = compute_chart(&conic_poly(), PP).unwrap();
        assert_eq!(chart.vertices, vec![qp(-1, -1), qp(0, 0), qp(1, 0)]);
        assert_eq!(
            chart.segments,
            vec![
                Segment { a: qp(-1, -1), b: qp(0, 0), weight: 1 },
                Segment { a: qp(0, 0), b: qp(1, 0), weight: 1 },
            ]
        );
        assert_eq!(
            chart.rays,
            vec![
                Ray { base: qp(-1, -1), dir: (0, -1), weight: 1 },
                Ray { base: qp(1, 0), dir: (1, 1), weight: 1 },
            ]
        );
    }

    #[test]
    fn conic_chart_minus_plus() {
        let chart = compute_chart(&conic_poly(), MP).unwrap();
        assert_eq!(chart.vertices, vec![qp(0, 0), qp(1, 0)]);
        assert_eq!(
            chart.segments,
            vec![Segment { a: qp(0, 0), b: qp(1, 0), weight: 1 }]
        );
        assert_eq!(
            chart.rays,
            vec![
                Ray { base: qp(0, 0), dir: (1, 1), weight: 1 },
                Ray { base: qp(1, 0), dir: (0, -1), weight: 1 },
            ]
        );
    }

    #[test]
    fn all_plus_square_chart_is_empty() {
        let f = RealTropPoly::new(
            vec![(0, 0), (1, 0), (0, 1), (1, 1)],
            sv("++++"),
            w_int(&[0, 0, 0, 0]),
        )
        .unwrap();
        let chart = compute_chart(&f, PP).unwrap();
        assert!(chart.is_empty());
    }

    /// Rational samples in the relative interior of every chart piece.
    fn sample_points(chart: &Chart, per_piece: usize) -> Vec<QPoint> {
        let mut out = Vec::new();
        for seg in &chart.segments {
            for k in 1..=per_piece {
                let t = rat(k as i64, per_piece as i64 + 1);
                let omt = rat_int(1) - &t;
                out.push([
                    &seg.a[0] * &omt + &seg.b[0] * &t,
                    &seg.a[1] * &omt + &seg.b[1] * &t,
                ]);
            }
        }
        for ray in &chart.rays {
            for k in 1..=per_piece {
                let t = rat(k as i64, 3);
                out.push([
                    &ray.base[0] + rat_int(ray.dir.0) * &t,
                    &ray.base[1] + rat_int(ray.dir.1) * &t,
                ]);
            }
        }
        out.extend(chart.vertices.iter().cloned());
        out
    }

    #[test]
    fn chart_pieces_lie_on_the_real_hypersurface() {
        let f = conic_poly();
        for v in KLEIN_ELEMENTS {
            let chart = compute_chart(&f, v).unwrap();
            for x in sample_points(&chart, 25) {
                assert!(point_in_real_hypersurface(&f, v, &x), "v={v:?} x={x:?}");
                // Forgetting signs, every chart point is on the unsigned
                // tropical curve of the modulus.
                let (_, argmax) = eval_modulus(&f, &x);
                assert!(argmax.len() >= 2);
            }
        }
    }

    #[test]
    fn excluded_pieces_fail_membership() {
        // The (+,+)-chart segment ((-1,-1),(0,0)) is excluded from the
        // (-,+)-chart; its interior points are on the unsigned curve but
        // not on that chart.
        let f = conic_poly();
        let mid = [rat(-1, 2), rat(-1, 2)];
        let (_, argmax) = eval_modulus(&f, &mid);
        assert!(argmax.len() >= 2);
        assert!(point_in_real_hypersurface(&f, PP, &mid));
        assert!(!point_in_real_hypersurface(&f, MP, &mid));
    }

    #[test]
    fn soundness_on_random_instances() {
        let support = conic_support();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..30 {
            let u: Vec<Rat> = (0..6).map(|_| rat_int(rng.gen_range(-3..=3))).collect();
            let s = SignVector::new(
                (0..6)
                    .map(|_| if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus })
                    .collect(),
            );
            let f = RealTropPoly::new(support.clone(), s, u).unwrap();
            for v in KLEIN_ELEMENTS {
                let chart = compute_chart(&f, v).unwrap();
                for x in sample_points(&chart, 4) {
                    assert!(point_in_real_hypersurface(&f, v, &x));
                }
            }
        }
    }

    #[test]
    fn klein_action_permutes_charts() {
        let support = conic_support();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let u: Vec<Rat> = (0..6).map(|_| rat_int(rng.gen_range(-2..=2))).collect();
            let s = SignVector::new(
                (0..6)
                    .map(|_| if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus })
                    .collect(),
            );
            let f = RealTropPoly::new(support.clone(), s.clone(), u.clone()).unwrap();
            for v in KLEIN_ELEMENTS {
                let twisted = klein_image(&support, v).product(&s).unwrap();
                let f2 = RealTropPoly::new(support.clone(), twisted, u.clone()).unwrap();
                for v2 in KLEIN_ELEMENTS {
                    let lhs = compute_chart(&f2, v2).unwrap();
                    let rhs = compute_chart(&f, klein_product(v, v2)).unwrap();
                    assert_eq!(lhs.vertices, rhs.vertices);
                    assert_eq!(lhs.segments, rhs.segments);
                    assert_eq!(lhs.rays, rhs.rays);
                }
            }
        }
    }

    #[test]
    fn sign_equivalence_witnesses() {
        let support = conic_support();
        let s = sv("+-+-++");
        assert_eq!(sign_equivalent(&s, &s, &support).unwrap(), Some(PP));
        assert_eq!(
            sign_equivalent(&sv("+-+-++"), &sv("+----+"), &support).unwrap(),
            Some(PM)
        );
        // -s is not Klein-equivalent to s when (0,0) is in the support:
        // ψ(v) is always + there.
        assert_eq!(sign_equivalent(&s.negate(), &s, &support).unwrap(), None);
    }

    #[test]
    fn secondary_class_examples() {
        let support = conic_support();
        let s = sv("+-+-++");
        let u = w_int(&[-1, 0, 0, -1, 0, 0]);
        assert!(same_secondary_class((&s, &u), (&s, &u), &support).unwrap());
        for v in KLEIN_ELEMENTS {
            let twisted = klein_image(&support, v).product(&s).unwrap();
            assert!(same_secondary_class((&s, &u), (&twisted, &u), &support).unwrap());
        }
        let flat = w_int(&[0, 0, 0, 0, 0, 0]);
        assert!(!same_secondary_class((&s, &u), (&s, &flat), &support).unwrap());
    }

    #[test]
    fn lineality_identity() {
        let support = conic_support();
        let s = sv("+-+-++");
        let u = w_int(&[-1, 0, 0, -1, 0, 0]);
        let (s2, u2) =
            lineality_act((&s, &u), PP, &[rat_int(0), rat_int(0), rat_int(0)], &support).unwrap();
        assert_eq!(s2, s);
        assert_eq!(u2, u);
    }

    #[test]
    fn lineality_preserves_secondary_class() {
        let support = conic_support();
        let s = sv("+-+-++");
        let u = w_int(&[-1, 0, 0, -1, 0, 0]);
        let (s2, u2) =
            lineality_act((&s, &u), MP, &[rat(1, 2), rat_int(2), rat_int(-1)], &support).unwrap();
        assert!(same_secondary_class((&s, &u), (&s2, &u2), &support).unwrap());
    }

    #[test]
    fn lineality_sign_component_permutes_charts() {
        let support = conic_support();
        let s = sv("+-+-++");
        let u = w_int(&[-1, 0, 0, -1, 0, 0]);
        let (s2, u2) =
            lineality_act((&s, &u), PM, &[rat_int(0), rat_int(0), rat_int(0)], &support).unwrap();
        let f = RealTropPoly::new(support.clone(), s, u).unwrap();
        let f2 = RealTropPoly::new(support, s2, u2).unwrap();
        let lhs = compute_chart(&f2, PP).unwrap();
        let rhs = compute_chart(&f, PM).unwrap();
        assert_eq!(lhs.vertices, rhs.vertices);
        assert_eq!(lhs.segments, rhs.segments);
        assert_eq!(lhs.rays, rhs.rays);
    }

    #[test]
    fn lineality_lift_component_translates_charts() {
        let support = conic_support();
        let s = sv("+-+-++");
        let u = w_int(&[-1, 0, 0, -1, 0, 0]);
        let (s2, u2) =
            lineality_act((&s, &u), PP, &[rat_int(0), rat_int(1), rat_int(0)], &support).unwrap();
        let f = RealTropPoly::new(support.clone(), s, u).unwrap();
        let f2 = RealTropPoly::new(support, s2, u2).unwrap();
        // Adding α_x to the lifts shifts every tie locus by (-1, 0).
        for v in KLEIN_ELEMENTS {
            let shifted = compute_chart(&f2, v).unwrap();
            let original = compute_chart(&f, v).unwrap();
            let dx = rat_int(-1);
            let moved: Vec<QPoint> = original
                .vertices
                .iter()
                .map(|p| [&p[0] + &dx, p[1].clone()])
                .collect();
            assert_eq!(shifted.vertices, moved);
            for (a, b) in shifted.segments.iter().zip(&original.segments) {
                assert_eq!(a.a[0], &b.a[0] + &dx);
                assert_eq!(a.a[1], b.a[1]);
                assert_eq!(a.b[0], &b.b[0] + &dx);
                assert_eq!(a.weight, b.weight);
            }
            for (a, b) in shifted.rays.iter().zip(&original.rays) {
                assert_eq!(a.base[0], &b.base[0] + &dx);
                assert_eq!(a.base[1], b.base[1]);
                assert_eq!(a.dir, b.dir);
                assert_eq!(a.weight, b.weight);
            }
        }
    }
}
