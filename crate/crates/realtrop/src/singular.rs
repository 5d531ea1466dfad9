//! Machinery for real plane tropical curves that are singular at the
//! origin of the `(+,+)` chart: the lifted point matrix and its Gale
//! dual, planar circuit typing, the sign laws turning maximal flags into
//! `s`-flags, membership in the real tropicalized singular family, and
//! the five-case classification for subdivisions of maximal dimensional
//! type.

use std::collections::BTreeSet;

use num::Zero;
use thiserror::Error;

use crate::bergman::{bergman_membership, BergmanError, FlagOfFlats, RouteMode};
use crate::exactlin::{gale_dual, rat, rat_int, ExactLinError, QMatrix, Rat};
use crate::orientedmatroid::{
    circuits_from_matrix, validate_circuit_axioms, MatroidError, OrientedMatroid, Sign,
    SignVector, SignedCircuit,
};
use crate::tropcurve::{
    compute_chart, convex_hull, cross, double_area, eval_modulus, on_segment,
    point_in_real_hypersurface, regular_marked_subdivision, LatticePoint, QPoint, RealTropPoly,
    SignedMarkedSubdivision, TropError,
};

#[derive(Debug, Error, PartialEq)]
pub enum SingularError {
    #[error("need at least 4 support points, got {0}")]
    TooFewPoints(usize),
    #[error("support does not affinely span the plane")]
    DegenerateSupport,
    #[error("the given sign vector is not a circuit of the point matroid")]
    NotACircuit,
    #[error("flag is not a maximal flag of flats of the ideal matroid")]
    NotMaximal,
    #[error("flag matches neither the type-(a) nor the type-(b) step pattern")]
    UnclassifiableFlag,
    #[error("precondition failed: {0}")]
    PreconditionFailed(&'static str),
    #[error(transparent)]
    Lin(#[from] ExactLinError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Bergman(#[from] BergmanError),
    #[error(transparent)]
    Trop(#[from] TropError),
}

/// The data attached to a planar support for the singular-at-origin
/// family: lifted point matrix `A'`, a Gale dual `G`, and the two
/// oriented matroids realized by their columns.
#[derive(Clone, Debug)]
pub struct SingularSetup {
    pub support: Vec<LatticePoint>,
    pub aprime: QMatrix,
    pub gale: QMatrix,
    pub m_ideal: OrientedMatroid,
    pub m_points: OrientedMatroid,
    pub basis: [usize; 3],
}

/// Builds `A'` (rows: all-ones, x-coordinates, y-coordinates), a Gale
/// dual with respect to the first affinely independent basis triple in
/// index order, and the two matroids. Circuit axioms are validated for
/// both.
pub fn build_singular_setup(support: &[LatticePoint]) -> Result<SingularSetup, SingularError> {
    let m = support.len();
    if m < 4 {
        return Err(SingularError::TooFewPoints(m));
    }
    let mut basis = None;
    'outer: for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                if cross(support[i], support[j], support[k]) != 0 {
                    basis = Some([i, j, k]);
                    break 'outer;
                }
            }
        }
    }
    let basis = basis.ok_or(SingularError::DegenerateSupport)?;
    let ones: Vec<i64> = vec![1; m];
    let xs: Vec<i64> = support.iter().map(|p| p.0).collect();
    let ys: Vec<i64> = support.iter().map(|p| p.1).collect();
    let aprime = QMatrix::from_i64(&[&ones, &xs, &ys]);
    let gale = gale_dual(&aprime, basis)?;
    let m_ideal = circuits_from_matrix(&gale);
    let m_points = circuits_from_matrix(&aprime);
    validate_circuit_axioms(m_ideal.circuits(), m)
        .map_err(|_| SingularError::PreconditionFailed("ideal matroid circuit axioms"))?;
    validate_circuit_axioms(m_points.circuits(), m)
        .map_err(|_| SingularError::PreconditionFailed("point matroid circuit axioms"))?;
    Ok(SingularSetup { support: support.to_vec(), aprime, gale, m_ideal, m_points, basis })
}

/// Membership of a signed lifting `(s, u)` in the real tropicalization of
/// the singular family: for every circuit of the ideal matroid, the
/// argmax of `u` over the circuit support must contain an index where `s`
/// agrees with the circuit sign and one where it disagrees. This is the
/// signed Bergman fan condition for the ideal matroid.
pub fn singsat_membership(
    setup: &SingularSetup,
    s: &SignVector,
    u: &[Rat],
) -> Result<bool, SingularError> {
    Ok(bergman_membership(&setup.m_ideal, s, u, RouteMode::Fast)?.0)
}

/// Geometric type of a planar point circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanarCircuitType {
    /// Four points in convex position; signs alternate around the hull.
    A { vertices: [usize; 4] },
    /// Triangle with one interior point; the interior sign is opposite.
    B { triangle: [usize; 3], interior: usize },
    /// Three collinear points; the middle sign is opposite.
    C { ends: [usize; 2], middle: usize },
}

/// Classifies a circuit of the point matroid geometrically and reports
/// which indices play which role.
pub fn planar_circuit_type(
    setup: &SingularSetup,
    c: &SignedCircuit,
) -> Result<PlanarCircuitType, SingularError> {
    if !setup.m_points.circuits().contains(c) {
        return Err(SingularError::NotACircuit);
    }
    let idx: Vec<usize> = c.support().into_iter().collect();
    match idx.len() {
        3 => {
            let [i, j, k] = [idx[0], idx[1], idx[2]];
            let find_middle = |a: usize, b: usize, m: usize| {
                on_segment(setup.support[m], setup.support[a], setup.support[b])
            };
            let (ends, middle) = if find_middle(j, k, i) {
                ([j, k], i)
            } else if find_middle(i, k, j) {
                ([i, k], j)
            } else {
                ([i, j], k)
            };
            debug_assert_ne!(c.sign().get(middle), c.sign().get(ends[0]));
            debug_assert_eq!(c.sign().get(ends[0]), c.sign().get(ends[1]));
            Ok(PlanarCircuitType::C { ends, middle })
        }
        4 => {
            // Interior point, if any: inside the triangle of the rest.
            for (pos, &p) in idx.iter().enumerate() {
                let rest: Vec<usize> =
                    idx.iter().enumerate().filter(|&(t, _)| t != pos).map(|(_, &q)| q).collect();
                let tri = [setup.support[rest[0]], setup.support[rest[1]], setup.support[rest[2]]];
                if point_in_triangle(setup.support[p], tri) {
                    debug_assert!(rest
                        .iter()
                        .all(|&r| c.sign().get(r) != c.sign().get(p)));
                    return Ok(PlanarCircuitType::B {
                        triangle: [rest[0], rest[1], rest[2]],
                        interior: p,
                    });
                }
            }
            Ok(PlanarCircuitType::A { vertices: [idx[0], idx[1], idx[2], idx[3]] })
        }
        _ => Err(SingularError::NotACircuit),
    }
}

fn point_in_triangle(p: LatticePoint, tri: [LatticePoint; 3]) -> bool {
    let d1 = cross(tri[0], tri[1], p);
    let d2 = cross(tri[1], tri[2], p);
    let d3 = cross(tri[2], tri[0], p);
    (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0)
}

/// Step-pattern class of a maximal flag of the ideal matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlagClass {
    /// Top difference has 4 elements, all other steps are single.
    TypeA { top: BTreeSet<usize> },
    /// Top difference has 3 (collinear) elements and exactly one lower
    /// step is a pair.
    TypeB { top: BTreeSet<usize>, step_index: usize, pair: [usize; 2] },
}

/// Classifies a maximal flag of the ideal matroid by its step sizes.
/// The flag must have one flat per rank; a step pattern matching neither
/// type signals input outside the planar singular family.
pub fn classify_flag(
    setup: &SingularSetup,
    flag: &FlagOfFlats,
) -> Result<FlagClass, SingularError> {
    let rank = setup.m_ideal.rank()?;
    if flag.len() != rank {
        return Err(SingularError::NotMaximal);
    }
    let mut steps: Vec<BTreeSet<usize>> = Vec::new();
    let mut prev: BTreeSet<usize> = BTreeSet::new();
    for flat in flag.flats() {
        steps.push(flat.difference(&prev).copied().collect());
        prev = flat.clone();
    }
    let top = steps.last().unwrap().clone();
    let lower_sizes: Vec<usize> = steps[..steps.len() - 1].iter().map(|s| s.len()).collect();
    let class = if top.len() == 4 && lower_sizes.iter().all(|&z| z == 1) {
        FlagClass::TypeA { top }
    } else if top.len() == 3
        && lower_sizes.iter().filter(|&&z| z == 2).count() == 1
        && lower_sizes.iter().all(|&z| z == 1 || z == 2)
    {
        let step_index = lower_sizes.iter().position(|&z| z == 2).unwrap();
        let pair: Vec<usize> = steps[step_index].iter().copied().collect();
        FlagClass::TypeB { top, step_index, pair: [pair[0], pair[1]] }
    } else {
        return Err(SingularError::UnclassifiableFlag);
    };
    // Only genuine chains of flats are classified.
    for flat in flag.flats() {
        if &crate::orientedmatroid::closure_flat(&setup.m_ideal, flat)? != flat {
            return Err(SingularError::NotMaximal);
        }
    }
    Ok(class)
}

fn circuit_with_support<'a>(
    m: &'a OrientedMatroid,
    support: &BTreeSet<usize>,
) -> Option<&'a SignedCircuit> {
    m.circuits().iter().find(|c| &c.support() == support)
}

fn sign_matches_up_to_negation(
    s: &SignVector,
    c: &SignedCircuit,
    on: &BTreeSet<usize>,
) -> bool {
    let mut same = true;
    let mut opposite = true;
    for &i in on {
        if s.get(i) == c.sign().get(i) {
            opposite = false;
        } else {
            same = false;
        }
    }
    same || opposite
}

/// Sign law for type-(a) flags: the flag is an `s`-flag iff the top
/// difference is the support of a point-matroid circuit and `s` restricted
/// to it equals that circuit's signing up to global negation.
pub fn s_flag_condition_type_a(
    setup: &SingularSetup,
    flag: &FlagOfFlats,
    s: &SignVector,
) -> Result<bool, SingularError> {
    let FlagClass::TypeA { top } = classify_flag(setup, flag)? else {
        return Err(SingularError::PreconditionFailed("flag is not of type (a)"));
    };
    let Some(c) = circuit_with_support(&setup.m_points, &top) else {
        return Ok(false);
    };
    Ok(sign_matches_up_to_negation(s, c, &top))
}

/// Sign law for type-(b) flags: the collinear top triple must carry a
/// circuit signing up to negation, and the signs at the pair step are
/// equal iff the line through the triple separates the two pair points.
pub fn s_flag_condition_type_b(
    setup: &SingularSetup,
    flag: &FlagOfFlats,
    s: &SignVector,
) -> Result<bool, SingularError> {
    let FlagClass::TypeB { top, pair, .. } = classify_flag(setup, flag)? else {
        return Err(SingularError::PreconditionFailed("flag is not of type (b)"));
    };
    let Some(c) = circuit_with_support(&setup.m_points, &top) else {
        return Ok(false);
    };
    if !sign_matches_up_to_negation(s, c, &top) {
        return Ok(false);
    }
    let line: Vec<LatticePoint> = top.iter().map(|&i| setup.support[i]).collect();
    let side_a = cross(line[0], line[1], setup.support[pair[0]]);
    let side_b = cross(line[0], line[1], setup.support[pair[1]]);
    if side_a == 0 || side_b == 0 {
        return Err(SingularError::UnclassifiableFlag);
    }
    let separated = (side_a > 0) != (side_b > 0);
    Ok((s.get(pair[0]) == s.get(pair[1])) == separated)
}

/// All lattice points of the convex hull of the given points, sorted.
pub fn lattice_points_in_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let hull = convex_hull(points);
    let min_x = points.iter().map(|p| p.0).min().unwrap();
    let max_x = points.iter().map(|p| p.0).max().unwrap();
    let min_y = points.iter().map(|p| p.1).min().unwrap();
    let max_y = points.iter().map(|p| p.1).max().unwrap();
    let inside = |p: LatticePoint| -> bool {
        if hull.len() == 1 {
            return p == hull[0];
        }
        if hull.len() == 2 {
            return on_segment(p, hull[0], hull[1]);
        }
        let k = hull.len();
        (0..k).all(|t| cross(hull[t], hull[(t + 1) % k], p) >= 0)
    };
    let mut out = Vec::new();
    for x in min_x..=max_x {
        for y in min_y..=max_y {
            if inside((x, y)) {
                out.push((x, y));
            }
        }
    }
    out
}

/// A subdivision is of maximal dimensional type iff every lattice point
/// of the support polygon is a marked point of some cell.
pub fn is_max_dimensional_type(t: &SignedMarkedSubdivision) -> bool {
    let marked = t.marked_points();
    let marked_coords: BTreeSet<LatticePoint> =
        marked.iter().map(|&i| t.support[i]).collect();
    lattice_points_in_hull(&t.support)
        .into_iter()
        .all(|p| marked_coords.contains(&p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndValence {
    OneValent,
    ThreeValent,
}

/// Local picture of the singular curve around the origin in the `(+,+)`
/// chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularityClass {
    /// The origin is a 4-valent vertex, all incident edges of weight 1.
    FourValentVertex { vertex: QPoint, edge_weights: [i64; 4] },
    /// The origin is an isolated vertex; its multiplicity is the
    /// normalized lattice area of the dual circuit polygon.
    IsolatedVertexMult3 { vertex: QPoint, multiplicity: i64 },
    /// The origin is the midpoint of a weight-2 edge whose two endpoints
    /// are both 1-valent or both 3-valent.
    Weight2EdgeMidpoint { vertices: [QPoint; 2], ends: EndValence },
    /// The origin lies strictly between the 3-valent near vertex and the
    /// midpoint of a weight-2 edge; the far end is 1- or 3-valent.
    Weight2EdgeInterval {
        near_vertex: QPoint,
        far_vertex: QPoint,
        midpoint: QPoint,
        far_end: EndValence,
    },
    /// The origin lies on an infinite weight-2 edge with a 3-valent
    /// endpoint.
    Weight2InfiniteEdge { endpoint: QPoint },
}

fn valence_of(chart: &crate::tropcurve::Chart, p: &QPoint) -> usize {
    let segs = chart
        .segments
        .iter()
        .filter(|s| &s.a == p || &s.b == p)
        .count();
    let rays = chart.rays.iter().filter(|r| &r.base == p).count();
    segs + rays
}

fn end_valence(chart: &crate::tropcurve::Chart, p: &QPoint) -> Result<EndValence, SingularError> {
    match valence_of(chart, p) {
        1 => Ok(EndValence::OneValent),
        3 => Ok(EndValence::ThreeValent),
        _ => Err(SingularError::PreconditionFailed(
            "edge endpoint valence outside the classification",
        )),
    }
}

fn strictly_between(p: &QPoint, a: &QPoint, b: &QPoint) -> bool {
    // Collinear and inside the open segment.
    let cr = (&a[0] - &p[0]) * (&b[1] - &p[1]) - (&a[1] - &p[1]) * (&b[0] - &p[0]);
    if !cr.is_zero() {
        return false;
    }
    let dot = (&a[0] - &p[0]) * (&b[0] - &p[0]) + (&a[1] - &p[1]) * (&b[1] - &p[1]);
    dot < Rat::zero()
}

fn weakly_between(p: &QPoint, a: &QPoint, b: &QPoint) -> bool {
    p == a || p == b || strictly_between(p, a, b)
}

/// Classifies the local picture of the real tropical curve of `(s, u)`
/// around the origin of the `(+,+)` chart.
///
/// Preconditions: `(s, u)` lies in the real tropicalized singular family,
/// the induced subdivision is of maximal dimensional type, and the origin
/// lies on the `(+,+)` chart.
pub fn classify_singularity(
    setup: &SingularSetup,
    s: &SignVector,
    u: &[Rat],
) -> Result<SingularityClass, SingularError> {
    if !singsat_membership(setup, s, u)? {
        return Err(SingularError::PreconditionFailed(
            "lifting is not in the real tropicalized singular family",
        ));
    }
    let t = regular_marked_subdivision(&setup.support, u)?;
    if !is_max_dimensional_type(&t) {
        return Err(SingularError::PreconditionFailed(
            "subdivision is not of maximal dimensional type",
        ));
    }
    let f = RealTropPoly::new(setup.support.clone(), s.clone(), u.to_vec())?;
    let origin: QPoint = [rat_int(0), rat_int(0)];
    let plus_plus = [Sign::Plus, Sign::Plus];
    if !point_in_real_hypersurface(&f, plus_plus, &origin) {
        return Err(SingularError::PreconditionFailed(
            "origin does not lie on the (+,+) chart",
        ));
    }
    let chart = compute_chart(&f, plus_plus)?;

    if chart.vertices.contains(&origin) {
        let mut weights: Vec<i64> = chart
            .segments
            .iter()
            .filter(|e| e.a == origin || e.b == origin)
            .map(|e| e.weight)
            .chain(chart.rays.iter().filter(|r| r.base == origin).map(|r| r.weight))
            .collect();
        weights.sort();
        return match weights.len() {
            4 => Ok(SingularityClass::FourValentVertex {
                vertex: origin,
                edge_weights: [weights[0], weights[1], weights[2], weights[3]],
            }),
            0 => {
                // The dual cell is the one whose marked monomials tie at
                // the origin.
                let (_, argmax) = eval_modulus(&f, &origin);
                let cell = t
                    .cells
                    .iter()
                    .find(|c| c.marked == argmax)
                    .ok_or(SingularError::PreconditionFailed("no cell dual to the origin"))?;
                Ok(SingularityClass::IsolatedVertexMult3 {
                    vertex: origin,
                    multiplicity: double_area(&cell.vertices).abs(),
                })
            }
            _ => Err(SingularError::PreconditionFailed(
                "vertex valence outside the classification",
            )),
        };
    }

    if let Some(edge) = chart
        .segments
        .iter()
        .find(|e| strictly_between(&origin, &e.a, &e.b))
    {
        if edge.weight != 2 {
            return Err(SingularError::PreconditionFailed(
                "origin lies interior to an edge of weight != 2",
            ));
        }
        let midpoint: QPoint = [
            (&edge.a[0] + &edge.b[0]) * rat(1, 2),
            (&edge.a[1] + &edge.b[1]) * rat(1, 2),
        ];
        if origin == midpoint {
            let va = end_valence(&chart, &edge.a)?;
            let vb = end_valence(&chart, &edge.b)?;
            if va != vb {
                return Err(SingularError::PreconditionFailed(
                    "midpoint case with unequal end valences",
                ));
            }
            return Ok(SingularityClass::Weight2EdgeMidpoint {
                vertices: [edge.a.clone(), edge.b.clone()],
                ends: va,
            });
        }
        // Interval case: the origin sits between the midpoint and the
        // 3-valent near vertex.
        let (near, far) = if weakly_between(&origin, &edge.a, &midpoint) {
            (edge.a.clone(), edge.b.clone())
        } else {
            (edge.b.clone(), edge.a.clone())
        };
        if end_valence(&chart, &near)? != EndValence::ThreeValent {
            return Err(SingularError::PreconditionFailed(
                "interval case without a 3-valent near vertex",
            ));
        }
        let far_end = end_valence(&chart, &far)?;
        return Ok(SingularityClass::Weight2EdgeInterval {
            near_vertex: near,
            far_vertex: far,
            midpoint,
            far_end,
        });
    }

    if let Some(ray) = chart.rays.iter().find(|r| {
        let dx = &origin[0] - &r.base[0];
        let dy = &origin[1] - &r.base[1];
        let cr = &dx * rat_int(r.dir.1) - &dy * rat_int(r.dir.0);
        if !cr.is_zero() {
            return false;
        }
        let dot = &dx * rat_int(r.dir.0) + &dy * rat_int(r.dir.1);
        dot > Rat::zero()
    }) {
        if ray.weight != 2 {
            return Err(SingularError::PreconditionFailed(
                "origin lies interior to a ray of weight != 2",
            ));
        }
        return Ok(SingularityClass::Weight2InfiniteEdge { endpoint: ray.base.clone() });
    }

    Err(SingularError::PreconditionFailed(
        "origin is on the chart but on no identifiable piece",
    ))
}
