//! Rational generating functions of lattice-point sets.
//!
//! A term `sign * (sum_p x^p) / prod_r (1 - x^r)` stands for the lattice points
//! of a simplicial cone. Terms are compared by expanding them as formal series
//! in a common direction (every ray made lexicographically positive) and
//! restricting to a finite box.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{solve_rational, IntegerMatrix};
use crate::polyhedra::{convex_polygon_polyhedron, enumerate_lattice_points, Polyhedron};
use crate::serde_util::nested_decimal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenFunTerm {
    pub sign: i8,
    #[serde(with = "nested_decimal")]
    pub numerator: Vec<Vec<BigInt>>,
    #[serde(with = "nested_decimal")]
    pub denominator: Vec<Vec<BigInt>>,
}

/// Signed sum of simplicial-cone terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalGenFun {
    pub terms: Vec<GenFunTerm>,
}

impl RationalGenFun {
    pub fn extend(&mut self, other: RationalGenFun) {
        self.terms.extend(other.terms);
    }
}

/// Tangent cone at a vertex: `vertex + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCone {
    pub vertex: Vec<BigRational>,
    pub rays: Vec<Vec<BigInt>>,
}

/// Primitive integer vector in the direction of a nonzero rational vector.
pub fn primitive_direction(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Tangent cones of a point, a segment in dimension one, or a convex polygon
/// given by cyclically ordered vertices.
pub fn vertex_cones(vertices: &[Vec<BigRational>]) -> Result<Vec<VertexCone>> {
    let Some(first) = vertices.first() else {
        return Err(Error::DegeneratePolygon("no vertices".into()));
    };
    let dim = first.len();
    if vertices.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch("vertices of mixed dimension".into()));
    }
    if vertices.len() == 1 {
        return Ok(vec![VertexCone {
            vertex: first.clone(),
            rays: Vec::new(),
        }]);
    }
    match dim {
        1 => {
            if vertices.len() != 2 || vertices[0] == vertices[1] {
                return Err(Error::DegeneratePolygon(
                    "a one-dimensional polytope needs two distinct endpoints".into(),
                ));
            }
            let (lo, hi) = if vertices[0][0] < vertices[1][0] {
                (&vertices[0], &vertices[1])
            } else {
                (&vertices[1], &vertices[0])
            };
            Ok(vec![
                VertexCone {
                    vertex: lo.clone(),
                    rays: vec![vec![BigInt::one()]],
                },
                VertexCone {
                    vertex: hi.clone(),
                    rays: vec![vec![-BigInt::one()]],
                },
            ])
        }
        2 => {
            let n = vertices.len();
            if n < 3 {
                return Err(Error::DegeneratePolygon(format!("{n} vertices in the plane")));
            }
            let turn = |i: usize| {
                let (a, b, c) = (&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
                let (u, v) = (sub(b, a), sub(c, b));
                &u[0] * &v[1] - &u[1] * &v[0]
            };
            let orientation = turn(0).signum();
            if orientation.is_zero() {
                return Err(Error::NonConvex { vertex: 1 });
            }
            for i in 0..n {
                if turn(i).signum() != orientation {
                    return Err(Error::NonConvex { vertex: (i + 1) % n });
                }
            }
            Ok((0..n)
                .map(|i| {
                    let v = &vertices[i];
                    let prev = &vertices[(i + n - 1) % n];
                    let next = &vertices[(i + 1) % n];
                    VertexCone {
                        vertex: v.clone(),
                        rays: vec![
                            primitive_direction(&sub(prev, v)),
                            primitive_direction(&sub(next, v)),
                        ],
                    }
                })
                .collect())
        }
        _ => Err(Error::InvalidInput(format!(
            "vertex cones are implemented in dimensions 1 and 2, got {dim}"
        ))),
    }
}

/// Coordinates of `target` in the ray basis, when it lies in their span.
fn ray_coordinates(rays: &[Vec<BigInt>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let dim = target.len();
    let matrix: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| {
            rays.iter()
                .map(|r| BigRational::from_integer(r[i].clone()))
                .collect()
        })
        .collect();
    let sol = solve_rational(&matrix, target);
    sol.solution.filter(|_| sol.rank == rays.len())
}

fn check_independent(rays: &[Vec<BigInt>], dim: usize) -> Result<()> {
    if rays.iter().any(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch("ray of wrong length".into()));
    }
    if rays.is_empty() {
        return Ok(());
    }
    let cols = IntegerMatrix::from_columns(dim, rays)?;
    if cols.rank() < rays.len() {
        return Err(Error::DependentRays);
    }
    Ok(())
}

/// Generating function of `apex + cone(rays)` for linearly independent rays:
/// numerator = lattice points of the half-open fundamental parallelepiped.
pub fn simplicial_cone_genfun(apex: &[BigRational], rays: &[Vec<BigInt>]) -> Result<RationalGenFun> {
    let dim = apex.len();
    check_independent(rays, dim)?;
    // Bounding box of the closed parallelepiped.
    let mut lo: Vec<BigRational> = apex.to_vec();
    let mut hi: Vec<BigRational> = apex.to_vec();
    for r in rays {
        for i in 0..dim {
            let ri = BigRational::from_integer(r[i].clone());
            if ri.is_negative() {
                lo[i] += ri;
            } else {
                hi[i] += ri;
            }
        }
    }
    let lo: Vec<BigInt> = lo.iter().map(|x| x.ceil().to_integer()).collect();
    let hi: Vec<BigInt> = hi.iter().map(|x| x.floor().to_integer()).collect();
    let mut numerator = Vec::new();
    for_each_box_point(&lo, &hi, &mut |p| {
        let offset = sub(&rat(p), apex);
        if let Some(c) = ray_coordinates(rays, &offset) {
            let one = BigRational::one();
            if c.iter().all(|ci| !ci.is_negative() && ci < &one) {
                numerator.push(p.to_vec());
            }
        }
    });
    Ok(RationalGenFun {
        terms: vec![GenFunTerm {
            sign: 1,
            numerator,
            denominator: rays.to_vec(),
        }],
    })
}

fn for_each_box_point(lo: &[BigInt], hi: &[BigInt], f: &mut dyn FnMut(&[BigInt])) {
    fn rec(lo: &[BigInt], hi: &[BigInt], cur: &mut Vec<BigInt>, f: &mut dyn FnMut(&[BigInt])) {
        let k = cur.len();
        if k == lo.len() {
            f(cur);
            return;
        }
        let mut x = lo[k].clone();
        while x <= hi[k] {
            cur.push(x.clone());
            rec(lo, hi, cur, f);
            cur.pop();
            x += 1;
        }
    }
    rec(lo, hi, &mut Vec::with_capacity(lo.len()), f);
}

/// Inclusive integer box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl IntBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        IntBox { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, p: &[BigInt]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (l, h))| x >= &BigInt::from(*l) && x <= &BigInt::from(*h))
    }

    fn points(&self) -> Vec<Vec<BigInt>> {
        let lo: Vec<BigInt> = self.lo.iter().map(|&v| BigInt::from(v)).collect();
        let hi: Vec<BigInt> = self.hi.iter().map(|&v| BigInt::from(v)).collect();
        let mut out = Vec::new();
        for_each_box_point(&lo, &hi, &mut |p| out.push(p.to_vec()));
        out
    }
}

/// Exact coefficients of a formal series restricted to a box; only nonzero
/// coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub bounds: IntBox,
    pub coefficients: BTreeMap<Vec<BigInt>, BigInt>,
}

impl TruncatedSeries {
    pub fn zero(bounds: IntBox) -> Self {
        TruncatedSeries {
            bounds,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn coefficient(&self, p: &[BigInt]) -> BigInt {
        self.coefficients.get(p).cloned().unwrap_or_else(BigInt::zero)
    }

    fn add(&mut self, p: Vec<BigInt>, c: BigInt) {
        let e = self.coefficients.entry(p).or_insert_with(BigInt::zero);
        *e += c;
    }

    fn prune(&mut self) {
        self.coefficients.retain(|_, c| !c.is_zero());
    }

    /// Indicator series of a set of points (points outside the box ignored).
    pub fn indicator(bounds: IntBox, points: &[Vec<BigInt>]) -> Self {
        let mut s = Self::zero(bounds);
        for p in points {
            if s.bounds.contains(p) {
                s.add(p.clone(), BigInt::one());
            }
        }
        s
    }
}

fn lex_positive(r: &[BigInt]) -> Option<bool> {
    r.iter().find(|x| !x.is_zero()).map(|x| x.is_positive())
}

/// Rewrites a term so every ray is lexicographically positive, using
/// `1/(1 - x^r) = -x^{-r} / (1 - x^{-r})`.
fn orient_term(term: &GenFunTerm) -> Result<GenFunTerm> {
    let mut sign = term.sign;
    let mut shift: Option<Vec<BigInt>> = None;
    let mut rays = Vec::with_capacity(term.denominator.len());
    for r in &term.denominator {
        match lex_positive(r) {
            None => return Err(Error::NotExpandable("zero ray in denominator".into())),
            Some(true) => rays.push(r.clone()),
            Some(false) => {
                sign = -sign;
                let s = shift.get_or_insert_with(|| vec![BigInt::zero(); r.len()]);
                for (si, ri) in s.iter_mut().zip(r) {
                    *si -= ri;
                }
                rays.push(r.iter().map(|x| -x).collect());
            }
        }
    }
    let numerator = match shift {
        None => term.numerator.clone(),
        Some(s) => term
            .numerator
            .iter()
            .map(|p| p.iter().zip(&s).map(|(a, b)| a + b).collect())
            .collect(),
    };
    Ok(GenFunTerm {
        sign,
        numerator,
        denominator: rays,
    })
}

/// Expands every term in the lexicographically positive direction and
/// returns the exact coefficients on `bounds`.
pub fn truncate(g: &RationalGenFun, bounds: &IntBox) -> Result<TruncatedSeries> {
    let dim = bounds.dim();
    let mut out = TruncatedSeries::zero(bounds.clone());
    let box_points = bounds.points();
    for term in &g.terms {
        if term.sign != 1 && term.sign != -1 {
            return Err(Error::InvalidInput(format!("term sign {}", term.sign)));
        }
        if term.numerator.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch("numerator point outside box dimension".into()));
        }
        let oriented = orient_term(term)?;
        check_independent(&oriented.denominator, dim).map_err(|e| match e {
            Error::DependentRays => {
                Error::NotExpandable("denominator rays are linearly dependent".into())
            }
            other => other,
        })?;
        let sign = BigInt::from(oriented.sign);
        for p in &oriented.numerator {
            for m in &box_points {
                let offset: Vec<BigRational> = m
                    .iter()
                    .zip(p)
                    .map(|(a, b)| BigRational::from_integer(a - b))
                    .collect();
                let hit = if oriented.denominator.is_empty() {
                    offset.iter().all(Zero::is_zero)
                } else {
                    ray_coordinates(&oriented.denominator, &offset).is_some_and(|k| {
                        k.iter().all(|ki| ki.is_integer() && !ki.is_negative())
                    })
                };
                if hit {
                    out.add(m.clone(), sign.clone());
                }
            }
        }
    }
    out.prune();
    Ok(out)
}

/// Outcome of comparing the vertex-cone sum with the polytope's own points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrionReport {
    pub holds: bool,
    pub cone_sum: TruncatedSeries,
    pub indicator: TruncatedSeries,
    pub genfun: RationalGenFun,
}

/// Sum of the vertex-cone generating functions of a lattice polytope
/// (point, segment in dimension one, or convex polygon).
pub fn vertex_cone_genfun(vertices: &[Vec<BigInt>]) -> Result<RationalGenFun> {
    let rational: Vec<Vec<BigRational>> = vertices.iter().map(|v| rat(v)).collect();
    let mut g = RationalGenFun::default();
    for cone in vertex_cones(&rational)? {
        g.extend(simplicial_cone_genfun(&cone.vertex, &cone.rays)?);
    }
    Ok(g)
}

fn polytope_points(vertices: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let dim = vertices[0].len();
    let to_i64 = |x: &BigInt| {
        i64::try_from(x).map_err(|_| Error::InvalidInput("vertex coordinate out of range".into()))
    };
    match (vertices.len(), dim) {
        (1, _) => Ok(vec![vertices[0].clone()]),
        (2, 1) => {
            let (a, b) = (to_i64(&vertices[0][0])?, to_i64(&vertices[1][0])?);
            enumerate_lattice_points(&Polyhedron::from_box(&[a.min(b)], &[a.max(b)]))
        }
        (_, 2) => {
            let vs = vertices
                .iter()
                .map(|v| Ok((to_i64(&v[0])?, to_i64(&v[1])?)))
                .collect::<Result<Vec<_>>>()?;
            enumerate_lattice_points(&convex_polygon_polyhedron(&vs)?)
        }
        _ => Err(Error::InvalidInput("unsupported polytope shape".into())),
    }
}

/// Checks `sum of vertex-cone series == indicator of P` on a box that
/// contains the polytope.
pub fn brion_check(vertices: &[Vec<BigInt>], bounds: &IntBox) -> Result<BrionReport> {
    if vertices.is_empty() {
        return Err(Error::DegeneratePolygon("no vertices".into()));
    }
    if let Some(v) = vertices.iter().find(|v| !bounds.contains(v)) {
        return Err(Error::InvalidInput(format!(
            "vertex {v:?} lies outside the comparison box"
        )));
    }
    let genfun = vertex_cone_genfun(vertices)?;
    let cone_sum = truncate(&genfun, bounds)?;
    let indicator = TruncatedSeries::indicator(bounds.clone(), &polytope_points(vertices)?);
    Ok(BrionReport {
        holds: cone_sum == indicator,
        cone_sum,
        indicator,
        genfun,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::bigvec;
    use proptest::prelude::*;

    fn rv(v: &[i64]) -> Vec<BigRational> {
        rat(&bigvec(v))
    }

    fn pts(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|p| bigvec(p)).collect()
    }

    #[test]
    fn cones_of_square_segment_triangle() {
        let sq = vertex_cones(&[rv(&[0, 0]), rv(&[1, 0]), rv(&[1, 1]), rv(&[0, 1])]).unwrap();
        assert_eq!(sq.len(), 4);
        for c in &sq {
            for r in &c.rays {
                assert!(r.iter().filter(|x| x.is_zero()).count() == 1);
            }
        }
        let seg = vertex_cones(&[rv(&[0]), rv(&[4])]).unwrap();
        assert_eq!(seg[0].rays, pts(&[&[1]]));
        assert_eq!(seg[1].rays, pts(&[&[-1]]));

        let tri = vertex_cones(&[rv(&[0, 0]), rv(&[2, 0]), rv(&[0, 2])]).unwrap();
        assert_eq!(tri[1].vertex, rv(&[2, 0]));
        assert_eq!(tri[1].rays, pts(&[&[-1, 0], &[-1, 1]]));
    }

    #[test]
    fn non_convex_is_rejected() {
        let v = [rv(&[0, 0]), rv(&[4, 0]), rv(&[1, 1]), rv(&[0, 4])];
        assert!(matches!(vertex_cones(&v), Err(Error::NonConvex { .. })));
    }

    #[test]
    fn parallelepiped_numerators() {
        let g = simplicial_cone_genfun(&rv(&[0, 0]), &pts(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(g.terms[0].numerator, pts(&[&[0, 0]]));
        let g = simplicial_cone_genfun(&rv(&[0, 0]), &pts(&[&[1, 0], &[1, 2]])).unwrap();
        assert_eq!(g.terms[0].numerator, pts(&[&[0, 0], &[1, 1]]));
        let g = simplicial_cone_genfun(&rv(&[3, 0]), &pts(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(g.terms[0].numerator, pts(&[&[3, 0]]));
        assert!(matches!(
            simplicial_cone_genfun(&rv(&[0, 0]), &pts(&[&[1, 1], &[2, 2]])),
            Err(Error::DependentRays)
        ));
    }

    #[test]
    fn rational_apex_shifts_numerator() {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let apex = vec![half.clone(), half];
        let g = simplicial_cone_genfun(&apex, &pts(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(g.terms[0].numerator, pts(&[&[1, 1]]));
    }

    #[test]
    fn truncation_examples() {
        let g = RationalGenFun {
            terms: vec![GenFunTerm {
                sign: 1,
                numerator: pts(&[&[0]]),
                denominator: pts(&[&[1]]),
            }],
        };
        let s = truncate(&g, &IntBox::new(vec![0], vec![3])).unwrap();
        for k in 0..=3 {
            assert_eq!(s.coefficient(&bigvec(&[k])), BigInt::one());
        }

        let g = simplicial_cone_genfun(&rv(&[0, 0]), &pts(&[&[1, 0], &[1, 2]])).unwrap();
        let b = IntBox::new(vec![0, 0], vec![2, 2]);
        let s = truncate(&g, &b).unwrap();
        let expected = pts(&[&[0, 0], &[1, 0], &[2, 0], &[1, 1], &[2, 1], &[1, 2], &[2, 2]]);
        assert_eq!(s, TruncatedSeries::indicator(b.clone(), &expected));

        let empty = truncate(&RationalGenFun::default(), &b).unwrap();
        assert!(empty.coefficients.is_empty());
    }

    #[test]
    fn dependent_denominator_is_not_expandable() {
        let g = RationalGenFun {
            terms: vec![GenFunTerm {
                sign: 1,
                numerator: pts(&[&[0, 0]]),
                denominator: pts(&[&[1, 0], &[2, 0]]),
            }],
        };
        assert!(matches!(
            truncate(&g, &IntBox::new(vec![0, 0], vec![2, 2])),
            Err(Error::NotExpandable(_))
        ));
    }

    #[test]
    fn brion_examples() {
        let sq = pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        let r = brion_check(&sq, &IntBox::new(vec![-2, -2], vec![3, 3])).unwrap();
        assert!(r.holds);
        assert_eq!(r.cone_sum.coefficients.len(), 4);

        let seg = pts(&[&[0], &[2]]);
        let r = brion_check(&seg, &IntBox::new(vec![-3], vec![6])).unwrap();
        assert!(r.holds);
        let support: Vec<_> = r.cone_sum.coefficients.keys().cloned().collect();
        assert_eq!(support, pts(&[&[0], &[1], &[2]]));

        let point = pts(&[&[1, 1]]);
        let r = brion_check(&point, &IntBox::new(vec![0, 0], vec![2, 2])).unwrap();
        assert!(r.holds);
        assert_eq!(r.cone_sum.coefficients.len(), 1);

        assert!(brion_check(&sq, &IntBox::new(vec![0, 0], vec![0, 0])).is_err());
    }

    #[test]
    fn genfun_json_is_a_term_list() {
        let g = simplicial_cone_genfun(&rv(&[0, 0]), &pts(&[&[1, 0], &[1, 2]])).unwrap();
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v[0]["sign"], 1);
        assert_eq!(v[0]["numerator"][1][0], "1");
        let back: RationalGenFun = serde_json::from_value(v).unwrap();
        assert_eq!(back, g);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn parallelepiped_size_is_determinant(
            r1 in (1i64..5, -3i64..4), r2 in (-3i64..4, 1i64..5)
        ) {
            let rays = pts(&[&[r1.0, r1.1], &[r2.0, r2.1]]);
            let det = r1.0 * r2.1 - r1.1 * r2.0;
            prop_assume!(det != 0);
            let g = simplicial_cone_genfun(&rv(&[0, 0]), &rays).unwrap();
            prop_assert_eq!(g.terms[0].numerator.len() as i64, det.abs());
        }

        #[test]
        fn expansion_equals_cone_points(
            r1 in (1i64..4, -2i64..3), r2 in (0i64..3, 1i64..4), apex in (-1i64..2, -1i64..2)
        ) {
            let rays = pts(&[&[r1.0, r1.1], &[r2.0, r2.1]]);
            prop_assume!(r1.0 * r2.1 - r1.1 * r2.0 != 0);
            let g = simplicial_cone_genfun(&rv(&[apex.0, apex.1]), &rays).unwrap();
            let b = IntBox::new(vec![-3, -3], vec![4, 4]);
            let s = truncate(&g, &b).unwrap();
            for p in b.points() {
                let off = sub(&rat(&p), &rv(&[apex.0, apex.1]));
                let inside = ray_coordinates(&rays, &off)
                    .is_some_and(|c| c.iter().all(|x| !x.is_negative()));
                prop_assert_eq!(s.coefficient(&p), BigInt::from(inside as i64));
            }
        }

        #[test]
        fn brion_on_random_convex_polygons(
            raw in proptest::collection::vec((-3i64..=3, -3i64..=3), 3..7)
        ) {
            let hull = crate::polyhedra::convex_hull_2d(&raw);
            prop_assume!(hull.len() >= 3);
            let vs: Vec<Vec<BigInt>> = hull.iter().map(|&(x, y)| bigvec(&[x, y])).collect();
            let r = brion_check(&vs, &IntBox::new(vec![-5, -5], vec![5, 5])).unwrap();
            prop_assert!(r.holds);
        }
    }
}
