//! Rational polyhedra in H-representation and exact lattice-point enumeration.
//!
//! Enumeration projects the polyhedron coordinate by coordinate with exact
//! Fourier–Motzkin elimination, then walks the integer ranges from the first
//! coordinate outwards. Output is lexicographically sorted.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{hnf, solve_with_hnf, HnfResult, IntegerMatrix};
use crate::serde_util::vec_decimal;

/// `{x : eq.a x = eq.b, ineq.a x <= ineq.b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polyhedron {
    pub dim: usize,
    pub eq: ConstraintBlock,
    pub ineq: ConstraintBlock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintBlock {
    pub a: IntegerMatrix,
    #[serde(with = "vec_decimal")]
    pub b: Vec<BigInt>,
}

impl ConstraintBlock {
    fn empty(dim: usize) -> Self {
        ConstraintBlock {
            a: IntegerMatrix::zeros(0, dim),
            b: Vec::new(),
        }
    }

    fn push(&mut self, coeffs: &[BigInt], bound: BigInt) {
        let mut rows = self.a.to_rows();
        rows.push(coeffs.to_vec());
        let cols = self.a.cols();
        self.a = IntegerMatrix::new(rows.len(), cols, rows.into_iter().flatten().collect())
            .expect("consistent row width");
        self.b.push(bound);
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

impl Polyhedron {
    /// The whole space `R^dim`.
    pub fn universe(dim: usize) -> Self {
        Polyhedron {
            dim,
            eq: ConstraintBlock::empty(dim),
            ineq: ConstraintBlock::empty(dim),
        }
    }

    pub fn new(
        dim: usize,
        eq: (IntegerMatrix, Vec<BigInt>),
        ineq: (IntegerMatrix, Vec<BigInt>),
    ) -> Result<Self> {
        for (what, (a, b)) in [("equality", &eq), ("inequality", &ineq)] {
            if a.cols() != dim || a.rows() != b.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{what} block is {}x{} with {} bounds in dimension {dim}",
                    a.rows(),
                    a.cols(),
                    b.len()
                )));
            }
        }
        Ok(Polyhedron {
            dim,
            eq: ConstraintBlock { a: eq.0, b: eq.1 },
            ineq: ConstraintBlock {
                a: ineq.0,
                b: ineq.1,
            },
        })
    }

    /// Axis-aligned box `lo <= x <= hi`.
    pub fn from_box(lo: &[i64], hi: &[i64]) -> Self {
        assert_eq!(lo.len(), hi.len());
        let dim = lo.len();
        let mut p = Self::universe(dim);
        for k in 0..dim {
            let mut e = vec![BigInt::zero(); dim];
            e[k] = BigInt::one();
            p.add_inequality(&e, BigInt::from(hi[k]));
            e[k] = -BigInt::one();
            p.add_inequality(&e, BigInt::from(-lo[k]));
        }
        p
    }

    pub fn add_inequality(&mut self, coeffs: &[BigInt], bound: BigInt) {
        assert_eq!(coeffs.len(), self.dim);
        self.ineq.push(coeffs, bound);
    }

    pub fn add_equality(&mut self, coeffs: &[BigInt], bound: BigInt) {
        assert_eq!(coeffs.len(), self.dim);
        self.eq.push(coeffs, bound);
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        let eq_ok = self
            .eq
            .a
            .mul_vec(x)
            .map(|v| v == self.eq.b)
            .unwrap_or(false);
        let ineq_ok = self
            .ineq
            .a
            .mul_vec(x)
            .map(|v| v.iter().zip(&self.ineq.b).all(|(l, r)| l <= r))
            .unwrap_or(false);
        eq_ok && ineq_ok
    }

    fn rational_constraints(&self) -> Vec<Constraint> {
        let mut out = Vec::new();
        for i in 0..self.ineq.len() {
            out.push(Constraint::from_ints(self.ineq.a.row(i), &self.ineq.b[i]));
        }
        for i in 0..self.eq.len() {
            out.push(Constraint::from_ints(self.eq.a.row(i), &self.eq.b[i]));
            let neg: Vec<BigInt> = self.eq.a.row(i).iter().map(|v| -v).collect();
            out.push(Constraint::from_ints(&neg, &-&self.eq.b[i]));
        }
        out
    }

    fn projection_chain(&self) -> Option<Vec<Vec<Constraint>>> {
        let mut levels = vec![Vec::new(); self.dim];
        let mut current = simplify(self.rational_constraints())?;
        for k in (0..self.dim).rev() {
            levels[k] = current.clone();
            current = simplify(eliminate(&current, k))?;
        }
        // `current` now only has constant rows, all satisfied.
        Some(levels)
    }
}

/// `coeffs . x <= bound` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Constraint {
    coeffs: Vec<BigRational>,
    bound: BigRational,
}

impl Constraint {
    fn from_ints(coeffs: &[BigInt], bound: &BigInt) -> Self {
        Constraint {
            coeffs: coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
            bound: BigRational::from_integer(bound.clone()),
        }
    }

    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in self.coeffs.iter_mut() {
                *c /= &lead;
            }
            self.bound /= lead;
        }
        self
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

fn eliminate(rows: &[Constraint], k: usize) -> Vec<Constraint> {
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        if r.coeffs[k].is_positive() {
            pos.push(r);
        } else if r.coeffs[k].is_negative() {
            neg.push(r);
        } else {
            out.push(r.clone());
        }
    }
    for p in &pos {
        let sp = p.coeffs[k].clone();
        for n in &neg {
            let sn = -n.coeffs[k].clone();
            let coeffs = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(a, b)| a / &sp + b / &sn)
                .collect();
            out.push(Constraint {
                coeffs,
                bound: &p.bound / &sp + &n.bound / &sn,
            });
        }
    }
    out
}

/// Drops trivially true rows and parallel duplicates (keeping the tightest);
/// `None` when some constant row is violated.
fn simplify(rows: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut tightest: BTreeMap<Vec<BigRational>, BigRational> = BTreeMap::new();
    for r in rows {
        if r.is_constant() {
            if r.bound.is_negative() {
                return None;
            }
            continue;
        }
        let r = r.normalized();
        tightest
            .entry(r.coeffs)
            .and_modify(|b| {
                if r.bound < *b {
                    *b = r.bound.clone();
                }
            })
            .or_insert(r.bound);
    }
    Some(
        tightest
            .into_iter()
            .map(|(coeffs, bound)| Constraint { coeffs, bound })
            .collect(),
    )
}

/// True iff the polyhedron contains a rational point.
pub fn rational_feasible(p: &Polyhedron) -> bool {
    p.projection_chain().is_some()
}

fn ceil_div(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

fn floor_div(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Integer range of coordinate `k` given the integer prefix `x[..k]`.
fn coordinate_range(level: &[Constraint], k: usize, prefix: &[BigInt]) -> (BigInt, BigInt) {
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for c in level {
        let ck = &c.coeffs[k];
        if ck.is_zero() {
            continue;
        }
        let mut rest = c.bound.clone();
        for (cj, xj) in c.coeffs[..k].iter().zip(prefix) {
            if !cj.is_zero() {
                rest -= cj * BigRational::from_integer(xj.clone());
            }
        }
        let v = rest / ck;
        if ck.is_positive() {
            let f = floor_div(&v);
            hi = Some(match hi {
                Some(h) if h < f => h,
                _ => f,
            });
        } else {
            let c = ceil_div(&v);
            lo = Some(match lo {
                Some(l) if l > c => l,
                _ => c,
            });
        }
    }
    (
        lo.expect("bounded below checked"),
        hi.expect("bounded above checked"),
    )
}

fn bounded_chain(p: &Polyhedron) -> Result<Option<Vec<Vec<Constraint>>>> {
    let Some(levels) = p.projection_chain() else {
        return Ok(None);
    };
    for (k, level) in levels.iter().enumerate() {
        let has_upper = level.iter().any(|c| c.coeffs[k].is_positive());
        let has_lower = level.iter().any(|c| c.coeffs[k].is_negative());
        if !(has_upper && has_lower) {
            return Err(Error::Unbounded { coordinate: k });
        }
    }
    Ok(Some(levels))
}

/// All integer points of a bounded polyhedron, lexicographically sorted.
pub fn enumerate_lattice_points(p: &Polyhedron) -> Result<Vec<Vec<BigInt>>> {
    let Some(levels) = bounded_chain(p)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(p.dim);
    walk(&levels, &mut prefix, &mut |x| out.push(x.to_vec()));
    Ok(out)
}

/// Number of integer points of a bounded polyhedron.
pub fn count_lattice_points(p: &Polyhedron) -> Result<BigInt> {
    let Some(levels) = bounded_chain(p)? else {
        return Ok(BigInt::zero());
    };
    if p.dim == 0 {
        return Ok(BigInt::one());
    }
    Ok(count_walk(&levels, &mut Vec::with_capacity(p.dim)))
}

fn walk(levels: &[Vec<Constraint>], prefix: &mut Vec<BigInt>, emit: &mut dyn FnMut(&[BigInt])) {
    let k = prefix.len();
    if k == levels.len() {
        emit(prefix);
        return;
    }
    let (lo, hi) = coordinate_range(&levels[k], k, prefix);
    let mut x = lo;
    while x <= hi {
        prefix.push(x.clone());
        walk(levels, prefix, emit);
        prefix.pop();
        x += 1;
    }
}

fn count_walk(levels: &[Vec<Constraint>], prefix: &mut Vec<BigInt>) -> BigInt {
    let k = prefix.len();
    let (lo, hi) = coordinate_range(&levels[k], k, prefix);
    if k + 1 == levels.len() {
        return if hi >= lo {
            hi - lo + 1
        } else {
            BigInt::zero()
        };
    }
    let mut total = BigInt::zero();
    let mut x = lo;
    while x <= hi {
        prefix.push(x.clone());
        total += count_walk(levels, prefix);
        prefix.pop();
        x += 1;
    }
    total
}

/// `{x : a x = b, x >= 0}`.
pub fn fiber_polytope(a: &IntegerMatrix, b: &[BigInt]) -> Result<Polyhedron> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    let neg_id = IntegerMatrix::identity(n).negate();
    Polyhedron::new(n, (a.clone(), b.to_vec()), (neg_id, vec![BigInt::zero(); n]))
}

/// Full-dimensional model of the integer points of a polyhedron with
/// equalities: `lambda -> x0 + generators * lambda` maps the integer points of
/// `q` bijectively onto those of the source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedPolytope {
    pub q: Polyhedron,
    #[serde(with = "vec_decimal")]
    pub x0: Vec<BigInt>,
    pub generators: IntegerMatrix,
}

impl ReducedPolytope {
    pub fn lift(&self, lambda: &[BigInt]) -> Vec<BigInt> {
        let shift = self
            .generators
            .mul_vec(lambda)
            .expect("lambda has one entry per generator");
        self.x0.iter().zip(shift).map(|(a, b)| a + b).collect()
    }
}

/// Eliminates the equalities of `p` through an integer particular solution
/// and a kernel basis. Returns `None` when the equalities have no integer
/// solution.
pub fn reduce_polyhedron(p: &Polyhedron) -> Result<Option<ReducedPolytope>> {
    let a = &p.eq.a;
    let res = hnf(a);
    if res.rank() < a.rows() {
        return Err(Error::RankDeficient {
            rank: res.rank(),
            rows: a.rows(),
        });
    }
    let Some(x0) = solve_with_hnf(&res, &p.eq.b) else {
        return Ok(None);
    };
    let kernel_cols: Vec<usize> = (res.rank()..p.dim).collect();
    let generators = res.u.select_columns(&kernel_cols);
    // C (x0 + G l) <= c  <=>  (C G) l <= c - C x0
    let cg = p.ineq.a.mul(&generators)?;
    let cx0 = p.ineq.a.mul_vec(&x0)?;
    let rhs: Vec<BigInt> = p.ineq.b.iter().zip(&cx0).map(|(c, v)| c - v).collect();
    let k = generators.cols();
    let q = Polyhedron::new(k, (IntegerMatrix::zeros(0, k), Vec::new()), (cg, rhs))?;
    Ok(Some(ReducedPolytope { q, x0, generators }))
}

/// Full-dimensional reduction of the fiber polytope `{x : a x = b, x >= 0}`.
pub fn reduce_to_full_dim(a: &IntegerMatrix, b: &[BigInt]) -> Result<Option<ReducedPolytope>> {
    reduce_polyhedron(&fiber_polytope(a, b)?)
}

/// Fiber reduction for a fixed matrix, reused across right-hand sides.
#[derive(Clone, Debug)]
pub struct FiberCounter {
    res: HnfResult,
    /// `-G`: the constraints `x0 + G l >= 0` read `-G l <= x0`.
    neg_generators: IntegerMatrix,
}

impl FiberCounter {
    pub fn new(a: &IntegerMatrix) -> Result<Self> {
        let res = hnf(a);
        if res.rank() < a.rows() {
            return Err(Error::RankDeficient {
                rank: res.rank(),
                rows: a.rows(),
            });
        }
        let kernel_cols: Vec<usize> = (res.rank()..a.cols()).collect();
        let neg_generators = res.u.select_columns(&kernel_cols).negate();
        Ok(FiberCounter { res, neg_generators })
    }

    /// Number of `x >= 0` with `a x = b`.
    pub fn count(&self, b: &[BigInt]) -> Result<BigInt> {
        let Some(x0) = solve_with_hnf(&self.res, b) else {
            return Ok(BigInt::zero());
        };
        let k = self.neg_generators.cols();
        let q = Polyhedron::new(
            k,
            (IntegerMatrix::zeros(0, k), Vec::new()),
            (self.neg_generators.clone(), x0),
        )?;
        count_lattice_points(&q)
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

fn on_segment(p: (i64, i64), a: (i64, i64), b: (i64, i64)) -> bool {
    cross(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

fn segments_intersect(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> bool {
    let d1 = cross(c, d, a).signum();
    let d2 = cross(c, d, b).signum();
    let d3 = cross(a, b, c).signum();
    let d4 = cross(a, b, d).signum();
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b)
}

/// Twice the signed area of a polygon.
pub fn doubled_signed_area(vertices: &[(i64, i64)]) -> i128 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (p, q) = (vertices[i], vertices[(i + 1) % n]);
            p.0 as i128 * q.1 as i128 - q.0 as i128 * p.1 as i128
        })
        .sum()
}

/// Checks that a vertex cycle bounds a simple polygon of positive area.
pub fn check_simple_polygon(vertices: &[(i64, i64)]) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::DegeneratePolygon(format!("{n} vertices")));
    }
    if doubled_signed_area(vertices) == 0 {
        return Err(Error::DegeneratePolygon("zero area".into()));
    }
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        if a == b {
            return Err(Error::DegeneratePolygon(format!("repeated vertex {i}")));
        }
        for j in i + 1..n {
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if j == i + 1 {
                if on_segment(d, a, b) || on_segment(a, c, d) {
                    return Err(Error::DegeneratePolygon(format!("edges {i} and {j} overlap")));
                }
            } else if i == 0 && j == n - 1 {
                if on_segment(c, a, b) || on_segment(b, c, d) {
                    return Err(Error::DegeneratePolygon(format!("edges {i} and {j} overlap")));
                }
            } else if segments_intersect(a, b, c, d) {
                return Err(Error::DegeneratePolygon(format!(
                    "edges {i} and {j} intersect"
                )));
            }
        }
    }
    Ok(())
}

/// Lattice-point count of a simple lattice polygon from its area and boundary.
pub fn pick_count(vertices: &[(i64, i64)]) -> Result<BigInt> {
    check_simple_polygon(vertices)?;
    let doubled_area = doubled_signed_area(vertices).abs();
    let n = vertices.len();
    let boundary: i128 = (0..n)
        .map(|i| {
            let (p, q) = (vertices[i], vertices[(i + 1) % n]);
            ((q.0 - p.0).abs() as i128).gcd(&((q.1 - p.1).abs() as i128))
        })
        .sum();
    // A + B/2 + 1 with A = doubled_area / 2.
    Ok(BigInt::from((doubled_area + boundary) / 2 + 1))
}

/// Counter-clockwise convex hull of planar points (collinear points dropped).
pub fn convex_hull_2d(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
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

/// H-representation of a convex polygon given by cyclically ordered vertices.
pub fn convex_polygon_polyhedron(vertices: &[(i64, i64)]) -> Result<Polyhedron> {
    check_simple_polygon(vertices)?;
    let mut vs = vertices.to_vec();
    if doubled_signed_area(&vs) < 0 {
        vs.reverse();
    }
    let n = vs.len();
    for i in 0..n {
        if cross(vs[i], vs[(i + 1) % n], vs[(i + 2) % n]) <= 0 {
            return Err(Error::NonConvex {
                vertex: (i + 1) % n,
            });
        }
    }
    let mut p = Polyhedron::universe(2);
    for i in 0..n {
        let (a, b) = (vs[i], vs[(i + 1) % n]);
        let (ex, ey) = (b.0 - a.0, b.1 - a.1);
        // interior on the left: ey * x - ex * y <= ey * a.x - ex * a.y
        p.add_inequality(
            &[BigInt::from(ey), BigInt::from(-ex)],
            BigInt::from(ey as i128 * a.0 as i128 - ex as i128 * a.1 as i128),
        );
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::bigvec;
    use proptest::prelude::*;

    fn a_3589() -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(&[[3, 5, 8, 9], [1, 1, 1, 1]])
    }

    fn points(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|p| bigvec(p)).collect()
    }

    #[test]
    fn fiber_polytope_shape_and_points() {
        let p = fiber_polytope(&a_3589(), &bigvec(&[30, 5])).unwrap();
        assert_eq!(p.dim, 4);
        assert_eq!(p.eq.len(), 2);
        assert_eq!(p.ineq.len(), 4);
        assert_eq!(
            enumerate_lattice_points(&p).unwrap(),
            points(&[&[1, 2, 1, 1], &[2, 0, 3, 0]])
        );

        let a = IntegerMatrix::from_i64_rows(&[[2, 3], [1, 1]]);
        let p = fiber_polytope(&a, &bigvec(&[7, 3])).unwrap();
        assert_eq!(enumerate_lattice_points(&p).unwrap(), points(&[&[2, 1]]));
        let p = fiber_polytope(&a, &bigvec(&[1, 1])).unwrap();
        assert!(enumerate_lattice_points(&p).unwrap().is_empty());
    }

    #[test]
    fn reduction_of_weight_fiber() {
        let r = reduce_to_full_dim(&a_3589(), &bigvec(&[30, 5]))
            .unwrap()
            .unwrap();
        assert_eq!(r.q.dim, 2);
        let pts = enumerate_lattice_points(&r.q).unwrap();
        assert_eq!(pts.len(), 2);
        let mut lifted: Vec<_> = pts.iter().map(|l| r.lift(l)).collect();
        lifted.sort();
        assert_eq!(lifted, points(&[&[1, 2, 1, 1], &[2, 0, 3, 0]]));
    }

    #[test]
    fn reduction_without_equalities_is_identity() {
        let p = Polyhedron::from_box(&[0, 0], &[2, 3]);
        let r = reduce_polyhedron(&p).unwrap().unwrap();
        assert_eq!(r.generators, IntegerMatrix::identity(2));
        assert_eq!(r.x0, bigvec(&[0, 0]));
        assert_eq!(count_lattice_points(&r.q).unwrap(), BigInt::from(12));
    }

    #[test]
    fn reduction_parity_and_rank_errors() {
        let a = IntegerMatrix::from_i64_rows(&[[2]]);
        assert_eq!(reduce_to_full_dim(&a, &bigvec(&[1])).unwrap(), None);
        let a = IntegerMatrix::from_i64_rows(&[[1, 2], [2, 4]]);
        assert!(matches!(
            reduce_to_full_dim(&a, &bigvec(&[1, 2])),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn enumerate_small_shapes() {
        let sq = Polyhedron::from_box(&[0, 0], &[1, 1]);
        assert_eq!(enumerate_lattice_points(&sq).unwrap().len(), 4);
        let tri = convex_polygon_polyhedron(&[(0, 0), (2, 0), (0, 2)]).unwrap();
        assert_eq!(enumerate_lattice_points(&tri).unwrap().len(), 6);
        assert_eq!(count_lattice_points(&tri).unwrap(), BigInt::from(6));
    }

    #[test]
    fn unbounded_is_distinct_from_empty() {
        let mut p = Polyhedron::universe(2);
        p.add_inequality(&bigvec(&[-1, 0]), BigInt::zero());
        p.add_inequality(&bigvec(&[1, 0]), BigInt::from(3));
        assert!(matches!(
            enumerate_lattice_points(&p),
            Err(Error::Unbounded { coordinate: 1 })
        ));
        // Empty and unbounded-looking: emptiness wins.
        let mut p = Polyhedron::universe(2);
        p.add_inequality(&bigvec(&[1, 0]), BigInt::zero());
        p.add_inequality(&bigvec(&[-1, 0]), BigInt::from(-1));
        assert_eq!(enumerate_lattice_points(&p).unwrap(), Vec::<Vec<BigInt>>::new());
    }

    #[test]
    fn rational_feasibility_examples() {
        assert!(rational_feasible(&Polyhedron::from_box(&[0, 0], &[1, 1])));
        let mut p = Polyhedron::universe(1);
        p.add_inequality(&bigvec(&[1]), BigInt::zero());
        p.add_inequality(&bigvec(&[-1]), BigInt::from(-1));
        assert!(!rational_feasible(&p));

        // (1,1) in conv{(3,0),(0,3)} + R^2_{>=0}: lambda*(3,0) + (1-lambda)*(0,3) <= (1,1)
        // needs 3 lambda <= 1 and 3 - 3 lambda <= 1.
        let mut p = Polyhedron::universe(1);
        p.add_inequality(&bigvec(&[3]), BigInt::from(1));
        p.add_inequality(&bigvec(&[-3]), BigInt::from(-2));
        p.add_inequality(&bigvec(&[-1]), BigInt::zero());
        p.add_inequality(&bigvec(&[1]), BigInt::one());
        assert!(!rational_feasible(&p));
    }

    #[test]
    fn rational_but_not_integer_feasible() {
        // 2x = 1 has the rational solution 1/2 and no integer one.
        let mut p = Polyhedron::from_box(&[0], &[1]);
        p.add_equality(&bigvec(&[2]), BigInt::one());
        assert!(rational_feasible(&p));
        assert!(enumerate_lattice_points(&p).unwrap().is_empty());
    }

    #[test]
    fn pick_examples() {
        assert_eq!(pick_count(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap(), BigInt::from(4));
        assert_eq!(pick_count(&[(0, 0), (2, 0), (0, 2)]).unwrap(), BigInt::from(6));
        assert_eq!(pick_count(&[(0, 0), (1, 0), (0, 1)]).unwrap(), BigInt::from(3));
        assert!(pick_count(&[(0, 0), (1, 1), (2, 2)]).is_err());
        // bow-tie
        assert!(pick_count(&[(0, 0), (2, 2), (2, 0), (0, 2)]).is_err());
    }

    #[test]
    fn polyhedron_json_shape() {
        let p = fiber_polytope(&IntegerMatrix::from_i64_rows(&[[2, 3]]), &bigvec(&[6])).unwrap();
        let v: serde_json::Value = serde_json::to_value(&p).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["eq"]["b"][0], "6");
        let back: Polyhedron = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }

    proptest! {
        #[test]
        fn pick_matches_enumeration_on_convex_hulls(
            pts in proptest::collection::vec((-5i64..=5, -5i64..=5), 3..9)
        ) {
            let hull = convex_hull_2d(&pts);
            prop_assume!(hull.len() >= 3);
            let p = convex_polygon_polyhedron(&hull).unwrap();
            let n = enumerate_lattice_points(&p).unwrap().len();
            prop_assert_eq!(pick_count(&hull).unwrap(), BigInt::from(n));
        }

        #[test]
        fn extra_inequality_never_adds_points(
            c in (-3i64..=3, -3i64..=3), bound in -4i64..=4
        ) {
            let base = Polyhedron::from_box(&[-3, -3], &[3, 3]);
            let mut cut = base.clone();
            cut.add_inequality(&bigvec(&[c.0, c.1]), BigInt::from(bound));
            let before = enumerate_lattice_points(&base).unwrap();
            let after = enumerate_lattice_points(&cut).unwrap();
            prop_assert!(after.len() <= before.len());
            for x in &after {
                prop_assert!(before.contains(x) && cut.contains(x));
            }
            if !rational_feasible(&cut) {
                prop_assert!(after.is_empty());
            }
        }

        #[test]
        fn reduced_polytope_is_a_bijection(
            cols in proptest::collection::vec((1i64..6, 1i64..3), 2..5),
            b in (0i64..25, 0i64..8),
        ) {
            let rows = [cols.iter().map(|c| c.0).collect::<Vec<_>>(), cols.iter().map(|c| c.1).collect()];
            let a = IntegerMatrix::from_i64_rows(&rows);
            prop_assume!(a.rank() == 2);
            let rhs = bigvec(&[b.0, b.1]);
            let direct = enumerate_lattice_points(&fiber_polytope(&a, &rhs).unwrap()).unwrap();
            match reduce_to_full_dim(&a, &rhs).unwrap() {
                None => prop_assert!(direct.is_empty()),
                Some(r) => {
                    let mut lifted: Vec<_> = enumerate_lattice_points(&r.q).unwrap().iter().map(|l| r.lift(l)).collect();
                    lifted.sort();
                    prop_assert_eq!(lifted, direct);
                }
            }
        }
    }
}
