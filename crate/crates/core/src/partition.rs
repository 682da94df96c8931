//! Vector partition functions of two-row weight matrices `[[d_1 .. d_r], [1 .. 1]]`,
//! their chambers, and certified chamber quasi-polynomials.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{bigvec, IntegerMatrix, Lattice};
use crate::poly::{interpolate, monomials_up_to, t_monomials_up_to, BivariatePoly, Sample, Underdetermined};
use crate::polyhedra::{count_lattice_points, reduce_to_full_dim, FiberCounter};
use crate::serde_util::nested_decimal;

/// Degrees `d_1 <= ... <= d_r` of a bigraded polynomial ring with
/// `deg T_i = (d_i, 1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "WeightSpec", into = "WeightSpec")]
pub struct WeightSystem {
    degrees: Vec<i64>,
    matrix: IntegerMatrix,
    /// Counts fibers of the full matrix, or of the row of ones when all
    /// degrees coincide.
    counter: Arc<FiberCounter>,
}

impl PartialEq for WeightSystem {
    fn eq(&self, other: &Self) -> bool {
        self.degrees == other.degrees
    }
}

impl Eq for WeightSystem {}

#[derive(Clone, Serialize, Deserialize)]
struct WeightSpec {
    degrees: Vec<i64>,
}

impl TryFrom<WeightSpec> for WeightSystem {
    type Error = Error;
    fn try_from(s: WeightSpec) -> Result<Self> {
        WeightSystem::new(s.degrees)
    }
}

impl From<WeightSystem> for WeightSpec {
    fn from(w: WeightSystem) -> Self {
        WeightSpec { degrees: w.degrees }
    }
}

impl WeightSystem {
    pub fn new(mut degrees: Vec<i64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidInput("weight system needs at least one degree".into()));
        }
        if let Some(d) = degrees.iter().find(|&&d| d <= 0) {
            return Err(Error::InvalidInput(format!("degree {d} is not positive")));
        }
        degrees.sort_unstable();
        let ones = vec![1i64; degrees.len()];
        let matrix = IntegerMatrix::from_i64_rows(&[degrees.clone(), ones.clone()]);
        let counted = if degrees[0] == degrees[degrees.len() - 1] {
            IntegerMatrix::from_i64_rows(&[ones])
        } else {
            matrix.clone()
        };
        let counter = Arc::new(FiberCounter::new(&counted)?);
        Ok(WeightSystem {
            degrees,
            matrix,
            counter,
        })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Number of columns, with multiplicity.
    pub fn r(&self) -> usize {
        self.degrees.len()
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn distinct_degrees(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.degrees.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Lattice spanned by `(d_i, 1)` and `(d_j, 1)`.
    pub fn pair_lattice(di: i64, dj: i64) -> Lattice {
        Lattice::from_generators(&IntegerMatrix::from_i64_rows(&[[di, dj], [1, 1]]))
    }

    /// Intersection of the pair lattices over all pairs of distinct degrees;
    /// `Z^2` when fewer than two distinct degrees exist.
    pub fn global_lattice(&self) -> Lattice {
        let ds = self.distinct_degrees();
        let mut lat = Lattice::standard(2);
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                lat = lat
                    .intersection(&Self::pair_lattice(ds[i], ds[j]))
                    .expect("planar lattices");
            }
        }
        lat
    }

    /// Number of `x in N^r` with `sum x_i d_i = mu` and `sum x_i = t`.
    pub fn evaluate(&self, mu: i64, t: i64) -> BigInt {
        let d = self.degrees[0];
        let rhs = if d == self.degrees[self.r() - 1] {
            if mu != d * t {
                return BigInt::zero();
            }
            bigvec(&[t])
        } else {
            bigvec(&[mu, t])
        };
        self.counter.count(&rhs).expect("fibers of positive gradings are bounded")
    }

    /// Hilbert function of the polynomial ring graded by the weight columns.
    pub fn hilbert_function(&self, mu: i64, t: i64) -> BigInt {
        self.evaluate(mu, t)
    }

    /// Whether `(mu, t)` lies in the cone spanned by the columns.
    pub fn in_cone(&self, mu: i64, t: i64) -> bool {
        let (lo, hi) = (self.degrees[0], self.degrees[self.r() - 1]);
        t >= 0 && lo * t <= mu && mu <= hi * t
    }
}

/// Counts nonnegative integer solutions of `a x = (mu, t)` for a two-row
/// weight matrix, through the full-dimensional reduction of the fiber.
pub fn vector_partition(a: &IntegerMatrix, mu: i64, t: i64) -> BigInt {
    let b = bigvec(&[mu, t]);
    if a.rank() == a.rows() {
        return match reduce_to_full_dim(a, &b).expect("full row rank") {
            None => BigInt::zero(),
            Some(red) => count_lattice_points(&red.q).expect("fibers of positive gradings are bounded"),
        };
    }
    // Rank one: the first row is a multiple of the second.
    let d = a.get(0, 0).clone();
    if BigInt::from(mu) != d * BigInt::from(t) {
        return BigInt::zero();
    }
    let ones = IntegerMatrix::new(1, a.cols(), a.row(1).to_vec()).expect("row copy");
    match reduce_to_full_dim(&ones, &bigvec(&[t])).expect("nonzero row") {
        None => BigInt::zero(),
        Some(red) => count_lattice_points(&red.q).expect("bounded"),
    }
}

/// Closed cone between two consecutive distinct degree rays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chamber {
    pub low_ray: [i64; 2],
    pub high_ray: [i64; 2],
    /// Period lattice of this chamber: intersection of the pair lattices whose
    /// cone contains the chamber.
    pub lattice: Lattice,
    /// Intersection over all pairs of distinct degrees.
    pub global_lattice: Lattice,
}

impl Chamber {
    /// A single ray `mu = d t` (all degrees equal).
    pub fn is_degenerate(&self) -> bool {
        self.low_ray == self.high_ray
    }

    pub fn dimension(&self) -> usize {
        if self.is_degenerate() {
            1
        } else {
            2
        }
    }

    pub fn contains(&self, mu: i64, t: i64) -> bool {
        t >= 0 && self.low_ray[0] * t <= mu && mu <= self.high_ray[0] * t
    }

    /// Interior points at distance at least `margin` (in `mu`) from both rays;
    /// for a degenerate chamber, the ray points themselves.
    pub fn interior_mu_range(&self, t: i64, margin: i64) -> RangeInclusive<i64> {
        if self.is_degenerate() {
            let m = self.low_ray[0] * t;
            return m..=m;
        }
        (self.low_ray[0] * t + margin)..=(self.high_ray[0] * t - margin)
    }
}

pub fn chamber_complex(w: &WeightSystem) -> Vec<Chamber> {
    let ds = w.distinct_degrees();
    let global = w.global_lattice();
    if ds.len() == 1 {
        return vec![Chamber {
            low_ray: [ds[0], 1],
            high_ray: [ds[0], 1],
            lattice: Lattice::standard(2),
            global_lattice: global,
        }];
    }
    (0..ds.len() - 1)
        .map(|l| {
            let mut lat = Lattice::standard(2);
            for i in 0..=l {
                for j in l + 1..ds.len() {
                    lat = lat
                        .intersection(&WeightSystem::pair_lattice(ds[i], ds[j]))
                        .expect("planar lattices");
                }
            }
            Chamber {
                low_ray: [ds[l], 1],
                high_ray: [ds[l + 1], 1],
                lattice: lat,
                global_lattice: global.clone(),
            }
        })
        .collect()
}

/// One polynomial per coset of a period lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiPolynomial {
    pub lattice: Lattice,
    pub cosets: Vec<CosetPolynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetPolynomial {
    #[serde(with = "crate::serde_util::vec_decimal")]
    pub rep: Vec<BigInt>,
    pub poly: BivariatePoly,
}

impl QuasiPolynomial {
    pub fn coset_poly(&self, mu: i64, t: i64) -> &BivariatePoly {
        let rep = self.lattice.reduce(&bigvec(&[mu, t]));
        let idx = self
            .cosets
            .binary_search_by(|c| c.rep.cmp(&rep))
            .expect("every coset has a polynomial");
        &self.cosets[idx].poly
    }

    pub fn evaluate(&self, mu: i64, t: i64) -> num_rational::BigRational {
        self.coset_poly(mu, t).eval_i64(mu, t)
    }

    pub fn max_degree(&self) -> u32 {
        self.cosets.iter().map(|c| c.poly.total_degree()).max().unwrap_or(0)
    }
}

/// Sample window: `t` range plus the `mu` distance kept from the chamber rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub t: RangeInclusive<i64>,
    pub margin: i64,
}

impl Window {
    pub fn new(t: RangeInclusive<i64>) -> Self {
        Window { t, margin: 1 }
    }

    pub fn points(&self, c: &Chamber) -> Vec<(i64, i64)> {
        self.t
            .clone()
            .flat_map(|t| c.interior_mu_range(t, self.margin).map(move |mu| (mu, t)))
            .collect()
    }
}

/// Default fitting window: `t` from `10 r` to `15 r` (at least ten values).
pub fn default_fit_window(w: &WeightSystem) -> Window {
    let start = 10 * w.r() as i64;
    Window::new(start..=start + (5 * w.r() as i64).max(10))
}

/// Default validation window: the ten `t` values after `fit`.
pub fn default_validate_window(fit: &Window) -> Window {
    let start = fit.t.end() + 1;
    Window::new(start..=start + 9)
}

/// Polynomial degree bound on a chamber: columns minus chamber dimension.
pub fn degree_bound(w: &WeightSystem, c: &Chamber) -> u32 {
    (w.r() as i64 - c.dimension() as i64).max(0) as u32
}

fn evaluate_many(w: &WeightSystem, pts: &[(i64, i64)]) -> Vec<BigInt> {
    pts.par_iter().map(|&(mu, t)| w.evaluate(mu, t)).collect()
}

/// Interpolates one polynomial per coset of the chamber lattice on `fit` and
/// certifies it against `evaluate` on every point of `validate`.
pub fn fit_quasi_polynomial(
    w: &WeightSystem,
    c: &Chamber,
    fit: &Window,
    validate: &Window,
) -> Result<QuasiPolynomial> {
    let degree = degree_bound(w, c);
    let monomials = if c.is_degenerate() {
        t_monomials_up_to(degree)
    } else {
        monomials_up_to(degree)
    };
    let lattice = c.lattice.clone();
    let fit_pts = fit.points(c);
    let fit_vals = evaluate_many(w, &fit_pts);
    let mut by_coset: BTreeMap<Vec<BigInt>, Vec<Sample>> = lattice
        .coset_representatives()
        .into_iter()
        .map(|r| (r, Vec::new()))
        .collect();
    for (&(mu, t), v) in fit_pts.iter().zip(fit_vals) {
        let rep = lattice.reduce(&bigvec(&[mu, t]));
        by_coset
            .get_mut(&rep)
            .expect("reduced vector is a coset representative")
            .push(Sample::new(mu, t, v));
    }
    let cosets = by_coset
        .into_par_iter()
        .map(|(rep, samples)| {
            let poly = interpolate(&samples, &monomials, Underdetermined::Reject)?;
            Ok(CosetPolynomial { rep, poly })
        })
        .collect::<Result<Vec<_>>>()?;
    let qp = QuasiPolynomial { lattice, cosets };
    certify(w, c, &qp, validate)?;
    Ok(qp)
}

/// Exact agreement of `qp` with `evaluate` on all window points.
pub fn certify(w: &WeightSystem, c: &Chamber, qp: &QuasiPolynomial, window: &Window) -> Result<()> {
    let pts = window.points(c);
    let vals = evaluate_many(w, &pts);
    for (&(mu, t), v) in pts.iter().zip(vals) {
        let fitted = qp.evaluate(mu, t);
        if !(fitted.is_integer() && fitted.to_integer() == v) {
            return Err(Error::ValidationMismatch {
                witness: vec![mu, t],
                expected: v.to_string(),
                fitted: fitted.to_string(),
            });
        }
    }
    Ok(())
}

/// Chamber description with its certified quasi-polynomial, as emitted by
/// the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberFit {
    #[serde(with = "nested_decimal")]
    pub rays: Vec<Vec<BigInt>>,
    pub lattice: Lattice,
    pub cosets: Vec<CosetPolynomial>,
}

impl ChamberFit {
    pub fn new(c: &Chamber, qp: QuasiPolynomial) -> Self {
        ChamberFit {
            rays: vec![bigvec(&c.low_ray), bigvec(&c.high_ray)],
            lattice: qp.lattice,
            cosets: qp.cosets,
        }
    }
}

/// Support check helper: zero outside the cone of the columns.
pub fn vanishes_outside_cone(w: &WeightSystem, mu: i64, t: i64) -> bool {
    w.in_cone(mu, t) || w.evaluate(mu, t).is_zero()
}

/// True when every value in the slice is nonnegative.
pub fn all_nonnegative(values: &[BigInt]) -> bool {
    values.iter().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    /// Brute-force count by nested loops over the first r-1 multiplicities.
    fn brute(degrees: &[i64], mu: i64, t: i64) -> i64 {
        fn rec(ds: &[i64], mu: i64, t: i64) -> i64 {
            if ds.len() == 1 {
                return (t >= 0 && mu == ds[0] * t) as i64;
            }
            (0..=t.max(-1)).map(|x| rec(&ds[1..], mu - ds[0] * x, t - x)).sum()
        }
        if t < 0 {
            return 0;
        }
        rec(degrees, mu, t)
    }

    #[test]
    fn evaluate_examples() {
        let w = WeightSystem::new(vec![3, 5, 8, 9]).unwrap();
        assert_eq!(w.evaluate(30, 5), BigInt::from(2));
        assert_eq!(w.evaluate(0, 0), BigInt::one());
        let w2 = WeightSystem::new(vec![2, 3]).unwrap();
        assert_eq!(w2.evaluate(7, 3), BigInt::one());
        assert_eq!(w2.evaluate(0, 0), BigInt::one());
        assert_eq!(w2.hilbert_function(7, 3), BigInt::one());
    }

    #[test]
    fn evaluate_matches_brute_force() {
        for ds in [vec![3, 5, 8, 9], vec![3, 5, 7, 9], vec![2, 2], vec![1, 2, 2, 4], vec![4]] {
            let w = WeightSystem::new(ds.clone()).unwrap();
            for t in 0..6 {
                for mu in -2..=9 * t + 2 {
                    assert_eq!(w.evaluate(mu, t), BigInt::from(brute(&ds, mu, t)), "{ds:?} {mu} {t}");
                }
            }
        }
    }

    #[test]
    fn support_and_symmetry() {
        let w = WeightSystem::new(vec![9, 8, 5, 3]).unwrap();
        assert_eq!(w.degrees(), &[3, 5, 8, 9]);
        let reversed = IntegerMatrix::from_i64_rows(&[[9, 8, 5, 3], [1, 1, 1, 1]]);
        for t in 0..5 {
            for mu in 0..50 {
                assert!(vanishes_outside_cone(&w, mu, t));
                assert_eq!(vector_partition(&reversed, mu, t), w.evaluate(mu, t));
            }
        }
    }

    #[test]
    fn chamber_examples() {
        let cs = chamber_complex(&WeightSystem::new(vec![3, 5, 8, 9]).unwrap());
        let rays: Vec<_> = cs.iter().map(|c| (c.low_ray, c.high_ray)).collect();
        assert_eq!(rays, vec![([3, 1], [5, 1]), ([5, 1], [8, 1]), ([8, 1], [9, 1])]);
        assert_eq!(cs[0].global_lattice.determinant(), &BigInt::from(180));
        assert_eq!(cs[0].lattice.determinant(), &BigInt::from(30));
        assert_eq!(cs[1].lattice.determinant(), &BigInt::from(180));
        assert_eq!(cs[2].lattice.determinant(), &BigInt::from(12));

        let cs = chamber_complex(&WeightSystem::new(vec![2, 3]).unwrap());
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].lattice, Lattice::standard(2));

        let cs = chamber_complex(&WeightSystem::new(vec![2, 2]).unwrap());
        assert_eq!(cs.len(), 1);
        assert!(cs[0].is_degenerate());
    }

    #[test]
    fn fit_two_three_is_constant_one() {
        let w = WeightSystem::new(vec![2, 3]).unwrap();
        let c = &chamber_complex(&w)[0];
        let qp = fit_quasi_polynomial(&w, c, &Window::new(5..=9), &Window::new(10..=14)).unwrap();
        assert_eq!(qp.cosets.len(), 1);
        assert_eq!(qp.cosets[0].poly.to_string(), "1");
    }

    #[test]
    fn fit_repeated_degree_on_ray() {
        let w = WeightSystem::new(vec![2, 2]).unwrap();
        let c = &chamber_complex(&w)[0];
        let qp = fit_quasi_polynomial(&w, c, &Window::new(1..=6), &Window::new(7..=12)).unwrap();
        assert_eq!(qp.cosets[0].poly.to_string(), "t + 1");
    }

    #[test]
    fn too_few_points_is_singular() {
        let w = WeightSystem::new(vec![2, 3, 7]).unwrap();
        let c = &chamber_complex(&w)[0];
        let err = fit_quasi_polynomial(&w, c, &Window::new(3..=3), &Window::new(4..=5));
        assert!(matches!(err, Err(Error::SingularInterpolation { .. })));
    }

    #[test]
    fn chamber_json_round_trip() {
        let w = WeightSystem::new(vec![2, 3]).unwrap();
        let c = &chamber_complex(&w)[0];
        let qp = fit_quasi_polynomial(&w, c, &Window::new(5..=9), &Window::new(10..=12)).unwrap();
        let fit = ChamberFit::new(c, qp);
        let v = serde_json::to_value(&fit).unwrap();
        assert_eq!(v["rays"][0], serde_json::json!(["2", "1"]));
        assert_eq!(v["cosets"][0]["poly"], serde_json::json!([["1", "1", 0, 0]]));
        let w2: WeightSystem = serde_json::from_str(r#"{"degrees":[3,2]}"#).unwrap();
        assert_eq!(w2, w);
        assert!(serde_json::from_str::<WeightSystem>(r#"{"degrees":[0]}"#).is_err());
    }
}
