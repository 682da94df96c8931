//! Region descriptions of Betti families: boundary lines `a t + b`, a period
//! `D`, and one polynomial per region and residue class, certified on data.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::betti::{graded_betti, BettiFamily};
use crate::error::{Error, Result};
use crate::monomial::{total_degree, MonomialIdeal};
use crate::partition::WeightSystem;
use crate::poly::{interpolate, monomials_up_to, t_monomials_up_to, BivariatePoly, PolyTerm, Sample, Underdetermined};

/// Line `mu = a t + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Line {
    pub a: i64,
    pub b: i64,
}

impl Line {
    pub fn at(&self, t: i64) -> i64 {
        self.a * t + self.b
    }

    /// Order for large `t`: slope first, then intercept.
    pub fn eventual_cmp(&self, other: &Line) -> std::cmp::Ordering {
        (self.a, self.b).cmp(&(other.a, other.b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionPoly {
    pub region: usize,
    pub j: u64,
    #[serde(with = "poly_rows")]
    pub poly: BivariatePoly,
}

mod poly_rows {
    use super::*;
    pub fn serialize<S: serde::Serializer>(p: &BivariatePoly, s: S) -> std::result::Result<S::Ok, S::Error> {
        p.to_rows().serialize(s)
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BivariatePoly, D::Error> {
        let rows = Vec::<PolyTerm>::deserialize(d)?;
        BivariatePoly::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// How the reported period was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionMetadata {
    /// Determinant of the weight lattice, the starting period.
    pub lattice_determinant: u64,
    /// Number of doublings applied before validation passed.
    pub doublings: u32,
    pub degree_cap: u32,
    pub fit: (i64, i64),
    pub validate: (i64, i64),
}

/// Lines `L_0 < ... < L_m` (for `t >= t0`) and polynomials keyed by region and
/// residue `j = (a_k t - mu) mod D`, where `a_k` is the slope of the region's
/// lower line. Region `k` is `L_k <= mu < L_{k+1}`; the last region also
/// contains `L_m`. A single line is one region supported on the line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDescription {
    pub i: usize,
    pub t0: i64,
    #[serde(rename = "D")]
    pub d: u64,
    pub lines: Vec<Line>,
    pub polys: Vec<RegionPoly>,
    pub metadata: RegionMetadata,
}

impl RegionDescription {
    pub fn region_count(&self) -> usize {
        self.lines.len().saturating_sub(1).max(usize::from(!self.lines.is_empty()))
    }

    /// Region containing `mu` at `t`, if any.
    pub fn region_of(&self, mu: i64, t: i64) -> Option<usize> {
        region_index(&self.lines, mu, t)
    }

    pub fn poly(&self, region: usize, j: u64) -> Option<&BivariatePoly> {
        self.polys
            .iter()
            .find(|p| p.region == region && p.j == j)
            .map(|p| &p.poly)
    }

    fn evaluate(&self, mu: i64, t: i64) -> Option<num_rational::BigRational> {
        let k = self.region_of(mu, t)?;
        let j = residue(self.lines[k].a, mu, t, self.d);
        Some(self.poly(k, j).map_or_else(num_rational::BigRational::zero, |p| p.eval_i64(mu, t)))
    }
}

fn residue(a: i64, mu: i64, t: i64, d: u64) -> u64 {
    (a * t - mu).rem_euclid(d as i64) as u64
}

fn region_index(lines: &[Line], mu: i64, t: i64) -> Option<usize> {
    let (first, last) = (lines.first()?, lines.last()?);
    if mu < first.at(t) || mu > last.at(t) {
        return None;
    }
    if lines.len() == 1 {
        return Some(0);
    }
    let m = lines.len() - 1;
    (0..m).rev().find(|&k| lines[k].at(t) <= mu && (mu < lines[k + 1].at(t) || k == m - 1))
}

/// Value of the description at `(mu, t)`; zero outside the outer lines.
pub fn predict(r: &RegionDescription, mu: i64, t: i64) -> Result<BigInt> {
    if t < r.t0 {
        return Err(Error::BelowThreshold { t, t0: r.t0 });
    }
    let Some(v) = r.evaluate(mu, t) else {
        return Ok(BigInt::zero());
    };
    if !v.is_integer() || v.is_negative() {
        return Err(Error::NonIntegral {
            value: v.to_string(),
            mu,
            t,
        });
    }
    Ok(v.to_integer())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionOptions {
    /// Total degree bound for region polynomials; defaults to `r - dim`, with
    /// `dim` the dimension of the cone of the weight columns.
    pub degree_cap: Option<u32>,
    /// Number of times `D` may be doubled after a failed validation.
    pub max_doublings: u32,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions {
            degree_cap: None,
            max_doublings: 3,
        }
    }
}

/// Weight system formed by the total degrees of the minimal generators.
pub fn weight_system_of(i: &MonomialIdeal) -> Result<WeightSystem> {
    WeightSystem::new(i.generators().iter().map(|g| total_degree(g) as i64).collect())
}

struct Observed<'a> {
    fam: &'a BettiFamily,
    i: usize,
}

impl Observed<'_> {
    fn get(&self, mu: i64, t: i64) -> Result<u64> {
        let table = u32::try_from(t)
            .ok()
            .and_then(|t| self.fam.table(t))
            .ok_or(Error::MissingTerm(t))?;
        Ok(u32::try_from(mu).map_or(0, |mu| table.get(self.i, mu)))
    }

    fn support(&self, t: i64) -> Result<Option<(i64, i64)>> {
        let table = u32::try_from(t)
            .ok()
            .and_then(|t| self.fam.table(t))
            .ok_or(Error::MissingTerm(t))?;
        let row = table.row(self.i);
        Ok(row.first().map(|&(lo, _)| (lo as i64, row.last().expect("nonempty").0 as i64)))
    }
}

/// Line through the given `(t, mu)` values with a slope from `slopes`;
/// ties go to the smallest `|b|`.
fn fit_line(points: &[(i64, i64)], slopes: &[i64], side: &'static str) -> Result<Line> {
    let mut best: Option<Line> = None;
    for &a in slopes {
        let b = points[0].1 - a * points[0].0;
        if points.iter().all(|&(t, mu)| mu == a * t + b) {
            let cand = Line { a, b };
            if best.is_none_or(|x| b.abs() < x.b.abs()) {
                best = Some(cand);
            }
        }
    }
    best.ok_or_else(|| Error::NoAdmissibleSlope {
        side,
        detail: format!("(t, mu) = {points:?}, slopes {slopes:?}"),
    })
}

struct FitContext<'a> {
    obs: Observed<'a>,
    fit: Vec<i64>,
    monomials: Vec<(u32, u32)>,
    d: u64,
}

impl FitContext<'_> {
    /// Per-residue polynomials for the points between `lo` and `hi` at each
    /// fit `t` (upper end included when `closed`); `None` if inconsistent.
    fn fit_region(&self, lo: &Line, hi: &Line, closed: bool) -> Result<Option<BTreeMap<u64, BivariatePoly>>> {
        let mut by_res: BTreeMap<u64, Vec<Sample>> = (0..self.d).map(|j| (j, Vec::new())).collect();
        for &t in &self.fit {
            let top = if closed { hi.at(t) } else { hi.at(t) - 1 };
            for mu in lo.at(t)..=top {
                let v = self.obs.get(mu, t)?;
                by_res
                    .get_mut(&residue(lo.a, mu, t, self.d))
                    .expect("residue below D")
                    .push(Sample::new(mu, t, v));
            }
        }
        let fitted: Vec<(u64, std::result::Result<BivariatePoly, Error>)> = by_res
            .into_par_iter()
            .map(|(j, s)| (j, interpolate(&s, &self.monomials, Underdetermined::Canonical)))
            .collect();
        let mut out = BTreeMap::new();
        for (j, r) in fitted {
            match r {
                Ok(p) => {
                    out.insert(j, p);
                }
                Err(Error::InconsistentInterpolation { .. }) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        Ok(Some(out))
    }
}

/// Compares the description with the family at every `mu` that is in the
/// observed support or between the outer lines.
fn check_t(r: &RegionDescription, obs: &Observed<'_>, t: i64) -> Result<()> {
    let mut lo = r.lines.first().map(|l| l.at(t));
    let mut hi = r.lines.last().map(|l| l.at(t));
    if let Some((s_lo, s_hi)) = obs.support(t)? {
        lo = Some(lo.map_or(s_lo, |x| x.min(s_lo)));
        hi = Some(hi.map_or(s_hi, |x| x.max(s_hi)));
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Ok(());
    };
    for mu in lo..=hi {
        let expected = obs.get(mu, t)?;
        let fitted = r.evaluate(mu, t).unwrap_or_else(num_rational::BigRational::zero);
        if fitted != num_rational::BigRational::from_integer(expected.into()) {
            return Err(Error::ValidationMismatch {
                witness: vec![r.i as i64, mu, t],
                expected: expected.to_string(),
                fitted: fitted.to_string(),
            });
        }
    }
    Ok(())
}

/// Fits boundary lines, period and region polynomials for homological degree
/// `i` on `fit`, and certifies them on `validate` and on every materialized
/// `t` from the start of `fit` on.
pub fn detect_regions(
    fam: &BettiFamily,
    i: usize,
    w: &WeightSystem,
    fit: RangeInclusive<i64>,
    validate: RangeInclusive<i64>,
    opts: &RegionOptions,
) -> Result<RegionDescription> {
    if fit.is_empty() || validate.is_empty() {
        return Err(Error::InvalidInput("fit and validation windows must be nonempty".into()));
    }
    if let Some(t) = fit.clone().chain(validate.clone()).find(|&t| {
        u32::try_from(t).ok().and_then(|t| fam.table(t)).is_none()
    }) {
        return Err(Error::MissingTerm(t));
    }
    let obs = Observed { fam, i };
    let fit_ts: Vec<i64> = fit.clone().collect();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for &t in &fit_ts {
        if let Some((lo, hi)) = obs.support(t)? {
            lower.push((t, lo));
            upper.push((t, hi));
        }
    }
    let slopes = w.distinct_degrees();
    let dim = slopes.len().min(2) as u32;
    let cap = opts.degree_cap.unwrap_or((w.r() as u32).saturating_sub(dim));
    let monomials = if dim == 1 {
        t_monomials_up_to(cap)
    } else {
        monomials_up_to(cap)
    };
    let det = u64::try_from(w.global_lattice().determinant()).expect("small lattice");
    let metadata = |doublings| RegionMetadata {
        lattice_determinant: det,
        doublings,
        degree_cap: cap,
        fit: (*fit.start(), *fit.end()),
        validate: (*validate.start(), *validate.end()),
    };

    let outer = match (lower.len(), upper.len()) {
        (0, _) => None,
        (n, _) if n < fit_ts.len() => {
            return Err(Error::NoAdmissibleSlope {
                side: "lower",
                detail: format!("support vanishes at some t of the fit window but not all: {lower:?}"),
            })
        }
        _ => Some((fit_line(&lower, &slopes, "lower")?, fit_line(&upper, &slopes, "upper")?)),
    };

    let mut last_err = None;
    for doublings in 0..=opts.max_doublings {
        let d = det << doublings;
        let ctx = FitContext {
            obs: Observed { fam, i },
            fit: fit_ts.clone(),
            monomials: monomials.clone(),
            d,
        };
        let (lines, polys) = match &outer {
            None => (Vec::new(), Vec::new()),
            Some((l0, lm)) => build_regions(&ctx, l0, lm, &slopes, &fit_ts)?,
        };
        let mut desc = RegionDescription {
            i,
            t0: *fit.start(),
            d,
            lines,
            polys,
            metadata: metadata(doublings),
        };
        let mut check_ts: Vec<i64> = fam
            .tables
            .keys()
            .map(|&t| t as i64)
            .filter(|t| t >= fit.start())
            .collect();
        check_ts.extend(validate.clone());
        check_ts.sort_unstable();
        check_ts.dedup();
        match check_ts.iter().try_for_each(|&t| check_t(&desc, &obs, t)) {
            Ok(()) => {
                // Extend t0 downward while the materialized family agrees.
                let mut t0 = *fit.start();
                while t0 > 0 && fam.table((t0 - 1) as u32).is_some() && check_t(&desc, &obs, t0 - 1).is_ok() {
                    t0 -= 1;
                }
                desc.t0 = t0;
                return Ok(desc);
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Greedy left-to-right split of `[l0, lm]` into the fewest regions whose
/// per-residue polynomials interpolate the fit data.
fn build_regions(
    ctx: &FitContext<'_>,
    l0: &Line,
    lm: &Line,
    slopes: &[i64],
    fit_ts: &[i64],
) -> Result<(Vec<Line>, Vec<RegionPoly>)> {
    if l0 == lm {
        let polys = ctx.fit_region(l0, lm, true)?.ok_or_else(|| Error::NoAdmissibleSlope {
            side: "interior",
            detail: format!("no polynomial of the allowed degree fits the support line {l0:?}"),
        })?;
        return Ok((vec![*l0], to_region_polys(0, polys)));
    }
    if fit_ts.iter().any(|&t| l0.at(t) > lm.at(t)) {
        return Err(Error::NoAdmissibleSlope {
            side: "upper",
            detail: format!("upper line {lm:?} lies below lower line {l0:?} in the fit window"),
        });
    }
    // Interior candidates strictly between the outer lines on the whole window.
    let mut candidates: Vec<Line> = Vec::new();
    for &a in slopes {
        let b_lo = fit_ts.iter().map(|&t| l0.at(t) - a * t).max().expect("nonempty");
        let b_hi = fit_ts.iter().map(|&t| lm.at(t) - a * t).min().expect("nonempty");
        for b in b_lo..=b_hi {
            let c = Line { a, b };
            if c != *l0 && c != *lm && l0.eventual_cmp(&c).is_lt() && c.eventual_cmp(lm).is_lt() {
                candidates.push(c);
            }
        }
    }
    candidates.sort_by(|x, y| x.eventual_cmp(y));

    let mut lines = vec![*l0];
    let mut polys = Vec::new();
    let mut current = *l0;
    loop {
        let region = lines.len() - 1;
        if let Some(p) = ctx.fit_region(&current, lm, true)? {
            polys.extend(to_region_polys(region, p));
            lines.push(*lm);
            return Ok((lines, polys));
        }
        let mut advanced = false;
        for c in candidates.iter().rev().filter(|c| current.eventual_cmp(c).is_lt()) {
            if fit_ts.iter().any(|&t| c.at(t) <= current.at(t)) {
                continue;
            }
            if let Some(p) = ctx.fit_region(&current, c, false)? {
                polys.extend(to_region_polys(region, p));
                lines.push(*c);
                current = *c;
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Err(Error::NoAdmissibleSlope {
                side: "interior",
                detail: format!("no breakpoint line above {current:?} admits a fit"),
            });
        }
    }
}

fn to_region_polys(region: usize, polys: BTreeMap<u64, BivariatePoly>) -> Vec<RegionPoly> {
    polys
        .into_iter()
        .map(|(j, poly)| RegionPoly { region, j, poly })
        .collect()
}

/// Bigraded free module `⊕_p ⊕ B(-a,-b)^beta` over `B = k[T_1..T_r]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedTwists {
    pub weights: WeightSystem,
    /// `twists[p]` lists `(a, b, beta)` in homological index `p`.
    pub twists: Vec<Vec<Twist>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Twist {
    pub a: i64,
    pub b: i64,
    #[serde(with = "crate::serde_util::decimal")]
    pub beta: BigInt,
}

/// `sum_p (-1)^p sum beta * phi(mu - a, t - b)`.
pub fn hilbert_from_twists(tw: &BigradedTwists, mu: i64, t: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for (p, list) in tw.twists.iter().enumerate() {
        for tw_ in list {
            let term = &tw_.beta * tw.weights.evaluate(mu - tw_.a, t - tw_.b);
            if p % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub t: i64,
    pub mu: i64,
    #[serde(with = "crate::serde_util::decimal")]
    pub betti: BigInt,
    #[serde(with = "crate::serde_util::decimal")]
    pub phi: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiBridgeReport {
    pub degrees: Vec<i64>,
    pub t_max: i64,
    pub holds: bool,
    /// Number of `(mu, t)` pairs compared.
    pub checked: u64,
    pub first_discrepancy: Option<Discrepancy>,
}

/// Compares `beta_{0,mu}((x_1^{d_1}, ..., x_r^{d_r})^t)` with the vector
/// partition function of the degrees for all `mu` and `t <= t_max`.
pub fn certify_ci_bridge(degrees: &[u32], t_max: u32) -> Result<CiBridgeReport> {
    let w = WeightSystem::new(degrees.iter().map(|&d| d as i64).collect())?;
    let ideal = MonomialIdeal::pure_powers(degrees);
    let top = *degrees.iter().max().unwrap_or(&0) as i64;
    let rows = (0..=t_max)
        .into_par_iter()
        .map(|t| Ok((t, graded_betti(&ideal.power(t))?)))
        .collect::<Result<Vec<_>>>()?;
    let mut checked = 0;
    for (t, table) in rows {
        let t = t as i64;
        for mu in 0..=top * t + 1 {
            let betti = BigInt::from(table.get(0, mu as u32));
            let phi = w.evaluate(mu, t);
            checked += 1;
            if betti != phi {
                return Ok(CiBridgeReport {
                    degrees: w.degrees().to_vec(),
                    t_max: t_max as i64,
                    holds: false,
                    checked,
                    first_discrepancy: Some(Discrepancy { t, mu, betti, phi }),
                });
            }
        }
    }
    Ok(CiBridgeReport {
        degrees: w.degrees().to_vec(),
        t_max: t_max as i64,
        holds: true,
        checked,
        first_discrepancy: None,
    })
}
