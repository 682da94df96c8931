//! Monomial ideals as sets of exponent vectors: products, powers, colons,
//! reductions, integral and Ratliff–Rush closures, and filtrations.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::IntegerMatrix;
use crate::polyhedra::{rational_feasible, Polyhedron};

pub type Exponent = Vec<u32>;

pub fn divides(u: &[u32], v: &[u32]) -> bool {
    u.iter().zip(v).all(|(a, b)| a <= b)
}

pub fn lcm(u: &[u32], v: &[u32]) -> Exponent {
    u.iter().zip(v).map(|(a, b)| *a.max(b)).collect()
}

pub fn total_degree(u: &[u32]) -> u32 {
    u.iter().sum()
}

/// Minimal generators, lexicographically sorted.
fn minimalize(mut gens: Vec<Exponent>) -> Vec<Exponent> {
    gens.sort_by(|a, b| total_degree(a).cmp(&total_degree(b)).then_with(|| a.cmp(b)));
    gens.dedup();
    let mut kept: Vec<Exponent> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| divides(k, &g)) {
            kept.push(g);
        }
    }
    kept.sort();
    kept
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "IdealSpec")]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<Exponent>,
}

#[derive(Deserialize)]
struct IdealSpec {
    nvars: usize,
    generators: Vec<Exponent>,
}

impl TryFrom<IdealSpec> for MonomialIdeal {
    type Error = Error;
    fn try_from(s: IdealSpec) -> Result<Self> {
        MonomialIdeal::new(s.nvars, s.generators)
    }
}

impl MonomialIdeal {
    pub fn new(nvars: usize, generators: Vec<Exponent>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != nvars) {
            return Err(Error::DimensionMismatch(format!(
                "generator {g:?} has length {} in {nvars} variables",
                g.len()
            )));
        }
        Ok(MonomialIdeal {
            nvars,
            generators: minimalize(generators),
        })
    }

    pub fn from_slices(nvars: usize, generators: &[&[u32]]) -> Result<Self> {
        Self::new(nvars, generators.iter().map(|g| g.to_vec()).collect())
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            generators: vec![vec![0; nvars]],
        }
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            generators: Vec::new(),
        }
    }

    /// The maximal ideal `(x_1, ..., x_n)`.
    pub fn maximal(nvars: usize) -> Self {
        let gens = (0..nvars)
            .map(|k| {
                let mut e = vec![0; nvars];
                e[k] = 1;
                e
            })
            .collect();
        MonomialIdeal::new(nvars, gens).expect("consistent lengths")
    }

    /// `(x_1^{d_1}, ..., x_r^{d_r})` in `r` variables.
    pub fn pure_powers(degrees: &[u32]) -> Self {
        let n = degrees.len();
        let gens = degrees
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let mut e = vec![0; n];
                e[k] = d;
                e
            })
            .collect();
        MonomialIdeal::new(n, gens).expect("consistent lengths")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.iter().all(|&e| e == 0))
    }

    pub fn contains_monomial(&self, m: &[u32]) -> bool {
        self.generators.iter().any(|g| divides(g, m))
    }

    /// First generator of `self` outside `other`, if any.
    pub fn first_outside(&self, other: &MonomialIdeal) -> Option<&Exponent> {
        self.generators.iter().find(|g| !other.contains_monomial(g))
    }

    pub fn is_subideal_of(&self, other: &MonomialIdeal) -> bool {
        self.first_outside(other).is_none()
    }

    /// Componentwise maximum over the generators.
    pub fn max_exponents(&self) -> Exponent {
        let mut m = vec![0; self.nvars];
        for g in &self.generators {
            m = lcm(&m, g);
        }
        m
    }

    fn check_vars(&self, other: &MonomialIdeal) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "ideals in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_vars(other)?;
        let mut prods = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                prods.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Ok(MonomialIdeal {
            nvars: self.nvars,
            generators: minimalize(prods),
        })
    }

    pub fn power(&self, t: u32) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.nvars);
        for _ in 0..t {
            acc = acc.multiply(self).expect("same ring");
        }
        acc
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_vars(other)?;
        let gens = self.generators.iter().chain(&other.generators).cloned().collect();
        Ok(MonomialIdeal {
            nvars: self.nvars,
            generators: minimalize(gens),
        })
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_vars(other)?;
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                gens.push(lcm(a, b));
            }
        }
        Ok(MonomialIdeal {
            nvars: self.nvars,
            generators: minimalize(gens),
        })
    }

    /// `(self : x^v)`.
    pub fn colon_monomial(&self, v: &[u32]) -> MonomialIdeal {
        let gens = self
            .generators
            .iter()
            .map(|u| u.iter().zip(v).map(|(a, b)| a.saturating_sub(*b)).collect())
            .collect();
        MonomialIdeal {
            nvars: self.nvars,
            generators: minimalize(gens),
        }
    }

    /// `(self : other)`, the intersection of the colons by each generator.
    pub fn colon(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_vars(other)?;
        let mut acc = MonomialIdeal::unit(self.nvars);
        for g in &other.generators {
            acc = acc.intersect(&self.colon_monomial(g))?;
        }
        Ok(acc)
    }

    pub fn degree_range(&self) -> Option<(u32, u32)> {
        let degs = self.generators.iter().map(|g| total_degree(g));
        Some((degs.clone().min()?, degs.max()?))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        let name = |k: usize| {
            if self.nvars <= 3 {
                NAMES[k].to_string()
            } else {
                format!("x{}", k + 1)
            }
        };
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                let factors: Vec<String> = g
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(k, &e)| if e == 1 { name(k) } else { format!("{}^{}", name(k), e) })
                    .collect();
                if factors.is_empty() {
                    "1".into()
                } else {
                    factors.join("*")
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn multiply(a: &MonomialIdeal, b: &MonomialIdeal) -> Result<MonomialIdeal> {
    a.multiply(b)
}

pub fn power(a: &MonomialIdeal, t: u32) -> MonomialIdeal {
    a.power(t)
}

pub fn colon(a: &MonomialIdeal, b: &MonomialIdeal) -> Result<MonomialIdeal> {
    a.colon(b)
}

/// Least `r <= max_r` with `J I^r = I^{r+1}`, or `None` within the horizon.
pub fn is_reduction(j: &MonomialIdeal, i: &MonomialIdeal, max_r: u32) -> Result<Option<u32>> {
    j.check_vars(i)?;
    if let Some(g) = j.first_outside(i) {
        return Err(Error::NotSubideal { witness: g.clone() });
    }
    let mut ir = MonomialIdeal::unit(i.nvars);
    for r in 0..=max_r {
        let next = ir.multiply(i)?;
        if j.multiply(&ir)? == next {
            return Ok(Some(r));
        }
        ir = next;
    }
    Ok(None)
}

/// Whether `x^a` lies in the integral closure of `i^t`, i.e. `a` is in
/// `t` times the Newton polyhedron of `i`.
pub fn in_closure_of_power(i: &MonomialIdeal, t: u32, a: &[u32]) -> bool {
    let g = i.generators.len();
    if g == 0 {
        return false;
    }
    if t == 0 {
        return true;
    }
    // Variables lambda_alpha: sum lambda = t, lambda >= 0, sum lambda_alpha alpha <= a.
    let n = i.nvars;
    let mut ineq_rows: Vec<BigInt> = Vec::with_capacity((n + g) * g);
    let mut ineq_b = Vec::with_capacity(n + g);
    for k in 0..n {
        ineq_rows.extend(i.generators.iter().map(|alpha| BigInt::from(alpha[k])));
        ineq_b.push(BigInt::from(a[k]));
    }
    for l in 0..g {
        ineq_rows.extend((0..g).map(|m| if m == l { -BigInt::one() } else { BigInt::zero() }));
        ineq_b.push(BigInt::zero());
    }
    let eq = IntegerMatrix::new(1, g, vec![BigInt::one(); g]).expect("row");
    let ineq = IntegerMatrix::new(n + g, g, ineq_rows).expect("rows");
    let p = Polyhedron::new(g, (eq, vec![BigInt::from(t)]), (ineq, ineq_b)).expect("consistent shapes");
    rational_feasible(&p)
}

/// Minimal generators of the integral closure of `i^t`.
pub fn integral_closure_power(i: &MonomialIdeal, t: u32) -> MonomialIdeal {
    if t == 0 {
        return MonomialIdeal::unit(i.nvars);
    }
    let it = i.power(t);
    let bound: Vec<u32> = i.max_exponents().iter().map(|&m| m * t).collect();
    let mut candidates = Vec::new();
    let mut cur = vec![0u32; i.nvars];
    loop {
        candidates.push(cur.clone());
        let mut k = 0;
        while k < cur.len() && cur[k] == bound[k] {
            cur[k] = 0;
            k += 1;
        }
        if k == cur.len() {
            break;
        }
        cur[k] += 1;
    }
    candidates.sort_by(|a, b| total_degree(a).cmp(&total_degree(b)).then_with(|| a.cmp(b)));
    let mut found: Vec<Exponent> = Vec::new();
    for a in candidates {
        if found.iter().any(|f| divides(f, &a)) {
            continue;
        }
        if it.contains_monomial(&a) || in_closure_of_power(i, t, &a) {
            found.push(a);
        }
    }
    MonomialIdeal::new(i.nvars, found).expect("consistent lengths")
}

pub fn integral_closure(i: &MonomialIdeal) -> MonomialIdeal {
    integral_closure_power(i, 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureResult {
    pub ideal: MonomialIdeal,
    /// Whether two consecutive partial unions agreed before the horizon.
    pub stabilized: bool,
    pub steps: u32,
}

/// Ratliff–Rush closure `U_n (I^{n+1} : I^n)` over `n <= horizon`, stopping at
/// the first consecutive agreement.
pub fn ratliff_rush(i: &MonomialIdeal, horizon: u32) -> ClosureResult {
    ratliff_rush_power(i, 1, horizon)
}

/// Ratliff–Rush closure of `I^t` as `U_n (I^{n+t} : I^n)`.
pub fn ratliff_rush_power(i: &MonomialIdeal, t: u32, horizon: u32) -> ClosureResult {
    let mut acc = i.power(t);
    let mut in_pow = MonomialIdeal::unit(i.nvars);
    let mut top = acc.clone();
    for n in 1..=horizon {
        in_pow = in_pow.multiply(i).expect("same ring");
        top = top.multiply(i).expect("same ring");
        let next = acc.sum(&top.colon(&in_pow).expect("same ring")).expect("same ring");
        if next == acc {
            return ClosureResult {
                ideal: acc,
                stabilized: true,
                steps: n,
            };
        }
        acc = next;
    }
    ClosureResult {
        ideal: acc,
        stabilized: false,
        steps: horizon,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationKind {
    Powers,
    IntegralClosure,
    RatliffRush,
    Explicit,
}

impl std::str::FromStr for FiltrationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "powers" => Ok(Self::Powers),
            "integral_closure" => Ok(Self::IntegralClosure),
            "ratliff_rush" => Ok(Self::RatliffRush),
            "explicit" => Ok(Self::Explicit),
            _ => Err(Error::InvalidInput(format!("unknown filtration kind {s:?}"))),
        }
    }
}

/// Materialized filtration `J_0 ⊇ J_1 ⊇ ... ⊇ J_horizon` with `J_0` the unit
/// ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub kind: FiltrationKind,
    pub base: MonomialIdeal,
    pub horizon: u32,
    terms: Vec<MonomialIdeal>,
    /// Ratliff–Rush terms whose colon chain did not stabilize.
    pub truncated: Vec<u32>,
}

/// Default colon-chain horizon for Ratliff–Rush closures.
pub const RATLIFF_RUSH_HORIZON: u32 = 10;

impl Filtration {
    pub fn new(kind: FiltrationKind, base: MonomialIdeal, horizon: u32) -> Result<Self> {
        let mut truncated = Vec::new();
        let terms = match kind {
            FiltrationKind::Powers => {
                let mut terms = vec![MonomialIdeal::unit(base.nvars)];
                for t in 1..=horizon as usize {
                    let next = terms[t - 1].multiply(&base)?;
                    terms.push(next);
                }
                terms
            }
            FiltrationKind::IntegralClosure => (0..=horizon).map(|t| integral_closure_power(&base, t)).collect(),
            FiltrationKind::RatliffRush => (0..=horizon)
                .map(|t| {
                    if t == 0 {
                        return MonomialIdeal::unit(base.nvars);
                    }
                    let r = ratliff_rush_power(&base, t, RATLIFF_RUSH_HORIZON);
                    if !r.stabilized {
                        truncated.push(t);
                    }
                    r.ideal
                })
                .collect(),
            FiltrationKind::Explicit => {
                return Err(Error::InvalidInput(
                    "explicit filtrations are built from their terms".into(),
                ))
            }
        };
        Ok(Filtration {
            kind,
            base,
            horizon,
            terms,
            truncated,
        })
    }

    pub fn powers(base: &MonomialIdeal, horizon: u32) -> Self {
        Self::new(FiltrationKind::Powers, base.clone(), horizon).expect("powers never fail")
    }

    /// Explicit terms `J_0 .. J_horizon`; `J_0` must be the unit ideal.
    pub fn explicit(base: MonomialIdeal, terms: Vec<MonomialIdeal>) -> Result<Self> {
        if terms.is_empty() || !terms[0].is_unit() {
            return Err(Error::InvalidInput("explicit filtration must start with the unit ideal".into()));
        }
        if let Some(t) = terms.iter().find(|t| t.nvars != base.nvars) {
            return Err(Error::DimensionMismatch(format!(
                "term in {} variables for a base in {}",
                t.nvars, base.nvars
            )));
        }
        Ok(Filtration {
            kind: FiltrationKind::Explicit,
            base,
            horizon: (terms.len() - 1) as u32,
            terms,
            truncated: Vec::new(),
        })
    }

    pub fn term(&self, t: u32) -> Option<&MonomialIdeal> {
        self.terms.get(t as usize)
    }

    pub fn terms(&self) -> &[MonomialIdeal] {
        &self.terms
    }
}

#[derive(Serialize, Deserialize)]
struct FiltrationJson {
    nvars: usize,
    generators: Vec<Exponent>,
    kind: FiltrationKind,
    horizon: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terms: Option<BTreeMap<String, Vec<Exponent>>>,
}

impl Serialize for Filtration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(t, j)| (t.to_string(), j.generators.clone()))
            .collect();
        FiltrationJson {
            nvars: self.base.nvars,
            generators: self.base.generators.clone(),
            kind: self.kind,
            horizon: self.horizon,
            terms: Some(terms),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Filtration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = FiltrationJson::deserialize(d)?;
        let base = MonomialIdeal::new(raw.nvars, raw.generators).map_err(D::Error::custom)?;
        match raw.kind {
            FiltrationKind::Explicit => {
                let terms = raw
                    .terms
                    .ok_or_else(|| D::Error::custom("explicit filtration needs terms"))?;
                let mut list = Vec::new();
                for t in 0..=raw.horizon {
                    let gens = terms
                        .get(&t.to_string())
                        .ok_or_else(|| D::Error::custom(format!("missing term {t}")))?;
                    list.push(MonomialIdeal::new(raw.nvars, gens.clone()).map_err(D::Error::custom)?);
                }
                Filtration::explicit(base, list).map_err(D::Error::custom)
            }
            kind => Filtration::new(kind, base, raw.horizon).map_err(D::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodFiltrationReport {
    pub horizon: u32,
    /// `I J_t ⊆ J_{t+1}` for all `t < horizon`.
    pub containment: bool,
    /// Least `n0` with `J_{n+1} = I J_n` for `n0 <= n < horizon`; `None` when
    /// the last step already fails.
    pub n0: Option<u32>,
    pub good: bool,
}

/// Checks `I J_t ⊆ J_{t+1}` and finds the stabilization index.
pub fn good_filtration_check(f: &Filtration, i: &MonomialIdeal) -> Result<GoodFiltrationReport> {
    let mut stable_from: Option<u32> = None;
    let mut last_ok = true;
    for t in 0..f.horizon {
        let prod = i.multiply(&f.terms[t as usize])?;
        let next = &f.terms[t as usize + 1];
        if let Some(g) = prod.first_outside(next) {
            return Err(Error::ContainmentViolation {
                t: t as usize,
                witness: g.clone(),
            });
        }
        last_ok = prod == *next;
        match (last_ok, stable_from) {
            (true, None) => stable_from = Some(t),
            (false, _) => stable_from = None,
            _ => {}
        }
    }
    let n0 = if last_ok { stable_from.or(Some(f.horizon)) } else { None };
    Ok(GoodFiltrationReport {
        horizon: f.horizon,
        containment: true,
        n0,
        good: n0.is_some() && f.horizon > 0,
    })
}
