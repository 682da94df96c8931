//! Multigraded and graded Betti numbers of monomial ideals.
//!
//! The main path computes `beta_{i,a}(I) = dim H~_{i-1}(K^a(I))` from the
//! upper-Koszul complexes over the lcm lattice; the Taylor complex gives an
//! independent check.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::bareiss_rank;
use crate::monomial::{lcm, total_degree, Exponent, Filtration, MonomialIdeal};

pub const DEFAULT_VERTEX_BOUND: usize = 20;
pub const DEFAULT_GENERATOR_BOUND: usize = 12;
pub const DEFAULT_LCM_BOUND: usize = 50_000;

/// Finite simplicial complex on vertices `0..n` given by its facets as bit sets.
/// No facets is the void complex; the single facet `0` is `{∅}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplexQ {
    nvertices: usize,
    facets: Vec<u64>,
}

impl SimplicialComplexQ {
    /// Keeps only the inclusion-maximal sets.
    pub fn from_faces(nvertices: usize, faces: impl IntoIterator<Item = u64>) -> Self {
        let mut all: Vec<u64> = faces.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        all.sort_by_key(|f| std::cmp::Reverse(f.count_ones()));
        let mut facets: Vec<u64> = Vec::new();
        for f in all {
            if !facets.iter().any(|&g| f & g == f) {
                facets.push(f);
            }
        }
        facets.sort_unstable();
        SimplicialComplexQ { nvertices, facets }
    }

    pub fn from_facet_lists(nvertices: usize, facets: &[&[usize]]) -> Self {
        Self::from_faces(
            nvertices,
            facets.iter().map(|f| f.iter().fold(0u64, |acc, &v| acc | (1 << v))),
        )
    }

    pub fn void(nvertices: usize) -> Self {
        SimplicialComplexQ {
            nvertices,
            facets: Vec::new(),
        }
    }

    pub fn nvertices(&self) -> usize {
        self.nvertices
    }

    pub fn facets(&self) -> &[u64] {
        &self.facets
    }

    pub fn dimension(&self) -> i64 {
        self.facets.iter().map(|f| f.count_ones() as i64 - 1).max().unwrap_or(-2)
    }

    /// All faces, grouped by cardinality.
    fn faces_by_size(&self) -> Vec<Vec<u64>> {
        let mut seen: HashSet<u64> = HashSet::new();
        for &f in &self.facets {
            let mut s = f;
            loop {
                seen.insert(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & f;
            }
        }
        let top = self.facets.iter().map(|f| f.count_ones() as usize).max().unwrap_or(0);
        let mut by_size = vec![Vec::new(); top + 1];
        for s in seen {
            by_size[s.count_ones() as usize].push(s);
        }
        for v in &mut by_size {
            v.sort_unstable();
        }
        by_size
    }
}

/// Rank of the boundary map from faces of size `k` to faces of size `k-1`.
fn boundary_rank(high: &[u64], low: &[u64]) -> usize {
    if high.is_empty() || low.is_empty() {
        return 0;
    }
    let index: HashMap<u64, usize> = low.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let rows: Vec<Vec<BigInt>> = high
        .iter()
        .map(|&f| {
            let mut row = vec![BigInt::from(0); low.len()];
            let mut sign = 1i64;
            for v in 0..64 {
                if f >> v & 1 == 1 {
                    row[index[&(f & !(1u64 << v))]] = BigInt::from(sign);
                    sign = -sign;
                }
            }
            row
        })
        .collect();
    bareiss_rank(rows, low.len())
}

/// `dim H~_j` for `j = -1 ..= dim K`, over the rationals; the vector is
/// indexed by `j + 1`. The void complex yields an empty vector.
pub fn reduced_homology_dims(k: &SimplicialComplexQ) -> Result<Vec<usize>> {
    reduced_homology_dims_bounded(k, DEFAULT_VERTEX_BOUND)
}

pub fn reduced_homology_dims_bounded(k: &SimplicialComplexQ, bound: usize) -> Result<Vec<usize>> {
    if k.nvertices > bound.min(64) {
        return Err(Error::VertexBound {
            count: k.nvertices,
            bound: bound.min(64),
        });
    }
    if k.facets.is_empty() {
        return Ok(Vec::new());
    }
    let faces = k.faces_by_size();
    let ranks: Vec<usize> = (0..faces.len())
        .map(|s| if s == 0 { 0 } else { boundary_rank(&faces[s], &faces[s - 1]) })
        .collect();
    Ok((0..faces.len())
        .map(|s| {
            let next = ranks.get(s + 1).copied().unwrap_or(0);
            faces[s].len() - ranks[s] - next
        })
        .collect())
}

/// Multigraded Betti numbers keyed by `(i, alpha)`.
pub type MultigradedBetti = BTreeMap<(usize, Exponent), u64>;

/// Join-closure of the minimal generators under lcm.
pub fn lcm_lattice(i: &MonomialIdeal, bound: usize) -> Result<Vec<Exponent>> {
    let mut set: BTreeSet<Exponent> = BTreeSet::new();
    for g in i.generators() {
        let mut new: Vec<Exponent> = set.iter().map(|s| lcm(s, g)).collect();
        new.push(g.clone());
        set.extend(new);
        if set.len() > bound {
            return Err(Error::LcmLatticeBound { bound });
        }
    }
    Ok(set.into_iter().collect())
}

/// `K^a(I)`: squarefree `s <= a` with `x^(a - s)` in `I`.
pub fn upper_koszul_complex(i: &MonomialIdeal, alpha: &[u32]) -> SimplicialComplexQ {
    let n = i.nvars();
    let support: u64 = (0..n).filter(|&k| alpha[k] > 0).fold(0, |acc, k| acc | (1 << k));
    let mut faces = Vec::new();
    let mut s = support;
    let mut m = alpha.to_vec();
    loop {
        for k in 0..n {
            m[k] = alpha[k] - (s >> k & 1) as u32;
        }
        if i.contains_monomial(&m) {
            faces.push(s);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & support;
    }
    SimplicialComplexQ::from_faces(n, faces)
}

pub fn multigraded_betti(i: &MonomialIdeal) -> Result<MultigradedBetti> {
    if i.nvars() > DEFAULT_VERTEX_BOUND {
        return Err(Error::VertexBound {
            count: i.nvars(),
            bound: DEFAULT_VERTEX_BOUND,
        });
    }
    let alphas = lcm_lattice(i, DEFAULT_LCM_BOUND)?;
    let per_alpha = alphas
        .par_iter()
        .map(|a| {
            let dims = reduced_homology_dims(&upper_koszul_complex(i, a))?;
            Ok(dims
                .into_iter()
                .enumerate()
                .filter(|&(_, d)| d > 0)
                .map(|(j, d)| ((j, a.clone()), d as u64))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_alpha.into_iter().flatten().collect())
}

/// Betti numbers from the Taylor complex tensored with the residue field.
pub fn taylor_betti_oracle(i: &MonomialIdeal) -> Result<MultigradedBetti> {
    let gens = i.generators();
    let g = gens.len();
    if g > DEFAULT_GENERATOR_BOUND {
        return Err(Error::GeneratorBound {
            count: g,
            bound: DEFAULT_GENERATOR_BOUND,
        });
    }
    // Subsets grouped by lcm and size.
    let mut groups: BTreeMap<Exponent, Vec<Vec<u32>>> = BTreeMap::new();
    for s in 1u32..(1 << g) {
        let mut m = vec![0; i.nvars()];
        for (k, gen) in gens.iter().enumerate() {
            if s >> k & 1 == 1 {
                m = lcm(&m, gen);
            }
        }
        let sizes = groups.entry(m).or_insert_with(|| vec![Vec::new(); g + 2]);
        sizes[s.count_ones() as usize].push(s);
    }
    let mut out = MultigradedBetti::new();
    for (alpha, sizes) in groups {
        let rank = |size: usize| -> usize {
            if size < 2 {
                return 0;
            }
            let high = &sizes[size];
            let low = &sizes[size - 1];
            if high.is_empty() || low.is_empty() {
                return 0;
            }
            let index: HashMap<u32, usize> = low.iter().enumerate().map(|(k, &s)| (s, k)).collect();
            let rows = high
                .iter()
                .map(|&s| {
                    let mut row = vec![BigInt::from(0); low.len()];
                    let mut sign = 1i64;
                    for k in 0..g {
                        if s >> k & 1 == 1 {
                            // Only faces with the same lcm survive after tensoring.
                            if let Some(&col) = index.get(&(s & !(1 << k))) {
                                row[col] = BigInt::from(sign);
                            }
                            sign = -sign;
                        }
                    }
                    row
                })
                .collect();
            bareiss_rank(rows, low.len())
        };
        for size in 1..=g {
            let n = sizes[size].len();
            if n == 0 {
                continue;
            }
            let beta = n - rank(size) - rank(size + 1);
            if beta > 0 {
                out.insert((size - 1, alpha.clone()), beta as u64);
            }
        }
    }
    Ok(out)
}

/// Betti numbers `beta_{i,mu}` indexed by homological and total degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    pub nvars: usize,
    pub entries: BTreeMap<(usize, u32), u64>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    i: usize,
    mu: u32,
    #[serde(with = "crate::serde_util::decimal")]
    beta: BigInt,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    #[serde(default)]
    nvars: usize,
    entries: Vec<EntryJson>,
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableJson {
            nvars: self.nvars,
            entries: self
                .entries
                .iter()
                .map(|(&(i, mu), &b)| EntryJson { i, mu, beta: b.into() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TableJson::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for e in raw.entries {
            let b = u64::try_from(&e.beta).map_err(D::Error::custom)?;
            if b > 0 {
                entries.insert((e.i, e.mu), b);
            }
        }
        Ok(BettiTable { nvars: raw.nvars, entries })
    }
}

impl BettiTable {
    pub fn from_multigraded(nvars: usize, m: &MultigradedBetti) -> Self {
        let mut entries = BTreeMap::new();
        for ((i, alpha), b) in m {
            *entries.entry((*i, total_degree(alpha))).or_insert(0) += b;
        }
        BettiTable { nvars, entries }
    }

    pub fn get(&self, i: usize, mu: u32) -> u64 {
        self.entries.get(&(i, mu)).copied().unwrap_or(0)
    }

    /// Nonzero `(mu, beta)` in homological degree `i`.
    pub fn row(&self, i: usize) -> Vec<(u32, u64)> {
        self.entries
            .iter()
            .filter(|((k, _), _)| *k == i)
            .map(|(&(_, mu), &b)| (mu, b))
            .collect()
    }

    pub fn max_homological_degree(&self) -> Option<usize> {
        self.entries.keys().map(|&(i, _)| i).max()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,mu,beta\n");
        for (&(i, mu), b) in &self.entries {
            s.push_str(&format!("{i},{mu},{b}\n"));
        }
        s
    }

    /// `sum_i (-1)^i sum_mu beta_{i,mu} HF_S(nu - mu)`.
    pub fn hilbert_function(&self, nu: u32) -> BigInt {
        let mut acc = BigInt::from(0);
        for (&(i, mu), &b) in &self.entries {
            if mu > nu {
                continue;
            }
            let term = BigInt::from(b) * monomial_count(self.nvars, nu - mu);
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
}

/// Conventional Betti diagram: column `i`, row `mu - i`.
impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(top) = self.max_homological_degree() else {
            return writeln!(f, "(zero)");
        };
        let shifts = self.entries.keys().map(|&(i, mu)| mu as i64 - i as i64);
        let rows = shifts.clone().min().unwrap_or(0)..=shifts.max().unwrap_or(0);
        let mut cells: Vec<Vec<String>> = Vec::new();
        let mut header = vec![String::new()];
        header.extend((0..=top).map(|i| i.to_string()));
        cells.push(header);
        let mut total = vec!["total:".to_string()];
        total.extend((0..=top).map(|i| self.row(i).iter().map(|&(_, b)| b).sum::<u64>().to_string()));
        cells.push(total);
        for r in rows {
            let mut line = vec![format!("{r}:")];
            line.extend((0..=top).map(|i| {
                let mu = r + i as i64;
                let b = if mu >= 0 { self.get(i, mu as u32) } else { 0 };
                if b == 0 {
                    ".".to_string()
                } else {
                    b.to_string()
                }
            }));
            cells.push(line);
        }
        let ncols = top + 2;
        let widths: Vec<usize> = (0..ncols)
            .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
            .collect();
        for row in cells {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(c, s)| format!("{s:>w$}", w = widths[c]))
                .collect();
            writeln!(f, "{}", line.join(" ").trim_end())?;
        }
        Ok(())
    }
}

/// Number of monomials of degree `d` in `n` variables.
pub fn monomial_count(n: usize, d: u32) -> BigInt {
    if n == 0 {
        return BigInt::from((d == 0) as u8);
    }
    // C(d + n - 1, n - 1)
    let mut acc = BigInt::from(1);
    for k in 1..n as u64 {
        acc = acc * BigInt::from(d as u64 + k) / BigInt::from(k);
    }
    acc
}

/// Number of degree-`nu` monomials lying in `i`, by direct enumeration.
pub fn ideal_hilbert_function(i: &MonomialIdeal, nu: u32) -> u64 {
    let n = i.nvars();
    let mut count = 0u64;
    let mut m = vec![0u32; n];
    fn rec(i: &MonomialIdeal, m: &mut Vec<u32>, k: usize, left: u32, count: &mut u64) {
        if k + 1 == m.len() {
            m[k] = left;
            if i.contains_monomial(m) {
                *count += 1;
            }
            return;
        }
        for e in 0..=left {
            m[k] = e;
            rec(i, m, k + 1, left - e, count);
        }
    }
    if n == 0 {
        return i.is_unit() as u64 * (nu == 0) as u64;
    }
    rec(i, &mut m, 0, nu, &mut count);
    count
}

pub fn graded_betti(i: &MonomialIdeal) -> Result<BettiTable> {
    Ok(BettiTable::from_multigraded(i.nvars(), &multigraded_betti(i)?))
}

/// First degree in `window` where the Betti numbers and a direct count of
/// monomials disagree.
pub fn hilbert_consistency(
    i: &MonomialIdeal,
    table: &BettiTable,
    window: std::ops::RangeInclusive<u32>,
) -> Option<(u32, BigInt, u64)> {
    window.into_iter().find_map(|nu| {
        let lhs = table.hilbert_function(nu);
        let rhs = ideal_hilbert_function(i, nu);
        (lhs != BigInt::from(rhs)).then_some((nu, lhs, rhs))
    })
}

/// Betti tables of the terms `J_t`, `t = 0 ..= horizon`, of a filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiFamily {
    pub t_range: (u32, u32),
    pub tables: BTreeMap<u32, BettiTable>,
}

impl BettiFamily {
    pub fn table(&self, t: u32) -> Option<&BettiTable> {
        self.tables.get(&t)
    }
}

pub fn betti_family(f: &Filtration) -> Result<BettiFamily> {
    let tables = f
        .terms()
        .par_iter()
        .enumerate()
        .map(|(t, j)| Ok((t as u32, graded_betti(j)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(BettiFamily {
        t_range: (0, f.horizon),
        tables,
    })
}
