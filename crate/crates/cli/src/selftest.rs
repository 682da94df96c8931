//! Built-in worked examples behind `--selftest`. Expected values come from
//! small hand computations or brute force, never from the routine under test.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use quasibetti::asymptotics::{certify_ci_bridge, detect_regions, predict, weight_system_of, RegionOptions};
use quasibetti::betti::{betti_family, graded_betti, multigraded_betti, taylor_betti_oracle};
use quasibetti::exactlinalg::{bigvec, determinant, hnf, IntegerMatrix};
use quasibetti::genfun::{brion_check, IntBox};
use quasibetti::monomial::{
    good_filtration_check, integral_closure_power, is_reduction, Filtration, FiltrationKind, MonomialIdeal,
};
use quasibetti::partition::{
    certify, chamber_complex, default_fit_window, default_validate_window, fit_quasi_polynomial, Window,
    WeightSystem,
};
use quasibetti::polyhedra::{count_lattice_points, enumerate_lattice_points, fiber_polytope, pick_count, reduce_to_full_dim};

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct SelftestReport {
    pub subcommand: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl SelftestReport {
    pub fn failed(&self) -> bool {
        !self.passed
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("check,passed,detail\n");
        for c in &self.checks {
            s.push_str(&format!("{},{},\"{}\"\n", c.name, c.passed, c.detail.replace('"', "'")));
        }
        s
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        write!(f, "selftest {}: {}", self.subcommand, if self.passed { "ok" } else { "FAILED" })
    }
}

type Outcome = Result<String, String>;

fn check(name: &str, f: impl FnOnce() -> Outcome) -> Check {
    let (passed, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ideal(nvars: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::from_slices(nvars, gens).expect("valid ideal")
}

/// Nonnegative x with sum(x) = t and sum(d_i x_i) = mu, by direct enumeration.
fn brute_partitions(degrees: &[i64], mu: i64, t: i64) -> u64 {
    fn go(d: &[i64], mu: i64, t: i64) -> u64 {
        match d {
            [] => u64::from(mu == 0 && t == 0),
            [last] => u64::from(t >= 0 && mu == last * t),
            [first, rest @ ..] => (0..=t)
                .filter(|k| first * k <= mu)
                .map(|k| go(rest, mu - first * k, t - k))
                .sum(),
        }
    }
    if mu < 0 || t < 0 {
        return 0;
    }
    go(degrees, mu, t)
}

fn weight_matrix(degrees: &[i64]) -> IntegerMatrix {
    IntegerMatrix::from_i64_rows(&[degrees.to_vec(), vec![1; degrees.len()]])
}

fn hnf_checks() -> Vec<Check> {
    vec![
        check("row vector (2 4 6)", || {
            let r = hnf(&IntegerMatrix::from_i64_rows(&[[2, 4, 6]]));
            ensure(r.h.to_rows() == vec![bigvec(&[2, 0, 0])], || format!("H = {:?}", r.h.to_rows()))?;
            Ok("H = (2 0 0)".into())
        }),
        check("A U = H with U unimodular", || {
            let a = weight_matrix(&[3, 5, 8, 9]);
            let r = hnf(&a);
            ensure(a.mul(&r.u).map_err(|e| e.to_string())? == r.h, || "A U != H".into())?;
            let det = determinant(&r.u).map_err(|e| e.to_string())?;
            ensure(det == BigInt::from(1) || det == BigInt::from(-1), || format!("det U = {det}"))?;
            Ok(format!("rank {}, det U = {det}", r.rank()))
        }),
    ]
}

fn reduce_checks() -> Vec<Check> {
    vec![check("fiber of (3,5,8,9) at (30,5)", || {
        let a = weight_matrix(&[3, 5, 8, 9]);
        let b = bigvec(&[30, 5]);
        let r = reduce_to_full_dim(&a, &b).map_err(|e| e.to_string())?.ok_or("reported infeasible")?;
        let pts = enumerate_lattice_points(&r.q).map_err(|e| e.to_string())?;
        for p in &pts {
            let x = r.lift(p);
            ensure(a.mul_vec(&x).map_err(|e| e.to_string())? == b, || format!("lift {x:?} misses b"))?;
            ensure(x.iter().all(|v| *v >= BigInt::from(0)), || format!("lift {x:?} negative"))?;
        }
        let expect = brute_partitions(&[3, 5, 8, 9], 30, 5);
        ensure(pts.len() as u64 == expect, || format!("{} points, brute force {expect}", pts.len()))?;
        Ok(format!("{} points in dimension {}", pts.len(), r.q.dim))
    })]
}

fn count_checks() -> Vec<Check> {
    vec![check("counts against brute force", || {
        let d = [3, 5, 8, 9];
        let a = weight_matrix(&d);
        let mut n = 0;
        for t in 0..=6 {
            for mu in (3 * t)..=(9 * t) {
                let c = count_lattice_points(&fiber_polytope(&a, &bigvec(&[mu, t])).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let e = brute_partitions(&d, mu, t);
                ensure(c == BigInt::from(e), || format!("b = ({mu},{t}): {c} vs {e}"))?;
                n += 1;
            }
        }
        Ok(format!("{n} right-hand sides agree"))
    })]
}

fn vpf_checks() -> Vec<Check> {
    vec![check("phi for degrees (1,2,3)", || {
        let d = [1, 2, 3];
        let w = WeightSystem::new(d.to_vec()).map_err(|e| e.to_string())?;
        for t in 0..=8 {
            for mu in -1..=(3 * t + 1) {
                let e = brute_partitions(&d, mu, t);
                ensure(w.evaluate(mu, t) == BigInt::from(e), || format!("({mu},{t})"))?;
            }
        }
        Ok("agrees for t <= 8".into())
    })]
}

fn chambers_checks() -> Vec<Check> {
    vec![check("chambers of (3,5,8,9)", || {
        let w = WeightSystem::new(vec![3, 5, 8, 9]).map_err(|e| e.to_string())?;
        let cs = chamber_complex(&w);
        ensure(cs.len() == 3, || format!("{} chambers", cs.len()))?;
        let lows: Vec<i64> = cs.iter().map(|c| c.low_ray[0]).collect();
        ensure(lows == vec![3, 5, 8], || format!("low rays {lows:?}"))?;
        for c in &cs {
            let g = c.global_lattice.determinant();
            let l = c.lattice.determinant();
            ensure(l.clone() % g == BigInt::from(0) || g.clone() % l == BigInt::from(0), || {
                "chamber and global lattices unrelated".into()
            })?;
        }
        Ok("3 chambers with rays (3,1),(5,1),(8,1),(9,1)".into())
    })]
}

fn fit_checks() -> Vec<Check> {
    vec![check("degrees (1,2,3) fit and certify", || {
        let w = WeightSystem::new(vec![1, 2, 3]).map_err(|e| e.to_string())?;
        let fit = default_fit_window(&w);
        let val = default_validate_window(&fit);
        for c in chamber_complex(&w) {
            let qp = fit_quasi_polynomial(&w, &c, &fit, &val).map_err(|e| e.to_string())?;
            certify(&w, &c, &qp, &Window::new(0..=40)).map_err(|e| e.to_string())?;
        }
        Ok("both chambers certified on t <= 40".into())
    })]
}

fn ideal_checks() -> Vec<Check> {
    vec![
        check("(x^2, y^2)^2", || {
            let i = ideal(2, &[&[2, 0], &[0, 2]]);
            let p = i.power(2);
            let e = ideal(2, &[&[4, 0], &[2, 2], &[0, 4]]);
            ensure(p == e, || format!("got {p}"))?;
            Ok(p.to_string())
        }),
        check("integral closure of (x^2, y^2)", || {
            let c = integral_closure_power(&ideal(2, &[&[2, 0], &[0, 2]]), 1);
            let e = ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]);
            ensure(c == e, || format!("got {c}"))?;
            Ok(c.to_string())
        }),
        check("(x^2, y^2) reduces (x, y)^2", || {
            let r = is_reduction(&ideal(2, &[&[2, 0], &[0, 2]]), &ideal(2, &[&[1, 0], &[0, 1]]).power(2), 4)
                .map_err(|e| e.to_string())?;
            ensure(r == Some(1), || format!("reduction number {r:?}"))?;
            Ok("reduction number 1".into())
        }),
    ]
}

fn filtration_checks() -> Vec<Check> {
    vec![
        check("powers are good", || {
            let i = ideal(2, &[&[2, 0], &[0, 3]]);
            let rep = good_filtration_check(&Filtration::powers(&i, 5), &i).map_err(|e| e.to_string())?;
            ensure(rep.good && rep.n0 == Some(0), || format!("{rep:?}"))?;
            Ok("n0 = 0".into())
        }),
        check("(x,y)^ceil(t/2) is not good", || {
            let m = ideal(2, &[&[1, 0], &[0, 1]]);
            let terms = (0..=6u32).map(|t| m.power(t.div_ceil(2))).collect();
            let f = Filtration::explicit(m.clone(), terms).map_err(|e| e.to_string())?;
            let rep = good_filtration_check(&f, &m).map_err(|e| e.to_string())?;
            ensure(!rep.good, || "reported good".into())?;
            Ok("containment holds, never stable".into())
        }),
        check("integral closure filtration", || {
            let i = ideal(2, &[&[3, 0], &[0, 2]]);
            let f = Filtration::new(FiltrationKind::IntegralClosure, i.clone(), 5).map_err(|e| e.to_string())?;
            let rep = good_filtration_check(&f, &i).map_err(|e| e.to_string())?;
            ensure(rep.good, || format!("{rep:?}"))?;
            Ok(format!("good from n0 = {:?}", rep.n0))
        }),
    ]
}

fn betti_checks() -> Vec<Check> {
    vec![
        check("(x, y)^2", || {
            let t = graded_betti(&ideal(2, &[&[1, 0], &[0, 1]]).power(2)).map_err(|e| e.to_string())?;
            ensure(t.get(0, 2) == 3 && t.get(1, 3) == 2 && t.entries.len() == 2, || format!("{:?}", t.entries))?;
            Ok("beta_0,2 = 3, beta_1,3 = 2".into())
        }),
        check("Koszul vs Taylor on (x^2, xy, y^2 z, z^3)", || {
            let i = ideal(3, &[&[2, 0, 0], &[1, 1, 0], &[0, 1, 1], &[0, 0, 3]]);
            let a = multigraded_betti(&i).map_err(|e| e.to_string())?;
            let b = taylor_betti_oracle(&i).map_err(|e| e.to_string())?;
            ensure(a == b, || "multigraded tables differ".into())?;
            Ok(format!("{} nonzero multigraded numbers agree", a.len()))
        }),
    ]
}

fn regions_checks() -> Vec<Check> {
    vec![check("powers of (x^2, y^3), beta_0 and beta_1", || {
        let i = ideal(2, &[&[2, 0], &[0, 3]]);
        let w = weight_system_of(&i).map_err(|e| e.to_string())?;
        let fam = betti_family(&Filtration::powers(&i, 12)).map_err(|e| e.to_string())?;
        for k in 0..=1 {
            let r = detect_regions(&fam, k, &w, 3..=8, 9..=10, &RegionOptions::default()).map_err(|e| e.to_string())?;
            for t in 11..=12u32 {
                let tab = fam.table(t).ok_or("missing table")?;
                for mu in 0..=(3 * t + 3) {
                    let p = predict(&r, mu as i64, t as i64).map_err(|e| e.to_string())?;
                    ensure(p == BigInt::from(tab.get(k, mu)), || format!("i={k} ({mu},{t}): {p}"))?;
                }
            }
        }
        Ok("predictions match at t = 11, 12".into())
    })]
}

fn brion_checks() -> Vec<Check> {
    vec![
        check("unit square", || {
            let v: Vec<Vec<BigInt>> = [[0, 0], [1, 0], [1, 1], [0, 1]].iter().map(|p| bigvec(p)).collect();
            let rep = brion_check(&v, &IntBox::new(vec![-3, -3], vec![4, 4])).map_err(|e| e.to_string())?;
            ensure(rep.holds, || "identity fails".into())?;
            let n = pick_count(&[(0, 0), (1, 0), (1, 1), (0, 1)]).map_err(|e| e.to_string())?;
            ensure(n == BigInt::from(4), || format!("Pick count {n}"))?;
            Ok("holds; 4 lattice points".into())
        }),
        check("segment [2, 5]", || {
            let rep = brion_check(&[bigvec(&[2]), bigvec(&[5])], &IntBox::new(vec![-5], vec![10]))
                .map_err(|e| e.to_string())?;
            ensure(rep.holds, || "identity fails".into())?;
            Ok("holds".into())
        }),
    ]
}

fn certify_ci_checks() -> Vec<Check> {
    vec![check("degrees (2,3), t <= 6", || {
        let rep = certify_ci_bridge(&[2, 3], 6).map_err(|e| e.to_string())?;
        ensure(rep.holds, || format!("{:?}", rep.first_discrepancy))?;
        Ok(format!("{} values compared", rep.checked))
    })]
}

pub fn run(subcommand: &str) -> SelftestReport {
    let checks = match subcommand {
        "hnf" => hnf_checks(),
        "reduce" => reduce_checks(),
        "count" => count_checks(),
        "vpf" => vpf_checks(),
        "chambers" => chambers_checks(),
        "fit" => fit_checks(),
        "ideal" => ideal_checks(),
        "filtration" => filtration_checks(),
        "betti" => betti_checks(),
        "regions" => regions_checks(),
        "brion" => brion_checks(),
        "certify-ci" => certify_ci_checks(),
        other => vec![check(other, || Err("no selftest registered".into()))],
    };
    let passed = checks.iter().all(|c| c.passed);
    SelftestReport {
        subcommand: subcommand.to_string(),
        checks,
        passed,
    }
}
