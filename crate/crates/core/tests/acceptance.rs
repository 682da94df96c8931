//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runtime limits are wall-clock.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use quasibetti::asymptotics::{detect_regions, predict, certify_ci_bridge, weight_system_of, RegionOptions};
use quasibetti::betti::{betti_family, graded_betti, hilbert_consistency, multigraded_betti, taylor_betti_oracle};
use quasibetti::exactlinalg::{bigvec, determinant, hnf, IntegerMatrix};
use quasibetti::genfun::{brion_check, IntBox};
use quasibetti::monomial::{
    good_filtration_check, is_reduction, ratliff_rush, Filtration, FiltrationKind, MonomialIdeal,
};
use quasibetti::partition::{chamber_complex, fit_quasi_polynomial, QuasiPolynomial, Window, WeightSystem};
use quasibetti::polyhedra::{check_simple_polygon, enumerate_lattice_points, fiber_polytope, pick_count, reduce_to_full_dim};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let el = start.elapsed();
    ensure(el < limit, || format!("took {el:?}, limit {limit:?}"))?;
    Ok(el)
}

fn a_matrix() -> IntegerMatrix {
    IntegerMatrix::from_i64_rows(&[[3, 5, 8, 9], [1, 1, 1, 1]])
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let a = a_matrix();
    let res = hnf(&a);
    let el = within(start, Duration::from_millis(100))?;
    ensure(res.h == IntegerMatrix::from_i64_rows(&[[1, 0, 0, 0], [0, 1, 0, 0]]), || {
        format!("H = {:?}", res.h.to_rows())
    })?;
    ensure(a.mul(&res.u).unwrap() == res.h, || "A U != H".into())?;
    let det = determinant(&res.u).map_err(|e| e.to_string())?;
    ensure(det == BigInt::one() || det == -BigInt::one(), || format!("det U = {det}"))?;
    Ok(format!("H = [[1,0,0,0],[0,1,0,0]], |det U| = 1, {el:?}"))
}

/// Nonnegative solutions of `3a+5b+8c+9d = nu`, `a+b+c+d = n` by nested loops.
fn brute_phi(nu: i64, n: i64) -> i64 {
    let mut count = 0;
    for a in 0..=n {
        for b in 0..=n - a {
            for c in 0..=n - a - b {
                let d = n - a - b - c;
                count += (3 * a + 5 * b + 8 * c + 9 * d == nu) as i64;
            }
        }
    }
    count
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let a = a_matrix();
    let w = WeightSystem::new(vec![3, 5, 8, 9]).unwrap();
    let mut grid: Vec<(i64, i64)> = (0..=8i64)
        .flat_map(|n| (0..=9 * n + 2).map(move |nu| (nu, n)))
        .collect();
    let stride = grid.len() / 49;
    grid = grid.into_iter().step_by(stride).take(49).collect();
    grid.push((30, 5));
    for &(nu, n) in &grid {
        let b = bigvec(&[nu, n]);
        let direct = enumerate_lattice_points(&fiber_polytope(&a, &b).unwrap()).unwrap().len();
        let reduced = match reduce_to_full_dim(&a, &b).unwrap() {
            None => 0,
            Some(r) => enumerate_lattice_points(&r.q).unwrap().len(),
        };
        let phi = w.evaluate(nu, n);
        let oracle = brute_phi(nu, n);
        ensure(
            BigInt::from(direct) == phi && BigInt::from(reduced) == phi && phi == BigInt::from(oracle),
            || format!("(nu, n) = ({nu}, {n}): direct {direct}, reduced {reduced}, phi {phi}, brute {oracle}"),
        )?;
    }
    ensure(w.evaluate(30, 5) == BigInt::from(2), || "phi(30,5) != 2".into())?;
    let el = within(start, Duration::from_secs(5))?;
    Ok(format!("{} right-hand sides agree, phi(30,5) = 2, {el:?}", grid.len()))
}

fn certified_chambers(degrees: &[i64]) -> Result<Vec<QuasiPolynomial>, String> {
    let w = WeightSystem::new(degrees.to_vec()).unwrap();
    chamber_complex(&w)
        .iter()
        .map(|c| {
            fit_quasi_polynomial(&w, c, &Window::new(41..=60), &Window::new(31..=40))
                .map_err(|e| format!("{degrees:?} chamber {:?}-{:?}: {e}", c.low_ray, c.high_ray))
        })
        .collect()
}

fn criteria_3_and_4() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut fits = Vec::new();
    for ds in [[3, 5, 8, 9], [3, 5, 7, 9]] {
        match certified_chambers(&ds) {
            Ok(q) => fits.push((ds, q)),
            Err(e) => return (Err(e.clone()), Err(format!("no certified fit: {e}"))),
        }
    }
    let c3 = within(start, Duration::from_secs(60)).map(|el| {
        let n: usize = fits.iter().map(|(_, q)| q.len()).sum();
        format!("{n} chambers certified on 31 <= t <= 40, {el:?}")
    });
    let max_deg = fits
        .iter()
        .flat_map(|(_, qs)| qs.iter().map(|q| q.max_degree()))
        .max()
        .unwrap_or(0);
    let c4 = ensure(max_deg <= 2, || format!("degree {max_deg} > 2")).map(|_| format!("max total degree {max_deg}"));
    (c3, c4)
}

/// Boundary-inclusive lattice points of a simple polygon by crossing tests.
fn brute_polygon_points(v: &[(i64, i64)]) -> i64 {
    let n = v.len();
    let on_segment = |p: (i64, i64), a: (i64, i64), b: (i64, i64)| {
        let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
        cross == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
    };
    let mut count = 0;
    for x in -5..=5 {
        for y in -5..=5 {
            let p = (x, y);
            if (0..n).any(|k| on_segment(p, v[k], v[(k + 1) % n])) {
                count += 1;
                continue;
            }
            let mut inside = false;
            for k in 0..n {
                let (a, b) = (v[k], v[(k + 1) % n]);
                if (a.1 > y) != (b.1 > y) {
                    // x-coordinate of the crossing compared exactly.
                    let lhs = (x - a.0) * (b.1 - a.1);
                    let rhs = (b.0 - a.0) * (y - a.1);
                    if (b.1 > a.1 && lhs < rhs) || (b.1 < a.1 && lhs > rhs) {
                        inside = !inside;
                    }
                }
            }
            count += inside as i64;
        }
    }
    count
}

fn random_simple_polygon(rng: &mut StdRng) -> Vec<(i64, i64)> {
    loop {
        let k = rng.random_range(3..=8);
        let mut pts: Vec<(i64, i64)> = (0..k)
            .map(|_| (rng.random_range(-5..=5), rng.random_range(-5..=5)))
            .collect();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            continue;
        }
        // Sort by angle around the centroid, then keep only simple results.
        let cx: f64 = pts.iter().map(|p| p.0 as f64).sum::<f64>() / pts.len() as f64;
        let cy: f64 = pts.iter().map(|p| p.1 as f64).sum::<f64>() / pts.len() as f64;
        pts.sort_by(|a, b| {
            let ta = (a.1 as f64 - cy).atan2(a.0 as f64 - cx);
            let tb = (b.1 as f64 - cy).atan2(b.0 as f64 - cx);
            ta.partial_cmp(&tb).unwrap()
        });
        if check_simple_polygon(&pts).is_ok() {
            return pts;
        }
    }
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..20 {
        let poly = random_simple_polygon(&mut rng);
        let pick = pick_count(&poly).map_err(|e| format!("{poly:?}: {e}"))?;
        let brute = brute_polygon_points(&poly);
        ensure(pick == BigInt::from(brute), || format!("{poly:?}: Pick {pick}, brute {brute}"))?;
    }
    let cases: [(&str, Vec<Vec<i64>>, IntBox); 3] = [
        ("unit square", vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]], IntBox::new(vec![-3, -3], vec![4, 4])),
        ("triangle", vec![vec![0, 0], vec![2, 0], vec![0, 2]], IntBox::new(vec![-3, -3], vec![5, 5])),
        ("segment [0,5]", vec![vec![0], vec![5]], IntBox::new(vec![-4], vec![9])),
    ];
    for (name, verts, bx) in cases {
        let verts: Vec<Vec<BigInt>> = verts.iter().map(|v| bigvec(v)).collect();
        let rep = brion_check(&verts, &bx).map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.holds, || format!("Brion identity fails on {name}"))?;
    }
    Ok("Pick on 20 random simple polygons; Brion on square, triangle, segment".into())
}

fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::from_slices(n, gens).unwrap()
}

fn criterion_6() -> Outcome {
    let mut corpus: Vec<MonomialIdeal> = Vec::new();
    for d in 1..=5 {
        corpus.push(MonomialIdeal::maximal(2).power(d));
    }
    let ci = MonomialIdeal::pure_powers(&[2, 3]);
    for t in 1..=5 {
        corpus.push(ci.power(t));
    }
    corpus.extend([
        MonomialIdeal::maximal(3).power(2),
        ideal(3, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[1, 1, 1]]),
        ideal(3, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]),
        ideal(3, &[&[3, 0, 0], &[2, 1, 0], &[0, 2, 1], &[0, 0, 4], &[1, 0, 2]]),
        ideal(2, &[&[4, 0], &[3, 1], &[1, 3], &[0, 4]]),
        ideal(3, &[&[1, 2, 3]]),
        ideal(3, &[&[2, 0, 0], &[1, 1, 0], &[0, 3, 0], &[0, 1, 1], &[0, 0, 2], &[1, 0, 1]]),
    ]);
    for i in &corpus {
        ensure(i.nvars() <= 3 && i.generators().len() <= 10, || format!("{i} outside the corpus bounds"))?;
        let koszul = multigraded_betti(i).map_err(|e| e.to_string())?;
        let taylor = taylor_betti_oracle(i).map_err(|e| e.to_string())?;
        ensure(koszul == taylor, || format!("{i}: Koszul and Taylor disagree"))?;
        let table = graded_betti(i).map_err(|e| e.to_string())?;
        if let Some((nu, lhs, rhs)) = hilbert_consistency(i, &table, 0..=20) {
            return Err(format!("{i}: Hilbert identity fails at degree {nu} ({lhs} vs {rhs})"));
        }
    }
    Ok(format!("{} ideals: oracle equivalence and Hilbert identity on [0,20]", corpus.len()))
}

fn criterion_7() -> Outcome {
    for (ds, t_max) in [(vec![2, 3], 6), (vec![3, 5, 8, 9], 4)] {
        let rep = certify_ci_bridge(&ds, t_max).map_err(|e| e.to_string())?;
        ensure(rep.holds, || format!("{ds:?}: {:?}", rep.first_discrepancy))?;
    }
    Ok("beta_0 of CI powers equals phi_A for (x^2,y^3), t <= 6 and degrees 3,5,8,9, t <= 4".into())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let ci = MonomialIdeal::pure_powers(&[2, 3]);
    let w = weight_system_of(&ci).unwrap();
    let fam = betti_family(&Filtration::powers(&ci, 12)).map_err(|e| e.to_string())?;
    let later: Vec<_> = [13u32, 14].iter().map(|&t| (t as i64, graded_betti(&ci.power(t)).unwrap())).collect();
    for i in [0usize, 1] {
        let r = detect_regions(&fam, i, &w, 3..=9, 10..=12, &RegionOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.lines.iter().all(|l| l.a == 2 || l.a == 3), || format!("i = {i}: slopes {:?}", r.lines))?;
        ensure(r.d == 1, || format!("i = {i}: D = {}", r.d))?;
        ensure(r.polys.iter().all(|p| p.poly.to_string() == "1"), || format!("i = {i}: non-constant polynomial"))?;
        for (t, table) in &later {
            for mu in 0..=3 * t + 6 {
                let p = predict(&r, mu, *t).map_err(|e| e.to_string())?;
                ensure(p == BigInt::from(table.get(i, mu as u32)), || format!("i = {i}, (mu, t) = ({mu}, {t})"))?;
            }
        }
    }
    let el = within(start, Duration::from_secs(120))?;
    Ok(format!("lines with slopes in {{2,3}}, D = 1, Q = 1, predictions exact at t = 13, 14, {el:?}"))
}

fn criterion_9() -> Outcome {
    let c = MonomialIdeal::pure_powers(&[3, 3]);
    let f = Filtration::new(FiltrationKind::IntegralClosure, c.clone(), 8).map_err(|e| e.to_string())?;
    let rep = good_filtration_check(&f, &c).map_err(|e| e.to_string())?;
    ensure(rep.containment && rep.good, || format!("integral closure report {rep:?}"))?;
    let n0 = rep.n0.unwrap();
    let fam = betti_family(&f).map_err(|e| e.to_string())?;
    let w = weight_system_of(&c).unwrap();
    detect_regions(&fam, 0, &w, 3..=6, 7..=8, &RegionOptions::default()).map_err(|e| e.to_string())?;

    let i = ideal(2, &[&[4, 0], &[3, 1], &[1, 3], &[0, 4]]);
    let rr = ratliff_rush(&i, 10);
    ensure(rr.ideal.contains_monomial(&[2, 2]), || format!("Ratliff-Rush closure {} lacks x^2 y^2", rr.ideal))?;
    let rf = Filtration::new(FiltrationKind::RatliffRush, i.clone(), 6).map_err(|e| e.to_string())?;
    let rrep = good_filtration_check(&rf, &i).map_err(|e| e.to_string())?;
    ensure(rrep.good, || format!("Ratliff-Rush filtration report {rrep:?}"))?;
    Ok(format!(
        "closure filtration good with n0 = {n0}, regions certified; Ratliff-Rush good with n0 = {}",
        rrep.n0.unwrap()
    ))
}

fn criterion_10() -> Outcome {
    let i = MonomialIdeal::maximal(2).power(2);
    let r = is_reduction(&ideal(2, &[&[2, 0], &[0, 2]]), &i, 6).map_err(|e| e.to_string())?;
    ensure(r == Some(1), || format!("(x^2,y^2): {r:?}"))?;
    let none = is_reduction(&ideal(2, &[&[2, 0]]), &i, 6).map_err(|e| e.to_string())?;
    ensure(none.is_none(), || format!("(x^2): {none:?}"))?;
    Ok("r = 1 for (x^2,y^2); none within 6 for (x^2)".into())
}

fn main() {
    let (c3, c4) = criteria_3_and_4();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "HNF reproduction", criterion_1()),
        (2, "fiber-polytope pipeline", criterion_2()),
        (3, "quasi-polynomial certification", c3),
        (4, "degree bound", c4),
        (5, "Pick and Brion identities", criterion_5()),
        (6, "Betti oracle equivalence", criterion_6()),
        (7, "complete-intersection bridge", criterion_7()),
        (8, "region detection on (x^2,y^3) powers", criterion_8()),
        (9, "good filtrations", criterion_9()),
        (10, "reduction check", criterion_10()),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(msg) => println!("criterion {n:>2} PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {msg}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
