//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the console.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{E, FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use freedom_core::arith::{
    enumerate_level_elements, residue_group_order, stable_systole, systole_certificate, CongruenceLevel,
    FuchsianParams, GroupElement,
};
use freedom_core::baselines::{loewner_ratio, pu_ratio, Lattice2D, RoundProjectivePlane, LOEWNER_BOUND};
use freedom_core::pipeline::{
    antipodal_cycle, graph_quotient_systole_check, random_cubic_double_cover, run_pipeline, ConstructionParams,
};
use freedom_core::surgery::{
    chart_volume, cutoff_phi, euclidean_solid_torus_volume, pullback_metric, substitution_length_bound, BetaTwist,
    ChartBox, ChartPoint, CoordinateMap, EuclideanTube, GluingMap, JacobianMode, Pullback, RadialStretch,
    SmoothProfile, SurgeryChartConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p3() -> FuchsianParams {
    FuchsianParams::new(3).unwrap()
}

fn level(n: i64) -> CongruenceLevel {
    CongruenceLevel::new(n).unwrap()
}

fn loewner_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 200 {
        let u = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let v = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let Ok(lattice) = Lattice2D::new(u, v) else { continue };
        if lattice.covolume() < 1e-3 {
            continue;
        }
        let r = loewner_ratio(&lattice);
        ensure(r <= LOEWNER_BOUND + 1e-12, || {
            format!("ratio {r} for basis {u:?}, {v:?}")
        })?;
        worst = worst.max(r);
        count += 1;
    }
    let hex = loewner_ratio(&Lattice2D::hexagonal());
    ensure((hex - LOEWNER_BOUND).abs() < 1e-9, || format!("hexagonal ratio {hex}"))?;
    Ok(format!("200 lattices, max ratio {worst:.6}; hexagonal {hex:.12}"))
}

fn pu_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let r = 10f64.powf(rng.gen_range(-3.0..3.0));
        let dev = (pu_ratio(&RoundProjectivePlane::new(r).unwrap()) - FRAC_PI_2).abs();
        ensure(dev <= 1e-12, || format!("radius {r}: deviation {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("50 radii, max |ratio - pi/2| = {worst:e}"))
}

fn random_element(rng: &mut ChaCha8Rng, gens: &[GroupElement]) -> GroupElement {
    (0..rng.gen_range(1..=5)).fold(GroupElement::identity(p3()), |acc, _| {
        acc.multiply(&gens[rng.gen_range(0..gens.len())]).unwrap()
    })
}

fn group_arithmetic() -> Check {
    let gens: Vec<GroupElement> = [[2, 1, 0, 0], [2, 0, 0, 1], [3, 2, 2, 0], [0, 0, 1, 0]]
        .iter()
        .map(|&[a, b, c, d]| GroupElement::new(a, b, c, d, p3()).unwrap())
        .flat_map(|g| [g, g.inverse()])
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..1000 {
        let (x, y) = (random_element(&mut rng, &gens), random_element(&mut rng, &gens));
        let [a, b, c, d] = x.multiply(&y).map_err(|e| e.to_string())?.coords().map(i128::from);
        ensure(a * a - 3 * b * b + c * c - 3 * d * d == 1, || {
            format!("{x} * {y} leaves the group")
        })?;
        let [a, b, c, d] = x.coords();
        let inv = x.inverse();
        ensure(inv == GroupElement::new(a, -b, -c, -d, p3()).unwrap(), || {
            format!("inverse of {x}")
        })?;
        ensure(x.multiply(&inv).unwrap().is_identity(), || format!("{x} * inverse"))?;
    }
    for _ in 0..200 {
        let (x, y, z) = (
            random_element(&mut rng, &gens),
            random_element(&mut rng, &gens),
            random_element(&mut rng, &gens),
        );
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        ensure(left == right, || format!("({x} {y}) {z} != {x} ({y} {z})"))?;
    }
    Ok("1000 products, 1000 inverses, 200 triples".into())
}

fn brute_force(n: i64, trace_bound: i64, box_bound: i64) -> BTreeMap<i64, BTreeSet<[i64; 4]>> {
    let c_max = ((6 * box_bound * box_bound) as f64).sqrt() as i64 + 1;
    let mut out: BTreeMap<i64, BTreeSet<[i64; 4]>> = BTreeMap::new();
    for a in 2..=trace_bound / 2 {
        for b in -box_bound..=box_bound {
            for c in -c_max..=c_max {
                for d in -box_bound..=box_bound {
                    let unit = (a - 1) % n == 0 || (a + 1) % n == 0;
                    if a * a - 3 * b * b + c * c - 3 * d * d == 1 && unit && b % n == 0 && c % n == 0 && d % n == 0 {
                        out.entry(2 * a).or_default().insert([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

fn systole_oracle() -> Check {
    let spectrum = enumerate_level_elements(p3(), level(2), 20, 50).map_err(|e| e.to_string())?;
    let found: BTreeMap<i64, BTreeSet<[i64; 4]>> = spectrum
        .entries
        .iter()
        .map(|e| (e.abs_trace, e.witnesses.iter().copied().collect()))
        .collect();
    let oracle = brute_force(2, 20, 50);
    ensure(found == oracle, || "enumeration differs from the quadruple loop".into())?;
    let check = stable_systole(p3(), level(2), 20, 50).map_err(|e| e.to_string())?;
    let want = 2.0 * 3f64.acosh();
    let cert = &check.certificate;
    ensure((cert.length - want).abs() < 1e-12, || format!("length {}", cert.length))?;
    ensure((cert.length - 3.52549).abs() < 1e-5, || {
        format!("length {}", cert.length)
    })?;
    ensure(cert.witness.coords() == [3, 2, 2, 0], || {
        format!("witness {}", cert.witness)
    })?;
    ensure(check.stable, || {
        format!("doubled box gives {}", check.doubled_box_length)
    })?;
    let oracle_min = *oracle.keys().next().unwrap();
    ensure(oracle_min == 6, || format!("oracle minimal trace {oracle_min}"))?;
    Ok(format!(
        "length {:.12}, witness {:?}, {} traces agree, stable at box 100",
        cert.length,
        cert.witness.coords(),
        oracle.len()
    ))
}

fn residue_orders() -> Check {
    let exhaustive = |n: i64| -> u64 {
        let mut count = 0u64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if (a * a - 3 * b * b + c * c - 3 * d * d - 1).rem_euclid(n) == 0 {
                            count += 1;
                        }
                    }
                }
            }
        }
        if n > 2 {
            count / 2
        } else {
            count
        }
    };
    for (n, want) in [(2, 8), (3, 18)] {
        let got = residue_group_order(p3(), level(n));
        ensure(got == want && exhaustive(n) == want, || {
            format!("N = {n}: {got} vs {want}")
        })?;
    }
    // fitted window: N² ≤ order ≤ N³
    let (lo_c, hi_c) = (1.0, 1.0);
    let mut table = Vec::new();
    for n in [2i64, 3, 5, 7, 11] {
        let order = residue_group_order(p3(), level(n));
        ensure(order == exhaustive(n), || format!("N = {n}: exhaustive count differs"))?;
        let nf = n as f64;
        let o = order as f64;
        ensure(lo_c * nf * nf <= o && o <= hi_c * nf * nf * nf, || {
            format!("N = {n}: order {o}")
        })?;
        table.push(format!("{n}:{order}"));
    }
    Ok(format!("orders {}; window c = {lo_c}, C = {hi_c}", table.join(" ")))
}

fn systole_growth() -> Check {
    const LOWER: f64 = 3.5;
    let rows: Vec<(i64, Option<f64>)> = (2..=16)
        .into_par_iter()
        .map(|n| (n, systole_certificate(p3(), level(n), 2000, 200).ok().map(|c| c.length)))
        .collect();
    let mut min_ratio = f64::INFINITY;
    let mut certified = 0;
    for (n, length) in rows {
        if let Some(l) = length {
            let ratio = l / (n as f64).ln();
            ensure(ratio >= LOWER, || format!("N = {n}: sys/ln N = {ratio}"))?;
            min_ratio = min_ratio.min(ratio);
            certified += 1;
        }
    }
    ensure(certified >= 10, || format!("only {certified} levels certified"))?;
    Ok(format!(
        "{certified} levels in 2..=16, min sys/ln N = {min_ratio:.4} >= {LOWER}"
    ))
}

fn surgery_regularity() -> Check {
    let cfg = SurgeryChartConfig::default();
    let report = freedom_core::surgery::verify_surgery_chart(&cfg).map_err(|e| e.to_string())?;
    ensure(report.samples == 10_000, || format!("{} samples", report.samples))?;
    ensure(report.min_eigenvalue_proxy > 0.0, || {
        format!("min eigenvalue {}", report.min_eigenvalue_proxy)
    })?;
    ensure(report.interface_max_mismatch <= 1e-6, || {
        format!("mismatch {}", report.interface_max_mismatch)
    })?;
    let (eps, delta) = (cfg.eps, cfg.eps / 4.0);
    let mid = cutoff_phi(eps + delta / 2.0, eps, delta, cfg.profile);
    ensure(mid == 0.5, || format!("phi at mid-collar {mid}"))?;

    let f = GluingMap::new(cfg.loop_length, eps, delta).unwrap();
    let r0 = f.inner_radius();
    let mut worst: f64 = 0.0;
    for (r, ri) in [(r0, eps), (r0 + delta, eps + delta)] {
        for (th, ti) in [(0.0, 0.0), (TAU, cfg.loop_length)] {
            for (t, thi) in [(0.0, 0.0), (TAU * eps, TAU)] {
                let y = f.apply(&ChartPoint::new(r, th, t)).map_err(|e| e.to_string())?;
                worst = worst.max((y - ChartPoint::new(ri, thi, ti)).abs().max());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("corner error {worst:e}"))?;
    Ok(format!(
        "10^4 samples PD (min eigenvalue {:.3e}), interface mismatch {:.1e}, corner error {worst:.1e}",
        report.min_eigenvalue_proxy, report.interface_max_mismatch
    ))
}

fn pullback_agreement() -> Check {
    let fd = JacobianMode::FiniteDifference { step: 1e-6 };
    let (l, eps, delta) = (TAU, 0.1, 0.025);
    let f = GluingMap::new(l, eps, delta).unwrap();
    let beta = BetaTwist::with_default_width(eps, SmoothProfile::Quintic).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut worst: f64 = 0.0;
    let r0 = f.inner_radius();
    for _ in 0..20 {
        let m = 1e-4;
        let x = ChartPoint::new(
            rng.gen_range(r0 + m..r0 + delta - m),
            rng.gen_range(m..TAU - m),
            rng.gen_range(m..TAU * eps - m),
        );
        let y = ChartPoint::new(
            rng.gen_range(0.05..1.5),
            rng.gen_range(0.0..TAU),
            rng.gen_range(m..TAU * eps - m),
        );
        for (a, b) in [
            (
                pullback_metric(&f, &EuclideanTube, &x, JacobianMode::Analytic),
                pullback_metric(&f, &EuclideanTube, &x, fd),
            ),
            (
                pullback_metric(&beta, &EuclideanTube, &y, JacobianMode::Analytic),
                pullback_metric(&beta, &EuclideanTube, &y, fd),
            ),
        ] {
            let (a, b) = (a.map_err(|e| e.to_string())?, b.map_err(|e| e.to_string())?);
            let gap = (a - b).norm() / a.norm();
            ensure(gap < 1e-6, || format!("relative gap {gap:e}"))?;
            worst = worst.max(gap);
        }
    }
    Ok(format!("20 points per map, max relative gap {worst:.1e}"))
}

fn volume_quadrature() -> Check {
    let (r_max, t_period) = (1.25, 0.2 * PI);
    let exact = PI * r_max * r_max * t_period;
    let est = euclidean_solid_torus_volume(&EuclideanTube, r_max, t_period, 1e-6 * r_max, [64, 8, 4])
        .map_err(|e| e.to_string())?;
    let rel = (est.volume - exact).abs() / exact;
    ensure(rel <= 1e-4, || format!("relative error {rel:e}"))?;

    // The polar-chart integrand is linear in r, so the midpoint rule is exact
    // there; convergence is measured in the chart r = R·u².
    let g = Pullback::new(RadialStretch { r_max }, EuclideanTube);
    let dom = ChartBox::new([0.0, 0.0, 0.0], [1.0, TAU, t_period]).unwrap();
    let err = |n: usize| -> Result<f64, String> {
        Ok((chart_volume(&g, &dom, [n, 4, 2]).map_err(|e| e.to_string())?.volume - exact).abs())
    };
    let ratio = err(32)? / err(64)?;
    ensure((ratio - 4.0).abs() < 0.2, || format!("error ratio {ratio}"))?;
    Ok(format!(
        "relative error {rel:.1e}; halving the step divides the error by {ratio:.3}"
    ))
}

fn covering_inequality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let graphs: Vec<_> = (0..100)
        .map(|i| random_cubic_double_cover(4 + 2 * (i % 5), 6, &mut rng))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let checks: Vec<_> = graphs
        .par_iter()
        .map(graph_quotient_systole_check)
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let tight = checks.iter().filter(|c| c.quotient_sys == c.cover_sys / 2.0).count();
    ensure(checks.iter().all(|c| c.holds), || {
        "inequality fails on a random cover".into()
    })?;
    for n in [4, 6, 8, 10, 12] {
        let c = graph_quotient_systole_check(&antipodal_cycle(n).unwrap()).map_err(|e| e.to_string())?;
        ensure(c.cover_sys == n as f64 && c.quotient_sys == n as f64 / 2.0, || {
            format!("C{n}: cover {}, quotient {}", c.cover_sys, c.quotient_sys)
        })?;
    }
    Ok(format!("100 random covers hold ({tight} tight); equality on C4..C12"))
}

fn pipeline_vanishing() -> Check {
    let genus: Vec<u64> = [4, 9, 16].iter().map(|&k| E.powi(k).ceil() as u64).collect();
    let report = run_pipeline(&ConstructionParams::new(genus.clone())).map_err(|e| e.to_string())?;
    report.check_invariants().map_err(|e| e.to_string())?;
    ensure(report.rows.iter().all(|r| !r.pre_asymptotic), || {
        "unexpected pre-asymptotic row".into()
    })?;
    let ratios: Vec<f64> = report.rows.iter().map(|r| r.ratio_ub).collect();
    for (got, want) in ratios.iter().zip([0.5, 1.0 / 3.0, 0.25]) {
        ensure((got - want).abs() < 1e-3, || format!("ratio {got} vs {want}"))?;
    }
    ensure(ratios.windows(2).all(|w| w[1] < w[0]), || {
        "ratios do not decrease".into()
    })?;
    let scaled: Vec<f64> = report
        .rows
        .iter()
        .map(|r| r.ratio_ub * (r.g as f64).ln().sqrt())
        .collect();
    let drift = scaled
        .iter()
        .map(|s| (s - scaled[0]).abs() / scaled[0])
        .fold(0.0, f64::max);
    ensure(drift <= 1e-9, || format!("ratio·sqrt(ln g) drifts by {drift:e}"))?;
    for r in &report.rows {
        r.levels.check().map_err(|e| format!("g = {}: {e}", r.g))?;
    }
    Ok(format!("g = {genus:?}, ratios {ratios:.4?}, drift {drift:.1e}"))
}

fn substitution_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(112);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let eps = 10f64.powf(rng.gen_range(-12.0..0.0));
        let (n, g) = (rng.gen_range(0..10_000u64), rng.gen_range(2..5_000u64));
        let lhs = substitution_length_bound(eps, eps / 4.0, n, g);
        let rhs = 2.5 * PI * (n + 2 * g) as f64 * eps;
        let rel = (lhs - rhs).abs() / rhs;
        ensure(rel <= 1e-15, || {
            format!("eps {eps}, n {n}, g {g}: relative gap {rel:e}")
        })?;
        worst = worst.max(rel);
    }
    Ok(format!("1000 cases, max relative gap {worst:.1e}"))
}

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "Loewner suite", Some(Duration::from_secs(1)), loewner_suite),
        (2, "Pu suite", Some(Duration::from_secs(1)), pu_suite),
        (3, "group arithmetic", Some(Duration::from_secs(5)), group_arithmetic),
        (4, "systole oracle", Some(Duration::from_secs(30)), systole_oracle),
        (5, "residue orders", Some(Duration::from_secs(60)), residue_orders),
        (6, "systole growth", None, systole_growth),
        (
            7,
            "surgery metric regularity",
            Some(Duration::from_secs(30)),
            surgery_regularity,
        ),
        (8, "pullback correctness", None, pullback_agreement),
        (9, "volume quadrature", None, volume_quadrature),
        (10, "covering inequality", None, covering_inequality),
        (
            11,
            "pipeline vanishing",
            Some(Duration::from_secs(1)),
            pipeline_vanishing,
        ),
        (12, "substitution bound identity", None, substitution_identity),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
