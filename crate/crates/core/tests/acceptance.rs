//! Acceptance suite. Every check is exact; each criterion prints one
//! `PASS`/`FAIL` line and the process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tropkit::complex::Cell;
use tropkit::hodge::{default_lefschetz_class, lefschetz_check, random_vector};
use tropkit::linalg::{QMatrix, Q};
use tropkit::report::{self, GramChoice, KahlerChecks};
use tropkit::{
    bergman_fan, build_cochain_complex, cohomology_dims, CochainComplexQ, GradedChowRing, Matroid, MetrizedComplex, Signature,
    TangentCellComplex, WeightedComplex,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn kahler_family() -> Vec<(&'static str, Matroid)> {
    let k3 = [(0, 1), (0, 2), (1, 2)];
    let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut out: Vec<(&'static str, Matroid)> = [
        ("U12", 1, 2),
        ("U23", 2, 3),
        ("U24", 2, 4),
        ("U34", 3, 4),
        ("U25", 2, 5),
        ("U35", 3, 5),
        ("U45", 4, 5),
    ]
    .iter()
    .map(|&(name, r, n)| (name, Matroid::uniform(r, n).unwrap()))
    .collect();
    out.push(("K3", Matroid::graphic(&k3).unwrap()));
    out.push(("K4", Matroid::graphic(&k4).unwrap()));
    out
}

fn kahler_sweep() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (name, m) in kahler_family() {
        let ring = GradedChowRing::build(&m).map_err(|e| format!("{name}: {e}"))?;
        let l = default_lefschetz_class(&ring);
        for p in 0..=ring.top_degree() / 2 {
            let hl = ring.check_hard_lefschetz(&l, p).map_err(|e| e.to_string())?;
            let hr = ring.check_hodge_riemann(&l, p).map_err(|e| e.to_string())?;
            ensure(hl.is_iso, || format!("{name}: hard Lefschetz fails at p={p}"))?;
            ensure(hr.holds, || format!("{name}: Hodge–Riemann fails at p={p}: {:?}", hr.signature))?;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("sweep took {elapsed:?}"))?;
    Ok(format!("{checked} (matroid, p) pairs in {} ms", elapsed.as_millis()))
}

fn log_concavity() -> Outcome {
    for (name, m) in kahler_family() {
        let rep = m.check_log_concavity();
        ensure(rep.holds, || format!("{name}: violations at {:?} in {:?}", rep.violations, rep.whitney))?;
        let (a, b) = (m.characteristic_polynomial(), m.characteristic_polynomial_deletion_contraction());
        ensure(a == b, || format!("{name}: χ routes disagree: {:?} vs {:?}", a.coeffs(), b.coeffs()))?;
    }
    Ok("9 matroids, χ by Möbius = χ by deletion–contraction".into())
}

fn uniform_fans() -> Vec<(String, WeightedComplex)> {
    let mut out = Vec::new();
    for n in 1..=5 {
        for r in 1..=n {
            out.push((format!("U{r}{n}"), bergman_fan(&Matroid::uniform(r, n).unwrap()).unwrap()));
        }
    }
    out
}

fn balancing() -> Outcome {
    let mut flips = 0;
    for (name, fan) in uniform_fans() {
        let v = fan.validate().map_err(|e| format!("{name}: {e}"))?;
        ensure(v.check_balancing().unwrap().balanced, || format!("{name} is not balanced"))?;
        // A zero-dimensional fan has no codimension-one faces to unbalance.
        if v.pure_dim() == Some(0) {
            continue;
        }
        let k = v.maximal_cells().len();
        for m in 0..k {
            let mut w = vec![1; k];
            w[m] = 2;
            let rep = v.reweighted(&w).unwrap().check_balancing().unwrap();
            let witness = rep.entries.iter().find(|e| !e.balanced);
            ensure(!rep.balanced && witness.is_some_and(|e| e.defect.iter().any(|x| !x.is_zero())), || {
                format!("{name}: doubling maximal cell #{m} stays balanced")
            })?;
            flips += 1;
        }
    }
    Ok(format!("15 fans balanced; {flips} single-weight flips all unbalanced with nonzero defect"))
}

fn cross() -> WeightedComplex {
    let rays = [[1, 0], [-1, 0], [0, 1], [0, -1]].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut cells = vec![Cell::new(vec![0], vec![])];
    cells.extend((0..4).map(|i| Cell::weighted(vec![0], vec![i], 1)));
    WeightedComplex::new(2, vec![vec![Q::zero(), Q::zero()]], rays, cells)
}

fn q_smoothness() -> Outcome {
    for (name, fan) in uniform_fans() {
        let rep = fan.validate().unwrap().check_q_smooth_codim1().map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.smooth && rep.entries.iter().all(|e| e.kernel_dim == 1), || format!("{name}: {:?}", rep.entries))?;
    }
    let v = cross().validate().unwrap();
    ensure(v.check_balancing().unwrap().balanced, || "cross is not balanced".into())?;
    let rep = v.check_q_smooth_codim1().unwrap();
    ensure(!rep.smooth && rep.entries.iter().any(|e| e.kernel_dim == 2), || format!("cross: {:?}", rep.entries))?;
    Ok("15 fans with kernel dimension 1; cross fails with kernel dimension 2".into())
}

fn compactified(m: &Matroid) -> TangentCellComplex {
    let fan = bergman_fan(m).unwrap().validate().unwrap();
    TangentCellComplex::from_compactified(&fan.canonical_compactification().unwrap())
}

fn cohomology_identification() -> Outcome {
    let mut summary = Vec::new();
    for (name, r, n) in [("U23", 2, 3), ("U34", 3, 4)] {
        let m = Matroid::uniform(r, n).unwrap();
        let ring = GradedChowRing::build(&m).unwrap();
        let tc = compactified(&m);
        for p in 0..=ring.top_degree() {
            let h = cohomology_dims(&tc, p).map_err(|e| e.to_string())?;
            for (qd, &x) in h.iter().enumerate() {
                let expected = if p == qd { ring.dim(p) } else { 0 };
                ensure(x == expected, || format!("{name}: dim H^{{{p},{qd}}} = {x}, expected {expected}"))?;
            }
        }
        summary.push(format!("{name} {:?}", ring.dims()));
    }
    Ok(format!("H^{{p,p}} = A^p, off-diagonal zero: {}", summary.join(", ")))
}

fn hodge_complexes() -> Vec<(String, CochainComplexQ)> {
    let mut out = vec![("interval".to_string(), CochainComplexQ::new(vec![2, 1], vec![QMatrix::from_i64_rows(&[&[1, -1]])]).unwrap())];
    let pts = |v: &[[i64; 2]]| -> Vec<Vec<Q>> { v.iter().map(|p| p.iter().map(|&x| Q::from_integer(x.into())).collect()).collect() };
    let tri = pts(&[[0, 0], [1, 0], [0, 1]]);
    let triangle = WeightedComplex::new(2, tri.clone(), vec![], vec![Cell::weighted(vec![0, 1, 2], vec![], 1)]).with_face_closure();
    let circle = WeightedComplex::new(
        2,
        tri,
        vec![],
        vec![Cell::weighted(vec![0, 1], vec![], 1), Cell::weighted(vec![0, 2], vec![], 1), Cell::weighted(vec![1, 2], vec![], 1)],
    )
    .with_face_closure();
    for (name, c, ps) in [("triangle", triangle, 0..=2), ("circle", circle, 0..=1)] {
        let tc = TangentCellComplex::from_bounded(&c.validate().unwrap()).unwrap();
        for p in ps {
            out.push((format!("{name} p={p}"), build_cochain_complex(&tc, p).unwrap().complex));
        }
    }
    let line = WeightedComplex::tropical_line([1, 1, 1]).validate().unwrap();
    let tc = TangentCellComplex::from_compactified(&line.canonical_compactification().unwrap());
    for p in 0..=1 {
        out.push((format!("compactified line p={p}"), build_cochain_complex(&tc, p).unwrap().complex));
    }
    for (name, r, n) in [("U24", 2, 4), ("U34", 3, 4)] {
        let tc = compactified(&Matroid::uniform(r, n).unwrap());
        for p in 0..r {
            out.push((format!("compactified {name} p={p}"), build_cochain_complex(&tc, p).unwrap().complex));
        }
    }
    out
}

fn hodge() -> Outcome {
    const SEEDS: u64 = 5;
    const ADJUNCTION_VECTORS: usize = 100;
    const DECOMPOSITIONS_PER_DEGREE: usize = 3;
    let complexes = hodge_complexes();
    for (name, c) in &complexes {
        let h = c.cohomology_dims();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for seed in 0..SEEDS {
            let mc = MetrizedComplex::seeded(c.clone(), seed);
            let rep = mc.verify_hodge_isomorphism().map_err(|e| e.to_string())?;
            let harmonic: Vec<usize> = rep.degrees.iter().map(|d| d.harmonic_dim).collect();
            ensure(rep.holds && harmonic == h, || format!("{name} seed {seed}: ker Δ {harmonic:?} vs H {h:?}"))?;
            for qd in 0..c.len() {
                for _ in 0..DECOMPOSITIONS_PER_DEGREE {
                    let w = random_vector(&mut rng, c.dims()[qd]);
                    let dec = mc.hodge_decompose(qd, &w).map_err(|e| e.to_string())?;
                    let cross = dec.cross_inner_products(&mc);
                    ensure(dec.recomposes() && cross.iter().all(Zero::is_zero) && dec.verify(&mc).unwrap(), || {
                        format!("{name} seed {seed}: decomposition in degree {qd} is not exact")
                    })?;
                }
            }
            if c.len() >= 2 {
                for i in 0..ADJUNCTION_VECTORS {
                    let qd = i % (c.len() - 1);
                    let w = random_vector(&mut rng, c.dims()[qd]);
                    let e = random_vector(&mut rng, c.dims()[qd + 1]);
                    let defect = mc.adjunction_defect(qd, &w, &e).map_err(|e| e.to_string())?;
                    ensure(defect.is_zero(), || format!("{name} seed {seed}: adjunction defect {defect}"))?;
                }
            }
        }
    }
    Ok(format!("{} complexes × {SEEDS} seeded Grams; {ADJUNCTION_VECTORS} adjunction pairs each", complexes.len()))
}

fn hodge_riemann_inertia() -> Outcome {
    for (name, m) in kahler_family() {
        let ring = GradedChowRing::build(&m).unwrap();
        let rep = lefschetz_check(&ring, &default_lefschetz_class(&ring)).map_err(|e| e.to_string())?;
        for (p, sig) in rep.hr.iter().enumerate() {
            let expected = Signature::new(rep.primitive_dims[p], 0, 0);
            ensure(*sig == expected, || format!("{name} p={p}: inertia {sig:?}, expected {expected:?}"))?;
        }
        let d = ring.dims();
        let r = ring.top_degree();
        ensure((0..=r).all(|p| d[p] == d[r - p]), || format!("{name}: dims {d:?} are not palindromic"))?;
    }
    Ok("Prim A^p positive definite for all 9 matroids; Poincaré duality on dims".into())
}

fn report_bundle() -> Vec<String> {
    let u34 = Matroid::uniform(3, 4).unwrap();
    let k4 = Matroid::graphic(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let checks: KahlerChecks = "hl,hr".parse().unwrap();
    let mut out = vec![
        report::matroid_chow(&u34, None, checks).unwrap().to_json(),
        report::matroid_chow(&k4, None, checks).unwrap().to_json(),
        report::matroid_logconcave(&k4).to_json(),
    ];
    let u35 = bergman_fan(&Matroid::uniform(3, 5).unwrap()).unwrap();
    out.push(report::complex_validate(&u35, true, true).to_json());
    out.push(report::complex_validate(&cross(), true, true).to_json());
    let fan = bergman_fan(&u34).unwrap();
    out.push(report::complex_cohomology(&fan, 1, true).unwrap().to_json());
    let tc = report::tangent_complex(&fan, true).unwrap();
    for (p, seed) in [(0, 3), (2, 4)] {
        let cochains = build_cochain_complex(&tc, p).unwrap();
        let mc = report::metrize_cellular(&tc, &cochains, GramChoice::Seed(seed)).unwrap();
        out.push(report::hodge_verify(&mc, 4, seed).unwrap().to_json());
    }
    out
}

fn determinism() -> Outcome {
    let run = |threads: usize| -> Vec<String> {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(report_bundle)
    };
    let reference = run(1);
    for threads in [1, 4, 4] {
        let again = run(threads);
        for (i, (a, b)) in reference.iter().zip(&again).enumerate() {
            ensure(a.as_bytes() == b.as_bytes(), || format!("report #{i} differs with {threads} threads"))?;
        }
    }
    Ok(format!("{} reports byte-identical across 4 runs with 1 and 4 threads", reference.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("kahler_sweep", kahler_sweep),
        ("log_concavity", log_concavity),
        ("balancing", balancing),
        ("q_smoothness", q_smoothness),
        ("cohomology_identification", cohomology_identification),
        ("hodge_decomposition", hodge),
        ("hodge_riemann_inertia", hodge_riemann_inertia),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic.downcast_ref::<String>().cloned().or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
