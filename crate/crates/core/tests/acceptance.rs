//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hypertoric::cohomology::{
    annihilator_verify, build_presentation, collapsed_lawrence_presentation, g_vector_macaulay_check,
    lefschetz_random, volume_cogenerators,
};
use hypertoric::exact::lattice::is_unimodular;
use hypertoric::exact::{int, rat, rat_from_int, Int};
use hypertoric::fans::{enumerate_chambers, lawrence_configuration, triangulation_from_theta};
use hypertoric::polyhedra::{
    betti_from_bounded_faces, euler_characteristic, AffineArrangement, BasisTable, PolyhedronSlice,
};
use hypertoric::quiver::ale_degree_generators;
use hypertoric::{Error, GaleDualPair, IntMatrix, MultiPoly, Quiver, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn ratv(t: &[Int]) -> Vec<Rat> {
    t.iter().map(rat_from_int).collect()
}

fn k23_theta() -> Vec<Int> {
    [-3, 2, 2, 2].iter().map(|&x| int(x)).collect()
}

fn trimmed(v: Vec<usize>) -> Vec<i64> {
    let end = v.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    v[..end].iter().map(|&x| x as i64).collect()
}

/// Matroid h-vector, Hilbert function and bounded-complex Betti numbers.
fn three_way(pair: &GaleDualPair, theta: &[Int]) -> Result<Vec<i64>, String> {
    let h = pair.b_matroid().h_vector().0;
    let p = build_presentation(pair).map_err(|e| e.to_string())?;
    let hf = trimmed(p.hilbert_function(pair.corank() + 1));
    let slice = PolyhedronSlice::lawrence(pair.a(), ratv(theta)).map_err(|e| e.to_string())?;
    let f = slice.bounded_complex().map_err(|e| e.to_string())?.f_vector;
    let betti = betti_from_bounded_faces(&f).map_err(|e| e.to_string())?;
    ensure!(h == hf && hf == betti, "h={h:?} hilbert={hf:?} betti={betti:?}");
    Ok(h)
}

fn criterion_1() -> Outcome {
    let pair = Quiver::k23().gale_pair().map_err(|e| e.to_string())?;
    let h = three_way(&pair, &k23_theta())?;
    ensure!(h == vec![1, 4, 7], "h = {h:?}");
    Ok(format!("h = hilbert = betti = {h:?}"))
}

fn criterion_2() -> Outcome {
    let a = Quiver::k23().boundary_matrix().map_err(|e| e.to_string())?;
    let pos = enumerate_chambers(&a, true).map_err(|e| e.to_string())?;
    let law = enumerate_chambers(&lawrence_configuration(&a), false).map_err(|e| e.to_string())?;
    ensure!(pos.len() == 18, "pos(A) chambers = {}", pos.len());
    ensure!(law.len() == 160, "Lawrence chambers = {}", law.len());
    ensure!(pos.merged() == 0 && law.merged() == 0, "fingerprint merges occurred");
    Ok("18 chambers in pos(A), 160 for A^±".into())
}

fn criterion_3() -> Outcome {
    let a = Quiver::k23().boundary_matrix().map_err(|e| e.to_string())?;
    let t = ratv(&k23_theta());
    let s = PolyhedronSlice::new(a.clone(), t.clone()).map_err(|e| e.to_string())?;
    let l = PolyhedronSlice::lawrence(&a, t).map_err(|e| e.to_string())?;
    let ns = s.lattice_points_bounded().map_err(|e| e.to_string())?.len();
    let nl = l.lattice_points_bounded().map_err(|e| e.to_string())?.len();
    ensure!(ns == 7 && nl == 13, "lattice points {ns} and {nl}");
    Ok("7 and 13 lattice points".into())
}

fn v_hex() -> MultiPoly {
    let n = 6;
    let x = |i| MultiPoly::var(n, i);
    let mut v = MultiPoly::zero(n);
    for (i, j) in [(1, 5), (5, 0), (0, 4), (4, 2), (2, 3), (3, 1)] {
        v = v.add(&x(i).mul(&x(j)).unwrap().scale(&rat(2))).unwrap();
    }
    for i in 0..n {
        v = v.sub(&x(i).pow(2)).unwrap();
    }
    v
}

fn criterion_4() -> Outcome {
    let pair = Quiver::k23().gale_pair().map_err(|e| e.to_string())?;
    let arr = AffineArrangement::from_theta(&pair, &k23_theta()).map_err(|e| e.to_string())?;
    let c = volume_cogenerators(&arr).map_err(|e| e.to_string())?;
    ensure!(c.len() == 7, "r = {}", c.len());
    let tri = MultiPoly::linear(&[rat(0), rat(1), rat(1), rat(-1), rat(0), rat(0)]).pow(2);
    let kt = c.polys.iter().find_map(|v| v.proportional_to(&tri));
    let kh = c.polys.iter().find_map(|v| v.proportional_to(&v_hex()));
    ensure!(kt.is_some(), "no cogenerator proportional to (x03+x04-x12)^2");
    ensure!(kh.is_some(), "no cogenerator proportional to V_hex");
    let p = build_presentation(&pair).map_err(|e| e.to_string())?;
    let rep = annihilator_verify(&p, &c).map_err(|e| e.to_string())?;
    ensure!(rep.catalecticant_ranks[..3] == [1, 4, 7], "ranks {:?}", rep.catalecticant_ranks);
    Ok(format!(
        "r = 7, triangle constant {}, hexagon constant {}, ranks {:?}",
        kt.unwrap(),
        kh.unwrap(),
        &rep.catalecticant_ranks[..3]
    ))
}

fn criterion_5() -> Outcome {
    for n in 2..=6usize {
        let q = Quiver::cycle(n);
        let pair = q.gale_pair().map_err(|e| e.to_string())?;
        let h = pair.b_matroid().h_vector().0;
        ensure!(h == vec![1, n as i64 - 1], "C_{n}: h = {h:?}");
        let hf = trimmed(build_presentation(&pair).map_err(|e| e.to_string())?.hilbert_function(2));
        ensure!(hf == h, "C_{n}: hilbert {hf:?}");
        let fact: usize = (1..=n).product();
        let ch = enumerate_chambers(&lawrence_configuration(pair.a()), false).map_err(|e| e.to_string())?;
        ensure!(ch.len() == fact, "C_{n}: {} chambers", ch.len());
        let trees = q.spanning_trees().map_err(|e| e.to_string())?.len();
        ensure!(trees == n, "C_{n}: {trees} trees");
        let (_, verdict) = ale_degree_generators(n).map_err(|e| e.to_string())?;
        ensure!(verdict.is_some(), "C_{n}: degree generators do not match");
    }
    Ok("n = 2..6: h = (1, n-1), n! chambers, n trees, degree generators match".into())
}

fn criterion_6() -> Outcome {
    let a = IntMatrix::from_i64_rows(&[&[1, 1, 1]]);
    let s = PolyhedronSlice::lawrence(&a, vec![rat(1)]).map_err(|e| e.to_string())?;
    let bc = s.bounded_complex().map_err(|e| e.to_string())?;
    ensure!(bc.f_vector == vec![3, 3, 1], "f = {:?}", bc.f_vector);
    let max = bc.maximal_faces();
    ensure!(max.len() == 1 && max[0].vertices.len() == 3, "not a single triangle");
    let b = betti_from_bounded_faces(&bc.f_vector).map_err(|e| e.to_string())?;
    ensure!(b == vec![1, 1, 1], "betti {b:?}");
    Ok("single triangle, f = (3,3,1), betti = (1,1,1)".into())
}

/// Up to three generic θ in distinct chambers of the Lawrence chamber complex.
fn distinct_chambers(q: &Quiver, a: &IntMatrix, rng: &mut ChaCha8Rng, want: usize) -> Vec<Vec<Int>> {
    let table = BasisTable::new(&lawrence_configuration(a));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..400 {
        let t = q.random_generic_theta(rng, 6).unwrap();
        if seen.insert(table.fingerprint(&ratv(&t))) {
            out.push(t);
            if out.len() == want {
                break;
            }
        }
    }
    out
}

fn random_instance(q: &Quiver, rng: &mut ChaCha8Rng, stats: &mut [usize; 2]) -> Result<(), String> {
    let e = |x: Error| x.to_string();
    let a = q.boundary_matrix().map_err(e)?;
    ensure!(is_unimodular(&a).map_err(e)?.unimodular, "boundary matrix not unimodular");
    let pair = q.check_hyperkahler().map_err(e)?;
    let theta = q.random_generic_theta(rng, 6).map_err(e)?;

    let h = three_way(&pair, &theta)?;
    let trees = q.spanning_trees().map_err(e)?;
    ensure!(trees.len() as i64 == h.iter().sum::<i64>(), "trees {} vs Σh", trees.len());

    // face posets of ℋ^bd(B,ψ) and of the Lawrence slice
    let arr = AffineArrangement::from_theta(&pair, &theta).map_err(e)?;
    let cells = arr.bounded_cells().map_err(e)?;
    let slice = PolyhedronSlice::lawrence(&a, ratv(&theta)).map_err(e)?;
    let bc = slice.bounded_complex().map_err(e)?;
    let from_cells: BTreeSet<(usize, Vec<usize>)> =
        cells.iter().map(|c| (c.dim, c.lawrence_support())).collect();
    let from_faces: BTreeSet<(usize, Vec<usize>)> =
        bc.faces.iter().map(|f| (f.dim, f.support.clone())).collect();
    ensure!(from_cells.len() == cells.len(), "distinct cells share a Lawrence support");
    ensure!(from_cells == from_faces, "face posets differ");
    for x in cells {
        for y in cells {
            let sub = x.lawrence_support().iter().all(|i| y.lawrence_support().contains(i));
            ensure!(x.is_face_of(y) == sub, "incidence not preserved");
        }
    }

    ensure!(euler_characteristic(&bc.f_vector) == 1, "Euler characteristic ≠ 1");
    let cost: Vec<Rat> = (0..2 * pair.n())
        .map(|_| Rat::new(rng.gen_range(1i64..=1000).into(), rng.gen_range(1i64..=37).into()))
        .collect();
    let sc = slice.star_collapsibility(&cost).map_err(e)?;
    ensure!(sc.forward || sc.backward, "not star-collapsible in either orientation");
    stats[0] += sc.forward as usize;
    stats[1] += (!sc.forward && sc.backward) as usize;

    // σ(τ,θ) are the complements of the Lawrence triangulation's maximal cones
    let lt = triangulation_from_theta(&pair.lawrence(), &theta).map_err(e)?;
    ensure!(lt.verify().is_valid(), "Lawrence triangulation fails the fan checks");
    let mut sigmas: Vec<Vec<usize>> = trees
        .iter()
        .map(|t| q.sigma_tau_theta(t, &theta))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    sigmas.sort();
    ensure!(sigmas == hypertoric::fans::irrelevant_ideal(&lt), "σ(τ,θ) differ from cone complements");

    let base = build_presentation(&pair).map_err(e)?;
    let r = pair.corank();
    let bq = base.quotient(r + 1);
    let thetas = distinct_chambers(q, &a, rng, 3);
    ensure!(thetas.len() >= 3, "fewer than 3 Lawrence chambers found");
    for t in &thetas {
        let cq = collapsed_lawrence_presentation(&pair, t).map_err(e)?.quotient(r + 1);
        ensure!(cq.same_ideal(&bq) && cq.dims() == bq.dims(), "presentation depends on θ = {t:?}");
    }

    let mut cuts: Vec<Vec<usize>> = q.cut_monomials().map_err(e)?;
    cuts.sort();
    let mut circ = pair.b_matroid().circuits().to_vec();
    circ.sort();
    ensure!(cuts == circ, "cocircuit cuts differ from circuits of the cycle-lattice matroid");

    let lf = lefschetz_random(&base, rng.gen()).map_err(e)?;
    ensure!(lf.macaulay && g_vector_macaulay_check(&h), "g = {:?} not Macaulay", lf.g);
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240617);
    let mut stats = [0usize; 2];
    let mut count = 0;
    while count < 50 {
        let q = Quiver::random(&mut rng, 6, 9, 4);
        if q.vertex_count() < 3 {
            continue;
        }
        random_instance(&q, &mut rng, &mut stats).map_err(|m| format!("{}: {m}", q.to_text().replace('\n', " ")))?;
        count += 1;
    }
    Ok(format!(
        "50 random quivers; star-collapse order passes for v on {}, only for -v on {}",
        stats[0], stats[1]
    ))
}

fn criterion_8() -> Outcome {
    let a = IntMatrix::from_i64_rows(&[&[1, 2]]);
    let rep = is_unimodular(&a).map_err(|e| e.to_string())?;
    ensure!(!rep.unimodular, "[1 2] classified unimodular");
    let pair = Quiver::k23().gale_pair().map_err(|e| e.to_string())?;
    let zero = vec![int(0); 4];
    ensure!(
        matches!(triangulation_from_theta(&pair, &zero), Err(Error::NonGenericTheta(_))),
        "θ = 0 accepted"
    );
    ensure!(!Quiver::k23().is_generic(&zero).map_err(|e| e.to_string())?, "θ = 0 generic");
    let looped = Quiver::new(3, vec![(0, 1), (1, 2), (2, 0), (1, 1)]).map_err(|e| e.to_string())?;
    match looped.check_hyperkahler() {
        Err(err @ Error::ColoopEdge(3)) if err.to_string().contains("coloop") => {}
        other => return Err(format!("loop edge not rejected: {other:?}")),
    }
    Ok("[1 2] non-unimodular, θ = 0 rejected, loop edge rejected as coloop".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("K23 three-way Betti agreement", criterion_1, Duration::from_secs(10)),
        ("K23 chamber counts", criterion_2, Duration::from_secs(60)),
        ("K23 lattice points", criterion_3, Duration::MAX),
        ("K23 cogenerators", criterion_4, Duration::MAX),
        ("C_n suite", criterion_5, Duration::from_secs(60)),
        ("intro example", criterion_6, Duration::MAX),
        ("random quiver properties", criterion_7, Duration::from_secs(600)),
        ("negative controls", criterion_8, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        let res = match res {
            Ok(m) if took > *limit => Err(format!("{m}; took {took:.1?}, limit {limit:?}")),
            r => r,
        };
        match res {
            Ok(m) => println!("PASS criterion {}: {name} ({took:.2?}): {m}", i + 1),
            Err(m) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({took:.2?}): {m}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
