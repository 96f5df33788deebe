use anyhow::Result;
use hypertoric::cohomology::{
    annihilator_verify, build_presentation, is_level, lefschetz_random, pullback_cogenerators,
    volume_cogenerators_seeded,
};
use hypertoric::exact::lattice::is_unimodular;
use hypertoric::exact::rat_from_int;
use hypertoric::fans::{
    enumerate_chambers, irrelevant_ideal, stanley_reisner_ideal, triangulation_from_theta,
};
use hypertoric::polyhedra::{
    betti_from_bounded_faces, euler_characteristic, AffineArrangement, PolyhedronSlice,
};
use hypertoric::quiver::{ale_classification, ale_degree_generators};
use hypertoric::{Error, Rat};
use serde_json::{json, Value};

use crate::report::{self, Report};
use crate::{Command, Input};

pub fn dispatch(cmd: Command, input: &Input) -> Result<Report> {
    let name = match cmd {
        Command::Gale => "gale",
        Command::Unimodular => "unimodular",
        Command::Matroid => "matroid",
        Command::Betti => "betti",
        Command::Chambers => "chambers",
        Command::Triangulate => "triangulate",
        Command::Bounded => "bounded",
        Command::Cogenerators => "cogenerators",
        Command::Lefschetz => "lefschetz",
        Command::Quiver => "quiver",
        Command::AleCheck => "ale-check",
        Command::VerifyAll => "verify-all",
    };
    let mut rep = Report::new(name, input.digest.clone());
    match cmd {
        Command::Gale => gale(input, &mut rep)?,
        Command::Unimodular => unimodular(input, &mut rep)?,
        Command::Matroid => matroid(input, &mut rep),
        Command::Betti => betti(input, &mut rep)?,
        Command::Chambers => chambers(input, &mut rep)?,
        Command::Triangulate => triangulate(input, &mut rep)?,
        Command::Bounded => bounded(input, &mut rep)?,
        Command::Cogenerators => cogenerators(input, &mut rep)?,
        Command::Lefschetz => lefschetz(input, &mut rep)?,
        Command::Quiver => quiver(input, &mut rep)?,
        Command::AleCheck => ale(input, &mut rep)?,
        Command::VerifyAll => verify_all(input, &mut rep)?,
    }
    Ok(rep)
}

fn theta_rat(input: &Input) -> Result<Vec<Rat>> {
    Ok(input.theta()?.iter().map(rat_from_int).collect())
}

fn gale(input: &Input, rep: &mut Report) -> Result<()> {
    let p = &input.pair;
    rep.put("d", p.d());
    rep.put("n", p.n());
    rep.put("A", report::matrix(p.a()));
    rep.put("B", report::matrix(p.b()));
    rep.put("lawrence_lifting", report::matrix(&p.lawrence_lifting()));
    rep.check("gale_duality", p.a().mul(p.b())?.is_zero());
    Ok(())
}

fn unimodular(input: &Input, rep: &mut Report) -> Result<()> {
    let u = is_unimodular(input.pair.a())?;
    rep.put("unimodular", u.unimodular);
    rep.put("b_minors_unit", u.b_minors_unit);
    let mut values: Vec<String> = u.minor_values.iter().map(|v| v.to_string()).collect();
    values.sort();
    values.dedup();
    rep.put("distinct_minor_values", values);
    Ok(())
}

fn matroid(input: &Input, rep: &mut Report) {
    let m = input.pair.b_matroid();
    rep.put("rank", m.rank());
    rep.put("bases", m.bases().len());
    rep.put("circuits", report::sets(m.circuits()));
    rep.put("cocircuits", report::sets(m.cocircuits()));
    rep.put("coloops", json!(m.coloops()));
    rep.put("loops", json!(m.loops()));
    rep.put("f_vector", json!(m.f_vector()));
    rep.put("h_vector", json!(m.h_vector().0));
    rep.put(
        "reliability_h_polynomial",
        report::poly(&m.reliability_h_polynomial(), &["q".to_string()]),
    );
}

fn trimmed(v: &[usize]) -> Vec<i64> {
    let end = v.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    v[..end].iter().map(|&x| x as i64).collect()
}

/// Records the three computations and returns whether they agree.
fn three_way(input: &Input, rep: &mut Report) -> Result<bool> {
    let pair = &input.pair;
    let h = pair.b_matroid().h_vector().0;
    let p = build_presentation(pair)?;
    let up_to = input.max_degree.unwrap_or(pair.corank() + 1);
    let hf = p.hilbert_function(up_to);
    let slice = PolyhedronSlice::lawrence(pair.a(), theta_rat(input)?)?;
    let f = slice.bounded_complex()?.f_vector;
    let betti = betti_from_bounded_faces(&f)?;
    rep.put("h", json!(h));
    rep.put("hilbert_function", json!(hf));
    rep.put("bounded_f_vector", json!(f));
    rep.put("betti", json!(betti));
    Ok(h == trimmed(&hf) && h == betti)
}

fn betti(input: &Input, rep: &mut Report) -> Result<()> {
    let ok = three_way(input, rep)?;
    rep.check("three_way_betti", ok);
    Ok(())
}

fn chambers(input: &Input, rep: &mut Report) -> Result<()> {
    let s = enumerate_chambers(input.pair.a(), true)?;
    rep.put("count", s.len());
    rep.put("walls", s.walls);
    rep.put("arrangement_regions", s.arrangement_regions);
    let reps: Vec<Value> = s
        .chambers
        .iter()
        .map(|c| json!({ "theta": report::ints(&c.representative), "feasible_bases": c.feasible_bases }))
        .collect();
    rep.put("chambers", reps);
    rep.check("fingerprints_distinct", s.merged() == 0);
    Ok(())
}

fn triangulate(input: &Input, rep: &mut Report) -> Result<()> {
    let t = triangulation_from_theta(&input.pair, input.theta()?)?;
    let v = t.verify();
    rep.put("maximal_cones", report::sets(t.cones()));
    rep.put("stanley_reisner", report::sets(&stanley_reisner_ideal(&t)));
    rep.put("irrelevant", report::sets(&irrelevant_ideal(&t)));
    rep.put("unimodular", v.unimodular);
    rep.check("cones_independent", v.independent);
    rep.check("ridges_proper", v.ridges_ok);
    rep.check("covers_once", v.probe_multiplicity == 1);
    Ok(())
}

fn bounded(input: &Input, rep: &mut Report) -> Result<()> {
    let slice = PolyhedronSlice::new(input.pair.a().clone(), theta_rat(input)?)?;
    let bc = slice.bounded_complex()?;
    let vertices: Vec<Value> = slice
        .vertices()?
        .iter()
        .map(|v| json!({ "basis": v.basis, "point": report::rats(&v.point) }))
        .collect();
    let faces: Vec<Value> = bc
        .faces
        .iter()
        .map(|f| json!({ "dim": f.dim, "support": f.support }))
        .collect();
    rep.put("vertices", vertices);
    rep.put("faces", faces);
    rep.put("f_vector", json!(bc.f_vector));
    rep.put("lattice_points", slice.lattice_points_bounded()?.len());
    rep.check("euler_characteristic_one", euler_characteristic(&bc.f_vector) == 1);
    Ok(())
}

fn arrangement(input: &Input) -> Result<AffineArrangement> {
    Ok(match &input.psi {
        Some(p) => AffineArrangement::new(
            input.pair.b().clone(),
            p.iter().map(rat_from_int).collect(),
        )?,
        None => AffineArrangement::from_theta(&input.pair, input.theta()?)?,
    })
}

fn cogenerators(input: &Input, rep: &mut Report) -> Result<()> {
    let arr = arrangement(input)?;
    let c = volume_cogenerators_seeded(&arr, input.seed)?;
    let polys: Vec<Value> = c
        .polys
        .iter()
        .zip(&c.regions)
        .map(|(v, s)| json!({ "region": s, "volume": report::poly(v, &input.names) }))
        .collect();
    rep.put("psi", report::rats(arr.psi()));
    rep.put("r", c.len());
    rep.put("cogenerators", polys);
    let p = build_presentation(&input.pair)?;
    match annihilator_verify(&p, &c) {
        Ok(a) => {
            rep.put("catalecticant_ranks", json!(a.catalecticant_ranks));
            rep.put("hilbert_function", json!(a.hilbert_function));
            rep.check("annihilator", true);
        }
        Err(e) => {
            rep.put("annihilator_failure", e.to_string());
            rep.check("annihilator", false);
        }
    }
    let tnames: Vec<String> = (0..input.pair.d()).map(|i| format!("t{i}")).collect();
    match pullback_cogenerators(&input.pair, &c) {
        Ok(v) => {
            rep.put("pullbacks", v.iter().map(|p| report::poly(p, &tnames)).collect::<Vec<_>>());
            rep.check("pullback", true);
        }
        Err(e) => {
            rep.put("pullback_failure", e.to_string());
            rep.check("pullback", false);
        }
    }
    Ok(())
}

fn lefschetz(input: &Input, rep: &mut Report) -> Result<()> {
    let p = build_presentation(&input.pair)?;
    match lefschetz_random(&p, input.seed) {
        Ok(l) => {
            rep.put("d", report::rats(&l.d));
            rep.put("hilbert_function", json!(l.hilbert_function));
            rep.put("ranks", json!(l.ranks));
            rep.put("g", json!(l.g));
            rep.put("quotient_dims", json!(l.quotient_dims));
            rep.check("lefschetz_injective", true);
            rep.check("macaulay", l.macaulay);
        }
        Err(e @ (Error::NotInjective { .. } | Error::NonGenericD)) => {
            rep.put("lefschetz_failure", e.to_string());
            rep.check("lefschetz_injective", false);
        }
        Err(e) => return Err(e.into()),
    }
    rep.check("level", is_level(&p));
    Ok(())
}

fn quiver(input: &Input, rep: &mut Report) -> Result<()> {
    let q = input.quiver()?;
    let labels: Vec<String> = (0..q.edges().len()).map(|e| q.edge_label(e)).collect();
    let a = q.boundary_matrix()?;
    let b = q.cycle_basis()?;
    let trees = q.spanning_trees()?;
    let cuts: Vec<Vec<String>> = q
        .cut_monomials()?
        .iter()
        .map(|c| c.iter().map(|&e| format!("d{}", labels[e])).collect())
        .collect();
    rep.put("edges", json!(labels));
    rep.put("boundary_matrix", report::matrix(&a));
    rep.put("cycle_basis", report::matrix(&b));
    rep.put("spanning_trees", trees.len());
    rep.put("cut_monomials", json!(cuts));
    rep.check("boundary_unimodular", is_unimodular(&a)?.unimodular);
    let pair = q.gale_pair()?;
    let mut circuits = pair.b_matroid().circuits().to_vec();
    circuits.sort();
    let mut supports = q.cut_monomials()?;
    supports.sort();
    rep.check("cuts_are_circuits", circuits == supports);
    if let Ok(pair) = q.check_hyperkahler() {
        let h: i64 = pair.b_matroid().h_vector().0.iter().sum();
        rep.check("trees_equal_h_sum", h == trees.len() as i64);
    }
    if let Some(theta) = &input.theta {
        if theta.len() == a.rows() {
            let generic = q.is_generic(theta)?;
            rep.put("generic", generic);
            if generic {
                let sig: Vec<Vec<usize>> = trees
                    .iter()
                    .map(|t| q.sigma_tau_theta(t, theta))
                    .collect::<Result<_, _>>()?;
                rep.put("sigma", report::sets(&sig));
            }
        }
    }
    Ok(())
}

fn ale(input: &Input, rep: &mut Report) -> Result<()> {
    let r = ale_classification(&input.pair)?;
    rep.put("product_of_ale", r.is_product);
    rep.put("factors", json!(r.factors));
    rep.put("classes", report::sets(&r.classes));
    rep.put("blocks_unit", r.blocks_unit);
    if let Some(q) = &input.quiver {
        let n = q.edges().len();
        if r.is_product && r.factors == vec![n] && q.vertex_count() == n && !input.lawrence {
            let (exps, verdict) = ale_degree_generators(n)?;
            rep.put("degree_generator_exponents", json!(exps));
            rep.put(
                "degree_generator_orientation",
                match verdict {
                    Some(true) => "direct",
                    Some(false) => "swapped",
                    None => "none",
                },
            );
            rep.check("degree_generators", verdict.is_some());
        }
    }
    Ok(())
}

fn verify_all(input: &Input, rep: &mut Report) -> Result<()> {
    let ok = three_way(input, rep)?;
    rep.check("three_way_betti", ok);

    let arr = arrangement(input)?;
    let c = volume_cogenerators_seeded(&arr, input.seed)?;
    rep.put("r", c.len());
    let p = build_presentation(&input.pair)?;
    match annihilator_verify(&p, &c) {
        Ok(a) => {
            rep.put("catalecticant_ranks", json!(a.catalecticant_ranks));
            rep.check("annihilator", true);
        }
        Err(e) => {
            rep.put("annihilator_failure", e.to_string());
            rep.check("annihilator", false);
        }
    }

    let slice = PolyhedronSlice::lawrence(input.pair.a(), theta_rat(input)?)?;
    let n2 = 2 * input.pair.n();
    // distinct powers of a large base keep vertex values apart
    let cost: Vec<Rat> = (0..n2)
        .map(|i| {
            let base = Rat::from_integer((1000 + input.seed % 1000).into());
            let mut x = Rat::from_integer(1.into());
            for _ in 0..i {
                x *= &base;
            }
            Rat::from_integer(1.into()) + x.recip()
        })
        .collect();
    match slice.star_collapsibility(&cost) {
        Ok(s) => {
            rep.put("star_collapse_forward", s.forward);
            rep.put("star_collapse_backward", s.backward);
            rep.check("star_collapsible", s.forward || s.backward);
        }
        Err(e) => {
            rep.put("star_collapse_failure", e.to_string());
            rep.check("star_collapsible", false);
        }
    }
    rep.check(
        "euler_characteristic_one",
        euler_characteristic(&slice.bounded_complex()?.f_vector) == 1,
    );

    match lefschetz_random(&p, input.seed) {
        Ok(l) => {
            rep.put("g", json!(l.g));
            rep.check("lefschetz_injective", true);
            rep.check("macaulay", l.macaulay);
        }
        Err(e) => {
            rep.put("lefschetz_failure", e.to_string());
            rep.check("lefschetz_injective", false);
        }
    }
    Ok(())
}
