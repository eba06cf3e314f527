mod common;

use common::{library, random_bv, random_pair};
use lingrowth::bv1d::{boundary_term, functional_of_measures, BVFunction1D, BoundaryData};
use lingrowth::integrand::lifted_integrand;
use lingrowth::lifting::{check_master_identity_with, evaluate_phi_hat, lift, IdentityReport};
use lingrowth::measure::{pairing, Domain, JordanPair, SignedMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-6;

/// Gaps of the bulk, boundary and pairing rewritings, each relative to the
/// size of its own left-hand side.
fn sub_identity_gaps(
    r: &IdentityReport,
    f: &lingrowth::integrand::Integrand,
    u0: &BoundaryData,
    pair: &JordanPair,
    w: &BVFunction1D,
) -> [f64; 3] {
    let bulk = functional_of_measures(f, w).unwrap();
    let bd = boundary_term(f, w, u0).unwrap() + 2.0 * r.distance_term;
    let pm = pairing(pair, w).unwrap() + 0.5 * pair.net_mass();
    let ph = &r.phi_hat;
    [
        (ph.bulk_cells + ph.bulk_edges - bulk).abs() / (1.0 + bulk.abs()),
        (ph.boundary_sides + ph.boundary_top_bottom - bd).abs() / (1.0 + bd.abs()),
        (ph.pairing - pm).abs() / (1.0 + pm.abs()),
    ]
}

#[test]
fn master_identity_on_random_triples() {
    let lib = library();
    let lifted: Vec<_> = lib.iter().map(|f| lifted_integrand(f).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = [0.0f64; 4];
    for trial in 0..100 {
        let i = trial % lib.len();
        let pieces = rng.gen_range(1..6);
        let w = random_bv(&mut rng, 0.0, 1.0, pieces);
        let pair = random_pair(&mut rng, &w);
        let u0 = BoundaryData::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let r = check_master_identity_with(&lifted[i], &u0, &pair, &w, TOL)
            .unwrap_or_else(|e| panic!("trial {trial} ({}): {e}", lib[i].name()));
        let g = sub_identity_gaps(&r, &lifted[i].rebased, &u0, &pair, &w);
        for (k, v) in g.iter().enumerate() {
            assert!(*v < TOL, "trial {trial} ({}): sub-identity {k} gap {v}", lib[i].name());
        }
        worst[0] = worst[0].max(r.relative_gap);
        for k in 0..3 {
            worst[k + 1] = worst[k + 1].max(g[k]);
        }
    }
    eprintln!(
        "worst relative gaps: master {:e}, bulk {:e}, boundary {:e}, pairing {:e}",
        worst[0], worst[1], worst[2], worst[3]
    );
}

#[test]
fn bulk_identity_for_x_independent_integrands() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let zero = JordanPair::zero(Domain::interval(0.0, 1.0)).lift().unwrap();
    for f in library().into_iter().filter(|f| !f.is_x_dependent()) {
        let l = lifted_integrand(&f).unwrap();
        for _ in 0..50 {
            let w = random_bv(&mut rng, 0.0, 1.0, 4);
            let u0 = BoundaryData::new(w.trace_a(), w.trace_b());
            let r = evaluate_phi_hat(&l, &lift(&w), &u0, &zero).unwrap();
            let bulk = functional_of_measures(&l.rebased, &w).unwrap();
            assert!(
                (r.bulk_cells + r.bulk_edges - bulk).abs() < 1e-6 * (1.0 + bulk),
                "{}",
                f.name()
            );
        }
    }
}

#[test]
fn zero_data_gives_bulk_of_the_base() {
    for f in library() {
        let l = lifted_integrand(&f).unwrap();
        let w = BVFunction1D::constant(0.0, 1.0, 0.0);
        let zero = JordanPair::zero(Domain::interval(0.0, 1.0));
        let r = check_master_identity_with(&l, &BoundaryData::zero(), &zero, &w, 1e-8).unwrap();
        let bulk0 = functional_of_measures(&l.rebased, &w).unwrap();
        assert!((r.phi_hat.total - bulk0).abs() < 1e-10, "{}", f.name());
        assert_eq!(r.phi_hat.boundary_sides + r.phi_hat.boundary_top_bottom, 0.0);
    }
}

#[test]
fn single_positive_atom_closed_form() {
    let f = common::key("area", serde_json::Value::Null);
    let l = lifted_integrand(&f).unwrap();
    let none = SignedMeasure::zero(Domain::interval(0.0, 1.0));
    let pair = JordanPair::new(SignedMeasure::atoms_1d(0.0, 1.0, &[(0.5, 2.0)]).unwrap(), none).unwrap();
    let w = BVFunction1D::constant(0.0, 1.0, 0.0);
    let r = check_master_identity_with(&l, &BoundaryData::zero(), &pair, &w, 1e-8).unwrap();
    assert!(r.gap < 1e-8);
    // Φ̂ = |Ω_◊| + μ(Ω)/2 for w = u0 = 0.
    assert!((r.phi_hat.total - 2.0).abs() < 1e-12);
}

#[test]
fn pairing_identity_with_both_parts() {
    let w = BVFunction1D::new(
        vec![0.0, 0.3, 0.6, 1.0],
        vec![
            lingrowth::bv1d::Piece { value: 0.5, slope: 1.0 },
            lingrowth::bv1d::Piece {
                value: -1.0,
                slope: 0.0,
            },
            lingrowth::bv1d::Piece {
                value: 2.0,
                slope: -2.0,
            },
        ],
    )
    .unwrap();
    let pair = JordanPair::new(
        SignedMeasure::atoms_1d(0.0, 1.0, &[(0.3, 1.5)]).unwrap(),
        SignedMeasure::atoms_1d(0.0, 1.0, &[(0.6, 0.7), (0.8, 0.2)]).unwrap(),
    )
    .unwrap();
    let f = common::key("tv", serde_json::Value::Null);
    let l = lifted_integrand(&f).unwrap();
    let r = evaluate_phi_hat(&l, &lift(&w), &BoundaryData::zero(), &pair.lift().unwrap()).unwrap();
    let expect = pairing(&pair, &w).unwrap() + 0.5 * pair.net_mass();
    assert!((r.pairing - expect).abs() < 1e-12, "{} vs {expect}", r.pairing);
}
