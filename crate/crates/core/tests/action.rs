use braidext::action::{
    action_isomorphic, compose_aut, gauge, search_action_data, search_aut_objects, validate_action_data,
    validate_aut_object, ActionSpace, BraidedActionData, BraidedAutObject,
};
use braidext::braided::{standard_cyclic, AbelianThreeCocycle};
use braidext::cochain::Cochain;
use braidext::group::FiniteGroup;
use braidext::module::{FinAbModule, GAction, ModuleAutomorphism};
use braidext::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z(m: u64) -> FinAbModule {
    FinAbModule::cyclic(m).unwrap()
}

fn c2() -> FiniteGroup {
    FiniteGroup::cyclic(2).unwrap()
}

/// all normalized 1-cochain families `g -> eta_g : A -> H` (eta_e included)
fn eta_families(n: usize, a: &FinAbModule, hm: &FinAbModule) -> Vec<Vec<Cochain>> {
    let free = (a.order() - 1) * n;
    let total = hm.order().pow(free as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    Cochain::from_fn(1, a.order(), hm.clone(), |t| {
                        if t[0] == 0 {
                            0
                        } else {
                            let v = code % hm.order();
                            code /= hm.order();
                            v
                        }
                    })
                })
                .collect()
        })
        .collect()
}

#[test]
fn aut_objects_match_brute_force() {
    // A = Z/2, H = Z/4: psi in {1, 3}, one free value k(1,1)
    let b = standard_cyclic(2, z(4), 1).unwrap();
    let found = search_aut_objects(&b, 1 << 20).unwrap();
    let mut brute = Vec::new();
    for s in [1i64, 3] {
        for v in 0..4 {
            let x = BraidedAutObject {
                phi: ModuleAutomorphism::identity(b.pi0()),
                psi: ModuleAutomorphism::scalar(b.pi1(), s),
                k: Cochain::from_fn(2, 2, z(4), |t| if t == [1, 1] { v } else { 0 }),
            };
            if validate_aut_object(&b, &x).is_ok() {
                brute.push(x);
            }
        }
    }
    assert_eq!(found, brute);
    // psi = -1 forces 2c(1,1) = 0, which fails in Z/4
    assert!(found.iter().all(|x| x.psi == ModuleAutomorphism::identity(b.pi1())));
    assert_eq!(found.len(), 4);
}

fn units(b: &AbelianThreeCocycle) -> Vec<BraidedAutObject> {
    let objs = search_aut_objects(b, 1 << 12).unwrap();
    let id = BraidedAutObject::identity(b);
    for x in &objs {
        assert!(validate_aut_object(b, x).is_ok());
        assert_eq!(&compose_aut(b, x, &id).unwrap(), x);
        assert_eq!(&compose_aut(b, &id, x).unwrap(), x);
    }
    objs
}

fn associativity_and_units(b: &AbelianThreeCocycle) -> usize {
    let objs = units(b);
    for x in &objs {
        for y in &objs {
            let xy = compose_aut(b, x, y).unwrap();
            for w in &objs {
                let left = compose_aut(b, &xy, w).unwrap();
                let right = compose_aut(b, x, &compose_aut(b, y, w).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
    objs.len()
}

#[test]
fn composition_is_strictly_associative() {
    assert_eq!(associativity_and_units(&standard_cyclic(2, z(4), 1).unwrap()), 4);
    assert_eq!(associativity_and_units(&standard_cyclic(2, z(8), 2).unwrap()), 16);
    assert_eq!(associativity_and_units(&AbelianThreeCocycle::trivial(FinAbModule::new(vec![2, 2]).unwrap(), z(2))), 48);
}

#[test]
fn composition_is_associative_on_sampled_triples() {
    let b = standard_cyclic(4, z(4), 2).unwrap();
    let objs = units(&b);
    assert_eq!(objs.len(), 256);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let [x, y, w] = [0; 3].map(|_| &objs[rng.gen_range(0..objs.len())]);
        let left = compose_aut(&b, &compose_aut(&b, x, y).unwrap(), w).unwrap();
        let right = compose_aut(&b, x, &compose_aut(&b, y, w).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn composite_of_k_shifts_adds() {
    let b = standard_cyclic(4, z(8), 2).unwrap();
    let objs = search_aut_objects(&b, 1 << 16).unwrap();
    let shifts: Vec<&BraidedAutObject> = objs
        .iter()
        .filter(|x| x.phi == ModuleAutomorphism::identity(b.pi0()) && x.psi == ModuleAutomorphism::identity(b.pi1()))
        .take(10)
        .collect();
    for x in &shifts {
        for y in &shifts {
            assert_eq!(compose_aut(&b, x, y).unwrap().k, x.k.add(&y.k).unwrap());
        }
    }
}

#[test]
fn search_matches_brute_force_and_is_pinned() {
    // G = Z/2 on standard_cyclic(2, Z/4, 1), trivial actions: k_1(1,1) and theta_{1,1}(1) are free
    let b = standard_cyclic(2, z(4), 1).unwrap();
    let phi = GAction::trivial(c2(), z(2));
    let psi = GAction::trivial(c2(), z(4));
    let found = search_action_data(&b, &phi, &psi, 1 << 10).unwrap();
    let mut brute = Vec::new();
    for kv in 0..4 {
        for tv in 0..4 {
            let k = vec![
                Cochain::zero(2, 2, z(4)),
                Cochain::from_fn(2, 2, z(4), |t| if t == [1, 1] { kv } else { 0 }),
            ];
            let mut theta = vec![Cochain::zero(1, 2, z(4)); 4];
            theta[3] = Cochain::from_fn(1, 2, z(4), |t| if t[0] == 1 { tv } else { 0 });
            let d = BraidedActionData::new(b.clone(), phi.clone(), psi.clone(), k, theta).unwrap();
            if validate_action_data(&d).is_ok() {
                brute.push(d);
            }
        }
    }
    assert_eq!(found, brute);
    assert_eq!(found.len(), 8);
    assert!(found[0].ks().iter().all(Cochain::is_zero) && found[0].thetas().iter().all(Cochain::is_zero));

    // a larger pin, stable across runs
    let g4 = FiniteGroup::cyclic(4).unwrap();
    let b = standard_cyclic(4, z(4), 2).unwrap();
    let phi = GAction::by_sign(g4.clone(), z(4), |x| x % 2 == 1).unwrap();
    let psi = GAction::by_sign(g4, z(4), |x| x % 2 == 1).unwrap();
    let space = ActionSpace::new(b.clone(), phi.clone(), psi.clone()).unwrap();
    assert_eq!(space.count(), 1048576);
    match search_action_data(&b, &phi, &psi, 1000) {
        Err(Error::ScaleGuard { estimate, .. }) => assert_eq!(estimate, 1048576),
        other => panic!("{other:?}"),
    }
}

#[test]
fn negation_on_h_is_rejected() {
    let b = standard_cyclic(2, z(4), 1).unwrap();
    let psi = GAction::by_sign(c2(), z(4), |g| g == 1).unwrap();
    let d = BraidedActionData::zero(b.clone(), GAction::trivial(c2(), z(2)), psi.clone()).unwrap();
    let r = validate_action_data(&d);
    assert!(r.has_check("eq2"));
    let space = ActionSpace::new(b, GAction::trivial(c2(), z(2)), psi).unwrap();
    assert_eq!(space.count(), 0);
}

#[test]
fn gauge_closure_exhaustive() {
    let b = standard_cyclic(2, z(4), 1).unwrap();
    let phi = GAction::trivial(c2(), z(2));
    let psi = GAction::trivial(c2(), z(4));
    let data = search_action_data(&b, &phi, &psi, 1 << 10).unwrap();
    let etas = eta_families(2, b.pi0(), b.pi1());
    assert_eq!(etas.len(), 16);
    for d in &data {
        for eta in &etas {
            let moved = gauge(d, eta).unwrap();
            // eta_e nonzero moves k_e and theta off the G-normalized slice
            let normalized = eta[0].is_zero();
            assert_eq!(validate_action_data(&moved).is_ok(), normalized);
            if normalized {
                assert_eq!(action_isomorphic(d, &moved).unwrap().map(|w| gauge(d, &w).unwrap()), Some(moved));
            }
        }
    }
}

#[test]
fn gauge_closure_sampled_twisted() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = FiniteGroup::cyclic(4).unwrap();
    let b = standard_cyclic(4, z(8), 2).unwrap();
    let phi = GAction::by_sign(g.clone(), z(4), |x| x % 2 == 1).unwrap();
    let psi = GAction::trivial(g, z(8));
    let space = ActionSpace::new(b.clone(), phi, psi).unwrap();
    for _ in 0..20 {
        let d = space.sample(&mut rng).unwrap();
        assert!(validate_action_data(&d).is_ok());
        assert_eq!(space.datum(&space.coordinates(&d)), d);
        let eta: Vec<Cochain> = (0..4)
            .map(|x| Cochain::from_fn(1, 4, z(8), |t| if x == 0 || t[0] == 0 { 0 } else { rng.gen_range(0..8) }))
            .collect();
        let moved = gauge(&d, &eta).unwrap();
        assert!(validate_action_data(&moved).is_ok());
        let w = action_isomorphic(&d, &moved).unwrap().expect("gauge-equivalent");
        assert_eq!(gauge(&d, &w).unwrap(), moved);
        assert!(action_isomorphic(&d, &d).unwrap().unwrap().iter().all(Cochain::is_zero));
    }
}

#[test]
fn orbits_partition_the_search() {
    let b = standard_cyclic(2, z(4), 1).unwrap();
    let phi = GAction::trivial(c2(), z(2));
    let psi = GAction::trivial(c2(), z(4));
    let data = search_action_data(&b, &phi, &psi, 1 << 10).unwrap();
    let mut orbit_of: Vec<Option<usize>> = vec![None; data.len()];
    let mut orbits = 0;
    for i in 0..data.len() {
        if orbit_of[i].is_some() {
            continue;
        }
        orbit_of[i] = Some(orbits);
        for j in i + 1..data.len() {
            if action_isomorphic(&data[i], &data[j]).unwrap().is_some() {
                assert!(orbit_of[j].is_none());
                orbit_of[j] = Some(orbits);
            }
        }
        orbits += 1;
    }
    // all orbits have equal size, and there is more than one
    let sizes: Vec<usize> = (0..orbits).map(|o| orbit_of.iter().filter(|&&x| x == Some(o)).count()).collect();
    assert!(sizes.iter().all(|&s| s == sizes[0]));
    assert!(orbits > 1);
    for i in 0..data.len() {
        for j in 0..data.len() {
            assert_eq!(action_isomorphic(&data[i], &data[j]).unwrap().is_some(), orbit_of[i] == orbit_of[j]);
        }
    }
}

/// `psi_g o h = h o phi_g^3` and `psi_g o c = c o phi_g^2` for every `g`
fn trivial_datum_allowed(b: &AbelianThreeCocycle, phi: &GAction, psi: &GAction) -> bool {
    let na = b.pi0().order();
    (0..phi.group().order()).all(|g| {
        let (p, s) = (phi.table(g), psi.table(g));
        (0..na).all(|x| {
            (0..na).all(|y| {
                s[b.c(x, y)] == b.c(p[x], p[y]) && (0..na).all(|w| s[b.h(x, y, w)] == b.h(p[x], p[y], p[w]))
            })
        })
    })
}

fn involutions(m: &FinAbModule) -> Vec<ModuleAutomorphism> {
    ModuleAutomorphism::all(m)
        .into_iter()
        .filter(|x| {
            let t = x.table(m);
            (0..m.order()).all(|v| t[t[v]] == v)
        })
        .collect()
}

#[test]
fn trivial_datum_criterion() {
    let bs = [
        standard_cyclic(2, z(4), 1).unwrap(),
        standard_cyclic(4, z(8), 2).unwrap(),
        standard_cyclic(4, z(4), 1).unwrap(),
        standard_cyclic(3, z(3), 1).unwrap(),
        standard_cyclic(2, FinAbModule::new(vec![2, 4]).unwrap(), 3).unwrap(),
        AbelianThreeCocycle::trivial(FinAbModule::new(vec![2, 2]).unwrap(), z(2)),
    ];
    let mut seen = [false, false];
    for b in &bs {
        for alpha in involutions(b.pi0()) {
            for beta in involutions(b.pi1()) {
                let phi = GAction::new(c2(), b.pi0().clone(), vec![ModuleAutomorphism::identity(b.pi0()), alpha.clone()])
                    .unwrap();
                let psi = GAction::new(c2(), b.pi1().clone(), vec![ModuleAutomorphism::identity(b.pi1()), beta.clone()])
                    .unwrap();
                let d = BraidedActionData::zero(b.clone(), phi.clone(), psi.clone()).unwrap();
                let expected = trivial_datum_allowed(b, &phi, &psi);
                assert_eq!(validate_action_data(&d).is_ok(), expected);
                seen[usize::from(expected)] = true;
            }
        }
    }
    assert_eq!(seen, [true, true]);
}

#[test]
fn mismatched_data_are_rejected() {
    let d1 = BraidedActionData::trivial(standard_cyclic(2, z(4), 1).unwrap(), c2());
    let d2 = BraidedActionData::trivial(AbelianThreeCocycle::trivial(z(2), z(4)), c2());
    assert!(matches!(action_isomorphic(&d1, &d2), Err(Error::Shape(_))));
}
