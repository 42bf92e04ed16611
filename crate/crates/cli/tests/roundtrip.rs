use braidext::cochain::Cochain;
use braidext::module::FinAbModule;
use braidext_cli::problem::{cochain_spec, read_cochain, CochainSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_module(rng: &mut ChaCha8Rng) -> FinAbModule {
    let rank = rng.gen_range(1..=3);
    FinAbModule::new((0..rank).map(|_| rng.gen_range(2..=5)).collect()).unwrap()
}

#[test]
fn cochains_survive_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let target = random_module(&mut rng);
        let on_module = rng.gen_bool(0.5);
        let base_module = random_module(&mut rng);
        let base = if on_module { base_module.order().min(12) } else { rng.gen_range(1..=5) };
        if on_module && base != base_module.order() {
            continue;
        }
        let degree = rng.gen_range(1..=3);
        let normalized = rng.gen_bool(0.5);
        let f = Cochain::from_fn(degree, base, target.clone(), |t| {
            if normalized && t.contains(&0) {
                0
            } else {
                rng.gen_range(0..target.order())
            }
        });
        let spec = cochain_spec(&f, on_module.then_some(&base_module));
        let text = serde_json::to_string(&spec).unwrap();
        let back: CochainSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let g = read_cochain(&back, base, on_module.then_some(&base_module), &target).unwrap();
        assert_eq!(g, f);
        assert_eq!(spec.normalized, f.is_normalized());
    }
}
