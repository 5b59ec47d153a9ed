use std::time::Instant;

use periodic_tgr::cycle::realize_cycle;
use periodic_tgr::exact::{cross_check, realize_exact_with, ExactOptions};
use periodic_tgr::generate::{
    perturb, random_connected, random_cycle, random_labeling, random_nae_formula, random_tree,
};
use periodic_tgr::reduction::{assignment_to_labeling, nae3sat_to_instance, nae_brute_solve};
use periodic_tgr::tree::{enumerate_tree_labelings, realize_tree};
use periodic_tgr::{certifies, fastest_duration_matrix, realize, Method, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_trees_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(2..=30);
        let delta = rng.gen_range(1..=12);
        let g = {
            let ug = random_tree(&mut rng, n);
            random_labeling(&mut rng, &ug, delta)
        };
        let d = fastest_duration_matrix(&g).unwrap();
        let r = realize_tree(&d, delta).unwrap();
        assert!(certifies(r.witness().expect("realized"), &d));
    }
}

#[test]
fn random_cycles_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut slowest = 0u128;
    for _ in 0..200 {
        let n = rng.gen_range(3..=30);
        let delta = rng.gen_range(1..=10);
        let g = {
            let ug = random_cycle(&mut rng, n);
            random_labeling(&mut rng, &ug, delta)
        };
        let d = fastest_duration_matrix(&g).unwrap();
        let t = Instant::now();
        let r = realize_cycle(&d, delta).unwrap();
        slowest = slowest.max(t.elapsed().as_millis());
        assert!(certifies(r.witness().unwrap_or_else(|| panic!("{r:?} for {g:?}")), &d));
    }
    eprintln!("slowest cycle instance: {slowest} ms");
}

#[test]
fn specialized_agree_with_exact_on_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut seen = [0usize; 2];
    for k in 0..300 {
        let n = rng.gen_range(3..=6);
        let delta = rng.gen_range(2..=4);
        let ug = if k % 2 == 0 { random_tree(&mut rng, n) } else { random_cycle(&mut rng, n) };
        let d = fastest_duration_matrix(&random_labeling(&mut rng, &ug, delta)).unwrap();
        let cand = if rng.gen_bool(0.5) {
            {
                let k = rng.gen_range(1..=2);
                perturb(&mut rng, &d, k)
            }
        } else {
            d
        };
        let rep = cross_check(&cand, delta, ExactOptions::unlimited()).unwrap();
        assert_eq!(rep.agreement(), Some(true), "{cand} delta {delta}: {rep:?}");
        seen[(rep.exact == Verdict::Realized) as usize] += 1;
    }
    assert!(seen[0] > 20 && seen[1] > 20, "{seen:?}");
}

#[test]
fn auto_method_on_general_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let n = rng.gen_range(3..=6);
        let g = {
            let ug = random_connected(&mut rng, n, 0.4);
            random_labeling(&mut rng, &ug, 3)
        };
        let d = fastest_duration_matrix(&g).unwrap();
        let r = realize(&d, 3, Method::Auto, ExactOptions::default()).unwrap();
        assert!(certifies(r.witness().unwrap(), &d));
    }
}

#[test]
fn pruning_is_safe() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..30 {
        let n = rng.gen_range(3..=6);
        let g = {
            let ug = random_connected(&mut rng, n, 0.3);
            random_labeling(&mut rng, &ug, 3)
        };
        let k = rng.gen_range(0..=1);
        let d = perturb(&mut rng, &fastest_duration_matrix(&g).unwrap(), k);
        let on = realize_exact_with(&d, 3, ExactOptions::unlimited()).unwrap();
        let off = realize_exact_with(&d, 3, ExactOptions { pruning: false, ..ExactOptions::unlimited() }).unwrap();
        assert_eq!(on.result.verdict(), off.result.verdict());
        assert!(on.stats.expanded <= off.stats.expanded);
    }
}

#[test]
fn tree_labelings_form_one_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..10 {
        let n = rng.gen_range(2..=12);
        let delta = rng.gen_range(2..=7);
        let g = {
            let ug = random_tree(&mut rng, n);
            random_labeling(&mut rng, &ug, delta)
        };
        let ls = enumerate_tree_labelings(&fastest_duration_matrix(&g).unwrap(), delta).unwrap();
        assert_eq!(ls.len(), delta as usize);
        assert!(ls.contains(&g));
        for (t, h) in ls.iter().enumerate() {
            assert_eq!(*h, ls[0].shifted(t as i64));
        }
    }
}

#[test]
fn nae_witnesses_certify() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut done = 0;
    while done < 20 {
        let (v, c) = (rng.gen_range(3..=5), rng.gen_range(1..=4));
        let phi = random_nae_formula(&mut rng, v, c);
        let Some(a) = nae_brute_solve(&phi).unwrap() else {
            continue;
        };
        let (d, _) = nae3sat_to_instance(&phi, 3).unwrap();
        assert!(certifies(&assignment_to_labeling(&phi, &a, 3).unwrap(), &d));
        done += 1;
    }
}
