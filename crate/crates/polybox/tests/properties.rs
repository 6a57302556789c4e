//! Randomized cross-checks of the closed-form combinatorics against the
//! explicit cell-grid oracle, and invariance of every predicate under the
//! symmetry group. Deterministic seeds keep failures reproducible.

use num_rational::Ratio;
use polybox::code::{
    code_covers, covers, dichotomous, equivalent, has_twin_pair, is_twin_pair,
    measure_difference,
};
use polybox::grid::{realize, realize_word};
use polybox::iso::{apply, ClassMap, Isomorphism};
use polybox::{Letter, PolyboxCode, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Word {
    let letters: Vec<Letter> = (0..d)
        .map(|_| Letter::new(rng.gen_range(0..k), rng.gen_range(0..2)))
        .collect();
    Word::new(&letters)
}

/// A random code: sample words and keep those pairwise dichotomous with
/// everything kept so far. Always nonempty.
fn random_code(rng: &mut ChaCha8Rng, d: usize, k: usize, max_len: usize) -> PolyboxCode {
    let want = rng.gen_range(1..=max_len);
    let mut words: Vec<Word> = vec![random_word(rng, d, k)];
    for _ in 0..8 * want {
        if words.len() == want {
            break;
        }
        let w = random_word(rng, d, k);
        if !words.contains(&w) && words.iter().all(|v| dichotomous(v, &w)) {
            words.push(w);
        }
    }
    PolyboxCode::new(words).expect("kept words are pairwise dichotomous")
}

fn random_isomorphism(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Isomorphism {
    let mut sigma: Vec<usize> = (0..d).collect();
    sigma.shuffle(rng);
    let maps = (0..d)
        .map(|_| {
            let mut to_class: Vec<u8> = (0..k as u8).collect();
            to_class.shuffle(rng);
            let flip: Vec<u8> = (0..k).map(|_| rng.gen_range(0..2)).collect();
            ClassMap { to_class, flip }
        })
        .collect();
    Isomorphism { sigma, maps }
}

fn dims(rng: &mut ChaCha8Rng) -> (usize, usize) {
    (rng.gen_range(1..=5), rng.gen_range(1..=3))
}

/// The weighted-sum cover criterion agrees with explicit cell containment.
#[test]
fn cover_criterion_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x706f6c79_01);
    for _ in 0..10_000 {
        let (d, k) = dims(&mut rng);
        let v = random_code(&mut rng, d, k, 6);
        let w = random_word(&mut rng, d, k);
        let closed = covers(&w, &v).unwrap();
        let oracle = realize_word(&w, k)
            .unwrap()
            .is_subset_of(&realize(&v, k).unwrap())
            .unwrap();
        assert_eq!(closed, oracle, "w={w:?} V={v:?}");
    }
}

/// The closed-form difference measure agrees with cell counting: a box
/// occupies `2^{(k-1)d}` grid cells, and the measure is in box units.
#[test]
fn measure_difference_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x706f6c79_02);
    for _ in 0..10_000 {
        let (d, k) = dims(&mut rng);
        let v = random_code(&mut rng, d, k, 6);
        let w = random_code(&mut rng, d, k, 6);
        let closed = measure_difference(&v, &w).unwrap();
        let cells = realize(&v, k)
            .unwrap()
            .difference(&realize(&w, k).unwrap())
            .unwrap()
            .count();
        let per_box = 1i64 << ((k - 1) * d);
        assert_eq!(closed, Ratio::new(cells as i64, per_box), "V={v:?} W={w:?}");
    }
}

/// Symmetries preserve dichotomy, twin pairs, covering, equivalence, and
/// the difference measure.
#[test]
fn isomorphisms_preserve_predicates() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x706f6c79_03);
    for _ in 0..10_000 {
        let (d, k) = dims(&mut rng);
        let f = random_isomorphism(&mut rng, d, k);
        let u = random_word(&mut rng, d, k);
        let w = random_word(&mut rng, d, k);
        let fu = f.apply_word(&u);
        let fw = f.apply_word(&w);
        assert_eq!(dichotomous(&u, &w), dichotomous(&fu, &fw));
        assert_eq!(is_twin_pair(&u, &w), is_twin_pair(&fu, &fw));

        let v = random_code(&mut rng, d, k, 6);
        let x = random_code(&mut rng, d, k, 6);
        let fv = apply(&f, &v);
        let fx = apply(&f, &x);
        assert_eq!(has_twin_pair(&v), has_twin_pair(&fv));
        assert_eq!(covers(&w, &v).unwrap(), covers(&fw, &fv).unwrap());
        assert_eq!(code_covers(&v, &x).unwrap(), code_covers(&fv, &fx).unwrap());
        assert_eq!(equivalent(&v, &x).unwrap(), equivalent(&fv, &fx).unwrap());
        assert_eq!(
            measure_difference(&v, &x).unwrap(),
            measure_difference(&fv, &fx).unwrap()
        );
    }
}

/// Round trip: an isomorphism composed with its inverse is the identity on
/// codes.
#[test]
fn isomorphism_inverse_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x706f6c79_04);
    for _ in 0..2_000 {
        let (d, k) = dims(&mut rng);
        let f = random_isomorphism(&mut rng, d, k);
        let v = random_code(&mut rng, d, k, 6);
        assert_eq!(apply(&f.inverse(), &apply(&f, &v)), v);
    }
}
