mod common;

use std::collections::BTreeMap;

use common::*;
use goldman_core::linalg::{rank, SparseVec};
use goldman_core::sac::{annulus, load_fixture, SigmaBarSquare};
use goldman_core::tensor::{all_words, Word};
use goldman_core::{Error, Filtration, FreeGroupoidSpec, SacAutomorphism, SacDerivation, TruncatedTensor};
use rand_chacha::ChaCha8Rng;

fn spec(n: usize) -> FreeGroupoidSpec {
    FreeGroupoidSpec::new(
        vec!["p0".into(), "p1".into(), "p2".into()],
        vec![("d1".into(), "p1".into()), ("d2".into(), "p2".into())],
        vec!["x".into(), "y".into()],
        n,
    )
    .unwrap()
}

fn random_derivation(r: &mut ChaCha8Rng, s: &FreeGroupoidSpec) -> SacDerivation {
    let h = s.homology();
    let n = s.trunc();
    let arcs = (0..3).map(|_| random_tensor(r, h, n, 1, 3)).collect();
    let loops = (0..2).map(|_| random_tensor(r, h, n, 2, 3)).collect();
    SacDerivation::new(s, arcs, loops).unwrap()
}

#[test]
fn exp_of_derivation_laws() {
    let s = spec(5);
    for seed in 0..8 {
        let mut r = rng(seed);
        let d = random_derivation(&mut r, &s);
        let u = d.exp().unwrap();
        assert!(u.compose(&d.neg().exp().unwrap()).unwrap().is_identity());
        assert_eq!(u.log().unwrap(), d);
        let d2 = d.scale(&q(-2, 3));
        assert!(d.bracket(&d2).unwrap().add(&SacDerivation::zero(&s)).unwrap() == SacDerivation::zero(&s));
        assert_eq!(
            d.add(&d2).unwrap().exp().unwrap(),
            u.compose(&d2.exp().unwrap()).unwrap()
        );
    }
}

#[test]
fn exp_is_an_algebra_map() {
    let s = spec(4);
    let mut r = rng(3);
    let d = random_derivation(&mut r, &s);
    let u = d.exp().unwrap();
    let a = s.parse_path("x d1 ").unwrap();
    let b = s.parse_path("d1^-1 y^-1 d2").unwrap();
    let ab = a.compose(&b).unwrap();
    assert_eq!(
        u.apply(&ab).unwrap(),
        u.apply(&a).unwrap().compose(&u.apply(&b).unwrap()).unwrap()
    );
    let da = d.apply(&a).unwrap();
    let leibniz = da
        .compose(&b)
        .unwrap()
        .add(&a.compose(&d.apply(&b).unwrap()).unwrap())
        .unwrap();
    assert_eq!(d.apply(&ab).unwrap(), leibniz);
}

#[test]
fn lie_like_values_give_group_like_images() {
    let s = spec(4);
    let h = s.homology();
    let n = 4;
    let x = &TruncatedTensor::one(h, n) + &TruncatedTensor::letter(h, n, 0);
    let y = &TruncatedTensor::one(h, n) + &TruncatedTensor::letter(h, n, 1);
    let lx = x.log().unwrap();
    let ly = y.log().unwrap();
    let br = lx.commutator(&ly);
    // `D(x) = x·[log x, log y]` keeps `x` group-like.
    let d = SacDerivation::new(
        &s,
        vec![TruncatedTensor::zero(h, n), ly.clone(), br.clone()],
        vec![&x * &br, TruncatedTensor::zero(h, n)],
    )
    .unwrap();
    assert!(d.stabilizes_coproduct().unwrap());
    let u = d.exp().unwrap();
    assert!(u.check_conditions(true));
    let bad = SacDerivation::new(
        &s,
        vec![TruncatedTensor::zero(h, n), &ly * &ly, TruncatedTensor::zero(h, n)],
        vec![TruncatedTensor::zero(h, n), TruncatedTensor::zero(h, n)],
    )
    .unwrap();
    assert!(!bad.stabilizes_coproduct().unwrap());
    assert!(!bad.exp().unwrap().check_conditions(true));
}

#[test]
fn convergence_conditions() {
    let s = spec(3);
    let h = s.homology();
    let one = TruncatedTensor::one(h, 3);
    let z = TruncatedTensor::zero(h, 3);
    let d = SacDerivation::new(&s, vec![z.clone(), one.clone(), z.clone()], vec![z.clone(), z.clone()]).unwrap();
    assert!(matches!(d.exp(), Err(Error::Convergence(_))));
    let x = TruncatedTensor::letter(h, 3, 0);
    let d = SacDerivation::new(&s, vec![z.clone(); 3], vec![x.clone(), z.clone()]).unwrap();
    assert!(d.exp().is_err());
}

#[test]
fn products_of_first_filtration_span_higher_quotients() {
    let s = spec(4);
    let h = s.homology();
    let gens = [
        s.loop_element("x").unwrap().minus_identity(),
        s.loop_element("y").unwrap().minus_identity(),
    ];
    for m in 1..=3 {
        let words = all_words(h.rank(), m);
        let index = |w: &Word| words.iter().position(|v| v == w).unwrap();
        let mut rows: Vec<SparseVec> = Vec::new();
        for w in &words {
            let mut p = s.identity(0);
            for &l in w.letters() {
                p = p.compose(&gens[l as usize]).unwrap();
            }
            assert_eq!(p.filtration_degree(), Filtration::Degree(m));
            rows.push(
                p.payload
                    .degree_part(m)
                    .terms()
                    .map(|(v, c)| (index(v), c.clone()))
                    .collect(),
            );
        }
        assert_eq!(rank(rows), words.len());
    }
    assert_eq!(s.arc("d2").unwrap().filtration_degree(), Filtration::Degree(0));
}

#[test]
fn annulus_fixture_file() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/annulus.json")).unwrap();
    let (s, d) = load_fixture(&text).unwrap();
    assert_eq!(s.trunc(), 6);
    let g = s.arc("gamma0").unwrap();
    let x = s.loop_element("x").unwrap();
    assert_eq!(d.exp().unwrap().apply(&g).unwrap(), x.compose(&g).unwrap());
    for n in 1..=7 {
        let (s, d) = annulus(n).unwrap();
        let g = s.arc("gamma0").unwrap();
        let x = s.loop_element("x").unwrap();
        assert_eq!(d.exp().unwrap().apply(&g).unwrap(), x.compose(&g).unwrap());
        assert_eq!(d.apply(&g).unwrap().payload, x.payload.log().unwrap());
    }
}

#[test]
fn disconnected_groupoids() {
    let s = FreeGroupoidSpec::new(vec!["p0".into(), "q".into()], vec![], vec!["x".into()], 3).unwrap();
    assert_eq!(s.component(1), 1);
    assert!(matches!(
        s.identity(0).compose(&s.identity(1)),
        Err(Error::Composition(_))
    ));
    let id = SacAutomorphism::identity(&s);
    assert_eq!(id.apply(&s.identity(1)).unwrap(), s.identity(1));
}

#[test]
fn abelianized_square_of_loop_minus_one() {
    let s = spec(3);
    let x = s.loop_alphabet().parse("x y x^-1").unwrap();
    let mut pairings = BTreeMap::new();
    pairings.insert("x".to_string(), q(1, 1));
    pairings.insert("d1".to_string(), q(-1, 1));
    // `[x y x⁻¹] = [y]`, and `(x·y) = 0` is implied by the missing entry.
    let e = SigmaBarSquare::new(&s, &x, &pairings).unwrap();
    let ab = s.abelianize();
    let yx = TruncatedTensor::letter(ab.homology(), 1, 1);
    let lx = ab.loop_element("x").unwrap();
    assert_eq!(e.apply(&lx).unwrap().payload, yx.scale(&q(2, 1)));
    let d1 = ab.arc("d1").unwrap();
    assert_eq!(e.apply(&d1).unwrap().payload, yx.scale(&q(-2, 1)));
    for g in [lx, d1, ab.arc("d2").unwrap(), ab.loop_element("y").unwrap()] {
        let once = e.apply(&g).unwrap();
        assert!(e.apply(&once).unwrap().payload.is_zero());
    }
    assert_eq!(e.spec().trunc(), 1);
}
