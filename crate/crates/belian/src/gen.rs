//! Deterministic generators for test corpora: small monoids, random
//! modules and morphisms, and composite diagrams built from them.
//! Everything is seeded so failures reproduce.

use crate::category::Belian;
use crate::complex::{Complex, ComplexMap};
use crate::les::SesOfComplexes;
use crate::monoid::Monoid;
use crate::pmod::{
    coproduct, plus_module, quotient_by_pairs, quotient_by_submodule, ModCat, ModMorphism,
    Module, PointedModule, SubModule,
};
use crate::snake::SnakeInput;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All commutative monoids on up to `max` elements (max <= 3), up to
/// nothing: listed explicitly with stable names. One element: trivial.
/// Two elements: Z/1 with a unit adjoined would be a group; the
/// commutative options are {1,e} idempotent, {1,g} with g*g = 1, and
/// {1,z} with z*z = z absorbing (same as idempotent). Three elements
/// add the nilpotent chain and the cyclic group of order 3 among
/// others.
pub fn small_monoids(max: usize) -> Vec<Arc<Monoid>> {
    let mut out = vec![Monoid::trivial()];
    if max < 2 {
        return out;
    }
    let two = |table: Vec<usize>, label: &str| {
        Arc::new(Monoid::new(vec!["1".into(), label.into()], 0, table).unwrap())
    };
    // e*e = e (idempotent, a.k.a. the Sierpinski monoid).
    out.push(two(vec![0, 1, 1, 1], "e"));
    // g*g = 1 (order-two group).
    out.push(two(vec![0, 1, 1, 0], "g"));
    if max < 3 {
        return out;
    }
    let three = |names: [&str; 3], table: Vec<usize>| {
        Arc::new(
            Monoid::new(
                names.iter().map(|s| s.to_string()).collect(),
                0,
                table,
            )
            .unwrap(),
        )
    };
    // t*t = z, t*z = z*z = z: nilpotent chain.
    out.push(three(["1", "t", "z"], vec![0, 1, 2, 1, 2, 2, 2, 2, 2]));
    // Cyclic group of order 3.
    out.push(three(["1", "g", "h"], vec![0, 1, 2, 1, 2, 0, 2, 0, 1]));
    // Semilattice chain 1 > e > z: both idempotent, e*z = z.
    out.push(three(["1", "e", "z"], vec![0, 1, 2, 1, 1, 2, 2, 2, 2]));
    // Order-two group with an absorbing zero adjoined.
    out.push(three(["1", "g", "z"], vec![0, 1, 2, 1, 0, 2, 2, 2, 2]));
    out
}

/// A random module over `monoid`: a wedge of cyclic pieces cut down by
/// a random congruence. `size_hint` bounds the carrier loosely.
pub fn random_module(monoid: &Arc<Monoid>, size_hint: usize, rng: &mut ChaCha8Rng) -> Module {
    let plus = plus_module(monoid);
    let copies = rng.gen_range(1..=3.max(size_hint / plus.len().max(1)).min(4));
    let factors: Vec<Module> = (0..copies).map(|_| plus.clone()).collect();
    let (wedge, _) = coproduct(&factors);
    let mut m = wedge;
    // Random merges until the size hint is met (or we run out).
    let mut guard = 0;
    while m.len() > size_hint.max(2) && guard < 32 {
        guard += 1;
        let x = rng.gen_range(0..m.len());
        let y = rng.gen_range(0..m.len());
        if x == y {
            continue;
        }
        let (q, _) = quotient_by_pairs(&m, &[(x, y)]);
        if q.len() >= 2 {
            m = q;
        }
    }
    relabel(&m)
}

/// Rename carrier elements to a canonical "0, x1, x2, ..." scheme so
/// generated modules have small stable names regardless of their
/// construction history.
pub fn relabel(m: &Module) -> Module {
    let mut names = vec![String::new(); m.len()];
    names[m.basepoint()] = "0".to_string();
    let mut next = 1;
    for i in 0..m.len() {
        if i != m.basepoint() {
            names[i] = format!("x{next}");
            next += 1;
        }
    }
    PointedModule::new(
        m.monoid().clone(),
        names,
        m.basepoint(),
        (0..m.monoid().len())
            .flat_map(|a| (0..m.len()).map(move |x| (a, x)))
            .map(|(a, x)| m.act(a, x))
            .collect(),
    )
    .unwrap()
}

/// A uniformly chosen morphism `source -> target`, built by randomized
/// backtracking over equivariant assignments. Returns the zero
/// morphism when nothing else is found (it always exists).
pub fn random_morphism(
    cat: &ModCat,
    source: &Module,
    target: &Module,
    rng: &mut ChaCha8Rng,
) -> ModMorphism {
    // Enumerate up to a few dozen homs and pick one; complete
    // enumeration is fine at corpus sizes.
    let homs = cat.enumerate_homs(source, target, Some(64));
    if homs.is_empty() {
        return ModMorphism::zero(source, target);
    }
    homs[rng.gen_range(0..homs.len())].clone()
}

/// A random submodule of `m` generated by a few random points.
pub fn random_submodule(m: &Module, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let picks = rng.gen_range(0..=2.min(m.len() - 1));
    let seed: Vec<usize> = (0..picks).map(|_| rng.gen_range(0..m.len())).collect();
    m.submodule_closure(&seed)
}

/// A random strong morphism out of `x`: collapse a random submodule,
/// then include the quotient into a wedge with random padding.
pub fn random_strong_morphism(
    cat: &ModCat,
    x: &Module,
    rng: &mut ChaCha8Rng,
) -> ModMorphism {
    let k = random_submodule(x, rng);
    let (coim, proj) = quotient_by_submodule(x, &k);
    let padding = random_module(&cat.monoid, 4, rng);
    let (_, injections) = coproduct(&[coim, padding]);
    ModMorphism::compose(&injections[0], &proj)
}

/// A valid snake ladder over random modules. The rows are exact in
/// the middle, the top right arrow is epi and the bottom left mono.
/// With `force_strong` the middle vertical is strong by construction;
/// otherwise it is an arbitrary morphism.
pub fn random_snake(cat: &ModCat, force_strong: bool, rng: &mut ChaCha8Rng) -> SnakeInput<ModCat> {
    let x2 = random_module(&cat.monoid, 6, rng);
    let f2 = if force_strong {
        random_strong_morphism(cat, &x2, rng)
    } else {
        let y2 = random_module(&cat.monoid, 6, rng);
        random_morphism(cat, &x2, &y2, rng)
    };
    let y2 = f2.target.clone();
    // Top row: X1 = a submodule of X2 included, X3 its quotient.
    let s = random_submodule(&x2, rng);
    let (_, g1) = SubModule::new(x2.clone(), s.clone()).unwrap().embed();
    let (_, g2) = quotient_by_submodule(&x2, &s);
    // Bottom row: Y1 must absorb f2(im g1).
    let mut t_seed: Vec<usize> = s.iter().map(|&m| f2.apply(m)).collect();
    if y2.len() > 1 && rng.gen_bool(0.5) {
        t_seed.push(rng.gen_range(0..y2.len()));
    }
    let t = y2.submodule_closure(&t_seed);
    let (_, h1) = SubModule::new(y2.clone(), t.clone()).unwrap().embed();
    let (_, h2) = quotient_by_submodule(&y2, &t);
    // Verticals on the ends are forced by commutativity.
    let f1 = cat
        .factor_through_mono(&h1, &ModMorphism::compose(&f2, &g1))
        .expect("f2(im g1) was closed into Y1");
    let f3 = cat
        .factor_through_epi(&g2, &ModMorphism::compose(&h2, &f2))
        .expect("h2 . f2 kills the fiber of g2");
    SnakeInput {
        g1,
        g2,
        h1,
        h2,
        f1,
        f2,
        f3,
    }
}

/// A strong complex: every differential is a quotient projection
/// followed by a wedge inclusion, hence injective outside its kernel.
/// The kernel of each step is grown past the incoming image so the
/// cohomology is usually nonzero.
pub fn random_strong_complex(
    cat: &ModCat,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Complex<ModCat> {
    let mut objects = vec![random_module(&cat.monoid, 5, rng)];
    let mut differentials: Vec<ModMorphism> = Vec::with_capacity(len);
    for i in 0..len {
        let prev = objects[i].clone();
        let mut seed: Vec<usize> = match differentials.last() {
            Some(d) => d.image_members(),
            None => vec![prev.basepoint()],
        };
        if prev.len() > 1 && rng.gen_bool(0.7) {
            seed.push(rng.gen_range(0..prev.len()));
        }
        let k = prev.submodule_closure(&seed);
        let (q, proj) = quotient_by_submodule(&prev, &k);
        let padding = random_module(&cat.monoid, 3, rng);
        let (_, injections) = coproduct(&[q, padding]);
        let d = ModMorphism::compose(&injections[0], &proj);
        objects.push(d.target.clone());
        differentials.push(d);
    }
    Complex::new(cat, 0, objects, differentials).unwrap()
}

/// A complex with arbitrary differentials: d1 is drawn among the maps
/// vanishing on the image of d0 by factoring through its cokernel.
pub fn random_loose_complex(cat: &ModCat, rng: &mut ChaCha8Rng) -> Complex<ModCat> {
    let a = cat.monoid.clone();
    let x = random_module(&a, 4, rng);
    let y = random_module(&a, 4, rng);
    let z = random_module(&a, 4, rng);
    let d0 = random_morphism(cat, &x, &y, rng);
    let (c, proj) = cat.cokernel(&d0);
    let tail = random_morphism(cat, &c, &z, rng);
    let d1 = ModMorphism::compose(&tail, &proj);
    Complex::new(cat, 0, vec![x, y, z], vec![d0, d1]).unwrap()
}

/// A short exact sequence of complexes around a random middle F: the
/// sub E is the closure of random seeds under the action and the
/// differentials, G the degreewise quotient. With `strong_middle` the
/// middle complex is strong by construction.
pub fn random_ses(
    cat: &ModCat,
    strong_middle: bool,
    rng: &mut ChaCha8Rng,
) -> SesOfComplexes<ModCat> {
    let middle = if strong_middle {
        random_strong_complex(cat, 2, rng)
    } else {
        random_loose_complex(cat, rng)
    };
    let n = middle.objects.len();
    // Seeds per degree, closed under the action and pushed forward
    // along the differentials.
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let obj = &middle.objects[i];
        let mut seed: Vec<usize> = vec![obj.basepoint()];
        if obj.len() > 1 && rng.gen_bool(0.6) {
            seed.push(rng.gen_range(0..obj.len()));
        }
        if i > 0 {
            let d = &middle.differentials[i - 1];
            seed.extend(members[i - 1].iter().map(|&m| d.apply(m)));
        }
        members.push(obj.submodule_closure(&seed));
    }
    let mut e_objects = Vec::with_capacity(n);
    let mut e_incls = Vec::with_capacity(n);
    let mut g_objects = Vec::with_capacity(n);
    let mut g_projs = Vec::with_capacity(n);
    for i in 0..n {
        let (sub, incl) = SubModule::new(middle.objects[i].clone(), members[i].clone())
            .unwrap()
            .embed();
        e_objects.push(sub);
        e_incls.push(incl);
        let (quot, proj) = quotient_by_submodule(&middle.objects[i], &members[i]);
        g_objects.push(quot);
        g_projs.push(proj);
    }
    let mut e_diffs = Vec::with_capacity(n - 1);
    let mut g_diffs = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let d = &middle.differentials[i];
        let de = cat
            .factor_through_mono(&e_incls[i + 1], &ModMorphism::compose(d, &e_incls[i]))
            .expect("the subcomplex is closed under d");
        e_diffs.push(de);
        let dg = cat
            .factor_through_epi(&g_projs[i], &ModMorphism::compose(&g_projs[i + 1], d))
            .expect("d descends to the quotient");
        g_diffs.push(dg);
    }
    let e_complex = Complex::new(cat, 0, e_objects, e_diffs).unwrap();
    let g_complex = Complex::new(cat, 0, g_objects, g_diffs).unwrap();
    let e_map = ComplexMap::new(cat, e_complex, middle.clone(), 0, e_incls).unwrap();
    let f_map = ComplexMap::new(cat, middle, g_complex, 0, g_projs).unwrap();
    SesOfComplexes::new(cat, e_map, f_map).unwrap()
}
