//! Injective and projective objects over a fixed monoid: the mapping
//! module Map(A, M), the free rank-one module, covers and embeddings,
//! and the hom/Map adjunction.

use super::{ModMorphism, Module, PointedModule};
use crate::category::Belian;
use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::pmod::ModCat;
use crate::resolve::InjectiveProvider;
use std::sync::Arc;

/// Guard for Map(A, M) carrier enumeration (|M|^|A| functions).
const MAP_GUARD: usize = 1 << 22;

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > MAP_GUARD {
            return None;
        }
    }
    Some(acc)
}

/// Map(A, M): all set maps A -> M with the action (a.f)(b) = f(ab).
/// The basepoint is the constant zero map. Element names list the
/// values at the monoid elements in order, as "<v1|v2|...>".
///
/// The carrier set M here is any pointed set; only its size and
/// basepoint matter, so the carrier of any module can be passed in.
pub fn map_module(monoid: &Arc<Monoid>, carrier: &Module) -> Result<Module> {
    let a_len = monoid.len();
    let m_len = carrier.len();
    let total = checked_pow(m_len, a_len).ok_or_else(|| {
        Error::guard(format!(
            "Map(A, M) would have {m_len}^{a_len} elements"
        ))
    })?;
    // Function index: mixed radix, the value at monoid element a
    // occupies stride m_len^a; see map_index / map_value.
    let mut names = Vec::with_capacity(total);
    for idx in 0..total {
        let vals: Vec<&str> = (0..a_len)
            .map(|a| carrier.name(map_value(m_len, idx, a)))
            .collect();
        names.push(format!("<{}>", vals.join("|")));
    }
    // Basepoint: the constant basepoint function.
    let basepoint = map_index(m_len, &vec![carrier.basepoint(); a_len]);
    let mut action = vec![0usize; monoid.len() * total];
    for a in 0..a_len {
        for idx in 0..total {
            // (a.f)(b) = f(a*b)
            let values: Vec<usize> = (0..a_len)
                .map(|b| map_value(m_len, idx, monoid.mul(a, b)))
                .collect();
            action[a * total + idx] = map_index(m_len, &values);
        }
    }
    PointedModule::new(monoid.clone(), names, basepoint, action)
}

/// Index of the function a -> values[a] inside map_module's carrier.
pub fn map_index(m_len: usize, values: &[usize]) -> usize {
    let mut idx = 0usize;
    let mut stride = 1usize;
    for &v in values {
        idx += v * stride;
        stride *= m_len;
    }
    idx
}

/// Value of the function with the given index at monoid element a.
pub fn map_value(m_len: usize, idx: usize, a: usize) -> usize {
    let mut v = idx;
    for _ in 0..a {
        v /= m_len;
    }
    v % m_len
}

/// The canonical embedding M -> Map(A, M), m -> (a -> a.m). It is
/// injective because evaluation at 1 recovers m, and Map(A, M) is
/// injective, so this embeds any module into an injective one.
pub fn injective_embed(module: &Module) -> Result<(Module, ModMorphism)> {
    let target = map_module(module.monoid(), module)?;
    let m_len = module.len();
    let a_len = module.monoid().len();
    let map: Vec<usize> = (0..m_len)
        .map(|m| {
            let values: Vec<usize> = (0..a_len).map(|a| module.act(a, m)).collect();
            map_index(m_len, &values)
        })
        .collect();
    let e = ModMorphism::new(module.clone(), target.clone(), map)?;
    Ok((target, e))
}

/// Extension property of `target` along the mono `incl`: every
/// morphism source(incl) -> target extends over target(incl).
/// Exhaustive over enumerated homs; keep inputs small.
pub fn has_extension_property(cat: &ModCat, incl: &ModMorphism, target: &Module) -> bool {
    assert!(incl.is_injective(), "extension property needs a mono");
    for f in cat.enumerate_homs(&incl.source, target, None) {
        if cat.enumerate_extensions(incl, &f, Some(1)).is_empty() {
            return false;
        }
    }
    true
}

/// The free rank-one module: carrier A plus a disjoint basepoint,
/// action by multiplication. Every module with a chosen element m
/// receives a unique morphism sending 1 to m.
pub fn plus_module(monoid: &Arc<Monoid>) -> Module {
    let taken: bool = (0..monoid.len()).any(|a| monoid.name(a) == "0");
    let base_name = if taken { "0+" } else { "0" };
    let mut names = vec![base_name.to_string()];
    names.extend((0..monoid.len()).map(|a| monoid.name(a).to_string()));
    let total = names.len();
    let mut action = vec![0usize; monoid.len() * total];
    for a in 0..monoid.len() {
        for b in 0..monoid.len() {
            action[a * total + (b + 1)] = monoid.mul(a, b) + 1;
        }
    }
    PointedModule::new(monoid.clone(), names, 0, action).unwrap()
}

/// The morphism A+ -> M sending 1 to the chosen element.
pub fn free_map(plus: &Module, target: &Module, generator: usize) -> ModMorphism {
    let monoid = target.monoid();
    let mut map = vec![target.basepoint(); plus.len()];
    for a in 0..monoid.len() {
        map[a + 1] = target.act(a, generator);
    }
    ModMorphism::new(plus.clone(), target.clone(), map).unwrap()
}

/// Projective cover: the wedge of one free rank-one module per carrier
/// point, mapping the copy at m onto the orbit of m. Always an epi
/// from a projective (wedges of frees are projective).
pub fn projective_cover(module: &Module) -> (Module, ModMorphism) {
    let plus = plus_module(module.monoid());
    let factors: Vec<Module> = (0..module.len()).map(|_| plus.clone()).collect();
    let (p, injections) = super::limits::coproduct(&factors);
    let mut map = vec![module.basepoint(); p.len()];
    for (m, inj) in injections.iter().enumerate() {
        let leg = free_map(&plus, module, m);
        for x in 0..plus.len() {
            map[inj.apply(x)] = leg.apply(x);
        }
    }
    let cover = ModMorphism::new(p.clone(), module.clone(), map).unwrap();
    (p, cover)
}

/// Both directions of the bijection between pointed set maps P -> X
/// and module morphisms P -> Map(A, X). `carrier` plays the role of X;
/// its action is ignored.
pub struct MapAdjunction {
    pub source: Module,
    pub carrier: Module,
    pub mapped: Module,
}

impl MapAdjunction {
    pub fn new(source: &Module, carrier: &Module) -> Result<MapAdjunction> {
        let mapped = map_module(source.monoid(), carrier)?;
        Ok(MapAdjunction {
            source: source.clone(),
            carrier: carrier.clone(),
            mapped,
        })
    }

    /// A pointed set map P -> X (as a table) induces the morphism
    /// P -> Map(A, X), p -> (a -> table[a.p]).
    pub fn promote(&self, table: &[usize]) -> Result<ModMorphism> {
        if table.len() != self.source.len() {
            return Err(Error::structural("adjunction table length mismatch"));
        }
        if table[self.source.basepoint()] != self.carrier.basepoint() {
            return Err(Error::structural("adjunction table must be pointed"));
        }
        let a_len = self.source.monoid().len();
        let map: Vec<usize> = (0..self.source.len())
            .map(|p| {
                let values: Vec<usize> =
                    (0..a_len).map(|a| table[self.source.act(a, p)]).collect();
                map_index(self.carrier.len(), &values)
            })
            .collect();
        ModMorphism::new(self.source.clone(), self.mapped.clone(), map)
    }

    /// A morphism P -> Map(A, X) restricts to the pointed set map
    /// p -> g(p)(1).
    pub fn restrict(&self, g: &ModMorphism) -> Vec<usize> {
        let one = self.source.monoid().identity();
        (0..self.source.len())
            .map(|p| map_value(self.carrier.len(), g.apply(p), one))
            .collect()
    }
}

/// The standard injective class: embed every module into Map(A, M).
pub struct MapProvider;

impl InjectiveProvider<ModCat> for MapProvider {
    fn embed(&self, _cat: &ModCat, x: &Module, _degree: usize) -> Result<ModMorphism> {
        Ok(injective_embed(x)?.1)
    }
}

/// Embeds into Map(A, M) x Map(A, A+): the same class, a different
/// tower, for resolution-independence comparisons.
pub struct PaddedProvider;

impl InjectiveProvider<ModCat> for PaddedProvider {
    fn embed(&self, cat: &ModCat, x: &Module, _degree: usize) -> Result<ModMorphism> {
        let (_, e) = injective_embed(x)?;
        let pad = map_module(&cat.monoid, &plus_module(&cat.monoid))?;
        let factors = [e.target.clone(), pad.clone()];
        let zero = ModMorphism::zero(x, &pad);
        Ok(cat.tuple(&factors, &[e, zero]))
    }
}

/// Uses the identity embedding whenever the object is already
/// injective (detected by splitting its Map embedding), so towers of
/// injectives close immediately; falls back to Map(A, M) otherwise.
pub struct SplitProvider;

impl InjectiveProvider<ModCat> for SplitProvider {
    fn embed(&self, cat: &ModCat, x: &Module, _degree: usize) -> Result<ModMorphism> {
        let (_, e) = injective_embed(x)?;
        if cat
            .extend_along_mono(&e, &ModMorphism::identity(x))
            .is_some()
        {
            Ok(ModMorphism::identity(x))
        } else {
            Ok(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmod::SubModule;

    fn nilpotent_monoid() -> Arc<Monoid> {
        // {1, t, z} with t*t = z, t*z = z*z = z.
        Arc::new(
            Monoid::new(
                vec!["1".into(), "t".into(), "z".into()],
                0,
                vec![0, 1, 2, 1, 2, 2, 2, 2, 2],
            )
            .unwrap(),
        )
    }

    #[test]
    fn map_module_size_and_action() {
        let a = nilpotent_monoid();
        let plus = plus_module(&a);
        assert_eq!(plus.len(), 4);
        let mm = map_module(&a, &plus).unwrap();
        assert_eq!(mm.len(), 4usize.pow(3));
        assert!(mm.law_violations().is_empty());
    }

    #[test]
    fn embed_is_mono_into_injective() {
        let a = nilpotent_monoid();
        let plus = plus_module(&a);
        let (mm, e) = injective_embed(&plus).unwrap();
        assert!(e.is_injective());
        assert_eq!(e.target, mm);
        // Spot check: e(m)(1) = m.
        let one = a.identity();
        for m in 0..plus.len() {
            assert_eq!(map_value(plus.len(), e.apply(m), one), m);
        }
    }

    #[test]
    fn map_module_has_extension_property() {
        let a = nilpotent_monoid();
        let cat = ModCat::new(a.clone());
        let plus = plus_module(&a);
        // Small injective target: Map(A, two-point set).
        let two = PointedModule::new(
            Monoid::trivial(),
            vec!["0".into(), "x".into()],
            0,
            vec![0, 1],
        )
        .unwrap();
        let target = map_module(&a, &two).unwrap();
        // Mono: the submodule {0, z} of A+ includes into A+.
        let sub = SubModule::new(plus.clone(), vec![0, 3]).unwrap();
        let (_, incl) = sub.embed();
        assert!(has_extension_property(&cat, &incl, &target));
    }

    #[test]
    fn cover_is_epi_and_lifts() {
        let a = nilpotent_monoid();
        let cat = ModCat::new(a.clone());
        let plus = plus_module(&a);
        // M = A+/(t ~ z): quotient collapsing the ideal part partially.
        let (m, q) = super::super::quotient_by_pairs(&plus, &[(2, 3)]);
        assert!(q.is_surjective());
        let (p, cover) = projective_cover(&m);
        assert!(cover.is_surjective());
        // Projectivity of P against the epi q: every P -> M lifts to P -> A+.
        for f in cat.enumerate_homs(&p, &m, Some(64)) {
            let lifts = cat
                .enumerate_homs(&p, &plus, None)
                .into_iter()
                .filter(|l| ModMorphism::compose(&q, l) == f)
                .count();
            assert!(lifts >= 1);
        }
    }

    #[test]
    fn adjunction_is_a_bijection() {
        let a = nilpotent_monoid();
        let plus = plus_module(&a);
        let two = PointedModule::new(
            Monoid::trivial(),
            vec!["0".into(), "x".into()],
            0,
            vec![0, 1],
        )
        .unwrap();
        let adj = MapAdjunction::new(&plus, &two).unwrap();
        // All pointed tables P -> two: base fixed, 3 free slots, 2 values.
        let mut seen = Vec::new();
        for bits in 0..8u32 {
            let table: Vec<usize> = (0..plus.len())
                .map(|p| {
                    if p == plus.basepoint() {
                        0
                    } else {
                        ((bits >> (p - 1)) & 1) as usize
                    }
                })
                .collect();
            let g = adj.promote(&table).unwrap();
            assert_eq!(adj.restrict(&g), table);
            seen.push(g);
        }
        seen.sort_by(|x, y| x.map.cmp(&y.map));
        seen.dedup();
        assert_eq!(seen.len(), 8);
    }
}
