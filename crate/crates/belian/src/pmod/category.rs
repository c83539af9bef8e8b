//! The category of finite pointed modules over a fixed monoid, as a
//! `Belian` instance.

use super::{cokernel, kernel, ModMorphism, Module, PointedModule};
use crate::category::{Belian, BelianFunctor, FunctorFlags, HomSearch};
use crate::monoid::{Monoid, MonoidHom};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct ModCat {
    pub monoid: Arc<Monoid>,
}

impl ModCat {
    pub fn new(monoid: Arc<Monoid>) -> ModCat {
        ModCat { monoid }
    }

    /// All equivariant pointed maps from `source` to `target`, in a
    /// deterministic order, at most `cap` of them if given.
    pub fn enumerate_homs(
        &self,
        source: &Module,
        target: &Module,
        cap: Option<usize>,
    ) -> Vec<ModMorphism> {
        let mut found = Vec::new();
        let mut assign = vec![usize::MAX; source.len()];
        let seeds = [(source.basepoint(), target.basepoint())];
        if let Some(start) = propagate(source, target, &mut assign, &seeds) {
            // `start` lists the cells fixed by the basepoint seed; they
            // stay for the whole search.
            let _ = start;
            search_all(source, target, &mut assign, &mut found, cap);
        }
        found
    }

    /// All equivariant pointed maps that send each seed cell to its
    /// prescribed value. Complete search; deterministic order.
    pub fn enumerate_homs_seeded(
        &self,
        source: &Module,
        target: &Module,
        seeds: &[(usize, usize)],
        cap: Option<usize>,
    ) -> Vec<ModMorphism> {
        let mut assign = vec![usize::MAX; source.len()];
        let all: Vec<(usize, usize)> = seeds
            .iter()
            .copied()
            .chain([(source.basepoint(), target.basepoint())])
            .collect();
        let mut found = Vec::new();
        if propagate(source, target, &mut assign, &all).is_some() {
            search_all(source, target, &mut assign, &mut found, cap);
        }
        found
    }

    /// Extensions of f along the mono m, i.e. all g with g . m = f.
    /// Complete search; deterministic order.
    pub fn enumerate_extensions(
        &self,
        mono: &ModMorphism,
        f: &ModMorphism,
        cap: Option<usize>,
    ) -> Vec<ModMorphism> {
        assert!(mono.is_injective(), "extension requires a mono");
        assert_eq!(mono.source, f.source, "extension endpoints mismatch");
        let source = &mono.target;
        let target = &f.target;
        let mut assign = vec![usize::MAX; source.len()];
        let seeds: Vec<(usize, usize)> = (0..mono.source.len())
            .map(|x| (mono.apply(x), f.apply(x)))
            .chain([(source.basepoint(), target.basepoint())])
            .collect();
        let mut found = Vec::new();
        if propagate(source, target, &mut assign, &seeds).is_some() {
            search_all(source, target, &mut assign, &mut found, cap);
        }
        found
    }
}

/// Forces the given assignments and closes them under equivariance.
/// Returns None on conflict, otherwise the list of cells it fixed.
fn propagate(
    source: &Module,
    target: &Module,
    assign: &mut [usize],
    seeds: &[(usize, usize)],
) -> Option<Vec<usize>> {
    let mut fixed = Vec::new();
    let mut stack: Vec<(usize, usize)> = seeds.to_vec();
    while let Some((m, v)) = stack.pop() {
        if assign[m] != usize::MAX {
            if assign[m] != v {
                for &c in &fixed {
                    assign[c] = usize::MAX;
                }
                return None;
            }
            continue;
        }
        assign[m] = v;
        fixed.push(m);
        for a in 0..source.monoid().len() {
            stack.push((source.act(a, m), target.act(a, v)));
        }
    }
    Some(fixed)
}

fn search_all(
    source: &Module,
    target: &Module,
    assign: &mut [usize],
    found: &mut Vec<ModMorphism>,
    cap: Option<usize>,
) {
    if let Some(c) = cap {
        if found.len() >= c {
            return;
        }
    }
    let Some(cell) = assign.iter().position(|&v| v == usize::MAX) else {
        found.push(ModMorphism {
            source: source.clone(),
            target: target.clone(),
            map: Arc::from(assign.to_vec()),
        });
        return;
    };
    for v in 0..target.len() {
        if let Some(fixed) = propagate(source, target, assign, &[(cell, v)]) {
            search_all(source, target, assign, found, cap);
            for c in fixed {
                assign[c] = usize::MAX;
            }
        }
        if let Some(c) = cap {
            if found.len() >= c {
                return;
            }
        }
    }
}

fn product_strides(sizes: &[usize]) -> Vec<usize> {
    // Last factor varies fastest.
    let mut strides = vec![1usize; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    strides
}

impl Belian for ModCat {
    type Obj = Module;
    type Mor = ModMorphism;

    fn source(&self, f: &ModMorphism) -> Module {
        f.source.clone()
    }
    fn target(&self, f: &ModMorphism) -> Module {
        f.target.clone()
    }
    fn identity(&self, x: &Module) -> ModMorphism {
        ModMorphism::identity(x)
    }
    fn compose(&self, late: &ModMorphism, early: &ModMorphism) -> ModMorphism {
        ModMorphism::compose(late, early)
    }
    fn zero_object(&self) -> Module {
        PointedModule::zero(&self.monoid)
    }
    fn zero_morphism(&self, source: &Module, target: &Module) -> ModMorphism {
        ModMorphism::zero(source, target)
    }
    fn kernel(&self, f: &ModMorphism) -> (Module, ModMorphism) {
        kernel(f)
    }
    fn cokernel(&self, f: &ModMorphism) -> (Module, ModMorphism) {
        cokernel(f)
    }
    fn is_mono(&self, f: &ModMorphism) -> bool {
        f.is_injective()
    }
    fn is_epi(&self, f: &ModMorphism) -> bool {
        f.is_surjective()
    }

    fn factor_through_mono(&self, mono: &ModMorphism, f: &ModMorphism) -> Option<ModMorphism> {
        debug_assert!(mono.is_injective());
        debug_assert_eq!(mono.target, f.target);
        let mut preimage = vec![usize::MAX; mono.target.len()];
        for (k, &v) in mono.map.iter().enumerate() {
            preimage[v] = k;
        }
        let mut map = Vec::with_capacity(f.source.len());
        for &v in f.map.iter() {
            if preimage[v] == usize::MAX {
                return None;
            }
            map.push(preimage[v]);
        }
        Some(ModMorphism {
            source: f.source.clone(),
            target: mono.source.clone(),
            map: Arc::from(map),
        })
    }

    fn factor_through_epi(&self, epi: &ModMorphism, f: &ModMorphism) -> Option<ModMorphism> {
        debug_assert!(epi.is_surjective());
        debug_assert_eq!(epi.source, f.source);
        let mut map = vec![usize::MAX; epi.target.len()];
        for x in 0..epi.source.len() {
            let q = epi.apply(x);
            let v = f.apply(x);
            if map[q] == usize::MAX {
                map[q] = v;
            } else if map[q] != v {
                return None;
            }
        }
        debug_assert!(map.iter().all(|&v| v != usize::MAX));
        Some(ModMorphism {
            source: epi.target.clone(),
            target: f.target.clone(),
            map: Arc::from(map),
        })
    }

    fn product(&self, factors: &[Module]) -> (Module, Vec<ModMorphism>) {
        if factors.is_empty() {
            return (self.zero_object(), Vec::new());
        }
        let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
        let strides = product_strides(&sizes);
        let total: usize = sizes.iter().product();
        let decode = |idx: usize, i: usize| idx / strides[i] % sizes[i];
        let names: Vec<String> = (0..total)
            .map(|idx| {
                let parts: Vec<&str> = (0..factors.len())
                    .map(|i| factors[i].name(decode(idx, i)))
                    .collect();
                format!("({})", parts.join("|"))
            })
            .collect();
        let basepoint: usize = (0..factors.len())
            .map(|i| factors[i].basepoint() * strides[i])
            .sum();
        let a_len = self.monoid.len();
        let mut action = vec![0usize; a_len * total];
        for idx in 0..total {
            for a in 0..a_len {
                let mut out = 0usize;
                for i in 0..factors.len() {
                    out += factors[i].act(a, decode(idx, i)) * strides[i];
                }
                action[a * total + idx] = out;
            }
        }
        let prod =
            PointedModule::new(self.monoid.clone(), names, basepoint, action).unwrap();
        let projections = (0..factors.len())
            .map(|i| ModMorphism {
                source: prod.clone(),
                target: factors[i].clone(),
                map: (0..total).map(|idx| decode(idx, i)).collect(),
            })
            .collect();
        (prod, projections)
    }

    fn tuple(&self, factors: &[Module], maps: &[ModMorphism]) -> ModMorphism {
        assert_eq!(factors.len(), maps.len());
        let (prod, _) = self.product(factors);
        if maps.is_empty() {
            let zero = self.zero_object();
            return ModMorphism::zero(&zero, &prod);
        }
        let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
        let strides = product_strides(&sizes);
        let source = maps[0].source.clone();
        for m in maps {
            assert_eq!(m.source, source, "tuple legs share one source");
        }
        let map: Vec<usize> = (0..source.len())
            .map(|x| (0..maps.len()).map(|i| maps[i].apply(x) * strides[i]).sum())
            .collect();
        ModMorphism {
            source,
            target: prod,
            map: Arc::from(map),
        }
    }

    fn extend_along_mono(&self, mono: &ModMorphism, f: &ModMorphism) -> Option<ModMorphism> {
        self.enumerate_extensions(mono, f, Some(1)).into_iter().next()
    }
}

impl HomSearch for ModCat {
    fn homs(&self, x: &Module, y: &Module, cap: Option<usize>) -> Vec<ModMorphism> {
        self.enumerate_homs(x, y, cap)
    }

    fn find_iso(&self, x: &Module, y: &Module) -> Option<ModMorphism> {
        if x.len() != y.len() {
            return None;
        }
        self.enumerate_homs(x, y, None)
            .into_iter()
            .find(|f| f.is_injective() && f.is_surjective())
    }
}

/// Restriction of scalars along a monoid homomorphism phi: A -> B:
/// a B-module becomes an A-module on the same carrier, with
/// a.m = phi(a).m. Carriers and map tables are untouched, so kernels,
/// images and strongness are all preserved on the nose.
pub struct RestrictScalars {
    pub hom: MonoidHom,
}

impl BelianFunctor<ModCat, ModCat> for RestrictScalars {
    fn apply_obj(&self, _s: &ModCat, _t: &ModCat, x: &Module) -> Module {
        let a = &self.hom.source;
        let action: Vec<usize> = (0..a.len())
            .flat_map(|ai| {
                let bi = self.hom.map[ai];
                (0..x.len()).map(move |m| (bi, m))
            })
            .map(|(bi, m)| x.act(bi, m))
            .collect();
        PointedModule::new(
            a.clone(),
            x.names().to_vec(),
            x.basepoint(),
            action,
        )
        .expect("restriction preserves the module laws")
    }

    fn apply_mor(&self, s: &ModCat, t: &ModCat, f: &ModMorphism) -> ModMorphism {
        let src = self.apply_obj(s, t, &f.source);
        let tgt = self.apply_obj(s, t, &f.target);
        ModMorphism::new(src, tgt, f.map.to_vec())
            .expect("restriction preserves equivariance")
    }

    fn flags(&self) -> FunctorFlags {
        FunctorFlags {
            strong: true,
            left_strong_exact: true,
            preserves_mono: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmod::PointedModule;

    fn set0(points: &[&str], base: usize) -> Module {
        let triv = Monoid::trivial();
        PointedModule::new(
            triv,
            points.iter().map(|s| s.to_string()).collect(),
            base,
            (0..points.len()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn epi_iff_zero_cokernel_on_samples() {
        let x = set0(&["0", "a", "b"], 0);
        let y = set0(&["0", "c"], 0);
        let cat = ModCat::new(x.monoid().clone());
        for f in cat.enumerate_homs(&x, &y, None) {
            let (c, _) = cat.cokernel(&f);
            assert_eq!(cat.is_epi(&f), cat.is_zero_object(&c));
        }
    }

    #[test]
    fn balanced_mono_epi_is_iso() {
        let x = set0(&["0", "a"], 0);
        let cat = ModCat::new(x.monoid().clone());
        for f in cat.enumerate_homs(&x, &x, None) {
            if cat.is_mono(&f) && cat.is_epi(&f) {
                let inv = cat.inverse(&f).unwrap();
                assert_eq!(cat.compose(&inv, &f), cat.identity(&x));
                assert_eq!(cat.compose(&f, &inv), cat.identity(&x));
            }
        }
    }

    #[test]
    fn product_size_and_projections() {
        let x = set0(&["0", "a", "b"], 0);
        let y = set0(&["0", "c", "d"], 0);
        let cat = ModCat::new(x.monoid().clone());
        let (p, projs) = cat.product(&[x.clone(), y.clone()]);
        assert_eq!(p.len(), 9);
        assert!(projs.iter().all(|pr| pr.is_surjective()));
        // Universal property on a sample pair of legs.
        let t = set0(&["0", "t"], 0);
        let l1 = ModMorphism::new(t.clone(), x.clone(), vec![0, 1]).unwrap();
        let l2 = ModMorphism::new(t.clone(), y.clone(), vec![0, 2]).unwrap();
        let med = cat.tuple(&[x, y], &[l1.clone(), l2.clone()]);
        assert_eq!(ModMorphism::compose(&projs[0], &med), l1);
        assert_eq!(ModMorphism::compose(&projs[1], &med), l2);
    }

    #[test]
    fn extension_search_is_complete_for_pointed_sets() {
        // In pointed sets every mono extends: send missing points anywhere.
        let small = set0(&["0", "a"], 0);
        let big = set0(&["0", "a", "b"], 0);
        let target = set0(&["0", "x", "y"], 0);
        let cat = ModCat::new(small.monoid().clone());
        let mono = ModMorphism::new(small.clone(), big, vec![0, 1]).unwrap();
        let f = ModMorphism::new(small, target, vec![0, 2]).unwrap();
        let exts = cat.enumerate_extensions(&mono, &f, None);
        // b can go to any of the three points.
        assert_eq!(exts.len(), 3);
        for g in &exts {
            assert_eq!(ModMorphism::compose(g, &mono), f);
        }
    }

    #[test]
    fn strong_factorization_composes_back() {
        let x = set0(&["0", "a", "b"], 0);
        let y = set0(&["0", "c", "d"], 0);
        let cat = ModCat::new(x.monoid().clone());
        for f in cat.enumerate_homs(&x, &y, None) {
            let (e, m) = cat.epi_mono_through_image(&f);
            assert_eq!(ModMorphism::compose(&m, &e), f);
            assert!(cat.is_epi(&e));
            assert!(cat.is_mono(&m));
            assert_eq!(cat.is_strong(&f), f.is_strong_table());
        }
    }
}
