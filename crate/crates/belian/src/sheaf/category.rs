//! The category of pointed sheaves on a fixed monoided space, the
//! global-sections functor, injective embeddings by skyscraper
//! products, and the Godement resolution.

use super::{
    from_stalk_components, godement, sheaf_cokernel, sheaf_kernel, sky_product, sky_projection,
    zero_sheaf, MonoidedSpace, Sheaf, SheafMorphism,
};
use crate::category::{Belian, BelianFunctor, FunctorFlags, HomSearch};
use crate::complex::{CohomologyAt, Complex, ComplexMap};
use crate::error::{Error, Result};
use crate::pmod::{injective_embed, ModCat, ModMorphism, Module};
use crate::resolve::{derived_object, injective_resolution, InjectiveProvider};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct SheafCat {
    pub space: Arc<MonoidedSpace>,
}

impl SheafCat {
    pub fn new(space: Arc<MonoidedSpace>) -> SheafCat {
        SheafCat { space }
    }

    fn mod_cat(&self, u: usize) -> ModCat {
        ModCat::new(self.space.monoid_at(u).clone())
    }

    /// The distinct minimal opens, largest first; constraints flow
    /// from an open to the smaller opens inside it.
    fn min_opens(&self) -> Vec<usize> {
        let fs = &self.space.space;
        let mut mins: Vec<usize> = (0..fs.n_points()).map(|x| fs.min_open_of(x)).collect();
        mins.sort_unstable();
        mins.dedup();
        mins.sort_by_key(|&o| (std::cmp::Reverse(fs.open_mask(o).count_ones()), o));
        mins
    }

    /// Complete backtracking search over families of stalk
    /// components. Each complete family glues to a sheaf morphism.
    /// With `extension` set, only families extending f along the mono
    /// are produced.
    fn search_families(
        &self,
        source: &Sheaf,
        target: &Sheaf,
        extension: Option<(&SheafMorphism, &SheafMorphism)>,
        cap: Option<usize>,
    ) -> Vec<BTreeMap<usize, ModMorphism>> {
        let mins = self.min_opens();
        let mut out = Vec::new();
        let mut acc: BTreeMap<usize, ModMorphism> = BTreeMap::new();
        self.search_step(source, target, extension, &mins, 0, &mut acc, &mut out, cap);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn search_step(
        &self,
        source: &Sheaf,
        target: &Sheaf,
        extension: Option<(&SheafMorphism, &SheafMorphism)>,
        mins: &[usize],
        depth: usize,
        acc: &mut BTreeMap<usize, ModMorphism>,
        out: &mut Vec<BTreeMap<usize, ModMorphism>>,
        cap: Option<usize>,
    ) {
        if cap.is_some_and(|c| out.len() >= c) {
            return;
        }
        if depth == mins.len() {
            out.push(acc.clone());
            return;
        }
        let fs = &self.space.space;
        let o = mins[depth];
        let mut seeds: Vec<(usize, usize)> = Vec::new();
        if let Some((m, f)) = extension {
            for s in 0..m.source.sections[o].len() {
                seeds.push((m.components[o].apply(s), f.components[o].apply(s)));
            }
        }
        for (&prev, h) in acc.iter() {
            if fs.open_mask(o) & fs.open_mask(prev) == fs.open_mask(o) && prev != o {
                for t in 0..source.sections[prev].len() {
                    seeds.push((
                        source.restrict(prev, o, t),
                        target.restrict(prev, o, h.apply(t)),
                    ));
                }
            }
        }
        let cands = self.mod_cat(o).enumerate_homs_seeded(
            &source.sections[o],
            &target.sections[o],
            &seeds,
            None,
        );
        for h in cands {
            acc.insert(o, h);
            self.search_step(source, target, extension, mins, depth + 1, acc, out, cap);
            acc.remove(&o);
            if cap.is_some_and(|c| out.len() >= c) {
                return;
            }
        }
    }

    /// Extension through the skyscraper adjunction: a map into a
    /// product of skyscrapers is a family of stalk maps, and each
    /// factor extends independently in the stalk category.
    fn extend_into_sky(&self, mono: &SheafMorphism, f: &SheafMorphism) -> Option<SheafMorphism> {
        let fs = &self.space.space;
        let t = &f.target;
        let factors = t.sky_factors().unwrap().to_vec();
        let g = &mono.target;
        let mut stalk_maps = Vec::new();
        for (k, (z, _)) in factors.iter().enumerate() {
            let (_, proj) = sky_projection(t, k);
            let o = fs.min_open_of(*z);
            let f_stalk = ModMorphism::compose(&proj.components[o], &f.components[o]);
            let cat = self.mod_cat(o);
            let g_k = cat.extend_along_mono(&mono.components[o], &f_stalk)?;
            stalk_maps.push(g_k);
        }
        let mut components = Vec::new();
        for u in 0..g.sections.len() {
            let act: Vec<usize> = (0..factors.len())
                .filter(|&k| fs.open_mask(u) & (1 << factors[k].0) != 0)
                .collect();
            let sizes: Vec<usize> = act.iter().map(|&k| factors[k].1.len()).collect();
            let table: Vec<usize> = (0..g.sections[u].len())
                .map(|s| {
                    act.iter()
                        .enumerate()
                        .map(|(i, &k)| {
                            let stride: usize = sizes[i + 1..].iter().product();
                            let o = fs.min_open_of(factors[k].0);
                            stalk_maps[k].apply(g.restrict(u, o, s)) * stride
                        })
                        .sum()
                })
                .collect();
            components.push(
                ModMorphism::new(g.sections[u].clone(), t.sections[u].clone(), table)
                    .expect("adjunction components are equivariant"),
            );
        }
        Some(
            SheafMorphism::new(g.clone(), t.clone(), components)
                .expect("adjunction components are natural"),
        )
    }
}

impl Belian for SheafCat {
    type Obj = Sheaf;
    type Mor = SheafMorphism;

    fn source(&self, f: &SheafMorphism) -> Sheaf {
        f.source.clone()
    }
    fn target(&self, f: &SheafMorphism) -> Sheaf {
        f.target.clone()
    }
    fn identity(&self, x: &Sheaf) -> SheafMorphism {
        SheafMorphism::identity(x)
    }
    fn compose(&self, late: &SheafMorphism, early: &SheafMorphism) -> SheafMorphism {
        SheafMorphism::compose(late, early)
    }
    fn zero_object(&self) -> Sheaf {
        zero_sheaf(&self.space)
    }
    fn zero_morphism(&self, x: &Sheaf, y: &Sheaf) -> SheafMorphism {
        SheafMorphism::zero(x, y)
    }
    fn kernel(&self, f: &SheafMorphism) -> (Sheaf, SheafMorphism) {
        sheaf_kernel(f)
    }
    fn cokernel(&self, f: &SheafMorphism) -> (Sheaf, SheafMorphism) {
        sheaf_cokernel(f)
    }
    fn is_mono(&self, f: &SheafMorphism) -> bool {
        f.is_mono_sheaf()
    }
    fn is_epi(&self, f: &SheafMorphism) -> bool {
        f.is_epi_sheaf()
    }

    fn factor_through_mono(&self, mono: &SheafMorphism, f: &SheafMorphism) -> Option<SheafMorphism> {
        let mut components = Vec::new();
        for u in 0..f.components.len() {
            let h = self
                .mod_cat(u)
                .factor_through_mono(&mono.components[u], &f.components[u])?;
            components.push(h);
        }
        Some(
            SheafMorphism::new(f.source.clone(), mono.source.clone(), components)
                .expect("factors through monos inherit naturality"),
        )
    }

    fn factor_through_epi(&self, epi: &SheafMorphism, f: &SheafMorphism) -> Option<SheafMorphism> {
        debug_assert!(self.is_epi(epi));
        let fs = &self.space.space;
        let mut comps: BTreeMap<usize, ModMorphism> = BTreeMap::new();
        for x in 0..fs.n_points() {
            let o = fs.min_open_of(x);
            if comps.contains_key(&o) {
                continue;
            }
            let h = self
                .mod_cat(o)
                .factor_through_epi(&epi.components[o], &f.components[o])?;
            comps.insert(o, h);
        }
        Some(
            from_stalk_components(&epi.target, &f.target, &comps)
                .expect("stalk factors glue against a valid sheaf"),
        )
    }

    fn product(&self, factors: &[Sheaf]) -> (Sheaf, Vec<SheafMorphism>) {
        if factors.is_empty() {
            return (self.zero_object(), Vec::new());
        }
        let fs = &self.space.space;
        if factors.iter().all(|f| f.sky_factors().is_some()) {
            // Concatenate the skyscraper factors; projections are
            // coordinate selections.
            let mut tags = Vec::new();
            let mut ranges = Vec::new();
            for f in factors {
                let t = f.sky_factors().unwrap();
                ranges.push(tags.len()..tags.len() + t.len());
                tags.extend_from_slice(t);
            }
            let big = sky_product(&self.space, &tags);
            let mut projections = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                let mut components = Vec::new();
                for u in 0..big.sections.len() {
                    let act_big: Vec<usize> = (0..tags.len())
                        .filter(|&k| fs.open_mask(u) & (1 << tags[k].0) != 0)
                        .collect();
                    let sizes_big: Vec<usize> =
                        act_big.iter().map(|&k| tags[k].1.len()).collect();
                    let act_i: Vec<usize> = act_big
                        .iter()
                        .copied()
                        .filter(|k| ranges[i].contains(k))
                        .collect();
                    let sizes_i: Vec<usize> = act_i.iter().map(|&k| tags[k].1.len()).collect();
                    let table: Vec<usize> = (0..big.sections[u].len())
                        .map(|idx| {
                            act_i
                                .iter()
                                .enumerate()
                                .map(|(j, &k)| {
                                    let pos = act_big.iter().position(|&m| m == k).unwrap();
                                    let stride_big: usize =
                                        sizes_big[pos + 1..].iter().product();
                                    let stride_i: usize = sizes_i[j + 1..].iter().product();
                                    (idx / stride_big % sizes_big[pos]) * stride_i
                                })
                                .sum()
                        })
                        .collect();
                    components.push(
                        ModMorphism::new(
                            big.sections[u].clone(),
                            f.sections[u].clone(),
                            table,
                        )
                        .expect("coordinate projections are equivariant"),
                    );
                }
                projections.push(
                    SheafMorphism::new(big.clone(), f.clone(), components)
                        .expect("coordinate projections are natural"),
                );
            }
            return (big, projections);
        }
        let mut sections = Vec::new();
        let mut projs_at: Vec<Vec<ModMorphism>> = Vec::new();
        for u in 0..factors[0].sections.len() {
            let (obj, projs) = self
                .mod_cat(u)
                .product(&factors.iter().map(|f| f.sections[u].clone()).collect::<Vec<_>>());
            sections.push(obj);
            projs_at.push(projs);
        }
        let mut res = BTreeMap::new();
        for &(u, v) in factors[0].res.keys() {
            let table: Vec<usize> = (0..sections[u].len())
                .map(|t| {
                    let wanted: Vec<usize> = (0..factors.len())
                        .map(|i| factors[i].restrict(u, v, projs_at[u][i].apply(t)))
                        .collect();
                    (0..sections[v].len())
                        .find(|&t2| {
                            (0..factors.len())
                                .all(|i| projs_at[v][i].apply(t2) == wanted[i])
                        })
                        .expect("componentwise restriction hits the product")
                })
                .collect();
            res.insert((u, v), table);
        }
        let prod = super::SheafData::new(self.space.clone(), sections, res)
            .expect("products of sheaves are sheaves");
        let projections: Vec<SheafMorphism> = (0..factors.len())
            .map(|i| {
                SheafMorphism::new(
                    prod.clone(),
                    factors[i].clone(),
                    (0..prod.sections.len()).map(|u| projs_at[u][i].clone()).collect(),
                )
                .expect("product projections are natural")
            })
            .collect();
        (prod, projections)
    }

    fn tuple(&self, factors: &[Sheaf], maps: &[SheafMorphism]) -> SheafMorphism {
        assert_eq!(factors.len(), maps.len());
        let (prod, projs) = self.product(factors);
        if maps.is_empty() {
            let zero = self.zero_object();
            return SheafMorphism::zero(&zero, &prod);
        }
        let source = maps[0].source.clone();
        for m in maps {
            assert_eq!(m.source, source, "tuple legs share one source");
        }
        let mut components = Vec::new();
        for u in 0..prod.sections.len() {
            let table: Vec<usize> = (0..source.sections[u].len())
                .map(|s| {
                    let wanted: Vec<usize> =
                        maps.iter().map(|m| m.components[u].apply(s)).collect();
                    (0..prod.sections[u].len())
                        .find(|&t| {
                            (0..maps.len())
                                .all(|i| projs[i].components[u].apply(t) == wanted[i])
                        })
                        .expect("the tuple target exists in the product")
                })
                .collect();
            components.push(
                ModMorphism::new(
                    source.sections[u].clone(),
                    prod.sections[u].clone(),
                    table,
                )
                .expect("tuples of equivariant maps are equivariant"),
            );
        }
        SheafMorphism::new(source, prod, components).expect("tuples are natural")
    }

    fn extend_along_mono(&self, mono: &SheafMorphism, f: &SheafMorphism) -> Option<SheafMorphism> {
        assert!(self.is_mono(mono), "extension requires a mono");
        assert_eq!(mono.source, f.source, "extension endpoints mismatch");
        if f.target.sky_factors().is_some() {
            return self.extend_into_sky(mono, f);
        }
        let fams = self.search_families(&mono.target, &f.target, Some((mono, f)), Some(1));
        fams.into_iter().next().map(|comps| {
            from_stalk_components(&mono.target, &f.target, &comps)
                .expect("stalk families glue against a valid sheaf")
        })
    }
}

impl HomSearch for SheafCat {
    fn homs(&self, x: &Sheaf, y: &Sheaf, cap: Option<usize>) -> Vec<SheafMorphism> {
        self.search_families(x, y, None, cap)
            .into_iter()
            .map(|comps| {
                from_stalk_components(x, y, &comps)
                    .expect("stalk families glue against a valid sheaf")
            })
            .collect()
    }
}

/// Sections over the whole space, as a module over the global
/// structure monoid. Left strong-exact and mono-preserving, not
/// strong.
#[derive(Debug, Clone, Copy)]
pub struct GlobalSections;

impl BelianFunctor<SheafCat, ModCat> for GlobalSections {
    fn apply_obj(&self, _s: &SheafCat, t: &ModCat, x: &Sheaf) -> Module {
        let full = x.sections.len() - 1;
        assert_eq!(
            x.sections[full].monoid(),
            &t.monoid,
            "global sections land over the global structure monoid"
        );
        x.sections[full].clone()
    }

    fn apply_mor(&self, _s: &SheafCat, _t: &ModCat, f: &SheafMorphism) -> ModMorphism {
        f.components[f.components.len() - 1].clone()
    }

    fn flags(&self) -> FunctorFlags {
        FunctorFlags {
            strong: false,
            left_strong_exact: true,
            preserves_mono: true,
        }
    }
}

/// Embeds a sheaf into the product over all points of skyscrapers on
/// injective envelopes of the stalks. The target is injective: maps
/// into it are families of stalk maps, and each stalk factor has the
/// extension property in its module category.
#[derive(Debug, Clone, Copy)]
pub struct SkyProvider;

impl InjectiveProvider<SheafCat> for SkyProvider {
    fn embed(&self, cat: &SheafCat, x: &Sheaf, _degree: usize) -> Result<SheafMorphism> {
        let fs = &cat.space.space;
        let mut factors = Vec::new();
        let mut stalk_embeds = Vec::new();
        for p in 0..fs.n_points() {
            let (i, e) = injective_embed(x.stalk(p))?;
            factors.push((p, i));
            stalk_embeds.push(e);
        }
        let target = sky_product(&cat.space, &factors);
        let mut components = Vec::new();
        for u in 0..x.sections.len() {
            let act: Vec<usize> = (0..factors.len())
                .filter(|&k| fs.open_mask(u) & (1 << factors[k].0) != 0)
                .collect();
            let sizes: Vec<usize> = act.iter().map(|&k| factors[k].1.len()).collect();
            let table: Vec<usize> = (0..x.sections[u].len())
                .map(|s| {
                    act.iter()
                        .enumerate()
                        .map(|(i, &k)| {
                            let stride: usize = sizes[i + 1..].iter().product();
                            stalk_embeds[k].apply(x.germ(u, factors[k].0, s)) * stride
                        })
                        .sum()
                })
                .collect();
            components.push(
                ModMorphism::new(x.sections[u].clone(), target.sections[u].clone(), table)
                    .expect("stalkwise embeddings are equivariant"),
            );
        }
        SheafMorphism::new(x.clone(), target, components)
            .map_err(|_| Error::structural("stalkwise embedding failed naturality"))
    }
}

/// R^p of global sections through a skyscraper-product resolution.
pub fn sheaf_cohomology(
    cat: &SheafCat,
    f: &Sheaf,
    p: usize,
    cap: usize,
) -> Result<CohomologyAt<ModCat>> {
    let res = injective_resolution(cat, &SkyProvider, f, cap)?;
    let full = f.sections.len() - 1;
    let tcat = ModCat::new(cat.space.monoid_at(full).clone());
    derived_object(cat, &tcat, &GlobalSections, &res, p)
}

/// An injective resolution built once for reuse across degrees.
pub fn sky_resolution(
    cat: &SheafCat,
    f: &Sheaf,
    cap: usize,
) -> Result<crate::resolve::Resolution<SheafCat>> {
    injective_resolution(cat, &SkyProvider, f, cap)
}

/// The Godement resolution: terms are products of skyscrapers on the
/// stalks of the successive quotients, so every term is flabby. The
/// global-sections complex computes cohomology by the acyclicity of
/// the flabby class.
#[derive(Debug, Clone)]
pub struct GodementResolution {
    pub terms: Vec<Sheaf>,
    /// Z^0 = F and the successive cokernels.
    pub quotients: Vec<Sheaf>,
    pub embeds: Vec<SheafMorphism>,
    pub projs: Vec<SheafMorphism>,
    pub sections: Complex<ModCat>,
}

impl GodementResolution {
    pub fn build(cat: &SheafCat, f: &Sheaf, len: usize) -> GodementResolution {
        let mut terms = Vec::new();
        let mut quotients = vec![f.clone()];
        let mut embeds = Vec::new();
        let mut projs = Vec::new();
        for p in 0..=len {
            let z = quotients[p].clone();
            let (g, e) = godement(&z);
            let (_, proj) = sheaf_cokernel(&e);
            quotients.push(proj.target.clone());
            terms.push(g);
            embeds.push(e);
            projs.push(proj);
        }
        let full = f.sections.len() - 1;
        let tcat = ModCat::new(cat.space.monoid_at(full).clone());
        let objects: Vec<Module> = terms.iter().map(|g| g.sections[full].clone()).collect();
        let differentials: Vec<ModMorphism> = (0..len)
            .map(|p| {
                let d = SheafMorphism::compose(&embeds[p + 1], &projs[p]);
                d.components[full].clone()
            })
            .collect();
        let sections = Complex::new(&tcat, 0, objects, differentials)
            .expect("the Godement complex squares to zero");
        GodementResolution {
            terms,
            quotients,
            embeds,
            projs,
            sections,
        }
    }

    pub fn cohomology(&self, cat: &SheafCat, p: i64) -> CohomologyAt<ModCat> {
        let full = self.quotients[0].sections.len() - 1;
        let tcat = ModCat::new(cat.space.monoid_at(full).clone());
        self.sections.cohomology(&tcat, p)
    }
}

/// The functorial ladder between the Godement resolutions of the two
/// ends of a sheaf morphism, on global sections.
pub fn godement_ladder(
    cat: &SheafCat,
    u: &SheafMorphism,
    a: &GodementResolution,
    b: &GodementResolution,
) -> ComplexMap<ModCat> {
    let fs = &cat.space.space;
    let len = a.terms.len();
    let mut quotient_maps = vec![u.clone()];
    let mut term_maps: Vec<SheafMorphism> = Vec::new();
    for p in 0..len {
        let up = &quotient_maps[p];
        // The stalkwise map between the skyscraper envelopes.
        let ga = &a.terms[p];
        let gb = &b.terms[p];
        let tags_a = ga.sky_factors().unwrap().to_vec();
        let tags_b = gb.sky_factors().unwrap().to_vec();
        let mut components = Vec::new();
        for v in 0..ga.sections.len() {
            let act_a: Vec<usize> = (0..tags_a.len())
                .filter(|&k| fs.open_mask(v) & (1 << tags_a[k].0) != 0)
                .collect();
            let act_b: Vec<usize> = (0..tags_b.len())
                .filter(|&k| fs.open_mask(v) & (1 << tags_b[k].0) != 0)
                .collect();
            let sizes_a: Vec<usize> = act_a.iter().map(|&k| tags_a[k].1.len()).collect();
            let sizes_b: Vec<usize> = act_b.iter().map(|&k| tags_b[k].1.len()).collect();
            let table: Vec<usize> = (0..ga.sections[v].len())
                .map(|idx| {
                    act_b
                        .iter()
                        .enumerate()
                        .map(|(j, &k)| {
                            let point = tags_b[k].0;
                            let i = act_a.iter().position(|&m| tags_a[m].0 == point).unwrap();
                            let stride_a: usize = sizes_a[i + 1..].iter().product();
                            let stride_b: usize = sizes_b[j + 1..].iter().product();
                            let coord = idx / stride_a % sizes_a[i];
                            up.stalk_component(point).apply(coord) * stride_b
                        })
                        .sum()
                })
                .collect();
            components.push(
                ModMorphism::new(ga.sections[v].clone(), gb.sections[v].clone(), table)
                    .expect("stalkwise envelope maps are equivariant"),
            );
        }
        let gp = SheafMorphism::new(ga.clone(), gb.clone(), components)
            .expect("stalkwise envelope maps are natural");
        let next = cat
            .factor_through_epi(&a.projs[p], &SheafMorphism::compose(&b.projs[p], &gp))
            .expect("envelope maps descend to the quotients");
        term_maps.push(gp);
        quotient_maps.push(next);
    }
    let full = a.quotients[0].sections.len() - 1;
    let tcat = ModCat::new(cat.space.monoid_at(full).clone());
    let components: Vec<ModMorphism> = term_maps
        .iter()
        .map(|g| g.components[full].clone())
        .collect();
    ComplexMap::new(&tcat, a.sections.clone(), b.sections.clone(), 0, components)
        .expect("the Godement ladder commutes with the differentials")
}

/// Exactness of a composable pair at every stalk.
pub fn stalkwise_exact(cat: &SheafCat, e: &SheafMorphism, f: &SheafMorphism) -> bool {
    let fs = &cat.space.space;
    (0..fs.n_points()).all(|x| {
        let mcat = ModCat::new(e.source.stalk(x).monoid().clone());
        mcat.is_exact_pair(e.stalk_component(x), f.stalk_component(x))
    })
}
