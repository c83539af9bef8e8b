//! Pointed sheaves of modules on finite spaces carrying a sheaf of
//! monoids, with the constructions the cohomology machinery needs:
//! sheafification, skyscraper products, the Godement envelope,
//! extension by zero, pushforward to a closed subspace and direct
//! limits.

pub mod category;

pub use category::{
    sheaf_cohomology, sky_resolution, GlobalSections, GodementResolution, SheafCat, SkyProvider,
};

use crate::error::{Error, Result};
use crate::monoid::{Monoid, MonoidHom};
use crate::pmod::{
    kernel as pmod_kernel, Diagram, ModMorphism, Module, PointedModule, SubModule,
};
use crate::topo::FinSpace;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A finite space together with a sheaf of monoids on it. The
/// restriction homs are stored for every strictly nested pair of
/// opens, indexed by their positions in the open list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidedSpace {
    pub space: FinSpace,
    structure: Vec<Arc<Monoid>>,
    res: BTreeMap<(usize, usize), MonoidHom>,
}

impl MonoidedSpace {
    /// The trivial monoid on every open.
    pub fn trivial(space: FinSpace) -> Arc<MonoidedSpace> {
        let one = Monoid::trivial();
        let structure = vec![one.clone(); space.opens().len()];
        let mut res = BTreeMap::new();
        for u in 0..space.opens().len() {
            for v in 0..space.opens().len() {
                if v != u && space.open_mask(v) & space.open_mask(u) == space.open_mask(v) {
                    res.insert((u, v), MonoidHom::identity(&one));
                }
            }
        }
        Arc::new(MonoidedSpace {
            space,
            structure,
            res,
        })
    }

    pub fn new(
        space: FinSpace,
        structure: Vec<Arc<Monoid>>,
        res: BTreeMap<(usize, usize), MonoidHom>,
    ) -> Result<Arc<MonoidedSpace>> {
        if structure.len() != space.opens().len() {
            return Err(Error::structural("one monoid per open is required"));
        }
        if !structure[0].is_trivial() {
            return Err(Error::structural("the empty open carries the trivial monoid"));
        }
        for u in 0..structure.len() {
            for v in 0..structure.len() {
                let strict = v != u
                    && space.open_mask(v) & space.open_mask(u) == space.open_mask(v);
                match res.get(&(u, v)) {
                    None if strict => {
                        return Err(Error::structural("missing structure restriction"));
                    }
                    Some(_) if !strict => {
                        return Err(Error::structural("restriction on a non-nested pair"));
                    }
                    Some(h) if h.source != structure[u] || h.target != structure[v] => {
                        return Err(Error::structural(
                            "structure restriction endpoints mismatch",
                        ));
                    }
                    _ => {}
                }
            }
        }
        let ms = MonoidedSpace {
            space,
            structure,
            res,
        };
        // Composition law.
        for &(u, v) in ms.res.keys() {
            for w in 0..ms.structure.len() {
                if ms.res.contains_key(&(v, w)) {
                    for a in 0..ms.structure[u].len() {
                        if ms.res_elt(v, w, ms.res_elt(u, v, a)) != ms.res_elt(u, w, a) {
                            return Err(Error::structural(
                                "structure restrictions do not compose",
                            ));
                        }
                    }
                }
            }
        }
        // The structure itself glues: sections over u biject with
        // compatible families of stalks.
        for u in 1..ms.space.opens().len() {
            let points = ms.space.points_of(ms.space.open_mask(u));
            let families = monoid_families(&ms, &points);
            let germs: Vec<Vec<usize>> = (0..ms.structure[u].len())
                .map(|a| {
                    points
                        .iter()
                        .map(|&x| ms.res_elt(u, ms.space.min_open_of(x), a))
                        .collect()
                })
                .collect();
            let mut seen = germs.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != ms.structure[u].len() || families.len() != ms.structure[u].len() {
                return Err(Error::structural("structure monoids do not glue"));
            }
        }
        Ok(Arc::new(ms))
    }

    pub fn monoid_at(&self, u: usize) -> &Arc<Monoid> {
        &self.structure[u]
    }

    /// Image of a section of the structure monoid under restriction.
    pub fn res_elt(&self, u: usize, v: usize, a: usize) -> usize {
        if u == v {
            a
        } else {
            self.res[&(u, v)].map[a]
        }
    }

    pub fn res_hom(&self, u: usize, v: usize) -> MonoidHom {
        if u == v {
            MonoidHom::identity(&self.structure[u])
        } else {
            self.res[&(u, v)].clone()
        }
    }

    pub fn is_trivial_structure(&self) -> bool {
        self.structure.iter().all(|m| m.is_trivial())
    }
}

fn monoid_families(ms: &MonoidedSpace, points: &[usize]) -> Vec<Vec<usize>> {
    let mins: Vec<usize> = points.iter().map(|&x| ms.space.min_open_of(x)).collect();
    let mut found = Vec::new();
    let mut partial = Vec::new();
    enumerate_families(
        &mins,
        &|i| ms.structure[mins[i]].len(),
        &|i, j, a| {
            // Does component j lie in the open of component i?
            let inside =
                ms.space.open_mask(mins[j]) & ms.space.open_mask(mins[i]) == ms.space.open_mask(mins[j]);
            inside.then(|| ms.res_elt(mins[i], mins[j], a))
        },
        &mut partial,
        &mut found,
    );
    found
}

/// Depth-first enumeration of tuples (one value per slot) such that
/// whenever slot j is a specialization of slot i, the value at j is
/// the restriction of the value at i. `restrict(i, j, a)` returns the
/// forced value at j, or None when j is not below i.
pub(crate) fn enumerate_families(
    slots: &[usize],
    size_at: &dyn Fn(usize) -> usize,
    restrict: &dyn Fn(usize, usize, usize) -> Option<usize>,
    partial: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    let i = partial.len();
    if i == slots.len() {
        found.push(partial.clone());
        return;
    }
    'next: for v in 0..size_at(i) {
        for (j, &pj) in partial.iter().enumerate() {
            if let Some(forced) = restrict(j, i, pj) {
                if forced != v {
                    continue 'next;
                }
            }
            if let Some(forced) = restrict(i, j, v) {
                if forced != pj {
                    continue 'next;
                }
            }
        }
        partial.push(v);
        enumerate_families(slots, size_at, restrict, partial, found);
        partial.pop();
    }
}

/// A pointed sheaf (or presheaf while under construction): one module
/// per open, over that open's structure monoid, with restriction
/// tables for every strictly nested pair.
#[derive(Debug, Clone)]
pub struct SheafData {
    pub space: Arc<MonoidedSpace>,
    pub sections: Vec<Module>,
    res: BTreeMap<(usize, usize), Arc<[usize]>>,
    /// When the sheaf is a product of skyscrapers, the (point, stalk)
    /// factors in carrier order; used to route extension problems
    /// through the skyscraper adjunction.
    sky: Option<Vec<(usize, Module)>>,
}

pub type Sheaf = Arc<SheafData>;

impl PartialEq for SheafData {
    fn eq(&self, other: &SheafData) -> bool {
        self.space == other.space && self.sections == other.sections && self.res == other.res
    }
}

impl SheafData {
    /// Validates the presheaf laws only; gluing is not required.
    pub fn presheaf(
        space: Arc<MonoidedSpace>,
        sections: Vec<Module>,
        res: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Sheaf> {
        let data = SheafData {
            space,
            sections,
            res: res.into_iter().map(|(k, v)| (k, Arc::from(v))).collect(),
            sky: None,
        };
        let errs = data.presheaf_violations();
        if let Some(e) = errs.first() {
            return Err(Error::structural(e.clone()));
        }
        Ok(Arc::new(data))
    }

    /// Validates the presheaf laws and the sheaf condition.
    pub fn new(
        space: Arc<MonoidedSpace>,
        sections: Vec<Module>,
        res: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Sheaf> {
        let data = SheafData::presheaf(space, sections, res)?;
        let errs = data.sheaf_violations();
        if let Some(e) = errs.first() {
            return Err(Error::structural(e.clone()));
        }
        Ok(data)
    }

    fn with_sky(self: &Sheaf, sky: Vec<(usize, Module)>) -> Sheaf {
        Arc::new(SheafData {
            space: self.space.clone(),
            sections: self.sections.clone(),
            res: self.res.clone(),
            sky: Some(sky),
        })
    }

    pub fn sky_factors(&self) -> Option<&[(usize, Module)]> {
        self.sky.as_deref()
    }

    fn presheaf_violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let space = &self.space.space;
        let n_opens = space.opens().len();
        if self.sections.len() != n_opens {
            errs.push("one module per open is required".into());
            return errs;
        }
        for u in 0..n_opens {
            if self.sections[u].monoid() != self.space.monoid_at(u) {
                errs.push(format!("section module at open {u} is over the wrong monoid"));
            }
        }
        if self.sections[0].len() != 1 {
            errs.push("sections on the empty open must be trivial".into());
        }
        for u in 0..n_opens {
            for v in 0..n_opens {
                let strict = v != u && space.open_mask(v) & space.open_mask(u) == space.open_mask(v);
                match self.res.get(&(u, v)) {
                    None if strict => errs.push(format!("missing restriction {u} -> {v}")),
                    Some(_) if !strict => errs.push(format!("restriction on non-nested {u} -> {v}")),
                    Some(table) => {
                        if table.len() != self.sections[u].len() {
                            errs.push(format!("restriction {u} -> {v} has the wrong length"));
                            continue;
                        }
                        // Equivariance over the structure restriction:
                        // the table is a morphism into the restricted
                        // scalars view of the target.
                        let hom = self.space.res_hom(u, v);
                        let viewed = view_along(&self.sections[v], &hom);
                        if ModMorphism::new(self.sections[u].clone(), viewed, table.to_vec())
                            .is_err()
                        {
                            errs.push(format!("restriction {u} -> {v} is not equivariant"));
                        }
                    }
                    None => {}
                }
            }
        }
        if !errs.is_empty() {
            return errs;
        }
        for &(u, v) in self.res.keys() {
            for w in 0..n_opens {
                if self.res.contains_key(&(v, w)) {
                    for s in 0..self.sections[u].len() {
                        if self.restrict(v, w, self.restrict(u, v, s)) != self.restrict(u, w, s) {
                            errs.push(format!("restrictions {u} -> {v} -> {w} do not compose"));
                        }
                    }
                }
            }
        }
        errs
    }

    /// Failures of the sheaf condition, checked as bijectivity of the
    /// germ-family map over each open.
    pub fn sheaf_violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        for u in 1..self.space.space.opens().len() {
            let points = self.space.space.points_of(self.space.space.open_mask(u));
            let families = section_families(self, &points);
            let germs: Vec<Vec<usize>> = (0..self.sections[u].len())
                .map(|s| points.iter().map(|&x| self.germ(u, x, s)).collect())
                .collect();
            let mut seen = germs.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != self.sections[u].len() {
                errs.push(format!("sections at open {u} are not separated by germs"));
            } else if families.len() != self.sections[u].len() {
                errs.push(format!(
                    "open {u} has {} compatible families but {} sections",
                    families.len(),
                    self.sections[u].len()
                ));
            }
        }
        errs
    }

    /// The expensive form of the gluing check: every irredundant open
    /// cover of every open, not just the cover by minimal opens.
    pub fn cover_violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let space = &self.space.space;
        for u in 1..space.opens().len() {
            for cover in space.covers_of(u) {
                // Families of sections over the cover, compatible on
                // pairwise intersections.
                let mut found: Vec<Vec<usize>> = Vec::new();
                let mut partial = Vec::new();
                enumerate_families(
                    &cover,
                    &|i| self.sections[cover[i]].len(),
                    &|i, j, s| {
                        let (oi, oj) = (cover[i], cover[j]);
                        let inter = space.open_mask(oi) & space.open_mask(oj);
                        if inter != space.open_mask(oj) {
                            return None;
                        }
                        Some(self.restrict(oi, oj, s))
                    },
                    &mut partial,
                    &mut found,
                );
                // The antichain members usually overlap partially, so
                // filter on full pairwise compatibility.
                let w = space.opens().len();
                let compatible = |fam: &Vec<usize>| {
                    for i in 0..cover.len() {
                        for j in 0..cover.len() {
                            let inter = space.open_mask(cover[i]) & space.open_mask(cover[j]);
                            let Some(iv) = (0..w).find(|&k| space.open_mask(k) == inter) else {
                                return false;
                            };
                            if self.restrict(cover[i], iv, fam[i])
                                != self.restrict(cover[j], iv, fam[j])
                            {
                                return false;
                            }
                        }
                    }
                    true
                };
                let glued: Vec<Vec<usize>> = found.into_iter().filter(compatible).collect();
                let images: Vec<Vec<usize>> = (0..self.sections[u].len())
                    .map(|s| cover.iter().map(|&o| self.restrict(u, o, s)).collect())
                    .collect();
                let mut unique = images.clone();
                unique.sort();
                unique.dedup();
                if unique.len() != images.len() || glued.len() != images.len() {
                    errs.push(format!("gluing fails for open {u} over cover {cover:?}"));
                }
            }
        }
        errs
    }

    /// Image of section `s` under restriction from open u to open v.
    pub fn restrict(&self, u: usize, v: usize, s: usize) -> usize {
        if u == v {
            s
        } else {
            self.res[&(u, v)][s]
        }
    }

    pub fn res_table(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.sections[u].len()).map(|s| self.restrict(u, v, s)).collect()
    }

    /// Germ of a section at a point of its open.
    pub fn germ(&self, u: usize, x: usize, s: usize) -> usize {
        self.restrict(u, self.space.space.min_open_of(x), s)
    }

    /// The stalk at x is the value on the minimal open neighborhood.
    pub fn stalk(&self, x: usize) -> &Module {
        &self.sections[self.space.space.min_open_of(x)]
    }

    pub fn section_at(&self, u: usize) -> &Module {
        &self.sections[u]
    }

    /// Every restriction surjective.
    pub fn is_flabby(&self) -> bool {
        self.flabby_witness().is_none()
    }

    /// A nested pair whose restriction misses a section, if any.
    pub fn flabby_witness(&self) -> Option<(usize, usize, usize)> {
        for (&(u, v), table) in &self.res {
            let mut hit = vec![false; self.sections[v].len()];
            for &t in table.iter() {
                hit[t] = true;
            }
            if let Some(miss) = hit.iter().position(|h| !h) {
                return Some((u, v, miss));
            }
        }
        None
    }
}

/// The target module seen over the source of the hom: same carrier,
/// the action twisted through the hom.
fn view_along(module: &Module, hom: &MonoidHom) -> Module {
    if hom.source == hom.target && hom.map.iter().enumerate().all(|(i, &v)| i == v) {
        return module.clone();
    }
    let a = &hom.source;
    let action: Vec<usize> = (0..a.len())
        .flat_map(|ai| (0..module.len()).map(move |m| (ai, m)))
        .map(|(ai, m)| module.act(hom.map[ai], m))
        .collect();
    PointedModule::new(a.clone(), module.names().to_vec(), module.basepoint(), action)
        .expect("twisting an action through a hom preserves the module laws")
}

/// Compatible families of germs over the given points, with respect
/// to the presheaf restrictions between minimal opens.
fn section_families(data: &SheafData, points: &[usize]) -> Vec<Vec<usize>> {
    let space = &data.space.space;
    let mins: Vec<usize> = points.iter().map(|&x| space.min_open_of(x)).collect();
    let mut found = Vec::new();
    let mut partial = Vec::new();
    enumerate_families(
        &mins,
        &|i| data.sections[mins[i]].len(),
        &|i, j, s| {
            let inside = space.open_mask(mins[j]) & space.open_mask(mins[i]) == space.open_mask(mins[j]);
            inside.then(|| data.restrict(mins[i], mins[j], s))
        },
        &mut partial,
        &mut found,
    );
    found
}

/// A morphism of sheaves over one monoided space: a module morphism
/// per open, commuting with the restrictions.
#[derive(Debug, Clone, PartialEq)]
pub struct SheafMorphism {
    pub source: Sheaf,
    pub target: Sheaf,
    pub components: Vec<ModMorphism>,
}

impl SheafMorphism {
    pub fn new(source: Sheaf, target: Sheaf, components: Vec<ModMorphism>) -> Result<SheafMorphism> {
        if source.space != target.space {
            return Err(Error::structural("sheaf morphism across different spaces"));
        }
        if components.len() != source.sections.len() {
            return Err(Error::structural("one component per open is required"));
        }
        for (u, c) in components.iter().enumerate() {
            if c.source != source.sections[u] || c.target != target.sections[u] {
                return Err(Error::structural(format!(
                    "component at open {u} has mismatched endpoints"
                )));
            }
        }
        for &(u, v) in source.res.keys() {
            for s in 0..source.sections[u].len() {
                if components[v].apply(source.restrict(u, v, s))
                    != target.restrict(u, v, components[u].apply(s))
                {
                    return Err(Error::structural(format!(
                        "naturality fails on the pair {u} -> {v}"
                    )));
                }
            }
        }
        Ok(SheafMorphism {
            source,
            target,
            components,
        })
    }

    pub fn identity(f: &Sheaf) -> SheafMorphism {
        SheafMorphism {
            source: f.clone(),
            target: f.clone(),
            components: f.sections.iter().map(ModMorphism::identity).collect(),
        }
    }

    pub fn zero(source: &Sheaf, target: &Sheaf) -> SheafMorphism {
        SheafMorphism {
            source: source.clone(),
            target: target.clone(),
            components: source
                .sections
                .iter()
                .zip(&target.sections)
                .map(|(s, t)| ModMorphism::zero(s, t))
                .collect(),
        }
    }

    pub fn compose(late: &SheafMorphism, early: &SheafMorphism) -> SheafMorphism {
        assert_eq!(early.target, late.source, "sheaf composition endpoints");
        SheafMorphism {
            source: early.source.clone(),
            target: late.target.clone(),
            components: late
                .components
                .iter()
                .zip(&early.components)
                .map(|(l, e)| ModMorphism::compose(l, e))
                .collect(),
        }
    }

    pub fn component(&self, u: usize) -> &ModMorphism {
        &self.components[u]
    }

    /// Component on the stalk at x.
    pub fn stalk_component(&self, x: usize) -> &ModMorphism {
        &self.components[self.source.space.space.min_open_of(x)]
    }

    pub fn is_mono_sheaf(&self) -> bool {
        self.components.iter().all(|c| c.is_injective())
    }

    /// Epi is a stalkwise condition; sectionwise surjectivity is
    /// strictly stronger.
    pub fn is_epi_sheaf(&self) -> bool {
        (0..self.source.space.space.n_points())
            .all(|x| self.stalk_component(x).is_surjective())
    }
}

/// Glues a family of stalk-level components (one per minimal open)
/// into the sheaf morphism they determine. Fails if some glued germ
/// family matches no unique target section, which cannot happen when
/// the target satisfies the sheaf condition.
pub fn from_stalk_components(
    source: &Sheaf,
    target: &Sheaf,
    comps: &BTreeMap<usize, ModMorphism>,
) -> Result<SheafMorphism> {
    let space = &source.space.space;
    let mut components = Vec::new();
    for u in 0..source.sections.len() {
        let points = space.points_of(space.open_mask(u));
        let mut table = Vec::new();
        for s in 0..source.sections[u].len() {
            let wanted: Vec<usize> = points
                .iter()
                .map(|&x| comps[&space.min_open_of(x)].apply(source.germ(u, x, s)))
                .collect();
            let matches: Vec<usize> = (0..target.sections[u].len())
                .filter(|&t| {
                    points
                        .iter()
                        .enumerate()
                        .all(|(i, &x)| target.germ(u, x, t) == wanted[i])
                })
                .collect();
            match matches.as_slice() {
                [t] => table.push(*t),
                [] => {
                    return Err(Error::structural(
                        "no target section glues the image germs",
                    ))
                }
                _ => {
                    if u == 0 {
                        table.push(target.sections[0].basepoint());
                    } else {
                        return Err(Error::structural("image germs glue ambiguously"));
                    }
                }
            }
        }
        components.push(ModMorphism::new(
            source.sections[u].clone(),
            target.sections[u].clone(),
            table,
        )?);
    }
    SheafMorphism::new(source.clone(), target.clone(), components)
}

pub fn zero_sheaf(space: &Arc<MonoidedSpace>) -> Sheaf {
    let sections: Vec<Module> = (0..space.space.opens().len())
        .map(|u| PointedModule::zero(space.monoid_at(u)))
        .collect();
    let mut res = BTreeMap::new();
    for &(u, v) in space.res.keys() {
        res.insert((u, v), vec![0usize]);
    }
    SheafData::new(space.clone(), sections, res).expect("the zero sheaf is a sheaf")
}

/// Product of skyscrapers: factor k contributes its stalk on every
/// open containing its point. Sections are mixed-radix tuples over
/// the factors active on the open, in factor order, with the last
/// active factor varying fastest.
pub fn sky_product(space: &Arc<MonoidedSpace>, factors: &[(usize, Module)]) -> Sheaf {
    let fs = &space.space;
    for &(z, ref stalk) in factors {
        assert_eq!(
            stalk.monoid(),
            space.monoid_at(fs.min_open_of(z)),
            "skyscraper stalk lives over the structure at its point"
        );
    }
    let active = |u: usize| -> Vec<usize> {
        (0..factors.len())
            .filter(|&k| fs.open_mask(u) & (1 << factors[k].0) != 0)
            .collect()
    };
    let mut sections = Vec::new();
    for u in 0..fs.opens().len() {
        let act = active(u);
        if act.is_empty() {
            sections.push(PointedModule::zero(space.monoid_at(u)));
            continue;
        }
        let sizes: Vec<usize> = act.iter().map(|&k| factors[k].1.len()).collect();
        let total: usize = sizes.iter().product();
        let decode = |idx: usize, i: usize| -> usize {
            let stride: usize = sizes[i + 1..].iter().product();
            idx / stride % sizes[i]
        };
        let names: Vec<String> = (0..total)
            .map(|idx| {
                let parts: Vec<String> = (0..act.len())
                    .map(|i| factors[act[i]].1.name(decode(idx, i)).to_string())
                    .collect();
                if act.len() == 1 {
                    parts.into_iter().next().unwrap()
                } else {
                    format!("({})", parts.join("|"))
                }
            })
            .collect();
        let basepoint: usize = (0..act.len())
            .map(|i| {
                let stride: usize = sizes[i + 1..].iter().product();
                factors[act[i]].1.basepoint() * stride
            })
            .sum();
        let monoid = space.monoid_at(u);
        let action: Vec<usize> = (0..monoid.len())
            .flat_map(|a| (0..total).map(move |idx| (a, idx)))
            .map(|(a, idx)| {
                (0..act.len())
                    .map(|i| {
                        let k = act[i];
                        let stride: usize = sizes[i + 1..].iter().product();
                        let local = space.res_elt(u, fs.min_open_of(factors[k].0), a);
                        factors[k].1.act(local, decode(idx, i)) * stride
                    })
                    .sum()
            })
            .collect();
        sections.push(
            PointedModule::new(monoid.clone(), names, basepoint, action)
                .expect("skyscraper products satisfy the module laws"),
        );
    }
    let mut res = BTreeMap::new();
    for &(u, v) in space.res.keys() {
        let act_u = active(u);
        let act_v = active(v);
        let sizes_u: Vec<usize> = act_u.iter().map(|&k| factors[k].1.len()).collect();
        let sizes_v: Vec<usize> = act_v.iter().map(|&k| factors[k].1.len()).collect();
        let table: Vec<usize> = (0..sections[u].len())
            .map(|idx| {
                act_v
                    .iter()
                    .enumerate()
                    .map(|(j, &k)| {
                        let i = act_u.iter().position(|&m| m == k).unwrap();
                        let stride_u: usize = sizes_u[i + 1..].iter().product();
                        let stride_v: usize = sizes_v[j + 1..].iter().product();
                        (idx / stride_u % sizes_u[i]) * stride_v
                    })
                    .sum()
            })
            .collect();
        res.insert((u, v), table);
    }
    SheafData::new(space.clone(), sections, res)
        .expect("a product of skyscrapers is a sheaf")
        .with_sky(factors.to_vec())
}

/// A single skyscraper at a point.
pub fn skyscraper(space: &Arc<MonoidedSpace>, z: usize, stalk: &Module) -> Sheaf {
    sky_product(space, &[(z, stalk.clone())])
}

/// Projection of a skyscraper product onto one factor.
pub fn sky_projection(g: &Sheaf, k: usize) -> (Sheaf, SheafMorphism) {
    let factors = g.sky_factors().expect("projection needs a skyscraper product");
    let fs = &g.space.space;
    let target = sky_product(&g.space, &[factors[k].clone()]);
    let mut components = Vec::new();
    for u in 0..g.sections.len() {
        let act: Vec<usize> = (0..factors.len())
            .filter(|&m| fs.open_mask(u) & (1 << factors[m].0) != 0)
            .collect();
        let table: Vec<usize> = if let Some(i) = act.iter().position(|&m| m == k) {
            let sizes: Vec<usize> = act.iter().map(|&m| factors[m].1.len()).collect();
            let stride: usize = sizes[i + 1..].iter().product();
            (0..g.sections[u].len()).map(|idx| idx / stride % sizes[i]).collect()
        } else {
            vec![target.sections[u].basepoint(); g.sections[u].len()]
        };
        components.push(
            ModMorphism::new(g.sections[u].clone(), target.sections[u].clone(), table)
                .expect("skyscraper projections are equivariant"),
        );
    }
    let phi = SheafMorphism::new(g.clone(), target.clone(), components)
        .expect("skyscraper projections are natural");
    (target, phi)
}

/// Sheafification: sections over an open are the compatible families
/// of stalks of the presheaf, with the universal morphism from the
/// presheaf. Stalks are preserved.
pub fn sheafify(p: &Sheaf) -> (Sheaf, SheafMorphism) {
    let space = p.space.clone();
    let fs = &space.space;
    let mut sections = Vec::new();
    let mut families_at: Vec<Vec<Vec<usize>>> = Vec::new();
    for u in 0..fs.opens().len() {
        if u == 0 {
            families_at.push(vec![Vec::new()]);
            sections.push(PointedModule::zero(space.monoid_at(0)));
            continue;
        }
        let points = fs.points_of(fs.open_mask(u));
        let families = section_families(p, &points);
        let names: Vec<String> = families
            .iter()
            .map(|fam| {
                let parts: Vec<String> = points
                    .iter()
                    .zip(fam)
                    .map(|(&x, &s)| p.sections[fs.min_open_of(x)].name(s).to_string())
                    .collect();
                format!("({})", parts.join("|"))
            })
            .collect();
        let basepoint = families
            .iter()
            .position(|fam| {
                fam.iter()
                    .zip(&points)
                    .all(|(&s, &x)| s == p.sections[fs.min_open_of(x)].basepoint())
            })
            .expect("the basepoint family is compatible");
        let monoid = space.monoid_at(u);
        let action: Vec<usize> = (0..monoid.len())
            .flat_map(|a| (0..families.len()).map(move |i| (a, i)))
            .map(|(a, i)| {
                let moved: Vec<usize> = families[i]
                    .iter()
                    .zip(&points)
                    .map(|(&s, &x)| {
                        let v = fs.min_open_of(x);
                        p.sections[v].act(space.res_elt(u, v, a), s)
                    })
                    .collect();
                families
                    .iter()
                    .position(|f| *f == moved)
                    .expect("the structure action preserves compatibility")
            })
            .collect();
        sections.push(
            PointedModule::new(monoid.clone(), names, basepoint, action)
                .expect("families of germs satisfy the module laws"),
        );
        families_at.push(families);
    }
    let mut res = BTreeMap::new();
    for &(u, v) in space.res.keys() {
        let pts_u = fs.points_of(fs.open_mask(u));
        let pts_v = fs.points_of(fs.open_mask(v));
        let positions: Vec<usize> = pts_v
            .iter()
            .map(|x| pts_u.iter().position(|y| y == x).unwrap())
            .collect();
        let table: Vec<usize> = families_at[u]
            .iter()
            .map(|fam| {
                let sub: Vec<usize> = positions.iter().map(|&i| fam[i]).collect();
                families_at[v]
                    .iter()
                    .position(|f| *f == sub)
                    .expect("subfamilies of compatible families are compatible")
            })
            .collect();
        res.insert((u, v), table);
    }
    let plus = SheafData::new(space.clone(), sections, res)
        .expect("families of germs always satisfy the sheaf condition");
    let mut components = Vec::new();
    for (u, fams) in families_at.iter().enumerate() {
        let points = fs.points_of(fs.open_mask(u));
        let table: Vec<usize> = (0..p.sections[u].len())
            .map(|s| {
                let fam: Vec<usize> = points.iter().map(|&x| p.germ(u, x, s)).collect();
                fams.iter()
                    .position(|f| *f == fam)
                    .expect("germ families of sections are compatible")
            })
            .collect();
        components.push(
            ModMorphism::new(p.sections[u].clone(), plus.sections[u].clone(), table)
                .expect("the universal map is equivariant"),
        );
    }
    let univ = SheafMorphism::new(p.clone(), plus.clone(), components)
        .expect("the universal map is natural");
    (plus, univ)
}

/// The Godement envelope: the product over all points of the
/// skyscrapers on the stalks, with the canonical embedding.
pub fn godement(f: &Sheaf) -> (Sheaf, SheafMorphism) {
    let fs = &f.space.space;
    let factors: Vec<(usize, Module)> = (0..fs.n_points())
        .map(|x| (x, f.stalk(x).clone()))
        .collect();
    let g = sky_product(&f.space, &factors);
    let mut components = Vec::new();
    for u in 0..f.sections.len() {
        let act: Vec<usize> = (0..factors.len())
            .filter(|&k| fs.open_mask(u) & (1 << factors[k].0) != 0)
            .collect();
        let sizes: Vec<usize> = act.iter().map(|&k| factors[k].1.len()).collect();
        let table: Vec<usize> = (0..f.sections[u].len())
            .map(|s| {
                act.iter()
                    .enumerate()
                    .map(|(i, &k)| {
                        let stride: usize = sizes[i + 1..].iter().product();
                        f.germ(u, factors[k].0, s) * stride
                    })
                    .sum()
            })
            .collect();
        components.push(
            ModMorphism::new(f.sections[u].clone(), g.sections[u].clone(), table)
                .expect("the Godement embedding is equivariant"),
        );
    }
    let e = SheafMorphism::new(f.clone(), g.clone(), components)
        .expect("the Godement embedding is natural");
    (g, e)
}

/// The constant sheaf on the given fiber over the trivial structure:
/// sheafification of the constant presheaf. Sections over an open are
/// families constant on its connected pieces.
pub fn constant_sheaf(space: &Arc<MonoidedSpace>, fiber: &Module) -> Sheaf {
    assert!(
        space.is_trivial_structure(),
        "constant sheaves are formed over the trivial structure"
    );
    let n = space.space.opens().len();
    let sections: Vec<Module> = (0..n)
        .map(|u| {
            if u == 0 {
                PointedModule::zero(space.monoid_at(0))
            } else {
                fiber.clone()
            }
        })
        .collect();
    let mut res = BTreeMap::new();
    for &(u, v) in space.res.keys() {
        let table = if v == 0 {
            vec![0usize; sections[u].len()]
        } else {
            (0..sections[u].len()).collect()
        };
        res.insert((u, v), table);
    }
    let presheaf = SheafData::presheaf(space.clone(), sections, res)
        .expect("the constant presheaf satisfies the presheaf laws");
    sheafify(&presheaf).0
}

/// Per-open kernel of a sheaf morphism; it is already a sheaf.
pub fn sheaf_kernel(phi: &SheafMorphism) -> (Sheaf, SheafMorphism) {
    let f = &phi.source;
    let mut sections = Vec::new();
    let mut incls = Vec::new();
    for c in &phi.components {
        let (k, incl) = pmod_kernel(c);
        sections.push(k);
        incls.push(incl);
    }
    let mut res = BTreeMap::new();
    for &(u, v) in f.res.keys() {
        let table: Vec<usize> = (0..sections[u].len())
            .map(|k| {
                let in_f = f.restrict(u, v, incls[u].apply(k));
                (0..sections[v].len())
                    .find(|&m| incls[v].apply(m) == in_f)
                    .expect("restrictions preserve kernels")
            })
            .collect();
        res.insert((u, v), table);
    }
    let ker = SheafData::new(f.space.clone(), sections, res)
        .expect("the kernel presheaf is a sheaf");
    let incl = SheafMorphism::new(ker.clone(), f.clone(), incls)
        .expect("the kernel inclusion is natural");
    (ker, incl)
}

/// Cokernel: the per-open cokernels form a presheaf whose
/// sheafification receives the projection.
pub fn sheaf_cokernel(phi: &SheafMorphism) -> (Sheaf, SheafMorphism) {
    let g = &phi.target;
    let mut sections = Vec::new();
    let mut projs = Vec::new();
    for c in &phi.components {
        let (q, proj) = crate::pmod::cokernel(c);
        sections.push(q);
        projs.push(proj);
    }
    let mut res = BTreeMap::new();
    for &(u, v) in g.res.keys() {
        let table: Vec<usize> = (0..sections[u].len())
            .map(|c| {
                if c == sections[u].basepoint() {
                    return sections[v].basepoint();
                }
                let s = (0..g.sections[u].len())
                    .find(|&s| projs[u].apply(s) == c)
                    .expect("classes off the image have unique representatives");
                projs[v].apply(g.restrict(u, v, s))
            })
            .collect();
        res.insert((u, v), table);
    }
    let presheaf = SheafData::presheaf(g.space.clone(), sections, res)
        .expect("per-open cokernels form a presheaf");
    let (plus, univ) = sheafify(&presheaf);
    let proj_presheaf = SheafMorphism {
        source: g.clone(),
        target: presheaf,
        components: projs,
    };
    let proj = SheafMorphism::compose(&univ, &proj_presheaf);
    (plus, proj)
}

/// Extension by zero of the sections supported on an open subset:
/// the subsheaf of sections whose germs vanish outside `u_mask`.
pub fn extend_by_zero(f: &Sheaf, u_mask: u32) -> (Sheaf, SheafMorphism) {
    let fs = &f.space.space;
    assert!(fs.is_open(u_mask), "extension by zero needs an open subset");
    let mut sections = Vec::new();
    let mut embeds = Vec::new();
    for v in 0..f.sections.len() {
        let outside: Vec<usize> = fs
            .points_of(fs.open_mask(v))
            .into_iter()
            .filter(|&x| u_mask & (1 << x) == 0)
            .collect();
        let members: Vec<usize> = (0..f.sections[v].len())
            .filter(|&s| {
                outside
                    .iter()
                    .all(|&x| f.germ(v, x, s) == f.stalk(x).basepoint())
            })
            .collect();
        let sub = SubModule::new(f.sections[v].clone(), members)
            .expect("vanishing loci are submodules");
        let (m, e) = sub.embed();
        sections.push(m);
        embeds.push(e);
    }
    let mut res = BTreeMap::new();
    for &(u, v) in f.res.keys() {
        let table: Vec<usize> = (0..sections[u].len())
            .map(|k| {
                let in_f = f.restrict(u, v, embeds[u].apply(k));
                (0..sections[v].len())
                    .find(|&m| embeds[v].apply(m) == in_f)
                    .expect("restriction preserves vanishing")
            })
            .collect();
        res.insert((u, v), table);
    }
    let sub = SheafData::new(f.space.clone(), sections, res)
        .expect("extension by zero is a sheaf");
    let mono = SheafMorphism::new(sub.clone(), f.clone(), embeds)
        .expect("the inclusion is natural");
    (sub, mono)
}

/// Restriction of a sheaf over the trivial structure to a closed
/// subspace: sections over a subspace open are compatible families of
/// parent germs over its points. Returns the sheaf together with the
/// subspace and the point map into the parent.
pub fn restrict_to_closed(f: &Sheaf, y_mask: u32) -> (Sheaf, FinSpace, Vec<usize>) {
    let fs = &f.space.space;
    assert!(fs.is_closed(y_mask), "restriction target must be closed");
    assert!(f.space.is_trivial_structure(), "subspace ops run over the trivial structure");
    let (sub, points) = fs.subspace(y_mask);
    let sub_space = MonoidedSpace::trivial(sub.clone());
    let mut sections = Vec::new();
    let mut families_at: Vec<Vec<Vec<usize>>> = Vec::new();
    for w in 0..sub.opens().len() {
        let local: Vec<usize> = sub.points_of(sub.open_mask(w));
        let parents: Vec<usize> = local.iter().map(|&i| points[i]).collect();
        let mins: Vec<usize> = parents.iter().map(|&x| fs.min_open_of(x)).collect();
        let mut found = Vec::new();
        let mut partial = Vec::new();
        enumerate_families(
            &mins,
            &|i| f.sections[mins[i]].len(),
            &|i, j, s| {
                let inside =
                    fs.open_mask(mins[j]) & fs.open_mask(mins[i]) == fs.open_mask(mins[j]);
                inside.then(|| f.restrict(mins[i], mins[j], s))
            },
            &mut partial,
            &mut found,
        );
        if w == 0 {
            sections.push(PointedModule::zero(sub_space.monoid_at(0)));
            families_at.push(vec![Vec::new()]);
            continue;
        }
        let names: Vec<String> = found
            .iter()
            .map(|fam| {
                let parts: Vec<String> = fam
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| f.sections[mins[i]].name(s).to_string())
                    .collect();
                format!("({})", parts.join("|"))
            })
            .collect();
        let basepoint = found
            .iter()
            .position(|fam| {
                fam.iter()
                    .enumerate()
                    .all(|(i, &s)| s == f.sections[mins[i]].basepoint())
            })
            .unwrap();
        let action: Vec<usize> = (0..found.len()).collect();
        sections.push(
            PointedModule::new(sub_space.monoid_at(w).clone(), names, basepoint, action)
                .expect("families over the trivial monoid are modules"),
        );
        families_at.push(found);
    }
    let mut res = BTreeMap::new();
    for w in 0..sub.opens().len() {
        for w2 in 0..sub.opens().len() {
            if w2 == w || sub.open_mask(w2) & sub.open_mask(w) != sub.open_mask(w2) {
                continue;
            }
            let pts_u: Vec<usize> = sub.points_of(sub.open_mask(w));
            let pts_v: Vec<usize> = sub.points_of(sub.open_mask(w2));
            let positions: Vec<usize> = pts_v
                .iter()
                .map(|x| pts_u.iter().position(|y| y == x).unwrap())
                .collect();
            let table: Vec<usize> = families_at[w]
                .iter()
                .map(|fam| {
                    let sub_fam: Vec<usize> = positions.iter().map(|&i| fam[i]).collect();
                    families_at[w2].iter().position(|f| *f == sub_fam).unwrap()
                })
                .collect();
            res.insert((w, w2), table);
        }
    }
    let sheaf = SheafData::new(sub_space, sections, res)
        .expect("restriction to a closed subspace is a sheaf");
    (sheaf, sub, points)
}

/// Pushforward of a sheaf on the closed subspace back to the parent:
/// sections over V are the subspace sections over V intersected with
/// the subspace. Trivial structure only.
pub fn pushforward_closed(g: &Sheaf, parent: &Arc<MonoidedSpace>, points: &[usize]) -> Sheaf {
    let fs = &parent.space;
    let sub = &g.space.space;
    assert!(parent.is_trivial_structure(), "subspace ops run over the trivial structure");
    let sub_index = |v_mask: u32| -> usize {
        let local: u32 = points
            .iter()
            .enumerate()
            .filter(|(_, &p)| v_mask & (1 << p) != 0)
            .map(|(i, _)| 1u32 << i)
            .sum();
        sub.open_index(local).expect("opens meet the subspace in opens")
    };
    let sections: Vec<Module> = (0..fs.opens().len())
        .map(|v| {
            let m = &g.sections[sub_index(fs.open_mask(v))];
            PointedModule::new(
                parent.monoid_at(v).clone(),
                m.names().to_vec(),
                m.basepoint(),
                (0..m.len()).collect(),
            )
            .expect("retagging over the trivial monoid preserves the laws")
        })
        .collect();
    let mut res = BTreeMap::new();
    for &(u, v) in parent.res.keys() {
        let (su, sv) = (sub_index(fs.open_mask(u)), sub_index(fs.open_mask(v)));
        res.insert((u, v), g.res_table(su, sv));
    }
    SheafData::new(parent.clone(), sections, res)
        .expect("pushforward from a closed subspace is a sheaf")
}

/// The canonical sequence of the decomposition into an open subset
/// and its closed complement: the subsheaf supported on the open, and
/// the projection onto the pushforward of the restriction to the
/// closed part.
pub fn open_closed_sequence(
    f: &Sheaf,
    u_mask: u32,
) -> ((Sheaf, SheafMorphism), (Sheaf, SheafMorphism)) {
    let fs = &f.space.space;
    let y_mask = fs.full() & !u_mask;
    let (sub, mono) = extend_by_zero(f, u_mask);
    let (on_y, _, points) = restrict_to_closed(f, y_mask);
    let pushed = pushforward_closed(&on_y, &f.space, &points);
    // Sections of the pushforward over V are germ families over the
    // points of V in the closed part.
    let mut components = Vec::new();
    for v in 0..f.sections.len() {
        let closed_pts: Vec<usize> = fs
            .points_of(fs.open_mask(v))
            .into_iter()
            .filter(|&x| y_mask & (1 << x) != 0)
            .collect();
        let table: Vec<usize> = (0..f.sections[v].len())
            .map(|s| {
                if closed_pts.is_empty() {
                    return pushed.sections[v].basepoint();
                }
                let fam: Vec<usize> = closed_pts.iter().map(|&x| f.germ(v, x, s)).collect();
                let wanted: Vec<String> = fam
                    .iter()
                    .zip(&closed_pts)
                    .map(|(&gm, &x)| f.stalk(x).name(gm).to_string())
                    .collect();
                let wanted = format!("({})", wanted.join("|"));
                (0..pushed.sections[v].len())
                    .find(|&t| pushed.sections[v].name(t) == wanted)
                    .expect("germ families over the closed part are sections")
            })
            .collect();
        components.push(
            ModMorphism::new(f.sections[v].clone(), pushed.sections[v].clone(), table)
                .expect("the closed projection is equivariant"),
        );
    }
    let epi = SheafMorphism::new(f.clone(), pushed.clone(), components)
        .expect("the closed projection is natural");
    ((sub, mono), (pushed, epi))
}

/// Rebuilds a sheaf over the trivial structure on the same space,
/// keeping all carriers and restriction tables.
pub fn forget_structure(f: &Sheaf) -> Sheaf {
    let space = MonoidedSpace::trivial(f.space.space.clone());
    let sections: Vec<Module> = f
        .sections
        .iter()
        .map(|m| {
            PointedModule::new(
                space.monoid_at(0).clone(),
                m.names().to_vec(),
                m.basepoint(),
                (0..m.len()).collect(),
            )
            .expect("forgetting the action preserves the module laws")
        })
        .collect();
    let mut res = BTreeMap::new();
    for (&(u, v), table) in &f.res {
        res.insert((u, v), table.to_vec());
    }
    SheafData::new(space, sections, res).expect("forgetting the structure preserves gluing")
}

/// A finite directed system of sheaves over one space.
#[derive(Debug, Clone)]
pub struct SheafSystem {
    pub objects: Vec<Sheaf>,
    pub arrows: Vec<(usize, usize, SheafMorphism)>,
}

impl SheafSystem {
    pub fn new(objects: Vec<Sheaf>, arrows: Vec<(usize, usize, SheafMorphism)>) -> Result<SheafSystem> {
        if objects.is_empty() {
            return Err(Error::structural("empty system"));
        }
        for (s, t, f) in &arrows {
            if *s >= objects.len() || *t >= objects.len() {
                return Err(Error::structural("system arrow endpoint out of range"));
            }
            if f.source != objects[*s] || f.target != objects[*t] {
                return Err(Error::structural("system arrow does not match its endpoints"));
            }
        }
        for o in &objects[1..] {
            if o.space != objects[0].space {
                return Err(Error::structural("system spans several spaces"));
            }
        }
        Ok(SheafSystem { objects, arrows })
    }

    fn diagram_at(&self, u: usize) -> Diagram {
        Diagram::new(
            self.objects.iter().map(|o| o.sections[u].clone()).collect(),
            self.arrows
                .iter()
                .map(|(s, t, f)| (*s, *t, f.components[u].clone()))
                .collect(),
        )
        .expect("per-open diagrams inherit validity")
    }

    pub fn is_directed(&self) -> bool {
        (0..self.objects[0].sections.len()).all(|u| self.diagram_at(u).is_directed())
    }
}

/// Direct limit of a directed system: per-open colimits. The result
/// of the open-wise construction is checked to be a sheaf and
/// sheafified only if the check fails.
pub fn direct_limit_sheaves(system: &SheafSystem) -> (Sheaf, Vec<SheafMorphism>) {
    let space = system.objects[0].space.clone();
    let n_opens = system.objects[0].sections.len();
    let mut sections = Vec::new();
    let mut legs_at: Vec<Vec<ModMorphism>> = Vec::new();
    for u in 0..n_opens {
        let (apex, legs) = crate::pmod::direct_limit(&system.diagram_at(u));
        sections.push(apex);
        legs_at.push(legs);
    }
    let mut res = BTreeMap::new();
    for &(u, v) in system.objects[0].res.keys() {
        let table: Vec<usize> = (0..sections[u].len())
            .map(|l| {
                let (i, s) = (0..system.objects.len())
                    .flat_map(|i| {
                        (0..system.objects[i].sections[u].len()).map(move |s| (i, s))
                    })
                    .find(|&(i, s)| legs_at[u][i].apply(s) == l)
                    .expect("colimit legs are jointly surjective");
                legs_at[v][i].apply(system.objects[i].restrict(u, v, s))
            })
            .collect();
        res.insert((u, v), table);
    }
    let presheaf = SheafData::presheaf(space, sections, res)
        .expect("open-wise colimits form a presheaf");
    let (limit, legs) = if presheaf.sheaf_violations().is_empty() {
        (presheaf.clone(), None)
    } else {
        let (plus, univ) = sheafify(&presheaf);
        (plus, Some(univ))
    };
    let legs: Vec<SheafMorphism> = (0..system.objects.len())
        .map(|i| {
            let comps: Vec<ModMorphism> = (0..n_opens)
                .map(|u| match &legs {
                    None => legs_at[u][i].clone(),
                    Some(univ) => ModMorphism::compose(&univ.components[u], &legs_at[u][i]),
                })
                .collect();
            SheafMorphism::new(system.objects[i].clone(), limit.clone(), comps)
                .expect("colimit legs are natural")
        })
        .collect();
    (limit, legs)
}

/// Degreewise quotient construction used by the cohomology tests:
/// collapse the image of a mono and keep the rest.
pub fn sheaf_image(phi: &SheafMorphism) -> (Sheaf, SheafMorphism) {
    let (_, proj) = sheaf_cokernel(phi);
    sheaf_kernel(&proj)
}

/// Helper quotient: embed the fiber as a skyscraper stalk over the
/// trivial structure from plain data.
pub fn module_over_trivial(names: &[&str], basepoint: usize, monoid: &Arc<Monoid>) -> Module {
    PointedModule::new(
        monoid.clone(),
        names.iter().map(|s| s.to_string()).collect(),
        basepoint,
        (0..names.len()).collect(),
    )
    .expect("identity action satisfies the module laws")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Belian;
    use crate::pmod::{quotient_by_submodule, ModCat};
    use crate::topo::all_t0_spaces;

    fn two_point_fiber(monoid: &Arc<Monoid>) -> Module {
        module_over_trivial(&["0", "s"], 0, monoid)
    }

    #[test]
    fn constant_sheaf_on_sierpinski() {
        let space = MonoidedSpace::trivial(FinSpace::sierpinski());
        let fiber = two_point_fiber(space.monoid_at(0));
        let c = constant_sheaf(&space, &fiber);
        assert!(c.sheaf_violations().is_empty());
        assert!(c.cover_violations().is_empty());
        // Sierpinski space is connected and irreducible: all three
        // nonempty opens carry the fiber.
        for u in 1..c.sections.len() {
            assert_eq!(c.sections[u].len(), 2);
        }
        assert!(c.is_flabby());
    }

    #[test]
    fn constant_sheaf_on_the_discrete_pair_is_not_constant() {
        let fs = FinSpace::new(vec!["a".into(), "b".into()], &[vec![0], vec![1]]).unwrap();
        let space = MonoidedSpace::trivial(fs);
        let fiber = two_point_fiber(space.monoid_at(0));
        let c = constant_sheaf(&space, &fiber);
        let full = c.space.space.open_index(c.space.space.full()).unwrap();
        assert_eq!(c.sections[full].len(), 4);
        assert!(c.is_flabby());
    }

    #[test]
    fn skyscraper_sections_follow_the_point() {
        let space = MonoidedSpace::trivial(FinSpace::sierpinski());
        let stalk = two_point_fiber(space.monoid_at(0));
        // Skyscraper at the closed point: nonzero only on the full open.
        let at_closed = skyscraper(&space, 1, &stalk);
        assert_eq!(at_closed.sections[1].len(), 1);
        assert_eq!(at_closed.sections[2].len(), 2);
        // Skyscraper at the open point: nonzero on both nonempty opens.
        let at_open = skyscraper(&space, 0, &stalk);
        assert_eq!(at_open.sections[1].len(), 2);
        assert_eq!(at_open.sections[2].len(), 2);
        assert!(at_open.is_flabby());
        assert!(at_closed.is_flabby());
    }

    #[test]
    fn godement_embeds_monically_and_is_flabby() {
        let space = MonoidedSpace::trivial(FinSpace::sierpinski());
        let fiber = two_point_fiber(space.monoid_at(0));
        let c = constant_sheaf(&space, &fiber);
        let (g, e) = godement(&c);
        assert!(e.is_mono_sheaf());
        assert!(g.is_flabby());
        let full = space.space.open_index(space.space.full()).unwrap();
        // Product of both stalks on the full open.
        assert_eq!(g.sections[full].len(), 4);
        assert!(g.sky_factors().is_some());
    }

    #[test]
    fn sheafify_preserves_stalks() {
        // A presheaf on the discrete pair whose global sections
        // neither separate nor glue: two of the three restrict alike,
        // and the four compatible pairs are underrepresented.
        let fs = FinSpace::new(vec!["a".into(), "b".into()], &[vec![0], vec![1]]).unwrap();
        let space = MonoidedSpace::trivial(fs);
        let m2 = two_point_fiber(space.monoid_at(0));
        let m3 = module_over_trivial(&["0", "s", "t"], 0, space.monoid_at(0));
        let zero = PointedModule::zero(space.monoid_at(0));
        let full = space.space.open_index(space.space.full()).unwrap();
        let mut res = BTreeMap::new();
        res.insert((1, 0), vec![0, 0]);
        res.insert((2, 0), vec![0, 0]);
        res.insert((full, 0), vec![0, 0, 0]);
        res.insert((full, 1), vec![0, 1, 1]);
        res.insert((full, 2), vec![0, 1, 1]);
        let p =
            SheafData::presheaf(space.clone(), vec![zero, m2.clone(), m2, m3], res).unwrap();
        assert!(!p.sheaf_violations().is_empty());
        let (plus, univ) = sheafify(&p);
        assert!(plus.sheaf_violations().is_empty());
        assert_eq!(plus.sections[full].len(), 4);
        // Stalks are preserved.
        for x in 0..2 {
            assert_eq!(plus.stalk(x).len(), p.stalk(x).len());
        }
        // The universal map merges the two sections with equal germs.
        let comp = &univ.components[full];
        assert_eq!(comp.apply(1), comp.apply(2));
    }

    #[test]
    fn kernel_and_cokernel_of_a_collapse() {
        let space = MonoidedSpace::trivial(FinSpace::sierpinski());
        let fiber = module_over_trivial(&["0", "s", "t"], 0, space.monoid_at(0));
        let c = constant_sheaf(&space, &fiber);
        // Collapse s, keep t, on every open.
        let (q, proj_m) = quotient_by_submodule(&c.sections[1], &[0, 1]);
        let mut comps = Vec::new();
        comps.push(ModMorphism::identity(&c.sections[0]));
        for u in 1..3 {
            comps.push(ModMorphism::new(c.sections[u].clone(), q.clone(), proj_m.map.to_vec()).unwrap());
        }
        let target = {
            let mut res = BTreeMap::new();
            res.insert((1, 0), vec![0, 0]);
            res.insert((2, 0), vec![0, 0]);
            res.insert((2, 1), vec![0, 1]);
            SheafData::new(
                space.clone(),
                vec![PointedModule::zero(space.monoid_at(0)), q.clone(), q.clone()],
                res,
            )
            .unwrap()
        };
        let phi = SheafMorphism::new(c.clone(), target, comps).unwrap();
        let (k, incl) = sheaf_kernel(&phi);
        assert!(incl.is_mono_sheaf());
        assert_eq!(k.sections[2].len(), 2);
        let (q_sheaf, proj) = sheaf_cokernel(&phi);
        assert!(proj.is_epi_sheaf());
        // phi is epi, so the cokernel vanishes.
        assert!(q_sheaf.sections.iter().all(|m| m.len() == 1));
    }

    #[test]
    fn extension_by_zero_has_the_right_stalks() {
        let space = MonoidedSpace::trivial(FinSpace::sierpinski());
        let fiber = two_point_fiber(space.monoid_at(0));
        let c = constant_sheaf(&space, &fiber);
        let (sub, mono) = extend_by_zero(&c, 0b01);
        assert!(mono.is_mono_sheaf());
        assert_eq!(sub.stalk(0).len(), 2);
        assert_eq!(sub.stalk(1).len(), 1);
        // Global sections vanishing at the closed point: only zero,
        // because germs at the open point equal the global value.
        let full = space.space.open_index(space.space.full()).unwrap();
        assert_eq!(sub.sections[full].len(), 1);
    }

    #[test]
    fn open_closed_sequence_is_stalkwise_exact() {
        let space = MonoidedSpace::trivial(FinSpace::sierpinski());
        let fiber = two_point_fiber(space.monoid_at(0));
        let c = constant_sheaf(&space, &fiber);
        let ((_, mono), (pushed, epi)) = open_closed_sequence(&c, 0b01);
        assert!(mono.is_mono_sheaf());
        assert!(epi.is_epi_sheaf());
        for x in 0..2 {
            let cat = ModCat::new(c.stalk(x).monoid().clone());
            let e = mono.stalk_component(x);
            let f = epi.stalk_component(x);
            assert!(cat.is_exact_pair(e, f), "stalk {x} fails exactness");
        }
        assert_eq!(pushed.stalk(1).len(), 2);
        assert_eq!(pushed.stalk(0).len(), 1);
    }

    #[test]
    fn pushforward_preserves_sections_on_subspace_opens() {
        let space = MonoidedSpace::trivial(FinSpace::sierpinski());
        let fiber = two_point_fiber(space.monoid_at(0));
        let c = constant_sheaf(&space, &fiber);
        let (on_y, sub, points) = restrict_to_closed(&c, 0b10);
        assert_eq!(sub.n_points(), 1);
        assert_eq!(points, vec![1]);
        let pushed = pushforward_closed(&on_y, &c.space, &points);
        assert!(pushed.sheaf_violations().is_empty());
        // Y-sections through the full open agree with the stalk at
        // the closed point.
        let full = space.space.open_index(space.space.full()).unwrap();
        assert_eq!(pushed.sections[full].len(), 2);
        assert_eq!(pushed.sections[1].len(), 1);
    }

    #[test]
    fn direct_limits_are_computed_openwise() {
        let space = MonoidedSpace::trivial(FinSpace::sierpinski());
        let small = two_point_fiber(space.monoid_at(0));
        let big = module_over_trivial(&["0", "s", "t"], 0, space.monoid_at(0));
        let f0 = constant_sheaf(&space, &small);
        let f1 = constant_sheaf(&space, &big);
        // Include the two-point fiber as 0, s.
        let comps: Vec<ModMorphism> = (0..3)
            .map(|u| {
                let table = if u == 0 { vec![0] } else { vec![0, 1] };
                ModMorphism::new(f0.sections[u].clone(), f1.sections[u].clone(), table).unwrap()
            })
            .collect();
        let arrow = SheafMorphism::new(f0.clone(), f1.clone(), comps).unwrap();
        let system = SheafSystem::new(vec![f0, f1.clone()], vec![(0, 1, arrow)]).unwrap();
        assert!(system.is_directed());
        let (limit, legs) = direct_limit_sheaves(&system);
        assert!(limit.sheaf_violations().is_empty());
        assert_eq!(limit.sections[2].len(), 3);
        assert!(legs[1].is_epi_sheaf());
    }

    #[test]
    fn flabby_fails_for_extensions_by_zero_of_constants() {
        // On the Sierpinski space the subsheaf supported on the open
        // point has sections 0 on X but a full stalk at the open
        // point, so restriction to the open point is not surjective.
        let space = MonoidedSpace::trivial(FinSpace::sierpinski());
        let fiber = two_point_fiber(space.monoid_at(0));
        let c = constant_sheaf(&space, &fiber);
        let (sub, _) = extend_by_zero(&c, 0b01);
        assert!(!sub.is_flabby());
        assert!(sub.flabby_witness().is_some());
    }

    #[test]
    fn sheaf_condition_catches_bad_gluing_on_the_discrete_pair() {
        let fs = FinSpace::new(vec!["a".into(), "b".into()], &[vec![0], vec![1]]).unwrap();
        let space = MonoidedSpace::trivial(fs);
        let m = two_point_fiber(space.monoid_at(0));
        // Constant presheaf: fails gluing at the full open, which
        // needs 4 sections.
        let zero = PointedModule::zero(space.monoid_at(0));
        let mut res = BTreeMap::new();
        let full = space.space.open_index(space.space.full()).unwrap();
        for u in 1..space.space.opens().len() {
            res.insert((u, 0), vec![0; 2]);
        }
        res.insert((full, 1), vec![0, 1]);
        res.insert((full, 2), vec![0, 1]);
        let p = SheafData::presheaf(
            space.clone(),
            vec![zero, m.clone(), m.clone(), m.clone()],
            res,
        )
        .unwrap();
        assert!(!p.sheaf_violations().is_empty());
        let (plus, _) = sheafify(&p);
        assert_eq!(plus.sections[full].len(), 4);
        assert!(plus.cover_violations().is_empty());
    }

    #[test]
    fn monoided_space_rejects_non_gluing_structure() {
        // Structure monoid with too many global sections over the
        // discrete pair.
        let fs = FinSpace::new(vec!["a".into(), "b".into()], &[vec![0], vec![1]]).unwrap();
        let one = Monoid::trivial();
        let z2 = Arc::new(
            Monoid::new(vec!["1".into(), "g".into()], 0, vec![0, 1, 1, 0]).unwrap(),
        );
        let full = fs.open_index(fs.full()).unwrap();
        let mut structure = vec![one.clone(); fs.opens().len()];
        structure[full] = z2.clone();
        let mut res = BTreeMap::new();
        for u in 0..fs.opens().len() {
            for v in 0..fs.opens().len() {
                if v != u && fs.open_mask(v) & fs.open_mask(u) == fs.open_mask(v) {
                    let src = &structure[u];
                    let hom = MonoidHom::new(
                        src.clone(),
                        structure[v].clone(),
                        vec![structure[v].identity(); src.len()],
                    )
                    .unwrap();
                    res.insert((u, v), hom);
                }
            }
        }
        assert!(MonoidedSpace::new(fs, structure, res).is_err());
    }

    #[test]
    fn four_point_corpus_spot_checks() {
        for fs in all_t0_spaces(3) {
            let space = MonoidedSpace::trivial(fs);
            let fiber = two_point_fiber(space.monoid_at(0));
            let c = constant_sheaf(&space, &fiber);
            assert!(c.sheaf_violations().is_empty());
            let (g, e) = godement(&c);
            assert!(e.is_mono_sheaf());
            assert!(g.is_flabby());
            for x in 0..c.space.space.n_points() {
                assert_eq!(g.stalk(x).len() % c.stalk(x).len(), 0);
            }
        }
    }
}
