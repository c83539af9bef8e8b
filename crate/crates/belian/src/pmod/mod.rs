//! Finite pointed modules over a finite commutative monoid and their
//! morphisms.
//!
//! A pointed module is a finite pointed set with a monoid action
//! fixing the basepoint. Morphisms are equivariant pointed maps. The
//! category of these is the running example of a balanced pointed
//! category with kernels and cokernels; over the trivial monoid it is
//! the category of pointed sets.

mod category;
mod elements;
mod injectives;
mod limits;

pub use category::{ModCat, RestrictScalars};
pub use elements::{atoms, elements_exact, epi_oracle, mono_oracle, mono_oracle_cyclic, Atom};
pub use injectives::{
    free_map, has_extension_property, injective_embed, map_index, map_module, map_value,
    plus_module, projective_cover, MapAdjunction, MapProvider, PaddedProvider, SplitProvider,
};
pub use limits::{
    cofiber_product, coproduct, direct_limit, fiber_product, inverse_limit, verify_colimit,
    verify_limit, Diagram,
};

use crate::error::{Error, Result};
use crate::monoid::Monoid;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A finite pointed module. `action[a * len + m]` is the index of
/// `a . m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedModule {
    pub(crate) monoid: Arc<Monoid>,
    pub(crate) names: Vec<String>,
    pub(crate) basepoint: usize,
    pub(crate) action: Vec<usize>,
}

pub type Module = Arc<PointedModule>;

impl PointedModule {
    pub fn new(
        monoid: Arc<Monoid>,
        names: Vec<String>,
        basepoint: usize,
        action: Vec<usize>,
    ) -> Result<Module> {
        let n = names.len();
        if n == 0 {
            return Err(Error::structural("module carrier is empty"));
        }
        if basepoint >= n {
            return Err(Error::structural("basepoint index out of range"));
        }
        if action.len() != monoid.len() * n {
            return Err(Error::structural(format!(
                "action table has {} entries, expected {}",
                action.len(),
                monoid.len() * n
            )));
        }
        {
            let mut seen = std::collections::BTreeSet::new();
            for name in &names {
                if name.is_empty() || name.contains(',') {
                    return Err(Error::structural(format!(
                        "element name {name:?} is empty or contains a comma"
                    )));
                }
                if !seen.insert(name) {
                    return Err(Error::structural(format!("duplicate element name {name:?}")));
                }
            }
        }
        if let Some(&bad) = action.iter().find(|&&v| v >= n) {
            return Err(Error::structural(format!("action entry {bad} out of range")));
        }
        let m = PointedModule {
            monoid,
            names,
            basepoint,
            action,
        };
        let witnesses = m.law_violations();
        if !witnesses.is_empty() {
            return Err(Error::validation(witnesses.join("; ")));
        }
        Ok(Arc::new(m))
    }

    /// Witnesses for violated module laws: unit action, associativity
    /// of the action, and stability of the basepoint.
    pub fn law_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let a_len = self.monoid.len();
        let one = self.monoid.identity();
        for m in 0..self.len() {
            if self.act(one, m) != m {
                out.push(format!("1.{} = {}", self.name(m), self.name(self.act(one, m))));
            }
        }
        for a in 0..a_len {
            if self.act(a, self.basepoint) != self.basepoint {
                out.push(format!(
                    "{}.0 = {}",
                    self.monoid.name(a),
                    self.name(self.act(a, self.basepoint))
                ));
            }
            for b in 0..a_len {
                for m in 0..self.len() {
                    if self.act(self.monoid.mul(a, b), m) != self.act(a, self.act(b, m)) {
                        out.push(format!(
                            "({}*{}).{} != {}.({}.{})",
                            self.monoid.name(a),
                            self.monoid.name(b),
                            self.name(m),
                            self.monoid.name(a),
                            self.monoid.name(b),
                            self.name(m)
                        ));
                    }
                }
            }
        }
        out
    }

    /// The zero module over `monoid`, with carrier name "0".
    pub fn zero(monoid: &Arc<Monoid>) -> Module {
        PointedModule::new(monoid.clone(), vec!["0".into()], 0, vec![0; monoid.len()]).unwrap()
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        &self.monoid
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.names.len() == 1
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn act(&self, a: usize, m: usize) -> usize {
        self.action[a * self.names.len() + m]
    }

    pub fn name(&self, m: usize) -> &str {
        &self.names[m]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Closes `seed` under the action and the basepoint, returning the
    /// smallest submodule containing it.
    pub fn submodule_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.len()];
        inside[self.basepoint] = true;
        for &s in seed {
            inside[s] = true;
        }
        for m in 0..self.len() {
            if inside[m] {
                for a in 0..self.monoid.len() {
                    inside[self.act(a, m)] = true;
                }
            }
        }
        // One pass suffices: a.m for m already marked is marked, and
        // b.(a.m) = (b*a).m is reached from m directly.
        (0..self.len()).filter(|&i| inside[i]).collect()
    }

    pub fn is_submodule(&self, members: &[usize]) -> bool {
        let mut inside = vec![false; self.len()];
        for &m in members {
            inside[m] = true;
        }
        inside[self.basepoint]
            && members
                .iter()
                .all(|&m| (0..self.monoid.len()).all(|a| inside[self.act(a, m)]))
    }
}

/// A submodule, as a sorted list of carrier indices of the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubModule {
    pub parent: Module,
    pub members: Vec<usize>,
}

impl SubModule {
    pub fn new(parent: Module, mut members: Vec<usize>) -> Result<SubModule> {
        members.sort();
        members.dedup();
        if !parent.is_submodule(&members) {
            return Err(Error::validation(
                "subset is not closed under the action or misses the basepoint",
            ));
        }
        Ok(SubModule { parent, members })
    }

    /// The submodule as a module of its own (parent names retained),
    /// with its inclusion morphism.
    pub fn embed(&self) -> (Module, ModMorphism) {
        let names: Vec<String> = self
            .members
            .iter()
            .map(|&m| self.parent.name(m).to_string())
            .collect();
        let pos: BTreeMap<usize, usize> = self
            .members
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i))
            .collect();
        let basepoint = pos[&self.parent.basepoint()];
        let a_len = self.parent.monoid().len();
        let mut action = vec![0usize; a_len * self.members.len()];
        for (i, &m) in self.members.iter().enumerate() {
            for a in 0..a_len {
                action[a * self.members.len() + i] = pos[&self.parent.act(a, m)];
            }
        }
        let module =
            PointedModule::new(self.parent.monoid().clone(), names, basepoint, action).unwrap();
        let incl = ModMorphism {
            source: module.clone(),
            target: self.parent.clone(),
            map: Arc::from(self.members.clone()),
        };
        (module, incl)
    }
}

/// An equivariant pointed map between modules over the same monoid.
#[derive(Debug, Clone)]
pub struct ModMorphism {
    pub source: Module,
    pub target: Module,
    pub map: Arc<[usize]>,
}

impl PartialEq for ModMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && self.source == other.source && self.target == other.target
    }
}
impl Eq for ModMorphism {}

impl ModMorphism {
    pub fn new(source: Module, target: Module, map: Vec<usize>) -> Result<ModMorphism> {
        if source.monoid() != target.monoid() {
            return Err(Error::structural("morphism endpoints over different monoids"));
        }
        if map.len() != source.len() {
            return Err(Error::structural("morphism table has wrong length"));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= target.len()) {
            return Err(Error::structural(format!("morphism value {bad} out of range")));
        }
        if map[source.basepoint()] != target.basepoint() {
            return Err(Error::validation("morphism does not preserve the basepoint"));
        }
        for a in 0..source.monoid().len() {
            for m in 0..source.len() {
                if map[source.act(a, m)] != target.act(a, map[m]) {
                    return Err(Error::validation(format!(
                        "morphism not equivariant at ({}, {})",
                        source.monoid().name(a),
                        source.name(m)
                    )));
                }
            }
        }
        Ok(ModMorphism {
            source,
            target,
            map: Arc::from(map),
        })
    }

    pub fn identity(m: &Module) -> ModMorphism {
        ModMorphism {
            source: m.clone(),
            target: m.clone(),
            map: (0..m.len()).collect(),
        }
    }

    pub fn zero(source: &Module, target: &Module) -> ModMorphism {
        ModMorphism {
            source: source.clone(),
            target: target.clone(),
            map: Arc::from(vec![target.basepoint(); source.len()]),
        }
    }

    pub fn apply(&self, m: usize) -> usize {
        self.map[m]
    }

    pub fn compose(late: &ModMorphism, early: &ModMorphism) -> ModMorphism {
        assert_eq!(
            early.target, late.source,
            "composition endpoint mismatch: {:?} vs {:?}",
            early.target.names, late.source.names
        );
        ModMorphism {
            source: early.source.clone(),
            target: late.target.clone(),
            map: early.map.iter().map(|&m| late.map[m]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&v| {
            if seen[v] {
                false
            } else {
                seen[v] = true;
                true
            }
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &v in self.map.iter() {
            seen[v] = true;
        }
        seen.iter().all(|&b| b)
    }

    pub fn is_zero_map(&self) -> bool {
        self.map.iter().all(|&v| v == self.target.basepoint())
    }

    /// Injectivity away from the kernel: f(x) = f(y) forces x = y or
    /// f(x) = 0. Equivalent to the comparison map from the coimage to
    /// the image being an isomorphism.
    pub fn is_strong_table(&self) -> bool {
        let base = self.target.basepoint();
        let mut seen = vec![false; self.target.len()];
        for &v in self.map.iter() {
            if v != base {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        true
    }

    /// The set-level image including the basepoint, sorted.
    pub fn image_members(&self) -> Vec<usize> {
        let mut inside = vec![false; self.target.len()];
        inside[self.target.basepoint()] = true;
        for &v in self.map.iter() {
            inside[v] = true;
        }
        (0..self.target.len()).filter(|&i| inside[i]).collect()
    }

    /// The kernel as the preimage of the basepoint, sorted.
    pub fn kernel_members(&self) -> Vec<usize> {
        let base = self.target.basepoint();
        (0..self.source.len())
            .filter(|&m| self.map[m] == base)
            .collect()
    }
}

/// Quotient of a module by the partition generated by `pairs`: the
/// given pairs are merged, then closed under the action until stable.
/// Class names are `[m]` where m is the least-index member.
pub fn quotient_by_pairs(module: &Module, pairs: &[(usize, usize)]) -> (Module, ModMorphism) {
    let n = module.len();
    let mut uf = UnionFind::new(n);
    for &(x, y) in pairs {
        uf.union(x, y);
    }
    loop {
        let mut changed = false;
        // Group current classes, then force a.x ~ a.y for x ~ y.
        let mut class_members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for m in 0..n {
            class_members.entry(uf.find(m)).or_default().push(m);
        }
        for members in class_members.values() {
            let rep = members[0];
            for &m in &members[1..] {
                for a in 0..module.monoid().len() {
                    changed |= uf.union(module.act(a, rep), module.act(a, m));
                }
            }
        }
        if !changed {
            break;
        }
    }
    build_quotient(module, &mut uf)
}

/// Quotient collapsing the submodule `members` to the basepoint.
pub fn quotient_by_submodule(module: &Module, members: &[usize]) -> (Module, ModMorphism) {
    let pairs: Vec<(usize, usize)> = members
        .iter()
        .map(|&m| (m, module.basepoint()))
        .collect();
    quotient_by_pairs(module, &pairs)
}

fn build_quotient(module: &Module, uf: &mut UnionFind) -> (Module, ModMorphism) {
    let n = module.len();
    // Classes ordered by least member index.
    let mut rep_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for m in 0..n {
        let r = uf.find(m);
        if rep_of[r] == usize::MAX {
            rep_of[r] = reps.len();
            reps.push(m);
        }
    }
    let class = |m: usize, uf: &mut UnionFind| rep_of[uf.find(m)];
    let names: Vec<String> = reps
        .iter()
        .map(|&m| format!("[{}]", module.name(m)))
        .collect();
    let k = reps.len();
    let basepoint = class(module.basepoint(), uf);
    let a_len = module.monoid().len();
    let mut action = vec![0usize; a_len * k];
    for (i, &m) in reps.iter().enumerate() {
        for a in 0..a_len {
            action[a * k + i] = class(module.act(a, m), uf);
        }
    }
    let q = PointedModule::new(module.monoid().clone(), names, basepoint, action).unwrap();
    let map: Vec<usize> = (0..n).map(|m| class(m, uf)).collect();
    let proj = ModMorphism {
        source: module.clone(),
        target: q,
        map: Arc::from(map),
    };
    let target = proj.target.clone();
    (target, proj)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
            r
        } else {
            x
        }
    }
    /// Returns true if the two were in distinct classes.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        // Keep the smaller index as root so class reps are stable.
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        true
    }
}

/// Kernel of a morphism: the preimage of the basepoint with its
/// inclusion.
pub fn kernel(f: &ModMorphism) -> (Module, ModMorphism) {
    SubModule::new(f.source.clone(), f.kernel_members())
        .expect("kernel members always form a submodule")
        .embed()
}

/// Cokernel: the target with the set image collapsed to the basepoint.
/// Elements outside the image remain distinct.
pub fn cokernel(f: &ModMorphism) -> (Module, ModMorphism) {
    quotient_by_submodule(&f.target, &f.image_members())
}

/// Image as kernel of the cokernel; concretely the set image.
pub fn image(f: &ModMorphism) -> (Module, ModMorphism) {
    SubModule::new(f.target.clone(), f.image_members())
        .expect("image members always form a submodule")
        .embed()
}

/// Coimage as cokernel of the kernel: source modulo the kernel.
pub fn coimage(f: &ModMorphism) -> (Module, ModMorphism) {
    quotient_by_submodule(&f.source, &f.kernel_members())
}
