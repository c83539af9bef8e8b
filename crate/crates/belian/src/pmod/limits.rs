//! Coproducts, finite diagrams, direct and inverse limits, fiber and
//! cofiber products of pointed modules.

use super::{quotient_by_pairs, ModMorphism, Module, PointedModule, SubModule};
use crate::category::Belian;
use crate::error::{Error, Result};
use crate::pmod::ModCat;

/// Guard for inverse limit carrier enumeration.
const PRODUCT_GUARD: usize = 1 << 22;

/// Wedge sum: disjoint union with all basepoints identified. The
/// basepoint is named "0"; the element m of the i-th summand keeps its
/// name prefixed with "i:".
pub fn coproduct(factors: &[Module]) -> (Module, Vec<ModMorphism>) {
    assert!(!factors.is_empty(), "coproduct needs at least one factor");
    let monoid = factors[0].monoid().clone();
    let mut names = vec!["0".to_string()];
    // slot[i][m] = carrier index of (i, m).
    let mut slot: Vec<Vec<usize>> = Vec::with_capacity(factors.len());
    for (i, f) in factors.iter().enumerate() {
        let mut row = vec![0usize; f.len()];
        for m in 0..f.len() {
            if m != f.basepoint() {
                row[m] = names.len();
                names.push(format!("{}:{}", i, f.name(m)));
            }
        }
        slot.push(row);
    }
    let total = names.len();
    let a_len = monoid.len();
    let mut action = vec![0usize; a_len * total];
    for (i, f) in factors.iter().enumerate() {
        for m in 0..f.len() {
            if m == f.basepoint() {
                continue;
            }
            for a in 0..a_len {
                action[a * total + slot[i][m]] = slot[i][f.act(a, m)];
            }
        }
    }
    let wedge = PointedModule::new(monoid, names, 0, action).unwrap();
    let injections = factors
        .iter()
        .enumerate()
        .map(|(i, f)| ModMorphism {
            source: f.clone(),
            target: wedge.clone(),
            map: (0..f.len()).map(|m| slot[i][m]).collect(),
        })
        .collect();
    (wedge, injections)
}

/// A finite diagram of modules: objects and arrows between them.
#[derive(Debug, Clone)]
pub struct Diagram {
    pub objects: Vec<Module>,
    /// (source index, target index, morphism)
    pub arrows: Vec<(usize, usize, ModMorphism)>,
}

impl Diagram {
    pub fn new(objects: Vec<Module>, arrows: Vec<(usize, usize, ModMorphism)>) -> Result<Diagram> {
        if objects.is_empty() {
            return Err(Error::structural("diagram has no objects"));
        }
        for (s, t, f) in &arrows {
            if *s >= objects.len() || *t >= objects.len() {
                return Err(Error::structural("diagram arrow endpoint out of range"));
            }
            if f.source != objects[*s] || f.target != objects[*t] {
                return Err(Error::structural(
                    "diagram arrow does not match its endpoints",
                ));
            }
        }
        Ok(Diagram { objects, arrows })
    }

    /// True if every pair of indices has an upper bound along arrows
    /// and all parallel composites of arrow paths agree.
    pub fn is_directed(&self) -> bool {
        let n = self.objects.len();
        // composite[i][j]: the unique composite i -> j if coherent.
        let mut composite: Vec<Vec<Option<ModMorphism>>> = vec![vec![None; n]; n];
        for (i, c) in composite.iter_mut().enumerate() {
            c[i] = Some(ModMorphism::identity(&self.objects[i]));
        }
        // Saturate paths; bail out if two paths between the same pair differ.
        let mut changed = true;
        while changed {
            changed = false;
            for (s, t, f) in &self.arrows {
                for i in 0..n {
                    let Some(pre) = composite[i][*s].clone() else {
                        continue;
                    };
                    let ext = ModMorphism::compose(f, &pre);
                    match &composite[i][*t] {
                        None => {
                            composite[i][*t] = Some(ext);
                            changed = true;
                        }
                        Some(existing) => {
                            if *existing != ext {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !(0..n).any(|k| composite[i][k].is_some() && composite[j][k].is_some()) {
                    return false;
                }
            }
        }
        true
    }
}

/// Colimit of a finite diagram: wedge of the objects modulo
/// identifying each element with its images under the arrows. For a
/// directed system this is the direct limit. Returns the apex and the
/// cocone legs.
pub fn direct_limit(diagram: &Diagram) -> (Module, Vec<ModMorphism>) {
    let (wedge, injections) = coproduct(&diagram.objects);
    let mut pairs = Vec::new();
    for (s, t, f) in &diagram.arrows {
        for m in 0..diagram.objects[*s].len() {
            pairs.push((injections[*s].apply(m), injections[*t].apply(f.apply(m))));
        }
    }
    let (apex, proj) = quotient_by_pairs(&wedge, &pairs);
    let legs = injections
        .iter()
        .map(|inj| ModMorphism::compose(&proj, inj))
        .collect();
    (apex, legs)
}

/// Limit of a finite diagram: compatible families inside the product.
/// Returns the apex and the cone legs.
pub fn inverse_limit(diagram: &Diagram) -> Result<(Module, Vec<ModMorphism>)> {
    let cat = ModCat::new(diagram.objects[0].monoid().clone());
    let size: usize = diagram.objects.iter().map(|o| o.len()).product();
    if size > PRODUCT_GUARD {
        return Err(Error::guard(format!(
            "inverse limit would enumerate {size} tuples"
        )));
    }
    let (prod, projections) = cat.product(&diagram.objects);
    let members: Vec<usize> = (0..prod.len())
        .filter(|&idx| {
            diagram.arrows.iter().all(|(s, t, f)| {
                f.apply(projections[*s].apply(idx)) == projections[*t].apply(idx)
            })
        })
        .collect();
    let (apex, incl) = SubModule::new(prod, members)
        .expect("compatible families form a submodule")
        .embed();
    let legs = projections
        .iter()
        .map(|p| ModMorphism::compose(p, &incl))
        .collect();
    Ok((apex, legs))
}

/// Fiber product of f: X -> Z and g: Y -> Z, with its two projections.
pub fn fiber_product(f: &ModMorphism, g: &ModMorphism) -> (Module, ModMorphism, ModMorphism) {
    assert_eq!(f.target, g.target, "fiber product needs a common target");
    let cat = ModCat::new(f.source.monoid().clone());
    let (prod, projections) = cat.product(&[f.source.clone(), g.source.clone()]);
    let members: Vec<usize> = (0..prod.len())
        .filter(|&idx| f.apply(projections[0].apply(idx)) == g.apply(projections[1].apply(idx)))
        .collect();
    let (apex, incl) = SubModule::new(prod, members)
        .expect("fiber product members form a submodule")
        .embed();
    (
        apex,
        ModMorphism::compose(&projections[0], &incl),
        ModMorphism::compose(&projections[1], &incl),
    )
}

/// Cofiber product (pushout) of h: A -> B and k: A -> C, with the two
/// injections. Built as the wedge of B and C modulo h(a) ~ k(a),
/// closed under the action until stable.
pub fn cofiber_product(h: &ModMorphism, k: &ModMorphism) -> (Module, ModMorphism, ModMorphism) {
    assert_eq!(h.source, k.source, "cofiber product needs a common source");
    let (wedge, injections) = coproduct(&[h.target.clone(), k.target.clone()]);
    let pairs: Vec<(usize, usize)> = (0..h.source.len())
        .map(|a| (injections[0].apply(h.apply(a)), injections[1].apply(k.apply(a))))
        .collect();
    let (apex, proj) = quotient_by_pairs(&wedge, &pairs);
    (
        apex,
        ModMorphism::compose(&proj, &injections[0]),
        ModMorphism::compose(&proj, &injections[1]),
    )
}

/// Checks the universal property of a claimed colimit cocone against
/// every cocone into the listed test objects. Exhaustive over
/// enumerated homs, so keep the test objects small.
pub fn verify_colimit(
    diagram: &Diagram,
    apex: &Module,
    legs: &[ModMorphism],
    test_objects: &[Module],
) -> bool {
    let cat = ModCat::new(apex.monoid().clone());
    for (s, t, f) in &diagram.arrows {
        if ModMorphism::compose(&legs[*t], f) != legs[*s] {
            return false;
        }
    }
    for tobj in test_objects {
        let candidate_legs: Vec<Vec<ModMorphism>> = diagram
            .objects
            .iter()
            .map(|o| cat.enumerate_homs(o, tobj, None))
            .collect();
        let mediators = cat.enumerate_homs(apex, tobj, None);
        // Every cocone must factor uniquely.
        for cocone in cocones(diagram, &candidate_legs) {
            let matching: Vec<&ModMorphism> = mediators
                .iter()
                .filter(|m| {
                    (0..legs.len()).all(|i| ModMorphism::compose(m, &legs[i]) == cocone[i])
                })
                .collect();
            if matching.len() != 1 {
                return false;
            }
        }
    }
    true
}

/// Checks the universal property of a claimed limit cone dually.
pub fn verify_limit(
    diagram: &Diagram,
    apex: &Module,
    legs: &[ModMorphism],
    test_objects: &[Module],
) -> bool {
    let cat = ModCat::new(apex.monoid().clone());
    for (s, t, f) in &diagram.arrows {
        if ModMorphism::compose(f, &legs[*s]) != legs[*t] {
            return false;
        }
    }
    for tobj in test_objects {
        let candidate_legs: Vec<Vec<ModMorphism>> = diagram
            .objects
            .iter()
            .map(|o| cat.enumerate_homs(tobj, o, None))
            .collect();
        let mediators = cat.enumerate_homs(tobj, apex, None);
        for cone in cones(diagram, &candidate_legs) {
            let matching: Vec<&ModMorphism> = mediators
                .iter()
                .filter(|m| {
                    (0..legs.len()).all(|i| ModMorphism::compose(&legs[i], m) == cone[i])
                })
                .collect();
            if matching.len() != 1 {
                return false;
            }
        }
    }
    true
}

fn cocones(diagram: &Diagram, candidates: &[Vec<ModMorphism>]) -> Vec<Vec<ModMorphism>> {
    let mut out = Vec::new();
    let mut current: Vec<ModMorphism> = Vec::new();
    fill_cones(diagram, candidates, &mut current, &mut out, true);
    out
}

fn cones(diagram: &Diagram, candidates: &[Vec<ModMorphism>]) -> Vec<Vec<ModMorphism>> {
    let mut out = Vec::new();
    let mut current: Vec<ModMorphism> = Vec::new();
    fill_cones(diagram, candidates, &mut current, &mut out, false);
    out
}

fn fill_cones(
    diagram: &Diagram,
    candidates: &[Vec<ModMorphism>],
    current: &mut Vec<ModMorphism>,
    out: &mut Vec<Vec<ModMorphism>>,
    co: bool,
) {
    let i = current.len();
    if i == candidates.len() {
        out.push(current.clone());
        return;
    }
    'next: for cand in &candidates[i] {
        for (s, t, f) in &diagram.arrows {
            // Check an arrow once both endpoints are chosen, i.e. when
            // the later endpoint is the slot being filled now.
            let (a, b) = (*s, *t);
            if a.max(b) != i {
                continue;
            }
            let get = |j: usize| -> &ModMorphism {
                if j == i {
                    cand
                } else {
                    &current[j]
                }
            };
            let ok = if co {
                ModMorphism::compose(get(b), f) == *get(a)
            } else {
                ModMorphism::compose(f, get(a)) == *get(b)
            };
            if !ok {
                continue 'next;
            }
        }
        current.push(cand.clone());
        fill_cones(diagram, candidates, current, out, co);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::Monoid;

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
    fn coproduct_sizes_add_minus_one() {
        let x = set0(&["0", "a", "b"], 0);
        let y = set0(&["0", "c", "d"], 0);
        let (w, injections) = coproduct(&[x, y]);
        assert_eq!(w.len(), 5);
        assert!(injections.iter().all(|i| i.is_injective()));
    }

    #[test]
    fn coproduct_with_zero_is_identity_up_to_iso() {
        let x = set0(&["0", "a"], 0);
        let z = PointedModule::zero(x.monoid());
        let (w, _) = coproduct(&[x.clone(), z]);
        assert_eq!(w.len(), x.len());
    }

    #[test]
    fn pushout_of_two_quotients() {
        let x = set0(&["0", "a", "b"], 0);
        let y1 = set0(&["0", "u"], 0);
        let y2 = set0(&["0", "v"], 0);
        // h kills b, k kills a.
        let h = ModMorphism::new(x.clone(), y1, vec![0, 1, 0]).unwrap();
        let k = ModMorphism::new(x, y2, vec![0, 0, 1]).unwrap();
        let (p, i1, i2) = cofiber_product(&h, &k);
        // u ~ 0 via a-path? h(a) = u, k(a) = 0, so u ~ 0; h(b) = 0, k(b) = v, so v ~ 0.
        assert!(p.is_zero());
        assert!(i1.is_zero_map() && i2.is_zero_map());
    }

    #[test]
    fn fiber_product_of_inclusions_is_intersection() {
        let z = set0(&["0", "p", "q", "r"], 0);
        let x = SubModule::new(z.clone(), vec![0, 1, 2]).unwrap();
        let y = SubModule::new(z.clone(), vec![0, 2, 3]).unwrap();
        let (_, xi) = x.embed();
        let (_, yi) = y.embed();
        let (fp, p1, p2) = fiber_product(&xi, &yi);
        assert_eq!(fp.len(), 2);
        assert!(p1.is_injective() && p2.is_injective());
    }

    #[test]
    fn colimit_of_directed_chain() {
        let x = set0(&["0", "a", "b"], 0);
        let y = set0(&["0", "c"], 0);
        let f = ModMorphism::new(x.clone(), y.clone(), vec![0, 1, 1]).unwrap();
        let d = Diagram::new(vec![x, y.clone()], vec![(0, 1, f)]).unwrap();
        assert!(d.is_directed());
        let (apex, legs) = direct_limit(&d);
        assert_eq!(apex.len(), y.len());
        let tests = vec![set0(&["0", "t"], 0), set0(&["0", "s", "t"], 0)];
        assert!(verify_colimit(&d, &apex, &legs, &tests));
    }

    #[test]
    fn limit_of_cospan_is_fiber_product() {
        let z = set0(&["0", "z"], 0);
        let x = set0(&["0", "a"], 0);
        let y = set0(&["0", "b"], 0);
        let f = ModMorphism::new(x.clone(), z.clone(), vec![0, 1]).unwrap();
        let g = ModMorphism::new(y.clone(), z.clone(), vec![0, 1]).unwrap();
        let d = Diagram::new(vec![x, y, z], vec![(0, 2, f.clone()), (1, 2, g.clone())]).unwrap();
        let (apex, legs) = inverse_limit(&d).unwrap();
        let (fp, _, _) = fiber_product(&f, &g);
        assert_eq!(apex.len(), fp.len());
        let tests = vec![set0(&["0", "t"], 0)];
        assert!(verify_limit(&d, &apex, &legs, &tests));
    }
}
