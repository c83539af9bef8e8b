//! Cochain complexes over any belian category: bounded complexes,
//! chain maps, cohomology objects and the induced maps on them.

use crate::category::Belian;
use crate::error::{Error, Result};

/// A bounded cochain complex. `objects[i]` sits in degree `lo + i` and
/// `differentials[i]` maps it to `objects[i + 1]`. Degrees outside the
/// stored range are the zero object.
#[derive(Debug)]
pub struct Complex<C: Belian> {
    pub lo: i64,
    pub objects: Vec<C::Obj>,
    pub differentials: Vec<C::Mor>,
}

impl<C: Belian> Clone for Complex<C> {
    fn clone(&self) -> Self {
        Complex {
            lo: self.lo,
            objects: self.objects.clone(),
            differentials: self.differentials.clone(),
        }
    }
}

impl<C: Belian> PartialEq for Complex<C> {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo
            && self.objects == other.objects
            && self.differentials == other.differentials
    }
}

impl<C: Belian> Complex<C> {
    pub fn new(cat: &C, lo: i64, objects: Vec<C::Obj>, differentials: Vec<C::Mor>) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::structural("complex has no objects"));
        }
        if differentials.len() + 1 != objects.len() {
            return Err(Error::structural(
                "complex needs exactly one differential between consecutive objects",
            ));
        }
        for (i, d) in differentials.iter().enumerate() {
            if cat.source(d) != objects[i] || cat.target(d) != objects[i + 1] {
                return Err(Error::structural(format!(
                    "differential {i} does not match its neighboring objects"
                )));
            }
        }
        for i in 1..differentials.len() {
            let dd = cat.compose(&differentials[i], &differentials[i - 1]);
            if !cat.is_zero_morphism(&dd) {
                return Err(Error::validation(format!(
                    "d.d is nonzero out of degree {}",
                    lo + i as i64 - 1
                )));
            }
        }
        Ok(Complex {
            lo,
            objects,
            differentials,
        })
    }

    /// A complex concentrated in one degree.
    pub fn concentrated(x: C::Obj, degree: i64) -> Self {
        Complex {
            lo: degree,
            objects: vec![x],
            differentials: vec![],
        }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.objects.len() as i64 - 1
    }

    /// The object in degree p, zero outside the stored range.
    pub fn object(&self, cat: &C, p: i64) -> C::Obj {
        if p < self.lo || p > self.hi() {
            cat.zero_object()
        } else {
            self.objects[(p - self.lo) as usize].clone()
        }
    }

    /// The differential out of degree p, zero outside the stored range.
    pub fn differential(&self, cat: &C, p: i64) -> C::Mor {
        if p >= self.lo && p < self.hi() {
            self.differentials[(p - self.lo) as usize].clone()
        } else {
            cat.zero_morphism(&self.object(cat, p), &self.object(cat, p + 1))
        }
    }

    pub fn is_exact_at(&self, cat: &C, p: i64) -> bool {
        cat.is_exact_pair(&self.differential(cat, p - 1), &self.differential(cat, p))
    }

    /// Exact everywhere (including at the ends against zero).
    pub fn is_exact(&self, cat: &C) -> bool {
        (self.lo..=self.hi()).all(|p| self.is_exact_at(cat, p))
    }

    /// All differentials strong.
    pub fn is_strong(&self, cat: &C) -> bool {
        self.differentials.iter().all(|d| cat.is_strong(d))
    }

    /// Cohomology in degree p with its presentation.
    pub fn cohomology(&self, cat: &C, p: i64) -> CohomologyAt<C> {
        let d_out = self.differential(cat, p);
        let d_in = self.differential(cat, p - 1);
        let (kernel, kernel_incl) = cat.kernel(&d_out);
        let into_kernel = cat
            .factor_through_mono(&kernel_incl, &d_in)
            .expect("d.d = 0, so the incoming differential lands in the kernel");
        let (object, proj) = cat.cokernel(&into_kernel);
        CohomologyAt {
            degree: p,
            kernel,
            kernel_incl,
            object,
            proj,
        }
    }
}

/// H^p(X) presented as a quotient of the kernel of the outgoing
/// differential.
#[derive(Debug)]
pub struct CohomologyAt<C: Belian> {
    pub degree: i64,
    /// ker(d^p)
    pub kernel: C::Obj,
    /// ker(d^p) -> X^p
    pub kernel_incl: C::Mor,
    /// H^p
    pub object: C::Obj,
    /// ker(d^p) ->> H^p
    pub proj: C::Mor,
}

impl<C: Belian> Clone for CohomologyAt<C> {
    fn clone(&self) -> Self {
        CohomologyAt {
            degree: self.degree,
            kernel: self.kernel.clone(),
            kernel_incl: self.kernel_incl.clone(),
            object: self.object.clone(),
            proj: self.proj.clone(),
        }
    }
}

/// A map of complexes: componentwise morphisms commuting with the
/// differentials. Components outside the stored range are zero.
#[derive(Debug)]
pub struct ComplexMap<C: Belian> {
    pub source: Complex<C>,
    pub target: Complex<C>,
    pub lo: i64,
    pub components: Vec<C::Mor>,
}

impl<C: Belian> Clone for ComplexMap<C> {
    fn clone(&self) -> Self {
        ComplexMap {
            source: self.source.clone(),
            target: self.target.clone(),
            lo: self.lo,
            components: self.components.clone(),
        }
    }
}

impl<C: Belian> ComplexMap<C> {
    pub fn new(
        cat: &C,
        source: Complex<C>,
        target: Complex<C>,
        lo: i64,
        components: Vec<C::Mor>,
    ) -> Result<Self> {
        let map = ComplexMap {
            source,
            target,
            lo,
            components,
        };
        for (i, f) in map.components.iter().enumerate() {
            let p = map.lo + i as i64;
            if cat.source(f) != map.source.object(cat, p)
                || cat.target(f) != map.target.object(cat, p)
            {
                return Err(Error::structural(format!(
                    "component in degree {p} does not match the complexes"
                )));
            }
        }
        // Commuting squares over the full combined range.
        let lo = map.source.lo.min(map.target.lo).min(map.lo) - 1;
        let hi = map.source.hi().max(map.target.hi()).max(
            map.lo + map.components.len() as i64,
        ) + 1;
        for p in lo..=hi {
            let left = cat.compose(&map.target.differential(cat, p), &map.component(cat, p));
            let right = cat.compose(&map.component(cat, p + 1), &map.source.differential(cat, p));
            if left != right {
                return Err(Error::validation(format!(
                    "square out of degree {p} does not commute"
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(cat: &C, complex: &Complex<C>) -> Self {
        ComplexMap {
            source: complex.clone(),
            target: complex.clone(),
            lo: complex.lo,
            components: complex.objects.iter().map(|x| cat.identity(x)).collect(),
        }
    }

    pub fn component(&self, cat: &C, p: i64) -> C::Mor {
        let idx = p - self.lo;
        if idx >= 0 && (idx as usize) < self.components.len() {
            self.components[idx as usize].clone()
        } else {
            cat.zero_morphism(&self.source.object(cat, p), &self.target.object(cat, p))
        }
    }

    pub fn compose(cat: &C, late: &ComplexMap<C>, early: &ComplexMap<C>) -> ComplexMap<C> {
        let lo = early.lo.min(late.lo);
        let hi = (early.lo + early.components.len() as i64)
            .max(late.lo + late.components.len() as i64);
        let components = (lo..hi)
            .map(|p| cat.compose(&late.component(cat, p), &early.component(cat, p)))
            .collect();
        ComplexMap {
            source: early.source.clone(),
            target: late.target.clone(),
            lo,
            components,
        }
    }

    /// Componentwise mono.
    pub fn is_mono(&self, cat: &C) -> bool {
        let lo = self.source.lo.min(self.lo);
        let hi = self.source.hi() + 1;
        (lo..=hi).all(|p| cat.is_mono(&self.component(cat, p)))
    }

    /// Componentwise epi.
    pub fn is_epi(&self, cat: &C) -> bool {
        let lo = self.target.lo.min(self.lo);
        let hi = self.target.hi() + 1;
        (lo..=hi).all(|p| cat.is_epi(&self.component(cat, p)))
    }

    /// The induced morphism H^p(source) -> H^p(target).
    pub fn on_cohomology(
        &self,
        cat: &C,
        p: i64,
        src: &CohomologyAt<C>,
        dst: &CohomologyAt<C>,
    ) -> C::Mor {
        induced_on_cohomology(cat, &self.component(cat, p), src, dst)
    }
}

/// The morphism H(src) -> H(dst) induced by one component of a chain
/// map. Only the degree-p component is needed; the commuting squares
/// around it are what make the result well defined.
pub fn induced_on_cohomology<C: Belian>(
    cat: &C,
    component: &C::Mor,
    src: &CohomologyAt<C>,
    dst: &CohomologyAt<C>,
) -> C::Mor {
    let to_target = cat.compose(component, &src.kernel_incl);
    let into_kernel = cat
        .factor_through_mono(&dst.kernel_incl, &to_target)
        .expect("a chain map sends kernels into kernels");
    let to_h = cat.compose(&dst.proj, &into_kernel);
    cat.factor_through_epi(&src.proj, &to_h)
        .expect("a chain map kills coboundaries on cohomology")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_module, random_morphism, rng, small_monoids};
    use crate::monoid::Monoid;
    use crate::pmod::{kernel, ModCat, ModMorphism, Module, PointedModule};

    fn set0(points: &[&str]) -> Module {
        let triv = Monoid::trivial();
        PointedModule::new(
            triv,
            points.iter().map(|s| s.to_string()).collect(),
            0,
            (0..points.len()).collect(),
        )
        .unwrap()
    }

    fn two_step() -> (ModCat, Complex<ModCat>) {
        let cat = ModCat::new(Monoid::trivial());
        let x = set0(&["0", "a", "b"]);
        let y = set0(&["0", "c", "d"]);
        let z = set0(&["0", "e"]);
        // d0: a -> c, b -> 0; d1: c -> 0, d -> e. d1.d0 = 0.
        let d0 = ModMorphism::new(x.clone(), y.clone(), vec![0, 1, 0]).unwrap();
        let d1 = ModMorphism::new(y.clone(), z.clone(), vec![0, 0, 1]).unwrap();
        let complex = Complex::new(&cat, 0, vec![x, y, z], vec![d0, d1]).unwrap();
        (cat, complex)
    }

    #[test]
    fn rejects_nonzero_square() {
        let cat = ModCat::new(Monoid::trivial());
        let x = set0(&["0", "a"]);
        let id = ModMorphism::identity(&x);
        let bad = Complex::new(&cat, 0, vec![x.clone(), x.clone(), x], vec![id.clone(), id]);
        assert!(bad.is_err());
    }

    #[test]
    fn cohomology_of_two_step() {
        let (cat, complex) = two_step();
        // H^0 = ker d0 = {0, b}; H^1 = ker d1 / im d0 = {0,c}/{0,c} = 0;
        // H^2 = z / im d1 = {0,e}/{0,e} = 0.
        let h0 = complex.cohomology(&cat, 0);
        assert_eq!(h0.object.len(), 2);
        let h1 = complex.cohomology(&cat, 1);
        assert!(cat.is_zero_object(&h1.object));
        let h2 = complex.cohomology(&cat, 2);
        assert!(cat.is_zero_object(&h2.object));
        // Exactness in the middle and top agrees with vanishing.
        assert!(!complex.is_exact_at(&cat, 0));
        assert!(complex.is_exact_at(&cat, 1));
        assert!(complex.is_exact_at(&cat, 2));
    }

    #[test]
    fn vanishing_cohomology_iff_exact_on_random_complexes() {
        for monoid in small_monoids(3) {
            let cat = ModCat::new(monoid.clone());
            let mut r = rng(23);
            for _ in 0..8 {
                let complex = random_complex(&cat, &mut r);
                for p in complex.lo..=complex.hi() {
                    let h = complex.cohomology(&cat, p);
                    assert_eq!(
                        cat.is_zero_object(&h.object),
                        complex.is_exact_at(&cat, p),
                        "degree {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn induced_map_is_functorial() {
        let (cat, complex) = two_step();
        let idm = ComplexMap::identity(&cat, &complex);
        for p in 0..=2 {
            let h = complex.cohomology(&cat, p);
            let ind = idm.on_cohomology(&cat, p, &h, &h);
            assert_eq!(ind, cat.identity(&h.object));
        }
    }

    /// A short random complex: build d0 first, then pick d1 among maps
    /// vanishing on the image of d0 by going through the cokernel.
    pub(crate) fn random_complex(
        cat: &ModCat,
        r: &mut rand_chacha::ChaCha8Rng,
    ) -> Complex<ModCat> {
        let a = cat.monoid.clone();
        let x = random_module(&a, 5, r);
        let y = random_module(&a, 5, r);
        let z = random_module(&a, 5, r);
        let d0 = random_morphism(cat, &x, &y, r);
        let (c, proj) = cat.cokernel(&d0);
        let tail = random_morphism(cat, &c, &z, r);
        let d1 = ModMorphism::compose(&tail, &proj);
        Complex::new(cat, 0, vec![x, y, z], vec![d0, d1]).unwrap()
    }

    #[test]
    fn chain_map_squares_are_enforced() {
        let (cat, complex) = two_step();
        let w = set0(&["0", "w"]);
        let source = Complex::concentrated(w.clone(), 1);
        // w -> d: the square out of degree 1 needs d1(f(w)) = 0, but
        // d1(d) = e.
        let f = ModMorphism::new(w.clone(), complex.objects[1].clone(), vec![0, 2]).unwrap();
        let bad = ComplexMap::new(&cat, source.clone(), complex.clone(), 1, vec![f]);
        assert!(bad.is_err());
        // w -> c lands in ker d1.
        let g = ModMorphism::new(w, complex.objects[1].clone(), vec![0, 1]).unwrap();
        let good = ComplexMap::new(&cat, source, complex, 1, vec![g]);
        assert!(good.is_ok());
    }

    #[test]
    fn concentrated_complex_has_its_object_as_h0() {
        let cat = ModCat::new(Monoid::trivial());
        let x = set0(&["0", "a", "b"]);
        let (k, incl) = kernel(&ModMorphism::identity(&x));
        assert!(k.is_zero() && incl.is_injective());
        let c = Complex::<ModCat>::concentrated(x.clone(), 0);
        assert_eq!(c.cohomology(&cat, 0).object.len(), x.len());
        assert!(c.cohomology(&cat, 1).object.is_zero());
        assert!(c.cohomology(&cat, -1).object.is_zero());
    }
}
