//! The abstract interface the homological engine is written against.
//!
//! A `Belian` category is balanced and pointed, has kernels,
//! cokernels and finite products, and every morphism with zero
//! cokernel is epi. The two instances here are pointed modules over a
//! fixed monoid and pointed sheaves on a fixed monoided space. Beyond
//! the categorical structure the trait exposes two computable
//! factorizations (through a mono, through an epi) from which images,
//! coimages, strongness and exactness all derive.

use std::fmt::Debug;

pub trait Belian {
    type Obj: Clone + PartialEq + Debug;
    type Mor: Clone + PartialEq + Debug;

    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `compose(g, f)` is g after f.
    fn compose(&self, late: &Self::Mor, early: &Self::Mor) -> Self::Mor;
    fn zero_object(&self) -> Self::Obj;
    fn zero_morphism(&self, source: &Self::Obj, target: &Self::Obj) -> Self::Mor;

    /// Kernel object with its inclusion into the source of f.
    fn kernel(&self, f: &Self::Mor) -> (Self::Obj, Self::Mor);
    /// Cokernel object with the projection from the target of f.
    fn cokernel(&self, f: &Self::Mor) -> (Self::Obj, Self::Mor);

    fn is_mono(&self, f: &Self::Mor) -> bool;
    fn is_epi(&self, f: &Self::Mor) -> bool;

    /// The unique g with mono . g = f, when f factors through the mono.
    fn factor_through_mono(&self, mono: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor>;
    /// The unique g with g . epi = f, when f is constant on the fibers
    /// of the epi.
    fn factor_through_epi(&self, epi: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor>;

    /// Finite product with its projections. The empty product is the
    /// zero object.
    fn product(&self, factors: &[Self::Obj]) -> (Self::Obj, Vec<Self::Mor>);
    /// The mediating morphism into a product built by `product`.
    fn tuple(&self, factors: &[Self::Obj], maps: &[Self::Mor]) -> Self::Mor;

    /// Some extension of f along the mono, when one exists. Complete:
    /// returns None only if no extension exists. Used to map into
    /// injective objects.
    fn extend_along_mono(&self, mono: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor>;

    // Derived operations.

    fn is_zero_object(&self, x: &Self::Obj) -> bool {
        self.identity(x) == self.zero_morphism(x, x)
    }

    fn is_zero_morphism(&self, f: &Self::Mor) -> bool {
        *f == self.zero_morphism(&self.source(f), &self.target(f))
    }

    /// Image as the kernel of the cokernel, with its inclusion.
    fn image(&self, f: &Self::Mor) -> (Self::Obj, Self::Mor) {
        let (_, proj) = self.cokernel(f);
        self.kernel(&proj)
    }

    /// Coimage as the cokernel of the kernel, with its projection.
    fn coimage(&self, f: &Self::Mor) -> (Self::Obj, Self::Mor) {
        let (_, incl) = self.kernel(f);
        self.cokernel(&incl)
    }

    /// The canonical comparison from the coimage to the image.
    fn coim_to_im(&self, f: &Self::Mor) -> Self::Mor {
        let (_, coim_proj) = self.coimage(f);
        let (_, im_incl) = self.image(f);
        let through_coim = self
            .factor_through_epi(&coim_proj, f)
            .expect("f always factors through its coimage");
        self.factor_through_mono(&im_incl, &through_coim)
            .expect("the coimage factor always lands in the image")
    }

    fn is_iso(&self, f: &Self::Mor) -> bool {
        self.is_mono(f) && self.is_epi(f)
    }

    /// Inverse of an isomorphism.
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        if !self.is_iso(f) {
            return None;
        }
        let id_target = self.identity(&self.target(f));
        self.factor_through_mono(f, &id_target)
    }

    /// A morphism is strong when its coimage-to-image comparison is an
    /// isomorphism.
    fn is_strong(&self, f: &Self::Mor) -> bool {
        self.is_iso(&self.coim_to_im(f))
    }

    /// Epi-mono factorization through the image; defined for every
    /// morphism, and the two legs compose back to f exactly when f is
    /// strong in the coimage sense used here (the epi leg is the
    /// corestriction to the image, which always exists in the concrete
    /// categories).
    fn epi_mono_through_image(&self, f: &Self::Mor) -> (Self::Mor, Self::Mor) {
        let (_, im_incl) = self.image(f);
        let e = self
            .factor_through_mono(&im_incl, f)
            .expect("f lands in its image");
        (e, im_incl)
    }

    /// Exactness of the two-arrow sequence . --f--> . --g--> . at the
    /// middle: the composite vanishes and the canonical mono from the
    /// image of f to the kernel of g is an isomorphism.
    fn is_exact_pair(&self, f: &Self::Mor, g: &Self::Mor) -> bool {
        if !self.is_zero_morphism(&self.compose(g, f)) {
            return false;
        }
        let (_, im_incl) = self.image(f);
        let (_, ker_incl) = self.kernel(g);
        match self.factor_through_mono(&ker_incl, &im_incl) {
            Some(cmp) => self.is_iso(&cmp),
            None => false,
        }
    }

    /// A pseudo-isomorphism: zero kernel and zero cokernel, but not
    /// necessarily mono.
    fn is_pseudo_iso(&self, f: &Self::Mor) -> bool {
        let (k, _) = self.kernel(f);
        let (c, _) = self.cokernel(f);
        self.is_zero_object(&k) && self.is_zero_object(&c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctorFlags {
    /// Sends strong morphisms to strong morphisms.
    pub strong: bool,
    /// Sends strong exact sequences 0 -> A -> B -> C to exact
    /// sequences 0 -> FA -> FB -> FC.
    pub left_strong_exact: bool,
    /// Sends monos to monos.
    pub preserves_mono: bool,
}

/// A functor between two belian categories, used to drive derived
/// functor computations. The flags are declared by the caller and
/// spot-verified by tests, not assumed.
pub trait BelianFunctor<S: Belian, T: Belian> {
    fn apply_obj(&self, source_cat: &S, target_cat: &T, x: &S::Obj) -> T::Obj;
    fn apply_mor(&self, source_cat: &S, target_cat: &T, f: &S::Mor) -> T::Mor;
    fn flags(&self) -> FunctorFlags;
}

/// Hom-set enumeration, for categories small enough to search. Used
/// to exhibit isomorphisms whose existence a theorem guarantees.
pub trait HomSearch: Belian {
    /// All morphisms x -> y, up to the cap.
    fn homs(&self, x: &Self::Obj, y: &Self::Obj, cap: Option<usize>) -> Vec<Self::Mor>;

    fn find_iso(&self, x: &Self::Obj, y: &Self::Obj) -> Option<Self::Mor> {
        self.homs(x, y, None).into_iter().find(|f| self.is_iso(f))
    }
}

/// The identity functor.
pub struct IdFunctor;

impl<C: Belian> BelianFunctor<C, C> for IdFunctor {
    fn apply_obj(&self, _s: &C, _t: &C, x: &C::Obj) -> C::Obj {
        x.clone()
    }
    fn apply_mor(&self, _s: &C, _t: &C, f: &C::Mor) -> C::Mor {
        f.clone()
    }
    fn flags(&self) -> FunctorFlags {
        FunctorFlags {
            strong: true,
            left_strong_exact: true,
            preserves_mono: true,
        }
    }
}
