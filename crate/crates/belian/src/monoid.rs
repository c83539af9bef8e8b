//! Finite commutative monoids: validation, ideals, prime ideals,
//! homomorphisms and localization.
//!
//! Elements are opaque names; all algebra runs on indices into the
//! carrier. The multiplication table is stored row-major.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Hard ceiling for ideal/prime enumeration and localization.
pub const MONOID_ENUM_GUARD: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monoid {
    names: Vec<String>,
    identity: usize,
    /// mult[i * n + j] = index of product of elements i and j.
    mult: Vec<usize>,
}

/// An ideal, stored as a sorted list of element indices.
/// The empty set is admitted as an ideal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ideal {
    pub members: Vec<usize>,
}

impl Monoid {
    /// Builds and fully validates a commutative monoid.
    pub fn new(names: Vec<String>, identity: usize, mult: Vec<usize>) -> Result<Monoid> {
        let n = names.len();
        if n == 0 {
            return Err(Error::structural("monoid carrier is empty"));
        }
        if identity >= n {
            return Err(Error::structural("identity index out of range"));
        }
        if mult.len() != n * n {
            return Err(Error::structural(format!(
                "multiplication table has {} entries, expected {}",
                mult.len(),
                n * n
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
        if let Some(&bad) = mult.iter().find(|&&v| v >= n) {
            return Err(Error::structural(format!("table entry {bad} out of range")));
        }
        let m = Monoid {
            names,
            identity,
            mult,
        };
        let witnesses = m.law_violations();
        if !witnesses.is_empty() {
            return Err(Error::validation(witnesses.join("; ")));
        }
        Ok(m)
    }

    /// Returns human-readable witnesses for every violated law.
    pub fn law_violations(&self) -> Vec<String> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            if self.mul(self.identity, a) != a {
                out.push(format!("1*{} = {}", self.name(a), self.name(self.mul(self.identity, a))));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.mul(a, b) != self.mul(b, a) {
                    out.push(format!("{}*{} != {}*{}", self.name(a), self.name(b), self.name(b), self.name(a)));
                }
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        out.push(format!(
                            "({}*{})*{} != {}*({}*{})",
                            self.name(a), self.name(b), self.name(c),
                            self.name(a), self.name(b), self.name(c)
                        ));
                    }
                }
            }
        }
        out
    }

    /// The one-element monoid; its module category is the category of
    /// pointed sets.
    pub fn trivial() -> Arc<Monoid> {
        Arc::new(Monoid::new(vec!["1".into()], 0, vec![0]).unwrap())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.names.len() == 1
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.names.len() + b]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn check_enum_guard(&self) -> Result<()> {
        if self.len() > MONOID_ENUM_GUARD {
            return Err(Error::guard(format!(
                "monoid has {} elements, enumeration is limited to {}",
                self.len(),
                MONOID_ENUM_GUARD
            )));
        }
        Ok(())
    }

    /// True if `members` is closed under multiplication by arbitrary
    /// monoid elements.
    pub fn is_ideal(&self, members: &[usize]) -> bool {
        let inside = membership(self.len(), members);
        members
            .iter()
            .all(|&i| (0..self.len()).all(|a| inside[self.mul(a, i)]))
    }

    /// All ideals (the empty set included), sorted first by size and
    /// then lexicographically on the sorted index lists.
    pub fn ideals(&self) -> Result<Vec<Ideal>> {
        self.check_enum_guard()?;
        let n = self.len();
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if self.is_ideal(&members) {
                out.push(Ideal { members });
            }
        }
        out.sort_by(|x, y| {
            (x.members.len(), &x.members).cmp(&(y.members.len(), &y.members))
        });
        Ok(out)
    }

    /// A prime ideal is an ideal whose complement is a submonoid
    /// containing the identity. The empty ideal is prime whenever the
    /// full carrier is multiplicatively closed, which always holds.
    pub fn is_prime(&self, members: &[usize]) -> bool {
        if !self.is_ideal(&members.to_vec()) {
            return false;
        }
        let inside = membership(self.len(), members);
        if inside[self.identity] {
            return false;
        }
        let complement: Vec<usize> = (0..self.len()).filter(|&i| !inside[i]).collect();
        complement
            .iter()
            .all(|&a| complement.iter().all(|&b| !inside[self.mul(a, b)]))
    }

    pub fn primes(&self) -> Result<Vec<Ideal>> {
        Ok(self
            .ideals()?
            .into_iter()
            .filter(|i| self.is_prime(&i.members))
            .collect())
    }

    /// Interreduces a subset to the smallest ideal containing it.
    pub fn ideal_generated_by(&self, gens: &[usize]) -> Ideal {
        let mut inside = vec![false; self.len()];
        for &g in gens {
            for a in 0..self.len() {
                inside[self.mul(a, g)] = true;
            }
            inside[g] = true;
        }
        Ideal {
            members: (0..self.len()).filter(|&i| inside[i]).collect(),
        }
    }

    /// Units of the monoid.
    pub fn units(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).any(|b| self.mul(a, b) == self.identity))
            .collect()
    }

    /// The unique maximal ideal: the set of non-units.
    pub fn maximal_ideal(&self) -> Ideal {
        let units = membership(self.len(), &self.units());
        Ideal {
            members: (0..self.len()).filter(|&i| !units[i]).collect(),
        }
    }
}

fn membership(n: usize, members: &[usize]) -> Vec<bool> {
    let mut v = vec![false; n];
    for &i in members {
        v[i] = true;
    }
    v
}

/// A homomorphism of monoids, as an index table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidHom {
    pub source: Arc<Monoid>,
    pub target: Arc<Monoid>,
    pub map: Vec<usize>,
}

impl MonoidHom {
    pub fn new(source: Arc<Monoid>, target: Arc<Monoid>, map: Vec<usize>) -> Result<MonoidHom> {
        if map.len() != source.len() {
            return Err(Error::structural("monoid hom table has wrong length"));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= target.len()) {
            return Err(Error::structural(format!("monoid hom value {bad} out of range")));
        }
        if map[source.identity()] != target.identity() {
            return Err(Error::validation("monoid hom does not preserve the identity"));
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::validation(format!(
                        "monoid hom not multiplicative at ({}, {})",
                        source.name(a),
                        source.name(b)
                    )));
                }
            }
        }
        Ok(MonoidHom { source, target, map })
    }

    pub fn identity(m: &Arc<Monoid>) -> MonoidHom {
        MonoidHom {
            source: m.clone(),
            target: m.clone(),
            map: (0..m.len()).collect(),
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn compose(late: &MonoidHom, early: &MonoidHom) -> MonoidHom {
        assert_eq!(early.target, late.source, "monoid hom composition mismatch");
        MonoidHom {
            source: early.source.clone(),
            target: late.target.clone(),
            map: early.map.iter().map(|&a| late.map[a]).collect(),
        }
    }
}

/// The localization S^{-1}A at the submonoid generated by `s_gens`,
/// together with the canonical map A -> S^{-1}A.
///
/// Pairs (a, s) are identified when u*a*t = u*b*s for some u in S.
/// Class names are `a/s` for the least representative pair.
pub fn localize(monoid: &Arc<Monoid>, s_gens: &[usize]) -> Result<(Arc<Monoid>, MonoidHom)> {
    monoid.check_enum_guard()?;
    let n = monoid.len();
    for &g in s_gens {
        if g >= n {
            return Err(Error::structural("localization generator out of range"));
        }
    }
    // Close the generators into a submonoid S.
    let mut in_s = vec![false; n];
    in_s[monoid.identity()] = true;
    let mut stack: Vec<usize> = vec![monoid.identity()];
    for &g in s_gens {
        if !in_s[g] {
            in_s[g] = true;
            stack.push(g);
        }
    }
    while let Some(x) = stack.pop() {
        for y in 0..n {
            if in_s[y] {
                let p = monoid.mul(x, y);
                if !in_s[p] {
                    in_s[p] = true;
                    stack.push(p);
                }
            }
        }
    }
    let s: Vec<usize> = (0..n).filter(|&i| in_s[i]).collect();

    // Pairs (a, s) and the equivalence u*a*t = u*b*s for some u in S.
    let mut pairs = Vec::new();
    for a in 0..n {
        for &t in &s {
            pairs.push((a, t));
        }
    }
    let equivalent = |&(a, t): &(usize, usize), &(b, u): &(usize, usize)| -> bool {
        s.iter()
            .any(|&w| monoid.mul(w, monoid.mul(a, u)) == monoid.mul(w, monoid.mul(b, t)))
    };
    let mut class_of = vec![usize::MAX; pairs.len()];
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for (i, p) in pairs.iter().enumerate() {
        if let Some(c) = reps.iter().position(|r| equivalent(r, p)) {
            class_of[i] = c;
        } else {
            class_of[i] = reps.len();
            reps.push(*p);
        }
    }

    let names: Vec<String> = reps
        .iter()
        .map(|&(a, t)| format!("{}/{}", monoid.name(a), monoid.name(t)))
        .collect();
    let pair_index: BTreeMap<(usize, usize), usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, class_of[i]))
        .collect();
    let k = reps.len();
    let mut mult = vec![0usize; k * k];
    for i in 0..k {
        for j in 0..k {
            let (a, t) = reps[i];
            let (b, u) = reps[j];
            mult[i * k + j] = pair_index[&(monoid.mul(a, b), monoid.mul(t, u))];
        }
    }
    let identity = pair_index[&(monoid.identity(), monoid.identity())];
    let localized = Arc::new(Monoid::new(names, identity, mult)?);
    let canonical = MonoidHom::new(
        monoid.clone(),
        localized.clone(),
        (0..n).map(|a| pair_index[&(a, monoid.identity())]).collect(),
    )?;
    Ok((localized, canonical))
}
