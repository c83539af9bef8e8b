//! Finite topological spaces stored by their family of open sets,
//! with minimal open neighborhoods, closures, irreducibility,
//! dimension, subspaces and the exhaustive enumeration of small T0
//! spaces.

use crate::error::{Error, Result};

/// A finite topological space on at most 16 points. Opens are stored
/// as bitmasks in ascending numeric order, so the empty set comes
/// first and the full set last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSpace {
    pub labels: Vec<String>,
    opens: Vec<u32>,
    min_open: Vec<usize>,
}

impl FinSpace {
    pub fn new(labels: Vec<String>, open_sets: &[Vec<usize>]) -> Result<FinSpace> {
        let n = labels.len();
        if n > 16 {
            return Err(Error::validation("spaces are limited to 16 points"));
        }
        let full: u32 = if n == 0 { 0 } else { (1 << n) - 1 };
        let mut opens: Vec<u32> = Vec::new();
        for set in open_sets {
            let mut mask = 0u32;
            for &p in set {
                if p >= n {
                    return Err(Error::validation(format!("open set point {p} out of range")));
                }
                mask |= 1 << p;
            }
            opens.push(mask);
        }
        opens.push(0);
        opens.push(full);
        opens.sort_unstable();
        opens.dedup();
        for i in 0..opens.len() {
            for j in 0..i {
                let (a, b) = (opens[i], opens[j]);
                if !opens.contains(&(a | b)) {
                    return Err(Error::validation("opens are not closed under union"));
                }
                if !opens.contains(&(a & b)) {
                    return Err(Error::validation("opens are not closed under intersection"));
                }
            }
        }
        let min_open = (0..n)
            .map(|x| {
                let mut m = full;
                for &o in &opens {
                    if o & (1 << x) != 0 {
                        m &= o;
                    }
                }
                opens.binary_search(&m).expect("intersections of opens are open")
            })
            .collect();
        Ok(FinSpace {
            labels,
            opens,
            min_open,
        })
    }

    pub fn point() -> FinSpace {
        FinSpace::new(vec!["*".into()], &[]).unwrap()
    }

    /// Two points, the open one first.
    pub fn sierpinski() -> FinSpace {
        FinSpace::new(vec!["o".into(), "c".into()], &[vec![0]]).unwrap()
    }

    pub fn n_points(&self) -> usize {
        self.labels.len()
    }

    pub fn full(&self) -> u32 {
        *self.opens.last().unwrap()
    }

    pub fn opens(&self) -> &[u32] {
        &self.opens
    }

    pub fn open_mask(&self, idx: usize) -> u32 {
        self.opens[idx]
    }

    pub fn open_index(&self, mask: u32) -> Option<usize> {
        self.opens.binary_search(&mask).ok()
    }

    pub fn is_open(&self, mask: u32) -> bool {
        self.open_index(mask).is_some()
    }

    pub fn is_closed(&self, mask: u32) -> bool {
        self.is_open(self.full() & !mask)
    }

    /// Index of the minimal open neighborhood of x.
    pub fn min_open_of(&self, x: usize) -> usize {
        self.min_open[x]
    }

    pub fn points_of(&self, mask: u32) -> Vec<usize> {
        (0..self.n_points()).filter(|&p| mask & (1 << p) != 0).collect()
    }

    /// Smallest closed set containing the given points.
    pub fn closure(&self, mask: u32) -> u32 {
        let mut interior_of_complement = 0u32;
        for &o in &self.opens {
            if o & mask == 0 {
                interior_of_complement |= o;
            }
        }
        self.full() & !interior_of_complement
    }

    /// No two points share all their open neighborhoods.
    pub fn is_t0(&self) -> bool {
        for x in 0..self.n_points() {
            for y in 0..x {
                if self.min_open[x] == self.min_open[y] {
                    return false;
                }
            }
        }
        true
    }

    /// A nonempty closed set that is not the union of two proper
    /// closed subsets; on finite spaces these are exactly the point
    /// closures.
    pub fn is_irreducible_closed(&self, mask: u32) -> bool {
        mask != 0
            && self.is_closed(mask)
            && self.points_of(mask).iter().any(|&p| self.closure(1 << p) == mask)
    }

    /// Length of the longest strict chain of irreducible closed
    /// subsets; -1 for the empty space.
    pub fn dimension(&self) -> i64 {
        let mut irr: Vec<u32> = (0..self.n_points())
            .map(|p| self.closure(1 << p))
            .collect();
        irr.sort_unstable();
        irr.dedup();
        if irr.is_empty() {
            return -1;
        }
        // Longest path in the strict-inclusion order, counted in steps.
        let mut best = vec![0i64; irr.len()];
        let mut order: Vec<usize> = (0..irr.len()).collect();
        order.sort_by_key(|&i| irr[i].count_ones());
        let mut longest = 0;
        for &i in &order {
            for &j in &order {
                if irr[j] != irr[i] && irr[j] & irr[i] == irr[j] {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
            longest = longest.max(best[i]);
        }
        longest
    }

    /// The subspace topology on the given points. Returns the space
    /// and the list mapping its points to points of the parent.
    pub fn subspace(&self, mask: u32) -> (FinSpace, Vec<usize>) {
        let points = self.points_of(mask);
        let labels = points.iter().map(|&p| self.labels[p].clone()).collect();
        let opens: Vec<Vec<usize>> = self
            .opens
            .iter()
            .map(|&o| {
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| o & (1 << p) != 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let space = FinSpace::new(labels, &opens).expect("subspace topology is a topology");
        (space, points)
    }

    /// All irredundant open covers of the open with the given index:
    /// antichains of nonempty opens whose union is the target. The
    /// empty open has no nonempty covers.
    pub fn covers_of(&self, u_idx: usize) -> Vec<Vec<usize>> {
        let target = self.opens[u_idx];
        if target == 0 {
            return Vec::new();
        }
        let candidates: Vec<usize> = (0..self.opens.len())
            .filter(|&i| self.opens[i] != 0 && self.opens[i] & target == self.opens[i])
            .collect();
        let mut found = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        fn rec(
            space: &FinSpace,
            candidates: &[usize],
            from: usize,
            target: u32,
            union: u32,
            chosen: &mut Vec<usize>,
            found: &mut Vec<Vec<usize>>,
        ) {
            if union == target {
                found.push(chosen.clone());
                return;
            }
            for k in from..candidates.len() {
                let idx = candidates[k];
                let mask = space.opens[idx];
                if mask & !union == 0 {
                    continue;
                }
                // Keep the family an antichain.
                if chosen.iter().any(|&c| {
                    let cm = space.opens[c];
                    cm & mask == cm || cm & mask == mask
                }) {
                    continue;
                }
                chosen.push(idx);
                rec(space, candidates, k + 1, target, union | mask, chosen, found);
                chosen.pop();
            }
        }
        rec(self, &candidates, 0, target, 0, &mut chosen, &mut found);
        found
    }
}

/// All T0 topologies on n labeled points, enumerated as the up-set
/// topologies of the partial orders.
pub fn all_t0_spaces(n: usize) -> Vec<FinSpace> {
    assert!(n <= 5, "exhaustive enumeration is for small spaces");
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut spaces = Vec::new();
    'rel: for bits in 0u32..(1 << pairs.len()) {
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if bits & (1 << k) != 0 {
                le[i * n + j] = true;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i * n + j] && le[j * n + i] {
                    continue 'rel;
                }
                for k in 0..n {
                    if le[i * n + j] && le[j * n + k] && !le[i * n + k] {
                        continue 'rel;
                    }
                }
            }
        }
        // Opens are the up-closed subsets.
        let mut opens = Vec::new();
        'subset: for mask in 0u32..(1 << n) {
            for i in 0..n {
                for j in 0..n {
                    if mask & (1 << i) != 0 && le[i * n + j] && mask & (1 << j) == 0 {
                        continue 'subset;
                    }
                }
            }
            opens.push((0..n).filter(|&p| mask & (1 << p) != 0).collect());
        }
        spaces.push(FinSpace::new(labels.clone(), &opens).unwrap());
    }
    spaces
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sierpinski_shape() {
        let s = FinSpace::sierpinski();
        assert_eq!(s.opens(), &[0b00, 0b01, 0b11]);
        assert_eq!(s.min_open_of(0), 1);
        assert_eq!(s.min_open_of(1), 2);
        assert_eq!(s.closure(0b01), 0b11);
        assert_eq!(s.closure(0b10), 0b10);
        assert_eq!(s.dimension(), 1);
        assert!(s.is_t0());
    }

    #[test]
    fn rejects_families_not_closed_under_union() {
        let bad = FinSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            &[vec![0], vec![1]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn point_and_discrete_dimensions() {
        assert_eq!(FinSpace::point().dimension(), 0);
        let discrete = FinSpace::new(
            vec!["a".into(), "b".into()],
            &[vec![0], vec![1]],
        )
        .unwrap();
        assert_eq!(discrete.dimension(), 0);
        // A chain of three specializations.
        let chain = FinSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            &[vec![0], vec![0, 1]],
        )
        .unwrap();
        assert_eq!(chain.dimension(), 2);
    }

    #[test]
    fn t0_counts_match_the_poset_counts() {
        assert_eq!(all_t0_spaces(1).len(), 1);
        assert_eq!(all_t0_spaces(2).len(), 3);
        assert_eq!(all_t0_spaces(3).len(), 19);
        assert_eq!(all_t0_spaces(4).len(), 219);
        for s in all_t0_spaces(3) {
            assert!(s.is_t0());
            assert!(s.dimension() <= 2);
        }
    }

    #[test]
    fn subspace_of_sierpinski() {
        let s = FinSpace::sierpinski();
        let (closed_pt, points) = s.subspace(0b10);
        assert_eq!(points, vec![1]);
        assert_eq!(closed_pt.n_points(), 1);
        assert_eq!(closed_pt.dimension(), 0);
    }

    #[test]
    fn covers_are_irredundant_and_complete() {
        let s = FinSpace::new(
            vec!["a".into(), "b".into()],
            &[vec![0], vec![1]],
        )
        .unwrap();
        let full_idx = s.open_index(s.full()).unwrap();
        let covers = s.covers_of(full_idx);
        // {X} and {{a},{b}}.
        assert_eq!(covers.len(), 2);
        for cover in &covers {
            let union = cover.iter().fold(0, |acc, &i| acc | s.open_mask(i));
            assert_eq!(union, s.full());
        }
        assert!(s.covers_of(0).is_empty());
    }

    #[test]
    fn closure_and_irreducibility() {
        for s in all_t0_spaces(3) {
            for p in 0..3 {
                let c = s.closure(1 << p);
                assert!(s.is_closed(c));
                assert!(s.is_irreducible_closed(c));
            }
        }
    }
}
