//! Permutations of `{0, …, m-1}` in one-line notation.
//!
//! Composition convention, used everywhere in the crate: `a.then(&b)` applies
//! `a` first and `b` second, i.e. `a.then(&b).apply(x) == b.apply(a.apply(x))`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(m: usize) -> Self {
        Perm((0..m as u32).collect())
    }

    /// Validates one-line notation.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = alloc::vec![false; m];
        for &x in &images {
            if x >= m || seen[x] {
                return Err(Error::Precondition(alloc::format!(
                    "{images:?} is not a permutation of 0..{m}"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm(images.into_iter().map(|x| x as u32).collect()))
    }

    /// Swaps `a` and `b`.
    pub fn transposition(m: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(m);
        p.0.swap(a, b);
        p
    }

    /// The cycle `0 -> 1 -> … -> len-1 -> 0` on the first `len` points.
    pub fn rotation(m: usize, len: usize) -> Self {
        let mut p = Self::identity(m);
        for i in 0..len {
            p.0[i] = ((i + 1) % len) as u32;
        }
        p
    }

    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut p = Self::identity(m);
        p.0.shuffle(rng);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&x| x as usize)
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0u32; self.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// Applies `self`, then `next`.
    pub fn then(&self, next: &Perm) -> Self {
        Perm(self.0.iter().map(|&x| next.0[x as usize]).collect())
    }

    /// `π σ π⁻¹`: the permutation acting as `self` after relabeling every
    /// point `x` as `π(x)`.
    pub fn conjugate_by(&self, pi: &Perm) -> Self {
        let mut out = alloc::vec![0u32; self.len()];
        for (x, &sx) in self.0.iter().enumerate() {
            out[pi.0[x] as usize] = pi.0[sx as usize];
        }
        Perm(out)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &x)| *i == x as usize).count()
    }

    /// Cycle lengths in ascending order (fixed points included).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = alloc::vec![false; self.len()];
        let mut lengths = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable();
        lengths
    }

    /// Lexicographically least permutation with the given cycle type:
    /// shortest cycles first, each on consecutive points.
    pub fn class_representative(cycle_type: &[usize]) -> Self {
        let mut lengths = cycle_type.to_vec();
        lengths.sort_unstable();
        let m: usize = lengths.iter().sum();
        let mut p = Self::identity(m);
        let mut start = 0;
        for len in lengths {
            for i in 0..len {
                p.0[start + i] = (start + (i + 1) % len) as u32;
            }
            start += len;
        }
        p
    }

    /// True iff `self` is the lexicographically least member of its
    /// conjugacy class.
    pub fn is_class_representative(&self) -> bool {
        *self == Self::class_representative(&self.cycle_type())
    }

    /// Compares `π self π⁻¹` with `self` lexicographically without building
    /// the conjugate. `pi_inv` must be the inverse of `pi`.
    pub(crate) fn cmp_conjugate(&self, pi: &Perm, pi_inv: &Perm) -> Ordering {
        for i in 0..self.len() {
            let c = pi.0[self.0[pi_inv.0[i] as usize] as usize];
            match c.cmp(&self.0[i]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// All permutations of `0..m` in lexicographic order.
    pub fn all(m: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = (0..m as u32).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    /// Position of `self` in [`Perm::all`] order.
    pub fn lex_rank(&self) -> u64 {
        let m = self.len();
        let mut rank = 0u64;
        for i in 0..m {
            let smaller = self.0[i + 1..].iter().filter(|&&x| x < self.0[i]).count() as u64;
            rank = rank * (m - i) as u64 + smaller;
        }
        rank
    }
}

impl core::fmt::Display for Perm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// `m!` if it fits in a `u64`.
pub fn factorial(m: usize) -> Option<u64> {
    (1..=m as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use proptest::prelude::*;

    #[test]
    fn composition_convention() {
        let a = Perm::from_images(alloc::vec![1, 2, 0]).unwrap();
        let b = Perm::transposition(3, 0, 1);
        let ab = a.then(&b);
        for x in 0..3 {
            assert_eq!(ab.apply(x), b.apply(a.apply(x)));
        }
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn all_is_lex_sorted_and_ranked() {
        let perms = Perm::all(4);
        assert_eq!(perms.len(), 24);
        assert!(perms.windows(2).all(|w| w[0] < w[1]));
        for (i, p) in perms.iter().enumerate() {
            assert_eq!(p.lex_rank(), i as u64);
        }
        assert_eq!(Perm::all(0).len(), 1);
    }

    #[test]
    fn class_representative_is_lex_min_of_class() {
        for m in 1..=6 {
            let mut least: BTreeMap<Vec<usize>, Perm> = BTreeMap::new();
            for p in Perm::all(m) {
                least.entry(p.cycle_type()).or_insert(p);
            }
            for (ty, p) in least {
                assert_eq!(Perm::class_representative(&ty), p, "type {ty:?}");
            }
        }
    }

    #[test]
    fn fixed_points_of_small_cycles() {
        assert_eq!(Perm::transposition(3, 0, 1).fixed_points(), 1);
        assert_eq!(Perm::rotation(3, 3).fixed_points(), 0);
    }

    fn arb_perm() -> impl Strategy<Value = Perm> {
        (1usize..7).prop_flat_map(|m| {
            Just((0..m).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Perm::from_images(v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(p in arb_perm()) {
            prop_assert!(p.then(&p.inverse()).is_identity());
            prop_assert!(p.inverse().then(&p).is_identity());
        }

        #[test]
        fn conjugation_preserves_cycle_type(p in arb_perm(), seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let pi = Perm::random(p.len(), &mut rng);
            let c = p.conjugate_by(&pi);
            prop_assert_eq!(c.cycle_type(), p.cycle_type());
            // π σ π⁻¹ evaluated pointwise
            for x in 0..p.len() {
                prop_assert_eq!(c.apply(pi.apply(x)), pi.apply(p.apply(x)));
            }
            prop_assert_eq!(p.cmp_conjugate(&pi, &pi.inverse()), c.cmp(&p));
        }
    }
}
