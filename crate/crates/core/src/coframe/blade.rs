use std::fmt;

/// Largest coframe rank representable by a [`Blade`].
pub const MAX_RANK: usize = 32;

/// A strictly increasing multi-index `i₁ < … < i_p`, stored as a bitmask.
///
/// The corresponding monomial is `ω^{i₁}∧…∧ω^{i_p}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(u32);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn single(i: usize) -> Self {
        assert!(i < MAX_RANK, "coframe index {i} out of range");
        Blade(1 << i)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_RANK && self.0 & (1 << i) != 0
    }

    /// Indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..MAX_RANK).filter(move |i| bits & (1 << i) != 0)
    }

    /// Highest index plus one, or 0 for the empty blade.
    pub fn span(self) -> usize {
        MAX_RANK - self.0.leading_zeros() as usize
    }

    /// Canonicalizes `ω^{idx₀}∧ω^{idx₁}∧…` into `sign · blade`.
    ///
    /// Returns `None` if an index repeats (the monomial vanishes).
    pub fn from_indices(indices: &[usize]) -> Option<(Blade, i32)> {
        let mut acc = Blade::EMPTY;
        let mut sign = 1;
        for &i in indices {
            if i >= MAX_RANK {
                return None;
            }
            let (b, s) = acc.wedge(Blade::single(i))?;
            acc = b;
            sign *= s;
        }
        Some((acc, sign))
    }

    /// `self ∧ other = sign · result`, or `None` if they share an index.
    pub fn wedge(self, other: Blade) -> Option<(Blade, i32)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each pair (i ∈ self, j ∈ other) with i > j costs one transposition.
        let swaps: u32 = other
            .indices()
            .map(|j| if j + 1 >= MAX_RANK { 0 } else { (self.0 >> (j + 1)).count_ones() })
            .sum();
        let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
        Some((Blade(self.0 | other.0), sign))
    }

    /// Removes the `r`-th smallest index; `ι` of the dual vector gives `(−1)^r`.
    pub fn remove_position(self, r: usize) -> (usize, Blade) {
        let i = self.indices().nth(r).expect("position within blade");
        (i, Blade(self.0 & !(1 << i)))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<_> = self.indices().collect();
        write!(f, "Blade{idx:?}")
    }
}
