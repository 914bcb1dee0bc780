//! The Weyl group of type `C_g`, realized as the centralizer of the involution
//! `i -> 2g+1-i` inside the symmetric group on `{1, ..., 2g}`.
//!
//! Composition is left action throughout: `(u * w)(i) = u(w(i))`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank representable by [`SignedPermutation`].
pub const MAX_RANK: usize = 16;

/// Default rank bound for operations that enumerate the whole group.
pub const DEFAULT_ENUMERATION_BOUND: usize = 8;

/// An element of `W(C_g)` stored by its images on `{1, ..., 2g}`.
///
/// Ordering is lexicographic on the image sequence (ranks compared first).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    g: u8,
    images: [u8; 2 * MAX_RANK],
}

impl SignedPermutation {
    /// Builds an element from its 1-based images, checking bijectivity and the
    /// symmetry `w(2g+1-i) = 2g+1-w(i)`.
    pub fn new(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidPermutation(format!(
                "length {n} is not a positive even number"
            )));
        }
        let g = n / 2;
        if g > MAX_RANK {
            return Err(Error::InvalidPermutation(format!(
                "rank {g} exceeds the maximum {MAX_RANK}"
            )));
        }
        let mut seen = vec![false; n + 1];
        for &v in images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        for i in 1..=n {
            if images[n - i] != n + 1 - images[i - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} violates w(2g+1-i) = 2g+1-w(i) at i = {i}"
                )));
            }
        }
        let mut out = Self::identity(g);
        for (slot, &v) in out.images.iter_mut().zip(images) {
            *slot = v as u8;
        }
        Ok(out)
    }

    pub fn identity(g: usize) -> Self {
        assert!((1..=MAX_RANK).contains(&g), "rank {g} out of range");
        let mut images = [0u8; 2 * MAX_RANK];
        for (i, slot) in images.iter_mut().take(2 * g).enumerate() {
            *slot = (i + 1) as u8;
        }
        Self { g: g as u8, images }
    }

    /// The simple reflection `s_i`: `(i i+1)(2g-i 2g+1-i)` for `i < g`, and
    /// `(g g+1)` for `i = g`.
    pub fn simple_reflection(g: usize, i: usize) -> Result<Self> {
        if g == 0 || g > MAX_RANK {
            return Err(Error::InvalidPermutation(format!("rank {g} out of range")));
        }
        if i == 0 || i > g {
            return Err(Error::IndexOutOfRange { index: i, max: g });
        }
        let mut w = Self::identity(g);
        w.swap_positions(i, i + 1);
        Ok(w)
    }

    /// The reflection exchanging `a` and `b` together with their mirror
    /// images. When `b = 2g+1-a` this is the single transposition `(a b)`.
    pub fn reflection(g: usize, a: usize, b: usize) -> Result<Self> {
        let n = 2 * g;
        if a == 0 || b == 0 || a > n || b > n || a == b {
            return Err(Error::InvalidPermutation(format!(
                "({a} {b}) is not a transposition of 1..={n}"
            )));
        }
        let mut w = Self::identity(g);
        w.images[a - 1] = b as u8;
        w.images[b - 1] = a as u8;
        let (ma, mb) = (n + 1 - a, n + 1 - b);
        if ma != b {
            w.images[ma - 1] = mb as u8;
            w.images[mb - 1] = ma as u8;
        }
        Ok(w)
    }

    /// `x = (1 g+1)(2 g+2)...(g 2g)`, the longest element of `^I W^I`.
    pub fn longest_x(g: usize) -> Self {
        let mut w = Self::identity(g);
        for i in 1..=g {
            w.images[i - 1] = (i + g) as u8;
            w.images[i + g - 1] = i as u8;
        }
        w
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.g as usize
    }

    #[inline]
    pub fn degree(&self) -> usize {
        2 * self.g as usize
    }

    /// `w(i)` for `1 <= i <= 2g`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.degree());
        self.images[i - 1] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images[..self.degree()]
            .iter()
            .map(|&v| v as usize)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    pub fn inverse(&self) -> Self {
        let mut out = *self;
        for i in 1..=self.degree() {
            out.images[self.apply(i) - 1] = i as u8;
        }
        out
    }

    /// `self * other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.g != other.g {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(self.mul(other))
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 1..=self.degree() {
            out.images[i - 1] = self.images[other.apply(i) - 1];
        }
        out
    }

    /// Right multiplication by `s_i` in place.
    fn swap_positions(&mut self, i: usize, j: usize) {
        let n = self.degree();
        self.images.swap(i - 1, j - 1);
        let (mi, mj) = (n + 1 - i, n + 1 - j);
        if mi != j {
            self.images.swap(mi - 1, mj - 1);
        }
    }

    /// Whether `l(w s_i) < l(w)`, i.e. `w(i) > w(i+1)`.
    #[inline]
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.apply(i) > self.apply(i + 1)
    }

    /// Coxeter length, by repeatedly stripping a right descent.
    pub fn length(&self) -> usize {
        let g = self.rank();
        let mut w = *self;
        let mut len = 0;
        'outer: loop {
            for i in 1..=g {
                if w.has_right_descent(i) {
                    w.swap_positions(i, i + 1);
                    len += 1;
                    continue 'outer;
                }
            }
            return len;
        }
    }

    /// A reduced word `[i_1, ..., i_l]` with `w = s_{i_1} ... s_{i_l}`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let g = self.rank();
        let mut w = *self;
        let mut word = Vec::new();
        'outer: loop {
            for i in 1..=g {
                if w.has_right_descent(i) {
                    w.swap_positions(i, i + 1);
                    word.push(i);
                    continue 'outer;
                }
            }
            word.reverse();
            return word;
        }
    }

    /// If `w s_j w^{-1}` is a simple reflection `s_i`, returns `i`.
    pub fn conjugate_simple(&self, j: usize) -> Option<usize> {
        let g = self.rank();
        let s = Self::simple_reflection(g, j).ok()?;
        let c = self.mul(&s).mul(&self.inverse());
        (1..=g).find(|&i| Self::simple_reflection(g, i).map(|t| t == c).unwrap_or(false))
    }

    /// Membership in the right minimal coset representatives `W^J`.
    pub fn is_min_right(&self, j: &SubsetJ) -> bool {
        j.iter().all(|i| !self.has_right_descent(i))
    }

    /// Membership in the left minimal coset representatives `^J W`.
    pub fn is_min_left(&self, j: &SubsetJ) -> bool {
        self.inverse().is_min_right(j)
    }

    /// `#{a <= i : w(a) >= j}`, tabulated for `0 <= i, j <= 2g+1`.
    fn rank_table(&self) -> Vec<Vec<u8>> {
        let n = self.degree();
        let mut table = vec![vec![0u8; n + 2]; n + 1];
        for i in 1..=n {
            let wi = self.apply(i);
            for j in 0..=n + 1 {
                table[i][j] = table[i - 1][j] + u8::from(wi >= j);
            }
        }
        table
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images())
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.images().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for SignedPermutation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.images().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SignedPermutation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Self::new(&images).map_err(serde::de::Error::custom)
    }
}

/// A set of simple-reflection indices drawn from `{1, ..., g-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetJ {
    g: u8,
    bits: u32,
}

impl SubsetJ {
    /// Rejects members outside `{1, ..., g-1}`; in particular `g` itself.
    pub fn new(g: usize, members: &[usize]) -> Result<Self> {
        if g == 0 || g > MAX_RANK {
            return Err(Error::InvalidSubset(format!("rank {g} out of range")));
        }
        let mut bits = 0u32;
        for &i in members {
            if i == 0 || i >= g {
                return Err(Error::InvalidSubset(format!(
                    "{i} is not in 1..={} (rank {g})",
                    g - 1
                )));
            }
            bits |= 1 << i;
        }
        Ok(Self { g: g as u8, bits })
    }

    pub fn empty(g: usize) -> Self {
        assert!((1..=MAX_RANK).contains(&g));
        Self { g: g as u8, bits: 0 }
    }

    /// `I = {1, ..., g-1}`.
    pub fn full(g: usize) -> Self {
        let mut s = Self::empty(g);
        for i in 1..g {
            s.bits |= 1 << i;
        }
        s
    }

    /// Every subset of `{1, ..., g-1}`, ordered by bitmask.
    pub fn all(g: usize) -> Vec<Self> {
        let full = Self::full(g).bits;
        (0..=full)
            .filter(|b| b & !full == 0)
            .map(|bits| Self { g: g as u8, bits })
            .collect()
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.g as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 32 && self.bits & (1 << i) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.rank()).filter(move |&i| self.contains(i))
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// `J~ = {g - i : i in J}`.
    pub fn tilde(&self) -> Self {
        let g = self.rank();
        let mut out = Self::empty(g);
        for i in self.iter() {
            out.bits |= 1 << (g - i);
        }
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.g, other.g);
        Self {
            g: self.g,
            bits: self.bits | other.bits,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    /// The jump sequence `0 = k_0 < ... < k_c = g < ... < k_{2c} = 2g` of the
    /// complement `{0, ..., g} \ J`, extended by `k_i = 2g - k_{2c-i}`.
    pub fn jumps(&self) -> Vec<usize> {
        let g = self.rank();
        let lower: Vec<usize> = (0..=g).filter(|&i| !self.contains(i)).collect();
        let c = lower.len() - 1;
        let mut k = lower.clone();
        for i in c + 1..=2 * c {
            k.push(2 * g - lower[2 * c - i]);
        }
        k
    }
}

impl fmt::Debug for SubsetJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.members())
    }
}

impl Serialize for SubsetJ {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `^J W = {w : w^{-1} in W^J}`.
    Left,
    /// `W^J = {w : w(i) < w(i+1) for i in J}`.
    Right,
}

/// Free-function form of [`SignedPermutation::simple_reflection`].
pub fn simple_reflection(g: usize, i: usize) -> Result<SignedPermutation> {
    SignedPermutation::simple_reflection(g, i)
}

pub fn compose(u: &SignedPermutation, w: &SignedPermutation) -> Result<SignedPermutation> {
    u.compose(w)
}

pub fn longest_x(g: usize) -> SignedPermutation {
    SignedPermutation::longest_x(g)
}

pub fn length(w: &SignedPermutation) -> usize {
    w.length()
}

/// Bruhat order via the rank-matrix criterion on the `S_{2g}` embedding:
/// `v <= w` iff `#{a <= i : v(a) >= j} <= #{a <= i : w(a) >= j}` for all `i, j`.
pub fn bruhat_leq(v: &SignedPermutation, w: &SignedPermutation) -> Result<bool> {
    if v.rank() != w.rank() {
        return Err(Error::RankMismatch(v.rank(), w.rank()));
    }
    let (rv, rw) = (v.rank_table(), w.rank_table());
    Ok(rv
        .iter()
        .zip(&rw)
        .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x <= y)))
}

/// Calls `f` on every element of `W(C_g)` in lexicographic order of images.
pub fn for_each_element(g: usize, mut f: impl FnMut(&SignedPermutation)) {
    fn go(
        w: &mut SignedPermutation,
        pos: usize,
        used: &mut [bool],
        f: &mut impl FnMut(&SignedPermutation),
    ) {
        let g = w.rank();
        let n = 2 * g;
        if pos == g {
            f(w);
            return;
        }
        for v in 1..=n {
            let pair = v.min(n + 1 - v);
            if used[pair] {
                continue;
            }
            used[pair] = true;
            w.images[pos] = v as u8;
            w.images[n - 1 - pos] = (n + 1 - v) as u8;
            go(w, pos + 1, used, f);
            used[pair] = false;
        }
    }
    let mut w = SignedPermutation::identity(g);
    let mut used = vec![false; g + 1];
    go(&mut w, 0, &mut used, &mut f);
}

fn check_bound(g: usize, bound: usize) -> Result<()> {
    if g == 0 {
        return Err(Error::InvalidPermutation("rank must be positive".into()));
    }
    if g > bound || g > MAX_RANK {
        return Err(Error::BoundExceeded { g, bound });
    }
    Ok(())
}

/// All `2^g g!` elements, in lexicographic order.
pub fn enumerate_group(g: usize) -> Result<Vec<SignedPermutation>> {
    enumerate_group_bounded(g, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_group_bounded(g: usize, bound: usize) -> Result<Vec<SignedPermutation>> {
    check_bound(g, bound)?;
    let mut out = Vec::new();
    for_each_element(g, |w| out.push(*w));
    Ok(out)
}

/// Minimal coset representatives by exhaustive filtering, lexicographic order.
pub fn min_coset_reps(g: usize, j: &SubsetJ, side: Side) -> Result<Vec<SignedPermutation>> {
    check_bound(g, DEFAULT_ENUMERATION_BOUND)?;
    if j.rank() != g {
        return Err(Error::RankMismatch(g, j.rank()));
    }
    let mut out = Vec::new();
    for_each_element(g, |w| {
        let keep = match side {
            Side::Right => w.is_min_right(j),
            Side::Left => w.is_min_left(j),
        };
        if keep {
            out.push(*w);
        }
    });
    Ok(out)
}

/// `W^I` built directly: an element with `w(1) < ... < w(g)` is fixed by the
/// set `{w(1), ..., w(g)}`, which takes one value from each pair
/// `{a, 2g+1-a}`. Lexicographic order.
pub fn w_i_reps(g: usize) -> Vec<SignedPermutation> {
    let n = 2 * g;
    let mut out: Vec<SignedPermutation> = (0u32..1 << g)
        .map(|mask| {
            let mut lower: Vec<usize> = (1..=g)
                .map(|a| if mask & (1 << (a - 1)) != 0 { n + 1 - a } else { a })
                .collect();
            lower.sort_unstable();
            let mut w = SignedPermutation::identity(g);
            for (i, &v) in lower.iter().enumerate() {
                w.images[i] = v as u8;
                w.images[n - 1 - i] = (n + 1 - v) as u8;
            }
            w
        })
        .collect();
    out.sort_unstable();
    out
}

/// `^w J = {i : w s_j w^{-1} = s_i for some j in J}`. Conjugates that are not
/// simple reflections, and conjugates equal to `s_g`, are omitted.
pub fn twisted_parabolic(w: &SignedPermutation, j: &SubsetJ) -> SubsetJ {
    let g = w.rank();
    let mut out = SubsetJ::empty(g);
    for jj in j.iter() {
        if let Some(i) = w.conjugate_simple(jj) {
            if i < g {
                out.bits |= 1 << i;
            }
        }
    }
    out
}

/// The parabolic subgroup `W_J` generated by `{s_j : j in J}`, sorted.
pub fn parabolic_subgroup(j: &SubsetJ) -> Vec<SignedPermutation> {
    let g = j.rank();
    let gens: Vec<SignedPermutation> = j
        .iter()
        .map(|i| SignedPermutation::simple_reflection(g, i).expect("valid index"))
        .collect();
    let id = SignedPermutation::identity(g);
    let mut seen: HashSet<SignedPermutation> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(u) = queue.pop_front() {
        for s in &gens {
            let next = u.mul(s);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// The double coset `W_J w W_K`, sorted.
pub fn double_coset(left: &SubsetJ, w: &SignedPermutation, right: &SubsetJ) -> Vec<SignedPermutation> {
    let wl = parabolic_subgroup(left);
    let wr = parabolic_subgroup(right);
    let set: BTreeSet<SignedPermutation> = wl
        .iter()
        .flat_map(|a| wr.iter().map(move |b| a.mul(w).mul(b)))
        .collect();
    set.into_iter().collect()
}
