//! Finite crystallographic root systems and their Weyl groups.
//!
//! A [`CartanDatum`] is built from a type letter and rank using Bourbaki node
//! numbering. [`WeylGroup::enumerate`] realizes the group as signed
//! permutations of the root set: every element is keyed by the images of the
//! simple roots, and elements are indexed in ShortLex order of their
//! lexicographically smallest reduced words, so index 0 is the identity and
//! the last index is the longest element.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Largest rank any supported type can have (E8).
pub const MAX_RANK: usize = 8;

/// Groups larger than this are refused by [`WeylGroup::enumerate`]. E7 and E8
/// have valid Cartan data but their tables would not fit in memory.
pub const MAX_ENUMERATED_ORDER: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("cannot parse Cartan type {0:?}: expected a letter A-G followed by a decimal rank, e.g. \"B3\"")]
    Syntax(String),
    #[error("invalid Cartan type {letter}{rank}: {constraint}")]
    InvalidType {
        letter: char,
        rank: usize,
        constraint: &'static str,
    },
    #[error("Weyl group of {0} has order {1}, above the enumeration limit of {MAX_ENUMERATED_ORDER}")]
    GroupTooLarge(CartanType, u64),
    #[error("internal consistency failure while enumerating {0}: {1}")]
    Inconsistent(CartanType, String),
}

/// Family letter of a finite irreducible root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A validated (family, rank) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self, CartanError> {
        let constraint = match family {
            Family::A if rank < 1 => Some("type A requires rank n >= 1"),
            Family::B if rank < 2 => Some("type B requires rank n >= 2"),
            Family::C if rank < 2 => Some("type C requires rank n >= 2"),
            Family::D if rank < 4 => Some("type D requires rank n >= 4"),
            Family::E if !(6..=8).contains(&rank) => Some("type E exists only in ranks 6, 7, 8"),
            Family::F if rank != 4 => Some("type F exists only in rank 4"),
            Family::G if rank != 2 => Some("type G exists only in rank 2"),
            _ if rank > MAX_RANK => Some("rank above 8 is not supported"),
            _ => None,
        };
        match constraint {
            Some(constraint) => Err(CartanError::InvalidType {
                letter: family.letter(),
                rank,
                constraint,
            }),
            None => Ok(CartanType { family, rank }),
        }
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> usize {
        self.rank
    }

    /// Number of positive roots, i.e. the length of the longest element.
    pub fn positive_root_count(self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    /// Order of the Weyl group.
    pub fn group_order(self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u64 << n) * fact(n),
            Family::D => (1u64 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = CartanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| CartanError::Syntax(s.to_string()))?;
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CartanError::Syntax(s.to_string()));
        }
        let rank: usize = digits.parse().map_err(|_| CartanError::Syntax(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

/// Cartan type together with its Cartan matrix.
///
/// Convention: `a[i][j] = <alpha_i, alpha_j^vee> = 2(alpha_i, alpha_j) / (alpha_j, alpha_j)`,
/// so the simple reflection `s_j` sends `sum c_i alpha_i` to itself minus
/// `(sum_i c_i a[i][j]) alpha_j`. With this convention G2 (alpha_1 short) is
/// `[[2, -1], [-3, 2]]` and B2 (alpha_2 short) is `[[2, -2], [-1, 2]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    cartan_type: CartanType,
    matrix: Vec<Vec<i32>>,
}

impl CartanDatum {
    pub fn new(cartan_type: CartanType) -> Self {
        let n = cartan_type.rank();
        let mut a = vec![vec![0i32; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        // (i, j, a_ij, a_ji) with 1-based Bourbaki labels.
        let mut bonds: Vec<(usize, usize, i32, i32)> = Vec::new();
        let chain = |bonds: &mut Vec<_>, upto: usize| {
            for i in 1..upto {
                bonds.push((i, i + 1, -1, -1));
            }
        };
        match cartan_type.family() {
            Family::A => chain(&mut bonds, n),
            Family::B => {
                chain(&mut bonds, n - 1);
                // alpha_n short
                bonds.push((n - 1, n, -2, -1));
            }
            Family::C => {
                chain(&mut bonds, n - 1);
                // alpha_n long
                bonds.push((n - 1, n, -1, -2));
            }
            Family::D => {
                chain(&mut bonds, n - 1);
                bonds.push((n - 2, n, -1, -1));
            }
            Family::E => {
                bonds.push((1, 3, -1, -1));
                bonds.push((2, 4, -1, -1));
                for i in 3..n {
                    bonds.push((i, i + 1, -1, -1));
                }
            }
            Family::F => {
                bonds.push((1, 2, -1, -1));
                // alpha_1, alpha_2 long; alpha_3, alpha_4 short
                bonds.push((2, 3, -2, -1));
                bonds.push((3, 4, -1, -1));
            }
            Family::G => {
                // alpha_1 short, alpha_2 long
                bonds.push((1, 2, -1, -3));
            }
        }
        for (i, j, aij, aji) in bonds {
            a[i - 1][j - 1] = aij;
            a[j - 1][i - 1] = aji;
        }
        CartanDatum {
            cartan_type,
            matrix: a,
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank()
    }

    pub fn matrix(&self) -> &[Vec<i32>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i32 {
        self.matrix[i][j]
    }

    pub fn positive_root_count(&self) -> usize {
        self.cartan_type.positive_root_count()
    }
}

/// Builds the Cartan datum for a type letter and rank.
pub fn build_root_system(letter: char, rank: usize) -> Result<CartanDatum, CartanError> {
    let family = Family::from_letter(letter).ok_or_else(|| CartanError::Syntax(format!("{letter}{rank}")))?;
    Ok(CartanDatum::new(CartanType::new(family, rank)?))
}

type RootVec = [i16; MAX_RANK];

/// The full root set, with every simple reflection as a permutation of it.
#[derive(Debug, Clone)]
pub struct RootSystem {
    rank: usize,
    roots: Vec<RootVec>,
    lookup: HashMap<RootVec, u16>,
    reflection: Vec<Vec<u16>>,
    positive: Vec<bool>,
}

impl RootSystem {
    pub fn new(datum: &CartanDatum) -> Self {
        let rank = datum.rank();
        let reflect = |root: &RootVec, j: usize| -> RootVec {
            let pairing: i32 = (0..rank).map(|i| root[i] as i32 * datum.entry(i, j)).sum();
            let mut out = *root;
            out[j] -= pairing as i16;
            out
        };

        let mut roots: Vec<RootVec> = Vec::new();
        let mut lookup = HashMap::new();
        for j in 0..rank {
            let mut r = [0i16; MAX_RANK];
            r[j] = 1;
            lookup.insert(r, roots.len() as u16);
            roots.push(r);
        }
        let mut cursor = 0;
        while cursor < roots.len() {
            let root = roots[cursor];
            for j in 0..rank {
                let image = reflect(&root, j);
                if let std::collections::hash_map::Entry::Vacant(e) = lookup.entry(image) {
                    e.insert(roots.len() as u16);
                    roots.push(image);
                }
            }
            cursor += 1;
        }
        let reflection = (0..rank)
            .map(|j| roots.iter().map(|r| lookup[&reflect(r, j)]).collect())
            .collect();
        let positive = roots.iter().map(|r| r[..rank].iter().all(|&c| c >= 0)).collect();
        RootSystem {
            rank,
            roots,
            lookup,
            reflection,
            positive,
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.positive.iter().filter(|&&p| p).count()
    }

    /// Simple-root coordinates of root `r`.
    pub fn coords(&self, r: usize) -> &[i16] {
        &self.roots[r][..self.rank]
    }

    pub fn is_positive(&self, r: usize) -> bool {
        self.positive[r]
    }

    fn index_of(&self, v: &RootVec) -> Option<u16> {
        self.lookup.get(v).copied()
    }
}

/// Handle of a group element. Index 0 is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementId(pub u32);

impl ElementId {
    pub const IDENTITY: ElementId = ElementId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Key of an element: the root indices of the images of the simple roots.
type ImageKey = [u16; MAX_RANK];

/// A finite Weyl group, fully enumerated.
///
/// Immutable after [`WeylGroup::enumerate`] apart from the Bruhat memo, whose
/// rows are filled at most once through [`OnceLock`]; concurrent queries are
/// safe.
pub struct WeylGroup {
    datum: CartanDatum,
    roots: RootSystem,
    images: Vec<ImageKey>,
    by_image: HashMap<ImageKey, u32>,
    lengths: Vec<u32>,
    right: Vec<u32>,
    left: Vec<u32>,
    bruhat_rows: Vec<OnceLock<FixedBitSet>>,
}

impl fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeylGroup")
            .field("type", &self.datum.cartan_type())
            .field("order", &self.order())
            .finish()
    }
}

impl WeylGroup {
    /// Enumerates `W` by closure from the identity under the simple
    /// reflections acting on the root set.
    pub fn enumerate(datum: &CartanDatum) -> Result<Self, CartanError> {
        let ct = datum.cartan_type();
        let expected = ct.group_order();
        if expected > MAX_ENUMERATED_ORDER {
            return Err(CartanError::GroupTooLarge(ct, expected));
        }
        let rank = datum.rank();
        let roots = RootSystem::new(datum);
        if roots.positive_count() != ct.positive_root_count() || roots.len() != 2 * ct.positive_root_count() {
            return Err(CartanError::Inconsistent(
                ct,
                format!("root closure produced {} roots", roots.len()),
            ));
        }

        // Breadth-first closure under left multiplication: (s w)(alpha_i) = s(w(alpha_i)).
        let mut identity = [0u16; MAX_RANK];
        for (i, slot) in identity.iter_mut().enumerate().take(rank) {
            *slot = i as u16;
        }
        let mut raw: Vec<ImageKey> = vec![identity];
        let mut raw_index: HashMap<ImageKey, u32> = HashMap::from([(identity, 0)]);
        let mut raw_left: Vec<u32> = Vec::new();
        let mut cursor = 0;
        while cursor < raw.len() {
            let w = raw[cursor];
            for s in 0..rank {
                let mut img = w;
                for slot in img.iter_mut().take(rank) {
                    *slot = roots.reflection[s][*slot as usize];
                }
                let next = raw.len() as u32;
                let id = *raw_index.entry(img).or_insert(next);
                if id == next {
                    raw.push(img);
                    if raw.len() as u64 > expected {
                        return Err(CartanError::Inconsistent(
                            ct,
                            format!("closure exceeded the group order {expected}"),
                        ));
                    }
                }
                raw_left.push(id);
            }
            cursor += 1;
        }
        if raw.len() as u64 != expected {
            return Err(CartanError::Inconsistent(
                ct,
                format!("closure found {} elements, expected {expected}", raw.len()),
            ));
        }

        // Length = number of positive roots sent to negative roots.
        let positive_roots: Vec<usize> = (0..roots.len()).filter(|&r| roots.is_positive(r)).collect();
        let raw_len: Vec<u32> = raw
            .iter()
            .map(|img| {
                positive_roots
                    .iter()
                    .filter(|&&r| {
                        let mut v = [0i32; MAX_RANK];
                        for (i, &c) in roots.coords(r).iter().enumerate() {
                            if c != 0 {
                                let image = roots.coords(img[i] as usize);
                                for k in 0..rank {
                                    v[k] += c as i32 * image[k] as i32;
                                }
                            }
                        }
                        v[..rank].iter().any(|&x| x < 0)
                    })
                    .count() as u32
            })
            .collect();

        // ShortLex order: the normal form of u is (min left descent s) followed
        // by the normal form of s u, so sorting a length layer by
        // (s, index of s u) orders it lexicographically.
        let max_len = ct.positive_root_count() as u32;
        let mut layers: Vec<Vec<u32>> = vec![Vec::new(); max_len as usize + 1];
        for (id, &l) in raw_len.iter().enumerate() {
            layers[l as usize].push(id as u32);
        }
        let mut new_of_raw = vec![u32::MAX; raw.len()];
        let mut order: Vec<u32> = Vec::with_capacity(raw.len());
        for layer in &layers {
            let mut keyed: Vec<((usize, u32), u32)> = Vec::with_capacity(layer.len());
            for &u in layer {
                if raw_len[u as usize] == 0 {
                    keyed.push(((0, 0), u));
                    continue;
                }
                let s = (0..rank)
                    .find(|&s| raw_len[raw_left[u as usize * rank + s] as usize] < raw_len[u as usize])
                    .ok_or_else(|| CartanError::Inconsistent(ct, "element without left descent".into()))?;
                let below = new_of_raw[raw_left[u as usize * rank + s] as usize];
                keyed.push(((s, below), u));
            }
            keyed.sort_unstable();
            for (_, u) in keyed {
                new_of_raw[u as usize] = order.len() as u32;
                order.push(u);
            }
        }

        let n = raw.len();
        let images: Vec<ImageKey> = order.iter().map(|&u| raw[u as usize]).collect();
        let lengths: Vec<u32> = order.iter().map(|&u| raw_len[u as usize]).collect();
        let by_image: HashMap<ImageKey, u32> = images.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
        let mut left = vec![0u32; n * rank];
        for (new, &u) in order.iter().enumerate() {
            for s in 0..rank {
                left[new * rank + s] = new_of_raw[raw_left[u as usize * rank + s] as usize];
            }
        }

        // Right multiplication: (w s_j)(alpha_i) = w(alpha_i) - a_ij w(alpha_j).
        let mut right = vec![0u32; n * rank];
        for (id, img) in images.iter().enumerate() {
            for j in 0..rank {
                let wj = roots.coords(img[j] as usize);
                let mut out = [0u16; MAX_RANK];
                for i in 0..rank {
                    let aij = datum.entry(i, j) as i16;
                    let mut v: RootVec = [0; MAX_RANK];
                    let wi = roots.coords(img[i] as usize);
                    for k in 0..rank {
                        v[k] = wi[k] - aij * wj[k];
                    }
                    out[i] = roots
                        .index_of(&v)
                        .ok_or_else(|| CartanError::Inconsistent(ct, "right multiplication left the root set".into()))?;
                }
                right[id * rank + j] = *by_image
                    .get(&out)
                    .ok_or_else(|| CartanError::Inconsistent(ct, "right multiplication left the group".into()))?;
            }
        }

        let group = WeylGroup {
            datum: datum.clone(),
            roots,
            images,
            by_image,
            lengths,
            right,
            left,
            bruhat_rows: (0..n).map(|_| OnceLock::new()).collect(),
        };
        group.check_length_steps()?;
        Ok(group)
    }

    fn check_length_steps(&self) -> Result<(), CartanError> {
        for w in self.elements() {
            for s in 0..self.rank() {
                for u in [self.right_mul(w, s), self.left_mul(w, s)] {
                    if self.length(u).abs_diff(self.length(w)) != 1 {
                        return Err(CartanError::Inconsistent(
                            self.cartan_type(),
                            format!("length of neighbour of element {} does not differ by one", w.0),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn roots(&self) -> &RootSystem {
        &self.roots
    }

    pub fn cartan_type(&self) -> CartanType {
        self.datum.cartan_type()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn order(&self) -> usize {
        self.lengths.len()
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = ElementId> + ExactSizeIterator {
        (0..self.order() as u32).map(ElementId)
    }

    pub fn length(&self, w: ElementId) -> u32 {
        self.lengths[w.index()]
    }

    pub fn longest_element(&self) -> ElementId {
        ElementId(self.order() as u32 - 1)
    }

    #[inline]
    pub fn right_mul(&self, w: ElementId, s: usize) -> ElementId {
        ElementId(self.right[w.index() * self.rank() + s])
    }

    #[inline]
    pub fn left_mul(&self, w: ElementId, s: usize) -> ElementId {
        ElementId(self.left[w.index() * self.rank() + s])
    }

    pub fn is_right_descent(&self, w: ElementId, s: usize) -> bool {
        self.length(self.right_mul(w, s)) < self.length(w)
    }

    pub fn is_left_descent(&self, w: ElementId, s: usize) -> bool {
        self.length(self.left_mul(w, s)) < self.length(w)
    }

    pub fn right_descents(&self, w: ElementId) -> Vec<usize> {
        (0..self.rank()).filter(|&s| self.is_right_descent(w, s)).collect()
    }

    pub fn left_descents(&self, w: ElementId) -> Vec<usize> {
        (0..self.rank()).filter(|&s| self.is_left_descent(w, s)).collect()
    }

    /// ShortLex normal form: the lexicographically smallest reduced word,
    /// with 0-based generator indices.
    pub fn reduced_word(&self, w: ElementId) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length(w) as usize);
        let mut cur = w;
        while cur != ElementId::IDENTITY {
            let s = (0..self.rank())
                .find(|&s| self.is_left_descent(cur, s))
                .expect("non-identity element has a left descent");
            word.push(s);
            cur = self.left_mul(cur, s);
        }
        word
    }

    /// Product of the generators in `word`, left to right.
    pub fn element_from_word(&self, word: &[usize]) -> ElementId {
        word.iter().fold(ElementId::IDENTITY, |w, &s| self.right_mul(w, s))
    }

    pub fn mul(&self, x: ElementId, y: ElementId) -> ElementId {
        self.reduced_word(y).into_iter().fold(x, |w, s| self.right_mul(w, s))
    }

    pub fn inverse(&self, w: ElementId) -> ElementId {
        self.reduced_word(w).into_iter().rev().fold(ElementId::IDENTITY, |u, s| self.right_mul(u, s))
    }

    /// Looks an element up by the root indices of the images of the simple roots.
    pub fn element_from_images(&self, images: &[u16]) -> Option<ElementId> {
        let mut key = [0u16; MAX_RANK];
        key[..images.len()].copy_from_slice(images);
        self.by_image.get(&key).map(|&i| ElementId(i))
    }

    pub fn simple_root_images(&self, w: ElementId) -> &[u16] {
        &self.images[w.index()][..self.rank()]
    }

    /// Order of `s t`.
    pub fn coxeter_exponent(&self, s: usize, t: usize) -> usize {
        let st = self.right_mul(self.left_mul(ElementId::IDENTITY, s), t);
        let mut cur = st;
        let mut m = 1;
        while cur != ElementId::IDENTITY {
            cur = self.mul(cur, st);
            m += 1;
        }
        m
    }

    /// Bruhat order `v <= w`.
    ///
    /// The lower interval of `w` is memoized as a bitset, built from the
    /// interval of `w s` for the last letter `s` of the ShortLex word of `w`:
    /// by the lifting property, `v <= w` iff `v <= w s` or `v s <= w s`.
    pub fn bruhat_leq(&self, v: ElementId, w: ElementId) -> bool {
        if v == w || v == ElementId::IDENTITY {
            return true;
        }
        if self.length(v) >= self.length(w) {
            return false;
        }
        self.lower_interval(w).contains(v.index())
    }

    /// All `v <= w`, as a bitset over element indices.
    pub fn lower_interval(&self, w: ElementId) -> &FixedBitSet {
        if let Some(row) = self.bruhat_rows[w.index()].get() {
            return row;
        }
        // Walk down a reduced word until a memoized row (or the identity).
        let mut chain = vec![w];
        let mut cur = w;
        while cur != ElementId::IDENTITY && self.bruhat_rows[cur.index()].get().is_none() {
            let s = self.last_descent(cur);
            cur = self.right_mul(cur, s);
            chain.push(cur);
        }
        for pair in chain.windows(2).rev() {
            let (upper, lower) = (pair[0], pair[1]);
            let base = self.row_or_identity(lower);
            let s = self.last_descent(upper);
            let mut row = base.clone();
            for v in base.ones() {
                row.insert(self.right_mul(ElementId(v as u32), s).index());
            }
            row.insert(upper.index());
            let _ = self.bruhat_rows[upper.index()].set(row);
        }
        self.row_or_identity(w)
    }

    fn row_or_identity(&self, w: ElementId) -> &FixedBitSet {
        self.bruhat_rows[w.index()].get_or_init(|| {
            debug_assert_eq!(w, ElementId::IDENTITY);
            let mut row = FixedBitSet::with_capacity(self.order());
            row.insert(0);
            row
        })
    }

    fn last_descent(&self, w: ElementId) -> usize {
        (0..self.rank())
            .rev()
            .find(|&s| self.is_right_descent(w, s))
            .expect("non-identity element has a right descent")
    }

    /// Decides `v <= w` by searching the subwords of the ShortLex word of
    /// `w` for a reduced word of `v`. Exponential in `l(w)`.
    pub fn bruhat_subword_oracle(&self, v: ElementId, w: ElementId) -> bool {
        let word = self.reduced_word(w);
        let target = self.length(v) as usize;
        let n = word.len();
        assert!(n < 32, "subword oracle is only meant for small groups");
        (0u32..(1u32 << n))
            .filter(|mask| mask.count_ones() as usize == target)
            .any(|mask| {
                let mut u = ElementId::IDENTITY;
                for (k, &s) in word.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        u = self.right_mul(u, s);
                    }
                }
                u == v
            })
    }
}

/// Enumerates the Weyl group of a Cartan datum.
pub fn enumerate_group(datum: &CartanDatum) -> Result<WeylGroup, CartanError> {
    WeylGroup::enumerate(datum)
}
