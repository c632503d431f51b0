//! The parabolic quotient `W_Theta \ W` of right cosets.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use thiserror::Error;

use crate::rootsys::{ElementId, WeylGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("generator index {index} out of range 1..={rank}")]
    OutOfRange { index: usize, rank: usize },
    #[error("cannot parse theta {0:?}: expected \"none\", \"all\" or comma-separated generator indices")]
    Syntax(String),
}

/// A subset of the simple roots, stored as sorted 0-based generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ThetaSubset {
    indices: Vec<usize>,
}

impl ThetaSubset {
    pub fn empty() -> Self {
        ThetaSubset::default()
    }

    pub fn all(rank: usize) -> Self {
        ThetaSubset {
            indices: (0..rank).collect(),
        }
    }

    /// From 0-based generator indices.
    pub fn new(mut indices: Vec<usize>, rank: usize) -> Result<Self, ThetaError> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= rank) {
            return Err(ThetaError::OutOfRange { index: bad + 1, rank });
        }
        Ok(ThetaSubset { indices })
    }

    /// Parses `none`, `all`, or a comma-separated list of 1-based indices.
    pub fn parse(s: &str, rank: usize) -> Result<Self, ThetaError> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "none" | "" => return Ok(Self::empty()),
            "all" => return Ok(Self::all(rank)),
            _ => {}
        }
        let mut indices = Vec::new();
        for part in s.split(',') {
            let k: usize = part.trim().parse().map_err(|_| ThetaError::Syntax(s.to_string()))?;
            if k == 0 || k > rank {
                return Err(ThetaError::OutOfRange { index: k, rank });
            }
            indices.push(k - 1);
        }
        Self::new(indices, rank)
    }

    pub fn contains(&self, s: usize) -> bool {
        self.indices.binary_search(&s).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// 1-based labels, as used on the command line and in exported files.
    pub fn labels(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }
}

/// Canonical text: `none` or the 1-based list, e.g. `1,3`.
impl fmt::Display for ThetaSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return f.write_str("none");
        }
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        f.write_str(&labels.join(","))
    }
}

/// Index of a coset in the deterministic coset order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetId(pub u32);

impl CosetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Effect of right multiplication by a simple reflection on a coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetAction {
    Equal,
    Up(CosetId),
    Down(CosetId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coset {
    /// Shortest representative `w_C`.
    pub min: ElementId,
    /// Longest representative `w^C = w_Theta w_C`.
    pub max: ElementId,
    pub max_length: u32,
}

/// Which descent to pick when several are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DescentChoice {
    #[default]
    Smallest,
    Largest,
}

/// The right cosets `W_Theta w`, indexed by `(l(w^C), ShortLex(w^C))`.
///
/// This total order refines the coset order, and the cosets sharing a value
/// of `l(w^C)` occupy a contiguous index range (a layer).
#[derive(Debug)]
pub struct ParabolicQuotient {
    group: Arc<WeylGroup>,
    theta: ThetaSubset,
    cosets: Vec<Coset>,
    member: Vec<CosetId>,
    w_theta: ElementId,
    parabolic: Vec<ElementId>,
    actions: Vec<CosetAction>,
    layers: Vec<Range<usize>>,
}

impl ParabolicQuotient {
    pub fn new(group: Arc<WeylGroup>, theta: ThetaSubset) -> Self {
        let g = &*group;
        let rank = g.rank();
        assert!(theta.indices().iter().all(|&s| s < rank), "theta out of range");

        let min_rep = |mut u: ElementId| {
            while let Some(&s) = theta.indices().iter().find(|&&s| g.is_left_descent(u, s)) {
                u = g.left_mul(u, s);
            }
            u
        };
        let mins: Vec<ElementId> = g.elements().map(min_rep).collect();

        // W_Theta is the coset of the identity.
        let parabolic: Vec<ElementId> = g.elements().filter(|w| mins[w.index()] == ElementId::IDENTITY).collect();
        let w_theta = *parabolic.iter().max_by_key(|w| g.length(**w)).unwrap();

        let mut reps: Vec<ElementId> = mins.clone();
        reps.sort_unstable();
        reps.dedup();
        let mut cosets: Vec<Coset> = reps
            .iter()
            .map(|&m| {
                let max = g.mul(w_theta, m);
                assert_eq!(g.length(max), g.length(w_theta) + g.length(m), "w^C = w_Theta w_C is not length-additive");
                Coset {
                    min: m,
                    max,
                    max_length: g.length(max),
                }
            })
            .collect();
        // element order is (length, ShortLex), so this is the coset order
        cosets.sort_unstable_by_key(|c| c.max);

        let mut coset_of_min = vec![u32::MAX; g.order()];
        for (i, c) in cosets.iter().enumerate() {
            coset_of_min[c.min.index()] = i as u32;
        }
        let member: Vec<CosetId> = mins.iter().map(|m| CosetId(coset_of_min[m.index()])).collect();

        let mut actions = Vec::with_capacity(cosets.len() * rank);
        for (i, c) in cosets.iter().enumerate() {
            for s in 0..rank {
                let u = g.right_mul(c.max, s);
                let target = member[u.index()];
                let action = if target.index() == i {
                    CosetAction::Equal
                } else {
                    assert_eq!(u, cosets[target.index()].max, "w^C s must be the longest representative of C s");
                    if g.length(u) > c.max_length {
                        CosetAction::Up(target)
                    } else {
                        CosetAction::Down(target)
                    }
                };
                actions.push(action);
            }
        }

        let mut layers: Vec<Range<usize>> = Vec::new();
        let mut start = 0;
        for i in 1..=cosets.len() {
            if i == cosets.len() || cosets[i].max_length != cosets[start].max_length {
                layers.push(start..i);
                start = i;
            }
        }

        ParabolicQuotient {
            group,
            theta,
            cosets,
            member,
            w_theta,
            parabolic,
            actions,
            layers,
        }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn theta(&self) -> &ThetaSubset {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn cosets(&self) -> impl DoubleEndedIterator<Item = CosetId> + ExactSizeIterator {
        (0..self.cosets.len() as u32).map(CosetId)
    }

    pub fn coset(&self, c: CosetId) -> &Coset {
        &self.cosets[c.index()]
    }

    pub fn min_rep(&self, c: CosetId) -> ElementId {
        self.cosets[c.index()].min
    }

    pub fn max_rep(&self, c: CosetId) -> ElementId {
        self.cosets[c.index()].max
    }

    pub fn max_length(&self, c: CosetId) -> u32 {
        self.cosets[c.index()].max_length
    }

    pub fn member_coset(&self, w: ElementId) -> CosetId {
        self.member[w.index()]
    }

    /// Longest element of `W_Theta`.
    pub fn w_theta(&self) -> ElementId {
        self.w_theta
    }

    /// Elements of `W_Theta`, in element order.
    pub fn parabolic_elements(&self) -> &[ElementId] {
        &self.parabolic
    }

    /// The coset `W_Theta` itself, the unique minimum of the coset order.
    pub fn base_coset(&self) -> CosetId {
        CosetId(0)
    }

    /// Cosets grouped by `l(w^C)`, in increasing order.
    pub fn layers(&self) -> &[Range<usize>] {
        &self.layers
    }

    #[inline]
    pub fn action(&self, c: CosetId, s: usize) -> CosetAction {
        self.actions[c.index() * self.group.rank() + s]
    }

    /// Coset order: Bruhat order on longest representatives.
    pub fn coset_leq(&self, c: CosetId, d: CosetId) -> bool {
        self.group.bruhat_leq(self.max_rep(c), self.max_rep(d))
    }

    /// A generator `s` with `C s < C`, or `None` for the base coset.
    pub fn descent_generator(&self, c: CosetId, choice: DescentChoice) -> Option<usize> {
        let is_down = |&s: &usize| matches!(self.action(c, s), CosetAction::Down(_));
        let rank = self.group.rank();
        match choice {
            DescentChoice::Smallest => (0..rank).find(is_down),
            DescentChoice::Largest => (0..rank).rev().find(is_down),
        }
    }

    /// The coset `C w_0` (right cosets are stable under right multiplication).
    pub fn times_longest(&self, c: CosetId) -> CosetId {
        let g = &self.group;
        self.member_coset(g.mul(self.max_rep(c), g.longest_element()))
    }
}
