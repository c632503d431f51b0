//! The layer-by-layer recursion producing the Whittaker and generalized Verma
//! Kazhdan-Lusztig tables, and the multiplicity matrices derived from them.

use std::sync::Arc;

use thiserror::Error;

use crate::exec::{self, Parallelism};
use crate::heckemod::{t_alpha, t_alpha_empty, Basis, HeckeError, ModuleElement};
use crate::laurent::{ArithmeticError, LaurentPoly};
use crate::quotient::{CosetAction, CosetId, DescentChoice, ParabolicQuotient, ThetaSubset};
use crate::rootsys::WeylGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KlError {
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error("recursion failed at coset {coset} with generator s{generator}: {detail}")]
    RecursionFailure {
        coset: u32,
        /// 1-based generator label.
        generator: usize,
        detail: String,
    },
    #[error("multiplicities need a Whittaker table, got a {0} table")]
    WrongKind(TableKind),
    #[error("lambda is not unitriangular at ({c}, {d})")]
    NotUnitriangular { c: u32, d: u32 },
}

impl From<HeckeError> for KlError {
    fn from(e: HeckeError) -> Self {
        match e {
            HeckeError::Arithmetic(a) => KlError::Arithmetic(a),
            other => panic!("internal basis mismatch: {other}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    Whittaker,
    GeneralizedVerma,
}

impl std::fmt::Display for TableKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TableKind::Whittaker => "whittaker",
            TableKind::GeneralizedVerma => "gverma",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KlOptions {
    pub descent: DescentChoice,
    pub parallelism: Parallelism,
}

impl KlOptions {
    pub fn sequential() -> Self {
        KlOptions {
            parallelism: Parallelism::Sequential,
            ..Self::default()
        }
    }

    pub fn with_descent(mut self, descent: DescentChoice) -> Self {
        self.descent = descent;
        self
    }
}

/// How `phi(C)` was obtained: `T_s(phi(source)) = phi(C) + sum c_D phi(D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionStep {
    pub generator: usize,
    pub source: CosetId,
    /// `(D, c_D)` in the order the corrections were applied.
    pub corrections: Vec<(CosetId, i64)>,
}

/// A sealed table of polynomials `P(C, D)`, stored as the rows `phi(C)` in
/// the δ-basis.
#[derive(Debug, Clone)]
pub struct KlTable {
    quotient: Arc<ParabolicQuotient>,
    kind: TableKind,
    rows: Vec<ModuleElement>,
    steps: Vec<Option<RecursionStep>>,
}

impl KlTable {
    /// Assembles a table from externally supplied rows, e.g. after parsing.
    /// No recursion certificates are attached.
    pub fn from_rows(quotient: Arc<ParabolicQuotient>, kind: TableKind, rows: Vec<ModuleElement>) -> Self {
        assert_eq!(rows.len(), quotient.len(), "one row per coset");
        assert!(rows.iter().all(|r| r.basis() == Basis::Delta));
        let steps = vec![None; rows.len()];
        KlTable {
            quotient,
            kind,
            rows,
            steps,
        }
    }

    pub fn quotient(&self) -> &Arc<ParabolicQuotient> {
        &self.quotient
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `phi(C)` in the δ-basis.
    pub fn phi(&self, c: CosetId) -> &ModuleElement {
        &self.rows[c.index()]
    }

    pub fn get(&self, c: CosetId, d: CosetId) -> Option<&LaurentPoly> {
        self.rows[c.index()].get(d)
    }

    pub fn poly(&self, c: CosetId, d: CosetId) -> LaurentPoly {
        self.rows[c.index()].coeff(d)
    }

    /// All nonzero entries, by row and then by column.
    pub fn entries(&self) -> impl Iterator<Item = (CosetId, CosetId, &LaurentPoly)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(c, row)| row.terms().map(move |(d, p)| (CosetId(c as u32), d, p)))
    }

    pub fn nonzero_count(&self) -> usize {
        self.rows.iter().map(ModuleElement::len).sum()
    }

    pub fn step(&self, c: CosetId) -> Option<&RecursionStep> {
        self.steps[c.index()].as_ref()
    }

    /// Recursion coefficients `c_D` that came out negative, as `(C, D, c_D)`.
    pub fn negative_corrections(&self) -> Vec<(CosetId, CosetId, i64)> {
        let mut out = Vec::new();
        for (c, step) in self.steps.iter().enumerate() {
            for &(d, k) in step.iter().flat_map(|s| s.corrections.iter()) {
                if k < 0 {
                    out.push((CosetId(c as u32), d, k));
                }
            }
        }
        out
    }

    /// Overwrites one entry. Used to build corrupted tables for negative
    /// controls.
    pub fn set_entry(&mut self, c: CosetId, d: CosetId, p: LaurentPoly) {
        let row = &mut self.rows[c.index()];
        let old = row.coeff(d);
        let delta = p.checked_sub(&old).expect("overflow in set_entry");
        row.add_term(d, &delta).expect("overflow in set_entry");
    }

    /// Same quotient shape, kind and entries.
    pub fn same_entries(&self, other: &KlTable) -> bool {
        self.kind == other.kind
            && self.quotient.group().cartan_type() == other.quotient.group().cartan_type()
            && self.quotient.theta() == other.quotient.theta()
            && self.rows == other.rows
    }
}

fn recursion_step(
    quotient: &ParabolicQuotient,
    kind: TableKind,
    descent: DescentChoice,
    rows: &[ModuleElement],
    c: CosetId,
) -> Result<(ModuleElement, Option<RecursionStep>), KlError> {
    let Some(s) = quotient.descent_generator(c, descent) else {
        return Ok((ModuleElement::basis_vector(Basis::Delta, c), None));
    };
    let source = match quotient.action(c, s) {
        CosetAction::Down(d) => d,
        other => unreachable!("descent generator gave {other:?}"),
    };
    let mut e = match kind {
        TableKind::Whittaker => t_alpha(quotient, &rows[source.index()], s)?,
        TableKind::GeneralizedVerma => t_alpha_empty(quotient, &rows[source.index()], s)?,
    };

    let fail = |detail: String| KlError::RecursionFailure {
        coset: c.0,
        generator: s + 1,
        detail,
    };
    let mut corrections = Vec::new();
    let mut bound = None;
    while let Some((d, k)) = e.last_constant_term_below(bound, c) {
        if d > c {
            return Err(fail(format!("coefficient of coset {} has constant term {k} above the diagonal", d.0)));
        }
        e.add_scaled_assign(-k, 0, &rows[d.index()])?;
        corrections.push((d, k));
        bound = Some(d);
    }

    let diag = e.coeff(c);
    if !diag.is_one() {
        return Err(fail(format!("diagonal coefficient is {diag}, expected 1")));
    }
    if let Some((d, p)) = e.terms().find(|(d, p)| *d != c && !p.in_qzq()) {
        return Err(fail(format!("coefficient of coset {} is {p}, not in qZ[q]", d.0)));
    }
    Ok((
        e,
        Some(RecursionStep {
            generator: s,
            source,
            corrections,
        }),
    ))
}

fn compute(quotient: &Arc<ParabolicQuotient>, kind: TableKind, options: KlOptions) -> Result<KlTable, KlError> {
    let n = quotient.len();
    let mut rows: Vec<ModuleElement> = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n);
    for layer in quotient.layers() {
        let done = &rows;
        let results = exec::map_range(options.parallelism, layer.len(), |k| {
            recursion_step(quotient, kind, options.descent, done, CosetId((layer.start + k) as u32))
        });
        for r in results {
            let (row, step) = r?;
            rows.push(row);
            steps.push(step);
        }
    }
    Ok(KlTable {
        quotient: quotient.clone(),
        kind,
        rows,
        steps,
    })
}

/// Whittaker Kazhdan-Lusztig polynomials `P(C, D)` of the quotient.
pub fn compute_whittaker_kl(quotient: &Arc<ParabolicQuotient>, options: KlOptions) -> Result<KlTable, KlError> {
    compute(quotient, TableKind::Whittaker, options)
}

/// Ordinary Kazhdan-Lusztig polynomials: the Whittaker table of the quotient
/// by the empty set. Coset indices coincide with element indices.
pub fn compute_ordinary_kl(group: &Arc<WeylGroup>, options: KlOptions) -> Result<KlTable, KlError> {
    let quotient = Arc::new(ParabolicQuotient::new(group.clone(), ThetaSubset::empty()));
    compute_whittaker_kl(&quotient, options)
}

/// Generalized Verma polynomials `P'(C, D)`, from the recursion driven by
/// the restricted operators `T_alpha^∅`.
pub fn compute_generalized_verma(quotient: &Arc<ParabolicQuotient>, options: KlOptions) -> Result<KlTable, KlError> {
    compute(quotient, TableKind::GeneralizedVerma, options)
}

/// `lambda(C, D) = P(C, D)(-1)` and its inverse `mu`, both lower unitriangular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityMatrix {
    n: usize,
    lambda: Vec<i64>,
    mu: Vec<i64>,
}

impl MultiplicityMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn lambda(&self, c: CosetId, d: CosetId) -> i64 {
        self.lambda[c.index() * self.n + d.index()]
    }

    pub fn mu(&self, c: CosetId, d: CosetId) -> i64 {
        self.mu[c.index() * self.n + d.index()]
    }

    /// Rebuilds the matrices from explicit entries, e.g. after parsing.
    pub fn from_dense(n: usize, lambda: Vec<i64>, mu: Vec<i64>) -> Self {
        assert_eq!(lambda.len(), n * n);
        assert_eq!(mu.len(), n * n);
        MultiplicityMatrix { n, lambda, mu }
    }

    /// Whether `lambda * mu` is exactly the identity.
    pub fn is_inverse_pair(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..=i {
                let mut acc: i128 = 0;
                for k in j..=i {
                    acc += self.lambda[i * n + k] as i128 * self.mu[k * n + j] as i128;
                }
                if acc != (i == j) as i128 {
                    return false;
                }
            }
        }
        true
    }
}

/// Multiplicity matrices of a Whittaker table.
pub fn multiplicities(table: &KlTable) -> Result<MultiplicityMatrix, KlError> {
    if table.kind() != TableKind::Whittaker {
        return Err(KlError::WrongKind(table.kind()));
    }
    let n = table.len();
    let mut lambda = vec![0i64; n * n];
    // sparse rows of lambda below the diagonal
    let mut below: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (c, d, p) in table.entries() {
        let v = p.eval_int(-1)?;
        let (i, j) = (c.index(), d.index());
        if j > i || (i == j && v != 1) {
            return Err(KlError::NotUnitriangular { c: c.0, d: d.0 });
        }
        lambda[i * n + j] = v;
        if j < i && v != 0 {
            below[i].push((j, v));
        }
    }
    for i in 0..n {
        if lambda[i * n + i] != 1 {
            return Err(KlError::NotUnitriangular { c: i as u32, d: i as u32 });
        }
    }

    // mu[i][j] = -sum_{j <= k < i} lambda[i][k] mu[k][j]
    let mut mu = vec![0i64; n * n];
    for i in 0..n {
        mu[i * n + i] = 1;
        for &(k, l) in &below[i] {
            for j in 0..=k {
                let m = mu[k * n + j];
                if m == 0 {
                    continue;
                }
                let t = l.checked_mul(m).ok_or(ArithmeticError::Overflow)?;
                let slot = &mut mu[i * n + j];
                *slot = slot.checked_sub(t).ok_or(ArithmeticError::Overflow)?;
            }
        }
    }
    Ok(MultiplicityMatrix { n, lambda, mu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heckemod::AntisphericalModule;
    use crate::rootsys::CartanDatum;

    fn group(t: &str) -> Arc<WeylGroup> {
        Arc::new(WeylGroup::enumerate(&CartanDatum::new(t.parse().unwrap())).unwrap())
    }

    fn quotient(t: &str, theta: &str) -> Arc<ParabolicQuotient> {
        let g = group(t);
        let theta = ThetaSubset::parse(theta, g.rank()).unwrap();
        Arc::new(ParabolicQuotient::new(g, theta))
    }

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn c(i: u32) -> CosetId {
        CosetId(i)
    }

    #[test]
    fn a1_ordinary() {
        let t = compute_ordinary_kl(&group("A1"), KlOptions::default()).unwrap();
        assert_eq!(t.poly(c(1), c(0)), poly("q"));
        assert_eq!(t.poly(c(1), c(1)), poly("1"));
        assert_eq!(t.step(c(1)).unwrap().corrections, vec![]);
    }

    #[test]
    fn a2_theta_1_whittaker() {
        let q = quotient("A2", "1");
        let t = compute_whittaker_kl(&q, KlOptions::default()).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.poly(c(1), c(0)), poly("q"));
        assert_eq!(t.poly(c(2), c(1)), poly("q"));
        assert!(t.poly(c(2), c(0)).is_zero());
        assert_eq!(t.nonzero_count(), 5);
    }

    #[test]
    fn a2_theta_1_generalized_verma() {
        let q = quotient("A2", "1");
        let t = compute_generalized_verma(&q, KlOptions::default()).unwrap();
        assert_eq!(t.poly(c(1), c(0)), poly("q"));
        assert_eq!(t.poly(c(2), c(1)), poly("q"));
        assert_eq!(t.poly(c(2), c(0)), poly("q^2"));
    }

    #[test]
    fn full_theta_is_a_single_coset() {
        for ty in ["A1", "A3", "B3", "C3", "G2"] {
            let q = quotient(ty, "all");
            for t in [
                compute_whittaker_kl(&q, KlOptions::default()).unwrap(),
                compute_generalized_verma(&q, KlOptions::default()).unwrap(),
            ] {
                assert_eq!(t.len(), 1);
                assert_eq!(t.poly(c(0), c(0)), LaurentPoly::one());
                assert_eq!(t.nonzero_count(), 1);
            }
        }
    }

    #[test]
    fn a2_ordinary_is_a_power_of_q() {
        let g = group("A2");
        let t = compute_ordinary_kl(&g, KlOptions::default()).unwrap();
        for w in g.elements() {
            for v in g.elements() {
                let expected = if g.bruhat_leq(v, w) {
                    LaurentPoly::monomial(1, (g.length(w) - g.length(v)) as i32)
                } else {
                    LaurentPoly::zero()
                };
                assert_eq!(t.poly(c(w.0), c(v.0)), expected);
            }
        }
    }

    #[test]
    fn empty_theta_gverma_matches_ordinary() {
        let g = group("B3");
        let q = Arc::new(ParabolicQuotient::new(g.clone(), ThetaSubset::empty()));
        let a = compute_ordinary_kl(&g, KlOptions::default()).unwrap();
        let b = compute_generalized_verma(&q, KlOptions::default()).unwrap();
        assert!(a.entries().eq(b.entries()));
    }

    #[test]
    fn rows_are_self_dual() {
        for (ty, theta) in [("A3", "2"), ("B3", "1"), ("G2", "none"), ("C3", "1,2")] {
            let q = quotient(ty, theta);
            let t = compute_whittaker_kl(&q, KlOptions::default()).unwrap();
            let module = AntisphericalModule::new(q.clone());
            for x in q.cosets() {
                assert!(module.is_self_dual(t.phi(x)).unwrap(), "{ty} {theta} coset {x:?}");
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let q = quotient("B3", "2");
        let a = compute_whittaker_kl(&q, KlOptions::sequential()).unwrap();
        let b = compute_whittaker_kl(&q, KlOptions::default()).unwrap();
        assert!(a.same_entries(&b));
    }

    #[test]
    fn descent_choice_does_not_matter() {
        for (ty, theta) in [("A3", "none"), ("B3", "3"), ("G2", "1")] {
            let q = quotient(ty, theta);
            for kind in [TableKind::Whittaker, TableKind::GeneralizedVerma] {
                let a = compute(&q, kind, KlOptions::default()).unwrap();
                let b = compute(&q, kind, KlOptions::default().with_descent(DescentChoice::Largest)).unwrap();
                assert!(a.same_entries(&b), "{ty} {theta} {kind}");
            }
        }
    }

    #[test]
    fn multiplicities_a2_theta_1() {
        let q = quotient("A2", "1");
        let t = compute_whittaker_kl(&q, KlOptions::default()).unwrap();
        let m = multiplicities(&t).unwrap();
        assert_eq!(m.lambda(c(1), c(0)), -1);
        assert_eq!(m.lambda(c(2), c(1)), -1);
        assert_eq!(m.lambda(c(2), c(0)), 0);
        assert_eq!(m.mu(c(1), c(0)), 1);
        assert_eq!(m.mu(c(2), c(1)), 1);
        assert_eq!(m.mu(c(2), c(0)), 1);
        assert!(m.is_inverse_pair());
    }

    #[test]
    fn multiplicities_of_trivial_tables() {
        let q = quotient("B2", "all");
        let m = multiplicities(&compute_whittaker_kl(&q, KlOptions::default()).unwrap()).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.mu(c(0), c(0)), 1);

        let q = quotient("A3", "1");
        let identity = KlTable::from_rows(
            q.clone(),
            TableKind::Whittaker,
            q.cosets().map(|x| ModuleElement::basis_vector(Basis::Delta, x)).collect(),
        );
        let m = multiplicities(&identity).unwrap();
        for x in q.cosets() {
            for y in q.cosets() {
                assert_eq!(m.mu(x, y), (x == y) as i64);
            }
        }
    }

    #[test]
    fn multiplicities_reject_gverma() {
        let q = quotient("A2", "1");
        let t = compute_generalized_verma(&q, KlOptions::default()).unwrap();
        assert_eq!(multiplicities(&t), Err(KlError::WrongKind(TableKind::GeneralizedVerma)));
    }

    #[test]
    fn set_entry_overwrites() {
        let q = quotient("A2", "1");
        let mut t = compute_whittaker_kl(&q, KlOptions::default()).unwrap();
        t.set_entry(c(2), c(0), poly("q^2"));
        assert_eq!(t.poly(c(2), c(0)), poly("q^2"));
        t.set_entry(c(2), c(0), LaurentPoly::zero());
        assert!(t.get(c(2), c(0)).is_none());
    }
}
