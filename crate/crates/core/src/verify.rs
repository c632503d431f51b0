//! Cross-checks of computed tables: structural invariants, self-duality,
//! independence of the descent choice, the recursion certificate, and the
//! identities tying Whittaker, generalized Verma and ordinary tables together.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::exec::{self, Parallelism};
use crate::heckemod::{t_alpha, t_alpha_empty, AntisphericalModule, Basis, ModuleElement};
use crate::klcore::{compute_generalized_verma, compute_ordinary_kl, KlError, KlOptions, KlTable, TableKind};
use crate::laurent::LaurentPoly;
use crate::quotient::{CosetAction, CosetId, DescentChoice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckName {
    Structural,
    SelfDuality,
    Uniqueness,
    Certificate,
    Duality,
    Inversion,
    Gverma,
}

impl CheckName {
    pub const ALL: [CheckName; 7] = [
        CheckName::Structural,
        CheckName::SelfDuality,
        CheckName::Uniqueness,
        CheckName::Certificate,
        CheckName::Duality,
        CheckName::Inversion,
        CheckName::Gverma,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Structural => "structural",
            CheckName::SelfDuality => "selfduality",
            CheckName::Uniqueness => "uniqueness",
            CheckName::Certificate => "certificate",
            CheckName::Duality => "duality",
            CheckName::Inversion => "inversion",
            CheckName::Gverma => "gverma",
        }
    }

    /// Parses `all` or a comma-separated list of check names.
    pub fn parse_list(s: &str) -> Result<Vec<CheckName>, String> {
        if s.trim() == "all" {
            return Ok(Self::ALL.to_vec());
        }
        let mut out: Vec<CheckName> = s.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// A failing entry: the coset pair, both sides of the identity and what went wrong.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub c: u32,
    pub d: u32,
    pub lhs: String,
    pub rhs: String,
    pub detail: String,
}

impl Counterexample {
    fn new(c: CosetId, d: CosetId, lhs: impl fmt::Display, rhs: impl fmt::Display, detail: impl Into<String>) -> Self {
        Counterexample {
            c: c.0,
            d: d.0,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub millis: u64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

fn timed<F: FnOnce() -> Option<Counterexample>>(f: F) -> CheckOutcome {
    let start = Instant::now();
    let counterexample = f();
    CheckOutcome {
        status: if counterexample.is_none() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        counterexample,
        millis: start.elapsed().as_millis() as u64,
    }
}

/// Outcome per check, serialized as a map from check name to outcome.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct VerifyReport {
    checks: BTreeMap<&'static str, CheckOutcome>,
}

impl VerifyReport {
    pub fn insert(&mut self, name: CheckName, outcome: CheckOutcome) {
        self.checks.insert(name.as_str(), outcome);
    }

    pub fn get(&self, name: CheckName) -> Option<&CheckOutcome> {
        self.checks.get(name.as_str())
    }

    pub fn all_passed(&self) -> bool {
        self.checks.values().all(CheckOutcome::passed)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &CheckOutcome)> {
        self.checks.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

/// First `Some` over the cosets, in coset order.
fn first_failure<F>(mode: Parallelism, n: usize, f: F) -> Option<Counterexample>
where
    F: Fn(CosetId) -> Option<Counterexample> + Sync + Send,
{
    exec::map_range(mode, n, |i| f(CosetId(i as u32))).into_iter().flatten().next()
}

/// First coset where two rows differ, reported as a counterexample.
fn row_mismatch(c: CosetId, got: &ModuleElement, expected: &ModuleElement, detail: &str) -> Option<Counterexample> {
    if got == expected {
        return None;
    }
    let mut keys: Vec<CosetId> = got.terms().map(|t| t.0).chain(expected.terms().map(|t| t.0)).collect();
    keys.sort_unstable();
    let d = keys.into_iter().find(|&d| got.coeff(d) != expected.coeff(d))?;
    Some(Counterexample::new(c, d, got.coeff(d), expected.coeff(d), detail))
}

fn format_row(x: &ModuleElement) -> String {
    let parts: Vec<String> = x.terms().map(|(d, p)| format!("{}: {p}", d.0)).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Triangularity, `P(C, D) in qZ[q]` off the diagonal, parity of exponents,
/// and (Whittaker tables only) nonnegativity.
pub fn check_structural(table: &KlTable, mode: Parallelism) -> CheckOutcome {
    let q = table.quotient();
    let whittaker = table.kind() == TableKind::Whittaker;
    timed(|| {
        first_failure(mode, table.len(), |c| {
            if table.poly(c, c) != LaurentPoly::one() {
                return Some(Counterexample::new(c, c, table.poly(c, c), 1, "diagonal entry is not 1"));
            }
            for (d, p) in table.phi(c).terms().filter(|t| t.0 != c) {
                let fail = |rhs: &str, detail: &str| Some(Counterexample::new(c, d, p, rhs, detail));
                if d > c || !q.coset_leq(d, c) {
                    return fail("0", "nonzero entry outside the coset order");
                }
                if !p.in_qzq() {
                    return fail("element of qZ[q]", "off-diagonal entry not in qZ[q]");
                }
                let parity = q.max_length(c) as i32 - q.max_length(d) as i32;
                if !p.parity_check(parity) {
                    return fail(&format!("exponents of parity {}", parity.rem_euclid(2)), "parity violation");
                }
                if whittaker && !p.has_nonnegative_coefficients() {
                    return fail("nonnegative coefficients", "negative coefficient");
                }
            }
            None
        })
    })
}

/// Every `phi(C)` is fixed by the bar involution of the antispherical module.
pub fn check_selfduality(table: &KlTable, module: &AntisphericalModule, mode: Parallelism) -> CheckOutcome {
    timed(|| {
        first_failure(mode, table.len(), |c| {
            let n = ModuleElement::from_terms(Basis::N, table.phi(c).terms().map(|(d, p)| (d, p.clone())));
            match module.bar(&n) {
                Ok(b) if b == n => None,
                Ok(b) => {
                    let d = row_mismatch(c, &b, &n, "").map(|x| x.d).unwrap_or(c.0);
                    Some(Counterexample::new(c, CosetId(d), format_row(&b), format_row(&n), "bar(phi(C)) differs from phi(C)"))
                }
                Err(e) => Some(Counterexample::new(c, c, "", "", format!("bar failed: {e}"))),
            }
        })
    })
}

/// Recomputing with the largest descent generator gives the same table.
pub fn check_uniqueness(table: &KlTable, options: KlOptions) -> CheckOutcome {
    timed(|| {
        let other = DescentChoice::Largest;
        let options = options.with_descent(other);
        let recomputed = match table.kind() {
            TableKind::Whittaker => crate::klcore::compute_whittaker_kl(table.quotient(), options),
            TableKind::GeneralizedVerma => compute_generalized_verma(table.quotient(), options),
        };
        let recomputed = match recomputed {
            Ok(t) => t,
            Err(e) => return Some(Counterexample::new(CosetId(0), CosetId(0), "", "", format!("recomputation failed: {e}"))),
        };
        table
            .quotient()
            .cosets()
            .find_map(|c| row_mismatch(c, recomputed.phi(c), table.phi(c), "largest-descent recursion disagrees"))
    })
}

/// `T_s(phi(C s)) = phi(C) + sum c_D phi(D)` with integer `c_D`, reconstructed
/// from the table alone and compared with the recorded corrections.
pub fn check_certificate(table: &KlTable, mode: Parallelism) -> CheckOutcome {
    let q = table.quotient();
    timed(|| {
        first_failure(mode, table.len(), |c| {
            let Some(s) = q.descent_generator(c, DescentChoice::Smallest) else {
                let base = ModuleElement::basis_vector(Basis::Delta, c);
                return row_mismatch(c, table.phi(c), &base, "base row is not δ_C");
            };
            let CosetAction::Down(source) = q.action(c, s) else {
                unreachable!()
            };
            let image = match table.kind() {
                TableKind::Whittaker => t_alpha(q, table.phi(source), s),
                TableKind::GeneralizedVerma => t_alpha_empty(q, table.phi(source), s),
            };
            let mut residual = image.expect("δ-basis rows");
            if residual.add_scaled_assign(-1, 0, table.phi(c)).is_err() {
                return Some(Counterexample::new(c, c, "", "", "overflow"));
            }
            let mut coefficients = Vec::new();
            loop {
                let last = residual.terms().next_back().map(|(d, p)| (d, p.clone()));
                let Some((d, p)) = last else { break };
                if p.min_exponent() != Some(0) || p.max_exponent() != Some(0) {
                    return Some(Counterexample::new(c, d, p, "integer", "residual coefficient is not an integer"));
                }
                let k = p.constant_term();
                if d == c {
                    return Some(Counterexample::new(c, d, 1 + k, 1, "coefficient of phi(C) is not 1"));
                }
                if residual.add_scaled_assign(-k, 0, table.phi(d)).is_err() {
                    return Some(Counterexample::new(c, d, "", "", "overflow"));
                }
                coefficients.push((d, k));
            }
            if let Some(step) = table.step(c) {
                if step.generator == s && step.corrections != coefficients {
                    let d = step.corrections.first().map(|x| x.0).unwrap_or(c);
                    return Some(Counterexample::new(
                        c,
                        d,
                        format!("{:?}", step.corrections),
                        format!("{coefficients:?}"),
                        "recorded corrections differ from reconstruction",
                    ));
                }
            }
            None
        })
    })
}

/// `P(C, D) = sum_{v in W_Theta} (-q)^{l(v)} P_ord(w_C, v w_D)`.
pub fn check_duality(whittaker: &KlTable, ordinary: &KlTable, mode: Parallelism) -> CheckOutcome {
    let q = whittaker.quotient();
    let g = q.group();
    timed(|| {
        first_failure(mode, whittaker.len(), |c| {
            let row = ordinary.phi(CosetId(q.min_rep(c).0));
            let mut rhs = ModuleElement::zero(Basis::Delta);
            for (u, p) in row.terms() {
                let u = crate::rootsys::ElementId(u.0);
                let d = q.member_coset(u);
                let k = g.length(u) - g.length(q.min_rep(d));
                let sign = if k.is_multiple_of(2) { p.clone() } else { -p };
                if rhs.add_term(d, &sign.shift(k as i32)).is_err() {
                    return Some(Counterexample::new(c, d, "", "", "overflow"));
                }
            }
            row_mismatch(c, whittaker.phi(c), &rhs, "duality formula mismatch")
        })
    })
}

/// `P' Q = 1` with `Q(C, D) = (-1)^{l(w^C) + l(w^D)} P(D w_0, C w_0)`.
pub fn check_inversion(whittaker: &KlTable, gverma: &KlTable, mode: Parallelism) -> CheckOutcome {
    let q = whittaker.quotient();
    let n = q.len();
    timed(|| {
        let mut columns: Vec<Vec<(CosetId, &LaurentPoly)>> = vec![Vec::new(); n];
        for (x, y, p) in whittaker.entries() {
            columns[y.index()].push((x, p));
        }
        first_failure(mode, n, |c| {
            let mut product = ModuleElement::zero(Basis::Delta);
            for (d, pd) in gverma.phi(c).terms() {
                // Q(D, E) = ± P(E w_0, D w_0)
                for &(x, p) in &columns[q.times_longest(d).index()] {
                    let e = q.times_longest(x);
                    let odd = (q.max_length(d) + q.max_length(e)) % 2 == 1;
                    let term = match pd.checked_mul(p) {
                        Ok(t) => t,
                        Err(_) => return Some(Counterexample::new(c, e, "", "", "overflow")),
                    };
                    let term = if odd { -&term } else { term };
                    if product.add_term(e, &term).is_err() {
                        return Some(Counterexample::new(c, e, "", "", "overflow"));
                    }
                }
            }
            let identity = ModuleElement::basis_vector(Basis::Delta, c);
            row_mismatch(c, &product, &identity, "(P' Q)(C, E) differs from the identity")
        })
    })
}

/// `P'(C, D) = P_ord(w^C, w^D)`.
pub fn check_gverma(gverma: &KlTable, ordinary: &KlTable, mode: Parallelism) -> CheckOutcome {
    let q = gverma.quotient();
    timed(|| {
        first_failure(mode, gverma.len(), |c| {
            let row = ordinary.phi(CosetId(q.max_rep(c).0));
            let expected = ModuleElement::from_terms(
                Basis::Delta,
                row.terms().filter_map(|(u, p)| {
                    let u = crate::rootsys::ElementId(u.0);
                    let d = q.member_coset(u);
                    (q.max_rep(d) == u).then(|| (d, p.clone()))
                }),
            );
            row_mismatch(c, gverma.phi(c), &expected, "generalized Verma entry differs from the ordinary polynomial")
        })
    })
}

/// Tables shared by the checks of one run, computed on demand.
pub struct CheckContext<'a> {
    pub whittaker: &'a KlTable,
    pub options: KlOptions,
    ordinary: Option<KlTable>,
    gverma: Option<KlTable>,
    module: Option<AntisphericalModule>,
}

impl<'a> CheckContext<'a> {
    pub fn new(whittaker: &'a KlTable, options: KlOptions) -> Self {
        CheckContext {
            whittaker,
            options,
            ordinary: None,
            gverma: None,
            module: None,
        }
    }

    /// Supplies an already computed ordinary table of the same group.
    pub fn with_ordinary(mut self, ordinary: KlTable) -> Self {
        self.ordinary = Some(ordinary);
        self
    }

    pub fn with_gverma(mut self, gverma: KlTable) -> Self {
        self.gverma = Some(gverma);
        self
    }

    fn ordinary(&mut self) -> Result<&KlTable, KlError> {
        if self.ordinary.is_none() {
            self.ordinary = Some(compute_ordinary_kl(self.whittaker.quotient().group(), self.options)?);
        }
        Ok(self.ordinary.as_ref().unwrap())
    }

    fn gverma(&mut self) -> Result<&KlTable, KlError> {
        if self.gverma.is_none() {
            self.gverma = Some(compute_generalized_verma(self.whittaker.quotient(), self.options)?);
        }
        Ok(self.gverma.as_ref().unwrap())
    }

    fn module(&mut self) -> &AntisphericalModule {
        let q = Arc::clone(self.whittaker.quotient());
        self.module.get_or_insert_with(|| AntisphericalModule::new(q))
    }

    pub fn run(&mut self, check: CheckName) -> Result<CheckOutcome, KlError> {
        let mode = self.options.parallelism;
        let w = self.whittaker;
        Ok(match check {
            CheckName::Structural => check_structural(w, mode),
            CheckName::SelfDuality => check_selfduality(w, self.module(), mode),
            CheckName::Uniqueness => check_uniqueness(w, self.options),
            CheckName::Certificate => check_certificate(w, mode),
            CheckName::Duality => check_duality(w, self.ordinary()?, mode),
            CheckName::Inversion => {
                self.gverma()?;
                check_inversion(w, self.gverma.as_ref().unwrap(), mode)
            }
            CheckName::Gverma => {
                self.gverma()?;
                self.ordinary()?;
                check_gverma(self.gverma.as_ref().unwrap(), self.ordinary.as_ref().unwrap(), mode)
            }
        })
    }
}

/// Runs the listed checks against a Whittaker table, computing the ordinary
/// and generalized Verma tables when a check needs them.
pub fn run_checks(whittaker: &KlTable, checks: &[CheckName], options: KlOptions) -> Result<VerifyReport, KlError> {
    let mut ctx = CheckContext::new(whittaker, options);
    let mut report = VerifyReport::default();
    for &check in checks {
        report.insert(check, ctx.run(check)?);
    }
    Ok(report)
}
