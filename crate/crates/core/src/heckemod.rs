//! The Hecke algebra of `(W, S)`, the module `H_Theta` with its operators
//! `T_alpha`, and the antispherical module `N^Theta` used to decide
//! self-duality.
//!
//! Normalization: `(H_s + q)(H_s - q^-1) = 0`, `C_s = H_s + q`, and the bar
//! involution sends `q` to `q^-1` and `H_w` to `(H_{w^-1})^-1`.
//!
//! `H_Theta` (the δ-basis) and `N^Theta` (the N-basis) are both indexed by
//! cosets; `N_C` stands for `N_{w_C}` with `w_C` the minimal representative.
//! The map `δ_C -> N_{w_Theta w^C} = N_{w_C}` is therefore a relabeling of the
//! basis tag.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::laurent::{ArithmeticError, LaurentPoly};
use crate::quotient::{CosetAction, CosetId, ParabolicQuotient};
use crate::rootsys::{ElementId, WeylGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("expected an element in the {expected} basis, found the {found} basis")]
    WrongBasis { expected: Basis, found: Basis },
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `δ_C` of `H_Theta`.
    Delta,
    /// `N_{w_C}` of the antispherical module.
    N,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Delta => "delta",
            Basis::N => "N",
        })
    }
}

fn accumulate<K: Ord + Copy>(
    terms: &mut BTreeMap<K, LaurentPoly>,
    key: K,
    k: i64,
    shift: i32,
    p: &LaurentPoly,
) -> Result<(), ArithmeticError> {
    let slot = terms.entry(key).or_default();
    slot.add_scaled_assign(k, shift, p)?;
    if slot.is_zero() {
        terms.remove(&key);
    }
    Ok(())
}

fn add_product<K: Ord + Copy>(
    terms: &mut BTreeMap<K, LaurentPoly>,
    key: K,
    a: &LaurentPoly,
    b: &LaurentPoly,
) -> Result<(), ArithmeticError> {
    let prod = a.checked_mul(b)?;
    accumulate(terms, key, 1, 0, &prod)
}

/// An element of the Hecke algebra in the standard basis `{H_w}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeckeElement {
    terms: BTreeMap<ElementId, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(w: ElementId) -> Self {
        Self::from_terms([(w, LaurentPoly::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (ElementId, LaurentPoly)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (w, p) in terms {
            accumulate(&mut out.terms, w, 1, 0, &p).expect("overflow while building a Hecke element");
        }
        out
    }

    pub fn coeff(&self, w: ElementId) -> LaurentPoly {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (ElementId, &LaurentPoly)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithmeticError> {
        let mut out = self.clone();
        for (w, p) in &other.terms {
            accumulate(&mut out.terms, *w, 1, 0, p)?;
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `p`.
    pub fn scale(&self, p: &LaurentPoly) -> Result<Self, ArithmeticError> {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            add_product(&mut out.terms, *w, c, p)?;
        }
        Ok(out)
    }
}

/// The Hecke algebra of an enumerated Weyl group, with a per-element memo of
/// `bar(H_w)`.
pub struct HeckeAlgebra {
    group: Arc<WeylGroup>,
    bar_memo: Vec<OnceLock<Result<HeckeElement, ArithmeticError>>>,
}

impl HeckeAlgebra {
    pub fn new(group: Arc<WeylGroup>) -> Self {
        let n = group.order();
        HeckeAlgebra {
            group,
            bar_memo: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    /// Right multiplication by `H_s`:
    /// `H_w H_s = H_{ws}` if `ws > w`, else `H_{ws} + (q^-1 - q) H_w`.
    pub fn mul_gen(&self, x: &HeckeElement, s: usize) -> Result<HeckeElement, ArithmeticError> {
        let g = &*self.group;
        let mut out = HeckeElement::zero();
        for (&w, p) in &x.terms {
            let ws = g.right_mul(w, s);
            accumulate(&mut out.terms, ws, 1, 0, p)?;
            if g.length(ws) < g.length(w) {
                accumulate(&mut out.terms, w, 1, -1, p)?;
                accumulate(&mut out.terms, w, -1, 1, p)?;
            }
        }
        Ok(out)
    }

    /// `x C_s = x H_s + q x`.
    pub fn mul_cs(&self, x: &HeckeElement, s: usize) -> Result<HeckeElement, ArithmeticError> {
        let mut out = self.mul_gen(x, s)?;
        for (w, p) in &x.terms {
            accumulate(&mut out.terms, *w, 1, 1, p)?;
        }
        Ok(out)
    }

    /// `bar(H_w)`, computed along the ShortLex word of `w` through
    /// `bar(X H_s) = bar(X) (H_s + q - q^-1)`.
    pub fn bar_basis(&self, w: ElementId) -> Result<&HeckeElement, ArithmeticError> {
        self.bar_memo[w.index()]
            .get_or_init(|| {
                if w == ElementId::IDENTITY {
                    return Ok(HeckeElement::basis(w));
                }
                let s = *self.group.reduced_word(w).last().unwrap();
                let below = self.bar_basis(self.group.right_mul(w, s))?;
                let mut out = self.mul_gen(below, s)?;
                for (v, p) in &below.terms {
                    accumulate(&mut out.terms, *v, 1, 1, p)?;
                    accumulate(&mut out.terms, *v, -1, -1, p)?;
                }
                Ok(out)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn bar(&self, x: &HeckeElement) -> Result<HeckeElement, ArithmeticError> {
        let mut out = HeckeElement::zero();
        for (&w, p) in &x.terms {
            let pb = p.bar();
            for (&v, c) in &self.bar_basis(w)?.terms {
                add_product(&mut out.terms, v, &pb, c)?;
            }
        }
        Ok(out)
    }
}

/// A finitely supported combination of coset basis vectors, tagged with the
/// basis it is written in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleElement {
    basis: Basis,
    terms: BTreeMap<CosetId, LaurentPoly>,
}

impl ModuleElement {
    pub fn zero(basis: Basis) -> Self {
        ModuleElement {
            basis,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis_vector(basis: Basis, c: CosetId) -> Self {
        Self::from_terms(basis, [(c, LaurentPoly::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (CosetId, LaurentPoly)>>(basis: Basis, terms: I) -> Self {
        let mut out = Self::zero(basis);
        for (c, p) in terms {
            accumulate(&mut out.terms, c, 1, 0, &p).expect("overflow while building a module element");
        }
        out
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeff(&self, c: CosetId) -> LaurentPoly {
        self.terms.get(&c).cloned().unwrap_or_default()
    }

    pub fn get(&self, c: CosetId) -> Option<&LaurentPoly> {
        self.terms.get(&c)
    }

    /// Nonzero coefficients in increasing coset order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (CosetId, &LaurentPoly)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self += k * q^shift * other`
    pub fn add_scaled_assign(&mut self, k: i64, shift: i32, other: &Self) -> Result<(), HeckeError> {
        self.expect_basis(other.basis)?;
        for (c, p) in &other.terms {
            accumulate(&mut self.terms, *c, k, shift, p)?;
        }
        Ok(())
    }

    pub fn add_term(&mut self, c: CosetId, p: &LaurentPoly) -> Result<(), ArithmeticError> {
        accumulate(&mut self.terms, c, 1, 0, p)
    }

    /// The largest coset below `bound`, other than `skip`, whose coefficient
    /// has a nonzero constant term, together with that constant term.
    pub fn last_constant_term_below(&self, bound: Option<CosetId>, skip: CosetId) -> Option<(CosetId, i64)> {
        let hit = |(c, p): (&CosetId, &LaurentPoly)| {
            let k = p.constant_term();
            (*c != skip && k != 0).then_some((*c, k))
        };
        match bound {
            Some(b) => self.terms.range(..b).rev().find_map(hit),
            None => self.terms.iter().rev().find_map(hit),
        }
    }

    pub fn scale(&self, p: &LaurentPoly) -> Result<Self, ArithmeticError> {
        let mut out = Self::zero(self.basis);
        for (c, x) in &self.terms {
            add_product(&mut out.terms, *c, x, p)?;
        }
        Ok(out)
    }

    fn expect_basis(&self, expected: Basis) -> Result<(), HeckeError> {
        if self.basis == expected {
            Ok(())
        } else {
            Err(HeckeError::WrongBasis {
                expected,
                found: self.basis,
            })
        }
    }

    fn relabel(&self, basis: Basis) -> Self {
        ModuleElement {
            basis,
            terms: self.terms.clone(),
        }
    }
}

/// `T_alpha` on `H_Theta`:
/// `δ_C -> 0` if `C s = C`, `q δ_C + δ_{Cs}` if `C s > C`, `q^-1 δ_C + δ_{Cs}` if `C s < C`.
pub fn t_alpha(quotient: &ParabolicQuotient, x: &ModuleElement, s: usize) -> Result<ModuleElement, HeckeError> {
    x.expect_basis(Basis::Delta)?;
    let mut out = ModuleElement::zero(Basis::Delta);
    for (&c, p) in &x.terms {
        match quotient.action(c, s) {
            CosetAction::Equal => {}
            CosetAction::Up(d) => {
                accumulate(&mut out.terms, c, 1, 1, p)?;
                accumulate(&mut out.terms, d, 1, 0, p)?;
            }
            CosetAction::Down(d) => {
                accumulate(&mut out.terms, c, 1, -1, p)?;
                accumulate(&mut out.terms, d, 1, 0, p)?;
            }
        }
    }
    Ok(out)
}

/// The operator `T_alpha^∅` of `H_∅` restricted to the embedded `H_Theta`:
/// `δ_C -> (q + q^-1) δ_C` if `C s = C`, `q δ_C + δ_{Cs}` if `C s > C`,
/// `q^-1 δ_C + δ_{Cs}` if `C s < C`.
pub fn t_alpha_empty(quotient: &ParabolicQuotient, x: &ModuleElement, s: usize) -> Result<ModuleElement, HeckeError> {
    x.expect_basis(Basis::Delta)?;
    let mut out = ModuleElement::zero(Basis::Delta);
    for (&c, p) in &x.terms {
        match quotient.action(c, s) {
            CosetAction::Equal => {
                accumulate(&mut out.terms, c, 1, 1, p)?;
                accumulate(&mut out.terms, c, 1, -1, p)?;
            }
            CosetAction::Up(d) => {
                accumulate(&mut out.terms, c, 1, 1, p)?;
                accumulate(&mut out.terms, d, 1, 0, p)?;
            }
            CosetAction::Down(d) => {
                accumulate(&mut out.terms, c, 1, -1, p)?;
                accumulate(&mut out.terms, d, 1, 0, p)?;
            }
        }
    }
    Ok(out)
}

/// `δ_C -> sum_{v in W_Theta} q^{l(v)} δ_{v w^C}` into `H_∅`, whose cosets
/// are indexed by `target` (the quotient of the same group by the empty set).
pub fn embed(
    quotient: &ParabolicQuotient,
    x: &ModuleElement,
    target: &ParabolicQuotient,
) -> Result<ModuleElement, HeckeError> {
    x.expect_basis(Basis::Delta)?;
    assert!(target.theta().is_empty(), "embedding target must be the quotient by the empty set");
    assert_eq!(target.len(), quotient.group().order(), "embedding target belongs to a different group");
    let g = quotient.group();
    let mut out = ModuleElement::zero(Basis::Delta);
    for (&c, p) in &x.terms {
        let top = quotient.max_rep(c);
        for &v in quotient.parabolic_elements() {
            let u = g.mul(v, top);
            accumulate(&mut out.terms, target.member_coset(u), 1, g.length(v) as i32, p)?;
        }
    }
    Ok(out)
}

/// `H_u -> (-q)^{l(t)} N_m` with `u = t m`, `t in W_Theta`, `m` minimal.
pub fn project_to_antispherical(quotient: &ParabolicQuotient, h: &HeckeElement) -> Result<ModuleElement, ArithmeticError> {
    let g = quotient.group();
    let mut out = ModuleElement::zero(Basis::N);
    for (&u, p) in &h.terms {
        let c = quotient.member_coset(u);
        let k = g.length(u) - g.length(quotient.min_rep(c));
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        accumulate(&mut out.terms, c, sign, k as i32, p)?;
    }
    Ok(out)
}

/// `δ_C -> N_{w_Theta w^C}`; coefficients are unchanged.
pub fn phi_to_n(x: &ModuleElement) -> Result<ModuleElement, HeckeError> {
    x.expect_basis(Basis::Delta)?;
    Ok(x.relabel(Basis::N))
}

/// Inverse of [`phi_to_n`].
pub fn n_to_phi(x: &ModuleElement) -> Result<ModuleElement, HeckeError> {
    x.expect_basis(Basis::N)?;
    Ok(x.relabel(Basis::Delta))
}

/// Right action of `C_s` on `N^Theta`, from the minimal representatives:
/// `N_w C_s = 0` if `ws` stays in the coset of `w`, `q N_w + N_{ws}` if
/// `ws > w`, `q^-1 N_w + N_{ws}` if `ws < w`.
pub fn n_act_cs(quotient: &ParabolicQuotient, x: &ModuleElement, s: usize) -> Result<ModuleElement, HeckeError> {
    x.expect_basis(Basis::N)?;
    let g = quotient.group();
    let mut out = ModuleElement::zero(Basis::N);
    for (&c, p) in &x.terms {
        let w = quotient.min_rep(c);
        let ws = g.right_mul(w, s);
        let d = quotient.member_coset(ws);
        if d == c {
            continue;
        }
        debug_assert_eq!(quotient.min_rep(d), ws);
        let shift = if g.length(ws) > g.length(w) { 1 } else { -1 };
        accumulate(&mut out.terms, c, 1, shift, p)?;
        accumulate(&mut out.terms, d, 1, 0, p)?;
    }
    Ok(out)
}

/// Right action of `H_s = C_s - q` on `N^Theta`.
pub fn n_act_hs(quotient: &ParabolicQuotient, x: &ModuleElement, s: usize) -> Result<ModuleElement, HeckeError> {
    let mut out = n_act_cs(quotient, x, s)?;
    out.add_scaled_assign(-1, 1, x)?;
    Ok(out)
}

/// The antispherical module `N^Theta` with a per-coset memo of `bar(N_{w_C})`.
pub struct AntisphericalModule {
    quotient: Arc<ParabolicQuotient>,
    hecke: HeckeAlgebra,
    bar_memo: Vec<OnceLock<Result<ModuleElement, ArithmeticError>>>,
}

impl AntisphericalModule {
    pub fn new(quotient: Arc<ParabolicQuotient>) -> Self {
        let hecke = HeckeAlgebra::new(quotient.group().clone());
        let n = quotient.len();
        AntisphericalModule {
            quotient,
            hecke,
            bar_memo: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn quotient(&self) -> &Arc<ParabolicQuotient> {
        &self.quotient
    }

    pub fn hecke(&self) -> &HeckeAlgebra {
        &self.hecke
    }

    /// `bar(N_m) = project(bar(H_m))` for the minimal representative `m`.
    pub fn bar_basis(&self, c: CosetId) -> Result<&ModuleElement, ArithmeticError> {
        self.bar_memo[c.index()]
            .get_or_init(|| {
                let h = self.hecke.bar_basis(self.quotient.min_rep(c))?;
                project_to_antispherical(&self.quotient, h)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// The bar involution on `N^Theta`, semilinear over `q -> q^-1`.
    pub fn bar(&self, x: &ModuleElement) -> Result<ModuleElement, HeckeError> {
        x.expect_basis(Basis::N)?;
        let mut out = ModuleElement::zero(Basis::N);
        for (&c, p) in &x.terms {
            let pb = p.bar();
            for (&d, coeff) in &self.bar_basis(c)?.terms {
                add_product(&mut out.terms, d, &pb, coeff)?;
            }
        }
        Ok(out)
    }

    /// Whether a δ-basis element is fixed by the bar involution transported
    /// through [`phi_to_n`].
    pub fn is_self_dual(&self, x: &ModuleElement) -> Result<bool, HeckeError> {
        let n = phi_to_n(x)?;
        Ok(self.bar(&n)? == n)
    }
}
