//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::sync::Arc;
use std::time::{Duration, Instant};

use wkl_core::verify::{
    check_certificate, check_duality, check_gverma, check_inversion, check_selfduality, check_structural,
    check_uniqueness, CheckOutcome,
};
use wkl_core::{
    compute_generalized_verma, compute_ordinary_kl, compute_whittaker_kl, multiplicities, AntisphericalModule,
    CartanDatum, CosetId, DescentChoice, ElementId, KlOptions, KlTable, LaurentPoly, ParabolicQuotient, Parallelism,
    ThetaSubset, WeylGroup,
};

fn group(t: &str) -> Arc<WeylGroup> {
    Arc::new(WeylGroup::enumerate(&CartanDatum::new(t.parse().unwrap())).unwrap())
}

fn all_thetas(g: &Arc<WeylGroup>) -> Vec<ThetaSubset> {
    let r = g.rank();
    (0u32..1 << r)
        .map(|bits| ThetaSubset::new((0..r).filter(|i| bits >> i & 1 == 1).collect(), r).unwrap())
        .collect()
}

fn sweep(types: &[&str]) -> Vec<Arc<ParabolicQuotient>> {
    let mut out = Vec::new();
    for t in types {
        let g = group(t);
        for theta in all_thetas(&g) {
            out.push(Arc::new(ParabolicQuotient::new(g.clone(), theta)));
        }
    }
    out
}

fn label(q: &ParabolicQuotient) -> String {
    format!("{} theta={}", q.group().cartan_type(), q.theta())
}

fn poly(s: &str) -> LaurentPoly {
    s.parse().unwrap()
}

fn peak_rss_mib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kib: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib / 1024)
}

const SWEEP_STRUCTURAL: &[&str] = &["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2"];
const SWEEP_IDENTITIES: &[&str] = &["A1", "A2", "A3", "B2", "B3", "G2"];

struct Gate {
    failures: usize,
}

impl Gate {
    fn record(&mut self, n: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let (ok, note) = match result {
            Ok(note) => match limit {
                Some(l) if elapsed > l => (false, format!("{note}; exceeded {l:?}")),
                _ => (true, note),
            },
            Err(e) => (false, e),
        };
        if !ok {
            self.failures += 1;
        }
        println!(
            "criterion {n:>2} {}: {name} [{:.2?}] {note}",
            if ok { "PASS" } else { "FAIL" },
            elapsed
        );
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ensure_pass(outcome: CheckOutcome, what: &str, q: &ParabolicQuotient) -> Result<(), String> {
    ensure(outcome.passed(), || format!("{what} failed on {}: {:?}", label(q), outcome.counterexample))
}

fn whittaker(q: &Arc<ParabolicQuotient>) -> Result<KlTable, String> {
    compute_whittaker_kl(q, KlOptions::default()).map_err(|e| format!("{}: {e}", label(q)))
}

fn gverma(q: &Arc<ParabolicQuotient>) -> Result<KlTable, String> {
    compute_generalized_verma(q, KlOptions::default()).map_err(|e| format!("{}: {e}", label(q)))
}

fn criterion_1() -> Result<String, String> {
    let mut count = 0;
    for t in ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "G2"] {
        let g = group(t);
        let q = Arc::new(ParabolicQuotient::new(g.clone(), ThetaSubset::all(g.rank())));
        let table = whittaker(&q)?;
        let m = multiplicities(&table).map_err(|e| e.to_string())?;
        let c0 = CosetId(0);
        ensure(
            table.len() == 1 && table.nonzero_count() == 1 && table.poly(c0, c0).is_one(),
            || format!("{t}: table is not [1]"),
        )?;
        ensure(m.len() == 1 && m.mu(c0, c0) == 1, || format!("{t}: mu is not [1]"))?;
        count += 1;
    }
    Ok(format!("{count} types"))
}

fn criterion_2() -> Result<String, String> {
    let g = group("A2");
    let q = Arc::new(ParabolicQuotient::new(g.clone(), ThetaSubset::parse("1", 2).unwrap()));
    let t = whittaker(&q)?;
    let c = CosetId;
    ensure(t.len() == 3, || format!("{} cosets", t.len()))?;
    ensure(t.poly(c(1), c(0)) == poly("q"), || format!("P(1,0) = {}", t.poly(c(1), c(0))))?;
    ensure(t.poly(c(2), c(1)) == poly("q"), || format!("P(2,1) = {}", t.poly(c(2), c(1))))?;
    ensure(t.poly(c(2), c(0)).is_zero(), || format!("P(2,0) = {}", t.poly(c(2), c(0))))?;
    let m = multiplicities(&t).map_err(|e| e.to_string())?;
    for (i, j) in [(1, 0), (2, 1), (2, 0)] {
        ensure(m.mu(c(i), c(j)) == 1, || format!("mu({i},{j}) = {}", m.mu(c(i), c(j))))?;
    }
    let module = AntisphericalModule::new(q.clone());
    for x in q.cosets() {
        ensure(module.is_self_dual(t.phi(x)).unwrap(), || format!("phi({}) not self-dual", x.0))?;
    }
    Ok("P(1,0)=q P(2,1)=q P(2,0)=0, mu below diagonal = 1".into())
}

fn criterion_3(sweep: &[Arc<ParabolicQuotient>]) -> Result<String, String> {
    for q in sweep {
        let w = whittaker(q)?;
        ensure_pass(check_structural(&w, Parallelism::Parallel), "structural (whittaker)", q)?;
        let g = gverma(q)?;
        ensure_pass(check_structural(&g, Parallelism::Parallel), "structural (gverma)", q)?;
    }
    Ok(format!("{} quotients", sweep.len()))
}

fn criterion_4(sweep: &[Arc<ParabolicQuotient>]) -> Result<String, String> {
    let mut rows = 0;
    for q in sweep {
        let w = whittaker(q)?;
        let module = AntisphericalModule::new(q.clone());
        ensure_pass(check_selfduality(&w, &module, Parallelism::Parallel), "self-duality", q)?;
        rows += w.len();
    }
    Ok(format!("{} quotients, {rows} rows", sweep.len()))
}

fn criterion_5(sweep: &[Arc<ParabolicQuotient>]) -> Result<String, String> {
    let largest = KlOptions::default().with_descent(DescentChoice::Largest);
    let render = |t: &KlTable| -> String { t.entries().map(|(c, d, p)| format!("{} {} {p}\n", c.0, d.0)).collect() };
    for q in sweep {
        let a = whittaker(q)?;
        let b = compute_whittaker_kl(q, largest).map_err(|e| e.to_string())?;
        ensure(render(&a) == render(&b), || format!("whittaker tables differ on {}", label(q)))?;
        let a = gverma(q)?;
        let b = compute_generalized_verma(q, largest).map_err(|e| e.to_string())?;
        ensure(render(&a) == render(&b), || format!("gverma tables differ on {}", label(q)))?;
    }
    Ok(format!("{} quotients, both table kinds", sweep.len()))
}

fn criterion_6(sweep: &[Arc<ParabolicQuotient>]) -> Result<String, String> {
    let mut last_group: Option<(Arc<WeylGroup>, KlTable)> = None;
    for q in sweep {
        let ordinary = match &last_group {
            Some((g, o)) if Arc::ptr_eq(g, q.group()) => o.clone(),
            _ => {
                let o = compute_ordinary_kl(q.group(), KlOptions::default()).map_err(|e| e.to_string())?;
                last_group = Some((q.group().clone(), o.clone()));
                o
            }
        };
        let w = whittaker(q)?;
        let g = gverma(q)?;
        ensure_pass(check_duality(&w, &ordinary, Parallelism::Parallel), "duality", q)?;
        ensure_pass(check_inversion(&w, &g, Parallelism::Parallel), "inversion", q)?;
    }
    Ok(format!("{} quotients", sweep.len()))
}

fn criterion_7(sweep: &[Arc<ParabolicQuotient>]) -> Result<String, String> {
    let mut ordinary: Option<(Arc<WeylGroup>, KlTable)> = None;
    for q in sweep {
        if !ordinary.as_ref().is_some_and(|(g, _)| Arc::ptr_eq(g, q.group())) {
            let o = compute_ordinary_kl(q.group(), KlOptions::default()).map_err(|e| e.to_string())?;
            ordinary = Some((q.group().clone(), o));
        }
        let g = gverma(q)?;
        ensure_pass(check_gverma(&g, &ordinary.as_ref().unwrap().1, Parallelism::Parallel), "gverma consistency", q)?;
    }
    Ok(format!("{} quotients", sweep.len()))
}

fn criterion_8() -> Result<String, String> {
    let g = group("A2");
    let t = compute_ordinary_kl(&g, KlOptions::default()).map_err(|e| e.to_string())?;
    for w in g.elements() {
        for v in g.elements() {
            let expected = if g.bruhat_leq(v, w) {
                LaurentPoly::monomial(1, (g.length(w) - g.length(v)) as i32)
            } else {
                LaurentPoly::zero()
            };
            ensure(t.poly(CosetId(w.0), CosetId(v.0)) == expected, || format!("A2 entry ({}, {})", w.0, v.0))?;
        }
    }
    let g = group("A3");
    let t = compute_ordinary_kl(&g, KlOptions::default()).map_err(|e| e.to_string())?;
    let word = |id: u32| {
        let w: Vec<String> = g.reduced_word(ElementId(id)).iter().map(|s| (s + 1).to_string()).collect();
        format!("[{}]", w.join(","))
    };
    let witness = t.entries().find(|(_, _, p)| p.terms().len() >= 2);
    match witness {
        Some((w, v, p)) => Ok(format!(
            "A2 all powers of q; A3 witness P({}, {}) = {p}",
            word(w.0),
            word(v.0)
        )),
        None => Err("no two-term polynomial in A3".into()),
    }
}

fn criterion_9() -> Result<String, String> {
    let g = group("F4");
    let q = Arc::new(ParabolicQuotient::new(g.clone(), ThetaSubset::parse("1", 4).unwrap()));
    let w = whittaker(&q)?;
    ensure_pass(check_structural(&w, Parallelism::Parallel), "structural", &q)?;
    let module = AntisphericalModule::new(q.clone());
    ensure_pass(check_selfduality(&w, &module, Parallelism::Parallel), "self-duality", &q)?;
    ensure_pass(check_uniqueness(&w, KlOptions::default()), "uniqueness", &q)?;
    let rss = peak_rss_mib();
    ensure(rss.is_none_or(|m| m < 4096), || format!("peak RSS {rss:?} MiB"))?;
    Ok(format!(
        "F4 theta=1: {} cosets, {} nonzero entries, peak RSS {} MiB",
        w.len(),
        w.nonzero_count(),
        rss.map_or("n/a".into(), |m| m.to_string())
    ))
}

fn criterion_10() -> Result<String, String> {
    let mut checked = 0;
    for (t, theta) in [("A2", "1"), ("B3", "2"), ("G2", "none")] {
        let g = group(t);
        let q = Arc::new(ParabolicQuotient::new(g.clone(), ThetaSubset::parse(theta, g.rank()).unwrap()));
        let w = whittaker(&q)?;
        let gv = gverma(&q)?;
        let ordinary = compute_ordinary_kl(&g, KlOptions::default()).map_err(|e| e.to_string())?;
        let mode = Parallelism::Sequential;

        // a parity-breaking entry for the structural check, a bar-breaking one for the rest
        let (c, d) = w
            .entries()
            .find(|(c, d, _)| c != d && (q.max_length(*c) - q.max_length(*d)) % 2 == 1)
            .map(|(c, d, _)| (c, d))
            .ok_or("no odd-distance entry")?;
        let mut odd = w.clone();
        odd.set_entry(c, d, poly("q^2"));
        let mut bad = w.clone();
        bad.set_entry(c, d, &w.poly(c, d) + &poly("q^2"));
        let mut bad_g = gv.clone();
        bad_g.set_entry(c, d, &gv.poly(c, d) + &poly("q^3"));

        let module = AntisphericalModule::new(q.clone());
        let outcomes = [
            ("structural", check_structural(&odd, mode)),
            ("selfduality", check_selfduality(&bad, &module, mode)),
            ("uniqueness", check_uniqueness(&bad, KlOptions::default())),
            ("certificate", check_certificate(&bad, mode)),
            ("duality", check_duality(&bad, &ordinary, mode)),
            ("inversion", check_inversion(&bad, &gv, mode)),
            ("gverma", check_gverma(&bad_g, &ordinary, mode)),
        ];
        for (name, outcome) in outcomes {
            ensure(!outcome.passed() && outcome.counterexample.is_some(), || {
                format!("{name} accepted a corrupted {t} theta={theta} table")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} corrupted-table runs rejected with counterexamples"))
}

fn main() {
    let structural = sweep(SWEEP_STRUCTURAL);
    let identities = sweep(SWEEP_IDENTITIES);
    let secs = Duration::from_secs;
    let mut gate = Gate { failures: 0 };
    gate.record(1, "full theta gives [1]", Some(secs(1)), criterion_1);
    gate.record(2, "A2 theta=1 values", Some(secs(1)), criterion_2);
    gate.record(3, "structural suite", Some(secs(30)), || criterion_3(&structural));
    gate.record(4, "self-duality oracle", Some(secs(60)), || criterion_4(&structural));
    gate.record(5, "descent-choice uniqueness", None, || criterion_5(&structural));
    gate.record(6, "duality and inversion", Some(secs(120)), || criterion_6(&identities));
    gate.record(7, "generalized Verma consistency", None, || criterion_7(&identities));
    gate.record(8, "empty theta specialization", None, criterion_8);
    gate.record(9, "F4 pipeline", Some(secs(600)), criterion_9);
    gate.record(10, "negative controls", None, criterion_10);
    if gate.failures > 0 {
        eprintln!("{} acceptance criteria failed", gate.failures);
        std::process::exit(1);
    }
}
