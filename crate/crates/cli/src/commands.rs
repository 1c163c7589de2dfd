//! One function per subcommand. Each returns the printed report, the trace
//! and whatever the owning module's checker flagged.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_rational::Ratio;
use serde_json::json;

use lfs_core::blum::{
    advice, build_r, cn_measure, fast_r_with_advice, psi_dnc, speedup_bound, BudgetSchedule,
    DncPath, SPEEDUP_C, SPEEDUP_D,
};
use lfs_core::dump::{ce_run, CeAction, LStatus, PStatus, Requirement, Strategy};
use lfs_core::finite_ext::{fe_run, FeOutcome};
use lfs_core::machine::Enumeration;
use lfs_core::model::Word;
use lfs_core::{BlumError, Trace};

#[derive(Debug, Default)]
pub struct Report {
    pub out: String,
    pub trace: Trace,
    pub violations: Vec<String>,
}

pub fn fe(en: &Enumeration, stages: u64, budget: u64) -> Report {
    let st = fe_run(en, stages, budget);
    let mut r = Report::default();
    writeln!(r.out, "finite extension: {stages} stages, budget {budget}").unwrap();
    writeln!(
        r.out,
        "{:>5} {:>4} {:>4} {:<30} {:>8} {:>10}",
        "stage", "e", "i", "outcome", "|σ|", "Ψ steps"
    )
    .unwrap();
    for rec in &st.log {
        let mut payload = json!({
            "e": rec.e,
            "i": rec.i,
            "outcome": rec.outcome.label(),
            "sigma_len": rec.sigma_len,
            "psi_steps": rec.psi_steps,
        });
        let mut label = rec.outcome.label().to_string();
        if let FeOutcome::DiagonalFound {
            tau,
            n,
            phi_value,
            r_value,
        } = &rec.outcome
        {
            let obj = payload.as_object_mut().unwrap();
            obj.insert("tau".into(), tau.to_string().into());
            obj.insert("n".into(), (*n).into());
            obj.insert("phi_value".into(), (*phi_value as u8).into());
            obj.insert("r_value".into(), (*r_value as u8).into());
            label = format!("diagonal n={n} Φ={} R={}", *phi_value as u8, *r_value as u8);
        }
        r.trace
            .push(rec.stage, "finite_extension", "stage", payload);
        writeln!(
            r.out,
            "{:>5} {:>4} {:>4} {:<30} {:>8} {:>10}",
            rec.stage, rec.e, rec.i, label, rec.sigma_len, rec.psi_steps
        )
        .unwrap();
    }
    writeln!(r.out, "final σ: {}", st.sigma).unwrap();
    r.violations = st.check_invariants(en);
    r
}

fn action_payload(action: &CeAction) -> serde_json::Value {
    match action {
        CeAction::FollowerAssigned { follower } | CeAction::FollowerSpoiled { follower } => {
            json!({ "follower": follower })
        }
        CeAction::PsiDefined {
            x,
            bit,
            alpha,
            steps,
            pretend,
        } => {
            json!({ "x": x, "bit": *bit as u8, "alpha": alpha, "steps": steps, "pretend": pretend })
        }
        CeAction::PsiStale { x } => json!({ "x": x }),
        CeAction::DumpRequested { from, to } | CeAction::DumpCommitted { from, to } => {
            json!({ "from": from, "to": to })
        }
        CeAction::RequestDeferred { from, blocked_by } => {
            json!({ "from": from, "blocked_by": blocked_by })
        }
        CeAction::RequestDropped { from, by } => json!({ "from": from, "by": by }),
        CeAction::Confirmed { requester, checked } => {
            json!({ "requester": requester, "checked": checked })
        }
        CeAction::Diagonalized {
            x,
            psi_bit,
            r_bit,
            dump_from,
        } => {
            let mut v = json!({ "x": x, "psi_bit": *psi_bit as u8, "r_bit": *r_bit as u8 });
            if let Some(f) = dump_from {
                v.as_object_mut()
                    .unwrap()
                    .insert("dump_from".into(), (*f).into());
            }
            v
        }
        CeAction::Injured { count } => json!({ "count": count }),
    }
}

pub fn ce(en: &Enumeration, requirements: &[Requirement], stages: u64) -> Report {
    let run = ce_run(en, requirements, stages);
    let mut r = Report::default();
    let names: Vec<String> = requirements.iter().map(Requirement::to_string).collect();
    writeln!(
        r.out,
        "dump construction: {stages} stages, requirements [{}]",
        names.join(",")
    )
    .unwrap();
    for ev in &run.events {
        let mut payload = action_payload(&ev.action);
        let obj = payload.as_object_mut().unwrap();
        obj.insert("strategy".into(), ev.strategy.into());
        obj.insert("requirement".into(), names[ev.strategy].clone().into());
        r.trace
            .push(ev.stage, "dump_construction", ev.action.name(), payload);
    }
    writeln!(
        r.out,
        "{:<10} {:<28} {:>8}",
        "strategy", "status", "injuries"
    )
    .unwrap();
    for (k, st) in run.strategies.iter().enumerate() {
        let status = match st {
            Strategy::L(l) => match &l.status {
                LStatus::Active => format!("active, Ψ on {} inputs", l.psi.len()),
                LStatus::PendingConfirmation { from, .. } => format!("waiting to dump from {from}"),
                LStatus::SatisfiedByDiagonal { x, restraint } => {
                    format!("diagonal at {x}, restraint {restraint}")
                }
            },
            Strategy::P(p) => match (&p.status, p.follower) {
                (PStatus::Enumerated, Some(f)) => format!("follower {f} enumerated"),
                (s, Some(f)) => format!("{s:?}, follower {f}"),
                (s, None) => format!("{s:?}"),
            },
        };
        writeln!(
            r.out,
            "{:<10} {:<28} {:>8}",
            names[k],
            status,
            st.injuries()
        )
        .unwrap();
    }
    let members: Vec<String> = run.a.members().iter().map(u64::to_string).collect();
    writeln!(r.out, "dumps: {}", run.a.history().len()).unwrap();
    writeln!(r.out, "A = {{{}}}", members.join(",")).unwrap();
    r.violations = run.check_invariants(en);
    r
}

pub fn blum(en: &Enumeration, schedule: BudgetSchedule, max_len: usize) -> Report {
    let run = build_r(en, schedule, max_len);
    let mut r = Report::default();
    writeln!(
        r.out,
        "diagonal set R: schedule {schedule}, lengths 0..={max_len}"
    )
    .unwrap();
    writeln!(
        r.out,
        "{:>3} {:>5} {:<20} {:>3} {:>22} {:>10}",
        "n", "index", "member of R", "Φ", "accounted", "executed"
    )
    .unwrap();
    for n in 0..=max_len {
        let cost = &run.costs[n];
        let mut payload = json!({
            "n": n,
            "accounted": cost.accounted.to_string(),
            "executed": cost.executed,
            "runs": cost.runs,
            "undecided": cost.undecided,
        });
        let (index, member, phi) = match run.registry.retired_at(n) {
            Some(e) => {
                let rec = &run.registry.records()[&e];
                let obj = payload.as_object_mut().unwrap();
                obj.insert("index".into(), e.into());
                obj.insert("x".into(), rec.x.to_string().into());
                obj.insert("phi_bit".into(), (rec.phi_bit as u8).into());
                obj.insert("steps".into(), rec.steps.into());
                let member = run.table.one_at(n).map_or("-".to_string(), Word::to_string);
                (e.to_string(), member, (rec.phi_bit as u8).to_string())
            }
            None => ("-".into(), "-".into(), "-".into()),
        };
        let one = run.table.one_at(n).map(Word::to_string);
        payload
            .as_object_mut()
            .unwrap()
            .insert("one".into(), one.unwrap_or_default().into());
        r.trace.push(n as u64, "blum", "length", payload);
        writeln!(
            r.out,
            "{n:>3} {index:>5} {member:<20} {phi:>3} {:>22} {:>10}",
            short(&cost.accounted),
            cost.executed
        )
        .unwrap();
    }
    let ones = (0..=max_len)
        .filter(|&n| run.table.one_at(n).is_some())
        .count();
    if ones == 0 {
        writeln!(r.out, "R is all zero on lengths 0..={max_len}").unwrap();
    }
    writeln!(
        r.out,
        "lengths with a member: {ones}; total accounted {}",
        short(&run.cost_through(max_len))
    )
    .unwrap();
    r.violations = run.check_invariants(en);
    r
}

pub fn speedup(
    en: &Enumeration,
    schedule: BudgetSchedule,
    max_len: usize,
    ks: &[u64],
    horizon: usize,
) -> Report {
    let run = build_r(en, schedule, max_len);
    let advised_from = build_r(en, schedule, horizon);
    let mut r = Report::default();
    writeln!(
        r.out,
        "advice speed-up: schedule {schedule}, lengths 0..={max_len}, advice horizon {horizon}, bound {SPEEDUP_C}·(n·f^(n-k)(n))^{SPEEDUP_D}"
    )
    .unwrap();
    for &k in ks {
        let adv = advice(&advised_from.registry, k);
        let sigma: Vec<String> = adv.sigma.iter().map(u64::to_string).collect();
        let cutoff = adv.cutoff(&run.registry);
        let mut payload = json!({ "k": k, "sigma": sigma.join(",") });
        if let Some(c) = cutoff {
            payload
                .as_object_mut()
                .unwrap()
                .insert("cutoff".into(), c.into());
        }
        r.trace.push(k, "blum", "advice", payload);
        writeln!(
            r.out,
            "k={k} σ_k={{{}}} cutoff={}",
            sigma.join(","),
            cutoff.map_or("none".to_string(), |c| c.to_string())
        )
        .unwrap();
        writeln!(
            r.out,
            "  {:>3} {:>7} {:>16} {:>16} {:>12}",
            "n", "agree", "max measured", "full replay", "≈ ratio"
        )
        .unwrap();
        let (mut agree, mut total) = (0u64, 0u64);
        for n in 0..=max_len {
            let mut row_agree = 0u64;
            let mut row_total = 0u64;
            let mut worst = None;
            let mut failed = None;
            for x in Word::all_of_length(n) {
                match fast_r_with_advice(en, &adv, &x, &run) {
                    Err(BlumError::BeforeCutoff { .. }) => {}
                    Err(e) => failed = Some(e),
                    Ok(fast) => {
                        row_total += 1;
                        if fast.bit == run.table.value(&x).expect("in horizon") {
                            row_agree += 1;
                        } else {
                            r.violations
                                .push(format!("k={k}: fast R({x}) disagrees with R"));
                        }
                        if fast.measured > speedup_bound(n, k) {
                            r.violations.push(format!(
                                "k={k}: R({x}) measured {} over the bound",
                                fast.measured
                            ));
                        }
                        if worst.as_ref().is_none_or(|w| fast.measured > *w) {
                            worst = Some(fast.measured);
                        }
                    }
                }
            }
            if let Some(e) = failed {
                r.violations.push(format!("k={k} n={n}: {e}"));
                writeln!(r.out, "  {n:>3} error: {e}").unwrap();
                continue;
            }
            let Some(worst) = worst else { continue };
            let full = run.cost_through(n);
            let strictly_below = worst < full;
            if k >= 1 && full > 0u32.into() && !strictly_below {
                r.violations.push(format!(
                    "k={k} n={n}: measured {worst} is not below full replay {full}"
                ));
            }
            let ratio = if full == 0u32.into() {
                "-".to_string()
            } else {
                format!("2^-{}", full.bits().saturating_sub(worst.bits()))
            };
            r.trace.push(
                k,
                "blum",
                "speedup",
                json!({
                    "k": k,
                    "n": n,
                    "inputs": row_total,
                    "agree": row_agree,
                    "measured": worst.to_string(),
                    "full": full.to_string(),
                    "bound": speedup_bound(n, k).to_string(),
                    "strictly_below": strictly_below,
                }),
            );
            writeln!(
                r.out,
                "  {n:>3} {:>7} {worst:>16} {:>16} {ratio:>12}",
                format!("{row_agree}/{row_total}"),
                short(&full)
            )
            .unwrap();
            agree += row_agree;
            total += row_total;
        }
        let pct = (agree * 100).checked_div(total).unwrap_or(100);
        writeln!(r.out, "  agreement {agree}/{total} ({pct}%)").unwrap();
    }
    r.violations.extend(run.check_invariants(en));
    r
}

/// Exact below 10^15, otherwise the number of binary digits.
fn short(v: &num_bigint::BigUint) -> String {
    if v.bits() <= 50 {
        v.to_string()
    } else {
        format!("{}-bit", v.bits())
    }
}

pub fn schnorr(en: &Enumeration, schedule: BudgetSchedule, n: usize) -> Report {
    let run = build_r(en, schedule, n);
    let mut r = Report::default();
    writeln!(
        r.out,
        "block functional: R from schedule {schedule}, lengths 0..={n}"
    )
    .unwrap();
    writeln!(
        r.out,
        "{:>3} {:>14} {:>14} {:>6}",
        "n", "λ(C_n)", "2^-n", "equal"
    )
    .unwrap();
    for m in 0..=n {
        let measure = cn_measure(m, &run.table).expect("table covers the length");
        let bound = Ratio::new(1u64, 1u64 << m);
        let equal = measure == bound;
        if measure > bound {
            r.violations
                .push(format!("n={m}: λ(C_n) = {measure} exceeds {bound}"));
        }
        if equal != run.table.one_at(m).is_some() {
            r.violations
                .push(format!("n={m}: equality does not match membership"));
        }
        r.trace.push(
            m as u64,
            "blum",
            "measure",
            json!({ "n": m, "measure": measure.to_string(), "bound": bound.to_string(), "equal": equal }),
        );
        writeln!(
            r.out,
            "{m:>3} {:>14} {:>14} {:>6}",
            measure.to_string(),
            bound.to_string(),
            equal
        )
        .unwrap();
    }
    r.violations.extend(run.check_invariants(en));
    r
}

pub fn dnc(en: &Enumeration, max_len: usize, bound: u64) -> Report {
    let run = build_r(en, BudgetSchedule::IteratedSquare, max_len);
    let mut r = Report::default();
    writeln!(
        r.out,
        "tripling-based Ψ against R: inputs below {bound}, lengths 0..={max_len}"
    )
    .unwrap();
    let mut tally = BTreeMap::<(u64, DncPath), (u64, u64)>::new();
    for x in 0..bound {
        match psi_dnc(en, x, &run) {
            Ok(out) => {
                let entry = tally.entry((out.k, out.path)).or_default();
                entry.1 += 1;
                if out.bit == run.table.value(&Word::from_index(x)).expect("in horizon") {
                    entry.0 += 1;
                } else {
                    r.violations
                        .push(format!("x={x}: {} path disagrees with R", out.path.name()));
                }
            }
            Err(e) => {
                r.violations.push(format!("x={x}: {e}"));
                break;
            }
        }
    }
    writeln!(r.out, "{:>3} {:<18} {:>12}", "k", "path", "agree").unwrap();
    for ((k, path), (agree, total)) in &tally {
        r.trace.push(
            *k,
            "blum",
            "dnc",
            json!({ "k": k, "path": path.name(), "agree": agree, "inputs": total }),
        );
        writeln!(
            r.out,
            "{k:>3} {:<18} {:>12}",
            path.name(),
            format!("{agree}/{total}")
        )
        .unwrap();
    }
    r.violations.extend(run.check_invariants(en));
    r
}
