use num_traits::ToPrimitive;
use serde_json::{json, Value};

use lensform::exactnum::IntegerMatrix;
use lensform::ktorsion::{h_minus, low_codim_detectors};
use lensform::lens::{classify as classify_pair, homotopy_witnesses, Conclusion};
use lensform::oracle::{
    brute_cokernel, circle_order_by_iteration, h_minus_maillet, isometric_by_search, tangential_by_lattice, MAX_COKERNEL,
};
use lensform::rho::{rho_difference, rho_invariant, RhoDifference};
use lensform::thickness::{circle_order, im_j_order, thickness_report, CodimVerdict};
use lensform::{KRingPresentation, LensSpace, PrimeModulus, ThicknessReport};

use crate::output::{apply_checks, opt, yes_no, Check, Failure, Outcome, EXIT_NOT_COMPARABLE, EXIT_OK};
use crate::{cache, CliResult, Opts, SCHEMA};

/// Largest p for which --oracle recomputes h⁻ by determinant.
const MAILLET_ORACLE_BOUND: u64 = 61;

fn prime(o: &Opts) -> Result<PrimeModulus, Failure> {
    Ok(PrimeModulus::new(o.p)?)
}

fn space(o: &Opts, which: &str, w: &Option<Vec<i64>>) -> Result<LensSpace, Failure> {
    let w = w
        .as_ref()
        .ok_or_else(|| Failure::Usage(format!("--{which} is required")))?;
    let l = LensSpace::new(o.p, w)?;
    if let Some(n) = o.n {
        if l.n() != n {
            return Err(Failure::Usage(format!(
                "--{which} has {} weights but -n is {n}",
                l.n()
            )));
        }
    }
    Ok(l)
}

/// Canonical form with the orientation made explicit when it was reversed.
pub fn describe(l: &LensSpace) -> String {
    if l.orientation() < 0 {
        format!("{l} (orientation reversed)")
    } else {
        l.to_string()
    }
}

fn witness_text(holds: bool, w: Option<u64>, name: &str) -> String {
    match w {
        Some(w) if holds => format!("yes ({name} = {w})"),
        _ => yes_no(holds).to_string(),
    }
}

fn rho_word(d: &RhoDifference) -> String {
    serde_json::to_value(d.verdict)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn rho_summary(d: &RhoDifference) -> Value {
    json!({
        "verdict": d.verdict,
        "oriented_verdict": d.oriented_verdict,
        "witnesses": d.witnesses.iter().map(|w| json!({
            "e": w.e,
            "degree": w.degree,
            "zero": w.zero,
        })).collect::<Vec<_>>(),
    })
}

fn thickness_text(r: &ThicknessReport) -> String {
    if !r.comparable {
        return format!("thickness: {}\n", opt(&r.reason));
    }
    let mut s = format!("thickness: {}\n", opt(&r.thickness));
    let verdicts: Vec<String> = r
        .entries
        .iter()
        .map(|e| {
            let v = match e.verdict {
                CodimVerdict::Equal => "=",
                CodimVerdict::Unequal => "≠",
                CodimVerdict::Undecided => "?",
            };
            format!("k={}:{v}", e.k)
        })
        .collect();
    s.push_str(&format!("  M×R^k vs N×R^k: {}\n", verdicts.join(" ")));
    if let Some(f) = &r.filtration {
        s.push_str(&format!("  {}\n", crate::atlas::filtration_line(f)));
    }
    s
}

pub fn classify(o: &Opts) -> CliResult {
    let (la, lb) = (space(o, "a", &o.a)?, space(o, "b", &o.b)?);
    let verdict = classify_pair(&la, &lb)?;
    let rho = rho_difference(&la, &lb)?;
    let report = thickness_report(&la, &lb)?;

    let conclusions: Vec<String> = verdict
        .conclusions
        .iter()
        .map(|c| serde_json::to_value(c).expect("enum").as_str().unwrap_or("").to_string())
        .collect();
    let mut text = format!(
        "first: {}\nsecond: {}\n",
        describe(&la),
        describe(&lb)
    );
    let comparable_pair = !verdict.conclusions.contains(&Conclusion::NotComparable);
    if comparable_pair {
        text.push_str(&format!(
            "isometric: {}\nhomotopy-equivalent: {}\ntangentially equivalent: {}\nrho-difference: {} (orientation-preserving: {})\n",
            witness_text(verdict.isometric.holds, verdict.isometric.witness, "s"),
            witness_text(verdict.homotopy_equivalent.holds, verdict.homotopy_equivalent.witness, "e"),
            witness_text(verdict.tangentially_equivalent.holds, verdict.tangentially_equivalent.witness, "e"),
            rho_word(&rho),
            serde_json::to_value(rho.oriented_verdict).expect("enum").as_str().unwrap_or(""),
        ));
    }
    text.push_str(&format!("conclusions: {}\n", conclusions.join(", ")));
    text.push_str(&thickness_text(&report));

    let json = json!({
        "schema": SCHEMA,
        "command": "classify",
        "input": { "p": o.p, "a": o.a, "b": o.b },
        "first": la,
        "second": lb,
        "canonical": { "first": la.to_string(), "second": lb.to_string() },
        "classification": verdict,
        "rho": rho_summary(&rho),
        "thickness": report,
    });
    let csv_rows = vec![vec![
        o.p.to_string(),
        la.to_string(),
        la.orientation().to_string(),
        lb.to_string(),
        lb.orientation().to_string(),
        verdict.isometric.holds.to_string(),
        opt(&verdict.isometric.witness),
        verdict.homotopy_equivalent.holds.to_string(),
        opt(&verdict.homotopy_equivalent.witness),
        verdict.tangentially_equivalent.holds.to_string(),
        rho_word(&rho),
        report.comparable.to_string(),
        opt(&report.thickness),
    ]];
    let mut outcome = Outcome {
        code: if report.comparable { EXIT_OK } else { EXIT_NOT_COMPARABLE },
        json,
        text,
        csv_header: vec![
            "p",
            "first",
            "first_orientation",
            "second",
            "second_orientation",
            "isometric",
            "isometry_witness",
            "homotopy_equivalent",
            "homotopy_witness",
            "tangentially_equivalent",
            "rho_difference",
            "comparable",
            "thickness",
        ],
        csv_rows,
    };
    if o.oracle {
        let mut checks = vec![
            Check::new(
                "isometry",
                verdict.isometric.holds,
                isometric_by_search(&la, &lb).is_some(),
            ),
            Check::new(
                "tangential",
                verdict.tangentially_equivalent.holds,
                tangential_by_lattice(&la, &lb)?,
            ),
        ];
        if report.comparable && o.p <= MAILLET_ORACLE_BOUND {
            let d = report.detectors.as_ref().expect("comparable reports carry detectors");
            checks.push(Check::new("h_minus", &d.h_minus, h_minus_maillet(o.p)?));
        }
        apply_checks(&mut outcome, &checks);
    }
    Ok(outcome)
}

pub fn thickness(o: &Opts) -> CliResult {
    if o.a.is_some() || o.b.is_some() {
        let (la, lb) = (space(o, "a", &o.a)?, space(o, "b", &o.b)?);
        let report = thickness_report(&la, &lb)?;
        let text = format!("first: {}\nsecond: {}\n{}", describe(&la), describe(&lb), thickness_text(&report));
        let csv_rows = report
            .entries
            .iter()
            .map(|e| {
                vec![
                    la.to_string(),
                    lb.to_string(),
                    e.k.to_string(),
                    serde_json::to_value(e.verdict).expect("enum").as_str().unwrap_or("").to_string(),
                    serde_json::to_value(e.detector).expect("enum").as_str().unwrap_or("").to_string(),
                ]
            })
            .collect();
        let mut outcome = Outcome {
            code: if report.comparable { EXIT_OK } else { EXIT_NOT_COMPARABLE },
            json: json!({ "schema": SCHEMA, "command": "thickness", "report": report }),
            text,
            csv_header: vec!["first", "second", "k", "verdict", "detector"],
            csv_rows,
        };
        if o.oracle {
            let checks = vec![Check::new(
                "tangential",
                report.comparable,
                tangential_by_lattice(&la, &lb)?,
            )];
            apply_checks(&mut outcome, &checks);
        }
        return Ok(outcome);
    }

    let n = o
        .n
        .ok_or_else(|| Failure::Usage("thickness needs either --a and --b, or -n".into()))?;
    let f = cache::filtration(prime(o)?, n)?;
    let profile = f.thickness_profile();
    let mut text = format!("{}\n", crate::atlas::filtration_line(&f));
    text.push_str(&format!(
        "T(L) order {}, T'(L) order {}, E0K order {}\n",
        f.t_order, f.tprime_order, f.e0k_order
    ));
    for t in &profile {
        text.push_str(&format!(
            "  normal invariant entering at j = {}: thickness in [{}, {}]{}\n",
            t.j,
            t.lo,
            t.hi,
            if t.realized { "" } else { " (stratum may be empty)" }
        ));
    }
    let csv_rows = profile
        .iter()
        .map(|t| vec![f.p.to_string(), f.n.to_string(), t.j.to_string(), t.lo.to_string(), t.hi.to_string(), t.realized.to_string()])
        .collect();
    let mut outcome = Outcome {
        code: EXIT_OK,
        json: json!({ "schema": SCHEMA, "command": "thickness", "filtration": f, "profile": profile }),
        text,
        csv_header: vec!["p", "n", "j", "thickness_lo", "thickness_hi", "realized"],
        csv_rows,
    };
    if o.oracle {
        let mut checks = vec![Check::new("filtration_structure", f.check().is_ok(), true)];
        let m = f.m.min(3);
        let q = o.p.pow(m + 1);
        for x in (0..q).step_by(o.p as usize) {
            let lib = circle_order(prime(o)?, m, x)?;
            let (add, circ) = circle_order_by_iteration(o.p, m, x);
            checks.push(Check::new(
                format!("circle_order m={m} x={x}"),
                format!("{}/{}", lib.loop_order, lib.circle_order),
                format!("{add}/{circ}"),
            ));
        }
        apply_checks(&mut outcome, &checks);
    }
    Ok(outcome)
}

pub fn rho(o: &Opts) -> CliResult {
    let la = space(o, "a", &o.a)?;
    let r = rho_invariant(&la)?;
    let mut text = format!("space: {}\n", describe(&la));
    for g in 1..o.p {
        text.push_str(&format!("  rho(g = {g}) = {}\n", r.at(g)));
    }
    text.push_str(&format!("  sum over g = {}\n", r.total));
    let mut json = json!({ "schema": SCHEMA, "command": "rho", "space": la, "canonical": la.to_string(), "invariant": r });
    let mut csv_rows: Vec<Vec<String>> = (1..o.p)
        .map(|g| vec![la.to_string(), g.to_string(), r.at(g).to_string()])
        .collect();
    let mut code = EXIT_OK;
    if o.b.is_some() {
        let lb = space(o, "b", &o.b)?;
        let d = rho_difference(&la, &lb)?;
        text.push_str(&format!(
            "difference with {}: {} (orientation-preserving: {})\n",
            describe(&lb),
            rho_word(&d),
            serde_json::to_value(d.oriented_verdict).expect("enum").as_str().unwrap_or("")
        ));
        for w in &d.witnesses {
            text.push_str(&format!(
                "  witness e = {} (degree {:+}): {}\n",
                w.e,
                w.degree,
                if w.zero { "zero" } else { "nonzero" }
            ));
        }
        if homotopy_witnesses(&la, &lb).is_empty() {
            code = EXIT_NOT_COMPARABLE;
        }
        json["other"] = json!(lb);
        json["difference"] = rho_summary(&d);
        csv_rows.push(vec![lb.to_string(), "difference".into(), rho_word(&d)]);
    }
    let mut outcome = Outcome {
        code,
        json,
        text,
        csv_header: vec!["space", "g", "value"],
        csv_rows,
    };
    if o.oracle {
        let reversed = rho_invariant(&la.reversed())?;
        let checks = vec![
            Check::new("galois_equivariance", r.is_galois_equivariant(), true),
            Check::new("orientation_reversal", reversed == r.negated(), true),
        ];
        apply_checks(&mut outcome, &checks);
    }
    Ok(outcome)
}

fn small_i64(m: &lensform::IntMatrix) -> Option<IntegerMatrix<i64>> {
    let rows = m
        .row_vec()
        .into_iter()
        .map(|r| r.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<i64>>>())
        .collect::<Option<Vec<_>>>()?;
    Some(IntegerMatrix::from_rows(m.cols(), rows))
}

pub fn ktheory(o: &Opts) -> CliResult {
    let p = prime(o)?;
    let d = low_codim_detectors(p)?;
    let mut text = format!(
        "p = {}\nWh(Z/p) rank: {}\nh-(p): {}\nK~0(Z[Z/p]): {}\n{}\n",
        d.p,
        d.wh_rank,
        d.h_minus,
        serde_json::to_value(d.k0_trivial).expect("enum").as_str().unwrap_or(""),
        d.tate_h0_note
    );
    let mut json = json!({ "schema": SCHEMA, "command": "ktheory", "detectors": d });
    let mut row = vec![
        d.p.to_string(),
        d.wh_rank.to_string(),
        d.h_minus.to_string(),
        serde_json::to_value(d.k0_trivial).expect("enum").as_str().unwrap_or("").to_string(),
        String::new(),
        String::new(),
        String::new(),
    ];
    let mut checks = Vec::new();
    if let Some(n) = o.n {
        if n == 0 {
            return Err(Failure::Usage("-n must be positive".into()));
        }
        let k = KRingPresentation::new(p, n)?;
        let g = k.resolved_group();
        let ko = k.real_part_order();
        text.push_str(&format!(
            "K~(L^{}) = {} (order {}), K~O order {}\n",
            2 * n - 1,
            g,
            g.order(),
            ko
        ));
        json["k_group"] = json!({
            "n": n,
            "invariant_factors": g.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "order": g.order().to_string(),
            "real_part_order": ko.to_string(),
        });
        if n % (p.get() - 1) == 0 {
            let j = im_j_order(p, n)?;
            text.push_str(&format!(
                "im J in degree {}: order {} (usual convention {})\n",
                2 * n - 1,
                j.order,
                j.standard_order
            ));
            json["im_j"] = json!(j);
        }
        row[4] = n.to_string();
        row[5] = g.order().to_string();
        row[6] = ko.to_string();
        if o.oracle {
            checks.push(Check::new(
                "k_group_order",
                g.order(),
                lensform::oracle::cell_count_order(p.get(), n),
            ));
            if g.order().to_u128().is_some_and(|x| x <= MAX_COKERNEL) {
                if let Some(m) = small_i64(k.relations()) {
                    let brute = brute_cokernel(&m)?;
                    let factors: Vec<String> = g.invariant_factors().iter().map(|x| x.to_string()).collect();
                    let brute: Vec<String> = brute.invariant_factors().iter().map(|x| x.to_string()).collect();
                    checks.push(Check::new("k_group_structure", factors.join(","), brute.join(",")));
                }
            }
        }
    }
    if o.oracle && p.get() <= MAILLET_ORACLE_BOUND {
        checks.push(Check::new("h_minus", h_minus(p)?, h_minus_maillet(p.get())?));
    }
    let mut outcome = Outcome {
        code: EXIT_OK,
        json,
        text,
        csv_header: vec!["p", "wh_rank", "h_minus", "k0", "n", "k_group_order", "ko_order"],
        csv_rows: vec![row],
    };
    if o.oracle {
        apply_checks(&mut outcome, &checks);
    }
    Ok(outcome)
}
