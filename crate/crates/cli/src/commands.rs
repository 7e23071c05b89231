use cartan_gamma::gammawords::{verify_corollary_4_4, verify_proposition_4_2, word_of_root_system};
use cartan_gamma::jacobi::{find_site, root_of_unity_order, GaussSumTable, PrimeSite};
use cartan_gamma::rootkit::mat_vec;
use cartan_gamma::selberg::{compare_complex, compare_real, default_complex_grid, default_real_grid, SelbergParams};
use cartan_gamma::specialfn::trig_identities_suite;
use cartan_gamma::spectra::{
    gamma_and_gamma_tilde, affine_gamma_vector, k_of, k_root, pf_power_iteration, verify_power_iteration,
    verify_theorem_1_1, verify_theorem_1_2_1_3,
};
use cartan_gamma::{
    build_root_system, BigReal, GammaWord, PrecisionContext, Residual, RootSystem, RootSystemLabel,
    VerificationReport,
};
use num_rational::Rational64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{Doc, CSV_DIGITS};
use crate::{Check, CliError, Grid};

type CmdResult = Result<Doc, CliError>;

fn failed(e: cartan_gamma::Error) -> CliError {
    CliError::Failed(e.to_string())
}

fn usage(e: cartan_gamma::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn short(x: &BigReal) -> String {
    x.to_decimal(2)
}

fn parse_word(s: &str) -> Result<GammaWord, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::Usage(format!("invalid word: {e}")))
}

fn int_list(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn roots(label: RootSystemLabel) -> Doc {
    let rs = build_root_system(label);
    let json = json!({
        "type": label.to_string(),
        "rank": rs.rank(),
        "coxeter_number": rs.coxeter_number(),
        "dual_coxeter_number": rs.dual_coxeter_number(),
        "marks": rs.marks(),
        "comarks": rs.comarks(),
        "cartan": rs.cartan(),
        "affine_cartan": rs.affine_cartan_matrix(),
        "positive_roots": rs.positive_roots(),
    });
    let mut doc = Doc::new(json, &["height", "root"], true);
    doc.line(format!("{label}: rank {}, h = {}, h∨ = {}", rs.rank(), rs.coxeter_number(), rs.dual_coxeter_number()));
    doc.line(format!("marks   {}", int_list(rs.marks())));
    doc.line(format!("comarks {}", int_list(rs.comarks())));
    doc.line("Cartan matrix:");
    for row in rs.cartan() {
        doc.line(format!("  {}", row.iter().map(|x| format!("{x:>2}")).collect::<Vec<_>>().join(" ")));
    }
    doc.line(format!("{} positive roots:", rs.positive_roots().len()));
    for a in rs.positive_roots() {
        let ht = rs.height(a).expect("positive root");
        doc.line(format!("  {ht:>3}  {}", int_list(a)));
        doc.row(vec![ht.to_string(), int_list(a)]);
    }
    doc
}

pub fn pf(label: RootSystemLabel, ctx: PrecisionContext, tol: &BigReal) -> CmdResult {
    let rs = build_root_system(label);
    let result = pf_power_iteration(rs.cartan(), ctx, tol).map_err(failed)?;
    let sig = ctx.digits() as usize;
    let json = json!({
        "type": label.to_string(),
        "lambda": result.eigenvalue.to_decimal(sig),
        "vector": result.vector.iter().map(|x| x.to_decimal(sig)).collect::<Vec<_>>(),
        "iterations": result.iterations,
        "residual": short(&result.residual),
    });
    let mut doc = Doc::new(json, &["node", "value"], true);
    doc.line(format!("{label}: λ = {}", result.eigenvalue.to_decimal(sig)));
    for (i, x) in result.vector.iter().enumerate() {
        doc.line(format!("  v[{}] = {}", i + 1, x.to_decimal(sig)));
        doc.row(vec![(i + 1).to_string(), x.to_decimal(CSV_DIGITS)]);
    }
    doc.row(vec!["lambda".into(), result.eigenvalue.to_decimal(CSV_DIGITS)]);
    doc.line(format!("{} iterations, residual {}", result.iterations, short(&result.residual)));
    Ok(doc)
}

pub fn gamma(label: RootSystemLabel, ctx: PrecisionContext) -> CmdResult {
    let rs = build_root_system(label);
    let (big, small) = gamma_and_gamma_tilde(&rs, ctx).map_err(failed)?;
    let affine = affine_gamma_vector(&rs, ctx).map_err(failed)?;
    let sig = ctx.digits() as usize;
    let dec = |v: &[BigReal]| v.iter().map(|x| x.to_decimal(sig)).collect::<Vec<_>>();
    let json = json!({
        "type": label.to_string(),
        "gamma": dec(&big),
        "gamma_tilde": dec(&small),
        "gamma_tilde_0": affine[0].to_decimal(sig),
        "k": k_of(&rs).to_string(),
        "k_root": k_root(&rs, ctx).to_decimal(sig),
    });
    let mut doc = Doc::new(json, &["node", "Gamma", "gamma"], true);
    doc.line(format!("{label}: k = {}, k^(-1/h) = {}", k_of(&rs), k_root(&rs, ctx).to_decimal(sig)));
    doc.line(format!("  γ(α_0) = {}", affine[0].to_decimal(sig)));
    doc.row(vec!["0".into(), String::new(), affine[0].to_decimal(CSV_DIGITS)]);
    for (i, (g, t)) in big.iter().zip(&small).enumerate() {
        doc.line(format!("  Γ(α_{0}) = {1}\n  γ(α_{0}) = {2}", i + 1, g.to_decimal(sig), t.to_decimal(sig)));
        doc.row(vec![(i + 1).to_string(), g.to_decimal(CSV_DIGITS), t.to_decimal(CSV_DIGITS)]);
    }
    Ok(doc)
}

fn word_json(f: &GammaWord) -> Value {
    serde_json::to_value(f).expect("words serialize")
}

pub fn words(label: RootSystemLabel) -> CmdResult {
    let rs = build_root_system(label);
    let mut list = Vec::new();
    let mut doc = Doc::new(Value::Null, &["node", "word", "tilde"], true);
    doc.line(format!("{label}, N = {}", rs.coxeter_number()));
    for i in 1..=rs.rank() {
        let f = word_of_root_system(&rs, i).map_err(failed)?;
        let t = f.tilde();
        list.push(json!({"node": i, "word": word_json(&f), "text": f.to_string(), "tilde": word_json(&t), "tilde_text": t.to_string()}));
        doc.line(format!("  f_{i} = {f}"));
        doc.line(format!("  tilde f_{i} = {t}"));
        doc.row(vec![i.to_string(), f.to_string(), t.to_string()]);
    }
    doc.json = json!({"type": label.to_string(), "N": rs.coxeter_number(), "words": list});
    Ok(doc)
}

fn verdict_json(f: &GammaWord) -> Value {
    let v = f.classify();
    json!({
        "in_C": v.in_c,
        "k": v.k,
        "n": f.n_of().to_string(),
        "witness": v.witness.map(|w| w.to_string()),
    })
}

pub fn classify(label: Option<RootSystemLabel>, word: Option<&str>) -> CmdResult {
    let header = ["node", "word", "n", "in_C", "k", "tilde", "tilde_k"];
    if let Some(s) = word {
        let f = parse_word(s)?;
        let v = f.classify();
        let mut doc = Doc::new(json!({"word": word_json(&f), "text": f.to_string(), "verdict": verdict_json(&f)}), &header, true);
        let k = v.k.map(|k| k.to_string()).unwrap_or_default();
        doc.row(vec![String::new(), f.to_string(), f.n_of().to_string(), v.in_c.to_string(), k.clone(), String::new(), String::new()]);
        match (&v.witness, v.in_c) {
            (_, true) => doc.line(format!("{f}: in C_({},{k})", f.modulus())),
            (Some(w), false) => doc.line(format!("{f}: not in C_{} ({w})", f.modulus())),
            (None, false) => doc.line(format!("{f}: not in C_{}", f.modulus())),
        }
        return Ok(doc);
    }
    let label = label.expect("clap requires --type or --word");
    let rs = build_root_system(label);
    let h = rs.coxeter_number();
    let mut entries = Vec::new();
    let mut doc = Doc::new(Value::Null, &header, true);
    for i in 1..=rs.rank() {
        let f = word_of_root_system(&rs, i).map_err(failed)?;
        let t = f.tilde();
        let (vf, vt) = (f.classify(), t.classify());
        let ok = vf.is_in(-1) && vt.is_in(0);
        doc.pass &= ok;
        let show = |k: Option<i64>| k.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
        doc.line(format!(
            "{} f_{i} = {f}  n = {}, k = {}; tilde k = {}",
            if ok { "ok  " } else { "FAIL" },
            f.n_of(),
            show(vf.k),
            show(vt.k)
        ));
        doc.row(vec![
            i.to_string(),
            f.to_string(),
            f.n_of().to_string(),
            vf.in_c.to_string(),
            show(vf.k),
            t.to_string(),
            show(vt.k),
        ]);
        entries.push(json!({"node": i, "word": word_json(&f), "text": f.to_string(), "verdict": verdict_json(&f), "tilde_verdict": verdict_json(&t)}));
    }
    doc.line(format!("{label}, N = {h}: {}", if doc.pass { "all f in C_(N,-1), all tildes in C_(N,0)" } else { "membership failures" }));
    doc.json = json!({"type": label.to_string(), "N": h, "words": entries, "pass": doc.pass});
    Ok(doc)
}

/// `|R+| = rh/2`, `Σ marks = h`, `Σ comarks = h∨`, `Â δ = 0`, `Â∨ δ∨ = 0`.
fn combinatorics_report(rs: &RootSystem, ctx: PrecisionContext, tol: &BigReal) -> VerificationReport {
    let r = rs.rank() as i64;
    let h = rs.coxeter_number();
    let int = |label: &str, v: i64| Residual { label: label.to_string(), value: BigReal::from_i64(v.abs(), ctx) };
    let max_abs = |v: Vec<i64>| v.into_iter().map(i64::abs).max().unwrap_or(0);
    let residuals = vec![
        int("positive_roots", rs.positive_roots().len() as i64 - r * h / 2),
        int("marks", rs.marks().iter().sum::<i64>() - h),
        int("comarks", rs.comarks().iter().sum::<i64>() - rs.dual_coxeter_number()),
        int("affine_kernel", max_abs(mat_vec(&rs.affine_cartan_matrix(), rs.marks()))),
        int("dual_affine_kernel", max_abs(mat_vec(&rs.dual_affine_cartan_matrix(), rs.comarks()))),
    ];
    VerificationReport::new("roots", rs.label().to_string(), tol.clone(), residuals)
}

fn checks_for(which: Check, rs: &RootSystem, ctx: PrecisionContext, tol: &BigReal) -> cartan_gamma::Result<Vec<VerificationReport>> {
    Ok(match which {
        Check::T11 => vec![verify_theorem_1_1(rs, ctx, tol)?],
        Check::T12 | Check::T13 => vec![verify_theorem_1_2_1_3(rs, ctx, tol)?],
        Check::P42 => vec![verify_proposition_4_2(rs, ctx, tol)?],
        Check::C44 => vec![verify_corollary_4_4(rs, ctx, tol)?],
        Check::All => vec![
            combinatorics_report(rs, ctx, tol),
            verify_theorem_1_1(rs, ctx, tol)?,
            verify_theorem_1_2_1_3(rs, ctx, tol)?,
            verify_proposition_4_2(rs, ctx, tol)?,
            verify_corollary_4_4(rs, ctx, tol)?,
            verify_power_iteration(rs, ctx, tol)?,
        ],
    })
}

fn reports_doc(reports: &[VerificationReport]) -> Doc {
    let pass = reports.iter().all(|r| r.pass);
    let json = Value::Array(reports.iter().map(VerificationReport::to_json).collect());
    let mut doc = Doc::new(json, &["theorem", "type", "label", "residual", "tolerance", "pass"], pass);
    for r in reports {
        doc.line(format!(
            "{} {:<10} {:<4} max residual {} (tol {})",
            if r.pass { "PASS" } else { "FAIL" },
            r.theorem,
            r.type_label,
            short(&r.max_residual()),
            short(&r.tolerance)
        ));
        for f in r.failures() {
            let msg = format!("     {} {}: {} = {}", r.theorem, r.type_label, f.label, short(&f.value));
            eprintln!("{}", msg.trim_start());
            doc.line(msg);
        }
        for res in &r.residuals {
            doc.row(vec![
                r.theorem.clone(),
                r.type_label.clone(),
                res.label.clone(),
                res.value.to_decimal(CSV_DIGITS),
                r.tolerance.to_decimal(CSV_DIGITS),
                (res.value < r.tolerance).to_string(),
            ]);
        }
    }
    let failing = reports.iter().filter(|r| !r.pass).count();
    doc.line(format!("{} reports, {} failing", reports.len(), failing));
    doc
}

pub fn verify(which: Check, label: Option<RootSystemLabel>, ctx: PrecisionContext, tol: &BigReal) -> CmdResult {
    let labels = match label {
        Some(l) => vec![l],
        None => RootSystemLabel::default_battery(),
    };
    let per_type: Vec<cartan_gamma::Result<Vec<VerificationReport>>> =
        labels.par_iter().map(|&l| checks_for(which, &build_root_system(l), ctx, tol)).collect();
    let mut reports = Vec::new();
    for r in per_type {
        reports.extend(r.map_err(failed)?);
    }
    if which == Check::All && label.is_none() {
        reports.push(trig_identities_suite(ctx));
    }
    Ok(reports_doc(&reports))
}

pub fn identities(ctx: PrecisionContext) -> Doc {
    let report = trig_identities_suite(ctx);
    let mut doc = reports_doc(std::slice::from_ref(&report));
    let mut lines = String::new();
    for r in &report.residuals {
        lines.push_str(&format!("  {:<6} {}\n", r.label, short(&r.value)));
    }
    doc.text.push_str(&lines);
    doc
}

pub fn jacobi(
    label: Option<RootSystemLabel>,
    word: Option<&str>,
    prime: Option<u64>,
    pmin: Option<u64>,
    ctx: PrecisionContext,
    tol: &BigReal,
) -> CmdResult {
    let words: Vec<(String, GammaWord)> = match (label, word) {
        (_, Some(s)) => vec![("word".into(), parse_word(s)?)],
        (Some(l), None) => {
            let rs = build_root_system(l);
            (1..=rs.rank())
                .map(|i| word_of_root_system(&rs, i).map(|f| (format!("f_({l},{i})"), f)))
                .collect::<cartan_gamma::Result<_>>()
                .map_err(failed)?
        }
        (None, None) => unreachable!("clap requires --type or --word"),
    };
    let n = words[0].1.modulus();
    let site = match prime {
        Some(p) => PrimeSite::new(n, p).map_err(usage)?,
        None => find_site(n, pmin.unwrap_or(n + 1)).map_err(usage)?,
    };
    let table = GaussSumTable::new(site, ctx);
    let p = BigReal::from_i64(site.p as i64, ctx);
    let sig = 30.min(ctx.digits() as usize);
    let mut doc = Doc::new(Value::Null, &["kind", "index", "re", "im", "abs_residual", "order"], true);
    doc.line(format!("N = {}, p = {}, primitive root g = {}", site.n, site.p, site.g));

    let mut gauss = Vec::new();
    for j in 1..n {
        let g = table.gauss(j).map_err(failed)?;
        let res = (g.norm_sqr() - &p).abs();
        doc.pass &= res < *tol;
        doc.line(format!("  g({j}/{n}) = {g:.sig$}   ||g|² − p| = {}", short(&res)));
        doc.row(vec!["gauss".into(), j.to_string(), g.re.to_decimal(CSV_DIGITS), g.im.to_decimal(CSV_DIGITS), res.to_decimal(CSV_DIGITS), String::new()]);
        gauss.push(json!({"j": j, "value": g.to_json(sig), "norm_residual": short(&res)}));
    }

    let mut entries = Vec::new();
    for (name, f) in &words {
        let j = table.jacobi(f).map_err(failed)?;
        let verdict = f.classify();
        let mut entry = json!({"name": name, "word": word_json(f), "text": f.to_string(), "J": j.to_json(sig)});
        doc.line(format!("  {name} = {f}"));
        doc.line(format!("    J = {j:.sig$}"));
        if verdict.in_c {
            let psi = table.hecke(f).map_err(failed)?;
            let res = (psi.abs() - BigReal::one(ctx)).abs();
            let order = root_of_unity_order(&psi, 2 * n, tol);
            doc.pass &= res < *tol;
            doc.line(format!(
                "    ψ = {psi:.sig$}   ||ψ| − 1| = {}   order {}",
                short(&res),
                order.map(|o| o.to_string()).unwrap_or_else(|| "-".into())
            ));
            doc.row(vec![
                "psi".into(),
                name.clone(),
                psi.re.to_decimal(CSV_DIGITS),
                psi.im.to_decimal(CSV_DIGITS),
                res.to_decimal(CSV_DIGITS),
                order.map(|o| o.to_string()).unwrap_or_default(),
            ]);
            entry["k"] = json!(verdict.k);
            entry["psi"] = psi.to_json(sig);
            entry["abs_residual"] = json!(short(&res));
            entry["order"] = json!(order);
        } else {
            doc.line("    not in C_N: no Hecke character value");
            doc.row(vec!["jacobi".into(), name.clone(), j.re.to_decimal(CSV_DIGITS), j.im.to_decimal(CSV_DIGITS), String::new(), String::new()]);
        }
        entries.push(entry);
    }
    doc.json = json!({
        "N": site.n,
        "p": site.p,
        "g": site.g,
        "gauss_sums": gauss,
        "words": entries,
        "pass": doc.pass,
    });
    Ok(doc)
}

type Point = (Rational64, Rational64, Rational64, u32, bool);

pub fn selberg(grid: Grid, point: Option<Point>, ctx: PrecisionContext) -> CmdResult {
    let zero = Rational64::from_integer(0);
    let points: Vec<(SelbergParams, bool)> = match point {
        Some((a, b, r, n, complex)) => vec![(SelbergParams::new(a, b, r, n), complex)],
        None => {
            let mut v = Vec::new();
            if grid != Grid::Complex {
                for (a, b, r) in default_real_grid() {
                    v.extend([1, 2].map(|n| (SelbergParams::new(a, b, r, n), false)));
                }
            }
            if grid != Grid::Real {
                v.extend(default_complex_grid().into_iter().map(|(a, b)| (SelbergParams::new(a, b, zero, 1), true)));
            }
            v
        }
    };
    let results: Vec<_> = points
        .par_iter()
        .map(|(p, complex)| if *complex { compare_complex(p, ctx) } else { compare_real(p, ctx) })
        .collect();
    let single = point.is_some();
    let mut doc = Doc::new(Value::Null, &["kind", "alpha", "beta", "rho", "n", "closed", "quadrature", "relative_error", "pass"], true);
    doc.line(format!("{:<8} {:>6} {:>6} {:>6} {:>2}  {:<24} {:<24} {}", "kind", "α", "β", "ρ", "n", "closed", "quadrature", "rel. error"));
    let mut rows = Vec::new();
    for ((p, complex), r) in points.iter().zip(results) {
        let c = match r {
            Ok(c) => c,
            // a single user-chosen point outside the quadrature domain is bad input
            Err(e) if single => return Err(usage(e)),
            Err(e) => return Err(failed(e)),
        };
        let limit = if *complex { 1e-6 } else { 1e-8 };
        let ok = c.relative_error < limit;
        doc.pass &= ok;
        let kind = if *complex { "complex" } else { "real" };
        doc.line(format!(
            "{kind:<8} {:>6} {:>6} {:>6} {:>2}  {:<24} {:<24} {:.2e}{}",
            p.alpha.to_string(),
            p.beta.to_string(),
            p.rho.to_string(),
            p.n,
            c.closed.to_decimal(20),
            c.quadrature.to_decimal(16),
            c.relative_error,
            if ok { "" } else { "  FAIL" }
        ));
        doc.row(vec![
            kind.into(),
            p.alpha.to_string(),
            p.beta.to_string(),
            p.rho.to_string(),
            p.n.to_string(),
            c.closed.to_decimal(CSV_DIGITS),
            c.quadrature.to_decimal(CSV_DIGITS),
            format!("{:.3e}", c.relative_error),
            ok.to_string(),
        ]);
        rows.push(json!({
            "kind": kind,
            "alpha": p.alpha.to_string(),
            "beta": p.beta.to_string(),
            "rho": p.rho.to_string(),
            "n": p.n,
            "closed": c.closed.to_decimal(ctx.digits() as usize),
            "quadrature": c.quadrature.to_decimal(17),
            "relative_error": format!("{:.3e}", c.relative_error),
            "pass": ok,
        }));
    }
    doc.json = json!({"results": rows, "pass": doc.pass});
    Ok(doc)
}
