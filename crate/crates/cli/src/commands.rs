use std::fs;
use std::time::Instant;

use serde::Serialize;

use neutralflow_core::bishop::{ambient_congruence, evolve_family};
use neutralflow_core::ibvp::{run, NeumannVariant, SolverConfig};
use neutralflow_core::oracle::reduction::DEFAULT_THETAS;
use neutralflow_core::oracle::{
    identity_convergence, reduction_consistency, FlowOrientation, IdentityConvergence, PolySection,
    ReductionReport,
};
use neutralflow_core::output::{family_artifacts, reduction_csv, run_artifacts, to_json, Artifact};
use neutralflow_core::profiles::ClosedProfile;
use neutralflow_core::verify::{run_verify, Tolerances, VerifyOptions};
use neutralflow_core::{Complex64, Error};

use crate::config::{parse, FileConfig};
use crate::manifest::{resolve_out, write_all};
use crate::{Common, OracleArgs, VerifyArgs, EXIT_CONFIG, EXIT_OK, EXIT_UNMET};

struct Loaded {
    file: FileConfig,
    source: Option<(std::path::PathBuf, String)>,
}

fn load(c: &Common) -> Result<Loaded, String> {
    match &c.config {
        None => Ok(Loaded {
            file: FileConfig::default(),
            source: None,
        }),
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            let file = parse(&text).map_err(|e| format!("{}: {e}", p.display()))?;
            Ok(Loaded {
                file,
                source: Some((p.clone(), text)),
            })
        }
    }
}

fn apply_flags(mut cfg: SolverConfig, c: &Common) -> Result<SolverConfig, String> {
    if let Some(k) = c.k {
        cfg.k = k as f64;
    }
    if c.paper_literal {
        cfg.neumann_variant = NeumannVariant::PaperLiteralCotTwoTheta;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn config_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_CONFIG
}

fn emit(
    c: &Common,
    command: &str,
    loaded: &Loaded,
    artifacts: &[Artifact],
    start: Instant,
) -> bool {
    let out = resolve_out(&c.out);
    let src = loaded
        .source
        .as_ref()
        .map(|(p, t)| (p.as_path(), t.as_str()));
    match write_all(&out, command, src, artifacts, start) {
        Ok(()) => true,
        Err(e) => {
            eprintln!("error: writing {}: {e}", out.display());
            false
        }
    }
}

fn is_precondition(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_) | Error::Ambient(_) | Error::LeavesCross { .. }
    )
}

pub fn solve(c: &Common, start: Instant) -> u8 {
    let loaded = match load(c) {
        Ok(l) => l,
        Err(e) => return config_error(&e),
    };
    let cfg = match loaded.file.solver_config().and_then(|s| apply_flags(s, c)) {
        Ok(s) => s,
        Err(e) => return config_error(&e),
    };
    if let Err(e) = neutralflow_core::ibvp::make_initial(&cfg) {
        return config_error(&e.to_string());
    }
    let rep = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: run failed: {e}");
            return EXIT_UNMET;
        }
    };
    if !c.quiet {
        println!(
            "converged={} t={:.6e} steps={} residual={:.3e} linf_to_limit={:.3e} a={:.12} b={:.12}",
            rep.converged,
            rep.t_final,
            rep.steps,
            rep.final_residual,
            rep.linf_to_limit,
            rep.limit.a,
            rep.limit.b
        );
    }
    if !emit(c, "solve", &loaded, &run_artifacts(&cfg, &rep, ""), start) {
        return EXIT_CONFIG;
    }
    if rep.converged {
        EXIT_OK
    } else {
        EXIT_UNMET
    }
}

pub fn family(c: &Common, start: Instant) -> u8 {
    let loaded = match load(c) {
        Ok(l) => l,
        Err(e) => return config_error(&e),
    };
    let f = &loaded.file;
    let setup = (|| {
        let tmpl = apply_flags(f.solver_config()?, c)?;
        let (kind, v0) = f.ambient()?;
        let angles = f.leaf_angles(v0)?;
        let opts = f.family_options(v0, tmpl.grid_n, c.seed.unwrap_or(0));
        Ok::<_, String>((tmpl, kind, v0, angles, opts))
    })();
    let (tmpl, kind, v0, angles, opts) = match setup {
        Ok(s) => s,
        Err(e) => return config_error(&e),
    };
    let amb = match ambient_congruence(kind, v0) {
        Ok(a) => a,
        Err(e) => return config_error(&e.to_string()),
    };
    let rep = match evolve_family(&amb, &angles, &tmpl, &opts) {
        Ok(r) => r,
        Err(e) if is_precondition(&e) => return config_error(&e.to_string()),
        Err(e) => {
            eprintln!("error: family run failed: {e}");
            return EXIT_UNMET;
        }
    };
    if !c.quiet {
        for (i, l) in rep.leaves.iter().enumerate() {
            println!(
                "leaf {i} vartheta={:.6} converged={} t={:.4e} linf_to_limit={:.3e} axis_p2={:.9}",
                l.vartheta, l.report.converged, l.report.t_final, l.report.linf_to_limit, l.axis_p2
            );
        }
        let min = rep
            .min_separation
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        println!(
            "filling={} min_separation={min:.3e} axis_slopes_increasing={}",
            rep.filling, rep.axis_slopes_increasing
        );
    }
    if !emit(c, "family", &loaded, &family_artifacts(&rep), start) {
        return EXIT_CONFIG;
    }
    if rep.filling {
        EXIT_OK
    } else {
        EXIT_UNMET
    }
}

#[derive(Debug, Serialize)]
struct OracleJson {
    k: f64,
    reports: Vec<ReductionReport>,
    identities: IdentityConvergence,
}

fn parse_thetas(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<f64>()
                .map_err(|e| format!("bad angle {x:?} in --thetas: {e}"))
        })
        .collect()
}

pub fn oracle(o: &OracleArgs, start: Instant) -> u8 {
    let c = &o.common;
    let loaded = match load(c) {
        Ok(l) => l,
        Err(e) => return config_error(&e),
    };
    let thetas = match (&o.thetas, &loaded.file.oracle.thetas) {
        (Some(s), _) => match parse_thetas(s) {
            Ok(t) => t,
            Err(e) => return config_error(&e),
        },
        (None, Some(t)) => t.clone(),
        (None, None) => DEFAULT_THETAS.to_vec(),
    };
    if thetas.is_empty() {
        return config_error("oracle needs at least one sample angle");
    }
    let k = c.k.unwrap_or(2) as f64;
    let mut reports = Vec::new();
    for p in ClosedProfile::oracle_fixtures() {
        match reduction_consistency(&p, &thetas, FlowOrientation::Parabolic) {
            Ok(r) => reports.push(r),
            Err(e) => return config_error(&e.to_string()),
        }
    }

    let poly = PolySection::seeded(c.seed.unwrap_or(0), 4, 0.5);
    let identities = identity_convergence(
        |z| poly.value(z),
        Complex64::new(0.2, 0.1),
        &[1e-2, 5e-3, 2.5e-3],
    );

    if !c.quiet {
        for r in &reports {
            println!(
                "{}: k_hat = {:.6} ± {:.1e} ({} excluded)",
                r.profile, r.k_mean, r.k_spread, r.excluded
            );
            if k == 1.0 {
                for s in &r.samples {
                    println!(
                        "  theta={:.3} rhs_k1 - psi_dot = {:.9e}  predicted sqrt(psi)cot2theta = {:.9e}",
                        s.theta, s.k1_mismatch, s.predicted_mismatch
                    );
                }
            }
        }
        println!(
            "identity residual orders: first {:.3}, second {:.3}",
            identities.order_first, identities.order_second
        );
    }
    // k = 2 must reproduce the full flow; k = 1 must miss it by exactly √ψ·cot 2θ
    let ok = if k == 2.0 {
        reports
            .iter()
            .all(|r| (r.k_mean - 2.0).abs() <= 1e-3 && r.k_spread <= 1e-3)
    } else {
        reports.iter().all(|r| r.max_mismatch_error <= 1e-3)
    };
    let json = OracleJson {
        k,
        reports,
        identities,
    };
    let arts = vec![
        Artifact::new("oracle.csv", reduction_csv(&json.reports)),
        Artifact::new("oracle.json", to_json(&json)),
    ];
    if !emit(c, "oracle", &loaded, &arts, start) {
        return EXIT_CONFIG;
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_UNMET
    }
}

pub fn verify(v: &VerifyArgs, start: Instant) -> u8 {
    let c = &v.common;
    let loaded = match load(c) {
        Ok(l) => l,
        Err(e) => return config_error(&e),
    };
    let s = &loaded.file.verify;
    let d = VerifyOptions::default();
    let tol = v.tolerance.or(s.tolerance);
    if let Some(t) = tol {
        if !(t >= 0.0) {
            return config_error(&format!("tolerance {t} must be non-negative"));
        }
    }
    let opts = VerifyOptions {
        seed: c.seed.unwrap_or(d.seed),
        jets: v.jets.or(s.jets).unwrap_or(d.jets),
        sections: s.sections.unwrap_or(d.sections),
        tolerances: tol.map_or(Tolerances::default(), Tolerances::uniform),
        execution: s.execution.unwrap_or(d.execution),
    };
    if opts.jets == 0 {
        return config_error("verify needs at least one jet");
    }
    let rep = run_verify(&opts);
    if !c.quiet {
        println!(
            "{:<24} {:>8} {:>12} {:>12}  result",
            "check", "samples", "worst", "tolerance"
        );
        for r in &rep.rows {
            println!(
                "{:<24} {:>8} {:>12.3e} {:>12.3e}  {}",
                r.name,
                r.samples,
                r.worst,
                r.tolerance,
                if r.passed { "pass" } else { "FAIL" }
            );
        }
    }
    if !emit(
        c,
        "verify",
        &loaded,
        &[Artifact::new("verify.json", to_json(&rep))],
        start,
    ) {
        return EXIT_CONFIG;
    }
    if rep.all_passed {
        EXIT_OK
    } else {
        EXIT_UNMET
    }
}
