use std::sync::Arc;

use nilmult_core::baer::{self, LevelPolicy};
use nilmult_core::extension::{self, Extension, StemCoverOutcome};
use nilmult_core::lie::{self, SeriesReport};
use nilmult_core::{catalog, format, Error, LeibnizAlgebra, Mode, Morphism, Rational, Result};
use serde_json::{json, Value};

use crate::input;
use crate::output::{emit, subspace_json, subspace_text, table_text, vector_json};
use crate::{CatalogAction, Command, Global};

fn policy(g: &Global, mode: Mode, level: Option<usize>) -> LevelPolicy {
    LevelPolicy {
        m_start: level,
        m_max: level,
        mode,
        cap: g.max_dim,
        parallel: false,
    }
}

pub fn run(g: &Global, cmd: &Command) -> Result<()> {
    match cmd {
        Command::Check { alg } => check(g, alg),
        Command::Series {
            alg,
            relative,
            upper,
        } => series(g, alg, relative.as_deref(), *upper),
        Command::Center { alg } => {
            let a = input::algebra(g, alg)?;
            let z = lie::lie_center(&a)?.space;
            emit(
                g,
                "center",
                &format!("Lie-center: {}", subspace_text(&a, &z)),
                json!({ "center": subspace_json(&z) }),
            );
            Ok(())
        }
        Command::Ann { alg } => {
            let a = input::algebra(g, alg)?;
            let z = lie::ann(&a)?.space;
            emit(
                g,
                "ann",
                &format!("ann: {}", subspace_text(&a, &z)),
                json!({ "ann": subspace_json(&z) }),
            );
            Ok(())
        }
        Command::Liezation { alg } => {
            let a = input::algebra(g, alg)?;
            let (l, _) = lie::liezation(&a)?;
            let file = serde_json::to_value(format::AlgebraFile::from_algebra(&l))
                .expect("algebra files serialize");
            emit(g, "liezation", &table_text(&l), json!({ "algebra": file }));
            Ok(())
        }
        Command::Multiplier {
            alg,
            c,
            level,
            auto: _,
            mode,
        } => multiplier(g, alg, *c, *level, (*mode).into()),
        Command::Gammastar { alg, c } => {
            let a = input::algebra(g, alg)?;
            let r = baer::gamma_star(&a, *c, &policy(g, Mode::Minimal, None))?;
            let text = format!(
                "dim gamma*_{} = {} = dim M {} + dim gamma_{}(Q) {}\nlevel {}, stabilized {}",
                c + 1,
                r.dim,
                r.dim_multiplier,
                c + 1,
                r.dim_gamma_c1_q,
                r.level,
                r.stabilized
            );
            emit(
                g,
                "gammastar",
                &text,
                serde_json::to_value(&r).expect("reports serialize"),
            );
            Ok(())
        }
        Command::Zstar { alg, c } => {
            let a = input::algebra(g, alg)?;
            let r = baer::z_star(&a, *c, &policy(g, Mode::Minimal, None))?;
            let text = format!(
                "Z* (c = {c}): {}\nlevel {}, stabilized {}",
                subspace_text(&a, &r.subspace),
                r.level,
                r.stabilized
            );
            let body = json!({
                "c": c,
                "z_star": subspace_json(&r.subspace),
                "level": r.level,
                "stabilized": r.stabilized,
                "exact": r.exact,
                "per_level_dims": r.per_level_dims,
            });
            emit(g, "zstar", &text, body);
            Ok(())
        }
        Command::Capable { alg, c } => capable(g, alg, *c),
        Command::Extcheck {
            total,
            base,
            map,
            c,
        } => extcheck(g, total, base, map, *c),
        Command::Stemcover { alg, c, o } => stemcover(g, alg, *c, o.as_deref()),
        Command::Fourterm { alg, ideal, c } => fourterm(g, alg, ideal, *c),
        Command::Catalog { action } => catalog_cmd(g, action),
    }
}

fn check(g: &Global, alg: &str) -> Result<()> {
    let a = input::algebra(g, alg)?;
    a.ensure_leibniz()?;
    let lie_algebra = lie::ann(&a)?.space.is_zero();
    let lie_class = lie::lie_class(&a)?;
    let abs_class = lie::absolute_class(&a)?;
    let show = |c: Option<usize>| c.map_or("none".to_string(), |c| c.to_string());
    let text = format!(
        "{}: Leibniz identity holds\ndim {}, {} nonzero products, Lie algebra: {}\nLie-class {}, absolute class {}",
        a.name(),
        a.dim(),
        a.product_count(),
        lie_algebra,
        show(lie_class),
        show(abs_class)
    );
    let body = json!({
        "name": a.name(),
        "dim": a.dim(),
        "leibniz": true,
        "lie_algebra": lie_algebra,
        "lie_class": lie_class,
        "absolute_class": abs_class,
    });
    emit(g, "check", &text, body);
    Ok(())
}

fn series_json(s: &SeriesReport<Rational>) -> Value {
    json!({
        "kind": s.kind,
        "dims": s.dims(),
        "class": s.cls,
        "stabilized": s.stabilized,
        "terms": s.terms.iter().map(subspace_json).collect::<Vec<_>>(),
    })
}

fn series(g: &Global, alg: &str, relative: Option<&std::path::Path>, upper: bool) -> Result<()> {
    let a = input::algebra(g, alg)?;
    let (s, label) = if upper {
        (lie::upper_lie_series(&a)?, "upper Lie-central series")
    } else if let Some(path) = relative {
        let vs = input::vectors(path, a.dim())?;
        let n = a.ideal_closure(&vs)?;
        (
            lie::lower_lie_series(&a, Some(&n))?,
            "lower Lie-central series relative to the ideal",
        )
    } else {
        (lie::lower_lie_series(&a, None)?, "lower Lie-central series")
    };
    let mut text = format!("{label}: dims {:?}\n", s.dims());
    match s.cls {
        Some(k) => text.push_str(&format!("class {k}\n")),
        None => text.push_str("does not terminate\n"),
    }
    if upper {
        text.push_str(&format!(
            "maximal Lie-class: {}\n",
            lie::is_maximal_lie_class(&a)?
        ));
    }
    emit(g, "series", &text, series_json(&s));
    Ok(())
}

fn multiplier(g: &Global, alg: &str, c: usize, level: Option<usize>, mode: Mode) -> Result<()> {
    let a = input::algebra(g, alg)?;
    let r = baer::multiplier(&a, c, &policy(g, mode, level))?;
    let per_level: Vec<String> = r
        .per_level_dims
        .iter()
        .map(|d| format!("m={}: {}", d.level, d.dim_multiplier))
        .collect();
    let mut text = format!(
        "dim M^({c}) = {}\nlevel {} ({}), stabilized {}\nper level: {}\ndim gamma*_{} = {}, dim gamma_{}(Q) = {}\n",
        r.dim,
        r.level,
        if r.exact { format!("at least k + c = {}", r.class + c) } else { format!("below k + c = {}", r.class + c) },
        r.stabilized,
        per_level.join(", "),
        c + 1,
        r.dim_gamma_star,
        c + 1,
        r.dim_gamma_c1_q
    );
    if !r.basis_words.is_empty() {
        text.push_str(&format!("basis cosets: {}\n", r.basis_words.join(", ")));
    }
    if r.capped {
        text.push_str("sweep stopped at the dimension cap\n");
    }
    let body = json!({
        "c": c,
        "dim": r.dim,
        "level": r.level,
        "stabilized": r.stabilized,
        "exact": r.exact,
        "capped": r.capped,
        "class": r.class,
        "mode": r.mode,
        "per_level_dims": r.per_level_dims,
        "basis_words": r.basis_words,
        "dim_gamma_star": r.dim_gamma_star,
        "dim_gamma_c1_q": r.dim_gamma_c1_q,
    });
    emit(g, "multiplier", &text, body);
    Ok(())
}

fn capable(g: &Global, alg: &str, c: usize) -> Result<()> {
    let a = input::algebra(g, alg)?;
    let r = baer::capability_cross_check(&a, c, &policy(g, Mode::Minimal, None))?;
    let mut text = format!(
        "{}-Lie-capable: {}\nZ*: {}\nzeta_{c}: {}\nlevel {}, stabilized {}\n",
        c,
        r.capable,
        subspace_text(&a, &r.z_star),
        subspace_text(&a, &r.zeta_c),
        r.level,
        r.stabilized
    );
    for t in &r.tests {
        text.push_str(&format!(
            "  x = {}: M(Q) -> M(Q/<x>) injective {}, x in Z* {}\n",
            a.format_vector(&t.vector),
            t.injective,
            t.in_z_star
        ));
    }
    let tests: Vec<Value> = r
        .tests
        .iter()
        .map(|t| json!({ "vector": vector_json(&t.vector, a.dim()), "injective": t.injective, "in_z_star": t.in_z_star }))
        .collect();
    let body = json!({
        "c": c,
        "capable": r.capable,
        "z_star": subspace_json(&r.z_star),
        "zeta_c": subspace_json(&r.zeta_c),
        "per_vector": tests,
        "routes_agree": r.agrees(),
        "level": r.level,
        "stabilized": r.stabilized,
    });
    emit(g, "capable", &text, body);
    Ok(())
}

fn extcheck(g: &Global, total: &str, base: &str, map: &std::path::Path, c: usize) -> Result<()> {
    let gt = input::algebra(g, total)?;
    let q = input::algebra(g, base)?;
    let cols = input::matrix(map, q.dim(), gt.dim())?;
    let e = Extension::new(Morphism::hom(gt, q, cols)?)?;
    let central = extension::is_c_lie_central(&e, c)?;
    let stem = if central {
        Some(extension::is_c_lie_stem(&e, c)?)
    } else {
        None
    };
    let cover = match baer::nilpotency_class(&e.base) {
        Ok(_) => Some(extension::is_c_lie_stem_cover(
            &e,
            c,
            &policy(g, Mode::Minimal, None),
        )?),
        Err(Error::NotNilpotent) => None,
        Err(err) => return Err(err),
    };
    let mut text = format!(
        "kernel: {}\n{c}-Lie-central: {central}\n{c}-Lie-stem: {}\n",
        subspace_text(&e.total, &e.kernel.space),
        stem.map_or("n/a (not central)".to_string(), |s| s.to_string())
    );
    match &cover {
        Some(r) => text.push_str(&format!(
            "{c}-Lie-stem cover: {} (dim N = {}, dim M = {} at level {}, stabilized {}; induced map {})\n",
            r.is_cover,
            r.dim_kernel,
            r.dim_multiplier,
            r.multiplier_level,
            r.multiplier_stabilized,
            r.induced_map_status()
        )),
        None => text.push_str(&format!("{c}-Lie-stem cover: not evaluated (base is not nilpotent)\n")),
    }
    let body = json!({
        "c": c,
        "kernel": subspace_json(&e.kernel.space),
        "central": central,
        "stem": stem,
        "cover": cover,
        "level": cover.as_ref().map(|r| r.multiplier_level),
        "stabilized": cover.as_ref().map(|r| r.multiplier_stabilized),
    });
    emit(g, "extcheck", &text, body);
    Ok(())
}

fn stemcover(g: &Global, alg: &str, c: usize, out: Option<&std::path::Path>) -> Result<()> {
    let a = input::algebra(g, alg)?;
    let outcome = extension::stem_cover_construct(&a, c, &policy(g, Mode::Minimal, None))?;
    match &outcome {
        StemCoverOutcome::Constructed(s) => {
            let file = format::serialize_algebra(&s.algebra);
            if let Some(path) = out {
                std::fs::write(path, &file)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            let projection: Vec<Value> = s
                .extension
                .pi
                .columns()
                .iter()
                .map(|v| vector_json(v, a.dim()))
                .collect();
            let text = format!(
                "CONSTRUCTED: {c}-Lie-stem cover of dimension {} (dim Q {} + dim M {}) at level {}\n{}kernel: {}",
                s.algebra.dim(),
                a.dim(),
                s.dim_multiplier,
                s.level,
                table_text(&s.algebra),
                subspace_text(&s.algebra, &s.extension.kernel.space)
            );
            let body = json!({
                "c": c,
                "result": outcome.code(),
                "level": s.level,
                "stabilized": s.report.multiplier_stabilized,
                "dim": s.algebra.dim(),
                "dim_multiplier": s.dim_multiplier,
                "algebra": serde_json::from_str::<Value>(&file).expect("algebra files serialize"),
                "projection_columns": projection,
                "report": s.report,
            });
            emit(g, "stemcover", &text, body);
        }
        StemCoverOutcome::NoIdealComplement(n) => {
            let levels: Vec<String> = n.levels_tried.iter().map(|m| m.to_string()).collect();
            let mut text = format!(
                "NO_IDEAL_COMPLEMENT: the multiplier M^({c}) (dim {}) has no ideal complement at level(s) {}{}\n",
                n.dim_multiplier,
                levels.join(", "),
                if n.after_window { "; multiplier stable over the window" } else { "" }
            );
            if let Some(k) = n.lie_class.filter(|&k| c > k && n.dim_multiplier > 0) {
                text.push_str(&format!(
                    "c = {c} exceeds the Lie-class {k} and the multiplier is nonzero: no {c}-Lie-covering exists in this regime\n"
                ));
            }
            let body = json!({
                "c": c,
                "result": outcome.code(),
                "level": n.levels_tried.last(),
                "stabilized": n.after_window,
                "detail": n,
            });
            emit(g, "stemcover", &text, body);
        }
    }
    Ok(())
}

fn fourterm(g: &Global, alg: &str, ideal: &std::path::Path, c: usize) -> Result<()> {
    let a: Arc<LeibnizAlgebra> = input::algebra(g, alg)?;
    let vs = input::vectors(ideal, a.dim())?;
    let n = a.ideal_closure(&vs)?;
    let m = baer::exact_level(&a, c)?;
    let r = baer::four_term_check_with(&a, &n, c, Some(m), Mode::Minimal, g.max_dim)?;
    let next = baer::four_term_check_with(&a, &n, c, Some(m + 1), Mode::Minimal, g.max_dim)?;
    let stabilized = (r.term_kernel, r.dim_m_q, r.dim_m_quotient, r.term_cokernel)
        == (
            next.term_kernel,
            next.dim_m_q,
            next.dim_m_quotient,
            next.term_cokernel,
        );
    let text = format!(
        "ideal N: {}\n{}stabilized {stabilized} (checked at level {})",
        subspace_text(&a, &n.space),
        r.table(),
        m + 1
    );
    let mut body = serde_json::to_value(&r).expect("reports serialize");
    body["stabilized"] = json!(stabilized);
    body["ideal"] = subspace_json(&n.space);
    emit(g, "fourterm", &text, body);
    Ok(())
}

fn catalog_cmd(g: &Global, action: &CatalogAction) -> Result<()> {
    match action {
        CatalogAction::List => {
            let entries = catalog::list();
            let text: String = entries
                .iter()
                .map(|(n, d)| format!("{n:<12} {d}\n"))
                .collect();
            let body = json!({ "entries": entries.iter().map(|(n, d)| json!({"name": n, "description": d})).collect::<Vec<_>>() });
            emit(g, "catalog", &text, body);
        }
        CatalogAction::Show { name } => {
            let name = name.strip_prefix(input::CATALOG_SCHEME).unwrap_or(name);
            let a = catalog::lookup::<Rational>(name, g.max_dim)?;
            let file = serde_json::to_value(format::AlgebraFile::from_algebra(&a))
                .expect("algebra files serialize");
            emit(g, "catalog", &table_text(&a), json!({ "algebra": file }));
        }
    }
    Ok(())
}
