use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use screenlab::combinat::BraidingMatrix;
use screenlab::monodromy::{
    default_shell_cap, f_hbar, f_minus, EvalReport, MonodromyParams, SeriesConfig,
};
use screenlab::nichols::hilbert_series;
use screenlab::numeric::{expi_pi, parse_rational, parse_rational_list, to_f64, Rational};
use screenlab::selberg::{selberg_report, SelbergOptions, SelbergParams};
use screenlab::symformula::{f_tilde, verify_symmetrizer_with};
use screenlab::voa::{
    screening_product_direct_with_headroom, screening_product_formula, trivial_level_relations,
    Lattice, LatticePoint, RootSystem, VoaElement,
};

use crate::output::{complex, num, Output};
use crate::table::{ROWS, TOL, ZERO_TOL};
use crate::{Common, Failure, ScreenMethod};

type Res = Result<Output, Failure>;

fn rationals(v: &[Rational]) -> Value {
    json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn report_fields(o: &mut Output, r: &EvalReport) {
    o.set("value", complex(r.value));
    o.set("error_estimate", json!(r.abs_error_estimate));
    o.set("converged", json!(r.converged));
    o.set("method", json!(r.method.as_str()));
    o.set("terms", json!(r.terms_or_nodes));
    o.table(
        &["re", "im", "error_estimate", "converged", "method", "terms"],
        vec![vec![
            num(r.value.re),
            num(r.value.im),
            num(r.abs_error_estimate),
            r.converged.to_string(),
            r.method.as_str().to_string(),
            r.terms_or_nodes.to_string(),
        ]],
    );
}

fn monodromy_params(m: &str, mm: &str) -> Result<MonodromyParams, Failure> {
    Ok(MonodromyParams::parse(m, mm)?)
}

pub fn fmono(c: &Common, m: &str, mm: &str, hbar: Option<&str>, shell_cap: Option<usize>) -> Res {
    let p = monodromy_params(m, mm)?;
    let mut o = Output::new("fmono");
    o.set("m", rationals(p.m()));
    o.set("mm", rationals(p.mm_upper()));
    let r = match hbar {
        None => f_minus(&p, c.tol, shell_cap)?,
        Some(h) => {
            let h: Vec<f64> = parse_rational_list(h)?.iter().map(to_f64).collect();
            o.set("hbar", json!(h));
            let p = p.with_hbar(h)?;
            let cap = shell_cap.unwrap_or_else(|| default_shell_cap(p.n()));
            f_hbar(
                &p,
                &SeriesConfig {
                    tol: c.tol,
                    shell_cap,
                },
            )?
            .require_converged(cap)?
        }
    };
    report_fields(&mut o, &r);
    Ok(o)
}

pub fn ftilde(c: &Common, m: &str, mm: &str) -> Res {
    let p = monodromy_params(m, mm)?;
    let r = f_tilde(&p, c.tol)?;
    let mut o = Output::new("ftilde");
    o.set("m", rationals(p.m()));
    o.set("mm", rationals(p.mm_upper()));
    report_fields(&mut o, &r);
    Ok(o)
}

pub fn symcheck(c: &Common, n: usize, m: &str, mm: &str, threshold: f64) -> Res {
    let p = monodromy_params(m, mm)?;
    if p.n() != n {
        return Err(Failure::Usage(format!(
            "--n {n} but --m has {} entries",
            p.n()
        )));
    }
    let r = verify_symmetrizer_with(&p, c.tol, c.seed)?;
    let mut o = Output::new("symcheck");
    o.set("m", rationals(p.m()));
    o.set("mm", rationals(p.mm_upper()));
    o.set("lhs", complex(r.lhs));
    o.set("rhs", complex(r.rhs));
    o.set("residual", json!(r.residual));
    o.set("propagated_error", json!(r.propagated_error()));
    o.set("threshold", json!(threshold));
    let terms: Vec<Value> = r
        .per_sigma
        .iter()
        .map(|(s, v)| json!({"sigma": s.images().iter().map(|i| i + 1).collect::<Vec<_>>(), "term": complex(*v)}))
        .collect();
    o.set("terms", Value::Array(terms));
    o.passed = r.residual < threshold;
    o.set("pass", json!(o.passed));
    o.table(
        &["lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "pass"],
        vec![vec![
            num(r.lhs.re),
            num(r.lhs.im),
            num(r.rhs.re),
            num(r.rhs.im),
            num(r.residual),
            o.passed.to_string(),
        ]],
    );
    Ok(o)
}

pub fn selberg(c: &Common, m: &str, mbar: Option<&str>, mm: &str) -> Res {
    let m = parse_rational_list(m)?;
    let mbar = match mbar {
        Some(s) => parse_rational_list(s)?,
        None => vec![Rational::from_integer(0.into()); m.len()],
    };
    let mm = parse_rational_list(mm)?;
    let p = SelbergParams::new(m, mbar, mm)?;
    let opts = SelbergOptions {
        tol: c.tol,
        seed: c.seed,
        ..SelbergOptions::default()
    };
    let r = selberg_report(&p, &opts)?;
    let mut o = Output::new("selberg");
    o.set("m", rationals(p.m()));
    o.set("mbar", rationals(p.mbar()));
    o.set("mm", rationals(p.mm_upper()));
    report_fields(&mut o, &r);
    Ok(o)
}

pub fn nichols(_c: &Common, rank: usize, q: &str, nmax: usize) -> Res {
    let v = parse_rational_list(q)?;
    let matrix: Vec<Vec<Rational>> = if v.len() == rank * rank {
        v.chunks(rank).map(|r| r.to_vec()).collect()
    } else if v.len() == rank * (rank + 1) / 2 {
        let mut m = vec![vec![Rational::from_integer(0.into()); rank]; rank];
        let mut it = v.into_iter();
        for i in 0..rank {
            for j in i..rank {
                let x = it.next().unwrap();
                m[i][j] = x.clone();
                m[j][i] = x;
            }
        }
        m
    } else {
        return Err(Failure::Usage(format!(
            "--q needs {} (full) or {} (upper triangle) entries for rank {rank}",
            rank * rank,
            rank * (rank + 1) / 2
        )));
    };
    let b = BraidingMatrix::new(matrix)?;
    let h = hilbert_series(&b, nmax)?;
    let mut o = Output::new("nichols");
    o.set("braiding", b.to_json());
    o.set("hilbert_series", json!(h));
    o.set("total_through_nmax", json!(h.iter().sum::<usize>()));
    o.table(
        &["n", "dimension"],
        h.iter()
            .enumerate()
            .map(|(n, d)| vec![n.to_string(), d.to_string()])
            .collect(),
    );
    Ok(o)
}

fn read_arg(s: &str) -> Result<String, Failure> {
    if s.trim_start().starts_with('{') || s.trim_start().starts_with('[') {
        Ok(s.to_string())
    } else {
        std::fs::read_to_string(s).map_err(|e| Failure::Usage(format!("cannot read {s}: {e}")))
    }
}

fn point(s: &str) -> Result<LatticePoint, Failure> {
    Ok(LatticePoint(parse_rational_list(s)?))
}

pub fn screen(
    c: &Common,
    lattice: &str,
    alphas: &str,
    lambda: Option<&str>,
    input: Option<&Path>,
    method: ScreenMethod,
    headroom: u32,
) -> Res {
    let lat = Lattice::from_json(&read_arg(lattice)?)?;
    let alphas: Vec<LatticePoint> = alphas.split(';').map(point).collect::<Result<_, _>>()?;
    let lambda = lambda.map(point).transpose()?;
    let v = match (input, &lambda) {
        (Some(path), _) => {
            let s = read_arg(&path.to_string_lossy())?;
            VoaElement::<Complex64>::from_json(&s, lat.rank())?
        }
        (None, Some(l)) => VoaElement::exp(l),
        (None, None) => return Err(Failure::Usage("screen needs --lambda or --input".into())),
    };
    for a in &alphas {
        lat.check_point(a)?;
    }
    let result = match method {
        ScreenMethod::Formula => {
            let l = lambda.as_ref().ok_or_else(|| {
                Failure::Usage("the formula method acts on e^{φ_λ}; pass --lambda".into())
            })?;
            if input.is_some() {
                return Err(Failure::Usage(
                    "the formula method takes --lambda, not --input".into(),
                ));
            }
            screening_product_formula(
                &lat,
                &alphas,
                l,
                c.trunc,
                &SeriesConfig {
                    tol: c.tol,
                    shell_cap: None,
                },
            )?
        }
        ScreenMethod::Direct => {
            screening_product_direct_with_headroom(&lat, &alphas, &v, Some(c.trunc), headroom)?
        }
    };
    let mut o = Output::new("screen");
    o.set("lattice", lat.to_json());
    o.set(
        "alphas",
        json!(alphas.iter().map(|a| a.to_json()).collect::<Vec<_>>()),
    );
    o.set("truncation", json!(c.trunc));
    o.set("element", result.to_json());
    o.set("max_abs", json!(result.max_abs()));
    o.table(
        &["monomial", "lattice", "re", "im"],
        result
            .terms()
            .map(|(u, b, z)| vec![u.to_string(), b.to_string(), num(z.re), num(z.im)])
            .collect(),
    );
    Ok(o)
}

pub fn trivial_level(c: &Common, root: &str) -> Res {
    let g = RootSystem::parse(root)?;
    let r = trivial_level_relations(g, c.trunc)?;
    let mut o = Output::new("trivial-level");
    o.set("root_system", json!(g.name()));
    o.set("degree", json!(r.degree));
    o.set("basis_size", json!(r.basis_size));
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|k| json!({"relation": k.relation, "vectors": k.vectors, "failures": k.failures, "first_failure": k.first_failure}))
        .collect();
    o.set("checks", Value::Array(checks));
    o.passed = r.passed();
    o.set("pass", json!(o.passed));
    o.table(
        &["relation", "vectors", "failures"],
        r.checks
            .iter()
            .map(|k| {
                vec![
                    k.relation.clone(),
                    k.vectors.to_string(),
                    k.failures.to_string(),
                ]
            })
            .collect(),
    );
    Ok(o)
}

pub fn paper_table(c: &Common) -> Res {
    let mut o = Output::new("paper-table");
    let mut rows = Vec::new();
    let mut docs = Vec::new();
    let mut all = true;
    for row in &ROWS {
        let (m1, m2, m12) = (
            parse_rational(row.m1)?,
            parse_rational(row.m2)?,
            parse_rational(row.m12)?,
        );
        let p = MonodromyParams::new(vec![m1.clone(), m2.clone()], vec![m12.clone()])?;
        let swapped = MonodromyParams::new(vec![m2, m1], vec![m12.clone()])?;
        let f = f_minus(&p, c.tol.min(1e-10), None)?.value;
        let a = f_tilde(&p, c.tol.min(1e-9))?.value;
        let b = f_tilde(&swapped, c.tol.min(1e-9))?.value;
        let residual = (f - row.f).norm();
        let pass = if row.f == Complex64::new(0.0, 0.0) {
            f.norm() < ZERO_TOL
        } else {
            residual < TOL
        };
        all &= pass;
        let q = expi_pi::<f64>(&m12);
        let component = |got: Complex64, want: Complex64| json!({"expected": complex(want), "observed": complex(got), "residual": (got - want).norm()});
        docs.push(json!({
            "m1": row.m1,
            "m2": row.m2,
            "m12": row.m12,
            "expected": complex(row.f),
            "observed": complex(f),
            "residual": residual,
            "pass": pass,
            "ftilde_first": component(a, row.first),
            "ftilde_second": component(b, row.second),
            "identity_residual_listed": (row.f - (row.first + q * row.second)).norm(),
            "identity_residual_observed": (f - (a + q * b)).norm(),
        }));
        rows.push(vec![
            row.m1.to_string(),
            row.m2.to_string(),
            row.m12.to_string(),
            num(row.f.re),
            num(row.f.im),
            num(f.re),
            num(f.im),
            num(residual),
            pass.to_string(),
        ]);
    }
    o.set("tolerance", json!(TOL));
    o.set("rows", Value::Array(docs));
    o.passed = all;
    o.set("pass", json!(all));
    o.table(
        &[
            "m1",
            "m2",
            "m12",
            "expected_re",
            "expected_im",
            "observed_re",
            "observed_im",
            "residual",
            "pass",
        ],
        rows,
    );
    Ok(o)
}
