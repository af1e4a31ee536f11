use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use hilbert_modular::congruence::{Flavor, GroupSpec, GroupSpecJson};
use hilbert_modular::cusps::{canonical_depth_bound, depth_product_bound, normalized_norm_form, CoverVariant};
use hilbert_modular::hyperbolic::{curve_volume_in_horoball, TestCurve};
use hilbert_modular::numberfield::{element_to_spec, unit_group, FractionalIdeal, IdealSpec};
use hilbert_modular::rational::format_rational;
use hilbert_modular::thresholds::evaluate_level;
use hilbert_modular::toroidal::{cusp_resolution_fan, lelong_number, Fan, FanJson};
use hilbert_modular::verify::{self, Fixtures, VerifyConfig};
use hilbert_modular::{Error, Result};

use crate::input;

/// What a command produced: the report and whether its checks passed.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub passed: bool,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn ideal_rows(i: &FractionalIdeal) -> Vec<Vec<String>> {
    i.basis().iter().map(|b| b.coords_strings()).collect()
}

pub fn field_info(field_arg: &str, precision: f64) -> Result<Outcome> {
    let f = input::field(field_arg)?;
    let embeddings: Vec<Value> = (0..f.degree())
        .map(|k| {
            let b = f.basis_element(k);
            let iv = f.embed(&b, precision);
            json!({
                "basis_element": k,
                "lo": iv.iter().map(|r| r.lo.to_f64().unwrap_or(f64::NAN)).collect::<Vec<_>>(),
                "hi": iv.iter().map(|r| r.hi.to_f64().unwrap_or(f64::NAN)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let units = unit_group(&f);
    let mut text = String::new();
    writeln!(text, "field      {}", f.label()).ok();
    writeln!(text, "degree     {}", f.degree()).ok();
    writeln!(text, "disc       {}", f.discriminant()).ok();
    for e in &embeddings {
        writeln!(text, "basis[{}]   {} .. {}", e["basis_element"], e["lo"], e["hi"]).ok();
    }
    let units_json = match &units {
        Ok(u) => {
            let r = u.report();
            for (k, x) in r.fundamental.iter().enumerate() {
                writeln!(text, "unit[{k}]    ({}) norm {}", x.join(", "), r.fundamental_norms[k]).ok();
            }
            for (k, x) in r.totally_positive.iter().enumerate() {
                writeln!(text, "unit+[{k}]   ({})", x.join(", ")).ok();
            }
            to_value(&r)
        }
        Err(e) => {
            writeln!(text, "units      unavailable: {e}").ok();
            json!({ "unavailable": e.to_string() })
        }
    };
    let json = json!({
        "field": f.label(),
        "degree": f.degree(),
        "min_poly": f.min_poly().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "integral_basis": f.integral_basis().iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "discriminant": f.discriminant().to_string(),
        "precision": precision,
        "embeddings": embeddings,
        "units": units_json,
    });
    Ok(Outcome { json, text, passed: true })
}

pub struct DepthArgs<'a> {
    pub field: Option<&'a str>,
    pub group: Option<&'a str>,
    pub level: &'a str,
    pub module: &'a str,
    pub flavor: Flavor,
    pub first: &'a str,
    pub second: &'a str,
}

fn build_group(args: &DepthArgs<'_>) -> Result<GroupSpec> {
    if let Some(g) = args.group {
        return input::load::<GroupSpecJson>("group", g)?.build();
    }
    let f = input::field(args.field.ok_or_else(|| Error::InvalidInput("depth needs --field or --group".into()))?)?;
    let level = input::ideal(&f, "level", args.level)?;
    let module = input::ideal(&f, "module ideal", args.module)?;
    GroupSpec::new(module, level, args.flavor)
}

pub fn depth(args: &DepthArgs<'_>) -> Result<Outcome> {
    let group = build_group(args)?;
    let f = group.field().clone();
    let first = input::cusp(&f, args.first)?;
    let second = input::cusp(&f, args.second)?;
    let report = depth_product_bound(&first, &second, &group)?;
    let bound = match group.flavor() {
        Flavor::Full => None,
        _ => Some((
            canonical_depth_bound(&group, CoverVariant::Torsion)?,
            canonical_depth_bound(&group, CoverVariant::Principal)?,
        )),
    };
    let passed = report.holds();
    let r = report.to_json();
    let mut text = String::new();
    writeln!(text, "group      {} level {} (norm {})", group.flavor().name(), group.level(), r.level_norm).ok();
    writeln!(text, "cusps      {:?}  {:?}", first, second).ok();
    writeln!(text, "lattice 1  {}  min {}", report.lattice_at_first, r.min_first).ok();
    writeln!(text, "lattice 2  {}  min {}", report.lattice_at_second, r.min_second).ok();
    writeln!(text, "product    {} >= {}: {}", r.product, r.level_norm, r.bound_holds).ok();
    writeln!(text, "containment {}", r.containment_holds).ok();
    if let Some((torsion, _)) = &bound {
        writeln!(text, "depth >=   {} (sqrt of the level norm)", torsion.value).ok();
    }
    writeln!(text, "{}", if passed { "PASS" } else { "FAIL" }).ok();
    let json = json!({
        "field": f.label(),
        "group": {
            "flavor": group.flavor(),
            "module_ideal": ideal_rows(group.module_ideal()),
            "level": ideal_rows(group.level()),
        },
        "first": to_value(&first.to_spec()),
        "second": to_value(&second.to_spec()),
        "depth": to_value(&r),
        "canonical_bound": bound.as_ref().map(|(t, p)| json!({ "torsion": to_value(t), "principal": to_value(p) })),
        "passed": passed,
    });
    Ok(Outcome { json, text, passed })
}

pub fn resolve(field_arg: &str, lattice_arg: &str, fan_arg: Option<&str>) -> Result<Outcome> {
    let f = input::field(field_arg)?;
    let fan: Fan = match fan_arg {
        Some(path) => input::load::<FanJson>("fan", path)?.build(&f)?,
        None => {
            let lattice = input::ideal(&f, "lattice", lattice_arg)?;
            let units = unit_group(&f)?;
            cusp_resolution_fan(&lattice, units.quadratic_generator()?)?
        }
    };
    let check = fan.check();
    // The norm minimum is only available in degree two; other fans are reported without Lelong numbers.
    let form = normalized_norm_form(fan.lattice()).ok();
    let cones: Vec<Value> = fan
        .cones()
        .iter()
        .map(|c| {
            let lelong = form.as_ref().map(|form| lelong_number(c, form)).transpose()?;
            Ok(json!({
                "generators": c.generators().iter().map(|g| g.coords_strings()).collect::<Vec<_>>(),
                "lelong": lelong.as_ref().map(to_value),
            }))
        })
        .collect::<Result<_>>()?;
    let rays: Vec<Vec<String>> = fan.rays().iter().map(|r| r.coords_strings()).collect();
    let mut text = String::new();
    writeln!(text, "lattice    {}", fan.lattice()).ok();
    for u in fan.units() {
        writeln!(text, "unit       ({})", u.coords_strings().join(", ")).ok();
    }
    for (k, r) in rays.iter().enumerate() {
        writeln!(text, "ray[{k}]     ({})", r.join(", ")).ok();
    }
    if let Some(cycle) = fan.cycle() {
        let c: Vec<String> = cycle.iter().map(ToString::to_string).collect();
        writeln!(text, "cycle      [{}]", c.join(", ")).ok();
    }
    writeln!(
        text,
        "check      smooth {} primitive {} invariant {:?} tiles {:?} cycle {:?}",
        check.smooth, check.primitive, check.invariant, check.tiles_period, check.cycle_consistent
    )
    .ok();
    for p in &check.problems {
        writeln!(text, "problem    {p}").ok();
    }
    let passed = check.passed();
    writeln!(text, "{}", if passed { "PASS" } else { "FAIL" }).ok();
    let json = json!({
        "field": f.label(),
        "lattice": to_value(&IdealSpec::from_ideal(fan.lattice())),
        "units": fan.units().iter().map(element_to_spec).collect::<Vec<_>>(),
        "rays": rays,
        "cycle": fan.cycle().map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>()),
        "self_intersections": fan.self_intersections().map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>()),
        "cones": cones,
        "check": to_value(&check),
        "fan": to_value(&fan.to_json()?),
        "passed": passed,
    });
    Ok(Outcome { json, text, passed })
}

pub fn thresholds(n: u32, norm: &str, lambda: Option<&str>) -> Result<Outcome> {
    let norm = input::rational("norm", norm)?;
    let lambda = lambda.map(|l| input::rational("lambda", l)).transpose()?;
    let reports = evaluate_level(n, &norm, lambda.as_ref())?;
    let mut text = String::new();
    for r in &reports {
        let flag = match r.satisfied {
            Some(true) => "satisfied",
            Some(false) => "not satisfied",
            None => "undecided",
        };
        let exact = r.exact.as_deref().unwrap_or("-");
        writeln!(text, "{:<22} {:<24} = {:<14.6e} {flag:<14} {}", r.name, exact, r.value.mid(), r.statement).ok();
    }
    Ok(Outcome { json: json!({ "n": n, "norm": format_rational(&norm), "reports": to_value(&reports) }), text, passed: true })
}

pub fn verify(seed: u64, suites: Vec<String>, fixtures_dir: Option<&str>) -> Result<Outcome> {
    let fixtures = match fixtures_dir {
        Some(d) => Fixtures::from_dir(std::path::Path::new(d))?,
        None => Fixtures::builtin(),
    };
    let report = verify::run(&VerifyConfig { seed, suites, fixtures })?;
    let mut text = String::new();
    writeln!(text, "seed {seed}").ok();
    for s in &report.suites {
        let margin = s.worst_margin.map(|m| format!("{m:.3e}")).unwrap_or_else(|| "-".into());
        writeln!(
            text,
            "{} {:<20} cases {:>6}  failures {:>4}  margin {margin}",
            if s.passed { "PASS" } else { "FAIL" },
            s.name,
            s.cases,
            s.failures
        )
        .ok();
        for n in s.notes.iter().filter(|n| n.starts_with("FAIL")) {
            writeln!(text, "     {n}").ok();
        }
    }
    writeln!(text, "{}", if report.passed { "all suites passed" } else { "verification failed" }).ok();
    Ok(Outcome { json: to_value(&report), text, passed: report.passed })
}

pub struct VolumeArgs<'a> {
    pub curves: Option<&'a str>,
    pub names: &'a [String],
    pub s_min: f64,
    pub s_max: f64,
    pub points: usize,
}

/// Rows `(curve, s, volume, normalized, error)`.
pub fn volume_rows(args: &VolumeArgs<'_>) -> Result<Vec<(String, f64, f64, f64, f64)>> {
    if !(args.s_min > 0.0) || !(args.s_max >= args.s_min) || args.points == 0 {
        return Err(Error::InvalidInput("need 0 < s-min <= s-max and at least one point".into()));
    }
    let curves: Vec<TestCurve> = match args.curves {
        Some(p) => input::load("curves", p)?,
        None => Fixtures::builtin().curves,
    };
    let selected: Vec<&TestCurve> = curves.iter().filter(|c| args.names.is_empty() || args.names.contains(&c.name)).collect();
    if selected.is_empty() {
        return Err(Error::InvalidInput("no curve matches the requested names".into()));
    }
    let depths: Vec<f64> = if args.points == 1 {
        vec![args.s_min]
    } else {
        let (a, b) = (args.s_min.ln(), args.s_max.ln());
        (0..args.points).map(|k| (a + (b - a) * k as f64 / (args.points - 1) as f64).exp()).collect()
    };
    let mut rows = Vec::new();
    for c in selected {
        for &s in &depths {
            let v = curve_volume_in_horoball(c, s)?;
            let k = s.powf(-1.0 / c.dim() as f64);
            rows.push((c.name.clone(), s, v.value, v.value * k, v.error));
        }
    }
    Ok(rows)
}

pub fn volume(args: &VolumeArgs<'_>) -> Result<Outcome> {
    let rows = volume_rows(args)?;
    let mut text = String::new();
    writeln!(text, "{:<16} {:>12} {:>16} {:>16} {:>10}", "curve", "s", "volume", "normalized", "error").ok();
    for (name, s, v, nv, e) in &rows {
        writeln!(text, "{name:<16} {s:>12.6} {v:>16.10} {nv:>16.10} {e:>10.2e}").ok();
    }
    let json = json!({
        "rows": rows
            .iter()
            .map(|(name, s, v, nv, e)| json!({ "curve": name, "s": s, "volume": v, "normalized": nv, "error": e }))
            .collect::<Vec<_>>(),
    });
    Ok(Outcome { json, text, passed: true })
}

pub fn volume_csv(args: &VolumeArgs<'_>) -> Result<String> {
    let rows = volume_rows(args)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
    w.write_record(["curve", "s", "volume", "normalized", "error"]).map_err(io)?;
    for (name, s, v, nv, e) in &rows {
        w.write_record([name.clone(), s.to_string(), v.to_string(), nv.to_string(), e.to_string()]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
