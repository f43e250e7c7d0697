//! The `nct` command line.
//!
//! [`run`] never touches stdout itself and returns the exit code with the full
//! output: 0 on success, 1 on a domain error, 2 on a parse or usage error.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::dimension::{bratteli_build, DimGroupTheta, ExtGroupElement};
use crate::error::{Error, Result};
use crate::exact::{parse_cf, parse_value, ContinuedFraction, QuadIrr, Rational};
use crate::ext::{ext_equivalent, mod_z_equivalent};
use crate::halfplane::render::{render_svg, Viewport};
use crate::halfplane::{default_basepoint, height_trace, parse_point, perturbed, reduce_to_f, tile_of, HeightTrace};
use crate::moduli::{act, orbit_equivalent, theta_equivalent, ModuliPoint};
use crate::modular::parse_sl2;
use crate::verify::{run_suite, SUITES};

#[derive(Parser, Debug)]
#[command(name = "nct", version, about = "Exact arithmetic on the moduli of noncommutative tori")]
struct Cli {
    /// Wrap every result in {"ok", "result", "error"}.
    #[arg(long, global = true)]
    json: bool,
    /// Also print decimal approximations truncated to this many digits.
    #[arg(long, global = true, value_name = "DIGITS")]
    approx: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction of a value.
    Cf {
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Value of a continued fraction.
    Value {
        #[arg(allow_hyphen_values = true)]
        cf: String,
    },
    /// First convergents of a continued fraction.
    Convergents {
        #[arg(allow_hyphen_values = true)]
        cf: String,
        #[arg(short = 'n')]
        count: usize,
    },
    /// Reduce a point of the upper half-plane into F.
    Reduce { point: String },
    /// Tile containing a point, with its edges and neighbours.
    Tile { point: String },
    /// Number of tiling geodesics crossed by the height segment.
    Height {
        matrix: String,
        #[arg(long)]
        base: Option<String>,
        /// Signed by the direction of the segment.
        #[arg(long)]
        signed: bool,
        /// Retry once with Re(base) + 1/10007 on a degenerate segment.
        #[arg(long)]
        perturb: bool,
        /// List every crossing.
        #[arg(long)]
        trace: bool,
    },
    /// SL(2,Z)-equivalence of two quadratic irrationals.
    EquivTheta {
        #[arg(allow_hyphen_values = true)]
        theta1: String,
        #[arg(allow_hyphen_values = true)]
        theta2: String,
    },
    /// Equivalence of two extension parameters.
    EquivExt {
        #[arg(allow_hyphen_values = true)]
        theta: String,
        #[arg(allow_hyphen_values = true)]
        t1: String,
        #[arg(allow_hyphen_values = true)]
        t2: String,
    },
    /// Orbit equivalence of two moduli points.
    EquivModuli {
        #[arg(allow_hyphen_values = true)]
        theta1: String,
        #[arg(allow_hyphen_values = true)]
        t1: String,
        #[arg(allow_hyphen_values = true)]
        theta2: String,
        #[arg(allow_hyphen_values = true)]
        t2: String,
    },
    /// Act on (theta, t) by a matrix.
    Act {
        matrix: String,
        #[arg(allow_hyphen_values = true)]
        theta: String,
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        base: Option<String>,
        /// Add the literal crossing count instead of the signed height.
        #[arg(long)]
        unsigned: bool,
    },
    /// Bratteli diagram of a value.
    Bratteli {
        #[arg(allow_hyphen_values = true)]
        value: String,
        #[arg(short = 'n')]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Membership of (x, y) in the positive cone of G_theta.
    Cone {
        #[arg(allow_hyphen_values = true)]
        theta: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Membership of (x1, x2, y1, y2) in the extension cone.
    ExtCone {
        #[arg(allow_hyphen_values = true)]
        theta: String,
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(allow_hyphen_values = true)]
        x1: String,
        #[arg(allow_hyphen_values = true)]
        x2: String,
        #[arg(allow_hyphen_values = true)]
        y1: String,
        #[arg(allow_hyphen_values = true)]
        y2: String,
    },
    /// Draw the tessellation as SVG.
    Render {
        #[arg(long, num_args = 3, value_names = ["X0", "X1", "YMAX"], allow_hyphen_values = true)]
        viewport: Vec<String>,
        #[arg(long, num_args = 2, value_names = ["MATRIX", "BASE"])]
        segment: Option<Vec<String>>,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Run property suites.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// Text and JSON renderings of one command's result; `failed` marks a
/// completed command that reports failing checks.
struct Output {
    text: String,
    json: Value,
    failed: bool,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Output {
            text: text.into(),
            json,
            failed: false,
        }
    }
}

pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let json_mode = argv.iter().skip(1).any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.render().to_string());
            }
            let message = e.render().to_string();
            return if json_mode {
                (2, envelope_error("UsageError", message.trim_end(), None))
            } else {
                (2, message)
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            let code = i32::from(out.failed);
            if cli.json {
                let env = json!({"ok": !out.failed, "result": out.json, "error": Value::Null});
                (code, format!("{}\n", serde_json::to_string(&env).expect("serializable")))
            } else {
                let mut text = out.text;
                if !text.ends_with('\n') {
                    text.push('\n');
                }
                (code, text)
            }
        }
        Err(e) => {
            let code = if e.is_parse() { 2 } else { 1 };
            let position = match &e {
                Error::Parse { position, .. } => Some(*position),
                _ => None,
            };
            if cli.json {
                (code, envelope_error(e.code(), &e.to_string(), position))
            } else {
                (code, format!("error[{}]: {e}\n", e.code()))
            }
        }
    }
}

fn envelope_error(code: &str, message: &str, position: Option<usize>) -> String {
    let mut error = json!({"code": code, "message": message});
    if let Some(p) = position {
        error["position"] = json!(p);
    }
    let env = json!({"ok": false, "result": Value::Null, "error": error});
    format!("{}\n", serde_json::to_string(&env).expect("serializable"))
}

/// Reports a parse failure inside argument `name` with its position.
fn arg<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { position, expected } => Error::Parse {
            position,
            expected: format!("{expected} in <{name}>"),
        },
        other => other,
    })
}

fn value_arg(name: &str, src: &str) -> Result<QuadIrr> {
    arg(name, parse_value(src))
}

fn rational_arg(name: &str, src: &str) -> Result<Rational> {
    value_arg(name, src)?
        .to_rational()
        .ok_or_else(|| arg::<()>(name, Err(Error::parse(0, "rational number"))).unwrap_err())
}

fn integer_arg(name: &str, src: &str) -> Result<BigInt> {
    let v = value_arg(name, src)?;
    if !v.is_integer() {
        return Err(arg::<()>(name, Err(Error::parse(0, "integer"))).unwrap_err());
    }
    Ok(v.p().clone())
}

fn approx_lines(digits: Option<usize>, values: &[(&str, &QuadIrr)]) -> (String, Value) {
    let Some(k) = digits else {
        return (String::new(), Value::Null);
    };
    let mut text = String::new();
    let mut map = serde_json::Map::new();
    for (label, v) in values {
        let d = v.to_decimal(k);
        text.push_str(&format!("\n~ {label} = {d} (approx, {k} digits)"));
        map.insert((*label).to_string(), json!(d));
    }
    (text, Value::Object(map))
}

fn with_approx(mut out: Output, digits: Option<usize>, values: &[(&str, &QuadIrr)]) -> Output {
    let (text, json) = approx_lines(digits, values);
    if !json.is_null() {
        out.text.push_str(&text);
        if let Value::Object(map) = &mut out.json {
            map.insert("approx".into(), json);
        }
    }
    out
}

fn cf_json(cf: &ContinuedFraction) -> Value {
    let strs = |v: &[BigInt]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>();
    json!({"cf": cf.to_string(), "preperiod": strs(cf.preperiod()), "period": strs(cf.period())})
}

fn trace_json(t: &HeightTrace) -> Value {
    json!({
        "base": t.base, "image": t.image, "target": t.target,
        "start": t.start, "end": t.end,
        "crossings": t.crossings,
    })
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let approx = cli.approx;
    match &cli.command {
        Command::Cf { value } => {
            let x = value_arg("value", value)?;
            let cf = ContinuedFraction::expand(&x);
            let mut j = cf_json(&cf);
            j["value"] = json!(x);
            Ok(with_approx(Output::new(cf.to_string(), j), approx, &[("value", &x)]))
        }
        Command::Value { cf } => {
            let cf = arg("cf", parse_cf(cf))?;
            let x = cf.value();
            let mut j = cf_json(&cf);
            j["value"] = json!(x);
            Ok(with_approx(Output::new(x.to_string(), j), approx, &[("value", &x)]))
        }
        Command::Convergents { cf, count } => {
            let cf = arg("cf", parse_cf(cf))?;
            let list: Vec<QuadIrr> = cf.convergents(*count)?.iter().map(QuadIrr::from_rational).collect();
            let text = list.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n");
            let mut out = Output::new(text, json!({"cf": cf.to_string(), "convergents": list}));
            if let Some(k) = approx {
                let approx: Vec<String> = list.iter().map(|c| c.to_decimal(k)).collect();
                out.text = list
                    .iter()
                    .zip(&approx)
                    .map(|(c, a)| format!("{c}  ~ {a} (approx, {k} digits)"))
                    .collect::<Vec<_>>()
                    .join("\n");
                out.json["approx"] = json!(approx);
            }
            Ok(out)
        }
        Command::Reduce { point } => {
            let p = arg("point", parse_point(point))?;
            let (reduced, m) = reduce_to_f(&p);
            let word = m.to_word();
            Ok(Output::new(
                format!("point: {reduced}\nmatrix: {m}\nword: {word}"),
                json!({"input": p, "point": reduced, "matrix": m, "word": word.to_string()}),
            ))
        }
        Command::Tile { point } => {
            let p = arg("point", parse_point(point))?;
            let tile = tile_of(&p)?;
            let mut text = format!("tile: {tile}");
            let mut edges = Vec::new();
            for (g, n) in tile.edges() {
                text.push_str(&format!("\nedge {g} -> {n}"));
                edges.push(json!({"geodesic": g, "neighbor": n}));
            }
            Ok(Output::new(text, json!({"point": p, "tile": tile, "edges": edges})))
        }
        Command::Height { matrix, base, signed, perturb, trace } => {
            let m = arg("matrix", parse_sl2(matrix))?;
            let base = match base {
                Some(b) => arg("base", parse_point(b))?,
                None => default_basepoint(),
            };
            let result = match height_trace(&m, &base) {
                Err(Error::DegenerateSegment(_) | Error::BoundaryPoint(_)) if *perturb => {
                    height_trace(&m, &perturbed(&base))
                }
                other => other,
            }?;
            let n = if *signed { result.signed() } else { result.count() as i64 };
            let mut text = n.to_string();
            if result.base != base {
                text.push_str(&format!("\nbase perturbed to {}", result.base));
            }
            if *trace {
                for c in &result.crossings {
                    text.push_str(&format!(
                        "\ncross {} at Im = {} : {} -> {}",
                        c.geodesic, c.ordinate, c.from, c.to
                    ));
                }
            }
            Ok(Output::new(
                text,
                json!({"matrix": m, "height": n, "signed": signed, "perturbed": result.base != base, "trace": trace_json(&result)}),
            ))
        }
        Command::EquivTheta { theta1, theta2 } => {
            let a = value_arg("theta1", theta1)?;
            let b = value_arg("theta2", theta2)?;
            let r = theta_equivalent(&a, &b)?;
            let mut text = r.equivalent.to_string();
            if let Some(w) = &r.witness {
                text.push_str(&format!("\nwitness: {w}"));
            } else {
                text.push_str(&format!("\nreason: {}", r.reason));
            }
            Ok(Output::new(text, json!(r)))
        }
        Command::EquivExt { theta, t1, t2 } => {
            let theta = value_arg("theta", theta)?;
            let a = value_arg("t1", t1)?;
            let b = value_arg("t2", t2)?;
            let exact = ext_equivalent(&theta, &a, &b)?;
            let mod_z = mod_z_equivalent(&a, &b);
            Ok(Output::new(
                format!("{exact}\nmod-Z: {mod_z}"),
                json!({"equivalent": exact, "mod_z": mod_z}),
            ))
        }
        Command::EquivModuli { theta1, t1, theta2, t2 } => {
            let p = ModuliPoint::new(value_arg("theta1", theta1)?, value_arg("t1", t1)?)?;
            let q = ModuliPoint::new(value_arg("theta2", theta2)?, value_arg("t2", t2)?)?;
            let eq = orbit_equivalent(&p, &q)?;
            Ok(Output::new(eq.to_string(), json!({"equivalent": eq})))
        }
        Command::Act { matrix, theta, t, base, unsigned } => {
            let m = arg("matrix", parse_sl2(matrix))?;
            let p = ModuliPoint::new(value_arg("theta", theta)?, value_arg("t", t)?)?;
            let base = base.as_deref().map(|b| arg("base", parse_point(b))).transpose()?;
            let q = act(&m, &p, base.as_ref(), !unsigned)?;
            let out = Output::new(
                format!("theta: {}\nt: {}", q.theta(), q.t()),
                json!({"theta": q.theta(), "t": q.t()}),
            );
            Ok(with_approx(out, approx, &[("theta", q.theta()), ("t", q.t())]))
        }
        Command::Bratteli { value, depth, format } => {
            let x = value_arg("value", value)?;
            let d = bratteli_build(&ContinuedFraction::expand(&x), *depth)?;
            let j = d.to_json();
            let text = match format {
                Format::Dot => d.to_dot(),
                Format::Json => serde_json::to_string_pretty(&j).expect("serializable"),
            };
            Ok(Output::new(text, j))
        }
        Command::Cone { theta, x, y } => {
            let g = DimGroupTheta::new(value_arg("theta", theta)?)?;
            let inside = g.in_cone(&integer_arg("x", x)?, &integer_arg("y", y)?);
            Ok(Output::new(inside.to_string(), json!({"in_cone": inside})))
        }
        Command::ExtCone { theta, t, x1, x2, y1, y2 } => {
            let e = ExtGroupElement::new(value_arg("theta", theta)?, value_arg("t", t)?)?;
            let v = [
                integer_arg("x1", x1)?,
                integer_arg("x2", x2)?,
                integer_arg("y1", y1)?,
                integer_arg("y2", y2)?,
            ];
            let inside = e.in_ext_cone([&v[0], &v[1], &v[2], &v[3]]);
            Ok(Output::new(inside.to_string(), json!({"in_cone": inside})))
        }
        Command::Render { viewport, segment, output } => {
            let view = Viewport::new(
                rational_arg("x0", &viewport[0])?,
                rational_arg("x1", &viewport[1])?,
                rational_arg("ymax", &viewport[2])?,
            )?;
            let seg = match segment {
                Some(s) => Some((arg("matrix", parse_sl2(&s[0]))?, arg("base", parse_point(&s[1]))?)),
                None => None,
            };
            let svg = render_svg(&view, seg.as_ref().map(|(m, b)| (m, b)))?;
            std::fs::write(output, &svg).map_err(|e| Error::Io(format!("{}: {e}", output.display())))?;
            Ok(Output::new(
                format!("wrote {} ({} bytes)", output.display(), svg.len()),
                json!({"path": output.display().to_string(), "bytes": svg.len()}),
            ))
        }
        Command::Verify { suite, seed } => {
            let names: Vec<&str> = match suite {
                Some(s) => vec![s.as_str()],
                None => SUITES.to_vec(),
            };
            let reports = names
                .iter()
                .map(|n| run_suite(n, *seed))
                .collect::<Result<Vec<_>>>()?;
            let text = reports.iter().map(|r| r.to_string()).collect::<String>();
            let failed = reports.iter().any(|r| !r.ok());
            Ok(Output {
                text,
                json: json!(reports),
                failed,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nct(args: &[&str]) -> (i32, String) {
        run(std::iter::once("nct").chain(args.iter().copied()))
    }

    #[test]
    fn documented_examples() {
        assert_eq!(nct(&["cf", "sqrt(2)"]), (0, "[1; (2)]\n".into()));
        assert_eq!(nct(&["height", "[[0,-1],[1,0]]", "--base", "0 + 2i"]), (0, "1\n".into()));
        assert_eq!(nct(&["height", "S", "--base", "2i", "--signed"]), (0, "-1\n".into()));
        let (code, out) = nct(&["equiv-theta", "sqrt(2)", "sqrt(3)"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("false"));
    }

    #[test]
    fn hyphenated_values() {
        assert_eq!(nct(&["cf", "-sqrt(2)"]), (0, "[-2; 1, 1, (2)]\n".into()));
        assert_eq!(nct(&["cone", "sqrt(2)", "1", "-1"]), (0, "false\n".into()));
        assert_eq!(nct(&["cone", "sqrt(2)", "1", "-1", "--json"]).1, "{\"error\":null,\"ok\":true,\"result\":{\"in_cone\":false}}\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(nct(&["cf", "1 +"]).0, 2);
        assert_eq!(nct(&["cone", "1/2", "1", "0"]).0, 1);
        assert_eq!(nct(&["frobnicate"]).0, 2);
        assert_eq!(nct(&["--help"]).0, 0);
        let (code, out) = nct(&["--json", "value", "[1; (2]"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["code"], "ParseError");
        assert_eq!(v["error"]["position"], 6);
        let (code, out) = nct(&["--json", "verify", "--suite", "nope"]);
        assert_eq!(code, 1);
        assert!(out.contains("UnknownSuite"));
    }

    #[test]
    fn approx_is_marked() {
        let (_, out) = nct(&["value", "[1; (2)]", "--approx", "5"]);
        assert_eq!(out, "sqrt(2)\n~ value = 1.41421 (approx, 5 digits)\n");
    }

    #[test]
    fn perturb_retries() {
        let args = ["height", "[[1,0],[3,1]]", "--base", "5/14 + 2i"];
        assert_eq!(nct(&args).0, 1);
        let mut with = args.to_vec();
        with.push("--perturb");
        let (code, out) = nct(&with);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("base perturbed to"));
    }
}
