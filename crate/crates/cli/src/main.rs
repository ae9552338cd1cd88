//! `versal`: command-line front end for versal-core.
//!
//! Exit codes: 0 success, 1 verification failure or bad input, 2 size
//! cutoff, 3 unsupported construction.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::{json, Value};

use versal_core::algebra::field::parse_rational;
use versal_core::algebra::{FieldDescriptor, Poly};
use versal_core::catalog::{build_catalog, build_index_set, CocycleMode};
use versal_core::descent::{
    inner_cocycles, inner_h1_classes, is_quasi_split_class, is_quasi_split_twist, twisted_fixed_points, Elem,
    FiniteAlgebra, GroupSpec, Outer, PointGroup, TwistSpec,
};
use versal_core::etale::{
    construct_point_finite_field, construct_point_rational, emit_presentation, fiber_algebra, verify_family_point,
    FamilyPoint,
};
use versal_core::groups::{catalog_group, h1_classes, z1_cocycles, GroupAction, GroupOps};
use versal_core::root_data::{based_automorphism_group, enumerate_root_data, BasedRootDatum};
use versal_core::Error;

#[derive(Parser)]
#[command(name = "versal", version, about = "Root data, étale family points, cocycles and twisted forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Based root data of the given rank, up to isomorphism.
    EnumerateRootData {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Based automorphism group of a root datum.
    Aut {
        #[arg(long)]
        datum: PathBuf,
    },
    /// Pairs (Γ, homomorphism class) for a root datum.
    IndexSet {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long)]
        bound: usize,
    },
    /// Construct a family point.
    #[command(group(ArgGroup::new("kind").required(true).args(["finite_field", "rational"])))]
    GaloisPoint {
        /// `p,k,m`: F_(q^m) over F_q with q = p^k.
        #[arg(long, value_name = "p,k,m")]
        finite_field: Option<String>,
        /// A point over Q given by f, its roots and Γ.
        #[arg(long, requires_all = ["f", "conjugates", "group"])]
        rational: bool,
        /// Coefficients of f, constant term first, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Roots of f in Q[z]/(f) as coefficient lists separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        conjugates: Option<String>,
        /// Catalog name of Γ.
        #[arg(long)]
        group: Option<String>,
        /// For each element of Γ, the index of its conjugate (default identity).
        #[arg(long)]
        assignment: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a family point file; exit 1 when a condition fails.
    VerifyPoint { file: PathBuf },
    /// Symbolic presentation of the family for Γ.
    Presentation {
        #[arg(long)]
        group: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 1-cocycles and their classes.
    #[command(group(ArgGroup::new("target").required(true).args(["coeffs", "group"])))]
    Z1 {
        /// Γ for table coefficients.
        #[arg(long, default_value = "Z2")]
        gamma: String,
        /// Catalog name of a coefficient group.
        #[arg(long)]
        coeffs: Option<String>,
        /// JSON file with the action table `map[γ][a]` (default trivial).
        #[arg(long, requires = "coeffs")]
        action: Option<PathBuf>,
        /// Matrix group whose adjoint group takes the inner cocycles.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        ext_degree: usize,
        #[arg(long, default_value = "identity")]
        alpha: String,
    },
    /// Fixed points of a twisted Galois action.
    Twist {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        ext_degree: usize,
        /// identity, flip, inverse, swap, or a JSON file with one pinned
        /// automorphism per element of Γ.
        #[arg(long, default_value = "identity")]
        alpha: String,
        /// `trivial` or a JSON file with one adjoint-group value per element.
        #[arg(long, default_value = "trivial")]
        cocycle: String,
    },
    /// Catalog of twisted fixed-point groups over F_(p^k).
    Catalog {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[arg(long, default_value = "trivial")]
        cocycles: String,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Outcome {
    Done(Value),
    /// Output was produced but a check failed.
    Failed(Value),
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeLimit { .. } => 2,
        Error::Unsupported(_) => 3,
        _ => 1,
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn write_or_print(value: &Value, out: Option<&Path>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| bad(format!("{}: {e}", path.display()))),
        None => {
            emit(&text);
            Ok(())
        }
    }
}

/// Print to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad(format!("bad {what} '{t}'"))))
        .collect()
}

fn rational_poly(s: &str) -> Result<Poly, Error> {
    let q = FieldDescriptor::rationals();
    let coeffs = s
        .split(',')
        .map(|t| {
            let r = parse_rational(t).ok_or_else(|| bad(format!("bad rational '{t}'")))?;
            q.from_rational(&r)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Poly::new(&q, coeffs))
}

fn point_group(spec: &str, p: u64, k: u32, m: usize) -> Result<PointGroup, Error> {
    let spec: GroupSpec = spec.parse()?;
    let pt = construct_point_finite_field(p, k, m)?;
    let algebra = Arc::new(FiniteAlgebra::new(&fiber_algebra(&pt)?)?);
    PointGroup::new(spec, algebra)
}

/// Named alpha: the generator of Z/m goes to the named automorphism.
fn parse_alpha(name: &str, group: &PointGroup) -> Result<Vec<Outer>, Error> {
    let m = group.algebra().group().order();
    let spec = group.spec();
    let gen = match name {
        "identity" | "trivial" => Outer::Identity,
        "flip" => Outer::Flip,
        "inverse" => match spec {
            GroupSpec::Torus { rank } => Outer::Lattice {
                matrix: (0..*rank).map(|i| (0..*rank).map(|j| if i == j { -1 } else { 0 }).collect()).collect(),
            },
            _ => return Err(bad("'inverse' applies to tori")),
        },
        "swap" => match spec {
            GroupSpec::Product { factors } if factors.len() == 2 => Outer::Product {
                permutation: vec![1, 0],
                parts: vec![Outer::Identity, Outer::Identity],
            },
            _ => return Err(bad("'swap' applies to products of two factors")),
        },
        file => return Ok(serde_json::from_value(read_json(Path::new(file))?)?),
    };
    gen.validate(spec)?;
    let mut out = vec![Outer::Identity];
    for _ in 1..m {
        let next = out.last().expect("nonempty").compose(&gen, spec);
        out.push(next);
    }
    Ok(out)
}

fn run(command: Command) -> Result<Outcome, Error> {
    Ok(match command {
        Command::EnumerateRootData { rank, out } => {
            let data = enumerate_root_data(rank)?;
            let value = serde_json::to_value(&data)?;
            write_or_print(&value, out.as_deref())?;
            Outcome::Done(Value::Null)
        }
        Command::Aut { datum } => {
            let datum: BasedRootDatum = serde_json::from_value(read_json(&datum)?)?;
            let aut = based_automorphism_group(&datum)?;
            Outcome::Done(json!({ "order": aut.order(), "elements": aut.elements }))
        }
        Command::IndexSet { datum, bound } => {
            let datum: BasedRootDatum = serde_json::from_value(read_json(&datum)?)?;
            let index = build_index_set(&datum, bound)?;
            let entries: Vec<Value> = index
                .iter()
                .map(|e| json!({ "gamma": e.gamma.name(), "alpha": e.alpha }))
                .collect();
            Outcome::Done(json!({ "count": entries.len(), "entries": entries }))
        }
        Command::GaloisPoint {
            finite_field,
            f,
            conjugates,
            group,
            assignment,
            out,
            ..
        } => {
            let pt = match finite_field {
                Some(spec) => {
                    let v: Vec<u64> = parse_list(&spec, "p,k,m")?;
                    let [p, k, m] = v[..] else {
                        return Err(bad("--finite-field takes p,k,m"));
                    };
                    construct_point_finite_field(p, k as u32, m as usize)?
                }
                None => {
                    let f = rational_poly(f.as_deref().expect("required by clap"))?;
                    let conj = conjugates
                        .expect("required by clap")
                        .split(';')
                        .map(rational_poly)
                        .collect::<Result<Vec<_>, _>>()?;
                    let gamma = catalog_group(&group.expect("required by clap"))?;
                    let assignment: Vec<usize> = match assignment {
                        Some(a) => parse_list(&a, "assignment")?,
                        None => (0..gamma.order()).collect(),
                    };
                    construct_point_rational(f, conj, gamma, &assignment)?
                }
            };
            write_or_print(&pt.to_json(), out.as_deref())?;
            Outcome::Done(Value::Null)
        }
        Command::VerifyPoint { file } => {
            let pt = FamilyPoint::from_json(&read_json(&file)?)?;
            let report = verify_family_point(&pt);
            let value = serde_json::to_value(&report)?;
            if report.passed() {
                Outcome::Done(value)
            } else {
                Outcome::Failed(value)
            }
        }
        Command::Presentation { group, out } => {
            let gamma = catalog_group(&group)?;
            let (base, total) = emit_presentation(&gamma)?;
            let value = json!({ "base": base.to_json(), "total": total.to_json() });
            write_or_print(&value, out.as_deref())?;
            Outcome::Done(Value::Null)
        }
        Command::Z1 {
            gamma,
            coeffs,
            action,
            group,
            p,
            k,
            ext_degree,
            alpha,
        } => match (coeffs, group) {
            (Some(coeffs), _) => {
                let gamma = catalog_group(&gamma)?;
                let target = catalog_group(&coeffs)?;
                let action = match action {
                    Some(path) => GroupAction::new(&gamma, &target, serde_json::from_value(read_json(&path)?)?)?,
                    None => GroupAction::trivial(&gamma, &target),
                };
                let cocycles = z1_cocycles(&gamma, &target, &action)?;
                let classes = h1_classes(&gamma, &target, &action, &cocycles)?;
                Outcome::Done(json!({
                    "count": cocycles.len(),
                    "classes": classes.len(),
                    "cocycles": cocycles,
                    "h1": classes,
                }))
            }
            (None, Some(spec)) => {
                let group = point_group(&spec, p, k, ext_degree)?;
                let alpha = parse_alpha(&alpha, &group)?;
                let cocycles = inner_cocycles(&group, &alpha)?;
                let classes = inner_h1_classes(&group, &alpha, &cocycles)?;
                Outcome::Done(json!({
                    "count": cocycles.len(),
                    "classes": classes.len(),
                    "cocycles": cocycles,
                    "h1": classes,
                }))
            }
            (None, None) => unreachable!("clap requires one of them"),
        },
        Command::Twist {
            spec,
            p,
            k,
            ext_degree,
            alpha,
            cocycle,
        } => {
            let group = point_group(&spec, p, k, ext_degree)?;
            let alpha = parse_alpha(&alpha, &group)?;
            let values: Vec<Elem> = match cocycle.as_str() {
                "trivial" => vec![group.adjoint().identity(); ext_degree],
                file => serde_json::from_value(read_json(Path::new(file))?)?,
            };
            let twist = TwistSpec::inner(group.clone(), alpha, values)?;
            let fixed = twisted_fixed_points(&twist)?;
            let report = is_quasi_split_twist(&twist)?;
            Outcome::Done(json!({
                "group": group.spec().to_string(),
                "order": fixed.order(),
                "center_order": fixed.center(&group).len(),
                "abelianization_order": fixed.abelianization_order(&group),
                "quasi_split": report.quasi_split,
                "quasi_split_class": is_quasi_split_class(&twist)?,
                "witness_borel_order": report.borel_witness.as_ref().map(|w| w.order()),
                "failure": report.failure,
            }))
        }
        Command::Catalog {
            rank,
            p,
            k,
            bound,
            cocycles,
            out,
        } => {
            let mode: CocycleMode = cocycles.parse()?;
            let catalog = build_catalog(rank, p, k, bound, mode)?;
            fs::write(&out, catalog.to_json_string()).map_err(|e| bad(format!("{}: {e}", out.display())))?;
            Outcome::Done(json!({
                "entries": catalog.entries.len(),
                "skipped": catalog.skipped.len(),
                "fingerprints": catalog.fingerprints.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }))
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let print = |v: &Value| {
        if !v.is_null() {
            emit(&(serde_json::to_string_pretty(v).expect("json") + "\n"));
        }
    };
    match run(cli.command) {
        Ok(Outcome::Done(v)) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Failed(v)) => {
            print(&v);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
