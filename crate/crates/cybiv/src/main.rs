//! `cybiv`: exact computations with bivector fields and Poisson structures
//! on the local Calabi-Yau threefolds over P^1.

use clap::{Args, Parser, Subcommand};
use cybiv::analysis;
use cybiv::catalog;
use cybiv::exactpoly::{parse_poly, Poly};
use cybiv::schouten;
use cybiv::sections::{self, BivectorField};
use cybiv::symmetries;
use cybiv::threefold::{Chart, ThreefoldSpec};
use cybiv::verify;
use serde_json::json;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cybiv",
    about = "Exact bivector fields and Poisson structures on local Calabi-Yau threefolds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Calabi-Yau member W_k = W(k, 2-k).
    #[arg(long, global = true)]
    k: Option<i64>,
    /// First twist (use with --k2).
    #[arg(long, requires = "k2", conflicts_with = "k")]
    k1: Option<i64>,
    /// Second twist (use with --k1).
    #[arg(long, requires = "k1", conflicts_with = "k")]
    k2: Option<i64>,
}

impl SpecArgs {
    fn resolve(&self) -> Result<ThreefoldSpec, String> {
        match (self.k, self.k1, self.k2) {
            (Some(k), None, None) => Ok(ThreefoldSpec::w(k)),
            (None, Some(k1), Some(k2)) => Ok(ThreefoldSpec::new(k1, k2)),
            _ => Err("specify either --k or both --k1 and --k2".to_string()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Basis of the global sections with coefficients of bounded fiber degree.
    Sections {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 2)]
        neighborhood: i64,
        #[arg(long)]
        json: bool,
    },
    /// Minimal generators and relations of the section module.
    Presentation {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        degree_bound: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Schouten-Nijenhuis bracket: self-bracket of --q, or [--q, --p].
    Bracket {
        #[command(flatten)]
        spec: SpecArgs,
        /// Bivector as three comma-separated coefficients.
        #[arg(long)]
        q: String,
        /// Optional second bivector.
        #[arg(long)]
        p: Option<String>,
        /// Chart of the input coefficients.
        #[arg(long, default_value = "U")]
        chart: String,
        #[arg(long)]
        json: bool,
    },
    /// Integrability test; exits 1 and prints the obstruction when nonzero.
    Integrable {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        q: String,
        #[arg(long, default_value = "U")]
        chart: String,
    },
    /// The quadratic integrability operator on W(1,1) in module coordinates.
    BOp {
        /// Four comma-separated global coefficients p1,p2,p3,p4.
        #[arg(long)]
        p: String,
        #[arg(long)]
        json: bool,
    },
    /// Degeneracy locus of a generator (--gen) or explicit bivector (--q).
    Degeneracy {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, conflicts_with = "q")]
        gen: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Casimir functions of an integrable structure.
    Casimir {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, conflicts_with = "q")]
        gen: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 4)]
        degree_bound: u64,
        #[arg(long)]
        json: bool,
    },
    /// Symplectic foliation report (degeneracy locus + Casimirs).
    Foliation {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, conflicts_with = "q")]
        gen: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 4)]
        degree_bound: u64,
        #[arg(long)]
        json: bool,
    },
    /// Certified isomorphisms among the module generators.
    Isos {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        json: bool,
    },
    /// Surface-embedding witnesses for every module generator.
    Embeddings {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        json: bool,
    },
    /// Replays the built-in catalog of reference results.
    VerifyPaper {
        /// Substring filter on case ids.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn poly_strings(coeffs: &[Poly], chart: Chart) -> Vec<String> {
    coeffs.iter().map(|p| p.render(chart.names())).collect()
}

fn parse_chart(s: &str) -> Result<Chart, String> {
    match s {
        "U" | "u" => Ok(Chart::U),
        "V" | "v" => Ok(Chart::V),
        other => Err(format!("unknown chart `{other}` (use U or V)")),
    }
}

fn resolve_structure(
    spec: ThreefoldSpec,
    gen: &Option<String>,
    q: &Option<String>,
) -> Result<BivectorField, String> {
    match (gen, q) {
        (Some(label), None) => {
            if let Some(g) = catalog::generator(spec, label) {
                return Ok(g);
            }
            if catalog::is_reference_spec(spec) {
                let pres = verify::cached_presentation(spec);
                if let Some(g) = pres.generators.iter().find(|g| g.label == *label) {
                    return Ok(g.field.clone());
                }
            }
            Err(format!("unknown generator `{label}` on {spec}"))
        }
        (None, Some(text)) => verify::parse_bivector(text, spec, Chart::U).map_err(|e| e.to_string()),
        _ => Err("specify exactly one of --gen or --q".to_string()),
    }
}

fn print_json(value: serde_json::Value) {
    // Route through Value so keys are emitted in canonical sorted order.
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Sections {
            spec,
            neighborhood,
            json,
        } => {
            let spec = spec.resolve()?;
            let basis = sections::section_basis(spec, neighborhood).map_err(|e| e.to_string())?;
            if json {
                let items: Vec<_> = basis
                    .iter()
                    .map(|b| {
                        json!({
                            "chart": "U",
                            "q": poly_strings(&b.u_coeffs, Chart::U),
                            "label": b.label,
                        })
                    })
                    .collect();
                print_json(json!({
                    "spec": {"k1": spec.k1, "k2": spec.k2},
                    "neighborhood": neighborhood,
                    "dimension": basis.len(),
                    "basis": items,
                }));
            } else {
                println!(
                    "{} global sections with coefficients of fiber degree <= {} on {}",
                    basis.len(),
                    neighborhood,
                    spec
                );
                for b in &basis {
                    println!("  {}", b.render(Chart::U));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Presentation {
            spec,
            degree_bound,
            json,
        } => {
            let spec = spec.resolve()?;
            let bound = degree_bound.unwrap_or_else(|| {
                if catalog::is_reference_spec(spec) {
                    verify::presentation_bound(spec)
                } else {
                    6
                }
            });
            let pres = sections::module_presentation(spec, bound).map_err(|e| e.to_string())?;
            if json {
                let gens: Vec<_> = pres
                    .generators
                    .iter()
                    .map(|g| {
                        json!({
                            "label": g.label,
                            "grade": g.grade,
                            "chart": "U",
                            "q": poly_strings(&g.field.u_coeffs, Chart::U),
                        })
                    })
                    .collect();
                let rels: Vec<_> = pres
                    .relations
                    .iter()
                    .map(|r| json!(poly_strings(&r.coeffs, Chart::U)))
                    .collect();
                print_json(json!({
                    "spec": {"k1": spec.k1, "k2": spec.k2},
                    "degree_bound": bound,
                    "generators": gens,
                    "relations": rels,
                }));
            } else {
                println!(
                    "minimal presentation of the section module on {spec}: {} generators, {} relations (degree bound {bound})",
                    pres.generators.len(),
                    pres.relations.len()
                );
                for g in &pres.generators {
                    println!("  {} (grade {}): {}", g.label, g.grade, g.field.render(Chart::U));
                }
                println!("relations:");
                for r in &pres.relations {
                    let terms: Vec<String> = r
                        .coeffs
                        .iter()
                        .zip(&pres.generators)
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, g)| format!("({})*{}", c, g.label))
                        .collect();
                    println!("  {} (grade {}): {} = 0", r.label, r.grade, terms.join(" + "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bracket {
            spec,
            q,
            p,
            chart,
            json,
        } => {
            let spec = spec.resolve()?;
            let chart = parse_chart(&chart)?;
            let q = verify::parse_bivector(&q, spec, chart).map_err(|e| e.to_string())?;
            let result = match p {
                None => schouten::self_bracket(&q),
                Some(text) => {
                    let p = verify::parse_bivector(&text, spec, chart).map_err(|e| e.to_string())?;
                    schouten::sn_bracket(&q, &p).map_err(|e| e.to_string())?
                }
            };
            if json {
                print_json(json!({
                    "spec": {"k1": spec.k1, "k2": spec.k2},
                    "coefficient": result.coeff.render(Chart::U.names()),
                    "zero": result.is_zero(),
                }));
            } else {
                println!("{}", result.coeff.render(Chart::U.names()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Integrable { spec, q, chart } => {
            let spec = spec.resolve()?;
            let chart = parse_chart(&chart)?;
            let q = verify::parse_bivector(&q, spec, chart).map_err(|e| e.to_string())?;
            let sb = schouten::self_bracket(&q);
            if sb.is_zero() {
                println!("integrable");
                Ok(ExitCode::SUCCESS)
            } else {
                println!(
                    "not integrable; obstruction: {}",
                    sb.coeff.render(Chart::U.names())
                );
                Ok(ExitCode::FAILURE)
            }
        }
        Command::BOp { p, json } => {
            let spec = ThreefoldSpec::new(1, 1);
            let parts: Vec<&str> = p.split(',').collect();
            if parts.len() != 4 {
                return Err(format!("expected four comma-separated coefficients, got {}", parts.len()));
            }
            let mut coeffs: Vec<Poly> = Vec::new();
            for (i, part) in parts.iter().enumerate() {
                let poly = parse_poly(part.trim(), Chart::U.names())
                    .map_err(|e| format!("coefficient {}: {e}", i + 1))?;
                coeffs.push(poly);
            }
            let tuple: [Poly; 4] = coeffs.try_into().unwrap();
            let b = schouten::b_operator(spec, &tuple).map_err(|e| e.to_string())?;
            if json {
                print_json(json!({
                    "value": b.render(Chart::U.names()),
                    "zero": b.is_zero(),
                }));
            } else {
                println!("{}", b.render(Chart::U.names()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Degeneracy { spec, gen, q, json } => {
            let spec = spec.resolve()?;
            let structure = resolve_structure(spec, &gen, &q)?;
            let locus = analysis::degeneracy_locus(&structure).map_err(|e| e.to_string())?;
            if json {
                let comps: Vec<_> = locus
                    .components
                    .iter()
                    .map(|comp| {
                        let mut eqs = Vec::new();
                        if let Some(p) = &comp.u_piece {
                            for v in p {
                                eqs.push(format!("{} = 0", Chart::U.names()[*v]));
                            }
                        }
                        if let Some(p) = &comp.v_piece {
                            for v in p {
                                eqs.push(format!("{} = 0", Chart::V.names()[*v]));
                            }
                        }
                        json!({"equations": eqs, "type": comp.kind.to_string()})
                    })
                    .collect();
                print_json(json!({
                    "charts": {
                        "U": poly_strings(&locus.u_ideal, Chart::U),
                        "V": poly_strings(&locus.v_ideal, Chart::V),
                    },
                    "components": comps,
                }));
            } else {
                println!("degeneracy locus: {}", locus.describe());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Casimir {
            spec,
            gen,
            q,
            degree_bound,
            json,
        } => {
            let spec = spec.resolve()?;
            let structure = resolve_structure(spec, &gen, &q)?;
            let cas = analysis::casimirs(&structure, degree_bound).map_err(|e| e.to_string())?;
            if json {
                print_json(json!({
                    "local_description": cas.local_description(),
                    "global_basis": cas.global_basis.iter().map(|p| p.render(Chart::U.names())).collect::<Vec<_>>(),
                    "degree_bound": cas.degree_bound,
                    "stable": cas.stable,
                }));
            } else {
                println!("{}", cas.local_description());
                println!(
                    "truncated global Casimir basis (fiber degree <= {}): {}",
                    cas.degree_bound,
                    cas.global_basis
                        .iter()
                        .map(|p| p.render(Chart::U.names()))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Foliation {
            spec,
            gen,
            q,
            degree_bound,
            json,
        } => {
            let spec = spec.resolve()?;
            let structure = resolve_structure(spec, &gen, &q)?;
            let report =
                analysis::foliation_report(&structure, degree_bound).map_err(|e| e.to_string())?;
            if json {
                print_json(json!({
                    "zero_dimensional_leaves": report.zero_dim_leaves,
                    "generic_leaves": report.generic_leaves,
                    "casimirs": report.casimirs.local_description(),
                    "degeneracy": report.locus.describe(),
                }));
            } else {
                println!("0-dimensional leaves: {}", report.zero_dim_leaves);
                println!("generic leaves: {}", report.generic_leaves);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Isos { spec, json } => {
            let spec = spec.resolve()?;
            let gens = catalog::reference_generators(spec)
                .ok_or_else(|| format!("no generator catalog for {spec}"))?;
            let certs = symmetries::isomorphism_catalog(spec, &gens);
            if json {
                let items: Vec<_> = certs
                    .iter()
                    .map(|c| {
                        json!({
                            "pair": [c.from, c.to],
                            "map": c.map.word.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                            "scale": c.scale.to_string(),
                        })
                    })
                    .collect();
                print_json(json!({"certificates": items}));
            } else {
                for c in &certs {
                    println!(
                        "{} -> {} via {} (scale {})",
                        c.from,
                        c.to,
                        c.map.word_string(),
                        c.scale
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Embeddings { spec, json } => {
            let spec = spec.resolve()?;
            if !catalog::is_reference_spec(spec) {
                return Err(format!("no embedding catalog for {spec}"));
            }
            let pres = verify::cached_presentation(spec);
            let report = symmetries::verify_generation(spec, &pres.generators);
            if json {
                let items: Vec<_> = report
                    .items
                    .iter()
                    .map(|(label, w)| json!({"generator": label, "witness": format!("{w:?}")}))
                    .collect();
                print_json(json!({"witnesses": items, "all_reached": report.all_reached()}));
            } else {
                for (label, w) in &report.items {
                    println!("{label}: {w:?}");
                }
            }
            Ok(if report.all_reached() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::VerifyPaper { filter, json } => {
            let report = verify::run_verify(filter.as_deref());
            if json {
                print_json(serde_json::to_value(&report).unwrap());
            } else {
                print!("{}", report.render_text());
            }
            Ok(if report.exit_code() == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
