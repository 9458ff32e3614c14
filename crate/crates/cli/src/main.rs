//! `qchar`: command-line front end for the exact series / character library.
//!
//! Every subcommand validates its parameters, runs one library operation, and
//! prints the result in one of three formats (`--format`, or the
//! `QCHAR_FORMAT` environment variable): `pretty` for humans, `json` for
//! machines (exact integers and rationals as decimal strings), `tsv` for
//! spreadsheets. `qchar verify` runs the full cross-check suite and exits
//! nonzero if any check fails.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qchar_core::affine::{
    freudenthal_multiplicities, weyl_kac_character, AdeType, AffineAlgebra, DominantWeight,
    WeightTable,
};
use qchar_core::fock::{
    check_operator_relations, graded_character, ColorSpec, CommutatorConstants,
};
use qchar_core::goettsche::{
    euler_series, goettsche_series, orbifold_euler_bruteforce, SurfaceTopology,
};
use qchar_core::hecke::{
    commute_check, delta, eisenstein, eta_modularity_check, euler_product_check, is_eigenform,
    parse_complex, QExpansion,
};
use qchar_core::mckay::{match_ade, mckay_graph, GroupData, GroupSpec};
use qchar_core::series::BiSeries;
use qchar_core::verify;

#[derive(Parser)]
#[command(
    name = "qchar",
    about = "Exact generating functions and characters: Hilbert-scheme series, Fock spaces, affine ADE characters, the McKay correspondence, and Hecke operators",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Pretty,
    Json,
    Tsv,
}

#[derive(Args)]
struct FormatArg {
    /// Machine-readable JSON (exact values as decimal strings)
    #[arg(long, conflicts_with_all = ["tsv", "pretty"])]
    json: bool,
    /// Tab-separated output
    #[arg(long, conflicts_with_all = ["json", "pretty"])]
    tsv: bool,
    /// Human-readable output (the default; $QCHAR_FORMAT overrides)
    #[arg(long, conflicts_with_all = ["json", "tsv"])]
    pretty: bool,
}

impl FormatArg {
    fn resolve(&self) -> Format {
        if self.json {
            return Format::Json;
        }
        if self.tsv {
            return Format::Tsv;
        }
        if self.pretty {
            return Format::Pretty;
        }
        match std::env::var("QCHAR_FORMAT").as_deref() {
            Ok("json") => Format::Json,
            Ok("tsv") => Format::Tsv,
            _ => Format::Pretty,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Product series of Poincaré polynomials for a Betti vector.
    Goettsche {
        /// Betti numbers b_0,b_1,b_2,b_3,b_4
        #[arg(long)]
        betti: String,
        /// Truncation order (inclusive)
        #[arg(long)]
        order: u32,
        /// Specialize t = -1 (Euler-number series)
        #[arg(long)]
        euler: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Orbifold Euler number of the n-th symmetric product (commuting pairs).
    Orbifold {
        #[arg(long)]
        n: u32,
        #[arg(long = "euler-number")]
        euler_number: i64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Graded Fock character by state enumeration; optional relation check.
    Fock {
        #[arg(long)]
        betti: String,
        /// Truncation order for the character
        #[arg(long)]
        order: u32,
        /// Also verify the operator relations exhaustively
        #[arg(long = "check-relations")]
        check_relations: bool,
        /// Max state weight for the relation check
        #[arg(long = "max-weight", default_value_t = 4)]
        max_weight: u32,
        /// Max generator mode for the relation check
        #[arg(long = "max-mode", default_value_t = 3)]
        max_mode: u32,
        /// Commutator constants: "default" (c_i = i) or a comma list
        #[arg(long, default_value = "default")]
        ci: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Integrable highest-weight character tables for an affine ADE type.
    Affine {
        /// ADE label, e.g. A1, A2, D4, E8
        #[arg(long = "type")]
        ade: String,
        /// Dominant weight w_0,...,w_n
        #[arg(long)]
        weight: String,
        /// Delta-depth truncation
        #[arg(long)]
        depth: u32,
        /// Algorithm: freudenthal, weyl-kac, or both (with comparison)
        #[arg(long, default_value = "both")]
        algo: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Character table, McKay graph, and matched ADE type of an SU(2) subgroup.
    Mckay {
        /// cyclic-K, binary-dihedral-K, binary-tetrahedral, binary-octahedral,
        /// binary-icosahedral
        #[arg(long)]
        group: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Hecke operator data for a modular form.
    Hecke {
        /// delta, e4, e6, e8, e10, e14, or e4cubed
        #[arg(long)]
        form: String,
        /// Expected weight (validated against the form)
        #[arg(long)]
        weight: Option<u32>,
        #[arg(long)]
        prime: u64,
        /// Truncation order of the expansion
        #[arg(long, default_value_t = 60)]
        terms: u32,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Numeric check of eta(-1/tau) = sqrt(-i tau) eta(tau).
    EtaCheck {
        /// Sample point like 0.3+1.1i; repeatable
        #[arg(long, required = true)]
        tau: Vec<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Fixed truncation (must certify the tolerance); grown automatically
        /// when omitted
        #[arg(long)]
        truncation: Option<usize>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Run the cross-check suite; exit nonzero on any failure.
    Verify {
        /// all, goettsche, orbifold, fock-relations, fock-character, mckay,
        /// affine, level, hecke, eta
        #[arg(long, default_value = "all")]
        suite: String,
        /// Smaller sizes for a quick smoke run
        #[arg(long)]
        fast: bool,
        /// Seed for the randomized checks
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
        #[command(flatten)]
        format: FormatArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("{}", json!({ "error": message.to_string() }));
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        Command::Goettsche {
            betti,
            order,
            euler,
            format,
        } => {
            let topo = parse_betti(&betti)?;
            let series = if euler {
                euler_series(&topo, order)
            } else {
                goettsche_series(&topo, order)
            };
            let payload = json!({
                "betti": topo.betti().to_vec(),
                "q_order": order,
                "euler_specialized": euler,
                "series": series,
            });
            emit_series(format.resolve(), &payload, &series);
            Ok(ExitCode::SUCCESS)
        }
        Command::Orbifold {
            n,
            euler_number,
            format,
        } => {
            let value = orbifold_euler_bruteforce(n, euler_number)?;
            match format.resolve() {
                Format::Json => println!(
                    "{}",
                    json!({
                        "n": n,
                        "euler_number": euler_number,
                        "orbifold_euler": value.to_string(),
                    })
                ),
                Format::Tsv => println!("{n}\t{euler_number}\t{value}"),
                Format::Pretty => println!(
                    "orbifold Euler number of the {n}-th symmetric product (e = {euler_number}): {value}"
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fock {
            betti,
            order,
            check_relations,
            max_weight,
            max_mode,
            ci,
            format,
        } => {
            let topo = parse_betti(&betti)?;
            let spec = ColorSpec::from_topology(&topo);
            let consts = parse_constants(&ci)?;
            let character = graded_character(&spec, order);
            let product = goettsche_series(&topo, order);
            let matches_product = character.try_eq(&product)?;
            let relations = if check_relations {
                Some(check_operator_relations(
                    &spec, &consts, max_weight, max_mode,
                )?)
            } else {
                None
            };
            let relations_passed = relations.as_ref().map(|r| r.passed());
            let payload = json!({
                "betti": topo.betti().to_vec(),
                "q_order": order,
                "character": character,
                "matches_product_formula": matches_product,
                "relations": relations.as_ref().map(|r| json!({
                    "pairs_checked": r.pairs_checked,
                    "states_checked": r.states_checked,
                    "failures": r.failures,
                    "passed": r.passed(),
                })),
            });
            match format.resolve() {
                Format::Json => println!("{payload}"),
                Format::Tsv => {
                    for (q, t, c) in character.terms() {
                        println!("{q}\t{t}\t{c}");
                    }
                }
                Format::Pretty => {
                    println!("graded character: {character}");
                    println!(
                        "matches product-formula series: {}",
                        if matches_product { "yes" } else { "NO" }
                    );
                    if let Some(r) = &relations {
                        println!(
                            "relations: {} pairs on {} states -> {}",
                            r.pairs_checked,
                            r.states_checked,
                            if r.passed() { "all hold" } else { "FAILURES" }
                        );
                    }
                }
            }
            let ok = matches_product && relations_passed.unwrap_or(true);
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Affine {
            ade,
            weight,
            depth,
            algo,
            format,
        } => {
            let ade = AdeType::parse(&ade)?;
            let alg = AffineAlgebra::new(ade)?;
            let w = DominantWeight::new(parse_weight(&weight)?);
            let level = alg.level(&w)?;
            let (freudenthal, weyl_kac) = match algo.as_str() {
                "freudenthal" => (Some(freudenthal_multiplicities(&alg, &w, depth)?), None),
                "weyl-kac" | "weyl_kac" => (None, Some(weyl_kac_character(&alg, &w, depth)?)),
                "both" => (
                    Some(freudenthal_multiplicities(&alg, &w, depth)?),
                    Some(weyl_kac_character(&alg, &w, depth)?),
                ),
                other => return Err(format!("unknown algorithm {other:?}").into()),
            };
            let verdict = match (&freudenthal, &weyl_kac) {
                (Some(f), Some(k)) => Some(if f == k { "equal" } else { "MISMATCH" }),
                _ => None,
            };
            let payload = json!({
                "type": ade.to_string(),
                "weight": w.components().to_vec(),
                "level": level,
                "depth": depth,
                "marks": alg.marks().to_vec(),
                "freudenthal": freudenthal.as_ref().map(table_json),
                "weyl_kac": weyl_kac.as_ref().map(table_json),
                "match": verdict,
            });
            let table = freudenthal
                .as_ref()
                .or(weyl_kac.as_ref())
                .expect("one algorithm ran");
            match format.resolve() {
                Format::Json => println!("{payload}"),
                Format::Tsv => {
                    for (c, mult) in table.entries() {
                        let descent: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                        println!("{}\t{mult}", descent.join(","));
                    }
                }
                Format::Pretty => {
                    println!(
                        "{ade}, weight {:?}, level {level}, depth {depth}",
                        w.components()
                    );
                    println!("q-series (delta-depth grading): {}", table.q_series());
                    println!("{} weights tabulated", table.len());
                    if let Some(v) = verdict {
                        println!("algorithm comparison: {v}");
                    }
                }
            }
            Ok(if verdict == Some("MISMATCH") {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Mckay { group, format } => {
            let spec = GroupSpec::parse(&group)?;
            let data = GroupData::build(spec)?;
            let report = mckay_graph(&data)?;
            let matched = match_ade(&report.graph);
            let dims_match_marks = matched.as_ref().ok().map(|m| {
                let alg = AffineAlgebra::new(m.ade).expect("matched type builds");
                m.permutation.iter().enumerate().all(|(node, &target)| {
                    u64::from(report.graph.node_dims[node]) == alg.marks()[target]
                })
            });
            let payload = json!({
                "group": spec.to_string(),
                "order": data.order(),
                "class_count": data.classes.len(),
                "dims": data.dims,
                "adjacency": report.graph.adjacency,
                "max_rounding_deviation": report.max_rounding_deviation,
                "matched_type": matched.as_ref().ok().map(|m| m.ade.to_string()),
                "node_to_affine_node": matched.as_ref().ok().map(|m| m.permutation.clone()),
                "marks": matched.as_ref().ok().map(|m| {
                    AffineAlgebra::new(m.ade)
                        .expect("matched type builds")
                        .marks()
                        .to_vec()
                }),
                "dims_match_marks": dims_match_marks,
            });
            match format.resolve() {
                Format::Json => println!("{payload}"),
                Format::Tsv => {
                    println!("order\t{}", data.order());
                    println!(
                        "dims\t{}",
                        data.dims
                            .iter()
                            .map(|d| d.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                    if let Ok(m) = &matched {
                        println!("type\t{}", m.ade);
                    }
                }
                Format::Pretty => {
                    println!(
                        "group {spec}: order {}, {} irreps",
                        data.order(),
                        data.classes.len()
                    );
                    println!("dims: {:?}", data.dims);
                    println!("adjacency:");
                    for row in &report.graph.adjacency {
                        println!("  {row:?}");
                    }
                    match &matched {
                        Ok(m) => println!(
                            "matched affine type {} (dims match marks: {})",
                            m.ade,
                            dims_match_marks.unwrap_or(false)
                        ),
                        Err(e) => println!("no ADE match: {e}"),
                    }
                }
            }
            match matched {
                Ok(_) => Ok(ExitCode::SUCCESS),
                Err(e) => Err(e.into()),
            }
        }
        Command::Hecke {
            form,
            weight,
            prime,
            terms,
            format,
        } => {
            let f = build_form(&form, terms)?;
            if let Some(expected) = weight {
                if expected != f.weight() {
                    return Err(
                        format!("form {form} has weight {}, not {expected}", f.weight()).into(),
                    );
                }
            }
            let eigenvalue = is_eigenform(prime, &f)?;
            let euler = if f.is_normalized() {
                Some(euler_product_check(&f, prime, u64::from(terms))?)
            } else {
                None
            };
            let other_prime = if prime == 2 { 3 } else { 2 };
            let commutes = if u64::from(f.q_order()) >= prime * other_prime {
                Some(commute_check(prime, other_prime, &f)?)
            } else {
                None
            };
            let payload = json!({
                "form": form,
                "weight": f.weight(),
                "prime": prime,
                "q_order": f.q_order(),
                "coefficients": f.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "eigenvalue": eigenvalue.as_ref().map(|l| l.to_string()),
                "is_eigenform": eigenvalue.is_some(),
                "euler_product": euler.as_ref().map(|r| json!({
                    "prime_power_identities": r.prime_power_identities,
                    "coprime_identities": r.coprime_identities,
                    "passed": r.passed(),
                })),
                "commutes_with_next_prime": commutes,
            });
            match format.resolve() {
                Format::Json => println!("{payload}"),
                Format::Tsv => {
                    for (n, c) in f.coeffs().iter().enumerate() {
                        println!("{n}\t{c}");
                    }
                }
                Format::Pretty => {
                    println!(
                        "{form}: weight {}, truncated at q^{}",
                        f.weight(),
                        f.q_order()
                    );
                    match &eigenvalue {
                        Some(l) => println!("T({prime}) eigenvalue: {l}"),
                        None => println!("not a T({prime}) eigenform"),
                    }
                    if let Some(r) = &euler {
                        println!(
                            "Euler product: {} prime-power and {} coprime identities -> {}",
                            r.prime_power_identities,
                            r.coprime_identities,
                            if r.passed() { "pass" } else { "FAIL" }
                        );
                    }
                    if let Some(c) = commutes {
                        println!(
                            "T({prime}) T({other_prime}) = T({other_prime}) T({prime}): {}",
                            if c { "yes" } else { "NO" }
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::EtaCheck {
            tau,
            tol,
            truncation,
            format,
        } => {
            let samples: Result<Vec<_>, String> = tau
                .iter()
                .map(|s| parse_complex(s).ok_or(format!("cannot parse tau {s:?}")))
                .collect();
            let samples = samples?;
            let report = eta_modularity_check(&samples, truncation, tol)?;
            let passed = report.max_deviation < tol;
            let payload = json!({
                "tolerance": tol,
                "truncation": report.truncation,
                "max_deviation": report.max_deviation,
                "max_tail_bound": report.max_tail_bound,
                "passed": passed,
                "samples": report.samples.iter().map(|s| json!({
                    "tau": format!("{}+{}i", s.tau.re, s.tau.im),
                    "deviation": s.deviation,
                })).collect::<Vec<_>>(),
            });
            match format.resolve() {
                Format::Json => println!("{payload}"),
                Format::Tsv => {
                    for s in &report.samples {
                        println!("{}+{}i\t{:e}", s.tau.re, s.tau.im, s.deviation);
                    }
                }
                Format::Pretty => {
                    for s in &report.samples {
                        println!(
                            "tau = {:.4}+{:.4}i: deviation {:.3e}",
                            s.tau.re, s.tau.im, s.deviation
                        );
                    }
                    println!(
                        "max deviation {:.3e} (tolerance {tol:.1e}, truncation {}, certified tail {:.3e})",
                        report.max_deviation, report.truncation, report.max_tail_bound
                    );
                }
            }
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Verify {
            suite,
            fast,
            seed,
            format,
        } => {
            let outcomes = run_suite(&suite, fast, seed)?;
            let all_passed = outcomes.iter().all(|o| o.passed);
            match format.resolve() {
                Format::Json => {
                    let payload = json!({
                        "suite": suite,
                        "fast": fast,
                        "passed": all_passed,
                        "results": outcomes.iter().map(|o| json!({
                            "name": o.name,
                            "passed": o.passed,
                            "detail": o.detail,
                        })).collect::<Vec<_>>(),
                    });
                    println!("{payload}");
                }
                Format::Tsv => {
                    for o in &outcomes {
                        println!(
                            "{}\t{}\t{}",
                            o.name,
                            if o.passed { "pass" } else { "fail" },
                            o.detail
                        );
                    }
                }
                Format::Pretty => {
                    for o in &outcomes {
                        println!(
                            "[{}] {}: {}",
                            if o.passed { "PASS" } else { "FAIL" },
                            o.name,
                            o.detail
                        );
                    }
                    println!(
                        "verify: {}/{} checks passed",
                        outcomes.iter().filter(|o| o.passed).count(),
                        outcomes.len()
                    );
                }
            }
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn run_suite(
    suite: &str,
    fast: bool,
    seed: u64,
) -> Result<Vec<verify::CheckOutcome>, Box<dyn std::error::Error>> {
    let outcomes = match suite {
        "all" => verify::run_all(fast, seed),
        "goettsche" => vec![verify::check_goettsche_partition_oracle(if fast {
            8
        } else {
            12
        })],
        "orbifold" => vec![if fast {
            verify::check_hirzebruch_hofer(4, &[1, 2])
        } else {
            verify::check_hirzebruch_hofer(6, &[1, 2, 3, 4])
        }],
        "fock-relations" => vec![if fast {
            verify::check_fock_relations([1, 1, 1, 1, 1], 4, 3)
        } else {
            verify::check_fock_relations([1, 2, 1, 2, 1], 6, 4)
        }],
        "fock-character" => vec![verify::check_fock_character(
            &[
                [1, 0, 0, 0, 0],
                [1, 0, 1, 0, 1],
                [0, 1, 0, 1, 0],
                [1, 2, 1, 2, 1],
                [2, 1, 3, 1, 2],
            ],
            if fast { 5 } else { 8 },
        )],
        "mckay" => vec![if fast {
            verify::check_mckay_families(4, 3, false)
        } else {
            verify::check_mckay_families(8, 6, true)
        }],
        "affine" => vec![verify::check_affine_dual_algorithms(if fast {
            3
        } else {
            6
        })],
        "level" => vec![verify::check_level_formula(seed)],
        "hecke" => vec![verify::check_hecke_suite()],
        "eta" => vec![verify::check_eta_modularity(1e-8)],
        other => return Err(format!("unknown suite {other:?}").into()),
    };
    Ok(outcomes)
}

fn emit_series(format: Format, payload: &Value, series: &BiSeries) {
    match format {
        Format::Json => println!("{payload}"),
        Format::Tsv => {
            for (q, t, c) in series.terms() {
                println!("{q}\t{t}\t{c}");
            }
        }
        Format::Pretty => println!("{series}"),
    }
}

fn table_json(table: &WeightTable) -> Value {
    json!({
        "depth": table.depth(),
        "entries": table.entries().map(|(c, mult)| json!({
            "descent": c,
            "multiplicity": mult.to_string(),
        })).collect::<Vec<_>>(),
        "q_series": table.q_series(),
    })
}

fn parse_betti(s: &str) -> Result<SurfaceTopology, String> {
    let parts: Result<Vec<u32>, _> = s.split(',').map(|p| p.trim().parse::<u32>()).collect();
    let parts = parts.map_err(|e| format!("bad Betti vector {s:?}: {e}"))?;
    let arr: [u32; 5] = parts
        .try_into()
        .map_err(|v: Vec<u32>| format!("Betti vector needs 5 entries, got {}", v.len()))?;
    Ok(SurfaceTopology::new(arr))
}

fn parse_weight(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<Vec<u64>, _>>()
        .map_err(|e| format!("bad weight {s:?}: {e}"))
}

fn parse_constants(s: &str) -> Result<CommutatorConstants, Box<dyn std::error::Error>> {
    if s == "default" {
        return Ok(CommutatorConstants::Default);
    }
    let values: Result<Vec<i64>, _> = s.split(',').map(|p| p.trim().parse::<i64>()).collect();
    let values = values.map_err(|e| format!("bad constants {s:?}: {e}"))?;
    Ok(CommutatorConstants::table(values)?)
}

fn build_form(name: &str, terms: u32) -> Result<QExpansion, Box<dyn std::error::Error>> {
    match name.to_ascii_lowercase().as_str() {
        "delta" => Ok(delta(terms)?),
        "e4" => Ok(eisenstein(4, terms)?),
        "e6" => Ok(eisenstein(6, terms)?),
        "e8" => Ok(eisenstein(8, terms)?),
        "e10" => Ok(eisenstein(10, terms)?),
        "e14" => Ok(eisenstein(14, terms)?),
        "e4cubed" => Ok(eisenstein(4, terms)?.pow(3)),
        other => Err(format!("unknown form {other:?}").into()),
    }
}
