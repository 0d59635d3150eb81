use std::path::PathBuf;

use asphera_core::borel::borel_homology;
use asphera_core::complex::{SimplicialAction, SimplicialComplex};
use asphera_core::ghom::{compute, h2_classes, Kind, Resolution, Route};
use asphera_core::grp::all_subgroups;
use asphera_core::lattice::{complex_to_dot, coset_poset, order_complex, subgroup_lattice};
use asphera_core::specseq::{abutment, e2_page_with, subgroup_diagram_check, subordinate_report};
use asphera_core::topo::{components, euler_characteristic, homology_group, is_free_action, AbelianGroup};
use asphera_core::Limits;
use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::{input, CliError};

/// What a compute command produced.
pub enum Output {
    Json { inputs: Value, outputs: Value },
    Dot(String),
}

#[derive(Debug, Args)]
pub struct ActionArgs {
    /// Group action on a complex: a preset name or a JSON file.
    #[arg(long)]
    action: String,
    /// Group for the poset presets (coset-shift, coset-conj, subgroup-conj).
    #[arg(long)]
    group: Option<String>,
}

impl ActionArgs {
    fn load(&self) -> Result<SimplicialAction, CliError> {
        input::action(&self.action, self.group.as_deref())
    }

    fn echo(&self) -> Value {
        json!({ "action": self.action, "group": self.group })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ResolutionArg {
    Auto,
    Bar,
    Periodic,
}

impl From<ResolutionArg> for Resolution {
    fn from(r: ResolutionArg) -> Self {
        match r {
            ResolutionArg::Auto => Resolution::Auto,
            ResolutionArg::Bar => Resolution::Bar,
            ResolutionArg::Periodic => Resolution::Periodic,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Compute {
    /// Multiplication table, element orders and subgroups.
    Group {
        #[arg(long)]
        group: String,
        /// Also list every subgroup.
        #[arg(long)]
        subgroups: bool,
    },
    /// Coset poset or subgroup lattice with its order complex.
    Lattice {
        #[arg(long)]
        group: String,
        #[arg(long, conflicts_with = "subgroup_lattice")]
        coset_poset: bool,
        #[arg(long)]
        subgroup_lattice: bool,
        /// Emit the Hasse diagram as DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Integral homology of a complex.
    Homology {
        /// SimplicialComplex JSON file.
        #[arg(long, conflicts_with = "action")]
        complex: Option<PathBuf>,
        /// Take the complex underlying an action instead.
        #[arg(long)]
        action: Option<String>,
        #[arg(long)]
        group: Option<String>,
        /// Single degree; all degrees when omitted.
        #[arg(long)]
        degree: Option<usize>,
        /// Emit the 1-skeleton as DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Group homology or cohomology with coefficients in a module.
    Ghom {
        /// trivial, trivial:<m>, sign, character:<signs>, h1:<action> or a JSON file.
        #[arg(long)]
        module: String,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        cohomology: bool,
        #[arg(long, value_enum, default_value = "auto")]
        resolution: ResolutionArg,
        /// List the classes of H² (implies --cohomology --degree 2).
        #[arg(long)]
        classes: bool,
    },
    /// E² page of the action and what it determines.
    E2 {
        #[command(flatten)]
        action: ActionArgs,
        #[arg(long, default_value_t = 3)]
        pmax: usize,
        #[arg(long, default_value_t = 1)]
        qmax: usize,
        #[arg(long)]
        cohomology: bool,
        #[arg(long, value_enum, default_value = "auto")]
        resolution: ResolutionArg,
    },
    /// Homology of the truncated Borel construction.
    Borel {
        #[command(flatten)]
        action: ActionArgs,
        /// Number of join levels m; degrees ≤ m − 2 are certified.
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Extension report of an action on a graph.
    Subordinate {
        #[command(flatten)]
        action: ActionArgs,
        /// Subgroup generators for a single diagram check.
        #[arg(long)]
        subgroup: Option<String>,
    },
}

fn text_groups(gs: &[AbelianGroup]) -> Vec<Value> {
    gs.iter().map(group_json).collect()
}

fn group_json(g: &AbelianGroup) -> Value {
    let mut v = serde_json::to_value(g).expect("serializable");
    v["text"] = Value::String(g.to_string());
    v
}

fn complex_summary(k: &SimplicialComplex, degree: Option<usize>) -> Result<Value, CliError> {
    let dim = k.dimension().unwrap_or(0);
    let degrees: Vec<usize> = match degree {
        Some(d) => vec![d],
        None => (0..=dim).collect(),
    };
    let groups = degrees.iter().map(|&d| homology_group(k, d)).collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "vertices": k.vertex_count(),
        "counts": (0..=dim).map(|d| k.count(d)).collect::<Vec<_>>(),
        "dimension": k.dimension(),
        "components": components(k),
        "euler": euler_characteristic(k),
        "degrees": degrees,
        "homology": text_groups(&groups),
    }))
}

pub fn run(cmd: &Compute, limits: &Limits) -> Result<Output, CliError> {
    match cmd {
        Compute::Group { group, subgroups } => {
            let g = input::group(group)?;
            let mut out = json!({
                "order": g.order(),
                "names": g.names(),
                "table": g.table(),
                "element_orders": g.elements().map(|x| g.element_order(x)).collect::<Vec<_>>(),
                "abelian": g.is_abelian(),
                "cyclic_generator": g.cyclic_generator(),
            });
            if *subgroups {
                out["subgroups"] = all_subgroups(&g).iter().map(|h| h.members().to_vec()).collect();
            }
            Ok(Output::Json {
                inputs: json!({ "group": group }),
                outputs: out,
            })
        }
        Compute::Lattice {
            group,
            coset_poset: _,
            subgroup_lattice: lattice,
            dot,
        } => {
            let g = input::group(group)?;
            let (name, poset) = if *lattice {
                ("subgroup lattice", subgroup_lattice(&g))
            } else {
                ("coset poset", coset_poset(&g))
            };
            if *dot {
                return Ok(Output::Dot(poset.to_dot(name)));
            }
            let k = order_complex(&poset);
            Ok(Output::Json {
                inputs: json!({ "group": group, "poset": name }),
                outputs: json!({
                    "elements": poset.elements().iter().map(|e| e.label.clone()).collect::<Vec<_>>(),
                    "covering_pairs": poset.hasse(),
                    "chain_counts": poset.chain_counts(),
                    "order_complex": complex_summary(&k, None)?,
                }),
            })
        }
        Compute::Homology {
            complex,
            action,
            group,
            degree,
            dot,
        } => {
            let k = match (complex, action) {
                (Some(path), _) => input::complex(path)?,
                (None, Some(a)) => input::action(a, group.as_deref())?.complex().clone(),
                (None, None) => return Err(CliError::Usage("homology needs --complex or --action".into())),
            };
            if *dot {
                return Ok(Output::Dot(complex_to_dot(&k, "complex")));
            }
            Ok(Output::Json {
                inputs: json!({ "complex": complex, "action": action, "group": group, "degree": degree }),
                outputs: complex_summary(&k, *degree)?,
            })
        }
        Compute::Ghom {
            module,
            group,
            degree,
            cohomology,
            resolution,
            classes,
        } => {
            let m = input::module(module, group.as_deref())?;
            let inputs = json!({
                "module": module,
                "group": group,
                "degree": degree,
                "cohomology": cohomology,
                "resolution": Resolution::from(*resolution),
                "classes": classes,
            });
            if *classes {
                let h2 = h2_classes(&m, limits)?;
                return Ok(Output::Json {
                    inputs,
                    outputs: json!({
                        "module": group_json(&m.abelian_group()),
                        "H2": group_json(h2.group()),
                        "complete": h2.is_complete(),
                        "classes": h2.classes().iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                    }),
                });
            }
            let kind = if *cohomology { Kind::Cohomology } else { Kind::Homology };
            let h = compute(&m, *degree, kind, (*resolution).into(), Route::Auto, limits)?;
            Ok(Output::Json {
                inputs,
                outputs: json!({ "module": group_json(&m.abelian_group()), "result": group_json(&h) }),
            })
        }
        Compute::E2 {
            action,
            pmax,
            qmax,
            cohomology,
            resolution,
        } => {
            let sa = action.load()?;
            let kind = if *cohomology { Kind::Cohomology } else { Kind::Homology };
            let page = e2_page_with(&sa, *pmax, *qmax, kind, (*resolution).into(), limits)?;
            let grid: Vec<Vec<Value>> = (0..=*qmax).map(|q| text_groups(&page.row(q)[..=*pmax])).collect();
            let ab = match abutment(&page) {
                Ok(a) => serde_json::to_value(a).expect("serializable"),
                Err(e @ asphera_core::Error::InsufficientPage(_)) => json!({ "error": e.to_string() }),
                Err(e) => return Err(e.into()),
            };
            let mut inputs = action.echo();
            inputs["pmax"] = json!(pmax);
            inputs["qmax"] = json!(qmax);
            inputs["cohomology"] = json!(cohomology);
            Ok(Output::Json {
                inputs,
                outputs: json!({
                    "label": page.label(),
                    "resolution": page.resolution(),
                    "page": grid,
                    "abutment": ab,
                }),
            })
        }
        Compute::Borel { action, levels, degree } => {
            let sa = action.load()?;
            let b = borel_homology(&sa, *levels, *degree, limits)?;
            let mut inputs = action.echo();
            inputs["levels"] = json!(levels);
            inputs["degree"] = json!(degree);
            Ok(Output::Json {
                inputs,
                outputs: json!({
                    "certified_degree": b.certified_degree,
                    "subdivided": b.subdivided,
                    "homology": text_groups(&b.groups),
                    "unreliable": b.unreliable.iter().map(|(k, g)| json!({ "degree": k, "group": group_json(g) })).collect::<Vec<_>>(),
                }),
            })
        }
        Compute::Subordinate { action, subgroup } => {
            let sa = action.load()?;
            let mut inputs = action.echo();
            inputs["subgroup"] = json!(subgroup);
            let outputs = match subgroup {
                Some(gens) => {
                    let h = input::subgroup(sa.group(), gens)?;
                    json!({ "free": is_free_action(&sa.restrict(&h)).is_free(), "diagram": subgroup_diagram_check(&sa, &h)? })
                }
                None => json!({ "report": subordinate_report(&sa)? }),
            };
            Ok(Output::Json { inputs, outputs })
        }
    }
}
