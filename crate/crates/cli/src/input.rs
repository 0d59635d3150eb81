//! Parsing of group, action and module arguments.

use std::fs;
use std::path::Path;

use asphera_core::complex::{SimplicialAction, SimplicialComplex};
use asphera_core::ghom::{homology_gmodule, GModule};
use asphera_core::grp::{build_group, FiniteGroup, GroupSpec, Subgroup};
use asphera_core::lattice::{conjugation_poset_action, coset_poset, coset_shift_action, simplicial_action, subgroup_lattice};

use crate::CliError;

pub const ACTION_PRESETS: &str = "hexagon-trivial, hexagon-antipodal, hexagon-reflection, dihedral-polygon:<n>, \
cycle-rotation:<n>,<k>, coset-shift, coset-conj, subgroup-conj, or a JSON file";

/// A family name such as `cyclic:6` or `cyclic:2*dihedral:3`, or a JSON file
/// holding a multiplication table.
pub fn group(spec: &str) -> Result<FiniteGroup, CliError> {
    if Path::new(spec).is_file() {
        return read_json(Path::new(spec));
    }
    let spec: GroupSpec = spec.parse().map_err(|e| CliError::Usage(format!("--group: {e}")))?;
    Ok(build_group(&spec)?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn complex(path: &Path) -> Result<SimplicialComplex, CliError> {
    read_json(path)
}

fn numbers(arg: &str, what: &str) -> Result<Vec<usize>, CliError> {
    arg.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad {what} parameter `{s}`")))
        })
        .collect()
}

fn hexagon(perm: impl Fn(usize) -> usize) -> Result<SimplicialAction, CliError> {
    let c = SimplicialComplex::cycle(6)?;
    let g = FiniteGroup::cyclic(2)?;
    Ok(SimplicialAction::from_perms(
        c,
        g,
        vec![(0..6).collect(), (0..6).map(perm).collect()],
    )?)
}

/// `Z_n` rotating the `kn`-cycle by `k` steps per generator.
pub fn cycle_rotation(n: usize, k: usize) -> Result<SimplicialAction, CliError> {
    if n == 0 || k == 0 || n * k < 3 {
        return Err(CliError::Usage("cycle-rotation needs n, k ≥ 1 and nk ≥ 3".into()));
    }
    let c = SimplicialComplex::cycle(n * k)?;
    let perms = (0..n).map(|x| (0..n * k).map(|v| (v + x * k) % (n * k)).collect()).collect();
    Ok(SimplicialAction::from_perms(c, FiniteGroup::cyclic(n)?, perms)?)
}

/// Resolves `--action`; presets on posets read the group from `--group`.
pub fn action(spec: &str, group_spec: Option<&str>) -> Result<SimplicialAction, CliError> {
    let need_group = || {
        group_spec
            .ok_or_else(|| CliError::Usage(format!("action `{spec}` needs --group")))
            .and_then(group)
    };
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "hexagon-trivial" => hexagon(|v| v),
        "hexagon-antipodal" => hexagon(|v| (v + 3) % 6),
        "hexagon-reflection" => hexagon(|v| (6 - v) % 6),
        "dihedral-polygon" => {
            let n = numbers(arg, "dihedral-polygon")?;
            match n[..] {
                [n] if n >= 3 => Ok(SimplicialAction::dihedral_polygon(n)?),
                _ => Err(CliError::Usage("dihedral-polygon:<n> needs n ≥ 3".into())),
            }
        }
        "cycle-rotation" => match numbers(arg, "cycle-rotation")?[..] {
            [n, k] => cycle_rotation(n, k),
            _ => Err(CliError::Usage("cycle-rotation:<n>,<k> takes two numbers".into())),
        },
        "coset-shift" => {
            let g = need_group()?;
            Ok(simplicial_action(&coset_shift_action(&g, &coset_poset(&g))?)?)
        }
        "coset-conj" => {
            let g = need_group()?;
            Ok(simplicial_action(&conjugation_poset_action(&g, &coset_poset(&g))?)?)
        }
        "subgroup-conj" => {
            let g = need_group()?;
            Ok(simplicial_action(&conjugation_poset_action(&g, &subgroup_lattice(&g))?)?)
        }
        _ if Path::new(spec).is_file() => read_json(Path::new(spec)),
        _ => Err(CliError::Usage(format!("unknown action `{spec}`; expected {ACTION_PRESETS}"))),
    }
}

/// `trivial`, `trivial:<m>`, `sign`, `character:<±1,...>`, `h1:<action>` or a
/// JSON file.
pub fn module(spec: &str, group_spec: Option<&str>) -> Result<GModule, CliError> {
    if let Some(rest) = spec.strip_prefix("h1:") {
        let sa = action(rest, group_spec)?;
        return Ok(homology_gmodule(&sa, 1)?);
    }
    if Path::new(spec).is_file() {
        return read_json(Path::new(spec));
    }
    let g = group(group_spec.ok_or_else(|| CliError::Usage(format!("module `{spec}` needs --group")))?)?;
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "trivial" if arg.is_empty() => Ok(GModule::trivial(&g, 0)),
        "trivial" => {
            let m = arg.parse().map_err(|_| CliError::Usage(format!("bad modulus `{arg}`")))?;
            Ok(GModule::trivial(&g, m))
        }
        "sign" => Ok(GModule::sign(&g)?),
        "character" => {
            let signs = arg
                .split(',')
                .map(|s| s.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad sign `{s}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(GModule::character(&g, &signs)?)
        }
        _ => Err(CliError::Usage(format!(
            "unknown module `{spec}`; expected trivial, trivial:<m>, sign, character:<signs>, h1:<action> or a JSON file"
        ))),
    }
}

/// Comma-separated element indices generating a subgroup.
pub fn subgroup(g: &FiniteGroup, gens: &str) -> Result<Subgroup, CliError> {
    let gens = numbers(gens, "subgroup")?;
    if let Some(&x) = gens.iter().find(|&&x| x >= g.order()) {
        return Err(CliError::Usage(format!(
            "element {x} out of range for a group of order {}",
            g.order()
        )));
    }
    Ok(g.closure(&gens))
}
