//! Worked examples with expected values checked against fresh computations.

use asphera_core::borel::borel_homology;
use asphera_core::complex::SimplicialAction;
use asphera_core::ghom::{cyclic_group_homology, group_homology, h2_classes, homology_gmodule, GModule};
use asphera_core::grp::FiniteGroup;
use asphera_core::lattice::{coset_poset, coset_shift_action, order_complex, simplicial_action};
use asphera_core::specseq::{abutment, e2_page, subgroup_diagram_check, subordinate_report, ExtensionReport};
use asphera_core::topo::{components, euler_characteristic, homology_group, AbelianGroup};
use asphera_core::{Error, Limits};
use serde_json::{json, Value};

use crate::input;
use crate::report::Checks;
use crate::CliError;

pub const IDS: &str = "zpq:<p>,<q>, dihedral:<n>, three-extensions, coset-wedge:<group>";

pub struct Outcome {
    pub inputs: Value,
    pub outputs: Value,
    pub pass: bool,
}

fn text(g: &AbelianGroup) -> String {
    g.to_string()
}

fn texts(gs: &[AbelianGroup]) -> Vec<String> {
    gs.iter().map(text).collect()
}

/// Runs a step guarded by resource limits; `None` means skipped for scale.
fn guarded<T>(r: asphera_core::Result<T>, skipped: &mut Vec<String>, what: &str) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::ScaleExceeded { .. }) => {
            skipped.push(what.to_string());
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn run(id: &str, levels: usize, limits: &Limits) -> Result<Outcome, CliError> {
    let (name, arg) = id.split_once(':').unwrap_or((id, ""));
    let (checks, extra) = match (name, arg) {
        ("zpq", arg) => {
            let pq: Vec<usize> = arg
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| CliError::Usage(format!("bad zpq parameter `{s}`"))))
                .collect::<Result<_, _>>()?;
            match pq[..] {
                [p, q] if p >= 2 && q >= 2 && p != q && is_prime(p) && is_prime(q) => zpq(p, q, levels, limits)?,
                _ => return Err(CliError::Usage("zpq:<p>,<q> needs two distinct primes".into())),
            }
        }
        ("dihedral", arg) => {
            let n: usize = arg
                .parse()
                .map_err(|_| CliError::Usage(format!("bad dihedral parameter `{arg}`")))?;
            if n < 3 {
                return Err(CliError::Usage("dihedral:<n> needs n ≥ 3".into()));
            }
            dihedral(n, levels, limits)?
        }
        ("three-extensions", "") => three_extensions(limits)?,
        ("coset-wedge", spec) if !spec.is_empty() => coset_wedge(spec)?,
        _ => return Err(CliError::Usage(format!("unknown example `{id}`; valid ids: {IDS}"))),
    };
    let pass = checks.all_pass();
    let mut outputs = json!({ "checks": checks.0, "all_pass": pass });
    if let Value::Object(extra) = extra {
        outputs.as_object_mut().expect("object").extend(extra);
    }
    Ok(Outcome {
        inputs: json!({ "id": id, "levels": levels }),
        outputs,
        pass,
    })
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn zpq(p: usize, q: usize, levels: usize, limits: &Limits) -> Result<(Checks, Value), CliError> {
    let n = p * q;
    let g = FiniteGroup::cyclic(n)?;
    let poset = coset_poset(&g);
    let sa = simplicial_action(&coset_shift_action(&g, &poset)?)?;
    let k = sa.complex();
    let mut c = Checks::default();
    let mut skipped = Vec::new();

    c.push("vertices", n + p + q, k.vertex_count());
    c.push("edges", 2 * n, k.count(1));
    c.push("dimension", 1, k.dimension());
    c.push("connected", 1, components(k));
    c.push("H_0", "Z", text(&homology_group(k, 0)?));
    c.push("H_1", text(&AbelianGroup::free((p - 1) * (q - 1))), text(&homology_group(k, 1)?));
    c.push("euler", 1 - ((p - 1) * (q - 1)) as i64, euler_characteristic(k));

    let h1 = homology_gmodule(&sa, 1)?;
    let periodic: Vec<AbelianGroup> = (0..=6).map(|j| cyclic_group_homology(&h1, j)).collect::<Result<_, _>>()?;
    c.push("H_k(G; H_1) periodic, k ≤ 6", vec!["0"; 7], texts(&periodic));
    let mut bar = Vec::new();
    for j in 0..=3 {
        match guarded(group_homology(&h1, j, limits), &mut skipped, &format!("bar H_{j}(G; H_1)"))? {
            Some(h) => bar.push(h),
            None => break,
        }
    }
    c.push("H_k(G; H_1) bar", vec!["0"; bar.len()], texts(&bar));

    let trivial = GModule::trivial(&g, 0);
    let expected: Vec<AbelianGroup> = (0..=5).map(|j| cyclic_group_homology(&trivial, j)).collect::<Result<_, _>>()?;
    let page = e2_page(&sa, 5, 1, limits)?;
    let ab = abutment(&page)?;
    let determined: Vec<Option<String>> = ab.values().iter().map(|v| v.as_ref().map(text)).collect();
    c.push(
        "H_k(S) = H_k(G), k ≤ 5",
        texts(&expected).into_iter().map(Some).collect::<Vec<_>>(),
        determined,
    );

    if let Some(b) = guarded(borel_homology(&sa, levels, 1, limits), &mut skipped, "Borel homology")? {
        c.push("Borel H_1", text(&expected[1]), text(&b.groups[1]));
    }
    Ok((c, json!({ "skipped": skipped, "abutment": ab })))
}

fn dihedral(n: usize, levels: usize, limits: &Limits) -> Result<(Checks, Value), CliError> {
    let sa = SimplicialAction::dihedral_polygon(n)?;
    let rotations = sa.group().closure(&[1]);
    let diagram = subgroup_diagram_check(&sa, &rotations)?;
    let mut c = Checks::default();
    c.push("rotation subgroup order", n, rotations.order());
    c.push("quotient connected", true, diagram.quotient_connected);
    c.push("quotient euler", 0, diagram.quotient_euler);
    c.push("quotient H_1", "Z", text(&diagram.quotient_h1));
    c.push("rotation-row H_1 map", vec![vec![n as i64]], diagram.h1_map.clone());
    let report = subordinate_report(&sa)?;
    let kind = match report {
        ExtensionReport::Free { .. } => "FREE",
        ExtensionReport::SplitFixedPoint { .. } => "SPLIT-FIXED-POINT",
        ExtensionReport::DiagramOnly { .. } => "DIAGRAM-ONLY",
    };
    c.push("report kind", "DIAGRAM-ONLY", kind);
    let borel = borel_homology(&sa, levels, 1, limits)?;
    c.push("Borel H_1", "Z_2 ⊕ Z_2", text(&borel.groups[1]));
    Ok((c, json!({ "diagram": diagram, "borel": borel })))
}

fn three_extensions(limits: &Limits) -> Result<(Checks, Value), CliError> {
    let g = FiniteGroup::cyclic(2)?;
    let trivial = h2_classes(&GModule::trivial(&g, 0), limits)?;
    let sign = h2_classes(&GModule::sign(&g)?, limits)?;
    let split = |h: &asphera_core::ghom::H2Classes| h.classes().iter().filter(|c| c.is_split).count();
    let mut c = Checks::default();
    c.push("classes over trivial Z", 2, trivial.classes().len());
    c.push("split classes over trivial Z", 1, split(&trivial));
    c.push("classes over sign Z", 1, sign.classes().len());
    c.push("split classes over sign Z", 1, split(&sign));
    c.push("total", 3, trivial.classes().len() + sign.classes().len());
    let classes = |h: &asphera_core::ghom::H2Classes| h.classes().iter().map(|c| c.to_json()).collect::<Vec<_>>();
    Ok((
        c,
        json!({
            "trivial": { "H2": text(trivial.group()), "classes": classes(&trivial) },
            "sign": { "H2": text(sign.group()), "classes": classes(&sign) },
        }),
    ))
}

/// The coset complex is connected and, when one-dimensional, a wedge of
/// `1 − χ` circles.
fn coset_wedge(spec: &str) -> Result<(Checks, Value), CliError> {
    let g = input::group(spec)?;
    let poset = coset_poset(&g);
    let k = order_complex(&poset);
    let dim = k.dimension().unwrap_or(0);
    let groups: Vec<AbelianGroup> = (0..=dim).map(|j| homology_group(&k, j)).collect::<Result<_, _>>()?;
    let chi = euler_characteristic(&k);
    let mut c = Checks::default();
    c.push("connected", 1, components(&k));
    c.push("H_0", "Z", text(&groups[0]));
    c.push("torsion-free", true, groups.iter().all(|h| h.torsion().is_empty()));
    let alternating: i64 = groups
        .iter()
        .enumerate()
        .map(|(j, h)| {
            if j % 2 == 0 {
                h.free_rank() as i64
            } else {
                -(h.free_rank() as i64)
            }
        })
        .sum();
    c.push("euler = alternating Betti sum", chi, alternating);
    if dim <= 1 {
        let rank = (1 - chi).max(0) as usize;
        c.push(
            "H_1 = wedge rank 1 − χ",
            text(&AbelianGroup::free(rank)),
            text(&groups.get(1).cloned().unwrap_or_else(|| AbelianGroup::free(0))),
        );
    }
    Ok((
        c,
        json!({
            "poset_size": poset.len(),
            "covering_pairs": poset.hasse().len(),
            "dimension": dim,
            "euler": chi,
            "homology": texts(&groups),
        }),
    ))
}
