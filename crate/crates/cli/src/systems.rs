use anyhow::{anyhow, bail, Context, Result};
use topodyn::systems::{
    plane_two_metrics, shrinking_intervals, FiniteSystem, HarmonicPoints, LinearSystem, NorthSouth, PerturbedTorus,
    Shift, Strips, TorusAutomorphism, TransitionMatrix,
};

/// A system named on the command line.
pub enum Named {
    Torus(TorusAutomorphism),
    PerturbedTorus(PerturbedTorus),
    Linear(LinearSystem),
    Shift(Shift),
    Finite(FiniteSystem),
    Interval(NorthSouth),
    Harmonic(HarmonicPoints),
    Strips(Strips),
}

pub const NAME_HELP: &str = "cat-map, perturbed-cat, diag, diag-chordal, full-2-shift, golden-mean, sft-2block, \
sft:<rows> (e.g. sft:110,011,101), permutation-3cycles, perm:<images> (e.g. perm:1,2,0), north-south, harmonic, \
strips-a, strips-b";

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| anyhow!("bad {what} entry `{t}`")))
        .collect()
}

pub fn parse(name: &str) -> Result<Named> {
    if let Some(rows) = name.strip_prefix("sft:") {
        let rows: Vec<&str> = rows.split(',').collect();
        let tm = TransitionMatrix::parse_rows(&rows).with_context(|| format!("transition rows `{}`", rows.join(",")))?;
        return Ok(Named::Shift(Shift::new(tm)));
    }
    if let Some(images) = name.strip_prefix("perm:") {
        let perm = FiniteSystem::new(list(images, "permutation")?).context("permutation")?;
        return Ok(Named::Finite(perm));
    }
    Ok(match name {
        "cat-map" => Named::Torus(TorusAutomorphism::cat_map()),
        "perturbed-cat" => Named::PerturbedTorus(PerturbedTorus::new(TorusAutomorphism::cat_map(), 0.002)?),
        "diag" => Named::Linear(plane_two_metrics()),
        "diag-chordal" => {
            let diag = plane_two_metrics();
            let chordal = diag.chordal();
            Named::Linear(diag.with_metric(chordal).named("diag-chordal"))
        }
        "full-2-shift" => Named::Shift(Shift::new(TransitionMatrix::full(2)).named("full-2-shift")),
        "golden-mean" => Named::Shift(Shift::new(TransitionMatrix::golden_mean()).named("golden-mean")),
        "sft-2block" => Named::Shift(topodyn::demo::two_block_shift()),
        "permutation-3cycles" => Named::Finite(FiniteSystem::cycles(&[1, 2, 3]).named("permutation-3cycles")),
        "north-south" => Named::Interval(NorthSouth::default()),
        "harmonic" => Named::Harmonic(HarmonicPoints::new(10_000)),
        "strips-a" => Named::Strips(shrinking_intervals(40).0),
        "strips-b" => Named::Strips(shrinking_intervals(40).1),
        _ => bail!("unknown system `{name}`; known systems: {NAME_HELP}"),
    })
}
