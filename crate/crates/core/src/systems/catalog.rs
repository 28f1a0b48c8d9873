/// Summary of a named catalog system.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub provenance: &'static str,
    pub params: Vec<(&'static str, String)>,
}

fn entry(name: &'static str, provenance: &'static str, params: &[(&'static str, &str)]) -> CatalogEntry {
    CatalogEntry {
        name,
        provenance,
        params: params.iter().map(|(k, v)| (*k, v.to_string())).collect(),
    }
}

/// Every named system known to the toolkit.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        entry(
            "cat-map",
            "standard Anosov automorphism of the torus",
            &[("space", "torus"), ("matrix", "[[2,1],[1,1]]"), ("metric", "torus quotient")],
        ),
        entry(
            "perturbed-cat",
            "C1-small perturbation of the cat map",
            &[
                ("space", "torus"),
                ("map", "A x + 0.002 (sin 2pi x2, sin 2pi x1) mod 1"),
                ("metric", "torus quotient"),
            ],
        ),
        entry(
            "diag",
            "hyperbolic linear map of the plane",
            &[("space", "plane"), ("matrix", "[[2,0],[0,0.5]]"), ("metric", "euclidean")],
        ),
        entry(
            "diag-chordal",
            "same map with the metric pulled back from the sphere; not expansive",
            &[("space", "plane"), ("matrix", "[[2,0],[0,0.5]]"), ("metric", "chordal")],
        ),
        entry(
            "full-2-shift",
            "full shift on two symbols",
            &[("space", "shift"), ("transitions", "11,11")],
        ),
        entry(
            "golden-mean",
            "vertex shift forbidding the word 11",
            &[("space", "shift"), ("transitions", "11,10")],
        ),
        entry(
            "sft-2block",
            "block-diagonal shift with two irreducible blocks",
            &[("space", "shift"), ("transitions", "1100,1100,0011,0011")],
        ),
        entry(
            "permutation-3cycles",
            "permutation with cycles of lengths 1, 2 and 3",
            &[("space", "finite"), ("cycles", "[1,2,3]"), ("metric", "discrete")],
        ),
        entry(
            "north-south",
            "gradient-like map of [-1,1] with fixed points -1, 0, 1",
            &[("space", "interval"), ("map", "x - 0.1 x (1 - x^2)")],
        ),
        entry(
            "harmonic",
            "harmonic partial sums under the identity: topological but not metric shadowing",
            &[("space", "discrete subset of the line"), ("map", "identity"), ("window", "10000")],
        ),
        entry(
            "strips-a",
            "shrinking fibers {n} x [0, 2^-|n|]: metric shadowing",
            &[("space", "strips"), ("map", "(n+1, 2y) if n<0, (n+1, y/2) if n>=0"), ("window", "40")],
        ),
        entry(
            "strips-b",
            "unit fibers {n} x [0,1] under translation: conjugate to strips-a, no metric shadowing",
            &[("space", "strips"), ("map", "(n+1, y)"), ("window", "40")],
        ),
    ]
}

/// The catalog as `key: value` lines, entries separated by blank lines.
pub fn catalog_text() -> String {
    let mut out = String::new();
    for (i, e) in catalog().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("name: {}\nprovenance: {}\n", e.name, e.provenance));
        for (k, v) in &e.params {
            out.push_str(&format!("{k}: {v}\n"));
        }
    }
    out
}
