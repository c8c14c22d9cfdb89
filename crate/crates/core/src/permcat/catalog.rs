use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use super::graph::{AdjacencySet, ColoredGraph, COLORS};
use super::perm::{involution_from_cycles, Permutation};

/// Catalog text shipped with the crate.
pub const BUNDLED_CATALOG: &str = include_str!("../../data/catalog.txt");

/// Environment variable that points at a replacement catalog file.
pub const CATALOG_ENV: &str = "ISODRUM_CATALOG";

const GENERATOR_KEYS: [[&str; COLORS]; 2] = [["a1", "b1", "c1"], ["a2", "b2", "c2"]];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown pair {0:?}")]
    UnknownPair(String),
}

/// Why a catalog record cannot be trusted as transcribed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceFlag {
    /// The generators fail involution or connectivity validation.
    Corrupt(String),
    /// The generators repeat those of an earlier record verbatim.
    DuplicateOf(String),
}

/// One catalog record: the two generator triples of an isospectral pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSpec {
    pub name: String,
    pub group_label: String,
    pub d: usize,
    /// Cycle text exactly as recorded, `[points, hyperplanes]`.
    pub raw: [[String; COLORS]; 2],
    generators: Option<[[Permutation; COLORS]; 2]>,
    pub flags: Vec<SourceFlag>,
}

impl PairSpec {
    /// Builds and validates a record from cycle text.
    pub fn from_cycles(
        name: &str,
        group_label: &str,
        d: usize,
        raw: [[String; COLORS]; 2],
    ) -> PairSpec {
        let mut flags = Vec::new();
        let mut parsed: [Vec<Permutation>; 2] = [Vec::new(), Vec::new()];
        for side in 0..2 {
            for (mu, text) in raw[side].iter().enumerate() {
                match involution_from_cycles(text, d) {
                    Ok(p) if p.is_identity() => flags.push(SourceFlag::Corrupt(format!(
                        "{}: identity is not an unfolding generator",
                        GENERATOR_KEYS[side][mu]
                    ))),
                    Ok(p) => parsed[side].push(p),
                    Err(e) => flags.push(SourceFlag::Corrupt(format!(
                        "{}: {e}",
                        GENERATOR_KEYS[side][mu]
                    ))),
                }
            }
        }
        let generators = if flags.is_empty() {
            let [p, h] = parsed;
            let to_arr = |v: Vec<Permutation>| -> [Permutation; COLORS] {
                v.try_into().expect("three generators")
            };
            Some([to_arr(p), to_arr(h)])
        } else {
            None
        };
        let mut spec = PairSpec {
            name: name.to_string(),
            group_label: group_label.to_string(),
            d,
            raw,
            generators,
            flags,
        };
        spec.check_structure();
        spec
    }

    fn check_structure(&mut self) {
        let Some(gens) = self.generators.clone() else {
            return;
        };
        let mut problems = Vec::new();
        let mut moved = [0usize; 2];
        for (side, label) in [(0, "point"), (1, "hyperplane")] {
            let adj = AdjacencySet::new(&gens[side]).expect("validated involutions");
            let g = ColoredGraph::from_adjacency(&adj);
            if !g.is_connected() {
                problems.push(format!(
                    "{label} graph has {} components",
                    g.component_count()
                ));
            }
            moved[side] = gens[side].iter().map(|p| p.moved_count()).sum();
        }
        if moved[0] != moved[1] {
            problems.push(format!(
                "moved-point totals differ ({} vs {})",
                moved[0], moved[1]
            ));
        }
        for gen_side in 0..COLORS {
            let (p, h) = (&gens[0][gen_side], &gens[1][gen_side]);
            if p.fixed_count() != h.fixed_count() {
                problems.push(format!(
                    "side {} boundary counts differ ({} vs {})",
                    gen_side + 1,
                    p.fixed_count(),
                    h.fixed_count()
                ));
            }
        }
        if !problems.is_empty() {
            self.generators = None;
            self.flags
                .extend(problems.into_iter().map(SourceFlag::Corrupt));
        }
    }

    pub fn is_corrupt(&self) -> bool {
        self.flags.iter().any(|f| matches!(f, SourceFlag::Corrupt(_)))
    }

    pub fn corruption_reasons(&self) -> Vec<&str> {
        self.flags
            .iter()
            .filter_map(|f| match f {
                SourceFlag::Corrupt(s) => Some(s.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn gens_points(&self) -> Option<&[Permutation; COLORS]> {
        self.generators.as_ref().map(|g| &g[0])
    }

    pub fn gens_hyperplanes(&self) -> Option<&[Permutation; COLORS]> {
        self.generators.as_ref().map(|g| &g[1])
    }

    /// Adjacency sets `(points, hyperplanes)` for a valid record.
    pub fn adjacency(&self) -> Option<(AdjacencySet, AdjacencySet)> {
        let g = self.generators.as_ref()?;
        Some((
            AdjacencySet::new(&g[0]).ok()?,
            AdjacencySet::new(&g[1]).ok()?,
        ))
    }

    pub fn graphs(&self) -> Option<(ColoredGraph, ColoredGraph)> {
        let (a, b) = self.adjacency()?;
        Some((ColoredGraph::from_adjacency(&a), ColoredGraph::from_adjacency(&b)))
    }

    /// Sum over generators of moved points, for each member.
    pub fn moved_totals(&self) -> Option<(usize, usize)> {
        let g = self.generators.as_ref()?;
        let total = |s: &[Permutation; COLORS]| s.iter().map(|p| p.moved_count()).sum();
        Some((total(&g[0]), total(&g[1])))
    }

    /// Serializes in catalog text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "pair {}", self.name).unwrap();
        writeln!(out, "group {}", self.group_label).unwrap();
        writeln!(out, "d {}", self.d).unwrap();
        for side in 0..2 {
            for mu in 0..COLORS {
                writeln!(out, "{} {}", GENERATOR_KEYS[side][mu], self.raw[side][mu]).unwrap();
            }
        }
        out
    }
}

/// Parses catalog text and marks records that repeat an earlier one.
pub fn parse_catalog(text: &str) -> Result<Vec<PairSpec>, CatalogError> {
    struct Draft {
        name: String,
        group: Option<String>,
        d: Option<usize>,
        raw: [[Option<String>; COLORS]; 2],
        line: usize,
    }
    let err = |line: usize, message: String| CatalogError::Parse { line, message };
    let mut drafts: Vec<Draft> = Vec::new();
    for (n, raw_line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = match line.split_once(char::is_whitespace) {
            Some((k, v)) => (k, v.trim()),
            None => (line, ""),
        };
        if key == "pair" {
            if value.is_empty() {
                return Err(err(line_no, "pair without a name".into()));
            }
            drafts.push(Draft {
                name: value.to_string(),
                group: None,
                d: None,
                raw: Default::default(),
                line: line_no,
            });
            continue;
        }
        let Some(draft) = drafts.last_mut() else {
            return Err(err(line_no, format!("{key:?} before any pair record")));
        };
        match key {
            "group" => draft.group = Some(value.to_string()),
            "d" => {
                draft.d = Some(
                    value
                        .parse()
                        .map_err(|_| err(line_no, format!("bad tile count {value:?}")))?,
                )
            }
            _ => {
                let slot = GENERATOR_KEYS
                    .iter()
                    .enumerate()
                    .find_map(|(s, keys)| keys.iter().position(|k| *k == key).map(|m| (s, m)));
                let Some((side, mu)) = slot else {
                    return Err(err(line_no, format!("unknown key {key:?}")));
                };
                draft.raw[side][mu] = Some(value.to_string());
            }
        }
    }
    let mut out: Vec<PairSpec> = Vec::with_capacity(drafts.len());
    for draft in drafts {
        let d = draft
            .d
            .ok_or_else(|| err(draft.line, format!("pair {} has no tile count", draft.name)))?;
        let mut raw: [[String; COLORS]; 2] = Default::default();
        for side in 0..2 {
            for mu in 0..COLORS {
                raw[side][mu] = draft.raw[side][mu].clone().ok_or_else(|| {
                    err(
                        draft.line,
                        format!("pair {} lacks {}", draft.name, GENERATOR_KEYS[side][mu]),
                    )
                })?;
            }
        }
        let mut spec = PairSpec::from_cycles(&draft.name, draft.group.as_deref().unwrap_or(""), d, raw);
        if let Some(prev) = out.iter().find(|p| p.d == spec.d && p.raw == spec.raw) {
            spec.flags.push(SourceFlag::DuplicateOf(prev.name.clone()));
        }
        out.push(spec);
    }
    Ok(out)
}

/// The 17 bundled pairs.
pub fn catalog() -> Vec<PairSpec> {
    parse_catalog(BUNDLED_CATALOG).expect("bundled catalog parses")
}

/// Loads the catalog named by `ISODRUM_CATALOG`, or the bundled one.
pub fn catalog_from_env() -> Result<Vec<PairSpec>, CatalogError> {
    match std::env::var_os(CATALOG_ENV) {
        Some(path) => load_catalog(Path::new(&path)),
        None => Ok(catalog()),
    }
}

pub fn load_catalog(path: &Path) -> Result<Vec<PairSpec>, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_catalog(&text)
}

pub fn find_pair<'a>(pairs: &'a [PairSpec], name: &str) -> Result<&'a PairSpec, CatalogError> {
    pairs
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| CatalogError::UnknownPair(name.to_string()))
}

pub fn catalog_to_text(pairs: &[PairSpec]) -> String {
    pairs
        .iter()
        .map(PairSpec::to_text)
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_records() {
        let cat = catalog();
        assert_eq!(cat.len(), 17);
        let names: Vec<_> = cat.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(&names[..3], ["7_1", "7_2", "7_3"]);
        assert_eq!(names[16], "21_1");
    }

    #[test]
    fn first_generator_of_7_1() {
        let cat = catalog();
        let p = find_pair(&cat, "7_1").unwrap();
        assert_eq!(p.gens_points().unwrap()[0].to_cycle_string(), "(0 1)(2 5)");
        assert_eq!(p.group_label, "PSL(3,2)");
    }

    #[test]
    fn pair_15_4_is_flagged() {
        let cat = catalog();
        let p = find_pair(&cat, "15_4").unwrap();
        assert!(p.is_corrupt());
        assert!(p.gens_points().is_none());
        let reasons = p.corruption_reasons().join("; ");
        assert!(reasons.contains("b1"), "{reasons}");
        assert!(reasons.contains("index 8 repeated"), "{reasons}");
    }

    #[test]
    fn duplicate_caption_is_flagged() {
        let cat = catalog();
        let p = find_pair(&cat, "13_5").unwrap();
        assert!(p.flags.contains(&SourceFlag::DuplicateOf("13_4".into())));
        // The repeated caption data does not even give connected graphs.
        assert!(p.is_corrupt());
        assert!(find_pair(&cat, "13_4").unwrap().is_corrupt());
    }

    #[test]
    fn flagged_records() {
        let flagged: Vec<_> = catalog()
            .into_iter()
            .filter(|p| p.is_corrupt())
            .map(|p| p.name)
            .collect();
        assert_eq!(flagged, ["13_4", "13_5", "13_9", "15_4"]);
    }

    #[test]
    fn moved_point_totals() {
        for p in catalog().iter().filter(|p| !p.is_corrupt()) {
            let (a, b) = p.moved_totals().unwrap();
            assert_eq!(a, b, "{}", p.name);
            let expected = if p.name == "21_1" { 2 * p.d } else { 2 * (p.d - 1) };
            assert_eq!(a, expected, "{}", p.name);
            let (g1, g2) = p.graphs().unwrap();
            assert!(g1.is_connected() && g2.is_connected(), "{}", p.name);
            let rank = usize::from(p.name == "21_1");
            assert_eq!((g1.cycle_rank(), g2.cycle_rank()), (rank, rank), "{}", p.name);
        }
    }

    #[test]
    fn cycle_rank_of_21_1() {
        let cat = catalog();
        let (g, _) = find_pair(&cat, "21_1").unwrap().graphs().unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.cycle_rank()), (21, 21, 1));
    }

    #[test]
    fn text_round_trip() {
        let cat = catalog();
        let again = parse_catalog(&catalog_to_text(&cat)).unwrap();
        assert_eq!(cat, again);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "pair x\nd 3\nzz (0 1)\n";
        match parse_catalog(bad) {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_catalog("d 3\n").is_err());
        assert!(parse_catalog("pair y\nd 3\na1 (0 1)\n").is_err());
    }
}
