//! Deterministic benchmark instance generators: convex families with known
//! ground truth, radii, and seeds, plus families that each break exactly one
//! convexity property. Every emitted instance is certified (or certified to
//! fail as intended) before it leaves the generator.

use std::collections::BTreeSet;
use std::error::Error;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convexity::{
    check_convex, check_convex_generalized, min_radius, ConvexityError, Property,
};
use crate::graphcore::{GraphError, SemimetricGraph};
use crate::oracles::{ClusterOracle, Clustering, OracleError};
use crate::rational::{format_rational, int, is_positive, parse_rational, ratio, Rat};
use crate::Node;

/// Version tag written into every serialized instance file.
pub const FORMAT_VERSION: u32 = 1;

/// The instance families the generators can produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RandomConvex,
    RandomTwoScale,
    Whirl,
    Oort,
    Caterpillar,
    CompleteRandom,
    RadiiPath,
    ViolateConnectivity,
    ViolateMargin,
    ViolateGeodesic,
}

impl Family {
    /// All families, in a fixed order.
    pub fn all() -> &'static [Family] {
        &[
            Family::RandomConvex,
            Family::RandomTwoScale,
            Family::Whirl,
            Family::Oort,
            Family::Caterpillar,
            Family::CompleteRandom,
            Family::RadiiPath,
            Family::ViolateConnectivity,
            Family::ViolateMargin,
            Family::ViolateGeodesic,
        ]
    }

    /// Kebab-case name used on the command line and in files.
    pub fn name(&self) -> &'static str {
        match self {
            Family::RandomConvex => "random-convex",
            Family::RandomTwoScale => "random-two-scale",
            Family::Whirl => "whirl",
            Family::Oort => "oort",
            Family::Caterpillar => "caterpillar",
            Family::CompleteRandom => "complete-random",
            Family::RadiiPath => "radii-path",
            Family::ViolateConnectivity => "violate-connectivity",
            Family::ViolateMargin => "violate-margin",
            Family::ViolateGeodesic => "violate-geodesic",
        }
    }

    /// Inverse of [`Family::name`].
    pub fn from_name(s: &str) -> Option<Family> {
        Family::all().iter().copied().find(|f| f.name() == s)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Declared clustering radii: one shared threshold or one per cluster.
#[derive(Clone, Debug, PartialEq)]
pub enum Radii {
    Single(Rat),
    PerCluster(Vec<Rat>),
}

impl Radii {
    /// Expand to one radius per cluster.
    pub fn vec_for(&self, k: usize) -> Vec<Rat> {
        match self {
            Radii::Single(e) => vec![e.clone(); k],
            Radii::PerCluster(v) => v.clone(),
        }
    }

    /// The largest declared radius.
    pub fn max_radius(&self) -> &Rat {
        match self {
            Radii::Single(e) => e,
            Radii::PerCluster(v) => v.iter().max().expect("non-empty radii"),
        }
    }
}

/// Everything a benchmark run needs: graph, hidden truth, parameters, seeds.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: SemimetricGraph,
    pub truth: Clustering,
    pub beta: Rat,
    pub gamma: Rat,
    pub radii: Radii,
    pub seeds: Vec<Node>,
    pub family: Family,
    pub construction: ConstructionRecord,
}

/// How an instance was built: enough to audit it without re-running the
/// generator. Fields are per-family; unused ones stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecord {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rng_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cluster_sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub points: Option<Vec<[i64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bridge_edges: Option<Vec<(Node, Node)>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub double_bridge: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cuts: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chosen: Option<Vec<Node>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected_components: Option<Vec<(String, usize)>>,
}

/// Errors from generation, certification, or (de)serialization.
#[derive(Debug)]
pub enum InstanceError {
    InvalidParameter { what: String },
    RejectionExhausted { family: Family, attempts: usize },
    CertificationFailed { family: Family, detail: String },
    WrongViolation { family: Family, detail: String },
    Json { detail: String },
    Graph(GraphError),
    Oracle(OracleError),
    Convexity(ConvexityError),
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::InvalidParameter { what } => {
                write!(f, "invalid generator parameter: {what}")
            }
            InstanceError::RejectionExhausted { family, attempts } => {
                write!(f, "{family}: no certified instance after {attempts} attempts")
            }
            InstanceError::CertificationFailed { family, detail } => {
                write!(f, "{family}: construction failed certification: {detail}")
            }
            InstanceError::WrongViolation { family, detail } => {
                write!(f, "{family}: unexpected violation profile: {detail}")
            }
            InstanceError::Json { detail } => write!(f, "instance file: {detail}"),
            InstanceError::Graph(e) => write!(f, "graph: {e}"),
            InstanceError::Oracle(e) => write!(f, "clustering: {e}"),
            InstanceError::Convexity(e) => write!(f, "convexity check: {e}"),
        }
    }
}

impl Error for InstanceError {}

impl From<GraphError> for InstanceError {
    fn from(e: GraphError) -> Self {
        InstanceError::Graph(e)
    }
}

impl From<OracleError> for InstanceError {
    fn from(e: OracleError) -> Self {
        InstanceError::Oracle(e)
    }
}

impl From<ConvexityError> for InstanceError {
    fn from(e: ConvexityError) -> Self {
        InstanceError::Convexity(e)
    }
}

/// Size and seed knobs for [`generate`]; families ignore what they don't use.
#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub seed: u64,
}

impl GenParams {
    pub fn new(seed: u64) -> Self {
        GenParams { n: None, k: None, seed }
    }
}

/// Build an instance of the requested family, applying per-family defaults
/// for any unspecified size parameter.
pub fn generate(family: Family, params: &GenParams) -> Result<Instance, InstanceError> {
    let n = params.n;
    let k = params.k;
    let seed = params.seed;
    match family {
        Family::RandomConvex => random_convex(n.unwrap_or(60), k.unwrap_or(3), seed),
        Family::RandomTwoScale => random_two_scale(n.unwrap_or(60), k.unwrap_or(3), seed),
        Family::Whirl => whirl(),
        Family::Oort => oort(),
        Family::Caterpillar => caterpillar(n.unwrap_or(24), seed),
        Family::CompleteRandom => complete_random(n.unwrap_or(32), seed),
        Family::RadiiPath => radii_path(n.unwrap_or(64), k.unwrap_or(2), seed),
        Family::ViolateConnectivity => violate_connectivity(n.unwrap_or(24), k.unwrap_or(2)),
        Family::ViolateMargin => violate_margin(n.unwrap_or(12)),
        Family::ViolateGeodesic => violate_geodesic(n.unwrap_or(20)),
    }
}

impl Instance {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn k(&self) -> usize {
        self.truth.k()
    }

    /// Declared radii expanded to one per cluster.
    pub fn radii_vec(&self) -> Vec<Rat> {
        self.radii.vec_for(self.k())
    }

    /// Canonical JSON serialization; identical inputs give identical bytes.
    pub fn to_json_string(&self) -> String {
        let radii = match &self.radii {
            Radii::Single(e) => RadiiJson::Single(format_rational(e)),
            Radii::PerCluster(v) => {
                RadiiJson::PerCluster(v.iter().map(format_rational).collect())
            }
        };
        let file = InstanceJson {
            format_version: FORMAT_VERSION,
            family: self.family.name().to_owned(),
            n: self.graph.n(),
            k: self.truth.k(),
            params: ParamsJson {
                beta: format_rational(&self.beta),
                gamma: format_rational(&self.gamma),
                radii,
            },
            labels: self.truth.labels().to_vec(),
            seeds: self.seeds.clone(),
            edges: self
                .graph
                .edges()
                .iter()
                .map(|(u, v, w)| (*u, *v, format_rational(w)))
                .collect(),
            construction_record: self.construction.clone(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("instance serialization");
        out.push('\n');
        out
    }

    /// Parse an instance file produced by [`Instance::to_json_string`].
    pub fn from_json_str(s: &str) -> Result<Instance, InstanceError> {
        let file: InstanceJson = serde_json::from_str(s).map_err(|e| InstanceError::Json {
            detail: e.to_string(),
        })?;
        if file.format_version != FORMAT_VERSION {
            return Err(InstanceError::Json {
                detail: format!(
                    "unsupported format_version {} (expected {FORMAT_VERSION})",
                    file.format_version
                ),
            });
        }
        let family = Family::from_name(&file.family).ok_or_else(|| InstanceError::Json {
            detail: format!("unknown family {:?}", file.family),
        })?;
        let parse = |s: &str| {
            parse_rational(s).map_err(|e| InstanceError::Json { detail: e.to_string() })
        };
        let mut edges = Vec::with_capacity(file.edges.len());
        for (u, v, w) in &file.edges {
            edges.push((*u, *v, parse(w)?));
        }
        let graph = SemimetricGraph::new(file.n, edges)?;
        let truth = Clustering::new(file.labels)?;
        if truth.k() != file.k {
            return Err(InstanceError::Json {
                detail: format!("k field {} disagrees with labels ({})", file.k, truth.k()),
            });
        }
        let radii = match file.params.radii {
            RadiiJson::Single(e) => Radii::Single(parse(&e)?),
            RadiiJson::PerCluster(v) => {
                if v.len() != truth.k() {
                    return Err(InstanceError::Json {
                        detail: format!("radii vector has {} entries for k={}", v.len(), truth.k()),
                    });
                }
                let mut out = Vec::with_capacity(v.len());
                for e in &v {
                    out.push(parse(e)?);
                }
                Radii::PerCluster(out)
            }
        };
        Ok(Instance {
            graph,
            truth,
            beta: parse(&file.params.beta)?,
            gamma: parse(&file.params.gamma)?,
            radii,
            seeds: file.seeds,
            family,
            construction: file.construction_record,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    format_version: u32,
    family: String,
    n: usize,
    k: usize,
    params: ParamsJson,
    labels: Vec<usize>,
    seeds: Vec<Node>,
    edges: Vec<(Node, Node, String)>,
    construction_record: ConstructionRecord,
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    beta: String,
    gamma: String,
    radii: RadiiJson,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RadiiJson {
    Single(String),
    PerCluster(Vec<String>),
}

// ---------------------------------------------------------------------------
// Shared construction helpers
// ---------------------------------------------------------------------------

/// Split `total` into `parts` sizes, each at least `min_each`, spreading the
/// surplus uniformly at random.
fn split_sizes(rng: &mut ChaCha8Rng, total: usize, parts: usize, min_each: usize) -> Vec<usize> {
    let mut sizes = vec![min_each; parts];
    let mut left = total - min_each * parts;
    while left > 0 {
        let c = rng.gen_range(0..parts);
        sizes[c] += 1;
        left -= 1;
    }
    sizes
}

fn offsets_of(sizes: &[usize]) -> Vec<usize> {
    let mut offs = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for s in sizes {
        offs.push(acc);
        acc += s;
    }
    offs
}

fn labels_of(sizes: &[usize]) -> Vec<usize> {
    let mut labels = Vec::new();
    for (c, s) in sizes.iter().enumerate() {
        labels.extend(std::iter::repeat_n(c, *s));
    }
    labels
}

/// Smallest node id of each cluster, in cluster order.
fn min_id_seeds(truth: &Clustering) -> Vec<Node> {
    (0..truth.k())
        .map(|i| truth.members(i)[0])
        .collect()
}

fn squared_dist(p: [i64; 2], q: [i64; 2]) -> i64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    dx * dx + dy * dy
}

/// Complete graph whose edge weights are exact squared Euclidean distances.
fn squared_complete(points: &[[i64; 2]]) -> Result<SemimetricGraph, InstanceError> {
    let n = points.len();
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let d2 = squared_dist(points[i], points[j]);
            if d2 == 0 {
                return Err(InstanceError::InvalidParameter {
                    what: format!("duplicate point {:?} at indices {i}, {j}", points[i]),
                });
            }
            edges.push((i, j, int(d2)));
        }
    }
    Ok(SemimetricGraph::new(n, edges)?)
}

fn certify_convex(inst: &Instance) -> Result<(), InstanceError> {
    let verdict = match &inst.radii {
        Radii::Single(eps) => {
            check_convex(&inst.graph, &inst.truth, &inst.beta, &inst.gamma, eps)?
        }
        Radii::PerCluster(radii) => {
            check_convex_generalized(&inst.graph, &inst.truth, &inst.beta, &inst.gamma, radii)?
        }
    };
    if verdict.is_convex() {
        Ok(())
    } else {
        Err(InstanceError::CertificationFailed {
            family: inst.family,
            detail: format!("{}", verdict.violations()[0]),
        })
    }
}

fn certify_exact_violation(inst: &Instance, want: Property) -> Result<(), InstanceError> {
    let verdict = match &inst.radii {
        Radii::Single(eps) => {
            check_convex(&inst.graph, &inst.truth, &inst.beta, &inst.gamma, eps)?
        }
        Radii::PerCluster(radii) => {
            check_convex_generalized(&inst.graph, &inst.truth, &inst.beta, &inst.gamma, radii)?
        }
    };
    let got = verdict.violated_properties();
    if got.len() == 1 && got.contains(&want) {
        Ok(())
    } else {
        Err(InstanceError::WrongViolation {
            family: inst.family,
            detail: format!("wanted exactly {want}, got {got:?}"),
        })
    }
}

// ---------------------------------------------------------------------------
// random-convex
// ---------------------------------------------------------------------------

/// Maximum long-range overlay stride; overlay edge (v, v+t) has weight t.
const RULER_MAX_STRIDE: usize = 14;

/// Chain-of-clusters instance, certified (β, γ)-convex at a shared threshold.
///
/// Each cluster is a path of consecutive node ids with edge weights in
/// {7/8, 1}; clusters are joined in a path by single bridge edges with
/// weights in {1/2, 3/4, 1} (all above the margin limit β·ε = 1/4). A global
/// overlay of (v, v+t) edges with weight t for t = 2..=14 lies above the
/// threshold, so it never affects the clustering structure, while making the
/// packing-based query budgets comfortably large. Occasionally (k ≥ 3) the
/// last two clusters are joined by two bridges spanning their chains exactly;
/// the chain lengths are then pinned so the resulting cycle keeps the
/// geodesic property strict. Draws where that cycle of light edges would put
/// a cluster inside one component of the threshold graph below the weight
/// its own chain needs are rejected, so seed-learned radii always equal the
/// brute-force minimum radii.
pub fn random_convex(n: usize, k: usize, seed: u64) -> Result<Instance, InstanceError> {
    random_convex_impl(n, k, seed, ratio(1, 4), None)
}

/// [`random_convex`] with chosen margin and geodesic parameters instead of
/// the defaults, for exercising parameter search at known true values.
///
/// The bridge palette is filtered to weights above β (none remain at β = 1,
/// leaving the clusters as separate threshold components, which is still
/// convex); the double-bridge variant only exists for γ ∈ {1, 1/2}, whose
/// exact chain spans are pinned. Note a (β, γ)-convex instance is also
/// (β', γ')-convex for any smaller parameters, so the certified values are
/// the largest this generator claims, not necessarily the largest that hold.
pub fn random_convex_params(
    n: usize,
    k: usize,
    seed: u64,
    beta: &Rat,
    gamma: &Rat,
) -> Result<Instance, InstanceError> {
    if !is_positive(beta) || beta > &int(1) || !is_positive(gamma) || gamma > &int(1) {
        return Err(InstanceError::InvalidParameter {
            what: format!(
                "random-convex parameters must lie in (0, 1]; got beta={beta}, gamma={gamma}"
            ),
        });
    }
    random_convex_impl(n, k, seed, beta.clone(), Some(gamma.clone()))
}

fn random_convex_impl(
    n: usize,
    k: usize,
    seed: u64,
    beta: Rat,
    fixed_gamma: Option<Rat>,
) -> Result<Instance, InstanceError> {
    if k < 2 || n < 4 * k || n < 12 {
        return Err(InstanceError::InvalidParameter {
            what: format!("random-convex needs k >= 2, n >= max(12, 4k); got n={n}, k={k}"),
        });
    }
    let eps = int(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = 100;
    for _ in 0..attempts {
        let gamma = match &fixed_gamma {
            None => {
                if rng.gen_bool(0.5) {
                    int(1)
                } else {
                    ratio(1, 2)
                }
            }
            Some(g) => g.clone(),
        };
        let db_len = if gamma == int(1) {
            Some(2)
        } else if gamma == ratio(1, 2) {
            Some(4)
        } else {
            None
        };
        let bridge_palette: Vec<Rat> = [ratio(1, 2), ratio(3, 4), int(1)]
            .into_iter()
            .filter(|w| w > &beta)
            .collect();
        let double_bridge = !bridge_palette.is_empty()
            && db_len.is_some_and(|l| {
                k >= 3 && n >= 2 * (k - 2) + 2 * l && rng.gen_bool(1.0 / 3.0)
            });
        let db_len = db_len.unwrap_or(0);

        let sizes = if double_bridge {
            let mut s = split_sizes(&mut rng, n - 2 * db_len, k - 2, 2);
            s.push(db_len);
            s.push(db_len);
            s
        } else {
            split_sizes(&mut rng, n, k, 2)
        };
        let offs = offsets_of(&sizes);
        let labels = labels_of(&sizes);

        let mut edges: Vec<(Node, Node, Rat)> = Vec::new();
        let chain_palette = [ratio(7, 8), int(1)];
        for c in 0..k {
            for i in 0..sizes[c] - 1 {
                let w = chain_palette[rng.gen_range(0..chain_palette.len())].clone();
                edges.push((offs[c] + i, offs[c] + i + 1, w));
            }
        }

        let mut feet = vec![0usize; n];
        let mut bridges: Vec<(Node, Node)> = Vec::new();
        let pick_foot = |rng: &mut ChaCha8Rng, feet: &mut [usize], c: usize| {
            let (off, sz) = (offs[c], sizes[c]);
            loop {
                let cand = off + rng.gen_range(0..sz);
                if feet[cand] < 2 {
                    feet[cand] += 1;
                    return cand;
                }
            }
        };
        for c in 0..k - 1 {
            if bridge_palette.is_empty() {
                break;
            }
            if double_bridge && c == k - 2 {
                let (pa, pb) = (offs[k - 2], offs[k - 1]);
                let (qa, qb) = (pa + sizes[k - 2] - 1, pb + sizes[k - 1] - 1);
                for (x, y) in [(pa, pb), (qa, qb)] {
                    let w = bridge_palette[rng.gen_range(0..bridge_palette.len())].clone();
                    edges.push((x, y, w));
                    bridges.push((x, y));
                }
            } else {
                let x = pick_foot(&mut rng, &mut feet, c);
                let y = pick_foot(&mut rng, &mut feet, c + 1);
                let w = bridge_palette[rng.gen_range(0..bridge_palette.len())].clone();
                edges.push((x, y, w));
                bridges.push((x, y));
            }
        }

        let present: BTreeSet<(Node, Node)> = edges
            .iter()
            .map(|(u, v, _)| (*u.min(v), *u.max(v)))
            .collect();
        for t in 2..=RULER_MAX_STRIDE {
            for v in 0..n - t {
                if !present.contains(&(v, v + t)) {
                    edges.push((v, v + t, int(t as i64)));
                }
            }
        }

        let graph = SemimetricGraph::new(n, edges)?;
        let truth = Clustering::new(labels)?;
        let verdict = check_convex(&graph, &truth, &beta, &gamma, &eps)?;
        if !verdict.is_convex() || !radii_observable(&graph, &truth) {
            continue;
        }
        let seeds = min_id_seeds(&truth);
        return Ok(Instance {
            graph,
            truth,
            beta,
            gamma,
            radii: Radii::Single(eps),
            seeds,
            family: Family::RandomConvex,
            construction: ConstructionRecord {
                rng_seed: Some(seed),
                cluster_sizes: Some(sizes),
                bridge_edges: Some(bridges),
                double_bridge: Some(double_bridge),
                ..ConstructionRecord::default()
            },
        });
    }
    Err(InstanceError::RejectionExhausted { family: Family::RandomConvex, attempts })
}

/// Seed-driven radius learning observes the smallest threshold that places a
/// cluster inside one component of the whole graph; a cycle of light edges
/// through a neighboring cluster can pull that below the weight the cluster
/// needs to connect on its own. True whenever the two minima agree for every
/// cluster; the generator's rejection loop insists on it.
fn radii_observable(graph: &SemimetricGraph, truth: &Clustering) -> bool {
    (0..truth.k()).all(|i| {
        let members = truth.members(i);
        let whole = graph.distinct_weights().into_iter().find(|w| {
            let comp: BTreeSet<Node> = graph
                .threshold(w)
                .connected_component(members[0])
                .into_iter()
                .collect();
            members.iter().all(|v| comp.contains(v))
        });
        whole.as_ref() == min_radius(graph, truth, i).ok().as_ref()
    })
}

// ---------------------------------------------------------------------------
// random-two-scale
// ---------------------------------------------------------------------------

/// Chain-of-clusters instance with per-cluster radii in {1, 3}, certified
/// convex in the generalized (per-cluster threshold) sense.
///
/// Cluster 0 always gets radius 1 and cluster k−1 radius 3, so both scales
/// are present; the rest are split at random. Chains use weights {7/8, 1}
/// (radius 1) or {2, 3} (radius 3); single bridges joining consecutive
/// clusters use weights {1, 2, 3}, and the long-range overlay uses weights
/// t+2 ∈ 4..=16, above every radius.
pub fn random_two_scale(n: usize, k: usize, seed: u64) -> Result<Instance, InstanceError> {
    if k < 2 || n < 3 * k {
        return Err(InstanceError::InvalidParameter {
            what: format!("random-two-scale needs k >= 2, n >= 3k; got n={n}, k={k}"),
        });
    }
    let beta = ratio(1, 4);
    let gamma = ratio(1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = 100;
    for _ in 0..attempts {
        let mut radii: Vec<Rat> = (0..k)
            .map(|c| {
                if c == 0 {
                    int(1)
                } else if c == k - 1 {
                    int(3)
                } else if rng.gen_bool(0.5) {
                    int(1)
                } else {
                    int(3)
                }
            })
            .collect();
        let sizes = split_sizes(&mut rng, n, k, 3);
        let offs = offsets_of(&sizes);
        let labels = labels_of(&sizes);

        let mut edges: Vec<(Node, Node, Rat)> = Vec::new();
        for c in 0..k {
            let palette = if radii[c] == int(1) {
                [ratio(7, 8), int(1)]
            } else {
                [int(2), int(3)]
            };
            for i in 0..sizes[c] - 1 {
                let w = palette[rng.gen_range(0..palette.len())].clone();
                edges.push((offs[c] + i, offs[c] + i + 1, w));
            }
        }

        let bridge_palette = [int(1), int(2), int(3)];
        let mut feet = vec![0usize; n];
        let mut bridges: Vec<(Node, Node)> = Vec::new();
        for c in 0..k - 1 {
            let pick = |rng: &mut ChaCha8Rng, feet: &mut [usize], cc: usize| loop {
                let cand = offs[cc] + rng.gen_range(0..sizes[cc]);
                if feet[cand] < 2 {
                    feet[cand] += 1;
                    return cand;
                }
            };
            let x = pick(&mut rng, &mut feet, c);
            let y = pick(&mut rng, &mut feet, c + 1);
            let w = bridge_palette[rng.gen_range(0..bridge_palette.len())].clone();
            edges.push((x, y, w));
            bridges.push((x, y));
        }

        let present: BTreeSet<(Node, Node)> = edges
            .iter()
            .map(|(u, v, _)| (*u.min(v), *u.max(v)))
            .collect();
        for t in 2..=RULER_MAX_STRIDE {
            for v in 0..n - t {
                if !present.contains(&(v, v + t)) {
                    edges.push((v, v + t, int(t as i64 + 2)));
                }
            }
        }

        let graph = SemimetricGraph::new(n, edges)?;
        let truth = Clustering::new(labels)?;
        let verdict = check_convex_generalized(&graph, &truth, &beta, &gamma, &radii)?;
        if !verdict.is_convex() {
            continue;
        }
        let seeds = min_id_seeds(&truth);
        radii.shrink_to_fit();
        return Ok(Instance {
            graph,
            truth,
            beta,
            gamma,
            radii: Radii::PerCluster(radii),
            seeds,
            family: Family::RandomTwoScale,
            construction: ConstructionRecord {
                rng_seed: Some(seed),
                cluster_sizes: Some(sizes),
                bridge_edges: Some(bridges),
                ..ConstructionRecord::default()
            },
        });
    }
    Err(InstanceError::RejectionExhausted { family: Family::RandomTwoScale, attempts })
}

// ---------------------------------------------------------------------------
// whirl
// ---------------------------------------------------------------------------

/// Segment lengths of each square spiral arm in [`whirl`].
const WHIRL_SCHEDULE: [usize; 6] = [2, 2, 7, 7, 12, 12];

/// Two interleaved unit-step square spirals on the integer grid, one cluster
/// each, joined by a single closest pair; weights are squared Euclidean
/// distances and the instance is certified convex at (β, γ, ε) = (1/4, 1/2, 1).
///
/// Spiral A starts at (0,0); spiral B is its point reflection through
/// (1/2, 0). The construction is verified to have exactly one cross pair at
/// squared distance 1 (the two spiral starts) with every other cross pair at
/// squared distance ≥ 2, and no accidental unit adjacency inside a spiral.
pub fn whirl() -> Result<Instance, InstanceError> {
    let dirs = [(0i64, 1i64), (-1, 0), (0, -1), (1, 0)];
    let mut a_pts: Vec<[i64; 2]> = vec![[0, 0]];
    let (mut x, mut y) = (0i64, 0i64);
    for (leg, len) in WHIRL_SCHEDULE.iter().enumerate() {
        let (dx, dy) = dirs[leg % 4];
        for _ in 0..*len {
            x += dx;
            y += dy;
            a_pts.push([x, y]);
        }
    }
    let b_pts: Vec<[i64; 2]> = a_pts.iter().map(|p| [1 - p[0], -p[1]]).collect();
    let half = a_pts.len();

    let mut cross_at_one = Vec::new();
    for (i, a) in a_pts.iter().enumerate() {
        for (j, b) in b_pts.iter().enumerate() {
            if squared_dist(*a, *b) <= 1 {
                cross_at_one.push((i, half + j));
            }
        }
    }
    let mut bad_within = 0usize;
    for pts in [&a_pts, &b_pts] {
        for i in 0..pts.len() {
            for j in i + 2..pts.len() {
                if squared_dist(pts[i], pts[j]) <= 1 {
                    bad_within += 1;
                }
            }
        }
    }
    if cross_at_one != vec![(0, half)] || bad_within != 0 {
        return Err(InstanceError::CertificationFailed {
            family: Family::Whirl,
            detail: format!(
                "spiral layout broken: cross unit pairs {cross_at_one:?}, within {bad_within}"
            ),
        });
    }

    let mut points = a_pts;
    points.extend_from_slice(&b_pts);
    let graph = squared_complete(&points)?;
    let labels: Vec<usize> = (0..points.len()).map(|v| usize::from(v >= half)).collect();
    let truth = Clustering::new(labels)?;
    let inst = Instance {
        graph,
        truth,
        beta: ratio(1, 4),
        gamma: ratio(1, 2),
        radii: Radii::Single(int(1)),
        seeds: vec![0, half],
        family: Family::Whirl,
        construction: ConstructionRecord {
            points: Some(points),
            bridge_edges: Some(vec![(0, half)]),
            ..ConstructionRecord::default()
        },
    };
    certify_convex(&inst)?;
    Ok(inst)
}

// ---------------------------------------------------------------------------
// oort
// ---------------------------------------------------------------------------

/// A 64-point unit-step square ring (radius 8) and an 11-point grid-plus-tail
/// blob at its center, with squared-distance weights and per-cluster radii
/// (1, 4); certified convex in the generalized sense at β = 1/2, γ = 1/10.
///
/// The blob's tail tip (6,0) sits at squared distance exactly 4 from ring
/// point (8,0) — present at the blob's radius, absent at the ring's — and
/// every other cross pair is at squared distance ≥ 5. At threshold 1 the
/// graph has 12 components (ring plus 11 isolated blob points); at
/// threshold 4 it is connected. Both counts are verified at build time and
/// recorded.
pub fn oort() -> Result<Instance, InstanceError> {
    let r = 8i64;
    let mut points: Vec<[i64; 2]> = Vec::new();
    for yy in -r..=r {
        points.push([r, yy]);
    }
    for xx in (-r..r).rev() {
        points.push([xx, r]);
    }
    for yy in (-r..r).rev() {
        points.push([-r, yy]);
    }
    for xx in -r + 1..r {
        points.push([xx, -r]);
    }
    let ring_len = points.len();
    if ring_len != 64 {
        return Err(InstanceError::CertificationFailed {
            family: Family::Oort,
            detail: format!("ring has {ring_len} points, expected 64"),
        });
    }
    let mut blob: Vec<[i64; 2]> = Vec::new();
    for xx in [-2i64, 0, 2] {
        for yy in [-2i64, 0, 2] {
            blob.push([xx, yy]);
        }
    }
    blob.push([4, 0]);
    blob.push([6, 0]);
    let tip = ring_len + blob.len() - 1;
    let ring_gate = points
        .iter()
        .position(|p| *p == [8, 0])
        .expect("ring contains (8,0)");
    points.extend_from_slice(&blob);
    let n = points.len();

    let mut close_cross = Vec::new();
    for i in 0..ring_len {
        for j in ring_len..n {
            if squared_dist(points[i], points[j]) <= 4 {
                close_cross.push((i, j));
            }
        }
    }
    if close_cross != vec![(ring_gate, tip)]
        || squared_dist(points[ring_gate], points[tip]) != 4
    {
        return Err(InstanceError::CertificationFailed {
            family: Family::Oort,
            detail: format!("cross-pair structure broken: {close_cross:?}"),
        });
    }

    let graph = squared_complete(&points)?;
    let all: Vec<Node> = (0..n).collect();
    let comps_inner = graph.components_within(&all, &int(1)).len();
    let comps_outer = graph.components_within(&all, &int(4)).len();
    if comps_inner != 12 || comps_outer != 1 {
        return Err(InstanceError::CertificationFailed {
            family: Family::Oort,
            detail: format!("component counts ({comps_inner}, {comps_outer}) != (12, 1)"),
        });
    }

    let labels: Vec<usize> = (0..n).map(|v| usize::from(v >= ring_len)).collect();
    let truth = Clustering::new(labels)?;
    let inst = Instance {
        graph,
        truth,
        beta: ratio(1, 2),
        gamma: ratio(1, 10),
        radii: Radii::PerCluster(vec![int(1), int(4)]),
        seeds: vec![0, ring_len],
        family: Family::Oort,
        construction: ConstructionRecord {
            points: Some(points),
            bridge_edges: Some(vec![(ring_gate, tip)]),
            expected_components: Some(vec![("1".to_owned(), 12), ("4".to_owned(), 1)]),
            ..ConstructionRecord::default()
        },
    };
    certify_convex(&inst)?;
    Ok(inst)
}

// ---------------------------------------------------------------------------
// caterpillar
// ---------------------------------------------------------------------------

/// A low path of 2n/3 unit-spaced points with n/3 pendant points above every
/// other one; a single random pendant is its own cluster. Squared distances,
/// shared radius 1, certified convex at β = γ = 1/2.
///
/// Any procedure that must locate the pendant singleton without a seed has to
/// examine pendant candidates one by one, which is what makes this family a
/// seed-lower-bound demonstration.
pub fn caterpillar(n: usize, seed: u64) -> Result<Instance, InstanceError> {
    if n < 6 || !n.is_multiple_of(3) {
        return Err(InstanceError::InvalidParameter {
            what: format!("caterpillar needs n >= 6 divisible by 3; got n={n}"),
        });
    }
    let m = n / 3;
    let mut points: Vec<[i64; 2]> = Vec::with_capacity(n);
    for j in 0..2 * m {
        points.push([j as i64, 0]);
    }
    for j in 0..m {
        points.push([2 * j as i64, 1]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = 2 * m + rng.gen_range(0..m);
    let labels: Vec<usize> = (0..n).map(|v| usize::from(v == z)).collect();
    let graph = squared_complete(&points)?;
    let truth = Clustering::new(labels)?;
    let seeds = min_id_seeds(&truth);
    let inst = Instance {
        graph,
        truth,
        beta: ratio(1, 2),
        gamma: ratio(1, 2),
        radii: Radii::Single(int(1)),
        seeds,
        family: Family::Caterpillar,
        construction: ConstructionRecord {
            rng_seed: Some(seed),
            points: Some(points),
            chosen: Some(vec![z]),
            ..ConstructionRecord::default()
        },
    };
    certify_convex(&inst)?;
    Ok(inst)
}

/// Identify the pendant singleton of a caterpillar instance using only
/// same-cluster queries against a fixed low-path anchor.
///
/// The prober certifies each pendant candidate in a shuffled order and skips
/// the final one, inferring it by elimination, so it issues exactly
/// n/3 − 1 queries on every draw — the least any always-correct procedure
/// can get away with, since two never-examined candidates would be
/// indistinguishable.
pub fn caterpillar_prober(
    inst: &Instance,
    order_seed: u64,
    oracle: &mut dyn ClusterOracle,
) -> Result<Node, InstanceError> {
    if inst.family != Family::Caterpillar {
        return Err(InstanceError::InvalidParameter {
            what: format!("prober expects a caterpillar instance, got {}", inst.family),
        });
    }
    let points = inst.construction.points.as_ref().ok_or_else(|| {
        InstanceError::InvalidParameter { what: "instance lacks recorded points".into() }
    })?;
    let mut ups: Vec<Node> = (0..points.len()).filter(|v| points[*v][1] == 1).collect();
    let anchor = (0..points.len())
        .find(|v| points[*v][1] == 0)
        .expect("caterpillar has low-path points");
    let mut rng = ChaCha8Rng::seed_from_u64(order_seed);
    for i in (1..ups.len()).rev() {
        let j = rng.gen_range(0..=i);
        ups.swap(i, j);
    }
    let mut found = None;
    for cand in &ups[..ups.len() - 1] {
        if !oracle.scq(anchor, *cand) {
            found = Some(*cand);
        }
    }
    Ok(found.unwrap_or(ups[ups.len() - 1]))
}

// ---------------------------------------------------------------------------
// complete-random
// ---------------------------------------------------------------------------

/// The unit-weight complete graph with a uniformly random two-part labeling
/// (resampled until both parts are non-empty). Convex at ε = 1 for any
/// β, γ < 1; declared at (1/2, 1/2). One flat metric ball means recovery can
/// only make progress point by point.
pub fn complete_random(n: usize, seed: u64) -> Result<Instance, InstanceError> {
    if n < 2 {
        return Err(InstanceError::InvalidParameter {
            what: format!("complete-random needs n >= 2; got n={n}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = 100;
    let mut labels = None;
    for _ in 0..attempts {
        let cand: Vec<usize> = (0..n).map(|_| usize::from(rng.gen_bool(0.5))).collect();
        if cand.contains(&0) && cand.contains(&1) {
            labels = Some(cand);
            break;
        }
    }
    let labels = labels.ok_or(InstanceError::RejectionExhausted {
        family: Family::CompleteRandom,
        attempts,
    })?;
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, int(1)));
        }
    }
    let graph = SemimetricGraph::new(n, edges)?;
    let truth = Clustering::new(labels)?;
    let seeds = min_id_seeds(&truth);
    let sizes = vec![truth.members(0).len(), truth.members(1).len()];
    let inst = Instance {
        graph,
        truth,
        beta: ratio(1, 2),
        gamma: ratio(1, 2),
        radii: Radii::Single(int(1)),
        seeds,
        family: Family::CompleteRandom,
        construction: ConstructionRecord {
            rng_seed: Some(seed),
            cluster_sizes: Some(sizes),
            ..ConstructionRecord::default()
        },
    };
    certify_convex(&inst)?;
    Ok(inst)
}

// ---------------------------------------------------------------------------
// radii-path
// ---------------------------------------------------------------------------

/// k/2 disjoint paths with strictly increasing edge weights, each cut once
/// into two clusters; per-cluster radii are the exact largest internal edge
/// weights. Certified convex in the generalized sense at (1/2, 1).
///
/// Path h (0-based) spans n/(k/2) nodes with local edge (i, i+1) weighted
/// (1 + 2h) + (i+1)/(2·n_p), so every weight in the graph is distinct and
/// each cluster's radius is pinned to a single known edge; the cut position
/// is drawn with at least two nodes on each side and recorded.
pub fn radii_path(n: usize, k: usize, seed: u64) -> Result<Instance, InstanceError> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(InstanceError::InvalidParameter {
            what: format!("radii-path needs even k >= 2; got k={k}"),
        });
    }
    let paths = k / 2;
    if !n.is_multiple_of(paths) || n / paths < 6 {
        return Err(InstanceError::InvalidParameter {
            what: format!("radii-path needs n divisible by k/2 with n/(k/2) >= 6; got n={n}, k={k}"),
        });
    }
    let np = n / paths;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(Node, Node, Rat)> = Vec::new();
    let mut labels = vec![0usize; n];
    let mut radii = Vec::with_capacity(k);
    let mut cuts = Vec::with_capacity(paths);
    let weight = |h: usize, i: usize| -> Rat {
        int(1 + 2 * h as i64) + ratio(i as i64 + 1, 2 * np as i64)
    };
    for h in 0..paths {
        let off = h * np;
        for i in 0..np - 1 {
            edges.push((off + i, off + i + 1, weight(h, i)));
        }
        let cut = rng.gen_range(2..=np - 2);
        cuts.push(cut);
        for i in 0..np {
            labels[off + i] = if i < cut { 2 * h } else { 2 * h + 1 };
        }
        radii.push(weight(h, cut - 2));
        radii.push(weight(h, np - 2));
    }
    let graph = SemimetricGraph::new(n, edges)?;
    let truth = Clustering::new(labels)?;
    let seeds = min_id_seeds(&truth);
    let sizes: Vec<usize> = (0..k).map(|i| truth.members(i).len()).collect();
    let inst = Instance {
        graph,
        truth,
        beta: ratio(1, 2),
        gamma: int(1),
        radii: Radii::PerCluster(radii),
        seeds,
        family: Family::RadiiPath,
        construction: ConstructionRecord {
            rng_seed: Some(seed),
            cluster_sizes: Some(sizes),
            cuts: Some(cuts),
            ..ConstructionRecord::default()
        },
    };
    certify_convex(&inst)?;
    Ok(inst)
}

// ---------------------------------------------------------------------------
// violating families
// ---------------------------------------------------------------------------

/// 2k unit-spaced collinear groups placed far apart, with each cluster split
/// across two distant groups: connectivity fails for every cluster while
/// margin and geodesic hold (cross-group same-cluster pairs are not even
/// connected at the threshold).
pub fn violate_connectivity(n: usize, k: usize) -> Result<Instance, InstanceError> {
    if k < 2 || n < 4 * k {
        return Err(InstanceError::InvalidParameter {
            what: format!("violate-connectivity needs k >= 2, n >= 4k; got n={n}, k={k}"),
        });
    }
    let groups = 2 * k;
    let base = n / groups;
    let extra = n % groups;
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for g in 0..groups {
        let size = base + usize::from(g < extra);
        for j in 0..size {
            points.push([(g * 1000 + j) as i64, 0]);
            labels.push(g % k);
        }
    }
    let graph = squared_complete(&points)?;
    let truth = Clustering::new(labels)?;
    let seeds = min_id_seeds(&truth);
    let inst = Instance {
        graph,
        truth,
        beta: ratio(1, 2),
        gamma: ratio(1, 2),
        radii: Radii::Single(int(1)),
        seeds,
        family: Family::ViolateConnectivity,
        construction: ConstructionRecord {
            points: Some(points),
            ..ConstructionRecord::default()
        },
    };
    certify_exact_violation(&inst, Property::Connectivity)?;
    Ok(inst)
}

/// Two collinear chains of stride 2 whose facing endpoints sit at squared
/// distance 1 = β·ε: the margin property fails (it must be strict) while
/// connectivity and geodesic hold.
pub fn violate_margin(n: usize) -> Result<Instance, InstanceError> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(InstanceError::InvalidParameter {
            what: format!("violate-margin needs even n >= 6; got n={n}"),
        });
    }
    let half = n / 2;
    let mut points = Vec::with_capacity(n);
    for j in 0..half {
        points.push([-2 * (j as i64), 0]);
    }
    for j in 0..half {
        points.push([1 + 2 * (j as i64), 0]);
    }
    let labels: Vec<usize> = (0..n).map(|v| usize::from(v >= half)).collect();
    let graph = squared_complete(&points)?;
    let truth = Clustering::new(labels)?;
    let seeds = min_id_seeds(&truth);
    let inst = Instance {
        graph,
        truth,
        beta: ratio(1, 4),
        gamma: ratio(1, 2),
        radii: Radii::Single(int(4)),
        seeds,
        family: Family::ViolateMargin,
        construction: ConstructionRecord {
            points: Some(points),
            ..ConstructionRecord::default()
        },
    };
    certify_exact_violation(&inst, Property::Margin)?;
    Ok(inst)
}

/// Unit-spaced collinear points with alternating labels at a threshold that
/// admits stride-2 hops: each cluster is connected through its stride-2
/// edges and the margin holds, but near-shortest paths between same-cluster
/// points weave through the other cluster, so only the geodesic property
/// fails.
pub fn violate_geodesic(n: usize) -> Result<Instance, InstanceError> {
    if n < 6 {
        return Err(InstanceError::InvalidParameter {
            what: format!("violate-geodesic needs n >= 6; got n={n}"),
        });
    }
    let points: Vec<[i64; 2]> = (0..n).map(|j| [j as i64, 0]).collect();
    let labels: Vec<usize> = (0..n).map(|j| j % 2).collect();
    let graph = squared_complete(&points)?;
    let truth = Clustering::new(labels)?;
    let seeds = min_id_seeds(&truth);
    let inst = Instance {
        graph,
        truth,
        beta: ratio(1, 8),
        gamma: ratio(1, 2),
        radii: Radii::Single(int(4)),
        seeds,
        family: Family::ViolateGeodesic,
        construction: ConstructionRecord {
            points: Some(points),
            ..ConstructionRecord::default()
        },
    };
    certify_exact_violation(&inst, Property::Geodesic)?;
    Ok(inst)
}

// ---------------------------------------------------------------------------
// unstructured random graphs (test support)
// ---------------------------------------------------------------------------

/// A random semimetric graph with `m` distinct edges and small rational
/// weights; no clustering attached. Used to exercise graph algorithms on
/// inputs with repeated weights and multiple components.
pub fn random_weighted_graph(n: usize, m: usize, seed: u64) -> SemimetricGraph {
    assert!(n >= 2, "need at least two nodes");
    let max_m = n * (n - 1) / 2;
    let m = m.min(max_m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = BTreeSet::new();
    while pairs.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            pairs.insert((u.min(v), u.max(v)));
        }
    }
    let edges: Vec<(Node, Node, Rat)> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, ratio(rng.gen_range(1..=12), rng.gen_range(1..=4))))
        .collect();
    SemimetricGraph::new(n, edges).expect("random graph construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexity::min_radii;
    use crate::oracles::{OracleSession, SeedPolicy};

    #[test]
    fn random_convex_is_deterministic_and_certified() {
        let a = random_convex(40, 3, 7).unwrap();
        let b = random_convex(40, 3, 7).unwrap();
        assert_eq!(a.to_json_string(), b.to_json_string());
        let c = random_convex(40, 3, 8).unwrap();
        assert_ne!(a.to_json_string(), c.to_json_string());
        assert_eq!(a.n(), 40);
        assert_eq!(a.k(), 3);
        assert_eq!(a.seeds, min_id_seeds(&a.truth));
    }

    #[test]
    fn random_convex_params_covers_the_parameter_grid() {
        let values = [int(1), ratio(1, 2), ratio(1, 4), ratio(1, 8)];
        for beta in &values {
            for gamma in &values {
                let inst = random_convex_params(24, 2, 3, beta, gamma).unwrap();
                assert_eq!(&inst.beta, beta);
                assert_eq!(&inst.gamma, gamma);
                let verdict =
                    check_convex(&inst.graph, &inst.truth, beta, gamma, &int(1)).unwrap();
                assert!(verdict.is_convex());
                // At beta = 1 no bridge survives the margin filter.
                let bridges = inst.construction.bridge_edges.as_ref().unwrap();
                assert_eq!(bridges.is_empty(), *beta == int(1));
            }
        }
        assert!(matches!(
            random_convex_params(24, 2, 3, &int(2), &int(1)),
            Err(InstanceError::InvalidParameter { .. })
        ));
    }

    #[test]
    fn random_convex_double_bridge_occurs_and_passes() {
        let mut seen = false;
        for seed in 0..40 {
            let inst = random_convex(30, 4, seed).unwrap();
            if inst.construction.double_bridge == Some(true) {
                seen = true;
                let sizes = inst.construction.cluster_sizes.as_ref().unwrap();
                assert_eq!(sizes[2], sizes[3]);
                break;
            }
        }
        assert!(seen, "no double-bridge draw in 40 seeds");
    }

    #[test]
    fn random_convex_rejects_bad_parameters() {
        assert!(matches!(
            random_convex(6, 2, 0),
            Err(InstanceError::InvalidParameter { .. })
        ));
        assert!(matches!(
            random_convex(30, 1, 0),
            Err(InstanceError::InvalidParameter { .. })
        ));
    }

    #[test]
    fn random_two_scale_has_both_scales() {
        let inst = random_two_scale(36, 4, 11).unwrap();
        let radii = inst.radii_vec();
        assert_eq!(radii[0], int(1));
        assert_eq!(radii[3], int(3));
        assert_eq!(inst.n(), 36);
    }

    #[test]
    fn whirl_layout_is_frozen() {
        let inst = whirl().unwrap();
        assert_eq!(inst.n(), 86);
        assert_eq!(inst.seeds, vec![0, 43]);
        assert_eq!(inst.construction.bridge_edges, Some(vec![(0, 43)]));
        assert_eq!(inst.graph.distance(0, 43), Some(&int(1)));
        assert_eq!(inst.beta, ratio(1, 4));
        assert_eq!(inst.gamma, ratio(1, 2));
    }

    #[test]
    fn oort_layout_is_frozen() {
        let inst = oort().unwrap();
        assert_eq!(inst.n(), 75);
        assert_eq!(inst.radii, Radii::PerCluster(vec![int(1), int(4)]));
        // The declared radii are exactly the smallest connecting thresholds.
        assert_eq!(min_radii(&inst.graph, &inst.truth).unwrap(), vec![int(1), int(4)]);
        let bridge = inst.construction.bridge_edges.as_ref().unwrap()[0];
        assert_eq!(inst.graph.distance(bridge.0, bridge.1), Some(&int(4)));
        assert_eq!(inst.truth.members(1).len(), 11);
    }

    #[test]
    fn caterpillar_singleton_is_a_pendant() {
        let inst = caterpillar(24, 5).unwrap();
        let z = inst.construction.chosen.as_ref().unwrap()[0];
        assert_eq!(inst.truth.members(1), vec![z]);
        assert!(z >= 16, "singleton must be an upper point");
        let tg = inst.graph.threshold(&int(1));
        assert_eq!(tg.neighbors(z).len(), 1);
        assert!(matches!(caterpillar(25, 0), Err(InstanceError::InvalidParameter { .. })));
    }

    #[test]
    fn caterpillar_prober_uses_exactly_m_minus_one_queries() {
        let inst = caterpillar(24, 9).unwrap();
        let z = inst.construction.chosen.as_ref().unwrap()[0];
        for order_seed in [0u64, 1, 2] {
            let mut oracle = OracleSession::new(inst.truth.clone(), SeedPolicy::FirstById).unwrap();
            let got = caterpillar_prober(&inst, order_seed, &mut oracle).unwrap();
            assert_eq!(got, z);
            assert_eq!(oracle.counts().scq, (24 / 3 - 1) as u64);
        }
    }

    #[test]
    fn complete_random_is_balanced_enough() {
        let inst = complete_random(16, 3).unwrap();
        assert_eq!(inst.k(), 2);
        assert!(inst.truth.members(0).len() + inst.truth.members(1).len() == 16);
        assert_eq!(inst.graph.edges().len(), 16 * 15 / 2);
    }

    #[test]
    fn radii_path_radii_match_brute_force() {
        let inst = radii_path(16, 2, 4).unwrap();
        let cut = inst.construction.cuts.as_ref().unwrap()[0];
        let radii = inst.radii_vec();
        // The left cluster's radius is its last internal edge by the
        // increasing-weight layout: 1 + (cut - 1)/(2 n).
        assert_eq!(radii[0], int(1) + ratio(cut as i64 - 1, 32));
        assert_eq!(radii[1], int(1) + ratio(15, 32));
        assert_eq!(min_radii(&inst.graph, &inst.truth).unwrap(), radii);
        assert!(matches!(radii_path(16, 3, 0), Err(InstanceError::InvalidParameter { .. })));
    }

    #[test]
    fn violating_families_fail_exactly_their_property() {
        // Generators certify the profile internally; reaching Ok is the test.
        violate_connectivity(24, 3).unwrap();
        violate_margin(12).unwrap();
        violate_geodesic(20).unwrap();
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        for inst in [
            random_convex(24, 2, 1).unwrap(),
            random_two_scale(30, 3, 2).unwrap(),
            oort().unwrap(),
        ] {
            let text = inst.to_json_string();
            let back = Instance::from_json_str(&text).unwrap();
            assert_eq!(back.to_json_string(), text);
            assert_eq!(back.truth.labels(), inst.truth.labels());
            assert_eq!(back.radii, inst.radii);
        }
    }

    #[test]
    fn from_json_rejects_garbage() {
        assert!(matches!(
            Instance::from_json_str("{"),
            Err(InstanceError::Json { .. })
        ));
        let inst = complete_random(8, 0).unwrap();
        let text = inst.to_json_string().replace("\"format_version\": 1", "\"format_version\": 9");
        assert!(matches!(
            Instance::from_json_str(&text),
            Err(InstanceError::Json { .. })
        ));
    }

    #[test]
    fn generate_dispatches_every_family() {
        for family in Family::all() {
            let inst = generate(*family, &GenParams::new(3)).unwrap();
            assert_eq!(inst.family, *family);
            assert_eq!(Family::from_name(family.name()), Some(*family));
        }
    }

    #[test]
    fn random_weighted_graph_is_deterministic() {
        let a = random_weighted_graph(20, 40, 6);
        let b = random_weighted_graph(20, 40, 6);
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.edges().len(), 40);
    }
}
