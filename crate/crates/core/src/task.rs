//! Loop agreement tasks, their specification map, composition and the
//! exhaustive check that a decision map implements one task by another.
//!
//! The input complex is always the standard 2-simplex on `{0, 1, 2}`.
//! An implementation of `tgt` by `src` is a simplicial map out of
//! `Bary^N(src.output)`; it is correct when, for every input simplex `σ`,
//! it carries `Bary^N(Γ_src(σ))` into `Γ_tgt(σ)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{product_vertex_id, Complex, ComplexError, Simplex, SimplicialMap, VertexId};
use crate::loops::{diagonal_product, EdgePath, LoopError, LoopJson, TriangleLoop};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaskError {
    #[error("invalid task: {0}")]
    InvalidTask(TaskInvariant),
    #[error("decision map source does not match the subdivided output complex")]
    SourceMismatch,
    #[error("task is not a composition")]
    NotAComposition,
    #[error("decision maps use different subdivision levels ({0} vs {1})")]
    SubdivisionMismatch(usize, usize),
    #[error("unknown task `{0}`")]
    UnknownTask(String),
    #[error("projection index must be 1 or 2, got {0}")]
    BadProjection(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Loop(#[from] LoopError),
}

/// Which task invariant a candidate violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaskInvariant {
    EmptyOutput,
    Disconnected,
    DimensionAboveTwo(usize),
    Loop(LoopError),
}

impl fmt::Display for TaskInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaskInvariant::EmptyOutput => f.write_str("output complex is empty"),
            TaskInvariant::Disconnected => f.write_str("output complex is not path-connected"),
            TaskInvariant::DimensionAboveTwo(d) => {
                write!(f, "output complex has dimension {d}, at most 2 allowed")
            }
            TaskInvariant::Loop(e) => write!(f, "triangle loop: {e}"),
        }
    }
}

/// A nonempty face of the input simplex `{0, 1, 2}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InputSimplex(u8);

impl InputSimplex {
    /// The seven input simplexes: vertices, then edges, then the triangle.
    pub const ALL: [InputSimplex; 7] = [
        InputSimplex(0b001),
        InputSimplex(0b010),
        InputSimplex(0b100),
        InputSimplex(0b011),
        InputSimplex(0b110),
        InputSimplex(0b101),
        InputSimplex(0b111),
    ];

    pub fn new(members: &[usize]) -> Option<Self> {
        let mut mask = 0u8;
        for &m in members {
            if m > 2 {
                return None;
            }
            mask |= 1 << m;
        }
        (mask != 0).then_some(InputSimplex(mask))
    }

    pub fn members(self) -> Vec<usize> {
        (0..3).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    pub fn is_subset_of(self, other: InputSimplex) -> bool {
        self.0 & !other.0 == 0
    }
}

impl fmt::Debug for InputSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for InputSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `Loop(K, λ)`.
#[derive(Clone, Debug)]
pub struct LoopTask {
    name: Option<String>,
    output: Complex,
    triangle: TriangleLoop,
    abelian_certified: bool,
    factors: Option<Arc<(LoopTask, LoopTask)>>,
}

/// Tasks are equal when their output complexes and loops are; names and
/// provenance are ignored.
impl PartialEq for LoopTask {
    fn eq(&self, other: &Self) -> bool {
        self.output == other.output && self.triangle == other.triangle
    }
}

impl Eq for LoopTask {}

impl LoopTask {
    pub fn new(
        name: Option<String>,
        output: Complex,
        triangle: TriangleLoop,
    ) -> Result<Self, TaskError> {
        let invalid = |i| Err(TaskError::InvalidTask(i));
        let dim = match output.dimension() {
            Ok(d) => d,
            Err(_) => return invalid(TaskInvariant::EmptyOutput),
        };
        if dim > 2 {
            return invalid(TaskInvariant::DimensionAboveTwo(dim));
        }
        if !output.is_connected()? {
            return invalid(TaskInvariant::Disconnected);
        }
        if let Err(e) = TriangleLoop::new(&output, triangle.corners().clone(), triangle.paths().clone()) {
            return invalid(TaskInvariant::Loop(e));
        }
        Ok(LoopTask { name, output, triangle, abelian_certified: false, factors: None })
    }

    /// Marks the task as having a known abelian fundamental group.
    pub(crate) fn certified(mut self) -> Self {
        self.abelian_certified = true;
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or("<unnamed>")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn output(&self) -> &Complex {
        &self.output
    }

    pub fn triangle_loop(&self) -> &TriangleLoop {
        &self.triangle
    }

    /// Whether `π₁` of the output is known to be abelian from how the task
    /// was built (catalog tasks and their compositions).
    pub fn abelian_certified(&self) -> bool {
        self.abelian_certified
    }

    /// The factors, when the task was built by [`compose`].
    pub fn factors(&self) -> Option<(&LoopTask, &LoopTask)> {
        self.factors.as_deref().map(|(a, b)| (a, b))
    }
}

/// The specification map: `{i}` goes to corner `v_i`, `{i,j}` to the path
/// complex of `p_ij`, the full triangle to the whole output.
pub fn gamma(t: &LoopTask, s: InputSimplex) -> Complex {
    match s.members().as_slice() {
        [i] => Complex::point(t.triangle.corner(*i).clone()),
        [i, j] => t.triangle.path_between(*i, *j).to_complex(),
        _ => t.output.clone(),
    }
}

/// `T₁ × T₂ = Loop(skel²(K₁ × K₂), λ₁ ⋆ λ₂)`.
pub fn compose(t1: &LoopTask, t2: &LoopTask) -> LoopTask {
    let output = Complex::product_skeleton(&t1.output, &t2.output, 2);
    let triangle = diagonal_product(&t1.triangle, &t2.triangle);
    let name = format!("{}*{}", t1.display_name(), t2.display_name());
    let mut t = LoopTask::new(Some(name), output, triangle)
        .expect("composition of valid tasks is a valid task");
    t.abelian_certified = t1.abelian_certified && t2.abelian_certified;
    t.factors = Some(Arc::new((t1.clone(), t2.clone())));
    t
}

/// A simplicial map `Bary^N(K_src) → K_tgt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionMap {
    subdivisions: usize,
    map: SimplicialMap,
}

impl DecisionMap {
    pub fn new(subdivisions: usize, map: SimplicialMap) -> Result<Self, TaskError> {
        map.require_simplicial()?;
        Ok(DecisionMap { subdivisions, map })
    }

    /// A decision map from `src` to `tgt` given by a vertex assignment on
    /// `Bary^N(src.output)`.
    pub fn for_tasks(
        src: &LoopTask,
        tgt: &LoopTask,
        subdivisions: usize,
        assignment: BTreeMap<VertexId, VertexId>,
    ) -> Result<Self, TaskError> {
        let source = src.output.barycentric_n(subdivisions);
        if assignment.keys().any(|v| !source.contains_vertex(v)) {
            return Err(TaskError::SourceMismatch);
        }
        Self::new(subdivisions, SimplicialMap::new(source, tgt.output.clone(), assignment))
    }

    pub fn identity(t: &LoopTask) -> Self {
        DecisionMap { subdivisions: 0, map: SimplicialMap::identity(&t.output) }
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    pub fn map(&self) -> &SimplicialMap {
        &self.map
    }

    pub fn to_json(&self) -> DecisionMapJson {
        DecisionMapJson { n: self.subdivisions, assignment: self.map.assignment().clone() }
    }
}

/// Serialized form of a decision map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionMapJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub assignment: BTreeMap<VertexId, VertexId>,
}

/// Outcome of an exhaustive carrier check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Pass,
    /// The first input simplex whose carrier leaves the target's `Γ`, and
    /// the offending simplex of the subdivided carrier.
    Fail { input: InputSimplex, simplex: Simplex },
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self, Verification::Pass)
    }
}

fn check_carriers(
    map: &SimplicialMap,
    tgt: &LoopTask,
    subdivisions: usize,
    carrier: impl Fn(InputSimplex) -> Complex,
) -> Result<Verification, TaskError> {
    for s in InputSimplex::ALL {
        let allowed = gamma(tgt, s);
        let subdivided = carrier(s).barycentric_n(subdivisions);
        for simplex in subdivided.simplexes() {
            if !allowed.contains(&map.image(simplex)?) {
                return Ok(Verification::Fail { input: s, simplex: simplex.clone() });
            }
        }
    }
    Ok(Verification::Pass)
}

/// Checks `(φ ∘ Bary^N ∘ Γ_src)(σ) ⊆ Γ_tgt(σ)` for all seven `σ`.
pub fn check_implements(
    src: &LoopTask,
    tgt: &LoopTask,
    d: &DecisionMap,
) -> Result<Verification, TaskError> {
    if *d.map.source() != src.output.barycentric_n(d.subdivisions) {
        return Err(TaskError::SourceMismatch);
    }
    check_carriers(&d.map, tgt, d.subdivisions, |s| gamma(src, s))
}

pub fn verify_implements(src: &LoopTask, tgt: &LoopTask, d: &DecisionMap) -> Result<bool, TaskError> {
    Ok(check_implements(src, tgt, d)?.passed())
}

/// Checks that `t1` and `t2` together implement `tgt` via `d`: the carrier
/// of `σ` is `skel²(Γ₁(σ) × Γ₂(σ))`.
pub fn check_joint_implements(
    t1: &LoopTask,
    t2: &LoopTask,
    tgt: &LoopTask,
    d: &DecisionMap,
) -> Result<Verification, TaskError> {
    let joint = Complex::product_skeleton(&t1.output, &t2.output, 2);
    if *d.map.source() != joint.barycentric_n(d.subdivisions) {
        return Err(TaskError::SourceMismatch);
    }
    check_carriers(&d.map, tgt, d.subdivisions, |s| {
        Complex::product_skeleton(&gamma(t1, s), &gamma(t2, s), 2)
    })
}

pub fn verify_joint_implements(
    t1: &LoopTask,
    t2: &LoopTask,
    tgt: &LoopTask,
    d: &DecisionMap,
) -> Result<bool, TaskError> {
    Ok(check_joint_implements(t1, t2, tgt, d)?.passed())
}

/// The coordinate projection `(x, y) ↦ x` (`i = 1`) or `↦ y` (`i = 2`) out of
/// a composition, at subdivision level 0.
pub fn projection_map(tc: &LoopTask, i: usize) -> Result<DecisionMap, TaskError> {
    let (t1, t2) = tc.factors().ok_or(TaskError::NotAComposition)?;
    if i != 1 && i != 2 {
        return Err(TaskError::BadProjection(i));
    }
    let mut assignment = BTreeMap::new();
    for x in t1.output.vertices() {
        for y in t2.output.vertices() {
            let image = if i == 1 { x } else { y };
            assignment.insert(product_vertex_id(x, y), image.clone());
        }
    }
    let target = if i == 1 { &t1.output } else { &t2.output };
    DecisionMap::new(0, SimplicialMap::new(tc.output.clone(), target.clone(), assignment))
}

/// `v ↦ (δ₁(v), δ₂(v))` into `skel²(K₁ × K₂)`.
///
/// Both maps must share their source and subdivision level; equalizing
/// different levels would need simplicial approximation.
pub fn product_morphism(d1: &DecisionMap, d2: &DecisionMap) -> Result<DecisionMap, TaskError> {
    if d1.subdivisions != d2.subdivisions {
        return Err(TaskError::SubdivisionMismatch(d1.subdivisions, d2.subdivisions));
    }
    if d1.map.source() != d2.map.source() {
        return Err(TaskError::SourceMismatch);
    }
    let target = Complex::product_skeleton(d1.map.target(), d2.map.target(), 2);
    let mut assignment = BTreeMap::new();
    for (v, a) in d1.map.assignment() {
        let b = d2
            .map
            .apply(v)
            .ok_or_else(|| ComplexError::PartialAssignment(v.clone()))?;
        assignment.insert(v.clone(), product_vertex_id(a, b));
    }
    DecisionMap::new(
        d1.subdivisions,
        SimplicialMap::new(d1.map.source().clone(), target, assignment),
    )
}

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 5] =
    ["set-agreement", "simplex-agreement", "torus", "projective-plane", "point"];

/// Triangles of the 7-vertex torus: `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
fn torus_triangles() -> Vec<[String; 3]> {
    let mut out = Vec::new();
    for i in 0..7 {
        for (a, b) in [(1, 3), (2, 3)] {
            out.push([i, (i + a) % 7, (i + b) % 7].map(|k| k.to_string()));
        }
    }
    out
}

/// Triangles of the 6-vertex projective plane (half of the icosahedron).
const PROJECTIVE_PLANE: [[&str; 3]; 10] = [
    ["0", "1", "2"],
    ["0", "2", "3"],
    ["0", "3", "4"],
    ["0", "4", "5"],
    ["0", "5", "1"],
    ["1", "2", "4"],
    ["2", "3", "5"],
    ["3", "4", "1"],
    ["4", "5", "2"],
    ["5", "1", "3"],
];

fn cyclic_loop(c: &Complex, corners: [&str; 3]) -> TriangleLoop {
    let v = corners.map(VertexId::from);
    let paths = [0, 1, 2].map(|k| {
        EdgePath::new([v[k].clone(), v[(k + 1) % 3].clone()]).expect("nonempty")
    });
    TriangleLoop::new(c, v, paths).expect("catalog loop is valid")
}

/// A built-in task.
pub fn catalog(name: &str) -> Result<LoopTask, TaskError> {
    let (output, triangle) = match name {
        "set-agreement" => {
            let c = Complex::build([["0", "1"], ["1", "2"], ["2", "0"]])?;
            let l = cyclic_loop(&c, ["0", "1", "2"]);
            (c, l)
        }
        "simplex-agreement" => {
            let c = Complex::build([["0", "1", "2"]])?;
            let l = cyclic_loop(&c, ["0", "1", "2"]);
            (c, l)
        }
        "torus" => {
            // 0→1→4→0 lifts to the lattice vector (1, 2), a primitive
            // period of the covering plane
            let c = Complex::build(torus_triangles())?;
            let l = cyclic_loop(&c, ["0", "1", "4"]);
            (c, l)
        }
        "projective-plane" => {
            // {0,1,3} is not a face; the 3-cycle is the nontrivial class
            let c = Complex::build(PROJECTIVE_PLANE)?;
            let l = cyclic_loop(&c, ["0", "1", "3"]);
            (c, l)
        }
        "point" => {
            let c = Complex::point("0");
            (c, TriangleLoop::constant(VertexId::from("0")))
        }
        other => return Err(TaskError::UnknownTask(other.to_string())),
    };
    Ok(LoopTask::new(Some(name.to_string()), output, triangle)?.certified())
}

/// Serialized form of a task.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskJson {
    pub complex: Complex,
    #[serde(rename = "loop")]
    pub triangle: LoopJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl From<&LoopTask> for TaskJson {
    fn from(t: &LoopTask) -> Self {
        TaskJson {
            complex: t.output.clone(),
            triangle: LoopJson::from(&t.triangle),
            name: t.name.clone(),
        }
    }
}

impl TryFrom<TaskJson> for LoopTask {
    type Error = TaskError;
    fn try_from(j: TaskJson) -> Result<Self, Self::Error> {
        let triangle = j
            .triangle
            .into_loop(&j.complex)
            .map_err(|e| TaskError::InvalidTask(TaskInvariant::Loop(e)))?;
        LoopTask::new(j.name, j.complex, triangle)
    }
}
