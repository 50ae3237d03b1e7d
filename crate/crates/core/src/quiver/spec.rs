use std::collections::HashMap;
use std::fmt::Write as _;

use crate::exactlin::{Field, Matrix, Scalar};

use super::{Pos, SpecError, SpecErrorKind};

/// Largest accepted truncation length.
pub const MAX_TRUNCATION: usize = 1000;
/// Largest accepted dimension of a module at one vertex.
pub const MAX_MODULE_DIM: usize = 10_000;

pub(crate) const RESERVED: &[&str] = &[
    "field",
    "truncate",
    "vertices",
    "vertex",
    "arrows",
    "arrow",
    "relations",
    "relation",
    "module",
    "ideal",
    "check",
    "id",
    "dim",
    "dims",
    "map",
    "gen",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A path in traversal order: `arrows[0]` is applied first. Length zero is the
/// identity at `source == target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn identity(v: usize) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// A linear combination of parallel paths; used for relations and ideal generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    pub terms: Vec<(Scalar, Path)>,
}

impl Combination {
    pub fn source(&self) -> usize {
        self.terms[0].1.source
    }

    pub fn target(&self) -> usize {
        self.terms[0].1.target
    }
}

pub type Relation = Combination;

/// Raw representation data: a dimension per vertex and a matrix per arrow
/// (`None` means the zero map). Shapes are `dim target x dim source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSpec {
    pub name: String,
    pub dims: Vec<usize>,
    pub maps: Vec<Option<Matrix>>,
}

impl ModuleSpec {
    pub fn map_or_zero(&self, spec: &QuiverSpec, arrow: usize) -> Matrix {
        let a = &spec.arrows[arrow];
        self.maps[arrow].clone().unwrap_or_else(|| Matrix::zeros(spec.field, self.dims[a.target], self.dims[a.source]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    pub name: String,
    pub generators: Vec<Combination>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckDirective {
    pub directive: String,
    pub args: Vec<String>,
}

/// How strictly relations are validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelationPolicy {
    /// Every path in a relation has length at least two.
    #[default]
    Admissible,
    /// Paths of length one are also allowed (used for presentations such as the
    /// one-point extension quivers whose relations identify an arrow with a path).
    AllowShortPaths,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverSpec {
    pub field: Field,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
    pub truncation: Option<usize>,
    pub modules: Vec<ModuleSpec>,
    pub ideals: Vec<IdealSpec>,
    pub checks: Vec<CheckDirective>,
    pub relation_policy: RelationPolicy,
}

impl QuiverSpec {
    pub fn new(field: Field) -> QuiverSpec {
        QuiverSpec {
            field,
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
            truncation: None,
            modules: Vec::new(),
            ideals: Vec::new(),
            checks: Vec::new(),
            relation_policy: RelationPolicy::Admissible,
        }
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn module(&self, name: &str) -> Option<&ModuleSpec> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn ideal(&self, name: &str) -> Option<&IdealSpec> {
        self.ideals.iter().find(|m| m.name == name)
    }

    pub fn has_cycle(&self) -> bool {
        // Kahn's algorithm: a cycle exists iff not every vertex gets removed.
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        seen < n
    }

    /// Effective path-length bound: the declared truncation, or `arrows + 1` for acyclic quivers.
    pub fn l_max(&self) -> usize {
        self.truncation.unwrap_or(self.arrows.len() + 1)
    }

    /// Parses a path written right-to-left (`c*b*a` means `a` first) or `id(v)`.
    pub fn path_from_names(&self, names: &[&str]) -> Option<Path> {
        let mut arrows = Vec::new();
        for n in names.iter().rev() {
            arrows.push(self.arrow_index(n)?);
        }
        let first = *arrows.first()?;
        let p = Path { source: self.arrows[first].source, target: self.arrows[*arrows.last()?].target, arrows };
        self.is_composable(&p).then_some(p)
    }

    pub fn is_composable(&self, p: &Path) -> bool {
        if p.arrows.is_empty() {
            return p.source == p.target && p.source < self.vertices.len();
        }
        if self.arrows[p.arrows[0]].source != p.source || self.arrows[*p.arrows.last().unwrap()].target != p.target {
            return false;
        }
        p.arrows.windows(2).all(|w| self.arrows[w[0]].target == self.arrows[w[1]].source)
    }

    pub fn path_label(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("id({})", self.vertices[p.source]);
        }
        p.arrows.iter().rev().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }

    /// Checks every structural invariant; used for specs assembled in code.
    pub fn validate(&self) -> Result<(), SpecError> {
        let err = |msg: String| Err(SpecError::new(SpecErrorKind::Validation, Pos::default(), msg));
        let mut seen = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if RESERVED.contains(&v.as_str()) {
                return err(format!("`{v}` is a reserved word"));
            }
            if seen.insert(v.as_str(), i).is_some() {
                return err(format!("duplicate vertex `{v}`"));
            }
        }
        let mut anames = HashMap::new();
        for a in &self.arrows {
            if anames.insert(a.name.as_str(), ()).is_some() {
                return err(format!("duplicate arrow `{}`", a.name));
            }
            if RESERVED.contains(&a.name.as_str()) {
                return err(format!("`{}` is a reserved word", a.name));
            }
            if a.source >= self.vertices.len() || a.target >= self.vertices.len() {
                return err(format!("arrow `{}` has an undeclared endpoint", a.name));
            }
        }
        if let Some(t) = self.truncation {
            if t == 0 || t > MAX_TRUNCATION {
                return err(format!("truncation must lie in 1..={MAX_TRUNCATION}"));
            }
        } else if self.has_cycle() {
            return err("quiver has an oriented cycle: a `truncate` bound is required".into());
        }
        for r in &self.relations {
            self.check_combination(r, true)
                .map_err(|m| SpecError::new(SpecErrorKind::Validation, Pos::default(), m))?;
        }
        for ideal in &self.ideals {
            for g in &ideal.generators {
                self.check_combination(g, false)
                    .map_err(|m| SpecError::new(SpecErrorKind::Validation, Pos::default(), m))?;
            }
        }
        for m in &self.modules {
            if m.dims.len() != self.vertices.len() || m.maps.len() != self.arrows.len() {
                return err(format!("module `{}` does not match the quiver", m.name));
            }
            for (i, map) in m.maps.iter().enumerate() {
                if let Some(mat) = map {
                    let a = &self.arrows[i];
                    if mat.rows() != m.dims[a.target] || mat.cols() != m.dims[a.source] {
                        return Err(SpecError::new(
                            SpecErrorKind::Shape,
                            Pos::default(),
                            format!("module `{}`: map of `{}` has the wrong shape", m.name, a.name),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn check_combination(&self, c: &Combination, relation: bool) -> Result<(), String> {
        if c.terms.is_empty() {
            return Err("combination reduces to zero".into());
        }
        let (s, t) = (c.terms[0].1.source, c.terms[0].1.target);
        for (coef, p) in &c.terms {
            if coef.is_zero() {
                return Err("zero coefficient stored".into());
            }
            if coef.field() != self.field {
                return Err("coefficient from a different field".into());
            }
            if !self.is_composable(p) {
                return Err(format!("`{}` is not a composable path", self.path_label(p)));
            }
            if p.source != s || p.target != t {
                return Err(format!(
                    "paths are not parallel: `{}` vs `{}`",
                    self.path_label(&c.terms[0].1),
                    self.path_label(p)
                ));
            }
            if relation {
                let min = match self.relation_policy {
                    RelationPolicy::Admissible => 2,
                    RelationPolicy::AllowShortPaths => 1,
                };
                if p.len() < min {
                    return Err(format!(
                        "relation path `{}` has length {} (minimum {min})",
                        self.path_label(p),
                        p.len()
                    ));
                }
            }
        }
        Ok(())
    }

    fn render_combination(&self, c: &Combination) -> String {
        let mut out = String::new();
        for (i, (coef, p)) in c.terms.iter().enumerate() {
            let (neg, mag) = match coef {
                Scalar::Rat(r) if r.numer() < &num_bigint::BigInt::from(0) => (true, -coef),
                _ => (false, coef.clone()),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                let _ = write!(out, "{mag}*");
            }
            out.push_str(&self.path_label(p));
        }
        out
    }

    /// Canonical text form; `parse_spec(render()) == self` for valid specs.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "field {}", self.field);
        if let Some(t) = self.truncation {
            let _ = writeln!(out, "truncate {t}");
        }
        let _ = writeln!(out, "vertices {}", self.vertices.join(" "));
        if !self.arrows.is_empty() {
            out.push_str("arrows\n");
            for a in &self.arrows {
                let _ = writeln!(out, "  {}: {} -> {}", a.name, self.vertices[a.source], self.vertices[a.target]);
            }
        }
        if !self.relations.is_empty() {
            out.push_str("relations\n");
            for r in &self.relations {
                let _ = writeln!(out, "  {}", self.render_combination(r));
            }
        }
        for m in &self.modules {
            let _ = writeln!(out, "module {}", m.name);
            let dims: Vec<String> = m.dims.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "  dims {}", dims.join(" "));
            for (i, map) in m.maps.iter().enumerate() {
                if let Some(mat) = map {
                    let _ = writeln!(out, "  map {} = {}", self.arrows[i].name, render_matrix(mat));
                }
            }
        }
        for ideal in &self.ideals {
            let _ = writeln!(out, "ideal {}", ideal.name);
            for g in &ideal.generators {
                let _ = writeln!(out, "  gen {}", self.render_combination(g));
            }
        }
        for c in &self.checks {
            let mut line = format!("check {}", c.directive);
            for a in &c.args {
                line.push(' ');
                line.push_str(a);
            }
            let _ = writeln!(out, "{line}");
        }
        out
    }
}

pub(crate) fn render_matrix(m: &Matrix) -> String {
    if m.rows() == 0 {
        return "[]".into();
    }
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let entries: Vec<String> = m.row(r).iter().map(|v| v.to_string()).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}
