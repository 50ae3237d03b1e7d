use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactlin::{Field, Matrix, Scalar};

use super::lexer::{decode, tokenize, Statement, Tok, Token};
use super::spec::{
    Arrow, CheckDirective, Combination, IdealSpec, ModuleSpec, Path, QuiverSpec, RelationPolicy, MAX_MODULE_DIM,
    MAX_TRUNCATION, RESERVED,
};
use super::{Pos, SpecError, SpecErrorKind};

/// Directives accepted after `check`, with their argument counts.
pub const CHECK_DIRECTIVES: &[(&str, usize)] =
    &[("admissible", 0), ("build", 0), ("ext", 3), ("sie", 1), ("report", 1), ("onepoint", 1)];

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Replaces the field declared in the file.
    pub field_override: Option<Field>,
}

#[derive(Debug, Clone)]
struct RawNumber {
    num: BigInt,
    den: BigInt,
    pos: Pos,
}

#[derive(Debug, Clone)]
enum RawMonomial {
    Identity(String, Pos),
    Path(Vec<(String, Pos)>),
}

#[derive(Debug, Clone)]
struct RawTerm {
    coef: RawNumber,
    mono: RawMonomial,
    pos: Pos,
}

#[derive(Debug, Clone)]
struct RawCombination {
    terms: Vec<RawTerm>,
    pos: Pos,
}

#[derive(Debug, Clone)]
enum ModuleItem {
    Dim { vertex: String, value: (String, Pos), pos: Pos },
    Dims { values: Vec<(String, Pos)>, pos: Pos },
    Map { arrow: String, rows: Vec<Vec<RawNumber>>, pos: Pos },
}

#[derive(Debug, Clone)]
struct RawModule {
    name: String,
    pos: Pos,
    items: Vec<ModuleItem>,
}

#[derive(Debug, Clone)]
struct RawIdeal {
    name: String,
    pos: Pos,
    gens: Vec<RawCombination>,
}

#[derive(Debug, Clone)]
enum RawField {
    Rational,
    Prime(String),
}

/// Arrow name, source and target, each with its position.
type RawArrow = ((String, Pos), (String, Pos), (String, Pos));

#[derive(Debug, Default)]
struct RawSpec {
    field: Option<(RawField, Pos)>,
    truncate: Option<(String, Pos)>,
    vertices: Vec<(String, Pos)>,
    arrows: Vec<RawArrow>,
    relations: Vec<RawCombination>,
    modules: Vec<RawModule>,
    ideals: Vec<RawIdeal>,
    checks: Vec<(String, Vec<String>, Pos)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Vertices,
    Arrows,
    Relations,
    Module(usize),
    Ideal(usize),
}

fn syntax(pos: Pos, msg: impl Into<String>) -> SpecError {
    SpecError::new(SpecErrorKind::Syntax, pos, msg)
}

fn validation(pos: Pos, msg: impl Into<String>) -> SpecError {
    SpecError::new(SpecErrorKind::Validation, pos, msg)
}

struct Cursor<'a> {
    toks: &'a [Token],
    i: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    fn new(st: &'a Statement) -> Cursor<'a> {
        let end = st.tokens.last().map(|t| Pos::new(t.pos.line, t.pos.col + 1)).unwrap_or_default();
        Cursor { toks: &st.tokens, i: 0, end }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.i);
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<Pos, SpecError> {
        let pos = self.pos();
        match self.next() {
            Some(t) if &t.tok == tok => Ok(pos),
            Some(t) => Err(syntax(pos, format!("expected {tok}, found {}", t.tok))),
            None => Err(syntax(pos, format!("expected {tok}, found end of statement"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), SpecError> {
        let pos = self.pos();
        match self.next() {
            Some(Token { tok: Tok::Ident(s), .. }) => Ok((s.clone(), pos)),
            Some(t) => Err(syntax(pos, format!("expected {what}, found {}", t.tok))),
            None => Err(syntax(pos, format!("expected {what}, found end of statement"))),
        }
    }

    /// Vertex names are identifiers or integers.
    fn name(&mut self, what: &str) -> Result<(String, Pos), SpecError> {
        let pos = self.pos();
        match self.next() {
            Some(Token { tok: Tok::Ident(s), .. }) | Some(Token { tok: Tok::Int(s), .. }) => Ok((s.clone(), pos)),
            Some(t) => Err(syntax(pos, format!("expected {what}, found {}", t.tok))),
            None => Err(syntax(pos, format!("expected {what}, found end of statement"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<(String, Pos), SpecError> {
        let pos = self.pos();
        match self.next() {
            Some(Token { tok: Tok::Int(s), .. }) => Ok((s.clone(), pos)),
            Some(t) => Err(syntax(pos, format!("expected {what}, found {}", t.tok))),
            None => Err(syntax(pos, format!("expected {what}, found end of statement"))),
        }
    }

    fn finish(&self) -> Result<(), SpecError> {
        match self.toks.get(self.i) {
            None => Ok(()),
            Some(t) => Err(syntax(t.pos, format!("unexpected {}", t.tok))),
        }
    }

    fn unsigned_number(&mut self) -> Result<RawNumber, SpecError> {
        let (n, pos) = self.int("a number")?;
        let num: BigInt = n.parse().expect("digits");
        let den = if self.eat(&Tok::Slash) {
            let (d, _) = self.int("a denominator")?;
            d.parse().expect("digits")
        } else {
            BigInt::from(1)
        };
        Ok(RawNumber { num, den, pos })
    }

    fn signed_number(&mut self) -> Result<RawNumber, SpecError> {
        let pos = self.pos();
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let mut n = self.unsigned_number()?;
        if neg {
            n.num = -n.num;
        }
        n.pos = pos;
        Ok(n)
    }

    fn monomial(&mut self) -> Result<RawMonomial, SpecError> {
        let (first, pos) = self.ident("a path")?;
        if first == "id" {
            self.expect(&Tok::LParen)?;
            let v = self.name("a vertex")?;
            self.expect(&Tok::RParen)?;
            return Ok(RawMonomial::Identity(v.0, v.1));
        }
        let mut names = vec![(first, pos)];
        while self.eat(&Tok::Star) {
            names.push(self.ident("an arrow")?);
        }
        Ok(RawMonomial::Path(names))
    }

    fn combination(&mut self) -> Result<RawCombination, SpecError> {
        let start = self.pos();
        let mut terms = Vec::new();
        let mut neg = false;
        if self.eat(&Tok::Minus) {
            neg = true;
        } else {
            self.eat(&Tok::Plus);
        }
        loop {
            let pos = self.pos();
            let mut coef = if matches!(self.peek(), Some(Tok::Int(_))) {
                let c = self.unsigned_number()?;
                self.eat(&Tok::Star);
                c
            } else {
                RawNumber { num: BigInt::from(1), den: BigInt::from(1), pos }
            };
            if neg {
                coef.num = -coef.num;
            }
            let mono = self.monomial()?;
            terms.push(RawTerm { coef, mono, pos });
            if self.eat(&Tok::Plus) {
                neg = false;
            } else if self.eat(&Tok::Minus) {
                neg = true;
            } else {
                break;
            }
        }
        Ok(RawCombination { terms, pos: start })
    }

    fn matrix(&mut self) -> Result<Vec<Vec<RawNumber>>, SpecError> {
        self.expect(&Tok::LBracket)?;
        let mut rows = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(rows);
        }
        loop {
            self.expect(&Tok::LBracket)?;
            let mut row = Vec::new();
            if !self.eat(&Tok::RBracket) {
                loop {
                    row.push(self.signed_number()?);
                    if self.eat(&Tok::RBracket) {
                        break;
                    }
                    self.expect(&Tok::Comma)?;
                }
            }
            rows.push(row);
            if self.eat(&Tok::RBracket) {
                break;
            }
            self.expect(&Tok::Comma)?;
        }
        Ok(rows)
    }
}

fn comma_list<T>(
    cur: &mut Cursor<'_>,
    mut item: impl FnMut(&mut Cursor<'_>) -> Result<T, SpecError>,
) -> Result<Vec<T>, SpecError> {
    let mut out = Vec::new();
    if cur.at_end() {
        return Ok(out);
    }
    loop {
        out.push(item(cur)?);
        if !cur.eat(&Tok::Comma) {
            break;
        }
        if cur.at_end() {
            break;
        }
    }
    cur.finish()?;
    Ok(out)
}

fn arrow_decl(cur: &mut Cursor<'_>) -> Result<RawArrow, SpecError> {
    let name = cur.ident("an arrow name")?;
    cur.expect(&Tok::Colon)?;
    let s = cur.name("a source vertex")?;
    cur.expect(&Tok::Arrow)?;
    let t = cur.name("a target vertex")?;
    Ok((name, s, t))
}

fn module_item(cur: &mut Cursor<'_>) -> Result<ModuleItem, SpecError> {
    let pos = cur.pos();
    let (kw, _) = cur.ident("`dim`, `dims` or `map`")?;
    let item = match kw.as_str() {
        "dim" => {
            let (vertex, _) = cur.name("a vertex")?;
            cur.eat(&Tok::Equals);
            let value = cur.int("a dimension")?;
            ModuleItem::Dim { vertex, value, pos }
        }
        "dims" => {
            let mut values = Vec::new();
            while !cur.at_end() {
                values.push(cur.int("a dimension")?);
            }
            ModuleItem::Dims { values, pos }
        }
        "map" => {
            let (arrow, _) = cur.ident("an arrow")?;
            cur.eat(&Tok::Equals);
            let rows = cur.matrix()?;
            ModuleItem::Map { arrow, rows, pos }
        }
        other => return Err(syntax(pos, format!("expected `dim`, `dims` or `map`, found `{other}`"))),
    };
    cur.finish()?;
    Ok(item)
}

fn parse_raw(statements: &[Statement], module_only: bool) -> Result<RawSpec, SpecError> {
    let mut raw = RawSpec::default();
    let mut section = Section::None;
    for st in statements {
        let mut cur = Cursor::new(st);
        let head_pos = cur.pos();
        let keyword = match cur.peek() {
            Some(Tok::Ident(s)) => Some(s.as_str()),
            _ => None,
        };
        let is_header = matches!(
            keyword,
            Some(
                "field"
                    | "truncate"
                    | "vertices"
                    | "vertex"
                    | "arrows"
                    | "arrow"
                    | "relations"
                    | "relation"
                    | "module"
                    | "ideal"
                    | "check"
            )
        );
        if is_header {
            let kw = keyword.unwrap().to_string();
            cur.next();
            if module_only && kw != "module" {
                return Err(validation(head_pos, format!("`{kw}` is not allowed in module data")));
            }
            match kw.as_str() {
                "field" => {
                    let (f, fpos) = cur.ident("`q` or `gf`")?;
                    let field = match f.as_str() {
                        "q" | "Q" => RawField::Rational,
                        "gf" | "GF" => {
                            cur.eat(&Tok::Colon);
                            RawField::Prime(cur.int("a prime modulus")?.0)
                        }
                        other => return Err(syntax(fpos, format!("unknown field `{other}`"))),
                    };
                    cur.finish()?;
                    if raw.field.is_some() {
                        return Err(validation(head_pos, "field declared twice"));
                    }
                    raw.field = Some((field, head_pos));
                    section = Section::None;
                }
                "truncate" => {
                    let t = cur.int("a truncation length")?;
                    cur.finish()?;
                    if raw.truncate.is_some() {
                        return Err(validation(head_pos, "truncation declared twice"));
                    }
                    raw.truncate = Some(t);
                    section = Section::None;
                }
                "vertices" | "vertex" => {
                    while !cur.at_end() {
                        raw.vertices.push(cur.name("a vertex")?);
                        cur.eat(&Tok::Comma);
                    }
                    section = Section::Vertices;
                }
                "arrows" | "arrow" => {
                    raw.arrows.extend(comma_list(&mut cur, arrow_decl)?);
                    section = Section::Arrows;
                }
                "relations" | "relation" => {
                    raw.relations.extend(comma_list(&mut cur, |c| c.combination())?);
                    section = Section::Relations;
                }
                "module" => {
                    let (name, pos) = cur.name("a module name")?;
                    cur.finish()?;
                    raw.modules.push(RawModule { name, pos, items: Vec::new() });
                    section = Section::Module(raw.modules.len() - 1);
                }
                "ideal" => {
                    let (name, pos) = cur.name("an ideal name")?;
                    cur.finish()?;
                    raw.ideals.push(RawIdeal { name, pos, gens: Vec::new() });
                    section = Section::Ideal(raw.ideals.len() - 1);
                }
                "check" => {
                    let (d, _) = cur.ident("a directive")?;
                    let mut args = Vec::new();
                    while !cur.at_end() {
                        args.push(cur.name("an argument")?.0);
                    }
                    raw.checks.push((d, args, head_pos));
                    section = Section::None;
                }
                _ => unreachable!(),
            }
            continue;
        }
        if module_only && section == Section::None {
            raw.modules.push(RawModule { name: "module".into(), pos: head_pos, items: Vec::new() });
            section = Section::Module(0);
        }
        match section {
            Section::None => return Err(syntax(head_pos, "statement outside of any section")),
            Section::Vertices => {
                while !cur.at_end() {
                    raw.vertices.push(cur.name("a vertex")?);
                    cur.eat(&Tok::Comma);
                }
            }
            Section::Arrows => raw.arrows.extend(comma_list(&mut cur, arrow_decl)?),
            Section::Relations => raw.relations.extend(comma_list(&mut cur, |c| c.combination())?),
            Section::Module(i) => {
                let item = module_item(&mut cur)?;
                raw.modules[i].items.push(item);
            }
            Section::Ideal(i) => {
                if matches!(cur.peek(), Some(Tok::Ident(s)) if s == "gen") {
                    cur.next();
                }
                let gens = comma_list(&mut cur, |c| c.combination())?;
                raw.ideals[i].gens.extend(gens);
            }
        }
    }
    Ok(raw)
}

fn parse_usize(s: &str, pos: Pos, limit: usize, what: &str) -> Result<usize, SpecError> {
    match s.parse::<usize>() {
        Ok(v) if v <= limit => Ok(v),
        _ => Err(validation(pos, format!("{what} `{s}` exceeds the limit {limit}"))),
    }
}

fn scalar(field: Field, n: &RawNumber) -> Result<Scalar, SpecError> {
    if n.den.is_zero() {
        return Err(validation(n.pos, "zero denominator"));
    }
    field.from_ratio(&n.num, &n.den).ok_or_else(|| {
        SpecError::new(
            SpecErrorKind::FieldMismatch,
            n.pos,
            format!("denominator {} is not invertible in {field}", n.den),
        )
    })
}

struct Names<'a> {
    vertices: HashMap<&'a str, usize>,
    arrows: HashMap<&'a str, usize>,
}

fn combination(
    spec: &QuiverSpec,
    names: &Names<'_>,
    raw: &RawCombination,
    relation: bool,
) -> Result<Combination, SpecError> {
    // Like paths are merged; the first occurrence fixes the term order.
    let mut merged: Vec<(Scalar, Path)> = Vec::new();
    let mut index: BTreeMap<Path, usize> = BTreeMap::new();
    for term in &raw.terms {
        let coef = scalar(spec.field, &term.coef)?;
        let path = match &term.mono {
            RawMonomial::Identity(v, pos) => {
                let &vi =
                    names.vertices.get(v.as_str()).ok_or_else(|| validation(*pos, format!("unknown vertex `{v}`")))?;
                Path::identity(vi)
            }
            RawMonomial::Path(ns) => {
                let mut arrows = Vec::with_capacity(ns.len());
                for (n, pos) in ns.iter().rev() {
                    let &ai =
                        names.arrows.get(n.as_str()).ok_or_else(|| validation(*pos, format!("unknown arrow `{n}`")))?;
                    arrows.push(ai);
                }
                for w in arrows.windows(2) {
                    if spec.arrows[w[0]].target != spec.arrows[w[1]].source {
                        return Err(validation(
                            term.pos,
                            format!("`{}` cannot follow `{}`", spec.arrows[w[1]].name, spec.arrows[w[0]].name),
                        ));
                    }
                }
                Path {
                    source: spec.arrows[arrows[0]].source,
                    target: spec.arrows[*arrows.last().unwrap()].target,
                    arrows,
                }
            }
        };
        match index.get(&path) {
            Some(&i) => {
                let sum = &merged[i].0 + &coef;
                merged[i].0 = sum;
            }
            None => {
                index.insert(path.clone(), merged.len());
                merged.push((coef, path));
            }
        }
    }
    merged.retain(|(c, _)| !c.is_zero());
    let comb = Combination { terms: merged };
    spec.check_combination(&comb, relation).map_err(|m| validation(raw.pos, m))?;
    Ok(comb)
}

fn build_module(spec: &QuiverSpec, names: &Names<'_>, raw: &RawModule) -> Result<ModuleSpec, SpecError> {
    let mut dims = vec![0usize; spec.vertices.len()];
    let mut set = vec![false; spec.vertices.len()];
    let mut maps: Vec<Option<Matrix>> = vec![None; spec.arrows.len()];
    for item in &raw.items {
        match item {
            ModuleItem::Dim { vertex, value, pos } => {
                let &v = names
                    .vertices
                    .get(vertex.as_str())
                    .ok_or_else(|| validation(*pos, format!("unknown vertex `{vertex}`")))?;
                if set[v] {
                    return Err(validation(*pos, format!("dimension at `{vertex}` given twice")));
                }
                dims[v] = parse_usize(&value.0, value.1, MAX_MODULE_DIM, "dimension")?;
                set[v] = true;
            }
            ModuleItem::Dims { values, pos } => {
                if values.len() != spec.vertices.len() {
                    return Err(SpecError::new(
                        SpecErrorKind::Shape,
                        *pos,
                        format!("`dims` lists {} values for {} vertices", values.len(), spec.vertices.len()),
                    ));
                }
                if set.iter().any(|&s| s) {
                    return Err(validation(*pos, "dimensions given twice"));
                }
                for (v, (s, p)) in values.iter().enumerate() {
                    dims[v] = parse_usize(s, *p, MAX_MODULE_DIM, "dimension")?;
                    set[v] = true;
                }
            }
            ModuleItem::Map { .. } => {}
        }
    }
    for item in &raw.items {
        if let ModuleItem::Map { arrow, rows, pos } = item {
            let &a =
                names.arrows.get(arrow.as_str()).ok_or_else(|| validation(*pos, format!("unknown arrow `{arrow}`")))?;
            if maps[a].is_some() {
                return Err(validation(*pos, format!("map of `{arrow}` given twice")));
            }
            let (dt, ds) = (dims[spec.arrows[a].target], dims[spec.arrows[a].source]);
            let cols = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != cols) {
                return Err(SpecError::new(SpecErrorKind::Shape, *pos, "ragged matrix rows"));
            }
            let shape_ok = if dt == 0 || ds == 0 {
                cols == 0 && (rows.is_empty() || rows.len() == dt)
            } else {
                rows.len() == dt && cols == ds
            };
            if !shape_ok {
                return Err(SpecError::new(
                    SpecErrorKind::Shape,
                    *pos,
                    format!(
                        "map of `{arrow}` is {}x{} but must be {dt}x{ds} (dim target x dim source)",
                        rows.len(),
                        cols
                    ),
                ));
            }
            let mut m = Matrix::zeros(spec.field, dt, ds);
            for (r, row) in rows.iter().enumerate() {
                for (c, n) in row.iter().enumerate() {
                    m.set(r, c, scalar(spec.field, n)?);
                }
            }
            maps[a] = Some(m);
        }
    }
    Ok(ModuleSpec { name: raw.name.clone(), dims, maps })
}

fn validate(raw: RawSpec, opts: ParseOptions) -> Result<QuiverSpec, SpecError> {
    let field = match (&opts.field_override, &raw.field) {
        (Some(f), _) => *f,
        (None, None) => Field::Prime(Field::DEFAULT_PRIME),
        (None, Some((RawField::Rational, _))) => Field::Rational,
        (None, Some((RawField::Prime(p), pos))) => {
            let p: u64 = p.parse().map_err(|_| validation(*pos, format!("modulus `{p}` is too large")))?;
            Field::prime(p).map_err(|e| validation(*pos, e.to_string()))?
        }
    };
    let mut spec = QuiverSpec::new(field);
    let mut names = Names { vertices: HashMap::new(), arrows: HashMap::new() };
    for (v, pos) in &raw.vertices {
        if RESERVED.contains(&v.as_str()) {
            return Err(validation(*pos, format!("`{v}` is a reserved word")));
        }
        if names.vertices.insert(v.as_str(), spec.vertices.len()).is_some() {
            return Err(validation(*pos, format!("duplicate vertex `{v}`")));
        }
        spec.vertices.push(v.clone());
    }
    for ((name, npos), (s, spos), (t, tpos)) in &raw.arrows {
        if RESERVED.contains(&name.as_str()) {
            return Err(validation(*npos, format!("`{name}` is a reserved word")));
        }
        if names.arrows.insert(name.as_str(), spec.arrows.len()).is_some() {
            return Err(validation(*npos, format!("duplicate arrow `{name}`")));
        }
        let &source =
            names.vertices.get(s.as_str()).ok_or_else(|| validation(*spos, format!("unknown vertex `{s}`")))?;
        let &target =
            names.vertices.get(t.as_str()).ok_or_else(|| validation(*tpos, format!("unknown vertex `{t}`")))?;
        spec.arrows.push(Arrow { name: name.clone(), source, target });
    }
    match &raw.truncate {
        Some((t, pos)) => {
            let t = parse_usize(t, *pos, MAX_TRUNCATION, "truncation")?;
            if t == 0 {
                return Err(validation(*pos, "truncation must be positive"));
            }
            spec.truncation = Some(t);
        }
        None => {
            if spec.has_cycle() {
                let pos = raw.arrows.first().map_or(Pos::new(1, 1), |a| a.0 .1);
                return Err(validation(pos, "quiver has an oriented cycle: a `truncate` bound is required"));
            }
        }
    }
    for r in &raw.relations {
        let rel = combination(&spec, &names, r, true)?;
        spec.relations.push(rel);
    }
    let mut module_names = HashMap::new();
    for m in &raw.modules {
        if RESERVED.contains(&m.name.as_str()) {
            return Err(validation(m.pos, format!("`{}` is a reserved word", m.name)));
        }
        if module_names.insert(m.name.as_str(), ()).is_some() {
            return Err(validation(m.pos, format!("duplicate module `{}`", m.name)));
        }
        let module = build_module(&spec, &names, m)?;
        spec.modules.push(module);
    }
    let mut ideal_names = HashMap::new();
    for ideal in &raw.ideals {
        if RESERVED.contains(&ideal.name.as_str()) {
            return Err(validation(ideal.pos, format!("`{}` is a reserved word", ideal.name)));
        }
        if ideal_names.insert(ideal.name.as_str(), ()).is_some() {
            return Err(validation(ideal.pos, format!("duplicate ideal `{}`", ideal.name)));
        }
        let mut generators = Vec::new();
        for g in &ideal.gens {
            generators.push(combination(&spec, &names, g, false)?);
        }
        spec.ideals.push(IdealSpec { name: ideal.name.clone(), generators });
    }
    for (directive, args, pos) in &raw.checks {
        let Some(&(_, arity)) = CHECK_DIRECTIVES.iter().find(|(d, _)| d == directive) else {
            return Err(validation(*pos, format!("unknown check directive `{directive}`")));
        };
        if args.len() != arity {
            return Err(validation(
                *pos,
                format!("`check {directive}` takes {arity} argument(s), found {}", args.len()),
            ));
        }
        let missing = match directive.as_str() {
            "sie" | "report" => spec.ideal(&args[0]).is_none().then(|| format!("ideal `{}`", args[0])),
            "onepoint" => spec.module(&args[0]).is_none().then(|| format!("module `{}`", args[0])),
            "ext" => {
                if let Some(m) = args[..2].iter().find(|a| spec.module(a).is_none()) {
                    Some(format!("module `{m}`"))
                } else if args[2].parse::<usize>().map_or(true, |d| d > 64) {
                    Some(format!("degree `{}` (expected 0..=64)", args[2]))
                } else {
                    None
                }
            }
            _ => None,
        };
        if let Some(m) = missing {
            return Err(validation(*pos, format!("unknown {m}")));
        }
        spec.checks.push(CheckDirective { directive: directive.clone(), args: args.clone() });
    }
    spec.relation_policy = RelationPolicy::Admissible;
    Ok(spec)
}

/// Parses and validates a `.quiver` document.
pub fn parse_spec(bytes: &[u8]) -> Result<QuiverSpec, SpecError> {
    parse_spec_with(bytes, ParseOptions::default())
}

pub fn parse_spec_with(bytes: &[u8], opts: ParseOptions) -> Result<QuiverSpec, SpecError> {
    let text = decode(bytes)?;
    let statements = tokenize(text)?;
    let raw = parse_raw(&statements, false)?;
    validate(raw, opts)
}

/// Parses representation data (`module <name>` followed by `dim`/`dims`/`map`
/// items, or the bare items) against an already validated quiver.
pub fn parse_module_spec(bytes: &[u8], spec: &QuiverSpec) -> Result<ModuleSpec, SpecError> {
    let text = decode(bytes)?;
    let statements = tokenize(text)?;
    let raw = parse_raw(&statements, true)?;
    if raw.modules.len() != 1 {
        return Err(validation(Pos::new(1, 1), format!("expected exactly one module, found {}", raw.modules.len())));
    }
    let names = Names {
        vertices: spec.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect(),
        arrows: spec.arrows.iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect(),
    };
    build_module(spec, &names, &raw.modules[0])
}
