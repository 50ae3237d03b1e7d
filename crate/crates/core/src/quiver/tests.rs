use proptest::prelude::*;

use super::*;
use crate::exactlin::{Field, Matrix, Scalar};

fn a3_text(extra: &str) -> String {
    format!("field q\nvertices 1 2 3\narrows a: 1 -> 2, b: 2 -> 3, c: 1 -> 3\n{extra}")
}

#[test]
fn two_vertices_one_arrow() {
    let s = parse_spec(b"vertices 1 2; arrow a: 1 -> 2").unwrap();
    assert_eq!(s.vertices, vec!["1", "2"]);
    assert_eq!(s.arrows.len(), 1);
    assert_eq!((s.arrows[0].source, s.arrows[0].target), (0, 1));
    assert!(s.relations.is_empty());
    assert_eq!(s.field, Field::Prime(Field::DEFAULT_PRIME));
    assert_eq!(s.l_max(), 2);
}

#[test]
fn composition_reads_right_to_left() {
    let s = parse_spec(a3_text("relations b*a").as_bytes()).unwrap();
    assert_eq!(s.relations.len(), 1);
    let r = &s.relations[0];
    assert_eq!(r.terms.len(), 1);
    assert!(r.terms[0].0.is_one());
    // a is applied first.
    assert_eq!(r.terms[0].1.arrows, vec![0, 1]);
    assert_eq!((r.source(), r.target()), (0, 2));
}

#[test]
fn short_relation_path_is_rejected() {
    let e = parse_spec(a3_text("relations b*a - c").as_bytes()).unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Validation);
    assert!(e.message.contains("length 1"), "{e}");
    assert_eq!(e.pos, Pos::new(4, 11));
}

#[test]
fn non_parallel_relation_is_rejected() {
    let src = "vertices 1 2 3 4\narrows a: 1 -> 2, b: 2 -> 3, c: 2 -> 4\nrelations b*a + c*a";
    let e = parse_spec(src.as_bytes()).unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Validation);
    assert!(e.message.contains("parallel"));
}

#[test]
fn unknown_names_carry_positions() {
    let e = parse_spec(b"vertices 1 2\narrows a: 1 -> 3").unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Validation);
    assert_eq!(e.pos, Pos::new(2, 16));
    assert_eq!(e.to_string(), "2:16: validation error: unknown vertex `3`");

    let e = parse_spec(a3_text("relations b*z").as_bytes()).unwrap_err();
    assert_eq!(e.pos, Pos::new(4, 13));
}

#[test]
fn non_composable_path_is_rejected() {
    let e = parse_spec(a3_text("relations a*b").as_bytes()).unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Validation);
    assert!(e.message.contains("cannot follow"));
}

#[test]
fn syntax_errors() {
    for (src, pos) in [
        ("vertices 1 2\narrows a 1 -> 2", Pos::new(2, 10)),
        ("vertices 1 2\narrows a: 1 -> 2\nrelations + ", Pos::new(3, 12)),
        ("hello", Pos::new(1, 1)),
        ("field r", Pos::new(1, 7)),
    ] {
        let e = parse_spec(src.as_bytes()).unwrap_err();
        assert_eq!(e.kind, SpecErrorKind::Syntax, "{src}: {e}");
        assert_eq!(e.pos, pos, "{src}: {e}");
    }
}

#[test]
fn cycles_need_truncation() {
    let e = parse_spec(b"vertices 1\narrows x: 1 -> 1").unwrap_err();
    assert!(e.message.contains("truncate"));
    let s = parse_spec(b"truncate 3\nvertices 1\narrows x: 1 -> 1\nrelations x*x").unwrap();
    assert_eq!(s.truncation, Some(3));
    assert_eq!(s.l_max(), 3);
}

#[test]
fn like_terms_merge_and_zero_sum_is_rejected() {
    let s = parse_spec(a3_text("relations 2*b*a + 1/2 b*a").as_bytes()).unwrap();
    assert_eq!(s.relations[0].terms.len(), 1);
    assert_eq!(s.relations[0].terms[0].0.to_string(), "5/2");
    let e = parse_spec(a3_text("relations b*a - b*a").as_bytes()).unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Validation);
}

#[test]
fn gf_literals_are_reduced() {
    let src = "field gf:5\nvertices 1 2\narrows a: 1 -> 2\nmodule M\n dims 1 1\n map a = [[7]]";
    let s = parse_spec(src.as_bytes()).unwrap();
    let m = s.modules[0].maps[0].as_ref().unwrap();
    assert_eq!(m.get(0, 0), &Field::Prime(5).from_i64(2));

    let src = "field gf:5\nvertices 1 2\narrows a: 1 -> 2\nmodule M\n dims 1 1\n map a = [[1/10]]";
    let e = parse_spec(src.as_bytes()).unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::FieldMismatch);
    assert_eq!(e.pos, Pos::new(6, 12));
}

#[test]
fn field_override_replaces_declared_field() {
    let src = b"field q\nvertices 1 2\narrows a: 1 -> 2\nmodule M\n dims 1 1\n map a = [[1/2]]";
    let opts = ParseOptions { field_override: Some(Field::Prime(7)) };
    let s = parse_spec_with(src, opts).unwrap();
    assert_eq!(s.field, Field::Prime(7));
    assert_eq!(s.modules[0].maps[0].as_ref().unwrap().get(0, 0), &Field::Prime(7).from_i64(4));
}

#[test]
fn invalid_prime_is_rejected() {
    let e = parse_spec(b"field gf:6\nvertices 1").unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Validation);
    let e = parse_spec(b"field gf:99999999999999999999999\nvertices 1").unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Validation);
}

#[test]
fn module_data_against_a_quiver() {
    let q = parse_spec(b"field q\nvertices 1 2\narrows a: 1 -> 2").unwrap();
    let m = parse_module_spec(b"dims 1 1\nmap a [[1]]", &q).unwrap();
    assert_eq!(m.dims, vec![1, 1]);
    assert_eq!(m.maps[0], Some(Matrix::from_i64(Field::Rational, &[&[1]])));

    let e = parse_module_spec(b"module M\ndim 1 = 1\ndim 2 = 2\nmap a = [[1]]", &q).unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Shape);
    assert_eq!(e.pos, Pos::new(4, 1));

    let e = parse_module_spec(b"dims 1 1\nmap a [[1/0]]", &q).unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Validation);

    let e = parse_module_spec(b"vertices 3", &q).unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Validation);
}

#[test]
fn staircase_module_on_four_vertices() {
    // Dimension vector (0, 1, 1, 1) on 1 -> 2 -> 3 -> 4 with identity maps where defined.
    let q = parse_spec(b"field q\nvertices 1 2 3 4\narrows a1: 1 -> 2, a2: 2 -> 3, a3: 3 -> 4").unwrap();
    let m = parse_module_spec(b"module M\ndims 0 1 1 1\nmap a1 = []\nmap a2 = [[1]]\nmap a3 = [[1]]", &q).unwrap();
    assert_eq!(m.dims, vec![0, 1, 1, 1]);
    assert_eq!(m.maps[0].as_ref().unwrap().rows(), 1);
    assert_eq!(m.maps[0].as_ref().unwrap().cols(), 0);
    assert_eq!(m.map_or_zero(&q, 1), Matrix::identity(Field::Rational, 1));
}

#[test]
fn zero_dimensional_matrix_shapes() {
    let q = parse_spec(b"field q\nvertices 1 2\narrows a: 1 -> 2").unwrap();
    // dim target 2, dim source 0: `[]` or two empty rows.
    assert!(parse_module_spec(b"dims 0 2\nmap a = []", &q).is_ok());
    assert!(parse_module_spec(b"dims 0 2\nmap a = [[], []]", &q).is_ok());
    let e = parse_module_spec(b"dims 0 2\nmap a = [[]]", &q).unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Shape);
    let e = parse_module_spec(b"dims 1 1\nmap a = [[1], [2, 3]]", &q).unwrap_err();
    assert_eq!(e.kind, SpecErrorKind::Shape);
}

#[test]
fn ideals_and_checks() {
    let src = a3_text("ideal I\n gen b*a\n gen id(2)\ncheck sie I\ncheck admissible");
    let s = parse_spec(src.as_bytes()).unwrap();
    let i = s.ideal("I").unwrap();
    assert_eq!(i.generators.len(), 2);
    assert_eq!(i.generators[1].terms[0].1, Path::identity(1));
    assert_eq!(s.checks.len(), 2);

    let e = parse_spec(a3_text("check sie J").as_bytes()).unwrap_err();
    assert!(e.message.contains("unknown ideal"));
    let e = parse_spec(a3_text("check frobnicate").as_bytes()).unwrap_err();
    assert!(e.message.contains("unknown check directive"));
}

#[test]
fn reserved_and_duplicate_names() {
    assert!(parse_spec(b"vertices 1 1").is_err());
    assert!(parse_spec(b"vertices 1 2\narrows a: 1 -> 2, a: 1 -> 2").is_err());
    assert!(parse_spec(b"vertices 1 2\narrows map: 1 -> 2").is_err());
    assert!(parse_spec(b"vertices id 2").is_err());
}

#[test]
fn limits_are_enforced() {
    assert!(parse_spec(b"truncate 1001\nvertices 1").is_err());
    let q = parse_spec(b"vertices 1").unwrap();
    assert!(parse_module_spec(b"dims 10001", &q).is_err());
    assert!(parse_module_spec(b"dims 99999999999999999999999999", &q).is_err());
}

#[test]
fn render_is_canonical() {
    let src = a3_text("relations -1/2 b*a\nmodule M; dims 1 1 0; map a = [[3]]\nideal I; gen c - 2*b*a");
    let s = parse_spec(src.as_bytes()).unwrap();
    let text = s.render();
    assert!(text.contains("-1/2*b*a"), "{text}");
    assert!(text.contains("c - 2*b*a"), "{text}");
    assert_eq!(parse_spec(text.as_bytes()).unwrap(), s);
    assert_eq!(parse_spec(text.as_bytes()).unwrap().render(), text);
}

#[test]
fn builder_policy_allows_short_relation_paths() {
    let mut s = parse_spec(a3_text("").as_bytes()).unwrap();
    let ba = s.path_from_names(&["b", "a"]).unwrap();
    let c = s.path_from_names(&["c"]).unwrap();
    s.relations.push(Combination { terms: vec![(s.field.one(), ba), (-s.field.one(), c)] });
    assert!(s.validate().is_err());
    s.relation_policy = RelationPolicy::AllowShortPaths;
    assert!(s.validate().is_ok());
}

fn arb_field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(5)), Just(Field::Prime(32003))]
}

fn arb_scalar(field: Field) -> impl Strategy<Value = Scalar> {
    (-9i64..10, 1i64..6).prop_filter_map("nonzero", move |(n, d)| {
        let v = field.from_ratio(&n.into(), &d.into())?;
        (!v.is_zero()).then_some(v)
    })
}

/// All composable paths of length `min..=max` (indices in traversal order).
fn paths(spec: &QuiverSpec, min: usize, max: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut layer: Vec<Path> = (0..spec.vertices.len()).map(Path::identity).collect();
    for len in 0..=max {
        if len >= min {
            out.extend(layer.iter().cloned());
        }
        let mut next = Vec::new();
        for p in &layer {
            for (i, a) in spec.arrows.iter().enumerate() {
                if a.source == p.target {
                    let mut q = p.clone();
                    q.arrows.push(i);
                    q.target = a.target;
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    out
}

fn arb_spec() -> impl Strategy<Value = QuiverSpec> {
    (arb_field(), 1usize..5, prop::collection::vec((0usize..5, 0usize..5), 0..6), any::<bool>())
        .prop_flat_map(|(field, nv, raw_arrows, int_names)| {
            let mut spec = QuiverSpec::new(field);
            spec.vertices = (0..nv).map(|i| if int_names { (i + 1).to_string() } else { format!("v{i}") }).collect();
            spec.arrows = raw_arrows
                .iter()
                .enumerate()
                .map(|(i, &(s, t))| Arrow { name: format!("a{i}"), source: s % nv, target: t % nv })
                .collect();
            if spec.has_cycle() {
                spec.truncation = Some(3);
            }
            let long = paths(&spec, 2, 3);
            let any_len = paths(&spec, 0, 2);
            let dims = prop::collection::vec(0usize..3, nv);
            (
                Just(spec),
                prop::collection::vec(
                    (
                        prop::sample::select(if long.is_empty() { vec![Path::identity(0)] } else { long.clone() }),
                        prop::collection::vec(arb_scalar(field), 3),
                    ),
                    0..3,
                ),
                prop::collection::vec(
                    (prop::sample::select(any_len), prop::collection::vec(arb_scalar(field), 3)),
                    0..3,
                ),
                prop::collection::vec(dims, 0..3),
                prop::collection::vec(arb_scalar(field), 64),
                prop::collection::vec(any::<u8>(), 16),
            )
        })
        .prop_map(|(mut spec, rels, gens, modules, pool, choices)| {
            let all_long = paths(&spec, 2, 3);
            let all_any = paths(&spec, 0, 2);
            let comb = |seed: &Path, coefs: &[Scalar], pool_paths: &[Path]| {
                let mut terms = vec![(coefs[0].clone(), seed.clone())];
                for (k, q) in pool_paths
                    .iter()
                    .filter(|q| *q != seed && q.source == seed.source && q.target == seed.target)
                    .take(2)
                    .enumerate()
                {
                    terms.push((coefs[k + 1].clone(), q.clone()));
                }
                Combination { terms }
            };
            if !all_long.is_empty() {
                spec.relations = rels.iter().map(|(p, c)| comb(p, c, &all_long)).collect();
            }
            if !gens.is_empty() {
                spec.ideals.push(IdealSpec {
                    name: "I".into(),
                    generators: gens.iter().map(|(p, c)| comb(p, c, &all_any)).collect(),
                });
            }
            let mut k = 0;
            for (mi, dims) in modules.into_iter().enumerate() {
                let maps = spec
                    .arrows
                    .iter()
                    .enumerate()
                    .map(|(ai, a)| {
                        if choices[(mi + ai) % choices.len()] % 3 == 0 {
                            return None;
                        }
                        let (r, c) = (dims[a.target], dims[a.source]);
                        let mut m = Matrix::zeros(spec.field, r, c);
                        for i in 0..r {
                            for j in 0..c {
                                m.set(i, j, pool[k % pool.len()].clone());
                                k += 1;
                            }
                        }
                        Some(m)
                    })
                    .collect();
                spec.modules.push(ModuleSpec { name: format!("M{mi}"), dims, maps });
            }
            if spec.ideals.is_empty() {
                spec.checks.push(CheckDirective { directive: "admissible".into(), args: vec![] });
            } else {
                spec.checks.push(CheckDirective { directive: "sie".into(), args: vec!["I".into()] });
            }
            spec
        })
}

proptest! {
    #[test]
    fn render_round_trips(spec in arb_spec()) {
        prop_assert!(spec.validate().is_ok(), "{:?}", spec.validate());
        let text = spec.render();
        let back = parse_spec(text.as_bytes());
        prop_assert_eq!(back.as_ref(), Ok(&spec), "{}", text);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        if let Err(e) = parse_spec(&bytes) {
            prop_assert!(!e.message.is_empty());
        }
    }

    #[test]
    fn mutated_specs_never_panic(idx in 0usize..400, byte in any::<u8>()) {
        let mut src = a3_text("relations b*a\nmodule M\n dims 1 1 1\n map a = [[2]]\nideal I; gen id(2)\ncheck sie I").into_bytes();
        let i = idx % src.len();
        src[i] = byte;
        let _ = parse_spec(&src);
    }
}
