#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use quivhom::exactlin::{Field, Matrix, Scalar};
use quivhom::modcat::{FreeModule, Rep};
use quivhom::pathcat::{build_category, PathCategory, PresentedCategory};
use quivhom::quiver::{parse_spec, Arrow, Combination, Path, QuiverSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn build(src: &str) -> PathCategory {
    build_category(&parse_spec(src.as_bytes()).unwrap()).unwrap()
}

pub fn unit(field: Field, len: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); len];
    v[i] = field.one();
    v
}

pub fn all_paths(spec: &QuiverSpec, min: usize, max: usize) -> Vec<Path> {
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

/// Random acyclic quivers with a few relations, plus truncated loops.
pub fn arb_quiver() -> impl Strategy<Value = QuiverSpec> {
    let acyclic =
        (2usize..5, prop::collection::vec((0usize..4, 1usize..4), 1..6), prop::collection::vec(any::<u16>(), 0..4))
            .prop_map(|(nv, arrows, rel_seeds)| {
                let mut spec = QuiverSpec::new(Field::Prime(7));
                spec.vertices = (1..=nv).map(|i| i.to_string()).collect();
                for (i, (s, d)) in arrows.into_iter().enumerate() {
                    let s = s % (nv - 1);
                    let t = (s + d).min(nv - 1);
                    spec.arrows.push(Arrow { name: format!("a{i}"), source: s, target: t });
                }
                let long = all_paths(&spec, 2, 4);
                for seed in rel_seeds {
                    if long.is_empty() {
                        break;
                    }
                    let p = &long[seed as usize % long.len()];
                    let mut terms = vec![(spec.field.one(), p.clone())];
                    if seed % 3 == 0 {
                        if let Some(q) = long.iter().find(|q| *q != p && q.source == p.source && q.target == p.target) {
                            terms.push((spec.field.from_i64(seed as i64 % 5 + 1), q.clone()));
                        }
                    }
                    let rel = Combination { terms };
                    if !spec.relations.contains(&rel) {
                        spec.relations.push(rel);
                    }
                }
                spec
            });
    let loops = (2usize..5).prop_map(|k| {
        parse_spec(
            format!("truncate {k}; vertices p; arrows x: p -> p; relations {}", vec!["x"; k].join("*")).as_bytes(),
        )
        .unwrap()
    });
    prop_oneof![3 => acyclic, 1 => loops]
}

/// Columns spanning the submodule generated by `gens` (object, vector) inside `m`.
pub fn generated(m: &Rep, gens: &[(usize, Vec<Scalar>)]) -> Vec<Matrix> {
    let c = m.category();
    let n = c.num_objects();
    (0..n)
        .map(|y| {
            let mut cols = Vec::new();
            for (x, v) in gens {
                for f in 0..c.dim(*x, y) {
                    cols.push(m.act(*x, y, f).mul_vec(v));
                }
            }
            Matrix::from_columns(c.field(), m.dim(y), &cols)
        })
        .collect()
}

fn random_vec(rng: &mut ChaCha8Rng, field: Field, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| field.from_i64(rng.gen_range(-2..=2))).collect()
}

/// A random finitely presented module: a free module on one or two
/// generators modulo the submodule generated by up to two random elements.
pub fn random_module(cat: &Arc<PresentedCategory>, seed: u64) -> Rep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cat.num_objects();
    let field = cat.field();
    let rank = rng.gen_range(1..=2);
    let gens: Vec<usize> = (0..rank).map(|_| rng.gen_range(0..n)).collect();
    let free = FreeModule::new(cat, gens);
    let p = free.rep();
    let mut rels = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let x = rng.gen_range(0..n);
        if p.dim(x) > 0 {
            rels.push((x, random_vec(&mut rng, field, p.dim(x))));
        }
    }
    p.quotient(&generated(p, &rels)).0
}

pub fn dual_of_right(b: &Rep, cat: &Arc<PresentedCategory>) -> Rep {
    Rep::from_fn(cat.clone(), b.dims().to_vec(), |x, y, f| b.act(y, x, f).transpose())
}

// ---- independent oracle: cover-free resolution, built greedily ----

pub struct Step {
    /// Object of each generator.
    pub gens: Vec<usize>,
    /// Image of each generator, in the previous term (or the module for degree 0).
    pub images: Vec<Vec<Scalar>>,
}

/// Component at `y` of the map out of `⊕_h C(c_h, −)` determined by `images`.
pub fn out_of_free(cat: &PresentedCategory, gens: &[usize], images: &[Vec<Scalar>], target: &Rep, y: usize) -> Matrix {
    let mut cols = Vec::new();
    for (h, &c) in gens.iter().enumerate() {
        for e in 0..cat.dim(c, y) {
            cols.push(target.act(c, y, e).mul_vec(&images[h]));
        }
    }
    Matrix::from_columns(cat.field(), target.dim(y), &cols)
}

/// Adds generators at standard basis vectors, object by object, whenever the
/// current image misses them. Generally not minimal.
pub fn greedy_generators(m: &Rep) -> (Vec<usize>, Vec<Vec<Scalar>>) {
    let cat = m.category();
    let n = cat.num_objects();
    let (mut gens, mut images) = (Vec::new(), Vec::new());
    for x in 0..n {
        for i in 0..m.dim(x) {
            let v = unit(cat.field(), m.dim(x), i);
            let im = out_of_free(cat, &gens, &images, m, x);
            if im.solve(&v).is_err() {
                gens.push(x);
                images.push(v);
            }
        }
    }
    (gens, images)
}

pub fn greedy_resolution(m: &Arc<Rep>, len: usize) -> Vec<Step> {
    let cat = m.category();
    let mut steps = Vec::new();
    let mut target = m.clone();
    // Coordinates of the current target inside the previous free module.
    let mut embed: Option<Vec<Matrix>> = None;
    for _ in 0..=len {
        let (gens, images) = greedy_generators(&target);
        let lifted = match &embed {
            None => images.clone(),
            Some(e) => images.iter().zip(&gens).map(|(v, &c)| e[c].mul_vec(v)).collect(),
        };
        let free = FreeModule::new(cat, gens.clone());
        let comps: Vec<Matrix> = (0..cat.num_objects()).map(|y| out_of_free(cat, &gens, &images, &target, y)).collect();
        let kernel_bases: Vec<Matrix> = comps.iter().map(Matrix::kernel_basis).collect();
        let (kernel, _) = free.rep().submodule(kernel_bases.clone()).unwrap();
        steps.push(Step { gens, images: lifted });
        if kernel.is_zero() {
            break;
        }
        target = Arc::new(kernel);
        embed = Some(kernel_bases);
    }
    steps
}

/// `dim Ext^i(M, N)` from ranks of `Hom(P_•, N)` on the greedy resolution.
pub fn oracle_ext(m: &Arc<Rep>, n: &Rep, max: usize) -> Vec<usize> {
    let cat = m.category();
    let field = cat.field();
    let steps = greedy_resolution(m, max + 1);
    let width = |k: usize| steps.get(k).map_or(0, |s| s.gens.iter().map(|&c| n.dim(c)).sum::<usize>());
    // delta[k]: Hom(P_k, N) → Hom(P_{k+1}, N); a cochain is `(φ_h ∈ N(c_h))_h`.
    let delta = |k: usize| -> Matrix {
        let mut d = Matrix::zeros(field, width(k + 1), width(k));
        let (Some(p), Some(q)) = (steps.get(k), steps.get(k + 1)) else { return d };
        let mut col = 0;
        for (h, &ch) in p.gens.iter().enumerate() {
            for t in 0..n.dim(ch) {
                let mut phi: Vec<Vec<Scalar>> = p.gens.iter().map(|&c| vec![field.zero(); n.dim(c)]).collect();
                phi[h][t] = field.one();
                let mut row = 0;
                for (g, &cg) in q.gens.iter().enumerate() {
                    let val = out_of_free(cat, &p.gens, &phi, n, cg).mul_vec(&q.images[g]);
                    for (r, s) in val.into_iter().enumerate() {
                        d.set(row + r, col, s);
                    }
                    row += n.dim(cg);
                }
                col += 1;
            }
        }
        d
    };
    (0..=max)
        .map(|i| {
            let prev_rank = if i == 0 { 0 } else { delta(i - 1).rank() };
            delta(i).nullity() - prev_rank
        })
        .collect()
}

// ---- examples ----
