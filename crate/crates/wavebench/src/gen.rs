//! Instance generation: exhaustive catalogs of small matroids and seeded
//! random matroids, pairs and pair-trees.
//!
//! Everything is deterministic in `(seed, parameters)`; suites derive
//! per-instance seeds as `seed + index` so trials can run in parallel.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::ground::{GroundSet, Mask};
use crate::matroid::{Matroid, MatroidPair};
use crate::tree::{MatroidTree, PairTree, TreeNode};

/// All labeled matroids on the given ground set, enumerated through their
/// base families (nonempty equal-size families with the exchange
/// property). Practical for grounds of at most 4-5 elements.
pub fn catalog_matroids(ground: &GroundSet) -> Vec<Matroid> {
    let n = ground.len();
    let mut out = Vec::new();
    for rank in 0..=n {
        let k_subsets: Vec<Mask> = Mask::full(n)
            .submasks()
            .filter(|m| m.len() as usize == rank)
            .collect();
        for family_bits in 1u32..(1 << k_subsets.len()) {
            let bases: Vec<Mask> = k_subsets
                .iter()
                .enumerate()
                .filter(|(i, _)| family_bits >> i & 1 == 1)
                .map(|(_, &b)| b)
                .collect();
            if basis_exchange_holds(&bases) {
                let indep = |x: Mask| bases.iter().any(|&b| x.is_subset_of(b));
                out.push(Matroid::from_trusted_predicate(ground.clone(), indep));
            }
        }
    }
    out
}

fn basis_exchange_holds(bases: &[Mask]) -> bool {
    for &b1 in bases {
        for &b2 in bases {
            for x in b1.minus(b2).iter() {
                let ok = b2
                    .minus(b1)
                    .iter()
                    .any(|y| bases.contains(&b1.without(x).with(y)));
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// The cycle matroid of a small (multi)graph: independent sets are the
/// acyclic edge subsets.
pub fn graphic_matroid(ground: GroundSet, vertices: usize, edges: &[(usize, usize)]) -> Matroid {
    assert_eq!(edges.len(), ground.len());
    let edges = edges.to_vec();
    Matroid::from_trusted_predicate(ground, move |x: Mask| {
        let mut parent: Vec<usize> = (0..vertices).collect();
        fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for i in x.iter() {
            let (a, b) = edges[i];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    })
}

/// Uniform matroids plus a fixed spread of graphic samples on 5 elements,
/// used where full cataloguing stops being practical.
pub fn five_element_samples() -> Vec<Matroid> {
    let g = GroundSet::letters(5);
    let mut out: Vec<Matroid> =
        (0..=5).map(|r| Matroid::uniform(r, g.clone()).unwrap()).collect();
    // 5-cycle
    out.push(graphic_matroid(g.clone(), 5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]));
    // triangle with two bridges
    out.push(graphic_matroid(g.clone(), 5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]));
    // two triangles sharing a vertex, one edge doubled
    out.push(graphic_matroid(g.clone(), 4, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 0)]));
    // 4-cycle plus chord
    out.push(graphic_matroid(g.clone(), 4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]));
    // loop + parallel pair + path
    out.push(graphic_matroid(g, 4, &[(0, 0), (0, 1), (0, 1), (1, 2), (2, 3)]));
    out
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum RandomModel {
    UniformRandomRank,
    RepairedDownwardClosed,
    GraphicSample,
}

pub const MODELS: [RandomModel; 3] = [
    RandomModel::UniformRandomRank,
    RandomModel::RepairedDownwardClosed,
    RandomModel::GraphicSample,
];

/// A random matroid on `n` elements, deterministic in `(seed, n, model)`.
pub fn random_matroid(seed: u64, n: usize, model: RandomModel) -> Matroid {
    let ground = GroundSet::letters(n);
    let mut rng = StdRng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    match model {
        RandomModel::UniformRandomRank => {
            let r = rng.gen_range(0..=n);
            Matroid::uniform(r, ground).unwrap()
        }
        RandomModel::RepairedDownwardClosed => {
            let full = 1u32 << n;
            let mut indep = vec![false; full as usize];
            indep[0] = true;
            // seed a few generators, downward-close, then repair by greedy
            // augmentation closure
            for _ in 0..rng.gen_range(1..=n.max(1)) {
                let gen_mask = Mask(rng.gen_range(0..full));
                for s in gen_mask.submasks() {
                    indep[s.0 as usize] = true;
                }
            }
            loop {
                let mut violation = None;
                'outer: for small in 0..full {
                    if !indep[small as usize] {
                        continue;
                    }
                    let sm = Mask(small);
                    for big in 0..full {
                        if !indep[big as usize] || Mask(big).len() != sm.len() + 1 {
                            continue;
                        }
                        let bg = Mask(big);
                        if !bg.minus(sm).iter().any(|x| indep[sm.with(x).0 as usize]) {
                            violation = Some((sm, bg));
                            break 'outer;
                        }
                    }
                }
                match violation {
                    None => break,
                    Some((sm, bg)) => {
                        let x = bg.minus(sm).first().unwrap();
                        for s in sm.with(x).submasks() {
                            indep[s.0 as usize] = true;
                        }
                    }
                }
            }
            Matroid::from_indep_sets(
                ground,
                &(0..full).filter(|&x| indep[x as usize]).map(Mask).collect::<Vec<_>>(),
            )
            .expect("repair loop yields a matroid")
        }
        RandomModel::GraphicSample => {
            let vertices = rng.gen_range(2..=n.max(2));
            let edges: Vec<(usize, usize)> = (0..n)
                .map(|_| {
                    if rng.gen_ratio(1, 8) {
                        let v = rng.gen_range(0..vertices);
                        (v, v) // loop
                    } else {
                        (rng.gen_range(0..vertices), rng.gen_range(0..vertices))
                    }
                })
                .collect();
            graphic_matroid(ground, vertices, &edges)
        }
    }
}

/// A random pair on a common ground, models cycled by seed.
pub fn random_pair(seed: u64, n: usize) -> MatroidPair {
    let m = random_matroid(seed.wrapping_mul(2), n, MODELS[(seed % 3) as usize]);
    let n_side = random_matroid(seed.wrapping_mul(2) + 1, n, MODELS[((seed / 3) % 3) as usize]);
    MatroidPair::new(m, n_side).unwrap()
}

/// A random pair-tree: random shape with at most `max_nodes` nodes, node
/// grounds of at most `max_node_ground` elements (dummies included), node
/// matroids drawn independently per side.
pub fn random_pairtree(seed: u64, max_nodes: usize, max_node_ground: usize) -> PairTree {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x51_7c_c1_b7_27_22_0a_95);
    let node_count = rng.gen_range(1..=max_nodes);
    let parents: Vec<Option<usize>> =
        (0..node_count).map(|t| if t == 0 { None } else { Some(rng.gen_range(0..t)) }).collect();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (t, p) in parents.iter().enumerate() {
        if let Some(p) = *p {
            children[p].push(t);
        }
    }
    // grounds: parent dummy + child dummies + globals (root keeps >= 1 global)
    let mut grounds: Vec<Vec<String>> = Vec::new();
    let mut global_counter = 0;
    for t in 0..node_count {
        let mut names = Vec::new();
        if parents[t].is_some() {
            names.push(format!("d{t}"));
        }
        for &c in &children[t] {
            names.push(format!("d{c}"));
        }
        let min_globals = usize::from(t == 0);
        let room = max_node_ground.saturating_sub(names.len()).max(min_globals);
        let extra = rng.gen_range(min_globals..=room.max(min_globals));
        for _ in 0..extra {
            names.push(format!("x{global_counter}"));
            global_counter += 1;
        }
        grounds.push(names);
    }
    let side = |salt: u64| -> MatroidTree {
        let nodes = (0..node_count)
            .map(|t| {
                let ground = GroundSet::new(grounds[t].clone()).unwrap();
                let k = ground.len();
                let model = MODELS[((seed >> (t % 8)) % 3) as usize];
                let raw = random_matroid(
                    seed.wrapping_mul(31).wrapping_add(salt * 1000 + t as u64),
                    k,
                    model,
                );
                // transplant onto the node's ground names
                let matroid = Matroid::from_trusted_predicate(ground, |x| raw.indep(x));
                TreeNode {
                    id: format!("t{t}"),
                    matroid,
                    parent: parents[t],
                    parent_dummy: parents[t].map(|_| format!("d{t}")),
                    children: children[t].clone(),
                }
            })
            .collect();
        MatroidTree::new(nodes).expect("generated tree is well-formed")
    };
    let m = side(1);
    let n = side(2);
    let root_globals: Vec<String> =
        grounds[0].iter().filter(|s| s.starts_with('x')).cloned().collect();
    let lower = root_globals[rng.gen_range(0..root_globals.len())].clone();
    PairTree::new(m, n, lower).expect("generated pair-tree is well-formed")
}

/// The template pair-trees for the game/wave equivalence sweep: small
/// shapes with uniform node matroids of every rank combination.
pub fn template_pairtrees() -> Vec<PairTree> {
    let mut out = Vec::new();
    let node = |id: &str, m: Matroid, parent: Option<usize>, dummy: Option<&str>, ch: Vec<usize>| TreeNode {
        id: id.into(),
        matroid: m,
        parent,
        parent_dummy: dummy.map(String::from),
        children: ch,
    };
    let u = |r: usize, names: &[&str]| {
        Matroid::uniform(r, GroundSet::new(names.to_vec()).unwrap()).unwrap()
    };

    // single node on {e,f}, all rank pairs
    for rm in 0..=2 {
        for rn in 0..=2 {
            let mk = |r: usize| {
                MatroidTree::new(vec![node("t0", u(r, &["e", "f"]), None, None, vec![])]).unwrap()
            };
            out.push(PairTree::new(mk(rm), mk(rn), "e").unwrap());
        }
    }
    // path of two nodes {e,p}-{p,g}, all rank combinations per side
    for rm0 in 0..=2 {
        for rm1 in 0..=2 {
            for rn0 in 0..=2 {
                for rn1 in 0..=2 {
                    let mk = |r0: usize, r1: usize| {
                        MatroidTree::new(vec![
                            node("t0", u(r0, &["e", "p"]), None, None, vec![1]),
                            node("t1", u(r1, &["p", "g"]), Some(0), Some("p"), vec![]),
                        ])
                        .unwrap()
                    };
                    out.push(PairTree::new(mk(rm0, rm1), mk(rn0, rn1), "e").unwrap());
                }
            }
        }
    }
    // star: root {e,p,q} with two leaves {p,a}, {q,b}; ranks swept coarsely
    for r0 in 0..=3 {
        for rl in 0..=2 {
            let mk = |r0: usize, rl: usize| {
                MatroidTree::new(vec![
                    node("t0", u(r0, &["e", "p", "q"]), None, None, vec![1, 2]),
                    node("t1", u(rl, &["p", "a"]), Some(0), Some("p"), vec![]),
                    node("t2", u(1, &["q", "b"]), Some(0), Some("q"), vec![]),
                ])
                .unwrap()
            };
            out.push(PairTree::new(mk(r0, rl), mk(r0, rl), "e").unwrap());
        }
    }
    // path of three nodes with a wider middle ground
    for r1 in 0..=3 {
        let mk = |r1: usize| {
            MatroidTree::new(vec![
                node("t0", u(1, &["e", "p"]), None, None, vec![1]),
                node("t1", u(r1, &["p", "c", "q"]), Some(0), Some("p"), vec![2]),
                node("t2", u(1, &["q", "g"]), Some(1), Some("q"), vec![]),
            ])
            .unwrap()
        };
        out.push(PairTree::new(mk(r1), mk(r1), "e").unwrap());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_counts_match_labeled_matroid_numbers() {
        // labeled matroids on n elements: 1, 2, 5, 16, 68
        for (n, expect) in [(0usize, 1usize), (1, 2), (2, 5), (3, 16), (4, 68)] {
            let g = GroundSet::letters(n);
            assert_eq!(catalog_matroids(&g).len(), expect, "n={n}");
        }
    }

    #[test]
    fn catalog_members_are_valid_and_distinct() {
        let g = GroundSet::letters(3);
        let cat = catalog_matroids(&g);
        for m in &cat {
            m.check_axioms().unwrap();
        }
        for (i, a) in cat.iter().enumerate() {
            for b in &cat[i + 1..] {
                assert!(a != b);
            }
        }
    }

    #[test]
    fn random_matroids_deterministic_and_valid() {
        for model in MODELS {
            for seed in 0..20 {
                let a = random_matroid(seed, 4, model);
                let b = random_matroid(seed, 4, model);
                assert_eq!(a, b);
                a.check_axioms().unwrap();
            }
        }
    }

    #[test]
    fn uniform_random_rank_is_uniform() {
        let m = random_matroid(7, 4, RandomModel::UniformRandomRank);
        let expect = Matroid::uniform(m.rank() as usize, m.ground().clone()).unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn five_samples_are_valid() {
        for m in five_element_samples() {
            m.check_axioms().unwrap();
        }
    }

    #[test]
    fn random_pairtrees_assemble() {
        for seed in 0..30 {
            let tree = random_pairtree(seed, 4, 4);
            let again = random_pairtree(seed, 4, 4);
            assert_eq!(crate::parse::serialize_pairtree(&tree), crate::parse::serialize_pairtree(&again));
            let pair = tree.assemble().unwrap();
            assert_eq!(pair.ground(), tree.ground());
        }
    }

    #[test]
    fn templates_assemble() {
        let ts = template_pairtrees();
        assert!(ts.len() >= 100);
        for t in &ts {
            t.assemble().unwrap();
        }
    }
}
