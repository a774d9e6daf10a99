//! Text formats for matroids, matroid pairs and pair-trees.
//!
//! Matroid (two lines):
//! ```text
//! ground a b c
//! circuits {a,b} {b,c}
//! ```
//! or `uniform <rank>` as the second line. A pair is a `ground` line
//! followed by two definition lines (M first, then N). A pair-tree is
//! line-oriented:
//! ```text
//! node t0 ground e p ; uniform 1 ; uniform 1
//! node t1 ground p g ; uniform 1
//! edge t0 t1 p
//! root t0 e
//! ```
//! A node's second definition defaults to its first. Serialization
//! canonicalizes: uniform matroids print as `uniform`, everything else as
//! sorted circuits.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Mask, MAX_GROUND};
use crate::matroid::{Matroid, MatroidPair};
use crate::tree::{MatroidTree, PairTree, TreeNode};

/// The effective ground cap: `PC_MAX_GROUND` may lower (never raise) the
/// compiled-in bitmask cap.
pub fn effective_ground_cap() -> usize {
    match std::env::var("PC_MAX_GROUND") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => k.min(MAX_GROUND),
            _ => MAX_GROUND,
        },
        Err(_) => MAX_GROUND,
    }
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

fn check_cap(line: usize, ground: &GroundSet) -> Result<()> {
    let cap = effective_ground_cap();
    if ground.len() > cap {
        return Err(syntax(line, 1, format!("ground has {} elements, cap is {cap}", ground.len())));
    }
    Ok(())
}

fn parse_ground_tokens(line_no: usize, tokens: &[&str]) -> Result<GroundSet> {
    if tokens.is_empty() {
        return Err(syntax(line_no, 1, "ground set needs at least one element"));
    }
    let g = GroundSet::new(tokens.iter().map(|s| s.to_string()))
        .map_err(|e| syntax(line_no, 1, e.to_string()))?;
    check_cap(line_no, &g)?;
    Ok(g)
}

/// Parse one definition: `uniform <rank>` or `circuits {a,b} ...`.
fn parse_definition(line_no: usize, ground: &GroundSet, text: &str) -> Result<Matroid> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("uniform") {
        let rank: usize = rest
            .trim()
            .parse()
            .map_err(|_| syntax(line_no, 1, format!("bad uniform rank `{}`", rest.trim())))?;
        return Matroid::uniform(rank, ground.clone()).map_err(|e| syntax(line_no, 1, e.to_string()));
    }
    if let Some(rest) = text.strip_prefix("circuits") {
        let mut circuits = Vec::new();
        for (k, tok) in rest.split_whitespace().enumerate() {
            let inner = tok
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| syntax(line_no, k + 1, format!("malformed circuit `{tok}`")))?;
            let names: Vec<&str> = inner.split(',').filter(|s| !s.is_empty()).collect();
            let mask = ground
                .mask_of(names)
                .map_err(|e| syntax(line_no, k + 1, e.to_string()))?;
            circuits.push(mask);
        }
        return Matroid::from_circuits(ground.clone(), &circuits)
            .map_err(|e| syntax(line_no, 1, e.to_string()));
    }
    Err(syntax(line_no, 1, format!("expected `uniform` or `circuits`, got `{text}`")))
}

/// Parse a single matroid (ground line + definition line).
pub fn parse_matroid(text: &str) -> Result<Matroid> {
    let lines = content_lines(text);
    if lines.len() != 2 {
        return Err(syntax(lines.len().max(1), 1, "expected exactly 2 lines: ground, definition"));
    }
    let (l1, ground_line) = lines[0];
    let tokens: Vec<&str> = ground_line.split_whitespace().collect();
    if tokens.first() != Some(&"ground") {
        return Err(syntax(l1, 1, "first line must start with `ground`"));
    }
    let ground = parse_ground_tokens(l1, &tokens[1..])?;
    let (l2, def_line) = lines[1];
    parse_definition(l2, &ground, def_line)
}

/// Parse a matroid pair (ground line + M definition + N definition).
pub fn parse_pair(text: &str) -> Result<MatroidPair> {
    let lines = content_lines(text);
    if lines.len() != 3 {
        return Err(syntax(
            lines.len().max(1),
            1,
            "expected 3 lines: ground, M definition, N definition",
        ));
    }
    let (l1, ground_line) = lines[0];
    let tokens: Vec<&str> = ground_line.split_whitespace().collect();
    if tokens.first() != Some(&"ground") {
        return Err(syntax(l1, 1, "first line must start with `ground`"));
    }
    let ground = parse_ground_tokens(l1, &tokens[1..])?;
    let m = parse_definition(lines[1].0, &ground, lines[1].1)?;
    let n = parse_definition(lines[2].0, &ground, lines[2].1)?;
    MatroidPair::new(m, n)
}

fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Parse a pair-tree.
pub fn parse_pairtree(text: &str) -> Result<PairTree> {
    struct RawNode {
        m: Matroid,
        n: Matroid,
    }
    let mut raw: BTreeMap<String, RawNode> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, String, String, String)> = Vec::new();
    let mut root: Option<(usize, String, String)> = None;

    for (line_no, line) in content_lines(text) {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("node") => {
                let id = tokens
                    .next()
                    .ok_or_else(|| syntax(line_no, 1, "node needs an id"))?
                    .to_string();
                let rest: Vec<&str> = tokens.collect();
                if rest.first() != Some(&"ground") {
                    return Err(syntax(line_no, 2, "node needs `ground <elements> ; <def>`"));
                }
                let joined = rest.join(" ");
                let parts: Vec<&str> = joined.split(';').map(str::trim).collect();
                if parts.len() < 2 || parts.len() > 3 {
                    return Err(syntax(line_no, 1, "node needs 1 or 2 `;`-separated definitions"));
                }
                let gtokens: Vec<&str> = parts[0].split_whitespace().skip(1).collect();
                let ground = parse_ground_tokens(line_no, &gtokens)?;
                let m = parse_definition(line_no, &ground, parts[1])?;
                let n = if parts.len() == 3 {
                    parse_definition(line_no, &ground, parts[2])?
                } else {
                    m.clone()
                };
                if raw.insert(id.clone(), RawNode { m, n }).is_some() {
                    return Err(syntax(line_no, 1, format!("duplicate node `{id}`")));
                }
                order.push(id);
            }
            Some("edge") => {
                let mut next = |what: &str| {
                    tokens
                        .next()
                        .map(str::to_string)
                        .ok_or_else(|| syntax(line_no, 1, format!("edge needs {what}")))
                };
                edges.push((line_no, next("two node ids")?, next("a second node id")?, next("a dummy element")?));
            }
            Some("root") => {
                if root.is_some() {
                    return Err(syntax(line_no, 1, "duplicate root line"));
                }
                let id = tokens
                    .next()
                    .ok_or_else(|| syntax(line_no, 1, "root needs a node id"))?;
                let lower = tokens
                    .next()
                    .ok_or_else(|| syntax(line_no, 1, "root needs a lower-edge element"))?;
                root = Some((line_no, id.to_string(), lower.to_string()));
            }
            Some(tok) => return Err(syntax(line_no, 1, format!("unknown directive `{tok}`"))),
            None => {}
        }
    }

    let (root_line, root_id, lower) =
        root.ok_or_else(|| syntax(1, 1, "missing `root <id> <lower-edge>` line"))?;
    if !raw.contains_key(&root_id) {
        return Err(syntax(root_line, 1, format!("unknown root node `{root_id}`")));
    }
    // adjacency, with tree checks
    let mut adj: BTreeMap<&str, Vec<(&str, &str)>> = BTreeMap::new();
    for (line_no, a, b, d) in &edges {
        for id in [a, b] {
            if !raw.contains_key(id.as_str()) {
                return Err(syntax(*line_no, 1, format!("edge uses unknown node `{id}`")));
            }
        }
        adj.entry(a).or_default().push((b, d));
        adj.entry(b).or_default().push((a, d));
    }
    if edges.len() + 1 != raw.len() {
        return Err(syntax(root_line, 1, "edges must form a spanning tree"));
    }
    // BFS from the root; children after parents
    let mut bfs: Vec<(String, Option<usize>, Option<String>)> = vec![(root_id.clone(), None, None)];
    let mut seen: Vec<&str> = vec![&root_id];
    let mut head = 0;
    while head < bfs.len() {
        let id = bfs[head].0.clone();
        if let Some(nbrs) = adj.get(id.as_str()) {
            for (other, d) in nbrs.clone() {
                if !seen.contains(&other) {
                    seen.push(other);
                    bfs.push((other.to_string(), Some(head), Some(d.to_string())));
                }
            }
        }
        head += 1;
    }
    if bfs.len() != raw.len() {
        return Err(syntax(root_line, 1, "edges must form a connected tree"));
    }

    let build = |side_m: bool| -> Result<MatroidTree> {
        let mut nodes = Vec::new();
        for (i, (id, parent, dummy)) in bfs.iter().enumerate() {
            let r = &raw[id];
            let children = bfs
                .iter()
                .enumerate()
                .filter(|(_, (_, p, _))| *p == Some(i))
                .map(|(j, _)| j)
                .collect();
            nodes.push(TreeNode {
                id: id.clone(),
                matroid: if side_m { r.m.clone() } else { r.n.clone() },
                parent: *parent,
                parent_dummy: dummy.clone(),
                children,
            });
        }
        MatroidTree::new(nodes)
    };
    PairTree::new(build(true)?, build(false)?, lower)
}

/// Canonical definition line: `uniform` when the matroid is uniform,
/// sorted circuits otherwise.
pub fn definition_string(m: &Matroid) -> String {
    let uniform = Matroid::uniform(m.rank() as usize, m.ground().clone()).unwrap();
    if *m == uniform {
        return format!("uniform {}", m.rank());
    }
    let circuits: Vec<String> = m
        .circuits()
        .iter()
        .map(|&c| {
            let names: Vec<&str> = c.iter().map(|i| m.ground().name(i)).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    format!("circuits {}", circuits.join(" ")).trim_end().to_string()
}

pub fn serialize_matroid(m: &Matroid) -> String {
    format!("ground {}\n{}\n", m.ground().names().join(" "), definition_string(m))
}

pub fn serialize_pair(pair: &MatroidPair) -> String {
    format!(
        "ground {}\n{}\n{}\n",
        pair.ground().names().join(" "),
        definition_string(&pair.m),
        definition_string(&pair.n)
    )
}

pub fn serialize_pairtree(tree: &PairTree) -> String {
    let mut out = String::new();
    for (t, node) in tree.m.nodes.iter().enumerate() {
        let n_node = &tree.n.nodes[t];
        out.push_str(&format!(
            "node {} ground {} ; {} ; {}\n",
            node.id,
            node.matroid.ground().names().join(" "),
            definition_string(&node.matroid),
            definition_string(&n_node.matroid),
        ));
    }
    for node in tree.m.nodes.iter().skip(1) {
        out.push_str(&format!(
            "edge {} {} {}\n",
            tree.m.nodes[node.parent.unwrap()].id,
            node.id,
            node.parent_dummy.as_ref().unwrap()
        ));
    }
    out.push_str(&format!("root {} {}\n", tree.m.nodes[0].id, tree.lower));
    out
}

/// Mask as space-separated names (for counterexample blocks).
pub fn show_set(g: &GroundSet, m: Mask) -> String {
    g.show(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_uniform_and_circuits() {
        let m = parse_matroid("ground e\nuniform 0\n").unwrap();
        assert_eq!(m, Matroid::uniform(0, GroundSet::new(["e"]).unwrap()).unwrap());
        let m = parse_matroid("ground a b\ncircuits {a,b}\n").unwrap();
        assert_eq!(m, Matroid::uniform(1, GroundSet::letters(2)).unwrap());
    }

    #[test]
    fn parse_reports_position() {
        let err = parse_matroid("ground a b\ncircuits {a,{b}\n").unwrap_err();
        match err {
            Error::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other}"),
        }
        assert!(parse_matroid("ground a a\nuniform 1\n").is_err());
        assert!(parse_matroid("ground a b c\ncircuits {a,b} {b,c}\n").is_err());
    }

    #[test]
    fn matroid_roundtrip() {
        for text in ["ground a b\nuniform 1\n", "ground a b c\ncircuits {a,b}\n"] {
            let m = parse_matroid(text).unwrap();
            let s = serialize_matroid(&m);
            assert_eq!(parse_matroid(&s).unwrap(), m);
        }
        // canonicalization: circuits of a uniform matroid print as uniform
        let m = parse_matroid("ground a b\ncircuits {a,b}\n").unwrap();
        assert_eq!(serialize_matroid(&m), "ground a b\nuniform 1\n");
    }

    #[test]
    fn pair_roundtrip() {
        let p = parse_pair("ground a b\nuniform 1\nuniform 2\n").unwrap();
        let s = serialize_pair(&p);
        let again = parse_pair(&s).unwrap();
        assert!(p.m == again.m && p.n == again.n);
    }

    #[test]
    fn pairtree_roundtrip() {
        let text = "node t0 ground e p ; uniform 1 ; uniform 1\n\
                    node t1 ground p g ; uniform 1\n\
                    edge t0 t1 p\n\
                    root t0 e\n";
        let tree = parse_pairtree(text).unwrap();
        assert_eq!(tree.len(), 2);
        assert_eq!(tree.lower, "e");
        let s = serialize_pairtree(&tree);
        let again = parse_pairtree(&s).unwrap();
        assert_eq!(serialize_pairtree(&again), s);
    }

    #[test]
    fn pairtree_rejects_non_trees() {
        // disconnected
        let text = "node t0 ground e p ; uniform 1\nnode t1 ground q g ; uniform 1\nroot t0 e\n";
        assert!(parse_pairtree(text).is_err());
        // shared element that is not the edge dummy
        let text = "node t0 ground e p ; uniform 1\n\
                    node t1 ground p e ; uniform 1\n\
                    edge t0 t1 p\n\
                    root t0 e\n";
        assert!(parse_pairtree(text).is_err());
    }
}
