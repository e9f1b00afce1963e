use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::TreeError;
use crate::tree::{Tree, VertexId};

/// A tree plus integer attributes per vertex (`ew`, `vw`, `bypass`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    pub tree: Tree,
    pub attrs: Vec<BTreeMap<String, i64>>,
}

impl LabeledTree {
    pub fn bare(tree: Tree) -> Self {
        let attrs = vec![BTreeMap::new(); tree.len()];
        LabeledTree { tree, attrs }
    }

    pub fn get(&self, v: VertexId, key: &str) -> Option<i64> {
        self.attrs[v].get(key).copied()
    }

    pub fn set(&mut self, v: VertexId, key: &str, value: i64) {
        self.attrs[v].insert(key.to_string(), value);
    }

    /// Attribute `key` for every vertex, `default` where absent.
    pub fn column(&self, key: &str, default: i64) -> Vec<i64> {
        (0..self.tree.len())
            .map(|v| self.get(v, key).unwrap_or(default))
            .collect()
    }

    pub fn with_column(mut self, key: &str, values: &[i64]) -> Self {
        for (v, &x) in values.iter().enumerate() {
            self.set(v, key, x);
        }
        self
    }

    /// Text form: `n root`, then `id parent|- key=value...` in id order.
    pub fn to_text(&self) -> String {
        let t = &self.tree;
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", t.len(), t.root());
        for v in 0..t.len() {
            match t.parent(v) {
                Some(p) => {
                    let _ = write!(s, "{v} {p}");
                }
                None => {
                    let _ = write!(s, "{v} -");
                }
            }
            for (k, x) in &self.attrs[v] {
                let _ = write!(s, " {k}={x}");
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text form. Children are ordered by id.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let err = |line: usize, msg: &str| TreeError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let mut hf = header.split_whitespace();
        let n: usize = hf
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| err(hl, "bad vertex count"))?;
        let root: usize = hf
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| err(hl, "bad root id"))?;
        if n == 0 {
            return Err(err(hl, "vertex count must be positive"));
        }
        let mut parents = vec![None; n];
        let mut attrs = vec![BTreeMap::new(); n];
        let mut seen = vec![false; n];
        for expect in 0..n {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| err(hl, &format!("expected {n} vertex lines, got {expect}")))?;
            let mut f = line.split_whitespace();
            let v: usize = f
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| err(ln, "bad vertex id"))?;
            if v != expect {
                return Err(err(ln, &format!("expected vertex {expect}, found {v}")));
            }
            seen[v] = true;
            let p = f.next().ok_or_else(|| err(ln, "missing parent"))?;
            if p != "-" {
                let p: usize = p.parse().map_err(|_| err(ln, "bad parent id"))?;
                if p >= n {
                    return Err(err(ln, &format!("parent {p} out of range")));
                }
                parents[v] = Some(p);
            }
            for kv in f {
                let (k, x) = kv
                    .split_once('=')
                    .ok_or_else(|| err(ln, &format!("expected key=value, found {kv}")))?;
                let x: i64 = x
                    .parse()
                    .map_err(|_| err(ln, &format!("bad value in {kv}")))?;
                attrs[v].insert(k.to_string(), x);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(err(ln, "trailing content"));
        }
        let tree = Tree::from_parents(&parents)?;
        if tree.root() != root {
            return Err(err(
                hl,
                &format!(
                    "header root {root} but vertex {} has no parent",
                    tree.root()
                ),
            ));
        }
        Ok(LabeledTree { tree, attrs })
    }
}
