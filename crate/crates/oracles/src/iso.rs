use tree_core::Tree;

/// AHU canonical code: `(` + sorted child codes + `)`.
pub fn ahu_code(tree: &Tree) -> String {
    let mut code = vec![String::new(); tree.len()];
    for v in tree.postorder() {
        let mut parts: Vec<String> = tree
            .children(v)
            .iter()
            .map(|&c| std::mem::take(&mut code[c]))
            .collect();
        parts.sort();
        let mut s = String::with_capacity(2 + parts.iter().map(String::len).sum::<usize>());
        s.push('(');
        for p in parts {
            s.push_str(&p);
        }
        s.push(')');
        code[v] = s;
    }
    std::mem::take(&mut code[tree.root()])
}

pub fn canonical_iso(a: &Tree, b: &Tree) -> bool {
    a.len() == b.len() && ahu_code(a) == ahu_code(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn identical_trees() {
        let t = gen::random_tree(30, 1);
        assert!(canonical_iso(&t, &t));
    }

    #[test]
    fn path_vs_star() {
        assert!(!canonical_iso(&gen::path(3), &gen::star(3)));
        assert_eq!(ahu_code(&gen::path(3)), "((()))");
        assert_eq!(ahu_code(&gen::star(3)), "(()())");
    }

    #[test]
    fn child_order_is_irrelevant() {
        let t = gen::random_tree(25, 4);
        let r = t.with_child_order(|_, ch| ch.reverse());
        assert!(canonical_iso(&t, &r));
    }
}
