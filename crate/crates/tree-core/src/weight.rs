use crate::error::TreeError;
use crate::tree::{Tree, VertexId};

pub const DEFAULT_C_W: u64 = 8;

/// Opaque per-vertex payload; `bit_len` is what the budget check reads.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightVector {
    pub bytes: Vec<u8>,
    pub bit_len: u64,
}

impl WeightVector {
    pub fn new(bytes: Vec<u8>, bit_len: u64) -> Self {
        assert!(
            bit_len <= 8 * bytes.len() as u64,
            "bit_len exceeds capacity"
        );
        WeightVector { bytes, bit_len }
    }

    /// Payload whose declared length is its full byte capacity.
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        let bit_len = 8 * bytes.len() as u64;
        WeightVector { bytes, bit_len }
    }

    pub fn words(&self) -> u64 {
        self.bit_len.div_ceil(64)
    }
}

/// `ceil(log2(n + 1))`, at least 1.
pub fn log_factor(n: usize) -> u64 {
    let x = n as u64 + 1;
    let bits = 64 - (x - 1).leading_zeros() as u64;
    bits.max(1)
}

/// Bits allowed for a vertex with `deg` children in a tree of original size `n`.
pub fn payload_budget(c_w: u64, deg: usize, n: usize) -> u64 {
    c_w * (deg as u64 + 1) * log_factor(n)
}

/// Bits needed to write `x` with a sign bit.
pub fn int_bits(x: i64) -> u64 {
    1 + (64 - x.unsigned_abs().leading_zeros() as u64).max(1)
}

/// Bits needed to write a vertex id drawn from `0..n`.
pub fn id_bits(n: usize) -> u64 {
    log_factor(n)
}

/// Tree with a per-vertex payload budgeted by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeWeightedTree {
    pub tree: Tree,
    pub payload: Vec<WeightVector>,
    pub c_w: u64,
    /// Original input size; fixes the log factor for the whole run.
    pub n_orig: usize,
}

impl DegreeWeightedTree {
    pub fn new(tree: Tree, payload: Vec<WeightVector>, c_w: u64) -> Result<Self, TreeError> {
        let n_orig = tree.len();
        let t = DegreeWeightedTree {
            tree,
            payload,
            c_w,
            n_orig,
        };
        if t.payload.len() != t.tree.len() {
            return Err(TreeError::Inconsistent(t.payload.len().min(t.tree.len())));
        }
        t.check_budget()?;
        Ok(t)
    }

    pub fn budget(&self, v: VertexId) -> u64 {
        payload_budget(self.c_w, self.tree.deg(v), self.n_orig)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), TreeError> {
        let bits = self.payload[v].bit_len;
        let budget = self.budget(v);
        if bits > budget {
            return Err(TreeError::PayloadBudget {
                vertex: v,
                bits,
                budget,
            });
        }
        Ok(())
    }

    pub fn check_budget(&self) -> Result<(), TreeError> {
        (0..self.tree.len()).try_for_each(|v| self.check_vertex(v))
    }

    /// Replaces one payload and re-checks its budget.
    pub fn set_payload(&mut self, v: VertexId, w: WeightVector) -> Result<(), TreeError> {
        let old = std::mem::replace(&mut self.payload[v], w);
        if let Err(e) = self.check_vertex(v) {
            self.payload[v] = old;
            return Err(e);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_factor_values() {
        assert_eq!(log_factor(0), 1);
        assert_eq!(log_factor(1), 1);
        assert_eq!(log_factor(2), 2);
        assert_eq!(log_factor(3), 2);
        assert_eq!(log_factor(7), 3);
        assert_eq!(log_factor(8), 4);
        assert_eq!(log_factor(16384), 15);
    }

    #[test]
    fn int_bits_values() {
        assert_eq!(int_bits(0), 2);
        assert_eq!(int_bits(1), 2);
        assert_eq!(int_bits(-5), 4);
        assert_eq!(int_bits(255), 9);
    }

    #[test]
    fn budget_rejects_oversized_payload() {
        let t = Tree::from_parents(&[None, Some(0)]).unwrap();
        let small = WeightVector::new(vec![0; 1], 4);
        let mut dw = DegreeWeightedTree::new(t, vec![small.clone(), small], 2).unwrap();
        // leaf budget: 2 * 1 * ceil(log2 3) = 4 bits
        let big = WeightVector::new(vec![0; 1], 5);
        assert!(matches!(
            dw.set_payload(1, big),
            Err(TreeError::PayloadBudget { vertex: 1, .. })
        ));
        assert_eq!(dw.payload[1].bit_len, 4);
    }

    #[test]
    #[should_panic]
    fn bit_len_cannot_exceed_capacity() {
        WeightVector::new(vec![0], 9);
    }
}
