use std::collections::BTreeSet;

use rand::Rng;

use super::LocalStrategy;
use crate::error::{Error, Result};

/// Bipartite wiring: which inputs each output depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionGraph {
    inputs: usize,
    output_supports: Vec<BTreeSet<usize>>,
}

impl InteractionGraph {
    pub fn new(inputs: usize, output_supports: Vec<BTreeSet<usize>>) -> Result<Self> {
        for (j, s) in output_supports.iter().enumerate() {
            if let Some(&i) = s.iter().next_back().filter(|&&i| i >= inputs) {
                return Err(Error::Argument(format!("output {j} reads input {i} of {inputs}")));
            }
        }
        Ok(Self {
            inputs,
            output_supports,
        })
    }

    pub fn from_strategy(s: &LocalStrategy) -> Self {
        Self {
            inputs: s.inputs(),
            output_supports: s.supports().iter().map(|v| v.iter().copied().collect()).collect(),
        }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }
    pub fn outputs(&self) -> usize {
        self.output_supports.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LightCones {
    pub of_output: Vec<BTreeSet<usize>>,
    pub of_input: Vec<BTreeSet<usize>>,
}

pub fn light_cones(g: &InteractionGraph) -> LightCones {
    let mut of_input = vec![BTreeSet::new(); g.inputs];
    for (j, s) in g.output_supports.iter().enumerate() {
        for &i in s {
            of_input[i].insert(j);
        }
    }
    LightCones {
        of_output: g.output_supports.clone(),
        of_input,
    }
}

/// Fan-in-2 circuit as a DAG: nodes `0..inputs` are inputs, node
/// `inputs + k` is gate `k`, whose operands are earlier nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanIn2Circuit {
    inputs: usize,
    gates: Vec<[usize; 2]>,
    outputs: Vec<usize>,
}

impl FanIn2Circuit {
    pub fn new(inputs: usize, gates: Vec<[usize; 2]>, outputs: Vec<usize>) -> Result<Self> {
        for (k, g) in gates.iter().enumerate() {
            if g.iter().any(|&op| op >= inputs + k) {
                return Err(Error::Structure(format!("gate {k} reads a later node")));
            }
        }
        if outputs.iter().any(|&o| o >= inputs + gates.len()) {
            return Err(Error::Structure("output names a missing node".into()));
        }
        Ok(Self { inputs, gates, outputs })
    }

    /// `depth` layers of `width` gates; each gate reads two uniform nodes of
    /// the previous layer. The last layer is the output.
    pub fn random_layered<R: Rng + ?Sized>(inputs: usize, width: usize, depth: usize, rng: &mut R) -> Result<Self> {
        if inputs == 0 || width == 0 {
            return Err(Error::Argument("layers must be nonempty".into()));
        }
        let mut gates = Vec::new();
        let mut prev: Vec<usize> = (0..inputs).collect();
        for _ in 0..depth {
            let start = inputs + gates.len();
            for _ in 0..width {
                gates.push([prev[rng.gen_range(0..prev.len())], prev[rng.gen_range(0..prev.len())]]);
            }
            prev = (start..start + width).collect();
        }
        Self::new(inputs, gates, prev)
    }

    /// Longest input-to-node path for every node.
    pub fn node_depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.inputs + self.gates.len()];
        for (k, [a, b]) in self.gates.iter().enumerate() {
            depth[self.inputs + k] = 1 + depth[*a].max(depth[*b]);
        }
        depth
    }

    pub fn depth(&self) -> usize {
        let d = self.node_depths();
        self.outputs.iter().map(|&o| d[o]).max().unwrap_or(0)
    }

    /// Inputs reachable backwards from each output.
    pub fn interaction_graph(&self) -> InteractionGraph {
        let mut reach: Vec<BTreeSet<usize>> = (0..self.inputs).map(|i| BTreeSet::from([i])).collect();
        for [a, b] in &self.gates {
            let merged = reach[*a].union(&reach[*b]).copied().collect();
            reach.push(merged);
        }
        InteractionGraph {
            inputs: self.inputs,
            output_supports: self.outputs.iter().map(|&o| reach[o].clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndependentInputs {
    /// Chosen inputs, ascending.
    pub set: Vec<usize>,
    /// Average degree of the graph joining inputs that share an output.
    pub average_degree: f64,
    /// `inputs / (1 + average_degree)`.
    pub turan_bound: f64,
}

/// Inputs no two of which share an output's light cone. Greedy: repeatedly
/// take the remaining input of least degree (lowest index on ties) and drop
/// its neighbours.
pub fn independent_inputs(g: &InteractionGraph) -> IndependentInputs {
    let n = g.inputs;
    let mut adj = vec![BTreeSet::new(); n];
    for s in &g.output_supports {
        for &i in s {
            for &k in s {
                if i != k {
                    adj[i].insert(k);
                }
            }
        }
    }
    let average_degree = if n == 0 {
        0.0
    } else {
        adj.iter().map(BTreeSet::len).sum::<usize>() as f64 / n as f64
    };
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = adj.iter().map(BTreeSet::len).collect();
    let mut set = Vec::new();
    while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (degree[v], v)) {
        set.push(v);
        let mut removed = vec![v];
        removed.extend(adj[v].iter().copied().filter(|&u| alive[u]));
        for &u in &removed {
            alive[u] = false;
        }
        for &u in &removed {
            for &w in &adj[u] {
                if alive[w] {
                    degree[w] -= 1;
                }
            }
        }
    }
    set.sort_unstable();
    IndependentInputs {
        set,
        average_degree,
        turan_bound: n as f64 / (1.0 + average_degree),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_independent(g: &InteractionGraph, s: &[usize]) {
        for cone in &light_cones(g).of_output {
            assert!(s.iter().filter(|i| cone.contains(i)).count() <= 1);
        }
    }

    #[test]
    fn identity_wiring() {
        let g = InteractionGraph::new(4, (0..4).map(|i| BTreeSet::from([i])).collect()).unwrap();
        let c = light_cones(&g);
        assert!(c.of_output.iter().chain(&c.of_input).all(|s| s.len() == 1));
        assert_eq!(independent_inputs(&g).set, vec![0, 1, 2, 3]);
    }

    #[test]
    fn pairwise_and_cones() {
        let s = LocalStrategy::pairwise_and(6);
        let g = InteractionGraph::from_strategy(&s);
        let c = light_cones(&g);
        assert!(c.of_output.iter().all(|s| s.len() == 2));
        assert!(c.of_input.iter().all(|s| s.len() == 5));
        let ind = independent_inputs(&g);
        // every pair shares an output, so the intersection graph is complete
        assert_eq!(ind.average_degree, 5.0);
        assert_eq!(ind.set.len(), 1);
        assert!(ind.set.len() as f64 >= ind.turan_bound);
    }

    #[test]
    fn dag_cones_are_bounded_by_fan_in() {
        let mut rng = ChaCha8Rng::seed_from_u64(80);
        for depth in 1..=4 {
            for _ in 0..20 {
                let c = FanIn2Circuit::random_layered(30, 12, depth, &mut rng).unwrap();
                assert_eq!(c.depth(), depth);
                let g = c.interaction_graph();
                for cone in &light_cones(&g).of_output {
                    assert!(cone.len() <= 1 << depth);
                }
            }
        }
    }

    #[test]
    fn dag_reachability_matches_naive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let c = FanIn2Circuit::random_layered(10, 6, 3, &mut rng).unwrap();
        let g = c.interaction_graph();
        for (j, &o) in c.outputs.iter().enumerate() {
            let mut stack = vec![o];
            let mut found = BTreeSet::new();
            while let Some(v) = stack.pop() {
                if v < c.inputs {
                    found.insert(v);
                } else {
                    stack.extend(c.gates[v - c.inputs]);
                }
            }
            assert_eq!(found, g.output_supports[j]);
        }
    }

    #[test]
    fn greedy_set_is_independent_and_meets_turan() {
        let mut rng = ChaCha8Rng::seed_from_u64(82);
        for _ in 0..100 {
            let inputs = rng.gen_range(1..40);
            let outputs = rng.gen_range(0..30);
            let supports = (0..outputs)
                .map(|_| {
                    let k = rng.gen_range(1..=inputs.min(4));
                    rand::seq::index::sample(&mut rng, inputs, k).into_iter().collect()
                })
                .collect();
            let g = InteractionGraph::new(inputs, supports).unwrap();
            let ind = independent_inputs(&g);
            check_independent(&g, &ind.set);
            assert!(ind.set.len() as f64 + 1e-9 >= ind.turan_bound);
        }
    }

    #[test]
    fn rejects_forward_references() {
        assert!(FanIn2Circuit::new(2, vec![[0, 2]], vec![2]).is_err());
        assert!(FanIn2Circuit::new(2, vec![[0, 1]], vec![3]).is_err());
        assert!(InteractionGraph::new(2, vec![BTreeSet::from([2])]).is_err());
    }
}
