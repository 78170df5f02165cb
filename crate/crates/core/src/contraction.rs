//! Contraction analysis: nucleus search, non-contraction witnesses, Sidki
//! activity classes, and finite tile-graph approximations.

use crate::mealy::{Automaton, MealyError};
use crate::words::{
    self, closure_graph, element_key, element_key_capped, generator_letters, invert, reduce,
    reduce_push, ClosureGraph, ElementKey, GenWord, SignedLetter,
};
use std::collections::HashMap;

/// A finite set of elements closed under sections and containing the
/// identity, into which every element of the group eventually contracts.
/// Elements are stored as canonical words (shortest found, ties broken
/// lexicographically), the identity first.
pub struct Nucleus {
    aut: Automaton,
    words: Vec<Vec<SignedLetter>>,
    /// deepest section push-down needed while closing the set
    depth_used: usize,
}

impl Nucleus {
    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn depth_used(&self) -> usize {
        self.depth_used
    }

    pub fn words(&self) -> Vec<GenWord<'_>> {
        self.words
            .iter()
            .map(|w| GenWord::from_letters(&self.aut, w.clone()))
            .collect()
    }

    pub fn automaton(&self) -> &Automaton {
        &self.aut
    }
}

/// Outcome of the nucleus search.
pub enum NucleusOutcome {
    Found(Nucleus),
    Unknown,
}

/// Contraction status of the group generated by an automaton.
pub enum ContractionStatus {
    Contracting(Nucleus),
    NotContracting(Witness),
    Unknown,
}

impl ContractionStatus {
    pub fn label(&self) -> &'static str {
        match self {
            ContractionStatus::Contracting(_) => "yes",
            ContractionStatus::NotContracting(_) => "no",
            ContractionStatus::Unknown => "unknown",
        }
    }
}

/// A self-recurrence `w = w|_v` at a fixed vertex `v != root`. With `w` of
/// certified infinite order, all powers of `w` recur as sections at
/// arbitrary depth, so no finite nucleus exists.
pub struct Witness {
    pub word: String,
    pub vertex: Vec<u8>,
    /// true when the infinite-order certificate fired; uncertified
    /// witnesses are candidates only and never flip the status
    pub certified: bool,
}

/// Nodes of the closure graph that recur as sections at unbounded depth:
/// everything reachable from a cycle reachable from the root.
fn eventual_nodes(graph: &ClosureGraph) -> Vec<usize> {
    let n = graph.len();
    // Tarjan SCC, iterative.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut scc_id = vec![usize::MAX; n];
    let mut scc_count = 0usize;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        call.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (v, ref mut xi)) = call.last_mut() {
            if *xi < graph.d {
                let x = *xi;
                *xi += 1;
                let w = graph.child(v, x);
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("scc stack");
                        on_stack[w] = false;
                        scc_id[w] = scc_count;
                        if w == v {
                            break;
                        }
                    }
                    scc_count += 1;
                }
                call.pop();
                if let Some(&mut (u, _)) = call.last_mut() {
                    low[u] = low[u].min(low[v]);
                }
            }
        }
    }
    // an SCC is cyclic when it has more than one node or a self-loop
    let mut scc_size = vec![0usize; scc_count];
    for &id in &scc_id {
        scc_size[id] += 1;
    }
    let mut cyclic = vec![false; scc_count];
    for v in 0..n {
        if scc_size[scc_id[v]] > 1 {
            cyclic[scc_id[v]] = true;
        } else {
            for x in 0..graph.d {
                if graph.child(v, x) == v {
                    cyclic[scc_id[v]] = true;
                }
            }
        }
    }
    // everything reachable from a node in a cyclic SCC
    let mut keep = vec![false; n];
    let mut queue: Vec<usize> = (0..n).filter(|&v| cyclic[scc_id[v]]).collect();
    for &v in &queue {
        keep[v] = true;
    }
    while let Some(v) = queue.pop() {
        for x in 0..graph.d {
            let w = graph.child(v, x);
            if !keep[w] {
                keep[w] = true;
                queue.push(w);
            }
        }
    }
    (0..n).filter(|&v| keep[v]).collect()
}

struct NucleusBuilder<'a> {
    aut: &'a Automaton,
    elements: HashMap<ElementKey, Vec<SignedLetter>>,
    size_cap: usize,
    depth_cap: usize,
    depth_used: usize,
    node_cap: usize,
}

impl<'a> NucleusBuilder<'a> {
    fn new(aut: &'a Automaton, size_cap: usize, depth_cap: usize) -> Self {
        NucleusBuilder {
            aut,
            elements: HashMap::new(),
            size_cap,
            depth_cap,
            depth_used: 0,
            node_cap: (size_cap * 64).max(1 << 16),
        }
    }

    /// Adds the eventual sections of `w`; `None` signals a blown cap and
    /// `Some(true)` that the set grew.
    fn absorb_eventual(&mut self, w: &[SignedLetter]) -> Option<bool> {
        let graph = closure_graph(self.aut, w, self.node_cap)?;
        if graph.max_depth() > self.depth_cap {
            return None;
        }
        self.depth_used = self.depth_used.max(graph.max_depth());
        let mut grew = false;
        for node in eventual_nodes(&graph) {
            let word = graph.words[node].clone();
            let key = element_key_capped(self.aut, &word, self.node_cap)?;
            match self.elements.get_mut(&key) {
                Some(existing) => {
                    if word.len() < existing.len()
                        || (word.len() == existing.len() && word < *existing)
                    {
                        *existing = word;
                    }
                }
                None => {
                    if self.elements.len() >= self.size_cap {
                        return None;
                    }
                    self.elements.insert(key, word);
                    grew = true;
                }
            }
        }
        Some(grew)
    }
}

/// Finds the nucleus exactly when the group is contracting within the caps.
///
/// Seeds with the identity and the eventual sections of every state and
/// inverse, then repeatedly absorbs the eventual sections of all pairwise
/// products; a pass that adds nothing proves the set is product-section
/// stable, and the accumulated set is then precisely the union of the
/// eventual section sets over the whole group, i.e. the nucleus.
pub fn nucleus_search(aut: &Automaton, size_cap: usize, depth_cap: usize) -> NucleusOutcome {
    assert!(size_cap >= 1 && depth_cap >= 1);
    let mut builder = NucleusBuilder::new(aut, size_cap, depth_cap);
    builder
        .elements
        .insert(element_key(aut, &[]), Vec::new());
    for l in generator_letters(aut) {
        if builder.absorb_eventual(&[l]).is_none() {
            return NucleusOutcome::Unknown;
        }
    }
    loop {
        let snapshot: Vec<Vec<SignedLetter>> = builder.elements.values().cloned().collect();
        let mut grew = false;
        for g in &snapshot {
            for h in &snapshot {
                let mut prod = g.clone();
                prod.extend_from_slice(h);
                let prod = reduce(prod);
                match builder.absorb_eventual(&prod) {
                    None => return NucleusOutcome::Unknown,
                    Some(true) => grew = true,
                    Some(false) => {}
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut words: Vec<Vec<SignedLetter>> = builder.elements.values().cloned().collect();
    words.sort_by(|a, b| (a.len(), &a[..]).cmp(&(b.len(), &b[..])));
    NucleusOutcome::Found(Nucleus {
        aut: aut.clone(),
        words,
        depth_used: builder.depth_used,
    })
}

/// Count of the nucleus together with all sections of pairwise products,
/// added in one closing pass. `None` when a cap is exceeded.
pub fn self_similar_closure_size(nucleus: &Nucleus) -> Option<usize> {
    let aut = &nucleus.aut;
    let node_cap = 1 << 20;
    let mut elements: HashMap<ElementKey, ()> = HashMap::new();
    for w in &nucleus.words {
        elements.insert(element_key_capped(aut, w, node_cap)?, ());
    }
    for g in &nucleus.words {
        for h in &nucleus.words {
            let mut prod = g.clone();
            prod.extend_from_slice(h);
            let prod = reduce(prod);
            let graph = closure_graph(aut, &prod, node_cap)?;
            for node in 0..graph.len() {
                elements.insert(element_key_capped(aut, &graph.words[node], node_cap)?, ());
            }
        }
    }
    Some(elements.len())
}

/// experimental: nucleus plus depth>=1 sections of pairwise products, one pass
pub fn closure_variant_sections_only(nucleus: &Nucleus) -> Option<usize> {
    let aut = &nucleus.aut;
    let node_cap = 1 << 20;
    let mut elements: HashMap<ElementKey, ()> = HashMap::new();
    for w in &nucleus.words {
        elements.insert(element_key_capped(aut, w, node_cap)?, ());
    }
    for g in &nucleus.words {
        for h in &nucleus.words {
            let mut prod = g.clone();
            prod.extend_from_slice(h);
            let prod = reduce(prod);
            let graph = closure_graph(aut, &prod, node_cap)?;
            for node in 1..graph.len() {
                if graph.depth[node] >= 1 {
                    elements.insert(element_key_capped(aut, &graph.words[node], node_cap)?, ());
                }
            }
        }
    }
    Some(elements.len())
}

/// experimental: the nucleus iteration seeded with the generators themselves
pub fn closure_variant_seeded(nucleus: &Nucleus) -> Option<usize> {
    let aut = &nucleus.aut;
    let mut builder = NucleusBuilder::new(aut, 2048, 48);
    builder.elements.insert(element_key(aut, &[]), Vec::new());
    for l in generator_letters(aut) {
        // seed the generator itself and its whole section closure
        let graph = closure_graph(aut, &[l], builder.node_cap)?;
        for node in 0..graph.len() {
            let word = graph.words[node].clone();
            let key = element_key_capped(aut, &word, builder.node_cap)?;
            builder.elements.entry(key).or_insert(word);
        }
    }
    for w in nucleus.words.iter() {
        let key = element_key_capped(aut, w, builder.node_cap)?;
        builder.elements.entry(key).or_insert_with(|| w.clone());
    }
    loop {
        let snapshot: Vec<Vec<SignedLetter>> = builder.elements.values().cloned().collect();
        let mut grew = false;
        for g in &snapshot {
            for h in &snapshot {
                let mut prod = g.clone();
                prod.extend_from_slice(h);
                let prod = reduce(prod);
                match builder.absorb_eventual(&prod) {
                    None => return None,
                    Some(true) => grew = true,
                    Some(false) => {}
                }
            }
        }
        if !grew {
            break;
        }
    }
    Some(builder.elements.len())
}

/// Searches for a certified self-recurrence: a nontrivial element of
/// certified infinite order that fixes a vertex and has itself as the
/// section there. Words are enumerated shortest first; the first certified
/// witness is returned, else the first uncertified candidate.
pub fn noncontraction_witness(
    aut: &Automaton,
    word_radius: usize,
    vertex_depth: usize,
) -> Option<Witness> {
    assert!(word_radius >= 1 && vertex_depth >= 1);
    assert_eq!(aut.alphabet(), 2);
    let mut candidate: Option<Witness> = None;
    let mut seen: HashMap<ElementKey, ()> = HashMap::new();
    seen.insert(element_key(aut, &[]), ());
    let mut frontier: Vec<Vec<SignedLetter>> = vec![Vec::new()];
    let gens = generator_letters(aut);
    for _ in 0..word_radius {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in &gens {
                let cand = reduce_push(w, g);
                if cand.len() <= w.len() {
                    continue;
                }
                let key = element_key(aut, &cand);
                if seen.contains_key(&key) {
                    continue;
                }
                seen.insert(key.clone(), ());
                next.push(cand.clone());
                let word = GenWord::from_letters(aut, cand.clone());
                for v in words::vertices_to_depth(vertex_depth) {
                    if word.act(&v) != v {
                        continue;
                    }
                    let section = word.section(&v);
                    if element_key(aut, section.letters()) != key {
                        continue;
                    }
                    if word.certified_infinite() {
                        return Some(Witness {
                            word: word.to_string(),
                            vertex: v,
                            certified: true,
                        });
                    }
                    if candidate.is_none() {
                        candidate = Some(Witness {
                            word: word.to_string(),
                            vertex: v,
                            certified: false,
                        });
                    }
                    break;
                }
            }
        }
        frontier = next;
    }
    candidate
}

/// Default caps sized to the largest nuclei in the three-state binary
/// class, with margin.
pub const DEFAULT_NUCLEUS_SIZE_CAP: usize = 512;
pub const DEFAULT_NUCLEUS_DEPTH_CAP: usize = 24;
pub const DEFAULT_WITNESS_WORD_RADIUS: usize = 6;
pub const DEFAULT_WITNESS_VERTEX_DEPTH: usize = 6;

/// Runs the nucleus search, then the witness search, with default caps.
/// `Unknown` means neither side succeeded within the caps.
pub fn contraction_status(aut: &Automaton) -> ContractionStatus {
    match nucleus_search(aut, DEFAULT_NUCLEUS_SIZE_CAP, DEFAULT_NUCLEUS_DEPTH_CAP) {
        NucleusOutcome::Found(nucleus) => return ContractionStatus::Contracting(nucleus),
        NucleusOutcome::Unknown => {}
    }
    match noncontraction_witness(aut, DEFAULT_WITNESS_WORD_RADIUS, DEFAULT_WITNESS_VERTEX_DEPTH) {
        Some(witness) if witness.certified => ContractionStatus::NotContracting(witness),
        _ => ContractionStatus::Unknown,
    }
}

/// Sidki activity class of one state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ActivityClass {
    pub kind: ActivityKind,
    /// `f_s(n)` for `n <= 12`: the number of length-n paths from the state
    /// to an active state in the Moore diagram
    pub samples: Vec<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ActivityKind {
    Bounded,
    Polynomial(usize),
    Exponential,
}

impl ActivityKind {
    pub fn label(&self) -> String {
        match self {
            ActivityKind::Bounded => "bounded".into(),
            ActivityKind::Polynomial(d) => format!("polynomial({d})"),
            ActivityKind::Exponential => "exponential".into(),
        }
    }
}

/// Classifies the growth of `f_s(n)` structurally: exponential iff some
/// useful state (one that reaches an active state) lies on two distinct
/// cycles; otherwise polynomial of degree = (most cycles met along a path
/// from `s` to an active state) - 1, with degree 0 reported as bounded.
pub fn activity_class(aut: &Automaton, state: usize) -> ActivityClass {
    let m = aut.state_count();
    let d = aut.alphabet();
    // useful: reaches an active state (possibly itself, path length 0)
    let mut useful = vec![false; m];
    for q in 0..m {
        if aut.is_active(q) {
            useful[q] = true;
        }
    }
    loop {
        let mut changed = false;
        for q in 0..m {
            if !useful[q] && (0..d).any(|x| useful[aut.next(q, x)]) {
                useful[q] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let samples: Vec<u64> = {
        // path counts via repeated adjacency application
        let mut counts: Vec<u64> = (0..m).map(|q| u64::from(aut.is_active(q))).collect();
        let mut out = vec![counts[state]];
        for _ in 1..=12 {
            let next: Vec<u64> = (0..m)
                .map(|q| (0..d).map(|x| counts[aut.next(q, x)]).sum())
                .collect();
            counts = next;
            out.push(counts[state]);
        }
        out
    };
    // restrict to useful states reachable from `state`
    let mut reach = vec![false; m];
    reach[state] = true;
    let mut stack = vec![state];
    while let Some(q) = stack.pop() {
        for x in 0..d {
            let t = aut.next(q, x);
            if !reach[t] {
                reach[t] = true;
                stack.push(t);
            }
        }
    }
    let node_ok: Vec<bool> = (0..m).map(|q| reach[q] && useful[q]).collect();
    // SCCs of the restricted graph; an SCC with more edges than nodes has a
    // state on two distinct cycles
    let mut scc_id = vec![usize::MAX; m];
    let mut scc_count = 0usize;
    {
        let mut order = Vec::new();
        let mut visited = vec![false; m];
        for q in 0..m {
            if node_ok[q] && !visited[q] {
                // iterative post-order
                let mut stack = vec![(q, 0usize)];
                visited[q] = true;
                while let Some(&mut (v, ref mut xi)) = stack.last_mut() {
                    if *xi < d {
                        let x = *xi;
                        *xi += 1;
                        let w = aut.next(v, x);
                        if node_ok[w] && !visited[w] {
                            visited[w] = true;
                            stack.push((w, 0));
                        }
                    } else {
                        order.push(v);
                        stack.pop();
                    }
                }
            }
        }
        // transpose reachability
        let mut radj: Vec<Vec<usize>> = vec![Vec::new(); m];
        for q in 0..m {
            if !node_ok[q] {
                continue;
            }
            for x in 0..d {
                let t = aut.next(q, x);
                if node_ok[t] {
                    radj[t].push(q);
                }
            }
        }
        let mut assigned = vec![false; m];
        for &q in order.iter().rev() {
            if assigned[q] {
                continue;
            }
            let mut stack = vec![q];
            assigned[q] = true;
            while let Some(v) = stack.pop() {
                scc_id[v] = scc_count;
                for &u in &radj[v] {
                    if !assigned[u] {
                        assigned[u] = true;
                        stack.push(u);
                    }
                }
            }
            scc_count += 1;
        }
    }
    let mut scc_nodes = vec![0usize; scc_count];
    let mut scc_edges = vec![0usize; scc_count];
    for q in 0..m {
        if !node_ok[q] {
            continue;
        }
        scc_nodes[scc_id[q]] += 1;
        for x in 0..d {
            let t = aut.next(q, x);
            if node_ok[t] && scc_id[t] == scc_id[q] {
                scc_edges[scc_id[q]] += 1;
            }
        }
    }
    for id in 0..scc_count {
        if scc_edges[id] > scc_nodes[id] {
            return ActivityClass {
                kind: ActivityKind::Exponential,
                samples,
            };
        }
    }
    if !node_ok[state] {
        return ActivityClass {
            kind: ActivityKind::Bounded,
            samples,
        };
    }
    // most cyclic SCCs met along a path in the restricted condensation;
    // every retained SCC reaches an active state, so any such chain
    // continues to an active endpoint
    let cyclic: Vec<bool> = (0..scc_count).map(|id| scc_edges[id] >= 1).collect();
    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); scc_count];
    for q in 0..m {
        if !node_ok[q] {
            continue;
        }
        for x in 0..d {
            let t = aut.next(q, x);
            if node_ok[t] && scc_id[t] != scc_id[q] {
                successors[scc_id[q]].push(scc_id[t]);
            }
        }
    }
    fn cycles_met(
        id: usize,
        cyclic: &[bool],
        successors: &[Vec<usize>],
        memo: &mut [Option<usize>],
    ) -> usize {
        if let Some(v) = memo[id] {
            return v;
        }
        let mut best = 0;
        for &t in &successors[id] {
            best = best.max(cycles_met(t, cyclic, successors, memo));
        }
        let v = best + usize::from(cyclic[id]);
        memo[id] = Some(v);
        v
    }
    let mut memo = vec![None; scc_count];
    let met = cycles_met(scc_id[state], &cyclic, &successors, &mut memo);
    let kind = if met <= 1 {
        ActivityKind::Bounded
    } else {
        ActivityKind::Polynomial(met - 1)
    };
    ActivityClass { kind, samples }
}

/// Undirected graph on the level-n vertices: `{v1, v2}` is an edge iff some
/// nucleus element maps `v1` to `v2`.
pub struct TileGraph {
    pub level: usize,
    pub vertex_count: usize,
    pub edges: Vec<(u32, u32)>,
}

pub fn tile_graph(nucleus: &Nucleus, level: usize) -> Result<TileGraph, MealyError> {
    let aut = &nucleus.aut;
    let d = aut.alphabet();
    let mut count = 1usize;
    for _ in 0..level {
        count = count
            .checked_mul(d)
            .filter(|&v| v <= 1 << 12)
            .ok_or(MealyError::LevelTooDeep { level })?;
    }
    let mut edges = Vec::new();
    for w in &nucleus.words {
        let perm = crate::group::level_permutation(aut, w, level);
        for (v, &img) in perm.iter().enumerate() {
            let img = img as usize;
            if v < img {
                edges.push((v as u32, img as u32));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(TileGraph {
        level,
        vertex_count: count,
        edges,
    })
}

impl Nucleus {
    /// Every section of every nucleus element stays in the nucleus.
    pub fn is_section_closed(&self) -> bool {
        let keys: HashMap<ElementKey, ()> = self
            .words
            .iter()
            .map(|w| (element_key(&self.aut, w), ()))
            .collect();
        self.words.iter().all(|w| {
            (0..self.aut.alphabet()).all(|x| {
                let s = words::section_once(&self.aut, w, x);
                keys.contains_key(&element_key(&self.aut, &s))
            })
        })
    }

    pub fn is_inverse_closed(&self) -> bool {
        let keys: HashMap<ElementKey, ()> = self
            .words
            .iter()
            .map(|w| (element_key(&self.aut, w), ()))
            .collect();
        self.words
            .iter()
            .all(|w| keys.contains_key(&element_key(&self.aut, &invert(w))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decode(n: u64) -> Automaton {
        Automaton::decode_number(n).unwrap()
    }

    fn adding_machine() -> Automaton {
        Automaton::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 1]]).unwrap()
    }

    #[test]
    fn adding_machine_nucleus() {
        let NucleusOutcome::Found(nucleus) = nucleus_search(&adding_machine(), 64, 16) else {
            panic!("adding machine is contracting");
        };
        assert_eq!(nucleus.size(), 3);
        assert!(nucleus.is_section_closed());
        assert!(nucleus.is_inverse_closed());
        let words: Vec<String> = nucleus
            .words()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, vec!["1", "A", "a"]);
    }

    #[test]
    fn basilica_is_contracting() {
        let NucleusOutcome::Found(nucleus) = nucleus_search(&decode(852), 64, 16) else {
            panic!("basilica is contracting");
        };
        assert!(nucleus.size() >= 5);
        assert!(nucleus.is_section_closed());
    }

    #[test]
    fn witness_examples() {
        // 849: the section of a^2c at 100 coincides with a^2c.
        let w = noncontraction_witness(&decode(849), 4, 4).expect("witness");
        assert!(w.certified);
        // 2396: b^-1 a recurs at vertex 1.
        let w = noncontraction_witness(&decode(2396), 4, 4).expect("witness");
        assert!(w.certified);
        // the adding machine is contracting: no witness at all
        assert!(noncontraction_witness(&adding_machine(), 4, 4).is_none());
    }

    #[test]
    fn activity_classes() {
        let add = adding_machine();
        let c = activity_class(&add, 0);
        assert_eq!(c.kind, ActivityKind::Bounded);
        assert!(c.samples.iter().all(|&v| v == 1));

        let c = activity_class(&decode(2240), 0);
        assert_eq!(c.kind, ActivityKind::Exponential);

        // trivial automaton: f = 0 everywhere
        let c = activity_class(&decode(1), 0);
        assert_eq!(c.kind, ActivityKind::Bounded);
        assert!(c.samples.iter().all(|&v| v == 0));
    }

    #[test]
    fn activity_polynomial_sample_consistency() {
        for n in [731u64, 775, 852, 870, 968, 2240] {
            let aut = decode(n);
            for s in 0..3 {
                let c = activity_class(&aut, s);
                match c.kind {
                    ActivityKind::Bounded => {
                        let max = *c.samples.iter().max().unwrap();
                        let tail = &c.samples[6..];
                        assert!(tail.iter().all(|&v| v <= max));
                    }
                    ActivityKind::Polynomial(deg) => {
                        // (deg+1)-st finite differences vanish on the tail
                        let mut diffs: Vec<i64> =
                            c.samples.iter().map(|&v| v as i64).collect();
                        for _ in 0..=deg {
                            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
                        }
                        assert!(diffs[diffs.len().saturating_sub(4)..]
                            .iter()
                            .all(|&v| v == 0));
                    }
                    ActivityKind::Exponential => {
                        assert!(c.samples.last().unwrap() > &(1 << 6));
                    }
                }
            }
        }
    }

    #[test]
    fn tile_graphs_of_the_adding_machine() {
        let NucleusOutcome::Found(nucleus) = nucleus_search(&adding_machine(), 64, 16) else {
            panic!("contracting");
        };
        let g1 = tile_graph(&nucleus, 1).unwrap();
        assert_eq!(g1.edges, vec![(0, 1)]);
        // level n: the odometer cycle on 2^n vertices
        for n in 2..=5 {
            let g = tile_graph(&nucleus, n).unwrap();
            assert_eq!(g.vertex_count, 1 << n);
            assert_eq!(g.edges.len(), 1 << n, "cycle has 2^n edges");
            let mut degree = vec![0usize; g.vertex_count];
            for &(u, v) in &g.edges {
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
            assert!(degree.iter().all(|&deg| deg == 2));
        }
    }

    #[test]
    fn trivial_tile_graph_is_edgeless() {
        let NucleusOutcome::Found(nucleus) = nucleus_search(&decode(1), 8, 4) else {
            panic!("trivial group is contracting");
        };
        assert_eq!(nucleus.size(), 1);
        for level in 0..4 {
            assert!(tile_graph(&nucleus, level).unwrap().edges.is_empty());
        }
    }
}
