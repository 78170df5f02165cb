//! Group-level computations: level-quotient orders through a stabilizer
//! chain, growth of the ball in the word metric, finiteness by closure,
//! relator search and verification, level transitivity, and the
//! self-replication check.

use crate::mealy::{Automaton, MealyError};
use crate::words::{
    self, generator_letters, is_identity_capped, is_identity_letters, reduce, reduce_push,
    ElementKey, GenWord, Machine, SignedLetter,
};
use num_bigint::BigUint;
use num_traits::One;
use std::collections::HashMap;

const LEVEL_DEGREE_CAP: usize = 1 << 12;

/// Closure node cap used by bulk searches before giving up on a word.
const SEARCH_NODE_CAP: usize = 1 << 22;

/// Three-valued answer for properties decided by bounded procedures.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThreeValued {
    Yes,
    No,
    Unknown,
}

/// Result of a bounded closure enumeration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupSize {
    Finite(u64),
    Unknown,
}

/// The permutation group induced on one tree level, held as a base and
/// strong generating set; the order is exact and arbitrary precision.
pub struct LevelGroup {
    level: usize,
    degree: usize,
    chain: Bsgs,
}

impl LevelGroup {
    /// Builds the stabilizer chain for the action of the automaton's states
    /// on level `n`. Vertices are indexed lexicographically, first letter
    /// most significant.
    pub fn compute(aut: &Automaton, n: usize) -> Result<Self, MealyError> {
        let degree = checked_degree(aut, n)?;
        let gens: Vec<Vec<u16>> = (0..aut.state_count())
            .map(|s| level_permutation(aut, &[(s + 1) as i8], n))
            .collect();
        Ok(LevelGroup {
            level: n,
            degree,
            chain: Bsgs::new(degree, gens),
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn base(&self) -> Vec<u16> {
        self.chain.points.clone()
    }

    pub fn contains(&self, perm: &[u16]) -> bool {
        self.chain.sift(perm.to_vec()).is_none()
    }
}

fn checked_degree(aut: &Automaton, n: usize) -> Result<usize, MealyError> {
    let d = aut.alphabet();
    let mut degree = 1usize;
    for _ in 0..n {
        degree = degree
            .checked_mul(d)
            .filter(|&v| v <= LEVEL_DEGREE_CAP)
            .ok_or(MealyError::LevelTooDeep { level: n })?;
    }
    Ok(degree)
}

/// Permutation induced by a word on level `n`. Vertex indices read the path
/// word as a base-d numeral, first letter most significant.
pub(crate) fn level_permutation(aut: &Automaton, w: &[SignedLetter], n: usize) -> Vec<u16> {
    fn fill(
        aut: &Automaton,
        w: &[SignedLetter],
        depth: usize,
        n: usize,
        src: usize,
        dst: usize,
        d: usize,
        perm: &mut [u16],
    ) {
        if depth == n {
            perm[src] = dst as u16;
            return;
        }
        let p = words::word_perm(aut, w);
        for x in 0..d {
            let y = p[x] as usize;
            let child = words::section_once(aut, w, x);
            fill(aut, &child, depth + 1, n, src * d + x, dst * d + y, d, perm);
        }
    }
    let d = aut.alphabet();
    let mut perm = vec![0u16; d.pow(n as u32)];
    fill(aut, &reduce(w.to_vec()), 0, n, 0, 0, d, &mut perm);
    perm
}

/// Order of the level-`n` permutation group, via the stabilizer chain.
pub fn level_quotient_order(aut: &Automaton, n: usize) -> Result<BigUint, MealyError> {
    Ok(LevelGroup::compute(aut, n)?.order())
}

/// Brute-force closure count of the level-n permutation group; the
/// independent oracle for the stabilizer chain. `None` when the cap is hit.
pub fn level_order_by_closure(aut: &Automaton, n: usize, cap: usize) -> Option<u64> {
    let degree = checked_degree(aut, n).ok()?;
    let gens: Vec<Vec<u16>> = (0..aut.state_count())
        .map(|s| level_permutation(aut, &[(s + 1) as i8], n))
        .collect();
    let identity: Vec<u16> = (0..degree as u16).collect();
    let mut seen = HashMap::new();
    seen.insert(identity.clone(), ());
    let mut frontier = vec![identity];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            for g in &gens {
                let q: Vec<u16> = p.iter().map(|&i| g[i as usize]).collect();
                if !seen.contains_key(&q) {
                    if seen.len() >= cap {
                        return None;
                    }
                    seen.insert(q.clone(), ());
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    Some(seen.len() as u64)
}

// --- stabilizer chain ---

/// Deterministic Schreier-Sims. Strong generators carry the index of the
/// deepest level whose base prefix they are known to fix, so the generator
/// set of level `i` is every strong generator with tag `>= i`; verification
/// walks the chain bottom-up and jumps back down whenever a sifted Schreier
/// generator lands as a new strong generator.
pub(crate) struct Bsgs {
    degree: usize,
    points: Vec<u16>,
    /// (permutation, tag): fixes the base points of levels `0..tag`
    strong: Vec<(Vec<u16>, usize)>,
    /// transversals[i][gamma] = Some(g) with g(points[i]) = gamma
    transversals: Vec<Vec<Option<Vec<u16>>>>,
}

impl Bsgs {
    pub fn new(degree: usize, gens: Vec<Vec<u16>>) -> Self {
        let mut chain = Bsgs {
            degree,
            points: Vec::new(),
            strong: Vec::new(),
            transversals: Vec::new(),
        };
        let mut deepest_change = None;
        for g in gens {
            if let Some(level) = chain.place(g, 0) {
                deepest_change = Some(deepest_change.map_or(level, |d: usize| d.max(level)));
            }
        }
        if deepest_change.is_some() {
            chain.complete();
        }
        chain
    }

    pub fn order(&self) -> BigUint {
        let mut order = BigUint::one();
        for t in &self.transversals {
            order *= BigUint::from(t.iter().filter(|e| e.is_some()).count());
        }
        order
    }

    /// Reduces the permutation through the chain; `None` means membership.
    pub fn sift(&self, mut perm: Vec<u16>) -> Option<Vec<u16>> {
        for i in 0..self.points.len() {
            let image = perm[self.points[i] as usize] as usize;
            match &self.transversals[i][image] {
                Some(t) => perm = compose(&invert_perm16(t), &perm),
                None => return Some(perm),
            }
        }
        if is_identity16(&perm) {
            None
        } else {
            Some(perm)
        }
    }

    /// Sifts from `start` and, if a nontrivial residue remains, stores it as
    /// a strong generator at the level where it got stuck (extending the
    /// base when it fixes every current base point). Returns that level.
    fn place(&mut self, perm: Vec<u16>, start: usize) -> Option<usize> {
        let mut residue = perm;
        let mut at = start;
        while at < self.points.len() {
            if is_identity16(&residue) {
                return None;
            }
            let image = residue[self.points[at] as usize] as usize;
            match &self.transversals[at][image] {
                Some(t) => {
                    residue = compose(&invert_perm16(t), &residue);
                    at += 1;
                }
                None => break,
            }
        }
        if is_identity16(&residue) {
            return None;
        }
        if at == self.points.len() {
            let point = residue
                .iter()
                .enumerate()
                .find(|(i, &y)| *i != y as usize)
                .map(|(i, _)| i as u16)
                .expect("non-identity permutation moves a point");
            self.points.push(point);
            self.transversals.push(vec![None; self.degree]);
        }
        self.strong.push((residue, at));
        self.rebuild_orbit(at);
        Some(at)
    }

    fn level_generators(&self, at: usize) -> Vec<Vec<u16>> {
        self.strong
            .iter()
            .filter(|(_, tag)| *tag >= at)
            .map(|(g, _)| g.clone())
            .collect()
    }

    fn rebuild_orbit(&mut self, at: usize) {
        let point = self.points[at];
        let gens = self.level_generators(at);
        let mut transversal: Vec<Option<Vec<u16>>> = vec![None; self.degree];
        transversal[point as usize] = Some((0..self.degree as u16).collect());
        let mut queue: Vec<u16> = vec![point];
        let mut head = 0;
        while head < queue.len() {
            let gamma = queue[head];
            head += 1;
            let t_gamma = transversal[gamma as usize].clone().expect("in orbit");
            for g in &gens {
                let image = g[gamma as usize] as usize;
                if transversal[image].is_none() {
                    transversal[image] = Some(compose(g, &t_gamma));
                    queue.push(image as u16);
                }
            }
        }
        self.transversals[at] = transversal;
    }

    /// Bottom-up verification: every Schreier generator of every level must
    /// sift to the identity through the deeper chain. A failed sift adds a
    /// strong generator and verification resumes at the level it landed on.
    fn complete(&mut self) {
        if self.points.is_empty() {
            return;
        }
        let mut level = self.points.len() - 1;
        'outer: loop {
            self.rebuild_orbit(level);
            let gens = self.level_generators(level);
            let point = self.points[level];
            // orbit points in transversal order
            let orbit: Vec<u16> = (0..self.degree as u16)
                .filter(|&gamma| self.transversals[level][gamma as usize].is_some())
                .collect();
            for &gamma in &orbit {
                let t_gamma = self.transversals[level][gamma as usize]
                    .clone()
                    .expect("in orbit");
                for g in &gens {
                    let image = g[gamma as usize] as usize;
                    let t_image = self.transversals[level][image]
                        .clone()
                        .expect("orbit is closed under the level generators");
                    // Schreier generator t_{g(gamma)}^-1 g t_gamma
                    let u = compose(&invert_perm16(&t_image), &compose(g, &t_gamma));
                    if is_identity16(&u) {
                        continue;
                    }
                    debug_assert_eq!(u[point as usize], point);
                    if let Some(new_level) = self.place(u, level + 1) {
                        level = new_level;
                        continue 'outer;
                    }
                }
            }
            if level == 0 {
                return;
            }
            level -= 1;
        }
    }
}

fn compose(outer: &[u16], inner: &[u16]) -> Vec<u16> {
    inner.iter().map(|&x| outer[x as usize]).collect()
}

fn invert_perm16(p: &[u16]) -> Vec<u16> {
    let mut inv = vec![0u16; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y as usize] = x as u16;
    }
    inv
}

fn is_identity16(p: &[u16]) -> bool {
    p.iter().enumerate().all(|(i, &y)| i == y as usize)
}

// --- growth and finiteness ---

/// Ball sizes of the group in the word metric of the symmetric generating
/// set (states and their inverses, duplicates collapsed by equality).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRecord {
    pub radius: usize,
    pub counts: Vec<BigUint>,
}

/// Distinct generator machines: one per distinct nontrivial element among
/// the states and their inverses.
fn distinct_generator_machines(aut: &Automaton) -> Vec<Machine> {
    let mut seen: HashMap<ElementKey, ()> = HashMap::new();
    seen.insert(Machine::from_letters(aut, &[]).key(), ());
    let mut gens = Vec::new();
    for l in generator_letters(aut) {
        let machine = Machine::from_letters(aut, &[l]);
        let key = machine.key();
        if !seen.contains_key(&key) {
            seen.insert(key, ());
            gens.push(machine);
        }
    }
    gens
}

/// Breadth-first growth of the ball, with exact element equality. Elements
/// ride as canonical section machines, which stay small even when the
/// shortest representing words get long.
pub fn growth_sequence(aut: &Automaton, radius: usize) -> GrowthRecord {
    let gens = distinct_generator_machines(aut);
    let identity = Machine::from_letters(aut, &[]);
    let mut elements: HashMap<ElementKey, ()> = HashMap::new();
    elements.insert(identity.key(), ());
    let mut counts = vec![BigUint::one()];
    let mut frontier: Vec<Machine> = vec![identity];
    for _ in 0..radius {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let cand = m.product(g);
                let key = cand.key();
                if !elements.contains_key(&key) {
                    elements.insert(key, ());
                    next.push(cand);
                }
            }
        }
        frontier = next;
        counts.push(BigUint::from(elements.len()));
    }
    GrowthRecord { radius, counts }
}

/// Exact group order when the closure completes within `cap` elements.
pub fn enumerate_if_finite(aut: &Automaton, cap: u64) -> GroupSize {
    assert!(cap >= 1);
    let gens = distinct_generator_machines(aut);
    let identity = Machine::from_letters(aut, &[]);
    let mut elements: HashMap<ElementKey, ()> = HashMap::new();
    elements.insert(identity.key(), ());
    let mut frontier: Vec<Machine> = vec![identity];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let cand = m.product(g);
                let key = cand.key();
                if !elements.contains_key(&key) {
                    if elements.len() as u64 >= cap {
                        return GroupSize::Unknown;
                    }
                    elements.insert(key, ());
                    next.push(cand);
                }
            }
        }
        frontier = next;
    }
    GroupSize::Finite(elements.len() as u64)
}

/// A word is a relator iff it represents the identity.
pub fn verify_relator(w: &GenWord<'_>) -> bool {
    w.is_identity()
}

/// All identity words of length at most `radius` that do not reduce to
/// previously found relators under bounded rewriting by their cyclic
/// conjugates. The independence filter is greedy and incomplete by design;
/// everything returned is a genuine relator.
pub fn relator_search(aut: &Automaton, radius: usize) -> Vec<GenWord<'_>> {
    assert!(radius >= 1);
    let mut found: Vec<Vec<SignedLetter>> = Vec::new();
    let mut words_by_len: Vec<Vec<SignedLetter>> = vec![Vec::new()];
    for _ in 1..=radius {
        let mut next = Vec::new();
        for w in &words_by_len {
            for &l in &letter_order(aut) {
                if w.last() == Some(&-l) {
                    continue;
                }
                let mut cand = w.clone();
                cand.push(l);
                next.push(cand);
            }
        }
        for cand in &next {
            if is_identity_capped(aut, cand, SEARCH_NODE_CAP) == Some(true)
                && !reduces_to_known(cand, &found)
            {
                found.push(cand.clone());
            }
        }
        words_by_len = next;
    }
    found
        .into_iter()
        .map(|w| GenWord::from_letters(aut, w))
        .collect()
}

/// Deterministic letter order a < a^-1 < b < b^-1 < ...
fn letter_order(aut: &Automaton) -> Vec<SignedLetter> {
    generator_letters(aut)
}

/// Bounded search: can `w` be shrunk to the empty word by inserting cyclic
/// rotations of known relators (or their inverses) and freely reducing,
/// never letting the word grow?
fn reduces_to_known(w: &[SignedLetter], found: &[Vec<SignedLetter>]) -> bool {
    if found.is_empty() {
        return false;
    }
    let mut rotations: Vec<Vec<SignedLetter>> = Vec::new();
    for r in found {
        for base in [r.clone(), words::invert(r)] {
            for k in 0..base.len().max(1) {
                let mut rot = base[k..].to_vec();
                rot.extend_from_slice(&base[..k]);
                let rot = reduce(rot);
                if !rot.is_empty() && !rotations.contains(&rot) {
                    rotations.push(rot);
                }
            }
        }
    }
    let cap = 4096;
    let mut seen: HashMap<Vec<SignedLetter>, ()> = HashMap::new();
    let start = w.to_vec();
    seen.insert(start.clone(), ());
    let mut queue = vec![start];
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head].clone();
        head += 1;
        if cur.is_empty() {
            return true;
        }
        for rot in &rotations {
            for pos in 0..=cur.len() {
                let mut cand = Vec::with_capacity(cur.len() + rot.len());
                cand.extend_from_slice(&cur[..pos]);
                cand.extend_from_slice(rot);
                cand.extend_from_slice(&cur[pos..]);
                let cand = reduce(cand);
                if cand.len() <= cur.len() && !seen.contains_key(&cand) {
                    if seen.len() >= cap {
                        return false;
                    }
                    seen.insert(cand.clone(), ());
                    queue.push(cand);
                }
            }
        }
    }
    false
}

/// Level transitivity of the whole group, by the element series test, the
/// per-level orbit computation and the finiteness criterion (a self-similar
/// group of binary tree automorphisms is level transitive iff infinite).
pub fn group_level_transitive(aut: &Automaton, depth: usize) -> ThreeValued {
    assert_eq!(aut.alphabet(), 2);
    let depth = depth.clamp(1, 12);
    // per-level transitivity of the group action
    for n in 1..=depth {
        if !level_transitive_at(aut, n) {
            return ThreeValued::No;
        }
    }
    // transitive element among short products
    let gens = generator_letters(aut);
    let mut frontier: Vec<Vec<SignedLetter>> = vec![Vec::new()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in &gens {
                let cand = reduce_push(w, g);
                if cand.len() <= w.len() {
                    continue;
                }
                let word = GenWord::from_letters(aut, cand.clone());
                if crate::series::transitivity_series(&word).is_geometric() {
                    return ThreeValued::Yes;
                }
                next.push(cand);
            }
        }
        frontier = next;
    }
    if let GroupSize::Finite(_) = enumerate_if_finite(aut, 10_000) {
        return ThreeValued::No;
    }
    // all checked levels transitive and no finite order within the cap
    ThreeValued::Yes
}

fn level_transitive_at(aut: &Automaton, n: usize) -> bool {
    let Ok(degree) = checked_degree(aut, n) else {
        return true;
    };
    let gens: Vec<Vec<u16>> = (0..aut.state_count())
        .map(|s| level_permutation(aut, &[(s + 1) as i8], n))
        .collect();
    let mut seen = vec![false; degree];
    seen[0] = true;
    let mut stack = vec![0u16];
    let mut count = 1usize;
    while let Some(v) = stack.pop() {
        for g in &gens {
            let u = g[v as usize];
            if !seen[u as usize] {
                seen[u as usize] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == degree
}

/// Self-replication check at the leftmost level-1 vertex.
///
/// Forms Schreier generators of the level-1 stabilizer from a transversal of
/// the orbit of vertex 0, projects them at 0 to generators of a subgroup
/// `H <= G`, then answers `Yes` when every automaton state equals a product
/// of at most `radius` projected generators, `No` when the images of `H`
/// and `G` in some level-k quotient (k <= depth) have different orders, and
/// `Unknown` otherwise. For level-transitive groups the vertex-0 projection
/// settles every vertex.
pub fn self_replicating_check(aut: &Automaton, radius: usize, depth: usize) -> ThreeValued {
    assert_eq!(aut.alphabet(), 2);
    let gens = generator_letters(aut);
    // orbit of vertex 0 on level 1 with transversal words
    let mut transversal: [Option<Vec<SignedLetter>>; 2] = [Some(Vec::new()), None];
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        let t_x = transversal[x].clone().expect("in orbit");
        for &g in &gens {
            let image = words::act(aut, &[g], &[x as u8])[0] as usize;
            if transversal[image].is_none() {
                let mut w = vec![g];
                w.extend_from_slice(&t_x);
                transversal[image] = Some(reduce(w));
                queue.push(image);
            }
        }
    }
    // Schreier generators of Stab(0), projected at vertex 0
    let mut proj: Vec<Vec<SignedLetter>> = Vec::new();
    let mut proj_keys: HashMap<ElementKey, ()> = HashMap::new();
    for x in 0..2usize {
        let Some(t_x) = &transversal[x] else { continue };
        for &g in &gens {
            let image = words::act(aut, &[g], &[x as u8])[0] as usize;
            let Some(t_img) = &transversal[image] else {
                continue;
            };
            let mut u = words::invert(t_img);
            u.push(g);
            u.extend_from_slice(t_x);
            let u = reduce(u);
            debug_assert_eq!(words::act(aut, &u, &[0]), vec![0]);
            let section = words::section_once(aut, &u, 0);
            if is_identity_letters(aut, &section) {
                continue;
            }
            let key = words::element_key(aut, &section);
            if !proj_keys.contains_key(&key) {
                proj_keys.insert(key, ());
                proj.push(section);
            }
        }
    }
    // No: the projections generate a strictly smaller level-k quotient
    for k in 1..=depth {
        if checked_degree(aut, k).is_err() {
            break;
        }
        let g_perms: Vec<Vec<u16>> = (0..aut.state_count())
            .map(|s| level_permutation(aut, &[(s + 1) as i8], k))
            .collect();
        let h_perms: Vec<Vec<u16>> = proj
            .iter()
            .map(|w| level_permutation(aut, w, k))
            .collect();
        let degree = 1usize << k;
        let g_order = Bsgs::new(degree, g_perms).order();
        let h_order = Bsgs::new(degree, h_perms).order();
        if h_order < g_order {
            return ThreeValued::No;
        }
    }
    // Yes: every state is a bounded product of projected generators
    let identity = Machine::from_letters(aut, &[]);
    let identity_key = identity.key();
    let mut targets: Vec<(ElementKey, bool)> = (0..aut.state_count())
        .map(|s| {
            let key = Machine::from_letters(aut, &[(s + 1) as i8]).key();
            let hit = key == identity_key;
            (key, hit)
        })
        .collect();
    let mut seen: HashMap<ElementKey, ()> = HashMap::new();
    seen.insert(identity_key, ());
    let mut frontier: Vec<Machine> = vec![identity];
    let alphabet: Vec<Machine> = proj
        .iter()
        .map(|w| Machine::from_letters(aut, w))
        .flat_map(|m| {
            let inv = m.inverse();
            [m, inv]
        })
        .collect();
    for _ in 0..radius {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &alphabet {
                let cand = m.product(g);
                let key = cand.key();
                if seen.contains_key(&key) {
                    continue;
                }
                for (target, hit) in targets.iter_mut() {
                    if *target == key {
                        *hit = true;
                    }
                }
                seen.insert(key, ());
                next.push(cand);
            }
        }
        if targets.iter().all(|(_, hit)| *hit) {
            return ThreeValued::Yes;
        }
        frontier = next;
    }
    if targets.iter().all(|(_, hit)| *hit) {
        return ThreeValued::Yes;
    }
    ThreeValued::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decode(n: u64) -> Automaton {
        Automaton::decode_number(n).unwrap()
    }

    fn exponents(aut: &Automaton, levels: usize) -> Vec<u64> {
        (0..=levels)
            .map(|n| {
                let ord = level_quotient_order(aut, n).unwrap();
                assert_eq!(ord.count_ones(), 1, "order must be a power of two");
                ord.trailing_zeros().unwrap_or(0)
            })
            .collect()
    }

    #[test]
    fn sf_rows_for_731_and_2240() {
        assert_eq!(exponents(&decode(731), 8), vec![0, 1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(exponents(&decode(2240), 6), vec![0, 1, 2, 4, 7, 10, 14]);
        assert_eq!(exponents(&decode(1), 4), vec![0, 0, 0, 0, 0]);
    }

    #[test]
    fn stabilizer_chain_matches_closure_oracle() {
        for n in [1u64, 730, 731, 820, 2240, 748, 852] {
            let aut = decode(n);
            for level in 0..=4 {
                if let Some(count) = level_order_by_closure(&aut, level, 10_000) {
                    assert_eq!(
                        level_quotient_order(&aut, level).unwrap(),
                        BigUint::from(count),
                        "automaton {n} level {level}"
                    );
                }
            }
        }
    }

    #[test]
    fn level_guard() {
        assert!(matches!(
            level_quotient_order(&decode(731), 13),
            Err(MealyError::LevelTooDeep { .. })
        ));
    }

    #[test]
    fn growth_rows() {
        let growth = growth_sequence(&decode(731), 3);
        let expect: Vec<BigUint> = [1u32, 5, 9, 13].iter().map(|&v| v.into()).collect();
        assert_eq!(growth.counts, expect);
        let growth = growth_sequence(&decode(820), 3);
        let expect: Vec<BigUint> = [1u32, 3, 5, 7].iter().map(|&v| v.into()).collect();
        assert_eq!(growth.counts, expect);
        let growth = growth_sequence(&decode(1), 5);
        assert_eq!(growth.counts, vec![BigUint::one(); 6]);
    }

    #[test]
    fn finite_orders() {
        assert_eq!(enumerate_if_finite(&decode(748), 100), GroupSize::Finite(16));
        assert_eq!(enumerate_if_finite(&decode(802), 100), GroupSize::Finite(8));
        assert_eq!(enumerate_if_finite(&decode(731), 100), GroupSize::Unknown);
    }

    #[test]
    fn growth_stabilizes_at_group_order() {
        let GroupSize::Finite(order) = enumerate_if_finite(&decode(748), 100) else {
            panic!("748 is finite");
        };
        let growth = growth_sequence(&decode(748), 8);
        assert_eq!(growth.counts.last().unwrap(), &BigUint::from(order));
    }

    #[test]
    fn relator_searches() {
        let aut = decode(731);
        let found: Vec<String> = relator_search(&aut, 3).iter().map(|w| w.to_string()).collect();
        assert!(found.contains(&"Bc".to_string()) || found.contains(&"bC".to_string()));
        // ba^2 is reported through its lexicographically first rotation
        assert!(found.contains(&"aab".to_string()));
        for w in relator_search(&aut, 3) {
            assert!(verify_relator(&w));
        }
        // free group of rank 3: no relators at all
        assert!(relator_search(&decode(2240), 6).is_empty());
        // trivial group: every generator is a relator
        let ones: Vec<String> = relator_search(&decode(1), 1).iter().map(|w| w.to_string()).collect();
        assert_eq!(ones, vec!["a", "b", "c"]);
    }

    #[test]
    fn transitivity_verdicts() {
        assert_eq!(group_level_transitive(&decode(731), 6), ThreeValued::Yes);
        assert_eq!(group_level_transitive(&decode(748), 6), ThreeValued::No);
        assert_eq!(group_level_transitive(&decode(1), 6), ThreeValued::No);
    }

    #[test]
    fn self_replication_verdicts() {
        assert_eq!(self_replicating_check(&decode(731), 5, 6), ThreeValued::Yes);
        assert_eq!(self_replicating_check(&decode(730), 5, 6), ThreeValued::No);
        assert_eq!(self_replicating_check(&decode(2240), 5, 6), ThreeValued::No);
    }
}
