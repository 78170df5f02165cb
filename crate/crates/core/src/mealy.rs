//! Finite invertible Mealy automata: representation, the 1..5832 numbering of
//! three-state binary automata, inversion, duality, minimization and symmetry
//! reduction down to the 194 minimal-symmetry classes.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Number of invertible automata with 3 states over 2 letters.
pub const THREE_STATE_BINARY_COUNT: u64 = 5832;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MealyError {
    #[error("automaton number {0} out of range 1..=5832")]
    NumberOutOfRange(u64),
    #[error("operation requires a 3-state automaton over 2 letters, got {states} states over {letters} letters")]
    WrongShape { states: usize, letters: usize },
    #[error("state {state}: output row is not a permutation of the alphabet")]
    OutputNotPermutation { state: usize },
    #[error("state {state}: transition on letter {letter} targets invalid state {target}")]
    BadTransition { state: usize, letter: usize, target: usize },
    #[error("alphabet must have at least 2 letters")]
    AlphabetTooSmall,
    #[error("automaton must have at least 1 state")]
    NoStates,
    #[error("level {level} exceeds the d^n <= 4096 resource guard")]
    LevelTooDeep { level: usize },
}

/// An invertible Mealy machine: per-state output permutations of the
/// alphabet `{0..d-1}` and per-state, per-letter transitions.
///
/// Each state acts on the d-ary rooted tree by `s(xw) = out(s,x) next(s,x)(w)`.
/// Values are immutable after construction and safe to share across threads.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Automaton {
    d: u8,
    output: Vec<Vec<u8>>,
    transition: Vec<Vec<u8>>,
    labels: Option<Vec<String>>,
}

impl Automaton {
    pub fn new(
        d: usize,
        output: Vec<Vec<u8>>,
        transition: Vec<Vec<u8>>,
    ) -> Result<Self, MealyError> {
        if d < 2 {
            return Err(MealyError::AlphabetTooSmall);
        }
        if output.is_empty() || output.len() != transition.len() {
            return Err(MealyError::NoStates);
        }
        let m = output.len();
        for (s, row) in output.iter().enumerate() {
            let mut seen = vec![false; d];
            if row.len() != d {
                return Err(MealyError::OutputNotPermutation { state: s });
            }
            for &y in row {
                if (y as usize) >= d || seen[y as usize] {
                    return Err(MealyError::OutputNotPermutation { state: s });
                }
                seen[y as usize] = true;
            }
        }
        for (s, row) in transition.iter().enumerate() {
            for (x, &t) in row.iter().enumerate() {
                if row.len() != d || (t as usize) >= m {
                    return Err(MealyError::BadTransition {
                        state: s,
                        letter: x,
                        target: t as usize,
                    });
                }
            }
        }
        Ok(Automaton {
            d: d as u8,
            output,
            transition,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.state_count());
        self.labels = Some(labels);
        self
    }

    pub fn alphabet(&self) -> usize {
        self.d as usize
    }

    pub fn state_count(&self) -> usize {
        self.output.len()
    }

    /// Image of letter `x` under the output permutation of state `s`.
    pub fn output(&self, s: usize, x: usize) -> usize {
        self.output[s][x] as usize
    }

    /// Next state after reading letter `x` in state `s` (the section of `s` at `x`).
    pub fn next(&self, s: usize, x: usize) -> usize {
        self.transition[s][x] as usize
    }

    pub fn output_perm(&self, s: usize) -> &[u8] {
        &self.output[s]
    }

    /// A state is active when its output permutation is nontrivial.
    pub fn is_active(&self, s: usize) -> bool {
        self.output[s].iter().enumerate().any(|(x, &y)| x != y as usize)
    }

    pub fn label(&self, s: usize) -> String {
        if let Some(ls) = &self.labels {
            return ls[s].clone();
        }
        default_label(s)
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.state_count()).map(|s| self.label(s)).collect()
    }

    /// Decodes an automaton number in `1..=5832` into the corresponding
    /// 3-state binary automaton. The number is `1 +` the mixed-radix value of
    /// the six transition digits (base 3, least significant first) followed
    /// by the three activity bits.
    pub fn decode_number(n: u64) -> Result<Self, MealyError> {
        if !(1..=THREE_STATE_BINARY_COUNT).contains(&n) {
            return Err(MealyError::NumberOutOfRange(n));
        }
        let mut v = n - 1;
        let mut digits = [0u8; 6];
        for d in digits.iter_mut() {
            *d = (v % 3) as u8;
            v /= 3;
        }
        let act = v;
        let mut output = Vec::with_capacity(3);
        let mut transition = Vec::with_capacity(3);
        for s in 0..3 {
            if act >> s & 1 == 1 {
                output.push(vec![1, 0]);
            } else {
                output.push(vec![0, 1]);
            }
            transition.push(vec![digits[2 * s], digits[2 * s + 1]]);
        }
        Ok(Automaton {
            d: 2,
            output,
            transition,
            labels: Some(vec!["a".into(), "b".into(), "c".into()]),
        })
    }

    /// Inverse of [`Automaton::decode_number`].
    pub fn encode_number(&self) -> Result<u64, MealyError> {
        if self.d != 2 || self.state_count() != 3 {
            return Err(MealyError::WrongShape {
                states: self.state_count(),
                letters: self.alphabet(),
            });
        }
        let mut act = 0u64;
        let mut v = 0u64;
        for s in (0..3).rev() {
            act = act * 2 + u64::from(self.is_active(s));
            v = v * 3 + self.transition[s][1] as u64;
            v = v * 3 + self.transition[s][0] as u64;
        }
        Ok(v + 729 * act + 1)
    }

    /// The automaton whose states act as the inverses of this one's states.
    /// State `s` of the result has the inverted output permutation, and its
    /// section at `x` is the inverse-state of `next(s, out(s)^{-1}(x))`.
    pub fn invert(&self) -> Automaton {
        let d = self.alphabet();
        let m = self.state_count();
        let mut output = Vec::with_capacity(m);
        let mut transition = Vec::with_capacity(m);
        for s in 0..m {
            let inv = invert_perm(&self.output[s]);
            let tr = (0..d)
                .map(|x| self.transition[s][inv[x] as usize])
                .collect();
            output.push(inv);
            transition.push(tr);
        }
        Automaton {
            d: self.d,
            output,
            transition,
            labels: self.labels.clone(),
        }
    }

    /// The dual machine: states and letters exchange roles, and the output
    /// and transition maps swap. Returns `None` when the dual is not
    /// invertible, i.e. some letter's induced map on states is not a bijection.
    pub fn dual(&self) -> Option<Automaton> {
        let d = self.alphabet();
        let m = self.state_count();
        let mut output = Vec::with_capacity(d);
        let mut transition = Vec::with_capacity(d);
        for x in 0..d {
            let out: Vec<u8> = (0..m).map(|q| self.transition[q][x]).collect();
            let mut seen = vec![false; m];
            for &y in &out {
                if seen[y as usize] {
                    return None;
                }
                seen[y as usize] = true;
            }
            let tr: Vec<u8> = (0..m).map(|q| self.output[q][x]).collect();
            output.push(out);
            transition.push(tr);
        }
        if m < 2 {
            // A 1-state machine dualizes to a machine over a 1-letter
            // alphabet, which falls outside the d >= 2 representation.
            return None;
        }
        Some(Automaton {
            d: m as u8,
            output,
            transition,
            labels: None,
        })
    }

    /// True when both the dual and the dual of the inverse are invertible.
    pub fn is_fully_invertible(&self) -> bool {
        self.dual().is_some() && self.invert().dual().is_some()
    }

    /// True when state `s` defines the identity tree automorphism, i.e.
    /// every state reachable from `s` is inactive.
    pub fn defines_identity(&self, s: usize) -> bool {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(q) = stack.pop() {
            if self.is_active(q) {
                return false;
            }
            for x in 0..self.alphabet() {
                let t = self.next(q, x);
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        true
    }

    /// Partition refinement: states merged iff they have the same output
    /// permutation and their transitions stay equivalent at every stage.
    /// Two states end in one class exactly when they define the same tree
    /// automorphism.
    fn state_partition(&self) -> Vec<usize> {
        let m = self.state_count();
        let d = self.alphabet();
        let mut part: Vec<usize> = {
            let mut ids: BTreeMap<&[u8], usize> = BTreeMap::new();
            let mut next = 0;
            (0..m)
                .map(|s| {
                    *ids.entry(&self.output[s]).or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        loop {
            let mut ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next = 0;
            let refined: Vec<usize> = (0..m)
                .map(|s| {
                    let sig = (
                        part[s],
                        (0..d).map(|x| part[self.next(s, x)]).collect::<Vec<_>>(),
                    );
                    *ids.entry(sig).or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect();
            if refined == part {
                return part;
            }
            part = refined;
        }
    }

    /// Minimized machine. States are renumbered canonically: breadth-first
    /// from the class of state 0 (children in letter order), then any
    /// classes not reachable that way, in original state order. Labels carry
    /// over from the first original state of each class.
    pub fn minimize(&self) -> Automaton {
        let part = self.state_partition();
        let m = self.state_count();
        let d = self.alphabet();
        let class_count = part.iter().max().unwrap() + 1;
        let mut class_rep = vec![usize::MAX; class_count];
        for s in 0..m {
            if class_rep[part[s]] == usize::MAX {
                class_rep[part[s]] = s;
            }
        }
        let mut order = Vec::with_capacity(class_count);
        let mut seen = vec![false; class_count];
        let bfs = |start: usize, order: &mut Vec<usize>, seen: &mut Vec<bool>| {
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(start);
            seen[start] = true;
            while let Some(c) = queue.pop_front() {
                order.push(c);
                let s = class_rep[c];
                for x in 0..d {
                    let nc = part[self.next(s, x)];
                    if !seen[nc] {
                        seen[nc] = true;
                        queue.push_back(nc);
                    }
                }
            }
        };
        bfs(part[0], &mut order, &mut seen);
        for s in 0..m {
            if !seen[part[s]] {
                bfs(part[s], &mut order, &mut seen);
            }
        }
        let mut new_id = vec![0usize; class_count];
        for (i, &c) in order.iter().enumerate() {
            new_id[c] = i;
        }
        let output = order
            .iter()
            .map(|&c| self.output[class_rep[c]].clone())
            .collect();
        let transition = order
            .iter()
            .map(|&c| {
                (0..d)
                    .map(|x| new_id[part[self.next(class_rep[c], x)]] as u8)
                    .collect()
            })
            .collect();
        let labels = order.iter().map(|&c| self.label(class_rep[c])).collect();
        Automaton {
            d: self.d,
            output,
            transition,
            labels: Some(labels),
        }
    }

    /// Structural classification flags read off the Moore diagram.
    pub fn structural_flags(&self) -> StructuralFlags {
        let m = self.state_count();
        let trivial: Vec<usize> = (0..m).filter(|&s| self.defines_identity(s)).collect();
        let open_set = trivial.iter().any(|&t| {
            (0..m).all(|s| self.reaches(s, t))
        });
        StructuralFlags {
            has_trivial_state: !trivial.is_empty(),
            open_set_condition: open_set,
            strongly_connected: self.is_strongly_connected(),
            dual_invertible: self.dual().is_some(),
            fully_invertible: self.is_fully_invertible(),
        }
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(q) = stack.pop() {
            if q == to {
                return true;
            }
            for x in 0..self.alphabet() {
                let t = self.next(q, x);
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        false
    }

    fn is_strongly_connected(&self) -> bool {
        let m = self.state_count();
        (0..m).all(|s| (0..m).all(|t| self.reaches(s, t)))
    }

    /// Minimal-symmetry canonical form: minimize, then take the least
    /// machine over all symmetry operations. For machines of 3 states over
    /// 2 letters the ordering is by automaton number, and that least number
    /// is returned; classes reducing below 3 states return `None`.
    pub fn symmetry_class(&self) -> (Automaton, Option<u64>) {
        let min = mirror_normalize(self.minimize());
        if min.alphabet() == 2 && min.state_count() == 3 {
            let number = SymmetryOp::all(3, 2)
                .iter()
                .map(|op| op.apply(&min).encode_number().expect("3-state binary"))
                .min()
                .expect("orbit is nonempty");
            let canon = Automaton::decode_number(number).expect("in range");
            (canon, Some(number))
        } else {
            (canonical_under_symmetry(&min), None)
        }
    }

    /// Flat encoding used to compare machines of equal shape.
    fn machine_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(2 + 2 * self.state_count() * self.alphabet());
        key.push(self.state_count() as u8);
        key.push(self.d);
        for s in 0..self.state_count() {
            key.extend_from_slice(&self.output[s]);
            key.extend_from_slice(&self.transition[s]);
        }
        key
    }
}

impl fmt::Display for Automaton {
    /// Wreath-recursion text, e.g. `a = s(b, a), b = (a, a), c = (a, a)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in 0..self.state_count() {
            if s > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} = ", self.label(s))?;
            if self.is_active(s) {
                write!(f, "{}", perm_cycles(&self.output[s]))?;
            }
            write!(f, "(")?;
            for x in 0..self.alphabet() {
                if x > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.label(self.next(s, x)))?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn default_label(s: usize) -> String {
    if s < 26 {
        ((b'a' + s as u8) as char).to_string()
    } else {
        format!("s{s}")
    }
}

pub(crate) fn invert_perm(p: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y as usize] = x as u8;
    }
    inv
}

/// Cycle notation of a permutation, `"1"` for the identity: e.g. `"(01)"`.
pub(crate) fn perm_cycles(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        loop {
            seen[x] = true;
            out.push_str(&x.to_string());
            x = p[x] as usize;
            if x == start {
                break;
            }
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// One symmetry operation: optional generator inversion composed with a
/// relabeling of states and of alphabet letters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymmetryOp {
    pub invert: bool,
    pub state_perm: Vec<u8>,
    pub letter_perm: Vec<u8>,
}

impl SymmetryOp {
    pub fn identity(m: usize, d: usize) -> Self {
        SymmetryOp {
            invert: false,
            state_perm: (0..m as u8).collect(),
            letter_perm: (0..d as u8).collect(),
        }
    }

    /// All symmetry operations for machines with `m` states over `d`
    /// letters: `2 * m! * d!` of them (24 for m = 3, d = 2).
    pub fn all(m: usize, d: usize) -> Vec<SymmetryOp> {
        let mut ops = Vec::new();
        for invert in [false, true] {
            for sp in permutations(m) {
                for lp in permutations(d) {
                    ops.push(SymmetryOp {
                        invert,
                        state_perm: sp.clone(),
                        letter_perm: lp,
                    });
                }
            }
        }
        ops
    }

    /// Applies the operation: generator inversion first, then relabeling.
    /// `state_perm[s]` is the new index of old state `s`, likewise letters.
    pub fn apply(&self, aut: &Automaton) -> Automaton {
        debug_assert_eq!(self.state_perm.len(), aut.state_count());
        debug_assert_eq!(self.letter_perm.len(), aut.alphabet());
        let base = if self.invert { aut.invert() } else { aut.clone() };
        let m = base.state_count();
        let d = base.alphabet();
        let inv_sp = invert_perm(&self.state_perm);
        let inv_lp = invert_perm(&self.letter_perm);
        let mut output = Vec::with_capacity(m);
        let mut transition = Vec::with_capacity(m);
        for ns in 0..m {
            let s = inv_sp[ns] as usize;
            let out = (0..d)
                .map(|y| self.letter_perm[base.output(s, inv_lp[y] as usize)])
                .collect();
            let tr = (0..d)
                .map(|y| self.state_perm[base.next(s, inv_lp[y] as usize)])
                .collect();
            output.push(out);
            transition.push(tr);
        }
        Automaton {
            d: base.d,
            output,
            transition,
            labels: None,
        }
    }

    /// `self.compose(other)` acts like applying `other` first, then `self`.
    pub fn compose(&self, other: &SymmetryOp) -> SymmetryOp {
        // Inversion commutes with relabeling, so the flags simply xor.
        let sp = compose_perms(&self.state_perm, &other.state_perm);
        let lp = compose_perms(&self.letter_perm, &other.letter_perm);
        SymmetryOp {
            invert: self.invert ^ other.invert,
            state_perm: sp,
            letter_perm: lp,
        }
    }
}

fn compose_perms(second: &[u8], first: &[u8]) -> Vec<u8> {
    first.iter().map(|&x| second[x as usize]).collect()
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut items: Vec<u8> = (0..n as u8).collect();
    heap_permute(&mut items, n, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// The single-state all-active machine is classed together with the
/// two-state flip-plus-trivial machine: both define the order-2 automorphism
/// that flips every letter, and the classification tables keep them in one
/// class.
fn mirror_normalize(min: Automaton) -> Automaton {
    if min.alphabet() == 2 && min.state_count() == 1 && min.is_active(0) {
        return Automaton {
            d: 2,
            output: vec![vec![1, 0], vec![0, 1]],
            transition: vec![vec![0, 0], vec![1, 1]],
            labels: None,
        };
    }
    min
}

fn canonical_under_symmetry(min: &Automaton) -> Automaton {
    let ops = SymmetryOp::all(min.state_count(), min.alphabet());
    let mut best: Option<(Vec<u8>, Automaton)> = None;
    for op in &ops {
        let cand = op.apply(min);
        let key = cand.machine_key();
        match &best {
            Some((bk, _)) if *bk <= key => {}
            _ => best = Some((key, cand)),
        }
    }
    best.expect("symmetry orbit is nonempty").1
}

/// Minimal-symmetry classes of all 5832 three-state binary automata.
#[derive(Clone, Debug)]
pub struct ClassTable {
    class_rep: Vec<u32>,
    reduced_state_count: BTreeMap<u32, usize>,
}

impl ClassTable {
    /// Smallest automaton number in the class of `n`.
    pub fn representative(&self, n: u64) -> u32 {
        self.class_rep[n as usize]
    }

    /// Map from class representative to the state count of the minimized
    /// representative machine.
    pub fn reduced_state_count(&self) -> &BTreeMap<u32, usize> {
        &self.reduced_state_count
    }

    pub fn representatives(&self) -> Vec<u32> {
        self.reduced_state_count.keys().copied().collect()
    }

    pub fn class_count(&self) -> usize {
        self.reduced_state_count.len()
    }

    /// Number of classes whose minimized machine has fewer than 3 states.
    pub fn reduced_below_three(&self) -> usize {
        self.reduced_state_count.values().filter(|&&m| m < 3).count()
    }
}

/// Runs the symmetry classification over all 5832 automata.
pub fn classify_all() -> ClassTable {
    let keyed: Vec<(Vec<u8>, u32, usize)> = (1..=THREE_STATE_BINARY_COUNT)
        .into_par_iter()
        .map(|n| {
            let aut = Automaton::decode_number(n).expect("in range");
            let reduced = aut.minimize().state_count();
            let (canon, _) = aut.symmetry_class();
            (canon.machine_key(), n as u32, reduced)
        })
        .collect();
    let mut groups: BTreeMap<Vec<u8>, (u32, usize)> = BTreeMap::new();
    for (key, n, reduced) in &keyed {
        let entry = groups.entry(key.clone()).or_insert((*n, *reduced));
        if *n < entry.0 {
            entry.0 = *n;
        }
    }
    let mut class_rep = vec![0u32; THREE_STATE_BINARY_COUNT as usize + 1];
    let mut reduced_state_count = BTreeMap::new();
    for (key, n, _) in &keyed {
        let (rep, reduced) = groups[key];
        class_rep[*n as usize] = rep;
        reduced_state_count.insert(rep, reduced);
    }
    ClassTable {
        class_rep,
        reduced_state_count,
    }
}

/// Structural flags read from the Moore diagram and the dual machine.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct StructuralFlags {
    pub has_trivial_state: bool,
    pub open_set_condition: bool,
    pub strongly_connected: bool,
    pub dual_invertible: bool,
    pub fully_invertible: bool,
}

/// Count of invertible (m, n)-automata: `m^(mn) * (n!)^m`.
pub fn invertible_automaton_count(m: u32, n: u32) -> BigUint {
    let mut fact = BigUint::one();
    for k in 2..=n {
        fact *= BigUint::from(k);
    }
    BigUint::from(m).pow(m * n) * fact.pow(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adding_machine() -> Automaton {
        Automaton::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 1]])
            .unwrap()
            .with_labels(vec!["a".into(), "e".into()])
    }

    #[test]
    fn decode_spot_values() {
        let a1 = Automaton::decode_number(1).unwrap();
        assert!((0..3).all(|s| !a1.is_active(s)));
        assert!((0..3).all(|s| (0..2).all(|x| a1.next(s, x) == 0)));

        // 731: a = s(b, a), b = (a, a), c = (a, a)
        let a731 = Automaton::decode_number(731).unwrap();
        assert!(a731.is_active(0) && !a731.is_active(1) && !a731.is_active(2));
        assert_eq!((a731.next(0, 0), a731.next(0, 1)), (1, 0));
        assert_eq!((a731.next(1, 0), a731.next(1, 1)), (0, 0));
        assert_eq!((a731.next(2, 0), a731.next(2, 1)), (0, 0));

        // 2240: a = s(b, c), b = s(c, b), c = (a, a)
        let a2240 = Automaton::decode_number(2240).unwrap();
        assert!(a2240.is_active(0) && a2240.is_active(1) && !a2240.is_active(2));
        assert_eq!((a2240.next(0, 0), a2240.next(0, 1)), (1, 2));
        assert_eq!((a2240.next(1, 0), a2240.next(1, 1)), (2, 1));
        assert_eq!((a2240.next(2, 0), a2240.next(2, 1)), (0, 0));
    }

    #[test]
    fn encode_decode_roundtrip_all() {
        for n in 1..=THREE_STATE_BINARY_COUNT {
            let aut = Automaton::decode_number(n).unwrap();
            assert_eq!(aut.encode_number().unwrap(), n);
        }
    }

    #[test]
    fn decode_rejects_out_of_range() {
        assert_eq!(
            Automaton::decode_number(0).unwrap_err(),
            MealyError::NumberOutOfRange(0)
        );
        assert!(Automaton::decode_number(5833).is_err());
    }

    #[test]
    fn encode_rejects_wrong_shape() {
        assert!(adding_machine().encode_number().is_err());
    }

    #[test]
    fn invert_is_involution() {
        for n in 1..=THREE_STATE_BINARY_COUNT {
            let aut = Automaton::decode_number(n).unwrap();
            let back = aut.invert().invert();
            assert_eq!(back.output, aut.output);
            assert_eq!(back.transition, aut.transition);
        }
    }

    #[test]
    fn invert_adding_machine() {
        // a = s(e, a) inverts to a' = s(a', e).
        let inv = adding_machine().invert();
        assert_eq!(inv.output[0], vec![1, 0]);
        assert_eq!(inv.transition[0], vec![0, 1]);
    }

    #[test]
    fn invert_order_two_automaton_fixed() {
        // All states of 846 have order 2, and inversion returns the same machine.
        let a846 = Automaton::decode_number(846).unwrap();
        assert_eq!(a846.invert().encode_number().unwrap(), 846);
    }

    #[test]
    fn dual_of_846_is_two_state_ternary() {
        let dual = Automaton::decode_number(846).unwrap().dual().unwrap();
        assert_eq!(dual.state_count(), 2);
        assert_eq!(dual.alphabet(), 3);
        // A = (acb)(B, A, A): output cycle a->c->b->a, sections (B, A, A).
        assert_eq!(dual.output[0], vec![2, 0, 1]);
        assert_eq!(dual.transition[0], vec![1, 0, 0]);
        // B = (ac)(A, B, B)
        assert_eq!(dual.output[1], vec![2, 1, 0]);
        assert_eq!(dual.transition[1], vec![0, 1, 1]);
    }

    #[test]
    fn dual_not_invertible_for_constant_transitions() {
        assert!(Automaton::decode_number(1).unwrap().dual().is_none());
    }

    #[test]
    fn dual_is_involution_where_defined() {
        for n in 1..=THREE_STATE_BINARY_COUNT {
            let aut = Automaton::decode_number(n).unwrap();
            if let Some(dual) = aut.dual() {
                if let Some(back) = dual.dual() {
                    assert_eq!(back.output, aut.output, "n={n}");
                    assert_eq!(back.transition, aut.transition, "n={n}");
                }
            }
        }
    }

    #[test]
    fn fully_invertible_examples() {
        assert!(Automaton::decode_number(2240).unwrap().is_fully_invertible());
        assert!(Automaton::decode_number(846).unwrap().is_fully_invertible());
        assert!(!Automaton::decode_number(1).unwrap().is_fully_invertible());
    }

    #[test]
    fn minimize_merges_equivalent_states() {
        // 820: a = s(a,a), b = (b,a), c = (b,a) -- b and c merge.
        let min = Automaton::decode_number(820).unwrap().minimize();
        assert_eq!(min.state_count(), 2);
        // 1 collapses to the 1-state trivial machine.
        assert_eq!(Automaton::decode_number(1).unwrap().minimize().state_count(), 1);
        // 2240 is already minimal.
        assert_eq!(Automaton::decode_number(2240).unwrap().minimize().state_count(), 3);
    }

    #[test]
    fn symmetry_op_count_and_composition() {
        let ops = SymmetryOp::all(3, 2);
        assert_eq!(ops.len(), 24);
        let a = &ops[5];
        let b = &ops[17];
        let aut = Automaton::decode_number(2294).unwrap();
        let composed = a.compose(b).apply(&aut);
        let stepwise = a.apply(&b.apply(&aut));
        assert_eq!(composed.output, stepwise.output);
        assert_eq!(composed.transition, stepwise.transition);
    }

    #[test]
    fn symmetry_class_examples() {
        let (_, num) = Automaton::decode_number(742).unwrap().symmetry_class();
        assert_eq!(num, Some(740));
        let (_, num) = Automaton::decode_number(731).unwrap().symmetry_class();
        // 731 minimizes to the 2-state adding machine.
        assert_eq!(num, None);
        let (canon, num) = Automaton::decode_number(766).unwrap().symmetry_class();
        assert_eq!(num, Some(766));
        assert_eq!(canon.state_count(), 3);
    }

    #[test]
    fn structural_flags_examples() {
        let flags = adding_machine().structural_flags();
        assert!(flags.has_trivial_state);
        assert!(flags.open_set_condition);

        let f846 = Automaton::decode_number(846).unwrap().structural_flags();
        assert!(f846.dual_invertible);

        let f2240 = Automaton::decode_number(2240).unwrap().structural_flags();
        assert!(!f2240.has_trivial_state);
        assert!(!f2240.open_set_condition);
        assert!(f2240.fully_invertible);
    }

    #[test]
    fn automaton_count_formula() {
        assert_eq!(invertible_automaton_count(3, 2), BigUint::from(5832u32));
        // 2 states over 3 letters: 2^6 * (3!)^2 = 2304.
        assert_eq!(invertible_automaton_count(2, 3), BigUint::from(2304u32));
    }

    #[test]
    fn display_recursion_text() {
        let a731 = Automaton::decode_number(731).unwrap();
        assert_eq!(
            a731.to_string(),
            "a = (01)(b, a), b = (a, a), c = (a, a)"
        );
    }
}
