//! Exact calculus of rooted-tree automorphisms presented as words in the
//! states of an automaton and their formal inverses.
//!
//! A word acts through the wreath recursion of its letters; sections never
//! get longer than the word, so the set of all sections of a word is finite
//! and every question below reduces to a finite closure computation. Words
//! are compared exactly by minimizing the pointed Moore machine of their
//! section closures.

use crate::mealy::Automaton;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

/// Signed letter: `+(s+1)` is state `s`, `-(s+1)` its inverse.
pub(crate) type SignedLetter = i8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordParseError {
    #[error("column {0}: unexpected character {1:?}")]
    UnexpectedChar(usize, char),
    #[error("column {0}: state {1:?} out of range for this automaton")]
    StateOutOfRange(usize, char),
    #[error("column {0}: malformed exponent")]
    BadExponent(usize),
    #[error("column {0}: unbalanced bracket")]
    Unbalanced(usize),
    #[error("word syntax is limited to automata with at most 26 states")]
    TooManyStates,
}

/// Outcome of a bounded order computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Order {
    Finite(u64),
    Infinite,
    Unknown,
}

/// A freely reduced word over the states of an automaton and their formal
/// inverses; the working representation of a group element. The empty word
/// is the identity.
#[derive(Clone)]
pub struct GenWord<'a> {
    aut: &'a Automaton,
    letters: Vec<SignedLetter>,
}

impl<'a> GenWord<'a> {
    pub fn identity(aut: &'a Automaton) -> Self {
        GenWord {
            aut,
            letters: Vec::new(),
        }
    }

    pub fn generator(aut: &'a Automaton, state: usize) -> Self {
        assert!(state < aut.state_count());
        GenWord {
            aut,
            letters: vec![(state + 1) as i8],
        }
    }

    pub(crate) fn from_letters(aut: &'a Automaton, letters: Vec<SignedLetter>) -> Self {
        GenWord {
            aut,
            letters: reduce(letters),
        }
    }

    /// Parses the word syntax: lowercase letters denote states `0..26`,
    /// uppercase their inverses; `^k`, `^-1` and `^{k}` powers apply to the
    /// preceding letter or group, while a word exponent conjugates
    /// (`x^y = y^-1 x y`); `[x,y]` is the commutator `x^-1 y^-1 x y`.
    /// Whitespace is ignored.
    pub fn parse(aut: &'a Automaton, text: &str) -> Result<Self, WordParseError> {
        if aut.state_count() > 26 {
            return Err(WordParseError::TooManyStates);
        }
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let letters = parse_word(aut, &chars, &mut pos, None)?;
        if pos != chars.len() {
            return Err(WordParseError::UnexpectedChar(pos, chars[pos]));
        }
        Ok(GenWord {
            aut,
            letters: reduce(letters),
        })
    }

    pub fn automaton(&self) -> &'a Automaton {
        self.aut
    }

    pub fn letters(&self) -> &[SignedLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Freely reduced concatenation; both words must share the automaton.
    pub fn mul(&self, rhs: &GenWord<'a>) -> GenWord<'a> {
        assert!(
            std::ptr::eq(self.aut, rhs.aut) || self.aut == rhs.aut,
            "words over different automata"
        );
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        GenWord {
            aut: self.aut,
            letters: reduce(letters),
        }
    }

    pub fn inverse(&self) -> GenWord<'a> {
        GenWord {
            aut: self.aut,
            letters: invert(&self.letters),
        }
    }

    pub fn pow(&self, k: i64) -> GenWord<'a> {
        GenWord {
            aut: self.aut,
            letters: reduce(power(&self.letters, k)),
        }
    }

    /// Root permutation: composition of the letters' output permutations,
    /// rightmost letter acting first.
    pub fn root_perm(&self) -> Vec<u8> {
        word_perm(self.aut, &self.letters)
    }

    /// Length-preserving image of the vertex `v`.
    pub fn act(&self, v: &[u8]) -> Vec<u8> {
        act(self.aut, &self.letters, v)
    }

    /// Section at the vertex `v`: the automorphism induced on the subtree
    /// below `v`. Satisfies `w.section(uv) = w.section(u).section(v)` and
    /// `|w.section(v)| <= |w|`.
    pub fn section(&self, v: &[u8]) -> GenWord<'a> {
        let mut letters = self.letters.clone();
        for &x in v {
            letters = section_once(self.aut, &letters, x as usize);
        }
        GenWord {
            aut: self.aut,
            letters,
        }
    }

    /// Exact word-problem decision: closes `{w}` under sections and checks
    /// that every element of the closure has a trivial root permutation.
    /// Always terminates (sections never lengthen, so the closure is finite).
    pub fn is_identity(&self) -> bool {
        is_identity_letters(self.aut, &self.letters)
    }

    /// Exact equality of the underlying tree automorphisms.
    pub fn equals(&self, other: &GenWord<'a>) -> bool {
        self.mul(&other.inverse()).is_identity()
    }

    /// Least `k <= cap` with `w^k = 1`, `Infinite` when certified, else
    /// `Unknown`. The infinite-order certificate is sound but incomplete.
    pub fn order_bounded(&self, cap: u64) -> Order {
        assert!(cap >= 1);
        if self.is_identity() {
            return Order::Finite(1);
        }
        if self.certified_infinite() {
            return Order::Infinite;
        }
        let mut power = self.clone();
        for k in 2..=cap {
            power = power.mul(self);
            if power.is_identity() {
                return Order::Finite(k);
            }
        }
        Order::Unknown
    }

    /// Sound certificate for infinite order (binary alphabet). Fires when
    /// * the word acts level-transitively (transitivity series `1/(1-t)`), or
    /// * the nontorsion splitting applies to the automaton and the word has
    ///   an odd number of active and an odd number of inactive letters, or
    /// * some even power `w^k` (`k <= 4`) fixes a vertex of depth <= 6 with
    ///   section equal to `w` or `w^-1` (finite orders in the binary tree
    ///   group are powers of two, which such a recursion rules out), or
    /// * some power `w^k` (`k <= 4`) fixes a vertex whose section passes one
    ///   of the first two tests.
    pub fn certified_infinite(&self) -> bool {
        if self.is_empty() || self.aut.alphabet() != 2 {
            return false;
        }
        let partition = nontorsion_partition(self.aut);
        if self.base_certificate(partition.as_ref()) {
            return true;
        }
        let inverse = self.inverse();
        let mut power = self.clone();
        for k in 1u64..=4 {
            if k > 1 {
                power = power.mul(self);
            }
            if power.is_empty() {
                break;
            }
            for v in vertices_to_depth(6) {
                if power.act(&v) != v {
                    continue;
                }
                let s = power.section(&v);
                if k % 2 == 0 && (s.equals(self) || s.equals(&inverse)) {
                    return true;
                }
                if !s.is_identity() && s.base_certificate(partition.as_ref()) {
                    return true;
                }
            }
        }
        false
    }

    fn base_certificate(&self, partition: Option<&(Vec<usize>, Vec<usize>)>) -> bool {
        if is_level_transitive(self) {
            return true;
        }
        if partition.is_some() {
            let na = self
                .letters
                .iter()
                .filter(|&&l| self.aut.is_active(l.unsigned_abs() as usize - 1))
                .count();
            let ni = self.letters.len() - na;
            if na % 2 == 1 && ni % 2 == 1 {
                return true;
            }
        }
        false
    }

}

impl fmt::Display for GenWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", letters_to_string(&self.letters))
    }
}

impl fmt::Debug for GenWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn letters_to_string(letters: &[SignedLetter]) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    letters
        .iter()
        .map(|&l| {
            let s = (l.unsigned_abs() - 1) as u8;
            (if l > 0 { b'a' + s } else { b'A' + s }) as char
        })
        .collect()
}

// --- parsing ---

fn parse_word(
    aut: &Automaton,
    chars: &[char],
    pos: &mut usize,
    stop: Option<char>,
) -> Result<Vec<SignedLetter>, WordParseError> {
    let mut out: Vec<SignedLetter> = Vec::new();
    while *pos < chars.len() {
        if stop == Some(chars[*pos]) || matches!(chars[*pos], ',' | ')' | ']' | '}') {
            break;
        }
        let atom = parse_atom(aut, chars, pos)?;
        out.extend(atom);
    }
    Ok(out)
}

/// One letter, group, or commutator bracket, together with its exponents.
fn parse_atom(
    aut: &Automaton,
    chars: &[char],
    pos: &mut usize,
) -> Result<Vec<SignedLetter>, WordParseError> {
    let c = *chars.get(*pos).ok_or(WordParseError::Unbalanced(*pos))?;
    let atom: Vec<SignedLetter> = match c {
        'a'..='z' | 'A'..='Z' => {
            let s = c.to_ascii_lowercase() as usize - 'a' as usize;
            if s >= aut.state_count() {
                return Err(WordParseError::StateOutOfRange(*pos, c));
            }
            *pos += 1;
            let l = (s + 1) as i8;
            vec![if c.is_ascii_lowercase() { l } else { -l }]
        }
        '(' | '{' => {
            let close = if c == '(' { ')' } else { '}' };
            let open_at = *pos;
            *pos += 1;
            let inner = parse_word(aut, chars, pos, Some(close))?;
            if chars.get(*pos) != Some(&close) {
                return Err(WordParseError::Unbalanced(open_at));
            }
            *pos += 1;
            inner
        }
        '[' => {
            let open_at = *pos;
            *pos += 1;
            let left = parse_word(aut, chars, pos, Some(','))?;
            if chars.get(*pos) != Some(&',') {
                return Err(WordParseError::Unbalanced(open_at));
            }
            *pos += 1;
            let right = parse_word(aut, chars, pos, Some(']'))?;
            if chars.get(*pos) != Some(&']') {
                return Err(WordParseError::Unbalanced(open_at));
            }
            *pos += 1;
            commutator(&left, &right)
        }
        other => return Err(WordParseError::UnexpectedChar(*pos, other)),
    };
    apply_exponents(aut, chars, pos, atom)
}

fn apply_exponents(
    aut: &Automaton,
    chars: &[char],
    pos: &mut usize,
    mut atom: Vec<SignedLetter>,
) -> Result<Vec<SignedLetter>, WordParseError> {
    while chars.get(*pos) == Some(&'^') {
        let caret_at = *pos;
        *pos += 1;
        if let Some(exp) = scan_integer_exponent(chars, pos) {
            atom = power(&atom, exp);
            continue;
        }
        // Conjugation by a word: x^y = y^-1 x y.
        let conj = match chars.get(*pos) {
            Some('{') => {
                *pos += 1;
                let inner = parse_word(aut, chars, pos, Some('}'))?;
                if chars.get(*pos) != Some(&'}') {
                    return Err(WordParseError::Unbalanced(caret_at));
                }
                *pos += 1;
                inner
            }
            Some('a'..='z' | 'A'..='Z' | '(' | '[') => parse_atom(aut, chars, pos)?,
            _ => return Err(WordParseError::BadExponent(caret_at)),
        };
        let mut conjugated = invert(&conj);
        conjugated.extend(atom);
        conjugated.extend(conj);
        atom = conjugated;
    }
    Ok(atom)
}

/// Consumes `k`, `-k` or `{±k}` right after a caret, if present.
fn scan_integer_exponent(chars: &[char], pos: &mut usize) -> Option<i64> {
    let braced = chars.get(*pos) == Some(&'{');
    let start = if braced { *pos + 1 } else { *pos };
    let mut k = start;
    if chars.get(k) == Some(&'-') {
        k += 1;
    }
    let digits_start = k;
    while chars.get(k).is_some_and(|c| c.is_ascii_digit()) {
        k += 1;
    }
    if k == digits_start {
        return None;
    }
    if braced && chars.get(k) != Some(&'}') {
        return None;
    }
    let text: String = chars[start..k].iter().collect();
    let exp = text.parse().ok()?;
    *pos = if braced { k + 1 } else { k };
    Some(exp)
}

fn commutator(left: &[SignedLetter], right: &[SignedLetter]) -> Vec<SignedLetter> {
    let mut out = invert(left);
    out.extend(invert(right));
    out.extend_from_slice(left);
    out.extend_from_slice(right);
    out
}

fn power(w: &[SignedLetter], k: i64) -> Vec<SignedLetter> {
    let base = if k < 0 { invert(w) } else { w.to_vec() };
    let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    out
}

// --- the word engine ---

pub(crate) fn reduce(mut letters: Vec<SignedLetter>) -> Vec<SignedLetter> {
    let mut top = 0;
    for i in 0..letters.len() {
        let l = letters[i];
        if top > 0 && letters[top - 1] == -l {
            top -= 1;
        } else {
            letters[top] = l;
            top += 1;
        }
    }
    letters.truncate(top);
    letters
}

pub(crate) fn invert(letters: &[SignedLetter]) -> Vec<SignedLetter> {
    letters.iter().rev().map(|&l| -l).collect()
}

/// Image of letter `x` under a signed letter's root permutation.
#[inline]
fn letter_image(aut: &Automaton, l: SignedLetter, x: usize) -> usize {
    let s = l.unsigned_abs() as usize - 1;
    if l > 0 {
        aut.output(s, x)
    } else {
        (0..aut.alphabet())
            .find(|&y| aut.output(s, y) == x)
            .expect("output row is a permutation")
    }
}

/// Section of a signed letter at `x`: `s|_x = next(s, x)` and
/// `(s^-1)|_x = (s|_{s^-1(x)})^-1`.
#[inline]
fn letter_section(aut: &Automaton, l: SignedLetter, x: usize) -> SignedLetter {
    let s = l.unsigned_abs() as usize - 1;
    if l > 0 {
        (aut.next(s, x) + 1) as i8
    } else {
        let pre = letter_image(aut, l, x);
        -((aut.next(s, pre) + 1) as i8)
    }
}

pub(crate) fn word_perm(aut: &Automaton, w: &[SignedLetter]) -> Vec<u8> {
    let d = aut.alphabet();
    let mut p: Vec<u8> = (0..d as u8).collect();
    for &l in w.iter().rev() {
        for x in p.iter_mut() {
            *x = letter_image(aut, l, *x as usize) as u8;
        }
    }
    p
}

pub(crate) fn is_active_word(aut: &Automaton, w: &[SignedLetter]) -> bool {
    word_perm(aut, w)
        .iter()
        .enumerate()
        .any(|(x, &y)| x != y as usize)
}

/// One-letter section by the chain rule `(fg)|_x = f|_{g(x)} g|_x`:
/// scanning the word from the right tracks the running image of `x`.
pub(crate) fn section_once(aut: &Automaton, w: &[SignedLetter], x: usize) -> Vec<SignedLetter> {
    let mut cur = x;
    let mut parts = Vec::with_capacity(w.len());
    for &l in w.iter().rev() {
        parts.push(letter_section(aut, l, cur));
        cur = letter_image(aut, l, cur);
    }
    parts.reverse();
    reduce(parts)
}

pub(crate) fn act(aut: &Automaton, w: &[SignedLetter], v: &[u8]) -> Vec<u8> {
    let mut image = Vec::with_capacity(v.len());
    let mut current = w.to_vec();
    for &x in v {
        let mut cur = x as usize;
        let mut parts = Vec::with_capacity(current.len());
        for &l in current.iter().rev() {
            parts.push(letter_section(aut, l, cur));
            cur = letter_image(aut, l, cur);
        }
        image.push(cur as u8);
        parts.reverse();
        current = reduce(parts);
    }
    image
}

/// Section closure of a word: one node per distinct section word reachable
/// from it, with an edge per alphabet letter.
pub(crate) struct ClosureGraph {
    pub words: Vec<Vec<SignedLetter>>,
    /// flattened: child of node `i` at letter `x` is `kids[i * d + x]`
    pub kids: Vec<u32>,
    pub d: usize,
    /// first-seen BFS depth per node
    pub depth: Vec<u32>,
}

impl ClosureGraph {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn child(&self, node: usize, letter: usize) -> usize {
        self.kids[node * self.d + letter] as usize
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0) as usize
    }
}

pub(crate) fn closure_graph(
    aut: &Automaton,
    w: &[SignedLetter],
    node_cap: usize,
) -> Option<ClosureGraph> {
    let d = aut.alphabet();
    let mut index: HashMap<Vec<SignedLetter>, u32> = HashMap::new();
    let mut words: Vec<Vec<SignedLetter>> = Vec::new();
    let mut kids: Vec<u32> = Vec::new();
    let mut depth: Vec<u32> = Vec::new();
    let root = reduce(w.to_vec());
    index.insert(root.clone(), 0);
    words.push(root);
    depth.push(0);
    let mut head = 0usize;
    while head < words.len() {
        let current = words[head].clone();
        for x in 0..d {
            let child = section_once(aut, &current, x);
            let id = match index.get(&child) {
                Some(&id) => id,
                None => {
                    if words.len() >= node_cap {
                        return None;
                    }
                    let id = words.len() as u32;
                    index.insert(child.clone(), id);
                    words.push(child);
                    depth.push(depth[head] + 1);
                    id
                }
            };
            kids.push(id);
        }
        head += 1;
    }
    Some(ClosureGraph {
        words,
        kids,
        d,
        depth,
    })
}

/// Canonically numbered minimal pointed Moore machine of a word's closure:
/// the exact fingerprint of the underlying automorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) struct ElementKey(pub Box<[u32]>);

pub(crate) fn element_key(aut: &Automaton, w: &[SignedLetter]) -> ElementKey {
    element_key_capped(aut, w, usize::MAX).expect("uncapped closure")
}

pub(crate) fn element_key_capped(
    aut: &Automaton,
    w: &[SignedLetter],
    node_cap: usize,
) -> Option<ElementKey> {
    let graph = closure_graph(aut, w, node_cap)?;
    Some(key_from_graph(aut, &graph))
}

/// Moore-minimizes the closure graph: two nodes land in one class exactly
/// when their words define the same automorphism.
pub(crate) fn closure_classes(aut: &Automaton, graph: &ClosureGraph) -> Vec<usize> {
    let n = graph.len();
    let d = graph.d;
    let mut part: Vec<usize> = {
        let mut ids: HashMap<Vec<u8>, usize> = HashMap::new();
        (0..n)
            .map(|i| {
                let key = word_perm(aut, &graph.words[i]);
                let next = ids.len();
                *ids.entry(key).or_insert(next)
            })
            .collect()
    };
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut refined = vec![0usize; n];
        for i in 0..n {
            let sig = (
                part[i],
                (0..d).map(|x| part[graph.child(i, x)]).collect::<Vec<_>>(),
            );
            let next = ids.len();
            refined[i] = *ids.entry(sig).or_insert(next);
        }
        if refined == part {
            return part;
        }
        part = refined;
    }
}

fn key_from_graph(aut: &Automaton, graph: &ClosureGraph) -> ElementKey {
    let d = graph.d;
    let part = closure_classes(aut, graph);
    let class_count = part.iter().max().unwrap() + 1;
    let mut rep = vec![usize::MAX; class_count];
    for (i, &c) in part.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = i;
        }
    }
    // canonical numbering: BFS from the root's class, children in letter order
    let mut new_id = vec![u32::MAX; class_count];
    let mut order = Vec::with_capacity(class_count);
    let mut queue = VecDeque::new();
    new_id[part[0]] = 0;
    queue.push_back(part[0]);
    let mut next_id = 1u32;
    while let Some(c) = queue.pop_front() {
        order.push(c);
        for x in 0..d {
            let nc = part[graph.child(rep[c], x)];
            if new_id[nc] == u32::MAX {
                new_id[nc] = next_id;
                next_id += 1;
                queue.push_back(nc);
            }
        }
    }
    let mut key = Vec::with_capacity(order.len() * 2 * d);
    for &c in &order {
        let i = rep[c];
        let perm = word_perm(aut, &graph.words[i]);
        for x in 0..d {
            key.push(perm[x] as u32);
        }
        for x in 0..d {
            key.push(new_id[part[graph.child(i, x)]]);
        }
    }
    ElementKey(key.into_boxed_slice())
}

/// A tree automorphism held as a pointed Moore machine in canonical form:
/// state 0 is the element, transitions are sections, outputs are root
/// permutations, and states are minimized and numbered breadth-first. The
/// encoding doubles as the equality key. Products and inverses stay compact
/// even when the equivalent words would be very long.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Machine {
    d: u8,
    /// flattened per-state output permutations
    perms: Vec<u8>,
    /// flattened per-state, per-letter transitions
    kids: Vec<u32>,
}

impl Machine {
    pub fn state_count(&self) -> usize {
        self.kids.len() / self.d as usize
    }

    #[inline]
    pub fn out(&self, state: usize, x: usize) -> usize {
        self.perms[state * self.d as usize + x] as usize
    }

    #[inline]
    pub fn child(&self, state: usize, x: usize) -> usize {
        self.kids[state * self.d as usize + x] as usize
    }

    pub fn key(&self) -> ElementKey {
        let d = self.d as usize;
        let mut key = Vec::with_capacity(self.state_count() * 2 * d);
        for s in 0..self.state_count() {
            for x in 0..d {
                key.push(self.out(s, x) as u32);
            }
            for x in 0..d {
                key.push(self.kids[s * d + x]);
            }
        }
        ElementKey(key.into_boxed_slice())
    }

    pub fn from_letters(aut: &Automaton, w: &[SignedLetter]) -> Machine {
        let graph = closure_graph(aut, w, usize::MAX).expect("uncapped");
        let d = graph.d;
        let perms: Vec<u8> = graph
            .words
            .iter()
            .flat_map(|u| word_perm(aut, u))
            .collect();
        Machine {
            d: d as u8,
            perms,
            kids: graph.kids.clone(),
        }
        .canonical()
    }

    /// Product `self * rhs` (self acts after rhs), built on reachable state
    /// pairs through the chain rule, then canonicalized.
    pub fn product(&self, rhs: &Machine) -> Machine {
        debug_assert_eq!(self.d, rhs.d);
        let d = self.d as usize;
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = vec![(0, 0)];
        index.insert((0, 0), 0);
        let mut perms: Vec<u8> = Vec::new();
        let mut kids: Vec<u32> = Vec::new();
        let mut head = 0usize;
        while head < pairs.len() {
            let (i, j) = pairs[head];
            head += 1;
            let (i, j) = (i as usize, j as usize);
            for x in 0..d {
                let y = rhs.out(j, x);
                perms.push(self.out(i, y) as u8);
            }
            for x in 0..d {
                let y = rhs.out(j, x);
                let pair = (self.child(i, y) as u32, rhs.child(j, x) as u32);
                let id = *index.entry(pair).or_insert_with(|| {
                    pairs.push(pair);
                    (pairs.len() - 1) as u32
                });
                kids.push(id);
            }
        }
        Machine {
            d: self.d,
            perms,
            kids,
        }
        .canonical()
    }

    pub fn inverse(&self) -> Machine {
        let d = self.d as usize;
        let mut perms = Vec::with_capacity(self.perms.len());
        let mut kids = Vec::with_capacity(self.kids.len());
        for s in 0..self.state_count() {
            let row = &self.perms[s * d..(s + 1) * d];
            let inv = crate::mealy::invert_perm(row);
            for x in 0..d {
                kids.push(self.kids[s * d + inv[x] as usize]);
            }
            perms.extend_from_slice(&inv);
        }
        Machine {
            d: self.d,
            perms,
            kids,
        }
        .canonical()
    }

    /// Minimizes states and renumbers them breadth-first from the root.
    fn canonical(self) -> Machine {
        let d = self.d as usize;
        let n = self.state_count();
        let mut part: Vec<usize> = {
            let mut ids: HashMap<&[u8], usize> = HashMap::new();
            (0..n)
                .map(|s| {
                    let row = &self.perms[s * d..(s + 1) * d];
                    let next = ids.len();
                    *ids.entry(row).or_insert(next)
                })
                .collect()
        };
        loop {
            let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut refined = vec![0usize; n];
            for s in 0..n {
                let sig = (
                    part[s],
                    (0..d).map(|x| part[self.child(s, x)]).collect::<Vec<_>>(),
                );
                let next = ids.len();
                refined[s] = *ids.entry(sig).or_insert(next);
            }
            if refined == part {
                break;
            }
            part = refined;
        }
        let class_count = part.iter().max().unwrap() + 1;
        let mut rep = vec![usize::MAX; class_count];
        for (s, &c) in part.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = s;
            }
        }
        let mut new_id = vec![u32::MAX; class_count];
        let mut order = Vec::with_capacity(class_count);
        let mut queue = VecDeque::new();
        new_id[part[0]] = 0;
        queue.push_back(part[0]);
        let mut next_id = 1u32;
        while let Some(c) = queue.pop_front() {
            order.push(c);
            for x in 0..d {
                let nc = part[self.child(rep[c], x)];
                if new_id[nc] == u32::MAX {
                    new_id[nc] = next_id;
                    next_id += 1;
                    queue.push_back(nc);
                }
            }
        }
        let mut perms = Vec::with_capacity(order.len() * d);
        let mut kids = Vec::with_capacity(order.len() * d);
        for &c in &order {
            let s = rep[c];
            perms.extend_from_slice(&self.perms[s * d..(s + 1) * d]);
            for x in 0..d {
                kids.push(new_id[part[self.child(s, x)]]);
            }
        }
        Machine {
            d: self.d,
            perms,
            kids,
        }
    }
}

pub(crate) fn is_identity_letters(aut: &Automaton, w: &[SignedLetter]) -> bool {
    is_identity_capped(aut, w, usize::MAX).expect("uncapped closure")
}

/// Capped variant used by bulk searches; `None` means the closure exceeded
/// the node cap before a decision was reached.
pub(crate) fn is_identity_capped(
    aut: &Automaton,
    w: &[SignedLetter],
    node_cap: usize,
) -> Option<bool> {
    let d = aut.alphabet();
    let root = reduce(w.to_vec());
    if is_active_word(aut, &root) {
        return Some(false);
    }
    let mut index: HashMap<Vec<SignedLetter>, ()> = HashMap::new();
    index.insert(root.clone(), ());
    let mut queue = vec![root];
    let mut head = 0;
    while head < queue.len() {
        let current = queue[head].clone();
        head += 1;
        for x in 0..d {
            let child = section_once(aut, &current, x);
            if !index.contains_key(&child) {
                if is_active_word(aut, &child) {
                    return Some(false);
                }
                if queue.len() >= node_cap {
                    return None;
                }
                index.insert(child.clone(), ());
                queue.push(child);
            }
        }
    }
    Some(true)
}

/// All binary vertices of depth `1..=depth`, shallow first.
pub(crate) fn vertices_to_depth(depth: usize) -> impl Iterator<Item = Vec<u8>> {
    (1..=depth).flat_map(|n| {
        (0..(1u32 << n)).map(move |bits| {
            (0..n)
                .map(|i| ((bits >> (n - 1 - i)) & 1) as u8)
                .collect::<Vec<u8>>()
        })
    })
}

/// Parses a vertex given as a digit string over the alphabet, e.g. `"0110"`.
pub fn parse_vertex(text: &str, alphabet: usize) -> Result<Vec<u8>, WordParseError> {
    text.chars()
        .enumerate()
        .map(|(i, c)| {
            c.to_digit(10)
                .filter(|&v| (v as usize) < alphabet)
                .map(|v| v as u8)
                .ok_or(WordParseError::UnexpectedChar(i, c))
        })
        .collect()
}

/// True iff the word acts transitively on every level of the binary tree,
/// decided exactly through the transitivity series.
pub fn is_level_transitive(w: &GenWord<'_>) -> bool {
    assert_eq!(w.automaton().alphabet(), 2);
    crate::series::transitivity_series(w).is_geometric()
}

/// Splits the states into `(P, Q)` such that one part is exactly the active
/// states, every P-state sends both arrows into a single part and every
/// Q-state sends one arrow to each part. Any product of an odd number of
/// active and an odd number of inactive letters then has infinite order.
pub fn nontorsion_partition(aut: &Automaton) -> Option<(Vec<usize>, Vec<usize>)> {
    if aut.alphabet() != 2 {
        return None;
    }
    let m = aut.state_count();
    let active: Vec<bool> = (0..m).map(|s| aut.is_active(s)).collect();
    for bits in 1..(1u32 << m) - 1 {
        let in_p = |s: usize| bits >> s & 1 == 1;
        let p: Vec<usize> = (0..m).filter(|&s| in_p(s)).collect();
        let q: Vec<usize> = (0..m).filter(|&s| !in_p(s)).collect();
        let p_is_active = p.iter().all(|&s| active[s]) && q.iter().all(|&s| !active[s]);
        let q_is_active = q.iter().all(|&s| active[s]) && p.iter().all(|&s| !active[s]);
        if !p_is_active && !q_is_active {
            continue;
        }
        let p_ok = p
            .iter()
            .all(|&s| in_p(aut.next(s, 0)) == in_p(aut.next(s, 1)));
        let q_ok = q
            .iter()
            .all(|&s| in_p(aut.next(s, 0)) != in_p(aut.next(s, 1)));
        if p_ok && q_ok {
            return Some((p, q));
        }
    }
    None
}

/// Searches words of length at most `radius` for two nontrivial level-1
/// stabilizer elements of the shapes `(v, 1)` and `(1, u)` (trivial section
/// at letter 1, respectively at letter 0). Such a pair shows the group is
/// not free.
pub fn not_free_witness(
    aut: &Automaton,
    radius: usize,
) -> Option<(GenWord<'_>, GenWord<'_>)> {
    assert_eq!(aut.alphabet(), 2);
    let mut left: Option<GenWord<'_>> = None; // (v, 1)
    let mut right: Option<GenWord<'_>> = None; // (1, u)
    let mut seen: HashMap<ElementKey, ()> = HashMap::new();
    seen.insert(element_key(aut, &[]), ());
    let mut frontier: Vec<Vec<SignedLetter>> = vec![Vec::new()];
    let gens = generator_letters(aut);
    for _ in 0..radius {
        let mut next_frontier = Vec::new();
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
                seen.insert(key, ());
                if !is_active_word(aut, &cand) && !is_identity_letters(aut, &cand) {
                    let s0 = section_once(aut, &cand, 0);
                    let s1 = section_once(aut, &cand, 1);
                    let s0_trivial = is_identity_letters(aut, &s0);
                    let s1_trivial = is_identity_letters(aut, &s1);
                    if s1_trivial && !s0_trivial && left.is_none() {
                        left = Some(GenWord {
                            aut,
                            letters: cand.clone(),
                        });
                    } else if s0_trivial && !s1_trivial && right.is_none() {
                        right = Some(GenWord {
                            aut,
                            letters: cand.clone(),
                        });
                    }
                    if let (Some(l), Some(r)) = (&left, &right) {
                        return Some((l.clone(), r.clone()));
                    }
                }
                next_frontier.push(cand);
            }
        }
        frontier = next_frontier;
    }
    None
}

pub(crate) fn generator_letters(aut: &Automaton) -> Vec<SignedLetter> {
    let m = aut.state_count() as i8;
    (1..=m).flat_map(|s| [s, -s]).collect()
}

pub(crate) fn reduce_push(w: &[SignedLetter], l: SignedLetter) -> Vec<SignedLetter> {
    let mut out = w.to_vec();
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adding_machine() -> Automaton {
        Automaton::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 1]]).unwrap()
    }

    fn decode(n: u64) -> Automaton {
        Automaton::decode_number(n).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let aut = decode(731);
        let w = GenWord::parse(&aut, "a b^-1 C").unwrap();
        assert_eq!(w.to_string(), "aBC");
        let w = GenWord::parse(&aut, "ba^{2}").unwrap();
        assert_eq!(w.to_string(), "baa");
        let w = GenWord::parse(&aut, "(ab)^2").unwrap();
        assert_eq!(w.to_string(), "abab");
        let w = GenWord::parse(&aut, "[a,b]").unwrap();
        assert_eq!(w.to_string(), "ABab");
        // (b^-1 a)^(b^-1) (b^-1 a)^-3 = b(b^-1 a)b^-1 (a^-1 b)^3
        let w = GenWord::parse(&aut, "(b^{-1}a)^{b^{-1}}(b^{-1}a)^{-3}").unwrap();
        assert_eq!(w.to_string(), "aBAbAbAb");
        let w = GenWord::parse(&aut, "a^0").unwrap();
        assert!(w.is_empty());
        assert!(GenWord::parse(&aut, "d").is_err());
        assert!(GenWord::parse(&aut, "(ab").is_err());
        assert!(GenWord::parse(&aut, "a^").is_err());
    }

    #[test]
    fn root_perm_examples() {
        let aut = decode(731);
        let a = GenWord::parse(&aut, "a").unwrap();
        assert_eq!(a.root_perm(), vec![1, 0]);
        assert_eq!(GenWord::identity(&aut).root_perm(), vec![0, 1]);
        assert_eq!(GenWord::parse(&aut, "aa").unwrap().root_perm(), vec![0, 1]);
    }

    #[test]
    fn sections_follow_the_recursion() {
        let aut = decode(731);
        let a = GenWord::parse(&aut, "a").unwrap();
        assert_eq!(a.section(&[1]).to_string(), "a");
        assert_eq!(a.section(&[0]).to_string(), "b");
        // chain rule instance: (ab)|_0 = a|_{b(0)} b|_0
        let ab = GenWord::parse(&aut, "ab").unwrap();
        let expect = a
            .section(&GenWord::parse(&aut, "b").unwrap().act(&[0]))
            .mul(&GenWord::parse(&aut, "b").unwrap().section(&[0]));
        assert!(ab.section(&[0]).equals(&expect));
    }

    #[test]
    fn act_examples() {
        let add = adding_machine();
        let a = GenWord::generator(&add, 0);
        assert_eq!(a.act(&[1, 1, 1, 1]), vec![0, 0, 0, 0]);
        assert_eq!(a.act(&[0, 0]), vec![1, 0]);
        // 875: a(1000...) = 0100...
        let aut = decode(875);
        let a = GenWord::generator(&aut, 0);
        assert_eq!(a.act(&[1, 0, 0, 0, 0]), vec![0, 1, 0, 0, 0]);
        let id = GenWord::identity(&aut);
        assert_eq!(id.act(&[1, 0, 1]), vec![1, 0, 1]);
    }

    #[test]
    fn word_problem_examples() {
        let a2212 = decode(2212);
        assert!(GenWord::parse(&a2212, "ca^2").unwrap().is_identity());
        assert!(GenWord::parse(&a2212, "cb^2").unwrap().is_identity());
        let a731 = decode(731);
        assert!(GenWord::parse(&a731, "b^-1c").unwrap().is_identity());
        assert!(GenWord::parse(&a731, "ba^2").unwrap().is_identity());
        assert!(!GenWord::parse(&a731, "a").unwrap().is_identity());
    }

    #[test]
    fn equality_examples() {
        let a820 = decode(820);
        let b = GenWord::generator(&a820, 1);
        let c = GenWord::generator(&a820, 2);
        assert!(b.equals(&c));
        // 767: c = a^2 (a is the adding machine once b is recognized trivial)
        let a767 = decode(767);
        let c = GenWord::generator(&a767, 2);
        let a2 = GenWord::parse(&a767, "a^2").unwrap();
        assert!(c.equals(&a2));
        // 2240 is free: a != b
        let a2240 = decode(2240);
        assert!(!GenWord::generator(&a2240, 0).equals(&GenWord::generator(&a2240, 1)));
    }

    #[test]
    fn element_keys_agree_with_equality() {
        let a820 = decode(820);
        let key = |s: usize| element_key(&a820, &[(s + 1) as i8]);
        assert_eq!(key(1), key(2));
        assert_ne!(key(0), key(1));
    }

    #[test]
    fn orders() {
        let a748 = decode(748);
        assert_eq!(GenWord::generator(&a748, 0).order_bounded(10), Order::Finite(2));
        let a731 = decode(731);
        assert_eq!(GenWord::generator(&a731, 0).order_bounded(10), Order::Infinite);
        assert_eq!(GenWord::identity(&a731).order_bounded(3), Order::Finite(1));
    }

    #[test]
    fn nontorsion_partition_examples() {
        // 870 satisfies the splitting; P = {a} (the active state).
        let (p, q) = nontorsion_partition(&decode(870)).unwrap();
        assert_eq!(p, vec![0]);
        assert_eq!(q, vec![1, 2]);
        // 820: P = {a}, Q = {b, c}.
        let (p, q) = nontorsion_partition(&decode(820)).unwrap();
        assert_eq!((p, q), (vec![0], vec![1, 2]));
        assert!(nontorsion_partition(&decode(1)).is_none());
    }

    #[test]
    fn not_free_witnesses() {
        let a744 = decode(744);
        let (l, r) = not_free_witness(&a744, 6).unwrap();
        assert!(!l.is_identity() && !r.is_identity());
        assert!(l.section(&[1]).is_identity() && !l.section(&[0]).is_identity());
        assert!(r.section(&[0]).is_identity() && !r.section(&[1]).is_identity());
        // 731 generates Z; no such pair exists.
        assert!(not_free_witness(&decode(731), 6).is_none());
        // 885: b^-1 a b a^-1 = (1, c^-1 a c a^-1) and a^-1 b^-1 a b = (a^-1 c^-1 a c, 1)
        let a885 = decode(885);
        let (l, r) = not_free_witness(&a885, 6).unwrap();
        assert!(l.len() <= 4 && r.len() <= 4);
    }

    #[test]
    fn vertex_parsing() {
        assert_eq!(parse_vertex("0110", 2).unwrap(), vec![0, 1, 1, 0]);
        assert!(parse_vertex("012", 2).is_err());
        assert_eq!(parse_vertex("", 2).unwrap(), Vec::<u8>::new());
    }
}
