//! Rational power series over the 2-element field, carrying the
//! abelianization data of a binary-tree automorphism.
//!
//! The image of an automorphism `g` in the abelianization of the full tree
//! group is the 0/1 sequence whose n-th term is the parity of the number of
//! active sections of `g` at level n. Sections satisfy
//! `series(g) = activity(g) + t * (series(g|_0) + series(g|_1))`, so over
//! the finite section closure the sequence obeys a linear recurrence and its
//! generating function is rational. An automorphism acts transitively on
//! every level exactly when that function is `1/(1 - t)`, the all-ones
//! series (note `-1 = 1` here).

use crate::words::GenWord;
use std::fmt;

/// Polynomial over GF(2), little-endian bit-packed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly2 {
    limbs: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2 { limbs: vec![1] }
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Poly2 { limbs: vec![2] }
    }

    /// `1 + t`, the denominator of the all-ones series.
    pub fn one_plus_t() -> Self {
        Poly2 { limbs: vec![3] }
    }

    pub fn from_coefficients(bits: &[bool]) -> Self {
        let mut p = Poly2::zero();
        for (i, &b) in bits.iter().enumerate() {
            if b {
                p.set_bit(i);
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let last = self.limbs.last()?;
        Some((self.limbs.len() - 1) * 64 + (63 - last.leading_zeros() as usize))
    }

    pub fn coefficient(&self, i: usize) -> bool {
        self.limbs
            .get(i / 64)
            .is_some_and(|limb| limb >> (i % 64) & 1 == 1)
    }

    pub fn constant_term(&self) -> bool {
        self.coefficient(0)
    }

    fn set_bit(&mut self, i: usize) {
        let limb = i / 64;
        if self.limbs.len() <= limb {
            self.limbs.resize(limb + 1, 0);
        }
        self.limbs[limb] |= 1 << (i % 64);
        self.normalize();
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn add(&self, rhs: &Poly2) -> Poly2 {
        let mut limbs = vec![0u64; self.limbs.len().max(rhs.limbs.len())];
        for (i, limb) in limbs.iter_mut().enumerate() {
            *limb = self.limbs.get(i).copied().unwrap_or(0) ^ rhs.limbs.get(i).copied().unwrap_or(0);
        }
        let mut p = Poly2 { limbs };
        p.normalize();
        p
    }

    pub fn shl(&self, k: usize) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let limb_shift = k / 64;
        let bit_shift = k % 64;
        let mut limbs = vec![0u64; self.limbs.len() + limb_shift + 1];
        for (i, &limb) in self.limbs.iter().enumerate() {
            limbs[i + limb_shift] |= limb << bit_shift;
            if bit_shift > 0 {
                limbs[i + limb_shift + 1] |= limb >> (64 - bit_shift);
            }
        }
        let mut p = Poly2 { limbs };
        p.normalize();
        p
    }

    pub fn mul(&self, rhs: &Poly2) -> Poly2 {
        if self.is_zero() || rhs.is_zero() {
            return Poly2::zero();
        }
        let mut acc = Poly2::zero();
        for (i, &limb) in self.limbs.iter().enumerate() {
            let mut bits = limb;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                acc = acc.add(&rhs.shl(i * 64 + b));
                bits &= bits - 1;
            }
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, rhs: &Poly2) -> (Poly2, Poly2) {
        let div_deg = rhs.degree().expect("division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly2::zero();
        while let Some(rdeg) = rem.degree() {
            if rdeg < div_deg {
                break;
            }
            let shift = rdeg - div_deg;
            quot.set_bit(shift);
            rem = rem.add(&rhs.shl(shift));
        }
        (quot, rem)
    }

    pub fn gcd(&self, rhs: &Poly2) -> Poly2 {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for i in (0..=deg).rev() {
            if !self.coefficient(i) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// A rational function over GF(2) in lowest terms with `den(0) = 1`; as a
/// power series this is the abelianization sequence of an automorphism.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalSeries {
    num: Poly2,
    den: Poly2,
}

impl RationalSeries {
    pub fn zero() -> Self {
        RationalSeries {
            num: Poly2::zero(),
            den: Poly2::one(),
        }
    }

    /// `1/(1 - t) = 1/(1 + t)`: the all-ones series.
    pub fn geometric() -> Self {
        RationalSeries {
            num: Poly2::one(),
            den: Poly2::one_plus_t(),
        }
    }

    pub fn new(num: Poly2, den: Poly2) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let mut num = num;
        let mut den = den;
        if num.is_zero() {
            return Some(RationalSeries::zero());
        }
        let g = num.gcd(&den);
        if g.degree() != Some(0) {
            num = num.divrem(&g).0;
            den = den.divrem(&g).0;
        }
        if !den.constant_term() {
            return None;
        }
        Some(RationalSeries { num, den })
    }

    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_geometric(&self) -> bool {
        *self == RationalSeries::geometric()
    }

    /// First `count` coefficients of the power-series expansion, by long
    /// division.
    pub fn coefficients(&self, count: usize) -> Vec<bool> {
        let mut out = Vec::with_capacity(count);
        let mut carry = self.num.clone();
        for _ in 0..count {
            let bit = carry.constant_term();
            out.push(bit);
            if bit {
                carry = carry.add(&self.den);
            }
            // now divisible by t
            carry = carry.divrem(&Poly2::t()).0;
        }
        out
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly2::one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Activity parity sequence of a word, and its rational closed form.
///
/// Enumerates the section closure of the word, reads off the mod-2 activity
/// recurrence on the closure graph, generates twice as many sequence terms
/// as the closure has nodes, and recovers the minimal rational form through
/// the shortest linear recurrence (Berlekamp-Massey). The result equals the
/// solution of the linear system `x_u = act(u) + t*(x_{u0} + x_{u1})`, in
/// lowest terms.
pub fn transitivity_series(w: &GenWord<'_>) -> RationalSeries {
    assert_eq!(w.automaton().alphabet(), 2, "series are defined over the binary alphabet");
    let aut = w.automaton();
    let graph = crate::words::closure_graph(aut, w.letters(), usize::MAX).expect("uncapped");
    let n = graph.len();
    let limbs = n.div_ceil(64);
    // row i = children of node i with odd multiplicity, as a bitset
    let mut rows = vec![vec![0u64; limbs]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for x in 0..graph.d {
            let j = graph.child(i, x);
            row[j / 64] ^= 1 << (j % 64);
        }
    }
    let mut active = vec![0u64; limbs];
    for i in 0..n {
        if crate::words::is_active_word(aut, &graph.words[i]) {
            active[i / 64] |= 1 << (i % 64);
        }
    }
    // sequence terms a_0 .. a_{2n}
    let mut state = vec![0u64; limbs];
    state[0] = 1;
    let terms = 2 * n + 2;
    let mut seq = Vec::with_capacity(terms);
    for _ in 0..terms {
        let parity = state
            .iter()
            .zip(&active)
            .map(|(s, a)| (s & a).count_ones())
            .sum::<u32>()
            % 2;
        seq.push(parity == 1);
        let mut next = vec![0u64; limbs];
        for i in 0..n {
            if state[i / 64] >> (i % 64) & 1 == 1 {
                for (limb, row_limb) in next.iter_mut().zip(&rows[i]) {
                    *limb ^= row_limb;
                }
            }
        }
        state = next;
    }
    let (connection, order) = berlekamp_massey(&seq);
    // numerator = (den * sequence) truncated below the recurrence order
    let seq_poly = Poly2::from_coefficients(&seq[..order.min(seq.len())]);
    let prod = connection.mul(&seq_poly);
    let num = truncate(&prod, order);
    RationalSeries::new(num, connection).expect("BM connection polynomial has constant term 1")
}

fn truncate(p: &Poly2, below: usize) -> Poly2 {
    let bits: Vec<bool> = (0..below).map(|i| p.coefficient(i)).collect();
    Poly2::from_coefficients(&bits)
}

/// Shortest LFSR generating the sequence: returns the connection polynomial
/// (constant term 1, degree <= L) and the register length L.
fn berlekamp_massey(seq: &[bool]) -> (Poly2, usize) {
    let mut c = Poly2::one();
    let mut b = Poly2::one();
    let mut l = 0usize;
    let mut m = 1usize;
    for (n, _) in seq.iter().enumerate() {
        // discrepancy
        let mut d = false;
        for i in 0..=l {
            if c.coefficient(i) && seq[n - i] {
                d = !d;
            }
        }
        if !d {
            m += 1;
        } else if 2 * l <= n {
            let t = c.clone();
            c = c.add(&b.shl(m));
            l = n + 1 - l;
            b = t;
            m = 1;
        } else {
            c = c.add(&b.shl(m));
            m += 1;
        }
    }
    (c, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mealy::Automaton;

    fn adding_machine() -> Automaton {
        Automaton::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 1]]).unwrap()
    }

    #[test]
    fn poly_arithmetic() {
        let p = Poly2::from_coefficients(&[true, true]); // 1 + t
        let q = Poly2::from_coefficients(&[true, false, true]); // 1 + t^2 = (1+t)^2
        assert_eq!(p.mul(&p), q);
        assert_eq!(q.divrem(&p), (p.clone(), Poly2::zero()));
        assert_eq!(p.gcd(&q), p);
        assert_eq!(p.add(&p), Poly2::zero());
        assert_eq!(q.to_string(), "t^2 + 1");
    }

    #[test]
    fn series_reduction_and_expansion() {
        // (1 + t^2) / (1 + t)^3 reduces to 1 / (1 + t).
        let num = Poly2::from_coefficients(&[true, false, true]);
        let den = Poly2::one_plus_t()
            .mul(&Poly2::one_plus_t())
            .mul(&Poly2::one_plus_t());
        let s = RationalSeries::new(num, den).unwrap();
        assert!(s.is_geometric());
        assert_eq!(s.coefficients(5), vec![true; 5]);
        assert_eq!(RationalSeries::zero().coefficients(3), vec![false; 3]);
    }

    #[test]
    fn berlekamp_massey_recovers_recurrences() {
        // all-ones sequence: connection 1 + t
        assert_eq!(berlekamp_massey(&[true; 8]).0, Poly2::one_plus_t());
        // period-2 sequence 1,0,1,0,...: connection 1 + t^2
        let seq: Vec<bool> = (0..10).map(|i| i % 2 == 0).collect();
        assert_eq!(
            berlekamp_massey(&seq).0,
            Poly2::from_coefficients(&[true, false, true])
        );
        // finitely supported sequence 0,1,0,0,...: C = 1 with register 2
        let mut seq = vec![false; 10];
        seq[1] = true;
        let (c, l) = berlekamp_massey(&seq);
        assert_eq!(c, Poly2::one());
        assert_eq!(l, 2);
    }

    #[test]
    fn adding_machine_series_is_geometric() {
        let add = adding_machine();
        let a = GenWord::generator(&add, 0);
        let s = transitivity_series(&a);
        assert!(s.is_geometric());
        assert!(crate::words::is_level_transitive(&a));
        assert_eq!(s.to_string(), "(1) / (t + 1)");
    }

    #[test]
    fn identity_series_is_zero() {
        let add = adding_machine();
        assert!(transitivity_series(&GenWord::identity(&add)).is_zero());
        let e = GenWord::generator(&add, 1);
        assert!(transitivity_series(&e).is_zero());
    }

    #[test]
    fn transitive_elements_in_the_tables() {
        // 2199: the element ac acts transitively on all levels.
        let aut = Automaton::decode_number(2199).unwrap();
        let ac = GenWord::parse(&aut, "ac").unwrap();
        assert!(transitivity_series(&ac).is_geometric());
        // 748: generator a has order 2, so it is not level transitive.
        let aut = Automaton::decode_number(748).unwrap();
        let a = GenWord::generator(&aut, 0);
        assert!(!transitivity_series(&a).is_geometric());
    }

    #[test]
    fn series_matches_brute_force_orbit() {
        // level transitivity of the adding machine at small levels: the
        // orbit of 0^n under a is the full level.
        let add = adding_machine();
        let a = GenWord::generator(&add, 0);
        for n in 1..=8 {
            let start = vec![0u8; n];
            let mut seen = std::collections::HashSet::new();
            let mut v = start.clone();
            loop {
                v = a.act(&v);
                if !seen.insert(v.clone()) {
                    break;
                }
            }
            assert_eq!(seen.len(), 1 << n);
        }
    }
}
