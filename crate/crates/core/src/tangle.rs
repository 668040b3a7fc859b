//! Braid words, their action on `V^{⊗n}`, and the closure to a (1,1)-tangle
//! whose scalar is the invariant.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ring::{LaurentPoly, RingElem};
use crate::rmatrix::{caps_cups, sigma, sigma_inv, CrossingTensor};
use crate::tensor::{ContractionNetwork, Slot, Tensor};

/// Default cap on the number of strands evaluated densely.
pub const DEFAULT_STRAND_LIMIT: usize = 5;

/// A word in the braid group on `strands` strands. Letter `i` is `σ_i`
/// (strand `i` over strand `i + 1`), `-i` its inverse; letters apply from
/// left to right, bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::parse("n=0", "a braid needs at least one strand"));
        }
        for &g in &letters {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(Error::GeneratorOutOfRange {
                    generator: g,
                    strands,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord::new(strands, Vec::new()).expect("at least one strand")
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Sum of the letter signs.
    pub fn writhe(&self) -> i32 {
        self.letters.iter().map(|g| g.signum()).sum()
    }

    /// The mirror image: every crossing switched.
    pub fn reflect(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|g| -g).collect(),
        }
    }

    /// `g · self · g^-1`.
    pub fn conjugate(&self, g: i32) -> Result<Self> {
        let mut letters = vec![g];
        letters.extend(&self.letters);
        letters.push(-g);
        BraidWord::new(self.strands, letters)
    }

    /// Adds a strand and a crossing `σ_n^{±1}` with it.
    pub fn stabilize(&self, positive: bool) -> Self {
        let n = self.strands as i32;
        let mut letters = self.letters.clone();
        letters.push(if positive { n } else { -n });
        BraidWord {
            strands: self.strands + 1,
            letters,
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.strands)?;
        for g in &self.letters {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

/// `"n=3; 1 -2 1 -2"`. Letters are whitespace or comma separated.
impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, body) = match s.split_once(';') {
            Some((h, b)) => (h.trim(), b),
            None => match s.split_once(char::is_whitespace) {
                Some((h, b)) => (h.trim(), b),
                None => (s, ""),
            },
        };
        let count = head
            .strip_prefix("n=")
            .or_else(|| head.strip_prefix("n ="))
            .ok_or_else(|| Error::parse(head, "expected a header of the form n=<strands>"))?;
        let strands: usize = count
            .trim()
            .parse()
            .map_err(|_| Error::parse(head, "strand count must be a positive integer"))?;
        let letters = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i32>()
                    .map_err(|_| Error::parse(t, "expected a nonzero integer generator"))
            })
            .collect::<Result<Vec<_>>>()?;
        BraidWord::new(strands, letters)
    }
}

/// The `4^n x 4^n` matrix of a braid, stored by sparse columns. Basis index
/// `Σ s_k 4^{n-k}` puts strand 1 in the most significant digit.
#[derive(Clone, Debug, PartialEq)]
pub struct BraidMatrix {
    strands: usize,
    columns: Vec<HashMap<usize, RingElem>>,
}

impl BraidMatrix {
    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, row: usize, col: usize) -> RingElem {
        self.columns[col]
            .get(&row)
            .cloned()
            .unwrap_or_else(RingElem::zero)
    }

    pub fn is_identity(&self) -> bool {
        self.columns.iter().enumerate().all(|(c, col)| {
            col.iter()
                .all(|(r, v)| if *r == c { v.is_one() } else { v.is_zero() })
                && col.get(&c).is_some_and(RingElem::is_one)
        })
    }
}

/// Column lists of a crossing: for input `(b, d)`, the `(row, value)` pairs.
fn column_lists(x: &CrossingTensor) -> Vec<Vec<(usize, RingElem)>> {
    let mut cols = vec![Vec::new(); 16];
    for (r, c, v) in x.matrix().nonzeros() {
        cols[c].push((r, v.clone()));
    }
    cols
}

pub fn eval_braid(w: &BraidWord) -> Result<BraidMatrix> {
    eval_braid_with_limit(w, DEFAULT_STRAND_LIMIT)
}

/// Product of `I^{⊗(i-1)} ⊗ σ^{±1} ⊗ I^{⊗(n-i-1)}` over the letters, the
/// first letter applied first.
pub fn eval_braid_with_limit(w: &BraidWord, limit: usize) -> Result<BraidMatrix> {
    let n = w.strands;
    if n > limit {
        return Err(Error::TooManyStrands { strands: n, limit });
    }
    let pos = column_lists(sigma());
    let neg = column_lists(sigma_inv());
    let dim = 1usize << (2 * n);
    let mut columns = Vec::with_capacity(dim);
    for x in 0..dim {
        let mut v: HashMap<usize, RingElem> = HashMap::from([(x, RingElem::one())]);
        for &g in &w.letters {
            let i = g.unsigned_abs() as usize;
            let lists = if g > 0 { &pos } else { &neg };
            // Strands i, i+1 occupy the two digits starting at this shift.
            let shift = 2 * (n - i - 1);
            let mask = 15usize << shift;
            let mut next: HashMap<usize, RingElem> = HashMap::with_capacity(v.len());
            for (idx, val) in &v {
                let pair = (idx & mask) >> shift;
                let rest = idx & !mask;
                for (r, coeff) in &lists[pair] {
                    next.entry(rest | (r << shift))
                        .or_insert_with(RingElem::zero)
                        .add_product(val, coeff);
                }
            }
            next.retain(|_, v| !v.is_zero());
            v = next;
        }
        columns.push(v);
    }
    Ok(BraidMatrix {
        strands: n,
        columns,
    })
}

/// A (1,1)-tangle: `raw = scalar · δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangleValue {
    pub scalar: LaurentPoly,
    pub raw: Tensor,
}

fn tangle_value(raw: Tensor) -> Result<TangleValue> {
    let s = raw
        .scalar_multiple_of_identity()
        .ok_or(Error::NotScalarMultiple)?;
    let scalar = s.as_y_free()?.clone();
    Ok(TangleValue { scalar, raw })
}

/// Closes strands `2..n` with `℧^-` (a signed partial trace), leaving
/// strand 1 open: `T^y_x = Σ_s M^{(y,s)}_{(x,s)} Π_k (℧^-)^{s_k s_k}`.
pub fn close_to_tangle(m: &BraidMatrix) -> Result<TangleValue> {
    let n = m.strands;
    let tail_bits = 2 * (n - 1);
    let tail_mask = (1usize << tail_bits) - 1;
    let cup = &caps_cups().mho_minus.diag;
    let mut raw = Tensor::zeros(vec![Slot::Upper, Slot::Lower]);
    for (col, entries) in m.columns.iter().enumerate() {
        let tail = col & tail_mask;
        let x = col >> tail_bits;
        let mut weight = RingElem::one();
        for k in 0..n - 1 {
            weight = &weight * &cup[(tail >> (2 * k)) & 3];
        }
        for (row, v) in entries {
            if row & tail_mask != tail {
                continue;
            }
            let y = row >> tail_bits;
            let mut acc = raw.get(&[y, x]).clone();
            acc.add_product(v, &weight);
            raw.set(&[y, x], acc);
        }
    }
    tangle_value(raw)
}

pub fn lg_invariant(w: &BraidWord) -> Result<LaurentPoly> {
    Ok(close_to_tangle(&eval_braid(w)?)?.scalar)
}

/// Contracts a network with one open upper and one open lower index.
pub fn tangle_of_network(net: &ContractionNetwork) -> Result<TangleValue> {
    let free = net.validate()?;
    let raw = net.contract()?;
    let raw = match free.as_slice() {
        [Slot::Upper, Slot::Lower] => raw,
        [Slot::Lower, Slot::Upper] => raw.permute(&[1, 0]),
        _ => {
            return Err(Error::MalformedNetwork(
                "a tangle network needs exactly one free upper and one free lower index".into(),
            ))
        }
    };
    tangle_value(raw)
}

pub fn lg_of_network(net: &ContractionNetwork) -> Result<LaurentPoly> {
    Ok(tangle_of_network(net)?.scalar)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Chiral,
    /// Palindromic; says nothing either way.
    Inconclusive,
}

impl Chirality {
    pub fn of(a: &LaurentPoly) -> Self {
        if a.is_palindromic() {
            Chirality::Inconclusive
        } else {
            Chirality::Chiral
        }
    }
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chirality::Chiral => "chiral",
            Chirality::Inconclusive => "inconclusive",
        })
    }
}

pub fn detect_chirality(a: &RingElem) -> Result<Chirality> {
    Ok(Chirality::of(a.as_y_free()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Substitution;
    use crate::rmatrix::CapCupKind;
    use crate::tensor::power;
    use proptest::prelude::*;

    fn braid(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    fn lg(s: &str) -> LaurentPoly {
        lg_invariant(&braid(s)).unwrap()
    }

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    const TREFOIL: &str = "1 + p^-4 - p^-2 + 2 q^2 - p^-2 q^2 - p^2 q^2 - p^2 q^4 + p^4 q^4";

    #[test]
    fn parse_and_display() {
        let w = braid("n=3; 1 -2 1 -2");
        assert_eq!(w.letters(), &[1, -2, 1, -2]);
        assert_eq!(w.to_string(), "n=3; 1 -2 1 -2");
        assert_eq!(braid("n=1").letters(), &[] as &[i32]);
        assert_eq!(braid("n=3 1,-2"), braid("n=3; 1 -2"));
        assert_eq!(
            "n=2; 7".parse::<BraidWord>().unwrap_err().to_string(),
            "generator 7 out of range for 2 strands"
        );
        assert!(matches!(
            "n=2; 0".parse::<BraidWord>(),
            Err(Error::GeneratorOutOfRange { .. })
        ));
        assert!(
            matches!("n=2; x".parse::<BraidWord>(), Err(Error::Parse { token, .. }) if token == "x")
        );
        assert!(matches!(
            "1 1 1".parse::<BraidWord>(),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn braid_matrices() {
        assert!(eval_braid(&BraidWord::identity(1)).unwrap().is_identity());
        assert!(eval_braid(&braid("n=2; 1 1 -1 -1")).unwrap().is_identity());
        assert!(!eval_braid(&braid("n=2; 1")).unwrap().is_identity());
        assert_eq!(
            eval_braid(&braid("n=3; 1 2 1")).unwrap(),
            eval_braid(&braid("n=3; 2 1 2")).unwrap()
        );
        assert!(matches!(
            eval_braid(&BraidWord::identity(6)),
            Err(Error::TooManyStrands {
                strands: 6,
                limit: 5
            })
        ));
    }

    #[test]
    fn single_generator_matches_kronecker() {
        // σ_2 on three strands is I ⊗ σ.
        let m = eval_braid(&braid("n=3; 2")).unwrap();
        let k = crate::matrix::Matrix::identity(4).kron(sigma().matrix());
        for r in 0..64 {
            for c in 0..64 {
                assert_eq!(&m.get(r, c), k.get(r, c));
            }
        }
    }

    #[test]
    fn closures() {
        assert!(lg("n=1").is_one());
        assert_eq!(lg("n=2; 1 1"), poly("-1 + p^-2 - q^2 + p^2 q^2"));
        assert!(lg("n=2").is_zero());
        assert_eq!(lg("n=2; 1 1 1"), poly(TREFOIL));
        assert_eq!(
            lg("n=3; 1 -2 1 -2"),
            poly("7 + p^-4 q^-2 + p^4 q^2 - 3 p^-2 - 3 p^2 - 3 p^-2 q^-2 - 3 p^2 q^2 + 2 q^-2 + 2 q^2")
        );
    }

    #[test]
    fn network_path_agrees() {
        let net = ContractionNetwork::new()
            .node(power(&Tensor::from(sigma()), 3), "y a x b")
            .node(Tensor::cap_cup(CapCupKind::OmegaPlus), "a c")
            .node(Tensor::cap_cup(CapCupKind::MhoMinus), "b c")
            .free("y x");
        assert_eq!(lg_of_network(&net).unwrap(), poly(TREFOIL));
        // Free indices listed lower first are accepted.
        let flipped = net.clone().free("x y");
        assert_eq!(lg_of_network(&flipped).unwrap(), poly(TREFOIL));
        let dangling = ContractionNetwork::new()
            .node(Tensor::from(sigma()), "y a x b")
            .free("y x");
        assert!(matches!(
            lg_of_network(&dangling),
            Err(Error::MalformedNetwork(_))
        ));
        let open4 = ContractionNetwork::new()
            .node(Tensor::from(sigma()), "y a x b")
            .free("y a x b");
        assert!(matches!(
            lg_of_network(&open4),
            Err(Error::MalformedNetwork(_))
        ));
    }

    #[test]
    fn non_scalar_tangle_is_rejected() {
        // An open crossing with one strand capped but not looped back.
        let net = ContractionNetwork::new()
            .node(Tensor::from(sigma()), "y a x b")
            .node(Tensor::identity2(), "b a")
            .node(
                crate::tensor::twist_right(&Tensor::from(sigma())),
                "y2 c x2 d",
            )
            .free("y x");
        assert!(net.validate().is_err());
        let raw = ContractionNetwork::new()
            .node(Tensor::from(sigma()), "y a x a")
            .free("y x");
        // Tracing without the cup weights is not a tangle invariant.
        assert_eq!(
            tangle_of_network(&raw).map(|_| ()),
            Err(Error::NotScalarMultiple)
        );
    }

    #[test]
    fn reflection_and_chirality() {
        let w = braid("n=2; 1 1 1");
        assert_eq!(w.reflect().letters(), &[-1, -1, -1]);
        assert_eq!(w.reflect().reflect(), w);
        assert_eq!(w.writhe(), 3);
        assert_eq!(
            lg_invariant(&w.reflect()).unwrap(),
            poly(TREFOIL).substitute(Substitution::Reflect)
        );
        assert_eq!(
            detect_chirality(&poly(TREFOIL).into()),
            Ok(Chirality::Chiral)
        );
        assert_eq!(
            Chirality::of(&lg("n=3; 1 -2 1 -2")),
            Chirality::Inconclusive
        );
        assert_eq!(detect_chirality(&RingElem::y()), Err(Error::NotYFree));
    }

    fn word_strategy() -> impl Strategy<Value = BraidWord> {
        (2usize..4).prop_flat_map(|n| {
            let g = (1..n as i32).prop_flat_map(|i| prop_oneof![Just(i), Just(-i)]);
            proptest::collection::vec(g, 0..7).prop_map(move |l| BraidWord::new(n, l).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn conjugation_invariant(w in word_strategy(), g in 1i32..8, pos in any::<bool>()) {
            let g = (g - 1) % (w.strands() as i32 - 1) + 1;
            let g = if pos { g } else { -g };
            prop_assert_eq!(lg_invariant(&w.conjugate(g).unwrap()).unwrap(), lg_invariant(&w).unwrap());
        }

        #[test]
        fn stabilization_invariant(w in word_strategy(), pos in any::<bool>()) {
            prop_assert_eq!(lg_invariant(&w.stabilize(pos)).unwrap(), lg_invariant(&w).unwrap());
        }

        #[test]
        fn symmetries(w in word_strategy()) {
            let a = lg_invariant(&w).unwrap();
            prop_assert!(a.is_inversion_symmetric());
            prop_assert_eq!(lg_invariant(&w.reflect()).unwrap(), a.substitute(Substitution::Reflect));
        }
    }
}
