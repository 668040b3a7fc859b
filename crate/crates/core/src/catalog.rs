//! The example links: braid words, hand-built tangle networks and the
//! expected invariants, plus the pretzel family and the mutant pair.

use std::sync::OnceLock;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ring::LaurentPoly;
use crate::rmatrix::{sigma, sigma_inv, CapCupKind};
use crate::tangle::{lg_invariant, lg_of_network, BraidWord};
use crate::tensor::{
    compose_x_xd, compose_xd_x, compose_xl_xr, compose_xr_xl, power, tower_rlr, twist_down,
    twist_right, ContractionNetwork, Tensor,
};

use CapCupKind::{MhoMinus, MhoPlus, OmegaMinus, OmegaPlus};

/// Catalog names, in table order.
pub const NAMES: [&str; 10] = [
    "0_1", "2^2_1", "3_1", "4_1", "5^2_1", "8_17", "9_42", "10_48", "KT", "KT'",
];

const FIXTURES_JSON: &str = include_str!("../data/fixtures.json");

#[derive(Deserialize)]
struct FixtureRecord {
    name: String,
    braid: Option<String>,
    expected: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub braid: Option<BraidWord>,
    pub expected: LaurentPoly,
}

/// The bundled expected values.
pub fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| parse_fixtures(FIXTURES_JSON).expect("bundled fixtures parse"))
}

/// Reads a JSON array of `{name, braid, expected}` records.
pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>> {
    let records: Vec<FixtureRecord> =
        serde_json::from_str(text).map_err(|e| Error::parse("fixtures", e.to_string()))?;
    records
        .into_iter()
        .map(|r| {
            Ok(Fixture {
                braid: r.braid.as_deref().map(str::parse).transpose()?,
                expected: LaurentPoly::from_json(&r.expected)?,
                name: r.name,
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// Braid whose closure is the tabulated link.
    pub braid: Option<BraidWord>,
    /// The braid word as commonly printed, where that differs from `braid`
    /// (a mirror image or a misprint).
    pub printed_braid: Option<BraidWord>,
    pub network: Option<ContractionNetwork>,
    pub expected: Option<LaurentPoly>,
    /// Diagram writhe from the link table, where listed.
    pub writhe: Option<i32>,
    /// Known chirality from the link table, where listed.
    pub chiral: Option<bool>,
}

impl CatalogEntry {
    /// The invariant, through the braid if there is one.
    pub fn evaluate(&self) -> Result<LaurentPoly> {
        match (&self.braid, &self.network) {
            (Some(b), _) => lg_invariant(b),
            (None, Some(n)) => lg_of_network(n),
            (None, None) => unreachable!("every entry has a braid or a network"),
        }
    }

    pub fn evaluate_network(&self) -> Option<Result<LaurentPoly>> {
        self.network.as_ref().map(lg_of_network)
    }

    pub fn evaluate_braid(&self) -> Option<Result<LaurentPoly>> {
        self.braid.as_ref().map(lg_invariant)
    }
}

/// Maps `5²₁`, `8_{17}`, `kt′` and the like onto catalog names.
pub fn normalize_name(name: &str) -> String {
    let mut out = String::new();
    let mut mode = ' ';
    for ch in name.trim().chars() {
        let (m, c) = match ch {
            '₀'..='₉' => ('_', char::from_digit(ch as u32 - '₀' as u32, 10).unwrap()),
            '⁰' => ('^', '0'),
            '¹' => ('^', '1'),
            '²' => ('^', '2'),
            '³' => ('^', '3'),
            '⁴'..='⁹' => (
                '^',
                char::from_digit(ch as u32 - '⁴' as u32 + 4, 10).unwrap(),
            ),
            '′' | '’' => (' ', '\''),
            '{' | '}' => continue,
            c => (' ', c.to_ascii_uppercase()),
        };
        if m != ' ' && m != mode {
            out.push(m);
        }
        mode = m;
        out.push(c);
    }
    // Superscript before subscript, as in the table: 5_1^2 -> 5^2_1.
    if let Some((base, rest)) = out.split_once('_') {
        if let Some((sub, sup)) = rest.split_once('^') {
            return format!("{base}^{sup}_{sub}");
        }
    }
    out
}

fn s() -> Tensor {
    Tensor::from(sigma())
}

fn si() -> Tensor {
    Tensor::from(sigma_inv())
}

fn cc(kind: CapCupKind) -> Tensor {
    Tensor::cap_cup(kind)
}

fn contract(net: ContractionNetwork) -> Tensor {
    net.contract().expect("catalog networks are well formed")
}

fn braid(s: &str) -> Option<BraidWord> {
    Some(s.parse().expect("catalog braid"))
}

fn simple_closure(n: u32) -> ContractionNetwork {
    ContractionNetwork::new()
        .node(power(&s(), n), "y a x b")
        .node(cc(OmegaPlus), "a c")
        .node(cc(MhoMinus), "b c")
        .free("y x")
}

fn figure_eight() -> ContractionNetwork {
    ContractionNetwork::new()
        .node(compose_xl_xr(&si()), "y b a c")
        .node(twist_right(&s()), "c e d f")
        .node(s(), "a d x g")
        .node(cc(OmegaMinus), "b e")
        .node(cc(MhoMinus), "g f")
        .free("y x")
}

/// `W^{c i}_{x d}`, the lower half of the Whitehead link.
pub fn whitehead_lower() -> Tensor {
    contract(
        ContractionNetwork::new()
            .node(power(&si(), 2), "c e x f")
            .node(power(&twist_down(&s()), 2), "g i h d")
            .node(cc(OmegaPlus), "e g")
            .node(cc(MhoMinus), "f h")
            .free("c i x d"),
    )
}

fn whitehead() -> ContractionNetwork {
    ContractionNetwork::new()
        .node(whitehead_lower(), "c i x d")
        .node(compose_xr_xl(&s()), "a y i b")
        .node(cc(OmegaPlus), "c a")
        .node(cc(MhoPlus), "d b")
        .free("y x")
}

/// Upper rank-6 block of 8_17, slots `(y c e | b d f)`.
pub fn eight_seventeen_upper() -> Tensor {
    contract(
        ContractionNetwork::new()
            .node(power(&si(), 2), "c e g f")
            .node(power(&s(), 2), "y g b d")
            .free("y c e b d f"),
    )
}

/// Lower rank-6 block of 8_17, slots `(b d f | x i j)`.
pub fn eight_seventeen_lower() -> Tensor {
    contract(
        ContractionNetwork::new()
            .node(si(), "d f k l")
            .node(s(), "b k m n")
            .node(si(), "n l o j")
            .node(s(), "m o x i")
            .free("b d f x i j"),
    )
}

/// The two halves of [`eight_seventeen_lower`]; stacked they give it back.
pub fn eight_seventeen_lower_split() -> (Tensor, Tensor) {
    let top = contract(
        ContractionNetwork::new()
            .node(si(), "d f k l")
            .node(s(), "b k m n")
            .free("b d f m n l"),
    );
    let bottom = contract(
        ContractionNetwork::new()
            .node(si(), "n l o j")
            .node(s(), "m o x i")
            .free("m n l x i j"),
    );
    (top, bottom)
}

fn eight_seventeen() -> ContractionNetwork {
    ContractionNetwork::new()
        .node(eight_seventeen_upper(), "y c e b d f")
        .node(eight_seventeen_lower(), "b d f x i j")
        .node(cc(OmegaPlus), "c r")
        .node(cc(MhoMinus), "i r")
        .node(cc(OmegaPlus), "e q")
        .node(cc(MhoMinus), "j q")
        .free("y x")
}

/// `N^{a y}_{b h}` of 9_42.
pub fn nine_fortytwo_block() -> Tensor {
    contract(
        ContractionNetwork::new()
            .node(power(&twist_down(&s()), 2), "a c b d")
            .node(power(&si(), 3), "e y f h")
            .node(cc(OmegaMinus), "c e")
            .node(cc(MhoPlus), "d f")
            .free("a y b h"),
    )
}

fn nine_fortytwo() -> ContractionNetwork {
    ContractionNetwork::new()
        .node(nine_fortytwo_block(), "a y b h")
        .node(compose_xd_x(&si()), "b h i j")
        .node(compose_x_xd(&s()), "k i x m")
        .node(cc(MhoPlus), "m j")
        .node(cc(OmegaPlus), "k a")
        .free("y x")
}

fn ten_fortyeight() -> ContractionNetwork {
    ContractionNetwork::new()
        .node(power(&si(), 2), "a y b f")
        .node(power(&s(), 4), "f g d h")
        .node(power(&si(), 3), "b d c e")
        .node(s(), "e h x i")
        .node(cc(OmegaMinus), "j a")
        .node(cc(MhoPlus), "j c")
        .node(cc(OmegaPlus), "g k")
        .node(cc(MhoMinus), "i k")
        .free("y x")
}

/// `KTA^{a b}_{q c}`.
pub fn kta() -> Tensor {
    contract(
        ContractionNetwork::new()
            .node(compose_x_xd(&s()), "a b d e")
            .node(power(&si(), 2), "d f q g")
            .node(twist_down(&si()), "h e i c")
            .node(cc(OmegaPlus), "f h")
            .node(cc(MhoMinus), "g i")
            .free("a b q c"),
    )
}

/// `KTA'`, the reflection of [`kta`] in a horizontal line.
pub fn kta_prime() -> Tensor {
    contract(
        ContractionNetwork::new()
            .node(power(&si(), 2), "a f d g")
            .node(twist_down(&si()), "h b i e")
            .node(compose_x_xd(&s()), "d e q c")
            .node(cc(OmegaPlus), "f h")
            .node(cc(MhoMinus), "g i")
            .free("a b q c"),
    )
}

pub fn ktb() -> Tensor {
    contract(
        ContractionNetwork::new()
            .node(s(), "d b a c")
            .node(power(&twist_down(&s()), 2), "l f m n")
            .node(compose_x_xd(&si()), "a n e g")
            .node(cc(OmegaPlus), "b l")
            .node(cc(MhoMinus), "c m")
            .free("d f e g"),
    )
}

pub fn ktc() -> Tensor {
    contract(
        ContractionNetwork::new()
            .node(ktb(), "d f e g")
            .node(compose_xl_xr(&si()), "h j i k")
            .node(cc(OmegaMinus), "f h")
            .node(cc(MhoPlus), "g i")
            .free("d j e k"),
    )
}

fn kt_with(a: Tensor, c: Tensor) -> ContractionNetwork {
    ContractionNetwork::new()
        .node(a, "a b x c")
        .node(c, "d j e k")
        .node(cc(OmegaMinus), "b d")
        .node(cc(MhoPlus), "c e")
        .node(cc(OmegaPlus), "a j")
        .node(cc(MhoPlus), "k y")
        .free("y x")
}

/// Networks for the Kinoshita–Terasaka knot and its mutant.
pub fn kt_pair() -> (ContractionNetwork, ContractionNetwork) {
    let c = ktc();
    (kt_with(kta(), c.clone()), kt_with(kta_prime(), c))
}

/// The `(p, q, r)` pretzel knot: three twisted towers of negative crossings.
pub fn pretzel(p: u32, q: u32, r: u32) -> Result<ContractionNetwork> {
    let ok = [p, q, r].iter().all(|&n| n > 1 && n % 2 == 1) && p != q && q != r && p != r;
    if !ok {
        return Err(Error::BadPretzelParams(p, q, r));
    }
    let x = si();
    Ok(ContractionNetwork::new()
        .node(tower_rlr(&x, p)?, "a c x d")
        .node(tower_rlr(&x, q)?, "e g f h")
        .node(tower_rlr(&x, r)?, "i k j l")
        .node(cc(OmegaMinus), "a k")
        .node(cc(OmegaPlus), "c e")
        .node(cc(OmegaPlus), "g i")
        .node(cc(MhoPlus), "d f")
        .node(cc(MhoPlus), "h j")
        .node(cc(MhoPlus), "l y")
        .free("y x"))
}

fn expected(name: &str) -> Option<LaurentPoly> {
    fixtures()
        .iter()
        .find(|f| f.name == name)
        .map(|f| f.expected.clone())
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    let key = normalize_name(name);
    let name = *NAMES
        .iter()
        .find(|n| **n == key)
        .ok_or_else(|| Error::UnknownLink(name.to_owned()))?;
    let (braid_word, printed, network, writhe, chiral) = match name {
        "0_1" => (
            braid("n=1"),
            None,
            Some(
                ContractionNetwork::new()
                    .node(Tensor::identity2(), "y x")
                    .free("y x"),
            ),
            Some(0),
            Some(false),
        ),
        "2^2_1" => (
            braid("n=2; 1 1"),
            None,
            Some(simple_closure(2)),
            Some(2),
            Some(false),
        ),
        "3_1" => (
            braid("n=2; 1 1 1"),
            None,
            Some(simple_closure(3)),
            Some(3),
            Some(true),
        ),
        "4_1" => (
            braid("n=3; 1 -2 1 -2"),
            None,
            Some(figure_eight()),
            Some(0),
            Some(false),
        ),
        "5^2_1" => (
            braid("n=3; -1 2 -1 2 2"),
            braid("n=3; 1 -2 1 -2 -2"),
            Some(whitehead()),
            Some(1),
            Some(true),
        ),
        "8_17" => (
            braid("n=3; -1 2 -1 2 2 -1 -1 2"),
            braid("n=3; -1 2 -1 2 2 2 -1 -1 2"),
            Some(eight_seventeen()),
            Some(0),
            Some(false),
        ),
        "9_42" => (
            braid("n=4; -1 -1 -1 -3 2 -3 1 1 2"),
            braid("n=4; 1 1 1 3 -2 3 -1 -1 -2"),
            Some(nine_fortytwo()),
            Some(1),
            Some(true),
        ),
        "10_48" => (
            braid("n=3; -1 -1 2 2 2 2 -1 -1 -1 2"),
            None,
            Some(ten_fortyeight()),
            Some(0),
            Some(true),
        ),
        "KT" => (None, None, Some(kt_pair().0), None, None),
        "KT'" => (None, None, Some(kt_pair().1), None, None),
        _ => unreachable!(),
    };
    Ok(CatalogEntry {
        name,
        printed_braid: printed.or_else(|| braid_word.clone()),
        braid: braid_word,
        network,
        expected: expected(name),
        writhe,
        chiral,
    })
}

pub fn all() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| get(n).expect("known name")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::{lg_invariant, Chirality};
    use crate::tensor::stack;

    #[test]
    fn names() {
        assert_eq!(normalize_name("5²₁"), "5^2_1");
        assert_eq!(normalize_name("8₁₇"), "8_17");
        assert_eq!(normalize_name("8_{17}"), "8_17");
        assert_eq!(normalize_name("5_1^2"), "5^2_1");
        assert_eq!(normalize_name("kt′"), "KT'");
        assert_eq!(get("0₁").unwrap().name, "0_1");
        assert!(matches!(get("6₁"), Err(Error::UnknownLink(n)) if n == "6₁"));
    }

    #[test]
    fn fixtures_cover_catalog() {
        let f = fixtures();
        assert_eq!(f.iter().map(|f| f.name.as_str()).collect::<Vec<_>>(), NAMES);
        let counts: Vec<usize> = f.iter().map(|f| f.expected.len()).collect();
        assert_eq!(counts, [1, 4, 8, 9, 15, 43, 25, 69, 40, 40]);
        assert!(get("0_1").unwrap().expected.unwrap().is_one());
        for e in all() {
            assert!(e.braid.is_some() || e.network.is_some());
            assert_eq!(f.iter().find(|x| x.name == e.name).unwrap().braid, e.braid);
        }
    }

    #[test]
    fn printed_braids() {
        let e = get("9_42").unwrap();
        assert_eq!(
            e.printed_braid.unwrap().letters(),
            &[1, 1, 1, 3, -2, 3, -1, -1, -2]
        );
        assert_eq!(e.braid.unwrap().strands(), 4);
        let w = get("5^2_1").unwrap();
        assert_eq!(
            w.printed_braid.as_ref().unwrap().reflect(),
            w.braid.unwrap()
        );
        assert_eq!(get("3_1").unwrap().printed_braid, get("3_1").unwrap().braid);
    }

    #[test]
    fn small_links_both_paths() {
        for name in ["0_1", "2^2_1", "3_1", "4_1", "5^2_1"] {
            let e = get(name).unwrap();
            let want = e.expected.clone().unwrap();
            assert_eq!(e.evaluate_braid().unwrap().unwrap(), want, "{name} braid");
            assert_eq!(
                e.evaluate_network().unwrap().unwrap(),
                want,
                "{name} network"
            );
        }
    }

    #[test]
    fn every_entry_matches_and_is_symmetric() {
        for e in all() {
            let want = e.expected.clone().unwrap();
            for got in [e.evaluate_braid(), e.evaluate_network()]
                .into_iter()
                .flatten()
            {
                let got = got.unwrap();
                assert_eq!(got, want, "{}", e.name);
                assert!(got.is_inversion_symmetric(), "{}", e.name);
            }
        }
    }

    #[test]
    fn eight_seventeen_printed_braid_misses() {
        let e = get("8_17").unwrap();
        let printed = e.printed_braid.as_ref().unwrap();
        assert_eq!(printed.letters().len(), 9);
        assert_eq!(e.braid.as_ref().unwrap().writhe(), 0);
        let got = lg_invariant(printed).unwrap();
        let want = e.expected.unwrap();
        assert_ne!(got, want);
        assert_ne!(got, want.substitute(crate::ring::Substitution::Reflect));
    }

    #[test]
    fn whitehead_printed_braid_is_the_mirror() {
        let e = get("5^2_1").unwrap();
        let printed = lg_invariant(e.printed_braid.as_ref().unwrap()).unwrap();
        let want = e.expected.unwrap();
        assert_ne!(printed, want);
        assert_eq!(printed, want.substitute(crate::ring::Substitution::Reflect));
    }

    #[test]
    fn eight_seventeen_split() {
        let (top, bottom) = eight_seventeen_lower_split();
        let joined = contract(
            ContractionNetwork::new()
                .node(top, "b d f m n l")
                .node(bottom, "m n l x i j")
                .free("b d f x i j"),
        );
        assert_eq!(joined, eight_seventeen_lower());
    }

    #[test]
    fn pretzel_params() {
        assert_eq!(
            pretzel(3, 3, 5).unwrap_err(),
            Error::BadPretzelParams(3, 3, 5)
        );
        assert!(pretzel(1, 3, 5).is_err());
        assert!(pretzel(4, 3, 5).is_err());
        assert!(pretzel(3, 5, 7).is_ok());
    }

    #[test]
    fn towers_in_pretzels_cancel() {
        // Gluing a positive tower onto the negative one unwinds it.
        let x = s();
        let (l, r) = (crate::tensor::twist_left(&x), twist_right(&x));
        let undo = stack(&stack(&l, &r), &l);
        assert_eq!(
            stack(&tower_rlr(&si(), 3).unwrap(), &undo),
            Tensor::identity4()
        );
    }

    #[test]
    fn chirality_column() {
        for e in all()
            .into_iter()
            .filter(|e| e.chiral.is_some() && e.name != "2^2_1")
            .take(5)
        {
            let v = e.evaluate().unwrap();
            let want = if e.chiral.unwrap() {
                Chirality::Chiral
            } else {
                Chirality::Inconclusive
            };
            assert_eq!(Chirality::of(&v), want, "{}", e.name);
        }
        // The table lists the Hopf link as achiral, which holds unoriented;
        // the oriented positive Hopf link is not isotopic to its mirror and
        // the invariant sees that.
        let hopf = get("2^2_1").unwrap().expected.unwrap();
        assert_eq!(Chirality::of(&hopf), Chirality::Chiral);
    }
}
