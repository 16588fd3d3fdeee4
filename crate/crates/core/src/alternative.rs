//! Alternatives, strict rankings and relabelings.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Alternative {
    X,
    Y,
    Z,
}

impl Alternative {
    pub const ALL: [Alternative; 3] = [Alternative::X, Alternative::Y, Alternative::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Alternative {
        Self::ALL[i]
    }

    pub fn symbol(self) -> char {
        match self {
            Alternative::X => 'x',
            Alternative::Y => 'y',
            Alternative::Z => 'z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Alternative> {
        match c {
            'x' => Some(Alternative::X),
            'y' => Some(Alternative::Y),
            'z' => Some(Alternative::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Alternative {
    type Err = RankingParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let mut chars = t.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => {
                Alternative::from_symbol(c).ok_or_else(|| RankingParseError::UnknownAlternative(t.to_string()))
            }
            _ => Err(RankingParseError::UnknownAlternative(t.to_string())),
        }
    }
}

/// A set of alternatives, stored as a 3-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AltSet(u8);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);
    pub const ALL: AltSet = AltSet(0b111);

    pub fn singleton(a: Alternative) -> AltSet {
        AltSet(1 << a.index())
    }

    pub fn from_alts(alts: &[Alternative]) -> AltSet {
        alts.iter().fold(AltSet::EMPTY, |s, &a| s.with(a))
    }

    pub fn with(self, a: Alternative) -> AltSet {
        AltSet(self.0 | (1 << a.index()))
    }

    pub fn without(self, a: Alternative) -> AltSet {
        AltSet(self.0 & !(1 << a.index()))
    }

    pub fn contains(self, a: Alternative) -> bool {
        self.0 & (1 << a.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self) -> AltSet {
        AltSet(!self.0 & 0b111)
    }

    pub fn intersection(self, other: AltSet) -> AltSet {
        AltSet(self.0 & other.0)
    }

    pub fn is_disjoint(self, other: AltSet) -> bool {
        self.0 & other.0 == 0
    }

    /// The sole member, if there is exactly one.
    pub fn single(self) -> Option<Alternative> {
        if self.len() == 1 {
            self.iter().next()
        } else {
            None
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Alternative> {
        Alternative::ALL.into_iter().filter(move |&a| self.contains(a))
    }

    /// All two-element subsets in canonical order.
    pub fn pairs() -> [AltSet; 3] {
        use Alternative::*;
        [AltSet::from_alts(&[X, Y]), AltSet::from_alts(&[X, Z]), AltSet::from_alts(&[Y, Z])]
    }
}

impl fmt::Display for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankingParseError {
    #[error("unknown alternative `{0}`")]
    UnknownAlternative(String),
    #[error("ranking `{0}` must list three alternatives")]
    WrongLength(String),
    #[error("ranking `{0}` repeats an alternative")]
    Repeated(String),
}

/// A strict linear order on the three alternatives, best first.
///
/// Rankings are identified with their index in canonical order
/// `x>y>z, x>z>y, y>x>z, y>z>x, z>x>y, z>y>x`, which is also their
/// `Ord` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ranking(u8);

const ORDERS: [[Alternative; 3]; 6] = {
    use Alternative::*;
    [[X, Y, Z], [X, Z, Y], [Y, X, Z], [Y, Z, X], [Z, X, Y], [Z, Y, X]]
};

impl Ranking {
    pub fn all() -> impl Iterator<Item = Ranking> {
        (0..6u8).map(Ranking)
    }

    pub fn from_index(i: usize) -> Ranking {
        assert!(i < 6, "ranking index out of range");
        Ranking(i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_order(order: [Alternative; 3]) -> Option<Ranking> {
        ORDERS.iter().position(|o| *o == order).map(|i| Ranking(i as u8))
    }

    pub fn order(self) -> [Alternative; 3] {
        ORDERS[self.index()]
    }

    pub fn top(self) -> Alternative {
        self.order()[0]
    }

    pub fn middle(self) -> Alternative {
        self.order()[1]
    }

    pub fn bottom(self) -> Alternative {
        self.order()[2]
    }

    /// Zero for the top alternative, two for the bottom one.
    pub fn position(self, a: Alternative) -> usize {
        self.order().iter().position(|&b| b == a).expect("every alternative is ranked")
    }

    /// Strict preference of `a` over `b`.
    pub fn prefers(self, a: Alternative, b: Alternative) -> bool {
        self.position(a) < self.position(b)
    }

    /// Prefers every member of `better` to every member of `worse`.
    pub fn prefers_all(self, better: AltSet, worse: AltSet) -> bool {
        better.iter().all(|a| worse.iter().all(|b| self.prefers(a, b)))
    }

    /// Number of alternatives of `within` ranked strictly below `a`.
    pub fn beaten_within(self, a: Alternative, within: AltSet) -> usize {
        within.iter().filter(|&b| self.prefers(a, b)).count()
    }

    /// Three-letter form without separators, as in `xzy`.
    pub fn compact(self) -> String {
        self.order().iter().map(|a| a.symbol()).collect()
    }

    /// Accepts the three-letter form `xzy`.
    pub fn from_compact(s: &str) -> Result<Ranking, RankingParseError> {
        let alts = s
            .trim()
            .chars()
            .map(|c| Alternative::from_symbol(c).ok_or_else(|| RankingParseError::UnknownAlternative(c.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        ranking_from_list(&alts, s)
    }
}

fn ranking_from_list(alts: &[Alternative], source: &str) -> Result<Ranking, RankingParseError> {
    if alts.len() != 3 {
        return Err(RankingParseError::WrongLength(source.trim().to_string()));
    }
    let order = [alts[0], alts[1], alts[2]];
    Ranking::from_order(order).ok_or_else(|| RankingParseError::Repeated(source.trim().to_string()))
}

/// Parses `x>y>z` style text. Whitespace around names is ignored.
pub fn parse_ranking(text: &str) -> Result<Ranking, RankingParseError> {
    let alts = text.split('>').map(str::parse::<Alternative>).collect::<Result<Vec<_>, _>>()?;
    ranking_from_list(&alts, text)
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.order();
        write!(f, "{a}>{b}>{c}")
    }
}

impl FromStr for Ranking {
    type Err = RankingParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ranking(s)
    }
}

/// A relabeling of the alternatives, stored as the images of `x`, `y`, `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation([Alternative; 3]);

impl Permutation {
    pub fn identity() -> Permutation {
        Permutation(Alternative::ALL)
    }

    /// `images[i]` is where the i-th alternative goes. Returns `None` unless
    /// the images are a rearrangement of all three.
    pub fn from_images(images: [Alternative; 3]) -> Option<Permutation> {
        Ranking::from_order(images).map(|_| Permutation(images))
    }

    /// Transposition of two alternatives.
    pub fn swap(a: Alternative, b: Alternative) -> Permutation {
        let mut images = Alternative::ALL;
        images.swap(a.index(), b.index());
        Permutation(images)
    }

    /// All six relabelings in canonical order of their image lists.
    pub fn all() -> impl Iterator<Item = Permutation> {
        Ranking::all().map(|r| Permutation(r.order()))
    }

    pub fn apply(self, a: Alternative) -> Alternative {
        self.0[a.index()]
    }

    pub fn apply_ranking(self, r: Ranking) -> Ranking {
        let [a, b, c] = r.order();
        Ranking::from_order([self.apply(a), self.apply(b), self.apply(c)]).expect("bijection maps rankings to rankings")
    }

    pub fn apply_set(self, s: AltSet) -> AltSet {
        s.iter().fold(AltSet::EMPTY, |acc, a| acc.with(self.apply(a)))
    }

    pub fn inverse(self) -> Permutation {
        let mut images = Alternative::ALL;
        for a in Alternative::ALL {
            images[self.apply(a).index()] = a;
        }
        Permutation(images)
    }

    pub fn images(self) -> [Alternative; 3] {
        self.0
    }

    /// Three-letter image list, as in `zxy` for x->z, y->x, z->y.
    pub fn compact(self) -> String {
        self.0.iter().map(|a| a.symbol()).collect()
    }

    pub fn from_compact(s: &str) -> Result<Permutation, RankingParseError> {
        Ranking::from_compact(s).map(|r| Permutation(r.order()))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "x->{a}, y->{b}, z->{c}")
    }
}
