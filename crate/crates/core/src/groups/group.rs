//! Groups with canonical element normal forms.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A group element in normal form. Normal forms are canonical, so derived
/// equality, ordering and hashing are those of the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Residue for `Cyclic`, row index for `FiniteTable`, coordinate for
    /// finite coordinate spaces.
    Index(usize),
    /// Image list of a permutation of `0..n`.
    Perm(Vec<u8>),
    /// Point of `Z^d`.
    Lattice(Vec<i64>),
    /// Freely reduced word; letter `i > 0` is the `i`-th generator and `-i`
    /// its inverse.
    Word(Vec<i8>),
    /// Lamplighter element: head position and the sorted set of lit lamps.
    Lamp { pos: i64, lamps: Vec<i64> },
}

impl Element {
    /// The integer of a `Z` element, if this is one.
    pub fn as_z(&self) -> Option<i64> {
        match self {
            Element::Lattice(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }

    pub fn z(n: i64) -> Element {
        Element::Lattice(vec![n])
    }
}

/// Multiplication table of a finite group, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl CayleyTable {
    pub fn new(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidInput("multiplication table must be square over 0..n".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::InvalidInput("table has no identity".into()))?;
        let mut inverse = vec![0; n];
        for (x, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| mul[x][y] == identity && mul[y][x] == identity)
                .ok_or_else(|| Error::InvalidInput(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidInput(format!("table not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(CayleyTable { mul, identity, inverse })
    }

    pub fn len(&self) -> usize {
        self.mul.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mul.is_empty()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.mul
    }
}

/// The groups the library can compute in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupHandle {
    FiniteTable(Arc<CayleyTable>),
    Cyclic(usize),
    Symmetric(usize),
    ZPower(usize),
    Free(usize),
    /// `(Z/2) wr Z`.
    Lamplighter,
}

const FREE_LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

impl GroupHandle {
    pub fn integers() -> Self {
        GroupHandle::ZPower(1)
    }

    pub fn is_integers(&self) -> bool {
        *self == GroupHandle::ZPower(1)
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupHandle::FiniteTable(t) => Element::Index(t.identity),
            GroupHandle::Cyclic(_) => Element::Index(0),
            GroupHandle::Symmetric(n) => Element::Perm((0..*n as u8).collect()),
            GroupHandle::ZPower(d) => Element::Lattice(vec![0; *d]),
            GroupHandle::Free(_) => Element::Word(Vec::new()),
            GroupHandle::Lamplighter => Element::Lamp { pos: 0, lamps: Vec::new() },
        }
    }

    /// Checks that `g` is a well-formed normal form for this group.
    pub fn contains(&self, g: &Element) -> bool {
        match (self, g) {
            (GroupHandle::FiniteTable(t), Element::Index(i)) => *i < t.len(),
            (GroupHandle::Cyclic(q), Element::Index(i)) => i < q,
            (GroupHandle::Symmetric(n), Element::Perm(p)) => {
                p.len() == *n
                    && p.iter().copied().collect::<BTreeSet<_>>().len() == *n
                    && p.iter().all(|&x| (x as usize) < *n)
            }
            (GroupHandle::ZPower(d), Element::Lattice(v)) => v.len() == *d,
            (GroupHandle::Free(k), Element::Word(w)) => {
                w.iter().all(|&l| l != 0 && (l.unsigned_abs() as usize) <= *k) && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupHandle::Lamplighter, Element::Lamp { lamps, .. }) => lamps.windows(2).all(|p| p[0] < p[1]),
            _ => false,
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (GroupHandle::FiniteTable(t), Element::Index(x), Element::Index(y)) => Element::Index(t.mul[*x][*y]),
            (GroupHandle::Cyclic(q), Element::Index(x), Element::Index(y)) => Element::Index((x + y) % q),
            // (ab)(i) = a(b(i))
            (GroupHandle::Symmetric(_), Element::Perm(p), Element::Perm(r)) => {
                Element::Perm(r.iter().map(|&i| p[i as usize]).collect())
            }
            (GroupHandle::ZPower(_), Element::Lattice(x), Element::Lattice(y)) => {
                Element::Lattice(x.iter().zip(y).map(|(s, t)| s + t).collect())
            }
            (GroupHandle::Free(_), Element::Word(x), Element::Word(y)) => {
                let mut w = x.clone();
                for &l in y {
                    if w.last() == Some(&-l) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                Element::Word(w)
            }
            (GroupHandle::Lamplighter, Element::Lamp { pos: p1, lamps: l1 }, Element::Lamp { pos: p2, lamps: l2 }) => {
                // (p1, L1)(p2, L2) = (p1 + p2, L1 xor (L2 + p1))
                let mut set: BTreeSet<i64> = l1.iter().copied().collect();
                for &i in l2 {
                    let j = i + p1;
                    if !set.remove(&j) {
                        set.insert(j);
                    }
                }
                Element::Lamp { pos: p1 + p2, lamps: set.into_iter().collect() }
            }
            _ => panic!("element kinds do not match group {self}"),
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        match (self, a) {
            (GroupHandle::FiniteTable(t), Element::Index(x)) => Element::Index(t.inverse[*x]),
            (GroupHandle::Cyclic(q), Element::Index(x)) => Element::Index((q - x % q) % q),
            (GroupHandle::Symmetric(n), Element::Perm(p)) => {
                let mut out = vec![0u8; *n];
                for (i, &x) in p.iter().enumerate() {
                    out[x as usize] = i as u8;
                }
                Element::Perm(out)
            }
            (GroupHandle::ZPower(_), Element::Lattice(x)) => Element::Lattice(x.iter().map(|s| -s).collect()),
            (GroupHandle::Free(_), Element::Word(w)) => Element::Word(w.iter().rev().map(|l| -l).collect()),
            (GroupHandle::Lamplighter, Element::Lamp { pos, lamps }) => {
                Element::Lamp { pos: -pos, lamps: lamps.iter().map(|i| i - pos).collect() }
            }
            _ => panic!("element kind does not match group {self}"),
        }
    }

    pub fn pow(&self, g: &Element, n: u64) -> Element {
        let mut acc = self.identity();
        for _ in 0..n {
            acc = self.mul(&acc, g);
        }
        acc
    }

    /// Number of elements, `None` for infinite groups.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupHandle::FiniteTable(t) => Some(t.len()),
            GroupHandle::Cyclic(q) => Some(*q),
            GroupHandle::Symmetric(n) => Some((1..=*n).product()),
            GroupHandle::ZPower(0) | GroupHandle::Free(0) => Some(1),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// All elements in a fixed order (identity first for cyclic and table
    /// groups), for finite groups.
    pub fn elements(&self) -> Option<Vec<Element>> {
        match self {
            GroupHandle::FiniteTable(t) => Some((0..t.len()).map(Element::Index).collect()),
            GroupHandle::Cyclic(q) => Some((0..*q).map(Element::Index).collect()),
            GroupHandle::Symmetric(n) => {
                let mut out = Vec::new();
                permutations(&mut (0..*n as u8).collect::<Vec<_>>(), 0, &mut out);
                out.sort();
                Some(out.into_iter().map(Element::Perm).collect())
            }
            GroupHandle::ZPower(0) | GroupHandle::Free(0) => Some(vec![self.identity()]),
            _ => None,
        }
    }

    /// Order of `g`, searched up to `bound`; `None` if not reached.
    pub fn element_order(&self, g: &Element, bound: u64) -> Option<u64> {
        let e = self.identity();
        let mut acc = g.clone();
        for k in 1..=bound {
            if acc == e {
                return Some(k);
            }
            acc = self.mul(&acc, g);
        }
        None
    }

    /// A symmetric generating set: the support of the simple random walk.
    pub fn standard_generators(&self) -> Vec<Element> {
        let mut gens: Vec<Element> = match self {
            GroupHandle::FiniteTable(t) => (0..t.len()).filter(|&i| i != t.identity).map(Element::Index).collect(),
            GroupHandle::Cyclic(q) => {
                if *q <= 1 {
                    Vec::new()
                } else {
                    vec![Element::Index(1), Element::Index(q - 1)]
                }
            }
            GroupHandle::Symmetric(n) => {
                if *n <= 1 {
                    Vec::new()
                } else {
                    let mut swap: Vec<u8> = (0..*n as u8).collect();
                    swap.swap(0, 1);
                    let cycle: Vec<u8> = (0..*n as u8).map(|i| (i + 1) % *n as u8).collect();
                    let c = Element::Perm(cycle);
                    vec![Element::Perm(swap), self.inv(&c), c]
                }
            }
            GroupHandle::ZPower(d) => (0..*d)
                .flat_map(|i| {
                    let mut plus = vec![0; *d];
                    plus[i] = 1;
                    let minus = plus.iter().map(|x| -x).collect();
                    [Element::Lattice(plus), Element::Lattice(minus)]
                })
                .collect(),
            GroupHandle::Free(k) => {
                (1..=*k as i8).flat_map(|l| [Element::Word(vec![l]), Element::Word(vec![-l])]).collect()
            }
            GroupHandle::Lamplighter => vec![
                Element::Lamp { pos: 1, lamps: Vec::new() },
                Element::Lamp { pos: -1, lamps: Vec::new() },
                Element::Lamp { pos: 0, lamps: vec![0] },
            ],
        };
        gens.sort();
        gens.dedup();
        gens
    }

    /// Elements of word length at most `radius` for the standard generators.
    pub fn ball(&self, radius: usize) -> Vec<Element> {
        let gens = self.standard_generators();
        let mut seen: HashMap<Element, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity(), 0);
        queue.push_back(self.identity());
        while let Some(x) = queue.pop_front() {
            let d = seen[&x];
            if d == radius {
                continue;
            }
            for s in &gens {
                let y = self.mul(&x, s);
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), d + 1);
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<Element> = seen.into_keys().collect();
        out.sort();
        out
    }

    pub fn format_element(&self, g: &Element) -> String {
        match g {
            Element::Index(i) => i.to_string(),
            Element::Perm(p) => format!("[{}]", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
            Element::Lattice(v) => format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
            Element::Word(w) if w.is_empty() => "e".to_string(),
            Element::Word(w) => w
                .iter()
                .map(|&l| {
                    let c = FREE_LETTERS[(l.unsigned_abs() - 1) as usize] as char;
                    if l > 0 {
                        c
                    } else {
                        c.to_ascii_uppercase()
                    }
                })
                .collect(),
            Element::Lamp { pos, lamps } => {
                format!("{pos};{{{}}}", lamps.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad element {s:?} for group {self}"));
        let g = match self {
            GroupHandle::FiniteTable(_) | GroupHandle::Cyclic(_) => Element::Index(s.parse().map_err(|_| bad())?),
            GroupHandle::Symmetric(_) => {
                let inner = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
                Element::Perm(parse_list(inner).map_err(|_| bad())?)
            }
            GroupHandle::ZPower(_) => {
                let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')'));
                match inner {
                    Some(inner) => Element::Lattice(parse_list(inner).map_err(|_| bad())?),
                    // Bare integers are accepted for Z.
                    None => Element::Lattice(vec![s.parse().map_err(|_| bad())?]),
                }
            }
            GroupHandle::Free(_) => {
                if s == "e" || s.is_empty() {
                    Element::Word(Vec::new())
                } else {
                    let mut w = Vec::new();
                    for c in s.chars() {
                        let lower = c.to_ascii_lowercase() as u8;
                        let idx = FREE_LETTERS.iter().position(|&x| x == lower).ok_or_else(bad)?;
                        let l = idx as i8 + 1;
                        w.push(if c.is_ascii_uppercase() { -l } else { l });
                    }
                    // Reduce by multiplying letter by letter.
                    w.into_iter().fold(self.identity(), |acc, l| self.mul(&acc, &Element::Word(vec![l])))
                }
            }
            GroupHandle::Lamplighter => {
                let (pos, rest) = s.split_once(';').ok_or_else(bad)?;
                let inner = rest.trim().strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(bad)?;
                let mut lamps: Vec<i64> = parse_list(inner).map_err(|_| bad())?;
                lamps.sort();
                lamps.dedup();
                Element::Lamp { pos: pos.trim().parse().map_err(|_| bad())?, lamps }
            }
        };
        if self.contains(&g) {
            Ok(g)
        } else {
            Err(bad())
        }
    }
}

fn parse_list<T: FromStr>(s: &str) -> std::result::Result<Vec<T>, T::Err> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse()).collect()
}

fn permutations(items: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

impl fmt::Display for GroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupHandle::FiniteTable(t) => write!(f, "table:{}", t.len()),
            GroupHandle::Cyclic(q) => write!(f, "cyclic:{q}"),
            GroupHandle::Symmetric(n) => write!(f, "sym:{n}"),
            GroupHandle::ZPower(d) => write!(f, "z:{d}"),
            GroupHandle::Free(k) => write!(f, "free:{k}"),
            GroupHandle::Lamplighter => write!(f, "lamplighter"),
        }
    }
}

impl FromStr for GroupHandle {
    type Err = Error;

    /// Parses `cyclic:q`, `sym:n`, `z:d` (or `z`), `free:k`, `lamplighter`.
    /// Table groups are built from JSON with [`CayleyTable::new`].
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, param) = match s.split_once(':') {
            Some((k, p)) => (k, Some(p)),
            None => (s, None),
        };
        let num = |p: Option<&str>| -> Result<usize> {
            p.ok_or_else(|| Error::Parse(format!("group {s:?} needs a parameter")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad group parameter in {s:?}")))
        };
        match kind {
            "cyclic" => {
                let q = num(param)?;
                if q == 0 {
                    return Err(Error::Parse("cyclic group needs q >= 1".into()));
                }
                Ok(GroupHandle::Cyclic(q))
            }
            "sym" | "symmetric" => {
                let n = num(param)?;
                if n == 0 || n > 8 {
                    return Err(Error::Parse("symmetric group needs 1 <= n <= 8".into()));
                }
                Ok(GroupHandle::Symmetric(n))
            }
            "z" | "zpower" => Ok(GroupHandle::ZPower(param.map_or(Ok(1), |p| num(Some(p)))?)),
            "free" => {
                let k = num(param)?;
                if k > FREE_LETTERS.len() {
                    return Err(Error::Parse("free group rank too large".into()));
                }
                Ok(GroupHandle::Free(k))
            }
            "lamplighter" => Ok(GroupHandle::Lamplighter),
            _ => Err(Error::Parse(format!("unknown group kind {kind:?}"))),
        }
    }
}

impl Serialize for GroupHandle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupHandle::FiniteTable(t) => {
                #[derive(Serialize)]
                struct Table<'a> {
                    table: &'a [Vec<usize>],
                }
                Table { table: t.rows() }.serialize(s)
            }
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for GroupHandle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Table { table: Vec<Vec<usize>> },
        }
        match Raw::deserialize(d)? {
            Raw::Name(s) => s.parse().map_err(D::Error::custom),
            Raw::Table { table } => {
                CayleyTable::new(table).map(|t| GroupHandle::FiniteTable(Arc::new(t))).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(g: &GroupHandle, rng: &mut ChaCha8Rng) -> Element {
        if let Some(all) = g.elements() {
            return all[rng.gen_range(0..all.len())].clone();
        }
        let gens = g.standard_generators();
        let mut x = g.identity();
        for _ in 0..rng.gen_range(0..8) {
            x = g.mul(&x, &gens[rng.gen_range(0..gens.len())]);
        }
        x
    }

    fn sample_groups() -> Vec<GroupHandle> {
        let s3 = vec![
            vec![0, 1, 2, 3, 4, 5],
            vec![1, 2, 0, 4, 5, 3],
            vec![2, 0, 1, 5, 3, 4],
            vec![3, 5, 4, 0, 2, 1],
            vec![4, 3, 5, 1, 0, 2],
            vec![5, 4, 3, 2, 1, 0],
        ];
        vec![
            GroupHandle::Cyclic(6),
            GroupHandle::Symmetric(4),
            GroupHandle::ZPower(2),
            GroupHandle::Free(2),
            GroupHandle::Lamplighter,
            GroupHandle::FiniteTable(Arc::new(CayleyTable::new(s3).unwrap())),
        ]
    }

    #[test]
    fn group_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in sample_groups() {
            let e = g.identity();
            for _ in 0..200 {
                let a = random_element(&g, &mut rng);
                let b = random_element(&g, &mut rng);
                let c = random_element(&g, &mut rng);
                assert!(g.contains(&a));
                assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)), "{g}");
                assert_eq!(g.inv(&g.inv(&a)), a);
                assert_eq!(g.mul(&a, &g.inv(&a)), e);
                assert_eq!(g.mul(&e, &a), a);
            }
        }
    }

    #[test]
    fn element_strings_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in sample_groups() {
            for _ in 0..50 {
                let a = random_element(&g, &mut rng);
                let s = g.format_element(&a);
                assert_eq!(g.parse_element(&s).unwrap(), a, "{g} {s}");
            }
        }
        let f2 = GroupHandle::Free(2);
        assert_eq!(f2.format_element(&f2.parse_element("abBA").unwrap()), "e");
        assert_eq!(f2.format_element(&f2.parse_element("abA").unwrap()), "abA");
        assert!(GroupHandle::Free(1).parse_element("b").is_err());
    }

    #[test]
    fn orders_and_generators() {
        assert_eq!(GroupHandle::Symmetric(3).elements().unwrap().len(), 6);
        assert_eq!(GroupHandle::Cyclic(6).element_order(&Element::Index(4), 10), Some(3));
        assert_eq!(GroupHandle::integers().element_order(&Element::z(1), 50), None);
        assert_eq!(GroupHandle::Free(2).standard_generators().len(), 4);
        // Sphere of radius r in F_2 has 4 * 3^(r-1) elements.
        assert_eq!(GroupHandle::Free(2).ball(3).len(), 1 + 4 + 12 + 36);
        assert_eq!("free:2".parse::<GroupHandle>().unwrap(), GroupHandle::Free(2));
        assert!("torus:3".parse::<GroupHandle>().is_err());
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(CayleyTable::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(CayleyTable::new(vec![vec![0]]).is_ok());
    }
}
