//! Cartan data and positive roots for the finite reduced irreducible types.
//!
//! Everything is expressed in fundamental-weight coordinates: a weight `λ`
//! is the integer vector `(⟨λ, α_1^∨⟩, …, ⟨λ, α_n^∨⟩)`. Simple indices are
//! 0-based in the API and 1-based in labels (`a1`, `a1+a2`, …). Numbering
//! follows Bourbaki, so `C2` has `α_1` short and `G2` has `α_1` short.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn from_char(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A Cartan type such as `A2` or `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanKind {
    pub family: Family,
    pub rank: usize,
}

impl CartanKind {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanKind { family, rank })
        } else {
            Err(Error::InvalidCartanKind {
                family: family.as_char(),
                rank,
            })
        }
    }

    /// Parses `"A2"`, `"g2"`, `"B3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let err = |pos: usize, msg: &str| Error::Parse {
            input: s.to_string(),
            position: pos,
            message: msg.to_string(),
        };
        let family = chars
            .next()
            .and_then(Family::from_char)
            .ok_or_else(|| err(0, "expected a family letter A-G"))?;
        let rank: usize = chars.as_str().parse().map_err(|_| err(1, "expected a rank"))?;
        Self::new(family, rank)
    }

    pub fn expected_positive_roots(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    pub fn weyl_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }
}

impl fmt::Display for CartanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.as_char(), self.rank)
    }
}

/// A positive root in both coordinate systems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveRoot {
    /// Coefficients on the simple roots.
    pub simple: Vec<i64>,
    /// Fundamental-weight coordinates, `cartan · simple`.
    pub omega: Vec<i64>,
    pub long: bool,
}

impl PositiveRoot {
    pub fn height(&self) -> i64 {
        self.simple.iter().sum()
    }
}

/// `±` a positive root, by index into [`RootSystem::positive_roots`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub index: usize,
    pub positive: bool,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    kind: CartanKind,
    /// `cartan[i][j] = ⟨α_j, α_i^∨⟩`.
    cartan: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    positive: Vec<PositiveRoot>,
    braid: Vec<Vec<usize>>,
    by_omega: HashMap<Vec<i64>, Root>,
}

fn cartan_matrix(kind: CartanKind) -> Vec<Vec<i64>> {
    let n = kind.rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match kind.family {
        Family::A | Family::B | Family::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        Family::E => {
            link(0, 2);
            link(2, 3);
            link(1, 3);
            for i in 3..n - 1 {
                link(i, i + 1);
            }
        }
        Family::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        Family::G => link(0, 1),
    }
    match kind.family {
        // α_n short
        Family::B => a[n - 1][n - 2] = -2,
        // α_n long
        Family::C => a[n - 2][n - 1] = -2,
        // α_1, α_2 long; α_3, α_4 short
        Family::F => a[2][1] = -2,
        // α_1 short, α_2 long
        Family::G => a[0][1] = -3,
        _ => {}
    }
    a
}

/// Minimal positive integers `d_i` with `d_i a_ij = d_j a_ji`; `d_i` is
/// proportional to `|α_i|²`.
fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<i64> {
    let n = cartan.len();
    let mut d: Vec<Option<Rational64>> = vec![None; n];
    d[0] = Some(Rational64::from_integer(1));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 && d[j].is_none() {
                let dj = d[i].unwrap() * Rational64::new(cartan[i][j], cartan[j][i]);
                d[j] = Some(dj);
                queue.push_back(j);
            }
        }
    }
    let d: Vec<Rational64> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let l = d.iter().fold(1i64, |l, x| l.lcm(x.denom()));
    let ints: Vec<i64> = d.iter().map(|x| (x * l).to_integer()).collect();
    let g = ints.iter().fold(0i64, |g, x| g.gcd(x));
    ints.into_iter().map(|x| x / g).collect()
}

/// Coxeter order from the product `a_ij a_ji`.
fn coxeter_order(product: i64) -> usize {
    match product {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        _ => unreachable!("finite type"),
    }
}

pub fn build_root_system(kind: CartanKind) -> Result<RootSystem> {
    let kind = CartanKind::new(kind.family, kind.rank)?;
    RootSystem::new(kind)
}

impl RootSystem {
    pub fn new(kind: CartanKind) -> Result<Self> {
        let kind = CartanKind::new(kind.family, kind.rank)?;
        let n = kind.rank;
        let cartan = cartan_matrix(kind);
        let sym = symmetrizer(&cartan);

        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(b) = queue.pop_front() {
            for i in 0..n {
                let p: i64 = (0..n).map(|j| cartan[i][j] * b[j]).sum();
                if p == 0 {
                    continue;
                }
                let mut c = b.clone();
                c[i] -= p;
                if c.iter().all(|&x| x >= 0) && seen.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }
        let mut simple_coords: Vec<Vec<i64>> = seen.into_iter().collect();
        // height ascending, then lexicographically descending so α_1 precedes α_2
        simple_coords.sort_by(|x, y| {
            let hx: i64 = x.iter().sum();
            let hy: i64 = y.iter().sum();
            hx.cmp(&hy).then_with(|| y.cmp(x))
        });

        let norm = |b: &[i64]| -> i64 {
            let mut s = 0;
            for i in 0..n {
                for j in 0..n {
                    s += b[i] * b[j] * sym[i] * cartan[i][j];
                }
            }
            s
        };
        let max_norm = simple_coords.iter().map(|b| norm(b)).max().unwrap();
        let positive: Vec<PositiveRoot> = simple_coords
            .into_iter()
            .map(|b| {
                let omega = (0..n)
                    .map(|i| (0..n).map(|j| cartan[i][j] * b[j]).sum())
                    .collect();
                let long = norm(&b) == max_norm;
                PositiveRoot {
                    simple: b,
                    omega,
                    long,
                }
            })
            .collect();

        let mut by_omega = HashMap::new();
        for (index, r) in positive.iter().enumerate() {
            by_omega.insert(r.omega.clone(), Root { index, positive: true });
            by_omega.insert(
                r.omega.iter().map(|x| -x).collect(),
                Root { index, positive: false },
            );
        }
        let braid = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 1 } else { coxeter_order(cartan[i][j] * cartan[j][i]) })
                    .collect()
            })
            .collect();

        Ok(RootSystem {
            kind,
            cartan,
            symmetrizer: sym,
            positive,
            braid,
            by_omega,
        })
    }

    pub fn kind(&self) -> CartanKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.kind.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn positive_roots(&self) -> &[PositiveRoot] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// Index of the simple root `α_i` among the positive roots.
    pub fn simple_root_index(&self, i: usize) -> usize {
        let mut e = vec![0i64; self.rank()];
        e[i] = 1;
        self.positive.iter().position(|r| r.simple == e).unwrap()
    }

    /// `α_i` in fundamental-weight coordinates (column `i` of the Cartan
    /// matrix).
    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        (0..self.rank()).map(|r| self.cartan[r][i]).collect()
    }

    pub fn root_omega(&self, r: Root) -> Vec<i64> {
        let v = &self.positive[r.index].omega;
        if r.positive {
            v.clone()
        } else {
            v.iter().map(|x| -x).collect()
        }
    }

    /// Identifies a root from its fundamental-weight coordinates.
    pub fn find_root(&self, omega: &[i64]) -> Option<Root> {
        self.by_omega.get(omega).copied()
    }

    pub fn is_long(&self, index: usize) -> bool {
        self.positive[index].long
    }

    /// Whether every root has the same length.
    pub fn simply_laced(&self) -> bool {
        self.positive.iter().all(|r| r.long)
    }

    /// Braid length `m_ij` (2, 3, 4 or 6).
    pub fn braid_order(&self, i: usize, j: usize) -> Result<usize> {
        let n = self.rank();
        if i >= n {
            return Err(Error::IndexOutOfRange(i));
        }
        if j >= n {
            return Err(Error::IndexOutOfRange(j));
        }
        if i == j {
            return Err(Error::SameIndex(i));
        }
        Ok(self.braid[i][j])
    }

    /// `s_i λ = λ − ⟨λ, α_i^∨⟩ α_i`.
    pub fn reflect_weight(&self, i: usize, lambda: &[i64]) -> Vec<i64> {
        let k = lambda[i];
        (0..self.rank())
            .map(|r| lambda[r] - k * self.cartan[r][i])
            .collect()
    }

    pub fn reflect_root(&self, i: usize, root: Root) -> Root {
        let img = self.reflect_weight(i, &self.root_omega(root));
        self.find_root(&img).expect("root system is closed under reflections")
    }

    /// Coroot `α^∨` in simple-coroot coordinates.
    pub fn coroot_coords(&self, index: usize) -> Vec<i64> {
        let b = &self.positive[index].simple;
        let n = self.rank();
        let mut norm2 = 0;
        for i in 0..n {
            for j in 0..n {
                norm2 += b[i] * b[j] * self.symmetrizer[i] * self.cartan[i][j];
            }
        }
        // |α|² ∝ norm2, |α_j|² ∝ 2 d_j
        (0..n)
            .map(|j| {
                let c = 2 * b[j] * self.symmetrizer[j];
                debug_assert_eq!(c % norm2, 0);
                c / norm2
            })
            .collect()
    }

    /// `⟨λ, α^∨⟩` for a positive root.
    pub fn pair_coroot(&self, lambda: &[i64], index: usize) -> i64 {
        self.coroot_coords(index)
            .iter()
            .zip(lambda)
            .map(|(c, l)| c * l)
            .sum()
    }

    /// Positive roots supported on the simple indices `i` and `j`.
    pub fn rank2_positive(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.positive.len())
            .filter(|&k| {
                self.positive[k]
                    .simple
                    .iter()
                    .enumerate()
                    .all(|(r, &c)| c == 0 || r == i || r == j)
            })
            .collect()
    }

    /// Label such as `a1`, `a1+a2`, `3a1+2a2`.
    pub fn root_label(&self, index: usize) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.positive[index].simple.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(format!("a{}", i + 1)),
                _ => parts.push(format!("{}a{}", c, i + 1)),
            }
        }
        parts.join("+")
    }

    /// Inverse of [`RootSystem::root_label`]; also accepts `r<k>` for the
    /// `k`-th positive root (0-based).
    pub fn parse_root_label(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        let err = |pos: usize, msg: &str| Error::Parse {
            input: s.to_string(),
            position: pos,
            message: msg.to_string(),
        };
        if let Some(k) = s.strip_prefix('r') {
            let k: usize = k.parse().map_err(|_| err(1, "expected root index"))?;
            if k >= self.positive.len() {
                return Err(err(1, "root index out of range"));
            }
            return Ok(k);
        }
        let n = self.rank();
        let mut coords = vec![0i64; n];
        let mut pos = 0;
        for part in s.split('+') {
            let p = part.trim();
            let a = p.find('a').ok_or_else(|| err(pos, "expected a<i>"))?;
            let coeff: i64 = if a == 0 {
                1
            } else {
                p[..a].trim_end_matches('*').parse().map_err(|_| err(pos, "bad coefficient"))?
            };
            let i: usize = p[a + 1..].parse().map_err(|_| err(pos + a + 1, "bad simple index"))?;
            if i == 0 || i > n {
                return Err(err(pos + a + 1, "simple index out of range"));
            }
            coords[i - 1] += coeff;
            pos += part.len() + 1;
        }
        self.positive
            .iter()
            .position(|r| r.simple == coords)
            .ok_or_else(|| err(0, "not a positive root"))
    }
}

/// `⟨λ, α_i^∨⟩`, i.e. the `i`-th fundamental-weight coordinate.
pub fn pairing(lambda: &[i64], i: usize) -> i64 {
    lambda[i]
}
