//! Independent oracles for the integration and acceptance tests.
//!
//! Nothing here calls into the library's linear algebra: determinants and
//! lattice membership use rational Gaussian elimination, group structure
//! comes from breadth-first coset enumeration.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use ratsing::{FgAbGroup, IntMatrix};

pub fn to_i64_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

fn rational_rows(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect()
}

/// Row-reduces over Q; returns (rank, determinant when square).
fn eliminate(mut a: Vec<Vec<BigRational>>) -> (usize, BigRational) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut det = BigRational::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            det = BigRational::zero();
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            det = -det;
        }
        let pivot = a[rank][c].clone();
        det *= &pivot;
        for r in rank + 1..rows {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pivot;
            for k in c..cols {
                let delta = &f * &a[rank][k];
                a[r][k] -= delta;
            }
        }
        rank += 1;
    }
    if rank < rows {
        det = BigRational::zero();
    }
    (rank, det)
}

pub fn det(m: &[Vec<i64>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let (_, d) = eliminate(rational_rows(m));
    assert!(d.is_integer());
    d.to_integer()
}

pub fn rank(m: &[Vec<i64>]) -> usize {
    eliminate(rational_rows(m)).0
}

/// gcd of all `k x k` minors.
pub fn minors_gcd(m: &[Vec<i64>], k: usize) -> BigInt {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut g = BigInt::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i64>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j]).collect())
                .collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a = rational_rows(m);
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        inv.swap(p, c);
        let pivot = a[c][c].clone();
        for k in 0..n {
            a[c][k] = &a[c][k] / &pivot;
            inv[c][k] = &inv[c][k] / &pivot;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in 0..n {
                let da = &f * &a[c][k];
                a[r][k] -= da;
                let di = &f * &inv[c][k];
                inv[r][k] -= di;
            }
        }
    }
    Some(inv)
}

/// `Z^n / (column lattice of M)` for square nonsingular `M`, enumerated
/// element by element.
///
/// `v` lies in the lattice iff `adj(M) v ≡ 0 (mod det M)`, so the residue
/// vector `adj(M) v mod |det M|` names the coset of `v`.
pub struct CosetGroup {
    reps: Vec<Vec<i64>>,
    orders: Vec<usize>,
    adj: Vec<Vec<i64>>,
    modulus: i64,
}

impl CosetGroup {
    /// Breadth-first enumeration from 0 along the unit vectors. Returns
    /// `None` if `M` is singular or the group exceeds `limit` elements.
    pub fn enumerate(m: &[Vec<i64>], limit: usize) -> Option<Self> {
        let n = m.len();
        let inv = inverse(m)?;
        let d = det(m);
        let adj = inv
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let y = x * BigRational::from_integer(d.clone());
                        assert!(y.is_integer());
                        y.to_integer().to_i64().unwrap()
                    })
                    .collect()
            })
            .collect();
        let mut group = CosetGroup {
            reps: vec![vec![0; n]],
            orders: Vec::new(),
            adj,
            modulus: d.abs().to_i64().unwrap(),
        };
        let mut seen = HashSet::from([group.key(&vec![0; n])]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(r) = queue.pop_front() {
            for i in 0..n {
                let mut v = group.reps[r].clone();
                v[i] += 1;
                if seen.insert(group.key(&v)) {
                    if group.reps.len() == limit {
                        return None;
                    }
                    group.reps.push(v);
                    queue.push_back(group.reps.len() - 1);
                }
            }
        }
        group.orders = group.reps.iter().map(|v| group.element_order(v)).collect();
        Some(group)
    }

    fn key(&self, v: &[i64]) -> Vec<i64> {
        self.adj
            .iter()
            .map(|row| {
                let x: i64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
                x.rem_euclid(self.modulus)
            })
            .collect()
    }

    fn in_lattice(&self, v: &[i64]) -> bool {
        self.key(v).iter().all(|&x| x == 0)
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    fn element_order(&self, v: &[i64]) -> usize {
        (1..=self.order())
            .find(|&k| {
                let kv: Vec<i64> = v.iter().map(|x| x * k as i64).collect();
                self.in_lattice(&kv)
            })
            .expect("element order divides group order")
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |a, b| a.lcm(b))
    }

    /// `#{x : d x = 0}`.
    pub fn killed_by(&self, d: usize) -> usize {
        self.orders.iter().filter(|&&k| d.is_multiple_of(k)).count()
    }

    /// Checks `group` against the enumeration: same order, same exponent,
    /// and the same `d`-torsion count for every divisor `d` of the order,
    /// which pins down a finite abelian group up to isomorphism.
    pub fn matches(&self, group: &FgAbGroup) -> Result<(), String> {
        if !group.is_finite() {
            return Err(format!(
                "{group} is infinite, enumeration found {}",
                self.order()
            ));
        }
        let order = group.order().unwrap().to_usize().unwrap();
        if order != self.order() {
            return Err(format!("order {order} vs enumerated {}", self.order()));
        }
        let exponent = group.exponent().to_usize().unwrap();
        if exponent != self.exponent() {
            return Err(format!(
                "exponent {exponent} vs enumerated {}",
                self.exponent()
            ));
        }
        for d in (1..=order).filter(|d| order.is_multiple_of(*d)) {
            let expected: usize = group
                .invariant_factors()
                .iter()
                .map(|n| n.to_usize().unwrap().gcd(&d))
                .product();
            if expected != self.killed_by(d) {
                return Err(format!(
                    "{d}-torsion has {expected} elements in {group}, {} enumerated",
                    self.killed_by(d)
                ));
            }
        }
        Ok(())
    }
}

/// Searches for a nonzero `x` in `[-bound, bound]^n` with `x^T M x >= 0`.
pub fn nonnegative_witness(m: &[Vec<i64>], bound: i64) -> Option<Vec<i64>> {
    let n = m.len();
    let mut x = vec![-bound; n];
    loop {
        if x.iter().any(|&v| v != 0) {
            let q: i64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| x[i] * m[i][j] * x[j])
                .sum();
            if q >= 0 {
                return Some(x);
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            if x[k] < bound {
                x[k] += 1;
                break;
            }
            x[k] = -bound;
            k += 1;
        }
    }
}

/// Evaluates `b_1 - 1/(b_2 - 1/(… - 1/b_s))`.
pub fn eval_hj(bs: &[i64]) -> BigRational {
    let mut acc: Option<BigRational> = None;
    for &b in bs.iter().rev() {
        let b = BigRational::from_integer(b.into());
        acc = Some(match acc {
            None => b,
            Some(tail) => b - tail.recip(),
        });
    }
    acc.expect("nonempty expansion")
}

/// A forest on vertices `0..n` as an edge list.
#[derive(Clone, Debug)]
pub struct Forest {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Forest {
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                for &w in &adj[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            out.push(comp);
        }
        out
    }

    /// Isomorphism-invariant code: sorted center-rooted AHU codes of the
    /// components.
    pub fn canonical(&self) -> String {
        let adj = self.adjacency();
        let mut codes: Vec<String> = self
            .components()
            .iter()
            .map(|comp| tree_code(&adj, comp))
            .collect();
        codes.sort();
        codes.join("")
    }
}

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_code(adj, w, Some(v)))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn tree_code(adj: &[Vec<usize>], comp: &[usize]) -> String {
    // peel leaves to find the center(s)
    let members: BTreeSet<usize> = comp.iter().copied().collect();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = comp.iter().copied().filter(|&v| degree[v] <= 1).collect();
    let mut remaining = members.len();
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
        .iter()
        .map(|&c| rooted_code(adj, c, None))
        .min()
        .expect("component has a center")
}

/// All forests on exactly `n` vertices, one per isomorphism class.
pub fn forests_up_to_iso(n: usize) -> Vec<Forest> {
    let mut level = vec![Forest {
        n: 0,
        edges: Vec::new(),
    }];
    for size in 1..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for f in &level {
            let new = size - 1;
            let mut candidates = vec![Forest {
                n: size,
                edges: f.edges.clone(),
            }];
            for v in 0..f.n {
                let mut edges = f.edges.clone();
                edges.push((v, new));
                candidates.push(Forest { n: size, edges });
            }
            for c in candidates {
                if seen.insert(c.canonical()) {
                    next.push(c);
                }
            }
        }
        level = next;
    }
    level
}

pub fn is_abs_one(x: &BigInt) -> bool {
    x.abs().is_one()
}
