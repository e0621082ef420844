//! Generalized Paley graphs and their sum and complement variants.

use std::collections::VecDeque;
use std::io::Write;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Largest order for which a dense adjacency matrix is built.
pub const DENSE_LIMIT: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `u -> v` iff `v - u` is a nonzero `k`-th power.
    Standard,
    /// `u -> v` iff `u + v` is a nonzero `k`-th power (loops allowed).
    Sum,
    /// `u -> v` iff `u != v` and `v - u` is not a `k`-th power.
    Complement,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Variant::Standard),
            "sum" => Ok(Variant::Sum),
            "complement" => Ok(Variant::Complement),
            other => Err(Error::InvalidParameter(format!(
                "unknown variant {other:?}"
            ))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::Sum => "sum",
            Variant::Complement => "complement",
        })
    }
}

/// `Gamma(k, q)` or one of its variants. The stored `k` is already reduced to
/// `gcd(k, q - 1)`.
#[derive(Debug, Clone)]
pub struct GpGraph {
    field: Arc<Field>,
    k_input: u64,
    k: u64,
    variant: Variant,
    in_set: Vec<bool>,
}

impl GpGraph {
    pub fn new(field: Arc<Field>, k: u64, variant: Variant) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        let q = field.q();
        let kr = num_integer::gcd(k, q - 1);
        let mut in_set = vec![false; q as usize];
        for &x in field.exp_table().iter().step_by(kr as usize) {
            in_set[x as usize] = true;
        }
        Ok(GpGraph {
            field,
            k_input: k,
            k: kr,
            variant,
            in_set,
        })
    }

    pub fn build(p: u64, m: u32, k: u64, variant: Variant) -> Result<Self> {
        Self::new(Arc::new(Field::new(p, m)?), k, variant)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn k_input(&self) -> u64 {
        self.k_input
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// `n = (q - 1)/k`, the size of the connection set `R_k`.
    pub fn n(&self) -> u64 {
        (self.q() - 1) / self.k
    }

    /// Out-degree of every vertex.
    pub fn degree(&self) -> u64 {
        match self.variant {
            Variant::Standard | Variant::Sum => self.n(),
            Variant::Complement => self.q() - 1 - self.n(),
        }
    }

    pub fn is_kth_power(&self, x: Elem) -> bool {
        self.in_set[x as usize]
    }

    pub fn has_arc(&self, u: Elem, v: Elem) -> bool {
        let f = &self.field;
        match self.variant {
            Variant::Standard => self.in_set[f.sub(v, u) as usize],
            Variant::Sum => self.in_set[f.add(u, v) as usize],
            Variant::Complement => u != v && !self.in_set[f.sub(v, u) as usize],
        }
    }

    /// The connection set: nonzero `k`-th powers for the standard and sum
    /// variants, the non-powers for the complement.
    pub fn connection_set(&self) -> Vec<Elem> {
        (1..self.q() as Elem)
            .filter(|&x| match self.variant {
                Variant::Complement => !self.in_set[x as usize],
                _ => self.in_set[x as usize],
            })
            .collect()
    }

    pub fn out_neighbors(&self, u: Elem) -> Vec<Elem> {
        let f = &self.field;
        let set = self.connection_set();
        match self.variant {
            Variant::Sum => set.iter().map(|&s| f.sub(s, u)).collect(),
            _ => set.iter().map(|&s| f.add(u, s)).collect(),
        }
    }

    /// True when every arc has its reverse: `q` even or `k | (q - 1)/2`.
    pub fn is_undirected(&self) -> bool {
        let q = self.q();
        self.variant == Variant::Sum || q.is_multiple_of(2) || ((q - 1) / 2).is_multiple_of(self.k)
    }

    /// Connectivity of the underlying `Gamma(k, q)`: `n` must not divide
    /// `p^a - 1` for any proper divisor `a` of `m`.
    pub fn is_connected(&self) -> bool {
        gp_is_connected(self.field.p(), self.field.m(), self.n())
    }

    /// Dense 0/1 adjacency matrix, row-major. Available for `q <= DENSE_LIMIT`.
    pub fn adjacency_matrix(&self) -> Result<Vec<Vec<u8>>> {
        let q = self.q();
        if q > DENSE_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "dense adjacency limited to q <= {DENSE_LIMIT}, got {q}"
            )));
        }
        let mut rows = vec![vec![0u8; q as usize]; q as usize];
        for (u, row) in rows.iter_mut().enumerate() {
            for v in self.out_neighbors(u as Elem) {
                row[v as usize] = 1;
            }
        }
        Ok(rows)
    }

    /// Adjacency rows as bitsets, for common-neighbour counting.
    pub fn adjacency_bitsets(&self) -> Result<Vec<Vec<u64>>> {
        let q = self.q();
        if q > DENSE_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "dense adjacency limited to q <= {DENSE_LIMIT}, got {q}"
            )));
        }
        let words = (q as usize).div_ceil(64);
        let mut rows = vec![vec![0u64; words]; q as usize];
        for (u, row) in rows.iter_mut().enumerate() {
            for v in self.out_neighbors(u as Elem) {
                row[v as usize / 64] |= 1 << (v % 64);
            }
        }
        Ok(rows)
    }

    /// `A A^T == A^T A`, checked exactly on the dense matrix.
    pub fn is_normal(&self) -> Result<bool> {
        let a = self.adjacency_bitsets()?;
        let q = self.q() as usize;
        let words = q.div_ceil(64);
        let mut cols = vec![vec![0u64; words]; q];
        for (u, row) in a.iter().enumerate() {
            for v in 0..q {
                if row[v / 64] >> (v % 64) & 1 == 1 {
                    cols[v][u / 64] |= 1 << (u % 64);
                }
            }
        }
        let dot = |x: &[u64], y: &[u64]| -> u32 {
            x.iter().zip(y).map(|(a, b)| (a & b).count_ones()).sum()
        };
        for i in 0..q {
            for j in 0..q {
                if dot(&a[i], &a[j]) != dot(&cols[i], &cols[j]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Distances from vertex `0` along arcs; `None` marks unreachable vertices.
    pub fn bfs_from_zero(&self) -> Vec<Option<u32>> {
        let q = self.q() as usize;
        let f = &self.field;
        let set = self.connection_set();
        let mut dist = vec![None; q];
        dist[0] = Some(0);
        let mut queue = VecDeque::from([0 as Elem]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u as usize].unwrap();
            for &s in &set {
                let v = match self.variant {
                    Variant::Sum => f.sub(s, u),
                    _ => f.add(u, s),
                };
                if dist[v as usize].is_none() {
                    dist[v as usize] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Diameter. Standard and complement graphs are vertex-transitive, so one
    /// BFS from `0` suffices; sum graphs are searched from every vertex.
    pub fn diameter(&self) -> Result<u32> {
        if self.variant != Variant::Sum {
            let dist = self.bfs_from_zero();
            return dist
                .iter()
                .map(|d| d.ok_or(Error::Disconnected))
                .try_fold(0, |acc, d| Ok(acc.max(d?)));
        }
        let q = self.q() as usize;
        let set = self.connection_set();
        let f = &self.field;
        let mut best = 0;
        for start in 0..q {
            let mut dist = vec![u32::MAX; q];
            dist[start] = 0;
            let mut queue = VecDeque::from([start as Elem]);
            let mut seen = 1;
            while let Some(u) = queue.pop_front() {
                for &s in &set {
                    let v = f.sub(s, u) as usize;
                    if dist[v] == u32::MAX {
                        dist[v] = dist[u as usize] + 1;
                        best = best.max(dist[v]);
                        seen += 1;
                        queue.push_back(v as Elem);
                    }
                }
            }
            if seen < q {
                return Err(Error::Disconnected);
            }
        }
        Ok(best)
    }

    /// Write the arc list as `u v` lines; undirected graphs list each edge once.
    pub fn write_edges<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        let undirected = self.is_undirected();
        for u in 0..self.q() as Elem {
            let mut nbrs = self.out_neighbors(u);
            nbrs.sort_unstable();
            for v in nbrs {
                if !undirected || u <= v {
                    writeln!(out, "{u} {v}")?;
                }
            }
        }
        Ok(())
    }
}

pub fn gp_is_connected(p: u64, m: u32, n: u64) -> bool {
    (1..m)
        .filter(|a| m.is_multiple_of(*a))
        .all(|a| (p.pow(a) - 1) % n != 0)
}

/// `(e, d)` found by counting common neighbours over all vertex pairs, or
/// `None` if the graph is not strongly regular.
pub fn srg_by_counting(g: &GpGraph) -> Result<Option<(u64, u64)>> {
    let rows = g.adjacency_bitsets()?;
    let q = rows.len();
    let mut e = None;
    let mut d = None;
    for u in 0..q {
        for v in u + 1..q {
            let common: u64 = rows[u]
                .iter()
                .zip(&rows[v])
                .map(|(a, b)| (a & b).count_ones() as u64)
                .sum();
            let adjacent = rows[u][v / 64] >> (v % 64) & 1 == 1;
            let slot = if adjacent { &mut e } else { &mut d };
            match *slot {
                None => *slot = Some(common),
                Some(c) if c != common => return Ok(None),
                _ => {}
            }
        }
    }
    Ok(match (e, d) {
        (Some(e), Some(d)) => Some((e, d)),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paley_nine_is_rook_graph() {
        let g = GpGraph::build(3, 2, 2, Variant::Standard).unwrap();
        assert_eq!(g.n(), 4);
        assert!(g.is_undirected());
        assert!(g.is_connected());
        assert_eq!(g.diameter().unwrap(), 2);
        assert_eq!(srg_by_counting(&g).unwrap(), Some((1, 2)));
    }

    #[test]
    fn gamma_4_9_is_disconnected() {
        let g = GpGraph::build(3, 2, 4, Variant::Standard).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.diameter(), Err(Error::Disconnected));
        let c = GpGraph::build(3, 2, 4, Variant::Complement).unwrap();
        assert_eq!(c.degree(), 6);
        assert_eq!(c.diameter().unwrap(), 2);
    }

    #[test]
    fn k_is_reduced() {
        let g = GpGraph::build(7, 1, 4, Variant::Standard).unwrap();
        assert_eq!(g.k(), 2);
        assert_eq!(g.k_input(), 4);
        assert!(!g.is_undirected());
    }

    #[test]
    fn sum_graph_loops() {
        let g = GpGraph::build(5, 1, 2, Variant::Sum).unwrap();
        let loops = (0..5).filter(|&u| g.has_arc(u, u)).count();
        assert_eq!(loops, 2);
    }

    #[test]
    fn seven_cycle() {
        let g = GpGraph::build(7, 1, 3, Variant::Standard).unwrap();
        assert_eq!(g.diameter().unwrap(), 3);
        assert!(g.is_normal().unwrap());
        let mut buf = Vec::new();
        g.write_edges(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 7);
    }
}
