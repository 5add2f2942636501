//! Ordered vertex partitions and index vectors.
//!
//! Partition text format: a header line `d`, then one line `vertex part` per
//! vertex. Parts are indexed `0..d` and every part must be nonempty.

use std::fmt::Write as _;

use crate::bitset::VSet;
use crate::error::{Error, Result};

/// A length-d integer vector; for a vertex set S, coordinate i is |S ∩ V_i|.
/// Also the element type of the lattice layer, where entries may go negative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct IndexVector(pub Vec<i64>);

impl IndexVector {
    pub fn zero(d: usize) -> IndexVector {
        IndexVector(vec![0; d])
    }

    pub fn unit(d: usize, i: usize) -> IndexVector {
        let mut v = vec![0; d];
        v[i] = 1;
        IndexVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinate sum |v|; equals |S| for the index vector of S.
    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &IndexVector) -> IndexVector {
        IndexVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IndexVector) -> IndexVector {
        IndexVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> IndexVector {
        IndexVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }
}

impl std::fmt::Debug for IndexVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All nonnegative d-dim vectors with coordinate sum `total`, ascending lex.
pub fn compositions(d: usize, total: i64) -> Vec<IndexVector> {
    fn rec(d: usize, total: i64, cur: &mut Vec<i64>, out: &mut Vec<IndexVector>) {
        if cur.len() == d - 1 {
            cur.push(total);
            out.push(IndexVector(cur.clone()));
            cur.pop();
            return;
        }
        for c in 0..=total {
            cur.push(c);
            rec(d, total - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 && total >= 0 {
        rec(d, total, &mut Vec::new(), &mut out);
    }
    out
}

/// An ordered partition {V_0, …, V_{d−1}} of the vertices 0..n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    n: usize,
    parts: Vec<VSet>,
    assignment: Vec<u32>,
}

impl VertexPartition {
    pub fn new(n: usize, assignment: Vec<u32>) -> Result<VertexPartition> {
        if assignment.len() != n {
            return Err(Error::InvalidSizes(format!(
                "partition covers {} vertices, host has {n}",
                assignment.len()
            )));
        }
        let d = match assignment.iter().max() {
            Some(&m) => m as usize + 1,
            None => return Err(Error::InvalidSizes("empty partition".into())),
        };
        let mut parts = vec![VSet::empty(); d];
        for (v, &p) in assignment.iter().enumerate() {
            parts[p as usize].insert(v as u32);
        }
        if let Some(i) = parts.iter().position(|p| p.is_empty()) {
            return Err(Error::InvalidSizes(format!("part {i} is empty")));
        }
        Ok(VertexPartition {
            n,
            parts,
            assignment,
        })
    }

    /// The one-part partition of 0..n.
    pub fn trivial(n: usize) -> VertexPartition {
        VertexPartition::new(n, vec![0; n]).expect("n > 0")
    }

    pub fn from_parts(n: usize, parts: &[VSet]) -> Result<VertexPartition> {
        let mut assignment = vec![u32::MAX; n];
        for (i, p) in parts.iter().enumerate() {
            for v in p.iter() {
                if v as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if assignment[v as usize] != u32::MAX {
                    return Err(Error::InvalidSizes(format!("vertex {v} in two parts")));
                }
                assignment[v as usize] = i as u32;
            }
        }
        if let Some(v) = assignment.iter().position(|&p| p == u32::MAX) {
            return Err(Error::InvalidSizes(format!("vertex {v} unassigned")));
        }
        VertexPartition::new(n, assignment)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[VSet] {
        &self.parts
    }

    pub fn part_of(&self, v: u32) -> usize {
        self.assignment[v as usize] as usize
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Index vector of a vertex subset (members outside the host are the
    /// caller's bug; use [`index_vector_checked`](Self::index_vector_checked)
    /// for untrusted input).
    pub fn index_vector(&self, s: &VSet) -> IndexVector {
        IndexVector(
            self.parts
                .iter()
                .map(|p| p.intersection(s).len() as i64)
                .collect(),
        )
    }

    /// Index vector with host-membership validation.
    pub fn index_vector_checked(&self, s: &VSet) -> Result<IndexVector> {
        if let Some(v) = s.iter().find(|&v| v as usize >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        Ok(self.index_vector(s))
    }

    /// Index vector of the whole vertex set (the part sizes).
    pub fn total_vector(&self) -> IndexVector {
        IndexVector(self.parts.iter().map(|p| p.len() as i64).collect())
    }

    /// Move one vertex to another part. Errors if this would empty a part.
    pub fn relocate(&self, v: u32, part: usize) -> Result<VertexPartition> {
        if part >= self.d() {
            return Err(Error::InvalidSizes(format!("part {part} out of range")));
        }
        let from = self.part_of(v);
        if from == part {
            return Ok(self.clone());
        }
        if self.parts[from].len() == 1 {
            return Err(Error::InvalidSizes(format!(
                "moving {v} empties part {from}"
            )));
        }
        let mut assignment = self.assignment.clone();
        assignment[v as usize] = part as u32;
        VertexPartition::new(self.n, assignment)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.d());
        for (v, &p) in self.assignment.iter().enumerate() {
            let _ = writeln!(out, "{v} {p}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<VertexPartition> {
        let mut d: Option<usize> = None;
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_num = |s: &str| -> Result<u32> {
                s.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected integer, got `{s}`"),
                })
            };
            match d {
                None => {
                    if fields.len() != 1 {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            msg: "header must be a single part count".into(),
                        });
                    }
                    d = Some(parse_num(fields[0])? as usize);
                }
                Some(d) => {
                    if fields.len() != 2 {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            msg: "expected `vertex part`".into(),
                        });
                    }
                    let (v, p) = (parse_num(fields[0])?, parse_num(fields[1])?);
                    if p as usize >= d {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            msg: format!("part {p} out of range [0, {d})"),
                        });
                    }
                    pairs.push((v, p));
                }
            }
        }
        let d = d.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let n = pairs.len();
        let mut assignment = vec![u32::MAX; n];
        for (v, p) in pairs {
            if v as usize >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            assignment[v as usize] = p;
        }
        if assignment.contains(&u32::MAX) {
            return Err(Error::Parse {
                line: 0,
                msg: "some vertex missing".into(),
            });
        }
        let part = VertexPartition::new(n, assignment)?;
        if part.d() != d {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header says {d} parts, file uses {}", part.d()),
            });
        }
        Ok(part)
    }
}
