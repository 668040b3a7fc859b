//! Dense tensors over [`RingElem`] with named-index contraction, and the
//! rotated and composed crossing tensors built from them.
//!
//! Every index runs over `0..4`. A tensor stores its entries row-major in
//! slot order, so a rank-4 crossing with slots `[Upper, Upper, Lower, Lower]`
//! and indices `(a, c, b, d)` sits at `64a + 16c + 4b + d`, which is the
//! same cell as row `4a + c`, column `4b + d` of its 16x16 matrix.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::RingElem;
use crate::rmatrix::{caps_cups, CapCup, CapCupKind, CrossingTensor};

/// Largest rank a tensor may have (4^10 entries).
pub const MAX_RANK: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Upper,
    Lower,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::Upper => "upper",
            Slot::Lower => "lower",
        })
    }
}

const CROSSING_SLOTS: [Slot; 4] = [Slot::Upper, Slot::Upper, Slot::Lower, Slot::Lower];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    slots: Vec<Slot>,
    data: Vec<RingElem>,
}

impl Tensor {
    pub fn zeros(slots: Vec<Slot>) -> Self {
        assert!(
            slots.len() <= MAX_RANK,
            "rank {} exceeds {MAX_RANK}",
            slots.len()
        );
        let size = 1 << (2 * slots.len());
        Tensor {
            slots,
            data: vec![RingElem::zero(); size],
        }
    }

    pub fn new(slots: Vec<Slot>, data: Vec<RingElem>) -> Self {
        assert_eq!(
            data.len(),
            1 << (2 * slots.len()),
            "entry count must be 4^rank"
        );
        Tensor { slots, data }
    }

    pub fn scalar(v: RingElem) -> Self {
        Tensor {
            slots: Vec::new(),
            data: vec![v],
        }
    }

    /// `δ^y_x` with slots `[Upper, Lower]`.
    pub fn identity2() -> Self {
        Self::from_matrix2(&Matrix::identity(4))
    }

    /// `δ^a_b δ^c_d` with crossing slots.
    pub fn identity4() -> Self {
        Self::from_crossing(&CrossingTensor::new(Matrix::identity(16)))
    }

    pub fn from_crossing(x: &CrossingTensor) -> Self {
        let m = x.matrix();
        let data = (0..256).map(|i| m.get(i / 16, i % 16).clone()).collect();
        Tensor {
            slots: CROSSING_SLOTS.to_vec(),
            data,
        }
    }

    /// A 4x4 matrix read as `T^{row}_{col}`.
    pub fn from_matrix2(m: &Matrix) -> Self {
        assert_eq!(m.dim(), 4);
        let data = (0..16).map(|i| m.get(i / 4, i % 4).clone()).collect();
        Tensor {
            slots: vec![Slot::Upper, Slot::Lower],
            data,
        }
    }

    /// Caps get two lower slots, cups two upper slots.
    pub fn from_cap_cup(c: &CapCup) -> Self {
        let slot = if c.kind.is_cap() {
            Slot::Lower
        } else {
            Slot::Upper
        };
        let mut t = Tensor::zeros(vec![slot, slot]);
        for i in 0..4 {
            t.data[5 * i] = c.diag[i].clone();
        }
        t
    }

    pub fn cap_cup(kind: CapCupKind) -> Self {
        Self::from_cap_cup(caps_cups().get(kind))
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank(), "wrong number of indices");
        idx.iter().fold(0, |acc, &i| {
            assert!(i < 4, "index {i} out of range");
            4 * acc + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &RingElem {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: RingElem) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn scale(&self, s: &RingElem) -> Tensor {
        Tensor {
            slots: self.slots.clone(),
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn is_y_free(&self) -> bool {
        self.data.iter().all(RingElem::is_y_free)
    }

    /// Back to a 16x16 crossing matrix, if the slots are `[U, U, L, L]`.
    pub fn to_crossing(&self) -> Option<CrossingTensor> {
        if self.slots != CROSSING_SLOTS {
            return None;
        }
        let entries = self.data.iter().enumerate().filter(|(_, v)| !v.is_zero());
        Some(CrossingTensor::new(Matrix::from_entries(
            16,
            entries.map(|(i, v)| (i / 16, i % 16, v.clone())),
        )))
    }

    /// For a rank-2 `[Upper, Lower]` tensor equal to `s·δ`, returns `s`.
    pub fn scalar_multiple_of_identity(&self) -> Option<&RingElem> {
        if self.slots != [Slot::Upper, Slot::Lower] {
            return None;
        }
        let s = &self.data[0];
        let ok = (0..16).all(|i| {
            if i % 5 == 0 {
                &self.data[i] == s
            } else {
                self.data[i].is_zero()
            }
        });
        ok.then_some(s)
    }

    /// Reorders slots: slot `k` of the result is slot `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        let r = self.rank();
        assert_eq!(perm.len(), r);
        let slots = perm.iter().map(|&k| self.slots[k]).collect();
        let mut out = Tensor::zeros(slots);
        let mut src = vec![0usize; r];
        for (i, v) in self.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (k, d) in src.iter_mut().enumerate() {
                *d = (i >> (2 * (r - 1 - k))) & 3;
            }
            let dst = perm.iter().fold(0, |acc, &k| 4 * acc + src[k]);
            out.data[dst] = v.clone();
        }
        out
    }
}

impl From<&CrossingTensor> for Tensor {
    fn from(x: &CrossingTensor) -> Self {
        Tensor::from_crossing(x)
    }
}

impl From<&CapCup> for Tensor {
    fn from(c: &CapCup) -> Self {
        Tensor::from_cap_cup(c)
    }
}

#[derive(Clone, Debug)]
struct Node {
    tensor: Tensor,
    labels: Vec<String>,
}

/// Tensors joined by named indices. A label shared by two slots is summed
/// over; labels listed with [`ContractionNetwork::free`] stay open and give
/// the result its slot order.
#[derive(Clone, Debug, Default)]
pub struct ContractionNetwork {
    nodes: Vec<Node>,
    free: Vec<String>,
}

fn split_labels(labels: &str) -> Vec<String> {
    labels.split_whitespace().map(str::to_owned).collect()
}

impl ContractionNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a node; `labels` is whitespace separated, one per slot.
    pub fn node(mut self, tensor: impl Into<Tensor>, labels: &str) -> Self {
        self.nodes.push(Node {
            tensor: tensor.into(),
            labels: split_labels(labels),
        });
        self
    }

    /// Sets the open indices, in result slot order.
    pub fn free(mut self, labels: &str) -> Self {
        self.free = split_labels(labels);
        self
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn free_labels(&self) -> &[String] {
        &self.free
    }

    /// Multiplies node `i` by `s`.
    pub fn scale_node(&mut self, i: usize, s: &RingElem) {
        self.nodes[i].tensor = self.nodes[i].tensor.scale(s);
    }

    /// Checks label counts and upper/lower pairing; returns the slot role of
    /// each free label.
    pub fn validate(&self) -> Result<Vec<Slot>> {
        let mut seen: BTreeMap<&str, Vec<Slot>> = BTreeMap::new();
        for (n, node) in self.nodes.iter().enumerate() {
            if node.labels.len() != node.tensor.rank() {
                return Err(Error::MalformedNetwork(format!(
                    "node {n} has {} labels for a rank-{} tensor",
                    node.labels.len(),
                    node.tensor.rank()
                )));
            }
            for (label, slot) in node.labels.iter().zip(&node.tensor.slots) {
                seen.entry(label).or_default().push(*slot);
            }
        }
        for (i, f) in self.free.iter().enumerate() {
            if self.free[..i].contains(f) {
                return Err(Error::MalformedNetwork(format!(
                    "free index {f:?} listed twice"
                )));
            }
        }
        let mut free_slots = Vec::with_capacity(self.free.len());
        for f in &self.free {
            match seen.get(f.as_str()).map(Vec::as_slice) {
                Some([slot]) => free_slots.push(*slot),
                Some(s) => {
                    return Err(Error::MalformedNetwork(format!(
                        "free index {f:?} appears {} times",
                        s.len()
                    )))
                }
                None => {
                    return Err(Error::MalformedNetwork(format!(
                        "free index {f:?} does not appear"
                    )))
                }
            }
        }
        for (label, slots) in &seen {
            if self.free.iter().any(|f| f == label) {
                continue;
            }
            match slots.as_slice() {
                [a, b] if a != b => {}
                [a, _] => {
                    return Err(Error::MalformedNetwork(format!(
                        "index {label:?} joins two {a} slots"
                    )));
                }
                s => {
                    return Err(Error::MalformedNetwork(format!(
                        "index {label:?} appears {} time(s)",
                        s.len()
                    )))
                }
            }
        }
        Ok(free_slots)
    }

    /// Contracts the network, greedily joining the connected pair with the
    /// smallest result rank.
    pub fn contract(&self) -> Result<Tensor> {
        self.validate()?;
        let mut work: Vec<Node> = self.nodes.iter().map(trace_self).collect();
        while work.len() > 1 {
            let (i, j) = greedy_pair(&work);
            let b = work.remove(j);
            let a = work.remove(i);
            work.push(contract_pair(&a, &b)?);
        }
        self.finish(work.pop())
    }

    /// Contracts by folding nodes in the order given (a permutation of node
    /// indices), one at a time into an accumulator.
    pub fn contract_with_schedule(&self, order: &[usize]) -> Result<Tensor> {
        self.validate()?;
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.nodes.len()).collect::<Vec<_>>() {
            return Err(Error::MalformedNetwork(
                "schedule is not a permutation of the nodes".into(),
            ));
        }
        let mut acc: Option<Node> = None;
        for &k in order {
            let next = trace_self(&self.nodes[k]);
            acc = Some(match acc {
                None => next,
                Some(a) => contract_pair(&a, &next)?,
            });
        }
        self.finish(acc)
    }

    /// Left-to-right folding in node order.
    pub fn contract_in_order(&self) -> Result<Tensor> {
        let order: Vec<usize> = (0..self.nodes.len()).collect();
        self.contract_with_schedule(&order)
    }

    fn finish(&self, last: Option<Node>) -> Result<Tensor> {
        let node = last.unwrap_or(Node {
            tensor: Tensor::scalar(RingElem::one()),
            labels: Vec::new(),
        });
        let perm: Vec<usize> = self
            .free
            .iter()
            .map(|f| {
                node.labels
                    .iter()
                    .position(|l| l == f)
                    .expect("validated free label")
            })
            .collect();
        Ok(node.tensor.permute(&perm))
    }
}

/// Sums over any label repeated within one node.
fn trace_self(node: &Node) -> Node {
    let labels = &node.labels;
    let mut keep = Vec::new();
    let mut pairs = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        match labels.iter().position(|m| m == l) {
            Some(first) if first < i => pairs.push((first, i)),
            _ if labels[i + 1..].contains(l) => {}
            _ => keep.push(i),
        }
    }
    if pairs.is_empty() {
        return node.clone();
    }
    let r = labels.len();
    let t = &node.tensor;
    let mut out = Tensor::zeros(keep.iter().map(|&k| t.slots[k]).collect());
    let mut idx = vec![0usize; r];
    for (i, v) in t.data.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        for (k, d) in idx.iter_mut().enumerate() {
            *d = (i >> (2 * (r - 1 - k))) & 3;
        }
        if pairs.iter().all(|&(a, b)| idx[a] == idx[b]) {
            let dst = keep.iter().fold(0, |acc, &k| 4 * acc + idx[k]);
            out.data[dst] += v;
        }
    }
    Node {
        tensor: out,
        labels: keep.iter().map(|&k| labels[k].clone()).collect(),
    }
}

fn shared_count(a: &Node, b: &Node) -> usize {
    a.labels.iter().filter(|l| b.labels.contains(l)).count()
}

fn greedy_pair(work: &[Node]) -> (usize, usize) {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..work.len() {
        for j in i + 1..work.len() {
            let s = shared_count(&work[i], &work[j]);
            if s == 0 {
                continue;
            }
            let rank = work[i].labels.len() + work[j].labels.len() - 2 * s;
            if best.is_none_or(|(r, _, _)| rank < r) {
                best = Some((rank, i, j));
            }
        }
    }
    best.map_or((0, 1), |(_, i, j)| (i, j))
}

/// Sums `a` against `b` over their shared labels. Result labels are the
/// unshared labels of `a` followed by those of `b`.
fn contract_pair(a: &Node, b: &Node) -> Result<Node> {
    let a_shared: Vec<usize> = (0..a.labels.len())
        .filter(|&i| b.labels.contains(&a.labels[i]))
        .collect();
    let a_free: Vec<usize> = (0..a.labels.len())
        .filter(|i| !a_shared.contains(i))
        .collect();
    let b_shared: Vec<usize> = a_shared
        .iter()
        .map(|&i| {
            b.labels
                .iter()
                .position(|l| *l == a.labels[i])
                .expect("shared label")
        })
        .collect();
    let b_free: Vec<usize> = (0..b.labels.len())
        .filter(|i| !b_shared.contains(i))
        .collect();

    let rank = a_free.len() + b_free.len();
    if rank > MAX_RANK {
        return Err(Error::MalformedNetwork(format!(
            "intermediate rank {rank} exceeds {MAX_RANK}"
        )));
    }

    let digits = |i: usize, r: usize, buf: &mut Vec<usize>| {
        buf.clear();
        buf.extend((0..r).map(|k| (i >> (2 * (r - 1 - k))) & 3));
    };
    let pack = |buf: &[usize], which: &[usize]| which.iter().fold(0, |acc, &k| 4 * acc + buf[k]);

    // Nonzero entries of b grouped by their shared-index value.
    let mut by_shared: HashMap<usize, Vec<(usize, &RingElem)>> = HashMap::new();
    let mut buf = Vec::new();
    for (i, v) in b.tensor.data.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        digits(i, b.labels.len(), &mut buf);
        by_shared
            .entry(pack(&buf, &b_shared))
            .or_default()
            .push((pack(&buf, &b_free), v));
    }

    let slots = a_free
        .iter()
        .map(|&k| a.tensor.slots[k])
        .chain(b_free.iter().map(|&k| b.tensor.slots[k]))
        .collect();
    let mut out = Tensor::zeros(slots);
    let b_width = 1 << (2 * b_free.len());
    for (i, v) in a.tensor.data.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        digits(i, a.labels.len(), &mut buf);
        let Some(matches) = by_shared.get(&pack(&buf, &a_shared)) else {
            continue;
        };
        let base = pack(&buf, &a_free) * b_width;
        for &(bf, w) in matches {
            out.data[base + bf].add_product(v, w);
        }
    }
    let labels = a_free
        .iter()
        .map(|&k| a.labels[k].clone())
        .chain(b_free.iter().map(|&k| b.labels[k].clone()))
        .collect();
    Ok(Node {
        tensor: out,
        labels,
    })
}

fn omega(kind: CapCupKind) -> Tensor {
    Tensor::cap_cup(kind)
}

fn run(net: ContractionNetwork) -> Tensor {
    net.contract().expect("fixed well-formed network")
}

/// `(X_l)^{a c}_{b d} = X^{e a}_{d h} (Ω^-)_{b e} (℧^-)^{h c}`.
pub fn twist_left(x: &Tensor) -> Tensor {
    run(ContractionNetwork::new()
        .node(x.clone(), "e a d h")
        .node(omega(CapCupKind::OmegaMinus), "b e")
        .node(omega(CapCupKind::MhoMinus), "h c")
        .free("a c b d"))
}

/// `(X_r)^{a c}_{b d} = X^{c g}_{f b} (℧^+)^{a f} (Ω^+)_{g d}`.
pub fn twist_right(x: &Tensor) -> Tensor {
    run(ContractionNetwork::new()
        .node(x.clone(), "c g f b")
        .node(omega(CapCupKind::MhoPlus), "a f")
        .node(omega(CapCupKind::OmegaPlus), "g d")
        .free("a c b d"))
}

/// The crossing turned through a half turn.
pub fn twist_down(x: &Tensor) -> Tensor {
    run(ContractionNetwork::new()
        .node(x.clone(), "e g f h")
        .node(omega(CapCupKind::MhoPlus), "a h")
        .node(omega(CapCupKind::OmegaPlus), "g b")
        .node(omega(CapCupKind::MhoPlus), "c f")
        .node(omega(CapCupKind::OmegaPlus), "e d")
        .free("a c b d"))
}

/// `A` on top of `B`: `A^{a c}_{e f} B^{e f}_{b d}`.
pub fn stack(a: &Tensor, b: &Tensor) -> Tensor {
    run(ContractionNetwork::new()
        .node(a.clone(), "a c e f")
        .node(b.clone(), "e f b d")
        .free("a c b d"))
}

/// `n` copies of `x` stacked; `power(x, 0)` is the identity.
pub fn power(x: &Tensor, n: u32) -> Tensor {
    let mut out = if n == 0 {
        Tensor::identity4()
    } else {
        x.clone()
    };
    for _ in 1..n {
        out = stack(x, &out);
    }
    out
}

/// `(X_d X)^{a c}_{b d} = (X_d)^{a e}_{b f} X^{g c}_{h d} (Ω^-)_{e g} (℧^+)^{f h}`.
pub fn compose_xd_x(x: &Tensor) -> Tensor {
    run(ContractionNetwork::new()
        .node(twist_down(x), "a e b f")
        .node(x.clone(), "g c h d")
        .node(omega(CapCupKind::OmegaMinus), "e g")
        .node(omega(CapCupKind::MhoPlus), "f h")
        .free("a c b d"))
}

/// `(X X_d)^{a c}_{b d} = X^{a e}_{b f} (X_d)^{g c}_{h d} (Ω^+)_{e g} (℧^-)^{f h}`.
pub fn compose_x_xd(x: &Tensor) -> Tensor {
    run(ContractionNetwork::new()
        .node(x.clone(), "a e b f")
        .node(twist_down(x), "g c h d")
        .node(omega(CapCupKind::OmegaPlus), "e g")
        .node(omega(CapCupKind::MhoMinus), "f h")
        .free("a c b d"))
}

pub fn compose_xl_xr(x: &Tensor) -> Tensor {
    stack(&twist_left(x), &twist_right(x))
}

pub fn compose_xr_xl(x: &Tensor) -> Tensor {
    stack(&twist_right(x), &twist_left(x))
}

/// `X_r X_l X_r ... X_r`, `height` factors; height 1 is `X_r`.
pub fn tower_rlr(x: &Tensor, height: u32) -> Result<Tensor> {
    if height.is_multiple_of(2) {
        return Err(Error::EvenHeight(height));
    }
    let xr = twist_right(x);
    let pair = stack(&xr, &twist_left(x));
    let mut out = xr;
    for _ in 0..height / 2 {
        out = stack(&pair, &out);
    }
    Ok(out)
}
