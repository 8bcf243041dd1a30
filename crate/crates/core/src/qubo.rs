//! QUBO and Ising problem representations, the exact change of variables
//! between them, and energy / distance evaluation.
//!
//! A [`QuboProblem`] stores `c_ij` for `i <= j` in a sparse map. Diagonal
//! entries are the linear terms (`q_i^2 = q_i`), so there is no separate
//! linear store. The energy of an assignment `q` is
//!
//! ```text
//! E(q) = sum_{i <= j} c_ij q_i q_j + offset
//! ```
//!
//! The Ising form uses spins `s_i = 2 q_i - 1` and reads
//! `E(s) = sum_{i < j} J_ij s_i s_j + sum_i h_i s_i + offset`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Schema version written into every JSON document produced by this crate.
pub const SCHEMA_VERSION: u32 = 1;

/// An ordered assignment of binary variables.
///
/// Ordering is lexicographic over the bit sequence, which for equal lengths is
/// the binary value with variable 0 as the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    /// Builds a bit vector, rejecting anything other than 0 or 1.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Domain(b as i64));
        }
        Ok(BitVector(bits))
    }

    pub fn zeros(len: usize) -> Self {
        BitVector(vec![0; len])
    }

    /// Bits of `value`, variable 0 taken from the lowest bit.
    pub fn from_index(value: u64, len: usize) -> Self {
        BitVector((0..len).map(|i| ((value >> i) & 1) as u8).collect())
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitVector(bits.iter().map(|&b| b as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn complement(&self) -> Self {
        BitVector(self.0.iter().map(|&b| 1 - b).collect())
    }

    /// Bipolar image `s = 2q - 1`.
    pub fn to_spins(&self) -> Vec<i8> {
        self.0.iter().map(|&b| 2 * b as i8 - 1).collect()
    }

    /// Inverse of [`BitVector::to_spins`].
    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        spins
            .iter()
            .map(|&s| match s {
                1 => Ok(1),
                -1 => Ok(0),
                other => Err(Error::Domain(other as i64)),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BitVector)
    }
}

impl From<BitVector> for Vec<u8> {
    fn from(v: BitVector) -> Self {
        v.0
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::config(format!("invalid character {c:?} in bit string"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BitVector)
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of positions where `x` and `y` differ.
pub fn hamming_distance(x: &BitVector, y: &BitVector) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::dimension(x.len(), y.len()));
    }
    Ok(x.0.iter().zip(&y.0).filter(|(a, b)| a != b).count())
}

fn check_index(i: usize, num_vars: usize) -> Result<()> {
    if i >= num_vars {
        return Err(Error::Index(format!("variable {i} not below {num_vars}")));
    }
    Ok(())
}

fn check_finite(c: f64, what: &str) -> Result<()> {
    if !c.is_finite() {
        return Err(Error::config(format!("{what} must be finite, got {c}")));
    }
    Ok(())
}

/// Quadratic unconstrained binary optimization problem in upper-triangular form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboProblem {
    num_vars: usize,
    coefficients: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl QuboProblem {
    pub fn new(num_vars: usize) -> Self {
        QuboProblem {
            num_vars,
            coefficients: BTreeMap::new(),
            offset: 0.0,
        }
    }

    /// Adds `c * q_i * q_j` to the objective. Indices are normalized to
    /// `i <= j` and accumulate onto any existing entry.
    pub fn add_term(&mut self, i: usize, j: usize, c: f64) -> Result<()> {
        check_index(i, self.num_vars)?;
        check_index(j, self.num_vars)?;
        check_finite(c, "coefficient")?;
        let key = if i <= j { (i, j) } else { (j, i) };
        *self.coefficients.entry(key).or_insert(0.0) += c;
        Ok(())
    }

    /// Adds `c * q_i`, stored on the diagonal.
    pub fn add_linear(&mut self, i: usize, c: f64) -> Result<()> {
        self.add_term(i, i, c)
    }

    pub fn add_offset(&mut self, c: f64) {
        self.offset += c;
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.coefficients.get(&key).copied().unwrap_or(0.0)
    }

    /// Terms in ascending `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.coefficients.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coefficients.len()
    }

    pub fn energy(&self, q: &BitVector) -> Result<f64> {
        if q.len() != self.num_vars {
            return Err(Error::dimension(self.num_vars, q.len()));
        }
        Ok(self.energy_unchecked(q.as_slice()))
    }

    pub(crate) fn energy_unchecked(&self, q: &[u8]) -> f64 {
        self.coefficients
            .iter()
            .filter(|(&(i, j), _)| q[i] == 1 && q[j] == 1)
            .map(|(_, &c)| c)
            .sum::<f64>()
            + self.offset
    }

    /// Exact change of variables `q = (s + 1) / 2`.
    pub fn to_ising(&self) -> IsingProblem {
        let mut ising = IsingProblem::new(self.num_vars);
        for (&(i, j), &c) in &self.coefficients {
            if i == j {
                // c q = c (s + 1) / 2
                ising.fields[i] += c / 2.0;
                ising.offset += c / 2.0;
            } else {
                // c q_i q_j = c (s_i s_j + s_i + s_j + 1) / 4
                let quarter = c / 4.0;
                *ising.couplings.entry((i, j)).or_insert(0.0) += quarter;
                ising.fields[i] += quarter;
                ising.fields[j] += quarter;
                ising.offset += quarter;
            }
        }
        ising.offset += self.offset;
        ising
    }

    /// Row-oriented view for solvers that need fast single-flip updates.
    pub fn compile(&self) -> CompiledQubo {
        CompiledQubo::new(self)
    }

    /// Sub-problem over `free` with every other variable clamped to its value
    /// in `assignment`. The returned problem's offset already carries the
    /// clamped contribution, so its energy on `x_free` equals the full
    /// energy of the merged assignment.
    pub fn clamp(&self, free: &[usize], assignment: &BitVector) -> Result<QuboProblem> {
        if assignment.len() != self.num_vars {
            return Err(Error::dimension(self.num_vars, assignment.len()));
        }
        let mut local = vec![usize::MAX; self.num_vars];
        for (k, &v) in free.iter().enumerate() {
            check_index(v, self.num_vars)?;
            if local[v] != usize::MAX {
                return Err(Error::config(format!("variable {v} listed twice in free set")));
            }
            local[v] = k;
        }
        let x = assignment.as_slice();
        let mut sub = QuboProblem::new(free.len());
        sub.offset = self.offset;
        for (&(i, j), &c) in &self.coefficients {
            match (local[i] != usize::MAX, local[j] != usize::MAX) {
                (true, true) => sub.add_term(local[i], local[j], c)?,
                (true, false) => {
                    if x[j] == 1 {
                        sub.add_term(local[i], local[i], c)?;
                    }
                }
                (false, true) => {
                    if x[i] == 1 {
                        sub.add_term(local[j], local[j], c)?;
                    }
                }
                (false, false) => {
                    if x[i] == 1 && x[j] == 1 {
                        sub.offset += c;
                    }
                }
            }
        }
        Ok(sub)
    }
}

/// Ising problem over spins in {-1, +1}.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingProblem {
    num_vars: usize,
    couplings: BTreeMap<(usize, usize), f64>,
    fields: Vec<f64>,
    offset: f64,
}

impl IsingProblem {
    pub fn new(num_vars: usize) -> Self {
        IsingProblem {
            num_vars,
            couplings: BTreeMap::new(),
            fields: vec![0.0; num_vars],
            offset: 0.0,
        }
    }

    pub fn add_coupling(&mut self, i: usize, j: usize, c: f64) -> Result<()> {
        check_index(i, self.num_vars)?;
        check_index(j, self.num_vars)?;
        check_finite(c, "coupling")?;
        if i == j {
            return Err(Error::Index(format!("self-coupling on spin {i}")));
        }
        let key = if i < j { (i, j) } else { (j, i) };
        *self.couplings.entry(key).or_insert(0.0) += c;
        Ok(())
    }

    pub fn add_field(&mut self, i: usize, h: f64) -> Result<()> {
        check_index(i, self.num_vars)?;
        check_finite(h, "field")?;
        self.fields[i] += h;
        Ok(())
    }

    pub fn add_offset(&mut self, c: f64) {
        self.offset += c;
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.couplings.get(&key).copied().unwrap_or(0.0)
    }

    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.couplings.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn energy(&self, spins: &[i8]) -> Result<f64> {
        if spins.len() != self.num_vars {
            return Err(Error::dimension(self.num_vars, spins.len()));
        }
        if let Some(&s) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Domain(s as i64));
        }
        Ok(self.energy_unchecked(spins))
    }

    pub(crate) fn energy_unchecked(&self, spins: &[i8]) -> f64 {
        let pair: f64 = self
            .couplings
            .iter()
            .map(|(&(i, j), &c)| c * (spins[i] * spins[j]) as f64)
            .sum();
        let linear: f64 = self.fields.iter().zip(spins).map(|(&h, &s)| h * s as f64).sum();
        pair + linear + self.offset
    }

    /// Energy of the spin image of a bit vector.
    pub fn energy_bits(&self, q: &BitVector) -> Result<f64> {
        self.energy(&q.to_spins())
    }

    pub fn compile(&self) -> CompiledIsing {
        CompiledIsing::new(self)
    }

    /// Inverse change of variables `s = 2q - 1`.
    pub fn to_qubo(&self) -> QuboProblem {
        let mut qubo = QuboProblem::new(self.num_vars);
        qubo.offset = self.offset;
        for (i, &h) in self.fields.iter().enumerate() {
            if h != 0.0 {
                // h s = 2h q - h
                qubo.coefficients.insert((i, i), 2.0 * h);
                qubo.offset -= h;
            }
        }
        for (&(i, j), &c) in &self.couplings {
            // c s_i s_j = 4c q_i q_j - 2c q_i - 2c q_j + c
            *qubo.coefficients.entry((i, j)).or_insert(0.0) += 4.0 * c;
            *qubo.coefficients.entry((i, i)).or_insert(0.0) -= 2.0 * c;
            *qubo.coefficients.entry((j, j)).or_insert(0.0) -= 2.0 * c;
            qubo.offset += c;
        }
        qubo
    }
}

/// Symmetric compressed-row layout of a QUBO, used by the enumerator and the
/// tabu search.
#[derive(Debug, Clone)]
pub struct CompiledQubo {
    linear: Vec<f64>,
    row_start: Vec<usize>,
    neighbor: Vec<usize>,
    weight: Vec<f64>,
    offset: f64,
}

fn build_rows(n: usize, pairs: impl Iterator<Item = (usize, usize, f64)>) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, j, c) in pairs {
        rows[i].push((j, c));
        rows[j].push((i, c));
    }
    let mut row_start = Vec::with_capacity(n + 1);
    let mut neighbor = Vec::new();
    let mut weight = Vec::new();
    row_start.push(0);
    for row in rows {
        for (j, c) in row {
            neighbor.push(j);
            weight.push(c);
        }
        row_start.push(neighbor.len());
    }
    (row_start, neighbor, weight)
}

impl CompiledQubo {
    fn new(p: &QuboProblem) -> Self {
        let mut linear = vec![0.0; p.num_vars];
        for (i, j, c) in p.terms() {
            if i == j {
                linear[i] += c;
            }
        }
        let (row_start, neighbor, weight) = build_rows(p.num_vars, p.terms().filter(|&(i, j, _)| i != j));
        CompiledQubo {
            linear,
            row_start,
            neighbor,
            weight,
            offset: p.offset,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_start[i]..self.row_start[i + 1];
        self.neighbor[range.clone()]
            .iter()
            .copied()
            .zip(self.weight[range].iter().copied())
    }

    pub fn energy(&self, x: &[u8]) -> f64 {
        let mut e = self.offset;
        for i in 0..self.num_vars() {
            if x[i] == 1 {
                e += self.linear[i];
                // each off-diagonal pair is stored twice
                e += 0.5 * self.row(i).filter(|&(j, _)| x[j] == 1).map(|(_, c)| c).sum::<f64>();
            }
        }
        e
    }

    /// `f_i = c_ii + sum_j c_ij x_j`, so flipping `i` changes the energy by
    /// `(1 - 2 x_i) f_i`.
    pub fn local_fields(&self, x: &[u8]) -> Vec<f64> {
        (0..self.num_vars())
            .map(|i| self.linear[i] + self.row(i).filter(|&(j, _)| x[j] == 1).map(|(_, c)| c).sum::<f64>())
            .collect()
    }

    #[inline]
    pub fn flip_delta(&self, x: &[u8], fields: &[f64], i: usize) -> f64 {
        if x[i] == 1 {
            -fields[i]
        } else {
            fields[i]
        }
    }

    /// Flips `i` in place and updates the neighbors' local fields.
    #[inline]
    pub fn apply_flip(&self, x: &mut [u8], fields: &mut [f64], i: usize) {
        x[i] ^= 1;
        let sign = if x[i] == 1 { 1.0 } else { -1.0 };
        for k in self.row_start[i]..self.row_start[i + 1] {
            fields[self.neighbor[k]] += sign * self.weight[k];
        }
    }
}

/// Compressed-row Ising layout used by the Metropolis sampler.
#[derive(Debug, Clone)]
pub struct CompiledIsing {
    fields: Vec<f64>,
    row_start: Vec<usize>,
    neighbor: Vec<usize>,
    weight: Vec<f64>,
    offset: f64,
}

impl CompiledIsing {
    fn new(p: &IsingProblem) -> Self {
        let (row_start, neighbor, weight) = build_rows(p.num_vars, p.couplings());
        CompiledIsing {
            fields: p.fields.clone(),
            row_start,
            neighbor,
            weight,
            offset: p.offset,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.fields.len()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `max_i |h_i| + max_i sum_j |J_ij|`, an upper bound on half of any
    /// single-flip energy change.
    pub fn energy_scale(&self) -> f64 {
        let max_h = self.fields.iter().fold(0.0f64, |m, h| m.max(h.abs()));
        let max_row = (0..self.num_vars())
            .map(|i| {
                self.weight[self.row_start[i]..self.row_start[i + 1]]
                    .iter()
                    .map(|c| c.abs())
                    .sum::<f64>()
            })
            .fold(0.0f64, f64::max);
        max_h + max_row
    }

    /// `l_i = h_i + sum_j J_ij s_j`.
    pub fn local_fields(&self, s: &[i8]) -> Vec<f64> {
        (0..self.num_vars())
            .map(|i| {
                let range = self.row_start[i]..self.row_start[i + 1];
                self.fields[i]
                    + self.neighbor[range.clone()]
                        .iter()
                        .zip(&self.weight[range])
                        .map(|(&j, &c)| c * s[j] as f64)
                        .sum::<f64>()
            })
            .collect()
    }

    /// Energy change of flipping spin `i`.
    #[inline]
    pub fn flip_delta(&self, s: &[i8], local: &[f64], i: usize) -> f64 {
        -2.0 * s[i] as f64 * local[i]
    }

    #[inline]
    pub fn apply_flip(&self, s: &mut [i8], local: &mut [f64], i: usize) {
        s[i] = -s[i];
        let change = 2.0 * s[i] as f64;
        for k in self.row_start[i]..self.row_start[i + 1] {
            local[self.neighbor[k]] += change * self.weight[k];
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ProblemJson {
    version: u32,
    num_vars: usize,
    terms: Vec<(usize, usize, f64)>,
    offset: f64,
}

impl Serialize for QuboProblem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ProblemJson {
            version: SCHEMA_VERSION,
            num_vars: self.num_vars,
            terms: self.terms().collect(),
            offset: self.offset,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuboProblem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ProblemJson::deserialize(deserializer)?;
        let mut p = QuboProblem::new(raw.num_vars);
        for (i, j, c) in raw.terms {
            p.add_term(i, j, c).map_err(serde::de::Error::custom)?;
        }
        p.offset = raw.offset;
        Ok(p)
    }
}

/// Ising problems share the QUBO schema; diagonal `[i, i, h]` entries carry
/// the fields.
impl Serialize for IsingProblem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut terms: Vec<(usize, usize, f64)> = self.couplings().collect();
        terms.extend(
            self.fields
                .iter()
                .enumerate()
                .filter(|(_, &h)| h != 0.0)
                .map(|(i, &h)| (i, i, h)),
        );
        terms.sort_by_key(|a| (a.0, a.1));
        ProblemJson {
            version: SCHEMA_VERSION,
            num_vars: self.num_vars,
            terms,
            offset: self.offset,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IsingProblem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ProblemJson::deserialize(deserializer)?;
        let mut p = IsingProblem::new(raw.num_vars);
        for (i, j, c) in raw.terms {
            let res = if i == j {
                p.add_field(i, c)
            } else {
                p.add_coupling(i, j, c)
            };
            res.map_err(serde::de::Error::custom)?;
        }
        p.offset = raw.offset;
        Ok(p)
    }
}
