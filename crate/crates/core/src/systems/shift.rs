use std::fmt;

use crate::error::SystemError;
use crate::metric::Metric;

use super::DynamicalSystem;

/// A 0/1 transition matrix in which every symbol has an incoming and an
/// outgoing edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    rows: Vec<Vec<bool>>,
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self, SystemError> {
        let k = rows.len();
        if k == 0 || rows.iter().any(|r| r.len() != k) {
            return Err(SystemError::BadTransitionMatrix);
        }
        for s in 0..k {
            let out = rows[s].iter().any(|&b| b);
            let inc = rows.iter().any(|r| r[s]);
            if !out || !inc {
                return Err(SystemError::StrandedSymbol(s));
            }
        }
        Ok(TransitionMatrix { rows })
    }

    /// Parses rows of `0`/`1` characters, one row per line or per slice entry.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, SystemError> {
        let rows = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(SystemError::BadTransitionMatrix),
                    })
                    .collect::<Result<Vec<bool>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(rows)
    }

    pub fn full(k: usize) -> Self {
        Self::new(vec![vec![true; k]; k]).expect("full shift")
    }

    pub fn golden_mean() -> Self {
        Self::parse_rows(&["11", "10"]).expect("golden mean")
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn allowed(&self, a: u8, b: u8) -> bool {
        self.rows[a as usize][b as usize]
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect()
    }

    /// Number of admissible periodic words of length `n` (closed walks of
    /// length `n` in the symbol graph), counted by enumeration.
    pub fn periodic_point_count(&self, n: usize) -> u64 {
        let k = self.size();
        let mut total = 0u64;
        // walks[v] = number of walks of length i from the start symbol to v
        for start in 0..k {
            let mut walks = vec![0u64; k];
            walks[start] = 1;
            for _ in 0..n {
                let mut next = vec![0u64; k];
                for (a, &w) in walks.iter().enumerate() {
                    if w == 0 {
                        continue;
                    }
                    for (b, slot) in next.iter_mut().enumerate() {
                        if self.rows[a][b] {
                            *slot += w;
                        }
                    }
                }
                walks = next;
            }
            total += walks[start];
        }
        total
    }

    /// Checks that `word` uses known symbols and only allowed transitions.
    pub fn check_word(&self, word: &[u8]) -> Result<(), SystemError> {
        for &s in word {
            if s as usize >= self.size() {
                return Err(SystemError::BadSymbol(s as usize, self.size()));
            }
        }
        for w in word.windows(2) {
            if !self.allowed(w[0], w[1]) {
                return Err(SystemError::Inadmissible(w[0] as usize, w[1] as usize));
            }
        }
        Ok(())
    }
}

/// A bi-infinite sequence given by a finite word, the index of coordinate 0
/// inside it, and periodic tails on both sides.
///
/// Coordinate `i` is read at position `p = origin + i` of the word; to the
/// right of the word the block `right` repeats, and to the left the block
/// `left` repeats read leftwards (position `-1 - j` holds `left[j mod |left|]`).
#[derive(Clone)]
pub struct SymbolPoint {
    word: Vec<u8>,
    origin: i64,
    left: Vec<u8>,
    right: Vec<u8>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl SymbolPoint {
    /// Raw constructor; admissibility is checked by [`Shift::point`].
    pub fn from_parts(left: Vec<u8>, word: Vec<u8>, origin: i64, right: Vec<u8>) -> Self {
        assert!(!left.is_empty() && !right.is_empty(), "tails must be nonempty");
        SymbolPoint {
            word,
            origin,
            left,
            right,
        }
    }

    /// `(left, word, origin, right)` as accepted by [`SymbolPoint::from_parts`].
    pub fn parts(&self) -> (&[u8], &[u8], i64, &[u8]) {
        (&self.left, &self.word, self.origin, &self.right)
    }

    /// The periodic sequence `… block block …` with `x_0 = block[0]`.
    pub fn periodic(block: &[u8]) -> Self {
        assert!(!block.is_empty());
        let p = block.len();
        let left = (0..p).map(|j| block[p - 1 - j]).collect();
        SymbolPoint {
            word: block.to_vec(),
            origin: 0,
            left,
            right: block.to_vec(),
        }
    }

    /// Constant tails on both sides around a central word whose coordinate 0
    /// is `word[center]`.
    pub fn with_constant_tails(left: u8, word: &[u8], center: usize, right: u8) -> Self {
        SymbolPoint {
            word: word.to_vec(),
            origin: center as i64,
            left: vec![left],
            right: vec![right],
        }
    }

    #[inline]
    pub fn at(&self, i: i64) -> u8 {
        let p = self.origin + i;
        let n = self.word.len() as i64;
        if p < 0 {
            let j = (-p - 1) as usize;
            self.left[j % self.left.len()]
        } else if p >= n {
            let j = (p - n) as usize;
            self.right[j % self.right.len()]
        } else {
            self.word[p as usize]
        }
    }

    /// Coordinates `lo..=hi`.
    pub fn slice(&self, lo: i64, hi: i64) -> Vec<u8> {
        (lo..=hi).map(|i| self.at(i)).collect()
    }

    /// The central word `x_{-k} … x_k`.
    pub fn central(&self, k: usize) -> Vec<u8> {
        self.slice(-(k as i64), k as i64)
    }

    /// The sequence reading `left_i` for `i < 0`, `mid[i]` for
    /// `0 ≤ i < |mid|` and `right_{i-|mid|}` beyond.
    pub fn glue(left: &SymbolPoint, mid: &[u8], right: &SymbolPoint) -> Self {
        // coordinates at or below `lo - 1` lie in the left tail of `left`
        let lo = (-left.origin).min(0);
        let l_tail: Vec<u8> = (0..left.left.len() as i64).map(|j| left.at(lo - 1 - j)).collect();
        let hi = (right.word.len() as i64 - right.origin).max(0);
        let r_tail: Vec<u8> = (0..right.right.len() as i64).map(|j| right.at(hi + j)).collect();
        let mut word: Vec<u8> = (lo..0).map(|i| left.at(i)).collect();
        word.extend_from_slice(mid);
        word.extend((0..hi).map(|i| right.at(i)));
        SymbolPoint {
            word,
            origin: -lo,
            left: l_tail,
            right: r_tail,
        }
    }

    /// Whether the two sequences agree at every coordinate `i ≥ lo`.
    pub fn agrees_from(&self, other: &SymbolPoint, lo: i64) -> bool {
        let end = (self.word.len() as i64 - self.origin).max(other.word.len() as i64 - other.origin);
        let last = end.max(lo) + lcm(self.right.len(), other.right.len()) as i64;
        (lo..=last).all(|i| self.at(i) == other.at(i))
    }

    /// Whether the two sequences agree at every coordinate `i ≤ hi`.
    pub fn agrees_until(&self, other: &SymbolPoint, hi: i64) -> bool {
        let start = (-self.origin).min(-other.origin);
        let first = start.min(hi) - lcm(self.left.len(), other.left.len()) as i64;
        (first..=hi).all(|i| self.at(i) == other.at(i))
    }

    /// The same sequence with coordinate `i` replaced by `symbol`.
    pub fn with_symbol(&self, i: i64, symbol: u8) -> Self {
        SymbolPoint::glue(&self.shifted(i), &[symbol], &self.shifted(i + 1)).shifted(-i)
    }

    pub fn shifted(&self, by: i64) -> Self {
        let mut s = self.clone();
        s.origin += by;
        s
    }

    /// Relative coordinate range outside which both sides are purely
    /// periodic with periods dividing `left.len()` / `right.len()`.
    fn extent(&self) -> (i64, i64) {
        (-self.origin, self.word.len() as i64 - self.origin)
    }

    /// Window `[lo, hi]` on which agreement of two points implies equality.
    fn comparison_window(&self, other: &SymbolPoint) -> (i64, i64) {
        let (a0, a1) = self.extent();
        let (b0, b1) = other.extent();
        let ll = lcm(self.left.len(), other.left.len()) as i64;
        let lr = lcm(self.right.len(), other.right.len()) as i64;
        (a0.min(b0) - ll, a1.max(b1) + lr)
    }

    /// Smallest `|i|` with `x_i ≠ y_i`, or `None` if the points coincide.
    pub fn first_difference(&self, other: &SymbolPoint) -> Option<u64> {
        let (lo, hi) = self.comparison_window(other);
        let reach = lo.unsigned_abs().max(hi.unsigned_abs());
        for m in 0..=reach {
            let i = m as i64;
            if self.at(i) != other.at(i) || self.at(-i) != other.at(-i) {
                return Some(m);
            }
        }
        None
    }

    /// Whether `left` and `right` tails are the same block as the word,
    /// i.e. the point is periodic; returns the least period when it is.
    pub fn period(&self) -> Option<usize> {
        let cand = lcm(self.left.len(), self.right.len());
        let cand = lcm(cand, self.word.len().max(1));
        let shifted = self.shifted(cand as i64);
        if shifted != *self {
            return None;
        }
        (1..=cand).find(|&p| cand.is_multiple_of(p) && self.shifted(p as i64) == *self)
    }

    fn junction_pairs(&self) -> Vec<(u8, u8)> {
        let (lo, hi) = self.extent();
        let ll = self.left.len() as i64;
        let lr = self.right.len() as i64;
        let from = lo - ll - 1;
        let to = hi + lr + 1;
        (from..to).map(|i| (self.at(i), self.at(i + 1))).collect()
    }
}

impl PartialEq for SymbolPoint {
    fn eq(&self, other: &Self) -> bool {
        let (lo, hi) = self.comparison_window(other);
        (lo..=hi).all(|i| self.at(i) == other.at(i))
    }
}

impl fmt::Debug for SymbolPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |v: &[u8]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("");
        let left: Vec<u8> = self.left.iter().rev().copied().collect();
        write!(
            f,
            "({})*{}|{}*({}) @{}",
            sym(&left),
            sym(&self.word[..(self.origin.clamp(0, self.word.len() as i64)) as usize]),
            sym(&self.word[(self.origin.clamp(0, self.word.len() as i64)) as usize..]),
            sym(&self.right),
            self.origin
        )
    }
}

/// `d(x, y) = 2^{-min{|i| : x_i ≠ y_i}}`.
pub fn symbol_distance(x: &SymbolPoint, y: &SymbolPoint) -> f64 {
    match x.first_difference(y) {
        None => 0.0,
        Some(m) => 0.5f64.powi(m.min(1100) as i32),
    }
}

/// The vertex shift of a transition matrix: `σ(x)_i = x_{i+1}`.
#[derive(Debug, Clone)]
pub struct Shift {
    name: String,
    tm: TransitionMatrix,
    metric: Metric<SymbolPoint>,
}

impl Shift {
    pub fn new(tm: TransitionMatrix) -> Self {
        Shift {
            name: format!("sft[{}]", tm.row_strings().join(",")),
            tm,
            metric: Metric::new("symbolic", Some(1.0), symbol_distance),
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn transitions(&self) -> &TransitionMatrix {
        &self.tm
    }

    pub fn alphabet_size(&self) -> usize {
        self.tm.size()
    }

    /// Builds a point after checking that every transition is allowed.
    pub fn point(
        &self,
        left: Vec<u8>,
        word: Vec<u8>,
        origin: i64,
        right: Vec<u8>,
    ) -> Result<SymbolPoint, SystemError> {
        let p = SymbolPoint::from_parts(left, word, origin, right);
        self.check_point(&p)?;
        Ok(p)
    }

    pub fn check_point(&self, p: &SymbolPoint) -> Result<(), SystemError> {
        for s in p.left.iter().chain(&p.word).chain(&p.right) {
            if *s as usize >= self.tm.size() {
                return Err(SystemError::BadSymbol(*s as usize, self.tm.size()));
            }
        }
        for (a, b) in p.junction_pairs() {
            if !self.tm.allowed(a, b) {
                return Err(SystemError::Inadmissible(a as usize, b as usize));
            }
        }
        Ok(())
    }

    pub fn periodic(&self, block: &[u8]) -> Result<SymbolPoint, SystemError> {
        let p = SymbolPoint::periodic(block);
        self.check_point(&p)?;
        Ok(p)
    }

    /// All admissible words of length `n`, in lexicographic order.
    pub fn admissible_words(&self, n: usize) -> Vec<Vec<u8>> {
        let k = self.tm.size() as u8;
        let mut words: Vec<Vec<u8>> = (0..k).map(|s| vec![s]).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for w in &words {
                let last = *w.last().unwrap();
                for s in 0..k {
                    if self.tm.allowed(last, s) {
                        let mut v = w.clone();
                        v.push(s);
                        next.push(v);
                    }
                }
            }
            words = next;
        }
        if n == 0 {
            return vec![vec![]];
        }
        words
    }

    /// Extends an admissible word to a point with coordinate 0 at
    /// `word[center]`, continuing on both sides by greedy walks in the symbol
    /// graph until they close up into cycles.
    pub fn extend_word(&self, word: &[u8], center: usize) -> Result<SymbolPoint, SystemError> {
        self.tm.check_word(word)?;
        let (r_trans, right) = self.tail_from(*word.last().expect("nonempty word"), true);
        let (l_trans, left) = self.tail_from(word[0], false);
        let mut full: Vec<u8> = l_trans.iter().rev().copied().collect();
        full.extend_from_slice(word);
        full.extend_from_slice(&r_trans);
        let origin = (l_trans.len() + center) as i64;
        let p = SymbolPoint::from_parts(left, full, origin, right);
        self.check_point(&p)?;
        Ok(p)
    }

    /// Transient symbols and periodic tail of the greedy walk leaving `s`
    /// (read outward from `s`).
    fn tail_from(&self, s: u8, forward: bool) -> (Vec<u8>, Vec<u8>) {
        let (path, pos) = self.walk(s, forward);
        if pos == 0 {
            let mut tail = path[1..].to_vec();
            tail.push(path[0]);
            (Vec::new(), tail)
        } else {
            (path[1..pos].to_vec(), path[pos..].to_vec())
        }
    }

    /// Greedy walk from `s` (forwards along edges or backwards against them),
    /// returning the visited path and the index where its final cycle starts.
    fn walk(&self, s: u8, forward: bool) -> (Vec<u8>, usize) {
        let k = self.tm.size() as u8;
        let mut path = vec![s];
        loop {
            let cur = *path.last().unwrap();
            let nxt = (0..k)
                .find(|&t| {
                    if forward {
                        self.tm.allowed(cur, t)
                    } else {
                        self.tm.allowed(t, cur)
                    }
                })
                .expect("no stranded symbols");
            if let Some(pos) = path.iter().position(|&q| q == nxt) {
                return (path, pos);
            }
            path.push(nxt);
        }
    }
}

impl DynamicalSystem for Shift {
    type Point = SymbolPoint;

    fn name(&self) -> &str {
        &self.name
    }

    fn forward(&self, p: &SymbolPoint) -> SymbolPoint {
        p.shifted(1)
    }

    fn backward(&self, p: &SymbolPoint) -> SymbolPoint {
        p.shifted(-1)
    }

    fn metric(&self) -> &Metric<SymbolPoint> {
        &self.metric
    }

    fn iterate(&self, p: &SymbolPoint, n: i64) -> SymbolPoint {
        p.shifted(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix_power_trace(tm: &TransitionMatrix, n: usize) -> u64 {
        let k = tm.size();
        let m: Vec<Vec<u64>> = tm
            .rows()
            .iter()
            .map(|r| r.iter().map(|&b| b as u64).collect())
            .collect();
        let mut acc: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect();
        for _ in 0..n {
            acc = (0..k)
                .map(|i| (0..k).map(|j| (0..k).map(|l| acc[i][l] * m[l][j]).sum()).collect())
                .collect();
        }
        (0..k).map(|i| acc[i][i]).sum()
    }

    #[test]
    fn full_shift_moves_left() {
        let s = Shift::new(TransitionMatrix::full(2));
        let x = s.periodic(&[0, 1]).unwrap();
        assert_eq!(s.forward(&x), s.periodic(&[1, 0]).unwrap());
        assert_ne!(x, s.periodic(&[1, 0]).unwrap());
        assert_eq!(s.backward(&s.forward(&x)), x);
        assert_eq!(x.period(), Some(2));
    }

    #[test]
    fn golden_mean_rejects_11() {
        let tm = TransitionMatrix::golden_mean();
        assert_eq!(tm.check_word(&[1, 1, 0]), Err(SystemError::Inadmissible(1, 1)));
        let s = Shift::new(tm);
        assert!(s.extend_word(&[1, 1, 0], 1).is_err());
        assert!(s.point(vec![0], vec![1, 1], 0, vec![0]).is_err());
        assert!(s.point(vec![0], vec![0, 1], 0, vec![0]).is_ok());
        assert!(s.point(vec![1, 0], vec![0, 1], 0, vec![0]).is_ok());
        // constant tail of 1s is forbidden
        assert!(s.point(vec![0], vec![0], 0, vec![1]).is_err());
    }

    #[test]
    fn periodic_counts_match_trace() {
        let gm = TransitionMatrix::golden_mean();
        assert_eq!(gm.periodic_point_count(4), 7);
        assert_eq!(matrix_power_trace(&gm, 4), 7);
        let other = TransitionMatrix::parse_rows(&["110", "001", "100"]).unwrap();
        for n in 1..10 {
            assert_eq!(other.periodic_point_count(n), matrix_power_trace(&other, n));
            assert_eq!(
                TransitionMatrix::full(3).periodic_point_count(n),
                3u64.pow(n as u32)
            );
        }
    }

    #[test]
    fn stranded_symbol_rejected() {
        assert_eq!(
            TransitionMatrix::parse_rows(&["11", "00"]),
            Err(SystemError::StrandedSymbol(1))
        );
        assert_eq!(
            TransitionMatrix::parse_rows(&["10", "10"]),
            Err(SystemError::StrandedSymbol(1))
        );
        assert!(TransitionMatrix::parse_rows(&["1x", "10"]).is_err());
    }

    #[test]
    fn extension_keeps_central_word() {
        // 0 -> 1 -> 2 -> {0, 3}, 3 -> {3, 0}
        let tm = TransitionMatrix::parse_rows(&["0100", "0010", "1001", "1001"]).unwrap();
        let s = Shift::new(tm);
        for n in 1..6 {
            for w in s.admissible_words(n) {
                for c in 0..n {
                    let p = s.extend_word(&w, c).unwrap();
                    assert_eq!(p.slice(-(c as i64), (n - 1 - c) as i64), w);
                    s.check_point(&p).unwrap();
                }
            }
        }
    }

    #[test]
    fn metric_values() {
        let s = Shift::new(TransitionMatrix::full(2));
        let x = s.periodic(&[0]).unwrap();
        let y = SymbolPoint::with_constant_tails(0, &[0, 0, 0, 1], 0, 0);
        assert_eq!(s.distance(&x, &y), 0.125);
        assert_eq!(s.distance(&x, &x.shifted(5)), 0.0);
        let z = SymbolPoint::with_constant_tails(0, &[1, 0], 1, 0);
        assert_eq!(s.distance(&x, &z), 0.5);
    }
}
