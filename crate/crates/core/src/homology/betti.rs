use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One graded Betti number `β_{i,j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub i: usize,
    pub j: i64,
    pub dim: u64,
    /// False when the value is only known inside a capped window.
    pub certified: bool,
}

/// Graded Betti numbers `(i, j) ↦ dim Tor_i(M, K)_j`; entries not listed are
/// zero inside the scanned window.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub entries: Vec<BettiEntry>,
    pub cap: Option<i64>,
}

impl BettiTable {
    pub fn new(cap: Option<i64>) -> Self {
        Self {
            entries: Vec::new(),
            cap,
        }
    }

    /// Inserts or replaces an entry, keeping `(i, j)` order.
    pub fn set(&mut self, i: usize, j: i64, dim: u64, certified: bool) {
        let entry = BettiEntry { i, j, dim, certified };
        match self.entries.binary_search_by_key(&(i, j), |e| (e.i, e.j)) {
            Ok(pos) => self.entries[pos] = entry,
            Err(pos) => self.entries.insert(pos, entry),
        }
    }

    pub fn get(&self, i: usize, j: i64) -> u64 {
        self.entries
            .binary_search_by_key(&(i, j), |e| (e.i, e.j))
            .map(|pos| self.entries[pos].dim)
            .unwrap_or(0)
    }

    /// `t_i = max{j : β_{i,j} ≠ 0}`.
    pub fn t(&self, i: usize) -> Option<i64> {
        self.entries.iter().filter(|e| e.i == i && e.dim > 0).map(|e| e.j).max()
    }

    /// `max_i (t_i - i)` over the listed entries.
    pub fn reg(&self) -> Option<i64> {
        self.entries
            .iter()
            .filter(|e| e.dim > 0)
            .map(|e| e.j - e.i as i64)
            .max()
    }

    pub fn all_certified(&self) -> bool {
        self.entries.iter().all(|e| e.certified)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    /// Plain-text table with rows `j - i` and columns `i`, Macaulay style.
    pub fn render(&self) -> String {
        let nonzero: Vec<&BettiEntry> = self.entries.iter().filter(|e| e.dim > 0).collect();
        if nonzero.is_empty() {
            return "0\n".into();
        }
        let max_i = nonzero.iter().map(|e| e.i).max().unwrap();
        let mut rows: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
        for e in &nonzero {
            rows.entry(e.j - e.i as i64).or_insert_with(|| vec![0; max_i + 1])[e.i] = e.dim;
        }
        let width = nonzero
            .iter()
            .map(|e| e.dim.to_string().len())
            .max()
            .unwrap()
            .max(max_i.to_string().len())
            + 1;
        let mut out = format!("{:>4}:", "");
        for i in 0..=max_i {
            out += &format!("{i:>width$}");
        }
        out.push('\n');
        for (row, vals) in rows {
            out += &format!("{row:>4}:");
            for v in vals {
                let cell = if v == 0 { "-".to_string() } else { v.to_string() };
                out += &format!("{cell:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_and_statistics() {
        let mut t = BettiTable::new(Some(4));
        t.set(1, 3, 2, true);
        t.set(0, 0, 1, true);
        t.set(1, 2, 0, true);
        assert_eq!(t.get(1, 3), 2);
        assert_eq!(t.get(2, 3), 0);
        assert_eq!(t.t(1), Some(3));
        assert_eq!(t.reg(), Some(2));
        assert_eq!(
            t.to_json(),
            r#"{"entries":[{"i":0,"j":0,"dim":1,"certified":true},{"i":1,"j":2,"dim":0,"certified":true},{"i":1,"j":3,"dim":2,"certified":true}],"cap":4}"#
        );
        let back: BettiTable = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert!(t.render().contains("2:"));
    }
}
