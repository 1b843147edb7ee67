use super::OracleError;

/// A multiset of `(iterate, exponent)` pairs with exponents summing to `d`,
/// stored with strictly decreasing iterates and positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedDegreeQuery {
    parts: Vec<(u64, usize)>,
}

impl MixedDegreeQuery {
    /// Merges repeated iterates and drops zero exponents before validating.
    pub fn new(dim: usize, parts: &[(u64, usize)]) -> Result<Self, OracleError> {
        let mut merged: Vec<(u64, usize)> = Vec::new();
        for &(m, r) in parts {
            if r == 0 {
                continue;
            }
            match merged.iter_mut().find(|p| p.0 == m) {
                Some(p) => p.1 += r,
                None => merged.push((m, r)),
            }
        }
        merged.sort_by(|a, b| b.0.cmp(&a.0));
        let total: usize = merged.iter().map(|p| p.1).sum();
        if total != dim {
            return Err(OracleError::InvalidQuery(format!("exponents sum to {total}, expected {dim}")));
        }
        Ok(MixedDegreeQuery { parts: merged })
    }

    /// `{(n, i), (0, d - i)}`, the query for `deg_i(f^n)`.
    pub fn first(dim: usize, n: u64, i: usize) -> Result<Self, OracleError> {
        if i > dim {
            return Err(OracleError::InvalidQuery(format!("degree index {i} exceeds dimension {dim}")));
        }
        Self::new(dim, &[(n, i), (0, dim - i)])
    }

    pub fn parts(&self) -> &[(u64, usize)] {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.1).sum()
    }

    /// `"m1^r1,m2^r2,..."`
    pub fn key(&self) -> String {
        self.parts.iter().map(|(m, r)| format!("{m}^{r}")).collect::<Vec<_>>().join(",")
    }

    pub fn parse_key(dim: usize, key: &str) -> Result<Self, OracleError> {
        let bad = || OracleError::InvalidQuery(format!("bad query key {key:?}"));
        let mut parts = Vec::new();
        for piece in key.split(',') {
            let (m, r) = piece.split_once('^').ok_or_else(bad)?;
            parts.push((m.trim().parse().map_err(|_| bad())?, r.trim().parse().map_err(|_| bad())?));
        }
        Self::new(dim, &parts)
    }

    /// `(i, n)` when this query is `deg_i(f^n)` with `i, n > 0`.
    pub fn as_degree(&self) -> Option<(usize, u64)> {
        match self.parts.as_slice() {
            [(n, i)] if *n > 0 => Some((*i, *n)),
            [(n, i), (0, _)] => Some((*i, *n)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let q = MixedDegreeQuery::new(3, &[(0, 1), (2, 1), (0, 0), (2, 1)]).unwrap();
        assert_eq!(q.parts(), &[(2, 2), (0, 1)]);
        assert_eq!(q.key(), "2^2,0^1");
        assert_eq!(MixedDegreeQuery::parse_key(3, "2^2,0^1").unwrap(), q);
        assert!(MixedDegreeQuery::new(3, &[(1, 2)]).is_err());
        assert!(MixedDegreeQuery::parse_key(2, "1,1").is_err());
    }

    #[test]
    fn degree_form() {
        assert_eq!(MixedDegreeQuery::first(2, 5, 1).unwrap().as_degree(), Some((1, 5)));
        assert_eq!(MixedDegreeQuery::first(2, 5, 2).unwrap().as_degree(), Some((2, 5)));
        assert_eq!(MixedDegreeQuery::first(2, 0, 1).unwrap().as_degree(), None);
        assert_eq!(MixedDegreeQuery::new(2, &[(3, 1), (1, 1)]).unwrap().as_degree(), None);
    }
}
