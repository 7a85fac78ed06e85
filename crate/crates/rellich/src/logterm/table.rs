use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{polyharmonic, AlphaPoly, TermSum};
use crate::error::{Error, Result};
use crate::rational::{fmt, parse, qi, Q};

/// Coefficients `C_{l,j}` (`0 <= j <= 2l-1`) and `D_{l,j}` (`0 <= j <= 2l`) for
/// every level `1 <= l <= m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    pub n: u32,
    pub m: u32,
    pub c: BTreeMap<(u32, u32), Q>,
    pub d: BTreeMap<(u32, u32), Q>,
}

impl CoeffTable {
    pub fn c(&self, l: u32, j: u32) -> &Q {
        &self.c[&(l, j)]
    }

    pub fn d(&self, l: u32, j: u32) -> &Q {
        &self.d[&(l, j)]
    }

    /// Leading factor `E_k`: `C_{m,2m-1}` for `k = 2m`, `D_{m,2m}` for `k = 2m+1`.
    pub fn leading(&self, odd: bool) -> &Q {
        if odd {
            self.d(self.m, 2 * self.m)
        } else {
            self.c(self.m, 2 * self.m - 1)
        }
    }
}

/// Closed form `C_{m,2m-1} = (-1)^{m-1}/(2m) prod_{j=1}^m 2j(N-2j)`.
pub fn closed_form_top(n: u32, m: u32) -> Q {
    let ni = n as i64;
    let mut c = Q::new(if m % 2 == 1 { 1.into() } else { (-1).into() }, (2 * m as i64).into());
    for j in 1..=m as i64 {
        c *= qi(2 * j * (ni - 2 * j));
    }
    c
}

/// Fills the table by the recursion in `j` for `j <= 2l-2` and the closed form
/// for `j = 2l-1`.
pub fn coeff_table(n: u32, m: u32) -> Result<CoeffTable> {
    if m < 1 || n < 2 {
        return Err(Error::OutOfRange(format!("coeff_table needs m >= 1, N >= 2 (got N={n}, m={m})")));
    }
    let ni = n as i64;
    let mut c: BTreeMap<(u32, u32), Q> = BTreeMap::new();
    c.insert((1, 0), Q::one());
    c.insert((1, 1), qi(ni - 2));
    for l in 2..=m {
        let li = l as i64;
        let a = qi(ni + 2 - 4 * li);
        let b = qi(2 * (li - 1) * (ni - 2 * li));
        let prev = |j: u32| -> Q { c.get(&(l - 1, j)).cloned().unwrap_or_else(Q::zero) };
        let mut row = vec![Q::one()];
        row.push(prev(1) + &a * prev(0));
        for j in 2..=(2 * l - 3) {
            row.push(prev(j) + &a * prev(j - 1) - &b * prev(j - 2));
        }
        let j = 2 * l - 2;
        row.push(&a * prev(j - 1) - &b * prev(j - 2));
        row.push(closed_form_top(n, l));
        for (j, v) in row.into_iter().enumerate() {
            c.insert((l, j as u32), v);
        }
    }
    let mut d = BTreeMap::new();
    for l in 1..=m {
        let two_l = qi(2 * l as i64);
        d.insert((l, 0), Q::one());
        for j in 1..=(2 * l - 1) {
            d.insert((l, j), &c[&(l, j)] - &two_l * &c[&(l, j - 1)]);
        }
        d.insert((l, 2 * l), -&two_l * &c[&(l, 2 * l - 1)]);
    }
    Ok(CoeffTable { n, m, c, d })
}

/// First disagreement between the generic algebra and a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub display: String,
    pub m: u32,
    pub j: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub m: u32,
    pub passed: bool,
    pub first_mismatch: Option<Mismatch>,
}

/// Table form of `Delta^l L^alpha` (even) or `(Delta^l L^alpha)'` (odd).
fn table_form(table: &CoeffTable, l: u32, odd: bool) -> TermSum {
    let mut s = TermSum::zero(table.n, qi(1));
    let li = l as i64;
    if odd {
        for j in 0..=(2 * l) {
            let sign = if j % 2 == 0 { qi(-1) } else { qi(1) };
            let coeff = AlphaPoly::falling(0, 2 * li - j as i64).scale(&(sign * table.d(l, j)));
            s.add_term((-2 * li - 1, 1, -2 * li + j as i64 - 1), coeff);
        }
    } else {
        for j in 0..=(2 * l - 1) {
            let sign = if j % 2 == 0 { qi(1) } else { qi(-1) };
            let coeff = AlphaPoly::falling(0, 2 * li - j as i64 - 1).scale(&(sign * table.c(l, j)));
            s.add_term((-2 * li, 1, -2 * li + j as i64), coeff);
        }
    }
    s
}

/// Checks `table` against `polyharmonic(L^alpha)` as polynomial identities in
/// `alpha`, for every level and both parities.
pub fn verify_with(table: &CoeffTable) -> VerifyReport {
    let n = table.n;
    let base = TermSum::log_power(n, qi(1), 0);
    for l in 1..=table.m {
        for odd in [false, true] {
            let generic = polyharmonic(&base, l, odd);
            let expected = table_form(table, l, odd);
            if generic == expected {
                continue;
            }
            let li = l as i64;
            let keys: std::collections::BTreeSet<_> =
                generic.raw().keys().chain(expected.raw().keys()).copied().collect();
            for key in keys {
                let g = generic.get(key).cloned().unwrap_or_default();
                let e = expected.get(key).cloned().unwrap_or_default();
                if g != e {
                    let j = if odd { key.2 + 2 * li + 1 } else { key.2 + 2 * li };
                    return VerifyReport {
                        n,
                        m: table.m,
                        passed: false,
                        first_mismatch: Some(Mismatch {
                            display: if odd { "odd" } else { "even" }.into(),
                            m: l,
                            j: j.max(0) as u32,
                            n,
                            expected: e.to_string(),
                            found: g.to_string(),
                        }),
                    };
                }
            }
        }
    }
    VerifyReport { n, m: table.m, passed: true, first_mismatch: None }
}

pub fn verify_table(n: u32, m: u32) -> Result<VerifyReport> {
    Ok(verify_with(&coeff_table(n, m)?))
}

impl Serialize for CoeffTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2 + self.c.len() + self.d.len()))?;
        map.serialize_entry("N", &self.n)?;
        map.serialize_entry("m", &self.m)?;
        for ((l, j), v) in &self.c {
            map.serialize_entry(&format!("C[{l}][{j}]"), &fmt(v))?;
        }
        for ((l, j), v) in &self.d {
            map.serialize_entry(&format!("D[{l}][{j}]"), &fmt(v))?;
        }
        map.end()
    }
}

fn parse_key(k: &str) -> Option<(char, u32, u32)> {
    let kind = k.chars().next()?;
    let rest = k.get(1..)?.strip_prefix('[')?.strip_suffix(']')?;
    let (a, b) = rest.split_once("][")?;
    Some((kind, a.parse().ok()?, b.parse().ok()?))
}

impl<'de> Deserialize<'de> for CoeffTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = CoeffTable;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                write!(f, "a coefficient table map")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> std::result::Result<CoeffTable, A::Error> {
                use serde::de::Error as _;
                let mut t = CoeffTable { n: 0, m: 0, c: BTreeMap::new(), d: BTreeMap::new() };
                while let Some(k) = a.next_key::<String>()? {
                    match k.as_str() {
                        "N" => t.n = a.next_value()?,
                        "m" => t.m = a.next_value()?,
                        _ => {
                            let v: String = a.next_value()?;
                            let q = parse(&v).ok_or_else(|| A::Error::custom(format!("bad value {v}")))?;
                            match parse_key(&k) {
                                Some(('C', l, j)) => t.c.insert((l, j), q),
                                Some(('D', l, j)) => t.d.insert((l, j), q),
                                _ => return Err(A::Error::custom(format!("bad key {k}"))),
                            };
                        }
                    }
                }
                Ok(t)
            }
        }
        d.deserialize_map(V)
    }
}
