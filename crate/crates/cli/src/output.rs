use std::collections::BTreeMap;
use std::fmt::Write;

use bgcrys::homology::FinAbGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per (degree, invariant factor); a free summand is factor 0 and
/// a zero group is a single row with an empty factor.
pub fn csv_groups(sections: &[(&str, &BTreeMap<i64, FinAbGroup>)]) -> String {
    let mut out = String::from("section,degree,invariant_factor\n");
    for (name, groups) in sections {
        for (n, g) in groups.iter() {
            let mut factors: Vec<String> = g.torsion.iter().map(|t| t.to_string()).collect();
            factors.extend(std::iter::repeat("0".to_string()).take(g.free_rank));
            if factors.is_empty() {
                factors.push(String::new());
            }
            for f in factors {
                let _ = writeln!(out, "{},{n},{f}", csv_field(name));
            }
        }
    }
    out
}

pub fn csv_pairs(rows: &[(String, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{},{}", csv_field(k), csv_field(v));
    }
    out
}

pub fn text_groups(symbol: &str, superscript: bool, groups: &BTreeMap<i64, FinAbGroup>) -> String {
    let mut out = String::new();
    for (n, g) in groups {
        let _ = writeln!(out, "{symbol}{}{n} = {g}", if superscript { "^" } else { "_" });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows() {
        let g: BTreeMap<i64, FinAbGroup> = [
            (0, FinAbGroup::free(1)),
            (1, FinAbGroup::from_orders(&[2, 4])),
            (2, FinAbGroup::trivial()),
        ]
        .into_iter()
        .collect();
        assert_eq!(
            csv_groups(&[("H", &g)]),
            "section,degree,invariant_factor\nH,0,0\nH,1,2\nH,1,4\nH,2,\n"
        );
    }
}
