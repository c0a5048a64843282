//! Reading and writing parity-check matrices in the alist interchange
//! format.
//!
//! Layout: line 1 `n m`; line 2 `max_col_deg max_row_deg`; line 3 the n
//! column degrees; line 4 the m row degrees; then n column adjacency
//! lines and m row adjacency lines. Entries on disk are 1-based; zero
//! padding is permitted on input and ignored. The writer emits a
//! canonical, unpadded form so output is byte-deterministic.

use crate::pcm::Pcm;
use crate::{Error, Result};

fn parse_line(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::AlistParse {
                line: lineno,
                msg: format!("expected integer, got {tok:?}"),
            })
        })
        .collect()
}

/// Parses an alist character stream into a [`Pcm`].
pub fn pcm_from_alist(text: &str) -> Result<Pcm> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let mut it = lines.iter();

    let mut next_line = |what: &str| -> Result<(usize, &str)> {
        it.next().copied().ok_or_else(|| Error::AlistParse {
            line: text.lines().count() + 1,
            msg: format!("unexpected end of file, expected {what}"),
        })
    };

    let (ln, header) = next_line("header \"n m\"")?;
    let header = parse_line(header, ln)?;
    if header.len() != 2 {
        return Err(Error::AlistParse { line: ln, msg: "header must be \"n m\"".into() });
    }
    let (n, m) = (header[0], header[1]);
    if m < 1 || m >= n {
        return Err(Error::AlistParse {
            line: ln,
            msg: format!("invalid shape n={n} m={m} (need 1 <= m < n)"),
        });
    }

    let (ln, maxdeg) = next_line("max degrees")?;
    let maxdeg = parse_line(maxdeg, ln)?;
    if maxdeg.len() != 2 {
        return Err(Error::AlistParse { line: ln, msg: "expected \"max_col_deg max_row_deg\"".into() });
    }
    let (max_col_deg, max_row_deg) = (maxdeg[0], maxdeg[1]);

    let (ln, cdeg_line) = next_line("column degrees")?;
    let col_degs = parse_line(cdeg_line, ln)?;
    if col_degs.len() != n {
        return Err(Error::AlistParse {
            line: ln,
            msg: format!("expected {n} column degrees, got {}", col_degs.len()),
        });
    }
    let (ln, rdeg_line) = next_line("row degrees")?;
    let row_degs = parse_line(rdeg_line, ln)?;
    if row_degs.len() != m {
        return Err(Error::AlistParse {
            line: ln,
            msg: format!("expected {m} row degrees, got {}", row_degs.len()),
        });
    }
    if col_degs.iter().any(|&d| d > max_col_deg) || row_degs.iter().any(|&d| d > max_row_deg) {
        return Err(Error::AlistParse { line: ln, msg: "degree exceeds declared maximum".into() });
    }

    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (i, &deg) in col_degs.iter().enumerate() {
        let (ln, line) = next_line("column adjacency line")?;
        let mut entries = parse_line(line, ln)?;
        entries.retain(|&e| e != 0); // padding
        if entries.len() != deg {
            return Err(Error::AlistParse {
                line: ln,
                msg: format!("column {} lists {} entries, degree says {deg}", i + 1, entries.len()),
            });
        }
        for &e in &entries {
            if e > m {
                return Err(Error::AlistParse {
                    line: ln,
                    msg: format!("row index {e} out of range 1..={m}"),
                });
            }
        }
        let mut sorted = entries.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::AlistParse {
                line: ln,
                msg: format!("duplicate entry in column {}", i + 1),
            });
        }
        cols.push(sorted.into_iter().map(|e| e - 1).collect());
    }

    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(m);
    for (j, &deg) in row_degs.iter().enumerate() {
        let (ln, line) = next_line("row adjacency line")?;
        let mut entries = parse_line(line, ln)?;
        entries.retain(|&e| e != 0);
        if entries.len() != deg {
            return Err(Error::AlistParse {
                line: ln,
                msg: format!("row {} lists {} entries, degree says {deg}", j + 1, entries.len()),
            });
        }
        for &e in &entries {
            if e > n {
                return Err(Error::AlistParse {
                    line: ln,
                    msg: format!("column index {e} out of range 1..={n}"),
                });
            }
        }
        let mut sorted = entries.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::AlistParse {
                line: ln,
                msg: format!("duplicate entry in row {}", j + 1),
            });
        }
        rows.push(sorted.into_iter().map(|e| e - 1).collect());
    }

    let pcm = Pcm::from_rows(n, rows).map_err(|e| Error::AlistParse {
        line: 1,
        msg: e.to_string(),
    })?;

    // Cross-check: the column view written in the file must describe the
    // same edge set as the row view.
    if pcm.cols() != cols.as_slice() {
        return Err(Error::AlistParse {
            line: 1,
            msg: "row and column adjacency lists disagree".into(),
        });
    }
    Ok(pcm)
}

/// Serializes a [`Pcm`] to canonical alist text.
pub fn pcm_to_alist(pcm: &Pcm) -> String {
    let (vn_deg, cn_deg) = pcm.degree_profile();
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", pcm.num_cols(), pcm.num_rows()));
    out.push_str(&format!(
        "{} {}\n",
        vn_deg.iter().max().copied().unwrap_or(0),
        cn_deg.iter().max().copied().unwrap_or(0)
    ));
    // a lone padding zero keeps degree-0 adjacency lines non-blank
    let join = |v: &[usize]| {
        if v.is_empty() {
            "0".to_string()
        } else {
            v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
        }
    };
    out.push_str(&join(&vn_deg));
    out.push('\n');
    out.push_str(&join(&cn_deg));
    out.push('\n');
    for i in 0..pcm.num_cols() {
        let entries: Vec<usize> = pcm.col(i).iter().map(|&j| j + 1).collect();
        out.push_str(&join(&entries));
        out.push('\n');
    }
    for j in 0..pcm.num_rows() {
        let entries: Vec<usize> = pcm.row(j).iter().map(|&i| i + 1).collect();
        out.push_str(&join(&entries));
        out.push('\n');
    }
    out
}
