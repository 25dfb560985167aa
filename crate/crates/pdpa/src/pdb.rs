//! Fixed-column PDB coordinate records.

use std::fmt::Write as _;

use pdpa_core::geometry::Vec3;
use pdpa_core::structure::{Atom, ProteinStructure, Residue};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct PdbError {
    /// 1-based; 0 when the error concerns the file as a whole.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> PdbError {
    PdbError { line, message: message.into() }
}

fn field(line: &str, from: usize, to: usize) -> &str {
    let end = to.min(line.len());
    if from >= end {
        ""
    } else {
        line.get(from..end).unwrap_or("")
    }
}

fn coord(line: &str, from: usize, to: usize, lineno: usize) -> Result<f64, PdbError> {
    let s = field(line, from, to).trim();
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| err(lineno, format!("bad coordinate '{s}' in columns {}-{}", from + 1, to)))
}

/// Reads ATOM records of the first model. `chain` selects a chain; by default
/// the first chain seen is used. Alternate locations other than the first are
/// ignored, residues without N, CA and C are dropped and chain breaks are
/// flagged from the C-N distance.
pub fn parse_pdb(text: &str, id: &str, chain: Option<char>) -> Result<ProteinStructure, PdbError> {
    let mut chosen = chain;
    let mut residues: Vec<Residue> = Vec::new();
    let mut key: Option<i32> = None;
    let mut seen_model = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let record = field(line, 0, 6).trim_end();
        match record {
            "MODEL" => {
                if seen_model {
                    break;
                }
                seen_model = true;
                continue;
            }
            "ENDMDL" => break,
            "ATOM" => {}
            _ => continue,
        }
        if line.len() < 54 {
            return Err(err(lineno, format!("ATOM record too short ({} columns)", line.len())));
        }
        let alt = field(line, 16, 17).chars().next().unwrap_or(' ');
        if alt != ' ' && alt != 'A' && alt != '1' {
            continue;
        }
        let ch = field(line, 21, 22).chars().next().unwrap_or(' ');
        match chosen {
            None => chosen = Some(ch),
            Some(c) if c != ch => continue,
            _ => {}
        }
        let name = field(line, 12, 16).trim().to_string();
        if name.is_empty() {
            return Err(err(lineno, "missing atom name"));
        }
        let res_name = field(line, 17, 20).trim().to_string();
        let seq_text = field(line, 22, 26).trim();
        let seq: i32 = seq_text.parse().map_err(|_| err(lineno, format!("bad residue number '{seq_text}'")))?;
        let icode = field(line, 26, 27).chars().next().unwrap_or(' ');
        let pos = Vec3::new(
            coord(line, 30, 38, lineno)?,
            coord(line, 38, 46, lineno)?,
            coord(line, 46, 54, lineno)?,
        );
        if icode != ' ' {
            // Insertion residues would collide with the numbering.
            continue;
        }
        if key != Some(seq) {
            key = Some(seq);
            residues.push(Residue::new(seq, res_name));
        }
        let r = residues.last_mut().expect("residue started");
        if r.atom(&name).is_none() {
            r.atoms.push(Atom::new(name, pos));
        }
    }
    residues.retain(|r| ["N", "CA", "C"].iter().all(|a| r.atom(a).is_some()));
    if residues.is_empty() {
        return Err(err(0, "no residues with complete N, CA, C backbone"));
    }
    for w in 1..residues.len() {
        if residues[w].seq <= residues[w - 1].seq {
            return Err(err(0, format!("residue numbers not increasing at {}", residues[w].seq)));
        }
    }
    let mut s = ProteinStructure { id: id.to_string(), chain: chosen.unwrap_or('A'), residues };
    s.flag_chain_breaks();
    s.validate().map_err(|e| err(0, e.to_string()))?;
    Ok(s)
}

/// ATOM records for every atom, numbered serially, followed by TER and END.
pub fn write_pdb(s: &ProteinStructure) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "REMARK   1 {}", s.id);
    let mut serial = 1;
    for r in &s.residues {
        for a in &r.atoms {
            let name = if a.name.len() < 4 { format!(" {:<3}", a.name) } else { a.name.clone() };
            let element = a.name.chars().find(|c| c.is_ascii_alphabetic()).unwrap_or('X');
            let _ = writeln!(
                out,
                "ATOM  {:>5} {:<4} {:>3} {}{:>4}    {:>8.3}{:>8.3}{:>8.3}{:>6.2}{:>6.2}          {:>2}",
                serial % 100_000,
                name,
                r.name,
                s.chain,
                r.seq,
                a.position.x,
                a.position.y,
                a.position.z,
                1.0,
                0.0,
                element
            );
            serial += 1;
        }
    }
    let _ = writeln!(out, "TER");
    let _ = writeln!(out, "END");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use pdpa_core::structure::synthetic;

    #[test]
    fn write_then_parse_round_trips_to_file_precision() {
        let s = synthetic::alpha_protein();
        let back = parse_pdb(&write_pdb(&s), &s.id, None).unwrap();
        assert_eq!(back.len(), s.len());
        for (a, b) in s.residues.iter().zip(&back.residues) {
            assert_eq!(a.seq, b.seq);
            assert_eq!(a.name, b.name);
            for atom in &a.atoms {
                let p = b.atom(&atom.name).unwrap();
                assert!((p - atom.position).norm() < 1e-3);
            }
        }
        assert!(pdpa_core::bb_rmsd(&s, &back).unwrap() < 1e-3);
    }

    const TWO_MODELS: &str = "\
MODEL        1
ATOM      1  N   ALA A   1      11.104   6.134  -6.504  1.00  0.00           N
ATOM      2  CA  ALA A   1      11.639   6.071  -5.147  1.00  0.00           C
ATOM      3  C   ALA A   1      13.140   5.860  -5.180  1.00  0.00           C
ATOM      4  N   GLY A   2      13.700   6.100  -4.000  1.00  0.00           N
ATOM      5  CA  GLY A   2      15.100   6.000  -3.800  1.00  0.00           C
ATOM      6  C   GLY A   2      15.600   7.300  -3.200  1.00  0.00           C
ENDMDL
MODEL        2
ATOM      1  N   ALA A   1      99.104   6.134  -6.504  1.00  0.00           N
ENDMDL
";

    #[test]
    fn reads_first_model_only() {
        let s = parse_pdb(TWO_MODELS, "t", None).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.residues[0].atom("N").unwrap().x - 11.104).abs() < 1e-12);
        assert!(!s.residues[1].break_before);
    }

    #[test]
    fn reports_line_of_bad_coordinate() {
        let bad = TWO_MODELS.replace("13.140", "13.1x0");
        let e = parse_pdb(&bad, "t", None).unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn drops_incomplete_residues_and_flags_breaks() {
        let text = "\
ATOM      1  N   ALA A   1      11.104   6.134  -6.504  1.00  0.00           N
ATOM      2  CA  ALA A   1      11.639   6.071  -5.147  1.00  0.00           C
ATOM      3  C   ALA A   1      13.140   5.860  -5.180  1.00  0.00           C
ATOM      4  N   GLY A   2      13.700   6.100  -4.000  1.00  0.00           N
ATOM      5  N   SER A   5      23.700   6.100  -4.000  1.00  0.00           N
ATOM      6  CA  SER A   5      25.100   6.000  -3.800  1.00  0.00           C
ATOM      7  C   SER A   5      25.600   7.300  -3.200  1.00  0.00           C
";
        let s = parse_pdb(text, "t", None).unwrap();
        assert_eq!(s.residues.iter().map(|r| r.seq).collect::<Vec<_>>(), vec![1, 5]);
        assert!(s.residues[1].break_before);
    }

    #[test]
    fn chain_selection_and_empty_input() {
        let text = TWO_MODELS.replace(" A   2", " B   2");
        let b = parse_pdb(&text, "t", Some('B')).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.chain, 'B');
        assert!(parse_pdb("HEADER nothing\n", "t", None).is_err());
    }
}
