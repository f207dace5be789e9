//! Reference computations for integration tests, written without the library.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_seq(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect()
}

/// Copies `text` applying a substitution, insertion or deletion at each
/// position with probability `rate`.
pub fn mutate(rng: &mut ChaCha8Rng, text: &[u8], rate: f64) -> Vec<u8> {
    let mut out = Vec::with_capacity(text.len() + 8);
    for &c in text {
        if rng.gen::<f64>() >= rate {
            out.push(c);
            continue;
        }
        match rng.gen_range(0..3) {
            0 => out.push(
                b"ACGT"[(b"ACGT".iter().position(|&b| b == c).unwrap() + rng.gen_range(1..4)) % 4],
            ),
            1 => {
                out.push(b"ACGT"[rng.gen_range(0..4)]);
                out.push(c);
            }
            _ => {}
        }
    }
    if out.is_empty() {
        out.push(b'A');
    }
    out
}

/// Full-matrix suffix distances: `t[i][j] = ed(text[i..], pattern[j..])`.
pub fn suffix_distances(text: &[u8], pattern: &[u8]) -> Vec<Vec<usize>> {
    let (n, m) = (text.len(), pattern.len());
    let mut t = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            t[i][j] = if i == n {
                m - j
            } else if j == m {
                n - i
            } else {
                let diag = t[i + 1][j + 1] + usize::from(text[i] != pattern[j]);
                diag.min(t[i + 1][j] + 1).min(t[i][j + 1] + 1)
            };
        }
    }
    t
}

/// Edit distance with one rolling row.
pub fn edit_distance(a: &[u8], b: &[u8]) -> usize {
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &x) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = (diag + usize::from(x != y)).min(up + 1).min(row[j] + 1);
            diag = up;
        }
    }
    row[b.len()]
}

/// Walks a CIGAR string (`=`, `X`, `I`, `D`) over the pair. `I` consumes the
/// pattern, `D` the text. Returns the number of edits or a description of the
/// first inconsistency.
pub fn replay(cigar: &str, text: &[u8], pattern: &[u8]) -> Result<usize, String> {
    let (mut i, mut j, mut edits, mut num) = (0usize, 0usize, 0usize, 0usize);
    for ch in cigar.chars() {
        if let Some(d) = ch.to_digit(10) {
            num = num * 10 + d as usize;
            continue;
        }
        if num == 0 {
            return Err(format!("empty run before {ch:?}"));
        }
        for _ in 0..num {
            match ch {
                '=' | 'X' => {
                    let (Some(&t), Some(&p)) = (text.get(i), pattern.get(j)) else {
                        return Err(format!("{ch} past the end at ({i},{j})"));
                    };
                    if (ch == '=') != (t == p) {
                        return Err(format!(
                            "{ch} at ({i},{j}) but {} vs {}",
                            t as char, p as char
                        ));
                    }
                    edits += usize::from(ch == 'X');
                    i += 1;
                    j += 1;
                }
                'I' => {
                    if j >= pattern.len() {
                        return Err(format!("I past the pattern end at {j}"));
                    }
                    j += 1;
                    edits += 1;
                }
                'D' => {
                    if i >= text.len() {
                        return Err(format!("D past the text end at {i}"));
                    }
                    i += 1;
                    edits += 1;
                }
                _ => return Err(format!("unknown op {ch:?}")),
            }
        }
        num = 0;
    }
    if num != 0 || i != text.len() || j != pattern.len() {
        return Err(format!(
            "consumed ({i},{j}) of ({},{})",
            text.len(),
            pattern.len()
        ));
    }
    Ok(edits)
}
