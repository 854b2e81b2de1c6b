//! Text codebook format.
//!
//! ```text
//! # delayed-erasure codebook v1
//! n=8
//! M=2
//! K=2
//! q=0.25 0.5
//! seed=42
//! p=0.25
//! epsilon=0.25
//! list_threshold=5
//! disambig_threshold=1
//! ---
//! 10110011 1,3,5 2,4,6,7,8
//! 00010110 - 1,2,3,4,5,6,7,8
//! ```
//!
//! After the `---` line there is one line per message, in message order: the
//! base codeword (position 1 first) followed by the `K` index lists
//! `S(m,1) .. S(m,K)`, each comma separated, `-` for an empty set. Floats are
//! written in shortest round-trip form so save/load is bit-exact.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{CodeParams, Codebook, CodebookError, Message};
use crate::word::{IndexSet, Word};

const MAGIC: &str = "# delayed-erasure codebook v1";

pub fn write_codebook<W: Write>(cb: &Codebook, mut out: W) -> Result<(), CodebookError> {
    let params = cb.params();
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "n={}", params.n())?;
    writeln!(out, "M={}", params.num_messages())?;
    writeln!(out, "K={}", params.levels())?;
    let qs: Vec<String> = params.noise_levels().iter().map(|q| q.to_string()).collect();
    writeln!(out, "q={}", qs.join(" "))?;
    writeln!(out, "seed={}", cb.seed())?;
    writeln!(out, "p={}", params.p())?;
    writeln!(out, "epsilon={}", params.epsilon())?;
    writeln!(out, "list_threshold={}", params.list_threshold())?;
    writeln!(out, "disambig_threshold={}", params.disambig_threshold())?;
    writeln!(out, "---")?;
    for m in cb.messages() {
        write!(out, "{}", cb.word(m))?;
        for set in cb.partitions(m) {
            if set.is_empty() {
                write!(out, " -")?;
            } else {
                let items: Vec<String> = set.iter().map(|i| i.to_string()).collect();
                write!(out, " {}", items.join(","))?;
            }
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_codebook(cb: &Codebook, path: impl AsRef<Path>) -> Result<(), CodebookError> {
    write_codebook(cb, BufWriter::new(File::create(path)?))
}

pub fn load_codebook(path: impl AsRef<Path>) -> Result<Codebook, CodebookError> {
    read_codebook(BufReader::new(File::open(path)?))
}

fn parse_err(line: usize, reason: impl Into<String>) -> CodebookError {
    CodebookError::Parse { line, reason: reason.into() }
}

fn parse_field<T: std::str::FromStr>(
    header: &HashMap<String, (usize, String)>,
    key: &str,
) -> Result<T, CodebookError> {
    let (line, raw) = header.get(key).ok_or_else(|| parse_err(0, format!("missing header key `{key}`")))?;
    raw.trim()
        .parse()
        .map_err(|_| parse_err(*line, format!("bad value for `{key}`: {raw:?}")))
}

pub fn read_codebook<R: BufRead>(input: R) -> Result<Codebook, CodebookError> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, Ok(first))) if first.trim_end() == MAGIC => {}
        Some((_, Err(e))) => return Err(e.into()),
        _ => return Err(parse_err(1, "missing codebook header line")),
    }

    let mut header = HashMap::new();
    loop {
        let Some((no, line)) = lines.next() else {
            return Err(parse_err(0, "missing `---` separator"));
        };
        let line = line?;
        let line = line.trim();
        if line == "---" {
            break;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(no, format!("expected key=value, got {line:?}")))?;
        header.insert(key.trim().to_string(), (no, value.to_string()));
    }

    let n: usize = parse_field(&header, "n")?;
    let m_count: usize = parse_field(&header, "M")?;
    let k: usize = parse_field(&header, "K")?;
    let seed: u64 = parse_field(&header, "seed")?;
    let p: f64 = parse_field(&header, "p")?;
    let epsilon: f64 = parse_field(&header, "epsilon")?;
    let list_threshold: usize = parse_field(&header, "list_threshold")?;
    let disambig_threshold: usize = parse_field(&header, "disambig_threshold")?;
    let (q_line, q_raw) = header.get("q").ok_or_else(|| parse_err(0, "missing header key `q`"))?;
    let noise_levels = q_raw
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| parse_err(*q_line, format!("bad noise level {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if noise_levels.len() != k {
        return Err(parse_err(*q_line, format!("K = {k} but {} noise levels given", noise_levels.len())));
    }
    let params = CodeParams::custom(n, p, epsilon, m_count, noise_levels, list_threshold, disambig_threshold)?;

    let mut words = Vec::with_capacity(m_count);
    let mut partitions = Vec::with_capacity(m_count);
    for (no, line) in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word: Word = fields
            .next()
            .expect("non-empty line")
            .parse()
            .map_err(|e| parse_err(no, format!("{e}")))?;
        if word.len() != n {
            return Err(CodebookError::InvalidMessage {
                message: words.len() + 1,
                reason: format!("word length {} != n = {n}", word.len()),
            });
        }
        let sets = fields
            .map(|f| {
                if f == "-" {
                    return Ok(IndexSet::empty());
                }
                let indices = f
                    .split(',')
                    .map(|x| x.parse::<usize>().map_err(|_| parse_err(no, format!("bad index {x:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                IndexSet::within(indices, n).map_err(|e| parse_err(no, format!("{e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        words.push(word);
        partitions.push(sets);
    }
    if words.len() != m_count {
        return Err(parse_err(0, format!("header says M = {m_count} but {} codeword lines follow", words.len())));
    }
    Codebook::from_parts(params, seed, words, partitions)
}

impl Codebook {
    /// Index of the message whose base codeword is `word`, if any.
    pub fn find(&self, word: &Word) -> Option<Message> {
        self.messages().find(|&m| self.codeword(m) == word.bits())
    }
}
