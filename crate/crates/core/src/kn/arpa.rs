//! ARPA-style text format for [`KnModel`].
//!
//! ```text
//! \data\
//! order 2
//! vocab_size 5
//! discount 1 0.5
//! discount 2 0.6
//! ngram 1=5
//! ngram 2=5
//!
//! \1-grams:
//! -0.6989700043360187	4	-0.5228787452803376
//! ...
//! \2-grams:
//! -0.11918640771920865	3 4
//! ...
//! \end\
//! ```
//!
//! Each n-gram line is `log10 prob <TAB> space-separated ids <TAB> log10 backoff`;
//! the backoff field is omitted when it is zero. A probability of `-inf` marks an
//! entry that only exists to carry a backoff weight (a context such as `<s> <s>`
//! that is never itself predicted). Ids index the author's vocabulary file.
//! Numbers are written in shortest round-trip form, so reloading is exact.
//! Every id in `0..vocab_size` must have a unigram line.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::lines::LineReader;

use super::model::{KnModel, NgramEntry};

impl KnModel {
    pub fn write_arpa<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "\\data\\")?;
        writeln!(w, "order {}", self.order())?;
        writeln!(w, "vocab_size {}", self.vocab_size())?;
        for (k, d) in self.discounts().iter().enumerate() {
            writeln!(w, "discount {} {}", k + 1, d)?;
        }
        for k in 1..=self.order() {
            writeln!(w, "ngram {}={}", k, self.entries(k).len())?;
        }
        for k in 1..=self.order() {
            writeln!(w)?;
            writeln!(w, "\\{k}-grams:")?;
            let mut entries: Vec<_> = self.entries(k).iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            for (gram, e) in entries {
                let ids: Vec<String> = gram.iter().map(u32::to_string).collect();
                if e.log10_bow == 0.0 {
                    writeln!(w, "{}\t{}", e.log10_prob, ids.join(" "))?;
                } else {
                    writeln!(w, "{}\t{}\t{}", e.log10_prob, ids.join(" "), e.log10_bow)?;
                }
            }
        }
        writeln!(w, "\\end\\")
    }

    pub fn save_arpa(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(f);
        self.write_arpa(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }

    pub fn load_arpa(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_arpa(BufReader::new(f), path)
    }

    pub fn read_arpa<R: BufRead>(reader: R, path: &Path) -> Result<Self> {
        let mut r = LineReader::new(reader, path);
        let header = r.expect_line("\\data\\")?;
        if header != "\\data\\" {
            return Err(r.error(format!("expected \\data\\, found {header:?}")));
        }
        let order: usize = header_value(&mut r, "order")?;
        if order < 1 {
            return Err(r.error("order must be >= 1"));
        }
        let vocab_size: usize = header_value(&mut r, "vocab_size")?;
        if vocab_size < 1 {
            return Err(r.error("vocab_size must be >= 1"));
        }
        let mut discounts = Vec::with_capacity(order);
        for k in 1..=order {
            let line = r.expect_line("discount line")?;
            let d = line
                .strip_prefix(&format!("discount {k} "))
                .and_then(|v| v.parse::<f64>().ok())
                .filter(|d| (0.0..1.0).contains(d))
                .ok_or_else(|| r.error(format!("expected `discount {k} <value in [0,1)>`, found {line:?}")))?;
            discounts.push(d);
        }
        let mut sizes = Vec::with_capacity(order);
        for k in 1..=order {
            let line = r.expect_line("ngram count line")?;
            let n = line
                .strip_prefix(&format!("ngram {k}="))
                .and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| r.error(format!("expected `ngram {k}=<count>`, found {line:?}")))?;
            sizes.push(n);
        }

        let mut grams: Vec<HashMap<Vec<u32>, NgramEntry>> = vec![HashMap::new(); order];
        for k in 1..=order {
            let blank = r.expect_line("blank line")?;
            if !blank.is_empty() {
                return Err(r.error(format!("expected blank line before \\{k}-grams:")));
            }
            let section = r.expect_line("section header")?;
            if section != format!("\\{k}-grams:") {
                return Err(r.error(format!("expected \\{k}-grams:, found {section:?}")));
            }
            for _ in 0..sizes[k - 1] {
                let line = r.expect_line(&format!("{k}-gram entry"))?;
                let (gram, entry) = parse_entry(&line, k, vocab_size).map_err(|m| r.error(m))?;
                if grams[k - 1].insert(gram, entry).is_some() {
                    return Err(r.error("duplicate n-gram"));
                }
            }
        }
        let end = r.expect_line("\\end\\")?;
        if end != "\\end\\" {
            return Err(r.error(format!("expected \\end\\, found {end:?}")));
        }
        if let Some(w) = (0..vocab_size as u32).find(|w| {
            grams[0]
                .get(&vec![*w])
                .is_none_or(|e| !e.log10_prob.is_finite())
        }) {
            return Err(r.error(format!("unigram for id {w} missing; every id needs a probability")));
        }
        Ok(KnModel::from_parts(order, vocab_size, discounts, grams))
    }
}

fn header_value<R: BufRead, T: std::str::FromStr>(r: &mut LineReader<R>, key: &str) -> Result<T> {
    let line = r.expect_line(key)?;
    line.strip_prefix(key)
        .and_then(|v| v.strip_prefix(' '))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| r.error(format!("expected `{key} <value>`, found {line:?}")))
}

fn parse_entry(line: &str, k: usize, vocab_size: usize) -> std::result::Result<(Vec<u32>, NgramEntry), String> {
    let mut fields = line.split('\t');
    let prob = fields.next().unwrap_or_default();
    let log10_prob: f64 = prob.parse().map_err(|_| format!("bad probability {prob:?}"))?;
    if log10_prob.is_nan() || log10_prob > 0.0 {
        return Err(format!("log10 probability {log10_prob} out of range"));
    }
    let ids = fields.next().ok_or("missing n-gram field")?;
    let gram = ids
        .split(' ')
        .map(|t| match t.parse::<u32>() {
            Ok(id) if (id as usize) < vocab_size => Ok(id),
            _ => Err(format!("bad or out-of-range id {t:?}")),
        })
        .collect::<std::result::Result<Vec<u32>, String>>()?;
    if gram.len() != k {
        return Err(format!("expected {k} ids, found {}", gram.len()));
    }
    let log10_bow = match fields.next() {
        None => 0.0,
        Some(b) => b
            .parse::<f64>()
            .ok()
            .filter(|b| b.is_finite())
            .ok_or_else(|| format!("bad backoff weight {b:?}"))?,
    };
    if fields.next().is_some() {
        return Err("too many fields".into());
    }
    Ok((gram, NgramEntry { log10_prob, log10_bow }))
}
