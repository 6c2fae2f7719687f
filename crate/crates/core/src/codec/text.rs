//! Line-oriented witness text.
//!
//! ```text
//! # comments and blank lines are ignored
//! block
//! rho 11** [1*]
//! round 0:0 1:1 | 0 1 | 10
//! ```
//!
//! The first line names the codec (`indep`, `block` or `php`). The `rho`
//! line holds `ρσ`: a restriction over `0 1 *`, followed for blocks by the
//! class tags in brackets, or for `php` by `n=<n>` and `x>y` pairs. Each
//! `round` line lists `β′` entries as `location:last`, then after `|` the
//! `π′` symbols (bits, or for `php` either `=` or a candidate index), then
//! for blocks the `γ′` bits of the round.

use std::fmt::Write as _;

use super::{beta_rounds, BetaEntry, PhpReply, WitnessBlock, WitnessIndep, WitnessPhp};
use crate::dist::block::{BlockClass, BlockOutcome};
use crate::dist::php::PartialInjection;
use crate::error::CodecError;
use crate::formula::Restriction;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    Indep(WitnessIndep),
    Block(WitnessBlock),
    Php(WitnessPhp),
}

fn bits(b: &[bool], sep: &str) -> String {
    b.iter().map(|&x| if x { "1" } else { "0" }).collect::<Vec<_>>().join(sep)
}

fn entries(es: &[BetaEntry]) -> String {
    es.iter()
        .map(|e| format!("{}:{}", e.location, e.last as u8))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_witness(w: &Witness) -> String {
    let mut out = String::new();
    match w {
        Witness::Indep(w) => {
            writeln!(out, "indep\nrho {}", w.rho_sigma).unwrap();
            let mut pos = 0;
            for round in beta_rounds(&w.beta) {
                let end = (pos + round.len()).min(w.pi.len());
                writeln!(out, "round {} | {}", entries(round), bits(&w.pi[pos.min(end)..end], " ")).unwrap();
                pos += round.len();
            }
        }
        Witness::Block(w) => {
            writeln!(out, "block\nrho {}", w.rho_sigma).unwrap();
            let mut pos = 0;
            let rounds = beta_rounds(&w.beta);
            for (i, round) in rounds.iter().enumerate() {
                let end = (pos + round.len()).min(w.pi.len());
                let gamma = w.gamma.get(i).map(|g| bits(g, "")).unwrap_or_default();
                writeln!(
                    out,
                    "round {} | {} | {}",
                    entries(round),
                    bits(&w.pi[pos.min(end)..end], " "),
                    gamma
                )
                .unwrap();
                pos += round.len();
            }
        }
        Witness::Php(w) => {
            let pairs: Vec<String> = w.rho_sigma.pairs().map(|(x, y)| format!("{}>{}", x.0, y.0)).collect();
            write!(out, "php\nrho n={}", w.rho_sigma.n()).unwrap();
            for p in pairs {
                write!(out, " {p}").unwrap();
            }
            out.push('\n');
            let empty = Vec::new();
            for (i, round) in beta_rounds(&w.beta).iter().enumerate() {
                let replies: Vec<String> = w
                    .pi
                    .get(i)
                    .unwrap_or(&empty)
                    .iter()
                    .map(|r| match r {
                        PhpReply::Match => "=".to_string(),
                        PhpReply::Other(k) => k.to_string(),
                    })
                    .collect();
                writeln!(out, "round {} | {}", entries(round), replies.join(" ")).unwrap();
            }
        }
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> CodecError {
    CodecError::Text {
        line,
        message: message.into(),
    }
}

fn parse_entry(tok: &str, line: usize) -> Result<BetaEntry, CodecError> {
    let (loc, last) = tok
        .split_once(':')
        .ok_or_else(|| err(line, format!("β′ entry {tok:?} is not location:last")))?;
    let location = loc.parse().map_err(|_| err(line, format!("bad location {loc:?}")))?;
    let last = match last {
        "0" => false,
        "1" => true,
        _ => return Err(err(line, format!("bad last bit {last:?}"))),
    };
    Ok(BetaEntry { location, last })
}

fn parse_bit(tok: &str, line: usize) -> Result<bool, CodecError> {
    match tok {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(err(line, format!("expected a bit, got {tok:?}"))),
    }
}

fn parse_tags(s: &str, line: usize) -> Result<Vec<BlockClass>, CodecError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err(line, "block tags must be written [..]"))?;
    inner
        .chars()
        .map(|c| match c {
            '0' => Ok(BlockClass::ZeroBlock),
            '*' => Ok(BlockClass::StarBlock),
            '1' => Ok(BlockClass::AllOnes),
            _ => Err(err(line, format!("bad block tag {c:?}"))),
        })
        .collect()
}

fn parse_injection(words: &[&str], line: usize) -> Result<PartialInjection, CodecError> {
    let n = words
        .first()
        .and_then(|w| w.strip_prefix("n="))
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or_else(|| err(line, "expected n=<holes>"))?;
    let mut pairs = Vec::new();
    for w in &words[1..] {
        let (x, y) = w
            .split_once('>')
            .and_then(|(x, y)| Some((x.parse().ok()?, y.parse().ok()?)))
            .ok_or_else(|| err(line, format!("bad pair {w:?}")))?;
        pairs.push((x, y));
    }
    PartialInjection::from_pairs(n, &pairs).map_err(|e| err(line, e.to_string()))
}

pub fn read_witness(text: &str) -> Result<Witness, CodecError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (kline, kind) = lines.next().ok_or_else(|| err(1, "empty witness"))?;
    let (rline, rho) = lines.next().ok_or_else(|| err(kline, "missing rho line"))?;
    let rho_words: Vec<&str> = rho
        .strip_prefix("rho")
        .ok_or_else(|| err(rline, "expected rho line"))?
        .split_whitespace()
        .collect();
    let mut beta = Vec::new();
    let mut bit_pi = Vec::new();
    let mut php_pi = Vec::new();
    let mut gamma = Vec::new();
    for (line, l) in lines {
        let body = l
            .strip_prefix("round")
            .ok_or_else(|| err(line, "expected a round line"))?;
        let parts: Vec<&str> = body.split('|').map(str::trim).collect();
        let want = if kind == "block" { 3 } else { 2 };
        if parts.len() != want {
            return Err(err(line, format!("round line needs {want} fields separated by |")));
        }
        for tok in parts[0].split_whitespace() {
            beta.push(parse_entry(tok, line)?);
        }
        if kind == "php" {
            let mut replies = Vec::new();
            for tok in parts[1].split_whitespace() {
                replies.push(if tok == "=" {
                    PhpReply::Match
                } else {
                    PhpReply::Other(tok.parse().map_err(|_| err(line, format!("bad reply {tok:?}")))?)
                });
            }
            php_pi.push(replies);
        } else {
            for tok in parts[1].split_whitespace() {
                bit_pi.push(parse_bit(tok, line)?);
            }
        }
        if kind == "block" {
            let g = parts[2]
                .chars()
                .map(|c| parse_bit(&c.to_string(), line))
                .collect::<Result<Vec<_>, _>>()?;
            gamma.push(g);
        }
    }
    match kind {
        "indep" => {
            let [r] = rho_words[..] else {
                return Err(err(rline, "expected one restriction"));
            };
            let rho_sigma: Restriction = r.parse().map_err(|e: crate::error::FormulaError| err(rline, e.to_string()))?;
            Ok(Witness::Indep(WitnessIndep {
                rho_sigma,
                beta,
                pi: bit_pi,
            }))
        }
        "block" => {
            let [r, tags] = rho_words[..] else {
                return Err(err(rline, "expected a restriction and [tags]"));
            };
            let rho: Restriction = r.parse().map_err(|e: crate::error::FormulaError| err(rline, e.to_string()))?;
            let classes = parse_tags(tags, rline)?;
            Ok(Witness::Block(WitnessBlock {
                rho_sigma: BlockOutcome { rho, classes },
                beta,
                pi: bit_pi,
                gamma,
            }))
        }
        "php" => Ok(Witness::Php(WitnessPhp {
            rho_sigma: parse_injection(&rho_words, rline)?,
            beta,
            pi: php_pi,
        })),
        other => Err(err(kline, format!("unknown witness kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{encode_block, encode_indep, encode_php, IndexLimit};
    use crate::formula::{BlockStructure, Dnf, Hole, Literal, PhpInstance, Pigeon};

    #[test]
    fn indep_roundtrip() {
        let f = Dnf::from_literals(3, 2, [vec![Literal::pos(0), Literal::neg(1)], vec![Literal::pos(2)]]).unwrap();
        let w = Witness::Indep(encode_indep(&f, &"***".parse().unwrap(), 3).unwrap());
        let text = write_witness(&w);
        assert_eq!(read_witness(&text).unwrap(), w);
        assert!(text.starts_with("indep\nrho "));
    }

    #[test]
    fn block_roundtrip_and_layout() {
        let blocks = BlockStructure::consecutive(&[2]).unwrap();
        let f = Dnf::from_literals(2, 2, [vec![Literal::pos(0), Literal::pos(1)]]).unwrap();
        let o = BlockOutcome::classify("**".parse().unwrap(), &blocks).unwrap();
        let w = Witness::Block(encode_block(&f, &blocks, &o, 1).unwrap());
        let text = write_witness(&w);
        assert_eq!(text, "block\nrho 11 [1]\nround 0:1 | 0 | 11\n");
        assert_eq!(read_witness(&text).unwrap(), w);
    }

    #[test]
    fn php_roundtrip() {
        let inst = PhpInstance::new(2);
        let lit = Literal {
            var: inst.var(Pigeon(0), Hole(0)),
            positive: true,
        };
        let f = Dnf::from_literals(inst.num_vars(), 1, [vec![lit]]).unwrap();
        let w = Witness::Php(encode_php(&f, &PartialInjection::empty(2), 2, IndexLimit::Unbounded).unwrap());
        let text = write_witness(&w);
        assert_eq!(read_witness(&text).unwrap(), w);
    }

    #[test]
    fn malformed_text() {
        assert!(read_witness("").is_err());
        assert!(read_witness("indep\n").is_err());
        assert!(read_witness("indep\nrho 1*\nround 0 | 0\n").is_err());
        assert!(read_witness("indep\nrho 1*\nround 0:2 | 0\n").is_err());
        assert!(read_witness("block\nrho 11 [1]\nround 0:1 | 0\n").is_err());
        assert!(read_witness("php\nrho n=2 0>0 1>0\nround 0:1 | =\n").is_err());
        assert!(read_witness("nope\nrho 1\n").is_err());
        let e = read_witness("indep\n# c\nrho 1*\nround 0:1 | x\n").unwrap_err();
        assert_eq!(
            e,
            CodecError::Text {
                line: 4,
                message: "expected a bit, got \"x\"".into()
            }
        );
    }
}
