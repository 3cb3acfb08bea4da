//! Line-oriented oracle spec files.
//!
//! ```text
//! # seed 17
//! n 2
//! L 1
//! variant U2
//! perm 0 1 2 3
//! ```
//!
//! Keys appear in the fixed order `n`, `L`, `variant`, `perm`, `mask`. `L` is
//! required for `U2` and optional otherwise; `mask` (one `+` or `-` per input
//! index) is only allowed for `GENERAL`. Lines starting with `#` are comments
//! and may appear anywhere; a `# seed <u64>` comment records provenance and
//! survives a round trip. Blank lines are ignored. The text must end with a
//! newline.

use std::fmt::Write as _;

use crate::amp::{MAX_HALF_POWER, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::oracle::{
    bijection_violation, DiagonalSignMask, OracleKind, Permutation, SignedPermutationOracle,
};

/// The parsed, validated contents of an oracle spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSpecDoc {
    pub n: usize,
    pub designated: Option<usize>,
    pub kind: OracleKind,
    pub images: Vec<usize>,
    pub mask: Option<Vec<i8>>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    N,
    L,
    Variant,
    Perm,
    Mask,
}

impl Key {
    fn parse(word: &str) -> Option<Key> {
        Some(match word {
            "n" => Key::N,
            "L" => Key::L,
            "variant" => Key::Variant,
            "perm" => Key::Perm,
            "mask" => Key::Mask,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Key::N => "n",
            Key::L => "L",
            Key::Variant => "variant",
            Key::Perm => "perm",
            Key::Mask => "mask",
        }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((byte, col + 1)),
            (true, Some((b, c))) => {
                out.push(Token {
                    text: &line[b..byte],
                    column: c,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((b, c)) = start {
        out.push(Token {
            text: &line[b..],
            column: c,
        });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn invariant(line: usize, message: impl Into<String>) -> Error {
    Error::Invariant {
        line,
        message: message.into(),
    }
}

fn parse_uint(line: usize, tok: &Token<'_>) -> Result<usize> {
    tok.text.parse().map_err(|_| {
        syntax(
            line,
            tok.column,
            format!("expected an integer, found `{}`", tok.text),
        )
    })
}

fn single_value<'a, 'b>(
    line: usize,
    key: Key,
    rest: &'b [Token<'a>],
    key_end: usize,
) -> Result<&'b Token<'a>> {
    match rest {
        [one] => Ok(one),
        [] => Err(syntax(
            line,
            key_end,
            format!("`{}` needs a value", key.name()),
        )),
        [_, extra, ..] => Err(syntax(
            line,
            extra.column,
            format!("`{}` takes a single value", key.name()),
        )),
    }
}

impl OracleSpecDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let line_count = text.lines().count();
        if !text.ends_with('\n') {
            let last = text.lines().last().unwrap_or("");
            return Err(syntax(
                line_count.max(1),
                last.chars().count() + 1,
                "missing trailing newline",
            ));
        }

        let mut n = None;
        let mut designated = None;
        let mut kind = None;
        let mut images = None;
        let mut mask = None;
        let mut seed = None;
        let mut last_key: Option<Key> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let toks = tokens(raw);
            let Some(head) = toks.first() else { continue };
            if head.text.starts_with('#') {
                if let [_, word, value] = &toks[..] {
                    if head.text == "#" && word.text == "seed" {
                        seed = value.text.parse().ok().or(seed);
                    }
                }
                continue;
            }
            let key = Key::parse(head.text)
                .ok_or_else(|| syntax(line, head.column, format!("unknown key `{}`", head.text)))?;
            if let Some(prev) = last_key {
                if key <= prev {
                    return Err(syntax(
                        line,
                        head.column,
                        format!("`{}` cannot follow `{}`", key.name(), prev.name()),
                    ));
                }
            } else if key != Key::N {
                return Err(syntax(line, head.column, "the first key must be `n`"));
            }
            last_key = Some(key);
            let rest = &toks[1..];
            let key_end = head.column + head.text.chars().count();

            match key {
                Key::N => {
                    let tok = single_value(line, key, rest, key_end)?;
                    let value = parse_uint(line, tok)?;
                    if value == 0 {
                        return Err(invariant(line, "n must be at least 1"));
                    }
                    if value + 1 > MAX_HALF_POWER as usize {
                        return Err(Error::resource(format!(
                            "line {line}: n = {value} is too large for 64-bit coefficients"
                        )));
                    }
                    if value > MAX_QUBITS {
                        return Err(Error::resource(format!(
                            "line {line}: n = {value} exceeds the {MAX_QUBITS}-qubit state limit"
                        )));
                    }
                    n = Some(value);
                }
                Key::L => {
                    let tok = single_value(line, key, rest, key_end)?;
                    let value = parse_uint(line, tok)?;
                    let width = n.unwrap_or(0);
                    if !(1..=width).contains(&value) {
                        return Err(invariant(line, format!("L = {value} outside 1..={width}")));
                    }
                    designated = Some(value);
                }
                Key::Variant => {
                    let tok = single_value(line, key, rest, key_end)?;
                    let k: OracleKind = tok.text.parse().map_err(|_| {
                        syntax(
                            line,
                            tok.column,
                            format!(
                                "unknown variant `{}` (expected U1, U2 or GENERAL)",
                                tok.text
                            ),
                        )
                    })?;
                    if k == OracleKind::U2 && designated.is_none() {
                        return Err(syntax(line, tok.column, "variant U2 requires an `L` line"));
                    }
                    kind = Some(k);
                }
                Key::Perm => {
                    if kind.is_none() {
                        return Err(syntax(line, head.column, "`perm` must follow `variant`"));
                    }
                    let values = rest
                        .iter()
                        .map(|t| parse_uint(line, t))
                        .collect::<Result<Vec<_>>>()?;
                    let dim = 1usize << n.unwrap_or(0);
                    if let Some(why) = bijection_violation(dim, &values) {
                        return Err(invariant(line, why));
                    }
                    images = Some(values);
                }
                Key::Mask => {
                    if kind != Some(OracleKind::General) {
                        return Err(syntax(
                            line,
                            head.column,
                            "`mask` is only allowed for GENERAL",
                        ));
                    }
                    if images.is_none() {
                        return Err(syntax(line, head.column, "`mask` must follow `perm`"));
                    }
                    let signs = rest
                        .iter()
                        .map(|t| match t.text {
                            "+" => Ok(1),
                            "-" => Ok(-1),
                            other => Err(syntax(
                                line,
                                t.column,
                                format!("mask entries are `+` or `-`, found `{other}`"),
                            )),
                        })
                        .collect::<Result<Vec<i8>>>()?;
                    let dim = 1usize << n.unwrap_or(0);
                    if signs.len() != dim {
                        return Err(invariant(
                            line,
                            format!("expected {dim} mask entries, got {}", signs.len()),
                        ));
                    }
                    mask = Some(signs);
                }
            }
        }

        let eof = line_count + 1;
        let missing = |what: &str| syntax(eof, 1, format!("missing `{what}` line"));
        let n = n.ok_or_else(|| missing("n"))?;
        let kind = kind.ok_or_else(|| missing("variant"))?;
        let images = images.ok_or_else(|| missing("perm"))?;
        Ok(OracleSpecDoc {
            n,
            designated,
            kind,
            images,
            mask,
            seed,
        })
    }

    /// Canonical text: keys in order, single spaces, only the seed comment kept.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "# seed {seed}");
        }
        let _ = writeln!(out, "n {}", self.n);
        if let Some(l) = self.designated {
            let _ = writeln!(out, "L {l}");
        }
        let _ = writeln!(out, "variant {}", self.kind);
        out.push_str("perm");
        for k in &self.images {
            let _ = write!(out, " {k}");
        }
        out.push('\n');
        if let Some(mask) = &self.mask {
            out.push_str("mask");
            for s in mask {
                out.push_str(if *s > 0 { " +" } else { " -" });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_oracle(o: &SignedPermutationOracle, seed: Option<u64>) -> Self {
        let mask = (o.kind() == OracleKind::General && !o.mask().is_all_plus())
            .then(|| o.mask().signs().to_vec());
        OracleSpecDoc {
            n: o.num_qubits(),
            designated: o.designated(),
            kind: o.kind(),
            images: o.perm().images().to_vec(),
            mask,
            seed,
        }
    }

    pub fn to_oracle(&self) -> Result<SignedPermutationOracle> {
        let perm = Permutation::new(self.n, self.images.clone())?;
        let oracle = match self.kind {
            OracleKind::U1 => SignedPermutationOracle::make_u1(perm),
            OracleKind::U2 => {
                let l = self
                    .designated
                    .ok_or_else(|| Error::domain("variant U2 requires L"))?;
                SignedPermutationOracle::make_u2(perm, l)?
            }
            OracleKind::General => {
                let mask = match &self.mask {
                    Some(signs) => DiagonalSignMask::new(self.n, signs.clone())?,
                    None => DiagonalSignMask::all_plus(self.n)?,
                };
                SignedPermutationOracle::general(perm, mask)?
            }
        };
        match self.designated {
            Some(l) => oracle.with_designated(l),
            None => Ok(oracle),
        }
    }
}

/// Parses and validates an oracle spec into an oracle.
pub fn parse_oracle_spec(text: &str) -> Result<SignedPermutationOracle> {
    OracleSpecDoc::parse(text)?.to_oracle()
}

/// Canonical spec text for an oracle.
pub fn serialize_oracle(o: &SignedPermutationOracle) -> String {
    OracleSpecDoc::from_oracle(o, None).serialize()
}
