//! The textual automaton format.
//!
//! Line-oriented UTF-8 with bit-exact rationals (`p/q` in lowest terms, or
//! an integer `p`). Lines starting with `#` are comments. The parser is
//! whitespace-insensitive within lines; the serializer emits one canonical
//! form that parses back to an equal automaton.
//!
//! ```text
//! npa
//! alphabet: a b
//! states: s0 s1
//! initial: s0
//! output: s0=1 s1=0
//! trans s0 a: { s0=1 } { s0=1/2 s1=1/2 }
//! trans s0 b: { s0=1 }
//! trans s1 a: { s1=1 }
//! trans s1 b: { s1=1 }
//! ```
//!
//! A `dpa` file has exactly one brace group per transition line; a `wfa`
//! file replaces `initial:`/`output:` with `in:`/`out:` weight vectors and
//! uses matrix lines `matrix a: row s0: 1/2 1/2 ; row s1: 0 1`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::automata::{Distribution, Dpa, GeneratorSet, Npa, ValidationError, Wfa};
use crate::rat::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Any of the three automaton kinds the format can hold.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Automaton {
    Npa(Npa),
    Dpa(Dpa),
    Wfa(Wfa),
}

impl Automaton {
    pub fn kind(&self) -> &'static str {
        match self {
            Automaton::Npa(_) => "npa",
            Automaton::Dpa(_) => "dpa",
            Automaton::Wfa(_) => "wfa",
        }
    }

    pub fn alphabet(&self) -> &[String] {
        match self {
            Automaton::Npa(a) => &a.alphabet,
            Automaton::Dpa(d) => &d.alphabet,
            Automaton::Wfa(w) => &w.alphabet,
        }
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Automaton::Npa(a) => a.fmt(f),
            Automaton::Dpa(d) => d.fmt(f),
            Automaton::Wfa(w) => w.fmt(f),
        }
    }
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

struct Cursor<'a, 'b> {
    line: &'b Line<'a>,
    pos: usize,
}

impl<'a, 'b> Cursor<'a, 'b> {
    fn new(line: &'b Line<'a>) -> Self {
        Cursor { line, pos: 0 }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line.number,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.line.tokens.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<&'a str, ParseError> {
        let tok = self
            .peek()
            .ok_or_else(|| self.err(format!("expected {what}")))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        let got = self.next(&format!("{tok:?}"))?;
        if got == tok {
            Ok(())
        } else {
            Err(self.err(format!("expected {tok:?}, found {got:?}")))
        }
    }

    fn rat(&mut self) -> Result<Rat, ParseError> {
        let tok = self.next("a rational")?;
        tok.parse().map_err(|e| self.err(format!("{e}")))
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(tok) => Err(self.err(format!("unexpected trailing {tok:?}"))),
        }
    }
}

/// Splits into token lines, dropping comments and blanks. Punctuation
/// (`{ } : ; =`) always separates, so `{s0=1}` and `{ s0 = 1 }` read alike.
fn tokenize(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                return None;
            }
            let mut spaced = String::with_capacity(raw.len() + 8);
            for c in trimmed.chars() {
                if matches!(c, '{' | '}' | ':' | ';' | '=') {
                    spaced.push(' ');
                    spaced.push(c);
                    spaced.push(' ');
                } else {
                    spaced.push(c);
                }
            }
            Some((i + 1, spaced))
        })
        .collect()
}

struct Header {
    alphabet: Vec<String>,
    states: Vec<String>,
}

impl Header {
    fn state(&self, cur: &Cursor, name: &str) -> Result<usize, ParseError> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| cur.err(format!("unknown state {name:?}")))
    }

    fn symbol(&self, cur: &Cursor, name: &str) -> Result<usize, ParseError> {
        self.alphabet
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| cur.err(format!("unknown symbol {name:?}")))
    }
}

fn parse_name_list(line: &Line, keyword: &str) -> Result<Vec<String>, ParseError> {
    let mut cur = Cursor::new(line);
    cur.expect(keyword)?;
    cur.expect(":")?;
    let mut names = Vec::new();
    while let Some(tok) = cur.peek() {
        names.push(tok.to_string());
        cur.pos += 1;
    }
    if names.is_empty() {
        return Err(cur.err(format!("empty {keyword} list")));
    }
    Ok(names)
}

fn parse_assignments(
    cur: &mut Cursor,
    header: &Header,
    until_brace: bool,
) -> Result<BTreeMap<usize, Rat>, ParseError> {
    let mut map = BTreeMap::new();
    loop {
        match cur.peek() {
            None if !until_brace => return Ok(map),
            None => return Err(cur.err("expected \"}\"")),
            Some("}") if until_brace => {
                cur.pos += 1;
                return Ok(map);
            }
            Some(name) => {
                cur.pos += 1;
                let s = header.state(cur, name)?;
                cur.expect("=")?;
                let value = cur.rat()?;
                if map.insert(s, value).is_some() {
                    return Err(cur.err(format!("state {name:?} assigned twice")));
                }
            }
        }
    }
}

fn distribution_from_map(
    cur: &Cursor,
    map: BTreeMap<usize, Rat>,
) -> Result<Distribution, ParseError> {
    Distribution::new(map).map_err(|e| cur.err(format!("{e}")))
}

/// Parses any automaton file, dispatching on the kind line, and validates
/// the result.
pub fn parse_automaton(text: &str) -> Result<Automaton, ParseError> {
    let lines = tokenize(text);
    let token_lines: Vec<Line> = lines
        .iter()
        .map(|(number, spaced)| Line {
            number: *number,
            tokens: spaced.split_whitespace().collect(),
        })
        .collect();
    let Some((kind_line, rest)) = token_lines.split_first() else {
        return Err(ParseError::Syntax {
            line: 1,
            message: "empty file".into(),
        });
    };
    let mut cur = Cursor::new(kind_line);
    let kind = cur.next("automaton kind")?;
    cur.done()?;
    match kind {
        "npa" => parse_npa_body(rest).map(Automaton::Npa),
        "dpa" => parse_dpa_body(rest).map(Automaton::Dpa),
        "wfa" => parse_wfa_body(rest).map(Automaton::Wfa),
        other => Err(cur.err(format!("unknown automaton kind {other:?}"))),
    }
}

fn parse_header<'a, 'b>(lines: &'b [Line<'a>]) -> Result<(Header, &'b [Line<'a>]), ParseError> {
    let missing = |what: &str| ParseError::Syntax {
        line: 0,
        message: format!("missing {what} line"),
    };
    let (alpha_line, rest) = lines.split_first().ok_or_else(|| missing("alphabet"))?;
    let alphabet = parse_name_list(alpha_line, "alphabet")?;
    let (states_line, rest) = rest.split_first().ok_or_else(|| missing("states"))?;
    let states = parse_name_list(states_line, "states")?;
    Ok((Header { alphabet, states }, rest))
}

fn parse_initial(line: &Line, header: &Header) -> Result<usize, ParseError> {
    let mut cur = Cursor::new(line);
    cur.expect("initial")?;
    cur.expect(":")?;
    let name = cur.next("a state name")?;
    let s = header.state(&cur, name)?;
    cur.done()?;
    Ok(s)
}

fn parse_output(line: &Line, header: &Header) -> Result<Vec<Rat>, ParseError> {
    let mut cur = Cursor::new(line);
    cur.expect("output")?;
    cur.expect(":")?;
    let map = parse_assignments(&mut cur, header, false)?;
    let mut output = Vec::with_capacity(header.states.len());
    for (s, name) in header.states.iter().enumerate() {
        match map.get(&s) {
            Some(v) => output.push(v.clone()),
            None => return Err(cur.err(format!("no output for state {name:?}"))),
        }
    }
    Ok(output)
}

fn parse_trans_head<'a>(cur: &mut Cursor<'a, '_>, header: &Header) -> Result<(usize, usize), ParseError> {
    cur.expect("trans")?;
    let state = cur.next("a state name")?;
    let s = header.state(cur, state)?;
    let symbol = cur.next("a symbol")?;
    let a = header.symbol(cur, symbol)?;
    cur.expect(":")?;
    Ok((s, a))
}

fn require_all<T>(
    header: &Header,
    grid: Vec<Vec<Option<T>>>,
) -> Result<Vec<Vec<T>>, ValidationError> {
    grid.into_iter()
        .enumerate()
        .map(|(s, row)| {
            row.into_iter()
                .enumerate()
                .map(|(a, cell)| {
                    cell.ok_or_else(|| ValidationError::MissingTransition {
                        state: header.states[s].clone(),
                        symbol: header.alphabet[a].clone(),
                    })
                })
                .collect()
        })
        .collect()
}

fn parse_npa_body(lines: &[Line]) -> Result<Npa, ParseError> {
    let (header, rest) = parse_header(lines)?;
    let missing = |what: &str| ParseError::Syntax {
        line: 0,
        message: format!("missing {what} line"),
    };
    let (initial_line, rest) = rest.split_first().ok_or_else(|| missing("initial"))?;
    let initial = parse_initial(initial_line, &header)?;
    let (output_line, rest) = rest.split_first().ok_or_else(|| missing("output"))?;
    let output = parse_output(output_line, &header)?;

    let mut grid: Vec<Vec<Option<GeneratorSet>>> =
        vec![vec![None; header.alphabet.len()]; header.states.len()];
    for line in rest {
        let mut cur = Cursor::new(line);
        let (s, a) = parse_trans_head(&mut cur, &header)?;
        let mut generators = Vec::new();
        while cur.peek().is_some() {
            cur.expect("{")?;
            let map = parse_assignments(&mut cur, &header, true)?;
            generators.push(distribution_from_map(&cur, map)?);
        }
        if grid[s][a]
            .replace(GeneratorSet::new(generators))
            .is_some()
        {
            return Err(cur.err("duplicate transition line"));
        }
    }
    let transitions = require_all(&header, grid)?;
    Ok(Npa::new(
        header.states,
        header.alphabet,
        initial,
        output,
        transitions,
    )?)
}

fn parse_dpa_body(lines: &[Line]) -> Result<Dpa, ParseError> {
    let (header, rest) = parse_header(lines)?;
    let missing = |what: &str| ParseError::Syntax {
        line: 0,
        message: format!("missing {what} line"),
    };
    let (initial_line, rest) = rest.split_first().ok_or_else(|| missing("initial"))?;
    let initial = parse_initial(initial_line, &header)?;
    let (output_line, rest) = rest.split_first().ok_or_else(|| missing("output"))?;
    let output = parse_output(output_line, &header)?;

    let mut grid: Vec<Vec<Option<Distribution>>> =
        vec![vec![None; header.alphabet.len()]; header.states.len()];
    for line in rest {
        let mut cur = Cursor::new(line);
        let (s, a) = parse_trans_head(&mut cur, &header)?;
        cur.expect("{")?;
        let map = parse_assignments(&mut cur, &header, true)?;
        let d = distribution_from_map(&cur, map)?;
        cur.done()?;
        if grid[s][a].replace(d).is_some() {
            return Err(cur.err("duplicate transition line"));
        }
    }
    let transitions = require_all(&header, grid)?;
    Ok(Dpa::new(
        header.states,
        header.alphabet,
        initial,
        output,
        transitions,
    )?)
}

fn parse_vector(line: &Line, keyword: &str, header: &Header) -> Result<Vec<Rat>, ParseError> {
    let mut cur = Cursor::new(line);
    cur.expect(keyword)?;
    cur.expect(":")?;
    let mut values = Vec::with_capacity(header.states.len());
    for _ in 0..header.states.len() {
        values.push(cur.rat()?);
    }
    cur.done()?;
    Ok(values)
}

fn parse_wfa_body(lines: &[Line]) -> Result<Wfa, ParseError> {
    let (header, rest) = parse_header(lines)?;
    let missing = |what: &str| ParseError::Syntax {
        line: 0,
        message: format!("missing {what} line"),
    };
    let (in_line, rest) = rest.split_first().ok_or_else(|| missing("in"))?;
    let initial_vector = parse_vector(in_line, "in", &header)?;
    let (out_line, rest) = rest.split_first().ok_or_else(|| missing("out"))?;
    let output_vector = parse_vector(out_line, "out", &header)?;

    let n = header.states.len();
    let mut matrices: Vec<Option<Vec<Vec<Rat>>>> = vec![None; header.alphabet.len()];
    for line in rest {
        let mut cur = Cursor::new(line);
        cur.expect("matrix")?;
        let symbol = cur.next("a symbol")?;
        let a = header.symbol(&cur, symbol)?;
        cur.expect(":")?;
        let mut rows: Vec<Option<Vec<Rat>>> = vec![None; n];
        loop {
            cur.expect("row")?;
            let state = cur.next("a state name")?;
            let s = header.state(&cur, state)?;
            cur.expect(":")?;
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                row.push(cur.rat()?);
            }
            if rows[s].replace(row).is_some() {
                return Err(cur.err(format!("row {state:?} given twice")));
            }
            match cur.peek() {
                Some(";") => cur.pos += 1,
                None => break,
                Some(tok) => return Err(cur.err(format!("expected \";\", found {tok:?}"))),
            }
        }
        let full: Option<Vec<Vec<Rat>>> = rows.into_iter().collect();
        let m = full.ok_or_else(|| cur.err("matrix is missing a row"))?;
        if matrices[a].replace(m).is_some() {
            return Err(cur.err(format!("matrix for {symbol:?} given twice")));
        }
    }
    let matrices: Vec<Vec<Vec<Rat>>> = matrices
        .into_iter()
        .enumerate()
        .map(|(a, m)| {
            m.ok_or_else(|| ParseError::Syntax {
                line: 0,
                message: format!("missing matrix for symbol {:?}", header.alphabet[a]),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(Wfa::new(
        header.states,
        header.alphabet,
        initial_vector,
        output_vector,
        matrices,
    )?)
}

fn write_names(f: &mut fmt::Formatter<'_>, keyword: &str, names: &[String]) -> fmt::Result {
    write!(f, "{keyword}:")?;
    for n in names {
        write!(f, " {n}")?;
    }
    writeln!(f)
}

fn write_group(f: &mut fmt::Formatter<'_>, states: &[String], d: &Distribution) -> fmt::Result {
    write!(f, "{{")?;
    for (&s, w) in &d.weights {
        write!(f, " {}={}", states[s], w)?;
    }
    write!(f, " }}")
}

impl fmt::Display for Npa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "npa")?;
        write_names(f, "alphabet", &self.alphabet)?;
        write_names(f, "states", &self.states)?;
        writeln!(f, "initial: {}", self.states[self.initial])?;
        write!(f, "output:")?;
        for (name, w) in self.states.iter().zip(&self.output) {
            write!(f, " {name}={w}")?;
        }
        writeln!(f)?;
        for (s, row) in self.transitions.iter().enumerate() {
            for (a, set) in row.iter().enumerate() {
                write!(f, "trans {} {}:", self.states[s], self.alphabet[a])?;
                for g in &set.generators {
                    write!(f, " ")?;
                    write_group(f, &self.states, g)?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Dpa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dpa")?;
        write_names(f, "alphabet", &self.alphabet)?;
        write_names(f, "states", &self.states)?;
        writeln!(f, "initial: {}", self.states[self.initial])?;
        write!(f, "output:")?;
        for (name, w) in self.states.iter().zip(&self.output) {
            write!(f, " {name}={w}")?;
        }
        writeln!(f)?;
        for (s, row) in self.transitions.iter().enumerate() {
            for (a, d) in row.iter().enumerate() {
                write!(f, "trans {} {}: ", self.states[s], self.alphabet[a])?;
                write_group(f, &self.states, d)?;
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Wfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "wfa")?;
        write_names(f, "alphabet", &self.alphabet)?;
        write_names(f, "states", &self.states)?;
        let vector = |xs: &[Rat]| {
            xs.iter()
                .map(Rat::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "in: {}", vector(&self.initial_vector))?;
        writeln!(f, "out: {}", vector(&self.output_vector))?;
        for (a, m) in self.matrices.iter().enumerate() {
            write!(f, "matrix {}:", self.alphabet[a])?;
            for (s, row) in m.iter().enumerate() {
                if s > 0 {
                    write!(f, " ;")?;
                }
                write!(f, " row {}: {}", self.states[s], vector(row))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
