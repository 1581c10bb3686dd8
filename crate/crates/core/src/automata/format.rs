//! Line-oriented generator text format.
//!
//! ```text
//! alphabet: a b c d
//! states: q0 q1 q2
//! initial: q0
//! marked: q0 q1 q2
//! trans:
//! q0 a q1
//! q1 b q2
//! ```
//!
//! `#` starts a comment. Header sections may come in any order; `trans:`
//! comes last and is followed by one `source event target` triple per line.

use std::fmt::Write as _;

use super::generator::{Generator, GeneratorBuilder};
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format { line, message: message.into() }
}

/// Parses the text format into an unvalidated description.
pub fn parse_description(text: &str) -> Result<GeneratorBuilder> {
    let mut alphabet = None;
    let mut states = None;
    let mut initial = None;
    let mut marked = None;
    let mut in_trans = false;
    let mut transitions = Vec::new();
    let mut trans_lines = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if in_trans {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(format_err(lineno, format!("expected `source event target`, got `{line}`")));
            }
            transitions.push((parts[0].to_string(), parts[1].to_string(), parts[2].to_string()));
            trans_lines.push(lineno);
            continue;
        }
        let Some((key, rest)) = line.split_once(':') else {
            return Err(format_err(lineno, format!("expected `key: values`, got `{line}`")));
        };
        let values: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        let slot = match key.trim() {
            "alphabet" => &mut alphabet,
            "states" => &mut states,
            "initial" => &mut initial,
            "marked" => &mut marked,
            "trans" => {
                if !values.is_empty() {
                    return Err(format_err(lineno, "transitions start on the line after `trans:`"));
                }
                in_trans = true;
                continue;
            }
            other => return Err(format_err(lineno, format!("unknown section `{other}`"))),
        };
        if slot.is_some() {
            return Err(format_err(lineno, format!("section `{}` given twice", key.trim())));
        }
        *slot = Some((lineno, values));
    }

    let (_, alphabet) = alphabet.ok_or_else(|| format_err(0, "missing `alphabet:` section"))?;
    let (_, states) = states.ok_or_else(|| format_err(0, "missing `states:` section"))?;
    let initial = match initial {
        Some((l, v)) if v.len() != 1 => return Err(format_err(l, "`initial:` takes exactly one state")),
        Some((_, mut v)) => Some(v.remove(0)),
        None if states.is_empty() => None,
        None => return Err(format_err(0, "missing `initial:` section")),
    };
    let marked = marked.map(|(_, v)| v).unwrap_or_default();

    let alpha = Alphabet::from_events(alphabet.iter().map(String::as_str));
    if alpha.len() != alphabet.len() {
        return Err(format_err(0, "duplicate event in `alphabet:`"));
    }
    let builder = GeneratorBuilder { alphabet: alpha, states, initial, marked, transitions };
    // Report the first offending transition line rather than a bare error.
    let mut seen = std::collections::HashSet::new();
    for ((from, ev, to), &l) in builder.transitions.iter().zip(&trans_lines) {
        for s in [from, to] {
            if !builder.states.contains(s) {
                return Err(format_err(l, format!("undeclared state `{s}`")));
            }
        }
        if !builder.alphabet.contains_str(ev) {
            return Err(format_err(l, format!("undeclared event `{ev}`")));
        }
        if !seen.insert((from.clone(), ev.clone())) {
            return Err(format_err(l, format!("duplicate transition from `{from}` on `{ev}`")));
        }
    }
    for s in builder.initial.iter().chain(&builder.marked) {
        if !builder.states.contains(s) {
            return Err(format_err(0, format!("undeclared state `{s}`")));
        }
    }
    Ok(builder)
}

/// Parses and trims.
pub fn parse_generator(text: &str) -> Result<Generator> {
    parse_description(text)?.build_and_trim()
}

/// Emits the text format. An empty-language generator is written as a
/// single unmarked initial state.
pub fn emit_generator(g: &Generator) -> String {
    let mut out = String::new();
    let events: Vec<&str> = g.alphabet().iter().map(|e| e.as_str()).collect();
    writeln!(out, "alphabet: {}", events.join(" ")).unwrap();
    if g.initial().is_none() {
        out.push_str("states: q0\ninitial: q0\nmarked:\ntrans:\n");
        return out;
    }
    let names: Vec<&str> = (0..g.num_states()).map(|q| g.state_name(q)).collect();
    writeln!(out, "states: {}", names.join(" ")).unwrap();
    writeln!(out, "initial: {}", g.state_name(g.initial().unwrap())).unwrap();
    let marked: Vec<&str> = g.marked_states().map(|q| g.state_name(q)).collect();
    if marked.is_empty() {
        out.push_str("marked:\n");
    } else {
        writeln!(out, "marked: {}", marked.join(" ")).unwrap();
    }
    out.push_str("trans:\n");
    for (q, a, t) in g.transitions() {
        writeln!(out, "{} {} {}", g.state_name(q), g.alphabet().get(a), g.state_name(t)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Word;
    use crate::automata::generator::Mode;
    use crate::automata::ops::languages_equal;

    const SAMPLE: &str = "\
# a comment
alphabet: a b c d
states: q0 q1 q2
initial: q0
marked: q0 q1 q2
trans:
q0 a q1   # trailing
q1 b q2
";

    #[test]
    fn parses_sample() {
        let g = parse_generator(SAMPLE).unwrap();
        assert_eq!(g.num_states(), 3);
        assert!(g.contains(&Word::from_symbols("ab"), Mode::Marked).unwrap());
    }

    #[test]
    fn round_trip_preserves_language() {
        let g = parse_generator(SAMPLE).unwrap();
        let again = parse_generator(&emit_generator(&g)).unwrap();
        assert!(languages_equal(&g, &again, Mode::Marked).unwrap());
        assert_eq!(emit_generator(&g), emit_generator(&again));
    }

    #[test]
    fn duplicate_transition_names_its_line() {
        let text = SAMPLE.replace("q1 b q2\n", "q1 b q2\nq1 b q0\n");
        match parse_generator(&text) {
            Err(Error::Format { line, message }) => {
                assert_eq!(line, 9);
                assert!(message.contains("duplicate"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_generator("alphabet: a\nstates q0\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }));
        let err = parse_generator("alphabet: a\nstates: p\ninitial: p\ntrans:\np a r\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 5, .. }));
    }

    #[test]
    fn empty_language_round_trips() {
        let g = Generator::empty(Alphabet::from_symbols("ab"));
        let again = parse_generator(&emit_generator(&g)).unwrap();
        assert!(again.is_empty_language());
        assert_eq!(again.alphabet(), g.alphabet());
    }
}
