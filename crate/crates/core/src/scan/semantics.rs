//! Translation from commands to action-token sequences.
//!
//! A bare turn emits its turn token; a directed primitive turns first and
//! then acts; "opposite" doubles the turn; "around" repeats the
//! turn-then-act step four times; "twice"/"thrice" repeat the verb's
//! sequence; "x1 and x2" concatenates in order while "x1 after x2" emits
//! x2's actions first.

use super::grammar::{Command, Direction, Phrase, Primitive, Verb};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionToken {
    Walk,
    Look,
    Run,
    Jump,
    LTurn,
    RTurn,
    UTurn,
    DTurn,
}

impl ActionToken {
    pub fn word(self) -> &'static str {
        match self {
            ActionToken::Walk => "WALK",
            ActionToken::Look => "LOOK",
            ActionToken::Run => "RUN",
            ActionToken::Jump => "JUMP",
            ActionToken::LTurn => "LTURN",
            ActionToken::RTurn => "RTURN",
            ActionToken::UTurn => "UTURN",
            ActionToken::DTurn => "DTURN",
        }
    }
}

pub(crate) fn primitive_token(p: Primitive) -> ActionToken {
    match p {
        Primitive::Walk => ActionToken::Walk,
        Primitive::Look => ActionToken::Look,
        Primitive::Run => ActionToken::Run,
        Primitive::Jump => ActionToken::Jump,
    }
}

pub(crate) fn turn_token(d: Direction) -> ActionToken {
    match d {
        Direction::Left => ActionToken::LTurn,
        Direction::Right => ActionToken::RTurn,
        Direction::Up => ActionToken::UTurn,
        Direction::Down => ActionToken::DTurn,
    }
}

/// A non-empty sequence of action tokens; displays space-separated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionSeq(pub Vec<ActionToken>);

impl fmt::Display for ActionSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t.word())?;
        }
        Ok(())
    }
}

fn verb_tokens(verb: &Verb, out: &mut Vec<ActionToken>) {
    match verb {
        Verb::Primitive(p) => out.push(primitive_token(*p)),
        Verb::Directed(d) => {
            out.push(turn_token(d.direction));
            if let Some(p) = d.primitive {
                out.push(primitive_token(p));
            }
        }
        Verb::Opposite(d) => {
            let t = turn_token(d.direction);
            out.push(t);
            out.push(t);
            if let Some(p) = d.primitive {
                out.push(primitive_token(p));
            }
        }
        Verb::Around(d) => {
            let t = turn_token(d.direction);
            for _ in 0..4 {
                out.push(t);
                if let Some(p) = d.primitive {
                    out.push(primitive_token(p));
                }
            }
        }
    }
}

fn phrase_tokens(phrase: &Phrase, out: &mut Vec<ActionToken>) {
    let mut once = Vec::new();
    verb_tokens(&phrase.verb, &mut once);
    for _ in 0..phrase.repeat.count() {
        out.extend_from_slice(&once);
    }
}

/// Total on derivable commands; the result is never empty.
pub fn interpret(command: &Command) -> ActionSeq {
    let mut tokens = Vec::new();
    match command {
        Command::Single(p) => phrase_tokens(p, &mut tokens),
        Command::And(a, b) => {
            phrase_tokens(a, &mut tokens);
            phrase_tokens(b, &mut tokens);
        }
        Command::After(a, b) => {
            phrase_tokens(b, &mut tokens);
            phrase_tokens(a, &mut tokens);
        }
    }
    ActionSeq(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::grammar::enumerate_commands;
    use std::collections::HashMap;

    fn by_text() -> HashMap<String, ActionSeq> {
        enumerate_commands()
            .iter()
            .map(|c| (c.to_string(), interpret(c)))
            .collect()
    }

    #[test]
    fn fixed_translations() {
        let table = by_text();
        let expect = |cmd: &str, actions: &str| {
            assert_eq!(
                table
                    .get(cmd)
                    .unwrap_or_else(|| panic!("command {cmd:?} not derivable"))
                    .to_string(),
                actions,
                "command {cmd:?}"
            );
        };
        expect("jump", "JUMP");
        expect("turn left", "LTURN");
        expect("turn up", "UTURN");
        expect("turn around left", "LTURN LTURN LTURN LTURN");
        expect("turn opposite up", "UTURN UTURN");
        expect("jump left twice", "LTURN JUMP LTURN JUMP");
        expect("walk after run", "RUN WALK");
        expect("look opposite down", "DTURN DTURN LOOK");
        expect("run around up", "UTURN RUN UTURN RUN UTURN RUN UTURN RUN");
        expect("walk and run thrice", "WALK RUN RUN RUN");
    }

    #[test]
    fn every_command_translates_to_something() {
        for c in enumerate_commands() {
            assert!(!interpret(&c).0.is_empty(), "{c}");
        }
    }
}
