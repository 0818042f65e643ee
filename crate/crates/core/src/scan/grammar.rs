//! The command language and its exhaustive enumeration.
//!
//! Commands are conjunctions of at most two phrases; a phrase is a verb
//! with an optional repetition; a verb is a primitive, a directed form
//! ("walk left", "turn up"), or a directed form modified by "opposite" or
//! "around". The grammar has no recursion, so the language is finite.
//!
//! Enumeration order is fixed so dataset files are byte-reproducible:
//! verbs go primitives first, then directed, "opposite", "around" forms
//! (each with the "turn" head before the primitive heads, directions in
//! declaration order); each verb is emitted once, twice, thrice before the
//! next verb; and commands list all single phrases, then all "and" pairs,
//! then all "after" pairs, with the left phrase varying slowest.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Primitive {
    Walk,
    Look,
    Run,
    Jump,
}

impl Primitive {
    pub const ALL: [Primitive; 4] = [
        Primitive::Walk,
        Primitive::Look,
        Primitive::Run,
        Primitive::Jump,
    ];

    pub fn word(self) -> &'static str {
        match self {
            Primitive::Walk => "walk",
            Primitive::Look => "look",
            Primitive::Run => "run",
            Primitive::Jump => "jump",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Left,
    Right,
    Up,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Left,
        Direction::Right,
        Direction::Up,
        Direction::Down,
    ];

    pub fn word(self) -> &'static str {
        match self {
            Direction::Left => "left",
            Direction::Right => "right",
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

/// A directed form: a primitive head plus a direction, or a bare turn when
/// the head is absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Directed {
    pub primitive: Option<Primitive>,
    pub direction: Direction,
}

impl Directed {
    fn head_word(&self) -> &'static str {
        self.primitive.map_or("turn", Primitive::word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verb {
    Primitive(Primitive),
    Directed(Directed),
    Opposite(Directed),
    Around(Directed),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Repeat {
    Once,
    Twice,
    Thrice,
}

impl Repeat {
    pub fn count(self) -> usize {
        match self {
            Repeat::Once => 1,
            Repeat::Twice => 2,
            Repeat::Thrice => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phrase {
    pub verb: Verb,
    pub repeat: Repeat,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Command {
    Single(Phrase),
    And(Phrase, Phrase),
    After(Phrase, Phrase),
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verb::Primitive(p) => write!(f, "{}", p.word()),
            Verb::Directed(d) => write!(f, "{} {}", d.head_word(), d.direction.word()),
            Verb::Opposite(d) => {
                write!(f, "{} opposite {}", d.head_word(), d.direction.word())
            }
            Verb::Around(d) => write!(f, "{} around {}", d.head_word(), d.direction.word()),
        }
    }
}

impl fmt::Display for Phrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repeat {
            Repeat::Once => write!(f, "{}", self.verb),
            Repeat::Twice => write!(f, "{} twice", self.verb),
            Repeat::Thrice => write!(f, "{} thrice", self.verb),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Single(p) => write!(f, "{p}"),
            Command::And(a, b) => write!(f, "{a} and {b}"),
            Command::After(a, b) => write!(f, "{a} after {b}"),
        }
    }
}

fn directed_forms(directions: &[Direction]) -> Vec<Directed> {
    let heads = std::iter::once(None).chain(Primitive::ALL.into_iter().map(Some));
    let mut forms = Vec::new();
    for head in heads {
        for &direction in directions {
            forms.push(Directed {
                primitive: head,
                direction,
            });
        }
    }
    forms
}

fn verbs(directions: &[Direction]) -> Vec<Verb> {
    let mut out: Vec<Verb> = Primitive::ALL.into_iter().map(Verb::Primitive).collect();
    out.extend(directed_forms(directions).into_iter().map(Verb::Directed));
    out.extend(directed_forms(directions).into_iter().map(Verb::Opposite));
    out.extend(directed_forms(directions).into_iter().map(Verb::Around));
    out
}

fn phrases(directions: &[Direction]) -> Vec<Phrase> {
    let mut out = Vec::new();
    for verb in verbs(directions) {
        for repeat in [Repeat::Once, Repeat::Twice, Repeat::Thrice] {
            out.push(Phrase { verb, repeat });
        }
    }
    out
}

/// Every derivable command over the given direction vocabulary, in the
/// fixed enumeration order. Duplicate-free because every production choice
/// yields a distinct tree.
pub fn enumerate_commands_restricted(directions: &[Direction]) -> Vec<Command> {
    let ps = phrases(directions);
    let mut out: Vec<Command> = ps.iter().map(|&p| Command::Single(p)).collect();
    for &a in &ps {
        for &b in &ps {
            out.push(Command::And(a, b));
        }
    }
    for &a in &ps {
        for &b in &ps {
            out.push(Command::After(a, b));
        }
    }
    out
}

/// The full command language over all four directions.
pub fn enumerate_commands() -> Vec<Command> {
    enumerate_commands_restricted(&Direction::ALL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn contains_bare_jump_and_vertical_turns() {
        let rendered: HashSet<String> =
            enumerate_commands().iter().map(|c| c.to_string()).collect();
        assert!(rendered.contains("jump"));
        assert!(rendered.contains("turn up"));
        assert!(rendered.contains("turn down"));
        assert!(rendered.contains("jump around left twice and walk"));
    }

    #[test]
    fn left_right_fragment_matches_the_original_corpus_size() {
        let fragment = enumerate_commands_restricted(&[Direction::Left, Direction::Right]);
        assert_eq!(fragment.len(), 20_910);
    }

    #[test]
    fn full_language_size_is_pinned() {
        // 64 verbs, 192 phrases, 192 + 2 * 192^2 commands.
        assert_eq!(enumerate_commands().len(), 73_920);
    }

    #[test]
    fn enumeration_is_duplicate_free_and_deterministic() {
        let a = enumerate_commands();
        let b = enumerate_commands();
        assert_eq!(a, b);
        let unique: HashSet<&Command> = a.iter().collect();
        assert_eq!(unique.len(), a.len());
    }
}
