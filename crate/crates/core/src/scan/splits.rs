//! Train/test split construction.
//!
//! Three vocabulary items are held out: the word "jump", the direction
//! "left", and the direction "up". The train split keeps every command
//! that mentions none of them, plus the three bare commands "jump",
//! "turn left", and "turn up" so each held-out item is seen in isolation.
//! Composed commands mentioning exactly one held-out item form that item's
//! test split; commands mentioning two or more land in the combined split.
//! The five buckets partition the language, so the membership predicates
//! are auditable by re-deriving the bucket of any command.

use super::grammar::{Command, Directed, Direction, Phrase, Primitive, Repeat, Verb};
use super::semantics::{interpret, ActionSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitName {
    Train,
    Jump,
    TurnLeft,
    TurnUp,
    TurnUpJumpTurnLeft,
}

impl SplitName {
    pub const ALL: [SplitName; 5] = [
        SplitName::Train,
        SplitName::Jump,
        SplitName::TurnLeft,
        SplitName::TurnUp,
        SplitName::TurnUpJumpTurnLeft,
    ];

    pub fn file_stem(self) -> &'static str {
        match self {
            SplitName::Train => "train",
            SplitName::Jump => "jump",
            SplitName::TurnLeft => "turn_left",
            SplitName::TurnUp => "turn_up",
            SplitName::TurnUpJumpTurnLeft => "turn_up_jump_turn_left",
        }
    }

    /// Membership predicate over commands.
    pub fn contains(self, c: &Command) -> bool {
        classify(c) == self
    }
}

#[derive(Default)]
struct HeldOut {
    jump: bool,
    left: bool,
    up: bool,
}

impl HeldOut {
    fn count(&self) -> usize {
        usize::from(self.jump) + usize::from(self.left) + usize::from(self.up)
    }
}

fn scan_directed(d: &Directed, held: &mut HeldOut) {
    if d.primitive == Some(Primitive::Jump) {
        held.jump = true;
    }
    match d.direction {
        Direction::Left => held.left = true,
        Direction::Up => held.up = true,
        _ => {}
    }
}

fn scan_phrase(p: &Phrase, held: &mut HeldOut) {
    match &p.verb {
        Verb::Primitive(Primitive::Jump) => held.jump = true,
        Verb::Primitive(_) => {}
        Verb::Directed(d) | Verb::Opposite(d) | Verb::Around(d) => scan_directed(d, held),
    }
}

fn held_out(c: &Command) -> HeldOut {
    let mut held = HeldOut::default();
    match c {
        Command::Single(p) => scan_phrase(p, &mut held),
        Command::And(a, b) | Command::After(a, b) => {
            scan_phrase(a, &mut held);
            scan_phrase(b, &mut held);
        }
    }
    held
}

/// The three bare commands kept in the train split despite mentioning a
/// held-out item: "jump", "turn left", "turn up".
fn is_bare_exception(c: &Command) -> bool {
    let Command::Single(Phrase {
        verb,
        repeat: Repeat::Once,
    }) = c
    else {
        return false;
    };
    matches!(
        verb,
        Verb::Primitive(Primitive::Jump)
            | Verb::Directed(Directed {
                primitive: None,
                direction: Direction::Left | Direction::Up,
            })
    )
}

fn classify(c: &Command) -> SplitName {
    let held = held_out(c);
    match held.count() {
        0 => SplitName::Train,
        1 if is_bare_exception(c) => SplitName::Train,
        1 if held.jump => SplitName::Jump,
        1 if held.left => SplitName::TurnLeft,
        1 => SplitName::TurnUp,
        _ => SplitName::TurnUpJumpTurnLeft,
    }
}

pub type Dataset = Vec<(Command, ActionSeq)>;

#[derive(Debug, Clone)]
pub struct Splits {
    pub train: Dataset,
    pub jump: Dataset,
    pub turn_left: Dataset,
    pub turn_up: Dataset,
    pub turn_up_jump_turn_left: Dataset,
}

impl Splits {
    pub fn get(&self, name: SplitName) -> &Dataset {
        match name {
            SplitName::Train => &self.train,
            SplitName::Jump => &self.jump,
            SplitName::TurnLeft => &self.turn_left,
            SplitName::TurnUp => &self.turn_up,
            SplitName::TurnUpJumpTurnLeft => &self.turn_up_jump_turn_left,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (SplitName, &Dataset)> {
        SplitName::ALL.into_iter().map(move |n| (n, self.get(n)))
    }

    pub fn total_pairs(&self) -> usize {
        self.iter().map(|(_, d)| d.len()).sum()
    }
}

/// Buckets the whole language into the five splits, pairing each command
/// with its translation. Enumeration order is preserved within each split.
pub fn make_splits() -> Splits {
    let mut splits = Splits {
        train: Vec::new(),
        jump: Vec::new(),
        turn_left: Vec::new(),
        turn_up: Vec::new(),
        turn_up_jump_turn_left: Vec::new(),
    };
    for c in super::grammar::enumerate_commands() {
        let actions = interpret(&c);
        let bucket = match classify(&c) {
            SplitName::Train => &mut splits.train,
            SplitName::Jump => &mut splits.jump,
            SplitName::TurnLeft => &mut splits.turn_left,
            SplitName::TurnUp => &mut splits.turn_up,
            SplitName::TurnUpJumpTurnLeft => &mut splits.turn_up_jump_turn_left,
        };
        bucket.push((c, actions));
    }
    splits
}
