//! Vocabulary swaps and the equivariance of the translation.
//!
//! A swap exchanges one pair of command words together with the matching
//! pair of action tokens. Swaps are involutions, and swaps on distinct
//! pairs commute, so a set of `k` swaps generates a product group of size
//! `2^k` whose elements are the subsets of the set.

use super::grammar::{Command, Directed, Direction, Phrase, Primitive, Verb};
use super::semantics::{interpret, primitive_token, turn_token, ActionSeq, ActionToken};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordPair {
    Primitives(Primitive, Primitive),
    Directions(Direction, Direction),
}

/// A command-word pair and its action-token pair, e.g. jump/walk with
/// JUMP/WALK.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VocabSwap {
    pub words: WordPair,
    pub actions: (ActionToken, ActionToken),
}

impl VocabSwap {
    pub fn primitives(a: Primitive, b: Primitive) -> Self {
        assert_ne!(a, b, "a swap must exchange two distinct words");
        Self {
            words: WordPair::Primitives(a, b),
            actions: (primitive_token(a), primitive_token(b)),
        }
    }

    pub fn directions(a: Direction, b: Direction) -> Self {
        assert_ne!(a, b, "a swap must exchange two distinct words");
        Self {
            words: WordPair::Directions(a, b),
            actions: (turn_token(a), turn_token(b)),
        }
    }

    fn swap_primitive(&self, p: Primitive) -> Primitive {
        match self.words {
            WordPair::Primitives(a, b) if p == a => b,
            WordPair::Primitives(a, b) if p == b => a,
            _ => p,
        }
    }

    fn swap_direction(&self, d: Direction) -> Direction {
        match self.words {
            WordPair::Directions(a, b) if d == a => b,
            WordPair::Directions(a, b) if d == b => a,
            _ => d,
        }
    }

    fn swap_token(&self, t: ActionToken) -> ActionToken {
        if t == self.actions.0 {
            self.actions.1
        } else if t == self.actions.1 {
            self.actions.0
        } else {
            t
        }
    }
}

/// The three swaps used throughout: jump/walk, left/right, up/down.
pub fn standard_swaps() -> Vec<VocabSwap> {
    vec![
        VocabSwap::primitives(Primitive::Jump, Primitive::Walk),
        VocabSwap::directions(Direction::Left, Direction::Right),
        VocabSwap::directions(Direction::Up, Direction::Down),
    ]
}

fn swap_directed(sw: &VocabSwap, d: &Directed) -> Directed {
    Directed {
        primitive: d.primitive.map(|p| sw.swap_primitive(p)),
        direction: sw.swap_direction(d.direction),
    }
}

fn swap_phrase(sw: &VocabSwap, p: &Phrase) -> Phrase {
    let verb = match &p.verb {
        Verb::Primitive(u) => Verb::Primitive(sw.swap_primitive(*u)),
        Verb::Directed(d) => Verb::Directed(swap_directed(sw, d)),
        Verb::Opposite(d) => Verb::Opposite(swap_directed(sw, d)),
        Verb::Around(d) => Verb::Around(swap_directed(sw, d)),
    };
    Phrase {
        verb,
        repeat: p.repeat,
    }
}

/// Token-level substitution on the command alphabet; the result is always
/// derivable because the substitution acts inside the grammar's leaf sets.
pub fn apply_swap(sw: &VocabSwap, c: &Command) -> Command {
    match c {
        Command::Single(p) => Command::Single(swap_phrase(sw, p)),
        Command::And(a, b) => Command::And(swap_phrase(sw, a), swap_phrase(sw, b)),
        Command::After(a, b) => Command::After(swap_phrase(sw, a), swap_phrase(sw, b)),
    }
}

/// Token-level substitution on the action alphabet.
pub fn apply_swap_actions(sw: &VocabSwap, seq: &ActionSeq) -> ActionSeq {
    ActionSeq(seq.0.iter().map(|&t| sw.swap_token(t)).collect())
}

/// Result of sweeping the translation against every element of the product
/// group generated by a swap set.
#[derive(Debug, Clone, Serialize)]
pub struct EquivarianceReport {
    pub commands: usize,
    pub group_elements: usize,
    pub checks: usize,
    pub violations: usize,
    /// Up to five rendered counterexamples.
    pub examples: Vec<String>,
}

impl EquivarianceReport {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `interpret(sigma . c) == sigma . interpret(c)` for every command
/// in `commands` and every subset `sigma` of `swaps` (the full product
/// group the swaps generate), using exact token equality.
pub fn verify_semantic_equivariance_over(
    commands: &[Command],
    swaps: &[VocabSwap],
) -> EquivarianceReport {
    let group_elements = 1usize << swaps.len();
    let mut violations = 0usize;
    let mut examples = Vec::new();
    for c in commands {
        let base = interpret(c);
        for mask in 0..group_elements {
            let mut swapped_command = c.clone();
            let mut swapped_actions = base.clone();
            for (k, sw) in swaps.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    swapped_command = apply_swap(sw, &swapped_command);
                    swapped_actions = apply_swap_actions(sw, &swapped_actions);
                }
            }
            if interpret(&swapped_command) != swapped_actions {
                violations += 1;
                if examples.len() < 5 {
                    examples.push(format!(
                        "mask {mask:b}: {c} -> {swapped_command}: got {}, want {}",
                        interpret(&swapped_command),
                        swapped_actions
                    ));
                }
            }
        }
    }
    EquivarianceReport {
        commands: commands.len(),
        group_elements,
        checks: commands.len() * group_elements,
        violations,
        examples,
    }
}

/// [`verify_semantic_equivariance_over`] on the full command language.
pub fn verify_semantic_equivariance(swaps: &[VocabSwap]) -> EquivarianceReport {
    verify_semantic_equivariance_over(&super::grammar::enumerate_commands(), swaps)
}
