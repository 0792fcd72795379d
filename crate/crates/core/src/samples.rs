//! Small automata used throughout the tests, the acceptance suite and the CLI docs.

use crate::automaton::OrderedAutomaton;

/// Three letters, three states; characteristic polynomial `x^3-2x^2-x+1` (Pisot).
pub fn ternary() -> OrderedAutomaton {
    OrderedAutomaton::from_rows(vec![vec![2, 0, 1], vec![3, 0, 1], vec![3, 2, 1]])
        .expect("valid table")
}

/// The β-automaton of the real root of `x^3-4x^2-2`, quasi-greedy expansion `(401)^ω`.
pub fn beta_cubic() -> OrderedAutomaton {
    OrderedAutomaton::from_rows(vec![
        vec![2, 0, 0, 0, 0],
        vec![3, 3, 0, 0, 0],
        vec![3, 3, 3, 3, 1],
    ])
    .expect("valid table")
}

/// Four letters, four states; not a Pisot automaton, characteristic polynomial
/// `x^4-7x^3+15x^2-11x`.
pub fn non_pisot() -> OrderedAutomaton {
    OrderedAutomaton::from_rows(vec![
        vec![3, 2, 1, 0],
        vec![3, 2, 2, 1],
        vec![4, 4, 3, 1],
        vec![4, 4, 4, 2],
    ])
    .expect("valid table")
}

/// Classical base-`b` van der Corput automaton (`d = 1`).
pub fn integer_base(b: usize) -> OrderedAutomaton {
    assert!(b >= 2);
    OrderedAutomaton::from_rows(vec![vec![1; b]]).expect("valid table")
}
