use crate::game::{Game, LegalMoves, Position, Role};

/// Who can force a win within a fixed number of moves, relative to the
/// verifier at the probed position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruteOutcome {
    VerifierWins,
    FalsifierWins,
    NeitherYet,
}

/// Full game-tree expansion to `depth` moves with no memoization or
/// pruning. Exponential; meant as a test oracle for small games.
pub fn brute_force_enumerate(game: &Game<'_>, p: &Position, depth: u32) -> BruteOutcome {
    if can_force(game, p, p.verifier, depth) {
        BruteOutcome::VerifierWins
    } else if can_force(game, p, p.verifier.opponent(), depth) {
        BruteOutcome::FalsifierWins
    } else {
        BruteOutcome::NeitherYet
    }
}

fn can_force(game: &Game<'_>, p: &Position, player: Role, depth: u32) -> bool {
    let moves = match game
        .legal_moves(p)
        .expect("oracle positions come from the game")
    {
        LegalMoves::End(t) => return t.winner() == Some(player),
        LegalMoves::Moves(ms) => ms,
    };
    if depth == 0 {
        return false;
    }
    let mut results = moves.iter().map(|m| {
        let q = game.apply_move(p, m).expect("listed moves are legal");
        can_force(game, &q, player, depth - 1)
    });
    match moves[0].player(p) {
        Some(mover) if mover != player => results.all(|won| won),
        _ => results.any(|won| won),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{GameConfig, Terminal};
    use crate::structure::{parse_model, Assignment, Element};
    use crate::syntax::{index_subformulas, parse_formula, Name};

    #[test]
    fn truth_teller_never_resolves() {
        let t = index_subformulas(&parse_formula("claim C0. C0", &Default::default()).unwrap());
        let game = Game::new(&t, GameConfig::default()).unwrap();
        let s = crate::structure::PartialStructure::bare(&["a"]);
        let p = game.initial_position(s, Assignment::new()).unwrap();
        for depth in [0, 1, 5, 11] {
            assert_eq!(
                brute_force_enumerate(&game, &p, depth),
                BruteOutcome::NeitherYet
            );
        }
    }

    #[test]
    fn atoms_match_adjudication() {
        let (vocab, s) = parse_model("domain: a b\nrelation R/1\n  + (a)\n  - (b)\n").unwrap();
        let t = index_subformulas(&parse_formula("R(x)", &vocab).unwrap());
        let game = Game::new(&t, GameConfig::default()).unwrap();
        for (g, expected) in [
            (Some(0), Terminal::EloiseWins),
            (Some(1), Terminal::AbelardWins),
            (None, Terminal::Neither),
        ] {
            let g = match g {
                Some(e) => Assignment::new().bind(&Name::from("x"), Element(e)),
                None => Assignment::new(),
            };
            let p = game.initial_position(s.clone(), g).unwrap();
            let brute = brute_force_enumerate(&game, &p, 0);
            let adjudged = match game.adjudicate_atom(&p).unwrap() {
                Terminal::EloiseWins => BruteOutcome::VerifierWins,
                Terminal::AbelardWins => BruteOutcome::FalsifierWins,
                Terminal::Neither => BruteOutcome::NeitherYet,
            };
            assert_eq!(brute, adjudged);
            assert_eq!(game.adjudicate_atom(&p).unwrap(), expected);
        }
    }
}
