//! Terminal play: the human picks moves by number, the engine answers for
//! the other player, and moves without alternatives are taken
//! automatically.

use std::collections::HashSet;
use std::io::{self, BufRead, Write};

use gts_core::game::{Game, LegalMoves, Position, Role};
use gts_core::solver::suggest_move;
use gts_core::syntax::print_highlighted;

#[derive(Clone, Copy, Debug)]
pub struct PlayOptions {
    pub human: Role,
    pub budget: u32,
    pub max_moves: usize,
}

fn show(game: &Game<'_>, p: &Position, out: &mut impl Write) -> io::Result<()> {
    let s = &p.structure;
    let assignment: Vec<String> = p
        .assignment
        .iter()
        .map(|(v, e)| format!("{v}={}", s.name(e)))
        .collect();
    writeln!(
        out,
        "formula:    {}",
        print_highlighted(game.table().root(), p.node)
    )?;
    writeln!(out, "verifier:   {}", p.verifier)?;
    writeln!(out, "assignment: {{{}}}", assignment.join(", "))?;
    for line in gts_core::structure::write_model(s).lines() {
        writeln!(out, "  | {line}")?;
    }
    Ok(())
}

/// Plays from `start` reading commands from `input`: a move number,
/// `:hint`, `:moves` or `:quit`. Ends at a terminal, on `:quit` or end of
/// input, when a run of single-option moves comes back to a position it
/// already visited (the play can only go on forever), or after
/// `options.max_moves` moves.
pub fn play(
    game: &Game<'_>,
    start: Position,
    options: PlayOptions,
    mut input: impl BufRead,
    out: &mut impl Write,
) -> io::Result<()> {
    let mut p = start;
    let mut forced_run: HashSet<Position> = HashSet::new();
    writeln!(
        out,
        "you play {}; the engine plays {}",
        options.human,
        options.human.opponent()
    )?;
    show(game, &p, out)?;
    for _ in 0..options.max_moves {
        let moves = match game.legal_moves(&p).expect("positions come from this game") {
            LegalMoves::End(t) => {
                writeln!(out, "{t}")?;
                return Ok(());
            }
            LegalMoves::Moves(ms) => ms,
        };
        let choice = if moves.len() == 1 {
            if !forced_run.insert(p.clone()) {
                writeln!(
                    out,
                    "the play cycles through forced moves forever: Neither wins"
                )?;
                return Ok(());
            }
            0
        } else {
            forced_run.clear();
            match moves[0].player(&p) {
                Some(role) if role != options.human => suggest_move(game, &p, role, options.budget)
                    .ok()
                    .and_then(|s| s.choice)
                    .unwrap_or(0),
                _ => match ask(game, &p, &moves, options, &mut input, out)? {
                    Some(i) => i,
                    None => return Ok(()),
                },
            }
        };
        let m = &moves[choice];
        writeln!(out, "> {}", m.describe(&p))?;
        p = game.apply_move(&p, m).expect("listed moves are legal");
        show(game, &p, out)?;
    }
    writeln!(
        out,
        "stopped after {} moves without a winner",
        options.max_moves
    )
}

fn ask(
    game: &Game<'_>,
    p: &Position,
    moves: &[gts_core::game::Move],
    options: PlayOptions,
    input: &mut impl BufRead,
    out: &mut impl Write,
) -> io::Result<Option<usize>> {
    let list = |out: &mut dyn Write| -> io::Result<()> {
        for (i, m) in moves.iter().enumerate() {
            writeln!(out, "  [{i}] {}", m.describe(p))?;
        }
        Ok(())
    };
    list(out)?;
    loop {
        write!(out, "move> ")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(None);
        }
        match line.trim() {
            ":quit" | ":q" => return Ok(None),
            ":moves" => list(out)?,
            ":hint" => match suggest_move(game, p, options.human, options.budget) {
                Ok(s) => {
                    let pick = s
                        .choice
                        .map(|i| format!("; try [{i}] {}", moves[i].describe(p)))
                        .unwrap_or_default();
                    writeln!(
                        out,
                        "within {} moves: {}{pick}",
                        options.budget, s.verdict.outcome
                    )?;
                }
                Err(e) => writeln!(out, "no hint: {e}")?,
            },
            text => match text.parse::<usize>() {
                Ok(i) if i < moves.len() => return Ok(Some(i)),
                _ => writeln!(
                    out,
                    "enter a move number 0-{}, :hint, :moves or :quit",
                    moves.len() - 1
                )?,
            },
        }
    }
}
