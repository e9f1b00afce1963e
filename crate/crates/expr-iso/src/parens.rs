use ampc_sim::SimConfig;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("unbalanced parenthesis at {pos}")]
pub struct Unbalanced {
    pub pos: usize,
}

/// Partner map over the input positions plus the machine levels it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParenMatch {
    /// `partner[i]` is the match of a parenthesis at `i`, `None` elsewhere.
    pub partner: Vec<Option<usize>>,
    pub levels: usize,
    /// Most runs any single machine held.
    pub peak_runs: usize,
}

impl ParenMatch {
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.filter(|&j| i < j).map(|j| (i, j)))
    }
}

/// A maximal run of equal parentheses left unmatched by a machine. The
/// machine forwards only the kind and the count; positions ride along so the
/// host can write the partner map.
#[derive(Debug, Clone)]
struct Run {
    open: bool,
    pos: Vec<usize>,
}

/// Matches the parentheses of `s` (other bytes are ignored) by repeatedly
/// cutting the run sequence into chunks of `max(n^eps, 4)` runs. Each chunk
/// cancels `()` pairs and leaves at most a close run followed by an open run,
/// so every level shrinks the sequence by half the chunk width.
pub fn match_parens(s: &str, cfg: &SimConfig) -> Result<ParenMatch, Unbalanced> {
    let opens: Vec<(usize, bool)> = s
        .bytes()
        .enumerate()
        .filter_map(|(i, b)| match b {
            b'(' => Some((i, true)),
            b')' => Some((i, false)),
            _ => None,
        })
        .collect();
    let width = cfg.fan().max(4);
    let mut partner = vec![None; s.len()];
    let mut runs: Vec<Run> = opens
        .into_iter()
        .map(|(i, open)| Run { open, pos: vec![i] })
        .collect();
    let mut levels = 0;
    let mut peak_runs = 0;
    loop {
        levels += 1;
        let last = runs.len() <= width;
        let mut next = Vec::new();
        for chunk in runs.chunks(width.max(1)) {
            peak_runs = peak_runs.max(chunk.len());
            next.extend(cancel(chunk, &mut partner));
        }
        runs = next;
        if last || runs.is_empty() {
            break;
        }
    }
    if let Some(r) = runs.first() {
        let pos = if r.open {
            *r.pos.last().unwrap()
        } else {
            r.pos[0]
        };
        return Err(Unbalanced { pos });
    }
    Ok(ParenMatch {
        partner,
        levels,
        peak_runs,
    })
}

fn cancel(chunk: &[Run], partner: &mut [Option<usize>]) -> Vec<Run> {
    let mut closes: Vec<usize> = Vec::new();
    let mut stack: Vec<Vec<usize>> = Vec::new();
    for run in chunk {
        if run.open {
            stack.push(run.pos.clone());
            continue;
        }
        for &q in &run.pos {
            while stack.last().is_some_and(|r| r.is_empty()) {
                stack.pop();
            }
            match stack.last_mut().and_then(|r| r.pop()) {
                Some(p) => {
                    partner[p] = Some(q);
                    partner[q] = Some(p);
                }
                None => closes.push(q),
            }
        }
    }
    let open: Vec<usize> = stack.into_iter().flatten().collect();
    let mut out = Vec::with_capacity(2);
    if !closes.is_empty() {
        out.push(Run {
            open: false,
            pos: closes,
        });
    }
    if !open.is_empty() {
        out.push(Run {
            open: true,
            pos: open,
        });
    }
    out
}

/// Sequential stack matcher.
pub fn stack_match(s: &str) -> Result<Vec<Option<usize>>, Unbalanced> {
    let mut partner = vec![None; s.len()];
    let mut stack = Vec::new();
    for (i, b) in s.bytes().enumerate() {
        match b {
            b'(' => stack.push(i),
            b')' => {
                let p = stack.pop().ok_or(Unbalanced { pos: i })?;
                partner[p] = Some(i);
                partner[i] = Some(p);
            }
            _ => {}
        }
    }
    match stack.pop() {
        Some(p) => Err(Unbalanced { pos: p }),
        None => Ok(partner),
    }
}
