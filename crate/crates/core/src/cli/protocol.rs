//! Line protocol for driving an oracle session over standard streams.
//!
//! ```text
//! server: n <N>
//! client: ? u v          (u < v)
//! server: a b            (the arc a -> b)
//! client: ! x            (claim x is an MOD vertex)
//! server: ok q=<count>
//!    or:  refuted q=<count>, one `u v` line per arc of the completion
//!         in lexicographic pair order, then `witness <y>`
//! ```
//!
//! A malformed line is answered with `err <message>` and changes nothing.
//! The session ends after a claim or at end of input.

use std::io::{self, BufRead, Write};

use crate::oracle::{EdgeQuery, OracleSession};
use crate::tournament::VertexId;

/// How a served session ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ServeOutcome {
    Sound { claimed: VertexId, q: usize },
    Refuted { claimed: VertexId, q: usize, witness: VertexId },
    /// Input closed before any claim.
    Abandoned { q: usize },
}

enum Request {
    Query(EdgeQuery),
    Claim(VertexId),
}

fn parse_request(line: &str, n: usize) -> Result<Request, String> {
    let mut words = line.split_whitespace();
    let head = words.next().ok_or("empty line")?;
    let mut vertex = || -> Result<usize, String> {
        let w = words.next().ok_or("missing vertex")?;
        let v: usize = w.parse().map_err(|_| format!("bad vertex `{w}`"))?;
        if v >= n {
            return Err(format!("vertex {v} out of range for n = {n}"));
        }
        Ok(v)
    };
    let request = match head {
        "?" => {
            let (u, v) = (vertex()?, vertex()?);
            Request::Query(EdgeQuery::new(u, v).map_err(|e| e.to_string())?)
        }
        "!" => Request::Claim(vertex()?),
        other => return Err(format!("unknown command `{other}`")),
    };
    if words.next().is_some() {
        return Err("trailing input".to_string());
    }
    Ok(request)
}

/// Serves `session` until a claim is judged or input runs out.
pub fn serve(
    mut session: OracleSession,
    input: impl BufRead,
    mut output: impl Write,
) -> io::Result<ServeOutcome> {
    let n = session.n();
    writeln!(output, "n {n}")?;
    output.flush()?;
    for line in input.lines() {
        let line = line?;
        match parse_request(&line, n) {
            Err(message) => writeln!(output, "err {message}")?,
            Ok(Request::Query(e)) => match session.query(e) {
                Ok(arc) => writeln!(output, "{arc}")?,
                Err(err) => writeln!(output, "err {err}")?,
            },
            Ok(Request::Claim(x)) => {
                let q = session.q();
                let verdict = session
                    .refute(x)
                    .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
                let outcome = match verdict {
                    None => {
                        writeln!(output, "ok q={q}")?;
                        ServeOutcome::Sound { claimed: x, q }
                    }
                    Some(r) => {
                        writeln!(output, "refuted q={q}")?;
                        for arc in r.completion.arcs() {
                            writeln!(output, "{arc}")?;
                        }
                        writeln!(output, "witness {}", r.witness)?;
                        ServeOutcome::Refuted {
                            claimed: x,
                            q,
                            witness: r.witness,
                        }
                    }
                };
                output.flush()?;
                return Ok(outcome);
            }
        }
        output.flush()?;
    }
    Ok(ServeOutcome::Abandoned { q: session.q() })
}
