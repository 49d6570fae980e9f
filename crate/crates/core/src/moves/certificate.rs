use sha2::{Digest, Sha256};

use super::{apply, Move, MoveError};
use crate::graph::DecoratedReebGraph;

/// An ordered list of moves together with the fingerprints of the graphs it
/// starts and ends at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveCertificate {
    pub initial: String,
    pub terminal: String,
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("initial fingerprint does not match the input graph")]
    InitialMismatch,
    #[error("move {index} ({name}) failed: {source}")]
    Move { index: usize, name: &'static str, source: MoveError },
    #[error("replay ended at {got}, certificate claims {expected}")]
    FinalMismatch { expected: String, got: String },
}

/// SHA-256 of the canonical graph text, hex encoded.
pub fn fingerprint(g: &DecoratedReebGraph) -> String {
    hex::encode(Sha256::digest(crate::format::graph_text(g).as_bytes()))
}

impl MoveCertificate {
    /// Build a certificate by running `moves` from `g`.
    pub fn record(g: &DecoratedReebGraph, moves: Vec<Move>) -> Result<(Self, DecoratedReebGraph), CertificateError> {
        let mut cur = g.clone();
        for (index, m) in moves.iter().enumerate() {
            cur = apply(&cur, m).map_err(|source| CertificateError::Move { index, name: m.name(), source })?.graph;
        }
        let cert = Self { initial: fingerprint(g), terminal: fingerprint(&cur), moves };
        Ok((cert, cur))
    }

    pub fn empty(g: &DecoratedReebGraph) -> Self {
        let f = fingerprint(g);
        Self { initial: f.clone(), terminal: f, moves: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }
}

/// Replay a certificate from `g`, checking both fingerprints.
pub fn replay(g: &DecoratedReebGraph, cert: &MoveCertificate) -> Result<DecoratedReebGraph, CertificateError> {
    if fingerprint(g) != cert.initial {
        return Err(CertificateError::InitialMismatch);
    }
    let mut cur = g.clone();
    for (index, m) in cert.moves.iter().enumerate() {
        cur = apply(&cur, m).map_err(|source| CertificateError::Move { index, name: m.name(), source })?.graph;
    }
    let got = fingerprint(&cur);
    if got != cert.terminal {
        return Err(CertificateError::FinalMismatch { expected: cert.terminal.clone(), got });
    }
    Ok(cur)
}
