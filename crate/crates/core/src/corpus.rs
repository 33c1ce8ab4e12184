//! Known circuit codes used as ground truth by tests and the CLI.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::permuted::expand;
use crate::sequence::TransitionSequence;
use crate::spread::{verify_spread, Code, CodeKind, SpreadCheck};

/// How an entry's transition sequence is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Listing {
    Full(&'static str),
    Permuted {
        initial: &'static str,
        /// Cycle notation.
        perm: &'static str,
        period: usize,
        /// The expanded sequence, where it is also listed in full.
        full: Option<&'static str>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub dim: usize,
    pub spread: usize,
    pub kind: CodeKind,
    pub expected_len: usize,
    pub source: &'static str,
    pub listing: Listing,
}

impl CorpusEntry {
    /// The transition sequence, expanded from the initial sequence if needed.
    pub fn sequence(&self) -> Result<TransitionSequence> {
        match self.listing {
            Listing::Full(text) => TransitionSequence::parse(text, self.dim),
            Listing::Permuted {
                initial, perm, period, ..
            } => {
                let initial = TransitionSequence::parse(initial, self.dim)?;
                let perm = Permutation::parse_cycles(perm, self.dim)?;
                expand(&initial, &perm, period, None)
            }
        }
    }

    /// The full listing, if the entry has one.
    pub fn full_listing(&self) -> Option<Result<TransitionSequence>> {
        let text = match self.listing {
            Listing::Full(text) => text,
            Listing::Permuted { full: Some(text), .. } => text,
            Listing::Permuted { full: None, .. } => return None,
        };
        Some(TransitionSequence::parse(text, self.dim))
    }

    pub fn check(&self) -> Result<SpreadCheck> {
        verify_spread(self.kind, self.spread, &self.sequence()?)
    }

    /// The entry as a verified code; fails on spread violations and on a
    /// length other than the expected one.
    pub fn code(&self) -> Result<Code> {
        let seq = self.sequence()?;
        if seq.len() != self.expected_len {
            return Err(Error::InvalidArgument(format!(
                "{}: {} transitions, expected {}",
                self.id,
                seq.len(),
                self.expected_len
            )));
        }
        Code::new(self.kind, self.spread, seq)
    }
}

const D10_N348_FULL: &str = "\
    01897208469847685740278968076
    12698316579658760851386976187
    23796427089706871602467987268
    34897538169817682713578968376
    45698046279628763824086976487
    50796157389736874635167987568
    01897208469847685740278968076
    12698316579658760851386976187
    23796427089706871602467987268
    34897538169817682713578968376
    45698046279628763824086976487
    50796157389736874635167987568";

const D11_N640_FULL: &str = "\
    A04A82A73A26A38A27A48162A648A402
    A15A93A84A37A49A38A59273A759A513
    A26A04A95A48A50A49A60384A860A624
    A37A15A06A59A61A50A71495A971A735
    A48A26A17A60A72A61A82506A082A846
    A59A37A28A71A83A72A93617A193A957
    A60A48A39A82A94A83A04728A204A068
    A71A59A40A93A05A94A15839A315A179
    A82A60A51A04A16A05A26940A426A280
    A93A71A62A15A27A16A37051A537A391
    A04A82A73A26A38A27A48162A648A402
    A15A93A84A37A49A38A59273A759A513
    A26A04A95A48A50A49A60384A860A624
    A37A15A06A59A61A50A71495A971A735
    A48A26A17A60A72A61A82506A082A846
    A59A37A28A71A83A72A93617A193A957
    A60A48A39A82A94A83A04728A204A068
    A71A59A40A93A05A94A15839A315A179
    A82A60A51A04A16A05A26940A426A280
    A93A71A62A15A27A16A37051A537A391";

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        id: "coil-s2-d10-n348",
        dim: 10,
        spread: 2,
        kind: CodeKind::Coil,
        expected_len: 348,
        source: "permuted construction, L=29, P=12",
        listing: Listing::Permuted {
            initial: "0189720846 9847685740 278968076",
            perm: "(123450)(786)9",
            period: 12,
            full: Some(D10_N348_FULL),
        },
    },
    CorpusEntry {
        id: "coil-s2-d11-n638",
        dim: 11,
        spread: 2,
        kind: CodeKind::Coil,
        expected_len: 638,
        source: "permuted construction, L=29, P=22",
        listing: Listing::Permuted {
            initial: "0168763891 305943A671 35127A237",
            perm: "(123456789A0)",
            period: 22,
            full: None,
        },
    },
    CorpusEntry {
        id: "coil-s2-d11-n640",
        dim: 11,
        spread: 2,
        kind: CodeKind::Coil,
        expected_len: 640,
        source: "permuted construction, L=32, P=20",
        listing: Listing::Permuted {
            initial: "A04A82A73A 26A38A27A4 8162A648A4 02",
            perm: "(1234567890)A",
            period: 20,
            full: Some(D11_N640_FULL),
        },
    },
    CorpusEntry {
        id: "coil-s3-d10-n100",
        dim: 10,
        spread: 3,
        kind: CodeKind::Coil,
        expected_len: 100,
        source: "permuted construction, L=5, P=20",
        listing: Listing::Permuted {
            initial: "26014",
            perm: "(1234567890)",
            period: 20,
            full: None,
        },
    },
    CorpusEntry {
        id: "coil-s3-d11-n160a",
        dim: 11,
        spread: 3,
        kind: CodeKind::Coil,
        expected_len: 160,
        source: "permuted construction, L=10, P=16",
        listing: Listing::Permuted {
            initial: "0A184A5234",
            perm: "(12345670)(98)A",
            period: 16,
            full: None,
        },
    },
    CorpusEntry {
        id: "coil-s3-d11-n160b",
        dim: 11,
        spread: 3,
        kind: CodeKind::Coil,
        expected_len: 160,
        source: "permuted construction, L=8, P=20",
        listing: Listing::Permuted {
            initial: "0623184A",
            perm: "(1234567890)A",
            period: 20,
            full: None,
        },
    },
    CorpusEntry {
        id: "natural-d8-n94",
        dim: 8,
        spread: 2,
        kind: CodeKind::Coil,
        expected_len: 94,
        source: "natural coil, identity permutation, P=2",
        listing: Listing::Permuted {
            initial: "0314035046 0340745135 6253157407 5305670517 0317436",
            perm: "01234567",
            period: 2,
            full: None,
        },
    },
    CorpusEntry {
        id: "coil-d9-n188",
        dim: 9,
        spread: 2,
        kind: CodeKind::Coil,
        expected_len: 188,
        source: "joined from two 8-snakes",
        listing: Listing::Full(
            "0123043254 2134256352 1324532105 1245231524 6142315712 3152413210 4213245321 3461235421 \
             3253045213 2458032105 1245231524 6142312541 2304325421 3425635213 4732134253 1230523125 \
             4123156321 4523124105 42312548",
        ),
    },
    CorpusEntry {
        id: "snake-d9-n190",
        dim: 9,
        spread: 2,
        kind: CodeKind::Snake,
        expected_len: 190,
        source: "joined from two 8-snakes",
        listing: Listing::Full(
            "0120314021 0541021432 1026431450 4134210431 4501432731 2014301263 2143053102 3053145036 \
             0431402143 1046806104 3145014310 6302143203 5043203145 3654031405 4375314021 4310451341 \
             0214316504 5314504120 4501430540",
        ),
    },
    CorpusEntry {
        id: "coil-s3-d9-n58",
        dim: 9,
        spread: 3,
        kind: CodeKind::Coil,
        expected_len: 58,
        source: "listed in full",
        listing: Listing::Full("0123041502 1603570132 4038175014 5671536012 3674563017 60581735"),
    },
    CorpusEntry {
        id: "coil-s5-d12-n58",
        dim: 12,
        spread: 5,
        kind: CodeKind::Coil,
        expected_len: 58,
        source: "listed in full",
        listing: Listing::Full("0123450617 2803196A04 72160548B7 014A836105 82A9167854 0613A84B"),
    },
    CorpusEntry {
        id: "coil-s6-d13-n50",
        dim: 13,
        spread: 6,
        kind: CodeKind::Coil,
        expected_len: 50,
        source: "listed in full",
        listing: Listing::Full("0123456071 82930A142B 9C630529A7 60124A8305 629B4C5A"),
    },
];

pub fn corpus_entry(id: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.id == id)
}
