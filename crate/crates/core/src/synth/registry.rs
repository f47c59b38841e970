//! Constructions by name, for the command line and batch checks.

use super::constructions::*;
use super::ConstructionResult;

/// Parameters a construction may need; missing ones are reported by name.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub q: Option<u32>,
    pub n: Option<usize>,
    pub r: Option<u32>,
}

impl Params {
    pub fn q(&self) -> Result<u32, SynthError> {
        self.q.ok_or_else(|| SynthError::Parameter("missing --q".into()))
    }
    pub fn n(&self) -> Result<usize, SynthError> {
        self.n.ok_or_else(|| SynthError::Parameter("missing --n".into()))
    }
    pub fn r(&self) -> Result<u32, SynthError> {
        self.r.ok_or_else(|| SynthError::Parameter("missing --r".into()))
    }
}

pub struct Entry {
    pub name: &'static str,
    pub params: &'static str,
    pub summary: &'static str,
    build: fn(&Params) -> Result<ConstructionResult, SynthError>,
}

impl Entry {
    pub fn build(&self, p: &Params) -> Result<ConstructionResult, SynthError> {
        (self.build)(p)
    }
}

pub const CONSTRUCTIONS: &[Entry] = &[
    Entry {
        name: "cat-log-depth",
        params: "n",
        summary: "cat state by doubling controlled-not layers",
        build: |p| cat_log_depth(p.n()?),
    },
    Entry {
        name: "parity-from-fanout",
        params: "n",
        summary: "MOD_2 as H, fanout, H",
        build: |p| parity_from_fanout(p.n()?),
    },
    Entry {
        name: "fanout-from-parity",
        params: "n",
        summary: "fanout as H, parity, H",
        build: |p| fanout_from_parity(p.n()?),
    },
    Entry {
        name: "parity-via-pi-shifts",
        params: "n",
        summary: "MOD_2 from cat-state phase kickback",
        build: |p| parity_via_pi_shifts(p.n()?),
    },
    Entry {
        name: "modq-from-parity",
        params: "q,n",
        summary: "MOD_q from parity-gate copies and the cycle diagonalization",
        build: |p| modq_from_parity(p.q()?, p.n()?),
    },
    Entry {
        name: "modq-from-fanout",
        params: "q,n",
        summary: "MOD_q with fanout copies",
        build: |p| modq_with_copies(p.q()?, p.n()?, CopyPrimitive::Fanout),
    },
    Entry {
        name: "qudigit-h",
        params: "q",
        summary: "Fourier gate on one digit block",
        build: |p| qudigit_h(p.q()?, false),
    },
    Entry {
        name: "qudigit-m",
        params: "q,n",
        summary: "digit-sum adder into the last block",
        build: |p| qudigit_adders(p.q()?, p.n()?, 1, DigitSum::IntoTarget),
    },
    Entry {
        name: "qudigit-f",
        params: "q,n",
        summary: "base-q fanout of the last block",
        build: |p| qudigit_adders(p.q()?, p.n()?, 1, DigitSum::IntoInput),
    },
    Entry {
        name: "mq-from-fq",
        params: "q,n",
        summary: "digit-sum adder as Fourier-conjugated base-q fanout",
        build: |p| mq_from_fq_conjugation(p.q()?, p.n()?),
    },
    Entry {
        name: "mod-hat",
        params: "q,r,n",
        summary: "flip when the digit sum is r mod q",
        build: |p| mod_hat(p.q()?, p.r()?, p.n()?),
    },
    Entry {
        name: "mq-from-modq",
        params: "q,n",
        summary: "digit-sum adder from MOD_q residue tests",
        build: |p| mq_from_modq(p.q()?, p.n()?),
    },
    Entry {
        name: "f-from-fq",
        params: "q,n",
        summary: "binary fanout from base-q fanout",
        build: |p| f_from_fq(p.q()?, p.n()?),
    },
    Entry {
        name: "modqr-from-neg-modq",
        params: "q,r,n",
        summary: "MOD_{q,r} from negated MOD_q and constant inputs",
        build: |p| modqr_from_neg_modq(p.q()?, p.r()?, p.n()?),
    },
];

pub fn lookup(name: &str) -> Option<&'static Entry> {
    CONSTRUCTIONS.iter().find(|e| e.name == name)
}

pub fn construct(name: &str, p: &Params) -> Result<ConstructionResult, SynthError> {
    lookup(name)
        .ok_or_else(|| SynthError::Parameter(format!("unknown construction {name:?}")))?
        .build(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds_at_small_size() {
        let p = Params { q: Some(3), n: Some(2), r: Some(1) };
        for e in CONSTRUCTIONS {
            let r = e.build(&p).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            r.circuit.validate().unwrap();
        }
    }

    #[test]
    fn missing_parameters_are_named() {
        let err = construct("modq-from-parity", &Params { n: Some(2), ..Default::default() }).unwrap_err();
        assert!(err.to_string().contains("--q"));
        assert!(construct("nope", &Params::default()).is_err());
    }
}
