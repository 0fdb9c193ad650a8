//! Query oracle and cost ledger.
//!
//! The algorithm under test sees the hidden graph only through
//! [`QueryOracle::query`]. Modeled quantum subroutines bill their oracle
//! applications through [`QueryLedger::charge`]. One unit is one application
//! of the input oracle; all other work is free.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Pair, Triangle, Vertex};

/// Cost-attribution labels, one per row of the solver plus final verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepTag {
    Step1,
    Step2,
    Step3,
    Step4,
    Step5,
    Step6,
    Step7,
    Step8,
    Step9,
    Step10,
    Verify,
}

impl StepTag {
    pub const ALL: [StepTag; 11] = [
        StepTag::Step1,
        StepTag::Step2,
        StepTag::Step3,
        StepTag::Step4,
        StepTag::Step5,
        StepTag::Step6,
        StepTag::Step7,
        StepTag::Step8,
        StepTag::Step9,
        StepTag::Step10,
        StepTag::Verify,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StepTag::Step1 => "step1",
            StepTag::Step2 => "step2",
            StepTag::Step3 => "step3",
            StepTag::Step4 => "step4",
            StepTag::Step5 => "step5",
            StepTag::Step6 => "step6",
            StepTag::Step7 => "step7",
            StepTag::Step8 => "step8",
            StepTag::Step9 => "step9",
            StepTag::Step10 => "step10",
            StepTag::Verify => "verify",
        }
    }
}

impl fmt::Display for StepTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid query: {0}")]
    InvalidQuery(#[from] GraphError),
    #[error(
        "query budget exceeded under {tag}: {spent} spent + {requested} requested > budget {budget}; \
         the cost analysis for this run is broken"
    )]
    BudgetExceeded {
        tag: StepTag,
        spent: u64,
        requested: u64,
        budget: u64,
    },
}

/// Default budget `⌈50 · n^{10/7} · (ln n)²⌉`, a generous multiple of the
/// asymptotic query bound.
pub fn default_budget(n: u32) -> u64 {
    let nf = f64::from(n.max(2));
    (50.0 * nf.powf(10.0 / 7.0) * nf.ln().powi(2)).ceil() as u64
}

/// Integer query accumulator with a per-step breakdown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryLedger {
    classical: u64,
    charged: u64,
    per_step: [u64; 11],
    budget: Option<u64>,
}

impl QueryLedger {
    /// A ledger with an optional budget; `None` means unlimited.
    pub fn new(budget: Option<u64>) -> Self {
        QueryLedger {
            classical: 0,
            charged: 0,
            per_step: [0; 11],
            budget,
        }
    }

    pub fn unlimited() -> Self {
        Self::new(None)
    }

    pub fn total(&self) -> u64 {
        self.classical + self.charged
    }

    pub fn classical(&self) -> u64 {
        self.classical
    }

    pub fn charged(&self) -> u64 {
        self.charged
    }

    pub fn step(&self, tag: StepTag) -> u64 {
        self.per_step[tag.index()]
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    fn admit(&self, amount: u64, tag: StepTag) -> Result<(), OracleError> {
        match self.budget {
            Some(budget) if self.total().saturating_add(amount) > budget => {
                Err(OracleError::BudgetExceeded {
                    tag,
                    spent: self.total(),
                    requested: amount,
                    budget,
                })
            }
            _ => Ok(()),
        }
    }

    /// Bills `amount` oracle applications made by a modeled quantum subroutine.
    pub fn charge(&mut self, amount: u64, tag: StepTag) -> Result<(), OracleError> {
        self.admit(amount, tag)?;
        self.charged += amount;
        self.per_step[tag.index()] += amount;
        Ok(())
    }

    fn record_classical(&mut self, tag: StepTag) -> Result<(), OracleError> {
        self.admit(1, tag)?;
        self.classical += 1;
        self.per_step[tag.index()] += 1;
        Ok(())
    }

    pub fn report(&self) -> LedgerReport {
        LedgerReport {
            classical: self.classical,
            charged: self.charged,
            total: self.total(),
            per_step: StepTag::ALL
                .iter()
                .map(|&t| (t.as_str().to_string(), self.per_step[t.index()]))
                .collect(),
            budget: self.budget,
        }
    }
}

/// Immutable snapshot of a ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub classical: u64,
    pub charged: u64,
    pub total: u64,
    pub per_step: BTreeMap<String, u64>,
    pub budget: Option<u64>,
}

impl LedgerReport {
    pub fn step(&self, tag: StepTag) -> u64 {
        self.per_step.get(tag.as_str()).copied().unwrap_or(0)
    }
}

/// The hidden graph together with the ledger that meters access to it.
#[derive(Debug)]
pub struct QueryOracle<'g> {
    graph: &'g Graph,
    ledger: QueryLedger,
}

impl<'g> QueryOracle<'g> {
    /// An oracle with the default budget for the graph's size.
    pub fn new(graph: &'g Graph) -> Self {
        Self::with_budget(graph, Some(default_budget(graph.n())))
    }

    pub fn with_budget(graph: &'g Graph, budget: Option<u64>) -> Self {
        QueryOracle {
            graph,
            ledger: QueryLedger::new(budget),
        }
    }

    pub fn n(&self) -> u32 {
        self.graph.n()
    }

    /// One classical probe of the adjacency matrix.
    pub fn query(&mut self, a: Vertex, b: Vertex, tag: StepTag) -> Result<bool, OracleError> {
        self.graph.check_vertex(a)?;
        self.graph.check_vertex(b)?;
        let p = Pair::try_new(a, b)?;
        self.ledger.record_classical(tag)?;
        Ok(self.graph.has_edge(p))
    }

    pub fn charge(&mut self, amount: u64, tag: StepTag) -> Result<(), OracleError> {
        self.ledger.charge(amount, tag)
    }

    /// Checks all three pairs of a candidate with classical queries under [`StepTag::Verify`].
    pub fn verify(&mut self, tri: &Triangle) -> Result<bool, OracleError> {
        let mut ok = true;
        for p in tri.pairs() {
            ok &= self.query(p.lo(), p.hi(), StepTag::Verify)?;
        }
        Ok(ok)
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn ledger_mut(&mut self) -> &mut QueryLedger {
        &mut self.ledger
    }

    pub fn report(&self) -> LedgerReport {
        self.ledger.report()
    }

    /// Simulator-privileged view of the hidden graph. Used only to sample the
    /// outcome distributions of modeled subroutines and to compute
    /// diagnostics; never by the algorithm's decisions. Reading it does not
    /// touch the ledger.
    pub fn simulator_view(&self) -> &'g Graph {
        self.graph
    }
}
