//! Error metrics and the alternating mesh-to-mesh transfer loop.
//!
//! Starting from exact nodal values on mesh A, each iteration fits a method
//! on A and evaluates it at the nodes of B, then fits on those transferred
//! values and evaluates back at A. Refits always use transferred values, so
//! errors accumulate; they are measured against the exact field.

mod methods;
mod metrics;

use std::fmt;
use std::io::Write;

pub use methods::{ElmTransfer, Evaluator, Interpolator, MlpTransfer, PiecewiseLinear, RbfElmTransfer};
pub use metrics::{mae, rl2};

use crate::dataset::BenchmarkField;
use crate::error::{Error, Result};
use crate::geometry::Mesh;
use crate::textio::fmt_real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    AToB,
    BToA,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::AToB => "A->B",
            Direction::BToA => "B->A",
        })
    }
}

/// One half-iteration of the loop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferStep {
    /// 1-based iteration.
    pub iteration: usize,
    pub direction: Direction,
    pub mae: f64,
    pub rl2: f64,
}

/// A step together with the values it produced at the receiving nodes.
#[derive(Clone, Debug)]
pub struct TransferState {
    pub step: TransferStep,
    pub values: Vec<f64>,
}

/// Lazily runs the alternating transfer, one half-iteration per item.
pub struct PingPong<'a> {
    mesh_a: &'a Mesh,
    mesh_b: &'a Mesh,
    method: &'a dyn Interpolator,
    truth_a: Vec<f64>,
    truth_b: Vec<f64>,
    current: Vec<f64>,
    iterations: usize,
    next: (usize, Direction),
    failed: bool,
}

impl<'a> PingPong<'a> {
    pub fn new(
        mesh_a: &'a Mesh,
        mesh_b: &'a Mesh,
        field: &BenchmarkField,
        method: &'a dyn Interpolator,
        iterations: usize,
    ) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::invalid("need at least one iteration"));
        }
        for m in [mesh_a, mesh_b] {
            if m.dim() != field.dim() {
                return Err(Error::invalid(format!(
                    "{}D mesh used with {}D field {}",
                    m.dim(),
                    field.dim(),
                    field.name()
                )));
            }
        }
        let exact = |m: &Mesh| m.nodes().iter().map(|p| field.eval(p)).collect::<Result<Vec<_>>>();
        let truth_a = exact(mesh_a)?;
        let truth_b = exact(mesh_b)?;
        Ok(PingPong {
            mesh_a,
            mesh_b,
            method,
            current: truth_a.clone(),
            truth_a,
            truth_b,
            iterations,
            next: (1, Direction::AToB),
            failed: false,
        })
    }

    fn advance(&mut self) -> Result<TransferState> {
        let (k, dir) = self.next;
        let (src, dst, truth) = match dir {
            Direction::AToB => (self.mesh_a, self.mesh_b, &self.truth_b),
            Direction::BToA => (self.mesh_b, self.mesh_a, &self.truth_a),
        };
        let evaluator = self.method.fit(src, &self.current, k as u64)?;
        let values = evaluator.evaluate(dst.nodes())?;
        let step = TransferStep {
            iteration: k,
            direction: dir,
            mae: mae(&values, truth)?,
            rl2: rl2(&values, truth)?,
        };
        self.current.clone_from(&values);
        self.next = match dir {
            Direction::AToB => (k, Direction::BToA),
            Direction::BToA => (k + 1, Direction::AToB),
        };
        Ok(TransferState { step, values })
    }
}

impl Iterator for PingPong<'_> {
    type Item = Result<TransferState>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.next.0 > self.iterations {
            return None;
        }
        let (iteration, dir) = self.next;
        Some(self.advance().map_err(|e| {
            self.failed = true;
            Error::Transfer {
                iteration,
                direction: dir.to_string(),
                source: Box::new(e),
            }
        }))
    }
}

/// Error history of one method.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferReport {
    pub method: String,
    pub config: Vec<(String, String)>,
    pub steps: Vec<TransferStep>,
}

pub const REPORT_HEADER: &str = "method,iteration,direction,mae,rl2";

impl TransferReport {
    /// Steps in one direction, in iteration order.
    pub fn direction(&self, dir: Direction) -> impl Iterator<Item = &TransferStep> + '_ {
        self.steps.iter().filter(move |s| s.direction == dir)
    }

    pub fn last(&self, dir: Direction) -> Option<&TransferStep> {
        self.direction(dir).last()
    }

    pub fn write_rows<W: Write>(&self, mut w: W) -> Result<()> {
        for s in &self.steps {
            writeln!(
                w,
                "{},{},{},{},{}",
                self.method,
                s.iteration,
                s.direction,
                fmt_real(s.mae),
                fmt_real(s.rl2)
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        reports_to_csv(std::slice::from_ref(self))
    }
}

/// Runs the full loop and collects the history.
pub fn ping_pong(
    mesh_a: &Mesh,
    mesh_b: &Mesh,
    field: &BenchmarkField,
    method: &dyn Interpolator,
    iterations: usize,
) -> Result<TransferReport> {
    let steps = PingPong::new(mesh_a, mesh_b, field, method, iterations)?
        .map(|s| s.map(|s| s.step))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransferReport {
        method: method.name(),
        config: method.config(),
        steps,
    })
}

/// Shared inputs of a method comparison.
pub struct CompareConfig<'a> {
    pub mesh_a: &'a Mesh,
    pub mesh_b: &'a Mesh,
    pub field: BenchmarkField,
    pub iterations: usize,
    pub methods: Vec<Box<dyn Interpolator + 'a>>,
}

#[derive(Debug)]
pub struct Comparison {
    pub reports: Vec<TransferReport>,
    /// Methods that failed, with their errors; the others still ran.
    pub failures: Vec<(String, Error)>,
}

impl Comparison {
    pub fn to_csv(&self) -> String {
        reports_to_csv(&self.reports)
    }

    /// `key=value` lines describing the run.
    pub fn config_echo(&self, cfg: &CompareConfig<'_>) -> String {
        let mut s = format!(
            "field={}\niterations={}\nmesh_a_nodes={}\nmesh_b_nodes={}\n",
            cfg.field,
            cfg.iterations,
            cfg.mesh_a.num_nodes(),
            cfg.mesh_b.num_nodes()
        );
        for m in &cfg.methods {
            s.push_str(&format!("method={}\n", m.name()));
            for (k, v) in m.config() {
                s.push_str(&format!("{}.{k}={v}\n", m.name()));
            }
        }
        s
    }
}

/// Runs every method on the same mesh pair.
pub fn compare_methods(cfg: &CompareConfig<'_>) -> Comparison {
    let mut out = Comparison {
        reports: Vec::new(),
        failures: Vec::new(),
    };
    for m in &cfg.methods {
        match ping_pong(cfg.mesh_a, cfg.mesh_b, &cfg.field, m.as_ref(), cfg.iterations) {
            Ok(r) => out.reports.push(r),
            Err(e) => out.failures.push((m.name(), e)),
        }
    }
    out
}

fn reports_to_csv(reports: &[TransferReport]) -> String {
    let mut buf = format!("{REPORT_HEADER}\n").into_bytes();
    for r in reports {
        r.write_rows(&mut buf).expect("writing to memory");
    }
    String::from_utf8(buf).expect("report rows are ASCII")
}
