//! Honest-party state machines and verification: Bob's preparation,
//! Alice's committing measurement, pad-encrypted relays to the wings, and
//! the two-wing acceptance decision.

mod run;

pub use run::{
    run_honest, LoggedMessage, RunConfig, Station, Transcript, TranscriptSummary,
};

use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{bb84_state, born_sample, projector, Operator, Povm, PureState, RandomSource};
use crate::spacetime::{deliver, DeliveryResult, EventPoint, Message};

/// Measurement basis, in bijection with the committed bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// {|0⟩, |1⟩}, committing to bit 0.
    Computational,
    /// {|+⟩, |−⟩}, committing to bit 1.
    Hadamard,
}

static COMPUTATIONAL_POVM: LazyLock<Povm> = LazyLock::new(|| {
    Povm::new(vec![
        projector(&bb84_state(1).expect("alphabet state")),
        projector(&bb84_state(3).expect("alphabet state")),
    ])
    .expect("basis projectors form a measurement")
});

static HADAMARD_POVM: LazyLock<Povm> = LazyLock::new(|| {
    Povm::new(vec![
        projector(&bb84_state(2).expect("alphabet state")),
        projector(&bb84_state(4).expect("alphabet state")),
    ])
    .expect("basis projectors form a measurement")
});

impl Basis {
    pub fn for_bit(bit: u8) -> Result<Self> {
        match bit {
            0 => Ok(Basis::Computational),
            1 => Ok(Basis::Hadamard),
            _ => Err(Error::InvalidArgument(format!(
                "committed bit must be 0 or 1, got {bit}"
            ))),
        }
    }

    pub fn bit(&self) -> u8 {
        match self {
            Basis::Computational => 0,
            Basis::Hadamard => 1,
        }
    }

    /// Alphabet indices whose states are eigenstates of this basis.
    pub fn state_indices(&self) -> [usize; 2] {
        match self {
            Basis::Computational => [1, 3],
            Basis::Hadamard => [2, 4],
        }
    }

    /// The projective measurement in this basis; outcome k is the bit k.
    pub fn povm(&self) -> &'static Povm {
        match self {
            Basis::Computational => &COMPUTATIONAL_POVM,
            Basis::Hadamard => &HADAMARD_POVM,
        }
    }

    /// The deterministic outcome bit for an eigenstate of this basis, or
    /// None for a conjugate-basis state.
    pub fn outcome_for_index(&self, index: usize) -> Option<u8> {
        let [lo, hi] = self.state_indices();
        if index == lo {
            Some(0)
        } else if index == hi {
            Some(1)
        } else {
            None
        }
    }
}

/// The two verification sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Wing {
    Q0,
    Q1,
}

impl fmt::Display for Wing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wing::Q0 => write!(f, "Q0"),
            Wing::Q1 => write!(f, "Q1"),
        }
    }
}

/// Bob's secret preparation: i.i.d. uniform alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreparedStates {
    indices: Vec<usize>,
}

impl PreparedStates {
    pub fn from_indices(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidArgument("preparation needs n ≥ 1".into()));
        }
        for &i in &indices {
            if !(1..=4).contains(&i) {
                return Err(Error::InvalidArgument(format!(
                    "alphabet index {i} not in 1..=4"
                )));
            }
        }
        Ok(Self { indices })
    }

    pub fn n(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn index(&self, k: usize) -> usize {
        self.indices[k]
    }

    pub fn state(&self, k: usize) -> Result<PureState> {
        bb84_state(self.indices[k])
    }

    /// Materializes the state list handed to Alice, which carries no index
    /// information beyond the states themselves.
    pub fn states(&self) -> Result<Vec<PureState>> {
        self.indices.iter().map(|&i| bb84_state(i)).collect()
    }
}

/// Draws n alphabet states uniformly at random.
pub fn bob_prepare(n: usize, rng: &mut RandomSource) -> Result<PreparedStates> {
    if n == 0 {
        return Err(Error::InvalidArgument("preparation needs n ≥ 1".into()));
    }
    let indices = (0..n).map(|_| rng.below(4) + 1).collect();
    PreparedStates::from_indices(indices)
}

/// Depolarizing channel applied to each qubit before measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    depolarizing: f64,
}

impl NoiseModel {
    pub fn ideal() -> Self {
        Self { depolarizing: 0.0 }
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "depolarizing probability must lie in [0,1], got {p}"
            )));
        }
        Ok(Self { depolarizing: p })
    }

    pub fn probability(&self) -> f64 {
        self.depolarizing
    }

    /// ρ ↦ (1−p)ρ + p·I/2.
    pub fn apply(&self, rho: &Operator) -> Result<Operator> {
        if self.depolarizing == 0.0 {
            return Ok(rho.clone());
        }
        let mixed = Operator::identity(rho.dim())?.scale(self.depolarizing / rho.dim() as f64);
        Ok(&rho.scale(1.0 - self.depolarizing) + &mixed)
    }
}

/// Independent per-state loss, declared at the commitment point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossModel {
    loss: f64,
}

impl LossModel {
    pub fn ideal() -> Self {
        Self { loss: 0.0 }
    }

    pub fn iid(f: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&f) {
            return Err(Error::InvalidArgument(format!(
                "loss probability must lie in [0,1), got {f}"
            )));
        }
        Ok(Self { loss: f })
    }

    pub fn probability(&self) -> f64 {
        self.loss
    }

    pub fn drops(&self, rng: &mut RandomSource) -> bool {
        self.loss > 0.0 && rng.bernoulli(self.loss)
    }
}

/// One declared measurement result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    Zero,
    One,
    Lost,
}

impl Outcome {
    pub fn from_bit(bit: u8) -> Result<Self> {
        match bit {
            0 => Ok(Outcome::Zero),
            1 => Ok(Outcome::One),
            _ => Err(Error::InvalidArgument(format!(
                "outcome bit must be 0 or 1, got {bit}"
            ))),
        }
    }

    pub fn bit(&self) -> Option<u8> {
        match self {
            Outcome::Zero => Some(0),
            Outcome::One => Some(1),
            Outcome::Lost => None,
        }
    }

    pub fn is_lost(&self) -> bool {
        matches!(self, Outcome::Lost)
    }

    fn to_byte(self) -> u8 {
        match self {
            Outcome::Zero => 0x00,
            Outcome::One => 0x01,
            Outcome::Lost => 0x02,
        }
    }

    fn from_byte(byte: u8) -> Result<Self> {
        match byte {
            0x00 => Ok(Outcome::Zero),
            0x01 => Ok(Outcome::One),
            0x02 => Ok(Outcome::Lost),
            other => Err(Error::MalformedMessage(format!(
                "invalid outcome byte 0x{other:02x}"
            ))),
        }
    }
}

/// Alice's per-state declarations, one entry per prepared state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeRecord {
    entries: Vec<Outcome>,
}

impl OutcomeRecord {
    pub fn new(entries: Vec<Outcome>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("empty outcome record".into()));
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Outcome] {
        &self.entries
    }

    pub fn entry(&self, k: usize) -> Outcome {
        self.entries[k]
    }

    pub fn lost_positions(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, o)| o.is_lost())
            .map(|(k, _)| k)
            .collect()
    }

    pub fn loss_fraction(&self) -> f64 {
        self.lost_positions().len() as f64 / self.entries.len() as f64
    }

    /// One byte per entry: 0x00, 0x01, or 0x02 for Lost.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.entries.iter().map(|o| o.to_byte()).collect()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let entries = bytes
            .iter()
            .map(|&b| Outcome::from_byte(b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

/// Measures every state in the basis for `bit`, recording losses drawn
/// from the loss model at the commitment point.
pub fn alice_commit(
    bit: u8,
    states: &[PureState],
    rng: &mut RandomSource,
    noise: &NoiseModel,
    loss: &LossModel,
) -> Result<OutcomeRecord> {
    let basis = Basis::for_bit(bit)?;
    if states.is_empty() {
        return Err(Error::InvalidArgument("no states to measure".into()));
    }
    let mut entries = Vec::with_capacity(states.len());
    for state in states {
        if loss.drops(rng) {
            entries.push(Outcome::Lost);
            continue;
        }
        let rho = noise.apply(&projector(state))?;
        let outcome = born_sample(&rho, basis.povm(), rng)?;
        entries.push(Outcome::from_bit(outcome as u8)?);
    }
    OutcomeRecord::new(entries)
}

/// A pre-shared one-time pad together with its fixed route.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PadChannel {
    sender: String,
    receiver: String,
    emit: EventPoint,
    receive: EventPoint,
    pad: Vec<u8>,
    used: bool,
}

impl PadChannel {
    /// Draws a fresh uniformly random pad of `len` bytes for the route.
    pub fn generate(
        len: usize,
        sender: impl Into<String>,
        receiver: impl Into<String>,
        emit: EventPoint,
        receive: EventPoint,
        rng: &mut RandomSource,
    ) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidArgument("pad length must be ≥ 1".into()));
        }
        let mut pad = vec![0u8; len];
        rng.fill_bytes(&mut pad);
        Ok(Self {
            sender: sender.into(),
            receiver: receiver.into(),
            emit,
            receive,
            pad,
            used: false,
        })
    }

    pub fn pad_len(&self) -> usize {
        self.pad.len()
    }

    pub fn is_used(&self) -> bool {
        self.used
    }

    pub fn sender(&self) -> &str {
        &self.sender
    }

    pub fn receiver(&self) -> &str {
        &self.receiver
    }

    pub fn route(&self) -> (EventPoint, EventPoint) {
        (self.emit, self.receive)
    }
}

/// What came out of one relay attempt: the ciphertext that crossed the
/// channel, the delivery result, and the record recovered at the wing if
/// delivery succeeded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelayedRecord {
    pub ciphertext: Vec<u8>,
    pub delivery: DeliveryResult,
    pub decrypted: Option<OutcomeRecord>,
}

/// Encrypts `record` with the channel's pad, consumes the pad, and
/// attempts causal delivery; the wing decrypts with its pad copy.
pub fn relay_outcomes(record: &OutcomeRecord, channel: &mut PadChannel) -> Result<RelayedRecord> {
    if channel.used {
        return Err(Error::PadReused);
    }
    let plaintext = record.to_bytes();
    if channel.pad.len() < plaintext.len() {
        return Err(Error::PadTooShort {
            pad: channel.pad.len(),
            needed: plaintext.len(),
        });
    }
    channel.used = true;
    let ciphertext: Vec<u8> = plaintext
        .iter()
        .zip(&channel.pad)
        .map(|(m, k)| m ^ k)
        .collect();
    let message = Message::new(channel.sender.clone(), channel.receiver.clone(), ciphertext.clone());
    let delivery = deliver(&message, &channel.emit, &channel.receive)?;
    let decrypted = if delivery.is_delivered() {
        let recovered: Vec<u8> = ciphertext
            .iter()
            .zip(&channel.pad)
            .map(|(c, k)| c ^ k)
            .collect();
        Some(OutcomeRecord::from_bytes(&recovered)?)
    } else {
        None
    };
    Ok(RelayedRecord {
        ciphertext,
        delivery,
        decrypted,
    })
}

/// What one wing announces at unveiling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnveilingClaim {
    pub wing: Wing,
    pub claimed_bit: u8,
    pub outcomes: OutcomeRecord,
}

/// Bob's decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decision {
    Accept,
    RejectWingMismatch,
    RejectInconsistent,
    RejectTiming,
}

/// Per-wing consistency measurements against the prepared states.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct WingReport {
    pub claimed_bit: u8,
    pub loss_fraction: f64,
    pub checked_positions: usize,
    pub mismatch_positions: Vec<usize>,
    pub error_fraction: f64,
}

/// Everything Bob measured while deciding.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct VerdictDiagnostics {
    pub records_identical: bool,
    pub record_mismatch_positions: Vec<usize>,
    pub q0: WingReport,
    pub q1: WingReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub decision: Decision,
    pub diagnostics: VerdictDiagnostics,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.decision == Decision::Accept
    }

    pub(crate) fn timing_failure() -> Self {
        Self {
            decision: Decision::RejectTiming,
            diagnostics: VerdictDiagnostics::default(),
        }
    }
}

/// Grades one wing's record against the preparation: positions whose
/// prepared state is an eigenstate of the claimed basis must carry that
/// eigenstate's bit; lost and conjugate-basis positions are unconstrained.
pub fn wing_consistency(
    record: &OutcomeRecord,
    claimed_bit: u8,
    prepared: &PreparedStates,
) -> Result<WingReport> {
    if record.len() != prepared.n() {
        return Err(Error::DimensionMismatch {
            left: record.len(),
            right: prepared.n(),
        });
    }
    let basis = Basis::for_bit(claimed_bit)?;
    let mut checked_positions = 0usize;
    let mut mismatch_positions = Vec::new();
    for k in 0..record.len() {
        let outcome = record.entry(k);
        if outcome.is_lost() {
            continue;
        }
        if let Some(expected) = basis.outcome_for_index(prepared.index(k)) {
            checked_positions += 1;
            if outcome.bit() != Some(expected) {
                mismatch_positions.push(k);
            }
        }
    }
    let error_fraction = if checked_positions > 0 {
        mismatch_positions.len() as f64 / checked_positions as f64
    } else {
        0.0
    };
    Ok(WingReport {
        claimed_bit,
        loss_fraction: record.loss_fraction(),
        checked_positions,
        mismatch_positions,
        error_fraction,
    })
}

/// Bob's acceptance decision over both wings' claims, in check order:
/// identical claims across wings, loss within `max_loss`, then in-basis
/// error fraction within `tolerance`.
pub fn bob_verify(
    claim0: &UnveilingClaim,
    claim1: &UnveilingClaim,
    prepared: &PreparedStates,
    tolerance: f64,
    max_loss: f64,
) -> Result<Verdict> {
    if claim0.wing != Wing::Q0 || claim1.wing != Wing::Q1 {
        return Err(Error::InvalidArgument(
            "claims must come from Q0 and Q1 respectively".into(),
        ));
    }
    if !(0.0..1.0).contains(&tolerance) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must lie in [0,1), got {tolerance}"
        )));
    }
    if !(0.0..1.0).contains(&max_loss) {
        return Err(Error::InvalidArgument(format!(
            "max_loss must lie in [0,1), got {max_loss}"
        )));
    }
    let q0 = wing_consistency(&claim0.outcomes, claim0.claimed_bit, prepared)?;
    let q1 = wing_consistency(&claim1.outcomes, claim1.claimed_bit, prepared)?;

    let record_mismatch_positions: Vec<usize> = (0..prepared.n())
        .filter(|&k| claim0.outcomes.entry(k) != claim1.outcomes.entry(k))
        .collect();
    let records_identical = record_mismatch_positions.is_empty();

    let decision = if claim0.claimed_bit != claim1.claimed_bit || !records_identical {
        Decision::RejectWingMismatch
    } else if q0.loss_fraction > max_loss || q0.error_fraction > tolerance {
        Decision::RejectInconsistent
    } else {
        Decision::Accept
    };

    Ok(Verdict {
        decision,
        diagnostics: VerdictDiagnostics {
            records_identical,
            record_mismatch_positions,
            q0,
            q1,
        },
    })
}
