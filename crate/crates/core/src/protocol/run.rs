//! One full honest protocol run, logged message by message.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::qcore::RandomSource;
use crate::spacetime::{deliver, standard_geometry, DeliveryResult, EventPoint, Geometry, Message};

use super::{
    alice_commit, bob_prepare, bob_verify, relay_outcomes, LossModel, NoiseModel, OutcomeRecord,
    PadChannel, PreparedStates, UnveilingClaim, Verdict, Wing,
};

/// Everything a single run needs, loadable from a configuration file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Number of prepared states.
    pub n: usize,
    /// Committed bit.
    pub bit: u8,
    /// Wing separation x of the standard geometry.
    pub separation: f64,
    /// Depolarizing probability applied before each measurement.
    pub noise: f64,
    /// Independent per-state loss probability.
    pub loss: f64,
    /// Largest acceptable in-basis error fraction.
    pub tolerance: f64,
    /// Largest acceptable declared-loss fraction.
    pub max_loss: f64,
    /// Seed for the run's random source.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 100,
            bit: 0,
            separation: 1.0,
            noise: 0.0,
            loss: 0.0,
            tolerance: 0.0,
            max_loss: 0.0,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be ≥ 1".into()));
        }
        if self.bit > 1 {
            return Err(Error::InvalidArgument(format!(
                "bit must be 0 or 1, got {}",
                self.bit
            )));
        }
        if !self.separation.is_finite() || self.separation <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "separation must be positive, got {}",
                self.separation
            )));
        }
        NoiseModel::depolarizing(self.noise)?;
        LossModel::iid(self.loss)?;
        if !(0.0..1.0).contains(&self.tolerance) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must lie in [0,1), got {}",
                self.tolerance
            )));
        }
        if !(0.0..1.0).contains(&self.max_loss) {
            return Err(Error::InvalidArgument(format!(
                "max_loss must lie in [0,1), got {}",
                self.max_loss
            )));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<Geometry> {
        standard_geometry(self.separation)
    }
}

/// The named posts the two parties staff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Station {
    AliceP,
    AliceQ0,
    AliceQ1,
    BobP,
    BobQ0,
    BobQ1,
    BobFuture,
}

impl Station {
    pub fn name(&self) -> &'static str {
        match self {
            Station::AliceP => "alice@P",
            Station::AliceQ0 => "alice@Q0",
            Station::AliceQ1 => "alice@Q1",
            Station::BobP => "bob@P",
            Station::BobQ0 => "bob@Q0",
            Station::BobQ1 => "bob@Q1",
            Station::BobFuture => "bob@F",
        }
    }
}

impl fmt::Display for Station {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One classical message as it appears in the run log: routing, events,
/// and a digest of the payload rather than the payload itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoggedMessage {
    pub sender: String,
    pub receiver: String,
    pub emitted_at: EventPoint,
    pub received_at: EventPoint,
    pub payload_len: usize,
    pub payload_digest: String,
    pub delivered: bool,
}

fn digest(payload: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(payload);
    hex::encode(hasher.finalize())
}

/// Full record of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transcript {
    pub config: RunConfig,
    pub prepared: PreparedStates,
    pub committed_record: OutcomeRecord,
    pub ciphertext_q0: Vec<u8>,
    pub ciphertext_q1: Vec<u8>,
    pub claims: Option<(UnveilingClaim, UnveilingClaim)>,
    pub messages: Vec<LoggedMessage>,
    pub verdict: Verdict,
}

/// Machine-readable digest of a transcript.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranscriptSummary {
    pub n: usize,
    pub bit: u8,
    pub decision: super::Decision,
    pub accepted: bool,
    pub loss_fraction: f64,
    pub checked_positions: usize,
    pub error_fraction: f64,
    pub messages: usize,
}

impl Transcript {
    pub fn summary(&self) -> TranscriptSummary {
        TranscriptSummary {
            n: self.config.n,
            bit: self.config.bit,
            decision: self.verdict.decision,
            accepted: self.verdict.accepted(),
            loss_fraction: self.verdict.diagnostics.q0.loss_fraction,
            checked_positions: self.verdict.diagnostics.q0.checked_positions,
            error_fraction: self.verdict.diagnostics.q0.error_fraction,
            messages: self.messages.len(),
        }
    }

    /// One line per message: sender, receiver, events, payload digest.
    pub fn message_log(&self) -> String {
        let mut out = String::new();
        for m in &self.messages {
            out.push_str(&format!(
                "{} -> {} | emit ({}, {}, {}, {}) | recv ({}, {}, {}, {}) | {} bytes | sha256:{} | {}\n",
                m.sender,
                m.receiver,
                m.emitted_at.x(),
                m.emitted_at.y(),
                m.emitted_at.z(),
                m.emitted_at.t(),
                m.received_at.x(),
                m.received_at.y(),
                m.received_at.z(),
                m.received_at.t(),
                m.payload_len,
                m.payload_digest,
                if m.delivered { "delivered" } else { "refused" },
            ));
        }
        out
    }
}

struct MessageLog {
    entries: Vec<LoggedMessage>,
    all_delivered: bool,
}

impl MessageLog {
    fn new() -> Self {
        Self {
            entries: Vec::new(),
            all_delivered: true,
        }
    }

    fn record(
        &mut self,
        sender: Station,
        receiver: Station,
        payload: &[u8],
        emitted_at: EventPoint,
        received_at: EventPoint,
    ) -> Result<bool> {
        let message = Message::new(sender.name(), receiver.name(), payload.to_vec());
        let delivered = deliver(&message, &emitted_at, &received_at)?.is_delivered();
        self.entries.push(LoggedMessage {
            sender: sender.name().to_string(),
            receiver: receiver.name().to_string(),
            emitted_at,
            received_at,
            payload_len: payload.len(),
            payload_digest: digest(payload),
            delivered,
        });
        self.all_delivered &= delivered;
        Ok(delivered)
    }

    fn record_relay(
        &mut self,
        channel_sender: &str,
        channel_receiver: &str,
        ciphertext: &[u8],
        route: (EventPoint, EventPoint),
        delivery: &DeliveryResult,
    ) {
        let delivered = delivery.is_delivered();
        self.entries.push(LoggedMessage {
            sender: channel_sender.to_string(),
            receiver: channel_receiver.to_string(),
            emitted_at: route.0,
            received_at: route.1,
            payload_len: ciphertext.len(),
            payload_digest: digest(ciphertext),
            delivered,
        });
        self.all_delivered &= delivered;
    }
}

fn unveiling_payload(bit: u8, record: &OutcomeRecord) -> Vec<u8> {
    let mut payload = Vec::with_capacity(1 + record.len());
    payload.push(bit);
    payload.extend_from_slice(&record.to_bytes());
    payload
}

/// Route taken by each wing's final forward to the comparison point.
struct ForwardRoutes {
    q0_to: EventPoint,
    q1_to: EventPoint,
}

fn run_flow(
    config: &RunConfig,
    rng: &mut RandomSource,
    forwards: Option<ForwardRoutes>,
) -> Result<Transcript> {
    config.validate()?;
    let geometry = config.geometry()?;
    let noise = NoiseModel::depolarizing(config.noise)?;
    let loss = LossModel::iid(config.loss)?;
    let mut log = MessageLog::new();

    // Preparation and commitment both happen at P; the qubit handoff is
    // in-memory, not a logged channel.
    let prepared = bob_prepare(config.n, rng)?;
    let committed_record = alice_commit(config.bit, &prepared.states()?, rng, &noise, &loss)?;

    // The which-states-were-lost report is fixed at P before any unveiling.
    let loss_report: Vec<u8> = committed_record
        .entries()
        .iter()
        .map(|o| if o.is_lost() { 1u8 } else { 0u8 })
        .collect();
    log.record(
        Station::AliceP,
        Station::BobP,
        &loss_report,
        geometry.p(),
        geometry.p(),
    )?;

    // Pre-shared pads carry the outcome record to both wings.
    let mut channel0 = PadChannel::generate(
        config.n,
        Station::AliceP.name(),
        Station::AliceQ0.name(),
        geometry.p(),
        geometry.q0(),
        rng,
    )?;
    let mut channel1 = PadChannel::generate(
        config.n,
        Station::AliceP.name(),
        Station::AliceQ1.name(),
        geometry.p(),
        geometry.q1(),
        rng,
    )?;
    let relay0 = relay_outcomes(&committed_record, &mut channel0)?;
    log.record_relay(
        channel0.sender(),
        channel0.receiver(),
        &relay0.ciphertext,
        channel0.route(),
        &relay0.delivery,
    );
    let relay1 = relay_outcomes(&committed_record, &mut channel1)?;
    log.record_relay(
        channel1.sender(),
        channel1.receiver(),
        &relay1.ciphertext,
        channel1.route(),
        &relay1.delivery,
    );

    let (Some(record0), Some(record1)) = (relay0.decrypted, relay1.decrypted) else {
        return Ok(Transcript {
            config: *config,
            prepared,
            committed_record,
            ciphertext_q0: relay0.ciphertext,
            ciphertext_q1: relay1.ciphertext,
            claims: None,
            messages: log.entries,
            verdict: Verdict::timing_failure(),
        });
    };

    // Unveiling: each wing's agent hands the decrypted record to Bob's
    // local agent, who forwards it to the comparison point.
    let claim0 = UnveilingClaim {
        wing: Wing::Q0,
        claimed_bit: config.bit,
        outcomes: record0,
    };
    let claim1 = UnveilingClaim {
        wing: Wing::Q1,
        claimed_bit: config.bit,
        outcomes: record1,
    };

    let payload0 = unveiling_payload(claim0.claimed_bit, &claim0.outcomes);
    let payload1 = unveiling_payload(claim1.claimed_bit, &claim1.outcomes);
    let unveiled0 = log.record(
        Station::AliceQ0,
        Station::BobQ0,
        &payload0,
        geometry.q0(),
        geometry.q0(),
    )?;
    let unveiled1 = log.record(
        Station::AliceQ1,
        Station::BobQ1,
        &payload1,
        geometry.q1(),
        geometry.q1(),
    )?;

    let future = geometry.joint_future_point();
    let routes = forwards.unwrap_or(ForwardRoutes {
        q0_to: future,
        q1_to: future,
    });
    let forwarded0 = log.record(
        Station::BobQ0,
        Station::BobFuture,
        &payload0,
        geometry.q0(),
        routes.q0_to,
    )?;
    let forwarded1 = log.record(
        Station::BobQ1,
        Station::BobFuture,
        &payload1,
        geometry.q1(),
        routes.q1_to,
    )?;

    let verdict = if unveiled0 && unveiled1 && forwarded0 && forwarded1 {
        bob_verify(&claim0, &claim1, &prepared, config.tolerance, config.max_loss)?
    } else {
        Verdict::timing_failure()
    };

    Ok(Transcript {
        config: *config,
        prepared,
        committed_record,
        ciphertext_q0: relay0.ciphertext,
        ciphertext_q1: relay1.ciphertext,
        claims: Some((claim0, claim1)),
        messages: log.entries,
        verdict,
    })
}

/// Executes prepare → commit → relay → unveil → verify with every message
/// logged against the light cone.
pub fn run_honest(config: &RunConfig, rng: &mut RandomSource) -> Result<Transcript> {
    run_flow(config, rng, None)
}
