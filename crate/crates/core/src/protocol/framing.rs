//! Length-prefixed binary frames and a two-thread protocol runner.
//!
//! Frame layout, big-endian: `layer: u16`, `sender: u8` (0 Alice, 1 Bob),
//! `length: u16` in bits, then the payload packed MSB-first in
//! `ceil(length / 8)` bytes. Payloads longer than `u16::MAX` bits span
//! several frames of the same layer.

use std::io::{self, Read, Write};
use std::os::unix::net::UnixStream;

use crate::error::{domain, Result};

use super::compile::{assemble_outputs, Message, Party, PartyState, ProtocolSpec, Transcript};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub layer: u16,
    pub sender: u8,
    pub bits: Vec<bool>,
}

pub const MAX_FRAME_BITS: usize = u16::MAX as usize;

pub fn write_frame<W: Write>(out: &mut W, frame: &Frame) -> io::Result<()> {
    if frame.bits.len() > MAX_FRAME_BITS {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "frame payload too long"));
    }
    let mut buf = Vec::with_capacity(5 + frame.bits.len().div_ceil(8));
    buf.extend_from_slice(&frame.layer.to_be_bytes());
    buf.push(frame.sender);
    buf.extend_from_slice(&(frame.bits.len() as u16).to_be_bytes());
    for chunk in frame.bits.chunks(8) {
        let byte = chunk
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)));
        buf.push(byte);
    }
    out.write_all(&buf)
}

pub fn read_frame<R: Read>(input: &mut R) -> io::Result<Frame> {
    let mut head = [0u8; 5];
    input.read_exact(&mut head)?;
    let layer = u16::from_be_bytes([head[0], head[1]]);
    let sender = head[2];
    let len = u16::from_be_bytes([head[3], head[4]]) as usize;
    let mut payload = vec![0u8; len.div_ceil(8)];
    input.read_exact(&mut payload)?;
    let bits = (0..len).map(|i| (payload[i / 8] >> (7 - i % 8)) & 1 == 1).collect();
    Ok(Frame { layer, sender, bits })
}

/// Frames carrying one message.
pub fn frames_for(layer: usize, sender: Party, bits: &[bool]) -> Result<Vec<Frame>> {
    let layer = u16::try_from(layer).map_err(|_| domain(format!("layer {layer} does not fit a frame header")))?;
    let chunks: Vec<&[bool]> = if bits.is_empty() {
        vec![bits]
    } else {
        bits.chunks(MAX_FRAME_BITS).collect()
    };
    Ok(chunks
        .into_iter()
        .map(|c| Frame {
            layer,
            sender: sender.code(),
            bits: c.to_vec(),
        })
        .collect())
}

fn io_err(e: io::Error) -> crate::error::Error {
    crate::error::Error::Io(e)
}

/// Run Alice and Bob on separate threads connected by a local socket pair.
///
/// The transcript is the sequence of frames Alice receives, reassembled per
/// layer; it must equal the in-process transcript.
pub fn execute_two_party(
    spec: &ProtocolSpec,
    x: &[bool],
    y: &[bool],
    randomness: &[bool],
) -> Result<(Vec<bool>, Transcript)> {
    let (mut alice_end, mut bob_end) = UnixStream::pair()?;
    let outs = spec.circuit.output_wires();
    std::thread::scope(|scope| {
        let bob = scope.spawn(|| -> Result<Vec<Option<bool>>> {
            let mut me = PartyState::new(spec, Party::Bob, y, randomness)?;
            for layer in 0..spec.depth() {
                if let Some(bits) = me.outgoing(layer)? {
                    for f in frames_for(layer, Party::Bob, &bits)? {
                        write_frame(&mut bob_end, &f).map_err(io_err)?;
                    }
                }
                me.step(layer, None)?;
            }
            bob_end.flush()?;
            Ok(outs.iter().map(|&w| me.known(w)).collect())
        });

        let alice = (|| -> Result<(Vec<Option<bool>>, Transcript)> {
            let mut me = PartyState::new(spec, Party::Alice, x, randomness)?;
            let mut transcript = Transcript::default();
            for layer in 0..spec.depth() {
                let expected = me.expects(layer);
                if expected == 0 {
                    me.step(layer, None)?;
                    continue;
                }
                let mut bits = Vec::with_capacity(expected);
                while bits.len() < expected {
                    let f = read_frame(&mut alice_end).map_err(io_err)?;
                    if f.layer as usize != layer || Party::from_code(f.sender) != Some(Party::Bob) {
                        return Err(domain(format!(
                            "frame for layer {} from sender {} while waiting on layer {layer}",
                            f.layer, f.sender
                        )));
                    }
                    bits.extend(f.bits);
                }
                if bits.len() != expected {
                    return Err(domain(format!("layer {layer}: received {} bits, expected {expected}", bits.len())));
                }
                me.step(layer, Some(&bits))?;
                transcript.messages.push(Message {
                    layer,
                    sender: Party::Bob,
                    bits,
                });
            }
            Ok((outs.iter().map(|&w| me.known(w)).collect(), transcript))
        })();

        let bob_out = bob.join().map_err(|_| domain("Bob's thread panicked"))??;
        let (alice_out, transcript) = alice?;
        Ok((assemble_outputs(spec, &alice_out, &bob_out)?, transcript))
    })
}
