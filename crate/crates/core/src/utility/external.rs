//! Utility served by a child process over a line protocol.
//!
//! Request (one line on the child's stdin): `{"subset":[0,2,5]}` with the
//! member indices sorted ascending. Reply (one line on its stdout): a JSON
//! number. Requests are serialized; the child is killed on drop, on timeout
//! and on protocol errors.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use super::UtilityFn;
use crate::error::{Error, Result};
use crate::poset::PlayerSet;

struct ChildIo {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
}

impl ChildIo {
    fn kill(mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

pub struct ExternalUtility {
    command: Vec<String>,
    timeout: Duration,
    io: Mutex<Option<ChildIo>>,
}

/// Spawn `command[0]` with arguments `command[1..]`.
pub fn external_utility(command: &[String], timeout: Duration) -> Result<ExternalUtility> {
    let (program, args) = command
        .split_first()
        .ok_or_else(|| Error::ProcessFailure("empty command".into()))?;
    let mut child = Command::new(program)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::inherit())
        .spawn()
        .map_err(|e| Error::ProcessFailure(format!("cannot start {program}: {e}")))?;
    let stdin = child.stdin.take().expect("piped stdin");
    let stdout = child.stdout.take().expect("piped stdout");
    let (tx, lines) = mpsc::channel();
    thread::spawn(move || {
        for line in BufReader::new(stdout).lines() {
            if tx.send(line).is_err() {
                break;
            }
        }
    });
    Ok(ExternalUtility {
        command: command.to_vec(),
        timeout,
        io: Mutex::new(Some(ChildIo {
            child,
            stdin,
            lines,
        })),
    })
}

fn request_line(s: &PlayerSet) -> String {
    let members: Vec<usize> = s.iter().collect();
    format!("{}\n", serde_json::json!({ "subset": members }))
}

fn parse_reply(line: &str) -> Result<f64> {
    let value: serde_json::Value = serde_json::from_str(line.trim())
        .map_err(|_| Error::ProtocolViolation(format!("reply {line:?} is not a JSON number")))?;
    value
        .as_f64()
        .ok_or_else(|| Error::ProtocolViolation(format!("reply {line:?} is not a JSON number")))
}

impl UtilityFn for ExternalUtility {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        let mut guard = self.io.lock().expect("external utility lock poisoned");
        let io = guard
            .as_mut()
            .ok_or_else(|| Error::ProcessFailure("utility process is no longer running".into()))?;

        let sent = io
            .stdin
            .write_all(request_line(s).as_bytes())
            .and_then(|_| io.stdin.flush());
        let outcome = match sent {
            Err(e) => Err(Error::ProcessFailure(format!("write failed: {e}"))),
            Ok(()) => match io.lines.recv_timeout(self.timeout) {
                Ok(Ok(line)) => parse_reply(&line),
                Ok(Err(e)) => Err(Error::ProcessFailure(format!("read failed: {e}"))),
                Err(RecvTimeoutError::Timeout) => Err(Error::Timeout(self.timeout)),
                Err(RecvTimeoutError::Disconnected) => {
                    Err(Error::ProcessFailure("utility process closed its output".into()))
                }
            },
        };
        if outcome.is_err() {
            if let Some(io) = guard.take() {
                io.kill();
            }
        }
        outcome
    }

    fn descriptor(&self) -> String {
        format!("external:{}", self.command.join(" "))
    }
}

impl Drop for ExternalUtility {
    fn drop(&mut self) {
        if let Ok(mut guard) = self.io.lock() {
            if let Some(io) = guard.take() {
                io.kill();
            }
        }
    }
}
