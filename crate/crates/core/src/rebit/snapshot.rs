//! Debug dumps of a register: magic `RBS1`, `u32` n, `f64` theta, `u64`
//! step, then 2^n little-endian `f64` amplitudes. Not a stable format.

use std::io::{Read, Write};

use super::{RebitError, RebitState};

const MAGIC: &[u8; 4] = b"RBS1";

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub state: RebitState,
    pub theta: f64,
    pub step: u64,
}

pub fn write_snapshot(w: &mut impl Write, state: &RebitState, theta: f64, step: u64) -> Result<(), RebitError> {
    w.write_all(MAGIC)?;
    w.write_all(&(state.n() as u32).to_le_bytes())?;
    w.write_all(&theta.to_le_bytes())?;
    w.write_all(&step.to_le_bytes())?;
    for a in state.amplitudes() {
        w.write_all(&a.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_snapshot(r: &mut impl Read) -> Result<Snapshot, RebitError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(RebitError::Snapshot("bad magic".into()));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    if n == 0 || n > super::MAX_QUBITS {
        return Err(RebitError::Snapshot(format!("unsupported width {n}")));
    }
    r.read_exact(&mut b8)?;
    let theta = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let step = u64::from_le_bytes(b8);
    let mut amps = Vec::with_capacity(1 << n);
    for _ in 0..1usize << n {
        r.read_exact(&mut b8)?;
        amps.push(f64::from_le_bytes(b8));
    }
    Ok(Snapshot {
        state: RebitState::from_amplitudes(amps)?,
        theta,
        step,
    })
}
