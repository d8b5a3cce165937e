use crate::cdynamics::KickParams;
use crate::error::{Error, Result};

/// Which rotor of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Heavy,
    Light,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::Heavy => Subsystem::Light,
            Subsystem::Light => Subsystem::Heavy,
        }
    }
}

/// Truncated momentum bases of the two rotors.
///
/// Basis index `j` of a rotor carries the momentum `hbar_eff * (m_offset + j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertConfig {
    pub d_heavy: usize,
    pub d_light: usize,
    pub hbar_eff: f64,
    pub m_offset_heavy: i64,
    pub m_offset_light: i64,
}

impl HilbertConfig {
    pub fn new(
        d_heavy: usize,
        d_light: usize,
        hbar_eff: f64,
        m_offset_heavy: i64,
        m_offset_light: i64,
    ) -> Result<Self> {
        let cfg = HilbertConfig {
            d_heavy,
            d_light,
            hbar_eff,
            m_offset_heavy,
            m_offset_light,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Both rotors cover the action window `[lo, hi)` in steps of `hbar_eff`.
    ///
    /// The window edges must be integer multiples of `hbar_eff`.
    pub fn from_window(lo: f64, hi: f64, hbar_eff: f64) -> Result<Self> {
        if !(hbar_eff > 0.0) || !hbar_eff.is_finite() {
            return Err(Error::config(format!("hbar_eff must be positive, got {hbar_eff}")));
        }
        if !(hi > lo) {
            return Err(Error::config(format!("empty action window [{lo}, {hi})")));
        }
        let lo_q = quanta(lo, hbar_eff).ok_or_else(|| {
            Error::config(format!(
                "window edge {lo} is not a multiple of hbar_eff = {hbar_eff}"
            ))
        })?;
        let hi_q = quanta(hi, hbar_eff).ok_or_else(|| {
            Error::config(format!(
                "window edge {hi} is not a multiple of hbar_eff = {hbar_eff}"
            ))
        })?;
        let d = (hi_q - lo_q) as usize;
        Self::new(d, d, hbar_eff, lo_q, lo_q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_heavy < 2 || self.d_light < 2 {
            return Err(Error::config(format!(
                "basis dimensions must be at least 2, got {}x{}",
                self.d_heavy, self.d_light
            )));
        }
        if !(self.hbar_eff > 0.0) || !self.hbar_eff.is_finite() {
            return Err(Error::config(format!(
                "hbar_eff must be positive, got {}",
                self.hbar_eff
            )));
        }
        Ok(())
    }

    pub fn dim(&self, which: Subsystem) -> usize {
        match which {
            Subsystem::Heavy => self.d_heavy,
            Subsystem::Light => self.d_light,
        }
    }

    pub fn offset(&self, which: Subsystem) -> i64 {
        match which {
            Subsystem::Heavy => self.m_offset_heavy,
            Subsystem::Light => self.m_offset_light,
        }
    }

    /// Momentum quantum number of basis index `j`.
    pub fn quantum_number(&self, which: Subsystem, j: usize) -> i64 {
        self.offset(which) + j as i64
    }

    /// Momentum (action units) of basis index `j`.
    pub fn momentum(&self, which: Subsystem, j: usize) -> f64 {
        self.hbar_eff * self.quantum_number(which, j) as f64
    }

    /// Basis index holding quantum number `m`, if inside the window.
    pub fn index_of(&self, which: Subsystem, m: i64) -> Option<usize> {
        let j = m - self.offset(which);
        (0..self.dim(which) as i64).contains(&j).then_some(j as usize)
    }

    /// Total joint dimension `d_heavy * d_light`.
    pub fn joint_dim(&self) -> usize {
        self.d_heavy * self.d_light
    }
}

/// `x / hbar` when it is an integer (relative tolerance 1e-9).
pub(crate) fn quanta(x: f64, hbar: f64) -> Option<i64> {
    let q = x / hbar;
    let r = q.round();
    ((q - r).abs() <= 1e-9 * r.abs().max(1.0)).then_some(r as i64)
}

/// One kick period of the coupled rotors: the classical parameters plus the
/// quantum representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetSpec {
    pub kick: KickParams,
    pub hilbert: HilbertConfig,
}

impl FloquetSpec {
    pub fn new(kick: KickParams, hilbert: HilbertConfig) -> Result<Self> {
        kick.validate()?;
        hilbert.validate()?;
        Ok(FloquetSpec { kick, hilbert })
    }

    /// Kick strength divided by `hbar_eff`, the Bessel argument of the kick.
    pub fn kick_phase_scale(&self) -> f64 {
        self.kick.k / self.hilbert.hbar_eff
    }
}

/// Initial state of one rotor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RotorInit {
    /// Momentum eigenstate with quantum number `m` (uniform angle).
    Eigenstate { m: i64 },
    /// Gaussian wavepacket. `center_m` and `width_m` are in momentum quanta;
    /// `width_m` is the standard deviation of the momentum distribution.
    Gaussian {
        center_m: f64,
        angle_center: f64,
        width_m: f64,
    },
}

/// Initial product state `|heavy> |light>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialStateSpec {
    pub heavy: RotorInit,
    pub light: RotorInit,
}

impl InitialStateSpec {
    pub fn eigenstates(m_heavy: i64, m_light: i64) -> Self {
        InitialStateSpec {
            heavy: RotorInit::Eigenstate { m: m_heavy },
            light: RotorInit::Eigenstate { m: m_light },
        }
    }

    pub fn wavepackets(
        centers: (f64, f64),
        angle_centers: (f64, f64),
        widths: (f64, f64),
    ) -> Self {
        InitialStateSpec {
            heavy: RotorInit::Gaussian {
                center_m: centers.0,
                angle_center: angle_centers.0,
                width_m: widths.0,
            },
            light: RotorInit::Gaussian {
                center_m: centers.1,
                angle_center: angle_centers.1,
                width_m: widths.1,
            },
        }
    }

    pub fn rotor(&self, which: Subsystem) -> &RotorInit {
        match which {
            Subsystem::Heavy => &self.heavy,
            Subsystem::Light => &self.light,
        }
    }

    /// Nearest total momentum quantum number of the initial state.
    pub fn total_quantum_number(&self) -> i64 {
        let centre = |r: &RotorInit| match *r {
            RotorInit::Eigenstate { m } => m as f64,
            RotorInit::Gaussian { center_m, .. } => center_m,
        };
        (centre(&self.heavy) + centre(&self.light)).round() as i64
    }

    /// True when both rotors start in momentum eigenstates, so the state
    /// stays on a single total-momentum block.
    pub fn is_single_block(&self) -> bool {
        matches!(
            (self.heavy, self.light),
            (RotorInit::Eigenstate { .. }, RotorInit::Eigenstate { .. })
        )
    }
}
