//! Dense state-vector engine for the coined walk on a line.
//!
//! The walker carries a two-level chirality encoded as photon polarization:
//! `|H>` is the right-moving component and `|V>` the left-moving one. One
//! step applies the coin to every site and then moves each component by one
//! site in its direction. Coin-before-shift is the normative ordering.
//!
//! Storage is a contiguous array covering `start - capacity ..= start + capacity`,
//! allocated once. Only sites of the parity reachable after `step_count` steps
//! are ever touched, so amplitudes on the other parity stay exactly zero.

use std::f64::consts::FRAC_PI_8;

use crate::{Complex, Distribution, Error, Result};

/// Entrywise tolerance on `m^dagger m - I` for a matrix to count as unitary.
pub const UNITARITY_TOLERANCE: f64 = 1e-14;

/// Polarization (chirality) amplitudes at a single lattice site.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoinVector {
    /// Horizontal polarization, the right-moving chirality.
    pub h: Complex,
    /// Vertical polarization, the left-moving chirality.
    pub v: Complex,
}

impl CoinVector {
    pub const ZERO: CoinVector = CoinVector {
        h: Complex::new(0.0, 0.0),
        v: Complex::new(0.0, 0.0),
    };

    pub const fn new(h: Complex, v: Complex) -> Self {
        CoinVector { h, v }
    }

    pub const fn horizontal() -> Self {
        CoinVector::new(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
    }

    pub const fn vertical() -> Self {
        CoinVector::new(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0))
    }

    /// Horizontal part only, vertical amplitude set to zero.
    pub fn h_part(&self) -> Self {
        CoinVector::new(self.h, Complex::new(0.0, 0.0))
    }

    /// Vertical part only, horizontal amplitude set to zero.
    pub fn v_part(&self) -> Self {
        CoinVector::new(Complex::new(0.0, 0.0), self.v)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.h.norm_sqr() + self.v.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.h.is_finite() && self.v.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.h == Complex::new(0.0, 0.0) && self.v == Complex::new(0.0, 0.0)
    }

    pub fn scale(&self, factor: Complex) -> Self {
        CoinVector::new(self.h * factor, self.v * factor)
    }
}

impl std::ops::Add for CoinVector {
    type Output = CoinVector;

    fn add(self, rhs: CoinVector) -> CoinVector {
        CoinVector::new(self.h + rhs.h, self.v + rhs.v)
    }
}

/// A 2x2 unitary acting on [`CoinVector`]s, row-major in the `(H, V)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator {
    m: [[Complex; 2]; 2],
}

impl CoinOperator {
    /// Wraps a matrix after checking `m^dagger m = I` entrywise within
    /// [`UNITARITY_TOLERANCE`].
    pub fn new(m: [[Complex; 2]; 2]) -> Result<Self> {
        if m.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::NonUnitary {
                deviation: f64::NAN,
            });
        }
        let deviation = unitarity_deviation(&m);
        if deviation > UNITARITY_TOLERANCE {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(CoinOperator { m })
    }

    /// Jones matrix of an ideal half-wave plate with its axis at
    /// `axis_angle` radians from horizontal:
    /// `[[cos 2a, sin 2a], [sin 2a, -cos 2a]]`.
    pub fn half_wave_plate(axis_angle: f64) -> Self {
        let (s, c) = (2.0 * axis_angle).sin_cos();
        CoinOperator {
            m: [
                [Complex::new(c, 0.0), Complex::new(s, 0.0)],
                [Complex::new(s, 0.0), Complex::new(-c, 0.0)],
            ],
        }
    }

    /// The Hadamard coin, a half-wave plate at 22.5 degrees.
    pub fn hadamard() -> Self {
        CoinOperator::half_wave_plate(FRAC_PI_8)
    }

    pub fn identity() -> Self {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        CoinOperator {
            m: [[one, zero], [zero, one]],
        }
    }

    pub fn matrix(&self) -> [[Complex; 2]; 2] {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        CoinOperator {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn determinant(&self) -> Complex {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entry of `|m^dagger m - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.m)
    }

    #[inline]
    pub fn apply(&self, x: &CoinVector) -> CoinVector {
        let m = &self.m;
        CoinVector {
            h: m[0][0] * x.h + m[0][1] * x.v,
            v: m[1][0] * x.h + m[1][1] * x.v,
        }
    }
}

fn flush_subnormal(x: CoinVector) -> CoinVector {
    let f = |c: f64| if c.abs() < f64::MIN_POSITIVE { 0.0 } else { c };
    CoinVector {
        h: Complex::new(f(x.h.re), f(x.h.im)),
        v: Complex::new(f(x.v.re), f(x.v.im)),
    }
}

fn unitarity_deviation(m: &[[Complex; 2]; 2]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            let dot = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - Complex::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Half-wave-plate coin at `axis_angle` radians. See
/// [`CoinOperator::half_wave_plate`].
pub fn hwp_coin(axis_angle: f64) -> CoinOperator {
    CoinOperator::half_wave_plate(axis_angle)
}

/// Parameters of the input photon `cos(theta)|H> + e^{i phi} sin(theta)|V>`
/// placed at `start_position`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialSpec {
    pub theta: f64,
    pub phi: f64,
    pub start_position: i64,
}

impl InitialSpec {
    pub fn new(theta: f64, phi: f64) -> Self {
        InitialSpec {
            theta,
            phi,
            start_position: 0,
        }
    }

    pub fn horizontal() -> Self {
        InitialSpec::new(0.0, 0.0)
    }

    pub fn vertical() -> Self {
        InitialSpec::new(std::f64::consts::FRAC_PI_2, 0.0)
    }

    /// `(|H> + i|V>)/sqrt(2)`, which gives a mirror-symmetric Hadamard walk.
    pub fn symmetric() -> Self {
        InitialSpec::new(std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2)
    }

    pub fn at(mut self, start_position: i64) -> Self {
        self.start_position = start_position;
        self
    }

    pub fn coin_vector(&self) -> CoinVector {
        let (s, c) = self.theta.sin_cos();
        CoinVector::new(Complex::new(c, 0.0), Complex::from_polar(1.0, self.phi) * s)
    }
}

/// Dense walk state with a fixed step capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    amplitudes: Vec<CoinVector>,
    start_position: i64,
    step_count: usize,
    capacity: usize,
}

impl WalkState {
    /// Places `spec.coin_vector()` at `spec.start_position` with room for
    /// `capacity_steps` shifts.
    pub fn new(spec: &InitialSpec, capacity_steps: usize) -> Self {
        let mut amplitudes = vec![CoinVector::ZERO; 2 * capacity_steps + 1];
        amplitudes[capacity_steps] = spec.coin_vector();
        WalkState {
            amplitudes,
            start_position: spec.start_position,
            step_count: 0,
            capacity: capacity_steps,
        }
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn start_position(&self) -> i64 {
        self.start_position
    }

    /// Lowest position covered by the allocated array.
    pub fn min_position(&self) -> i64 {
        self.start_position - self.capacity as i64
    }

    pub fn max_position(&self) -> i64 {
        self.start_position + self.capacity as i64
    }

    /// Raw amplitude array, index 0 at [`WalkState::min_position`].
    pub fn amplitudes(&self) -> &[CoinVector] {
        &self.amplitudes
    }

    /// Amplitude at `position`, zero outside the allocated range.
    pub fn amplitude(&self, position: i64) -> CoinVector {
        self.index(position)
            .map(|i| self.amplitudes[i])
            .unwrap_or(CoinVector::ZERO)
    }

    fn index(&self, position: i64) -> Option<usize> {
        let offset = position - self.min_position();
        (0..self.amplitudes.len() as i64)
            .contains(&offset)
            .then_some(offset as usize)
    }

    /// Array indices of the sites reachable after the current step count:
    /// `start - k, start - k + 2, ..., start + k`.
    fn occupied(&self) -> impl Iterator<Item = usize> + Clone {
        let lo = self.capacity - self.step_count;
        (lo..=self.capacity + self.step_count).step_by(2)
    }

    /// Positions of the sites reachable after the current step count.
    pub fn occupied_positions(&self) -> impl Iterator<Item = i64> + '_ {
        let min = self.min_position();
        self.occupied().map(move |i| min + i as i64)
    }

    pub fn for_each_occupied_mut(&mut self, mut f: impl FnMut(i64, &mut CoinVector)) {
        let min = self.min_position();
        for i in self.occupied() {
            f(min + i as i64, &mut self.amplitudes[i]);
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        let terms: Vec<f64> = self
            .occupied()
            .map(|i| self.amplitudes[i].norm_sqr())
            .collect();
        crate::stats::pairwise_sum(&terms)
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes.iter().all(CoinVector::is_finite)
    }

    /// Components below `f64::MIN_POSITIVE` are flushed to zero: they carry
    /// probabilities under 1e-600, and subnormal arithmetic in the far tails
    /// otherwise dominates the cost of long walks.
    pub fn apply_coin(&mut self, coin: &CoinOperator) {
        for i in self.occupied() {
            self.amplitudes[i] = flush_subnormal(coin.apply(&self.amplitudes[i]));
        }
    }

    /// Moves every `H` amplitude one site right and every `V` amplitude one
    /// site left.
    pub fn shift(&mut self) -> Result<()> {
        if self.step_count >= self.capacity {
            return Err(Error::Capacity {
                capacity: self.capacity,
                requested: self.step_count + 1,
            });
        }
        let c = self.capacity;
        let k = self.step_count;
        // New sites have the opposite parity of the old ones, so reads and
        // writes never alias.
        for j in 0..=k + 1 {
            let y = c - k - 1 + 2 * j;
            let h = if j > 0 {
                self.amplitudes[y - 1].h
            } else {
                Complex::new(0.0, 0.0)
            };
            let v = if j <= k {
                self.amplitudes[y + 1].v
            } else {
                Complex::new(0.0, 0.0)
            };
            self.amplitudes[y] = CoinVector::new(h, v);
        }
        for i in (c - k..=c + k).step_by(2) {
            self.amplitudes[i] = CoinVector::ZERO;
        }
        self.step_count += 1;
        Ok(())
    }

    /// Inverse of [`WalkState::shift`].
    pub fn unshift(&mut self) -> Result<()> {
        if self.step_count == 0 {
            return Err(Error::InvalidArgument(
                "cannot undo a shift on a state with step_count 0".into(),
            ));
        }
        let c = self.capacity;
        let k = self.step_count;
        for j in 0..k {
            let y = c - (k - 1) + 2 * j;
            let h = self.amplitudes[y + 1].h;
            let v = self.amplitudes[y - 1].v;
            self.amplitudes[y] = CoinVector::new(h, v);
        }
        for i in (c - k..=c + k).step_by(2) {
            self.amplitudes[i] = CoinVector::ZERO;
        }
        self.step_count -= 1;
        Ok(())
    }

    /// One walk step: coin, then shift.
    pub fn step(&mut self, coin: &CoinOperator) -> Result<()> {
        if self.step_count >= self.capacity {
            return Err(Error::Capacity {
                capacity: self.capacity,
                requested: self.step_count + 1,
            });
        }
        self.apply_coin(coin);
        self.shift()
    }

    /// Undoes one [`WalkState::step`] made with `coin`.
    pub fn unstep(&mut self, coin: &CoinOperator) -> Result<()> {
        self.unshift()?;
        self.apply_coin(&coin.adjoint());
        Ok(())
    }

    /// Runs `n_steps` steps. Fails up front, leaving the state untouched, if
    /// the capacity would be exceeded.
    pub fn evolve(&mut self, coin: &CoinOperator, n_steps: usize) -> Result<()> {
        let requested = self.step_count + n_steps;
        if requested > self.capacity {
            return Err(Error::Capacity {
                capacity: self.capacity,
                requested,
            });
        }
        for _ in 0..n_steps {
            self.step(coin)?;
        }
        Ok(())
    }

    /// Position probabilities `|a_H(x)|^2 + |a_V(x)|^2` over
    /// `start - k ..= start + k`.
    pub fn distribution(&self) -> Distribution {
        let k = self.step_count;
        let lo = self.capacity - k;
        let probabilities = self.amplitudes[lo..=self.capacity + k]
            .iter()
            .map(CoinVector::norm_sqr)
            .collect();
        Distribution::from_dense(
            self.start_position,
            self.start_position - k as i64,
            probabilities,
            k,
        )
    }
}

/// Fresh state for `spec` with room for `capacity_steps` steps.
pub fn make_initial(spec: &InitialSpec, capacity_steps: usize) -> WalkState {
    WalkState::new(spec, capacity_steps)
}

/// Convenience: evolve a fresh state by `n_steps` and return its distribution.
pub fn run_walk(spec: &InitialSpec, coin: &CoinOperator, n_steps: usize) -> Result<Distribution> {
    let mut state = WalkState::new(spec, n_steps);
    state.evolve(coin, n_steps)?;
    Ok(state.distribution())
}
