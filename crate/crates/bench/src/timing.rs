use std::time::Instant;

/// Median-of-N wall-clock timing with an optional discarded warm-up run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimingProtocol {
    pub warmup: bool,
    pub runs: usize,
}

impl Default for TimingProtocol {
    fn default() -> Self {
        Self { warmup: true, runs: 3 }
    }
}

impl TimingProtocol {
    /// A single timed run, for work too expensive to repeat.
    pub fn single() -> Self {
        Self { warmup: false, runs: 1 }
    }

    /// Runs `f` per the protocol and returns the last result with the
    /// median elapsed seconds.
    pub fn measure<T, E>(&self, mut f: impl FnMut() -> Result<T, E>) -> Result<(T, f64), E> {
        if self.warmup {
            f()?;
        }
        let runs = self.runs.max(1);
        let mut times = Vec::with_capacity(runs);
        let mut last = None;
        for _ in 0..runs {
            let start = Instant::now();
            let out = f()?;
            times.push(start.elapsed().as_secs_f64());
            last = Some(out);
        }
        times.sort_by(f64::total_cmp);
        let median = if runs % 2 == 1 {
            times[runs / 2]
        } else {
            (times[runs / 2 - 1] + times[runs / 2]) / 2.0
        };
        Ok((last.expect("at least one run"), median))
    }
}
