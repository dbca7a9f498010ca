//! Adaptive Simpson quadrature over piecewise-smooth integrands.
//!
//! The integrand may jump or be undefined at designated break points, so
//! every piece that ends at such a point is integrated on a slightly
//! shrunken interval and never sampled there.

/// Inset applied at singular piece ends.
pub const SINGULAR_INSET: f64 = 1e-13;
const MAX_DEPTH: u32 = 48;

/// A piece boundary. `singular` ends are approached but never evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Break {
    pub x: f64,
    pub singular: bool,
}

impl Break {
    pub fn regular(x: f64) -> Self {
        Self { x, singular: false }
    }

    pub fn singular(x: f64) -> Self {
        Self { x, singular: true }
    }
}

struct Simpson<'f, F> {
    f: &'f mut F,
}

impl<F, E> Simpson<'_, F>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, E> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = ((self.f)(lm)?, (self.f)(rm)?);
        let h = (b - a) / 12.0;
        let left = h * (fa + 4.0 * flm + fm);
        let right = h * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        Ok(self.recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + self.recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F, E>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if b <= a {
        return Ok(0.0);
    }
    let (fa, fm, fb) = (f(a)?, f(0.5 * (a + b))?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Simpson { f }.recurse(a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

/// Integrates across consecutive break points, splitting `tol` by width.
///
/// `breaks` must be sorted. Pieces narrower than a few insets are dropped;
/// their contribution is below the inset scale.
pub fn integrate_pieces<F, E>(f: &mut F, breaks: &[Break], tol: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let (Some(first), Some(last)) = (breaks.first(), breaks.last()) else { return Ok(0.0) };
    let span = last.x - first.x;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let lo = if w[0].singular { w[0].x + SINGULAR_INSET } else { w[0].x };
        let hi = if w[1].singular { w[1].x - SINGULAR_INSET } else { w[1].x };
        if hi - lo <= 4.0 * SINGULAR_INSET {
            continue;
        }
        total += adaptive_simpson(f, lo, hi, tol * (w[1].x - w[0].x) / span)?;
    }
    Ok(total)
}
