use crate::qdecoder::ModeSet;
use crate::real::Real;

fn sq_dist<R: Real>(a: [R; 2], b: [R; 2]) -> R {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

/// Mean squared error per mode, `(1/T) sum_t |p_t^(m) - p_t^gt|^2`.
pub fn mode_mse<R: Real>(trajectory: &[[R; 2]], gt: &[[R; 2]]) -> R {
    let t = R::from_usize(gt.len().max(1)).unwrap();
    trajectory.iter().zip(gt).map(|(&p, &g)| sq_dist(p, g)).sum::<R>() / t
}

/// Best-mode MSE plus `lambda` times the mean squared residual over all modes.
pub fn loss<R: Real>(modes: &ModeSet<R>, gt: &[[R; 2]], lambda: R) -> R {
    let best = modes
        .trajectories
        .iter()
        .map(|traj| mode_mse(traj, gt))
        .fold(R::infinity(), R::min);
    let count = modes.residuals.iter().map(Vec::len).sum::<usize>();
    if count == 0 {
        return best;
    }
    let penalty = modes
        .residuals
        .iter()
        .flatten()
        .map(|r| r[0] * r[0] + r[1] * r[1])
        .sum::<R>()
        / R::from_usize(count).unwrap();
    best + lambda * penalty
}
