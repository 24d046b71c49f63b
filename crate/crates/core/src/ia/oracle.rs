//! Symbol-level check of the analytic rate expression, and the analytic
//! per-stream SINR when precoders were designed on mismatched channels.

use rand::Rng;

use super::{NullProjection, ReducedChannel, Selection, SystemConfig};
use crate::channel::{complex_gaussian, qpsk_symbols};
use crate::error::{Error, Result};
use crate::numerics::{dot, norm_sqr, Complex};

/// What one user sees: its desired and interfering reduced channels and the
/// null-space projection it uses.
#[derive(Debug, Clone)]
pub struct UeLink {
    pub g_md: ReducedChannel,
    pub g_mi: ReducedChannel,
    pub null: NullProjection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub n_symbols: usize,
    /// Noise variance; zero switches noise off.
    pub sigma2: f64,
    /// Interferer per-stream energy; zero switches the interferer off.
    pub interferer_es: f64,
}

/// Empirical powers of one stream after projection, averaged over symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamMeasurement {
    pub user: usize,
    pub stream: usize,
    pub desired: f64,
    pub intra_cell: f64,
    pub inter_cell: f64,
    /// Interference energy at the user before projection, `‖G_mi x_i‖²`.
    pub inter_cell_unprojected: f64,
    pub noise: f64,
    /// `desired / mean|everything else|²`.
    pub sinr: f64,
}

/// Transmits QPSK streams through the selected ZF precoders alongside an
/// interferer sending random symbols through its own trunk, projects every
/// user's received vector with its null space, and measures per-stream powers.
pub fn symbol_oracle<R: Rng + ?Sized>(
    rng: &mut R,
    selection: &Selection,
    links: &[UeLink],
    cfg: &SystemConfig,
    settings: OracleSettings,
) -> Result<Vec<StreamMeasurement>> {
    let l = selection.len();
    let n_s = cfg.n_s();
    if let Some(&(u, _)) = selection.streams.iter().find(|(u, _)| *u >= links.len()) {
        return Err(Error::InvalidDimension(format!("no link for user {u}")));
    }
    let amps: Vec<f64> = selection.power.iter().map(|p| (cfg.es * p).sqrt()).collect();
    let unit_cols: Vec<Vec<Complex>> = (0..l).map(|j| selection.unit_column(j)).collect();
    let rows: Vec<Vec<Complex>> = selection.streams.iter().map(|&(u, r)| links[u].null.row(r)).collect();

    let mut desired = vec![0.0; l];
    let mut intra = vec![0.0; l];
    let mut inter = vec![0.0; l];
    let mut unprojected = vec![0.0; l];
    let mut noise = vec![0.0; l];
    let mut disturbance = vec![0.0; l];

    let interferer_amp = settings.interferer_es.sqrt();
    let k = cfg.k;
    for _ in 0..settings.n_symbols {
        let s = qpsk_symbols(rng, l);
        let x_i: Vec<Complex> = qpsk_symbols(rng, n_s).into_iter().map(|z| z * interferer_amp).collect();
        // per-stream reduced-space contributions to x_d
        let parts: Vec<Vec<Complex>> = (0..l)
            .map(|j| unit_cols[j].iter().map(|c| c * amps[j] * s[j]).collect())
            .collect();
        for (idx, &(u, _)) in selection.streams.iter().enumerate() {
            let link = &links[u];
            let v = &rows[idx];
            let w: Vec<Complex> = (0..k)
                .map(|_| {
                    if settings.sigma2 > 0.0 {
                        complex_gaussian(rng, settings.sigma2)
                    } else {
                        Complex::default()
                    }
                })
                .collect();
            let y_inter = link.g_mi.g.matvec(&x_i)?;
            let d = dot(v, &link.g_md.g.matvec(&parts[idx])?);
            let mut other = Complex::default();
            for (j, part) in parts.iter().enumerate() {
                if j != idx {
                    other += dot(v, &link.g_md.g.matvec(part)?);
                }
            }
            let i_c = dot(v, &y_inter);
            let n_c = dot(v, &w);
            desired[idx] += d.norm_sqr();
            intra[idx] += other.norm_sqr();
            inter[idx] += i_c.norm_sqr();
            unprojected[idx] += norm_sqr(&y_inter);
            noise[idx] += n_c.norm_sqr();
            disturbance[idx] += (other + i_c + n_c).norm_sqr();
        }
    }
    let n = settings.n_symbols.max(1) as f64;
    Ok((0..l)
        .map(|j| {
            let (user, stream) = selection.streams[j];
            StreamMeasurement {
                user,
                stream,
                desired: desired[j] / n,
                intra_cell: intra[j] / n,
                inter_cell: inter[j] / n,
                inter_cell_unprojected: unprojected[j] / n,
                noise: noise[j] / n,
                sinr: if disturbance[j] > 0.0 {
                    desired[j] / disturbance[j]
                } else {
                    f64::INFINITY
                },
            }
        })
        .collect())
}

/// Per-stream SINR on the true channels when the selection (null spaces,
/// ZF filter) was computed from estimates. Residual intra-cell leakage and
/// inter-cell leakage through an imperfect null space count as interference.
/// With exact channel knowledge this reduces to `power_l·α_l·sinr_l`.
pub fn analytic_stream_sinr(
    selection: &Selection,
    designed: &[UeLink],
    truth: &[UeLink],
    cfg: &SystemConfig,
    interferer_es: f64,
) -> Result<Vec<f64>> {
    let l = selection.len();
    let unit_cols: Vec<Vec<Complex>> = (0..l).map(|j| selection.unit_column(j)).collect();
    selection
        .streams
        .iter()
        .enumerate()
        .map(|(idx, &(u, r))| {
            let v = designed
                .get(u)
                .ok_or_else(|| Error::InvalidDimension(format!("no link for user {u}")))?
                .null
                .row(r);
            let link = &truth[u];
            let g_row = row_times(&v, &link.g_md);
            let mut signal = 0.0;
            let mut leak = 0.0;
            for (j, col) in unit_cols.iter().enumerate() {
                let p = cfg.es * selection.power[j] * dot(&g_row, col).norm_sqr();
                if j == idx {
                    signal = p;
                } else {
                    leak += p;
                }
            }
            let inter = interferer_es * norm_sqr(&row_times(&v, &link.g_mi));
            Ok(signal / (leak + inter + cfg.sigma2))
        })
        .collect()
}

/// `v·G` for a row vector `v`.
fn row_times(v: &[Complex], g: &ReducedChannel) -> Vec<Complex> {
    (0..g.g.cols()).map(|c| dot(v, &g.g.column(c))).collect()
}
