//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use iasim::channel::{draw_channel, frequency_response, ChannelProfile, FrequencyResponse};
use iasim::ia::{
    equivalent_channel, interference_null_space, reduced_channel, ue_candidates, Candidate, SystemConfig, UeLink,
};
use iasim::numerics::{hadamard_trunk, Complex, ComplexMatrix};
use iasim::protocol::{Event, Phase};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn random_row<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex> {
    (0..n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn random_candidates<R: Rng>(rng: &mut R, t: usize, n_s: usize) -> Vec<Candidate> {
    (0..t)
        .map(|i| Candidate::from_row(i, 0, random_row(rng, n_s)))
        .collect()
}

/// `L` mutually orthogonal rows of length `n` with random norms, by
/// classical Gram-Schmidt on random vectors.
pub fn orthogonal_rows<R: Rng>(rng: &mut R, l: usize, n: usize) -> Vec<Vec<Complex>> {
    let mut basis: Vec<Vec<Complex>> = Vec::new();
    while basis.len() < l {
        let mut v = random_row(rng, n);
        for b in &basis {
            let proj: Complex = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
        .into_iter()
        .map(|b| {
            let s = rng.random_range(0.2..3.0);
            b.into_iter().map(|z| z * s).collect()
        })
        .collect()
}

/// Gauss-Jordan on a small Hermitian system; `None` when a pivot vanishes.
fn invert_small(mut a: Vec<Vec<Complex>>) -> Option<Vec<Vec<Complex>>> {
    let n = a.len();
    let scale = a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let mut inv: Vec<Vec<Complex>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[piv][col].norm() <= 1e-20 * scale {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                for j in 0..n {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

/// Zero-forced sum rate of a subset through the Gram matrix: the post-ZF
/// SNR of stream `l` is `es / (σ²·[(G G^H)^{-1}]_{ll})`.
pub fn oracle_subset_rate(cands: &[Candidate], subset: &[usize], es: f64, sigma2: f64) -> Option<f64> {
    let rows: Vec<&Vec<Complex>> = subset.iter().map(|&i| &cands[i].g_row).collect();
    let gram: Vec<Vec<Complex>> = rows
        .iter()
        .map(|a| {
            rows.iter()
                .map(|b| a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum())
                .collect()
        })
        .collect();
    let inv = invert_small(gram)?;
    Some(
        (0..subset.len())
            .map(|l| (1.0 + es / (sigma2 * inv[l][l].re)).log2())
            .sum(),
    )
}

/// Bitmask enumeration of every subset of the largest feasible size.
/// Returns the best subset (ties to the lexicographically smallest index
/// tuple) and its rate.
pub fn brute_force(cands: &[Candidate], n_s: usize, es: f64, sigma2: f64) -> Option<(Vec<usize>, f64)> {
    let t = cands.len();
    for size in (1..=n_s.min(t)).rev() {
        let mut best: Option<(Vec<usize>, f64)> = None;
        for mask in 0u32..(1 << t) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let subset: Vec<usize> = (0..t).filter(|i| mask & (1 << i) != 0).collect();
            let Some(rate) = oracle_subset_rate(cands, &subset, es, sigma2) else {
                continue;
            };
            let better = match &best {
                None => true,
                Some((b, r)) => rate > *r || (rate == *r && subset < *b),
            };
            if better {
                best = Some((subset, rate));
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Perfect-CSI links and candidates for random channels.
pub fn random_links<R: Rng>(
    rng: &mut R,
    cfg: &SystemConfig,
    profile: &ChannelProfile,
) -> (Vec<UeLink>, Vec<Candidate>) {
    let m_h = hadamard_trunk(cfg.k, cfg.n_s()).unwrap();
    let mut links = Vec::new();
    let mut cands = Vec::new();
    for u in 0..cfg.n_u {
        let hd: FrequencyResponse = frequency_response(&draw_channel(rng, profile), cfg.k);
        let hi: FrequencyResponse = frequency_response(&draw_channel(rng, profile), cfg.k);
        let g_md = reduced_channel(&hd, &m_h).unwrap();
        let g_mi = reduced_channel(&hi, &m_h).unwrap();
        let null = interference_null_space(&g_mi).unwrap();
        cands.extend(ue_candidates(u, &equivalent_channel(&null, &g_md).unwrap()));
        links.push(UeLink { g_md, g_mi, null });
    }
    (links, cands)
}

pub fn row_orthonormality(v: &ComplexMatrix) -> f64 {
    v.matmul(&v.conj_transpose()).unwrap().identity_residual()
}

/// Reference model of the synchronization sequence: which events are legal
/// in which phase, written as an explicit table walk.
pub struct ProtocolModel {
    pub phase: usize,
    pub pilots: usize,
    pub feedback: Vec<bool>,
    pub interferer_id: u32,
    pub threshold: f64,
    pub training: usize,
}

impl ProtocolModel {
    pub fn new(n_users: usize, interferer_id: u32, threshold: f64, training: usize) -> Self {
        Self {
            phase: 0,
            pilots: 0,
            feedback: vec![false; n_users],
            interferer_id,
            threshold,
            training,
        }
    }

    pub fn phase(&self) -> Phase {
        [
            Phase::Listen,
            Phase::TrainInterferer,
            Phase::TrainMain,
            Phase::Feedback,
            Phase::Schedule,
            Phase::Done,
        ][self.phase]
    }

    /// Applies the event; `false` if it is illegal (state unchanged).
    pub fn apply(&mut self, e: &Event) -> bool {
        match (self.phase, e) {
            (4, Event::Tick) => {
                self.phase = 5;
                true
            }
            (_, Event::Tick) => true,
            (0, Event::Beacon { id, snr_db }) => {
                if *id == self.interferer_id && *snr_db >= self.threshold {
                    self.phase = 1;
                }
                true
            }
            (1, Event::PilotInterfererDone) | (2, Event::PilotMainDone) => {
                self.pilots += 1;
                if self.pilots == self.training {
                    self.pilots = 0;
                    self.phase += 1;
                }
                true
            }
            (3, Event::Feedback { user }) => {
                if *user >= self.feedback.len() || self.feedback[*user] {
                    return false;
                }
                self.feedback[*user] = true;
                if self.feedback.iter().all(|&f| f) {
                    self.phase = 4;
                }
                true
            }
            _ => false,
        }
    }
}
