//! Reference implementations used to check the engine. Kept deliberately
//! naive: brute force, no shared code paths with the library.

#![allow(dead_code)]

use rand::Rng;
use teamneg_core::{Orientation, UtilityProfile};

pub const GRID_STEP: f64 = 0.01;
pub const GRID_TOLERANCE: f64 = 0.005;

pub fn utility(weights: &[f64], kinds: &[Orientation], x: &[f64]) -> f64 {
    weights
        .iter()
        .zip(kinds)
        .zip(x)
        .map(|((w, k), xi)| match k {
            Orientation::Increasing => w * xi,
            Orientation::Decreasing => w * (1.0 - xi),
        })
        .sum()
}

pub fn similarity(x: &[f64], y: &[f64]) -> f64 {
    let d: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    1.0 - d / (x.len() as f64).sqrt()
}

/// Visit every grid point of `[0,1]^n` with spacing `GRID_STEP` that lies
/// within `GRID_TOLERANCE` of the target utility.
pub fn for_each_iso_grid_point(profile: &UtilityProfile, target: f64, mut visit: impl FnMut(&[f64])) {
    let n = profile.len();
    let steps = (1.0 / GRID_STEP).round() as usize;
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    loop {
        for j in 0..n {
            x[j] = idx[j] as f64 * GRID_STEP;
        }
        if (utility(profile.weights(), profile.kinds(), &x) - target).abs() <= GRID_TOLERANCE {
            visit(&x);
        }
        let mut j = 0;
        loop {
            if j == n {
                return;
            }
            idx[j] += 1;
            if idx[j] <= steps {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

pub fn grid_best_similarity(profile: &UtilityProfile, target: f64, reference: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for_each_iso_grid_point(profile, target, |x| best = best.max(similarity(x, reference)));
    best
}

pub fn grid_best_product(profile: &UtilityProfile, target: f64, a: &[f64], b: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for_each_iso_grid_point(profile, target, |x| {
        best = best.max(similarity(x, a) * similarity(x, b));
    });
    best
}

pub fn random_weights(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|r| r / total).collect();
    let drift = 1.0 - w.iter().sum::<f64>();
    w[0] += drift;
    w
}

pub fn random_kinds(n: usize, rng: &mut impl Rng) -> Vec<Orientation> {
    (0..n)
        .map(|_| {
            if rng.random_bool(0.5) {
                Orientation::Increasing
            } else {
                Orientation::Decreasing
            }
        })
        .collect()
}

pub fn random_point(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Column sums of a vote matrix (rows are voters).
pub fn column_sums(votes: &[Vec<u32>]) -> Vec<u32> {
    let k = votes[0].len();
    (0..k).map(|j| votes.iter().map(|row| row[j]).sum()).collect()
}

/// Every proposal index attaining the largest column sum.
pub fn plurality_tie_set(votes: &[Vec<u32>]) -> Vec<usize> {
    let sums = column_sums(votes);
    let top = *sums.iter().max().unwrap();
    (0..sums.len()).filter(|&j| sums[j] == top).collect()
}

/// `Some(verdict)` when majority is decisive, `None` on an exact tie.
pub fn majority_verdict(votes: &[bool]) -> Option<bool> {
    let yes = votes.iter().filter(|v| **v).count() as f64;
    let half = votes.len() as f64 / 2.0;
    if yes > half {
        Some(true)
    } else if yes < half {
        Some(false)
    } else {
        None
    }
}

pub fn all_yes(votes: &[bool]) -> bool {
    !votes.iter().any(|v| !v)
}

/// Every `m x k` matrix over `{0..levels}`.
pub fn all_matrices(m: usize, k: usize, levels: u32) -> Vec<Vec<Vec<u32>>> {
    let cells = m * k;
    let total = (levels as usize).pow(cells as u32);
    (0..total)
        .map(|mut code| {
            let mut matrix = vec![vec![0; k]; m];
            for cell in 0..cells {
                matrix[cell / k][cell % k] = (code % levels as usize) as u32;
                code /= levels as usize;
            }
            matrix
        })
        .collect()
}

/// Every permutation of `0..k`.
pub fn permutations(k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, (k - 1) as u32);
            out.push(q);
        }
    }
    out
}

/// Aspiration written straight from the closed form.
pub fn aspiration(ru: f64, deadline: u32, beta: f64, eps: f64, t: u32) -> f64 {
    let top = 1.0 - eps;
    if deadline == 0 {
        return ru;
    }
    top - (top - ru) * (t as f64 / deadline as f64).powf(1.0 / beta)
}

/// Points of the iso-set itself: a regular grid over every coordinate but
/// the heaviest one, which is solved for. All visited points are feasible.
pub fn for_each_exact_iso_point(profile: &UtilityProfile, target: f64, steps: usize, mut visit: impl FnMut(&[f64])) {
    let n = profile.len();
    let w = profile.weights();
    let k = (0..n).max_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap();
    let others: Vec<usize> = (0..n).filter(|&j| j != k).collect();
    let mut idx = vec![0usize; others.len()];
    let mut v = vec![0.0; n];
    let mut x = vec![0.0; n];
    loop {
        let mut partial = 0.0;
        for (i, &j) in others.iter().enumerate() {
            v[j] = idx[i] as f64 / steps as f64;
            partial += w[j] * v[j];
        }
        let vk = (target - partial) / w[k];
        if (0.0..=1.0).contains(&vk) {
            v[k] = vk;
            for j in 0..n {
                x[j] = match profile.kinds()[j] {
                    Orientation::Increasing => v[j],
                    Orientation::Decreasing => 1.0 - v[j],
                };
            }
            visit(&x);
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return;
            }
            idx[i] += 1;
            if idx[i] <= steps {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

pub fn simplex_weights(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    let mut w: Vec<f64> = draws.iter().map(|d| d / total).collect();
    let drift = 1.0 - w.iter().sum::<f64>();
    w[0] += drift;
    w
}

/// Exhaustive comparison of the voting rules against the counting oracles
/// for up to `max_members` voters and `max_proposals` proposals. Returns the
/// number of cases checked.
pub fn check_voting_rules(max_members: usize, max_proposals: usize) -> Result<usize, String> {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use teamneg_core::strategy::{sbv_select, ssv_accept, ssv_select, unanimity_accept};

    let mut rng = ChaCha8Rng::seed_from_u64(0x707);
    let mut cases = 0;
    for m in 1..=max_members {
        for k in 1..=max_proposals {
            for votes in all_matrices(m, k, 2) {
                let ties = plurality_tie_set(&votes);
                let pick = ssv_select(&votes, &mut rng);
                if !ties.contains(&pick) {
                    return Err(format!("ssv_select {votes:?} -> {pick}, oracle {ties:?}"));
                }
                cases += 1;
            }
            let perms = permutations(k);
            let total = perms.len().pow(m as u32);
            for mut code in 0..total {
                let scores: Vec<Vec<u32>> = (0..m)
                    .map(|_| {
                        let p = perms[code % perms.len()].clone();
                        code /= perms.len();
                        p
                    })
                    .collect();
                let ties = plurality_tie_set(&scores);
                let pick = sbv_select(&scores, &mut rng);
                if !ties.contains(&pick) {
                    return Err(format!("sbv_select {scores:?} -> {pick}, oracle {ties:?}"));
                }
                cases += 1;
            }
        }
        for code in 0..(1usize << m) {
            let votes: Vec<bool> = (0..m).map(|i| code >> i & 1 == 1).collect();
            if unanimity_accept(&votes) != all_yes(&votes) {
                return Err(format!("unanimity_accept {votes:?}"));
            }
            match majority_verdict(&votes) {
                Some(verdict) => {
                    for _ in 0..8 {
                        if ssv_accept(&votes, &mut rng) != verdict {
                            return Err(format!("ssv_accept {votes:?}, oracle {verdict}"));
                        }
                    }
                }
                None => {
                    let outcomes: Vec<bool> = (0..64).map(|_| ssv_accept(&votes, &mut rng)).collect();
                    if !(outcomes.contains(&true) && outcomes.contains(&false)) {
                        return Err(format!("ssv_accept tie {votes:?} is not randomized"));
                    }
                }
            }
            cases += 2;
        }
    }
    Ok(cases)
}

/// Build FUM offers for random teams at random rounds and count members whose
/// utility falls short of their aspiration.
pub fn fum_unanimity_violations(proposals_per_size: usize, sizes: &[usize], seed: u64) -> (usize, usize) {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use teamneg_core::strategy::{fum_build_offer, Agenda};
    use teamneg_core::{AttributeSpec, ConcessionParams, Domain, Member, MemberId};

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut proposals = 0;
    let mut violations = 0;
    for &m in sizes {
        for _ in 0..proposals_per_size {
            let n = rng.random_range(1..=6);
            let attrs = random_kinds(n, &mut rng)
                .into_iter()
                .enumerate()
                .map(|(j, k)| AttributeSpec::new(format!("a{j}"), 0.0, 1.0, k))
                .collect();
            let domain = Domain::new(attrs).unwrap();
            let deadline = rng.random_range(1..=60);
            let beta = rng.random_range(0.1..=40.0);
            let team: Vec<Member> = (0..m)
                .map(|i| {
                    let ru = rng.random_range(0.0..=0.25);
                    let mut weights = simplex_weights(n, &mut rng);
                    if rng.random_bool(0.1) {
                        weights = vec![0.0; n];
                        weights[rng.random_range(0..n)] = 1.0;
                    }
                    let profile = UtilityProfile::for_team(&domain, weights, ru).unwrap();
                    let params = ConcessionParams::new(ru, deadline, beta, 0.0).unwrap();
                    Member::new(MemberId(i), profile, params).unwrap()
                })
                .collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let agenda = Agenda {
                order,
                concession_totals: vec![0.0; n],
            };
            let t = rng.random_range(0..=deadline);
            let offer = fum_build_offer(&domain, &team, &agenda, t);
            proposals += 1;
            for member in &team {
                if member.utility(&offer) < member.aspiration(t) - 1e-9 {
                    violations += 1;
                }
            }
        }
    }
    (proposals, violations)
}

/// Aspiration identities and monotonicity, opponent counter utility and the
/// Borda permutation property. Returns the number of checks made.
pub fn check_concession_properties(draws: usize, seed: u64) -> Result<usize, String> {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use teamneg_core::agents::borda_scores;
    use teamneg_core::{ConcessionParams, Offer, Opponent, OpponentResponse};

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0;
    for _ in 0..draws {
        let ru = rng.random_range(0.0..=0.25);
        let eps = if rng.random_bool(0.5) { 0.0 } else { rng.random_range(0.0..=(1.0 - ru)) };
        let deadline = rng.random_range(1..=60);
        let beta = rng.random_range(0.1..=40.0);
        let p = ConcessionParams::new(ru, deadline, beta, eps).map_err(|e| e.to_string())?;
        if (p.aspiration(0) - (1.0 - eps)).abs() > 1e-12 || (p.aspiration(deadline) - ru).abs() > 1e-12 {
            return Err(format!("boundary identity fails for {p:?}"));
        }
        let mut prev = f64::INFINITY;
        for t in 0..=deadline {
            let s = p.aspiration(t);
            if s > prev + 1e-15 {
                return Err(format!("aspiration rises at t={t} for {p:?}"));
            }
            if (s - aspiration(ru, deadline, beta, eps, t)).abs() > 1e-12 {
                return Err(format!("aspiration differs from closed form at t={t} for {p:?}"));
            }
            prev = s;
        }
        checks += deadline as usize + 3;

        let n = rng.random_range(1..=6);
        let kinds = random_kinds(n, &mut rng);
        let op_kinds: Vec<Orientation> = kinds.iter().map(|k| k.flip()).collect();
        let profile = UtilityProfile::new(simplex_weights(n, &mut rng), op_kinds, ru).map_err(|e| e.to_string())?;
        let opponent = Opponent::new(profile.clone(), ConcessionParams::new(ru, deadline, beta, 0.0).unwrap())
            .map_err(|e| e.to_string())?;
        let t = rng.random_range(0..deadline);
        let incoming = Offer::new(random_point(n, &mut rng)).unwrap();
        match opponent.respond(&incoming, t) {
            OpponentResponse::Counter(c) => {
                let target = opponent.params().aspiration(t);
                if (profile.utility(c.values()) - target).abs() > 1e-6 {
                    return Err(format!("counter misses s_op({t}) = {target}"));
                }
            }
            OpponentResponse::Accept => {
                if profile.utility(incoming.values()) < opponent.params().aspiration(t + 1) - 1e-9 {
                    return Err("opponent accepted below its next demand".into());
                }
            }
            OpponentResponse::Withdraw => return Err(format!("withdrawal before the deadline at t={t}")),
        }
        checks += 1;

        let k = rng.random_range(1..=8);
        let utilities: Vec<f64> = (0..k)
            .map(|_| if rng.random_bool(0.3) { 0.5 } else { rng.random::<f64>() })
            .collect();
        let mut scores = borda_scores(&utilities);
        scores.sort_unstable();
        if scores != (0..k as u32).collect::<Vec<_>>() {
            return Err(format!("Borda scores of {utilities:?} are not a permutation"));
        }
        checks += 1;
    }
    // Exhaustive: every Borda ranking of up to five tied-or-distinct levels.
    for k in 1..=5 {
        for code in 0..5usize.pow(k) {
            let utilities: Vec<f64> = (0..k).map(|i| ((code / 5usize.pow(i)) % 5) as f64 / 4.0).collect();
            let mut scores = borda_scores(&utilities);
            scores.sort_unstable();
            if scores != (0..k).collect::<Vec<_>>() {
                return Err(format!("Borda scores of {utilities:?} are not a permutation"));
            }
            checks += 1;
        }
    }
    Ok(checks)
}
