//! Deployments: where the APs and STAs are, when each WN switches on, and
//! the static per-link shadowing and obstacle draws.
//!
//! A deployment is a pure function of `(ScenarioConfig, seed)`.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, SimRng, Stream};

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WnPlacement {
    pub wn_id: usize,
    pub ap_position: Vec3,
    pub sta_position: Vec3,
    /// First iteration (0-based) in which the WN transmits.
    pub activation_iteration: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    pub map_size: Vec3,
    pub wns: Vec<WnPlacement>,
    /// Shadowing `G_s` per (AP of i, STA of j), dB.
    pub shadow_db: Vec<Vec<f64>>,
    /// Obstacle loss `G_o` per (AP of i, STA of j), dB.
    pub obstacle_db: Vec<Vec<f64>>,
    pub seed: u64,
}

impl Deployment {
    pub fn n_wns(&self) -> usize {
        self.wns.len()
    }

    pub fn is_active(&self, wn: usize, iteration: usize) -> bool {
        iteration >= self.wns[wn].activation_iteration
    }

    /// Same geometry and channel draws, with every WN active from the start.
    pub fn all_active(&self) -> Deployment {
        let mut d = self.clone();
        for w in &mut d.wns {
            w.activation_iteration = 0;
        }
        d
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub map_size: Vec3,
    pub n_wns: usize,
    pub ap_sta_distance_m: f64,
    /// AP positions of the 4-WN grid. STAs are pushed away from the map's
    /// vertical centre line, i.e. away from the other networks.
    pub grid_ap_positions: Vec<Vec3>,
    /// Activation schedule of the dynamic scenario.
    pub activation_iterations: Vec<usize>,
    /// Horizon used to validate activation schedules.
    pub total_iterations: usize,
    pub shadow_mean_db: f64,
    pub shadow_sigma_db: f64,
    /// Support `(min, max)` of the uniform obstacle loss.
    pub obstacle_range_db: (f64, f64),
    pub max_placement_attempts: usize,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            map_size: [10.0, 5.0, 10.0],
            n_wns: 4,
            ap_sta_distance_m: std::f64::consts::SQRT_2,
            grid_ap_positions: vec![
                [3.0, 2.5, 3.0],
                [7.0, 2.5, 3.0],
                [3.0, 2.5, 7.0],
                [7.0, 2.5, 7.0],
            ],
            activation_iterations: vec![0, 0, 2500, 5000],
            total_iterations: 10_000,
            shadow_mean_db: 9.5,
            shadow_sigma_db: 2.5,
            obstacle_range_db: (10.0, 50.0),
            max_placement_attempts: 10_000,
            seed: 1,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.map_size.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::Config("map dimensions must be positive".into()));
        }
        if !(self.ap_sta_distance_m > 0.0) {
            return Err(Error::Config("AP-STA distance must be positive".into()));
        }
        if !(self.shadow_sigma_db >= 0.0) {
            return Err(Error::Config("shadowing std must be non-negative".into()));
        }
        let (lo, hi) = self.obstacle_range_db;
        if !(lo <= hi) {
            return Err(Error::Config(format!("obstacle range ({lo}, {hi}) is empty")));
        }
        Ok(())
    }

    fn obstacle_mean_db(&self) -> f64 {
        0.5 * (self.obstacle_range_db.0 + self.obstacle_range_db.1)
    }
}

fn inside(p: &Vec3, map: &Vec3) -> bool {
    p.iter().zip(map).all(|(&x, &m)| (0.0..=m).contains(&x))
}

/// Symmetric 4-WN grid.
pub fn build_grid(config: &ScenarioConfig) -> Result<Deployment> {
    config.validate()?;
    if config.n_wns != 4 {
        return Err(Error::Config(format!("the grid topology has 4 WNs, got {}", config.n_wns)));
    }
    if config.grid_ap_positions.len() != 4 {
        return Err(Error::Config("the grid needs exactly 4 AP positions".into()));
    }
    let cx = config.map_size[0] / 2.0;
    let cz = config.map_size[2] / 2.0;
    let mut wns = Vec::with_capacity(4);
    for (wn_id, ap) in config.grid_ap_positions.iter().enumerate() {
        let (dx, dz) = (ap[0] - cx, ap[2] - cz);
        let norm = dx.hypot(dz);
        if norm == 0.0 {
            return Err(Error::Config(format!("grid AP {wn_id} sits on the map centre line")));
        }
        let d = config.ap_sta_distance_m;
        let sta = [ap[0] + d * dx / norm, ap[1], ap[2] + d * dz / norm];
        if !inside(ap, &config.map_size) || !inside(&sta, &config.map_size) {
            return Err(Error::Config(format!("grid WN {wn_id} does not fit inside the map")));
        }
        wns.push(WnPlacement {
            wn_id,
            ap_position: *ap,
            sta_position: sta,
            activation_iteration: 0,
        });
    }
    finish(config, wns)
}

/// `n_wns` APs uniformly in the map, each STA at the configured distance in
/// a uniformly random direction.
pub fn build_random(config: &ScenarioConfig, n_wns: usize) -> Result<Deployment> {
    config.validate()?;
    if n_wns == 0 {
        return Err(Error::Config("a random scenario needs at least one WN".into()));
    }
    let mut rng = rng::stream(config.seed, Stream::Geometry);
    let map = config.map_size;
    let d = config.ap_sta_distance_m;
    let mut wns = Vec::with_capacity(n_wns);
    for wn_id in 0..n_wns {
        let ap: Vec3 = [
            rng.random::<f64>() * map[0],
            rng.random::<f64>() * map[1],
            rng.random::<f64>() * map[2],
        ];
        let mut sta = None;
        for _ in 0..config.max_placement_attempts {
            let u = random_unit_vector(&mut rng);
            let cand = [ap[0] + d * u[0], ap[1] + d * u[1], ap[2] + d * u[2]];
            if inside(&cand, &map) {
                sta = Some(cand);
                break;
            }
        }
        let sta = sta.ok_or(Error::Placement {
            wn: wn_id,
            attempts: config.max_placement_attempts,
        })?;
        wns.push(WnPlacement {
            wn_id,
            ap_position: ap,
            sta_position: sta,
            activation_iteration: 0,
        });
    }
    finish(config, wns)
}

/// The grid with a staggered activation schedule.
pub fn build_dynamic(config: &ScenarioConfig) -> Result<Deployment> {
    let mut dep = build_grid(config)?;
    if config.activation_iterations.len() != dep.n_wns() {
        return Err(Error::Config(format!(
            "activation schedule has {} entries for {} WNs",
            config.activation_iterations.len(),
            dep.n_wns()
        )));
    }
    for (w, &a) in dep.wns.iter_mut().zip(&config.activation_iterations) {
        if a > config.total_iterations {
            return Err(Error::Config(format!(
                "WN {} activates at {a}, after the last iteration {}",
                w.wn_id, config.total_iterations
            )));
        }
        w.activation_iteration = a;
    }
    Ok(dep)
}

fn random_unit_vector(rng: &mut SimRng) -> Vec3 {
    loop {
        let v: Vec3 = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn finish(config: &ScenarioConfig, wns: Vec<WnPlacement>) -> Result<Deployment> {
    let mut rng = rng::stream(config.seed, Stream::Channel);
    let (shadow_db, obstacle_db) = draw_channel_randomness(wns.len(), config, &mut rng)?;
    Ok(Deployment {
        map_size: config.map_size,
        wns,
        shadow_db,
        obstacle_db,
        seed: config.seed,
    })
}

/// One shadowing and one obstacle draw per ordered link `(i, j)`, `i != j`,
/// row-major. Own links get the distribution means, so every WN's serving
/// link sees the same extra loss.
pub fn draw_channel_randomness(
    n_wns: usize,
    config: &ScenarioConfig,
    rng: &mut SimRng,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let normal = Normal::new(config.shadow_mean_db, config.shadow_sigma_db)
        .map_err(|e| Error::Config(format!("shadowing distribution: {e}")))?;
    let (lo, hi) = config.obstacle_range_db;
    let mut shadow = vec![vec![config.shadow_mean_db; n_wns]; n_wns];
    let mut obstacle = vec![vec![config.obstacle_mean_db(); n_wns]; n_wns];
    for i in 0..n_wns {
        for j in 0..n_wns {
            if i == j {
                continue;
            }
            shadow[i][j] = normal.sample(rng);
            obstacle[i][j] = lo + (hi - lo) * rng.random::<f64>();
        }
    }
    Ok((shadow, obstacle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::distance;

    #[test]
    fn grid_has_four_wns_active_from_start() {
        let d = build_grid(&ScenarioConfig::default()).unwrap();
        assert_eq!(d.n_wns(), 4);
        assert!(d.wns.iter().all(|w| w.activation_iteration == 0));
    }

    #[test]
    fn grid_ap_sta_distance() {
        let d = build_grid(&ScenarioConfig::default()).unwrap();
        for w in &d.wns {
            assert!((distance(&w.ap_position, &w.sta_position) - 2f64.sqrt()).abs() < 1e-9);
            assert!(inside(&w.sta_position, &d.map_size));
        }
    }

    #[test]
    fn grid_stas_point_away_from_other_networks() {
        let d = build_grid(&ScenarioConfig::default()).unwrap();
        for w in &d.wns {
            for o in d.wns.iter().filter(|o| o.wn_id != w.wn_id) {
                assert!(distance(&o.ap_position, &w.sta_position) > distance(&o.ap_position, &w.ap_position));
            }
        }
    }

    #[test]
    fn grid_rejects_wrong_count() {
        let cfg = ScenarioConfig { n_wns: 3, ..Default::default() };
        assert!(matches!(build_grid(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn random_placements_fit() {
        for n in [1, 2, 4, 6, 8] {
            let cfg = ScenarioConfig { seed: 7, ..Default::default() };
            let d = build_random(&cfg, n).unwrap();
            assert_eq!(d.n_wns(), n);
            for w in &d.wns {
                assert!(inside(&w.ap_position, &d.map_size));
                assert!(inside(&w.sta_position, &d.map_size));
                assert!((distance(&w.ap_position, &w.sta_position) - 2f64.sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn random_seeds_differ() {
        let a = build_random(&ScenarioConfig { seed: 1, ..Default::default() }, 8).unwrap();
        let b = build_random(&ScenarioConfig { seed: 2, ..Default::default() }, 8).unwrap();
        assert_ne!(a.wns[0].ap_position, b.wns[0].ap_position);
    }

    #[test]
    fn degenerate_map_fails_placement() {
        let cfg = ScenarioConfig {
            map_size: [0.5, 0.5, 0.5],
            max_placement_attempts: 50,
            ..Default::default()
        };
        assert!(matches!(build_random(&cfg, 2), Err(Error::Placement { .. })));
    }

    #[test]
    fn dynamic_schedules() {
        let d = build_dynamic(&ScenarioConfig::default()).unwrap();
        let acts: Vec<_> = d.wns.iter().map(|w| w.activation_iteration).collect();
        assert_eq!(acts, [0, 0, 2500, 5000]);

        let cfg = ScenarioConfig { activation_iterations: vec![0, 100, 200, 300], ..Default::default() };
        let acts: Vec<_> = build_dynamic(&cfg).unwrap().wns.iter().map(|w| w.activation_iteration).collect();
        assert_eq!(acts, [0, 100, 200, 300]);

        let cfg = ScenarioConfig { activation_iterations: vec![0; 4], ..Default::default() };
        assert_eq!(build_dynamic(&cfg).unwrap(), build_grid(&cfg).unwrap());

        let cfg = ScenarioConfig { activation_iterations: vec![0, 0, 0, 10_001], ..Default::default() };
        assert!(build_dynamic(&cfg).is_err());
    }

    #[test]
    fn zero_variance_draws_are_exact() {
        let cfg = ScenarioConfig {
            shadow_sigma_db: 0.0,
            obstacle_range_db: (30.0, 30.0),
            ..Default::default()
        };
        let mut rng = rng::stream(3, Stream::Channel);
        let (s, o) = draw_channel_randomness(5, &cfg, &mut rng).unwrap();
        assert!(s.iter().flatten().all(|&x| x == 9.5));
        assert!(o.iter().flatten().all(|&x| x == 30.0));
    }

    #[test]
    fn draws_have_the_configured_means() {
        let cfg = ScenarioConfig::default();
        let n = 120;
        let mut rng = rng::stream(11, Stream::Channel);
        let (s, o) = draw_channel_randomness(n, &cfg, &mut rng).unwrap();
        let off = |m: &Vec<Vec<f64>>| -> f64 {
            let mut sum = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        sum += m[i][j];
                    }
                }
            }
            sum / (n * (n - 1)) as f64
        };
        // 14280 links: standard errors are 0.02 dB and 0.1 dB.
        assert!((off(&s) - 9.5).abs() < 0.1);
        assert!((off(&o) - 30.0).abs() < 0.5);
    }
}
