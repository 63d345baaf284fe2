//! Browser bindings for the cMACr rate-region library.
//!
//! Three operations are exported to JavaScript, each returning a JSON
//! string: the zero-relay-rate frontier of the three Gaussian strategies,
//! the symmetric-rate power sweep, and the dedicated-relay multicast
//! capacity. The math lives in [`api`], which is plain Rust and is unit
//! tested on the host; the `wasm_bindgen` wrappers only translate errors.
//!
//! Build for the web with `wasm-pack build crates/cmacr-wasm --target web`
//! (requires the `wasm32-unknown-unknown` toolchain target) and serve the
//! `www/` directory next to the generated `pkg/`.

use wasm_bindgen::prelude::*;

pub mod api {
    use cmacr::gaussian::{
        db_to_linear, multicast_relay_capacity, strategy_cloud, symmetric_rate_sweep,
        GaussianChannel, MulticastGains, Strategy,
    };
    use serde::Serialize;

    #[derive(Serialize)]
    struct Frontiers {
        df: Vec<[f64; 2]>,
        cf: Vec<[f64; 2]>,
        outer: Vec<[f64; 2]>,
    }

    #[derive(Serialize)]
    struct SweepRow {
        p_db: f64,
        df: f64,
        cf: f64,
        outer: f64,
    }

    #[derive(Serialize)]
    struct Multicast {
        capacity: f64,
        rho: f64,
    }

    fn check_grid(grid_step: f64) -> Result<(), String> {
        if !(grid_step > 0.0 && grid_step <= 0.5) {
            return Err(format!("grid_step {grid_step} must lie in (0, 0.5]"));
        }
        Ok(())
    }

    fn channel(p_db: f64, gamma_sq: f64, eta_sq: f64) -> Result<GaussianChannel, String> {
        let p = db_to_linear(p_db);
        GaussianChannel::from_squared_gains(p, p, p, gamma_sq, eta_sq).map_err(|e| e.to_string())
    }

    /// The `(R1, R2)` frontier of each strategy at equal per-node power
    /// `p_db` and zero relay rate, as `{"df": [[r1, r2], ...], "cf": ...,
    /// "outer": ...}` with one point per sweep direction.
    pub fn gaussian_frontiers_json(
        p_db: f64,
        gamma_sq: f64,
        eta_sq: f64,
        grid_step: f64,
    ) -> Result<String, String> {
        check_grid(grid_step)?;
        let ch = channel(p_db, gamma_sq, eta_sq)?;
        let frontier = |strategy: Strategy| -> Result<Vec<[f64; 2]>, String> {
            let cloud = strategy_cloud(&ch, strategy, grid_step).map_err(|e| e.to_string())?;
            Ok(cloud
                .frontier_slice(0.0)
                .map_err(|e| e.to_string())?
                .iter()
                .map(|f| [f.rate.r1, f.rate.r2])
                .collect())
        };
        let out = Frontiers { df: frontier(Strategy::Df)?, cf: frontier(Strategy::Cf)?, outer: frontier(Strategy::Outer)? };
        serde_json::to_string(&out).map_err(|e| e.to_string())
    }

    /// Maximum symmetric rate of each strategy over `count` equally spaced
    /// powers from `p_min_db` to `p_max_db`, as a JSON array of
    /// `{"p_db", "df", "cf", "outer"}` rows.
    pub fn symmetric_sweep_json(
        gamma_sq: f64,
        eta_sq: f64,
        p_min_db: f64,
        p_max_db: f64,
        count: usize,
        grid_step: f64,
    ) -> Result<String, String> {
        check_grid(grid_step)?;
        if !(2..=201).contains(&count) {
            return Err(format!("count {count} must lie in 2..=201"));
        }
        if !(p_min_db < p_max_db) {
            return Err(format!("power range [{p_min_db}, {p_max_db}] dB is empty"));
        }
        let template = channel(0.0, gamma_sq, eta_sq)?;
        let dbs: Vec<f64> = (0..count)
            .map(|i| p_min_db + (p_max_db - p_min_db) * i as f64 / (count - 1) as f64)
            .collect();
        let per = |strategy: Strategy| -> Result<Vec<f64>, String> {
            Ok(symmetric_rate_sweep(&template, &dbs, strategy, grid_step)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|(_, r)| r)
                .collect())
        };
        let (df, cf, outer) = (per(Strategy::Df)?, per(Strategy::Cf)?, per(Strategy::Outer)?);
        let rows: Vec<SweepRow> = dbs
            .iter()
            .enumerate()
            .map(|(i, &p_db)| SweepRow { p_db, df: df[i], cf: cf[i], outer: outer[i] })
            .collect();
        serde_json::to_string(&rows).map_err(|e| e.to_string())
    }

    /// Capacity of the dedicated-relay multicast channel and the optimal
    /// source/relay correlation, as `{"capacity", "rho"}`.
    pub fn multicast_capacity_json(
        p1: f64,
        p3: f64,
        source_relay: f64,
        source_rx1: f64,
        relay_rx1: f64,
        relay_rx2: f64,
    ) -> Result<String, String> {
        let gains = MulticastGains { source_relay, source_rx1, relay_rx1, relay_rx2 };
        let sol = multicast_relay_capacity(p1, p3, &gains).map_err(|e| e.to_string())?;
        serde_json::to_string(&Multicast { capacity: sol.capacity, rho: sol.rho })
            .map_err(|e| e.to_string())
    }
}

#[wasm_bindgen]
pub fn gaussian_frontiers(p_db: f64, gamma_sq: f64, eta_sq: f64, grid_step: f64) -> Result<String, JsError> {
    api::gaussian_frontiers_json(p_db, gamma_sq, eta_sq, grid_step).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn symmetric_sweep(
    gamma_sq: f64,
    eta_sq: f64,
    p_min_db: f64,
    p_max_db: f64,
    count: usize,
    grid_step: f64,
) -> Result<String, JsError> {
    api::symmetric_sweep_json(gamma_sq, eta_sq, p_min_db, p_max_db, count, grid_step)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn multicast_capacity(
    p1: f64,
    p3: f64,
    source_relay: f64,
    source_rx1: f64,
    relay_rx1: f64,
    relay_rx2: f64,
) -> Result<String, JsError> {
    api::multicast_capacity_json(p1, p3, source_relay, source_rx1, relay_rx1, relay_rx2)
        .map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::api;

    #[test]
    fn frontiers_parse_and_respect_the_outer_bound() {
        let json = api::gaussian_frontiers_json(5.0, 1.0, 10.0, 0.1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let pts = |k: &str| v[k].as_array().unwrap().clone();
        let (df, cf, outer) = (pts("df"), pts("cf"), pts("outer"));
        assert_eq!(df.len(), 181);
        assert_eq!(cf.len(), 181);
        assert_eq!(outer.len(), 181);
        // Per sweep direction both achievable supports stay under the outer
        // bound's.
        for k in 0..181 {
            let theta = std::f64::consts::FRAC_PI_2 * k as f64 / 180.0;
            let sup = |pt: &serde_json::Value| {
                theta.cos() * pt[0].as_f64().unwrap() + theta.sin() * pt[1].as_f64().unwrap()
            };
            assert!(sup(&df[k]) <= sup(&outer[k]) + 1e-9);
            assert!(sup(&cf[k]) <= sup(&outer[k]) + 1e-9);
        }
    }

    #[test]
    fn sweep_rows_are_monotone_in_power() {
        let json = api::symmetric_sweep_json(1.0, 10.0, 0.0, 20.0, 5, 0.2).unwrap();
        let rows: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0]["p_db"].as_f64().unwrap(), 0.0);
        assert_eq!(rows[4]["p_db"].as_f64().unwrap(), 20.0);
        for key in ["df", "cf", "outer"] {
            for w in rows.windows(2) {
                assert!(
                    w[1][key].as_f64().unwrap() >= w[0][key].as_f64().unwrap() - 1e-9,
                    "{key} not monotone"
                );
            }
        }
    }

    #[test]
    fn multicast_matches_the_frozen_fixture() {
        let json = api::multicast_capacity_json(2.0, 3.0, 1.5, 0.3, 0.6, 2.5).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!((v["capacity"].as_f64().unwrap() - 0.774666453592).abs() < 1e-8);
        assert!((v["rho"].as_f64().unwrap() - 0.756186670451).abs() < 1e-5);
    }

    #[test]
    fn invalid_parameters_are_reported() {
        assert!(api::gaussian_frontiers_json(5.0, 1.0, 10.0, 0.9).unwrap_err().contains("grid_step"));
        assert!(api::symmetric_sweep_json(1.0, 10.0, 0.0, 20.0, 1, 0.2).unwrap_err().contains("count"));
        assert!(api::symmetric_sweep_json(1.0, 10.0, 20.0, 0.0, 5, 0.2).unwrap_err().contains("range"));
        assert!(api::multicast_capacity_json(-1.0, 3.0, 1.0, 1.0, 1.0, 1.0).is_err());
    }
}
