//! HTTP service over the passflow pipeline with a file-backed store.
//!
//! Routes:
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/matches` | upload a match file |
//! | GET | `/matches/{id}` | teams, rosters, counts, stored models |
//! | POST | `/matches/{id}/detect?team=&k=&seed=&mode=&words=&heuristic=` | fit and store a model |
//! | GET | `/matches/{id}/models/{key}` | stored model export |
//! | GET | `/matches/{id}/patterns?model=&sort=` | pattern diagram data |
//! | GET | `/matches/{id}/flow?model=` | pattern flow |
//! | GET | `/matches/{id}/phases/{pid}?team=` | phase view data |
//! | GET | `/matches/{id}/players/{player}/stats?span=H:START-END` | movement statistics |
//! | GET | `/matches/{id}/metrics?team=` | per-phase metric rows |
//! | POST | `/matches/{id}/mine?team=&min_support=&max_len=&mode=` | sequential patterns |

pub mod api;
pub mod error;
pub mod key;
pub mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::routing::{get, post};
use axum::Router;
use passflow_core::metrics::{HeatmapGrid, PressureParams};

pub use error::ApiError;
pub use key::ModelKey;
pub use store::Store;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    pub port: u16,
    pub default_k: usize,
    pub default_seed: u64,
    pub detect_timeout: Duration,
    pub pressure: PressureParams,
    pub heatmap_bins: (usize, usize),
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            data_dir: PathBuf::from("passflow-data"),
            port: 8080,
            default_k: 5,
            default_seed: 0,
            detect_timeout: Duration::from_secs(60),
            pressure: PressureParams::default(),
            heatmap_bins: (HeatmapGrid::DEFAULT_X_BINS, HeatmapGrid::DEFAULT_Y_BINS),
        }
    }
}

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub config: Arc<ServiceConfig>,
}

impl AppState {
    pub async fn open(config: ServiceConfig) -> std::io::Result<AppState> {
        let store = Store::open(&config.data_dir).await?;
        Ok(AppState {
            store: Arc::new(store),
            config: Arc::new(config),
        })
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/matches", post(api::post_match))
        .route("/matches/{id}", get(api::get_match))
        .route("/matches/{id}/detect", post(api::detect))
        .route("/matches/{id}/models/{key}", get(api::model_export))
        .route("/matches/{id}/patterns", get(api::patterns))
        .route("/matches/{id}/flow", get(api::flow_view))
        .route("/matches/{id}/phases/{pid}", get(api::phase))
        .route("/matches/{id}/players/{player}/stats", get(api::stats))
        .route("/matches/{id}/metrics", get(api::metrics))
        .route("/matches/{id}/mine", post(api::mine))
        .with_state(state)
}

/// Bind and serve until ctrl-c.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let state = AppState::open(config).await?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, data_dir = %state.store.root().display(), "listening");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
