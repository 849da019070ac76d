use std::str::FromStr;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use passflow_core::analysis::{
    flow, metrics_rows, pattern_views, phase_detail, prepare, FlowRecord, MetricsRow, PatternSort,
    PatternView, PhaseDetail,
};
use passflow_core::match_data::{
    build_dictionary, parse_match, segment_phases, AttackDirection, MatchRecord, PlayerId,
    RosterEntry, StyleHeuristic, TeamId,
};
use passflow_core::metrics::{player_stats, MovementConfig, PlayerStats};
use passflow_core::pattern::{
    detect_patterns, DetectConfig, DocumentMode, ModelExport, NmfConfig, PassingPattern, Vocabulary,
};
use passflow_core::seqmine::{phase_sequences, prefixspan, SequenceMode};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::ApiError;
use crate::key::{key_is_raw, ModelKey};
use crate::AppState;

type ApiResult<T> = Result<T, ApiError>;

fn query<T>(q: Result<Query<T>, QueryRejection>) -> ApiResult<T> {
    q.map(|Query(t)| t)
        .map_err(|e| ApiError::bad_request(e.body_text()))
}

fn number<T: FromStr>(name: &str, raw: Option<&str>, default: T) -> ApiResult<T> {
    match raw {
        None | Some("") => Ok(default),
        Some(s) => s.parse().map_err(|_| {
            ApiError::bad_request(format!(
                "`{name}` must be a non-negative integer, got `{s}`"
            ))
        }),
    }
}

fn choice<T: Copy>(
    name: &str,
    raw: Option<&str>,
    default: T,
    options: &[(&str, T)],
) -> ApiResult<T> {
    let Some(s) = raw.filter(|s| !s.is_empty()) else {
        return Ok(default);
    };
    options
        .iter()
        .find(|(label, _)| *label == s)
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            let allowed: Vec<_> = options.iter().map(|(l, _)| *l).collect();
            ApiError::bad_request(format!(
                "`{name}` must be one of {}, got `{s}`",
                allowed.join(", ")
            ))
        })
}

fn flag(name: &str, raw: Option<&str>, default: bool) -> ApiResult<bool> {
    choice(
        name,
        raw,
        default,
        &[("true", true), ("false", false), ("1", true), ("0", false)],
    )
}

/// The requested team, or the first team of the match.
fn resolve_team(record: &MatchRecord, raw: Option<&str>) -> ApiResult<TeamId> {
    match raw.filter(|s| !s.is_empty()) {
        None => Ok(record.teams[0].id.clone()),
        Some(s) => {
            let team = TeamId::new(s);
            record
                .team(&team)
                .map(|_| team.clone())
                .ok_or_else(|| ApiError::not_found(format!("match has no team `{s}`")))
        }
    }
}

fn heuristic(on: bool) -> Option<StyleHeuristic> {
    on.then(StyleHeuristic::default)
}

async fn blocking<T: Send + 'static>(
    state: &AppState,
    job: impl FnOnce() -> ApiResult<T> + Send + 'static,
) -> ApiResult<T> {
    let handle = tokio::task::spawn_blocking(job);
    match tokio::time::timeout(state.config.detect_timeout, handle).await {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => Err(ApiError::internal(format!("worker failed: {e}"))),
        Err(_) => Err(ApiError::new(
            StatusCode::GATEWAY_TIMEOUT,
            "timeout",
            format!("computation exceeded {:?}", state.config.detect_timeout),
        )),
    }
}

// ---- matches ----

#[derive(Debug, Serialize, Deserialize)]
pub struct IngestResponse {
    pub match_id: String,
    pub created: bool,
    pub phase_count: usize,
}

pub async fn post_match(State(state): State<AppState>, body: Bytes) -> ApiResult<Response> {
    let record = parse_match(&body).map_err(ApiError::from_upload)?;
    let phase_count = record.phases.len();
    let stored = state.store.put_match(record).await?;
    let status = if stored.created {
        StatusCode::CREATED
    } else {
        StatusCode::OK
    };
    let body = IngestResponse {
        match_id: stored.match_id,
        created: stored.created,
        phase_count,
    };
    Ok((status, Json(body)).into_response())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TeamSummary {
    pub id: TeamId,
    pub players: Vec<RosterEntry>,
    pub formation_by_half: BTreeMap<u8, String>,
    pub attack_direction_by_half: BTreeMap<u8, AttackDirection>,
    pub phase_count: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatchSummary {
    pub match_id: String,
    pub teams: Vec<TeamSummary>,
    pub phase_count: usize,
    pub frame_count: usize,
    pub event_count: usize,
    pub models: Vec<String>,
}

pub async fn get_match(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<MatchSummary>> {
    let record = state.store.get_match(&id).await?;
    let phases = segment_phases(&record);
    let teams = record
        .teams
        .iter()
        .map(|t| TeamSummary {
            id: t.id.clone(),
            players: t.players.clone(),
            formation_by_half: t.formation_by_half.clone(),
            attack_direction_by_half: t.attack_direction_by_half.clone(),
            phase_count: phases.iter().filter(|p| p.team == t.id).count(),
        })
        .collect();
    Ok(Json(MatchSummary {
        match_id: record.match_id.clone(),
        teams,
        phase_count: phases.len(),
        frame_count: record.frames.len(),
        event_count: record.events.len(),
        models: state.store.model_keys(&id).await?,
    }))
}

// ---- detection ----

#[derive(Debug, Default, Deserialize)]
pub struct DetectQuery {
    team: Option<String>,
    k: Option<String>,
    seed: Option<String>,
    mode: Option<String>,
    words: Option<String>,
    heuristic: Option<String>,
    corpus: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DetectResponse {
    pub model: String,
    pub match_id: String,
    pub team: TeamId,
    pub k: usize,
    pub seed: u64,
    pub mode: DocumentMode,
    pub words: Vocabulary,
    pub heuristic: bool,
    pub cached: bool,
    pub converged: Option<bool>,
    pub iterations: Option<usize>,
    pub final_objective: Option<f64>,
    pub patterns: Vec<PassingPattern>,
    pub counter_pattern: Option<usize>,
}

fn detect_response(
    key: &str,
    export: ModelExport,
    heuristic: bool,
    cached: bool,
) -> DetectResponse {
    let fit = export.fit.as_ref();
    DetectResponse {
        model: key.to_string(),
        match_id: export.match_id.clone(),
        team: export.team.clone(),
        k: export.k,
        seed: export.seed,
        mode: export.config.mode,
        words: export.config.vocabulary,
        heuristic,
        cached,
        converged: fit.map(|f| f.converged),
        iterations: fit.map(|f| f.objective_trace.len() - 1),
        final_objective: fit.and_then(|f| f.objective_trace.last().copied()),
        patterns: export.patterns,
        counter_pattern: export.counter_pattern,
    }
}

pub async fn detect(
    State(state): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<DetectQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let q = query(q)?;
    match q.corpus.as_deref() {
        None | Some("") | Some("single") => {}
        Some("multi") => {
            return Err(ApiError::new(
                StatusCode::NOT_IMPLEMENTED,
                "not-implemented",
                "multi-match corpora are not supported yet",
            ))
        }
        Some(other) => return Err(ApiError::bad_request(format!("unknown corpus `{other}`"))),
    }
    let record = state.store.get_match(&id).await?;
    let key = ModelKey {
        team: resolve_team(&record, q.team.as_deref())?,
        k: number("k", q.k.as_deref(), state.config.default_k)?,
        seed: number("seed", q.seed.as_deref(), state.config.default_seed)?,
        mode: choice(
            "mode",
            q.mode.as_deref(),
            DocumentMode::Binary,
            &[
                ("binary", DocumentMode::Binary),
                ("count", DocumentMode::Count),
            ],
        )?,
        words: choice(
            "words",
            q.words.as_deref(),
            Vocabulary::Player,
            &[
                ("player", Vocabulary::Player),
                ("region", Vocabulary::Region),
            ],
        )?,
        heuristic: flag("heuristic", q.heuristic.as_deref(), true)?,
    };
    let name = key.to_string();

    if let Some(bytes) = state.store.get_model(&id, &name).await? {
        let export = ModelExport::from_json(&bytes)?;
        let body = detect_response(&name, export, key.heuristic, true);
        return Ok((StatusCode::OK, Json(body)).into_response());
    }

    let config = DetectConfig {
        nmf: NmfConfig {
            seed: key.seed,
            ..Default::default()
        },
        mode: key.mode,
        vocabulary: key.words,
        ..Default::default()
    };
    let job_key = key.clone();
    let export = blocking(&state, move || {
        let prepared = prepare(
            &record,
            &job_key.team,
            heuristic(job_key.heuristic).as_ref(),
        )?;
        let detection = detect_patterns(&prepared, &job_key.team, job_key.k, &config)?;
        Ok(ModelExport::new(
            &prepared.match_id,
            job_key.k,
            &config,
            &detection,
        ))
    })
    .await?;
    let stored = state
        .store
        .put_model(&id, &name, export.to_json().as_bytes())
        .await?;
    let export = ModelExport::from_json(&stored)?;
    let body = detect_response(&name, export, key.heuristic, false);
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

/// The stored model plus the match prepared the same way it was fitted.
async fn load_model(
    state: &AppState,
    id: &str,
    key: Option<&str>,
    team: Option<&str>,
) -> ApiResult<(String, MatchRecord, passflow_core::pattern::Detection)> {
    let key = key
        .filter(|k| !k.is_empty())
        .ok_or_else(|| ApiError::bad_request("`model` is required"))?;
    let record = state.store.get_match(id).await?;
    let bytes = state
        .store
        .get_model(id, key)
        .await?
        .ok_or_else(|| ApiError::not_found(format!("no model `{key}` for match `{id}`")))?;
    let export = ModelExport::from_json(&bytes)?;
    if let Some(t) = team.filter(|t| !t.is_empty()) {
        if t != export.team.as_str() {
            return Err(ApiError::unprocessable(format!(
                "model `{key}` belongs to team {}, not {t}",
                export.team
            )));
        }
    }
    let detection = export.to_detection()?;
    let prepared = prepare(&record, &export.team, heuristic(!key_is_raw(key)).as_ref())?;
    Ok((key.to_string(), prepared, detection))
}

#[derive(Debug, Default, Deserialize)]
pub struct ModelQuery {
    model: Option<String>,
    team: Option<String>,
    sort: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PatternsResponse {
    pub model: String,
    pub team: TeamId,
    pub sort: PatternSort,
    pub patterns: Vec<PatternView>,
}

pub async fn patterns(
    State(state): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<ModelQuery>, QueryRejection>,
) -> ApiResult<Json<PatternsResponse>> {
    let q = query(q)?;
    let sort = choice(
        "sort",
        q.sort.as_deref(),
        PatternSort::Frequency,
        &[
            ("frequency", PatternSort::Frequency),
            ("shootings", PatternSort::Shootings),
        ],
    )?;
    let (model, record, detection) =
        load_model(&state, &id, q.model.as_deref(), q.team.as_deref()).await?;
    Ok(Json(PatternsResponse {
        model,
        team: detection.team.clone(),
        sort,
        patterns: pattern_views(&record, &detection, sort, state.config.heatmap_bins),
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FlowResponse {
    pub model: String,
    pub team: TeamId,
    pub phases: Vec<FlowRecord>,
}

pub async fn flow_view(
    State(state): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<ModelQuery>, QueryRejection>,
) -> ApiResult<Json<FlowResponse>> {
    let q = query(q)?;
    let (model, record, detection) =
        load_model(&state, &id, q.model.as_deref(), q.team.as_deref()).await?;
    let phases = flow(&record, &detection, &state.config.pressure)?;
    Ok(Json(FlowResponse {
        model,
        team: detection.team,
        phases,
    }))
}

pub async fn model_export(
    State(state): State<AppState>,
    Path((id, key)): Path<(String, String)>,
) -> ApiResult<Response> {
    state.store.get_match(&id).await?;
    let bytes = state
        .store
        .get_model(&id, &key)
        .await?
        .ok_or_else(|| ApiError::not_found(format!("no model `{key}` for match `{id}`")))?;
    Ok(([(header::CONTENT_TYPE, "application/json")], bytes).into_response())
}

// ---- phases, players, metrics ----

#[derive(Debug, Default, Deserialize)]
pub struct TeamQuery {
    team: Option<String>,
    heuristic: Option<String>,
}

/// Phase detail in the coordinates of `team` (default: the phase's own team).
pub async fn phase(
    State(state): State<AppState>,
    Path((id, pid)): Path<(String, String)>,
    q: Result<Query<TeamQuery>, QueryRejection>,
) -> ApiResult<Json<PhaseDetail>> {
    let q = query(q)?;
    let pid: usize = pid
        .parse()
        .map_err(|_| ApiError::bad_request(format!("phase id `{pid}` is not an index")))?;
    let record = state.store.get_match(&id).await?;
    let phases = segment_phases(&record);
    let phase = phases
        .get(pid)
        .ok_or_else(|| ApiError::not_found(format!("match `{id}` has {} phases", phases.len())))?;
    let team = match q.team.as_deref().filter(|s| !s.is_empty()) {
        None => phase.team.clone(),
        Some(_) => resolve_team(&record, q.team.as_deref())?,
    };
    let prepared = prepare(
        &record,
        &team,
        heuristic(flag("heuristic", q.heuristic.as_deref(), true)?).as_ref(),
    )?;
    Ok(Json(phase_detail(
        &prepared,
        &prepared.phases[pid],
        &state.config.pressure,
    )?))
}

#[derive(Debug, Default, Deserialize)]
pub struct StatsQuery {
    span: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub half: u8,
    pub start: f64,
    pub end: f64,
}

/// `H:START-END`, times in seconds from the start of half `H`.
pub fn parse_span(s: &str) -> Option<Span> {
    let (half, range) = s.split_once(':')?;
    let (start, end) = range.split_once('-')?;
    let span = Span {
        half: half.trim().parse().ok()?,
        start: start.trim().parse().ok()?,
        end: end.trim().parse().ok()?,
    };
    (span.start.is_finite() && span.end.is_finite()).then_some(span)
}

/// `A:10` or `A#10`.
pub fn parse_player(s: &str) -> Option<PlayerId> {
    let (team, shirt) = s.rsplit_once([':', '#'])?;
    (!team.is_empty()).then_some(())?;
    Some(PlayerId::new(team, shirt.parse().ok()?))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StatsResponse {
    pub player: PlayerId,
    pub span: Option<Span>,
    pub frames: usize,
    pub stats: PlayerStats,
}

pub async fn stats(
    State(state): State<AppState>,
    Path((id, player)): Path<(String, String)>,
    q: Result<Query<StatsQuery>, QueryRejection>,
) -> ApiResult<Json<StatsResponse>> {
    let q = query(q)?;
    let record = state.store.get_match(&id).await?;
    let pid = parse_player(&player)
        .ok_or_else(|| ApiError::bad_request(format!("player `{player}` is not TEAM:SHIRT")))?;
    if record.roster_entry(&pid).is_none() {
        return Err(ApiError::not_found(format!(
            "no player {pid} in match `{id}`"
        )));
    }
    let span = match q.span.as_deref().filter(|s| !s.is_empty()) {
        None => None,
        Some(s) => Some(
            parse_span(s)
                .ok_or_else(|| ApiError::bad_request(format!("span `{s}` is not H:START-END")))?,
        ),
    };
    let frames: Vec<_> = match span {
        None => record.frames.clone(),
        Some(sp) => {
            let half: Vec<_> = record.frames_in_half(sp.half).collect();
            let (Some(first), Some(last)) = (half.first(), half.last()) else {
                return Err(ApiError::unprocessable(format!(
                    "no tracking data in half {}",
                    sp.half
                )));
            };
            if sp.start > sp.end || sp.end < first.t || sp.start > last.t {
                return Err(ApiError::unprocessable(format!(
                    "span {s} lies outside half {} tracking ({}-{})",
                    sp.half,
                    first.t,
                    last.t,
                    s = q.span.as_deref().unwrap_or_default()
                )));
            }
            half.into_iter()
                .filter(|f| f.t >= sp.start && f.t <= sp.end)
                .cloned()
                .collect()
        }
    };
    let passes: Vec<_> = record
        .passes()
        .filter(|p| {
            span.is_none_or(|sp| p.half == sp.half && p.t_pass >= sp.start && p.t_pass <= sp.end)
        })
        .cloned()
        .collect();
    let stats = player_stats(&pid, &frames, &passes, &MovementConfig::default())?;
    Ok(Json(StatsResponse {
        frames: frames
            .iter()
            .filter(|f| f.positions.contains_key(&pid))
            .count(),
        player: pid,
        span,
        stats,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MetricsResponse {
    pub team: TeamId,
    pub rows: Vec<MetricsRow>,
}

pub async fn metrics(
    State(state): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<TeamQuery>, QueryRejection>,
) -> ApiResult<Json<MetricsResponse>> {
    let q = query(q)?;
    let record = state.store.get_match(&id).await?;
    let team = resolve_team(&record, q.team.as_deref())?;
    let prepared = prepare(
        &record,
        &team,
        heuristic(flag("heuristic", q.heuristic.as_deref(), true)?).as_ref(),
    )?;
    let rows = metrics_rows(&prepared, &team, &state.config.pressure)?;
    Ok(Json(MetricsResponse { team, rows }))
}

// ---- sequential mining ----

#[derive(Debug, Default, Deserialize)]
pub struct MineQuery {
    team: Option<String>,
    min_support: Option<String>,
    max_len: Option<String>,
    mode: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MinedPattern {
    pub tokens: Vec<String>,
    pub support: usize,
    pub length: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MineResponse {
    pub team: TeamId,
    pub mode: SequenceMode,
    pub min_support: usize,
    pub max_len: usize,
    pub sequence_count: usize,
    pub patterns: Vec<MinedPattern>,
}

pub async fn mine(
    State(state): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<MineQuery>, QueryRejection>,
) -> ApiResult<Json<MineResponse>> {
    let q = query(q)?;
    let record = state.store.get_match(&id).await?;
    let team = resolve_team(&record, q.team.as_deref())?;
    let min_support = number("min_support", q.min_support.as_deref(), 2usize)?;
    let max_len = number("max_len", q.max_len.as_deref(), 8usize)?;
    let mode = choice(
        "mode",
        q.mode.as_deref(),
        SequenceMode::Player,
        &[
            ("player", SequenceMode::Player),
            ("role", SequenceMode::Role),
        ],
    )?;
    let response = blocking(&state, move || {
        let prepared = prepare(&record, &team, None)?;
        let players = prepared
            .team(&team)
            .expect("team resolved above")
            .player_ids();
        let dict = build_dictionary(&players)?;
        let (seqs, labels) = phase_sequences(&prepared, &prepared.phases, &team, &dict, mode)?;
        let found = prefixspan(&seqs, min_support, max_len)?;
        Ok(MineResponse {
            team,
            mode,
            min_support,
            max_len,
            sequence_count: seqs.len(),
            patterns: found
                .into_iter()
                .map(|p| MinedPattern {
                    length: p.tokens.len(),
                    tokens: p.tokens.iter().map(|&t| labels[t].clone()).collect(),
                    support: p.support,
                })
                .collect(),
        })
    })
    .await?;
    Ok(Json(response))
}
