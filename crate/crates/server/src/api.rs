//! HTTP routes. Bodies are JSON; every error is a JSON object with
//! `status` and `error`, plus `report` for validation failures and
//! `version` for conflicts.

use std::collections::BTreeMap;
use std::path::{Component, Path as FsPath, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::extract::{Path, Query, State};
use axum::http::header::{CONTENT_TYPE, ETAG, IF_MATCH};
use axum::http::{HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch, post};
use axum::{Json, Router};
use emissor::ekg::{
    detect_conflicts, emit_from_scenario, emit_signal, query, serialize_trig, triple_terms, write_batch, BatchKind,
    ClaimQuery, EkgError, EmitConfig, QueryResult,
};
use emissor::model::{now_millis, AnnotationValue, Mention, NewAnnotation, Perspective, Segment, Signal, SignalRuler};
use emissor::storage::{
    annotation_from_json, mention_to_json, read_media_row, scenario_to_json, segment_from_json, signal_to_json,
    StorageError,
};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::ApiError;
use crate::repo::Repository;

#[derive(Debug)]
pub struct AppState {
    pub repo: Repository,
    pub emit: EmitConfig,
}

type Shared = State<Arc<AppState>>;
type ApiResult = Result<Response, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/scenarios", get(list_scenarios))
        .route("/scenarios/{id}", get(get_scenario))
        .route("/scenarios/{id}/media/{*path}", get(get_media))
        .route("/scenarios/{id}/signals/{sid}/mentions", post(create_mention))
        .route("/mentions/{mid}", patch(update_mention).delete(delete_mention))
        .route("/identities", get(list_identities).post(create_identity))
        .route("/scenarios/{id}/triples", post(create_triple))
        .route("/scenarios/{id}/emit", post(emit))
        .route("/scenarios/{id}/graph", get(graph))
        .route("/scenarios/{id}/query", get(run_query))
        .route("/scenarios/{id}/conflicts", get(conflicts))
        .with_state(state)
}

/// Runs filesystem work off the async executor.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(ApiError::internal)?
}

fn etag(version: u64) -> HeaderValue {
    HeaderValue::from_str(&format!("\"{version}\"")).expect("digits are a valid header")
}

fn with_version(status: StatusCode, version: u64, body: Value) -> Response {
    let mut r = (status, Json(body)).into_response();
    r.headers_mut().insert(ETAG, etag(version));
    r
}

/// Version from `If-Match`; `*` or no header means "any".
fn if_match(headers: &HeaderMap) -> Result<Option<u64>, ApiError> {
    let Some(v) = headers.get(IF_MATCH) else {
        return Ok(None);
    };
    let text = v
        .to_str()
        .map_err(|_| ApiError::BadRequest("If-Match is not text".into()))?
        .trim();
    if text == "*" {
        return Ok(None);
    }
    let bare = text.trim_start_matches("W/").trim_matches('"');
    bare.parse()
        .map(Some)
        .map_err(|_| ApiError::BadRequest(format!("If-Match {text:?} is not a scenario version")))
}

fn body_json(body: &str) -> Result<Value, ApiError> {
    serde_json::from_str(body).map_err(|e| ApiError::BadRequest(format!("request body: {e}")))
}

fn decode_err(e: StorageError) -> ApiError {
    ApiError::BadRequest(e.to_string())
}

const REQUEST: &str = "<request>";

fn ruler_json(start: i64, end: i64) -> Value {
    json!({ "start": start, "end": end })
}

async fn list_scenarios(State(app): Shared) -> ApiResult {
    let list = blocking(move || {
        let mut out = Vec::new();
        for id in app.repo.ids()? {
            let snap = app.repo.read(&id)?;
            let s = &snap.loaded.bundle.scenario;
            out.push(json!({
                "id": s.id,
                "ruler": ruler_json(s.ruler.start, s.ruler.end),
                "modalities": s.signals.keys().map(|m| m.as_str()).collect::<Vec<_>>(),
                "version": snap.version,
            }));
        }
        Ok(out)
    })
    .await?;
    Ok(Json(list).into_response())
}

async fn get_scenario(State(app): Shared, Path(id): Path<String>) -> ApiResult {
    let snap = blocking(move || app.repo.read(&id)).await?;
    let bundle = &snap.loaded.bundle;
    let signals: Map<String, Value> = bundle
        .signals
        .iter()
        .map(|(m, list)| (m.to_string(), list.iter().map(signal_to_json).collect()))
        .collect();
    let body = json!({
        "version": snap.version,
        "scenario": scenario_to_json(&bundle.scenario),
        "signals": signals,
        "warnings": snap.loaded.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    });
    Ok(with_version(StatusCode::OK, snap.version, body))
}

#[derive(Debug, Deserialize)]
struct MediaQuery {
    row: Option<usize>,
}

fn content_type(path: &FsPath) -> &'static str {
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().to_lowercase())
        .unwrap_or_default();
    match ext.as_str() {
        "jpg" | "jpeg" => "image/jpeg",
        "png" => "image/png",
        "csv" => "text/csv; charset=utf-8",
        "json" | "jsonld" => "application/json",
        "trig" => "application/trig",
        "wav" => "audio/wav",
        "mp3" => "audio/mpeg",
        "mp4" => "video/mp4",
        "txt" => "text/plain; charset=utf-8",
        _ => "application/octet-stream",
    }
}

/// Media bytes, read-only. With `?row=n` on a dialogue CSV the response is
/// the utterance of data row `n` as plain text.
async fn get_media(
    State(app): Shared,
    Path((id, path)): Path<(String, String)>,
    Query(q): Query<MediaQuery>,
) -> ApiResult {
    blocking(move || {
        let snap = app.repo.read(&id)?;
        let rel = PathBuf::from(&path);
        if rel.components().any(|c| !matches!(c, Component::Normal(_))) {
            return Err(ApiError::NotFound(format!("media {path}")));
        }
        let file = snap.dir.join(&rel);
        if !file.is_file() {
            return Err(ApiError::NotFound(format!("media {path}")));
        }
        if let Some(row) = q.row {
            let r = read_media_row(&file, row).map_err(|e| match e {
                StorageError::BadHeader { .. } => ApiError::BadRequest(e.to_string()),
                other => ApiError::storage(other),
            })?;
            return Ok(([(CONTENT_TYPE, "text/plain; charset=utf-8")], r.utterance).into_response());
        }
        let bytes = std::fs::read(&file).map_err(|e| ApiError::internal(StorageError::io(&file, e)))?;
        let mut resp = Response::new(Body::from(bytes));
        resp.headers_mut()
            .insert(CONTENT_TYPE, HeaderValue::from_static(content_type(&file)));
        Ok(resp)
    })
    .await
}

/// Segments from a request; `container_id` defaults to the signal.
fn segments_from(body: &Value, default_container: &str) -> Result<Option<Vec<Segment>>, ApiError> {
    let Some(list) = body.get("segments").or_else(|| body.get("segment")) else {
        return Ok(None);
    };
    let list = list
        .as_array()
        .ok_or_else(|| ApiError::BadRequest("segments must be an array".into()))?;
    list.iter()
        .map(|seg| {
            let mut seg = seg.clone();
            if let Some(obj) = seg.as_object_mut() {
                obj.entry("container_id").or_insert_with(|| default_container.into());
            }
            segment_from_json(&seg, FsPath::new(REQUEST)).map_err(decode_err)
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// Annotations from a request; a missing timestamp means "now".
fn annotations_from(body: &Value) -> Result<Option<Vec<NewAnnotation>>, ApiError> {
    let Some(list) = body.get("annotations") else {
        return Ok(None);
    };
    let list = list
        .as_array()
        .ok_or_else(|| ApiError::BadRequest("annotations must be an array".into()))?;
    let now = now_millis();
    list.iter()
        .map(|a| {
            let mut a = a.clone();
            if let Some(obj) = a.as_object_mut() {
                obj.entry("timestamp").or_insert_with(|| now.into());
            }
            annotation_from_json(&a, FsPath::new(REQUEST))
                .map(NewAnnotation::from)
                .map_err(decode_err)
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

async fn create_mention(
    State(app): Shared,
    Path((id, sid)): Path<(String, String)>,
    headers: HeaderMap,
    body: String,
) -> ApiResult {
    let expected = if_match(&headers)?;
    let body = body_json(&body)?;
    let segments = segments_from(&body, &sid)?.unwrap_or_default();
    let annotations = annotations_from(&body)?.unwrap_or_default();
    let (mention, version) = blocking(move || {
        app.repo.mutate(&id, expected, |bundle| {
            bundle.add_mention(&sid, segments, annotations).map_err(ApiError::model)
        })
    })
    .await?;
    Ok(with_version(StatusCode::CREATED, version, mention_to_json(&mention)))
}

async fn update_mention(State(app): Shared, Path(mid): Path<String>, headers: HeaderMap, body: String) -> ApiResult {
    let expected = if_match(&headers)?;
    let body = body_json(&body)?;
    let (mention, version) = blocking(move || {
        let id = app.repo.scenario_of_mention(&mid)?;
        app.repo.mutate(&id, expected, |bundle| {
            let (signal, current) = bundle
                .find_mention(&mid)
                .ok_or_else(|| ApiError::NotFound(format!("mention {mid}")))?;
            let mut updated: Mention = current.clone();
            if let Some(segments) = segments_from(&body, &signal.id)? {
                updated.segments = segments;
            }
            if let Some(annotations) = annotations_from(&body)? {
                updated.annotations = annotations
                    .into_iter()
                    .map(|a| {
                        let ts = a.timestamp.unwrap_or_else(now_millis);
                        emissor::model::Annotation::new(a.kind, a.value, a.source, ts)
                    })
                    .collect();
            }
            bundle.replace_mention(updated.clone()).map_err(ApiError::model)?;
            Ok(updated)
        })
    })
    .await?;
    Ok(with_version(StatusCode::OK, version, mention_to_json(&mention)))
}

async fn delete_mention(State(app): Shared, Path(mid): Path<String>, headers: HeaderMap) -> ApiResult {
    let expected = if_match(&headers)?;
    let (_, version) = blocking(move || {
        let id = app.repo.scenario_of_mention(&mid)?;
        app.repo.mutate(&id, expected, |bundle| {
            bundle.remove_mention(&mid).map_err(ApiError::model)
        })
    })
    .await?;
    let mut r = StatusCode::NO_CONTENT.into_response();
    r.headers_mut().insert(ETAG, etag(version));
    Ok(r)
}

async fn list_identities(State(app): Shared) -> ApiResult {
    let list = blocking(move || app.repo.identities()).await?;
    Ok(Json(list).into_response())
}

#[derive(Debug, Deserialize)]
struct IdentityRequest {
    name: String,
    class: Option<String>,
}

/// Returns the identity with the given name, minting one when nobody has
/// that name (201) and reusing the existing one otherwise (200).
async fn create_identity(State(app): Shared, body: String) -> ApiResult {
    let req: IdentityRequest =
        serde_json::from_str(&body).map_err(|e| ApiError::BadRequest(format!("request body: {e}")))?;
    if req.name.trim().is_empty() {
        return Err(ApiError::unprocessable("identity name is empty"));
    }
    let (identity, created) = blocking(move || app.repo.mint_identity(&req.name, req.class.as_deref())).await?;
    let status = if created { StatusCode::CREATED } else { StatusCode::OK };
    Ok((status, Json(identity)).into_response())
}

/// Segments covering a whole signal.
fn whole_signal(signal: &Signal) -> Vec<Segment> {
    use emissor::model::{BoundingBox, IndexSegment};
    match &signal.ruler {
        SignalRuler::Index(r) => vec![Segment::Index(IndexSegment::new(&signal.id, r.start, r.stop))],
        SignalRuler::MultiIndex(r) => vec![Segment::Box(BoundingBox::new(&signal.id, r.bounds))],
    }
}

fn ekg_error(e: EkgError) -> ApiError {
    match e {
        EkgError::UnknownSignal(_) => ApiError::NotFound(e.to_string()),
        EkgError::InvalidAttributionDimension(_) => ApiError::unprocessable(e),
        EkgError::Partition(_) => ApiError::Internal(e.to_string()),
    }
}

/// Adds a triple annotation, either to an existing mention (`mention`) or
/// on a new mention over `segments` of `signal` (the whole signal when no
/// segments are given). Responds with the claim the triple becomes in the
/// scenario's graph.
async fn create_triple(State(app): Shared, Path(id): Path<String>, headers: HeaderMap, body: String) -> ApiResult {
    let expected = if_match(&headers)?;
    let body = body_json(&body)?;
    let mut value = body.clone();
    let obj = value
        .as_object_mut()
        .ok_or_else(|| ApiError::BadRequest("request body must be an object".into()))?;
    for key in [
        "signal",
        "mention",
        "segments",
        "segment",
        "annotation_source",
        "timestamp",
    ] {
        obj.remove(key);
    }
    obj.insert("type".into(), "Triple".into());
    let source = body
        .get("annotation_source")
        .and_then(Value::as_str)
        .unwrap_or("annotation_tool");
    let annotation = json!({
        "type": "triple",
        "value": value,
        "source": source,
        "timestamp": body.get("timestamp").cloned().unwrap_or_else(|| now_millis().into()),
    });
    let annotation = annotation_from_json(&annotation, FsPath::new(REQUEST)).map_err(decode_err)?;
    let AnnotationValue::Triple(triple) = &annotation.value else {
        return Err(ApiError::BadRequest("not a triple".into()));
    };
    Perspective::from_raw(&triple.perspective).map_err(ApiError::unprocessable)?;
    let terms = triple_terms(triple);
    let mention_id = body.get("mention").and_then(Value::as_str).map(str::to_string);
    let signal_id = body.get("signal").and_then(Value::as_str).map(str::to_string);
    if mention_id.is_none() && signal_id.is_none() {
        return Err(ApiError::BadRequest("give either \"mention\" or \"signal\"".into()));
    }
    let segments = match &signal_id {
        Some(sid) => segments_from(&body, sid)?,
        None => None,
    };

    blocking(move || {
        let ((mention, signal), version) = app.repo.mutate(&id, expected, |bundle| match &mention_id {
            Some(mid) => {
                let (signal, current) = bundle
                    .find_mention(mid)
                    .ok_or_else(|| ApiError::NotFound(format!("mention {mid}")))?;
                let signal = signal.id.clone();
                let mut updated = current.clone();
                updated.annotations.push(annotation);
                bundle.replace_mention(updated).map_err(ApiError::model)?;
                Ok((mid.clone(), signal))
            }
            None => {
                let sid = signal_id.expect("checked above");
                let signal = bundle
                    .signal(&sid)
                    .ok_or_else(|| ApiError::NotFound(format!("signal {sid}")))?;
                let segments = segments.unwrap_or_else(|| whole_signal(signal));
                let m = bundle
                    .add_mention(&sid, segments, vec![NewAnnotation::from(annotation)])
                    .map_err(ApiError::model)?;
                Ok((m.id, sid))
            }
        })?;
        // Dry run against the current graph to learn the claim's name.
        let claim = app.repo.exclusive(&id, |snap, store, _| {
            emit_signal(store, &snap.loaded.bundle, &signal, &app.emit).map_err(ekg_error)?;
            let claim = store.claims().into_iter().find(|c| {
                store
                    .claim_triple(c)
                    .is_some_and(|q| (&q.subject, &q.predicate, &q.object) == (&terms.0, &terms.1, &terms.2))
            });
            Ok(claim)
        })?;
        let body = json!({
            "claim": claim.map(|c| c.as_str().to_string()),
            "mention": mention,
            "signal": signal,
        });
        Ok(with_version(StatusCode::CREATED, version, body))
    })
    .await
}

/// Emits the scenario into its graph and writes the new quads as the next
/// statements file.
async fn emit(State(app): Shared, Path(id): Path<String>) -> ApiResult {
    blocking(move || {
        app.repo.exclusive(&id, |snap, store, rdf| {
            let delta = emit_from_scenario(store, &snap.loaded.bundle, &app.emit).map_err(ekg_error)?;
            let file = if delta.is_empty() {
                None
            } else {
                let path = write_batch(rdf, BatchKind::Statements, &delta).map_err(ApiError::internal)?;
                path.file_name().map(|n| n.to_string_lossy().into_owned())
            };
            Ok(Json(json!({ "added": delta.len(), "total": store.len(), "file": file })).into_response())
        })
    })
    .await
}

#[derive(Debug, Deserialize)]
struct GraphQuery {
    format: Option<String>,
}

async fn graph(State(app): Shared, Path(id): Path<String>, Query(q): Query<GraphQuery>) -> ApiResult {
    let format = q.format.unwrap_or_else(|| "trig".into());
    if format != "trig" {
        return Err(ApiError::BadRequest(format!("unsupported format {format:?}; use trig")));
    }
    let store = blocking(move || app.repo.graph(&id)).await?;
    Ok(([(CONTENT_TYPE, "application/trig")], serialize_trig(&store)).into_response())
}

#[derive(Debug, Default, Deserialize)]
pub struct QueryParams {
    pub s: Option<String>,
    pub p: Option<String>,
    pub o: Option<String>,
    pub t: Option<i64>,
    pub source: Option<String>,
}

impl QueryParams {
    pub fn to_query(&self) -> ClaimQuery {
        ClaimQuery {
            subject: self.s.clone(),
            predicate: self.p.clone(),
            object: self.o.clone(),
            time: self.t,
            source: self.source.clone(),
        }
    }
}

pub fn result_json(r: &QueryResult) -> Value {
    let perspective: BTreeMap<String, String> = r.perspective.to_raw();
    json!({
        "claim": r.claim.as_str(),
        "subject": r.subject.as_str(),
        "predicate": r.predicate.as_str(),
        "object": r.object.lexical(),
        "mention": r.mention.as_str(),
        "source": r.source.as_ref().map(|s| s.as_str()),
        "attribution": r.attribution.as_ref().map(|a| a.as_str()),
        "perspective": perspective,
        "polarity": r.polarity().as_str(),
        "time": r.time,
    })
}

async fn run_query(State(app): Shared, Path(id): Path<String>, Query(q): Query<QueryParams>) -> ApiResult {
    let store = blocking(move || app.repo.graph(&id)).await?;
    let results: Vec<Value> = query(&store, &q.to_query()).iter().map(result_json).collect();
    Ok(Json(results).into_response())
}

async fn conflicts(State(app): Shared, Path(id): Path<String>, Query(q): Query<QueryParams>) -> ApiResult {
    let store = blocking(move || app.repo.graph(&id)).await?;
    let groups: Vec<Value> = detect_conflicts(&store, q.s.as_deref(), q.p.as_deref())
        .iter()
        .map(|g| {
            json!({
                "subject": g.subject.as_str(),
                "predicate": g.predicate.as_str(),
                "sources": g.sources().iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                "entries": g.entries.iter().map(result_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Json(groups).into_response())
}
