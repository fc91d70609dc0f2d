use std::time::Duration;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use gts_cli::serve::{router, AppState};
use gts_core::game::{Game, LegalMoves};
use gts_core::syntax::{index_subformulas, parse_formula};
use gts_core::{parse_model, Assignment};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const MODEL: &str = "domain: a b c\nrelation P/1\n  + (c)\n  - (a)\n";

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(
            body.map(|b| Body::from(b.to_string()))
                .unwrap_or_else(Body::empty),
        )
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn create(app: &Router, formula: &str, role: &str) -> Value {
    let (status, body) = call(
        app,
        Method::POST,
        "/api/session",
        Some(json!({ "model": MODEL, "formula": formula, "humanRole": role })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body
}

async fn submit(app: &Router, id: &str, choice: usize) -> (StatusCode, Value) {
    call(
        app,
        Method::POST,
        &format!("/api/session/{id}/move"),
        Some(json!({ "choiceIndex": choice })),
    )
    .await
}

#[tokio::test]
async fn position_payload_shows_three_valued_relations() {
    let app = router(AppState::default());
    let body = create(&app, "exists x. P(x)", "eloise").await;
    let pos = &body["position"];
    assert_eq!(pos["domain"], json!(["a", "b", "c"]));
    let statuses: Vec<&str> = pos["relations"][0]["tuples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["status"].as_str().unwrap())
        .collect();
    assert_eq!(statuses, ["-", "?", "+"]);
    assert_eq!(pos["formula"], "[[exists x. P(x)]]");
    assert_eq!(pos["verifier"], "eloise");
    assert_eq!(pos["toMove"], "eloise");
    assert_eq!(body["choices"].as_array().unwrap().len(), 3);
    assert_eq!(body["terminal"], Value::Null);
    assert_eq!(body["humanRole"], "eloise");
}

#[tokio::test]
async fn witness_game_to_an_eloise_win() {
    let app = router(AppState::default());
    let body = create(&app, "exists x. P(x)", "eloise").await;
    let id = body["id"].as_str().unwrap();
    let (status, hint) = call(
        &app,
        Method::POST,
        &format!("/api/session/{id}/hint"),
        Some(json!({"budget": 6})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(hint["verdict"]["outcome"], "verified");
    assert_eq!(hint["suggestedChoice"], 2);

    let (status, res) = submit(&app, id, 2).await;
    assert_eq!(status, StatusCode::OK, "{res}");
    assert_eq!(res["position"]["assignment"], json!({"x": "c"}));
    assert_eq!(res["terminal"]["winner"], "eloise");
    assert_eq!(res["terminal"]["message"], "Eloise wins");
    assert_eq!(res["humanMove"]["move"], "Eloise picks c");
    assert_eq!(res["engineReply"], json!([]));

    let (status, res) = submit(&app, id, 0).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(res["error"]["kind"], "illegal");
}

#[tokio::test]
async fn engine_replies_for_the_other_player() {
    let app = router(AppState::default());
    // the engine verifies and moves first
    let body = create(&app, "exists x. P(x)", "abelard").await;
    assert_eq!(body["engineReply"][0]["move"], "Eloise picks c");
    assert_eq!(body["engineReply"][0]["byEngine"], true);
    assert_eq!(body["terminal"]["winner"], "eloise");

    // the engine falsifies after the human's witness
    let body = create(&app, "exists x. forall y. P(y)", "eloise").await;
    let id = body["id"].as_str().unwrap();
    let (_, res) = submit(&app, id, 1).await;
    assert_eq!(res["engineReply"].as_array().unwrap().len(), 1);
    assert_eq!(res["engineReply"][0]["actor"], "abelard");
    assert_eq!(res["engineReply"][0]["move"], "Abelard picks a");
    assert_eq!(res["terminal"]["winner"], "abelard");
}

#[tokio::test]
async fn truth_teller_cycles_for_twenty_moves() {
    let app = router(AppState::default());
    let body = create(&app, "claim C0. C0", "eloise").await;
    let id = body["id"].as_str().unwrap().to_string();
    let mut hashes = vec![body["position"]["hash"].as_str().unwrap().to_string()];
    for _ in 0..20 {
        let (_, res) = submit(&app, &id, 0).await;
        assert_eq!(res["terminal"], Value::Null);
        assert_eq!(res["choices"].as_array().unwrap().len(), 1);
        hashes.push(res["position"]["hash"].as_str().unwrap().to_string());
    }
    // two positions alternate: the claim binder and the claim atom
    assert_eq!(hashes[0], hashes[2]);
    assert_eq!(hashes[1], hashes[19]);
    assert_eq!(hashes[0], hashes[20]);
    assert_ne!(hashes[0], hashes[1]);
    let (_, state) = call(&app, Method::GET, &format!("/api/session/{id}"), None).await;
    assert_eq!(state["history"].as_array().unwrap().len(), 20);
}

#[tokio::test]
async fn same_moves_give_the_same_positions_and_history_replays() {
    let app = router(AppState::default());
    let formula = "forall x. (insertT P(y). P(x) | deleteT P(z). not P(x))";
    let mut runs = Vec::new();
    for _ in 0..2 {
        let body = create(&app, formula, "eloise").await;
        let id = body["id"].as_str().unwrap().to_string();
        let mut positions = vec![body["position"].clone()];
        for choice in [1, 0, 2] {
            let (status, res) = submit(&app, &id, choice).await;
            if status != StatusCode::OK {
                break;
            }
            positions.push(res["position"].clone());
        }
        let (_, state) = call(&app, Method::GET, &format!("/api/session/{id}"), None).await;
        runs.push((positions, state));
    }
    assert_eq!(runs[0].0, runs[1].0);
    assert_eq!(runs[0].1["history"], runs[1].1["history"]);

    // replaying the logged choices through the engine reproduces every hash
    let (vocab, model) = parse_model(MODEL).unwrap();
    let table = index_subformulas(&parse_formula(formula, &vocab).unwrap());
    let game = Game::new(&table, Default::default()).unwrap();
    let mut p = game.initial_position(model, Assignment::new()).unwrap();
    let history = runs[0].1["history"].as_array().unwrap();
    assert!(history.len() >= 3);
    for entry in history {
        assert_eq!(entry["from"], p.hash_id());
        let LegalMoves::Moves(ms) = game.legal_moves(&p).unwrap() else {
            panic!("ended early")
        };
        p = game
            .apply_move(&p, &ms[entry["choice"].as_u64().unwrap() as usize])
            .unwrap();
        assert_eq!(entry["to"], p.hash_id());
    }
    assert_eq!(runs[0].1["position"]["hash"], p.hash_id());
}

#[tokio::test]
async fn errors_and_deletion() {
    let app = router(AppState::default());
    let (status, body) = call(
        &app,
        Method::POST,
        "/api/session",
        Some(json!({ "model": MODEL, "formula": "exists x. Q(x)", "humanRole": "eloise" })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["kind"], "parse");
    let (status, body) = call(
        &app,
        Method::POST,
        "/api/session",
        Some(json!({ "model": MODEL, "formula": "wnot P(x)", "humanRole": "eloise" })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");

    let body = create(&app, "exists x. P(x)", "eloise").await;
    let id = body["id"].as_str().unwrap();
    let (status, _) = submit(&app, id, 9).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, Method::DELETE, &format!("/api/session/{id}"), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _) = call(&app, Method::GET, &format!("/api/session/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = submit(&app, "nope", 0).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn conventions_and_assignment_in_the_request() {
    let app = router(AppState::default());
    let (status, body) = call(
        &app,
        Method::POST,
        "/api/session",
        Some(json!({
            "model": MODEL,
            "formula": "delete y. P(x)",
            "humanRole": "abelard",
            "assignment": {"x": "c"},
            "config": {"deleteMiss": "ignore"}
        })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    assert_eq!(body["position"]["assignment"], json!({"x": "c"}));
    assert_eq!(
        body["choices"][0]["description"],
        "forced: nothing to delete"
    );
}

#[tokio::test]
async fn concurrent_moves_conflict() {
    let app = router(AppState::default());
    // a wide game so the engine's reply takes a moment
    let (_, body) = call(
        &app,
        Method::POST,
        "/api/session",
        Some(json!({
            "model": MODEL,
            "formula": "(P(x) | forall x. insertT P(y). exists z. forall w. exists v. deleteT P(u). P(v))",
            "humanRole": "eloise",
            "engineBudget": 12
        })),
    )
    .await;
    let id = body["id"].as_str().unwrap();
    let (a, b) = tokio::join!(submit(&app, id, 1), submit(&app, id, 1));
    let mut codes = [a.0, b.0];
    codes.sort();
    assert_eq!(codes, [StatusCode::OK, StatusCode::CONFLICT], "{a:?} {b:?}");
    let (status, state) = call(&app, Method::GET, &format!("/api/session/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state["history"][0]["choice"], 1);
}

#[tokio::test]
async fn idle_sessions_expire() {
    let state = AppState::new(Duration::from_millis(50));
    let app = router(state.clone());
    let body = create(&app, "exists x. P(x)", "eloise").await;
    let id = body["id"].as_str().unwrap();
    let other = create(&app, "exists x. P(x)", "eloise").await;
    tokio::time::sleep(Duration::from_millis(120)).await;
    let (status, _) = call(&app, Method::GET, &format!("/api/session/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(state.expire(), 1);
    assert!(state.is_empty());
    let _ = other;
}
