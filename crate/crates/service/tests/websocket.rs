use std::net::SocketAddr;

use futures_util::{SinkExt, StreamExt};
use namer_claimer::session::{Phase, ServerMsg};
use namer_claimer::Transcript;
use namer_claimer_service::{serve_on, Hub};
use serde_json::{json, Value};
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::{TcpListener, TcpStream};
use tokio_tungstenite::tungstenite::Message;
use tokio_tungstenite::{connect_async, MaybeTlsStream, WebSocketStream};

type Client = WebSocketStream<MaybeTlsStream<TcpStream>>;

async fn start(out: &std::path::Path) -> SocketAddr {
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(serve_on(listener, Hub::new(out)));
    addr
}

async fn connect(addr: SocketAddr) -> Client {
    connect_async(format!("ws://{addr}/ws")).await.unwrap().0
}

async fn send(ws: &mut Client, v: Value) {
    ws.send(Message::Text(v.to_string().into())).await.unwrap();
}

async fn recv(ws: &mut Client) -> ServerMsg {
    loop {
        match ws.next().await.unwrap().unwrap() {
            Message::Text(t) => return serde_json::from_str(t.as_str()).unwrap(),
            _ => continue,
        }
    }
}

/// Reads messages up to and including the next state message.
async fn until_state(ws: &mut Client) -> Vec<ServerMsg> {
    let mut got = Vec::new();
    loop {
        let m = recv(ws).await;
        let done = matches!(m, ServerMsg::State { .. } | ServerMsg::Error { .. });
        got.push(m);
        if done {
            return got;
        }
    }
}

fn state_of(msgs: &[ServerMsg]) -> (String, Vec<usize>, Phase) {
    match msgs.iter().rev().find(|m| matches!(m, ServerMsg::State { .. })) {
        Some(ServerMsg::State { id, unclaimed, phase, .. }) => (id.clone(), unclaimed.clone(), *phase),
        _ => panic!("no state in {msgs:?}"),
    }
}

#[tokio::test]
async fn namer_game_against_optimal_engine_is_persisted() {
    let dir = tempfile::tempdir().unwrap();
    let addr = start(dir.path()).await;
    let mut ws = connect(addr).await;

    send(&mut ws, json!({"type": "create", "n": 8, "role": "namer", "engine": "optimal"})).await;
    let (id, unclaimed, phase) = state_of(&until_state(&mut ws).await);
    assert_eq!(unclaimed, (1..=8).collect::<Vec<_>>());
    assert_eq!(phase, Phase::AwaitingName);

    send(&mut ws, json!({"type": "name", "d": 1})).await;
    let msgs = until_state(&mut ws).await;
    assert_eq!(msgs[0], ServerMsg::Claimed { points: vec![1, 3, 5, 8] });

    send(&mut ws, json!({"type": "name", "d": 9})).await;
    assert!(matches!(recv(&mut ws).await, ServerMsg::Error { code, .. } if code == "illegal_distance"));

    let mut rounds = 1;
    loop {
        let (_, unclaimed, phase) = {
            send(&mut ws, json!({"type": "resume", "id": id})).await;
            state_of(&until_state(&mut ws).await)
        };
        if phase == Phase::Finished {
            break;
        }
        let d = (unclaimed[unclaimed.len() - 1] - unclaimed[0]).max(1);
        send(&mut ws, json!({"type": "name", "d": d})).await;
        let msgs = until_state(&mut ws).await;
        rounds += 1;
        if state_of(&msgs).2 == Phase::Finished {
            assert_eq!(recv(&mut ws).await, ServerMsg::End { rounds });
        }
    }

    let saved = std::fs::read_to_string(dir.path().join(format!("{id}.json"))).unwrap();
    let t = Transcript::from_json(&saved).unwrap();
    assert!(t.terminal);
    assert_eq!(t.len(), rounds);
    t.validate().unwrap();
}

#[tokio::test]
async fn claimer_errors_and_session_isolation() {
    let dir = tempfile::tempdir().unwrap();
    let addr = start(dir.path()).await;
    let mut a = connect(addr).await;
    let mut b = connect(addr).await;

    send(&mut a, json!({"type": "create", "n": 8, "role": "claimer", "engine": "repeat:d=1"})).await;
    let opening = until_state(&mut a).await;
    assert_eq!(opening[0], ServerMsg::Named { d: 1 });
    let (id_a, _, phase) = state_of(&opening);
    assert_eq!(phase, Phase::AwaitingClaim);

    send(&mut b, json!({"type": "create", "n": 6, "role": "namer"})).await;
    let (id_b, _, _) = state_of(&until_state(&mut b).await);
    assert_ne!(id_a, id_b);

    send(&mut a, json!({"type": "claim", "points": [2, 3]})).await;
    assert!(matches!(recv(&mut a).await, ServerMsg::Error { code, .. } if code == "illegal_claim"));
    send(&mut a, json!({"type": "name", "d": 2})).await;
    assert!(matches!(recv(&mut a).await, ServerMsg::Error { code, .. } if code == "wrong_phase"));
    send(&mut a, json!({"type": "claim", "points": [1, 3, 5, 7]})).await;
    let msgs = until_state(&mut a).await;
    assert_eq!(msgs[0], ServerMsg::Named { d: 1 });

    send(&mut b, json!({"type": "resume", "id": id_b})).await;
    let (_, unclaimed, phase) = state_of(&until_state(&mut b).await);
    assert_eq!((unclaimed.len(), phase), (6, Phase::AwaitingName));

    send(&mut b, json!({"type": "resume", "id": "nope"})).await;
    assert!(matches!(recv(&mut b).await, ServerMsg::Error { code, .. } if code == "session_not_found"));
    send(&mut b, json!({"type": "teleport"})).await;
    assert!(matches!(recv(&mut b).await, ServerMsg::Error { code, .. } if code == "bad_message"));

    let mut fresh = connect(addr).await;
    send(&mut fresh, json!({"type": "name", "d": 1})).await;
    assert!(matches!(recv(&mut fresh).await, ServerMsg::Error { code, .. } if code == "no_session"));
}

#[tokio::test]
async fn health_check() {
    let dir = tempfile::tempdir().unwrap();
    let addr = start(dir.path()).await;
    let mut tcp = TcpStream::connect(addr).await.unwrap();
    tcp.write_all(b"GET /healthz HTTP/1.1\r\nHost: test\r\nConnection: close\r\n\r\n").await.unwrap();
    let mut body = String::new();
    tcp.read_to_string(&mut body).await.unwrap();
    assert!(body.starts_with("HTTP/1.1 200"), "{body}");
}
