//! WebSocket server for live games against an engine.
//!
//! Clients connect to `/ws` and exchange JSON text frames (see
//! [`namer_claimer::session`]). `GET /healthz` answers 200. Finished games
//! are written to `<out_dir>/<id>.json` in the transcript format.

use std::collections::HashMap;
use std::io;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use namer_claimer::session::{parse_client, ClientMsg, Phase, ServerMsg, Session};
use tokio::net::TcpListener;

type Shared = Arc<tokio::sync::Mutex<Session>>;

/// All live and finished sessions of one server.
pub struct Hub {
    sessions: Mutex<HashMap<String, Shared>>,
    out_dir: PathBuf,
}

impl Hub {
    pub fn new(out_dir: impl Into<PathBuf>) -> Arc<Hub> {
        Arc::new(Hub {
            sessions: Mutex::new(HashMap::new()),
            out_dir: out_dir.into(),
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    pub fn transcript_path(&self, id: &str) -> PathBuf {
        self.out_dir.join(format!("{id}.json"))
    }

    fn get(&self, id: &str) -> Option<Shared> {
        self.sessions.lock().unwrap().get(id).cloned()
    }

    fn insert(&self, s: Session) -> Shared {
        let id = s.id().to_string();
        let shared = Arc::new(tokio::sync::Mutex::new(s));
        self.sessions.lock().unwrap().insert(id, shared.clone());
        shared
    }

    fn fresh_id(&self) -> String {
        let sessions = self.sessions.lock().unwrap();
        loop {
            let id = format!("{:016x}", rand::random::<u64>());
            if !sessions.contains_key(&id) {
                return id;
            }
        }
    }
}

pub fn router(hub: Arc<Hub>) -> Router {
    Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route("/ws", get(upgrade))
        .with_state(hub)
}

/// Serves on an already bound listener until the process ends.
pub async fn serve_on(listener: TcpListener, hub: Arc<Hub>) -> io::Result<()> {
    tokio::fs::create_dir_all(hub.out_dir()).await?;
    axum::serve(listener, router(hub)).await
}

/// Blocking entry point used by the command line.
pub fn run(port: u16, out_dir: &Path) -> io::Result<()> {
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = TcpListener::bind(SocketAddr::from(([0, 0, 0, 0], port))).await?;
        eprintln!("listening on {}", listener.local_addr()?);
        serve_on(listener, Hub::new(out_dir)).await
    })
}

async fn upgrade(ws: WebSocketUpgrade, State(hub): State<Arc<Hub>>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| connection(socket, hub))
}

async fn connection(mut socket: WebSocket, hub: Arc<Hub>) {
    let mut current: Option<Shared> = None;
    while let Some(Ok(frame)) = socket.recv().await {
        let replies = match frame {
            Message::Text(text) => step(&hub, &mut current, text.as_str()).await,
            Message::Binary(_) => vec![ServerMsg::error("bad_message", "send JSON text frames")],
            Message::Close(_) => break,
            _ => continue,
        };
        for msg in replies {
            let text = serde_json::to_string(&msg).expect("server messages serialize");
            if socket.send(Message::Text(text.into())).await.is_err() {
                return;
            }
        }
    }
}

/// Handles one client frame for the connection whose session is `current`.
pub async fn step(hub: &Hub, current: &mut Option<Shared>, text: &str) -> Vec<ServerMsg> {
    let msg = match parse_client(text) {
        Ok(m) => m,
        Err(e) => return vec![e],
    };
    match msg {
        ClientMsg::Create { n, role, engine, seed } => {
            match Session::create(hub.fresh_id(), n, role, engine.as_deref(), seed) {
                Ok((s, out)) => {
                    *current = Some(hub.insert(s));
                    out
                }
                Err(e) => vec![e],
            }
        }
        ClientMsg::Resume { id } => match hub.get(&id) {
            Some(s) => {
                let state = s.lock().await.state();
                *current = Some(s);
                vec![state]
            }
            None => vec![ServerMsg::error("session_not_found", format!("no session with id {id:?}"))],
        },
        mv @ (ClientMsg::Name { .. } | ClientMsg::Claim { .. }) => {
            let Some(shared) = current else {
                return vec![ServerMsg::error("no_session", "send create or resume first")];
            };
            let mut s = shared.lock().await;
            let was_live = s.phase() != Phase::Finished;
            let mut out = s.handle(mv);
            if was_live && s.phase() == Phase::Finished {
                let path = hub.transcript_path(s.id());
                if let Err(e) = tokio::fs::write(&path, s.transcript().to_json()).await {
                    out.push(ServerMsg::error(
                        "persist_failed",
                        format!("could not write {}: {e}", path.display()),
                    ));
                }
            }
            out
        }
    }
}
