"""Scriptable threaded HTTP server standing in for chat, NER, and embedding
endpoints during tests. Handlers are registered per path and receive the
parsed JSON body; every request is recorded for capture-style assertions."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


class MockServer:
    def __init__(self):
        self.requests: list[tuple[str, dict]] = []
        self.handlers: dict[str, object] = {}
        self.last_headers: dict[str, str] = {}
        self.port = 0
        self._server = None
        self._thread = None

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def start(self) -> "MockServer":
        owner = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length") or 0)
                raw = self.rfile.read(length)
                try:
                    body = json.loads(raw) if raw else {}
                except json.JSONDecodeError:
                    body = {"_raw": raw.decode("utf-8", "replace")}
                owner.requests.append((self.path, body))
                owner.last_headers = {k.lower(): v for k, v in self.headers.items()}
                fn = owner.handlers.get(self.path)
                if fn is None:
                    self.send_response(404)
                    self.send_header("Content-Length", "0")
                    self.end_headers()
                    return
                status, payload = fn(body)
                data = json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.port = self._server.server_address[1]
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None

    # -- convenience registrations -------------------------------------------

    def chat(self, text_fn):
        """Register a chat handler; text_fn(body) returns the reply text."""
        def handler(body):
            return 200, chat_payload(text_fn(body))

        self.handlers["/v1/chat/completions"] = handler

    def chat_echo(self):
        self.chat(lambda body: body["messages"][-1]["content"])

    def ner(self, mentions_fn, path="/ner"):
        """mentions_fn(text) returns the mention list for the posted text."""
        def handler(body):
            return 200, mentions_fn(body.get("text", ""))

        self.handlers[path] = handler

    def embeddings(self, vector_fn):
        """vector_fn(text) returns one embedding vector per input string."""
        def handler(body):
            inputs = body.get("input", [])
            return 200, {
                "data": [{"embedding": vector_fn(s), "index": k} for k, s in enumerate(inputs)]
            }

        self.handlers["/v1/embeddings"] = handler


def chat_payload(text: str) -> dict:
    return {"choices": [{"message": {"content": text}}]}


def last_user_text(body: dict) -> str:
    return body["messages"][-1]["content"]
