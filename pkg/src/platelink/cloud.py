"""ThingSpeak-style channel updates and an embedded mock server.

The update path is the classic GET protocol: the client hits
``/update?api_key=<KEY>&field1=<plate>&field2=<link>`` and the server
answers the new entry id as decimal text, or ``0`` when the key is
unknown or the query is malformed. Feeds read back through
``/channels/<id>/feeds?results=<n>`` as JSON, most recent n entries in
ascending id order.

The protocol lives in plain functions over an explicit server state so
tests can drive it without sockets; a thin http.server front end exposes
the same handlers on a real port for the CLI.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, quote, urlsplit

DEFAULT_MIN_INTERVAL_S = 15.0
EPOCH = datetime(2026, 1, 1, tzinfo=timezone.utc)  # simulated clock zero


@dataclass(frozen=True)
class ChannelUpdate:
    """One update: plate in field1, link in field2."""

    api_key: str
    field1: str
    field2: str


def build_update_request(update: ChannelUpdate) -> str:
    """Percent-encoded GET path+query for an update."""
    return (
        "/update?api_key=" + quote(update.api_key, safe="")
        + "&field1=" + quote(update.field1, safe="")
        + "&field2=" + quote(update.field2, safe="")
    )


@dataclass(frozen=True)
class FeedEntry:
    entry_id: int
    created_at: str  # ISO-8601 UTC, whole seconds
    field1: str
    field2: str

    def to_json_dict(self) -> dict:
        return {
            "created_at": self.created_at,
            "entry_id": self.entry_id,
            "field1": self.field1,
            "field2": self.field2,
        }


def _timestamp(clock_s: float) -> str:
    t = EPOCH + timedelta(seconds=float(clock_s))
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class MockCloud:
    """Single-channel server state; entry ids are strictly monotone."""

    channel_id: int = 1
    write_key: str = "DESKKEY"
    entries: list[FeedEntry] = field(default_factory=list)
    feed_log_path: str | None = None  # optional JSON-lines append log

    def handle_update(self, request: str, clock_s: float = 0.0) -> str:
        """Process a GET /update request string; returns the body text.

        Unknown keys and malformed queries answer "0" (the update is
        dropped), mirroring the public service's behavior.
        """
        try:
            parts = urlsplit(request)
            if parts.path != "/update":
                return "0"
            q = parse_qs(parts.query, keep_blank_values=True, strict_parsing=True)
        except ValueError:
            return "0"
        keys = q.get("api_key")
        if not keys or keys[0] != self.write_key:
            return "0"
        entry = FeedEntry(
            entry_id=len(self.entries) + 1,
            created_at=_timestamp(clock_s),
            field1=q.get("field1", [""])[0],
            field2=q.get("field2", [""])[0],
        )
        self.entries.append(entry)
        if self.feed_log_path:
            with open(self.feed_log_path, "a", encoding="ascii") as fh:
                fh.write(json.dumps(entry.to_json_dict(), sort_keys=True) + "\n")
        return str(entry.entry_id)

    def query_feed(self, channel_id: int, results: int = 10) -> list[FeedEntry]:
        """Most recent ``results`` entries, ascending by entry id."""
        if channel_id != self.channel_id:
            raise KeyError(f"unknown channel {channel_id}")
        if results < 0:
            raise ValueError("results must be >= 0")
        return self.entries[-results:] if results else []

    def feeds_json(self, channel_id: int, results: int = 10) -> str:
        entries = self.query_feed(channel_id, results)
        doc = {
            "channel": {"id": self.channel_id},
            "feeds": [e.to_json_dict() for e in entries],
        }
        return json.dumps(doc, sort_keys=True)


@dataclass
class RateLimitedUploader:
    """Client-side pacing: effective update times stay min_interval apart.

    Submissions earlier than allowed are deferred, never dropped, so a
    burst comes out as a strictly increasing ladder of effective times.
    """

    min_interval_s: float = DEFAULT_MIN_INTERVAL_S
    _last_effective_s: float | None = None

    def submit(self, clock_s: float) -> float:
        """Effective time the update goes out (>= clock_s)."""
        t = float(clock_s)
        if self._last_effective_s is not None:
            t = max(t, self._last_effective_s + self.min_interval_s)
        self._last_effective_s = t
        return t


# --- HTTP front end ----------------------------------------------------------


class _Handler(BaseHTTPRequestHandler):
    cloud: MockCloud = None  # type: ignore[assignment]
    lock: threading.Lock = None  # type: ignore[assignment]

    def log_message(self, *args):  # quiet by default
        pass

    def _send(self, status: int, body: str, content_type: str) -> None:
        data = body.encode()
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self):
        parts = urlsplit(self.path)
        if parts.path == "/update":
            now = (datetime.now(timezone.utc) - EPOCH).total_seconds()
            with self.lock:
                body = self.cloud.handle_update(self.path, clock_s=now)
            self._send(200, body, "text/plain")
            return
        if parts.path.startswith("/channels/") and parts.path.endswith("/feeds"):
            seg = parts.path.split("/")
            # /channels/<id>/feeds
            if len(seg) == 4 and seg[1] == "channels":
                try:
                    channel_id = int(seg[2])
                    q = parse_qs(parts.query, keep_blank_values=True)
                    results = int(q.get("results", ["10"])[0])
                    with self.lock:
                        body = self.cloud.feeds_json(channel_id, results)
                except (KeyError, ValueError):
                    self._send(404, "not found", "text/plain")
                    return
                self._send(200, body, "application/json")
                return
        self._send(404, "not found", "text/plain")


def make_server(cloud: MockCloud, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    """HTTP server bound to (host, port); port 0 picks a free one.

    Run with ``serve_forever()`` (blocking) or in a thread; the bound port
    is ``server.server_address[1]``.
    """
    handler = type(
        "BoundHandler", (_Handler,), {"cloud": cloud, "lock": threading.Lock()}
    )
    return ThreadingHTTPServer((host, port), handler)
