"""Mock cloud endpoint semantics, encoding, pacing, and the HTTP face."""

import json
import threading
import urllib.error
import urllib.request

import pytest
from hypothesis import given, strategies as st

from platelink.cloud import (
    DEFAULT_MIN_INTERVAL_S,
    EPOCH,
    ChannelUpdate,
    MockCloud,
    RateLimitedUploader,
    build_update_request,
    make_server,
)

ASCII = st.text(
    alphabet=st.characters(min_codepoint=0x20, max_codepoint=0x7E),
    min_size=1,
    max_size=60,
)


def percent_encode_reference(text: str) -> str:
    """Independent byte-wise encoder: unreserved characters pass, the rest
    become uppercase %XX escapes."""
    unreserved = set(
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-._~"
    )
    out = []
    for byte in text.encode("utf-8"):
        ch = chr(byte)
        out.append(ch if ch in unreserved else f"%{byte:02X}")
    return "".join(out)


def test_update_request_layout():
    req = build_update_request(ChannelUpdate("KEY", "ABC123", "img/ABC123-1.jpg"))
    assert req == "/update?api_key=KEY&field1=ABC123&field2=img%2FABC123-1.jpg"


@given(field2=ASCII)
def test_encoding_matches_reference(field2):
    req = build_update_request(ChannelUpdate("K", "ABC123", field2))
    encoded = req.split("&field2=", 1)[1]
    assert encoded == percent_encode_reference(field2)


@given(field1=ASCII, field2=ASCII)
def test_fields_round_trip_through_server(field1, field2):
    cloud = MockCloud(write_key="K")
    body = cloud.handle_update(build_update_request(ChannelUpdate("K", field1, field2)))
    assert body == "1"
    entry = cloud.query_feed(1, results=1)[0]
    assert (entry.field1, entry.field2) == (field1, field2)


def test_entry_ids_monotone():
    cloud = MockCloud()
    ids = [
        cloud.handle_update(
            build_update_request(ChannelUpdate("DESKKEY", f"AAA{i:03d}", "x")),
            clock_s=float(i),
        )
        for i in range(3)
    ]
    assert ids == ["1", "2", "3"]


def test_rejections_answer_zero():
    cloud = MockCloud()
    assert cloud.handle_update("/update?api_key=WRONG&field1=A&field2=B") == "0"
    assert cloud.handle_update("/status?api_key=DESKKEY") == "0"
    assert cloud.handle_update("/update?api_key=DESKKEY&&field1=A") == "0"
    assert cloud.handle_update("/update?field1=A&field2=B") == "0"
    assert cloud.entries == []


def test_timestamps_anchor_to_epoch():
    cloud = MockCloud()
    cloud.handle_update(
        build_update_request(ChannelUpdate("DESKKEY", "AAA000", "x")), clock_s=0.0
    )
    cloud.handle_update(
        build_update_request(ChannelUpdate("DESKKEY", "AAA001", "x")),
        clock_s=86400.0 + 61.0,
    )
    feed = cloud.query_feed(1)
    assert feed[0].created_at == "2026-01-01T00:00:00Z"
    assert feed[1].created_at == "2026-01-02T00:01:01Z"
    assert EPOCH.year == 2026


def test_query_feed_returns_most_recent_ascending():
    cloud = MockCloud()
    for i in range(5):
        cloud.handle_update(
            build_update_request(ChannelUpdate("DESKKEY", f"AAA{i:03d}", "x")),
            clock_s=float(i),
        )
    feed = cloud.query_feed(1, results=2)
    assert [e.entry_id for e in feed] == [4, 5]
    with pytest.raises(KeyError):
        cloud.query_feed(2)
    with pytest.raises(ValueError):
        cloud.query_feed(1, results=-1)


def test_feeds_json_shape():
    cloud = MockCloud()
    cloud.handle_update(
        build_update_request(ChannelUpdate("DESKKEY", "AAA000", "img/a.jpg")), 5.0
    )
    doc = json.loads(cloud.feeds_json(1))
    assert doc["channel"]["id"] == 1
    assert doc["feeds"] == [
        {
            "created_at": "2026-01-01T00:00:05Z",
            "entry_id": 1,
            "field1": "AAA000",
            "field2": "img/a.jpg",
        }
    ]


def test_feed_log_append(tmp_path):
    log = tmp_path / "feed.jsonl"
    cloud = MockCloud(feed_log_path=str(log))
    cloud.handle_update(
        build_update_request(ChannelUpdate("DESKKEY", "AAA000", "x")), 1.0
    )
    cloud.handle_update(
        build_update_request(ChannelUpdate("DESKKEY", "BBB111", "y")), 2.0
    )
    lines = log.read_text().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[1])["field1"] == "BBB111"


# --- pacing -----------------------------------------------------------------


def test_rate_limiter_ladder():
    lad = RateLimitedUploader()
    assert DEFAULT_MIN_INTERVAL_S == 15.0
    assert [lad.submit(t) for t in (0.0, 1.0, 2.0, 50.0, 51.0)] == [
        0.0, 15.0, 30.0, 50.0, 65.0,
    ]


def test_rate_limiter_zero_interval_passthrough():
    lad = RateLimitedUploader(0.0)
    assert [lad.submit(t) for t in (3.0, 3.0, 4.5)] == [3.0, 3.0, 4.5]


# --- HTTP front end ----------------------------------------------------------


@pytest.fixture()
def http_server():
    cloud = MockCloud()
    server = make_server(cloud, "127.0.0.1", 0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server, cloud
    server.shutdown()
    server.server_close()


def _get(server, path):
    port = server.server_address[1]
    with urllib.request.urlopen(f"http://127.0.0.1:{port}{path}") as resp:
        return resp.status, resp.read().decode()


def test_http_update_and_feed(http_server):
    server, cloud = http_server
    status, body = _get(
        server, "/update?api_key=DESKKEY&field1=QQQ111&field2=img%2FQQQ111-1.jpg"
    )
    assert (status, body) == (200, "1")
    status, body = _get(server, "/channels/1/feeds?results=1")
    assert status == 200
    doc = json.loads(body)
    assert doc["feeds"][0]["field1"] == "QQQ111"
    assert doc["feeds"][0]["field2"] == "img/QQQ111-1.jpg"
    assert len(cloud.entries) == 1


def test_http_unknown_paths(http_server):
    server, _ = http_server
    with pytest.raises(urllib.error.HTTPError) as exc:
        _get(server, "/nothing/here")
    assert exc.value.code == 404
