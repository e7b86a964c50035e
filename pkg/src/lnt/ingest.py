"""Snapshot and exchange-rate ingestion plus the synthetic generator.

The canonical snapshot format is the JSON document described in the
README; remote explorers are expected to serve the same schema (field
mapping for other sources belongs in adapters, not here).
"""

from __future__ import annotations

import json
import math
import random
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from datetime import date, datetime, timezone

from .errors import FetchError, RateLookupError, RatesParseError, SnapshotParseError

DEFAULT_TIMESTAMP = "2018-01-01T00:00:00Z"


@dataclass(frozen=True)
class Channel:
    channel_id: str
    node1_pub: str
    node2_pub: str
    capacity_sat: int


@dataclass(frozen=True)
class Snapshot:
    """One dated view of the network: declared nodes plus channels."""

    timestamp: datetime
    nodes: tuple[str, ...]
    channels: tuple[Channel, ...]
    # endpoints that appeared only in channel records (not serialized)
    auto_added_nodes: int = field(default=0, compare=False)

    @property
    def snapshot_date(self) -> date:
        return self.timestamp.date()


def _parse_timestamp(raw: str) -> datetime:
    try:
        ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except (ValueError, AttributeError, TypeError):
        raise SnapshotParseError(f"invalid timestamp: {raw!r}") from None
    if ts.tzinfo is None:
        raise SnapshotParseError(f"timestamp must carry a UTC offset: {raw!r}")
    return ts.astimezone(timezone.utc)


def parse_snapshot(data: bytes | str) -> Snapshot:
    """Parse and validate a snapshot document.

    Unknown fields are ignored. Channel endpoints that are missing from
    the node list are added and counted in ``auto_added_nodes``.
    """
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SnapshotParseError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SnapshotParseError("top-level value must be an object")
    for key in ("timestamp", "nodes", "channels"):
        if key not in doc:
            raise SnapshotParseError(f"missing required field {key!r}")
    ts = _parse_timestamp(doc["timestamp"])

    declared: list[str] = []
    seen_nodes: set[str] = set()
    for i, rec in enumerate(doc["nodes"]):
        if not isinstance(rec, dict) or "pub_key" not in rec:
            raise SnapshotParseError(f"node #{i} missing pub_key")
        key = rec["pub_key"]
        if not isinstance(key, str) or not key:
            raise SnapshotParseError(f"node #{i} has invalid pub_key")
        if key not in seen_nodes:
            seen_nodes.add(key)
            declared.append(key)

    channels: list[Channel] = []
    seen_ids: set[str] = set()
    auto_added: list[str] = []
    for i, rec in enumerate(doc["channels"]):
        if not isinstance(rec, dict):
            raise SnapshotParseError(f"channel #{i} is not an object")
        cid = rec.get("channel_id")
        label = repr(cid) if cid else f"#{i}"
        for fieldname in ("channel_id", "node1_pub", "node2_pub", "capacity_sat"):
            if fieldname not in rec:
                raise SnapshotParseError(f"channel {label} missing {fieldname!r}")
        if cid in seen_ids:
            raise SnapshotParseError(f"duplicate channel_id {cid!r}")
        seen_ids.add(cid)
        cap = rec["capacity_sat"]
        if not isinstance(cap, int) or isinstance(cap, bool) or cap <= 0:
            raise SnapshotParseError(
                f"channel {cid!r} has non-positive capacity_sat: {cap!r}"
            )
        for end in (rec["node1_pub"], rec["node2_pub"]):
            if not isinstance(end, str) or not end:
                raise SnapshotParseError(f"channel {cid!r} has invalid endpoint")
            if end not in seen_nodes:
                seen_nodes.add(end)
                auto_added.append(end)
        channels.append(Channel(cid, rec["node1_pub"], rec["node2_pub"], cap))

    return Snapshot(
        timestamp=ts,
        nodes=tuple(declared + auto_added),
        channels=tuple(channels),
        auto_added_nodes=len(auto_added),
    )


def serialize_snapshot(snapshot: Snapshot) -> bytes:
    """Canonical UTF-8 JSON encoding; stable bytes for identical snapshots."""
    doc = {
        "timestamp": snapshot.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
        "nodes": [{"pub_key": k} for k in snapshot.nodes],
        "channels": [
            {
                "channel_id": c.channel_id,
                "node1_pub": c.node1_pub,
                "node2_pub": c.node2_pub,
                "capacity_sat": c.capacity_sat,
            }
            for c in snapshot.channels
        ],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Exchange rates


@dataclass(frozen=True)
class RateTable:
    rates: dict[date, float]

    def lookup(self, d: date) -> float:
        try:
            return self.rates[d]
        except KeyError:
            raise RateLookupError(f"no BTC/USD rate for {d.isoformat()}") from None


def parse_rates(data: bytes | str) -> RateTable:
    """Parse the ``date,btc_usd`` CSV into a rate table."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "date,btc_usd":
        raise RatesParseError("expected header 'date,btc_usd'")
    rates: dict[date, float] = {}
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 2:
            raise RatesParseError(f"malformed row: {ln!r}")
        try:
            d = date.fromisoformat(parts[0].strip())
            rate = float(parts[1])
        except ValueError:
            raise RatesParseError(f"malformed row: {ln!r}") from None
        if not math.isfinite(rate) or rate <= 0:
            raise RatesParseError(f"non-positive rate for {d.isoformat()}")
        if d in rates:
            raise RatesParseError(f"duplicate date {d.isoformat()}")
        rates[d] = rate
    return RateTable(rates)


# ---------------------------------------------------------------------------
# Remote fetch


def fetch_snapshot(
    endpoint_url: str,
    auth_token: str | None = None,
    *,
    max_attempts: int = 3,
    backoff_base: float = 0.5,
) -> Snapshot:
    """GET a snapshot document and parse it.

    Transport failures and 5xx/429 responses are retried with
    exponential backoff (``backoff_base * 2**attempt``); other HTTP
    errors and body parse errors fail immediately.
    """
    headers = {"Accept": "application/json"}
    if auth_token:
        headers["Authorization"] = f"Bearer {auth_token}"
    last: str = "no attempts made"
    for attempt in range(max_attempts):
        if attempt:
            time.sleep(backoff_base * 2 ** (attempt - 1))
        req = urllib.request.Request(endpoint_url, headers=headers)
        try:
            with urllib.request.urlopen(req, timeout=30) as resp:
                body = resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code >= 500 or exc.code == 429:
                last = f"HTTP {exc.code}"
                continue
            raise FetchError(f"HTTP {exc.code} from {endpoint_url}") from None
        except urllib.error.URLError as exc:
            last = f"transport error: {exc.reason}"
            continue
        return parse_snapshot(body)
    raise FetchError(f"giving up on {endpoint_url} after {max_attempts} attempts ({last})")


# ---------------------------------------------------------------------------
# Synthetic snapshots


def generate_synthetic(
    n_nodes: int,
    m_attach: int,
    capacity_lognormal_mu: float,
    capacity_lognormal_sigma: float,
    seed: int,
    timestamp: str = DEFAULT_TIMESTAMP,
) -> Snapshot:
    """Preferential-attachment snapshot with log-normal channel capacities.

    Seeded with a complete graph on ``m_attach + 1`` nodes; every later
    node attaches to ``m_attach`` distinct existing nodes chosen with
    probability proportional to current degree. Total channel count is
    therefore ``m*(m+1)/2 + (n-m-1)*m``. Capacities are drawn log-normal
    in satoshi and clamped to >= 1. Deterministic for a fixed seed.
    """
    if n_nodes < 3:
        raise ValueError(f"n_nodes must be >= 3, got {n_nodes}")
    if m_attach < 1:
        raise ValueError(f"m_attach must be >= 1, got {m_attach}")
    if m_attach >= n_nodes:
        raise ValueError("m_attach must be smaller than n_nodes")
    if not capacity_lognormal_sigma > 0:
        raise ValueError("capacity_lognormal_sigma must be positive")
    rng = random.Random(seed)
    width = len(str(n_nodes - 1))
    names = [f"n{i:0{width}d}" for i in range(n_nodes)]
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []
    for i in range(m_attach + 1):
        for j in range(i + 1, m_attach + 1):
            edges.append((i, j))
            repeated.extend((i, j))
    for v in range(m_attach + 1, n_nodes):
        targets: set[int] = set()
        while len(targets) < m_attach:
            targets.add(rng.choice(repeated))
        for t in sorted(targets):
            edges.append((t, v))
            repeated.extend((t, v))
    channels = []
    cwidth = len(str(len(edges) - 1))
    for k, (a, b) in enumerate(edges):
        sat = max(1, round(rng.lognormvariate(capacity_lognormal_mu, capacity_lognormal_sigma)))
        channels.append(
            Channel(
                channel_id=f"c{k:0{cwidth}d}",
                node1_pub=names[a],
                node2_pub=names[b],
                capacity_sat=sat,
            )
        )
    return Snapshot(
        timestamp=_parse_timestamp(timestamp),
        nodes=tuple(names),
        channels=tuple(channels),
    )
