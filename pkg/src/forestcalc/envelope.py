"""Result envelopes: canonical JSON, content digests, optional caching.

Envelopes make runs comparable: the same computation must serialize to
the same bytes, so timing and host details stay out of the payload.
"""

from __future__ import annotations

import hashlib
import json
import os

from . import __version__

TOOL_NAME = "forestcalc"
CACHE_ENV = "FORESTCALC_CACHE"


def canonical_json(data):
    """Stable serialization: sorted keys, no whitespace, one newline."""
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def payload_digest(payload):
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def envelope(command, config, payload):
    """Wrap a payload with enough context to reproduce it."""
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "command": command,
        "config": config,
        "payload": payload,
        "digest": payload_digest(payload),
    }


def render(env, fmt="json"):
    if fmt == "json":
        return canonical_json(env)
    lines = [f"{env['tool']} {env['version']} :: {env['command']}"]
    for key, value in sorted(env["config"].items()):
        lines.append(f"  {key} = {value}")
    lines.append(_render_value(env["payload"], indent=0))
    lines.append(f"digest {env['digest']}")
    return "\n".join(lines) + "\n"


def _render_value(value, indent):
    pad = "  " * indent
    if isinstance(value, dict):
        parts = []
        for k in sorted(value, key=str):
            sub = _render_value(value[k], indent + 1)
            if "\n" in sub or len(sub) > 60:
                parts.append(f"{pad}{k}:\n{sub}")
            else:
                parts.append(f"{pad}{k}: {sub.strip()}")
        return "\n".join(parts)
    if isinstance(value, (list, tuple)):
        flat = json.dumps(value)
        if len(flat) <= 72:
            return f"{pad}{flat}"
        return "\n".join(_render_value(v, indent) for v in value)
    return f"{pad}{json.dumps(value)}"


# ---------------------------------------------------------------------------
# cache, disabled unless asked for


def cache_directory(flag_value=None):
    """The cache root, or None when caching is off.

    Priority: explicit flag path, then the environment variable; an
    empty value means "default location".
    """
    raw = flag_value if flag_value is not None else os.environ.get(CACHE_ENV)
    if raw is None:
        return None
    if raw in ("", "1", "true"):
        return os.path.join(os.path.expanduser("~"), ".cache", TOOL_NAME)
    return raw


def cache_key(command, config, input_blobs=()):
    """Digest of everything that determines a result."""
    h = hashlib.sha256()
    h.update(__version__.encode())
    h.update(b"\x00")
    h.update(command.encode())
    h.update(b"\x00")
    h.update(canonical_json(config).encode())
    for blob in input_blobs:
        h.update(b"\x00")
        h.update(blob)
    return h.hexdigest()


def cache_get(directory, key):
    path = os.path.join(directory, key + ".json")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return None


def cache_put(directory, key, env):
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, key + ".json")
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(env))
    os.replace(tmp, path)
