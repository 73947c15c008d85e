"""Tests for canonical serialization, digests, and the optional cache."""

import json

from forestcalc import __version__
from forestcalc.envelope import (
    cache_directory,
    cache_get,
    cache_key,
    cache_put,
    canonical_json,
    envelope,
    payload_digest,
    render,
)


def test_canonical_json_sorts_and_ends_with_newline():
    a = canonical_json({"b": 1, "a": 2})
    b = canonical_json({"a": 2, "b": 1})
    assert a == b == '{"a":2,"b":1}\n'
    assert "\n" not in a[:-1]


def test_canonical_json_no_spaces():
    out = canonical_json({"k": [1, 2, {"x": True}]})
    assert " " not in out


def test_payload_digest_sensitivity():
    base = payload_digest({"x": 1})
    assert payload_digest({"x": 1}) == base
    assert payload_digest({"x": 2}) != base
    assert payload_digest({"y": 1}) != base
    assert len(base) == 64


def test_envelope_fields():
    env = envelope("tspace", {"lam": "(0 1)"}, {"rank": 1})
    assert env["tool"] == "forestcalc"
    assert env["version"] == __version__
    assert env["command"] == "tspace"
    assert env["digest"] == payload_digest({"rank": 1})


def test_render_json_is_canonical():
    env = envelope("x", {}, {"v": 1})
    out = render(env, "json")
    assert out == canonical_json(env)
    assert json.loads(out)["payload"] == {"v": 1}


def test_render_text_mentions_command_and_digest():
    env = envelope("goodness", {"all": True}, {"verdict": "good"})
    out = render(env, "text")
    assert "goodness" in out.splitlines()[0]
    assert out.splitlines()[-1].startswith("digest ")
    assert "verdict" in out


# --- cache ---------------------------------------------------------------------


def test_cache_off_by_default(monkeypatch):
    monkeypatch.delenv("FORESTCALC_CACHE", raising=False)
    assert cache_directory() is None


def test_cache_directory_resolution(monkeypatch, tmp_path):
    monkeypatch.delenv("FORESTCALC_CACHE", raising=False)
    assert cache_directory(str(tmp_path)) == str(tmp_path)
    assert cache_directory("1").endswith(".cache/forestcalc")
    monkeypatch.setenv("FORESTCALC_CACHE", str(tmp_path / "env"))
    assert cache_directory() == str(tmp_path / "env")
    # the flag wins over the environment
    assert cache_directory(str(tmp_path)) == str(tmp_path)


def test_cache_key_sensitivity():
    base = cache_key("enumerate", {"n": 2})
    assert cache_key("enumerate", {"n": 2}) == base
    assert cache_key("enumerate", {"n": 3}) != base
    assert cache_key("goodness", {"n": 2}) != base
    assert cache_key("enumerate", {"n": 2}, (b"blob",)) != base
    assert cache_key("enumerate", {"n": 2}, (b"a", b"b")) != cache_key(
        "enumerate", {"n": 2}, (b"ab",)
    )


def test_cache_roundtrip(tmp_path):
    d = str(tmp_path / "cache")
    key = cache_key("tspace", {"lam": "(0 1)"})
    assert cache_get(d, key) is None
    env = envelope("tspace", {"lam": "(0 1)"}, {"rank": 1})
    cache_put(d, key, env)
    back = cache_get(d, key)
    assert back == json.loads(canonical_json(env))
    # unrelated keys stay empty
    assert cache_get(d, cache_key("tspace", {"lam": "(0 2)"})) is None


def test_cache_get_tolerates_garbage(tmp_path):
    d = tmp_path
    key = "0" * 64
    (d / (key + ".json")).write_text("{not json", encoding="utf-8")
    assert cache_get(str(d), key) is None
