import json

from dimred.cache import Cache, NullCache, digest


def test_digest_ignores_key_order():
    assert digest({"a": 1, "b": [1, 2]}) == digest({"b": [1, 2], "a": 1})
    assert digest({"a": 1}) != digest({"a": 2})


def test_hit_returns_same_document(tmp_path):
    cache = Cache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return {"x": 0.1, "y": [1, 2]}

    first = cache.get_or_compute({"k": 1}, compute)
    second = cache.get_or_compute({"k": 1}, compute)
    assert first == second and len(calls) == 1
    assert (cache.hits, cache.misses) == (1, 1)


def test_corrupt_entry_is_recomputed(tmp_path):
    cache = Cache(tmp_path)
    key = digest({"k": 2})
    cache.put(key, {"v": 1})
    cache.path(key).write_text("{not json")
    assert cache.get(key) is None
    assert not cache.path(key).exists()
    cache.path(key).parent.mkdir(parents=True, exist_ok=True)
    cache.path(key).write_text(json.dumps({"key": "other", "value": {}}))
    assert cache.get(key) is None


def test_no_partial_files_left(tmp_path):
    cache = Cache(tmp_path)
    for i in range(5):
        cache.put(digest(i), {"i": i})
    assert not list(tmp_path.rglob("*.tmp"))
    assert len(list(tmp_path.rglob("*.json"))) == 5


def test_disabled_cache_always_computes(tmp_path):
    for cache in (Cache(tmp_path, enabled=False), NullCache()):
        n = []
        cache.get_or_compute({"k": 3}, lambda: n.append(1) or {"v": 1})
        cache.get_or_compute({"k": 3}, lambda: n.append(1) or {"v": 1})
        assert len(n) == 2
    assert not list(tmp_path.iterdir())
