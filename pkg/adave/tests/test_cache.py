# adave/tests/test_cache.py

"""Tests for the write-once KV cache and its manifest/blob persistence."""

import json

import numpy as np
import pytest

from adave.services.attention import extend_kv_full, record_bytes
from adave.services.cache import KVCache
from adave.utils import (
    CacheIntegrityError,
    CacheMissError,
    CacheNotSealedError,
    DuplicateKeyError,
    MediaIOError,
    SealedCacheError,
)


@pytest.fixture
def sparse_kv(rng):
    keys = [rng.standard_normal((4, 3)).astype(np.float32) for _ in range(2)]
    values = [rng.standard_normal((4, 3)).astype(np.float32) for _ in range(2)]
    return extend_kv_full(keys, values)


@pytest.fixture
def saved_cache(tmp_path, sparse_kv):
    """A sealed two-entry cache written to tmp_path/kv_cache.json."""
    cache = KVCache()
    cache.put(980, 0, sparse_kv)
    cache.put(0, 1, sparse_kv)
    cache.seal()
    return cache.save(tmp_path / "kv_cache.json")


class TestCacheContract:
    def test_put_then_get_after_seal(self, sparse_kv):
        cache = KVCache()
        cache.put(10, 0, sparse_kv)
        cache.seal()
        assert cache.get(10, 0) is sparse_kv
        assert len(cache) == 1

    def test_duplicate_key(self, sparse_kv):
        cache = KVCache()
        cache.put(10, 0, sparse_kv)
        with pytest.raises(DuplicateKeyError) as exc:
            cache.put(10, 0, sparse_kv)
        assert (exc.value.timestep, exc.value.block) == (10, 0)

    def test_write_after_seal(self, sparse_kv):
        cache = KVCache()
        cache.seal()
        with pytest.raises(SealedCacheError):
            cache.put(10, 0, sparse_kv)

    def test_read_before_seal(self, sparse_kv):
        cache = KVCache()
        cache.put(10, 0, sparse_kv)
        with pytest.raises(CacheNotSealedError):
            cache.get(10, 0)

    def test_miss(self, sparse_kv):
        cache = KVCache()
        cache.put(10, 0, sparse_kv)
        cache.seal()
        with pytest.raises(CacheMissError):
            cache.get(10, 1)

    def test_keys_are_ordered(self, sparse_kv):
        cache = KVCache()
        for t, j in [(980, 1), (0, 0), (980, 0)]:
            cache.put(t, j, sparse_kv)
        assert [(k.timestep, k.block) for k in cache.keys()] == [(0, 0), (980, 0), (980, 1)]

    def test_stats_count_every_byte(self, sparse_kv):
        cache = KVCache()
        cache.put(1, 0, sparse_kv)
        cache.put(2, 0, sparse_kv)
        stats = cache.stats()
        assert stats.payload_bytes == 2 * sparse_kv.payload_bytes
        assert stats.total_bytes == 2 * record_bytes(8, 3)


class TestCachePersistence:
    def test_save_requires_seal(self, tmp_path):
        with pytest.raises(CacheNotSealedError):
            KVCache().save(tmp_path / "kv_cache.json")

    def test_round_trip(self, saved_cache, sparse_kv):
        loaded = KVCache.load(saved_cache)
        assert loaded.sealed
        assert len(loaded) == 2
        assert loaded.get(980, 0).same_bytes(sparse_kv)
        assert loaded.get(0, 1).same_bytes(sparse_kv)

    def test_blob_size_equals_stats(self, saved_cache):
        loaded = KVCache.load(saved_cache)
        assert saved_cache.with_suffix(".bin").stat().st_size == loaded.stats().total_bytes

    def test_empty_cache(self, tmp_path):
        cache = KVCache()
        cache.seal()
        path = cache.save(tmp_path / "empty.json")
        assert len(KVCache.load(path)) == 0

    def test_flipped_byte(self, saved_cache):
        blob = saved_cache.with_suffix(".bin")
        data = bytearray(blob.read_bytes())
        data[20] ^= 0xFF
        blob.write_bytes(bytes(data))
        with pytest.raises(CacheIntegrityError):
            KVCache.load(saved_cache)

    def test_tampered_offset(self, saved_cache):
        manifest = json.loads(saved_cache.read_text())
        manifest["records"][1]["offset"] += 4
        saved_cache.write_text(json.dumps(manifest))
        with pytest.raises(CacheIntegrityError):
            KVCache.load(saved_cache)

    def test_repeated_key(self, saved_cache):
        manifest = json.loads(saved_cache.read_text())
        manifest["records"][1] = dict(manifest["records"][0])
        saved_cache.write_text(json.dumps(manifest))
        with pytest.raises(CacheIntegrityError):
            KVCache.load(saved_cache)

    def test_layout_version(self, saved_cache):
        with pytest.raises(CacheIntegrityError):
            KVCache.load(saved_cache, expected_version=99)

    def test_malformed_manifest(self, saved_cache):
        saved_cache.write_text(json.dumps({"blob": 3}))
        with pytest.raises(CacheIntegrityError):
            KVCache.load(saved_cache)

    def test_missing_blob(self, saved_cache):
        saved_cache.with_suffix(".bin").unlink()
        with pytest.raises(MediaIOError):
            KVCache.load(saved_cache)

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(MediaIOError):
            KVCache.load(tmp_path / "absent.json")
