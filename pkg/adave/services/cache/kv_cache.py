# adave/services/cache/kv_cache.py

"""
Write-once store of SparseKV per (timestep, block).

The joint pass fills the cache and seals it; the intermediate pass only
reads. Persistence is a JSON manifest (keys, offsets, CRC32 per record) next
to one binary blob of concatenated SparseKV records.
"""

import json
import threading
import zlib
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Union

import pydantic

from adave.config import settings
from adave.models import CacheEntryStats, CacheKey, CacheManifest, CacheRecord, CacheStats, SparseKV
from adave.services.attention.wire import HEADER_BYTES, decode_sparse_kv, encode_sparse_kv
from adave.utils import (
    CacheIntegrityError,
    CacheMissError,
    CacheNotSealedError,
    DuplicateKeyError,
    MediaIOError,
    SealedCacheError,
    get_logger,
)

logger = get_logger(__name__)

PathLike = Union[str, Path]


def _key(timestep: int, block: int) -> CacheKey:
    return CacheKey(timestep=timestep, block=block)


class KVCache:
    """
    In-memory KV cache with seal semantics.

    put is rejected after seal and for a key already present; get requires a
    sealed cache and never recomputes a missing entry.
    """

    def __init__(self, layout_version: Optional[int] = None):
        self.layout_version = (
            settings.kv_layout_version if layout_version is None else layout_version
        )
        self._entries: Dict[CacheKey, SparseKV] = {}
        self._sealed = False
        self._lock = threading.Lock()

    @property
    def sealed(self) -> bool:
        return self._sealed

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: CacheKey) -> bool:
        return key in self._entries

    def keys(self) -> List[CacheKey]:
        """Keys in (timestep, block) order."""
        return sorted(self._entries, key=lambda k: (k.timestep, k.block))

    def items(self) -> Iterator:
        for key in self.keys():
            yield key, self._entries[key]

    def put(self, timestep: int, block: int, sparse: SparseKV) -> None:
        """
        Store one entry.

        Raises:
            SealedCacheError: The cache is sealed
            DuplicateKeyError: The key was already written
        """
        key = _key(timestep, block)
        with self._lock:
            if self._sealed:
                raise SealedCacheError("Cannot write to a sealed KV cache", timestep, block)
            if key in self._entries:
                raise DuplicateKeyError("KV cache entry already written", timestep, block)
            self._entries[key] = sparse
        logger.debug("Cached sparse KV", key=str(key), tokens=sparse.length)

    def seal(self) -> None:
        with self._lock:
            self._sealed = True
        logger.info("Sealed KV cache", entries=len(self._entries))

    def get(self, timestep: int, block: int) -> SparseKV:
        """
        Read one entry.

        Raises:
            CacheNotSealedError: Read before seal
            CacheMissError: Key never written
        """
        if not self._sealed:
            raise CacheNotSealedError(
                "KV cache read before the joint pass sealed it", timestep, block
            )
        try:
            return self._entries[_key(timestep, block)]
        except KeyError:
            raise CacheMissError("KV cache miss", timestep, block) from None

    def stats(self) -> CacheStats:
        """Byte accounting equal to the serialized record sizes."""
        entries = [
            CacheEntryStats(
                timestep=key.timestep,
                block=key.block,
                tokens=kv.length,
                dim=kv.dim,
                payload_bytes=kv.payload_bytes,
                header_bytes=HEADER_BYTES,
            )
            for key, kv in self.items()
        ]
        return CacheStats(
            entries=entries,
            payload_bytes=sum(e.payload_bytes for e in entries),
            header_bytes=sum(e.header_bytes for e in entries),
        )

    def save(self, path: PathLike) -> Path:
        """
        Write `<path>` (JSON manifest) and `<path stem>.bin` (blob).

        Raises:
            CacheNotSealedError: Cache not sealed
            MediaIOError: Filesystem failure
        """
        if not self._sealed:
            raise CacheNotSealedError("Only a sealed KV cache can be saved")
        path = Path(path)
        blob_path = path.with_suffix(".bin")

        records = []
        chunks = []
        offset = 0
        for key, kv in self.items():
            data = encode_sparse_kv(kv)
            records.append(
                CacheRecord(
                    timestep=key.timestep,
                    block=key.block,
                    offset=offset,
                    length=len(data),
                    crc32=zlib.crc32(data),
                    tokens=kv.length,
                    dim=kv.dim,
                )
            )
            chunks.append(data)
            offset += len(data)

        manifest = CacheManifest(
            layout_version=self.layout_version,
            blob=blob_path.name,
            blob_bytes=offset,
            records=records,
        )
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            blob_path.write_bytes(b"".join(chunks))
            path.write_text(json.dumps(manifest.model_dump(mode="json"), indent=2))
        except OSError as e:
            raise MediaIOError(f"Failed to save KV cache: {e}", {"path": str(path)}) from e

        logger.info("Saved KV cache", path=str(path), entries=len(records), blob_bytes=offset)
        return path

    @classmethod
    def load(cls, path: PathLike, expected_version: Optional[int] = None) -> "KVCache":
        """
        Reload a saved cache; the result is sealed.

        Raises:
            MediaIOError: Manifest or blob unreadable
            CacheIntegrityError: Version, size, offset or checksum mismatch
        """
        path = Path(path)
        expected_version = (
            settings.kv_layout_version if expected_version is None else expected_version
        )
        try:
            raw = path.read_text()
        except OSError as e:
            raise MediaIOError(f"Failed to read KV cache manifest: {e}", {"path": str(path)}) from e
        try:
            manifest = CacheManifest.model_validate_json(raw)
        except pydantic.ValidationError as e:
            raise CacheIntegrityError(
                f"Malformed KV cache manifest: {e.error_count()} errors"
            ) from e

        if manifest.layout_version != expected_version:
            raise CacheIntegrityError(
                f"KV cache layout version {manifest.layout_version}, expected {expected_version}"
            )
        blob_path = path.parent / manifest.blob
        try:
            blob = blob_path.read_bytes()
        except OSError as e:
            raise MediaIOError(
                f"Failed to read KV cache blob: {e}", {"path": str(blob_path)}
            ) from e
        if len(blob) != manifest.blob_bytes:
            raise CacheIntegrityError(
                f"KV cache blob holds {len(blob)} bytes, manifest says {manifest.blob_bytes}"
            )

        cache = cls(layout_version=manifest.layout_version)
        for record in manifest.records:
            end = record.offset + record.length
            if end > len(blob):
                raise CacheIntegrityError(
                    "KV cache record runs past the blob", record.timestep, record.block
                )
            data = blob[record.offset : end]
            if zlib.crc32(data) != record.crc32:
                raise CacheIntegrityError(
                    "KV cache record checksum mismatch", record.timestep, record.block
                )
            try:
                kv = decode_sparse_kv(data, expected_version)
            except MediaIOError as e:
                raise CacheIntegrityError(
                    f"KV cache record undecodable: {e}", record.timestep, record.block
                ) from e
            if (kv.length, kv.dim) != (record.tokens, record.dim):
                raise CacheIntegrityError(
                    "KV cache record shape mismatch", record.timestep, record.block
                )
            try:
                cache.put(record.timestep, record.block, kv)
            except DuplicateKeyError as e:
                raise CacheIntegrityError(
                    "KV cache manifest repeats a key", record.timestep, record.block
                ) from e

        cache.seal()
        logger.info("Loaded KV cache", path=str(path), entries=len(cache))
        return cache
