"""
Content-addressed store of JSON reports.

A request is a command name plus its parameters; braid words enter the key in
their verbatim ``n: w`` form so that no rewriting can change what was
computed. The stored bytes are returned unchanged on a hit.
"""
import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from . import constants as C

logger = logging.getLogger(__name__)


def canonical_request(command: str, params: dict) -> str:
    payload = {'command': command, 'params': params, 'version': C.VERSION,
               'schema_version': C.SCHEMA_VERSION}
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(',', ':'))


def cache_key(command: str, params: dict) -> str:
    return hashlib.sha256(canonical_request(command, params).encode('utf-8')).hexdigest()


def encode_report(report: dict) -> bytes:
    return (json.dumps(report, sort_keys=True, ensure_ascii=False) + '\n').encode('utf-8')


def strip_volatile(report: dict) -> dict:
    """The report without fields that legitimately change between runs."""
    return {k: v for k, v in report.items() if k not in C.VOLATILE_REPORT_FIELDS}


def resolve_cache_dir(cache_dir: Optional[str] = None) -> str:
    return cache_dir or os.environ.get(C.CACHE_ENV_VAR) or C.DEFAULT_CACHE_DIR


@dataclass(frozen=True)
class RunRecord:
    key: str
    command: str
    params: dict
    result: bytes
    hit: bool

    @property
    def report(self) -> dict:
        return json.loads(self.result.decode('utf-8'))


class RunCache:
    def __init__(self, directory: str):
        self.directory = directory

    def path(self, key: str) -> str:
        # two level fan-out keeps directories small on large corpora
        return os.path.join(self.directory, key[:2], key + '.json')

    def get(self, key: str) -> Optional[bytes]:
        try:
            with open(self.path(key), 'rb') as fh:
                return fh.read()
        except FileNotFoundError:
            return None

    def put(self, key: str, data: bytes) -> None:
        path = self.path(key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        # write then rename, so concurrent workers never see half a file
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix='.tmp')
        with os.fdopen(fd, 'wb') as fh:
            fh.write(data)
        os.replace(tmp, path)


def cached_run(cache: Optional[RunCache], command: str, params: dict,
               compute: Callable[[], dict]) -> RunRecord:
    key = cache_key(command, params)
    if cache is not None:
        stored = cache.get(key)
        if stored is not None:
            logger.debug('cache hit for %s %s', command, key[:12])
            return RunRecord(key, command, params, stored, True)
    data = encode_report(compute())
    if cache is not None:
        cache.put(key, data)
    return RunRecord(key, command, params, data, False)


def same_result(a: bytes, b: bytes) -> Tuple[bool, dict, dict]:
    """Compares two stored reports up to their volatile fields."""
    ra, rb = strip_volatile(json.loads(a)), strip_volatile(json.loads(b))
    return ra == rb, ra, rb
