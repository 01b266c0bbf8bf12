"""Zeta-zero ordinate tables: ingestion, validation, caching, counting.

Ordinates are stored in two-double form (a float64 pair per value) because
the bundled table carries ~28 significant digits and heights near 1e4 push
1e-12 absolute accuracy against the edge of binary64.  The raw decimal
strings are kept alongside so that load -> export -> load round-trips
bit-exactly.

File format: ASCII, one ordinate per line in plain decimal (digits and at
most one '.'), ascending; lines starting with '#' are comments.  Repeated
values mean multiplicity.
"""

from __future__ import annotations

import hashlib
import math
import os
import re
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np
from filelock import FileLock

from .errors import (CoverageError, DomainError, IntegrityError,
                     TransportError, ValidationError)

CACHE_ENV = "ZETA_HEAT_CACHE"
BUNDLED_NAME = "zeta_zeros_10000.txt"

_FIRST_ZERO_WINDOW = (14.13, 14.14)
_LINE_RE = re.compile(r"^\d+(\.\d+)?$")


@dataclass(frozen=True)
class ZeroList:
    """Validated ascending ordinates of zeta zeros (positive half only).

    hi/lo are the two-double components; ``ordinates`` exposes the float64
    leading parts for consumers that do not need extended precision.
    """

    hi: np.ndarray
    lo: np.ndarray
    raw: tuple[str, ...] = field(repr=False)
    precision_digits: int
    max_height: float
    source_id: str

    def __len__(self) -> int:
        return len(self.raw)

    @property
    def ordinates(self) -> np.ndarray:
        return self.hi

    def export(self, stream) -> None:
        """Write the table back out, one ordinate per line, verbatim."""
        for line in self.raw:
            stream.write(line + "\n")


def _significant_digits(text: str) -> int:
    digits = text.replace(".", "").lstrip("0")
    return len(digits)


def _parse_lines(lines, source_id: str) -> ZeroList:
    raw: list[str] = []
    exact: list[Fraction] = []
    hi: list[float] = []
    lo: list[float] = []
    precision = None
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if not _LINE_RE.match(text):
            raise ValidationError(
                f"{source_id}: malformed ordinate {text!r}", line=lineno)
        value = Fraction(text)
        if value <= 0:
            raise ValidationError(
                f"{source_id}: ordinate must be positive", line=lineno)
        if exact and value < exact[-1]:
            raise ValidationError(
                f"{source_id}: ordinates must be nondecreasing", line=lineno)
        h = float(value)
        raw.append(text)
        exact.append(value)
        hi.append(h)
        lo.append(float(value - Fraction(h)))
        digits = _significant_digits(text)
        precision = digits if precision is None else min(precision, digits)
    if not raw:
        raise ValidationError(f"{source_id}: no ordinates found")
    first = hi[0] + lo[0]
    if not (_FIRST_ZERO_WINDOW[0] < first < _FIRST_ZERO_WINDOW[1]):
        raise ValidationError(
            f"{source_id}: first ordinate {first} outside "
            f"({_FIRST_ZERO_WINDOW[0]}, {_FIRST_ZERO_WINDOW[1]})", line=1)
    return ZeroList(hi=np.array(hi), lo=np.array(lo), raw=tuple(raw),
                    precision_digits=precision, max_height=hi[-1] + lo[-1],
                    source_id=source_id)


def load_zeros(path) -> ZeroList:
    """Parse and validate a zero table from a text file."""
    path = os.fspath(path)
    with open(path, "r", encoding="ascii") as fh:
        return _parse_lines(fh, source_id=os.path.basename(path))


_bundled_lock = threading.Lock()
_bundled: ZeroList | None = None


def load_bundled() -> ZeroList:
    """The table shipped with the package (first 10000 ordinates)."""
    global _bundled
    if _bundled is None:
        with _bundled_lock:
            if _bundled is None:
                ref = resources.files("zetaheat.data") / BUNDLED_NAME
                text = ref.read_text(encoding="ascii")
                _bundled = _parse_lines(text.splitlines(), BUNDLED_NAME)
    return _bundled


def counting_function(zeros: ZeroList, E: float) -> int:
    """#{ordinates <= E}; rejects E beyond table coverage."""
    if E > zeros.max_height:
        raise CoverageError(
            f"E = {E} exceeds table height {zeros.max_height}",
            max_available=zeros.max_height)
    idx = int(np.searchsorted(zeros.hi, E, side="right"))
    # hi == E exactly: the lo part decides which side the ordinate lies on
    while idx > 0 and zeros.hi[idx - 1] == E and zeros.lo[idx - 1] > 0.0:
        idx -= 1
    return idx


def model_counting(E: float) -> float:
    """(E/2pi)(log(E/2pi) - 1), the smooth density model."""
    if E <= 0.0:
        raise DomainError(f"model_counting requires E > 0, got {E}")
    x = E / (2.0 * math.pi)
    return x * (math.log(x) - 1.0)


# --- remote providers and caching ------------------------------------------

class ZeroProvider:
    """Source of zero-table text.  Subclasses adapt one remote format."""

    name: str = "provider"
    max_count: int | None = None

    def fetch(self, count: int) -> str:
        raise NotImplementedError


class UrlProvider(ZeroProvider):
    """GET a URL expected to serve the plain one-ordinate-per-line format.

    ``{count}`` in the URL template is substituted before the request.
    """

    def __init__(self, url: str, name: str | None = None):
        self.url = url
        self.name = name or hashlib.sha256(url.encode()).hexdigest()[:12]

    def fetch(self, count: int) -> str:
        url = self.url.format(count=count)
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                return resp.read().decode("ascii")
        except (urllib.error.URLError, OSError, UnicodeDecodeError) as exc:
            raise TransportError(f"fetch from {url} failed: {exc}") from exc


class LmfdbProvider(ZeroProvider):
    """Adapter for the LMFDB zeta-zero listing (index/ordinate pairs)."""

    name = "lmfdb"
    url = "https://www.lmfdb.org/zeros/zeta/list?limit={count}&t=0"

    def fetch(self, count: int) -> str:
        try:
            with urllib.request.urlopen(self.url.format(count=count),
                                        timeout=120) as resp:
                body = resp.read().decode("ascii")
        except (urllib.error.URLError, OSError, UnicodeDecodeError) as exc:
            raise TransportError(f"LMFDB fetch failed: {exc}") from exc
        lines = []
        for line in body.splitlines():
            fields = line.split()
            if fields:
                lines.append(fields[-1])  # ordinate is the last column
        return "\n".join(lines[:count]) + "\n"


PROVIDERS: dict[str, ZeroProvider] = {"lmfdb": LmfdbProvider()}


def _resolve_provider(source) -> ZeroProvider:
    if isinstance(source, ZeroProvider):
        return source
    if isinstance(source, str):
        if source.startswith(("http://", "https://")):
            return UrlProvider(source)
        if source in PROVIDERS:
            return PROVIDERS[source]
    raise ValidationError(f"unknown zero provider {source!r}")


def _cache_dir(override) -> str:
    if override:
        return os.fspath(override)
    env = os.environ.get(CACHE_ENV)
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "zetaheat")


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("ascii")).hexdigest()


def fetch_remote(source, count: int, cache_dir=None) -> ZeroList:
    """First `count` ordinates from a provider, cached on disk.

    The cache is keyed by (provider, count) with a sha256 sidecar; hits are
    served byte-identically without touching the network.  Corrupt entries
    are evicted and reported as IntegrityError.
    """
    if count < 1:
        raise ValidationError(f"count must be positive, got {count}")
    provider = _resolve_provider(source)
    if provider.max_count is not None and count > provider.max_count:
        raise CoverageError(
            f"provider {provider.name} serves at most {provider.max_count} "
            f"zeros, {count} requested", max_available=provider.max_count)
    directory = _cache_dir(cache_dir)
    os.makedirs(directory, exist_ok=True)
    stem = os.path.join(directory, f"{provider.name}-{count}")
    payload = stem + ".txt"
    sidecar = stem + ".sha256"

    if os.path.exists(payload):
        with open(payload, "r", encoding="ascii") as fh:
            text = fh.read()
        expected = None
        if os.path.exists(sidecar):
            with open(sidecar, "r", encoding="ascii") as fh:
                expected = fh.read().strip()
        if expected != _sha256(text):
            for p in (payload, sidecar):
                try:
                    os.unlink(p)
                except FileNotFoundError:
                    pass
            raise IntegrityError(
                f"cache entry {payload} failed checksum; entry evicted")
        return _parse_lines(text.splitlines(),
                            source_id=f"{provider.name}-{count}")

    text = provider.fetch(count)
    with FileLock(stem + ".lock"):
        tmp = payload + ".tmp"
        with open(tmp, "w", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, payload)
        with open(sidecar + ".tmp", "w", encoding="ascii") as fh:
            fh.write(_sha256(text) + "\n")
        os.replace(sidecar + ".tmp", sidecar)
    return _parse_lines(text.splitlines(),
                        source_id=f"{provider.name}-{count}")
