"""
Command line interface.

    icbdual basis lbasis|icb --parity even --r 0 --m 1 --L0 2 --L1 1 [--format table]
    icbdual verify equality|commutation|samebar|h0-lemma|presentation|centralizer
            [--parity ...] [--grid default | "1,1;2,1"] [--certify]

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage error.
Results are cached as JSON under ``--cache-dir`` (default ``$ICBDUAL_CACHE_DIR``
or ``./.icbcache``), one file per parameter set.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .schur import (
    DEFAULT_GRID, Params, centralizer_evidence, icb_tensor, lbasis_tensor,
    verify_commutation, verify_equality, verify_h0_lemma, verify_presentation,
    verify_samebar,
)

log = logging.getLogger("icbdual")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VERIFY_CHOICES = ["equality", "commutation", "samebar", "h0-lemma", "presentation", "centralizer"]


class UsageError(ValueError):
    pass


class CorruptCacheEntry(RuntimeError):
    pass


# cache

def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cache_key(params: dict) -> str:
    return hashlib.sha256(_canonical(params).encode()).hexdigest()[:32]


class Cache:
    def __init__(self, directory: str | os.PathLike | None):
        self.dir = Path(directory) if directory else None

    def _path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def load(self, params: dict):
        """The cached payload for ``params``, or None. Raises CorruptCacheEntry."""
        if self.dir is None:
            return None
        key = cache_key(params)
        path = self._path(key)
        if not path.exists():
            return None
        try:
            rec = json.loads(path.read_text())
        except (OSError, ValueError) as exc:
            raise CorruptCacheEntry(f"{path}: unreadable ({exc})") from exc
        if not isinstance(rec, dict) or rec.get("key") != key or rec.get("params") != params:
            raise CorruptCacheEntry(f"{path}: key mismatch")
        digest = hashlib.sha256(_canonical(rec.get("payload")).encode()).hexdigest()
        if rec.get("digest") != digest:
            raise CorruptCacheEntry(f"{path}: payload hash mismatch")
        return rec["payload"]

    def store(self, params: dict, payload) -> Path | None:
        if self.dir is None:
            return None
        self.dir.mkdir(parents=True, exist_ok=True)
        key = cache_key(params)
        rec = {
            "key": key,
            "params": params,
            "payload": payload,
            "digest": hashlib.sha256(_canonical(payload).encode()).hexdigest(),
        }
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(rec, fh, sort_keys=True, indent=1)
            os.replace(tmp, self._path(key))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        return self._path(key)

    def get_or_compute(self, params: dict, compute):
        try:
            got = self.load(params)
        except CorruptCacheEntry as exc:
            log.warning("corrupt cache entry, recomputing: %s", exc)
            got = None
        if got is not None:
            return got
        payload = compute()
        self.store(params, payload)
        return payload


# jobs

def _params(ns, L0=None, L1=None, m=None) -> Params:
    try:
        return Params(ns.parity, ns.r, ns.m if m is None else m,
                      ns.L0 if L0 is None else L0, ns.L1 if L1 is None else L1)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def parse_grid(text: str | None) -> list[tuple[int, int]] | None:
    if text is None:
        return None
    if text == "default":
        return list(DEFAULT_GRID)
    out = []
    try:
        for part in text.split(";"):
            a, b = part.split(",")
            out.append((int(a), int(b)))
    except ValueError as exc:
        raise UsageError(f"cannot parse grid {text!r}; use 'default' or 'L0,L1;L0,L1'") from exc
    return out


def run_basis(kind: str, P: Params) -> dict:
    B = lbasis_tensor(P) if kind == "lbasis" else icb_tensor(P)
    return {"kind": kind, "params": P.as_dict(), "basis": B.to_json()}


def run_verify(which: str, P: Params, certify: bool = False, wordcap: int = 8) -> dict:
    if which == "equality":
        return verify_equality(P)
    if which == "commutation":
        return verify_commutation(P)
    if which == "samebar":
        return verify_samebar(P)
    if which == "h0-lemma":
        return verify_h0_lemma(P.parity, P.r, P.L0, P.L1)
    if which == "presentation":
        return verify_presentation(P)
    if which == "centralizer":
        return centralizer_evidence(P, wordcap=wordcap, certify=certify)
    raise UsageError(f"unknown check {which!r}")


def _verify_job(args):
    which, P, certify, wordcap = args
    return run_verify(which, P, certify, wordcap)


# formatting

def _expansion(terms: list) -> str:
    parts = []
    for idx, c in terms:
        parts.append(f"M{idx}" if c == "1" else f"({c})*M{idx}")
    return " + ".join(parts) if parts else "0"


def format_basis_table(payload: dict) -> str:
    rows = [(e["index"], _expansion(e["expansion"])) for e in payload["basis"]]
    w = max([len("index")] + [len(a) for a, _ in rows])
    lines = [f"{'index'.ljust(w)}  expansion"]
    lines += [f"{a.ljust(w)}  {b}" for a, b in rows]
    return "\n".join(lines)


def format_report_table(reports: list[dict]) -> str:
    lines = []
    for rep in reports:
        p = rep["params"]
        ps = f"{p['parity']} r={p['r']} m={p['m']} L=({p['L0']},{p['L1']})"
        lines.append(f"{rep['check']:<13} {ps:<28} {rep['status']}")
    return "\n".join(lines)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--parity", choices=["even", "odd"], default="even")
    common.add_argument("--r", type=int, default=1)
    common.add_argument("--m", type=int, default=1)
    common.add_argument("--L0", type=int, default=1)
    common.add_argument("--L1", type=int, default=1)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--cache-dir", default=None,
                        help="cache directory (default: $ICBDUAL_CACHE_DIR or ./.icbcache)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")

    ap = argparse.ArgumentParser(prog="icbdual", description="canonical bases and Schur duality checks")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("basis", parents=[common], help="compute a basis of V^(x)m")
    b.add_argument("kind", choices=["lbasis", "icb"])

    v = sub.add_parser("verify", parents=[common], help="run a verification")
    v.add_argument("which", choices=VERIFY_CHOICES)
    v.add_argument("--grid", default=None, help="'default' or 'L0,L1;L0,L1;...' (overrides --L0/--L1)")
    v.add_argument("--certify", action="store_true", help="exact containment and certified rank checks")
    v.add_argument("--wordcap", type=int, default=8)
    v.add_argument("--jobs", type=int, default=1, help="worker processes for grid runs")
    return ap


def _usage_error(msg: str) -> int:
    sys.stderr.write(_dump({"error": "usage", "message": msg}) + "\n")
    return EXIT_USAGE


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    ap = build_parser()
    ns = ap.parse_args(argv)
    cache_dir = None if ns.no_cache else (ns.cache_dir or os.environ.get("ICBDUAL_CACHE_DIR") or ".icbcache")
    cache = Cache(cache_dir)
    try:
        if ns.command == "basis":
            P = _params(ns)
            key = {"command": "basis", "kind": ns.kind, **P.as_dict()}
            payload = cache.get_or_compute(key, lambda: run_basis(ns.kind, P))
            out = format_basis_table(payload) if ns.format == "table" else _dump(payload)
            print(out)
            return EXIT_OK
        grid = parse_grid(ns.grid)
        points = grid if grid is not None else [(ns.L0, ns.L1)]
        jobs = []
        for L0, L1 in points:
            m = 1 if ns.which == "h0-lemma" else ns.m
            jobs.append((ns.which, _params(ns, L0, L1, m), ns.certify, ns.wordcap))
    except UsageError as exc:
        return _usage_error(str(exc))

    reports: list = [None] * len(jobs)
    todo = []
    for n, (which, P, certify, wordcap) in enumerate(jobs):
        key = {"command": "verify", "which": which, "certify": certify, "wordcap": wordcap, **P.as_dict()}
        try:
            reports[n] = cache.load(key)
        except CorruptCacheEntry as exc:
            log.warning("corrupt cache entry, recomputing: %s", exc)
        if reports[n] is None:
            todo.append((n, key))
    if todo:
        args = [jobs[n] for n, _ in todo]
        if ns.jobs > 1 and len(args) > 1:
            with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
                results = list(pool.map(_verify_job, args))
        else:
            results = [_verify_job(a) for a in args]
        for (n, key), rep in zip(todo, results):
            cache.store(key, rep)
            reports[n] = rep
    if ns.format == "table":
        print(format_report_table(reports))
    else:
        print(_dump(reports[0] if len(reports) == 1 and grid is None else reports))
    return EXIT_OK if all(r["status"] == "pass" for r in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
