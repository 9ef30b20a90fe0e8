"""Command-line driver.  Every command streams JSON-lines (or TSV) records.
The exit code is nonzero when some record failed (1) or when the
configuration is rejected (2).

    catblocks verify-blocks --n 5 --p 7 --max-part 21
    catblocks casimir --n 3 --p 7
    catblocks n2-suite
    catblocks ktheory --n 2
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from . import blockcomb, kgrass, tensorrep, zigzag
from .exactalg import NotPolynomial

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
THREADS_ENV = "CATBLOCKS_THREADS"


class ConfigError(ValueError):
    """Raised for a configuration that must exit with code 2."""


@dataclass
class RunConfig:
    command: str
    n: list[int] = field(default_factory=list)
    p: int | None = None
    r: list[int] | None = None
    max_part: int = 25
    output: str | None = None
    fmt: str = "json"
    threads: int = 1
    allow_n5: bool = False
    families: tuple[str, ...] = ("ckl", "frak")
    all_shifts: bool = True


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def parse_range(text: str) -> list[int]:
    """``"3"`` or ``"1-4"`` or ``"0,2,5"``."""
    out: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if "-" in chunk:
            lo, hi = chunk.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    return sorted(set(out))


def resolve_threads(requested: int) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            requested = int(env)
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from exc
    if requested < 1:
        raise ConfigError("thread count must be at least 1")
    return requested


def validate(cfg: RunConfig) -> None:
    if not cfg.n:
        raise ConfigError("--n is required")
    if min(cfg.n) < 1:
        raise ConfigError("n must be positive")
    if cfg.command in ("verify-blocks", "casimir"):
        if cfg.p is None:
            raise ConfigError("--p is required")
        if cfg.p <= 2 or not is_prime(cfg.p):
            raise ConfigError(f"p must be an odd prime, got {cfg.p}")
        if cfg.p <= max(cfg.n):
            raise ConfigError(f"need p > n, got p={cfg.p}, n={max(cfg.n)}")
    if cfg.command == "n2-suite" and cfg.p is not None:
        if cfg.p <= 2 or not is_prime(cfg.p):
            raise ConfigError(f"p must be an odd prime, got {cfg.p}")
    if cfg.command == "ktheory":
        cap = kgrass.MAX_N_DEFAULT + (1 if cfg.allow_n5 else 0)
        if max(cfg.n) > cap:
            hint = " (pass --allow-n5 for n = 5)" if max(cfg.n) == 5 else ""
            raise ConfigError(f"ktheory supports n <= {cap}{hint}")
        unknown = set(cfg.families) - set(kgrass.FAMILIES)
        if unknown:
            raise ConfigError(f"unknown kernel families {sorted(unknown)}")
    if cfg.r is not None:
        for n in cfg.n:
            if any(not 0 <= r <= n for r in cfg.r):
                raise ConfigError(f"r values must lie in [0, {n}]")
    if cfg.max_part < 0:
        raise ConfigError("--max-part must be non-negative")


# ---------------------------------------------------------------------------
# workers (top level so they pickle)


def _block_case(args) -> dict:
    parts, p, r = args
    lam = blockcomb.Weight(parts)
    rep = blockcomb.verify_sl2_relation(lam, p, r if r in (0, lam.n) else None)
    rec = {"kind": "sl2_relation", **rep.to_json(), "comb_ok": rep.comb_ok,
           "pairing_ok": rep.pairing_ok}
    rec["ok"] = rep.relation_holds and rep.comb_ok and rep.pairing_ok
    return rec


def _ordered_map(fn: Callable, items: list, threads: int) -> Iterator:
    if threads <= 1 or len(items) < 2:
        yield from map(fn, items)
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(fn, items, chunksize=max(1, len(items) // (threads * 8)))


# ---------------------------------------------------------------------------
# commands


def cmd_verify_blocks(cfg: RunConfig) -> Iterator[dict]:
    for n in cfg.n:
        rs = cfg.r if cfg.r is not None else list(range(n + 1))
        for r in rs:
            weights = blockcomb.enumerate_block_weights(n, cfg.p, r, cfg.max_part,
                                                        all_shifts=cfg.all_shifts)
            jobs = [(w.parts, cfg.p, r) for w in weights]
            yield from _ordered_map(_block_case, jobs, cfg.threads)
            found = blockcomb.marked_sets(n, cfg.p, r, weights)
            yield {"kind": "block_summary", "n": n, "p": cfg.p, "r": r,
                   "weights": len(weights), "marked_sets": len(found),
                   "expected_marked_sets": blockcomb.expected_rank(n, r),
                   "ok": True}


def cmd_casimir(cfg: RunConfig) -> Iterator[dict]:
    for n in cfg.n:
        rep = blockcomb.casimir_separation_check(n, cfg.p)
        for bad in rep.counterexamples:
            yield {"kind": "casimir_counterexample", "n": n, "p": cfg.p, **bad, "ok": False}
        yield {"kind": "casimir_summary", "n": n, "p": cfg.p, "pairs_checked": rep.checked,
               "counterexamples": len(rep.counterexamples), "ok": rep.ok}


def cmd_n2_suite(cfg: RunConfig) -> Iterator[dict]:
    p = cfg.p or 5
    A = zigzag.build_algebra_a()
    failures = A.associativity_failures()
    yield {"kind": "algebra", "dimension": A.dimension,
           "associativity_failures": [list(map(str, t)) for t in failures],
           "ok": A.dimension == 8 and not failures}
    cd = zigzag.cartan_data(A)
    yield {"kind": "cartan", **cd.to_json(),
           "ok": cd.cartan == [[2, 2], [2, 2]] and cd.dimension == 8}
    km = zigzag.bimodule_k_matrices(A)
    e, f = zigzag.k_matrices_as_sympy(km)
    rep = tensorrep.pcanonical_n2_rep(p)
    comm = e * f - f * e
    yield {"kind": "k_matrices", **km.to_json(),
           "matches_pcanonical": e == rep.e and f == rep.f,
           "ef_minus_fe": [[int(x) for x in row] for row in comm.tolist()],
           "ok": e == rep.e and f == rep.f and comm == rep.h}
    seq = zigzag.verma_filtrations(A)
    yield {"kind": "verma_filtrations", **seq.to_json(), "ok": seq.verma_classes_ok()}
    inter = tensorrep.n2_intertwiner_report(p)
    yield {"kind": "intertwiner", "p": p, **inter.to_json(),
           "ok": (inter.dimension == 2 and inter.invertible_member is not None
                  and not inter.unit_map_intertwines and inter.corrected_map_intertwines)}


def _ktheory_records(n: int, families: Iterable[str], allow_large: bool) -> Iterator[dict]:
    for family in families:
        maker = kgrass.FAMILIES[family]
        for r in range(n):
            for k in maker(n, r):
                try:
                    rep = kgrass.pole_cancellation(k, n, with_entries=True)
                    rec = rep.to_json()
                except NotPolynomial as exc:  # pragma: no cover - reported inside
                    rec = {"n": n, "r": r, "kernel": k.name, "laurent": False,
                           "failure": f"NotPolynomial: {exc}"}
                yield {"kind": "pole_cancellation", "family": family,
                       "kernel_spec": k.to_json(), **rec, "ok": rec["laurent"]}
    for r in range(n):
        th = kgrass.verify_theta_intertwine(n, r, allow_large=allow_large)
        yield {"kind": "theta_intertwine", **th.to_json(), "ok": th.ok}
    for family in families:
        for r in range(n + 1):
            cm = kgrass.verify_commutator(n, r, family, allow_large=allow_large)
            yield {"kind": "commutator", **cm.to_json(), "ok": cm.ok}


def cmd_ktheory(cfg: RunConfig) -> Iterator[dict]:
    signs: dict[str, set[int]] = {}
    where: dict[str, list] = {}
    for n in cfg.n:
        for rec in _ktheory_records(n, cfg.families, cfg.allow_n5):
            if rec["kind"] == "commutator" and rec["epsilon"] is not None:
                signs.setdefault(rec["family"], set()).add(rec["epsilon"])
                where.setdefault(rec["family"], []).append([rec["n"], rec["r"], rec["epsilon"]])
            yield rec
    all_signs = set().union(*signs.values()) if signs else set()
    yield {"kind": "epsilon", "families": list(cfg.families),
           "epsilon": next(iter(all_signs)) if len(all_signs) == 1 else None,
           "observed": {fam: where.get(fam, []) for fam in cfg.families},
           "ok": len(all_signs) <= 1}
    yield {"kind": "n2_dictionary", **kgrass.n2_dictionary_report(), "ok": True}


COMMANDS: dict[str, Callable[[RunConfig], Iterator[dict]]] = {
    "verify-blocks": cmd_verify_blocks,
    "casimir": cmd_casimir,
    "n2-suite": cmd_n2_suite,
    "ktheory": cmd_ktheory,
}


# ---------------------------------------------------------------------------
# output


def _tsv_line(rec: dict) -> str:
    keys = sorted(rec)
    return "\t".join(f"{k}={json.dumps(rec[k], sort_keys=True)}" for k in keys)


def emit(records: Iterable[dict], stream, fmt: str) -> int:
    failures = 0
    for rec in records:
        if not rec.get("ok", True):
            failures += 1
        line = json.dumps(rec, sort_keys=True) if fmt == "json" else _tsv_line(rec)
        stream.write(line + "\n")
        stream.flush()
    return failures


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catblocks",
                                     description="Exact checks of two sl_2 categorifications.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, need_p: bool, default_n: str | None = None):
        sp.add_argument("--n", default=default_n, help="rank, e.g. 3, 1-4 or 2,3")
        sp.add_argument("--p", type=int, required=False, default=None, help="odd prime p > n")
        sp.add_argument("--out", default=None, help="report path (default stdout)")
        sp.add_argument("--format", choices=("json", "tsv"), default="json")
        sp.add_argument("--threads", type=int, default=1)

    vb = sub.add_parser("verify-blocks", help="sl_2 relation sweep over block weights")
    common(vb, True)
    vb.add_argument("--r", default=None, help="block indices (default all)")
    vb.add_argument("--max-part", type=int, default=25)
    vb.add_argument("--representatives-only", action="store_true",
                    help="one weight per class mod the all-ones vector")
    cs = sub.add_parser("casimir", help="Casimir separation over residue classes")
    common(cs, True)
    n2 = sub.add_parser("n2-suite", help="algebra A, K-matrices and the intertwiner")
    common(n2, False, default_n="2")
    kt = sub.add_parser("ktheory", help="K-theoretic kernel checks")
    common(kt, False)
    kt.add_argument("--allow-n5", action="store_true", help="permit n = 5 (slow)")
    kt.add_argument("--families", default="ckl,frak",
                    help="comma list from " + ",".join(kgrass.FAMILIES))
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    try:
        n = parse_range(ns.n) if ns.n else []
        r = parse_range(ns.r) if getattr(ns, "r", None) else None
    except ValueError as exc:
        raise ConfigError(f"bad range: {exc}") from exc
    cfg = RunConfig(command=ns.command, n=n, p=ns.p, r=r,
                    max_part=getattr(ns, "max_part", 25), output=ns.out, fmt=ns.format,
                    threads=resolve_threads(ns.threads),
                    allow_n5=getattr(ns, "allow_n5", False),
                    all_shifts=not getattr(ns, "representatives_only", False))
    if ns.command == "ktheory":
        cfg.families = tuple(f.strip() for f in ns.families.split(",") if f.strip())
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        validate(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    records = COMMANDS[cfg.command](cfg)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            failures = emit(records, fh, cfg.fmt)
    else:
        failures = emit(records, sys.stdout, cfg.fmt)
    return EXIT_FAIL if failures else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
