"""Command line surface over the whole toolkit.

One binary with subcommands; families travel as JSON, tables as TSV.
Exit status: 0 on success, 1 when a verification rejects (the witness
is printed), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from .arcs import (
    LocalArcFamily,
    NotVerified,
    family_from_dict,
    family_to_dict,
    lrc_params,
    sample_verify,
    verify_local_arc,
)
from .bounds import eml_upper, fftc_upper, trivial_upper
from .construct import (
    best_construction,
    case1_lift,
    case2_lift,
    case3_lift,
    choose_M1_M2,
    conic_partition_seed,
    generic_k_arc,
    lift_prime,
    oval_partition,
    seed_from_dict,
    seed_to_dict,
    validate_generic,
)
from .sdf import SdfBasis, is_sdf_mod, max_sdf_bruteforce, sdf_subset
from .search import (
    SearchConfig,
    check_certificate,
    emit_ilp,
    exact_max,
    parse_lp,
    reproduce_table,
)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2

_METHODS = ("oval", "generic", "lift-prime", "case1", "case2", "case3", "best")
_FORMATS = ("text", "json", "tsv")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    """Validated parameters of one CLI invocation."""

    subcommand: str
    q: int | None = None
    p: int | None = None
    m: int | None = None
    t: int | None = None
    k: int | None = None
    method: str | None = None
    basis: tuple[int, tuple[int, ...]] | None = None
    verify_mode: str = "full"
    seed: int | None = None
    budget: float | None = None
    workers: int = 1
    in_path: str | None = None
    out_path: str | None = None
    fmt: str = "text"
    cap: int | None = None
    symmetry: str | None = None
    emit_lp: str | None = None
    certificate: str | None = None
    fix_first: bool = False
    m1: float | None = None
    m2: float | None = None
    alphabet: tuple[int, ...] | None = None
    elements: tuple[int, ...] | None = None
    modulus: int | None = None
    n: int | None = None
    sdf_action: str | None = None
    qs: tuple[int, ...] | None = None
    ks: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.fmt not in _FORMATS:
            raise UsageError(f"format must be one of {_FORMATS}")
        if self.workers < 1:
            raise UsageError("--workers must be positive")
        if self.method is not None and self.method not in _METHODS:
            raise UsageError(f"--method must be one of {_METHODS}")
        if self.verify_mode != "full" and self.verify_mode != "none" \
                and not self.verify_mode.startswith("sample:"):
            raise UsageError(
                "--verify must be full, none, or sample:COUNT:SEED")


def _parse_basis(text: str) -> tuple[int, tuple[int, ...]]:
    # "--basis 5,0,2" means digits base 5 with alphabet {0, 2}
    parts = text.split(",")
    if len(parts) < 2:
        raise UsageError("--basis needs a base and at least one digit")
    try:
        m = int(parts[0])
        digits = tuple(sorted(int(x) for x in parts[1:]))
    except ValueError as exc:
        raise UsageError(f"bad --basis value: {exc}") from exc
    return m, digits


def _parse_ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(";", ",").split(",") if x)
    except ValueError as exc:
        raise UsageError(f"bad {flag} value: {exc}") from exc


def _default_workers() -> int:
    raw = os.environ.get("LOCALARC_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _apply_verification(fam: LocalArcFamily, mode: str) -> str:
    """Run the requested verification; raises NotVerified on rejection."""
    if mode == "none":
        return "skipped"
    if mode == "full":
        report = verify_local_arc(fam)
    else:
        parts = mode.split(":")
        samples = int(parts[1]) if len(parts) > 1 and parts[1] else 100_000
        seed = int(parts[2]) if len(parts) > 2 and parts[2] else 0
        report = sample_verify(fam, samples, seed=seed)
    if not report.ok:
        raise NotVerified(report.violation.describe(fam.plane))
    return ("full" if mode == "full"
            else f"sampled {report.pairs_checked} pairs")


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit_family(cfg: RunConfig, fam: LocalArcFamily, note: str) -> None:
    if cfg.out_path:
        _write_text(cfg.out_path,
                    json.dumps(family_to_dict(fam), indent=1) + "\n")
    if cfg.fmt == "json":
        print(json.dumps({
            "q": fam.plane.q,
            "num_sets": fam.n_sets,
            "k": fam.k,
            "provenance": fam.provenance,
            "verification": note,
            "out": cfg.out_path,
        }))
    else:
        print(f"q={fam.plane.q} sets={fam.n_sets} k={fam.k} "
              f"verification={note} provenance={fam.provenance}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_construct(cfg: RunConfig) -> int:
    method = cfg.method or "best"
    check = False  # verification is applied once, per --verify

    if method == "oval":
        if cfg.q is None or cfg.k is None:
            raise UsageError("oval needs --q and --k")
        fam = oval_partition(cfg.q, cfg.k)
    elif method == "generic":
        if cfg.k is None:
            raise UsageError("generic needs --k")
        seed = generic_k_arc(cfg.k)
        fam = seed.as_family()
    elif method == "lift-prime":
        if cfg.p is None or cfg.basis is None:
            raise UsageError("lift-prime needs --p and --basis")
        if cfg.in_path:
            seed = seed_from_dict(_load_json(cfg.in_path))
        elif cfg.k is not None:
            seed = generic_k_arc(cfg.k)
        else:
            raise UsageError("lift-prime needs --seed-file or --k")
        basis = SdfBasis(cfg.basis[0], frozenset(cfg.basis[1]))
        fam = lift_prime(seed, basis, cfg.p, check=check)
    elif method == "case1":
        if cfg.in_path:
            base = family_from_dict(_load_json(cfg.in_path))
        elif cfg.p is not None:
            base = conic_partition_seed(cfg.p, cfg.k or 2)
        else:
            raise UsageError("case1 needs --seed-file or --p")
        fam = case1_lift(base, check=check)
    elif method == "case2":
        if cfg.t is None:
            raise UsageError("case2 needs --t")
        if cfg.in_path:
            base = family_from_dict(_load_json(cfg.in_path))
        elif cfg.p is not None:
            base = case1_lift(conic_partition_seed(cfg.p, cfg.k or 2),
                              check=False)
        else:
            raise UsageError("case2 needs --seed-file or --p")
        fam = case2_lift(base, cfg.t, check=check)
    elif method == "case3":
        if cfg.m is None:
            raise UsageError("case3 needs --m")
        if cfg.in_path:
            base = family_from_dict(_load_json(cfg.in_path))
        elif cfg.p is not None:
            base = conic_partition_seed(cfg.p, cfg.k or 2)
        else:
            raise UsageError("case3 needs --seed-file or --p")
        if cfg.m1 is not None and cfg.m2 is not None:
            m1, m2 = cfg.m1, cfg.m2
        else:
            t = (cfg.m - 1) // 2 if cfg.m % 2 else cfg.m // 2
            m1, m2 = choose_M1_M2(max(t, 1))
        fam = case3_lift(base, cfg.m, m1, m2, alphabet=cfg.alphabet,
                         check=check)
    else:  # best
        if cfg.q is None or cfg.k is None:
            raise UsageError("best needs --q and --k")
        fam, report = best_construction(cfg.q, cfg.k)
        if cfg.fmt == "text":
            for branch, outcome in report.items():
                print(f"# {branch}: {outcome}")

    note = _apply_verification(fam, cfg.verify_mode)
    _emit_family(cfg, fam, note)
    return EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    if not cfg.in_path:
        raise UsageError("verify needs --in")
    data = _load_json(cfg.in_path)
    if "secants" in data and "r" in data:
        # integer seed: run the three-condition check
        seed = seed_from_dict(data)
        verdict = validate_generic(seed.sets, seed.secants, seed.r)
        if cfg.fmt == "json":
            print(json.dumps({
                "ok": verdict.ok, "cond_a": verdict.cond_a,
                "cond_b": verdict.cond_b, "cond_c": verdict.cond_c,
                "r_prime": verdict.r_prime,
                "failures": list(verdict.failures)}))
        else:
            print(f"ok={verdict.ok} (a)={verdict.cond_a} "
                  f"(b)={verdict.cond_b} (c)={verdict.cond_c} "
                  f"r'={verdict.r_prime}")
            for reason in verdict.failures:
                print(f"rejected: {reason}")
        return EXIT_OK if verdict.ok else EXIT_REJECTED
    fam = family_from_dict(data)
    try:
        note = _apply_verification(fam, cfg.verify_mode)
    except NotVerified as exc:
        print(f"rejected: {exc}")
        return EXIT_REJECTED
    if cfg.fmt == "json":
        print(json.dumps({"ok": True, "q": fam.plane.q,
                          "num_sets": fam.n_sets, "k": fam.k,
                          "verification": note}))
    else:
        print(f"ok q={fam.plane.q} sets={fam.n_sets} k={fam.k} "
              f"verification={note}")
    return EXIT_OK


def _cmd_bound(cfg: RunConfig) -> int:
    if cfg.q is None or cfg.k is None:
        raise UsageError("bound needs --q and --k")
    triv = trivial_upper(cfg.q)
    eml = eml_upper(cfg.k, cfg.q)
    fftc_sets = fftc_upper(cfg.q).sets if cfg.k == 4 else None
    row = {
        "q": cfg.q,
        "k": cfg.k,
        "trivial_points": triv.sets,
        "fftc_sets": fftc_sets,
        "eml_sets": eml.sets,
        "eml_points": eml.points,
    }
    best = min(v for v in (fftc_sets, eml.sets) if v is not None)
    row["min_sets"] = best
    if cfg.fmt == "json":
        print(json.dumps(row))
    else:
        cols = ["q", "k", "trivial_points", "fftc_sets", "eml_sets",
                "eml_points", "min_sets"]
        print("\t".join(cols))
        print("\t".join("-" if row[c] is None else str(row[c])
                        for c in cols))
    return EXIT_OK


def _cmd_search(cfg: RunConfig) -> int:
    if cfg.q is None or cfg.k is None:
        raise UsageError("search needs --q and --k")
    scfg = SearchConfig(q=cfg.q, k=cfg.k, budget=cfg.budget,
                        workers=cfg.workers, symmetry=cfg.symmetry,
                        cap=cfg.cap)
    res = exact_max(scfg)
    if cfg.emit_lp:
        _write_text(cfg.emit_lp, emit_ilp(cfg.q, cfg.k, cfg.cap,
                                          fix_first=cfg.fix_first))
    if cfg.certificate and res.certificate is not None:
        _write_text(cfg.certificate,
                    json.dumps(family_to_dict(res.certificate),
                               indent=1) + "\n")
    if cfg.fmt == "json":
        print(json.dumps({
            "q": cfg.q, "k": cfg.k, "found": res.num_sets,
            "optimal": res.optimal, "nodes": res.nodes,
            "cap": res.cap, "elapsed_seconds": round(res.elapsed, 3)}))
    else:
        print(f"q={cfg.q} k={cfg.k} found={res.num_sets} "
              f"optimal={res.optimal} nodes={res.nodes} cap={res.cap} "
              f"elapsed={res.elapsed:.3f}s")
    return EXIT_OK


def _cmd_sdf(cfg: RunConfig) -> int:
    if cfg.sdf_action == "verify":
        if cfg.elements is None or cfg.modulus is None:
            raise UsageError("sdf verify needs --elements and --mod")
        ok = is_sdf_mod(set(cfg.elements), cfg.modulus)
        if cfg.fmt == "json":
            print(json.dumps({"modulus": cfg.modulus, "ok": ok,
                              "size": len(set(cfg.elements))}))
        else:
            print(f"mod {cfg.modulus}: "
                  f"{'square-difference-free' if ok else 'rejected'}")
        return EXIT_OK if ok else EXIT_REJECTED
    if cfg.sdf_action == "build":
        if cfg.n is None:
            raise UsageError("sdf build needs --n")
        basis = None
        if cfg.basis is not None:
            basis = SdfBasis(cfg.basis[0], frozenset(cfg.basis[1]))
        subset = sorted(sdf_subset(cfg.n, basis=basis))
        if cfg.fmt == "json":
            print(json.dumps({"n": cfg.n, "size": len(subset),
                              "elements": subset}))
        else:
            print(f"n={cfg.n} size={len(subset)}")
            print(",".join(map(str, subset)))
        return EXIT_OK
    if cfg.sdf_action == "max":
        if cfg.n is None:
            raise UsageError("sdf max needs --n")
        size, witness = max_sdf_bruteforce(cfg.n)
        if cfg.fmt == "json":
            print(json.dumps({"n": cfg.n, "size": size,
                              "elements": list(witness)}))
        else:
            print(f"n={cfg.n} max={size}")
            print(",".join(map(str, witness)))
        return EXIT_OK
    raise UsageError("sdf needs an action: verify, build, or max")


def _cmd_ilp_export(cfg: RunConfig) -> int:
    if cfg.q is None or cfg.k is None:
        raise UsageError("ilp-export needs --q and --k")
    text = emit_ilp(cfg.q, cfg.k, cfg.cap, fix_first=cfg.fix_first)
    _, rows, binaries = parse_lp(text)
    if cfg.out_path:
        _write_text(cfg.out_path, text)
        print(f"wrote {cfg.out_path}: {len(binaries)} binary variables, "
              f"{len(rows)} rows")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_lrc_params(cfg: RunConfig) -> int:
    if not cfg.in_path:
        raise UsageError("lrc-params needs --in")
    fam = family_from_dict(_load_json(cfg.in_path))
    try:
        params = lrc_params(fam)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if cfg.fmt == "json":
        print(json.dumps({"n": params.n, "k": params.dim, "d": params.d,
                          "r": params.locality, "q": params.q,
                          "singleton_optimal": params.singleton_optimal}))
    else:
        print(f"n={params.n} k={params.dim} d={params.d} "
              f"r={params.locality}")
    return EXIT_OK


def _cmd_table(cfg: RunConfig) -> int:
    results = reproduce_table(cfg.qs, cfg.ks, budget=cfg.budget,
                              workers=cfg.workers)
    if cfg.fmt == "json":
        print(json.dumps([{
            "q": r.q, "k": r.k, "found": r.found, "optimal": r.optimal,
            "reference": r.ref_value, "reference_exact": r.ref_exact,
            "status": r.status, "nodes": r.nodes,
            "elapsed_seconds": round(r.elapsed, 3)} for r in results]))
    else:
        print("q\tk\tfound\toptimal\treference\tstatus\tnodes\telapsed_s")
        for r in results:
            ref = str(r.ref_value) if r.ref_exact else f">={r.ref_value}"
            print(f"{r.q}\t{r.k}\t{r.found}\t{int(r.optimal)}\t{ref}\t"
                  f"{r.status}\t{r.nodes}\t{r.elapsed:.3f}")
    bad = [r for r in results if r.status == "mismatch"]
    return EXIT_REJECTED if bad else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="localarc",
        description="constructions, bounds and exact search for "
                    "k-uniform local arcs in PG(2,q)")
    sub = top.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", dest="fmt", default="text",
                       choices=_FORMATS)

    pc = sub.add_parser("construct", help="build a family")
    pc.add_argument("--q", type=int)
    pc.add_argument("--p", type=int)
    pc.add_argument("--m", type=int, help="extension degree (case3)")
    pc.add_argument("--t", type=int, help="tower height (case2)")
    pc.add_argument("--k", type=int)
    pc.add_argument("--method", choices=_METHODS, default="best")
    pc.add_argument("--basis", help="digit basis, e.g. 5,0,2")
    pc.add_argument("--M1", type=float, dest="m1")
    pc.add_argument("--M2", type=float, dest="m2")
    pc.add_argument("--alphabet", help="case3 alphabet override, csv")
    pc.add_argument("--seed-file", dest="in_path")
    pc.add_argument("--out", dest="out_path")
    pc.add_argument("--verify", dest="verify_mode", default="full",
                    help="full, none, or sample:COUNT:SEED")
    common(pc)

    pv = sub.add_parser("verify", help="re-verify a stored family or seed")
    pv.add_argument("--in", dest="in_path", required=True)
    pv.add_argument("--mode", dest="verify_mode", default="full",
                    help="full or sample:COUNT:SEED")
    common(pv)

    pb = sub.add_parser("bound", help="upper bounds for one (q, k)")
    pb.add_argument("--q", type=int, required=True)
    pb.add_argument("--k", type=int, required=True)
    common(pb)

    ps = sub.add_parser("search", help="exact maximum by backtracking")
    ps.add_argument("--q", type=int, required=True)
    ps.add_argument("--k", type=int, required=True)
    ps.add_argument("--budget", type=float)
    ps.add_argument("--workers", type=int, default=_default_workers())
    ps.add_argument("--symmetry", choices=("none", "fix-first-arc"))
    ps.add_argument("--cap", type=int)
    ps.add_argument("--emit-lp", dest="emit_lp")
    ps.add_argument("--certificate")
    ps.add_argument("--fix-first", dest="fix_first", action="store_true")
    common(ps)

    pf = sub.add_parser("sdf", help="square-difference-free sets")
    sdf_sub = pf.add_subparsers(dest="sdf_action", required=True)
    pfv = sdf_sub.add_parser("verify")
    pfv.add_argument("--elements", required=True)
    pfv.add_argument("--mod", type=int, dest="modulus", required=True)
    common(pfv)
    pfb = sdf_sub.add_parser("build")
    pfb.add_argument("--n", type=int, required=True)
    pfb.add_argument("--basis", help="digit basis, e.g. 5,0,2")
    common(pfb)
    pfm = sdf_sub.add_parser("max")
    pfm.add_argument("--n", type=int, required=True)
    common(pfm)

    pi = sub.add_parser("ilp-export", help="write the 0/1 program")
    pi.add_argument("--q", type=int, required=True)
    pi.add_argument("--k", type=int, required=True)
    pi.add_argument("--cap", type=int)
    pi.add_argument("--fix-first", dest="fix_first", action="store_true")
    pi.add_argument("--out", dest="out_path")
    common(pi)

    pl = sub.add_parser("lrc-params", help="code parameters of a family")
    pl.add_argument("--in", dest="in_path", required=True)
    common(pl)

    pt = sub.add_parser("table", help="reproduce the reference table")
    pt.add_argument("--q", dest="qs", help="comma separated values")
    pt.add_argument("--k", dest="ks", help="comma separated values")
    pt.add_argument("--budget", type=float, help="seconds per cell")
    pt.add_argument("--workers", type=int, default=_default_workers())
    common(pt)

    return top


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    kw = {}
    for f in RunConfig.__dataclass_fields__:
        if hasattr(ns, f):
            kw[f] = getattr(ns, f)
    if kw.get("basis") is not None:
        kw["basis"] = _parse_basis(kw["basis"])
    if kw.get("alphabet") is not None:
        kw["alphabet"] = _parse_ints(kw["alphabet"], "--alphabet")
    if kw.get("elements") is not None:
        kw["elements"] = _parse_ints(kw["elements"], "--elements")
    if kw.get("qs") is not None:
        kw["qs"] = _parse_ints(kw["qs"], "--q")
    if kw.get("ks") is not None:
        kw["ks"] = _parse_ints(kw["ks"], "--k")
    return RunConfig(**kw)


_DISPATCH = {
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "bound": _cmd_bound,
    "search": _cmd_search,
    "sdf": _cmd_sdf,
    "ilp-export": _cmd_ilp_export,
    "lrc-params": _cmd_lrc_params,
    "table": _cmd_table,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config_from_args(ns)
        return _DISPATCH[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotVerified as exc:
        print(f"rejected: {exc}")
        return EXIT_REJECTED
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
