"""Command-line surface: ``ainfss <command> ...``.

Exit codes: 0 success, 1 a checked law fails or a comparison differs,
2 unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import sys

from . import document as doc
from .ainf import AInfinityAlgebra, bar_square_check, check_morphism, check_stasheff, flagged_positions
from .bigraded import cohomology_with_section
from .corpus import DEFAULT_SEED, build_corpus, seed_from_env
from .deformations import (FilteredAInfinity, FormalBigradedDeformation, associated_graded, check_deformation,
                           check_filtered, rees, rees_roundtrip_check, specialize_hbar_one)
from .fixtures import f1, f2, f3
from .pages import (PreconditionError, compare_closed_form, compare_pages, couple_pages, enhancement_family_report,
                    pages_from_deformation, pages_from_filtration, weak_convergence_check)
from .report import Report
from .transfer import deformation_transfer, kadeishvili_transfer, verify_quasi_iso


class _InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _InputError(f"{path}: {exc.strerror}") from None


def _load(path: str):
    try:
        return doc.parse(_read(path))
    except (doc.ParseError, doc.ValidationError) as exc:
        raise _InputError(f"{path}: {exc}") from None


def _as_deformation(X) -> FormalBigradedDeformation:
    if isinstance(X, FilteredAInfinity):
        return rees(X)
    if isinstance(X, AInfinityAlgebra):
        return FormalBigradedDeformation.constant(X)
    return X


def _as_filtered(X) -> FilteredAInfinity:
    if isinstance(X, FilteredAInfinity):
        return X
    D = _as_deformation(X)
    if D.s_type != 0:
        raise PreconditionError("the filtration route needs a structure of 0-th type")
    return specialize_hbar_one(D)


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _table(d: dict) -> str:
    return " ".join(f"({b[0]},{b[1]}):{n}" for b, n in sorted(d.items())) or "0"


# --- commands -------------------------------------------------------------------------------


def cmd_check(args) -> int:
    X = _load(args.file)
    if isinstance(X, FilteredAInfinity):
        rep = check_filtered(X)
    elif isinstance(X, FormalBigradedDeformation):
        rep = check_deformation(X)
    else:
        rep = check_stasheff(X)
        bar = bar_square_check(X)
        if flagged_positions(rep) != flagged_positions(bar):
            rep.add("bar-agreement", "bar construction and Stasheff identities flag different positions")
    _out(rep.text())
    return 1 if rep else 0


def cmd_cohomology(args) -> int:
    X = _load(args.file)
    A = X.as_plain() if isinstance(X, FilteredAInfinity) else X
    base = A.base if isinstance(A, FormalBigradedDeformation) else A
    c = cohomology_with_section(base.differential(), unit=base.unit)
    lines = [f"dims {_table({b: n for b, n in c.dims().items() if n})}"]
    for h in range(c.H.dim):
        lines.append(f"{c.H.name(h)} = {base.space.format_vector(c.section_vectors[h])}")
    _out("\n".join(lines))
    return 0


def cmd_transfer(args) -> int:
    X = _load(args.file)
    if isinstance(X, AInfinityAlgebra):
        res = kadeishvili_transfer(X, args.arity_max)
        rep = check_stasheff(res.model)
        rep.extend(check_morphism(res.morphism))
        model = res.model
    else:
        res = deformation_transfer(_as_deformation(X), args.arity_max)
        rep = check_deformation(res.model)
        rep.extend(verify_quasi_iso(res))
        model = res.model
    summary = f"arity bound {res.arity_max} ({'degree' if res.complete else 'cap'}); checks: {rep.text()}"
    if args.out:
        _write(args.out, doc.serialize(model))
        _out(summary)
    else:
        _out(doc.serialize(model))
        sys.stderr.write(summary + "\n")
    return 1 if rep else 0


def _pages(X, route: str, r_max: int | None):
    if route == "filtration":
        return pages_from_filtration(_as_filtered(X), r_max)
    return pages_from_deformation(_as_deformation(X), r_max, route="d_iteration" if route == "d-iter"
                                  else "enhancement")


def cmd_pages(args) -> int:
    X = _load(args.file)
    try:
        P = _pages(X, args.route, args.r_max)
    except PreconditionError as exc:
        raise _InputError(str(exc)) from None
    verdicts = {"page_laws": "ok" if not P.checks else "fail"}
    text = doc.dumps(doc.page_report(P, verdicts))
    if args.out:
        _write(args.out, text)
    else:
        _out(text)
    for pg in P.pages:
        _out(f"E_{pg.r}: {_table(pg.dims)}   d_{pg.r} ranks: {_table(pg.d_ranks)}")
    if P.e_inf is not None:
        _out(f"E_inf: {_table(P.e_inf)}")
    if P.checks:
        _out(P.checks.text())
    return 1 if P.checks else 0


def _page_source(path: str, r_max: int | None):
    text = _read(path)
    if doc.is_page_report(text):
        try:
            return doc.parse_page_report(text)
        except (doc.ParseError, doc.ValidationError) as exc:
            raise _InputError(f"{path}: {exc}") from None
    X = _load(path)
    return _pages(X, "filtration" if isinstance(X, FilteredAInfinity) else "d-iter", r_max)


def cmd_compare(args) -> int:
    P1 = _page_source(args.file_a, args.r_max)
    P2 = _page_source(args.file_b, args.r_max)
    rep = compare_pages(P1, P2, args.r_max)
    _out(rep.text())
    return 1 if rep else 0


def cmd_einf(args) -> int:
    X = _load(args.file)
    try:
        if isinstance(X, FilteredAInfinity):
            P = pages_from_filtration(X, r_max=1)
            rep = weak_convergence_check(X)
        else:
            D = _as_deformation(X)
            P = pages_from_deformation(D, route="d_iteration")
            if D.s_type == 0:
                rep = weak_convergence_check(D)
            else:
                rep = Report("weak convergence")
                rep.notes.append("skipped: only checked for structures of 0-th type")
    except PreconditionError as exc:
        raise _InputError(str(exc)) from None
    _out(f"E_inf: {_table(P.e_inf)}")
    _out(rep.text())
    return 1 if rep else 0


# --- selftest ---------------------------------------------------------------------------------


def selftest_report(seed: int, scale: int = 1) -> tuple[list[str], bool]:
    """Deterministic text report of the property corpus; returns (lines, all passed)."""
    C = build_corpus(seed, n_algebras=40 * scale, n_deformations=20 * scale, n_filtered=10 * scale,
                     n_unconstrained=20 * scale)
    digest = hashlib.sha256()
    for X in C.algebras + C.deformations + C.filtered:
        digest.update(doc.serialize(X).encode())
    lines = [f"seed {seed}", f"corpus digest {digest.hexdigest()[:16]}",
             f"corpus sizes algebras={len(C.algebras)} deformations={len(C.deformations)} "
             f"filtered={len(C.filtered)} unconstrained={len(C.unconstrained)}"]
    ok = True

    def verdict(name: str, failures: int, total: int) -> None:
        nonlocal ok
        ok &= failures == 0
        lines.append(f"{'PASS' if failures == 0 else 'FAIL'} {name}: {total - failures}/{total}")

    bad = sum(bool(check_stasheff(A)) or bool(bar_square_check(A)) for A in C.algebras)
    verdict("identities on algebras", bad, len(C.algebras))
    bad = sum(flagged_positions(check_stasheff(A, 4)) != flagged_positions(bar_square_check(A, 4))
              for A in C.unconstrained)
    verdict("bar/Stasheff agreement on random structures", bad, len(C.unconstrained))
    bad = 0
    for A in C.algebras:
        res = kadeishvili_transfer(A)
        bad += bool(check_stasheff(res.model)) or bool(check_morphism(res.morphism)) or not res.complete
    verdict("minimal models", bad, len(C.algebras))
    bad_t = bad_p = bad_r = bad_w = 0
    for D in C.deformations:
        res = deformation_transfer(D)
        bad_t += bool(check_deformation(res.model)) or bool(verify_quasi_iso(res))
        P1 = pages_from_filtration(specialize_hbar_one(D))
        P2 = pages_from_deformation(D, P1.r_last, "d_iteration")
        cp = couple_pages(D, len(P2.pages))
        bad_p += (bool(compare_pages(P1, P2)) or bool(P1.checks) or bool(P2.checks)
                  or bool(compare_closed_form(D, P2))
                  or any((dims, rk) != (pg.dims, pg.d_ranks) for (_, dims, rk), pg in zip(cp, P2.pages)))
        bad_r += (not rees_roundtrip_check(D)) or not associated_graded(specialize_hbar_one(D)).same_structure(D.base)
        bad_w += bool(weak_convergence_check(D))
    verdict("deformation transfer", bad_t, len(C.deformations))
    verdict("filtration vs D-iteration pages", bad_p, len(C.deformations))
    verdict("Rees round trip", bad_r, len(C.deformations))
    verdict("weak convergence", bad_w, len(C.deformations))
    bad = 0
    for Fa in C.filtered:
        P1 = pages_from_filtration(Fa)
        P3 = pages_from_deformation(rees(Fa), P1.r_last, "enhancement")
        bad += bool(compare_pages(P1, P3)) or bool(P3.checks) or bool(enhancement_family_report(P3))
    verdict("filtration vs enhancement pages", bad, len(C.filtered))
    for name, D in (("F1", f1()), ("F2", f2())):
        P = pages_from_filtration(specialize_hbar_one(D), 3)
        for pg in P.pages:
            lines.append(f"{name} E_{pg.r}: {_table(pg.dims)} d ranks: {_table(pg.d_ranks)}")
    res = kadeishvili_transfer(f3())
    lines.append("F3 m3: " + "; ".join(
        f"({','.join(res.model.space.name(k) for k in key)}) -> {res.model.space.format_vector(v)}"
        for key, v in sorted(res.model.m(3).items())))
    return lines, ok


def cmd_selftest(args) -> int:
    seed = args.seed if args.seed is not None else seed_from_env(DEFAULT_SEED)
    lines, ok = selftest_report(seed, args.scale)
    _out("\n".join(lines))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ainfss", description="A∞-algebras, deformations and spectral-sequence pages")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", help="check the structure laws of a document")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("cohomology", help="cohomology of m_1 (of m_1^0 for deformations) with representatives")
    p.add_argument("file")
    p.set_defaults(func=cmd_cohomology)
    p = sub.add_parser("transfer", help="minimal model (Kadeishvili or deformation transfer)")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--arity-max", type=int, default=None)
    p.set_defaults(func=cmd_transfer)
    p = sub.add_parser("pages", help="spectral-sequence pages by one route")
    p.add_argument("file")
    p.add_argument("--route", choices=["filtration", "d-iter", "enhance"], default="filtration")
    p.add_argument("--r-max", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pages)
    p = sub.add_parser("compare", help="compare page invariants of two page reports or documents")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--r-max", type=int, default=None)
    p.set_defaults(func=cmd_compare)
    p = sub.add_parser("einf", help="E_inf and the weak convergence check")
    p.add_argument("file")
    p.set_defaults(func=cmd_einf)
    p = sub.add_parser("selftest", help="run the seeded property corpus")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--scale", type=int, default=1)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
