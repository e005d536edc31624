"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product

from .cartan import DominantWeight, UnsupportedTypeError, WeightError, datum_for
from .crystal import (
    CrystalError,
    ResourceCapError,
    check_simple,
    element_key,
    fundamental_tensor,
    generate,
    set_element_cap,
)
from .energy import clear_caches, degree_table, energy_D_ext, energy_values, local_energy, values_json, verify_main
from .onedsum import (
    highest_weights,
    kostka_foulkes_paths,
    kostka_indices,
    normalized_sum,
    one_dim_sum,
    path_degree_sum,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", default="A", help="affine family: A, B, C or D (default A)")
    common.add_argument("--rank", type=int, required=True, help="l for A_{l-1}^(1), n for B_n, C_n, D_n")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--format", choices=("text", "json", "csv"), default=None)
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--cap", type=int, default=None, help="element cap per crystal graph")

    p = argparse.ArgumentParser(prog="lzpath", description="Level-zero path crystals, energies and 1d sums.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("crystal", parents=[common], help="generate B(lambda)_cl and check simplicity")
    c.add_argument("--weights", type=_ints, required=True, help="multiplicities of varpi_1, varpi_2, ...")

    e = sub.add_parser("energy", parents=[common], help="H, Deg and D tables for a sequence i")
    e.add_argument("--seq", type=_ints, required=True)

    o = sub.add_parser("onedsum", parents=[common], help="classically restricted 1d sums X(B_i, mu; q)")
    o.add_argument("--seq", type=_ints, required=True)
    o.add_argument("--mu", type=_ints, default=None, help="multiplicities of varpi_i in mu (default: all)")

    k = sub.add_parser("kostka", parents=[common], help="Kostka-Foulkes polynomials from paths (type A)")
    k.add_argument("--seq", type=_ints, required=True)
    k.add_argument("--mu", type=_ints, default=None)

    v = sub.add_parser("verify", parents=[common], help="check the degree/energy identities")
    v.add_argument("--seq", type=_ints, default=None, help="one sequence; default sweeps all up to --max-length")
    v.add_argument("--max-length", type=int, default=2)
    v.add_argument("--golden", default=None, help="compare Deg/D values with this JSON file")
    v.add_argument("--write-golden", default=None, help="write Deg/D values to this JSON file")
    return p


def _fmt(args) -> str:
    if args.format:
        return args.format
    return "json" if args.json else "text"


def _datum(args):
    return datum_for(args.type, args.rank)


def _mu_weight(datum, mults):
    if len(mults) != len(datum.cartan) - 1:
        raise UsageError(f"--mu needs {len(datum.cartan) - 1} multiplicities")
    return DominantWeight(mults).cl(datum)


def _check_seq(datum, seq):
    if not seq:
        raise UsageError("--seq must be nonempty")
    for i in seq:
        if i not in datum.classical_index_set:
            raise UsageError(f"{i} is not in I_0 = 1..{len(datum.cartan) - 1}")


def _wtxt(w) -> str:
    return "(" + ",".join(map(str, w)) + ")"


def _emit_csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def cmd_crystal(args, out) -> int:
    datum = _datum(args)
    if len(args.weights) != len(datum.cartan) - 1:
        raise UsageError(f"--weights needs {len(datum.cartan) - 1} multiplicities")
    lam = DominantWeight(args.weights)
    if lam.is_zero():
        raise UsageError("--weights must have a positive entry")
    g = generate(datum, lam)
    report = check_simple(g)
    mult: dict = {}
    for b in g.elements:
        mult[g.wt(b)] = mult.get(g.wt(b), 0) + 1
    fmt = _fmt(args)
    if fmt == "json":
        data = g.to_json()
        data.update(
            type=datum.label,
            weight=str(lam),
            size=len(g),
            multiplicities={_wtxt(w): n for w, n in sorted(mult.items())},
            simple={"ok": report.ok, "message": report.message, "counterexample": report.counterexample},
        )
        print(json.dumps(data, indent=1, ensure_ascii=False), file=out)
    elif fmt == "csv":
        print(_emit_csv([[element_key(b), _wtxt(g.wt(b))] for b in g.elements], ["element", "weight"]), file=out)
    else:
        print(f"type {datum.label}  lambda {lam}", file=out)
        print(f"elements {len(g)}", file=out)
        print("weight multiplicities", file=out)
        for w, n in sorted(mult.items()):
            print(f"  {_wtxt(w)} {n}", file=out)
        print("simple " + ("yes" if report.ok else f"no: {report.message} at {report.counterexample}"), file=out)
        for b in g.elements:
            print(f"  {element_key(b)}", file=out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_energy(args, out) -> int:
    datum = _datum(args)
    seq = args.seq
    _check_seq(datum, seq)
    lam = DominantWeight.from_sequence(datum, seq)
    pairs = sorted({(a, b) for a in seq for b in seq})
    tables = {f"H[w{a},w{b}]": local_energy(datum, DominantWeight.fundamental(datum, a), DominantWeight.fundamental(datum, b)) for a, b in pairs}
    deg = degree_table(datum, lam)
    D = energy_values(datum, seq)
    g = fundamental_tensor(datum, seq)
    d_ext = energy_D_ext(datum, seq)
    fmt = _fmt(args)
    if fmt == "json":
        data = {
            "type": datum.label,
            "seq": list(seq),
            "H": {name: t.to_json()["values"] for name, t in tables.items()},
            "Deg": deg.to_json()["values"],
            "D": {element_key(b): D[b] for b in g.elements},
            "D_ext": d_ext,
        }
        print(json.dumps(data, indent=1, ensure_ascii=False), file=out)
    elif fmt == "csv":
        rows = [[name, element_key(b), t[b]] for name, t in tables.items() for b in t.graph.elements]
        rows += [["Deg", element_key(b), deg[b]] for b in deg.graph.elements]
        rows += [["D", element_key(b), D[b]] for b in g.elements]
        rows += [["D_ext", "", d_ext]]
        print(_emit_csv(rows, ["table", "element", "value"]), file=out)
    else:
        print(f"type {datum.label}  i = {seq}", file=out)
        for name, t in tables.items():
            print(name, file=out)
            for b in t.graph.elements:
                print(f"  {t[b]:>3}  {element_key(b)}", file=out)
        print(f"Deg[{lam}]", file=out)
        for b in deg.graph.elements:
            print(f"  {deg[b]:>3}  {element_key(b)}", file=out)
        print("D", file=out)
        for b in g.elements:
            print(f"  {D[b]:>3}  {element_key(b)}", file=out)
        print(f"D_ext {d_ext}", file=out)
    return EXIT_OK


def _targets(datum, args, lam):
    if args.mu is not None:
        return [_mu_weight(datum, args.mu)]
    return highest_weights(datum, lam)


def _mults(w) -> str:
    return ",".join(map(str, w[1:]))


def cmd_onedsum(args, out) -> int:
    datum = _datum(args)
    _check_seq(datum, args.seq)
    lam = DominantWeight.from_sequence(datum, args.seq)
    rows = []
    ok = True
    for mu in _targets(datum, args, lam):
        x = one_dim_sum(datum, args.seq, mu)
        lhs = path_degree_sum(datum, lam, mu)
        rhs = normalized_sum(datum, args.seq, mu)
        ok &= lhs == rhs
        rows.append((mu, x, lhs, lhs == rhs))
    fmt = _fmt(args)
    if fmt == "json":
        data = {
            "type": datum.label,
            "seq": list(args.seq),
            "D_ext": energy_D_ext(datum, args.seq),
            "sums": [
                {"mu": _mults(mu), "X": x.to_json(), "text": str(x), "degree_sum": lhs.to_json(), "identity": same}
                for mu, x, lhs, same in rows
            ],
        }
        print(json.dumps(data, indent=1), file=out)
    elif fmt == "csv":
        print(_emit_csv([[_mults(mu), str(x), str(lhs), same] for mu, x, lhs, same in rows], ["mu", "X", "degree_sum", "identity"]), file=out)
    elif args.mu is not None:
        print(rows[0][1], file=out)
    else:
        for mu, x, lhs, same in rows:
            print(f"mu={_mults(mu)}  X = {x}" + ("" if same else "  IDENTITY FAILS"), file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kostka(args, out) -> int:
    from .charge import charge_oracle

    datum = _datum(args)
    if datum.family != "A":
        raise UsageError("kostka needs --type A")
    _check_seq(datum, args.seq)
    seq = tuple(sorted(args.seq, reverse=True))
    lam = DominantWeight.from_sequence(datum, seq)
    rows = []
    ok = True
    for mu in _targets(datum, args, lam):
        k = kostka_foulkes_paths(datum, seq, mu)
        idx = kostka_indices(datum, seq, mu)
        if idx is None:
            rows.append((mu, k, None, None, k.is_zero()))
            ok &= k.is_zero()
            continue
        oracle = charge_oracle(idx[0].parts, idx[1].parts)
        ok &= oracle == k
        rows.append((mu, k, idx, oracle, oracle == k))
    fmt = _fmt(args)
    if fmt == "json":
        data = {
            "type": datum.label,
            "seq": list(seq),
            "polynomials": [
                {
                    "mu": _mults(mu),
                    "shape": None if idx is None else list(idx[0].parts),
                    "content": None if idx is None else list(idx[1].parts),
                    "K": k.to_json(),
                    "text": str(k),
                    "oracle_agrees": same,
                }
                for mu, k, idx, oracle, same in rows
            ],
        }
        print(json.dumps(data, indent=1), file=out)
    elif fmt == "csv":
        print(_emit_csv([[_mults(mu), "" if idx is None else str(idx[0]), "" if idx is None else str(idx[1]), str(k), same] for mu, k, idx, oracle, same in rows], ["mu", "shape", "content", "K", "oracle_agrees"]), file=out)
    elif args.mu is not None:
        print(rows[0][1], file=out)
    else:
        for mu, k, idx, oracle, same in rows:
            name = "" if idx is None else f"K_{{{idx[0]},{idx[1]}}}"
            print(f"mu={_mults(mu)}  {name} = {k}" + ("" if same else f"  ORACLE GIVES {oracle}"), file=out)
    return EXIT_OK if ok else EXIT_FAIL


def _verify_one(job):
    family, rank, seq, cap = job
    if cap is not None:
        set_element_cap(cap)
    datum = datum_for(family, rank)
    return verify_main(datum, seq).to_json(), values_json(datum, seq)


def _sequences(datum, args):
    if args.seq is not None:
        _check_seq(datum, args.seq)
        return [tuple(args.seq)]
    if args.max_length < 1:
        raise UsageError("--max-length must be at least 1")
    I0 = list(datum.classical_index_set)
    return [s for n in range(1, args.max_length + 1) for s in product(I0, repeat=n)]


def cmd_verify(args, out) -> int:
    datum = _datum(args)
    seqs = _sequences(datum, args)
    jobs = [(datum.family, datum.rank, s, args.cap) for s in seqs]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    ok = all(r["ok"] for r, _ in results)
    values = {",".join(map(str, s)): v for s, (_, v) in zip(seqs, results)}

    golden_failures = []
    if args.golden:
        try:
            with open(args.golden, encoding="utf-8") as fh:
                golden = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read golden file: {exc}")
        for key, want in sorted(golden.get("sequences", {}).items()):
            seq = tuple(int(x) for x in key.split(","))
            have = values.get(key) or _verify_one((datum.family, datum.rank, seq, args.cap))[1]
            if have != want:
                golden_failures.append(key)
        ok &= not golden_failures
    if args.write_golden:
        with open(args.write_golden, "w", encoding="utf-8") as fh:
            json.dump({"type": datum.label, "sequences": values}, fh, indent=1, ensure_ascii=False, sort_keys=True)
            fh.write("\n")

    if _fmt(args) == "json":
        data = {"type": datum.label, "ok": ok, "reports": [r for r, _ in results], "golden_mismatches": golden_failures}
        print(json.dumps(data, indent=1, ensure_ascii=False), file=out)
    else:
        for r, _ in results:
            status = "ok  " if r["ok"] else "FAIL"
            summary = "  ".join(f"{c['name']}:{c['checked']}" + ("" if c["ok"] else "!") for c in r["checks"])
            print(f"{status} {r['type']} i=({','.join(map(str, r['seq']))})  {summary}", file=out)
            for c in r["checks"]:
                for f in c["failures"][:5]:
                    print(f"     {c['name']} counterexample: {json.dumps(f, ensure_ascii=False)}", file=out)
        for key in golden_failures:
            print(f"FAIL golden mismatch for i=({key})", file=out)
        print("all checks passed" if ok else "verification FAILED", file=out)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "crystal": cmd_crystal,
    "energy": cmd_energy,
    "onedsum": cmd_onedsum,
    "kostka": cmd_kostka,
    "verify": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    old_cap = None
    try:
        if args.cap is not None:
            old_cap = set_element_cap(args.cap)
            # graphs cached under a larger cap would slip past the new one
            clear_caches()
        return COMMANDS[args.command](args, out)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, UnsupportedTypeError, WeightError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CrystalError as exc:
        print(f"verification error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        if old_cap is not None:
            set_element_cap(old_cap)


if __name__ == "__main__":
    sys.exit(main())
