"""Command-line entry point: ``formlab <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors.  Reports are JSON (CSV for ``nq-sweep``) and embed the version, the
echoed configuration and the seed; ``--reproducible`` drops the timestamp and
run times so identical invocations give identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import List, Optional

from formlab import __version__
from formlab import capture_graph, charsum_lab, clique, composite_ring, counting
from formlab.corpus import FIXED_GENERIC, generic_corpus
from formlab.counting import CaptureInstance, GuardError, PreconditionError
from formlab.ff_core import FieldError, FieldSpec, odd_prime_powers
from formlab.forms import LinearForm, QuadraticForm, disc, divisibility, parse_coeffs

EXPERIMENTS = ("vinogradov", "weil", "sextic", "pairs", "goodvertex", "burgess")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    reproducible: bool = False
    out: Optional[str] = None
    threads: int = 1
    pretty: bool = False
    max_brute_q: int = counting.BRUTE_MAX_Q
    node_budget: int = clique.NODE_BUDGET
    options: dict = field(default_factory=dict)

    COMMON = ("seed", "reproducible", "out", "threads", "pretty", "max_brute_q", "node_budget")

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        values = dict(vars(ns))
        command = values.pop("command")
        values.pop("handler", None)
        common = {k: values.pop(k) for k in cls.COMMON}
        return cls(command=command, options=values, **common)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))

    def echo(self) -> dict:
        out = asdict(self)
        out.pop("out")
        return out


def default_threads() -> int:
    env = os.environ.get("FORMLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError("FORMLAB_THREADS must be an integer")
    return os.cpu_count() or 1


# -- helpers -------------------------------------------------------------------


def _field(cfg: RunConfig) -> FieldSpec:
    return FieldSpec(cfg.options["p"], cfg.options["n"])


def _instance(cfg: RunConfig, F: FieldSpec) -> CaptureInstance:
    L = parse_coeffs(F, cfg.options["L"], 2)
    Q = parse_coeffs(F, cfg.options["Q"], 3)
    return CaptureInstance(F, LinearForm(*L), QuadraticForm(*Q))


def _parse_set(F: FieldSpec, text: str) -> List[int]:
    if not text.strip():
        return []
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise FieldError(f"set must be comma-separated element indices: {text!r}")
    return sorted({F.check(v) for v in vals})


def _instance_info(inst: CaptureInstance, pretty: bool) -> dict:
    F, red = inst.spec, inst.red
    out = {
        "L": [inst.L.a1, inst.L.a2],
        "Q": [inst.Q.b1, inst.Q.b2, inst.Q.b3],
        "case": inst.case.value,
        "r": red.r,
        "s": red.s,
        "t": red.t,
        "D": red.D,
    }
    if pretty:
        out["L_pretty"] = inst.L.pretty(F)
        out["Q_pretty"] = inst.Q.pretty(F)
    return out


def _envelope(cfg: RunConfig, result) -> dict:
    env = {
        "version": __version__,
        "command": cfg.command,
        "config": cfg.echo(),
        "seed": cfg.seed,
        "result": result,
    }
    if not cfg.reproducible:
        env["timestamp"] = datetime.now(timezone.utc).isoformat()
    return env


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- subcommands ---------------------------------------------------------------


def cmd_field(cfg: RunConfig):
    F = _field(cfg)
    table = F.chi_table
    result = {
        "p": F.p,
        "n": F.n,
        "q": F.q,
        "modulus": list(F.modulus),
        "squares": int((table == 1).sum()),
        "nonsquares": int((table == -1).sum()),
        "chi_sum": int(table.sum()),
        "chi_prefix": [int(v) for v in table[: min(F.q, 32)]],
    }
    if cfg.pretty:
        result["modulus_pretty"] = "x^%d" % F.n + "".join(
            f" + {c}" + ("" if i == 0 else "x" if i == 1 else f"x^{i}")
            for i, c in reversed(list(enumerate(F.modulus[:-1])))
            if c
        )
    return result, True


def cmd_reduce(cfg: RunConfig):
    F = _field(cfg)
    inst = _instance(cfg, F)
    red = inst.red
    result = {
        "r": red.r,
        "s": red.s,
        "t": red.t,
        "D": red.D,
        "disc": disc(F, inst.Q),
        "divisibility": divisibility(F, inst.L, inst.Q).value,
        "pivot": red.pivot,
        "case": inst.case.value,
    }
    if cfg.pretty:
        result.update({k: v for k, v in _instance_info(inst, True).items() if k.endswith("pretty")})
    return result, True


def cmd_count(cfg: RunConfig):
    F = _field(cfg)
    inst = _instance(cfg, F)
    a, b = F.check(cfg.options["a"]), F.check(cfg.options["b"])
    result = {"a": a, "b": b, "case": inst.case.value}
    ok = True
    if inst.red.r != 0:
        result["closed"] = counting.count_closed(inst, a, b)
    if cfg.options["brute"] or inst.red.r == 0:
        result["brute"] = counting.count_brute(inst, a, b, cfg.max_brute_q)
    if "closed" in result and "brute" in result:
        result["agree"] = ok = result["closed"] == result["brute"]
    return result, ok


def cmd_capture(cfg: RunConfig):
    F = _field(cfg)
    inst = _instance(cfg, F)
    A = _parse_set(F, cfg.options["set"])
    result = {"set": A, "case": inst.case.value, "captures": counting.capture_exists(inst, A, cfg.max_brute_q)}
    ok = True
    if cfg.options["brute"]:
        result["brute"] = counting.capture_exists_brute(inst, A, cfg.max_brute_q)
        result["agree"] = ok = result["brute"] == result["captures"]
    return result, ok


def cmd_graph(cfg: RunConfig):
    F = _field(cfg)
    inst = _instance(cfg, F)
    G = capture_graph.build(inst)
    result = {**_instance_info(inst, cfg.pretty), **G.summary()}
    if cfg.options["export"] == "dimacs":
        text = capture_graph.export_dimacs(G)
        target = cfg.options["dimacs_out"]
        if target:
            with open(target, "w") as fh:
                fh.write(text)
            result["dimacs"] = target
        else:
            result["dimacs_text"] = text
    return result, True


def cmd_nq(cfg: RunConfig):
    F = _field(cfg)
    inst = _instance(cfg, F)
    mode = cfg.options["mode"]
    result = _instance_info(inst, cfg.pretty)
    result["upper_bound"] = clique.nq_bounds(F.q)
    if mode == "bounds":
        result["upper_int"] = clique.nq_upper_int(F.q)
        result["lower_bound"] = "order log q (implicit constant)"
        return result, True
    res = clique.nq(inst, mode, cfg.node_budget)
    result.update(res.to_dict())
    ok = not (inst.case is counting.Case.GENERIC and res.status is clique.Status.EXACT
              and res.lo > result["upper_bound"])
    return result, ok


SWEEP_HEADER = ["q", "p", "n", "L", "Q", "case", "nq", "status", "upper_bound", "greedy_size", "runtime_ms"]


def _sweep_row(args):
    q, p, n, L, Q, mode, node_budget, reproducible = args
    F = FieldSpec(p, n)
    inst = CaptureInstance(F, LinearForm(*L), QuadraticForm(*Q))
    start = time.perf_counter()
    greedy = ""
    if inst.case is counting.Case.GENERIC:
        G = capture_graph.build(inst)
        greedy = clique.greedy_clique(G).size
    res = clique.nq(inst, mode, node_budget)
    elapsed = 0 if reproducible else round((time.perf_counter() - start) * 1000)
    return [
        q, p, n, "%d,%d" % L, "%d,%d,%d" % Q, inst.case.value,
        res.lo, res.status.value, "%.6f" % clique.nq_bounds(q), greedy, elapsed,
    ]


def cmd_nq_sweep(cfg: RunConfig):
    opts = cfg.options
    jobs = []
    for q, p, n in odd_prime_powers(opts["qmax"], opts["qmin"]):
        F = FieldSpec(p, n)
        for inst in generic_corpus(F, extra=max(0, opts["instances"] - len(FIXED_GENERIC)), seed=cfg.seed)[: opts["instances"]]:
            L = (inst.L.a1, inst.L.a2)
            Q = (inst.Q.b1, inst.Q.b2, inst.Q.b3)
            jobs.append((q, p, n, L, Q, opts["mode"], cfg.node_budget, cfg.reproducible))
    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(j) for j in jobs]
    ok = all(
        not (row[7] == "EXACT" and row[5] == "GENERIC" and row[6] > float(row[8])) for row in rows
    )
    return rows, ok


def cmd_charsum(cfg: RunConfig):
    opts = cfg.options
    exp = opts["experiment"]
    trials = opts["trials"]
    if exp == "burgess":
        lengths = [int(v) for v in opts["lengths"].split(",")]
        if opts["n"] != 1:
            raise UsageError("burgess probe needs a prime field (n = 1)")
        FieldSpec(opts["p"], 1)
        rep = charsum_lab.run_burgess(opts["p"], lengths, opts["shifts"], cfg.seed)
        return rep.to_dict(), True
    F = _field(cfg)
    if exp == "vinogradov":
        rep = charsum_lab.run_vinogradov(F, trials, cfg.seed, opts["samples"])
    elif exp == "weil":
        rep = charsum_lab.run_weil(F, trials, cfg.seed, keep_samples=opts["samples"])
    else:
        inst = _instance(cfg, F)
        if exp == "sextic":
            rep = charsum_lab.run_sextic(inst, trials, cfg.seed, opts["samples"])
        elif exp == "pairs":
            rep = charsum_lab.run_pairs(inst, trials, cfg.seed, opts["samples"])
        else:
            rep = charsum_lab.run_goodvertex(inst, trials, cfg.seed)
    return rep.to_dict(), rep.passed


def cmd_composite(cfg: RunConfig):
    opts = cfg.options

    def ints(text, k):
        try:
            vals = [int(v) for v in text.split(",")]
        except ValueError:
            raise UsageError(f"coefficients must be comma-separated integers: {text!r}")
        if len(vals) != k:
            raise UsageError(f"expected {k} coefficients, got {len(vals)}")
        return [v % opts["N"] for v in vals]

    L, Q = ints(opts["L"], 2), ints(opts["Q"], 3)
    if not any(L) or not any(Q):
        raise UsageError("forms must be nonzero mod N")
    result = composite_ring.blocking_report(opts["N"], L, Q, cfg.max_brute_q)
    return result, result["verified"] is not False


HANDLERS = {
    "field": cmd_field,
    "reduce": cmd_reduce,
    "count": cmd_count,
    "capture": cmd_capture,
    "graph": cmd_graph,
    "nq": cmd_nq,
    "nq-sweep": cmd_nq_sweep,
    "charsum": cmd_charsum,
    "composite": cmd_composite,
}


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--reproducible", action="store_true", help="omit timestamps and run times")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=None, help="worker processes (env FORMLAB_THREADS; default all cores)")
    common.add_argument("--pretty", action="store_true", help="also render forms and polynomials")
    common.add_argument("--max-brute-q", type=int, default=counting.BRUTE_MAX_Q, help="guard for q^2 / N^2 scans")
    common.add_argument("--node-budget", type=int, default=clique.NODE_BUDGET, help="branch-and-bound node budget")

    fieldp = argparse.ArgumentParser(add_help=False)
    fieldp.add_argument("--p", type=int, required=True, help="odd prime characteristic")
    fieldp.add_argument("--n", type=int, default=1, help="extension degree (default 1)")

    formp = argparse.ArgumentParser(add_help=False)
    formp.add_argument("--L", default="1,1", help="a1,a2 element indices (default 1,1 = X+Y)")
    formp.add_argument("--Q", default="0,1,0", help="b1,b2,b3 element indices (default 0,1,0 = XY)")

    parser = argparse.ArgumentParser(prog="formlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("field", parents=[common, fieldp], help="field parameters and character table summary")
    sub.add_parser("reduce", parents=[common, fieldp, formp], help="reduction (r, s, t, D) of L and Q")

    p = sub.add_parser("count", parents=[common, fieldp, formp], help="solutions of L=a, Q=b")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--brute", action="store_true", help="also count by enumeration")

    p = sub.add_parser("capture", parents=[common, fieldp, formp], help="does a set capture L and Q")
    p.add_argument("--set", required=True, help="comma-separated element indices")
    p.add_argument("--brute", action="store_true", help="also decide by enumeration")

    p = sub.add_parser("graph", parents=[common, fieldp, formp], help="capture graph summary and export")
    p.add_argument("--export", choices=["dimacs"], default=None)
    p.add_argument("--dimacs-out", default=None, help="DIMACS target file (with --export dimacs)")

    p = sub.add_parser("nq", parents=[common, fieldp, formp], help="capture number")
    p.add_argument("--mode", choices=["exact", "greedy", "oracle", "bounds"], default="exact")

    p = sub.add_parser("nq-sweep", parents=[common], help="CSV of capture numbers over odd prime powers")
    p.add_argument("--qmax", type=int, default=499)
    p.add_argument("--qmin", type=int, default=3)
    p.add_argument("--instances", type=int, default=3, help="generic instances per field")
    p.add_argument("--mode", choices=["exact", "greedy"], default="exact")

    p = sub.add_parser("charsum", parents=[common, fieldp, formp], help="character-sum experiments")
    p.add_argument("--experiment", choices=EXPERIMENTS, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--lengths", default="8,16,32,64", help="burgess interval lengths")
    p.add_argument("--shifts", type=int, default=50, help="burgess shifts per length")
    p.add_argument("--samples", action="store_true", help="keep per-trial records")

    p = sub.add_parser("composite", parents=[common, formp], help="density-1/p blocking set in Z/NZ")
    p.add_argument("--N", type=int, required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    # `graph --export dimacs --out FILE` names the DIMACS file
    if ns.command == "graph" and ns.export and ns.out and not ns.dimacs_out:
        ns.dimacs_out, ns.out = ns.out, None
    try:
        if ns.threads is None:
            ns.threads = default_threads()
        cfg = RunConfig.from_namespace(ns)
        result, ok = HANDLERS[cfg.command](cfg)
    except (UsageError, FieldError, PreconditionError, GuardError, ZeroDivisionError) as exc:
        print(f"formlab {ns.command}: error: {exc}", file=sys.stderr)
        return 2

    if cfg.command == "nq-sweep":
        buf = io.StringIO()
        buf.write(f"# formlab {__version__} config={json.dumps(cfg.echo(), sort_keys=True)}\n")
        if not cfg.reproducible:
            buf.write(f"# timestamp={datetime.now(timezone.utc).isoformat()}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        writer.writerows(result)
        text = buf.getvalue()
    else:
        text = _dumps(_envelope(cfg, result))

    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
