"""Command-line front end: `python cli.py <command> [options]`."""
import argparse
import json
import logging
import random
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd

# Add src directory to path
sys.path.append(str(Path(__file__).parent / "src"))

from config import config
from arith import factor_squarefree
from cassels import criterion_trace, generators_t1, generators_t2, pairing
from distribution import (count_rank_deficient, count_rank_deficient_bruteforce,
                          count_symmetric_rank, count_symmetric_rank_bruteforce,
                          enumerate_Ck_alpha_B, sweep)
from family import base_selmer_dim, survey_triples, triple_from_k
from genus import genus_report
from selmer import full_selmer_dim, s2, selmer_bruteforce, selmer_group
from torsion import ono_order3, ono_order4, ono_order8, torsion_oracle
from utils import (ContractViolation, SearchExhausted, export_report_json,
                   parse_bit_matrix, parse_int_list, parse_triple, sweep_to_csv)

logger = logging.getLogger("cli")

# (payload, optional table, csv header)
Result = Tuple[Dict, Optional[pd.DataFrame], Optional[Dict]]


def _cmd_triple(args, rng) -> Result:
    t = triple_from_k(args.k)
    return {"k": args.k, "a": t.a, "b": t.b, "c": t.c, "triple": str(t)}, None, None


def _cmd_base_selmer(args, rng) -> Result:
    t = parse_triple(args.triple)
    dim = base_selmer_dim(t)
    return {"triple": str(t), "kprime": t.kprime, "base_selmer_dim": dim, "usable": dim == 2}, None, None


def _cmd_genus(args, rng) -> Result:
    report = genus_report(factor_squarefree(args.n), oracle=True, rng=rng)
    return report.to_dict(), None, None


def _cmd_selmer(args, rng) -> Result:
    t = parse_triple(args.triple)
    n = factor_squarefree(args.n)
    elements = selmer_group(t, n)
    payload = {
        "triple": str(t),
        "n": n.value,
        "s2": s2(t, n),
        "full_selmer_dim": full_selmer_dim(t, n),
        "elements": [list(e) for e in elements],
        "oracle_agrees": "skipped",
    }
    if args.oracle:
        payload["oracle_agrees"] = set(elements) == set(selmer_bruteforce(t, n))
    table = pd.DataFrame(payload["elements"], columns=["d1", "d2", "d3"])
    return payload, table, None


def _cmd_cassels(args, rng) -> Result:
    t = parse_triple(args.triple)
    n = factor_squarefree(args.n)
    if args.theorem == 1:
        first, second, d = generators_t1(t, n)
    else:
        first, second, d, _ = generators_t2(t, n)
    outcome = pairing(t, n, args.theorem, rng)
    w = outcome.witness
    return {
        "triple": str(t),
        "n": n.value,
        "theorem": args.theorem,
        "generators": [str(first), str(second)],
        "d": d,
        "branch": outcome.branch,
        "pairing": outcome.value,
        "nondegenerate": outcome.nondegenerate,
        "witness": [w.alpha, w.beta, w.gamma],
    }, None, None


def _cmd_sha(args, rng) -> Result:
    t = parse_triple(args.triple)
    trace = criterion_trace(t, factor_squarefree(args.n), args.theorem, rng=rng, with_pairing=True)
    trace["triple"] = str(t)
    return trace, None, None


def _cmd_torsion(args, rng) -> Result:
    t = parse_triple(args.triple)
    n = factor_squarefree(args.n)
    A, B = t.A * n.value, t.B * n.value
    shape = torsion_oracle(t.a, t.b, n.value)
    return {
        "triple": str(t),
        "n": n.value,
        "ono_order4": ono_order4(A, B),
        "ono_order8": ono_order8(A, B),
        "ono_order3": ono_order3(A, B),
        "torsion": str(shape),
    }, None, None


def _cmd_density(args, rng) -> Result:
    t = parse_triple(args.triple)
    result = sweep(t, args.x, args.k, args.theorem, jobs=args.jobs, seed=args.seed, verbose=args.verbose)
    header = {"t": str(t), "x": args.x, "k": args.k, "theorem": args.theorem, "seed": args.seed}
    return result.record, result.frame, header


def _cmd_count_matrices(args, rng) -> Result:
    rows = []
    for r in range(args.k + 1):
        rows.append({
            "rank": r,
            "count": count_symmetric_rank(args.k, r),
            "bruteforce": count_symmetric_rank_bruteforce(args.k, r) if args.k <= 5 else None,
        })
    payload = {"k": args.k, "counts": rows, "total": sum(row["count"] for row in rows)}
    if args.k >= 2:
        payload["rank_deficient"] = count_rank_deficient(args.k)
        payload["rank_deficient_bruteforce"] = count_rank_deficient_bruteforce(args.k) if args.k <= 5 else None
    return payload, pd.DataFrame(rows), {"k": args.k}


def _cmd_ck_set(args, rng) -> Result:
    t = parse_triple(args.triple)
    result = enumerate_Ck_alpha_B(t, args.x, parse_int_list(args.alpha), parse_bit_matrix(args.matrix))
    table = pd.DataFrame({"n": result["members"]})
    header = {"t": str(t), "x": args.x, "alpha": args.alpha, "matrix": args.matrix}
    return result, table, header


def _cmd_survey(args, rng) -> Result:
    frame = survey_triples(args.kmax)
    usable = frame[frame["usable"]]["k"].tolist()
    return {"kmax": args.kmax, "usable_k": usable}, frame, {"kmax": args.kmax}


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='Emit JSON')
    common.add_argument('--csv', action='store_true', help='Emit the table as CSV')
    common.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    common.add_argument('--jobs', type=int, default=config.DEFAULT_JOBS)
    common.add_argument('--verbose', action='store_true')
    common.add_argument('--out', type=str, help=f'File name under {config.RESULTS_DIR}')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(description="2-Selmer groups, genus theory and Sha for y^2 = x(x - a^2 n)(x + b^2 n)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("triple", parents=[common])
    p.add_argument('--k', type=int, required=True)
    p.set_defaults(handler=_cmd_triple)

    p = subparsers.add_parser("base-selmer", parents=[common])
    p.add_argument('--triple', required=True)
    p.set_defaults(handler=_cmd_base_selmer)

    p = subparsers.add_parser("genus", parents=[common])
    p.add_argument('--n', type=int, required=True)
    p.set_defaults(handler=_cmd_genus)

    p = subparsers.add_parser("selmer", parents=[common])
    p.add_argument('--triple', required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--oracle', action='store_true')
    p.set_defaults(handler=_cmd_selmer)

    for name, handler in (("cassels", _cmd_cassels), ("sha", _cmd_sha)):
        p = subparsers.add_parser(name, parents=[common])
        p.add_argument('--triple', required=True)
        p.add_argument('--n', type=int, required=True)
        p.add_argument('--theorem', type=int, choices=[1, 2], required=True)
        p.set_defaults(handler=handler)

    p = subparsers.add_parser("torsion", parents=[common])
    p.add_argument('--triple', required=True)
    p.add_argument('--n', type=int, required=True)
    p.set_defaults(handler=_cmd_torsion)

    p = subparsers.add_parser("density", parents=[common])
    p.add_argument('--triple', required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--x', type=int, required=True)
    p.add_argument('--theorem', type=int, choices=[1, 2], default=2)
    p.set_defaults(handler=_cmd_density)

    p = subparsers.add_parser("count-matrices", parents=[common])
    p.add_argument('--k', type=int, required=True)
    p.set_defaults(handler=_cmd_count_matrices)

    p = subparsers.add_parser("ck-set", parents=[common])
    p.add_argument('--triple', default="1,1,1")
    p.add_argument('--alpha', required=True, help="e.g. 1,1")
    p.add_argument('--matrix', required=True, help="rows separated by ';', e.g. 00;00")
    p.add_argument('--x', type=int, required=True)
    p.set_defaults(handler=_cmd_ck_set)

    p = subparsers.add_parser("survey", parents=[common])
    p.add_argument('--kmax', type=int, default=50)
    p.set_defaults(handler=_cmd_survey)

    return parser


def _human(payload: Dict, table: Optional[pd.DataFrame]) -> str:
    width = max(len(key) for key in payload) if payload else 0
    lines = [f"{key.ljust(width)}  {value}" for key, value in payload.items()
             if not isinstance(value, (list, dict)) or len(str(value)) < 120]
    if table is not None and not table.empty:
        lines += ["", table.to_string(index=False)]
    return "\n".join(lines)


def _render(args, payload: Dict, table: Optional[pd.DataFrame], header: Optional[Dict]) -> str:
    if args.csv:
        frame = table if table is not None else pd.DataFrame([payload])
        return sweep_to_csv(frame, header or {"command": args.command}).rstrip("\n")
    if args.json:
        if table is not None and args.command in ("density", "survey"):
            payload = dict(payload, rows=json.loads(table.to_json(orient="records")))
        return json.dumps(payload, default=str)
    if args.command == "triple":
        return payload["triple"]
    return _human(payload, table)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )
    logger.debug("%s with seed %d", args.command, args.seed)
    rng = random.Random(args.seed)

    try:
        payload, table, header = args.handler(args, rng)
    except ContractViolation as e:
        print(f"❌ Contract violation: {e}", file=sys.stderr)
        return 2
    except SearchExhausted as e:
        print(f"❌ Search exhausted: {e}", file=sys.stderr)
        return 1

    text = _render(args, payload, table, header)
    if args.out:
        path = config.RESULTS_DIR / args.out
        if args.json:
            export_report_json(json.loads(text), path)
        else:
            path.write_text(text + "\n", encoding="utf-8")
        print(f"✅ Saved to {path}")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(run())
