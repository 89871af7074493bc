"""Command-line interface.

Every subcommand builds a JSON-ready payload.  With ``--json`` the whole
:class:`CommandResult` is printed as one JSON document; otherwise a short
human-readable rendering of the payload is printed.  Errors always go to
stderr as JSON, with exit code 2 (usage), 3 (domain) or 4 (resource bound).

Integers that can grow without bound (fertilities, polynomial
coefficients, search targets) are emitted as decimal strings; counts,
sizes and entries of permutations or compositions are native numbers.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from . import cumulants as cu
from . import fertility as fe
from . import nestohedron as ne
from . import perm_core as pc
from . import verify as ve
from . import vhc as vh
from .errors import DomainError, ResourceError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_RESOURCE = 4


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    command: str
    input_echo: str
    payload: object
    elapsed_ms: int
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "input_echo": self.input_echo,
            "payload": self.payload,
            "elapsed_ms": self.elapsed_ms,
            "schema_version": self.schema_version,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CommandResult":
        return cls(data["command"], data["input_echo"], data["payload"],
                   data["elapsed_ms"], data["schema_version"])


# ---------------------------------------------------------------------------
# JSON schemas of the payloads
# ---------------------------------------------------------------------------

_INT_LIST = {"type": "array", "items": {"type": "integer"}}
_DECIMAL = {"type": "string", "pattern": "^-?[0-9]+$"}
_HOOKS = {"type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                     "minItems": 2, "maxItems": 2}}
_BUILDING_SET = {
    "type": "object",
    "required": ["ground", "sets", "weights"],
    "properties": {
        "ground": {"type": "integer", "minimum": 1},
        "sets": {"type": "array", "items": _INT_LIST},
        "weights": {"type": "array", "items": {
            "type": "array", "prefixItems": [_INT_LIST, {"type": "integer", "minimum": 1}],
            "minItems": 2, "maxItems": 2}},
    },
}
_SYMBOLIC = {"type": "array", "items": {
    "type": "array", "minItems": 3, "maxItems": 3,
    "prefixItems": [{"type": "array", "items": _INT_LIST}, _DECIMAL, _DECIMAL]}}


def _obj(required: dict) -> dict:
    return {"type": "object", "required": sorted(required),
            "properties": required, "additionalProperties": False}


PAYLOAD_SCHEMAS = {
    "sort": {"type": "string"},
    "preimages": _obj({"perm": _INT_LIST, "count": {"type": "integer"},
                       "preimages": {"type": "array", "items": _INT_LIST}}),
    "vhc": _obj({
        "perm": _INT_LIST,
        "configurations": {"type": "array", "items": _obj({"hooks": _HOOKS, "composition": _INT_LIST})},
        "valid_compositions": {"type": "array", "items": _INT_LIST},
        "canonical": {"anyOf": [_HOOKS, {"type": "null"}]},
    }),
    "fertilitope": _obj({
        "perm": _INT_LIST,
        "sorted": {"type": "boolean"},
        "building_set": {"anyOf": [_BUILDING_SET, {"type": "null"}]},
        "lattice_points": {"type": "array", "items": _INT_LIST},
        "vertices": {"type": "array", "items": _INT_LIST},
        "f_vector": _INT_LIST,
        "h_vector": _INT_LIST,
        "dimension": {"anyOf": [{"type": "integer"}, {"const": ne.EMPTY}]},
    }),
    "fertility": _obj({"perm": _INT_LIST, "fertility": _DECIMAL}),
    "descent-poly": _obj({"perm": _INT_LIST, "coefficients": {"type": "array", "items": _DECIMAL},
                          "text": {"type": "string"}}),
    "cumulants": _obj({"n": {"type": "integer"}, "from": {"const": "free"}, "to": {"const": "classical"},
                       "method": {"enum": ["vhc", "qcan", "chain"]}, "polynomial": _SYMBOLIC,
                       "text": {"type": "string"}}),
    "fertility-number": _obj({
        "target": _DECIMAL,
        "status": {"enum": ["fertile", "infertile", "unknown"]},
        "witness": {"anyOf": [_BUILDING_SET, {"type": "null"}]},
        "permutation": {"anyOf": [_INT_LIST, {"type": "null"}]},
        "search_bounds": {"type": "object"},
    }),
    "infertility-table": _obj({"limit": {"type": "integer"}, "infertility_numbers": _INT_LIST}),
    "scan-conjecture": _obj({"n_max": {"type": "integer"}, "checked": {"type": "integer"},
                             "counterexamples": {"type": "array", "items": _obj({
                                 "perm": _INT_LIST, "polynomial": {"type": "array", "items": _DECIMAL},
                                 "real_rooted": {"type": "boolean"}, "log_concave": {"type": "boolean"}})}}),
    "verify": _obj({"suite": {"type": "string"}, "n": {"type": "integer"}, "passed": {"type": "boolean"},
                    "checks": {"type": "array", "items": _obj({
                        "suite": {"type": "string"}, "name": {"type": "string"},
                        "passed": {"type": "boolean"}, "detail": {"type": "string"}})}}),
}

RESULT_SCHEMA = {
    "type": "object",
    "required": ["command", "input_echo", "payload", "elapsed_ms", "schema_version"],
    "properties": {
        "command": {"enum": sorted(PAYLOAD_SCHEMAS)},
        "input_echo": {"type": "string"},
        "elapsed_ms": {"type": "integer", "minimum": 0},
        "schema_version": {"const": SCHEMA_VERSION},
    },
}

ERROR_SCHEMA = _obj({
    "error": _obj({"kind": {"enum": ["usage", "domain", "resource"]}, "message": {"type": "string"}}),
    "input_echo": {"type": "string"},
    "schema_version": {"const": SCHEMA_VERSION},
})


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _perm(args) -> tuple:
    tokens = args.perm
    if args.compact:
        if len(tokens) != 1:
            raise UsageError("--compact expects a single digit string")
        return pc.parse_permutation(tokens[0])
    entries = [t for tok in tokens for t in tok.replace(",", " ").split()]
    try:
        return pc.as_permutation(int(t) for t in entries)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot parse permutation {' '.join(tokens)!r}") from exc


def cmd_sort(args):
    return pc.format_permutation(pc.stack_sort(_perm(args)))


def cmd_preimages(args):
    p = _perm(args)
    pre = sorted(pc.preimages_bruteforce(p))
    return {"perm": list(p), "count": len(pre), "preimages": [list(x) for x in pre]}


def cmd_vhc(args):
    p = _perm(args)
    configs = vh.enumerate_vhcs(p)
    canonical = vh.canonical_hook_configuration(p)
    return {
        "perm": list(p),
        "configurations": [
            {"hooks": [[x.sw, x.ne] for x in h.hooks], "composition": list(h.composition)}
            for h in configs
        ],
        "valid_compositions": [list(q) for q in vh.valid_compositions(p)],
        "canonical": None if canonical is None else [[x.sw, x.ne] for x in canonical.hooks],
    }


def cmd_fertilitope(args):
    p = _perm(args)
    if not p or vh.canonical_hook_configuration(p) is None:
        return {"perm": list(p), "sorted": False, "building_set": None, "lattice_points": [],
                "vertices": [], "f_vector": [], "h_vector": [], "dimension": ne.EMPTY}
    b = ne.fertilitope(p)
    return {
        "perm": list(p),
        "sorted": True,
        "building_set": b.to_json(),
        "lattice_points": [list(q) for q in ne.lattice_points(b).sorted()],
        "vertices": [list(q) for q in ne.vertices(b).sorted()],
        "f_vector": list(ne.f_vector(b)),
        "h_vector": list(ne.h_vector(b)),
        "dimension": ne.dimension(b),
    }


def cmd_fertility(args):
    p = _perm(args)
    return {"perm": list(p), "fertility": str(fe.fertility(p))}


def cmd_descent_poly(args):
    p = _perm(args)
    poly = fe.descent_polynomial(p)
    return {"perm": list(p), "coefficients": poly.to_json(), "text": str(poly)}


def cmd_cumulants(args):
    method = {"vhc": cu.classical_from_free_vhc, "qcan": cu.classical_from_free_qcan,
              "chain": cu.classical_from_free_chain}[args.method]
    poly = method(args.n)
    return {"n": args.n, "from": args.source, "to": args.target, "method": args.method,
            "polynomial": poly.to_json(), "text": str(poly)}


def cmd_fertility_number(args):
    if args.f < 0:
        raise DomainError("f must be nonnegative")
    return fe.fertility_number_search(args.f).to_json()


def cmd_infertility_table(args):
    return {"limit": args.limit, "infertility_numbers": sorted(fe.infertility_table(args.limit))}


def cmd_scan_conjecture(args):
    failures = fe.conjecture_scan(args.n)
    checked = sum(1 for m in range(1, args.n + 1) for _ in fe.sorted_permutations(m))
    return {"n_max": args.n, "checked": checked, "counterexamples": failures}


def cmd_verify(args):
    results = ve.run_suite(args.suite, args.n, threads=args.threads)
    return {"suite": args.suite, "n": args.n, "passed": all(r.passed for r in results),
            "checks": [r.to_json() for r in results]}


# ---------------------------------------------------------------------------
# Parsing and rendering
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(parser, top: bool):
    default = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="print one JSON document")
    parser.add_argument("--compact", action="store_true", default=default(False),
                        help="read the permutation as a single digit string (n <= 9)")
    parser.add_argument("--threads", type=int, default=default(1), metavar="N",
                        help="cap on internal parallelism")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fertilitope", description="Stack-sorting preimages, valid hook "
                     "configurations, fertilitopes and fertility numbers.")
    _common(parser, True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def perm_command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _common(p, False)
        p.add_argument("perm", nargs="+", help="permutation entries")
        p.set_defaults(func=func)

    perm_command("sort", cmd_sort, "apply the stack-sorting map")
    perm_command("preimages", cmd_preimages, "list stack-sorting preimages by exhaustion")
    perm_command("vhc", cmd_vhc, "valid hook configurations and compositions")
    perm_command("fertilitope", cmd_fertilitope, "building set, lattice points, vertices, face numbers")
    perm_command("fertility", cmd_fertility, "number of preimages")
    perm_command("descent-poly", cmd_descent_poly, "preimage descent polynomial")

    p = sub.add_parser("cumulants", help="classical cumulants in terms of free cumulants")
    _common(p, False)
    p.add_argument("--to", dest="target", choices=["classical"], required=True)
    p.add_argument("--from", dest="source", choices=["free"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=["vhc", "qcan", "chain"], default="vhc")
    p.set_defaults(func=cmd_cumulants)

    p = sub.add_parser("fertility-number", help="decide whether f is a fertility number")
    _common(p, False)
    p.add_argument("f", type=int)
    p.set_defaults(func=cmd_fertility_number)

    p = sub.add_parser("infertility-table", help="infertility numbers up to a limit")
    _common(p, False)
    p.add_argument("--limit", type=int, required=True)
    p.set_defaults(func=cmd_infertility_table)

    p = sub.add_parser("scan-conjecture", help="real-rootedness scan of descent polynomials")
    _common(p, False)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_scan_conjecture)

    p = sub.add_parser("verify", help="run an invariant suite")
    _common(p, False)
    p.add_argument("--suite", choices=["all"] + sorted(ve.SUITES), required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def _render(command: str, payload) -> str:
    if command == "sort":
        return payload
    if command == "fertility":
        return payload["fertility"]
    if command == "descent-poly":
        return payload["text"]
    if command == "cumulants":
        return f"c_{payload['n']} = {payload['text']}"
    if command == "preimages":
        lines = [pc.format_permutation(x) for x in payload["preimages"]]
        return "\n".join([f"{payload['count']} preimages"] + lines)
    if command == "vhc":
        lines = [f"{len(payload['configurations'])} valid hook configurations"]
        for c in payload["configurations"]:
            hooks = " ".join(f"({a},{b})" for a, b in c["hooks"]) or "(none)"
            lines.append(f"{hooks}  ->  {tuple(c['composition'])}")
        return "\n".join(lines)
    if command == "fertilitope":
        if not payload["sorted"]:
            return "not sorted: the fertilitope is empty"
        b = payload["building_set"]
        sets = ", ".join(f"{{{','.join(map(str, s))}}}:{w}" for s, w in b["weights"])
        return "\n".join([
            f"building set on [{b['ground']}]: {sets}",
            f"dimension {payload['dimension']}, f-vector {tuple(payload['f_vector'])}, "
            f"h-vector {tuple(payload['h_vector'])}",
            f"lattice points: {' '.join(str(tuple(q)) for q in payload['lattice_points'])}",
            f"vertices: {' '.join(str(tuple(q)) for q in payload['vertices'])}",
        ])
    if command == "fertility-number":
        text = f"{payload['target']}: {payload['status']}"
        if payload["permutation"] is not None:
            text += f" (witness {pc.format_permutation(payload['permutation'])})"
        return text
    if command == "infertility-table":
        return " ".join(str(x) for x in payload["infertility_numbers"])
    if command == "scan-conjecture":
        found = payload["counterexamples"]
        head = f"checked {payload['checked']} sorted permutations, {len(found)} counterexamples"
        return "\n".join([head] + [json.dumps(x) for x in found])
    if command == "verify":
        lines = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['suite']}: {c['name']}"
                 + (f"  [{c['detail']}]" if c["detail"] else "") for c in payload["checks"]]
        return "\n".join(lines)
    return json.dumps(payload)


def _error(kind: str, message: str, echo: str) -> dict:
    return {"error": {"kind": kind, "message": message}, "input_echo": echo,
            "schema_version": SCHEMA_VERSION}


@dataclass
class Outcome:
    """What a command line produced: a result or an error document."""

    exit_code: int
    result: Optional[CommandResult] = None
    error: Optional[dict] = None
    as_json: bool = False


def run(argv: Sequence[str]) -> Outcome:
    """Execute a command line without printing anything."""
    argv = list(argv)
    echo = " ".join(argv)
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        start = time.perf_counter()
        payload = args.func(args)
        elapsed = int((time.perf_counter() - start) * 1000)
    except UsageError as exc:
        return Outcome(EXIT_USAGE, error=_error("usage", str(exc), echo))
    except ResourceError as exc:
        return Outcome(EXIT_RESOURCE, error=_error("resource", str(exc), echo))
    except DomainError as exc:
        return Outcome(EXIT_DOMAIN, error=_error("domain", str(exc), echo))
    result = CommandResult(args.command, echo, payload, elapsed)
    code = EXIT_OK
    if args.command == "verify" and not payload["passed"]:
        code = EXIT_FAILED
    return Outcome(code, result=result, as_json=args.json)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    outcome = run(argv)
    if outcome.error is not None:
        sys.stderr.write(json.dumps(outcome.error) + "\n")
        return outcome.exit_code
    result = outcome.result
    if outcome.as_json:
        text = json.dumps(result.to_json(), sort_keys=True)
    else:
        text = _render(result.command, result.payload)
    sys.stdout.write(text + "\n")
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
