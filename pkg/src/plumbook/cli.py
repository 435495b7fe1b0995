"""Thin command-line client for the verification service.

Every subcommand is a single request to the service API; by default the
service runs in-process (no network), and --server points the same
client at a remote instance.  Exit codes: 0 success, 1 the graph fails
the acceptance hypotheses, 2 a numeric or homology check failed, 3 input
or usage error.
"""

import argparse
import asyncio
import json
import os
import sys

import httpx

EXIT_OK = 0
EXIT_HYPOTHESIS = 1
EXIT_CHECK_FAILED = 2
EXIT_INPUT = 3

_STATUS_CODES = {"ok": EXIT_OK,
                 "hypothesis_rejected": EXIT_HYPOTHESIS,
                 "check_failed": EXIT_CHECK_FAILED}


def _call(server, method, path, payload=None):
    async def go():
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=300.0) as client:
                return await client.request(method, path, json=payload)
        from .service import app
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://plumbook.internal",
                                     timeout=300.0) as client:
            return await client.request(method, path, json=payload)
    return asyncio.run(go())


def _read_json(path, what):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as exc:
        _die("cannot read %s file %r: %s" % (what, path, exc))
    except json.JSONDecodeError as exc:
        _die("%s file %r is not valid JSON: %s" % (what, path, exc))


def _die(message):
    print("error: %s" % message, file=sys.stderr)
    sys.exit(EXIT_INPUT)


def _finish(response, args, render_text):
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        _die(detail)
    body = response.json()
    if args.format == "json":
        print(json.dumps(body, indent=2, sort_keys=True))
    else:
        render_text(body)
    sys.exit(_STATUS_CODES.get(body.get("status", "ok"), EXIT_OK))


def _default_seed():
    try:
        return int(os.environ.get("PLUMBOOK_SEED", "0"))
    except ValueError:
        return 0


# ---- text renderers ---------------------------------------------------------

def _render_validate(body):
    report = body["report"]
    print("graph: %s" % ", ".join(report["ids"]))
    print("loops_ok: %s" % report["loops_ok"])
    print("degree_ok: %s%s" % (report["degree_ok"],
                               "" if not report["failing_vertices"]
                               else "  (failing: %s)" % report["failing_vertices"]))
    print("strict_vertex_exists: %s" % report["strict_vertex_exists"])
    print("negative_definite: %s" % report["negative_definite"])
    print("leading_minors: %s" % report["minor_signs"])
    if report["positive_solution_witness"] is not None:
        print("positive solution of -Q a = 1: (%s)"
              % ", ".join(report["positive_solution_witness"]))
    if body.get("lemma_conditions"):
        c = body["lemma_conditions"]
        print("equivalent conditions: (1)=%s (2)=%s (3)=%s (4)=%s"
              % (c["positive_solve_all_b"], c["positive_solve_some_b"],
                 c["strict_vertex"], c["negative_definite"]))
    print("accepted: %s" % report["accepted"])


def _render_compile(body):
    if body.get("openbook") is None:
        print("graph rejected; re-run with --force to compile anyway")
        return
    doc = body["openbook"]
    print("page: genus %d, %d boundary component(s)"
          % (doc["page"]["genus"], doc["page"]["boundary"]))
    print("vanishing cycles (k = %d):" % len(doc["monodromy"]))
    for curve in doc["curves"]:
        print("  %s  [%s] %s" % (curve["id"], curve["kind"],
                                 json.dumps(curve["location"], sort_keys=True)))
    print("monodromy: one right twist along each curve, in the order above")
    if body.get("hypothesis_violation"):
        print("WARNING: hypotheses violated; open book support is not claimed")


def _render_areas(body):
    if body.get("assignment") is None:
        print("graph rejected: %s" % body.get("detail", ""))
        return
    a = body["assignment"]
    print("prescribed areas / pi: (%s)" % ", ".join(a["B_over_pi"]))
    print("bundle constants A_v:  (%s)" % ", ".join(a["A"]))
    print("shared delta: %s  (admissible bound: %s)"
          % (a["delta"], a["delta_bound"]))


def _render_reports(body):
    for r in body["reports"]:
        order = "" if r["order"] is None else "  order=%.3f" % r["order"]
        print("%-34s %s  residual=%s  tol=%s%s  (n=%d)"
              % (r["name"], "PASS" if r["passed"] else "FAIL",
                 r["max_residual"], r["tolerance"], order, r["samples"]))
    print("overall: %s" % body["status"])


def _render_homology(body):
    print("equal on H1: %s  (%s)" % (body["equal"], body["caveat"]))
    print("action of word 1: %s" % body["action1"])
    print("action of word 2: %s" % body["action2"])


def _render_substitute(body):
    r = body["report"]
    print("page: genus %d, %d boundary component(s)"
          % (r["page"]["genus"], r["page"]["boundary"]))
    print("twist words: |tau| = %d  ->  |tau'| = %d"
          % (r["twists_removed"], r["twists_added"]))
    print("chi(Z) = %d, chi(Z') = %d, delta chi = %d"
          % (r["chi_Z"], r["chi_Z_prime"], r["delta_chi"]))
    print("homology check: %s  (%s)"
          % (r["homology_equal"], r["homology_caveat"]))
    print("sigma of the plumbing side: %d" % r["sigma_plumbing"])


def _render_invariants(body):
    bh = body["boundary_homology"]
    print("H1(boundary): torsion %s, free rank %d"
          % (bh["torsion"] or "none", bh["free_rank"]))
    print("invariant factors of Q: %s" % bh["invariant_factors"])
    e = body["euler"]
    print("chi(page) = %d, twists k = %d, chi(plumbing) = %d, identity: %s"
          % (e["chi_fiber"], e["twist_count"], e["chi_plumbing"],
             e["identity_holds"]))
    print("sigma of the plumbing: %d" % body["sigma_plumbing"])


# ---- subcommands -------------------------------------------------------------

def _cmd_validate(args):
    doc = _read_json(args.graph, "graph")
    response = _call(args.server, "POST", "/validate", {"graph": doc})
    _finish(response, args, _render_validate)


def _cmd_compile(args):
    doc = _read_json(args.graph, "graph")
    response = _call(args.server, "POST", "/compile",
                     {"graph": doc, "force": args.force})
    if response.status_code < 400 and args.output:
        body = response.json()
        if body.get("openbook") is not None:
            with open(args.output, "w") as f:
                json.dump(body["openbook"], f, indent=2, sort_keys=True)
                f.write("\n")
    _finish(response, args, _render_compile)


def _cmd_areas(args):
    doc = _read_json(args.graph, "graph")
    payload = {"graph": doc}
    if args.b_over_pi:
        payload["b_over_pi"] = [x.strip() for x in args.b_over_pi.split(",")]
    response = _call(args.server, "POST", "/areas", payload)
    _finish(response, args, _render_areas)


def _cmd_verify_models(args):
    constants = _read_json(args.constants, "constants")
    payload = {
        "constants": constants,
        "checks": [c.strip() for c in args.checks.split(",")],
        "samples": args.samples,
        "h": args.step,
        "tolerance": args.tolerance,
        "seed": args.seed,
    }
    response = _call(args.server, "POST", "/verify-models", payload)
    _finish(response, args, _render_reports)


def _cmd_homology_check(args):
    openbook = _read_json(args.openbook, "open book")
    word1 = _read_json(args.word1, "word")
    word2 = _read_json(args.word2, "word")
    response = _call(args.server, "POST", "/homology-check",
                     {"openbook": openbook, "word1": word1, "word2": word2})
    _finish(response, args, _render_homology)


def _cmd_substitute(args):
    doc = _read_json(args.graph, "graph")
    payload = {"graph": doc}
    if args.relation_name:
        payload["relation_name"] = args.relation_name
    if args.relation_file:
        payload["relation"] = _read_json(args.relation_file, "relation")
    response = _call(args.server, "POST", "/substitute", payload)
    _finish(response, args, _render_substitute)


def _cmd_invariants(args):
    doc = _read_json(args.graph, "graph")
    response = _call(args.server, "POST", "/invariants", {"graph": doc})
    _finish(response, args, _render_invariants)


def _cmd_serve(args):
    import uvicorn
    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plumbook",
        description="Compile plumbing graphs into open book / Lefschetz "
                    "data and certify the symplectic local models.")
    parser.add_argument("--server", default=os.environ.get("PLUMBOOK_SERVER"),
                        help="base URL of a running service; default runs "
                             "the service in-process")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the acceptance hypotheses")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("compile", help="emit the open book / Lefschetz data")
    p.add_argument("graph")
    p.add_argument("-o", "--output", help="also write the interchange file")
    p.add_argument("--force", action="store_true",
                   help="compile even when the hypotheses fail")
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("areas", help="solve the exact area system")
    p.add_argument("graph")
    p.add_argument("--b-over-pi", default=None,
                   help="comma-separated prescribed areas divided by pi "
                        "(rationals like 3/2); default all 1")
    p.set_defaults(func=_cmd_areas)

    p = sub.add_parser("verify-models", help="run the local-model checks")
    p.add_argument("constants", help="JSON with A, Ai, ni, delta, m, genus")
    p.add_argument("--checks", default="all",
                   help="comma list of liouville,gluing,intertwine,fibration")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--step", type=float, default=1e-4,
                   help="finite-difference step h")
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.set_defaults(func=_cmd_verify_models)

    p = sub.add_parser("homology-check",
                       help="compare two twist words on H1 of the page")
    p.add_argument("openbook", help="interchange file from `compile`")
    p.add_argument("--word1", required=True, help="JSON word file")
    p.add_argument("--word2", required=True, help="JSON word file")
    p.set_defaults(func=_cmd_homology_check)

    p = sub.add_parser("substitute", help="cut-and-paste report for a relation")
    p.add_argument("graph")
    p.add_argument("--relation-name", help="a shipped relation, by name")
    p.add_argument("--relation-file", help="a user relation JSON file")
    p.set_defaults(func=_cmd_substitute)

    p = sub.add_parser("invariants", help="boundary homology and chi ledger")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "substitute":
        if bool(args.relation_name) == bool(args.relation_file):
            _die("give exactly one of --relation-name / --relation-file")
    args.func(args)


if __name__ == "__main__":
    main()
