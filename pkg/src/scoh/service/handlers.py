"""The service operations, as pure request -> response functions.

The FastAPI app routes to these; the CLI calls them in-process by
default.  Invalid input raises ValueError subclasses (ParseError,
HomValidationError, ...), which the app maps to HTTP 422 and the CLI to
exit code 2.
"""

from __future__ import annotations

from .. import classify, oracle, spgroup
from ..descriptors import ERingSp, UNKNOWN, YES
from ..groups import image_chain_cards, validate_hom
from ..parser import parse_alpha, parse_descriptor, print_descriptor
from ..reports import render_report, verdict_str
from . import models


def handle_classify(req: models.ClassifyRequest) -> models.ClassifyResponse:
    g = parse_descriptor(req.descriptor)
    canonical = print_descriptor(g)
    gv = classify.group_is_scoh(g)
    tv = classify.torsion_verdict(g)
    qv = classify.quotient_verdict(g)
    uv = classify.is_uniformly_scoh_desc(g)
    bound = classify.scoh_bound(g) if uv.answer is YES else None
    bound_str = "none" if bound is None else str(bound)

    human = [
        f"descriptor: {canonical}",
        f"group: {gv.answer}",
        f"torsion: {verdict_str(tv)}",
        f"quotient: {verdict_str(qv)}",
        f"uniform: {uv.answer}",
        f"bound: {bound_str}",
    ]
    machine = [
        ("verdict.group", str(gv.answer)),
        ("verdict.torsion", verdict_str(tv)),
        ("verdict.quotient", verdict_str(qv)),
        ("verdict.uniform", str(uv.answer)),
        ("bound", bound_str),
    ]
    if gv.answer is UNKNOWN:
        human.append(f"reason: {gv.reason}")
        machine.append(("reason", gv.reason or ""))
    rules = list(gv.rule_names())
    machine += [(f"rule.{i}", name) for i, name in enumerate(rules, start=1)]
    return models.ClassifyResponse(
        descriptor=canonical,
        group=str(gv.answer),
        torsion=verdict_str(tv),
        quotient=verdict_str(qv),
        uniform=str(uv.answer),
        bound=bound,
        reason=gv.reason,
        rules=rules,
        report=render_report(human, machine),
        exit_code=0 if gv.answer is not UNKNOWN else 3,
    )


def handle_chain(req: models.ChainRequest) -> models.ChainResponse:
    g = parse_descriptor(req.descriptor)
    G = classify.finite_group_of(g)
    if G is None:
        raise ValueError(
            "chain needs a finite group; use a torsion descriptor with tail=zero"
        )
    f = validate_hom(req.matrix, G, G)
    cards = image_chain_cards(f)
    stab = len(cards) - 2
    chain_str = ",".join(str(c) for c in cards)
    human = [
        f"group: {G}",
        f"matrix: {f}",
        f"image chain cardinalities: {chain_str}",
        f"stabilization index: {stab}",
    ]
    machine = [("group", str(G)), ("chain", chain_str), ("stab", str(stab))]
    return models.ChainResponse(
        group=str(G),
        chain=list(cards),
        stab_index=stab,
        report=render_report(human, machine),
        exit_code=0,
    )


def handle_spstab(req: models.SpStabRequest) -> models.SpStabResponse:
    g = parse_descriptor(req.descriptor)
    if not isinstance(g.shape, ERingSp):
        raise ValueError("spstab needs a spring descriptor")
    spec = g.shape.spec
    alpha = parse_alpha(spec, req.alpha)
    rep = spgroup.stab_index_mul(alpha, spec)
    per = [
        models.ComponentStep(
            index=i,
            valuation="inf" if v == float("inf") else str(int(v)),
            step=s,
        )
        for i, v, s in rep.per_prime
    ]
    human = [
        f"model: {print_descriptor(g)}",
        f"alpha: {alpha}",
        f"case: {rep.case}",
        f"index: {rep.index}",
    ]
    machine = [("index", str(rep.index)), ("case", rep.case)]
    for row in per:
        human.append(
            f"component {row.index}: valuation {row.valuation}, step {row.step}"
        )
        machine.append((f"val.{row.index}", row.valuation))
        machine.append((f"step.{row.index}", str(row.step)))
    return models.SpStabResponse(
        alpha=str(alpha),
        case=rep.case,
        index=rep.index,
        per_prime=per,
        report=render_report(human, machine),
        exit_code=0,
    )


def handle_oracle(req: models.OracleRequest) -> models.OracleResponse:
    from ..primes import is_prime

    for p in req.primes:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    cap = req.cap if req.cap is not None else oracle.DEFAULT_CAP
    groups = []
    for p in sorted(set(req.primes)):
        groups.extend(oracle.p_groups_up_to(p, req.max_card))
    report = oracle.sweep(groups, cap=cap, workers=req.workers)

    rows = []
    for r in report.results + report.violations:
        rows.append(
            models.OracleRow(
                group=str(r.group),
                count=r.endo_count,
                max_stab=r.exhaustive_max,
                bound=r.theoretical_bound,
                witness=str(r.witness),
                ok=r.ok,
            )
        )
    rows.sort(key=lambda row: (row.bound, row.group))
    failures = [f"{g}: {msg}" for g, msg in report.failures]
    ratio = str(report.max_ratio)

    primes_str = ",".join(str(p) for p in sorted(set(req.primes)))
    human = [
        f"exponent-bound sweep: primes {primes_str}, max cardinality {req.max_card}",
    ]
    machine = []
    for i, row in enumerate(rows, start=1):
        status = "ok" if row.ok else "VIOLATION"
        human.append(
            f"{row.group}: {row.count} endomorphisms, max {row.max_stab}, "
            f"bound {row.bound}, witness {row.witness} [{status}]"
        )
        machine += [
            (f"group.{i}", row.group),
            (f"count.{i}", str(row.count)),
            (f"max.{i}", str(row.max_stab)),
            (f"bound.{i}", str(row.bound)),
            (f"witness.{i}", row.witness),
        ]
    for failure in failures:
        human.append(f"failed: {failure}")
    human += [
        f"groups: {len(rows)}",
        f"violations: {len(report.violations)}",
        f"failures: {len(failures)}",
        f"max ratio: {ratio}",
    ]
    machine += [
        ("groups", str(len(rows))),
        ("violations", str(len(report.violations))),
        ("failures", str(len(failures))),
        ("max_ratio", ratio),
    ]
    return models.OracleResponse(
        rows=rows,
        failures=failures,
        violations=len(report.violations),
        max_ratio=ratio,
        report=render_report(human, machine),
        exit_code=0 if report.ok else 1,
    )


_EXAMPLE_KEY_ORDER = ("group", "torsion", "quotient", "uniform")


def handle_example(req: models.ExampleRequest) -> models.ExampleResponse:
    g = spgroup.build_example(req.id)
    expected = spgroup.EXAMPLE_EXPECTED[req.id]
    computed = {
        "group": classify.group_is_scoh(g),
        "torsion": classify.torsion_verdict(g),
        "quotient": classify.quotient_verdict(g),
        "uniform": classify.is_uniformly_scoh_desc(g),
    }
    rows = []
    for key in _EXAMPLE_KEY_ORDER:
        if key not in expected:
            continue
        want = str(expected[key])
        got = verdict_str(computed[key])
        rows.append(models.ExampleRow(key=key, expected=want, computed=got, match=want == got))
    all_match = all(r.match for r in rows)

    canonical = print_descriptor(g)
    human = [f"example {req.id}: {canonical}"]
    machine = [("example", req.id)]
    for row in rows:
        verdictwise = "match" if row.match else "MISMATCH"
        human.append(
            f"{row.key}: expected {row.expected}, computed {row.computed} [{verdictwise}]"
        )
        machine.append((f"expected.{row.key}", row.expected))
        machine.append((f"computed.{row.key}", row.computed))
    human.append("all verdicts match" if all_match else "verdict mismatch")
    machine.append(("match", "true" if all_match else "false"))
    return models.ExampleResponse(
        id=req.id,
        descriptor=canonical,
        rows=rows,
        all_match=all_match,
        report=render_report(human, machine),
        exit_code=0 if all_match else 1,
    )
