"""Verification harness: runs the lemma and theorem checks on instances.

Each instance yields up to three reports (lemma suite, derived-theorem suite,
gamma-theorem suite).  A report carries the instance parameters, the
hypothesis class bound c, the conclusion class when established, and a
per-check status map; any ``fail`` status marks the whole report failed.
Hypothesis failures (some centralizer term not nilpotent) classify the
report as hypothesis-not-met, never as a failure.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .action import (
    ASubgroupDescriptor,
    ActionSetup,
    fixed_subgroup,
    check_fg1_quotient,
    check_fg2_generation,
    invariant_sylow,
    maximal_subgroups,
    validate_setup,
)
from .errors import CoprimeLabError, PreconditionError
from .groups import Group, normal_closure
from .instances import FamilySpec, build_setup, load_instance
from .lie import (
    check_centralizer_transfer,
    check_class_transfer,
    check_span_lemma,
    induced_a_action,
    lie_ring_of,
    lie_subring_of_subgroup,
)
from .series import (
    _prime_factors,
    derived_series,
    derived_term,
    lcs_term,
    lower_central_series,
    nilpotency_class,
)
from .special import (
    a_special_lattice,
    check_aspecial_containment,
    check_aspecial_degree_bound,
    check_aspecial_generation,
    check_key_commutator_relation,
    check_sylow_generation,
    family_at,
    gamma_a_special_lattice,
)
from .status import CheckStatus

SCHEMA_VERSION = 1

# requested family depths are clamped to these (theorem hypotheses never need more)
A_SPECIAL_DEGREE_CEILING = 4
GAMMA_DEGREE_CEILING = 6


@dataclass
class CheckResult:
    status: CheckStatus
    detail: str = ""
    wall_ms: float = 0.0

    def to_dict(self) -> dict:
        return {"status": self.status.value, "detail": self.detail, "wall_ms": self.wall_ms}


@dataclass
class CheckReport:
    instance: str
    mode: str  # "lemmas" | "derived" | "gamma"
    params: dict
    hypothesis_c: int | None = None
    conclusion_class: int | None = None
    checks: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(c.status is CheckStatus.FAIL for c in self.checks.values())

    @property
    def hypothesis_met(self) -> bool:
        return not any(c.status is CheckStatus.HYPOTHESIS_NOT_MET for c in self.checks.values())

    @property
    def status(self) -> str:
        if self.failed:
            return "fail"
        if not self.hypothesis_met:
            return "hypothesis-not-met"
        return "pass"

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "instance": self.instance,
            "mode": self.mode,
            "params": self.params,
            "hypothesis_c": self.hypothesis_c,
            "conclusion_class": self.conclusion_class,
            "status": self.status,
            "checks": {name: c.to_dict() for name, c in sorted(self.checks.items())},
        }


class _Recorder:
    """Runs one named check, timing it and capturing errors as failures."""

    def __init__(self, report: CheckReport):
        self.report = report

    def run(self, name: str, thunk) -> CheckResult:
        start = time.perf_counter()
        try:
            value = thunk()
        except PreconditionError as exc:
            result = CheckResult(CheckStatus.NOT_APPLICABLE, detail=str(exc))
        except CoprimeLabError as exc:
            result = CheckResult(CheckStatus.FAIL, detail=f"{type(exc).__name__}: {exc}")
        else:
            result = _coerce(value)
        result.wall_ms = round((time.perf_counter() - start) * 1000.0, 3)
        self.report.checks[name] = result
        return result

    def record(self, name: str, status: CheckStatus, detail: str = "") -> CheckResult:
        result = CheckResult(status, detail=detail)
        self.report.checks[name] = result
        return result


def _coerce(value) -> CheckResult:
    if isinstance(value, CheckResult):
        return value
    if isinstance(value, CheckStatus):
        return CheckResult(value)
    if isinstance(value, bool):
        return CheckResult(CheckStatus.PASS if value else CheckStatus.FAIL)
    if hasattr(value, "status") and hasattr(value, "detail"):
        return CheckResult(value.status, detail=value.detail)
    raise TypeError(f"cannot interpret check result {value!r}")


class InstanceContext:
    """Shared, lazily computed per-instance objects used by several reports."""

    def __init__(self, setup: ActionSetup, instance_id: str, seed: int = 0, max_degree: int | None = None):
        self.setup = setup
        self.instance_id = instance_id
        self.seed = seed
        self.max_degree = max_degree
        self._cache: dict = {}

    def _get(self, key, thunk):
        if key not in self._cache:
            self._cache[key] = thunk()
        return self._cache[key]

    @property
    def nilpotent(self) -> bool:
        return self._get("nilpotent", lambda: nilpotency_class(self.setup.G) is not None)

    @property
    def lie_ring(self):
        return self._get("lie_ring", lambda: lie_ring_of(self.setup.G, seed=self.seed))

    @property
    def lie_action(self):
        return self._get("lie_action", lambda: induced_a_action(self.lie_ring, self.setup))

    def a_families(self, max_degree: int):
        return self._get(("a_families", max_degree), lambda: a_special_lattice(self.setup, max_degree))

    def gamma_families(self, max_degree: int):
        return self._get(
            ("gamma_families", max_degree), lambda: gamma_a_special_lattice(self.setup, max_degree)
        )

    def centralizer(self, vector) -> Group:
        B = ASubgroupDescriptor.generated_by(self.setup.p, self.setup.k, vector)
        return fixed_subgroup(self.setup, B)

    def base_params(self) -> dict:
        return {"p": self.setup.p, "k": self.setup.k, "order": self.setup.G.order}


# ----------------------------------------------------------- subgroup search


def find_invariant_normal_subgroups(setup: ActionSetup, seed: int = 0, limit: int = 10) -> list[Group]:
    """A-invariant normal subgroups: series terms plus seeded normal closures."""
    G = setup.G
    candidates: list[Group] = [Group.trivial(G.degree, cap=G.cap), G]
    candidates.extend(lower_central_series(G).terms)
    candidates.extend(derived_series(G).terms)
    rng = random.Random(seed)
    elements = G.sorted_elements()
    for _ in range(4):
        x = rng.choice(elements)
        orbit = setup.orbit_of_element(x)
        candidates.append(normal_closure(orbit, G))
    out: list[Group] = []
    seen: set[frozenset] = set()
    for N in candidates:
        key = N.elements()
        if key in seen:
            continue
        seen.add(key)
        out.append(N)
        if len(out) >= limit:
            break
    return out


def random_invariant_subgroups(setup: ActionSetup, seed: int = 0, count: int = 5) -> list[Group]:
    """Subgroups generated by A-orbits of random elements (hence A-invariant)."""
    rng = random.Random(seed)
    elements = setup.G.sorted_elements()
    out = []
    for _ in range(count):
        gens: set = set()
        for _ in range(rng.randint(1, 2)):
            gens |= setup.orbit_of_element(rng.choice(elements))
        out.append(Group(setup.G.degree, sorted(gens), cap=setup.G.cap))
    return out


# ------------------------------------------------------------- lemma report


def lemma_report(ctx: InstanceContext) -> CheckReport:
    setup = ctx.setup
    report = CheckReport(instance=ctx.instance_id, mode="lemmas", params=ctx.base_params())
    rec = _Recorder(report)

    rec.run("setup-valid", lambda: validate_setup(setup).ok)

    maximals = maximal_subgroups(setup)
    full = ASubgroupDescriptor.full(setup.p, setup.k)

    def fg1():
        subgroups_of_a = maximals + [full]
        for N in find_invariant_normal_subgroups(setup, seed=ctx.seed):
            for B in subgroups_of_a:
                if not check_fg1_quotient(setup, N, B):
                    return False
        return True

    rec.run("fg1-quotient", fg1)

    def fg2():
        if not check_fg2_generation(setup, setup.G):
            return False
        for H in random_invariant_subgroups(setup, seed=ctx.seed):
            if not check_fg2_generation(setup, H):
                return False
        return True

    rec.run("fg2-generation", fg2)

    def sylow_invariance():
        primes = _prime_factors(setup.G.order)
        for r in primes:
            R = invariant_sylow(setup, setup.G, r)
            if not setup.is_invariant_subgroup(R):
                return False
        return True

    rec.run("invariant-sylow", sylow_invariance)

    if ctx.nilpotent:
        rec.run("lie-axioms", lambda: ctx.lie_ring is not None)  # construction verifies
        rec.run("class-transfer", lambda: check_class_transfer(ctx.lie_ring, setup.G))

        def transfer():
            for B in maximals + [full]:
                if not check_centralizer_transfer(ctx.lie_ring, setup, B, action=ctx.lie_action):
                    return False
            return True

        rec.run("centralizer-transfer", transfer)

        def span(mode):
            families = ctx.a_families(0) if mode == "pairwise" else ctx.gamma_families(1)
            members = family_at(families, 0 if mode == "pairwise" else 1).members
            subspaces = [
                lie_subring_of_subgroup(ctx.lie_ring, setup.G, H) for H in members
            ]
            return check_span_lemma(ctx.lie_ring, setup, subspaces, mode, action=ctx.lie_action)

        rec.run("span-lemma-pairwise", lambda: span("pairwise"))
        rec.run("span-lemma-gamma", lambda: span("gamma"))
    else:
        for name in (
            "lie-axioms",
            "class-transfer",
            "centralizer-transfer",
            "span-lemma-pairwise",
            "span-lemma-gamma",
        ):
            rec.record(name, CheckStatus.NOT_APPLICABLE, "G is not nilpotent")
    return report


# ------------------------------------------------------------ theorem suites


def _centralizer_hypothesis(ctx: InstanceContext, term) -> tuple[int | None, str]:
    """Max class of term(C_G(a)) over a in A^#, or None when not all nilpotent."""
    worst = 0
    for a in ctx.setup.nonzero_vectors():
        C = ctx.centralizer(a)
        T = term(C)
        cls = nilpotency_class(T)
        if cls is None:
            return None, f"centralizer term at a={a} is not nilpotent"
        worst = max(worst, cls)
    return max(worst, 1), ""


def verify_derived_theorem(
    setup: ActionSetup, d: int, instance_id: str = "", ctx: InstanceContext | None = None
) -> CheckReport:
    """Hypothesis: C_G(a)^(d) nilpotent of class <= c for all a in A^#.

    Conclusion: G^(d) nilpotent; the report records its class and runs the
    special-family, Sylow-generation, and iterated-commutator sub-checks.
    """
    if setup.k < 3:
        raise PreconditionError("the derived theorem needs k >= 3")
    if 2**d + 2 > setup.k:
        raise PreconditionError(f"hypothesis 2^d + 2 <= k fails for d = {d}, k = {setup.k}")
    ctx = ctx or InstanceContext(setup, instance_id)
    report = CheckReport(
        instance=ctx.instance_id,
        mode="derived",
        params={**ctx.base_params(), "d": d},
    )
    rec = _Recorder(report)

    c, why = _centralizer_hypothesis(ctx, lambda C: derived_term(C, d))
    if c is None:
        rec.record("hypothesis-centralizers", CheckStatus.HYPOTHESIS_NOT_MET, why)
        return report
    report.hypothesis_c = c
    rec.record("hypothesis-centralizers", CheckStatus.PASS, f"c = {c}")

    Gd = derived_term(setup.G, d)
    cls = nilpotency_class(Gd)
    if cls is None:
        rec.record("conclusion-nilpotent", CheckStatus.FAIL, "G^(d) is not nilpotent")
        return report
    report.conclusion_class = cls
    rec.record("conclusion-nilpotent", CheckStatus.PASS, f"class {cls}")

    degree_needed = max(d, 1, min(ctx.max_degree or 0, A_SPECIAL_DEGREE_CEILING))
    families = ctx.a_families(degree_needed)
    report.params["family-members"] = family_at(families, d).member_count()

    rec.run("aspecial-containment", lambda: check_aspecial_containment(families))
    rec.run("aspecial-generation", lambda: check_aspecial_generation(setup, families))
    rec.run("aspecial-degree-bound", lambda: check_aspecial_degree_bound(setup, families))

    def sylow():
        if Gd.is_trivial:
            return True
        for r in _prime_factors(Gd.order):
            if not check_sylow_generation(setup, d, r, families=families):
                return False
        return True

    rec.run("sylow-generation", sylow)
    rec.run(
        "key-commutator-relation",
        lambda: check_key_commutator_relation(setup, families, c, "derived", d=d),
    )
    return report


def verify_gamma_theorem(
    setup: ActionSetup, instance_id: str = "", ctx: InstanceContext | None = None
) -> CheckReport:
    """Hypothesis: gamma_{k-2}(C_G(a)) nilpotent of class <= c for all a in A^#.

    Conclusion: gamma_{k-2}(G) nilpotent; runs the gamma-family sub-checks
    and the iterated-commutator relation.
    """
    if setup.k < 3:
        raise PreconditionError("the gamma theorem needs k >= 3")
    ctx = ctx or InstanceContext(setup, instance_id)
    depth = setup.k - 2
    report = CheckReport(
        instance=ctx.instance_id,
        mode="gamma",
        params={**ctx.base_params(), "gamma-degree": depth},
    )
    rec = _Recorder(report)

    c, why = _centralizer_hypothesis(ctx, lambda C: lcs_term(C, depth))
    if c is None:
        rec.record("hypothesis-centralizers", CheckStatus.HYPOTHESIS_NOT_MET, why)
        return report
    report.hypothesis_c = c
    rec.record("hypothesis-centralizers", CheckStatus.PASS, f"c = {c}")

    target = lcs_term(setup.G, depth)
    cls = nilpotency_class(target)
    if cls is None:
        rec.record("conclusion-nilpotent", CheckStatus.FAIL, "gamma_{k-2}(G) is not nilpotent")
        return report
    report.conclusion_class = cls
    rec.record("conclusion-nilpotent", CheckStatus.PASS, f"class {cls}")

    families = ctx.gamma_families(max(depth, 1, min(ctx.max_degree or 0, GAMMA_DEGREE_CEILING)))
    report.params["family-members"] = family_at(families, depth).member_count()

    def degree1_matches():
        gamma_deg1 = {m.element_key() for m in family_at(families, 1).members}
        a_deg0 = {m.element_key() for m in family_at(ctx.a_families(0), 0).members}
        return gamma_deg1 == a_deg0

    rec.run("gamma-degree1-matches-aspecial0", degree1_matches)
    rec.run("gamma-containment", lambda: check_aspecial_containment(families))
    rec.run("gamma-generation", lambda: check_aspecial_generation(setup, families))
    rec.run("gamma-degree-bound", lambda: check_aspecial_degree_bound(setup, families))
    rec.run(
        "key-commutator-relation",
        lambda: check_key_commutator_relation(setup, families, c, "gamma"),
    )
    return report


# ---------------------------------------------------------------- the suite


@dataclass
class SuiteOptions:
    mode: str = "both"  # "derived" | "gamma" | "both"
    d: int | None = None
    max_degree: int | None = None
    seed: int = 0
    cap: int | None = None
    jobs: int = 1


@dataclass
class SuiteResult:
    reports: list[CheckReport]

    @property
    def exit_code(self) -> int:
        return 1 if any(r.failed for r in self.reports) else 0

    def summary_rows(self) -> list[dict]:
        rows = []
        for r in self.reports:
            rows.append(
                {
                    "instance": r.instance,
                    "mode": r.mode,
                    "p": r.params.get("p", ""),
                    "k": r.params.get("k", ""),
                    "order": r.params.get("order", ""),
                    "degree": r.params.get("d", r.params.get("gamma-degree", "")),
                    "c": "" if r.hypothesis_c is None else r.hypothesis_c,
                    "conclusion_class": "" if r.conclusion_class is None else r.conclusion_class,
                    "status": r.status,
                }
            )
        return rows


SUMMARY_FIELDS = [
    "instance",
    "mode",
    "p",
    "k",
    "order",
    "degree",
    "c",
    "conclusion_class",
    "status",
]


def run_instance(
    instance_id: str, setup: ActionSetup, options: SuiteOptions
) -> list[CheckReport]:
    """All reports for one instance: lemmas plus the applicable theorem suites."""
    ctx = InstanceContext(setup, instance_id, seed=options.seed, max_degree=options.max_degree)
    reports = [lemma_report(ctx)]
    if setup.k >= 3 and options.mode in ("derived", "both"):
        d = options.d if options.d is not None else 0
        if 2**d + 2 <= setup.k:
            reports.append(verify_derived_theorem(setup, d, ctx=ctx))
    if setup.k >= 3 and options.mode in ("gamma", "both"):
        reports.append(verify_gamma_theorem(setup, ctx=ctx))
    return reports


def _run_payload(payload: dict) -> list[dict]:
    options = SuiteOptions(**payload["options"])
    if payload["kind"] == "spec":
        spec = FamilySpec.from_dict(payload["spec"])
        setup = build_setup(spec, cap=options.cap)
    else:
        setup = load_instance(payload["path"], cap=options.cap)
    reports = run_instance(payload["instance_id"], setup, options)
    return [r.to_dict() for r in reports]


def _report_from_dict(data: dict) -> CheckReport:
    report = CheckReport(
        instance=data["instance"],
        mode=data["mode"],
        params=data["params"],
        hypothesis_c=data["hypothesis_c"],
        conclusion_class=data["conclusion_class"],
    )
    for name, c in data["checks"].items():
        report.checks[name] = CheckResult(
            CheckStatus(c["status"]), detail=c.get("detail", ""), wall_ms=c.get("wall_ms", 0.0)
        )
    return report


def run_suite(entries: list[tuple[str, object]], options: SuiteOptions | None = None) -> SuiteResult:
    """Run every instance; per-instance errors become failed reports, never aborts.

    ``entries`` pairs an instance id with either a FamilySpec or a file path.
    """
    options = options or SuiteOptions()
    payloads = []
    for instance_id, source in entries:
        if isinstance(source, FamilySpec):
            payloads.append(
                {
                    "kind": "spec",
                    "instance_id": instance_id,
                    "spec": source.to_dict(),
                    "options": options.__dict__,
                }
            )
        else:
            payloads.append(
                {
                    "kind": "file",
                    "instance_id": instance_id,
                    "path": str(source),
                    "options": options.__dict__,
                }
            )
    reports: list[CheckReport] = []
    if options.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            for result in pool.map(_run_payload_safe, payloads):
                reports.extend(_report_from_dict(d) for d in result)
    else:
        for payload in payloads:
            reports.extend(_report_from_dict(d) for d in _run_payload_safe(payload))
    reports.sort(key=lambda r: (r.instance, r.mode))
    return SuiteResult(reports=reports)


def _run_payload_safe(payload: dict) -> list[dict]:
    try:
        return _run_payload(payload)
    except Exception as exc:  # captured per spec: errors never abort the suite
        report = CheckReport(
            instance=payload["instance_id"], mode="error", params={}
        )
        report.checks["instance-run"] = CheckResult(
            CheckStatus.FAIL, detail=f"{type(exc).__name__}: {exc}"
        )
        return [report.to_dict()]


# ------------------------------------------------------------------ output


def summary_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def aggregate_rows(rows: list[dict]) -> list[dict]:
    """Max conclusion class observed per (mode, c, k, p) cell."""
    cells: dict[tuple, dict] = {}
    for row in rows:
        if row["mode"] not in ("derived", "gamma") or row["c"] == "":
            continue
        key = (row["mode"], row["c"], row["k"], row["p"])
        cell = cells.setdefault(
            key,
            {
                "mode": row["mode"],
                "c": row["c"],
                "k": row["k"],
                "p": row["p"],
                "max_conclusion_class": 0,
                "instances": 0,
            },
        )
        cell["instances"] += 1
        if row["conclusion_class"] != "":
            cell["max_conclusion_class"] = max(
                cell["max_conclusion_class"], int(row["conclusion_class"])
            )
    return [cells[k] for k in sorted(cells, key=lambda t: tuple(str(x) for x in t))]


def aggregate_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    fields = ["mode", "c", "k", "p", "max_conclusion_class", "instances"]
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in aggregate_rows(rows):
        writer.writerow(row)
    return buf.getvalue()


def report_json(report: CheckReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
