"""Subsampling benchmark comparing adjustment-set choices.

For each network a large reference sample gives reference interventional
distributions; random subsamples give estimates, and the gap is measured by
the cosine distance averaged over treatment categories. Three adjustment
choices are compared: the minimum-MI minimal back-door set (``cavs``), the
smallest subset of the treatment's parents that satisfies the back-door
criterion (``minimal_parents``), and all parents (``parents``).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field, replace
from itertools import combinations

import numpy as np

from .backdoor import DEFAULT_MAX_POOL, enumerate_minimal_backdoor_sets, satisfies_backdoor
from .errors import CavsError, LimitError, UndefinedSimilarityError, ValidationError
from .graph import MixedGraph, require_dag
from .intervention import InterventionResult, do_effect
from .network import CptNetwork, derive_seed, forward_sample, random_cpts, random_dag
from .selection import select_adjustment

SCHEMA_VERSION = 1
METHODS = ("cavs", "minimal_parents", "parents")
CSV_COLUMNS = ("method", "graph_seed", "cpt_seed", "subsample_seed", "error", "schema_version")


def cosine_error(reference: InterventionResult, estimate: InterventionResult) -> float:
    """Mean over treatment categories of 1 - cos(reference, estimate)."""
    if (
        reference.x_categories != estimate.x_categories
        or reference.y_categories != estimate.y_categories
    ):
        raise ValidationError("results are over different treatment or outcome alphabets")
    errs = []
    for j, (a, b) in enumerate(zip(reference.per_x, estimate.per_x)):
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        if na == 0 or nb == 0:
            raise UndefinedSimilarityError(
                f"zero distribution at {reference.x_variable}={reference.x_categories[j]}"
            )
        if np.array_equal(a, b):
            errs.append(0.0)
        else:
            errs.append(min(max(1.0 - float(a @ b) / (na * nb), 0.0), 1.0))
    return float(np.mean(errs))


def baseline_minimal_parents(g: MixedGraph, x: str, y: str) -> tuple[str, ...]:
    """Smallest subset of pa(x) satisfying the back-door criterion."""
    require_dag(g, "baseline_minimal_parents")
    xi = g.index(x)
    parents = g.pa(xi)
    for k in range(len(parents) + 1):
        for combo in combinations(parents, k):
            if satisfies_backdoor(g, xi, y, combo):
                return g.names_of(combo)
    raise ValidationError(f"no back-door set exists: {g.names[g.index(y)]} is a parent of {x}")


def baseline_parents(g: MixedGraph, x: str) -> tuple[str, ...]:
    return g.names_of(g.pa(g.index(x)))


def choose_pair(g: MixedGraph, seed: int, max_pool: int = DEFAULT_MAX_POOL) -> tuple[str, str]:
    """Pick a treatment/outcome pair for a random DAG.

    The outcome is a child of the treatment. Preference goes to treatments
    with at least two parents and pairs with several minimal back-door sets,
    so that the compared methods can actually differ; the pick among the
    best tier is random under ``seed``.
    """
    tiers = [[], [], [], []]
    for x, y in sorted(g.directed):
        n_pa = len(g.pa(x))
        try:
            n_sets = len(enumerate_minimal_backdoor_sets(g, x, y, max_pool=max_pool))
        except LimitError:
            continue
        if n_pa >= 2 and n_sets >= 2:
            tiers[0].append((x, y))
        elif n_pa >= 1 and n_sets >= 2:
            tiers[1].append((x, y))
        elif n_pa >= 1:
            tiers[2].append((x, y))
        else:
            tiers[3].append((x, y))
    for tier in tiers:
        if tier:
            rng = np.random.default_rng(seed)
            x, y = tier[int(rng.integers(len(tier)))]
            return g.names[x], g.names[y]
    raise ValidationError("graph has no edge to use as a treatment/outcome pair")


@dataclass(frozen=True)
class ExperimentConfig:
    """Benchmark settings.

    Either ``network`` is given (a fixed network; ``x`` and ``y`` required) or
    random networks are drawn: ``n_graphs`` structures times ``n_cpts`` CPT
    draws. ``mi_source`` selects the data used to score candidates:
    ``"reference"`` or ``"subsample"``.
    """

    seed: int
    x: str | None = None
    y: str | None = None
    n_nodes: int = 30
    n_edges: int = 40
    cardinality: int = 4
    n_graphs: int = 4
    n_cpts: int = 3
    reference_n: int = 10_000
    subsample_n: int = 500
    k_subsamples: int = 5
    methods: tuple[str, ...] = METHODS
    mi_source: str = "reference"
    cpt_mode: str = "uniform"
    max_pool: int = DEFAULT_MAX_POOL
    network_file: str | None = None

    def validate(self):
        if self.subsample_n < 1 or self.reference_n < 1:
            raise ValidationError("sample sizes must be positive")
        if self.subsample_n > self.reference_n:
            raise ValidationError("subsample_n cannot exceed reference_n")
        if self.k_subsamples < 1:
            raise ValidationError("k_subsamples must be at least 1")
        if not self.methods or set(self.methods) - set(METHODS):
            raise ValidationError(f"methods must be a non-empty subset of {METHODS}")
        if self.mi_source not in ("reference", "subsample"):
            raise ValidationError("mi_source must be 'reference' or 'subsample'")
        if self.n_graphs < 1 or self.n_cpts < 1:
            raise ValidationError("n_graphs and n_cpts must be at least 1")
        if (self.x is None) != (self.y is None):
            raise ValidationError("give both x and y or neither")

    def to_dict(self):
        out = asdict(self)
        out["methods"] = list(self.methods)
        return out


@dataclass
class ErrorReport:
    config: dict
    rows: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    networks: list[dict] = field(default_factory=list)

    def errors(self, method: str) -> np.ndarray:
        return np.array([r["error"] for r in self.rows if r["method"] == method])

    def summary(self) -> dict:
        out = {}
        for m in self.config["methods"]:
            e = self.errors(m)
            if e.size == 0:
                out[m] = {"n": 0}
                continue
            q1, med, q3 = np.percentile(e, [25, 50, 75])
            out[m] = {
                "n": int(e.size),
                "mean": float(e.mean()),
                "min": float(e.min()),
                "q1": float(q1),
                "median": float(med),
                "q3": float(q3),
                "max": float(e.max()),
            }
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([
                r["method"],
                "" if r["graph_seed"] is None else r["graph_seed"],
                "" if r["cpt_seed"] is None else r["cpt_seed"],
                r["subsample_seed"],
                repr(r["error"]),
                SCHEMA_VERSION,
            ])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "summary": self.summary(),
            "networks": self.networks,
            "failures": self.failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def table(self) -> str:
        lines = [f"{'method':<16}{'n':>5}{'mean':>12}{'median':>12}{'max':>12}"]
        for m, s in self.summary().items():
            if not s["n"]:
                lines.append(f"{m:<16}{0:>5}")
                continue
            lines.append(f"{m:<16}{s['n']:>5}{s['mean']:>12.5f}{s['median']:>12.5f}{s['max']:>12.5f}")
        return "\n".join(lines) + "\n"


def _adjustment_sets(cfg, g, x, y, data):
    sets, scores, failures = {}, {}, {}
    for m in cfg.methods:
        try:
            if m == "cavs":
                rep = select_adjustment(g, x, y, data, max_pool=cfg.max_pool)
                sets[m] = rep.chosen.members
                scores[m] = rep.chosen.mi_score
            elif m == "minimal_parents":
                sets[m] = baseline_minimal_parents(g, x, y)
            else:
                sets[m] = baseline_parents(g, x)
        except CavsError as exc:
            failures[m] = str(exc)
    return sets, scores, failures


def _run_network(cfg, report, net: CptNetwork, x, y, graph_seed, cpt_seed, tag):
    g = net.graph
    ref_seed = derive_seed(cfg.seed, "reference", *tag)
    ref = forward_sample(net, cfg.reference_n, ref_seed)
    sets, scores, failed = _adjustment_sets(cfg, g, x, y, ref)
    reference = {}
    for m, z in sets.items():
        try:
            reference[m] = do_effect(ref, x, y, z)
        except CavsError as exc:
            failed[m] = str(exc)
    report.networks.append({
        "graph_seed": graph_seed,
        "cpt_seed": cpt_seed,
        "reference_seed": ref_seed,
        "x": x,
        "y": y,
        "adjustment": {m: list(z) for m, z in sets.items()},
        "cavs_mi": scores.get("cavs"),
    })
    base = {"graph_seed": graph_seed, "cpt_seed": cpt_seed}
    for m, msg in failed.items():
        report.failures.append({**base, "method": m, "subsample_seed": None, "message": msg})

    for k in range(cfg.k_subsamples):
        sub_seed = derive_seed(cfg.seed, "subsample", *tag, k)
        rows = np.random.default_rng(sub_seed).choice(cfg.reference_n, cfg.subsample_n, replace=False)
        sub = ref.take(np.sort(rows))
        for m in cfg.methods:
            if m not in reference:
                continue
            entry = {**base, "method": m, "subsample_seed": sub_seed}
            try:
                z = sets[m]
                if m == "cavs" and cfg.mi_source == "subsample":
                    z = select_adjustment(g, x, y, sub, max_pool=cfg.max_pool).chosen.members
                    ref_m = do_effect(ref, x, y, z)
                else:
                    ref_m = reference[m]
                err = cosine_error(ref_m, do_effect(sub, x, y, z))
            except CavsError as exc:
                report.failures.append({**entry, "message": str(exc)})
                continue
            report.rows.append({**entry, "error": err})


def run_experiment(cfg: ExperimentConfig, network: CptNetwork | None = None) -> ErrorReport:
    """Run the benchmark; identical configs give identical reports."""
    cfg.validate()
    if network is None and cfg.network_file is not None:
        from .io import read_network

        network = read_network(cfg.network_file)
        if not isinstance(network, CptNetwork):
            raise ValidationError("benchmark network file needs CPTs")
    report = ErrorReport(cfg.to_dict())
    if network is not None:
        if cfg.x is None:
            raise ValidationError("x and y are required for a fixed network")
        x = network.graph.names[network.graph.index(cfg.x)]
        y = network.graph.names[network.graph.index(cfg.y)]
        _run_network(cfg, report, network, x, y, None, None, ("file",))
        return report

    for gi in range(cfg.n_graphs):
        graph_seed = derive_seed(cfg.seed, "graph", gi)
        dag = random_dag(cfg.n_nodes, cfg.n_edges, graph_seed)
        if cfg.x is not None:
            x, y = cfg.x, cfg.y
        else:
            x, y = choose_pair(dag, derive_seed(cfg.seed, "pair", gi), cfg.max_pool)
        for ci in range(cfg.n_cpts):
            cpt_seed = derive_seed(cfg.seed, "cpt", gi, ci)
            net = random_cpts(dag, cfg.cardinality, cpt_seed, cfg.cpt_mode)
            _run_network(cfg, report, net, x, y, graph_seed, cpt_seed, (gi, ci))
    return report


def run_sweep(
    cfg: ExperimentConfig, sizes=(2000, 1000, 500, 250, 125), repetitions: int = 5
) -> dict[str, np.ndarray]:
    """Mean error per method for each subsample size and repetition.

    Returns ``{method: array of shape (repetitions, len(sizes))}``. Every
    repetition uses its own derived seed; within a repetition the reference
    data and networks are shared across sizes.
    """
    out = {m: np.full((repetitions, len(sizes)), np.nan) for m in cfg.methods}
    for r in range(repetitions):
        rep_seed = derive_seed(cfg.seed, "repetition", r)
        for s, n in enumerate(sizes):
            report = run_experiment(replace(cfg, seed=rep_seed, subsample_n=n))
            for m in cfg.methods:
                e = report.errors(m)
                if e.size:
                    out[m][r, s] = e.mean()
    return out
