"""Seeded verification harness.

Every identity is checked by computing both sides exactly and comparing the
encoded results.  Subset-quantified lemmas are checked over all admissible
subsets; matrix-quantified ones over random matrices drawn from
:class:`octadet.prng.SplitMix64`.  Work is split into one job per
``(identity, ring)`` pair, each with its own derived stream, so a report does
not depend on how many workers ran it.

Random entries: integers uniform in ``[-9, 9]``, residues uniform in
``[0, m)``, polynomials of degree at most one with independently drawn
coefficients.  Entries are drawn row by row.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Any, Callable, Iterator

from . import freeconv, hyperoct, matrices, prng
from ._coverage import REGISTRY, recording
from .combi import (
    MAX_PERM_N,
    Subset,
    all_permutations,
    all_subsets,
    subsets_of_size,
    sym_diff,
)
from .errors import DomainError, GuardError
from .hyperoct import (
    all_k_subset_pairs,
    group_order,
    max_terms,
)
from .matrices import Matrix, identity, zeros
from .rings import Ring, ring_from_spec

__all__ = [
    "IDENTITIES",
    "SuiteConfig",
    "Report",
    "random_matrix",
    "run_suite",
    "replay",
    "suite_costs",
]

IDENTITIES = (
    "cauchy_binet",
    "det_add",
    "lemma_cp",
    "cancel_q",
    "cancel_p",
    "symm",
    "asymm",
    "conv_mult",
    "conv_add",
    "conv_rect",
    "group_closure",
    "homomorphisms",
)

# asymm checks every subset choice up to this many, otherwise a sample of this size
ASYMM_EXHAUSTIVE = 36
ASYMM_SAMPLE = 16

COVERED_MODULES = ("matrices", "hyperoct", "freeconv")


def random_matrix(ring: Ring, rows: int, cols: int, rng: prng.SplitMix64) -> Matrix:
    """Draw a matrix from ``rng`` (advancing it)."""
    return Matrix(ring, [[ring.random(rng) for _ in range(cols)] for _ in range(rows)])


@dataclass(frozen=True)
class SuiteConfig:
    rings: tuple[str, ...] = ("int", "mod:6", "mod:2")
    max_n: int = 3
    max_m: int | None = None
    trials: int = 25
    seed: int = 42
    identities: tuple[str, ...] = IDENTITIES
    fail_fast: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rings", tuple(self.rings))
        object.__setattr__(self, "identities", tuple(self.identities))
        if self.max_m is None:
            object.__setattr__(self, "max_m", self.max_n)
        if self.trials < 1:
            raise DomainError(f"trials must be at least 1, got {self.trials}")
        if self.max_n < 1 or self.max_m < 1:
            raise DomainError(f"dimension caps must be at least 1, got {self.max_n}, {self.max_m}")
        if not self.identities:
            raise DomainError("at least one identity must be selected")
        unknown = [i for i in self.identities if i not in IDENTITIES]
        if unknown:
            raise DomainError(f"unknown identities {unknown}; choose from {list(IDENTITIES)}")
        if not self.rings:
            raise DomainError("at least one ring must be selected")
        for spec in self.rings:
            ring_from_spec(spec)
        if not 0 <= self.seed <= prng.MASK64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def to_json(self) -> dict:
        return {
            "rings": list(self.rings),
            "max_n": self.max_n,
            "max_m": self.max_m,
            "trials": self.trials,
            "seed": self.seed,
            "identities": list(self.identities),
            "fail_fast": self.fail_fast,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SuiteConfig":
        return cls(**obj)


@dataclass
class IdentityResult:
    checked: int = 0
    passed: int = 0
    failed: int = 0
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "passed": self.passed,
            "failed": self.failed,
            "counterexample": self.counterexample,
        }


@dataclass
class Report:
    config: SuiteConfig
    version: str
    results: dict[str, IdentityResult]
    coverage: dict[str, int] = field(default_factory=dict)
    wall_ms: int | None = None

    @property
    def failed(self) -> int:
        return sum(r.failed for r in self.results.values())

    @property
    def ok(self) -> bool:
        return self.failed == 0

    @property
    def missing_coverage(self) -> list[str]:
        wanted = sorted(k for k in REGISTRY if k.split(".")[0] in COVERED_MODULES)
        return [k for k in wanted if not self.coverage.get(k)]

    def to_json(self) -> dict:
        return {
            "seed": self.config.seed,
            "version": self.version,
            "config": self.config.to_json(),
            "results": {name: r.to_json() for name, r in self.results.items()},
            "coverage": {"calls": dict(sorted(self.coverage.items())), "missing": self.missing_coverage},
            "wall_ms": self.wall_ms,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


# ---------------------------------------------------------------- encoding helpers


def _vec(R: Ring, values) -> list:
    if isinstance(values, matrices.CharPolyCoeffs):
        values = values.coeffs
    return [R.encode(getattr(v, "value", v)) for v in values]


def _el(x) -> Any:
    return x.ring.encode(x.value)


def _sub(n: int, members) -> Subset:
    return Subset(n, tuple(members))


def _mats(inputs: dict[str, Matrix]) -> dict:
    return {name: M.to_json() for name, M in inputs.items()}


Item = tuple[dict, Any, Any]
Instance = tuple[dict, dict[str, Matrix]]


# ---------------------------------------------------------------- identities


def _gen_cauchy_binet(R, cfg, rng) -> Iterator[Instance]:
    top = cfg.max_n
    for m in range(1, top + 1):
        for n in range(1, top + 1):
            for p in range(1, top + 1):
                for _ in range(cfg.trials):
                    yield {"m": m, "n": n, "p": p}, {
                        "A": random_matrix(R, m, n, rng),
                        "B": random_matrix(R, n, p, rng),
                    }


def _chk_cauchy_binet(R, params, inputs) -> list[Item]:
    A, B = inputs["A"], inputs["B"]
    AB = matrices.mat_mul(A, B)
    out = []
    for S, T in all_k_subset_pairs(A.rows, B.cols):
        key = {"S": list(S), "T": list(T)}
        out.append((key, _el(matrices.cauchy_binet(A, B, S, T)), _el(matrices.minor(AB, S, T))))
    return out


def _gen_det_add(R, cfg, rng) -> Iterator[Instance]:
    for n in range(1, cfg.max_n + 1):
        for _ in range(cfg.trials):
            yield {"n": n}, {"A": random_matrix(R, n, n, rng), "B": random_matrix(R, n, n, rng)}


def _chk_det_add(R, params, inputs) -> list[Item]:
    A, B = inputs["A"], inputs["B"]
    S = matrices.mat_add(A, B)
    leib = _el(matrices.det_leibniz(S))
    return [
        ({"route": "expansion"}, _el(matrices.det_add_expansion(A, B)), leib),
        ({"route": "berkowitz"}, _el(matrices.det_berkowitz(S)), leib),
    ]


def _gen_lemma_cp(R, cfg, rng) -> Iterator[Instance]:
    for n in range(1, cfg.max_n + 1):
        for _ in range(cfg.trials):
            yield {"n": n}, {"A": random_matrix(R, n, n, rng)}


def _chk_lemma_cp(R, params, inputs) -> list[Item]:
    A = inputs["A"]
    sums = [matrices.principal_minor_sum(A, k) for k in range(A.rows + 1)]
    return [({}, _vec(R, matrices.charpoly(A)), _vec(R, sums))]


def _gen_exhaustive(R, cfg, rng) -> Iterator[Instance]:
    for n in range(1, cfg.max_n + 1):
        yield {"n": n}, {}


def _chk_cancel_q(R, params, inputs) -> list[Item]:
    n = params["n"]
    pairs = [(S, T) for S in all_subsets(n) for T in all_subsets(n) if len(S) == len(T)]
    out = []
    for S, T in pairs:
        for U, V in pairs:
            key = {"S": list(S), "T": list(T), "U": list(U), "V": list(V)}
            lhs = hyperoct.cancel_sum_q(n, S, T, U, V, R)
            out.append((key, _el(lhs), _el(hyperoct.predict_cancel_q(n, S, T, U, V, R))))
            if R.is_boolean:
                out.append((dict(key, check="boolean_zero"), _el(lhs), R.encode(R.zero)))
    return out


def _chk_cancel_p(R, params, inputs) -> list[Item]:
    n = params["n"]
    out = []
    for k in range(n + 1):
        table = hyperoct.four_set_table(n, k)
        subs = list(subsets_of_size(n, k))
        for S in subs:
            for T in subs:
                for U in subs:
                    key = {"S": list(S), "T": list(T), "U": list(U)}
                    want = _el(hyperoct.predict_cancel_p(n, S, T, U, R))
                    out.append((key, _el(hyperoct.cancel_sum_p(n, S, T, U, R)), want))
                    diag = R.from_int(table[(S, T, U, S)])
                    out.append((dict(key, route="four_set_table"), R.encode(diag), want))
    return out


def _gen_symm(R, cfg, rng) -> Iterator[Instance]:
    for n in range(1, cfg.max_n + 1):
        for m in range(1, cfg.max_m + 1):
            for r in range(1, cfg.max_m + 1):
                for _ in range(cfg.trials):
                    yield {"n": n, "m": m, "r": r}, {
                        "A": random_matrix(R, n, n, rng),
                        "B": random_matrix(R, m, n, rng),
                        "C": random_matrix(R, n, r, rng),
                    }


def _chk_symm(R, params, inputs) -> list[Item]:
    A, B, C = inputs["A"], inputs["B"], inputs["C"]
    pairs = all_k_subset_pairs(B.rows, C.cols)
    sums = hyperoct.symm_group_sums(A, B, C, pairs)
    out = []
    for (X, Y), got in zip(pairs, sums):
        key = {"X": list(X), "Y": list(Y)}
        out.append((key, _el(got), _el(hyperoct.predict_symm(A, B, C, X, Y))))
    X, Y = pairs[-1]
    out.append(({"X": list(X), "Y": list(Y), "route": "single"}, _el(hyperoct.symm_group_sum(A, B, C, X, Y)), _el(sums[-1])))
    if R.is_boolean:
        out.append(({"check": "boolean_zero"}, _vec(R, sums), _vec(R, [R.zero] * len(sums))))
    return out


def _gen_asymm(R, cfg, rng) -> Iterator[Instance]:
    for n in range(1, cfg.max_n + 1):
        for m in range(1, cfg.max_m + 1):
            top = max(n, m)
            for _ in range(cfg.trials):
                p1, r1, p2, r2 = (rng.randint(1, top) for _ in range(4))
                choices = [
                    [list(X), list(Y), list(W), list(Z)]
                    for X, Y in all_k_subset_pairs(p1, r1)
                    for W, Z in all_k_subset_pairs(p2, r2)
                ]
                if len(choices) > ASYMM_EXHAUSTIVE:
                    choices = rng.sample(choices, ASYMM_SAMPLE)
                params = {"n": n, "m": m, "p1": p1, "r1": r1, "p2": p2, "r2": r2, "choices": choices}
                yield params, {
                    "A": random_matrix(R, n, m, rng),
                    "B": random_matrix(R, p1, n, rng),
                    "C": random_matrix(R, m, r1, rng),
                    "E": random_matrix(R, m, n, rng),
                    "F": random_matrix(R, p2, m, rng),
                    "G": random_matrix(R, n, r2, rng),
                }


def _chk_asymm(R, params, inputs) -> list[Item]:
    mats = [inputs[k] for k in "ABCEFG"]
    dims = (params["p1"], params["r1"], params["p2"], params["r2"])
    choices = [tuple(_sub(d, c) for d, c in zip(dims, choice)) for choice in params["choices"]]
    sums = hyperoct.asymm_group_sums(*mats, choices)
    out = []
    for choice, got in zip(choices, sums):
        key = dict(zip("XYWZ", (list(s) for s in choice)))
        out.append((key, _el(got), _el(hyperoct.predict_asymm(*mats, *choice))))
    last = choices[-1]
    out.append(
        (dict(zip("XYWZ", (list(s) for s in last)), route="single"),
         _el(hyperoct.asymm_group_sum(*mats, *last)), _el(sums[-1]))
    )
    if R.is_boolean:
        out.append(({"check": "boolean_zero"}, _vec(R, sums), _vec(R, [R.zero] * len(sums))))
    return out


def _gen_conv_mult(R, cfg, rng) -> Iterator[Instance]:
    for n in range(1, cfg.max_n + 1):
        for m in range(1, cfg.max_m + 1):
            for _ in range(cfg.trials):
                yield {"n": n, "m": m}, {
                    "A": random_matrix(R, m, m, rng),
                    "B": random_matrix(R, n, m, rng),
                    "C": random_matrix(R, m, n, rng),
                }


def _boolean_item(R, lhs) -> list[Item]:
    if not R.is_boolean:
        return []
    return [({"check": "boolean_zero"}, _vec(R, lhs), _vec(R, [R.zero] * len(lhs)))]


def _chk_conv_mult(R, params, inputs) -> list[Item]:
    A, B, C = inputs["A"], inputs["B"], inputs["C"]
    lhs = hyperoct.conv_mult_lhs(A, B, C)
    rhs = freeconv.conv_mult_rhs(matrices.charpoly(matrices.mat_mul(B, C)), matrices.charpoly(A))
    return [({}, _vec(R, lhs), _vec(R, rhs))] + _boolean_item(R, lhs)


def _gen_conv_add(R, cfg, rng) -> Iterator[Instance]:
    for n in range(1, cfg.max_n + 1):
        for _ in range(cfg.trials):
            yield {"n": n}, {"A": random_matrix(R, n, n, rng), "B": random_matrix(R, n, n, rng)}


def _chk_conv_add(R, params, inputs) -> list[Item]:
    A, B = inputs["A"], inputs["B"]
    lhs = hyperoct.conv_add_lhs(A, B)
    rhs = freeconv.conv_add_rhs(matrices.charpoly(A), matrices.charpoly(B))
    return [({}, _vec(R, lhs), _vec(R, rhs))] + _boolean_item(R, lhs)


def _gen_conv_rect(R, cfg, rng) -> Iterator[Instance]:
    for n in range(1, cfg.max_n + 1):
        for m in range(n, cfg.max_m + 1):
            for _ in range(cfg.trials):
                yield {"n": n, "m": m}, {
                    "A": random_matrix(R, n, m, rng),
                    "B": random_matrix(R, n, m, rng),
                    "C": random_matrix(R, m, n, rng),
                    "D": random_matrix(R, m, n, rng),
                }


def _chk_conv_rect(R, params, inputs) -> list[Item]:
    A, B, C, D = (inputs[k] for k in "ABCD")
    n, m = A.rows, A.cols
    lhs = hyperoct.conv_rect_lhs(A, B, C, D)
    ac = matrices.charpoly(matrices.mat_mul(A, C))
    bd = matrices.charpoly(matrices.mat_mul(B, D))
    rhs = freeconv.conv_rect_rhs(ac, bd, n, m)
    return [({}, _vec(R, lhs), _vec(R, rhs))] + _boolean_item(R, lhs)


def _chk_group_closure(R, params, inputs) -> list[Item]:
    n = params["n"]
    elements = list(hyperoct.enumerate_group(n))
    mats = {g.sort_key(): g.matrix(R) for g in elements}
    out = []
    for g in elements:
        for h in elements:
            prod = matrices.mat_mul(mats[g.sort_key()], mats[h.sort_key()])
            key = {"g": g.to_json(), "h": h.to_json()}
            out.append((key, prod.to_json(), mats[(g * h).sort_key()].to_json()))
            if g.sort_key() == elements[0].sort_key():
                # inverse from the closed form must undo the element
                out.append((dict(key, check="inverse"), matrices.mat_mul(mats[h.sort_key()], h.inverse_matrix(R)).to_json(), identity(n, R).to_json()))
    distinct = len(set(mats.values()))
    expected = factorial(n) if R.is_boolean else group_order(n)
    out.append(({"check": "distinct_elements"}, distinct, expected))
    perms = len(set(hyperoct.enumerate_perms(n, R)))
    out.append(({"check": "distinct_permutations"}, perms, factorial(n)))
    signs = len(set(hyperoct.enumerate_signs(n, R)))
    out.append(({"check": "distinct_signs"}, signs, 1 if R.is_boolean else 2**n))
    return out


def _gen_homomorphisms(R, cfg, rng) -> Iterator[Instance]:
    for n in range(1, cfg.max_n + 1):
        yield {"n": n, "kind": "exhaustive"}, {}
        for _ in range(cfg.trials):
            yield {"n": n, "kind": "random"}, {"A": random_matrix(R, n, n, rng)}


def _chk_homomorphisms(R, params, inputs) -> list[Item]:
    n = params["n"]
    out = []
    if params["kind"] == "random":
        A = inputs["A"]
        out.append(({"law": "additive_inverse"}, matrices.mat_add(A, matrices.mat_neg(A)).to_json(), zeros(R, n, n).to_json()))
        out.append(({"law": "identity"}, matrices.mat_mul(identity(n, R), A).to_json(), A.to_json()))
        return out
    I = identity(n, R).to_json()
    perms = list(all_permutations(n))
    pm = {p: matrices.permutation_matrix(p, R) for p in perms}
    for s in perms:
        out.append(({"law": "perm_inverse", "s": list(s.image)}, matrices.mat_mul(pm[s], pm[s.inverse()]).to_json(), I))
        for t in perms:
            key = {"law": "perm_hom", "s": list(s.image), "t": list(t.image)}
            out.append((key, matrices.mat_mul(pm[s], pm[t]).to_json(), pm[s * t].to_json()))
    subs = all_subsets(n)
    qm = {S: matrices.sign_matrix(S, R) for S in subs}
    for S in subs:
        out.append(({"law": "sign_involution", "S": list(S)}, matrices.mat_mul(qm[S], qm[S]).to_json(), I))
        if R.is_boolean:
            out.append(({"law": "boolean_sign_identity", "S": list(S)}, qm[S].to_json(), I))
        for T in subs:
            key = {"law": "sign_hom", "S": list(S), "T": list(T)}
            out.append((key, matrices.mat_mul(qm[S], qm[T]).to_json(), qm[sym_diff(S, T)].to_json()))
    return out


_IDENTITY_TABLE: dict[str, tuple[Callable, Callable]] = {
    "cauchy_binet": (_gen_cauchy_binet, _chk_cauchy_binet),
    "det_add": (_gen_det_add, _chk_det_add),
    "lemma_cp": (_gen_lemma_cp, _chk_lemma_cp),
    "cancel_q": (_gen_exhaustive, _chk_cancel_q),
    "cancel_p": (_gen_exhaustive, _chk_cancel_p),
    "symm": (_gen_symm, _chk_symm),
    "asymm": (_gen_asymm, _chk_asymm),
    "conv_mult": (_gen_conv_mult, _chk_conv_mult),
    "conv_add": (_gen_conv_add, _chk_conv_add),
    "conv_rect": (_gen_conv_rect, _chk_conv_rect),
    "group_closure": (_gen_exhaustive, _chk_group_closure),
    "homomorphisms": (_gen_homomorphisms, _chk_homomorphisms),
}


# ---------------------------------------------------------------- cost guard


def suite_costs(cfg: SuiteConfig) -> dict[str, tuple[int, int]]:
    """Worst-case ``(terms, limit)`` per selected identity at the configured caps."""
    N, M = cfg.max_n, cfg.max_m
    budget = max_terms()
    perm_limit = factorial(MAX_PERM_N)

    def group(n: int) -> int:
        return group_order(n) if n <= MAX_PERM_N else perm_limit * budget + 1

    costs = {
        "cauchy_binet": (comb(2 * N, N) * N, budget),
        "det_add": (comb(2 * N, N), comb(2 * matrices.MAX_ADD_EXPANSION_N, matrices.MAX_ADD_EXPANSION_N)),
        "lemma_cp": (2**N, budget),
        "cancel_q": (2**N, 2**hyperoct.MAX_SIGN_N),
        "cancel_p": (factorial(N), perm_limit),
        "symm": (group(N), budget),
        "asymm": (group(N) * group(M), budget),
        "conv_mult": (group(M), budget),
        "conv_add": (group(N), budget),
        "conv_rect": (group(min(N, M)) * group(M), budget),
        "group_closure": (group(N) ** 2, budget),
        "homomorphisms": (factorial(N) ** 2, perm_limit**2),
    }
    return {name: costs[name] for name in cfg.identities}


def _check_guards(cfg: SuiteConfig) -> None:
    offenders = [(name, c, lim) for name, (c, lim) in suite_costs(cfg).items() if c > lim]
    if offenders:
        name, count, limit = offenders[0]
        others = ", ".join(f"{o} ({c} terms)" for o, c, _ in offenders[1:])
        what = f"identity {name}" + (f" (also refused: {others})" if others else "")
        raise GuardError(what, count, limit)


# ---------------------------------------------------------------- running


def _task(identity_name: str, ring_spec: str, cfg_json: dict) -> dict:
    cfg = SuiteConfig.from_json(cfg_json)
    R = ring_from_spec(ring_spec)
    rng = prng.derive(cfg.seed, f"{identity_name}:{ring_spec}")
    gen, check = _IDENTITY_TABLE[identity_name]
    res = IdentityResult()
    with recording() as calls:
        for params, inputs in gen(R, cfg, rng):
            stop = False
            for key, lhs, rhs in check(R, params, inputs):
                res.checked += 1
                if lhs == rhs:
                    res.passed += 1
                    continue
                res.failed += 1
                if res.counterexample is None:
                    res.counterexample = {
                        "identity": identity_name,
                        "ring": ring_spec,
                        "params": params,
                        "inputs": _mats(inputs),
                        "item": key,
                        "lhs": lhs,
                        "rhs": rhs,
                    }
                if cfg.fail_fast:
                    stop = True
                    break
            if stop:
                break
    return {"result": res.to_json(), "coverage": dict(calls)}


def run_suite(config: SuiteConfig, jobs: int = 1, timing: bool = False) -> Report:
    """Run every selected identity over every ring.

    ``jobs`` only changes how the ``(identity, ring)`` jobs are scheduled.
    ``wall_ms`` is recorded when ``timing`` is set and is ``None`` otherwise,
    which keeps repeated reports byte-identical.
    """
    from . import __version__

    if jobs < 1:
        raise DomainError(f"jobs must be at least 1, got {jobs}")
    _check_guards(config)
    start = time.perf_counter()
    tasks = [(name, spec) for name in config.identities for spec in config.rings]
    cfg_json = config.to_json()
    if jobs == 1 or len(tasks) == 1:
        outputs = [_task(name, spec, cfg_json) for name, spec in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_task, name, spec, cfg_json) for name, spec in tasks]
            outputs = [f.result() for f in futures]
    results = {name: IdentityResult() for name in config.identities}
    coverage: dict[str, int] = {}
    for (name, _), out in zip(tasks, outputs):
        merged, part = results[name], out["result"]
        merged.checked += part["checked"]
        merged.passed += part["passed"]
        merged.failed += part["failed"]
        if merged.counterexample is None:
            merged.counterexample = part["counterexample"]
        for op, count in out["coverage"].items():
            coverage[op] = coverage.get(op, 0) + count
    wall = round((time.perf_counter() - start) * 1000) if timing else None
    return Report(config, __version__, results, coverage, wall)


def replay(counterexample: dict) -> tuple[Any, Any]:
    """Recompute ``(lhs, rhs)`` for a recorded counterexample."""
    name = counterexample["identity"]
    if name not in _IDENTITY_TABLE:
        raise DomainError(f"unknown identity {name!r}")
    R = ring_from_spec(counterexample["ring"])
    inputs = {k: Matrix.from_json(v, R) for k, v in counterexample["inputs"].items()}
    _, check = _IDENTITY_TABLE[name]
    for key, lhs, rhs in check(R, counterexample["params"], inputs):
        if key == counterexample["item"]:
            return lhs, rhs
    raise DomainError(f"item {counterexample['item']} not produced by {name}")
