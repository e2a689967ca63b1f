"""End-to-end proof run and the JSON proof certificate.

Stages, in order:

1. preliminaries: odd-exponent exclusion and the small-y family scans
2. matveev: linear-forms bound n <= N
3. y_bound: 2^(y-2) < 1.1 N
4. reduction: continued fraction of log(alpha)/log(3) and the per-y sweep
5. search: exact enumeration of the reduced box

The certificate stores every real as a decimal string together with the
precision it was computed at, and is written with sorted keys so equal
configurations give byte-identical files.
"""

from __future__ import annotations

import contextlib
import json
import logging
import platform
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np

from . import __version__, _kernels
from .contfrac import cf_expand, first_q_above
from .errors import ExpansionExhausted, InconsistencyError, PrecisionExhausted
from .linforms import (
    COEFF_BOUND_FACTOR,
    CONSTANT_ORDER,
    combine_with_lambda_bound,
    derive_y_bound,
    height,
    matveev_coefficient,
    standard_instance,
    scan_linear_form,
    solve_n_bound,
)
from .numerics import DEFAULT_PRECISION, GUARD_DIGITS, MIN_PRECISION, certified_less, make_real
from .reduction import (
    build_instance,
    epsilon_of,
    epsilon_table,
    gamma_ratio,
    omega_bound,
    sweep_y,
)
from .search import (
    SPECIAL_CASES,
    SearchBox,
    assemble_theorem,
    rule_out_odd_exponent_cases,
    scan_special_case,
    search_box,
    sieve_box,
    verify_triple,
)

log = logging.getLogger(__name__)

SCHEMA = "pillai-fib-certificate/1"

# Values asserted in the published argument, recorded next to computed ones.
PUBLISHED_N_BOUND = 216 * 10**14
PUBLISHED_Y_CLAIM = 56
PUBLISHED_Q = 1116972345258589541
PUBLISHED_EPSILON_FLOOR = "0.0096"
PUBLISHED_MU_FLOOR = "0.0296"
PUBLISHED_GAMMA_TERM_CEIL = "0.02"
PUBLISHED_REDUCED_N = 94

ESCALATION_STEPS = 5


@dataclass
class PipelineConfig:
    precision_digits: int = DEFAULT_PRECISION
    max_cf_terms: int = 200
    y_min: int = 4
    y_max: int | None = None
    n_max_floor: int = PUBLISHED_REDUCED_N
    box_override: SearchBox | None = None
    out_path: str | None = None
    emit_trace: bool = False
    scan_x_max: int = 120
    scan_n_max: int = 300

    def __post_init__(self):
        if self.precision_digits < MIN_PRECISION:
            raise ValueError(f"precision_digits must be >= {MIN_PRECISION}")
        if self.y_min < 4:
            raise ValueError("the reduction covers y >= 4; smaller y are handled by the scans")


_FILE_KEYS = {
    "precision_digits": int,
    "max_cf_terms": int,
    "y_min": int,
    "y_max": int,
    "n_max_floor": int,
    "out_path": str,
}


def load_config(path, **overrides) -> PipelineConfig:
    """Read a flat ``key = value`` file; keyword overrides win over file values."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or key not in _FILE_KEYS:
            raise ValueError(f"{path}:{lineno}: unrecognised line {raw!r}")
        values[key] = _FILE_KEYS[key](val)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig(**values)


@dataclass
class ProofCertificate:
    environment: dict
    preliminaries: dict
    matveev: dict
    y_bound: dict
    reduction: dict
    search: dict
    solutions: list
    published_discrepancies: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = SCHEMA
        return d


@contextlib.contextmanager
def _stage(name: str):
    try:
        yield
    except PrecisionExhausted as exc:
        raise PrecisionExhausted(f"stage {name}: {exc}") from exc
    log.debug("stage %s done", name)


def _real(x, digits: int | None = None) -> str:
    return x.to_string(digits)


def _reduce(P: int, max_terms: int, M: int, ys):
    """Expand log(alpha)/log(3) and sweep y, raising precision until everything certifies.

    M ||gamma q|| alone needs about log10(M q) digits, so low working
    precisions are escalated in steps of 20 digits.
    """
    precision = P
    for _ in range(ESCALATION_STEPS):
        try:
            cf = cf_expand(gamma_ratio(precision), max_terms)
            first = first_q_above(cf, 6 * M)
            return cf, first, sweep_y(ys, M, cf, precision), precision
        except (ExpansionExhausted, PrecisionExhausted) as exc:
            log.info("reduction at %d digits failed (%s); raising precision", precision, exc)
            precision += 20
    raise PrecisionExhausted(f"reduction did not certify up to {precision - 20} digits")


def run_proof(config: PipelineConfig | None = None) -> ProofCertificate:
    config = config or PipelineConfig()
    P = config.precision_digits
    discrepancies = []

    with _stage("preliminaries"):
        odd = rule_out_odd_exponent_cases()
        scans = {c: scan_special_case(c, config.scan_x_max, config.scan_n_max) for c in SPECIAL_CASES}
        preliminaries = {
            "odd_exponent": {
                "k_max": odd.k_max,
                "all_valuations_one": odd.branch_empty,
            },
            "scan_window": {"x_max": config.scan_x_max, "n_max": config.scan_n_max},
            "special_cases": {c: [list(p) for p in v] for c, v in scans.items()},
        }
        if not odd.branch_empty:
            raise InconsistencyError("odd-exponent exclusion failed")

    with _stage("matveev"):
        inst = standard_instance(P)
        C = matveev_coefficient(inst)
        K = combine_with_lambda_bound(C)
        bound = solve_n_bound(K, COEFF_BOUND_FACTOR)
        N = bound.n_bound
        rel = (make_real(N, P) - PUBLISHED_N_BOUND) / PUBLISHED_N_BOUND
        matveev = {
            "num_logs": inst.num_logs,
            "field_degree": inst.field_degree,
            "coeff_bound_factor": str(inst.coeff_bound_factor),
            "constants": [t.name for t in CONSTANT_ORDER],
            "heights": [_real(height(t, P)) for t in CONSTANT_ORDER],
            "a_coefficients": [_real(a) for a in inst.a_coeffs],
            "C": _real(C),
            "K": _real(K),
            "n_bound": str(N),
            "published_n_bound": str(PUBLISHED_N_BOUND),
            "relative_deviation_from_published": _real(rel, 10),
        }
        if config.emit_trace:
            matveev["trace"] = list(bound.trace)

    with _stage("y_bound"):
        y_bound = derive_y_bound(N)
        y_hi = min(config.y_max, y_bound) if config.y_max else y_bound
        y_stage = {"value": y_bound, "published_claim": f"y<{PUBLISHED_Y_CLAIM}", "sweep": [config.y_min, y_hi]}
        if y_bound != PUBLISHED_Y_CLAIM:
            discrepancies.append({"item": "y_bound", "published": str(PUBLISHED_Y_CLAIM), "computed": str(y_bound)})
        else:
            y_stage["note"] = "inclusive: y <= 56 is swept"

    with _stage("reduction"):
        M = max(N, PUBLISHED_N_BOUND)
        ys = range(config.y_min, y_hi + 1)
        cf, (k0, _, q0), sweep, RP = _reduce(P, config.max_cf_terms, M, ys)
        published_rows = epsilon_table(ys, M, PUBLISHED_Q, RP)
        denominators = [q for _, q in cf.convergents[: cf.trusted_terms]]
        published_min = min(published_rows, key=lambda r: r.epsilon.value)
        published_bound = omega_bound(make_real(5, RP), build_instance(4, M, RP).B, PUBLISHED_Q,
                                  published_min.epsilon)
        reduction = {
            "precision": RP,
            "gamma": _real(gamma_ratio(RP)),
            "M": str(M),
            "six_M": str(6 * M),
            "A": "5",
            "B": "alpha",
            "trusted_terms": cf.trusted_terms,
            "first_q_above_6M": {"k": k0, "q": str(q0)},
            "rows": [
                {"y": r.y_label, "k": r.k, "q": str(r.q_used),
                 "epsilon": _real(r.epsilon), "omega_bound": r.omega_bound}
                for r in sweep.rows
            ],
            "global_bound": sweep.global_bound,
            "min_epsilon": _real(sweep.min_epsilon),
            "published_q_check": {
                "q": str(PUBLISHED_Q),
                "k": denominators.index(PUBLISHED_Q) if PUBLISHED_Q in denominators else None,
                "in_expansion": PUBLISHED_Q in denominators,
                "gamma_term": _real(published_rows[0].gamma_term),
                "rows": [
                    {"y": r.y, "mu_dist": _real(r.mu_dist), "epsilon": _real(r.epsilon)}
                    for r in published_rows
                ],
                "min_epsilon": {"y": published_min.y, "value": _real(published_min.epsilon)},
                "omega_bound": published_bound,
            },
        }
        floor = make_real(PUBLISHED_EPSILON_FLOOR, RP)
        if certified_less(published_min.epsilon, floor):
            discrepancies.append({
                "item": "min_epsilon_at_published_q",
                "published": f">{PUBLISHED_EPSILON_FLOOR}",
                "computed": _real(published_min.epsilon, 12),
                "y": published_min.y,
            })
        mu_min = min(published_rows, key=lambda r: r.mu_dist.value)
        if certified_less(mu_min.mu_dist, make_real(PUBLISHED_MU_FLOOR, RP)):
            discrepancies.append({
                "item": "min_mu_distance_at_published_q",
                "published": f">{PUBLISHED_MU_FLOOR}",
                "computed": _real(mu_min.mu_dist, 12),
                "y": mu_min.y,
            })
        if sweep.global_bound >= PUBLISHED_REDUCED_N:
            discrepancies.append({
                "item": "reduced_n_bound",
                "published": f"n<{PUBLISHED_REDUCED_N}",
                "computed": f"n<={sweep.global_bound}",
            })

    with _stage("search"):
        n_cap = max(config.n_max_floor, sweep.global_bound)
        default_box = SearchBox.from_n_bound(config.y_min, y_hi, 3, n_cap)
        box = default_box
        if config.box_override is not None:
            o = config.box_override
            box = SearchBox(max(o.y_min, default_box.y_min), min(o.y_max, default_box.y_max),
                            max(o.n_min, 3), min(o.n_max, default_box.n_max),
                            min(o.x_max, default_box.x_max))
        solutions = search_box(box)
        sieve = sieve_box(box)
        if sieve != solutions:
            raise InconsistencyError(f"pruned search {solutions} disagrees with full sieve {sieve}")
        scan = scan_linear_form(box.x_max, (box.y_min, box.y_max), (box.n_min, box.n_max), P)
        if scan.implication_violations:
            raise InconsistencyError("log(1+z) step violated inside the search box")
        search = {
            "box": asdict(box),
            "solutions": [list(t) for t in solutions],
            "sieve_cross_check": [list(t) for t in sieve],
            "lambda_nonzero": {
                "min_abs_gamma": _real(scan.min_abs_gamma, 20),
                "argmin": list(scan.argmin),
                "implication_violations": scan.implication_violations,
                "triples_scanned": scan.triples_scanned,
            },
        }

    final = assemble_theorem(solutions, scans)
    environment = {
        "precision_digits": P,
        "guard_digits": GUARD_DIGITS,
        "max_cf_terms": config.max_cf_terms,
        "n_max_floor": config.n_max_floor,
        "package": __version__,
        "python": platform.python_version(),
        "mpmath": mpmath.__version__,
        "numpy": np.__version__,
        "kernel_backend": _kernels.BACKEND,
    }
    cert = ProofCertificate(environment, preliminaries, matveev, y_stage, reduction, search,
                            [list(t) for t in final], discrepancies)
    problems = check_certificate(cert.to_dict())
    if problems:
        raise InconsistencyError("; ".join(problems))
    if config.out_path:
        emit_certificate(cert, config.out_path)
    return cert


def dumps_certificate(cert: ProofCertificate | dict) -> str:
    data = cert.to_dict() if isinstance(cert, ProofCertificate) else cert
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def emit_certificate(cert: ProofCertificate | dict, path) -> Path:
    path = Path(path)
    path.write_text(dumps_certificate(cert))
    return path


def check_certificate(data: dict | str | Path) -> list[str]:
    """Re-verify a certificate without re-expanding the continued fraction.

    Returns a list of problems (empty when the certificate checks out).
    Triples are verified exactly, every recorded eps is recomputed at the
    recorded q, and the stage bounds are checked against each other.
    """
    if not isinstance(data, dict):
        data = json.loads(Path(data).read_text())
    problems = []
    if data.get("schema") != SCHEMA:
        problems.append(f"unknown schema {data.get('schema')!r}")
        return problems
    P = data["reduction"]["precision"]
    # q ~ 1e18 costs ~19 digits; recomputed eps must agree with the record to 10^-(P-25).
    tol = make_real(Fraction(1, 10 ** (P - 25)), P)

    for t in data["solutions"]:
        if not verify_triple(*t):
            problems.append(f"solution {t} fails exact verification")

    N = int(data["matveev"]["n_bound"])
    if derive_y_bound(N) != data["y_bound"]["value"]:
        problems.append("y bound does not follow from the recorded n bound")

    red = data["reduction"]
    M = int(red["M"])
    if M < N:
        problems.append("reduction M is smaller than the linear-forms bound")
    bounds = []
    for row in red["rows"]:
        y, q = row["y"], int(row["q"])
        if q <= 6 * M:
            problems.append(f"y={y}: q={q} does not exceed 6M")
            continue
        inst = build_instance(y, M, P)
        eps = epsilon_of(inst, q)
        if not certified_less(0, eps):
            problems.append(f"y={y}: eps is not positive")
        diff = abs(eps - make_real(row["epsilon"], P))
        if diff.lo > tol.value:
            problems.append(f"y={y}: recorded eps differs from recomputation")
        wb = omega_bound(inst.A, inst.B, q, eps)
        if wb != row["omega_bound"]:
            problems.append(f"y={y}: omega bound {row['omega_bound']} != recomputed {wb}")
        bounds.append(wb)
    if bounds and max(bounds) != red["global_bound"]:
        problems.append("global bound is not the maximum over y")

    box = data["search"]["box"]
    n_cap = max(data["environment"]["n_max_floor"], red["global_bound"])
    if box["n_max"] > n_cap or box["y_max"] > data["y_bound"]["value"]:
        problems.append("search box exceeds the reduced bounds")
    if box["x_max"] > -(-11 * n_cap // 10):
        problems.append("search box x cap exceeds 1.1 n")
    for t in data["search"]["solutions"]:
        x, y, n = t
        if not verify_triple(x, y, n):
            problems.append(f"search solution {t} fails exact verification")
        if not (box["y_min"] <= y <= box["y_max"] and box["n_min"] <= n <= box["n_max"]
                and x < box["x_max"]):
            problems.append(f"search solution {t} lies outside the box")
    return problems


def config_from_args(base: PipelineConfig | None = None, **changes) -> PipelineConfig:
    base = base or PipelineConfig()
    known = {f.name for f in fields(PipelineConfig)}
    return replace(base, **{k: v for k, v in changes.items() if k in known and v is not None})
