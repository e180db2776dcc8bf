"""Property checks over random and exhaustive instances.

Every check registers itself with ``check_registry``; ``run_suite`` draws
instances from a per-check stream SeedSequence([seed, crc32(name)]) so a
report depends only on the config, never on scheduling.
"""

import json
import logging
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from prometheus_client import Counter

from . import channel as ch
from .area import area_check, entropy_area_check
from .check_registry import (
    CheckInterface,
    Instance,
    Outcome,
    get_check,
    list_checks,
    register_check,
)
from .coset import (
    analyze_coset,
    coset_symmetry_prediction,
    hypotheses,
    ser_chain,
    ser_hypotheses,
    representative_independence,
    weak_bound_check,
)
from .cover import (
    dexit_grm_bound,
    efron_stein_decompose,
    efron_stein_standalone,
)
from .gf import FieldSpec, field_of_size
from .grm import (
    GrmCode,
    family_depth,
    grm_make,
    puncture_check,
    rate,
    rate_diff_bound,
    rate_sum_bound,
)
from .models import CheckReport, FailureRecord, SuiteConfig
from .numeric import Number, format_number
from .perm import NamedGroup, Transitivity, contains_subgroup, named_group

logger = logging.getLogger("grmlab")

checks_total = Counter(
    "grmlab_checks_total",
    "Suite checks run, labeled by check and outcome",
    ["check", "outcome"],
)

# Exact-feasible GRM codes per alphabet size, as (r, m)
CODE_POOL: Dict[int, List[Tuple[int, int]]] = {
    2: [(1, 2), (0, 2), (1, 3)],
    3: [(1, 1), (0, 1), (0, 2)],
    4: [(1, 1), (0, 1)],
    5: [(1, 1), (0, 1)],
}


# --- Instance helpers ---


def field_noise(spec: FieldSpec, noise: Sequence[Number]) -> ch.DiscreteChannel:
    """Y = X + Z in F_q with Z ~ noise; symmetric under the field's translations."""
    rows = [[noise[spec.sub(y, x)] for y in range(spec.q)] for x in range(spec.q)]
    return ch.DiscreteChannel.from_rows(rows)


def _channel(instance: Instance) -> ch.DiscreteChannel:
    return ch.channel_from_dict(instance["channel"])


def _code(instance: Instance) -> GrmCode:
    return grm_make(field_of_size(int(instance["q"])), int(instance["r"]), int(instance["m"]))


def _near_perfect_noise(q: int, rng: np.random.Generator, total: int = 100) -> List[Fraction]:
    """Rational noise pmf with at most 5% mass off zero."""
    off = int(rng.integers(0, 6))
    counts = rng.multinomial(off, np.full(q - 1, 1.0 / (q - 1))) if q > 1 else []
    return [Fraction(total - off, total)] + [Fraction(int(c), total) for c in counts]


def _symmetric_code_instance(q: int, rng: np.random.Generator) -> Instance:
    """A pool code with a channel matched to the field's additive group."""
    pool = CODE_POOL.get(q, [(1, 1)])
    r, m = pool[int(rng.integers(len(pool)))]
    spec = field_of_size(q)
    if rng.random() < 0.5:
        p = Fraction(int(rng.integers(0, 6)), 100)
        w = ch.qsc(q, p)
    else:
        w = field_noise(spec, _near_perfect_noise(q, rng))
    return {"q": q, "r": r, "m": m, "channel": ch.channel_to_dict(w)}


def _symmetric_channel(q: int, rng: np.random.Generator) -> ch.DiscreteChannel:
    """Rational q-ary symmetric, erasure or field-noise channel, twelfths throughout."""
    kind = int(rng.integers(3))
    if kind == 0:
        return ch.qsc(q, Fraction(int(rng.integers(1, 12)), 12))
    if kind == 1:
        return ch.qec(q, Fraction(int(rng.integers(1, 12)), 12))
    counts = rng.multinomial(12, np.full(q, 1.0 / q))
    return field_noise(field_of_size(q), [Fraction(int(c), 12) for c in counts])


def _jitter(w: ch.DiscreteChannel, rng: np.random.Generator, scale: float) -> ch.DiscreteChannel:
    rows = w.as_float()
    noise = rng.dirichlet(np.ones(rows.shape[1]), size=rows.shape[0])
    s = float(rng.uniform(0, scale))
    return ch.DiscreteChannel(q=w.q, outputs=w.outputs, matrix=(1 - s) * rows + s * noise)


def _flag(ok: bool) -> Number:
    return Fraction(0) if ok else Fraction(-1)


# --- Channel-level checks ---


@register_check("ser_overlap")
class SerOverlapCheck(CheckInterface):
    anchor = "SER <= 1 - tr(Q)/q under a uniform prior; tight for deterministic channels"

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        n_out = int(rng.integers(2, 2 * q + 1))
        if rng.random() < 0.2:
            targets = rng.integers(0, n_out, q)
            rows = [[Fraction(int(y == t)) for y in range(n_out)] for t in targets]
            w = ch.DiscreteChannel.from_rows(rows)
        else:
            w = ch.random_channel(q, n_out, rng)
        return {"q": q, "channel": ch.channel_to_dict(w)}

    def evaluate(self, instance: Instance) -> List[Outcome]:
        w = _channel(instance)
        rep = ch.ser(w)
        out = [Outcome(rep.margin)]
        if w.exact and all(v in (0, 1) for v in w.matrix.flat):
            # deterministic channel: the bound is attained
            out.append(Outcome(-abs(rep.margin)))
        return out

    def perturb(self, instance: Instance, rng: np.random.Generator) -> Instance:
        w = _jitter(_channel(instance), rng, 0.2)
        return {"q": instance["q"], "channel": ch.channel_to_dict(w)}


@register_check("strong_concavity")
class StrongConcavityCheck(CheckInterface):
    anchor = "I(X;Y|S) - I(X;Y|T) >= lambda_min^2/(2 ln q) E||P(X|T) - P(X|S)||^2 for S - T - X - Y"

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        chain = ch.random_chain(q, rng)
        w = ch.random_channel(q, int(rng.integers(2, 2 * q + 1)), rng)
        return {"q": q, "joint": chain.joint.tolist(), "channel": ch.channel_to_dict(w)}

    def evaluate(self, instance: Instance) -> Outcome:
        chain = ch.MarkovChain(joint=np.array(instance["joint"], dtype=np.float64))
        return Outcome(ch.strong_concavity_gap(chain, _channel(instance)).margin)

    def perturb(self, instance: Instance, rng: np.random.Generator) -> Instance:
        # Pull rows together so lambda_min shrinks
        w = _channel(instance).as_float()
        s = float(rng.uniform(0, 1))
        rows = (1 - s) * w + s * w.mean(axis=0)
        q = int(instance["q"])
        labels = tuple(str(j) for j in range(w.shape[1]))
        squeezed = ch.DiscreteChannel(q=q, outputs=labels, matrix=rows)
        return {
            "q": q,
            "joint": ch.random_chain(q, rng).joint.tolist(),
            "channel": ch.channel_to_dict(squeezed),
        }


def mod4_counterexample() -> ch.DiscreteChannel:
    """q = 4, Y = X + Z mod 4 with Z uniform on {0, 2}: deterministic up to a
    two-point ambiguity, transitive but not doubly transitive symmetry."""
    return ch.additive_noise(4, [Fraction(1, 2), Fraction(0), Fraction(1, 2), Fraction(0)])


@register_check("trace_constraint")
class TraceConstraintCheck(CheckInterface):
    anchor = "min(|tr Q - 1|, |tr Q - q|) <= 2 q delta under doubly transitive or prime transitive symmetry"

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        spec = field_of_size(q)
        base = ch.random_channel(q, int(rng.integers(2, q + 2)), rng)
        if rng.random() < 0.5:
            group = named_group(spec, NamedGroup.AFFINE)
        else:
            # near-deterministic channel for the prime transitive case
            eps = float(rng.uniform(0, 0.02))
            rows = (1 - eps) * np.eye(q) + eps * rng.dirichlet(np.ones(q), size=q)
            base = ch.DiscreteChannel(q=q, outputs=tuple(str(j) for j in range(q)), matrix=rows)
            group = named_group(spec, NamedGroup.ADDITIVE)
        w = ch.symmetrize(base, group)
        return {"q": q, "channel": ch.channel_to_dict(w)}

    def evaluate(self, instance: Instance) -> Outcome:
        rep = ch.trace_constraint_check(_channel(instance))
        if rep.case is ch.TraceCase.NOT_APPLICABLE:
            return Outcome(None)
        return Outcome(rep.bound - rep.distance)

    def fixtures(self) -> List[Dict[str, Any]]:
        w = mod4_counterexample()
        rep = ch.trace_constraint_check(w)
        return [
            {
                "name": "mod4_noise",
                "channel": ch.channel_to_dict(w),
                "trace": format_number(rep.trace),
                "delta": format_number(rep.delta),
                "transitivity": rep.transitivity.value,
                "case": rep.case.value,
                "inequality_holds": rep.inequality_holds,
            }
        ]


@register_check("discrepancy_identity")
class DiscrepancyIdentityCheck(CheckInterface):
    anchor = "delta = E||phi(Y) - E[phi(Y)|X]||^2 = (tr Q - tr Q^2)/q; the resampled-input channel has kernel Q"

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        w = ch.random_rational_channel(q, int(rng.integers(2, 2 * q + 1)), rng)
        return {"q": q, "channel": ch.channel_to_dict(w)}

    def evaluate(self, instance: Instance) -> List[Outcome]:
        w = _channel(instance)
        rep = ch.overlap(w)
        direct = ch.discrepancy_from_definition(w)
        sampled = ch.overlap_matrix(ch.sampled_channel(w))
        gap = sampled - rep.Q @ rep.Q
        worst = max((abs(v) for v in gap.flat), default=0)
        return [Outcome(-abs(direct - rep.delta)), Outcome(-worst)]


@register_check("overlap_symmetry")
class OverlapSymmetryCheck(CheckInterface):
    anchor = "Q is invariant under the symmetry group; transitive symmetry permutes columns and puts the maximum on the diagonal"

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        spec = field_of_size(q)
        which = NamedGroup.AFFINE if rng.random() < 0.5 else NamedGroup.ADDITIVE
        base = ch.random_rational_channel(q, 2, rng, denominator=6)
        w = ch.symmetrize(base, named_group(spec, which))
        return {"q": q, "channel": ch.channel_to_dict(w)}

    def evaluate(self, instance: Instance) -> Outcome:
        rep = ch.overlap_symmetry_check(_channel(instance))
        ok = rep.invariant_under_group
        if rep.transitivity is not Transitivity.INTRANSITIVE:
            ok = (
                ok
                and rep.constant_diagonal
                and rep.columns_permuted
                and rep.diagonal_is_column_max
            )
        if rep.constant_off_diagonal is not None:
            ok = ok and rep.constant_off_diagonal
        return Outcome(_flag(ok))


# --- Rate checks ---


@register_check("rate_berry_esseen")
class RateBerryEsseenCheck(CheckInterface):
    anchor = "|R_q(r, m) - Phi((r - m mu)/(sigma sqrt m))| <= 1/sqrt(m) for m >= q^2"

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        m = int(rng.integers(q * q, max(q * q, 30) + 1))
        return {"q": q, "m": m, "r": int(rng.integers(0, m * (q - 1) + 1))}

    def evaluate(self, instance: Instance) -> Outcome:
        m = int(instance["m"])
        rep = rate(int(instance["q"]), int(instance["r"]), m)
        return Outcome(1 / math.sqrt(m) - rep.error)

    def perturb(self, instance: Instance, rng: np.random.Generator) -> Instance:
        q, m = int(instance["q"]), int(instance["m"])
        r = int(np.clip(int(instance["r"]) + int(rng.integers(-2, 3)), 0, m * (q - 1)))
        return {"q": q, "m": m, "r": r}


@register_check("rate_difference")
class RateDifferenceCheck(CheckInterface):
    anchor = "R_q(r, m-k) - R_q(r, m) <= 4k/sqrt(m-k) for 0 <= k < m - r"

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        m = int(rng.integers(2, 31))
        r = int(rng.integers(0, m - 1))
        k = int(rng.integers(0, m - r))
        return {"q": q, "m": m, "r": r, "k": k}

    def evaluate(self, instance: Instance) -> Outcome:
        q, r, m, k = (int(instance[key]) for key in ("q", "r", "m", "k"))
        rep = rate_diff_bound(q, r, m, k)
        if not rep.hypotheses_hold:
            return Outcome(None)
        return Outcome(rep.bound - float(rep.difference))


@register_check("rate_sum_envelope")
class RateSumEnvelopeCheck(CheckInterface):
    anchor = "sum over the subset family of H(X_B)/|B| - R <= (7 + 3 log_q m)/sqrt(m); closed-form discrepancy bound dominates the cover bound"

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        m = int(rng.integers(q * q, q * q + 16))
        return {
            "q": q,
            "m": m,
            "r": int(rng.integers(0, m * (q - 1) + 1)),
            "lambda": float(rng.uniform(0.05, 1.0)),
        }

    def evaluate(self, instance: Instance) -> List[Outcome]:
        q, m, lam = int(instance["q"]), int(instance["m"]), float(instance["lambda"])
        rep = rate_sum_bound(q, int(instance["r"]), m)
        factor = 2 * math.log(q) / lam**2
        return [
            Outcome(rep.envelope - float(rep.rate_sum)),
            Outcome(dexit_grm_bound(q, m, lam) - factor * float(rep.rate_sum)),
        ]


# --- Code-level checks ---


@register_check("puncture")
class PunctureRowSpaceCheck(CheckInterface):
    anchor = "keeping the first q^(m-k) symbols of RM_q(r, m) gives RM_q(r, m-k) with uniform preimages"
    code_level = True
    LIMITS = {2: 4, 3: 3, 4: 2, 5: 2}

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        m = int(rng.integers(1, self.LIMITS.get(q, 1) + 1))
        return {
            "q": q,
            "m": m,
            "r": int(rng.integers(0, m * (q - 1) + 1)),
            "k": int(rng.integers(0, m)),
        }

    def evaluate(self, instance: Instance) -> Outcome:
        q, r, m, k = (int(instance[key]) for key in ("q", "r", "m", "k"))
        rep = puncture_check(field_of_size(q), r, m, k)
        return Outcome(_flag(rep.passed))


@register_check("coset_symmetry")
class CosetSymmetryCheck(CheckInterface):
    anchor = "the coset channel's symmetry group contains the field translations on matched instances, and is doubly transitive for GRM codes on affine-symmetric channels"
    code_level = True

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        return _symmetric_code_instance(q, rng)

    def evaluate(self, instance: Instance) -> List[Outcome]:
        code, w = _code(instance), _channel(instance)
        rep = coset_symmetry_prediction(code, w)
        affine = named_group(code.spec, NamedGroup.AFFINE)
        out = [Outcome(_flag(rep.contains_additive)), Outcome(_flag(rep.contains_prediction))]
        if contains_subgroup(rep.channel_group, affine):
            out.append(Outcome(_flag(rep.transitivity is Transitivity.DOUBLY_TRANSITIVE)))
        return out


@register_check("representative_independence")
class RepresentativeIndependenceCheck(CheckInterface):
    anchor = "the law of the coset posterior given X = c depends on c only through c_0"
    code_level = True

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        return _symmetric_code_instance(q, rng)

    def evaluate(self, instance: Instance) -> Outcome:
        return Outcome(_flag(representative_independence(_code(instance), _channel(instance))))


@register_check("weak_bound")
class WeakBoundCheck(CheckInterface):
    anchor = "tr Q(t) >= q^(C - R/(1-t)) and I(X_0; Y_~0(t)) >= C - R/(1-t) for 0 <= t < 1 - R/C"
    code_level = True
    GRID = 20

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        return _symmetric_code_instance(q, rng)

    def evaluate(self, instance: Instance) -> List[Outcome]:
        code, w = _code(instance), _channel(instance)
        a = analyze_coset(code, w)
        hyp = hypotheses(code, a.channel, a.capacity)
        if not hyp.hold:
            return [Outcome(None)]
        top = 1 - float(code.rate) / a.capacity
        out = []
        for j in range(self.GRID):
            t = top * j / self.GRID
            rep = weak_bound_check(code, w, t, analysis=a, assumptions=hyp)
            info = a.mutual_information_bound(t)
            out.append(Outcome(rep.margin))
            out.append(Outcome(info.mutual_information - info.lower_bound))
        return out


@register_check("coset_ser")
class CosetSerCheck(CheckInterface):
    anchor = "SER(X_0|Y_~0) <= 4 delta_avg/(1 - R/C) under its hypotheses; SER(t) nondecreasing, tr Q(t) nonincreasing, delta(1) = 0, delta(t) from posteriors equals (tr Q(t) - tr Q(t)^2)/q"
    code_level = True
    tolerance = 1e-12

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        return _symmetric_code_instance(q, rng)

    def evaluate(self, instance: Instance) -> List[Outcome]:
        code, w = _code(instance), _channel(instance)
        a = analyze_coset(code, w)
        grid = [Fraction(j, 10) for j in range(11)]
        sers = [a.ser(t) for t in grid]
        traces = [a.trace(t) for t in grid]
        out = [
            Outcome(min(float(b) - float(x) for x, b in zip(sers, sers[1:]))),
            Outcome(min(float(x) - float(b) for x, b in zip(traces, traces[1:]))),
            Outcome(-abs(a.delta(1))),
        ]
        for t in (Fraction(0), Fraction(1, 3), Fraction(1, 2)):
            out.append(Outcome(-abs(float(a.delta_from_definition(t)) - float(a.delta(t)))))
        rep = ser_hypotheses(code, w, a)
        if rep.bound is not None:
            out.append(Outcome(rep.bound - float(rep.ser_at_zero)))
        return out


@register_check("ser_chain")
class SerChainCheck(CheckInterface):
    anchor = "max_i SER(X_i|Y) = SER(X_0|Y) <= SER(X_0|Y_~0)"
    code_level = True

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        return _symmetric_code_instance(q, rng)

    def evaluate(self, instance: Instance) -> List[Outcome]:
        rep = ser_chain(_code(instance), _channel(instance))
        return [
            Outcome(_flag(rep.max_equals_first)),
            Outcome(float(rep.extrinsic) - float(rep.full_observation)),
        ]


@register_check("rate_cover")
class RateCoverCheck(CheckInterface):
    anchor = "delta_avg <= sum over B of E||Psi - E[Psi|Y_B]||^2 <= (2 ln q/lambda_min^2) sum over B of (H(X_B)/|B| - R)"
    code_level = True

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        return _symmetric_code_instance(q, rng)

    def evaluate(self, instance: Instance) -> List[Outcome]:
        code, w = _code(instance), _channel(instance)
        rep = efron_stein_decompose(code, w)
        out = [Outcome(float(rep.total) - float(rep.delta_avg))]
        for term, cover_term in zip(rep.terms, rep.cover.terms):
            if cover_term.transitive:
                out.append(Outcome(term.bound - float(term.integral)))
        if rep.cover.all_transitive:
            out.append(Outcome(rep.cover.bound - float(rep.delta_avg)))
        k = family_depth(code.q, code.m)
        if 0 < k < code.m:
            # the subset family is in use; its excesses sum to the closed form
            identity = rep.cover.rate_sum == rate_sum_bound(code.q, code.r, code.m).rate_sum
            out.append(Outcome(_flag(identity)))
        return out


@register_check("efron_stein")
class EfronSteinCheck(CheckInterface):
    anchor = "E||Z - E[Z|G]||^2 <= sum over A of E||Z - E[Z|G, Y_A]||^2 when every coordinate misses some A"
    tolerance = 1e-12

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        sizes = [int(v) for v in rng.integers(2, q + 2, size=3)]
        return {
            "q": q,
            "seed": int(rng.integers(2**31)),
            "sizes": sizes,
            "family": [[0, 1], [1, 2], [0, 2]],
        }

    def evaluate(self, instance: Instance) -> Outcome:
        rng = np.random.default_rng(int(instance["seed"]))
        rep = efron_stein_standalone(
            rng, sizes=instance["sizes"], family=instance["family"], n_groups=int(instance["q"])
        )
        return Outcome(rep.margin)


@register_check("exit_area")
class ExitAreaCheck(CheckInterface):
    anchor = "integral of I(X_0;Y_0|Y_S-0(t)) dt = I(X_S;Y_S)/|S| and integral of H(X_0|Y_S, X_S-0(t)) dt = H(X_S|Y_S)/|S|"
    code_level = True
    tolerance = 1e-10

    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        pool = CODE_POOL.get(q, [(1, 1)])
        r, m = pool[int(rng.integers(len(pool)))]
        w = _symmetric_channel(q, rng)
        return {"q": q, "r": r, "m": m, "channel": ch.channel_to_dict(w)}

    def evaluate(self, instance: Instance) -> List[Outcome]:
        code, w = _code(instance), _channel(instance)
        return [
            Outcome(-abs(area_check(code, w).difference)),
            Outcome(-abs(entropy_area_check(code, w).difference)),
        ]


# --- Suite ---


def _worst(outcomes: Sequence[Outcome]) -> Optional[Number]:
    margins = [o.margin for o in outcomes if o.margin is not None]
    if not margins:
        return None
    return min(margins, key=float)


def _failed(margin: Number, tolerance: float) -> bool:
    if isinstance(margin, Fraction):
        return margin < 0
    return float(margin) < -tolerance


def _evaluate(check: CheckInterface, instance: Instance) -> Optional[Number]:
    result = check.evaluate(instance)
    return _worst(result if isinstance(result, list) else [result])


def check_seed(seed: int, name: str) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, zlib.crc32(name.encode("utf-8"))])


def run_check(name: str, config: SuiteConfig) -> CheckReport:
    check = get_check(name)
    rng = np.random.default_rng(check_seed(config.seed, name))
    count = config.code_instances if check.code_level else config.instances
    start = time.perf_counter()
    worst: Optional[Number] = None
    failures: List[FailureRecord] = []
    n = skipped = 0
    for instance in check.instances(config.q_list, count, rng):
        n += 1
        margin = _evaluate(check, instance)
        if margin is None:
            skipped += 1
            continue
        if worst is None or float(margin) < float(worst):
            worst = margin
        if _failed(margin, check.tolerance):
            failures.append(
                FailureRecord(instance=instance, margin=format_number(margin), seed=config.seed)
            )
    outcome = "fail" if failures else "pass"
    checks_total.labels(check=name, outcome=outcome).inc()
    runtime = time.perf_counter() - start
    logger.info(
        json.dumps(
            {
                "event": "check_done",
                "check": name,
                "instances": n,
                "failures": len(failures),
                "duration_ms": runtime * 1000,
            }
        )
    )
    return CheckReport(
        check=name,
        anchor=check.anchor,
        instances=n,
        not_applicable=skipped,
        worst_margin=None if worst is None else format_number(worst),
        failures=failures,
        fixtures=check.fixtures(),
        seed=config.seed,
        runtime=runtime,
    )


def run_suite(config: SuiteConfig, workers: int = 1) -> List[CheckReport]:
    """One report per check, ordered by check name."""
    if not config.q_list:
        return []
    names = list_checks() if config.checks is None else sorted(set(config.checks))
    for name in names:
        get_check(name)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        reports = list(pool.map(lambda name: run_check(name, config), names))
    return sorted(reports, key=lambda r: r.check)


def suite_json(reports: Sequence[CheckReport]) -> str:
    """Canonical JSON without runtimes, stable across reruns."""
    return json.dumps([r.to_record() for r in reports], indent=2, sort_keys=True) + "\n"


# --- Adversarial search ---


@dataclass(frozen=True)
class SearchResult:
    check: str
    instance: Instance
    margin: Optional[Number]
    evaluations: int

    @property
    def passed(self) -> bool:
        return self.margin is None or not _failed(self.margin, get_check(self.check).tolerance)


def adversarial_search(
    name: str, budget: int, seed: int = 0, q_list: Optional[List[int]] = None
) -> SearchResult:
    """Random-restart hill climbing toward the smallest margin."""
    check = get_check(name)
    rng = np.random.default_rng(check_seed(seed, name))
    qs = q_list or [2, 3, 4, 5]
    best: Optional[Instance] = None
    best_margin: Optional[Number] = None
    evaluations = 0
    for _ in range(max(1, budget)):
        q = int(qs[int(rng.integers(len(qs)))])
        if best is not None and rng.random() < 0.7:
            candidate = check.perturb(best, rng)
        else:
            candidate = check.random_instance(q, rng)
        margin = _evaluate(check, candidate)
        evaluations += 1
        if margin is None:
            continue
        if best_margin is None or float(margin) < float(best_margin):
            best, best_margin = candidate, margin
    if best is None:
        best = check.random_instance(int(qs[0]), rng)
    return SearchResult(check=name, instance=best, margin=best_margin, evaluations=evaluations)
