"""The acceptance suite: fourteen end-to-end checks over the bundled configurations."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .boundary import (BoundaryModel, ball_words, furstenberg_entropy, furstenberg_entropy_hitting,
                       harmonic_residual, nearly_harmonic_residual, phi_bound_check,
                       random_cylinder_function, random_word, restriction_check, telescoping_check)
from .chain import (avoidance_tails, build_chain, conditional_avoidance_grid,
                    expected_return_time, frac_str, tail_rate_certificate)
from .config import RunConfig, bundled, bundled_names
from .entropy import corollary_check, entropy_sequence, smb_estimate
from .hitting import first_passage, sample_hits
from .measures import FinMeasure, random_rational_measure, srw

SEED = 20240521
SAMPLES = 100_000
KAC_TRIPLES = ("f2_index2", "z_3z", "f2_s3_index3")


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"[{verdict}] criterion {self.number:2d}: {self.title} ({self.seconds:.2f} s)"

    def to_json(self) -> dict:
        return {"number": self.number, "title": self.title, "ok": self.ok, "detail": self.detail}


def _random_generating_measures(cfg: RunConfig, count: int, rng: random.Random) -> list[FinMeasure]:
    """Random rational measures on the generators, their inverses and a few longer words."""
    model, _, action = cfg.build()
    base = [model.letter(x) for x in model.letters()]
    extra_pool = [a * b for a in base for b in base if (a * b).payload != model.identity_payload]
    out = []
    while len(out) < count:
        extra = rng.sample(extra_pool, rng.randint(0, min(3, len(extra_pool))))
        support = list({g.payload: g for g in base + extra}.values())
        out.append(random_rational_measure(model, support, rng))
    return out


def _sweep(count: int = 20, seed: int = SEED) -> dict[str, list[Fraction]]:
    rng = random.Random(seed)
    values = {}
    for name in KAC_TRIPLES:
        cfg = bundled(name)
        _, mu, action = cfg.build()
        found = [expected_return_time(build_chain(action, mu))]
        for nu in _random_generating_measures(cfg, count, rng):
            found.append(expected_return_time(build_chain(action, nu)))
        values[name] = found
    return values


def kac_exactness() -> tuple[bool, dict]:
    start = time.perf_counter()
    values = _sweep()
    elapsed = time.perf_counter() - start
    detail = {}
    ok = elapsed < 1.0
    for name, found in values.items():
        m = bundled(name).coset_action().m
        good = all(v == m for v in found)
        ok &= good
        detail[name] = {"index": m, "measures": len(found), "all_equal_index": good}
    detail["under_one_second"] = elapsed < 1.0
    return ok, detail


def mu_independence() -> tuple[bool, dict]:
    values = _sweep(seed=SEED + 1)
    distinct = {name: sorted({frac_str(v) for v in found}) for name, found in values.items()}
    ok = all(len(v) == 1 and v[0] == str(bundled(n).coset_action().m) for n, v in distinct.items())
    return ok, {"distinct_values": distinct}


def chain_certificates() -> tuple[bool, dict]:
    detail = {}
    for name in bundled_names():
        _, mu, action = bundled(name).build()
        detail[name] = build_chain(action, mu).certificates()
    return all(all(c.values()) for c in detail.values()), detail


def hitting_exactness() -> tuple[bool, dict]:
    _, mu, action = bundled("f2_index2").build()
    t = first_passage(action, mu, 2)
    theta = t.combined()
    e = mu.model.identity
    length2 = {p: x for p, x in theta.weights.items() if len(p) == 2}
    f2_ok = (theta[e] == Fraction(1, 4) and len(length2) == 12
             and all(x == Fraction(1, 16) for x in length2.values())
             and len(theta) == 13 and t.tail == 0)
    zcfg = bundled("z_2z")
    model, zmu, zaction = zcfg.build()
    zt = first_passage(zaction, zmu, 2)
    expected = {(-2,): Fraction(1, 4), (0,): Fraction(1, 2), (2,): Fraction(1, 4)}
    z_ok = dict(zt.combined().weights) == expected and zt.tail == 0
    return f2_ok and z_ok, {"f2_atoms": len(theta), "f2_tail": frac_str(t.tail),
                            "f2_ok": f2_ok, "z_theta": zt.to_json()["levels"], "z_ok": z_ok}


def abramov_exact() -> tuple[bool, dict]:
    start = time.perf_counter()
    model, mu, action = bundled("f2_index2").build()
    bm = BoundaryModel(model)
    h_mu = bm.value(furstenberg_entropy(bm, mu))
    ht = furstenberg_entropy_hitting(bm, first_passage(action, mu, 2))
    elapsed = time.perf_counter() - start
    ok = (ht.exact and h_mu == bm.value(Fraction(1, 2)) and ht.lower == bm.value(1)
          and ht.lower == h_mu * 2 and elapsed < 1.0)
    return ok, {"h_mu": h_mu.format(3), "h_theta": ht.lower.format(3), "exact": ht.exact,
                "under_one_second": elapsed < 1.0}


def nearly_harmonic() -> tuple[bool, dict]:
    model = bundled("f2_index2").model()
    bm, mu = BoundaryModel(model), srw(model)
    res = [nearly_harmonic_residual(bm, g, mu) for g in ball_words(bm, 3)]
    return all(r == 0 for r in res), {"elements": len(res),
                                      "nonzero": sum(1 for r in res if r != 0)}


def telescoping() -> tuple[bool, dict]:
    model, mu, action = bundled("f2_index2").build()
    bm = BoundaryModel(model)
    rows = telescoping_check(bm, mu, action, 6)
    cert = tail_rate_certificate(build_chain(action, mu))
    ok = all(r["equal"] and r["R_nonnegative"] and r["R_within_bound"] for r in rows)
    ok &= all(r["R"] == 0 for r in rows if r["n"] >= 2)
    ok &= all(r["R"] == 0 for r in rows if r["n"] >= cert.n0 and cert.bound(r["n"]) == 0)
    return ok, {"rows": [{"n": r["n"], "lhs": frac_str(r["lhs"]), "rhs": frac_str(r["rhs"]),
                          "R": frac_str(r["R"])} for r in rows]}


def phi_bound(count: int = 10_000, seed: int = SEED) -> tuple[bool, dict]:
    model, mu, _ = bundled("f2_index2").build()
    bm = BoundaryModel(model)
    rng = random.Random(seed)
    support = list(mu.weights)
    worst = math.inf
    ok = True
    for _ in range(count):
        steps = [support[rng.randrange(len(support))] for _ in range(rng.randint(1, 6))]
        holds, slack = phi_bound_check(bm, steps, mu, guard=1e-9)
        ok &= holds
        worst = min(worst, slack.nats)
    return ok, {"tuples": count, "min_slack_nats": round(worst, 12)}


def tail_bounds() -> tuple[bool, dict]:
    detail = {}
    ok = True
    for name in bundled_names():
        _, mu, action = bundled(name).build()
        chain = build_chain(action, mu)
        cert = tail_rate_certificate(chain, 50)
        tails = avoidance_tails(chain, 50)
        tails_ok = all(t == 0 or math.log(t) <= -cert.C * n + 1e-12
                       for n, t in enumerate(tails, start=1) if n >= cert.n0)
        grid = conditional_avoidance_grid(chain, cert, 20)
        grid_ok = all(r["ok"] for r in grid)
        ok &= tails_ok and grid_ok and cert.holds
        detail[name] = {"certificate": cert.to_json(), "tails_ok": tails_ok,
                        "grid_points": len(grid), "grid_ok": grid_ok}
    return ok, detail


def cocycle_and_stationarity(count: int = 10_000, seed: int = SEED) -> tuple[bool, dict]:
    model = bundled("f2_index2").model()
    bm, mu = BoundaryModel(model), srw(model)
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        g = random_word(bm, rng, rng.randint(0, 5))
        g1 = random_word(bm, rng, rng.randint(0, 5))
        w = random_word(bm, rng, len(g) + len(g1) + 1 + rng.randint(0, 3))
        failures += bm.cocycle_residual(g, g1, w) != 0
    defects = bm.stationarity_defects(mu, 4)
    return failures == 0 and not defects, {"cocycle_samples": count, "cocycle_failures": failures,
                                           "stationarity_defects": len(defects)}


def boundary_entropy_in_bracket(n_max: int = 8) -> tuple[bool, dict]:
    model = bundled("f2_index2").model()
    bm, mu = BoundaryModel(model), srw(model)
    h = bm.value(furstenberg_entropy(bm, mu))
    seq = entropy_sequence(mu, n_max, lower_certificate=h)
    ok = seq.n_max >= 6 and seq.consistent and seq.contains(h.nats)
    return ok, {"h_mu": h.format(3), "h_mu_nats": round(h.nats, 12), "n_max": seq.n_max,
                "bracket": [round(x, 12) for x in seq.bracket()],
                "cesaro": round(seq.cesaro(), 12)}


def corollary() -> tuple[bool, dict]:
    model, mu, action = bundled("f2_index2").build()
    bm = BoundaryModel(model)
    h = bm.value(furstenberg_entropy(bm, mu))
    ht = furstenberg_entropy_hitting(bm, first_passage(action, mu, 2))
    free = corollary_check(mu, action, 2, 8, 4, h, ht.lower)
    _, zmu, zaction = bundled("z_3z").build()
    z = corollary_check(zmu, zaction, 30, 12)
    lo, hi = z.walk.bracket()
    ilo, ihi = z.induced_bracket
    z_ok = (z.status == "consistent" and lo <= 0 <= hi and ilo <= 0 <= ihi
            and hi - lo < 0.2 and ihi - ilo < 0.2)
    ok = free.status == "consistent" and free.overlap and z_ok
    return ok, {"free": {"status": free.status,
                         "scaled_walk": [round(x, 12) for x in free.scaled_walk_bracket],
                         "induced": [round(x, 12) for x in free.induced_bracket]},
                "z_3z": {"status": z.status, "walk": [round(x, 12) for x in (lo, hi)],
                         "induced": [round(x, 12) for x in (ilo, ihi)],
                         "bias_nats": z.bias}}


def monte_carlo(samples: int = SAMPLES, seed: int = SEED) -> tuple[bool, dict]:
    detail = {}
    ok = True
    for name in KAC_TRIPLES:
        model, mu, action = bundled(name).build()
        hs = sample_hits(action, mu, samples, seed)
        mean, se = hs.tau_mean()
        t = first_passage(action, mu, 12)
        theta = t.combined()
        atoms = []
        for g, lo in sorted(theta.items(), key=lambda kv: (-kv[1], kv[0].word))[:3]:
            f, fse = hs.atom_frequency(g)
            dist = max(float(lo) - f, f - float(lo + t.tail), 0.0)
            atoms.append((g.word, round(f, 6), dist <= 4 * fse))
        tau_ok = abs(mean - action.m) <= 4 * se
        ok &= tau_ok and all(a[2] for a in atoms)
        detail[name] = {"tau_mean": round(mean, 6), "stderr": round(se, 6), "tau_ok": tau_ok,
                        "atoms": atoms}
    for name in ("f2_index2", "z_3z"):
        _, mu, _ = bundled(name).build()
        est = smb_estimate(mu, 2, samples, seed)
        ok &= est.within()
        detail[f"smb_{name}"] = est.to_json()
    return ok, detail


def harmonic_correspondence(count: int = 20, seed: int = SEED) -> tuple[bool, dict]:
    model, mu, action = bundled("f2_index2").build()
    bm = BoundaryModel(model)
    rng = random.Random(seed)
    ball = list(ball_words(bm, 2))
    residual_ok = True
    bracket_ok = True
    isometry_ok = True
    s3 = bundled("f2_s3_index3").coset_action()
    checked = 0
    for _ in range(count):
        f = random_cylinder_function(bm, rng, 2)
        residual_ok &= all(harmonic_residual(bm, f, g, mu) == 0 for g in ball)
        for act, N in ((action, 4), (s3, 6)):
            members = [model.element(g) for g in ball if act.contains(model.element(g))][:4]
            for gamma in members:
                rc = restriction_check(bm, f, gamma, act, mu, N)
                bracket_ok &= rc.holds
                checked += 1
            g = model.element(ball[rng.randrange(len(ball))])
            isometry_ok &= restriction_check(bm, f, g, act, mu, N).sup_preserved
    ok = residual_ok and bracket_ok and isometry_ok
    return ok, {"functions": count, "ball": len(ball), "harmonic": residual_ok,
                "restriction_checks": checked, "restriction_bracket": bracket_ok,
                "sup_preserved": isometry_ok}


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, dict]]]] = [
    (1, "expected return time equals the index (exact, < 1 s)", kac_exactness),
    (2, "return time is independent of the step measure", mu_independence),
    (3, "coset chain certificates", chain_certificates),
    (4, "exact hitting measures", hitting_exactness),
    (5, "Furstenberg entropy of the hitting measure is index times h_mu", abramov_exact),
    (6, "phi is nearly harmonic on the radius-3 ball", nearly_harmonic),
    (7, "telescoping identity for n = 1..6", telescoping),
    (8, "phi(g1...gn) <= -sum log mu(gi)", phi_bound),
    (9, "avoidance tail certificate and conditional grid", tail_bounds),
    (10, "cocycle relation and stationarity of the harmonic measure", cocycle_and_stationarity),
    (11, "boundary entropy lies in the random-walk entropy bracket", boundary_entropy_in_bracket),
    (12, "induced-walk entropy bracket against index times h", corollary),
    (13, "Monte Carlo agrees with exact values", monte_carlo),
    (14, "Furstenberg transforms are harmonic and determined on the subgroup",
     harmonic_correspondence),
]


def run_criterion(number: int) -> CriterionResult:
    for n, title, fn in CRITERIA:
        if n == number:
            start = time.perf_counter()
            ok, detail = fn()
            return CriterionResult(n, title, bool(ok), detail, time.perf_counter() - start)
    raise KeyError(number)


def run_all() -> list[CriterionResult]:
    return [run_criterion(n) for n, _, _ in CRITERIA]
