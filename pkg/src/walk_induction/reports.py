"""Command reports: each returns a JSON-ready dict, an exit status and an optional table."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .boundary import (BoundaryModel, furstenberg_entropy, furstenberg_entropy_hitting,
                       nearly_harmonic_residual, phi_bound_check, quotient_furstenberg_entropy,
                       random_word, telescoping_check)
from .chain import (avoidance_tails, build_chain, conditional_avoidance_grid,
                    expected_return_time, frac_str, hitting_times_to_zero,
                    return_time_distribution, tail_rate_certificate)
from .config import RunConfig
from .entropy import corollary_check, entropy_sequence, smb_estimate
from .errors import UnsupportedOperationError
from .groups import FreeGroup
from .hitting import first_passage, sample_hits, theta_from, translation_identity_holds
from .logvalue import LogValue
from .measures import srw

OK, FAILED, CONFIG_ERROR, SUPPORT_CAP, INCONCLUSIVE = 0, 1, 2, 3, 4


@dataclass
class Outcome:
    report: dict
    status: int = OK
    table: list[dict] = field(default_factory=list)


def combine(statuses) -> int:
    """Most severe status first: config errors, failed identities, support cap, inconclusive."""
    statuses = set(statuses)
    for s in (CONFIG_ERROR, FAILED, SUPPORT_CAP, INCONCLUSIVE):
        if s in statuses:
            return s
    return OK


def _status(ok: bool) -> int:
    return OK if ok else FAILED


def _boundary_for(cfg: RunConfig) -> BoundaryModel | None:
    model, mu, _ = cfg.build()
    if not isinstance(model, FreeGroup) or model.rank < 2 or mu != srw(model):
        return None
    return BoundaryModel(model)


# --- kac ---------------------------------------------------------------------


def kac(cfg: RunConfig) -> Outcome:
    _, mu, action = cfg.build()
    chain = build_chain(action, mu)
    e_tau = expected_return_time(chain)
    certs = chain.certificates()
    ok = e_tau == action.m and all(certs.values())
    report = {"command": "kac", "config": cfg.name, "index": action.m, "E_tau": frac_str(e_tau),
              "kac_holds": e_tau == action.m, "certificates": certs,
              "hitting_times": [frac_str(x) for x in hitting_times_to_zero(chain)],
              "chain": chain.to_json(), "ok": ok}
    table = [{"from": i, "to": j, "p": frac_str(x)}
             for i, row in enumerate(chain.P) for j, x in enumerate(row)]
    return Outcome(report, _status(ok), table)


# --- hit ---------------------------------------------------------------------


def hit(cfg: RunConfig, samples: int | None = None) -> Outcome:
    model, mu, action = cfg.build()
    p = cfg.params
    chain = build_chain(action, mu)
    trunc = first_passage(action, mu, p.N, p.support_cap)
    exact_masses = return_time_distribution(chain, p.N)
    masses_agree = trunc.masses() == exact_masses
    report = {"command": "hit", "config": cfg.name, "index": action.m,
              "truncation": trunc.to_json(), "masses_match_chain": masses_agree}
    ok = masses_agree
    theta = trunc.combined()
    shift = next((g for g in theta.support() if g.payload != model.identity_payload), None)
    if shift is not None:
        shifted = theta_from(shift, action, mu, p.N, p.support_cap)
        same = translation_identity_holds(trunc, shifted)
        report["translation_identity"] = {"gamma": shift.word, "holds": same}
        ok &= same
    samples = p.samples if samples is None else samples
    if samples > 0:
        hs = sample_hits(action, mu, samples, p.seed, p.workers)
        mean, se = hs.tau_mean()
        tau_ok = abs(mean - action.m) <= 4 * se + 1e-12
        atoms = []
        heavy = sorted(theta.items(), key=lambda kv: (-kv[1], kv[0].word))[:5]
        for g, lo in heavy:
            f, fse = hs.atom_frequency(g)
            hi = lo + trunc.tail
            dist = max(float(lo) - f, f - float(hi), 0.0)
            atoms.append({"g": g.word, "frequency": round(f, 12), "stderr": round(fse, 12),
                          "exact_lower": frac_str(lo), "exact_upper": frac_str(hi),
                          "within_4se": dist <= 4 * fse + 1e-12})
        mc_ok = tau_ok and all(a["within_4se"] for a in atoms)
        report["monte_carlo"] = {"samples": samples, "seed": p.seed, "tau_mean": round(mean, 12),
                                 "tau_stderr": round(se, 12), "tau_within_4se": tau_ok,
                                 "atoms": atoms}
        ok &= mc_ok
    report["ok"] = ok
    table = [{"n": n, "g": model.format_payload(q), "theta": frac_str(x)}
             for n, lv in enumerate(trunc.levels, start=1)
             for q, x in sorted(lv.weights.items(), key=lambda kv: (len(kv[0]), kv[0]))]
    return Outcome(report, _status(ok), table)


# --- tails -------------------------------------------------------------------


def tails(cfg: RunConfig) -> Outcome:
    _, mu, action = cfg.build()
    p = cfg.params
    chain = build_chain(action, mu)
    cert = tail_rate_certificate(chain, p.tails_n_max)
    ts = avoidance_tails(chain, p.tails_n_max)
    grid = conditional_avoidance_grid(chain, cert, p.grid_n_max)
    failures = [dict(r, probability=frac_str(r["probability"])) for r in grid if not r["ok"]]
    ok = cert.holds and not failures
    report = {"command": "tails", "config": cfg.name, "certificate": cert.to_json(),
              "tails": [frac_str(t) for t in ts], "grid_points": len(grid),
              "grid_failures": failures, "ok": ok}
    table = [{"n": n, "tail": frac_str(t), "tail_float": round(float(t), 15),
              "bound": round(cert.bound(n), 15) if n >= cert.n0 else None}
             for n, t in enumerate(ts, start=1)]
    return Outcome(report, _status(ok), table)


# --- boundary ----------------------------------------------------------------


def boundary(cfg: RunConfig, tuples: int = 1000, cocycles: int = 1000) -> Outcome:
    model, mu, action = cfg.build()
    p = cfg.params
    bm = _boundary_for(cfg)
    if bm is None:
        raise UnsupportedOperationError(
            "boundary needs simple random walk on a free group of rank >= 2")
    rng = random.Random(p.seed)
    h = furstenberg_entropy(bm, mu)
    unit = bm.unit
    residuals = [nearly_harmonic_residual(bm, g, mu) for g in model.ball(p.boundary_radius)]
    stationarity = bm.stationarity_defects(mu, 4)
    trunc = first_passage(action, mu, p.N, p.support_cap)
    ht = furstenberg_entropy_hitting(bm, trunc)
    target = bm.value(h) * action.m
    if ht.exact:
        abramov_ok = ht.lower == target
    else:
        abramov_ok = ht.contains(target)
    tele = telescoping_check(bm, mu, action, min(p.N, 6), p.support_cap)
    tele_ok = all(r["equal"] and r["R_nonnegative"] and r["R_within_bound"] for r in tele)
    support = list(mu.weights)
    worst = math.inf
    bound_ok = True
    for _ in range(tuples):
        steps = [support[rng.randrange(len(support))] for _ in range(rng.randint(1, 6))]
        holds, slack = phi_bound_check(bm, steps, mu)
        bound_ok &= holds
        worst = min(worst, slack.nats)
    bad_cocycle = 0
    for _ in range(cocycles):
        g = random_word(bm, rng, rng.randint(0, 4))
        g1 = random_word(bm, rng, rng.randint(0, 4))
        w = random_word(bm, rng, len(g) + len(g1) + 1 + rng.randint(0, 2))
        bad_cocycle += bm.cocycle_residual(g, g1, w) != 0
    quotient = quotient_furstenberg_entropy(action, mu)
    checks = {
        "cylinder_additivity": bm.additivity_holds(4),
        "stationarity_depth4": not stationarity,
        "nearly_harmonic": all(r == 0 for r in residuals),
        "abramov": abramov_ok,
        "telescoping": tele_ok,
        "phi_bound": bound_ok,
        "cocycle_relation": bad_cocycle == 0,
        "quotient_phi_zero": quotient.is_zero(),
    }
    ok = all(checks.values())
    report = {
        "command": "boundary", "config": cfg.name, "unit": f"log {unit}",
        "phi_table": bm.phi_table(p.boundary_radius),
        "h_mu": bm.value(h).format(unit), "h_mu_nats": round(bm.value(h).nats, 12),
        "h_theta": ht.to_json(), "index": action.m,
        "index_times_h_mu": target.format(unit),
        "nearly_harmonic": {"radius": p.boundary_radius, "elements": len(residuals),
                            "max_abs_residual": frac_str(max(abs(r) for r in residuals))},
        "telescoping": [{"n": r["n"], "lhs": frac_str(r["lhs"]), "rhs": frac_str(r["rhs"]),
                         "R": frac_str(r["R"]), "R_bound": round(r["R_bound"], 12),
                         "equal": r["equal"]} for r in tele],
        "phi_bound": {"tuples": tuples, "min_slack_nats": round(worst, 12), "holds": bound_ok},
        "cocycle": {"samples": cocycles, "failures": bad_cocycle},
        "quotient_h_mu": quotient.format(),
        "checks": checks, "ok": ok,
    }
    table = [dict(row) for row in bm.phi_table(p.boundary_radius)]
    return Outcome(report, _status(ok), table)


# --- entropy -----------------------------------------------------------------


def _walk_lower(cfg: RunConfig) -> LogValue | None:
    bm = _boundary_for(cfg)
    if bm is None:
        return None
    return bm.value(furstenberg_entropy(bm, cfg.mu()))


def entropy(cfg: RunConfig, samples: int | None = None) -> Outcome:
    _, mu, _ = cfg.build()
    p = cfg.params
    lower = _walk_lower(cfg)
    seq = entropy_sequence(mu, p.n_max, p.support_cap, lower)
    samples = p.samples if samples is None else samples
    report = {"command": "entropy", "config": cfg.name, "seed": p.seed,
              "sequence": seq.to_json()}
    ok = seq.consistent
    if samples > 0:
        est = smb_estimate(mu, min(p.smb_n, seq.n_max), samples, p.seed, workers=p.workers)
        report["smb"] = est.to_json()
        ok &= est.within()
    report["ok"] = ok
    status = _status(ok)
    if ok and seq.truncated:
        status = SUPPORT_CAP
    d = seq.increments()
    table = [{"n": n, "H": round(h.nats, 12), "D": round(d[n - 1], 12),
              "cesaro": round(h.nats / n, 12)} for n, h in enumerate(seq.H, start=1)]
    return Outcome(report, status, table)


# --- abramov -----------------------------------------------------------------


def abramov(cfg: RunConfig) -> Outcome:
    _, mu, action = cfg.build()
    p = cfg.params
    k = kac(cfg)
    report = {"command": "abramov", "config": cfg.name, "index": action.m,
              "kac": {"E_tau": k.report["E_tau"], "holds": k.report["kac_holds"]}}
    ok = k.report["kac_holds"]
    bm = _boundary_for(cfg)
    walk_lower = induced_lower = None
    if bm is not None:
        h = bm.value(furstenberg_entropy(bm, mu))
        ht = furstenberg_entropy_hitting(bm, first_passage(action, mu, p.N, p.support_cap))
        target = h * action.m
        holds = ht.lower == target if ht.exact else ht.contains(target)
        report["furstenberg"] = {"h_mu": h.format(bm.unit), "h_theta": ht.to_json(),
                                 "index_times_h_mu": target.format(bm.unit), "holds": holds}
        ok &= holds
        walk_lower, induced_lower = h, ht.lower
    cor = corollary_check(mu, action, p.N, p.n_max, p.n_max_induced, walk_lower, induced_lower,
                          p.max_bias, p.support_cap)
    report["corollary"] = cor.to_json()
    report["ok"] = ok and cor.status == "consistent"
    if not ok or cor.status == "inconsistent":
        status = FAILED
    elif cor.status == "inconclusive":
        status = INCONCLUSIVE
    elif cor.walk.truncated or cor.induced.truncated:
        status = SUPPORT_CAP
    else:
        status = OK
    table = [{"side": side, "lower": round(lo, 12), "upper": round(hi, 12)}
             for side, (lo, hi) in (("index_times_walk", cor.scaled_walk_bracket),
                                    ("induced", cor.induced_bracket))]
    return Outcome(report, status, table)


COMMANDS = {"kac": kac, "hit": hit, "tails": tails, "boundary": boundary,
            "entropy": entropy, "abramov": abramov}


def verify_config(cfg: RunConfig) -> Outcome:
    """Every command that applies to the configuration."""
    parts = {}
    statuses = []
    for name, fn in COMMANDS.items():
        if name == "boundary" and _boundary_for(cfg) is None:
            parts[name] = {"skipped": "not simple random walk on a free group of rank >= 2"}
            continue
        out = fn(cfg)
        parts[name] = {"status": out.status, "ok": out.report.get("ok")}
        statuses.append(out.status)
    status = combine(statuses)
    table = [{"config": cfg.name, "command": n, **v} for n, v in parts.items()]
    return Outcome({"config": cfg.name, "commands": parts, "status": status}, status, table)
