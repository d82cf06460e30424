"""Quick derived-oracle checks runnable without pytest (``qcausal selftest``)."""

import math

import numpy as np

from . import linalg, model
from .choi import Verdict, extract_choi, infer_causal_structure
from .pdm import build_pdm, generate_table, negativity
from .scattering import generate_table_scattering


def _swap_half():
    r = build_pdm(generate_table(model.ScenarioConfig(
        "cause_effect", rho=np.eye(2) / 2, channel=model.identity_channel())))
    ok = np.max(np.abs(r.matrix - linalg.swap_operator(2) / 2)) < 1e-12
    return ok and abs(negativity(r.matrix) - 1) < 1e-9


def _decohering_closed_form():
    for lam in np.linspace(0, 1, 11):
        r = build_pdm(generate_table(model.decohering_scenario(lam)))
        evals = np.linalg.eigvalsh(r.matrix)
        brute = np.sum(np.abs(evals)) - np.sum(evals)
        if abs(brute - (math.sqrt(1 + lam**2) - 1)) > 1e-9:
            return False
    return True


def _pathways():
    for sc in (model.decohering_scenario(0.9), model.partial_swap_scenario(0.7, 3 * math.pi / 8)):
        a, b = generate_table(sc), generate_table_scattering(sc)
        if max(abs(a.values[k] - b.values[k]) for k in a.values) > 1e-10:
            return False
    return True


def _choi_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(10):
        c = model.random_channel(2, rng)
        rho = model.random_density_matrix(2, rng)
        r = build_pdm(generate_table(model.ScenarioConfig("cause_effect", rho=rho, channel=c)))
        rec = extract_choi(r)
        if np.max(np.abs(rec.choi - model.choi_of_channel(c))) > 1e-8 or rec.residual > 1e-9:
            return False
    return True


def _verdicts():
    fwd = infer_causal_structure(generate_table(model.decohering_scenario(0.7)))
    classical = infer_causal_structure(generate_table(model.decohering_scenario(0.0)))
    return fwd.tag == Verdict.A_TO_B and classical.tag == Verdict.COMMON_CAUSE


CHECKS = [
    ("identity channel on I/2 gives SWAP/2 with f(R) = 1", _swap_half),
    ("decohering f(R) equals sqrt(1 + lambda^2) - 1", _decohering_closed_form),
    ("scattering circuit matches closed-form correlators", _pathways),
    ("Choi reconstruction recovers random channels", _choi_round_trip),
    ("decohering verdicts: AtoB at 0.7, CommonCause at 0", _verdicts),
]


def run(out=print) -> bool:
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok = bool(fn())
        except Exception as exc:  # report and keep going
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        all_ok &= ok
        out(f"{'PASS' if ok else 'FAIL'}  {name}")
    return all_ok
