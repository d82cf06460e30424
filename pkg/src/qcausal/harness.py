"""Config-driven parameter sweeps and their CSV/report output.

A config is a JSON document with the sections ``scenario``, ``sweep``,
``pathway``, ``tolerances`` and ``output``. Angles are given in units of pi
(``theta_over_pi``), so 3pi/8 is written 0.375.
"""

import csv
import datetime
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import linalg, model
from .choi import (
    DESCRIPTIONS,
    SUPPORT_NOTE,
    CausalVerdict,
    Verdict,
    analyze_pdm,
    classify,
    infer_causal_structure,
)
from .pdm import ExpectationTable, build_pdm, generate_table, reduce_pdm
from .scattering import generate_table_scattering
from .tolerances import DEFAULT


class ConfigError(ValueError):
    """The experiment config cannot be parsed or is out of range."""


class NumericalError(RuntimeError):
    """The pipeline failed at a specific sweep point."""


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.parameter not in ("lambda", "theta"):
            raise ConfigError(f"sweep parameter must be 'lambda' or 'theta', got {self.parameter!r}")
        if not isinstance(self.steps, int) or self.steps < 1:
            raise ConfigError(f"steps must be a positive integer, got {self.steps!r}")
        if self.start > self.stop:
            raise ConfigError(f"sweep start {self.start} exceeds stop {self.stop}")
        # theta is expressed in units of pi
        if self.start < 0 or self.stop > 1:
            raise ConfigError(f"{self.parameter} sweep range must lie within [0, 1]")

    @property
    def column(self) -> str:
        return "lambda" if self.parameter == "lambda" else "theta_over_pi"

    def values(self) -> list:
        if self.steps == 1:
            return [float(self.start)]
        step = (self.stop - self.start) / (self.steps - 1)
        vals = [self.start + k * step for k in range(self.steps - 1)] + [self.stop]
        return [float(v) for v in vals]


@dataclass(frozen=True)
class ReportRow:
    param: str
    value: float
    eigenvalues: tuple
    f_R: float
    f_MAB: float
    f_MBA: float
    verdict: Verdict
    flags: tuple = field(default=())


@dataclass
class RunConfig:
    scenario: dict
    sweep: SweepSpec
    pathway: str = "closed_form"
    epsilon: float = DEFAULT.verdict
    atol: float = DEFAULT.exact
    csv_path: Path | None = None
    report_path: Path | None = None
    source: str = "<dict>"


# -- config parsing ---------------------------------------------------------


def _matrix(spec):
    if isinstance(spec, dict):
        real = np.asarray(spec.get("real", 0.0), dtype=float)
        imag = np.asarray(spec.get("imag", np.zeros_like(real)), dtype=float)
        return real + 1j * imag
    return np.asarray(spec, dtype=complex)


def build_state(spec, lam=None):
    """Density matrix from a config state spec."""
    if isinstance(spec, str):
        if spec == "lambda_plus":
            spec = {"type": "lambda_plus"}
        elif spec.startswith("bell:"):
            spec = {"type": "bell", "which": spec[5:]}
        elif spec == "maximally_mixed":
            spec = {"type": "maximally_mixed"}
        elif spec == "+":
            return model.lambda_plus_state(1.0)
        elif set(spec) <= {"0", "1"}:
            return model.basis_state(spec)
        else:
            raise ConfigError(f"unknown state shorthand {spec!r}")
    if isinstance(spec, list):
        return linalg.tensor(*(build_state(s, lam) for s in spec))
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"state spec must be a string, list or object with 'type': {spec!r}")
    kind = spec["type"]
    if kind == "lambda_plus":
        value = spec.get("lambda", lam)
        if value is None:
            raise ConfigError("lambda_plus state needs a lambda value")
        return model.lambda_plus_state(float(value))
    if kind == "basis":
        return model.basis_state(spec["bits"])
    if kind == "bell":
        return model.bell_state(spec.get("which", "phi+"))
    if kind == "maximally_mixed":
        d = 2 ** int(spec.get("qubits", 1))
        return np.eye(d, dtype=complex) / d
    if kind == "product":
        return linalg.tensor(*(build_state(s, lam) for s in spec["factors"]))
    if kind == "mix":
        weights = [float(w) for w in spec["weights"]]
        return sum(w * build_state(s, lam) for w, s in zip(weights, spec["states"]))
    if kind == "matrix":
        return _matrix(spec["matrix"])
    raise ConfigError(f"unknown state type {kind!r}")


def build_channel(spec, theta=None):
    """Channel from a config channel spec; ``theta`` is in radians."""
    if isinstance(spec, str):
        spec = {"type": spec}
    if isinstance(spec, list):
        return model.tensor_channels(*(build_channel(s, theta) for s in spec))
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"channel spec must be a string, list or object with 'type': {spec!r}")
    kind = spec["type"]
    if kind == "identity":
        return model.identity_channel(2 ** int(spec.get("qubits", 1)))
    if kind == "measure_prepare":
        return model.measure_prepare_channel()
    if kind == "partial_swap":
        th = math.pi * float(spec["theta_over_pi"]) if "theta_over_pi" in spec else theta
        if th is None:
            raise ConfigError("partial_swap channel needs theta_over_pi")
        ancilla = build_state(spec["ancilla"]) if "ancilla" in spec else None
        return model.partial_swap_channel(th, ancilla)
    if kind == "unitary":
        return model.unitary_channel(_matrix(spec["matrix"]))
    if kind == "kraus":
        return model.Channel.from_kraus([_matrix(k) for k in spec["operators"]])
    if kind == "tensor":
        c = model.tensor_channels(*(build_channel(s, theta) for s in spec["factors"]))
        if "output_order" in spec:
            dims = [2] * model.num_qubits(c.dim_out)
            c = model.permute_output(c, dims, spec["output_order"])
        return c
    raise ConfigError(f"unknown channel type {kind!r}")


def build_scenario(spec: dict, lam=None, theta=None) -> model.ScenarioConfig:
    """ScenarioConfig at one parameter point (``theta`` in radians)."""
    kind = spec.get("kind", "cause_effect")
    lam = spec.get("lambda") if lam is None else lam
    if theta is None and "theta_over_pi" in spec:
        theta = math.pi * float(spec["theta_over_pi"])
    if lam is not None and not 0 <= lam <= 1:
        raise ConfigError(f"lambda must lie in [0, 1], got {lam}")
    if theta is not None and not 0 <= theta <= math.pi + 1e-12:
        raise ConfigError(f"theta must lie in [0, pi], got {theta}")
    rho = channel = joint = None
    if kind in ("cause_effect", "mixture"):
        rho = build_state(spec.get("initial", "lambda_plus"), lam)
        channel = build_channel(spec.get("channel", "measure_prepare"), theta)
    if kind in ("common_cause", "mixture"):
        if "joint" not in spec:
            raise ConfigError(f"{kind} scenario needs a 'joint' state")
        joint = build_state(spec["joint"], lam)
    p = float(spec.get("p", 1.0))
    return model.ScenarioConfig(kind, rho=rho, channel=channel, joint=joint, p=p)


def parse_config(data: dict, base_dir: Path | None = None, source="<dict>") -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - {"scenario", "sweep", "pathway", "tolerances", "output"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    if "scenario" not in data:
        raise ConfigError("config needs a 'scenario' section")
    scen = data["scenario"]
    sw = data.get("sweep")
    if sw is None:
        param = "theta" if "theta_over_pi" in scen and "lambda" not in scen else "lambda"
        start = scen.get("lambda", 0.0) if param == "lambda" else scen["theta_over_pi"]
        sweep = SweepSpec(param, float(start), float(start), 1)
    else:
        try:
            sweep = SweepSpec(sw["parameter"], float(sw["start"]), float(sw["stop"]), sw.get("steps", 1))
        except KeyError as exc:
            raise ConfigError(f"sweep section is missing {exc}") from None
    pathway = data.get("pathway", "closed_form")
    if pathway not in ("closed_form", "scattering"):
        raise ConfigError(f"pathway must be closed_form or scattering, got {pathway!r}")
    tol = data.get("tolerances", {})
    out = data.get("output", {})
    base = base_dir or Path(".")

    def resolve(p):
        return None if p is None else (base / p if not Path(p).is_absolute() else Path(p))

    return RunConfig(
        scenario=scen,
        sweep=sweep,
        pathway=pathway,
        epsilon=float(tol.get("epsilon", DEFAULT.verdict)),
        atol=float(tol.get("exact", DEFAULT.exact)),
        csv_path=resolve(out.get("csv")),
        report_path=resolve(out.get("report")),
        source=source,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(data, path.parent, str(path))


# -- running ----------------------------------------------------------------


def evaluate_point(cfg: RunConfig, value: float) -> ReportRow:
    lam = theta = None
    if cfg.sweep.parameter == "lambda":
        lam = value
    else:
        theta = math.pi * value
    try:
        scenario = build_scenario(cfg.scenario, lam=lam, theta=theta)
    except ConfigError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"{cfg.sweep.column}={value}: invalid scenario: {exc}") from exc
    try:
        if cfg.pathway == "scattering":
            table = generate_table_scattering(scenario)
        else:
            table = generate_table(scenario)
        r = build_pdm(table, cfg.atol)
        reduce = cfg.scenario.get("reduce")
        if reduce:
            r = reduce_pdm(r, reduce["keep_t1"], reduce["keep_t2"])
        analysis = analyze_pdm(r, cfg.epsilon, cfg.atol)
        evals, _ = linalg.hermitian_eigen(r.matrix)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise NumericalError(f"{cfg.sweep.column}={value}: {exc}") from exc
    v = analysis.verdict
    f = [max(0.0, x) for x in (v.f_R, v.f_AB, v.f_BA)]
    return ReportRow(
        cfg.sweep.column,
        value,
        tuple(float(e) for e in evals),
        *f,
        classify(*f, cfg.epsilon),
        v.flags,
    )


def run_config(cfg: RunConfig) -> list:
    rows = [evaluate_point(cfg, v) for v in cfg.sweep.values()]
    return sorted(rows, key=lambda r: r.value)


def run_scenario(config_path) -> list:
    """One ReportRow per sweep point of the config at ``config_path``."""
    return run_config(load_config(config_path))


# -- output -----------------------------------------------------------------


def csv_header(n_eigen: int) -> list:
    return ["param", "value"] + [f"E{k}" for k in range(1, n_eigen + 1)] + [
        "f_R", "f_MAB", "f_MBA", "verdict",
    ]


def emit_csv(rows, path):
    """Write rows sorted by sweep value; floats use their shortest exact repr."""
    if not rows:
        raise ValueError("no rows to write")
    rows = sorted(rows, key=lambda r: r.value)
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(csv_header(len(rows[0].eigenvalues)))
            for r in rows:
                w.writerow(
                    [r.param, repr(r.value)]
                    + [repr(e) for e in r.eigenvalues]
                    + [repr(r.f_R), repr(r.f_MAB), repr(r.f_MBA), r.verdict.value]
                )
    except OSError as exc:
        raise OSError(f"cannot write CSV {path}: {exc}") from exc


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        n_eigen = len(header) - 6
        rows = []
        for rec in reader:
            rows.append(ReportRow(
                rec[0],
                float(rec[1]),
                tuple(float(x) for x in rec[2:2 + n_eigen]),
                float(rec[2 + n_eigen]),
                float(rec[3 + n_eigen]),
                float(rec[4 + n_eigen]),
                Verdict(rec[5 + n_eigen]),
            ))
    return rows


def format_report(rows, cfg: RunConfig | None = None) -> str:
    lines = ["Causal inference sweep report", "=" * 29]
    if cfg is not None:
        lines += [
            f"config: {cfg.source}",
            f"scenario: {cfg.scenario.get('kind', 'cause_effect')}",
            f"pathway: {cfg.pathway}",
            f"epsilon: {cfg.epsilon:g}",
        ]
    lines.append(f"generated: {datetime.datetime.now().isoformat(timespec='seconds')}")
    lines.append("")
    lines.append(f"{'value':>10}  {'f(R)':>10}  {'f(M_AB)':>10}  {'f(M_BA)':>10}  verdict")
    for r in rows:
        lines.append(
            f"{r.value:>10.6g}  {r.f_R:>10.4g}  {r.f_MAB:>10.4g}  {r.f_MBA:>10.4g}  {r.verdict.value}"
        )
    lines.append("")
    for tag in Verdict:
        hits = [f"{r.value:.6g}" for r in rows if r.verdict == tag]
        if hits:
            lines.append(f"{tag.value}: {DESCRIPTIONS[tag]}")
            lines.append(f"  at {rows[0].param} = {', '.join(hits)}")
    flagged = [f"{r.value:.6g}" for r in rows if r.flags]
    if flagged:
        lines.append(f"note: {SUPPORT_NOTE} (at {', '.join(flagged)})")
    return "\n".join(lines) + "\n"


def emit_report(rows, path, cfg: RunConfig | None = None):
    if not rows:
        raise ValueError("no rows to report")
    path = Path(path)
    try:
        path.write_text(format_report(rows, cfg))
    except OSError as exc:
        raise OSError(f"cannot write report {path}: {exc}") from exc


def import_lab_table(path, eps: float) -> CausalVerdict:
    """Verdict for a measured table; ``eps`` sets both the range check and the threshold."""
    table = ExpectationTable.from_csv(path)
    atol = max(eps, DEFAULT.exact)
    table.check(atol)
    return infer_causal_structure(table, eps, atol)
