"""Command-line interface.

    itmflow solve sakiadis --finder newton --h0 2.5
    itmflow topfer --checkpoints 4,6 --fixed-step 0.1
    itmflow gamma-scan moving --b -0.4 --range 1:150 --samples 32
    itmflow branches moving --b -0.25
    itmflow continuation --start-beta -0.1988
    itmflow series-check --eta-max 0.5
    itmflow rubel-bound --M 4,6
    itmflow oracle sakiadis --s-bracket -0.5:-0.4 --eta-inf 13.110432

Exit status: 0 when the run converged, 2 for a clean diagnosis (no sign
change of Gamma, root finder gave up, continuation stalled, invalid oracle
bracket), 1 for usage and configuration errors.

Every long option can also be given in a config file (``--config FILE``) as
``key = value`` with the flag name as key (``eta-inf`` or ``eta_inf``); ``#``
starts a comment. Flags override the file, the file overrides the defaults.
Results are written when ``--output`` is given, or into the directory named
by ``ITMFLOW_OUTPUT_DIR``.
"""

from __future__ import annotations

import argparse
import dataclasses
import difflib
import math
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .engine import (
    ContinuationStalled,
    Newton,
    NotConverged,
    RegulaFalsi,
    Secant,
    beta_min_continuation,
    boundary_residuals,
    gamma_profile,
    itm_solve,
    solve_all_branches,
    topfer_solve,
)
from .groups import DomainError
from .ivp import IntegratorConfig, integrate
from .oracles import (
    BlowUpInsideBracket,
    blasius_series,
    rubel_error_bound,
    shooting_oracle,
    solution_on_grid,
    truncated_blasius,
)
from .problems import blasius, falkner_skan, moving_surface, physical_initial_state, physical_system, sakiadis, slip
from .results import ResultDocument, iteration_table, solution_table, write_results
from .roots import InvalidBracket, RootConfig

__all__ = ["ConfigError", "RunConfig", "UsageError", "load_config", "main", "run_command"]

EXIT_OK, EXIT_USAGE, EXIT_DIAGNOSIS = 0, 1, 2
OUTPUT_ENV = "ITMFLOW_OUTPUT_DIR"

COMMANDS = ("solve", "topfer", "gamma-scan", "branches", "continuation", "series-check", "rubel-bound", "oracle")
PROBLEMS = ("blasius", "sakiadis", "slip", "moving", "falkner-skan")
FINDERS = ("secant", "newton", "regula-falsi")


class UsageError(Exception):
    """Bad flag or value; ``flag`` names the offending option."""

    def __init__(self, message: str, flag: str | None = None):
        self.flag = flag
        default = DEFAULT_TEXT.get(flag) if flag else None
        text = f"{flag}: {message}" if flag else message
        if default is not None:
            text += f" (default: {default})"
        super().__init__(text)


class ConfigError(UsageError):
    pass


# -- value parsing ----------------------------------------------------------


def _float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"expected a finite number, got {text!r}")
    return value


def _positive(text: str) -> float:
    value = _float(text)
    if not value > 0:
        raise ValueError(f"must be positive, got {text!r}")
    return value


def _count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None
    if value < 2:
        raise ValueError(f"must be at least 2, got {value}")
    return value


def _float_list(text: str) -> tuple[float, ...]:
    items = [t for t in str(text).replace(" ", "").split(",") if t]
    if not items:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(_float(t) for t in items)


def _positive_list(text: str) -> tuple[float, ...]:
    values = _float_list(text)
    if any(v <= 0 for v in values):
        raise ValueError(f"all values must be positive, got {text!r}")
    return values


def _pair(text: str) -> tuple[float, float]:
    parts = str(text).split(":")
    if len(parts) != 2:
        raise ValueError(f"expected LO:HI, got {text!r}")
    lo, hi = _float(parts[0]), _float(parts[1])
    if not lo < hi:
        raise ValueError(f"need LO < HI, got {text!r}")
    return lo, hi


def _sign(text: str) -> int:
    value = {"1": 1, "+1": 1, "-1": -1}.get(str(text).strip())
    if value is None:
        raise ValueError(f"must be +1 or -1, got {text!r}")
    return value


def _bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def _choice(options):
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return text

    return parse


@dataclass(frozen=True)
class _Option:
    parse: object
    default_text: str
    help: str


OPTIONS: dict[str, _Option] = {
    "problem": _Option(_choice(PROBLEMS), "sakiadis", "problem family"),
    "beta": _Option(_float_list, "-0.01", "Falkner-Skan pressure-gradient parameter(s), comma-separated"),
    "c": _Option(_float_list, "1", "slip coefficient(s), comma-separated"),
    "b": _Option(_float_list, "-0.25", "wall velocity f'(0) of the moving surface, comma-separated"),
    "p": _Option(_sign, "-1 for sakiadis, +1 otherwise", "starred wall shear f*''(0), +1 or -1"),
    "finder": _Option(_choice(FINDERS), "secant; regula-falsi for slip and moving", "root finder"),
    "h0": _Option(_positive, "family seed (sakiadis 2.5, falkner-skan 5 or 75)", "first starting iterate"),
    "h1": _Option(_positive, "family seed (sakiadis 3.5, falkner-skan 10 or 150)", "second starting iterate"),
    "bracket": _Option(_pair, "0.1:1 for slip, 1:3 for moving", "regula falsi bracket LO:HI"),
    "illinois": _Option(_bool, "true", "Illinois-modified regula falsi (false: textbook false position)"),
    "eta-inf": _Option(_positive, "10; 20 for falkner-skan", "truncated boundary (starred for ITM runs)"),
    "tol": _Option(_positive, "1e-10", "adaptive integrator tolerance (relative and absolute)"),
    "fixed-step": _Option(_positive, "adaptive integration", "use classical RK4 with this step"),
    "blowup": _Option(_positive, "1e8", "blow-up threshold on |state|"),
    "tol-gamma": _Option(_positive, "1e-9", "stop when |Gamma| <= tol-gamma"),
    "tol-rel": _Option(_positive, "1e-6", "relative step tolerance"),
    "tol-abs": _Option(_positive, "1e-6", "absolute step tolerance"),
    "max-iter": _Option(_count, "50", "probe budget of the root finder"),
    "format": _Option(_choice(("json", "csv")), "json", "output format"),
    "output": _Option(str, f"none; ${OUTPUT_ENV}/<command>-<problem> when set", "output path (base name)"),
    "checkpoints": _Option(_positive_list, "10", "Topfer checkpoints eta*, comma-separated"),
    "agreement-tol": _Option(_positive, "1e-5", "Topfer agreement tolerance"),
    "range": _Option(_pair, "0.5:10 sakiadis, 0.1:10 slip, 1:150 moving, 1:1e4 falkner-skan", "h* scan range"),
    "samples": _Option(_count, "32", "number of Gamma samples"),
    "spacing": _Option(_choice(("log", "linear")), "log", "sample spacing"),
    "refine": _Option(_bool, "true", "refine Gamma extrema that approach zero"),
    "start-beta": _Option(_float, "-0.1988", "first beta of the continuation"),
    "initial-step": _Option(_positive, "1e-3", "first beta decrement"),
    "floor": _Option(_positive, "1e-5", "stop when both |f''(0)| fall below this"),
    "seeds": _Option(_pair, "found by a Gamma scan", "h* seeds NORMAL:REVERSE at start-beta"),
    "lam": _Option(_positive, "f''(0) from the Topfer method", "series wall shear"),
    "eta-max": _Option(_positive, "0.5", "series comparison interval [0, eta-max]"),
    "terms": _Option(int, "4", "series terms (1..4)"),
    "M": _Option(_positive_list, "4,6", "Rubel truncated boundaries, comma-separated"),
    "s-bracket": _Option(_pair, "-0.5:-0.4 sakiadis, 0.3:0.4 blasius", "shooting bracket on f''(0)"),
}
DEFAULT_TEXT = {f"--{name}": opt.default_text for name, opt in OPTIONS.items()}
DEFAULT_TEXT["problem"] = OPTIONS["problem"].default_text


def _field(name: str) -> str:
    return name.replace("-", "_")


@dataclass(frozen=True)
class RunConfig:
    """Fully merged run settings; ``None`` means the per-family default."""

    problem: str = "sakiadis"
    beta: tuple[float, ...] | None = None
    c: tuple[float, ...] | None = None
    b: tuple[float, ...] | None = None
    p: int | None = None
    finder: str | None = None
    h0: float | None = None
    h1: float | None = None
    bracket: tuple[float, float] | None = None
    illinois: bool = True
    eta_inf: float | None = None
    tol: float = 1.0e-10
    fixed_step: float | None = None
    blowup: float = 1.0e8
    tol_gamma: float = 1.0e-9
    tol_rel: float = 1.0e-6
    tol_abs: float = 1.0e-6
    max_iter: int = 50
    format: str = "json"
    output: str | None = None
    checkpoints: tuple[float, ...] = (10.0,)
    agreement_tol: float = 1.0e-5
    range: tuple[float, float] | None = None
    samples: int = 32
    spacing: str = "log"
    refine: bool = True
    start_beta: float = -0.1988
    initial_step: float = 1.0e-3
    floor: float = 1.0e-5
    seeds: tuple[float, float] | None = None
    lam: float | None = None
    eta_max: float = 0.5
    terms: int = 4
    M: tuple[float, ...] = (4.0, 6.0)
    s_bracket: tuple[float, float] | None = None

    # -- resolved settings --------------------------------------------------

    @property
    def integrator(self) -> IntegratorConfig:
        if self.fixed_step is not None:
            return IntegratorConfig.fixed(self.fixed_step, self.blowup)
        return IntegratorConfig.adaptive(self.tol, blowup_threshold=self.blowup)

    @property
    def root_config(self) -> RootConfig:
        return RootConfig(self.tol_gamma, self.tol_rel, self.tol_abs, self.max_iter)

    @property
    def sign(self) -> int:
        if self.p is not None:
            return self.p
        return -1 if self.problem == "sakiadis" else 1

    def parameter_values(self) -> tuple[float, ...]:
        name = {"slip": "c", "moving": "b", "falkner-skan": "beta"}.get(self.problem)
        if name is None:
            return (math.nan,)
        given = getattr(self, name)
        return given if given is not None else (_float(OPTIONS[name].default_text),)

    def problem_spec(self, value: float | None = None):
        if value is None:
            value = self.parameter_values()[0]
        kw = {} if self.eta_inf is None else {"eta_inf": self.eta_inf}
        if self.problem == "blasius":
            return blasius(**kw)
        if self.problem == "sakiadis":
            return sakiadis(self.sign, **kw)
        if self.problem == "slip":
            return slip(value, self.sign, **kw)
        if self.problem == "moving":
            return moving_surface(value, self.sign, **kw)
        return falkner_skan(value, self.sign, **kw)

    def finder_spec(self):
        finder = self.finder or ("regula-falsi" if self.problem in ("slip", "moving") else "secant")
        if finder == "regula-falsi":
            lo, hi = self.bracket or {"slip": (0.1, 1.0), "moving": (1.0, 3.0)}.get(self.problem, (1.0, 10.0))
            return RegulaFalsi(lo, hi, self.illinois)
        seeds = {"sakiadis": (2.5, 3.5), "falkner-skan": (5.0, 10.0) if self.sign > 0 else (75.0, 150.0)}
        h0, h1 = seeds.get(self.problem, (1.0, 2.0))
        if finder == "newton":
            if self.problem != "sakiadis":
                raise UsageError("newton needs the sensitivity system, available for sakiadis only", "--finder")
            return Newton(self.h0 if self.h0 is not None else h0)
        h0 = self.h0 if self.h0 is not None else h0
        h1 = self.h1 if self.h1 is not None else h1
        if h0 == h1:
            raise UsageError("secant needs h0 != h1", "--h1")
        return Secant(h0, h1)

    def scan_range(self) -> tuple[float, float]:
        if self.range is not None:
            return self.range
        return {"sakiadis": (0.5, 10.0), "slip": (0.1, 10.0), "moving": (1.0, 150.0)}.get(self.problem, (1.0, 1.0e4))

    def echo(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


def _coerce(name: str, raw, source: str):
    opt = OPTIONS[name]
    try:
        return opt.parse(raw)
    except ValueError as err:
        raise (ConfigError if source != "flag" else UsageError)(f"{err} [{source}]", f"--{name}") from None


def load_config(path, base: RunConfig | None = None) -> RunConfig:
    """Read ``key = value`` lines into a :class:`RunConfig` (file over defaults)."""
    return dataclasses.replace(base or RunConfig(), **_read_config_values(path))


def _read_config_values(path) -> dict:
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err.strerror or err}", "--config") from None
    values = {}
    keys = list(OPTIONS)
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        name = key.replace("_", "-")
        if name not in OPTIONS:
            near = difflib.get_close_matches(name, keys, n=1, cutoff=0.0)
            hint = f"; nearest valid key is {near[0]!r}" if near else ""
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}{hint}")
        values[_field(name)] = _coerce(name, raw, f"{path.name}:{lineno}")
    return values


# -- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(message)


def _flag_type(name):
    opt = OPTIONS[name]

    def parse(text):
        if text == argparse.SUPPRESS:  # an omitted optional positional
            return text
        try:
            return opt.parse(text)
        except ValueError as err:
            default = opt.default_text
            raise argparse.ArgumentTypeError(f"{err} (default: {default})") from None

    parse.__name__ = name
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="key = value file; flags override it")
    for name, opt in OPTIONS.items():
        if name in ("problem", "refine"):
            continue
        common.add_argument(f"--{name}", dest=_field(name), type=_flag_type(name), help=f"{opt.help} [{opt.default_text}]")
    common.add_argument("--no-refine", dest="refine", action="store_false", help="plain sampling in Gamma scans")
    common.add_argument("-q", "--quiet", action="store_true", help="do not print the summary")

    parser = _Parser(prog="itmflow", description="Transformation methods for boundary-layer problems.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    takes_problem = {"solve", "gamma-scan", "branches", "oracle"}
    for command in COMMANDS:
        p = sub.add_parser(command, parents=[common], argument_default=argparse.SUPPRESS)
        if command in takes_problem:
            p.add_argument("problem", nargs="?", type=_flag_type("problem"), help=f"one of {', '.join(PROBLEMS)}")
    return parser


_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


def _glue_negative_values(argv) -> list[str]:
    """Turn ``--beta -0.1,-0.2`` into ``--beta=-0.1,-0.2``.

    argparse only accepts a leading minus for plain numbers, not for lists
    and ``LO:HI`` pairs.
    """
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and tok[2:] in OPTIONS and i + 1 < len(argv) and _NEGATIVE_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def resolve_config(argv) -> tuple[str, RunConfig, bool]:
    """Parse ``argv`` and merge flags > config file > defaults."""
    ns = vars(build_parser().parse_args(_glue_negative_values(list(argv))))
    command = ns.pop("command")
    quiet = ns.pop("quiet", False)
    config_path = ns.pop("config", None)
    values = _read_config_values(config_path) if config_path else {}
    values.update(ns)
    return command, RunConfig(**values), quiet


# -- commands ---------------------------------------------------------------


@dataclass
class Outcome:
    doc: ResultDocument
    code: int = EXIT_OK
    message: str = ""


def _run_summary(run) -> dict:
    return {
        "h_star": run.final_h_star,
        "lambda": run.final_lambda,
        "gamma": run.final_gamma,
        "skin_friction": run.skin_friction,
        "fprime0": run.wall_slope,
        "fstar_prime_inf": float(run.starred_solution.end[1]),
        "eta_inf_physical": run.physical_eta_inf,
        "probes": run.n_probes,
    }


def cmd_solve(cfg: RunConfig) -> Outcome:
    if cfg.problem == "blasius":
        raise UsageError("the Blasius problem is solved by the topfer command", "problem")
    values = cfg.parameter_values()
    finder = cfg.finder_spec()
    if len(values) == 1:
        problem = cfg.problem_spec(values[0])
        try:
            run = itm_solve(problem, finder, cfg.integrator, None, cfg.root_config)
        except NotConverged as err:
            doc = ResultDocument.create(
                "solve", cfg.echo(), final={"converged": False, "reason": str(err)}, tables={"iterations": iteration_table(err.records)}
            )
            return Outcome(doc, EXIT_DIAGNOSIS, str(err))
        final = {"problem": problem.label, "converged": True, **_run_summary(run)}
        final.update({f"residual_{k}": v for k, v in boundary_residuals(problem, run.physical_solution).items()})
        tables = {"iterations": iteration_table(run.records), "solution": solution_table(run.physical_solution)}
        return Outcome(ResultDocument.create("solve", cfg.echo(), final=final, tables=tables))

    cols = {k: [] for k in ("param", "h_star", "lambda", "fstar_prime_inf", "fprime0", "skin_friction", "probes", "converged")}
    failed = []
    for v in values:
        problem = cfg.problem_spec(v)
        try:
            run = itm_solve(problem, finder, cfg.integrator, None, cfg.root_config)
            s = _run_summary(run)
            row = [v, s["h_star"], s["lambda"], s["fstar_prime_inf"], s["fprime0"], s["skin_friction"], s["probes"], True]
        except NotConverged as err:
            failed.append(problem.label)
            row = [v, math.nan, math.nan, math.nan, math.nan, math.nan, len(err.records), False]
        for key, item in zip(cols, row):
            cols[key].append(item)
    final = {"problem": cfg.problem, "runs": len(values), "failed": len(failed)}
    doc = ResultDocument.create("solve", cfg.echo(), final=final, tables={"sweep": cols})
    if failed:
        return Outcome(doc, EXIT_DIAGNOSIS, "not converged: " + ", ".join(failed))
    return Outcome(doc)


def cmd_topfer(cfg: RunConfig) -> Outcome:
    res = topfer_solve(cfg.integrator, cfg.checkpoints, cfg.agreement_tol)
    final = {
        "lambda_t": res.lambda_t,
        "skin_friction": res.lambda_t,
        "agreement": res.agreement,
        "converged": res.converged,
    }
    tables = {
        "checkpoints": {"eta_star": list(res.checkpoints), "lambda": list(res.checkpoint_lambdas)},
        "solution": solution_table(res.physical_solution),
    }
    doc = ResultDocument.create("topfer", cfg.echo(), final=final, tables=tables)
    if len(res.checkpoints) > 1 and not res.converged:
        return Outcome(doc, EXIT_DIAGNOSIS, f"checkpoint values differ by {res.agreement:.3e}")
    return Outcome(doc)


def _profile_tables(profile) -> dict:
    return {
        "profile": profile.as_columns(),
        "brackets": {"lo": [b[0] for b in profile.brackets], "hi": [b[1] for b in profile.brackets]},
    }


def cmd_gamma_scan(cfg: RunConfig) -> Outcome:
    problem = cfg.problem_spec()
    if problem.family.value == "blasius":
        raise UsageError("the Blasius problem has no transformation function", "problem")
    profile = gamma_profile(problem, cfg.scan_range(), cfg.samples, cfg.integrator, None, cfg.spacing, cfg.refine)
    final = {"problem": problem.label, "zero_count_evidence": profile.zero_count_evidence}
    doc = ResultDocument.create("gamma-scan", cfg.echo(), final=final, tables=_profile_tables(profile))
    if not profile.brackets:
        return Outcome(doc, EXIT_DIAGNOSIS, f"no sign change of Gamma on {cfg.scan_range()}: no solution found")
    return Outcome(doc)


def cmd_branches(cfg: RunConfig) -> Outcome:
    problem = cfg.problem_spec()
    if problem.family.value == "blasius":
        raise UsageError("the Blasius problem has no transformation function", "problem")
    try:
        runs = solve_all_branches(
            problem, cfg.scan_range(), cfg.samples, cfg.integrator, None, cfg.root_config, cfg.spacing, cfg.refine
        )
    except NotConverged as err:
        doc = ResultDocument.create("branches", cfg.echo(), final={"problem": problem.label, "reason": str(err)})
        return Outcome(doc, EXIT_DIAGNOSIS, str(err))
    cols = {k: [] for k in ("h_star", "lambda", "fprime0", "skin_friction", "probes")}
    tables = {"branches": cols}
    for i, run in enumerate(runs, start=1):
        s = _run_summary(run)
        for key in cols:
            cols[key].append(s[key])
        tables[f"iterations_{i}"] = iteration_table(run.records)
        tables[f"solution_{i}"] = solution_table(run.physical_solution)
    final = {"problem": problem.label, "branches": len(runs)}
    doc = ResultDocument.create("branches", cfg.echo(), final=final, tables=tables)
    if not runs:
        return Outcome(doc, EXIT_DIAGNOSIS, f"no sign change of Gamma on {cfg.scan_range()}: no solution found")
    return Outcome(doc)


def cmd_continuation(cfg: RunConfig) -> Outcome:
    kw = {} if cfg.eta_inf is None else {"eta_inf": cfg.eta_inf}
    code, message = EXIT_OK, ""
    try:
        res = beta_min_continuation(
            cfg.start_beta,
            initial_step=cfg.initial_step,
            floor=cfg.floor,
            seeds=cfg.seeds,
            integrator=cfg.integrator,
            root_config=cfg.root_config,
            **kw,
        )
    except ContinuationStalled as err:
        res, code, message = err.result, EXIT_DIAGNOSIS, str(err)
    except NotConverged as err:
        doc = ResultDocument.create("continuation", cfg.echo(), final={"reached_floor": False, "reason": str(err)})
        return Outcome(doc, EXIT_DIAGNOSIS, str(err))
    table = {
        "beta": res.beta_values,
        "skin_friction_normal": res.skin_frictions_normal,
        "skin_friction_reverse": res.skin_frictions_reverse,
        "h_normal": res.h_normal,
        "h_reverse": res.h_reverse,
        "eta_inf": res.eta_inf_values,
        "probes_normal": res.probes_normal,
        "probes_reverse": res.probes_reverse,
    }
    final = {
        "beta_min_estimate": res.beta_min_estimate,
        "reached_floor": res.reached_floor,
        "skin_friction_normal": res.skin_frictions_normal[-1] if res.beta_values else math.nan,
        "skin_friction_reverse": res.skin_frictions_reverse[-1] if res.beta_values else math.nan,
        "rejected_steps": len(res.rejected_betas),
    }
    doc = ResultDocument.create("continuation", cfg.echo(), final=final, tables={"continuation": table})
    return Outcome(doc, code, message)


def cmd_series_check(cfg: RunConfig) -> Outcome:
    if not 1 <= cfg.terms <= 4:
        raise UsageError(f"must be in 1..4, got {cfg.terms}", "--terms")
    lam = cfg.lam if cfg.lam is not None else topfer_solve(cfg.integrator).lambda_t
    problem = blasius()
    tr = integrate(physical_system(problem), physical_initial_state(problem, lam), [0.0, cfg.eta_max], cfg.integrator)
    f_s, fp_s, fpp_s = blasius_series(lam, cfg.terms)(tr.nodes)
    diff = np.abs(np.column_stack([f_s, fp_s, fpp_s]) - tr.states)
    table = {
        "eta": tr.nodes,
        "f_series": f_s,
        "f_integrated": tr.states[:, 0],
        "abs_diff_f": diff[:, 0],
        "abs_diff_fprime": diff[:, 1],
        "abs_diff_fsecond": diff[:, 2],
    }
    final = {"lambda": lam, "terms": cfg.terms, "eta_max": cfg.eta_max, "max_abs_diff": float(diff.max())}
    return Outcome(ResultDocument.create("series-check", cfg.echo(), final=final, tables={"series": table}))


def cmd_rubel_bound(cfg: RunConfig) -> Outcome:
    cols = {k: [] for k in ("M", "wall_shear", "f_M_at_M", "f_M_second_at_M", "bound", "observed", "dominates")}
    for M in cfg.M:
        s, tr = truncated_blasius(M)
        rb = rubel_error_bound(tr, M)
        s2, _ = truncated_blasius(2 * M)
        grid = np.linspace(0.0, M, 401)
        ref = falkner_skan(0.0, 1, eta_inf=M)
        observed = float(np.max(np.abs(solution_on_grid(ref, s, grid)[:, 0] - solution_on_grid(ref, s2, grid)[:, 0])))
        for key, val in zip(cols, (M, s, rb.f_M_at_M, rb.f_M_second_at_M, rb.bound, observed, rb.bound >= observed)):
            cols[key].append(val)
    final = {"all_dominate": all(cols["dominates"])}
    return Outcome(ResultDocument.create("rubel-bound", cfg.echo(), final=final, tables={"rubel": cols}))


def cmd_oracle(cfg: RunConfig) -> Outcome:
    problem = cfg.problem_spec()
    bracket = cfg.s_bracket or {"blasius": (0.3, 0.4), "sakiadis": (-0.5, -0.4)}.get(cfg.problem)
    if bracket is None:
        raise UsageError(f"required for {cfg.problem}", "--s-bracket")
    try:
        s, tr = shooting_oracle(problem, bracket, problem.eta_inf, cfg.integrator)
    except (InvalidBracket, BlowUpInsideBracket) as err:
        doc = ResultDocument.create("oracle", cfg.echo(), final={"problem": problem.label, "reason": str(err)})
        return Outcome(doc, EXIT_DIAGNOSIS, str(err))
    final = {
        "problem": problem.label,
        "skin_friction": s,
        "fprime0": float(tr.states[0, 1]),
        "residual": float(tr.end[1] - problem.boundary.d),
        "eta_inf": problem.eta_inf,
    }
    return Outcome(ResultDocument.create("oracle", cfg.echo(), final=final, tables={"solution": solution_table(tr)}))


HANDLERS = {
    "solve": cmd_solve,
    "topfer": cmd_topfer,
    "gamma-scan": cmd_gamma_scan,
    "branches": cmd_branches,
    "continuation": cmd_continuation,
    "series-check": cmd_series_check,
    "rubel-bound": cmd_rubel_bound,
    "oracle": cmd_oracle,
}


def _output_base(command: str, cfg: RunConfig) -> Path | None:
    if cfg.output:
        return Path(cfg.output)
    directory = os.environ.get(OUTPUT_ENV)
    if not directory:
        return None
    name = command if command in ("topfer", "continuation", "series-check", "rubel-bound") else f"{command}-{cfg.problem}"
    return Path(directory) / name


def _execute(command: str, cfg: RunConfig) -> tuple[Outcome, list[Path]]:
    try:
        outcome = HANDLERS[command](cfg)
    except DomainError as err:
        raise UsageError(str(err)) from err
    base = _output_base(command, cfg)
    written = write_results(outcome.doc, cfg.format, base) if base is not None else []
    return outcome, written


def run_command(argv) -> tuple[int, ResultDocument, list[Path]]:
    """Run one CLI invocation; returns ``(exit_code, document, written_paths)``.

    Usage and config errors raise :class:`UsageError`.
    """
    command, cfg, _ = resolve_config(argv)
    outcome, written = _execute(command, cfg)
    return outcome.code, outcome.doc, written


def _print_summary(doc: ResultDocument, written):
    for key, value in doc.final.items():
        text = f"{value:.10g}" if isinstance(value, float) else str(value)
        print(f"{key:>20} = {text}")
    for name, cols in doc.tables.items():
        if name in ("sweep", "branches", "checkpoints", "continuation", "rubel"):
            print(f"\n[{name}]")
            print("  ".join(f"{c:>14}" for c in cols))
            for row in zip(*cols.values()):
                print("  ".join(f"{v:>14.8g}" if isinstance(v, float) else f"{str(v):>14}" for v in row))
    for path in written:
        print(f"wrote {path}")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        build_parser().print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        command, cfg, quiet = resolve_config(argv)
        outcome, written = _execute(command, cfg)
    except UsageError as err:
        print(f"itmflow: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as err:  # --help
        return int(err.code or 0)
    except OSError as err:
        print(f"itmflow: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    if not quiet:
        _print_summary(outcome.doc, written)
    if outcome.code != EXIT_OK:
        print(f"itmflow: {outcome.message}", file=sys.stderr)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
