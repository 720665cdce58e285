"""Command-line front end: reproducible runs with machine-readable output.

Every run resolves a full RunConfig (builtin defaults, then an optional flat
key=value config file, then flags) and serializes it into the output header,
so identical configs give byte-identical output.  The --threads flag is an
execution hint only; all emission paths are sequential and canonicalized.

Exit codes: 0 pass, 2 identity falsified, 3 enumeration budget exceeded,
4 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .census import a_q, build_sequence, census, census_csv
from .charsums import _coord_grid, disjointness_check, rho, s1, s4, s4_closed_form
from .constants import saturation_table, table_csv, table_text
from .gl2 import Form
from .groups import (
    BallBudgetError,
    GeneratorSet,
    enumerate_ball,
    estimate_delta,
    load_generator_file,
    modular_generators,
    sample_words,
    schottky_generators,
)
from .modular import (
    bad_modulus_probe,
    coset_table,
    eta,
    local_density,
    strong_approx_check,
)

EXIT_PASS = 0
EXIT_FALSIFIED = 2
EXIT_BUDGET = 3
EXIT_BAD_INPUT = 4


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    group: str = "modular"
    T: float = 30.0
    X: float = 12.0
    Y: float = 12.0
    q: int = 5
    p_max: int = 97
    alpha: float = 0.15
    kappa: int = 4
    R: int = 4
    f: str = "z"
    format: str = "text"
    seed: int = 1
    threads: int = 1

    def header_lines(self) -> List[str]:
        out = []
        for fld in fields(self):
            out.append(f"# {fld.name} = {getattr(self, fld.name)}")
        return out

    def as_dict(self) -> Dict[str, object]:
        return {fld.name: getattr(self, fld.name) for fld in fields(self)}


def resolve_group(name: str) -> GeneratorSet:
    if name == "modular":
        return modular_generators()
    if name == "schottky":
        return schottky_generators()
    return load_generator_file(name)


def _emit_json(config: RunConfig, payload: Dict[str, object]) -> str:
    doc = {"config": config.as_dict()}
    doc.update(payload)
    return json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n"


def _emit_text(config: RunConfig, body: str) -> str:
    return "\n".join(config.header_lines()) + "\n" + body


# ---------------------------------------------------------------- verify

SuiteResult = Tuple[str, bool, str]


def verify_suites(cfg: RunConfig) -> List[SuiteResult]:
    """The exact identity suites: character sums, cosets, disjointness.

    The local-weight sum is recomputed through rho here, independently of
    the library's internal evaluation, so a corrupted density is caught.
    """
    gens = resolve_group(cfg.group)
    omegas = sorted(sample_words(gens, 20, cfg.seed), key=lambda g: g.entries())
    primes = [p for p in range(3, cfg.p_max + 1) if all(p % r for r in range(2, p))]
    results: List[SuiteResult] = []

    ok, detail = True, ""
    for p in primes:
        for f in (Form.X, Form.Y, Form.Z):
            if f is Form.Z and p % 4 == 3:
                continue
            for om in omegas:
                n0 = int((_coord_grid(f, p, om) == 0).sum())
                via_rho = Fraction(n0, p * p) - rho(p)
                if via_rho != 0 or s1(p, f, om).value != 0:
                    ok, detail = False, f"p={p} f={f.value}"
                    break
    results.append(("weighted-zero-count-vanishes", ok, detail or f"odd p <= {cfg.p_max}, 20 omegas, 3 forms"))

    ok, detail = True, ""
    for p in [p for p in primes if p <= 31]:
        for f in (Form.X, Form.Y):
            for om in omegas[:5]:
                for k in range(p):
                    for l in range(p):
                        if k == 0 and l == 0:
                            continue
                        if s4(p, f, k, l, om).value != s4_closed_form(p, f, k, l, om):
                            ok, detail = False, f"p={p} f={f.value} k={k} l={l}"
    results.append(("twisted-sum-closed-form", ok, detail or "p<=31, all (k,l), 5 omegas"))

    ok, detail = True, ""
    for p in primes:
        if not disjointness_check(p):
            ok, detail = False, f"p={p}"
    results.append(("coordinate-disjointness", ok, detail or f"odd p <= {cfg.p_max}"))

    ok, detail = True, ""
    for p in primes:
        table = coset_table(p)
        if table.index != p + 1 or len(table.reps) != p + 1 or eta(p) != p + 1:
            ok, detail = False, f"p={p}"
    results.append(("coset-index", ok, detail or f"odd p <= {cfg.p_max}"))

    ok, detail = True, ""
    bad = bad_modulus_probe(gens.gens, 13)
    if 2 not in bad:
        ok, detail = False, "probe must report 2"
    for p in [p for p in primes if p <= 13]:
        if strong_approx_check(gens.gens, p) == (p in bad):
            ok, detail = False, f"p={p}"
    results.append(("strong-approximation", ok, detail or f"odd p <= 13 surjective outside {bad}"))
    return results


def cmd_verify(cfg: RunConfig) -> Tuple[str, int]:
    results = verify_suites(cfg)
    failed = [r for r in results if not r[1]]
    code = EXIT_PASS if not failed else EXIT_FALSIFIED
    if cfg.format == "json":
        payload = {
            "provenance": "verify_suites",
            "suites": [
                {"suite": n, "ok": ok, "detail": d} for n, ok, d in results
            ],
            "passed": not failed,
        }
        return _emit_json(cfg, payload), code
    lines = []
    for n, ok, d in results:
        lines.append(f"{'PASS' if ok else 'FAIL'} {n} ({d})")
    lines.append("all suites passed" if not failed else f"{len(failed)} suite(s) FAILED")
    if cfg.format == "csv":
        rows = ["suite,ok,detail"] + [f"{n},{int(ok)},{d}" for n, ok, d in results]
        return _emit_text(cfg, "\n".join(rows) + "\n"), code
    return _emit_text(cfg, "\n".join(lines) + "\n"), code


# ------------------------------------------------------------- constants

def cmd_constants(cfg: RunConfig) -> Tuple[str, int]:
    rows = saturation_table()
    if cfg.format == "json":
        provenance = {
            "z": "greaves_threshold+delta0",
            "area": "alpha_min_for_R+delta0",
            "product": "alpha_min_for_R+delta0",
        }
        payload = {
            "provenance": "saturation_table",
            "rows": [
                {"form": r.form.value, "R": r.R, "alpha": round(r.alpha, 7),
                 "delta0": round(r.delta0, 9), "provenance": provenance[r.form.value]}
                for r in rows
            ],
        }
        return _emit_json(cfg, payload), EXIT_PASS
    if cfg.format == "csv":
        return _emit_text(cfg, table_csv(rows)), EXIT_PASS
    return _emit_text(cfg, table_text(rows)), EXIT_PASS


# ----------------------------------------------------------------- orbit

def cmd_orbit(cfg: RunConfig) -> Tuple[str, int]:
    gens = resolve_group(cfg.group)
    ball = enumerate_ball(gens, cfg.T)
    seen = sorted(
        {(int(c), int(d)) for c, d in ball.rows[:, 2:4].tolist()},
        key=lambda r: (r[0] ** 2 + r[1] ** 2, r),
    )
    triples = [(c, d, d * d - c * c, 2 * c * d, c * c + d * d) for c, d in seen]
    if cfg.format == "json":
        payload = {
            "provenance": "enumerate_ball",
            "elements": len(ball),
            "distinct_rows": len(seen),
            "rows": [
                {"c": c, "d": d, "x": x, "y": y, "z": z} for c, d, x, y, z in triples
            ],
        }
        return _emit_json(cfg, payload), EXIT_PASS
    if cfg.format == "csv":
        lines = ["c,d,x,y,z"] + [f"{c},{d},{x},{y},{z}" for c, d, x, y, z in triples]
        return _emit_text(cfg, "\n".join(lines) + "\n"), EXIT_PASS
    body = (
        f"elements = {len(ball)}\ndistinct_rows = {len(seen)}\n"
        f"max_sq_norm = {int(ball.sq_norms().max(initial=0))}\n"
    )
    return _emit_text(cfg, body), EXIT_PASS


# ---------------------------------------------------------------- census

def cmd_census(cfg: RunConfig) -> Tuple[str, int]:
    gens = resolve_group(cfg.group)
    ball = enumerate_ball(gens, cfg.T)
    report = census(ball, Form.parse(cfg.f), cfg.R)
    if cfg.format == "csv":
        return _emit_text(cfg, census_csv(report)), EXIT_PASS
    if cfg.format == "json":
        payload = {"provenance": "census", "summary": report.summary()}
        return _emit_json(cfg, payload), EXIT_PASS
    s = report.summary()
    lines = [f"rows = {s['rows']}", f"zeros = {s['zeros']}", f"units = {s['units']}",
             f"imprimitive = {s['imprimitive']}", f"max_abs_value = {s['max_abs_value']}"]
    for key, value in s["almost_prime_counts"].items():
        lines.append(f"omega_{key} = {value}")
    return _emit_text(cfg, "\n".join(lines) + "\n"), EXIT_PASS


# --------------------------------------------------------------- density

def cmd_density(cfg: RunConfig) -> Tuple[str, int]:
    f = Form.parse(cfg.f)
    floor = {Form.X: 3, Form.Y: 3, Form.Z: 3, Form.AREA: 5, Form.PRODUCT: 7}[f]
    rows = []
    all_match = True
    for p in range(floor, cfg.p_max + 1):
        if any(p % r == 0 for r in range(2, p)):
            continue
        rep = local_density(f, p)
        all_match = all_match and rep.match
        rows.append((p, rep.measured, rep.predicted, rep.match))
    code = EXIT_PASS if all_match else EXIT_FALSIFIED
    if cfg.format == "json":
        payload = {
            "provenance": "local_density/predicted_density",
            "rows": [
                {"p": p, "measured": str(m), "predicted": str(pr), "match": ok}
                for p, m, pr, ok in rows
            ],
            "all_match": all_match,
        }
        return _emit_json(cfg, payload), code
    if cfg.format == "csv":
        lines = ["p,measured,predicted,match"] + [
            f"{p},{m},{pr},{int(ok)}" for p, m, pr, ok in rows
        ]
        return _emit_text(cfg, "\n".join(lines) + "\n"), code
    lines = [f"p={p:>3} measured={str(m):>8} predicted={str(pr):>8} {'ok' if ok else 'MISMATCH'}"
             for p, m, pr, ok in rows]
    return _emit_text(cfg, "\n".join(lines) + "\n"), code


# ----------------------------------------------------------------- delta

def cmd_delta(cfg: RunConfig) -> Tuple[str, int]:
    gens = resolve_group(cfg.group)
    lo = max(4.0, cfg.T / 16.0)
    grid = [float(t) for t in np.geomspace(lo, cfg.T, 6)]
    est = estimate_delta(gens, grid)
    if cfg.format == "json":
        payload = {
            "provenance": "estimate_delta",
            "delta_hat": est.delta_hat,
            "stderr": est.stderr,
            "samples": [{"T": t, "count": n} for t, n in est.samples],
        }
        return _emit_json(cfg, payload), EXIT_PASS
    if cfg.format == "csv":
        lines = ["T,count"] + [f"{t},{n}" for t, n in est.samples]
        lines.append(f"# delta_hat = {est.delta_hat:.6f}")
        lines.append(f"# stderr = {est.stderr:.6f}")
        return _emit_text(cfg, "\n".join(lines) + "\n"), EXIT_PASS
    body = f"delta_hat = {est.delta_hat:.6f}\nstderr = {est.stderr:.6f}\n" + "\n".join(
        f"T={t:.2f} count={n}" for t, n in est.samples
    )
    return _emit_text(cfg, body + "\n"), EXIT_PASS


# ------------------------------------------------------------------- adq

def cmd_adq(cfg: RunConfig) -> Tuple[str, int]:
    gens = resolve_group(cfg.group)
    seq = build_sequence(gens, cfg.X, cfg.Y, Form.parse(cfg.f))
    mass, main, r = a_q(seq, cfg.q)
    rel = float(abs(r) / seq.chi) if seq.chi else 0.0
    if cfg.format == "json":
        payload = {
            "provenance": "build_sequence+a_q",
            "chi": str(seq.chi),
            "mass": str(mass),
            "main": str(main),
            "remainder": str(r),
            "rel_remainder": rel,
            "support": len(seq.ns),
        }
        return _emit_json(cfg, payload), EXIT_PASS
    if cfg.format == "csv":
        lines = ["quantity,value",
                 f"chi,{seq.chi}", f"mass,{mass}", f"main,{main}",
                 f"remainder,{r}", f"rel_remainder,{rel}"]
        return _emit_text(cfg, "\n".join(lines) + "\n"), EXIT_PASS
    body = (f"chi = {seq.chi} ({float(seq.chi):.4f})\n"
            f"mass = {mass} ({float(mass):.4f})\n"
            f"main = {main} ({float(main):.4f})\n"
            f"remainder = {r} ({float(r):.6f})\n"
            f"rel_remainder = {rel:.8f}\n")
    return _emit_text(cfg, body), EXIT_PASS


DISPATCH: Dict[str, Callable[[RunConfig], Tuple[str, int]]] = {
    "verify": cmd_verify,
    "constants": cmd_constants,
    "orbit": cmd_orbit,
    "census": cmd_census,
    "density": cmd_density,
    "delta": cmd_delta,
    "adq": cmd_adq,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise ValueError(message)


def read_config_file(path: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


_FIELD_TYPES = {
    "group": str, "T": float, "X": float, "Y": float, "q": int, "p_max": int,
    "alpha": float, "kappa": int, "R": int, "f": str, "format": str,
    "seed": int, "threads": int,
}


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    parser = _Parser(prog="triplesieve", description=__doc__)
    parser.add_argument("subcommand", choices=sorted(DISPATCH))
    parser.add_argument("--config", help="flat key=value defaults file")
    parser.add_argument("--group")
    parser.add_argument("--T", type=float)
    parser.add_argument("--X", type=float)
    parser.add_argument("--Y", type=float)
    parser.add_argument("--q", type=int)
    parser.add_argument("--pmax", dest="p_max", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--kappa", type=int)
    parser.add_argument("--R", type=int)
    parser.add_argument("--f")
    parser.add_argument("--format", choices=["text", "csv", "json"])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int)
    ns = parser.parse_args(argv)
    file_values = read_config_file(ns.config) if ns.config else {}
    resolved: Dict[str, object] = {"subcommand": ns.subcommand}
    for name, typ in _FIELD_TYPES.items():
        flag = getattr(ns, name)
        if flag is not None:
            resolved[name] = flag
        elif name in file_values:
            resolved[name] = typ(file_values[name])
    cfg = RunConfig(**resolved)
    if cfg.format not in ("text", "csv", "json"):
        raise ValueError(f"bad format {cfg.format!r}")
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cfg = parse_args(argv)
        out, code = DISPATCH[cfg.subcommand](cfg)
    except BallBudgetError as e:
        sys.stderr.write(f"budget exceeded: {e}\n")
        return EXIT_BUDGET
    except (ValueError, OSError) as e:
        sys.stderr.write(f"bad input: {e}\n")
        return EXIT_BAD_INPUT
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
