"""Command line interface: ``symkernel {eval,verify,gram,basis}``.

Results go to stdout as JSON (default) or CSV, diagnostics to stderr.
Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 domain
error, 4 degenerate point refused by a determinant formula.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels as kn
from . import quadrature as qd
from . import symcore as sc
from .errors import DegeneratePointError, DomainError, SymKernelError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_DEGENERATE = 0, 1, 2, 3, 4

KERNELS = ("polydisc", "anti", "bergman-sym", "szego", "hardy-anti", "g2-explicit")
IDENTITIES = ("det-vs-series", "cauchy", "szego-product", "g2-corollary", "sgn-vs-anti", "jsnorm", "lemma-ortho")
DEFAULT_METHOD = {
    "polydisc": "explicit",
    "anti": "determinant",
    "bergman-sym": "determinant",
    "szego": "product",
    "hardy-anti": "determinant",
    "g2-explicit": "explicit",
}
ALLOWED_METHODS = {
    "polydisc": ("explicit",),
    "anti": ("determinant", "series"),
    "bergman-sym": ("determinant", "series"),
    "szego": ("product", "determinant", "series"),
    "hardy-anti": ("determinant",),
    "g2-explicit": ("explicit",),
}

# "-0.3,0.1" must parse as a value, not as an option flag
_NEGATIVE_VALUE = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?(,.*)?$")


class UsageError(SymKernelError):
    pass


@dataclass
class RunConfig:
    n: int | None
    lam: float
    max_weight: int
    samples: int
    seed: int
    tolerance: float
    format: str
    radius: float

    def validate(self) -> None:
        if self.n is not None and self.n < 1:
            raise UsageError("--n must be >= 1")
        if not self.lam >= 1:
            raise UsageError("--lambda must be >= 1")
        if self.max_weight < 0:
            raise UsageError("--max-weight must be >= 0")
        if not self.tolerance > 0:
            raise UsageError("--tolerance must be > 0")
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if not 0 < self.radius < 1:
            raise UsageError("--radius must lie in (0, 1)")

    def as_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        return out


def parse_complex(token: str) -> complex:
    parts = token.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected 're,im', got {token!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise UsageError(f"cannot parse {token!r} as 're,im'") from None


def _cx(value) -> dict:
    value = complex(value)
    return {"re": value.real, "im": value.imag}


def _global_flags() -> argparse.ArgumentParser:
    env_seed = os.environ.get("SYMKERNEL_SEED")
    parent = argparse.ArgumentParser(add_help=False)
    g = parent.add_argument_group("global options")
    g.add_argument("--n", type=int, default=None, help="dimension (inferred from points if omitted)")
    g.add_argument("--lambda", dest="lam", type=float, default=2.0, help="weight, >= 1 (1 = Hardy)")
    g.add_argument("--max-weight", type=int, default=None, help="truncation |m| <= D (default 30; 6 for gram/basis)")
    g.add_argument("--samples", type=int, default=10**6)
    g.add_argument("--seed", type=int, default=int(env_seed) if env_seed else 0)
    g.add_argument("--tolerance", type=float, default=1e-8)
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--radius", type=float, default=0.5, help="max coordinate modulus of random points")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _global_flags()
    parser = argparse.ArgumentParser(prog="symkernel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[parent], help="evaluate one kernel")
    ev.add_argument("--kernel", choices=KERNELS, required=True)
    ev.add_argument("--method", choices=kn.METHODS, default=None)
    ev.add_argument("--z", nargs="+", default=None, metavar="RE,IM")
    ev.add_argument("--w", nargs="+", default=None, metavar="RE,IM")
    ev.add_argument("--u", nargs="+", default=None, metavar="RE,IM", help="symmetrized point (g2-explicit)")
    ev.add_argument("--v", nargs="+", default=None, metavar="RE,IM", help="symmetrized point (g2-explicit)")

    ve = sub.add_parser("verify", parents=[parent], help="check an identity on seeded random points")
    ve.add_argument("--identity", required=True)
    ve.add_argument("--trials", type=int, default=20)

    gr = sub.add_parser("gram", parents=[parent], help="Gram matrix of the orthonormal basis")
    gr.add_argument("--method", choices=("analytic", "quadrature", "montecarlo"), default="analytic")
    gr.add_argument("--space", choices=("polydisc", "symmetrized"), default="polydisc")

    sub.add_parser("basis", parents=[parent], help="list basis labels and norm constants")

    for p in (parser, ev, ve, gr):
        p._negative_number_matcher = _NEGATIVE_VALUE
    return parser


def _points(tokens, n: int | None, name: str) -> np.ndarray:
    if tokens is None:
        raise UsageError(f"--{name} is required")
    pts = np.array([parse_complex(t) for t in tokens])
    if n is not None and len(pts) != n:
        raise UsageError(f"--{name} has {len(pts)} coordinates, expected {n}")
    return pts


def _result_dict(res: kn.KernelResult) -> dict:
    return {
        "value": _cx(res.value),
        "method": res.method,
        "truncation_degree": res.truncation_degree,
        "tail_estimate": res.tail_estimate,
    }


def cmd_eval(cfg: RunConfig, args) -> tuple[dict, int]:
    kernel = args.kernel
    method = args.method or DEFAULT_METHOD[kernel]
    if method not in ALLOWED_METHODS[kernel]:
        raise UsageError(f"kernel {kernel!r} supports methods {ALLOWED_METHODS[kernel]}")
    if kernel == "g2-explicit":
        if args.u is not None or args.v is not None:
            u, v = _points(args.u, 2, "u"), _points(args.v, 2, "v")
        else:
            u = sc.symmetrize(_points(args.z, 2, "z"))
            v = sc.symmetrize(_points(args.w, 2, "w"))
        res = kn.KernelResult(kn.g2_bergman_explicit(u, v), "explicit")
        return {"result": _result_dict(res)}, EXIT_PASS
    z = _points(args.z, cfg.n, "z")
    w = _points(args.w, cfg.n if cfg.n is not None else len(z), "w")
    d = cfg.max_weight
    if kernel == "polydisc":
        res = kn.KernelResult(kn.bergman_kernel_polydisc(z, w, cfg.lam), "explicit")
    elif kernel == "anti":
        res = kn.kernel_anti_det(z, w, cfg.lam) if method == "determinant" else kn.kernel_anti_series(z, w, cfg.lam, d)
    elif kernel == "bergman-sym":
        res = kn.bergman_kernel_symmetrized(z, w, cfg.lam, method, d)
    elif kernel == "szego":
        res = kn.szego_kernel_symmetrized(z, w, method, d)
    else:
        res = kn.hardy_kernel_anti(z, w)
    return {"result": _result_dict(res)}, EXIT_PASS


def random_points(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def _pairwise_trials(cfg: RunConfig, trials: int, n: int, compute, relative: bool = True) -> dict:
    rng = np.random.default_rng(cfg.seed)
    max_abs = max_rel = 0.0
    for _ in range(trials):
        z, w = random_points(rng, n, cfg.radius), random_points(rng, n, cfg.radius)
        a, b = compute(z, w)
        err = abs(a - b)
        max_abs = max(max_abs, err)
        max_rel = max(max_rel, err / max(abs(b), 1e-300))
    checked = max_rel if relative else max_abs
    return {
        "deviations": {"max_abs": max_abs, "max_rel": max_rel, "checked": "relative" if relative else "absolute"},
        "pass": checked <= cfg.tolerance,
    }


def verify_identity(cfg: RunConfig, identity: str, trials: int) -> dict:
    n = cfg.n if cfg.n is not None else 2
    lam, d = cfg.lam, cfg.max_weight
    if identity == "det-vs-series":
        return _pairwise_trials(
            cfg, trials, n,
            lambda z, w: (kn.kernel_anti_series(z, w, lam, d).value, kn.kernel_anti_det(z, w, lam).value),
        )
    if identity == "cauchy":
        return _pairwise_trials(
            cfg, trials, n,
            lambda z, w: (
                kn.szego_kernel_symmetrized(z, w, "series", d).value,
                kn.szego_kernel_symmetrized(z, w, "product").value,
            ),
        )
    if identity == "szego-product":
        return _pairwise_trials(
            cfg, trials, n,
            lambda z, w: (
                kn.szego_kernel_symmetrized(z, w, "determinant").value,
                kn.szego_kernel_symmetrized(z, w, "product").value,
            ),
        )
    if identity == "g2-corollary":
        if n != 2:
            raise UsageError("g2-corollary is defined for --n 2 only")
        return _pairwise_trials(
            cfg, trials, 2,
            lambda z, w: (
                kn.g2_bergman_explicit(sc.symmetrize(z), sc.symmetrize(w)),
                kn.bergman_kernel_symmetrized(z, w, 2.0).value,
            ),
        )
    if identity == "sgn-vs-anti":
        return _pairwise_trials(
            cfg, trials, n,
            lambda z, w: (kn.kernel_sgn(z, w, lam, d).value, kn.kernel_anti_series(z, w, lam, d).value),
            relative=False,
        )
    if identity == "jsnorm":
        closed = kn.js_norm_sq(n, lam)
        jac = sc.antisymmetrized_polynomial(sc.delta(n))
        analytic = qd.inner_product_analytic(jac, jac, lam).real
        rule = qd.build_rule(n, lam, n - 1)
        numeric = qd.inner_product_numeric(sc.vandermonde, sc.vandermonde, rule).real
        dev = max(abs(closed - analytic), abs(closed - numeric))
        return {
            "result": {"js_norm_sq": closed, "analytic": analytic, "quadrature": numeric},
            "deviations": {"max_abs": dev, "max_rel": dev / closed, "checked": "absolute"},
            "pass": dev <= cfg.tolerance,
        }
    if identity == "lemma-ortho":
        strict = sc.enumerate_strict_partitions(n, d)
        violations = sum(
            sc.orbit_disjointness(p, q) != (p != q) for i, p in enumerate(strict) for q in strict[i:]
        )
        pairs = len(strict) * (len(strict) + 1) // 2
        return {
            "result": {"partitions": len(strict), "pairs": pairs},
            "deviations": {"violations": violations},
            "pass": violations == 0,
        }
    raise UsageError(f"unknown identity {identity!r}; choose from {', '.join(IDENTITIES)}")


def cmd_verify(cfg: RunConfig, args) -> tuple[dict, int]:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    out = verify_identity(cfg, args.identity, args.trials)
    out.setdefault("result", {})
    out["result"] = {"identity": args.identity, "trials": args.trials, **out["result"]}
    return out, EXIT_PASS if out["pass"] else EXIT_FAIL


def cmd_gram(cfg: RunConfig, args) -> tuple[dict, int]:
    n = cfg.n if cfg.n is not None else 2
    labels = sc.enumerate_strict_partitions(n, cfg.max_weight)
    rep = qd.gram_matrix(labels, cfg.lam, args.method, args.space, cfg.samples, cfg.seed)
    result = {
        "method": rep.method,
        "space": rep.space,
        "basis_labels": [list(p) for p in rep.basis_labels],
        "matrix": [[_cx(x) for x in row] for row in rep.matrix],
        "max_offdiag": rep.max_offdiag,
        "max_diag_error": rep.max_diag_error,
    }
    if rep.stderr is not None:
        result["stderr"] = rep.stderr.tolist()
        sigma = rep.max_sigma()
        deviations = {"max_offdiag": rep.max_offdiag, "max_diag_error": rep.max_diag_error, "max_sigma": sigma}
        ok = sigma <= 3.0
    else:
        deviations = {"max_offdiag": rep.max_offdiag, "max_diag_error": rep.max_diag_error}
        ok = rep.max_deviation() <= cfg.tolerance
    return {"result": result, "deviations": deviations, "pass": ok}, EXIT_PASS if ok else EXIT_FAIL


def cmd_basis(cfg: RunConfig, args) -> tuple[dict, int]:
    n = cfg.n if cfg.n is not None else 2
    rows = []
    for m in sc.enumerate_partitions(n, cfg.max_weight):
        p = m.to_strict()
        c = sc.basis_norm_constant(p, cfg.lam)
        rows.append(
            {
                "m": list(m),
                "p": list(p),
                "c_p": c,
                "norm_a_p": 1.0 / c,
                "c_p_symmetrized": math.sqrt(kn.symmetrized_basis_constant_sq(p, cfg.lam)),
            }
        )
    return {"result": rows}, EXIT_PASS


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "gram": cmd_gram, "basis": cmd_basis}


def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        out[f"{prefix}_re"], out[f"{prefix}_im"] = value["re"], value["im"]
    elif isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list):
        out[prefix] = json.dumps(value)
    else:
        out[prefix] = value


def to_csv(payload: dict) -> str:
    result = payload["result"]
    if payload["command"] == "gram":
        rows = []
        for i, row in enumerate(result["matrix"]):
            for j, x in enumerate(row):
                rows.append(
                    {
                        "row": i,
                        "col": j,
                        "p_row": " ".join(map(str, result["basis_labels"][i])),
                        "p_col": " ".join(map(str, result["basis_labels"][j])),
                        "value_re": x["re"],
                        "value_im": x["im"],
                    }
                )
    elif isinstance(result, list):
        rows = []
        for entry in result:
            flat: dict = {}
            for k, v in entry.items():
                flat[k] = " ".join(map(str, v)) if isinstance(v, list) else v
            rows.append(flat)
    else:
        flat = {}
        _flatten("", {k: v for k, v in payload.items() if k not in ("command", "config")}, flat)
        rows = [flat]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    default_weight = 6 if args.command in ("gram", "basis") else 10 if getattr(args, "identity", "") == "lemma-ortho" else kn.DEFAULT_MAX_WEIGHT
    cfg = RunConfig(
        n=args.n,
        lam=args.lam,
        max_weight=args.max_weight if args.max_weight is not None else default_weight,
        samples=args.samples,
        seed=args.seed,
        tolerance=args.tolerance,
        format=args.format,
        radius=args.radius,
    )
    try:
        cfg.validate()
        body, code = COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        parser.error(str(exc))
    except DegeneratePointError as exc:
        print(f"symkernel: degenerate point: {exc}; rerun with --method series", file=sys.stderr)
        return EXIT_DEGENERATE
    except DomainError as exc:
        print(f"symkernel: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SymKernelError as exc:
        print(f"symkernel: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = {"command": args.command, "config": cfg.as_dict(), **body}
    if cfg.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(to_csv(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
