"""Command-line surface: generate matrices, run verification sweeps, emit
kernel reports.

Exchange format (JSON): ``{"format_version": 1, "rows": R, "cols": C,
"entries": [...]}`` where ``entries`` is a row-major list of R*C polynomials,
each a list of coefficient strings in ascending degree ("num" or "num/den",
denominators positive, fractions reduced).  The zero polynomial is the empty
list.  CSV holds one rational per cell and is only available for constant
matrices.

Exit codes: 0 all requested checks pass, 1 at least one verification check
fails, 2 usage or I/O error.  The environment variable HANKELMONDE_SEED
overrides the sweep seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import factorize, generators, kernels, oracle, rightinv
from .errors import CaseViolation, UnknownFamily
from .generators import Params
from .scalarpoly import Poly, PolyMatrix, eval_matrix, mat_mul

FORMAT_VERSION = 1
SEED_ENV_VAR = "HANKELMONDE_SEED"


class CliError(Exception):
    """Usage or I/O error; maps to exit code 2."""


# --------------------------------------------------------------------------
# serialization


def rational_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def poly_to_strings(p: Poly) -> list[str]:
    return [rational_str(c) for c in p.coeffs]


def poly_from_strings(cs) -> Poly:
    return Poly([Fraction(c) for c in cs])


def matrix_to_obj(m: PolyMatrix) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "rows": m.rows,
        "cols": m.cols,
        "entries": [poly_to_strings(e) for e in m.entries],
    }


def matrix_from_obj(obj: dict) -> PolyMatrix:
    rows, cols = obj["rows"], obj["cols"]
    entries = [poly_from_strings(cs) for cs in obj["entries"]]
    return PolyMatrix(rows, cols, entries)


def matrix_to_csv(m: PolyMatrix) -> str:
    if not m.is_constant():
        raise CliError("csv output is only defined for constant matrices; use json")
    lines = []
    for i in range(m.rows):
        lines.append(
            ",".join(rational_str(e.coeffs[0]) if e.coeffs else "0" for e in m.row(i))
        )
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str) -> PolyMatrix:
    rows = [line.split(",") for line in text.strip().splitlines() if line.strip()]
    if not rows:
        return PolyMatrix.zeros(0, 0)
    cols = len(rows[0])
    entries = [Poly.constant(Fraction(cell)) for row in rows for cell in row]
    return PolyMatrix(len(rows), cols, entries)


def dump_matrix(m: PolyMatrix, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(matrix_to_obj(m), indent=2) + "\n"
    if fmt == "csv":
        return matrix_to_csv(m)
    raise CliError(f"unknown format {fmt!r}")


def load_matrix(text: str, fmt: str) -> PolyMatrix:
    if fmt == "json":
        return matrix_from_obj(json.loads(text))
    if fmt == "csv":
        return matrix_from_csv(text)
    raise CliError(f"unknown format {fmt!r}")


# --------------------------------------------------------------------------
# matrix families


def _params(q=None, r=None, mu=None, nu=None) -> Params:
    missing = [n for n, v in (("q", q), ("r", r), ("mu", mu), ("nu", nu)) if v is None]
    if missing:
        raise CliError(f"missing required parameter(s): {', '.join('--' + n for n in missing)}")
    return Params(q, r, mu, nu)


def _need(**kwargs):
    missing = [n for n, v in kwargs.items() if v is None]
    if missing:
        raise CliError(f"missing required parameter(s): {', '.join('--' + n for n in missing)}")
    return [kwargs[n] for n in kwargs]


# family name -> (builder taking the parsed args, human description)
FAMILIES = {
    "u": (lambda a: generators.make_u(*_need(q=a.q)), "column (1, z, ..., z^(q-1))^T"),
    "w": (lambda a: generators.make_w(*_need(r=a.r)), "row (1, z, ..., z^(r-1))"),
    "M": (
        lambda a: generators.make_M_deriv(
            Params(*_need(q=a.q, r=a.r), 1, 1), a.k if a.k is not None else 0
        ),
        "M(z) = u(z) w(z), or its k-th derivative with --k",
    ),
    "calM": (lambda a: generators.make_calM(_params(a.q, a.r, a.mu, a.nu)), "blocks M^(i+j)(z)"),
    "calN": (
        lambda a: generators.make_calN(_params(a.q, a.r, a.mu, a.nu)),
        "blocks M^(i+j)(z) / (i! j!)",
    ),
    "U": (lambda a: generators.make_U(*_need(q=a.q)), "confluent Vandermonde square factor"),
    "W": (lambda a: generators.make_W(*_need(r=a.r)), "row-derivative square factor"),
    "Utilde": (lambda a: generators.make_U_tilde(*_need(q=a.q)), "normalised U, entries C(i,j) z^(i-j)"),
    "Wtilde": (lambda a: generators.make_W_tilde(*_need(r=a.r)), "normalised W, entries C(j,i) z^(j-i)"),
    "Ak": (
        lambda a: generators.make_Ak(*_need(q=a.q, r=a.r, k=a.k)),
        "quasi-symmetric block, entries (k; i, j) z^(k-i-j)",
    ),
    "calA": (lambda a: generators.make_calA(_params(a.q, a.r, a.mu, a.nu)), "blocks A^(i+j)(z)"),
    "calAbar": (
        lambda a: generators.make_calAbar(_params(a.q, a.r, a.mu, a.nu)),
        "constant core, blocks e_j f_i^T",
    ),
    "calAhat": (
        lambda a: generators.make_calAhat(_params(a.q, a.r, a.mu, a.nu)),
        "constant core with binomial antidiagonals",
    ),
    "calAtilde": (
        lambda a: generators.make_calAtilde(_params(a.q, a.r, a.mu, a.nu)),
        "constant core with factorial antidiagonals",
    ),
    "L": (
        lambda a: generators.make_L(*_need(mu=a.mu, q=a.q)),
        "block lower triangular L_{mu,q}(z)",
    ),
    "F": (
        lambda a: kernels.make_Fk(*_need(r=a.r), a.k if a.k is not None else 0),
        "bidiagonal annihilator of w(z); --k selects the truncated F_k",
    ),
    "K": (lambda a: kernels.make_K(*_need(nu=a.nu, r=a.r)), "kernel basis of N0(z) for nu <= q"),
    "G": (lambda a: kernels.make_G(*_need(r=a.r)), "strictly upper triangular geometric block"),
    "Kbar": (
        lambda a: kernels.make_Kbar(*_need(q=a.q, r=a.r, nu=a.nu)),
        "kernel basis of N0(z) for q < nu < q+r",
    ),
    "Kbar_j": (
        lambda a: kernels.make_Kbar_j(*_need(q=a.q, r=a.r, nu=a.nu, j=a.j)),
        "j-th factor of the kernel product for N(z)",
    ),
    "kernelN0": (
        lambda a: kernels.kernel_basis_N0(*_need(q=a.q, r=a.r, nu=a.nu)).basis,
        "kernel basis of N0(z), all cases",
    ),
    "kernelN": (
        lambda a: kernels.kernel_basis_N(_params(a.q, a.r, a.mu, a.nu)).basis,
        "kernel basis of N(z), all cases",
    ),
    "B0": (
        lambda a: rightinv.make_B0(*_need(q=a.q, r=a.r, nu=a.nu)),
        "constant right inverse of the row (A^0, ..., A^(nu-1))",
    ),
    "C": (
        lambda a: rightinv.make_C_constant(*_need(q=a.q, r=a.r, nu=a.nu)).inverse,
        "constant right inverse of M0(z) (needs r >= q, nu >= q)",
    ),
    "Hk": (
        lambda a: rightinv.make_Hk(*_need(q=a.q, r=a.r, k=a.k)),
        "conjugated block W~_r(z) D_r^-1 B^k D_q^-1 U~_q(z)",
    ),
    "Minv": (
        lambda a: rightinv.make_M_right_inverse(_params(a.q, a.r, a.mu, a.nu)).inverse,
        "right inverse of M(z) (needs nu >= q, mu <= r)",
    ),
    "constKernel": (
        lambda a: rightinv.constant_kernel_basis(*_need(q=a.q, r=a.r, nu=a.nu)),
        "constant basis of the z-independent part of ker M0(z)",
    ),
}


def build_family(family: str, args) -> PolyMatrix:
    try:
        builder, _ = FAMILIES[family]
    except KeyError:
        raise UnknownFamily(
            f"unknown family {family!r}; known: {', '.join(sorted(FAMILIES))}"
        )
    return builder(args)


# --------------------------------------------------------------------------
# verification checks


def _check_identity(name):
    def run(p: Params, sample_count: int, seed: int) -> bool:
        return factorize.check_identity(name, p).holds

    return run


def _check_rank(p: Params, sample_count: int, seed: int) -> bool:
    pts = oracle.sample_points(sample_count, seed)
    want = factorize.rank_formula(p)
    mats = (generators.make_calM(p), generators.make_calN(p), generators.make_calA(p))
    return all(oracle.rank_at(m, z) == want for m in mats for z in pts)


def _check_dets(p: Params, sample_count: int, seed: int) -> bool:
    cf = factorize.det_closed_forms(p)
    if cf.detAbar is None:
        return True  # not the square invertible shape; nothing to certify
    abar = generators.make_calAbar(p)
    if oracle.det_fraction_free(abar) != cf.detAbar:
        return False
    if factorize.abar_inversion_count(p.q, p.r) != factorize.abar_sign_exponent(p.q, p.r):
        return False
    pts = oracle.sample_points(max(2, sample_count), seed)[:2]
    calm = generators.make_calM(p)
    caln = generators.make_calN(p)
    for z in pts:
        if oracle.det_fraction_free(eval_matrix(calm, z)) != cf.detM:
            return False
        if oracle.det_fraction_free(eval_matrix(caln, z)) != cf.detN:
            return False
    return True


def _kernel_ok(basis_m: PolyMatrix, target_m: PolyMatrix, dim: int, pts) -> bool:
    if basis_m.cols != dim:
        return False
    if not oracle.is_zero_poly_matrix(mat_mul(target_m, basis_m)):
        return False
    for z in pts:
        if dim and oracle.rank_at(basis_m, z) != dim:
            return False
        if oracle.rank_at(target_m, z) != target_m.cols - dim:
            return False
        if not oracle.spans_equal_at(basis_m, oracle.nullspace_at(target_m, z), z):
            return False
    return True


def _check_kernel_n0(p: Params, sample_count: int, seed: int) -> bool:
    kb = kernels.kernel_basis_N0(p.q, p.r, p.nu)
    n0 = generators.make_calN(Params(p.q, p.r, 1, p.nu))
    pts = oracle.sample_points(sample_count, seed)
    return kb.claimed_dim == kernels.kernel_dim(p, "N0") and _kernel_ok(
        kb.basis, n0, kb.claimed_dim, pts
    )


def _check_kernel_n(p: Params, sample_count: int, seed: int) -> bool:
    kb = kernels.kernel_basis_N(p)
    n = generators.make_calN(p)
    pts = oracle.sample_points(sample_count, seed)
    return kb.claimed_dim == kernels.kernel_dim(p, "N") and _kernel_ok(
        kb.basis, n, kb.claimed_dim, pts
    )


CHECKS = {name: _check_identity(name) for name in factorize.IDENTITY_NAMES}
CHECKS.update(
    {
        "rank": _check_rank,
        "dets": _check_dets,
        "kernelN0": _check_kernel_n0,
        "kernelN": _check_kernel_n,
    }
)


def run_check(name: str, p: Params, sample_count: int, seed: int) -> dict:
    t0 = time.perf_counter()
    holds = CHECKS[name](p, sample_count, seed)
    return {
        "check": name,
        "q": p.q,
        "r": p.r,
        "mu": p.mu,
        "nu": p.nu,
        "holds": holds,
        "elapsed": round(time.perf_counter() - t0, 6),
    }


def _run_tuple(job) -> list[dict]:
    (q, r, mu, nu), checks, sample_count, seed = job
    p = Params(q, r, mu, nu)
    return [run_check(name, p, sample_count, seed) for name in checks]


# --------------------------------------------------------------------------
# sweep configuration and the verify command


@dataclass
class SweepConfig:
    q_range: tuple[int, int]
    r_range: tuple[int, int]
    mu_range: tuple[int, int]
    nu_range: tuple[int, int]
    checks: list[str] = field(default_factory=lambda: list(CHECKS))
    sample_count: int = 3
    seed: int = 0
    output_path: Optional[str] = None
    format: str = "json"
    jobs: int = 1

    def __post_init__(self):
        for name, (lo, hi) in (
            ("q", self.q_range),
            ("r", self.r_range),
            ("mu", self.mu_range),
            ("nu", self.nu_range),
        ):
            if lo < 1 or hi < lo:
                raise CliError(f"empty or invalid range for {name}: {lo}..{hi}")
        if self.sample_count < 1:
            raise CliError("sample count must be >= 1")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise CliError(
                f"unknown check(s): {', '.join(unknown)}; known: {', '.join(CHECKS)}"
            )


def _grid(cfg: SweepConfig):
    for q in range(cfg.q_range[0], cfg.q_range[1] + 1):
        for r in range(cfg.r_range[0], cfg.r_range[1] + 1):
            for mu in range(cfg.mu_range[0], cfg.mu_range[1] + 1):
                for nu in range(cfg.nu_range[0], cfg.nu_range[1] + 1):
                    yield (q, r, mu, nu)


def cmd_verify(cfg: SweepConfig) -> int:
    """Run the configured checks over the parameter grid and write a report."""
    seed = cfg.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise CliError(f"{SEED_ENV_VAR} must be an integer, got {env!r}")
    jobs = [(tup, cfg.checks, cfg.sample_count, seed) for tup in _grid(cfg)]
    t0 = time.perf_counter()
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            per_tuple = list(pool.map(_run_tuple, jobs))
    else:
        per_tuple = [_run_tuple(j) for j in jobs]
    results = [rec for chunk in per_tuple for rec in chunk]
    all_passed = all(rec["holds"] for rec in results)
    report = {
        "format_version": FORMAT_VERSION,
        "seed": seed,
        "sample_count": cfg.sample_count,
        "checks": list(cfg.checks),
        "tuples": len(jobs),
        "results": results,
        "all_passed": all_passed,
        "elapsed": round(time.perf_counter() - t0, 6),
    }
    if cfg.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    elif cfg.format == "csv":
        lines = ["check,q,r,mu,nu,holds,elapsed"]
        for rec in results:
            lines.append(
                f"{rec['check']},{rec['q']},{rec['r']},{rec['mu']},{rec['nu']},"
                f"{str(rec['holds']).lower()},{rec['elapsed']}"
            )
        text = "\n".join(lines) + "\n"
    else:
        raise CliError(f"unknown report format {cfg.format!r}")
    _write_output(text, cfg.output_path)
    summary = f"{len(results)} checks over {len(jobs)} tuples: " + (
        "all passed" if all_passed else "FAILURES PRESENT"
    )
    print(summary, file=sys.stderr)
    return 0 if all_passed else 1


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}")


# --------------------------------------------------------------------------
# gen and kernel commands


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"not a rational number: {s!r} ({exc})")


def cmd_gen(args) -> int:
    m = build_family(args.family, args)
    if args.at is not None:
        m = eval_matrix(m, parse_rational(args.at))
    _write_output(dump_matrix(m, args.format), args.output)
    return 0


def cmd_kernel(args) -> int:
    target = args.target
    if target == "N0":
        q, r, nu = _need(q=args.q, r=args.r, nu=args.nu)
        kb = kernels.kernel_basis_N0(q, r, nu)
        p = Params(q, r, 1, nu)
        tgt_matrix = generators.make_calN(p)
    elif target in ("N", "M"):
        p = _params(args.q, args.r, args.mu, args.nu)
        kb = kernels.kernel_basis_N(p) if target == "N" else kernels.kernel_basis_M(p)
        tgt_matrix = generators.make_calN(p) if target == "N" else generators.make_calM(p)
    else:
        raise CliError(f"unknown kernel target {target!r}; use N0, N or M")

    seed = args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        seed = int(env)
    pts = oracle.sample_points(args.samples, seed)
    annihilates = oracle.is_zero_poly_matrix(mat_mul(tgt_matrix, kb.basis))
    full_rank = all(
        oracle.rank_at(kb.basis, z) == kb.claimed_dim for z in pts
    ) if kb.claimed_dim else True
    span_ok = all(
        oracle.spans_equal_at(kb.basis, oracle.nullspace_at(tgt_matrix, z), z) for z in pts
    )
    dims_ok = kb.basis.cols == kb.claimed_dim and all(
        tgt_matrix.cols - oracle.rank_at(tgt_matrix, z) == kb.claimed_dim for z in pts
    )
    ok = annihilates and full_rank and span_ok and dims_ok
    report = {
        "format_version": FORMAT_VERSION,
        "target": target,
        "q": p.q,
        "r": p.r,
        "mu": p.mu,
        "nu": p.nu,
        "case": kb.case_tag.value,
        "dim": kb.claimed_dim,
        "basis": matrix_to_obj(kb.basis),
        "oracle": {
            "sample_points": [rational_str(z) for z in pts],
            "annihilates": annihilates,
            "full_column_rank": full_rank,
            "dims_match": dims_ok,
            "span_equal": span_ok,
        },
    }
    _write_output(json.dumps(report, indent=2) + "\n", args.output)
    return 0 if ok else 1


# --------------------------------------------------------------------------
# argument parsing


def _parse_range(s: str) -> tuple[int, int]:
    try:
        if ".." in s:
            lo, hi = s.split("..", 1)
            return (int(lo), int(hi))
        v = int(s)
        return (v, v)
    except ValueError:
        raise CliError(f"bad range {s!r}; use N or LO..HI")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hankelmonde",
        description=(
            "Exact-arithmetic toolkit for block-Hankel confluent Vandermonde "
            "matrix polynomials."
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate one matrix family")
    gen.add_argument("family", help=f"one of: {', '.join(sorted(FAMILIES))}")
    for name in ("q", "r", "mu", "nu", "k", "j"):
        gen.add_argument(f"--{name}", type=int, default=None)
    gen.add_argument("--at", default=None, metavar="Z0", help="evaluate at a rational point")
    gen.add_argument("--format", choices=("json", "csv"), default="json")
    gen.add_argument("-o", "--output", default=None, help="output path (default stdout)")

    ver = sub.add_parser("verify", help="run verification sweeps over a parameter grid")
    ver.add_argument("--checks", default=None, help="comma-separated check names")
    ver.add_argument("--all", action="store_true", help="run every known check")
    ver.add_argument("--max", type=int, default=None, help="shorthand: all ranges 1..N")
    for name in ("q", "r", "mu", "nu"):
        ver.add_argument(f"--{name}", default=None, metavar="LO..HI")
    ver.add_argument("--samples", type=int, default=3)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--jobs", type=int, default=1, help="worker processes for the sweep")
    ver.add_argument("--format", choices=("json", "csv"), default="json")
    ver.add_argument("-o", "--output", default=None)

    ker = sub.add_parser("kernel", help="emit a kernel basis with oracle cross-checks")
    ker.add_argument("--target", required=True, choices=("N0", "N", "M"))
    for name in ("q", "r", "mu", "nu"):
        ker.add_argument(f"--{name}", type=int, default=None)
    ker.add_argument("--samples", type=int, default=3)
    ker.add_argument("--seed", type=int, default=0)
    ker.add_argument("-o", "--output", default=None)

    return ap


def _sweep_config(args) -> SweepConfig:
    if args.checks and args.all:
        raise CliError("use either --checks or --all, not both")
    if args.all or not args.checks:
        checks = list(CHECKS)
    else:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    default = (1, args.max) if args.max else (1, 2)
    ranges = {}
    for name in ("q", "r", "mu", "nu"):
        raw = getattr(args, name)
        ranges[name] = _parse_range(raw) if raw is not None else default
    return SweepConfig(
        q_range=ranges["q"],
        r_range=ranges["r"],
        mu_range=ranges["mu"],
        nu_range=ranges["nu"],
        checks=checks,
        sample_count=args.samples,
        seed=args.seed,
        output_path=args.output,
        format=args.format,
        jobs=args.jobs,
    )


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "verify":
            return cmd_verify(_sweep_config(args))
        if args.command == "kernel":
            return cmd_kernel(args)
        raise CliError(f"unknown command {args.command!r}")
    except (CliError, UnknownFamily, CaseViolation, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
