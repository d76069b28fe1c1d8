"""Command-line interface.

Subcommands cover the whole pipeline: exact invariants of a triangle,
reconstruction from invariants, Dirichlet spectra (finite element or exact)
written in the plain-text interchange format, hearing a triangle back from a
spectrum file, shortest billiard paths, and the isospectral drum comparison.
Reports are key=value lines with 9 significant digits so runs are diffable.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

from . import heat
from .billiards import shortest_closed_path
from .drums import compare_spectra, corner_sum_exact, gww_pair, lattice_congruent
from .errors import TrihearError
from .geometry import (
    AnglePoint,
    InvariantTriple,
    Triangle,
    angles_of,
    heat_coefficients,
    invariants_of,
    triangle_from_sides,
)
from .mesh import build_mesh
from .reconstruct import reconstruct_triangle
from .spectrum import (
    exact_equilateral,
    exact_half_square,
    load_spectrum,
    save_spectrum,
    solve_lowest,
)


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected three comma-separated values, got {len(parts)}: {text!r}"
        )
    out = []
    for pos, token in enumerate(parts, start=1):
        try:
            out.append(float(token))
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"value {pos} ({token!r}) is not a number"
            ) from None
    return tuple(out)


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _emit(lines: list[str], path: "str | None") -> None:
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def _triangle_from_args(args) -> Triangle:
    if args.sides is not None:
        return triangle_from_sides(*args.sides)
    if args.angles is None or args.area is None:
        raise ValueError("specify --sides or both --angles and --area")
    a1, a2, a3 = args.angles
    if abs(a1 + a2 + a3 - math.pi) > 1e-6:
        raise ValueError(f"angles sum to {a1 + a2 + a3}, expected pi")
    point = AnglePoint(a1, a2, math.pi - a1 - a2)
    sines = [math.sin(t) for t in point.angles]
    rho = math.sqrt(args.area / (2.0 * sines[0] * sines[1] * sines[2]))
    return triangle_from_sides(*(2.0 * rho * s for s in sines))


def _cmd_invariants(args) -> int:
    tri = _triangle_from_args(args)
    inv = invariants_of(tri)
    coeffs = heat_coefficients(inv)
    f_value = inv.perimeter**2 / (4.0 * inv.area)
    _emit(
        [
            f"A={_fmt(inv.area)}",
            f"P={_fmt(inv.perimeter)}",
            f"R={_fmt(inv.recip_angle_sum)}",
            f"f={_fmt(f_value)}",
            f"a0={_fmt(coeffs.a0)}",
            f"a_half={_fmt(coeffs.a_half)}",
            f"a1={_fmt(coeffs.a1)}",
        ],
        args.output,
    )
    return 0


def _cmd_reconstruct(args) -> int:
    inv = InvariantTriple(area=args.A, perimeter=args.P, recip_angle_sum=args.R)
    res = reconstruct_triangle(inv)
    ang = res.angles
    _emit(
        [
            f"a={_fmt(res.triangle.a)}",
            f"b={_fmt(res.triangle.b)}",
            f"c={_fmt(res.triangle.c)}",
            f"alpha={_fmt(ang.alpha)}",
            f"beta={_fmt(ang.beta)}",
            f"gamma={_fmt(ang.gamma)}",
            f"iterations={res.iterations}",
            f"residual_f={res.residual_f:.3e}",
            f"residual_g={res.residual_g:.3e}",
        ],
        args.output,
    )
    return 0


def _cmd_eigs(args) -> int:
    chosen = [
        name
        for name, val in (
            ("--sides", args.sides),
            ("--half-square", args.half_square),
            ("--equilateral", args.equilateral),
            ("--gww", args.gww),
        )
        if val is not None
    ]
    if len(chosen) != 1:
        raise ValueError(f"specify exactly one domain, got {chosen or 'none'}")

    if args.exact:
        if args.half_square is not None:
            spec = exact_half_square(args.half_square, args.k)
        elif args.equilateral is not None:
            spec = exact_equilateral(args.equilateral, args.k)
        else:
            raise ValueError("--exact applies to --half-square or --equilateral")
    else:
        if args.sides is not None:
            domain = triangle_from_sides(*args.sides)
        elif args.half_square is not None:
            leg = args.half_square
            domain = triangle_from_sides(leg * math.sqrt(2.0), leg, leg)
        elif args.equilateral is not None:
            side = args.equilateral
            domain = triangle_from_sides(side, side, side)
        else:
            drums = gww_pair()
            if args.gww not in (1, 2):
                raise ValueError(f"--gww takes 1 or 2, got {args.gww}")
            domain = drums[args.gww - 1]
        spec = solve_lowest(build_mesh(domain, args.n), args.k)

    if args.output is None:
        save_spectrum(spec, sys.stdout)
    else:
        save_spectrum(spec, args.output)
    return 0


def _cmd_hear(args) -> int:
    stage = "load_spectrum"
    try:
        spec = load_spectrum(args.spectrum)
        stage = "synthesize/fit"
        samples = heat.synthesize_many(spec, heat.choose_window(spec))
        fit = heat.fit_expansion(samples)
        stage = "hear_invariants"
        inv = heat.hear_invariants(fit)
        stage = "reconstruct"
        res = reconstruct_triangle(inv, snap_rel=heat.HEARD_SLACK)
    except TrihearError as exc:
        raise TrihearError(f"stage {stage}: {type(exc).__name__}: {exc}") from exc
    c = fit.coefficients
    _emit(
        [
            f"a0={_fmt(c.a0)}",
            f"a_half={_fmt(c.a_half)}",
            f"a1={_fmt(c.a1)}",
            f"A={_fmt(inv.area)}",
            f"P={_fmt(inv.perimeter)}",
            f"R={_fmt(inv.recip_angle_sum)}",
            f"residual={fit.max_residual:.3e}",
            f"a={_fmt(res.triangle.a)}",
            f"b={_fmt(res.triangle.b)}",
            f"c={_fmt(res.triangle.c)}",
        ],
        args.output,
    )
    return 0


def _cmd_billiard(args) -> int:
    tri = triangle_from_sides(*args.sides)
    info = shortest_closed_path(tri)
    lines = [f"kind={info.kind}", f"l0={_fmt(info.length)}"]
    for i, (x, y) in enumerate(info.points, start=1):
        lines.append(f"p{i}_x={_fmt(x)}")
        lines.append(f"p{i}_y={_fmt(y)}")
    _emit(lines, args.output)
    return 0


def _cmd_isodemo(args) -> int:
    drum1, drum2 = gww_pair()
    report = compare_spectra(args.k, args.levels)
    lines = [
        f"area_1={_fmt(drum1.area())}",
        f"area_2={_fmt(drum2.area())}",
        f"perimeter_1={_fmt(drum1.perimeter())}",
        f"perimeter_2={_fmt(drum2.perimeter())}",
        f"corner_sum_equal={int(corner_sum_exact(drum1) == corner_sum_exact(drum2))}",
        f"congruent={int(lattice_congruent(drum1, drum2))}",
    ]
    for level in report.levels:
        lines.append(f"n={level.n} max_gap={_fmt(level.max_gap)}")
    lines.append(f"gaps_decreasing={int(report.monotone_decreasing)}")
    _emit(lines, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trihear",
        description="Triangle spectral invariants, reconstruction, and drum experiments.",
    )
    parser.add_argument("--threads", type=int, default=1,
                        help="solver thread budget (1 keeps runs bit-reproducible)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="area, perimeter, reciprocal-angle sum")
    p.add_argument("--sides", type=_triple)
    p.add_argument("--angles", type=_triple)
    p.add_argument("--area", type=float)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("reconstruct", help="triangle from (A, P, R)")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--P", type=float, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("eigs", help="Dirichlet spectrum of a domain")
    p.add_argument("--sides", type=_triple)
    p.add_argument("--half-square", dest="half_square", type=float)
    p.add_argument("--equilateral", type=float)
    p.add_argument("--gww", type=int)
    p.add_argument("--exact", action="store_true",
                   help="closed-form spectrum instead of finite elements")
    p.add_argument("-n", type=int, default=64, help="mesh subdivision count")
    p.add_argument("-k", type=int, default=10, help="number of eigenvalues")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_eigs)

    p = sub.add_parser("hear", help="recover the triangle behind a spectrum file")
    p.add_argument("spectrum")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_hear)

    p = sub.add_parser("billiard", help="shortest closed billiard path")
    p.add_argument("--sides", type=_triple, required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_billiard)

    p = sub.add_parser("isodemo", help="isospectral drum comparison")
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--levels", type=_int_list, default=[8, 16, 32])
    p.add_argument("--output")
    p.set_defaults(func=_cmd_isodemo)
    return parser


def main(argv: "Sequence[str] | None" = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads != 1:
        try:
            from threadpoolctl import threadpool_limits
        except ImportError:
            print("warning: threadpoolctl unavailable, running serial", file=sys.stderr)
        else:
            with threadpool_limits(limits=args.threads):
                return _dispatch(args)
    return _dispatch(args)


def _dispatch(args) -> int:
    try:
        return args.func(args)
    except (TrihearError, ValueError, OSError) as exc:
        name = type(exc).__name__
        print(f"error: {name}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
