"""Command-line front end: one JSON document per invocation on standard output.

Exit codes: 0 success, 1 domain error (JSON {"error": name, "detail": text}),
2 usage error (argparse diagnostic on standard error).
"""

from __future__ import annotations

import argparse
import sys
import warnings
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arrows import build_correspondence, table_down, table_up
from .discriminant import (
    DiscriminantGroup,
    discriminant_group,
    isotropic_elements,
    milgram_signature,
    q_disc,
    torsion_and_multiples,
)
from .eisenstein import TruncationPolicy, eisenstein_spec, eisenstein_value, laplacian_residual
from .errors import LatticeFormsError, SchemaError
from .io import (
    dumps,
    frac_str,
    parse_lattice_file,
    read_json,
    sublattice_from_json,
    table_from_json,
    table_to_json,
    zbasis_from_json,
)
from .lattice import EvenLattice, matvec
from .lseries import LSeriesQuery, isolating_modulus, lseries_eval, primitivity_check, represent_index, split_from_full
from .theta import CoefficientTable, GrassmannPoint, siegel_theta_value, theta_coefficients
from .weil import (
    MetaplecticWord,
    SL2Matrix,
    decompose_sl2,
    rho_S,
    rho_T,
    rho_Z,
    rho_standard_lift,
    rho_word,
    verify_congruence_trivial,
)

# ---------------------------------------------------------------------------
# argument types
# ---------------------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")] if text.strip() else []
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(n: int | tuple[int, ...]):
    sizes = (n,) if isinstance(n, int) else n

    def parse(text: str) -> list[float]:
        try:
            vals = [float(x) for x in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
        if len(vals) not in sizes:
            raise argparse.ArgumentTypeError(f"expected {' or '.join(map(str, sizes))} numbers, got {text!r}")
        return vals

    return parse


def _complex(vals: list[float]) -> complex:
    return complex(vals[0], vals[1] if len(vals) > 1 else 0.0)


def _matrix_json(R: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in R]


def coset_arg(L: EvenLattice, D: DiscriminantGroup, values: Sequence[int]):
    """Residues if the length matches the divisors, else dual-basis coordinates y (x = G^-1 y)."""
    if len(values) == len(D.divisors):
        return D.normalize(values)
    if len(values) == L.rank:
        return D.reduce(matvec(L.gram_inverse, values))
    raise SchemaError(
        f"--coset needs {len(D.divisors)} residues or {L.rank} dual coordinates, got {len(values)} values"
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_lattice_info(args) -> dict:
    L = parse_lattice_file(args.file)
    D = discriminant_group(L)
    return {
        "rank": L.rank,
        "signature": list(L.signature),
        "det": L.determinant,
        "level": D.level,
        "disc_order": D.order,
        "sig_mod8": D.signature_mod8,
    }


def cmd_disc(args) -> dict:
    L = parse_lattice_file(args.file)
    D = discriminant_group(L)
    doc = {
        "elementary_divisors": list(D.divisors),
        "order": D.order,
        "level": D.level,
        "milgram_signature": milgram_signature(D),
        "elements": [{"coset": list(x), "q": frac_str(q_disc(D, x))} for x in D.elements],
        "isotropic": [list(x) for x in isotropic_elements(D)],
    }
    if args.torsion is not None:
        tor, mult = torsion_and_multiples(D, args.torsion)
        doc["torsion"] = {"n": args.torsion, "torsion": [list(x) for x in tor], "multiples": [list(x) for x in mult]}
    return doc


def cmd_weilrep(args) -> dict:
    L = parse_lattice_file(args.file)
    D = discriminant_group(L)
    doc: dict = {"elementary_divisors": list(D.divisors)}
    if args.gen:
        R = {"T": rho_T, "S": rho_S, "Z": rho_Z}[args.gen](D)
        doc["generator"] = args.gen
    elif args.word is not None:
        w = MetaplecticWord.parse(args.word)
        R = rho_word(D, w)
        doc["word"] = str(w)
    elif args.matrix is not None:
        a, b, c, d = args.matrix
        M = SL2Matrix(a, b, c, d)
        R = rho_standard_lift(D, M)
        doc["word"] = str(decompose_sl2(M))
    else:
        R = None
    if R is not None:
        doc["matrix"] = _matrix_json(R)
    if args.check_congruence is not None:
        rep = verify_congruence_trivial(D, args.samples, args.check_congruence, args.seed)
        doc["congruence"] = rep.to_json()
    if R is None and args.check_congruence is None:
        raise SchemaError("one of --gen, --word, --matrix or --check-congruence is required")
    return doc


def cmd_theta(args) -> dict:
    L = parse_lattice_file(args.file)
    t = theta_coefficients(L, args.bound)
    if args.coset is not None:
        lam = coset_arg(L, t.disc, args.coset)
        t = CoefficientTable(t.divisors, t.max_norm, {k: v for k, v in t.entries.items() if k[0] == lam}, t.disc)
    return table_to_json(t)


def cmd_siegel_theta(args) -> dict:
    L = parse_lattice_file(args.file)
    z = GrassmannPoint.from_vectors(L, zbasis_from_json(read_json(args.z_basis), str(args.z_basis)))
    tau = _complex(args.tau)
    res = siegel_theta_value(L, tau, z, eps=args.eps)
    doc = {"elementary_divisors": list(discriminant_group(L).divisors)}
    doc.update(res.to_json())
    return doc


def cmd_arrows(args) -> dict:
    L = parse_lattice_file(args.file)
    M = sublattice_from_json(L, read_json(args.sublattice), str(args.sublattice))
    corr = build_correspondence(L, M)
    if args.up:
        t = table_from_json(read_json(args.table), L, str(args.table))
        out = table_up(corr, t)
    else:
        t = table_from_json(read_json(args.table), M.lattice, str(args.table))
        out = table_down(corr, t)
    return table_to_json(out)


def cmd_eisenstein(args) -> dict:
    L = parse_lattice_file(args.file)
    D = discriminant_group(L)
    lam = coset_arg(L, D, args.coset)
    spec = eisenstein_spec(L, lam, args.weight, _complex(args.s), D)
    policy = TruncationPolicy(args.cutoff)
    tau = _complex(args.tau)
    doc = {"elementary_divisors": list(D.divisors)}
    doc.update(eisenstein_value(spec, tau, policy).to_json())
    if args.laplacian is not None:
        doc["laplacian_residual"] = laplacian_residual(spec, tau, policy, args.laplacian)
    return doc


def cmd_lseries(args) -> dict:
    table = table_from_json(read_json(args.table), None, str(args.table))
    lam = table.reduce(args.coset)
    if len(args.coset) != len(table.divisors):
        raise SchemaError(f"--coset needs {len(table.divisors)} residues")
    s = _complex(args.s)
    q = LSeriesQuery(lam, args.t, s, args.coprime_to, args.nmax)
    doc = lseries_eval(table, q).to_json()
    if args.isolate is not None:
        doc["isolation"] = isolating_modulus(table, lam, args.t, s.real, args.isolate).to_json()
    return doc


def cmd_split_represent(args) -> dict:
    L = parse_lattice_file(args.file)
    k_rank = L.rank - 2 if args.k_rank is None else args.k_rank
    SL = split_from_full(L, k_rank)
    lam = coset_arg(L, SL.disc, args.coset)
    v = represent_index(SL, lam, args.n)
    return {"vector": [frac_str(x) for x in v], "primitive": primitivity_check(L, v), "q": frac_str(L.q(v))}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latticeforms", description="Even lattices, Weil representations and modular forms.")
    sub = p.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    s = sub.add_parser("lattice-info", help="rank, signature, determinant, level")
    s.add_argument("file")
    s.set_defaults(func=cmd_lattice_info)

    s = sub.add_parser("disc", help="discriminant form")
    s.add_argument("file")
    s.add_argument("--torsion", type=int)
    s.set_defaults(func=cmd_disc)

    s = sub.add_parser("weilrep", help="Weil representation matrices")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--gen", choices=["T", "S", "Z"])
    g.add_argument("--word")
    g.add_argument("--matrix", type=_int_list)
    s.add_argument("--check-congruence", type=int, metavar="N")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_weilrep)

    s = sub.add_parser("theta", help="theta series coefficients (positive definite)")
    s.add_argument("file")
    s.add_argument("--bound", type=_rational, required=True)
    s.add_argument("--coset", type=_int_list)
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("siegel-theta", help="Siegel theta function at (tau, z)")
    s.add_argument("file")
    s.add_argument("--tau", type=_float_list(2), required=True)
    s.add_argument("--z-basis", required=True)
    s.add_argument("--eps", type=float, default=1e-10)
    s.set_defaults(func=cmd_siegel_theta)

    s = sub.add_parser("arrows", help="up/down arrows between L and a sublattice")
    s.add_argument("file")
    s.add_argument("--sublattice", required=True)
    d = s.add_mutually_exclusive_group(required=True)
    d.add_argument("--up", action="store_true")
    d.add_argument("--down", action="store_true")
    s.add_argument("--table", required=True)
    s.set_defaults(func=cmd_arrows)

    s = sub.add_parser("eisenstein", help="truncated Eisenstein series")
    s.add_argument("file")
    s.add_argument("--coset", type=_int_list, required=True)
    s.add_argument("--weight", type=_rational, required=True)
    s.add_argument("--s", type=_float_list((1, 2)), required=True)
    s.add_argument("--tau", type=_float_list(2), required=True)
    s.add_argument("--cutoff", type=int, required=True)
    s.add_argument("--laplacian", type=float, metavar="H")
    s.set_defaults(func=cmd_eisenstein)

    s = sub.add_parser("lseries", help="truncated symmetric-square L-series of a table")
    s.add_argument("--table", required=True)
    s.add_argument("--coset", type=_int_list, required=True)
    s.add_argument("--t", type=_rational, required=True)
    s.add_argument("--s", type=_float_list((1, 2)), required=True)
    s.add_argument("--coprime-to", type=int, default=1)
    s.add_argument("--nmax", type=int, required=True)
    s.add_argument("--isolate", type=float, metavar="MARGIN")
    s.set_defaults(func=cmd_lseries)

    s = sub.add_parser("split-represent", help="primitive vector realising an index on K + H")
    s.add_argument("file")
    s.add_argument("--k-rank", type=int)
    s.add_argument("--coset", type=_int_list, required=True)
    s.add_argument("--n", type=_rational, required=True)
    s.set_defaults(func=cmd_split_represent)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            doc = args.func(args)
    except LatticeFormsError as exc:
        print(dumps({"error": type(exc).__name__, "detail": str(exc)}))
        return 1
    except OSError as exc:
        print(dumps({"error": "IoError", "detail": str(exc)}))
        return 1
    except ValueError as exc:
        print(dumps({"error": "MalformedInput", "detail": str(exc)}))
        return 1
    print(dumps(doc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
