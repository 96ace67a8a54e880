"""plg command line.

Exit codes: 0 all checks pass, 1 some check failed (witnesses in the report),
2 invalid input or a violated precondition.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .coordinatize import coordinatize, identify_field
from .corpus import generate
from .errors import (CapExceededError, InvalidInputError, NotArguesianError, PlgError,
                     PreconditionError)
from .formats import dumps, loads
from .geometry import (DEFAULT_CAP, Geometry, check_axioms, desargues_holds,
                       irreducible_components, is_isomorphism, reassemble)
from .hermitian import (HermitianSpace, check_form, form_uniqueness, oracle_from_gram,
                        piron_reconstruct)
from .lattice import FiniteLattice, alpha_iso, atoms_geometry, beta_iso, from_geometry, predicates
from .ortho import (OrthoGeometry, OrthoLattice, PropSystem, check_ortho_axioms,
                    check_prop_system, closed_elements, hilbert_components, sasaki,
                    to_ortho_lattice, triple_round_trip)


@dataclass
class RunReport:
    command: str
    input_sha256: str
    checks: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    error: str | None = None
    elapsed_s: float = 0.0

    @property
    def passed(self) -> bool:
        return self.error is None and all(self.checks.values())

    def as_dict(self) -> dict:
        d = {"command": self.command, "input_sha256": self.input_sha256,
             "checks": self.checks, "witnesses": _plain(self.witnesses),
             "details": _plain(self.details), "elapsed_s": round(self.elapsed_s, 3)}
        if self.error is not None:
            d["error"] = self.error
        return d

    def text(self) -> str:
        out = [f"command: {self.command}", f"input: sha256:{self.input_sha256}"]
        if self.error is not None:
            out.append(f"error: {self.error}")
        for k, v in self.checks.items():
            out.append(f"check {k}: {'PASS' if v else 'FAIL'}")
        for k, v in self.witnesses.items():
            out.append(f"witness {k}: {json.dumps(_plain(v))}")
        for k, v in self.details.items():
            if isinstance(v, str) and "\n" in v:
                out.append(f"{k}:")
                out.extend("  " + ln for ln in v.splitlines())
            else:
                out.append(f"{k}: {json.dumps(_plain(v))}")
        return "\n".join(out) + "\n"


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (frozenset, set)):
        return sorted(_plain(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "item"):
        return x.item()
    return x


def _geometry_of(obj) -> Geometry:
    if isinstance(obj, OrthoGeometry):
        return obj.geometry
    if isinstance(obj, Geometry):
        return obj
    raise InvalidInputError(f"expected a geometry, got a {type(obj).__name__}")


# ---- commands ----

def cmd_check(obj, args, rep: RunReport):
    r = check_axioms(_geometry_of(obj))
    rep.checks.update(G1=r.G1, G2=r.G2, G3=r.G3, symmetric=r.symmetric)
    if r.witness is not None:
        rep.witnesses[r.failed or "axioms"] = r.witness


def cmd_lattice(obj, args, rep: RunReport):
    L = obj if isinstance(obj, FiniteLattice) else from_geometry(_geometry_of(obj), args.cap)
    r = predicates(L)
    rep.details["elements"] = L.n
    rep.details["atoms"] = len(L.atoms)
    rep.checks.update(r.as_dict())
    rep.witnesses.update(r.witnesses)


def cmd_decompose(obj, args, rep: RunReport):
    g = _geometry_of(obj)
    comps = irreducible_components(g)
    rep.details["components"] = comps
    _, m = reassemble(g, comps)
    rep.checks["coproduct_recovered"] = is_isomorphism(m)
    if isinstance(obj, OrthoGeometry):
        hilbert_components(obj)
        rep.checks["components_closed_and_orthogonal"] = True


def cmd_desargues(obj, args, rep: RunReport):
    d = desargues_holds(_geometry_of(obj))
    rep.checks["desargues"] = d.holds
    if d.witness is not None:
        rep.witnesses["desargues"] = {"center_a_b": d.witness}


def format_model(model, g: Geometry) -> str:
    k = model.field
    out = [f"field order {k.order}", f"commutative {str(k.commutative).lower()}", "add"]
    out += [" ".join(map(str, r)) for r in k.add]
    out.append("mul")
    out += [" ".join(map(str, r)) for r in k.mul]
    out.append(f"coordinates dim {model.vspace_dim}")
    out += [f"{x} " + " ".join(map(str, v)) for x, v in enumerate(model.coords)]
    return "\n".join(out)


def cmd_coordinatize(obj, args, rep: RunReport):
    g = _geometry_of(obj)
    try:
        model = coordinatize(g, seed=args.seed)
    except NotArguesianError as e:
        rep.checks["arguesian"] = False
        rep.witnesses["desargues"] = {"center_a_b": e.witness}
        return
    rep.checks["arguesian"] = True
    rep.checks["rebuilt_isomorphic"] = True   # coordinatize verifies this or raises
    ident = identify_field(model.field)
    rep.details["prime_field"] = ident is not None
    if ident is not None:
        rep.details["identification"] = ident
    rep.details["model"] = format_model(model, g)


def _as_ortho_geometry(obj) -> OrthoGeometry:
    if isinstance(obj, OrthoGeometry):
        return obj
    if isinstance(obj, Geometry):
        return OrthoGeometry(obj, frozenset())
    raise InvalidInputError(f"expected an ortho geometry, got a {type(obj).__name__}")


def cmd_ortho_check(obj, args, rep: RunReport):
    r = check_ortho_axioms(_as_ortho_geometry(obj), args.cap)
    d = r.as_dict()
    for k in ("O1", "O2", "O3", "O4", "O5"):
        rep.checks[k] = d[k]
    rep.details.update({k: d[k] for k in ("O6", "O7", "state_space")})
    rep.details["closed_subspaces"] = r.closed_count
    rep.witnesses.update(r.witnesses)


def cmd_propsys(obj, args, rep: RunReport):
    if isinstance(obj, (OrthoLattice, PropSystem)):
        C = obj
    else:
        C, _ = closed_elements(to_ortho_lattice(_as_ortho_geometry(obj), args.cap))
    r = check_prop_system(C)
    rep.details["elements"] = C.n
    rep.checks.update({k: v for k, v in r.as_dict().items()})
    rep.witnesses.update(r.witnesses)
    bad = [x for x in range(C.n) if not sasaki(C, x).adjunction]
    rep.checks["sasaki_adjunction"] = not bad
    if bad:
        rep.witnesses["sasaki_adjunction"] = bad[0]


def cmd_roundtrip(obj, args, rep: RunReport):
    if isinstance(obj, Geometry):
        rep.checks["alpha"] = alpha_iso(obj, args.cap)[1]
        rep.checks["beta"] = beta_iso(from_geometry(obj, args.cap))[1]
    elif isinstance(obj, FiniteLattice):
        rep.checks["beta"] = beta_iso(obj)[1]
        rep.checks["alpha"] = alpha_iso(atoms_geometry(obj), args.cap)[1]
    elif isinstance(obj, (OrthoGeometry, OrthoLattice, PropSystem)):
        if isinstance(obj, OrthoGeometry):
            rep.checks["alpha"] = alpha_iso(obj.geometry, args.cap)[1]
        r = triple_round_trip(obj, args.cap)
        rep.checks.update(kappa=r.kappa, lambda_=r.lam, mu=r.mu)
    else:
        raise InvalidInputError(f"cannot round-trip a {type(obj).__name__}")


def cmd_reconstruct_form(obj, args, rep: RunReport):
    if not isinstance(obj, HermitianSpace):
        raise InvalidInputError("reconstruct-form needs a Gram matrix file")
    fc = check_form(obj)
    rep.checks["anisotropic"] = fc.S4
    if fc.witness is not None:
        rep.witnesses["isotropic"] = fc.witness
    if not fc.S4:
        return
    r = piron_reconstruct(obj.dim, oracle_from_gram(obj.gram), seed=args.seed)
    lam = form_uniqueness(obj.gram, r.form)
    rep.checks["proportional"] = lam is not None
    rep.details["form"] = "\n".join(" ".join(str(x) for x in row) for row in r.form.rows)
    rep.details["lambda"] = lam
    rep.details["oracle_queries"] = r.queries


COMMANDS = {
    "check": (cmd_check, "projective geometry axioms G1-G3"),
    "lattice": (cmd_lattice, "subspace lattice and its predicates"),
    "decompose": (cmd_decompose, "irreducible components"),
    "desargues": (cmd_desargues, "Desargues' property"),
    "coordinatize": (cmd_coordinatize, "rebuild the coordinate field and coordinates"),
    "ortho-check": (cmd_ortho_check, "orthogonality axioms O1-O5"),
    "propsys": (cmd_propsys, "propositional system axioms and Sasaki adjunction"),
    "roundtrip": (cmd_roundtrip, "geometry/lattice equivalence round trips"),
    "reconstruct-form": (cmd_reconstruct_form, "rebuild a form from its orthogonality"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plg", description="Projective geometries, lattices and orthogonality.")
    p.add_argument("--version", action="version", version=f"plg {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="limit on enumerated subspaces")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    for name, (_, helptext) in COMMANDS.items():
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("input", help="input file, or - for stdin")
        common(sp)
    g = sub.add_parser("gen", help="write a corpus object, e.g. fano, pg(2,3), mo(2), hall9")
    g.add_argument("spec")
    g.add_argument("-o", "--output")
    common(g)
    return p


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as f:
        return f.read()


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "gen":
        try:
            text = dumps(generate(args.spec), args.format)
        except PlgError as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        if args.output:
            with open(args.output, "w") as f:
                f.write(text)
        else:
            stdout.write(text)
        return 0

    t0 = time.perf_counter()
    try:
        raw = _read(args.input)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    rep = RunReport(args.command, hashlib.sha256(raw).hexdigest())
    code = None
    try:
        obj = loads(raw.decode("utf-8"))
        COMMANDS[args.command][0](obj, args, rep)
    except (InvalidInputError, PreconditionError, CapExceededError, UnicodeDecodeError) as e:
        rep.error = f"{type(e).__name__}: {e}"
        if getattr(e, "witness", None) is not None:
            rep.witnesses["input"] = e.witness
        code = 2
    except PlgError as e:
        rep.error = f"{type(e).__name__}: {e}"
        if e.witness is not None:
            rep.witnesses["failure"] = e.witness
        code = 1
    rep.elapsed_s = time.perf_counter() - t0
    if code is None:
        code = 0 if rep.passed else 1
    if args.format == "json":
        stdout.write(json.dumps(rep.as_dict(), sort_keys=True) + "\n")
    else:
        stdout.write(rep.text())
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
