"""Command-line front end.

Subcommands:

* ``check FILE``                   structural checks on an input document
* ``lee FILE``                     Lee form and classification flags
* ``twist FILE1 FILE2 RHOFILE``    assemble a twisted product and cross-check
* ``catalog list|verify|verify-all``  catalog verification

Exit codes are a stable contract: 0 success, 1 check failure, 2 input error.
``--format records`` emits machine-readable ``key=value`` lines (schema
``hermlie.records.v1``); all randomness flows from the explicit ``--seed``.
"""

import argparse
import sys
from fractions import Fraction

from . import catalog as catalog_mod
from .algebra_core import (
    Endo,
    form_text,
    jacobi_defect,
    parse_salamon,
    parse_two_form,
    print_salamon,
)
from .expressions import ExpressionError, evaluate
from .hermitian import (
    HermitianError,
    HermitianStructure,
    Metric,
    classify,
    is_almost_complex,
    lee_form,
    metric_from,
    nijenhuis,
)
from .twist import (
    Representation,
    TwistData,
    build_product,
    check_commuting,
    check_integrability_general,
    lee_via_theorem,
)

RECORDS_SCHEMA = "hermlie.records.v1"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input documents
# ---------------------------------------------------------------------------

class InputDocument:
    """Parsed ``[algebra]`` / ``[complex]`` / ``[metric]`` (and optional
    ``[rho1]``/``[rho2]``) sections."""

    def __init__(self):
        self.dim = None
        self.salamon = None
        self.params = {}
        self.j_images = []  # raw "ek -> expr" strings
        self.omega_text = None
        self.metric_rows = None
        self.rho = {}  # section name -> list of matrices (rows of rationals)


def _parse_matrix_blocks(lines):
    blocks = []
    current = []
    for raw, lineno in lines:
        line = raw.strip()
        if not line:
            if current:
                blocks.append(current)
                current = []
            continue
        try:
            row = tuple(Fraction(tok) for tok in line.split())
        except ValueError:
            raise InputError(f"line {lineno}: expected a row of rationals, got {raw!r}")
        current.append(row)
    if current:
        blocks.append(current)
    return blocks


def parse_input_document(text, origin="<input>"):
    doc = InputDocument()
    section = None
    section_lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped and section not in ("rho1", "rho2"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip().lower()
            if section not in ("algebra", "complex", "metric", "rho1", "rho2"):
                raise InputError(f"{origin}:{lineno}: unknown section [{section}]")
            section_lines.setdefault(section, [])
            continue
        if section is None:
            raise InputError(f"{origin}:{lineno}: content before any [section]")
        section_lines.setdefault(section, []).append((line, lineno))

    in_matrix = False
    matrix_rows = []
    for line, lineno in section_lines.get("algebra", []):
        stripped = line.strip()
        key, eq, value = stripped.partition("=")
        if not eq:
            raise InputError(f"{origin}:{lineno}: expected 'name = value', got {line!r}")
        key = key.strip()
        value = value.strip()
        if key == "dim":
            doc.dim = int(value)
        elif key == "salamon":
            doc.salamon = value
        else:
            try:
                doc.params[key] = evaluate(value, doc.params)
            except ExpressionError as exc:
                raise InputError(f"{origin}:{lineno}: {exc}") from None
    for line, lineno in section_lines.get("complex", []):
        stripped = line.strip()
        if "->" not in stripped:
            raise InputError(f"{origin}:{lineno}: expected 'ek -> image', got {line!r}")
        doc.j_images.append(stripped)

    metric = section_lines.get("metric", [])
    for idx, (line, lineno) in enumerate(metric):
        stripped = line.strip()
        if stripped.startswith("omega"):
            _, eq, value = stripped.partition("=")
            if not eq:
                raise InputError(f"{origin}:{lineno}: expected 'omega = <2-form>'")
            doc.omega_text = value.strip()
        elif stripped.startswith("matrix"):
            in_matrix = True
        elif in_matrix and stripped:
            try:
                matrix_rows.append(tuple(Fraction(tok) for tok in stripped.split()))
            except ValueError:
                raise InputError(f"{origin}:{lineno}: bad matrix row {line!r}") from None
    if matrix_rows:
        doc.metric_rows = tuple(matrix_rows)
    if doc.omega_text is not None and doc.metric_rows is not None:
        raise InputError(f"{origin}: [metric] must give exactly one of omega/matrix")

    for name in ("rho1", "rho2"):
        if name in section_lines:
            doc.rho[name] = _parse_matrix_blocks(section_lines[name])
    if doc.salamon is None and not doc.rho:
        raise InputError(f"{origin}: [algebra] needs a 'salamon = (...)' line")
    return doc


def load_document(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_input_document(fh.read(), origin=path)
    except OSError as exc:
        raise InputError(str(exc)) from None


def realize_document(doc, origin="<input>"):
    """Build (LieAlgebra, Endo or None, Metric or None) from a document."""
    try:
        L = parse_salamon(doc.salamon, doc.params)
    except ExpressionError as exc:
        raise InputError(f"{origin}: {exc}") from None
    if doc.dim is not None and doc.dim != L.dim:
        raise InputError(f"{origin}: dim = {doc.dim} but the structure has {L.dim} slots")
    j = None
    if doc.j_images:
        try:
            j = catalog_mod.solve_j("; ".join(doc.j_images), L.dim, doc.params)
        except (catalog_mod.CatalogError, ExpressionError) as exc:
            raise InputError(f"{origin}: {exc}") from None
    g = None
    omega = None
    if doc.omega_text is not None:
        try:
            omega = parse_two_form(doc.omega_text, L.dim, doc.params)
        except ExpressionError as exc:
            raise InputError(f"{origin}: {exc}") from None
        if j is None:
            raise InputError(f"{origin}: omega needs a [complex] section to recover the metric")
        g = metric_from(omega, j)
    elif doc.metric_rows is not None:
        if len(doc.metric_rows) != L.dim or any(len(r) != L.dim for r in doc.metric_rows):
            raise InputError(f"{origin}: metric matrix must be {L.dim}x{L.dim}")
        g = Metric(doc.metric_rows)
    return L, j, g


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

class Printer:
    def __init__(self, records):
        self.records = records

    def record(self, **fields):
        if self.records:
            parts = [f"schema={RECORDS_SCHEMA}"]
            parts += [f"{k}={_record_value(v)}" for k, v in fields.items()]
            print(" ".join(parts))

    def text(self, line):
        if not self.records:
            print(line)


def _record_value(v):
    if isinstance(v, bool):
        return "pass" if v else "fail"
    text = str(v)
    return text.replace(" ", "_")


def _flag(b):
    return "yes" if b else "no"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_check(args):
    out = Printer(args.format == "records")
    doc = load_document(args.file)
    L, j, g = realize_document(doc, args.file)
    ok = True

    defects = jacobi_defect(L)
    out.text(f"jacobi: {'PASS' if not defects else 'FAIL'}")
    out.record(cmd="check", check="jacobi", status=not defects)
    for (i, jj, k), v in defects:
        ok = False
        out.text(f"  defect at (e{i},e{jj},e{k}): {tuple(str(x) for x in v)}")

    if j is not None:
        ac = is_almost_complex(j)
        out.text(f"almost-complex (J^2=-I): {'PASS' if ac else 'FAIL'}")
        out.record(cmd="check", check="almost_complex", status=ac)
        ok = ok and ac
        if ac:
            values, integrable = nijenhuis(L, j)
            out.text(f"integrable (N_J=0): {'PASS' if integrable else 'FAIL'}")
            out.record(cmd="check", check="integrable", status=integrable)
            for (a, b), v in values.items():
                out.text(f"  N(e{a},e{b}) = {tuple(str(x) for x in v)}")
            ok = ok and integrable

    if g is not None:
        pd = g.is_positive_definite
        out.text(f"positive-definite metric: {'PASS' if pd else 'FAIL'}")
        out.record(cmd="check", check="posdef", status=pd)
        ok = ok and pd
        if j is not None:
            n = L.dim
            compat = all(
                g.value(j(_basis(n, a)), j(_basis(n, b))) == g.value(_basis(n, a), _basis(n, b))
                for a in range(1, n + 1)
                for b in range(a, n + 1)
            )
            out.text(f"compatibility g(J.,J.)=g: {'PASS' if compat else 'FAIL'}")
            out.record(cmd="check", check="compatible", status=compat)
            ok = ok and compat

    out.record(cmd="check", check="all", status=ok)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _basis(n, k):
    from . import linalg

    return linalg.basis_vector(n, k)


def _hermitian_from_document(path):
    doc = load_document(path)
    L, j, g = realize_document(doc, path)
    if j is None or g is None:
        raise InputError(f"{path}: lee/twist need [complex] and [metric] sections")
    try:
        return HermitianStructure(L, j, g)
    except HermitianError as exc:
        raise CheckFailure(f"{path}: {exc}") from None


class CheckFailure(ValueError):
    pass


def cmd_lee(args):
    out = Printer(args.format == "records")
    h = _hermitian_from_document(args.file)
    theta = lee_form(h)
    flags = classify(h)
    out.text(
        f"theta = {form_text(theta)}; kahler={_flag(flags.kahler)} "
        f"balanced={_flag(flags.balanced)} lcb={_flag(flags.lcb)} lck={_flag(flags.lck)}"
    )
    out.record(
        cmd="lee",
        theta=form_text(theta),
        kahler=_flag(flags.kahler),
        balanced=_flag(flags.balanced),
        lcb=_flag(flags.lcb),
        lck=_flag(flags.lck),
    )
    return EXIT_OK


def cmd_twist(args):
    out = Printer(args.format == "records")
    h1 = _hermitian_from_document(args.file1)
    h2 = _hermitian_from_document(args.file2)
    rho1, rho2 = _load_rho_file(args.rho_file, h1, h2)
    td = TwistData(h1, h2, rho1, rho2)

    defects = td.defects()
    if defects:
        for d in defects:
            out.text(f"defect: {d}")
            out.record(cmd="twist", check=d.law, status=False, where=str(d.where))
        out.record(cmd="twist", check="all", status=False)
        return EXIT_CHECK_FAILED
    if not check_integrability_general(td):
        out.text("defect: integrability conditions fail")
        out.record(cmd="twist", check="integrability", status=False)
        return EXIT_CHECK_FAILED

    L, h = build_product(td)
    theta_thm = lee_via_theorem(td)
    theta_dir = lee_form(h)
    agree = theta_thm == theta_dir
    flags = classify(h)
    out.text(f"product = {print_salamon(L)}")
    out.text(f"commuting J assumptions: {_flag(check_commuting(td))}")
    out.text(f"theta (blockwise characters) = {form_text(theta_thm)}")
    out.text(f"theta (direct)               = {form_text(theta_dir)}")
    out.text(f"agreement: {'PASS' if agree else 'FAIL'}")
    out.text(
        f"kahler={_flag(flags.kahler)} balanced={_flag(flags.balanced)} "
        f"lcb={_flag(flags.lcb)} lck={_flag(flags.lck)}"
    )
    out.record(
        cmd="twist",
        product=print_salamon(L),
        theta=form_text(theta_dir),
        agreement=agree,
        kahler=_flag(flags.kahler),
        balanced=_flag(flags.balanced),
        lcb=_flag(flags.lcb),
        lck=_flag(flags.lck),
    )
    return EXIT_OK if agree else EXIT_CHECK_FAILED


def _load_rho_file(path, h1, h2):
    doc = load_document(path)
    m, n = h1.dim, h2.dim
    out = []
    for name, source, target, rows_dim in (
        ("rho1", h1, h2, n),
        ("rho2", h2, h1, m),
    ):
        blocks = doc.rho.get(name)
        if blocks is None:
            out.append(Representation.zero(source.L, target.L))
            continue
        if len(blocks) != source.dim:
            raise InputError(
                f"{path}: [{name}] needs {source.dim} matrices, found {len(blocks)}"
            )
        images = []
        for b in blocks:
            if len(b) != rows_dim or any(len(r) != rows_dim for r in b):
                raise InputError(f"{path}: [{name}] matrices must be {rows_dim}x{rows_dim}")
            images.append(Endo(tuple(b)))
        out.append(Representation(source.L, target.L, images))
    return out


def _print_report(report, out, verbose=True):
    for note in report.notes:
        out.text(f"  note: {note}")
    if verbose:
        for k, v in enumerate(report.verdicts):
            status = "PASS" if v.passed else "FAIL"
            detail = "" if v.passed else f" failing={','.join(v.failing())}"
            out.text(f"  sample {k}: {status}{detail}")
            if v.note:
                out.text(f"    {v.note}")
            if not v.passed:
                out.text(f"    binding: {catalog_mod._fmt_binding(v.binding)}")
            out.record(
                cmd="catalog",
                family=report.family_id,
                sample=k,
                jacobi=v.jacobi,
                integrable=v.integrable,
                posdef=v.posdef,
                balanced=v.balanced,
                lcb=bool(v.lcb),
                lck=bool(v.lck),
                kahler=bool(v.kahler),
                transcription=report.transcription,
            )
    out.text(report.summary())
    out.record(
        cmd="catalog",
        family=report.family_id,
        samples=report.requested,
        accepted=report.accepted,
        status=report.passed,
        transcription=report.transcription,
    )


def cmd_catalog(args):
    out = Printer(args.format == "records")
    path = args.catalog
    if args.action == "list":
        for fid in catalog_mod.list_families(path):
            out.text(fid)
            out.record(cmd="catalog", family=fid)
        return EXIT_OK
    if args.action == "verify":
        if not args.family:
            raise InputError("catalog verify needs --family ID")
        report = catalog_mod.verify(args.family, args.samples, args.seed, path)
        _print_report(report, out)
        return EXIT_OK if report.passed else EXIT_CHECK_FAILED
    if args.action == "verify-all":
        reports = catalog_mod.verify_all(args.samples, args.seed, path)
        ok = True
        for report in reports:
            _print_report(report, out, verbose=not report.passed)
            ok = ok and report.passed
        passed = sum(1 for r in reports if r.passed)
        out.text(f"== {passed}/{len(reports)} families fully balanced")
        out.record(cmd="catalog", families=len(reports), passed=passed, status=ok)
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    raise InputError(f"unknown catalog action {args.action!r}")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="hermlie",
        description="Exact computation with Hermitian structures on Lie algebras "
        "and their twisted cartesian products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument(
            "--format",
            choices=("text", "records"),
            default="text",
            help="human-readable text or key=value record lines",
        )

    p = sub.add_parser("check", help="structural checks on an input document")
    p.add_argument("file")
    add_format(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("lee", help="Lee form and classification flags")
    p.add_argument("file")
    add_format(p)
    p.set_defaults(func=cmd_lee)

    p = sub.add_parser("twist", help="assemble a twisted cartesian product")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("rho_file")
    add_format(p)
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("catalog", help="catalog verification")
    p.add_argument("action", choices=("list", "verify", "verify-all"))
    p.add_argument("--family", default=None)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--catalog", default=None, help="alternative catalog data file")
    add_format(p)
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ExpressionError, catalog_mod.CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except HermitianError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
