"""Line-oriented algebra documents.

A document declares one algebra (base, rank, unit, structure constants,
optional relations), then named central elements, named modules (a
presentation plus one action matrix per algebra generator) and optional
coresolution certificates.  Matrices are written as explicit rows of
integers (or a/b fractions over a localized base); there is no expression
language, so files are bit-exact and diff-friendly.

Example::

    base Z
    algebra rank 2
    unit 1 0
    mult 1 1 : 1 0
    mult 1 2 : 0 1
    mult 2 1 : 0 1
    mult 2 2 : 1 0
    central x 2 0
    module T gens 1
    action 1
    1
    end
    action 2
    1
    end

Parse errors raise DocParseError with a line number; semantic problems
(non-associative tables, invalid actions, non-central elements) raise
DocValidationError so the CLI can distinguish exit codes 3 and 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import (
    Algebra,
    AlgModule,
    CentralElement,
    is_central,
    validate_algebra,
    validate_module,
)
from .fgmod import FgModule
from .homology import ModuleMap
from .matrix import Matrix
from .rings import BaseRing, Integers, IntegersLoc, IntegersMod, ZZ
from .tilting import AddCertificate, CoresolutionCertificate, _power


class DocParseError(Exception):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class DocValidationError(Exception):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass
class AlgebraDocument:
    algebra: Algebra
    centrals: dict[str, CentralElement]
    modules: dict[str, AlgModule]
    coresolutions: dict[str, tuple[str, CoresolutionCertificate]]

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraDocument)
            and self.algebra == other.algebra
            and self.centrals == other.centrals
            and self.modules == other.modules
            and self.coresolutions == other.coresolutions
        )


class _Lines:
    def __init__(self, text: str):
        self.raw = text.splitlines()
        self.pos = 0

    def next_content(self) -> Optional[tuple[int, list[str]]]:
        while self.pos < len(self.raw):
            lineno = self.pos + 1
            line = self.raw[self.pos]
            self.pos += 1
            body = line.split("#", 1)[0].strip()
            if body:
                return lineno, body.split()
        return None

    def peek_content(self) -> Optional[tuple[int, list[str]]]:
        saved = self.pos
        item = self.next_content()
        self.pos = saved
        return item


def _parse_base(lineno: int, token: str) -> BaseRing:
    if token == "Z":
        return ZZ
    if token.startswith("Z/"):
        try:
            n = int(token[2:])
        except ValueError:
            raise DocParseError(lineno, f"bad modulus in base token {token!r}")
        if n < 2:
            raise DocParseError(lineno, "modulus must be >= 2")
        return IntegersMod(n)
    if token.startswith("Z[1/") and token.endswith("]"):
        try:
            c = int(token[4:-1])
        except ValueError:
            raise DocParseError(lineno, f"bad localization constant in base token {token!r}")
        if abs(c) < 2:
            raise DocParseError(lineno, "localization constant must have |c| >= 2")
        return IntegersLoc(c)
    raise DocParseError(lineno, f"unknown base {token!r} (expected Z, Z/N or Z[1/c])")


def _parse_entry(base: BaseRing, lineno: int, token: str):
    try:
        return base.parse_element(token)
    except (ValueError, ZeroDivisionError):
        raise DocParseError(lineno, f"bad ring element {token!r} for base {base}")


def _read_matrix_rows(lines: _Lines, base: BaseRing, rows: int, cols: int) -> Matrix:
    data = []
    for _ in range(rows):
        item = lines.next_content()
        if item is None:
            raise DocParseError(len(lines.raw), "unexpected end of file inside a matrix block")
        lineno, toks = item
        if len(toks) != cols:
            raise DocParseError(lineno, f"expected {cols} entries, found {len(toks)}")
        data.append([_parse_entry(base, lineno, t) for t in toks])
    item = lines.next_content()
    if item is None or item[1] != ["end"]:
        raise DocParseError(
            item[0] if item else len(lines.raw), "matrix block must close with 'end'"
        )
    return Matrix(base, data, cols=cols)


def parse_document(text: str) -> AlgebraDocument:
    lines = _Lines(text)
    base: Optional[BaseRing] = None
    rank: Optional[int] = None
    unit = None
    mult: dict[tuple[int, int], tuple] = {}
    algebra_relations: Optional[Matrix] = None
    algebra: Optional[Algebra] = None
    centrals: dict[str, CentralElement] = {}
    modules: dict[str, AlgModule] = {}
    coresolutions: dict[str, tuple[str, CoresolutionCertificate]] = {}
    current_module: Optional[dict] = None
    validation_problems: list[str] = []

    def build_algebra(lineno: int):
        nonlocal algebra
        if algebra is not None:
            return
        if base is None:
            raise DocParseError(lineno, "no 'base' declared before algebra data is used")
        if rank is None:
            raise DocParseError(lineno, "no 'algebra rank' declared")
        if unit is None:
            raise DocParseError(lineno, "no 'unit' declared")
        missing = [(i, j) for i in range(rank) for j in range(rank) if (i, j) not in mult]
        if missing:
            raise DocParseError(lineno, f"missing mult rows for generator pairs {missing}")
        table = tuple(tuple(mult[(i, j)] for j in range(rank)) for i in range(rank))
        rel = algebra_relations if algebra_relations is not None else Matrix.zeros(base, rank, 0)
        under = FgModule(base, rank, rel)
        algebra = Algebra(base, under, table, unit)

    def finish_module(lineno: int):
        nonlocal current_module
        if current_module is None:
            return
        name = current_module["name"]
        gens = current_module["gens"]
        rel = current_module["relations"]
        if rel is None:
            rel = Matrix.zeros(base, gens, 0)
        actions = current_module["actions"]
        missing = [t + 1 for t in range(rank) for _ in [0] if t not in actions]
        if missing:
            raise DocParseError(
                lineno, f"module {name!r} lacks action matrices for generators {missing}"
            )
        try:
            mod = AlgModule(algebra, FgModule(base, gens, rel), tuple(actions[t] for t in range(rank)))
        except ValueError as e:
            raise DocParseError(lineno, f"module {name!r}: {e}")
        modules[name] = mod
        current_module = None

    while True:
        item = lines.next_content()
        if item is None:
            break
        lineno, toks = item
        head = toks[0]
        if head == "base":
            if len(toks) != 2:
                raise DocParseError(lineno, "usage: base Z | Z/N | Z[1/c]")
            if base is not None:
                raise DocParseError(lineno, "duplicate 'base' declaration")
            base = _parse_base(lineno, toks[1])
        elif head == "algebra":
            if len(toks) != 3 or toks[1] != "rank":
                raise DocParseError(lineno, "usage: algebra rank <g>")
            try:
                rank = int(toks[2])
            except ValueError:
                raise DocParseError(lineno, "rank must be an integer")
            if rank < 1:
                raise DocParseError(lineno, "rank must be >= 1")
        elif head == "unit":
            if rank is None or base is None:
                raise DocParseError(lineno, "unit must follow 'base' and 'algebra rank'")
            if len(toks) != rank + 1:
                raise DocParseError(lineno, f"unit needs {rank} coordinates")
            unit = tuple(_parse_entry(base, lineno, t) for t in toks[1:])
        elif head == "mult":
            if rank is None or base is None:
                raise DocParseError(lineno, "mult must follow 'base' and 'algebra rank'")
            if len(toks) != rank + 4 or toks[3] != ":":
                raise DocParseError(lineno, f"usage: mult i j : {rank} coordinates")
            try:
                i, j = int(toks[1]), int(toks[2])
            except ValueError:
                raise DocParseError(lineno, "mult indices must be integers")
            if not (1 <= i <= rank and 1 <= j <= rank):
                raise DocParseError(lineno, f"mult indices out of range 1..{rank}")
            mult[(i - 1, j - 1)] = tuple(_parse_entry(base, lineno, t) for t in toks[4:])
        elif head == "relations":
            if len(toks) != 2:
                raise DocParseError(lineno, "usage: relations <columns>")
            try:
                cols = int(toks[1])
            except ValueError:
                raise DocParseError(lineno, "relation column count must be an integer")
            if current_module is not None:
                mat = _read_matrix_rows(lines, base, current_module["gens"], cols)
                current_module["relations"] = mat
            else:
                if rank is None:
                    raise DocParseError(lineno, "algebra relations must follow 'algebra rank'")
                algebra_relations = _read_matrix_rows(lines, base, rank, cols)
        elif head == "central":
            finish_module(lineno)
            build_algebra(lineno)
            if len(toks) != rank + 2:
                raise DocParseError(lineno, f"usage: central <name> {rank} coordinates")
            name = toks[1]
            coords = tuple(_parse_entry(base, lineno, t) for t in toks[2:])
            if not is_central(coords, algebra):
                validation_problems.append(f"element {name!r} is not central")
            else:
                centrals[name] = CentralElement(algebra, coords)
        elif head == "module":
            finish_module(lineno)
            build_algebra(lineno)
            if len(toks) != 4 or toks[2] != "gens":
                raise DocParseError(lineno, "usage: module <name> gens <g>")
            try:
                gens = int(toks[3])
            except ValueError:
                raise DocParseError(lineno, "generator count must be an integer")
            if gens < 0:
                raise DocParseError(lineno, "generator count must be >= 0")
            if toks[1] in modules:
                raise DocParseError(lineno, f"duplicate module name {toks[1]!r}")
            current_module = {"name": toks[1], "gens": gens, "relations": None, "actions": {}}
        elif head == "action":
            if current_module is None:
                raise DocParseError(lineno, "'action' outside a module block")
            if len(toks) != 2:
                raise DocParseError(lineno, "usage: action <generator index>")
            try:
                idx = int(toks[1])
            except ValueError:
                raise DocParseError(lineno, "generator index must be an integer")
            if not (1 <= idx <= rank):
                raise DocParseError(lineno, f"generator index out of range 1..{rank}")
            g = current_module["gens"]
            current_module["actions"][idx - 1] = _read_matrix_rows(lines, base, g, g)
        elif head == "coresolution":
            finish_module(lineno)
            build_algebra(lineno)
            name, target, cert = _parse_coresolution(lines, lineno, toks, algebra, modules)
            coresolutions[name] = (target, cert)
        else:
            raise DocParseError(lineno, f"unknown directive {head!r}")

    finish_module(len(lines.raw))
    build_algebra(len(lines.raw))
    if validation_problems:
        raise DocValidationError(validation_problems)
    return AlgebraDocument(algebra, centrals, modules, coresolutions)


def _parse_coresolution(lines, lineno, toks, algebra, modules):
    from .algebra import regular_module

    if len(toks) != 4 or toks[2] != "for":
        raise DocParseError(lineno, "usage: coresolution <name> for <module>")
    name, target = toks[1], toks[3]
    if target not in modules:
        raise DocParseError(lineno, f"coresolution target module {target!r} is not declared")
    t = modules[target]
    terms = []
    maps = []
    certs = []
    prev = regular_module(algebra)
    while True:
        item = lines.next_content()
        if item is None:
            raise DocParseError(len(lines.raw), "unterminated coresolution block")
        lno, tk = item
        if tk == ["end", "coresolution"]:
            break
        if tk[0] != "term" or len(tk) != 2:
            raise DocParseError(lno, "expected 'term <module>' or 'end coresolution'")
        if tk[1] not in modules:
            raise DocParseError(lno, f"coresolution term module {tk[1]!r} is not declared")
        term = modules[tk[1]]
        item = lines.next_content()
        if item is None or item[1][0] != "map":
            raise DocParseError(lno, "each term needs a 'map' block")
        mlno, mtoks = item
        if len(mtoks) != 1:
            raise DocParseError(mlno, "usage: map (matrix rows follow, closed by 'end')")
        mat = _read_matrix_rows(lines, algebra.base, term.gens, prev.gens)
        maps.append(ModuleMap(prev, term, mat))
        item = lines.next_content()
        if item is None or item[1][0] != "embed" or len(item[1]) != 2:
            raise DocParseError(mlno, "each term needs an 'embed <width>' block")
        elno, etoks = item
        try:
            width = int(etoks[1])
        except ValueError:
            raise DocParseError(elno, "embed width must be an integer")
        tp = _power(t, width)
        emb = _read_matrix_rows(lines, algebra.base, tp.gens, term.gens)
        item = lines.next_content()
        if item is None or item[1] != ["retract"]:
            raise DocParseError(elno, "each term needs a 'retract' block")
        ret = _read_matrix_rows(lines, algebra.base, term.gens, tp.gens)
        certs.append(AddCertificate(width, ModuleMap(term, tp, emb), ModuleMap(tp, term, ret)))
        terms.append(term)
        prev = term
    if not terms:
        raise DocParseError(lineno, "coresolution block declares no terms")
    cert = CoresolutionCertificate(
        algebra, t, tuple(terms), tuple(maps), tuple(certs)
    )
    return name, target, cert


def validate_document(doc: AlgebraDocument) -> list[str]:
    """Semantic validation: algebra axioms and module axioms, by name."""
    problems = [f"algebra: {p}" for p in validate_algebra(doc.algebra)]
    for name, mod in doc.modules.items():
        problems.extend(f"module {name!r}: {p}" for p in validate_module(mod))
    return problems


def _format_base(base: BaseRing) -> str:
    if isinstance(base, Integers):
        return "Z"
    if isinstance(base, IntegersMod):
        return f"Z/{base.n}"
    return f"Z[1/{base.c}]"


def _matrix_lines(mat: Matrix) -> list[str]:
    fmt = mat.base.format_element
    out = [" ".join(fmt(x) for x in row) for row in mat.data]
    out.append("end")
    return out


def serialize_document(doc: AlgebraDocument) -> str:
    alg = doc.algebra
    base = alg.base
    fmt = base.format_element
    out = [f"base {_format_base(base)}", f"algebra rank {alg.rank}"]
    out.append("unit " + " ".join(fmt(c) for c in alg.one))
    for i in range(alg.rank):
        for j in range(alg.rank):
            coords = " ".join(fmt(c) for c in alg.mult[i][j])
            out.append(f"mult {i + 1} {j + 1} : {coords}")
    if alg.relations.cols:
        out.append(f"relations {alg.relations.cols}")
        out.extend(_matrix_lines(alg.relations))
    for name, z in doc.centrals.items():
        out.append(f"central {name} " + " ".join(fmt(c) for c in z.coords))
    for name, mod in doc.modules.items():
        out.append(f"module {name} gens {mod.gens}")
        if mod.underlying.relations.cols:
            out.append(f"relations {mod.underlying.relations.cols}")
            out.extend(_matrix_lines(mod.underlying.relations))
        for t, a in enumerate(mod.actions):
            out.append(f"action {t + 1}")
            out.extend(_matrix_lines(a))
    module_names = {id(m): n for n, m in doc.modules.items()}
    for name, (target, cert) in doc.coresolutions.items():
        out.append(f"coresolution {name} for {target}")
        for term, mp, ac in zip(cert.terms, cert.maps, cert.addcerts):
            term_name = module_names.get(id(term))
            if term_name is None:
                matches = [n for n, m in doc.modules.items() if m == term]
                term_name = matches[0] if matches else "?"
            out.append(f"term {term_name}")
            out.append("map")
            out.extend(_matrix_lines(mp.matrix))
            out.append(f"embed {ac.width}")
            out.extend(_matrix_lines(ac.embedding.matrix))
            out.append("retract")
            out.extend(_matrix_lines(ac.retraction.matrix))
        out.append("end coresolution")
    return "\n".join(out) + "\n"
