"""Line-oriented input language for algebra and bracket-module presentations.

    # comment
    field QQ                      | field Fp <prime>
    ring T1 T2 T3 weights 3 3 3
    relation S = T1^3 + T2^3 - (T1 + T2)^3
    dependent T3 via S
    bracket-module nprime shift -1
    element w in nprime = (T1 + T2)*e12 - T3*[T1,T3]
    submodule T1N in nprime = multiples(T1), T2*e12

Expressions use integer literals, + - * / ^ and parentheses; implicit
multiplication is a syntax error.  ``/`` only divides by a nonzero constant.
Basis symbols of a bracket module are written ``[Ti,Tj]`` (skew: ``[Tj,Ti]`` is
minus ``[Ti,Tj]``) or ``eij`` with 1-based indices when there are at most nine
generators.  A submodule always contains the relations of its bracket module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from .brackets import AlgebraPresentation, BracketModulePresentation, build_nprime
from .module import ModuleElement, Submodule, multiples
from .ring import QQ, CoefficientField, GradedRing, NotIsobaric, Polynomial, RingError

MAX_EXPONENT = 512


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        return f"line {self.line}, column {self.column}: {self.message}"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass
class _Tok:
    kind: str  # int, name, op, end
    text: str
    col: int


def _tokenize(text: str, line: int, col0: int) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        col = col0 + m.start(m.lastindex)
        if m.group(1):
            out.append(_Tok("int", m.group(1), col))
        elif m.group(2):
            out.append(_Tok("name", m.group(2), col))
        else:
            ch = m.group(3)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "+-*/^()[],":
                raise ParseError(f"unexpected character {ch!r}", line, col)
            out.append(_Tok("op", ch, col))
        pos = m.end()
    out.append(_Tok("end", "", col0 + len(text)))
    return out


@dataclass
class SubmoduleSpec:
    module: str
    items: list[tuple[str, object]]  # ("multiples", Polynomial) or ("vector", ModuleElement)
    submodule: Submodule


@dataclass
class PresentationFile:
    """A parsed input file."""

    coefficients: CoefficientField = QQ
    ring: GradedRing | None = None
    relations: dict[str, Polynomial] = field(default_factory=dict)
    dependent: dict[int, str] = field(default_factory=dict)
    bracket_modules: dict[str, BracketModulePresentation] = field(default_factory=dict)
    elements: dict[str, tuple[str, ModuleElement]] = field(default_factory=dict)
    submodules: dict[str, SubmoduleSpec] = field(default_factory=dict)
    order: list[tuple[str, str]] = field(default_factory=list)  # (kind, name) of declarations

    def algebra(self) -> AlgebraPresentation:
        if self.ring is None:
            raise ValueError("no ring declared")
        names = list(self.relations)
        dep = {k: names.index(r) for k, r in self.dependent.items()}
        return AlgebraPresentation(self.ring, tuple(self.relations.values()), dep, tuple(names))

    def serialize(self) -> str:
        lines = []
        f = self.coefficients
        lines.append("field QQ" if f.prime is None else f"field Fp {f.prime}")
        if self.ring is None:
            return "\n".join(lines) + "\n"
        r = self.ring
        lines.append(f"ring {' '.join(r.variable_names)} weights {' '.join(map(str, r.weights))}")
        for kind, name in self.order:
            if kind == "relation":
                lines.append(f"relation {name} = {self.relations[name]}")
            elif kind == "dependent":
                k = r.index(name)
                lines.append(f"dependent {name} via {self.dependent[k]}")
            elif kind == "bracket-module":
                lines.append(f"bracket-module {name} shift {self.bracket_modules[name].shift_constant}")
            elif kind == "element":
                mod, v = self.elements[name]
                lines.append(f"element {name} in {mod} = {format_vector(self.bracket_modules[mod], v)}")
            elif kind == "submodule":
                spec = self.submodules[name]
                b = self.bracket_modules[spec.module]
                items = []
                for tag, val in spec.items:
                    items.append(f"multiples({val})" if tag == "multiples" else format_vector(b, val))
                lines.append(f"submodule {name} in {spec.module} = {', '.join(items)}")
        return "\n".join(lines) + "\n"


def format_vector(b: BracketModulePresentation, v: ModuleElement) -> str:
    """Vector over bracket symbols in input syntax."""
    names = b.free.ring.variable_names
    parts = []
    for (i, j), s in sorted(b.index_map.items(), key=lambda kv: kv[1]):
        c = v[s]
        if c:
            parts.append(f"({c})*[{names[i]},{names[j]}]")
    return " + ".join(parts) if parts else "0"


class _ExprParser:
    """Recursive descent over one expression; values are Polynomial or ModuleElement."""

    def __init__(self, toks: list[_Tok], line: int, ring: GradedRing,
                 lookup: Callable[[str], object | None], basis: BracketModulePresentation | None):
        self.toks = toks
        self.i = 0
        self.line = line
        self.ring = ring
        self.lookup = lookup
        self.basis = basis

    def err(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok.col)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t.kind != "op" or t.text != text:
            raise self.err(f"expected {text!r}" + (f", found {t.text!r}" if t.text else ", found end of line"))
        return self.take()

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text == text

    def expr(self):
        val = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()
            rhs = self.term()
            val = self._combine(val, rhs, op)
        return val

    def term(self):
        val = self.unary()
        while self.at("*") or self.at("/"):
            op = self.take()
            rhs = self.unary()
            if op.text == "*":
                if isinstance(val, ModuleElement) and isinstance(rhs, ModuleElement):
                    raise self.err("cannot multiply two vectors", op)
                val = rhs * val if isinstance(rhs, ModuleElement) else val * rhs
            else:
                if isinstance(rhs, ModuleElement):
                    raise self.err("cannot divide by a vector", op)
                if rhs.is_zero():
                    raise self.err("division by zero", op)
                if any(any(m) for m in rhs.terms):
                    raise self.err("division only by constants", op)
                val = val * self.ring.field.inv(rhs.terms[self.ring.one_mono()])
        if self.peek().kind in ("int", "name") or self.at("(") or self.at("["):
            raise self.err("implicit multiplication is not allowed; use '*'")
        return val

    def unary(self):
        if self.at("-"):
            self.take()
            return -self.unary()
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            op = self.take()
            t = self.peek()
            if t.kind != "int":
                raise self.err("exponent must be a non-negative integer literal")
            self.take()
            n = int(t.text)
            if n > MAX_EXPONENT:
                raise self.err("exponent too large", t)
            if isinstance(base, ModuleElement):
                raise self.err("cannot raise a vector to a power", op)
            base = base ** n
        return base

    def atom(self):
        t = self.peek()
        if t.kind == "int":
            self.take()
            return self.ring.const(int(t.text))
        if t.kind == "name":
            self.take()
            val = self.lookup(t.text)
            if val is None and self.basis is not None:
                val = self._basis_symbol_name(t.text)
            if val is None:
                raise self.err(f"unknown identifier {t.text!r}", t)
            return val
        if self.at("("):
            self.take()
            val = self.expr()
            self.expect(")")
            return val
        if self.at("["):
            open_tok = self.take()
            a = self._generator_name()
            self.expect(",")
            b = self._generator_name()
            self.expect("]")
            if self.basis is None:
                raise self.err("bracket symbols need a bracket module", open_tok)
            return self.basis.bracket_symbol(a, b)
        if t.kind == "end":
            raise self.err("unexpected end of line")
        raise self.err(f"unexpected {t.text!r}")

    def _generator_name(self) -> int:
        t = self.peek()
        if t.kind != "name":
            raise self.err("expected a generator name")
        self.take()
        try:
            return self.ring.index(t.text)
        except (KeyError, ValueError):
            raise self.err(f"unknown identifier {t.text!r}", t) from None

    def _basis_symbol_name(self, name: str):
        m = re.fullmatch(r"e(\d)(\d)", name)
        if m is None or self.ring.nvars > 9:
            return None
        i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
        if not (0 <= i < self.ring.nvars and 0 <= j < self.ring.nvars):
            return None
        return self.basis.bracket_symbol(i, j)

    def _combine(self, a, b, op: _Tok):
        if isinstance(a, ModuleElement) != isinstance(b, ModuleElement):
            if isinstance(a, Polynomial) and a.is_zero():
                a = b * self.ring.zero()
            elif isinstance(b, Polynomial) and b.is_zero():
                b = a * self.ring.zero()
            else:
                raise self.err("cannot add a polynomial and a vector", op)
        return a + b if op.text == "+" else a - b

    def done(self):
        t = self.peek()
        if t.kind != "end":
            raise self.err(f"unexpected {t.text!r}")


def _words(text: str) -> list[tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", text)]


def _ident(word: str, line: int, col: int) -> str:
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", word):
        raise ParseError(f"invalid name {word!r}", line, col)
    return word


def parse_input(text: str, field_override: CoefficientField | None = None) -> PresentationFile:
    """Parse a presentation file; every failure is a ParseError with line and column."""
    pf = PresentationFile()
    if field_override is not None:
        pf.coefficients = field_override
    names: set[str] = set()
    field_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        try:
            field_seen = _statement(pf, body, lineno, names, field_seen, field_override)
        except ParseError:
            raise
        except (NotIsobaric, RingError, ValueError, ArithmeticError, KeyError, IndexError) as exc:
            raise ParseError(str(exc) or type(exc).__name__, lineno, 1) from None
        except RecursionError:
            raise ParseError("expression nested too deeply", lineno, 1) from None
    return pf


def _statement(pf: PresentationFile, body: str, ln: int, names: set[str], field_seen: bool,
               field_override: CoefficientField | None) -> bool:
    words = _words(body)
    kw, kcol = words[0]

    def declare(name: str, col: int):
        if name in names:
            raise ParseError(f"duplicate name {name!r}", ln, col)
        names.add(name)

    def need_ring():
        if pf.ring is None:
            raise ParseError("ring must be declared first", ln, kcol)
        return pf.ring

    def rhs_after_equals(start_word: int) -> tuple[str, int]:
        idx = body.find("=")
        if idx < 0:
            col = words[start_word][1] if start_word < len(words) else len(body) + 1
            raise ParseError("expected '='", ln, col)
        rest = body[idx + 1:]
        lead = len(rest) - len(rest.lstrip())
        return rest[lead:], idx + 2 + lead

    if kw == "field":
        if pf.ring is not None:
            raise ParseError("field must precede ring", ln, kcol)
        if field_seen:
            raise ParseError("duplicate field declaration", ln, kcol)
        if len(words) == 2 and words[1][0] == "QQ":
            fld = QQ
        elif len(words) == 3 and words[1][0] == "Fp":
            if not words[2][0].isdigit():
                raise ParseError("prime must be an integer", ln, words[2][1])
            try:
                fld = CoefficientField(int(words[2][0]))
            except ValueError as exc:
                raise ParseError(str(exc), ln, words[2][1]) from None
        else:
            raise ParseError("expected 'field QQ' or 'field Fp <prime>'", ln, kcol)
        if field_override is None:
            pf.coefficients = fld
        return True

    if kw == "ring":
        if pf.ring is not None:
            raise ParseError("duplicate ring declaration", ln, kcol)
        ws = [w for w, _ in words]
        if "weights" not in ws:
            raise ParseError("expected 'weights'", ln, len(body) + 1)
        k = ws.index("weights")
        var_words = words[1:k]
        weight_words = words[k + 1:]
        if not var_words:
            raise ParseError("ring needs at least one variable", ln, words[k][1])
        seen = set()
        for w, c in var_words:
            _ident(w, ln, c)
            if w in seen:
                raise ParseError("duplicate variable", ln, c)
            seen.add(w)
        if len(weight_words) != len(var_words):
            col = weight_words[0][1] if weight_words else len(body) + 1
            raise ParseError("one weight per variable required", ln, col)
        weights = []
        for w, c in weight_words:
            if not w.isdigit() or int(w) < 1:
                raise ParseError("weights must be positive integers", ln, c)
            weights.append(int(w))
        for w, c in var_words:
            declare(w, c)
        pf.ring = GradedRing(tuple(w for w, _ in var_words), tuple(weights), pf.coefficients)
        return field_seen

    if kw == "relation":
        ring = need_ring()
        if len(words) < 2:
            raise ParseError("expected a relation name", ln, len(body) + 1)
        name, ncol = words[1]
        _ident(name.split("=")[0], ln, ncol)
        name = name.split("=")[0]
        text, col = rhs_after_equals(2)
        p = _parse_expr(text, ln, col, ring, _poly_lookup(pf), None)
        if not isinstance(p, Polynomial):
            raise ParseError("relation must be a polynomial", ln, col)
        if p.is_zero():
            raise ParseError("relation is zero", ln, col)
        if not p.is_isobaric():
            raise ParseError("relation not isobaric", ln, col)
        declare(name, ncol)
        pf.relations[name] = p
        pf.order.append(("relation", name))
        return field_seen

    if kw == "dependent":
        ring = need_ring()
        if len(words) != 4 or words[2][0] != "via":
            raise ParseError("expected 'dependent <variable> via <relation>'", ln, kcol)
        var, vcol = words[1]
        rel, rcol = words[3]
        if var not in ring.variable_names:
            raise ParseError(f"unknown identifier {var!r}", ln, vcol)
        if rel not in pf.relations:
            raise ParseError(f"unknown identifier {rel!r}", ln, rcol)
        k = ring.index(var)
        if k in pf.dependent:
            raise ParseError(f"variable {var} already dependent", ln, vcol)
        if rel in pf.dependent.values():
            raise ParseError(f"relation {rel} already used", ln, rcol)
        pf.dependent[k] = rel
        pf.order.append(("dependent", var))
        return field_seen

    if kw == "bracket-module":
        need_ring()
        if len(words) != 4 or words[2][0] != "shift":
            raise ParseError("expected 'bracket-module <name> shift <int>'", ln, kcol)
        name, ncol = words[1]
        _ident(name, ln, ncol)
        shift_text, scol = words[3]
        if not re.fullmatch(r"-?\d+", shift_text):
            raise ParseError("shift must be an integer", ln, scol)
        declare(name, ncol)
        pf.bracket_modules[name] = build_nprime(pf.algebra(), int(shift_text))
        pf.order.append(("bracket-module", name))
        return field_seen

    if kw in ("element", "submodule"):
        ring = need_ring()
        if len(words) < 4 or words[2][0] != "in":
            raise ParseError(f"expected '{kw} <name> in <module> = ...'", ln, kcol)
        name, ncol = words[1]
        _ident(name, ln, ncol)
        mod, mcol = words[3]
        mod = mod.split("=")[0]
        if mod not in pf.bracket_modules:
            raise ParseError(f"unknown identifier {mod!r}", ln, mcol)
        b = pf.bracket_modules[mod]
        text, col = rhs_after_equals(4)
        lookup = _poly_lookup(pf, mod)
        if kw == "element":
            v = _parse_expr(text, ln, col, ring, lookup, b)
            if isinstance(v, Polynomial):
                if not v.is_zero():
                    raise ParseError("element must be a vector over the bracket symbols", ln, col)
                v = b.free.zero()
            if not v.is_homogeneous():
                raise ParseError("element not homogeneous", ln, col)
            declare(name, ncol)
            pf.elements[name] = (mod, v)
            pf.order.append(("element", name))
        else:
            items = _parse_generator_list(text, ln, col, ring, lookup, b)
            gens = list(b.relations.generators)
            for tag, val in items:
                if tag == "multiples":
                    gens.extend(multiples(b.free, val).generators)
                else:
                    if not val.is_homogeneous():
                        raise ParseError("generator not homogeneous", ln, col)
                    gens.append(val)
            declare(name, ncol)
            pf.submodules[name] = SubmoduleSpec(mod, items, Submodule(b.free, tuple(gens)))
            pf.order.append(("submodule", name))
        return field_seen

    raise ParseError(f"unknown statement {kw!r}", ln, kcol)


def _poly_lookup(pf: PresentationFile, module: str | None = None) -> Callable[[str], object | None]:
    ring = pf.ring

    def lookup(name: str):
        if name in ring.variable_names:
            return ring.var(ring.index(name))
        if name in pf.relations:
            return pf.relations[name]
        if module is not None and name in pf.elements and pf.elements[name][0] == module:
            return pf.elements[name][1]
        return None

    return lookup


def _parse_expr(text: str, ln: int, col: int, ring: GradedRing, lookup, basis):
    p = _ExprParser(_tokenize(text, ln, col), ln, ring, lookup, basis)
    val = p.expr()
    p.done()
    return val


def _parse_generator_list(text: str, ln: int, col: int, ring: GradedRing, lookup, basis):
    p = _ExprParser(_tokenize(text, ln, col), ln, ring, lookup, basis)
    items = []
    while True:
        t = p.peek()
        if t.kind == "name" and t.text == "multiples" and p.toks[p.i + 1].text == "(":
            p.take()
            p.expect("(")
            f = p.expr()
            p.expect(")")
            if not isinstance(f, Polynomial) or f.is_zero() or not f.is_isobaric():
                raise ParseError("multiples() needs a nonzero isobaric polynomial", ln, t.col)
            items.append(("multiples", f))
        else:
            v = p.expr()
            if isinstance(v, Polynomial):
                raise ParseError("generator must be a vector over the bracket symbols", ln, t.col)
            items.append(("vector", v))
        if p.at(","):
            p.take()
            continue
        p.done()
        return items


def parse_polynomial(text: str, ring: GradedRing) -> Polynomial:
    """A single polynomial over ``ring`` (ring variables only)."""

    def lookup(name):
        return ring.var(ring.index(name)) if name in ring.variable_names else None

    try:
        val = _parse_expr(text, 1, 1, ring, lookup, None)
    except RecursionError:
        raise ParseError("expression nested too deeply", 1, 1) from None
    if not isinstance(val, Polynomial):
        raise ParseError("expected a polynomial", 1, 1)
    return val


def parse_serialized_element(text: str, F) -> ModuleElement:
    """Inverse of ModuleElement.serialize: '[j] poly; [k] poly' or '0'."""
    comps = [F.ring.zero()] * F.rank
    text = text.strip()
    if text == "0":
        return F.zero()
    for part in text.split(";"):
        m = re.fullmatch(r"\s*\[(\d+)\]\s*(.+?)\s*", part)
        if m is None:
            raise ParseError("malformed element", 1, 1)
        j = int(m.group(1))
        if j >= F.rank:
            raise ParseError("slot out of range", 1, 1)
        comps[j] = parse_polynomial(m.group(2), F.ring)
    return ModuleElement(F, tuple(comps))
