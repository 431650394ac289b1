"""Reduced systems on invariant polydiagonal subspaces.

Each reduced equation for a free symbol A is g(x_A) plus a list of terms
c * h(w . x), where w is an integer vector over the free symbols.  The term
lists come directly from the degree tables:

    balanced  g(x_A) + sum_B d_B(A) h(x_B - x_A)                 (B = A included)
    exo       g(x_A) + sum_{B != A} d_B(A) h(x_B - x_A)
    odd       g(x_A) - d_{A0}(A) h(x_A) - d_{-A}(A) h(2 x_A)
                     + sum_{B != A} [d_B(A) h(x_B - x_A) - d_{-B}(A) h(x_B + x_A)]
    linear    g(x_A) - e(A) h(x_A) + sum_{B != A} delta_B(A) h(x_B)

Sums over B run over the plain classes, or over the positive classes
(the cross section) for matched partitions.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

import numpy as np

from ..classify import ClassTable, BalanceReport, classify, linear_degree
from ..graph import Graph
from ..partitions import SubspaceDescriptor, symbol_name
from .fields import VectorFieldSpec, class_contains, classify_field

MINUS = "−"
DOT = "̇"
DDOT = "̈"


class IncompatibleReduction(ValueError):
    """The subspace is not invariant for the requested field class."""


@dataclass(frozen=True)
class Term:
    coef: int
    form: tuple   # integer coefficients over the free symbols


@dataclass
class ReducedEquation:
    symbol: int
    terms: list


@dataclass
class ReducedSystem:
    W: SubspaceDescriptor
    report: BalanceReport
    formula: str          # balanced | exo | odd | linear
    field_class: str
    equations: list

    @property
    def nsym(self) -> int:
        return self.W.free_dim

    def _tables(self):
        if not hasattr(self, "_cache"):
            forms, rows, coefs = [], [], []
            for eq in self.equations:
                for t in eq.terms:
                    forms.append(t.form)
                    rows.append(eq.symbol)
                    coefs.append(t.coef)
            r = self.nsym
            F = np.array(forms, dtype=float).reshape(len(forms), r)
            C = np.zeros((r, len(forms)))
            for col, (row, c) in enumerate(zip(rows, coefs)):
                C[row, col] = c
            self._cache = (F, C)
        return self._cache

    def evaluate(self, f: VectorFieldSpec, y: np.ndarray) -> np.ndarray:
        """Reduced vector field at y of shape (..., r, k)."""
        F, C = self._tables()
        out = f.g(y)
        if F.shape[0]:
            args = np.matmul(F, y)            # (..., T, k)
            out = out + np.matmul(C, f.h(args))
        return out

    def render_generic(self) -> list[str]:
        return [render_generic_equation(eq, self.nsym) for eq in self.equations]

    def render(self, f: VectorFieldSpec | None = None) -> list[str]:
        if f is not None and f.family == "vanderpol":
            return render_vdp(self, f)
        return self.render_generic()


# --------------------------------------------------------------------------


def select_formula(rep: BalanceReport, field_class: str) -> str:
    """Reduction formula for a field class, or raise naming the requirement."""
    if rep.descriptor.is_plain:
        if field_class != "DG" and rep.exo_balanced:
            return "exo"
        if rep.balanced:
            return "balanced"
        if field_class == "DG":
            raise IncompatibleReduction("DG fields require a balanced partition")
        raise IncompatibleReduction(f"{field_class} fields require an exo-balanced partition")
    if field_class == "DGl" and rep.linear_balanced:
        return "linear"
    if class_contains("DGodd", field_class) and rep.odd_balanced:
        return "odd"
    if field_class in ("DG", "DG0"):
        raise IncompatibleReduction(
            f"matched subspaces are never {field_class}-invariant; a DGodd or DGl field is required")
    if field_class == "DGodd":
        raise IncompatibleReduction("DGodd fields require an odd-balanced matched partition")
    raise IncompatibleReduction("DGl fields require a linear-balanced matched partition")


def loosest_class(rep: BalanceReport) -> str:
    """Largest field class for which the subspace is invariant."""
    if rep.descriptor.is_plain:
        if rep.balanced:
            return "DG"
        if rep.exo_balanced:
            return "DG0"
    else:
        if rep.odd_balanced:
            return "DGodd"
        if rep.linear_balanced:
            return "DGl"
    raise IncompatibleReduction("subspace is not invariant for any difference-coupled class")


def _unit(r, a, scale=1):
    w = [0] * r
    w[a] = scale
    return tuple(w)


def _diff(r, b, a, sb=1):
    # sb * x_b - x_a
    w = [0] * r
    w[b] += sb
    w[a] -= 1
    return tuple(w)


def reduced_field(G: Graph, W: SubspaceDescriptor, field_class: str | VectorFieldSpec,
                  report: BalanceReport | None = None) -> ReducedSystem:
    if isinstance(field_class, VectorFieldSpec):
        field_class = classify_field(field_class)
    rep = report if report is not None else classify(G, W)
    formula = select_formula(rep, field_class)
    t = ClassTable(G, W)
    r = W.free_dim
    eqs = []
    for a in range(r):
        terms = []
        if formula in ("balanced", "exo"):
            i = t.cells[a][0]
            for b in range(r):
                if b == a and formula == "exo":
                    continue
                d = t.deg[i][b]
                if d:
                    terms.append(Term(d, _diff(r, b, a)))
        else:
            ca, cna = 2 * a, 2 * a + 1
            i = t.cells[ca][0]
            row = t.deg[i]
            if formula == "odd":
                if row[t.zero]:
                    terms.append(Term(-row[t.zero], _unit(r, a)))
                if row[cna]:
                    terms.append(Term(-row[cna], _unit(r, a, 2)))
                for b in range(r):
                    if b == a:
                        continue
                    if row[2 * b]:
                        terms.append(Term(row[2 * b], _diff(r, b, a)))
                    if row[2 * b + 1]:
                        # -d_{-B}(A) h(x_B + x_A)
                        w = [0] * r
                        w[b] += 1
                        w[a] += 1
                        terms.append(Term(-row[2 * b + 1], tuple(w)))
            else:
                e = linear_degree(t, i)
                if e:
                    terms.append(Term(-e, _unit(r, a)))
                for b in range(r):
                    if b == a:
                        continue
                    delta = row[2 * b] - row[2 * b + 1]
                    if delta:
                        terms.append(Term(delta, _unit(r, b)))
        eqs.append(ReducedEquation(a, terms))
    return ReducedSystem(W, rep, formula, field_class, eqs)


# --------------------------------------------------------------------------
# Rendering


def _nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


def _num(c: float) -> str:
    c = float(c)
    if c == int(c):
        return str(int(c))
    return ("%.10g" % c)


def _signed(parts: list[tuple[float, str]]) -> str:
    """Join (coef, body) pairs into '+ 2x − y'; body '' means a bare number."""
    out = []
    for c, body in parts:
        if c == 0:
            continue
        mag = abs(c)
        txt = _num(mag) if (body == "" or mag != 1) else ""
        piece = txt + body
        if not out:
            out.append(piece if c > 0 else MINUS + piece)
        else:
            out.append(("+ " if c > 0 else MINUS + " ") + piece)
    return " ".join(out)


def _form_text(form, names, own=None) -> str:
    """Linear form, other symbols first and the own symbol last."""
    order = [s for s in range(len(form)) if s != own] + ([own] if own is not None else [])
    parts = [(form[s], names[s]) for s in order if form[s]]
    if not parts:
        return "0"
    s = _signed(parts)
    return s


def render_generic_equation(eq: ReducedEquation, r: int) -> str:
    names = [symbol_name(s + 1) for s in range(r)]
    a = names[eq.symbol]
    parts = [(1, f"g({a})")]
    for t in eq.terms:
        parts.append((t.coef, f"h({_form_text(t.form, names, eq.symbol)})"))
    return _nfc(f"{a}{DOT} = " + _signed(parts))


def vdp_names(r: int) -> list[str]:
    return ["u"] if r == 1 else [f"u{s + 1}" for s in range(r)]


def render_vdp(sys: ReducedSystem, f: VectorFieldSpec) -> list[str]:
    """Second-order form u'' = alpha(1-u^2)u' - u + beta u^2 + coupling."""
    alpha, beta, gamma = f.p("alpha"), f.p("beta"), f.p("gamma")
    delta, eps = f.p("delta"), f.p("eps")
    r = sys.nsym
    names = vdp_names(r)
    odd_h = gamma == 0
    lines = []
    for eq in sys.equations:
        a = eq.symbol
        u = names[a]
        lin = [0.0] * r
        lin[a] = -1.0
        const = 0.0
        self_cubic = 0.0
        cross = []
        for t in eq.terms:
            const += t.coef * gamma
            for s, w in enumerate(t.form):
                lin[s] += t.coef * delta * w
            if eps == 0:
                continue
            if all(w == 0 for s, w in enumerate(t.form) if s != a):
                self_cubic += t.coef * eps * t.form[a] ** 3
            else:
                c, form = t.coef, t.form
                if c < 0 and odd_h:
                    c, form = -c, tuple(-w for w in form)
                cross.append((c, form))
        dotted = u[0] + DOT + u[1:]
        pieces = [(alpha, f"(1{MINUS}{u}²){dotted}")]
        order = [a] + [s for s in range(r) if s != a]
        pieces += [(_clean(lin[s]), names[s]) for s in order]
        pieces.append((beta, f"{u}²"))
        pieces.append((_clean(self_cubic), f"{u}³"))
        pieces.append((_clean(const), ""))
        text = _signed(pieces)
        if cross:
            inner = _signed([(c, f"({_form_text(w, names, a).replace(' ', '')})³") for c, w in cross])
            body = inner if (len(cross) == 1 and cross[0][0] == 1) else f"({inner})"
            grp = _signed([(abs(eps), body)])
            if not text:
                text = grp if eps > 0 else MINUS + grp
            else:
                text += (" + " if eps > 0 else f" {MINUS} ") + grp
        lines.append(_nfc(u[0] + DDOT + u[1:] + " = " + (text or "0")))
    return lines


def _clean(c: float) -> float:
    rc = round(c, 12)
    return 0.0 if rc == 0 else rc


def normalize_equation(s: str) -> str:
    """Comparison key: NFC, no whitespace, ASCII minus mapped to U+2212."""
    s = _nfc(s).replace("-", MINUS)
    return "".join(s.split())
