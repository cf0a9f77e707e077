"""Exact multivariate polynomials and conewise polynomial functions on
simplicial fans.

Grading convention: a conewise function built from polynomials of total
degree k has grading 2k (linear forms sit in grading 2).  All per-cone
polynomials of one function must be homogeneous of the same degree and
agree on shared faces.
"""

from __future__ import annotations

from .exactlin import ONE, ZERO, format_scalar, sc, sparse_kernel
from . import fans
from .fans import Fan, vdot


# -- polynomials -----------------------------------------------------------


def monomials(n, k):
    """All exponent tuples of total degree k in n variables, lex order."""
    if n == 0:
        return [()] if k == 0 else []
    out = []
    for e0 in range(k, -1, -1):
        for rest in monomials(n - 1, k - e0):
            out.append((e0,) + rest)
    return out


class Polynomial:
    """Homogeneous-friendly sparse polynomial with exact coefficients."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n, coeffs=None):
        self.n = n
        self.coeffs = {}
        if coeffs:
            for e, c in coeffs.items():
                c = sc(c)
                if c:
                    self.coeffs[tuple(e)] = c

    @staticmethod
    def zero(n):
        return Polynomial(n)

    @staticmethod
    def constant(n, c):
        return Polynomial(n, {tuple([0] * n): sc(c)})

    @staticmethod
    def from_linear(form):
        n = len(form)
        coeffs = {}
        for i, c in enumerate(form):
            if c:
                e = [0] * n
                e[i] = 1
                coeffs[tuple(e)] = c
        return Polynomial(n, coeffs)

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.n == other.n and \
            self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.coeffs.items()))))

    def degree(self):
        """Total degree; -1 for the zero polynomial.  Asserts homogeneity."""
        if not self.coeffs:
            return -1
        degs = {sum(e) for e in self.coeffs}
        if len(degs) != 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop()

    def add(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.n, out)

    def sub(self, other):
        return self.add(other.scale(sc(-1)))

    def scale(self, c):
        c = sc(c)
        if not c:
            return Polynomial(self.n)
        return Polynomial(self.n, {e: c * v for e, v in self.coeffs.items()})

    def mul(self, other):
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial(self.n, out)

    def mul_var(self, i):
        out = {}
        for e, c in self.coeffs.items():
            e2 = list(e)
            e2[i] += 1
            out[tuple(e2)] = c
        return Polynomial(self.n, out)

    def evaluate(self, point):
        total = ZERO
        for e, c in self.coeffs.items():
            term = c
            for i, p in enumerate(e):
                for _ in range(p):
                    term = term * point[i]
            total = total + term
        return total

    def substitute_var(self, i, repl):
        """Replace x_i by the polynomial repl (in the same variables)."""
        out = Polynomial(self.n)
        for e, c in self.coeffs.items():
            p = e[i]
            base = list(e)
            base[i] = 0
            term = Polynomial(self.n, {tuple(base): c})
            for _ in range(p):
                term = term.mul(repl)
            out = out.add(term)
        return out

    def compose(self, rows):
        """Substitute x_i = rows[i] . y; rows has n covectors of length m.
        Returns a polynomial in m variables."""
        m = len(rows[0]) if rows else 0
        forms = [Polynomial.from_linear(r) for r in rows]
        out = Polynomial(m)
        for e, c in self.coeffs.items():
            term = Polynomial.constant(m, c)
            for i, p in enumerate(e):
                for _ in range(p):
                    term = term.mul(forms[i])
            out = out.add(term)
        return out

    def reduce_mod(self, equations):
        """Substitute away the pivot variables of an echelonized equation
        list [(pivot, row)] (rows normalized so row[pivot] = 1); the result
        is the canonical representative modulo the span's annihilator."""
        p = self
        for piv, row in equations:
            if not any(e[piv] for e in p.coeffs):
                continue
            repl = {}
            for j, c in enumerate(row):
                if j != piv and c:
                    e = [0] * self.n
                    e[j] = 1
                    repl[tuple(e)] = -c
            p = p.substitute_var(piv, Polynomial(self.n, repl))
        return p

    def divide_by_linear(self, form):
        """Exact division by a linear form; None when not divisible."""
        j = next((i for i, c in enumerate(form) if c), None)
        if j is None:
            raise ValueError("division by the zero form")
        cj = form[j]
        q = Polynomial(self.n)
        rem = self
        while True:
            top = max((e[j] for e in rem.coeffs), default=0)
            if top == 0:
                break
            part = {}
            for e, c in rem.coeffs.items():
                if e[j] == top:
                    e2 = list(e)
                    e2[j] -= 1
                    part[tuple(e2)] = c / cj
            piece = Polynomial(self.n, part)
            q = q.add(piece)
            rem = rem.sub(piece.mul(Polynomial.from_linear(form)))
        return q if rem.is_zero() else None

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for e in sorted(self.coeffs):
            mono = "*".join(f"x{i}^{p}" if p > 1 else f"x{i}"
                            for i, p in enumerate(e) if p)
            c = format_scalar(self.coeffs[e])
            bits.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def restrict_to_span(p: Polynomial, cone: fans.Cone):
    """Restriction of p to span(cone) in the coordinates of the
    deterministic span basis (first independent generators); returns a
    polynomial in cone.dim variables."""
    basis = cone.span_basis()
    rows = [tuple(b[i] for b in basis) for i in range(cone.n)]
    return p.compose(rows)


# -- conewise functions ----------------------------------------------------


class ConewiseFunction:
    """Per-maximal-cone polynomials on a simplicial fan, homogeneous of
    degree grading/2 and compatible on shared faces."""

    __slots__ = ("fan", "grading", "per_max")

    def __init__(self, fan: Fan, grading, per_max, check=True):
        if grading % 2:
            raise ValueError("grading must be even")
        self.fan = fan
        self.grading = grading
        self.per_max = dict(per_max)
        if check:
            self.validate()

    def validate(self):
        if set(self.per_max) != set(self.fan.maximal_ids):
            raise ValueError("need exactly one polynomial per maximal cone")
        k = self.grading // 2
        for p in self.per_max.values():
            if p.n != self.fan.n:
                raise ValueError("wrong variable count")
            if not p.is_zero() and p.degree() != k:
                raise ValueError("polynomial degree does not match grading")
        mx = self.fan.maximal_ids
        for i, a in enumerate(mx):
            for b in mx[i + 1:]:
                meet = self.fan.cones[self.fan.meet_id(a, b)]
                diff = self.per_max[a].sub(self.per_max[b])
                if not diff.reduce_mod(meet.equations()).is_zero():
                    raise ValueError(
                        "polynomials disagree on the shared face of cones "
                        f"{a} and {b}")

    def value(self, x):
        for m in self.fan.maximal_ids:
            if self.fan.cones[m].contains(x):
                return self.per_max[m].evaluate(x)
        raise ValueError("point outside the fan support")

    def scale(self, c):
        return ConewiseFunction(self.fan, self.grading,
                                {m: p.scale(c) for m, p in self.per_max.items()},
                                check=False)

    def add(self, other):
        if other.grading != self.grading or other.fan is not self.fan:
            raise ValueError("grading or fan mismatch")
        return ConewiseFunction(self.fan, self.grading,
                                {m: p.add(other.per_max[m])
                                 for m, p in self.per_max.items()},
                                check=False)

    def is_zero(self):
        return all(p.is_zero() for p in self.per_max.values())


def multiply(f: ConewiseFunction, g: ConewiseFunction):
    if f.fan is not g.fan and f.fan != g.fan:
        raise ValueError("functions live on different fans")
    return ConewiseFunction(f.fan, f.grading + g.grading,
                            {m: f.per_max[m].mul(g.per_max[m])
                             for m in f.per_max},
                            check=False)


def multiply_pl(l: fans.PLFunction, f: ConewiseFunction):
    """Multiply by a conewise linear function given per coarse maximal
    cone of the same fan."""
    return ConewiseFunction(
        f.fan, f.grading + 2,
        {m: f.per_max[m].mul(Polynomial.from_linear(l.per_max[m]))
         for m in f.per_max},
        check=False)


def sections_basis(fan: Fan, grading):
    """Deterministic basis of the conewise polynomial functions of the
    given grading on a simplicial fan, via the face-compatibility kernel."""
    if grading % 2:
        raise ValueError("grading must be even")
    if not fan.is_simplicial():
        raise ValueError("sections_basis needs a simplicial fan")
    k = grading // 2
    mx = list(fan.maximal_ids)
    monos = monomials(fan.n, k)
    col = {}
    for m in mx:
        for e in monos:
            col[(m, e)] = len(col)
    rows = []
    for i, a in enumerate(mx):
        for b in mx[i + 1:]:
            meet = fan.cones[fan.meet_id(a, b)]
            if meet.dim == 0 and k > 0:
                continue
            eqs = meet.equations()
            residual = {}
            for m, sign in ((a, ONE), (b, sc(-1))):
                for e in monos:
                    red = Polynomial(fan.n, {e: ONE}).reduce_mod(eqs)
                    for re, rc in red.coeffs.items():
                        row = residual.setdefault(re, {})
                        c = row.get(col[(m, e)], ZERO) + sign * rc
                        if c:
                            row[col[(m, e)]] = c
                        else:
                            row.pop(col[(m, e)], None)
            rows.extend(residual.values())
    kern = sparse_kernel(rows, len(col))
    out = []
    for v in kern:
        per = {}
        for m in mx:
            coeffs = {}
            for e in monos:
                c = v.get(col[(m, e)])
                if c:
                    coeffs[e] = c
            per[m] = Polynomial(fan.n, coeffs)
        out.append(ConewiseFunction(fan, grading, per, check=False))
    return out


def pullback(f: ConewiseFunction, rows, target_fan: Fan):
    """Pull back along the linear map x -> rows . x from the target fan's
    ambient space to f's; every target cone must map into a single cone of
    f's fan."""
    per = {}
    for m in target_fan.maximal_ids:
        images = [tuple(vdot(r, ray) for r in rows)
                  for ray in target_fan.cones[m].rays]
        src = None
        for s in f.fan.maximal_ids:
            if all(f.fan.cones[s].contains(im) for im in images):
                src = s
                break
        if src is None:
            raise ValueError("a target cone does not map into a single "
                             "source cone")
        per[m] = f.per_max[src].compose(rows)
    return ConewiseFunction(target_fan, f.grading, per, check=False)


def vanishes_on_boundary(f: ConewiseFunction, boundary_ids):
    """True when f restricts to zero on every listed cone of its fan."""
    for bid in boundary_ids:
        c = f.fan.cones[bid]
        owner = next((m for m in f.fan.maximal_ids
                      if bid == m or bid in f.fan.faces_of[m]), None)
        if owner is None:
            raise ValueError("boundary cone is not a face of a maximal cone")
        if not f.per_max[owner].reduce_mod(c.equations()).is_zero():
            return False
    return True


# -- serialization ---------------------------------------------------------


def _exp_key(e):
    return ",".join(str(x) for x in e)


def _parse_exp(s, n):
    parts = [p for p in str(s).split(",") if p != ""]
    e = tuple(int(p) for p in parts)
    if len(e) != n or any(x < 0 for x in e):
        raise ValueError(f"bad exponent tuple {s!r}")
    return e


def section_to_json_dict(f: ConewiseFunction):
    per = {}
    for m in sorted(f.per_max):
        per[str(m)] = {_exp_key(e): format_scalar(c)
                       for e, c in sorted(f.per_max[m].coeffs.items())}
    return {"grading": f.grading, "per_cone": per}


def section_from_json_dict(obj, fan: Fan):
    grading = int(obj["grading"])
    field = fan.field
    per = {}
    for key, entry in obj["per_cone"].items():
        m = int(key)
        if m not in fan.cones:
            raise ValueError(f"unknown cone id {m}")
        coeffs = {}
        for es, cs in entry.items():
            e = _parse_exp(es, fan.n)
            coeffs[e] = field.parse(cs) if isinstance(cs, str) else sc(cs)
        per[m] = Polynomial(fan.n, coeffs)
    for m in fan.maximal_ids:
        per.setdefault(m, Polynomial(fan.n))
    return ConewiseFunction(fan, grading, per)
