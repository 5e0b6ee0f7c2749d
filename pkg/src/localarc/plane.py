"""Two presentations of the projective plane PG(2, q) over GF(q).

Points and lines are plain integer ids in [0, q^2 + q + 1); id order is the
canonical order used everywhere else in the package.

Homogeneous presentation (any q): a point is a projective triple
(x0 : x1 : x2), a line a triple <l0 : l1 : l2>, incidence is a vanishing dot
product.  Triples are normalised so the first nonzero coordinate is 1 and
packed as

    (1 : u : v)  -> u*q + v        (0 : 1 : c) -> q^2 + c      (0:0:1) -> q^2 + q

with the same layout for lines.

Planar presentation (odd q): affine points (x, y), slope points (z) and one
extra point (inf); lines [a, b], verticals [c] and one line [inf].  A point
(x, y) lies on [a, b] when y - b = (x - a)^2, on [c] when x = c; a slope
point (z) lies on [a, b] when z = a and on [inf]; (inf) lies on every [c]
and on [inf].  Ids follow the same packing, affine first, then slopes, then
the extra point.  The quadratic incidence rule needs 2 to be invertible, so
this presentation refuses characteristic 2.

Both presentations describe the same abstract plane; convert_point and
convert_line move ids between them through the maps

    (x, y) -> (1 : x : y - x^2)     (z) -> (0 : 1 : -2z)     (inf) -> (0 : 0 : 1)
    [a, b] -> <a^2 + b : -2a : -1>  [c] -> <-c : 1 : 0>      [inf] -> <1 : 0 : 0>

which carry one incidence relation exactly onto the other.
"""

from __future__ import annotations

from localarc.gf import Field, is_prime, make_field

__all__ = [
    "EvenCharPlanar",
    "Plane",
    "make_plane",
    "convert_point",
    "convert_line",
]


class EvenCharPlanar(ValueError):
    """The planar presentation is undefined in characteristic 2."""


def _as_field(field_or_q) -> Field:
    if isinstance(field_or_q, Field):
        return field_or_q
    q = int(field_or_q)
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
        if p * p > q:
            p = q
            break
    m = 0
    t = q
    while t % p == 0:
        t //= p
        m += 1
    if t != 1 or not is_prime(p):
        raise ValueError(f"{q} is not a prime power")
    return make_field(p, m)


def _planar_closures(field: Field):
    q = field.q
    q2 = q * q
    ILINE = q2 + q
    IPT = q2 + q
    add, sub, mul, inv = field.add, field.sub, field.mul, field.inv
    inv2 = inv(2 % field.p)

    def join(u, v):
        # distinct point ids -> id of the unique common line
        if u > v:
            u, v = v, u
        if u >= q2:
            return ILINE
        x0, y0 = divmod(u, q)
        if v < q2:
            x1, y1 = divmod(v, q)
            if x0 == x1:
                return q2 + x0
            s = mul(sub(y0, y1), inv(sub(x0, x1)))
            a = mul(sub(add(x0, x1), s), inv2)
            d = sub(x0, a)
            return a * q + sub(y0, mul(d, d))
        if v == IPT:
            return q2 + x0
        z = v - q2
        d = sub(x0, z)
        return z * q + sub(y0, mul(d, d))

    def meet(u, v):
        # distinct line ids -> id of the unique common point
        if u > v:
            u, v = v, u
        if u >= q2:
            return IPT
        a0, b0 = divmod(u, q)
        if v < q2:
            a1, b1 = divmod(v, q)
            if a0 == a1:
                return q2 + a0
            num = add(sub(b1, b0), sub(mul(a1, a1), mul(a0, a0)))
            x = mul(num, inv(mul(2 % field.p, sub(a1, a0))))
            d = sub(x, a0)
            return x * q + add(b0, mul(d, d))
        if v == ILINE:
            return q2 + a0
        c = v - q2
        d = sub(c, a0)
        return c * q + add(b0, mul(d, d))

    def incident(pid, lid):
        if lid < q2:
            a, b = divmod(lid, q)
            if pid < q2:
                x, y = divmod(pid, q)
                d = sub(x, a)
                return sub(y, b) == mul(d, d)
            if pid < IPT:
                return pid - q2 == a
            return False
        if lid < ILINE:
            c = lid - q2
            if pid < q2:
                return pid // q == c
            return pid == IPT
        return pid >= q2

    def points_on(lid):
        if lid < q2:
            a, b = divmod(lid, q)
            pts = [x * q + add(b, mul(sub(x, a), sub(x, a))) for x in range(q)]
            pts.append(q2 + a)
            return tuple(pts)
        if lid < ILINE:
            c = lid - q2
            return tuple(c * q + y for y in range(q)) + (IPT,)
        return tuple(range(q2, q2 + q + 1))

    def lines_through(pid):
        if pid < q2:
            x, y = divmod(pid, q)
            lns = [a * q + sub(y, mul(sub(x, a), sub(x, a))) for a in range(q)]
            lns.append(q2 + x)
            return tuple(lns)
        if pid < IPT:
            z = pid - q2
            return tuple(z * q + b for b in range(q)) + (ILINE,)
        return tuple(range(q2, q2 + q + 1))

    return join, meet, incident, points_on, lines_through


def _homog_closures(field: Field):
    q = field.q
    q2 = q * q
    LAST = q2 + q
    add, sub, mul, inv, neg = field.add, field.sub, field.mul, field.inv, field.neg

    def unpack(i):
        if i < q2:
            return 1, i // q, i % q
        if i < LAST:
            return 0, 1, i - q2
        return 0, 0, 1

    def pack(c0, c1, c2):
        if c0:
            if c0 != 1:
                t = inv(c0)
                c1 = mul(c1, t)
                c2 = mul(c2, t)
            return c1 * q + c2
        if c1:
            if c1 != 1:
                c2 = mul(c2, inv(c1))
            return q2 + c2
        return LAST

    def cross(u, v):
        a0, a1, a2 = unpack(u)
        b0, b1, b2 = unpack(v)
        return pack(
            sub(mul(a1, b2), mul(a2, b1)),
            sub(mul(a2, b0), mul(a0, b2)),
            sub(mul(a0, b1), mul(a1, b0)),
        )

    def incident(pid, lid):
        x0, x1, x2 = unpack(pid)
        l0, l1, l2 = unpack(lid)
        return add(add(mul(x0, l0), mul(x1, l1)), mul(x2, l2)) == 0

    def solutions(tid):
        # all ids whose triple is orthogonal to the triple of tid
        l0, l1, l2 = unpack(tid)
        if l2:
            t = neg(inv(l2))
            out = [u * q + mul(t, add(l0, mul(l1, u))) for u in range(q)]
            out.append(q2 + mul(t, l1))
            return tuple(sorted(out))
        if l1:
            u = neg(mul(l0, inv(l1)))
            return tuple(u * q + v for v in range(q)) + (LAST,)
        return tuple(range(q2, q2 + q + 1))

    return cross, cross, incident, solutions, solutions


class Plane:
    """PG(2, q) in one presentation, with closure-based incidence kernels."""

    def __init__(self, field: Field, kind: str = "planar"):
        if kind not in ("planar", "homogeneous"):
            raise ValueError(f"unknown presentation {kind!r}")
        if kind == "planar" and field.p == 2:
            raise EvenCharPlanar("planar presentation needs odd characteristic")
        self.field = field
        self.kind = kind
        self.q = field.q
        self.n_points = self.q * self.q + self.q + 1
        self.n_lines = self.n_points
        build = _planar_closures if kind == "planar" else _homog_closures
        self.join, self.meet, self.incident, self.points_on, self.lines_through = build(field)
        self.infinity_point = self.q * self.q + self.q
        self.infinity_line = self.q * self.q + self.q

    # -- checked wrappers ---------------------------------------------------

    def line_through(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("two distinct points are needed")
        return self.join(u, v)

    def meet_of(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("two distinct lines are needed")
        return self.meet(u, v)

    def point_ids(self) -> range:
        return range(self.n_points)

    def line_ids(self) -> range:
        return range(self.n_lines)

    def affine_point(self, x: int, y: int) -> int:
        return x * self.q + y

    def slope_point(self, z: int) -> int:
        return self.q * self.q + z

    def affine_line(self, a: int, b: int) -> int:
        return a * self.q + b

    def vertical_line(self, c: int) -> int:
        return self.q * self.q + c

    # -- literals -------------------------------------------------------------
    #
    # Field elements print as plain residues over prime fields and as
    # little-endian coefficient arrays over extension fields, e.g. the
    # GF(9) element with encoding 5 prints as [2,1].

    def _fmt(self, enc: int) -> str:
        f = self.field
        if f.m == 1:
            return str(enc)
        digits = []
        for _ in range(f.m):
            digits.append(enc % f.p)
            enc //= f.p
        return "[" + ",".join(str(d) for d in digits) + "]"

    def _parse_elem(self, token: str) -> int:
        f = self.field
        token = token.strip()
        if f.m == 1:
            e = int(token)
            if not 0 <= e < f.p:
                raise ValueError(f"residue {e} outside [0, {f.p})")
            return e
        if not (token.startswith("[") and token.endswith("]")):
            raise ValueError(f"expected a coefficient array, got {token!r}")
        digits = [int(t) for t in token[1:-1].split(",")]
        if len(digits) != f.m or not all(0 <= d < f.p for d in digits):
            raise ValueError(f"bad coefficient array {token!r}")
        e = 0
        for d in reversed(digits):
            e = e * f.p + d
        return e

    def point_str(self, pid: int) -> str:
        q, q2 = self.q, self.q * self.q
        fmt = self._fmt
        if self.kind == "planar":
            if pid < q2:
                return f"({fmt(pid // q)},{fmt(pid % q)})"
            if pid < q2 + q:
                return f"({fmt(pid - q2)})"
            return "(inf)"
        if pid < q2:
            return f"({fmt(1)}:{fmt(pid // q)}:{fmt(pid % q)})"
        if pid < q2 + q:
            return f"({fmt(0)}:{fmt(1)}:{fmt(pid - q2)})"
        return f"({fmt(0)}:{fmt(0)}:{fmt(1)})"

    def line_str(self, lid: int) -> str:
        q, q2 = self.q, self.q * self.q
        fmt = self._fmt
        if self.kind == "planar":
            if lid < q2:
                return f"[{fmt(lid // q)},{fmt(lid % q)}]"
            if lid < q2 + q:
                return f"[{fmt(lid - q2)}]"
            return "[inf]"
        if lid < q2:
            return f"<{fmt(1)}:{fmt(lid // q)}:{fmt(lid % q)}>"
        if lid < q2 + q:
            return f"<{fmt(0)}:{fmt(1)}:{fmt(lid - q2)}>"
        return f"<{fmt(0)}:{fmt(0)}:{fmt(1)}>"

    @staticmethod
    def _split_top(body: str, sep: str) -> list[str]:
        # split on sep at bracket depth 0 only
        parts, depth, cur = [], 0, []
        for ch in body:
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
            if ch == sep and depth == 0:
                parts.append("".join(cur))
                cur = []
            else:
                cur.append(ch)
        parts.append("".join(cur))
        return parts

    def _parse(self, s: str, open_: str, close: str) -> int:
        s = s.strip()
        if not (s.startswith(open_) and s.endswith(close)):
            raise ValueError(f"cannot parse {s!r}")
        body = s[1:-1].strip()
        q, q2 = self.q, self.q * self.q
        if self.kind == "planar":
            if body == "inf":
                return q2 + q
            parts = self._split_top(body, ",")
            if len(parts) == 1:
                return q2 + self._parse_elem(parts[0])
            if len(parts) == 2:
                return self._parse_elem(parts[0]) * q + self._parse_elem(parts[1])
            raise ValueError(f"cannot parse {s!r}")
        parts = [self._parse_elem(t) for t in body.split(":")]
        if len(parts) != 3:
            raise ValueError(f"cannot parse {s!r}")
        c0, c1, c2 = parts
        if c0 == 1:
            return c1 * q + c2
        if c0 == 0 and c1 == 1:
            return q2 + c2
        if c0 == 0 and c1 == 0 and c2 == 1:
            return q2 + q
        raise ValueError(f"{s!r} is not normalised (first nonzero must be 1)")

    def parse_point(self, s: str) -> int:
        return self._parse(s, "(", ")")

    def parse_line(self, s: str) -> int:
        if self.kind == "planar":
            return self._parse(s, "[", "]")
        return self._parse(s, "<", ">")

    def __repr__(self):
        return f"Plane(q={self.q}, {self.kind})"


def make_plane(field_or_q, kind: str = "planar") -> Plane:
    return Plane(_as_field(field_or_q), kind)


def _check_pair(src: Plane, dst: Plane):
    if src.field is not dst.field:
        raise ValueError("presentations over different fields")
    if src.kind == dst.kind:
        return False
    if "planar" in (src.kind, dst.kind) and src.field.p == 2:
        raise EvenCharPlanar("planar presentation needs odd characteristic")
    return True


def convert_point(src: Plane, dst: Plane, pid: int) -> int:
    """Carry a point id between the two presentations of the same plane."""
    if not _check_pair(src, dst):
        return pid
    f = src.field
    q, q2 = src.q, src.q * src.q
    if src.kind == "planar":
        if pid < q2:
            x, y = divmod(pid, q)
            return x * q + f.sub(y, f.mul(x, x))  # (1 : x : y - x^2)
        if pid < q2 + q:
            z = pid - q2
            return q2 + f.neg(f.mul(2 % f.p, z))  # (0 : 1 : -2z)
        return q2 + q
    if pid < q2:
        u, v = divmod(pid, q)
        return u * q + f.add(v, f.mul(u, u))
    if pid < q2 + q:
        c = pid - q2
        half = f.inv(2 % f.p)
        return q2 + f.neg(f.mul(c, half))
    return q2 + q


def convert_line(src: Plane, dst: Plane, lid: int) -> int:
    """Carry a line id between the two presentations of the same plane."""
    if not _check_pair(src, dst):
        return lid
    f = src.field
    q, q2 = src.q, src.q * src.q
    two = 2 % f.p
    if src.kind == "planar":
        if lid < q2:
            a, b = divmod(lid, q)
            l0 = f.add(f.mul(a, a), b)  # <a^2 + b : -2a : -1>
            l1 = f.neg(f.mul(two, a))
            l2 = f.neg(1)
            if l0:
                t = f.inv(l0)
                return f.mul(l1, t) * q + f.mul(l2, t)
            if l1:
                return q2 + f.mul(l2, f.inv(l1))
            return q2 + q  # [0,0] maps to <0:0:-1>
        if lid < q2 + q:
            c = lid - q2
            l0 = f.neg(c)  # <-c : 1 : 0>
            if l0:
                return f.inv(l0) * q
            return q2
        return 0  # <1 : 0 : 0>
    # homogeneous -> planar: undo the map above
    if lid < q2:
        l1, l2 = divmod(lid, q)
        l0 = 1
    elif lid < q2 + q:
        l0, l1, l2 = 0, 1, lid - q2
    else:
        l0, l1, l2 = 0, 0, 1
    if l2:
        s = f.neg(f.inv(l2))  # rescale so the last coordinate is -1
        a = f.mul(f.neg(f.mul(s, l1)), f.inv(two))
        b = f.sub(f.mul(s, l0), f.mul(a, a))
        return a * q + b
    if l1:
        c = f.neg(f.mul(l0, f.inv(l1)))
        return q2 + c
    return q2 + q
