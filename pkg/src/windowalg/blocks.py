"""Text interfaces: polynomial parsing, block files and canonical rendering.

Input files are sequences of blocks.  A block starts with a [name] line
and holds "key = value" lines; matrix rows repeat the key "row".  The
polynomial grammar over the variables u, t1..tr accepts integers, + - *
^ and parentheses.  All parse errors carry a 1-based line and column.
"""

from __future__ import annotations


class ParseError(ValueError):
    def __init__(self, message, line, col):
        super().__init__("line %d, col %d: %s" % (line, col, message))
        self.line = line
        self.col = col


# -- polynomial expressions -------------------------------------------------


def _tokenize(text, line=1):
    tokens = []
    i, col = 0, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t":
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*^()":
            tokens.append((ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError("unexpected character %r" % ch, line, col)
    tokens.append(("end", None, line, col))
    return tokens


class _PolyParser:
    """Recursive descent over the token list, evaluating into a raw table."""

    def __init__(self, tokens, r):
        self.tokens = tokens
        self.pos = 0
        self.r = r

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], tok[3])

    def parse(self):
        tbl = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail("unexpected token %r" % str(tok[1]))
        return tbl

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        tbl = _scal(self.term(), sign)
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            tbl = _addt(tbl, _scal(rhs, -1 if op == "-" else 1))
        return tbl

    def term(self):
        tbl = self.factor()
        while self.peek()[0] == "*":
            self.take()
            tbl = _mult(tbl, self.factor(), self.r)
        return tbl

    def factor(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail("exponent must be an integer", tok)
            out = {(0,) * (self.r + 1): 1}
            for _ in range(tok[1]):
                out = _mult(out, base, self.r)
            return out
        return base

    def atom(self):
        tok = self.take()
        if tok[0] == "int":
            return {(0,) * (self.r + 1): tok[1]}
        if tok[0] == "-":
            return _scal(self.factor(), -1)
        if tok[0] == "(":
            tbl = self.expr()
            closing = self.take()
            if closing[0] != ")":
                self.fail("expected ')'", closing)
            return tbl
        if tok[0] == "name":
            key = [0] * (self.r + 1)
            if tok[1] == "u":
                key[-1] = 1
                return {tuple(key): 1}
            if tok[1].startswith("t") and tok[1][1:].isdigit():
                i = int(tok[1][1:])
                if 1 <= i <= self.r:
                    key[i - 1] = 1
                    return {tuple(key): 1}
                self.fail("variable %s out of range (r = %d)" % (tok[1], self.r), tok)
            self.fail("unknown variable %r" % tok[1], tok)
        self.fail("expected a polynomial atom", tok)


def _addt(f, g):
    out = dict(f)
    for k, c in g.items():
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def _scal(f, n):
    return {k: c * n for k, c in f.items() if c * n}


def _mult(f, g, r):
    out = {}
    for k1, c1 in f.items():
        for k2, c2 in g.items():
            key = tuple(a + b for a, b in zip(k1, k2))
            out[key] = out.get(key, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def parse_poly(text, r, line=1):
    """Parse an integer polynomial in u, t1..tr into a raw table."""
    return _PolyParser(_tokenize(text, line), r).parse()


# -- canonical rendering ------------------------------------------------------


def _mono_str(key, r, uvar="u"):
    parts = []
    for i in range(r):
        if key[i] == 1:
            parts.append("t%d" % (i + 1))
        elif key[i] > 1:
            parts.append("t%d^%d" % (i + 1, key[i]))
    j = key[-1]
    if j == 1:
        parts.append(uvar)
    elif j > 1:
        parts.append("%s^%d" % (uvar, j))
    return "*".join(parts)


def render_table(tbl, r, uvar="u"):
    """Deterministic rendering: graded lexicographic monomial order,
    least non-negative residues."""
    if not tbl:
        return "0"
    terms = []
    # ascending total degree; within a degree, t1 > t2 > ... > u
    for key in sorted(tbl, key=lambda k: (sum(k), tuple(-x for x in k))):
        c = tbl[key]
        mono = _mono_str(key, r, uvar)
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append("%d*%s" % (c, mono))
    return " + ".join(terms)


# -- block files --------------------------------------------------------------


class Block:
    def __init__(self, name, line):
        self.name = name
        self.line = line
        self.entries = []  # (key, value-string, line, col-of-value)

    def get(self, key, default=None):
        for k, v, _, _ in self.entries:
            if k == key:
                return v
        return default

    def get_int(self, key, default=None):
        for k, v, line, col in self.entries:
            if k == key:
                try:
                    return int(v)
                except ValueError:
                    raise ParseError("%s must be an integer" % key, line, col) from None
        if default is None:
            raise ParseError("missing key %r" % key, self.line, 1)
        return default

    def rows(self):
        return [(v, line, col) for k, v, line, col in self.entries if k == "row"]


def parse_blocks(text):
    blocks = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated block header", lineno, len(line))
            current = Block(stripped[1:-1].strip(), lineno)
            blocks.append(current)
            continue
        if current is None:
            raise ParseError("content before any [block] header", lineno, 1)
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, 1)
        key, value = line.split("=", 1)
        col = line.index("=") + 2
        current.entries.append((key.strip(), value.strip(), lineno, col))
    return blocks


def build_frame(block):
    from .series import Frame

    p = block.get_int("p")
    r = block.get_int("r")
    e = block.get_int("e")
    a = block.get_int("a")
    N = block.get_int("N")
    D = block.get_int("D")
    L = block.get_int("L")
    etext = block.get("E")
    if etext is None:
        raise ParseError("missing key 'E'", block.line, 1)
    eline = next(line for k, v, line, _ in block.entries if k == "E")
    ecol = next(col for k, v, line, col in block.entries if k == "E")
    try:
        tbl = parse_poly(etext, r, line=eline)
    except ParseError as err:
        raise ParseError(str(err).split(": ", 1)[1], eline, ecol + err.col - 1) from None
    return Frame.make(p, r, e, a, N, D, L, tbl)


def parse_matrix_rows(frame, block, tag="S"):
    rows = []
    width = None
    for text, line, col in block.rows():
        cells = text.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError("ragged matrix row", line, col)
        row = []
        for cell in cells:
            try:
                tbl = parse_poly(cell, frame.r, line=line)
            except ParseError as err:
                raise ParseError(str(err).split(": ", 1)[1], line, col) from None
            row.append(frame.elem(tbl, tag))
        rows.append(tuple(row))
    if not rows:
        raise ParseError("block %r has no rows" % block.name, block.line, 1)
    return tuple(rows)


def build_window(frame, block):
    from .window import make_window

    level = block.get_int("a", frame.a)
    d = block.get_int("d")
    c = block.get_int("c")
    wframe = frame.at_level(level)
    rows = parse_matrix_rows(wframe, block)
    return make_window(wframe, d, c, rows)
