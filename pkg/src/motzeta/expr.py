"""Tokenizer and recursive-descent parser shared by the motive, series and polynomial grammars.

The parser only builds a small tuple AST; interpretation lives with each value type:

    ("num", int)                integer literal
    ("sym", name)               identifier
    ("call", name, [args])      function application, e.g. gen(-1, 2)
    ("neg", a)
    ("add" | "sub" | "mul" | "div", a, b)
    ("pow", a, int)             exponent is a signed integer literal
"""

import re

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        col = m.start(m.lastindex) + 1
        if m.group(1):
            tokens.append(("num", int(m.group(1)), col))
        elif m.group(2):
            tokens.append(("id", m.group(2), col))
        else:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", column=col)
            tokens.append(("op", ch, col))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, column=tok[2])

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise self.error(f"expected {op!r}", tok)

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return ("neg", self.unary())
        if self.peek()[0] == "op" and self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in "+-":
                sign = -1 if self.take()[1] == "-" else 1
            tok = self.take()
            if tok[0] != "num":
                raise self.error("exponent must be an integer literal", tok)
            node = ("pow", node, sign * tok[1])
        return node

    def atom(self):
        tok = self.take()
        if tok[0] == "num":
            return ("num", tok[1])
        if tok[0] == "id":
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                self.take()
                args = [self.expr()]
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                return ("call", tok[1], args)
            return ("sym", tok[1])
        if tok[0] == "op" and tok[1] == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise self.error("unexpected end of expression" if tok[0] == "end"
                         else f"unexpected token {tok[1]!r}", tok)


def parse_expr(text):
    return _Parser(text).parse()


def int_value(node):
    """Evaluate an AST that must be a (signed) integer literal."""
    if node[0] == "num":
        return node[1]
    if node[0] == "neg":
        return -int_value(node[1])
    raise ParseError("expected an integer")
