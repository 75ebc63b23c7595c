"""Penn-style bracketed parse trees.

Grammar: tree = "(" label (token | tree+) ")". A node carries children or a
leaf token, never both. serialize_tree is the inverse of parse_ptb_tree on
single-space-normalized bracketings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional


class TreeParseError(ValueError):
    """Unbalanced or malformed bracketing; message carries the character offset."""


@dataclass(frozen=True)
class ParseTree:
    label: str
    children: tuple["ParseTree", ...] = ()
    token: Optional[str] = None

    def __post_init__(self) -> None:
        if bool(self.children) == (self.token is not None):
            raise ValueError("a node carries children or a token, never both or neither")

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self) -> list[str]:
        if self.is_leaf:
            return [self.token]
        out: list[str] = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def walk(self) -> Iterator["ParseTree"]:
        """Pre-order traversal, self first."""
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class _Scanner:
    text: str
    pos: int = 0
    _ws: str = field(default=" \t\n\r", repr=False)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in self._ws:
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, why: str) -> TreeParseError:
        return TreeParseError(f"{why} at offset {self.pos}")

    def atom(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in "() \t\n\r":
            self.pos += 1
        return self.text[start : self.pos]


def _parse_node(sc: _Scanner) -> ParseTree:
    if sc.peek() != "(":
        raise sc.fail("expected '('")
    sc.pos += 1
    sc.skip_ws()
    label = sc.atom()
    if not label:
        raise sc.fail("empty constituent label")
    sc.skip_ws()
    if sc.peek() == "(":
        children = []
        while sc.peek() == "(":
            children.append(_parse_node(sc))
            sc.skip_ws()
        if sc.peek() != ")":
            raise sc.fail("expected ')'")
        sc.pos += 1
        return ParseTree(label=label, children=tuple(children))
    token = sc.atom()
    if not token:
        raise sc.fail("constituent has neither token nor children")
    sc.skip_ws()
    if sc.peek() != ")":
        raise sc.fail("expected ')'")
    sc.pos += 1
    return ParseTree(label=label, token=token)


def parse_ptb_tree(text: str) -> ParseTree:
    sc = _Scanner(text)
    sc.skip_ws()
    tree = _parse_node(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise sc.fail("trailing text after tree")
    return tree


def serialize_tree(tree: ParseTree) -> str:
    if tree.is_leaf:
        return f"({tree.label} {tree.token})"
    inner = " ".join(serialize_tree(c) for c in tree.children)
    return f"({tree.label} {inner})"
