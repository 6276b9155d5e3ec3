"""Output-side MathML tree shared by the generators, linker and serializer."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .model import Branch, XMathNode

MATHML_NAMESPACE = "http://www.w3.org/1998/Math/MathML"

#: Presentation vocabulary this generator can emit.
PRESENTATION_ELEMENTS = frozenset(
    {"math", "mrow", "mi", "mo", "mn", "msub", "msup", "msubsup"}
)

#: Leaf elements that carry text and no element children.
TOKEN_ELEMENTS = frozenset({"mi", "mo", "mn", "ci", "csymbol", "annotation"})

#: Assembly wrappers; they get ids but never xrefs.
WRAPPER_ELEMENTS = frozenset({"math", "semantics", "annotation-xml", "annotation"})


@dataclass(eq=False)
class TargetNode:
    """One generated MathML node, annotated with its ascribed source.

    ``origin`` records the XMath node that directly generated the target
    (the "current" node of the ascription step); it is diagnostic only
    and never serialized.
    """

    element: str
    attrs: dict[str, str] = field(default_factory=dict)
    children: list["TargetNode"] = field(default_factory=list)
    text: str | None = None
    source: XMathNode | None = None
    branch: Branch | None = None
    origin: XMathNode | None = None

    def iter(self) -> Iterator["TargetNode"]:
        """All nodes of this subtree in document order (pre-order)."""
        yield self
        for child in self.children:
            yield from child.iter()

    def find(self, element: str, text: str | None = None) -> "TargetNode | None":
        """First node in document order matching element (and text, if given)."""
        for node in self.iter():
            if node.element == element and (text is None or node.text == text):
                return node
        return None

    def __repr__(self) -> str:
        bits = [self.element]
        if "id" in self.attrs:
            bits.append(f"id={self.attrs['id']}")
        if self.text:
            bits.append(repr(self.text))
        return "<{}>".format(" ".join(bits))


def same_shape(
    a: TargetNode,
    b: TargetNode,
    *,
    ignore_attrs: Iterable[str] = (),
) -> bool:
    """Structural equality: element, text, attributes and children.

    ``None`` and empty text compare equal, and attribute order is
    irrelevant. ``ignore_attrs`` is typically ("id", "xref").
    """
    ignored = set(ignore_attrs)
    if a.element != b.element:
        return False
    if (a.text or "") != (b.text or ""):
        return False
    attrs_a = {k: v for k, v in a.attrs.items() if k not in ignored}
    attrs_b = {k: v for k, v in b.attrs.items() if k not in ignored}
    if attrs_a != attrs_b:
        return False
    if len(a.children) != len(b.children):
        return False
    return all(
        same_shape(x, y, ignore_attrs=ignored)
        for x, y in zip(a.children, b.children)
    )


def target_from_raw(raw) -> TargetNode:
    """Rebuild a TargetNode tree from a generic parsed XML element.

    Namespace declarations are dropped and prefixes stripped, since only
    local structure matters to the link checker and round-trip tests.
    Whitespace between child elements is discarded.
    """
    attrs = {
        name.rsplit(":", 1)[-1] if name.startswith("xml:") else name: value
        for name, value in raw.attrs.items()
        if name != "xmlns" and not name.startswith("xmlns:")
    }
    node = TargetNode(raw.local, attrs)
    if raw.children:
        node.children = [target_from_raw(child) for child in raw.children]
        node.text = None
    else:
        node.text = raw.text
    return node
